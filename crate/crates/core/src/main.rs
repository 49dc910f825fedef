fn main() {
    std::process::exit(kuratowski_core::cli::main_with_args(std::env::args_os()));
}
