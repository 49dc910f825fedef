//! The `kuratowski` command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::counts::closed_form_counts;
use crate::equality::term_equal;
use crate::error::{Error, Result};
use crate::lattice::{distributive_closure, meet_semilattice_terms};
use crate::poset::{build_order, emit_hasse, unary_terms, HasseFormat, OperationPoset};
use crate::saturation::{
    demo_closed_form, ej_sequence, evens, growth_probe, max_on_space, max_over_spaces, phi_iterate,
    saturate, OpSet, DEFAULT_CAP,
};
use crate::tables::{table1, table2, Defaults, Method};
use crate::term::Term;
use crate::topology::{validate_space, SpaceFile, TopSpace, ValidationConfig};
use crate::unary::{normalize_unary, UnaryWord};

/// Environment variable read for the worker count.
pub const WORKERS_ENV: &str = "KURATOWSKI_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "kuratowski", version, about = "Closure-algebra workbench")]
pub struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Family sizes from one initial set, every operation subset.
    Table1 {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Family sizes from n initial sets.
    Table2 {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Largest family generated by the given operations.
    Count {
        /// Operation flags over k, i, c, ^, v (`I` for none).
        #[arg(long)]
        ops: OpSet,
        #[arg(long, default_value_t = 1)]
        gens: usize,
        /// Search every space with at most this many points.
        #[arg(long, conflicts_with = "space")]
        max_points: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        /// Restrict the search to the space in this JSON file.
        #[arg(long)]
        space: Option<PathBuf>,
        /// Write the witness family as JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Covering diagram of an operation order.
    Hasse {
        family: HasseFamily,
        #[arg(long, default_value = "dot")]
        format: HasseFormat,
        #[arg(long)]
        max_points: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Iterates of an infinite-family construction on a prefix space.
    InfiniteDemo {
        variant: DemoVariant,
        /// Points of the prefix space.
        #[arg(long)]
        n: usize,
        #[arg(long)]
        steps: usize,
    },
    /// Family sizes on growing prefix spaces.
    Growth {
        #[arg(long)]
        ops: OpSet,
        #[arg(long, default_value_t = 1)]
        gens: usize,
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Checks a space file against the closure axioms.
    Validate {
        #[arg(long)]
        space: PathBuf,
        /// Seed for sampled checks above the exhaustive bound.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        exhaustive_bound: Option<usize>,
    },
    /// Compares two terms on every small space.
    Equal {
        left: Term,
        right: Term,
        #[arg(long, default_value_t = 4)]
        max_points: usize,
    },
    /// Normal form of a word over k, i, c.
    Normalize { word: UnaryWord },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum HasseFamily {
    Ki7,
    Kimeet13,
    Lattice35,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum DemoVariant {
    Phi,
    Ej,
}

/// Text for stdout plus whether every internal check passed.
#[derive(Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub ok: bool,
}

fn emit(out: &Option<PathBuf>, text: String, o: &mut Outcome) -> Result<()> {
    match out {
        Some(path) => {
            fs::write(path, &text)?;
            let _ = writeln!(o.stdout, "wrote {}", path.display());
        }
        None => o.stdout += &text,
    }
    Ok(())
}

fn read_space(path: &Path) -> Result<TopSpace> {
    let text = fs::read_to_string(path)?;
    TopSpace::from_json_str(&text)
}

fn hasse_poset(family: HasseFamily, m: usize, o: &mut Outcome) -> Result<OperationPoset> {
    let base = build_order(&unary_terms(), m)?;
    match family {
        HasseFamily::Ki7 => Ok(base),
        HasseFamily::Kimeet13 => build_order(&meet_semilattice_terms(&base)?, m),
        HasseFamily::Lattice35 => {
            let lat = distributive_closure(&meet_semilattice_terms(&base)?, m)?;
            for w in lat.warnings() {
                let _ = writeln!(o.stderr, "warning: {w}");
            }
            build_order(lat.elements(), m)
        }
    }
}

/// Runs one command. Errors are input or range problems; failed cross-checks
/// come back as `ok == false`.
pub fn run(cli: Cli) -> Result<Outcome> {
    let defaults = Defaults::builtin();
    let mut o = Outcome {
        ok: true,
        ..Outcome::default()
    };
    match cli.command {
        Command::Table1 { out } => {
            let t = table1(defaults)?;
            o.ok = t.all_ok();
            emit(&out, t.render(), &mut o)?;
        }
        Command::Table2 { n, out } => {
            let t = table2(n, defaults)?;
            o.ok = t.all_ok();
            emit(&out, t.render(), &mut o)?;
        }
        Command::Count {
            ops,
            gens,
            max_points,
            cap,
            space,
            out,
        } => {
            let upper = closed_form_counts(gens, ops)
                .ok()
                .and_then(|c| c.finite())
                .and_then(|v| usize::try_from(v).ok());
            let (result, space_ref, scope) = match &space {
                Some(path) => {
                    let sp = read_space(path)?;
                    let r = max_on_space(&sp, ops, gens, cap)?;
                    (
                        r,
                        path.display().to_string(),
                        format!("every assignment on {}", path.display()),
                    )
                }
                None => {
                    let m = match max_points {
                        Some(m) => m,
                        None => match defaults.method(gens, ops) {
                            Ok(Method::Exhaustive { max_points }) => max_points,
                            _ => 5.min(16 / gens.max(1)).max(1),
                        },
                    };
                    let r = max_over_spaces(ops, gens, m, cap, upper)?;
                    let scope = format!("every space with at most {m} points");
                    (r, format!("search up to {m} points"), scope)
                }
            };
            let family = saturate(&result.space, &result.assignment, ops, cap)?;
            let s = &mut o.stdout;
            let _ = writeln!(s, "ops {ops}, {gens} generator(s), {scope}");
            let _ = writeln!(
                s,
                "max count: {} (a lower bound for the free algebra)",
                result.count
            );
            if let Some(u) = upper {
                let _ = writeln!(s, "known size of the free algebra: {u}");
            }
            if family.truncated() {
                let _ = writeln!(s, "family truncated at cap {cap}");
            }
            let _ = writeln!(
                s,
                "witness space: {}",
                serde_json::to_string(&result.space.to_json())?
            );
            let sets: Vec<String> = result
                .assignment
                .iter()
                .enumerate()
                .map(|(j, a)| format!("g{}={a}", j + 1))
                .collect();
            let _ = writeln!(s, "assignment: {}", sets.join(" "));
            let _ = writeln!(s, "family:");
            for (set, term) in family.entries() {
                let _ = writeln!(s, "  {:<20} {term}", set.to_string());
            }
            if let Some(path) = out {
                let file = family.to_file(&result.space, Some(space_ref));
                fs::write(&path, serde_json::to_string_pretty(&file)? + "\n")?;
                let _ = writeln!(o.stdout, "wrote {}", path.display());
            }
            if upper.is_some_and(|u| result.count > u) {
                o.ok = false;
                let _ = writeln!(o.stderr, "count exceeds the size of the free algebra");
            }
        }
        Command::Hasse {
            family,
            format,
            max_points,
            out,
        } => {
            let m = max_points.unwrap_or(defaults.order_bound);
            let poset = hasse_poset(family, m, &mut o)?;
            emit(&out, emit_hasse(&poset, format), &mut o)?;
        }
        Command::InfiniteDemo { variant, n, steps } => {
            let (name, got) = match variant {
                DemoVariant::Phi => ("phi", phi_iterate(n, steps)?),
                DemoVariant::Ej => ("ej", ej_sequence(n, steps)?),
            };
            let _ = writeln!(
                o.stdout,
                "{name} on the prefix space of {n} points, E = {}",
                evens(n)
            );
            for (j, set) in got.iter().enumerate() {
                let want = demo_closed_form(n, j + 1);
                let pass = *set == want;
                o.ok &= pass;
                let _ = writeln!(
                    o.stdout,
                    "j={:<3} {:<28} expected {:<28} {}",
                    j + 1,
                    set.to_string(),
                    want.to_string(),
                    if pass { "PASS" } else { "FAIL" }
                );
            }
        }
        Command::Growth {
            ops,
            gens,
            sizes,
            cap,
        } => {
            let sizes = sizes.unwrap_or_else(|| defaults.growth_sizes.clone());
            let g = growth_probe(ops, gens, &sizes, cap.unwrap_or(defaults.growth_cap))?;
            let _ = writeln!(o.stdout, "{g}");
        }
        Command::Validate {
            space,
            seed,
            samples,
            exhaustive_bound,
        } => {
            let text = fs::read_to_string(&space)?;
            let file: SpaceFile = serde_json::from_str(&text)?;
            if file.closure.len() != file.points {
                return Err(Error::Dimension {
                    expected: file.points,
                    found: file.closure.len(),
                });
            }
            let sp = TopSpace::from_matrix_unchecked(&file.closure)?;
            let mut config = ValidationConfig {
                seed,
                ..ValidationConfig::default()
            };
            if let Some(k) = samples {
                config.samples = k;
            }
            if let Some(b) = exhaustive_bound {
                config.exhaustive_bound = b;
            }
            let report = validate_space(&sp, &config);
            o.ok = report.is_valid();
            let _ = writeln!(o.stdout, "{report}");
        }
        Command::Equal {
            left,
            right,
            max_points,
        } => {
            let v = term_equal(&left, &right, max_points)?;
            let _ = writeln!(o.stdout, "{v}");
        }
        Command::Normalize { word } => {
            let _ = writeln!(o.stdout, "{}", normalize_unary(&word));
        }
    }
    Ok(o)
}

/// Entry point for the binary: exit 0 when every check passes, 1 on a
/// failed check, 2 on bad input.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    if let Some(w) = cli.workers {
        if w == 0 {
            eprintln!("error: worker count must be at least 1");
            return 2;
        }
        // a second initialization in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global();
    }
    match run(cli) {
        Ok(o) => {
            print!("{}", o.stdout);
            eprint!("{}", o.stderr);
            if o.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
