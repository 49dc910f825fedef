//! Finite topological spaces, closure-algebra terms, and the families of
//! sets they generate.

pub mod cli;
pub mod counts;
pub mod enumerate;
pub mod equality;
pub mod error;
pub mod lattice;
pub mod pointset;
pub mod poset;
pub mod saturation;
pub mod tables;
pub mod term;
pub mod topology;
pub mod unary;
