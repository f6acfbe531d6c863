//! Library side of the `henson` command: problem files, subcommands and
//! the fuzz harness.

pub mod checks;
pub mod commands;
pub mod fuzz;
pub mod problem;
