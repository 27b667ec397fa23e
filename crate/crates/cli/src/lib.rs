//! Command-line front end for the `tmtower` crate.

pub mod args;
pub mod output;
pub mod parallel;
pub mod run;
pub mod seed;
