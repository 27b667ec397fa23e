//! The iterated Thue-Morse transform and its bitmask tower.
//!
//! Level `m` of the tower is `a_m(n) = XOR of the binary digits of n at
//! positions p with p & m == 0`. Around that closed form the crate collects
//! the transform operator on arbitrary seeds, the evil/odious composition
//! identities and their correction terms, exact equal-power-sum (PTE)
//! verification, factor complexity, and the Zeckendorf and `M2` analogues.
//!
//! Every checker returns its data (reports, verdicts, profiles) rather than
//! panicking, so callers decide what counts as failure.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod complexity;
pub mod corrections;
pub mod error;
pub mod mask;
pub mod numeration;
pub mod pte;
pub mod report;
pub mod transform;
pub mod word;

pub use error::{Error, Result};
pub use mask::{a, evil, level_params, mask_set, odious, prefix, Level, LevelParams, PeriodicBitSet};
pub use report::{Mismatch, Report};
pub use transform::{BitSource, Builtin, SequenceOracle};
pub use word::Word;
