//! The Thue-Morse transform on binary seeds.
//!
//! Given a seed `σ` with `σ(0) = 0`, `σ(1) = 1`, the transform `τ = T(σ)` is
//! pinned down by `τ(v(n)) = τ(n)`, `τ(u(n)) = 1 - τ(n)`, `τ(0) = 0`, where
//! `v` and `u` enumerate the zeros and ones of the seed. Since `v(n), u(n) > n`
//! for `n >= 1`, a single left-to-right pass determines every term.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::mask::{self, Level};
use crate::numeration;
use crate::report::Mismatch;
use crate::word::Word;

/// Below this length a constant tail after index 1 is still plausible for an
/// admissible seed (`ftm` starts `0111`), so degeneracy is only judged on
/// longer prefixes.
pub const DEGENERACY_MIN_LEN: u64 = 8;

/// A binary sequence that can be sampled by index.
#[allow(clippy::len_without_is_empty)]
pub trait BitSource {
    /// Value at `n`, or `None` past the end of a finite source.
    fn bit(&self, n: u64) -> Option<u8>;

    /// Number of available terms, `None` for infinite sources.
    fn len(&self) -> Option<u64> {
        None
    }
}

impl BitSource for Level {
    fn bit(&self, n: u64) -> Option<u8> {
        Some(self.at(n))
    }
}

impl BitSource for Word {
    fn bit(&self, n: u64) -> Option<u8> {
        usize::try_from(n).ok().and_then(|i| self.get(i))
    }

    fn len(&self) -> Option<u64> {
        Some(Word::len(self) as u64)
    }
}

impl<F: Fn(u64) -> u8> BitSource for F {
    fn bit(&self, n: u64) -> Option<u8> {
        Some(self(n) & 1)
    }
}

/// Built-in seeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// Level `m` of the tower (`Tower(0)` is Thue-Morse).
    Tower(u64),
    /// Fibonacci-Thue-Morse.
    Ftm,
    /// Meta-Thue-Morse `M2`.
    M2,
}

impl BitSource for Builtin {
    fn bit(&self, n: u64) -> Option<u8> {
        Some(match *self {
            Builtin::Tower(m) => mask::a(m, n),
            Builtin::Ftm => numeration::ftm(n),
            Builtin::M2 => numeration::m2(n),
        })
    }
}

/// A seed whose first two values have been checked eagerly.
pub struct SequenceOracle<S> {
    source: S,
}

impl<S: BitSource> SequenceOracle<S> {
    pub fn new(source: S) -> Result<Self> {
        match (source.bit(0), source.bit(1)) {
            (Some(0), Some(1)) => Ok(SequenceOracle { source }),
            (Some(_), Some(_)) => Err(Error::InvalidSeed),
            _ => Err(Error::SeedTooShort {
                needed: 2,
                available: source.len().unwrap_or(0),
            }),
        }
    }

    pub fn eval(&self, n: u64) -> Option<u8> {
        self.source.bit(n)
    }

    pub fn source(&self) -> &S {
        &self.source
    }

    /// Reads `[0, len)`, failing if the source is too short.
    pub fn values(&self, len: u64) -> Result<Vec<u8>> {
        let mut out = Vec::with_capacity(len as usize);
        for n in 0..len {
            match self.source.bit(n) {
                Some(b) => out.push(b),
                None => {
                    return Err(Error::SeedTooShort {
                        needed: len,
                        available: n,
                    })
                }
            }
        }
        Ok(out)
    }
}

/// Comparison of the iterated operator against the closed form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformReport {
    pub length: u64,
    pub mismatches: Vec<Mismatch>,
    /// Admissibility of the seed was only checked on the consumed range.
    pub caveat: &'static str,
}

impl TransformReport {
    pub fn verified(&self) -> bool {
        self.mismatches.is_empty()
    }
}

const PREFIX_CAVEAT: &str =
    "seed admissibility (each value infinitely often) checked on the consumed prefix only";

/// First `len` terms of `T(seed)`.
pub fn transform_prefix<S: BitSource>(seed: &SequenceOracle<S>, len: u64) -> Result<Word> {
    let sigma = seed.values(len)?;
    transform_values(&sigma)
}

fn transform_values(sigma: &[u8]) -> Result<Word> {
    let len = sigma.len();
    if (len >= 1 && sigma[0] != 0) || (len >= 2 && sigma[1] != 1) {
        return Err(Error::InvalidSeed);
    }
    if len as u64 >= DEGENERACY_MIN_LEN && sigma[2..].iter().all(|&b| b == sigma[2]) {
        return Err(Error::DegenerateSeed { len: len as u64 });
    }
    let mut tau = vec![0u8; len];
    // zeros / ones of the seed consumed so far
    let (mut z, mut o) = (0usize, 0usize);
    for k in 0..len {
        if sigma[k] == 0 {
            tau[k] = if k == 0 { 0 } else { tau[z] };
            z += 1;
        } else {
            tau[k] = 1 - tau[o];
            o += 1;
        }
    }
    Ok(Word::from_bits(tau))
}

/// Applies the transform `m` times starting from the Thue-Morse prefix.
pub fn iterate_tower_prefix(m: u64, len: u64) -> Result<Word> {
    if len < 2 {
        return Err(crate::error::invalid("tower prefix needs length >= 2"));
    }
    let mut word = mask::prefix(0, len as usize);
    for _ in 0..m {
        word = transform_values(word.as_slice())?;
    }
    Ok(word)
}

/// Index-by-index comparison of `iterate_tower_prefix(m, len)` against the
/// bitmask closed form.
pub fn verify_closed_form(m: u64, len: u64) -> Result<TransformReport> {
    let iterated = iterate_tower_prefix(m, len)?;
    let closed = Level::unchecked(m);
    let mismatches = iterated
        .iter()
        .enumerate()
        .filter_map(|(i, got)| {
            let expected = closed.at(i as u64);
            (expected != got).then_some(Mismatch {
                index: i as u64,
                expected: expected as u64,
                got: got as u64,
            })
        })
        .collect();
    Ok(TransformReport {
        length: len,
        mismatches,
        caveat: PREFIX_CAVEAT,
    })
}
