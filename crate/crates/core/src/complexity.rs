//! Factor complexity of tower levels.
//!
//! Three independent routes are provided: brute-force window counting on a
//! long prefix, the desubstitution recursion for the derived word of a
//! Mersenne level, and the closed piecewise-linear formula for Mersenne
//! levels. Non-Mersenne levels only get the brute-force route.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{invalid, Error, Result};
use crate::mask::{self, level_params, Level};
use crate::report::{Mismatch, Report};
use crate::transform::BitSource;
use crate::word::Word;

/// Default cap on the prefix length used by the brute-force profiler.
pub const DEFAULT_PREFIX_CAP: u64 = 1 << 24;

/// Initial prefix length is this many times `n_max`.
pub const INITIAL_PREFIX_FACTOR: u64 = 64;

/// Unchanged doublings required before a brute profile is accepted.
pub const STABLE_DOUBLINGS: u32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    Formula,
    Desub,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::Formula => "formula",
            Method::Desub => "desub",
        }
    }
}

/// How a brute profile was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub initial_len: u64,
    /// Shortest examined prefix already giving the accepted profile.
    pub stable_len: u64,
    /// Longest examined prefix.
    pub final_len: u64,
    /// Number of doublings performed from the initial length.
    pub doublings: u32,
}

/// `p(1), ..., p(n_max)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComplexityProfile {
    /// `values[i] = p(i + 1)`.
    pub values: Vec<u64>,
    pub method: Method,
    pub stabilization: Option<Stabilization>,
}

/// A first difference outside the observed range `0..=4`, or a decrease.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DifferenceViolation {
    pub n: u64,
    pub difference: i64,
}

impl ComplexityProfile {
    pub fn n_max(&self) -> usize {
        self.values.len()
    }

    /// `p(n)` for `1 <= n <= n_max`.
    pub fn get(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.values.get(i).copied())
    }

    /// `n` with `p(n) - p(n-1)` outside `0..=4`.
    pub fn difference_violations(&self) -> Vec<DifferenceViolation> {
        self.values
            .windows(2)
            .enumerate()
            .filter_map(|(i, w)| {
                let d = w[1] as i64 - w[0] as i64;
                (!(0..=4).contains(&d)).then_some(DifferenceViolation {
                    n: i as u64 + 2,
                    difference: d,
                })
            })
            .collect()
    }

    /// `n >= 3` where the first difference changes.
    pub fn breakpoints(&self) -> Vec<u64> {
        self.values
            .windows(3)
            .enumerate()
            .filter_map(|(i, w)| {
                (w[2] as i64 - w[1] as i64 != w[1] as i64 - w[0] as i64).then_some(i as u64 + 3)
            })
            .collect()
    }

    /// Largest `n` with `p(k) = 2k` for all `k <= n`.
    pub fn initial_linear_regime(&self) -> u64 {
        self.values
            .iter()
            .zip(1u64..)
            .take_while(|&(&p, n)| p == 2 * n)
            .count() as u64
    }
}

/// Distinct window counts for all lengths `1..=n_max` in `bits`, by iterated
/// class refinement: equal ids for equal windows, and a window of length
/// `n + 1` is the pair (id of its length-`n` prefix, its last letter).
pub fn window_counts(bits: &[u8], n_max: usize) -> Vec<u64> {
    let len = bits.len();
    let mut counts = Vec::with_capacity(n_max);
    if len == 0 {
        counts.resize(n_max, 0);
        return counts;
    }
    let mut ids: Vec<u32> = bits.iter().map(|&b| b as u32).collect();
    let mut distinct = {
        let seen0 = bits.contains(&0);
        let seen1 = bits.contains(&1);
        if !seen0 {
            ids.iter_mut().for_each(|x| *x = 0);
        }
        u32::from(seen0) + u32::from(seen1)
    };
    counts.push(distinct as u64);
    let mut table: Vec<u32> = Vec::new();
    for n in 1..n_max {
        if n >= len {
            counts.push(0);
            continue;
        }
        table.clear();
        table.resize(2 * distinct as usize, u32::MAX);
        let starts = len - n;
        let mut next = 0u32;
        for i in 0..starts {
            let key = 2 * ids[i] as usize + bits[i + n] as usize;
            let slot = &mut table[key];
            if *slot == u32::MAX {
                *slot = next;
                next += 1;
            }
            ids[i] = *slot;
        }
        ids.truncate(starts);
        distinct = next;
        counts.push(distinct as u64);
    }
    counts
}

/// Profile of a finite word; no stabilization claim.
pub fn finite_word_profile(bits: &[u8], n_max: usize) -> ComplexityProfile {
    ComplexityProfile {
        values: window_counts(bits, n_max),
        method: Method::Brute,
        stabilization: None,
    }
}

fn read_prefix<S: BitSource + ?Sized>(source: &S, len: u64) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(len as usize);
    for n in 0..len {
        match source.bit(n) {
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

/// Brute profile with prefix doubling, capped at `cap` letters.
pub fn factor_complexity_brute_capped<S: BitSource + ?Sized>(
    source: &S,
    n_max: usize,
    cap: u64,
) -> Result<ComplexityProfile> {
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    let initial = INITIAL_PREFIX_FACTOR * n_max as u64;
    let mut len = initial.min(cap);
    let mut bits = read_prefix(source, len)?;
    let mut current = window_counts(&bits, n_max);
    let mut stable = 0;
    let mut doublings = 0;
    let mut stable_len = len;
    while stable < STABLE_DOUBLINGS {
        if len >= cap {
            return Err(Error::NoStabilization { n_max, cap });
        }
        let next_len = (2 * len).min(cap);
        for n in len..next_len {
            bits.push(source.bit(n).ok_or(Error::SeedTooShort {
                needed: next_len,
                available: n,
            })?);
        }
        len = next_len;
        doublings += 1;
        let next = window_counts(&bits, n_max);
        if next == current {
            stable += 1;
        } else {
            stable = 0;
            current = next;
            stable_len = len;
        }
    }
    Ok(ComplexityProfile {
        values: current,
        method: Method::Brute,
        stabilization: Some(Stabilization {
            initial_len: initial,
            stable_len,
            final_len: len,
            doublings,
        }),
    })
}

/// Brute profile with the default cap.
pub fn factor_complexity_brute<S: BitSource + ?Sized>(
    source: &S,
    n_max: usize,
) -> Result<ComplexityProfile> {
    factor_complexity_brute_capped(source, n_max, DEFAULT_PREFIX_CAP)
}

/// A window length `n` whose observed factor set is not closed under
/// complement, with one offending factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureViolation {
    pub n: u32,
    pub factor: u64,
}

/// Checks that every length-`n` factor of `bits` (`n <= n_max <= 64`) has
/// its complement among the factors too.
pub fn complement_closure(bits: &[u8], n_max: u32) -> Result<Report<ClosureViolation>> {
    if n_max > 64 {
        return Err(invalid("packed windows hold at most 64 letters"));
    }
    let mut report = Report::new();
    for n in 1..=n_max {
        let nu = n as usize;
        if nu > bits.len() {
            break;
        }
        let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut set = BTreeSet::new();
        let mut w = 0u64;
        for (i, &b) in bits.iter().enumerate() {
            w = ((w << 1) | b as u64) & mask;
            if i + 1 >= nu {
                set.insert(w);
            }
        }
        for &f in &set {
            report.check(set.contains(&(!f & mask)), || ClosureViolation { n, factor: f });
        }
    }
    Ok(report)
}

/// `m = 2^K - 1` for `1 <= K <= 5`.
pub fn mersenne_mask(k: u32) -> Result<u64> {
    if !(1..=5).contains(&k) {
        return Err(invalid("Mersenne exponent K must be in 1..=5"));
    }
    Ok((1 << k) - 1)
}

/// `true` iff `m = 2^K - 1` for some `K >= 1`.
pub fn is_mersenne(m: u64) -> bool {
    m != 0 && m & (m + 1) == 0
}

/// `B = 2^(2^K)`.
pub fn mersenne_base(k: u32) -> BigUint {
    BigUint::one() << (1u64 << k)
}

/// One affine piece `slope * n + intercept` on `lo..=hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PiecewisePiece {
    pub lo: u64,
    pub hi: u64,
    pub slope: u64,
    pub intercept: i128,
}

impl PiecewisePiece {
    pub fn eval(&self, n: u64) -> i128 {
        self.slope as i128 * n as i128 + self.intercept
    }
}

/// Closed complexity of the Mersenne level `2^K - 1` at `n >= 1`.
pub fn mersenne_formula(k: u32, n: impl Into<BigUint>) -> BigUint {
    let n: BigUint = n.into();
    let b = mersenne_base(k);
    let two = BigUint::from(2u8);
    if n <= &b + 1u8 {
        return &two * n;
    }
    // find j with B^j + 2 <= n <= B^(j+1) + 1
    let mut prev = BigUint::one();
    let mut bj = b.clone();
    loop {
        let next = &bj * &b;
        if n <= &next + 1u8 {
            break;
        }
        prev = core::mem::replace(&mut bj, next);
    }
    let growth_end = &two * &bj - &prev + 1u8;
    if n <= growth_end {
        BigUint::from(4u8) * n - &two * (&bj - &prev + 2u8)
    } else {
        &two * n + &two * (bj - 1u8)
    }
}

/// The formula's pieces, clipped to `1..=n_max`.
pub fn mersenne_pieces(k: u32, n_max: u64) -> Vec<PiecewisePiece> {
    let b = 1u128 << (1u64 << k).min(127);
    let mut pieces = Vec::new();
    let mut push = |lo: u128, hi: u128, slope: u64, intercept: i128| {
        if lo <= n_max as u128 {
            pieces.push(PiecewisePiece {
                lo: lo as u64,
                hi: hi.min(n_max as u128) as u64,
                slope,
                intercept,
            });
            true
        } else {
            false
        }
    };
    if !push(1, b.saturating_add(1), 2, 0) || k >= 7 {
        return pieces;
    }
    let (mut prev, mut bj) = (1u128, b);
    loop {
        let growth_lo = bj + 2;
        let growth_hi = 2 * bj - prev + 1;
        if !push(growth_lo, growth_hi, 4, -2 * (bj - prev + 2) as i128) {
            break;
        }
        let next = match bj.checked_mul(b) {
            Some(v) if v < u128::MAX / 4 => v,
            _ => {
                push(growth_hi + 1, u128::MAX, 2, 2 * (bj - 1) as i128);
                break;
            }
        };
        if !push(growth_hi + 1, next + 1, 2, 2 * (bj - 1) as i128) {
            break;
        }
        prev = bj;
        bj = next;
    }
    pieces
}

/// `Δ(n) = a_m(n) XOR a_m(n + 1)`.
#[inline]
pub fn derived(m: u64, n: u64) -> u8 {
    mask::a(m, n) ^ mask::a(m, n + 1)
}

/// `Δ(0), ..., Δ(len - 1)`.
pub fn derived_prefix(m: u64, len: usize) -> Word {
    let level = Level::unchecked(m);
    (0..len as u64)
        .map(|n| level.at(n) ^ level.at(n + 1))
        .collect()
}

/// `true` iff the word has no factor `00`.
pub fn has_no_double_zero(bits: &[u8]) -> bool {
    bits.windows(2).all(|w| w != [0, 0])
}

/// Prefix of the fixed point of `1 -> 1^(B-1) 0`, `0 -> 1^B` starting with
/// `1`, generated by iterating the substitution. Each image of `1` starts
/// with `1`, so successive iterates extend one another.
pub fn substitution_fixed_point(k: u32, len: usize) -> Result<Word> {
    mersenne_mask(k)?;
    let b = 1usize << (1u32 << k);
    let mut word = vec![1u8];
    while word.len() < len {
        let mut next = Vec::with_capacity(len);
        'fill: for &c in &word {
            for i in 0..b {
                if next.len() == len {
                    break 'fill;
                }
                next.push(u8::from(c == 0 || i + 1 < b));
            }
        }
        word = next;
    }
    word.truncate(len);
    Ok(Word::from_bits(word))
}

/// `Δ` of the Mersenne level `2^K - 1` against the substitution fixed point
/// on `[0, len)`.
pub fn substitution_check(k: u32, len: usize) -> Result<Report<Mismatch>> {
    let m = mersenne_mask(k)?;
    let delta = derived_prefix(m, len);
    let fixed = substitution_fixed_point(k, len)?;
    let mut report = Report::new();
    for (i, (d, f)) in delta.iter().zip(fixed.iter()).enumerate() {
        report.check(d == f, || Mismatch {
            index: i as u64,
            expected: f as u64,
            got: d as u64,
        });
    }
    Ok(report)
}

/// A failure of `a(qB + r) = a(q) XOR (r mod 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BlockViolation {
    pub q: u64,
    pub r: u64,
}

/// Shape of one macro-block of length `B`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockShape {
    /// `(01)^(B/2)`.
    Alternating,
    /// `(10)^(B/2)`.
    Complement,
    Other,
}

/// Checks the macro-block identity for `q < q_max` and every `r < B`.
pub fn block_structure_check(k: u32, q_max: u64, budget: u64) -> Result<Report<BlockViolation>> {
    let m = mersenne_mask(k)?;
    let b = level_params(m)?.base;
    let points = (q_max as u128) * b as u128;
    if points > budget as u128 {
        return Err(Error::BudgetExceeded { points, budget });
    }
    let level = Level::new(m)?;
    let mut report = Report::new();
    for q in 0..q_max {
        let aq = level.at(q);
        for r in 0..b {
            report.check(level.at(q * b + r) == aq ^ (r & 1) as u8, || BlockViolation { q, r });
        }
    }
    Ok(report)
}

/// Shapes of the first `count` macro-blocks of level `m`.
pub fn block_shapes(m: u64, count: u64) -> Result<Vec<BlockShape>> {
    let b = level_params(m)?.base;
    let level = Level::new(m)?;
    Ok((0..count)
        .map(|q| {
            let block = || (0..b).map(|r| level.at(q * b + r));
            if block().zip(0u64..).all(|(x, r)| x as u64 == r & 1) {
                BlockShape::Alternating
            } else if block().zip(0u64..).all(|(x, r)| x as u64 != r & 1) {
                BlockShape::Complement
            } else {
                BlockShape::Other
            }
        })
        .collect())
}

/// `q(L) = p_Δ(L)` for the Mersenne level `2^K - 1` by desubstitution,
/// memoized across calls through `memo`.
pub fn q_desub_memo(k: u32, l: u64, memo: &mut BTreeMap<u64, BigUint>) -> BigUint {
    if k >= 6 {
        // B exceeds every u64 length: first branch
        return BigUint::from(l) + 1u8;
    }
    let b = 1u64 << (1u32 << k);
    fn go(l: u64, b: u64, memo: &mut BTreeMap<u64, BigUint>) -> BigUint {
        if l <= b {
            return BigUint::from(l) + 1u8;
        }
        if l < 2 * b {
            return BigUint::from(2 * l - b + 1);
        }
        if let Some(v) = memo.get(&l) {
            return v.clone();
        }
        let (a, r) = (l / b, l % b);
        let v = BigUint::from(b - r) * go(a, b, memo) + BigUint::from(r) * go(a + 1, b, memo);
        memo.insert(l, v.clone());
        v
    }
    go(l, b, memo)
}

/// `q(L)` with a fresh memo table.
pub fn q_desub(k: u32, l: u64) -> BigUint {
    q_desub_memo(k, l, &mut BTreeMap::new())
}

/// `p(n) = 2 q(n - 1)` for `n = 1..=n_max`.
pub fn desub_profile(k: u32, n_max: usize) -> Result<ComplexityProfile> {
    mersenne_mask(k)?;
    let mut memo = BTreeMap::new();
    let values = (1..=n_max as u64)
        .map(|n| {
            (q_desub_memo(k, n - 1, &mut memo) * 2u8)
                .to_u64()
                .ok_or_else(|| invalid("complexity value exceeds u64"))
        })
        .collect::<Result<_>>()?;
    Ok(ComplexityProfile {
        values,
        method: Method::Desub,
        stabilization: None,
    })
}

/// Closed formula for `n = 1..=n_max`.
pub fn formula_profile(k: u32, n_max: usize) -> Result<ComplexityProfile> {
    mersenne_mask(k)?;
    let values = (1..=n_max as u64)
        .map(|n| {
            mersenne_formula(k, n)
                .to_u64()
                .ok_or_else(|| invalid("complexity value exceeds u64"))
        })
        .collect::<Result<_>>()?;
    Ok(ComplexityProfile {
        values,
        method: Method::Formula,
        stabilization: None,
    })
}

/// Brute profile of tower level `m`.
pub fn level_profile(m: u64, n_max: usize) -> Result<ComplexityProfile> {
    factor_complexity_brute(&Level::new(m)?, n_max)
}

/// Both sides of `p_a(n) = 2 p_Δ(n - 1)` brute-forced separately.
pub fn verify_reduction(k: u32, n_max: usize) -> Result<Report<Mismatch>> {
    let m = mersenne_mask(k)?;
    let pa = level_profile(m, n_max)?;
    let mut report = Report::new();
    if n_max < 2 {
        return Ok(report);
    }
    let delta = move |n: u64| derived(m, n);
    let pd = factor_complexity_brute(&delta, n_max - 1)?;
    for n in 2..=n_max {
        let expected = 2 * pd.values[n - 2];
        let got = pa.values[n - 1];
        report.check(expected == got, || Mismatch {
            index: n as u64,
            expected,
            got,
        });
    }
    Ok(report)
}
