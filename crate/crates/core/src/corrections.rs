//! Correction sets `C(m)` and the composition identities of the generalized
//! evil/odious numbers, same-level and cross-level.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{invalid, Result};
use crate::mask::{self, a, level_params, PeriodicBitSet};
use crate::report::{Mismatch, Report};

/// `C(m)`, a periodic set of bit positions.
pub type CorrectionSet = PeriodicBitSet;

/// Builds `C(m)` by the top-bit recursion: `C(0) = ∅`, for odd `m`
/// `C(m) ∩ [0, 2^K) = {2^K - 2} ∪ (C(m - 2^(K-1)) ∩ [0, 2^(K-1) - 2))`, and
/// `C(m) = C(m - 1)` for even `m`.
///
/// Even masks inherit the period of `m - 1`; `C(0)` has period 1.
pub fn correction_set(m: u64) -> Result<CorrectionSet> {
    level_params(m)?;
    Ok(correction_set_rec(m))
}

fn correction_set_rec(m: u64) -> CorrectionSet {
    if m == 0 {
        return PeriodicBitSet::new(1, Vec::new());
    }
    if m.is_multiple_of(2) {
        return correction_set_rec(m - 1);
    }
    let k = mask::mask_exponent(m);
    let period = 1u64 << k;
    let half = period / 2;
    let inner = correction_set_rec(m - half);
    let mut residues: Vec<u64> = (0..half.saturating_sub(2))
        .filter(|&q| inner.contains(q))
        .collect();
    residues.push(period - 2);
    PeriodicBitSet::new(period, residues)
}

/// The cyclic-shift characterization `{q < 2^K : (q + 2) & m = 0}` for odd `m`.
pub fn shifted_mask_set(m: u64) -> Result<PeriodicBitSet> {
    let params = level_params(m)?;
    let residues = (0..params.period).filter(|q| (q + 2) & m == 0).collect();
    Ok(PeriodicBitSet::new(params.period, residues))
}

/// Precomputed correction function `c_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Correction {
    m: u64,
    select: u64,
}

impl Correction {
    pub fn new(m: u64) -> Result<Self> {
        let set = correction_set(m)?;
        Ok(Correction {
            m,
            select: set.to_word(),
        })
    }

    pub fn mask(&self) -> u64 {
        self.m
    }

    #[inline]
    pub fn at(&self, n: u64) -> u8 {
        ((n & self.select).count_ones() & 1) as u8
    }
}

/// `c_m(n) = XOR of b_p(n)` over `p ∈ C(m)`.
pub fn c(m: u64, n: u64) -> Result<u8> {
    Ok(Correction::new(m)?.at(n))
}

/// `γ_{m,m'}(n) = a_m(4n) XOR a_{m'}(2n)`.
#[inline]
pub fn cross_correction(m: u64, m_prime: u64, n: u64) -> u8 {
    a(m, 4 * n) ^ a(m_prime, 2 * n)
}

/// The four composition shapes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Composition {
    /// `u ∘ u`
    Uu,
    /// `v ∘ v`
    Vv,
    /// `u ∘ v`
    Uv,
    /// `v ∘ u`
    Vu,
}

impl Composition {
    pub const ALL: [Composition; 4] = [
        Composition::Uu,
        Composition::Vv,
        Composition::Uv,
        Composition::Vu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Composition::Uu => "uu",
            Composition::Vv => "vv",
            Composition::Uv => "uv",
            Composition::Vu => "vu",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompositionViolation {
    pub identity: Composition,
    pub n: u64,
    pub lhs: u64,
    pub rhs: u64,
}

/// Zero and one positions of `a_m`, found by scanning rather than through the
/// pairing formula.
struct Enumeration {
    evil: Vec<u64>,
    odious: Vec<u64>,
}

impl Enumeration {
    fn scan(m: u64, count: usize) -> Self {
        let level = mask::Level::unchecked(m);
        let (mut evil, mut odious) = (Vec::with_capacity(count), Vec::with_capacity(count));
        let mut k = 0u64;
        while evil.len() < count || odious.len() < count {
            if level.at(k) == 0 {
                evil.push(k);
            } else {
                odious.push(k);
            }
            k += 1;
        }
        Enumeration { evil, odious }
    }

    fn u(&self, n: u64) -> u64 {
        self.odious[n as usize]
    }

    fn v(&self, n: u64) -> u64 {
        self.evil[n as usize]
    }
}

/// Right-hand side `2x + e` with `e` the correction term placed per the
/// parity pattern of the outer level.
fn expected(identity: Composition, outer_odd: bool, inner: u64, corr: u64) -> u64 {
    use Composition::*;
    let e = match (outer_odd, identity) {
        (true, Uu) | (true, Uv) => 1 - corr,
        (true, Vv) | (true, Vu) => corr,
        (false, Uu) | (false, Vv) => corr,
        (false, Uv) | (false, Vu) => 1 - corr,
    };
    2 * inner + e
}

fn sweep(
    outer: u64,
    inner: u64,
    n_max: u64,
    correction: impl Fn(u64) -> u8,
) -> Report<CompositionViolation> {
    // u(n), v(n) <= 2n + 1, so indices up to 2 n_max + 1 are looked up.
    let count = 2 * n_max as usize + 2;
    let out = Enumeration::scan(outer, count);
    let inn = if inner == outer {
        None
    } else {
        Some(Enumeration::scan(inner, count))
    };
    let inn = inn.as_ref().unwrap_or(&out);
    let outer_odd = outer % 2 == 1;
    let mut report = Report::new();
    for n in 0..n_max {
        let corr = correction(n) as u64;
        for identity in Composition::ALL {
            let (x, lhs) = match identity {
                Composition::Uu => (inn.u(n), out.u(inn.u(n))),
                Composition::Vv => (inn.v(n), out.v(inn.v(n))),
                Composition::Uv => (inn.v(n), out.u(inn.v(n))),
                Composition::Vu => (inn.u(n), out.v(inn.u(n))),
            };
            let rhs = expected(identity, outer_odd, x, corr);
            report.check(lhs == rhs, || CompositionViolation {
                identity,
                n,
                lhs,
                rhs,
            });
        }
    }
    report
}

/// Checks the same-level identities for `n < n_max`. The correction is read
/// from `C(m)`, the compositions from scanned enumerations of `a_m`.
pub fn verify_composition(m: u64, n_max: u64) -> Result<Report<CompositionViolation>> {
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    let corr = Correction::new(m)?;
    Ok(sweep(m, m, n_max, |n| corr.at(n)))
}

/// Checks the cross-level identities `x_m ∘ y_{m'}`. Odd `m` uses `c_m`;
/// even `m` uses `γ_{m,m'}`, and `m = 0` is run under the even formulas as an
/// extension of the stated range.
pub fn verify_cross(m: u64, m_prime: u64, n_max: u64) -> Result<Report<CompositionViolation>> {
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    level_params(m)?;
    level_params(m_prime)?;
    let mut report = if m % 2 == 1 {
        let corr = Correction::new(m)?;
        sweep(m, m_prime, n_max, |n| corr.at(n))
    } else {
        sweep(m, m_prime, n_max, |n| cross_correction(m, m_prime, n))
    };
    if m == 0 {
        report.note("m = 0 checked with the even-case cross formulas (extension beyond m >= 2)");
    }
    Ok(report)
}

/// `c_{2^k-1}(n) = a_{2^k-1}(floor(n / 2^(2^k - 2)))` for `n < n_max`.
pub fn mersenne_correction_check(k: u32, n_max: u64) -> Result<Report<Mismatch>> {
    if !(1..=5).contains(&k) {
        return Err(invalid("mersenne exponent k must lie in 1..=5"));
    }
    let m = (1u64 << k) - 1;
    let corr = Correction::new(m)?;
    let shift = (1u32 << k) - 2;
    let mut report = Report::new();
    let expected_set = PeriodicBitSet::new(1 << k, vec![(1 << k) - 2]);
    let set = correction_set(m)?;
    report.check(set == expected_set, || Mismatch {
        index: u64::MAX,
        expected: expected_set.residues[0],
        got: set.residues.first().copied().unwrap_or(u64::MAX),
    });
    for n in 0..n_max {
        let lhs = corr.at(n);
        let rhs = a(m, n >> shift);
        report.check(lhs == rhs, || Mismatch {
            index: n,
            expected: rhs as u64,
            got: lhs as u64,
        });
    }
    Ok(report)
}

/// `a_3(floor(n/4)) XOR a_5(n) XOR a_7(n) = a_7(floor(n/64))` for `n < n_max`.
pub fn equivalence_m7_check(n_max: u64) -> Result<Report<Mismatch>> {
    if n_max == 0 {
        return Err(invalid("n_max must be at least 1"));
    }
    let mut report = Report::new();
    for n in 0..n_max {
        let lhs = a(3, n / 4) ^ a(5, n) ^ a(7, n);
        let rhs = a(7, n / 64);
        report.check(lhs == rhs, || Mismatch {
            index: n,
            expected: rhs as u64,
            got: lhs as u64,
        });
    }
    Ok(report)
}

/// `a_m(4n + 2) = a_m(4n) XOR [1 & m = 0]` for `n < n_max`.
pub fn toggle_check(m: u64, n_max: u64) -> Report<Mismatch> {
    let flip = u8::from(m & 1 == 0);
    let mut report = Report::new();
    for n in 0..n_max {
        let (lhs, rhs) = (a(m, 4 * n + 2), a(m, 4 * n) ^ flip);
        report.check(lhs == rhs, || Mismatch {
            index: n,
            expected: rhs as u64,
            got: lhs as u64,
        });
    }
    report
}

/// `[x & m = 0] XOR [(x-1) & m = 0] = [x & (m-1) = 0]` for even `m >= 2`
/// and `1 <= x < x_max`.
pub fn discrete_difference_check(m: u64, x_max: u64) -> Result<Report<Mismatch>> {
    if m < 2 || m % 2 == 1 {
        return Err(invalid("discrete difference needs an even mask m >= 2"));
    }
    let mut report = Report::new();
    for x in 1..x_max {
        let lhs = u8::from(x & m == 0) ^ u8::from((x - 1) & m == 0);
        let rhs = u8::from(x & (m - 1) == 0);
        report.check(lhs == rhs, || Mismatch {
            index: x,
            expected: rhs as u64,
            got: lhs as u64,
        });
    }
    Ok(report)
}
