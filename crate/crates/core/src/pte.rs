//! Equal power sums over digit-parity partitions.
//!
//! Every construction here partitions an interval `[0, N)` by the parity (or
//! residue mod `d`) of a selected subset of digits. The signed generating
//! polynomial then factors with one `(1 - x^(d^p))`-type factor per selected
//! position, so the classes agree on all power sums of degree below the
//! number of selected positions and disagree at that degree.
//!
//! Sums are exact: per-point powers are accumulated in `u128` while they fit
//! and spill into [`BigUint`] otherwise.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use num_bigint::{BigInt, BigUint};
use num_traits::Zero;

use crate::error::{invalid, Error, Result};
use crate::mask::{self, level_params, mask_set, Level};
use crate::numeration;
use crate::report::Report;

/// Default cap on the number of points a sweep may visit.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Exact accumulator: fast `u128` lane with a big-integer overflow lane.
#[derive(Clone, Debug, Default)]
struct Accumulator {
    fast: u128,
    spill: BigUint,
}

impl Accumulator {
    #[inline]
    fn add(&mut self, v: u128) {
        match self.fast.checked_add(v) {
            Some(s) => self.fast = s,
            None => {
                self.spill += self.fast;
                self.fast = v;
            }
        }
    }

    fn add_big(&mut self, v: &BigUint) {
        self.spill += v;
    }

    fn total(&self) -> BigUint {
        &self.spill + self.fast
    }
}

/// Per-class, per-degree power sums over `[0, interval_length)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumTable {
    classes: usize,
    max_degree: u32,
    interval_length: u64,
    /// Row-major `[class][degree]`.
    sums: Vec<BigUint>,
}

impl PowerSumTable {
    /// Sums `n^k` for `n` in `range`, grouped by `classify(n) < classes`.
    pub fn accumulate(
        classes: usize,
        max_degree: u32,
        interval_length: u64,
        range: Range<u64>,
        classify: impl Fn(u64) -> usize,
    ) -> Self {
        let width = max_degree as usize + 1;
        let mut acc = vec![Accumulator::default(); classes * width];
        for n in range {
            let row = &mut acc[classify(n) * width..][..width];
            let mut pow: u128 = 1;
            let mut k = 0;
            // Fast path while n^k fits in u128.
            loop {
                row[k].add(pow);
                k += 1;
                if k == width {
                    break;
                }
                match pow.checked_mul(n as u128) {
                    Some(p) => pow = p,
                    None => {
                        let mut big = BigUint::from(pow) * n;
                        row[k].add_big(&big);
                        k += 1;
                        while k < width {
                            big *= n;
                            row[k].add_big(&big);
                            k += 1;
                        }
                        break;
                    }
                }
            }
        }
        PowerSumTable {
            classes,
            max_degree,
            interval_length,
            sums: acc.iter().map(Accumulator::total).collect(),
        }
    }

    /// Adds the sums of a disjoint sub-range computed separately.
    pub fn merge(&mut self, other: &PowerSumTable) {
        assert_eq!(self.classes, other.classes);
        assert_eq!(self.max_degree, other.max_degree);
        for (a, b) in self.sums.iter_mut().zip(&other.sums) {
            *a += b;
        }
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    pub fn interval_length(&self) -> u64 {
        self.interval_length
    }

    pub fn sum(&self, class: usize, degree: u32) -> &BigUint {
        &self.sums[class * (self.max_degree as usize + 1) + degree as usize]
    }

    /// The degree-`k` sums of all classes.
    pub fn column(&self, degree: u32) -> Vec<BigUint> {
        (0..self.classes).map(|c| self.sum(c, degree).clone()).collect()
    }

    pub fn degree_equal(&self, degree: u32) -> bool {
        let first = self.sum(0, degree);
        (1..self.classes).all(|c| self.sum(c, degree) == first)
    }

    /// Largest `k <= max_degree` with all classes equal on degrees `0..=k`;
    /// `None` if even the cardinalities differ.
    pub fn equal_through(&self) -> Option<u32> {
        let mut best = None;
        for k in 0..=self.max_degree {
            if !self.degree_equal(k) {
                break;
            }
            best = Some(k);
        }
        best
    }

    /// First pair of classes whose degree-`k` sums differ.
    pub fn unequal_pair(&self, degree: u32) -> Option<(usize, usize)> {
        for i in 0..self.classes {
            for j in i + 1..self.classes {
                if self.sum(i, degree) != self.sum(j, degree) {
                    return Some((i, j));
                }
            }
        }
        None
    }
}

/// Which partition of which interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartitionSpec {
    /// Two classes by `a_m` on `[0, B(m)^periods)`.
    Binary { m: u64, periods: u64 },
    /// `2^k` classes by `(a_{m_1}, ..., a_{m_k})` on `[0, 2^exponent)`;
    /// `exponent` must be a multiple of the common period.
    Multi { levels: Vec<u64>, exponent: u64 },
    /// `d` classes by `(Σ_{p & m = 0} δ_p(n)) mod d` on `[0, d^digits)`.
    BaseD { d: u64, m: u64, digits: u64 },
    /// Two classes by `M2` on `[0, 2^exponent)`.
    M2 { exponent: u64 },
}

fn pow_checked(base: u64, exp: u64) -> Option<u64> {
    u32::try_from(exp).ok().and_then(|e| base.checked_pow(e))
}

fn too_large(base: u64, exp: u64, budget: u64) -> Error {
    let points = u32::try_from(exp)
        .ok()
        .and_then(|e| (base as u128).checked_pow(e))
        .unwrap_or(u128::MAX);
    Error::BudgetExceeded { points, budget }
}

impl PartitionSpec {
    pub fn binary(m: u64, periods: u64) -> Self {
        PartitionSpec::Binary { m, periods }
    }

    pub fn base_d(d: u64, m: u64, periods: u64) -> Result<Self> {
        let period = level_params(m)?.period;
        Ok(PartitionSpec::BaseD {
            d,
            m,
            digits: period * periods,
        })
    }

    fn validate(&self) -> Result<()> {
        match self {
            PartitionSpec::Binary { m, periods } => {
                level_params(*m)?;
                if *periods == 0 {
                    return Err(invalid("L must be at least 1"));
                }
            }
            PartitionSpec::Multi { levels, exponent } => {
                if levels.is_empty() {
                    return Err(invalid("at least one level is required"));
                }
                let mut seen = BTreeSet::new();
                for &m in levels {
                    level_params(m)?;
                    if !seen.insert(m) {
                        return Err(Error::DuplicateLevel(m));
                    }
                }
                if levels.len() > 16 {
                    return Err(invalid("at most 16 levels"));
                }
                let period = common_period(levels)?;
                if *exponent == 0 || exponent % period != 0 {
                    return Err(Error::IncompatibleL {
                        l: *exponent,
                        period,
                    });
                }
            }
            PartitionSpec::BaseD { d, m, digits } => {
                level_params(*m)?;
                if *d < 2 {
                    return Err(invalid("base d must be at least 2"));
                }
                if *digits == 0 {
                    return Err(invalid("interval exponent must be at least 1"));
                }
            }
            PartitionSpec::M2 { exponent } => {
                if *exponent == 0 {
                    return Err(invalid("L must be at least 1"));
                }
            }
        }
        Ok(())
    }

    /// `N`, checked against `budget`.
    pub fn interval_length(&self, budget: u64) -> Result<u64> {
        self.validate()?;
        let (base, exp) = match self {
            PartitionSpec::Binary { m, periods } => (2, level_params(*m)?.period * periods),
            PartitionSpec::Multi { exponent, .. } => (2, *exponent),
            PartitionSpec::BaseD { d, digits, .. } => (*d, *digits),
            PartitionSpec::M2 { exponent } => (2, *exponent),
        };
        match pow_checked(base, exp) {
            Some(n) if n <= budget => Ok(n),
            _ => Err(too_large(base, exp, budget)),
        }
    }

    pub fn classes(&self) -> usize {
        match self {
            PartitionSpec::Binary { .. } | PartitionSpec::M2 { .. } => 2,
            PartitionSpec::Multi { levels, .. } => 1 << levels.len(),
            PartitionSpec::BaseD { d, .. } => *d as usize,
        }
    }

    /// Degree through which the classes provably agree: the number of
    /// selected digit positions (minimized over characters for the
    /// multi-level case) minus one. `None` means not even the class sizes
    /// are forced equal.
    pub fn predicted_degree(&self) -> Result<Option<u64>> {
        self.validate()?;
        let order = match self {
            PartitionSpec::Binary { m, periods } => {
                vanishing_order(*m, level_params(*m)?.period * periods)?
            }
            PartitionSpec::Multi { levels, exponent } => {
                return multi_degree(levels, *exponent);
            }
            PartitionSpec::BaseD { m, digits, .. } => vanishing_order(*m, *digits)?,
            PartitionSpec::M2 { exponent } => numeration::m2_selected_count(*exponent),
        };
        Ok(order.checked_sub(1))
    }

    /// Class of each point of the interval.
    pub fn classifier(&self) -> Result<Classifier> {
        self.validate()?;
        Ok(match self {
            PartitionSpec::Binary { m, .. } => Classifier::Binary(Level::new(*m)?),
            PartitionSpec::Multi { levels, .. } => Classifier::Multi(
                levels.iter().map(|&m| Level::new(m)).collect::<Result<_>>()?,
            ),
            PartitionSpec::BaseD { d, m, .. } => {
                Classifier::BaseD { d: *d, m: *m }
            }
            PartitionSpec::M2 { .. } => Classifier::M2,
        })
    }
}

/// Precomputed class function of a [`PartitionSpec`].
#[derive(Clone, Debug)]
pub enum Classifier {
    Binary(Level),
    Multi(Vec<Level>),
    BaseD { d: u64, m: u64 },
    M2,
}

impl Classifier {
    #[inline]
    pub fn class(&self, n: u64) -> usize {
        match self {
            Classifier::Binary(level) => level.at(n) as usize,
            Classifier::Multi(levels) => levels
                .iter()
                .enumerate()
                .fold(0, |acc, (i, l)| acc | ((l.at(n) as usize) << i)),
            Classifier::BaseD { d, m } => masked_digit_sum_mod(*d, *m, n) as usize,
            Classifier::M2 => numeration::m2(n) as usize,
        }
    }
}

/// `(Σ_{p & m = 0} δ_p(n)) mod d` with `δ_p` the base-`d` digits.
pub fn masked_digit_sum_mod(d: u64, m: u64, mut n: u64) -> u64 {
    let mut sum = 0u64;
    let mut p = 0u64;
    while n > 0 {
        if p & m == 0 {
            sum += n % d;
        }
        n /= d;
        p += 1;
    }
    sum % d
}

/// `t_d(n)`: base-`d` digit sum mod `d`.
pub fn digit_sum_mod(d: u64, n: u64) -> u64 {
    masked_digit_sum_mod(d, 0, n)
}

/// Exact power sums for `spec` through `max_degree`, single-threaded.
pub fn power_sums(spec: &PartitionSpec, max_degree: u32, budget: u64) -> Result<PowerSumTable> {
    let len = spec.interval_length(budget)?;
    let classifier = spec.classifier()?;
    Ok(PowerSumTable::accumulate(
        spec.classes(),
        max_degree,
        len,
        0..len,
        |n| classifier.class(n),
    ))
}

/// Outcome of a PTE check: equality through the predicted degree and
/// failure one degree above it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PteVerdict {
    pub classes: usize,
    pub interval_length: u64,
    /// Predicted equal-sum degree (`None`: cardinalities not forced equal).
    pub predicted: Option<u64>,
    /// Largest degree through which the computed sums agree, scanning up to
    /// `predicted + 1`.
    pub degree_achieved: Option<u64>,
    /// Sums differ at `predicted + 1`.
    pub sharp: bool,
    /// Pair of classes witnessing the failure at `predicted + 1`.
    pub witness: Option<(usize, usize)>,
    pub class_sizes: Vec<u64>,
}

impl PteVerdict {
    pub fn holds(&self) -> bool {
        self.predicted == self.degree_achieved && self.sharp
    }
}

/// Degree of the table to compute for `spec`: one past the prediction.
pub fn sharpness_degree(spec: &PartitionSpec) -> Result<u32> {
    let next = spec.predicted_degree()?.map_or(0, |d| d + 1);
    u32::try_from(next).map_err(|_| invalid("degree too large"))
}

/// Judges a table computed through [`sharpness_degree`].
pub fn judge(spec: &PartitionSpec, table: &PowerSumTable) -> Result<PteVerdict> {
    let predicted = spec.predicted_degree()?;
    let top = sharpness_degree(spec)?;
    if table.max_degree() < top {
        return Err(invalid("power-sum table does not reach the sharpness degree"));
    }
    let achieved = table.equal_through().map(|k| (k as u64).min(top as u64));
    let witness = table.unequal_pair(top);
    Ok(PteVerdict {
        classes: table.classes(),
        interval_length: table.interval_length(),
        predicted,
        degree_achieved: achieved,
        sharp: witness.is_some(),
        witness,
        class_sizes: (0..table.classes())
            .map(|c| u64::try_from(table.sum(c, 0)).unwrap_or(u64::MAX))
            .collect(),
    })
}

/// Computes and judges `spec`.
pub fn verify(spec: &PartitionSpec, budget: u64) -> Result<PteVerdict> {
    let table = power_sums(spec, sharpness_degree(spec)?, budget)?;
    judge(spec, &table)
}

/// Binary partition by `a_m` on `[0, B(m)^L)`; predicted degree `s_m L - 1`.
pub fn pte_verify(m: u64, l: u64, budget: u64) -> Result<PteVerdict> {
    verify(&PartitionSpec::binary(m, l), budget)
}

/// `|S(m) ∩ [0, len)|`, the order of vanishing at `x = 1`.
pub fn vanishing_order(m: u64, len: u64) -> Result<u64> {
    Ok(mask_set(m)?.count_below(len))
}

/// `2^max K(m_i)`.
pub fn common_period(levels: &[u64]) -> Result<u64> {
    let mut period = 1;
    for &m in levels {
        period = period.max(level_params(m)?.period);
    }
    Ok(period)
}

/// Minimum over nonempty level subsets of the symmetric-difference size per
/// period, scaled to the interval, minus one.
pub fn multi_degree(levels: &[u64], exponent: u64) -> Result<Option<u64>> {
    if levels.is_empty() {
        return Err(invalid("at least one level is required"));
    }
    if levels.len() > 16 {
        return Err(invalid("at most 16 levels"));
    }
    let period = common_period(levels)?;
    if !exponent.is_multiple_of(period) {
        return Err(Error::IncompatibleL {
            l: exponent,
            period,
        });
    }
    let words: Vec<u64> = levels.iter().map(|&m| mask::selection_word(m)).collect();
    let window = if period == 64 { u64::MAX } else { (1u64 << period) - 1 };
    let min = (1u32..1 << levels.len())
        .map(|subset| {
            let sym = words
                .iter()
                .enumerate()
                .filter(|(i, _)| subset & (1 << i) != 0)
                .fold(0u64, |acc, (_, w)| acc ^ w);
            (sym & window).count_ones() as u64
        })
        .min()
        .expect("nonempty");
    Ok((min * (exponent / period)).checked_sub(1))
}

/// Multi-level partition on `[0, 2^L)`.
pub fn multi_pte_verify(levels: &[u64], l: u64, budget: u64) -> Result<PteVerdict> {
    verify(
        &PartitionSpec::Multi {
            levels: levels.to_vec(),
            exponent: l,
        },
        budget,
    )
}

/// Base-`d` masked partition on `[0, d^(2^K L))`.
pub fn pte_d_verify(d: u64, m: u64, l: u64, budget: u64) -> Result<PteVerdict> {
    verify(&PartitionSpec::base_d(d, m, l)?, budget)
}

/// Base-`d` masked partition on `[0, d^digits)` for an arbitrary digit count.
pub fn pte_d_verify_digits(d: u64, m: u64, digits: u64, budget: u64) -> Result<PteVerdict> {
    verify(&PartitionSpec::BaseD { d, m, digits }, budget)
}

/// Partition by `M2` on `[0, 2^L)`.
pub fn m2_pte_verify(l: u64, budget: u64) -> Result<PteVerdict> {
    verify(&PartitionSpec::M2 { exponent: l }, budget)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaViolation {
    /// `α_j(α_i(n)) != d α_i(n) + (j - i) mod d`.
    Composition { i: u64, j: u64, n: u64, lhs: u64, rhs: u64 },
    /// The pairing formula disagrees with the scanned enumeration.
    Enumeration { j: u64, n: u64, formula: u64, scanned: u64 },
}

/// `α_{j,d}(n) = d n + (j - t_d(n)) mod d`.
pub fn alpha(d: u64, j: u64, n: u64) -> u64 {
    d * n + (j + d - digit_sum_mod(d, n)) % d
}

/// Checks the base-`d` level-0 composition identities and that each
/// `α_{j,d}` enumerates `{k : t_d(k) = j}` in order.
pub fn alpha_compose_check(d: u64, n_max: u64) -> Result<Report<AlphaViolation>> {
    if d < 2 {
        return Err(invalid("base d must be at least 2"));
    }
    let mut report = Report::new();
    // α_j(n) < d (n + 1), so scanning up to d (n_max + 1) covers every index.
    let mut classes: Vec<Vec<u64>> = vec![Vec::new(); d as usize];
    for k in 0..d * (n_max + 1) {
        classes[digit_sum_mod(d, k) as usize].push(k);
    }
    for j in 0..d {
        for n in 0..n_max {
            let formula = alpha(d, j, n);
            let scanned = classes[j as usize][n as usize];
            report.check(formula == scanned, || AlphaViolation::Enumeration {
                j,
                n,
                formula,
                scanned,
            });
        }
    }
    for i in 0..d {
        for j in 0..d {
            for n in 0..n_max {
                let inner = alpha(d, i, n);
                let lhs = alpha(d, j, inner);
                let rhs = d * inner + (j + d - i) % d;
                report.check(lhs == rhs, || AlphaViolation::Composition {
                    i,
                    j,
                    n,
                    lhs,
                    rhs,
                });
            }
        }
    }
    Ok(report)
}

/// An Eisenstein integer `re + im ω` with `ω² = -1 - ω`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eisenstein {
    pub re: BigInt,
    pub im: BigInt,
}

impl Eisenstein {
    pub fn zero() -> Self {
        Eisenstein {
            re: BigInt::zero(),
            im: BigInt::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Adds `c · ω^e`.
    fn add_scaled_root(&mut self, e: u64, c: &BigInt) {
        match e % 3 {
            0 => self.re += c,
            1 => self.im += c,
            _ => {
                self.re -= c;
                self.im -= c;
            }
        }
    }
}

/// `Σ_{n < 3^digits} ω^{t · a_m^{(3)}(n)} n^k` in exact `Z[ω]` arithmetic.
pub fn character_sum_base3(m: u64, digits: u64, t: u64, k: u32, budget: u64) -> Result<Eisenstein> {
    let len = PartitionSpec::BaseD { d: 3, m, digits }.interval_length(budget)?;
    let mut acc = Eisenstein::zero();
    for n in 0..len {
        let e = t * masked_digit_sum_mod(3, m, n);
        acc.add_scaled_root(e, &BigInt::from(n).pow(k));
    }
    Ok(acc)
}
