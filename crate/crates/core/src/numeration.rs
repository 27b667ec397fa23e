//! Zeckendorf numeration, the Fibonacci-Thue-Morse word, and the
//! meta-Thue-Morse sequence `M2`.
//!
//! Fibonacci numbers are indexed with `F_0 = 0`, `F_1 = 1`, `F_2 = 1`,
//! `F_3 = 2`, so Zeckendorf supports use indices `>= 2`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::complexity::{finite_word_profile, ComplexityProfile};
use crate::error::{invalid, Error, Result};
use crate::mask::tm;
use crate::report::{Mismatch, Report};
use crate::transform::{transform_prefix, Builtin, SequenceOracle};
use crate::word::Word;

/// Largest index with `F_i` in `u64`.
pub const MAX_FIB_INDEX: u32 = 93;

const FIB: [u64; MAX_FIB_INDEX as usize + 1] = {
    let mut t = [0u64; MAX_FIB_INDEX as usize + 1];
    t[1] = 1;
    let mut i = 2;
    while i <= MAX_FIB_INDEX as usize {
        t[i] = t[i - 1] + t[i - 2];
        i += 1;
    }
    t
};

/// `F_i`, panicking past [`MAX_FIB_INDEX`].
#[inline]
pub fn fib(i: u32) -> u64 {
    FIB[i as usize]
}

/// `F_i` with no size limit.
pub fn fib_big(i: u32) -> BigUint {
    let (mut a, mut b) = (BigUint::zero(), BigUint::one());
    for _ in 0..i {
        let next = &a + &b;
        a = core::mem::replace(&mut b, next);
    }
    a
}

/// Zeckendorf digits of an integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ZeckendorfRep {
    /// Fibonacci indices, strictly increasing, pairwise non-adjacent, `>= 2`.
    pub support: Vec<u32>,
}

impl ZeckendorfRep {
    pub fn value(&self) -> u64 {
        self.support.iter().map(|&i| fib(i)).sum()
    }

    pub fn is_admissible(&self) -> bool {
        self.support.first().is_none_or(|&i| i >= 2)
            && self.support.windows(2).all(|w| w[1] >= w[0] + 2)
    }

    /// `s_F(n)`.
    pub fn digit_sum(&self) -> usize {
        self.support.len()
    }
}

/// Greedy Zeckendorf decomposition.
pub fn zeckendorf(mut n: u64) -> ZeckendorfRep {
    let mut support = Vec::new();
    let mut i = 2;
    while i < MAX_FIB_INDEX && fib(i + 1) <= n {
        i += 1;
    }
    while n > 0 {
        let f = fib(i);
        if f <= n {
            n -= f;
            support.push(i);
            // the next index down cannot be used
            i = i.saturating_sub(1);
        }
        i -= 1;
    }
    support.reverse();
    ZeckendorfRep { support }
}

/// Fibonacci-Thue-Morse: parity of the Zeckendorf digit sum.
pub fn ftm(n: u64) -> u8 {
    (zeckendorf(n).digit_sum() & 1) as u8
}

/// `ftm` on `[0, len)`. For `j < F_{k-1}` the representation of `F_k + j`
/// is that of `j` plus `F_k`, so each block is the complement of an earlier
/// prefix.
pub fn ftm_prefix(len: u64) -> Vec<u8> {
    let len = len as usize;
    let mut out = vec![0u8, 1];
    let mut k = 3;
    while out.len() < len {
        // out covers [0, F_k); append [F_k, F_{k+1})
        let tail = fib(k - 1) as usize;
        for j in 0..tail {
            out.push(1 - out[j]);
        }
        k += 1;
    }
    out.truncate(len);
    out
}

/// Point counts of both `ftm` classes on `[0, F_{3r})` and the period-6 sign
/// sequence `P_L(1)` on the same sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibBalance {
    pub r: u32,
    pub interval_length: u64,
    pub zeros: u64,
    pub ones: u64,
    /// `P_L(1)` for `L = 0 ..= 3r - 3`, summed directly.
    pub signs: Vec<i64>,
    /// The same values from `a_L = a_{L-1} - a_{L-2}`, `a_0 = 0`, `a_1 = -1`.
    pub recursion: Vec<i64>,
}

impl FibBalance {
    pub fn balanced(&self) -> bool {
        self.zeros == self.ones
    }

    pub fn holds(&self) -> bool {
        self.balanced() && self.signs == self.recursion
    }
}

fn fib_interval(r: u32, extra: u32, budget: u64) -> Result<u64> {
    if r == 0 {
        return Err(invalid("r must be at least 1"));
    }
    let idx = 3 * r + extra;
    if idx > MAX_FIB_INDEX {
        return Err(Error::BudgetExceeded {
            points: u128::MAX,
            budget,
        });
    }
    let len = fib(idx);
    if len > budget {
        return Err(Error::BudgetExceeded {
            points: len as u128,
            budget,
        });
    }
    Ok(len)
}

/// Balance of `ftm` on `[0, F_{3r})`.
pub fn fib_balance_check(r: u32, budget: u64) -> Result<FibBalance> {
    let len = fib_interval(r, 0, budget)?;
    let word = ftm_prefix(len);
    let ones = word.iter().filter(|&&b| b == 1).count() as u64;
    let mut signs = Vec::new();
    let mut running = 0i64;
    // P_L covers [0, F_{L+3})
    let mut l = 0u32;
    for (n, &b) in word.iter().enumerate() {
        running += 1 - 2 * b as i64;
        while l + 3 <= 3 * r && (fib(l + 3) as usize) == n + 1 {
            signs.push(running);
            l += 1;
        }
    }
    let mut recursion = vec![0i64, -1];
    while recursion.len() < signs.len() {
        let k = recursion.len();
        recursion.push(recursion[k - 1] - recursion[k - 2]);
    }
    recursion.truncate(signs.len());
    Ok(FibBalance {
        r,
        interval_length: len,
        zeros: len - ones,
        ones,
        signs,
        recursion,
    })
}

/// Signed power-sum defects of the `ftm` partition on `[0, F_{3r})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FibDefectReport {
    pub r: u32,
    pub defect1: BigInt,
    pub defect2: BigInt,
    pub predicted1: BigInt,
    pub predicted2: BigInt,
}

impl FibDefectReport {
    pub fn matches(&self, degree: u32) -> bool {
        match degree {
            1 => self.defect1 == self.predicted1,
            2 => self.defect2 == self.predicted2,
            _ => false,
        }
    }
}

fn signed_by_r(r: u32, v: BigInt) -> BigInt {
    if r.is_multiple_of(2) { v } else { -v }
}

/// `(-1)^r (F_{3r+1} - 1) / 2`.
pub fn predicted_defect1(r: u32) -> BigInt {
    let f: BigInt = fib_big(3 * r + 1).into();
    signed_by_r(r, (f - 1) / 2)
}

/// `B_r` with `4 B_r = F_{3r+2}^2 - 2 F_{3r}^2 - 4 F_{3r+1} - 2 F_{3r} + 3`.
pub fn defect2_magnitude(r: u32) -> BigInt {
    let f0: BigInt = fib_big(3 * r).into();
    let f1: BigInt = fib_big(3 * r + 1).into();
    let f2: BigInt = fib_big(3 * r + 2).into();
    let four_b = &f2 * &f2 - 2 * &f0 * &f0 - 4 * f1 - 2 * f0 + 3;
    four_b / 4
}

/// `Σ_{ftm=0} n^k - Σ_{ftm=1} n^k` over `[0, F_{3r})` for `k` in {1, 2},
/// beside the closed forms.
pub fn fib_defect(r: u32, budget: u64) -> Result<FibDefectReport> {
    let len = fib_interval(r, 0, budget)?;
    let word = ftm_prefix(len);
    let (mut d1, mut d2) = (0i128, 0i128);
    for (n, &b) in word.iter().enumerate() {
        let n = n as i128;
        let sign = 1 - 2 * b as i128;
        d1 += sign * n;
        d2 += sign * n * n;
    }
    Ok(FibDefectReport {
        r,
        defect1: d1.into(),
        defect2: d2.into(),
        predicted1: predicted_defect1(r),
        predicted2: signed_by_r(r, defect2_magnitude(r)),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMismatch {
    pub l: u32,
    pub index: usize,
    pub recursion: i64,
    pub direct: i64,
}

/// Coefficients of `P_L` by the recursion.
pub fn fib_poly_recursive(l: u32) -> Vec<i64> {
    let mut prev = vec![1i64, -1];
    if l == 0 {
        return prev;
    }
    let mut cur = vec![1i64, -1, -1];
    for k in 2..=l {
        let shift = fib(k + 2) as usize;
        let mut next = cur.clone();
        next.resize(shift + prev.len(), 0);
        for (i, &c) in prev.iter().enumerate() {
            next[shift + i] -= c;
        }
        prev = core::mem::replace(&mut cur, next);
    }
    cur
}

/// Coefficients of `Σ_{n < F_{L+3}} (-1)^{s_F(n)} x^n`.
pub fn fib_poly_direct(l: u32) -> Vec<i64> {
    ftm_prefix(fib(l + 3))
        .iter()
        .map(|&b| 1 - 2 * b as i64)
        .collect()
}

/// Compares both constructions of `P_L` for `L <= l_max`.
pub fn fib_poly_recursion_check(l_max: u32, budget: u64) -> Result<Report<PolyMismatch>> {
    if l_max + 3 > MAX_FIB_INDEX || fib(l_max + 3) > budget {
        return Err(Error::BudgetExceeded {
            points: if l_max + 3 > MAX_FIB_INDEX { u128::MAX } else { fib(l_max + 3) as u128 },
            budget,
        });
    }
    let mut report = Report::new();
    for l in 0..=l_max {
        let rec = fib_poly_recursive(l);
        let direct = fib_poly_direct(l);
        let width = rec.len().max(direct.len());
        for index in 0..width {
            let a = rec.get(index).copied().unwrap_or(0);
            let b = direct.get(index).copied().unwrap_or(0);
            report.check(a == b, || PolyMismatch {
                l,
                index,
                recursion: a,
                direct: b,
            });
        }
    }
    Ok(report)
}

/// Bits at positions `p ≡ 2, 5 (mod 6)`.
const M2_CLEARED: u64 = {
    let mut w = 0u64;
    let mut p = 0;
    while p < 64 {
        if p % 3 == 2 {
            w |= 1 << p;
        }
        p += 1;
    }
    w
};

/// `M2(n)`: Thue-Morse of `n` with digits at positions `p ≡ 2 (mod 3)`
/// cleared.
#[inline]
pub fn m2(n: u64) -> u8 {
    tm(n & !M2_CLEARED)
}

/// `|S_L|`: positions below `L` kept by [`m2`].
pub fn m2_selected_count(l: u64) -> u64 {
    l - l / 3
}

/// `M2` on `[0, len)` from the four recurrences; every right-hand side refers
/// to a smaller index so one forward pass suffices.
pub fn m2_by_recurrence(len: u64) -> Vec<u8> {
    let len = len as usize;
    let mut out = vec![0u8; len];
    for k in 1..len {
        out[k] = if k % 2 == 1 {
            1 - out[k - 1]
        } else if k % 4 == 0 {
            let n = k / 4;
            out[2 * n + out[n] as usize]
        } else {
            let n = k / 4;
            out[2 * n + 1 - out[n] as usize]
        };
    }
    out
}

/// Closed form against the recurrences on `[0, n)`.
pub fn m2_check(n: u64) -> Report<Mismatch> {
    let mut report = Report::new();
    for (k, &expected) in m2_by_recurrence(n).iter().enumerate() {
        let got = m2(k as u64);
        report.check(got == expected, || Mismatch {
            index: k as u64,
            expected: expected as u64,
            got: got as u64,
        });
    }
    report
}

pub const EXPLORATORY: &str = "EXPLORATORY";

/// `T(ftm)` on a finite prefix. No property of this word is asserted.
#[derive(Clone, Debug)]
pub struct ExploratoryOrbit {
    pub label: &'static str,
    pub word: Word,
    pub profile: ComplexityProfile,
    pub ones: u64,
}

/// Applies the transform to the `ftm` seed and profiles the finite result
/// for window lengths up to `n_max`.
pub fn tm_transform_of_ftm(len: u64, n_max: usize) -> Result<ExploratoryOrbit> {
    if len < 2 {
        return Err(invalid("length must be at least 2"));
    }
    let seed = SequenceOracle::new(Builtin::Ftm)?;
    let word = transform_prefix(&seed, len)?;
    let profile = finite_word_profile(word.as_slice(), n_max.min(word.len()));
    let ones = word.ones() as u64;
    Ok(ExploratoryOrbit {
        label: EXPLORATORY,
        word,
        profile,
        ones,
    })
}
