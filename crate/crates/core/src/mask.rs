//! Bitmask arithmetic for the iterated tower.
//!
//! Level `m` of the tower is the parity of the binary digits of `n` whose
//! positions `p` satisfy `p & m == 0`. The selected positions repeat with
//! period `2^K(m)`, so for every admissible mask the selection pattern fits in
//! a single `u64` and one `AND` plus `popcount` evaluates a term.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::word::Word;

/// Largest period a mask may have; periods are powers of two so the
/// effective bound is 32 (masks `0..=31`).
pub const MAX_PERIOD: u64 = 63;

/// `SELECT[m]` has bit `p` set iff `p & m == 0`, for bit positions `p < 64`.
/// Only `m & 63` matters for those positions.
const SELECT: [u64; 64] = {
    let mut table = [0u64; 64];
    let mut m = 0;
    while m < 64 {
        let mut word = 0u64;
        let mut p = 0;
        while p < 64 {
            if p & m == 0 {
                word |= 1 << p;
            }
            p += 1;
        }
        table[m] = word;
        m += 1;
    }
    table
};

/// Selection word of mask `m` over the 64 low bit positions.
#[inline]
pub fn selection_word(m: u64) -> u64 {
    SELECT[(m & 63) as usize]
}

/// `K(m) = max(1, ceil(log2(m + 1)))`, i.e. the bit length of `m`, at least 1.
#[inline]
pub fn mask_exponent(m: u64) -> u32 {
    (u64::BITS - m.leading_zeros()).max(1)
}

/// Thue-Morse: parity of the binary digit sum.
#[inline]
pub fn tm(n: u64) -> u8 {
    (n.count_ones() & 1) as u8
}

/// Derived parameters of a bitmask level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LevelParams {
    pub m: u64,
    /// `K(m)`.
    pub k: u32,
    /// `2^K`.
    pub period: u64,
    /// Selected positions per period, `2^(K - popcount(m))`.
    pub s: u64,
    /// Automaticity base `B(m) = 2^period`.
    pub base: u64,
}

/// A periodic subset of the nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicBitSet {
    pub period: u64,
    /// Strictly increasing, all `< period`.
    pub residues: Vec<u64>,
}

impl PeriodicBitSet {
    pub fn new(period: u64, residues: Vec<u64>) -> Self {
        debug_assert!(period >= 1);
        debug_assert!(residues.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(residues.iter().all(|&r| r < period));
        PeriodicBitSet { period, residues }
    }

    pub fn contains(&self, q: u64) -> bool {
        self.residues.binary_search(&(q % self.period)).is_ok()
    }

    /// `|set ∩ [0, len)|`.
    pub fn count_below(&self, len: u64) -> u64 {
        let full = len / self.period;
        let rest = len % self.period;
        full * self.residues.len() as u64
            + self.residues.iter().filter(|&&r| r < rest).count() as u64
    }

    /// The set's members below 64 packed into a word.
    pub fn to_word(&self) -> u64 {
        (0..64u64)
            .filter(|&q| self.contains(q))
            .fold(0, |w, q| w | (1 << q))
    }
}

/// Computes the level parameters, rejecting masks whose period exceeds
/// [`MAX_PERIOD`].
pub fn level_params(m: u64) -> Result<LevelParams> {
    let k = mask_exponent(m);
    let period = 1u64 << k.min(63);
    if k >= 63 || period > MAX_PERIOD {
        return Err(Error::MaskTooLarge { m, k });
    }
    Ok(LevelParams {
        m,
        k,
        period,
        s: 1 << (k - m.count_ones()),
        base: 1 << period,
    })
}

/// `S(m)` as a periodic set of bit positions.
pub fn mask_set(m: u64) -> Result<PeriodicBitSet> {
    let params = level_params(m)?;
    let residues = (0..params.period).filter(|p| p & m == 0).collect();
    Ok(PeriodicBitSet::new(params.period, residues))
}

/// `a_m(n)`: XOR of the binary digits of `n` at positions disjoint from `m`.
#[inline]
pub fn a(m: u64, n: u64) -> u8 {
    ((n & selection_word(m)).count_ones() & 1) as u8
}

/// `v_m(n)`, the `n`-th generalized evil number (pairing lemma).
#[inline]
pub fn evil(m: u64, n: u64) -> u64 {
    2 * n + a(m, 2 * n) as u64
}

/// `u_m(n)`, the `n`-th generalized odious number (pairing lemma).
#[inline]
pub fn odious(m: u64, n: u64) -> u64 {
    2 * n + 1 - a(m, 2 * n) as u64
}

/// The first `len` terms of `a_m`.
pub fn prefix(m: u64, len: usize) -> Word {
    Level::unchecked(m).iter().take(len).collect()
}

/// A validated level with its selection word precomputed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Level {
    m: u64,
    select: u64,
}

impl Level {
    pub fn new(m: u64) -> Result<Self> {
        level_params(m)?;
        Ok(Self::unchecked(m))
    }

    /// Any mask evaluates correctly on `u64` inputs; only the derived
    /// parameters need the period bound.
    pub(crate) fn unchecked(m: u64) -> Self {
        Level {
            m,
            select: selection_word(m),
        }
    }

    pub fn mask(&self) -> u64 {
        self.m
    }

    pub fn params(&self) -> LevelParams {
        level_params(self.m).expect("validated at construction")
    }

    #[inline]
    pub fn at(&self, n: u64) -> u8 {
        ((n & self.select).count_ones() & 1) as u8
    }

    /// Streams `a_m(0), a_m(1), ...`.
    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0u64..).map(move |n| self.at(n))
    }
}

/// Kernel of size at most two at base `B`: `a_m(B n + r) = a_m(n) XOR a_m(r)`
/// for every `r < B` and `n < n_max`. Returns the number of failures.
pub fn kernel_check(m: u64, n_max: u64, r_step: u64) -> Result<u64> {
    let params = level_params(m)?;
    let shift = params.period as u32;
    if (n_max.max(1) - 1).checked_shl(shift).is_none_or(|v| v >> shift != n_max.max(1) - 1) {
        return Err(crate::error::invalid("B * n overflows u64"));
    }
    let level = Level::unchecked(m);
    let mut failures = 0;
    let mut r = 0;
    while r < params.base {
        let eps = level.at(r);
        for n in 0..n_max {
            if level.at((n << shift) | r) != level.at(n) ^ eps {
                failures += 1;
            }
        }
        r += r_step.max(1);
    }
    Ok(failures)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Direct digit-by-digit evaluation, independent of the selection table.
    fn a_naive(m: u64, n: u64) -> u8 {
        let mut acc = 0;
        for p in 0..64 {
            if p & m == 0 {
                acc ^= ((n >> p) & 1) as u8;
            }
        }
        acc
    }

    #[test]
    fn params_match_table() {
        let expect = [
            (0, 1, 2, 2, 4),
            (1, 1, 2, 1, 4),
            (2, 2, 4, 2, 16),
            (3, 2, 4, 1, 16),
            (4, 3, 8, 4, 256),
            (5, 3, 8, 2, 256),
            (6, 3, 8, 2, 256),
            (7, 3, 8, 1, 256),
        ];
        for (m, k, period, s, base) in expect {
            let p = level_params(m).unwrap();
            assert_eq!((p.k, p.period, p.s, p.base), (k, period, s, base), "m = {m}");
        }
        let p9 = level_params(9).unwrap();
        assert_eq!((p9.k, p9.base, p9.s), (4, 65536, 4));
    }

    #[test]
    fn overflow_guard() {
        assert!(level_params(31).is_ok());
        assert_eq!(level_params(32), Err(Error::MaskTooLarge { m: 32, k: 6 }));
        assert!(level_params(u64::MAX).is_err());
        assert!(mask_set(100).is_err());
        assert!(Level::new(64).is_err());
    }

    #[test]
    fn mask_sets() {
        assert_eq!(mask_set(3).unwrap(), PeriodicBitSet::new(4, alloc::vec![0]));
        assert_eq!(mask_set(1).unwrap(), PeriodicBitSet::new(2, alloc::vec![0]));
        assert_eq!(mask_set(5).unwrap(), PeriodicBitSet::new(8, alloc::vec![0, 2]));
        for m in 0..32 {
            let set = mask_set(m).unwrap();
            assert_eq!(set.residues.len() as u64, level_params(m).unwrap().s);
            assert_eq!(set.to_word(), selection_word(m));
        }
    }

    #[test]
    fn point_values() {
        assert_eq!(a(0, 3), 0);
        assert_eq!(a(1, 4), 1);
        assert_eq!(a(7, 255), 1);
        assert_eq!(a(7, 256), 1);
        for m in 0..40 {
            assert_eq!(a(m, 0), 0);
        }
        for n in 0..256 {
            assert_eq!(a(7, n), (n % 2) as u8);
        }
    }

    #[test]
    fn evil_and_odious_first_terms() {
        let odious0: Vec<u64> = (0..5).map(|n| odious(0, n)).collect();
        let evil0: Vec<u64> = (0..5).map(|n| evil(0, n)).collect();
        assert_eq!(odious0, [1, 2, 4, 7, 8]);
        assert_eq!(evil0, [0, 3, 5, 6, 9]);
        let evil1: Vec<u64> = (0..4).map(|n| evil(1, n)).collect();
        let odious1: Vec<u64> = (0..4).map(|n| odious(1, n)).collect();
        assert_eq!(evil1, [0, 2, 5, 7]);
        assert_eq!(odious1, [1, 3, 4, 6]);
    }

    #[test]
    fn enumerators_list_positions_in_order() {
        for m in 0..=16 {
            let (mut zeros, mut ones) = (Vec::new(), Vec::new());
            for k in 0..4000 {
                if a(m, k) == 0 { zeros.push(k) } else { ones.push(k) }
            }
            for n in 0..1000 {
                assert_eq!(evil(m, n), zeros[n as usize], "m = {m}");
                assert_eq!(odious(m, n), ones[n as usize], "m = {m}");
            }
        }
    }

    #[test]
    fn prefixes() {
        assert_eq!(prefix(0, 8).to_bit_string(), "01101001");
        assert_eq!(prefix(3, 8).to_bit_string(), "01010101");
        assert!(prefix(5, 0).is_empty());
    }

    #[test]
    fn small_period_coincidence() {
        for m in 4..8 {
            for n in 0..16 {
                assert_eq!(a(m, n), a(m - 4, n));
            }
        }
        assert_ne!(prefix(4, 64), prefix(0, 64));
    }

    #[test]
    fn pairing_and_sum_law() {
        for m in 0..=16 {
            for n in 0..10_000 {
                assert_eq!(a(m, 2 * n) ^ a(m, 2 * n + 1), 1);
                assert_eq!(odious(m, n) + evil(m, n), 4 * n + 1);
            }
        }
    }

    #[test]
    fn aligned_blocks_are_balanced() {
        for m in 0..8 {
            let b = level_params(m).unwrap().base;
            for q in 0..4 {
                let ones: u64 = (q * b..(q + 1) * b).map(|n| a(m, n) as u64).sum();
                assert_eq!(ones, b / 2, "m = {m}, q = {q}");
            }
        }
    }

    #[test]
    fn kernel_has_two_classes() {
        for m in 0..=3 {
            assert_eq!(kernel_check(m, 1 << 12, 1).unwrap(), 0, "m = {m}");
        }
        assert_eq!(kernel_check(9, 1 << 12, 97).unwrap(), 0);
        assert!(kernel_check(31, 1 << 40, 1).is_err());
    }

    proptest! {
        #[test]
        fn closed_form_matches_digit_loop(m in 0u64..64, n in any::<u64>()) {
            prop_assert_eq!(a(m, n), a_naive(m, n));
        }

        #[test]
        fn level_matches_free_function(m in 0u64..32, n in any::<u64>()) {
            prop_assert_eq!(Level::new(m).unwrap().at(n), a(m, n));
        }
    }
}
