//! Acceptance criteria, one line per criterion. Runs without the libtest
//! harness so each line reports its own wall time against a fixed limit.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use tmtower::complexity::{self, mersenne_formula};
use tmtower::corrections::{self, correction_set, shifted_mask_set, Correction};
use tmtower::mask::{self, a, level_params, Level};
use tmtower::numeration::{self, defect2_magnitude};
use tmtower::pte::{self, PartitionSpec, DEFAULT_BUDGET};
use tmtower::transform::{iterate_tower_prefix, verify_closed_form};

type Outcome = Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

const GOLDEN: [&str; 8] = [
    "0110100110010110",
    "0101101001011010",
    "0110011001100110",
    "0101010101010101",
    "0110100110010110",
    "0101101001011010",
    "0110011001100110",
    "0101010101010101",
];

fn golden_table() -> Outcome {
    for (m, row) in GOLDEN.iter().enumerate() {
        for (n, ch) in row.bytes().enumerate() {
            let want = ch - b'0';
            let got = a(m as u64, n as u64);
            ensure(got == want, || format!("a_{m}({n}) = {got}, table says {want}"))?;
        }
    }
    Ok(())
}

fn operator_equals_closed_form() -> Outcome {
    for m in 0..=8 {
        let r = verify_closed_form(m, 1 << 16).map_err(|e| e.to_string())?;
        ensure(r.verified(), || format!("m = {m}: {} mismatches", r.mismatches.len()))?;
        let iterated = iterate_tower_prefix(m, 1 << 16).map_err(|e| e.to_string())?;
        ensure(iterated == mask::prefix(m, 1 << 16), || format!("m = {m}: prefix differs"))?;
    }
    Ok(())
}

// (odd m, residues of C(m) in one period, period)
const CORRECTION_TABLE: [(u64, &[u64], u64); 8] = [
    (1, &[0], 2),
    (3, &[2], 4),
    (5, &[0, 6], 8),
    (7, &[6], 8),
    (9, &[0, 2, 4, 14], 16),
    (11, &[2, 14], 16),
    (13, &[0, 14], 16),
    (15, &[14], 16),
];

const C1_FIRST: &str = "01011010010110101010";
const C3_FIRST: &str = "00001111000011110000";

fn composition_suite() -> Outcome {
    const N: u64 = 10_000;
    for m in 0..=16 {
        let r = corrections::verify_composition(m, N).map_err(|e| e.to_string())?;
        ensure(r.holds() && r.checked == 4 * N, || {
            format!("m = {m}: {} violations, first {:?}", r.violations.len(), r.violations.first())
        })?;
        for n in 0..N {
            ensure(mask::odious(m, n) + mask::evil(m, n) == 4 * n + 1, || {
                format!("sum law fails at m = {m}, n = {n}")
            })?;
        }
    }
    let zero = correction_set(0).map_err(|e| e.to_string())?;
    ensure(zero.residues.is_empty(), || "C(0) not empty".into())?;
    for (m, residues, period) in CORRECTION_TABLE {
        for mm in [m, m + 1] {
            let set = correction_set(mm).map_err(|e| e.to_string())?;
            ensure(set.period == period && set.residues == residues, || {
                format!("C({mm}) = {:?} mod {}, table says {residues:?} mod {period}", set.residues, set.period)
            })?;
        }
    }
    // closed forms of the Mersenne rows
    for (m, shift) in [(1u64, 0u32), (3, 2), (7, 6), (15, 14)] {
        for mm in [m, m + 1] {
            let c = Correction::new(mm).map_err(|e| e.to_string())?;
            for n in (0..1u64 << 20).step_by(7) {
                ensure(c.at(n) == a(m, n >> shift), || format!("c_{mm}({n}) closed form"))?;
            }
        }
    }
    for (m, row) in [(1, C1_FIRST), (3, C3_FIRST)] {
        let c = Correction::new(m).map_err(|e| e.to_string())?;
        let got: String = (0..20).map(|n| char::from(b'0' + c.at(n))).collect();
        ensure(got == row, || format!("c_{m} first terms {got}"))?;
    }
    Ok(())
}

fn cross_level_suite() -> Outcome {
    const N: u64 = 10_000;
    for m in 0..=8 {
        for mp in 0..=8 {
            let r = corrections::verify_cross(m, mp, N).map_err(|e| e.to_string())?;
            ensure(r.holds(), || {
                format!("(m, m') = ({m}, {mp}): first violation {:?}", r.violations.first())
            })?;
        }
        if m % 2 == 1 {
            // odd outer level: the correction does not depend on the inner level
            let same = corrections::verify_composition(m, N).map_err(|e| e.to_string())?;
            ensure(same.holds(), || format!("same-level m = {m}"))?;
        }
    }
    Ok(())
}

fn pte_exactness() -> Outcome {
    for (m, l, n, degree) in [(0u64, 3u64, 64u64, 5u64), (1, 2, 16, 1), (5, 1, 256, 1), (9, 1, 65536, 3)] {
        let v = pte::pte_verify(m, l, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(v.interval_length == n, || format!("m = {m}: N = {}", v.interval_length))?;
        ensure(v.holds() && v.degree_achieved == Some(degree), || {
            format!("m = {m}, L = {l}: verdict {v:?}")
        })?;
        // sharpness re-derived from the table itself
        let table = pte::power_sums(&PartitionSpec::binary(m, l), degree as u32 + 1, DEFAULT_BUDGET)
            .map_err(|e| e.to_string())?;
        ensure(
            (0..=degree as u32).all(|k| table.degree_equal(k)) && !table.degree_equal(degree as u32 + 1),
            || format!("m = {m}: table disagrees with verdict"),
        )?;
    }
    let t = pte::power_sums(&PartitionSpec::binary(1, 2), 2, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    let col = |k| t.column(k);
    ensure(col(1) == [BigUint::from(60u32), BigUint::from(60u32)], || format!("{:?}", col(1)))?;
    ensure(col(2) == [BigUint::from(636u32), BigUint::from(604u32)], || format!("{:?}", col(2)))?;
    Ok(())
}

fn multi_level() -> Outcome {
    let v = pte::multi_pte_verify(&[0, 1], 8, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(v.class_sizes == [64, 64, 64, 64], || format!("sizes {:?}", v.class_sizes))?;
    ensure(v.degree_achieved == Some(3) && v.sharp && v.witness.is_some(), || format!("{v:?}"))?;
    for levels in [&[0u64, 1][..], &[0, 2], &[0, 1, 2]] {
        for l in [4u64, 8, 12, 16] {
            let d = pte::multi_degree(levels, l).map_err(|e| e.to_string())?;
            ensure(d == Some(l / 2 - 1), || format!("{levels:?}, L = {l}: D = {d:?}"))?;
        }
        for l in [8u64, 16] {
            let v = pte::multi_pte_verify(levels, l, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
            ensure(v.holds() && v.sharp && v.degree_achieved == Some(l / 2 - 1), || {
                format!("{levels:?}, L = {l}: {v:?}")
            })?;
        }
    }
    Ok(())
}

fn base_d() -> Outcome {
    let spec = PartitionSpec::BaseD { d: 3, m: 0, digits: 3 };
    let v = pte::verify(&spec, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(v.interval_length == 27 && v.classes == 3, || format!("{v:?}"))?;
    ensure(v.degree_achieved == Some(2) && v.sharp, || format!("{v:?}"))?;
    let v = pte::pte_d_verify(3, 1, 1, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(v.interval_length == 9 && v.class_sizes == [3, 3, 3], || format!("{v:?}"))?;
    ensure(v.degree_achieved == Some(0) && v.sharp, || format!("{v:?}"))?;
    let t = pte::power_sums(&PartitionSpec::BaseD { d: 3, m: 1, digits: 2 }, 1, DEFAULT_BUDGET)
        .map_err(|e| e.to_string())?;
    let want: Vec<BigUint> = [9u32, 12, 15].map(BigUint::from).to_vec();
    ensure(t.column(1) == want, || format!("degree-1 sums {:?}", t.column(1)))?;
    for d in 2..=4 {
        let r = pte::alpha_compose_check(d, 10_000).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("d = {d}: {:?}", r.violations.first()))?;
    }
    Ok(())
}

// (lo, hi, slope, intercept)
const PIECES_K1: [(u64, u64, u64, i128); 10] = [
    (1, 5, 2, 0),
    (6, 8, 4, -10),
    (9, 17, 2, 6),
    (18, 29, 4, -28),
    (30, 65, 2, 30),
    (66, 113, 4, -100),
    (114, 257, 2, 126),
    (258, 449, 4, -388),
    (450, 1025, 2, 510),
    (1026, 1100, 4, -1540),
];

const PIECES_K2: [(u64, u64, u64, i128); 6] = [
    (1, 17, 2, 0),
    (18, 32, 4, -34),
    (33, 257, 2, 30),
    (258, 497, 4, -484),
    (498, 4097, 2, 510),
    (4098, 4200, 4, -7684),
];

fn mersenne_complexity() -> Outcome {
    for (k, fixture) in [(1u32, &PIECES_K1[..]), (2, &PIECES_K2[..])] {
        for &(lo, hi, slope, intercept) in fixture {
            for n in lo..=hi {
                let want = slope as i128 * n as i128 + intercept;
                let got = mersenne_formula(k, n);
                ensure(got == BigUint::try_from(want).unwrap(), || {
                    format!("K = {k}, n = {n}: formula {got}, table {want}")
                })?;
            }
        }
        let pieces = complexity::mersenne_pieces(k, fixture.last().unwrap().1);
        let as_tuples: Vec<_> = pieces.iter().map(|p| (p.lo, p.hi, p.slope, p.intercept)).collect();
        ensure(as_tuples == fixture, || format!("K = {k}: pieces {as_tuples:?}"))?;
    }
    for (k, m, n_max) in [(1u32, 1u64, 200usize), (2, 3, 60)] {
        let brute = complexity::level_profile(m, n_max).map_err(|e| e.to_string())?;
        let formula = complexity::formula_profile(k, n_max).map_err(|e| e.to_string())?;
        ensure(brute.values == formula.values, || format!("K = {k}: brute differs from formula"))?;
    }
    let r = complexity::verify_reduction(1, 60).map_err(|e| e.to_string())?;
    ensure(r.holds(), || format!("reduction: {:?}", r.violations.first()))?;
    for k in 1..=2 {
        let desub = complexity::desub_profile(k, 100_000).map_err(|e| e.to_string())?;
        let formula = complexity::formula_profile(k, 100_000).map_err(|e| e.to_string())?;
        ensure(desub.values == formula.values, || format!("K = {k}: desub differs from formula"))?;
    }
    let initial: [(u64, [u64; 12]); 3] = [
        (1, [2, 4, 6, 8, 10, 14, 18, 22, 24, 26, 28, 30]),
        (2, [2, 4, 6, 10, 12, 14, 16, 18, 20, 22, 24, 26]),
        (3, [2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24]),
    ];
    for (m, want) in initial {
        let p = complexity::level_profile(m, 12).map_err(|e| e.to_string())?;
        ensure(p.values == want, || format!("a_{m}: {:?}", p.values))?;
    }
    Ok(())
}

fn fibonacci() -> Outcome {
    for r in 1..=8 {
        let b = numeration::fib_balance_check(r, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(b.holds(), || format!("r = {r}: {} zeros, {} ones", b.zeros, b.ones))?;
    }
    for r in 1..=10 {
        let d = numeration::fib_defect(r, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(d.matches(1), || format!("r = {r}: degree-1 defect {} vs {}", d.defect1, d.predicted1))?;
        ensure(d.matches(2), || format!("r = {r}: degree-2 defect {} vs {}", d.defect2, d.predicted2))?;
    }
    for (r, b) in (1..=5).zip([1i64, 62, 1331, 24860, 450261]) {
        let d = numeration::fib_defect(r, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(d.defect2.magnitude() == &BigUint::from(b as u64), || format!("r = {r}: |defect| {}", d.defect2))?;
        ensure(defect2_magnitude(r) == b.into(), || format!("B_{r}"))?;
    }
    let r = numeration::fib_poly_recursion_check(15, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
    ensure(r.holds(), || format!("P_L: {:?}", r.violations.first()))
}

fn meta_thue_morse() -> Outcome {
    let r = numeration::m2_check(1 << 16);
    ensure(r.holds(), || format!("M2: {:?}", r.violations.first()))?;
    for n in 0..1u64 << 15 {
        ensure(numeration::m2(2 * n) + numeration::m2(2 * n + 1) == 1, || format!("balance at {n}"))?;
    }
    for (l, degree) in [(3u64, 1u64), (6, 3), (9, 5), (12, 7)] {
        let v = pte::m2_pte_verify(l, DEFAULT_BUDGET).map_err(|e| e.to_string())?;
        ensure(v.holds() && v.degree_achieved == Some(degree), || format!("L = {l}: {v:?}"))?;
    }
    Ok(())
}

fn property_invariants() -> Outcome {
    // aligned-block balance
    for m in 0..=15 {
        let b = level_params(m).unwrap().base;
        let level = Level::new(m).unwrap();
        for q in 0..4 {
            let zeros = (q * b..(q + 1) * b).filter(|&n| level.at(n) == 0).count() as u64;
            ensure(zeros == b / 2, || format!("m = {m}, block {q}: {zeros} zeros"))?;
        }
    }
    // kernel size <= 2: every r for B <= 256, about 1024 residues beyond
    for m in 0..=31 {
        let base = level_params(m).unwrap().base;
        let step = if base <= 256 { 1 } else { base / 1024 + 1 };
        let fails = mask::kernel_check(m, 1 << 12, step).map_err(|e| e.to_string())?;
        ensure(fails == 0, || format!("kernel, m = {m}: {fails} failures"))?;
    }
    for m in 0..=16 {
        ensure(corrections::toggle_check(m, 1 << 12).holds(), || format!("toggle, m = {m}"))?;
    }
    for m in (2..=30).step_by(2) {
        let r = corrections::discrete_difference_check(m, 1 << 12).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("discrete difference, m = {m}"))?;
    }
    for m in (1..=31).step_by(2) {
        let rec = correction_set(m).unwrap();
        let shifted = shifted_mask_set(m).unwrap();
        ensure(rec == shifted, || format!("cyclic shift, m = {m}: {rec:?} vs {shifted:?}"))?;
    }
    for m in [1u64, 3, 7, 15, 31] {
        let d = complexity::derived_prefix(m, 1 << 16);
        ensure(complexity::has_no_double_zero(d.as_slice()), || format!("00 in Δ, m = {m}"))?;
    }
    for (k, len) in [(1u32, 1usize << 12), (2, 1 << 12), (3, 1 << 16)] {
        let r = complexity::substitution_check(k, len).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("fixed point, K = {k}"))?;
    }
    for m in [1u64, 3, 7] {
        let bits = mask::prefix(m, 1 << 16);
        let r = complexity::complement_closure(bits.as_slice(), 32).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("complement closure, m = {m}: {:?}", r.violations.first()))?;
    }
    Ok(())
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let ms = Duration::from_millis;
    let criteria = [
        Criterion { id: 1, name: "golden value table", limit: Some(ms(1)), run: golden_table },
        Criterion { id: 2, name: "operator equals closed form", limit: Some(ms(5_000)), run: operator_equals_closed_form },
        Criterion { id: 3, name: "composition suite", limit: None, run: composition_suite },
        Criterion { id: 4, name: "cross-level suite", limit: None, run: cross_level_suite },
        Criterion { id: 5, name: "PTE exactness with sharpness", limit: Some(ms(10_000)), run: pte_exactness },
        Criterion { id: 6, name: "multi-level PTE", limit: None, run: multi_level },
        Criterion { id: 7, name: "base-d PTE", limit: None, run: base_d },
        Criterion { id: 8, name: "Mersenne complexity", limit: None, run: mersenne_complexity },
        Criterion { id: 9, name: "Fibonacci balance and defects", limit: None, run: fibonacci },
        Criterion { id: 10, name: "meta-Thue-Morse", limit: None, run: meta_thue_morse },
        Criterion { id: 11, name: "property invariants", limit: Some(ms(60_000)), run: property_invariants },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let outcome = outcome.and_then(|()| match c.limit {
            Some(limit) if elapsed > limit => Err(format!("took {elapsed:?}, limit {limit:?}")),
            _ => Ok(()),
        });
        let limit = c.limit.map_or(String::new(), |l| format!(", limit {l:?}"));
        match outcome {
            Ok(()) => println!("PASS {:>2} {} ({elapsed:.2?}{limit})", c.id, c.name),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {} ({elapsed:.2?}{limit}): {why}", c.id, c.name);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
