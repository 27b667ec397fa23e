//! Command dispatch. Data goes to the supplied writer, diagnostics to stderr.

use std::io::Write;

use serde_json::{json, Value};
use tmtower::complexity::{self, ComplexityProfile, PiecewisePiece};
use tmtower::corrections::{self, CompositionViolation, Correction};
use tmtower::numeration::{self, PolyMismatch};
use tmtower::pte::{AlphaViolation, PartitionSpec, PteVerdict};
use tmtower::transform::{self, SequenceOracle};
use tmtower::{mask, Error, Level, Mismatch, Report};

use crate::args::{Cli, Command, ComplexityArgs, Format, Kind, Method, SeqArgs, TransformArgs, Verify};
use crate::output::{big, sequence_json, write_bfile, write_csv};
use crate::parallel;
use crate::seed::{self, Seed};

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Verified = 0,
    Violation = 1,
    Usage = 2,
    Budget = 3,
}

#[derive(Debug)]
pub struct Failure {
    pub exit: Exit,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { exit: Exit::Usage, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let exit = match e {
            Error::BudgetExceeded { .. } | Error::NoStabilization { .. } => Exit::Budget,
            _ => Exit::Usage,
        };
        Failure { exit, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        // a closed pipe is not a usage error, but there is no better code
        Failure { exit: Exit::Usage, message: e.to_string() }
    }
}

type Outcome = Result<Exit, Failure>;

struct Ctx<'a> {
    budget: u64,
    threads: usize,
    json: bool,
    out: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn guard(&self, points: u64) -> Result<(), Failure> {
        if points > self.budget {
            return Err(Error::BudgetExceeded { points: points as u128, budget: self.budget }.into());
        }
        Ok(())
    }

    fn emit_json(&mut self, v: &Value) -> Result<(), Failure> {
        writeln!(self.out, "{}", serde_json::to_string_pretty(v).expect("json value"))?;
        Ok(())
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Outcome {
    let mut ctx = Ctx {
        budget: cli.budget,
        threads: parallel::thread_count(cli.threads),
        json: cli.json,
        out,
    };
    match &cli.command {
        Command::Seq(args) => seq(&mut ctx, args),
        Command::Transform(args) => transform_cmd(&mut ctx, args),
        Command::Verify(v) => verify(&mut ctx, v),
        Command::Complexity(args) => complexity_cmd(&mut ctx, args),
    }
}

fn is_bit_kind(kind: Kind) -> bool {
    !matches!(kind, Kind::Evil | Kind::Odious)
}

fn emit_values(ctx: &mut Ctx, name: &str, values: &[u64], bits: bool, format: Format, extra: Value) -> Result<(), Failure> {
    let format = if ctx.json { Format::Json } else { format };
    match format {
        Format::Plain if values.is_empty() => {}
        Format::Plain if bits => {
            let s: String = values.iter().map(|&v| char::from(b'0' + v as u8)).collect();
            writeln!(ctx.out, "{s}")?;
        }
        Format::Plain => {
            for v in values {
                writeln!(ctx.out, "{v}")?;
            }
        }
        Format::Bfile => write!(ctx.out, "{}", write_bfile(values, 0))?,
        Format::Csv => {
            let rows = values.iter().enumerate().map(|(n, v)| vec![n.to_string(), v.to_string()]);
            write!(ctx.out, "{}", write_csv(&["n", "value"], rows))?;
        }
        Format::Json => ctx.emit_json(&sequence_json(name, 0, values, extra))?,
    }
    Ok(())
}

fn seq(ctx: &mut Ctx, args: &SeqArgs) -> Outcome {
    let m = args.level;
    let level_needed = !matches!(args.kind, Kind::Ftm | Kind::M2);
    if level_needed {
        Level::new(m)?;
    }
    ctx.guard(args.count)?;
    let n = args.count;
    let values: Vec<u64> = match args.kind {
        Kind::Level => (0..n).map(|i| mask::a(m, i) as u64).collect(),
        Kind::Evil => (0..n).map(|i| mask::evil(m, i)).collect(),
        Kind::Odious => (0..n).map(|i| mask::odious(m, i)).collect(),
        Kind::Correction => {
            let c = Correction::new(m)?;
            (0..n).map(|i| c.at(i) as u64).collect()
        }
        Kind::Derived => (0..n).map(|i| complexity::derived(m, i) as u64).collect(),
        Kind::Ftm => numeration::ftm_prefix(n).into_iter().map(u64::from).collect(),
        Kind::M2 => (0..n).map(|i| numeration::m2(i) as u64).collect(),
    };
    let name = format!("{:?}", args.kind).to_lowercase();
    let extra = if level_needed { json!({ "level": m }) } else { json!({}) };
    emit_values(ctx, &name, &values, is_bit_kind(args.kind), args.format, extra)?;
    Ok(Exit::Verified)
}

fn transform_cmd(ctx: &mut Ctx, args: &TransformArgs) -> Outcome {
    ctx.guard(args.count)?;
    let (seed, label) = match (&args.seed, &args.seed_file) {
        (Some(name), _) => (Seed::Builtin(seed::parse_builtin(name).map_err(Failure::usage)?), name.clone()),
        (None, Some(path)) => (
            Seed::Word(seed::load_seed_file(path).map_err(Failure::usage)?),
            path.display().to_string(),
        ),
        (None, None) => return Err(Failure::usage("one of --seed or --seed-file is required")),
    };
    let oracle = SequenceOracle::new(seed)?;
    let word = transform::transform_prefix(&oracle, args.count)?;
    let values: Vec<u64> = word.iter().map(u64::from).collect();
    let extra = json!({
        "seed": label,
        "caveat": "seed admissibility checked on the consumed prefix only",
    });
    emit_values(ctx, "transform", &values, true, args.format, extra)?;
    Ok(Exit::Verified)
}

trait ViolationJson {
    fn to_json(&self) -> Value;
}

impl ViolationJson for Mismatch {
    fn to_json(&self) -> Value {
        json!({ "index": self.index, "expected": self.expected, "got": self.got })
    }
}

impl ViolationJson for CompositionViolation {
    fn to_json(&self) -> Value {
        json!({ "identity": self.identity.name(), "n": self.n, "lhs": self.lhs, "rhs": self.rhs })
    }
}

impl ViolationJson for AlphaViolation {
    fn to_json(&self) -> Value {
        match *self {
            AlphaViolation::Composition { i, j, n, lhs, rhs } => {
                json!({ "kind": "composition", "i": i, "j": j, "n": n, "lhs": lhs, "rhs": rhs })
            }
            AlphaViolation::Enumeration { j, n, formula, scanned } => {
                json!({ "kind": "enumeration", "j": j, "n": n, "formula": formula, "scanned": scanned })
            }
        }
    }
}

impl ViolationJson for PolyMismatch {
    fn to_json(&self) -> Value {
        json!({ "L": self.l, "index": self.index, "recursion": self.recursion, "direct": self.direct })
    }
}

fn status(ok: bool) -> Exit {
    if ok { Exit::Verified } else { Exit::Violation }
}

fn report_out<V: ViolationJson + std::fmt::Debug>(ctx: &mut Ctx, check: &str, params: Value, r: &Report<V>) -> Outcome {
    if ctx.json {
        ctx.emit_json(&json!({
            "check": check,
            "params": params,
            "budget": ctx.budget,
            "checked": r.checked,
            "verified": r.holds(),
            "notes": r.notes,
            "violations": r.violations.iter().map(ViolationJson::to_json).collect::<Vec<_>>(),
        }))?;
    } else {
        writeln!(ctx.out, "{check} {params}: {} checks, {} violations", r.checked, r.violations.len())?;
        for note in &r.notes {
            writeln!(ctx.out, "note: {note}")?;
        }
        for v in r.violations.iter().take(20) {
            writeln!(ctx.out, "  {v:?}")?;
        }
        if r.violations.len() > 20 {
            writeln!(ctx.out, "  ... {} more (use --json for the full list)", r.violations.len() - 20)?;
        }
        writeln!(ctx.out, "{}", if r.holds() { "verified" } else { "VIOLATED" })?;
    }
    Ok(status(r.holds()))
}

fn verdict_out(ctx: &mut Ctx, check: &str, params: Value, spec: &PartitionSpec) -> Outcome {
    let (v, table): (PteVerdict, _) = parallel::verify(spec, ctx.budget, ctx.threads)?;
    let fmt_deg = |d: Option<u64>| d.map_or("none".to_string(), |d| d.to_string());
    if ctx.json {
        let sums: Vec<Value> = (0..=table.max_degree())
            .map(|k| Value::Array(table.column(k).iter().map(big).collect()))
            .collect();
        ctx.emit_json(&json!({
            "check": check,
            "params": params,
            "budget": ctx.budget,
            "interval_length": v.interval_length,
            "classes": v.classes,
            "class_sizes": v.class_sizes,
            "predicted_degree": v.predicted,
            "degree_achieved": v.degree_achieved,
            "sharp": v.sharp,
            "witness": v.witness,
            "power_sums": sums,
            "verified": v.holds(),
        }))?;
    } else {
        let witness = v.witness.map_or(String::new(), |(i, j)| format!(" (classes {i} and {j} differ one degree up)"));
        writeln!(
            ctx.out,
            "{check} {params}: N = {}, {} classes, degree {}{}{witness}; predicted {}",
            v.interval_length,
            v.classes,
            fmt_deg(v.degree_achieved),
            if v.sharp { ", sharp" } else { ", NOT sharp" },
            fmt_deg(v.predicted),
        )?;
        writeln!(ctx.out, "{}", if v.holds() { "verified" } else { "VIOLATED" })?;
    }
    Ok(status(v.holds()))
}

fn verify(ctx: &mut Ctx, v: &Verify) -> Outcome {
    match *v {
        Verify::ClosedForm { level, count } => {
            Level::new(level)?;
            ctx.guard(count)?;
            let r = transform::verify_closed_form(level, count)?;
            let mut report = Report::new();
            report.checked = r.length;
            report.violations = r.mismatches;
            report.note(r.caveat);
            report_out(ctx, "closed-form", json!({ "level": level, "count": count }), &report)
        }
        Verify::Composition { level, max_n } => {
            ctx.guard(max_n)?;
            let r = corrections::verify_composition(level, max_n)?;
            report_out(ctx, "composition", json!({ "level": level, "max_n": max_n }), &r)
        }
        Verify::Cross { level, inner, max_n } => {
            ctx.guard(max_n)?;
            let r = corrections::verify_cross(level, inner, max_n)?;
            report_out(ctx, "cross", json!({ "level": level, "inner": inner, "max_n": max_n }), &r)
        }
        Verify::Mersenne { k, max_n } => {
            ctx.guard(max_n)?;
            let r = corrections::mersenne_correction_check(k, max_n)?;
            report_out(ctx, "mersenne", json!({ "k": k, "max_n": max_n }), &r)
        }
        Verify::EquivalenceM7 { max_n } => {
            ctx.guard(max_n)?;
            let r = corrections::equivalence_m7_check(max_n)?;
            report_out(ctx, "equivalence-m7", json!({ "max_n": max_n }), &r)
        }
        Verify::Pte { level, l } => {
            verdict_out(ctx, "pte", json!({ "level": level, "L": l }), &PartitionSpec::binary(level, l))
        }
        Verify::Multi { ref levels, l } => verdict_out(
            ctx,
            "multi",
            json!({ "levels": levels, "L": l }),
            &PartitionSpec::Multi { levels: levels.clone(), exponent: l },
        ),
        Verify::PteD { d, level, l, digits } => {
            let spec = match (l, digits) {
                (Some(l), None) => PartitionSpec::base_d(d, level, l)?,
                (None, Some(digits)) => PartitionSpec::BaseD { d, m: level, digits },
                _ => return Err(Failure::usage("give exactly one of --L or --digits")),
            };
            let PartitionSpec::BaseD { digits, .. } = spec else { unreachable!() };
            verdict_out(ctx, "pte-d", json!({ "d": d, "level": level, "digits": digits }), &spec)
        }
        Verify::Alpha { d, max_n } => {
            ctx.guard(max_n.saturating_mul(d))?;
            let r = tmtower::pte::alpha_compose_check(d, max_n)?;
            report_out(ctx, "alpha", json!({ "d": d, "max_n": max_n }), &r)
        }
        Verify::M2 { l, max_n } => {
            ctx.guard(max_n)?;
            let r = numeration::m2_check(max_n);
            let dual = report_out(ctx, "m2-dual-construction", json!({ "max_n": max_n }), &r)?;
            let pte = verdict_out(ctx, "m2-pte", json!({ "L": l }), &PartitionSpec::M2 { exponent: l })?;
            Ok(if dual == Exit::Verified { pte } else { dual })
        }
        Verify::Fib { r, degree } => fib(ctx, r, degree),
    }
}

fn fib(ctx: &mut Ctx, r: u32, degree: u32) -> Outcome {
    if degree == 0 {
        let b = numeration::fib_balance_check(r, ctx.budget)?;
        if ctx.json {
            ctx.emit_json(&json!({
                "check": "fib-balance",
                "params": { "r": r },
                "budget": ctx.budget,
                "interval_length": b.interval_length,
                "zeros": b.zeros,
                "ones": b.ones,
                "sign_sequence": b.signs,
                "sign_recursion": b.recursion,
                "verified": b.holds(),
            }))?;
        } else {
            writeln!(
                ctx.out,
                "fib-balance r = {r}: [0, {}) has {} zeros and {} ones; sign sequence {}",
                b.interval_length,
                b.zeros,
                b.ones,
                if b.signs == b.recursion { "matches the recursion" } else { "DIFFERS from the recursion" },
            )?;
            writeln!(ctx.out, "{}", if b.holds() { "verified" } else { "VIOLATED" })?;
        }
        return Ok(status(b.holds()));
    }
    let d = numeration::fib_defect(r, ctx.budget)?;
    let (got, want) = if degree == 1 { (&d.defect1, &d.predicted1) } else { (&d.defect2, &d.predicted2) };
    let ok = d.matches(degree);
    if ctx.json {
        ctx.emit_json(&json!({
            "check": "fib-defect",
            "params": { "r": r, "degree": degree },
            "budget": ctx.budget,
            "defect": big(got),
            "predicted": big(want),
            "verified": ok,
        }))?;
    } else {
        writeln!(
            ctx.out,
            "fib-defect r = {r}, degree {degree}: defect {got} (magnitude {}), predicted {want}",
            got.magnitude()
        )?;
        writeln!(ctx.out, "{}", if ok { "verified" } else { "VIOLATED" })?;
    }
    Ok(status(ok))
}

fn mersenne_k(m: u64) -> Result<u32, Failure> {
    if !complexity::is_mersenne(m) {
        return Err(Failure::usage(format!(
            "level {m} is not of the form 2^K - 1; only brute-force profiles are available"
        )));
    }
    Ok((m + 1).trailing_zeros())
}

fn profile_json(m: u64, p: &ComplexityProfile) -> Value {
    let stab = p.stabilization.map(|s| {
        json!({
            "initial_prefix": s.initial_len,
            "stable_prefix": s.stable_len,
            "final_prefix": s.final_len,
            "doublings": s.doublings,
        })
    });
    json!({
        "level": m,
        "method": p.method.name(),
        "values": p.values,
        "stabilization": stab,
        "breakpoints": p.breakpoints(),
        "initial_linear_regime": p.initial_linear_regime(),
        "difference_violations": p
            .difference_violations()
            .iter()
            .map(|d| json!({ "n": d.n, "difference": d.difference }))
            .collect::<Vec<_>>(),
    })
}

fn emit_pieces(ctx: &mut Ctx, k: u32, pieces: &[PiecewisePiece], format: Format) -> Result<(), Failure> {
    let format = if ctx.json { Format::Json } else { format };
    match format {
        Format::Json => ctx.emit_json(&json!({
            "K": k,
            "pieces": pieces
                .iter()
                .map(|p| json!({ "lo": p.lo, "hi": p.hi, "slope": p.slope, "intercept": big(p.intercept) }))
                .collect::<Vec<_>>(),
        }))?,
        Format::Csv => {
            let rows = pieces
                .iter()
                .map(|p| vec![p.lo.to_string(), p.hi.to_string(), p.slope.to_string(), p.intercept.to_string()]);
            write!(ctx.out, "{}", write_csv(&["lo", "hi", "slope", "intercept"], rows))?;
        }
        Format::Plain | Format::Bfile => {
            for p in pieces {
                writeln!(ctx.out, "{} {} {} {}", p.lo, p.hi, p.slope, p.intercept)?;
            }
        }
    }
    Ok(())
}

fn emit_profile(ctx: &mut Ctx, m: u64, p: &ComplexityProfile, format: Format) -> Result<(), Failure> {
    let format = if ctx.json { Format::Json } else { format };
    match format {
        Format::Json => ctx.emit_json(&profile_json(m, p))?,
        Format::Csv => {
            let rows = p
                .values
                .iter()
                .zip(1u64..)
                .map(|(v, n)| vec![n.to_string(), v.to_string(), p.method.name().to_string()]);
            write!(ctx.out, "{}", write_csv(&["n", "p", "method"], rows))?;
        }
        Format::Bfile => write!(ctx.out, "{}", write_bfile(&p.values, 1))?,
        Format::Plain => {
            let line: Vec<String> = p.values.iter().map(u64::to_string).collect();
            writeln!(ctx.out, "{}", line.join(" "))?;
        }
    }
    if let Some(s) = p.stabilization {
        eprintln!(
            "brute profile stable from prefix {} (checked to {}, {} doublings)",
            s.stable_len, s.final_len, s.doublings
        );
    }
    Ok(())
}

fn complexity_cmd(ctx: &mut Ctx, args: &ComplexityArgs) -> Outcome {
    let m = args.level;
    Level::new(m)?;
    if args.max == 0 {
        return Err(Failure::usage("--max must be at least 1"));
    }
    if args.pieces {
        let k = mersenne_k(m)?;
        emit_pieces(ctx, k, &complexity::mersenne_pieces(k, args.max as u64), args.format)?;
        return Ok(Exit::Verified);
    }
    let brute = |n_max: usize| -> Result<ComplexityProfile, Failure> {
        let level = Level::new(m)?;
        Ok(complexity::factor_complexity_brute_capped(&level, n_max, args.prefix_cap)?)
    };
    match args.method {
        Method::Brute => {
            let p = brute(args.max)?;
            emit_profile(ctx, m, &p, args.format)?;
            Ok(Exit::Verified)
        }
        Method::Formula => {
            let p = complexity::formula_profile(mersenne_k(m)?, args.max)?;
            emit_profile(ctx, m, &p, args.format)?;
            Ok(Exit::Verified)
        }
        Method::Desub => {
            let p = complexity::desub_profile(mersenne_k(m)?, args.max)?;
            emit_profile(ctx, m, &p, args.format)?;
            Ok(Exit::Verified)
        }
        Method::All => all_methods(ctx, m, args, brute),
    }
}

fn all_methods(
    ctx: &mut Ctx,
    m: u64,
    args: &ComplexityArgs,
    brute: impl Fn(usize) -> Result<ComplexityProfile, Failure>,
) -> Outcome {
    let k = mersenne_k(m)?;
    let formula = complexity::formula_profile(k, args.max)?;
    let desub = complexity::desub_profile(k, args.max)?;
    let brute_max = args.brute_max.min(args.max);
    let b = if brute_max > 0 { Some(brute(brute_max)?) } else { None };
    let mut disagreements = Vec::new();
    for n in 1..=args.max {
        let f = formula.values[n - 1];
        let d = desub.values[n - 1];
        let bv = b.as_ref().and_then(|b| b.get(n));
        if f != d || bv.is_some_and(|bv| bv != f) {
            disagreements.push(json!({ "n": n, "formula": f, "desub": d, "brute": bv }));
        }
    }
    let ok = disagreements.is_empty();
    let format = if ctx.json { Format::Json } else { args.format };
    match format {
        Format::Json => ctx.emit_json(&json!({
            "level": m,
            "K": k,
            "max": args.max,
            "brute_max": brute_max,
            "formula": formula.values,
            "desub": desub.values,
            "brute": b.as_ref().map(|p| profile_json(m, p)),
            "disagreements": disagreements,
            "verified": ok,
        }))?,
        Format::Csv | Format::Bfile | Format::Plain => {
            let rows = (1..=args.max).map(|n| {
                let bv = b.as_ref().and_then(|b| b.get(n)).map_or(String::new(), |v| v.to_string());
                vec![n.to_string(), formula.values[n - 1].to_string(), desub.values[n - 1].to_string(), bv]
            });
            if format == Format::Csv {
                write!(ctx.out, "{}", write_csv(&["n", "formula", "desub", "brute"], rows))?;
            } else {
                writeln!(
                    ctx.out,
                    "level {m}: formula and desub on 1..={}, brute on 1..={brute_max}: {} disagreements",
                    args.max,
                    disagreements.len()
                )?;
                for d in disagreements.iter().take(20) {
                    writeln!(ctx.out, "  {d}")?;
                }
                writeln!(ctx.out, "{}", if ok { "verified" } else { "VIOLATED" })?;
            }
        }
    }
    Ok(status(ok))
}
