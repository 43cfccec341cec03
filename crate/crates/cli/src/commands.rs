use linvar_core::boolfn::{
    algebraic_degree, distance_to_affine, distance_to_family, max_nontrivial_coeff, wht, BooleanFunction,
};
use linvar_core::extremal::{
    affine_ramsey_bound, find_subspace_in_set, ramsey_find, ramsey_min_n, strict_affine_ramsey_find,
    turan_extremal_set, Color, PointSet,
};
use linvar_core::f2::{F2Vector, Subspace};
use linvar_core::families::{family_from_oracle, rm_family, rm_matrix, rm_membership};
use linvar_core::regularity::{functional_regularize, green_regularize, RegularityBudget, RegularityPartition};
use linvar_core::systems::{complexity, count_induced, induces_at, is_free, Family, InducedSystem, Witness};
use linvar_core::tester::{estimate_reject_prob, oblivious_test, SampleMode, TestMode, TesterConfig};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::*;
use crate::error::{CliError, Result};
use crate::input::{family_arg, family_spec, spec_of, system_arg};
use crate::report::RunReport;
use crate::source::FunctionSource;
use crate::table::write_table;

/// Exact rational from `a/b`, an integer or a decimal such as `0.125`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || CliError::Input(format!("cannot parse {s:?} as a rational number"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.chars().any(|c| !c.is_ascii_digit()) || (int.is_empty() && frac.is_empty()) {
        return Err(bad());
    }
    let int = if int.is_empty() || int == "-" { format!("{int}0") } else { int.to_string() };
    let whole: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    Ok(BigRational::new(whole, BigInt::from(10u8).pow(frac.len() as u32)))
}

fn positive(s: &str) -> Result<BigRational> {
    let r = parse_rational(s)?;
    if !r.is_positive() {
        return Err(CliError::Input(format!("{s} must be positive")));
    }
    Ok(r)
}

fn load(a: &FnArgs) -> Result<BooleanFunction> {
    a.source.parse::<FunctionSource>()?.load(a.n)
}

fn family(a: &FamilyArgs) -> Result<Family> {
    match (&a.family, &a.system) {
        (Some(f), None) => family_arg(f),
        (None, Some(s)) => Ok(Family::single(system_arg(s)?.system)),
        _ => Err(CliError::Usage("give exactly one of --family and --system".into())),
    }
}

fn inputs<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("arguments serialize")
}

fn bits(dim: usize, v: u64) -> String {
    F2Vector::truncated(dim, v).to_string()
}

fn basis(h: &Subspace) -> Vec<String> {
    h.basis().iter().map(|v| v.to_string()).collect()
}

fn witness_json(w: &Option<Witness>, systems: &[InducedSystem]) -> (Value, Value) {
    match w {
        None => (Value::Null, Value::Null),
        Some(w) => (
            json!(w.x.iter().map(|v| v.to_string()).collect::<Vec<_>>()),
            json!({"index": w.system, "system": spec_of(&systems[w.system])}),
        ),
    }
}

fn mode_name(mode: SampleModeArg) -> SampleMode {
    match mode {
        SampleModeArg::Subspace => SampleMode::Subspace,
        SampleModeArg::Points => SampleMode::Points,
    }
}

pub fn execute(cmd: &Command) -> Result<RunReport> {
    match cmd {
        Command::Analyze(a) => analyze(a),
        Command::Count(a) => count(a),
        Command::Free(a) => free(a),
        Command::Verify(a) => verify(a),
        Command::Test(a) => test(a),
        Command::Estimate(a) => estimate(a),
        Command::Regularize(a) => regularize(a),
        Command::Complexity(a) => complexity_cmd(a),
        Command::Turan(a) => turan(a),
        Command::Ramsey(a) => ramsey(a),
        Command::Rm(a) => rm(a),
        Command::Obstructions(a) => obstructions(a),
        Command::Distance(a) => distance(a),
        Command::Table(a) => table(a),
    }
}

fn analyze(a: &AnalyzeArgs) -> Result<RunReport> {
    let f = load(&a.func)?;
    let n = f.n();
    let mut result = json!({
        "n": n,
        "ones": f.ones(),
        "density": f.density().to_string(),
        "degree": algebraic_degree(&f),
        "distance_to_affine": distance_to_affine(&f).to_string(),
    });
    if n > 0 {
        let (alpha, max) = max_nontrivial_coeff(&f)?;
        result["max_coeff"] = json!(max.to_string());
        result["max_coeff_f64"] = json!(max.to_f64());
        result["argmax"] = json!(alpha.to_string());
        if let Some(eps) = &a.eps {
            result["uniform"] = json!(max.to_rational() < positive(eps)?);
        }
    }
    if a.spectrum {
        result["spectrum"] = json!(wht(&f).numerators());
    }
    if a.anf {
        result["anf"] = json!(crate::anf::format_anf(&f));
    }
    Ok(RunReport::new("analyze", inputs(a), result, None))
}

fn count(a: &CountArgs) -> Result<RunReport> {
    let f = load(&a.func)?;
    let parsed = system_arg(&a.system)?;
    let sys = &parsed.system;
    let c = count_induced(&f, sys)?;
    let solutions = BigInt::from(1u8) << (f.n() * (sys.k() - sys.m()));
    let result = json!({
        "count": c,
        "k": sys.k(),
        "m": sys.m(),
        "solutions": solutions.to_string(),
        "fraction": BigRational::new(BigInt::from(c), solutions).to_string(),
        "system": spec_of(sys),
        "reductions": parsed.reductions.iter().map(|r| json!({"kept": r.kept, "removed": r.removed})).collect::<Vec<_>>(),
    });
    Ok(RunReport::new("count", inputs(a), result, None))
}

fn free(a: &FreeArgs) -> Result<RunReport> {
    let f = load(&a.func)?;
    let fam = family(&a.family)?;
    let systems = fam.realize()?;
    let report = is_free(&f, &fam)?;
    let (witness, which) = witness_json(&report.witness, &systems);
    let result = json!({
        "free": report.free,
        "witness": witness,
        "witness_system": which,
        "systems_checked": report.systems_checked,
    });
    Ok(RunReport::new("free", inputs(a), result, None))
}

fn verify(a: &VerifyArgs) -> Result<RunReport> {
    let f = load(&a.func)?;
    let sys = system_arg(&a.system)?.system;
    let xs = a
        .witness
        .split(',')
        .map(|s| F2Vector::parse_bits(s).map_err(CliError::from))
        .collect::<Result<Vec<_>>>()?;
    let result = json!({ "induces": induces_at(&f, &sys, &xs)? });
    Ok(RunReport::new("verify", inputs(a), result, None))
}

fn test(a: &TestArgs) -> Result<RunReport> {
    let f = load(&a.func)?;
    let fam = family(&a.family)?;
    let systems = fam.realize()?;
    let mut cfg = TesterConfig::new(positive(&a.eps)?, a.dim, a.trials);
    cfg.small_n_cutoff = a.cutoff;
    cfg.seed = a.seed;
    cfg.mode = mode_name(a.sample_mode);
    let v = oblivious_test(&f, &fam, &cfg)?;
    let (witness, which) = witness_json(&v.witness, &systems);
    let result = json!({
        "accept": v.accept,
        "mode": match v.mode { TestMode::Exhaustive => "exhaustive", TestMode::Sampled => "sampled" },
        "queries": v.queries,
        "trial": v.trial,
        "witness": witness,
        "witness_system": which,
    });
    Ok(RunReport::new("test", inputs(a), result, Some(a.seed)))
}

fn estimate(a: &EstimateArgs) -> Result<RunReport> {
    let f = load(&a.func)?;
    let fam = family(&a.family)?;
    let est = estimate_reject_prob(&f, &fam, a.dim, a.trials, a.seed, mode_name(a.sample_mode))?;
    let result = json!({
        "rejects": est.rejects,
        "trials": est.trials,
        "estimate": est.estimate.to_string(),
        "lower": est.lower,
        "upper": est.upper,
    });
    Ok(RunReport::new("estimate", inputs(a), result, Some(a.seed)))
}

fn partition_json(p: &RegularityPartition, with_cosets: bool) -> Value {
    let dim = p.h.dim();
    let mut v = json!({
        "order": p.order,
        "dim": dim,
        "basis": basis(&p.h),
        "index": p.index.to_string(),
        "eps": p.eps.to_string(),
        "bad_cosets": p.bad_cosets,
        "bad_fraction": p.bad_fraction.to_string(),
        "flagged": p.flagged,
        "rounds": p.rounds.iter().map(|r| json!({
            "order": r.order,
            "index": r.index.to_string(),
            "bad_fraction": r.bad_fraction.to_string(),
            "witnesses": r.witnesses.iter().map(|w| bits(dim.max(1), *w)).collect::<Vec<_>>(),
            "covered_fraction": r.covered_fraction.to_string(),
            "guaranteed_gain": r.guaranteed_gain.to_string(),
        })).collect::<Vec<_>>(),
    });
    if with_cosets {
        v["cosets"] = json!((0..p.cosets.len() as u64)
            .map(|c| json!({
                "rep": bits(p.h.ambient_dim(), p.cosets[c as usize].rep),
                "density": p.coset_density(c).to_string(),
                "max_coeff": p.coset_max_coeff(c).to_string(),
            }))
            .collect::<Vec<_>>());
    }
    v
}

fn regularize(a: &RegularizeArgs) -> Result<RunReport> {
    let f = load(&a.func)?;
    let eps = positive(&a.eps)?;
    let budget = RegularityBudget { max_order: a.max_order, max_rounds: a.max_rounds };
    let result = match a.method {
        Method::Green => {
            let start = Subspace::standard(f.n(), a.codim)?;
            partition_json(&green_regularize(&f, &eps, &start, budget)?, a.cosets)
        }
        Method::Functional => {
            let schedule = a.schedule;
            let e = move |k: usize| match schedule {
                ScheduleArg::Const => eps.clone(),
                ScheduleArg::Halving => &eps / BigRational::from_integer(BigInt::from(1u8) << k),
            };
            let reg = functional_regularize(&f, a.codim, &e, budget)?;
            json!({
                "coarse": partition_json(&reg.coarse, a.cosets),
                "fine": partition_json(&reg.fine, a.cosets),
                "iterations": reg.iterations,
                "flagged": reg.flagged,
                "gap": {
                    "gap": reg.gap.gap.to_string(),
                    "bad_fraction": reg.gap.bad_fraction.to_string(),
                    "premise": reg.gap.premise,
                    "conclusion": reg.gap.conclusion,
                },
                "guarantees": {
                    "orders": reg.guarantees.orders,
                    "coarse_uniform": reg.guarantees.coarse_uniform,
                    "fine_uniform": reg.guarantees.fine_uniform,
                    "density_agreement": reg.guarantees.density_agreement,
                    "all": reg.guarantees.all(),
                },
            })
        }
    };
    Ok(RunReport::new("regularize", inputs(a), result, None))
}

fn complexity_cmd(a: &ComplexityArgs) -> Result<RunReport> {
    let sys = system_arg(&a.system)?.system;
    let result = json!({
        "complexity": complexity(sys.matrix())?,
        "k": sys.k(),
        "m": sys.m(),
    });
    Ok(RunReport::new("complexity", inputs(a), result, None))
}

fn support_set(source: &str, n: Option<usize>) -> Result<PointSet> {
    let f = source.parse::<FunctionSource>()?.load(n)?;
    Ok(PointSet::from_fn(f.n(), |x| f.get(x))?)
}

fn turan(a: &TuranArgs) -> Result<RunReport> {
    let result = match &a.source {
        None => {
            let n = a.n.ok_or_else(|| CliError::Usage("turan needs --n or --fn".into()))?;
            let s = turan_extremal_set(n, a.d)?;
            let expected = (BigInt::from(1u8) << n) - (BigInt::from(1u8) << (n + 1 - a.d));
            json!({
                "size": s.len(),
                "expected": expected.to_string(),
                "contains_subspace": find_subspace_in_set(&s, a.d)?.is_some(),
                "complement": s.complement().points().iter().map(|x| bits(n, *x)).collect::<Vec<_>>(),
            })
        }
        Some(src) => {
            let s = support_set(src, a.n)?;
            let found = find_subspace_in_set(&s, a.d)?;
            json!({
                "size": s.len(),
                "contains_subspace": found.is_some(),
                "subspace": found.as_ref().map(basis),
            })
        }
    };
    Ok(RunReport::new("turan", inputs(a), result, None))
}

fn colour_name(c: Color) -> &'static str {
    match c {
        Color::InSet => "set",
        Color::InComplement => "complement",
    }
}

fn ramsey(a: &RamseyArgs) -> Result<RunReport> {
    let result = if a.bound {
        json!({ "affine_bound": affine_ramsey_bound(a.d)?.to_string() })
    } else if let Some(src) = &a.source {
        let s = support_set(src, a.n)?;
        let n = s.n();
        if a.strict_affine {
            match strict_affine_ramsey_find(&s, a.d)? {
                None => json!({ "found": false, "n": n }),
                Some(c) => json!({
                    "found": true,
                    "n": n,
                    "colour": colour_name(c.color),
                    "shift": c.flat.shift().to_string(),
                    "basis": basis(c.flat.subspace()),
                }),
            }
        } else {
            match ramsey_find(&s, a.d)? {
                None => json!({ "found": false, "n": n }),
                Some(c) => json!({ "found": true, "n": n, "colour": colour_name(c.color), "basis": basis(&c.subspace) }),
            }
        }
    } else {
        let min = ramsey_min_n(a.d)?;
        json!({
            "n": min.n,
            "representatives": min.representatives,
            "counterexample": min.counterexample.map(|c| {
                let m = c.n();
                c.points().iter().map(|x| bits(m, *x)).collect::<Vec<_>>()
            }),
        })
    };
    Ok(RunReport::new("ramsey", inputs(a), result, None))
}

fn rm(a: &RmArgs) -> Result<RunReport> {
    let m = rm_matrix(a.d)?;
    let fam = rm_family(a.d)?;
    let result = json!({
        "matrix": m.to_row_strings(),
        "shape": [m.nrows(), m.ncols()],
        "family": family_spec(&fam)?,
    });
    Ok(RunReport::new("rm", inputs(a), result, None))
}

fn obstructions(a: &ObstructionArgs) -> Result<RunReport> {
    let prop = a.property;
    let oracle = move |f: &BooleanFunction| match prop {
        Property::Constant => f.is_constant(),
        Property::Zero => f.ones() == 0,
        Property::Rm1 => rm_membership(f, 1),
        Property::Rm2 => rm_membership(f, 2),
    };
    let out = family_from_oracle(oracle, a.max_d)?;
    let pair = |(d, s): &(usize, u64)| json!({ "d": d, "support": bits(1 << d, *s) });
    let result = json!({
        "family": family_spec(&out.family)?,
        "minimal": out.minimal.iter().map(pair).collect::<Vec<_>>(),
        "lifted": out.lifted.iter().map(pair).collect::<Vec<_>>(),
    });
    Ok(RunReport::new("obstructions", inputs(a), result, None))
}

fn distance(a: &DistanceArgs) -> Result<RunReport> {
    let f = load(&a.func)?;
    let fam = family(&a.family)?;
    let d = distance_to_family(&f, &fam)?;
    let result = json!({ "distance": d.to_string(), "n": f.n() });
    Ok(RunReport::new("distance", inputs(a), result, None))
}

fn table(a: &TableArgs) -> Result<RunReport> {
    let f = load(&a.func)?;
    let text = write_table(&f);
    let result = match &a.out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::Input(format!("cannot write {}: {e}", path.display())))?;
            json!({ "n": f.n(), "written": path.display().to_string() })
        }
        None => json!({ "n": f.n(), "table": text }),
    };
    Ok(RunReport::new("table", inputs(a), result, None))
}
