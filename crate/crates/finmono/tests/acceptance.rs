//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::process::Command;
use std::time::{Duration, Instant};

use finmono::parallel;
use finmono::table::bundled_2j2;
use finmono::verify::run_suite;
use finmono_core::digit_criterion::{criterion_depth_scan, kubert_classify, verify_digit_sums};
use finmono_core::search::{sweep, SweepConfig};
use finmono_core::trace_engine::{integrality_report, DEFAULT_WORK_BUDGET};
use finmono_core::{moment_comparison, FieldSpec, TraceEngine};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took <= limit {
        Ok(format!("{detail} ({:.2}s)", took.as_secs_f64()))
    } else {
        Err(format!("{detail}, but took {:.1}s > {}s", took.as_secs_f64(), limit.as_secs()))
    }
}

fn check_five_seven() -> Outcome {
    let start = Instant::now();
    let status = Command::new(env!("CARGO_BIN_EXE_finmono"))
        .args(["check", "--p", "5", "--d", "7", "--depth", "8"])
        .output()
        .map_err(|e| e.to_string())?;
    if status.status.code() != Some(0) {
        return Err(format!("exit {:?}: {}", status.status.code(), String::from_utf8_lossy(&status.stdout)));
    }
    let rep = criterion_depth_scan(5, 7, 8).map_err(|e| e.to_string())?;
    if !rep.passed() || rep.depths.len() != 8 {
        return Err(format!("{:?}", rep.status));
    }
    within(Duration::from_secs(60), start, "check --p 5 --d 7 --depth 8 exits 0, depths 1..8 pass".into())
}

fn search_desk_scale() -> Outcome {
    let start = Instant::now();
    let mut problems = Vec::new();
    let mut seen = Vec::new();
    for (p, expected) in [(5u64, vec![7u64]), (3, vec![]), (7, vec![]), (11, vec![])] {
        let config = SweepConfig {
            primes: vec![p],
            d_max: 200,
            depth: 8,
        };
        let result = sweep(&config).map_err(|e| e.to_string())?;
        let got = result.non_kubert_survivors(p);
        seen.push(format!("p={p}: {got:?}"));
        if got != expected {
            let detail = result
                .survivors(p)
                .filter(|r| r.kubert.is_none())
                .map(|r| {
                    let deeper = criterion_depth_scan(p, r.d, 10).ok();
                    match deeper.and_then(|d| d.failing_depth.zip(d.witness)) {
                        Some((r9, x)) => format!("D={} fails only at depth {r9} (x={x})", r.d),
                        None => format!("D={} survives to depth 10", r.d),
                    }
                })
                .collect::<Vec<_>>()
                .join(", ");
            problems.push(format!("p={p}: expected {expected:?}, got {got:?} [{detail}]"));
        }
    }
    if problems.is_empty() {
        within(Duration::from_secs(600), start, format!("non-Kubert survivors {}", seen.join("; ")))
    } else {
        Err(problems.join("; "))
    }
}

fn kubert_pass() -> Outcome {
    for (p, d) in [(5, 3), (5, 6), (5, 21), (5, 26), (7, 8), (3, 5)] {
        let Some(k) = kubert_classify(p, d) else {
            return Err(format!("({p},{d}) not classified as Kubert"));
        };
        let rep = criterion_depth_scan(p, d, 6).map_err(|e| e.to_string())?;
        if !rep.passed() {
            return Err(format!("({p},{d}) {k} fails at depth {:?}", rep.failing_depth));
        }
    }
    Ok("(5,3) (5,6) (5,21) (5,26) (7,8) (3,5) pass to depth 6".into())
}

fn integrality() -> Outcome {
    let start = Instant::now();
    for r in 1..=3 {
        let field = FieldSpec::build(5, r).map_err(|e| e.to_string())?;
        let (_, s) = integrality_report(&field, 7).map_err(|e| e.to_string())?;
        if !s.passed || !s.min_valuation.at_least(2 * u64::from(r)) {
            return Err(format!("(5,7) r={r}: min valuation {}", s.min_valuation));
        }
    }
    let mut failing = None;
    for r in 1..=4 {
        let field = FieldSpec::build(5, r).map_err(|e| e.to_string())?;
        let (_, s) = integrality_report(&field, 9).map_err(|e| e.to_string())?;
        if !s.passed {
            failing = Some(r);
            break;
        }
    }
    let Some(r9) = failing else {
        return Err("(5,9): every trace integral for r <= 4".into());
    };
    within(
        Duration::from_secs(120),
        start,
        format!("(5,7) integral for r <= 3; (5,9) non-integral trace at r = {r9}"),
    )
}

fn pullback() -> Outcome {
    for r in 1..=3 {
        let field = FieldSpec::build(5, r).map_err(|e| e.to_string())?;
        let engine = TraceEngine::new(&field, 7).map_err(|e| e.to_string())?;
        for t in field.elements().skip(1) {
            let h = engine.trace_h(&field.pow_u64(&t, 7)).map_err(|e| e.to_string())?;
            if h != engine.trace_f(&t) {
                return Err(format!("q={} t={:?}", field.q(), t.coeffs()));
            }
        }
    }
    Ok("H(t^7) = F(t) on F_q^x for q = 5, 25, 125".into())
}

fn trace_field() -> Outcome {
    for r in 1..=2 {
        let field = FieldSpec::build(5, r).map_err(|e| e.to_string())?;
        let engine = TraceEngine::new(&field, 7).map_err(|e| e.to_string())?;
        let bad = field.elements().find(|t| !engine.trace_f(t).is_real());
        if let Some(t) = bad {
            return Err(format!("q={}: F({:?}) not fixed by sigma_-1", field.q(), t.coeffs()));
        }
    }
    let f5 = FieldSpec::build(5, 1).map_err(|e| e.to_string())?;
    let engine = TraceEngine::new(&f5, 7).map_err(|e| e.to_string())?;
    let g1 = engine
        .trace_g(&f5.one())
        .and_then(|g| g.to_quadratic())
        .map_err(|e| e.to_string())?;
    if g1.is_rational() {
        return Err(format!("G(1) = {g1} is rational"));
    }
    Ok(format!("F real over F_5, F_25; G(1) = {g1} irrational"))
}

fn digit_sum_suite() -> Outcome {
    let start = Instant::now();
    let rep = verify_digit_sums();
    if !rep.passed() {
        return Err(rep.to_string());
    }
    within(Duration::from_secs(60), start, format!("{} exhaustive checks pass", rep.checks.len()))
}

fn appendix() -> Outcome {
    let rep = run_suite("appendix").map_err(|e| e.to_string())?;
    if !rep.passed() {
        return Err(rep.to_string());
    }
    Ok(format!("{} checks pass, incl. 50 random equivalence pairs", rep.checks.len()))
}

fn moments() -> Outcome {
    let start = Instant::now();
    let table = bundled_2j2();
    let rows = moment_comparison(&table, 12).map_err(|e| e.to_string())?;
    if let Some(r) = rows[..11].iter().find(|r| !r.equal) {
        return Err(format!("M_{}: 2.J2 {} vs Sp(6) {}", r.n, r.group_moment, r.sp6_moment));
    }
    let m12 = &rows[11];
    if m12.group_moment <= m12.sp6_moment {
        return Err(format!("M_12: 2.J2 {} vs Sp(6) {}", m12.group_moment, m12.sp6_moment));
    }
    within(
        Duration::from_secs(60),
        start,
        format!(
            "table valid; M_1..M_11 equal; M_12 = {} > {}",
            m12.group_moment, m12.sp6_moment
        ),
    )
}

fn empirical() -> Outcome {
    let start = Instant::now();
    let field = FieldSpec::build(5, 6).map_err(|e| e.to_string())?;
    let m = parallel::empirical_moments(&field, 7, 2, DEFAULT_WORK_BUDGET).map_err(|e| e.to_string())?;
    let (m1, m2) = (m[1].approx, m[2].approx);
    if m1.abs() > 0.1 || (m2 - 1.0).abs() > 0.1 {
        return Err(format!("M1 = {m1}, M2 = {m2}"));
    }
    within(Duration::from_secs(600), start, format!("q = 15625: M1 = {m1:.4}, M2 = {m2:.4}"))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("criterion pass for (5,7) to depth 8", check_five_seven),
        ("search reproduction at desk scale", search_desk_scale),
        ("Kubert cases pass", kubert_pass),
        ("integrality agrees with the criterion", integrality),
        ("pullback identity", pullback),
        ("trace field", trace_field),
        ("digit-sum verification suite", digit_sum_suite),
        ("V-function suite", appendix),
        ("moment separation", moments),
        ("empirical equidistribution bridge", empirical),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("acceptance {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
