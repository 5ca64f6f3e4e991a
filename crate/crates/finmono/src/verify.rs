//! The `verify` suites.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use finmono_core::digit_criterion::{
    criteria_agree, v_digit_identity_check, verdicts_agree_at_depth, verify_digit_sums, SuiteReport,
};
use finmono_core::search::cross_tabulate;
use finmono_core::{FieldSpec, TraceEngine};

use crate::Result;

pub const SUITES: [&str; 4] = ["section2", "appendix", "pullback", "cross"];

/// Seed for the random `(p, D)` sample of the equivalence check.
pub const EQUIVALENCE_SEED: u64 = 0x5eed_0507;

pub fn run_suite(name: &str) -> Result<SuiteReport> {
    match name {
        "section2" => Ok(verify_digit_sums()),
        "appendix" => appendix(),
        "pullback" => pullback(),
        "cross" => cross(),
        other => Err(finmono_core::Error::Parameter(format!(
            "unknown suite {other:?}; expected one of {}",
            SUITES.join(", ")
        ))
        .into()),
    }
}

/// `count` pairs `(p, D)`, `p ∈ {3, 5, 7, 11}`, `3 ≤ D ≤ 200` prime to `p`.
pub fn random_pairs(seed: u64, count: usize) -> Vec<(u64, u64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = [3u64, 5, 7, 11];
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let p = primes[rng.gen_range(0..primes.len())];
        let d = rng.gen_range(3..=200u64);
        if d % p != 0 {
            out.push((p, d));
        }
    }
    out
}

fn appendix() -> Result<SuiteReport> {
    let mut rep = v_digit_identity_check(&[3, 5, 7], 4);
    rep.suite = "appendix".into();
    for p in [3u64, 5, 7] {
        for r in 1..=4 {
            let (cases, bad) = verdicts_agree_at_depth(p, r)?;
            rep.push(
                format!("criteria agree, every D mod p^r-1, p={p} r={r}"),
                cases,
                bad.map(|d| format!("D={d}")),
            );
        }
    }
    for p in [3u64, 5, 7] {
        let mut cases = 0;
        let mut bad = None;
        for d in (3..=200).filter(|d| d % p != 0) {
            cases += 1;
            if !criteria_agree(p, d, 4)? {
                bad = Some(format!("D={d}"));
                break;
            }
        }
        rep.push(format!("criteria agree, p={p}, D<=200, r<=4"), cases, bad);
    }
    let pairs = random_pairs(EQUIVALENCE_SEED, 50);
    let mut bad = None;
    for &(p, d) in &pairs {
        if !criteria_agree(p, d, 5)? {
            bad = Some(format!("(p, D) = ({p}, {d})"));
            break;
        }
    }
    rep.push(
        format!("criteria agree, 50 random pairs (seed {EQUIVALENCE_SEED:#x}), r<=5"),
        pairs.len() as u64,
        bad,
    );
    Ok(rep)
}

/// `H(t^D) = F(t)` for `(p, D) = (5, 7)` over `F_5`, `F_25`, `F_125`.
fn pullback() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("pullback");
    for r in 1..=3 {
        let field = FieldSpec::build(5, r)?;
        let engine = TraceEngine::new(&field, 7)?;
        let mut bad = None;
        let mut cases = 0;
        for t in field.elements().skip(1) {
            cases += 1;
            let t7 = field.pow_u64(&t, 7);
            if engine.trace_h(&t7)? != engine.trace_f(&t) {
                bad = Some(format!("t = {:?}", t.coeffs()));
                break;
            }
        }
        rep.push(format!("H(t^7) = F(t) over F_{}", field.q()), cases, bad);
    }
    Ok(rep)
}

/// Criterion depth against integrality of traces, extensions up to 3. The
/// pairing is observational: a mismatch is reported, not explained.
fn cross() -> Result<SuiteReport> {
    let mut rep = SuiteReport::new("cross");
    for (p, d) in [(5, 7), (5, 9), (5, 6)] {
        let row = cross_tabulate(p, d, 3)?;
        let show = |x: Option<u32>| x.map_or_else(|| "pass".into(), |r| format!("fails at {r}"));
        let bad = (!row.consistent()).then(|| {
            format!(
                "criterion {} but integrality {}",
                show(row.criterion_failing_depth),
                show(row.integrality_failing_ext)
            )
        });
        rep.push(
            format!(
                "(p, D) = ({p}, {d}): criterion {}, integrality {}",
                show(row.criterion_failing_depth),
                show(row.integrality_failing_ext)
            ),
            3,
            bad,
        );
    }
    Ok(rep)
}
