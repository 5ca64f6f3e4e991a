//! Rayon drivers. Work is split into index ranges whose results are merged
//! in index order, so every result equals the serial one.

use rayon::prelude::*;

use finmono_core::digit_criterion::{
    criterion_depth_scan_with, CriterionReport, DepthScan, DepthScanner,
};
use finmono_core::trace_engine::{check_work_budget, EmpiricalMoment};
use finmono_core::{FieldSpec, Sheaf, TraceEngine, TraceReport};

use crate::Result;

const CHUNK: u64 = 1 << 16;

/// Runs `f` on a pool of `jobs` workers (all cores when `None`).
pub fn with_jobs<T: Send>(jobs: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()?;
    Ok(pool.install(f))
}

/// [`DepthScanner::scan`] over chunks of `x` in parallel.
pub fn scan_parallel(scanner: &DepthScanner) -> DepthScan {
    let n = scanner.modulus() + 1;
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|i| scanner.scan_range(i * CHUNK, ((i + 1) * CHUNK).min(n)))
        .reduce_with(DepthScan::merge)
        .unwrap_or_else(|| scanner.scan_range(0, 0))
}

pub fn criterion_depth_scan(p: u64, d: u64, rmax: u32, budget: u64) -> Result<CriterionReport> {
    Ok(criterion_depth_scan_with(p, d, rmax, budget, scan_parallel)?)
}

pub fn trace_report(engine: &TraceEngine<'_>, sheaf: Sheaf) -> Result<TraceReport> {
    if sheaf == Sheaf::G {
        engine.check_twist()?;
    }
    let rows = engine
        .domain(sheaf)
        .into_par_iter()
        .map(|i| engine.row(sheaf, i))
        .collect::<finmono_core::Result<Vec<_>>>()?;
    Ok(engine.assemble(sheaf, rows))
}

pub fn empirical_moments(
    field: &FieldSpec,
    d: u64,
    n_max: u32,
    work_budget: u64,
) -> Result<Vec<EmpiricalMoment>> {
    check_work_budget(field.q(), work_budget)?;
    let engine = TraceEngine::new(field, d)?;
    let values = (0..field.q())
        .into_par_iter()
        .map(|i| engine.trace_g_quadratic(&field.from_index(i)))
        .collect::<finmono_core::Result<Vec<_>>>()?;
    Ok(EmpiricalMoment::from_values(&values, field.p(), n_max))
}
