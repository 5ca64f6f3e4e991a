//! Sweeps over `(p, D)`: Kubert classification plus the depth-bounded
//! criterion, one record per pair. Drivers that checkpoint or run in
//! parallel build on [`sweep_record`] and [`SweepResult::from_records`].

use alloc::format;
use alloc::vec::Vec;

use crate::digit_criterion::{
    criterion_depth_scan_with, kubert_classify, DepthScan, DepthScanner, KubertCase,
    DEFAULT_SCAN_BUDGET,
};
use crate::finite_field::FieldSpec;
use crate::primes::{gcd, require_odd_prime};
use crate::trace_engine::integrality_report;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SweepConfig {
    pub primes: Vec<u64>,
    pub d_max: u64,
    pub depth: u32,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(Error::Parameter("no primes given".into()));
        }
        if self.depth == 0 {
            return Err(Error::Parameter("depth must be at least 1".into()));
        }
        if self.d_max < 3 {
            return Err(Error::Parameter(format!("d_max = {} is below 3", self.d_max)));
        }
        for &p in &self.primes {
            require_odd_prime(p)?;
            if p.checked_pow(self.depth).map_or(true, |n| n > DEFAULT_SCAN_BUDGET) {
                return Err(Error::Budget {
                    what: "criterion scan p^depth",
                    requested: u128::from(p).saturating_pow(self.depth),
                    limit: u128::from(DEFAULT_SCAN_BUDGET),
                });
            }
        }
        Ok(())
    }

    /// Every `(p, D)` with `3 ≤ D ≤ d_max` and `gcd(D, p) = 1`, sorted, primes
    /// deduplicated.
    pub fn work_items(&self) -> Vec<(u64, u64)> {
        let mut primes = self.primes.clone();
        primes.sort_unstable();
        primes.dedup();
        primes
            .into_iter()
            .flat_map(|p| (3..=self.d_max).filter(move |&d| gcd(d, p) == 1).map(move |d| (p, d)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SweepRecord {
    pub p: u64,
    pub d: u64,
    pub kubert: Option<KubertCase>,
    /// Deepest depth at which the criterion held.
    pub survived_depth: u32,
    pub failing_depth: Option<u32>,
    pub witness: Option<u64>,
}

impl SweepRecord {
    pub fn survived(&self) -> bool {
        self.failing_depth.is_none()
    }
}

/// Classifies `(p, D)` and runs the criterion to `depth` with `scan`.
pub fn sweep_record<F>(p: u64, d: u64, depth: u32, scan: F) -> Result<SweepRecord>
where
    F: FnMut(&DepthScanner) -> DepthScan,
{
    let report = criterion_depth_scan_with(p, d, depth, DEFAULT_SCAN_BUDGET, scan)?;
    Ok(SweepRecord {
        p,
        d,
        kubert: kubert_classify(p, d),
        survived_depth: report.survived_depth(),
        failing_depth: report.failing_depth,
        witness: report.witness,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepResult {
    pub config: SweepConfig,
    /// Sorted by `(p, D)`.
    pub records: Vec<SweepRecord>,
}

impl SweepResult {
    /// Sorts the records and checks that they are exactly the config's work
    /// items.
    pub fn from_records(config: SweepConfig, mut records: Vec<SweepRecord>) -> Result<Self> {
        records.sort_by_key(|r| (r.p, r.d));
        let have: Vec<_> = records.iter().map(|r| (r.p, r.d)).collect();
        if have != config.work_items() {
            return Err(Error::Domain(
                "sweep records do not match the configured (p, D) pairs".into(),
            ));
        }
        Ok(SweepResult { config, records })
    }

    pub fn survivors(&self, p: u64) -> impl Iterator<Item = &SweepRecord> + '_ {
        self.records.iter().filter(move |r| r.p == p && r.survived())
    }

    pub fn non_kubert_survivors(&self, p: u64) -> Vec<u64> {
        self.survivors(p).filter(|r| r.kubert.is_none()).map(|r| r.d).collect()
    }

    pub fn kubert_survivors(&self, p: u64) -> Vec<u64> {
        self.survivors(p).filter(|r| r.kubert.is_some()).map(|r| r.d).collect()
    }

    /// Kubert pairs that failed; expected to be empty.
    pub fn failed_kubert(&self) -> Vec<(u64, u64)> {
        self.records
            .iter()
            .filter(|r| r.kubert.is_some() && !r.survived())
            .map(|r| (r.p, r.d))
            .collect()
    }
}

/// Serial sweep.
pub fn sweep(config: &SweepConfig) -> Result<SweepResult> {
    config.validate()?;
    let records = config
        .work_items()
        .into_iter()
        .map(|(p, d)| sweep_record(p, d, config.depth, DepthScanner::scan))
        .collect::<Result<Vec<_>>>()?;
    SweepResult::from_records(config.clone(), records)
}

/// Criterion depth against the first extension with a non-integral trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossRow {
    pub p: u64,
    pub d: u64,
    pub rmax: u32,
    pub criterion_failing_depth: Option<u32>,
    pub integrality_failing_ext: Option<u32>,
}

impl CrossRow {
    /// Both sides fail within `rmax`, or both pass.
    pub fn consistent(&self) -> bool {
        self.criterion_failing_depth.is_some() == self.integrality_failing_ext.is_some()
    }
}

/// Runs both the digit criterion and the trace integrality check up to `rmax`.
pub fn cross_tabulate(p: u64, d: u64, rmax: u32) -> Result<CrossRow> {
    let crit = sweep_record(p, d, rmax, DepthScanner::scan)?;
    let p32 = u32::try_from(p).map_err(|_| Error::Parameter(format!("p = {p} too large")))?;
    let mut integrality_failing_ext = None;
    for r in 1..=rmax {
        let field = FieldSpec::build(p32, r)?;
        let (_, summary) = integrality_report(&field, d)?;
        if !summary.passed {
            integrality_failing_ext = Some(r);
            break;
        }
    }
    Ok(CrossRow {
        p,
        d,
        rmax,
        criterion_failing_depth: crit.failing_depth,
        integrality_failing_ext,
    })
}
