//! Serializable views of core results, and the CSV / aligned-text writers.

use std::fmt::Write as _;
use std::io::Write;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use finmono_core::digit_criterion::{CriterionReport, DepthScan, KubertCase, VCriterionReport};
use finmono_core::search::{CrossRow, SweepRecord};
use finmono_core::trace_engine::{EmpiricalMoment, IntegralitySummary};
use finmono_core::{CycloInt, MomentRow, QuadReal, TraceReport, TraceRow, Valuation};

use crate::Result;

fn coeffs_i64(x: &CycloInt) -> Vec<i64> {
    x.coeffs()
        .iter()
        .map(|c| c.to_i64().expect("trace coefficients are bounded by q"))
        .collect()
}

fn valuation_out(v: Valuation) -> Option<u64> {
    v.finite()
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct QuadOut {
    pub a: String,
    pub b: String,
    pub radicand: u32,
    pub approx: f64,
}

impl From<&QuadReal> for QuadOut {
    fn from(x: &QuadReal) -> Self {
        QuadOut {
            a: x.a.to_string(),
            b: x.b.to_string(),
            radicand: x.radicand(),
            approx: x.to_f64(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceRowOut {
    pub t_index: u64,
    pub t: Vec<u32>,
    pub raw: Vec<i64>,
    /// `null` for a zero trace.
    pub valuation: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub twisted: Option<Vec<String>>,
    pub quadratic: Option<QuadOut>,
}

impl From<&TraceRow> for TraceRowOut {
    fn from(row: &TraceRow) -> Self {
        TraceRowOut {
            t_index: row.t_index,
            t: row.t.coeffs().to_vec(),
            raw: coeffs_i64(&row.value),
            valuation: valuation_out(row.valuation),
            twisted: row
                .twisted
                .as_ref()
                .map(|x| x.coeffs().iter().map(ToString::to_string).collect()),
            quadratic: row.quadratic.as_ref().map(QuadOut::from),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceReportOut {
    pub p: u32,
    pub d: u64,
    pub r: u32,
    pub sheaf: &'static str,
    pub rows: Vec<TraceRowOut>,
}

impl From<&TraceReport> for TraceReportOut {
    fn from(rep: &TraceReport) -> Self {
        TraceReportOut {
            p: rep.p,
            d: rep.d,
            r: rep.r,
            sheaf: rep.sheaf.name(),
            rows: rep.rows.iter().map(TraceRowOut::from).collect(),
        }
    }
}

/// CSV with columns `t0..`, `c0..c{p-2}`, `valuation`, `quad_a`, `quad_b`.
pub fn write_trace_csv<W: Write>(rep: &TraceReport, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (0..rep.r).map(|i| format!("t{i}")).collect();
    header.extend((0..rep.p - 1).map(|i| format!("c{i}")));
    header.extend(["valuation", "quad_a", "quad_b"].map(String::from));
    w.write_record(&header)?;
    for row in &rep.rows {
        let mut rec: Vec<String> = row.t.coeffs().iter().map(ToString::to_string).collect();
        rec.extend(row.value.coeffs().iter().map(ToString::to_string));
        rec.push(row.valuation.to_string());
        match &row.quadratic {
            Some(q) => {
                rec.push(q.a.to_string());
                rec.push(q.b.to_string());
            }
            None => rec.extend([String::new(), String::new()]),
        }
        w.write_record(&rec)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct IntegralityOut {
    pub p: u32,
    pub d: u64,
    pub r: u32,
    pub threshold: u64,
    pub min_valuation: Option<u64>,
    pub passed: bool,
    pub first_failure: Option<Vec<u32>>,
    pub rows: usize,
}

impl IntegralityOut {
    pub fn new(s: &IntegralitySummary, rep: &TraceReport) -> Self {
        IntegralityOut {
            p: s.p,
            d: s.d,
            r: s.r,
            threshold: s.threshold,
            min_valuation: valuation_out(s.min_valuation),
            passed: s.passed,
            first_failure: s.first_failure.and_then(|i| {
                rep.rows.iter().find(|row| row.t_index == i).map(|row| row.t.coeffs().to_vec())
            }),
            rows: rep.rows.len(),
        }
    }
}

pub fn kubert_tag(k: Option<KubertCase>) -> String {
    k.map_or_else(|| "NONE".into(), |k| k.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct DepthOut {
    pub r: u32,
    pub max_slack: i64,
    pub witness: Option<u64>,
}

impl From<&DepthScan> for DepthOut {
    fn from(s: &DepthScan) -> Self {
        DepthOut {
            r: s.r,
            max_slack: s.max_slack,
            witness: s.witness,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionOut {
    pub p: u64,
    pub d: u64,
    pub max_depth: u32,
    pub status: &'static str,
    pub failing_depth: Option<u32>,
    pub witness: Option<u64>,
    pub kubert: String,
    pub depths: Vec<DepthOut>,
    pub v_failing_depth: Option<u32>,
    pub v_witness: Option<u64>,
    pub criteria_agree: bool,
}

impl CriterionOut {
    pub fn new(rep: &CriterionReport, v: &VCriterionReport, kubert: Option<KubertCase>) -> Self {
        CriterionOut {
            p: rep.p,
            d: rep.d,
            max_depth: rep.max_depth,
            status: rep.status.as_str(),
            failing_depth: rep.failing_depth,
            witness: rep.witness,
            kubert: kubert_tag(kubert),
            depths: rep.depths.iter().map(DepthOut::from).collect(),
            v_failing_depth: v.failing_depth,
            v_witness: v.witness,
            criteria_agree: rep.failing_depth == v.failing_depth,
        }
    }

    pub fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "p={} D={} kubert={}", self.p, self.d, self.kubert);
        let _ = writeln!(s, "{:>5}  {:>9}  witness", "depth", "max_slack");
        for d in &self.depths {
            let w = d.witness.map_or_else(|| "-".into(), |x| x.to_string());
            let _ = writeln!(s, "{:>5}  {:>9}  {w}", d.r, d.max_slack);
        }
        let _ = write!(s, "{}", self.status);
        if let (Some(r), Some(x)) = (self.failing_depth, self.witness) {
            let _ = write!(s, " at depth {r}, x = {x}");
        } else {
            let _ = write!(s, " {}", self.max_depth);
        }
        s
    }
}

#[derive(Clone, Debug, Serialize, serde::Deserialize, PartialEq, Eq)]
pub struct RecordOut {
    pub p: u64,
    pub d: u64,
    pub kubert: String,
    pub survived_depth: u32,
    pub failing_depth: Option<u32>,
    pub witness: Option<u64>,
}

impl From<&SweepRecord> for RecordOut {
    fn from(r: &SweepRecord) -> Self {
        RecordOut {
            p: r.p,
            d: r.d,
            kubert: kubert_tag(r.kubert),
            survived_depth: r.survived_depth,
            failing_depth: r.failing_depth,
            witness: r.witness,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CrossOut {
    pub p: u64,
    pub d: u64,
    pub rmax: u32,
    pub criterion_failing_depth: Option<u32>,
    pub integrality_failing_ext: Option<u32>,
    pub consistent: bool,
}

impl From<&CrossRow> for CrossOut {
    fn from(c: &CrossRow) -> Self {
        CrossOut {
            p: c.p,
            d: c.d,
            rmax: c.rmax,
            criterion_failing_depth: c.criterion_failing_depth,
            integrality_failing_ext: c.integrality_failing_ext,
            consistent: c.consistent(),
        }
    }
}

/// One line of the moments table; columns absent from a run are `None`.
#[derive(Clone, Debug, Serialize, Default)]
pub struct MomentOut {
    pub n: u32,
    pub group: Option<String>,
    pub sp6: Option<String>,
    pub equal: Option<bool>,
    pub empirical_exact: Option<String>,
    pub empirical: Option<f64>,
}

fn big(x: &BigInt) -> String {
    x.to_string()
}

impl MomentOut {
    pub fn from_row(row: &MomentRow) -> Self {
        MomentOut {
            n: row.n,
            group: Some(big(&row.group_moment)),
            sp6: Some(big(&row.sp6_moment)),
            equal: Some(row.equal),
            ..Default::default()
        }
    }

    pub fn set_empirical(&mut self, m: &EmpiricalMoment) {
        self.empirical_exact = Some(m.exact.to_string());
        self.empirical = Some(m.approx);
    }
}

pub fn moments_text(rows: &[MomentOut]) -> String {
    let cell = |x: &Option<String>| x.clone().unwrap_or_else(|| "-".into());
    let mut s = format!("{:>3}  {:>14}  {:>14}  {:>5}  {:>12}\n", "n", "group", "sp6", "equal", "empirical");
    for r in rows {
        let eq = r.equal.map_or_else(|| "-".into(), |e| e.to_string());
        let emp = r.empirical.map_or_else(|| "-".into(), |e| format!("{e:.6}"));
        let _ = writeln!(
            s,
            "{:>3}  {:>14}  {:>14}  {:>5}  {:>12}",
            r.n,
            cell(&r.group),
            cell(&r.sp6),
            eq,
            emp
        );
    }
    s.pop();
    s
}
