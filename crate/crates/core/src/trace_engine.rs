//! Frobenius traces of `F_{p,D}`, its half-Tate twist `G_{p,D}` and the
//! descent `H_{p,D}` on `G_m`, computed exactly in `Z[ζ_p]` / `Q(ζ_p)`.
//!
//! With `ψ(1) = ζ_p` fixed, for `t` in `k = F_{p^r}`:
//!
//! * `F(t) = -Σ_{x∈k} ψ(Tr(x^D + t·x))`
//! * `G(t) = F(t) / g^r` with `g` the quadratic Gauss sum (needs `p ≡ 1 mod 4`)
//! * `H(t) = -Σ_{x∈k} ψ(Tr(x^D/t + x))`, `t ≠ 0`
//!
//! Each sum is accumulated as a histogram of exponents mod `p` and converted
//! to a cyclotomic integer once. `Tr(x^D)` is tabulated once per engine; the
//! `t`-dependent part `Tr(t·x)` is linear in the coordinates of `x` and is
//! filled in per `t` from `r` trace values.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::cyclotomic::{gauss_sqrt, primitive_root, CycloInt, CycloRat, QuadReal, Valuation};
use crate::finite_field::FieldSpec;
use crate::primes::validate_pair;
use crate::{Error, FFElement, Result};

/// Default cap on `q²`, the work of a full table of traces over `F_q`.
pub const DEFAULT_WORK_BUDGET: u64 = 1 << 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sheaf {
    /// `F_{p,D}` on the affine line.
    F,
    /// The half-Tate twist `F_{p,D}(1/2)`.
    G,
    /// The descent on `G_m` whose `[D]`-pullback is `F_{p,D}`.
    H,
}

impl Sheaf {
    pub fn name(self) -> &'static str {
        match self {
            Sheaf::F => "F",
            Sheaf::G => "G",
            Sheaf::H => "H",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub t_index: u64,
    pub t: FFElement,
    /// The integral trace: of `F` for sheaves `F` and `G`, of `H` for `H`.
    pub value: CycloInt,
    /// `value / g^r`, present for `G`.
    pub twisted: Option<CycloRat>,
    pub valuation: Valuation,
    /// Coordinates in `Q(√p)` of the reported value (the twisted one for `G`),
    /// when it lies in that subfield.
    pub quadratic: Option<QuadReal>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceReport {
    pub p: u32,
    pub d: u64,
    pub r: u32,
    pub sheaf: Sheaf,
    /// One row per element of `F_q` (per nonzero element for `H`), in
    /// enumeration order.
    pub rows: Vec<TraceRow>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralitySummary {
    pub p: u32,
    pub d: u64,
    pub r: u32,
    /// `r(p-1)/2`, the `λ`-valuation of `g^r`.
    pub threshold: u64,
    pub min_valuation: Valuation,
    pub passed: bool,
    /// First `t` (by index) whose twisted trace is not integral.
    pub first_failure: Option<u64>,
}

impl TraceReport {
    pub fn min_valuation(&self) -> Valuation {
        self.rows
            .iter()
            .map(|row| row.valuation)
            .min()
            .unwrap_or(Valuation::Infinite)
    }

    /// Integrality of `F(t)/g^r` for every row: `λ(F(t)) ≥ r(p-1)/2`.
    pub fn integrality_summary(&self) -> IntegralitySummary {
        let threshold = integrality_threshold(self.p, self.r);
        let first_failure = self
            .rows
            .iter()
            .find(|row| !row.valuation.at_least(threshold))
            .map(|row| row.t_index);
        IntegralitySummary {
            p: self.p,
            d: self.d,
            r: self.r,
            threshold,
            min_valuation: self.min_valuation(),
            passed: first_failure.is_none(),
            first_failure,
        }
    }
}

pub fn integrality_threshold(p: u32, r: u32) -> u64 {
    u64::from(r) * u64::from(p - 1) / 2
}

/// Precomputed state for evaluating all three trace functions over one field.
#[derive(Clone, Debug)]
pub struct TraceEngine<'a> {
    field: &'a FieldSpec,
    d: u64,
    /// `Tr(x^D)` by index of `x`.
    power_trace: Vec<u32>,
    /// Index of `x^D` by index of `x`.
    power_index: Vec<u32>,
    /// `Tr(x)` by index of `x`.
    plain_trace: Vec<u32>,
    gauss: Option<CycloInt>,
}

impl<'a> TraceEngine<'a> {
    pub fn new(field: &'a FieldSpec, d: u64) -> Result<Self> {
        validate_pair(u64::from(field.p()), d)?;
        let mut power_trace = Vec::with_capacity(field.q() as usize);
        let mut power_index = Vec::with_capacity(field.q() as usize);
        for x in field.elements() {
            let y = field.pow_u64(&x, d);
            power_trace.push(field.absolute_trace(&y));
            power_index.push(field.index_of(&y) as u32);
        }
        let mut plain_trace = Vec::new();
        linear_table(field, field.trace_basis(), &mut plain_trace);
        let gauss = gauss_sqrt(field.p()).ok();
        Ok(TraceEngine {
            field,
            d,
            power_trace,
            power_index,
            plain_trace,
            gauss,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        self.field
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Histogram of `Tr(x^D + t·x)` over `x ∈ F_q`.
    pub fn f_counts(&self, t: &FFElement) -> Vec<u64> {
        let p = self.field.p();
        let form = self.field.trace_form(t);
        let mut lin = Vec::new();
        linear_table(self.field, &form, &mut lin);
        let mut counts = vec![0u64; p as usize];
        for (a, b) in self.power_trace.iter().zip(&lin) {
            counts[((a + b) % p) as usize] += 1;
        }
        counts
    }

    /// Histogram of `Tr(x^D/t + x)` over `x ∈ F_q`.
    pub fn h_counts(&self, t: &FFElement) -> Result<Vec<u64>> {
        let p = self.field.p();
        let t_inv = self
            .field
            .inv(t)
            .ok_or_else(|| Error::Domain("H is defined on G_m; t must be nonzero".into()))?;
        let form = self.field.trace_form(&t_inv);
        let mut lin = Vec::new();
        linear_table(self.field, &form, &mut lin);
        let mut counts = vec![0u64; p as usize];
        for (&y, &tr) in self.power_index.iter().zip(&self.plain_trace) {
            counts[((lin[y as usize] + tr) % p) as usize] += 1;
        }
        Ok(counts)
    }

    pub fn trace_f(&self, t: &FFElement) -> CycloInt {
        -CycloInt::from_exponent_counts(self.field.p(), &self.f_counts(t))
    }

    pub fn trace_h(&self, t: &FFElement) -> Result<CycloInt> {
        Ok(-CycloInt::from_exponent_counts(
            self.field.p(),
            &self.h_counts(t)?,
        ))
    }

    fn gauss(&self) -> Result<&CycloInt> {
        self.gauss.as_ref().ok_or_else(|| {
            Error::Unsupported(format!(
                "the half-Tate twist needs p = 1 mod 4 (p = {}); the F_(p^2) pullback is not handled",
                self.field.p()
            ))
        })
    }

    /// Fails unless `p ≡ 1 mod 4`, the condition for the twist.
    pub fn check_twist(&self) -> Result<()> {
        self.gauss().map(|_| ())
    }

    /// Divides an `F`-trace by `g^r` in `Q(ζ_p)`. Since `g² = p`,
    /// `1/g^r = g^r / p^r`.
    pub fn twist(&self, raw: &CycloInt) -> Result<CycloRat> {
        let g = self.gauss()?;
        let r = self.field.r();
        let scale = BigRational::new(
            BigInt::one(),
            BigInt::from(self.field.p()).pow(r),
        );
        Ok((&raw.to_rat() * &g.pow(r).to_rat()).scale(&scale))
    }

    /// `F(t)/√p^r` in `Q(√p)` coordinates, for `F(t)` in the quadratic subfield.
    pub fn twist_quadratic(&self, raw: &CycloInt) -> Result<QuadReal> {
        self.gauss()?;
        let quad = raw.to_rat().to_quadratic()?;
        Ok(divide_by_sqrt_power(&quad, self.field.r()))
    }

    pub fn trace_g(&self, t: &FFElement) -> Result<CycloRat> {
        self.twist(&self.trace_f(t))
    }

    /// `G(t)` as an element of `Q(√p)`.
    pub fn trace_g_quadratic(&self, t: &FFElement) -> Result<QuadReal> {
        self.twist_quadratic(&self.trace_f(t))
    }

    pub fn row(&self, sheaf: Sheaf, t_index: u64) -> Result<TraceRow> {
        let t = self.field.from_index(t_index);
        let value = match sheaf {
            Sheaf::F | Sheaf::G => self.trace_f(&t),
            Sheaf::H => self.trace_h(&t)?,
        };
        let valuation = value.lambda_valuation();
        let (twisted, quadratic) = match sheaf {
            Sheaf::G => {
                let twisted = self.twist(&value)?;
                let quadratic = twisted.to_quadratic().ok();
                (Some(twisted), quadratic)
            }
            Sheaf::F | Sheaf::H => {
                let quadratic = if self.gauss.is_some() {
                    value.to_rat().to_quadratic().ok()
                } else {
                    None
                };
                (None, quadratic)
            }
        };
        Ok(TraceRow {
            t_index,
            t,
            value,
            twisted,
            valuation,
            quadratic,
        })
    }

    /// Indices of the points where `sheaf` is defined, in enumeration order.
    pub fn domain(&self, sheaf: Sheaf) -> core::ops::Range<u64> {
        match sheaf {
            Sheaf::H => 1..self.field.q(),
            Sheaf::F | Sheaf::G => 0..self.field.q(),
        }
    }

    pub fn report(&self, sheaf: Sheaf) -> Result<TraceReport> {
        if sheaf == Sheaf::G {
            self.check_twist()?;
        }
        let rows = self
            .domain(sheaf)
            .map(|i| self.row(sheaf, i))
            .collect::<Result<Vec<_>>>()?;
        Ok(self.assemble(sheaf, rows))
    }

    /// Wraps rows computed elsewhere (e.g. in parallel) into a report.
    pub fn assemble(&self, sheaf: Sheaf, rows: Vec<TraceRow>) -> TraceReport {
        TraceReport {
            p: self.field.p(),
            d: self.d,
            r: self.field.r(),
            sheaf,
            rows,
        }
    }
}

/// `L[x] = Σ_j form[j]·x_j mod p` for every `x`, by index.
fn linear_table(field: &FieldSpec, form: &[u32], out: &mut Vec<u32>) {
    let p = field.p();
    out.clear();
    out.reserve(field.q() as usize);
    out.push(0);
    for &c in form {
        let block = out.len();
        for a in 1..p {
            let shift = (a * c) % p;
            for y in 0..block {
                let v = out[y] + shift;
                out.push(if v >= p { v - p } else { v });
            }
        }
    }
}

fn divide_by_sqrt_power(x: &QuadReal, r: u32) -> QuadReal {
    let p = x.radicand();
    let pb = BigInt::from(p);
    let half = r / 2;
    let scaled = x.scale(&BigRational::new(BigInt::one(), pb.pow(half)));
    if r % 2 == 0 {
        scaled
    } else {
        // (a + b√p)/√p = b + (a/p)√p
        QuadReal::new(
            scaled.b.clone(),
            &scaled.a / BigRational::from_integer(pb),
            p,
        )
    }
}

pub fn trace_f(field: &FieldSpec, d: u64, t: &FFElement) -> Result<CycloInt> {
    Ok(TraceEngine::new(field, d)?.trace_f(t))
}

pub fn trace_h(field: &FieldSpec, d: u64, t: &FFElement) -> Result<CycloInt> {
    TraceEngine::new(field, d)?.trace_h(t)
}

pub fn trace_g(field: &FieldSpec, d: u64, t: &FFElement) -> Result<CycloRat> {
    TraceEngine::new(field, d)?.trace_g(t)
}

/// Full `F`-table over `F_{p^r}` together with its integrality verdict.
pub fn integrality_report(field: &FieldSpec, d: u64) -> Result<(TraceReport, IntegralitySummary)> {
    let engine = TraceEngine::new(field, d)?;
    check_work(field.q())?;
    let report = engine.report(Sheaf::F)?;
    let summary = report.integrality_summary();
    Ok((report, summary))
}

fn check_work(q: u64) -> Result<()> {
    check_work_budget(q, DEFAULT_WORK_BUDGET)
}

/// Refuses a full table over `F_q` when `q² > limit`.
pub fn check_work_budget(q: u64, limit: u64) -> Result<()> {
    let work = u128::from(q) * u128::from(q);
    if work > u128::from(limit) {
        return Err(Error::Budget {
            what: "trace table work q^2",
            requested: work,
            limit: u128::from(limit),
        });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalMoment {
    pub n: u32,
    /// `(1/q) Σ_t G(t)^n`, exactly.
    pub exact: QuadReal,
    pub approx: f64,
}

impl EmpiricalMoment {
    /// Averages of the first `n_max + 1` powers of the given values.
    pub fn from_values(values: &[QuadReal], radicand: u32, n_max: u32) -> Vec<EmpiricalMoment> {
        let mut sums = vec![QuadReal::zero(radicand); n_max as usize + 1];
        for v in values {
            let mut power = QuadReal::one(radicand);
            for sum in sums.iter_mut() {
                *sum = &*sum + &power;
                power = &power * v;
            }
        }
        let inv = BigRational::new(BigInt::one(), BigInt::from(values.len()));
        sums.into_iter()
            .enumerate()
            .map(|(n, s)| {
                let exact = s.scale(&inv);
                let approx = exact.to_f64();
                EmpiricalMoment {
                    n: n as u32,
                    exact,
                    approx,
                }
            })
            .collect()
    }
}

/// Empirical moments `(1/q) Σ_{t∈F_q} G(t)^n` for `n = 0..=n_max`.
pub fn empirical_moments(field: &FieldSpec, d: u64, n_max: u32) -> Result<Vec<EmpiricalMoment>> {
    check_work(field.q())?;
    let engine = TraceEngine::new(field, d)?;
    let values = (0..field.q())
        .map(|i| engine.trace_g_quadratic(&field.from_index(i)))
        .collect::<Result<Vec<_>>>()?;
    Ok(EmpiricalMoment::from_values(&values, field.p(), n_max))
}

pub fn empirical_moment(field: &FieldSpec, d: u64, n: u32) -> Result<EmpiricalMoment> {
    Ok(empirical_moments(field, d, n)?.swap_remove(n as usize))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFieldReport {
    pub p: u32,
    pub d: u64,
    pub r: u32,
    /// Every `F(t)` is fixed by `σ_{-1}`.
    pub all_real: bool,
    pub first_non_real: Option<u64>,
    /// Number of `t` whose trace is a rational integer.
    pub rational_count: u64,
    /// First `t` whose trace is moved by `σ_g`, `g` a primitive root mod `p`.
    pub irrational_witness: Option<u64>,
}

/// Galois behaviour of every `F`-trace over `F_{p^r}` for odd `D`.
pub fn trace_field_check(field: &FieldSpec, d: u64) -> Result<TraceFieldReport> {
    if d % 2 == 0 {
        return Err(Error::Parameter(format!(
            "the real-subfield statement concerns odd D, got {d}"
        )));
    }
    let engine = TraceEngine::new(field, d)?;
    let g0 = i64::from(primitive_root(field.p()));
    let mut report = TraceFieldReport {
        p: field.p(),
        d,
        r: field.r(),
        all_real: true,
        first_non_real: None,
        rational_count: 0,
        irrational_witness: None,
    };
    for i in 0..field.q() {
        let v = engine.trace_f(&field.from_index(i));
        if !v.is_real() {
            report.all_real = false;
            report.first_non_real.get_or_insert(i);
        }
        if v.galois(g0)? == v {
            report.rational_count += 1;
        } else {
            report.irrational_witness.get_or_insert(i);
        }
    }
    Ok(report)
}

/// Sum of the real embedding values, handy for quick sanity checks.
pub fn approx_sum(values: &[QuadReal]) -> f64 {
    values.iter().map(QuadReal::to_f64).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn ci(p: u32, c: &[i64]) -> CycloInt {
        CycloInt::new(p, c.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    /// Direct definition: walk x, compute x^D + t·x, take its trace.
    fn oracle_f(field: &FieldSpec, d: u64, t: &FFElement) -> CycloInt {
        let p = field.p();
        let mut acc = CycloInt::zero(p);
        for x in field.elements() {
            let y = field.add(&field.pow_u64(&x, d), &field.mul(t, &x));
            let e = field.absolute_trace_by_frobenius(&y);
            acc = &acc - &CycloInt::zeta_pow(p, i64::from(e));
        }
        acc
    }

    #[test]
    fn f57_prime_field_values() {
        let f5 = FieldSpec::build(5, 1).unwrap();
        let engine = TraceEngine::new(&f5, 7).unwrap();
        assert!(engine.trace_f(&f5.zero()).is_zero());
        // x^7 + x mod 5 over x = 0..4 is 0, 2, 0, 0, 3.
        assert_eq!(engine.trace_f(&f5.one()), -ci(5, &[3, 0, 1, 1]));
        assert!(engine.trace_f(&f5.from_int(2)).is_real());
    }

    #[test]
    fn engine_matches_definition() {
        for (p, r, d) in [(5, 2, 7), (5, 3, 9), (7, 2, 5), (3, 3, 4), (13, 1, 7)] {
            let field = FieldSpec::build(p, r).unwrap();
            let engine = TraceEngine::new(&field, d).unwrap();
            for t in field.elements().step_by(3) {
                assert_eq!(engine.trace_f(&t), oracle_f(&field, d, &t), "p={p} r={r} d={d}");
            }
        }
    }

    #[test]
    fn h_at_one_equals_f_at_one() {
        let f5 = FieldSpec::build(5, 1).unwrap();
        let engine = TraceEngine::new(&f5, 7).unwrap();
        assert_eq!(engine.trace_h(&f5.one()).unwrap(), engine.trace_f(&f5.one()));
        for t in f5.elements().skip(1) {
            assert!(engine.trace_h(&t).unwrap().is_real());
        }
        assert!(matches!(engine.trace_h(&f5.zero()), Err(Error::Domain(_))));
    }

    #[test]
    fn pullback_identity_small() {
        let field = FieldSpec::build(5, 2).unwrap();
        let engine = TraceEngine::new(&field, 7).unwrap();
        for t in field.elements().skip(1) {
            let t7 = field.pow_u64(&t, 7);
            assert_eq!(engine.trace_h(&t7).unwrap(), engine.trace_f(&t));
        }
    }

    #[test]
    fn twisted_value_at_one() {
        let f5 = FieldSpec::build(5, 1).unwrap();
        let engine = TraceEngine::new(&f5, 7).unwrap();
        let g_val = engine.trace_g(&f5.one()).unwrap();
        let g = gauss_sqrt(5).unwrap().to_rat();
        // G(1)·g = F(1)
        assert_eq!(&g_val * &g, engine.trace_f(&f5.one()).to_rat());
        let quad = g_val.to_quadratic().unwrap();
        assert!(!quad.is_rational());
        assert_eq!(quad, engine.trace_g_quadratic(&f5.one()).unwrap());
        // F(1) = -5/2 + √5/2, so G(1) = 1/2 - √5/2
        assert_eq!(quad, QuadReal::from_ints(5, -5, 10, 5));
        assert!(engine.trace_g(&f5.zero()).unwrap().is_zero());
    }

    #[test]
    fn twist_rejected_for_p_3_mod_4() {
        let f7 = FieldSpec::build(7, 1).unwrap();
        let engine = TraceEngine::new(&f7, 5).unwrap();
        assert!(matches!(engine.trace_g(&f7.one()), Err(Error::Unsupported(_))));
        assert!(matches!(engine.report(Sheaf::G), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bad_pairs() {
        let f5 = FieldSpec::build(5, 1).unwrap();
        assert!(matches!(TraceEngine::new(&f5, 10), Err(Error::Parameter(_))));
        assert!(matches!(TraceEngine::new(&f5, 2), Err(Error::Parameter(_))));
    }

    #[test]
    fn integrality_for_5_7() {
        for r in 1..=2 {
            let field = FieldSpec::build(5, r).unwrap();
            let (report, summary) = integrality_report(&field, 7).unwrap();
            assert_eq!(report.rows.len() as u64, field.q());
            assert!(summary.passed, "r = {r}");
            assert_eq!(summary.threshold, 2 * u64::from(r));
        }
    }

    #[test]
    fn valuation_of_trace_at_one() {
        // N = ((5/2)² - 5/4)² = 25
        let x = ci(5, &[3, 0, 1, 1]);
        assert_eq!(x.norm(), BigInt::from(25));
        assert_eq!(x.lambda_valuation(), Valuation::Finite(2));
    }

    #[test]
    fn sum_over_t_is_minus_q() {
        for r in 1..=3 {
            let field = FieldSpec::build(5, r).unwrap();
            let engine = TraceEngine::new(&field, 7).unwrap();
            let mut total = CycloInt::zero(5);
            for t in field.elements() {
                let v = engine.trace_f(&t);
                let s = v.coefficient_sum() + BigInt::from(field.q());
                assert!((s % 5u32).is_zero());
                total = &total + &v;
            }
            assert_eq!(total, CycloInt::from_int(5, -(field.q() as i64)));
        }
    }

    #[test]
    fn trace_field_of_5_7() {
        let f5 = FieldSpec::build(5, 1).unwrap();
        let rep = trace_field_check(&f5, 7).unwrap();
        assert!(rep.all_real);
        assert!(rep.irrational_witness.is_some());
        let rep = trace_field_check(&FieldSpec::build(5, 2).unwrap(), 9).unwrap();
        assert!(rep.all_real);
        assert!(trace_field_check(&f5, 8).is_err());
    }

    #[test]
    fn moments_small_field() {
        let field = FieldSpec::build(5, 2).unwrap();
        let moments = empirical_moments(&field, 7, 2).unwrap();
        assert_eq!(moments[0].exact, QuadReal::one(5));
        // Σ F(t) = -q and Σ F(t)² = q² for odd D
        assert_eq!(moments[1].exact, QuadReal::from_ints(-1, 0, 5, 5));
        assert_eq!(moments[2].exact, QuadReal::one(5));
    }
}
