//! Base-`p` digit sums and the finiteness criterion for `F_{p,D}`:
//!
//! `[Dx]_{p,r} ≤ [x]_{p,r} + r(p-1)/2` for every `r ≥ 1` and `0 < x < p^r`,
//!
//! where `[x]_{p,r}` is the digit sum of the representative of `x` in
//! `{1, …, p^r - 1}` modulo `p^r - 1`. Also the Kubert `V`-function, whose
//! criterion `V(Dy) + 1/2 ≥ V(y)` is equivalent, and the Kubert families.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_rational::Ratio;

use crate::primes::validate_pair;
use crate::{Error, Result};

/// Default cap on `p^r` for a single-depth scan.
pub const DEFAULT_SCAN_BUDGET: u64 = 1 << 32;

/// Sum of the base-`p` digits of `x`.
pub fn digit_sum_inf(p: u64, mut x: u128) -> u64 {
    let p = u128::from(p);
    let mut s = 0u64;
    while x > 0 {
        s += (x % p) as u64;
        x /= p;
    }
    s
}

fn modulus(p: u64, r: u32) -> u128 {
    u128::from(p)
        .checked_pow(r)
        .unwrap_or_else(|| panic!("{p}^{r} does not fit in 128 bits"))
        - 1
}

/// `[x]_{p,r}`: digit sum of the representative of `x` in `{1, …, p^r - 1}`.
///
/// Panics if `p^r` overflows 128 bits.
pub fn digit_sum_r(p: u64, r: u32, x: i128) -> u64 {
    let m = modulus(p, r);
    let y = x.rem_euclid(m as i128) as u128;
    digit_sum_inf(p, if y == 0 { m } else { y })
}

/// Result of scanning one depth `r`, possibly over a sub-range of `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthScan {
    pub r: u32,
    /// Maximum of `[Dx] - [x] - r(p-1)/2` over the scanned `x`.
    pub max_slack: i64,
    /// Smallest violating `x`.
    pub witness: Option<u64>,
}

impl DepthScan {
    fn empty(r: u32) -> Self {
        DepthScan {
            r,
            max_slack: i64::MIN,
            witness: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }

    /// Combines scans of disjoint ranges at the same depth.
    pub fn merge(self, other: DepthScan) -> DepthScan {
        debug_assert_eq!(self.r, other.r);
        let witness = match (self.witness, other.witness) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        DepthScan {
            r: self.r,
            max_slack: self.max_slack.max(other.max_slack),
            witness,
        }
    }
}

/// Scanner for one `(p, D, r)`.
///
/// Numbers below `p^r` are split as `hi·B + lo` with `B = p^h`, and digit sums
/// read from a table of size `B`. Stepping `x → x+1` moves `Dx mod (p^r - 1)`
/// by a fixed `D mod (p^r - 1)`, added with an end-around carry so the zero
/// class stays at `p^r - 1`.
#[derive(Clone, Debug)]
pub struct DepthScanner {
    p: u64,
    d: u64,
    r: u32,
    m: u64,
    block: u64,
    top: u64,
    table: Vec<u8>,
    half: i64,
}

impl DepthScanner {
    pub fn new(p: u64, d: u64, r: u32) -> Result<Self> {
        Self::with_budget(p, d, r, DEFAULT_SCAN_BUDGET)
    }

    pub fn with_budget(p: u64, d: u64, r: u32, budget: u64) -> Result<Self> {
        validate_pair(p, d)?;
        if r == 0 {
            return Err(Error::Parameter("depth r must be at least 1".into()));
        }
        let size = p.checked_pow(r).filter(|&n| n <= budget).ok_or(Error::Budget {
            what: "criterion scan p^r",
            requested: u128::from(p).saturating_pow(r),
            limit: u128::from(budget),
        })?;
        let h = r.div_ceil(2);
        let block = p.pow(h);
        let top = p.pow(r - h);
        let table = (0..block).map(|x| digit_sum_inf(p, u128::from(x)) as u8).collect();
        Ok(DepthScanner {
            p,
            d,
            r,
            m: size - 1,
            block,
            top,
            table,
            half: (i64::from(r) * (p as i64 - 1)) / 2,
        })
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// `p^r - 1`; the scan covers `x ∈ [1, p^r - 1]`.
    pub fn modulus(&self) -> u64 {
        self.m
    }

    fn sum(&self, hi: u64, lo: u64) -> i64 {
        i64::from(self.table[hi as usize]) + i64::from(self.table[lo as usize])
    }

    /// Scans `x ∈ [lo, hi)`, clipped to `[1, p^r - 1]`.
    pub fn scan_range(&self, lo: u64, hi: u64) -> DepthScan {
        let lo = lo.max(1);
        let hi = hi.min(self.m + 1);
        let mut out = DepthScan::empty(self.r);
        if lo >= hi {
            return out;
        }
        let (b, c) = (self.block, self.top);
        let step = self.d % self.m;
        let (dh, dl) = (step / b, step % b);
        let (mut xh, mut xl) = (lo / b, lo % b);
        let mut y = ((u128::from(step) * u128::from(lo)) % u128::from(self.m)) as u64;
        if y == 0 {
            y = self.m;
        }
        let (mut yh, mut yl) = (y / b, y % b);
        for x in lo..hi {
            let slack = self.sum(yh, yl) - self.sum(xh, xl) - self.half;
            if slack > out.max_slack {
                out.max_slack = slack;
            }
            if slack > 0 && out.witness.is_none() {
                out.witness = Some(x);
            }
            xl += 1;
            if xl == b {
                xl = 0;
                xh += 1;
            }
            yl += dl;
            yh += dh;
            if yl >= b {
                yl -= b;
                yh += 1;
            }
            if yh >= c {
                // wrap past p^r: subtract p^r, add back 1
                yh -= c;
                yl += 1;
                if yl == b {
                    yl = 0;
                    yh += 1;
                }
            }
        }
        out
    }

    /// Full scan of `x ∈ [1, p^r - 1]`.
    pub fn scan(&self) -> DepthScan {
        self.scan_range(1, self.m + 1)
    }

    /// Same result as [`scan`](Self::scan), visiting one `x` per orbit of
    /// `x ↦ p·x mod (p^r - 1)`. Both `[x]` and `[Dx]` are constant on an orbit
    /// (a cyclic rotation of the digits) and the least element of an orbit is
    /// its lexicographically least rotation, so necklaces suffice.
    pub fn scan_necklaces(&self) -> DepthScan {
        let n = self.r as usize;
        let k = self.p as usize;
        let mut out = DepthScan::empty(self.r);
        let mut a = vec![0usize; n + 1];
        loop {
            let mut i = n;
            while i > 0 && a[i] == k - 1 {
                i -= 1;
            }
            if i == 0 {
                break;
            }
            a[i] += 1;
            for j in i + 1..=n {
                a[j] = a[j - i];
            }
            if n % i != 0 {
                continue;
            }
            let x = a[1..].iter().fold(0u64, |acc, &dgt| acc * self.p + dgt as u64);
            let sx = a[1..].iter().sum::<usize>() as i64;
            let mut y = ((u128::from(self.d) * u128::from(x)) % u128::from(self.m)) as u64;
            if y == 0 {
                y = self.m;
            }
            let slack = self.sum(y / self.block, y % self.block) - sx - self.half;
            out.max_slack = out.max_slack.max(slack);
            if slack > 0 {
                out.witness = Some(out.witness.map_or(x, |w| w.min(x)));
            }
        }
        out
    }
}

/// Single-depth check; the witness, if any, is the least violating `x`.
pub fn criterion_check(p: u64, d: u64, r: u32) -> Result<DepthScan> {
    Ok(DepthScanner::new(p, d, r)?.scan())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CriterionStatus {
    PassToDepth,
    Fail,
}

impl CriterionStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CriterionStatus::PassToDepth => "PASS_TO_DEPTH",
            CriterionStatus::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionReport {
    pub p: u64,
    pub d: u64,
    pub max_depth: u32,
    pub status: CriterionStatus,
    pub failing_depth: Option<u32>,
    pub witness: Option<u64>,
    /// One entry per depth scanned, in order; the last one fails when the
    /// status is `Fail`.
    pub depths: Vec<DepthScan>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.status == CriterionStatus::PassToDepth
    }

    /// Deepest depth at which the criterion held.
    pub fn survived_depth(&self) -> u32 {
        match self.failing_depth {
            Some(r) => r - 1,
            None => self.max_depth,
        }
    }

    /// Recomputes the witness inequality from scratch.
    pub fn witness_holds(&self) -> bool {
        match (self.failing_depth, self.witness) {
            (Some(r), Some(x)) => {
                let bound = i128::from(r) * i128::from(self.p - 1) / 2;
                x > 0
                    && u128::from(x) <= modulus(self.p, r)
                    && i128::from(digit_sum_r(self.p, r, i128::from(self.d) * i128::from(x)))
                        > i128::from(digit_sum_r(self.p, r, i128::from(x))) + bound
            }
            _ => false,
        }
    }
}

/// Criterion at depths `1..=rmax`, stopping at the first failing depth.
pub fn criterion_depth_scan(p: u64, d: u64, rmax: u32) -> Result<CriterionReport> {
    criterion_depth_scan_with(p, d, rmax, DEFAULT_SCAN_BUDGET, DepthScanner::scan)
}

/// As [`criterion_depth_scan`] with a caller-supplied per-depth scan (e.g. a
/// parallel one); the scan must return what [`DepthScanner::scan`] returns.
pub fn criterion_depth_scan_with<F>(
    p: u64,
    d: u64,
    rmax: u32,
    budget: u64,
    mut scan: F,
) -> Result<CriterionReport>
where
    F: FnMut(&DepthScanner) -> DepthScan,
{
    validate_pair(p, d)?;
    if rmax == 0 {
        return Err(Error::Parameter("depth must be at least 1".into()));
    }
    let mut report = CriterionReport {
        p,
        d,
        max_depth: rmax,
        status: CriterionStatus::PassToDepth,
        failing_depth: None,
        witness: None,
        depths: Vec::new(),
    };
    for r in 1..=rmax {
        let result = scan(&DepthScanner::with_budget(p, d, r, budget)?);
        let witness = result.witness;
        report.depths.push(result);
        if witness.is_some() {
            report.status = CriterionStatus::Fail;
            report.failing_depth = Some(r);
            report.witness = witness;
            break;
        }
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KubertCase {
    /// `D = q + 1`
    QPlusOne { q: u64 },
    /// `D = (q + 1)/2`
    HalfQPlusOne { q: u64 },
    /// `D = (q^n + 1)/(q + 1)`, `n ≥ 3` odd
    OddNQuotient { q: u64, n: u32 },
}

impl fmt::Display for KubertCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KubertCase::QPlusOne { q } => write!(f, "Q_PLUS_1({q})"),
            KubertCase::HalfQPlusOne { q } => write!(f, "HALF_Q_PLUS_1({q})"),
            KubertCase::OddNQuotient { q, n } => write!(f, "ODD_N_QUOTIENT({q},{n})"),
        }
    }
}

/// Kubert form of `D` over powers `q = p^k ≤ 2D`, if any. Forms are tried in
/// the order above for each `q`, smallest `q` first.
pub fn kubert_classify(p: u64, d: u64) -> Option<KubertCase> {
    let d = u128::from(d);
    let mut q = u128::from(p);
    while q <= 2 * d {
        if q + 1 == d {
            return Some(KubertCase::QPlusOne { q: q as u64 });
        }
        if q + 1 == 2 * d {
            return Some(KubertCase::HalfQPlusOne { q: q as u64 });
        }
        let mut n = 3u32;
        let mut qn = q * q * q;
        while (qn + 1) / (q + 1) <= d {
            if (qn + 1) == d * (q + 1) {
                return Some(KubertCase::OddNQuotient { q: q as u64, n });
            }
            match qn.checked_mul(q * q) {
                Some(next) => qn = next,
                None => break,
            }
            n += 2;
        }
        q *= u128::from(p);
    }
    None
}

/// `Σ_j (p^j·d mod (p^r - 1))`, the numerator of `r(p^r - 1)·V(d/(p^r - 1))`.
fn sum_rotations(p: u64, r: u32, d: i128) -> u128 {
    let m = modulus(p, r);
    let mut e = d.rem_euclid(m as i128) as u128;
    let mut s = 0u128;
    for _ in 0..r {
        s += e;
        e = e * u128::from(p) % m;
    }
    s
}

/// `V(d/(p^r - 1)) = (1/r) Σ_j ⟨p^j d/(p^r - 1)⟩`, exact; `0` on the zero class.
///
/// Panics if `p^r` overflows 128 bits or `r·(p^r - 1)` overflows `i128`.
pub fn v_function(p: u64, r: u32, d: i128) -> Ratio<i128> {
    let m = modulus(p, r);
    Ratio::new(
        sum_rotations(p, r, d) as i128,
        i128::from(r) * m as i128,
    )
}

/// Outcome of the `V`-criterion over depths `1..=max_depth`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VCriterionReport {
    pub p: u64,
    pub d: u64,
    pub max_depth: u32,
    pub failing_depth: Option<u32>,
    /// Least `d` in `[0, p^r - 1)` with `V(Dy) + 1/2 < V(y)`, `y = d/(p^r - 1)`.
    pub witness: Option<u64>,
}

impl VCriterionReport {
    pub fn passed(&self) -> bool {
        self.failing_depth.is_none()
    }
}

/// Least `e` in `[0, p^r - 1)` with `V(De/(p^r-1)) + 1/2 < V(e/(p^r-1))`,
/// comparing `2·ΣRot(De) + r(p^r-1)` with `2·ΣRot(e)`.
pub fn v_criterion_depth(p: u64, d: u64, r: u32) -> Result<Option<u64>> {
    validate_pair(p, d)?;
    let size = p.checked_pow(r).filter(|&n| n <= DEFAULT_SCAN_BUDGET).ok_or(Error::Budget {
        what: "V-criterion scan p^r",
        requested: u128::from(p).saturating_pow(r),
        limit: u128::from(DEFAULT_SCAN_BUDGET),
    })?;
    let m = size - 1;
    let rm = u128::from(r) * u128::from(m);
    let dd = i128::from(d % m);
    Ok((0..m).find(|&e| {
        let e = i128::from(e);
        2 * sum_rotations(p, r, dd * e) + rm < 2 * sum_rotations(p, r, e)
    }))
}

/// `V(Dy) + 1/2 ≥ V(y)` for all `y = d/(p^r - 1)`, `r ≤ rmax`, stopping at
/// the first failing depth.
pub fn v_criterion_check(p: u64, d: u64, rmax: u32) -> Result<VCriterionReport> {
    let mut report = VCriterionReport {
        p,
        d,
        max_depth: rmax,
        failing_depth: None,
        witness: None,
    };
    validate_pair(p, d)?;
    for r in 1..=rmax {
        if let Some(w) = v_criterion_depth(p, d, r)? {
            report.failing_depth = Some(r);
            report.witness = Some(w);
            break;
        }
    }
    Ok(report)
}

/// One line of a verification suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub cases: u64,
    pub counterexample: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn push(&mut self, name: String, cases: u64, counterexample: Option<String>) {
        self.checks.push(CheckResult {
            name,
            cases,
            counterexample,
        });
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(5).max(5);
        writeln!(f, "{:<width$}  {:>12}  result", "check", "cases")?;
        for c in &self.checks {
            let verdict = match &c.counterexample {
                None => String::from("pass"),
                Some(ce) => format!("FAIL {ce}"),
            };
            writeln!(f, "{:<width$}  {:>12}  {verdict}", c.name, c.cases)?;
        }
        write!(f, "{}: {}", self.suite, if self.passed() { "pass" } else { "FAIL" })
    }
}

/// Runs `test` on each case, recording the count and the first failure.
fn exhaust<I, T, F>(cases: I, mut test: F) -> (u64, Option<String>)
where
    I: IntoIterator<Item = T>,
    T: fmt::Debug,
    F: FnMut(&T) -> bool,
{
    let mut n = 0;
    for case in cases {
        n += 1;
        if !test(&case) {
            return (n, Some(format!("{case:?}")));
        }
    }
    (n, None)
}

/// Exhaustive checks of the basic digit-sum properties, the bound for
/// `(p, D) = (5, 7)` on `[7x]_{5,∞}`, and its corollary with slack `2r + 2`.
pub fn verify_digit_sums() -> SuiteReport {
    let mut rep = SuiteReport::new("section2");
    let ds = |p: u64, x: u64| digit_sum_inf(p, u128::from(x)) as i64;
    let dr = |p: u64, r: u32, x: u64| digit_sum_r(p, r, i128::from(x)) as i64;
    for p in [3u64, 5, 7] {
        for r in 1..=4u32 {
            let n = p.pow(r);
            let (c, ce) = exhaust(
                (1..n).flat_map(|x| (1..n).map(move |y| (x, y))),
                |&(x, y)| dr(p, r, x + y) <= dr(p, r, x) + dr(p, r, y),
            );
            rep.push(format!("subadditive p={p} r={r}"), c, ce);
            let (c, ce) = exhaust(1..n * p * p, |&x| dr(p, r, x) <= ds(p, x));
            rep.push(format!("finite below infinite p={p} r={r}"), c, ce);
            let (c, ce) = exhaust(1..n, |&x| dr(p, r, p * x) == dr(p, r, x));
            rep.push(format!("shift invariant p={p} r={r}"), c, ce);
        }
    }
    for r in 1..=7u32 {
        let n = 5u64.pow(r);
        let bound = 2 * i64::from(r);
        let (c, ce) = exhaust((0..n).filter(|x| x % 5 != 2), |&x| ds(5, 7 * x) <= ds(5, x) + bound);
        rep.push(format!("[7x] <= [x] + 2r, x != 2 mod 5, r={r}"), c, ce);
        let (c, ce) = exhaust(0..n, |&x| ds(5, 7 * x) <= ds(5, x) + bound + 2);
        rep.push(format!("[7x] <= [x] + 2r + 2, r={r}"), c, ce);
        let half = (n - 1) / 2;
        let (c, ce) = exhaust([half], |&x| dr(5, r, x) + bound == 4 * i64::from(r));
        rep.push(format!("[(5^r-1)/2] + 2r = 4r, r={r}"), c, ce);
    }
    rep
}

/// Exhaustive `V`-function identities for each `p` and `r ≤ rmax`: the
/// reflection `V(x) + V(-x) = 1`, the digit identity
/// `[d]_{p,r}/(r(p-1)) = 1 - V(-d/(p^r-1))` (zero class included), and
/// independence of the choice of `r` in `d/(p^r - 1)`.
pub fn v_digit_identity_check(primes: &[u64], rmax: u32) -> SuiteReport {
    let mut rep = SuiteReport::new("appendix identities");
    let one = Ratio::from_integer(1i128);
    for &p in primes {
        for r in 1..=rmax {
            let m = p.pow(r) - 1;
            let (c, ce) = exhaust(0..m, |&d| {
                let d = i128::from(d);
                if d == 0 {
                    v_function(p, r, 0) == Ratio::from_integer(0)
                } else {
                    v_function(p, r, d) + v_function(p, r, -d) == one
                }
            });
            rep.push(format!("V(x) + V(-x) = 1, V(0) = 0, p={p} r={r}"), c, ce);
            let scale = i128::from(r) * (p as i128 - 1);
            let (c, ce) = exhaust(0..m, |&d| {
                let d = i128::from(d);
                Ratio::new(digit_sum_r(p, r, d) as i128, scale) == one - v_function(p, r, -d)
            });
            rep.push(format!("[d]/(r(p-1)) = 1 - V(-d), p={p} r={r}"), c, ce);
            let (c, ce) = exhaust(0..m, |&d| {
                (2..=3u32).all(|s| {
                    let lift = (modulus(p, r * s) / u128::from(m)) as i128;
                    v_function(p, r * s, i128::from(d) * lift) == v_function(p, r, i128::from(d))
                })
            });
            rep.push(format!("V well defined across r, p={p} r={r}"), c, ce);
        }
    }
    rep
}

/// Both criteria give the same verdict at depth `r` for every class of `D`
/// modulo `p^r - 1`. Returns the number of classes and the first disagreeing
/// representative.
pub fn verdicts_agree_at_depth(p: u64, r: u32) -> Result<(u64, Option<u64>)> {
    let m = p.checked_pow(r).filter(|&n| n <= DEFAULT_SCAN_BUDGET).ok_or(Error::Budget {
        what: "equivalence check p^r",
        requested: u128::from(p).saturating_pow(r),
        limit: u128::from(DEFAULT_SCAN_BUDGET),
    })? - 1;
    let mut n = 0;
    for c in 0..m {
        // m ≡ -1 (mod p), so some lift c + km is prime to p and at least 3
        let d = (0..=p + 3).map(|k| c + k * m).find(|&d| d >= 3 && d % p != 0).expect("a lift exists");
        n += 1;
        let digit = criterion_check(p, d, r)?.passed();
        let v = v_criterion_depth(p, d, r)?.is_none();
        if digit != v {
            return Ok((n, Some(d)));
        }
    }
    Ok((n, None))
}

/// Same verdict and failing depth from both criteria.
pub fn criteria_agree(p: u64, d: u64, rmax: u32) -> Result<bool> {
    let digit = criterion_depth_scan(p, d, rmax)?;
    let v = v_criterion_check(p, d, rmax)?;
    Ok(digit.failing_depth == v.failing_depth)
}
