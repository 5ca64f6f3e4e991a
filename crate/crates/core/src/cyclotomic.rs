//! Exact arithmetic in `Z[ζ_p]` and `Q(ζ_p)`.
//!
//! Elements are stored in the power basis `{1, ζ, …, ζ^{p-2}}`. Every result
//! is reduced with `ζ^{p-1} = -(1 + ζ + … + ζ^{p-2})`, so two elements are
//! equal exactly when their coefficient vectors are.
//!
//! Constructors panic when handed something other than an odd prime; the
//! fallible entry point is [`CycloInt::new`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Float, Num, One, Signed, ToPrimitive, Zero};

use crate::primes::{is_prime, prime_factors};
use crate::{Error, Result};

fn assert_odd_prime(p: u32) {
    assert!(
        p > 2 && is_prime(u64::from(p)),
        "cyclotomic arithmetic needs an odd prime, got {p}"
    );
}

/// Folds a length-`p` vector indexed by exponents mod `p` into the power basis.
fn reduce<T: Num + Clone>(mut full: Vec<T>) -> Vec<T> {
    let top = full.pop().expect("nonempty exponent vector");
    if !top.is_zero() {
        for c in full.iter_mut() {
            *c = c.clone() - top.clone();
        }
    }
    full
}

fn mul_coeffs<T: Num + Clone>(p: usize, a: &[T], b: &[T]) -> Vec<T> {
    let mut full = vec![T::zero(); p];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let k = (i + j) % p;
            full[k] = full[k].clone() + x.clone() * y.clone();
        }
    }
    reduce(full)
}

fn galois_coeffs<T: Num + Clone>(p: usize, coeffs: &[T], k: usize) -> Vec<T> {
    let mut full = vec![T::zero(); p];
    for (i, c) in coeffs.iter().enumerate() {
        full[(i * k) % p] = c.clone();
    }
    reduce(full)
}

fn unit_mod(p: u32, k: i64) -> Result<usize> {
    let k = k.rem_euclid(i64::from(p));
    if k == 0 {
        return Err(Error::Parameter(format!(
            "galois exponent must be a unit mod {p}"
        )));
    }
    Ok(k as usize)
}

fn mismatch(p: u32, q: u32) -> Error {
    Error::Parameter(format!("mismatched cyclotomic primes {p} and {q}"))
}

/// Smallest primitive root modulo the odd prime `p`.
pub fn primitive_root(p: u32) -> u32 {
    let factors = prime_factors(u64::from(p) - 1);
    (2..p)
        .find(|&g| {
            factors.iter().all(|&f| {
                pow_mod(u64::from(g), (u64::from(p) - 1) / f, u64::from(p)) != 1
            })
        })
        .unwrap_or(1)
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

/// `λ`-adic valuation, the order at the prime `(1 - ζ_p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(u64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<u64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    pub fn at_least(self, bound: u64) -> bool {
        match self {
            Valuation::Finite(v) => v >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// An element of `Z[ζ_p]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloInt {
    prime: u32,
    coeffs: Vec<BigInt>,
}

impl CycloInt {
    /// Builds an element from its `p - 1` power-basis coordinates.
    pub fn new(p: u32, coeffs: Vec<BigInt>) -> Result<Self> {
        if p <= 2 || !is_prime(u64::from(p)) {
            return Err(Error::Parameter(format!("p = {p} must be an odd prime")));
        }
        if coeffs.len() != p as usize - 1 {
            return Err(Error::Parameter(format!(
                "expected {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycloInt { prime: p, coeffs })
    }

    pub fn from_int(p: u32, n: impl Into<BigInt>) -> Self {
        assert_odd_prime(p);
        let mut coeffs = vec![BigInt::zero(); p as usize - 1];
        coeffs[0] = n.into();
        CycloInt { prime: p, coeffs }
    }

    pub fn zero(p: u32) -> Self {
        Self::from_int(p, 0)
    }

    pub fn one(p: u32) -> Self {
        Self::from_int(p, 1)
    }

    /// `ζ_p^k` for any integer `k`.
    pub fn zeta_pow(p: u32, k: i64) -> Self {
        assert_odd_prime(p);
        let mut full = vec![BigInt::zero(); p as usize];
        full[k.rem_euclid(i64::from(p)) as usize] = BigInt::one();
        CycloInt {
            prime: p,
            coeffs: reduce(full),
        }
    }

    /// `Σ_e counts[e]·ζ^e` for a histogram of exponents mod `p`.
    pub fn from_exponent_counts(p: u32, counts: &[u64]) -> Self {
        assert_odd_prime(p);
        assert_eq!(counts.len(), p as usize, "one count per residue mod p");
        let full = counts.iter().map(|&c| BigInt::from(c)).collect();
        CycloInt {
            prime: p,
            coeffs: reduce(full),
        }
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// True when the element is a rational integer.
    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// Sum of the power-basis coordinates; modulo `p` this is the residue
    /// of the element modulo `(1 - ζ)`.
    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.prime != other.prime {
            return Err(mismatch(self.prime, other.prime));
        }
        Ok(CycloInt {
            prime: self.prime,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if self.prime != other.prime {
            return Err(mismatch(self.prime, other.prime));
        }
        Ok(CycloInt {
            prime: self.prime,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.prime != other.prime {
            return Err(mismatch(self.prime, other.prime));
        }
        Ok(CycloInt {
            prime: self.prime,
            coeffs: mul_coeffs(self.prime as usize, &self.coeffs, &other.coeffs),
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = CycloInt::one(self.prime);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The automorphism `σ_k : ζ ↦ ζ^k`.
    pub fn galois(&self, k: i64) -> Result<Self> {
        let k = unit_mod(self.prime, k)?;
        Ok(CycloInt {
            prime: self.prime,
            coeffs: galois_coeffs(self.prime as usize, &self.coeffs, k),
        })
    }

    /// Fixed by complex conjugation `σ_{-1}`, i.e. lies in `Q(ζ_p)^+`.
    pub fn is_real(&self) -> bool {
        self.galois(-1).expect("-1 is a unit") == *self
    }

    /// Absolute norm `Π_{k=1}^{p-1} σ_k(x)`.
    pub fn norm(&self) -> BigInt {
        let p = self.prime as usize;
        let mut acc = self.coeffs.clone();
        for k in 2..p {
            let conj = galois_coeffs(p, &self.coeffs, k);
            acc = mul_coeffs(p, &acc, &conj);
        }
        debug_assert!(acc[1..].iter().all(Zero::is_zero), "norm is rational");
        acc.swap_remove(0)
    }

    /// Order at `(1 - ζ_p)`. The prime is totally ramified with residue
    /// degree one, so this equals `ord_p` of the norm.
    pub fn lambda_valuation(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let p = BigInt::from(self.prime);
        let mut n = self.norm().abs();
        let mut v = 0u64;
        loop {
            let (q, r) = n.div_rem(&p);
            if !r.is_zero() {
                break;
            }
            n = q;
            v += 1;
        }
        Valuation::Finite(v)
    }

    pub fn to_rat(&self) -> CycloRat {
        CycloRat {
            prime: self.prime,
            coeffs: self
                .coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    /// Images under the `p - 1` complex embeddings `ζ ↦ e^{2πik/p}`, as
    /// `(re, im)` pairs in double precision.
    pub fn embeddings(&self) -> Vec<(f64, f64)> {
        let p = self.prime;
        let coeffs: Vec<f64> = self
            .coeffs
            .iter()
            .map(|c| c.to_f64().unwrap_or(f64::NAN))
            .collect();
        (1..p)
            .map(|k| {
                let mut re = 0.0f64;
                let mut im = 0.0f64;
                for (i, c) in coeffs.iter().enumerate() {
                    let e = (i as u64 * u64::from(k)) % u64::from(p);
                    let angle = 2.0 * core::f64::consts::PI * e as f64 / f64::from(p);
                    re += c * Float::cos(angle);
                    im += c * Float::sin(angle);
                }
                (re, im)
            })
            .collect()
    }
}

impl<'a> Add<&'a CycloInt> for &'a CycloInt {
    type Output = CycloInt;

    /// # Panics
    /// On mismatched primes; use [`CycloInt::checked_add`] to get an error instead.
    fn add(self, rhs: &CycloInt) -> CycloInt {
        self.checked_add(rhs).expect("same prime")
    }
}

impl<'a> Sub<&'a CycloInt> for &'a CycloInt {
    type Output = CycloInt;

    fn sub(self, rhs: &CycloInt) -> CycloInt {
        self.checked_sub(rhs).expect("same prime")
    }
}

impl<'a> Mul<&'a CycloInt> for &'a CycloInt {
    type Output = CycloInt;

    fn mul(self, rhs: &CycloInt) -> CycloInt {
        self.checked_mul(rhs).expect("same prime")
    }
}

impl Neg for &CycloInt {
    type Output = CycloInt;

    fn neg(self) -> CycloInt {
        CycloInt {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloInt {
    type Output = CycloInt;

    fn neg(self) -> CycloInt {
        -&self
    }
}

fn fmt_terms(f: &mut fmt::Formatter<'_>, terms: &[(String, usize)]) -> fmt::Result {
    if terms.is_empty() {
        return f.write_str("0");
    }
    for (n, (coeff, i)) in terms.iter().enumerate() {
        let (sign, mag) = match coeff.strip_prefix('-') {
            Some(rest) => ("-", rest),
            None => ("+", coeff.as_str()),
        };
        if n == 0 {
            if sign == "-" {
                f.write_str("-")?;
            }
        } else {
            write!(f, " {sign} ")?;
        }
        match (*i, mag) {
            (0, m) => f.write_str(m)?,
            (1, "1") => f.write_str("z")?,
            (1, m) => write!(f, "{m}*z")?,
            (i, "1") => write!(f, "z^{i}")?,
            (i, m) => write!(f, "{m}*z^{i}")?,
        }
    }
    Ok(())
}

impl fmt::Display for CycloInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, usize)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (format!("{c}"), i))
            .collect();
        fmt_terms(f, &terms)
    }
}

/// The quadratic Gauss sum `g = Σ_{x ∈ F_p} ζ^{x²}`, a square root of `p`
/// inside `Z[ζ_p]` when `p ≡ 1 (mod 4)`.
pub fn gauss_sqrt(p: u32) -> Result<CycloInt> {
    if p <= 2 || !is_prime(u64::from(p)) {
        return Err(Error::Parameter(format!("p = {p} must be an odd prime")));
    }
    if p % 4 != 1 {
        return Err(Error::Unsupported(format!(
            "the Gauss sum squares to -{p} when p = 3 mod 4; a square root of p needs p = 1 mod 4"
        )));
    }
    let mut counts = vec![0u64; p as usize];
    for x in 0..u64::from(p) {
        counts[(x * x % u64::from(p)) as usize] += 1;
    }
    Ok(CycloInt::from_exponent_counts(p, &counts))
}

/// An element of `Q(ζ_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloRat {
    prime: u32,
    coeffs: Vec<BigRational>,
}

impl CycloRat {
    pub fn new(p: u32, coeffs: Vec<BigRational>) -> Result<Self> {
        if p <= 2 || !is_prime(u64::from(p)) {
            return Err(Error::Parameter(format!("p = {p} must be an odd prime")));
        }
        if coeffs.len() != p as usize - 1 {
            return Err(Error::Parameter(format!(
                "expected {} coefficients, got {}",
                p - 1,
                coeffs.len()
            )));
        }
        Ok(CycloRat { prime: p, coeffs })
    }

    pub fn from_rational(p: u32, x: BigRational) -> Self {
        assert_odd_prime(p);
        let mut coeffs = vec![BigRational::zero(); p as usize - 1];
        coeffs[0] = x;
        CycloRat { prime: p, coeffs }
    }

    pub fn one(p: u32) -> Self {
        Self::from_rational(p, BigRational::one())
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The element as a cyclotomic integer, when all coordinates are integers.
    pub fn to_integral(&self) -> Option<CycloInt> {
        if !self.coeffs.iter().all(|c| c.is_integer()) {
            return None;
        }
        Some(CycloInt {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|c| c.to_integer()).collect(),
        })
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        if self.prime != other.prime {
            return Err(mismatch(self.prime, other.prime));
        }
        Ok(CycloRat {
            prime: self.prime,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.prime != other.prime {
            return Err(mismatch(self.prime, other.prime));
        }
        Ok(CycloRat {
            prime: self.prime,
            coeffs: mul_coeffs(self.prime as usize, &self.coeffs, &other.coeffs),
        })
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        CycloRat {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn galois(&self, k: i64) -> Result<Self> {
        let k = unit_mod(self.prime, k)?;
        Ok(CycloRat {
            prime: self.prime,
            coeffs: galois_coeffs(self.prime as usize, &self.coeffs, k),
        })
    }

    pub fn is_real(&self) -> bool {
        self.galois(-1).expect("-1 is a unit") == *self
    }

    pub fn norm(&self) -> BigRational {
        let p = self.prime as usize;
        let mut acc = self.coeffs.clone();
        for k in 2..p {
            acc = mul_coeffs(p, &acc, &galois_coeffs(p, &self.coeffs, k));
        }
        acc.swap_remove(0)
    }

    /// `x^{-1} = Π_{k≠1} σ_k(x) / N(x)`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        let p = self.prime as usize;
        let mut cofactor = vec![BigRational::zero(); p - 1];
        cofactor[0] = BigRational::one();
        for k in 2..p {
            cofactor = mul_coeffs(p, &cofactor, &galois_coeffs(p, &self.coeffs, k));
        }
        let norm = mul_coeffs(p, &cofactor, &self.coeffs).swap_remove(0);
        let inv_norm = norm.recip();
        Ok(CycloRat {
            prime: self.prime,
            coeffs: cofactor.into_iter().map(|c| c * &inv_norm).collect(),
        })
    }

    /// Integer powers; negative exponents go through [`CycloRat::inverse`].
    pub fn pow(&self, e: i64) -> Result<Self> {
        let (mut base, mut e) = if e < 0 {
            (self.inverse()?, e.unsigned_abs())
        } else {
            (self.clone(), e as u64)
        };
        let mut acc = CycloRat::one(self.prime);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            base = base.checked_mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Coordinates `(a, b)` with `x = a + b·g`, `g` = [`gauss_sqrt`]`(p)`,
    /// for `x` in the quadratic subfield `Q(√p)` of `Q(ζ_p)`.
    pub fn to_quadratic(&self) -> Result<QuadReal> {
        let p = self.prime;
        if p % 4 != 1 {
            return Err(Error::Unsupported(format!(
                "the quadratic subfield of Q(zeta_{p}) is imaginary"
            )));
        }
        if !self.is_real() {
            return Err(Error::Domain(format!(
                "not fixed by sigma_-1, so not in Q(sqrt {p})"
            )));
        }
        // The quadratic subfield is the fixed field of the squares; σ_h with
        // h a square of a primitive root generates that subgroup.
        let g0 = u64::from(primitive_root(p));
        let h = (g0 * g0 % u64::from(p)) as i64;
        if self.galois(h)? != *self {
            return Err(Error::Domain(format!(
                "not fixed by sigma_{h} (generator of the squares mod {p}), so not in Q(sqrt {p})"
            )));
        }
        // With ζ^{p-1} absent from the basis and -1 a square, a fixed element
        // reads A + c·Σ_{n non-square} ζ^n, and Σ_n ζ^n = (-1 - g)/2.
        let non_square = (1..p as usize)
            .find(|&n| pow_mod(n as u64, u64::from(p - 1) / 2, u64::from(p)) != 1)
            .expect("a non-square exists");
        let c = self.coeffs[non_square].clone();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let a = &self.coeffs[0] - &c * &half;
        let b = -(&c * &half);
        let q = QuadReal::new(a, b, p);
        debug_assert_eq!(q.to_cyclo().as_ref().ok(), Some(self));
        Ok(q)
    }
}

impl Neg for &CycloRat {
    type Output = CycloRat;

    fn neg(self) -> CycloRat {
        CycloRat {
            prime: self.prime,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl<'a> Add<&'a CycloRat> for &'a CycloRat {
    type Output = CycloRat;

    fn add(self, rhs: &CycloRat) -> CycloRat {
        self.checked_add(rhs).expect("same prime")
    }
}

impl<'a> Sub<&'a CycloRat> for &'a CycloRat {
    type Output = CycloRat;

    fn sub(self, rhs: &CycloRat) -> CycloRat {
        self.checked_sub(rhs).expect("same prime")
    }
}

impl<'a> Mul<&'a CycloRat> for &'a CycloRat {
    type Output = CycloRat;

    fn mul(self, rhs: &CycloRat) -> CycloRat {
        self.checked_mul(rhs).expect("same prime")
    }
}

impl From<&CycloInt> for CycloRat {
    fn from(x: &CycloInt) -> Self {
        x.to_rat()
    }
}

impl fmt::Display for CycloRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(String, usize)> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (format!("{c}"), i))
            .collect();
        fmt_terms(f, &terms)
    }
}

/// `a + b·√d` with rational `a`, `b` and a positive squarefree radicand `d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadReal {
    pub a: BigRational,
    pub b: BigRational,
    radicand: u32,
}

impl QuadReal {
    pub fn new(a: BigRational, b: BigRational, radicand: u32) -> Self {
        QuadReal { a, b, radicand }
    }

    /// `(a + b·√d) / den` from integers.
    pub fn from_ints(a: i64, b: i64, den: i64, radicand: u32) -> Self {
        let den = BigInt::from(den);
        QuadReal {
            a: BigRational::new(a.into(), den.clone()),
            b: BigRational::new(b.into(), den),
            radicand,
        }
    }

    pub fn from_rational(a: BigRational, radicand: u32) -> Self {
        QuadReal {
            a,
            b: BigRational::zero(),
            radicand,
        }
    }

    pub fn zero(radicand: u32) -> Self {
        Self::from_rational(BigRational::zero(), radicand)
    }

    pub fn one(radicand: u32) -> Self {
        Self::from_rational(BigRational::one(), radicand)
    }

    /// `√d` itself.
    pub fn sqrt_radicand(radicand: u32) -> Self {
        QuadReal {
            a: BigRational::zero(),
            b: BigRational::one(),
            radicand,
        }
    }

    pub fn radicand(&self) -> u32 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// The conjugate `a - b·√d`.
    pub fn conj(&self) -> Self {
        QuadReal {
            a: self.a.clone(),
            b: -&self.b,
            radicand: self.radicand,
        }
    }

    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.b * &self.b * BigInt::from(self.radicand)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.radicand != rhs.radicand {
            return Err(mismatch(self.radicand, rhs.radicand));
        }
        let d = BigInt::from(self.radicand);
        Ok(QuadReal {
            a: &self.a * &rhs.a + &self.b * &rhs.b * d,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
            radicand: self.radicand,
        })
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        if self.radicand != rhs.radicand {
            return Err(mismatch(self.radicand, rhs.radicand));
        }
        Ok(QuadReal {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            radicand: self.radicand,
        })
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        let n = self.norm();
        Ok(QuadReal {
            a: &self.a / &n,
            b: -(&self.b / &n),
            radicand: self.radicand,
        })
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        QuadReal {
            a: &self.a * s,
            b: &self.b * s,
            radicand: self.radicand,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadReal::one(self.radicand);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Real embedding sending `√d` to the positive root.
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * Float::sqrt(f64::from(self.radicand))
    }

    /// Re-expands `a + b·g` in `Q(ζ_d)` with `g` the quadratic Gauss sum.
    pub fn to_cyclo(&self) -> Result<CycloRat> {
        let g = gauss_sqrt(self.radicand)?.to_rat();
        let a = CycloRat::from_rational(self.radicand, self.a.clone());
        Ok(&a + &g.scale(&self.b))
    }
}

/// `a + b·√d` as a real number, the positive root chosen for `√d`.
pub fn embed_real(x: &QuadReal) -> f64 {
    x.to_f64()
}

impl<'a> Add<&'a QuadReal> for &'a QuadReal {
    type Output = QuadReal;

    fn add(self, rhs: &QuadReal) -> QuadReal {
        self.checked_add(rhs).expect("same radicand")
    }
}

impl<'a> Sub<&'a QuadReal> for &'a QuadReal {
    type Output = QuadReal;

    fn sub(self, rhs: &QuadReal) -> QuadReal {
        self.checked_add(&-rhs).expect("same radicand")
    }
}

impl<'a> Mul<&'a QuadReal> for &'a QuadReal {
    type Output = QuadReal;

    fn mul(self, rhs: &QuadReal) -> QuadReal {
        self.checked_mul(rhs).expect("same radicand")
    }
}

impl Neg for &QuadReal {
    type Output = QuadReal;

    fn neg(self) -> QuadReal {
        QuadReal {
            a: -&self.a,
            b: -&self.b,
            radicand: self.radicand,
        }
    }
}

impl fmt::Display for QuadReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let mag = self.b.abs();
        if self.a.is_zero() {
            if self.b.is_negative() {
                f.write_str("-")?;
            }
            return write!(f, "{mag}*sqrt{}", self.radicand);
        }
        write!(f, "{} {sign} {mag}*sqrt{}", self.a, self.radicand)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn ci(p: u32, c: &[i64]) -> CycloInt {
        CycloInt::new(p, c.iter().map(|&x| BigInt::from(x)).collect()).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    /// Naive polynomial product in Z[x] followed by reduction mod x^p - 1
    /// and Φ_p: an independent route for the multiplication examples.
    fn oracle_mul(p: usize, a: &[i64], b: &[i64]) -> Vec<i64> {
        let mut prod = vec![0i64; a.len() + b.len()];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                prod[i + j] += x * y;
            }
        }
        let mut folded = vec![0i64; p];
        for (i, c) in prod.into_iter().enumerate() {
            folded[i % p] += c;
        }
        let top = folded[p - 1];
        folded.truncate(p - 1);
        folded.iter().map(|c| c - top).collect()
    }

    #[test]
    fn root_of_unity_identities() {
        let z = CycloInt::zeta_pow(5, 1);
        let z4 = CycloInt::zeta_pow(5, 4);
        assert_eq!(&z * &z4, CycloInt::one(5));
        let mut s = CycloInt::zero(5);
        for i in 0..5 {
            s = &s + &CycloInt::zeta_pow(5, i);
        }
        assert!(s.is_zero());
    }

    #[test]
    fn gauss_sum_square_p5() {
        // 1 + 2ζ + 2ζ⁴ with ζ⁴ = -1-ζ-ζ²-ζ³ is -1 + 0ζ - 2ζ² - 2ζ³.
        let g = gauss_sqrt(5).unwrap();
        assert_eq!(g, ci(5, &[-1, 0, -2, -2]));
        let squared = oracle_mul(5, &[1, 2, 0, 0, 2], &[1, 2, 0, 0, 2]);
        assert_eq!(squared, [5, 0, 0, 0]);
        assert_eq!(&g * &g, CycloInt::from_int(5, 5));
        for p in [5u32, 13, 17, 29] {
            let g = gauss_sqrt(p).unwrap();
            assert_eq!(&g * &g, CycloInt::from_int(p, p), "p = {p}");
            assert!(g.is_real());
        }
    }

    #[test]
    fn other_gauss_sum_is_negative() {
        let g = gauss_sqrt(5).unwrap();
        let g2 = g.galois(2).unwrap();
        assert_eq!(g2, -&g);
        assert_eq!(&g2 * &g2, CycloInt::from_int(5, 5));
    }

    #[test]
    fn gauss_sqrt_rejects_3_mod_4() {
        assert!(matches!(gauss_sqrt(7), Err(Error::Unsupported(_))));
        assert!(matches!(gauss_sqrt(9), Err(Error::Parameter(_))));
    }

    #[test]
    fn galois_examples() {
        let z = CycloInt::zeta_pow(5, 1);
        assert_eq!(z.galois(-1).unwrap(), ci(5, &[-1, -1, -1, -1]));
        let x = ci(5, &[3, 0, 1, 1]);
        assert_eq!(x.galois(-1).unwrap(), x);
        assert_eq!(x.galois(1).unwrap(), x);
        assert!(matches!(x.galois(10), Err(Error::Parameter(_))));
    }

    #[test]
    fn mismatched_primes() {
        let a = CycloInt::one(5);
        let b = CycloInt::one(7);
        assert!(matches!(a.checked_add(&b), Err(Error::Parameter(_))));
        assert!(matches!(a.checked_mul(&b), Err(Error::Parameter(_))));
    }

    #[test]
    fn norms() {
        let one_minus_z = &CycloInt::one(5) - &CycloInt::zeta_pow(5, 1);
        assert_eq!(one_minus_z.norm(), BigInt::from(5));
        assert_eq!(CycloInt::from_int(5, 3).norm(), BigInt::from(81));
        assert_eq!(CycloInt::from_int(7, -2).norm(), BigInt::from(64));
        assert_eq!(gauss_sqrt(5).unwrap().norm(), BigInt::from(25));
    }

    #[test]
    fn valuations() {
        let one_minus_z = &CycloInt::one(5) - &CycloInt::zeta_pow(5, 1);
        assert_eq!(one_minus_z.lambda_valuation(), Valuation::Finite(1));
        assert_eq!(CycloInt::from_int(5, 5).lambda_valuation(), Valuation::Finite(4));
        assert_eq!(CycloInt::zero(5).lambda_valuation(), Valuation::Infinite);
        let x = ci(5, &[3, 0, 1, 1]);
        assert!(x.lambda_valuation().at_least(2));
    }

    #[test]
    fn quadratic_coordinates() {
        let seven = CycloInt::from_int(5, 7).to_rat();
        let q = seven.to_quadratic().unwrap();
        assert_eq!((q.a.clone(), q.b.clone()), (rat(7, 1), rat(0, 1)));

        let g = gauss_sqrt(5).unwrap().to_rat();
        let q = g.to_quadratic().unwrap();
        assert_eq!((q.a.clone(), q.b.clone()), (rat(0, 1), rat(1, 1)));

        let x = ci(5, &[3, 0, 1, 1]).to_rat();
        let q = x.to_quadratic().unwrap();
        assert_eq!((q.a.clone(), q.b.clone()), (rat(5, 2), rat(-1, 2)));
        assert_eq!(q.to_cyclo().unwrap(), x);
    }

    #[test]
    fn quadratic_rejects_non_members() {
        let z = CycloInt::zeta_pow(5, 1).to_rat();
        let err = z.to_quadratic().unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("sigma_-1")));
        // ζ + ζ^{-1} in Q(ζ_13) is real but generates the whole real subfield.
        let w = (&CycloInt::zeta_pow(13, 1) + &CycloInt::zeta_pow(13, -1)).to_rat();
        let err = w.to_quadratic().unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("sigma_4")));
        assert!(matches!(
            CycloInt::one(7).to_rat().to_quadratic(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn quadratic_general_p() {
        for p in [13u32, 17] {
            let g = gauss_sqrt(p).unwrap().to_rat();
            let x = &CycloRat::from_rational(p, rat(3, 7)) + &g.scale(&rat(-5, 2));
            let q = x.to_quadratic().unwrap();
            assert_eq!((q.a.clone(), q.b.clone()), (rat(3, 7), rat(-5, 2)));
        }
    }

    #[test]
    fn embedding_values() {
        let e = QuadReal::from_ints(0, 1, 1, 5).to_f64();
        assert!((e - 2.236_067_977_499_79).abs() < 1e-12);
        assert_eq!(QuadReal::from_ints(1, 0, 1, 5).to_f64(), 1.0);
        let e = QuadReal::from_ints(5, -1, 2, 5).to_f64();
        assert!((e - 1.381_966_011_250_105).abs() < 1e-12);
    }

    #[test]
    fn cyclo_rat_inverse_and_powers() {
        let x = ci(5, &[3, 0, 1, 1]).to_rat();
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, CycloRat::one(5));
        assert_eq!(x.pow(-2).unwrap(), inv.pow(2).unwrap());
        assert_eq!(x.pow(0).unwrap(), CycloRat::one(5));
        assert!(CycloRat::from_rational(5, rat(0, 1)).inverse().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(ci(5, &[3, 0, 1, -1]).to_string(), "3 + z^2 - z^3");
        assert_eq!(ci(5, &[0, -2, 0, 0]).to_string(), "-2*z");
        assert_eq!(CycloInt::zero(5).to_string(), "0");
        assert_eq!(QuadReal::from_ints(5, -1, 2, 5).to_string(), "5/2 - 1/2*sqrt5");
    }
}
