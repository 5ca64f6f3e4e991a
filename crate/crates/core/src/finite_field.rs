//! Concrete models of `F_{p^r}` as `F_p[X]/(f)`.
//!
//! The modulus `f` is the least monic irreducible polynomial of degree `r`,
//! where polynomials are ordered by the integer `Σ a_i p^i` of their
//! non-leading coefficients. Elements are coefficient vectors of length `r`
//! and are enumerated in the same integer order, so every table built by
//! walking the field is reproducible.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::primes::{is_prime, prime_factors};
use crate::{Error, Result};

/// Default cap on `p^r` for anything that enumerates a field.
pub const DEFAULT_FIELD_BUDGET: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FFElement {
    coeffs: Vec<u32>,
}

impl FFElement {
    /// Coordinates in the basis `1, X, …, X^{r-1}`.
    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    p: u32,
    r: u32,
    q: u64,
    /// Monic, low degree first, length `r + 1`.
    modulus: Vec<u32>,
    /// `Tr(X^j)` for `j < r`; the trace is linear in these.
    trace_basis: Vec<u32>,
    generator: Option<FFElement>,
}

// Polynomials over F_p, low degree first, arithmetic in u64.

fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
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

fn poly_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    let m = trim(m.to_vec());
    let mut a = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while a.len() > dm {
        let da = a.len() - 1;
        let c = a[da] * lead_inv % p;
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let k = da - dm + i;
                a[k] = (a[k] + p - c * mi % p) % p;
            }
        }
        a = trim(a);
    }
    a
}

fn poly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

fn poly_sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// `X^{p^k} mod f` for `k = 1..=r`.
fn frobenius_powers_of_x(f: &[u64], r: u32, p: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(r as usize);
    let mut h = poly_rem(&[0, 1], f, p);
    for _ in 0..r {
        // h ← h^p mod f
        let mut acc = vec![1u64];
        let mut base = h.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = poly_rem(&poly_mul(&acc, &base, p), f, p);
            }
            base = poly_rem(&poly_mul(&base, &base, p), f, p);
            e >>= 1;
        }
        h = acc;
        out.push(h.clone());
    }
    out
}

/// `f` (monic, degree `r`) is irreducible iff `gcd(X^{p^k} - X, f) = 1`
/// for `1 ≤ k < r` and `X^{p^r} ≡ X (mod f)`.
fn is_irreducible(f: &[u64], r: u32, p: u64) -> bool {
    if r == 1 {
        return true;
    }
    let x = [0u64, 1];
    let powers = frobenius_powers_of_x(f, r, p);
    for h in &powers[..r as usize - 1] {
        if poly_gcd(&poly_sub(h, &x, p), f, p).len() != 1 {
            return false;
        }
    }
    poly_sub(&powers[r as usize - 1], &x, p).is_empty()
}

impl FieldSpec {
    /// `F_{p^r}` with the default enumeration budget.
    pub fn build(p: u32, r: u32) -> Result<Self> {
        Self::build_with_budget(p, r, DEFAULT_FIELD_BUDGET)
    }

    pub fn build_with_budget(p: u32, r: u32, budget: u64) -> Result<Self> {
        if !is_prime(u64::from(p)) {
            return Err(Error::Parameter(format!("p = {p} is not prime")));
        }
        if r == 0 {
            return Err(Error::Parameter("extension degree must be at least 1".into()));
        }
        let q = u64::from(p)
            .checked_pow(r)
            .filter(|&q| q <= budget)
            .ok_or(Error::Budget {
                what: "field size p^r",
                requested: u128::from(p).saturating_pow(r),
                limit: u128::from(budget),
            })?;
        let pp = u64::from(p);
        let mut modulus = None;
        let candidates = pp.pow(r);
        for code in 0..candidates {
            let mut f: Vec<u64> = (0..r).map(|i| code / pp.pow(i) % pp).collect();
            f.push(1);
            if is_irreducible(&f, r, pp) {
                modulus = Some(f);
                break;
            }
        }
        let modulus: Vec<u32> = modulus
            .expect("irreducible polynomials exist in every degree")
            .into_iter()
            .map(|c| c as u32)
            .collect();
        let mut spec = FieldSpec {
            p,
            r,
            q,
            modulus,
            trace_basis: Vec::new(),
            generator: None,
        };
        spec.trace_basis = (0..r)
            .map(|j| {
                let mut coeffs = vec![0u32; r as usize];
                coeffs[j as usize] = 1;
                spec.absolute_trace_by_frobenius(&FFElement { coeffs })
            })
            .collect();
        spec.generator = spec.find_generator();
        Ok(spec)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// The defining polynomial, monic, lowest degree first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// A multiplicative generator of `F_q^×` (the one of least index).
    pub fn generator(&self) -> Option<&FFElement> {
        self.generator.as_ref()
    }

    pub fn zero(&self) -> FFElement {
        FFElement {
            coeffs: vec![0; self.r as usize],
        }
    }

    pub fn one(&self) -> FFElement {
        self.from_int(1)
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FFElement {
        let mut e = self.zero();
        e.coeffs[0] = n.rem_euclid(i64::from(self.p)) as u32;
        e
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FFElement> {
        if coeffs.len() != self.r as usize || coeffs.iter().any(|&c| c >= self.p) {
            return Err(Error::Parameter(format!(
                "an element of F_{}^{} needs {} coefficients below {}",
                self.p, self.r, self.r, self.p
            )));
        }
        Ok(FFElement {
            coeffs: coeffs.to_vec(),
        })
    }

    /// The element with coordinates given by the base-`p` digits of `index`.
    pub fn from_index(&self, mut index: u64) -> FFElement {
        debug_assert!(index < self.q);
        let p = u64::from(self.p);
        let coeffs = (0..self.r)
            .map(|_| {
                let c = (index % p) as u32;
                index /= p;
                c
            })
            .collect();
        FFElement { coeffs }
    }

    pub fn index_of(&self, a: &FFElement) -> u64 {
        a.coeffs
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * u64::from(self.p) + u64::from(c))
    }

    /// All `q` elements, in increasing index order.
    pub fn elements(&self) -> impl Iterator<Item = FFElement> + '_ {
        (0..self.q).map(move |i| self.from_index(i))
    }

    pub fn add(&self, a: &FFElement, b: &FFElement) -> FFElement {
        let p = self.p;
        FFElement {
            coeffs: a
                .coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % p)
                .collect(),
        }
    }

    pub fn neg(&self, a: &FFElement) -> FFElement {
        let p = self.p;
        FFElement {
            coeffs: a.coeffs.iter().map(|&x| (p - x) % p).collect(),
        }
    }

    pub fn sub(&self, a: &FFElement, b: &FFElement) -> FFElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FFElement, b: &FFElement) -> FFElement {
        let p = u64::from(self.p);
        let r = self.r as usize;
        let mut prod = vec![0u64; 2 * r - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % p;
            }
        }
        for d in (r..2 * r - 1).rev() {
            let c = prod[d] % p;
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &m) in self.modulus[..r].iter().enumerate() {
                let k = d - r + i;
                prod[k] = (prod[k] + (p - c) * u64::from(m)) % p;
            }
        }
        FFElement {
            coeffs: prod[..r].iter().map(|&c| (c % p) as u32).collect(),
        }
    }

    pub fn pow_u64(&self, a: &FFElement, mut n: u64) -> FFElement {
        let mut acc = self.one();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// Square-and-multiply with an arbitrary-precision exponent.
    pub fn pow(&self, a: &FFElement, n: &BigUint) -> FFElement {
        if let Some(small) = n.to_u64() {
            return self.pow_u64(a, small);
        }
        let mut acc = self.one();
        for bit in (0..n.bits()).rev() {
            acc = self.mul(&acc, &acc);
            if n.bit(bit) {
                acc = self.mul(&acc, a);
            }
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on
    /// `(a(X), f(X))`; `None` for zero.
    pub fn inv(&self, a: &FFElement) -> Option<FFElement> {
        if a.is_zero() {
            return None;
        }
        let p = u64::from(self.p);
        let f: Vec<u64> = self.modulus.iter().map(|&c| u64::from(c)).collect();
        let mut r0 = f;
        let mut r1 = trim(a.coeffs.iter().map(|&c| u64::from(c)).collect());
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (quot, rem) = poly_divmod(&r0, &r1, p);
            let s2 = poly_sub(&s0, &poly_mul(&quot, &s1, p), p);
            r0 = core::mem::replace(&mut r1, rem);
            s0 = core::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant; s0·a ≡ r0.
        debug_assert_eq!(r0.len(), 1);
        let c = inv_mod(r0[0], p);
        let mut coeffs = vec![0u32; self.r as usize];
        for (i, s) in s0.iter().enumerate() {
            coeffs[i] = (s * c % p) as u32;
        }
        Some(FFElement { coeffs })
    }

    pub fn frobenius(&self, a: &FFElement) -> FFElement {
        self.pow_u64(a, u64::from(self.p))
    }

    /// `Trace_{F_q/F_p}(a) = a + a^p + … + a^{p^{r-1}}`, evaluated through the
    /// precomputed traces of the basis.
    pub fn absolute_trace(&self, a: &FFElement) -> u32 {
        let p = u64::from(self.p);
        let t = a
            .coeffs
            .iter()
            .zip(&self.trace_basis)
            .fold(0u64, |acc, (&c, &t)| (acc + u64::from(c) * u64::from(t)) % p);
        t as u32
    }

    /// The trace summed literally over the Frobenius orbit.
    pub fn absolute_trace_by_frobenius(&self, a: &FFElement) -> u32 {
        let mut sum = self.zero();
        let mut conj = a.clone();
        for _ in 0..self.r {
            sum = self.add(&sum, &conj);
            conj = self.frobenius(&conj);
        }
        debug_assert!(sum.coeffs[1..].iter().all(|&c| c == 0));
        sum.coeffs[0]
    }

    /// Traces of the basis vectors `X^j`.
    pub fn trace_basis(&self) -> &[u32] {
        &self.trace_basis
    }

    /// Coefficients `c_j = Tr(s·X^j)`, so that `Tr(s·x) = Σ_j c_j x_j`.
    pub fn trace_form(&self, s: &FFElement) -> Vec<u32> {
        let mut basis = self.one();
        let x = if self.r > 1 {
            let mut x = self.zero();
            x.coeffs[1] = 1;
            x
        } else {
            self.zero()
        };
        (0..self.r)
            .map(|j| {
                let t = self.absolute_trace(&self.mul(s, &basis));
                if j + 1 < self.r {
                    basis = self.mul(&basis, &x);
                }
                t
            })
            .collect()
    }

    pub fn is_in_prime_field(&self, a: &FFElement) -> bool {
        a.coeffs[1..].iter().all(|&c| c == 0)
    }

    fn find_generator(&self) -> Option<FFElement> {
        let order = self.q - 1;
        if order == 0 {
            return None;
        }
        let factors = prime_factors(order);
        (1..self.q).map(|i| self.from_index(i)).find(|g| {
            factors
                .iter()
                .all(|&f| self.pow_u64(g, order / f) != self.one())
        })
    }
}

fn poly_divmod(a: &[u64], m: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let m = trim(m.to_vec());
    let mut rem = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    let mut quot = vec![0u64; rem.len().saturating_sub(dm).max(1)];
    while rem.len() > dm {
        let dr = rem.len() - 1;
        let c = rem[dr] * lead_inv % p;
        quot[dr - dm] = c;
        for (i, &mi) in m.iter().enumerate() {
            let k = dr - dm + i;
            rem[k] = (rem[k] + p - c * mi % p) % p;
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Irreducibility by brute force: no monic factor of degree ≤ r/2.
    fn oracle_irreducible(f: &[u64], p: u64) -> bool {
        let r = f.len() - 1;
        for d in 1..=r / 2 {
            for code in 0..p.pow(d as u32) {
                let mut g: Vec<u64> = (0..d).map(|i| code / p.pow(i as u32) % p).collect();
                g.push(1);
                if poly_rem(f, &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    fn oracle_least_irreducible(p: u64, r: u32) -> Vec<u32> {
        for code in 0..p.pow(r) {
            let mut f: Vec<u64> = (0..r).map(|i| code / p.pow(i) % p).collect();
            f.push(1);
            if oracle_irreducible(&f, p) {
                return f.into_iter().map(|c| c as u32).collect();
            }
        }
        unreachable!()
    }

    #[test]
    fn prime_field() {
        let f = FieldSpec::build(5, 1).unwrap();
        assert_eq!(f.q(), 5);
        assert_eq!(f.modulus(), [0, 1]);
        let all: Vec<u32> = f.elements().map(|e| e.coeffs()[0]).collect();
        assert_eq!(all, [0, 1, 2, 3, 4]);
        assert_eq!(f.pow_u64(&f.from_int(2), 7), f.from_int(3));
    }

    #[test]
    fn quadratic_modulus() {
        // x², x²+1 = (x+2)(x+3) are reducible; x²+2 is the first irreducible.
        let f = FieldSpec::build(5, 2).unwrap();
        assert_eq!(f.modulus(), [2, 0, 1]);
        assert_eq!(f.modulus(), oracle_least_irreducible(5, 2).as_slice());
    }

    #[test]
    fn cubic_modulus() {
        let f = FieldSpec::build(5, 3).unwrap();
        assert_eq!(f.modulus(), [1, 1, 0, 1]);
        assert_eq!(f.modulus(), oracle_least_irreducible(5, 3).as_slice());
        let m: Vec<u64> = f.modulus().iter().map(|&c| u64::from(c)).collect();
        for x in 0..5u64 {
            let v = m.iter().rev().fold(0, |acc, c| (acc * x + c) % 5);
            assert_ne!(v, 0, "no roots in F_5");
        }
    }

    #[test]
    fn moduli_match_brute_force() {
        for (p, r) in [(3, 2), (3, 3), (3, 4), (5, 4), (7, 2), (7, 3), (11, 2), (2, 5)] {
            let f = FieldSpec::build(p, r).unwrap();
            assert_eq!(f.modulus(), oracle_least_irreducible(u64::from(p), r).as_slice());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(FieldSpec::build(6, 2), Err(Error::Parameter(_))));
        assert!(matches!(FieldSpec::build(5, 0), Err(Error::Parameter(_))));
        assert!(matches!(FieldSpec::build(5, 12), Err(Error::Budget { .. })));
        assert!(matches!(
            FieldSpec::build_with_budget(5, 3, 100),
            Err(Error::Budget { .. })
        ));
    }

    #[test]
    fn traces() {
        let f25 = FieldSpec::build(5, 2).unwrap();
        assert_eq!(f25.absolute_trace(&f25.one()), 2);
        let f125 = FieldSpec::build(5, 3).unwrap();
        assert_eq!(f125.absolute_trace(&f125.one()), 3);
        let kernel = f25.elements().filter(|a| f25.absolute_trace(a) == 0).count();
        assert_eq!(kernel, 5);
        for f in [&f25, &f125] {
            for a in f.elements() {
                assert_eq!(f.absolute_trace(&a), f.absolute_trace_by_frobenius(&a));
            }
        }
    }

    #[test]
    fn trace_form_matches_products() {
        let f = FieldSpec::build(5, 3).unwrap();
        let s = f.from_index(77);
        let form = f.trace_form(&s);
        for x in f.elements() {
            let direct = f.absolute_trace(&f.mul(&s, &x));
            let linear = x
                .coeffs()
                .iter()
                .zip(&form)
                .map(|(&a, &c)| a * c)
                .sum::<u32>()
                % 5;
            assert_eq!(direct, linear);
        }
    }

    #[test]
    fn frobenius_fixed_field_and_trace_invariance() {
        for (p, r) in [(5, 2), (5, 3), (5, 4), (3, 4)] {
            let f = FieldSpec::build(p, r).unwrap();
            for a in f.elements() {
                let fa = f.frobenius(&a);
                assert_eq!(fa == a, f.is_in_prime_field(&a));
                assert_eq!(f.absolute_trace(&fa), f.absolute_trace(&a));
            }
        }
    }

    #[test]
    fn inverses_and_lagrange() {
        for (p, r) in [(5, 2), (5, 3), (7, 2)] {
            let f = FieldSpec::build(p, r).unwrap();
            for a in f.elements().skip(1) {
                let inv = f.inv(&a).unwrap();
                assert_eq!(f.mul(&a, &inv), f.one());
                assert_eq!(f.pow_u64(&a, f.q() - 1), f.one());
            }
            assert!(f.inv(&f.zero()).is_none());
            assert_eq!(f.pow_u64(&f.from_index(3), 0), f.one());
        }
    }

    #[test]
    fn big_exponents() {
        let f = FieldSpec::build(5, 2).unwrap();
        let a = f.from_index(13);
        let e = BigUint::from(24u32).pow(5) * 7u32 + 5u32;
        // a^24 = 1, so a^(24^5·7 + 5) = a^5
        assert_eq!(f.pow(&a, &e), f.pow_u64(&a, 5));
    }

    #[test]
    fn generator_has_full_order() {
        let f = FieldSpec::build(5, 2).unwrap();
        let g = f.generator().unwrap().clone();
        let mut seen = alloc::collections::BTreeSet::new();
        let mut x = f.one();
        for _ in 0..24 {
            seen.insert(f.index_of(&x));
            x = f.mul(&x, &g);
        }
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn index_round_trip() {
        let f = FieldSpec::build(7, 3).unwrap();
        for i in (0..f.q()).step_by(17) {
            assert_eq!(f.index_of(&f.from_index(i)), i);
        }
        assert!(f.elements().next().unwrap().is_zero());
    }
}
