//! Moments `M_n = dim (V^{⊗n})^G` for a 6-dimensional representation of a
//! finite group, read off its character, against the same numbers for the
//! standard representation of `Sp(6, C)` by exact Weyl integration.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::QuadReal;
use crate::{Error, Result};

/// Largest `n` accepted by [`sp6_moment`].
pub const SP6_MAX_N: u32 = 14;

/// A conjugacy class with character value `(a + b√5)/den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassEntry {
    pub label: String,
    pub size: BigInt,
    pub a: i64,
    pub b: i64,
    pub den: i64,
    /// Label of the class of `g²`, when the table carries the power map.
    pub square: Option<String>,
}

impl ClassEntry {
    pub fn chi(&self) -> QuadReal {
        QuadReal::from_ints(self.a, self.b, self.den, 5)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterTable {
    group_name: String,
    group_order: BigInt,
    classes: Vec<ClassEntry>,
}

impl CharacterTable {
    /// Validates every invariant and reports all violations at once.
    ///
    /// The first class must be the identity. When every class names its
    /// square, the Frobenius–Schur indicator is checked to be `-1`.
    pub fn new(group_name: String, group_order: BigInt, classes: Vec<ClassEntry>) -> Result<Self> {
        let table = CharacterTable {
            group_name,
            group_order,
            classes,
        };
        let problems = table.violations();
        if problems.is_empty() {
            Ok(table)
        } else {
            Err(Error::TableIntegrity(problems))
        }
    }

    pub fn group_name(&self) -> &str {
        &self.group_name
    }

    pub fn group_order(&self) -> &BigInt {
        &self.group_order
    }

    pub fn classes(&self) -> &[ClassEntry] {
        &self.classes
    }

    fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.classes.is_empty() {
            out.push(String::from("table has no classes"));
            return out;
        }
        if !self.group_order.is_positive() {
            out.push(format!("group order {} is not positive", self.group_order));
        }
        for c in &self.classes {
            if !c.size.is_positive() {
                out.push(format!("class {} has nonpositive size {}", c.label, c.size));
            }
            match c.den {
                1 => {}
                2 if (c.a - c.b) % 2 == 0 => {}
                2 => out.push(format!(
                    "class {}: ({} + {}√5)/2 is not an algebraic integer",
                    c.label, c.a, c.b
                )),
                d => out.push(format!("class {}: denominator {d} not in {{1, 2}}", c.label)),
            }
        }
        let total: BigInt = self.classes.iter().map(|c| &c.size).sum();
        if total != self.group_order {
            out.push(format!(
                "class sizes sum to {total}, not the group order {}",
                self.group_order
            ));
        }
        let first = &self.classes[0];
        if !first.size.is_one() {
            out.push(format!("first class {} has size {}, not 1", first.label, first.size));
        }
        if first.den > 0 && first.chi() != QuadReal::from_ints(6, 0, 1, 5) {
            out.push(format!("degree chi({}) = {}, not 6", first.label, first.chi()));
        }
        if !out.is_empty() {
            return out;
        }
        let norm = self.average(|c| c.chi().pow(2));
        if norm != QuadReal::one(5) {
            out.push(format!("(1/|G|) Σ |C| chi(C)^2 = {norm}, not 1"));
        }
        let squares: Vec<_> = self.classes.iter().filter_map(|c| c.square.as_ref()).collect();
        if !squares.is_empty() {
            if squares.len() != self.classes.len() {
                out.push(String::from("square map given for some classes but not all"));
            } else {
                let mut missing = false;
                let indicator = self.average(|c| {
                    let target = c.square.as_deref().unwrap_or_default();
                    match self.classes.iter().find(|d| d.label == target) {
                        Some(d) => d.chi(),
                        None => {
                            missing = true;
                            QuadReal::zero(5)
                        }
                    }
                });
                if missing {
                    out.push(String::from("square map names an unknown class"));
                } else if indicator != QuadReal::from_ints(-1, 0, 1, 5) {
                    out.push(format!("Frobenius-Schur indicator {indicator}, not -1"));
                }
            }
        }
        out
    }

    /// `(1/|G|) Σ_C |C|·f(C)`.
    fn average<F: FnMut(&ClassEntry) -> QuadReal>(&self, mut f: F) -> QuadReal {
        let mut acc = QuadReal::zero(5);
        for c in &self.classes {
            let size = BigRational::from_integer(c.size.clone());
            acc = &acc + &f(c).scale(&size);
        }
        acc.scale(&BigRational::new(BigInt::one(), self.group_order.clone()))
    }
}

/// `M_n = (1/|G|) Σ |C|·chi(C)^n`, which must be a nonnegative integer.
pub fn group_moment(table: &CharacterTable, n: u32) -> Result<BigInt> {
    let m = table.average(|c| c.chi().pow(n));
    if !m.b.is_zero() || !m.a.is_integer() || m.a.is_negative() {
        return Err(Error::TableIntegrity(vec![format!(
            "moment M_{n} = {m} is not a nonnegative integer"
        )]));
    }
    Ok(m.a.to_integer())
}

/// Dense Laurent polynomial in three variables with exponents in `[-R, R]`.
struct Laurent3 {
    radius: i32,
    cells: Vec<BigInt>,
}

impl Laurent3 {
    fn zero(radius: i32) -> Self {
        let side = (2 * radius + 1) as usize;
        Laurent3 {
            radius,
            cells: vec![BigInt::zero(); side * side * side],
        }
    }

    fn index(&self, e: [i32; 3]) -> Option<usize> {
        let side = 2 * self.radius + 1;
        if e.iter().any(|x| x.abs() > self.radius) {
            return None;
        }
        let [a, b, c] = e.map(|x| x + self.radius);
        Some(((a * side + b) * side + c) as usize)
    }

    fn get(&self, e: [i32; 3]) -> BigInt {
        self.index(e).map_or_else(BigInt::zero, |i| self.cells[i].clone())
    }

    fn add(&mut self, e: [i32; 3], v: &BigInt) {
        let i = self.index(e).expect("exponent within radius");
        self.cells[i] += v;
    }

    fn terms(&self) -> impl Iterator<Item = ([i32; 3], &BigInt)> + '_ {
        let side = 2 * self.radius + 1;
        self.cells.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(i, v)| {
            let i = i as i32;
            let e = [i / (side * side), (i / side) % side, i % side];
            (e.map(|x| x - self.radius), v)
        })
    }

    /// Product with `Σ_k c_k·x^{m_k}`, truncated to this radius.
    fn mul_sparse(&self, factor: &[([i32; 3], i64)]) -> Laurent3 {
        let mut out = Laurent3::zero(self.radius);
        for (e, v) in self.terms() {
            for &(m, c) in factor {
                let t = [e[0] + m[0], e[1] + m[1], e[2] + m[2]];
                if out.index(t).is_some() {
                    out.add(t, &(v * c));
                }
            }
        }
        out
    }
}

/// Positive roots of `C_3` as exponent vectors.
fn positive_roots() -> Vec<[i32; 3]> {
    let mut roots = Vec::new();
    for i in 0..3 {
        for j in i + 1..3 {
            let mut plus = [0; 3];
            plus[i] = 1;
            plus[j] = 1;
            let mut minus = [0; 3];
            minus[i] = 1;
            minus[j] = -1;
            roots.push(plus);
            roots.push(minus);
        }
        let mut long = [0; 3];
        long[i] = 2;
        roots.push(long);
    }
    roots
}

/// `Δ = Π_{α>0} (1 - x^α)(1 - x^{-α})`.
fn weyl_density() -> Laurent3 {
    let mut delta = Laurent3::zero(6);
    delta.add([0, 0, 0], &BigInt::one());
    for a in positive_roots() {
        delta = delta.mul_sparse(&[([0, 0, 0], 2), (a, -1), (a.map(|x| -x), -1)]);
    }
    delta
}

/// `dim (V^{⊗n})^{Sp(6)}` for the standard representation `V`, as
/// `(1/48)·CT(f^n·Δ)` with `f = Σ (x_i + 1/x_i)`.
pub fn sp6_moment(n: u32) -> Result<BigInt> {
    if n > SP6_MAX_N {
        return Err(Error::Budget {
            what: "Sp(6) moment order n",
            requested: u128::from(n),
            limit: u128::from(SP6_MAX_N),
        });
    }
    if n % 2 == 1 {
        return Ok(BigInt::zero());
    }
    let f: Vec<([i32; 3], i64)> = (0..3)
        .flat_map(|i| {
            let mut e = [0; 3];
            e[i] = 1;
            [(e, 1), (e.map(|x| -x), 1)]
        })
        .collect();
    let mut power = Laurent3::zero(n as i32);
    power.add([0, 0, 0], &BigInt::one());
    for _ in 0..n {
        power = power.mul_sparse(&f);
    }
    let delta = weyl_density();
    let mut ct = BigInt::zero();
    for (e, v) in delta.terms() {
        ct += v * power.get(e.map(|x| -x));
    }
    let (q, rem) = ct.div_rem(&BigInt::from(48));
    if !rem.is_zero() {
        return Err(Error::Domain(format!(
            "constant term {ct} not divisible by the Weyl group order 48"
        )));
    }
    Ok(q)
}

/// Perfect matchings on `n` points, `(n-1)!!` for even `n`: the invariant count
/// of `Sp(2m)` on `V^{⊗n}` while `n/2 ≤ m`.
pub fn brauer_matchings(n: u32) -> BigInt {
    if n % 2 == 1 {
        return BigInt::zero();
    }
    (1..n).step_by(2).map(BigInt::from).product()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentRow {
    pub n: u32,
    pub group_moment: BigInt,
    pub sp6_moment: BigInt,
    pub equal: bool,
}

/// Rows `n = 1..=n_max` comparing the table's moments with those of `Sp(6)`.
pub fn moment_comparison(table: &CharacterTable, n_max: u32) -> Result<Vec<MomentRow>> {
    (1..=n_max)
        .map(|n| {
            let group_moment = group_moment(table, n)?;
            let sp6_moment = sp6_moment(n)?;
            Ok(MomentRow {
                n,
                equal: group_moment == sp6_moment,
                group_moment,
                sp6_moment,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn entry(label: &str, size: i64, a: i64, b: i64, den: i64) -> ClassEntry {
        ClassEntry {
            label: label.into(),
            size: BigInt::from(size),
            a,
            b,
            den,
            square: None,
        }
    }

    /// Faithful degree-2 character of Q8; wrong degree on purpose.
    fn q8_as_degree_two() -> Vec<ClassEntry> {
        vec![
            entry("1A", 1, 2, 0, 1),
            entry("2A", 1, -2, 0, 1),
            entry("4A", 2, 0, 0, 1),
            entry("4B", 2, 0, 0, 1),
            entry("4C", 2, 0, 0, 1),
        ]
    }

    #[test]
    fn sp6_small_moments_match_matchings() {
        for n in [0, 2, 4, 6] {
            assert_eq!(sp6_moment(n).unwrap(), brauer_matchings(n), "n={n}");
        }
        assert_eq!(brauer_matchings(6), BigInt::from(15));
        for n in [1, 3, 5, 13] {
            assert!(sp6_moment(n).unwrap().is_zero());
        }
        let m8 = sp6_moment(8).unwrap();
        assert!(m8 < BigInt::from(105) && m8.is_positive());
        assert!(matches!(sp6_moment(15), Err(Error::Budget { .. })));
    }

    #[test]
    fn density_is_symmetric() {
        let d = weyl_density();
        for (e, v) in d.terms() {
            assert_eq!(&d.get(e.map(|x| -x)), v);
        }
        assert_eq!(d.get([0, 0, 0]) % 48, BigInt::zero());
    }

    #[test]
    fn rejects_wrong_degree_and_lists_everything() {
        let mut classes = q8_as_degree_two();
        classes[2].size = BigInt::from(3);
        match CharacterTable::new("Q8".into(), BigInt::from(8), classes) {
            Err(Error::TableIntegrity(list)) => {
                assert_eq!(list.len(), 2, "{list:?}");
                assert!(list[0].contains("sum to 9"));
                assert!(list[1].contains("not 6"));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn rejects_non_integral_values() {
        let mut classes = q8_as_degree_two();
        classes[2] = entry("4A", 2, 1, 0, 2);
        classes[3] = entry("4B", 2, 0, 0, 3);
        let Err(Error::TableIntegrity(list)) =
            CharacterTable::new("Q8".into(), BigInt::from(8), classes)
        else {
            panic!("accepted");
        };
        assert!(list.iter().any(|m| m.contains("algebraic integer")));
        assert!(list.iter().any(|m| m.contains("denominator 3")));
    }

    /// Faithful degree-6 character of SL(2,5) with its square map.
    fn sl25() -> Vec<ClassEntry> {
        let rows = [
            ("1A", 1, 6, "1A"),
            ("2A", 1, -6, "1A"),
            ("4A", 30, 0, "2A"),
            ("3A", 20, 0, "3A"),
            ("6A", 20, 0, "3A"),
            ("5A", 12, 1, "5B"),
            ("5B", 12, 1, "5A"),
            ("10A", 12, -1, "5B"),
            ("10B", 12, -1, "5A"),
        ];
        rows.iter()
            .map(|&(l, s, a, sq)| ClassEntry {
                square: Some(sq.into()),
                ..entry(l, s, a, 0, 1)
            })
            .collect()
    }

    #[test]
    fn sl25_table_is_symplectic() {
        let t = CharacterTable::new("SL(2,5)".into(), BigInt::from(120), sl25()).unwrap();
        assert_eq!(group_moment(&t, 0).unwrap(), BigInt::one());
        assert_eq!(group_moment(&t, 1).unwrap(), BigInt::zero());
        assert_eq!(group_moment(&t, 2).unwrap(), BigInt::one());
        let rows = moment_comparison(&t, 4).unwrap();
        assert!(rows.iter().all(|r| r.group_moment >= r.sp6_moment));
    }

    #[test]
    fn wrong_indicator_rejected() {
        let mut classes = sl25();
        classes[2].square = Some("1A".into());
        let err = CharacterTable::new("SL(2,5)".into(), BigInt::from(120), classes).unwrap_err();
        assert!(err.to_string().contains("indicator"), "{err}");
        let mut classes = sl25();
        classes[4].square = None;
        let err = CharacterTable::new("SL(2,5)".into(), BigInt::from(120), classes).unwrap_err();
        assert!(err.to_string().contains("some classes"), "{err}");
    }

    #[test]
    fn brauer_values() {
        assert_eq!(brauer_matchings(0), BigInt::one());
        assert_eq!(brauer_matchings(4), BigInt::from(3));
        assert_eq!(brauer_matchings(12), BigInt::from(10395));
    }
}
