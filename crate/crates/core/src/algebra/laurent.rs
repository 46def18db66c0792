//! Products of powers of coordinate differences `x_ij = x_i - x_j`.
//!
//! Points are labelled from 1. A [`PairMonomial`] keeps every pair key
//! normalized to `i < j`; exponents are rationals and are never expanded.
//! [`PairSum`] is a finite linear combination of such monomials and supports
//! differentiation in a point, coincidence limits, and exact comparison as
//! functions of the coordinates.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::MultiPoly;
use super::rational::{as_i64, q, sign_pow, Rational};
use super::AlgebraError;

/// Ordered point pair with `i < j`.
pub type Pair = (usize, usize);

/// `prod x_ij^{e_ij}` with no zero exponents stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PairMonomial(BTreeMap<Pair, Rational>);

/// Wire form of one pair factor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairPower {
    pub pair: [usize; 2],
    #[serde(with = "super::rational::serde_str")]
    pub exponent: Rational,
}

/// Brings `(a, b)` to `i < j`. Returns the sign picked up by `x_ab^e` when
/// `a > b`, which requires an integral exponent.
fn orient(a: usize, b: usize, e: &Rational) -> Result<(Pair, Rational), AlgebraError> {
    assert_ne!(a, b, "x_ii is not a pair");
    if a < b {
        return Ok(((a, b), Rational::one()));
    }
    let n = as_i64(e).ok_or_else(|| AlgebraError::SignOfNonIntegerPower {
        pair: (a, b),
        exponent: e.to_string(),
    })?;
    Ok(((b, a), sign_pow(n)))
}

impl PairMonomial {
    pub fn one() -> Self {
        Self::default()
    }

    /// `x_ij^e` for `i < j`.
    pub fn single(i: usize, j: usize, e: Rational) -> Self {
        assert!(i < j, "pair keys must satisfy i < j");
        let mut m = Self::default();
        m.mul_pair((i, j), e);
        m
    }

    pub fn exponent(&self, p: Pair) -> Rational {
        self.0.get(&p).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Pair, &Rational)> {
        self.0.iter()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Multiplies by `x_p^e`.
    pub fn mul_pair(&mut self, p: Pair, e: Rational) {
        assert!(p.0 < p.1);
        if e.is_zero() {
            return;
        }
        let slot = self.0.entry(p).or_insert_with(Rational::zero);
        *slot += e;
        if slot.is_zero() {
            self.0.remove(&p);
        }
    }

    pub fn mul(&self, other: &PairMonomial) -> PairMonomial {
        let mut out = self.clone();
        for (p, e) in &other.0 {
            out.mul_pair(*p, e.clone());
        }
        out
    }

    pub fn pow(&self, k: &Rational) -> PairMonomial {
        let mut out = PairMonomial::default();
        for (p, e) in &self.0 {
            out.mul_pair(*p, e * k);
        }
        out
    }

    pub fn inverse(&self) -> PairMonomial {
        self.pow(&q(-1))
    }

    pub fn div(&self, other: &PairMonomial) -> PairMonomial {
        self.mul(&other.inverse())
    }

    /// Sum of exponents of the pairs touching `point`; a conformally
    /// invariant monomial has weight zero at every point.
    pub fn weight(&self, point: usize) -> Rational {
        self.0
            .iter()
            .filter(|((a, b), _)| *a == point || *b == point)
            .map(|(_, e)| e.clone())
            .sum()
    }

    pub fn points(&self) -> BTreeSet<usize> {
        self.0.keys().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn is_integral(&self) -> bool {
        self.0.values().all(|e| e.is_integer())
    }

    /// Renames points; pairs whose orientation flips pick up a sign, which
    /// is returned.
    pub fn relabel(&self, map: impl Fn(usize) -> usize) -> Result<(PairMonomial, Rational), AlgebraError> {
        let mut out = PairMonomial::default();
        let mut sign = Rational::one();
        for (&(a, b), e) in &self.0 {
            let (p, s) = orient(map(a), map(b), e)?;
            sign *= s;
            out.mul_pair(p, e.clone());
        }
        Ok((out, sign))
    }

    pub fn to_records(&self) -> Vec<PairPower> {
        self.0
            .iter()
            .map(|(&(a, b), e)| PairPower {
                pair: [a, b],
                exponent: e.clone(),
            })
            .collect()
    }

    pub fn from_records(recs: &[PairPower]) -> Result<PairMonomial, AlgebraError> {
        let mut m = PairMonomial::default();
        for r in recs {
            let [a, b] = r.pair;
            if a >= b || a == 0 {
                return Err(AlgebraError::Parse(format!(
                    "pair [{a},{b}] must satisfy 1 <= i < j"
                )));
            }
            m.mul_pair((a, b), r.exponent.clone());
        }
        Ok(m)
    }
}

impl fmt::Display for PairMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|((a, b), e)| format!("x{a}{b}^({e})"))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Polynomial numerator times a pair monomial. The sign of any reversed
/// pair `x_ji = -x_ij` is absorbed into the numerator.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredLaurent {
    pub numerator: MultiPoly,
    pub pairs: PairMonomial,
}

impl FactoredLaurent {
    /// Point coordinate symbols `x1..xn`.
    pub fn coordinate_symbols(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).collect()
    }

    pub fn from_pairs(npoints: usize, pairs: PairMonomial) -> Self {
        FactoredLaurent {
            numerator: MultiPoly::one_in(&Self::coordinate_symbols(npoints)),
            pairs,
        }
    }

    /// Multiplies by `x_ab^e` for any ordering of `a, b`.
    pub fn mul_pair(&mut self, a: usize, b: usize, e: Rational) -> Result<(), AlgebraError> {
        let (p, s) = orient(a, b, &e)?;
        self.numerator = self.numerator.scale(&s);
        self.pairs.mul_pair(p, e);
        Ok(())
    }

    pub fn to_pair_sum(&self) -> Result<PairSum, AlgebraError> {
        // numerator over coordinates: expand coordinate polynomial only when
        // it is a constant
        if self.numerator.total_degree().unwrap_or(0) > 0 {
            return Err(AlgebraError::NonConstantNumerator);
        }
        Ok(PairSum::monomial(
            self.numerator.constant_term(),
            self.pairs.clone(),
        ))
    }
}

/// Finite sum `sum_k c_k M_k` of pair monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PairSum {
    terms: BTreeMap<PairMonomial, Rational>,
}

impl PairSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(c: Rational, m: PairMonomial) -> Self {
        let mut s = Self::default();
        s.add_term(m, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PairMonomial, &Rational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: PairMonomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &PairSum) -> PairSum {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PairSum) -> PairSum {
        self.add(&other.scale(&q(-1)))
    }

    pub fn scale(&self, c: &Rational) -> PairSum {
        let mut out = PairSum::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &PairSum) -> PairSum {
        let mut out = PairSum::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &PairMonomial) -> PairSum {
        let mut out = PairSum::zero();
        for (k, v) in &self.terms {
            out.add_term(k.mul(m), v.clone());
        }
        out
    }

    /// Partial derivative with respect to the coordinate of `point`.
    pub fn diff_point(&self, point: usize) -> PairSum {
        let mut out = PairSum::zero();
        for (m, c) in &self.terms {
            for (&(a, b), e) in m.factors() {
                let sign = if a == point {
                    q(1)
                } else if b == point {
                    q(-1)
                } else {
                    continue;
                };
                let mut m2 = m.clone();
                m2.mul_pair((a, b), q(-1));
                out.add_term(m2, c * e * sign);
            }
        }
        out
    }

    /// Coincidence limit `x_j -> x_i` for `i < j`, merging point `j` into
    /// `i`. A term with positive `x_ij` exponent vanishes; a negative one
    /// means the limit does not exist termwise.
    pub fn coincide(&self, i: usize, j: usize) -> Result<PairSum, AlgebraError> {
        assert!(i < j);
        let mut out = PairSum::zero();
        for (m, c) in &self.terms {
            let e = m.exponent((i, j));
            if e.is_positive() {
                continue;
            }
            if e.is_negative() {
                return Err(AlgebraError::SingularCoincidence {
                    pair: (i, j),
                    exponent: e.to_string(),
                });
            }
            let (m2, s) = m.relabel(|p| if p == j { i } else { p })?;
            out.add_term(m2, c * s);
        }
        Ok(out)
    }

    pub fn relabel(&self, map: impl Fn(usize) -> usize + Copy) -> Result<PairSum, AlgebraError> {
        let mut out = PairSum::zero();
        for (m, c) in &self.terms {
            let (m2, s) = m.relabel(map)?;
            out.add_term(m2, c * s);
        }
        Ok(out)
    }

    /// Points occurring in any term.
    pub fn points(&self) -> BTreeSet<usize> {
        self.terms.keys().flat_map(|m| m.points()).collect()
    }

    /// Splits a family of sums into a common pair monomial times
    /// coordinate polynomials. Exponent offsets from the common factor must
    /// be non-negative integers.
    pub fn common_polynomials(sums: &[&PairSum]) -> Result<(PairMonomial, Vec<MultiPoly>), AlgebraError> {
        let mut pairs: BTreeSet<Pair> = BTreeSet::new();
        let mut npts = 1usize;
        for s in sums {
            for m in s.terms.keys() {
                for (p, _) in m.factors() {
                    pairs.insert(*p);
                    npts = npts.max(p.1);
                }
            }
        }
        let mut base = PairMonomial::default();
        for &p in &pairs {
            let min = sums
                .iter()
                .flat_map(|s| s.terms.keys())
                .map(|m| m.exponent(p))
                .min()
                .unwrap_or_else(Rational::zero);
            base.mul_pair(p, min);
        }
        let vars = FactoredLaurent::coordinate_symbols(npts);
        let mut cache: HashMap<(Pair, u32), MultiPoly> = HashMap::new();
        let mut diff_pow = |p: Pair, k: u32| -> MultiPoly {
            cache
                .entry((p, k))
                .or_insert_with(|| {
                    let d = &MultiPoly::var_index(&vars, p.0 - 1) - &MultiPoly::var_index(&vars, p.1 - 1);
                    d.pow(k)
                })
                .clone()
        };
        let mut polys = Vec::with_capacity(sums.len());
        for s in sums {
            let mut acc = MultiPoly::zero_owned(FactoredLaurent::coordinate_symbols(npts));
            for (m, c) in &s.terms {
                let mut t = MultiPoly::constant_in(&FactoredLaurent::coordinate_symbols(npts), c.clone());
                for &p in &pairs {
                    let off = m.exponent(p) - base.exponent(p);
                    let k = as_i64(&off)
                        .filter(|k| *k >= 0)
                        .ok_or_else(|| AlgebraError::NonIntegralOffset(off.to_string()))?;
                    if k > 0 {
                        t = &t * &diff_pow(p, k as u32);
                    }
                }
                acc = &acc + &t;
            }
            polys.push(acc);
        }
        Ok((base, polys))
    }

    /// True when the sum vanishes identically as a function.
    pub fn vanishes(&self) -> Result<bool, AlgebraError> {
        if self.is_zero() {
            return Ok(true);
        }
        let (_, polys) = Self::common_polynomials(&[self])?;
        Ok(polys[0].is_zero())
    }

    /// `Some(c)` when `self == c * other` as functions.
    pub fn ratio_to(&self, other: &PairSum) -> Result<Option<Rational>, AlgebraError> {
        let (_, polys) = Self::common_polynomials(&[self, other])?;
        Ok(polys[0].ratio_to(&polys[1]))
    }
}

impl fmt::Display for PairSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(m, c)| format!("({c}) {m}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Convenience: `x_ab` as a sum, oriented.
pub fn pair_power(a: usize, b: usize, e: Rational) -> Result<PairSum, AlgebraError> {
    let (p, s) = orient(a, b, &e)?;
    Ok(PairSum::monomial(s, PairMonomial::single(p.0, p.1, e)))
}
