//! Sparse multivariate polynomials over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::rational::{q, Rational};
use super::AlgebraError;

/// Exponent vector ordered graded-lexicographically: total degree first,
/// then lexicographically on the exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// One `{exponents, coeff}` record of the JSON wire form.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub exponents: Vec<u32>,
    #[serde(with = "super::rational::serde_str")]
    pub coeff: Rational,
}

/// Polynomial in an ordered list of named symbols. Zero coefficients are
/// never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[&str]) -> Self {
        Self::zero_owned(vars.iter().map(|s| s.to_string()).collect())
    }

    pub fn zero_owned(vars: Vec<String>) -> Self {
        MultiPoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant_in(vars: &[String], c: Rational) -> Self {
        let mut p = Self::zero_owned(vars.to_vec());
        p.add_term(Monomial::one(vars.len()), c);
        p
    }

    pub fn one_in(vars: &[String]) -> Self {
        Self::constant_in(vars, Rational::one())
    }

    /// The polynomial consisting of the single symbol `name`.
    pub fn var(vars: &[&str], name: &str) -> Self {
        let owned: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        let i = owned
            .iter()
            .position(|v| v == name)
            .unwrap_or_else(|| panic!("unknown symbol {name}"));
        Self::var_index(&owned, i)
    }

    pub fn var_index(vars: &[String], i: usize) -> Self {
        let mut p = Self::zero_owned(vars.to_vec());
        p.add_term(Monomial::var(vars.len(), i), Rational::one());
        p
    }

    pub fn from_terms(vars: Vec<String>, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero_owned(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), p.vars.len(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
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

    /// Terms in ascending graded-lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn constant_term(&self) -> Rational {
        self.coeff(&vec![0; self.nvars()])
    }

    /// Leading (largest) term.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_vars(&self, other: &MultiPoly) -> Result<(), AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_vars(other)?;
        let mut out = MultiPoly::zero_owned(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero_owned(self.vars.clone());
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by a monomial.
    pub fn shift(&self, m: &Monomial) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one_in(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative with respect to symbol index `i`.
    pub fn differentiate(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero_owned(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[i] -= 1;
            out.add_term(m2, c * q(e as i64));
        }
        out
    }

    pub fn differentiate_by(&self, name: &str) -> Result<MultiPoly, AlgebraError> {
        let i = self
            .var_index_of(name)
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))?;
        Ok(self.differentiate(i))
    }

    /// Antiderivative in symbol `i` with zero constant of integration.
    pub fn integrate(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero_owned(self.vars.clone());
        for (m, c) in &self.terms {
            let mut m2 = m.clone();
            m2.0[i] += 1;
            out.add_term(m2, c / q(m.0[i] as i64 + 1));
        }
        out
    }

    /// Applies `f(exponents)` as a multiplier to each term; Euler operators
    /// `x_i d/dx_i` are the special case `f = |e| e[i]`.
    pub fn map_by_exponent(&self, f: impl Fn(&[u32]) -> Rational) -> MultiPoly {
        let mut out = MultiPoly::zero_owned(self.vars.clone());
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * f(&m.0));
        }
        out
    }

    /// Replaces symbol `i` by `value` (a polynomial over the same symbols).
    pub fn substitute(&self, i: usize, value: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        self.check_vars(value)?;
        let mut powers: Vec<MultiPoly> = vec![MultiPoly::one_in(&self.vars)];
        let mut out = MultiPoly::zero_owned(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[i] as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * value;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest.0[i] = 0;
            let piece = powers[e].shift(&rest).scale(c);
            for (k, v) in piece.terms {
                out.add_term(k, v);
            }
        }
        Ok(out)
    }

    pub fn substitute_by(&self, name: &str, value: &MultiPoly) -> Result<MultiPoly, AlgebraError> {
        let i = self
            .var_index_of(name)
            .ok_or_else(|| AlgebraError::UnknownSymbol(name.to_string()))?;
        self.substitute(i, value)
    }

    /// Evaluates at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        assert_eq!(point.len(), self.nvars());
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    /// Re-expresses the polynomial over a superset (or reordering) of its
    /// symbols.
    pub fn embed(&self, vars: &[String]) -> Result<MultiPoly, AlgebraError> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                vars.iter()
                    .position(|w| w == v)
                    .ok_or_else(|| AlgebraError::UnknownSymbol(v.clone()))
            })
            .collect::<Result<_, _>>()?;
        let mut out = MultiPoly::zero_owned(vars.to_vec());
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (k, &j) in map.iter().enumerate() {
                e[j] = m.0[k];
            }
            out.add_term(Monomial(e), c.clone());
        }
        Ok(out)
    }

    /// Drops all terms of total degree above `cap`.
    pub fn truncate(&self, cap: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= cap)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Returns `Some(c)` when `self == c * other`.
    pub fn ratio_to(&self, other: &MultiPoly) -> Option<Rational> {
        if self.vars != other.vars {
            return None;
        }
        match (self.leading(), other.leading()) {
            (None, None) => Some(Rational::zero()),
            (None, Some(_)) => Some(Rational::zero()),
            (Some(_), None) => None,
            (Some((_, a)), Some((_, b))) => {
                let c = a / b;
                (self.try_sub(&other.scale(&c)).ok()?.is_zero()).then_some(c)
            }
        }
    }

    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms
            .iter()
            .map(|(m, c)| TermRecord {
                exponents: m.0.clone(),
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_records(vars: Vec<String>, recs: &[TermRecord]) -> Result<MultiPoly, AlgebraError> {
        let mut p = MultiPoly::zero_owned(vars);
        for r in recs {
            if r.exponents.len() != p.nvars() {
                return Err(AlgebraError::Parse(format!(
                    "exponent vector {:?} does not match {} symbols",
                    r.exponents,
                    p.nvars()
                )));
            }
            p.add_term(Monomial(r.exponents.clone()), r.coeff.clone());
        }
        Ok(p)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono: Vec<String> =
                m.0.iter()
                    .zip(&self.vars)
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                    .collect();
            if mono.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<'a> $tr<&'a MultiPoly> for &'a MultiPoly {
            type Output = MultiPoly;
            /// Panics on mismatched symbol lists; use the `try_` form to
            /// handle that case.
            fn $m(self, rhs: &'a MultiPoly) -> MultiPoly {
                self.$checked(rhs).expect("polynomial symbol mismatch")
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$checked(&rhs).expect("polynomial symbol mismatch")
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        (&self).neg()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qq;

    #[test]
    fn derivative_of_square() {
        let x = MultiPoly::var(&["x"], "x");
        let x2 = &x * &x;
        assert_eq!(x2.differentiate(0), x.scale(&q(2)));
    }

    #[test]
    fn substitution_binomial() {
        let vars = ["x13", "x12", "x23"];
        let x13 = MultiPoly::var(&vars, "x13");
        let x12 = MultiPoly::var(&vars, "x12");
        let x23 = MultiPoly::var(&vars, "x23");
        let got = x13.pow(2).substitute_by("x13", &(&x12 + &x23)).unwrap();
        let want = &(&x12.pow(2) + &(&x12 * &x23).scale(&q(2))) + &x23.pow(2);
        assert_eq!(got, want);
    }

    #[test]
    fn mismatch_is_an_error() {
        let a = MultiPoly::var(&["x"], "x");
        let b = MultiPoly::var(&["y"], "y");
        assert!(matches!(
            a.try_add(&b),
            Err(AlgebraError::VariableMismatch { .. })
        ));
    }

    #[test]
    fn grlex_order() {
        let a = Monomial(vec![2, 0]);
        let b = Monomial(vec![0, 3]);
        let c = Monomial(vec![1, 1]);
        assert!(a > c);
        assert!(b > a);
    }

    #[test]
    fn integrate_then_differentiate() {
        let p = MultiPoly::from_terms(vec!["z".into()], vec![(vec![0], q(1)), (vec![3], qq(-2, 3))]);
        assert_eq!(p.integrate(0).differentiate(0), p);
    }
}
