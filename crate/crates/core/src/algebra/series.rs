//! Multivariate formal power series truncated at a total degree.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::poly::{Monomial, MultiPoly, TermRecord};
use super::rational::{q, Rational};
use super::AlgebraError;

/// Power series in `vars` known exactly through total degree `cap`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    vars: Vec<String>,
    cap: u32,
    terms: BTreeMap<Monomial, Rational>,
}

/// JSON form: symbols, cap and the term list in graded-lex order.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SeriesRecord {
    pub vars: Vec<String>,
    pub cap: u32,
    pub terms: Vec<TermRecord>,
}

impl TruncatedSeries {
    pub fn zero(vars: Vec<String>, cap: u32) -> Self {
        TruncatedSeries {
            vars,
            cap,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: Vec<String>, cap: u32) -> Self {
        let mut s = Self::zero(vars, cap);
        let n = s.vars.len();
        s.add_term(Monomial::one(n), Rational::from_integer(1.into()));
        s
    }

    /// Truncation of a polynomial.
    pub fn from_poly(p: &MultiPoly, cap: u32) -> Self {
        let mut s = Self::zero(p.vars().to_vec(), cap);
        for (m, c) in p.terms() {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exps: &[u32]) -> Rational {
        self.terms
            .get(&Monomial(exps.to_vec()))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Adds `c * m`; silently dropped above the cap.
    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || m.degree() > self.cap {
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

    pub fn set_coeff(&mut self, exps: &[u32], c: Rational) {
        let m = Monomial(exps.to_vec());
        if c.is_zero() {
            self.terms.remove(&m);
        } else if m.degree() <= self.cap {
            self.terms.insert(m, c);
        }
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::from_terms(
            self.vars.clone(),
            self.terms.iter().map(|(m, c)| (m.0.clone(), c.clone())),
        )
    }

    pub fn try_add(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        let mut out = Self::zero(self.vars.clone(), self.cap.min(other.cap));
        for (m, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, AlgebraError> {
        self.try_add(&other.scale(&q(-1)))
    }

    /// Product truncated at the smaller of the two caps.
    pub fn try_mul(&self, other: &TruncatedSeries) -> Result<TruncatedSeries, AlgebraError> {
        if self.vars != other.vars {
            return Err(AlgebraError::VariableMismatch {
                left: self.vars.clone(),
                right: other.vars.clone(),
            });
        }
        let cap = self.cap.min(other.cap);
        let mut out = Self::zero(self.vars.clone(), cap);
        for (ma, ca) in &self.terms {
            let da = ma.degree();
            if da > cap {
                continue;
            }
            for (mb, cb) in &other.terms {
                if da + mb.degree() <= cap {
                    out.add_term(ma.mul(mb), ca * cb);
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> TruncatedSeries {
        let mut out = Self::zero(self.vars.clone(), self.cap);
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    /// Euler-type operator: multiplies each coefficient by `f(exponents)`.
    pub fn map_by_exponent(&self, f: impl Fn(&[u32]) -> Rational) -> TruncatedSeries {
        let mut out = Self::zero(self.vars.clone(), self.cap);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c * f(&m.0));
        }
        out
    }

    /// `u_i d/du_i`.
    pub fn euler(&self, i: usize) -> TruncatedSeries {
        self.map_by_exponent(|e| q(e[i] as i64))
    }

    /// Multiplication by the symbol `u_i`; terms pushed above the cap drop.
    pub fn times_var(&self, i: usize) -> TruncatedSeries {
        let mut out = Self::zero(self.vars.clone(), self.cap);
        let n = self.vars.len();
        for (m, c) in &self.terms {
            out.add_term(m.mul(&Monomial::var(n, i)), c.clone());
        }
        out
    }

    /// Formal partial derivative; the result is exact one degree lower.
    pub fn differentiate(&self, i: usize) -> TruncatedSeries {
        let p = self.to_poly().differentiate(i);
        Self::from_poly(&p, self.cap.saturating_sub(1))
    }

    /// Same terms, lower cap.
    pub fn truncate(&self, cap: u32) -> TruncatedSeries {
        let mut out = Self::zero(self.vars.clone(), cap.min(self.cap));
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    /// Multiplicative inverse; requires an invertible constant term.
    pub fn inverse(&self) -> Result<TruncatedSeries, AlgebraError> {
        let n = self.vars.len();
        let c0 = self.coeff(&vec![0; n]);
        if c0.is_zero() {
            return Err(AlgebraError::NotInvertible);
        }
        // 1/(c0 (1 + r)) = (1/c0) * sum (-r)^k
        let inv0 = Rational::from_integer(1.into()) / &c0;
        let mut r = self.scale(&inv0);
        r.set_coeff(&vec![0; n], Rational::zero());
        let neg_r = r.scale(&q(-1));
        let mut acc = Self::one(self.vars.clone(), self.cap);
        let mut pw = Self::one(self.vars.clone(), self.cap);
        for _ in 0..self.cap {
            pw = pw.try_mul(&neg_r)?;
            if pw.is_zero() {
                break;
            }
            acc = acc.try_add(&pw)?;
        }
        Ok(acc.scale(&inv0))
    }

    pub fn to_record(&self) -> SeriesRecord {
        SeriesRecord {
            vars: self.vars.clone(),
            cap: self.cap,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRecord {
                    exponents: m.0.clone(),
                    coeff: c.clone(),
                })
                .collect(),
        }
    }

    pub fn from_record(rec: &SeriesRecord) -> Result<TruncatedSeries, AlgebraError> {
        let mut s = Self::zero(rec.vars.clone(), rec.cap);
        for t in &rec.terms {
            if t.exponents.len() != s.vars.len() {
                return Err(AlgebraError::Parse(format!(
                    "exponent vector {:?} does not match {} series symbols",
                    t.exponents,
                    s.vars.len()
                )));
            }
            if t.exponents.iter().sum::<u32>() > rec.cap {
                return Err(AlgebraError::Parse(format!(
                    "term {:?} exceeds cap {}",
                    t.exponents, rec.cap
                )));
            }
            s.add_term(Monomial(t.exponents.clone()), t.coeff.clone());
        }
        Ok(s)
    }
}
