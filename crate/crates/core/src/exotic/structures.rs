//! Six-point structures as signed Laurent monomials in the squared distances
//! `X_ij = x_ij^2`, and their restriction to two dimensions where every
//! `X_ij` factorizes as `x_ij,+ x_ij,-`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::gseries::{g_series, u_vars, GMethod};
use super::ExoticError;
use crate::algebra::rational::{q, qq};
use crate::algebra::{Monomial, MultiPoly, Rational, TruncatedSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StructureName {
    E6,
    B,
    BMinusHalfE,
    /// Twist-2 completion of `B - E/2`; exists only in series form.
    H,
}

impl fmt::Display for StructureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            StructureName::E6 => "E6",
            StructureName::B => "B",
            StructureName::BMinusHalfE => "B-E/2",
            StructureName::H => "H",
        };
        f.write_str(s)
    }
}

/// `prod X_ij^e` with `i < j`; no zero exponents are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XMonomial(pub BTreeMap<(usize, usize), i64>);

impl XMonomial {
    pub fn from_factors(factors: &[((usize, usize), i64)]) -> XMonomial {
        let mut m = XMonomial::default();
        for &((i, j), e) in factors {
            m.mul_pair(i, j, e);
        }
        m
    }

    pub fn mul_pair(&mut self, i: usize, j: usize, e: i64) {
        let key = if i < j { (i, j) } else { (j, i) };
        let v = self.0.entry(key).or_insert(0);
        *v += e;
        if *v == 0 {
            self.0.remove(&key);
        }
    }

    pub fn mul(&self, other: &XMonomial) -> XMonomial {
        let mut out = self.clone();
        for (&(i, j), &e) in &other.0 {
            out.mul_pair(i, j, e);
        }
        out
    }

    pub fn inverse(&self) -> XMonomial {
        XMonomial(self.0.iter().map(|(&k, &e)| (k, -e)).collect())
    }

    /// Total `X` exponent at a point; a conformal weight of `-w` in units of
    /// squared distance.
    pub fn weight(&self, point: usize) -> i64 {
        self.0
            .iter()
            .filter(|((i, j), _)| *i == point || *j == point)
            .map(|(_, e)| *e)
            .sum()
    }

    /// Image under the transposition of two point labels.
    pub fn swap(&self, a: usize, b: usize) -> XMonomial {
        let s = |p: usize| {
            if p == a {
                b
            } else if p == b {
                a
            } else {
                p
            }
        };
        let mut out = XMonomial::default();
        for (&(i, j), &e) in &self.0 {
            out.mul_pair(s(i), s(j), e);
        }
        out
    }

    /// Keys `"ij"` to exponents.
    pub fn to_map(&self) -> BTreeMap<String, i64> {
        self.0
            .iter()
            .map(|(&(i, j), &e)| (format!("{i}{j}"), e))
            .collect()
    }
}

impl fmt::Display for XMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(&(i, j), &e)| {
                if e == 1 {
                    format!("X{i}{j}")
                } else {
                    format!("X{i}{j}^{e}")
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// A linear combination of [`XMonomial`]s.
#[derive(Clone, Debug, PartialEq)]
pub struct SixPointStructure {
    pub name: StructureName,
    pub terms: BTreeMap<XMonomial, Rational>,
}

impl SixPointStructure {
    fn from_list(name: StructureName, list: &[(Rational, XMonomial)]) -> SixPointStructure {
        let mut s = SixPointStructure {
            name,
            terms: BTreeMap::new(),
        };
        for (c, m) in list {
            s.add_term(m.clone(), c.clone());
        }
        s
    }

    pub fn add_term(&mut self, m: XMonomial, c: Rational) {
        let entry = self.terms.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn swap(&self, a: usize, b: usize) -> SixPointStructure {
        let list: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (c.clone(), m.swap(a, b)))
            .collect();
        Self::from_list(self.name, &list)
    }

    pub fn scale(&self, c: &Rational) -> SixPointStructure {
        let list: Vec<_> = self.terms.iter().map(|(m, x)| (x * c, m.clone())).collect();
        Self::from_list(self.name, &list)
    }

    pub fn add(&self, other: &SixPointStructure) -> SixPointStructure {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn mul_monomial(&self, m: &XMonomial) -> SixPointStructure {
        let list: Vec<_> = self.terms.iter().map(|(x, c)| (c.clone(), x.mul(m))).collect();
        Self::from_list(self.name, &list)
    }

    /// True when `self = sign * other` exactly.
    pub fn equals_scaled(&self, other: &SixPointStructure, sign: &Rational) -> bool {
        self.terms == other.scale(sign).terms
    }
}

/// `(f)_{[a,b]} = f - f(a <-> b)`, without a factor 1/2.
fn antisymmetrize(list: &[(Rational, XMonomial)], a: usize, b: usize) -> Vec<(Rational, XMonomial)> {
    let mut out = list.to_vec();
    out.extend(list.iter().map(|(c, m)| (-c.clone(), m.swap(a, b))));
    out
}

/// The twelve signed numerator monomials of `E6` before like terms combine.
pub fn e6_numerator_expanded() -> Vec<(Rational, XMonomial)> {
    let base = vec![
        (
            q(1),
            XMonomial::from_factors(&[((1, 5), 1), ((2, 6), 1), ((3, 4), 1)]),
        ),
        (
            q(-2),
            XMonomial::from_factors(&[((1, 5), 1), ((2, 3), 1), ((4, 6), 1)]),
        ),
        (
            q(-2),
            XMonomial::from_factors(&[((1, 5), 1), ((2, 4), 1), ((3, 6), 1)]),
        ),
    ];
    antisymmetrize(&antisymmetrize(&base, 1, 2), 5, 6)
}

/// Denominator of `E6` at `d = d' = 3`.
fn e6_denominator() -> XMonomial {
    XMonomial::from_factors(&[
        ((1, 2), 2),
        ((1, 3), 1),
        ((1, 4), 1),
        ((2, 3), 1),
        ((2, 4), 1),
        ((3, 5), 1),
        ((4, 5), 1),
        ((3, 6), 1),
        ((4, 6), 1),
        ((5, 6), 2),
    ])
}

fn b_terms() -> Vec<(Rational, XMonomial)> {
    let left = antisymmetrize(
        &[(q(1), XMonomial::from_factors(&[((1, 4), -1), ((2, 3), -1)]))],
        1,
        2,
    );
    let right = antisymmetrize(
        &[(q(1), XMonomial::from_factors(&[((3, 6), -1), ((4, 5), -1)]))],
        5,
        6,
    );
    let outer = XMonomial::from_factors(&[((1, 2), -2), ((3, 4), -1), ((5, 6), -2)]);
    let mut out = Vec::new();
    for (c1, m1) in &left {
        for (c2, m2) in &right {
            out.push((c1 * c2, m1.mul(m2).mul(&outer)));
        }
    }
    out
}

/// Fully expanded signed-monomial form at `d = d' = 3`.
pub fn build_structure(name: StructureName) -> Result<SixPointStructure, ExoticError> {
    let den = e6_denominator().inverse();
    let e6: Vec<_> = e6_numerator_expanded()
        .into_iter()
        .map(|(c, m)| (c, m.mul(&den)))
        .collect();
    match name {
        StructureName::E6 => Ok(SixPointStructure::from_list(name, &e6)),
        StructureName::B => Ok(SixPointStructure::from_list(name, &b_terms())),
        StructureName::BMinusHalfE => {
            let mut list = b_terms();
            list.extend(e6.into_iter().map(|(c, m)| (c * qq(-1, 2), m)));
            Ok(SixPointStructure::from_list(name, &list))
        }
        StructureName::H => Err(ExoticError::NoMonomialForm(name.to_string())),
    }
}

/// `1/(X12^2 X13 X24 X34 X35 X46 X56^2)`, the prefactor shared by the 2D forms.
pub fn common_prefactor() -> XMonomial {
    XMonomial::from_factors(&[
        ((1, 2), -2),
        ((1, 3), -1),
        ((2, 4), -1),
        ((3, 4), -1),
        ((3, 5), -1),
        ((4, 6), -1),
        ((5, 6), -2),
    ])
}

/// A structure divided by [`common_prefactor`]. Every term has weight zero
/// at every point, so in 2D it is a function of the chiral cross ratios only.
#[derive(Clone, Debug, PartialEq)]
pub struct Restricted2d {
    pub name: StructureName,
    pub prefactor: XMonomial,
    pub invariant: SixPointStructure,
}

pub fn restrict_2d(s: &SixPointStructure) -> Result<Restricted2d, ExoticError> {
    let prefactor = common_prefactor();
    let invariant = s.mul_monomial(&prefactor.inverse());
    for m in invariant.terms.keys() {
        if let Some(p) = (1..=6).find(|&p| m.weight(p) != 0) {
            return Err(ExoticError::NonzeroWeight(p));
        }
    }
    Ok(Restricted2d {
        name: s.name,
        prefactor,
        invariant,
    })
}

/// The closed 2D forms of the invariant part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm2d {
    /// `(u+ - u-)/((1-u+)(1-u-)) * (primed)`.
    BMinusHalfE,
    /// `(1/((1-u+)(1-u-)) - 1) * (primed)`.
    B,
}

/// Quotient of two polynomials; compared by cross multiplication.
#[derive(Clone, Debug)]
struct RatFn {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFn {
    fn poly(p: MultiPoly) -> RatFn {
        let den = MultiPoly::one_in(p.vars());
        RatFn { num: p, den }
    }

    fn mul(&self, o: &RatFn) -> RatFn {
        RatFn {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }

    fn div(&self, o: &RatFn) -> RatFn {
        RatFn {
            num: &self.num * &o.den,
            den: &self.den * &o.num,
        }
    }

    fn sub(&self, o: &RatFn) -> RatFn {
        RatFn {
            num: &(&self.num * &o.den) - &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    fn same_as(&self, o: &RatFn) -> bool {
        (&self.num * &o.den) == (&o.num * &self.den)
    }
}

/// Chiral coordinates in a conformal frame: in each chirality points 3, 4, 6
/// sit at 0, 1, -1 and points 1, 2, 5 are free. A function of weight zero at
/// every point is determined by its values in this frame.
struct Frame {
    vars: Vec<String>,
}

impl Frame {
    fn new() -> Frame {
        let mut vars = Vec::new();
        for c in ["p", "m"] {
            for i in [1, 2, 5] {
                vars.push(format!("x{i}{c}"));
            }
        }
        Frame { vars }
    }

    fn coord(&self, point: usize, chirality: usize) -> MultiPoly {
        let fixed = |v: i64| MultiPoly::constant_in(&self.vars, q(v));
        match point {
            3 => fixed(0),
            4 => fixed(1),
            6 => fixed(-1),
            _ => {
                let slot = [1, 2, 5].iter().position(|&p| p == point).expect("free point");
                MultiPoly::var_index(&self.vars, 3 * chirality + slot)
            }
        }
    }

    fn chiral(&self, i: usize, j: usize, c: usize) -> MultiPoly {
        &self.coord(i, c) - &self.coord(j, c)
    }

    fn x_sq(&self, i: usize, j: usize) -> MultiPoly {
        &self.chiral(i, j, 0) * &self.chiral(i, j, 1)
    }

    /// `x12 x34/(x13 x24)` (or the primed ratio on points 3..6) in chirality `c`.
    fn cross_ratio(&self, primed: bool, c: usize) -> RatFn {
        let [a, b, cc, d] = if primed { [3, 4, 5, 6] } else { [1, 2, 3, 4] };
        RatFn {
            num: &self.chiral(a, b, c) * &self.chiral(cc, d, c),
            den: &self.chiral(a, cc, c) * &self.chiral(b, d, c),
        }
    }

    fn structure(&self, s: &SixPointStructure) -> RatFn {
        let mut common = XMonomial::default();
        for m in s.terms.keys() {
            for (&(i, j), &e) in &m.0 {
                if e < 0 && -e > common.0.get(&(i, j)).copied().unwrap_or(0) {
                    common.0.insert((i, j), -e);
                }
            }
        }
        let eval = |m: &XMonomial| {
            let mut p = MultiPoly::one_in(&self.vars);
            for (&(i, j), &e) in &m.0 {
                p = &p * &self.x_sq(i, j).pow(e as u32);
            }
            p
        };
        let mut num = MultiPoly::zero_owned(self.vars.clone());
        for (m, c) in &s.terms {
            num = &num + &eval(&m.mul(&common)).scale(c);
        }
        RatFn {
            num,
            den: eval(&common),
        }
    }
}

fn closed_factor(which: ClosedForm2d, up: &RatFn, um: &RatFn) -> RatFn {
    let one = RatFn::poly(MultiPoly::one_in(up.num.vars()));
    let t = one.sub(up).mul(&one.sub(um));
    match which {
        ClosedForm2d::BMinusHalfE => up.sub(um).div(&t),
        ClosedForm2d::B => one.div(&t).sub(&one),
    }
}

/// Decides exactly whether the invariant part equals the closed form.
pub fn closed_form_2d(r: &Restricted2d, which: ClosedForm2d) -> bool {
    let frame = Frame::new();
    let lhs = frame.structure(&r.invariant);
    let unprimed = closed_factor(which, &frame.cross_ratio(false, 0), &frame.cross_ratio(false, 1));
    let primed = closed_factor(which, &frame.cross_ratio(true, 0), &frame.cross_ratio(true, 1));
    lhs.same_as(&unprimed.mul(&primed))
}

/// One chiral factor of the 2D form as a series in `(up, um)`: for `B`
/// `1/((1-u+)(1-u-)) - 1`, for `H` the `B - E/2` factor times `g`.
pub fn chiral_factor_series(name: StructureName, cap: u32) -> Result<TruncatedSeries, ExoticError> {
    let vars = u_vars();
    let one = MultiPoly::one_in(&vars);
    let up = MultiPoly::var_index(&vars, 0);
    let um = MultiPoly::var_index(&vars, 1);
    let t = &(&one - &up) * &(&one - &um);
    let inv_t = TruncatedSeries::from_poly(&t, cap).inverse()?;
    match name {
        StructureName::B => Ok(inv_t.try_sub(&TruncatedSeries::one(vars, cap))?),
        StructureName::BMinusHalfE => Ok(inv_t.try_mul(&TruncatedSeries::from_poly(&(&up - &um), cap))?),
        StructureName::H => {
            let f = inv_t.try_mul(&TruncatedSeries::from_poly(&(&up - &um), cap))?;
            Ok(f.try_mul(&g_series(cap, GMethod::Recursion)?.series)?)
        }
        StructureName::E6 => Err(ExoticError::NoMonomialForm("E6 has no factorized 2D form".into())),
    }
}

/// Displayed double sums: weight 1 (`B`) or `(a-b)/(a+b)` (`H`) on
/// `u+^a u-^b`, `0 < a + b <= cap`.
pub fn double_sum_form(name: StructureName, cap: u32) -> TruncatedSeries {
    let mut s = TruncatedSeries::zero(u_vars(), cap);
    for d in 1..=cap {
        for a in 0..=d {
            let b = d - a;
            let c = match name {
                StructureName::H => qq(a as i64 - b as i64, d as i64),
                _ => q(1),
            };
            s.add_term(Monomial(vec![a, b]), c);
        }
    }
    s
}
