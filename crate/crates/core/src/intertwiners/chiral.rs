//! Chiral intertwiners as coefficient tables over `d1^p d2^q`, where `d1`, `d2`
//! are the formal derivative symbols of the two fused points.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::IntertwinerError;
use crate::algebra::rational::{factorial, q, sign_pow};
use crate::algebra::{pochhammer, Monomial, MultiPoly, Rational};

/// Formal derivative symbols of a chiral operator.
pub const CHIRAL_SYMBOLS: [&str; 2] = ["d1", "d2"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ChiralKind {
    /// Closed-form solution of the chiral intertwining equation, degree `h`.
    E,
    /// Degree `h - 1` operator used on structures of order `x^{1-d}`.
    D,
}

/// Homogeneous chiral differential operator. `coeffs` holds only nonzero
/// entries; the sign of `(-d2)^q` is included.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiralIntertwiner {
    pub h: u32,
    pub d1: Rational,
    pub d2: Rational,
    pub kind: ChiralKind,
    pub coeffs: BTreeMap<(u32, u32), Rational>,
}

impl ChiralIntertwiner {
    /// Derivative order of every term.
    pub fn order(&self) -> u32 {
        match self.kind {
            ChiralKind::E => self.h,
            ChiralKind::D => self.h.saturating_sub(1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent `e` of the factor `x_{12}^e` applied before the operator.
    pub fn regularizing_power(&self) -> Rational {
        match self.kind {
            ChiralKind::E => &self.d1 + &self.d2,
            ChiralKind::D => &self.d1 + &self.d2 - q(1),
        }
    }

    pub fn to_poly(&self) -> MultiPoly {
        let vars: Vec<String> = CHIRAL_SYMBOLS.iter().map(|s| s.to_string()).collect();
        MultiPoly::from_terms(
            vars,
            self.coeffs.iter().map(|(&(p, q), c)| (vec![p, q], c.clone())),
        )
    }

    /// Rebuilds an operator of the given kind and labels from a polynomial
    /// in [`CHIRAL_SYMBOLS`].
    pub fn from_poly(
        h: u32,
        d1: Rational,
        d2: Rational,
        kind: ChiralKind,
        poly: &MultiPoly,
    ) -> ChiralIntertwiner {
        let coeffs = poly
            .terms()
            .map(|(m, c)| ((m.exps()[0], m.exps()[1]), c.clone()))
            .collect();
        ChiralIntertwiner {
            h,
            d1,
            d2,
            kind,
            coeffs,
        }
    }

    /// Coefficients keyed `"(p,q)"`.
    pub fn coefficient_map(&self) -> BTreeMap<String, String> {
        self.coeffs
            .iter()
            .map(|(&(p, q), c)| (format!("({p},{q})"), c.to_string()))
            .collect()
    }
}

/// `E_h^{d1,d2} = sum_{p+q=h} (q-d1+d2)_p (p+d1-d2)_q / (p! q!) d1^p (-d2)^q`.
pub fn chiral_e(h: u32, d1: &Rational, d2: &Rational) -> ChiralIntertwiner {
    let b = d1 - d2;
    let mut coeffs = BTreeMap::new();
    for p in 0..=h {
        let qq = h - p;
        let c = pochhammer(&(q(qq as i64) - &b), p) * pochhammer(&(q(p as i64) + &b), qq)
            / (factorial(p) * factorial(qq))
            * sign_pow(qq as i64);
        if !c.is_zero() {
            coeffs.insert((p, qq), c);
        }
    }
    ChiralIntertwiner {
        h,
        d1: d1.clone(),
        d2: d2.clone(),
        kind: ChiralKind::E,
        coeffs,
    }
}

/// `D_h = 1/(h-1)! sum_{p+q=h-1} d1^p (-d2)^q / (p!^2 q!^2)` for fields of
/// equal dimension `d`.
pub fn chiral_d(h: u32, d: &Rational) -> Result<ChiralIntertwiner, IntertwinerError> {
    if h == 0 {
        return Err(IntertwinerError::InvalidOrder(
            "the D operators are defined for h >= 1".into(),
        ));
    }
    let mut coeffs = BTreeMap::new();
    for p in 0..h {
        let qq = h - 1 - p;
        let fp = factorial(p);
        let fq = factorial(qq);
        let c = sign_pow(qq as i64) / (factorial(h - 1) * &fp * &fp * &fq * &fq);
        coeffs.insert((p, qq), c);
    }
    Ok(ChiralIntertwiner {
        h,
        d1: d.clone(),
        d2: d.clone(),
        kind: ChiralKind::D,
        coeffs,
    })
}

/// `(d1 N1^2 + d2 N2^2 + (d1-d2)(N1 - N2)) E`, where `N_i` differentiates
/// with respect to the symbol `d_i` and the dimensions are the operator's.
pub fn chiral_pde_residual(op: &ChiralIntertwiner) -> MultiPoly {
    chiral_pde_residual_poly(&op.to_poly(), &(&op.d1 - &op.d2))
}

/// The chiral intertwining condition applied to an arbitrary polynomial in
/// [`CHIRAL_SYMBOLS`].
pub fn chiral_pde_residual_poly(e: &MultiPoly, dim_difference: &Rational) -> MultiPoly {
    let x = e.differentiate(0);
    let y = e.differentiate(1);
    let vars = e.vars().to_vec();
    let s1 = MultiPoly::var_index(&vars, 0);
    let s2 = MultiPoly::var_index(&vars, 1);
    let second = &(&s1 * &x.differentiate(0)) + &(&s2 * &y.differentiate(1));
    &second + &(&x - &y).scale(dim_difference)
}

/// `(N1 - N2) E` as a polynomial in [`CHIRAL_SYMBOLS`].
pub fn nabla_difference(op: &ChiralIntertwiner) -> MultiPoly {
    let e = op.to_poly();
    &e.differentiate(0) - &e.differentiate(1)
}

/// All monomials `d1^p d2^q` with `p + q = h`, in increasing `p`.
pub fn chiral_monomials(h: u32) -> Vec<Monomial> {
    (0..=h).map(|p| Monomial(vec![p, h - p])).collect()
}
