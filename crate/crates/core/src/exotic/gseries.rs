//! The biharmonic function `g(s, t)` as a power series in the chiral
//! variables `u+`, `u-` with `s = u+ u-` and `t = (1-u+)(1-u-)`.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ExoticError;
use crate::algebra::rational::{factorial, q, qq};
use crate::algebra::{Monomial, MultiPoly, Rational, TruncatedSeries};

/// Series symbols of the chiral variables.
pub const U_VARS: [&str; 2] = ["up", "um"];
const SW_VARS: [&str; 2] = ["s", "w"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GMethod {
    /// Order-by-order solution of the recursion for `g_n` in `w = 1 - t`.
    Recursion,
    /// `(1-u+)(1-u-)/(u+ - u-) * sum (a-b)/(a+b) u+^a u-^b`, divided exactly.
    Closed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GSeries {
    pub series: TruncatedSeries,
}

impl GSeries {
    pub fn cap(&self) -> u32 {
        self.series.cap()
    }

    /// Coefficient of `u+^a u-^b`.
    pub fn coeff(&self, a: u32, b: u32) -> Rational {
        self.series.coeff(&[a, b])
    }

    /// Nonzero coefficients keyed by `(a, b)`.
    pub fn terms(&self) -> BTreeMap<(u32, u32), Rational> {
        self.series
            .terms()
            .map(|(m, c)| ((m.0[0], m.0[1]), c.clone()))
            .collect()
    }
}

pub(crate) fn u_vars() -> Vec<String> {
    U_VARS.iter().map(|s| s.to_string()).collect()
}

fn sw_vars() -> Vec<String> {
    SW_VARS.iter().map(|s| s.to_string()).collect()
}

/// `2ab / ((a+b)((a+b)^2 - 1))` for `a, b >= 1`.
pub fn g_coefficient(a: u32, b: u32) -> Rational {
    let n = q((a + b) as i64);
    q(2 * a as i64 * b as i64) / (&n * (&n * &n - q(1)))
}

/// `(1-w) f'` on a dense coefficient vector; the result is exact through
/// degree `f.len() - 2`.
fn one_minus_w_deriv(f: &[Rational]) -> Vec<Rational> {
    (0..f.len().saturating_sub(1))
        .map(|k| q(k as i64 + 1) * &f[k + 1] - q(k as i64) * &f[k])
        .collect()
}

/// Dense coefficients of `g_n(w)` through degree `cap - 2n`, for `n <= cap/2`.
fn g_components(cap: u32) -> Vec<Vec<Rational>> {
    let nmax = cap / 2;
    let mut out: Vec<Vec<Rational>> = Vec::new();
    let mut g0 = vec![Rational::zero(); cap as usize + 1];
    g0[0] = q(1);
    out.push(g0);
    for n in 1..=nmax {
        let prev = &out[n as usize - 1];
        let kmax = (cap - 2 * n) as usize;
        // (1 + (1-w) d_w)(n - (1-w) d_w) g_{n-1}, with t d_t = -(1-w) d_w
        let d = one_minus_w_deriv(prev);
        let h: Vec<Rational> = d
            .iter()
            .enumerate()
            .map(|(k, dk)| q(n as i64) * &prev[k] - dk)
            .collect();
        let dh = one_minus_w_deriv(&h);
        let rhs: Vec<Rational> = dh.iter().enumerate().map(|(k, x)| &h[k] + x).collect();
        // w^k coefficient of the left side: (n+2+k) g_k - (n+k) g_{k-1}
        let mut g = vec![Rational::zero(); kmax + 1];
        for k in 0..=kmax {
            let lower = if k == 0 {
                Rational::zero()
            } else {
                q((n as usize + k) as i64) * &g[k - 1]
            };
            g[k] = (&rhs[k] + lower) / q((n as usize + 2 + k) as i64);
        }
        out.push(g);
    }
    out
}

fn recursion_series(cap: u32) -> Result<TruncatedSeries, ExoticError> {
    let vars = u_vars();
    let up = MultiPoly::var_index(&vars, 0);
    let um = MultiPoly::var_index(&vars, 1);
    let s = TruncatedSeries::from_poly(&(&up * &um), cap);
    let w = TruncatedSeries::from_poly(&(&(&up + &um) - &(&up * &um)), cap);
    let mut total = TruncatedSeries::zero(vars.clone(), cap);
    let mut s_pow = TruncatedSeries::one(vars.clone(), cap);
    for (n, gn) in g_components(cap).iter().enumerate() {
        let mut inner = TruncatedSeries::zero(vars.clone(), cap);
        let mut w_pow = TruncatedSeries::one(vars.clone(), cap);
        for c in gn {
            inner = inner.try_add(&w_pow.scale(c))?;
            w_pow = w_pow.try_mul(&w)?;
        }
        total = total.try_add(&s_pow.try_mul(&inner)?.scale(&(q(1) / factorial(n as u32))))?;
        s_pow = s_pow.try_mul(&s)?;
    }
    Ok(total)
}

/// Exact quotient of an antisymmetric polynomial in `(up, um)` by `up - um`.
fn divide_by_difference(p: &MultiPoly) -> Result<MultiPoly, ExoticError> {
    let vars = u_vars();
    let mut out = MultiPoly::zero_owned(vars);
    let top = p.total_degree().unwrap_or(0);
    for d in 1..=top {
        // (up - um) sum_a q_a up^a um^{d-1-a} has up^a um^{d-a} coefficient q_{a-1} - q_a
        let mut prev = Rational::zero();
        for a in 0..d {
            let qa = &prev - p.coeff(&[a, d - a]);
            out.add_term(Monomial(vec![a, d - 1 - a]), qa.clone());
            prev = qa;
        }
        if prev != p.coeff(&[d, 0]) {
            return Err(ExoticError::Internal(format!(
                "degree {d} part is not divisible by up - um"
            )));
        }
    }
    if !p.coeff(&[0, 0]).is_zero() {
        return Err(ExoticError::Internal(
            "constant term is not divisible by up - um".into(),
        ));
    }
    Ok(out)
}

fn closed_series(cap: u32) -> Result<TruncatedSeries, ExoticError> {
    let vars = u_vars();
    let mut sum = MultiPoly::zero_owned(vars.clone());
    for d in 1..=cap + 1 {
        for a in 0..=d {
            let b = d - a;
            sum.add_term(Monomial(vec![a, b]), qq(a as i64 - b as i64, d as i64));
        }
    }
    let quotient = divide_by_difference(&sum)?;
    let one = MultiPoly::one_in(&vars);
    let factor = &(&one - &MultiPoly::var_index(&vars, 0)) * &(&one - &MultiPoly::var_index(&vars, 1));
    Ok(TruncatedSeries::from_poly(&(&factor * &quotient), cap))
}

pub fn g_series(cap: u32, method: GMethod) -> Result<GSeries, ExoticError> {
    let series = match method {
        GMethod::Recursion => recursion_series(cap)?,
        GMethod::Closed => closed_series(cap)?,
    };
    Ok(GSeries { series })
}

/// Rewrites a symmetric polynomial in `(up, um)` in `(s, w)`; only monomials
/// `s^n w^k` of weight `2n + k <= cap` are kept, which are exact when the
/// input is exact through degree `cap`.
fn symmetric_to_sw(p: &MultiPoly, cap: u32) -> Result<MultiPoly, ExoticError> {
    let sw = sw_vars();
    let s = MultiPoly::var_index(&sw, 0);
    let e1 = &MultiPoly::var_index(&sw, 1) + &s;
    let mut out = MultiPoly::zero_owned(sw.clone());
    let mut rest = p.clone();
    let vars = u_vars();
    let e1u = &MultiPoly::var_index(&vars, 0) + &MultiPoly::var_index(&vars, 1);
    let e2u = &MultiPoly::var_index(&vars, 0) * &MultiPoly::var_index(&vars, 1);
    // peel the term with the largest up exponent: up^a um^b -> e1^{a-b} e2^b
    while let Some((m, c)) = rest
        .terms()
        .max_by_key(|(m, _)| (m.0[0], m.0[1]))
        .map(|(m, c)| (m.clone(), c.clone()))
    {
        let (a, b) = (m.0[0], m.0[1]);
        if a < b {
            return Err(ExoticError::Internal("g is not symmetric in up and um".into()));
        }
        rest = &rest - &(&e1u.pow(a - b) * &e2u.pow(b)).scale(&c);
        out = &out + &(&e1.pow(a - b) * &s.pow(b)).scale(&c);
    }
    let mut kept = MultiPoly::zero_owned(sw);
    for (m, c) in out.terms() {
        if 2 * m.0[0] + m.0[1] <= cap {
            kept.add_term(m.clone(), c.clone());
        }
    }
    Ok(kept)
}

/// `[(1 - T)(1 + T + S) - ((1 - T) + t(2 + T + S)) d_s] g` with `T = t d_t`,
/// `S = s d_s`, written in `(s, w)` where `t = 1 - w` and `T = -(1-w) d_w`.
fn biharmonic_operator(g: &MultiPoly) -> MultiPoly {
    let sw = g.vars().to_vec();
    let one = MultiPoly::one_in(&sw);
    let s = MultiPoly::var_index(&sw, 0);
    let t = &one - &MultiPoly::var_index(&sw, 1);
    let tt = |f: &MultiPoly| -(&t * &f.differentiate(1));
    let ss = |f: &MultiPoly| &s * &f.differentiate(0);
    let one_minus_t = |f: &MultiPoly| f - &tt(f);
    let first = one_minus_t(&(&(g + &tt(g)) + &ss(g)));
    let ds = g.differentiate(0);
    let inner = &(&ds.scale(&q(2)) + &tt(&ds)) + &ss(&ds);
    let second = &one_minus_t(&ds) + &(&t * &inner);
    &first - &second
}

#[derive(Clone, Debug, PartialEq)]
pub struct BiharmonicResidual {
    /// Residual in `(up, um)`, complete through total degree `valid_order`.
    pub residual: TruncatedSeries,
    pub valid_order: u32,
}

/// Applies the biharmonicity operator to `g`. The operator lowers the weight
/// of `s^n w^k` (`2n + k`) by at most 3, so the residual is exact through
/// order `cap - 3`.
pub fn verify_g_biharmonic(g: &GSeries) -> Result<BiharmonicResidual, ExoticError> {
    let cap = g.cap();
    if cap < 3 {
        return Err(ExoticError::CapTooSmall { cap, min: 3 });
    }
    let valid = cap - 3;
    let sw = symmetric_to_sw(&g.series.to_poly(), cap)?;
    let r = biharmonic_operator(&sw);
    let vars = u_vars();
    let up = MultiPoly::var_index(&vars, 0);
    let um = MultiPoly::var_index(&vars, 1);
    let s_u = &up * &um;
    let w_u = &(&up + &um) - &s_u;
    let mut out = MultiPoly::zero_owned(vars);
    for (m, c) in r.terms() {
        if 2 * m.0[0] + m.0[1] <= valid {
            out = &out + &(&s_u.pow(m.0[0]) * &w_u.pow(m.0[1])).scale(c);
        }
    }
    Ok(BiharmonicResidual {
        residual: TruncatedSeries::from_poly(&out, valid),
        valid_order: valid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_coefficients() {
        let g = g_series(6, GMethod::Recursion).unwrap();
        assert_eq!(g.coeff(0, 0), q(1));
        assert_eq!(g.coeff(1, 1), qq(1, 3));
        assert_eq!(g.coeff(2, 1), qq(1, 6));
        assert_eq!(g.coeff(2, 2), qq(2, 15));
        assert!(g.coeff(3, 0).is_zero());
    }

    #[test]
    fn methods_agree_with_coefficient_formula() {
        let cap = 9;
        let r = g_series(cap, GMethod::Recursion).unwrap();
        let c = g_series(cap, GMethod::Closed).unwrap();
        assert_eq!(r, c);
        for a in 0..=cap {
            for b in 0..=cap - a {
                let want = match (a, b) {
                    (0, 0) => q(1),
                    (0, _) | (_, 0) => q(0),
                    _ => g_coefficient(a, b),
                };
                assert_eq!(r.coeff(a, b), want, "({a},{b})");
            }
        }
    }

    #[test]
    fn biharmonic() {
        let g = g_series(9, GMethod::Closed).unwrap();
        let r = verify_g_biharmonic(&g).unwrap();
        assert_eq!(r.valid_order, 6);
        assert!(r.residual.is_zero());
    }

    #[test]
    fn perturbed_g_is_not_biharmonic() {
        let mut g = g_series(6, GMethod::Closed).unwrap();
        g.series.set_coeff(&[1, 1], qq(1, 2));
        let r = verify_g_biharmonic(&g).unwrap();
        assert!(!r.residual.is_zero());
        let one = GSeries {
            series: TruncatedSeries::one(u_vars(), 6),
        };
        let r1 = verify_g_biharmonic(&one).unwrap();
        assert_eq!(r1.residual.coeff(&[0, 0]), q(1));
    }

    #[test]
    fn antisymmetric_division() {
        let vars = u_vars();
        let up = MultiPoly::var_index(&vars, 0);
        let um = MultiPoly::var_index(&vars, 1);
        let quotient = &(&up * &up) + &um;
        let p = &(&up - &um) * &quotient;
        assert_eq!(divide_by_difference(&p).unwrap(), quotient);
        assert!(divide_by_difference(&up).is_err());
    }
}
