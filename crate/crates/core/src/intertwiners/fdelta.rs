//! Degree-`L` polynomial solutions `f_{kL;delta}(r)` of the single-term
//! equation and the contiguous operators `A^+`, `A^-` relating them.

use num_traits::Zero;

use super::IntertwinerError;
use crate::algebra::rational::{factorial, q, qq};
use crate::algebra::{pochhammer, MultiPoly};

/// The polynomial variable.
pub const R: &str = "r";

#[derive(Clone, Debug, PartialEq)]
pub struct FDelta {
    pub kappa: u32,
    pub l: u32,
    pub delta: i64,
    pub poly: MultiPoly,
}

fn r_vars() -> Vec<String> {
    vec![R.to_string()]
}

fn r_poly() -> MultiPoly {
    MultiPoly::var_index(&r_vars(), 0)
}

/// `sum_k (-L)_k (L+2k-1)_k (kappa-delta+k)_{L-k} / k! ((1-r)/2)^k`, the
/// Gauss polynomial with the factor `(kappa-delta)_L` cancelled termwise, so
/// that it is defined for every integer `delta`.
pub fn f_delta_direct(kappa: u32, l: u32, delta: i64) -> MultiPoly {
    let k2 = q(kappa as i64);
    let ll = q(l as i64);
    let c = &k2 - q(delta);
    let z = (&MultiPoly::one_in(&r_vars()) - &r_poly()).scale(&qq(1, 2));
    let mut out = MultiPoly::zero_owned(r_vars());
    let mut zk = MultiPoly::one_in(&r_vars());
    for k in 0..=l {
        let kk = q(k as i64);
        let coef = pochhammer(&-ll.clone(), k)
            * pochhammer(&(&ll + &k2 * q(2) - q(1)), k)
            * pochhammer(&(&c + &kk), l - k)
            / factorial(k);
        if !coef.is_zero() {
            out = &out + &zk.scale(&coef);
        }
        zk = &zk * &z;
    }
    out
}

/// `A^+_{kL,delta} f = ((r-1) f' + (kappa-1-delta) f) / (L+kappa-1-delta)`;
/// `None` when the denominator vanishes.
pub fn a_plus(kappa: u32, l: u32, delta: i64, f: &MultiPoly) -> Option<MultiPoly> {
    contiguous(kappa, l, delta, f, 1)
}

/// `A^-_{kL,delta} f = ((r+1) f' + (kappa-1+delta) f) / (L+kappa-1+delta)`.
pub fn a_minus(kappa: u32, l: u32, delta: i64, f: &MultiPoly) -> Option<MultiPoly> {
    contiguous(kappa, l, delta, f, -1)
}

fn contiguous(kappa: u32, l: u32, delta: i64, f: &MultiPoly, sign: i64) -> Option<MultiPoly> {
    let base = q(kappa as i64) - q(1) - q(sign * delta);
    let den = q(l as i64) + &base;
    if den.is_zero() {
        return None;
    }
    let shift = &r_poly() - &MultiPoly::constant_in(&r_vars(), q(sign));
    let num = &(&shift * &f.differentiate(0)) + &f.scale(&base);
    Some(num.scale(&(q(1) / den)))
}

/// `(1-r^2) f'' - 2 kappa r f' + 2 delta f' + L(L+2kappa-1) f`.
pub fn f_delta_ode_residual(kappa: u32, l: u32, delta: i64, f: &MultiPoly) -> MultiPoly {
    let r = r_poly();
    let one = MultiPoly::one_in(&r_vars());
    let d1 = f.differentiate(0);
    let d2 = d1.differentiate(0);
    let k = q(kappa as i64);
    let ll = q(l as i64);
    let a = &(&one - &(&r * &r)) * &d2;
    let b = (&r * &d1).scale(&(-&k * q(2)));
    let c = d1.scale(&q(2 * delta));
    let e = f.scale(&(&ll * (&ll + &k * q(2) - q(1))));
    &(&(&a + &b) + &c) + &e
}

/// `f_{kL;delta}`. The direct Gauss form is used whenever it is nonzero or
/// `delta = 0`; otherwise the polynomial is reached from `delta = 0` by a
/// chain of `A^+` or `A^-`.
pub fn f_delta(kappa: u32, l: u32, delta: i64) -> Result<FDelta, IntertwinerError> {
    let direct = f_delta_direct(kappa, l, delta);
    if !direct.is_zero() || delta == 0 {
        return Ok(FDelta {
            kappa,
            l,
            delta,
            poly: direct,
        });
    }
    let mut f = f_delta_direct(kappa, l, 0);
    let step = delta.signum();
    let mut d = 0;
    while d != delta {
        let next = if step > 0 {
            a_plus(kappa, l, d, &f)
        } else {
            a_minus(kappa, l, d, &f)
        };
        f = next.ok_or(IntertwinerError::UnresolvableDegeneracy { kappa, l, delta })?;
        d += step;
    }
    Ok(FDelta {
        kappa,
        l,
        delta,
        poly: f,
    })
}

/// `p(r) -> p(-r)`.
pub fn reflect(p: &MultiPoly) -> MultiPoly {
    p.map_by_exponent(|e| if e[0] % 2 == 0 { q(1) } else { q(-1) })
}
