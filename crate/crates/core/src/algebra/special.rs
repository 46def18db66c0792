//! Pochhammer symbols, Legendre polynomials and Gauss series coefficients.

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::rational::{factorial, q, Rational};
use super::AlgebraError;

/// Rising factorial `(x)_n = x (x+1) ... (x+n-1)`.
pub fn pochhammer(x: &Rational, n: u32) -> Rational {
    let mut acc = Rational::one();
    for k in 0..n {
        acc *= x + q(k as i64);
    }
    acc
}

/// Legendre polynomial `P_l(r)` in the single symbol `r`, normalized so that
/// `P_l(1) = 1`.
pub fn legendre(l: u32) -> MultiPoly {
    legendre_in(l, "r")
}

/// `P_l` in a symbol of the caller's choosing.
pub fn legendre_in(l: u32, symbol: &str) -> MultiPoly {
    let vars = vec![symbol.to_string()];
    let r = MultiPoly::var_index(&vars, 0);
    let mut prev = MultiPoly::one_in(&vars);
    if l == 0 {
        return prev;
    }
    let mut cur = r.clone();
    for k in 1..l {
        // (k+1) P_{k+1} = (2k+1) r P_k - k P_{k-1}
        let next = (&(&r * &cur).scale(&q(2 * k as i64 + 1)) - &prev.scale(&q(k as i64)))
            .scale(&(Rational::one() / q(k as i64 + 1)));
        prev = cur;
        cur = next;
    }
    cur
}

/// `(a)_l (b)_l / (l! (c)_l)`, the coefficient of `z^l` in `2F1(a, b; c; z)`.
pub fn gauss2f1_coeff(a: &Rational, b: &Rational, c: &Rational, l: u32) -> Result<Rational, AlgebraError> {
    let den = pochhammer(c, l);
    if den.is_zero() {
        return Err(AlgebraError::HypergeometricPole {
            c: c.to_string(),
            order: l,
        });
    }
    Ok(pochhammer(a, l) * pochhammer(b, l) / (factorial(l) * den))
}
