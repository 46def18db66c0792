//! Channel reduction of the 2D structures with the chiral operators `D_h`.
//!
//! Per chirality the reduction rests on the identity
//! `iota D_h [u^a/(x13 x24)] = (-1)^{h-1} c_{a,h} x34^{h-1}/((x-x3)^h (x-x4)^h)`,
//! which holds for the operator `(h-1)!^2 D_h` (with `D_h` as returned by `chiral_d` every
//! term carries an extra `1/(h-1)!^2`). The 5-6 channel obeys the same identity
//! with the same sign: relabeling `1 <-> 6, 2 <-> 5, 3 <-> 4` flips both the
//! operator and `x34^{h-1}` by `(-1)^{h-1}`.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::ExoticError;
use crate::algebra::rational::{factorial, q, qq, sign_pow};
use crate::algebra::{pochhammer, Monomial, MultiPoly, PairMonomial, Rational};

/// Weight on `u+^a u-^b` in the chiral double sum of a structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Weighting {
    /// Weight 1, the structure `B`.
    B,
    /// Weight `(a-b)/(a+b)`, the structure `H`.
    H,
}

/// Structures whose reduced coefficient is a product over both channels.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ChannelStructure {
    B,
    H,
    /// Twist-2 part of `E`, i.e. `2(B - H)`.
    E,
}

/// `c_{a,h} = (h)_a (1-h)_a / a!^2`; zero for `a >= h`.
pub fn c_ah(a: u32, h: u32) -> Rational {
    let fa = factorial(a);
    pochhammer(&q(h as i64), a) * pochhammer(&q(1 - h as i64), a) / (&fa * &fa)
}

fn check_weight(h: u32) -> Result<(), ExoticError> {
    if h < 1 {
        return Err(ExoticError::WeightBelowOne(h as i64));
    }
    Ok(())
}

/// `F(z) = sum_a c_{a,h} z^a`.
pub fn f_polynomial(h: u32) -> Result<MultiPoly, ExoticError> {
    check_weight(h)?;
    let vars = vec!["z".to_string()];
    Ok(MultiPoly::from_terms(vars, (0..h).map(|a| (vec![a], c_ah(a, h)))))
}

/// `G_b(1)` from `G_b(z) = F(z) - 2b z^{-b} int_0^z t^{b-1} F(t) dt`, with the
/// integral taken term by term.
pub fn g_b_at_one(h: u32, b: u32) -> Result<Rational, ExoticError> {
    if b == 0 {
        return Err(ExoticError::Internal("G_b is defined for b >= 1".into()));
    }
    let f = f_polynomial(h)?;
    let integral = f.shift(&Monomial(vec![b - 1])).integrate(0);
    // z^{-b} is 1 at z = 1
    let one = [q(1)];
    Ok(f.evaluate(&one) - q(2 * b as i64) * integral.evaluate(&one))
}

fn weight(w: Weighting, a: u32, b: u32) -> Rational {
    match w {
        Weighting::B => q(1),
        Weighting::H => qq(a as i64 - b as i64, (a + b) as i64),
    }
}

/// `C(h+, h-)`: the finite double sum `sum_{a+b>0} w_ab (-1)^{h+-1} c_{a,h+} (-1)^{h--1} c_{b,h-}`.
pub fn channel_coefficient(hp: u32, hm: u32, w: Weighting) -> Result<Rational, ExoticError> {
    check_weight(hp)?;
    check_weight(hm)?;
    let mut sum = Rational::zero();
    for a in 0..hp {
        for b in 0..hm {
            if a + b > 0 {
                sum += weight(w, a, b) * c_ah(a, hp) * c_ah(b, hm);
            }
        }
    }
    Ok(sign_pow((hp + hm) as i64) * sum)
}

/// The same coefficient through `F(1)` and `G_b(1)`.
pub fn channel_coefficient_via_g(hp: u32, hm: u32, w: Weighting) -> Result<Rational, ExoticError> {
    let one = [q(1)];
    let fp = f_polynomial(hp)?.evaluate(&one);
    let fm = f_polynomial(hm)?.evaluate(&one);
    let sum = match w {
        Weighting::B => fp * fm - q(1),
        Weighting::H => {
            // b = 0 column has weight 1 for a > 0; b > 0 columns sum to G_b(1)
            let mut s = fp - q(1);
            for b in 1..hm {
                s += c_ah(b, hm) * g_b_at_one(hp, b)?;
            }
            s
        }
    };
    Ok(sign_pow((hp + hm) as i64) * sum)
}

/// `2 chi_odd(h)` for `B`, `sign(h) 2 chi_odd(h)` for `H`, `h = h+ - h-`.
pub fn expected_channel_coefficient(hp: u32, hm: u32, w: Weighting) -> Rational {
    let h = hp as i64 - hm as i64;
    let odd = if h.rem_euclid(2) == 1 { q(2) } else { q(0) };
    match w {
        Weighting::B => odd,
        Weighting::H => odd * q(h.signum()),
    }
}

/// Reference chiral 4-point function on points `x = 1, x3 = 2, x4 = 3, x' = 4`:
/// `W = x34^{h+h'-3} / ((x-x3)^h (x-x4)^h (x3-x')^{h'} (x4-x')^{h'})` per chirality.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FourPointW {
    pub h_plus: u32,
    pub h_minus: u32,
    pub h_plus_prime: u32,
    pub h_minus_prime: u32,
}

impl FourPointW {
    pub fn chiral_factor(h: u32, hprime: u32) -> PairMonomial {
        let (h, hp) = (h as i64, hprime as i64);
        let mut m = PairMonomial::one();
        m.mul_pair((2, 3), q(h + hp - 3));
        m.mul_pair((1, 2), q(-h));
        m.mul_pair((1, 3), q(-h));
        m.mul_pair((2, 4), q(-hp));
        m.mul_pair((3, 4), q(-hp));
        m
    }

    pub fn plus(&self) -> PairMonomial {
        Self::chiral_factor(self.h_plus, self.h_plus_prime)
    }

    pub fn minus(&self) -> PairMonomial {
        Self::chiral_factor(self.h_minus, self.h_minus_prime)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SixPointReduction {
    pub coefficient: Rational,
    pub reference: FourPointW,
}

/// Reduces in the 1-2 channel with weights `(h+, h-)` and in the 5-6 channel
/// with `(h'+, h'-)`; the result is `coefficient * W`.
pub fn reduce_sixpoint(
    s: ChannelStructure,
    hp: u32,
    hm: u32,
    hpp: u32,
    hmp: u32,
) -> Result<SixPointReduction, ExoticError> {
    let pair = |w| -> Result<Rational, ExoticError> {
        Ok(channel_coefficient(hp, hm, w)? * channel_coefficient(hpp, hmp, w)?)
    };
    let coefficient = match s {
        ChannelStructure::B => pair(Weighting::B)?,
        ChannelStructure::H => pair(Weighting::H)?,
        ChannelStructure::E => (pair(Weighting::B)? - pair(Weighting::H)?) * q(2),
    };
    Ok(SixPointReduction {
        coefficient,
        reference: FourPointW {
            h_plus: hp,
            h_minus: hm,
            h_plus_prime: hpp,
            h_minus_prime: hmp,
        },
    })
}
