//! Chiral partial-wave amplitudes of the reference 4-point function:
//! `1 = sum_n B^{3/2+n}_{h,h'} u^n 2F1(n+h, n+h'; 2n+3; u)`.

use num_traits::Zero;

use super::ExoticError;
use crate::algebra::rational::{q, qq};
use crate::algebra::{gauss2f1_coeff, Monomial, Rational, TruncatedSeries};

#[derive(Clone, Debug, PartialEq)]
pub struct AmplitudeMatrix {
    pub h: u32,
    pub h_prime: u32,
    /// `entries[n] = B^{3/2+n}`.
    pub entries: Vec<Rational>,
}

impl AmplitudeMatrix {
    pub fn cap(&self) -> u32 {
        self.entries.len() as u32 - 1
    }

    /// `k = 3/2 + n`.
    pub fn k_label(n: u32) -> Rational {
        qq(3, 2) + q(n as i64)
    }
}

fn hyper_coeff(h: u32, hp: u32, n: u32, l: u32) -> Result<Rational, ExoticError> {
    let (n, h, hp) = (n as i64, h as i64, hp as i64);
    Ok(gauss2f1_coeff(&q(n + h), &q(n + hp), &q(2 * n + 3), l)?)
}

/// Solves the expansion order by order; the system is unit triangular.
pub fn pw4_expand(h: u32, hp: u32, cap: u32) -> Result<AmplitudeMatrix, ExoticError> {
    let mut entries: Vec<Rational> = Vec::with_capacity(cap as usize + 1);
    for m in 0..=cap {
        let mut rhs = if m == 0 { q(1) } else { Rational::zero() };
        for (n, b) in entries.iter().enumerate() {
            rhs -= b * hyper_coeff(h, hp, n as u32, m - n as u32)?;
        }
        entries.push(rhs);
    }
    Ok(AmplitudeMatrix {
        h,
        h_prime: hp,
        entries,
    })
}

/// `sum_n B^{3/2+n} u^n 2F1(...) - 1` through order `cap`.
pub fn pw4_residual(b: &AmplitudeMatrix) -> Result<TruncatedSeries, ExoticError> {
    let cap = b.cap();
    let vars = vec!["u".to_string()];
    let mut s = TruncatedSeries::zero(vars.clone(), cap);
    s.add_term(Monomial(vec![0]), q(-1));
    for (n, bn) in b.entries.iter().enumerate() {
        let n = n as u32;
        for l in 0..=cap - n {
            s.add_term(Monomial(vec![n + l]), bn * hyper_coeff(b.h, b.h_prime, n, l)?);
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn leading_amplitudes() {
        let b = pw4_expand(2, 2, 4).unwrap();
        assert_eq!(b.entries[0], q(1));
        assert_eq!(b.entries[1], qq(-4, 3));
        for h in 1..=3 {
            for hp in 1..=3 {
                let b = pw4_expand(h, hp, 6).unwrap();
                assert_eq!(b.entries[1], -q((h * hp) as i64) / q(3));
                assert!(pw4_residual(&b).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn symmetric_in_weights() {
        assert_eq!(
            pw4_expand(1, 3, 8).unwrap().entries,
            pw4_expand(3, 1, 8).unwrap().entries
        );
    }

    #[test]
    fn wrong_amplitude_leaves_residual() {
        let mut b = pw4_expand(2, 3, 5).unwrap();
        b.entries[2] += q(1);
        let r = pw4_residual(&b).unwrap();
        assert_eq!(r.order(), Some(2));
    }
}
