//! Positivity blocks `P_sigma P_odd [B^{k+} (x) B^{k-}] P_odd P_sigma` weighted by
//! the channel coefficients, with exact inertia.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::amplitudes::{pw4_expand, AmplitudeMatrix};
use super::channel::{channel_coefficient, ChannelStructure, Weighting};
use super::ExoticError;
use crate::algebra::rational::{q, serde_matrix};
use crate::algebra::Rational;

/// Numbers of positive, negative and zero eigenvalues.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inertia {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Exact inertia by symmetric elimination. A nonzero diagonal pivot is used
/// when one exists; otherwise a nonzero off-diagonal `a_ij` with
/// `a_ii = a_jj = 0` forms a 2x2 pivot of inertia (1, 1, 0).
pub fn inertia(matrix: &[Vec<Rational>]) -> Inertia {
    let mut a: Vec<Vec<Rational>> = matrix.to_vec();
    let mut out = Inertia::default();
    while !a.is_empty() {
        let n = a.len();
        if let Some(i) = (0..n).find(|&i| !a[i][i].is_zero()) {
            let p = a[i][i].clone();
            if p.is_positive() {
                out.positive += 1;
            } else {
                out.negative += 1;
            }
            let rest: Vec<usize> = (0..n).filter(|&k| k != i).collect();
            a = rest
                .iter()
                .map(|&k| {
                    rest.iter()
                        .map(|&l| &a[k][l] - &a[k][i] * &a[i][l] / &p)
                        .collect()
                })
                .collect();
            continue;
        }
        let pair = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero());
        let Some((i, j)) = pair else {
            out.zero += n;
            break;
        };
        out.positive += 1;
        out.negative += 1;
        let p = a[i][j].clone();
        let rest: Vec<usize> = (0..n).filter(|&k| k != i && k != j).collect();
        a = rest
            .iter()
            .map(|&k| {
                rest.iter()
                    .map(|&l| &a[k][l] - (&a[k][i] * &a[j][l] + &a[k][j] * &a[i][l]) / &p)
                    .collect()
            })
            .collect();
    }
    out
}

/// One block at fixed `k+ = 3/2 + n_plus`, `k- = 3/2 + n_minus` and helicity sign.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Block {
    pub n_plus: u32,
    pub n_minus: u32,
    /// `+1` or `-1`.
    pub helicity_sign: i32,
    /// Row and column labels `(h+, h-)`.
    pub labels: Vec<(u32, u32)>,
    #[serde(with = "serde_matrix")]
    pub matrix: Vec<Vec<Rational>>,
    pub inertia: Inertia,
}

impl Block {
    pub fn is_symmetric(&self) -> bool {
        let n = self.matrix.len();
        (0..n).all(|i| (0..n).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    pub fn diagonal_vanishes(&self) -> bool {
        self.matrix.iter().enumerate().all(|(i, r)| r[i].is_zero())
    }

    pub fn entry(&self, row: (u32, u32), col: (u32, u32)) -> Option<&Rational> {
        let i = self.labels.iter().position(|&l| l == row)?;
        let j = self.labels.iter().position(|&l| l == col)?;
        Some(&self.matrix[i][j])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PositivityReport {
    pub structure: ChannelStructure,
    pub hmax: u32,
    pub kmax: u32,
    pub blocks: Vec<Block>,
}

impl PositivityReport {
    /// True when every block of `self` is a principal submatrix of the block
    /// with the same `(k+, k-, sign)` in `larger`, entries unchanged.
    pub fn is_truncation_of(&self, larger: &PositivityReport) -> bool {
        self.blocks.iter().all(|b| {
            let Some(big) = larger
                .blocks
                .iter()
                .find(|x| (x.n_plus, x.n_minus, x.helicity_sign) == (b.n_plus, b.n_minus, b.helicity_sign))
            else {
                return false;
            };
            b.labels.iter().enumerate().all(|(i, &r)| {
                b.labels
                    .iter()
                    .enumerate()
                    .all(|(j, &c)| big.entry(r, c) == Some(&b.matrix[i][j]))
            })
        })
    }
}

/// Product of the two channel coefficients for a row and a column label.
fn channel_weight(s: ChannelStructure, row: (u32, u32), col: (u32, u32)) -> Result<Rational, ExoticError> {
    let prod = |w| -> Result<Rational, ExoticError> {
        Ok(channel_coefficient(row.0, row.1, w)? * channel_coefficient(col.0, col.1, w)?)
    };
    Ok(match s {
        ChannelStructure::B => prod(Weighting::B)?,
        ChannelStructure::H => prod(Weighting::H)?,
        ChannelStructure::E => (prod(Weighting::B)? - prod(Weighting::H)?) * q(2),
    })
}

/// Assembles every block for `1 <= h+-, h'+- <= hmax` and `n+-  <= kmax`.
pub fn positivity_report(s: ChannelStructure, hmax: u32, kmax: u32) -> Result<PositivityReport, ExoticError> {
    if hmax < 2 {
        return Err(ExoticError::BadCutoff(hmax));
    }
    let mut amp: BTreeMap<(u32, u32), AmplitudeMatrix> = BTreeMap::new();
    for h in 1..=hmax {
        for hp in 1..=hmax {
            amp.insert((h, hp), pw4_expand(h, hp, kmax)?);
        }
    }
    let mut blocks = Vec::new();
    for n_plus in 0..=kmax {
        for n_minus in 0..=kmax {
            for sign in [1i32, -1] {
                let labels: Vec<(u32, u32)> = (1..=hmax)
                    .flat_map(|a| (1..=hmax).map(move |b| (a, b)))
                    .filter(|&(a, b)| {
                        let h = a as i64 - b as i64;
                        h.rem_euclid(2) == 1 && h.signum() == sign as i64
                    })
                    .collect();
                let mut matrix = Vec::with_capacity(labels.len());
                for &r in &labels {
                    let mut row = Vec::with_capacity(labels.len());
                    for &c in &labels {
                        let bp = &amp[&(r.0, c.0)].entries[n_plus as usize];
                        let bm = &amp[&(r.1, c.1)].entries[n_minus as usize];
                        row.push(channel_weight(s, r, c)? * bp * bm);
                    }
                    matrix.push(row);
                }
                let mut block = Block {
                    n_plus,
                    n_minus,
                    helicity_sign: sign,
                    labels,
                    matrix,
                    inertia: Inertia::default(),
                };
                if !block.is_symmetric() {
                    return Err(ExoticError::AsymmetricBlock(
                        n_plus.to_string(),
                        n_minus.to_string(),
                    ));
                }
                block.inertia = inertia(&block.matrix);
                blocks.push(block);
            }
        }
    }
    Ok(PositivityReport {
        structure: s,
        hmax,
        kmax,
        blocks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn inertia_small_cases() {
        let id = inertia(&m(&[&[1, 0], &[0, 1]]));
        assert_eq!((id.positive, id.negative, id.zero), (2, 0, 0));
        let hyp = inertia(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!((hyp.positive, hyp.negative, hyp.zero), (1, 1, 0));
        let deg = inertia(&m(&[&[1, 1], &[1, 1]]));
        assert_eq!((deg.positive, deg.negative, deg.zero), (1, 0, 1));
        let mixed = inertia(&m(&[&[0, 0, 2], &[0, 0, 0], &[2, 0, -1]]));
        assert_eq!((mixed.positive, mixed.negative, mixed.zero), (1, 1, 1));
        assert_eq!(inertia(&[]), Inertia::default());
    }

    #[test]
    fn report_blocks() {
        for s in [ChannelStructure::B, ChannelStructure::H, ChannelStructure::E] {
            let r = positivity_report(s, 3, 1).unwrap();
            assert_eq!(r.blocks.len(), 8);
            for b in &r.blocks {
                assert!(b.is_symmetric());
                let i = b.inertia;
                assert_eq!(i.positive + i.negative + i.zero, b.labels.len());
                if s == ChannelStructure::E {
                    assert!(b.diagonal_vanishes());
                    assert!(b.matrix.iter().flatten().all(Zero::is_zero));
                }
            }
            let big = positivity_report(s, 5, 3).unwrap();
            assert!(r.is_truncation_of(&big));
        }
        assert!(positivity_report(ChannelStructure::B, 1, 0).is_err());
    }

    #[test]
    fn b_and_h_agree_within_a_sign_sector() {
        let b = positivity_report(ChannelStructure::B, 4, 2).unwrap();
        let h = positivity_report(ChannelStructure::H, 4, 2).unwrap();
        assert_eq!(b.blocks, h.blocks);
    }
}
