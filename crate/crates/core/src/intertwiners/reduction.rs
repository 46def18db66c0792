//! Applying chiral intertwiners to explicit correlators and fusing two
//! adjacent points with the coincidence map.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::chiral::{chiral_e, ChiralIntertwiner};
use super::IntertwinerError;
use crate::algebra::rational::q;
use crate::algebra::{PairMonomial, PairSum, Rational};
use crate::waves::{prop1_series, ChiralWave, WaveSpec};

/// `d_i^p d_j^q` applied to every term; `j = i + 1`.
pub fn apply_operator(target: &PairSum, i: usize, op: &ChiralIntertwiner) -> PairSum {
    let j = i + 1;
    let max_q = op.coeffs.keys().map(|k| k.1).max().unwrap_or(0);
    let mut by_q = vec![target.clone()];
    for _ in 0..max_q {
        let next = by_q.last().unwrap().diff_point(j);
        by_q.push(next);
    }
    let mut out = PairSum::zero();
    for (&(p, q), c) in &op.coeffs {
        let mut term = by_q[q as usize].clone();
        for _ in 0..p {
            term = term.diff_point(i);
        }
        out = out.add(&term.scale(c));
    }
    out
}

/// Coincidence `x_{i+1} -> x_i`, then relabeling of later points down by one.
pub fn fuse(sum: &PairSum, i: usize) -> Result<PairSum, IntertwinerError> {
    let merged = sum.coincide(i, i + 1)?;
    Ok(merged.relabel(|p| if p > i + 1 { p - 1 } else { p })?)
}

/// `iota o op o x_{i,i+1}^e` with `e` the operator's regularizing power.
pub fn apply_chiral_reduction(
    target: &PairSum,
    i: usize,
    op: &ChiralIntertwiner,
) -> Result<PairSum, IntertwinerError> {
    if i == 0 {
        return Err(IntertwinerError::NonAdjacentPair(i, i + 1));
    }
    let mut pre = PairMonomial::one();
    pre.mul_pair((i, i + 1), op.regularizing_power());
    let regular = target.mul_monomial(&pre);
    fuse(&apply_operator(&regular, i, op), i)
}

/// Same without the regularizing factor.
pub fn apply_bare_reduction(
    target: &PairSum,
    i: usize,
    op: &ChiralIntertwiner,
) -> Result<PairSum, IntertwinerError> {
    fuse(&apply_operator(target, i, op), i)
}

/// Which end pair of a wave is fused.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WavePair {
    First,
    Last,
}

impl WavePair {
    pub fn from_points(n: usize, a: usize, b: usize) -> Result<WavePair, IntertwinerError> {
        match (a, b) {
            (1, 2) => Ok(WavePair::First),
            (x, y) if x + 1 == n && y == n => Ok(WavePair::Last),
            _ => Err(IntertwinerError::NonAdjacentPair(a, b)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ReductionOutcome {
    /// Every compared order vanishes.
    Zero,
    /// `reduced = constant * expected` at every compared order.
    Multiple(Rational),
    /// Some order is not proportional to the expected wave.
    Mismatch { label: Vec<u32> },
}

#[derive(Clone, Debug)]
pub struct WaveReduction {
    pub outcome: ReductionOutcome,
    /// The `(n-1)`-point wave the result is compared with (`None` for n = 3).
    pub expected: Option<ChiralWave>,
    /// Reduced function grouped by the surviving series indices.
    pub reduced: BTreeMap<Vec<u32>, PairSum>,
    /// Total order of the surviving indices that was compared.
    pub compared_order: u32,
}

/// Decides whether `got = c * want` order by order with one `c`.
fn compare_groups(
    got: &BTreeMap<Vec<u32>, PairSum>,
    want: &BTreeMap<Vec<u32>, PairSum>,
    max_order: u32,
) -> Result<ReductionOutcome, IntertwinerError> {
    let mut labels: Vec<&Vec<u32>> = got.keys().chain(want.keys()).collect();
    labels.sort();
    labels.dedup();
    labels.retain(|l| l.iter().sum::<u32>() <= max_order);
    let empty = PairSum::zero();
    let mut all_zero = true;
    let mut common: Option<Rational> = None;
    for label in labels {
        let g = got.get(label).unwrap_or(&empty);
        let w = want.get(label).unwrap_or(&empty);
        let g_zero = g.vanishes()?;
        all_zero &= g_zero;
        let c = if w.vanishes()? {
            if g_zero {
                continue;
            }
            None
        } else if g_zero {
            Some(Rational::zero())
        } else {
            g.ratio_to(w)?
        };
        match (c, &common) {
            (Some(c), None) => common = Some(c),
            (Some(c), Some(r)) if &c == r => {}
            _ => return Ok(ReductionOutcome::Mismatch { label: label.clone() }),
        }
    }
    Ok(match common {
        _ if all_zero => ReductionOutcome::Zero,
        Some(c) if !c.is_zero() => ReductionOutcome::Multiple(c),
        _ => ReductionOutcome::Mismatch { label: Vec::new() },
    })
}

/// Fuses an end pair of a wave with `E_h` and compares the result with the
/// `(n-1)`-point wave whose fused field has dimension `h`.
///
/// For `n >= 4` the wave must be truncated at `cap >= h`; orders up to `cap - h` of the
/// surviving series are complete and are compared.
pub fn reduce_wave(wave: &ChiralWave, pair: WavePair, h: u32) -> Result<WaveReduction, IntertwinerError> {
    let spec = &wave.spec;
    let n = spec.n();
    let cap = wave.cap();
    if n >= 4 && cap < h {
        return Err(IntertwinerError::InvalidOrder(format!(
            "wave truncated at {cap} cannot be reduced with h = {h}"
        )));
    }
    let compared = cap.saturating_sub(h);
    let (i, drop) = match pair {
        WavePair::First => (1, (n >= 4).then_some(0)),
        WavePair::Last => (n - 1, (n >= 4).then(|| n - 4)),
    };
    let op = chiral_e(h, &spec.d(i), &spec.d(i + 1));
    let mut reduced = BTreeMap::new();
    for (label, group) in wave.pair_groups(drop) {
        if label.iter().sum::<u32>() > compared {
            continue;
        }
        let r = apply_chiral_reduction(&group, i, &op)?;
        if !r.is_zero() {
            reduced.insert(label, r);
        }
    }

    let hq = q(h as i64);
    let (expected, expected_groups) = if n == 3 {
        let mut m = PairMonomial::one();
        let other = if pair == WavePair::First {
            spec.d(3)
        } else {
            spec.d(1)
        };
        m.mul_pair((1, 2), -(&hq + &other));
        let mut g = BTreeMap::new();
        g.insert(Vec::new(), PairSum::monomial(q(1), m));
        (None, g)
    } else {
        let dims: Vec<Rational>;
        let inner: Vec<Rational>;
        match pair {
            WavePair::First => {
                dims = std::iter::once(hq.clone())
                    .chain((3..=n).map(|k| spec.d(k)))
                    .collect();
                inner = (3..=n - 2).map(|k| spec.a(k)).collect();
            }
            WavePair::Last => {
                dims = (1..=n - 2)
                    .map(|k| spec.d(k))
                    .chain(std::iter::once(hq.clone()))
                    .collect();
                inner = (2..=n - 3).map(|k| spec.a(k)).collect();
            }
        }
        let espec = WaveSpec::new(dims, inner)?;
        let ew = prop1_series(&espec, compared)?;
        let groups = ew.pair_groups(None);
        (Some(ew), groups)
    };

    let outcome = compare_groups(&reduced, &expected_groups, compared)?;
    Ok(WaveReduction {
        outcome,
        expected,
        reduced,
        compared_order: compared,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qq;

    fn three_point(d1: Rational, d2: Rational, a: i64) -> ChiralWave {
        let spec = WaveSpec::new(vec![d1, d2, q(a)], vec![]).unwrap();
        prop1_series(&spec, 0).unwrap()
    }

    #[test]
    fn three_point_annihilation() {
        for a in 2..=4 {
            for h in 1..=4u32 {
                let w = three_point(qq(1, 3), qq(5, 2), a);
                let r = reduce_wave(&w, WavePair::First, h).unwrap();
                if h as i64 == a {
                    assert!(matches!(r.outcome, ReductionOutcome::Multiple(_)), "a={a} h={h}");
                } else {
                    assert_eq!(r.outcome, ReductionOutcome::Zero, "a={a} h={h}");
                }
            }
        }
    }

    #[test]
    fn order_one_closed_form_is_a_total_derivative() {
        // E_1 is a multiple of the total derivative d1 + d2, which commutes with fusion
        let w = three_point(qq(1, 3), qq(5, 2), 1);
        let r = reduce_wave(&w, WavePair::First, 1).unwrap();
        assert_eq!(r.outcome, ReductionOutcome::Zero);
    }

    #[test]
    fn four_point_reduces_to_three_point() {
        let spec = WaveSpec::new(vec![q(1), qq(1, 2), q(2), qq(3, 2)], vec![q(2)]).unwrap();
        let w = prop1_series(&spec, 5).unwrap();
        for h in 1..=3u32 {
            let r = reduce_wave(&w, WavePair::First, h).unwrap();
            if h == 2 {
                assert!(matches!(r.outcome, ReductionOutcome::Multiple(_)));
            } else {
                assert_eq!(r.outcome, ReductionOutcome::Zero, "h = {h}");
            }
        }
    }

    #[test]
    fn d_operator_per_term_identity() {
        use super::super::chiral::chiral_d;
        use crate::algebra::pochhammer;
        use crate::algebra::rational::{factorial, sign_pow};
        // the closed-form D_h normalization yields c_{a,h} / (h-1)!^2
        for a in 0..=3u32 {
            for h in 1..=4u32 {
                let aq = q(a as i64);
                let mut m = PairMonomial::one();
                m.mul_pair((1, 2), aq.clone());
                m.mul_pair((3, 4), aq.clone());
                m.mul_pair((1, 3), -(&aq + q(1)));
                m.mul_pair((2, 4), -(&aq + q(1)));
                let target = PairSum::monomial(q(1), m);
                let op = chiral_d(h, &q(1)).unwrap();
                let got = apply_bare_reduction(&target, 1, &op).unwrap();
                let c = pochhammer(&q(h as i64), a) * pochhammer(&q(1 - h as i64), a)
                    / (factorial(a) * factorial(a) * factorial(h - 1) * factorial(h - 1));
                let mut w = PairMonomial::one();
                w.mul_pair((2, 3), q(h as i64 - 1));
                w.mul_pair((1, 2), q(-(h as i64)));
                w.mul_pair((1, 3), q(-(h as i64)));
                let want = PairSum::monomial(sign_pow(h as i64 - 1) * c, w);
                assert!(got.sub(&want).vanishes().unwrap(), "a={a} h={h}");
            }
        }
    }

    #[test]
    fn five_point_reduces_at_both_ends() {
        let spec = WaveSpec::new(vec![qq(1, 2), qq(3, 2), q(1), qq(5, 2), q(2)], vec![q(2), q(3)]).unwrap();
        let w = prop1_series(&spec, 5).unwrap();
        for h in 1..=4u32 {
            let first = reduce_wave(&w, WavePair::First, h).unwrap();
            let last = reduce_wave(&w, WavePair::Last, h).unwrap();
            assert_eq!(
                matches!(first.outcome, ReductionOutcome::Multiple(_)),
                h == 2,
                "first h={h}"
            );
            assert_eq!(
                matches!(last.outcome, ReductionOutcome::Multiple(_)),
                h == 3,
                "last h={h}"
            );
            if h != 2 {
                assert_eq!(first.outcome, ReductionOutcome::Zero);
            }
            if h != 3 {
                assert_eq!(last.outcome, ReductionOutcome::Zero);
            }
        }
    }
}
