//! Chiral n-point partial waves as a Laurent prefactor times a power series
//! in the adjacent cross ratios
//! `u_k = x_{k,k+1} x_{k+2,k+3} / (x_{k,k+2} x_{k+1,k+3})`, and the
//! invariant Casimir system they solve for `n <= 6`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::laurent::PairPower;
use crate::algebra::rational::{factorial, q, serde_vec};
use crate::algebra::series::SeriesRecord;
use crate::algebra::special::pochhammer;
use crate::algebra::{
    linear_solve_exact, AlgebraError, FactoredLaurent, Monomial, PairMonomial, PairSum, Rational,
    TruncatedSeries,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveError {
    #[error("invalid wave specification: {0}")]
    InvalidSpec(String),
    #[error("degenerate projection dimension a{index} = {value}: (2a)_l vanishes within the cap")]
    DegenerateProjection { index: usize, value: String },
    #[error("the invariant Casimir system is only available for 4 <= n <= 6 (got n = {0})")]
    UnsupportedPointCount(usize),
    #[error("Casimir equation index must be 1, 2 or 3 (got {0})")]
    BadEquation(u8),
    #[error("prefactor is not the six-point normalization times a cross-ratio monomial")]
    PrefactorMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Field dimensions `d_1..d_n` and projection dimensions `a_1..a_{n-1}`,
/// with `a_1 = d_1` and `a_{n-1} = d_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WaveSpec {
    #[serde(with = "serde_vec")]
    dims: Vec<Rational>,
    #[serde(with = "serde_vec")]
    proj: Vec<Rational>,
}

impl WaveSpec {
    /// Builds a spec from all field dimensions and the free projection
    /// dimensions `a_2..a_{n-2}`.
    pub fn new(dims: Vec<Rational>, inner_proj: Vec<Rational>) -> Result<Self, WaveError> {
        let n = dims.len();
        if n < 3 {
            return Err(WaveError::InvalidSpec(format!("need n >= 3 fields, got {n}")));
        }
        if inner_proj.len() != n - 3 {
            return Err(WaveError::InvalidSpec(format!(
                "n = {n} needs {} free projection dimensions a2..a{}, got {}",
                n - 3,
                n - 2,
                inner_proj.len()
            )));
        }
        let mut proj = Vec::with_capacity(n - 1);
        proj.push(dims[0].clone());
        proj.extend(inner_proj);
        proj.push(dims[n - 1].clone());
        Ok(WaveSpec { dims, proj })
    }

    /// Builds a spec from the complete projection list `a_1..a_{n-1}`.
    pub fn from_full(dims: Vec<Rational>, proj: Vec<Rational>) -> Result<Self, WaveError> {
        let n = dims.len();
        if n < 3 || proj.len() + 1 != n {
            return Err(WaveError::InvalidSpec(format!(
                "{} fields need {} projections, got {}",
                n,
                n.saturating_sub(1),
                proj.len()
            )));
        }
        if proj[0] != dims[0] || proj[n - 2] != dims[n - 1] {
            return Err(WaveError::InvalidSpec(
                "boundary projections must satisfy a1 = d1 and a(n-1) = dn".into(),
            ));
        }
        Ok(WaveSpec { dims, proj })
    }

    pub fn n(&self) -> usize {
        self.dims.len()
    }

    /// `d_i`, 1-based.
    pub fn d(&self, i: usize) -> Rational {
        self.dims[i - 1].clone()
    }

    /// `a_i`, 1-based, with `a_0 = a_n = 0`.
    pub fn a(&self, i: usize) -> Rational {
        if i == 0 || i >= self.n() {
            Rational::zero()
        } else {
            self.proj[i - 1].clone()
        }
    }

    pub fn dims(&self) -> &[Rational] {
        &self.dims
    }

    pub fn projections(&self) -> &[Rational] {
        &self.proj
    }

    /// Relabeling `i -> n + 1 - i`.
    pub fn reversed(&self) -> WaveSpec {
        let mut dims = self.dims.clone();
        dims.reverse();
        let mut proj = self.proj.clone();
        proj.reverse();
        WaveSpec { dims, proj }
    }

    /// Number of cross-ratio series variables, `n - 3`.
    pub fn series_vars(&self) -> Vec<String> {
        (1..=self.n().saturating_sub(3))
            .map(|k| format!("u{k}"))
            .collect()
    }
}

/// The cross ratio `u_k` as a pair monomial.
pub fn cross_ratio(k: usize) -> PairMonomial {
    let mut m = PairMonomial::single(k, k + 1, q(1));
    m.mul_pair((k + 2, k + 3), q(1));
    m.mul_pair((k, k + 2), q(-1));
    m.mul_pair((k + 1, k + 3), q(-1));
    m
}

/// Prefactor times cross-ratio series.
#[derive(Clone, Debug, PartialEq)]
pub struct ChiralWave {
    pub spec: WaveSpec,
    pub prefactor: FactoredLaurent,
    pub series: TruncatedSeries,
}

/// JSON wire form of a [`ChiralWave`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WaveRecord {
    pub n: usize,
    #[serde(with = "serde_vec")]
    pub dims: Vec<Rational>,
    #[serde(with = "serde_vec")]
    pub proj: Vec<Rational>,
    pub prefactor: Vec<PairPower>,
    pub series: SeriesRecord,
}

impl ChiralWave {
    pub fn to_record(&self) -> WaveRecord {
        WaveRecord {
            n: self.spec.n(),
            dims: self.spec.dims.clone(),
            proj: self.spec.proj.clone(),
            prefactor: self.prefactor.pairs.to_records(),
            series: self.series.to_record(),
        }
    }

    pub fn from_record(rec: &WaveRecord) -> Result<ChiralWave, WaveError> {
        let spec = WaveSpec::from_full(rec.dims.clone(), rec.proj.clone())?;
        if spec.n() != rec.n {
            return Err(WaveError::InvalidSpec(format!(
                "n = {} but {} dimensions given",
                rec.n,
                spec.n()
            )));
        }
        let series = TruncatedSeries::from_record(&rec.series)?;
        if series.vars() != spec.series_vars().as_slice() {
            return Err(WaveError::InvalidSpec("series symbols must be u1..u(n-3)".into()));
        }
        let pairs = PairMonomial::from_records(&rec.prefactor)?;
        Ok(ChiralWave {
            prefactor: FactoredLaurent::from_pairs(spec.n(), pairs),
            spec,
            series,
        })
    }

    pub fn cap(&self) -> u32 {
        self.series.cap()
    }

    /// The truncated wave as explicit pair monomials, grouped by the series
    /// multi-index with position `drop` removed (or the full index when
    /// `drop` is `None`).
    pub fn pair_groups(&self, drop: Option<usize>) -> BTreeMap<Vec<u32>, PairSum> {
        let n = self.spec.n();
        let ratios: Vec<PairMonomial> = (1..=n.saturating_sub(3)).map(cross_ratio).collect();
        let mut groups: BTreeMap<Vec<u32>, PairSum> = BTreeMap::new();
        for (m, c) in self.series.terms() {
            let mut mono = self.prefactor.pairs.clone();
            for (k, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    mono = mono.mul(&ratios[k].pow(&q(e as i64)));
                }
            }
            let label: Vec<u32> = m
                .exps()
                .iter()
                .enumerate()
                .filter(|(k, _)| Some(*k) != drop)
                .map(|(_, &e)| e)
                .collect();
            groups.entry(label).or_default().add_term(mono, c.clone());
        }
        groups
    }
}

/// Pair exponents of the closed-form prefactor.
pub fn prop1_prefactor(spec: &WaveSpec) -> PairMonomial {
    let n = spec.n();
    let mut m = PairMonomial::one();
    for j in 1..=n - 2 {
        m.mul_pair((j, j + 2), spec.d(j + 1) - spec.a(j) - spec.a(j + 1));
    }
    for i in 1..n {
        m.mul_pair(
            (i, i + 1),
            -(spec.d(i) + spec.d(i + 1) - spec.a(i - 1) - spec.a(i + 1)),
        );
    }
    m
}

/// Calls `f` on every multi-index of length `len` with total at most `cap`.
fn for_each_index(len: usize, cap: u32, f: &mut impl FnMut(&[u32])) {
    fn rec(buf: &mut Vec<u32>, len: usize, left: u32, f: &mut impl FnMut(&[u32])) {
        if buf.len() == len {
            f(buf);
            return;
        }
        for e in 0..=left {
            buf.push(e);
            rec(buf, len, left - e, f);
            buf.pop();
        }
    }
    rec(&mut Vec::with_capacity(len), len, cap, f);
}

/// The n-point chiral partial wave truncated at total series degree `cap`.
///
/// The coefficient of `prod_k u_k^{l_k}` is
/// `prod_j (a_j + a_{j+1} - d_{j+1})_{l_{j-1} + l_j} / prod_k l_k! (2 a_{k+1})_{l_k}`
/// with `l_0 = l_{n-2} = 0`.
pub fn prop1_series(spec: &WaveSpec, cap: u32) -> Result<ChiralWave, WaveError> {
    let n = spec.n();
    let nu = n - 3;
    for k in 1..=nu {
        let two_a = spec.a(k + 1) * q(2);
        if cap > 0 && pochhammer(&two_a, cap).is_zero() {
            return Err(WaveError::DegenerateProjection {
                index: k + 1,
                value: spec.a(k + 1).to_string(),
            });
        }
    }
    let numer_base: Vec<Rational> = (1..=n - 2)
        .map(|j| spec.a(j) + spec.a(j + 1) - spec.d(j + 1))
        .collect();
    let denom_base: Vec<Rational> = (1..=nu).map(|k| spec.a(k + 1) * q(2)).collect();

    let mut series = TruncatedSeries::zero(spec.series_vars(), cap);
    for_each_index(nu, cap, &mut |ls: &[u32]| {
        let l = |i: usize| -> u32 {
            if i == 0 || i > nu {
                0
            } else {
                ls[i - 1]
            }
        };
        let mut c = Rational::one();
        for j in 1..=n - 2 {
            c *= pochhammer(&numer_base[j - 1], l(j - 1) + l(j));
            if c.is_zero() {
                return;
            }
        }
        for k in 1..=nu {
            c /= factorial(l(k)) * pochhammer(&denom_base[k - 1], l(k));
        }
        series.add_term(Monomial(ls.to_vec()), c);
    });
    Ok(ChiralWave {
        spec: spec.clone(),
        prefactor: FactoredLaurent::from_pairs(n, prop1_prefactor(spec)),
        series,
    })
}

/// `sum_l (a+b)_l (a+c)_l u^l / (l! (2a)_l)` truncated at `cap`.
pub fn fourpoint_reference(
    a: &Rational,
    b: &Rational,
    c: &Rational,
    cap: u32,
) -> Result<TruncatedSeries, WaveError> {
    let two_a = a * q(2);
    if cap > 0 && pochhammer(&two_a, cap).is_zero() {
        return Err(WaveError::DegenerateProjection {
            index: 2,
            value: a.to_string(),
        });
    }
    let mut s = TruncatedSeries::zero(vec!["u".into()], cap);
    let ab = a + b;
    let ac = a + c;
    for l in 0..=cap {
        let coef = pochhammer(&ab, l) * pochhammer(&ac, l) / (factorial(l) * pochhammer(&two_a, l));
        s.add_term(Monomial(vec![l]), coef);
    }
    Ok(s)
}

/// One of the three invariant Casimir equations, optionally with the
/// projection dimension in its eigenvalue replaced.
#[derive(Clone, Debug)]
pub struct CasimirEquation {
    pub which: u8,
    pub eigen_dimension: Option<Rational>,
}

impl CasimirEquation {
    pub fn new(which: u8) -> Self {
        CasimirEquation {
            which,
            eigen_dimension: None,
        }
    }

    pub fn with_eigen_dimension(which: u8, a: Rational) -> Self {
        CasimirEquation {
            which,
            eigen_dimension: Some(a),
        }
    }
}

/// Six-point data of a wave with `n <= 6`, padded with trivial fields of
/// dimension 0.
struct Padded {
    d: Vec<Rational>, // index 1..=6
    a: Vec<Rational>, // index 0..=6
}

fn pad_to_six(spec: &WaveSpec) -> Padded {
    let n = spec.n();
    let mut d = vec![Rational::zero(); 7];
    let mut a = vec![Rational::zero(); 7];
    for (i, slot) in d.iter_mut().enumerate().take(n + 1).skip(1) {
        *slot = spec.d(i);
    }
    for (i, slot) in a.iter_mut().enumerate().take(n) {
        *slot = spec.a(i);
    }
    Padded { d, a }
}

/// The normalizing prefactor of the invariant system,
/// `1 / (x12^{d1+d2-d3} x13^{d1+d3-d2} x23^{d2+d3-d1} x45^{..} x46^{..} x56^{..})`.
fn six_point_normalization(d: &[Rational]) -> PairMonomial {
    let mut m = PairMonomial::one();
    m.mul_pair((1, 2), -(&d[1] + &d[2] - &d[3]));
    m.mul_pair((1, 3), -(&d[1] + &d[3] - &d[2]));
    m.mul_pair((2, 3), -(&d[2] + &d[3] - &d[1]));
    m.mul_pair((4, 5), -(&d[4] + &d[5] - &d[6]));
    m.mul_pair((4, 6), -(&d[4] + &d[6] - &d[5]));
    m.mul_pair((5, 6), -(&d[5] + &d[6] - &d[4]));
    m
}

/// Leading exponents `(alpha_1, alpha_2, alpha_3)` with
/// `prefactor = normalization * u1^alpha_1 u2^alpha_2 u3^alpha_3`.
pub fn f_normalization_exponents(wave: &ChiralWave) -> Result<[Rational; 3], WaveError> {
    let n = wave.spec.n();
    if !(4..=6).contains(&n) {
        return Err(WaveError::UnsupportedPointCount(n));
    }
    let padded = pad_to_six(&wave.spec);
    let ratio = wave.prefactor.pairs.div(&six_point_normalization(&padded.d));
    let us: Vec<PairMonomial> = (1..=3).map(cross_ratio).collect();
    let mut pairs: Vec<(usize, usize)> = ratio.factors().map(|(p, _)| *p).collect();
    for u in &us {
        pairs.extend(u.factors().map(|(p, _)| *p));
    }
    pairs.sort();
    pairs.dedup();
    let matrix: Vec<Vec<Rational>> = pairs
        .iter()
        .map(|&p| us.iter().map(|u| u.exponent(p)).collect())
        .collect();
    let rhs: Vec<Rational> = pairs.iter().map(|&p| ratio.exponent(p)).collect();
    let sol = linear_solve_exact(&matrix, &rhs, 3)?;
    let x = sol.particular.ok_or(WaveError::PrefactorMismatch)?;
    Ok([x[0].clone(), x[1].clone(), x[2].clone()])
}

/// Rational function of a series exponent vector.
type ExponentFn = Box<dyn Fn(&[u32]) -> Rational>;

/// Residual `LHS - RHS` of the selected invariant Casimir equation applied
/// to the wave's `f`, divided by the leading monomial
/// `u1^alpha_1 u2^alpha_2 u3^alpha_3`. Series in `u1, u2, u3` through
/// `min(cap, wave cap)`; zero exactly when the equation holds to that order.
pub fn casimir_residual(
    wave: &ChiralWave,
    eq: &CasimirEquation,
    cap: u32,
) -> Result<TruncatedSeries, WaveError> {
    let n = wave.spec.n();
    if !(4..=6).contains(&n) {
        return Err(WaveError::UnsupportedPointCount(n));
    }
    if !(1..=3).contains(&eq.which) {
        return Err(WaveError::BadEquation(eq.which));
    }
    let alpha = f_normalization_exponents(wave)?;
    let Padded { d, a } = pad_to_six(&wave.spec);

    let vars: Vec<String> = (1..=3).map(|k| format!("u{k}")).collect();
    let cap = cap.min(wave.cap());
    let mut s = TruncatedSeries::zero(vars, cap);
    for (m, c) in wave.series.terms() {
        let mut e = m.exps().to_vec();
        e.resize(3, 0);
        s.add_term(Monomial(e), c.clone());
    }

    let k = eq.which as usize;
    let proj = eq.eigen_dimension.clone().unwrap_or_else(|| a[k + 1].clone());
    let one = Rational::one();
    // E_i eigenvalue on u^(alpha + m)
    let ev = move |e: &[u32], i: usize, alpha: &[Rational; 3]| -> Rational { &alpha[i] + q(e[i] as i64) };

    let (lhs, rhs_poly): (ExponentFn, ExponentFn) = match k {
        1 => {
            let (al, al2) = (alpha.clone(), alpha.clone());
            let (d1, d2, d3) = (d[1].clone(), d[2].clone(), d[3].clone());
            let shift = &d3 - &proj;
            let shift2 = &d3 + &proj - &one;
            let par = &d1 - &d2 + &d3;
            (
                Box::new(move |e| (ev(e, 0, &al) + &shift) * (ev(e, 0, &al) + &shift2)),
                Box::new(move |e| (ev(e, 0, &al2) + ev(e, 1, &al2)) * (ev(e, 0, &al2) + &par)),
            )
        }
        2 => {
            let (al, al2) = (alpha.clone(), alpha.clone());
            let p1 = proj.clone();
            let p2 = &proj - &one;
            (
                Box::new(move |e| (ev(e, 1, &al) - &p1) * (ev(e, 1, &al) + &p2)),
                Box::new(move |e| (ev(e, 1, &al2) + ev(e, 0, &al2)) * (ev(e, 1, &al2) + ev(e, 2, &al2))),
            )
        }
        _ => {
            let (al, al2) = (alpha.clone(), alpha.clone());
            let shift = &d[4] - &proj;
            let shift2 = &d[4] + &proj - &one;
            let par = &d[6] - &d[5] + &d[4];
            (
                Box::new(move |e| (ev(e, 2, &al) + &shift) * (ev(e, 2, &al) + &shift2)),
                Box::new(move |e| (ev(e, 2, &al2) + ev(e, 1, &al2)) * (ev(e, 2, &al2) + &par)),
            )
        }
    };
    let left = s.map_by_exponent(|e| lhs(e));
    let right = s.map_by_exponent(|e| rhs_poly(e)).times_var(k - 1);
    Ok(left.try_sub(&right)?)
}
