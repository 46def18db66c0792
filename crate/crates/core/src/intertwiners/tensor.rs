//! Four-dimensional scalar-scalar-tensor intertwiners in invariant form.
//!
//! An operator is a polynomial in the Lorentz invariants of the formal
//! derivatives `d1`, `d2` and the polarization `v`:
//! `t = d1.d2`, `b1 = d1^2`, `b2 = d2^2`, `s1 = v.d1`, `s2 = v.d2`, `V = v^2`.
//! The invariants of three generic vectors in four dimensions are
//! algebraically independent, so coefficient comparison in these symbols is
//! faithful.

use std::collections::BTreeMap;

use num_integer::Integer;
use num_traits::Zero;

use super::ctable::{c_table_kernel, solve_c_table, CTable};
use super::fdelta::f_delta;
use super::IntertwinerError;
use crate::algebra::rational::{as_integer, factorial, q};
use crate::algebra::{linear_solve_exact, pochhammer, Monomial, MultiPoly, Rational};

pub const GENERATORS: [&str; 6] = ["t", "b1", "b2", "s1", "s2", "V"];
const T: usize = 0;
const B1: usize = 1;
const B2: usize = 2;
const S1: usize = 3;
const S2: usize = 4;
const VV: usize = 5;

/// Spacetime dimension entering `box_v V = 2 D`.
pub const SPACETIME_DIM: i64 = 4;

pub fn generator_vars() -> Vec<String> {
    GENERATORS.iter().map(|s| s.to_string()).collect()
}

fn gen(i: usize) -> MultiPoly {
    MultiPoly::var_index(&generator_vars(), i)
}

/// Degree in `v`: `s1`, `s2` count 1 and `V` counts 2.
pub fn v_degree(m: &Monomial) -> u32 {
    let e = m.exps();
    e[S1] + e[S2] + 2 * e[VV]
}

/// Degree in the derivative symbols.
pub fn derivative_degree(m: &Monomial) -> u32 {
    let e = m.exps();
    2 * (e[T] + e[B1] + e[B2]) + e[S1] + e[S2]
}

/// `"t*b1^2*s1"`-style key; `"1"` for the constant monomial.
pub fn monomial_key(vars: &[String], m: &Monomial) -> String {
    let parts: Vec<String> = vars
        .iter()
        .zip(m.exps())
        .filter(|(_, &e)| e > 0)
        .map(|(v, &e)| if e == 1 { v.clone() } else { format!("{v}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

fn d(p: &MultiPoly, i: usize) -> MultiPoly {
    p.differentiate(i)
}

/// Laplacian in `v` on invariant polynomials.
pub fn box_v(p: &MultiPoly) -> MultiPoly {
    let ps1 = d(p, S1);
    let ps2 = d(p, S2);
    let pv = d(p, VV);
    let terms = [
        &gen(B1) * &d(&ps1, S1),
        (&gen(T) * &d(&ps1, S2)).scale(&q(2)),
        &gen(B2) * &d(&ps2, S2),
        pv.scale(&q(2 * SPACETIME_DIM)),
        (&gen(S1) * &d(&ps1, VV)).scale(&q(4)),
        (&gen(S2) * &d(&ps2, VV)).scale(&q(4)),
        (&gen(VV) * &d(&pv, VV)).scale(&q(4)),
    ];
    terms
        .iter()
        .fold(MultiPoly::zero_owned(generator_vars()), |acc, t| &acc + t)
}

/// Monomials with the given `v`-degree and derivative degree.
fn monomials_with(v_deg: u32, der_deg: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for k in 0..=v_deg / 2 {
        let sdeg = v_deg - 2 * k;
        if sdeg > der_deg || !(der_deg - sdeg).is_multiple_of(2) {
            continue;
        }
        let tdeg = (der_deg - sdeg) / 2;
        for i in 0..=sdeg {
            for a in 0..=tdeg {
                for b in 0..=tdeg - a {
                    out.push(Monomial(vec![tdeg - a - b, a, b, i, sdeg - i, k]));
                }
            }
        }
    }
    out
}

/// Harmonic part `[P]_0` in `v`. `P` must be homogeneous in `v`.
///
/// Solves `box_v (P - V Q) = 0` for `Q` separately in each derivative
/// degree; the solution is unique because the harmonic decomposition is.
pub fn harmonic_project(p: &MultiPoly) -> Result<MultiPoly, IntertwinerError> {
    if p.vars() != generator_vars().as_slice() {
        return Err(IntertwinerError::NotHomogeneous(
            "harmonic projection expects a polynomial in t, b1, b2, s1, s2, V".into(),
        ));
    }
    let mut degrees = p.terms().map(|(m, _)| v_degree(m));
    let Some(l) = degrees.next() else {
        return Ok(p.clone());
    };
    if degrees.any(|x| x != l) {
        return Err(IntertwinerError::NotHomogeneous(
            "input mixes different degrees in v".into(),
        ));
    }
    if l < 2 {
        return Ok(p.clone());
    }
    let mut parts: BTreeMap<u32, MultiPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        parts
            .entry(derivative_degree(m))
            .or_insert_with(|| MultiPoly::zero_owned(generator_vars()))
            .add_term(m.clone(), c.clone());
    }
    let vpoly = gen(VV);
    let mut out = MultiPoly::zero_owned(generator_vars());
    for (deg, part) in parts {
        let target = box_v(&part);
        if target.is_zero() {
            out = &out + &part;
            continue;
        }
        let unknowns = monomials_with(l - 2, deg);
        let cols: Vec<MultiPoly> = unknowns
            .iter()
            .map(|m| box_v(&(&vpoly * &MultiPoly::from_terms(generator_vars(), [(m.0.clone(), q(1))]))))
            .collect();
        let (matrix, rhs) = coefficient_system(&cols, &target);
        let sol = linear_solve_exact(&matrix, &rhs, unknowns.len())?;
        let x = sol
            .particular
            .ok_or_else(|| IntertwinerError::Internal("no harmonic representative found".into()))?;
        let mut qpoly = MultiPoly::zero_owned(generator_vars());
        for (m, c) in unknowns.into_iter().zip(x) {
            qpoly.add_term(m, c);
        }
        out = &(&out + &part) - &(&vpoly * &qpoly);
    }
    Ok(out)
}

/// Rows indexed by the monomials occurring in `cols` or `target`.
fn coefficient_system(cols: &[MultiPoly], target: &MultiPoly) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let mut keys: BTreeMap<Monomial, usize> = BTreeMap::new();
    for p in cols.iter().chain(std::iter::once(target)) {
        for (m, _) in p.terms() {
            let next = keys.len();
            keys.entry(m.clone()).or_insert(next);
        }
    }
    let mut matrix = vec![vec![Rational::zero(); cols.len()]; keys.len()];
    let mut rhs = vec![Rational::zero(); keys.len()];
    for (j, p) in cols.iter().enumerate() {
        for (m, c) in p.terms() {
            matrix[keys[m]][j] = c.clone();
        }
    }
    for (m, c) in target.terms() {
        rhs[keys[m]] = c.clone();
    }
    (matrix, rhs)
}

/// Components `(A, B, C)` of the intertwining condition
/// `(2(d1.N1)N1 - d1 N1^2 + 2(d2.N2)N2 - d2 N2^2 + (d1-d2)(N1 - N2)) E
///   = A d1 + B d2 + C v`,
/// with `N_i` the gradient in the symbol `d_i`. All three vanish iff `E`
/// intertwines.
pub fn tensor_pde_residual(e: &MultiPoly, dim_difference: &Rational) -> [MultiPoly; 3] {
    let g = |i| gen(i);
    let euler1 = &(&(&g(T) * &d(e, T)) + &(&g(B1) * &d(e, B1)).scale(&q(2))) + &(&g(S1) * &d(e, S1));
    let euler2 = &(&(&g(T) * &d(e, T)) + &(&g(B2) * &d(e, B2)).scale(&q(2))) + &(&g(S2) * &d(e, S2));
    let g1 = &euler1 - e;
    let g2 = &euler2 - e;
    let lap = |bi: usize, bj: usize, si: usize, sj: usize| -> MultiPoly {
        let et = d(e, T);
        let eb = d(e, bi);
        let es = d(e, si);
        let parts = [
            &g(bj) * &d(&et, T),
            (&g(T) * &d(&et, bi)).scale(&q(4)),
            (&g(sj) * &d(&et, si)).scale(&q(2)),
            (&g(bi) * &d(&eb, bi)).scale(&q(4)),
            (&g(si) * &d(&eb, si)).scale(&q(4)),
            eb.scale(&q(2 * SPACETIME_DIM)),
            &g(VV) * &d(&es, si),
        ];
        parts
            .iter()
            .fold(MultiPoly::zero_owned(generator_vars()), |acc, t| &acc + t)
    };
    let box1 = lap(B1, B2, S1, S2);
    let box2 = lap(B2, B1, S2, S1);
    let dd = dim_difference;
    let a = &(&(&d(&g1, B1).scale(&q(4)) - &box1) + &d(&g2, T).scale(&q(2)))
        + &(&d(e, B1).scale(&q(2)) - &d(e, T)).scale(dd);
    let b = &(&(&d(&g1, T).scale(&q(2)) + &d(&g2, B2).scale(&q(4))) - &box2)
        + &(&d(e, T) - &d(e, B2).scale(&q(2))).scale(dd);
    let c = &(&d(&g1, S1).scale(&q(2)) + &d(&g2, S2).scale(&q(2))) + &(&d(e, S1) - &d(e, S2)).scale(dd);
    [a, b, c]
}

/// Polynomial operator with its labels.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorIntertwiner {
    pub kappa: u32,
    pub l: u32,
    pub d1: Rational,
    pub d2: Rational,
    pub poly: MultiPoly,
    /// Coefficient table used by the assembly, when there is one.
    pub c_table: Option<CTable>,
}

impl TensorIntertwiner {
    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn pde_residual(&self) -> [MultiPoly; 3] {
        tensor_pde_residual(&self.poly, &(&self.d1 - &self.d2))
    }

    /// Checks the homogeneity required by the labels.
    pub fn check_homogeneity(&self) -> Result<(), IntertwinerError> {
        for (m, _) in self.poly.terms() {
            if v_degree(m) != self.l || derivative_degree(m) != 2 * self.kappa + self.l {
                return Err(IntertwinerError::NotHomogeneous(format!(
                    "term {} has the wrong degree for kappa = {}, L = {}",
                    monomial_key(self.poly.vars(), m),
                    self.kappa,
                    self.l
                )));
            }
        }
        Ok(())
    }

    /// Coefficients keyed by generator monomial.
    pub fn terms_map(&self) -> BTreeMap<String, String> {
        self.poly
            .terms()
            .map(|(m, c)| (monomial_key(self.poly.vars(), m), c.to_string()))
            .collect()
    }
}

/// `(s1+s2)^L f((s1-s2)/(s1+s2))` for a polynomial `f(r)` of degree `<= L`.
pub fn homogenize(f: &MultiPoly, l: u32) -> MultiPoly {
    let plus = &gen(S1) + &gen(S2);
    let minus = &gen(S1) - &gen(S2);
    let mut out = MultiPoly::zero_owned(generator_vars());
    for (m, c) in f.terms() {
        let j = m.exps()[0];
        out = &out + &(&minus.pow(j) * &plus.pow(l - j)).scale(c);
    }
    out
}

/// `sum c_mn t^{kappa-m-n} b1^m b2^n [(s1+s2)^L f_{kL;m-n}]_0`.
pub fn assemble_from_table(table: &CTable) -> Result<MultiPoly, IntertwinerError> {
    let mut out = MultiPoly::zero_owned(generator_vars());
    for (&(m, n), c) in &table.entries {
        if c.is_zero() {
            continue;
        }
        let f = f_delta(table.kappa, table.l, m as i64 - n as i64)?;
        let bracket = harmonic_project(&homogenize(&f.poly, table.l))?;
        let pre = &(&gen(T).pow(table.kappa - m - n) * &gen(B1).pow(m)) * &gen(B2).pow(n);
        out = &out + &(&pre * &bracket).scale(c);
    }
    Ok(out)
}

/// The equal-dimension intertwiner with seed `c_00 = 1`. When the seeded
/// recursion has no solution (`c_00` is forced to vanish), the first vector
/// of the recursion kernel is used instead and recorded in `c_table`.
pub fn assemble_tensor_intertwiner(kappa: u32, l: u32) -> Result<TensorIntertwiner, IntertwinerError> {
    let table = match solve_c_table(kappa, l, &q(1)) {
        Ok(t) => t,
        Err(IntertwinerError::InconsistentCTable { .. }) => c_table_kernel(kappa, l)?
            .into_iter()
            .next()
            .ok_or(IntertwinerError::InconsistentCTable { kappa, l })?,
        Err(e) => return Err(e),
    };
    Ok(TensorIntertwiner {
        kappa,
        l,
        d1: Rational::zero(),
        d2: Rational::zero(),
        poly: assemble_from_table(&table)?,
        c_table: Some(table),
    })
}

/// `sum_{p+q=L} (q)_p (p)_q / (p! q!) [s1^p (-s2)^q]_0`, the closed twist-0
/// form.
pub fn twist_zero_closed_form(l: u32) -> Result<MultiPoly, IntertwinerError> {
    let mut raw = MultiPoly::zero_owned(generator_vars());
    for p in 0..=l {
        let qq = l - p;
        let c = pochhammer(&q(qq as i64), p) * pochhammer(&q(p as i64), qq) / (factorial(p) * factorial(qq));
        if c.is_zero() {
            continue;
        }
        let sign = if qq.is_multiple_of(2) { q(1) } else { q(-1) };
        raw = &raw + &(&gen(S1).pow(p) * &gen(S2).pow(qq)).scale(&(c * sign));
    }
    harmonic_project(&raw)
}

/// Basis of all harmonic operators of degree `2 kappa + L` in the
/// derivatives and `L` in `v` that satisfy the intertwining condition for
/// fields of dimensions `d1`, `d2`.
pub fn solve_intertwiner_space(
    kappa: u32,
    l: u32,
    d1: &Rational,
    d2: &Rational,
) -> Result<Vec<TensorIntertwiner>, IntertwinerError> {
    let diff = d1 - d2;
    let even = as_integer(&diff).is_some_and(|k| k.is_even());
    if !even {
        return Err(IntertwinerError::OddDimensionDifference(diff.to_string()));
    }
    let seeds: Vec<Monomial> = monomials_with(l, 2 * kappa + l)
        .into_iter()
        .filter(|m| m.exps()[VV] == 0)
        .collect();
    let basis: Vec<MultiPoly> = seeds
        .iter()
        .map(|m| harmonic_project(&MultiPoly::from_terms(generator_vars(), [(m.0.clone(), q(1))])))
        .collect::<Result<_, _>>()?;
    let residuals: Vec<[MultiPoly; 3]> = basis.iter().map(|b| tensor_pde_residual(b, &diff)).collect();
    let mut matrix: Vec<Vec<Rational>> = Vec::new();
    for comp in 0..3 {
        let cols: Vec<MultiPoly> = residuals.iter().map(|r| r[comp].clone()).collect();
        let (rows, _) = coefficient_system(&cols, &MultiPoly::zero_owned(generator_vars()));
        matrix.extend(rows);
    }
    let rhs = vec![Rational::zero(); matrix.len()];
    let sol = linear_solve_exact(&matrix, &rhs, basis.len())?;
    Ok(sol
        .kernel
        .into_iter()
        .map(|v| {
            let poly = basis
                .iter()
                .zip(&v)
                .filter(|(_, c)| !c.is_zero())
                .fold(MultiPoly::zero_owned(generator_vars()), |acc, (b, c)| {
                    &acc + &b.scale(c)
                });
            TensorIntertwiner {
                kappa,
                l,
                d1: d1.clone(),
                d2: d2.clone(),
                poly,
                c_table: None,
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::qq;

    fn mono(e: [u32; 6]) -> MultiPoly {
        MultiPoly::from_terms(generator_vars(), [(e.to_vec(), q(1))])
    }

    #[test]
    fn small_projections() {
        let v = mono([0, 0, 0, 0, 0, 1]);
        assert!(harmonic_project(&v).unwrap().is_zero());
        let s1 = mono([0, 0, 0, 1, 0, 0]);
        assert_eq!(harmonic_project(&s1).unwrap(), s1);
        let s1s2 = mono([0, 0, 0, 1, 1, 0]);
        let want = &s1s2 - &mono([1, 0, 0, 0, 0, 1]).scale(&qq(1, 4));
        assert_eq!(harmonic_project(&s1s2).unwrap(), want);
    }

    #[test]
    fn rejects_mixed_degree() {
        let p = &mono([0, 0, 0, 1, 0, 0]) + &mono([0, 0, 0, 0, 0, 1]);
        assert!(harmonic_project(&p).is_err());
    }

    #[test]
    fn assembled_operators_intertwine() {
        for kappa in 0..=2 {
            for l in 0..=4 {
                let op = assemble_tensor_intertwiner(kappa, l).unwrap();
                op.check_homogeneity().unwrap();
                for r in op.pde_residual() {
                    assert!(r.is_zero(), "kappa={kappa} L={l}");
                }
                assert_eq!(harmonic_project(&op.poly).unwrap(), op.poly);
            }
        }
    }

    #[test]
    fn twist_zero_matches_closed_form() {
        for l in 0..=6 {
            let op = assemble_tensor_intertwiner(0, l).unwrap();
            let closed = twist_zero_closed_form(l).unwrap();
            match op.poly.ratio_to(&closed) {
                Some(c) => assert!(!c.is_zero() || closed.is_zero()),
                None => panic!("L = {l} not proportional"),
            }
        }
        assert!(assemble_tensor_intertwiner(0, 1).unwrap().is_zero());
    }

    #[test]
    fn twist_two_rank_zero_is_t() {
        let op = assemble_tensor_intertwiner(1, 0).unwrap();
        assert_eq!(op.poly, mono([1, 0, 0, 0, 0, 0]));
    }

    #[test]
    fn equal_dimension_space() {
        let one = q(1);
        let sp = solve_intertwiner_space(0, 2, &one, &one).unwrap();
        assert_eq!(sp.len(), 1);
        let closed = harmonic_project(&mono([0, 0, 0, 1, 1, 0])).unwrap();
        assert!(sp[0].poly.ratio_to(&closed).is_some());
        for (kappa, l) in [(1, 0), (1, 1), (1, 2), (1, 3)] {
            let sp = solve_intertwiner_space(kappa, l, &one, &one).unwrap();
            assert_eq!(sp.len(), 1);
            let op = assemble_tensor_intertwiner(kappa, l).unwrap();
            assert!(sp[0].poly.ratio_to(&op.poly).is_some());
        }
    }

    #[test]
    fn unequal_dimensions() {
        let sp = solve_intertwiner_space(1, 0, &q(3), &q(1)).unwrap();
        assert!(!sp.is_empty());
        for op in &sp {
            for r in op.pde_residual() {
                assert!(r.is_zero());
            }
        }
        assert!(matches!(
            solve_intertwiner_space(1, 0, &q(2), &q(1)),
            Err(IntertwinerError::OddDimensionDifference(_))
        ));
    }
}
