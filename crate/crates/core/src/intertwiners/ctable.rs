//! The coefficient table `c_{kL;mn}` (`m + n <= kappa`) fixed by the two
//! coupled recursions, solved globally.

use std::collections::BTreeMap;

use num_traits::Zero;

use super::fdelta::{f_delta, R};
use super::IntertwinerError;
use crate::algebra::linsolve::mat_vec;
use crate::algebra::rational::q;
use crate::algebra::{linear_solve_exact, MultiPoly, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct CTable {
    pub kappa: u32,
    pub l: u32,
    pub entries: BTreeMap<(u32, u32), Rational>,
    /// Solutions beyond the seeded one, i.e. free parameters left after
    /// fixing `c_00`.
    pub kernel_dim: usize,
}

/// Index pairs `(m, n)` with `m + n <= kappa`, ordered by `m` then `n`.
pub fn c_indices(kappa: u32) -> Vec<(u32, u32)> {
    (0..=kappa)
        .flat_map(|m| (0..=kappa - m).map(move |n| (m, n)))
        .collect()
}

/// Every instance of both recursions as rows over [`c_indices`].
pub fn recursion_rows(kappa: u32, l: u32) -> Vec<Vec<Rational>> {
    let idx = c_indices(kappa);
    let pos: BTreeMap<(i64, i64), usize> = idx
        .iter()
        .enumerate()
        .map(|(i, &(m, n))| ((m as i64, n as i64), i))
        .collect();
    let k = kappa as i64;
    let ll = l as i64;
    let mut rows = Vec::new();
    for &(m, n) in &idx {
        let (m, n) = (m as i64, n as i64);
        let free = k - m - n;
        for first in [true, false] {
            let mut row = vec![Rational::zero(); idx.len()];
            let mut put = |mm: i64, nn: i64, c: i64| {
                if c != 0 {
                    if let Some(&i) = pos.get(&(mm, nn)) {
                        row[i] += q(c);
                    }
                }
            };
            if first {
                put(m + 1, n, 4 * (m * m - 1));
                put(m, n, 2 * free * (ll + k - 1 - m + n));
                put(m, n - 1, -free * (free + 1));
            } else {
                put(m, n + 1, 4 * (n * n - 1));
                put(m, n, 2 * free * (ll + k - 1 + m - n));
                put(m - 1, n, -free * (free + 1));
            }
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    rows
}

/// Solves both recursions with `c_00 = seed`.
pub fn solve_c_table(kappa: u32, l: u32, seed: &Rational) -> Result<CTable, IntertwinerError> {
    let idx = c_indices(kappa);
    let mut rows = recursion_rows(kappa, l);
    let mut rhs = vec![Rational::zero(); rows.len()];
    let mut pin = vec![Rational::zero(); idx.len()];
    pin[0] = q(1);
    rows.push(pin);
    rhs.push(seed.clone());
    let sol = linear_solve_exact(&rows, &rhs, idx.len())?;
    let x = sol
        .particular
        .ok_or(IntertwinerError::InconsistentCTable { kappa, l })?;
    Ok(CTable {
        kappa,
        l,
        entries: idx.into_iter().zip(x).collect(),
        kernel_dim: sol.kernel.len(),
    })
}

/// Basis of all solutions of the recursions, without a seed.
pub fn c_table_kernel(kappa: u32, l: u32) -> Result<Vec<CTable>, IntertwinerError> {
    let idx = c_indices(kappa);
    let rows = recursion_rows(kappa, l);
    let sol = linear_solve_exact(&rows, &vec![Rational::zero(); rows.len()], idx.len())?;
    let dim = sol.kernel.len();
    Ok(sol
        .kernel
        .into_iter()
        .map(|v| CTable {
            kappa,
            l,
            entries: idx.iter().cloned().zip(v).collect(),
            kernel_dim: dim - 1,
        })
        .collect())
}

/// True when the table satisfies every recursion instance exactly.
pub fn satisfies_recursions(table: &CTable) -> bool {
    let v: Vec<Rational> = c_indices(table.kappa)
        .iter()
        .map(|k| table.entries.get(k).cloned().unwrap_or_else(Rational::zero))
        .collect();
    mat_vec(&recursion_rows(table.kappa, table.l), &v)
        .iter()
        .all(|x| x.is_zero())
}

/// `e_{kL}(p, q, r) = sum c_mn p^m q^n f_{kL;m-n}(r)` over symbols `p, q, r`.
pub fn e_polynomial(table: &CTable) -> Result<MultiPoly, IntertwinerError> {
    let vars: Vec<String> = vec!["p".into(), "q".into(), R.into()];
    let mut out = MultiPoly::zero_owned(vars.clone());
    for (&(m, n), c) in &table.entries {
        if c.is_zero() {
            continue;
        }
        let f = f_delta(table.kappa, table.l, m as i64 - n as i64)?
            .poly
            .embed(&vars)?;
        let pq = &MultiPoly::var_index(&vars, 0).pow(m) * &MultiPoly::var_index(&vars, 1).pow(n);
        out = &out + &(&pq * &f).scale(c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rational::{factorial, qq};
    use crate::algebra::special::legendre_in;

    #[test]
    fn kappa_zero() {
        let t = solve_c_table(0, 3, &qq(2, 7)).unwrap();
        assert_eq!(t.entries, BTreeMap::from([((0, 0), qq(2, 7))]));
        assert_eq!(t.kernel_dim, 0);
    }

    #[test]
    fn kappa_one() {
        for l in 1..=6 {
            let t = solve_c_table(1, l, &(q(1) / factorial(l))).unwrap();
            let want = q(1) / (q(2) * factorial(l - 1));
            assert_eq!(t.entries[&(1, 0)], want);
            assert_eq!(t.entries[&(0, 1)], want);
            assert_eq!(t.kernel_dim, 0);
            assert!(satisfies_recursions(&t));
        }
        let t0 = solve_c_table(1, 0, &q(1)).unwrap();
        assert_eq!(t0.entries[&(1, 0)], q(0));
    }

    #[test]
    fn twist_two_display() {
        // (1 + p/2 (r-1) d_r + q/2 (1+r) d_r) P_L(r)
        let vars: Vec<String> = vec!["p".into(), "q".into(), "r".into()];
        let p = MultiPoly::var_index(&vars, 0);
        let qv = MultiPoly::var_index(&vars, 1);
        let r = MultiPoly::var_index(&vars, 2);
        let one = MultiPoly::one_in(&vars);
        for l in 0..=6 {
            let pl = legendre_in(l, "r").embed(&vars).unwrap();
            let dp = pl.differentiate(2);
            let want = &(&pl + &(&(&p * &(&r - &one)) * &dp).scale(&qq(1, 2)))
                + &(&(&qv * &(&r + &one)) * &dp).scale(&qq(1, 2));
            let t = solve_c_table(1, l, &(q(1) / factorial(l))).unwrap();
            assert_eq!(e_polynomial(&t).unwrap(), want, "L = {l}");
        }
    }

    #[test]
    fn seeded_recursion_fails_beyond_twist_two() {
        assert!(matches!(
            solve_c_table(2, 1, &q(1)),
            Err(IntertwinerError::InconsistentCTable { .. })
        ));
        let ker = c_table_kernel(2, 1).unwrap();
        assert_eq!(ker.len(), 2);
        for t in &ker {
            assert!(t.entries[&(0, 0)].is_zero());
            assert!(satisfies_recursions(t));
        }
    }
}
