//! Dense two-phase simplex for the small equality-constrained linear
//! programs that back the restoration solves: minimize `c·x` subject to
//! `A x = b`, `x ≥ 0`. Bland's rule keeps it cycle-free; problem sizes here
//! are a few dozen variables at most.

use crate::error::{CoreError, Result};

const TOL: f64 = 1e-10;

#[derive(Debug, Clone)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
}

pub fn solve_eq_lp(c: &[f64], a: &[Vec<f64>], b: &[f64]) -> Result<LpOutcome> {
    let n = c.len();
    let m = a.len();
    if b.len() != m || a.iter().any(|row| row.len() != n) {
        return Err(CoreError::DimensionMismatch("lp shapes".into()));
    }

    // Tableau: m constraint rows over n original + m artificial columns,
    // plus the rhs column. Flip signs so b >= 0.
    let ncols = n + m;
    let mut tab = vec![vec![0.0; ncols + 1]; m];
    for i in 0..m {
        let sign = if b[i] < 0.0 { -1.0 } else { 1.0 };
        for j in 0..n {
            tab[i][j] = sign * a[i][j];
        }
        tab[i][n + i] = 1.0;
        tab[i][ncols] = sign * b[i];
    }
    let mut basis: Vec<usize> = (n..ncols).collect();

    // Phase 1: minimize the sum of artificials.
    let mut obj = vec![0.0; ncols + 1];
    for row in &tab {
        for j in 0..=ncols {
            obj[j] -= row[j];
        }
    }
    for j in n..ncols {
        obj[j] += 1.0;
    }
    simplex_iterate(&mut tab, &mut obj, &mut basis, ncols)?;
    if -obj[ncols] > 1e-7 {
        return Ok(LpOutcome::Infeasible);
    }

    // Drive remaining artificials out of the basis; drop redundant rows.
    let mut keep = vec![true; m];
    for i in 0..m {
        if basis[i] >= n {
            let pivot_col = (0..n).find(|&j| tab[i][j].abs() > TOL);
            match pivot_col {
                Some(j) => pivot(&mut tab, &mut obj, &mut basis, i, j),
                None => keep[i] = false,
            }
        }
    }
    let mut tab: Vec<Vec<f64>> = tab
        .into_iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(r, _)| r)
        .collect();
    let mut basis: Vec<usize> = basis
        .into_iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(v, _)| v)
        .collect();

    // Phase 2: original objective, artificial columns frozen out.
    for row in tab.iter_mut() {
        for j in n..ncols {
            row[j] = 0.0;
        }
    }
    let mut obj = vec![0.0; ncols + 1];
    obj[..n].copy_from_slice(c);
    for (i, &bv) in basis.iter().enumerate() {
        if c.get(bv).copied().unwrap_or(0.0) != 0.0 {
            let coeff = c[bv];
            for j in 0..=ncols {
                obj[j] -= coeff * tab[i][j];
            }
        }
    }
    simplex_iterate(&mut tab, &mut obj, &mut basis, n)?;

    let mut x = vec![0.0; n];
    for (i, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = tab[i].last().copied().unwrap_or(0.0).max(0.0);
        }
    }
    let value = x.iter().zip(c).map(|(xi, ci)| xi * ci).sum();
    Ok(LpOutcome::Optimal { x, value })
}

/// Run Bland-rule simplexiterations over the first `active_cols` columns.
fn simplex_iterate(
    tab: &mut [Vec<f64>],
    obj: &mut [f64],
    basis: &mut [usize],
    active_cols: usize,
) -> Result<()> {
    let rhs = tab.first().map(|r| r.len() - 1).unwrap_or(0);
    for _ in 0..20_000 {
        // Bland: smallest index with negative reduced cost.
        let entering = (0..active_cols).find(|&j| obj[j] < -TOL);
        let Some(col) = entering else {
            return Ok(());
        };
        let mut leave: Option<(usize, f64)> = None;
        for (i, row) in tab.iter().enumerate() {
            if row[col] > TOL {
                let ratio = row[rhs] / row[col];
                let better = match leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < lr - TOL || (ratio < lr + TOL && basis[i] < basis[li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        let Some((row, _)) = leave else {
            return Err(CoreError::NonConvergence("lp unbounded".into()));
        };
        pivot_full(tab, obj, basis, row, col);
    }
    Err(CoreError::NonConvergence("simplex iteration limit".into()))
}

fn pivot(tab: &mut [Vec<f64>], obj: &mut [f64], basis: &mut [usize], row: usize, col: usize) {
    pivot_full(tab, obj, basis, row, col);
}

fn pivot_full(tab: &mut [Vec<f64>], obj: &mut [f64], basis: &mut [usize], row: usize, col: usize) {
    let pivot = tab[row][col];
    for v in tab[row].iter_mut() {
        *v /= pivot;
    }
    let pivot_row = tab[row].clone();
    for (i, r) in tab.iter_mut().enumerate() {
        if i != row && r[col].abs() > 0.0 {
            let factor = r[col];
            for (v, &pv) in r.iter_mut().zip(&pivot_row) {
                *v -= factor * pv;
            }
        }
    }
    if obj[col].abs() > 0.0 {
        let factor = obj[col];
        for (v, &pv) in obj.iter_mut().zip(&pivot_row) {
            *v -= factor * pv;
        }
    }
    basis[row] = col;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_transportation_problem() {
        // Two supplies 0.6/0.4 onto demands 0.5/0.5 with costs favoring the
        // diagonal: optimal moves 0.1 off-diagonal at cost 0.1.
        let c = vec![0.0, 1.0, 1.0, 0.0];
        let a = vec![
            vec![1.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 1.0],
            vec![1.0, 0.0, 1.0, 0.0],
        ];
        let b = vec![0.6, 0.4, 0.5];
        match solve_eq_lp(&c, &a, &b).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((value - 0.1).abs() < 1e-9, "value {value}");
                assert!((x[0] - 0.5).abs() < 1e-9);
                assert!((x[1] - 0.1).abs() < 1e-9);
            }
            LpOutcome::Infeasible => panic!("feasible problem"),
        }
    }

    #[test]
    fn detects_infeasible_system() {
        let c = vec![1.0, 1.0];
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        let b = vec![1.0, 2.0];
        assert!(matches!(
            solve_eq_lp(&c, &a, &b).unwrap(),
            LpOutcome::Infeasible
        ));
    }

    #[test]
    fn handles_redundant_constraints() {
        let c = vec![2.0, 1.0];
        let a = vec![vec![1.0, 1.0], vec![2.0, 2.0]];
        let b = vec![1.0, 2.0];
        match solve_eq_lp(&c, &a, &b).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!((value - 1.0).abs() < 1e-9);
                assert!((x[1] - 1.0).abs() < 1e-9);
            }
            LpOutcome::Infeasible => panic!("feasible problem"),
        }
    }

    #[test]
    fn negative_rhs_rows_are_flipped() {
        let c = vec![1.0, 0.0];
        let a = vec![vec![-1.0, -1.0]];
        let b = vec![-1.0];
        match solve_eq_lp(&c, &a, &b).unwrap() {
            LpOutcome::Optimal { x, value } => {
                assert!(value.abs() < 1e-9);
                assert!((x[1] - 1.0).abs() < 1e-9);
            }
            LpOutcome::Infeasible => panic!("feasible problem"),
        }
    }
}
