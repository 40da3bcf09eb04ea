//! Projected gradient descent over products of probability simplices, the
//! workhorse behind the convex region solvers. Each optimization variable is
//! a row-stochastic table; steps are projected row-wise back onto the simplex
//! and accepted under an Armijo condition with an adaptive step length.

/// Euclidean projection of a vector onto the probability simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut acc = 0.0;
    let mut theta = 0.0;
    let mut rho = 0;
    for (k, &val) in sorted.iter().enumerate() {
        acc += val;
        let t = (acc - 1.0) / (k + 1) as f64;
        if val - t > 0.0 {
            theta = t;
            rho = k + 1;
        }
    }
    if rho == 0 {
        // Degenerate input (e.g. all -inf); fall back to uniform.
        return vec![1.0 / v.len() as f64; v.len()];
    }
    v.iter().map(|&x| (x - theta).max(0.0)).collect()
}

fn project_rows(rows: &[Vec<f64>]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| project_to_simplex(r)).collect()
}

/// Minimize `value` over row-stochastic tables starting from `rows`.
///
/// `grad` returns the full gradient table. Runs at most `iters` accepted
/// steps; stops early when progress stalls.
pub fn minimize_rows<FV, FG>(rows: Vec<Vec<f64>>, value: FV, grad: FG, iters: usize) -> Vec<Vec<f64>>
where
    FV: Fn(&[Vec<f64>]) -> f64,
    FG: Fn(&[Vec<f64>]) -> Vec<Vec<f64>>,
{
    let mut x = project_rows(&rows);
    let mut fx = value(&x);
    let mut step = 0.5;
    let mut stalls = 0;
    for _ in 0..iters {
        let g = grad(&x);
        let mut accepted = false;
        for _ in 0..30 {
            let trial: Vec<Vec<f64>> = x
                .iter()
                .zip(&g)
                .map(|(row, grow)| {
                    let moved: Vec<f64> = row
                        .iter()
                        .zip(grow)
                        .map(|(&xi, &gi)| xi - step * gi)
                        .collect();
                    project_to_simplex(&moved)
                })
                .collect();
            let decrease: f64 = x
                .iter()
                .zip(&trial)
                .zip(&g)
                .map(|((xr, tr), gr)| {
                    xr.iter()
                        .zip(tr)
                        .zip(gr)
                        .map(|((&xi, &ti), &gi)| gi * (xi - ti))
                        .sum::<f64>()
                })
                .sum();
            let ft = value(&trial);
            if ft <= fx - 1e-4 * decrease.max(0.0) && ft < fx {
                x = trial;
                fx = ft;
                step = (step * 1.6).min(64.0);
                accepted = true;
                break;
            }
            step *= 0.4;
            if step < 1e-14 {
                break;
            }
        }
        if !accepted {
            stalls += 1;
            step = (step * 8.0).min(0.5);
            if stalls > 3 {
                break;
            }
        } else {
            stalls = 0;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_basics() {
        let p = project_to_simplex(&[0.3, 0.3, 0.4]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((p[2] - 0.4).abs() < 1e-12);

        let p = project_to_simplex(&[2.0, 0.0]);
        assert!((p[0] - 1.0).abs() < 1e-12);
        assert!(p[1].abs() < 1e-12);

        let p = project_to_simplex(&[-1.0, -2.0, -3.0]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(p.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn minimizes_linear_objective_on_simplex() {
        // min c·x over the simplex puts all mass on the smallest coefficient.
        let c = [0.5, 0.2, 0.9];
        let value = |rows: &[Vec<f64>]| rows[0].iter().zip(&c).map(|(x, ci)| x * ci).sum::<f64>();
        let grad = |_rows: &[Vec<f64>]| vec![c.to_vec()];
        let x = minimize_rows(vec![vec![1.0 / 3.0; 3]], value, grad, 200);
        assert!((x[0][1] - 1.0).abs() < 1e-6, "{:?}", x);
    }

    #[test]
    fn minimizes_smooth_convex_objective() {
        // min ||x - t||^2 with t inside the simplex recovers t.
        let t = [0.2, 0.5, 0.3];
        let value = |rows: &[Vec<f64>]| {
            rows[0]
                .iter()
                .zip(&t)
                .map(|(x, ti)| (x - ti) * (x - ti))
                .sum::<f64>()
        };
        let grad = |rows: &[Vec<f64>]| {
            vec![rows[0]
                .iter()
                .zip(&t)
                .map(|(x, ti)| 2.0 * (x - ti))
                .collect()]
        };
        let x = minimize_rows(vec![vec![1.0, 0.0, 0.0]], value, grad, 300);
        for (xi, ti) in x[0].iter().zip(&t) {
            assert!((xi - ti).abs() < 1e-6);
        }
    }
}
