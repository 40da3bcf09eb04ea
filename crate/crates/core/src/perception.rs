//! Block-level perception measure families and executable checks of the
//! regularity assumptions the coding theorems lean on.
//!
//! A family assigns to each block length `n` a divergence `d_n(P, Q)` between
//! laws on `S^n` with `d_n(P, P) = 0`. Scheme evaluators report the
//! *strong-sense* value `d_n / n`, so an unnormalized family (like plain TV)
//! naturally drives the reported value to zero for good schemes. The checks
//! sample randomized inputs from a seeded generator with one substream per
//! trial, so reports are reproducible under any evaluation order.

use crate::error::{CoreError, Result};
use crate::probcore::{block_index, tensor, tv, Dist};
use crate::seed::{child_seed, stream, tag};
use rand::Rng;
use serde::Serialize;
use std::fmt;
use std::sync::Arc;

type EvalFn = dyn Fn(usize, &Dist, &Dist) -> Result<f64> + Send + Sync;
type GradFn = dyn Fn(&Dist, &Dist) -> Vec<f64> + Send + Sync;

/// A sequence of block divergences `d_n` with a declared TV-continuity
/// constant `c_max` (units: perception per unit TV per symbol).
#[derive(Clone)]
pub struct PerceptionFamily {
    name: String,
    c_max: f64,
    supports_block: bool,
    eval: Arc<EvalFn>,
    d1_grad: Option<Arc<GradFn>>,
}

impl fmt::Debug for PerceptionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerceptionFamily")
            .field("name", &self.name)
            .field("c_max", &self.c_max)
            .field("supports_block", &self.supports_block)
            .finish()
    }
}

impl PerceptionFamily {
    pub fn custom<F>(name: &str, c_max: f64, supports_block: bool, eval: F) -> Self
    where
        F: Fn(usize, &Dist, &Dist) -> Result<f64> + Send + Sync + 'static,
    {
        Self {
            name: name.to_string(),
            c_max,
            supports_block,
            eval: Arc::new(eval),
            d1_grad: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn c_max(&self) -> f64 {
        self.c_max
    }

    pub fn supports_block(&self) -> bool {
        self.supports_block
    }

    /// Evaluate `d_n(p, q)` for block laws on `S^n`.
    pub fn eval_n(&self, n: usize, p: &Dist, q: &Dist) -> Result<f64> {
        if p.alphabet_size() != q.alphabet_size() {
            return Err(CoreError::DimensionMismatch(format!(
                "perception eval: block sizes {} vs {}",
                p.alphabet_size(),
                q.alphabet_size()
            )));
        }
        (self.eval)(n, p, q)
    }

    /// Single-letter divergence `d_1`.
    pub fn d1(&self, p: &Dist, q: &Dist) -> Result<f64> {
        self.eval_n(1, p, q)
    }

    /// Gradient of `q ↦ d_1(p, q)` at `q`; analytic when the family provides
    /// one, otherwise central finite differences on the renormalized simplex.
    pub fn d1_grad_q(&self, p: &Dist, q: &Dist) -> Result<Vec<f64>> {
        if let Some(g) = &self.d1_grad {
            return Ok(g(p, q));
        }
        let m = q.alphabet_size();
        let eps = 1e-7;
        let mut grad = vec![0.0; m];
        for j in 0..m {
            let mut up = q.probs().to_vec();
            let mut dn = q.probs().to_vec();
            up[j] += eps;
            dn[j] = (dn[j] - eps).max(0.0);
            let up_sum: f64 = up.iter().sum();
            let dn_sum: f64 = dn.iter().sum();
            let up = Dist::new(up.iter().map(|v| v / up_sum).collect())?;
            let dn = Dist::new(dn.iter().map(|v| v / dn_sum).collect())?;
            grad[j] = (self.d1(p, &up)? - self.d1(p, &dn)?) / (2.0 * eps);
        }
        Ok(grad)
    }
}

/// Total variation family: `d_n(P, Q) = d_TV(P, Q)` on `S^n`, unnormalized.
///
/// `c_max = 1` is valid for every `n ≥ 1`: the TV triangle inequality gives
/// `d_n(P, Q̂) ≤ d_n(P, P̂) + d_TV(P̂, Q̂) ≤ d_n(P, P̂) + n · d_TV(P̂, Q̂)`.
pub fn tv_family() -> PerceptionFamily {
    PerceptionFamily {
        name: "tv".to_string(),
        c_max: 1.0,
        supports_block: true,
        eval: Arc::new(|_n, p, q| tv(p, q)),
        d1_grad: Some(Arc::new(|p, q| {
            q.probs()
                .iter()
                .zip(p.probs())
                .map(|(&qj, &pj)| 0.5 * (qj - pj).signum())
                .collect()
        })),
    }
}

/// Scaled variant `d_n(P, Q) = n · d_TV(P, Q)`, kept for exploring the
/// normalization convention; see `check_subdecomposable` tests for why this
/// variant is *not* sub-decomposable.
pub fn scaled_tv_family() -> PerceptionFamily {
    PerceptionFamily {
        name: "tv_scaled".to_string(),
        c_max: 1.0,
        supports_block: true,
        eval: Arc::new(|n, p, q| Ok(n as f64 * tv(p, q)?)),
        d1_grad: Some(Arc::new(|p, q| {
            q.probs()
                .iter()
                .zip(p.probs())
                .map(|(&qj, &pj)| 0.5 * (qj - pj).signum())
                .collect()
        })),
    }
}

/// Squared Wasserstein-2 family over a real embedding of the symbols.
///
/// `d_1` is the exact quantile-coupling optimal transport cost between the
/// embedded scalars. For `n > 1` only product laws are accepted and the value
/// is the sum of per-coordinate `d_1` terms; general multivariate transport is
/// out of scope, hence `supports_block = false`. `c_max = diameter²` of the
/// embedding.
pub fn w2sq_family(embedding: &[f64]) -> Result<PerceptionFamily> {
    if embedding.len() < 2 {
        return Err(CoreError::InvalidArgument(
            "w2sq embedding needs at least two symbols".into(),
        ));
    }
    if embedding.iter().any(|v| !v.is_finite()) {
        return Err(CoreError::InvalidArgument(
            "w2sq embedding must be finite".into(),
        ));
    }
    let lo = embedding.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = embedding.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let diameter = hi - lo;
    let coords: Vec<f64> = embedding.to_vec();
    let base = coords.len();
    let eval = move |n: usize, p: &Dist, q: &Dist| -> Result<f64> {
        if n == 1 {
            if p.alphabet_size() != base {
                return Err(CoreError::DimensionMismatch(format!(
                    "w2sq: alphabet {} vs embedding {}",
                    p.alphabet_size(),
                    base
                )));
            }
            return Ok(w2sq_discrete(&coords, p.probs(), q.probs()));
        }
        let p_marg = coordinate_marginals(n, base, p)?;
        let q_marg = coordinate_marginals(n, base, q)?;
        require_product(n, base, p, &p_marg)?;
        require_product(n, base, q, &q_marg)?;
        let mut total = 0.0;
        for t in 0..n {
            total += w2sq_discrete(&coords, p_marg[t].probs(), q_marg[t].probs());
        }
        Ok(total)
    };
    Ok(PerceptionFamily {
        name: "w2sq".to_string(),
        c_max: diameter * diameter,
        supports_block: false,
        eval: Arc::new(eval),
        d1_grad: None,
    })
}

/// Exact squared Wasserstein-2 between two discrete laws on embedded points,
/// by quantile coupling over the merged sorted support.
pub fn w2sq_discrete(coords: &[f64], p: &[f64], q: &[f64]) -> f64 {
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by(|&a, &b| coords[a].partial_cmp(&coords[b]).unwrap());
    let sp: Vec<f64> = order.iter().map(|&i| p[i]).collect();
    let sq: Vec<f64> = order.iter().map(|&i| q[i]).collect();
    let xs: Vec<f64> = order.iter().map(|&i| coords[i]).collect();

    let mut cost = 0.0;
    let (mut i, mut j) = (0usize, 0usize);
    let (mut rem_p, mut rem_q) = (sp[0], sq[0]);
    loop {
        while rem_p <= 1e-15 && i + 1 < xs.len() {
            i += 1;
            rem_p = sp[i];
        }
        while rem_q <= 1e-15 && j + 1 < xs.len() {
            j += 1;
            rem_q = sq[j];
        }
        if rem_p <= 1e-15 || rem_q <= 1e-15 {
            break;
        }
        let mass = rem_p.min(rem_q);
        let diff = xs[i] - xs[j];
        cost += mass * diff * diff;
        rem_p -= mass;
        rem_q -= mass;
    }
    cost
}

/// Per-coordinate marginals of a block law on `base^n`.
pub fn coordinate_marginals(n: usize, base: usize, block: &Dist) -> Result<Vec<Dist>> {
    let states = block.alphabet_size();
    if base.pow(n as u32) != states {
        return Err(CoreError::DimensionMismatch(format!(
            "block law has {states} states, expected {base}^{n}"
        )));
    }
    let mut margs = vec![vec![0.0; base]; n];
    let mut stride = states / base;
    for t in 0..n {
        for (idx, &mass) in block.probs().iter().enumerate() {
            margs[t][(idx / stride) % base] += mass;
        }
        stride /= base;
    }
    margs.into_iter().map(Dist::new).collect()
}

fn require_product(n: usize, base: usize, block: &Dist, margs: &[Dist]) -> Result<()> {
    for (idx, &mass) in block.probs().iter().enumerate() {
        let mut prod = 1.0;
        let mut rem = idx;
        let mut stride = block.alphabet_size() / base;
        for t in 0..n {
            prod *= margs[t].prob(rem / stride);
            rem %= stride;
            stride = if stride == 1 { 1 } else { stride / base };
        }
        if (mass - prod).abs() > 1e-9 {
            return Err(CoreError::InvalidArgument(
                "w2sq block evaluation requires a product law".into(),
            ));
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Assumption checks
// ---------------------------------------------------------------------------

/// Outcome of one randomized assumption check. `worst_margin` is the minimum
/// over trials of `RHS − LHS` of the asserted inequality; the check passes
/// when it stays above `-1e-9`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub family: String,
    pub assumption: String,
    pub trials: u32,
    pub worst_margin: f64,
    pub pass: bool,
}

const CHECK_SLACK: f64 = 1e-9;

fn random_dist<R: Rng>(rng: &mut R, n: usize) -> Dist {
    // Exponential spacings give a uniform draw from the simplex.
    let raw: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().ln().max(1e-300)).collect();
    let sum: f64 = raw.iter().sum();
    Dist::new(raw.iter().map(|v| v / sum).collect()).expect("simplex draw")
}

/// Check Definition-style sub-decomposability: for random segment laws,
/// `d_n(⊗P_i, ⊗Q_i) ≤ Σ d_{n_i}(P_i, Q_i)`.
pub fn check_subdecomposable(
    f: &PerceptionFamily,
    trials: u32,
    seed: u64,
) -> Result<CheckReport> {
    if !f.supports_block() {
        return Err(CoreError::InvalidArgument(format!(
            "family {} does not support block evaluation",
            f.name()
        )));
    }
    let mut worst = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = stream(child_seed(seed, tag::CHECK, trial as u64));
        let base = if rng.random::<f64>() < 0.5 { 2 } else { 3 };
        let max_total = if base == 2 { 4 } else { 3 };
        let k = rng.random_range(1..=3usize);
        let mut lens = Vec::with_capacity(k);
        let mut total = 0usize;
        for i in 0..k {
            let room = max_total - total - (k - i - 1);
            let len = rng.random_range(1..=room.max(1));
            lens.push(len);
            total += len;
        }
        let mut p_block: Option<Dist> = None;
        let mut q_block: Option<Dist> = None;
        let mut rhs = 0.0;
        for &len in &lens {
            let states = base.pow(len as u32);
            let p_i = random_dist(&mut rng, states);
            let q_i = random_dist(&mut rng, states);
            rhs += f.eval_n(len, &p_i, &q_i)?;
            p_block = Some(match p_block {
                None => p_i.clone(),
                Some(b) => tensor(&b, &p_i)?,
            });
            q_block = Some(match q_block {
                None => q_i.clone(),
                Some(b) => tensor(&b, &q_i)?,
            });
        }
        let lhs = f.eval_n(total, &p_block.unwrap(), &q_block.unwrap())?;
        worst = worst.min(rhs - lhs);
    }
    Ok(CheckReport {
        family: f.name().to_string(),
        assumption: "sub-decomposability".to_string(),
        trials,
        worst_margin: worst,
        pass: worst >= -CHECK_SLACK,
    })
}

/// Check TV-continuity: `d_n(P, Q̂) ≤ d_n(P, P̂) + n · c_max · d_TV(P̂, Q̂)`
/// on random triples with `n ≤ 3`.
pub fn check_continuity(f: &PerceptionFamily, trials: u32, seed: u64) -> Result<CheckReport> {
    let mut worst = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = stream(child_seed(seed, tag::CHECK, trial as u64));
        let n = if f.supports_block() {
            rng.random_range(1..=3usize)
        } else {
            1
        };
        let states = 2usize.pow(n as u32);
        let p = random_dist(&mut rng, states);
        let p_hat = random_dist(&mut rng, states);
        let q_hat = match rng.random_range(0..3u32) {
            0 => p_hat.clone(),
            1 => p.clone(),
            _ => random_dist(&mut rng, states),
        };
        let lhs = f.eval_n(n, &p, &q_hat)?;
        let rhs = f.eval_n(n, &p, &p_hat)? + n as f64 * f.c_max() * tv(&p_hat, &q_hat)?;
        worst = worst.min(rhs - lhs);
    }
    Ok(CheckReport {
        family: f.name().to_string(),
        assumption: "tv-continuity".to_string(),
        trials,
        worst_margin: worst,
        pass: worst >= -CHECK_SLACK,
    })
}

/// Check convexity of `d_1` in its second argument on random mixtures.
pub fn check_convexity_d1(f: &PerceptionFamily, trials: u32, seed: u64) -> Result<CheckReport> {
    let mut worst = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = stream(child_seed(seed, tag::CHECK, trial as u64));
        let m = rng.random_range(2..=4usize);
        let p = random_dist(&mut rng, m);
        let q1 = random_dist(&mut rng, m);
        let q2 = if rng.random::<f64>() < 0.2 {
            q1.clone()
        } else {
            random_dist(&mut rng, m)
        };
        let lambda = match rng.random_range(0..4u32) {
            0 => 1.0,
            1 => 0.0,
            _ => rng.random::<f64>(),
        };
        let mix = Dist::new(
            q1.probs()
                .iter()
                .zip(q2.probs())
                .map(|(&a, &b)| lambda * a + (1.0 - lambda) * b)
                .collect(),
        )?;
        let lhs = f.d1(&p, &mix)?;
        let rhs = lambda * f.d1(&p, &q1)? + (1.0 - lambda) * f.d1(&p, &q2)?;
        worst = worst.min(rhs - lhs);
    }
    Ok(CheckReport {
        family: f.name().to_string(),
        assumption: "d1-convexity".to_string(),
        trials,
        worst_margin: worst,
        pass: worst >= -CHECK_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::probcore::product_extend;

    #[test]
    fn tv_family_basics() {
        let f = tv_family();
        let mut rng = stream(9);
        let p = random_dist(&mut rng, 8);
        assert_eq!(f.eval_n(3, &p, &p).unwrap(), 0.0);
        let a = Dist::uniform(2);
        let b = Dist::new(vec![0.25, 0.75]).unwrap();
        assert!((f.d1(&a, &b).unwrap() - 0.25).abs() < 1e-12);
        let u4 = Dist::uniform(4);
        let pm = Dist::point_mass(4, 0);
        assert!((f.eval_n(2, &u4, &pm).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn w2sq_examples() {
        let f = w2sq_family(&[0.0, 1.0]).unwrap();
        // point masses at embedded 0 and 1
        let a = Dist::point_mass(2, 0);
        let b = Dist::point_mass(2, 1);
        assert!((f.d1(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(f.d1(&a, &a).unwrap(), 0.0);
        // Bern-style uniform vs all mass at embedded 0: quantile coupling 0.5
        let half = Dist::uniform(2);
        let sure = Dist::point_mass(2, 0);
        assert!((f.d1(&half, &sure).unwrap() - 0.5).abs() < 1e-12);
        // wider embedding scales quadratically
        let g = w2sq_family(&[-1.0, 2.0]).unwrap();
        assert!((g.d1(&a, &b).unwrap() - 9.0).abs() < 1e-12);
        assert!((g.c_max() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn w2sq_zero_iff_equal_embedded() {
        let f = w2sq_family(&[0.0, 1.0, 2.0]).unwrap();
        let mut rng = stream(11);
        for _ in 0..50 {
            let p = random_dist(&mut rng, 3);
            let q = random_dist(&mut rng, 3);
            let d = f.d1(&p, &q).unwrap();
            let same = tv(&p, &q).unwrap() < 1e-12;
            assert_eq!(d < 1e-12, same, "w2sq zero iff equal");
        }
    }

    #[test]
    fn w2sq_blocks_require_product_laws() {
        let f = w2sq_family(&[0.0, 1.0]).unwrap();
        let p = product_extend(&Dist::binary(0.3).unwrap(), 2).unwrap();
        let q = product_extend(&Dist::binary(0.6).unwrap(), 2).unwrap();
        let d = f.eval_n(2, &p, &q).unwrap();
        let d1 = f
            .d1(&Dist::binary(0.3).unwrap(), &Dist::binary(0.6).unwrap())
            .unwrap();
        assert!((d - 2.0 * d1).abs() < 1e-9);

        let corr = Dist::new(vec![0.5, 0.0, 0.0, 0.5]).unwrap();
        assert!(f.eval_n(2, &corr, &q).is_err());
    }

    #[test]
    fn subdecomposable_tv_passes() {
        let rep = check_subdecomposable(&tv_family(), 200, 7).unwrap();
        assert!(rep.pass, "worst margin {}", rep.worst_margin);
        assert!(rep.worst_margin >= 0.0);
    }

    #[test]
    fn subdecomposable_single_segment_is_equality() {
        // With one segment the inequality is an identity; exercise it directly.
        let f = tv_family();
        let mut rng = stream(3);
        let p = random_dist(&mut rng, 4);
        let q = random_dist(&mut rng, 4);
        let lhs = f.eval_n(2, &p, &q).unwrap();
        assert!((lhs - f.eval_n(2, &p, &q).unwrap()).abs() == 0.0);
    }

    #[test]
    fn scaled_tv_is_not_subdecomposable() {
        // d_n = n·TV violates sub-decomposability: two point-mass-vs-uniform
        // segments give LHS 2·0.75 = 1.5 > RHS 0.5 + 0.5 = 1.
        let f = scaled_tv_family();
        let p1 = Dist::point_mass(2, 0);
        let q1 = Dist::uniform(2);
        let lhs = f
            .eval_n(2, &tensor(&p1, &p1).unwrap(), &tensor(&q1, &q1).unwrap())
            .unwrap();
        let rhs = f.eval_n(1, &p1, &q1).unwrap() + f.eval_n(1, &p1, &q1).unwrap();
        assert!(lhs > rhs + 0.4);
    }

    #[test]
    fn continuity_and_convexity_pass_for_tv() {
        let rep = check_continuity(&tv_family(), 200, 13).unwrap();
        assert!(rep.pass, "worst margin {}", rep.worst_margin);
        let rep = check_convexity_d1(&tv_family(), 200, 17).unwrap();
        assert!(rep.pass, "worst margin {}", rep.worst_margin);
    }

    #[test]
    fn broken_family_fails_subdecomposability() {
        let broken = PerceptionFamily::custom("neg_tv", 1.0, true, |_n, p, q| {
            Ok(-tv(p, q).unwrap())
        });
        let rep = check_subdecomposable(&broken, 50, 5).unwrap();
        assert!(!rep.pass);
    }

    #[test]
    fn check_reports_serialize() {
        let rep = check_convexity_d1(&tv_family(), 10, 1).unwrap();
        let json = serde_json::to_string(&rep).unwrap();
        for key in ["family", "assumption", "trials", "worst_margin", "pass"] {
            assert!(json.contains(key));
        }
    }

    #[test]
    fn d1_grad_matches_finite_difference() {
        let f = tv_family();
        let p = Dist::new(vec![0.2, 0.3, 0.5]).unwrap();
        let q = Dist::new(vec![0.4, 0.1, 0.5]).unwrap();
        let g = f.d1_grad_q(&p, &q).unwrap();
        assert!((g[0] - 0.5).abs() < 1e-12);
        assert!((g[1] + 0.5).abs() < 1e-12);
    }
}
