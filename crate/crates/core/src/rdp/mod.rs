//! Region solvers: channel capacity, the weak-sense single-letter
//! distortion-rate-perception region, and the no-common-randomness
//! perfect-realism oracle used by the separation counterexample.
//!
//! The weak-sense problem (minimize expected distortion over test channels
//! subject to a mutual-information budget and a single-letter perception
//! budget) is convex in the channel, so it is solved by multi-start projected
//! gradient descent on a penalized objective followed by an exact feasibility
//! restoration; disagreement between starts flags a bug, not a feature of the
//! problem.
//!
//! The no-common-randomness oracle searches over two-stage chains
//! `S → W → Ŝ`. The rate budget constrains *both* links: the first link is
//! the compression cost `I(S;W)`, and the second is the randomness needed to
//! smooth the reconstruction law onto the source law (a codebook of rate R
//! can only cover the output statistics of channels with `I(W;Ŝ) ≤ R`).
//! Dropping the second constraint would let `W = Ŝ` ride for free and the
//! oracle would collapse onto the shared-randomness region.

mod lp;
mod pgd;

pub use lp::{solve_eq_lp, LpOutcome};
pub use pgd::{minimize_rows, project_to_simplex};

use crate::error::{CoreError, Result};
use crate::perception::PerceptionFamily;
use crate::probcore::{
    compose, expected_distortion, mutual_info, push_forward, tv, Channel, Dist, DistortionFn,
    Joint,
};
use crate::seed::{child_seed, stream, tag};
use rand::Rng;
use serde::Serialize;

// ---------------------------------------------------------------------------
// Config and result types
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct SolverConfig {
    /// Grid points per free channel parameter when seeding starts.
    pub grid_resolution: usize,
    /// Projected-gradient iterations per penalty round.
    pub refinement_iters: usize,
    /// Convergence / agreement tolerance.
    pub tolerance: f64,
    /// Auxiliary alphabet size for the chained oracle; 0 means source + 1.
    pub aux_alphabet_size: usize,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            grid_resolution: 64,
            refinement_iters: 200,
            tolerance: 1e-6,
            aux_alphabet_size: 0,
            seed: 0,
        }
    }
}

impl SolverConfig {
    fn aux_size(&self, source_alphabet: usize) -> usize {
        if self.aux_alphabet_size == 0 {
            source_alphabet + 1
        } else {
            self.aux_alphabet_size.max(2)
        }
    }
}

/// Optimizing witness of a region point: either a direct test channel
/// `P_{Ŝ|S}` or a chained pair `S → W → Ŝ`.
#[derive(Debug, Clone, Serialize)]
pub enum Witness {
    Direct(Channel),
    Chained { to_aux: Channel, from_aux: Channel },
}

impl Witness {
    pub fn end_to_end(&self) -> Result<Channel> {
        match self {
            Witness::Direct(ch) => Ok(ch.clone()),
            Witness::Chained { to_aux, from_aux } => compose(to_aux, from_aux),
        }
    }
}

/// One point of a (rate, distortion, perception) region with its witness.
/// `rate` is the measured information cost of the witness: `I(S;Ŝ)` for a
/// direct witness, `max(I(S;W), I(W;Ŝ))` for a chained one.
#[derive(Debug, Clone, Serialize)]
pub struct RegionPoint {
    pub rate: f64,
    pub distortion: f64,
    pub perception: f64,
    pub witness: Witness,
}

// ---------------------------------------------------------------------------
// Capacity (Blahut-Arimoto)
// ---------------------------------------------------------------------------

const BA_MAX_ITERS: usize = 200_000;

/// Channel capacity in bits via Blahut-Arimoto, iterated until the standard
/// lower bound `I(p)` and upper bound `max_x KL(W_x ‖ q)` differ by less than
/// `tol`. Returns the midpoint and the optimizing input.
pub fn capacity_ba(ch: &Channel, tol: f64) -> Result<(f64, Dist)> {
    if tol <= 0.0 {
        return Err(CoreError::InvalidArgument("capacity tol must be > 0".into()));
    }
    let n_in = ch.input_size();
    let mut p = vec![1.0 / n_in as f64; n_in];
    for _ in 0..BA_MAX_ITERS {
        let q = marginal_of(&p, ch);
        let mut d = vec![0.0; n_in];
        for (i, di) in d.iter_mut().enumerate() {
            let mut acc = 0.0;
            for (j, &w) in ch.row(i).probs().iter().enumerate() {
                if w > 0.0 {
                    acc += w * (w / q[j].max(1e-300)).log2();
                }
            }
            *di = acc;
        }
        let i_low: f64 = p.iter().zip(&d).map(|(&pi, &di)| pi * di).sum();
        let i_up = d.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if i_up - i_low < tol {
            let input = Dist::new(p)?;
            return Ok(((0.5 * (i_up + i_low)).max(0.0), input));
        }
        let mut norm = 0.0;
        for (pi, &di) in p.iter_mut().zip(&d) {
            *pi *= (di - i_low).exp2();
            norm += *pi;
        }
        for pi in p.iter_mut() {
            *pi /= norm;
        }
    }
    Err(CoreError::NonConvergence(format!(
        "blahut-arimoto did not reach tol {tol} in {BA_MAX_ITERS} iterations"
    )))
}

// ---------------------------------------------------------------------------
// Shared numeric helpers on raw row tables
// ---------------------------------------------------------------------------

fn marginal_of(input: &[f64], ch: &Channel) -> Vec<f64> {
    let mut q = vec![0.0; ch.output_size()];
    for (i, &pi) in input.iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        for (j, &w) in ch.row(i).probs().iter().enumerate() {
            q[j] += pi * w;
        }
    }
    q
}

fn marginal_of_rows(input: &[f64], rows: &[Vec<f64>]) -> Vec<f64> {
    let mut q = vec![0.0; rows[0].len()];
    for (i, &pi) in input.iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        for (j, &w) in rows[i].iter().enumerate() {
            q[j] += pi * w;
        }
    }
    q
}

fn mutual_info_rows(input: &[f64], rows: &[Vec<f64>]) -> f64 {
    let q = marginal_of_rows(input, rows);
    let mut info = 0.0;
    for (i, &pi) in input.iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        for (j, &w) in rows[i].iter().enumerate() {
            if w > 0.0 {
                info += pi * w * (w / q[j].max(1e-300)).log2();
            }
        }
    }
    info.max(0.0)
}

/// Channel moving marginal `from` onto `to`: shared mass stays in place,
/// surplus is spread over deficits proportionally.
fn transport_correction(from: &[f64], to: &[f64]) -> Result<Channel> {
    let n = from.len();
    let total: f64 = from
        .iter()
        .zip(to)
        .map(|(&f, &t)| (f - t).max(0.0))
        .sum();
    let mut rows = Vec::with_capacity(n);
    for j in 0..n {
        if from[j] <= 1e-300 {
            rows.push(to.to_vec());
            continue;
        }
        let mut row = vec![0.0; n];
        row[j] = from[j].min(to[j]) / from[j];
        let surplus = (from[j] - to[j]).max(0.0);
        if surplus > 0.0 && total > 1e-300 {
            for (jp, r) in row.iter_mut().enumerate() {
                let deficit = (to[jp] - from[jp]).max(0.0);
                *r += (surplus / from[j]) * (deficit / total);
            }
        }
        rows.push(row);
    }
    Channel::new(rows)
}

fn blend_toward_constant(rows: &[Vec<f64>], t: f64) -> Vec<Vec<f64>> {
    // Blend toward the constant channel whose rows equal the uniform mix of
    // the current rows; any constant channel has zero mutual information.
    let n_out = rows[0].len();
    let mut avg = vec![0.0; n_out];
    for row in rows {
        for (a, &v) in avg.iter_mut().zip(row) {
            *a += v / rows.len() as f64;
        }
    }
    rows.iter()
        .map(|row| {
            row.iter()
                .zip(&avg)
                .map(|(&v, &a)| (1.0 - t) * v + t * a)
                .collect()
        })
        .collect()
}

/// Shrink mutual information under `budget` by blending toward a constant
/// channel. Uses convexity of `I` in the channel, so the blend weight is a
/// guaranteed bound rather than a line search.
fn restore_info_budget(input: &[f64], rows: Vec<Vec<f64>>, budget: f64) -> Vec<Vec<f64>> {
    let info = mutual_info_rows(input, &rows);
    if info <= budget + 1e-12 {
        return rows;
    }
    if budget <= 1e-12 {
        let q = marginal_of_rows(input, &rows);
        let uniform_mix: Vec<f64> = q.clone();
        return vec![uniform_mix; rows.len()];
    }
    let t = (1.0 - budget / info) + 1e-9;
    blend_toward_constant(&rows, t.min(1.0))
}

// ---------------------------------------------------------------------------
// Weak-sense region point
// ---------------------------------------------------------------------------

struct WeakMeasure {
    info: f64,
    distortion: f64,
    perception: f64,
}

fn weak_measure(
    source: &Dist,
    d: &DistortionFn,
    f: &PerceptionFamily,
    rows: &[Vec<f64>],
) -> Result<WeakMeasure> {
    let ch = Channel::new(rows.to_vec())?;
    let info = mutual_info(source, &ch)?;
    let q = push_forward(source, &ch)?;
    let perception = f.d1(source, &q)?;
    let joint = Joint::from_source_channel(source, &ch)?;
    let distortion = expected_distortion(&joint, d)?;
    Ok(WeakMeasure {
        info,
        distortion,
        perception,
    })
}

/// Minimize expected distortion over test channels `P_{Ŝ|S}` subject to
/// `I(S;Ŝ) ≤ r_budget` and `d_1(P_S, P_Ŝ) ≤ p_budget`.
///
/// Multi-start penalized projected gradient descent with exact feasibility
/// restoration; the problem is convex in the channel, so all starts must
/// agree — disagreement is reported as an error.
pub fn weak_region_point(
    source: &Dist,
    d: &DistortionFn,
    f: &PerceptionFamily,
    r_budget: f64,
    p_budget: f64,
    cfg: &SolverConfig,
) -> Result<RegionPoint> {
    if r_budget < 0.0 || p_budget < 0.0 {
        return Err(CoreError::InvalidArgument(
            "rate and perception budgets must be nonnegative".into(),
        ));
    }
    let m = source.alphabet_size();
    if d.rows() != m || d.cols() != m {
        return Err(CoreError::DimensionMismatch(format!(
            "distortion table {}x{} vs source alphabet {m}",
            d.rows(),
            d.cols()
        )));
    }

    let p_s = source.probs().to_vec();
    let obj: Vec<Vec<f64>> = (0..m)
        .map(|s| (0..m).map(|t| p_s[s] * d.get(s, t)).collect())
        .collect();
    let lin = |rows: &[Vec<f64>]| -> f64 {
        rows.iter()
            .zip(&obj)
            .map(|(r, o)| r.iter().zip(o).map(|(a, b)| a * b).sum::<f64>())
            .sum()
    };

    // Penalized objective and gradient for a given weight.
    let family = f.clone();
    let src = source.clone();
    let eval_pen = |rows: &[Vec<f64>], mu: f64| -> f64 {
        let info = mutual_info_rows(&p_s, rows);
        let q = marginal_of_rows(&p_s, rows);
        let qd = Dist::new(q).expect("marginal");
        let perc = family.d1(&src, &qd).unwrap_or(f64::INFINITY);
        let vi = (info - r_budget).max(0.0);
        let vp = (perc - p_budget).max(0.0);
        lin(rows) + mu * vi * vi + mu * vp * vp
    };
    let family_g = f.clone();
    let src_g = source.clone();
    let grad_pen = |rows: &[Vec<f64>], mu: f64| -> Vec<Vec<f64>> {
        let q = marginal_of_rows(&p_s, rows);
        let info = mutual_info_rows(&p_s, rows);
        let qd = Dist::new(q.clone()).expect("marginal");
        let perc = family_g.d1(&src_g, &qd).unwrap_or(0.0);
        let vi = (info - r_budget).max(0.0);
        let vp = (perc - p_budget).max(0.0);
        let pg = if vp > 0.0 {
            family_g.d1_grad_q(&src_g, &qd).unwrap_or(vec![0.0; q.len()])
        } else {
            vec![0.0; q.len()]
        };
        (0..rows.len())
            .map(|s| {
                (0..rows[s].len())
                    .map(|t| {
                        let mut g = obj[s][t];
                        if vi > 0.0 {
                            let ratio = (rows[s][t].max(1e-12) / q[t].max(1e-12)).log2();
                            g += 2.0 * mu * vi * p_s[s] * ratio;
                        }
                        if vp > 0.0 {
                            g += 2.0 * mu * vp * p_s[s] * pg[t];
                        }
                        g
                    })
                    .collect()
            })
            .collect()
    };

    // Exact feasibility restoration: information budget by convex blending,
    // perception budget by blending the output marginal toward the source and
    // composing with the mass-transport correction.
    let restore = |rows: Vec<Vec<f64>>| -> Result<Vec<Vec<f64>>> {
        let rows = restore_info_budget(&p_s, rows, r_budget);
        let q = marginal_of_rows(&p_s, &rows);
        let qd = Dist::new(q.clone())?;
        let perc = f.d1(source, &qd)?;
        if perc <= p_budget + 1e-12 {
            return Ok(rows);
        }
        let s_mix = (1.0 - p_budget / perc) + 1e-12;
        let target: Vec<f64> = q
            .iter()
            .zip(source.probs())
            .map(|(&qj, &pj)| (1.0 - s_mix) * qj + s_mix * pj)
            .collect();
        let correction = transport_correction(&q, &target)?;
        let ch = compose(&Channel::new(rows)?, &correction)?;
        Ok(ch.to_matrix())
    };

    // Starting points.
    let mut starts: Vec<Vec<Vec<f64>>> = Vec::new();
    starts.push(vec![source.probs().to_vec(); m]);
    starts.push(Channel::identity(m).to_matrix());
    starts.push(
        (0..m)
            .map(|s| {
                (0..m)
                    .map(|t| 0.5 * source.prob(t) + if s == t { 0.5 } else { 0.0 })
                    .collect()
            })
            .collect(),
    );
    let n_grid = (cfg.grid_resolution * cfg.grid_resolution).clamp(16, 4096);
    let mut best_grid: Option<(f64, Vec<Vec<f64>>)> = None;
    for g in 0..n_grid {
        let mut rng = stream(child_seed(cfg.seed, tag::START, g as u64));
        let cand: Vec<Vec<f64>> = (0..m)
            .map(|_| {
                let raw: Vec<f64> = (0..m).map(|_| rng.random::<f64>().max(1e-9)).collect();
                let sum: f64 = raw.iter().sum();
                raw.into_iter().map(|v| v / sum).collect()
            })
            .collect();
        let score = eval_pen(&cand, 1e4);
        if best_grid.as_ref().map_or(true, |(s, _)| score < *s) {
            best_grid = Some((score, cand));
        }
    }
    if let Some((_, cand)) = best_grid {
        starts.push(cand);
    }

    let mu_schedule = [1e2, 1e3, 1e4, 1e5, 1e6, 1e7, 1e8];
    let mut solutions: Vec<(WeakMeasure, Vec<Vec<f64>>)> = Vec::new();
    for start in starts {
        let mut rows = start;
        for &mu in &mu_schedule {
            rows = minimize_rows(
                rows,
                |r| eval_pen(r, mu),
                |r| grad_pen(r, mu),
                cfg.refinement_iters,
            );
        }
        let rows = restore(rows)?;
        let measure = weak_measure(source, d, f, &rows)?;
        solutions.push((measure, rows));
    }

    let spread = {
        let ds: Vec<f64> = solutions.iter().map(|(m, _)| m.distortion).collect();
        ds.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - ds.iter().cloned().fold(f64::INFINITY, f64::min)
    };
    let limit = (cfg.tolerance * 1000.0).max(2e-3);
    if spread > limit {
        return Err(CoreError::SolverDisagreement { spread, limit });
    }

    // Smallest distortion; ties broken by smaller information, then by
    // lexicographically smaller channel entries.
    solutions.sort_by(|(ma, ra), (mb, rb)| {
        let key = |m: &WeakMeasure| m.distortion;
        match key(ma).partial_cmp(&key(mb)).unwrap() {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
        match ma.info.partial_cmp(&mb.info).unwrap() {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
        ra.iter()
            .flatten()
            .partial_cmp(rb.iter().flatten())
            .unwrap()
    });
    let (best, rows) = solutions
        .into_iter()
        .min_by(|(ma, ra), (mb, rb)| {
            compare_solutions(ma.distortion, ma.info, ra, mb.distortion, mb.info, rb, cfg.tolerance)
        })
        .expect("at least one start");

    Ok(RegionPoint {
        rate: best.info,
        distortion: best.distortion,
        perception: best.perception,
        witness: Witness::Direct(Channel::new(rows)?),
    })
}

#[allow(clippy::too_many_arguments)]
fn compare_solutions(
    da: f64,
    ia: f64,
    ra: &[Vec<f64>],
    db: f64,
    ib: f64,
    rb: &[Vec<f64>],
    tol: f64,
) -> std::cmp::Ordering {
    if (da - db).abs() > tol {
        return da.partial_cmp(&db).unwrap();
    }
    if (ia - ib).abs() > tol {
        return ia.partial_cmp(&ib).unwrap();
    }
    ra.iter().flatten().partial_cmp(rb.iter().flatten()).unwrap()
}

/// The distortion-rate-perception value `D(R, P)`: the weak-sense
/// single-letter surrogate (no single-letter form is known for the
/// strong-sense region).
pub fn drp_function(
    source: &Dist,
    d: &DistortionFn,
    f: &PerceptionFamily,
    r_budget: f64,
    p_budget: f64,
    cfg: &SolverConfig,
) -> Result<f64> {
    Ok(weak_region_point(source, d, f, r_budget, p_budget, cfg)?.distortion)
}

// ---------------------------------------------------------------------------
// Restoration solve (inner problem of the chained oracle)
// ---------------------------------------------------------------------------

/// Minimize `Σ cost[w][ŝ] B[w][ŝ]` over channels `B: W → Ŝ` subject to the
/// exact output-marginal constraint `Σ_w p_w(w) B[w][·] = target` and the
/// smoothing budget `I(W;Ŝ) ≤ r_budget`. Returns the channel and the
/// achieved cost.
///
/// The marginal constraint alone is a linear program; when its solution
/// already satisfies the information budget it is exact. Otherwise a
/// penalized projected gradient pass handles the convex information
/// constraint and the marginal is restored exactly by composing with a
/// transport correction (which can only lower `I(W;Ŝ)`).
pub fn restoration_channel(
    p_w: &Dist,
    cost: &[Vec<f64>],
    target: &Dist,
    r_budget: f64,
    cfg: &SolverConfig,
) -> Result<(Channel, f64)> {
    let w = p_w.alphabet_size();
    let m_hat = target.alphabet_size();
    if cost.len() != w || cost.iter().any(|r| r.len() != m_hat) {
        return Err(CoreError::DimensionMismatch("restoration cost table".into()));
    }
    let pw = p_w.probs().to_vec();

    if r_budget <= 1e-12 {
        // Zero smoothing budget forces a constant channel, and the marginal
        // constraint then pins it to the target.
        let rows = vec![target.probs().to_vec(); w];
        let val = cost
            .iter()
            .zip(&rows)
            .map(|(c, r)| c.iter().zip(r).map(|(a, b)| a * b).sum::<f64>())
            .sum();
        return Ok((Channel::new(rows)?, val));
    }

    // LP over flattened B.
    let nv = w * m_hat;
    let mut c_flat = vec![0.0; nv];
    for wi in 0..w {
        for s in 0..m_hat {
            c_flat[wi * m_hat + s] = cost[wi][s];
        }
    }
    let mut a = Vec::new();
    let mut b = Vec::new();
    for wi in 0..w {
        let mut row = vec![0.0; nv];
        for s in 0..m_hat {
            row[wi * m_hat + s] = 1.0;
        }
        a.push(row);
        b.push(1.0);
    }
    for s in 0..m_hat - 1 {
        let mut row = vec![0.0; nv];
        for wi in 0..w {
            row[wi * m_hat + s] = pw[wi];
        }
        a.push(row);
        b.push(target.prob(s));
    }
    let lp = solve_eq_lp(&c_flat, &a, &b)?;
    let rows_lp: Vec<Vec<f64>> = match lp {
        LpOutcome::Infeasible => {
            return Err(CoreError::Infeasible(
                "no channel maps the aux marginal onto the target".into(),
            ))
        }
        LpOutcome::Optimal { x, .. } => (0..w)
            .map(|wi| x[wi * m_hat..(wi + 1) * m_hat].to_vec())
            .collect(),
    };
    let rows_lp: Vec<Vec<f64>> = rows_lp
        .into_iter()
        .map(|r| project_to_simplex(&r))
        .collect();

    let info_lp = mutual_info_rows(&pw, &rows_lp);
    let lin = |rows: &[Vec<f64>]| -> f64 {
        rows.iter()
            .zip(cost)
            .map(|(r, c)| r.iter().zip(c).map(|(a, b)| a * b).sum::<f64>())
            .sum()
    };
    if info_lp <= r_budget + 1e-12 {
        let val = lin(&rows_lp);
        return Ok((Channel::new(rows_lp)?, val));
    }

    // Penalized PGD for the information-constrained case.
    let tgt = target.probs().to_vec();
    let eval_pen = |rows: &[Vec<f64>], mu: f64| -> f64 {
        let info = mutual_info_rows(&pw, rows);
        let q = marginal_of_rows(&pw, rows);
        let vi = (info - r_budget).max(0.0);
        let vm: f64 = q
            .iter()
            .zip(&tgt)
            .map(|(&a, &b)| (a - b) * (a - b))
            .sum();
        lin(rows) + mu * vi * vi + 10.0 * mu * vm
    };
    let grad_pen = |rows: &[Vec<f64>], mu: f64| -> Vec<Vec<f64>> {
        let info = mutual_info_rows(&pw, rows);
        let q = marginal_of_rows(&pw, rows);
        let vi = (info - r_budget).max(0.0);
        (0..w)
            .map(|wi| {
                (0..m_hat)
                    .map(|s| {
                        let mut g = cost[wi][s];
                        if vi > 0.0 {
                            let ratio = (rows[wi][s].max(1e-12) / q[s].max(1e-12)).log2();
                            g += 2.0 * mu * vi * pw[wi] * ratio;
                        }
                        g += 10.0 * mu * 2.0 * (q[s] - tgt[s]) * pw[wi];
                        g
                    })
                    .collect()
            })
            .collect()
    };

    let starts = [rows_lp, vec![target.probs().to_vec(); w]];
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    for start in starts {
        let mut rows = start;
        for &mu in &[1e2, 1e3, 1e4, 1e5, 1e6, 1e7] {
            rows = minimize_rows(
                rows,
                |r| eval_pen(r, mu),
                |r| grad_pen(r, mu),
                cfg.refinement_iters,
            );
        }
        // Exact restoration: information first (marginal-preserving blend),
        // then the marginal via transport composition (DPI-safe).
        let rows = restore_info_budget(&pw, rows, r_budget);
        let q = marginal_of_rows(&pw, &rows);
        let correction = transport_correction(&q, &tgt)?;
        let restored = compose(&Channel::new(rows)?, &correction)?;
        let rows = restored.to_matrix();
        let val = lin(&rows);
        if best.as_ref().map_or(true, |(v, _)| val < *v) {
            best = Some((val, rows));
        }
    }
    let (val, rows) = best.expect("at least one start");
    Ok((Channel::new(rows)?, val))
}

// ---------------------------------------------------------------------------
// No-common-randomness perfect-realism oracle
// ---------------------------------------------------------------------------

/// Minimum expected distortion over chains `S → W → Ŝ` with perfect realism
/// (`P_Ŝ = P_S` exactly) when encoder and decoder share no randomness. The
/// rate budget binds both links: `I(S;W) ≤ R` and `I(W;Ŝ) ≤ R`.
pub fn nocr_perfect_realism_d(
    source: &Dist,
    d: &DistortionFn,
    r_budget: f64,
    cfg: &SolverConfig,
) -> Result<RegionPoint> {
    if r_budget < 0.0 {
        return Err(CoreError::InvalidArgument("rate budget must be ≥ 0".into()));
    }
    let m = source.alphabet_size();
    if d.rows() != m || d.cols() != m {
        return Err(CoreError::DimensionMismatch(format!(
            "distortion table {}x{} vs source alphabet {m}",
            d.rows(),
            d.cols()
        )));
    }
    let w = cfg.aux_size(m);
    let p_s = source.probs().to_vec();

    let induced_cost = |a_rows: &[Vec<f64>]| -> Vec<Vec<f64>> {
        (0..w)
            .map(|wi| {
                (0..m)
                    .map(|shat| {
                        (0..m)
                            .map(|s| p_s[s] * a_rows[s][wi] * d.get(s, shat))
                            .sum()
                    })
                    .collect()
            })
            .collect()
    };

    let evaluate = |a_rows: &[Vec<f64>], quality: usize| -> Result<(f64, Vec<Vec<f64>>, Channel)> {
        let a_rows = restore_info_budget(&p_s, a_rows.to_vec(), r_budget);
        let p_w = Dist::new(marginal_of_rows(&p_s, &a_rows))?;
        let cost = induced_cost(&a_rows);
        let inner_cfg = SolverConfig {
            refinement_iters: quality,
            ..cfg.clone()
        };
        let (b, val) = restoration_channel(&p_w, &cost, source, r_budget, &inner_cfg)?;
        Ok((val, a_rows, b))
    };

    // Seeds: merge-style channels on the first two aux symbols (exact family
    // containing the known binary optimum), the identity embedding, the
    // constant channel, and seeded random tables.
    let mut seeds: Vec<Vec<Vec<f64>>> = Vec::new();
    if m == 2 {
        let grid = cfg.grid_resolution.clamp(17, 65);
        for gi in 0..grid {
            let q = 0.5 * gi as f64 / (grid - 1) as f64;
            let mut row0 = vec![0.0; w];
            let mut row1 = vec![0.0; w];
            row0[0] = 1.0 - q;
            row0[1] = q;
            row1[0] = q;
            row1[1] = 1.0 - q;
            seeds.push(vec![row0, row1]);
        }
    }
    if w >= m {
        let mut ident = vec![vec![0.0; w]; m];
        for (s, row) in ident.iter_mut().enumerate() {
            row[s] = 1.0;
        }
        seeds.push(ident);
    }
    seeds.push(vec![vec![1.0 / w as f64; w]; m]);
    for g in 0..8u64 {
        let mut rng = stream(child_seed(cfg.seed, tag::START, 1000 + g));
        seeds.push(
            (0..m)
                .map(|_| {
                    let raw: Vec<f64> = (0..w).map(|_| rng.random::<f64>().max(1e-9)).collect();
                    let sum: f64 = raw.iter().sum();
                    raw.into_iter().map(|v| v / sum).collect()
                })
                .collect(),
        );
    }

    let fast = (cfg.refinement_iters / 2).max(60);
    let mut scored: Vec<(f64, Vec<Vec<f64>>)> = Vec::new();
    for seed in &seeds {
        if let Ok((val, a_rows, _)) = evaluate(seed, fast) {
            scored.push((val, a_rows));
        }
    }
    if scored.is_empty() {
        return Err(CoreError::Infeasible(
            "no feasible chain candidate found".into(),
        ));
    }
    scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    scored.truncate(3);

    // Pattern search refinement around the best seeds.
    let steps = [0.2, 0.1, 0.05, 0.025, 0.012, 0.006, 0.003, 0.0015, 0.0008];
    let mut best: Option<(f64, Vec<Vec<f64>>)> = None;
    for (val0, a0) in scored {
        let mut cur_val = val0;
        let mut cur_a = a0;
        for &step in &steps {
            let mut sweeps = 0;
            loop {
                let mut improved = false;
                for s in 0..m {
                    for wi in 0..w {
                        for dir in [1.0, -1.0] {
                            let mut cand = cur_a.clone();
                            cand[s][wi] += dir * step;
                            cand[s] = project_to_simplex(&cand[s]);
                            if let Ok((val, a_rows, _)) = evaluate(&cand, fast) {
                                if val < cur_val - 1e-10 {
                                    cur_val = val;
                                    cur_a = a_rows;
                                    improved = true;
                                }
                            }
                        }
                    }
                }
                sweeps += 1;
                if !improved || sweeps >= 3 {
                    break;
                }
            }
        }
        if best.as_ref().map_or(true, |(v, _)| cur_val < *v) {
            best = Some((cur_val, cur_a));
        }
    }

    let (_, a_best) = best.expect("candidates nonempty");
    let (val, a_rows, b) = evaluate(&a_best, cfg.refinement_iters.max(300))?;
    let a_ch = Channel::new(a_rows)?;
    let info_a = mutual_info(source, &a_ch)?;
    let p_w = push_forward(source, &a_ch)?;
    let info_b = mutual_info(&p_w, &b)?;
    let out = push_forward(&p_w, &b)?;
    let perception = tv(source, &out)?;
    if perception > 1e-9 {
        return Err(CoreError::Infeasible(format!(
            "perfect-realism restoration residual TV {perception:.3e}"
        )));
    }
    Ok(RegionPoint {
        rate: info_a.max(info_b),
        distortion: val,
        perception,
        witness: Witness::Chained {
            to_aux: a_ch,
            from_aux: b,
        },
    })
}

// ---------------------------------------------------------------------------
// Region boundary sweep
// ---------------------------------------------------------------------------

/// Sweep the separate-coding distortion-perception boundary at rate `κ·C`:
/// for each perception budget in `p_values` return the weak-sense region
/// point. Errors are reported per point so a sweep can be partially usable.
pub fn region_boundary(
    source: &Dist,
    d: &DistortionFn,
    f: &PerceptionFamily,
    kappa: f64,
    ch: &Channel,
    p_values: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<(f64, Result<RegionPoint>)>> {
    if kappa < 0.0 {
        return Err(CoreError::InvalidArgument("kappa must be ≥ 0".into()));
    }
    let (capacity, _) = capacity_ba(ch, cfg.tolerance.min(1e-8))?;
    let r_budget = kappa * capacity;
    let mut sorted: Vec<f64> = p_values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(sorted
        .into_iter()
        .map(|p| {
            let point = weak_region_point(source, d, f, r_budget, p, cfg);
            (p, point)
        })
        .collect())
}
