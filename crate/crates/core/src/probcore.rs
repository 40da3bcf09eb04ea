//! Finite-alphabet probability kernel.
//!
//! Distributions, row-stochastic channels, joint laws and distortion tables,
//! plus the handful of information measures (entropy, mutual information,
//! total variation) used by every other module. All quantities are in bits
//! (logarithm base 2). Block laws on `S^n` use lexicographic indexing with
//! symbol 0 of position 0 most significant; the helpers [`block_index`] and
//! [`block_symbols`] are the only places that convention is spelled out.

use crate::error::{CoreError, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Tolerance to which probabilities are normalized after construction.
pub const SIMPLEX_TOL: f64 = 1e-12;
/// Mass-deviation beyond which construction rejects instead of renormalizing.
pub const SIMPLEX_REJECT: f64 = 1e-9;
/// Default cap on exhaustive block enumerations (number of states).
pub const DEFAULT_ENUM_CAP: u64 = 1 << 24;

// ---------------------------------------------------------------------------
// Dist
// ---------------------------------------------------------------------------

/// A probability vector on a finite alphabet `{0, ..., len-1}`.
///
/// Entries are nonnegative and sum to 1 within [`SIMPLEX_TOL`]; construction
/// renormalizes small deviations and rejects anything off by more than
/// [`SIMPLEX_REJECT`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dist {
    probs: Vec<f64>,
}

impl Dist {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(CoreError::InvalidDistribution("empty alphabet".into()));
        }
        let mut sum = 0.0;
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(CoreError::InvalidDistribution(format!(
                    "non-finite entry {p}"
                )));
            }
            if *p < -SIMPLEX_TOL {
                return Err(CoreError::InvalidDistribution(format!(
                    "negative entry {p}"
                )));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
            sum += *p;
        }
        if (sum - 1.0).abs() > SIMPLEX_REJECT {
            return Err(CoreError::InvalidDistribution(format!(
                "mass {sum} deviates from 1 by more than {SIMPLEX_REJECT}"
            )));
        }
        for p in probs.iter_mut() {
            *p /= sum;
        }
        Ok(Self { probs })
    }

    /// Uniform distribution on `n` symbols.
    pub fn uniform(n: usize) -> Self {
        Self {
            probs: vec![1.0 / n as f64; n.max(1)],
        }
    }

    /// Point mass at symbol `at`.
    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut probs = vec![0.0; n];
        probs[at] = 1.0;
        Self { probs }
    }

    /// Binary distribution with mass `p0` on symbol 0.
    pub fn binary(p0: f64) -> Result<Self> {
        Self::new(vec![p0, 1.0 - p0])
    }

    pub fn alphabet_size(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, i: usize) -> f64 {
        self.probs[i]
    }

    /// Draw one symbol by inverse-CDF lookup.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.random();
        let mut acc = 0.0;
        for (i, &p) in self.probs.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.probs.len() - 1
    }
}

// ---------------------------------------------------------------------------
// Channel
// ---------------------------------------------------------------------------

/// A row-stochastic conditional probability table: one output [`Dist`] per
/// input symbol. Serves as a memoryless channel, a test channel, or a
/// restoration channel depending on context.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    rows: Vec<Dist>,
}

impl Channel {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(CoreError::InvalidDistribution("channel with no rows".into()));
        }
        let width = rows[0].len();
        let rows = rows
            .into_iter()
            .map(|r| {
                if r.len() != width {
                    return Err(CoreError::DimensionMismatch(
                        "ragged channel rows".into(),
                    ));
                }
                Dist::new(r)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { rows })
    }

    pub fn from_rows(rows: Vec<Dist>) -> Result<Self> {
        if rows.is_empty() {
            return Err(CoreError::InvalidDistribution("channel with no rows".into()));
        }
        let width = rows[0].alphabet_size();
        if rows.iter().any(|r| r.alphabet_size() != width) {
            return Err(CoreError::DimensionMismatch("ragged channel rows".into()));
        }
        Ok(Self { rows })
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n).map(|i| Dist::point_mass(n, i)).collect();
        Self { rows }
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Binary erasure channel with erasure probability `e`; output symbol 2
    /// is the erasure flag.
    pub fn bec(e: f64) -> Result<Self> {
        Self::new(vec![vec![1.0 - e, 0.0, e], vec![0.0, 1.0 - e, e]])
    }

    /// Channel whose rows are all equal to `out` (output independent of input).
    pub fn constant(inputs: usize, out: &Dist) -> Self {
        Self {
            rows: vec![out.clone(); inputs],
        }
    }

    pub fn input_size(&self) -> usize {
        self.rows.len()
    }

    pub fn output_size(&self) -> usize {
        self.rows[0].alphabet_size()
    }

    pub fn row(&self, i: usize) -> &Dist {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.rows[i].prob(j)
    }

    /// Flat copy of the table, row-major.
    pub fn to_matrix(&self) -> Vec<Vec<f64>> {
        self.rows.iter().map(|r| r.probs().to_vec()).collect()
    }
}

// ---------------------------------------------------------------------------
// Joint
// ---------------------------------------------------------------------------

/// A joint probability table over a pair of finite alphabets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Joint {
    matrix: Vec<Vec<f64>>,
}

impl Joint {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        if matrix.is_empty() || matrix[0].is_empty() {
            return Err(CoreError::InvalidDistribution("empty joint table".into()));
        }
        let width = matrix[0].len();
        let mut sum = 0.0;
        for row in &matrix {
            if row.len() != width {
                return Err(CoreError::DimensionMismatch("ragged joint rows".into()));
            }
            for &v in row {
                if !v.is_finite() || v < -SIMPLEX_TOL {
                    return Err(CoreError::InvalidDistribution(format!(
                        "bad joint entry {v}"
                    )));
                }
                sum += v.max(0.0);
            }
        }
        if (sum - 1.0).abs() > SIMPLEX_REJECT {
            return Err(CoreError::InvalidDistribution(format!(
                "joint mass {sum} deviates from 1"
            )));
        }
        let matrix = matrix
            .into_iter()
            .map(|row| row.into_iter().map(|v| v.max(0.0) / sum).collect())
            .collect();
        Ok(Self { matrix })
    }

    /// Joint law of `(S, Ŝ)` when `S ~ p` is passed through `ch`.
    pub fn from_source_channel(p: &Dist, ch: &Channel) -> Result<Self> {
        if p.alphabet_size() != ch.input_size() {
            return Err(CoreError::DimensionMismatch(format!(
                "source alphabet {} vs channel inputs {}",
                p.alphabet_size(),
                ch.input_size()
            )));
        }
        let matrix = (0..p.alphabet_size())
            .map(|s| {
                ch.row(s)
                    .probs()
                    .iter()
                    .map(|&w| p.prob(s) * w)
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(Self { matrix })
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn prob(&self, i: usize, j: usize) -> f64 {
        self.matrix[i][j]
    }

    /// Marginal over the first coordinate.
    pub fn left_marginal(&self) -> Dist {
        let probs = self.matrix.iter().map(|r| r.iter().sum()).collect();
        clamp_to_dist(probs)
    }

    /// Marginal over the second coordinate.
    pub fn right_marginal(&self) -> Dist {
        let mut probs = vec![0.0; self.cols()];
        for row in &self.matrix {
            for (j, &v) in row.iter().enumerate() {
                probs[j] += v;
            }
        }
        clamp_to_dist(probs)
    }

    /// Mutual information between the two coordinates, in bits.
    pub fn mutual_info(&self) -> f64 {
        let left = self.left_marginal();
        let right = self.right_marginal();
        let mut info = 0.0;
        for (i, row) in self.matrix.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v > 0.0 {
                    info += v * (v / (left.prob(i) * right.prob(j))).log2();
                }
            }
        }
        info.max(0.0)
    }
}

/// Build a `Dist` from numerically-clean marginal sums without re-validation.
fn clamp_to_dist(mut probs: Vec<f64>) -> Dist {
    let sum: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p = p.max(0.0) / sum;
    }
    Dist { probs }
}

// ---------------------------------------------------------------------------
// DistortionFn
// ---------------------------------------------------------------------------

/// A per-letter distortion table `δ(s, ŝ) ≥ 0` with its maximum entry cached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionFn {
    matrix: Vec<Vec<f64>>,
    d_max: f64,
}

impl DistortionFn {
    pub fn new(matrix: Vec<Vec<f64>>) -> Result<Self> {
        if matrix.is_empty() || matrix[0].is_empty() {
            return Err(CoreError::InvalidArgument("empty distortion table".into()));
        }
        let width = matrix[0].len();
        let mut d_max: f64 = 0.0;
        for row in &matrix {
            if row.len() != width {
                return Err(CoreError::DimensionMismatch(
                    "ragged distortion rows".into(),
                ));
            }
            for &v in row {
                if !v.is_finite() || v < 0.0 {
                    return Err(CoreError::InvalidArgument(format!(
                        "distortion entry {v} out of range"
                    )));
                }
                d_max = d_max.max(v);
            }
        }
        Ok(Self { matrix, d_max })
    }

    /// Hamming distortion on an alphabet of size `n`.
    pub fn hamming(n: usize) -> Self {
        let matrix = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
            .collect();
        Self { matrix, d_max: 1.0 }
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn get(&self, s: usize, shat: usize) -> f64 {
        self.matrix[s][shat]
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }
}

// ---------------------------------------------------------------------------
// Block indexing
// ---------------------------------------------------------------------------

/// Lexicographic index of a block of symbols; position 0 is most significant.
pub fn block_index(symbols: &[usize], alphabet: usize) -> usize {
    symbols.iter().fold(0, |acc, &s| acc * alphabet + s)
}

/// Inverse of [`block_index`].
pub fn block_symbols(mut index: usize, alphabet: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for t in (0..n).rev() {
        out[t] = index % alphabet;
        index /= alphabet;
    }
    out
}

/// `alphabet^n` as a checked state count against `cap`.
pub fn checked_state_count(alphabet: usize, n: usize, cap: u64) -> Result<usize> {
    let mut states: u128 = 1;
    for _ in 0..n {
        states = states.saturating_mul(alphabet as u128);
        if states > cap as u128 {
            return Err(CoreError::CapExceeded { states, cap });
        }
    }
    Ok(states as usize)
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Shannon entropy in bits, with `0 log 0 = 0`.
pub fn entropy(p: &Dist) -> f64 {
    p.probs()
        .iter()
        .filter(|&&v| v > 0.0)
        .map(|&v| -v * v.log2())
        .sum()
}

/// Binary entropy function `h(p)` in bits.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        0.0
    } else {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }
}

/// Mutual information `I(S; Ŝ)` in bits when `S ~ input` feeds `ch`.
pub fn mutual_info(input: &Dist, ch: &Channel) -> Result<f64> {
    if input.alphabet_size() != ch.input_size() {
        return Err(CoreError::DimensionMismatch(format!(
            "input alphabet {} vs channel inputs {}",
            input.alphabet_size(),
            ch.input_size()
        )));
    }
    let out = push_forward(input, ch)?;
    let cond: f64 = input
        .probs()
        .iter()
        .enumerate()
        .map(|(i, &p)| p * entropy(ch.row(i)))
        .sum();
    Ok((entropy(&out) - cond).max(0.0))
}

/// Output marginal of `p` through `ch`.
pub fn push_forward(p: &Dist, ch: &Channel) -> Result<Dist> {
    if p.alphabet_size() != ch.input_size() {
        return Err(CoreError::DimensionMismatch(format!(
            "input alphabet {} vs channel inputs {}",
            p.alphabet_size(),
            ch.input_size()
        )));
    }
    let mut probs = vec![0.0; ch.output_size()];
    for (i, &pi) in p.probs().iter().enumerate() {
        if pi == 0.0 {
            continue;
        }
        for (j, &w) in ch.row(i).probs().iter().enumerate() {
            probs[j] += pi * w;
        }
    }
    Ok(clamp_to_dist(probs))
}

/// The i.i.d. block law `p^{⊗ n}` on `S^n`, lexicographically indexed.
pub fn product_extend(p: &Dist, n: usize) -> Result<Dist> {
    product_extend_with_cap(p, n, DEFAULT_ENUM_CAP)
}

pub fn product_extend_with_cap(p: &Dist, n: usize, cap: u64) -> Result<Dist> {
    if n == 0 {
        return Err(CoreError::InvalidArgument("block length 0".into()));
    }
    let m = p.alphabet_size();
    let states = checked_state_count(m, n, cap)?;
    let mut probs = vec![1.0];
    for _ in 0..n {
        let mut next = Vec::with_capacity(probs.len() * m);
        for &v in &probs {
            for &q in p.probs() {
                next.push(v * q);
            }
        }
        probs = next;
    }
    debug_assert_eq!(probs.len(), states);
    Ok(clamp_to_dist(probs))
}

/// Tensor product of two block laws; `a`'s coordinate is most significant.
pub fn tensor(a: &Dist, b: &Dist) -> Result<Dist> {
    let states = (a.alphabet_size() as u128) * (b.alphabet_size() as u128);
    if states > DEFAULT_ENUM_CAP as u128 {
        return Err(CoreError::CapExceeded {
            states,
            cap: DEFAULT_ENUM_CAP,
        });
    }
    let mut probs = Vec::with_capacity(states as usize);
    for &x in a.probs() {
        for &y in b.probs() {
            probs.push(x * y);
        }
    }
    Ok(clamp_to_dist(probs))
}

/// Chain `a` then `b`: the matrix product of the two tables.
pub fn compose(a: &Channel, b: &Channel) -> Result<Channel> {
    if a.output_size() != b.input_size() {
        return Err(CoreError::DimensionMismatch(format!(
            "compose: {} outputs vs {} inputs",
            a.output_size(),
            b.input_size()
        )));
    }
    let rows = (0..a.input_size())
        .map(|i| push_forward(a.row(i), b))
        .collect::<Result<Vec<_>>>()?;
    Channel::from_rows(rows)
}

/// Total variation distance `(1/2) Σ |p_i − q_i|`, in `[0, 1]`.
pub fn tv(p: &Dist, q: &Dist) -> Result<f64> {
    if p.alphabet_size() != q.alphabet_size() {
        return Err(CoreError::DimensionMismatch(format!(
            "tv: alphabets {} vs {}",
            p.alphabet_size(),
            q.alphabet_size()
        )));
    }
    Ok(0.5
        * p.probs()
            .iter()
            .zip(q.probs())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>())
}

/// Expected distortion `Σ j(s, ŝ) δ(s, ŝ)`.
pub fn expected_distortion(j: &Joint, d: &DistortionFn) -> Result<f64> {
    if j.rows() != d.rows() || j.cols() != d.cols() {
        return Err(CoreError::DimensionMismatch(format!(
            "joint {}x{} vs distortion {}x{}",
            j.rows(),
            j.cols(),
            d.rows(),
            d.cols()
        )));
    }
    let mut acc = 0.0;
    for s in 0..j.rows() {
        for shat in 0..j.cols() {
            acc += j.prob(s, shat) * d.get(s, shat);
        }
    }
    Ok(acc)
}

/// Inverse of the binary entropy function on `[0, 1/2]`, by bisection.
pub fn h_inv(r: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&r) {
        return Err(CoreError::InvalidArgument(format!(
            "h_inv argument {r} outside [0, 1]"
        )));
    }
    let (mut lo, mut hi) = (0.0_f64, 0.5_f64);
    while hi - lo > 1e-10 {
        let mid = 0.5 * (lo + hi);
        if binary_entropy(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dist_construction_normalizes_and_rejects() {
        let d = Dist::new(vec![0.5, 0.5 + 4e-10]).unwrap();
        assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < SIMPLEX_TOL);
        assert!(Dist::new(vec![0.5, 0.6]).is_err());
        assert!(Dist::new(vec![0.5, -0.5, 1.0]).is_err());
        assert!(Dist::new(vec![]).is_err());
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&Dist::uniform(2)), 1.0);
        assert_eq!(entropy(&Dist::point_mass(4, 2)), 0.0);
        // closed-form binary entropy h(0.1)
        let expect = binary_entropy(0.1);
        assert!((entropy(&Dist::binary(0.1).unwrap()) - expect).abs() < 1e-12);
        assert!((expect - 0.4690).abs() < 1e-4);
    }

    #[test]
    fn mutual_info_examples() {
        let uniform = Dist::uniform(2);
        assert!((mutual_info(&uniform, &Channel::identity(2)).unwrap() - 1.0).abs() < 1e-12);
        assert!(mutual_info(&uniform, &Channel::bsc(0.5).unwrap()).unwrap() < 1e-12);
        let i = mutual_info(&uniform, &Channel::bsc(0.1).unwrap()).unwrap();
        assert!((i - (1.0 - binary_entropy(0.1))).abs() < 1e-12);
        assert!((i - 0.5310).abs() < 1e-4);
        assert!(mutual_info(&Dist::uniform(3), &Channel::bsc(0.1).unwrap()).is_err());
    }

    #[test]
    fn push_forward_examples() {
        let p = Dist::new(vec![0.3, 0.7]).unwrap();
        assert_eq!(push_forward(&p, &Channel::identity(2)).unwrap(), p);
        let out = push_forward(&Dist::uniform(2), &Channel::bsc(0.23).unwrap()).unwrap();
        assert!((out.prob(0) - 0.5).abs() < 1e-12);
        // mass 0.2 on symbol 0 through BSC(0.1): 0.2*0.9 + 0.8*0.1 = 0.26
        let out = push_forward(&Dist::binary(0.2).unwrap(), &Channel::bsc(0.1).unwrap()).unwrap();
        assert!((out.prob(0) - 0.26).abs() < 1e-12);
    }

    #[test]
    fn product_extend_examples() {
        let u8th = product_extend(&Dist::uniform(2), 3).unwrap();
        assert_eq!(u8th.alphabet_size(), 8);
        assert!(u8th.probs().iter().all(|&p| (p - 0.125).abs() < 1e-12));

        let pm = product_extend(&Dist::point_mass(3, 1), 5).unwrap();
        let idx = block_index(&[1, 1, 1, 1, 1], 3);
        assert_eq!(pm.prob(idx), 1.0);

        let b = product_extend(&Dist::binary(0.9).unwrap(), 2).unwrap();
        let expect = [0.81, 0.09, 0.09, 0.01];
        for (i, &e) in expect.iter().enumerate() {
            assert!((b.prob(i) - e).abs() < 1e-12);
        }

        assert!(matches!(
            product_extend(&Dist::uniform(2), 40),
            Err(CoreError::CapExceeded { .. })
        ));
    }

    #[test]
    fn compose_examples() {
        let bsc = |p: f64| Channel::bsc(p).unwrap();
        let c = compose(&bsc(0.2), &Channel::identity(2)).unwrap();
        assert!((c.get(0, 1) - 0.2).abs() < 1e-12);
        let c = compose(&bsc(0.1), &bsc(0.1)).unwrap();
        assert!((c.get(0, 1) - 0.18).abs() < 1e-12);
        let c = compose(&bsc(0.5), &bsc(0.3)).unwrap();
        assert!((c.get(0, 1) - 0.5).abs() < 1e-12);
        assert!(compose(&Channel::bec(0.1).unwrap(), &bsc(0.1)).is_err());
    }

    #[test]
    fn tv_examples() {
        let p = Dist::binary(0.3).unwrap();
        assert_eq!(tv(&p, &p).unwrap(), 0.0);
        let half = Dist::uniform(2);
        let point = Dist::point_mass(2, 0);
        assert!((tv(&half, &point).unwrap() - 0.5).abs() < 1e-12);
        let q = Dist::binary(0.7).unwrap();
        assert!((tv(&p, &q).unwrap() - 0.4).abs() < 1e-12);
        assert!(tv(&p, &Dist::uniform(3)).is_err());
    }

    #[test]
    fn expected_distortion_examples() {
        let ham = DistortionFn::hamming(2);
        let diag = Joint::new(vec![vec![0.5, 0.0], vec![0.0, 0.5]]).unwrap();
        assert_eq!(expected_distortion(&diag, &ham).unwrap(), 0.0);
        let indep = Joint::new(vec![vec![0.25, 0.25], vec![0.25, 0.25]]).unwrap();
        assert!((expected_distortion(&indep, &ham).unwrap() - 0.5).abs() < 1e-12);
        let j = Joint::from_source_channel(&Dist::uniform(2), &Channel::bsc(0.1).unwrap()).unwrap();
        assert!((expected_distortion(&j, &ham).unwrap() - 0.1).abs() < 1e-12);
    }

    #[test]
    fn h_inv_examples() {
        assert!((h_inv(1.0).unwrap() - 0.5).abs() < 1e-9);
        assert!(h_inv(0.0).unwrap() < 1e-9);
        let d = h_inv(0.5).unwrap();
        assert!((d - 0.1100).abs() < 1e-3);
        assert!((binary_entropy(d) - 0.5).abs() < 1e-9);
        assert!(h_inv(1.2).is_err());
    }

    #[test]
    fn joint_marginals_and_info() {
        let j = Joint::from_source_channel(&Dist::binary(0.3).unwrap(), &Channel::bsc(0.1).unwrap())
            .unwrap();
        let left = j.left_marginal();
        assert!((left.prob(0) - 0.3).abs() < 1e-12);
        let i_direct = j.mutual_info();
        let i_formula =
            mutual_info(&Dist::binary(0.3).unwrap(), &Channel::bsc(0.1).unwrap()).unwrap();
        assert!((i_direct - i_formula).abs() < 1e-12);
    }

    #[test]
    fn block_index_roundtrip() {
        let syms = vec![2, 0, 1];
        let idx = block_index(&syms, 3);
        assert_eq!(idx, 2 * 9 + 0 * 3 + 1);
        assert_eq!(block_symbols(idx, 3, 3), syms);
    }
}
