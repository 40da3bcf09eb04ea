//! Exact and Monte Carlo evaluation of schemes, plus the converse and
//! coupling audits.
//!
//! Exact evaluation propagates block laws through the scheme structure and is
//! available whenever the scheme's randomness is integrated into per-symbol
//! kernels (everything except the common-randomness synthesis scheme, whose
//! shared stream is not enumerable). Monte Carlo evaluation runs seeded
//! trials and reports plug-in estimates with their confidence half-widths.

use crate::error::{CoreError, Result};
use crate::perception::PerceptionFamily;
use crate::probcore::{
    entropy, expected_distortion, mutual_info, product_extend, push_forward, tensor, tv, Channel,
    Dist, DistortionFn, Joint, DEFAULT_ENUM_CAP,
};
use crate::rdp::capacity_ba;
use crate::schemes::{RandomnessKind, Scheme, SchemeKind, Transport, TrialRand};
use crate::seed::{child_seed, stream, tag};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalMode {
    Exact,
    MonteCarlo,
}

/// Measured performance of a scheme run.
#[derive(Debug, Clone, Serialize)]
pub struct EvalReport {
    /// Per-letter expected distortion.
    pub distortion: f64,
    /// Strong-sense perception `(1/n) d_n` between block laws; absent when
    /// the block law is not estimable.
    pub perception_strong: Option<f64>,
    /// Weak-sense perception: position-averaged `d_1` between marginals.
    pub perception_weak: Option<f64>,
    /// Probability of the error event (overflow and/or injected corruption).
    pub err_prob: f64,
    /// 95% half-width of the distortion estimate; 0 in exact mode.
    pub ci_halfwidth: f64,
    pub mode: EvalMode,
    pub trials: u64,
}

/// Exactly propagated laws of one scheme run.
#[derive(Debug, Clone)]
pub struct ExactLaw {
    pub n: usize,
    /// Per-position joints of `(S_t, Ŝ_t)`.
    pub per_pos: Vec<Joint>,
    pub source_block: Dist,
    pub recon_block: Dist,
    pub err_prob: f64,
}

fn mix_probs(a: &[f64], b: &[f64], w_b: f64) -> Vec<f64> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (1.0 - w_b) * x + w_b * y)
        .collect()
}

fn mix_joint(a: &Joint, b: &Joint, w_b: f64) -> Result<Joint> {
    let rows = (0..a.rows())
        .map(|i| {
            (0..a.cols())
                .map(|j| (1.0 - w_b) * a.prob(i, j) + w_b * b.prob(i, j))
                .collect()
        })
        .collect();
    Joint::new(rows)
}

fn indep_joint(p: &Dist, q: &Dist) -> Result<Joint> {
    let rows = p
        .probs()
        .iter()
        .map(|&ps| q.probs().iter().map(|&qs| ps * qs).collect())
        .collect();
    Joint::new(rows)
}

/// Joint of `(S, Ŝ = 0)`: the fixed dummy reconstruction.
fn dummy_joint(p: &Dist, recon_alphabet: usize) -> Result<Joint> {
    let rows = p
        .probs()
        .iter()
        .map(|&ps| {
            let mut row = vec![0.0; recon_alphabet];
            row[0] = ps;
            row
        })
        .collect();
    Joint::new(rows)
}

fn tensor_power(d: &Dist, k: usize) -> Result<Dist> {
    let mut acc = d.clone();
    for _ in 1..k {
        acc = tensor(&acc, d)?;
    }
    Ok(acc)
}

/// Product of per-position rows, lexicographic (first row most significant).
fn fold_product(rows: &[&[f64]]) -> Vec<f64> {
    let mut acc = vec![1.0];
    for row in rows {
        let mut next = Vec::with_capacity(acc.len() * row.len());
        for &v in &acc {
            for &w in row.iter() {
                next.push(v * w);
            }
        }
        acc = next;
    }
    acc
}

fn entropy_raw(v: &[f64]) -> f64 {
    v.iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

fn pair_cap_check(states_s: usize, states_r: usize) -> Result<()> {
    let pairs = states_s as u128 * states_r as u128;
    if pairs > DEFAULT_ENUM_CAP as u128 {
        return Err(CoreError::CapExceeded {
            states: pairs,
            cap: DEFAULT_ENUM_CAP,
        });
    }
    Ok(())
}

impl Scheme {
    /// Total error-event probability folded into the exact law.
    fn exact_err_prob(&self) -> f64 {
        match &self.kind {
            SchemeKind::Separated { err_inject, .. } => {
                let ovf = self
                    .rate_meta
                    .as_ref()
                    .and_then(|m| m.overflow_prob)
                    .unwrap_or(0.0);
                ovf + (1.0 - ovf) * err_inject
            }
            SchemeKind::Concat { parts } => {
                let mut keep = 1.0;
                for (part, count) in parts {
                    keep *= (1.0 - part.exact_err_prob()).powi(*count as i32);
                }
                1.0 - keep
            }
            _ => 0.0,
        }
    }

    /// Conditional reconstruction block law given a source block, as a raw
    /// probability vector over `recon_alphabet^n`. This is the quantity the
    /// generic converse audit enumerates.
    pub(crate) fn cond_law(&self, s: &[usize], ch: &Channel) -> Result<Vec<f64>> {
        match &self.kind {
            SchemeKind::Uncoded => {
                let rows: Vec<&[f64]> = s.iter().map(|&sym| ch.row(sym).probs()).collect();
                Ok(fold_product(&rows))
            }
            SchemeKind::ZeroRate { source } => {
                let rows: Vec<&[f64]> = (0..self.n).map(|_| source.probs()).collect();
                Ok(fold_product(&rows))
            }
            SchemeKind::QuantizeRestore {
                source,
                codebook,
                quant_map,
                restoration,
                ..
            } => {
                let m_alpha = source.alphabet_size();
                let idx = crate::probcore::block_index(s, m_alpha);
                let word =
                    crate::probcore::block_symbols(codebook[quant_map[idx]], m_alpha, self.n);
                let rows: Vec<&[f64]> = word.iter().map(|&w| restoration.row(w).probs()).collect();
                Ok(fold_product(&rows))
            }
            SchemeKind::CrSynthesis { test_channel, .. } => {
                // Ideal synthesized law: the per-symbol joint equals
                // source × test channel by the functional-representation
                // construction (verified statistically in the tests).
                let rows: Vec<&[f64]> = s.iter().map(|&sym| test_channel.row(sym).probs()).collect();
                Ok(fold_product(&rows))
            }
            SchemeKind::Separated { src, k, .. } => {
                let p_err = self.exact_err_prob();
                let mut ideal = vec![1.0];
                for i in 0..*k {
                    let block = &s[i * src.n..(i + 1) * src.n];
                    let cond = src.cond_law(block, ch)?;
                    let mut next = Vec::with_capacity(ideal.len() * cond.len());
                    for &v in &ideal {
                        for &w in &cond {
                            next.push(v * w);
                        }
                    }
                    ideal = next;
                }
                let mut out = ideal.iter().map(|&v| (1.0 - p_err) * v).collect::<Vec<_>>();
                out[0] += p_err;
                Ok(out)
            }
            SchemeKind::Concat { parts } => {
                let mut acc = vec![1.0];
                let mut offset = 0;
                for (part, count) in parts {
                    for _ in 0..*count {
                        let cond = part.cond_law(&s[offset..offset + part.n], ch)?;
                        let mut next = Vec::with_capacity(acc.len() * cond.len());
                        for &v in &acc {
                            for &w in &cond {
                                next.push(v * w);
                            }
                        }
                        acc = next;
                        offset += part.n;
                    }
                }
                Ok(acc)
            }
        }
    }
}

/// Exactly propagate block laws through the scheme.
pub fn exact_law(s: &Scheme, ch: &Channel, source: &Dist) -> Result<ExactLaw> {
    if source.alphabet_size() != s.source_alphabet {
        return Err(CoreError::DimensionMismatch(format!(
            "source alphabet {} vs scheme {}",
            source.alphabet_size(),
            s.source_alphabet
        )));
    }
    match &s.kind {
        SchemeKind::Uncoded => {
            if s.source_alphabet != 2 || ch.input_size() != 2 || ch.output_size() != 2 {
                return Err(CoreError::InvalidArgument(
                    "uncoded scheme requires binary source and channel".into(),
                ));
            }
            let j = Joint::from_source_channel(source, ch)?;
            let out = push_forward(source, ch)?;
            Ok(ExactLaw {
                n: s.n,
                per_pos: vec![j; s.n],
                source_block: product_extend(source, s.n)?,
                recon_block: product_extend(&out, s.n)?,
                err_prob: 0.0,
            })
        }
        SchemeKind::ZeroRate { source: src } => {
            let j = indep_joint(source, src)?;
            Ok(ExactLaw {
                n: s.n,
                per_pos: vec![j; s.n],
                source_block: product_extend(source, s.n)?,
                recon_block: product_extend(src, s.n)?,
                err_prob: 0.0,
            })
        }
        SchemeKind::QuantizeRestore {
            source: built_src,
            codebook,
            quant_map,
            restoration,
            ..
        } => {
            if source != built_src {
                return Err(CoreError::InvalidArgument(
                    "quantizer was built for a different source law".into(),
                ));
            }
            let m_alpha = source.alphabet_size();
            let r_alpha = s.recon_alphabet;
            let states_s = quant_map.len();
            let states_r = r_alpha.pow(s.n as u32);
            pair_cap_check(states_s, states_r)?;
            let block_law = product_extend(source, s.n)?;
            let mut recon = vec![0.0; states_r];
            let mut per_pos = vec![vec![vec![0.0; r_alpha]; m_alpha]; s.n];
            for b in 0..states_s {
                let pb = block_law.prob(b);
                let bsyms = crate::probcore::block_symbols(b, m_alpha, s.n);
                let word = crate::probcore::block_symbols(
                    codebook[quant_map[b]],
                    m_alpha,
                    s.n,
                );
                let rows: Vec<&[f64]> = word.iter().map(|&w| restoration.row(w).probs()).collect();
                let cond = fold_product(&rows);
                for (j, &c) in cond.iter().enumerate() {
                    recon[j] += pb * c;
                }
                for t in 0..s.n {
                    for shat in 0..r_alpha {
                        per_pos[t][bsyms[t]][shat] += pb * restoration.get(word[t], shat);
                    }
                }
            }
            Ok(ExactLaw {
                n: s.n,
                per_pos: per_pos.into_iter().map(Joint::new).collect::<Result<_>>()?,
                source_block: block_law,
                recon_block: Dist::new(recon)?,
                err_prob: 0.0,
            })
        }
        SchemeKind::CrSynthesis { .. } => Err(CoreError::ExactUnavailable(
            "common randomness stream is not enumerable; use evaluate_mc".into(),
        )),
        SchemeKind::Separated { src, k, .. } => {
            let meta = src.rate_meta.as_ref();
            if meta.and_then(|m| m.bits_per_block).is_none() {
                return Err(CoreError::ExactUnavailable(
                    "variable-length descriptions; use evaluate_mc".into(),
                ));
            }
            let el = exact_law(src, ch, source)?;
            let p_err = s.exact_err_prob();
            let source_block = tensor_power(&el.source_block, *k)?;
            let recon_ideal = tensor_power(&el.recon_block, *k)?;
            let dummy = Dist::point_mass(recon_ideal.alphabet_size(), 0);
            let recon_block = Dist::new(mix_probs(recon_ideal.probs(), dummy.probs(), p_err))?;
            let dummy_j = dummy_joint(source, s.recon_alphabet)?;
            let mut per_pos = Vec::with_capacity(s.n);
            for _ in 0..*k {
                for t in 0..src.n {
                    per_pos.push(mix_joint(&el.per_pos[t], &dummy_j, p_err)?);
                }
            }
            Ok(ExactLaw {
                n: s.n,
                per_pos,
                source_block,
                recon_block,
                err_prob: p_err,
            })
        }
        SchemeKind::Concat { parts } => {
            let mut per_pos = Vec::with_capacity(s.n);
            let mut source_block: Option<Dist> = None;
            let mut recon_block: Option<Dist> = None;
            for (part, count) in parts {
                let el = exact_law(part, ch, source)?;
                for _ in 0..*count {
                    per_pos.extend(el.per_pos.iter().cloned());
                    source_block = Some(match source_block {
                        None => el.source_block.clone(),
                        Some(b) => tensor(&b, &el.source_block)?,
                    });
                    recon_block = Some(match recon_block {
                        None => el.recon_block.clone(),
                        Some(b) => tensor(&b, &el.recon_block)?,
                    });
                }
            }
            Ok(ExactLaw {
                n: s.n,
                per_pos,
                source_block: source_block.expect("nonempty concat"),
                recon_block: recon_block.expect("nonempty concat"),
                err_prob: s.exact_err_prob(),
            })
        }
    }
}

/// Exact evaluation: propagate block laws and measure distortion and both
/// perception senses.
pub fn evaluate_exact(
    s: &Scheme,
    ch: &Channel,
    source: &Dist,
    f: &PerceptionFamily,
    d: &DistortionFn,
) -> Result<EvalReport> {
    if d.rows() != s.source_alphabet || d.cols() != s.recon_alphabet {
        return Err(CoreError::DimensionMismatch(
            "distortion table vs scheme alphabets".into(),
        ));
    }
    let law = exact_law(s, ch, source)?;
    let mut dist = 0.0;
    let mut weak = 0.0;
    for j in &law.per_pos {
        dist += expected_distortion(j, d)?;
        weak += f.d1(source, &j.right_marginal())?;
    }
    dist /= law.n as f64;
    weak /= law.n as f64;
    let strong = f.eval_n(law.n, &law.source_block, &law.recon_block)? / law.n as f64;
    Ok(EvalReport {
        distortion: dist,
        perception_strong: Some(strong),
        perception_weak: Some(weak),
        err_prob: law.err_prob,
        ci_halfwidth: 0.0,
        mode: EvalMode::Exact,
        trials: 0,
    })
}

/// Monte Carlo evaluation over seeded trials.
pub fn evaluate_mc(
    s: &Scheme,
    ch: &Channel,
    source: &Dist,
    f: &PerceptionFamily,
    d: &DistortionFn,
    trials: u64,
    seed: u64,
) -> Result<EvalReport> {
    if trials == 0 {
        return Err(CoreError::InvalidArgument("trials must be ≥ 1".into()));
    }
    if source.alphabet_size() != s.source_alphabet {
        return Err(CoreError::DimensionMismatch(
            "source alphabet vs scheme".into(),
        ));
    }
    if d.rows() != s.source_alphabet || d.cols() != s.recon_alphabet {
        return Err(CoreError::DimensionMismatch(
            "distortion table vs scheme alphabets".into(),
        ));
    }
    if s.transport == Transport::Native && s.m > 0 && ch.input_size() != s.channel_in {
        return Err(CoreError::DimensionMismatch(
            "channel input vs scheme".into(),
        ));
    }

    let n = s.n;
    let r_alpha = s.recon_alphabet;
    // Block-law plug-in only when the state space is enumerable and trials
    // swamp it.
    let block_states: Option<usize> = {
        let mut states: u128 = 1;
        for _ in 0..n {
            states = states.saturating_mul(r_alpha as u128);
            if states > (1 << 16) {
                break;
            }
        }
        if states <= (1 << 16) && trials >= 100 * states as u64 {
            Some(states as usize)
        } else {
            None
        }
    };

    let mut dist_sum = 0.0;
    let mut dist_sq = 0.0;
    let mut err_count = 0u64;
    let mut pos_counts = vec![vec![0u64; r_alpha]; n];
    let mut block_counts = block_states.map(|st| vec![0u64; st]);

    for trial in 0..trials {
        let t_seed = child_seed(seed, tag::TRIAL, trial);
        let rand = TrialRand::from_master(seed, trial);
        let mut src_rng = stream(child_seed(t_seed, tag::SOURCE, 0));
        let block: Vec<usize> = (0..n).map(|_| source.sample(&mut src_rng)).collect();
        let x = s.encode(&block, &rand)?;
        let y = match s.transport {
            Transport::BitPipe => x,
            Transport::Native => {
                let mut ch_rng = stream(child_seed(t_seed, tag::CHANNEL, 0));
                x.iter().map(|&xi| ch.row(xi).sample(&mut ch_rng)).collect()
            }
        };
        let (shat, flag) = s.decode_flag(&y, &rand)?;
        if flag {
            err_count += 1;
        }
        let mut bd = 0.0;
        for t in 0..n {
            bd += d.get(block[t], shat[t]);
            pos_counts[t][shat[t]] += 1;
        }
        bd /= n as f64;
        dist_sum += bd;
        dist_sq += bd * bd;
        if let Some(counts) = block_counts.as_mut() {
            counts[crate::probcore::block_index(&shat, r_alpha)] += 1;
        }
    }

    let t = trials as f64;
    let mean = dist_sum / t;
    let var = ((dist_sq / t) - mean * mean).max(0.0) * t / (t - 1.0).max(1.0);
    let ci = 1.96 * (var / t).sqrt();

    let weak = if r_alpha == s.source_alphabet {
        let mut acc = 0.0;
        for counts in &pos_counts {
            let emp = Dist::new(counts.iter().map(|&c| c as f64 / t).collect())?;
            acc += f.d1(source, &emp)?;
        }
        Some(acc / n as f64)
    } else {
        None
    };

    let strong = match block_counts {
        Some(counts) if r_alpha == s.source_alphabet => {
            let emp = Dist::new(counts.iter().map(|&c| c as f64 / t).collect())?;
            let src_block = product_extend(source, n)?;
            Some(f.eval_n(n, &src_block, &emp)? / n as f64)
        }
        _ => None,
    };

    Ok(EvalReport {
        distortion: mean,
        perception_strong: strong,
        perception_weak: weak,
        err_prob: err_count as f64 / t,
        ci_halfwidth: ci,
        mode: EvalMode::MonteCarlo,
        trials,
    })
}

// ---------------------------------------------------------------------------
// Converse audit
// ---------------------------------------------------------------------------

/// Outcome of the data-processing audit `I(S^n; Ŝ^n) ≤ m·C`.
#[derive(Debug, Clone, Serialize)]
pub struct ConverseReport {
    pub info_bits: f64,
    pub info_per_symbol: f64,
    pub capacity: f64,
    /// Channel uses charged against the bound: `m` for native transport,
    /// `m/C` modeled uses for bit-pipe transport.
    pub channel_uses: f64,
    /// `m·C` for native transport; the pipe's bit budget for bit-pipe
    /// transport (an idealized code carries `C` bits per use).
    pub bound_bits: f64,
    pub slack: f64,
    pub pass: bool,
}

fn scheme_info(s: &Scheme, ch: &Channel, source: &Dist) -> Result<f64> {
    match &s.kind {
        SchemeKind::Uncoded => Ok(s.n as f64 * mutual_info(source, ch)?),
        SchemeKind::ZeroRate { .. } => Ok(0.0),
        SchemeKind::CrSynthesis { test_channel, .. } => {
            Ok(s.n as f64 * mutual_info(source, test_channel)?)
        }
        SchemeKind::Concat { parts } => {
            let mut acc = 0.0;
            for (part, count) in parts {
                acc += *count as f64 * scheme_info(part, ch, source)?;
            }
            Ok(acc)
        }
        SchemeKind::QuantizeRestore { .. } | SchemeKind::Separated { .. } => {
            let m_alpha = s.source_alphabet;
            let states_s = crate::probcore::checked_state_count(m_alpha, s.n, DEFAULT_ENUM_CAP)?;
            let states_r =
                crate::probcore::checked_state_count(s.recon_alphabet, s.n, DEFAULT_ENUM_CAP)?;
            pair_cap_check(states_s, states_r)?;
            let block_law = product_extend(source, s.n)?;
            let mut recon = vec![0.0; states_r];
            let mut cond_ent = 0.0;
            for b in 0..states_s {
                let pb = block_law.prob(b);
                if pb == 0.0 {
                    continue;
                }
                let syms = crate::probcore::block_symbols(b, m_alpha, s.n);
                let cond = s.cond_law(&syms, ch)?;
                cond_ent += pb * entropy_raw(&cond);
                for (j, &c) in cond.iter().enumerate() {
                    recon[j] += pb * c;
                }
            }
            Ok((entropy_raw(&recon) - cond_ent).max(0.0))
        }
    }
}

/// Exact converse audit: compute `I(S^n; Ŝ^n)` from the propagated law and
/// check it against the information the channel could have carried.
pub fn converse_audit(s: &Scheme, ch: &Channel, source: &Dist) -> Result<ConverseReport> {
    let info = scheme_info(s, ch, source)?;
    let (capacity, _) = capacity_ba(ch, 1e-10)?;
    let (channel_uses, bound_bits) = match s.transport {
        Transport::Native => (s.m as f64, s.m as f64 * capacity),
        Transport::BitPipe => {
            let bits = s.m as f64;
            (if capacity > 0.0 { bits / capacity } else { f64::INFINITY }, bits)
        }
    };
    Ok(ConverseReport {
        info_bits: info,
        info_per_symbol: info / s.n as f64,
        capacity,
        channel_uses,
        bound_bits,
        slack: bound_bits - info,
        pass: info <= bound_bits + 1e-9,
    })
}

// ---------------------------------------------------------------------------
// Coupling audit for separated pipelines
// ---------------------------------------------------------------------------

/// Exact comparison of the ideal (error-free) and realized laws of a
/// separated pipeline, for checking the total-variation coupling bound and
/// the induced distortion/perception penalties.
#[derive(Debug, Clone, Serialize)]
pub struct CouplingReport {
    pub err_prob: f64,
    /// Exact TV between the ideal and realized joint block laws.
    pub tv_joint: f64,
    pub distortion_ideal: f64,
    pub distortion_realized: f64,
    pub p_strong_ideal: f64,
    pub p_strong_realized: f64,
}

pub fn coupling_audit(
    s: &Scheme,
    ch: &Channel,
    source: &Dist,
    f: &PerceptionFamily,
    d: &DistortionFn,
) -> Result<CouplingReport> {
    let SchemeKind::Separated { src, k, .. } = &s.kind else {
        return Err(CoreError::InvalidArgument(
            "coupling audit applies to separated pipelines".into(),
        ));
    };
    let el_src = exact_law(src, ch, source)?;
    let p_err = s.exact_err_prob();

    // Ideal laws: the error-free k-extension.
    let mut d_ideal = 0.0;
    for j in &el_src.per_pos {
        d_ideal += expected_distortion(j, d)?;
    }
    d_ideal /= src.n as f64;
    let recon_ideal = tensor_power(&el_src.recon_block, *k)?;
    let source_block = tensor_power(&el_src.source_block, *k)?;
    let p_strong_ideal = f.eval_n(s.n, &source_block, &recon_ideal)? / s.n as f64;

    // Realized laws from the exact propagation.
    let law = exact_law(s, ch, source)?;
    let mut d_real = 0.0;
    for j in &law.per_pos {
        d_real += expected_distortion(j, d)?;
    }
    d_real /= s.n as f64;
    let p_strong_real = f.eval_n(s.n, &law.source_block, &law.recon_block)? / s.n as f64;

    // TV between ideal and realized joint laws: the realized conditional is
    // (1 − p_err)·ideal + p_err·δ_dummy, so the joint TV is
    // p_err · (1 − P(ideal reconstruction = dummy)); the all-zero mass of the
    // ideal law factors over blocks.
    let m_alpha = source.alphabet_size();
    let states_src = el_src.source_block.alphabet_size();
    let mut z = 0.0;
    for b in 0..states_src {
        let pb = el_src.source_block.prob(b);
        if pb == 0.0 {
            continue;
        }
        let syms = crate::probcore::block_symbols(b, m_alpha, src.n);
        let cond = src.cond_law(&syms, ch)?;
        z += pb * cond[0];
    }
    let tv_joint = p_err * (1.0 - z.powi(*k as i32));

    Ok(CouplingReport {
        err_prob: p_err,
        tv_joint,
        distortion_ideal: d_ideal,
        distortion_realized: d_real,
        p_strong_ideal,
        p_strong_realized: p_strong_real,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perception::tv_family;
    use crate::schemes::{uncoded_scheme, zero_rate_realism_scheme};

    #[test]
    fn uncoded_exact_over_bsc() {
        let s = uncoded_scheme(8).unwrap();
        let ch = Channel::bsc(0.1).unwrap();
        let src = Dist::uniform(2);
        let rep = evaluate_exact(&s, &ch, &src, &tv_family(), &DistortionFn::hamming(2)).unwrap();
        assert!((rep.distortion - 0.1).abs() < 1e-12);
        assert!(rep.perception_strong.unwrap() < 1e-12);
        assert!(rep.perception_weak.unwrap() < 1e-12);
        assert_eq!(rep.ci_halfwidth, 0.0);
    }

    #[test]
    fn uncoded_exact_over_bsc_half() {
        let s = uncoded_scheme(8).unwrap();
        let ch = Channel::bsc(0.5).unwrap();
        let src = Dist::uniform(2);
        let rep = evaluate_exact(&s, &ch, &src, &tv_family(), &DistortionFn::hamming(2)).unwrap();
        assert!((rep.distortion - 0.5).abs() < 1e-12);
        assert!(rep.perception_strong.unwrap() < 1e-12);
    }

    #[test]
    fn zero_rate_exact() {
        let src = Dist::uniform(2);
        let s = zero_rate_realism_scheme(&src, 4).unwrap();
        let ch = Channel::bsc(0.1).unwrap();
        let rep = evaluate_exact(&s, &ch, &src, &tv_family(), &DistortionFn::hamming(2)).unwrap();
        assert!((rep.distortion - 0.5).abs() < 1e-12);
        assert!(rep.perception_strong.unwrap() < 1e-12);

        let skew = Dist::binary(0.2).unwrap();
        let s = zero_rate_realism_scheme(&skew, 4).unwrap();
        let rep = evaluate_exact(&s, &ch, &skew, &tv_family(), &DistortionFn::hamming(2)).unwrap();
        assert!((rep.distortion - 0.32).abs() < 1e-12);
        assert!(rep.perception_strong.unwrap() < 1e-12);
    }

    #[test]
    fn identity_scheme_over_noiseless_channel() {
        let s = uncoded_scheme(3).unwrap();
        let ch = Channel::identity(2);
        let src = Dist::binary(0.3).unwrap();
        let rep = evaluate_exact(&s, &ch, &src, &tv_family(), &DistortionFn::hamming(2)).unwrap();
        assert_eq!(rep.distortion, 0.0);
        assert!(rep.perception_strong.unwrap() < 1e-12);
    }

    #[test]
    fn mc_matches_exact_for_uncoded() {
        let s = uncoded_scheme(4).unwrap();
        let ch = Channel::bsc(0.1).unwrap();
        let src = Dist::uniform(2);
        let rep = evaluate_mc(
            &s,
            &ch,
            &src,
            &tv_family(),
            &DistortionFn::hamming(2),
            20_000,
            42,
        )
        .unwrap();
        assert!((rep.distortion - 0.1).abs() < 0.01, "D {}", rep.distortion);
        assert!(rep.ci_halfwidth < 0.005);
        assert_eq!(rep.err_prob, 0.0);
    }

    #[test]
    fn mc_deterministic_identity_has_zero_variance() {
        let s = uncoded_scheme(4).unwrap();
        let ch = Channel::identity(2);
        let src = Dist::uniform(2);
        let rep = evaluate_mc(
            &s,
            &ch,
            &src,
            &tv_family(),
            &DistortionFn::hamming(2),
            500,
            1,
        )
        .unwrap();
        assert_eq!(rep.distortion, 0.0);
        assert_eq!(rep.ci_halfwidth, 0.0);
    }

    #[test]
    fn converse_audit_uncoded_equality() {
        let s = uncoded_scheme(4).unwrap();
        let ch = Channel::bsc(0.1).unwrap();
        let src = Dist::uniform(2);
        let rep = converse_audit(&s, &ch, &src).unwrap();
        assert!(rep.pass);
        assert!(rep.slack.abs() < 1e-6, "slack {}", rep.slack);
        let expected = 4.0 * (1.0 - crate::probcore::binary_entropy(0.1));
        assert!((rep.info_bits - expected).abs() < 1e-9);
    }

    #[test]
    fn converse_audit_zero_rate() {
        let src = Dist::uniform(2);
        let s = zero_rate_realism_scheme(&src, 4).unwrap();
        let ch = Channel::bsc(0.1).unwrap();
        let rep = converse_audit(&s, &ch, &src).unwrap();
        assert_eq!(rep.info_bits, 0.0);
        assert!(rep.pass);
    }
}
