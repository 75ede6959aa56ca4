//! Per-relay and per-subset selection criteria: max-min, max-link,
//! max-ratio, optimal selection (OS), the secrecy-rate (SR) criterion that
//! needs eavesdropper CSI, and the effective secrecy rate (E-SR) criterion
//! that does not.
//!
//! Every criterion breaks ties toward the lowest relay index.

use crate::channel::ChannelRealization;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::precoding::{signal_covariances, zf_precoder, Precoder};

/// Hop selector of the two-phase protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Link {
    /// Source to relays.
    I,
    /// Relays to destinations.
    II,
}

impl Link {
    pub fn other(self) -> Self {
        match self {
            Link::I => Link::II,
            Link::II => Link::I,
        }
    }
}

/// Identifier of a selection criterion or selection algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CriterionId {
    MaxMin,
    MaxLink,
    MaxRatio,
    Os,
    Sr,
    Esr,
}

/// A scored candidate produced by one of the criteria.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionScore {
    pub relay_or_subset: Vec<usize>,
    pub score: f64,
    pub criterion_id: CriterionId,
}

/// Denominator floor used when an eavesdropper gain vanishes.
pub const RATIO_DENOM_FLOOR: f64 = 1e-12;

/// Aggregate source-to-relay gain of relay `i`.
pub fn source_gain(chan: &ChannelRealization, i: usize) -> f64 {
    let n = chan.source_to_relay(i).frobenius_norm();
    n * n
}

/// Aggregate relay-to-users gain of relay `i`.
pub fn dest_gain(chan: &ChannelRealization, cfg: &SystemConfig, i: usize) -> f64 {
    (0..cfg.m_users)
        .map(|r| {
            let n = chan.relay_to_user(i, r).frobenius_norm();
            n * n
        })
        .sum()
}

/// Aggregate relay-to-eavesdroppers gain of relay `i`.
pub fn eave_gain_from_relay(chan: &ChannelRealization, cfg: &SystemConfig, i: usize) -> f64 {
    (0..cfg.n_eaves)
        .map(|e| {
            let n = chan.relay_to_eave(i, e).frobenius_norm();
            n * n
        })
        .sum()
}

/// Aggregate source-to-eavesdroppers gain.
pub fn eave_gain_from_source(chan: &ChannelRealization, cfg: &SystemConfig) -> f64 {
    (0..cfg.n_eaves)
        .map(|e| {
            let n = chan.source_to_eave(e).frobenius_norm();
            n * n
        })
        .sum()
}

/// Indices sorted by descending score, ties toward the lowest index.
pub fn rank_desc(scores: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| {
        scores[b]
            .partial_cmp(&scores[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    order
}

/// Max-min criterion score per relay: the weaker of its two hops.
pub fn max_min_scores(chan: &ChannelRealization, cfg: &SystemConfig) -> Vec<f64> {
    (0..cfg.s_total)
        .map(|i| source_gain(chan, i).min(dest_gain(chan, cfg, i)))
        .collect()
}

/// Relay with the strongest weaker hop.
pub fn max_min_select(chan: &ChannelRealization, cfg: &SystemConfig) -> Result<usize> {
    if cfg.s_total == 0 {
        return Err(Error::InvalidArgument("max_min_select: no relays".into()));
    }
    Ok(rank_desc(&max_min_scores(chan, cfg))[0])
}

/// Max-link criterion: the strongest admissible hop across both links.
/// Source-to-relay links need buffer space, relay-to-destination links need
/// a stored packet.
pub fn max_link_select(
    chan: &ChannelRealization,
    cfg: &SystemConfig,
    occupancy: &[usize],
    capacity: usize,
) -> Result<(usize, Link)> {
    let mut best: Option<(f64, Link, usize)> = None;
    for i in 0..cfg.s_total {
        if occupancy[i] < capacity {
            consider(&mut best, source_gain(chan, i), Link::I, i);
        }
        if occupancy[i] > 0 {
            consider(&mut best, dest_gain(chan, cfg, i), Link::II, i);
        }
    }
    best.map(|(_, link, i)| (i, link)).ok_or(Error::Starvation)
}

fn consider(best: &mut Option<(f64, Link, usize)>, score: f64, link: Link, i: usize) {
    let replace = match best {
        None => true,
        Some((b, blink, bi)) => {
            score > *b
                || (score == *b && link == Link::I && *blink == Link::II)
                || (score == *b && link == *blink && i < *bi)
        }
    };
    if replace {
        *best = Some((score, link, i));
    }
}

/// Outcome of the max-ratio criterion, including whether a vanishing
/// eavesdropper gain had to be floored.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxRatioChoice {
    pub relay: usize,
    pub link: Link,
    pub denom_floored: bool,
}

/// Max-ratio criterion: compares the best admissible source-to-relay gain
/// over the source-to-eavesdropper gain against the best admissible
/// relay-to-destination ratio. Requires eavesdropper CSI.
pub fn max_ratio_select(
    chan: &ChannelRealization,
    cfg: &SystemConfig,
    occupancy: &[usize],
    capacity: usize,
) -> Result<MaxRatioChoice> {
    let mut floored = false;
    let mut floor = |d: f64| -> f64 {
        if d < RATIO_DENOM_FLOOR {
            floored = true;
            RATIO_DENOM_FLOOR
        } else {
            d
        }
    };

    let se = floor(eave_gain_from_source(chan, cfg));
    let mut eta1: Option<(f64, usize)> = None;
    let mut eta2: Option<(f64, usize)> = None;
    for i in 0..cfg.s_total {
        if occupancy[i] < capacity {
            let ratio = source_gain(chan, i) / se;
            if eta1.map_or(true, |(b, _)| ratio > b) {
                eta1 = Some((ratio, i));
            }
        }
        if occupancy[i] > 0 {
            let ratio = dest_gain(chan, cfg, i) / floor(eave_gain_from_relay(chan, cfg, i));
            if eta2.map_or(true, |(b, _)| ratio > b) {
                eta2 = Some((ratio, i));
            }
        }
    }
    match (eta1, eta2) {
        (None, None) => Err(Error::Starvation),
        (Some((_, i)), None) => Ok(MaxRatioChoice { relay: i, link: Link::I, denom_floored: floored }),
        (None, Some((_, i))) => Ok(MaxRatioChoice { relay: i, link: Link::II, denom_floored: floored }),
        (Some((v1, i1)), Some((v2, i2))) => {
            // ties go to the first hop
            if v1 >= v2 {
                Ok(MaxRatioChoice { relay: i1, link: Link::I, denom_floored: floored })
            } else {
                Ok(MaxRatioChoice { relay: i2, link: Link::II, denom_floored: floored })
            }
        }
    }
}

/// Per-relay optimal-selection scores `[log(1 + G_r) - log(1 + G_e)]^+`
/// with the user hop served by the relay alone and the eavesdropper
/// listening to the source stream precoded for that relay.
pub fn os_scores(
    chan: &ChannelRealization,
    cfg: &SystemConfig,
    src_power: f64,
    relay_power: f64,
) -> Result<Vec<f64>> {
    let mut scores = Vec::with_capacity(cfg.s_total);
    for i in 0..cfg.s_total {
        let user = i % cfg.m_users;
        let eave = i % cfg.n_eaves;
        let g_user = {
            let n = chan.relay_to_user(i, user).frobenius_norm();
            relay_power / cfg.n_k as f64 * n * n
        };
        // single-relay right inverse of the source channel
        let g_eave = match zf_precoder(chan.source_to_relay(i), cfg.n_i) {
            Ok(p) => {
                let n = chan.source_to_eave(eave).matmul(p.full())?.frobenius_norm();
                src_power / cfg.n_t as f64 * n * n
            }
            Err(_) => f64::INFINITY,
        };
        let score = ((1.0 + g_user).log2() - (1.0 + g_eave).log2()).max(0.0);
        scores.push(score);
    }
    Ok(scores)
}

/// Relay with the best optimal-selection score.
pub fn os_select(
    chan: &ChannelRealization,
    cfg: &SystemConfig,
    src_power: f64,
    relay_power: f64,
) -> Result<usize> {
    Ok(rank_desc(&os_scores(chan, cfg, src_power, relay_power)?)[0])
}

/// One position's contribution to the E-SR score:
/// `logdet[I + (H_i R_I H_i^H)^(-1) (H_i R_d H_i^H)]
///  - logdet[I + U_i^H R_I^(-1) U_i]`.
///
/// The second term carries the unit-power stream covariance, which is what
/// makes it the eavesdropper-free equivalent of the SR eavesdropper term
/// on square invertible instances. No eavesdropper channel is read here.
pub fn esr_term(h_i: &ComplexMatrix, prec: &Precoder, p: usize) -> Result<f64> {
    let (r_d, r_i) = signal_covariances(prec, p);
    let hh = h_i.conj_transpose();
    let denom = h_i.matmul(&r_i)?.matmul(&hh)?;
    let num = h_i.matmul(&r_i.add(&r_d)?)?.matmul(&hh)?;
    let t1 = num.log_det_herm()? - denom.log_det_herm()?;

    let u_p = prec.block(p);
    let core = u_p.conj_transpose().matmul(&r_i.inverse()?)?.matmul(&u_p)?;
    let t2 = ComplexMatrix::identity(core.rows()).add(&core)?.log_det_herm()?;
    Ok(t1 - t2)
}

/// One position's contribution to the SR score; identical first term, but
/// the eavesdropper term is evaluated against the real eavesdropper
/// channel. Non-square eavesdropper channels are completed with zero rows
/// and a ridge keeps the padded Gram matrices invertible.
pub fn sr_term(
    h_i: &ComplexMatrix,
    h_e: &ComplexMatrix,
    prec: &Precoder,
    p: usize,
) -> Result<f64> {
    const RIDGE: f64 = 1e-10;
    let (r_d, r_i) = signal_covariances(prec, p);
    let hh = h_i.conj_transpose();
    let denom = h_i.matmul(&r_i)?.matmul(&hh)?;
    let num = h_i.matmul(&r_i.add(&r_d)?)?.matmul(&hh)?;
    let t1 = num.log_det_herm()? - denom.log_det_herm()?;

    let n_t = h_e.cols();
    let (h_eff, ridge) = if h_e.rows() == n_t {
        (h_e.clone(), 0.0)
    } else if h_e.rows() < n_t {
        let padded = ComplexMatrix::from_fn(n_t, n_t, |r, c| {
            if r < h_e.rows() {
                h_e.get(r, c)
            } else {
                num_complex::Complex64::new(0.0, 0.0)
            }
        });
        (padded, RIDGE)
    } else {
        return Err(Error::Shape(format!(
            "sr_term: eavesdropper channel taller than wide ({}x{})",
            h_e.rows(),
            h_e.cols()
        )));
    };
    let heh = h_eff.conj_transpose();
    let mut lam1 = h_eff.matmul(&r_i)?.matmul(&heh)?;
    let mut lam2 = h_eff.matmul(&r_i.add(&r_d)?)?.matmul(&heh)?;
    if ridge > 0.0 {
        let eye = ComplexMatrix::identity(lam1.rows()).scale_re(ridge);
        lam1 = lam1.add(&eye)?;
        lam2 = lam2.add(&eye)?;
    }
    let t2 = lam2.log_det_herm()? - lam1.log_det_herm()?;
    Ok(t1 - t2)
}

/// E-SR score of a relay subset: a zero-forcing precoder is built for the
/// stacked subset channel and the per-position terms are summed. Reads no
/// eavesdropper channel.
pub fn esr_subset_score(
    subset: &[usize],
    chan: &ChannelRealization,
    cfg: &SystemConfig,
) -> Result<f64> {
    let h = chan.stack_source_to_relays(subset)?;
    let prec = zf_precoder(&h, cfg.n_i)?;
    let mut score = 0.0;
    for (p, &i) in subset.iter().enumerate() {
        score += esr_term(chan.source_to_relay(i), &prec, p)?;
    }
    Ok(score)
}

/// SR score of a relay subset; position `p` is tapped by eavesdropper
/// `p mod n_eaves`.
pub fn sr_subset_score(
    subset: &[usize],
    chan: &ChannelRealization,
    cfg: &SystemConfig,
) -> Result<f64> {
    let h = chan.stack_source_to_relays(subset)?;
    let prec = zf_precoder(&h, cfg.n_i)?;
    let mut score = 0.0;
    for (p, &i) in subset.iter().enumerate() {
        let e = p % cfg.n_eaves;
        score += sr_term(chan.source_to_relay(i), chan.source_to_eave(e), &prec, p)?;
    }
    Ok(score)
}
