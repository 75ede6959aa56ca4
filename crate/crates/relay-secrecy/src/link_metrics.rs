//! SINR, achievable-rate, secrecy-rate and secrecy-capacity expressions,
//! covering both the residual-interference and interference-cancellation
//! scenarios.
//!
//! Every MIMO rate is evaluated as a difference of Hermitian log-dets,
//! `logdet(D + S) - logdet(D)`, rather than by forming `D^(-1) S`
//! explicitly; the ratio form stays finite across the whole SNR sweep.

use crate::channel::ChannelRealization;
use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use crate::precoding::{Precoder, SignalSet};
use num_complex::Complex64;

/// How the instantaneous link powers are reduced from matrix norms.
///
/// The squared Frobenius norm is the power-consistent reading and the
/// default everywhere; the plain norm variant exists for sensitivity
/// checks only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GammaNorm {
    #[default]
    SquaredFrobenius,
    Frobenius,
}

impl GammaNorm {
    fn reduce(self, norm: f64) -> f64 {
        match self {
            GammaNorm::SquaredFrobenius => norm * norm,
            GammaNorm::Frobenius => norm,
        }
    }
}

/// Instantaneous received powers for every link class around one
/// (relay, eavesdropper, user) triple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGammas {
    /// Source to the serving relay (desired).
    pub g_src_relay: f64,
    /// Source streams of other users into the serving relay.
    pub g_intf_relay: f64,
    /// Jamming relays into the serving relay (inter-relay interference).
    pub g_jam_relay: f64,
    /// Source stream of the tapped user into the eavesdropper.
    pub g_src_eave: f64,
    /// Other users' streams into the eavesdropper.
    pub g_intf_eave: f64,
    /// Jamming relays into the eavesdropper.
    pub g_jam_eave: f64,
    /// Serving relay into the user (desired).
    pub g_relay_user: f64,
    /// Residual from the other forwarding relays into the user.
    pub g_resid_user: f64,
}

/// Evaluates all eight link powers for position `p` of the relaying set.
///
/// Position `p` of `selected` serves stream `p`; the serving relay for
/// `user` is `selected[user]`. Jamming vectors are taken from the signal
/// set in jam-set order.
#[allow(clippy::too_many_arguments)]
pub fn compute_gammas(
    chan: &ChannelRealization,
    prec: &Precoder,
    sig: &SignalSet,
    selected: &[usize],
    p: usize,
    e: usize,
    r: usize,
    jam_set: &[usize],
    mode: GammaNorm,
) -> Result<LinkGammas> {
    if p >= selected.len() || r >= selected.len() {
        return Err(Error::InvalidArgument(
            "compute_gammas: position out of range of the relaying set".into(),
        ));
    }
    if jam_set.contains(&selected[p]) {
        return Err(Error::InvalidArgument(
            "compute_gammas: jam_set must not contain the serving relay".into(),
        ));
    }
    let relay = selected[p];
    let h_i = chan.source_to_relay(relay);
    let h_e = chan.source_to_eave(e);

    let g_src_relay = mode.reduce(h_i.matmul(&prec.block(p))?.frobenius_norm());
    let mut g_intf_relay = 0.0;
    let mut g_intf_eave = 0.0;
    for j in 0..prec.num_blocks() {
        if j == p {
            continue;
        }
        let u_j = prec.block(j);
        g_intf_relay += mode.reduce(h_i.matmul(&u_j)?.frobenius_norm());
        g_intf_eave += mode.reduce(h_e.matmul(&u_j)?.frobenius_norm());
    }
    let g_src_eave = mode.reduce(h_e.matmul(&prec.block(p))?.frobenius_norm());

    let (g_jam_relay, g_jam_eave) = if jam_set.is_empty() {
        (0.0, 0.0)
    } else {
        let jam_stack: Vec<Complex64> = jam_set
            .iter()
            .enumerate()
            .flat_map(|(q, _)| sig.j_blocks[q % sig.j_blocks.len()].clone())
            .collect();
        let h_ki = chan.stack_relays_to_relay(relay, jam_set)?;
        let h_ke = chan.stack_relays_to_eave(e, jam_set)?;
        let at_relay = vec_norm(&h_ki.mul_vec(&jam_stack)?);
        let at_eave = vec_norm(&h_ke.mul_vec(&jam_stack)?);
        (mode.reduce(at_relay), mode.reduce(at_eave))
    };

    // Second hop: the forwarding relays transmit the user streams; the
    // serving relay carries stream r, the rest are residual interference.
    let serving = selected[r];
    let x_serving = &sig.s_blocks[r % sig.s_blocks.len()];
    let g_relay_user = mode.reduce(vec_norm(
        &chan.relay_to_user(serving, r).mul_vec(x_serving)?,
    ));
    let n_r = chan.relay_to_user(serving, r).rows();
    let mut resid = vec![Complex64::new(0.0, 0.0); n_r];
    for (q, &k) in selected.iter().enumerate() {
        if q == r {
            continue;
        }
        let contrib = chan
            .relay_to_user(k, r)
            .mul_vec(&sig.s_blocks[q % sig.s_blocks.len()])?;
        for (acc, v) in resid.iter_mut().zip(contrib) {
            *acc += v;
        }
    }
    let g_resid_user = mode.reduce(vec_norm(&resid));

    Ok(LinkGammas {
        g_src_relay,
        g_intf_relay,
        g_jam_relay,
        g_src_eave,
        g_intf_eave,
        g_jam_eave,
        g_relay_user,
        g_resid_user,
    })
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Scalar SINR at a receiving relay. `phi` is the cancellation factor:
/// 0 means the inter-relay interference has been cancelled, 1 keeps it.
pub fn sinr_relay(g: &LinkGammas, phi: u8, noise: f64) -> f64 {
    debug_assert!(phi <= 1);
    g.g_src_relay / (f64::from(phi) * g.g_jam_relay + g.g_intf_relay + noise)
}

/// Scalar SINR at an eavesdropper; jamming always reaches it, so the form
/// is identical with and without cancellation at the relays.
pub fn sinr_eave(g: &LinkGammas, noise: f64) -> f64 {
    g.g_src_eave / (g.g_jam_eave + g.g_intf_eave + noise)
}

/// Scalar SINR at a legitimate user on the second hop.
pub fn sinr_user(g: &LinkGammas, noise: f64) -> f64 {
    g.g_relay_user / (g.g_resid_user + noise)
}

/// Cancellation feasibility factor: 0 when
/// `|det((H_i H_i^H + I)^(-1) H_Ki H_Ki^H)| >= gamma0` (interference is
/// strong enough to estimate and subtract), 1 otherwise.
pub fn ic_feasibility(
    h_i: &ComplexMatrix,
    h_ki_stacked: &ComplexMatrix,
    gamma0: f64,
) -> Result<u8> {
    if gamma0 <= 0.0 {
        return Err(Error::InvalidArgument(
            "ic_feasibility: gamma0 must be positive".into(),
        ));
    }
    let a = h_i
        .gram()
        .add(&ComplexMatrix::identity(h_i.rows()))?;
    let b = h_ki_stacked.gram();
    // det(A^(-1) B) = det(B) / det(A); A is Hermitian PD by construction
    let det_a = a.det()?.re;
    let det_b = b.det()?.norm();
    let ratio = det_b / det_a;
    Ok(if ratio >= gamma0 { 0 } else { 1 })
}

/// `logdet(D + S) - logdet(D)` in bits for Hermitian PD `D` and PSD `S`:
/// the achievable rate of a receiver with interference-plus-noise
/// covariance `D` and desired-signal covariance `S`.
pub fn rate_logdet_ratio(noise_intf: &ComplexMatrix, signal: &ComplexMatrix) -> Result<f64> {
    let total = noise_intf.add(signal)?;
    Ok(total.log_det_herm()? - noise_intf.log_det_herm()?)
}

/// Achievable rate of one user on the relay-to-user hop.
///
/// `packet_power` is the trace-normalized power of the stored packets the
/// forwarding relays retransmit, which carries the first-hop transmit power
/// into the second hop; `relay_power` is the total power budget of the
/// forwarding group, spread over its `|forwarding| * n_k` antennas.
pub fn rate_user_mimo(
    chan: &ChannelRealization,
    cfg: &SystemConfig,
    forwarding: &[usize],
    user: usize,
    packet_power: f64,
    relay_power: f64,
) -> Result<f64> {
    if forwarding.is_empty() {
        return Err(Error::InvalidArgument(
            "rate_user_mimo: forwarding set must be non-empty".into(),
        ));
    }
    let g = chan.stack_relays_to_user(user, forwarding)?;
    let scale = relay_power / (forwarding.len() * cfg.n_k) as f64 * packet_power;
    let signal = g.gram().scale_re(scale);
    rate_logdet_ratio(&ComplexMatrix::identity(g.rows()), &signal)
}

/// Achievable rate of eavesdropper `e` on the source hop:
/// `logdet(I + (I + Delta)^(-1) B)` with `B` the precoded source covariance
/// seen at the eavesdropper and `Delta` the aggregate jamming covariance.
#[allow(clippy::too_many_arguments)]
pub fn rate_eave_mimo(
    chan: &ChannelRealization,
    prec: &Precoder,
    cfg: &SystemConfig,
    jam_set: &[usize],
    e: usize,
    src_power: f64,
    jam_power: f64,
    jam_signal_power: f64,
) -> Result<f64> {
    let h_e = chan.source_to_eave(e);
    let hu = h_e.matmul(prec.full())?;
    let b = hu.gram().scale_re(src_power / cfg.n_t as f64);
    let mut d = ComplexMatrix::identity(h_e.rows());
    if !jam_set.is_empty() {
        let h_ke = chan.stack_relays_to_eave(e, jam_set)?;
        let scale = jam_power / (jam_set.len() * cfg.n_k) as f64 * jam_signal_power;
        d = d.add(&h_ke.gram().scale_re(scale))?;
    }
    rate_logdet_ratio(&d, &b)
}

/// Achievable rate of eavesdropper `e` on the relay hop, where the
/// forwarding relays leak stored packets and the jamming relays cover them.
#[allow(clippy::too_many_arguments)]
pub fn rate_eave_relay_hop(
    chan: &ChannelRealization,
    cfg: &SystemConfig,
    forwarding: &[usize],
    jam_set: &[usize],
    e: usize,
    fwd_power: f64,
    packet_power: f64,
    jam_power: f64,
    jam_signal_power: f64,
) -> Result<f64> {
    if forwarding.is_empty() {
        return Err(Error::InvalidArgument(
            "rate_eave_relay_hop: forwarding set must be non-empty".into(),
        ));
    }
    let g_e = chan.stack_relays_to_eave(e, forwarding)?;
    let scale = fwd_power / (forwarding.len() * cfg.n_k) as f64 * packet_power;
    let b = g_e.gram().scale_re(scale);
    let mut d = ComplexMatrix::identity(g_e.rows());
    if !jam_set.is_empty() {
        let h_ke = chan.stack_relays_to_eave(e, jam_set)?;
        let jscale = jam_power / (jam_set.len() * cfg.n_k) as f64 * jam_signal_power;
        d = d.add(&h_ke.gram().scale_re(jscale))?;
    }
    rate_logdet_ratio(&d, &b)
}

/// One (user, eavesdropper) rate pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatePair {
    pub rate_user: f64,
    pub rate_eave: f64,
}

/// Sum of per-pair hinged differences `[R_r - R_e]^+`; each eavesdropper
/// listens to its like-indexed user, so pairs arrive already matched.
pub fn secrecy_rate(pairs: &[RatePair]) -> f64 {
    pairs
        .iter()
        .map(|p| (p.rate_user - p.rate_eave).max(0.0))
        .sum()
}

/// Secrecy capacity of a single-antenna relay chain.
pub fn secrecy_capacity_siso(
    h_sr: Complex64,
    h_rd: Complex64,
    h_se: Complex64,
    h_re: Complex64,
    p: f64,
) -> f64 {
    let num = (1.0 + p * h_sr.norm_sqr()).min(1.0 + p * h_rd.norm_sqr());
    let den = 1.0 + p * h_se.norm_sqr() + p * h_re.norm_sqr();
    (0.5 * (num / den).log2()).max(0.0)
}

/// Secrecy capacity of a MIMO relay chain from its determinant terms:
/// `M_i` and `M_r` are `det(I + .)` for the two hops, `gamma_e_logdet` is
/// the eavesdropper's `log2 det(I + Gamma_e)`.
pub fn secrecy_capacity_mimo(m_i: f64, m_r: f64, gamma_e_logdet: f64) -> Result<f64> {
    if m_i <= 0.0 || m_r <= 0.0 {
        return Err(Error::Domain(format!(
            "secrecy_capacity_mimo: determinant terms must be positive, got {m_i}, {m_r}"
        )));
    }
    Ok((0.5 * (m_i.min(m_r).log2() - gamma_e_logdet)).max(0.0))
}

/// Ceiling on the secrecy-rate improvement buffers can deliver:
/// half the log-ratio of the best available first-hop determinant to the
/// previously experienced second-hop determinant.
pub fn buffer_gain_bound(m_best: f64, m_prev: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if m_best < 1.0 - SLACK || m_prev < 1.0 - SLACK {
        return Err(Error::Domain(format!(
            "buffer_gain_bound: arguments must be det(I + PSD) >= 1, got {m_best}, {m_prev}"
        )));
    }
    Ok((0.5 * (m_best.log2() - m_prev.log2())).max(0.0))
}

/// Secrecy rate of the opportunistic scheme relative to a half-duplex
/// baseline `base_secrecy`.
///
/// With cancellation the rate doubles. Without it, the first-hop signal
/// covariance `signal_cov` is deflated by the inter-relay interference
/// covariance `iri_cov`, and the doubled rate is reduced by the
/// corresponding log-det penalty.
pub fn opportunistic_rates(
    base_secrecy: f64,
    ic: bool,
    matrices: Option<(&ComplexMatrix, &ComplexMatrix)>,
) -> Result<f64> {
    if ic {
        return Ok(2.0 * base_secrecy);
    }
    let (signal_cov, iri_cov) = matrices.ok_or_else(|| {
        Error::InvalidArgument(
            "opportunistic_rates: the no-cancellation form needs the signal and IRI covariances"
                .into(),
        )
    })?;
    let n = signal_cov.rows();
    let eye = ComplexMatrix::identity(n);
    let clean = eye.add(signal_cov)?.log_det_herm()?;
    let deflated = eye.add(iri_cov)?.add(signal_cov)?.log_det_herm()?
        - eye.add(iri_cov)?.log_det_herm()?;
    Ok(2.0 * base_secrecy - (clean - deflated))
}
