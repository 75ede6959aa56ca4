//! Random flat-fading channel generation for one time slot, in
//! uncorrelated and transmit-correlated variants.
//!
//! Draw order is fixed (relays ascending, then eavesdroppers, then the
//! relay-to-user, relay-to-eavesdropper and relay-to-relay maps in
//! lexicographic key order) so a given generator state always produces the
//! same realization.

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::numerics::{stack_horizontal, stack_vertical, ComplexMatrix};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use std::f64::consts::FRAC_1_SQRT_2;

/// One draw of every channel matrix in the network for one time slot.
#[derive(Debug, Clone)]
pub struct ChannelRealization {
    /// Source to relay i, `n_i x n_t`.
    pub h_relays: Vec<ComplexMatrix>,
    /// Source to eavesdropper e, `n_e x n_t`.
    pub h_eaves: Vec<ComplexMatrix>,
    /// Relay k to user r, `n_r x n_k`, flat index `k * m_users + r`.
    h_relay_user: Vec<ComplexMatrix>,
    /// Relay k to eavesdropper e, `n_e x n_k`, flat index `k * n_eaves + e`.
    h_relay_eave: Vec<ComplexMatrix>,
    /// Relay k to relay i, `n_i x n_k`, flat index `k * s_total + i`;
    /// the diagonal (k == i) is never drawn and never readable.
    h_relay_relay: Vec<Option<ComplexMatrix>>,
    s_total: usize,
    m_users: usize,
    n_eaves: usize,
}

impl ChannelRealization {
    pub fn source_to_relay(&self, i: usize) -> &ComplexMatrix {
        &self.h_relays[i]
    }

    pub fn source_to_eave(&self, e: usize) -> &ComplexMatrix {
        &self.h_eaves[e]
    }

    pub fn relay_to_user(&self, k: usize, r: usize) -> &ComplexMatrix {
        &self.h_relay_user[k * self.m_users + r]
    }

    pub fn relay_to_eave(&self, k: usize, e: usize) -> &ComplexMatrix {
        &self.h_relay_eave[k * self.n_eaves + e]
    }

    /// Panics if `k == i`: a relay has no channel to itself.
    pub fn relay_to_relay(&self, k: usize, i: usize) -> &ComplexMatrix {
        self.h_relay_relay[k * self.s_total + i]
            .as_ref()
            .expect("relay-to-relay channel requested for k == i")
    }

    /// Source channels of `set` stacked vertically, `|set| * n_i x n_t`.
    pub fn stack_source_to_relays(&self, set: &[usize]) -> Result<ComplexMatrix> {
        let blocks: Vec<&ComplexMatrix> = set.iter().map(|&i| self.source_to_relay(i)).collect();
        stack_vertical(&blocks)
    }

    /// Channels from `set` into user `r` stacked horizontally,
    /// `n_r x |set| * n_k`.
    pub fn stack_relays_to_user(&self, r: usize, set: &[usize]) -> Result<ComplexMatrix> {
        let blocks: Vec<&ComplexMatrix> = set.iter().map(|&k| self.relay_to_user(k, r)).collect();
        stack_horizontal(&blocks)
    }

    /// Channels from `set` into eavesdropper `e` stacked horizontally,
    /// `n_e x |set| * n_k`.
    pub fn stack_relays_to_eave(&self, e: usize, set: &[usize]) -> Result<ComplexMatrix> {
        let blocks: Vec<&ComplexMatrix> = set.iter().map(|&k| self.relay_to_eave(k, e)).collect();
        stack_horizontal(&blocks)
    }

    /// Channels from jammers in `set` into relay `i` stacked horizontally,
    /// `n_i x |set| * n_k`; `set` must not contain `i`.
    pub fn stack_relays_to_relay(&self, i: usize, set: &[usize]) -> Result<ComplexMatrix> {
        let blocks: Vec<&ComplexMatrix> = set.iter().map(|&k| self.relay_to_relay(k, i)).collect();
        stack_horizontal(&blocks)
    }

    /// Replaces one source-to-eavesdropper channel; test scaffolding for
    /// degenerate-leakage scenarios.
    pub fn set_source_to_eave(&mut self, e: usize, m: ComplexMatrix) {
        self.h_eaves[e] = m;
    }

    /// Replaces one source-to-relay channel.
    pub fn set_source_to_relay(&mut self, i: usize, m: ComplexMatrix) {
        self.h_relays[i] = m;
    }

    /// Replaces one relay-to-user channel.
    pub fn set_relay_to_user(&mut self, k: usize, r: usize, m: ComplexMatrix) {
        self.h_relay_user[k * self.m_users + r] = m;
    }
}

/// i.i.d. unit-variance complex Gaussian matrix: real and imaginary parts
/// are each Normal(0, 1/2).
pub fn draw_gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            m.set(i, j, Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2));
        }
    }
    m
}

/// Unit-power complex Gaussian vector of the given length.
pub fn draw_gaussian_vector<R: Rng>(len: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        v.push(Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2));
    }
    v
}

/// Exponential transmit correlation matrix: entry (i, j) is `r^(j - i)` for
/// i <= j with conjugate symmetry below the diagonal.
pub fn exponential_correlation(n: usize, r: Complex64) -> Result<ComplexMatrix> {
    if r.norm() > 1.0 {
        return Err(Error::Domain(format!(
            "exponential_correlation: |r| <= 1 violated, got {}",
            r.norm()
        )));
    }
    let mut m = ComplexMatrix::identity(n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = r.powu((j - i) as u32);
            m.set(i, j, v);
            m.set(j, i, v.conj());
        }
    }
    Ok(m)
}

/// Applies transmit-side correlation: `H * R_t^(1/2)`. Receive-side
/// correlation is identity in the scenarios modeled here.
pub fn correlate(h: &ComplexMatrix, r_t: &ComplexMatrix) -> Result<ComplexMatrix> {
    if h.cols() != r_t.rows() {
        return Err(Error::Shape(format!(
            "correlate: H is {}x{} but R_t is {}x{}",
            h.rows(),
            h.cols(),
            r_t.rows(),
            r_t.cols()
        )));
    }
    let sqrt = r_t.psd_sqrt()?;
    h.matmul(&sqrt)
}

/// Draws every channel matrix of one slot. With `correlated`, transmit-side
/// correlation of the appropriate width (source array or relay array) is
/// applied to each matrix after the uncorrelated draw.
pub fn draw_realization<R: Rng>(
    cfg: &SystemConfig,
    correlated: bool,
    rng: &mut R,
) -> Result<ChannelRealization> {
    let sqrt_src = if correlated {
        Some(exponential_correlation(cfg.n_t, cfg.corr_r)?.psd_sqrt()?)
    } else {
        None
    };
    let sqrt_relay = if correlated {
        Some(exponential_correlation(cfg.n_k, cfg.corr_r)?.psd_sqrt()?)
    } else {
        None
    };
    let apply = |h: ComplexMatrix, sqrt: &Option<ComplexMatrix>| -> Result<ComplexMatrix> {
        match sqrt {
            Some(s) => h.matmul(s),
            None => Ok(h),
        }
    };

    let mut h_relays = Vec::with_capacity(cfg.s_total);
    for _ in 0..cfg.s_total {
        h_relays.push(apply(draw_gaussian_matrix(cfg.n_i, cfg.n_t, rng), &sqrt_src)?);
    }
    let mut h_eaves = Vec::with_capacity(cfg.n_eaves);
    for _ in 0..cfg.n_eaves {
        h_eaves.push(apply(draw_gaussian_matrix(cfg.n_e, cfg.n_t, rng), &sqrt_src)?);
    }
    let mut h_relay_user = Vec::with_capacity(cfg.s_total * cfg.m_users);
    for _k in 0..cfg.s_total {
        for _r in 0..cfg.m_users {
            h_relay_user.push(apply(
                draw_gaussian_matrix(cfg.n_r, cfg.n_k, rng),
                &sqrt_relay,
            )?);
        }
    }
    let mut h_relay_eave = Vec::with_capacity(cfg.s_total * cfg.n_eaves);
    for _k in 0..cfg.s_total {
        for _e in 0..cfg.n_eaves {
            h_relay_eave.push(apply(
                draw_gaussian_matrix(cfg.n_e, cfg.n_k, rng),
                &sqrt_relay,
            )?);
        }
    }
    let mut h_relay_relay = Vec::with_capacity(cfg.s_total * cfg.s_total);
    for k in 0..cfg.s_total {
        for i in 0..cfg.s_total {
            if k == i {
                h_relay_relay.push(None);
            } else {
                h_relay_relay.push(Some(apply(
                    draw_gaussian_matrix(cfg.n_i, cfg.n_k, rng),
                    &sqrt_relay,
                )?));
            }
        }
    }

    Ok(ChannelRealization {
        h_relays,
        h_eaves,
        h_relay_user,
        h_relay_eave,
        h_relay_relay,
        s_total: cfg.s_total,
        m_users: cfg.m_users,
        n_eaves: cfg.n_eaves,
    })
}
