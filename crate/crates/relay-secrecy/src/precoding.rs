//! Zero-forcing precoder construction and source-side signal/covariance
//! assembly.

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;
use num_complex::Complex64;
use rand::Rng;

/// Residual tolerance for `H * U = I` on accepted precoders.
pub const ZF_RESIDUAL_TOL: f64 = 1e-9;

/// Zero-forcing precoder for a stacked destination channel.
#[derive(Debug, Clone)]
pub struct Precoder {
    u_full: ComplexMatrix,
    block_cols: usize,
}

impl Precoder {
    /// Wraps an existing precoding matrix without the zero-forcing
    /// construction or residual check.
    pub fn from_matrix(u_full: ComplexMatrix, block_cols: usize) -> Self {
        assert!(
            block_cols > 0 && u_full.cols() % block_cols == 0,
            "precoder columns must tile into blocks"
        );
        Self { u_full, block_cols }
    }

    /// Full precoding matrix, `n_t x (blocks * block_cols)`.
    pub fn full(&self) -> &ComplexMatrix {
        &self.u_full
    }

    pub fn num_blocks(&self) -> usize {
        self.u_full.cols() / self.block_cols
    }

    pub fn block_cols(&self) -> usize {
        self.block_cols
    }

    /// Per-destination block `U_i`, `n_t x block_cols`.
    pub fn block(&self, i: usize) -> ComplexMatrix {
        assert!(i < self.num_blocks(), "precoder block out of range");
        ComplexMatrix::from_fn(self.u_full.rows(), self.block_cols, |r, c| {
            self.u_full.get(r, i * self.block_cols + c)
        })
    }
}

/// Builds `U = H^H (H H^H)^(-1)` so that `H * U = I`, sliced into
/// per-destination blocks of `block_cols` columns.
pub fn zf_precoder(h_stacked: &ComplexMatrix, block_cols: usize) -> Result<Precoder> {
    if h_stacked.rows() > h_stacked.cols() {
        return Err(Error::Shape(format!(
            "zf_precoder: stacked channel has more rows than columns ({}x{})",
            h_stacked.rows(),
            h_stacked.cols()
        )));
    }
    if block_cols == 0 || h_stacked.rows() % block_cols != 0 {
        return Err(Error::Shape(format!(
            "zf_precoder: row count {} is not a multiple of block size {block_cols}",
            h_stacked.rows()
        )));
    }
    let hh = h_stacked.gram();
    let inv = hh.inverse()?;
    let u_full = h_stacked.conj_transpose().matmul(&inv)?;
    let residual = h_stacked
        .matmul(&u_full)?
        .sub(&ComplexMatrix::identity(h_stacked.rows()))?
        .frobenius_norm();
    if residual >= ZF_RESIDUAL_TOL {
        return Err(Error::Singular {
            cond: residual / f64::EPSILON,
        });
    }
    Ok(Precoder { u_full, block_cols })
}

/// Expectation-form desired and interference-plus-noise covariances for
/// one destination block: `r_d = U_i U_i^H` and
/// `r_i = I + sum_{j != i} U_j U_j^H`, both on the transmit-antenna space.
///
/// The receiver-side noise enters as the identity term so `r_i` stays
/// positive definite for any block shapes.
pub fn signal_covariances(prec: &Precoder, active_index: usize) -> (ComplexMatrix, ComplexMatrix) {
    assert!(
        active_index < prec.num_blocks(),
        "active block out of range"
    );
    let n_t = prec.full().rows();
    let r_d = prec.block(active_index).gram();
    let mut r_i = ComplexMatrix::identity(n_t);
    for j in 0..prec.num_blocks() {
        if j != active_index {
            r_i = r_i.add(&prec.block(j).gram()).expect("covariance dims");
        }
    }
    (r_d, r_i)
}

/// Unit-power symbol vectors for each user plus unit-power jamming vectors
/// for each jamming relay.
#[derive(Debug, Clone)]
pub struct SignalSet {
    /// Per-user symbol blocks, each of length `n_i`.
    pub s_blocks: Vec<Vec<Complex64>>,
    /// Per-jammer vectors, each of length `n_k`.
    pub j_blocks: Vec<Vec<Complex64>>,
}

impl SignalSet {
    /// All user blocks concatenated, length `m_users * n_i`.
    pub fn stacked_symbols(&self) -> Vec<Complex64> {
        self.s_blocks.iter().flatten().copied().collect()
    }
}

/// Draws fresh unit-power signal and jamming vectors.
pub fn draw_signals<R: Rng>(cfg: &SystemConfig, rng: &mut R) -> SignalSet {
    let s_blocks = (0..cfg.m_users)
        .map(|_| crate::channel::draw_gaussian_vector(cfg.n_i, rng))
        .collect();
    let j_blocks = (0..cfg.k_jammers)
        .map(|_| crate::channel::draw_gaussian_vector(cfg.n_k, rng))
        .collect();
    SignalSet { s_blocks, j_blocks }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::draw_gaussian_matrix;
    use crate::seeding::slot_rng;

    #[test]
    fn identity_channel_gives_identity_precoder() {
        let h = ComplexMatrix::identity(4);
        let p = zf_precoder(&h, 2).unwrap();
        assert!(p.full().sub(&ComplexMatrix::identity(4)).unwrap().frobenius_norm() < 1e-12);
        assert_eq!(p.num_blocks(), 2);
    }

    #[test]
    fn diagonal_channel_inverts_analytically() {
        let h = ComplexMatrix::diag(&[Complex64::new(2.0, 0.0), Complex64::new(4.0, 0.0)]);
        let p = zf_precoder(&h, 1).unwrap();
        assert!((p.full().get(0, 0).re - 0.5).abs() < 1e-12);
        assert!((p.full().get(1, 1).re - 0.25).abs() < 1e-12);
    }

    #[test]
    fn random_wide_channel_meets_residual() {
        for t in 0..50u64 {
            let mut rng = slot_rng(42, t, 0);
            let h = draw_gaussian_matrix(4, 6, &mut rng);
            let p = zf_precoder(&h, 2).unwrap();
            let residual = h
                .matmul(p.full())
                .unwrap()
                .sub(&ComplexMatrix::identity(4))
                .unwrap()
                .frobenius_norm();
            assert!(residual < ZF_RESIDUAL_TOL, "residual {residual}");
        }
    }

    #[test]
    fn rank_deficient_channel_errors() {
        let mut h = ComplexMatrix::zeros(2, 4);
        for j in 0..4 {
            h.set(0, j, Complex64::new(1.0, 0.0));
            h.set(1, j, Complex64::new(1.0, 0.0));
        }
        assert!(zf_precoder(&h, 1).is_err());
    }

    #[test]
    fn single_block_interference_is_noise_only() {
        let h = ComplexMatrix::identity(3);
        let p = zf_precoder(&h, 3).unwrap();
        let (_r_d, r_i) = signal_covariances(&p, 0);
        assert!(r_i.sub(&ComplexMatrix::identity(3)).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn orthonormal_blocks_have_projector_covariances() {
        let h = ComplexMatrix::identity(4);
        let p = zf_precoder(&h, 2).unwrap();
        let (r_d, r_i) = signal_covariances(&p, 0);
        assert!((r_d.trace().re - 2.0).abs() < 1e-12);
        // r_d is the projector on the first two coordinates, r_i adds the
        // complementary projector to the identity
        assert!((r_i.trace().re - 6.0).abs() < 1e-12);
    }

    #[test]
    fn covariance_bookkeeping_closes() {
        let mut rng = slot_rng(43, 0, 0);
        let h = draw_gaussian_matrix(4, 6, &mut rng);
        let p = zf_precoder(&h, 2).unwrap();
        let (r_d, r_i) = signal_covariances(&p, 1);
        let total = r_d
            .add(&r_i)
            .unwrap()
            .sub(&ComplexMatrix::identity(6))
            .unwrap();
        let direct = p.full().gram();
        assert!(total.sub(&direct).unwrap().frobenius_norm() < 1e-10);
    }

    #[test]
    fn interference_covariance_is_hermitian_psd() {
        let mut rng = slot_rng(44, 0, 0);
        let h = draw_gaussian_matrix(6, 6, &mut rng);
        let p = zf_precoder(&h, 2).unwrap();
        let (_r_d, r_i) = signal_covariances(&p, 0);
        let herm = r_i.sub(&r_i.conj_transpose()).unwrap().frobenius_norm();
        assert!(herm < 1e-12);
        let min_eig = r_i.hermitian_eigenvalues().unwrap()[0];
        assert!(min_eig > 0.0, "r_i must be positive definite, min {min_eig}");
    }

    #[test]
    fn signals_are_seed_deterministic_with_unit_power() {
        let cfg = SystemConfig::mimo_preset();
        let mut a = slot_rng(1, 0, 0);
        let mut b = slot_rng(1, 0, 0);
        let sa = draw_signals(&cfg, &mut a);
        let sb = draw_signals(&cfg, &mut b);
        assert_eq!(sa.s_blocks, sb.s_blocks);
        assert_eq!(sa.j_blocks, sb.j_blocks);
        assert_eq!(sa.s_blocks.len(), cfg.m_users);
        assert_eq!(sa.s_blocks[0].len(), cfg.n_i);

        let mut acc = 0.0;
        let mut count = 0usize;
        for t in 0..20_000u64 {
            let mut rng = slot_rng(2, t, 0);
            let s = draw_signals(&cfg, &mut rng);
            for b in &s.s_blocks {
                acc += b.iter().map(|z| z.norm_sqr()).sum::<f64>();
                count += b.len();
            }
        }
        let power = acc / count as f64;
        assert!((power - 1.0).abs() < 0.02, "per-entry power {power}");
    }
}
