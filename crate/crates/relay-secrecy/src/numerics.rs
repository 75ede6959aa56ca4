//! Dense complex linear algebra kernel used by every other module.
//!
//! All matrices are small (a handful of antennas per node), so the kernels
//! favour plain row-major loops with a fixed accumulation order over any
//! BLAS delegation: identical inputs must produce bit-identical outputs
//! because whole-run reproducibility under a fixed seed is part of the
//! output contract.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// Condition-number cutoff above which `inverse` refuses to answer.
pub const MAX_CONDITION: f64 = 1e12;

/// Hermitian symmetry tolerance for [`ComplexMatrix::psd_sqrt`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Eigenvalue floor below which a nominally PSD matrix is rejected.
pub const PSD_EIG_TOL: f64 = -1e-10;

/// Dense row-major matrix of complex scalars.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Complex64>(rows: usize, cols: usize, mut f: F) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds a matrix from nested real/imag pairs; test and example helper.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let r = rows.len();
        let c = rows[0].len();
        Self::from_fn(r, c, |i, j| rows[i][j])
    }

    pub fn diag(values: &[Complex64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, *v);
        }
        m
    }

    /// Column vector from a slice.
    pub fn column(values: &[Complex64]) -> Self {
        Self::from_fn(values.len(), 1, |i, _| values[i])
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Conjugate transpose A^H.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// Standard matrix product; accumulation is row-major, left-to-right.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "matmul: ({}x{}) * ({}x{})",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "add: ({}x{}) + ({}x{})",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(rhs.entries.iter()) {
            *a += *b;
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::Shape(format!(
                "sub: ({}x{}) - ({}x{})",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(rhs.entries.iter()) {
            *a -= *b;
        }
        Ok(out)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = self.clone();
        for a in out.entries.iter_mut() {
            *a *= c;
        }
        out
    }

    pub fn scale_re(&self, c: f64) -> Self {
        self.scale(Complex64::new(c, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        let n = self.rows.min(self.cols);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..n {
            acc += self.get(i, i);
        }
        acc
    }

    /// Square root of the sum of squared entry magnitudes.
    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// A * A^H, always Hermitian PSD.
    pub fn gram(&self) -> Self {
        // matmul with the conjugate transpose; cannot fail on shapes.
        self.matmul(&self.conj_transpose()).expect("gram dims")
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if self.cols != v.len() {
            return Err(Error::Shape(format!(
                "mul_vec: ({}x{}) * ({})",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for i in 0..self.rows {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..self.cols {
                acc += self.get(i, k) * v[k];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    /// Determinant via pivoted LU decomposition; exact for 1x1.
    pub fn det(&self) -> Result<Complex64> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "det requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 1 {
            return Ok(self.get(0, 0));
        }
        let mut lu = self.entries.clone();
        let mut sign = 1.0;
        for k in 0..n {
            // partial pivot on the largest magnitude in column k
            let mut p = k;
            let mut best = lu[k * n + k].norm_sqr();
            for r in (k + 1)..n {
                let mag = lu[r * n + k].norm_sqr();
                if mag > best {
                    best = mag;
                    p = r;
                }
            }
            if best == 0.0 {
                return Ok(Complex64::new(0.0, 0.0));
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            for r in (k + 1)..n {
                let factor = lu[r * n + k] / pivot;
                lu[r * n + k] = factor;
                for j in (k + 1)..n {
                    let sub = factor * lu[k * n + j];
                    lu[r * n + j] -= sub;
                }
            }
        }
        let mut det = Complex64::new(sign, 0.0);
        for k in 0..n {
            det *= lu[k * n + k];
        }
        Ok(det)
    }

    /// Inverse via pivoted LU with a 1-norm condition estimate guard.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "inverse requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut lu = self.entries.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let mut p = k;
            let mut best = lu[k * n + k].norm_sqr();
            for r in (k + 1)..n {
                let mag = lu[r * n + k].norm_sqr();
                if mag > best {
                    best = mag;
                    p = r;
                }
            }
            if best == 0.0 {
                return Err(Error::Singular { cond: f64::INFINITY });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[k * n + k];
            for r in (k + 1)..n {
                let factor = lu[r * n + k] / pivot;
                lu[r * n + k] = factor;
                for j in (k + 1)..n {
                    let sub = factor * lu[k * n + j];
                    lu[r * n + j] -= sub;
                }
            }
        }

        // solve A x = e_c for each unit vector, columns in ascending order
        let mut inv = Self::zeros(n, n);
        let mut work = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            for (i, w) in work.iter_mut().enumerate() {
                *w = if perm[i] == c {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
            }
            // forward substitution with unit lower triangle
            for i in 1..n {
                let mut acc = work[i];
                for j in 0..i {
                    acc -= lu[i * n + j] * work[j];
                }
                work[i] = acc;
            }
            // back substitution
            for i in (0..n).rev() {
                let mut acc = work[i];
                for j in (i + 1)..n {
                    acc -= lu[i * n + j] * work[j];
                }
                work[i] = acc / lu[i * n + i];
            }
            for i in 0..n {
                inv.set(i, c, work[i]);
            }
        }

        let cond = self.norm_one() * inv.norm_one();
        if !cond.is_finite() || cond > MAX_CONDITION {
            return Err(Error::Singular { cond });
        }
        Ok(inv)
    }

    /// Maximum absolute column sum.
    fn norm_one(&self) -> f64 {
        let mut best: f64 = 0.0;
        for j in 0..self.cols {
            let mut s = 0.0;
            for i in 0..self.rows {
                s += self.get(i, j).norm();
            }
            best = best.max(s);
        }
        best
    }

    /// Base-2 log-determinant of a Hermitian positive-definite matrix,
    /// computed through a Cholesky factorization so the paper's nested
    /// determinant ratios stay finite at high transmit power.
    pub fn log_det_herm(&self) -> Result<f64> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "log_det_herm requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut l = vec![Complex64::new(0.0, 0.0); n * n];
        let mut log2_det = 0.0;
        for i in 0..n {
            for j in 0..=i {
                let mut acc = self.get(i, j);
                for k in 0..j {
                    acc -= l[i * n + k] * l[j * n + k].conj();
                }
                if i == j {
                    let d = acc.re;
                    if d <= 0.0 || !d.is_finite() {
                        return Err(Error::Domain(format!(
                            "log_det_herm: matrix is not positive definite (pivot {d:.3e} at {i})"
                        )));
                    }
                    let root = d.sqrt();
                    l[i * n + i] = Complex64::new(root, 0.0);
                    log2_det += 2.0 * root.log2();
                } else {
                    l[i * n + j] = acc / l[j * n + j];
                }
            }
        }
        Ok(log2_det)
    }

    /// Eigenvalues of a Hermitian matrix, ascending.
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<f64>> {
        let (vals, _) = self.hermitian_eigen()?;
        Ok(vals)
    }

    /// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
    ///
    /// Returns eigenvalues ascending together with the unitary matrix of
    /// eigenvectors (columns). Deterministic sweep order.
    pub fn hermitian_eigen(&self) -> Result<(Vec<f64>, ComplexMatrix)> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "hermitian_eigen requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut v = Self::identity(n);
        if n == 1 {
            return Ok((vec![a.get(0, 0).re], v));
        }
        let scale = self.frobenius_norm().max(1.0);
        let tol = 1e-14 * scale;
        for _sweep in 0..64 {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += a.get(p, q).norm_sqr();
                }
            }
            if off.sqrt() <= tol {
                break;
            }
            for p in 0..n {
                for q in (p + 1)..n {
                    let apq = a.get(p, q);
                    if apq.norm() <= 1e-300 {
                        continue;
                    }
                    // phase that makes the off-diagonal entry real
                    let phase = apq / Complex64::new(apq.norm(), 0.0);
                    let app = a.get(p, p).re;
                    let aqq = a.get(q, q).re;
                    let apq_mag = apq.norm();
                    // classical real Jacobi angle on the phase-aligned 2x2 block
                    let theta = 0.5 * (2.0 * apq_mag).atan2(app - aqq);
                    let c = theta.cos();
                    let s = theta.sin();
                    let cs = Complex64::new(c, 0.0);
                    let sn = phase * Complex64::new(s, 0.0);
                    // apply the rotation G^H A G with G acting on columns p,q
                    for i in 0..n {
                        let aip = a.get(i, p);
                        let aiq = a.get(i, q);
                        a.set(i, p, aip * cs + aiq * sn.conj());
                        a.set(i, q, -(aip * sn) + aiq * cs);
                    }
                    for j in 0..n {
                        let apj = a.get(p, j);
                        let aqj = a.get(q, j);
                        a.set(p, j, apj * cs + aqj * sn);
                        a.set(q, j, -(apj * sn.conj()) + aqj * cs);
                    }
                    for i in 0..n {
                        let vip = v.get(i, p);
                        let viq = v.get(i, q);
                        v.set(i, p, vip * cs + viq * sn.conj());
                        v.set(i, q, -(vip * sn) + viq * cs);
                    }
                }
            }
        }
        let mut order: Vec<usize> = (0..n).collect();
        let diag: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
        order.sort_by(|&x, &y| diag[x].partial_cmp(&diag[y]).unwrap());
        let vals: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
        let vecs = Self::from_fn(n, n, |i, j| v.get(i, order[j]));
        Ok((vals, vecs))
    }

    /// Hermitian PSD square root via eigendecomposition; negative
    /// eigenvalues within tolerance are clamped to zero.
    pub fn psd_sqrt(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "psd_sqrt requires a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let herm_residual = self.sub(&self.conj_transpose())?.frobenius_norm();
        if herm_residual >= HERMITIAN_TOL {
            return Err(Error::Domain(format!(
                "psd_sqrt: matrix is not Hermitian (residual {herm_residual:.3e})"
            )));
        }
        let (vals, vecs) = self.hermitian_eigen()?;
        if let Some(&min) = vals.first() {
            if min <= PSD_EIG_TOL {
                return Err(Error::Domain(format!(
                    "psd_sqrt: matrix is indefinite (min eigenvalue {min:.3e})"
                )));
            }
        }
        let roots: Vec<Complex64> = vals
            .iter()
            .map(|&l| Complex64::new(l.max(0.0).sqrt(), 0.0))
            .collect();
        let d = Self::diag(&roots);
        let s = vecs.matmul(&d)?.matmul(&vecs.conj_transpose())?;
        // symmetrize to keep the output Hermitian to machine precision
        let sh = s.conj_transpose();
        let mut out = s.add(&sh)?;
        for e in out.entries.iter_mut() {
            *e *= 0.5;
        }
        Ok(out)
    }
}

/// Vertical concatenation; all blocks must share the column count.
pub fn stack_vertical(blocks: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let cols = blocks
        .first()
        .ok_or_else(|| Error::InvalidArgument("stack_vertical: empty block list".into()))?
        .cols();
    let rows: usize = blocks.iter().map(|b| b.rows()).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let mut r0 = 0;
    for b in blocks {
        if b.cols() != cols {
            return Err(Error::Shape(format!(
                "stack_vertical: inconsistent column counts {} vs {}",
                b.cols(),
                cols
            )));
        }
        for i in 0..b.rows() {
            for j in 0..cols {
                out.set(r0 + i, j, b.get(i, j));
            }
        }
        r0 += b.rows();
    }
    Ok(out)
}

/// Horizontal concatenation; all blocks must share the row count.
pub fn stack_horizontal(blocks: &[&ComplexMatrix]) -> Result<ComplexMatrix> {
    let rows = blocks
        .first()
        .ok_or_else(|| Error::InvalidArgument("stack_horizontal: empty block list".into()))?
        .rows();
    let cols: usize = blocks.iter().map(|b| b.cols()).sum();
    let mut out = ComplexMatrix::zeros(rows, cols);
    let mut c0 = 0;
    for b in blocks {
        if b.rows() != rows {
            return Err(Error::Shape(format!(
                "stack_horizontal: inconsistent row counts {} vs {}",
                b.rows(),
                rows
            )));
        }
        for i in 0..rows {
            for j in 0..b.cols() {
                out.set(i, c0 + j, b.get(i, j));
            }
        }
        c0 += b.cols();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut StdRng, rows: usize, cols: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(rows, cols, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    /// Cofactor-expansion determinant, the independent oracle for n <= 5.
    fn det_cofactor(a: &ComplexMatrix) -> Complex64 {
        let n = a.rows();
        if n == 1 {
            return a.get(0, 0);
        }
        let mut acc = c(0.0, 0.0);
        for j in 0..n {
            let minor = ComplexMatrix::from_fn(n - 1, n - 1, |r, col| {
                let src_col = if col < j { col } else { col + 1 };
                a.get(r + 1, src_col)
            });
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += c(sign, 0.0) * a.get(0, j) * det_cofactor(&minor);
        }
        acc
    }

    #[test]
    fn conj_transpose_identity_and_imaginary() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.conj_transpose(), i2);
        let m = ComplexMatrix::from_rows(&[vec![c(0.0, 1.0)]]);
        assert_eq!(m.conj_transpose().get(0, 0), c(0.0, -1.0));
    }

    #[test]
    fn conj_transpose_is_involution() {
        let mut rng = StdRng::seed_from_u64(11);
        let a = random_matrix(&mut rng, 3, 2);
        assert_eq!(a.conj_transpose().conj_transpose(), a);
    }

    #[test]
    fn matmul_identity_and_diagonal() {
        let mut rng = StdRng::seed_from_u64(12);
        let a = random_matrix(&mut rng, 3, 3);
        let prod = a.matmul(&ComplexMatrix::identity(3)).unwrap();
        assert!(prod.sub(&a).unwrap().frobenius_norm() < 1e-15);

        let d = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(2.0, 0.0)]]);
        let v = ComplexMatrix::from_rows(&[vec![c(3.0, 0.0)], vec![c(4.0, 0.0)]]);
        let out = d.matmul(&v).unwrap();
        assert_eq!(out.get(0, 0), c(3.0, 0.0));
        assert_eq!(out.get(1, 0), c(8.0, 0.0));
    }

    #[test]
    fn matmul_conjugate_transpose_identity() {
        let mut rng = StdRng::seed_from_u64(13);
        let a = random_matrix(&mut rng, 4, 4);
        let b = random_matrix(&mut rng, 4, 4);
        let lhs = a.matmul(&b).unwrap().conj_transpose();
        let rhs = b.conj_transpose().matmul(&a.conj_transpose()).unwrap();
        assert!(lhs.sub(&rhs).unwrap().frobenius_norm() < 1e-12);
    }

    #[test]
    fn matmul_shape_mismatch_errors() {
        let a = ComplexMatrix::zeros(2, 3);
        let b = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&b), Err(Error::Shape(_))));
    }

    #[test]
    fn det_trivial_cases() {
        assert_eq!(ComplexMatrix::identity(3).det().unwrap(), c(1.0, 0.0));
        let d = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(3.0, 0.0)]]);
        let det = d.det().unwrap();
        assert!((det - c(6.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn det_matches_cofactor_oracle() {
        let mut rng = StdRng::seed_from_u64(14);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 5, 5);
            let lu = a.det().unwrap();
            let oracle = det_cofactor(&a);
            assert!(
                (lu - oracle).norm() <= 1e-9 * oracle.norm().max(1e-9),
                "lu {lu} vs cofactor {oracle}"
            );
        }
    }

    #[test]
    fn det_is_multiplicative() {
        let mut rng = StdRng::seed_from_u64(15);
        for _ in 0..20 {
            let a = random_matrix(&mut rng, 4, 4);
            let b = random_matrix(&mut rng, 4, 4);
            let dab = a.matmul(&b).unwrap().det().unwrap();
            let prod = a.det().unwrap() * b.det().unwrap();
            assert!((dab - prod).norm() <= 1e-9 * prod.norm().max(1.0));
        }
    }

    #[test]
    fn inverse_trivial_and_residual() {
        let i2 = ComplexMatrix::identity(2);
        assert!(i2.inverse().unwrap().sub(&i2).unwrap().frobenius_norm() < 1e-15);

        let s = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0)]]);
        assert_eq!(s.inverse().unwrap().get(0, 0), c(0.5, 0.0));

        let mut rng = StdRng::seed_from_u64(16);
        for _ in 0..20 {
            // I + A A^H is always well-conditioned enough here
            let a = random_matrix(&mut rng, 4, 4);
            let m = ComplexMatrix::identity(4).add(&a.gram()).unwrap();
            let inv = m.inverse().unwrap();
            let residual = m
                .matmul(&inv)
                .unwrap()
                .sub(&ComplexMatrix::identity(4))
                .unwrap()
                .frobenius_norm();
            assert!(residual < 1e-9, "residual {residual}");
        }
    }

    #[test]
    fn inverse_det_product_is_one() {
        let mut rng = StdRng::seed_from_u64(17);
        let a = random_matrix(&mut rng, 4, 4);
        let m = ComplexMatrix::identity(4).add(&a.gram()).unwrap();
        let p = m.det().unwrap() * m.inverse().unwrap().det().unwrap();
        assert!((p - c(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn inverse_rejects_singular() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(2.0, 0.0), c(4.0, 0.0)],
        ]);
        assert!(matches!(m.inverse(), Err(Error::Singular { .. })));
    }

    #[test]
    fn frobenius_norm_cases() {
        let z = ComplexMatrix::zeros(3, 2);
        assert_eq!(z.frobenius_norm(), 0.0);
        let m = ComplexMatrix::from_rows(&[vec![c(3.0, 0.0), c(4.0, 0.0)]]);
        assert!((m.frobenius_norm() - 5.0).abs() < 1e-15);
    }

    #[test]
    fn frobenius_norm_matches_trace_identity() {
        let mut rng = StdRng::seed_from_u64(18);
        let a = random_matrix(&mut rng, 3, 4);
        let tr = a.conj_transpose().matmul(&a).unwrap().trace().re;
        let n2 = a.frobenius_norm().powi(2);
        assert!((tr - n2).abs() <= 1e-12 * n2.max(1.0));
    }

    #[test]
    fn psd_sqrt_identity_and_diagonal() {
        let i3 = ComplexMatrix::identity(3);
        assert!(i3.psd_sqrt().unwrap().sub(&i3).unwrap().frobenius_norm() < 1e-12);

        let d = ComplexMatrix::from_rows(&[vec![c(4.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(9.0, 0.0)]]);
        let s = d.psd_sqrt().unwrap();
        assert!((s.get(0, 0) - c(2.0, 0.0)).norm() < 1e-10);
        assert!((s.get(1, 1) - c(3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn psd_sqrt_reconstructs_random_gram() {
        let mut rng = StdRng::seed_from_u64(19);
        for _ in 0..10 {
            let a = random_matrix(&mut rng, 4, 4);
            let r = a.gram();
            let s = r.psd_sqrt().unwrap();
            let herm = s.sub(&s.conj_transpose()).unwrap().frobenius_norm();
            assert!(herm < 1e-10);
            let recon = s.matmul(&s).unwrap().sub(&r).unwrap().frobenius_norm();
            assert!(recon < 1e-8, "reconstruction residual {recon}");
        }
    }

    #[test]
    fn psd_sqrt_rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        assert!(matches!(m.psd_sqrt(), Err(Error::Domain(_))));
    }

    #[test]
    fn psd_sqrt_rejects_indefinite() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ]);
        assert!(matches!(m.psd_sqrt(), Err(Error::Domain(_))));
    }

    #[test]
    fn log_det_herm_cases() {
        assert!(ComplexMatrix::identity(4).log_det_herm().unwrap().abs() < 1e-14);
        let d = ComplexMatrix::from_rows(&[vec![c(2.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(2.0, 0.0)]]);
        assert!((d.log_det_herm().unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn log_det_herm_matches_direct_det() {
        let mut rng = StdRng::seed_from_u64(20);
        for _ in 0..20 {
            let b = random_matrix(&mut rng, 4, 4);
            let m = ComplexMatrix::identity(4).add(&b.gram()).unwrap();
            let chol = m.log_det_herm().unwrap();
            let direct = m.det().unwrap().re.log2();
            assert!((chol - direct).abs() <= 1e-9 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn log_det_herm_rejects_indefinite() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-2.0, 0.0)],
        ]);
        assert!(matches!(m.log_det_herm(), Err(Error::Domain(_))));
    }

    #[test]
    fn kernels_are_deterministic() {
        let mut rng = StdRng::seed_from_u64(21);
        let a = random_matrix(&mut rng, 5, 5);
        let m = ComplexMatrix::identity(5).add(&a.gram()).unwrap();
        let d1 = m.det().unwrap();
        let d2 = m.det().unwrap();
        assert_eq!(d1, d2);
        let i1 = m.inverse().unwrap();
        let i2 = m.inverse().unwrap();
        assert_eq!(i1, i2);
        let s1 = m.psd_sqrt().unwrap();
        let s2 = m.psd_sqrt().unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn stacking_round_trips() {
        let a = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(2.0, 0.0)]]);
        let b = ComplexMatrix::from_rows(&[vec![c(3.0, 0.0), c(4.0, 0.0)]]);
        let v = stack_vertical(&[&a, &b]).unwrap();
        assert_eq!(v.rows(), 2);
        assert_eq!(v.get(1, 1), c(4.0, 0.0));
        let h = stack_horizontal(&[&a, &b]).unwrap();
        assert_eq!(h.cols(), 4);
        assert_eq!(h.get(0, 3), c(4.0, 0.0));
    }
}
