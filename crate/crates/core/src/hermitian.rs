//! Complex Hermitian matrices, the Loewner order, and spectral primitives.
//!
//! [`HermitianMatrix`] is the ambient element everything else acts on. The
//! stored entries satisfy `m[i][j] == conj(m[j][i])` exactly (bitwise):
//! construction symmetrizes its input and real diagonals are enforced, so
//! round-off drift from matrix products never accumulates into the stored
//! representation.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::tolerance::{EIGH_RESIDUAL_FACTOR, INVERTIBILITY_TOL, PSD_CLAMP_TOL};

/// Scalar type used throughout the crate.
pub type C64 = Complex<f64>;

/// A complex `n x n` self-adjoint matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    mat: DMatrix<C64>,
}

/// Eigendecomposition of a [`HermitianMatrix`]: real eigenvalues in
/// ascending order and the matching unitary matrix of column eigenvectors.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: DMatrix<C64>,
}

/// Exact symmetrization `(X + X^H) / 2` of an arbitrary square complex
/// matrix. The (i, j) and (j, i) entries of the result are stored as exact
/// conjugates and the diagonal is exactly real.
pub fn hermitianize(x: &DMatrix<C64>) -> Result<HermitianMatrix> {
    if x.nrows() != x.ncols() {
        return Err(Error::NotSquare {
            rows: x.nrows(),
            cols: x.ncols(),
        });
    }
    let n = x.nrows();
    let mut m = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = C64::new(x[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (x[(i, j)] + x[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    Ok(HermitianMatrix { mat: m })
}

impl HermitianMatrix {
    /// Builds from an arbitrary square matrix by symmetrizing. Fails only on
    /// non-square input.
    pub fn from_matrix(x: DMatrix<C64>) -> Result<Self> {
        hermitianize(&x)
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix {
            mat: DMatrix::identity(n, n),
        }
    }

    pub fn zeros(n: usize) -> Self {
        HermitianMatrix {
            mat: DMatrix::zeros(n, n),
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::<C64>::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(*d, 0.0);
        }
        HermitianMatrix { mat: m }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.mat
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.mat[(i, j)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.norm()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.mat[(i, i)].re).sum()
    }

    /// Entrywise scaling by a real constant (Hermitian-ness is preserved
    /// exactly).
    pub fn scale(&self, c: f64) -> Self {
        HermitianMatrix {
            mat: self.mat.map(|z| z * c),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(HermitianMatrix {
            mat: &self.mat + &other.mat,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(HermitianMatrix {
            mat: &self.mat - &other.mat,
        })
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// Full eigendecomposition with eigenvalues sorted ascending.
    ///
    /// The decomposition is validated before it is returned: reconstruction
    /// and unitarity residuals beyond the backward-error budget are reported
    /// as [`Error::EigenConvergence`], as is failure of the QR iteration
    /// itself.
    pub fn eigh(&self) -> Result<SpectralDecomposition> {
        let n = self.dim();
        if n == 0 {
            return Ok(SpectralDecomposition {
                eigenvalues: vec![],
                eigenvectors: DMatrix::zeros(0, 0),
            });
        }
        let se = self
            .mat
            .clone()
            .try_symmetric_eigen(f64::EPSILON, 500 * n)
            .ok_or(Error::EigenConvergence { dim: n })?;

        // Sort ascending, permuting eigenvector columns alongside.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
        let eigenvalues: Vec<f64> = order.iter().map(|&i| se.eigenvalues[i]).collect();
        let mut eigenvectors = DMatrix::<C64>::zeros(n, n);
        for (dst, &src) in order.iter().enumerate() {
            eigenvectors.set_column(dst, &se.eigenvectors.column(src));
        }

        let decomp = SpectralDecomposition {
            eigenvalues,
            eigenvectors,
        };
        let scale = self.frobenius_norm();
        let budget = (n as f64) * f64::EPSILON * EIGH_RESIDUAL_FACTOR;
        let recon_resid = (&decomp.reconstruct() - &self.mat).norm();
        let unit_resid = (decomp.eigenvectors.adjoint() * &decomp.eigenvectors
            - DMatrix::<C64>::identity(n, n))
        .norm();
        if recon_resid > budget * scale.max(1.0) || unit_resid > budget {
            return Err(Error::EigenConvergence { dim: n });
        }
        Ok(decomp)
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        Ok(self.eigh()?.eigenvalues[0])
    }

    pub fn max_eigenvalue(&self) -> Result<f64> {
        Ok(*self.eigh()?.eigenvalues.last().expect("dim >= 1"))
    }

    /// Positive semidefiniteness at tolerance: min eigenvalue >= -tol.
    pub fn is_psd(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= -tol)
    }

    /// Strict positivity at tolerance: min eigenvalue >= +tol, i.e. the
    /// matrix sits inside the positive cone with working margin.
    pub fn is_strictly_positive(&self, tol: f64) -> Result<bool> {
        Ok(self.min_eigenvalue()? >= tol)
    }

    /// Condition number with respect to inversion (Hermitian case:
    /// max|eigenvalue| / min|eigenvalue|). Infinite for singular input.
    pub fn cond(&self) -> Result<f64> {
        let eigs = self.eigh()?.eigenvalues;
        let max_abs = eigs.iter().fold(0.0f64, |a, &l| a.max(l.abs()));
        let min_abs = eigs.iter().fold(f64::INFINITY, |a, &l| a.min(l.abs()));
        if min_abs == 0.0 {
            Ok(f64::INFINITY)
        } else {
            Ok(max_abs / min_abs)
        }
    }

    /// Applies a real scalar function to the spectrum:
    /// `U diag(f(lambda)) U^H`. The workhorse behind every matrix function
    /// in this crate.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let decomp = self.eigh()?;
        let mapped: Vec<f64> = decomp.eigenvalues.iter().map(|&l| f(l)).collect();
        Ok(reconstruct_from(&decomp.eigenvectors, &mapped))
    }

    /// Positive semidefinite square root. Eigenvalues in
    /// `[-PSD_CLAMP_TOL, 0)` are clamped to zero; anything below is
    /// rejected.
    pub fn sqrt_psd(&self) -> Result<Self> {
        let decomp = self.eigh()?;
        let min_eig = decomp.eigenvalues[0];
        if min_eig < -PSD_CLAMP_TOL {
            return Err(Error::NotPsd {
                min_eig,
                tol: PSD_CLAMP_TOL,
            });
        }
        let mapped: Vec<f64> = decomp
            .eigenvalues
            .iter()
            .map(|&l| l.max(0.0).sqrt())
            .collect();
        Ok(reconstruct_from(&decomp.eigenvectors, &mapped))
    }

    /// Inverse through the spectral decomposition; the result is Hermitian
    /// by construction. Rejects matrices singular to `INVERTIBILITY_TOL`.
    pub fn inv_hermitian(&self) -> Result<Self> {
        let decomp = self.eigh()?;
        let min_abs = decomp
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &l| a.min(l.abs()));
        if min_abs < INVERTIBILITY_TOL {
            return Err(Error::Singular {
                min_abs,
                tol: INVERTIBILITY_TOL,
            });
        }
        let mapped: Vec<f64> = decomp.eigenvalues.iter().map(|&l| 1.0 / l).collect();
        Ok(reconstruct_from(&decomp.eigenvectors, &mapped))
    }

    /// Inverse square root of a strictly positive matrix.
    pub fn inv_sqrt_psd(&self) -> Result<Self> {
        let decomp = self.eigh()?;
        let min_eig = decomp.eigenvalues[0];
        if min_eig < INVERTIBILITY_TOL {
            return Err(Error::Singular {
                min_abs: min_eig.max(0.0),
                tol: INVERTIBILITY_TOL,
            });
        }
        let mapped: Vec<f64> = decomp.eigenvalues.iter().map(|&l| 1.0 / l.sqrt()).collect();
        Ok(reconstruct_from(&decomp.eigenvectors, &mapped))
    }
}

/// Loewner order comparison: `A <= B` iff `B - A` is positive semidefinite
/// at the given tolerance.
pub fn loewner_leq(a: &HermitianMatrix, b: &HermitianMatrix, tol: f64) -> Result<bool> {
    b.sub(a)?.is_psd(tol)
}

/// Builds `U diag(values) U^H`, symmetrized exactly.
fn reconstruct_from(u: &DMatrix<C64>, values: &[f64]) -> HermitianMatrix {
    let n = u.nrows();
    let mut d = DMatrix::<C64>::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        d[(i, i)] = C64::new(v, 0.0);
    }
    let m = u * d * u.adjoint();
    hermitianize(&m).expect("square by construction")
}

impl SpectralDecomposition {
    /// `U diag(lambda) U^H` as a plain matrix (not re-symmetrized).
    pub fn reconstruct(&self) -> DMatrix<C64> {
        let n = self.eigenvalues.len();
        let mut d = DMatrix::<C64>::zeros(n, n);
        for (i, &v) in self.eigenvalues.iter().enumerate() {
            d[(i, i)] = C64::new(v, 0.0);
        }
        &self.eigenvectors * d * self.eigenvectors.adjoint()
    }

    /// `U diag(values) U^H` with replacement eigenvalues in the same basis.
    pub fn with_eigenvalues(&self, values: &[f64]) -> Result<HermitianMatrix> {
        if values.len() != self.eigenvalues.len() {
            return Err(Error::DimensionMismatch {
                left: self.eigenvalues.len(),
                right: values.len(),
            });
        }
        Ok(reconstruct_from(&self.eigenvectors, values))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn mat2(a: C64, b: C64, cc: C64, d: C64) -> DMatrix<C64> {
        DMatrix::from_row_slice(2, 2, &[a, b, cc, d])
    }

    #[test]
    fn hermitianize_identity_is_fixed() {
        let h = hermitianize(&DMatrix::identity(2, 2)).unwrap();
        assert_eq!(h.matrix(), &DMatrix::<C64>::identity(2, 2));
    }

    #[test]
    fn hermitianize_upper_triangular() {
        let x = mat2(c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0));
        let h = hermitianize(&x).unwrap();
        assert_eq!(h.entry(0, 1), c(1.0, 0.0));
        assert_eq!(h.entry(1, 0), c(1.0, 0.0));
    }

    #[test]
    fn hermitianize_cancels_skew_part() {
        // (i + conj(i)) / 2 = 0 on the off-diagonal.
        let x = mat2(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(1.0, 0.0));
        let h = hermitianize(&x).unwrap();
        assert_eq!(h.matrix(), &DMatrix::<C64>::identity(2, 2));
    }

    #[test]
    fn hermitianize_rejects_non_square() {
        let x = DMatrix::<C64>::zeros(2, 3);
        assert!(matches!(
            hermitianize(&x),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        ));
    }

    #[test]
    fn eigh_diagonal_sorted_ascending() {
        let a = HermitianMatrix::from_real_diagonal(&[3.0, 1.0]);
        let d = a.eigh().unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_symmetric_flip() {
        let a = HermitianMatrix::from_matrix(mat2(
            c(0.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(0.0, 0.0),
        ))
        .unwrap();
        let d = a.eigh().unwrap();
        assert!((d.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((d.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_complex_offdiagonal() {
        // [[2, i], [-i, 2]] has characteristic roots 1 and 3.
        let a = HermitianMatrix::from_matrix(mat2(
            c(2.0, 0.0),
            c(0.0, 1.0),
            c(0.0, -1.0),
            c(2.0, 0.0),
        ))
        .unwrap();
        let d = a.eigh().unwrap();
        assert!((d.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((d.eigenvalues[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn psd_checks() {
        assert!(HermitianMatrix::identity(2).is_psd(0.0).unwrap());
        assert!(!HermitianMatrix::from_real_diagonal(&[1.0, -1.0])
            .is_psd(1e-9)
            .unwrap());
        assert!(HermitianMatrix::from_real_diagonal(&[0.0, -5e-10])
            .is_psd(1e-9)
            .unwrap());
    }

    #[test]
    fn loewner_comparisons() {
        let zero = HermitianMatrix::zeros(2);
        let id = HermitianMatrix::identity(2);
        assert!(loewner_leq(&zero, &id, 0.0).unwrap());
        assert!(!loewner_leq(&id, &zero, 1e-9).unwrap());
        let a = HermitianMatrix::from_real_diagonal(&[0.2, 0.5]);
        let b = HermitianMatrix::from_real_diagonal(&[0.3, 0.5]);
        assert!(loewner_leq(&a, &b, 0.0).unwrap());
        let c3 = HermitianMatrix::identity(3);
        assert!(matches!(
            loewner_leq(&id, &c3, 0.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn strict_positivity() {
        assert!(HermitianMatrix::identity(2)
            .is_strictly_positive(1e-9)
            .unwrap());
        assert!(!HermitianMatrix::from_real_diagonal(&[1.0, 0.0])
            .is_strictly_positive(1e-9)
            .unwrap());
        assert!(!HermitianMatrix::from_real_diagonal(&[1.0, 1e-12])
            .is_strictly_positive(1e-9)
            .unwrap());
    }

    #[test]
    fn sqrt_of_diagonal() {
        let a = HermitianMatrix::from_real_diagonal(&[4.0, 9.0]);
        let r = a.sqrt_psd().unwrap();
        assert!((r.entry(0, 0).re - 2.0).abs() < 1e-12);
        assert!((r.entry(1, 1).re - 3.0).abs() < 1e-12);
        let id = HermitianMatrix::identity(3);
        assert_eq!(id.sqrt_psd().unwrap().matrix(), id.matrix());
    }

    #[test]
    fn sqrt_spectral_mapping() {
        // [[2, 1], [1, 2]] has eigenvalues 1 and 3; its root has 1 and sqrt(3).
        let a = HermitianMatrix::from_matrix(mat2(
            c(2.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(2.0, 0.0),
        ))
        .unwrap();
        let r = a.sqrt_psd().unwrap();
        let eigs = r.eigh().unwrap().eigenvalues;
        assert!((eigs[0] - 1.0).abs() < 1e-12);
        assert!((eigs[1] - 3.0f64.sqrt()).abs() < 1e-12);
        let sq = r.matrix() * r.matrix();
        assert!((sq - a.matrix()).norm() < 1e-12);
    }

    #[test]
    fn sqrt_rejects_indefinite() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, -1e-3]);
        assert!(matches!(a.sqrt_psd(), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn inverse_diagonal_and_dense() {
        let a = HermitianMatrix::from_real_diagonal(&[2.0, 4.0]);
        let inv = a.inv_hermitian().unwrap();
        assert!((inv.entry(0, 0).re - 0.5).abs() < 1e-14);
        assert!((inv.entry(1, 1).re - 0.25).abs() < 1e-14);

        // [[2, 1], [1, 2]]^-1 = [[2/3, -1/3], [-1/3, 2/3]]
        let b = HermitianMatrix::from_matrix(mat2(
            c(2.0, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(2.0, 0.0),
        ))
        .unwrap();
        let binv = b.inv_hermitian().unwrap();
        assert!((binv.entry(0, 0).re - 2.0 / 3.0).abs() < 1e-12);
        assert!((binv.entry(0, 1).re + 1.0 / 3.0).abs() < 1e-12);
        let prod = b.matrix() * binv.matrix();
        assert!((prod - DMatrix::<C64>::identity(2, 2)).norm() < 1e-12);
    }

    #[test]
    fn inverse_rejects_singular() {
        let a = HermitianMatrix::from_real_diagonal(&[1.0, 1e-13]);
        assert!(matches!(a.inv_hermitian(), Err(Error::Singular { .. })));
    }
}
