//! The operator interval `[0, I]` and its correspondence with the cone of
//! positive semidefinite matrices.
//!
//! An [`Effect`] is a Hermitian `A` with `0 <= A <= I` in the Loewner order.
//! The interior `(0, I)` maps onto the open cone by `A -> A^-1 - I`, an
//! order anti-isomorphism with inverse `X -> (I + X)^-1`. Conjugating the
//! cone by an invertible operator (`X -> S X S*`) and pulling back through
//! this correspondence produces order automorphisms of the interval; that
//! construction lives in the `automorphism` module.

use crate::error::{Error, Result};
use crate::hermitian::HermitianMatrix;
use crate::operator::BoundedOperator;
use crate::tolerance::{INVERTIBILITY_TOL, PSD_CLAMP_TOL};

/// A Hermitian matrix `A` with `0 <= A <= I`.
///
/// Construction clamps eigenvalues within `PSD_CLAMP_TOL` of the endpoints
/// back into `[0, 1]` (round-off from upstream arithmetic) and rejects
/// anything further out. The stored matrix is only rebuilt when clamping
/// actually changed an eigenvalue.
#[derive(Debug, Clone, PartialEq)]
pub struct Effect {
    matrix: HermitianMatrix,
}

impl Effect {
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let decomp = matrix.eigh()?;
        let mut clamped = false;
        let mut values = Vec::with_capacity(decomp.eigenvalues.len());
        for &ev in &decomp.eigenvalues {
            if !(-PSD_CLAMP_TOL..=1.0 + PSD_CLAMP_TOL).contains(&ev) {
                return Err(Error::NotEffect { eig: ev });
            }
            let v = ev.clamp(0.0, 1.0);
            if v != ev {
                clamped = true;
            }
            values.push(v);
        }
        let matrix = if clamped {
            decomp.with_eigenvalues(&values)?
        } else {
            matrix
        };
        Ok(Effect { matrix })
    }

    pub fn zero(n: usize) -> Self {
        Effect {
            matrix: HermitianMatrix::zeros(n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Effect {
            matrix: HermitianMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.matrix
    }

    pub fn min_eigenvalue(&self) -> Result<f64> {
        self.matrix.min_eigenvalue()
    }

    /// Convex combination with the identity: `(1-w) A + w I`. For `w > 0`
    /// the result is strictly positive, which is how boundary effects are
    /// pushed into the interior for the limit construction.
    pub fn mix_with_identity(&self, w: f64) -> Result<Effect> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::InvalidConfig(format!(
                "mixing weight must lie in [0, 1], got {w}"
            )));
        }
        let n = self.dim();
        let m = self
            .matrix
            .scale(1.0 - w)
            .add(&HermitianMatrix::identity(n).scale(w))?;
        Effect::new(m)
    }

    /// `A -> A^-1 - I`, mapping the open interval `(0, I]`... strictly:
    /// requires `A >= tol * I`; sends `(0, I]` into the cone `[0, inf)`,
    /// with `I -> 0`. Anti-monotone: `A <= B` iff `to_cone(B) <= to_cone(A)`.
    pub fn to_cone(&self, tol: f64) -> Result<HermitianMatrix> {
        let min = self.matrix.min_eigenvalue()?;
        if min < tol {
            return Err(Error::NotStrictlyPositive { min_eig: min, tol });
        }
        let n = self.dim();
        self.matrix
            .inv_hermitian()?
            .sub(&HermitianMatrix::identity(n))
    }
}

/// `X -> (I + X)^-1`, the inverse of [`Effect::to_cone`]. Requires `X` to be
/// positive semidefinite up to round-off; the result lands in `(0, I]`.
pub fn from_cone(x: &HermitianMatrix) -> Result<Effect> {
    let min = x.min_eigenvalue()?;
    if min < -PSD_CLAMP_TOL {
        return Err(Error::NotPsd {
            min_eig: min,
            tol: PSD_CLAMP_TOL,
        });
    }
    let n = x.dim();
    let shifted = x.add(&HermitianMatrix::identity(n))?;
    Effect::new(shifted.inv_hermitian()?)
}

/// The congruence `X -> S X S*` on the cone. Order automorphism of
/// `[0, inf)` for invertible `S`; only `S` is validated here, positivity of
/// `X` is the caller's contract (outputs of `to_cone` satisfy it by
/// construction).
pub fn cone_automorphism(s: &BoundedOperator, x: &HermitianMatrix) -> Result<HermitianMatrix> {
    s.require_invertible(INVERTIBILITY_TOL)?;
    s.congruence(x)
}
