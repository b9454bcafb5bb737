//! Invertible bounded linear and conjugate-linear operators on `C^n`.
//!
//! A [`BoundedOperator`] is a matrix `M` together with a linearity kind:
//! linear operators act as `x -> M x`, antilinear (conjugate-linear) ones as
//! `x -> M conj(x)`. Fixing that coordinate convention determines everything
//! else, and none of it is guessable from the linear case:
//!
//! - adjoint of an antilinear operator is the plain transpose `M^T`
//!   (no conjugation), so that `<Tx, y> = conj(<x, T* y>)`;
//! - congruence `A -> T A T*` of an antilinear `T` is `M conj(A) M^H`;
//! - inverse of an antilinear `T` has matrix `conj(M^-1)`.
//!
//! The derived formulas are cross-checked against a basis-vector oracle in
//! the tests: assembling `T(A(T*(e_j)))` column by column must reproduce
//! `congruence` for both kinds.
//!
//! The inner product is conjugate-linear in the second argument:
//! `<u, v> = sum_i u_i conj(v_i)`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{hermitianize, HermitianMatrix, C64};
use crate::tolerance::INVERTIBILITY_TOL;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OperatorKind {
    Linear,
    Antilinear,
}

/// A bounded linear or conjugate-linear operator on `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedOperator {
    kind: OperatorKind,
    mat: DMatrix<C64>,
}

/// `<u, v> = sum_i u_i conj(v_i)` (conjugate-linear in the second slot).
pub fn inner(u: &DVector<C64>, v: &DVector<C64>) -> C64 {
    u.iter().zip(v.iter()).map(|(a, b)| a * b.conj()).sum()
}

impl BoundedOperator {
    pub fn new(kind: OperatorKind, mat: DMatrix<C64>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::NotSquare {
                rows: mat.nrows(),
                cols: mat.ncols(),
            });
        }
        Ok(BoundedOperator { kind, mat })
    }

    pub fn linear(mat: DMatrix<C64>) -> Result<Self> {
        Self::new(OperatorKind::Linear, mat)
    }

    pub fn antilinear(mat: DMatrix<C64>) -> Result<Self> {
        Self::new(OperatorKind::Antilinear, mat)
    }

    pub fn identity(n: usize) -> Self {
        BoundedOperator {
            kind: OperatorKind::Linear,
            mat: DMatrix::identity(n, n),
        }
    }

    /// Entrywise complex conjugation as an antilinear operator.
    pub fn conjugation(n: usize) -> Self {
        BoundedOperator {
            kind: OperatorKind::Antilinear,
            mat: DMatrix::identity(n, n),
        }
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn is_antilinear(&self) -> bool {
        self.kind == OperatorKind::Antilinear
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.mat
    }

    /// Scales the *action* of the operator by a complex constant. For both
    /// kinds this is matrix scaling: `(zT)(x) = z * T(x)`.
    pub fn scale(&self, z: C64) -> Self {
        BoundedOperator {
            kind: self.kind,
            mat: self.mat.map(|m| m * z),
        }
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(C64::new(c, 0.0))
    }

    pub fn apply(&self, x: &DVector<C64>) -> Result<DVector<C64>> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: x.len(),
            });
        }
        Ok(match self.kind {
            OperatorKind::Linear => &self.mat * x,
            OperatorKind::Antilinear => &self.mat * x.map(|c| c.conj()),
        })
    }

    /// Adjoint with respect to `<u, v> = sum u_i conj(v_i)`.
    pub fn adjoint(&self) -> Self {
        match self.kind {
            OperatorKind::Linear => BoundedOperator {
                kind: OperatorKind::Linear,
                mat: self.mat.adjoint(),
            },
            // Plain transpose: the conjugation lives in the action.
            OperatorKind::Antilinear => BoundedOperator {
                kind: OperatorKind::Antilinear,
                mat: self.mat.transpose(),
            },
        }
    }

    /// Operator composition `self . other` (apply `other` first). The result
    /// is linear iff the kinds agree.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        let (kind, mat) = match (self.kind, other.kind) {
            (OperatorKind::Linear, OperatorKind::Linear) => {
                (OperatorKind::Linear, &self.mat * &other.mat)
            }
            (OperatorKind::Linear, OperatorKind::Antilinear) => {
                (OperatorKind::Antilinear, &self.mat * &other.mat)
            }
            (OperatorKind::Antilinear, OperatorKind::Linear) => (
                OperatorKind::Antilinear,
                &self.mat * other.mat.map(|c| c.conj()),
            ),
            (OperatorKind::Antilinear, OperatorKind::Antilinear) => (
                OperatorKind::Linear,
                &self.mat * other.mat.map(|c| c.conj()),
            ),
        };
        Ok(BoundedOperator { kind, mat })
    }

    /// Congruence transformation `A -> T A T*`. The result is Hermitian, and
    /// positive semidefinite whenever `A` is.
    pub fn congruence(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        if self.dim() != a.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: a.dim(),
            });
        }
        let m = &self.mat;
        let prod = match self.kind {
            OperatorKind::Linear => m * a.matrix() * m.adjoint(),
            // T A T* = M conj(A) M^H, and conj(A) = A^T for Hermitian A.
            OperatorKind::Antilinear => m * a.matrix().transpose() * m.adjoint(),
        };
        hermitianize(&prod)
    }

    /// `T T*` as a Hermitian matrix (equals `M M^H` for both kinds).
    pub fn times_adjoint(&self) -> HermitianMatrix {
        hermitianize(&(&self.mat * self.mat.adjoint())).expect("square")
    }

    fn singular_values(&self) -> Vec<f64> {
        self.mat.clone().singular_values().as_slice().to_vec()
    }

    /// Largest singular value of the matrix; equals the operator norm for
    /// both kinds since conjugation is isometric.
    pub fn operator_norm(&self) -> f64 {
        self.singular_values()
            .into_iter()
            .fold(0.0f64, f64::max)
    }

    pub fn smallest_singular_value(&self) -> f64 {
        self.singular_values()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    pub fn cond(&self) -> f64 {
        let sv = self.singular_values();
        let max = sv.iter().cloned().fold(0.0f64, f64::max);
        let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        if min == 0.0 {
            f64::INFINITY
        } else {
            max / min
        }
    }

    pub fn require_invertible(&self, tol: f64) -> Result<()> {
        let min = self.smallest_singular_value();
        if min < tol {
            return Err(Error::Singular { min_abs: min, tol });
        }
        Ok(())
    }

    /// Inverse operator: `T^-1(T(x)) = x`. Kind is preserved; the antilinear
    /// inverse carries `conj(M^-1)`.
    pub fn invert(&self) -> Result<Self> {
        self.require_invertible(INVERTIBILITY_TOL)?;
        let inv = self
            .mat
            .clone()
            .try_inverse()
            .ok_or(Error::Singular {
                min_abs: self.smallest_singular_value(),
                tol: INVERTIBILITY_TOL,
            })?;
        Ok(match self.kind {
            OperatorKind::Linear => BoundedOperator {
                kind: OperatorKind::Linear,
                mat: inv,
            },
            OperatorKind::Antilinear => BoundedOperator {
                kind: OperatorKind::Antilinear,
                mat: inv.map(|c| c.conj()),
            },
        })
    }

    /// Whether `self = z * other` for some unit scalar `z`. The candidate
    /// `z` is read off the entry of `other` with the largest modulus (ties
    /// broken by lowest row, then column) and projected to the unit circle.
    pub fn phase_equiv(&self, other: &Self, tol: f64) -> bool {
        if self.kind != other.kind || self.dim() != other.dim() {
            return false;
        }
        let n = self.dim();
        let mut best = (0usize, 0usize);
        let mut best_mod = -1.0f64;
        for i in 0..n {
            for j in 0..n {
                let m = other.mat[(i, j)].norm();
                if m > best_mod {
                    best_mod = m;
                    best = (i, j);
                }
            }
        }
        let other_norm = other.mat.norm();
        if best_mod == 0.0 {
            return self.mat.norm() <= tol * other_norm;
        }
        let ratio = self.mat[best] / other.mat[best];
        let z = if ratio.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            ratio / ratio.norm()
        };
        (&self.mat - other.mat.map(|c| c * z)).norm() <= tol * other_norm
    }
}

/// An operator modulo unit scalars: the class `{ z T : |z| = 1 }`.
#[derive(Debug, Clone)]
pub struct PhaseClass {
    representative: BoundedOperator,
}

impl PhaseClass {
    pub fn new(representative: BoundedOperator) -> Self {
        PhaseClass { representative }
    }

    pub fn representative(&self) -> &BoundedOperator {
        &self.representative
    }

    pub fn contains(&self, op: &BoundedOperator, tol: f64) -> bool {
        op.phase_equiv(&self.representative, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn vec2(a: C64, b: C64) -> DVector<C64> {
        DVector::from_vec(vec![a, b])
    }

    fn rand_mat(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
        DMatrix::from_fn(n, n, |_, _| {
            c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        })
    }

    fn rand_vec(rng: &mut ChaCha8Rng, n: usize) -> DVector<C64> {
        DVector::from_fn(n, |_, _| c(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
    }

    #[test]
    fn apply_linear_identity() {
        let t = BoundedOperator::identity(2);
        let x = vec2(c(1.0, 0.0), c(0.0, 1.0));
        assert_eq!(t.apply(&x).unwrap(), x);
    }

    #[test]
    fn apply_conjugation() {
        let t = BoundedOperator::conjugation(2);
        let x = vec2(c(1.0, 0.0), c(0.0, 1.0));
        let y = t.apply(&x).unwrap();
        assert_eq!(y, vec2(c(1.0, 0.0), c(0.0, -1.0)));
    }

    #[test]
    fn apply_antilinear_swap() {
        // M = [[0,1],[1,0]] antilinear on (i, 2): swap of the conjugate.
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        );
        let t = BoundedOperator::antilinear(m).unwrap();
        let y = t.apply(&vec2(c(0.0, 1.0), c(2.0, 0.0))).unwrap();
        assert_eq!(y, vec2(c(2.0, 0.0), c(0.0, -1.0)));
    }

    #[test]
    fn antilinearity_of_apply() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let t = BoundedOperator::antilinear(rand_mat(&mut rng, 3)).unwrap();
        let x = rand_vec(&mut rng, 3);
        let lambda = c(0.3, -1.7);
        let lhs = t.apply(&x.map(|v| v * lambda)).unwrap();
        let rhs = t.apply(&x).unwrap().map(|v| v * lambda.conj());
        assert!((lhs - rhs).norm() < 1e-14);
    }

    #[test]
    fn adjoint_matrices() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        let lin = BoundedOperator::linear(m.clone()).unwrap().adjoint();
        assert_eq!(lin.matrix()[(1, 0)], c(1.0, 0.0));
        assert_eq!(lin.matrix()[(0, 1)], c(0.0, 0.0));

        let conj = BoundedOperator::conjugation(2).adjoint();
        assert_eq!(conj.kind(), OperatorKind::Antilinear);
        assert_eq!(conj.matrix(), BoundedOperator::conjugation(2).matrix());

        // Antilinear adjoint transposes without conjugating.
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(0.0, 1.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        let anti = BoundedOperator::antilinear(m).unwrap().adjoint();
        assert_eq!(anti.matrix()[(1, 0)], c(0.0, 1.0));
        assert_eq!(anti.matrix()[(0, 1)], c(0.0, 0.0));
    }

    #[test]
    fn adjoint_defining_identity() {
        // Linear: <Tx, y> = <x, T*y>. Antilinear: <Tx, y> = conj(<x, T*y>).
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for kind in [OperatorKind::Linear, OperatorKind::Antilinear] {
            for _ in 0..50 {
                let t = BoundedOperator::new(kind, rand_mat(&mut rng, 4)).unwrap();
                let x = rand_vec(&mut rng, 4);
                let y = rand_vec(&mut rng, 4);
                let lhs = inner(&t.apply(&x).unwrap(), &y);
                let mut rhs = inner(&x, &t.adjoint().apply(&y).unwrap());
                if kind == OperatorKind::Antilinear {
                    rhs = rhs.conj();
                }
                assert!((lhs - rhs).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn compose_kind_algebra() {
        let conj = BoundedOperator::conjugation(2);
        let cc = conj.compose(&conj).unwrap();
        assert_eq!(cc.kind(), OperatorKind::Linear);
        assert_eq!(cc.matrix(), &DMatrix::<C64>::identity(2, 2));

        let two = BoundedOperator::identity(2).scale_real(2.0);
        let la = two.compose(&conj).unwrap();
        assert_eq!(la.kind(), OperatorKind::Antilinear);
        assert_eq!(la.matrix()[(0, 0)], c(2.0, 0.0));

        let i_lin = BoundedOperator::identity(2).scale(c(0.0, 1.0));
        let al = conj.compose(&i_lin).unwrap();
        assert_eq!(al.kind(), OperatorKind::Antilinear);
        assert_eq!(al.matrix()[(0, 0)], c(0.0, -1.0));
    }

    #[test]
    fn compose_matches_pointwise_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k1 in [OperatorKind::Linear, OperatorKind::Antilinear] {
            for k2 in [OperatorKind::Linear, OperatorKind::Antilinear] {
                let t1 = BoundedOperator::new(k1, rand_mat(&mut rng, 3)).unwrap();
                let t2 = BoundedOperator::new(k2, rand_mat(&mut rng, 3)).unwrap();
                let t12 = t1.compose(&t2).unwrap();
                let x = rand_vec(&mut rng, 3);
                let lhs = t12.apply(&x).unwrap();
                let rhs = t1.apply(&t2.apply(&x).unwrap()).unwrap();
                assert!((lhs - rhs).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn compose_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..30 {
            let kinds = [OperatorKind::Linear, OperatorKind::Antilinear];
            let t1 = BoundedOperator::new(kinds[rng.gen_range(0..2)], rand_mat(&mut rng, 3)).unwrap();
            let t2 = BoundedOperator::new(kinds[rng.gen_range(0..2)], rand_mat(&mut rng, 3)).unwrap();
            let t3 = BoundedOperator::new(kinds[rng.gen_range(0..2)], rand_mat(&mut rng, 3)).unwrap();
            let left = t1.compose(&t2).unwrap().compose(&t3).unwrap();
            let right = t1.compose(&t2.compose(&t3).unwrap()).unwrap();
            assert_eq!(left.kind(), right.kind());
            assert!((left.matrix() - right.matrix()).norm() < 1e-13);
        }
    }

    /// Independent oracle: assemble T A T* column by column from the action
    /// on basis vectors and compare with the closed-form congruence.
    #[test]
    fn congruence_matches_basis_vector_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for kind in [OperatorKind::Linear, OperatorKind::Antilinear] {
            for dim in [2usize, 3, 5, 8] {
                let t = BoundedOperator::new(kind, rand_mat(&mut rng, dim)).unwrap();
                let a = hermitianize(&rand_mat(&mut rng, dim)).unwrap();
                let direct = t.congruence(&a).unwrap();

                let t_star = t.adjoint();
                let mut oracle = DMatrix::<C64>::zeros(dim, dim);
                for j in 0..dim {
                    let mut e = DVector::<C64>::zeros(dim);
                    e[j] = c(1.0, 0.0);
                    let col = t
                        .apply(&(a.matrix() * t_star.apply(&e).unwrap()))
                        .unwrap();
                    oracle.set_column(j, &col);
                }
                assert!(
                    (direct.matrix() - &oracle).norm() < 1e-12,
                    "kind {kind:?} dim {dim}"
                );
            }
        }
    }

    #[test]
    fn congruence_examples() {
        let a = hermitianize(&DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0), c(1.0, 0.0)],
        ))
        .unwrap();
        assert_eq!(
            BoundedOperator::identity(2).congruence(&a).unwrap().matrix(),
            a.matrix()
        );
        // Conjugation flips the off-diagonal phases.
        let conj = BoundedOperator::conjugation(2).congruence(&a).unwrap();
        assert_eq!(conj.entry(0, 1), c(0.0, -1.0));
        assert_eq!(conj.entry(1, 0), c(0.0, 1.0));

        let d = BoundedOperator::linear(DMatrix::from_row_slice(
            2,
            2,
            &[c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ))
        .unwrap();
        let out = d.congruence(&HermitianMatrix::identity(2)).unwrap();
        assert_eq!(out.entry(0, 0), c(4.0, 0.0));
        assert_eq!(out.entry(1, 1), c(1.0, 0.0));
    }

    #[test]
    fn congruence_preserves_psd() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for kind in [OperatorKind::Linear, OperatorKind::Antilinear] {
            let t = BoundedOperator::new(kind, rand_mat(&mut rng, 4)).unwrap();
            let g = rand_mat(&mut rng, 4);
            let psd = hermitianize(&(&g * g.adjoint())).unwrap();
            let out = t.congruence(&psd).unwrap();
            assert!(out.is_psd(crate::tolerance::PSD_CLAMP_TOL).unwrap());
        }
    }

    #[test]
    fn congruence_phase_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for kind in [OperatorKind::Linear, OperatorKind::Antilinear] {
            let t = BoundedOperator::new(kind, rand_mat(&mut rng, 3)).unwrap();
            let a = hermitianize(&rand_mat(&mut rng, 3)).unwrap();
            let z = C64::from_polar(1.0, 1.234);
            let tz = t.scale(z);
            let d = (t.congruence(&a).unwrap().matrix() - tz.congruence(&a).unwrap().matrix()).norm();
            assert!(d < 1e-13);
        }
    }

    #[test]
    fn operator_norms() {
        assert!((BoundedOperator::identity(3).operator_norm() - 1.0).abs() < 1e-14);
        let d = BoundedOperator::linear(DMatrix::from_row_slice(
            2,
            2,
            &[c(3.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        ))
        .unwrap();
        assert!((d.operator_norm() - 3.0).abs() < 1e-14);
        let n = BoundedOperator::linear(DMatrix::from_row_slice(
            2,
            2,
            &[c(0.0, 0.0), c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        ))
        .unwrap();
        assert!((n.operator_norm() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn inverses() {
        let two = BoundedOperator::identity(2).scale_real(2.0);
        let inv = two.invert().unwrap();
        assert_eq!(inv.matrix()[(0, 0)], c(0.5, 0.0));

        let conj = BoundedOperator::conjugation(2);
        assert_eq!(conj.invert().unwrap().matrix(), conj.matrix());

        // Antilinear iI: inverse is iI again since conj((iI)^-1) = iI.
        let t = BoundedOperator::antilinear(DMatrix::identity(2, 2))
            .unwrap()
            .scale(c(0.0, 1.0));
        let tinv = t.invert().unwrap();
        assert!((tinv.matrix()[(0, 0)] - c(0.0, 1.0)).norm() < 1e-14);

        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for kind in [OperatorKind::Linear, OperatorKind::Antilinear] {
            let t = BoundedOperator::new(kind, rand_mat(&mut rng, 4) + DMatrix::identity(4, 4).map(|v: C64| v * 2.0)).unwrap();
            let x = rand_vec(&mut rng, 4);
            let round = t.invert().unwrap().apply(&t.apply(&x).unwrap()).unwrap();
            assert!((round - x).norm() < 1e-12);
        }
    }

    #[test]
    fn invert_rejects_singular() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        );
        assert!(matches!(
            BoundedOperator::linear(m).unwrap().invert(),
            Err(Error::Singular { .. })
        ));
    }

    #[test]
    fn phase_equivalence() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let t = BoundedOperator::linear(rand_mat(&mut rng, 3)).unwrap();
        assert!(t.phase_equiv(&t, 1e-12));
        let z = C64::from_polar(1.0, std::f64::consts::FRAC_PI_3);
        assert!(t.scale(z).phase_equiv(&t, 1e-12));
        assert!(!t.scale_real(2.0).phase_equiv(&t, 1e-6));
        let anti = BoundedOperator::antilinear(t.matrix().clone()).unwrap();
        assert!(!anti.phase_equiv(&t, 1e-6));

        let class = PhaseClass::new(t.clone());
        assert!(class.contains(&t.scale(z), 1e-12));
        assert!(!class.contains(&t.scale_real(0.5), 1e-6));
    }
}
