//! The one-parameter family `f_p(x) = x / (p x + 1 - p)` for `p < 1`.
//!
//! Under composition these maps form a group: `f_p . f_q = f_{p + q - pq}`,
//! the identity is `p = 0`, and `f_p^-1 = f_{p/(p-1)}`. The map
//! `a -> f_{1-a}` is an isomorphism from the positive reals under
//! multiplication onto this group.
//!
//! Every `f_p` fixes 0 and 1 and is operator monotone on its domain:
//! `[0, inf)` for `p` in `[0, 1)`, and `[0, 1 - 1/p)` for `p < 0`, where
//! `1 - 1/p > 1` is the pole of the map. Matrix arguments are evaluated two
//! ways: through the spectral decomposition, and through an algebraically
//! equivalent resolvent formula that goes through a single shifted inverse.
//! The two routes share no code path beyond basic arithmetic, so their
//! agreement is a meaningful cross-check and is enforced in the tests and
//! the verification suites.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{hermitianize, HermitianMatrix, C64};
use crate::tolerance::{DOMAIN_MARGIN, PSD_CLAMP_TOL};

/// A parameter `p < 1` selecting the map `f_p(x) = x / (p x + 1 - p)`.
///
/// Construction rejects `p >= 1 - 1e-12`. Group operations (`compose`,
/// `inverse`) bypass that guard: the group is closed under them in exact
/// arithmetic, but a product of two admissible parameters can round to
/// within the rejection band of 1, and refusing it there would break
/// closure for no numerical gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MoebiusParam {
    p: f64,
}

const PARAM_SUP: f64 = 1.0 - 1e-12;

/// Largest f64 strictly below 1; group operations saturate here when their
/// exact value is closer to 1 than the representable gap.
const MAX_BELOW_ONE: f64 = 1.0 - f64::EPSILON / 2.0;

impl MoebiusParam {
    pub fn new(p: f64) -> Result<Self> {
        if !p.is_finite() || p >= PARAM_SUP {
            return Err(Error::InvalidMoebiusParam { p });
        }
        Ok(MoebiusParam { p })
    }

    pub(crate) fn from_raw(p: f64) -> Self {
        debug_assert!(p < 1.0);
        MoebiusParam { p }
    }

    pub fn identity() -> Self {
        MoebiusParam { p: 0.0 }
    }

    pub fn value(&self) -> f64 {
        self.p
    }

    /// `f_p . f_q = f_{p + q - pq}` (which map is applied first does not
    /// matter: the group is abelian). The parameter is computed as
    /// `1 - (1-p)(1-q)`: algebraically the same, but the product form
    /// cancels exactly when the arguments are mutually inverse, where the
    /// naive sum loses up to `eps * |pq|`.
    pub fn compose(&self, other: &MoebiusParam) -> MoebiusParam {
        let (p, q) = (self.p, other.p);
        let r = 1.0 - (1.0 - p) * (1.0 - q);
        MoebiusParam::from_raw(r.min(MAX_BELOW_ONE))
    }

    pub fn inverse(&self) -> MoebiusParam {
        MoebiusParam::from_raw((self.p / (self.p - 1.0)).min(MAX_BELOW_ONE))
    }

    /// The isomorphism `(0, inf) -> G`, `a -> f_{1-a}`. It turns products
    /// into compositions: `from_positive_real(a*b) =
    /// from_positive_real(a).compose(from_positive_real(b))`.
    pub fn from_positive_real(a: f64) -> Result<Self> {
        if !a.is_finite() || a <= 0.0 {
            return Err(Error::NotPositiveReal { value: a });
        }
        MoebiusParam::new(1.0 - a)
    }

    pub fn to_positive_real(&self) -> f64 {
        1.0 - self.p
    }

    /// Supremum of the domain: the pole `1 - 1/p` for `p < 0`, infinity
    /// otherwise.
    pub fn domain_sup(&self) -> f64 {
        if self.p < 0.0 {
            1.0 - 1.0 / self.p
        } else {
            f64::INFINITY
        }
    }

    /// Largest argument accepted by evaluation. For `p < 0` this backs off
    /// from the pole `x0 = 1 - 1/p` by `DOMAIN_MARGIN * (x0 - 1)`, a margin
    /// relative to the gap between the pole and 1, so all of `[0, 1]` stays
    /// admissible for every `p < 0`.
    pub fn domain_bound(&self) -> f64 {
        if self.p < 0.0 {
            let sup = self.domain_sup();
            sup - DOMAIN_MARGIN * (sup - 1.0)
        } else {
            f64::INFINITY
        }
    }

    /// Scalar evaluation. Requires `x >= 0` and, for `p < 0`, `x` at most
    /// `domain_bound()`.
    pub fn eval(&self, x: f64) -> Result<f64> {
        if !x.is_finite() || x < 0.0 || x > self.domain_bound() {
            return Err(Error::ScalarOutsideDomain {
                x,
                p: self.p,
                sup: self.domain_sup(),
            });
        }
        // Denominator written as 1 + p(x-1) so that f_p(1) = 1 exactly.
        Ok(x / (1.0 + self.p * (x - 1.0)))
    }

    /// Checks the spectrum of `a` against the domain and returns its
    /// decomposition with eigenvalues clamped into `[0, domain_bound]`.
    /// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are treated as round-off zeros;
    /// anything further out is an error.
    fn checked_spectrum(&self, a: &HermitianMatrix) -> Result<crate::hermitian::SpectralDecomposition> {
        let decomp = a.eigh()?;
        let bound = self.domain_bound();
        for &ev in &decomp.eigenvalues {
            if ev < -PSD_CLAMP_TOL {
                return Err(Error::NotPsd {
                    min_eig: ev,
                    tol: PSD_CLAMP_TOL,
                });
            }
            if ev > bound {
                return Err(Error::SpectrumOutsideDomain {
                    eig: ev,
                    p: self.p,
                    bound,
                });
            }
        }
        Ok(decomp)
    }

    /// `f_p(A)` by mapping eigenvalues through the scalar function.
    pub fn eval_matrix_spectral(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        let decomp = self.checked_spectrum(a)?;
        let mapped: Vec<f64> = decomp
            .eigenvalues
            .iter()
            .map(|&ev| {
                let x = ev.max(0.0);
                x / (1.0 + self.p * (x - 1.0))
            })
            .collect();
        decomp.with_eigenvalues(&mapped)
    }

    /// `f_p(A)` through a resolvent identity, avoiding the spectral map:
    ///
    /// - `p` in `(0, 1)`: `f_p(A) = (1/p) I - ((1-p)/p^2) (A + ((1-p)/p) I)^-1`
    /// - `p < 0`:         `f_p(A) = (1/p) I + ((1-p)/p^2) (((p-1)/p) I - A)^-1`
    ///
    /// The shifted matrix is inverted by LU, not through an eigenvalue
    /// decomposition, so this route is numerically independent of
    /// `eval_matrix_spectral`. Errors for `p = 0` (no resolvent form; the
    /// map is the identity).
    pub fn eval_matrix_resolvent(&self, a: &HermitianMatrix) -> Result<HermitianMatrix> {
        if self.p == 0.0 {
            return Err(Error::InvalidConfig(
                "resolvent form is undefined at p = 0 (identity map); use the spectral route"
                    .into(),
            ));
        }
        self.checked_spectrum(a)?;
        let n = a.dim();
        let p = self.p;
        let id = nalgebra::DMatrix::<C64>::identity(n, n);
        let (shifted, coeff) = if p > 0.0 {
            // A + ((1-p)/p) I, eigenvalues >= (1-p)/p > 0.
            let shift = (1.0 - p) / p;
            (a.matrix() + id.scale(shift), -(1.0 - p) / (p * p))
        } else {
            // ((p-1)/p) I - A, eigenvalues >= margin * (sup - 1) > 0.
            let shift = (p - 1.0) / p;
            (id.scale(shift) - a.matrix(), (1.0 - p) / (p * p))
        };
        let inv = shifted.try_inverse().ok_or(Error::Singular {
            min_abs: 0.0,
            tol: 0.0,
        })?;
        hermitianize(&(id.scale(1.0 / p) + inv.scale(coeff)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn construction_guard() {
        assert!(MoebiusParam::new(0.999_999).is_ok());
        assert!(MoebiusParam::new(1.0).is_err());
        assert!(MoebiusParam::new(1.0 - 1e-13).is_err());
        assert!(MoebiusParam::new(f64::NAN).is_err());
        assert!(MoebiusParam::new(-1e9).is_ok());
    }

    #[test]
    fn fixes_zero_and_one_exactly() {
        for p in [-1e6, -3.0, -1.0, -0.25, 0.0, 0.3, 0.7, 0.999_999] {
            let f = MoebiusParam::new(p).unwrap();
            assert_eq!(f.eval(0.0).unwrap(), 0.0);
            assert_eq!(f.eval(1.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn scalar_values() {
        let f = MoebiusParam::new(-1.0).unwrap();
        assert!((f.eval(0.5).unwrap() - 1.0 / 3.0).abs() < 1e-16);
        let g = MoebiusParam::new(0.5).unwrap();
        assert!((g.eval(2.0).unwrap() - 2.0 / 1.5).abs() < 1e-15);
    }

    #[test]
    fn domain_enforcement() {
        let f = MoebiusParam::new(-1.0).unwrap();
        // Pole at 2; margin keeps a band below it.
        assert_eq!(f.domain_sup(), 2.0);
        assert!((f.domain_bound() - 1.95).abs() < 1e-15);
        assert!(f.eval(1.95).is_ok());
        assert!(matches!(
            f.eval(1.96),
            Err(Error::ScalarOutsideDomain { .. })
        ));
        assert!(f.eval(-0.001).is_err());
        assert!(f.eval(f64::INFINITY).is_err());

        let g = MoebiusParam::new(0.5).unwrap();
        assert_eq!(g.domain_sup(), f64::INFINITY);
        assert!(g.eval(1e12).is_ok());
    }

    #[test]
    fn composition_examples() {
        let id = MoebiusParam::identity();
        let q = MoebiusParam::new(-2.5).unwrap();
        assert_eq!(id.compose(&q).value(), -2.5);
        let m1 = MoebiusParam::new(-1.0).unwrap();
        assert_eq!(m1.compose(&m1).value(), -3.0);
        let h = MoebiusParam::new(0.5).unwrap();
        assert_eq!(h.compose(&m1).value(), 0.0);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(MoebiusParam::identity().inverse().value(), 0.0);
        assert_eq!(MoebiusParam::new(0.5).unwrap().inverse().value(), -1.0);
        assert_eq!(MoebiusParam::new(-1.0).unwrap().inverse().value(), 0.5);
    }

    #[test]
    fn positive_real_isomorphism() {
        assert_eq!(MoebiusParam::from_positive_real(1.0).unwrap().value(), 0.0);
        assert_eq!(MoebiusParam::from_positive_real(0.5).unwrap().value(), 0.5);
        let prod = MoebiusParam::from_positive_real(6.0).unwrap();
        let a = MoebiusParam::from_positive_real(2.0).unwrap();
        let b = MoebiusParam::from_positive_real(3.0).unwrap();
        assert_eq!(prod.value(), a.compose(&b).value());
        assert!(MoebiusParam::from_positive_real(0.0).is_err());
        assert!(MoebiusParam::from_positive_real(-1.0).is_err());
        assert!(MoebiusParam::from_positive_real(f64::NAN).is_err());
    }

    #[test]
    fn group_laws_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let grid: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();
        for _ in 0..500 {
            let p = MoebiusParam::new(-10.0 + 10.9 * rng.gen::<f64>()).unwrap();
            let q = MoebiusParam::new(-10.0 + 10.9 * rng.gen::<f64>()).unwrap();
            let r = p.compose(&q);
            for &x in &grid {
                let lhs = p.eval(q.eval(x).unwrap()).unwrap();
                let rhs = r.eval(x).unwrap();
                assert!((lhs - rhs).abs() < 1e-12, "p={} q={} x={}", p.value(), q.value(), x);
                let back = p.inverse().eval(p.eval(x).unwrap()).unwrap();
                assert!((back - x).abs() < 1e-13);
            }
        }
    }

    fn random_effect_matrix(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
        let g = nalgebra::DMatrix::from_fn(n, n, |_, _| {
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let h = hermitianize(&(&g * g.adjoint())).unwrap();
        let scale = 1.0 / (h.max_eigenvalue().unwrap() + 0.05);
        h.scale(scale)
    }

    #[test]
    fn matrix_fixed_points() {
        for p in [-2.0, -0.5, 0.4] {
            let f = MoebiusParam::new(p).unwrap();
            let z = HermitianMatrix::zeros(3);
            assert!(f.eval_matrix_spectral(&z).unwrap().frobenius_norm() < 1e-15);
            let i = HermitianMatrix::identity(3);
            let fi = f.eval_matrix_spectral(&i).unwrap();
            assert!(fi.sub(&i).unwrap().frobenius_norm() < 1e-14);
        }
    }

    #[test]
    fn matrix_diagonal_example() {
        // f_{-1} on diag(1/2, 1) is diag(1/3, 1) for both routes.
        let f = MoebiusParam::new(-1.0).unwrap();
        let a = HermitianMatrix::from_real_diagonal(&[0.5, 1.0]);
        for out in [
            f.eval_matrix_spectral(&a).unwrap(),
            f.eval_matrix_resolvent(&a).unwrap(),
        ] {
            assert!((out.entry(0, 0).re - 1.0 / 3.0).abs() < 1e-14);
            assert!((out.entry(1, 1).re - 1.0).abs() < 1e-14);
            assert!(out.entry(0, 1).norm() < 1e-15);
        }
    }

    #[test]
    fn routes_agree_on_random_effects() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for p in [-3.0, -1.0, -0.2, 0.3, 0.8] {
            let f = MoebiusParam::new(p).unwrap();
            for n in 2..=6 {
                for _ in 0..20 {
                    let a = random_effect_matrix(&mut rng, n);
                    let s = f.eval_matrix_spectral(&a).unwrap();
                    let r = f.eval_matrix_resolvent(&a).unwrap();
                    let dev = s.sub(&r).unwrap().frobenius_norm() / (1.0 + a.frobenius_norm());
                    assert!(dev < 1e-12, "p={p} n={n} dev={dev:.3e}");
                }
            }
        }
    }

    #[test]
    fn resolvent_rejects_p_zero_and_bad_spectra() {
        let id = HermitianMatrix::identity(2);
        assert!(MoebiusParam::identity().eval_matrix_resolvent(&id).is_err());
        // Spectral route at p = 0 is fine and is the identity map.
        let s = MoebiusParam::identity().eval_matrix_spectral(&id).unwrap();
        assert!(s.sub(&id).unwrap().frobenius_norm() < 1e-14);

        let f = MoebiusParam::new(-1.0).unwrap();
        let too_big = HermitianMatrix::from_real_diagonal(&[0.5, 1.96]);
        assert!(matches!(
            f.eval_matrix_spectral(&too_big),
            Err(Error::SpectrumOutsideDomain { .. })
        ));
        assert!(f.eval_matrix_resolvent(&too_big).is_err());
        let indef = HermitianMatrix::from_real_diagonal(&[0.5, -0.1]);
        assert!(matches!(
            f.eval_matrix_spectral(&indef),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn matrix_bijection_on_effects() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let f = MoebiusParam::new(-1.5).unwrap();
        for _ in 0..20 {
            let a = random_effect_matrix(&mut rng, 4);
            let fa = f.eval_matrix_spectral(&a).unwrap();
            let back = f.inverse().eval_matrix_spectral(&fa).unwrap();
            assert!(back.sub(&a).unwrap().frobenius_norm() < 1e-9);
        }
    }

    #[test]
    fn monotone_on_scalars() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for p in [-2.0, -0.5, 0.3, 0.7] {
            let f = MoebiusParam::new(p).unwrap();
            for _ in 0..200 {
                let x = rng.gen::<f64>();
                let y = rng.gen::<f64>();
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                assert!(f.eval(lo).unwrap() <= f.eval(hi).unwrap() + 1e-15);
            }
        }
    }
}
