//! Order automorphisms of the interval `[0, I]`.
//!
//! Every order automorphism of the interval is determined by a parameter
//! `p < 0` and an invertible linear or antilinear operator `T`:
//!
//! ```text
//! phi_{p,T}(A) = f_p( D^{1/2} (I - (I + T A T*)^-1) D^{1/2} ),
//! D = I + (T T*)^-1
//! ```
//!
//! with `f_p` from the `moebius` module. The same map admits two other
//! parameterizations, each implemented independently so they can be played
//! against each other:
//!
//! - the congruence form `phi(A) = (I + S (A^-1 - I) S*)^-1`, a conjugation
//!   on the positive cone pulled back through the interval-cone
//!   correspondence (defined on strictly positive effects only);
//! - the contraction form `f_p( f_r(S S*)^-1/2 f_r(S A S*) f_r(S S*)^-1/2 )`
//!   with `||S|| <= 1` and a ratio `r` in `(0, 1)`.
//!
//! Conversions between the three forms are exact at the parameter level.
//! `T` enters only through its phase class: `zT` with `|z| = 1` gives the
//! same map. The inner argument `D^{1/2}(I - (I+TAT*)^-1)D^{1/2}` always has
//! spectrum in `[0, 1]`, so any `p < 0` is admissible for the outer `f_p`.
//!
//! The congruence form breaks down at boundary effects (singular `A`);
//! [`limit_apply`] extends it by evaluating along the interior sequence
//! `A_n = (1 - 1/n) A + (1/n) I` and extrapolating in `1/n`, which the
//! direct canonical formula must match. [`boundary_profile`] exposes the
//! per-step gaps for inspection.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{hermitianize, HermitianMatrix};
use crate::interval::{cone_automorphism, from_cone, Effect};
use crate::moebius::MoebiusParam;
use crate::operator::BoundedOperator;
use crate::sampling::{random_effect, SamplerConfig};
use crate::tolerance::{CONVERGENCE_TOL, INVERTIBILITY_TOL, PSD_CLAMP_TOL};

/// `O M O` for Hermitian `O`, re-symmetrized.
fn sandwich(outer: &HermitianMatrix, mid: &HermitianMatrix) -> Result<HermitianMatrix> {
    hermitianize(&(outer.matrix() * mid.matrix() * outer.matrix()))
}

/// The canonical parameterization `(p, T)` with `p < 0` and `T` invertible.
///
/// Construction precomputes `T T*`, `D^{1/2}`, and `D^{-1/2}`; the struct is
/// immutable afterwards. Equality compares the defining data `(p, T)`.
#[derive(Debug, Clone)]
pub struct CanonicalParams {
    p: MoebiusParam,
    t: BoundedOperator,
    d_half: HermitianMatrix,
    d_inv_half: HermitianMatrix,
}

impl PartialEq for CanonicalParams {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.t == other.t
    }
}

/// Choice of the auxiliary scale in [`CanonicalParams::from_congruence`].
/// Every admissible value yields the same automorphism; `Auto` picks
/// `max(1, ||S||^2) + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lambda {
    Auto,
    Value(f64),
}

impl CanonicalParams {
    pub fn new(p: MoebiusParam, t: BoundedOperator) -> Result<Self> {
        if p.value() >= 0.0 {
            return Err(Error::ParameterNotNegative { p: p.value() });
        }
        t.require_invertible(INVERTIBILITY_TOL)?;
        let tt_star = t.times_adjoint();
        let n = t.dim();
        let d = HermitianMatrix::identity(n).add(&tt_star.inv_hermitian()?)?;
        let d_half = d.sqrt_psd()?;
        let d_inv_half = d.inv_sqrt_psd()?;
        Ok(CanonicalParams {
            p,
            t,
            d_half,
            d_inv_half,
        })
    }

    pub fn p(&self) -> &MoebiusParam {
        &self.p
    }

    pub fn operator(&self) -> &BoundedOperator {
        &self.t
    }

    pub fn dim(&self) -> usize {
        self.t.dim()
    }

    /// The inner argument `D^{1/2} (I - (I + T A T*)^-1) D^{1/2}`. Its
    /// spectrum lies in `[0, 1]` for every effect `A`.
    fn inner_argument(&self, a: &Effect) -> Result<HermitianMatrix> {
        let n = self.dim();
        let id = HermitianMatrix::identity(n);
        let k = id.add(&self.t.congruence(a.matrix())?)?;
        let inner = id.sub(&k.inv_hermitian()?)?;
        sandwich(&self.d_half, &inner)
    }

    pub fn apply(&self, a: &Effect) -> Result<Effect> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: a.dim(),
            });
        }
        Effect::new(self.p.eval_matrix_spectral(&self.inner_argument(a)?)?)
    }

    /// Same map through the factorization
    /// `I - (I + Y)^-1 = (1/2) f_{1/2}(Y)`: the inner argument becomes
    /// `(1/2) D^{1/2} f_{1/2}(T A T*) D^{1/2}`. Used as a cross-check path.
    pub fn apply_via_half_factorization(&self, a: &Effect) -> Result<Effect> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: a.dim(),
            });
        }
        let half = MoebiusParam::new(0.5).expect("0.5 < 1");
        let fy = half.eval_matrix_spectral(&self.t.congruence(a.matrix())?)?;
        let x = sandwich(&self.d_half, &fy)?.scale(0.5);
        Effect::new(self.p.eval_matrix_spectral(&x)?)
    }

    /// The inverse map, unwound step by step:
    /// `X = f_{p^-1}(B)`, `Y = D^{-1/2} X D^{-1/2}`, `Z = (I - Y)^-1 - I`
    /// (`I - Y` is positive definite for every effect `B`), and finally
    /// `A = T^-1 Z (T^-1)*`.
    pub fn invert_apply(&self, b: &Effect) -> Result<Effect> {
        if b.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: b.dim(),
            });
        }
        let n = self.dim();
        let id = HermitianMatrix::identity(n);
        let x = self.p.inverse().eval_matrix_spectral(b.matrix())?;
        let y = sandwich(&self.d_inv_half, &x)?;
        let z = id.sub(&y)?.inv_hermitian()?.sub(&id)?;
        Effect::new(self.t.invert()?.congruence(&z)?)
    }

    /// Conversion to the congruence form:
    /// `S = sqrt(1 - p) (I + (T T*)^-1)^-1/2 (T*)^-1`.
    pub fn to_congruence(&self) -> Result<CongruenceParams> {
        let lam = self.p.to_positive_real();
        let factor = BoundedOperator::linear(
            self.d_inv_half.scale(lam.sqrt()).into_matrix(),
        )?;
        let t_star_inv = self.t.adjoint().invert()?;
        CongruenceParams::new(factor.compose(&t_star_inv)?)
    }

    /// Conversion to the contraction form. For `||T|| <= 1` the ratio is
    /// `1/2` and `S = T`; otherwise `S = T/||T||` and
    /// `r = ||T||^2 / (1 + ||T||^2)`.
    pub fn to_alt(&self) -> Result<AltParams> {
        let norm = self.t.operator_norm();
        if norm <= 1.0 {
            AltParams::new(self.p, 0.5, self.t.clone())
        } else {
            let r = norm * norm / (1.0 + norm * norm);
            AltParams::new(self.p, r, self.t.scale_real(1.0 / norm))
        }
    }

    /// Recovers a canonical parameterization from the congruence form. The
    /// scale `lambda` must exceed `max(1, ||S||^2)`; the resulting map does
    /// not depend on the choice. With `q = 1 - 1/lambda`:
    /// `R = (lambda I - S S*)^-1/2 S`, `T = (R*)^-1`, `p = q/(q-1)`.
    pub fn from_congruence(g: &CongruenceParams, lambda: Lambda) -> Result<CanonicalParams> {
        let ss_star = g.operator().times_adjoint();
        let norm_sq = ss_star.max_eigenvalue()?;
        let bound = norm_sq.max(1.0);
        let lam = match lambda {
            Lambda::Auto => bound + 1.0,
            Lambda::Value(v) => {
                if !v.is_finite() || v <= bound {
                    return Err(Error::LambdaTooSmall { lambda: v, bound });
                }
                v
            }
        };
        let n = g.dim();
        let shifted = HermitianMatrix::identity(n).scale(lam).sub(&ss_star)?;
        let factor = BoundedOperator::linear(shifted.inv_sqrt_psd()?.into_matrix())?;
        let r_op = factor.compose(g.operator())?;
        let t = r_op.adjoint().invert()?;
        let q = MoebiusParam::new(1.0 - 1.0 / lam)?;
        CanonicalParams::new(q.inverse(), t)
    }
}

/// The congruence parameterization: an invertible `S` acting on the cone,
/// `phi(A) = (I + S (A^-1 - I) S*)^-1`. Defined on strictly positive
/// effects; use [`limit_apply`] at the boundary.
#[derive(Debug, Clone, PartialEq)]
pub struct CongruenceParams {
    s: BoundedOperator,
}

impl CongruenceParams {
    pub fn new(s: BoundedOperator) -> Result<Self> {
        s.require_invertible(INVERTIBILITY_TOL)?;
        Ok(CongruenceParams { s })
    }

    pub fn operator(&self) -> &BoundedOperator {
        &self.s
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// `tol` is the strict-positivity threshold passed to the interval-cone
    /// map; effects with smaller minimum eigenvalue are rejected.
    pub fn apply(&self, a: &Effect, tol: f64) -> Result<Effect> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: a.dim(),
            });
        }
        let x = a.to_cone(tol)?;
        from_cone(&cone_automorphism(&self.s, &x)?)
    }

    /// Composition in the same parameterization:
    /// `phi_{S1} . phi_{S2} = phi_{S1 S2}` (operator composition, so the
    /// kinds multiply: two antilinear factors give a linear product).
    pub fn compose(&self, inner: &CongruenceParams) -> Result<CongruenceParams> {
        CongruenceParams::new(self.s.compose(&inner.s)?)
    }

    pub fn invert(&self) -> Result<CongruenceParams> {
        CongruenceParams::new(self.s.invert()?)
    }
}

/// The contraction parameterization `(p, r, S)` with `p < 0`, `r` in
/// `(0, 1)`, and `||S|| <= 1` invertible.
#[derive(Debug, Clone, PartialEq)]
pub struct AltParams {
    p: MoebiusParam,
    r: f64,
    s: BoundedOperator,
}

impl AltParams {
    pub fn new(p: MoebiusParam, r: f64, s: BoundedOperator) -> Result<Self> {
        if p.value() >= 0.0 {
            return Err(Error::ParameterNotNegative { p: p.value() });
        }
        if !r.is_finite() || r <= 0.0 || r >= 1.0 {
            return Err(Error::InvalidAltRatio { r });
        }
        let norm = s.operator_norm();
        if norm > 1.0 + PSD_CLAMP_TOL {
            return Err(Error::NormExceedsOne { norm });
        }
        s.require_invertible(INVERTIBILITY_TOL)?;
        Ok(AltParams { p, r, s })
    }

    pub fn p(&self) -> &MoebiusParam {
        &self.p
    }

    pub fn ratio(&self) -> f64 {
        self.r
    }

    pub fn operator(&self) -> &BoundedOperator {
        &self.s
    }

    pub fn dim(&self) -> usize {
        self.s.dim()
    }

    /// `f_p( G^-1/2 f_r(S A S*) G^-1/2 )` with `G = f_r(S S*)`.
    pub fn apply(&self, a: &Effect) -> Result<Effect> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: a.dim(),
            });
        }
        let fr = MoebiusParam::new(self.r).expect("validated in (0,1)");
        let g = fr.eval_matrix_spectral(&self.s.times_adjoint())?;
        let g_inv_half = g.inv_sqrt_psd()?;
        let w = fr.eval_matrix_spectral(&self.s.congruence(a.matrix())?)?;
        let x = sandwich(&g_inv_half, &w)?;
        Effect::new(self.p.eval_matrix_spectral(&x)?)
    }

    /// `T = sqrt(r / (1 - r)) S` recovers a canonical parameterization.
    pub fn to_canonical(&self) -> Result<CanonicalParams> {
        let scale = (self.r / (1.0 - self.r)).sqrt();
        CanonicalParams::new(self.p, self.s.scale_real(scale))
    }
}

/// An automorphism in any of the three parameterizations.
#[derive(Debug, Clone, PartialEq)]
pub enum AutomorphismForm {
    Canonical(CanonicalParams),
    Alt(AltParams),
    Congruence(CongruenceParams),
}

impl AutomorphismForm {
    pub fn dim(&self) -> usize {
        match self {
            AutomorphismForm::Canonical(c) => c.dim(),
            AutomorphismForm::Alt(a) => a.dim(),
            AutomorphismForm::Congruence(g) => g.dim(),
        }
    }

    /// Applies the map. The congruence form requires a strictly positive
    /// effect (threshold `INVERTIBILITY_TOL`); the other forms accept the
    /// whole interval.
    pub fn apply(&self, a: &Effect) -> Result<Effect> {
        match self {
            AutomorphismForm::Canonical(c) => c.apply(a),
            AutomorphismForm::Alt(alt) => alt.apply(a),
            AutomorphismForm::Congruence(g) => g.apply(a, INVERTIBILITY_TOL),
        }
    }

    pub fn to_canonical(&self, lambda: Lambda) -> Result<CanonicalParams> {
        match self {
            AutomorphismForm::Canonical(c) => Ok(c.clone()),
            AutomorphismForm::Alt(a) => a.to_canonical(),
            AutomorphismForm::Congruence(g) => CanonicalParams::from_congruence(g, lambda),
        }
    }

    pub fn to_congruence(&self) -> Result<CongruenceParams> {
        match self {
            AutomorphismForm::Congruence(g) => Ok(g.clone()),
            other => other.to_canonical(Lambda::Auto)?.to_congruence(),
        }
    }

    pub fn to_alt(&self) -> Result<AltParams> {
        match self {
            AutomorphismForm::Alt(a) => Ok(a.clone()),
            other => other.to_canonical(Lambda::Auto)?.to_alt(),
        }
    }
}

/// Composition `first . second` (apply `second` first), carried out in the
/// congruence parameterization where it is plain operator composition.
pub fn compose_automorphisms(
    first: &AutomorphismForm,
    second: &AutomorphismForm,
) -> Result<AutomorphismForm> {
    let g1 = first.to_congruence()?;
    let g2 = second.to_congruence()?;
    Ok(AutomorphismForm::Congruence(g1.compose(&g2)?))
}

pub fn invert_automorphism(form: &AutomorphismForm) -> Result<AutomorphismForm> {
    Ok(AutomorphismForm::Congruence(form.to_congruence()?.invert()?))
}

/// Result of sampling two automorphisms against each other.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PointwiseComparison {
    pub equal: bool,
    pub max_deviation: f64,
    pub trials: usize,
    /// Stream index of the worst trial; replay with the same seed to
    /// reproduce the sample.
    pub worst_stream: u64,
}

/// Compares two automorphisms on `trials` random interior effects
/// (minimum eigenvalue 0.05, keyed by `seed`). `equal` means the largest
/// Frobenius deviation stayed within `tol`.
pub fn equal_pointwise(
    f1: &AutomorphismForm,
    f2: &AutomorphismForm,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<PointwiseComparison> {
    if f1.dim() != f2.dim() {
        return Err(Error::DimensionMismatch {
            left: f1.dim(),
            right: f2.dim(),
        });
    }
    let cfg = SamplerConfig::default()
        .with_seed(seed)
        .with_dim(f1.dim())
        .with_interior_margin(0.05);
    let mut max_deviation = 0.0f64;
    let mut worst_stream = 0u64;
    for k in 0..trials {
        let a = random_effect(&cfg, k as u64)?;
        let x1 = f1.apply(&a)?;
        let x2 = f2.apply(&a)?;
        let dev = x1.matrix().sub(x2.matrix())?.frobenius_norm();
        if dev > max_deviation {
            max_deviation = dev;
            worst_stream = k as u64;
        }
    }
    Ok(PointwiseComparison {
        equal: max_deviation <= tol,
        max_deviation,
        trials,
        worst_stream,
    })
}

/// One step of the interior approach to a boundary effect.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundaryStep {
    pub k: u32,
    pub n: u64,
    /// `|| phi_cong(A_n) - phi(A) ||_F` against the direct canonical value.
    pub raw_gap: f64,
    /// Gap of the Richardson-extrapolated iterate (raw at `k = 1`,
    /// one-level at `k = 2`, two-level from `k = 3`).
    pub extrapolated_gap: f64,
}

/// Gap profile of the congruence path approaching a boundary effect.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundaryProfile {
    pub steps: Vec<BoundaryStep>,
}

impl BoundaryProfile {
    /// Raw gaps must not increase along the sequence (they are norms of
    /// PSD-ordered differences); `slack` absorbs round-off.
    pub fn raw_gaps_non_increasing(&self, slack: f64) -> bool {
        self.steps
            .windows(2)
            .all(|w| w[1].raw_gap <= w[0].raw_gap + slack)
    }

    pub fn final_extrapolated_gap(&self) -> Option<f64> {
        self.steps.last().map(|s| s.extrapolated_gap)
    }
}

fn congruence_at_mix(g: &CongruenceParams, a: &Effect, n: u64) -> Result<Effect> {
    let a_n = a.mix_with_identity(1.0 / n as f64)?;
    g.apply(&a_n, INVERTIBILITY_TOL)
}

/// Two-level Richardson extrapolation from the last three doubling
/// iterates: `(8 B_k - 6 B_{k-1} + B_{k-2}) / 3` eliminates the `1/n` and
/// `1/n^2` terms of the expansion in `1/n`.
fn richardson2(
    b_k: &HermitianMatrix,
    b_k1: &HermitianMatrix,
    b_k2: &HermitianMatrix,
) -> Result<HermitianMatrix> {
    b_k.scale(8.0 / 3.0)
        .sub(&b_k1.scale(2.0))?
        .add(&b_k2.scale(1.0 / 3.0))
}

/// Evaluates the automorphism at a (possibly boundary) effect through the
/// congruence path alone: `phi_cong(A_n)` along `A_n = (1-1/n)A + (1/n)I`
/// for `n = 2, 4, ..., n_max`, finished by two-level Richardson
/// extrapolation. Never calls the direct canonical formula, which makes the
/// result an independent check of it.
///
/// Errors if the extrapolated iterates have not settled to within
/// `CONVERGENCE_TOL` by `n_max`, or if `n_max < 8` (three iterates are
/// needed to extrapolate).
pub fn limit_apply(c: &CanonicalParams, a: &Effect, n_max: u64) -> Result<Effect> {
    if n_max < 8 {
        return Err(Error::InvalidConfig(format!(
            "n_max must be at least 8, got {n_max}"
        )));
    }
    if a.dim() != c.dim() {
        return Err(Error::DimensionMismatch {
            left: c.dim(),
            right: a.dim(),
        });
    }
    let g = c.to_congruence()?;
    let mut history: Vec<HermitianMatrix> = Vec::new();
    let mut prev_extrapolated: Option<HermitianMatrix> = None;
    let mut extrapolated: Option<HermitianMatrix> = None;
    let mut last_delta = f64::INFINITY;
    let mut n = 2u64;
    while n <= n_max {
        let b = congruence_at_mix(&g, a, n)?.into_matrix();
        history.push(b);
        let len = history.len();
        if len >= 3 {
            let e = richardson2(&history[len - 1], &history[len - 2], &history[len - 3])?;
            if let Some(prev) = &extrapolated {
                last_delta = e.sub(prev)?.frobenius_norm();
            }
            prev_extrapolated = extrapolated.take();
            extrapolated = Some(e);
        }
        n *= 2;
    }
    let _ = prev_extrapolated;
    let e = extrapolated.expect("n_max >= 8 gives at least three iterates");
    if last_delta > CONVERGENCE_TOL {
        return Err(Error::BoundaryNonConvergence { n_max, last_delta });
    }
    // Extrapolation can overshoot [0, I] by its own error; clamp within the
    // convergence budget and reject anything worse.
    let decomp = e.eigh()?;
    let mut values = Vec::with_capacity(decomp.eigenvalues.len());
    for &ev in &decomp.eigenvalues {
        if !(-CONVERGENCE_TOL..=1.0 + CONVERGENCE_TOL).contains(&ev) {
            return Err(Error::NotEffect { eig: ev });
        }
        values.push(ev.clamp(0.0, 1.0));
    }
    Effect::new(decomp.with_eigenvalues(&values)?)
}

/// Runs the interior sequence `A_{2^k}` for `k = 1..=k_max` through the
/// congruence path and records, per step, the raw and extrapolated gaps to
/// the direct canonical value `phi(A)`. This is the dual-path diagnostic:
/// the raw gaps must shrink monotonically and the extrapolated ones must
/// vanish to tolerance if the two routes implement the same map.
pub fn boundary_profile(c: &CanonicalParams, a: &Effect, k_max: u32) -> Result<BoundaryProfile> {
    if k_max < 1 {
        return Err(Error::InvalidConfig("k_max must be at least 1".into()));
    }
    let direct = c.apply(a)?;
    let g = c.to_congruence()?;
    let mut history: Vec<HermitianMatrix> = Vec::new();
    let mut steps = Vec::with_capacity(k_max as usize);
    for k in 1..=k_max {
        let n = 1u64 << k;
        let b = congruence_at_mix(&g, a, n)?.into_matrix();
        let raw_gap = b.sub(direct.matrix())?.frobenius_norm();
        history.push(b);
        let len = history.len();
        let extrapolated_gap = if len >= 3 {
            richardson2(&history[len - 1], &history[len - 2], &history[len - 3])?
                .sub(direct.matrix())?
                .frobenius_norm()
        } else if len == 2 {
            history[1]
                .scale(2.0)
                .sub(&history[0])?
                .sub(direct.matrix())?
                .frobenius_norm()
        } else {
            raw_gap
        };
        steps.push(BoundaryStep {
            k,
            n,
            raw_gap,
            extrapolated_gap,
        });
    }
    Ok(BoundaryProfile { steps })
}
