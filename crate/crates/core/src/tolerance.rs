//! Numeric contract shared by every module.
//!
//! All formulas in this crate are exact in real arithmetic; floating point
//! forces a tolerance model. The base tolerance is [`SPECTRAL_TOL`], scaled
//! by dimension and condition numbers where inverses appear. Everything else
//! is derived from it or pinned here so no operation invents its own magic
//! number.

/// Base tolerance for spectral computations (eigendecomposition residuals,
/// functional-calculus agreement, congruence identities).
pub const SPECTRAL_TOL: f64 = 1e-9;

/// Eigenvalues in `[-PSD_CLAMP_TOL, 0)` are treated as round-off and clamped
/// to zero when a positive semidefinite result is expected. Anything below
/// is a genuine violation and is rejected.
pub const PSD_CLAMP_TOL: f64 = 1e-10;

/// A matrix or operator counts as invertible only if its smallest singular
/// value (smallest `|eigenvalue|` in the Hermitian case) is at least this.
pub const INVERTIBILITY_TOL: f64 = 1e-10;

/// Relative guard band around the pole of `f_p` for `p < 0`.
///
/// The scalar domain is `[0, 1 - 1/p)` with a pole at `x0 = 1 - 1/p > 1`.
/// Evaluation refuses spectra closer to the pole than
/// `DOMAIN_MARGIN * (x0 - 1)`, i.e. the margin is measured relative to the
/// gap between the pole and the top of the unit interval. Effect-algebra
/// arguments (spectrum in `[0, 1]`) therefore pass for every `p < 0`, while
/// near-pole evaluations with unbounded derivative are rejected.
pub const DOMAIN_MARGIN: f64 = 0.05;

/// Accuracy demanded of the boundary-extension limit: the extrapolated
/// limit of `phi(A_n)` along `A_n = (1 - 1/n) A + (1/n) I` must agree with
/// the direct evaluation at `A` to this tolerance.
pub const CONVERGENCE_TOL: f64 = 1e-6;

/// Default cap on the condition number of randomly sampled operators.
/// Ill-conditioned `T` makes every tolerance statement meaningless at desk
/// scale, so the samplers keep `cond(T)` bounded unless told otherwise.
pub const DEFAULT_COND_MAX: f64 = 10.0;

/// Default distance that sampled effect spectra keep from both ends of
/// `[0, 1]`.
pub const DEFAULT_INTERIOR_MARGIN: f64 = 0.05;

/// Multiplier applied to `n * machine_epsilon * norm` in eigendecomposition
/// residual checks. Covers the constant hidden in the backward-error bound
/// of the tridiagonal QR iteration.
pub const EIGH_RESIDUAL_FACTOR: f64 = 100.0;
