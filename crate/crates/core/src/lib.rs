//! Numerical toolkit for the Loewner order on the effect algebra `[0, I]`.
//!
//! The crate models finite-dimensional effects (Hermitian matrices `A` with
//! `0 <= A <= I` on `C^n`) and the order automorphisms of that interval:
//!
//! - the Moebius function group `f_p(x) = x / (p x + 1 - p)`, `p < 1`, with
//!   scalar and matrix functional calculus ([`moebius`]);
//! - invertible linear and conjugate-linear operators with adjoints,
//!   congruences `A -> T A T*`, and phase classes ([`operator`]);
//! - the order anti-isomorphisms between `(0, I]` and the positive cone
//!   ([`interval`]);
//! - three equivalent parameterizations of effect-algebra order
//!   automorphisms with constructive conversions between them
//!   ([`automorphism`]);
//! - seeded samplers ([`sampling`]) and property suites that certify the
//!   algebraic identities numerically ([`verify`]).

pub mod automorphism;
pub mod error;
pub mod hermitian;
pub mod interval;
pub mod io;
pub mod moebius;
pub mod operator;
pub mod sampling;
pub mod tolerance;
pub mod verify;

pub use automorphism::{
    boundary_profile, compose_automorphisms, equal_pointwise, invert_automorphism, limit_apply,
    AltParams, AutomorphismForm, BoundaryProfile, BoundaryStep, CanonicalParams,
    CongruenceParams, Lambda, PointwiseComparison,
};
pub use error::{Error, Result};
pub use hermitian::{hermitianize, loewner_leq, HermitianMatrix, SpectralDecomposition, C64};
pub use interval::{cone_automorphism, from_cone, Effect};
pub use moebius::MoebiusParam;
pub use operator::{BoundedOperator, OperatorKind, PhaseClass};
pub use sampling::SamplerConfig;
pub use verify::{run_all, run_suite, VerificationReport, VerifyConfig, SUITE_NAMES};
