//! Seeded random generators for effects, ordered pairs, and invertible
//! operators.
//!
//! Randomness is keyed by `(seed, stream_index)`: the seed fixes the
//! generator key and the stream index selects an independent substream, so
//! trial `k` of a verification run can be replayed in isolation. Identical
//! keys reproduce identical samples bit for bit on every platform (the
//! generator is ChaCha with a fixed consumption order; no OS entropy is
//! involved anywhere).

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::automorphism::CanonicalParams;
use crate::error::{Error, Result};
use crate::hermitian::{hermitianize, C64};
use crate::interval::Effect;
use crate::moebius::MoebiusParam;
use crate::operator::{BoundedOperator, OperatorKind};
use crate::tolerance::{DEFAULT_COND_MAX, DEFAULT_INTERIOR_MARGIN};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SamplerConfig {
    pub seed: u64,
    pub dim: usize,
    /// Upper bound on the condition number of sampled operators.
    pub cond_max: f64,
    /// Sampled effect eigenvalues stay in `[margin, 1 - margin]`.
    pub interior_margin: f64,
    /// Probability that a sampled operator is antilinear.
    pub kind_mix: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            seed: 0,
            dim: 4,
            cond_max: DEFAULT_COND_MAX,
            interior_margin: DEFAULT_INTERIOR_MARGIN,
            kind_mix: 0.5,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidConfig("dim must be at least 1".into()));
        }
        if !self.cond_max.is_finite() || self.cond_max < 1.0 {
            return Err(Error::InvalidConfig(format!(
                "cond_max must be finite and >= 1, got {}",
                self.cond_max
            )));
        }
        if !(0.0..0.5).contains(&self.interior_margin) {
            return Err(Error::InvalidConfig(format!(
                "interior_margin must lie in [0, 0.5), got {}",
                self.interior_margin
            )));
        }
        if !(0.0..=1.0).contains(&self.kind_mix) {
            return Err(Error::InvalidConfig(format!(
                "kind_mix must lie in [0, 1], got {}",
                self.kind_mix
            )));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_dim(mut self, dim: usize) -> Self {
        self.dim = dim;
        self
    }

    pub fn with_cond_max(mut self, cond_max: f64) -> Self {
        self.cond_max = cond_max;
        self
    }

    pub fn with_interior_margin(mut self, margin: f64) -> Self {
        self.interior_margin = margin;
        self
    }

    fn rng(&self, stream_index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream_index);
        rng
    }
}

/// Standard complex Gaussian via Box-Muller (real and imaginary parts are
/// independent `N(0, 1/2)`, so `E|z|^2 = 1`).
fn gaussian_c64(rng: &mut ChaCha8Rng) -> C64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    let r = (-u1.ln()).sqrt();
    let theta = 2.0 * std::f64::consts::PI * u2;
    C64::new(r * theta.cos(), r * theta.sin())
}

fn gaussian_matrix(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    DMatrix::from_fn(n, n, |_, _| gaussian_c64(rng))
}

/// Haar-distributed unitary: QR of a complex Gaussian with the phase
/// convention fixed by making the diagonal of R positive.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> DMatrix<C64> {
    let g = gaussian_matrix(rng, n);
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..n {
        let d = r[(k, k)];
        let phase = if d.norm() == 0.0 { C64::new(1.0, 0.0) } else { d / d.norm() };
        for i in 0..n {
            q[(i, k)] *= phase;
        }
    }
    q
}

fn effect_from_eigenvalues(rng: &mut ChaCha8Rng, values: &[f64]) -> Result<Effect> {
    let n = values.len();
    let u = random_unitary(rng, n);
    let mut d = DMatrix::<C64>::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        d[(i, i)] = C64::new(v, 0.0);
    }
    Effect::new(hermitianize(&(&u * d * u.adjoint()))?)
}

/// A random effect with eigenvalues uniform in
/// `[interior_margin, 1 - interior_margin]` and a Haar-random eigenbasis.
pub fn random_effect(cfg: &SamplerConfig, stream_index: u64) -> Result<Effect> {
    cfg.validate()?;
    let mut rng = cfg.rng(stream_index);
    let m = cfg.interior_margin;
    let values: Vec<f64> = (0..cfg.dim).map(|_| m + (1.0 - 2.0 * m) * rng.gen::<f64>()).collect();
    effect_from_eigenvalues(&mut rng, &values)
}

/// A comparable pair `A <= B`, both inside `[0, I]`. `B = A + s P` with `P`
/// positive semidefinite and `s` sized so the top eigenvalue stays below
/// `1 - interior_margin`; `s = 0` (equality) occurs with density at the
/// endpoint and is legal.
pub fn random_ordered_pair(cfg: &SamplerConfig, stream_index: u64) -> Result<(Effect, Effect)> {
    cfg.validate()?;
    let mut rng = cfg.rng(stream_index);
    let m = cfg.interior_margin;
    let values: Vec<f64> = (0..cfg.dim).map(|_| m + (1.0 - 2.0 * m) * rng.gen::<f64>()).collect();
    let a = effect_from_eigenvalues(&mut rng, &values)?;

    let g = gaussian_matrix(&mut rng, cfg.dim);
    let p = hermitianize(&(&g * g.adjoint()))?;
    let p_top = p.max_eigenvalue()?;
    let headroom = (1.0 - m) - a.matrix().max_eigenvalue()?;
    let s = if headroom > 0.0 && p_top > 0.0 {
        rng.gen::<f64>() * headroom / p_top
    } else {
        0.0
    };
    let b = Effect::new(a.matrix().add(&p.scale(s))?)?;
    Ok((a, b))
}

/// A boundary effect: exactly `rank_deficiency` zero eigenvalues, the rest
/// uniform in `[interior_margin, 1 - interior_margin]`.
pub fn random_boundary_effect(
    cfg: &SamplerConfig,
    stream_index: u64,
    rank_deficiency: usize,
) -> Result<Effect> {
    cfg.validate()?;
    if rank_deficiency == 0 || rank_deficiency >= cfg.dim {
        return Err(Error::RankDeficiencyTooLarge {
            rank_deficiency,
            dim: cfg.dim,
        });
    }
    let mut rng = cfg.rng(stream_index);
    let m = cfg.interior_margin;
    let mut values = vec![0.0; rank_deficiency];
    values.extend((rank_deficiency..cfg.dim).map(|_| m + (1.0 - 2.0 * m) * rng.gen::<f64>()));
    effect_from_eigenvalues(&mut rng, &values)
}

/// An invertible operator `U diag(sigma) V^H` with log-uniform singular
/// values in `[cond_max^-1/2, cond_max^1/2]` and kind drawn from `kind_mix`.
pub fn random_invertible_operator(
    cfg: &SamplerConfig,
    stream_index: u64,
) -> Result<BoundedOperator> {
    cfg.validate()?;
    let mut rng = cfg.rng(stream_index);
    random_operator_with(&mut rng, cfg)
}

fn random_operator_with(rng: &mut ChaCha8Rng, cfg: &SamplerConfig) -> Result<BoundedOperator> {
    let n = cfg.dim;
    let half_log = 0.5 * cfg.cond_max.ln();
    let sigmas: Vec<f64> = (0..n)
        .map(|_| ((2.0 * rng.gen::<f64>() - 1.0) * half_log).exp())
        .collect();
    let u = random_unitary(rng, n);
    let v = random_unitary(rng, n);
    let mut d = DMatrix::<C64>::zeros(n, n);
    for (i, &s) in sigmas.iter().enumerate() {
        d[(i, i)] = C64::new(s, 0.0);
    }
    let m = &u * d * v.adjoint();
    let kind = if rng.gen::<f64>() < cfg.kind_mix {
        OperatorKind::Antilinear
    } else {
        OperatorKind::Linear
    };
    BoundedOperator::new(kind, m)
}

/// A random automorphism in canonical form: `p` uniform in
/// `[p_lo, p_hi]` (both negative) and `T` from
/// [`random_invertible_operator`]'s distribution.
pub fn random_canonical(
    cfg: &SamplerConfig,
    stream_index: u64,
    p_lo: f64,
    p_hi: f64,
) -> Result<CanonicalParams> {
    cfg.validate()?;
    if !(p_lo.is_finite() && p_hi.is_finite()) || p_lo > p_hi || p_hi >= 0.0 {
        return Err(Error::InvalidConfig(format!(
            "p range must satisfy p_lo <= p_hi < 0, got [{p_lo}, {p_hi}]"
        )));
    }
    let mut rng = cfg.rng(stream_index);
    let p = MoebiusParam::new(p_lo + (p_hi - p_lo) * rng.gen::<f64>())?;
    let t = random_operator_with(&mut rng, cfg)?;
    CanonicalParams::new(p, t)
}
