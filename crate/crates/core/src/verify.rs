//! Randomized verification suites over the library's mathematical claims.
//!
//! Each suite samples its inputs from seeded streams, checks one family of
//! identities, and produces a [`VerificationReport`]. Within a suite every
//! named check has its own raw tolerance; violations are normalized by it,
//! so a report passes iff `max_violation <= 1` and `failures == 0`. The
//! `details` map carries the worst raw value seen per check next to its raw
//! tolerance, and `worst_witness` holds a replayable description (seed,
//! stream, parameters) of the worst trial, whether or not it failed.
//!
//! Checks of a strict dichotomy (a difference must be indefinite, not
//! one-signed) can land in a numerical gray zone; such trials are counted
//! as `indeterminate` and reported, never failed. Samples rejected before
//! the check ran (parameter guards, resampling exhaustion) are counted
//! under `rejected`.
//!
//! Reports serialize to JSON. `normalized()` strips the wall time, and two
//! runs with the same config produce identical normalized reports.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automorphism::{
    boundary_profile, compose_automorphisms, invert_automorphism, AutomorphismForm,
    CanonicalParams, Lambda,
};
use crate::error::{Error, Result};
use crate::hermitian::C64;
use crate::interval::Effect;
use crate::io::{MatrixJson, OperatorJson};
use crate::moebius::MoebiusParam;
use crate::operator::OperatorKind;
use crate::sampling::{
    random_boundary_effect, random_canonical, random_effect, random_invertible_operator,
    random_ordered_pair, SamplerConfig,
};
use crate::tolerance::INVERTIBILITY_TOL;

pub const SUITE_NAMES: [&str; 6] = [
    "moebius-group",
    "operator-monotone",
    "automorphism-order",
    "representation-equivalence",
    "boundary-extension",
    "phase-and-group",
];

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Inclusive dimension range; each suite has its own default.
    pub dims: Option<(usize, usize)>,
    /// Per-cell trial count override.
    pub trials: Option<usize>,
    /// Replaces every per-check raw tolerance. Meant for diagnostics: an
    /// unreachable value (say 1e-16) turns the margins themselves into
    /// reported violations instead of crashes.
    pub tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CheckDetail {
    /// Worst raw value observed for this check.
    pub worst: f64,
    /// Raw tolerance the check is held to.
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub statement: String,
    pub trials: usize,
    pub failures: usize,
    pub indeterminate: usize,
    pub rejected: usize,
    /// Worst violation across all checks, normalized by each check's raw
    /// tolerance; the suite passes iff this stays at or below `tolerance`.
    pub max_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub details: BTreeMap<String, CheckDetail>,
    pub worst_witness: Option<Value>,
    pub config: Value,
    pub wall_time_s: f64,
}

impl VerificationReport {
    /// JSON form with the wall time removed; identical configs give
    /// identical normalized reports.
    pub fn normalized(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("wall_time_s");
        v
    }

    pub fn human_row(&self) -> String {
        format!(
            "{:<28} {:>6} trials {:>4} fail {:>4} indet {:>4} rej  max {:>9.3e}  {}",
            self.suite,
            self.trials,
            self.failures,
            self.indeterminate,
            self.rejected,
            self.max_violation,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Accumulates per-trial checks; converts to a report at the end.
struct SuiteRun {
    suite: &'static str,
    statement: &'static str,
    start: Instant,
    trials: usize,
    failures: usize,
    indeterminate: usize,
    rejected: usize,
    trial_failed: bool,
    in_trial: bool,
    max_violation: f64,
    details: BTreeMap<String, CheckDetail>,
    worst_witness: Option<Value>,
    tol_override: Option<f64>,
}

impl SuiteRun {
    fn new(suite: &'static str, statement: &'static str, cfg: &VerifyConfig) -> Result<Self> {
        if let Some(t) = cfg.tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(Error::InvalidConfig(format!(
                    "tolerance override must be positive and finite, got {t}"
                )));
            }
        }
        Ok(SuiteRun {
            suite,
            statement,
            start: Instant::now(),
            trials: 0,
            failures: 0,
            indeterminate: 0,
            rejected: 0,
            trial_failed: false,
            in_trial: false,
            max_violation: 0.0,
            details: BTreeMap::new(),
            worst_witness: None,
            tol_override: cfg.tol,
        })
    }

    fn flush_trial(&mut self) {
        if self.in_trial {
            self.trials += 1;
            if self.trial_failed {
                self.failures += 1;
            }
        }
        self.trial_failed = false;
        self.in_trial = false;
    }

    fn begin_trial(&mut self) {
        self.flush_trial();
        self.in_trial = true;
    }

    /// Records a raw value against its tolerance; `witness` is only invoked
    /// when this becomes the worst normalized violation so far.
    fn check(&mut self, name: &str, raw: f64, tol: f64, witness: impl FnOnce() -> Value) {
        let tol = self.tol_override.unwrap_or(tol);
        let entry = self.details.entry(name.to_string()).or_insert(CheckDetail {
            worst: 0.0,
            tolerance: tol,
        });
        if raw > entry.worst {
            entry.worst = raw;
        }
        let ratio = raw / tol;
        if ratio > self.max_violation {
            self.max_violation = ratio;
            self.worst_witness = Some(witness());
        }
        if ratio > 1.0 {
            self.trial_failed = true;
        }
    }

    fn mark_indeterminate(&mut self) {
        self.indeterminate += 1;
    }

    fn mark_rejected(&mut self) {
        self.rejected += 1;
    }

    fn finish(mut self, config: Value) -> VerificationReport {
        self.flush_trial();
        let mut config = config;
        if let Some(t) = self.tol_override {
            config["tol_override"] = json!(t);
        }
        let pass = self.failures == 0 && self.max_violation <= 1.0;
        VerificationReport {
            suite: self.suite.to_string(),
            statement: self.statement.to_string(),
            trials: self.trials,
            failures: self.failures,
            indeterminate: self.indeterminate,
            rejected: self.rejected,
            max_violation: self.max_violation,
            tolerance: 1.0,
            pass,
            details: self.details,
            worst_witness: self.worst_witness,
            config,
            wall_time_s: self.start.elapsed().as_secs_f64(),
        }
    }
}

fn dims_range(cfg: &VerifyConfig, default: (usize, usize)) -> Result<(usize, usize)> {
    let (lo, hi) = cfg.dims.unwrap_or(default);
    if lo < 1 || lo > hi {
        return Err(Error::InvalidConfig(format!(
            "invalid dimension range [{lo}, {hi}]"
        )));
    }
    Ok((lo, hi))
}

/// Group laws of `f_p` checked pointwise on a fixed grid over `[0, 1]`:
/// composition at `1e-12`, inverse and isomorphism laws at `1e-14`.
pub fn suite_moebius_group(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut run = SuiteRun::new(
        "moebius-group",
        "f_p o f_q = f_{p+q-pq} on [0,1]; f_p^-1 = f_{p/(p-1)}; a -> f_{1-a} turns products into compositions",
        cfg,
    )?;
    let trials = cfg.trials.unwrap_or(10_000);
    let grid: Vec<f64> = (0..=100).map(|k| k as f64 / 100.0).collect();

    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);

    for _ in 0..trials {
        let p_raw = -10.0 + 11.0 * rng.gen::<f64>();
        let q_raw = -10.0 + 11.0 * rng.gen::<f64>();
        run.begin_trial();
        let (p, q) = match (MoebiusParam::new(p_raw), MoebiusParam::new(q_raw)) {
            (Ok(p), Ok(q)) => (p, q),
            _ => {
                // Draw landed inside the rejection band at 1.
                run.mark_rejected();
                continue;
            }
        };
        let r = p.compose(&q);
        let p_inv = p.inverse();
        // Parameter-level inverse law: compose(p, p/(p-1)) = 0.
        let inv_err = p.compose(&p_inv).value().abs();
        run.check("inverse", inv_err, 1e-14, || {
            json!({"seed": cfg.seed, "p": p.value()})
        });
        // Pointwise round trip, normalized by its conditioning: the inverse
        // parameter p/(p-1) grows without bound as p -> 1 and amplifies
        // round-off proportionally.
        let inv_scale = 1.0 + p_inv.value().abs();
        for &x in &grid {
            let fq = q.eval(x).expect("grid in domain");
            let comp_err = (p.eval(fq).expect("f_q maps [0,1] into domain") - r.eval(x).unwrap()).abs();
            run.check("composition", comp_err, 1e-12, || {
                json!({"seed": cfg.seed, "p": p.value(), "q": q.value(), "x": x})
            });
            let round_err =
                (p_inv.eval(p.eval(x).unwrap()).unwrap() - x).abs() / inv_scale;
            run.check("inverse-pointwise", round_err, 1e-14, || {
                json!({"seed": cfg.seed, "p": p.value(), "x": x})
            });
        }
        // Isomorphism at the parameter level, read back through the
        // positive-real character so the two sides round independently
        // (composing and then mapping is not the bitwise-same expression
        // as multiplying the characters).
        let (a, b) = (p.to_positive_real(), q.to_positive_real());
        let iso_err = (r.to_positive_real() - a * b).abs() / (1.0 + (a * b).abs());
        run.check("isomorphism", iso_err, 1e-14, || {
            json!({"seed": cfg.seed, "a": a, "b": b})
        });
    }
    Ok(run.finish(json!({
        "seed": cfg.seed,
        "trials": trials,
        "grid_points": grid.len(),
        "p_range": [-10.0, 1.0],
    })))
}

/// Operator monotonicity of `f_p` on ordered pairs, plus agreement of the
/// spectral and resolvent evaluation routes.
pub fn suite_operator_monotone(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut run = SuiteRun::new(
        "operator-monotone",
        "A <= B implies f_p(A) <= f_p(B); spectral and resolvent routes agree",
        cfg,
    )?;
    let (dim_lo, dim_hi) = dims_range(cfg, (2, 6))?;
    let trials = cfg.trials.unwrap_or(200);
    let ps = [-2.0, -0.5, 0.3, 0.7];
    let mut stream = 0u64;
    for dim in dim_lo..=dim_hi {
        let sampler = SamplerConfig::default().with_seed(cfg.seed).with_dim(dim);
        for &p_raw in &ps {
            let p = MoebiusParam::new(p_raw)?;
            for _ in 0..trials {
                let s = stream;
                stream += 1;
                run.begin_trial();
                let (a, b) = random_ordered_pair(&sampler, s)?;
                let fa = p.eval_matrix_spectral(a.matrix())?;
                let fb = p.eval_matrix_spectral(b.matrix())?;
                let mono = (-fb.sub(&fa)?.min_eigenvalue()?).max(0.0);
                run.check("monotonicity", mono, 1e-8, || {
                    json!({
                        "seed": cfg.seed, "stream": s, "p": p_raw, "dim": dim,
                        "a": MatrixJson::from(&a), "b": MatrixJson::from(&b),
                    })
                });
                for (label, eff) in [("a", &a), ("b", &b)] {
                    let res = p.eval_matrix_resolvent(eff.matrix())?;
                    let spec = p.eval_matrix_spectral(eff.matrix())?;
                    let dev = spec.sub(&res)?.frobenius_norm()
                        / (1.0 + eff.matrix().frobenius_norm());
                    run.check("route-agreement", dev, 1e-9, || {
                        json!({
                            "seed": cfg.seed, "stream": s, "p": p_raw, "dim": dim,
                            "input": label,
                        })
                    });
                }
            }
        }
    }
    Ok(run.finish(json!({
        "seed": cfg.seed,
        "dims": [dim_lo, dim_hi],
        "trials_per_cell": trials,
        "p_values": ps,
    })))
}

/// Order preservation of the automorphisms in both directions, fixed
/// points, interior preservation, and the dichotomy on incomparable pairs.
pub fn suite_automorphism_order(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut run = SuiteRun::new(
        "automorphism-order",
        "phi and phi^-1 preserve the order on [0,I]; phi fixes 0 and I; incomparable pairs stay incomparable",
        cfg,
    )?;
    let (dim_lo, dim_hi) = dims_range(cfg, (2, 6))?;
    let pairs = cfg.trials.unwrap_or(200);
    let autos_per_dim = 5usize;
    let indefinite_pairs = 50usize;
    let mut stream = 0u64;
    let mut next = || {
        let s = stream;
        stream += 1;
        s
    };
    for dim in dim_lo..=dim_hi {
        let sampler = SamplerConfig::default().with_seed(cfg.seed).with_dim(dim);
        for auto_idx in 0..autos_per_dim {
            let c = random_canonical(&sampler, next(), -4.0, -0.25)?;
            let witness_op = OperatorJson::from(c.operator());
            let p_val = c.p().value();

            run.begin_trial();
            let zero_norm = c.apply(&Effect::zero(dim))?.matrix().frobenius_norm();
            run.check("fixes-zero", zero_norm, 1e-10, || {
                json!({"seed": cfg.seed, "dim": dim, "auto": auto_idx, "p": p_val, "t": witness_op})
            });
            let id = Effect::identity(dim);
            let id_dev = c
                .apply(&id)?
                .matrix()
                .sub(id.matrix())?
                .frobenius_norm();
            run.check("fixes-identity", id_dev, 1e-10, || {
                json!({"seed": cfg.seed, "dim": dim, "auto": auto_idx, "p": p_val, "t": witness_op})
            });

            for _ in 0..pairs {
                let s = next();
                run.begin_trial();
                let (a, b) = random_ordered_pair(&sampler, s)?;
                let fa = c.apply(&a)?;
                let fb = c.apply(&b)?;
                let fwd = (-fb.matrix().sub(fa.matrix())?.min_eigenvalue()?).max(0.0);
                run.check("order-forward", fwd, 1e-8, || {
                    json!({
                        "seed": cfg.seed, "stream": s, "dim": dim, "p": p_val,
                        "t": witness_op, "a": MatrixJson::from(&a), "b": MatrixJson::from(&b),
                    })
                });
                let ia = c.invert_apply(&a)?;
                let ib = c.invert_apply(&b)?;
                let bwd = (-ib.matrix().sub(ia.matrix())?.min_eigenvalue()?).max(0.0);
                run.check("order-inverse-map", bwd, 1e-8, || {
                    json!({
                        "seed": cfg.seed, "stream": s, "dim": dim, "p": p_val,
                        "t": witness_op, "a": MatrixJson::from(&a), "b": MatrixJson::from(&b),
                    })
                });
                // Interior samples stay strictly inside.
                let min_fa = fa.min_eigenvalue()?;
                run.check("interior-preserved", (-(min_fa - 1e-12)).max(0.0), 1e-12, || {
                    json!({"seed": cfg.seed, "stream": s, "dim": dim, "p": p_val, "t": witness_op})
                });
            }

            // Incomparable pairs must map to incomparable pairs. Gray-zone
            // margins are recorded as indeterminate, not failed.
            for _ in 0..indefinite_pairs {
                let s1 = next();
                let s2 = next();
                let a = random_effect(&sampler, s1)?;
                let b = random_effect(&sampler, s2)?;
                let diff = b.matrix().sub(a.matrix())?;
                let lo = diff.min_eigenvalue()?;
                let hi = diff.max_eigenvalue()?;
                if lo > -1e-6 || hi < 1e-6 {
                    // Sampled pair not clearly incomparable; skip it.
                    run.mark_rejected();
                    continue;
                }
                run.begin_trial();
                let fdiff = c.apply(&b)?.matrix().sub(c.apply(&a)?.matrix())?;
                let flo = fdiff.min_eigenvalue()?;
                let fhi = fdiff.max_eigenvalue()?;
                if flo <= -1e-6 && fhi >= 1e-6 {
                    run.check("indefinite-preserved", 0.0, 1.0, || Value::Null);
                } else if flo >= -1e-8 || fhi <= 1e-8 {
                    // The image difference became one-signed: order forged
                    // out of an incomparable pair.
                    run.check("indefinite-preserved", 2.0, 1.0, || {
                        json!({
                            "seed": cfg.seed, "streams": [s1, s2], "dim": dim,
                            "p": p_val, "t": witness_op,
                            "image_margins": [flo, fhi],
                        })
                    });
                } else {
                    run.mark_indeterminate();
                }
            }
        }
    }
    Ok(run.finish(json!({
        "seed": cfg.seed,
        "dims": [dim_lo, dim_hi],
        "autos_per_dim": autos_per_dim,
        "pairs_per_auto": pairs,
        "indefinite_pairs_per_auto": indefinite_pairs,
        "p_range": [-4.0, -0.25],
    })))
}

/// The three parameterizations agree pointwise; conversions are stable
/// under the free scale choice and recover the congruence operator.
pub fn suite_representation_equivalence(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut run = SuiteRun::new(
        "representation-equivalence",
        "canonical, contraction, and congruence forms define the same map; the scale choice is free; S round-trips",
        cfg,
    )?;
    let (dim_lo, dim_hi) = dims_range(cfg, (2, 8))?;
    let trials = cfg.trials.unwrap_or(100);
    let mut stream = 0u64;
    for dim in dim_lo..=dim_hi {
        let sampler = SamplerConfig::default().with_seed(cfg.seed).with_dim(dim);
        for _ in 0..trials {
            let s = stream;
            stream += 2;
            run.begin_trial();
            let c = random_canonical(&sampler, s, -4.0, -0.25)?;
            let a = random_effect(&sampler, s + 1)?;
            let p_val = c.p().value();
            let witness = |check: &str| {
                let op = OperatorJson::from(c.operator());
                json!({
                    "seed": cfg.seed, "stream": s, "dim": dim, "p": p_val,
                    "t": op, "check": check,
                })
            };

            let alt = c.to_alt()?;
            let g = c.to_congruence()?;
            let canonical = c.apply(&a)?;
            let via_alt = alt.apply(&a)?;
            let via_cong = g.apply(&a, INVERTIBILITY_TOL)?;

            let d_ca = canonical.matrix().sub(via_alt.matrix())?.frobenius_norm();
            run.check("canonical-vs-alt", d_ca, 1e-8, || witness("canonical-vs-alt"));
            let d_cg = canonical.matrix().sub(via_cong.matrix())?.frobenius_norm();
            run.check("canonical-vs-congruence", d_cg, 1e-8, || {
                witness("canonical-vs-congruence")
            });
            let d_ag = via_alt.matrix().sub(via_cong.matrix())?.frobenius_norm();
            run.check("alt-vs-congruence", d_ag, 1e-8, || witness("alt-vs-congruence"));

            let via_half = c.apply_via_half_factorization(&a)?;
            let d_half = canonical.matrix().sub(via_half.matrix())?.frobenius_norm();
            run.check("half-factorization", d_half, 1e-9, || {
                witness("half-factorization")
            });

            // The recovered canonical parameters depend on the free scale;
            // the map must not.
            let norm_sq = g.operator().operator_norm().powi(2);
            let base = norm_sq.max(1.0);
            let c_auto = CanonicalParams::from_congruence(&g, Lambda::Auto)?;
            let out_auto = c_auto.apply(&a)?;
            for lam in [base + 2.0, base + 10.0] {
                let c_lam = CanonicalParams::from_congruence(&g, Lambda::Value(lam))?;
                let dev = c_lam
                    .apply(&a)?
                    .matrix()
                    .sub(out_auto.matrix())?
                    .frobenius_norm();
                run.check("lambda-independence", dev, 1e-8, || {
                    witness("lambda-independence")
                });
            }

            let g2 = c_auto.to_congruence()?;
            let s_dev = (g2.operator().matrix() - g.operator().matrix()).norm()
                / (1.0 + g.operator().matrix().norm());
            let kinds_match = g2.operator().kind() == g.operator().kind();
            run.check("s-recovery", if kinds_match { s_dev } else { 2e-9 }, 1e-9, || {
                witness("s-recovery")
            });
        }
    }
    Ok(run.finish(json!({
        "seed": cfg.seed,
        "dims": [dim_lo, dim_hi],
        "trials_per_dim": trials,
        "p_range": [-4.0, -0.25],
        "cond_max": SamplerConfig::default().cond_max,
    })))
}

/// The congruence path along `A_n = (1-1/n)A + (1/n)I` approaches the
/// direct canonical value at boundary effects: gaps shrink monotonically
/// and the extrapolated limit matches; at interior effects the two paths
/// agree outright.
pub fn suite_boundary_extension(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut run = SuiteRun::new(
        "boundary-extension",
        "phi_cong(A_n) -> phi(A) monotonically for boundary A; extrapolated limit matches the direct value",
        cfg,
    )?;
    let (dim_lo, dim_hi) = dims_range(cfg, (2, 6))?;
    let trials = cfg.trials.unwrap_or(50);
    let interior_trials = 10usize;
    let k_max = 14u32;
    let mut stream = 0u64;
    for dim in dim_lo..=dim_hi {
        // Moderate automorphisms: the limit criterion bounds the sequence
        // tail, and wilder (p, T) only inflate the constant in front of it.
        let sampler = SamplerConfig::default()
            .with_seed(cfg.seed)
            .with_dim(dim)
            .with_cond_max(4.0);
        for _ in 0..trials {
            let s = stream;
            stream += 2;
            run.begin_trial();
            let c = random_canonical(&sampler, s, -2.5, -0.5)?;
            let deficiency = 1 + (s as usize) % (dim - 1).max(1);
            let a = random_boundary_effect(&sampler, s + 1, deficiency)?;
            let profile = boundary_profile(&c, &a, k_max)?;
            let worst_increase = profile
                .steps
                .windows(2)
                .map(|w| (w[1].raw_gap - w[0].raw_gap).max(0.0))
                .fold(0.0f64, f64::max);
            let witness = || {
                json!({
                    "seed": cfg.seed, "stream": s, "dim": dim,
                    "p": c.p().value(), "t": OperatorJson::from(c.operator()),
                    "deficiency": deficiency, "a": MatrixJson::from(&a),
                })
            };
            run.check("raw-gap-monotone", worst_increase, 1e-12, witness);
            let final_gap = profile.final_extrapolated_gap().unwrap_or(f64::INFINITY);
            run.check("extrapolated-limit", final_gap, 1e-6, witness);
        }
        for _ in 0..interior_trials {
            let s = stream;
            stream += 2;
            run.begin_trial();
            let c = random_canonical(&sampler, s, -2.5, -0.5)?;
            let a = random_effect(&sampler, s + 1)?;
            let direct = c.apply(&a)?;
            let via_cong = c.to_congruence()?.apply(&a, INVERTIBILITY_TOL)?;
            let dev = direct.matrix().sub(via_cong.matrix())?.frobenius_norm();
            run.check("interior-agreement", dev, 1e-9, || {
                json!({"seed": cfg.seed, "stream": s, "dim": dim, "p": c.p().value()})
            });
        }
    }
    Ok(run.finish(json!({
        "seed": cfg.seed,
        "dims": [dim_lo, dim_hi],
        "boundary_trials_per_dim": trials,
        "interior_trials_per_dim": interior_trials,
        "k_max": k_max,
        "p_range": [-2.5, -0.5],
        "cond_max": 4.0,
    })))
}

/// Phase classes and the group structure: `zT` changes nothing, congruence
/// composition matches pointwise composition, inverses cancel, and the
/// linearity kind follows the sign rule under composition.
pub fn suite_phase_and_group(cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut run = SuiteRun::new(
        "phase-and-group",
        "phi_{p,zT} = phi_{p,T} for |z| = 1; composition and inverse laws hold pointwise; kinds compose by parity",
        cfg,
    )?;
    let (dim_lo, dim_hi) = dims_range(cfg, (2, 6))?;
    let trials = cfg.trials.unwrap_or(50);
    let phases = 8usize;
    let mut stream = 0u64;
    for dim in dim_lo..=dim_hi {
        let sampler = SamplerConfig::default().with_seed(cfg.seed).with_dim(dim);
        for _ in 0..trials {
            let s = stream;
            stream += 4;
            run.begin_trial();
            let c = random_canonical(&sampler, s, -4.0, -0.25)?;
            let a = random_effect(&sampler, s + 1)?;
            let base = c.apply(&a)?;
            let witness = || {
                json!({
                    "seed": cfg.seed, "stream": s, "dim": dim,
                    "p": c.p().value(), "t": OperatorJson::from(c.operator()),
                })
            };
            for k in 0..phases {
                let theta = 2.0 * std::f64::consts::PI * (k as f64) / (phases as f64);
                let z = C64::from_polar(1.0, theta);
                let cz = CanonicalParams::new(*c.p(), c.operator().scale(z))?;
                let dev = cz.apply(&a)?.matrix().sub(base.matrix())?.frobenius_norm();
                run.check("phase-invariance", dev, 1e-9, witness);
            }

            let c2 = random_canonical(&sampler, s + 2, -4.0, -0.25)?;
            let f1 = AutomorphismForm::Canonical(c.clone());
            let f2 = AutomorphismForm::Canonical(c2.clone());
            let comp = compose_automorphisms(&f1, &f2)?;
            let lhs = comp.apply(&a)?;
            let rhs = c.apply(&c2.apply(&a)?)?;
            let comp_dev = lhs.matrix().sub(rhs.matrix())?.frobenius_norm();
            run.check("composition-pointwise", comp_dev, 1e-8, witness);

            let inv = invert_automorphism(&f1)?;
            let round = compose_automorphisms(&f1, &inv)?;
            let ident_dev = round.apply(&a)?.matrix().sub(a.matrix())?.frobenius_norm();
            run.check("inverse-identity", ident_dev, 1e-8, witness);

            // Kind parity under composition of the congruence operators.
            let s1 = random_invertible_operator(&sampler, s + 3)?;
            let s2 = random_invertible_operator(&sampler, s + 2)?;
            let composed = s1.compose(&s2)?;
            let expected = if s1.is_antilinear() == s2.is_antilinear() {
                OperatorKind::Linear
            } else {
                OperatorKind::Antilinear
            };
            let ok = composed.kind() == expected;
            run.check("kind-parity", if ok { 0.0 } else { 2.0 }, 1.0, || {
                json!({
                    "seed": cfg.seed, "stream": s, "dim": dim,
                    "kinds": [format!("{:?}", s1.kind()), format!("{:?}", s2.kind())],
                })
            });
        }
    }
    Ok(run.finish(json!({
        "seed": cfg.seed,
        "dims": [dim_lo, dim_hi],
        "trials_per_dim": trials,
        "phases": phases,
        "p_range": [-4.0, -0.25],
    })))
}

pub fn run_suite(name: &str, cfg: &VerifyConfig) -> Result<VerificationReport> {
    match name {
        "moebius-group" => suite_moebius_group(cfg),
        "operator-monotone" => suite_operator_monotone(cfg),
        "automorphism-order" => suite_automorphism_order(cfg),
        "representation-equivalence" => suite_representation_equivalence(cfg),
        "boundary-extension" => suite_boundary_extension(cfg),
        "phase-and-group" => suite_phase_and_group(cfg),
        other => Err(Error::InvalidConfig(format!(
            "unknown suite '{other}'; available: {}",
            SUITE_NAMES.join(", ")
        ))),
    }
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<VerificationReport>> {
    SUITE_NAMES.iter().map(|name| run_suite(name, cfg)).collect()
}
