//! JSON-string API behind the browser demo. Each exported function is a
//! pure map from scalar arguments to a JSON payload using the same wire
//! formats as the CLI, so the JavaScript side only draws.
//!
//! The crate also builds natively; the tests exercise the exact strings the
//! page consumes.

use serde_json::json;
use wasm_bindgen::prelude::*;

use effect_order::io::{AutomorphismJson, MatrixJson};
use effect_order::sampling::{random_boundary_effect, random_invertible_operator, random_ordered_pair};
use effect_order::{
    boundary_profile, limit_apply, CanonicalParams, Effect, MoebiusParam, SamplerConfig,
};

const MAX_DIM: u32 = 16;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn check_dim(dim: u32) -> Result<usize, String> {
    if dim == 0 || dim > MAX_DIM {
        return Err(format!("dim must lie in 1..={MAX_DIM}, got {dim}"));
    }
    Ok(dim as usize)
}

fn eigenvalues(e: &Effect) -> Result<Vec<f64>, String> {
    Ok(e.matrix().eigh().map_err(err)?.eigenvalues)
}

/// Samples `f_p` on a uniform grid over `[0, 1]` together with the inverse
/// parameter and the composition residual `|compose(p, p/(p-1))|`.
#[wasm_bindgen]
pub fn moebius_curve(p: f64, points: u32) -> Result<String, String> {
    if !(2..=4096).contains(&points) {
        return Err(format!("points must lie in 2..=4096, got {points}"));
    }
    let param = MoebiusParam::new(p).map_err(err)?;
    let n = points as usize;
    let xs: Vec<f64> = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
    let ys: Vec<f64> = xs
        .iter()
        .map(|&x| param.eval(x).map_err(err))
        .collect::<Result<_, _>>()?;
    let payload = json!({
        "p": param.value(),
        "inverse_p": param.inverse().value(),
        "inverse_residual": param.compose(&param.inverse()).value().abs(),
        "xs": xs,
        "ys": ys,
    });
    Ok(payload.to_string())
}

/// Samples an automorphism `(p, T)` and an ordered pair `A <= B`, applies
/// the map, and reports everything the page plots: the JSON forms, the
/// input and image eigenvalues, the order margins, and the extrema drift.
#[wasm_bindgen]
pub fn automorphism_demo(dim: u32, seed: u64, p: f64) -> Result<String, String> {
    let dim = check_dim(dim)?;
    let cfg = SamplerConfig::default().with_seed(seed).with_dim(dim);
    let param = MoebiusParam::new(p).map_err(err)?;
    let t = random_invertible_operator(&cfg, 0).map_err(err)?;
    let c = CanonicalParams::new(param, t).map_err(err)?;
    let (a, b) = random_ordered_pair(&cfg, 1).map_err(err)?;
    let fa = c.apply(&a).map_err(err)?;
    let fb = c.apply(&b).map_err(err)?;
    let input_margin = b
        .matrix()
        .sub(a.matrix())
        .map_err(err)?
        .min_eigenvalue()
        .map_err(err)?;
    let image_margin = fb
        .matrix()
        .sub(fa.matrix())
        .map_err(err)?
        .min_eigenvalue()
        .map_err(err)?;
    let zero_dev = c
        .apply(&Effect::zero(dim))
        .map_err(err)?
        .matrix()
        .frobenius_norm();
    let id_dev = c
        .apply(&Effect::identity(dim))
        .map_err(err)?
        .matrix()
        .sub(Effect::identity(dim).matrix())
        .map_err(err)?
        .frobenius_norm();
    let form = effect_order::AutomorphismForm::Canonical(c);
    let payload = json!({
        "automorphism": AutomorphismJson::from(&form),
        "antilinear": matches!(form, effect_order::AutomorphismForm::Canonical(ref c)
            if c.operator().is_antilinear()),
        "a": MatrixJson::from(&a),
        "b": MatrixJson::from(&b),
        "eig_a": eigenvalues(&a)?,
        "eig_b": eigenvalues(&b)?,
        "eig_fa": eigenvalues(&fa)?,
        "eig_fb": eigenvalues(&fb)?,
        "input_margin": input_margin,
        "image_margin": image_margin,
        "zero_dev": zero_dev,
        "identity_dev": id_dev,
    });
    Ok(payload.to_string())
}

/// Samples a rank-deficient effect, applies a sampled automorphism both
/// directly and through the interior approximants `A_n = (1-1/n)A + I/n`,
/// and reports the gap profile over `n = 2^k`.
#[wasm_bindgen]
pub fn boundary_demo(dim: u32, seed: u64, deficiency: u32, k_max: u32) -> Result<String, String> {
    let dim = check_dim(dim)?;
    if !(3..=20).contains(&k_max) {
        return Err(format!("k_max must lie in 3..=20, got {k_max}"));
    }
    let cfg = SamplerConfig::default().with_seed(seed).with_dim(dim);
    let a = random_boundary_effect(&cfg, 0, deficiency as usize).map_err(err)?;
    let c = effect_order::sampling::random_canonical(&cfg, 1, -4.0, -0.25).map_err(err)?;
    let profile = boundary_profile(&c, &a, k_max).map_err(err)?;
    let direct = c.apply(&a).map_err(err)?;
    let limit = limit_apply(&c, &a, 1 << k_max).map_err(err)?;
    let payload = json!({
        "p": c.p().value(),
        "eig_input": eigenvalues(&a)?,
        "eig_direct": eigenvalues(&direct)?,
        "eig_limit": eigenvalues(&limit)?,
        "steps": profile.steps.iter().map(|s| json!({
            "k": s.k,
            "n": s.n,
            "raw_gap": s.raw_gap,
            "extrapolated_gap": s.extrapolated_gap,
        })).collect::<Vec<_>>(),
    });
    Ok(payload.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn curve_endpoints_and_inverse() {
        let v = parse(&moebius_curve(-2.0, 101).unwrap());
        let ys = v["ys"].as_array().unwrap();
        assert_eq!(ys[0].as_f64().unwrap(), 0.0);
        assert_eq!(ys[100].as_f64().unwrap(), 1.0);
        assert!(v["inverse_residual"].as_f64().unwrap() < 1e-14);
        assert_eq!(v["inverse_p"].as_f64().unwrap(), -2.0 / -3.0);
        assert!(moebius_curve(1.5, 101).is_err());
        assert!(moebius_curve(-2.0, 1).is_err());
    }

    #[test]
    fn automorphism_payload_is_consistent() {
        let v = parse(&automorphism_demo(3, 7, -1.5).unwrap());
        assert_eq!(v["automorphism"]["form"], "canonical");
        assert_eq!(v["automorphism"]["p"], -1.5);
        assert!(v["input_margin"].as_f64().unwrap() > 0.0);
        assert!(v["image_margin"].as_f64().unwrap() > -1e-10);
        assert!(v["zero_dev"].as_f64().unwrap() < 1e-10);
        assert!(v["identity_dev"].as_f64().unwrap() < 1e-10);
        let eig = v["eig_fa"].as_array().unwrap();
        assert_eq!(eig.len(), 3);
        for e in eig {
            let x = e.as_f64().unwrap();
            assert!((-1e-10..=1.0 + 1e-10).contains(&x));
        }
        // Deterministic by seed.
        assert_eq!(
            automorphism_demo(3, 7, -1.5).unwrap(),
            automorphism_demo(3, 7, -1.5).unwrap()
        );
        assert!(automorphism_demo(3, 7, 0.5).is_err());
        assert!(automorphism_demo(0, 7, -1.0).is_err());
    }

    #[test]
    fn boundary_payload_shrinks() {
        let v = parse(&boundary_demo(3, 5, 1, 12).unwrap());
        let steps = v["steps"].as_array().unwrap();
        assert_eq!(steps.len(), 12);
        let raw: Vec<f64> = steps.iter().map(|s| s["raw_gap"].as_f64().unwrap()).collect();
        for w in raw.windows(2) {
            assert!(w[1] <= w[0] + 1e-12);
        }
        let last = steps.last().unwrap();
        assert!(last["extrapolated_gap"].as_f64().unwrap() < 1e-6);
        // The sampled input really is singular.
        let eig = v["eig_input"].as_array().unwrap();
        assert!(eig.iter().any(|e| e.as_f64().unwrap().abs() < 1e-12));
        assert!(boundary_demo(3, 5, 3, 12).is_err());
        assert!(boundary_demo(3, 5, 1, 25).is_err());
        assert!(boundary_demo(3, 5, 1, 2).is_err());
    }
}
