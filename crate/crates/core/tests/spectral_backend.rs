use effect_order::{hermitianize, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn stress_complex_eigh() {
    let mut worst_recon = 0.0f64;
    let mut worst_unit = 0.0f64;
    let mut worst_dim = 0;
    for dim in [1usize, 2, 3, 4, 6, 8, 12, 16, 32] {
        let mut rng = ChaCha8Rng::seed_from_u64(dim as u64);
        for _ in 0..300 {
            let g = DMatrix::from_fn(dim, dim, |_, _| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let a = hermitianize(&g).unwrap();
            let d = a.eigh().unwrap();
            let recon = (d.reconstruct() - a.matrix()).norm() / a.frobenius_norm().max(1e-300);
            let unit = (d.eigenvectors.adjoint() * &d.eigenvectors
                - DMatrix::<C64>::identity(dim, dim))
            .norm();
            if recon > worst_recon { worst_recon = recon; worst_dim = dim; }
            if unit > worst_unit { worst_unit = unit; }
            // ascending order
            for w in d.eigenvalues.windows(2) { assert!(w[0] <= w[1]); }
        }
    }
    eprintln!("worst recon (rel) = {worst_recon:.3e} at dim {worst_dim}; worst unitarity = {worst_unit:.3e}");
    assert!(worst_recon < 1e-12);
    assert!(worst_unit < 1e-12);
}

#[test]
fn stress_degenerate_and_clustered() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let dim = 6;
        // clustered spectrum incl. exact repeats and near-zero values
        let eigs = [0.0, 0.0, 1e-13, 0.5, 0.5 + 1e-12, 1.0];
        let g = DMatrix::from_fn(dim, dim, |_, _| {
            C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        });
        let q = g.qr().q();
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for (i, &e) in eigs.iter().enumerate() { m[(i, i)] = C64::new(e, 0.0); }
        let a = hermitianize(&(&q * m * q.adjoint())).unwrap();
        let d = a.eigh().unwrap();
        let recon = (d.reconstruct() - a.matrix()).norm();
        worst = worst.max(recon);
    }
    eprintln!("worst clustered recon = {worst:.3e}");
    assert!(worst < 1e-12);
}

#[test]
fn complex_svd_and_lu_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for dim in [2usize, 4, 8] {
        for _ in 0..100 {
            let g = DMatrix::from_fn(dim, dim, |_, _| {
                C64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
            });
            let svd = g.clone().svd(false, false);
            let smin = svd.singular_values.as_slice().iter().cloned().fold(f64::INFINITY, f64::min);
            if smin < 1e-3 { continue; }
            let inv = g.clone().try_inverse().expect("invertible");
            let resid = (&g * &inv - DMatrix::<C64>::identity(dim, dim)).norm();
            assert!(resid < 1e-10 / smin, "resid {resid:.3e} smin {smin:.3e}");
        }
    }
}
