use hilreg::hilbert::{
    apply, eval_on_grid, hs_norm, inner, operator_norm, project_grid, tensor, uniform_grid, HilbertVec,
    OperatorMat, SpaceDescriptor,
};
use hilreg::procgen::{eigen_profile, gaussian_sample, ProfileKind, RngStream};
use hilreg::spectral::{
    check_eigvec_bound, check_projection_bound, check_weyl, eigen_system, empirical_covariance, SampleView,
};
use nalgebra::{DMatrix, SymmetricEigen};
use proptest::prelude::*;

fn vec_of(d: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-10.0..10.0f64, d)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = OperatorMat> {
    vec_of(rows * cols).prop_map(move |v| OperatorMat::new(rows, cols, v).unwrap())
}

fn symmetric(d: usize) -> impl Strategy<Value = OperatorMat> {
    matrix(d, d).prop_map(|m| m.symmetrized().unwrap())
}

fn orthonormal_columns(seed: &[f64], d: usize) -> DMatrix<f64> {
    DMatrix::from_row_slice(d, d, seed).qr().q()
}

fn to_dmatrix(a: &OperatorMat) -> DMatrix<f64> {
    DMatrix::from_row_slice(a.dim_out(), a.dim_in(), a.entries())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cauchy_schwarz(x in vec_of(7), y in vec_of(7)) {
        let (x, y) = (HilbertVec::new(x).unwrap(), HilbertVec::new(y).unwrap());
        prop_assert!(inner(&x, &y).unwrap().abs() <= x.norm() * y.norm() * (1.0 + 1e-12));
    }

    #[test]
    fn operator_norm_is_dominated_by_hs(a in matrix(4, 6)) {
        let op = operator_norm(&a);
        prop_assert!(op <= hs_norm(&a) * (1.0 + 1e-12));
        // agrees with an independent SVD
        let sv = to_dmatrix(&a).singular_values().max();
        prop_assert!((op - sv).abs() <= 1e-10 * (1.0 + sv));
    }

    #[test]
    fn tensor_apply_consistency(x in vec_of(5), y in vec_of(3), v in vec_of(5)) {
        let (x, y, v) = (HilbertVec::new(x).unwrap(), HilbertVec::new(y).unwrap(), HilbertVec::new(v).unwrap());
        let lhs = apply(&tensor(&x, &y), &v).unwrap();
        let rhs = y.scaled(inner(&x, &v).unwrap());
        for i in 0..3 {
            prop_assert!((lhs[i] - rhs[i]).abs() <= 1e-12 * (1.0 + rhs[i].abs()));
        }
    }

    #[test]
    fn hs_norm_of_tensor_sum(seed in vec_of(36), xs in vec_of(4 * 5)) {
        // Σ_i e_i ⊗ x_i over orthonormal e_i
        let q = orthonormal_columns(&seed, 6);
        let mut sum = OperatorMat::zeros(5, 6);
        let mut sq = 0.0;
        for i in 0..4 {
            let e = HilbertVec::new(q.column(i).iter().copied().collect()).unwrap();
            let x = HilbertVec::new(xs[i * 5..(i + 1) * 5].to_vec()).unwrap();
            sq += x.norm().powi(2);
            sum = sum.add(&tensor(&e, &x)).unwrap();
        }
        prop_assert!((hs_norm(&sum) - sq.sqrt()).abs() <= 1e-10 * (1.0 + sq.sqrt()));
    }

    #[test]
    fn eigen_reconstruction_and_oracle(c in symmetric(8)) {
        let eig = hilreg::spectral::symmetric_eigen(&c).unwrap();
        let err = hs_norm(&eig.reconstruct().sub(&c).unwrap());
        prop_assert!(err <= 1e-9 * (1.0 + hs_norm(&c)));
        let mut oracle: Vec<f64> = SymmetricEigen::new(to_dmatrix(&c)).eigenvalues.iter().copied().collect();
        oracle.sort_by(|a, b| b.total_cmp(a));
        for (a, b) in eig.values().iter().zip(&oracle) {
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn perturbation_bounds_hold(c in symmetric(6), e in symmetric(6), scale in -4.0..0.0f64) {
        let chat = c.add(&e.scaled(10f64.powf(scale))).unwrap();
        prop_assert!(check_weyl(&c, &chat).unwrap() <= 1e-10);
        if let Ok(v) = check_eigvec_bound(&c, &chat) {
            prop_assert!(v <= 1e-10);
        }
        for m in 1..=6 {
            for j in 1..=m {
                if let Ok(v) = check_projection_bound(&c, &chat, j, m) {
                    prop_assert!(v <= 1e-10, "j={} m={} violation {}", j, m, v);
                }
            }
        }
    }
}

#[test]
fn grid_projection_inverts_evaluation_on_band_limited_curves() {
    let dim = 9;
    let space = SpaceDescriptor::fourier(dim).unwrap();
    let grid = uniform_grid(2048);
    let coefs = HilbertVec::new((0..dim).map(|j| (j as f64 * 0.7).sin() + 0.1).collect()).unwrap();
    let values = eval_on_grid(&space, &coefs, &grid).unwrap();
    let samples: Vec<(f64, f64)> = grid.iter().copied().zip(values).collect();
    let back = project_grid(&samples, dim).unwrap();
    for j in 0..dim {
        assert!((back[j] - coefs[j]).abs() < 1e-6, "coefficient {j}: {} vs {}", back[j], coefs[j]);
    }
}

#[test]
fn empirical_covariance_is_symmetric_psd_and_rank_limited() {
    let profile = eigen_profile(ProfileKind::Poly2, 12).unwrap();
    for n in [5, 40] {
        let x = gaussian_sample(&profile, n, &mut RngStream::new(4, n as u64).rng());
        let c = empirical_covariance(&x).unwrap();
        assert!(c.max_asymmetry() <= 1e-12);
        let raw = hilreg::spectral::symmetric_eigen(&c).unwrap();
        assert!(raw.values().iter().all(|&l| l >= -1e-10));
        let top = raw.values()[0];
        let nonzero = raw.values().iter().filter(|&&l| l > 1e-10 * top).count();
        assert!(nonzero <= n.min(12), "n={n}: {nonzero} nonzero eigenvalues");
    }
}

#[test]
fn centered_covariance_loses_one_rank() {
    let profile = eigen_profile(ProfileKind::LAMBDA1, 10).unwrap();
    let x = gaussian_sample(&profile, 6, &mut RngStream::new(1, 0).rng()).with_zero_mean(false);
    let eig = eigen_system(&empirical_covariance(&x).unwrap()).unwrap();
    assert_eq!(eig.rank(), 5);
}

#[test]
fn covariance_error_scales_like_inverse_root_n() {
    // n·E‖Ĉ − C‖²_HS stays bounded across sample sizes.
    let profile = eigen_profile(ProfileKind::LAMBDA1, 35).unwrap();
    let c = OperatorMat::diag(profile.values());
    let scaled: Vec<f64> = [100usize, 400, 1600]
        .iter()
        .map(|&n| {
            let total: f64 = (0..100)
                .map(|r| {
                    let x = gaussian_sample(&profile, n, &mut RngStream::new(9, r).child(n as u64).rng());
                    hs_norm(&empirical_covariance(&x).unwrap().sub(&c).unwrap()).powi(2)
                })
                .sum();
            n as f64 * total / 100.0
        })
        .collect();
    let (lo, hi) = scaled.iter().fold((f64::MAX, 0.0f64), |(l, h), &v| (l.min(v), h.max(v)));
    assert!(hi / lo <= 3.0, "n·E‖Ĉ−C‖² = {scaled:?}");
}

#[test]
fn sample_view_rejects_non_finite() {
    assert!(SampleView::from_flat(1, 2, vec![1.0, f64::NAN], true).is_err());
    assert!(SampleView::from_flat(2, 2, vec![1.0; 3], true).is_err());
}
