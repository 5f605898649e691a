//! Randomized verification of the pointwise algebra at integration scale,
//! with independent oracles written against the raw index definitions.

use pinchlab::constants::compute_cn;
use pinchlab::frame::{
    decompose, normal_curvature, planarity_gradient_identities, Dimensions, GradDerived,
    SffTensor,
};
use pinchlab::parallel::ExecMode;
use pinchlab::sample;
use pinchlab::suites::{run_suite, run_suites, SuiteConfig, SuiteId, IDENTITY_REL_TOL};
use proptest::prelude::*;

fn quick_cfg(samples: usize) -> SuiteConfig {
    SuiteConfig {
        samples,
        seed: 0xFEED,
        mode: ExecMode::auto(),
    }
}

#[test]
fn all_suites_clean_at_mid_scale() {
    let reports = run_suites(&SuiteId::all(), &quick_cfg(800));
    for r in &reports {
        assert!(
            r.violations.is_empty(),
            "{} (n={}, m={}) first violation: {:?}",
            r.suite,
            r.n,
            r.m,
            r.violations.first()
        );
        assert!(r.max_rel_residual <= IDENTITY_REL_TOL);
        assert!(r.min_margin_over_tol >= -1.0);
    }
}

/// Brute-force normal curvature oracle, straight from the definition
/// `R⊥_{ij,ab} = Σ_k (A_{ik}^a A_{jk}^b - A_{jk}^a A_{ik}^b)`, written
/// independently of the library's contraction order.
fn oracle_normal_curvature_norm2(a: &SffTensor) -> f64 {
    let n = a.dims().n();
    let m = a.dims().m();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            for al in 0..m {
                for be in 0..m {
                    let mut s = 0.0;
                    for k in 0..n {
                        s += a.get(i, k, al) * a.get(j, k, be);
                        s -= a.get(j, k, al) * a.get(i, k, be);
                    }
                    total += s * s;
                }
            }
        }
    }
    total
}

#[test]
fn normal_curvature_matches_brute_force_oracle() {
    let dims = Dimensions::new(3, 2).unwrap();
    for trial in 0..200u64 {
        let mut rng = sample::rng_for(91, &[trial]);
        let a = sample::symmetric_sff(&mut rng, dims);
        let oracle = oracle_normal_curvature_norm2(&a);
        let d = match decompose(&a, 0.5) {
            Ok(d) => d,
            Err(_) => continue, // |H| ~ 0 draw; irrelevant here
        };
        let nc = normal_curvature(&d);
        // The principal slots appear twice in the full normal-index sum.
        let reassembled = 2.0 * nc.norm2_rperp_nu1 + nc.norm2_rhat;
        assert!(
            (oracle - reassembled).abs() <= 1e-12 * oracle.max(1.0),
            "trial {trial}: oracle {oracle} vs decomposition route {reassembled}"
        );
        // Antisymmetry of both parts.
        for i in 0..3 {
            for j in 0..3 {
                for al in 0..2 {
                    assert!(
                        (nc.rperp_nu1_at(i, j, al) + nc.rperp_nu1_at(j, i, al)).abs() < 1e-12
                    );
                    for be in 0..2 {
                        assert!(
                            (nc.rhat_at(i, j, al, be) + nc.rhat_at(j, i, al, be)).abs() < 1e-12
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn kato_residual_nonnegative_over_random_codazzi() {
    // 10^4 Codazzi samples across a band of dimensions.
    for (n, m) in [(2usize, 2usize), (4, 2), (6, 3), (8, 2)] {
        let dims = Dimensions::new(n, m).unwrap();
        let c0 = compute_cn(n).unwrap();
        for trial in 0..2500u64 {
            let mut rng = sample::rng_for(17, &[n as u64, m as u64, trial]);
            let a = sample::pinched_sff(&mut rng, dims, c0, 0.9);
            let g = sample::codazzi_grad(&mut rng, dims);
            let ids = planarity_gradient_identities(&a, &g, c0).unwrap();
            assert!(
                ids.kato_residual >= -1e-9 * g.norm2(),
                "(n,m)=({n},{m}) trial {trial}: kato residual {}",
                ids.kato_residual
            );
        }
    }
}

#[test]
fn derived_gradient_orthogonality_and_reconstruction() {
    for (n, m) in [(3usize, 2usize), (6, 3)] {
        let dims = Dimensions::new(n, m).unwrap();
        let c0 = compute_cn(n).unwrap();
        for trial in 0..500u64 {
            let mut rng = sample::rng_for(23, &[n as u64, m as u64, trial]);
            let a = sample::pinched_sff(&mut rng, dims, c0, 0.9);
            let g = sample::codazzi_grad(&mut rng, dims);
            let d = decompose(&a, c0).unwrap();
            let gd = GradDerived::new(&d, &g).unwrap();
            assert!(gd.grad_nu1_dot_nu1_max(&d.nu1) < 1e-12);
            let scale = (a.norm() + g.norm2().sqrt().sqrt()).powi(2);
            assert!(gd.reconstruction_residual(&d, &g) < 1e-11 * scale.max(1.0));
        }
    }
}

#[test]
fn lambda1_well_defined_under_eigenvalue_ties() {
    // Repeated smallest principal curvature: λ₁ is still well-defined and
    // no eigenvector-dependent quantity is exposed.
    let dims = Dimensions::new(4, 1).unwrap();
    let a = SffTensor::from_fn(dims, |i, j, _| {
        if i != j {
            0.0
        } else if i < 2 {
            -0.5 // double λ₁ after the sign flip through ν₁
        } else {
            -2.0
        }
    });
    let d = decompose(&a, 0.9).unwrap();
    assert!((d.lambda1 - 0.5).abs() < 1e-13);
}

/// The Kato-type bound `|∇|H||² <= n(n+2)/(2(n-1)) |⟨∇⊥Å, ν₁⟩|²` holds for
/// the *traceless vector-valued* component (ring) and genuinely fails for
/// the superficially similar `⟨∇⊥Â, ν₁⟩` (hat): with `Â = 0` the hat tensor
/// vanishes identically while `∇|H|` does not. The two enter different
/// inequalities and must never be conflated.
#[test]
fn kato_bound_needs_ring_component_not_hat_component() {
    let n = 5usize;
    let m = 2usize;
    let dims = Dimensions::new(n, m).unwrap();
    // Planar sample: A = ((|H|/n) Id + m̊) ⊗ ν₁, so Â = 0 exactly.
    let a = SffTensor::from_fn(dims, |i, j, al| {
        if al != 0 {
            return 0.0;
        }
        let mring = [0.3, -0.3, 0.1, -0.1, 0.0];
        if i == j {
            1.0 + mring[i]
        } else {
            0.05
        }
    });
    let c0 = compute_cn(n).unwrap();
    let d = decompose(&a, c0).unwrap();
    assert!(d.norm_ahat2 < 1e-28);
    let mut rng = sample::rng_for(31, &[0]);
    let g = sample::codazzi_grad(&mut rng, dims);
    let gd = GradDerived::new(&d, &g).unwrap();
    let kato_coeff = (n * (n + 2)) as f64 / (2.0 * (n - 1) as f64);
    // Ring version holds.
    assert!(kato_coeff * gd.grad_ring_a_nu1_norm2() >= gd.grad_norm_h_norm2() - 1e-12);
    // Hat version is vacuous here and cannot dominate ∇|H|.
    assert_eq!(gd.grad_ahat_nu1_norm2(), 0.0);
    assert!(gd.grad_norm_h_norm2() > 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Reconstruction and the two Pythagoras splittings hold for arbitrary
    /// symmetric tensors with a usable mean curvature.
    #[test]
    fn decomposition_invariants(
        n in 2usize..7,
        m in 1usize..4,
        seed in any::<u64>(),
        c0_frac in 0.1f64..0.95,
    ) {
        let dims = Dimensions::new(n, m).unwrap();
        let mut rng = sample::rng_for(seed, &[n as u64, m as u64]);
        let a = sample::symmetric_sff(&mut rng, dims);
        let c0 = 1.0 / n as f64 + c0_frac; // any value; f may be negative
        if let Ok(d) = decompose(&a, c0) {
            let scale = a.norm().max(1e-6);
            prop_assert!(d.reconstruction_residual(&a) < 1e-12 * scale);
            // |A|² = |h|² + |Â|².
            prop_assert!(
                (d.norm_a2 - d.norm_h_mat2 - d.norm_ahat2).abs() < 1e-11 * d.norm_a2.max(1e-12)
            );
            // |h|² = |m̊|² + |H|²/n.
            let expect = d.norm_mring2 + d.norm_h * d.norm_h / n as f64;
            prop_assert!((d.norm_h_mat2 - expect).abs() < 1e-11 * d.norm_h_mat2.max(1e-12));
            // <Â, ν₁> = 0 and tr Â = 0 componentwise.
            for al in 0..m {
                let mut tr = 0.0;
                for i in 0..n {
                    tr += d.ahat_at(i, i, al);
                }
                prop_assert!(tr.abs() < 1e-11 * scale);
            }
            for i in 0..n {
                for j in 0..n {
                    let mut dot = 0.0;
                    for al in 0..m {
                        dot += d.ahat_at(i, j, al) * d.nu1[al];
                    }
                    prop_assert!(dot.abs() < 1e-11 * scale);
                }
            }
            // f definition.
            prop_assert!((d.f - (c0 * d.norm_h * d.norm_h - d.norm_a2)).abs() < 1e-11 * scale * scale);
        }
    }

    /// The closing gradient bound is a chain of Young inequalities and
    /// trace estimates, so it holds for every positive choice of the Young
    /// constants, not only at the optimizer (1, 1/2, 1) — even where some
    /// displayed coefficient goes negative.
    #[test]
    fn gradient_bound_holds_for_any_young_constants(
        n in 2usize..7,
        m in 2usize..4,
        seed in any::<u64>(),
        a1 in 0.2f64..3.0,
        a2 in 0.2f64..3.0,
        a3 in 0.2f64..3.0,
    ) {
        let dims = Dimensions::new(n, m).unwrap();
        let mut rng = sample::rng_for(seed, &[0xB0, n as u64, m as u64]);
        let c0 = compute_cn(n).unwrap();
        let a = sample::pinched_sff(&mut rng, dims, c0, 0.9);
        let g = sample::codazzi_grad(&mut rng, dims);
        let bound =
            pinchlab::frame::planarity_gradient_bound(&a, &g, c0, a1, a2, a3).unwrap();
        let scale = a.norm() + g.norm2().sqrt().sqrt();
        prop_assert!(
            bound.residual >= -1e-9 * scale.powi(4),
            "residual {} at (a1,a2,a3)=({a1},{a2},{a3})",
            bound.residual
        );
    }

    /// The full gradient splits orthogonally into its ν₁ and hat parts.
    #[test]
    fn gradient_pythagoras(
        n in 2usize..7,
        m in 2usize..4,
        seed in any::<u64>(),
    ) {
        let dims = Dimensions::new(n, m).unwrap();
        let mut rng = sample::rng_for(seed, &[0x9, n as u64, m as u64]);
        let c0 = compute_cn(n).unwrap();
        let a = sample::pinched_sff(&mut rng, dims, c0, 0.9);
        let g = sample::codazzi_grad(&mut rng, dims);
        let d = decompose(&a, c0).unwrap();
        let gd = GradDerived::new(&d, &g).unwrap();
        let lhs = gd.grad_ahat_norm2();
        let rhs = gd.hat_grad_ahat_norm2() + gd.grad_ahat_nu1_norm2();
        prop_assert!((lhs - rhs).abs() < 1e-10 * lhs.max(1e-12));
    }
}
