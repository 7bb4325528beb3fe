mod common;

use std::f64::consts::PI;

use common::norm_direct;
use hormander::Complex64;
use hormander::interpolation::{HilbertPairSpec, interp_norm, is_pseudoconcave, make_psi, verify_interp_identity};
use hormander::spectral::{
    Lattice, ScaleGrid, SpectralField, Verdict, ck_embedding_criterion, derivative_partial_sup, embedding_bounded,
    embedding_compact, h_norm, random_field, weighted_integral,
};
use hormander::weights::RoWeight;
use proptest::prelude::*;

fn matrix() -> [RoWeight; 3] {
    [RoWeight::power(1.0), RoWeight::power_log(1.0, 1.0), RoWeight::osc_power(1.0, 0.5)]
}

#[test]
fn h_norm_matches_direct_sum() {
    let lat = Lattice::new(2, 12).unwrap();
    for phi in matrix() {
        let u = random_field(7, &RoWeight::power(1.0), lat);
        let a = h_norm(&u, &phi);
        let b = norm_direct(&u, &phi.spec());
        assert!((a - b).abs() <= 1e-12 * b, "{phi}: {a} vs {b}");
    }
}

#[test]
fn interpolation_norm_matches_direct_sum() {
    let lat = Lattice::new(2, 16).unwrap();
    for phi in matrix() {
        for (s0, s1) in [(0.0, 2.0), (-0.4, 3.0)] {
            let psi = make_psi(&phi, s0, s1).unwrap();
            let pair = HilbertPairSpec::new(s0, s1).unwrap();
            for seed in 0..5 {
                let u = random_field(seed, &RoWeight::power(1.0), lat);
                let direct = norm_direct(&u, &phi.spec());
                let got = interp_norm(&u, &pair, &psi);
                assert!((got - direct).abs() <= 1e-12 * direct, "{phi} ({s0},{s1}): {got} vs {direct}");
                assert!(verify_interp_identity(&u, &phi, s0, s1).unwrap() <= 1e-12);
            }
        }
    }
}

#[test]
fn psi_formula() {
    let phi = RoWeight::power_log(1.0, 1.0);
    let (s0, s1) = (-0.4, 3.0);
    let psi = make_psi(&phi, s0, s1).unwrap();
    for t in [1.0f64, 2.0, 50.0, 1e5] {
        let want = t.powf(-s0 / (s1 - s0)) * common::phi_direct(&phi.spec(), t.powf(1.0 / (s1 - s0)));
        assert!((psi.eval(t) - want).abs() <= 1e-12 * want);
    }
}

#[test]
fn interpolation_parameters_of_the_matrix_are_pseudoconcave() {
    for phi in matrix() {
        for (s0, s1) in [(0.0, 2.0), (-0.4, 3.0)] {
            let psi = make_psi(&phi, s0, s1).unwrap();
            assert!(is_pseudoconcave(&psi, &ScaleGrid::default()).holds, "{phi} ({s0},{s1})");
        }
    }
}

#[test]
fn pair_outside_indices_is_rejected() {
    assert!(make_psi(&RoWeight::power(1.0), 1.5, 3.0).is_err());
    assert!(make_psi(&RoWeight::power(1.0), 0.0, 1.0).is_err());
    assert!(HilbertPairSpec::new(2.0, 1.0).is_err());
}

#[test]
fn ck_thresholds_on_power_weights() {
    for k in 0..=2u32 {
        for i in -10..=40 {
            let r = i as f64 / 10.0;
            let thr = k as f64 + 1.0;
            if (r - thr).abs() < 1e-9 {
                continue;
            }
            let v = ck_embedding_criterion(&RoWeight::power(r), k, 2).verdict;
            let want = if r > thr { Verdict::Holds } else { Verdict::Fails };
            assert_eq!(v, want, "r={r} k={k}");
        }
    }
}

#[test]
fn weighted_integral_closed_form() {
    // ∫_1^∞ t^{p−1} t^{−2s} dt = 1 / (2s − p).
    let c = weighted_integral(&RoWeight::power(2.0), 2.0);
    assert_eq!(c.verdict, Verdict::Holds);
    assert!((c.integral_estimate - 0.5).abs() < 1e-6, "{}", c.integral_estimate);
    // Borderline logarithms: ∫ dt / (t ln²(e+t)) converges, ∫ dt / (t ln(e+t)) does not.
    assert_eq!(weighted_integral(&RoWeight::power_log(1.0, 1.0), 2.0).verdict, Verdict::Holds);
    assert_eq!(weighted_integral(&RoWeight::power_log(1.0, 0.5), 2.0).verdict, Verdict::Fails);
    assert!(weighted_integral(&RoWeight::power(1.0), 2.0).integral_estimate.is_infinite());
}

#[test]
fn embeddings_between_examples() {
    let g = ScaleGrid::default();
    let (p1, pl) = (RoWeight::power(1.0), RoWeight::power_log(1.0, 1.0));
    assert!(embedding_bounded(&p1, &pl, &g).embeds);
    assert!(embedding_compact(&p1, &pl, &g));
    assert!(!embedding_bounded(&pl, &p1, &g).embeds);
    let osc = RoWeight::osc_power(1.0, 0.5);
    assert!(embedding_bounded(&osc, &p1, &g).embeds);
    assert!(!embedding_compact(&osc, &p1, &g));
}

/// Partial sums evaluated point by point on the same grid.
fn partial_sup_direct(u: &SpectralField, mu: [u32; 2], kc: usize) -> f64 {
    let m = (4 * (2 * kc + 1)).next_power_of_two();
    let lat = u.lattice();
    let mut best: f64 = 0.0;
    for a in 0..m {
        for b in 0..m {
            let x = [2.0 * PI * a as f64 / m as f64, 2.0 * PI * b as f64 / m as f64];
            let mut s = Complex64::new(0.0, 0.0);
            for (k, c) in lat.modes().zip(u.coeffs()) {
                if k[0].unsigned_abs() as usize > kc || k[1].unsigned_abs() as usize > kc {
                    continue;
                }
                let sym = Complex64::new(0.0, k[0] as f64).powu(mu[0]) * Complex64::new(0.0, k[1] as f64).powu(mu[1]);
                s += sym * c * Complex64::from_polar(1.0, k[0] as f64 * x[0] + k[1] as f64 * x[1]);
            }
            best = best.max(s.norm());
        }
    }
    best
}

#[test]
fn partial_sups_match_pointwise_evaluation() {
    let lat = Lattice::new(2, 4).unwrap();
    let u = random_field(3, &RoWeight::power(1.0), lat);
    for mu in [[0, 0], [1, 0], [1, 1]] {
        let fast = derivative_partial_sup(&u, mu, &[2, 4]).unwrap();
        for (got, kc) in fast.iter().zip([2, 4]) {
            let want = partial_sup_direct(&u, mu, kc);
            assert!((got - want).abs() <= 1e-12 * want, "{mu:?} K={kc}: {got} vs {want}");
        }
    }
    assert!(derivative_partial_sup(&u, [3, 2], &[2]).is_err());
    assert!(derivative_partial_sup(&u, [0, 0], &[5]).is_err());
}

#[test]
fn field_csv_roundtrip() {
    let u = random_field(11, &RoWeight::power(1.0), Lattice::new(2, 3).unwrap());
    assert_eq!(SpectralField::from_csv(&u.to_csv()).unwrap(), u);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn norm_is_homogeneous_and_monotone_in_weight(seed in 0u64..1000, a in 0.1f64..10.0, s in -1.0f64..2.0) {
        let lat = Lattice::new(2, 6).unwrap();
        let u = random_field(seed, &RoWeight::power(0.0), lat);
        let scaled = SpectralField::from_coeffs(lat, u.coeffs().iter().map(|c| c * a).collect()).unwrap();
        let phi = RoWeight::power(s);
        prop_assert!((h_norm(&scaled, &phi) - a * h_norm(&u, &phi)).abs() <= 1e-12 * a * h_norm(&u, &phi));
        prop_assert!(h_norm(&u, &phi) <= h_norm(&u, &RoWeight::power(s + 0.5)) * (1.0 + 1e-14));
    }

    #[test]
    fn interp_identity_holds_for_random_pairs(seed in 0u64..1000, s in 0.5f64..1.5, lo in 0.1f64..1.0, hi in 0.1f64..2.0) {
        let lat = Lattice::new(2, 8).unwrap();
        let u = random_field(seed, &RoWeight::power(1.0), lat);
        let phi = RoWeight::power_log(s, 1.0);
        prop_assert!(verify_interp_identity(&u, &phi, s - lo, s + hi).unwrap() <= 1e-12);
    }
}
