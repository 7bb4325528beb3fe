use std::f64::consts::E;

use hormander::weights::{
    IndexGrid, IndexMode, MembershipGrid, RoWeight, WeightSpec, check_ro_membership, indices, sharp_indices,
};
use proptest::prelude::*;

/// `ln φ(t)` straight from the closed-form definitions.
fn ln_phi_direct(spec: &WeightSpec, t: f64) -> f64 {
    match *spec {
        WeightSpec::Power { s } => s * t.ln(),
        WeightSpec::PowerLog { s, r } => s * t.ln() + r * (E + t).ln().ln(),
        WeightSpec::OscPower { s, eps } => s * t.ln() + eps * t.ln().sin(),
        WeightSpec::Represented { .. } => unreachable!(),
    }
}

#[test]
fn closed_forms_match_direct_evaluation() {
    let weights = [RoWeight::power(-0.4), RoWeight::power_log(1.0, 1.0), RoWeight::osc_power(1.0, 0.5)];
    for phi in &weights {
        for t in [1.0f64, 1.5, 10.0, 1e3, 1e8] {
            let got = phi.ln_phi(t.ln());
            let want = ln_phi_direct(&phi.spec(), t);
            assert!((got - want).abs() <= 1e-12 * want.abs().max(1.0), "{phi} t={t}: {got} vs {want}");
            assert!((phi.evaluate(t).unwrap() - want.exp()).abs() <= 1e-12 * want.exp());
        }
    }
}

#[test]
fn evaluate_rejects_points_below_one() {
    assert!(RoWeight::power(1.0).evaluate(0.5).is_err());
}

#[test]
fn estimated_indices_near_closed_forms() {
    let cases = [
        (RoWeight::power(-0.4), -0.4, -0.4),
        (RoWeight::power(0.0), 0.0, 0.0),
        (RoWeight::power(2.0), 2.0, 2.0),
        (RoWeight::power_log(1.0, 1.0), 1.0, 1.0),
        (RoWeight::osc_power(1.0, 0.5), 0.5, 1.5),
    ];
    for (phi, lo, hi) in cases {
        let e = indices(&phi, &IndexMode::Estimated(IndexGrid::default())).unwrap();
        assert!((e.sigma0 - lo).abs() <= 0.05 && (e.sigma1 - hi).abs() <= 0.05, "{phi}: {e:?}");
    }
}

#[test]
fn sharp_indices_collapse_for_oscillation() {
    let (lo, hi) = sharp_indices(&RoWeight::osc_power(1.0, 0.5), 400.0, 400.0, 4001).unwrap();
    // |ε (sin(x+L) − sin x)| / L ≤ 2ε / L = 0.0025.
    assert!((lo - 1.0).abs() <= 0.0025 + 1e-12 && (hi - 1.0).abs() <= 0.0025 + 1e-12);
}

#[test]
fn represented_weight_reproduces_power() {
    let n = 41;
    let spec = WeightSpec::Represented {
        start: 1.0,
        ratio: 2.0,
        beta: vec![0.0; n],
        gamma: vec![0.7; n],
        beta_bound: 1.0,
        gamma_bound: 1.0,
    };
    let phi = RoWeight::from_spec(&spec).unwrap();
    for t in [1.0, 3.0, 100.0, 1e6] {
        assert!((phi.ln_phi(f64::ln(t)) - 0.7 * f64::ln(t)).abs() < 1e-12);
    }
    let e = indices(&phi, &IndexMode::Estimated(IndexGrid::for_weight(&phi))).unwrap();
    assert!((e.sigma0 - 0.7).abs() < 1e-9 && (e.sigma1 - 0.7).abs() < 1e-9);
    assert!(indices(&phi, &IndexMode::Analytic).is_err());
}

#[test]
fn represented_weight_rejects_unbounded_samples() {
    let spec = WeightSpec::Represented {
        start: 1.0,
        ratio: 2.0,
        beta: vec![0.0, 3.0],
        gamma: vec![0.0, 0.0],
        beta_bound: 1.0,
        gamma_bound: 1.0,
    };
    assert!(RoWeight::from_spec(&spec).is_err());
}

#[test]
fn spec_matrix_is_ro() {
    for phi in [RoWeight::power(1.0), RoWeight::power_log(1.0, 1.0), RoWeight::osc_power(1.0, 0.5)] {
        let m = check_ro_membership(&phi, 2.0, &MembershipGrid::default()).unwrap();
        assert!(m.is_member(), "{phi}: {:?}", m.report());
        // λ^s with λ ≤ 2, times at most e^{2ε} from the bounded part.
        assert!(m.report().c_estimate <= 2f64.powf(1.0) * (2.0f64 * 0.5).exp());
    }
}

#[test]
fn membership_rejects_bad_arguments() {
    assert!(check_ro_membership(&RoWeight::power(1.0), 1.0, &MembershipGrid::default()).is_err());
    let g = MembershipGrid { t_points: 0, ..MembershipGrid::default() };
    assert!(check_ro_membership(&RoWeight::power(1.0), 2.0, &g).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // ln φ(λt) − ln φ(t) stays within the index bracket up to the bounded part.
    #[test]
    fn dilation_ratios_respect_indices(s in -2.0f64..3.0, eps in 0.0f64..1.0, lx in 0.0f64..40.0, ll in 0.0f64..20.0) {
        let phi = RoWeight::osc_power(s, eps);
        let d = phi.ln_phi(lx + ll) - phi.ln_phi(lx);
        let ix = indices(&phi, &IndexMode::Analytic).unwrap();
        prop_assert!(d >= ix.sigma0 * ll - 2.0 * eps - 1e-9);
        prop_assert!(d <= ix.sigma1 * ll + 2.0 * eps + 1e-9);
    }

    #[test]
    fn shift_multiplies_by_power(s in -2.0f64..3.0, r in -1.0f64..2.0, sh in -2.0f64..2.0, lx in 0.0f64..30.0) {
        let phi = RoWeight::power_log(s, r);
        let got = phi.shift(sh).ln_phi(lx) - phi.ln_phi(lx);
        prop_assert!((got - sh * lx).abs() <= 1e-10 * (1.0 + lx));
    }

    #[test]
    fn spec_roundtrip(s in -2.0f64..3.0, eps in 0.0f64..1.0) {
        let phi = RoWeight::osc_power(s, eps);
        let back = RoWeight::from_spec(&phi.spec()).unwrap();
        prop_assert_eq!(back.spec(), phi.spec());
    }
}
