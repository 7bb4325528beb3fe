mod common;

use std::f64::consts::PI;

use common::interval_quotient;
use hormander::Complex64;
use hormander::quotient::{
    DomainMask, QuotientFactorization, QuotientProblem, SolverOptions, kkt_reference_norm, quotient_norm,
    quotient_upper_bound, restriction,
};
use hormander::spectral::{Lattice, SpectralField, h_norm, random_field};
use hormander::weights::RoWeight;
use proptest::prelude::*;

fn target(n: usize, seed: u64) -> Vec<Complex64> {
    (0..n).map(|i| Complex64::new(((seed + 3 * i as u64) as f64).sin(), ((seed * 7 + i as u64) as f64).cos())).collect()
}

#[test]
fn cg_and_kkt_match_normal_equations() {
    for (m, lo, hi) in [(8, -1.0, 1.5), (17, -2.5, 0.3), (32, -0.5, 2.9)] {
        let mask = DomainMask::interval(m, lo, hi).unwrap();
        let lattice = Lattice::new(1, m / 2).unwrap();
        for phi in [RoWeight::power(1.0), RoWeight::power_log(1.0, 1.0), RoWeight::osc_power(1.0, 0.5)] {
            let u = target(mask.inside_indices().len(), m as u64);
            let oracle = interval_quotient(&mask, lattice, &phi.spec(), &u);
            let p = QuotientProblem {
                mask: mask.clone(),
                lattice,
                weight: phi.clone(),
                target: u.clone(),
                options: SolverOptions::default(),
            };
            let sol = quotient_norm(&p).unwrap();
            assert!(sol.converged);
            assert!((sol.value - oracle).abs() <= 1e-8 * oracle, "m={m} {phi}: cg {} vs {oracle}", sol.value);
            let kkt = kkt_reference_norm(&p).unwrap();
            assert!((kkt - oracle).abs() <= 1e-8 * oracle, "m={m} {phi}: kkt {kkt} vs {oracle}");
            // The minimizer is an extension with the minimal norm.
            let back = restriction(&sol.extension, &mask).unwrap();
            let err = back.iter().zip(&u).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
            assert!(err <= 1e-8);
            assert!((h_norm(&sol.extension, &phi) - sol.value).abs() <= 1e-10 * sol.value);
        }
    }
}

#[test]
fn disk_factorization_matches_cg() {
    let k = 6;
    let mask = DomainMask::disk(2 * k + 1, 1.0).unwrap();
    let lattice = Lattice::new(2, k).unwrap();
    let phi = RoWeight::power_log(1.0, 1.0);
    let fac = QuotientFactorization::new(&mask, lattice, &phi, 1e-14).unwrap();
    let u = target(fac.inside_len(), 5);
    let p = QuotientProblem { mask, lattice, weight: phi, target: u.clone(), options: SolverOptions::default() };
    let sol = quotient_norm(&p).unwrap();
    let dense = fac.norm(&u);
    assert!((sol.value - dense).abs() <= 1e-8 * dense, "{} vs {dense}", sol.value);
}

#[test]
fn masks_are_validated() {
    assert!(DomainMask::interval(16, 10.0, 11.0).is_err());
    assert!(DomainMask::interval(16, -4.0, 4.0).is_err());
    assert!(DomainMask::new(3, 4, vec![true; 64]).is_err());
    let mask = DomainMask::disk(9, 1.0).unwrap();
    assert_eq!(DomainMask::from_csv(&mask.to_csv()).unwrap(), mask);
    assert!(DomainMask::from_csv("i,j,inside\n").is_err());
}

#[test]
fn wrong_target_length_is_an_error() {
    let mask = DomainMask::interval(12, -1.0, 1.0).unwrap();
    let p = QuotientProblem {
        mask,
        lattice: Lattice::new(1, 6).unwrap(),
        weight: RoWeight::power(1.0),
        target: vec![Complex64::new(1.0, 0.0)],
        options: SolverOptions::default(),
    };
    assert!(quotient_norm(&p).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // Any extension bounds the quotient norm from above.
    #[test]
    fn quotient_norm_is_a_lower_bound(seed in 0u64..10_000, m in 8usize..=32, lo in -3.0f64..-0.5, hi in 0.5f64..3.0) {
        let mask = DomainMask::interval(m, lo, hi).unwrap();
        let lattice = Lattice::new(1, m / 2).unwrap();
        let phi = RoWeight::osc_power(1.0, 0.5);
        let w = random_field(seed, &RoWeight::power(0.5), lattice);
        let u = restriction(&w, &mask).unwrap();
        let p = QuotientProblem { mask: mask.clone(), lattice, weight: phi.clone(), target: u.clone(), options: SolverOptions::default() };
        let sol = quotient_norm(&p).unwrap();
        let upper = quotient_upper_bound(&u, &phi, &w, &mask).unwrap();
        prop_assert!((upper - h_norm(&w, &phi)).abs() <= 1e-12 * upper);
        prop_assert!(sol.value <= upper * (1.0 + 1e-10));
    }

    #[test]
    fn quotient_norm_is_homogeneous(seed in 0u64..10_000, a in 0.01f64..100.0) {
        let mask = DomainMask::interval(20, -1.0, 2.0).unwrap();
        let lattice = Lattice::new(1, 10).unwrap();
        let u = target(mask.inside_indices().len(), seed);
        let mk = |t: Vec<Complex64>| QuotientProblem { mask: mask.clone(), lattice, weight: RoWeight::power(1.0), target: t, options: SolverOptions::default() };
        let v1 = quotient_norm(&mk(u.clone())).unwrap().value;
        let v2 = quotient_norm(&mk(u.iter().map(|c| c * a).collect())).unwrap().value;
        prop_assert!((v2 - a * v1).abs() <= 1e-8 * a * v1);
    }
}

#[test]
fn extension_of_a_field_reproduces_it_inside() {
    let lattice = Lattice::new(1, 8).unwrap();
    let mask = DomainMask::interval(16, -1.0, 1.0).unwrap();
    let w = SpectralField::single_mode(lattice, [3, 0]).unwrap();
    let u = restriction(&w, &mask).unwrap();
    for (i, v) in mask.inside_indices().iter().zip(&u) {
        let x = 2.0 * PI * *i as f64 / 16.0;
        assert!((v - Complex64::from_polar(1.0, 3.0 * x)).norm() < 1e-12);
    }
}
