//! Verification suites. Each suite turns a config into records and plots;
//! cases run in parallel and are collected in a fixed order.

use std::f64::consts::{E, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use super::config::{ExperimentConfig, Suite};
use super::report::{Provenance, Record};
use super::svg::{Series, line_plot};
use crate::bvp::{
    AprioriEvaluator, BoundaryField, BvpModel, DiskField, ModeData, ModelKind, ProjectorPair, RadialGrid, SampleKind,
    apriori_ratio_surrogate, ck_prediction, classical_prediction, compatibility_defect, data_residual, random_sample,
    regularity_shift_exact, sample_seed, solve, solve_mode,
};
use crate::error::{Error, Result};
use crate::growth::GROWTH_STEP;
use crate::interpolation::{HilbertPairSpec, is_pseudoconcave, make_psi, verify_direct_sum, verify_interp_identity};
use crate::quotient::{
    DomainMask, QuotientFactorization, QuotientProblem, kkt_reference_norm, quotient_norm, quotient_upper_bound,
    restriction,
};
use crate::spectral::{
    Lattice, ScaleGrid, SpectralField, Verdict, ck_embedding_criterion, derivative_partial_sup, embedding_bounded,
    embedding_compact, h_norm, random_field, smoothed_modulus,
};
use crate::weights::{
    IndexGrid, IndexMode, MembershipGrid, RoWeight, WeightSpec, check_ro_membership, indices, sharp_indices,
};

/// A rendered plot: file stem and SVG text.
#[derive(Debug, Clone, PartialEq)]
pub struct Plot {
    pub name: String,
    pub svg: String,
}

#[derive(Debug, Default)]
pub struct SuiteOutput {
    pub records: Vec<Record>,
    pub plots: Vec<Plot>,
}

pub fn run_suite(suite: Suite, cfg: &ExperimentConfig) -> SuiteOutput {
    match suite {
        Suite::Membership => membership(cfg),
        Suite::Indices => index_suite(cfg),
        Suite::Norms => norms(cfg),
        Suite::Interp => interp(cfg),
        Suite::Quotient => quotient(cfg),
        Suite::Bvp => bvp(cfg),
        Suite::Embedding => embedding(cfg),
    }
}

fn flatten(parts: Vec<Vec<Record>>) -> Vec<Record> {
    parts.into_iter().flatten().collect()
}

fn or_error(case: &str, claim: &str, r: Result<Vec<Record>>) -> Vec<Record> {
    r.unwrap_or_else(|e| vec![Record::error(case, claim, &e)])
}

const PAIRS: [(f64, f64); 2] = [(0.0, 2.0), (-0.4, 3.0)];

// ---------------------------------------------------------------- membership

fn membership(cfg: &ExperimentConfig) -> SuiteOutput {
    let records = cfg
        .weights()
        .par_iter()
        .map(|phi| {
            let case = format!("{phi} a=2");
            let claim = "weight is RO-varying";
            match check_ro_membership(phi, 2.0, &MembershipGrid::default()) {
                Ok(m) => {
                    let r = m.report();
                    let growth = r.history.windows(2).map(|w| (w[1].1 / w[0].1).ln()).fold(0.0, f64::max);
                    Record::check(case, claim, Provenance::Analytic, growth, GROWTH_STEP, m.is_member())
                }
                Err(e) => Record::error(case, claim, &e),
            }
        })
        .collect();
    SuiteOutput { records, plots: Vec::new() }
}

// ------------------------------------------------------------------- indices

/// Closed-form weights for the index check, followed by the configured ones.
fn index_weights(cfg: &ExperimentConfig) -> Vec<RoWeight> {
    let mut v: Vec<RoWeight> = [-0.4, 0.0, 1.0, 2.0].iter().map(|s| RoWeight::power(*s)).collect();
    v.push(RoWeight::power_log(1.0, 1.0));
    v.push(RoWeight::osc_power(1.0, 0.5));
    for w in cfg.weights() {
        if !v.iter().any(|x| x.spec() == w.spec()) {
            v.push(w);
        }
    }
    v
}

fn index_suite(cfg: &ExperimentConfig) -> SuiteOutput {
    let tol = cfg.tolerances.index;
    let weights = index_weights(cfg);
    let mut records: Vec<Record> = weights
        .par_iter()
        .filter(|phi| phi.is_closed_form())
        .map(|phi| {
            let case = phi.to_string();
            let claim = "estimated index bracket matches closed form";
            let run = || -> Result<Record> {
                let a = indices(phi, &IndexMode::Analytic)?;
                let e = indices(phi, &IndexMode::Estimated(IndexGrid::for_weight(phi)))?;
                let d = (a.sigma0 - e.sigma0).abs().max((a.sigma1 - e.sigma1).abs());
                Ok(Record::at_most(case.clone(), claim, Provenance::Analytic, d, tol))
            };
            run().unwrap_or_else(|e| Record::error(case.clone(), claim, &e))
        })
        .collect();
    for phi in &weights {
        if let WeightSpec::OscPower { s, .. } = phi.spec() {
            let claim = "large-dilation index limit equals the power exponent";
            let rec = match sharp_indices(phi, 400.0, 400.0, 4001) {
                Ok((lo, hi)) => Record::at_most(
                    format!("{phi} L=400"),
                    claim,
                    Provenance::Analytic,
                    (lo - s).abs().max((hi - s).abs()),
                    tol,
                ),
                Err(e) => Record::error(phi.to_string(), claim, &e),
            };
            records.push(rec);
        }
    }
    let mut series = Vec::new();
    for phi in cfg.weights() {
        let mut lo = Vec::new();
        let mut hi = Vec::new();
        for e in 1..=8 {
            let x_max = 3.0 * e as f64 * 10f64.ln();
            let g = IndexGrid { x_min: 0.5 * x_max, x_max, points: 2000, step: 0.05 };
            if let Ok(ix) = indices(&phi, &IndexMode::Estimated(g)) {
                lo.push((x_max.exp(), ix.sigma0));
                hi.push((x_max.exp(), ix.sigma1));
            }
        }
        series.push(Series { label: format!("{phi} lower"), points: lo });
        series.push(Series { label: format!("{phi} upper"), points: hi });
    }
    let plots = vec![Plot {
        name: "index_convergence".into(),
        svg: line_plot("Index estimates vs window end", "t_max (log)", "exponent", &series, true),
    }];
    SuiteOutput { records, plots }
}

// --------------------------------------------------------------------- norms

/// `φ(m)` from the closed-form definition, independent of the log-space evaluator.
fn closed_form_value(spec: &WeightSpec, m: f64) -> Option<f64> {
    match *spec {
        WeightSpec::Power { s } => Some(m.powf(s)),
        WeightSpec::PowerLog { s, r } => Some(m.powf(s) * (E + m).ln().powf(r)),
        WeightSpec::OscPower { s, eps } => Some(m.powf(s) * (eps * m.ln().sin()).exp()),
        WeightSpec::Represented { .. } => None,
    }
}

fn norms(cfg: &ExperimentConfig) -> SuiteOutput {
    let tol = cfg.tolerances.identity;
    let weights = cfg.weights();
    let mut cases = Vec::new();
    for phi in &weights {
        for &k in &cfg.lattice_sizes {
            for &seed in &cfg.seeds {
                cases.push((phi.clone(), k, seed));
            }
        }
    }
    let parts: Vec<Vec<Record>> = cases
        .par_iter()
        .map(|(phi, k, seed)| {
            let case = format!("{phi} K={k} seed={seed}");
            or_error(
                &case,
                "order shift of 1-Laplacian is exact",
                (|| {
                    let lat = Lattice::new(2, *k)?;
                    let mut out = Vec::new();
                    if let Some(expect) = closed_form_value(&phi.spec(), smoothed_modulus(&[*k as i64, 1])) {
                        let u = SpectralField::single_mode(lat, [*k as i64, 1])?;
                        let got = h_norm(&u, phi);
                        out.push(Record::at_most(
                            format!("{case} mode=({k},1)"),
                            "norm of a single mode equals the weight at its modulus",
                            Provenance::Analytic,
                            (got - expect).abs() / expect,
                            tol,
                        ));
                    }
                    let mut worst: f64 = 0.0;
                    for i in 0..cfg.samples {
                        let u = random_field(sample_seed(*seed, i), &RoWeight::power(1.0), lat);
                        worst = worst.max(regularity_shift_exact(&u, phi)?);
                    }
                    out.push(Record::at_most(
                        case.clone(),
                        "order shift of 1-Laplacian is exact",
                        Provenance::Analytic,
                        worst,
                        tol,
                    ));
                    Ok(out)
                })(),
            )
        })
        .collect();
    SuiteOutput { records: flatten(parts), plots: Vec::new() }
}

// -------------------------------------------------------------------- interp

fn interp(cfg: &ExperimentConfig) -> SuiteOutput {
    let tol = cfg.tolerances.identity;
    let weights = cfg.weights();
    let mut records = Vec::new();
    let mut cases = Vec::new();
    for phi in &weights {
        for (s0, s1) in PAIRS {
            let Ok(psi) = make_psi(phi, s0, s1) else { continue };
            let pc = is_pseudoconcave(&psi, &ScaleGrid::default());
            records.push(Record::check(
                format!("{phi} pair=({s0},{s1})"),
                "interpolation parameter is pseudoconcave",
                Provenance::Analytic,
                pc.constant,
                GROWTH_STEP,
                pc.holds,
            ));
            for &k in &cfg.lattice_sizes {
                for &seed in &cfg.seeds {
                    cases.push((phi.clone(), s0, s1, k, seed));
                }
            }
        }
    }
    let parts: Vec<Vec<Record>> = cases
        .par_iter()
        .map(|(phi, s0, s1, k, seed)| {
            let case = format!("{phi} pair=({s0},{s1}) K={k} seed={seed}");
            or_error(
                &case,
                "interpolation norm equals weighted norm",
                (|| {
                    let lat = Lattice::new(2, *k)?;
                    let decay = RoWeight::power(1.0);
                    let mut worst: f64 = 0.0;
                    for i in 0..cfg.samples {
                        let u = random_field(sample_seed(*seed, i), &decay, lat);
                        worst = worst.max(verify_interp_identity(&u, phi, *s0, *s1)?);
                    }
                    let psi = make_psi(phi, *s0, *s1)?;
                    let pair = HilbertPairSpec::new(*s0, *s1)?;
                    let us = [
                        random_field(sample_seed(*seed, cfg.samples), &decay, lat),
                        random_field(sample_seed(*seed, cfg.samples + 1), &decay, lat),
                    ];
                    let ds = verify_direct_sum(&us, &[pair, pair], &psi)?;
                    Ok(vec![
                        Record::at_most(
                            case.clone(),
                            "interpolation norm equals weighted norm",
                            Provenance::Analytic,
                            worst,
                            tol,
                        ),
                        Record::at_most(
                            case.clone(),
                            "interpolation commutes with direct sums",
                            Provenance::Analytic,
                            ds,
                            tol,
                        ),
                    ])
                })(),
            )
        })
        .collect();
    records.extend(flatten(parts));
    SuiteOutput { records, plots: Vec::new() }
}

// ------------------------------------------------------------------ quotient

fn gauss(rng: &mut ChaCha20Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// A seeded one-dimensional quotient problem: grid of 8 to 32 points, a
/// random interval, the lattice with side `2⌊m/2⌋+1`.
pub fn random_interval_problem(seed: u64, weight: &RoWeight, cfg: &ExperimentConfig) -> Result<QuotientProblem> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let m: usize = rng.random_range(8..=32);
    let lo: f64 = rng.random_range(-3.0..0.0);
    let hi: f64 = rng.random_range(lo + 0.8..3.0);
    let mask = DomainMask::interval(m, lo, hi)?;
    let lattice = Lattice::new(1, m / 2)?;
    let n = mask.inside_indices().len();
    let target = (0..n).map(|_| gauss(&mut rng)).collect();
    Ok(QuotientProblem { mask, lattice, weight: weight.clone(), target, options: cfg.solver })
}

/// Largest relative amount by which random feasible extensions undercut the
/// computed minimum.
fn infimum_violation(p: &QuotientProblem, value: f64, best: &SpectralField, seed: u64, count: usize) -> Result<f64> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x5eed_0f1f);
    let best_norm = h_norm(best, &p.weight);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..count {
        let r = SpectralField::from_coeffs(p.lattice, (0..p.lattice.len()).map(|_| gauss(&mut rng)).collect())?;
        let fit = quotient_norm(&QuotientProblem { target: restriction(&r, &p.mask)?, ..p.clone() })?;
        let z: Vec<Complex64> = r.coeffs().iter().zip(fit.extension.coeffs()).map(|(a, b)| a - b).collect();
        let zn = z.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let t = 10f64.powf(rng.random_range(-4.0..0.0)) * best_norm / zn.max(f64::MIN_POSITIVE);
        let w: Vec<Complex64> = best.coeffs().iter().zip(&z).map(|(a, b)| a + b * t).collect();
        let w = SpectralField::from_coeffs(p.lattice, w)?;
        let ext = quotient_upper_bound(&p.target, &p.weight, &w, &p.mask)?;
        worst = worst.max((value - ext) / value);
    }
    Ok(worst)
}

fn quotient(cfg: &ExperimentConfig) -> SuiteOutput {
    let tol = cfg.tolerances.solver;
    let weights = cfg.weights();
    let mut cases = Vec::new();
    for &seed in &cfg.seeds {
        for i in 0..cfg.samples {
            cases.push((seed, i));
        }
    }
    let mut records = flatten(
        cases
            .par_iter()
            .map(|(seed, i)| {
                let phi = &weights[i % weights.len()];
                let case = format!("interval seed={seed} instance={i} {phi}");
                or_error(
                    &case,
                    "iterative quotient norm matches dense KKT solve",
                    (|| {
                        let s = sample_seed(*seed, *i);
                        let p = random_interval_problem(s, phi, cfg)?;
                        let sol = quotient_norm(&p)?;
                        let kkt = kkt_reference_norm(&p)?;
                        let rel = (sol.value - kkt).abs() / kkt;
                        let inf = infimum_violation(&p, sol.value, &sol.extension, s, 100)?;
                        let case = format!("{case} m={}", p.mask.points());
                        Ok(vec![
                            Record::check(
                                case.clone(),
                                "iterative quotient norm matches dense KKT solve",
                                Provenance::Oracle,
                                rel,
                                tol,
                                rel <= tol && sol.converged,
                            ),
                            Record::at_most(
                                case,
                                "quotient norm is the infimum over extensions",
                                Provenance::Oracle,
                                inf,
                                tol,
                            ),
                        ])
                    })(),
                )
            })
            .collect(),
    );
    let k = cfg.lattice_sizes.iter().copied().filter(|k| *k <= 16).max().unwrap_or(8);
    let disk: Vec<Vec<Record>> = weights
        .par_iter()
        .map(|phi| {
            let case = format!("disk K={k} {phi}");
            or_error(
                &case,
                "iterative quotient norm matches Gram factorization",
                (|| {
                    let mask = DomainMask::disk(2 * k + 1, 1.0)?;
                    let lattice = Lattice::new(2, k)?;
                    let fac = QuotientFactorization::new(&mask, lattice, phi, 1e-14)?;
                    let mut out = Vec::new();
                    for &seed in &cfg.seeds {
                        let mut rng = ChaCha20Rng::seed_from_u64(seed);
                        let target: Vec<Complex64> = (0..fac.inside_len()).map(|_| gauss(&mut rng)).collect();
                        let dense = fac.norm(&target);
                        let p = QuotientProblem {
                            mask: mask.clone(),
                            lattice,
                            weight: phi.clone(),
                            target,
                            options: cfg.solver,
                        };
                        let sol = quotient_norm(&p)?;
                        out.push(Record::at_most(
                            format!("{case} seed={seed}"),
                            "iterative quotient norm matches Gram factorization",
                            Provenance::Oracle,
                            (sol.value - dense).abs() / dense,
                            tol,
                        ));
                    }
                    Ok(out)
                })(),
            )
        })
        .collect();
    records.extend(flatten(disk));
    SuiteOutput { records, plots: Vec::new() }
}

// ----------------------------------------------------------------------- bvp

fn expected_dims(kind: ModelKind) -> (usize, usize) {
    match kind {
        ModelKind::LaplaceNeumann => (1, 1),
        _ => (0, 0),
    }
}

/// Seeded disk field with complex Gaussian coefficients scaled by `1/(1+|k|+j)`.
pub fn random_disk_field(seed: u64, cutoff: usize, degree: usize) -> DiskField {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut u = DiskField::zeros(cutoff, degree);
    for k in u.modes() {
        for j in 0..=degree {
            let v = gauss(&mut rng) / (1.0 + k.abs() as f64 + j as f64);
            u.set(k, j, v);
        }
    }
    u
}

fn random_boundary(seed: u64, cutoff: usize) -> BoundaryField {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let vals: Vec<Complex64> = (0..=2 * cutoff).map(|_| gauss(&mut rng)).collect();
    BoundaryField::from_fn(cutoff, |k| vals[(k + cutoff as i64) as usize] / (1.0 + k.abs() as f64))
}

fn random_data(model: &BvpModel, seed: u64) -> (DiskField, Vec<BoundaryField>) {
    let f = random_disk_field(seed, 3, 1);
    let g: Vec<BoundaryField> = (0..model.b.len()).map(|j| random_boundary(sample_seed(seed, j + 1), 4)).collect();
    ProjectorPair::new(model).project_data(&f, &g)
}

/// Exact algebraic checks of one model for one seed.
fn bvp_structure(model: &BvpModel, cfg: &ExperimentConfig, seed: u64) -> Result<Vec<Record>> {
    let tq = cfg.tolerances.quadrature;
    let name = model.name();
    let mut out = Vec::new();
    let fd = &model.fredholm;
    let (en, ec) = expected_dims(model.kind);
    let dims_off = (fd.kernel.len() as f64 - en as f64).abs()
        + (fd.cokernel.len() as f64 - ec as f64).abs()
        + fd.index.abs() as f64;
    let mut kernel_res: f64 = 0.0;
    for w in &fd.kernel {
        kernel_res = kernel_res.max(model.apply_a(w).max_abs());
        for b in model.apply_b(w) {
            kernel_res = kernel_res.max(b.max_abs());
        }
    }
    out.push(Record::at_most(
        format!("{name} seed={seed} dims=({},{}) index={}", fd.kernel.len(), fd.cokernel.len(), fd.index),
        "kernel and cokernel dimensions and index",
        Provenance::Analytic,
        dims_off,
        0.5,
    ));
    out.push(Record::at_most(
        format!("{name} seed={seed}"),
        "kernel elements are annihilated",
        Provenance::Analytic,
        kernel_res,
        tq,
    ));

    // Range condition and compatible solves.
    let (f, g) = random_data(model, seed);
    let defect = compatibility_defect(model, &f, &g).iter().map(|d| d.norm()).fold(0.0, f64::max);
    out.push(Record::at_most(
        format!("{name} seed={seed}"),
        "projected data satisfy the range condition",
        Provenance::Analytic,
        defect,
        tq,
    ));
    let u = solve(model, &f, &g)?;
    out.push(Record::at_most(
        format!("{name} seed={seed}"),
        "compatible data are solved",
        Provenance::Oracle,
        data_residual(model, &u, &f, &g),
        tq,
    ));
    let u_any = random_disk_field(sample_seed(seed, 99), 4, 2);
    let (au, bu) = (model.apply_a(&u_any), model.apply_b(&u_any));
    let range = compatibility_defect(model, &au, &bu).iter().map(|d| d.norm()).fold(0.0, f64::max);
    out.push(Record::at_most(
        format!("{name} seed={seed}"),
        "range lies in the kernel of the defect",
        Provenance::Analytic,
        range,
        tq,
    ));
    let pp = ProjectorPair::new(model);
    let pu = pp.project(&u_any);
    out.push(Record::at_most(
        format!("{name} seed={seed}"),
        "kernel projector is idempotent",
        Provenance::Analytic,
        pp.project(&pu).sub(&pu).max_abs(),
        cfg.tolerances.identity,
    ));
    let rec = solve(model, &au, &bu)?;
    out.push(Record::at_most(
        format!("{name} seed={seed}"),
        "solving the data of u recovers its projection",
        Provenance::Analytic,
        rec.sub(&pu).max_abs() / pu.max_abs().max(1.0),
        tq,
    ));
    if model.kind == ModelKind::LaplaceNeumann && seed == cfg.seeds[0] {
        let one = DiskField::constant(Complex64::new(1.0, 0.0));
        let zero = vec![BoundaryField::zeros(0)];
        let d = compatibility_defect(model, &one, &zero)[0];
        let rejected = matches!(solve(model, &one, &zero), Err(Error::Incompatible { .. }));
        out.push(Record::check(
            format!("{name} f=1 g=0 rejected={rejected}"),
            "incompatible datum has defect pi",
            Provenance::Analytic,
            (d - PI).norm(),
            tq,
            (d - PI).norm() <= tq && rejected,
        ));
    }

    // Green identity on random smooth pairs.
    let mut green: f64 = 0.0;
    for i in 0..cfg.samples {
        let u = random_disk_field(sample_seed(seed, 2 * i + 1000), 4, 3);
        let v = random_disk_field(sample_seed(seed, 2 * i + 1001), 4, 3);
        green = green.max(model.green_residual(&u, &v));
    }
    out.push(Record::at_most(
        format!("{name} seed={seed}"),
        "Green formula",
        Provenance::Analytic,
        green,
        cfg.tolerances.green,
    ));

    // Mode-wise Green-kernel solves against the exact polynomial solution.
    let grid = RadialGrid::gauss(4 * 16);
    let mut mode_err: f64 = 0.0;
    for k in -4i64..=4 {
        let src = |r: f64| f.profile(k, r);
        let data = ModeData { source: &src, boundary: g.iter().map(|b| b.coeff(k)).collect() };
        let s = solve_mode(model, k, &data, &grid)?;
        let scale = s.nodes.iter().map(|r| u.profile(k, *r).norm()).fold(0.0, f64::max).max(1e-300);
        for (r, v) in s.nodes.iter().zip(&s.values) {
            mode_err = mode_err.max((v - u.profile(k, *r)).norm() / scale);
        }
    }
    out.push(Record::at_most(
        format!("{name} seed={seed}"),
        "radial Green solve matches polynomial solve",
        Provenance::Oracle,
        mode_err,
        tq,
    ));
    Ok(out)
}

/// Per-resolution statistics of one (model, weight, seed).
struct DiskStats {
    max_ratio: f64,
    iso_lower: f64,
    iso_upper: f64,
    route: f64,
}

fn disk_stats(ev: &AprioriEvaluator, model: &BvpModel, phi: &RoWeight, samples: &[DiskField]) -> Result<DiskStats> {
    let mut max_ratio: f64 = 0.0;
    let (mut iso_lower, mut iso_upper) = (f64::INFINITY, 0.0f64);
    for u in samples {
        let p = ev.parts(u);
        max_ratio = max_ratio.max(p.ratio()?);
        let r = p.data / p.solution;
        iso_lower = iso_lower.min(r);
        iso_upper = iso_upper.max(r);
    }
    let mut route: f64 = 1.0;
    if model.kind == ModelKind::LaplaceDirichlet {
        for k in 1..=4 {
            let u = DiskField::harmonic_mode(k);
            let a = ev.ratio(&u)?;
            let b = apriori_ratio_surrogate(model, &u, phi)?;
            route = route.max(a / b).max(b / a);
        }
    }
    Ok(DiskStats { max_ratio, iso_lower, iso_upper, route })
}

fn bvp(cfg: &ExperimentConfig) -> SuiteOutput {
    let t = cfg.tolerances;
    let models: Vec<BvpModel> = cfg.models.iter().map(|k| BvpModel::new(*k)).collect();
    let mut structural = Vec::new();
    for m in &models {
        for &seed in &cfg.seeds {
            structural.push((m, seed));
        }
    }
    let mut records = flatten(
        structural
            .par_iter()
            .map(|(m, seed)| {
                or_error(&format!("{} seed={seed}", m.name()), "model structure", bvp_structure(m, cfg, *seed))
            })
            .collect(),
    );

    // A priori constants and isomorphism bounds across disk resolutions.
    let weights = cfg.bvp_weights();
    let sizes = &cfg.bvp_lattice_sizes;
    let mut combos = Vec::new();
    for m in &models {
        for phi in &weights {
            for &k in sizes {
                combos.push((m, phi, k));
            }
        }
    }
    let samples: Vec<Vec<Vec<DiskField>>> = models
        .iter()
        .map(|m| {
            cfg.seeds
                .iter()
                .map(|s| {
                    (0..cfg.bvp_samples)
                        .filter_map(|i| random_sample(m, sample_seed(*s, i), SampleKind::General).ok())
                        .collect()
                })
                .collect()
        })
        .collect();
    let stats: Vec<Result<Vec<DiskStats>>> = combos
        .par_iter()
        .map(|(m, phi, k)| {
            let ev = AprioriEvaluator::new(m, phi, *k)?;
            let mi = models.iter().position(|x| x.kind == m.kind).expect("model listed");
            samples[mi].iter().map(|s| disk_stats(&ev, m, phi, s)).collect()
        })
        .collect();
    let mut plots = Vec::new();
    let mut ci = 0;
    for m in &models {
        let mut series = Vec::new();
        for phi in &weights {
            let block = &stats[ci..ci + sizes.len()];
            ci += sizes.len();
            let case = format!("{} {phi}", m.name());
            if let Some(e) = block.iter().find_map(|r| r.as_ref().err()) {
                records.push(Record::error(case, "a priori estimate", e));
                continue;
            }
            let block: Vec<&Vec<DiskStats>> = block.iter().filter_map(|r| r.as_ref().ok()).collect();
            for (si, &seed) in cfg.seeds.iter().enumerate() {
                let col: Vec<&DiskStats> = block.iter().map(|b| &b[si]).collect();
                if si == 0 {
                    series.push(Series {
                        label: phi.to_string(),
                        points: sizes.iter().zip(&col).map(|(k, s)| (*k as f64, s.max_ratio)).collect(),
                    });
                }
                let n = sizes.len();
                if n >= 2 {
                    let (a, b) = (col[n - 2].max_ratio, col[n - 1].max_ratio);
                    records.push(Record::at_most(
                        format!("{case} seed={seed} K={}->{}", sizes[n - 2], sizes[n - 1]),
                        "a priori constant does not grow with resolution",
                        Provenance::Stability,
                        b / a,
                        t.apriori_growth,
                    ));
                }
                let lows: Vec<f64> = col.iter().map(|s| s.iso_lower).collect();
                let lo = lows.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = lows.iter().copied().fold(0.0, f64::max);
                let ks: Vec<String> = sizes.iter().map(|k| k.to_string()).collect();
                let upper_ok = col.iter().all(|s| s.iso_upper.is_finite());
                records.push(Record::check(
                    format!("{case} seed={seed} K={}", ks.join("/")),
                    "isomorphism lower bound is positive",
                    Provenance::Stability,
                    lo,
                    0.0,
                    lo > 0.0 && upper_ok,
                ));
                records.push(Record::at_most(
                    format!("{case} seed={seed} K={}", ks.join("/")),
                    "isomorphism lower bound is stable across resolutions",
                    Provenance::Stability,
                    hi / lo,
                    t.isomorphism_spread,
                ));
                if m.kind == ModelKind::LaplaceDirichlet && si == 0 {
                    let route = col.iter().map(|s| s.route).fold(1.0, f64::max);
                    records.push(Record::at_most(
                        format!("{case} harmonic modes 1..4 K={}", ks.join("/")),
                        "quotient and boundary realizations of disk norms agree",
                        Provenance::Oracle,
                        route,
                        t.route_factor,
                    ));
                }
            }
        }
        plots.push(Plot {
            name: format!("apriori_{}", m.name()),
            svg: line_plot(&format!("A priori ratio ({})", m.name()), "K", "max ratio over samples", &series, true),
        });
    }
    SuiteOutput { records, plots }
}

// ----------------------------------------------------------------- embedding

/// Lower edge of the witness band, in `|k|_∞`.
pub const WITNESS_LOW: i64 = 2;

/// Solution of the torus model `(1 − Δ)u = f` in two dimensions whose source
/// sits `extra` orders above the `C^order` threshold `σ* = order + 1 − 2`:
/// `|f̂(k)| = ⟨k⟩^{−(σ* + 1 + extra)}` for `|k|_∞ ≥ WITNESS_LOW`, zero below.
/// Phases make every term of `∂_1^order u` nonnegative at the origin.
pub fn witness(lattice: Lattice, order: u32, extra: f64) -> SpectralField {
    let p = order as f64 + extra;
    SpectralField::from_fn(lattice, |k| {
        if k[0].abs().max(k[1].abs()) < WITNESS_LOW {
            return Complex64::new(0.0, 0.0);
        }
        let m = smoothed_modulus(&k);
        let sign = if k[0] < 0 { 1.0 } else { -1.0 };
        let phase = Complex64::new(0.0, sign).powu(order);
        phase * (m.powf(-p) / (m * m))
    })
}

fn verdict_matches(v: Verdict, expect: bool) -> bool {
    v == if expect { Verdict::Holds } else { Verdict::Fails }
}

fn embedding(cfg: &ExperimentConfig) -> SuiteOutput {
    let t = cfg.tolerances;
    let mut records = Vec::new();
    // Thresholds of the C^k criterion for power weights on a 0.1 grid.
    for k in 0..=2u32 {
        let thr = k as i64 * 10 + 10;
        let bad = (-10..=40)
            .filter(|i| *i != thr)
            .filter(|i| {
                !verdict_matches(ck_embedding_criterion(&RoWeight::power(*i as f64 / 10.0), k, 2).verdict, *i > thr)
            })
            .count();
        records.push(Record::at_most(
            format!("power(r) r=-1.0..4.0 k={k} n=2"),
            "continuity criterion threshold r > k + n/2",
            Provenance::Analytic,
            bad as f64,
            0.0,
        ));
    }
    for q in 1..=2u32 {
        for k in 0..=2u32 {
            let thr = 10 * (k as i64 + 1 - 2 * q as i64);
            let bad = (-50..=30)
                .filter(|i| *i != thr)
                .filter(|i| {
                    !verdict_matches(ck_prediction(&RoWeight::power(*i as f64 / 10.0), k, q, 2).verdict, *i > thr)
                })
                .count();
            records.push(Record::at_most(
                format!("power(s) s=-5.0..3.0 k={k} q={q} n=2"),
                "regularity threshold s > k + n/2 - 2q",
                Provenance::Analytic,
                bad as f64,
                0.0,
            ));
        }
    }
    let borderline = [
        (RoWeight::power(-1.0), false),
        (RoWeight::power_log(-1.0, 1.0), true),
        (RoWeight::power_log(-1.0, 0.5), false),
    ];
    for (phi, expect) in borderline {
        let v = ck_prediction(&phi, 0, 1, 2).verdict;
        records.push(Record::check(
            format!("{phi} k=0 q=1 n=2 verdict={v:?}"),
            "borderline regularity threshold",
            Provenance::Analytic,
            f64::from(u8::from(verdict_matches(v, expect))),
            1.0,
            verdict_matches(v, expect),
        ));
    }
    let classical = [
        (ModelKind::LaplaceDirichlet, RoWeight::power(1.1), RoWeight::power(0.1), true),
        (ModelKind::LaplaceDirichlet, RoWeight::power(1.0), RoWeight::power(0.1), false),
        (ModelKind::LaplaceNeumann, RoWeight::power(1.1), RoWeight::power(-0.2), false),
        (ModelKind::LaplaceNeumann, RoWeight::power(1.1), RoWeight::power(0.2), true),
    ];
    for (kind, p1, p2, expect) in classical {
        let case = format!("{kind} f-weights {p1} / {p2}");
        let rec = match classical_prediction(&BvpModel::new(kind), &p1, &p2, 2) {
            Ok(c) => Record::check(
                format!("{case} verdict={:?}", c.verdict),
                "classical solvability criterion",
                Provenance::Analytic,
                f64::from(u8::from(verdict_matches(c.verdict, expect))),
                1.0,
                verdict_matches(c.verdict, expect),
            ),
            Err(e) => Record::error(case, "classical solvability criterion", &e),
        };
        records.push(rec);
    }
    let grid = ScaleGrid::default();
    let emb = [
        (RoWeight::power(1.0), RoWeight::power_log(1.0, 1.0), true, true),
        (RoWeight::power_log(1.0, 1.0), RoWeight::power(1.0), false, false),
        (RoWeight::osc_power(1.0, 0.5), RoWeight::power(1.0), true, false),
        (RoWeight::power(0.5), RoWeight::osc_power(1.0, 0.5), true, true),
    ];
    for (phi, phi1, bounded, compact) in emb {
        let b = embedding_bounded(&phi, &phi1, &grid);
        let c = embedding_compact(&phi, &phi1, &grid);
        records.push(Record::check(
            format!("H^{phi1} into H^{phi} bounded={} compact={c}", b.embeds),
            "embedding between weighted spaces",
            Provenance::Analytic,
            b.constant,
            GROWTH_STEP,
            b.embeds == bounded && c == compact,
        ));
    }

    // Witnesses at and above the threshold, compared between the two finest sizes.
    let mut plots = Vec::new();
    let n = cfg.lattice_sizes.len();
    if n >= 2 {
        let (k0, k1) = (cfg.lattice_sizes[n - 2], cfg.lattice_sizes[n - 1]);
        let mut series = Vec::new();
        let cases: Vec<(u32, f64)> = vec![(0, 0.0), (0, 1.0), (1, 0.0), (1, 1.0)];
        let res: Vec<Result<(Vec<f64>, Vec<f64>)>> = cases
            .par_iter()
            .map(|(order, extra)| {
                let u = witness(Lattice::new(2, k1)?, *order, *extra);
                let all: Vec<usize> = cfg.lattice_sizes.iter().copied().filter(|k| *k <= k1).collect();
                let sups = derivative_partial_sup(&u, [*order, 0], &all)?;
                Ok((all.iter().map(|k| *k as f64).collect(), sups))
            })
            .collect();
        for ((order, extra), r) in cases.iter().zip(res) {
            let sigma = *order as f64 + 1.0 - 2.0 + extra;
            let case = format!("order={order} source=power({sigma}) K={k0}->{k1}");
            match r {
                Ok((ks, sups)) => {
                    let m = sups.len();
                    let growth = sups[m - 1] / sups[m - 2] - 1.0;
                    let pred = ck_prediction(&RoWeight::power(sigma), *order, 1, 2).verdict;
                    series.push(Series {
                        label: format!("order {order} {}", if *extra == 0.0 { "threshold" } else { "above" }),
                        points: ks.into_iter().zip(sups).collect(),
                    });
                    if *extra == 0.0 {
                        records.push(Record::check(
                            format!("{case} prediction={pred:?}"),
                            "threshold witness has unbounded partial sums",
                            Provenance::Stability,
                            growth,
                            t.witness_growth,
                            growth >= t.witness_growth && pred == Verdict::Fails,
                        ));
                    } else {
                        records.push(Record::check(
                            format!("{case} prediction={pred:?}"),
                            "above-threshold witness has bounded partial sums",
                            Provenance::Stability,
                            growth.abs(),
                            t.witness_variation,
                            growth.abs() <= t.witness_variation && pred == Verdict::Holds,
                        ));
                    }
                }
                Err(e) => records.push(Record::error(case, "borderline witness", &e)),
            }
        }
        plots.push(Plot {
            name: "witness_partial_sums".into(),
            svg: line_plot("Witness partial-sum sup norms", "K", "sup", &series, true),
        });
    }
    let ck_series: Vec<Series> =
        [RoWeight::power(1.2), RoWeight::power(1.0), RoWeight::power_log(1.0, 1.0), RoWeight::osc_power(1.0, 0.5)]
            .iter()
            .map(|phi| Series {
                label: phi.to_string(),
                points: ck_embedding_criterion(phi, 0, 2)
                    .partial_sums
                    .into_iter()
                    .filter(|p| p.0.is_finite())
                    .collect(),
            })
            .collect();
    plots.push(Plot {
        name: "ck_partial_sums".into(),
        svg: line_plot("Partial integrals of t^(n-1) / phi^2, n = 2", "T (log)", "integral to T", &ck_series, true),
    });
    SuiteOutput { records, plots }
}
