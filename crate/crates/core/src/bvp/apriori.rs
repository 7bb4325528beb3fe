//! A priori estimate and isomorphism bounds with `Ω`-norms realized as
//! quotient norms on the disk of radius 1 inside the `2π`-periodic torus.
//!
//! All norms use the torus coefficient normalization, so the `L²(Ω)` term is
//! `‖u‖_{L²(Ω)} / (2π)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::disk::{BoundaryField, DiskField, gamma_norm, l2_norm_omega};
use super::model::{BvpModel, ProjectorPair, solve};
use crate::error::{Error, Result};
use crate::quotient::{DomainMask, QuotientFactorization};
use crate::spectral::Lattice;
use crate::weights::RoWeight;

/// Relative eigenvalue cutoff of the Gram pseudo-inverse.
pub const GRAM_CUTOFF: f64 = 1e-14;
/// Angular cutoff of random sample data.
pub const SAMPLE_CUTOFF: usize = 4;

fn check_lower_index(phi: &RoWeight) -> Result<()> {
    let s0 = phi.index_bounds().sigma0;
    if s0 > -0.5 { Ok(()) } else { Err(Error::LowerIndexTooSmall(s0)) }
}

/// Disk geometry at torus resolution `K`: a `(2K+1)`-point grid per side.
pub fn disk_mask(cutoff: usize) -> Result<(DomainMask, Lattice)> {
    Ok((DomainMask::disk(2 * cutoff + 1, 1.0)?, Lattice::new(2, cutoff)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AprioriParts {
    /// `‖u‖_{H^{φρ^{2q}}(Ω)}`.
    pub solution: f64,
    /// `‖(A, B)u‖` in `H^φ(Ω) ⊕ ⊕_j H^{φρ^{2q−m_j−1/2}}(Γ)`.
    pub data: f64,
    /// `‖u‖_{L²(Ω)} / (2π)`.
    pub l2: f64,
}

impl AprioriParts {
    pub fn ratio(&self) -> Result<f64> {
        let den = self.data + self.l2;
        if den == 0.0 {
            return Err(Error::ZeroField(self.solution));
        }
        Ok(self.solution / den)
    }
}

/// Cached quotient-norm factorizations for one `(model, φ, K)`.
pub struct AprioriEvaluator {
    model: BvpModel,
    phi: RoWeight,
    polar: Vec<(f64, f64)>,
    solution_norm: QuotientFactorization,
    source_norm: QuotientFactorization,
}

impl AprioriEvaluator {
    pub fn new(model: &BvpModel, phi: &RoWeight, cutoff: usize) -> Result<Self> {
        check_lower_index(phi)?;
        let (mask, lattice) = disk_mask(cutoff)?;
        let polar = mask
            .inside_indices()
            .iter()
            .map(|i| {
                let [x, y] = mask.point(*i);
                (x.hypot(y), y.atan2(x))
            })
            .collect();
        let big = phi.shift(model.order as f64);
        Ok(Self {
            model: model.clone(),
            phi: phi.clone(),
            polar,
            solution_norm: QuotientFactorization::new(&mask, lattice, &big, GRAM_CUTOFF)?,
            source_norm: QuotientFactorization::new(&mask, lattice, phi, GRAM_CUTOFF)?,
        })
    }

    pub fn values(&self, u: &DiskField) -> Vec<Complex64> {
        self.polar.iter().map(|(r, t)| u.eval(*r, *t)).collect()
    }

    pub fn solution_norm(&self, u: &DiskField) -> f64 {
        self.solution_norm.norm(&self.values(u))
    }

    pub fn data_norm(&self, u: &DiskField) -> f64 {
        let f = self.model.apply_a(u);
        let mut s = self.source_norm.norm(&self.values(&f)).powi(2);
        let q2 = self.model.order as f64;
        for (op, g) in self.model.b.iter().zip(self.model.apply_b(u)) {
            let w = self.phi.shift(q2 - op.order() as f64 - 0.5);
            s += gamma_norm(&g, &w).powi(2);
        }
        s.sqrt()
    }

    pub fn parts(&self, u: &DiskField) -> AprioriParts {
        AprioriParts { solution: self.solution_norm(u), data: self.data_norm(u), l2: l2_norm_omega(u) / (2.0 * PI) }
    }

    pub fn ratio(&self, u: &DiskField) -> Result<f64> {
        self.parts(u).ratio()
    }
}

/// `‖u‖_{H^{φρ^{2q}}(Ω)} / (‖(A,B)u‖ + ‖u‖_{L²(Ω)})` at torus resolution `K`.
pub fn apriori_ratio(model: &BvpModel, u: &DiskField, phi: &RoWeight, cutoff: usize) -> Result<f64> {
    AprioriEvaluator::new(model, phi, cutoff)?.ratio(u)
}

/// Boundary surrogate of `‖u‖_{H^ψ(Ω)}` for harmonic `u`: the `H^{ψρ^{−1/2}}(Γ)`
/// norm of its trace.
pub fn harmonic_surrogate_norm(u: &DiskField, psi: &RoWeight) -> Result<f64> {
    if u.laplacian().max_abs() > 1e-12 * u.max_abs().max(1.0) {
        return Err(Error::InvalidArgument("surrogate norm needs a harmonic field".into()));
    }
    Ok(gamma_norm(&u.trace(), &psi.shift(-0.5)))
}

/// The a priori ratio with the solution norm taken from the harmonic surrogate.
pub fn apriori_ratio_surrogate(model: &BvpModel, u: &DiskField, phi: &RoWeight) -> Result<f64> {
    check_lower_index(phi)?;
    let solution = harmonic_surrogate_norm(u, &phi.shift(model.order as f64))?;
    let q2 = model.order as f64;
    let mut data = 0.0;
    for (op, g) in model.b.iter().zip(model.apply_b(u)) {
        data += gamma_norm(&g, &phi.shift(q2 - op.order() as f64 - 0.5)).powi(2);
    }
    AprioriParts { solution, data: data.sqrt(), l2: l2_norm_omega(u) / (2.0 * PI) }.ratio()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    /// Random source and boundary data.
    General,
    /// Random boundary data, zero source.
    Harmonic,
}

/// A `P`-normalized solution for seeded random data. Source: angular cutoff
/// 3, radial degree 1; boundary data: cutoff [`SAMPLE_CUTOFF`]; coefficients
/// complex Gaussian scaled by `1/(1+|k|)`. Neumann data are made compatible
/// with `P⁺`.
pub fn random_sample(model: &BvpModel, seed: u64, kind: SampleKind) -> Result<DiskField> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut gauss = |k: i64| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im) * (std::f64::consts::FRAC_1_SQRT_2 / (1.0 + k.abs() as f64))
    };
    let mut f = DiskField::zeros(3, 1);
    for k in f.modes() {
        for j in 0..=1 {
            let v = gauss(k);
            if kind == SampleKind::General {
                f.set(k, j, v);
            }
        }
    }
    let g: Vec<BoundaryField> = (0..model.b.len())
        .map(|_| {
            let c = SAMPLE_CUTOFF as i64;
            let vals: Vec<Complex64> = (-c..=c).map(&mut gauss).collect();
            BoundaryField::from_fn(SAMPLE_CUTOFF, |k| vals[(k + c) as usize])
        })
        .collect();
    let (f, g) = ProjectorPair::new(model).project_data(&f, &g);
    solve(model, &f, &g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsomorphismBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Extremes of `‖(A,B)u‖ / ‖u‖_{H^{φρ^{2q}}(Ω)}` over seeded `P`-normalized samples.
pub fn isomorphism_condition(
    model: &BvpModel,
    phi: &RoWeight,
    cutoff: usize,
    n_samples: usize,
    seed: u64,
) -> Result<IsomorphismBounds> {
    let ev = AprioriEvaluator::new(model, phi, cutoff)?;
    isomorphism_with(&ev, model, n_samples, seed, SampleKind::General)
}

/// [`isomorphism_condition`] with a prebuilt evaluator and sample kind.
pub fn isomorphism_with(
    ev: &AprioriEvaluator,
    model: &BvpModel,
    n_samples: usize,
    seed: u64,
    kind: SampleKind,
) -> Result<IsomorphismBounds> {
    if n_samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let (mut lower, mut upper) = (f64::INFINITY, 0.0f64);
    for i in 0..n_samples {
        let u = random_sample(model, sample_seed(seed, i), kind)?;
        let r = ev.data_norm(&u) / ev.solution_norm(&u);
        lower = lower.min(r);
        upper = upper.max(r);
    }
    Ok(IsomorphismBounds { lower, upper })
}

/// Seed of the `i`-th sample derived from a base seed.
pub fn sample_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(i as u64)
}
