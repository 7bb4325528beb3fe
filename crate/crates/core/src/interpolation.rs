//! Interpolation with a function parameter between Sobolev spaces on the torus.
//!
//! For the pair `[H^{s0}, H^{s1}]` the generating operator is the multiplier
//! `⟨k⟩^{s1−s0}`, so `‖u‖_ψ² = Σ ⟨k⟩^{2 s0} ψ²(⟨k⟩^{s1−s0}) |ŵ(k)|²`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{Trend, classify_growth};
use crate::spectral::{ScaleGrid, SpectralField, h_norm, smoothed_modulus, weighted_norm};
use crate::weights::{IndexMethod, RoWeight};

/// Slack applied to estimated indices in [`make_psi`].
pub const ESTIMATED_INDEX_SLACK: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HilbertPairSpec {
    s0: f64,
    s1: f64,
}

impl HilbertPairSpec {
    pub fn new(s0: f64, s1: f64) -> Result<Self> {
        if !(s0 < s1) || !s0.is_finite() || !s1.is_finite() {
            return Err(Error::InvalidArgument(format!("pair needs s0 < s1 (got {s0}, {s1})")));
        }
        Ok(Self { s0, s1 })
    }

    pub fn s0(&self) -> f64 {
        self.s0
    }

    pub fn s1(&self) -> f64 {
        self.s1
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Psi {
    FromWeight { phi: RoWeight, s0: f64, s1: f64 },
    Power(f64),
}

/// A positive function `ψ` on `(0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InterpolationParameter {
    psi: Psi,
}

impl InterpolationParameter {
    /// `ψ(t) = t^p`.
    pub fn power(p: f64) -> Self {
        Self { psi: Psi::Power(p) }
    }

    pub fn source(&self) -> Option<(&RoWeight, f64, f64)> {
        match &self.psi {
            Psi::FromWeight { phi, s0, s1 } => Some((phi, *s0, *s1)),
            Psi::Power(_) => None,
        }
    }

    /// `ln ψ(e^y)`.
    pub fn ln_psi(&self, y: f64) -> f64 {
        match &self.psi {
            Psi::Power(p) => p * y,
            Psi::FromWeight { phi, s0, s1 } => {
                if y < 0.0 {
                    phi.ln_phi(0.0)
                } else {
                    let d = s1 - s0;
                    -(s0 / d) * y + phi.ln_phi(y / d)
                }
            }
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.ln_psi(t.ln()).exp()
    }
}

/// `ψ(t) = t^{−s0/(s1−s0)} φ(t^{1/(s1−s0)})` for `t ≥ 1`, `ψ(t) = φ(1)` below.
pub fn make_psi(phi: &RoWeight, s0: f64, s1: f64) -> Result<InterpolationParameter> {
    HilbertPairSpec::new(s0, s1)?;
    let ix = phi.index_bounds();
    let slack = if ix.method == IndexMethod::Estimated { ESTIMATED_INDEX_SLACK } else { 0.0 };
    let (lower, upper) = (ix.sigma0 - slack, ix.sigma1 + slack);
    if !(s0 < lower && upper < s1) {
        return Err(Error::OrdersOutOfRange { s0, s1, lower, upper });
    }
    Ok(InterpolationParameter { psi: Psi::FromWeight { phi: phi.clone(), s0, s1 } })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Pseudoconcavity {
    pub holds: bool,
    /// Witnessing constant `C` on the widest scanned range.
    pub constant: f64,
    /// `(Y_j, C_j)`.
    pub history: Vec<(f64, f64)>,
}

/// Quasi-concavity check for `t ≥ 1`: `ψ(s) ≤ C ψ(t)` and
/// `ψ(t)/t ≤ C ψ(s)/s` for all `1 ≤ s ≤ t`. `C` must stay bounded as the
/// scanned range `[1, e^{Y_j}]` is squared.
pub fn is_pseudoconcave(psi: &InterpolationParameter, grid: &ScaleGrid) -> Pseudoconcavity {
    let mut history = Vec::new();
    for y_max in grid.scales() {
        let n = (grid.points_per_unit as f64 * y_max).ceil() as usize + 1;
        let h = 1.0 / grid.points_per_unit as f64;
        let (mut run_max, mut run_min) = (f64::NEG_INFINITY, f64::INFINITY);
        let mut ln_c: f64 = 0.0;
        for i in 0..n {
            let y = (h * i as f64).min(y_max);
            let l = psi.ln_psi(y);
            run_max = run_max.max(l);
            run_min = run_min.min(l - y);
            ln_c = ln_c.max(run_max - l).max((l - y) - run_min);
        }
        history.push((y_max, ln_c));
    }
    let logs: Vec<f64> = history.iter().map(|h| h.1).collect();
    let holds = classify_growth(&logs) == Trend::Bounded;
    let constant = logs.last().map_or(f64::NAN, |v| v.exp());
    Pseudoconcavity { holds, constant, history: history.into_iter().map(|(y, c)| (y, c.exp())).collect() }
}

fn interp_multipliers(u: &SpectralField, pair: &HilbertPairSpec, psi: &InterpolationParameter) -> Vec<f64> {
    let d = pair.s1 - pair.s0;
    u.lattice()
        .modes()
        .map(|k| {
            let m = smoothed_modulus(&k);
            m.powf(pair.s0) * psi.eval(m.powf(d))
        })
        .collect()
}

/// `(Σ_k ⟨k⟩^{2 s0} ψ²(⟨k⟩^{s1−s0}) |ŵ(k)|²)^{1/2}`.
pub fn interp_norm(u: &SpectralField, pair: &HilbertPairSpec, psi: &InterpolationParameter) -> f64 {
    weighted_norm(u.coeffs(), &interp_multipliers(u, pair, psi))
}

/// Relative gap between the interpolation norm built from `φ` and the `H^φ` norm.
pub fn verify_interp_identity(u: &SpectralField, phi: &RoWeight, s0: f64, s1: f64) -> Result<f64> {
    let psi = make_psi(phi, s0, s1)?;
    let pair = HilbertPairSpec::new(s0, s1)?;
    let a = interp_norm(u, &pair, &psi);
    let b = h_norm(u, phi);
    if b == 0.0 {
        return Err(Error::ZeroField((a - b).abs()));
    }
    Ok((a - b).abs() / b)
}

/// Relative gap between the norm of a direct sum and the Pythagorean
/// combination of the component norms.
pub fn verify_direct_sum(us: &[SpectralField], pairs: &[HilbertPairSpec], psi: &InterpolationParameter) -> Result<f64> {
    if us.len() != pairs.len() {
        return Err(Error::InvalidArgument(format!("{} fields but {} pairs", us.len(), pairs.len())));
    }
    let mut coeffs: Vec<Complex64> = Vec::new();
    let mut mult: Vec<f64> = Vec::new();
    let mut parts = 0.0;
    for (u, p) in us.iter().zip(pairs) {
        coeffs.extend_from_slice(u.coeffs());
        mult.extend(interp_multipliers(u, p, psi));
        parts += interp_norm(u, p, psi).powi(2);
    }
    let whole = weighted_norm(&coeffs, &mult);
    let parts = parts.sqrt();
    if whole == 0.0 && parts == 0.0 {
        return Ok(0.0);
    }
    Ok((whole - parts).abs() / whole.max(parts))
}
