//! Regularity predictions from integral criteria, and the exact order shift
//! of `1 − Δ` on the torus.

use serde::Serialize;

use super::model::BvpModel;
use crate::error::{Error, Result};
use crate::spectral::{CkCriterion, SpectralField, Verdict, h_norm, weighted_integral};
use crate::weights::RoWeight;

/// `∫_1^∞ t^{2k+n−1−4q} φ^{−2}(t) dt < ∞`, which places solutions with
/// `H^φ` data in `C^k`.
pub fn ck_prediction(phi: &RoWeight, k: u32, q: u32, n: u32) -> CkCriterion {
    weighted_integral(&phi.shift(2.0 * q as f64), (2 * k + n) as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalPrediction {
    pub verdict: Verdict,
    /// `∫ t^{n−1} φ1^{−2} dt`.
    pub interior: CkCriterion,
    /// `∫ t^{2m+n−1−4q} φ2^{−2} dt`.
    pub up_to_boundary: CkCriterion,
}

/// Classical solvability: `u ∈ C^{2q}(Ω) ∩ C^m(Ω̄)` for source data in `H^{φ1}`
/// near interior points and `H^{φ2}` up to the boundary.
pub fn classical_prediction(model: &BvpModel, phi1: &RoWeight, phi2: &RoWeight, n: u32) -> Result<ClassicalPrediction> {
    for phi in [phi1, phi2] {
        let s0 = phi.index_bounds().sigma0;
        if !(s0 > -0.5) {
            return Err(Error::LowerIndexTooSmall(s0));
        }
    }
    let interior = weighted_integral(phi1, n as f64);
    let m = model.max_boundary_order() as u32;
    let up_to_boundary = weighted_integral(&phi2.shift(model.order as f64), (2 * m + n) as f64);
    let verdict = match (interior.verdict, up_to_boundary.verdict) {
        (Verdict::Holds, Verdict::Holds) => Verdict::Holds,
        (Verdict::Fails, _) | (_, Verdict::Fails) => Verdict::Fails,
        _ => Verdict::Indeterminate,
    };
    Ok(ClassicalPrediction { verdict, interior, up_to_boundary })
}

/// `|‖(1−Δ)u‖_φ − ‖u‖_{φρ²}| / ‖u‖_{φρ²}`.
pub fn regularity_shift_exact(u: &SpectralField, phi: &RoWeight) -> Result<f64> {
    let lhs = h_norm(&u.map_symbol(|k| (1 + k[0] * k[0] + k[1] * k[1]) as f64), phi);
    let rhs = h_norm(u, &phi.shift(2.0));
    if rhs == 0.0 {
        return Err(Error::ZeroField((lhs - rhs).abs()));
    }
    Ok((lhs - rhs).abs() / rhs)
}
