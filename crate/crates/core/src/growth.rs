//! Growth classification of a quantity observed at successively squared scales.
//!
//! A sequence `v_j = ln Q(X_j)` is recorded at log-scales `X_j = X_0 · 2^j`
//! (each step squares the scale `T = e^X`). The quantity is called unbounded
//! when each of the last three increments is at least [`GROWTH_STEP`], and
//! bounded when the last increment has settled below [`SETTLE_STEP`].

use serde::Serialize;

pub const GROWTH_STEP: f64 = 0.05;
pub const SETTLE_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Trend {
    Bounded,
    Unbounded,
    Indeterminate,
}

pub fn classify_growth(log_values: &[f64]) -> Trend {
    let inc: Vec<f64> = log_values.windows(2).map(|w| w[1] - w[0]).collect();
    if inc.len() >= 3 && inc[inc.len() - 3..].iter().all(|d| *d >= GROWTH_STEP) {
        return Trend::Unbounded;
    }
    match inc.last() {
        Some(d) if d.abs() <= SETTLE_STEP => Trend::Bounded,
        None => Trend::Indeterminate,
        _ => Trend::Indeterminate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies() {
        assert_eq!(classify_growth(&[0.0, 1.0, 2.0, 4.0]), Trend::Unbounded);
        assert_eq!(classify_growth(&[1.0, 1.0, 1.0, 1.0]), Trend::Bounded);
        assert_eq!(classify_growth(&[0.0, 1.0, 1.01, 1.02]), Trend::Indeterminate);
        assert_eq!(classify_growth(&[0.5]), Trend::Indeterminate);
    }
}
