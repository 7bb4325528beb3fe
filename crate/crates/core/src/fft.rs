//! Unnormalized multi-dimensional FFTs on `m^dim` grids (row-major, dim ≤ 2).

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

pub struct GridFft {
    m: usize,
    dim: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl GridFft {
    pub fn new(m: usize, dim: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self { m, dim, forward: planner.plan_fft_forward(m), inverse: planner.plan_fft_inverse(m) }
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `X[b] = Σ_j x[j] e^{-2πi j·b/m}`.
    pub fn forward(&self, data: &mut [Complex64]) {
        self.run(data, &self.forward);
    }

    /// `x[j] = Σ_b X[b] e^{+2πi j·b/m}` (no `1/m^dim` factor).
    pub fn inverse(&self, data: &mut [Complex64]) {
        self.run(data, &self.inverse);
    }

    fn run(&self, data: &mut [Complex64], plan: &Arc<dyn Fft<f64>>) {
        let m = self.m;
        assert_eq!(data.len(), self.len());
        plan.process(data);
        if self.dim == 2 {
            let mut col = vec![Complex64::new(0.0, 0.0); m];
            for c in 0..m {
                for r in 0..m {
                    col[r] = data[r * m + c];
                }
                plan.process(&mut col);
                for r in 0..m {
                    data[r * m + c] = col[r];
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_direct_dft_2d() {
        let m = 5;
        let f = GridFft::new(m, 2);
        let x: Vec<Complex64> = (0..m * m).map(|i| Complex64::new(i as f64, (i * i % 7) as f64)).collect();
        let mut y = x.clone();
        f.forward(&mut y);
        for b1 in 0..m {
            for b2 in 0..m {
                let mut s = Complex64::new(0.0, 0.0);
                for j1 in 0..m {
                    for j2 in 0..m {
                        let ang = -2.0 * std::f64::consts::PI * ((j1 * b1 + j2 * b2) as f64) / m as f64;
                        s += x[j1 * m + j2] * Complex64::from_polar(1.0, ang);
                    }
                }
                assert!((s - y[b1 * m + b2]).norm() < 1e-10);
            }
        }
        f.inverse(&mut y);
        for (a, b) in x.iter().zip(&y) {
            assert!((a * (m * m) as f64 - b).norm() < 1e-9);
        }
    }
}
