//! Fields on the unit disk `Ω` and its boundary circle `Γ`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{gauss_legendre_on, pairwise_sum};
use crate::spectral::{smoothed_modulus, weighted_norm};
use crate::weights::RoWeight;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `g(θ) = Σ_{|k| ≤ K} ĝ(k) e^{ikθ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryField {
    cutoff: usize,
    coeffs: Vec<Complex64>,
}

impl BoundaryField {
    pub fn zeros(cutoff: usize) -> Self {
        Self { cutoff, coeffs: vec![ZERO; 2 * cutoff + 1] }
    }

    pub fn from_fn(cutoff: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let k = cutoff as i64;
        Self { cutoff, coeffs: (-k..=k).map(f).collect() }
    }

    pub fn single_mode(k: i64) -> Self {
        let mut g = Self::zeros(k.unsigned_abs() as usize);
        g.set(k, Complex64::new(1.0, 0.0));
        g
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn coeff(&self, k: i64) -> Complex64 {
        if k.unsigned_abs() as usize > self.cutoff { ZERO } else { self.coeffs[(k + self.cutoff as i64) as usize] }
    }

    pub fn set(&mut self, k: i64, v: Complex64) {
        let i = (k + self.cutoff as i64) as usize;
        self.coeffs[i] = v;
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let k = self.cutoff as i64;
        (-k..=k).zip(self.coeffs.iter().copied())
    }

    pub fn resized(&self, cutoff: usize) -> Self {
        Self::from_fn(cutoff, |k| self.coeff(k))
    }

    pub fn is_real_valued(&self) -> bool {
        self.modes().all(|(k, c)| self.coeff(-k) == c.conj())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let c = self.cutoff.max(other.cutoff);
        Self::from_fn(c, |k| self.coeff(k) - other.coeff(k))
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.modes().map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * theta)).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,re,im\n");
        for (k, c) in self.modes() {
            let _ = writeln!(s, "{k},{:e},{:e}", c.re, c.im);
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        if lines.next().map(str::trim) != Some("k,re,im") {
            return Err(Error::Parse("expected column header k,re,im".into()));
        }
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            let bad = || Error::Parse(format!("row {}: malformed {line:?}", n + 1));
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(bad());
            }
            let k: i64 = cols[0].parse().map_err(|_| bad())?;
            let re: f64 = cols[1].parse().map_err(|_| bad())?;
            let im: f64 = cols[2].parse().map_err(|_| bad())?;
            rows.push((k, Complex64::new(re, im)));
        }
        let cutoff = rows.iter().map(|(k, _)| k.unsigned_abs() as usize).max().unwrap_or(0);
        let mut g = Self::zeros(cutoff);
        for (k, v) in rows {
            g.set(k, v);
        }
        Ok(g)
    }
}

/// `(g, h)_Γ = ∫_Γ g h̄ dθ = 2π Σ ĝ(k) conj ĥ(k)`.
pub fn inner_gamma(g: &BoundaryField, h: &BoundaryField) -> Complex64 {
    let c = g.cutoff.min(h.cutoff) as i64;
    (-c..=c).map(|k| g.coeff(k) * h.coeff(k).conj()).sum::<Complex64>() * (2.0 * PI)
}

/// `(Σ_k φ²(⟨k⟩)|ĝ(k)|²)^{1/2}`.
pub fn gamma_norm(g: &BoundaryField, phi: &RoWeight) -> f64 {
    let w: Vec<f64> = g.modes().map(|(k, _)| phi.at_log(smoothed_modulus(&[k]).ln())).collect();
    weighted_norm(&g.coeffs, &w)
}

/// `u(r, θ) = Σ_{|k| ≤ K} Σ_{j ≤ J} a_{k,j} r^{|k|+2j} e^{ikθ}`, smooth at the
/// origin by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskField {
    cutoff: usize,
    degree: usize,
    coeffs: Vec<Complex64>,
}

impl DiskField {
    pub fn zeros(cutoff: usize, degree: usize) -> Self {
        Self { cutoff, degree, coeffs: vec![ZERO; (2 * cutoff + 1) * (degree + 1)] }
    }

    pub fn constant(c: Complex64) -> Self {
        let mut u = Self::zeros(0, 0);
        u.set(0, 0, c);
        u
    }

    /// `r^{|k|} e^{ikθ}`.
    pub fn harmonic_mode(k: i64) -> Self {
        let mut u = Self::zeros(k.unsigned_abs() as usize, 0);
        u.set(k, 0, Complex64::new(1.0, 0.0));
        u
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn idx(&self, k: i64, j: usize) -> usize {
        (k + self.cutoff as i64) as usize * (self.degree + 1) + j
    }

    pub fn get(&self, k: i64, j: usize) -> Complex64 {
        if k.unsigned_abs() as usize > self.cutoff || j > self.degree { ZERO } else { self.coeffs[self.idx(k, j)] }
    }

    pub fn set(&mut self, k: i64, j: usize, v: Complex64) {
        let i = self.idx(k, j);
        self.coeffs[i] = v;
    }

    pub fn add_to(&mut self, k: i64, j: usize, v: Complex64) {
        let i = self.idx(k, j);
        self.coeffs[i] += v;
    }

    pub fn resized(&self, cutoff: usize, degree: usize) -> Self {
        let mut u = Self::zeros(cutoff, degree);
        let c = cutoff.min(self.cutoff) as i64;
        for k in -c..=c {
            for j in 0..=degree.min(self.degree) {
                u.set(k, j, self.get(k, j));
            }
        }
        u
    }

    pub fn modes(&self) -> std::ops::RangeInclusive<i64> {
        -(self.cutoff as i64)..=self.cutoff as i64
    }

    fn zip_with(&self, other: &Self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let (c, d) = (self.cutoff.max(other.cutoff), self.degree.max(other.degree));
        let mut u = Self::zeros(c, d);
        for k in u.modes() {
            for j in 0..=d {
                u.set(k, j, f(self.get(k, j), other.get(k, j)));
            }
        }
        u
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * s).collect(), ..self.clone() }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Radial profile `u_k(r)`.
    pub fn profile(&self, k: i64, r: f64) -> Complex64 {
        let a = k.unsigned_abs() as i32;
        (0..=self.degree).map(|j| self.get(k, j) * r.powi(a + 2 * j as i32)).sum()
    }

    /// `u_k'(r)`.
    pub fn profile_derivative(&self, k: i64, r: f64) -> Complex64 {
        let a = k.unsigned_abs() as i32;
        (0..=self.degree)
            .map(|j| {
                let p = a + 2 * j as i32;
                if p == 0 { ZERO } else { self.get(k, j) * (p as f64 * r.powi(p - 1)) }
            })
            .sum()
    }

    pub fn eval(&self, r: f64, theta: f64) -> Complex64 {
        self.modes().map(|k| self.profile(k, r) * Complex64::from_polar(1.0, k as f64 * theta)).sum()
    }

    /// Exact `Δu`: `Δ(r^{|k|+2j} e^{ikθ}) = 4j(|k|+j) r^{|k|+2j−2} e^{ikθ}`.
    pub fn laplacian(&self) -> Self {
        let mut u = Self::zeros(self.cutoff, self.degree);
        for k in self.modes() {
            let a = k.unsigned_abs() as f64;
            for j in 1..=self.degree {
                let jf = j as f64;
                u.set(k, j - 1, self.get(k, j) * (4.0 * jf * (a + jf)));
            }
        }
        u
    }

    /// `u|_Γ`.
    pub fn trace(&self) -> BoundaryField {
        BoundaryField::from_fn(self.cutoff, |k| (0..=self.degree).map(|j| self.get(k, j)).sum())
    }

    /// `∂_r u` on `Γ` (the outward normal derivative).
    pub fn normal_derivative(&self) -> BoundaryField {
        BoundaryField::from_fn(self.cutoff, |k| {
            let a = k.unsigned_abs() as f64;
            (0..=self.degree).map(|j| self.get(k, j) * (a + 2.0 * j as f64)).sum()
        })
    }

    /// Rows `(k, r_i, re, im)` of the profiles on the given radial nodes.
    pub fn to_csv(&self, nodes: &[f64]) -> String {
        let mut s = String::from("k,r,re,im\n");
        for k in self.modes() {
            for r in nodes {
                let v = self.profile(k, *r);
                let _ = writeln!(s, "{k},{r:e},{:e},{:e}", v.re, v.im);
            }
        }
        s
    }
}

/// Gauss–Legendre rule on `[0, 1]` for integrals `∫_0^1 F(r) r dr`.
#[derive(Debug, Clone)]
pub struct RadialQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl RadialQuadrature {
    pub fn new(n: usize) -> Self {
        let (nodes, w) = gauss_legendre_on(n, 0.0, 1.0);
        let weights = nodes.iter().zip(&w).map(|(r, w)| r * w).collect();
        Self { nodes, weights }
    }

    /// Enough nodes to integrate products of two fields exactly.
    pub fn for_fields(u: &DiskField, v: &DiskField) -> Self {
        let deg = u.cutoff.max(v.cutoff) + u.degree + v.degree + 2;
        Self::new(deg.max(4 * u.cutoff.max(v.cutoff)).max(8))
    }
}

/// `(u, v)_Ω = ∫_Ω u v̄ = 2π Σ_k ∫_0^1 u_k(r) conj v_k(r) r dr`, by quadrature.
pub fn inner_omega(u: &DiskField, v: &DiskField) -> Complex64 {
    let q = RadialQuadrature::for_fields(u, v);
    let c = u.cutoff.min(v.cutoff) as i64;
    let mut re = Vec::new();
    let mut im = Vec::new();
    for k in -c..=c {
        for (r, w) in q.nodes.iter().zip(&q.weights) {
            let t = u.profile(k, *r) * v.profile(k, *r).conj() * *w;
            re.push(t.re);
            im.push(t.im);
        }
    }
    Complex64::new(pairwise_sum(&re), pairwise_sum(&im)) * (2.0 * PI)
}

/// `‖u‖_{L²(Ω)}`.
pub fn l2_norm_omega(u: &DiskField) -> f64 {
    inner_omega(u, u).re.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_norm_examples() {
        let g = BoundaryField::single_mode(3);
        assert!((gamma_norm(&g, &RoWeight::power(1.5)) - 10f64.powf(0.75)).abs() < 1e-13);
        assert_eq!(gamma_norm(&BoundaryField::zeros(4), &RoWeight::power(1.0)), 0.0);
    }

    #[test]
    fn laplacian_of_r_squared() {
        let mut u = DiskField::zeros(0, 1);
        u.set(0, 1, Complex64::new(1.0, 0.0));
        let l = u.laplacian();
        assert_eq!(l.get(0, 0), Complex64::new(4.0, 0.0));
    }

    #[test]
    fn area_of_disk() {
        let one = DiskField::constant(Complex64::new(1.0, 0.0));
        assert!((inner_omega(&one, &one).re - PI).abs() < 1e-14);
    }

    #[test]
    fn boundary_csv_roundtrip() {
        let g = BoundaryField::from_fn(3, |k| Complex64::new(k as f64 * 0.25, 1.0 / (1.0 + k as f64 * k as f64)));
        assert_eq!(BoundaryField::from_csv(&g.to_csv()).unwrap(), g);
    }
}
