//! `H^φ` on the n-torus (n ∈ {1, 2}) through Fourier coefficients.
//!
//! Normalization: a field with coefficients `ŵ(k)` stands for
//! `Σ_k ŵ(k) e^{ik·x}` and `‖w‖²_φ = Σ_k φ²(⟨k⟩)|ŵ(k)|²`, so a unit mode has
//! norm `φ(⟨k⟩)`.

use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fft::GridFft;
use crate::growth::{Trend, classify_growth};
use crate::quad::{gauss_legendre_on, pairwise_sum};
use crate::weights::RoWeight;

/// Modes `k ∈ Z^dim` with `|k_i| ≤ cutoff`. Ordered lexicographically with
/// `k1` outermost; in one dimension `k2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Lattice {
    dim: usize,
    cutoff: usize,
}

pub type Mode = [i64; 2];

impl Lattice {
    pub fn new(dim: usize, cutoff: usize) -> Result<Self> {
        if !(dim == 1 || dim == 2) {
            return Err(Error::InvalidArgument(format!("dimension {dim} not in {{1, 2}}")));
        }
        if cutoff == 0 {
            return Err(Error::InvalidArgument("lattice cutoff must be >= 1".into()));
        }
        Ok(Self { dim, cutoff })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn side(&self) -> usize {
        2 * self.cutoff + 1
    }

    pub fn len(&self) -> usize {
        self.side().pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn mode(&self, idx: usize) -> Mode {
        let k = self.cutoff as i64;
        if self.dim == 1 {
            [idx as i64 - k, 0]
        } else {
            let s = self.side();
            [(idx / s) as i64 - k, (idx % s) as i64 - k]
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = Mode> + '_ {
        (0..self.len()).map(|i| self.mode(i))
    }

    pub fn index_of(&self, m: Mode) -> Option<usize> {
        let k = self.cutoff as i64;
        if m[0].abs() > k || m[1].abs() > k || (self.dim == 1 && m[1] != 0) {
            return None;
        }
        let a = (m[0] + k) as usize;
        Some(if self.dim == 1 { a } else { a * self.side() + (m[1] + k) as usize })
    }

    /// `φ(⟨k⟩)` for every mode, in lattice order.
    pub fn multipliers(&self, phi: &RoWeight) -> Vec<f64> {
        self.modes().map(|m| phi.at_log(smoothed_modulus(&m).ln())).collect()
    }
}

/// `⟨k⟩ = (1 + |k|²)^{1/2}`.
pub fn smoothed_modulus(k: &[i64]) -> f64 {
    let s: i64 = k.iter().map(|v| v * v).sum();
    (1.0 + s as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    lattice: Lattice,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(lattice: Lattice) -> Self {
        Self { lattice, coeffs: vec![Complex64::new(0.0, 0.0); lattice.len()] }
    }

    pub fn from_coeffs(lattice: Lattice, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != lattice.len() {
            return Err(Error::LatticeMismatch(format!(
                "{} coefficients for a lattice with {} modes",
                coeffs.len(),
                lattice.len()
            )));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(Self { lattice, coeffs })
    }

    pub fn from_fn(lattice: Lattice, f: impl Fn(Mode) -> Complex64) -> Self {
        Self { lattice, coeffs: lattice.modes().map(f).collect() }
    }

    pub fn single_mode(lattice: Lattice, k: Mode) -> Result<Self> {
        let idx = lattice.index_of(k).ok_or_else(|| Error::LatticeMismatch(format!("mode {k:?} outside lattice")))?;
        let mut f = Self::zeros(lattice);
        f.coeffs[idx] = Complex64::new(1.0, 0.0);
        Ok(f)
    }

    pub fn lattice(&self) -> Lattice {
        self.lattice
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: Mode) -> Complex64 {
        self.lattice.index_of(k).map_or(Complex64::new(0.0, 0.0), |i| self.coeffs[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm_sqr() == 0.0)
    }

    /// True when `ŵ(−k) = conj ŵ(k)` for every mode.
    pub fn is_real_valued(&self) -> bool {
        self.lattice.modes().enumerate().all(|(i, m)| {
            let j = self.lattice.index_of([-m[0], -m[1]]).expect("lattice is symmetric");
            self.coeffs[i] == self.coeffs[j].conj()
        })
    }

    /// Coefficients multiplied by a real symbol.
    pub fn map_symbol(&self, symbol: impl Fn(Mode) -> f64) -> Self {
        let coeffs = self.coeffs.iter().enumerate().map(|(i, c)| c * symbol(self.lattice.mode(i))).collect();
        Self { lattice: self.lattice, coeffs }
    }

    /// Concatenation of two fields with disjoint supports is modelled as a sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.lattice != other.lattice {
            return Err(Error::LatticeMismatch("fields live on different lattices".into()));
        }
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { lattice: self.lattice, coeffs })
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# lattice dim={} cutoff={}\nk1,k2,re,im\n", self.lattice.dim, self.lattice.cutoff);
        for (i, c) in self.coeffs.iter().enumerate() {
            let m = self.lattice.mode(i);
            let _ = writeln!(s, "{},{},{:e},{:e}", m[0], m[1], c.re, c.im);
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty field file".into()))?;
        let (dim, cutoff) = parse_lattice_header(header)?;
        let lattice = Lattice::new(dim, cutoff)?;
        if lines.next().map(str::trim) != Some("k1,k2,re,im") {
            return Err(Error::Parse("expected column header k1,k2,re,im".into()));
        }
        let mut f = Self::zeros(lattice);
        let mut seen = 0;
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(',').collect();
            let bad = || Error::Parse(format!("line {}: malformed row {line:?}", n + 3));
            if cols.len() != 4 {
                return Err(bad());
            }
            let k1: i64 = cols[0].trim().parse().map_err(|_| bad())?;
            let k2: i64 = cols[1].trim().parse().map_err(|_| bad())?;
            let re: f64 = cols[2].trim().parse().map_err(|_| bad())?;
            let im: f64 = cols[3].trim().parse().map_err(|_| bad())?;
            let idx = lattice.index_of([k1, k2]).ok_or_else(bad)?;
            f.coeffs[idx] = Complex64::new(re, im);
            seen += 1;
        }
        if seen != lattice.len() {
            return Err(Error::Parse(format!("expected {} rows, found {seen}", lattice.len())));
        }
        Ok(f)
    }
}

fn parse_lattice_header(line: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad lattice header {line:?}"));
    let rest = line.trim().strip_prefix("# lattice").ok_or_else(bad)?;
    let (mut dim, mut cutoff) = (None, None);
    for tok in rest.split_whitespace() {
        let (k, v) = tok.split_once('=').ok_or_else(bad)?;
        let v: usize = v.parse().map_err(|_| bad())?;
        match k {
            "dim" => dim = Some(v),
            "cutoff" => cutoff = Some(v),
            _ => return Err(bad()),
        }
    }
    Ok((dim.ok_or_else(bad)?, cutoff.ok_or_else(bad)?))
}

/// `(Σ_k φ²(⟨k⟩)|ŵ(k)|²)^{1/2}`.
pub fn h_norm(u: &SpectralField, phi: &RoWeight) -> f64 {
    let w = u.lattice.multipliers(phi);
    weighted_norm(&u.coeffs, &w)
}

/// `(Σ w_k² |c_k|²)^{1/2}` with pairwise summation.
pub fn weighted_norm(c: &[Complex64], w: &[f64]) -> f64 {
    let terms: Vec<f64> = c.iter().zip(w).map(|(c, w)| (w * w) * c.norm_sqr()).collect();
    pairwise_sum(&terms).sqrt()
}

/// Gaussian coefficients (`re`, `im` independent with variance 1/2) divided by
/// `decay(⟨k⟩)`, drawn in lattice order from a ChaCha20 stream.
pub fn random_field(seed: u64, decay: &RoWeight, lattice: Lattice) -> SpectralField {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let coeffs = lattice
        .modes()
        .map(|m| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * (scale / decay.at_log(smoothed_modulus(&m).ln()))
        })
        .collect();
    SpectralField { lattice, coeffs }
}

/// Three-way outcome of a numerical criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Indeterminate,
}

/// Log-scales `X_j = x0 · 2^j`, `j = 0..=extensions`, scanned with
/// `points_per_unit` nodes per unit of `ln t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleGrid {
    pub x0: f64,
    pub extensions: usize,
    pub points_per_unit: usize,
}

impl Default for ScaleGrid {
    fn default() -> Self {
        Self { x0: 1e6f64.ln(), extensions: 3, points_per_unit: 20 }
    }
}

impl ScaleGrid {
    pub fn scales(&self) -> Vec<f64> {
        (0..=self.extensions).map(|j| self.x0 * (1u64 << j) as f64).collect()
    }
}

/// Maximum of `f` on `[a, b]` by a uniform scan plus local refinement.
pub(crate) fn scan_max(f: impl Fn(f64) -> f64, a: f64, b: f64, points: usize) -> (f64, f64) {
    let n = points.max(2);
    let h = (b - a) / (n - 1) as f64;
    let mut best = (a, f(a));
    for i in 1..n {
        let x = a + h * i as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let mut r = h;
    for _ in 0..8 {
        let c = best.0;
        for i in 0..=20 {
            let x = (c - r + r * i as f64 / 10.0).clamp(a, b);
            let v = f(x);
            if v > best.1 {
                best = (x, v);
            }
        }
        r /= 5.0;
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EmbeddingReport {
    pub embeds: bool,
    /// Observed `sup φ/φ1` over the widest scanned range.
    pub constant: f64,
    /// Outcome of the index shortcut, when it applies.
    pub shortcut: Option<bool>,
    pub trend: Trend,
    /// `(X_j, sup_{x ≤ X_j} φ/φ1)`.
    pub history: Vec<(f64, f64)>,
}

fn index_shortcut(phi: &RoWeight, phi1: &RoWeight) -> Option<bool> {
    let (a, b) = (phi.index_bounds(), phi1.index_bounds());
    if a.sigma1 < b.sigma0 {
        Some(true)
    } else if a.sigma0 > b.sigma1 {
        Some(false)
    } else {
        None
    }
}

/// Bounded embedding `H^{φ1} ↪ H^φ`, i.e. boundedness of `φ/φ1`.
pub fn embedding_bounded(phi: &RoWeight, phi1: &RoWeight, grid: &ScaleGrid) -> EmbeddingReport {
    let d = |x: f64| phi.ln_phi(x) - phi1.ln_phi(x);
    let history: Vec<(f64, f64)> = grid
        .scales()
        .into_iter()
        .map(|x| (x, scan_max(d, 0.0, x, grid.points_per_unit * x.ceil() as usize).1))
        .collect();
    let logs: Vec<f64> = history.iter().map(|h| h.1).collect();
    let trend = classify_growth(&logs);
    let shortcut = index_shortcut(phi, phi1);
    let embeds = shortcut.unwrap_or(trend == Trend::Bounded);
    let constant = history.last().map_or(f64::NAN, |h| h.1.exp());
    EmbeddingReport {
        embeds,
        constant,
        shortcut,
        trend,
        history: history.into_iter().map(|(x, v)| (x, v.exp())).collect(),
    }
}

/// Compact embedding: `φ(t)/φ1(t) → 0`. The tail supremum over
/// `[X_j/2, X_j]` must keep decreasing in log by at least the growth step.
pub fn embedding_compact(phi: &RoWeight, phi1: &RoWeight, grid: &ScaleGrid) -> bool {
    if index_shortcut(phi, phi1) == Some(true) {
        return true;
    }
    let d = |x: f64| phi.ln_phi(x) - phi1.ln_phi(x);
    let neg_tail: Vec<f64> = grid
        .scales()
        .into_iter()
        .map(|x| -scan_max(d, 0.5 * x, x, grid.points_per_unit * x.ceil() as usize).1)
        .collect();
    classify_growth(&neg_tail) == Trend::Unbounded
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CkCriterion {
    pub verdict: Verdict,
    /// Estimate of the integral; `+∞` when declared divergent.
    pub integral_estimate: f64,
    /// `(T, ∫_1^T)` partial sums at the panel ends.
    pub partial_sums: Vec<(f64, f64)>,
}

impl CkCriterion {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }
}

/// Number of doubling panels `[2^{j-1}, 2^j]` in `ln t` scanned for the
/// borderline test.
const PANELS: usize = 13;
/// Last-three panel ratios at or below this value indicate convergence.
const CONVERGENT_RATIO: f64 = 0.75;
/// At or above this value, divergence.
const DIVERGENT_RATIO: f64 = 0.95;

/// `∫_1^∞ t^{p−1} φ^{−2}(t) dt`: finite, infinite, or undecided.
///
/// The integrand in `x = ln t` is `exp(p·x − 2 ln φ(e^x))`. Index bounds
/// settle every case where `p − 2σ` has a fixed sign; the rest is decided by
/// the ratios of integrals over doubling panels in `x`.
pub fn weighted_integral(phi: &RoWeight, p: f64) -> CkCriterion {
    let ix = phi.index_bounds();
    let d_hi = p - 2.0 * ix.sigma0;
    let d_lo = p - 2.0 * ix.sigma1;
    let integrand = |x: f64| (p * x - 2.0 * phi.ln_phi(x)).exp();
    let mut panels = Vec::with_capacity(PANELS + 1);
    let mut edges = vec![0.0, 1.0];
    panels.push(panel_integral(&integrand, 0.0, 1.0));
    for j in 0..PANELS {
        let (a, b) = ((1u64 << j) as f64, (1u64 << (j + 1)) as f64);
        panels.push(panel_integral(&integrand, a, b));
        edges.push(b);
    }
    let mut partial_sums = Vec::with_capacity(panels.len());
    let mut acc = 0.0;
    for (i, v) in panels.iter().enumerate() {
        acc += v;
        partial_sums.push((edges[i + 1].exp(), acc));
    }
    let ratios: Vec<f64> = panels.windows(2).skip(1).map(|w| if w[1] == 0.0 { 0.0 } else { w[1] / w[0] }).collect();
    let tail = &ratios[ratios.len() - 3..];
    let verdict = if d_hi < 0.0 {
        Verdict::Holds
    } else if d_lo > 0.0 {
        Verdict::Fails
    } else if tail.iter().all(|r| *r <= CONVERGENT_RATIO) {
        Verdict::Holds
    } else if tail.iter().all(|r| *r >= DIVERGENT_RATIO) {
        Verdict::Fails
    } else {
        Verdict::Indeterminate
    };
    let integral_estimate = match verdict {
        Verdict::Fails => f64::INFINITY,
        _ => {
            let r = ratios.last().copied().unwrap_or(0.0);
            let last = *panels.last().expect("panels");
            let extra = if r < 1.0 { last * r / (1.0 - r) } else { f64::INFINITY };
            if verdict == Verdict::Indeterminate && !extra.is_finite() { f64::INFINITY } else { acc + extra }
        }
    };
    CkCriterion { verdict, integral_estimate, partial_sums }
}

fn panel_integral(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let pieces = ((b - a).ceil() as usize).max(1);
    let h = (b - a) / pieces as f64;
    let (x, w) = gauss_legendre_on(16, 0.0, h);
    let mut terms = Vec::with_capacity(pieces * 16);
    for i in 0..pieces {
        let lo = a + h * i as f64;
        terms.extend(x.iter().zip(&w).map(|(x, w)| w * f(lo + x)));
    }
    pairwise_sum(&terms)
}

/// Continuous embedding of `H^φ` into `C^k` in dimension `n`:
/// `∫_1^∞ t^{2k+n−1} φ^{−2}(t) dt < ∞`.
pub fn ck_embedding_criterion(phi: &RoWeight, k: u32, n: u32) -> CkCriterion {
    weighted_integral(phi, (2 * k + n) as f64)
}

/// Largest admissible derivative order in [`derivative_partial_sup`].
pub const MAX_DERIVATIVE_ORDER: u32 = 4;

/// Sup-norms over a dense grid of `Σ_{|k|∞ ≤ K} (ik)^μ ŵ(k) e^{ik·x}` for each `K`.
/// The grid has `next_pow2(4(2K+1))` points per dimension.
pub fn derivative_partial_sup(u: &SpectralField, mu: [u32; 2], k_list: &[usize]) -> Result<Vec<f64>> {
    let lat = u.lattice;
    if mu[0] + mu[1] > MAX_DERIVATIVE_ORDER {
        return Err(Error::InvalidArgument(format!(
            "derivative order {} exceeds {MAX_DERIVATIVE_ORDER}",
            mu[0] + mu[1]
        )));
    }
    if lat.dim == 1 && mu[1] != 0 {
        return Err(Error::InvalidArgument("second derivative index on a 1D field".into()));
    }
    let mut out = Vec::with_capacity(k_list.len());
    for &kc in k_list {
        if kc > lat.cutoff || kc == 0 {
            return Err(Error::InvalidArgument(format!("partial-sum cutoff {kc} outside 1..={}", lat.cutoff)));
        }
        let m = (4 * (2 * kc + 1)).next_power_of_two();
        let fft = GridFft::new(m, lat.dim);
        let mut data = vec![Complex64::new(0.0, 0.0); fft.len()];
        for (i, c) in u.coeffs.iter().enumerate() {
            let k = lat.mode(i);
            if k[0].unsigned_abs() as usize > kc || k[1].unsigned_abs() as usize > kc {
                continue;
            }
            let sym = ik_pow(k[0], mu[0]) * ik_pow(k[1], mu[1]);
            data[bin(k, m, lat.dim)] += sym * c;
        }
        fft.inverse(&mut data);
        out.push(data.iter().map(|v| v.norm()).fold(0.0, f64::max));
    }
    Ok(out)
}

fn ik_pow(k: i64, p: u32) -> Complex64 {
    Complex64::new(0.0, k as f64).powu(p)
}

/// Grid bin of mode `k` on an `m`-point periodic grid (aliasing by folding).
pub(crate) fn bin(k: Mode, m: usize, dim: usize) -> usize {
    let f = |v: i64| v.rem_euclid(m as i64) as usize;
    if dim == 1 { f(k[0]) } else { f(k[0]) * m + f(k[1]) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modulus_examples() {
        assert_eq!(smoothed_modulus(&[0, 0]), 1.0);
        assert_eq!(smoothed_modulus(&[3, 4]), 26f64.sqrt());
        assert_eq!(smoothed_modulus(&[1, 0]), 2f64.sqrt());
    }

    #[test]
    fn lattice_indexing_roundtrip() {
        let lat = Lattice::new(2, 3).unwrap();
        assert_eq!(lat.len(), 49);
        for i in 0..lat.len() {
            assert_eq!(lat.index_of(lat.mode(i)), Some(i));
        }
        assert!(Lattice::new(2, 0).is_err());
        assert!(Lattice::new(3, 2).is_err());
    }

    #[test]
    fn single_mode_norm() {
        let lat = Lattice::new(2, 5).unwrap();
        let u = SpectralField::single_mode(lat, [3, 4]).unwrap();
        assert!((h_norm(&u, &RoWeight::power(1.0)) - 26f64.sqrt()).abs() < 1e-14);
        assert_eq!(h_norm(&SpectralField::zeros(lat), &RoWeight::power(1.0)), 0.0);
    }

    #[test]
    fn csv_roundtrip_is_exact() {
        let lat = Lattice::new(2, 4).unwrap();
        let u = random_field(11, &RoWeight::power(1.0), lat);
        let back = SpectralField::from_csv(&u.to_csv()).unwrap();
        assert_eq!(u, back);
        assert!(SpectralField::from_csv("# lattice dim=2 cutoff=1\nk1,k2,re,im\n0,0,1,0\n").is_err());
    }

    #[test]
    fn random_field_is_deterministic() {
        let lat = Lattice::new(1, 16).unwrap();
        let a = random_field(3, &RoWeight::power(1.0), lat);
        let b = random_field(3, &RoWeight::power(1.0), lat);
        assert_eq!(a, b);
        assert_ne!(a, random_field(4, &RoWeight::power(1.0), lat));
    }

    #[test]
    fn embedding_examples() {
        let g = ScaleGrid::default();
        let r = embedding_bounded(&RoWeight::power(1.0), &RoWeight::power(2.0), &g);
        assert!(r.embeds);
        assert!((r.constant - 1.0).abs() < 1e-12);
        assert!(!embedding_bounded(&RoWeight::power(2.0), &RoWeight::power(1.0), &g).embeds);
        let r = embedding_bounded(&RoWeight::power_log(1.0, 1.0), &RoWeight::power(1.0), &g);
        assert!(!r.embeds);
        assert_eq!(r.trend, Trend::Unbounded);
        assert!(!embedding_compact(&RoWeight::power_log(1.0, 1.0), &RoWeight::power(1.0), &g));
        assert!(embedding_compact(&RoWeight::power(1.0), &RoWeight::power(2.0), &g));
        assert!(embedding_compact(&RoWeight::power(1.0), &RoWeight::power_log(1.0, 1.0), &g));
        assert!(!embedding_compact(&RoWeight::power(1.0), &RoWeight::power(1.0), &g));
    }

    #[test]
    fn ck_borderline_cases() {
        assert!(!ck_embedding_criterion(&RoWeight::power(1.0), 0, 2).holds());
        assert_eq!(ck_embedding_criterion(&RoWeight::power(1.0), 0, 2).verdict, Verdict::Fails);
        let c = ck_embedding_criterion(&RoWeight::power_log(1.0, 1.0), 0, 2);
        assert!(c.holds());
        // ∫_0^∞ dx / ln²(e + e^x) is finite; compare with a brute quadrature.
        let f = |x: f64| {
            let l = if x > 1.0 { x + (1.0 - x).exp().ln_1p() } else { 1.0 + (x - 1.0).exp().ln_1p() };
            1.0 / (l * l)
        };
        let brute = panel_integral(&f, 0.0, 1e6) + 1.0 / 1e6;
        assert!((c.integral_estimate - brute).abs() / brute < 0.01, "{} vs {brute}", c.integral_estimate);
        let c = ck_embedding_criterion(&RoWeight::power(1.5), 0, 2);
        assert!(c.holds());
        assert!((c.integral_estimate - 1.0).abs() < 1e-9);
    }

    #[test]
    fn derivative_sup_of_single_mode() {
        let lat = Lattice::new(2, 8).unwrap();
        let u = SpectralField::single_mode(lat, [3, -2]).unwrap();
        let s = derivative_partial_sup(&u, [1, 0], &[3, 5, 8]).unwrap();
        for v in s {
            assert!((v - 3.0).abs() < 1e-12);
        }
        assert!(derivative_partial_sup(&u, [3, 2], &[4]).is_err());
        assert!(derivative_partial_sup(&u, [0, 0], &[9]).is_err());
    }
}
