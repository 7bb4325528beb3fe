//! Quotient norms `inf { ‖w‖_φ : w = u on Ω }` for a subdomain `Ω` of the torus.
//!
//! `Ω` is a set of collocation points of an `m`-point periodic grid
//! (`x_j = 2πj/m`). A lattice mode `k` acts on the grid through the bin
//! `k mod m`, so lattices wider than the grid alias by folding.

use std::fmt::Write as _;

use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fft::GridFft;
use crate::spectral::{Lattice, SpectralField, bin, h_norm, weighted_norm};
use crate::weights::RoWeight;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainMask {
    dim: usize,
    points: usize,
    inside: Vec<bool>,
}

impl DomainMask {
    pub fn new(dim: usize, points: usize, inside: Vec<bool>) -> Result<Self> {
        if !(dim == 1 || dim == 2) || points < 2 {
            return Err(Error::InvalidMask(format!("dim {dim}, {points} points per side")));
        }
        if inside.len() != points.pow(dim as u32) {
            return Err(Error::InvalidMask(format!(
                "{} flags for a grid of {} points",
                inside.len(),
                points.pow(dim as u32)
            )));
        }
        if !inside.iter().any(|b| *b) || inside.iter().all(|b| *b) {
            return Err(Error::InvalidMask("need nonempty inside and outside".into()));
        }
        Ok(Self { dim, points, inside })
    }

    /// Grid points with coordinate in `[lo, hi]`, coordinates taken in `(−π, π]`.
    pub fn interval(points: usize, lo: f64, hi: f64) -> Result<Self> {
        let inside = (0..points).map(|j| (lo..=hi).contains(&coordinate(j, points))).collect();
        Self::new(1, points, inside)
    }

    /// Grid points within `radius` of the origin.
    pub fn disk(points: usize, radius: f64) -> Result<Self> {
        let inside = (0..points * points)
            .map(|idx| {
                let (x, y) = (coordinate(idx / points, points), coordinate(idx % points, points));
                x * x + y * y < radius * radius
            })
            .collect();
        Self::new(2, points, inside)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn is_inside(&self, idx: usize) -> bool {
        self.inside[idx]
    }

    pub fn inside_indices(&self) -> Vec<usize> {
        (0..self.inside.len()).filter(|i| self.inside[*i]).collect()
    }

    /// Integer grid indices of a flat point index.
    pub fn grid_index(&self, idx: usize) -> [usize; 2] {
        if self.dim == 1 { [idx, 0] } else { [idx / self.points, idx % self.points] }
    }

    /// Coordinates in `(−π, π]^dim` of a flat point index.
    pub fn point(&self, idx: usize) -> [f64; 2] {
        let g = self.grid_index(idx);
        let y = if self.dim == 1 { 0.0 } else { coordinate(g[1], self.points) };
        [coordinate(g[0], self.points), y]
    }

    pub fn to_csv(&self) -> String {
        let mut s = format!("# mask dim={} points={}\ni,j,inside\n", self.dim, self.points);
        for (idx, b) in self.inside.iter().enumerate() {
            let g = self.grid_index(idx);
            let _ = writeln!(s, "{},{},{}", g[0], g[1], u8::from(*b));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Parse("empty mask file".into()))?;
        let bad_header = || Error::Parse(format!("bad mask header {header:?}"));
        let rest = header.trim().strip_prefix("# mask").ok_or_else(bad_header)?;
        let (mut dim, mut points) = (None, None);
        for tok in rest.split_whitespace() {
            let (k, v) = tok.split_once('=').ok_or_else(bad_header)?;
            let v: usize = v.parse().map_err(|_| bad_header())?;
            match k {
                "dim" => dim = Some(v),
                "points" => points = Some(v),
                _ => return Err(bad_header()),
            }
        }
        let (dim, points) = (dim.ok_or_else(bad_header)?, points.ok_or_else(bad_header)?);
        if lines.next().map(str::trim) != Some("i,j,inside") {
            return Err(Error::Parse("expected column header i,j,inside".into()));
        }
        let total = points.checked_pow(dim as u32).ok_or_else(bad_header)?;
        let mut inside = vec![false; total];
        let mut seen = 0;
        for (n, line) in lines.enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let bad = || Error::Parse(format!("line {}: malformed row {line:?}", n + 3));
            let cols: Vec<usize> = line
                .split(',')
                .map(|c| c.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad())?;
            if cols.len() != 3 || cols[0] >= points || cols[1] >= points.max(1) || cols[2] > 1 {
                return Err(bad());
            }
            let idx = if dim == 1 { cols[0] } else { cols[0] * points + cols[1] };
            if idx >= total {
                return Err(bad());
            }
            inside[idx] = cols[2] == 1;
            seen += 1;
        }
        if seen != total {
            return Err(Error::Parse(format!("expected {total} rows, found {seen}")));
        }
        Self::new(dim, points, inside)
    }
}

fn coordinate(j: usize, m: usize) -> f64 {
    let x = 2.0 * std::f64::consts::PI * j as f64 / m as f64;
    if x > std::f64::consts::PI { x - 2.0 * std::f64::consts::PI } else { x }
}

fn check_compatible(mask: &DomainMask, lattice: Lattice) -> Result<()> {
    if mask.dim != lattice.dim() {
        return Err(Error::LatticeMismatch(format!(
            "mask dimension {} vs lattice dimension {}",
            mask.dim,
            lattice.dim()
        )));
    }
    if lattice.side() < mask.points {
        return Err(Error::LatticeMismatch(format!(
            "lattice side {} is coarser than the {}-point grid",
            lattice.side(),
            mask.points
        )));
    }
    Ok(())
}

/// Collocation map `c ↦ (Σ_k c_k e^{ik·x_j})_{j ∈ Ω}` and its adjoint.
struct Collocation {
    fft: GridFft,
    inside: Vec<usize>,
    bins: Vec<usize>,
}

impl Collocation {
    fn new(mask: &DomainMask, lattice: Lattice) -> Result<Self> {
        check_compatible(mask, lattice)?;
        let m = mask.points;
        Ok(Self {
            fft: GridFft::new(m, mask.dim),
            inside: mask.inside_indices(),
            bins: lattice.modes().map(|k| bin(k, m, lattice.dim())).collect(),
        })
    }

    fn apply(&self, c: &[Complex64]) -> Vec<Complex64> {
        let mut grid = vec![ZERO; self.fft.len()];
        for (v, b) in c.iter().zip(&self.bins) {
            grid[*b] += v;
        }
        self.fft.inverse(&mut grid);
        self.inside.iter().map(|i| grid[*i]).collect()
    }

    fn adjoint(&self, y: &[Complex64]) -> Vec<Complex64> {
        let mut grid = vec![ZERO; self.fft.len()];
        for (v, i) in y.iter().zip(&self.inside) {
            grid[*i] = *v;
        }
        self.fft.forward(&mut grid);
        self.bins.iter().map(|b| grid[*b]).collect()
    }
}

/// Values of `w` at the inside points, in [`DomainMask::inside_indices`] order.
pub fn restriction(w: &SpectralField, mask: &DomainMask) -> Result<Vec<Complex64>> {
    Ok(Collocation::new(mask, w.lattice())?.apply(w.coeffs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverOptions {
    /// Bound on `‖A c − u‖ / ‖u‖`.
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tolerance: 1e-10, max_iterations: 10_000 }
    }
}

#[derive(Debug, Clone)]
pub struct QuotientProblem {
    pub mask: DomainMask,
    pub lattice: Lattice,
    pub weight: RoWeight,
    pub target: Vec<Complex64>,
    pub options: SolverOptions,
}

#[derive(Debug, Clone)]
pub struct QuotientSolution {
    pub value: f64,
    pub extension: SpectralField,
    pub converged: bool,
    pub iterations: usize,
    /// Final relative constraint residual.
    pub residual: f64,
}

fn check_problem(p: &QuotientProblem) -> Result<()> {
    if !(p.options.tolerance > 0.0) {
        return Err(Error::InvalidArgument("solver tolerance must be positive".into()));
    }
    let n_in = p.mask.inside.iter().filter(|b| **b).count();
    if p.target.len() != n_in {
        return Err(Error::InvalidArgument(format!("{} target values for {n_in} inside points", p.target.len())));
    }
    Ok(())
}

/// Minimizes `Σ φ²(⟨k⟩)|c_k|²` subject to collocation at the inside points.
///
/// Conjugate gradients on the normal equations `A W^{−1} A* y = u`
/// (`W = φ²(⟨k⟩)`), whose operator carries the diagonal `φ^{−2}` scaling and is
/// applied through FFTs. The minimizer is `c = W^{−1} A* y`.
pub fn quotient_norm(p: &QuotientProblem) -> Result<QuotientSolution> {
    check_problem(p)?;
    let op = Collocation::new(&p.mask, p.lattice)?;
    let mult = p.lattice.multipliers(&p.weight);
    let winv: Vec<f64> = mult.iter().map(|m| 1.0 / (m * m)).collect();
    let extend = |y: &[Complex64]| -> Vec<Complex64> { op.adjoint(y).iter().zip(&winv).map(|(v, w)| v * w).collect() };
    let dot = |a: &[Complex64], b: &[Complex64]| -> Complex64 { a.iter().zip(b).map(|(x, y)| x.conj() * y).sum() };
    let norm = |a: &[Complex64]| a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();

    let u_norm = norm(&p.target);
    if u_norm == 0.0 {
        return Ok(QuotientSolution {
            value: 0.0,
            extension: SpectralField::zeros(p.lattice),
            converged: true,
            iterations: 0,
            residual: 0.0,
        });
    }
    let n = p.target.len();
    let mut y = vec![ZERO; n];
    let mut r = p.target.clone();
    let mut d = r.clone();
    let mut rr = dot(&r, &r).re;
    let mut iterations = 0;
    let mut converged = rr.sqrt() <= p.options.tolerance * u_norm;
    while !converged && iterations < p.options.max_iterations {
        let sd = op.apply(&extend(&d));
        let alpha = rr / dot(&d, &sd).re;
        for i in 0..n {
            y[i] += d[i] * alpha;
            r[i] -= sd[i] * alpha;
        }
        iterations += 1;
        let rr_new = dot(&r, &r).re;
        converged = rr_new.sqrt() <= p.options.tolerance * u_norm;
        let beta = rr_new / rr;
        rr = rr_new;
        for i in 0..n {
            d[i] = r[i] + d[i] * beta;
        }
    }
    let c = extend(&y);
    let achieved = op.apply(&c);
    let residual = achieved.iter().zip(&p.target).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() / u_norm;
    let value = weighted_norm(&c, &mult);
    Ok(QuotientSolution {
        value,
        extension: SpectralField::from_coeffs(p.lattice, c)?,
        converged,
        iterations,
        residual,
    })
}

/// Quotient norm from the full KKT system
/// `[W A*; A 0] [c; λ] = [0; u]` solved by dense LU with partial pivoting.
pub fn kkt_reference_norm(p: &QuotientProblem) -> Result<f64> {
    check_problem(p)?;
    let op = Collocation::new(&p.mask, p.lattice)?;
    let mult = p.lattice.multipliers(&p.weight);
    let nm = p.lattice.len();
    let ni = p.target.len();
    let mut a = Mat::<Complex64>::zeros(ni, nm);
    for col in 0..nm {
        let mut e = vec![ZERO; nm];
        e[col] = Complex64::new(1.0, 0.0);
        for (row, v) in op.apply(&e).into_iter().enumerate() {
            a[(row, col)] = v;
        }
    }
    let size = nm + ni;
    let kkt = Mat::<Complex64>::from_fn(size, size, |i, j| match (i < nm, j < nm) {
        (true, true) => {
            if i == j {
                Complex64::new(mult[i] * mult[i], 0.0)
            } else {
                ZERO
            }
        }
        (true, false) => a[(j - nm, i)].conj(),
        (false, true) => a[(i - nm, j)],
        (false, false) => ZERO,
    });
    let rhs = Mat::<Complex64>::from_fn(size, 1, |i, _| if i < nm { ZERO } else { p.target[i - nm] });
    use faer::linalg::solvers::Solve;
    let sol = kkt.partial_piv_lu().solve(&rhs);
    let c: Vec<Complex64> = (0..nm).map(|i| sol[(i, 0)]).collect();
    if c.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Solver("singular KKT system".into()));
    }
    Ok(weighted_norm(&c, &mult))
}

/// `h_norm(w, φ)` for an extension `w` that agrees with `u` on the inside points.
pub fn quotient_upper_bound(u: &[Complex64], phi: &RoWeight, w: &SpectralField, mask: &DomainMask) -> Result<f64> {
    let vals = restriction(w, mask)?;
    if vals.len() != u.len() {
        return Err(Error::InvalidArgument("target length does not match the mask".into()));
    }
    let scale = u.iter().map(|v| v.norm()).fold(1.0, f64::max);
    let viol = vals.iter().zip(u).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    if viol > 1e-8 * scale {
        return Err(Error::Infeasible(viol));
    }
    Ok(h_norm(w, phi))
}

/// Dense spectral factorization of the Gram matrix `S = A W^{−1} A*` for a
/// radial weight, reused across many right-hand sides.
///
/// For a weight depending only on `⟨k⟩` and a symmetric lattice, `S` is real
/// symmetric with entries `G(x_a − x_b)`, `G(x) = Σ_k φ^{−2}(⟨k⟩) e^{ik·x}`.
/// Eigenvalues below `rel_cutoff · λ_max` are dropped (pseudo-inverse).
pub struct QuotientFactorization {
    vectors: Mat<f64>,
    inv_values: Vec<f64>,
    inside: usize,
}

impl QuotientFactorization {
    pub fn new(mask: &DomainMask, lattice: Lattice, phi: &RoWeight, rel_cutoff: f64) -> Result<Self> {
        check_compatible(mask, lattice)?;
        let m = mask.points;
        let fft = GridFft::new(m, mask.dim);
        let mut g = vec![ZERO; fft.len()];
        for (k, w) in lattice.modes().zip(lattice.multipliers(phi)) {
            g[bin(k, m, mask.dim)] += Complex64::new(1.0 / (w * w), 0.0);
        }
        fft.inverse(&mut g);
        let idx: Vec<[usize; 2]> = mask.inside_indices().iter().map(|i| mask.grid_index(*i)).collect();
        let n = idx.len();
        let s = Mat::<f64>::from_fn(n, n, |a, b| {
            let d0 = (idx[a][0] + m - idx[b][0]) % m;
            let d1 = (idx[a][1] + m - idx[b][1]) % m;
            g[if mask.dim == 1 { d0 } else { d0 * m + d1 }].re
        });
        let eig = s
            .self_adjoint_eigen(faer::Side::Lower)
            .map_err(|e| Error::Solver(format!("eigendecomposition failed: {e:?}")))?;
        let vals = eig.S();
        let lmax = (0..n).map(|i| vals[i].abs()).fold(0.0, f64::max);
        let inv_values = (0..n).map(|i| if vals[i] > rel_cutoff * lmax { 1.0 / vals[i] } else { 0.0 }).collect();
        Ok(Self { vectors: eig.U().to_owned(), inv_values, inside: n })
    }

    pub fn inside_len(&self) -> usize {
        self.inside
    }

    /// `(u* S^{+} u)^{1/2}` for inside values `u`.
    pub fn norm(&self, u: &[Complex64]) -> f64 {
        assert_eq!(u.len(), self.inside, "target length does not match the factorization");
        let n = self.inside;
        let mut terms = Vec::with_capacity(n);
        for i in 0..n {
            if self.inv_values[i] == 0.0 {
                continue;
            }
            let col = self.vectors.col(i);
            let (mut re, mut im) = (0.0, 0.0);
            for j in 0..n {
                re += col[j] * u[j].re;
                im += col[j] * u[j].im;
            }
            terms.push((re * re + im * im) * self.inv_values[i]);
        }
        crate::quad::pairwise_sum(&terms).sqrt()
    }
}
