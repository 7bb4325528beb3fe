//! Reference computations shared by the integration tests. None of them go
//! through the code paths they are compared against.

#![allow(dead_code)]

use std::f64::consts::{E, PI};

use hormander::Complex64;
use hormander::bvp::{BoundaryField, BvpModel, DiskField, ModelKind};
use hormander::quad::gauss_legendre_on;
use hormander::quotient::DomainMask;
use hormander::spectral::{Lattice, SpectralField};
use hormander::weights::WeightSpec;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);

pub fn bracket(k: &[i64]) -> f64 {
    (1.0 + k.iter().map(|v| (v * v) as f64).sum::<f64>()).sqrt()
}

pub fn phi_direct(spec: &WeightSpec, t: f64) -> f64 {
    match *spec {
        WeightSpec::Power { s } => t.powf(s),
        WeightSpec::PowerLog { s, r } => t.powf(s) * (E + t).ln().powf(r),
        WeightSpec::OscPower { s, eps } => t.powf(s) * (eps * t.ln().sin()).exp(),
        WeightSpec::Represented { .. } => panic!("no closed form"),
    }
}

/// `(Σ φ²(⟨k⟩)|c_k|²)^{1/2}` summed in plain order.
pub fn norm_direct(u: &SpectralField, spec: &WeightSpec) -> f64 {
    u.lattice()
        .modes()
        .zip(u.coeffs())
        .map(|(k, c)| phi_direct(spec, bracket(&k)).powi(2) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Solves `M x = b` by Gaussian elimination with partial pivoting. Work per
/// column is limited to the rows with a nonzero entry and to the columns up to
/// the pivot row's last nonzero, so banded systems cost O(n w²).
pub fn gauss_solve(mut m: Vec<Vec<Complex64>>, mut b: Vec<Complex64>) -> Vec<Complex64> {
    let n = b.len();
    let mut last: Vec<usize> = m.iter().map(|row| row.iter().rposition(|v| *v != ZERO).unwrap_or(0)).collect();
    for col in 0..n {
        let rows: Vec<usize> = (col..n).filter(|r| m[*r][col] != ZERO).collect();
        let p = *rows.iter().max_by(|a, c| m[**a][col].norm().total_cmp(&m[**c][col].norm())).expect("singular matrix");
        m.swap(col, p);
        b.swap(col, p);
        last.swap(col, p);
        let hi = last[col];
        for row in rows.iter().map(|r| {
            if *r == p {
                col
            } else if *r == col {
                p
            } else {
                *r
            }
        }) {
            if row == col {
                continue;
            }
            let f = m[row][col] / m[col][col];
            let pivot = m[col][col..=hi].to_vec();
            for (a, v) in m[row][col..=hi].iter_mut().zip(pivot) {
                *a -= f * v;
            }
            let v = b[col];
            b[row] -= f * v;
            last[row] = last[row].max(hi);
        }
    }
    let mut x = vec![ZERO; n];
    for row in (0..n).rev() {
        let s: Complex64 = (row + 1..=last[row].max(row)).map(|j| m[row][j] * x[j]).sum();
        x[row] = (b[row] - s) / m[row][row];
    }
    x
}

/// Minimum of `Σ φ²(⟨k⟩)|c_k|²` over 1D coefficient vectors with
/// `Σ c_k e^{ik x_j} = u_j` at the inside points: `(u* (A W⁻¹ A*)⁻¹ u)^{1/2}`.
pub fn interval_quotient(mask: &DomainMask, lattice: Lattice, spec: &WeightSpec, u: &[Complex64]) -> f64 {
    let xs: Vec<f64> = mask.inside_indices().iter().map(|i| 2.0 * PI * *i as f64 / mask.points() as f64).collect();
    let ks: Vec<i64> = lattice.modes().map(|k| k[0]).collect();
    let w: Vec<f64> = ks.iter().map(|k| phi_direct(spec, bracket(&[*k])).powi(-2)).collect();
    let g: Vec<Vec<Complex64>> = xs
        .iter()
        .map(|xa| {
            xs.iter()
                .map(|xb| ks.iter().zip(&w).map(|(k, w)| Complex64::from_polar(*w, *k as f64 * (xa - xb))).sum())
                .collect()
        })
        .collect();
    let y = gauss_solve(g, u.to_vec());
    u.iter().zip(&y).map(|(a, b)| a.conj() * b).sum::<Complex64>().re.sqrt()
}

pub fn gauss(rng: &mut ChaCha20Rng) -> Complex64 {
    let re: f64 = rng.random_range(-1.0..1.0);
    let im: f64 = rng.random_range(-1.0..1.0);
    Complex64::new(re, im)
}

/// Disk field with uniform random coefficients scaled by `1/(1+|k|+j)`.
pub fn disk_field(seed: u64, cutoff: usize, degree: usize) -> DiskField {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut u = DiskField::zeros(cutoff, degree);
    for k in u.modes() {
        for j in 0..=degree {
            u.set(k, j, gauss(&mut rng) / (1.0 + k.abs() as f64 + j as f64));
        }
    }
    u
}

pub fn boundary_field(seed: u64, cutoff: usize) -> BoundaryField {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let c = cutoff as i64;
    let vals: Vec<Complex64> = (-c..=c).map(|k| gauss(&mut rng) / (1.0 + k.abs() as f64)).collect();
    BoundaryField::from_fn(cutoff, |k| vals[(k + c) as usize])
}

/// `∫_Ω u v̄` by Gauss–Legendre in `r` and the trapezoid rule in `θ`.
pub fn omega_inner(u: &DiskField, v: &DiskField) -> Complex64 {
    let (rs, ws) = gauss_legendre_on(32, 0.0, 1.0);
    let m = 64;
    let mut s = ZERO;
    for (r, w) in rs.iter().zip(&ws) {
        for i in 0..m {
            let t = 2.0 * PI * i as f64 / m as f64;
            s += u.eval(*r, t) * v.eval(*r, t).conj() * (w * r);
        }
    }
    s * (2.0 * PI / m as f64)
}

/// `∫_Γ g h̄ dθ` by the trapezoid rule.
pub fn gamma_inner(g: &BoundaryField, h: &BoundaryField) -> Complex64 {
    let m = 64;
    (0..m)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / m as f64;
            g.eval(t) * h.eval(t).conj()
        })
        .sum::<Complex64>()
        * (2.0 * PI / m as f64)
}

/// `|(Au, v) + Σ(B_j u, C⁺_j v)_Γ − (u, A⁺v) − Σ(C_j u, B⁺_j v)_Γ|` by quadrature.
pub fn green_residual_quadrature(model: &BvpModel, u: &DiskField, v: &DiskField) -> f64 {
    let a = |w: &DiskField| match model.kind {
        ModelKind::BiharmonicDirichlet => w.laplacian().laplacian(),
        _ => w.laplacian().scale(Complex64::new(-1.0, 0.0)),
    };
    let mut lhs = omega_inner(&a(u), v);
    for (b, cp) in model.b.iter().zip(&model.c_plus) {
        lhs += gamma_inner(&b.apply(u), &cp.apply(v));
    }
    let mut rhs = omega_inner(u, &a(v));
    for (c, bp) in model.c.iter().zip(&model.b_plus) {
        rhs += gamma_inner(&c.apply(u), &bp.apply(v));
    }
    (lhs - rhs).norm()
}

/// Second-order finite differences for one angular mode on `r_i = i/n`,
/// `i = 0..=n`. Laplace models solve `−L_k u = f` with `L_k u = u'' + u'/r − k²u/r²`;
/// the biharmonic model solves `L_k² u = f` as `L_k u = v`, `L_k v = f`.
/// Neumann conditions use a ghost node so the error expands in even powers
/// of `h`. The Neumann `k = 0` problem is singular and not supported.
pub fn fd_mode(kind: ModelKind, k: i64, f: &dyn Fn(f64) -> Complex64, g: &[Complex64], n: usize) -> Vec<Complex64> {
    let h = 1.0 / n as f64;
    let kk = (k * k) as f64;
    let one = Complex64::new(1.0, 0.0);
    // Stencil of L_h at node i, as (offset, coefficient).
    let stencil = |i: usize| {
        let r = i as f64 * h;
        [
            (-1i64, 1.0 / (h * h) - 1.0 / (2.0 * h * r)),
            (0, -2.0 / (h * h) - kk / (r * r)),
            (1, 1.0 / (h * h) + 1.0 / (2.0 * h * r)),
        ]
    };
    let origin = [(0i64, -4.0 / (h * h)), (1, 4.0 / (h * h))];
    match kind {
        ModelKind::LaplaceDirichlet | ModelKind::LaplaceNeumann => {
            assert!(!(kind == ModelKind::LaplaceNeumann && k == 0));
            let size = n + 2;
            let mut m = vec![vec![ZERO; size]; size];
            let mut b = vec![ZERO; size];
            if k == 0 {
                for (o, c) in origin {
                    m[0][o as usize] = Complex64::new(-c, 0.0);
                }
                b[0] = f(0.0);
            } else {
                m[0][0] = one;
            }
            let last = if kind == ModelKind::LaplaceDirichlet { n - 1 } else { n };
            for i in 1..=last {
                for (o, c) in stencil(i) {
                    m[i][(i as i64 + o) as usize] = Complex64::new(-c, 0.0);
                }
                b[i] = f(i as f64 * h);
            }
            if kind == ModelKind::LaplaceDirichlet {
                m[n][n] = one;
                b[n] = g[0];
                m[n + 1][n + 1] = one;
            } else {
                m[n + 1][n + 1] = Complex64::new(1.0 / (2.0 * h), 0.0);
                m[n + 1][n - 1] = Complex64::new(-1.0 / (2.0 * h), 0.0);
                b[n + 1] = g[0];
            }
            gauss_solve(m, b)[..=n].to_vec()
        }
        ModelKind::BiharmonicDirichlet => {
            let nu = n + 2;
            let size = 2 * nu;
            // Unknowns interleaved by node keep the matrix banded.
            let (ui, vi) = (|i: usize| 2 * i, |i: usize| 2 * i + 1);
            let mut m = vec![vec![ZERO; size]; size];
            let mut b = vec![ZERO; size];
            let mut row = 0;
            if k == 0 {
                for (o, c) in origin {
                    m[row][ui(o as usize)] = Complex64::new(c, 0.0);
                    m[row + 1][vi(o as usize)] = Complex64::new(c, 0.0);
                }
                m[row][vi(0)] = -one;
                b[row + 1] = f(0.0);
            } else {
                m[row][ui(0)] = one;
                m[row + 1][vi(0)] = one;
            }
            row += 2;
            for i in 1..=n {
                for (o, c) in stencil(i) {
                    let j = (i as i64 + o) as usize;
                    m[row][ui(j)] = Complex64::new(c, 0.0);
                    m[row + 1][vi(j)] = Complex64::new(c, 0.0);
                }
                m[row][vi(i)] = -one;
                b[row + 1] = f(i as f64 * h);
                row += 2;
            }
            m[row][ui(n)] = one;
            b[row] = g[0];
            m[row + 1][ui(n + 1)] = Complex64::new(1.0 / (2.0 * h), 0.0);
            m[row + 1][ui(n - 1)] = Complex64::new(-1.0 / (2.0 * h), 0.0);
            b[row + 1] = g[1];
            let x = gauss_solve(m, b);
            (0..=n).map(|i| x[ui(i)]).collect()
        }
    }
}

/// Richardson extrapolation of [`fd_mode`] from `n` and `2n` nodes, sampled
/// at `r = j / samples`, `j = 0..=samples` (`n` must be a multiple of `samples`).
pub fn fd_mode_richardson(
    kind: ModelKind,
    k: i64,
    f: &dyn Fn(f64) -> Complex64,
    g: &[Complex64],
    n: usize,
    samples: usize,
) -> Vec<(f64, Complex64)> {
    assert_eq!(n % samples, 0);
    let coarse = fd_mode(kind, k, f, g, n);
    let fine = fd_mode(kind, k, f, g, 2 * n);
    (0..=samples)
        .map(|j| {
            let (a, b) = (coarse[j * n / samples], fine[j * 2 * n / samples]);
            (j as f64 / samples as f64, (4.0 * b - a) / 3.0)
        })
        .collect()
}
