//! Mode-wise radial solves through the explicit Green kernel.
//!
//! For `L_k u = u'' + u'/r − k²u/r²` the kernel of `−L_k` with `u(1) = 0` and
//! regularity at the origin is, with respect to `ρ dρ`,
//! `G_k(r, ρ) = ((r_</r_>)^{|k|} − (r_< r_>)^{|k|}) / (2|k|)` for `k ≠ 0` and
//! `G_0(r, ρ) = −ln r_>`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::model::{BvpModel, ModelKind};
use crate::error::{Error, Result};
use crate::quad::gauss_legendre_on;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Output nodes and the Gauss–Legendre order used on each side of the kernel kink.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    pub order: usize,
}

impl RadialGrid {
    /// Gauss–Legendre nodes on `[0, 1]`, with the same order for the integrals.
    pub fn gauss(n: usize) -> Self {
        Self { nodes: gauss_legendre_on(n, 0.0, 1.0).0, order: n }
    }
}

/// Right-hand sides for one angular mode.
pub struct ModeData<'a> {
    pub source: &'a dyn Fn(f64) -> Complex64,
    /// One value per boundary operator.
    pub boundary: Vec<Complex64>,
}

#[derive(Debug, Clone)]
pub struct ModeSolution {
    pub nodes: Vec<f64>,
    pub values: Vec<Complex64>,
    pub boundary_value: Complex64,
    pub boundary_slope: Complex64,
    pub solvable: bool,
    /// Contribution `(f, 1)_Ω + (g, 1)_Γ` of this mode to the range condition
    /// (Neumann, `k = 0` only).
    pub defect: Option<Complex64>,
}

fn kernel(k: i64, r: f64, rho: f64) -> f64 {
    let (lo, hi) = if r < rho { (r, rho) } else { (rho, r) };
    if k == 0 {
        return -hi.ln();
    }
    let a = k.unsigned_abs() as i32;
    ((lo / hi).powi(a) - (lo * hi).powi(a)) / (2.0 * a as f64)
}

/// Gauss–Legendre nodes and weights on `[0, 1]`.
struct Rule {
    x: Vec<f64>,
    w: Vec<f64>,
}

impl Rule {
    fn new(order: usize) -> Self {
        let (x, w) = gauss_legendre_on(order, 0.0, 1.0);
        Self { x, w }
    }

    fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let h = b - a;
        self.x.iter().zip(&self.w).map(move |(x, w)| (a + h * x, h * w))
    }
}

/// `∫_0^1 G_k(r, ρ) f(ρ) ρ dρ`, split at `ρ = r`; `[r, 1]` is cut into
/// geometric panels `[r 2^i, r 2^{i+1}]` where the kernel varies on scale `r`.
fn green_apply(k: i64, f: &dyn Fn(f64) -> Complex64, r: f64, rule: &Rule) -> Complex64 {
    // At the origin the panels start at 2^-40; the skipped piece is O(4^-40).
    let start = if r > 0.0 { r } else { 2f64.powi(-40) };
    let mut edges = vec![0.0, start];
    let mut e = start;
    while e < 1.0 {
        e = (2.0 * e).min(1.0);
        edges.push(e);
    }
    let mut s = ZERO;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        for (rho, w) in rule.on(a, b) {
            s += f(rho) * (w * rho * kernel(k, r, rho));
        }
    }
    s
}

/// `∫_0^1 ρ^{|k|} f(ρ) ρ dρ`.
fn moment(k: i64, f: &dyn Fn(f64) -> Complex64, rule: &Rule) -> Complex64 {
    let a = k.unsigned_abs() as i32;
    rule.on(0.0, 1.0).map(|(r, w)| f(r) * (w * r * r.powi(a))).sum()
}

/// Smallest admissible quadrature order for mode `k`.
pub fn min_order(k: i64) -> usize {
    2 * k.unsigned_abs() as usize + 4
}

/// Solves the model in angular mode `k` with the Green kernel.
pub fn solve_mode(model: &BvpModel, k: i64, data: &ModeData<'_>, grid: &RadialGrid) -> Result<ModeSolution> {
    if grid.order < min_order(k) {
        return Err(Error::Quadrature(format!("order {} below {} for mode {k}", grid.order, min_order(k))));
    }
    if data.boundary.len() != model.b.len() {
        return Err(Error::InvalidArgument(format!(
            "{} boundary values for {} boundary operators",
            data.boundary.len(),
            model.b.len()
        )));
    }
    let rule = Rule::new(grid.order);
    let a = k.unsigned_abs() as i32;
    let af = a as f64;
    let f = data.source;
    let biharmonic = model.kind == ModelKind::BiharmonicDirichlet;
    let inner = |rho: f64| green_apply(k, f, rho, &rule);
    let particular = |r: f64| if biharmonic { green_apply(k, &inner, r, &rule) } else { green_apply(k, f, r, &rule) };
    let slope_p = if biharmonic { -moment(k, &inner, &rule) } else { -moment(k, f, &rule) };

    let mut defect = None;
    let mut solvable = true;
    // Homogeneous part: c0 r^{|k|} + c1 r^{|k|+2}.
    let (c0, c1) = match model.kind {
        ModelKind::LaplaceDirichlet => (data.boundary[0], ZERO),
        ModelKind::LaplaceNeumann if k != 0 => ((data.boundary[0] - slope_p) / af, ZERO),
        ModelKind::LaplaceNeumann => {
            let d = (moment(0, f, &rule) + data.boundary[0]) * (2.0 * PI);
            let mass = moment(0, &|r| Complex64::new(f(r).norm(), 0.0), &rule).re;
            let scale = 2.0 * PI * data.boundary[0].norm().max(mass).max(1.0);
            defect = Some(d);
            if d.norm() > super::model::COMPATIBILITY_TOLERANCE * scale {
                solvable = false;
                (ZERO, ZERO)
            } else {
                // zero mean over the disk: ∫ (u_p + c) r dr = 0
                (-2.0 * moment(0, &particular, &rule), ZERO)
            }
        }
        ModelKind::BiharmonicDirichlet => {
            let d1 = data.boundary[0];
            let d2 = data.boundary[1] - slope_p;
            let b = (d2 - d1 * af) / 2.0;
            (d1 - b, b)
        }
    };
    let values = grid.nodes.iter().map(|r| particular(*r) + c0 * r.powi(a) + c1 * r.powi(a + 2)).collect();
    Ok(ModeSolution {
        nodes: grid.nodes.clone(),
        values,
        boundary_value: c0 + c1,
        boundary_slope: slope_p + c0 * af + c1 * (af + 2.0),
        solvable,
        defect,
    })
}
