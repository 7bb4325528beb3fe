//! Model problems on the unit disk.
//!
//! * Laplace–Dirichlet: `A = −Δ`, `B = γ₀`.
//! * Laplace–Neumann: `A = −Δ`, `B = ∂_n`.
//! * Biharmonic–Dirichlet: `A = Δ²`, `B = (γ₀, ∂_n)`.
//!
//! The auxiliary boundary systems in the Green formula
//! `(Au, v)_Ω + Σ (B_j u, C⁺_j v)_Γ = (u, A⁺v)_Ω + Σ (C_j u, B⁺_j v)_Γ`
//! (with `A⁺ = A`) are
//!
//! | model       | `C⁺`               | `C`               | `B⁺`          |
//! |-------------|--------------------|-------------------|---------------|
//! | Dirichlet   | `−∂_n`             | `−∂_n`            | `γ₀`          |
//! | Neumann     | `γ₀`               | `γ₀`              | `∂_n`         |
//! | biharmonic  | `(∂_nΔ, −γ₀Δ)`     | `(∂_nΔ, −γ₀Δ)`    | `(γ₀, ∂_n)`   |

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::disk::{BoundaryField, DiskField, inner_gamma, inner_omega};
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Modes scanned when building Fredholm data.
pub const FREDHOLM_SCAN_MODES: i64 = 64;
/// Determinants at or below this magnitude mark a nontrivial mode kernel.
pub const SINGULAR_DETERMINANT: f64 = 1e-12;
/// Relative tolerance for the compatibility defect in [`solve`].
pub const COMPATIBILITY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    LaplaceDirichlet,
    LaplaceNeumann,
    BiharmonicDirichlet,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] =
        [ModelKind::LaplaceDirichlet, ModelKind::LaplaceNeumann, ModelKind::BiharmonicDirichlet];

    pub fn name(&self) -> &'static str {
        match self {
            ModelKind::LaplaceDirichlet => "laplace_dirichlet",
            ModelKind::LaplaceNeumann => "laplace_neumann",
            ModelKind::BiharmonicDirichlet => "biharmonic_dirichlet",
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Boundary operators on the unit circle (normal = radial direction).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryOperator {
    Trace,
    NormalDerivative,
    NegNormalDerivative,
    NormalDerivativeOfLaplacian,
    NegLaplacianTrace,
}

impl BoundaryOperator {
    pub fn apply(&self, u: &DiskField) -> BoundaryField {
        let neg = |g: BoundaryField| BoundaryField::from_fn(g.cutoff(), |k| -g.coeff(k));
        match self {
            BoundaryOperator::Trace => u.trace(),
            BoundaryOperator::NormalDerivative => u.normal_derivative(),
            BoundaryOperator::NegNormalDerivative => neg(u.normal_derivative()),
            BoundaryOperator::NormalDerivativeOfLaplacian => u.laplacian().normal_derivative(),
            BoundaryOperator::NegLaplacianTrace => neg(u.laplacian().trace()),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            BoundaryOperator::Trace => 0,
            BoundaryOperator::NormalDerivative | BoundaryOperator::NegNormalDerivative => 1,
            BoundaryOperator::NegLaplacianTrace => 2,
            BoundaryOperator::NormalDerivativeOfLaplacian => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FredholmData {
    /// Basis of `N = ker (A, B)`.
    pub kernel: Vec<DiskField>,
    /// Basis of `N⁺ = ker (A⁺, B⁺)`.
    pub cokernel: Vec<DiskField>,
    pub index: i64,
    /// `C⁺_j`, pairing data `g_j` with `N⁺` in the range condition.
    pub adjoint_boundary: Vec<BoundaryOperator>,
    /// Smallest `|det|` of the mode boundary matrices over the scan.
    pub min_determinant: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BvpModel {
    pub kind: ModelKind,
    /// `2q`.
    pub order: usize,
    pub b: Vec<BoundaryOperator>,
    pub c: Vec<BoundaryOperator>,
    pub b_plus: Vec<BoundaryOperator>,
    pub c_plus: Vec<BoundaryOperator>,
    pub fredholm: FredholmData,
}

impl BvpModel {
    pub fn new(kind: ModelKind) -> Self {
        use BoundaryOperator::*;
        let (order, b, c, b_plus, c_plus) = match kind {
            ModelKind::LaplaceDirichlet => {
                (2, vec![Trace], vec![NegNormalDerivative], vec![Trace], vec![NegNormalDerivative])
            }
            ModelKind::LaplaceNeumann => (2, vec![NormalDerivative], vec![Trace], vec![NormalDerivative], vec![Trace]),
            ModelKind::BiharmonicDirichlet => (
                4,
                vec![Trace, NormalDerivative],
                vec![NormalDerivativeOfLaplacian, NegLaplacianTrace],
                vec![Trace, NormalDerivative],
                vec![NormalDerivativeOfLaplacian, NegLaplacianTrace],
            ),
        };
        let mut model = Self {
            kind,
            order,
            b,
            c,
            b_plus,
            c_plus,
            fredholm: FredholmData {
                kernel: vec![],
                cokernel: vec![],
                index: 0,
                adjoint_boundary: vec![],
                min_determinant: f64::NAN,
            },
        };
        model.fredholm = fredholm_data(&model);
        model
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// `q`.
    pub fn half_order(&self) -> usize {
        self.order / 2
    }

    /// `m_j = ord B_j`.
    pub fn boundary_orders(&self) -> Vec<usize> {
        self.b.iter().map(BoundaryOperator::order).collect()
    }

    /// `m = max m_j`.
    pub fn max_boundary_order(&self) -> usize {
        self.boundary_orders().into_iter().max().unwrap_or(0)
    }

    pub fn apply_a(&self, u: &DiskField) -> DiskField {
        match self.order {
            2 => u.laplacian().scale(-ONE),
            _ => u.laplacian().laplacian(),
        }
    }

    /// `A⁺` (formally self-adjoint models).
    pub fn apply_a_plus(&self, v: &DiskField) -> DiskField {
        self.apply_a(v)
    }

    pub fn apply_b(&self, u: &DiskField) -> Vec<BoundaryField> {
        self.b.iter().map(|op| op.apply(u)).collect()
    }

    /// Residual of the Green formula for a pair of fields.
    pub fn green_residual(&self, u: &DiskField, v: &DiskField) -> f64 {
        let mut lhs = inner_omega(&self.apply_a(u), v);
        for (b, cp) in self.b.iter().zip(&self.c_plus) {
            lhs += inner_gamma(&b.apply(u), &cp.apply(v));
        }
        let mut rhs = inner_omega(u, &self.apply_a_plus(v));
        for (c, bp) in self.c.iter().zip(&self.b_plus) {
            rhs += inner_gamma(&c.apply(u), &bp.apply(v));
        }
        (lhs - rhs).norm()
    }
}

/// Homogeneous regular solutions in mode `k`: `r^{|k|}` (and `r^{|k|+2}` for
/// order four), as radial-degree indices.
fn homogeneous_degrees(order: usize) -> Vec<usize> {
    if order == 2 { vec![0] } else { vec![0, 1] }
}

fn boundary_matrix(ops: &[BoundaryOperator], order: usize, k: i64) -> Vec<Vec<Complex64>> {
    let basis: Vec<DiskField> = homogeneous_degrees(order)
        .into_iter()
        .map(|j| {
            let mut u = DiskField::zeros(k.unsigned_abs() as usize, j);
            u.set(k, j, ONE);
            u
        })
        .collect();
    ops.iter().map(|op| basis.iter().map(|u| op.apply(u).coeff(k)).collect()).collect()
}

fn det(m: &[Vec<Complex64>]) -> Complex64 {
    match m.len() {
        1 => m[0][0],
        _ => m[0][0] * m[1][1] - m[0][1] * m[1][0],
    }
}

fn null_vector(m: &[Vec<Complex64>]) -> Vec<Complex64> {
    if m.len() == 1 {
        return vec![ONE];
    }
    let (a, b) = (vec![-m[0][1], m[0][0]], vec![-m[1][1], m[1][0]]);
    let n = |v: &[Complex64]| v.iter().map(|c| c.norm()).sum::<f64>();
    if n(&a) >= n(&b) && n(&a) > 0.0 {
        a
    } else if n(&b) > 0.0 {
        b
    } else {
        vec![ONE, ZERO]
    }
}

fn mode_kernel(ops: &[BoundaryOperator], order: usize) -> (Vec<DiskField>, f64) {
    let mut basis = Vec::new();
    let mut min_det = f64::INFINITY;
    for k in 0..=FREDHOLM_SCAN_MODES {
        let m = boundary_matrix(ops, order, k);
        let d = det(&m).norm();
        min_det = min_det.min(d);
        if d > SINGULAR_DETERMINANT {
            continue;
        }
        let v = null_vector(&m);
        let degs = homogeneous_degrees(order);
        for kk in if k == 0 { vec![0] } else { vec![k, -k] } {
            let mut u = DiskField::zeros(k as usize, degs.len() - 1);
            for (c, j) in v.iter().zip(&degs) {
                u.set(kk, *j, *c);
            }
            basis.push(u);
        }
    }
    (basis, min_det)
}

/// Kernel and cokernel by scanning the mode boundary matrices.
pub fn fredholm_data(model: &BvpModel) -> FredholmData {
    let (kernel, d1) = mode_kernel(&model.b, model.order);
    let (cokernel, d2) = mode_kernel(&model.b_plus, model.order);
    FredholmData {
        index: kernel.len() as i64 - cokernel.len() as i64,
        kernel,
        cokernel,
        adjoint_boundary: model.c_plus.clone(),
        min_determinant: d1.min(d2),
    }
}

/// `(f, v)_Ω + Σ_j (g_j, C⁺_j v)_Γ` for every `v` in the cokernel basis.
pub fn compatibility_defect(model: &BvpModel, f: &DiskField, g: &[BoundaryField]) -> Vec<Complex64> {
    model
        .fredholm
        .cokernel
        .iter()
        .map(|v| {
            let mut d = inner_omega(f, v);
            for (gj, cp) in g.iter().zip(&model.c_plus) {
                d += inner_gamma(gj, &cp.apply(v));
            }
            d
        })
        .collect()
}

/// `u_p` with `−Δu_p = f` and no `r^{|k|}` term.
fn laplace_particular(f: &DiskField) -> DiskField {
    let mut u = DiskField::zeros(f.cutoff(), f.degree() + 1);
    for k in f.modes() {
        let a = k.unsigned_abs() as f64;
        for j in 0..=f.degree() {
            let jf = j as f64;
            u.set(k, j + 1, -f.get(k, j) / (4.0 * (jf + 1.0) * (a + jf + 1.0)));
        }
    }
    u
}

fn data_scale(f: &DiskField, g: &[BoundaryField]) -> f64 {
    g.iter().map(BoundaryField::max_abs).fold(f.max_abs(), f64::max).max(1.0)
}

/// Solves `(A, B)u = (f, g)` exactly in the polynomial basis. When the
/// kernel is nontrivial the returned solution has zero kernel component.
pub fn solve(model: &BvpModel, f: &DiskField, g: &[BoundaryField]) -> Result<DiskField> {
    if g.len() != model.b.len() {
        return Err(Error::InvalidArgument(format!(
            "{} boundary data for {} boundary operators",
            g.len(),
            model.b.len()
        )));
    }
    let defect = compatibility_defect(model, f, g);
    let scale = data_scale(f, g);
    if defect.iter().any(|d| d.norm() > COMPATIBILITY_TOLERANCE * scale) {
        return Err(Error::Incompatible { defect: defect.iter().map(|d| d.re).collect() });
    }
    let cutoff = g.iter().map(BoundaryField::cutoff).fold(f.cutoff(), usize::max);
    let f = f.resized(cutoff, f.degree());
    let up = match model.order {
        2 => laplace_particular(&f),
        _ => laplace_particular(&laplace_particular(&f)),
    };
    let mut u = up.resized(cutoff, up.degree().max(model.half_order() - 1));
    let (t, d) = (up.trace(), up.normal_derivative());
    for k in u.modes() {
        let a = k.unsigned_abs() as f64;
        match model.kind {
            ModelKind::LaplaceDirichlet => u.add_to(k, 0, g[0].coeff(k) - t.coeff(k)),
            ModelKind::LaplaceNeumann => {
                if k != 0 {
                    u.add_to(k, 0, (g[0].coeff(k) - d.coeff(k)) / a);
                }
            }
            ModelKind::BiharmonicDirichlet => {
                let d1 = g[0].coeff(k) - t.coeff(k);
                let d2 = g[1].coeff(k) - d.coeff(k);
                let b = (d2 - d1 * a) / 2.0;
                u.add_to(k, 0, d1 - b);
                u.add_to(k, 1, b);
            }
        }
    }
    Ok(ProjectorPair::new(model).project(&u))
}

/// Largest coefficient residual of `(A, B)u − (f, g)`.
pub fn data_residual(model: &BvpModel, u: &DiskField, f: &DiskField, g: &[BoundaryField]) -> f64 {
    let r = model.apply_a(u).sub(f).max_abs();
    model.apply_b(u).iter().zip(g).map(|(a, b)| a.sub(b).max_abs()).fold(r, f64::max)
}

/// `P` removes the kernel component (L²(Ω)-orthogonally); `P⁺` removes the
/// `(v, 0, …, 0)`, `v ∈ N⁺`, component of a data tuple.
#[derive(Debug, Clone)]
pub struct ProjectorPair {
    kernel: Vec<DiskField>,
    cokernel: Vec<DiskField>,
    c_plus: Vec<BoundaryOperator>,
}

fn orthonormalize(basis: &[DiskField]) -> Vec<DiskField> {
    let mut out: Vec<DiskField> = Vec::new();
    for b in basis {
        let mut v = b.clone();
        for e in &out {
            v = v.sub(&e.scale(inner_omega(&v, e)));
        }
        let n = inner_omega(&v, &v).re.sqrt();
        out.push(v.scale(Complex64::new(1.0 / n, 0.0)));
    }
    out
}

impl ProjectorPair {
    pub fn new(model: &BvpModel) -> Self {
        Self {
            kernel: orthonormalize(&model.fredholm.kernel),
            cokernel: orthonormalize(&model.fredholm.cokernel),
            c_plus: model.c_plus.clone(),
        }
    }

    /// `P u`.
    pub fn project(&self, u: &DiskField) -> DiskField {
        let mut out = u.clone();
        for e in &self.kernel {
            out = out.sub(&e.scale(inner_omega(u, e)));
        }
        out
    }

    /// `P⁺ (f, g)`.
    pub fn project_data(&self, f: &DiskField, g: &[BoundaryField]) -> (DiskField, Vec<BoundaryField>) {
        let mut out = f.clone();
        for v in &self.cokernel {
            let mut d = inner_omega(f, v);
            for (gj, cp) in g.iter().zip(&self.c_plus) {
                d += inner_gamma(gj, &cp.apply(v));
            }
            out = out.sub(&v.scale(d));
        }
        (out, g.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn fredholm_dimensions() {
        let dims = |k| {
            let m = BvpModel::new(k);
            (m.fredholm.kernel.len(), m.fredholm.cokernel.len(), m.fredholm.index)
        };
        assert_eq!(dims(ModelKind::LaplaceDirichlet), (0, 0, 0));
        assert_eq!(dims(ModelKind::LaplaceNeumann), (1, 1, 0));
        assert_eq!(dims(ModelKind::BiharmonicDirichlet), (0, 0, 0));
        assert_eq!(BvpModel::new(ModelKind::BiharmonicDirichlet).fredholm.min_determinant, 2.0);
    }

    #[test]
    fn neumann_rejects_constant_source() {
        let m = BvpModel::new(ModelKind::LaplaceNeumann);
        let f = DiskField::constant(ONE);
        let d = compatibility_defect(&m, &f, &[BoundaryField::zeros(0)]);
        assert!((d[0].re - PI).abs() < 1e-10);
        match solve(&m, &f, &[BoundaryField::zeros(0)]) {
            Err(Error::Incompatible { defect }) => assert!((defect[0] - PI).abs() < 1e-10),
            other => panic!("expected incompatibility, got {other:?}"),
        }
    }

    #[test]
    fn neumann_single_mode() {
        let m = BvpModel::new(ModelKind::LaplaceNeumann);
        let u = solve(&m, &DiskField::zeros(0, 0), &[BoundaryField::single_mode(3)]).unwrap();
        assert!((u.get(3, 0) - Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn dirichlet_harmonic_mode() {
        let m = BvpModel::new(ModelKind::LaplaceDirichlet);
        let u = solve(&m, &DiskField::zeros(0, 0), &[BoundaryField::single_mode(-2)]).unwrap();
        assert_eq!(u.get(-2, 0), ONE);
        assert!(data_residual(&m, &u, &DiskField::zeros(0, 0), &[BoundaryField::single_mode(-2)]) < 1e-15);
    }

    #[test]
    fn biharmonic_boundary_system() {
        let m = BvpModel::new(ModelKind::BiharmonicDirichlet);
        let k = 3i64;
        let u = solve(&m, &DiskField::zeros(0, 0), &[BoundaryField::single_mode(k), BoundaryField::zeros(k as usize)])
            .unwrap();
        assert!((u.get(k, 0).re - 2.5).abs() < 1e-15);
        assert!((u.get(k, 1).re + 1.5).abs() < 1e-15);
    }
}
