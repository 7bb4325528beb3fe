//! RO-varying weight functions.
//!
//! Every weight is evaluated through `ln φ` as a function of `x = ln t`, which
//! keeps scans over very large `t` free of overflow.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growth::{Trend, classify_growth};

/// Serializable description of a weight, as it appears in config files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightSpec {
    Power {
        s: f64,
    },
    #[serde(rename = "powerlog")]
    PowerLog {
        s: f64,
        r: f64,
    },
    #[serde(rename = "oscpower")]
    OscPower {
        s: f64,
        eps: f64,
    },
    Represented {
        #[serde(default = "one")]
        start: f64,
        ratio: f64,
        beta: Vec<f64>,
        gamma: Vec<f64>,
        beta_bound: f64,
        gamma_bound: f64,
    },
}

fn one() -> f64 {
    1.0
}

/// `β` and `γ` sampled at `t_i = start · ratio^i`, piecewise linear in `ln t`
/// between samples and constant outside the sampled range.
#[derive(Debug, Clone, PartialEq)]
pub struct LogGridWeight {
    x0: f64,
    h: f64,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    prefix: Vec<f64>,
    beta_bound: f64,
    gamma_bound: f64,
}

impl LogGridWeight {
    pub fn new(
        start: f64,
        ratio: f64,
        beta: Vec<f64>,
        gamma: Vec<f64>,
        beta_bound: f64,
        gamma_bound: f64,
    ) -> Result<Self> {
        if !(start >= 1.0 && start.is_finite()) {
            return Err(Error::InvalidWeight(format!("grid start {start} must be >= 1")));
        }
        if !(ratio > 1.0 && ratio.is_finite()) {
            return Err(Error::InvalidWeight(format!("grid ratio {ratio} must exceed 1")));
        }
        if beta.is_empty() || beta.len() != gamma.len() {
            return Err(Error::InvalidWeight(format!(
                "beta and gamma need equal nonzero lengths (got {} and {})",
                beta.len(),
                gamma.len()
            )));
        }
        check_bounded("beta", &beta, beta_bound)?;
        check_bounded("gamma", &gamma, gamma_bound)?;
        let x0 = start.ln();
        let h = ratio.ln();
        let mut prefix = Vec::with_capacity(gamma.len());
        prefix.push(gamma[0] * x0);
        for i in 1..gamma.len() {
            prefix.push(prefix[i - 1] + 0.5 * h * (gamma[i - 1] + gamma[i]));
        }
        Ok(Self { x0, h, beta, gamma, prefix, beta_bound, gamma_bound })
    }

    /// Log-scale of the last sample.
    pub fn x_max(&self) -> f64 {
        self.x0 + self.h * (self.gamma.len() - 1) as f64
    }

    fn ln_phi(&self, x: f64) -> f64 {
        let n = self.gamma.len();
        if x <= self.x0 {
            return self.beta[0] + self.gamma[0] * x;
        }
        let u = (x - self.x0) / self.h;
        let i = u.floor() as usize;
        if i >= n - 1 {
            let last = n - 1;
            return self.beta[last] + self.prefix[last] + self.gamma[last] * (x - self.x_max());
        }
        let d = x - (self.x0 + self.h * i as f64);
        let frac = d / self.h;
        let beta = self.beta[i] + frac * (self.beta[i + 1] - self.beta[i]);
        let integral = self.prefix[i] + d * self.gamma[i] + 0.5 * d * frac * (self.gamma[i + 1] - self.gamma[i]);
        beta + integral
    }

    fn shifted(&self, s: f64) -> Self {
        let gamma: Vec<f64> = self.gamma.iter().map(|g| g + s).collect();
        let mut prefix = Vec::with_capacity(gamma.len());
        prefix.push(gamma[0] * self.x0);
        for i in 1..gamma.len() {
            prefix.push(prefix[i - 1] + 0.5 * self.h * (gamma[i - 1] + gamma[i]));
        }
        Self { gamma, prefix, gamma_bound: self.gamma_bound + s.abs(), ..self.clone() }
    }

    fn spec(&self) -> WeightSpec {
        WeightSpec::Represented {
            start: self.x0.exp(),
            ratio: self.h.exp(),
            beta: self.beta.clone(),
            gamma: self.gamma.clone(),
            beta_bound: self.beta_bound,
            gamma_bound: self.gamma_bound,
        }
    }
}

fn check_bounded(name: &str, v: &[f64], bound: f64) -> Result<()> {
    if !(bound.is_finite() && bound >= 0.0) {
        return Err(Error::InvalidWeight(format!("{name} bound must be finite and >= 0")));
    }
    for (i, b) in v.iter().enumerate() {
        if !b.is_finite() || b.abs() > bound {
            return Err(Error::InvalidWeight(format!("{name}[{i}] = {b} violates declared bound {bound}")));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
enum Family {
    Power { s: f64 },
    PowerLog { s: f64, r: f64 },
    OscPower { s: f64, eps: f64 },
    Represented(Arc<LogGridWeight>),
}

/// An RO-varying weight `φ` on `[1, ∞)`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct RoWeight {
    family: Family,
    cached: Option<(f64, f64)>,
}

impl RoWeight {
    pub fn power(s: f64) -> Self {
        Self { family: Family::Power { s }, cached: None }
    }

    pub fn power_log(s: f64, r: f64) -> Self {
        Self { family: Family::PowerLog { s, r }, cached: None }
    }

    /// `t^s · exp(eps · sin ln t)`, i.e. `γ(τ) = s + eps·cos ln τ`, `β ≡ 0`.
    pub fn osc_power(s: f64, eps: f64) -> Self {
        Self { family: Family::OscPower { s, eps }, cached: None }
    }

    pub fn represented(w: LogGridWeight) -> Self {
        Self { family: Family::Represented(Arc::new(w)), cached: None }
    }

    pub fn from_spec(spec: &WeightSpec) -> Result<Self> {
        let check = |v: f64, what: &str| {
            if v.is_finite() { Ok(()) } else { Err(Error::InvalidWeight(format!("{what} must be finite"))) }
        };
        Ok(match spec {
            WeightSpec::Power { s } => {
                check(*s, "s")?;
                Self::power(*s)
            }
            WeightSpec::PowerLog { s, r } => {
                check(*s, "s")?;
                check(*r, "r")?;
                Self::power_log(*s, *r)
            }
            WeightSpec::OscPower { s, eps } => {
                check(*s, "s")?;
                check(*eps, "eps")?;
                Self::osc_power(*s, *eps)
            }
            WeightSpec::Represented { start, ratio, beta, gamma, beta_bound, gamma_bound } => Self::represented(
                LogGridWeight::new(*start, *ratio, beta.clone(), gamma.clone(), *beta_bound, *gamma_bound)?,
            ),
        })
    }

    pub fn spec(&self) -> WeightSpec {
        match &self.family {
            Family::Power { s } => WeightSpec::Power { s: *s },
            Family::PowerLog { s, r } => WeightSpec::PowerLog { s: *s, r: *r },
            Family::OscPower { s, eps } => WeightSpec::OscPower { s: *s, eps: *eps },
            Family::Represented(w) => w.spec(),
        }
    }

    /// Attaches known index bounds.
    pub fn with_cached_indices(mut self, sigma0: f64, sigma1: f64) -> Result<Self> {
        if !(sigma0.is_finite() && sigma1.is_finite() && sigma0 <= sigma1) {
            return Err(Error::InvalidWeight(format!(
                "cached indices ({sigma0}, {sigma1}) must be finite and ordered"
            )));
        }
        self.cached = Some((sigma0, sigma1));
        Ok(self)
    }

    pub fn cached_indices(&self) -> Option<(f64, f64)> {
        self.cached
    }

    pub fn is_closed_form(&self) -> bool {
        !matches!(self.family, Family::Represented(_))
    }

    /// `ln φ(e^x)`, defined for every real `x` (the closed forms extend naturally).
    pub fn ln_phi(&self, x: f64) -> f64 {
        match &self.family {
            Family::Power { s } => s * x,
            Family::PowerLog { s, r } => {
                if *r == 0.0 {
                    return s * x;
                }
                s * x + r * ln_e_plus_exp(x).ln()
            }
            Family::OscPower { s, eps } => s * x + eps * x.sin(),
            Family::Represented(w) => w.ln_phi(x),
        }
    }

    pub fn evaluate(&self, t: f64) -> Result<f64> {
        if !(t >= 1.0) {
            return Err(Error::Domain(t));
        }
        Ok(self.ln_phi(t.ln()).exp())
    }

    /// `φ` at `t ≥ 1`, given as `x = ln t`; no domain check.
    pub fn at_log(&self, x: f64) -> f64 {
        self.ln_phi(x).exp()
    }

    /// `t ↦ t^s φ(t)`.
    pub fn shift(&self, s: f64) -> Self {
        let family = match &self.family {
            Family::Power { s: a } => Family::Power { s: a + s },
            Family::PowerLog { s: a, r } => Family::PowerLog { s: a + s, r: *r },
            Family::OscPower { s: a, eps } => Family::OscPower { s: a + s, eps: *eps },
            Family::Represented(w) => Family::Represented(Arc::new(w.shifted(s))),
        };
        Self { family, cached: self.cached.map(|(a, b)| (a + s, b + s)) }
    }

    /// Index bounds used by preconditions and shortcuts: cached values when
    /// present, analytic values for closed forms, otherwise the estimator.
    pub fn index_bounds(&self) -> MatuszewskaIndices {
        if let Some((a, b)) = self.cached {
            return MatuszewskaIndices { sigma0: a, sigma1: b, method: IndexMethod::Cached, grid: None };
        }
        match indices(self, &IndexMode::Analytic) {
            Ok(ix) => ix,
            Err(_) => {
                let grid = IndexGrid::for_weight(self);
                indices(self, &IndexMode::Estimated(grid)).expect("default grid is nonempty")
            }
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for RoWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.family {
            Family::Power { s } => write!(f, "power({s})"),
            Family::PowerLog { s, r } => write!(f, "powerlog({s},{r})"),
            Family::OscPower { s, eps } => write!(f, "oscpower({s},{eps})"),
            Family::Represented(w) => write!(f, "represented(n={})", w.gamma.len()),
        }
    }
}

/// `ln(e + e^x)` without overflow.
fn ln_e_plus_exp(x: f64) -> f64 {
    if x > 1.0 { x + (1.0 - x).exp().ln_1p() } else { 1.0 + (x - 1.0).exp().ln_1p() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexMethod {
    Analytic,
    Estimated,
    Cached,
}

/// Lower and upper exponent bounds `σ0 ≤ σ1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MatuszewskaIndices {
    pub sigma0: f64,
    pub sigma1: f64,
    pub method: IndexMethod,
    pub grid: Option<IndexGrid>,
}

/// Log-grid for the index estimator: local exponents
/// `(ln φ(e^{x+h}) − ln φ(e^x)) / h` on `points` nodes spanning `[x_min, x_max]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub step: f64,
}

impl Default for IndexGrid {
    fn default() -> Self {
        Self { x_min: 1e12f64.ln(), x_max: 1e24f64.ln(), points: 4000, step: 0.05 }
    }
}

impl IndexGrid {
    /// The default tail window, or the upper half of the sampled range for
    /// represented weights.
    pub fn for_weight(phi: &RoWeight) -> Self {
        match &phi.family {
            Family::Represented(w) => {
                let top = w.x_max().max(w.x0 + 1.0);
                Self { x_min: 0.5 * (w.x0 + top), x_max: top, ..Self::default() }
            }
            _ => Self::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum IndexMode {
    Analytic,
    Estimated(IndexGrid),
}

pub fn indices(phi: &RoWeight, mode: &IndexMode) -> Result<MatuszewskaIndices> {
    match mode {
        IndexMode::Analytic => {
            let (a, b) = match &phi.family {
                Family::Power { s } | Family::PowerLog { s, .. } => (*s, *s),
                Family::OscPower { s, eps } => (s - eps.abs(), s + eps.abs()),
                Family::Represented(_) => return Err(Error::AnalyticUnavailable),
            };
            Ok(MatuszewskaIndices { sigma0: a, sigma1: b, method: IndexMethod::Analytic, grid: None })
        }
        IndexMode::Estimated(g) => {
            if g.points < 2 || !(g.step > 0.0) || !(g.x_max > g.x_min) {
                return Err(Error::EmptyGrid("index grid"));
            }
            let (lo, hi) = local_exponent_range(phi, g);
            Ok(MatuszewskaIndices { sigma0: lo, sigma1: hi, method: IndexMethod::Estimated, grid: Some(*g) })
        }
    }
}

fn local_exponent_range(phi: &RoWeight, g: &IndexGrid) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    let dx = (g.x_max - g.x_min) / (g.points - 1) as f64;
    for i in 0..g.points {
        let x = g.x_min + dx * i as f64;
        let e = (phi.ln_phi(x + g.step) - phi.ln_phi(x)) / g.step;
        lo = lo.min(e);
        hi = hi.max(e);
    }
    (lo, hi)
}

/// Index estimate from large dilations: extremes over `x ∈ [0, x_max]` of
/// `(ln φ(e^{x+L}) − ln φ(e^x)) / L` with a single large log-dilation `L`.
/// Oscillating parts of size `O(1)` are damped by `1/L`, so this tracks the
/// limits in the sup/inf definition of the indices rather than the range of `γ`.
pub fn sharp_indices(phi: &RoWeight, log_lambda: f64, x_max: f64, points: usize) -> Result<(f64, f64)> {
    if points < 2 || !(log_lambda > 0.0) || !(x_max > 0.0) {
        return Err(Error::EmptyGrid("sharp index grid"));
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..points {
        let x = x_max * i as f64 / (points - 1) as f64;
        let e = (phi.ln_phi(x + log_lambda) - phi.ln_phi(x)) / log_lambda;
        lo = lo.min(e);
        hi = hi.max(e);
    }
    Ok((lo, hi))
}

/// Grid for the RO-membership scan: `t ∈ [1, t_max]`, `λ ∈ [1, a]`, repeated on
/// `extensions` successively squared `t_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MembershipGrid {
    pub t_max: f64,
    pub t_points: usize,
    pub lambda_points: usize,
    pub extensions: usize,
}

impl Default for MembershipGrid {
    fn default() -> Self {
        Self { t_max: 1e6, t_points: 2000, lambda_points: 64, extensions: 3 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    /// `max(ratio, 1/ratio)` over the base grid.
    pub c_estimate: f64,
    /// `(ln t_max, c)` for the base grid and each extension.
    pub history: Vec<(f64, f64)>,
    pub trend: Trend,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Membership {
    Member(MembershipReport),
    Violation(MembershipReport),
}

impl Membership {
    pub fn report(&self) -> &MembershipReport {
        match self {
            Membership::Member(r) | Membership::Violation(r) => r,
        }
    }

    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

pub fn check_ro_membership(phi: &RoWeight, a: f64, grid: &MembershipGrid) -> Result<Membership> {
    if grid.t_points == 0 || grid.lambda_points == 0 {
        return Err(Error::EmptyGrid("membership t/lambda grid"));
    }
    if !(a > 1.0) || !(grid.t_max >= 1.0) {
        return Err(Error::InvalidArgument(format!("need a > 1 and t_max >= 1 (got a = {a}, t_max = {})", grid.t_max)));
    }
    let base = grid.t_max.ln();
    let density = grid.t_points as f64 / base.max(1.0);
    let mut history = Vec::new();
    for j in 0..=grid.extensions {
        let x_max = base * (1u64 << j) as f64;
        let points = ((density * x_max).ceil() as usize).max(grid.t_points);
        let c = max_log_ratio(phi, x_max, points, a.ln(), grid.lambda_points);
        history.push((x_max, c.exp()));
    }
    let logs: Vec<f64> = history.iter().map(|(_, c)| c.ln()).collect();
    let trend = classify_growth(&logs);
    let report = MembershipReport { c_estimate: history[0].1, history, trend };
    Ok(if trend == Trend::Unbounded { Membership::Violation(report) } else { Membership::Member(report) })
}

/// `max |ln φ(e^{x+l}) − ln φ(e^x)|` over `x ∈ [0, x_max]`, `l ∈ [0, l_max]`,
/// by a grid scan followed by local refinement around the best node.
fn max_log_ratio(phi: &RoWeight, x_max: f64, nx: usize, l_max: f64, nl: usize) -> f64 {
    let f = |x: f64, l: f64| (phi.ln_phi(x + l) - phi.ln_phi(x)).abs();
    let hx = if nx > 1 { x_max / (nx - 1) as f64 } else { 0.0 };
    let hl = if nl > 1 { l_max / (nl - 1) as f64 } else { 0.0 };
    let mut best = (0.0, 0.0, f64::NEG_INFINITY);
    for i in 0..nx {
        let x = hx * i as f64;
        for j in 0..nl {
            let l = if nl > 1 { hl * j as f64 } else { l_max };
            let v = f(x, l);
            if v > best.2 {
                best = (x, l, v);
            }
        }
    }
    let (mut rx, mut rl) = (hx, hl);
    for _ in 0..6 {
        let (cx, cl) = (best.0, best.1);
        for i in 0..=20 {
            let x = (cx - rx + rx * i as f64 / 10.0).clamp(0.0, x_max);
            for j in 0..=20 {
                let l = (cl - rl + rl * j as f64 / 10.0).clamp(0.0, l_max);
                let v = f(x, l);
                if v > best.2 {
                    best = (x, l, v);
                }
            }
        }
        rx /= 5.0;
        rl /= 5.0;
    }
    best.2
}
