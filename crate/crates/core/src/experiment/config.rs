//! Experiment configuration: TOML schema, validation and digest.
//!
//! Every key except `suites` and `seeds` has a default; [`ExperimentConfig::normalized`]
//! writes the fully expanded form, whose SHA-256 is the config digest.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bvp::ModelKind;
use crate::error::{Error, Result};
use crate::quotient::SolverOptions;
use crate::weights::{RoWeight, WeightSpec};

/// Largest torus resolution accepted for spectral suites.
pub const MAX_LATTICE: usize = 128;
/// Largest disk resolution accepted for the a priori suites (dense Gram matrices).
pub const MAX_DISK_LATTICE: usize = 96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Membership,
    Indices,
    Norms,
    Interp,
    Quotient,
    Bvp,
    Embedding,
}

impl Suite {
    pub const ALL: [Suite; 7] =
        [Suite::Membership, Suite::Indices, Suite::Norms, Suite::Interp, Suite::Quotient, Suite::Bvp, Suite::Embedding];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Membership => "membership",
            Suite::Indices => "indices",
            Suite::Norms => "norms",
            Suite::Interp => "interp",
            Suite::Quotient => "quotient",
            Suite::Bvp => "bvp",
            Suite::Embedding => "embedding",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::Config(format!("unknown suite `{s}`")))
    }
}

/// Thresholds used by the suites. All must be positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Algebraic identities (interpolation, order shift, exact norms).
    pub identity: f64,
    /// Mode residuals, range condition and kernel checks.
    pub quadrature: f64,
    /// Green identity residual.
    pub green: f64,
    /// Iterative vs dense quotient norm, and the infimum property.
    pub solver: f64,
    /// Index estimates vs closed forms.
    pub index: f64,
    /// Allowed growth of the a priori constant between the two finest disk resolutions.
    pub apriori_growth: f64,
    /// Allowed spread of the isomorphism lower bound across disk resolutions.
    pub isomorphism_spread: f64,
    /// Allowed factor between the two realizations of disk norms.
    pub route_factor: f64,
    /// Minimal relative growth of threshold witnesses between the two finest resolutions.
    pub witness_growth: f64,
    /// Maximal relative variation of above-threshold witnesses.
    pub witness_variation: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            identity: 1e-12,
            quadrature: 1e-10,
            green: 1e-8,
            solver: 1e-8,
            index: 0.05,
            apriori_growth: 1.10,
            isomorphism_spread: 1.25,
            route_factor: 2.0,
            witness_growth: 0.20,
            witness_variation: 0.05,
        }
    }
}

impl Tolerances {
    fn entries(&self) -> [(&'static str, f64); 10] {
        [
            ("identity", self.identity),
            ("quadrature", self.quadrature),
            ("green", self.green),
            ("solver", self.solver),
            ("index", self.index),
            ("apriori_growth", self.apriori_growth),
            ("isomorphism_spread", self.isomorphism_spread),
            ("route_factor", self.route_factor),
            ("witness_growth", self.witness_growth),
            ("witness_variation", self.witness_variation),
        ]
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    suites: Option<Vec<Suite>>,
    seeds: Option<Vec<u64>>,
    weights: Option<Vec<WeightSpec>>,
    bvp_weights: Option<Vec<WeightSpec>>,
    lattice_sizes: Option<Vec<usize>>,
    bvp_lattice_sizes: Option<Vec<usize>>,
    models: Option<Vec<ModelKind>>,
    samples: Option<usize>,
    bvp_samples: Option<usize>,
    output_dir: Option<PathBuf>,
    #[serde(default)]
    tolerances: Tolerances,
    #[serde(default)]
    solver: SolverOptions,
}

/// A validated configuration with every default filled in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub suites: Vec<Suite>,
    pub seeds: Vec<u64>,
    pub lattice_sizes: Vec<usize>,
    pub bvp_lattice_sizes: Vec<usize>,
    pub models: Vec<ModelKind>,
    pub samples: usize,
    pub bvp_samples: usize,
    pub output_dir: PathBuf,
    pub weights: Vec<WeightSpec>,
    pub bvp_weights: Vec<WeightSpec>,
    pub tolerances: Tolerances,
    pub solver: SolverOptions,
}

/// `{Power(1), PowerLog(1,1), OscPower(1,0.5)}`.
pub fn default_weights() -> Vec<WeightSpec> {
    vec![
        WeightSpec::Power { s: 1.0 },
        WeightSpec::PowerLog { s: 1.0, r: 1.0 },
        WeightSpec::OscPower { s: 1.0, eps: 0.5 },
    ]
}

fn check_sizes(name: &str, sizes: &[usize], max: usize) -> Result<()> {
    if sizes.is_empty() {
        return Err(Error::Config(format!("{name} must not be empty")));
    }
    for k in sizes {
        if *k == 0 || *k > max {
            return Err(Error::Config(format!("{name}: K={k} out of range 1..={max}")));
        }
    }
    Ok(())
}

fn check_weights(name: &str, specs: &[WeightSpec]) -> Result<()> {
    if specs.is_empty() {
        return Err(Error::Config(format!("{name} must not be empty")));
    }
    for (i, s) in specs.iter().enumerate() {
        RoWeight::from_spec(s).map_err(|e| Error::Config(format!("{name}[{i}]: {e}")))?;
    }
    Ok(())
}

impl ExperimentConfig {
    /// Parses and validates TOML text.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string().trim_end().to_string()))?;
        let suites = raw.suites.unwrap_or_default();
        if suites.is_empty() {
            return Err(Error::Config("at least one suite required".into()));
        }
        let seeds = raw.seeds.ok_or_else(|| Error::Config("seeds required".into()))?;
        if seeds.is_empty() {
            return Err(Error::Config("seeds required".into()));
        }
        let cfg = ExperimentConfig {
            suites,
            seeds,
            lattice_sizes: raw.lattice_sizes.unwrap_or_else(|| vec![8, 16, 32, 64]),
            bvp_lattice_sizes: raw.bvp_lattice_sizes.unwrap_or_else(|| vec![16, 32, 64]),
            models: raw.models.unwrap_or_else(|| ModelKind::ALL.to_vec()),
            samples: raw.samples.unwrap_or(20),
            bvp_samples: raw.bvp_samples.unwrap_or(100),
            output_dir: raw.output_dir.unwrap_or_else(|| PathBuf::from("report")),
            weights: raw.weights.unwrap_or_else(default_weights),
            bvp_weights: raw.bvp_weights.unwrap_or_else(default_weights),
            tolerances: raw.tolerances,
            solver: raw.solver,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Range checks shared by parsing and command-line overrides.
    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(Error::Config("at least one suite required".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::Config("seeds required".into()));
        }
        check_sizes("lattice_sizes", &self.lattice_sizes, MAX_LATTICE)?;
        check_sizes("bvp_lattice_sizes", &self.bvp_lattice_sizes, MAX_DISK_LATTICE)?;
        if self.models.is_empty() {
            return Err(Error::Config("models must not be empty".into()));
        }
        if self.samples == 0 || self.bvp_samples == 0 {
            return Err(Error::Config("samples and bvp_samples must be at least 1".into()));
        }
        check_weights("weights", &self.weights)?;
        check_weights("bvp_weights", &self.bvp_weights)?;
        for (name, v) in self.tolerances.entries() {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("tolerances.{name} must be positive (got {v})")));
            }
        }
        if !(self.solver.tolerance > 0.0) || self.solver.max_iterations == 0 {
            return Err(Error::Config("solver tolerance and max_iterations must be positive".into()));
        }
        Ok(())
    }

    /// Canonical TOML with all defaults expanded.
    pub fn normalized(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Hex SHA-256 of [`Self::normalized`].
    pub fn digest(&self) -> String {
        let h = Sha256::digest(self.normalized().as_bytes());
        h.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn weights(&self) -> Vec<RoWeight> {
        self.weights.iter().map(|s| RoWeight::from_spec(s).expect("validated")).collect()
    }

    pub fn bvp_weights(&self) -> Vec<RoWeight> {
        self.bvp_weights.iter().map(|s| RoWeight::from_spec(s).expect("validated")).collect()
    }
}

/// Reads, parses and validates a config file.
pub fn validate_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    ExperimentConfig::from_toml_str(&text).map_err(|e| match e {
        Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "suites = [\"interp\"]\nseeds = [7]\n";

    #[test]
    fn minimal_config_fills_defaults() {
        let c = ExperimentConfig::from_toml_str(MINIMAL).unwrap();
        assert_eq!(c.lattice_sizes, vec![8, 16, 32, 64]);
        assert_eq!(c.weights.len(), 3);
        assert_eq!(c.tolerances, Tolerances::default());
        let again = ExperimentConfig::from_toml_str(&c.normalized()).unwrap();
        assert_eq!(again, c);
        assert_eq!(again.digest(), c.digest());
    }

    #[test]
    fn rejections() {
        let msg = |t: &str| match ExperimentConfig::from_toml_str(t) {
            Err(Error::Config(m)) => m,
            other => panic!("expected config error, got {other:?}"),
        };
        assert_eq!(msg("suites = [\"interp\"]\n"), "seeds required");
        assert!(msg("suites = []\nseeds = [1]\n").contains("at least one suite"));
        assert!(msg("suites = [\"bvp\"]\nseeds = [1]\nlattice_sizes = [0, 8]\n").contains("K=0"));
        assert!(msg("suites = [\"bvp\"]\nseeds = [1]\ncolour = 3\n").contains("colour"));
        assert!(msg("suites = [\"bvp\"]\nseeds = [1]\n[tolerances]\nidentity = -1.0\n").contains("identity"));
        assert!(msg("suites = [\"bvp\"]\nseeds = [1]\n[tolerances]\nidentity = 0.0\n").contains("positive"));
        let m = msg("suites = [\"bvp\"]\nseeds = [1\n");
        assert!(m.contains("line 2"), "{m}");
    }

    #[test]
    fn weights_parse() {
        let c = ExperimentConfig::from_toml_str(
            "suites = [\"norms\"]\nseeds = [1]\n[[weights]]\nfamily = \"oscpower\"\ns = 1.0\neps = 0.5\n",
        )
        .unwrap();
        assert_eq!(c.weights, vec![WeightSpec::OscPower { s: 1.0, eps: 0.5 }]);
    }
}
