use std::num::NonZeroUsize;
use std::path::Path;

use gelfand_core::catalog::by_name;
use gelfand_core::{QuasiTriple, TolerancePolicy};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Name of the environment variable overriding the algebraic tolerance.
pub const TOL_ENV: &str = "GELFAND_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Pairing,
    MinusNormOracle,
    GramRoundtrip,
    PivotSplit,
    Zspace,
    Decomposition,
    Relations,
    Cesaro,
    CatalogDemos,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Pairing,
        Suite::MinusNormOracle,
        Suite::GramRoundtrip,
        Suite::PivotSplit,
        Suite::Zspace,
        Suite::Decomposition,
        Suite::Relations,
        Suite::Cesaro,
        Suite::CatalogDemos,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Pairing => "pairing",
            Suite::MinusNormOracle => "minus-norm-oracle",
            Suite::GramRoundtrip => "gram-roundtrip",
            Suite::PivotSplit => "pivot-split",
            Suite::Zspace => "zspace",
            Suite::Decomposition => "decomposition",
            Suite::Relations => "relations",
            Suite::Cesaro => "cesaro",
            Suite::CatalogDemos => "catalog-demos",
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown suite `{s}`")))
    }
}

/// Either a catalog name or an inline triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TripleSource {
    Catalog(String),
    Inline(serde_json::Value),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceOverrides {
    pub algebraic: Option<f64>,
    pub oracle: Option<f64>,
    pub condition_scale: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub triple: TripleSource,
    #[serde(default = "all_suites")]
    pub suites: Vec<Suite>,
    #[serde(default = "default_samples")]
    pub samples: NonZeroUsize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub tolerance: ToleranceOverrides,
}

fn all_suites() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

fn default_samples() -> NonZeroUsize {
    NonZeroUsize::new(1000).expect("nonzero")
}

impl VerifyConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut cfg: VerifyConfig =
            serde_json::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        cfg.suites.sort();
        cfg.suites.dedup();
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        Self::parse(&read(path)?)
    }

    /// Builds the triple and applies config and environment tolerance overrides.
    pub fn build_triple(&self, env_tol: Option<f64>) -> Result<(String, QuasiTriple), CliError> {
        let (label, triple) = match &self.triple {
            TripleSource::Catalog(name) => (name.clone(), by_name(name)?.triple),
            TripleSource::Inline(value) => (
                "inline".to_string(),
                QuasiTriple::from_json(&value.to_string())?,
            ),
        };
        Ok((label, apply_overrides(&triple, self.tolerance, env_tol)?))
    }
}

pub fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Resolves a `--triple` argument: an existing file holding triple JSON, or
/// else a catalog name.
pub fn resolve_triple(arg: &str, env_tol: Option<f64>) -> Result<QuasiTriple, CliError> {
    let path = Path::new(arg);
    let triple = if path.is_file() {
        QuasiTriple::from_json(&read(path)?)?
    } else {
        by_name(arg)?.triple
    };
    apply_overrides(&triple, ToleranceOverrides::default(), env_tol)
}

/// Environment tolerance, if set.
pub fn env_tolerance() -> Result<Option<f64>, CliError> {
    match std::env::var(TOL_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite() && *t >= 0.0)
            .map(Some)
            .ok_or_else(|| CliError::Usage(format!("{TOL_ENV}=`{v}` is not a nonnegative number"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(CliError::Usage(format!("{TOL_ENV}: {e}"))),
    }
}

/// The environment value wins over the config. An algebraic tolerance above
/// the oracle tolerance raises the oracle tolerance to match.
pub fn apply_overrides(
    triple: &QuasiTriple,
    overrides: ToleranceOverrides,
    env_tol: Option<f64>,
) -> Result<QuasiTriple, CliError> {
    let base = *triple.tolerance();
    let algebraic = env_tol
        .or(overrides.algebraic)
        .unwrap_or(base.algebraic_tol);
    let oracle = overrides.oracle.unwrap_or(base.oracle_tol).max(algebraic);
    let policy = TolerancePolicy::new(
        algebraic,
        oracle,
        overrides.condition_scale.unwrap_or(base.condition_scale),
    )?;
    if policy == base {
        return Ok(triple.clone());
    }
    Ok(triple.with_tolerance(policy)?)
}
