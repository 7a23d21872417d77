//! JSON-producing command bodies, separated from argument parsing.

use std::path::Path;

use gelfand_core::catalog::{instances, InstanceSummary};
use gelfand_core::decomp::{decompose, verify_decomposition, DecompositionReport};
use gelfand_core::zspace::{
    canonical_split, optimal_split, z_minus_norm, z_plus_norm, ZMinusElement,
};
use gelfand_core::{pivot_norm, CoeffVector, IntervalSet, QuasiTriple};
use serde::Serialize;

use crate::config::read;
use crate::CliError;

pub fn load_vector(path: &Path) -> Result<CoeffVector, CliError> {
    serde_json::from_str(&read(path)?)
        .map_err(|e| CliError::Usage(format!("vector {}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Norms {
    pub pivot: f64,
    pub plus: f64,
    pub minus: f64,
    pub z_plus: f64,
    pub z_minus: f64,
}

pub fn norms(triple: &QuasiTriple, v: &CoeffVector) -> Result<Norms, CliError> {
    Ok(Norms {
        pivot: pivot_norm(v),
        plus: triple.plus_norm(v)?,
        minus: triple.minus_norm(v)?,
        z_plus: z_plus_norm(triple, v)?,
        z_minus: z_minus_norm(triple, &ZMinusElement::from_plus(v.clone()))?,
    })
}

pub fn decomposition(
    triple: &QuasiTriple,
    cut: &str,
    samples: usize,
    seed: u64,
) -> Result<DecompositionReport, CliError> {
    let cut: IntervalSet = cut.parse()?;
    let split = decompose(triple, &cut)?;
    Ok(verify_decomposition(&split, triple, samples, seed)?)
}

/// A two-part decomposition of a vector with each part measured.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SplitOutput {
    pub kind: &'static str,
    pub plus: CoeffVector,
    pub minus: CoeffVector,
    pub plus_norm: f64,
    pub minus_norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<CoeffVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_minus_norm: Option<f64>,
}

fn measured(
    triple: &QuasiTriple,
    kind: &'static str,
    plus: CoeffVector,
    minus: CoeffVector,
) -> Result<SplitOutput, CliError> {
    Ok(SplitOutput {
        kind,
        plus_norm: triple.plus_norm(&plus)?,
        minus_norm: triple.minus_norm(&minus)?,
        plus,
        minus,
        shift: None,
        z_minus_norm: None,
    })
}

/// `x = f + g` with `f ∈ D₊`, `g ∈ D₋`.
pub fn pivot_split(triple: &QuasiTriple, x: &CoeffVector) -> Result<SplitOutput, CliError> {
    let s = triple.pivot_split(x)?;
    measured(triple, "pivot", s.plus, s.minus)
}

/// `h = G⁻¹Φh + GΦh`, the norm-attaining representation in `X₊ + X₋`.
pub fn canonical(triple: &QuasiTriple, h: &CoeffVector) -> Result<SplitOutput, CliError> {
    let s = canonical_split(triple, h)?;
    let mut out = measured(
        triple,
        "canonical",
        s.plus_part.clone(),
        s.minus_part.clone(),
    )?;
    out.z_minus_norm = Some(z_minus_norm(triple, &s)?);
    Ok(out)
}

/// Re-balances a given pair `(f, g)` into `(f + z*, g − z*)`.
pub fn optimal(
    triple: &QuasiTriple,
    f: &CoeffVector,
    g: &CoeffVector,
) -> Result<SplitOutput, CliError> {
    let s = optimal_split(triple, f, g)?;
    let mut out = measured(triple, "optimal", f.add(&s.shift)?, g.sub(&s.shift)?)?;
    out.z_minus_norm = Some(s.value);
    out.shift = Some(s.shift);
    Ok(out)
}

pub fn catalog_list() -> Vec<InstanceSummary> {
    instances().iter().map(InstanceSummary::from).collect()
}
