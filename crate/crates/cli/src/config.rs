//! Experiment config documents (TOML) and their conversion into core inputs.
//!
//! Every table rejects unknown keys. Complex numbers are written either as a
//! plain number or as a `[re, im]` pair.

use std::path::PathBuf;

use serde::Deserialize;

use fadecap_core::{
    make_constellation, ChannelModel, Complex64, ComplexMatrix, ComplexVector, Constellation, ConstellationFamily,
    McConfig, Quantity, SnrGrid, SpaceTimeCode,
};

use crate::error::{CliError, ConfigContext, Result};

pub const DEFAULT_CHUNKS: usize = 16;

// ---------------------------------------------------------------------------
// Building blocks
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(untagged)]
pub enum Num {
    Real(f64),
    Complex([f64; 2]),
}

impl Num {
    pub fn value(self) -> Complex64 {
        match self {
            Num::Real(x) => Complex64::new(x, 0.0),
            Num::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

fn vector(v: &[Num]) -> ComplexVector {
    ComplexVector::from_iterator(v.len(), v.iter().map(|x| x.value()))
}

fn matrix(rows: &[Vec<Num>], field: &str) -> Result<ComplexMatrix> {
    let r = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    if r == 0 || k == 0 {
        return Err(CliError::config(field, "matrix must be nonempty"));
    }
    if rows.iter().any(|row| row.len() != k) {
        return Err(CliError::config(field, "matrix rows must have equal length"));
    }
    Ok(ComplexMatrix::from_row_iterator(r, k, rows.iter().flatten().map(|x| x.value())))
}

/// Output and worker settings shared by all commands; flags take precedence.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSpec {
    pub out: Option<PathBuf>,
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSpec {
    Rayleigh { n_t: usize, n_r: usize },
    Correlated { theta_t: Vec<Vec<Num>>, theta_r: Vec<Vec<Num>> },
    Ricean { k: f64, a_t: Vec<Num>, a_r: Vec<Num> },
}

impl ModelSpec {
    pub fn build(&self) -> Result<ChannelModel> {
        match self {
            ModelSpec::Rayleigh { n_t, n_r } => ChannelModel::canonical_rayleigh(*n_t, *n_r).field("model"),
            ModelSpec::Correlated { theta_t, theta_r } => ChannelModel::correlated_rayleigh(
                matrix(theta_t, "model.theta_t")?,
                matrix(theta_r, "model.theta_r")?,
            )
            .field("model"),
            ModelSpec::Ricean { k, a_t, a_r } => ChannelModel::ricean(*k, vector(a_t), vector(a_r)).field("model"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Bpsk,
    Qpsk,
    Qam16,
    Qam64,
    Qam256,
    Custom,
}

impl FamilyName {
    pub fn name(self) -> &'static str {
        match self {
            FamilyName::Bpsk => "bpsk",
            FamilyName::Qpsk => "qpsk",
            FamilyName::Qam16 => "qam16",
            FamilyName::Qam64 => "qam64",
            FamilyName::Qam256 => "qam256",
            FamilyName::Custom => "custom",
        }
    }

    fn builtin(self) -> Option<ConstellationFamily> {
        match self {
            FamilyName::Bpsk => Some(ConstellationFamily::Bpsk),
            FamilyName::Qpsk => Some(ConstellationFamily::Qpsk),
            FamilyName::Qam16 => Some(ConstellationFamily::Qam16),
            FamilyName::Qam64 => Some(ConstellationFamily::Qam64),
            FamilyName::Qam256 => Some(ConstellationFamily::Qam256),
            FamilyName::Custom => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstellationSpec {
    pub family: FamilyName,
    /// Custom joint points, one `n_t`-vector each.
    pub points: Option<Vec<Vec<Num>>>,
}

impl ConstellationSpec {
    pub fn build(&self, n_t: usize, field: &str) -> Result<Constellation> {
        let family = match (self.family.builtin(), &self.points) {
            (Some(f), None) => f,
            (Some(_), Some(_)) => {
                return Err(CliError::config(format!("{field}.points"), "only allowed with family = \"custom\""))
            }
            (None, None) => return Err(CliError::config(format!("{field}.points"), "required for a custom family")),
            (None, Some(p)) => {
                ConstellationFamily::Custom(p.iter().map(|x| x.iter().map(|v| v.value()).collect()).collect())
            }
        };
        make_constellation(family, n_t).field(field)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub snr_db: Option<Vec<f64>>,
    pub start_db: Option<f64>,
    pub stop_db: Option<f64>,
    pub step_db: Option<f64>,
}

impl GridSpec {
    pub fn build(&self) -> Result<SnrGrid> {
        match (&self.snr_db, self.start_db, self.stop_db, self.step_db) {
            (Some(points), None, None, None) => SnrGrid::from_db(points).field("grid.snr_db"),
            (None, Some(a), Some(b), Some(s)) => SnrGrid::from_db_range(a, b, s).field("grid"),
            _ => Err(CliError::config("grid", "give either snr_db or all of start_db, stop_db, step_db")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    pub channel_draws: usize,
    pub noise_draws: usize,
    pub chunks: Option<usize>,
}

impl McSpec {
    pub fn build(&self, seed: u64) -> Result<McConfig> {
        McConfig::new(self.channel_draws, self.noise_draws, seed, self.chunks.unwrap_or(DEFAULT_CHUNKS)).field("mc")
    }
}

// ---------------------------------------------------------------------------
// Command documents
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindName {
    Mi,
    Mmse,
    Pe,
}

impl From<KindName> for Quantity {
    fn from(k: KindName) -> Self {
        match k {
            KindName::Mi => Quantity::Mi,
            KindName::Mmse => Quantity::Mmse,
            KindName::Pe => Quantity::Pe,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveConfig {
    pub kind: KindName,
    pub model: ModelSpec,
    pub constellation: ConstellationSpec,
    pub grid: GridSpec,
    pub mc: McSpec,
    #[serde(default)]
    pub run: RunSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub label: Option<String>,
    pub family: FamilyName,
    pub n_t: usize,
    pub n_r: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OffsetsConfig {
    /// High-snr point where the empirical coefficients are measured.
    pub anchor_db: f64,
    pub mc: McSpec,
    pub system: Vec<SystemSpec>,
    #[serde(default)]
    pub run: RunSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubchannelConfig {
    pub family: FamilyName,
    pub sigma2: f64,
    /// Line-of-sight mean; its presence makes the subchannel Ricean.
    pub mean: Option<Num>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PallocConfig {
    pub budget: f64,
    #[serde(default)]
    pub numeric: bool,
    pub grid: GridSpec,
    pub mc: McSpec,
    pub subchannel: Vec<SubchannelConfig>,
    #[serde(default)]
    pub run: RunSpec,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecodeConfig {
    pub model: ModelSpec,
    pub constellation: ConstellationSpec,
    /// Defaults to n_t.
    pub budget: Option<f64>,
    pub probes: Option<usize>,
    pub grid: Option<GridSpec>,
    pub mc: Option<McSpec>,
    #[serde(default)]
    pub run: RunSpec,
}

impl PrecodeConfig {
    pub fn mc_pair(&self) -> Result<Option<(&GridSpec, &McSpec)>> {
        mc_pair(&self.grid, &self.mc)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub name: String,
    /// Codewords as n_t × t matrices.
    pub codewords: Option<Vec<Vec<Vec<Num>>>>,
    /// Alternatively a single-interval code from a built-in family.
    pub family: Option<FamilyName>,
    pub n_t: Option<usize>,
}

impl CodeSpec {
    pub fn build(&self, index: usize) -> Result<SpaceTimeCode> {
        let field = format!("code[{index}]");
        match (&self.codewords, self.family, self.n_t) {
            (Some(words), None, None) => {
                let mats = words
                    .iter()
                    .enumerate()
                    .map(|(k, w)| matrix(w, &format!("{field}.codewords[{k}]")))
                    .collect::<Result<Vec<_>>>()?;
                SpaceTimeCode::new(mats).field(&field)
            }
            (None, Some(f), Some(n_t)) => {
                let cst = ConstellationSpec { family: f, points: None }.build(n_t, &field)?;
                Ok(SpaceTimeCode::from_constellation(&cst))
            }
            _ => Err(CliError::config(field, "give either codewords or both family and n_t")),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StcodeConfig {
    pub n_r: usize,
    pub code: Vec<CodeSpec>,
    pub grid: Option<GridSpec>,
    pub mc: Option<McSpec>,
    #[serde(default)]
    pub run: RunSpec,
}

impl StcodeConfig {
    pub fn mc_pair(&self) -> Result<Option<(&GridSpec, &McSpec)>> {
        mc_pair(&self.grid, &self.mc)
    }
}

fn mc_pair<'a>(grid: &'a Option<GridSpec>, mc: &'a Option<McSpec>) -> Result<Option<(&'a GridSpec, &'a McSpec)>> {
    match (grid, mc) {
        (None, None) => Ok(None),
        (Some(_), None) => Err(CliError::config("mc", "required when grid is given")),
        (None, Some(_)) => Err(CliError::config("grid", "required when mc is given")),
        (Some(g), Some(m)) => Ok(Some((g, m))),
    }
}

pub fn parse<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    toml::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
}

pub fn seed_for(seed: Option<u64>, command: &str) -> Result<u64> {
    seed.ok_or_else(|| CliError::config("--seed", format!("mandatory for `{command}`")))
}
