//! Manifest schema.
//!
//! A manifest is a TOML document:
//!
//! ```toml
//! schema_version = 1
//!
//! [exhaustion]
//! genera = [2, 3]                 # genus of each level, strictly increasing
//! delta = { boundary = ["delta1"], inside = ["alpha1"] }
//!
//! [base]
//! level = 0                       # index of the level the ball is built on
//! candidates = [["alpha1", "beta1"]]
//!
//! [generators]
//! filter = ["alpha1", "beta1"]    # optional; default is every enumerated twist
//! uniform_weights = false         # every generator gets length 1
//!
//! [build]
//! radius = 10
//! stab_depth = 2
//!
//! [analysis]
//! reports = ["witnesses", "asdim", "cocompactness", "section", "qi-fit", "distance-fit", "dimension"]
//! witnesses = [{ name = "T1", boundary = ["hole1"], inside = ["alpha1"] }]
//! charts = [{ witness = "T1", alpha = "alpha1", beta = "beta1" }]
//! distance_fit = { threshold = 2, samples = 2000 }
//! scales = [1, 2]
//!
//! [output]
//! dir = "out/genus2"
//! formats = ["dot", "csv", "text"]
//! ```
//!
//! Curve names refer to the standard registry of the build level. A
//! witness with empty `boundary` and `inside` is the whole surface.

use std::path::{Path, PathBuf};

use arcmodel::model::{DeltaDecl, ExportFormat};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Manifest {
    pub schema_version: u32,
    pub exhaustion: ExhaustionDecl,
    pub base: BaseDecl,
    #[serde(default)]
    pub generators: GeneratorDecl,
    pub build: BuildDecl,
    #[serde(default)]
    pub analysis: AnalysisPlan,
    #[serde(default)]
    pub output: OutputDecl,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustionDecl {
    pub genera: Vec<u32>,
    pub delta: DeltaDecl,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BaseDecl {
    #[serde(default)]
    pub level: usize,
    pub candidates: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorDecl {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub filter: Option<Vec<String>>,
    #[serde(default)]
    pub uniform_weights: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuildDecl {
    pub radius: u64,
    #[serde(default)]
    pub stab_depth: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReportKind {
    Witnesses,
    Asdim,
    Cocompactness,
    Section,
    QiFit,
    DistanceFit,
    Dimension,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDecl {
    pub name: String,
    #[serde(default)]
    pub boundary: Vec<String>,
    #[serde(default)]
    pub inside: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartDecl {
    pub witness: String,
    pub alpha: String,
    pub beta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitDecl {
    #[serde(default = "default_threshold")]
    pub threshold: u64,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_threshold() -> u64 {
    2
}

fn default_samples() -> usize {
    2000
}

impl Default for FitDecl {
    fn default() -> Self {
        FitDecl { threshold: default_threshold(), samples: default_samples() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisPlan {
    #[serde(default)]
    pub reports: Vec<ReportKind>,
    #[serde(default)]
    pub witnesses: Vec<WitnessDecl>,
    #[serde(default)]
    pub charts: Vec<ChartDecl>,
    #[serde(default)]
    pub distance_fit: FitDecl,
    #[serde(default)]
    pub scales: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FormatName {
    Dot,
    Csv,
    Text,
}

impl From<FormatName> for ExportFormat {
    fn from(f: FormatName) -> Self {
        match f {
            FormatName::Dot => ExportFormat::Dot,
            FormatName::Csv => ExportFormat::EdgeCsv,
            FormatName::Text => ExportFormat::Text,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputDecl {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default = "default_formats")]
    pub formats: Vec<FormatName>,
}

fn default_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_formats() -> Vec<FormatName> {
    vec![FormatName::Dot, FormatName::Csv, FormatName::Text]
}

impl Default for OutputDecl {
    fn default() -> Self {
        OutputDecl { dir: default_dir(), formats: default_formats() }
    }
}

impl Manifest {
    pub fn parse(text: &str, origin: &str) -> Result<Self, CliError> {
        let m: Manifest =
            toml::from_str(text).map_err(|e| CliError::Schema { path: origin.to_string(), message: e.to_string() })?;
        if m.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema {
                path: origin.to_string(),
                message: format!("schema_version {} is not supported (expected {SCHEMA_VERSION})", m.schema_version),
            });
        }
        Ok(m)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// Canonical text of the fields that determine the graph artifact.
    pub fn build_section(&self) -> String {
        #[derive(Serialize)]
        struct Key<'a> {
            schema_version: u32,
            exhaustion: &'a ExhaustionDecl,
            base: &'a BaseDecl,
            generators: &'a GeneratorDecl,
            build: &'a BuildDecl,
        }
        toml::to_string(&Key {
            schema_version: self.schema_version,
            exhaustion: &self.exhaustion,
            base: &self.base,
            generators: &self.generators,
            build: &self.build,
        })
        .expect("manifest serializes")
    }

    /// Cache key of the graph artifact: the canonical build fields and the
    /// code version. Output paths and the analysis plan do not enter it.
    pub fn build_key(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.build_section().as_bytes());
        h.update(b"\0");
        h.update(env!("CARGO_PKG_VERSION").as_bytes());
        hex::encode(&h.finalize()[..16])
    }
}
