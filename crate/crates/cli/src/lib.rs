//! Batch front-end: manifest-driven builds, analyses and exports with a
//! content-addressed cache.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

pub mod cache;
pub mod commands;
pub mod curvefile;
pub mod manifest;

pub use cache::{Cache, CACHE_DIR_VAR, DEFAULT_CACHE_DIR};
pub use manifest::Manifest;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Schema { path: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Core(#[from] arcmodel::Error),
    #[error("no graph artifact for key {0}; run `arcmodel build` first")]
    MissingArtifact(String),
    #[error("curves live on different surfaces")]
    SurfaceMismatch,
    #[error("unknown witness `{0}`")]
    UnknownWitness(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), message: e.to_string() }
    }
}

#[derive(Debug, Parser)]
#[command(name = "arcmodel", version, about = "Orbit-ball models of curve collections under twist generators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build the orbit ball described by a manifest.
    Build {
        #[command(flatten)]
        common: Common,
        /// Write only this graph format.
        #[arg(long)]
        format: Option<String>,
    },
    /// Run the manifest's analysis plan on a built graph.
    Analyze {
        #[command(flatten)]
        common: Common,
        /// Seed for sampled diagnostics.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the geometric intersection number of two curve files.
    Intersect { a: PathBuf, b: PathBuf },
    /// Print the projection of curve files into a witness of the manifest.
    Project {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        witness: String,
        #[arg(required = true)]
        curves: Vec<PathBuf>,
    },
    /// Print a built graph in another format.
    Export {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "dot")]
        format: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long)]
    pub manifest: PathBuf,
    /// Override `build.radius`.
    #[arg(long)]
    pub radius: Option<u64>,
    /// Override `build.stab_depth`.
    #[arg(long)]
    pub stab_depth: Option<usize>,
    /// Give every generator length 1.
    #[arg(long)]
    pub uniform_weights: bool,
    #[arg(long, env = CACHE_DIR_VAR, default_value = DEFAULT_CACHE_DIR)]
    pub cache_dir: PathBuf,
    /// Override `output.dir`.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
}

impl Common {
    /// The manifest with command-line overrides applied.
    pub fn manifest(&self) -> Result<Manifest, CliError> {
        let mut m = Manifest::load(&self.manifest)?;
        if let Some(r) = self.radius {
            m.build.radius = r;
        }
        if let Some(l) = self.stab_depth {
            m.build.stab_depth = l;
        }
        if self.uniform_weights {
            m.generators.uniform_weights = true;
        }
        if let Some(d) = &self.out_dir {
            m.output.dir = d.clone();
        }
        Ok(m)
    }

    pub fn cache(&self) -> Cache {
        Cache::new(&self.cache_dir)
    }
}

/// Runs the command line and returns the process exit code. Data goes to
/// `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(err, "{e}");
                2
            } else {
                let _ = write!(out, "{e}");
                0
            };
            return code;
        }
    };
    let mut buf = Vec::new();
    match commands::dispatch(cli.command, &mut buf, err) {
        Ok(()) => {
            let _ = out.write_all(&buf);
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}
