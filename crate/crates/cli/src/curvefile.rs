//! Curve files.
//!
//! ```toml
//! schema_version = 1
//! surface = { genus = 1, punctures = 1 }
//! slope = [1, 0]        # or: name = "alpha1", or: coords = [0, 1, 1]
//! ```
//!
//! `coords` are normal coordinates on the standard triangulation of the
//! surface, in edge order. `name` refers to the standard registry. `slope`
//! is only available on the once-punctured torus, where `[p, q]` is the
//! straight line of direction (p, q) in the square model whose horizontal,
//! vertical and diagonal sides are edges 0, 1 and 2.

use std::path::Path;

use arcmodel::curve::NormalMultiCurve;
use arcmodel::registry::standard_registry;
use arcmodel::surface::{build_standard_triangulation, SurfaceType, Triangulation};
use serde::Deserialize;

use crate::manifest::SCHEMA_VERSION;
use crate::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveFile {
    pub schema_version: u32,
    pub surface: SurfaceType,
    #[serde(default)]
    pub coords: Option<Vec<u32>>,
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub slope: Option<[i64; 2]>,
}

impl CurveFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let origin = path.display().to_string();
        let c: CurveFile =
            toml::from_str(&text).map_err(|e| CliError::Schema { path: origin.clone(), message: e.to_string() })?;
        if c.schema_version != SCHEMA_VERSION {
            return Err(CliError::Schema {
                path: origin,
                message: format!("schema_version {} is not supported (expected {SCHEMA_VERSION})", c.schema_version),
            });
        }
        let given = [c.coords.is_some(), c.name.is_some(), c.slope.is_some()].iter().filter(|b| **b).count();
        if given != 1 {
            return Err(CliError::Schema {
                path: origin,
                message: "exactly one of `coords`, `name` and `slope` is required".into(),
            });
        }
        Ok(c)
    }

    /// The curve on the standard triangulation of its surface.
    pub fn curve(&self, t: &Triangulation) -> Result<NormalMultiCurve, CliError> {
        if t.surface() != self.surface {
            return Err(CliError::SurfaceMismatch);
        }
        if let Some(c) = &self.coords {
            return Ok(NormalMultiCurve::new(t, c.clone())?);
        }
        if let Some(n) = &self.name {
            return Ok(standard_registry(t)?.get(n)?.clone());
        }
        let [p, q] = self.slope.expect("checked on load");
        if self.surface != SurfaceType::new(1, 1, 0) {
            return Err(CliError::Usage("`slope` is only defined on the once-punctured torus".into()));
        }
        if p == 0 && q == 0 {
            return Err(CliError::Usage("slope [0, 0] is not a curve".into()));
        }
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        let c = [q.unsigned_abs(), p.unsigned_abs(), (q - p).unsigned_abs()];
        Ok(NormalMultiCurve::new(t, c.iter().map(|&x| x as u32).collect())?)
    }

    pub fn triangulation(&self) -> Result<Triangulation, CliError> {
        Ok(build_standard_triangulation(self.surface)?)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}
