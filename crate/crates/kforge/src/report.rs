//! JSON reports. Each embeds the configuration that produced it.

use std::io::Write;
use std::path::Path;

use kforge_core::cantor::{CantorPlan, FractalReport};
use kforge_core::perturbation::CalibrationReport;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::export::MeshStats;
use crate::verify::CheckResult;

/// Pretty JSON with a trailing newline.
pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(Error::io(dir))?;
    }
    let mut text = serde_json::to_vec_pretty(value).map_err(|source| Error::Json {
        path: path.into(),
        source,
    })?;
    text.push(b'\n');
    let mut f = std::fs::File::create(path).map_err(Error::io(path))?;
    f.write_all(&text).map_err(Error::io(path))
}

#[derive(Debug, Clone, Serialize)]
pub struct ProfileReport {
    pub config: RunConfig,
    pub t0: f64,
    pub root_residual: f64,
    pub closure: f64,
    pub samples: usize,
    pub csv: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ImmerseReport {
    pub config: RunConfig,
    pub mesh: MeshStats,
    pub obj: String,
    pub curvature_csv: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbReport {
    pub config: RunConfig,
    pub calibration: CalibrationReport,
    pub centre_rate: f64,
    pub sign_check: f64,
    pub min_h_support: f64,
    pub min_h_global: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CantorReport {
    pub config: RunConfig,
    pub plan: CantorPlan,
    pub calibrations: Vec<CalibrationReport>,
    pub stages: Vec<FractalReport>,
    pub shrinkage_violations: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}
