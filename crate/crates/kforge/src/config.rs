//! Run configuration, read from and written to JSON.

use std::fs;
use std::path::{Path, PathBuf};

use kforge_core::cantor::{plan_cantor, plan_cantor_on_arc, CantorPlan, ComposeOptions};
use kforge_core::perturbation::DEFAULT_DELTA0;
use kforge_core::ProfileParams;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Profile inputs. Unset optional fields take their defaults relative to
/// the given `α`, `β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileConfig {
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub eps: Option<f64>,
    pub alpha_tilde: Option<f64>,
    pub beta_tilde: Option<f64>,
    pub blend_width: Option<f64>,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        ProfileConfig {
            n: 2,
            k: 1,
            alpha: 0.2,
            beta: 0.5,
            gamma: 0.7,
            eps: None,
            alpha_tilde: None,
            beta_tilde: None,
            blend_width: None,
        }
    }
}

impl ProfileConfig {
    pub fn params(&self) -> ProfileParams {
        let mut p = ProfileParams::new(self.n, self.k, self.alpha, self.beta, self.gamma);
        if let Some(e) = self.eps {
            p.eps = e;
        }
        if let Some(a) = self.alpha_tilde {
            p.alpha_tilde = a;
        }
        if let Some(b) = self.beta_tilde {
            p.beta_tilde = b;
        }
        if let Some(w) = self.blend_width {
            p.blend_width = w;
        }
        p
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CantorConfig {
    pub depth: usize,
    pub ratio: f64,
    pub delta0: f64,
    /// Arc the construction runs in; `2π - 2δ₀` when unset.
    pub base_arc: Option<f64>,
    /// Number of balls to compose; all of them when unset.
    pub upto: Option<usize>,
}

impl Default for CantorConfig {
    fn default() -> Self {
        CantorConfig {
            depth: 3,
            ratio: 0.05,
            delta0: DEFAULT_DELTA0,
            base_arc: None,
            upto: None,
        }
    }
}

impl CantorConfig {
    pub fn plan(&self) -> Result<CantorPlan> {
        Ok(match self.base_arc {
            Some(arc) => plan_cantor_on_arc(2, self.depth, self.ratio, self.delta0, arc)?,
            None => plan_cantor(2, self.depth, self.ratio, self.delta0)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerturbationConfig {
    pub l0: f64,
    /// `α₀ = α + fraction·(β - α)`.
    pub alpha0_fraction: f64,
    /// First trial time; `0.1/l₀` when unset.
    pub t_init: Option<f64>,
    pub sign: f64,
    /// Centre angle and radius of the single-ball run.
    pub center: f64,
    pub radius: f64,
    pub calibration_grid: [usize; 2],
}

impl Default for PerturbationConfig {
    fn default() -> Self {
        PerturbationConfig {
            l0: 1.0,
            alpha0_fraction: 0.25,
            t_init: None,
            sign: 1.0,
            center: 0.0,
            radius: DEFAULT_DELTA0,
            calibration_grid: [96, 96],
        }
    }
}

impl PerturbationConfig {
    pub fn compose_options(&self) -> ComposeOptions {
        ComposeOptions {
            l0: self.l0,
            alpha0_fraction: self.alpha0_fraction,
            sign: self.sign,
            t_init: self.t_init,
            calibration_grid: (self.calibration_grid[0], self.calibration_grid[1]),
        }
    }

    pub fn alpha0(&self, p: &ProfileParams) -> f64 {
        p.alpha + self.alpha0_fraction * (p.beta - p.alpha)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// `|H_n| ≤ zero` counts as zero curvature.
    pub zero: f64,
    pub fd_relative: f64,
    pub fd_absolute: f64,
    pub rate_relative: f64,
    /// Allowed one-sided Hausdorff distance of the zero set, in grid cells.
    pub hausdorff_cells: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            zero: 1e-10,
            fd_relative: 1e-5,
            fd_absolute: 1e-7,
            rate_relative: 1e-4,
            hausdorff_cells: 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub nu: usize,
    pub nv: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig { nu: 1024, nv: 256 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig {
            dir: PathBuf::from("."),
        }
    }
}

/// Everything a run depends on; embedded in every report.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub profile: ProfileConfig,
    pub cantor: CantorConfig,
    pub perturbation: PerturbationConfig,
    pub tolerances: Tolerances,
    pub grid: GridConfig,
    pub output: OutputConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = fs::read_to_string(path).map_err(Error::io(path))?;
        serde_json::from_str(&text).map_err(|source| Error::Json {
            path: path.into(),
            source,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        crate::report::write_json(path, self)
    }

    /// Checks the numeric inputs without touching the file system.
    pub fn validate(&self) -> Result<()> {
        self.profile.params().validate()?;
        let p = &self.perturbation;
        if !(p.l0 > 0.0 && p.l0.is_finite()) {
            return Err(Error::Config(format!("perturbation.l0 = {} must be > 0", p.l0)));
        }
        if !(p.alpha0_fraction > 0.0 && p.alpha0_fraction < 1.0) {
            return Err(Error::Config(format!(
                "perturbation.alpha0_fraction = {} outside (0, 1)",
                p.alpha0_fraction
            )));
        }
        if p.sign != 1.0 && p.sign != -1.0 {
            return Err(Error::Config(format!("perturbation.sign = {} must be ±1", p.sign)));
        }
        if let Some(t) = p.t_init {
            if !(t > 0.0) {
                return Err(Error::Config(format!("perturbation.t_init = {t} must be > 0")));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("zero", t.zero),
            ("fd_relative", t.fd_relative),
            ("fd_absolute", t.fd_absolute),
            ("rate_relative", t.rate_relative),
            ("hausdorff_cells", t.hausdorff_cells),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("tolerances.{name} = {v} must be > 0")));
            }
        }
        if self.grid.nu < 8 || self.grid.nv < 8 {
            return Err(Error::Config(format!("grid {}×{} below 8", self.grid.nu, self.grid.nv)));
        }
        Ok(())
    }

    /// Creates the output directory and checks that it accepts files.
    pub fn prepare_output(&self) -> Result<PathBuf> {
        let dir = &self.output.dir;
        fs::create_dir_all(dir).map_err(Error::io(dir))?;
        let probe = dir.join(".kforge-write-test");
        fs::write(&probe, b"").map_err(Error::io(&probe))?;
        fs::remove_file(&probe).map_err(Error::io(&probe))?;
        Ok(dir.clone())
    }

    /// `path` as given if absolute or explicitly relative, else inside the output directory.
    pub fn resolve(&self, path: &Path) -> PathBuf {
        if path.is_absolute() || path.parent().is_some_and(|p| !p.as_os_str().is_empty()) {
            path.to_path_buf()
        } else {
            self.output.dir.join(path)
        }
    }
}
