//! `kforge` subcommands. Exit codes: 0 success, 1 invariant violation or
//! failed run, 2 invalid parameters or usage.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use kforge_core::{GridSpec, ImmersionMap};

use crate::config::RunConfig;
use crate::error::{Result, EXIT_INVALID, EXIT_OK, EXIT_VIOLATION};
use crate::report::{write_json, CantorReport, ImmerseReport, PerturbReport, ProfileReport, VerifyReport};
use crate::{export, pipeline, threads, verify};

#[derive(Debug, Parser)]
#[command(
    name = "kforge",
    version,
    about = "Sphere immersions with prescribed zero Gauss-Kronecker sets"
)]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for outputs given as bare file names.
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the profile system and write it as CSV.
    Profile {
        #[command(flatten)]
        profile: ProfileArgs,
        /// Number of rows, at r = i/samples.
        #[arg(long, default_value_t = 1001)]
        samples: usize,
        #[arg(long, default_value = "profile.csv")]
        out: PathBuf,
        /// Also write a JSON report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Export the base immersion as an OBJ mesh with per-vertex curvature.
    Immerse {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "immersion.obj")]
        out: PathBuf,
        #[arg(long, default_value = "curvature.csv")]
        curvature: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Inflate one geodesic ball and report the calibration.
    Perturb {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        ball: BallArgs,
        #[arg(long, default_value = "perturb.json")]
        out: PathBuf,
        /// Also export the perturbed surface.
        #[arg(long)]
        mesh: Option<PathBuf>,
    },
    /// Plan a Cantor set, compose its inflations and verify the zero set.
    Cantor {
        #[command(flatten)]
        profile: ProfileArgs,
        #[command(flatten)]
        cantor: CantorArgs,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, default_value = "cantor.json")]
        out: PathBuf,
        #[arg(long)]
        mesh: Option<PathBuf>,
    },
    /// Run the invariant suite and write a JSON report.
    Verify {
        #[command(flatten)]
        profile: ProfileArgs,
        /// `all`, or a comma-separated list of check names or numbers.
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value = "verify.json")]
        out: PathBuf,
    },
    /// Write the effective configuration as JSON.
    Config {
        #[command(flatten)]
        profile: ProfileArgs,
        #[arg(long, default_value = "config.json")]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ProfileArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[arg(long)]
    pub nu: Option<usize>,
    #[arg(long)]
    pub nv: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct BallArgs {
    /// Centre angle of the ball on the circle, in radians.
    #[arg(long, allow_hyphen_values = true)]
    pub center: Option<f64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub l0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub sign: Option<f64>,
    #[arg(long)]
    pub t_init: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CantorArgs {
    #[arg(long)]
    pub depth: Option<usize>,
    #[arg(long)]
    pub ratio: Option<f64>,
    #[arg(long)]
    pub delta0: Option<f64>,
    #[arg(long)]
    pub base_arc: Option<f64>,
    #[arg(long)]
    pub upto: Option<usize>,
}

impl ProfileArgs {
    fn apply(&self, c: &mut RunConfig) {
        let p = &mut c.profile;
        set(&mut p.n, self.n);
        set(&mut p.k, self.k);
        set(&mut p.alpha, self.alpha);
        set(&mut p.beta, self.beta);
        set(&mut p.gamma, self.gamma);
        if self.eps.is_some() {
            p.eps = self.eps;
        }
    }
}

impl GridArgs {
    fn apply(&self, c: &mut RunConfig) {
        set(&mut c.grid.nu, self.nu);
        set(&mut c.grid.nv, self.nv);
    }
}

impl BallArgs {
    fn apply(&self, c: &mut RunConfig) {
        let p = &mut c.perturbation;
        set(&mut p.center, self.center);
        set(&mut p.radius, self.radius);
        set(&mut p.l0, self.l0);
        set(&mut p.sign, self.sign);
        if self.t_init.is_some() {
            p.t_init = self.t_init;
        }
    }
}

impl CantorArgs {
    fn apply(&self, c: &mut RunConfig) {
        let k = &mut c.cantor;
        set(&mut k.depth, self.depth);
        set(&mut k.ratio, self.ratio);
        set(&mut k.delta0, self.delta0);
        if self.base_arc.is_some() {
            k.base_arc = self.base_arc;
        }
        if self.upto.is_some() {
            k.upto = self.upto;
        }
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INVALID,
            };
        }
    };
    threads::init_from_env();
    match execute(&cli) {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_VIOLATION,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut c = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = &cli.out_dir {
        c.output.dir = dir.clone();
    }
    Ok(c)
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

/// Runs the parsed command; `Ok(false)` means a check failed.
pub fn execute(cli: &Cli) -> Result<bool> {
    let mut config = load_config(cli)?;
    match &cli.command {
        Command::Profile {
            profile,
            samples,
            out,
            report,
        } => {
            profile.apply(&mut config);
            config.validate()?;
            let sol = pipeline::solve(&config)?;
            let csv = config.resolve(out);
            export::write_profile_csv(&sol, *samples, &csv)?;
            println!(
                "t0 = {:.12}  G(t0) = {:.3e}  rows = {samples}  -> {}",
                sol.t0,
                sol.root_residual,
                display(&csv)
            );
            if let Some(path) = report {
                let rep = ProfileReport {
                    config: config.clone(),
                    t0: sol.t0,
                    root_residual: sol.root_residual,
                    closure: sol.closure,
                    samples: *samples,
                    csv: display(&csv),
                };
                write_json(&config.resolve(path), &rep)?;
            }
            Ok(true)
        }
        Command::Immerse {
            profile,
            grid,
            out,
            curvature,
            report,
        } => {
            profile.apply(&mut config);
            grid.apply(&mut config);
            config.validate()?;
            let sol = pipeline::solve(&config)?;
            let m = ImmersionMap::from_shared(sol);
            let g = GridSpec::whole(config.grid.nu, config.grid.nv);
            let (obj, csv) = (config.resolve(out), config.resolve(curvature));
            let stats = export::export_obj(&m, &g, &obj, &csv)?;
            println!(
                "{} vertices, {} faces, H in [{:.3e}, {:.3e}] -> {}",
                stats.vertices,
                stats.faces,
                stats.min_h,
                stats.max_h,
                display(&obj)
            );
            if let Some(path) = report {
                let rep = ImmerseReport {
                    config: config.clone(),
                    mesh: stats,
                    obj: display(&obj),
                    curvature_csv: display(&csv),
                };
                write_json(&config.resolve(path), &rep)?;
            }
            Ok(stats.min_h >= -config.tolerances.zero)
        }
        Command::Perturb {
            profile,
            ball,
            out,
            mesh,
        } => {
            profile.apply(&mut config);
            ball.apply(&mut config);
            config.validate()?;
            let sol = pipeline::solve(&config)?;
            let o = pipeline::perturb(&config, sol)?;
            let passed = o.sign_check == 1.0
                && o.calibration.min_h_target > 0.0
                && o.min_h_global >= -1e-12
                && o.changed_outside == 0;
            println!(
                "t = {:e} after {} halvings; min H: target {:.3e}, global {:.3e}",
                o.calibration.t, o.calibration.halvings, o.calibration.min_h_target, o.min_h_global
            );
            if let Some(path) = mesh {
                let obj = config.resolve(path);
                let g = GridSpec::whole(config.grid.nu.min(512), config.grid.nv);
                export::export_obj(&o.map, &g, &obj, &obj.with_extension("csv"))?;
            }
            let rep = PerturbReport {
                config: config.clone(),
                calibration: o.calibration,
                centre_rate: o.centre_rate,
                sign_check: o.sign_check,
                min_h_support: o.min_h_support,
                min_h_global: o.min_h_global,
                passed,
            };
            write_json(&config.resolve(out), &rep)?;
            Ok(passed)
        }
        Command::Cantor {
            profile,
            cantor,
            grid,
            out,
            mesh,
        } => {
            profile.apply(&mut config);
            cantor.apply(&mut config);
            grid.apply(&mut config);
            config.validate()?;
            let sol = pipeline::solve(&config)?;
            let o = pipeline::cantor(&config, sol)?;
            let passed = o.passed(config.tolerances.hausdorff_cells);
            for s in &o.stages {
                println!(
                    "upto {:>2}: zero points {:>7} (expected {:>7}), negatives {}, hausdorff {:.3} cells",
                    s.upto, s.zero_points, s.expected_zero_points, s.negative_points, s.hausdorff_cells
                );
            }
            if let Some(path) = mesh {
                let obj = config.resolve(path);
                let g = GridSpec::whole(config.grid.nu, config.grid.nv);
                export::export_obj(&o.composition.map, &g, &obj, &obj.with_extension("csv"))?;
            }
            let rep = CantorReport {
                config: config.clone(),
                plan: o.plan.clone(),
                calibrations: o.composition.reports.clone(),
                stages: o.stages.clone(),
                shrinkage_violations: o.shrinkage_violations,
                passed,
            };
            write_json(&config.resolve(out), &rep)?;
            Ok(passed)
        }
        Command::Verify { profile, suite, out } => {
            profile.apply(&mut config);
            config.validate()?;
            let ids = verify::select(suite)?;
            let checks = verify::run(&config, &ids)?;
            for c in &checks {
                println!(
                    "{} {} ({:.1} s): {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.seconds,
                    c.metrics
                );
            }
            let passed = checks.iter().all(|c| c.passed);
            let rep = VerifyReport {
                config: config.clone(),
                suite: suite.clone(),
                checks,
                passed,
            };
            write_json(&config.resolve(out), &rep)?;
            Ok(passed)
        }
        Command::Config { profile, out } => {
            profile.apply(&mut config);
            config.validate()?;
            config.save(&config.resolve(out))?;
            Ok(true)
        }
    }
}
