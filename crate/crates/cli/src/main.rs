use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;

use ptz_coverage::geom2d::{ConvexPolygon, DensityField};
use ptz_coverage::objective::{objective_from_partition, objective_grid_oracle, objective_scanline_oracle};
use ptz_coverage::partition::{compute_partition, PartitionOptions};
use ptz_coverage::sim::{self, check_random, emit_outputs, GradientCheckOptions, Mode, RunLog, Scenario};

#[derive(Parser)]
#[command(name = "ptz-coverage", version, about = "Coverage-quality control for aerial PTZ camera swarms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a scenario and write its artefacts.
    Run {
        scenario: PathBuf,
        #[arg(long, env = "PTZ_COVERAGE_OUT")]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run PTZ and fixed-camera modes from the same initial states.
    Compare {
        scenario: PathBuf,
        #[arg(long, env = "PTZ_COVERAGE_OUT")]
        out: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compare control inputs with finite differences of the objective on
    /// random configurations drawn from the scenario's region and limits.
    CheckGradients {
        scenario: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Print the objective of the initial configuration by every method.
    Oracle {
        scenario: PathBuf,
        #[arg(long, default_value_t = 512)]
        resolution: usize,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Args, Clone, Debug, Default)]
struct Overrides {
    #[arg(long)]
    dt: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Vertices per polygonized guaranteed region.
    #[arg(long)]
    polygonization: Option<usize>,
    /// Boundary quadrature panels per agent.
    #[arg(long)]
    boundary_samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Halve dt within a step until the objective does not decrease.
    #[arg(long)]
    auto_dt: bool,
}

fn load(path: &Path, o: &Overrides) -> Result<Scenario> {
    let mut s = Scenario::load(path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(v) = o.dt {
        s.dt = v;
    }
    if let Some(v) = o.steps {
        if s.snapshots.last() == Some(&s.steps) {
            s.snapshots.pop();
            s.snapshots.push(v);
        }
        s.steps = v;
    }
    if let Some(v) = o.polygonization {
        s.polygonization = v;
    }
    if let Some(v) = o.boundary_samples {
        s.boundary_samples = v;
    }
    if let Some(v) = o.seed {
        s.seed = v;
    }
    s.auto_dt |= o.auto_dt;
    s.validate()?;
    Ok(s)
}

fn report(log: &RunLog) {
    let last = log.final_record();
    println!(
        "{} [{}]: H {} -> {} over {} steps, converged={}, violations={}, max tiling defect={:e}",
        log.scenario,
        log.mode,
        log.records[0].objective.h,
        last.objective.h,
        last.step,
        log.converged(),
        log.monotonicity_violations().len(),
        log.max_tiling_defect()
    );
}

fn run_into(s: &Scenario, mode: Mode, dir: &Path) -> Result<RunLog> {
    let log = sim::run_mode(s, mode)?;
    let files = emit_outputs(&log, dir)?;
    info!("wrote {} files to {}", files.len(), dir.display());
    report(&log);
    Ok(log)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn real_main() -> Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { scenario, out, overrides } => {
            let s = load(&scenario, &overrides)?;
            run_into(&s, s.mode, &out)?;
        }
        Command::Compare { scenario, out, overrides } => {
            let s = load(&scenario, &overrides)?;
            let ptz = run_into(&s, Mode::Ptz, &out.join("ptz"))?;
            let fixed = run_into(&s, Mode::Fixed, &out.join("fixed"))?;
            let (hp, hf) = (ptz.final_record().objective.h, fixed.final_record().objective.h);
            println!("final H: ptz {hp}, fixed {hf}, ratio {}", hp / hf);
        }
        Command::CheckGradients {
            scenario,
            samples,
            overrides,
        } => {
            let s = load(&scenario, &overrides)?;
            let opts = GradientCheckOptions {
                polygonization: s.polygonization.max(GradientCheckOptions::default().polygonization),
                boundary_samples: s.boundary_samples,
                eps_f: s.eps_f,
                ..Default::default()
            };
            let a = &s.agents[0];
            let all = check_random(samples, s.seed, &s.omega, &a.limits, a.initial.r, &s.density, &opts)?;
            let mut failed = 0;
            for (k, checks) in all.iter().enumerate() {
                for c in checks {
                    println!(
                        "sample {k} agent {} {:>5}: analytic {:+.6e} fd {:+.6e} rel {:.2e} {}",
                        c.agent,
                        c.channel,
                        c.analytic,
                        c.finite_difference,
                        c.rel_error(),
                        if c.passed { "ok" } else { "FAIL" }
                    );
                    failed += usize::from(!c.passed);
                }
            }
            println!("{failed} channel(s) outside tolerance");
            if failed > 0 {
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Oracle {
            scenario,
            resolution,
            overrides,
        } => {
            let s = load(&scenario, &overrides)?;
            print_oracles(&s, &s.omega, &s.density, resolution)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_oracles(s: &Scenario, omega: &ConvexPolygon, density: &DensityField, resolution: usize) -> Result<()> {
    let states = s.initial_states();
    let lims = s.limits();
    let opts = PartitionOptions {
        eps_f: s.eps_f,
        polygon_vertices: s.polygonization,
    };
    let p = compute_partition(&states, &lims, omega, &opts)?;
    let h_part = objective_from_partition(&p, density).h;
    let h_grid = objective_grid_oracle(&states, &lims, omega, density, resolution)?;
    let h_scan = objective_scanline_oracle(&states, &lims, omega, density, resolution)?;
    println!("partition ({} vertices): {h_part}", s.polygonization);
    println!("grid oracle ({resolution}x{resolution}): {h_grid}");
    println!("scanline oracle ({resolution} panels): {h_scan}");
    println!("relative difference partition vs grid: {:e}", (h_part - h_grid).abs() / h_grid.abs());
    Ok(())
}
