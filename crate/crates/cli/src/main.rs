//! `memfsi`: command-line driver for the membrane FSI workflows.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use log::{info, warn};
use membrane_fsi::bench::{
    self, hausdorff_distance, max_stable_dt_search, read_contour_file, write_area_series, write_contour_csv,
    write_dt_table, write_file, CaseConfig, DtTableRow,
};
use membrane_fsi::ns_solver::SchemeMode;
use membrane_fsi::stability1d;
use membrane_fsi::verification::{convergence_orders, default_ms_solver, solve_ms, write_convergence_csv, DEFAULT_MESHES};
use membrane_fsi::FsiError;
use rayon::prelude::*;

#[derive(Parser, Debug)]
#[command(name = "memfsi", version, about = "Eulerian membrane FSI: stability analysis, verification and shear-flow runs")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Case configuration file (`key = value`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Override a config key, e.g. `--set dt=5e-3`. Repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Worker threads for independent runs.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Only print errors.
    #[arg(short, long, global = true)]
    quiet: bool,
    /// More logging (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Spectral radii of the 1D model and explicit-bound classification.
    Stability1d {
        /// Parameter preset: `default` or `lattice`.
        #[arg(long, default_value = "default")]
        sweep: String,
        /// Number of wavenumbers per tuple.
        #[arg(long, default_value_t = 256)]
        n_theta: usize,
        /// Also march the explicit scheme at 0.7× and 1.5× the bound on the lattice.
        #[arg(long)]
        classify: bool,
        /// Marching horizon in steps.
        #[arg(long, default_value_t = 500)]
        horizon: usize,
    },
    /// Manufactured-solution convergence study.
    MsConvergence {
        /// Comma-separated mesh sizes.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_MESHES)]
        meshes: Vec<usize>,
    },
    /// One shear-flow run with contour and area output.
    Shear,
    /// Largest stable step by bisection for both couplings.
    DtSearch {
        /// Capillary numbers to search (defaults to the config's).
        #[arg(long, value_delimiter = ',')]
        ca: Vec<f64>,
        /// Explicit bracket `lo,hi`.
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.005, 0.2])]
        ex_bracket: Vec<f64>,
        /// Semi-implicit bracket `lo,hi`.
        #[arg(long, value_delimiter = ',', num_args = 2, default_values_t = [0.02, 0.6])]
        si_bracket: Vec<f64>,
        /// Relative bracket width at which bisection stops.
        #[arg(long, default_value_t = 0.1)]
        rel_tol: f64,
    },
    /// Area, size and Hausdorff distance of contour CSV files.
    Contour {
        /// Contour CSV (`x,y`).
        input: PathBuf,
        /// Optional second contour to compare with.
        reference: Option<PathBuf>,
    },
}

/// Failure classes mapped to exit codes.
enum Failure {
    Numerical(anyhow::Error),
    Config(anyhow::Error),
}

impl From<FsiError> for Failure {
    fn from(e: FsiError) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.into())
        } else {
            Failure::Config(e.into())
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast_ref::<FsiError>() {
            Some(f) if f.is_numerical() => Failure::Numerical(e),
            _ => Failure::Config(e),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match (cli.common.quiet, cli.common.verbose) {
        (true, _) => log::LevelFilter::Error,
        (false, 0) => log::LevelFilter::Warn,
        (false, 1) => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).format_timestamp(None).init();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Numerical(e)) => {
            eprintln!("numerical failure: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Config(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: &Cli) -> Outcome {
    let c = &cli.common;
    if c.threads == 0 {
        return Err(Failure::Config(anyhow::anyhow!("--threads must be at least 1")));
    }
    rayon::ThreadPoolBuilder::new().num_threads(c.threads).build_global().context("thread pool")?;
    fs::create_dir_all(&c.out).with_context(|| format!("creating {}", c.out.display()))?;
    match &cli.command {
        Command::Stability1d { sweep, n_theta, classify, horizon } => {
            no_case_config(c, "stability1d")?;
            run_stability1d(&c.out, sweep, *n_theta, *classify, *horizon)
        }
        Command::MsConvergence { meshes } => {
            no_case_config(c, "ms-convergence")?;
            run_ms(&c.out, meshes)
        }
        Command::Shear => run_shear(&c.out, &load_case(c)?),
        Command::DtSearch { ca, ex_bracket, si_bracket, rel_tol } => {
            run_dt_search(&c.out, &load_case(c)?, ca, [ex_bracket[0], ex_bracket[1]], [si_bracket[0], si_bracket[1]], *rel_tol)
        }
        Command::Contour { input, reference } => {
            no_case_config(c, "contour")?;
            run_contour(&c.out, input, reference.as_deref())
        }
    }
}

fn no_case_config(c: &Common, cmd: &str) -> Outcome {
    if c.config.is_some() || !c.overrides.is_empty() {
        return Err(Failure::Config(anyhow::anyhow!("`{cmd}` does not take --config or --set")));
    }
    Ok(())
}

fn load_case(c: &Common) -> std::result::Result<CaseConfig, Failure> {
    let mut cfg = match &c.config {
        Some(p) => CaseConfig::load(p)?,
        None => CaseConfig::default(),
    };
    for kv in &c.overrides {
        cfg.apply_override(kv)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write_effective(out: &Path, text: &str) -> Outcome {
    fs::write(out.join("effective.cfg"), text).context("writing effective.cfg")?;
    Ok(())
}

fn run_stability1d(out: &Path, sweep: &str, n_theta: usize, classify: bool, horizon: usize) -> Outcome {
    write_effective(
        out,
        &format!("# memfsi stability1d\nsweep = {sweep}\nn_theta = {n_theta}\nclassify = {classify}\nhorizon = {horizon}\n"),
    )?;
    let params = stability1d::sweep_preset(sweep)?;
    let rows = stability1d::run_spectral_sweep(&params, n_theta)?;
    write_file(&out.join("spectral_sweep.csv"), |w| stability1d::write_sweep_csv(w, &rows))?;
    let rho_max = rows.iter().map(|r| r.rho_semi_implicit).fold(0.0, f64::max);
    println!("semi-implicit sweep: {} rows, max spectral radius {}", rows.len(), bench::fmt17(rho_max));
    if classify {
        let lattice = stability1d::bound_lattice();
        let checks: Vec<_> = [0.7, 1.5]
            .par_iter()
            .map(|&f| stability1d::check_explicit_bound(&lattice, f, horizon))
            .collect::<membrane_fsi::Result<Vec<_>>>()?
            .concat();
        write_file(&out.join("explicit_bound.csv"), |w| stability1d::write_bound_csv(w, &checks))?;
        for f in [0.7, 1.5] {
            let stable = checks.iter().filter(|c| c.factor == f && c.stability == stability1d::Stability::Stable).count();
            println!("explicit at {f}x bound: {stable}/{} stable", lattice.len());
        }
    }
    Ok(())
}

fn run_ms(out: &Path, meshes: &[usize]) -> Outcome {
    let list: Vec<String> = meshes.iter().map(usize::to_string).collect();
    write_effective(out, &format!("# memfsi ms-convergence\nmeshes = {}\n", list.join(",")))?;
    let opts = default_ms_solver();
    let results = meshes
        .par_iter()
        .map(|&n| {
            info!("manufactured solution on {n}x{n}");
            solve_ms::<f64>(n, &opts)
        })
        .collect::<membrane_fsi::Result<Vec<_>>>()?;
    write_file(&out.join("grid_conv_validation.csv"), |w| write_convergence_csv(w, &results))?;
    let errors: Vec<f64> = results.iter().map(|r| r.error).collect();
    for r in &results {
        println!("n={} dx={} error={} iterations={}", r.n, bench::fmt17(r.dx), bench::fmt17(r.error), r.stats.iterations);
    }
    if meshes.len() >= 2 {
        let orders = convergence_orders(&errors, meshes)?;
        let text: Vec<String> = orders.iter().map(|o| format!("{o:.4}")).collect();
        println!("observed orders: {}", text.join(" "));
    }
    Ok(())
}

fn run_shear(out: &Path, cfg: &CaseConfig) -> Outcome {
    write_effective(out, &cfg.to_config_string())?;
    let mut log_file = fs::File::create(out.join("diagnostics.log")).context("creating diagnostics.log")?;
    let mut log_err = None;
    let report = bench::run_with::<f64>(cfg, |r| {
        if let Err(e) = writeln!(log_file, "{r}") {
            log_err.get_or_insert(e);
        }
    });
    if let Some(e) = log_err {
        return Err(Failure::Config(anyhow::Error::new(e).context("writing diagnostics.log")));
    }
    let report = report?;
    write_file(&out.join("contour_init.csv"), |w| write_contour_csv(w, &report.initial_contour))?;
    write_file(&out.join("contour_final.csv"), |w| write_contour_csv(w, &report.final_contour))?;
    for (t, c) in report.snapshots.iter().skip(1) {
        write_file(&out.join(format!("contour_t{t:.4}.csv")), |w| write_contour_csv(w, c))?;
    }
    write_file(&out.join("area.csv"), |w| write_area_series(w, &report.areas))?;
    println!(
        "{} steps to t={} area drift={} max|u|={}",
        report.steps,
        bench::fmt17(report.final_time),
        bench::fmt17(report.max_area_drift()),
        bench::fmt17(report.final_max_speed)
    );
    Ok(())
}

fn run_dt_search(out: &Path, cfg: &CaseConfig, ca: &[f64], ex: [f64; 2], si: [f64; 2], rel_tol: f64) -> Outcome {
    write_effective(out, &cfg.to_config_string())?;
    let cas = if ca.is_empty() { vec![cfg.ca] } else { ca.to_vec() };
    let jobs: Vec<(f64, SchemeMode, [f64; 2])> = cas
        .iter()
        .flat_map(|&c| [(c, SchemeMode::Explicit, ex), (c, SchemeMode::SemiImplicit, si)])
        .collect();
    let found = jobs
        .par_iter()
        .map(|&(c, scheme, [lo, hi])| {
            let mut case = cfg.clone();
            case.ca = c;
            let s = max_stable_dt_search(&case, scheme, lo, hi, rel_tol)?;
            info!("Ca={c} {scheme}: max dt {} ({} runs)", s.max_dt, s.probes.len());
            Ok(s.max_dt)
        })
        .collect::<membrane_fsi::Result<Vec<f64>>>()?;
    let rows: Vec<DtTableRow> = cas
        .iter()
        .enumerate()
        .map(|(k, &c)| DtTableRow { nx: cfg.nx, ny: cfg.ny, ca: c, explicit: found[2 * k], semi_implicit: found[2 * k + 1] })
        .collect();
    write_file(&out.join("dt_table.csv"), |w| write_dt_table(w, &rows))?;
    for r in &rows {
        println!("{}x{} Ca={} EX={} SI={} ratio={:.3}", r.nx, r.ny, r.ca, r.explicit, r.semi_implicit, r.ratio());
        if let Some((rex, rsi)) = bench::reference_max_dt(r.nx, r.ny, r.ca) {
            println!("  reference EX={rex} SI={rsi}");
        }
    }
    Ok(())
}

fn run_contour(out: &Path, input: &Path, reference: Option<&Path>) -> Outcome {
    let mut echo = format!("# memfsi contour\ninput = {}\n", input.display());
    if let Some(r) = reference {
        echo.push_str(&format!("reference = {}\n", r.display()));
    }
    write_effective(out, &echo)?;
    let a = read_contour_file(input)?;
    let mut summary = String::from("file,vertices,area,hausdorff\n");
    let hd = match reference {
        Some(r) => {
            let b = read_contour_file(r)?;
            summary.push_str(&format!("{},{},{},\n", r.display(), b.points.len(), bench::fmt17(b.enclosed_area)));
            Some(hausdorff_distance(&a, &b))
        }
        None => None,
    };
    let hd_text = hd.map(bench::fmt17).unwrap_or_default();
    summary.insert_str(
        "file,vertices,area,hausdorff\n".len(),
        &format!("{},{},{},{hd_text}\n", input.display(), a.points.len(), bench::fmt17(a.enclosed_area)),
    );
    fs::write(out.join("contour_summary.csv"), &summary).context("writing contour_summary.csv")?;
    print!("{summary}");
    if a.points.len() < 3 {
        warn!("{} has fewer than three vertices", input.display());
    }
    Ok(())
}
