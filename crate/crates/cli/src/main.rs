use std::path::PathBuf;
use std::process::ExitCode;

use advection_verify_cli::params::{parse_grid, parse_real, parse_real_list, parse_usize_list};
use advection_verify_cli::{
    approximate, default_tolerance, export_grid, export_profile, format_table, list_problems,
    load_problem, run, sweep_initial_error, sweep_residual, write_grid_csv,
    write_initial_sweep_csv, write_profile_csv, write_residual_sweep_csv, Degrees, RunConfig,
};
use anyhow::{bail, Context};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "advec-verify",
    version,
    about = "Verified error bounds for periodic linear advection"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Approximate, verify and tabulate every (t_max, N, n) tuple.
    Verify {
        /// Built-in name or path to a problem TOML file.
        #[arg(long, default_value = "example1")]
        problem: String,
        /// Truncation orders, e.g. `120` or `40,80:120:20`.
        #[arg(long = "N", default_value = "120")]
        truncations: String,
        /// Chebyshev degrees or `auto`.
        #[arg(long = "n", default_value = "auto")]
        degrees: String,
        #[arg(long, default_value = "0.1")]
        t_max: String,
        #[arg(long)]
        tol: Option<String>,
        /// Asserted period of the flow; enables the periodic bound.
        #[arg(long)]
        period: Option<String>,
        /// JSON report file.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Field export `NXxNT`, written next to `--grid-out`.
        #[arg(long)]
        grid: Option<String>,
        #[arg(long)]
        grid_out: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Run file; replaces all of the options above.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Initial-error bound as a function of N.
    SweepInitial {
        #[arg(long, default_value = "example1")]
        problem: String,
        #[arg(long = "N", default_value = "10:250:10")]
        truncations: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Residual bound as a function of n and t_max at fixed N.
    SweepResidual {
        #[arg(long, default_value = "example1")]
        problem: String,
        #[arg(long = "N", default_value_t = 120)]
        truncation: usize,
        #[arg(long = "n", default_value = "10:60:5")]
        degrees: String,
        #[arg(long, default_value = "0.1,0.5,1")]
        t_max: String,
        #[arg(long)]
        tol: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Approximate field on a uniform (x, t) grid.
    ExportGrid {
        #[arg(long, default_value = "example1")]
        problem: String,
        #[arg(long = "N", default_value_t = 120)]
        truncation: usize,
        #[arg(long = "n")]
        degree: Option<usize>,
        #[arg(long, default_value = "1")]
        t_max: String,
        #[arg(long)]
        tol: Option<String>,
        #[arg(long, default_value = "256x101")]
        grid: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// x, c(x), u0(x) on a uniform grid.
    ExportProfile {
        #[arg(long, default_value = "example1")]
        problem: String,
        #[arg(long = "N", default_value_t = 120)]
        truncation: usize,
        #[arg(long, default_value_t = 512)]
        nx: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Names and descriptions of the built-in problems.
    ListProblems,
}

fn tol_or_default(tol: Option<String>) -> anyhow::Result<f64> {
    match tol {
        Some(s) => {
            let v = parse_real(&s)?;
            if v.is_nan() || v <= 0.0 {
                bail!("tol must be positive");
            }
            Ok(v)
        }
        None => Ok(default_tolerance()),
    }
}

fn single_time(s: &str) -> anyhow::Result<f64> {
    let v = parse_real_list(s)?;
    if v.len() != 1 {
        bail!("expected a single t_max");
    }
    Ok(v[0])
}

fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn real_main() -> anyhow::Result<bool> {
    match Cli::parse().cmd {
        Cmd::Verify {
            problem,
            truncations,
            degrees,
            t_max,
            tol,
            period,
            out,
            grid,
            grid_out,
            jobs,
            config,
        } => {
            let cfg = match config {
                Some(path) => RunConfig::from_toml_file(&path)?,
                None => RunConfig {
                    problem,
                    truncations: parse_usize_list(&truncations)?,
                    degrees: Degrees::parse(&degrees)?,
                    t_max: parse_real_list(&t_max)?,
                    tol: tol_or_default(tol)?,
                    period: period.as_deref().map(parse_real).transpose()?,
                    report_path: out,
                    grid: grid.as_deref().map(parse_grid).transpose()?,
                    grid_path: grid_out,
                    jobs,
                },
            };
            let file = run(&cfg)?;
            print!("{}", format_table(&file));
            Ok(file.all_verified())
        }
        Cmd::SweepInitial {
            problem,
            truncations,
            out,
        } => {
            let p = load_problem(&problem)?;
            let rows = sweep_initial_error(&p, &parse_usize_list(&truncations)?)?;
            write_initial_sweep_csv(&rows, &out)?;
            Ok(true)
        }
        Cmd::SweepResidual {
            problem,
            truncation,
            degrees,
            t_max,
            tol,
            out,
        } => {
            let p = load_problem(&problem)?;
            let rows = sweep_residual(
                &p,
                truncation,
                &parse_usize_list(&degrees)?,
                &parse_real_list(&t_max)?,
                tol_or_default(tol)?,
            )?;
            write_residual_sweep_csv(&rows, &out)?;
            Ok(true)
        }
        Cmd::ExportGrid {
            problem,
            truncation,
            degree,
            t_max,
            tol,
            grid,
            out,
        } => {
            let p = load_problem(&problem)?;
            let (nx, nt) = parse_grid(&grid)?;
            let approx = approximate(
                &p,
                truncation,
                degree,
                single_time(&t_max)?,
                tol_or_default(tol)?,
            )?;
            let g = export_grid(&approx, nx, nt);
            write_grid_csv(&g, &out).with_context(|| format!("writing {}", out.display()))?;
            eprintln!(
                "degree {}, max |Im u| = {:.3e}",
                approx.degree, g.imag_defect
            );
            Ok(true)
        }
        Cmd::ExportProfile {
            problem,
            truncation,
            nx,
            out,
        } => {
            let p = load_problem(&problem)?;
            write_profile_csv(&export_profile(&p, truncation, nx)?, &out)?;
            Ok(true)
        }
        Cmd::ListProblems => {
            list_problems(&mut std::io::stdout())?;
            Ok(true)
        }
    }
}
