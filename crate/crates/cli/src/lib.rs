//! Front end for `advection-verify`: parameter sweeps, report files, and
//! data export for plots.

// `!(x > 0)` is how NaN gets rejected along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod params;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use advection_verify::chebyshev::cheb_points;
use advection_verify::galerkin::{build_solution, build_solution_auto};
use advection_verify::problems::{builtin, custom, ProblemConfig, BUILTIN_NAMES};
use advection_verify::verifier::{
    default_tol, projection_initial_error, residual_bound, verify, Stage, VerifyParams,
};
use advection_verify::{ApproxSolution, Complex64, ProblemSpec, VerificationReport};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use params::Degrees;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("unknown problem {0:?} (built-ins: {list}; or a path to a .toml problem file)", list = BUILTIN_NAMES.join(", "))]
    UnknownProblem(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Toml {
        path: PathBuf,
        #[source]
        source: toml::de::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Param(#[from] params::ParamError),
    #[error(transparent)]
    Core(#[from] advection_verify::Error),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// A built-in name, or the path of a problem file.
pub fn load_problem(name: &str) -> Result<ProblemSpec> {
    if let Some(p) = builtin(name) {
        return Ok(p);
    }
    let path = Path::new(name);
    if !path.exists() {
        return Err(CliError::UnknownProblem(name.to_string()));
    }
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let cfg: ProblemConfig = toml::from_str(&text).map_err(|source| CliError::Toml {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(custom(&cfg)?)
}

/// Everything `verify` needs; also the schema of `--config` run files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: String,
    #[serde(rename = "N")]
    pub truncations: Vec<usize>,
    #[serde(rename = "n")]
    pub degrees: Degrees,
    pub t_max: Vec<f64>,
    #[serde(default = "default_tolerance")]
    pub tol: f64,
    #[serde(default)]
    pub period: Option<f64>,
    /// Machine-readable report (JSON).
    #[serde(default)]
    pub report_path: Option<PathBuf>,
    /// Field export of every tuple, `<stem>_N<N>_n<n>_t<t>.csv`.
    #[serde(default)]
    pub grid_path: Option<PathBuf>,
    #[serde(default)]
    pub grid: Option<(usize, usize)>,
    /// Worker threads; 0 lets the pool decide.
    #[serde(default)]
    pub jobs: usize,
}

impl RunConfig {
    pub fn from_toml_file(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let cfg: RunConfig = toml::from_str(&text).map_err(|source| CliError::Toml {
            path: path.to_path_buf(),
            source,
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.truncations.is_empty() || self.t_max.is_empty() {
            return Err(CliError::Invalid(
                "N and t_max lists must be nonempty".into(),
            ));
        }
        if let Degrees::List(v) = &self.degrees {
            if v.is_empty() || v.contains(&0) {
                return Err(CliError::Invalid(
                    "n must be a nonempty list of positive degrees or \"auto\"".into(),
                ));
            }
        }
        if self.t_max.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return Err(CliError::Invalid("t_max values must be positive".into()));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::Invalid("tol must be positive".into()));
        }
        if let Some(p) = self.period {
            if !(p > 0.0) || !p.is_finite() {
                return Err(CliError::Invalid("period must be positive".into()));
            }
        }
        if let Some((nx, nt)) = self.grid {
            if nx < 2 || nt < 2 {
                return Err(CliError::Invalid("grid needs NX, NT >= 2".into()));
            }
        }
        Ok(())
    }

    /// Parameter tuples in sorted `(t_max, N, n)` order; `None` means auto.
    pub fn tuples(&self) -> Vec<(f64, usize, Option<usize>)> {
        let mut out = Vec::new();
        for &t in &self.t_max {
            for &n in &self.truncations {
                for d in self.degrees.values() {
                    out.push((t, n, d));
                }
            }
        }
        out.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
        out.dedup();
        out
    }
}

/// Outcome of one tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowOutcome {
    pub t_max: f64,
    #[serde(rename = "N")]
    pub truncation: usize,
    /// Requested degree; `None` for automatic choice.
    #[serde(rename = "n")]
    pub degree: Option<usize>,
    pub report: Option<VerificationReport>,
    pub failure: Option<Failure>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub stage: Stage,
    pub message: String,
}

impl RowOutcome {
    pub fn verified(&self) -> bool {
        self.report
            .as_ref()
            .is_some_and(|r| r.total_error.is_finite())
    }
}

/// Contents of a report file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub problem: String,
    pub tol: f64,
    pub rows: Vec<RowOutcome>,
}

impl ReportFile {
    pub fn all_verified(&self) -> bool {
        self.rows.iter().all(RowOutcome::verified)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))
}

/// Verifies every tuple of `config`. Rows come back in sorted order
/// whatever order the workers finish in.
pub fn run(config: &RunConfig) -> Result<ReportFile> {
    config.validate()?;
    let problem = load_problem(&config.problem)?;
    let tuples = config.tuples();
    let rows: Vec<RowOutcome> = pool(config.jobs)?.install(|| {
        tuples
            .par_iter()
            .map(|&(t_max, truncation, degree)| {
                let params = VerifyParams {
                    truncation,
                    degree,
                    t_max,
                    tol: config.tol,
                    period: config.period,
                };
                match verify(&problem, &params) {
                    Ok(report) => RowOutcome {
                        t_max,
                        truncation,
                        degree,
                        report: Some(report),
                        failure: None,
                    },
                    Err(e) => RowOutcome {
                        t_max,
                        truncation,
                        degree,
                        report: None,
                        failure: Some(Failure {
                            stage: e.stage,
                            message: e.source.to_string(),
                        }),
                    },
                }
            })
            .collect()
    });
    let file = ReportFile {
        problem: problem.name.clone(),
        tol: config.tol,
        rows,
    };
    if let Some(path) = &config.report_path {
        fs::write(path, file.to_json()?).map_err(io_err(path))?;
    }
    if let (Some(stem), Some((nx, nt))) = (&config.grid_path, config.grid) {
        for row in file.rows.iter().filter(|r| r.verified()) {
            let report = row.report.as_ref().expect("verified row");
            let approx = approximate(
                &problem,
                row.truncation,
                Some(report.degree),
                row.t_max,
                config.tol,
            )?;
            let path = grid_file_name(stem, row.truncation, report.degree, row.t_max);
            write_grid_csv(&export_grid(&approx, nx, nt), &path)?;
        }
    }
    Ok(file)
}

fn grid_file_name(stem: &Path, n: usize, deg: usize, t: f64) -> PathBuf {
    let base = stem
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "grid".into());
    let name = format!("{base}_N{n}_n{deg}_t{t}.csv");
    stem.with_file_name(name)
}

/// Aligned table with the columns of the printed result tables.
pub fn format_table(file: &ReportFile) -> String {
    let header = [
        "t_max",
        "N",
        "n",
        "initial error",
        "residual",
        "error",
        "app. time",
        "exec. time",
        "ratio",
    ];
    let mut rows: Vec<Vec<String>> = vec![header.iter().map(|s| s.to_string()).collect()];
    for r in &file.rows {
        match (&r.report, &r.failure) {
            (Some(rep), _) => rows.push(vec![
                format!("{}", r.t_max),
                rep.truncation.to_string(),
                rep.degree.to_string(),
                format!("{:.4e}", rep.initial_error),
                format!("{:.4e}", rep.residual.total),
                format!("{:.4e}", rep.total_error),
                format!("{:.4}", rep.timings.approx_seconds),
                format!("{:.4}", rep.timings.exec_seconds),
                format!("{:.3}", rep.timings.ratio()),
            ]),
            (None, failure) => {
                let why = failure.as_ref().map_or("failed".to_string(), |f| {
                    format!("{}: {}", f.stage, f.message)
                });
                let deg = r.degree.map_or("auto".to_string(), |d| d.to_string());
                rows.push(vec![
                    format!("{}", r.t_max),
                    r.truncation.to_string(),
                    deg,
                    format!("UNVERIFIED ({why})"),
                ]);
            }
        }
    }
    let mut widths = vec![0; header.len()];
    for row in &rows {
        if row.len() == header.len() {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
    }
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, cell)| {
                if row.len() == header.len() {
                    format!("{cell:>w$}", w = widths[i])
                } else {
                    cell.clone()
                }
            })
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

/// Approximate solution for one tuple, with the datum's midpoints as initial
/// values.
pub fn approximate(
    problem: &ProblemSpec,
    truncation: usize,
    degree: Option<usize>,
    t_max: f64,
    tol: f64,
) -> Result<ApproxSolution> {
    let a0: Vec<Complex64> = problem
        .a0
        .coefficients(truncation)?
        .iter()
        .map(|z| z.mid())
        .collect();
    Ok(match degree {
        Some(d) => build_solution(&problem.c, &a0, truncation, d, t_max, tol)?,
        None => build_solution_auto(&problem.c, &a0, truncation, t_max, tol)?,
    })
}

/// Values of `u~(x, t) = sum_k a~_k(t) e^{ikx}` on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldGrid {
    /// `x_j = 2 pi j / nx`, `j < nx`.
    pub x: Vec<f64>,
    /// `t_m = t_max m / (nt - 1)`.
    pub t: Vec<f64>,
    /// Real part, `values[m][j]`.
    pub values: Vec<Vec<f64>>,
    /// Largest `|Im u~|` over the grid.
    pub imag_defect: f64,
}

pub fn export_grid(approx: &ApproxSolution, nx: usize, nt: usize) -> FieldGrid {
    let nx = nx.max(2);
    let nt = nt.max(2);
    let n = approx.truncation as i64;
    let x: Vec<f64> = (0..nx)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / nx as f64)
        .collect();
    let t: Vec<f64> = (0..nt)
        .map(|m| approx.t_max * m as f64 / (nt - 1) as f64)
        .collect();
    let mut imag_defect: f64 = 0.0;
    let values = t
        .iter()
        .map(|&tm| {
            let a = approx
                .evaluate(tm.min(approx.t_max))
                .expect("grid time inside the domain");
            x.iter()
                .map(|&xj| {
                    let u: Complex64 = a
                        .iter()
                        .enumerate()
                        .map(|(idx, ak)| {
                            ak * Complex64::from_polar(1.0, (idx as i64 - n) as f64 * xj)
                        })
                        .sum();
                    imag_defect = imag_defect.max(u.im.abs());
                    u.re
                })
                .collect()
        })
        .collect();
    FieldGrid {
        x,
        t,
        values,
        imag_defect,
    }
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    let f = fs::File::create(path).map_err(io_err(path))?;
    Ok(csv::Writer::from_writer(f))
}

fn fmt_num(v: f64) -> String {
    format!("{v:e}")
}

/// Header row `t\x, x_0, ...`; one row per time.
pub fn write_grid_csv(grid: &FieldGrid, path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    let mut header = vec!["t\\x".to_string()];
    header.extend(grid.x.iter().map(|&v| fmt_num(v)));
    w.write_record(&header)?;
    for (tm, row) in grid.t.iter().zip(&grid.values) {
        let mut rec = vec![fmt_num(*tm)];
        rec.extend(row.iter().map(|&v| fmt_num(v)));
        w.write_record(&rec)?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// `(N, bound)` rows of the initial-error bound for the datum's
/// floating-point representation.
pub fn sweep_initial_error(
    problem: &ProblemSpec,
    truncations: &[usize],
) -> Result<Vec<(usize, f64)>> {
    let mut ns = truncations.to_vec();
    ns.sort_unstable();
    ns.dedup();
    ns.par_iter()
        .map(|&n| {
            let a0 = problem.a0.coefficients(n)?;
            Ok((n, projection_initial_error(&a0, &problem.tail)?))
        })
        .collect()
}

/// `(n, t_max, bound)` rows of the residual bound at fixed `N`.
pub fn sweep_residual(
    problem: &ProblemSpec,
    truncation: usize,
    degrees: &[usize],
    t_maxes: &[f64],
    tol: f64,
) -> Result<Vec<(usize, f64, f64)>> {
    let mut tuples: Vec<(usize, f64)> = t_maxes
        .iter()
        .flat_map(|&t| degrees.iter().map(move |&d| (d, t)))
        .collect();
    tuples.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
    tuples.dedup();
    tuples
        .par_iter()
        .map(|&(d, t)| {
            let approx = approximate(problem, truncation, Some(d), t, tol)?;
            Ok((d, t, residual_bound(&approx, &problem.c, truncation)?.total))
        })
        .collect()
}

pub fn write_initial_sweep_csv(rows: &[(usize, f64)], path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["N", "initial_error"])?;
    for (n, b) in rows {
        w.write_record([n.to_string(), fmt_num(*b)])?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

pub fn write_residual_sweep_csv(rows: &[(usize, f64, f64)], path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["n", "t_max", "residual"])?;
    for (n, t, b) in rows {
        w.write_record([n.to_string(), fmt_num(*t), fmt_num(*b)])?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// `x, c(x), u0(x)` on a uniform grid, `u0` truncated at `|k| <= truncation`.
pub fn export_profile(
    problem: &ProblemSpec,
    truncation: usize,
    nx: usize,
) -> Result<Vec<[f64; 3]>> {
    let a0 = problem.a0.coefficients(truncation)?;
    let n = truncation as i64;
    let series = |coeffs: &mut dyn Iterator<Item = (i64, Complex64)>, x: f64| -> f64 {
        coeffs
            .map(|(k, v)| (v * Complex64::from_polar(1.0, k as f64 * x)).re)
            .sum()
    };
    Ok((0..nx.max(2))
        .map(|j| {
            let x = 2.0 * std::f64::consts::PI * j as f64 / nx.max(2) as f64;
            let c = series(&mut problem.c.iter().map(|(k, v)| (k, v.mid())), x);
            let u = series(
                &mut a0.iter().enumerate().map(|(i, v)| (i as i64 - n, v.mid())),
                x,
            );
            [x, c, u]
        })
        .collect())
}

pub fn write_profile_csv(rows: &[[f64; 3]], path: &Path) -> Result<()> {
    let mut w = csv_writer(path)?;
    w.write_record(["x", "c", "u0"])?;
    for r in rows {
        w.write_record(r.iter().map(|v| fmt_num(*v)))?;
    }
    w.flush().map_err(io_err(path))?;
    Ok(())
}

/// Fit nodes of a degree, handy for inspecting sampling.
pub fn nodes(degree: usize, t_max: f64) -> Vec<f64> {
    cheb_points(degree, t_max)
}

/// One line per built-in problem.
pub fn list_problems(out: &mut dyn Write) -> std::io::Result<()> {
    for name in BUILTIN_NAMES {
        let p: ProblemSpec = builtin(name).expect("built-in");
        writeln!(out, "{name:<10} {}", p.description)?;
    }
    Ok(())
}

pub fn default_tolerance() -> f64 {
    default_tol()
}
