//! `hilreg`: simulate functional regression data, fit truncated
//! principal-component estimators, forecast ARH(1) series, reproduce the
//! simulation table and run the perturbation-inequality checks.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use hilreg::estimator::{
    estimation_error, fit, m_default, prediction_mse, CvPairing, RuleVariant, TruncationRule,
};
use hilreg::experiments::{
    cv_test_size, format_table, run_cell_with, run_table1, write_results, write_results_to, CellResult,
    ExperimentSpec, RuleKind, TestOperator,
};
use hilreg::hilbert::{eval_on_grid, hs_norm, uniform_grid, SpaceDescriptor};
use hilreg::io::{read_curves, write_curves, write_grid_curves};
use hilreg::par::{with_workers, workers_from_env};
use hilreg::procgen::{
    eigen_profile, gen_arh1, gen_linear_model, make_operator, NoiseShape, NoiseSpec, OperatorKind,
    OperatorSpec, ProfileKind, RngStream,
};
use hilreg::spectral::{inequality_suite, SampleView};
use hilreg::{Execution, HilbertVec, OperatorMat};

const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Violations above this count as failures in `check`.
const CHECK_SLACK: f64 = 1e-10;

#[derive(Parser)]
#[command(name = "hilreg", version, about = "Linear operator estimation between Hilbert spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw a sample from the linear model and write X.csv, Y.csv and true_psi.json.
    Simulate(SimulateArgs),
    /// Fit the estimator to paired curve files.
    Fit(FitArgs),
    /// Run the full simulation table.
    Table1(Table1Args),
    /// Fit an ARH(1) model and emit one-step-ahead forecasts.
    Forecast(ForecastArgs),
    /// Run the randomized perturbation-inequality checks.
    Check(CheckArgs),
    /// Run one simulation cell described by a JSON config.
    Cell(CellArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long)]
    profile: ProfileKind,
    #[arg(long)]
    operator: TestOperator,
    #[arg(long, value_parser = parse_nonneg)]
    sigma2: f64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 35, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    #[arg(long, default_value_t = NoiseShape::PerCoordinate)]
    noise_shape: NoiseShape,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    x: PathBuf,
    #[arg(long)]
    y: PathBuf,
    /// predict | theorem1 | cv | fixed:K
    #[arg(long, default_value = "predict")]
    rule: RuleKind,
    /// `auto` for √n / ln n, or a value ≥ 1.
    #[arg(long, default_value = "auto", value_parser = parse_m)]
    m: MChoice,
    /// Ratio thresholds λ̂₁/λ̂_j (default).
    #[arg(long, overrides_with = "unscaled")]
    scaled: bool,
    /// Absolute thresholds 1/λ̂_j for the theorem1 rule.
    #[arg(long)]
    unscaled: bool,
    /// Remove sample means before fitting.
    #[arg(long)]
    center: bool,
    /// Test-block pairing for cv: aligned | shifted.
    #[arg(long, default_value = "aligned", value_parser = parse_pairing)]
    cv_pairing: CvPairing,
    /// Model JSON output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// true_psi.json from `simulate`, for error reporting.
    #[arg(long)]
    truth: Option<PathBuf>,
}

#[derive(Args)]
struct Table1Args {
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(1..))]
    runs: u64,
    #[arg(long, default_value_t = 1.0, value_parser = parse_nonneg)]
    sigma2: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = NoiseShape::PerCoordinate)]
    noise_shape: NoiseShape,
    /// Results CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Store wall-clock times (makes output run-dependent).
    #[arg(long)]
    record_timing: bool,
}

#[derive(Args)]
struct ForecastArgs {
    /// Curve CSV, one state per row in time order.
    #[arg(long, conflicts_with = "synthetic", required_unless_present = "synthetic")]
    input: Option<PathBuf>,
    /// Generate an ARH(1) series instead of reading one.
    #[arg(long)]
    synthetic: bool,
    /// Synthetic operator: psi1 | psi2 | psi3 | zero.
    #[arg(long, default_value = "psi3")]
    operator: String,
    /// Operator norm of the synthetic operator (< 1).
    #[arg(long, default_value_t = 0.5)]
    norm: f64,
    #[arg(long, default_value = "lambda1")]
    profile: ProfileKind,
    #[arg(long, default_value_t = 35, value_parser = clap::value_parser!(u64).range(1..))]
    dim: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    n: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    burn_in: u64,
    #[arg(long, default_value = "auto", value_parser = parse_m)]
    m: MChoice,
    /// Forecast CSV (curve format).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the generated series (curve format).
    #[arg(long, requires = "synthetic")]
    series_out: Option<PathBuf>,
    /// Evaluate forecasts on G uniform grid points of [0, 1] in the Fourier basis.
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    grid: Option<u64>,
    /// Output for grid-evaluated forecasts; required with --grid.
    #[arg(long, requires = "grid")]
    grid_out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, default_value_t = 1000)]
    trials: u64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(2..))]
    dim: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Evaluate the bounds with a flipped sign; must report violations.
    #[arg(long)]
    self_test: bool,
}

#[derive(Args)]
struct CellArgs {
    #[arg(long)]
    config: PathBuf,
    /// Results CSV; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    record_timing: bool,
}

#[derive(Clone, Copy, Debug)]
enum MChoice {
    Auto,
    Value(f64),
}

impl MChoice {
    fn resolve(self, n: usize) -> Result<f64> {
        match self {
            Self::Auto => Ok(m_default(n)?),
            Self::Value(v) => Ok(v),
        }
    }
}

impl std::fmt::Display for MChoice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Auto => f.write_str("auto"),
            Self::Value(v) => write!(f, "{v}"),
        }
    }
}

fn parse_m(s: &str) -> std::result::Result<MChoice, String> {
    if s == "auto" {
        return Ok(MChoice::Auto);
    }
    match s.parse::<f64>() {
        Ok(v) if v >= 1.0 && v.is_finite() => Ok(MChoice::Value(v)),
        _ => Err(format!("expected `auto` or a number >= 1, got {s:?}")),
    }
}

fn parse_nonneg(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v >= 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("expected a finite non-negative number, got {s:?}")),
    }
}

fn parse_pairing(s: &str) -> std::result::Result<CvPairing, String> {
    match s {
        "aligned" => Ok(CvPairing::Aligned),
        "shifted" => Ok(CvPairing::Shifted),
        _ => Err(format!("expected `aligned` or `shifted`, got {s:?}")),
    }
}

/// Contents of `true_psi.json`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TruthFile {
    header: String,
    profile: ProfileKind,
    operator: TestOperator,
    sigma2: f64,
    n: usize,
    seed: u64,
    dim: usize,
    noise_shape: NoiseShape,
    psi: OperatorMat,
}

/// First line of every output file.
fn header(command: &str, flags: &[(&str, String)]) -> String {
    let mut s = format!("hilreg {VERSION} {command}");
    for (k, v) in flags {
        s.push_str(&format!(" {k}={v}"));
    }
    s
}

fn cmd_simulate(a: &SimulateArgs) -> Result<()> {
    let (n, dim) = (a.n as usize, a.dim as usize);
    let head = header(
        "simulate",
        &[
            ("profile", a.profile.to_string()),
            ("operator", a.operator.to_string()),
            ("sigma2", a.sigma2.to_string()),
            ("n", n.to_string()),
            ("seed", a.seed.to_string()),
            ("dim", dim.to_string()),
            ("noise_shape", a.noise_shape.to_string()),
        ],
    );
    let profile = eigen_profile(a.profile, dim)?;
    let psi = make_operator(&OperatorSpec::new(a.operator.kind(a.seed), dim))?;
    let noise = NoiseSpec { shape: a.noise_shape, sigma2: a.sigma2 };
    let (x, y) = gen_linear_model(&psi, &profile, noise, n, &RngStream::new(a.seed, 0))?;
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    write_curves(&x, Some(&head), &a.out.join("X.csv"))?;
    write_curves(&y, Some(&head), &a.out.join("Y.csv"))?;
    let truth = TruthFile {
        header: head,
        profile: a.profile,
        operator: a.operator,
        sigma2: a.sigma2,
        n,
        seed: a.seed,
        dim,
        noise_shape: a.noise_shape,
        psi,
    };
    fs::write(a.out.join("true_psi.json"), serde_json::to_string_pretty(&truth)? + "\n")?;
    println!("wrote {n} pairs of dimension {dim} to {}", a.out.display());
    Ok(())
}

fn load(path: &Path, zero_mean: bool) -> Result<SampleView> {
    let s = read_curves(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(s.with_zero_mean(zero_mean))
}

fn cmd_fit(a: &FitArgs) -> Result<()> {
    let x = load(&a.x, !a.center)?;
    let y = load(&a.y, !a.center)?;
    let n = x.len();
    let scaled = !a.unscaled;
    let m_n = match a.rule {
        RuleKind::Predict | RuleKind::Theorem1 => Some(a.m.resolve(n)?),
        _ => None,
    };
    let rule = match a.rule {
        RuleKind::Predict => TruncationRule::predict(m_n.unwrap_or_default()),
        RuleKind::Theorem1 => TruncationRule::theorem1(m_n.unwrap_or_default(), scaled),
        RuleKind::Fixed(k) => TruncationRule::fixed(k),
        RuleKind::Cv => {
            let n_test = cv_test_size(n);
            if n_test == 0 {
                bail!("cross-validation needs at least 2 observations");
            }
            TruncationRule {
                variant: RuleVariant::Cv { k_max: x.dim(), n_test, pairing: a.cv_pairing },
                scaled,
            }
        }
    };
    let model = fit(&x, &y, rule)?;
    let head = header(
        "fit",
        &[
            ("x", a.x.display().to_string()),
            ("y", a.y.display().to_string()),
            ("rule", rule.to_string()),
            ("m_n", m_n.map_or("none".into(), |m| m.to_string())),
            ("scaled", scaled.to_string()),
            ("center", a.center.to_string()),
        ],
    );
    let mut out = io::stdout().lock();
    writeln!(out, "K={}", model.k())?;
    writeln!(out, "n={n} dim_in={} dim_out={}", x.dim(), y.dim())?;
    if let Some(m) = m_n {
        writeln!(out, "m_n={m}")?;
    }
    let lead: Vec<String> = model.eigen().values().iter().take(5).map(|v| format!("{v:.6e}")).collect();
    writeln!(out, "eigenvalues: {}", lead.join(" "))?;
    if let Some(path) = &a.truth {
        let truth: TruthFile = serde_json::from_str(&fs::read_to_string(path)?)
            .with_context(|| format!("reading {}", path.display()))?;
        let (op, hs) = estimation_error(&model, &truth.psi)?;
        let mse = prediction_mse(&truth.psi, &model, &x)?;
        writeln!(out, "operator_norm_error={op}")?;
        writeln!(out, "hs_error={hs}")?;
        writeln!(out, "in_sample_prediction_mse={mse}")?;
    }
    if let Some(path) = &a.out {
        fs::write(path, model.to_file(Some(head)).to_json()? + "\n")?;
    }
    Ok(())
}

fn finish_cells(
    mut cells: Vec<CellResult>,
    record_timing: bool,
    head: &str,
    out: Option<&Path>,
) -> Result<Vec<CellResult>> {
    if !record_timing {
        for c in &mut cells {
            c.wall_ms = 0;
        }
    }
    match out {
        Some(p) => write_results(&cells, Some(head), p)?,
        None => write_results_to(&cells, Some(head), io::stdout().lock())?,
    }
    Ok(cells)
}

fn cmd_table1(a: &Table1Args) -> Result<()> {
    let head = header(
        "table1",
        &[
            ("runs", a.runs.to_string()),
            ("sigma2", a.sigma2.to_string()),
            ("seed", a.seed.to_string()),
            ("noise_shape", a.noise_shape.to_string()),
            ("record_timing", a.record_timing.to_string()),
        ],
    );
    let cells = run_table1(a.sigma2, a.runs as usize, a.seed, a.noise_shape, Execution::Parallel)?;
    let cells = finish_cells(cells, a.record_timing, &head, a.out.as_deref())?;
    let table = format_table(&cells);
    let mean = |rule: RuleKind| {
        let v: Vec<f64> = cells.iter().filter_map(|c| c.outcome(rule)).map(|o| o.mse).collect();
        v.iter().sum::<f64>() / v.len() as f64
    };
    let summary = format!(
        "mean MSE over {} cells at sigma2={}: predict {:.4}, cv {:.4}",
        cells.len(),
        a.sigma2,
        mean(RuleKind::Predict),
        mean(RuleKind::Cv)
    );
    if a.out.is_some() {
        print!("{table}");
        println!("{summary}");
    } else {
        eprint!("{table}");
        eprintln!("{summary}");
    }
    Ok(())
}

fn cmd_cell(a: &CellArgs) -> Result<()> {
    let text = fs::read_to_string(&a.config).with_context(|| format!("reading {}", a.config.display()))?;
    let spec = ExperimentSpec::from_json(&text)?;
    let head = header("cell", &[("config", serde_json::to_string(&spec)?)]);
    let cell = run_cell_with(&spec, Execution::Parallel)?;
    finish_cells(vec![cell], a.record_timing, &head, a.out.as_deref())?;
    Ok(())
}

fn cmd_forecast(a: &ForecastArgs) -> Result<()> {
    let mut flags = vec![("m", a.m.to_string())];
    let series = match &a.input {
        Some(path) => {
            flags.push(("input", path.display().to_string()));
            load(path, false)?
        }
        None => {
            let dim = a.dim as usize;
            flags.extend([
                ("operator", a.operator.clone()),
                ("norm", a.norm.to_string()),
                ("profile", a.profile.to_string()),
                ("dim", dim.to_string()),
                ("n", a.n.to_string()),
                ("seed", a.seed.to_string()),
                ("burn_in", a.burn_in.to_string()),
            ]);
            let psi = match a.operator.as_str() {
                "zero" => OperatorMat::zeros(dim, dim),
                name => {
                    let kind: OperatorKind = name.parse::<TestOperator>()?.kind(a.seed);
                    make_operator(&OperatorSpec::new(kind, dim).with_norm(a.norm))?
                }
            };
            let profile = eigen_profile(a.profile, dim)?;
            let mut rng = RngStream::new(a.seed, 0).rng();
            gen_arh1(&psi, &profile, a.n as usize, a.burn_in as usize, &mut rng)?.with_zero_mean(false)
        }
    };
    let head = header("forecast", &flags);
    if let Some(path) = &a.series_out {
        write_curves(&series, Some(&head), path)?;
    }
    let n = series.len();
    if n < 10 {
        bail!("forecasting needs a series of at least 10 states, got {n}");
    }
    let m_n = a.m.resolve(n - 1)?;
    let model = fit(&series.slice(0..n - 1), &series.slice(1..n), TruncationRule::predict(m_n))?;
    let forecasts: Vec<HilbertVec> =
        (0..n).map(|t| hilreg::predict(&model, &series.row_vec(t))).collect::<hilreg::Result<_>>()?;

    let mut out = io::stdout().lock();
    writeln!(out, "K={}", model.k())?;
    writeln!(out, "m_n={m_n}")?;
    writeln!(out, "model_hs_norm={}", hs_norm(model.psi_hat()))?;
    let next: Vec<String> = forecasts[n - 1].as_slice().iter().take(5).map(|v| format!("{v:.6}")).collect();
    writeln!(out, "next_forecast_head: {}", next.join(" "))?;

    // Row t is the forecast of state t + 1; the last row is out of sample.
    let rows = SampleView::from_rows(&forecasts, false)?;
    if let Some(path) = &a.out {
        write_curves(&rows, Some(&head), path)?;
    }
    if let Some(g) = a.grid {
        let Some(path) = &a.grid_out else {
            bail!("--grid needs --grid-out");
        };
        let space = SpaceDescriptor::fourier(series.dim())?;
        let grid = uniform_grid(g as usize);
        let curves =
            forecasts.iter().map(|f| eval_on_grid(&space, f, &grid)).collect::<hilreg::Result<Vec<_>>>()?;
        write_grid_curves(&grid, &curves, Some(&head), path)?;
    }
    Ok(())
}

fn cmd_check(a: &CheckArgs) -> Result<bool> {
    let report = inequality_suite(a.trials as usize, a.dim as usize, a.seed, a.self_test)?;
    println!(
        "{}",
        header(
            "check",
            &[
                ("trials", a.trials.to_string()),
                ("dim", a.dim.to_string()),
                ("seed", a.seed.to_string()),
                ("self_test", a.self_test.to_string()),
            ]
        )
    );
    println!("weyl max violation: {:e}", report.weyl);
    println!("eigenvector bound max violation: {:e}", report.eigvec);
    println!("projection bound max violation: {:e}", report.projection);
    let ok = report.passes(CHECK_SLACK);
    println!("{}", if ok { "PASS" } else { "FAIL" });
    Ok(ok)
}

fn run(cli: Cli) -> Result<bool> {
    let threads = workers_from_env()?;
    with_workers(threads, move || -> Result<bool> {
        match &cli.command {
            Command::Simulate(a) => cmd_simulate(a).map(|_| true),
            Command::Fit(a) => cmd_fit(a).map(|_| true),
            Command::Table1(a) => cmd_table1(a).map(|_| true),
            Command::Forecast(a) => cmd_forecast(a).map(|_| true),
            Command::Check(a) => cmd_check(a),
            Command::Cell(a) => cmd_cell(a).map(|_| true),
        }
    })?
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
