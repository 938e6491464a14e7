//! Monte Carlo harness: simulation-table cells, ARH(1) forecasting runs and
//! the results CSV.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::estimator::{cv_select, m_default, resolve_k, TruncationRule};
use crate::hilbert::{apply_slice, dot, OperatorMat};
use crate::par::{map_indexed, Execution};
use crate::procgen::{
    eigen_profile, gaussian_sample, gen_arh1, make_operator, respond, EigenProfile, NoiseShape, NoiseSpec,
    OperatorKind, OperatorSpec, ProfileKind, RngStream,
};
use crate::spectral::{eigen_system, EigenSystem, MomentSums, SampleView};

/// Sample sizes of the simulation table, `80·4^ℓ`.
pub const TABLE_SIZES: [usize; 5] = [80, 320, 1280, 5120, 20480];

/// Coefficient dimension of the simulation study.
pub const TABLE_DIM: usize = 35;

/// Operator family of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestOperator {
    Psi1,
    Psi2,
    Psi3,
}

impl TestOperator {
    pub const ALL: [TestOperator; 3] = [Self::Psi1, Self::Psi2, Self::Psi3];

    /// The Gaussian operator is drawn from `seed`.
    pub fn kind(self, seed: u64) -> OperatorKind {
        match self {
            Self::Psi1 => OperatorKind::Psi1Identity,
            Self::Psi2 => OperatorKind::Psi2Gaussian { seed },
            Self::Psi3 => OperatorKind::Psi3Harmonic,
        }
    }
}

impl fmt::Display for TestOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Psi1 => "psi1",
            Self::Psi2 => "psi2",
            Self::Psi3 => "psi3",
        })
    }
}

impl FromStr for TestOperator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "psi1" => Ok(Self::Psi1),
            "psi2" => Ok(Self::Psi2),
            "psi3" => Ok(Self::Psi3),
            _ => Err(invalid(format!("unknown operator {s:?}"))),
        }
    }
}

string_serde!(TestOperator);

/// Truncation rule as named in configs and result files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Eigenvalue-ratio rule with `m_n`.
    Predict,
    /// Cross-validation over `k = 1..=d`.
    Cv,
    /// `min(B_n, E_n, ⌊m_n⌋)`, scaled.
    Theorem1,
    Fixed(usize),
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Predict => f.write_str("predict"),
            Self::Cv => f.write_str("cv"),
            Self::Theorem1 => f.write_str("theorem1"),
            Self::Fixed(k) => write!(f, "fixed:{k}"),
        }
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "predict" => Ok(Self::Predict),
            "cv" => Ok(Self::Cv),
            "theorem1" => Ok(Self::Theorem1),
            _ => match s.strip_prefix("fixed:").map(str::parse::<usize>) {
                Some(Ok(k)) if k >= 1 => Ok(Self::Fixed(k)),
                _ => Err(invalid(format!("unknown rule {s:?}"))),
            },
        }
    }
}

string_serde!(RuleKind);

/// Size of the CV test block: `max(n/10, 100)`, capped at half the sample.
pub fn cv_test_size(n: usize) -> usize {
    (n / 10).max(100).min(n / 2)
}

fn default_rules() -> Vec<RuleKind> {
    vec![RuleKind::Cv, RuleKind::Predict]
}

fn default_runs() -> usize {
    200
}

fn default_dim() -> usize {
    TABLE_DIM
}

/// One cell of the simulation study. Field names double as the JSON config
/// keys; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub profile: ProfileKind,
    pub operator: TestOperator,
    /// Noise variance; `0` switches noise off entirely.
    pub sigma2: f64,
    pub n: usize,
    #[serde(default = "default_rules")]
    pub rules: Vec<RuleKind>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub m_n: Option<f64>,
    #[serde(default)]
    pub noise_shape: NoiseShape,
    #[serde(default = "default_dim")]
    pub dim: usize,
}

impl ExperimentSpec {
    pub fn new(profile: ProfileKind, operator: TestOperator, sigma2: f64, n: usize) -> Self {
        Self {
            profile,
            operator,
            sigma2,
            n,
            rules: default_rules(),
            runs: default_runs(),
            seed: 0,
            m_n: None,
            noise_shape: NoiseShape::default(),
            dim: TABLE_DIM,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(invalid("runs must be at least 1"));
        }
        if self.n < 16 {
            return Err(invalid(format!("n must be at least 16, got {}", self.n)));
        }
        if !(self.sigma2 >= 0.0 && self.sigma2.is_finite()) {
            return Err(invalid(format!("sigma2 must be finite and non-negative, got {}", self.sigma2)));
        }
        if self.dim == 0 {
            return Err(invalid("dim must be at least 1"));
        }
        if self.rules.is_empty() {
            return Err(invalid("at least one rule is required"));
        }
        if let Some(m) = self.m_n {
            if !(m >= 1.0 && m.is_finite()) {
                return Err(invalid(format!("m_n must be at least 1, got {m}")));
            }
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn resolved_m_n(&self) -> Result<f64> {
        match self.m_n {
            Some(m) => Ok(m),
            None => m_default(self.n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuleOutcome {
    pub rule: RuleKind,
    /// Midpoint median, so possibly a half-integer.
    pub median_k: f64,
    pub mse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub profile: ProfileKind,
    pub operator: TestOperator,
    pub sigma2: f64,
    pub n: usize,
    pub runs: usize,
    pub seed: u64,
    pub noise_shape: NoiseShape,
    pub wall_ms: u64,
    pub rules: Vec<RuleOutcome>,
}

impl CellResult {
    pub fn outcome(&self, rule: RuleKind) -> Option<&RuleOutcome> {
        self.rules.iter().find(|o| o.rule == rule)
    }
}

/// Midpoint median.
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of an empty slice");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let h = v.len() / 2;
    if v.len() % 2 == 1 {
        v[h]
    } else {
        0.5 * (v[h - 1] + v[h])
    }
}

/// `Ψ̂_k(x)` from the eigensystem without forming the matrix.
fn truncated_prediction(eig: &EigenSystem, delta: &OperatorMat, k: usize, x: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; delta.dim_out()];
    for j in 0..k {
        let v = eig.vectors()[j].as_slice();
        let c = dot(x, v) / eig.values()[j];
        for (o, w) in out.iter_mut().zip(apply_slice(delta, v)) {
            *o += c * w;
        }
    }
    out
}

struct Setup {
    profile: EigenProfile,
    psi: OperatorMat,
    noise: NoiseSpec,
    m_n: f64,
    n_test: usize,
}

impl Setup {
    fn new(spec: &ExperimentSpec) -> Result<Self> {
        spec.validate()?;
        let profile = eigen_profile(spec.profile, spec.dim)?;
        let psi = make_operator(&OperatorSpec::new(spec.operator.kind(spec.seed), spec.dim))?;
        Ok(Self {
            profile,
            psi,
            noise: NoiseSpec { shape: spec.noise_shape, sigma2: spec.sigma2 },
            m_n: spec.resolved_m_n()?,
            n_test: cv_test_size(spec.n),
        })
    }

    /// One replication: `(K, squared error at X_{n+1})` per rule.
    fn replicate(&self, spec: &ExperimentSpec, index: usize) -> Result<Vec<(usize, f64)>> {
        let n = spec.n;
        let stream = RngStream::new(spec.seed, index as u64);
        let x_all = gaussian_sample(&self.profile, n + 1, &mut stream.child(0).rng());
        let x = x_all.slice(0..n);
        let y = respond(&self.psi, &x, &self.profile, self.noise, &stream)?;
        let x_new = x_all.row(n);

        let split = n - self.n_test;
        let mut moments = MomentSums::from_pairs(&x.slice(0..split), &y.slice(0..split))?;
        let k_cv = if spec.rules.contains(&RuleKind::Cv) {
            Some(cv_select(&moments, &x.slice(split..n), &y.slice(split..n), spec.dim)?)
        } else {
            None
        };
        moments.merge(&MomentSums::from_pairs(&x.slice(split..n), &y.slice(split..n))?)?;
        let eig = eigen_system(&moments.covariance()?)?;
        if eig.rank() == 0 {
            return Err(Error::DegenerateCovariance);
        }
        let delta = moments.cross_covariance()?;
        let truth = apply_slice(&self.psi, x_new);

        spec.rules
            .iter()
            .map(|rule| {
                let k = match rule {
                    RuleKind::Cv => k_cv.expect("cv level computed above").min(eig.rank()),
                    RuleKind::Predict => resolve_k(&eig, &TruncationRule::predict(self.m_n))?,
                    RuleKind::Theorem1 => resolve_k(&eig, &TruncationRule::theorem1(self.m_n, true))?,
                    RuleKind::Fixed(k) => resolve_k(&eig, &TruncationRule::fixed(*k))?,
                };
                let pred = truncated_prediction(&eig, &delta, k, x_new);
                let err = truth.iter().zip(&pred).map(|(a, b)| (a - b).powi(2)).sum();
                Ok((k, err))
            })
            .collect()
    }
}

pub fn run_cell(spec: &ExperimentSpec) -> Result<CellResult> {
    run_cell_with(spec, Execution::default())
}

/// Per-replication outcome; entry `r` of each field belongs to `spec.rules[r]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Replication {
    pub k: Vec<usize>,
    /// `‖Ψ(X_{n+1}) − Ψ̂(X_{n+1})‖²`.
    pub sq_error: Vec<f64>,
}

/// Runs all replications of a cell. Replication `k` draws from stream `k` of
/// the base seed; design and noise use separate sub-streams, so cells that
/// differ only in `sigma2` share their designs and standardized noise.
pub fn run_replications(spec: &ExperimentSpec, exec: Execution) -> Result<Vec<Replication>> {
    let setup = Setup::new(spec)?;
    map_indexed(spec.runs, exec, |i| {
        setup.replicate(spec, i).map(|r| Replication {
            k: r.iter().map(|p| p.0).collect(),
            sq_error: r.iter().map(|p| p.1).collect(),
        })
    })
    .into_iter()
    .collect()
}

/// Mean squared error and midpoint-median `K` per rule.
pub fn run_cell_with(spec: &ExperimentSpec, exec: Execution) -> Result<CellResult> {
    let start = Instant::now();
    let reps = run_replications(spec, exec)?;
    let rules = spec
        .rules
        .iter()
        .enumerate()
        .map(|(r, &rule)| {
            let ks: Vec<f64> = reps.iter().map(|rep| rep.k[r] as f64).collect();
            let mse = reps.iter().map(|rep| rep.sq_error[r]).sum::<f64>() / spec.runs as f64;
            RuleOutcome { rule, median_k: median(&ks), mse }
        })
        .collect();
    Ok(CellResult {
        profile: spec.profile,
        operator: spec.operator,
        sigma2: spec.sigma2,
        n: spec.n,
        runs: spec.runs,
        seed: spec.seed,
        noise_shape: spec.noise_shape,
        wall_ms: start.elapsed().as_millis() as u64,
        rules,
    })
}

/// Specs of the full table in presentation order: profile, then `n`, then
/// operator.
pub fn table1_specs(sigma2: f64, runs: usize, seed: u64, noise_shape: NoiseShape) -> Vec<ExperimentSpec> {
    let mut specs = Vec::with_capacity(45);
    for profile in ProfileKind::TABLE {
        for n in TABLE_SIZES {
            for operator in TestOperator::ALL {
                let mut s = ExperimentSpec::new(profile, operator, sigma2, n);
                s.runs = runs;
                s.seed = seed;
                s.noise_shape = noise_shape;
                specs.push(s);
            }
        }
    }
    specs
}

pub fn run_table1(
    sigma2: f64,
    runs: usize,
    seed: u64,
    noise_shape: NoiseShape,
    exec: Execution,
) -> Result<Vec<CellResult>> {
    table1_specs(sigma2, runs, seed, noise_shape)
        .iter()
        .map(|s| {
            let cell = run_cell_with(s, exec)?;
            log::info!("{} {} n={}: {} ms", s.profile, s.operator, s.n, cell.wall_ms);
            Ok(cell)
        })
        .collect()
}

/// Text table: one line per `(profile, n)`, one `K  MSE` group per operator
/// and rule.
pub fn format_table(cells: &[CellResult]) -> String {
    let mut out = String::new();
    let mut i = 0;
    while i < cells.len() {
        let head = &cells[i];
        let mut j = i;
        while j < cells.len() && cells[j].profile == head.profile && cells[j].n == head.n {
            j += 1;
        }
        if i == 0 || cells[i - 1].profile != head.profile {
            out.push_str(&format!("{} (sigma2 = {})\n", head.profile, head.sigma2));
            let mut title = format!("{:>7}", "n");
            for c in &cells[i..j] {
                for o in &c.rules {
                    title.push_str(&format!(" | {:>14}", format!("{} {}", c.operator, o.rule)));
                }
            }
            out.push_str(&title);
            out.push('\n');
        }
        let mut line = format!("{:>7}", head.n);
        for c in &cells[i..j] {
            for o in &c.rules {
                line.push_str(&format!(" | {:>5.1} {:>8.4}", o.median_k, o.mse));
            }
        }
        out.push_str(&line);
        out.push('\n');
        i = j;
    }
    out
}

/// Forecasting experiment for an ARH(1) process.
#[derive(Debug, Clone, PartialEq)]
pub struct ArhSpec {
    pub operator: OperatorKind,
    pub profile: ProfileKind,
    pub dim: usize,
    pub target_norm: f64,
    pub n_grid: Vec<usize>,
    pub runs: usize,
    pub seed: u64,
    pub burn_in: usize,
    pub m_n: Option<f64>,
}

impl ArhSpec {
    pub fn new(operator: OperatorKind, profile: ProfileKind, dim: usize, n_grid: Vec<usize>) -> Self {
        Self { operator, profile, dim, target_norm: 0.5, n_grid, runs: 50, seed: 0, burn_in: 200, m_n: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArhCell {
    pub n: usize,
    pub runs: usize,
    pub median_k: f64,
    /// Mean of `‖Ψ(X_n) − Ψ̂(X_n)‖²`.
    pub mse: f64,
    /// Median of `‖Ψ(X_n) − Ψ̂(X_n)‖`.
    pub median_error: f64,
}

/// Fits the ratio rule on lagged pairs `(X_k, X_{k+1})` and scores the
/// one-step forecast at the final state.
pub fn run_arh_forecast(spec: &ArhSpec, exec: Execution) -> Result<Vec<ArhCell>> {
    if spec.runs == 0 {
        return Err(invalid("runs must be at least 1"));
    }
    let profile = eigen_profile(spec.profile, spec.dim)?;
    let psi = make_operator(&OperatorSpec::new(spec.operator, spec.dim).with_norm(spec.target_norm))?;
    spec.n_grid
        .iter()
        .map(|&n| {
            if n < 16 {
                return Err(invalid(format!("n must be at least 16, got {n}")));
            }
            let m_n = match spec.m_n {
                Some(m) => m,
                None => m_default(n - 1)?,
            };
            let reps = map_indexed(spec.runs, exec, |i| {
                let mut rng = RngStream::new(spec.seed, i as u64).child(n as u64).rng();
                let path = gen_arh1(&psi, &profile, n, spec.burn_in, &mut rng)?;
                arh_replicate(&psi, &path, m_n)
            })
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
            let ks: Vec<f64> = reps.iter().map(|r| r.0 as f64).collect();
            let errs: Vec<f64> = reps.iter().map(|r| r.1.sqrt()).collect();
            Ok(ArhCell {
                n,
                runs: spec.runs,
                median_k: median(&ks),
                mse: reps.iter().map(|r| r.1).sum::<f64>() / spec.runs as f64,
                median_error: median(&errs),
            })
        })
        .collect()
}

fn arh_replicate(psi: &OperatorMat, path: &SampleView, m_n: f64) -> Result<(usize, f64)> {
    let n = path.len();
    let moments = MomentSums::from_pairs(&path.slice(0..n - 1), &path.slice(1..n))?;
    let eig = eigen_system(&moments.covariance()?)?;
    let k = resolve_k(&eig, &TruncationRule::predict(m_n))?;
    let delta = moments.cross_covariance()?;
    let last = path.row(n - 1);
    let pred = truncated_prediction(&eig, &delta, k, last);
    let err = apply_slice(psi, last).iter().zip(&pred).map(|(a, b)| (a - b).powi(2)).sum();
    Ok((k, err))
}

pub const RESULTS_HEADER: [&str; 11] = [
    "profile",
    "operator",
    "sigma2",
    "n",
    "rule",
    "median_k",
    "mse",
    "runs",
    "seed",
    "noise_shape",
    "wall_ms",
];

/// Writes one row per (cell, rule), preceded by an optional `#` comment.
pub fn write_results_to<W: Write>(cells: &[CellResult], comment: Option<&str>, mut w: W) -> Result<()> {
    if let Some(c) = comment {
        for line in c.lines() {
            writeln!(w, "# {line}")?;
        }
    }
    let mut csv = csv::Writer::from_writer(w);
    csv.write_record(RESULTS_HEADER).map_err(csv_err)?;
    for c in cells {
        for o in &c.rules {
            csv.write_record([
                c.profile.to_string(),
                c.operator.to_string(),
                c.sigma2.to_string(),
                c.n.to_string(),
                o.rule.to_string(),
                o.median_k.to_string(),
                o.mse.to_string(),
                c.runs.to_string(),
                c.seed.to_string(),
                c.noise_shape.to_string(),
                c.wall_ms.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    csv.flush()?;
    Ok(())
}

pub fn write_results(cells: &[CellResult], comment: Option<&str>, path: &Path) -> Result<()> {
    write_results_to(cells, comment, BufWriter::new(File::create(path)?))
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => invalid(format!("csv: {other:?}")),
    }
}

/// Reads a results file; consecutive rows sharing the cell columns form one
/// cell. Comment lines start with `#`.
pub fn read_results_from<R: Read>(r: R) -> Result<Vec<CellResult>> {
    let mut cells: Vec<CellResult> = Vec::new();
    let mut header_seen = false;
    for (idx, line) in BufReader::new(r).lines().enumerate() {
        let line = line?;
        let lineno = idx as u64 + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if !header_seen {
            if fields != RESULTS_HEADER {
                return Err(Error::Parse { line: lineno, msg: format!("unexpected header {line:?}") });
            }
            header_seen = true;
            continue;
        }
        if fields.len() != RESULTS_HEADER.len() {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected {} fields, found {}", RESULTS_HEADER.len(), fields.len()),
            });
        }
        let bad = |what: &str| Error::Parse { line: lineno, msg: format!("bad {what}: {line:?}") };
        let profile: ProfileKind = fields[0].parse().map_err(|_| bad("profile"))?;
        let operator: TestOperator = fields[1].parse().map_err(|_| bad("operator"))?;
        let sigma2: f64 = fields[2].parse().map_err(|_| bad("sigma2"))?;
        let n: usize = fields[3].parse().map_err(|_| bad("n"))?;
        let rule: RuleKind = fields[4].parse().map_err(|_| bad("rule"))?;
        let median_k: f64 = fields[5].parse().map_err(|_| bad("median_k"))?;
        let mse: f64 = fields[6].parse().map_err(|_| bad("mse"))?;
        let runs: usize = fields[7].parse().map_err(|_| bad("runs"))?;
        let seed: u64 = fields[8].parse().map_err(|_| bad("seed"))?;
        let noise_shape: NoiseShape = fields[9].parse().map_err(|_| bad("noise_shape"))?;
        let wall_ms: u64 = fields[10].parse().map_err(|_| bad("wall_ms"))?;
        let outcome = RuleOutcome { rule, median_k, mse };
        match cells.last_mut() {
            Some(c)
                if c.profile == profile
                    && c.operator == operator
                    && c.sigma2.to_bits() == sigma2.to_bits()
                    && c.n == n
                    && c.runs == runs
                    && c.seed == seed
                    && c.noise_shape == noise_shape
                    && c.wall_ms == wall_ms
                    && c.outcome(rule).is_none() =>
            {
                c.rules.push(outcome)
            }
            _ => cells.push(CellResult {
                profile,
                operator,
                sigma2,
                n,
                runs,
                seed,
                noise_shape,
                wall_ms,
                rules: vec![outcome],
            }),
        }
    }
    if !header_seen {
        return Err(Error::Parse { line: 1, msg: "missing header".into() });
    }
    Ok(cells)
}

pub fn read_results(path: &Path) -> Result<Vec<CellResult>> {
    read_results_from(File::open(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(sigma2: f64, n: usize, rules: Vec<RuleKind>) -> ExperimentSpec {
        let mut s = ExperimentSpec::new(ProfileKind::LAMBDA1, TestOperator::Psi3, sigma2, n);
        s.runs = 6;
        s.seed = 11;
        s.dim = 8;
        s.rules = rules;
        s
    }

    #[test]
    fn median_convention() {
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[5.0, 6.0, 5.0, 6.0]), 5.5);
        assert_eq!(median(&[2.0, 2.0, 3.0, 9.0]), 2.5);
    }

    #[test]
    fn cv_test_sizes() {
        assert_eq!(cv_test_size(80), 40);
        assert_eq!(cv_test_size(320), 100);
        assert_eq!(cv_test_size(1280), 128);
        assert_eq!(cv_test_size(20480), 2048);
    }

    #[test]
    fn noiseless_full_rank_is_exact() {
        for op in TestOperator::ALL {
            let mut s = small(0.0, 200, vec![RuleKind::Fixed(8)]);
            s.operator = op;
            let cell = run_cell_with(&s, Execution::Sequential).unwrap();
            assert!(cell.rules[0].mse <= 1e-12, "{op}: {}", cell.rules[0].mse);
            assert_eq!(cell.rules[0].median_k, 8.0);
        }
    }

    #[test]
    fn schedule_does_not_change_results() {
        let s = small(1.0, 100, vec![RuleKind::Cv, RuleKind::Predict, RuleKind::Theorem1]);
        let mut a = run_cell_with(&s, Execution::Sequential).unwrap();
        let mut b = run_cell_with(&s, Execution::Parallel).unwrap();
        a.wall_ms = 0;
        b.wall_ms = 0;
        assert_eq!(a, b);
    }

    #[test]
    fn spec_validation() {
        assert!(small(1.0, 15, vec![RuleKind::Cv]).validate().is_err());
        assert!(small(-1.0, 80, vec![RuleKind::Cv]).validate().is_err());
        let mut s = small(1.0, 80, vec![RuleKind::Cv]);
        s.runs = 0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn config_json() {
        let s = ExperimentSpec::from_json(r#"{"profile":"lambda2","operator":"psi2","sigma2":1,"n":320}"#)
            .unwrap();
        assert_eq!(s.runs, 200);
        assert_eq!(s.dim, 35);
        assert_eq!(s.rules, vec![RuleKind::Cv, RuleKind::Predict]);
        assert_eq!(s.noise_shape, NoiseShape::PerCoordinate);
        assert!(ExperimentSpec::from_json(
            r#"{"profile":"lambda2","operator":"psi2","sigma2":1,"n":320,"extra":1}"#
        )
        .is_err());
        let full = serde_json::to_string(&s).unwrap();
        assert_eq!(ExperimentSpec::from_json(&full).unwrap(), s);
    }

    #[test]
    fn rule_names() {
        for r in [RuleKind::Predict, RuleKind::Cv, RuleKind::Theorem1, RuleKind::Fixed(4)] {
            assert_eq!(r.to_string().parse::<RuleKind>().unwrap(), r);
        }
        assert!("fixed:0".parse::<RuleKind>().is_err());
    }

    #[test]
    fn results_csv_shapes_and_errors() {
        let mut out = Vec::new();
        write_results_to(&[], None, &mut out).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap().lines().count(), 1);
        assert!(read_results_from(&out[..]).unwrap().is_empty());

        let cell =
            run_cell_with(&small(1.0, 64, vec![RuleKind::Cv, RuleKind::Predict]), Execution::Sequential)
                .unwrap();
        let mut out = Vec::new();
        write_results_to(std::slice::from_ref(&cell), Some("test run"), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(text.lines().count(), 4);
        assert_eq!(read_results_from(text.as_bytes()).unwrap(), vec![cell]);

        let broken = text.replace(",predict,", ",bogus,");
        match read_results_from(broken.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn table_layout() {
        let specs = table1_specs(1.0, 1, 0, NoiseShape::PerCoordinate);
        assert_eq!(specs.len(), 45);
        assert_eq!(
            (specs[0].profile, specs[0].n, specs[0].operator),
            (ProfileKind::LAMBDA1, 80, TestOperator::Psi1)
        );
        assert_eq!((specs[5].n, specs[5].operator), (320, TestOperator::Psi3));
        assert_eq!(specs[15].profile, ProfileKind::Poly2);
    }
}
