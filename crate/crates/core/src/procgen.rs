//! Generators for the stochastic objects of the simulation study: eigenvalue
//! profiles, Gaussian designs, test operators, linear-model data, ARH(1),
//! finite moving-average processes and functional ARCH(1).
//!
//! Randomness comes from [`RngStream`], a ChaCha8 generator keyed by a 64-bit
//! seed and a 64-bit stream id. Gaussian variates use the ziggurat sampler of
//! `rand_distr::StandardNormal`, so a `(seed, stream)` pair yields the same
//! sequence on every platform.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::hilbert::{
    apply_slice, check_dim, fourier_unchecked, operator_norm, project_grid, trapezoid_weights, uniform_grid,
    HilbertVec, OperatorMat,
};
use crate::spectral::SampleView;

/// Stream id reserved for drawing the Gaussian test operator.
pub const OPERATOR_STREAM: u64 = u64::MAX;

/// A reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RngStream {
    pub seed: u64,
    pub stream: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut r = ChaCha8Rng::seed_from_u64(self.seed);
        r.set_stream(self.stream);
        r
    }

    /// Independent sub-stream identified by `tag`.
    pub fn child(&self, tag: u64) -> Self {
        Self {
            seed: splitmix64(self.seed ^ splitmix64(tag.wrapping_add(0x5851_f42d_4c95_7f2d))),
            stream: self.stream,
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Eigenvalue decay family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProfileKind {
    /// `λ_k ∝ ρ^{k−1}`; `lambda1` is `ρ = 1/2`.
    Geometric(f64),
    /// `λ_k ∝ k^{-2}` (`lambda2`).
    Poly2,
    /// `λ_k ∝ k^{-1.1}` (`lambda3`).
    Poly11,
}

impl ProfileKind {
    pub const LAMBDA1: ProfileKind = ProfileKind::Geometric(0.5);
    pub const TABLE: [ProfileKind; 3] = [Self::LAMBDA1, Self::Poly2, Self::Poly11];
}

impl fmt::Display for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Geometric(r) if *r == 0.5 => f.write_str("lambda1"),
            Self::Geometric(r) => write!(f, "geometric:{r}"),
            Self::Poly2 => f.write_str("lambda2"),
            Self::Poly11 => f.write_str("lambda3"),
        }
    }
}

impl FromStr for ProfileKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda1" => Ok(Self::LAMBDA1),
            "lambda2" => Ok(Self::Poly2),
            "lambda3" => Ok(Self::Poly11),
            _ => match s.strip_prefix("geometric:") {
                Some(r) => r
                    .parse()
                    .map(Self::Geometric)
                    .map_err(|_| invalid(format!("bad geometric ratio in {s:?}"))),
                None => Err(invalid(format!("unknown eigenvalue profile {s:?}"))),
            },
        }
    }
}

string_serde!(ProfileKind);

/// Eigenvalues `λ_1 > … > λ_d > 0` normalized to sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenProfile {
    kind: ProfileKind,
    values: Vec<f64>,
}

impl EigenProfile {
    pub fn kind(&self) -> ProfileKind {
        self.kind
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }
}

pub fn eigen_profile(kind: ProfileKind, dim: usize) -> Result<EigenProfile> {
    if dim == 0 {
        return Err(invalid("profile dimension must be at least 1"));
    }
    let weights: Vec<f64> = match kind {
        ProfileKind::Geometric(rho) => {
            if !(rho > 0.0 && rho < 1.0) {
                return Err(invalid(format!("geometric ratio {rho} must lie in (0, 1)")));
            }
            (0..dim).map(|k| rho.powi(k as i32)).collect()
        }
        ProfileKind::Poly2 => (1..=dim).map(|k| (k as f64).powi(-2)).collect(),
        ProfileKind::Poly11 => (1..=dim).map(|k| (k as f64).powf(-1.1)).collect(),
    };
    let total: f64 = weights.iter().sum();
    Ok(EigenProfile { kind, values: weights.into_iter().map(|w| w / total).collect() })
}

/// Zero-mean Gaussian coefficient vectors with coordinate variances `variances`.
fn gaussian_rows<R: Rng>(variances: &[f64], n: usize, rng: &mut R) -> SampleView {
    let sd: Vec<f64> = variances.iter().map(|v| v.sqrt()).collect();
    let d = sd.len();
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        for s in &sd {
            let z: f64 = rng.sample(StandardNormal);
            data.push(s * z);
        }
    }
    SampleView::from_flat_unchecked(n, d, data, true)
}

/// `n` i.i.d. draws with independent coordinates, coordinate `j` having
/// variance `λ_{j+1}`.
pub fn gaussian_sample<R: Rng>(profile: &EigenProfile, n: usize, rng: &mut R) -> SampleView {
    gaussian_rows(&profile.values, n, rng)
}

/// How noise variance is spread across coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NoiseShape {
    /// Variance `σ² λ_j`: the design's profile, total `σ²`.
    Profile,
    /// Variance `σ²/d` per coordinate, total `σ²`.
    Isotropic,
    /// Variance `σ²` per coordinate, total `dσ²`. Reproduces the published
    /// simulation table.
    #[default]
    PerCoordinate,
}

impl fmt::Display for NoiseShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Profile => "profile",
            Self::Isotropic => "isotropic",
            Self::PerCoordinate => "per-coordinate",
        })
    }
}

impl FromStr for NoiseShape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "profile" => Ok(Self::Profile),
            "isotropic" => Ok(Self::Isotropic),
            "per-coordinate" => Ok(Self::PerCoordinate),
            _ => Err(invalid(format!("unknown noise shape {s:?}"))),
        }
    }
}

string_serde!(NoiseShape);

pub fn noise_variances(profile: &EigenProfile, shape: NoiseShape, sigma2: f64) -> Vec<f64> {
    let d = profile.dim();
    match shape {
        NoiseShape::Profile => profile.values.iter().map(|l| sigma2 * l).collect(),
        NoiseShape::Isotropic => vec![sigma2 / d as f64; d],
        NoiseShape::PerCoordinate => vec![sigma2; d],
    }
}

/// `n` i.i.d. Gaussian noise vectors shaped by `shape`.
pub fn noise_sample<R: Rng>(
    profile: &EigenProfile,
    shape: NoiseShape,
    sigma2: f64,
    n: usize,
    rng: &mut R,
) -> Result<SampleView> {
    if !(sigma2 > 0.0 && sigma2.is_finite()) {
        return Err(invalid(format!("noise variance must be positive, got {sigma2}")));
    }
    Ok(gaussian_rows(&noise_variances(profile, shape, sigma2), n, rng))
}

/// Test operator family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    /// `ψ_ii = 1`, zero elsewhere.
    Psi1Identity,
    /// i.i.d. standard normal `ψ_ij`, drawn once from the given seed.
    Psi2Gaussian { seed: u64 },
    /// `ψ_ij = 1/(ij)`.
    Psi3Harmonic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub dim: usize,
    pub target_norm: f64,
}

impl OperatorSpec {
    pub fn new(kind: OperatorKind, dim: usize) -> Self {
        Self { kind, dim, target_norm: 1.0 }
    }

    pub fn with_norm(mut self, target_norm: f64) -> Self {
        self.target_norm = target_norm;
        self
    }
}

/// Builds the operator matrix, entry `(j, i) = ψ_ij`, rescaled so its
/// operator norm equals `target_norm`.
pub fn make_operator(spec: &OperatorSpec) -> Result<OperatorMat> {
    let d = spec.dim;
    if d == 0 {
        return Err(invalid("operator dimension must be at least 1"));
    }
    if !(spec.target_norm >= 0.0 && spec.target_norm.is_finite()) {
        return Err(invalid("target norm must be finite and non-negative"));
    }
    let mut m = OperatorMat::zeros(d, d);
    let entries = m.entries_mut();
    match spec.kind {
        OperatorKind::Psi1Identity => {
            for i in 0..d {
                entries[i * d + i] = 1.0;
            }
        }
        OperatorKind::Psi2Gaussian { seed } => {
            let mut rng = RngStream::new(seed, OPERATOR_STREAM).rng();
            for i in 0..d {
                for j in 0..d {
                    entries[j * d + i] = rng.sample(StandardNormal);
                }
            }
        }
        OperatorKind::Psi3Harmonic => {
            for i in 0..d {
                for j in 0..d {
                    entries[j * d + i] = 1.0 / ((i + 1) * (j + 1)) as f64;
                }
            }
        }
    }
    let norm = operator_norm(&m);
    Ok(m.scaled(spec.target_norm / norm))
}

/// Noise configuration for [`gen_linear_model`]; `sigma2 = 0` means `ε ≡ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub shape: NoiseShape,
    pub sigma2: f64,
}

/// `Y_k = Ψ(X_k) + ε_k` with `X` and `ε` drawn from independent sub-streams.
pub fn gen_linear_model(
    psi: &OperatorMat,
    profile: &EigenProfile,
    noise: NoiseSpec,
    n: usize,
    stream: &RngStream,
) -> Result<(SampleView, SampleView)> {
    check_dim(profile.dim(), psi.dim_in())?;
    let x = gaussian_sample(profile, n, &mut stream.child(0).rng());
    let y = respond(psi, &x, profile, noise, stream)?;
    Ok((x, y))
}

/// Responses for a given design; noise comes from `stream.child(1)`.
pub(crate) fn respond(
    psi: &OperatorMat,
    x: &SampleView,
    profile: &EigenProfile,
    noise: NoiseSpec,
    stream: &RngStream,
) -> Result<SampleView> {
    let n = x.len();
    let d_out = psi.dim_out();
    let mut data = Vec::with_capacity(n * d_out);
    for r in x.rows() {
        data.extend(apply_slice(psi, r));
    }
    if noise.sigma2 != 0.0 {
        if d_out != profile.dim() {
            return Err(invalid("noise profile dimension must match the response dimension"));
        }
        let eps = noise_sample(profile, noise.shape, noise.sigma2, n, &mut stream.child(1).rng())?;
        for (y, e) in data.iter_mut().zip(eps.as_flat()) {
            *y += e;
        }
    }
    Ok(SampleView::from_flat_unchecked(n, d_out, data, true))
}

/// `X_{k+1} = Ψ(X_k) + δ_{k+1}` from `X_0 = 0`, discarding `burn_in` states.
pub fn gen_arh1<R: Rng>(
    psi: &OperatorMat,
    innovations: &EigenProfile,
    n: usize,
    burn_in: usize,
    rng: &mut R,
) -> Result<SampleView> {
    let d = innovations.dim();
    check_dim(d, psi.dim_in())?;
    check_dim(d, psi.dim_out())?;
    let norm = operator_norm(psi);
    if norm >= 1.0 {
        return Err(invalid(format!("ARH(1) needs a contraction, operator norm is {norm}")));
    }
    let sd: Vec<f64> = innovations.values.iter().map(|v| v.sqrt()).collect();
    let mut state = vec![0.0; d];
    let mut data = Vec::with_capacity(n * d);
    for k in 0..burn_in + n {
        let mut next = apply_slice(psi, &state);
        for (x, s) in next.iter_mut().zip(&sd) {
            let z: f64 = rng.sample(StandardNormal);
            *x += s * z;
        }
        state = next;
        if k >= burn_in {
            data.extend_from_slice(&state);
        }
    }
    Ok(SampleView::from_flat_unchecked(n, d, data, true))
}

/// Moving average `X_t = Σ_k b_k(δ_{t−k})` over a finite list of operators.
pub fn gen_linear_process<R: Rng>(
    coeffs: &[OperatorMat],
    innovations: &EigenProfile,
    n: usize,
    rng: &mut R,
) -> Result<SampleView> {
    if coeffs.is_empty() {
        return Err(invalid("linear process needs at least one coefficient operator"));
    }
    let d = innovations.dim();
    for b in coeffs {
        check_dim(d, b.dim_in())?;
        check_dim(d, b.dim_out())?;
    }
    let draw = |rng: &mut R| gaussian_rows(&innovations.values, 1, rng).as_flat().to_vec();
    // buffer[k] holds δ_{t−k}
    let mut buffer: Vec<Vec<f64>> = (0..coeffs.len()).map(|_| draw(rng)).collect();
    buffer.reverse();
    let mut data = Vec::with_capacity(n * d);
    for t in 0..n {
        if t > 0 {
            buffer.pop();
            buffer.insert(0, draw(rng));
        }
        let mut x = vec![0.0; d];
        for (b, delta) in coeffs.iter().zip(&buffer) {
            for (xi, v) in x.iter_mut().zip(apply_slice(b, delta)) {
                *xi += v;
            }
        }
        data.extend(x);
    }
    Ok(SampleView::from_flat_unchecked(n, d, data, true))
}

/// Functional ARCH(1) on a uniform grid of `G` points in `[0, 1]`.
///
/// `beta` holds kernel values `β(t_i, s_j)`, `delta` the intercept `δ(t_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FarchSpec {
    grid: Vec<f64>,
    delta: Vec<f64>,
    beta: OperatorMat,
}

impl FarchSpec {
    pub fn new(delta: Vec<f64>, beta: OperatorMat) -> Result<Self> {
        let g = delta.len();
        if g == 0 {
            return Err(invalid("FARCH grid must have at least one point"));
        }
        check_dim(g, beta.dim_in())?;
        check_dim(g, beta.dim_out())?;
        if delta.iter().any(|&v| v.is_nan() || v < 0.0) {
            return Err(invalid("δ must be non-negative on the grid"));
        }
        if beta.entries().iter().any(|&v| v < 0.0) {
            return Err(invalid("β must be non-negative on the grid"));
        }
        Ok(Self { grid: uniform_grid(g), delta, beta })
    }

    /// Evaluates coefficient-space `δ = Σ δ_j f_j` and
    /// `β(t, s) = Σ B_ij f_i(t) f_j(s)` on a `grid_size`-point grid.
    pub fn from_coefficients(delta: &HilbertVec, beta: &OperatorMat, grid_size: usize) -> Result<Self> {
        check_dim(delta.dim(), beta.dim_out())?;
        let grid = uniform_grid(grid_size);
        let basis = |t: f64, d: usize| (0..d).map(move |j| fourier_unchecked(j, t));
        let dvals = grid
            .iter()
            .map(|&t| delta.as_slice().iter().zip(basis(t, delta.dim())).map(|(c, f)| c * f).sum())
            .collect();
        let mut kernel = Vec::with_capacity(grid_size * grid_size);
        for &t in &grid {
            let ft: Vec<f64> = basis(t, beta.dim_out()).collect();
            for &s in &grid {
                let fs: Vec<f64> = basis(s, beta.dim_in()).collect();
                let mut v = 0.0;
                for (i, fti) in ft.iter().enumerate() {
                    for (j, fsj) in fs.iter().enumerate() {
                        v += beta.get(i, j) * fti * fsj;
                    }
                }
                kernel.push(v);
            }
        }
        Self::new(dvals, OperatorMat::new(grid_size, grid_size, kernel)?)
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }
}

/// Simulated FARCH(1) path on the grid.
#[derive(Debug, Clone)]
pub struct FarchPath {
    pub grid: Vec<f64>,
    pub y: SampleView,
    pub sigma2: SampleView,
}

impl FarchPath {
    /// Fourier coefficients of each `y_k`.
    pub fn coefficients(&self, dim: usize) -> Result<SampleView> {
        let mut rows = Vec::with_capacity(self.y.len());
        for r in self.y.rows() {
            let samples: Vec<(f64, f64)> = self.grid.iter().copied().zip(r.iter().copied()).collect();
            rows.push(project_grid(&samples, dim)?);
        }
        SampleView::from_rows(&rows, false)
    }
}

/// Running mean of `y²` beyond which the recursion is declared divergent.
pub const FARCH_DIVERGENCE: f64 = 1e6;

/// `σ²_k = δ + ∫ β(·, s) y²_{k−1}(s) ds`, `y_k = ε_k σ_k`, from `y_0 = 0`.
pub fn gen_farch1<R: Rng>(spec: &FarchSpec, n: usize, burn_in: usize, rng: &mut R) -> Result<FarchPath> {
    let g = spec.grid.len();
    let weights = if g == 1 { vec![1.0] } else { trapezoid_weights(&spec.grid) };
    let mut prev_sq = vec![0.0; g];
    let mut y_data = Vec::with_capacity(n * g);
    let mut s_data = Vec::with_capacity(n * g);
    let mut running = 0.0;
    for k in 0..burn_in + n {
        let weighted: Vec<f64> = prev_sq.iter().zip(&weights).map(|(y, w)| y * w).collect();
        let sig2: Vec<f64> =
            spec.delta.iter().zip(apply_slice(&spec.beta, &weighted)).map(|(d, b)| d + b).collect();
        if let Some(pos) = sig2.iter().position(|&s| s.is_nan() || s < 0.0) {
            return Err(Error::Diverged(format!("σ² negative or undefined at grid point {pos}, step {k}")));
        }
        let y: Vec<f64> = sig2
            .iter()
            .map(|s| {
                let z: f64 = rng.sample(StandardNormal);
                z * s.sqrt()
            })
            .collect();
        let mean_sq = y.iter().map(|v| v * v).sum::<f64>() / g as f64;
        running += (mean_sq - running) / (k + 1) as f64;
        if !running.is_finite() || running > FARCH_DIVERGENCE {
            return Err(Error::Diverged(format!(
                "running mean of y² exceeded {FARCH_DIVERGENCE} at step {k}"
            )));
        }
        prev_sq = y.iter().map(|v| v * v).collect();
        if k >= burn_in {
            y_data.extend_from_slice(&y);
            s_data.extend_from_slice(&sig2);
        }
    }
    Ok(FarchPath {
        grid: spec.grid.clone(),
        y: SampleView::from_flat_unchecked(n, g, y_data, false),
        sigma2: SampleView::from_flat_unchecked(n, g, s_data, false),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_closed_forms() {
        let p = eigen_profile(ProfileKind::LAMBDA1, 35).unwrap();
        let expect = 0.5 / (1.0 - 0.5f64.powi(35));
        assert!((p.values()[0] - expect).abs() < 1e-15);
        assert!((p.values()[0] - 0.50000000001455).abs() < 1e-13);

        let p2 = eigen_profile(ProfileKind::Poly2, 35).unwrap();
        let s: f64 = (1..=35).map(|k| 1.0 / (k * k) as f64).sum();
        assert!((p2.values()[0] - 1.0 / s).abs() < 1e-15);
        assert!((p2.values()[0] - 0.618518347).abs() < 1e-9);

        for kind in ProfileKind::TABLE {
            assert_eq!(eigen_profile(kind, 1).unwrap().values(), &[1.0]);
        }
        assert!(eigen_profile(ProfileKind::Geometric(1.0), 5).is_err());
        assert!(eigen_profile(ProfileKind::Poly2, 0).is_err());
    }

    #[test]
    fn profile_names_round_trip() {
        for kind in
            [ProfileKind::LAMBDA1, ProfileKind::Poly2, ProfileKind::Poly11, ProfileKind::Geometric(0.3)]
        {
            assert_eq!(kind.to_string().parse::<ProfileKind>().unwrap(), kind);
        }
        assert!("lambda4".parse::<ProfileKind>().is_err());
        for s in [NoiseShape::Profile, NoiseShape::Isotropic, NoiseShape::PerCoordinate] {
            assert_eq!(s.to_string().parse::<NoiseShape>().unwrap(), s);
        }
    }

    #[test]
    fn operators_have_unit_norm() {
        let id = make_operator(&OperatorSpec::new(OperatorKind::Psi1Identity, 35)).unwrap();
        assert_eq!(id, OperatorMat::identity(35));

        let h = make_operator(&OperatorSpec::new(OperatorKind::Psi3Harmonic, 2)).unwrap();
        // [[1, 1/2], [1/2, 1/4]] is rank one with singular value 1 + 1/4.
        let expect = [1.0, 0.5, 0.5, 0.25].map(|v| v / 1.25);
        for (a, b) in h.entries().iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!((operator_norm(&h) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gaussian_operator_is_fixed_by_seed() {
        let spec = OperatorSpec::new(OperatorKind::Psi2Gaussian { seed: 4 }, 10);
        assert_eq!(make_operator(&spec).unwrap(), make_operator(&spec).unwrap());
        let other = OperatorSpec::new(OperatorKind::Psi2Gaussian { seed: 5 }, 10);
        assert_ne!(make_operator(&spec).unwrap(), make_operator(&other).unwrap());
    }

    #[test]
    fn noise_rejects_non_positive_variance() {
        let p = eigen_profile(ProfileKind::Poly2, 4).unwrap();
        let mut rng = RngStream::new(0, 0).rng();
        assert!(noise_sample(&p, NoiseShape::Profile, 0.0, 3, &mut rng).is_err());
        assert!(noise_sample(&p, NoiseShape::Profile, -1.0, 3, &mut rng).is_err());
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let p = eigen_profile(ProfileKind::Poly11, 6).unwrap();
        let a = gaussian_sample(&p, 20, &mut RngStream::new(3, 9).rng());
        let b = gaussian_sample(&p, 20, &mut RngStream::new(3, 9).rng());
        let c = gaussian_sample(&p, 20, &mut RngStream::new(3, 10).rng());
        assert_eq!(a, b);
        assert_ne!(a, c);
        let s = RngStream::new(3, 9);
        assert_ne!(s.child(0), s.child(1));
    }

    #[test]
    fn linear_model_special_cases() {
        let p = eigen_profile(ProfileKind::LAMBDA1, 5).unwrap();
        let psi = make_operator(&OperatorSpec::new(OperatorKind::Psi3Harmonic, 5)).unwrap();
        let stream = RngStream::new(1, 2);
        let exact = NoiseSpec { shape: NoiseShape::Profile, sigma2: 0.0 };
        let (x, y) = gen_linear_model(&psi, &p, exact, 30, &stream).unwrap();
        for (xr, yr) in x.rows().zip(y.rows()) {
            assert_eq!(apply_slice(&psi, xr), yr);
        }

        let noisy = NoiseSpec { shape: NoiseShape::Isotropic, sigma2: 0.5 };
        let (_, y0) = gen_linear_model(&OperatorMat::zeros(5, 5), &p, noisy, 30, &stream).unwrap();
        let eps = noise_sample(&p, noisy.shape, noisy.sigma2, 30, &mut stream.child(1).rng()).unwrap();
        assert_eq!(y0.as_flat(), eps.as_flat());
    }

    #[test]
    fn arh_rejects_non_contraction() {
        let p = eigen_profile(ProfileKind::Poly2, 3).unwrap();
        let mut rng = RngStream::new(0, 0).rng();
        assert!(gen_arh1(&OperatorMat::identity(3), &p, 10, 0, &mut rng).is_err());
        let zero = gen_arh1(&OperatorMat::zeros(3, 3), &p, 10, 5, &mut rng).unwrap();
        assert_eq!(zero.len(), 10);
    }

    #[test]
    fn arh_with_zero_operator_is_innovation_sequence() {
        let p = eigen_profile(ProfileKind::Poly2, 3).unwrap();
        let x = gen_arh1(&OperatorMat::zeros(3, 3), &p, 8, 0, &mut RngStream::new(5, 1).rng()).unwrap();
        let iid = gaussian_sample(&p, 8, &mut RngStream::new(5, 1).rng());
        assert_eq!(x.as_flat(), iid.as_flat());
    }

    #[test]
    fn linear_process_identity_is_iid() {
        let p = eigen_profile(ProfileKind::Poly2, 3).unwrap();
        let x =
            gen_linear_process(&[OperatorMat::identity(3)], &p, 8, &mut RngStream::new(5, 1).rng()).unwrap();
        let iid = gaussian_sample(&p, 8, &mut RngStream::new(5, 1).rng());
        assert_eq!(x.as_flat(), iid.as_flat());
        assert!(gen_linear_process(&[], &p, 8, &mut RngStream::new(5, 1).rng()).is_err());
    }

    #[test]
    fn farch_without_feedback_scales_noise() {
        let spec = FarchSpec::new(vec![4.0; 5], OperatorMat::zeros(5, 5)).unwrap();
        let path = gen_farch1(&spec, 10, 3, &mut RngStream::new(2, 0).rng()).unwrap();
        assert!(path.sigma2.as_flat().iter().all(|&s| s == 4.0));
        assert_eq!(path.y.len(), 10);
        assert!(FarchSpec::new(vec![-1.0; 2], OperatorMat::zeros(2, 2)).is_err());
        let neg = OperatorMat::new(1, 1, vec![-0.1]).unwrap();
        assert!(FarchSpec::new(vec![1.0], neg).is_err());
    }

    #[test]
    fn farch_divergence_is_detected() {
        let spec = FarchSpec::new(vec![1.0], OperatorMat::new(1, 1, vec![50.0]).unwrap()).unwrap();
        let r = gen_farch1(&spec, 10_000, 0, &mut RngStream::new(2, 0).rng());
        assert!(matches!(r, Err(Error::Diverged(_))));
    }
}
