//! Empirical covariance operators, their eigensystems, and checkers for the
//! classical perturbation bounds relating `C` and `Ĉ`.

use std::f64::consts::SQRT_2;
use std::ops::Range;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Error, Result};
use crate::hilbert::{check_dim, dot, operator_norm, HilbertVec, OperatorMat};
use crate::linalg::sym_eigen;
use crate::procgen::RngStream;

/// Eigenvalues below this fraction of `λ̂_1` count as zero for division.
pub const RANK_TOLERANCE: f64 = 1e-12;

/// `n` observations of dimension `dim`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleView {
    n: usize,
    dim: usize,
    data: Vec<f64>,
    zero_mean: bool,
}

impl SampleView {
    pub fn from_rows(rows: &[HilbertVec], zero_mean: bool) -> Result<Self> {
        let dim = rows.first().map_or(0, HilbertVec::dim);
        let mut data = Vec::with_capacity(rows.len() * dim);
        for r in rows {
            check_dim(dim, r.dim())?;
            data.extend_from_slice(r.as_slice());
        }
        Ok(Self { n: rows.len(), dim, data, zero_mean })
    }

    pub fn from_flat(n: usize, dim: usize, data: Vec<f64>, zero_mean: bool) -> Result<Self> {
        check_dim(n * dim, data.len())?;
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { n, dim, data, zero_mean })
    }

    pub(crate) fn from_flat_unchecked(n: usize, dim: usize, data: Vec<f64>, zero_mean: bool) -> Self {
        debug_assert_eq!(data.len(), n * dim);
        Self { n, dim, data, zero_mean }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn zero_mean(&self) -> bool {
        self.zero_mean
    }

    pub fn with_zero_mean(mut self, zero_mean: bool) -> Self {
        self.zero_mean = zero_mean;
        self
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_vec(&self, i: usize) -> HilbertVec {
        HilbertVec::from_vec_unchecked(self.row(i).to_vec())
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks(self.dim.max(1)).take(self.n)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Contiguous block of observations, keeping the zero-mean flag.
    pub fn slice(&self, range: Range<usize>) -> Self {
        let data = self.data[range.start * self.dim..range.end * self.dim].to_vec();
        Self { n: range.len(), dim: self.dim, data, zero_mean: self.zero_mean }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self { data: self.data.iter().map(|x| c * x).collect(), ..self.clone() }
    }

    pub fn mean(&self) -> HilbertVec {
        let mut m = vec![0.0; self.dim];
        for r in self.rows() {
            for (a, b) in m.iter_mut().zip(r) {
                *a += b;
            }
        }
        let n = self.n.max(1) as f64;
        HilbertVec::from_vec_unchecked(m.into_iter().map(|x| x / n).collect())
    }

    /// Mean-subtracted copy flagged as zero-mean; identity if already flagged.
    pub fn centered(&self) -> Self {
        if self.zero_mean {
            return self.clone();
        }
        let mean = self.mean();
        let mut data = self.data.clone();
        for r in data.chunks_mut(self.dim.max(1)) {
            for (x, m) in r.iter_mut().zip(mean.as_slice()) {
                *x -= m;
            }
        }
        Self { data, zero_mean: true, ..*self }
    }
}

/// Running sums `Σ X_k X_kᵀ` and `Σ Y_k X_kᵀ` over zero-mean observations.
///
/// Sums over disjoint blocks can be merged, which lets a training block and
/// a test block share work with the full-sample estimate.
#[derive(Debug, Clone)]
pub struct MomentSums {
    n: usize,
    dim_in: usize,
    dim_out: usize,
    xx: Vec<f64>,
    yx: Vec<f64>,
}

impl MomentSums {
    pub fn new(dim_in: usize, dim_out: usize) -> Self {
        Self { n: 0, dim_in, dim_out, xx: vec![0.0; dim_in * dim_in], yx: vec![0.0; dim_out * dim_in] }
    }

    /// Accumulates aligned pairs; both views are used as given (no centering).
    pub fn from_pairs(x: &SampleView, y: &SampleView) -> Result<Self> {
        check_dim(x.len(), y.len())?;
        let mut s = Self::new(x.dim(), y.dim());
        for (xr, yr) in x.rows().zip(y.rows()) {
            s.push(xr, yr);
        }
        Ok(s)
    }

    pub fn push(&mut self, x: &[f64], y: &[f64]) {
        let d = self.dim_in;
        for (i, &xi) in x.iter().enumerate() {
            let row = &mut self.xx[i * d..i * d + i + 1];
            for (acc, &xj) in row.iter_mut().zip(&x[..=i]) {
                *acc += xi * xj;
            }
        }
        for (i, &yi) in y.iter().enumerate() {
            let row = &mut self.yx[i * d..(i + 1) * d];
            for (acc, &xj) in row.iter_mut().zip(x) {
                *acc += yi * xj;
            }
        }
        self.n += 1;
    }

    pub fn merge(&mut self, other: &MomentSums) -> Result<()> {
        check_dim(self.dim_in, other.dim_in)?;
        check_dim(self.dim_out, other.dim_out)?;
        for (a, b) in self.xx.iter_mut().zip(&other.xx) {
            *a += b;
        }
        for (a, b) in self.yx.iter_mut().zip(&other.yx) {
            *a += b;
        }
        self.n += other.n;
        Ok(())
    }

    pub fn count(&self) -> usize {
        self.n
    }

    pub fn covariance(&self) -> Result<OperatorMat> {
        if self.n == 0 {
            return Err(Error::EmptySample);
        }
        let d = self.dim_in;
        let inv = 1.0 / self.n as f64;
        let mut c = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..=i {
                let v = self.xx[i * d + j] * inv;
                c[i * d + j] = v;
                c[j * d + i] = v;
            }
        }
        Ok(OperatorMat::from_raw(d, d, c))
    }

    pub fn cross_covariance(&self) -> Result<OperatorMat> {
        if self.n == 0 {
            return Err(Error::EmptySample);
        }
        let inv = 1.0 / self.n as f64;
        Ok(OperatorMat::from_raw(self.dim_out, self.dim_in, self.yx.iter().map(|v| v * inv).collect()))
    }
}

/// `Ĉ = (1/n) Σ X_k ⊗ X_k`, after mean removal unless the sample is flagged
/// zero-mean.
pub fn empirical_covariance(x: &SampleView) -> Result<OperatorMat> {
    if x.is_empty() {
        return Err(Error::EmptySample);
    }
    let xc = x.centered();
    let mut s = MomentSums::new(x.dim(), 0);
    for r in xc.rows() {
        s.push(r, &[]);
    }
    s.covariance()
}

/// `Δ̂ = (1/n) Σ X_k ⊗ Y_k`, a `dim(Y) x dim(X)` matrix.
pub fn empirical_cross_covariance(x: &SampleView, y: &SampleView) -> Result<OperatorMat> {
    check_dim(x.len(), y.len())?;
    if x.is_empty() {
        return Err(Error::EmptySample);
    }
    MomentSums::from_pairs(&x.centered(), &y.centered())?.cross_covariance()
}

/// Descending eigenvalues, orthonormal eigenvectors and spectral gaps of a
/// symmetric positive semi-definite operator.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSystem {
    values: Vec<f64>,
    vectors: Vec<HilbertVec>,
    gaps: Vec<f64>,
}

impl EigenSystem {
    /// Builds a system from precomputed parts; gaps are derived from `values`.
    pub fn from_parts(values: Vec<f64>, vectors: Vec<HilbertVec>) -> Result<Self> {
        check_dim(values.len(), vectors.len())?;
        if values.windows(2).any(|w| w[1] > w[0]) {
            return Err(invalid("eigenvalues must be sorted in descending order"));
        }
        for v in &vectors {
            check_dim(values.len(), v.dim())?;
        }
        let gaps = spectral_gaps(&values);
        Ok(Self { values, vectors, gaps })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn vectors(&self) -> &[HilbertVec] {
        &self.vectors
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    /// Number of eigenvalues above `RANK_TOLERANCE · λ̂_1`.
    pub fn rank(&self) -> usize {
        let Some(&top) = self.values.first() else { return 0 };
        if top <= 0.0 {
            return 0;
        }
        self.values.iter().take_while(|&&l| l > RANK_TOLERANCE * top).count()
    }

    /// `Σ λ_j v_j v_jᵀ`.
    pub fn reconstruct(&self) -> OperatorMat {
        let d = self.dim();
        let mut m = vec![0.0; d * d];
        for (l, v) in self.values.iter().zip(&self.vectors) {
            let v = v.as_slice();
            for i in 0..d {
                for j in 0..d {
                    m[i * d + j] += l * v[i] * v[j];
                }
            }
        }
        OperatorMat::from_raw(d, d, m)
    }
}

/// Gaps `α_1 = λ_1 − λ_2`, `α_j = min(λ_{j−1} − λ_j, λ_j − λ_{j+1})`, with
/// `λ_{d+1} = 0`.
pub fn spectral_gaps(values: &[f64]) -> Vec<f64> {
    let d = values.len();
    let at = |j: usize| if j < d { values[j] } else { 0.0 };
    (0..d)
        .map(|j| {
            let below = at(j) - at(j + 1);
            if j == 0 {
                below
            } else {
                (at(j - 1) - at(j)).min(below)
            }
        })
        .collect()
}

/// Full eigendecomposition of a covariance-type operator.
///
/// The input is symmetrized first and negative round-off eigenvalues are
/// clamped to zero.
pub fn eigen_system(c: &OperatorMat) -> Result<EigenSystem> {
    let (mut values, vectors) = raw_eigen(c)?;
    for l in values.iter_mut() {
        if *l < 0.0 {
            *l = 0.0;
        }
    }
    EigenSystem::from_parts(values, vectors)
}

/// Eigendecomposition of a symmetric operator with eigenvalues kept as
/// computed, negative ones included.
pub fn symmetric_eigen(c: &OperatorMat) -> Result<EigenSystem> {
    let (values, vectors) = raw_eigen(c)?;
    EigenSystem::from_parts(values, vectors)
}

fn raw_eigen(c: &OperatorMat) -> Result<(Vec<f64>, Vec<HilbertVec>)> {
    let s = c.symmetrized()?;
    let d = s.dim_in();
    let (values, vecs) = sym_eigen(s.entries(), d);
    let vectors = (0..d)
        .map(|col| HilbertVec::from_vec_unchecked((0..d).map(|row| vecs[row * d + col]).collect()))
        .collect();
    Ok((values, vectors))
}

/// `sign(⟨reference, v⟩) · v`; a zero inner product leaves `v` unchanged.
pub fn align_sign(reference: &HilbertVec, v: &HilbertVec) -> HilbertVec {
    if dot(reference.as_slice(), v.as_slice()) < 0.0 {
        v.scaled(-1.0)
    } else {
        v.clone()
    }
}

fn check_pair(c: &OperatorMat, chat: &OperatorMat) -> Result<()> {
    if !c.is_square() {
        return Err(invalid("C must be square"));
    }
    check_dim(c.dim_in(), chat.dim_in())?;
    check_dim(c.dim_out(), chat.dim_out())
}

/// Shared state for the three checkers: both spectra and `‖Ĉ − C‖`.
struct Perturbation {
    values: Vec<f64>,
    vectors: Vec<HilbertVec>,
    hat_values: Vec<f64>,
    hat_vectors: Vec<HilbertVec>,
    /// Signed so that a self-test can deliberately break the bounds.
    dist: f64,
}

impl Perturbation {
    fn new(c: &OperatorMat, chat: &OperatorMat, sign: f64) -> Result<Self> {
        check_pair(c, chat)?;
        let (values, vectors) = raw_eigen(c)?;
        let (hat_values, hat_vectors) = raw_eigen(chat)?;
        let dist = sign * operator_norm(&chat.symmetrized()?.sub(&c.symmetrized()?)?);
        Ok(Self { values, vectors, hat_values, hat_vectors, dist })
    }

    fn weyl(&self) -> f64 {
        self.values
            .iter()
            .zip(&self.hat_values)
            .map(|(l, lh)| (l - lh).abs() - self.dist)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    fn eigvec(&self) -> f64 {
        let gaps = spectral_gaps(&self.hat_values);
        log::trace!("eigenvector bound uses α̂_1 = λ̂_1 − λ̂_2");
        let bound = 2.0 * SQRT_2 * self.dist;
        let mut worst = -bound;
        for (j, &gap) in gaps.iter().enumerate() {
            if gap <= 0.0 {
                continue;
            }
            let aligned = align_sign(&self.vectors[j], &self.hat_vectors[j]);
            let dist = self.vectors[j].sub(&aligned).expect("same dimension").norm();
            worst = worst.max(gap * dist - bound);
        }
        worst
    }

    fn projection(&self, j: usize, m: usize) -> Result<f64> {
        let d = self.values.len();
        if j == 0 || j > m || m > d {
            return Err(invalid(format!("need 1 <= j <= m <= {d}, got j = {j}, m = {m}")));
        }
        let next = if m < d { self.hat_values[m] } else { 0.0 };
        let gap = next - self.hat_values[j - 1];
        if gap == 0.0 {
            return Err(invalid(format!("λ̂_{} = λ̂_{j}: bound is vacuous", m + 1)));
        }
        let vj = self.vectors[j - 1].as_slice();
        let lhs: f64 = self.hat_vectors[m..].iter().map(|vk| dot(vj, vk.as_slice()).powi(2)).sum();
        let rhs = 4.0 * self.dist * self.dist.abs() / (gap * gap);
        Ok(lhs - rhs)
    }
}

/// `max_j (|λ_j − λ̂_j| − ‖C − Ĉ‖)`; Weyl's inequality says this is `≤ 0`.
pub fn check_weyl(c: &OperatorMat, chat: &OperatorMat) -> Result<f64> {
    Ok(Perturbation::new(c, chat, 1.0)?.weyl())
}

/// `max_j (α̂_j ‖v_j − ĉ_j v̂_j‖ − 2√2 ‖Ĉ − C‖)` over `j` with `α̂_j > 0`,
/// where `ĉ_j = sign⟨v_j, v̂_j⟩`; the bound says this is `≤ 0`.
pub fn check_eigvec_bound(c: &OperatorMat, chat: &OperatorMat) -> Result<f64> {
    Ok(Perturbation::new(c, chat, 1.0)?.eigvec())
}

/// `‖v_j − P_{M̂_m} v_j‖² − 4‖C − Ĉ‖² / (λ̂_{m+1} − λ̂_j)²` for one-based
/// `1 <= j <= m <= d`, with `λ̂_{d+1} = 0`; the bound says this is `≤ 0`.
pub fn check_projection_bound(c: &OperatorMat, chat: &OperatorMat, j: usize, m: usize) -> Result<f64> {
    Perturbation::new(c, chat, 1.0)?.projection(j, m)
}

/// Worst violations seen by [`inequality_suite`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityReport {
    pub trials: usize,
    pub weyl: f64,
    pub eigvec: f64,
    pub projection: f64,
}

impl InequalityReport {
    pub fn max_violation(&self) -> f64 {
        self.weyl.max(self.eigvec).max(self.projection)
    }

    pub fn passes(&self, slack: f64) -> bool {
        self.trials == 0 || self.max_violation() <= slack
    }
}

/// Runs all three checkers on `trials` random pairs `(C, Ĉ)` of dimension
/// `dim`.
///
/// `C` has random eigenvectors and a random positive spectrum. Even trials
/// take `Ĉ` as the empirical covariance of a Gaussian sample from `C`; odd
/// trials add a symmetric perturbation of random scale. With `corrupt` set
/// every bound is evaluated with the perturbation norm negated, which must
/// produce violations.
pub fn inequality_suite(trials: usize, dim: usize, seed: u64, corrupt: bool) -> Result<InequalityReport> {
    if dim < 2 {
        return Err(invalid("inequality suite needs dim >= 2"));
    }
    let sign = if corrupt { -1.0 } else { 1.0 };
    let mut report = InequalityReport {
        trials,
        weyl: f64::NEG_INFINITY,
        eigvec: f64::NEG_INFINITY,
        projection: f64::NEG_INFINITY,
    };
    for t in 0..trials {
        let mut rng = RngStream::new(seed, t as u64).rng();
        let (c, chat) = random_pair(dim, t % 2 == 0, &mut rng);
        let p = Perturbation::new(&c, &chat, sign)?;
        report.weyl = report.weyl.max(p.weyl());
        report.eigvec = report.eigvec.max(p.eigvec());
        for j in 1..=dim {
            for m in j..=dim {
                match p.projection(j, m) {
                    Ok(v) => report.projection = report.projection.max(v),
                    Err(Error::InvalidArgument(_)) => {}
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(report)
}

/// Random orthogonal matrix (columns) by Gram-Schmidt on Gaussian columns.
pub(crate) fn random_orthonormal<R: Rng>(dim: usize, rng: &mut R) -> Vec<Vec<f64>> {
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while basis.len() < dim {
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        for _ in 0..2 {
            for b in &basis {
                let p = dot(&v, b);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= p * y;
                }
            }
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-8 {
            basis.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    basis
}

fn random_pair<R: Rng>(dim: usize, sampled: bool, rng: &mut R) -> (OperatorMat, OperatorMat) {
    let q = random_orthonormal(dim, rng);
    let mut spectrum: Vec<f64> = (0..dim).map(|_| rng.random_range(0.01..2.0)).collect();
    spectrum.sort_by(|a, b| b.total_cmp(a));
    let mut c = vec![0.0; dim * dim];
    for (l, v) in spectrum.iter().zip(&q) {
        for i in 0..dim {
            for j in 0..dim {
                c[i * dim + j] += l * v[i] * v[j];
            }
        }
    }
    let c = OperatorMat::from_raw(dim, dim, c).symmetrized().expect("square");

    let chat = if sampled {
        let n = rng.random_range(dim / 2..20 * dim).max(1);
        let mut s = MomentSums::new(dim, 0);
        let mut x = vec![0.0; dim];
        for _ in 0..n {
            x.iter_mut().for_each(|xi| *xi = 0.0);
            for (l, v) in spectrum.iter().zip(&q) {
                let z: f64 = rng.sample(StandardNormal);
                let a = l.sqrt() * z;
                for (xi, vi) in x.iter_mut().zip(v) {
                    *xi += a * vi;
                }
            }
            s.push(&x, &[]);
        }
        s.covariance().expect("non-empty")
    } else {
        let scale = 10f64.powf(rng.random_range(-4.0..0.0));
        let mut e = vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let z: f64 = rng.sample(StandardNormal);
                e[i * dim + j] = scale * z;
                e[j * dim + i] = scale * z;
            }
        }
        c.add(&OperatorMat::from_raw(dim, dim, e)).expect("same shape")
    };
    (c, chat)
}
