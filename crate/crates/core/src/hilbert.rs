//! Coefficient representation of Hilbert-space elements and bounded operators.
//!
//! Elements are stored as coordinates in a fixed orthonormal basis, operators
//! as dense matrices whose rows index the output basis and whose columns index
//! the input basis. With an orthonormal basis, the Hilbert-Schmidt norm is the
//! Frobenius norm and the operator norm is the largest singular value.

use std::f64::consts::{PI, SQRT_2};
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::sym_eigen;

/// Coordinates of an element of a `d`-dimensional truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct HilbertVec(Vec<f64>);

impl HilbertVec {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if let Some(pos) = coords.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self(coords))
    }

    pub(crate) fn from_vec_unchecked(coords: Vec<f64>) -> Self {
        debug_assert!(coords.iter().all(|x| x.is_finite()));
        Self(coords)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    /// The `j`-th standard basis vector (zero-based).
    pub fn basis(dim: usize, j: usize) -> Self {
        let mut v = vec![0.0; dim];
        v[j] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn norm(&self) -> f64 {
        dot(&self.0, &self.0).sqrt()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self(self.0.iter().map(|x| c * x).collect())
    }

    pub fn add(&self, other: &HilbertVec) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &HilbertVec) -> Result<Self> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }
}

impl TryFrom<Vec<f64>> for HilbertVec {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<HilbertVec> for Vec<f64> {
    fn from(v: HilbertVec) -> Self {
        v.0
    }
}

impl Index<usize> for HilbertVec {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Matrix of a bounded linear operator, `dim_out x dim_in`, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct OperatorMat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl OperatorMat {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite(pos));
        }
        Ok(Self { rows, cols, data })
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            check_dim(c, row.len())?;
            data.extend(row);
        }
        Self::new(r, c, data)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_raw(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(dim: usize) -> Self {
        Self::diag(&vec![1.0; dim])
    }

    pub fn diag(values: &[f64]) -> Self {
        let d = values.len();
        let mut m = Self::zeros(d, d);
        for (i, v) in values.iter().enumerate() {
            m.data[i * d + i] = *v;
        }
        m
    }

    pub fn dim_out(&self) -> usize {
        self.rows
    }

    pub fn dim_in(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn entries_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> HilbertVec {
        HilbertVec((0..self.rows).map(|i| self.get(i, j)).collect())
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j);
            }
        }
        t
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_raw(self.rows, self.cols, self.data.iter().map(|x| c * x).collect())
    }

    pub fn add(&self, other: &OperatorMat) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(Self::from_raw(self.rows, self.cols, data))
    }

    pub fn sub(&self, other: &OperatorMat) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(Self::from_raw(self.rows, self.cols, data))
    }

    /// Composition `self ∘ other`.
    pub fn matmul(&self, other: &OperatorMat) -> Result<Self> {
        check_dim(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        Ok(out)
    }

    pub fn symmetrized(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(invalid(format!("expected a square operator, got {}x{}", self.rows, self.cols)));
        }
        let d = self.rows;
        let mut s = self.clone();
        for i in 0..d {
            for j in 0..i {
                let m = 0.5 * (self.get(i, j) + self.get(j, i));
                s.data[i * d + j] = m;
                s.data[j * d + i] = m;
            }
        }
        Ok(s)
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows.min(self.cols) {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    fn check_same_shape(&self, other: &OperatorMat) -> Result<()> {
        check_dim(self.rows, other.rows)?;
        check_dim(self.cols, other.cols)
    }
}

impl TryFrom<Vec<Vec<f64>>> for OperatorMat {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<OperatorMat> for Vec<Vec<f64>> {
    fn from(m: OperatorMat) -> Self {
        m.to_rows()
    }
}

/// Basis attached to a coefficient space.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    Abstract,
    /// `f_0 = 1`, `f_{2k-1} = √2 sin(2πkt)`, `f_{2k} = √2 cos(2πkt)` on `[0, 1]`.
    Fourier01,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDescriptor {
    pub dim: usize,
    pub basis: BasisKind,
}

impl SpaceDescriptor {
    pub fn new(dim: usize, basis: BasisKind) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("space dimension must be at least 1"));
        }
        Ok(Self { dim, basis })
    }

    pub fn fourier(dim: usize) -> Result<Self> {
        Self::new(dim, BasisKind::Fourier01)
    }
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn inner(x: &HilbertVec, y: &HilbertVec) -> Result<f64> {
    check_dim(x.dim(), y.dim())?;
    Ok(dot(&x.0, &y.0))
}

/// `x ⊗ y`, the rank-one operator `v ↦ ⟨x, v⟩ y`.
pub fn tensor(x: &HilbertVec, y: &HilbertVec) -> OperatorMat {
    let (rows, cols) = (y.dim(), x.dim());
    let mut data = Vec::with_capacity(rows * cols);
    for yi in &y.0 {
        data.extend(x.0.iter().map(|xj| xj * yi));
    }
    OperatorMat::from_raw(rows, cols, data)
}

pub fn apply(a: &OperatorMat, x: &HilbertVec) -> Result<HilbertVec> {
    check_dim(a.dim_in(), x.dim())?;
    Ok(HilbertVec(apply_slice(a, &x.0)))
}

pub(crate) fn apply_slice(a: &OperatorMat, x: &[f64]) -> Vec<f64> {
    (0..a.rows).map(|i| dot(a.row(i), x)).collect()
}

pub fn hs_norm(a: &OperatorMat) -> f64 {
    dot(&a.data, &a.data).sqrt()
}

/// Largest singular value, via the top eigenvalue of the smaller Gram matrix.
pub fn operator_norm(a: &OperatorMat) -> f64 {
    if a.data.is_empty() {
        return 0.0;
    }
    let gram = if a.cols <= a.rows { a.transpose().matmul(a) } else { a.matmul(&a.transpose()) }
        .expect("Gram matrix shapes agree");
    let (values, _) = sym_eigen(&gram.data, gram.rows);
    values[0].max(0.0).sqrt()
}

/// Orthonormal Fourier basis function `f_j` on `[0, 1]`.
pub fn fourier_eval(j: usize, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("t = {t} lies outside [0, 1]")));
    }
    Ok(fourier_unchecked(j, t))
}

pub(crate) fn fourier_unchecked(j: usize, t: f64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let k = j.div_ceil(2) as f64;
    let arg = 2.0 * PI * k * t;
    if j % 2 == 1 {
        SQRT_2 * arg.sin()
    } else {
        SQRT_2 * arg.cos()
    }
}

/// Pointwise evaluation of `Σ_j x_j f_j(t)` on a grid.
pub fn eval_on_grid(space: &SpaceDescriptor, x: &HilbertVec, grid: &[f64]) -> Result<Vec<f64>> {
    if space.basis != BasisKind::Fourier01 {
        return Err(invalid("grid evaluation requires the fourier01 basis"));
    }
    check_dim(space.dim, x.dim())?;
    grid.iter()
        .map(|&t| {
            fourier_eval(0, t)?;
            Ok(x.0.iter().enumerate().map(|(j, c)| c * fourier_unchecked(j, t)).sum())
        })
        .collect()
}

/// Composite trapezoid weights for strictly increasing abscissae.
pub(crate) fn trapezoid_weights(t: &[f64]) -> Vec<f64> {
    let n = t.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let h = 0.5 * (t[i + 1] - t[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

/// Fourier coefficients `⟨curve, f_j⟩`, `j < dim`, by composite trapezoid
/// quadrature over the sample points.
pub fn project_grid(samples: &[(f64, f64)], dim: usize) -> Result<HilbertVec> {
    if dim == 0 {
        return Err(invalid("projection dimension must be at least 1"));
    }
    if samples.len() < 4 * dim {
        return Err(invalid(format!(
            "need at least {} sample points for dimension {dim}, got {}",
            4 * dim,
            samples.len()
        )));
    }
    for (i, w) in samples.windows(2).enumerate() {
        if w[1].0 <= w[0].0 {
            return Err(invalid(format!("sample abscissae not strictly increasing at index {}", i + 1)));
        }
    }
    let t: Vec<f64> = samples.iter().map(|s| s.0).collect();
    if t[0] < 0.0 || t[t.len() - 1] > 1.0 {
        return Err(invalid("sample abscissae must lie in [0, 1]"));
    }
    if let Some(pos) = samples.iter().position(|s| !s.1.is_finite()) {
        return Err(Error::NonFinite(pos));
    }
    let w = trapezoid_weights(&t);
    let coords = (0..dim)
        .map(|j| samples.iter().zip(&w).map(|(&(ti, yi), wi)| wi * yi * fourier_unchecked(j, ti)).sum())
        .collect();
    Ok(HilbertVec(coords))
}

/// `n` equispaced points covering `[0, 1]` including both endpoints.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}
