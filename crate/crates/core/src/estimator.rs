//! The truncated principal-component estimator
//! `Ψ̂_K = Σ_{j≤K} (1/λ̂_j) (Δ̂ v̂_j) ⊗ v̂_j` and its truncation rules.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hilbert::{apply, apply_slice, check_dim, dot, hs_norm, operator_norm, HilbertVec, OperatorMat};
use crate::spectral::{eigen_system, EigenSystem, MomentSums, SampleView};

/// `√n / ln n`, the tuning sequence used in the simulation study.
pub fn m_default(n: usize) -> Result<f64> {
    if n < 8 {
        return Err(invalid(format!("m_default needs n >= 8, got {n}")));
    }
    let n = n as f64;
    Ok(n.sqrt() / n.ln())
}

/// How the test block is paired in cross-validation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CvPairing {
    /// `(X_ℓ, Y_ℓ)`: the regression setting.
    #[default]
    Aligned,
    /// `(X_ℓ, Y_{ℓ+1})`: the literal index shift of the published CV objective.
    Shifted,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RuleVariant {
    Fixed(usize),
    /// `K = min(B_n, E_n, ⌊m_n⌋)`.
    Theorem1 {
        m_n: f64,
    },
    /// `K = max{j : λ̂_1/λ̂_j ≤ m_n}`.
    Predict {
        m_n: f64,
    },
    Cv {
        k_max: usize,
        n_test: usize,
        pairing: CvPairing,
    },
}

/// A truncation rule. `scaled` switches the `theorem1` thresholds to the
/// ratios `λ̂_1/λ̂_j` and `λ̂_1/α̂_j`; the other rules ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationRule {
    pub variant: RuleVariant,
    pub scaled: bool,
}

impl TruncationRule {
    pub fn fixed(k: usize) -> Self {
        Self { variant: RuleVariant::Fixed(k), scaled: true }
    }

    pub fn theorem1(m_n: f64, scaled: bool) -> Self {
        Self { variant: RuleVariant::Theorem1 { m_n }, scaled }
    }

    pub fn predict(m_n: f64) -> Self {
        Self { variant: RuleVariant::Predict { m_n }, scaled: true }
    }

    pub fn cv(k_max: usize, n_test: usize) -> Self {
        Self { variant: RuleVariant::Cv { k_max, n_test, pairing: CvPairing::Aligned }, scaled: true }
    }

    pub fn validate(&self) -> Result<()> {
        match self.variant {
            RuleVariant::Fixed(0) => Err(invalid("fixed K must be at least 1")),
            RuleVariant::Theorem1 { m_n } | RuleVariant::Predict { m_n } if m_n.is_nan() || m_n <= 0.0 => {
                Err(invalid(format!("m_n must be positive, got {m_n}")))
            }
            RuleVariant::Cv { k_max, n_test, .. } if k_max == 0 || n_test == 0 => {
                Err(invalid("cross-validation needs k_max >= 1 and n_test >= 1"))
            }
            _ => Ok(()),
        }
    }

    pub fn m_n(&self) -> Option<f64> {
        match self.variant {
            RuleVariant::Theorem1 { m_n } | RuleVariant::Predict { m_n } => Some(m_n),
            _ => None,
        }
    }
}

impl fmt::Display for TruncationRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.variant {
            RuleVariant::Fixed(k) => write!(f, "fixed:{k}"),
            RuleVariant::Theorem1 { .. } if self.scaled => f.write_str("theorem1:scaled"),
            RuleVariant::Theorem1 { .. } => f.write_str("theorem1:unscaled"),
            RuleVariant::Predict { .. } => f.write_str("predict"),
            RuleVariant::Cv { k_max, n_test, pairing: CvPairing::Aligned } => {
                write!(f, "cv:{k_max}:{n_test}")
            }
            RuleVariant::Cv { k_max, n_test, pairing: CvPairing::Shifted } => {
                write!(f, "cv-shifted:{k_max}:{n_test}")
            }
        }
    }
}

/// `B_n`, `E_n` and `⌊m_n⌋` combined; falls back to `K = 1` when no index
/// qualifies.
pub fn choose_k_theorem1(eig: &EigenSystem, m_n: f64, scaled: bool) -> Result<usize> {
    let values = eig.values();
    if values.is_empty() {
        return Err(invalid("empty spectrum"));
    }
    if m_n.is_nan() || m_n <= 0.0 {
        return Err(invalid(format!("m_n must be positive, got {m_n}")));
    }
    let top = if scaled { values[0] } else { 1.0 };
    let within = |x: f64| x > 0.0 && top / x <= m_n;
    let b_n = values.iter().take_while(|&&l| within(l)).count();
    let e_n = eig.gaps().iter().take_while(|&&a| within(a)).count();
    let cap = m_n.floor() as usize;
    Ok(b_n.min(e_n).min(cap).max(1))
}

/// Largest `j` with `λ̂_j > 0` and `λ̂_1/λ̂_j ≤ m_n`.
pub fn choose_k_predict(eig: &EigenSystem, m_n: f64) -> Result<usize> {
    let values = eig.values();
    let top = values.first().copied().unwrap_or(0.0);
    if top.is_nan() || top <= 0.0 {
        return Err(Error::DegenerateCovariance);
    }
    if m_n.is_nan() || m_n < 1.0 {
        return Err(invalid(format!("predict rule needs m_n >= 1, got {m_n}")));
    }
    Ok(values.iter().take_while(|&&l| l > 0.0 && top / l <= m_n).count())
}

/// Cross-validated truncation level.
///
/// Fits `Ψ̂_k`, `k = 1..=k_max`, on the first `n − n_test` pairs and returns
/// the `k` minimizing the squared prediction error on the remaining block.
/// Ties, up to round-off, go to the smaller `k`.
pub fn choose_k_cv(x: &SampleView, y: &SampleView, k_max: usize, n_test: usize) -> Result<usize> {
    choose_k_cv_paired(x, y, k_max, n_test, CvPairing::Aligned)
}

pub fn choose_k_cv_paired(
    x: &SampleView,
    y: &SampleView,
    k_max: usize,
    n_test: usize,
    pairing: CvPairing,
) -> Result<usize> {
    check_dim(x.len(), y.len())?;
    let n = x.len();
    if n_test == 0 || n_test >= n {
        return Err(invalid(format!("need 1 <= n_test < n, got n_test = {n_test}, n = {n}")));
    }
    if k_max == 0 {
        return Err(invalid("k_max must be at least 1"));
    }
    let (x, y) = (x.centered(), y.centered());
    let split = n - n_test;
    let train = MomentSums::from_pairs(&x.slice(0..split), &y.slice(0..split))?;
    let (tx, ty) = match pairing {
        CvPairing::Aligned => (x.slice(split..n), y.slice(split..n)),
        CvPairing::Shifted => (x.slice(split..n - 1), y.slice(split + 1..n)),
    };
    cv_select(&train, &tx, &ty, k_max)
}

/// CV sweep against precomputed training moments.
pub(crate) fn cv_select(
    train: &MomentSums,
    test_x: &SampleView,
    test_y: &SampleView,
    k_max: usize,
) -> Result<usize> {
    let eig = eigen_system(&train.covariance()?)?;
    let delta = train.cross_covariance()?;
    let rank = eig.rank();
    if rank == 0 {
        return Err(Error::DegenerateCovariance);
    }
    let k_max = if k_max > rank {
        log::warn!("cv: k_max {k_max} exceeds training rank {rank}; clamping");
        rank
    } else {
        k_max
    };

    let mut residual = test_y.as_flat().to_vec();
    let d_out = test_y.dim();
    let scale: f64 = residual.iter().map(|r| r * r).sum();
    let tol = 1e-12 * scale + f64::MIN_POSITIVE;
    let mut best = (f64::INFINITY, 1);
    for k in 1..=k_max {
        let v = eig.vectors()[k - 1].as_slice();
        let w: Vec<f64> = apply_slice(&delta, v).into_iter().map(|c| c / eig.values()[k - 1]).collect();
        for (i, xr) in test_x.rows().enumerate() {
            let s = dot(xr, v);
            for (r, wi) in residual[i * d_out..(i + 1) * d_out].iter_mut().zip(&w) {
                *r -= s * wi;
            }
        }
        let err: f64 = residual.iter().map(|r| r * r).sum();
        if err < best.0 - tol {
            best = (err, k);
        }
    }
    Ok(best.1)
}

/// Fitted operator with the data needed to inspect or extend it.
#[derive(Debug, Clone)]
pub struct FittedModel {
    psi_hat: OperatorMat,
    k: usize,
    eig: EigenSystem,
    delta_hat: OperatorMat,
    rule: TruncationRule,
    n: usize,
    x_mean: Option<HilbertVec>,
    y_mean: Option<HilbertVec>,
}

/// `Σ_{j≤k} (1/λ̂_j) (Δ̂ v̂_j) v̂_jᵀ`.
pub(crate) fn truncated_operator(eig: &EigenSystem, delta: &OperatorMat, k: usize) -> OperatorMat {
    let (d_out, d_in) = delta.shape();
    let mut m = vec![0.0; d_out * d_in];
    for j in 0..k {
        let v = eig.vectors()[j].as_slice();
        let w = apply_slice(delta, v);
        let inv = 1.0 / eig.values()[j];
        for (row, wi) in m.chunks_mut(d_in).zip(&w) {
            let c = wi * inv;
            for (e, vj) in row.iter_mut().zip(v) {
                *e += c * vj;
            }
        }
    }
    OperatorMat::from_raw(d_out, d_in, m)
}

/// Resolves a non-CV rule against an eigensystem and clamps to the rank.
pub(crate) fn resolve_k(eig: &EigenSystem, rule: &TruncationRule) -> Result<usize> {
    let k = match rule.variant {
        RuleVariant::Fixed(k) => k,
        RuleVariant::Theorem1 { m_n } => choose_k_theorem1(eig, m_n, rule.scaled)?,
        RuleVariant::Predict { m_n } => choose_k_predict(eig, m_n)?,
        RuleVariant::Cv { .. } => return Err(invalid("cross-validation needs the sample")),
    };
    Ok(clamp_to_rank(k, eig))
}

fn clamp_to_rank(k: usize, eig: &EigenSystem) -> usize {
    let rank = eig.rank();
    if k > rank {
        log::warn!("truncation level {k} exceeds rank {rank} of the empirical covariance; clamping");
        rank
    } else {
        k
    }
}

impl FittedModel {
    /// Builds the estimator from moments and an already chosen `k`.
    pub(crate) fn from_moments(moments: &MomentSums, rule: TruncationRule, k: Option<usize>) -> Result<Self> {
        let eig = eigen_system(&moments.covariance()?)?;
        if eig.rank() == 0 {
            return Err(Error::DegenerateCovariance);
        }
        let k = match k {
            Some(k) => clamp_to_rank(k, &eig),
            None => resolve_k(&eig, &rule)?,
        };
        let delta_hat = moments.cross_covariance()?;
        Ok(Self {
            psi_hat: truncated_operator(&eig, &delta_hat, k),
            k,
            eig,
            delta_hat,
            rule,
            n: moments.count(),
            x_mean: None,
            y_mean: None,
        })
    }

    /// Builds the estimator from a supplied eigensystem of `Ĉ` and
    /// cross-covariance `Δ̂`, e.g. with population eigenvectors injected.
    pub fn from_spectrum(
        eig: EigenSystem,
        delta_hat: OperatorMat,
        rule: TruncationRule,
        n: usize,
    ) -> Result<Self> {
        rule.validate()?;
        check_dim(eig.dim(), delta_hat.dim_in())?;
        if eig.rank() == 0 {
            return Err(Error::DegenerateCovariance);
        }
        let k = resolve_k(&eig, &rule)?;
        Ok(Self {
            psi_hat: truncated_operator(&eig, &delta_hat, k),
            k,
            eig,
            delta_hat,
            rule,
            n,
            x_mean: None,
            y_mean: None,
        })
    }

    pub fn psi_hat(&self) -> &OperatorMat {
        &self.psi_hat
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eigen(&self) -> &EigenSystem {
        &self.eig
    }

    pub fn delta_hat(&self) -> &OperatorMat {
        &self.delta_hat
    }

    pub fn rule(&self) -> &TruncationRule {
        &self.rule
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Sample means removed before fitting, when the inputs were not flagged
    /// zero-mean.
    pub fn means(&self) -> (Option<&HilbertVec>, Option<&HilbertVec>) {
        (self.x_mean.as_ref(), self.y_mean.as_ref())
    }

    /// Same data, different truncation level.
    pub fn with_k(&self, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("truncation level must be at least 1"));
        }
        let k = clamp_to_rank(k, &self.eig);
        Ok(Self {
            psi_hat: truncated_operator(&self.eig, &self.delta_hat, k),
            k,
            rule: TruncationRule::fixed(k),
            ..self.clone()
        })
    }

    pub fn to_file(&self, header: Option<String>) -> ModelFile {
        ModelFile {
            header,
            dim_in: self.psi_hat.dim_in(),
            dim_out: self.psi_hat.dim_out(),
            k: self.k,
            rule: self.rule.to_string(),
            m_n: self.rule.m_n(),
            eigenvalues: self.eig.values().to_vec(),
            psi_hat: self.psi_hat.clone(),
            x_mean: self.x_mean.clone(),
            y_mean: self.y_mean.clone(),
        }
    }
}

/// Fits `Ψ̂_K` to paired samples.
pub fn fit(x: &SampleView, y: &SampleView, rule: TruncationRule) -> Result<FittedModel> {
    rule.validate()?;
    check_dim(x.len(), y.len())?;
    if x.len() < 2 {
        return Err(invalid(format!("need at least 2 observations, got {}", x.len())));
    }
    let x_mean = (!x.zero_mean()).then(|| x.mean());
    let y_mean = (!y.zero_mean()).then(|| y.mean());
    let (xc, yc) = (x.centered(), y.centered());
    let k = match rule.variant {
        RuleVariant::Cv { k_max, n_test, pairing } => {
            Some(choose_k_cv_paired(&xc, &yc, k_max, n_test, pairing)?)
        }
        _ => None,
    };
    let moments = MomentSums::from_pairs(&xc, &yc)?;
    let mut model = FittedModel::from_moments(&moments, rule, k)?;
    model.x_mean = x_mean;
    model.y_mean = y_mean;
    Ok(model)
}

fn predict_with(
    psi: &OperatorMat,
    x_mean: Option<&HilbertVec>,
    y_mean: Option<&HilbertVec>,
    x: &HilbertVec,
) -> Result<HilbertVec> {
    let centered = match x_mean {
        Some(m) => x.sub(m)?,
        None => x.clone(),
    };
    let out = apply(psi, &centered)?;
    match y_mean {
        Some(m) => out.add(m),
        None => Ok(out),
    }
}

pub fn predict(model: &FittedModel, x: &HilbertVec) -> Result<HilbertVec> {
    predict_with(&model.psi_hat, model.x_mean.as_ref(), model.y_mean.as_ref(), x)
}

/// Operator-norm and Hilbert-Schmidt distance to the true operator.
pub fn estimation_error(model: &FittedModel, psi_true: &OperatorMat) -> Result<(f64, f64)> {
    let diff = model.psi_hat.sub(psi_true)?;
    Ok((operator_norm(&diff), hs_norm(&diff)))
}

/// Mean of `‖Ψ(x) − Ψ̂(x)‖²` over the rows of `x_new`.
pub fn prediction_mse(psi_true: &OperatorMat, model: &FittedModel, x_new: &SampleView) -> Result<f64> {
    if x_new.is_empty() {
        return Err(Error::EmptySample);
    }
    check_dim(psi_true.dim_in(), x_new.dim())?;
    let mut total = 0.0;
    for r in x_new.rows() {
        let x = HilbertVec::from_vec_unchecked(r.to_vec());
        let truth = apply_slice(psi_true, r);
        let est = predict(model, &x)?;
        total += truth.iter().zip(est.as_slice()).map(|(a, b)| (a - b).powi(2)).sum::<f64>();
    }
    Ok(total / x_new.len() as f64)
}

/// Serialized form of a fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub header: Option<String>,
    pub dim_in: usize,
    pub dim_out: usize,
    #[serde(rename = "K")]
    pub k: usize,
    pub rule: String,
    pub m_n: Option<f64>,
    pub eigenvalues: Vec<f64>,
    pub psi_hat: OperatorMat,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_mean: Option<HilbertVec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y_mean: Option<HilbertVec>,
}

impl ModelFile {
    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim_out, self.psi_hat.dim_out())?;
        check_dim(self.dim_in, self.psi_hat.dim_in())?;
        if self.eigenvalues.len() < self.k {
            return Err(invalid("model lists fewer eigenvalues than K"));
        }
        Ok(())
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(s)?;
        m.validate()?;
        Ok(m)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn predict(&self, x: &HilbertVec) -> Result<HilbertVec> {
        predict_with(&self.psi_hat, self.x_mean.as_ref(), self.y_mean.as_ref(), x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn system(values: &[f64]) -> EigenSystem {
        let d = values.len();
        let vectors = (0..d).map(|j| HilbertVec::basis(d, j)).collect();
        EigenSystem::from_parts(values.to_vec(), vectors).unwrap()
    }

    #[test]
    fn m_default_values() {
        assert!((m_default(80).unwrap() - 80f64.sqrt() / 80f64.ln()).abs() < 1e-15);
        assert!((m_default(80).unwrap() - 2.041).abs() < 1e-3);
        assert!((m_default(8).unwrap() - 1.360).abs() < 1e-3);
        assert!(m_default(7).is_err());
        let mut prev = m_default(8).unwrap();
        for n in 9..5000 {
            let m = m_default(n).unwrap();
            assert!(m > prev, "not increasing at n = {n}");
            prev = m;
        }
    }

    #[test]
    fn theorem1_examples() {
        let e = system(&[1.0, 0.5, 0.25, 0.125]);
        // B_n = 3, gaps (0.5, 0.25, 0.125, 0.125) give E_n = 2.
        assert_eq!(choose_k_theorem1(&e, 5.0, false).unwrap(), 2);
        let big = system(&[100.0, 90.0, 80.0, 70.0, 60.0, 50.0]);
        assert_eq!(choose_k_theorem1(&big, 4.5, false).unwrap(), 4);
        let tied = system(&[1.0, 1.0, 0.5]);
        assert_eq!(choose_k_theorem1(&tied, 10.0, false).unwrap(), 1);
        assert!(choose_k_theorem1(&system(&[]), 3.0, true).is_err());
    }

    #[test]
    fn theorem1_scaled_matches_unscaled_on_unit_top() {
        let e = system(&[1.0, 0.6, 0.3, 0.1]);
        for m in [1.5, 3.0, 7.0, 20.0] {
            assert_eq!(choose_k_theorem1(&e, m, true).unwrap(), choose_k_theorem1(&e, m, false).unwrap());
        }
    }

    #[test]
    fn predict_examples() {
        let e = system(&[1.0, 0.5, 0.1, 0.01]);
        assert_eq!(choose_k_predict(&e, 12.0).unwrap(), 3);
        assert_eq!(choose_k_predict(&system(&[2.0, 2.0, 1.0]), 1.0).unwrap(), 2);
        assert_eq!(choose_k_predict(&system(&[2.0, 1.0]), 1.0).unwrap(), 1);
        let scaled = system(&[1000.0, 500.0, 100.0, 10.0]);
        assert_eq!(choose_k_predict(&scaled, 12.0).unwrap(), 3);
        assert!(matches!(choose_k_predict(&system(&[0.0, 0.0]), 2.0), Err(Error::DegenerateCovariance)));
        // zero eigenvalues never qualify
        assert_eq!(choose_k_predict(&system(&[1.0, 0.0]), 1e300).unwrap(), 1);
    }

    #[test]
    fn rule_validation() {
        assert!(TruncationRule::fixed(0).validate().is_err());
        assert!(TruncationRule::predict(0.0).validate().is_err());
        assert!(TruncationRule::cv(0, 5).validate().is_err());
        assert!(TruncationRule::cv(3, 0).validate().is_err());
        assert!(TruncationRule::theorem1(2.0, false).validate().is_ok());
    }

    #[test]
    fn cv_rejects_oversized_test_block() {
        let x = SampleView::from_flat(4, 1, vec![1.0, 2.0, 3.0, 4.0], true).unwrap();
        assert!(choose_k_cv(&x, &x, 1, 4).is_err());
        assert!(choose_k_cv(&x, &x, 1, 0).is_err());
    }

    #[test]
    fn zero_response_gives_zero_model() {
        let x = SampleView::from_flat(4, 2, vec![1.0, 0.0, 0.0, 2.0, -1.0, 0.5, 0.3, -0.7], true).unwrap();
        let y = SampleView::from_flat(4, 3, vec![0.0; 12], true).unwrap();
        let m = fit(&x, &y, TruncationRule::fixed(2)).unwrap();
        assert!(m.psi_hat().entries().iter().all(|&v| v == 0.0));
        assert_eq!(m.psi_hat().shape(), (3, 2));
        assert_eq!(choose_k_cv(&x, &y, 2, 2).unwrap(), 1);
    }

    #[test]
    fn degenerate_design_is_an_error() {
        let x = SampleView::from_flat(3, 2, vec![0.0; 6], true).unwrap();
        assert!(matches!(fit(&x, &x, TruncationRule::fixed(1)), Err(Error::DegenerateCovariance)));
        assert!(fit(&x.slice(0..1), &x.slice(0..1), TruncationRule::fixed(1)).is_err());
    }

    #[test]
    fn fixed_rule_is_clamped_to_rank() {
        // rank one design
        let x = SampleView::from_flat(3, 2, vec![1.0, 0.0, 2.0, 0.0, -1.0, 0.0], true).unwrap();
        let m = fit(&x, &x, TruncationRule::fixed(2)).unwrap();
        assert_eq!(m.k(), 1);
    }

    #[test]
    fn centering_is_undone_in_prediction() {
        let x = SampleView::from_flat(4, 1, vec![1.0, 2.0, 3.0, 4.0], false).unwrap();
        let y = SampleView::from_flat(4, 1, vec![12.0, 14.0, 16.0, 18.0], false).unwrap();
        let m = fit(&x, &y, TruncationRule::fixed(1)).unwrap();
        let p = predict(&m, &HilbertVec::new(vec![5.0]).unwrap()).unwrap();
        assert!((p[0] - 20.0).abs() < 1e-12);
        let file = m.to_file(None);
        assert!((file.predict(&HilbertVec::new(vec![0.0]).unwrap()).unwrap()[0] - 10.0).abs() < 1e-12);
    }

    #[test]
    fn rule_strings() {
        assert_eq!(TruncationRule::fixed(3).to_string(), "fixed:3");
        assert_eq!(TruncationRule::predict(2.0).to_string(), "predict");
        assert_eq!(TruncationRule::theorem1(2.0, false).to_string(), "theorem1:unscaled");
        assert_eq!(TruncationRule::cv(35, 100).to_string(), "cv:35:100");
    }

    #[test]
    fn model_file_rejects_unknown_keys_and_bad_shapes() {
        let good = r#"{"dim_in":1,"dim_out":1,"K":1,"rule":"fixed:1","m_n":null,"eigenvalues":[1.0],"psi_hat":[[0.5]]}"#;
        assert!(ModelFile::from_json(good).is_ok());
        let extra = good.replace("\"K\":1", "\"K\":1,\"bogus\":2");
        assert!(ModelFile::from_json(&extra).is_err());
        let short = good.replace("\"K\":1", "\"K\":2");
        assert!(ModelFile::from_json(&short).is_err());
        let wrong = good.replace("\"dim_in\":1", "\"dim_in\":2");
        assert!(ModelFile::from_json(&wrong).is_err());
    }
}
