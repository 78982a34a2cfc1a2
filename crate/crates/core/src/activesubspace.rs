//! Active subspaces from a global least-squares quadratic model.
//!
//! Fit `f(x) ~ 1/2 x^T H x + v^T x + c` on samples in `[-1, 1]^m`, estimate the
//! averaged gradient outer product as `C = H S H + v v^T` (`S` the input
//! covariance convention), and split its eigenvectors into active and inactive
//! directions. Bootstrap replicates of the fit give eigenvalue ranges and
//! subspace-error estimates. As with any bootstrap over deterministic
//! simulation outputs, these ranges indicate variability only; they carry no
//! formal statistical interpretation.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::linalg::{lstsq, max_abs, orthonormality_defect};
use crate::qoi::{evaluate_batch, QoiEvaluator};
use crate::sampling::{sample, ParameterBox};
use crate::seeding::{child_seed, stream_rng};

/// Eigenvalues are floored at this fraction of the largest before log-gaps.
pub const EIGENVALUE_FLOOR: f64 = 1e-14;
/// Replicates whose resampled design is rank-deficient are redrawn this many times.
pub const BOOTSTRAP_RETRIES: usize = 10;
/// Log-gaps closer than this are treated as ties.
const GAP_TIE_TOLERANCE: f64 = 1e-9;

/// Covariance of the normalized inputs assumed when forming `C`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `C = H^2 + v v^T`.
    #[default]
    Identity,
    /// `C = H^2 / 3 + v v^T`, the covariance of the uniform density on `[-1, 1]^m`.
    Third,
}

impl Convention {
    pub fn variance(self) -> f64 {
        match self {
            Convention::Identity => 1.0,
            Convention::Third => 1.0 / 3.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::Identity => "identity",
            Convention::Third => "third",
        }
    }
}

/// Number of coefficients of a full quadratic in `m` variables.
pub fn quadratic_term_count(m: usize) -> usize {
    (m + 1) * (m + 2) / 2
}

/// Monomials `1, x_1..x_m, x_1^2, x_1 x_2, ..., x_m^2` (upper triangle, row-major).
pub fn quadratic_features(x: &[f64], out: &mut [f64]) {
    let m = x.len();
    out[0] = 1.0;
    out[1..=m].copy_from_slice(x);
    let mut k = m + 1;
    for i in 0..m {
        for j in i..m {
            out[k] = x[i] * x[j];
            k += 1;
        }
    }
}

pub fn quadratic_design(x: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, m) = x.shape();
    let p = quadratic_term_count(m);
    let mut design = DMatrix::zeros(n, p);
    let mut row = vec![0.0; p];
    let mut xi = vec![0.0; m];
    for i in 0..n {
        for (j, v) in xi.iter_mut().enumerate() {
            *v = x[(i, j)];
        }
        quadratic_features(&xi, &mut row);
        for (k, v) in row.iter().enumerate() {
            design[(i, k)] = *v;
        }
    }
    design
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticModel {
    pub hessian: DMatrix<f64>,
    pub gradient: DVector<f64>,
    pub constant: f64,
    pub residual_rms: f64,
    pub samples: usize,
    /// Fewer than twice as many samples as coefficients.
    pub undersampled: bool,
}

impl QuadraticModel {
    pub fn new(hessian: DMatrix<f64>, gradient: DVector<f64>, constant: f64) -> Result<Self> {
        let m = gradient.len();
        if hessian.shape() != (m, m) {
            return Err(contract(format!(
                "Hessian is {:?}, expected {m}x{m}",
                hessian.shape()
            )));
        }
        if max_abs(&(&hessian - hessian.transpose())) > 1e-12 * max_abs(&hessian).max(1.0) {
            return Err(contract("Hessian must be symmetric"));
        }
        Ok(Self {
            hessian,
            gradient,
            constant,
            residual_rms: 0.0,
            samples: 0,
            undersampled: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.gradient.len()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let x = DVector::from_column_slice(x);
        0.5 * x.dot(&(&self.hessian * &x)) + self.gradient.dot(&x) + self.constant
    }

    /// `H x + v`.
    pub fn grad(&self, x: &[f64]) -> DVector<f64> {
        &self.hessian * DVector::from_column_slice(x) + &self.gradient
    }

    pub fn to_record(&self) -> QuadraticRecord {
        QuadraticRecord {
            hessian: rows_of(&self.hessian),
            gradient: self.gradient.iter().copied().collect(),
            constant: self.constant,
            residual_rms: self.residual_rms,
            samples: self.samples,
        }
    }
}

/// Plain-array form of a [`QuadraticModel`] for JSON files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadraticRecord {
    pub hessian: Vec<Vec<f64>>,
    pub gradient: Vec<f64>,
    pub constant: f64,
    #[serde(default)]
    pub residual_rms: f64,
    #[serde(default)]
    pub samples: usize,
}

impl QuadraticRecord {
    pub fn into_model(self) -> Result<QuadraticModel> {
        let m = self.gradient.len();
        if self.hessian.len() != m || self.hessian.iter().any(|r| r.len() != m) {
            return Err(contract("Hessian rows must match the gradient length"));
        }
        let h = DMatrix::from_fn(m, m, |i, j| self.hessian[i][j]);
        let mut model = QuadraticModel::new(h, DVector::from_vec(self.gradient), self.constant)?;
        model.residual_rms = self.residual_rms;
        model.samples = self.samples;
        Ok(model)
    }
}

pub fn rows_of(a: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..a.nrows())
        .map(|i| a.row(i).iter().copied().collect())
        .collect()
}

fn check_inputs(x: &DMatrix<f64>, f: &DVector<f64>) -> Result<()> {
    if x.nrows() != f.len() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            found: f.len(),
        });
    }
    if x.ncols() == 0 {
        return Err(contract("inputs need at least one column"));
    }
    if x.iter().any(|v| !(v.abs() <= 1.0 + 1e-12)) {
        return Err(contract("inputs must be normalized to [-1, 1]^m"));
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(contract("outputs must be finite"));
    }
    Ok(())
}

/// Least-squares quadratic fit on normalized inputs.
pub fn fit_quadratic(x: &DMatrix<f64>, f: &DVector<f64>) -> Result<QuadraticModel> {
    check_inputs(x, f)?;
    fit_from_design(&quadratic_design(x), f, x.ncols())
}

fn fit_from_design(design: &DMatrix<f64>, f: &DVector<f64>, m: usize) -> Result<QuadraticModel> {
    let n = design.nrows();
    let p = quadratic_term_count(m);
    let beta = lstsq(design, f)?;
    let undersampled = n < 2 * p;
    if undersampled {
        log::warn!("quadratic fit with N = {n} samples for {p} coefficients (fewer than 2x)");
    }
    let residual = design * &beta - f;
    let constant = beta[0];
    let gradient = DVector::from_iterator(m, beta.iter().skip(1).take(m).copied());
    let mut hessian = DMatrix::zeros(m, m);
    let mut k = m + 1;
    for i in 0..m {
        for j in i..m {
            if i == j {
                hessian[(i, i)] = 2.0 * beta[k];
            } else {
                hessian[(i, j)] = beta[k];
                hessian[(j, i)] = beta[k];
            }
            k += 1;
        }
    }
    Ok(QuadraticModel {
        hessian,
        gradient,
        constant,
        residual_rms: (residual.norm_squared() / n as f64).sqrt(),
        samples: n,
        undersampled,
    })
}

/// `H S H + v v^T`, symmetrized.
pub fn c_matrix(model: &QuadraticModel, convention: Convention) -> DMatrix<f64> {
    let h = &model.hessian;
    let v = &model.gradient;
    let c = (h * h) * convention.variance() + v * v.transpose();
    (&c + c.transpose()) * 0.5
}

#[derive(Clone, Debug, PartialEq)]
pub struct Eigenpairs {
    /// Nonincreasing.
    pub values: DVector<f64>,
    /// Columns are eigenvectors, signs fixed by [`apply_sign_rule`].
    pub vectors: DMatrix<f64>,
}

impl Eigenpairs {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn partition(&self, n: usize) -> Result<SubspacePartition> {
        let m = self.dim();
        if n == 0 || n > m {
            return Err(contract(format!(
                "active dimension {n} must lie in 1..={m}"
            )));
        }
        Ok(SubspacePartition {
            w1: self.vectors.columns(0, n).into_owned(),
            w2: self.vectors.columns(n, m - n).into_owned(),
            n,
        })
    }
}

/// Flips each column so its largest-magnitude entry is positive; near-equal
/// magnitudes resolve to the lowest index.
pub fn apply_sign_rule(vectors: &mut DMatrix<f64>) {
    for mut col in vectors.column_iter_mut() {
        let peak = col.amax();
        if peak == 0.0 {
            continue;
        }
        let pivot = col
            .iter()
            .position(|v| v.abs() >= peak * (1.0 - 1e-12))
            .expect("peak exists");
        if col[pivot] < 0.0 {
            col.neg_mut();
        }
    }
}

/// Symmetric eigendecomposition with descending eigenvalues.
pub fn eigendecompose(c: &DMatrix<f64>) -> Result<Eigenpairs> {
    let (rows, cols) = c.shape();
    if rows != cols || rows == 0 {
        return Err(contract(format!(
            "expected a square matrix, got {rows}x{cols}"
        )));
    }
    let scale = max_abs(c).max(1.0);
    if max_abs(&(c - c.transpose())) > 1e-10 * scale {
        return Err(contract("matrix is not symmetric"));
    }
    let eig = SymmetricEigen::new(c.clone());
    let mut order: Vec<usize> = (0..rows).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = DVector::from_iterator(rows, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::from_fn(rows, rows, |i, j| eig.eigenvectors[(i, order[j])]);
    apply_sign_rule(&mut vectors);
    Ok(Eigenpairs { values, vectors })
}

/// Index `n` (1-based) of the largest log-gap `log(l_n / l_{n+1})`, `n <= max_n`.
pub fn choose_dimension(values: &[f64], max_n: usize) -> Result<usize> {
    if values.len() < 2 {
        return Err(contract("need at least two eigenvalues to pick a gap"));
    }
    let top = values[0];
    if !(top > 0.0 && top.is_finite()) {
        return Err(Error::NoStructure);
    }
    let floor = EIGENVALUE_FLOOR * top;
    let floored: Vec<f64> = values.iter().map(|v| v.max(floor)).collect();
    let limit = max_n.clamp(1, values.len() - 1);
    let mut best = 1;
    let mut best_gap = f64::NEG_INFINITY;
    for i in 0..limit {
        let gap = (floored[i] / floored[i + 1]).ln();
        if gap > best_gap + GAP_TIE_TOLERANCE {
            best = i + 1;
            best_gap = gap;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SubspacePartition {
    pub w1: DMatrix<f64>,
    pub w2: DMatrix<f64>,
    pub n: usize,
}

/// `||A A^T - B B^T||_2`, the sine of the largest principal angle.
pub fn subspace_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(contract(format!(
            "subspace bases differ in shape: {:?} vs {:?}",
            a.shape(),
            b.shape()
        )));
    }
    if orthonormality_defect(a) > 1e-8 || orthonormality_defect(b) > 1e-8 {
        return Err(contract("subspace bases must have orthonormal columns"));
    }
    let d = a * a.transpose() - b * b.transpose();
    let eig = SymmetricEigen::new((&d + d.transpose()) * 0.5);
    Ok(eig.eigenvalues.amax().clamp(0.0, 1.0))
}

/// Point estimate: fit, `C`, eigenpairs.
pub fn estimate(
    x: &DMatrix<f64>,
    f: &DVector<f64>,
    convention: Convention,
) -> Result<(QuadraticModel, Eigenpairs)> {
    let model = fit_quadratic(x, f)?;
    let eig = eigendecompose(&c_matrix(&model, convention))?;
    Ok((model, eig))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl Spread {
    fn of(values: impl Iterator<Item = f64>) -> Self {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut sum = 0.0;
        let mut count = 0usize;
        for v in values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
            count += 1;
        }
        Self {
            min,
            mean: sum / count as f64,
            max,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Replicate {
    pub index: usize,
    pub eigenvalues: Vec<f64>,
    /// `errors[d - 1]` is the subspace error of dimension `d`.
    pub errors: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapSummary {
    pub point_eigenvalues: Vec<f64>,
    /// Per eigenvalue index.
    pub eigenvalue_ranges: Vec<Spread>,
    /// Entry `d - 1` summarizes the error of the `d`-dimensional subspace.
    pub subspace_error: Vec<Spread>,
    pub active_dim: usize,
    pub n_boot: usize,
    pub seed: u64,
    pub convention: Convention,
    pub skipped: usize,
    pub replicates: Vec<Replicate>,
}

impl BootstrapSummary {
    pub fn active_error(&self) -> Spread {
        self.subspace_error[self.active_dim - 1]
    }
}

/// Resamples `(x_i, f_i)` pairs with replacement `n_boot` times. Replicate `k`
/// draws from stream `k` of `seed`.
pub fn bootstrap(
    x: &DMatrix<f64>,
    f: &DVector<f64>,
    n_boot: usize,
    seed: u64,
    active_dim: usize,
    convention: Convention,
) -> Result<BootstrapSummary> {
    if n_boot == 0 {
        return Err(contract("n_boot must be at least 1"));
    }
    check_inputs(x, f)?;
    let (n, m) = x.shape();
    if active_dim == 0 || active_dim >= m.max(2) {
        return Err(contract(format!(
            "active dimension {active_dim} must lie in 1..{m}"
        )));
    }
    let design = quadratic_design(x);
    let point = fit_from_design(&design, f, m)?;
    let point_eig = eigendecompose(&c_matrix(&point, convention))?;
    let dims: Vec<usize> = (1..m).collect();
    let reference: Vec<DMatrix<f64>> = dims
        .iter()
        .map(|&d| point_eig.vectors.columns(0, d).into_owned())
        .collect();

    let outcomes: Vec<Result<Option<Replicate>>> = (0..n_boot)
        .into_par_iter()
        .map(|k| {
            let mut rng = stream_rng(seed, k as u64);
            for _ in 0..=BOOTSTRAP_RETRIES {
                let picks: Vec<usize> = (0..n).map(|_| rng.random_range(0..n)).collect();
                let sub_design = design.select_rows(picks.iter());
                let sub_f = DVector::from_iterator(n, picks.iter().map(|&i| f[i]));
                let model = match fit_from_design(&sub_design, &sub_f, m) {
                    Ok(model) => model,
                    Err(Error::IllPosedFit { .. }) => continue,
                    Err(e) => return Err(e),
                };
                let eig = eigendecompose(&c_matrix(&model, convention))?;
                let errors = dims
                    .iter()
                    .zip(&reference)
                    .map(|(&d, w1)| subspace_distance(&eig.vectors.columns(0, d).into_owned(), w1))
                    .collect::<Result<Vec<_>>>()?;
                return Ok(Some(Replicate {
                    index: k,
                    eigenvalues: eig.values.iter().copied().collect(),
                    errors,
                }));
            }
            Ok(None)
        })
        .collect();

    let mut replicates = Vec::with_capacity(n_boot);
    let mut skipped = 0;
    for outcome in outcomes {
        match outcome? {
            Some(r) => replicates.push(r),
            None => skipped += 1,
        }
    }
    if replicates.is_empty() {
        return Err(Error::BootstrapExhausted { skipped });
    }
    if skipped > 0 {
        log::warn!("{skipped} of {n_boot} bootstrap replicates skipped (rank-deficient resamples)");
    }
    let eigenvalue_ranges = (0..m)
        .map(|i| Spread::of(replicates.iter().map(|r| r.eigenvalues[i])))
        .collect();
    let subspace_error = (0..dims.len())
        .map(|d| Spread::of(replicates.iter().map(|r| r.errors[d])))
        .collect();
    Ok(BootstrapSummary {
        point_eigenvalues: point_eig.values.iter().copied().collect(),
        eigenvalue_ranges,
        subspace_error,
        active_dim,
        n_boot,
        seed,
        convention,
        skipped,
        replicates,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub skipped_replicates: usize,
    pub failed_evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceOptions {
    pub n_boot: usize,
    pub active_dim: usize,
    pub convention: Convention,
    /// Drop samples whose evaluation fails instead of aborting.
    pub skip_failed_evaluations: bool,
}

/// For each `N`: sample, evaluate, fit, bootstrap; reports the active-subspace error.
pub fn convergence_study(
    parameter_box: &ParameterBox,
    qoi: &dyn QoiEvaluator,
    schedule: &[usize],
    seed: u64,
    options: &ConvergenceOptions,
) -> Result<Vec<ConvergenceRow>> {
    if schedule.is_empty() {
        return Err(contract("convergence schedule is empty"));
    }
    if schedule.windows(2).any(|w| w[0] >= w[1]) {
        return Err(contract("convergence schedule must be strictly ascending"));
    }
    if qoi.dim() != parameter_box.dim() {
        return Err(Error::DimensionMismatch {
            expected: parameter_box.dim(),
            found: qoi.dim(),
        });
    }
    schedule
        .iter()
        .map(|&n| {
            let samples = sample(parameter_box, n, child_seed(seed, &format!("sample/{n}")))?;
            let batch = evaluate_batch(qoi, &samples.x);
            if !options.skip_failed_evaluations {
                if let Some((index, message)) = batch.failures.first() {
                    return Err(Error::Evaluation {
                        index: *index,
                        message: message.clone(),
                    });
                }
            }
            let (x, f) = batch.successful(&samples.x);
            let summary = bootstrap(
                &x,
                &f,
                options.n_boot,
                child_seed(seed, &format!("bootstrap/{n}")),
                options.active_dim,
                options.convention,
            )?;
            let err = summary.active_error();
            Ok(ConvergenceRow {
                n,
                mean: err.mean,
                min: err.min,
                max: err.max,
                skipped_replicates: summary.skipped,
                failed_evaluations: batch.failures.len(),
            })
        })
        .collect()
}

/// Least-squares slope of `log(mean error)` against `log(N)`.
pub fn loglog_slope(rows: &[ConvergenceRow]) -> Result<f64> {
    if rows.len() < 2 {
        return Err(contract("a slope needs at least two sample sizes"));
    }
    if rows.iter().any(|r| !(r.mean > 0.0)) {
        return Err(contract("log-log slope needs positive errors"));
    }
    let xs: Vec<f64> = rows.iter().map(|r| (r.n as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean.ln()).collect();
    let k = rows.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(m: usize, i: usize) -> DMatrix<f64> {
        let mut e = DMatrix::zeros(m, 1);
        e[(i, 0)] = 1.0;
        e
    }

    #[test]
    fn constant_and_linear_data() {
        let samples = crate::sampling::sample(&ParameterBox::unit(3).unwrap(), 40, 1).unwrap();
        let x = samples.x;
        let f = DVector::from_element(40, 2.5);
        let model = fit_quadratic(&x, &f).unwrap();
        assert!(max_abs(&model.hessian) < 1e-12);
        assert!(model.gradient.amax() < 1e-12);
        assert!((model.constant - 2.5).abs() < 1e-12);

        let f = DVector::from_iterator(40, x.column(0).iter().copied());
        let model = fit_quadratic(&x, &f).unwrap();
        assert!(max_abs(&model.hessian) < 1e-10);
        assert!((model.gradient[0] - 1.0).abs() < 1e-10);
        assert!(model.gradient[1].abs() < 1e-10 && model.gradient[2].abs() < 1e-10);
        assert!(model.constant.abs() < 1e-10);
    }

    #[test]
    fn too_few_samples_is_ill_posed() {
        let samples = crate::sampling::sample(&ParameterBox::unit(3).unwrap(), 5, 1).unwrap();
        let f = DVector::zeros(5);
        assert!(matches!(
            fit_quadratic(&samples.x, &f),
            Err(Error::IllPosedFit {
                rank: _,
                columns: 10
            })
        ));
    }

    #[test]
    fn inputs_outside_cube_are_rejected() {
        let x = DMatrix::from_element(10, 1, 2.0);
        assert!(matches!(
            fit_quadratic(&x, &DVector::zeros(10)),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn c_matrix_examples() {
        let m = 3;
        let model = QuadraticModel::new(
            DMatrix::zeros(m, m),
            DVector::from_vec(vec![1.0, 0.0, 0.0]),
            0.0,
        )
        .unwrap();
        let c = c_matrix(&model, Convention::Identity);
        assert_eq!(c, unit(m, 0) * unit(m, 0).transpose());

        let mut h = DMatrix::zeros(m, m);
        h[(0, 0)] = 2.0;
        let model = QuadraticModel::new(h, DVector::zeros(m), 0.0).unwrap();
        let c = c_matrix(&model, Convention::Identity);
        assert_eq!(c[(0, 0)], 4.0);
        assert_eq!(c.iter().filter(|v| **v != 0.0).count(), 1);
        assert!((c_matrix(&model, Convention::Third)[(0, 0)] - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn rank_one_c_matrix() {
        let w = DVector::from_vec(vec![0.6, 0.0, -0.8]);
        let h = &w * w.transpose() * 2.0;
        let model = QuadraticModel::new(h, w.clone(), 0.0).unwrap();
        let eig = eigendecompose(&c_matrix(&model, Convention::Identity)).unwrap();
        assert!((eig.values[0] - 5.0).abs() < 1e-12);
        assert!(eig.values[1].abs() < 1e-12 && eig.values[2].abs() < 1e-12);
        // sign rule: largest-magnitude entry (-0.8) made positive
        let v = eig.vectors.column(0);
        assert!((v[0] + 0.6).abs() < 1e-12 && (v[2] - 0.8).abs() < 1e-12);
    }

    #[test]
    fn eigendecompose_diagonal_and_identity() {
        let c = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 3.0, 2.0]));
        let eig = eigendecompose(&c).unwrap();
        assert_eq!(eig.values.as_slice(), &[3.0, 2.0, 1.0]);
        assert_eq!(eig.vectors.column(0).as_slice(), &[0.0, 1.0, 0.0]);
        assert_eq!(eig.vectors.column(1).as_slice(), &[0.0, 0.0, 1.0]);
        let eye = eigendecompose(&DMatrix::identity(4, 4)).unwrap();
        assert!(eye.values.iter().all(|v| (v - 1.0).abs() < 1e-15));
        assert!(orthonormality_defect(&eye.vectors) < 1e-14);
        assert_eq!(eigendecompose(&DMatrix::identity(4, 4)).unwrap(), eye);
    }

    #[test]
    fn eigendecompose_rejects_asymmetric() {
        let c = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(matches!(eigendecompose(&c), Err(Error::Contract(_))));
    }

    #[test]
    fn sign_rule_ties_go_to_lowest_index() {
        let s = 0.5f64.sqrt();
        let mut w = DMatrix::from_column_slice(2, 1, &[-s, s]);
        apply_sign_rule(&mut w);
        assert!(w[(0, 0)] > 0.0);
    }

    #[test]
    fn choose_dimension_examples() {
        let mut one = vec![10.0, 1e-3, 9e-4, 8e-4];
        assert_eq!(choose_dimension(&one, 3).unwrap(), 1);
        one[1] = 9.0;
        one[2] = 1e-4;
        one[3] = 9e-5;
        assert_eq!(choose_dimension(&one, 3).unwrap(), 2);
        let geometric: Vec<f64> = (0..6).map(|i| 10f64.powi(-i)).collect();
        assert_eq!(choose_dimension(&geometric, 5).unwrap(), 1);
        // exact zeros are floored, not divided by
        assert_eq!(choose_dimension(&[4.0, 2.0, 0.0, 0.0], 3).unwrap(), 2);
        assert_eq!(choose_dimension(&[4.0, 2.0, 0.0, 0.0], 1).unwrap(), 1);
        assert!(matches!(
            choose_dimension(&[0.0, 0.0, 0.0], 2),
            Err(Error::NoStructure)
        ));
    }

    #[test]
    fn subspace_distance_examples() {
        let e1 = unit(2, 0);
        let e2 = unit(2, 1);
        assert_eq!(subspace_distance(&e1, &e1).unwrap(), 0.0);
        assert!((subspace_distance(&e1, &e2).unwrap() - 1.0).abs() < 1e-15);
        let s = 0.5f64.sqrt();
        let diag = DMatrix::from_column_slice(2, 1, &[s, s]);
        assert!((subspace_distance(&e1, &diag).unwrap() - 0.707_106_781_186_547_5).abs() < 1e-12);
        assert!(subspace_distance(&e1, &DMatrix::from_column_slice(2, 1, &[2.0, 0.0])).is_err());
        assert!(subspace_distance(&e1, &unit(3, 0)).is_err());
    }

    #[test]
    fn model_gradient_matches_finite_differences() {
        let h = DMatrix::from_row_slice(2, 2, &[1.5, -0.3, -0.3, 0.7]);
        let model = QuadraticModel::new(h, DVector::from_vec(vec![0.2, -1.0]), 0.4).unwrap();
        let x = [0.3, -0.6];
        let g = model.grad(&x);
        let step = 1e-6;
        for i in 0..2 {
            let mut xp = x;
            let mut xm = x;
            xp[i] += step;
            xm[i] -= step;
            let fd = (model.eval(&xp) - model.eval(&xm)) / (2.0 * step);
            assert!((fd - g[i]).abs() <= 1e-6 * g[i].abs().max(1.0));
        }
    }

    #[test]
    fn asymmetric_generator_is_rejected() {
        let h = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(QuadraticModel::new(h, DVector::zeros(2), 0.0).is_err());
    }
}
