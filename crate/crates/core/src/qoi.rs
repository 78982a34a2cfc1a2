//! Quantity-of-interest evaluators on normalized inputs `x` in `[-1, 1]^m`.
//!
//! Analytic evaluators (quadratics, ridges) have known active subspaces and
//! serve as oracles. The panel surrogate maps a design through its airfoil to
//! cheap lift-like and drag-like numbers so the whole pipeline runs without a
//! flow solver; it is a qualitative stand-in, not aerodynamics. Real solver
//! outputs come in through [`DatasetQoi`].

use std::collections::HashMap;
use std::f64::consts::PI;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::activesubspace::QuadraticModel;
use crate::cst::CstParams;
use crate::error::{contract, Error, Result};
use crate::geometry::{
    coordinate_loop, validate_airfoil, write_points, AirfoilSurfacePair, ValidityOptions,
    ValidityReport, DEFAULT_GRID_SIZE,
};
use crate::io::{fmt_bool, fmt_f64, parse_f64, read_csv, write_csv};
use crate::parsec::{solve_coefficients, ParsecParams};
use crate::sampling::{default_labels, ParameterBox};

/// Deterministic scalar map on `[-1, 1]^m`. Implementations must tolerate
/// concurrent calls.
pub trait QoiEvaluator: Send + Sync {
    fn name(&self) -> &str;
    fn dim(&self) -> usize;
    fn description(&self) -> String;
    fn evaluate(&self, x: &[f64]) -> Result<f64>;
}

impl<Q: QoiEvaluator + ?Sized> QoiEvaluator for Box<Q> {
    fn name(&self) -> &str {
        (**self).name()
    }

    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn description(&self) -> String {
        (**self).description()
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        (**self).evaluate(x)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchEvaluation {
    pub values: Vec<Option<f64>>,
    /// `(row, message)` for rows that failed.
    pub failures: Vec<(usize, String)>,
}

impl BatchEvaluation {
    /// Rows that evaluated, in input order.
    pub fn successful(&self, x: &DMatrix<f64>) -> (DMatrix<f64>, DVector<f64>) {
        let keep: Vec<usize> = self
            .values
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|_| i))
            .collect();
        let f = DVector::from_iterator(keep.len(), keep.iter().map(|&i| self.values[i].unwrap()));
        (x.select_rows(keep.iter()), f)
    }
}

/// Evaluates every row; failures are recorded, not fatal.
pub fn evaluate_batch(qoi: &dyn QoiEvaluator, x: &DMatrix<f64>) -> BatchEvaluation {
    let results: Vec<std::result::Result<f64, String>> = (0..x.nrows())
        .into_par_iter()
        .map(|i| {
            let row: Vec<f64> = x.row(i).iter().copied().collect();
            qoi.evaluate(&row).map_err(|e| e.to_string())
        })
        .collect();
    let mut values = Vec::with_capacity(results.len());
    let mut failures = Vec::new();
    for (i, r) in results.into_iter().enumerate() {
        match r {
            Ok(v) => values.push(Some(v)),
            Err(msg) => {
                log::debug!("sample {i}: {msg}");
                values.push(None);
                failures.push((i, msg));
            }
        }
    }
    BatchEvaluation { values, failures }
}

fn check_dim(expected: usize, x: &[f64]) -> Result<()> {
    if x.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: x.len(),
        });
    }
    Ok(())
}

/// `1/2 x^T H x + v^T x + c`.
#[derive(Clone, Debug)]
pub struct SyntheticQuadratic {
    model: QuadraticModel,
}

impl SyntheticQuadratic {
    pub fn model(&self) -> &QuadraticModel {
        &self.model
    }
}

pub fn synthetic_quadratic(h: DMatrix<f64>, v: DVector<f64>, c: f64) -> Result<SyntheticQuadratic> {
    Ok(SyntheticQuadratic {
        model: QuadraticModel::new(h, v, c)?,
    })
}

/// Quadratic with entries drawn uniformly from `[-1, 1]` (Hessian symmetrized).
pub fn random_quadratic(m: usize, seed: u64) -> Result<SyntheticQuadratic> {
    use rand::Rng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = DMatrix::zeros(m, m);
    for i in 0..m {
        for j in i..m {
            let v: f64 = rng.random_range(-1.0..=1.0);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    let v = DVector::from_iterator(m, (0..m).map(|_| rng.random_range(-1.0..=1.0)));
    let c = rng.random_range(-1.0..=1.0);
    synthetic_quadratic(h, v, c)
}

impl QoiEvaluator for SyntheticQuadratic {
    fn name(&self) -> &str {
        "quadratic"
    }

    fn dim(&self) -> usize {
        self.model.dim()
    }

    fn description(&self) -> String {
        format!("synthetic quadratic in {} variables", self.dim())
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x)?;
        Ok(self.model.eval(x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RidgeProfile {
    Linear,
    Quadratic,
    Exp,
}

impl RidgeProfile {
    pub fn apply(self, s: f64) -> f64 {
        match self {
            RidgeProfile::Linear => s,
            RidgeProfile::Quadratic => s * s,
            RidgeProfile::Exp => s.exp(),
        }
    }
}

/// `g(w^T x / |w|)`: exactly one active direction.
#[derive(Clone, Debug)]
pub struct Ridge {
    direction: Vec<f64>,
    profile: RidgeProfile,
}

impl Ridge {
    /// Unit direction.
    pub fn direction(&self) -> &[f64] {
        &self.direction
    }
}

pub fn ridge(w: &[f64], profile: RidgeProfile) -> Result<Ridge> {
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(contract("ridge direction must be nonzero and finite"));
    }
    Ok(Ridge {
        direction: w.iter().map(|v| v / norm).collect(),
        profile,
    })
}

impl QoiEvaluator for Ridge {
    fn name(&self) -> &str {
        "ridge"
    }

    fn dim(&self) -> usize {
        self.direction.len()
    }

    fn description(&self) -> String {
        format!("{:?} ridge profile along a fixed direction", self.profile).to_lowercase()
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x)?;
        let s: f64 = self.direction.iter().zip(x).map(|(w, v)| w * v).sum();
        Ok(self.profile.apply(s))
    }
}

/// Adds Gaussian noise keyed by the exact bits of `x`, so the map stays a
/// deterministic function of its input.
pub struct Noisy<Q> {
    inner: Q,
    sigma: f64,
    seed: u64,
}

impl<Q: QoiEvaluator> Noisy<Q> {
    pub fn new(inner: Q, sigma: f64, seed: u64) -> Result<Self> {
        if !(sigma >= 0.0 && sigma.is_finite()) {
            return Err(contract("noise level must be finite and nonnegative"));
        }
        Ok(Self { inner, sigma, seed })
    }

    fn noise(&self, x: &[f64]) -> f64 {
        let mut hasher = Sha256::new();
        hasher.update(self.seed.to_le_bytes());
        for v in x {
            hasher.update(v.to_bits().to_le_bytes());
        }
        let key: [u8; 32] = hasher.finalize().into();
        let z: f64 = StandardNormal.sample(&mut ChaCha8Rng::from_seed(key));
        self.sigma * z
    }
}

impl<Q: QoiEvaluator> QoiEvaluator for Noisy<Q> {
    fn name(&self) -> &str {
        self.inner.name()
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn description(&self) -> String {
        format!(
            "{} plus Gaussian noise (sigma {})",
            self.inner.description(),
            self.sigma
        )
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        Ok(self.inner.evaluate(x)? + self.noise(x))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parameterization {
    Parsec,
    Cst,
}

impl Parameterization {
    pub fn name(self) -> &'static str {
        match self {
            Parameterization::Parsec => "parsec",
            Parameterization::Cst => "cst",
        }
    }

    /// Builds the airfoil from physical parameters.
    pub fn decode(self, physical: &[f64]) -> Result<AirfoilSurfacePair> {
        match self {
            Parameterization::Parsec => solve_coefficients(&ParsecParams::from_slice(physical)?),
            Parameterization::Cst => CstParams::from_flat(physical)?.surfaces(),
        }
    }

    /// PARSEC closes the trailing edge only when `x5 = x6 = 0`; CST always does.
    pub fn validity_options(self, physical: &[f64]) -> ValidityOptions {
        let sharp = match self {
            Parameterization::Parsec => {
                physical.len() == 11 && physical[4] == 0.0 && physical[5] == 0.0
            }
            Parameterization::Cst => true,
        };
        ValidityOptions {
            sharp_trailing_edge: sharp,
            ..ValidityOptions::default()
        }
    }

    pub fn validate(self, physical: &[f64]) -> Result<(AirfoilSurfacePair, ValidityReport)> {
        let pair = self.decode(physical)?;
        let report = validate_airfoil(&pair, &self.validity_options(physical));
        Ok((pair, report))
    }
}

/// Drag-like offset and thickness coefficient.
pub const SURROGATE_KAPPA0: f64 = 0.002;
pub const SURROGATE_KAPPA1: f64 = 0.35;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurrogateCoefficients {
    pub lift: f64,
    pub drag: f64,
    pub max_thickness: f64,
}

/// Thin-airfoil lift at zero incidence, `-2 * int_0^pi z'(x) (1 - cos th) dth`
/// with `x = (1 - cos th) / 2` and camber slope `z' = (s_U' + s_L') / 2`, and a
/// drag-like `kappa0 + kappa1 * (max thickness)^2` on a grid uniform in `t`.
pub fn surrogate_coefficients(pair: &AirfoilSurfacePair) -> Result<SurrogateCoefficients> {
    const INTERVALS: usize = DEFAULT_GRID_SIZE - 1;
    let h = PI / INTERVALS as f64;
    let mut integral = 0.0;
    for i in 0..=INTERVALS {
        let theta = i as f64 * h;
        let weight = if i == 0 || i == INTERVALS {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        // integrand vanishes at the nose: z' ~ 1/theta against (1 - cos) ~ theta^2
        if i == 0 {
            continue;
        }
        let one_minus_cos = 1.0 - theta.cos();
        let x = (0.5 * one_minus_cos).min(1.0);
        let camber_slope = 0.5 * (pair.upper.slope(x)? + pair.lower.slope(x)?);
        integral += weight * camber_slope * one_minus_cos;
    }
    integral *= h / 3.0;

    let mut max_thickness = 0.0_f64;
    for i in 0..DEFAULT_GRID_SIZE {
        let t = i as f64 / INTERVALS as f64;
        max_thickness = max_thickness.max(pair.upper.eval_t(t)? - pair.lower.eval_t(t)?);
    }
    Ok(SurrogateCoefficients {
        lift: -2.0 * integral,
        drag: SURROGATE_KAPPA0 + SURROGATE_KAPPA1 * max_thickness * max_thickness,
        max_thickness,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SurrogateOutput {
    Lift,
    Drag,
}

#[derive(Clone, Debug)]
pub struct PanelSurrogate {
    parameterization: Parameterization,
    parameter_box: ParameterBox,
    output: SurrogateOutput,
    name: String,
}

impl PanelSurrogate {
    pub fn new(
        parameterization: Parameterization,
        parameter_box: ParameterBox,
        output: SurrogateOutput,
    ) -> Result<Self> {
        let expected = match parameterization {
            Parameterization::Parsec => 11,
            Parameterization::Cst => parameter_box.dim(),
        };
        if parameter_box.dim() != expected
            || expected % 2 != 0 && parameterization == Parameterization::Cst
        {
            return Err(Error::DimensionMismatch {
                expected,
                found: parameter_box.dim(),
            });
        }
        let name = match output {
            SurrogateOutput::Lift => "panel-lift",
            SurrogateOutput::Drag => "panel-drag",
        }
        .to_string();
        Ok(Self {
            parameterization,
            parameter_box,
            output,
            name,
        })
    }

    pub fn coefficients(&self, x: &[f64]) -> Result<SurrogateCoefficients> {
        let physical = self.parameter_box.denormalize(x)?;
        let (pair, report) = self.parameterization.validate(&physical)?;
        if !report.feasible {
            return Err(Error::Infeasible(Box::new(report)));
        }
        surrogate_coefficients(&pair)
    }
}

/// Lift-like and drag-like evaluators over the same box.
pub fn panel_surrogate(
    parameterization: Parameterization,
    parameter_box: &ParameterBox,
) -> Result<(PanelSurrogate, PanelSurrogate)> {
    Ok((
        PanelSurrogate::new(
            parameterization,
            parameter_box.clone(),
            SurrogateOutput::Lift,
        )?,
        PanelSurrogate::new(
            parameterization,
            parameter_box.clone(),
            SurrogateOutput::Drag,
        )?,
    ))
}

impl QoiEvaluator for PanelSurrogate {
    fn name(&self) -> &str {
        &self.name
    }

    fn dim(&self) -> usize {
        self.parameter_box.dim()
    }

    fn description(&self) -> String {
        format!(
            "{} surrogate ({}): qualitative thin-airfoil/thickness model, not CFD",
            match self.output {
                SurrogateOutput::Lift => "lift-like",
                SurrogateOutput::Drag => "drag-like",
            },
            self.parameterization.name()
        )
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x)?;
        let c = self.coefficients(x)?;
        Ok(match self.output {
            SurrogateOutput::Lift => c.lift,
            SurrogateOutput::Drag => c.drag,
        })
    }
}

/// Inputs (and optionally outputs) read from a CSV with header `x1..xm[,f]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub x: DMatrix<f64>,
    /// `None` for an unevaluated design set.
    pub f: Option<DVector<f64>>,
    pub comments: Vec<String>,
}

impl Dataset {
    pub fn is_evaluated(&self) -> bool {
        self.f.is_some()
    }

    pub fn dim(&self) -> usize {
        self.x.ncols()
    }
}

pub fn dataset_header(m: usize, with_f: bool) -> Vec<String> {
    let mut header = default_labels(m);
    if with_f {
        header.push("f".into());
    }
    header
}

pub fn write_dataset(
    path: &Path,
    x: &DMatrix<f64>,
    f: Option<&DVector<f64>>,
    comments: &[String],
) -> Result<()> {
    if let Some(f) = f {
        if f.len() != x.nrows() {
            return Err(Error::DimensionMismatch {
                expected: x.nrows(),
                found: f.len(),
            });
        }
    }
    let rows: Vec<Vec<String>> = (0..x.nrows())
        .map(|i| {
            let mut row: Vec<String> = x.row(i).iter().map(|v| fmt_f64(*v)).collect();
            if let Some(f) = f {
                row.push(fmt_f64(f[i]));
            }
            row
        })
        .collect();
    write_csv(
        path,
        comments,
        &dataset_header(x.ncols(), f.is_some()),
        &rows,
    )
}

/// Strict reader: the header must be exactly `x1..xm` or `x1..xm,f`, and an
/// input repeated with a different output is rejected.
pub fn load_dataset(path: &Path) -> Result<Dataset> {
    let table = read_csv(path)?;
    let with_f = table.header.last().map(String::as_str) == Some("f");
    let m = table.header.len() - usize::from(with_f);
    if m == 0 || table.header != dataset_header(m, with_f) {
        return Err(Error::Parse {
            line: table.comments.len() + 1,
            message: format!(
                "header must be x1..xm[,f], found {}",
                table.header.join(",")
            ),
        });
    }
    let n = table.rows.len();
    let mut x = DMatrix::zeros(n, m);
    let mut f = with_f.then(|| DVector::zeros(n));
    let mut seen: HashMap<Vec<u64>, (usize, u64)> = HashMap::new();
    for (i, (line, fields)) in table.rows.iter().enumerate() {
        for j in 0..m {
            x[(i, j)] = parse_f64(&fields[j], *line)?;
        }
        if let Some(f) = f.as_mut() {
            f[i] = parse_f64(&fields[m], *line)?;
            let key: Vec<u64> = x.row(i).iter().map(|v| v.to_bits()).collect();
            match seen.get(&key) {
                Some(&(first_line, bits)) if bits != f[i].to_bits() => {
                    return Err(Error::DuplicateConflict {
                        line: *line,
                        first_line,
                    });
                }
                Some(_) => {}
                None => {
                    seen.insert(key, (*line, f[i].to_bits()));
                }
            }
        }
    }
    Ok(Dataset {
        x,
        f,
        comments: table.comments,
    })
}

/// Lookup table over externally computed `(x, f)` pairs.
#[derive(Clone, Debug)]
pub struct DatasetQoi {
    x: DMatrix<f64>,
    f: DVector<f64>,
    tolerance: f64,
    provenance: String,
}

impl DatasetQoi {
    pub fn new(dataset: Dataset, tolerance: f64, provenance: impl Into<String>) -> Result<Self> {
        let f = dataset
            .f
            .ok_or_else(|| contract("dataset has no f column; it is an unevaluated design set"))?;
        let x = dataset.x;
        if !(tolerance >= 0.0) {
            return Err(contract("lookup tolerance must be nonnegative"));
        }
        // conflicting near-duplicates: sweep rows sorted by the first coordinate
        let mut order: Vec<usize> = (0..x.nrows()).collect();
        order.sort_by(|&a, &b| x[(a, 0)].total_cmp(&x[(b, 0)]));
        for (k, &i) in order.iter().enumerate() {
            for &j in &order[k + 1..] {
                if x[(j, 0)] - x[(i, 0)] > tolerance {
                    break;
                }
                let close = (0..x.ncols()).all(|c| (x[(i, c)] - x[(j, c)]).abs() <= tolerance);
                if close && f[i] != f[j] {
                    return Err(Error::DuplicateConflict {
                        line: i.max(j) + 2,
                        first_line: i.min(j) + 2,
                    });
                }
            }
        }
        Ok(Self {
            x,
            f,
            tolerance,
            provenance: provenance.into(),
        })
    }

    pub fn load(path: &Path, tolerance: f64) -> Result<Self> {
        let dataset = load_dataset(path)?;
        let provenance = if dataset.comments.is_empty() {
            path.display().to_string()
        } else {
            dataset.comments.join("; ")
        };
        Self::new(dataset, tolerance, provenance)
    }

    pub fn len(&self) -> usize {
        self.f.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f.is_empty()
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn inputs(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn outputs(&self) -> &DVector<f64> {
        &self.f
    }
}

impl QoiEvaluator for DatasetQoi {
    fn name(&self) -> &str {
        "dataset"
    }

    fn dim(&self) -> usize {
        self.x.ncols()
    }

    fn description(&self) -> String {
        format!("{} tabulated designs ({})", self.len(), self.provenance)
    }

    fn evaluate(&self, x: &[f64]) -> Result<f64> {
        check_dim(self.dim(), x)?;
        let mut best: Option<(f64, usize)> = None;
        for i in 0..self.x.nrows() {
            let dist = x
                .iter()
                .enumerate()
                .fold(0.0_f64, |acc, (j, v)| acc.max((v - self.x[(i, j)]).abs()));
            if best.is_none_or(|(d, _)| dist < d) {
                best = Some((dist, i));
            }
        }
        match best {
            Some((d, i)) if d <= self.tolerance => Ok(self.f[i]),
            _ => Err(Error::Evaluation {
                index: 0,
                message: format!("no tabulated design within {} of the query", self.tolerance),
            }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestRow {
    pub row: usize,
    pub file: String,
    pub feasible: bool,
}

pub const MANIFEST_FILE: &str = "manifest.csv";

/// Writes one closed coordinate loop per design plus `manifest.csv`
/// (`row,file,feasible,x1..xm`, normalized inputs).
pub fn export_designs(
    x: &DMatrix<f64>,
    parameterization: Parameterization,
    parameter_box: &ParameterBox,
    dir: &Path,
    grid_size: usize,
    comments: &[String],
) -> Result<Vec<ManifestRow>> {
    if x.ncols() != parameter_box.dim() {
        return Err(Error::DimensionMismatch {
            expected: parameter_box.dim(),
            found: x.ncols(),
        });
    }
    std::fs::create_dir_all(dir)?;
    let decoded: Vec<Result<(AirfoilSurfacePair, ValidityReport)>> = (0..x.nrows())
        .into_par_iter()
        .map(|i| {
            let row: Vec<f64> = x.row(i).iter().copied().collect();
            let physical = parameter_box.denormalize(&row)?;
            parameterization
                .validate(&physical)
                .map_err(|e| Error::Evaluation {
                    index: i,
                    message: e.to_string(),
                })
        })
        .collect();
    let mut manifest = Vec::with_capacity(x.nrows());
    let mut rows = Vec::with_capacity(x.nrows());
    for (i, item) in decoded.into_iter().enumerate() {
        let (pair, report) = item?;
        let file = format!("design_{i:05}.dat");
        write_points(&dir.join(&file), &coordinate_loop(&pair, grid_size))?;
        let mut fields = vec![
            i.to_string(),
            file.clone(),
            fmt_bool(report.feasible).to_string(),
        ];
        fields.extend(x.row(i).iter().map(|v| fmt_f64(*v)));
        rows.push(fields);
        manifest.push(ManifestRow {
            row: i,
            file,
            feasible: report.feasible,
        });
    }
    let mut header = vec!["row".to_string(), "file".into(), "feasible".into()];
    header.extend(default_labels(x.ncols()));
    let mut comments = comments.to_vec();
    comments.push(format!("parameterization={}", parameterization.name()));
    write_csv(&dir.join(MANIFEST_FILE), &comments, &header, &rows)?;
    Ok(manifest)
}

pub fn load_manifest(path: &Path) -> Result<(Vec<ManifestRow>, DMatrix<f64>)> {
    let table = read_csv(path)?;
    if table.header.len() < 4 || table.header[..3] != ["row", "file", "feasible"] {
        return Err(Error::Parse {
            line: table.comments.len() + 1,
            message: "manifest header must start with row,file,feasible".into(),
        });
    }
    let m = table.header.len() - 3;
    let mut x = DMatrix::zeros(table.rows.len(), m);
    let mut rows = Vec::with_capacity(table.rows.len());
    for (i, (line, fields)) in table.rows.iter().enumerate() {
        let row = fields[0].parse().map_err(|_| Error::Parse {
            line: *line,
            message: format!("bad row index {:?}", fields[0]),
        })?;
        let feasible = match fields[2].as_str() {
            "true" => true,
            "false" => false,
            other => {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("bad feasibility flag {other:?}"),
                })
            }
        };
        for j in 0..m {
            x[(i, j)] = parse_f64(&fields[3 + j], *line)?;
        }
        rows.push(ManifestRow {
            row,
            file: fields[1].clone(),
            feasible,
        });
    }
    Ok((rows, x))
}
