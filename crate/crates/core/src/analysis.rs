//! Post-processing in active coordinates: shadow plots, low-dimensional
//! response surfaces, and the lift/drag trade-off segment.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::activesubspace::SubspacePartition;
use crate::error::{contract, Error, Result};
use crate::io::{fmt_bool, fmt_f64, write_csv};
use crate::linalg::{lstsq, orthonormality_defect};
use crate::qoi::QoiEvaluator;
use crate::seeding::stream_rng;

pub const DEFAULT_GAMMA_COUNT: usize = 101;
pub const CONTOUR_GRID: usize = 101;
/// Rejection-sampling budget per segment point.
pub const MAX_Z_TRIES: usize = 10_000;
const ORTHONORMAL_TOLERANCE: f64 = 1e-8;
const BOX_SLACK: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowData {
    /// `N x n`, row `i` is `W1^T x_i`.
    pub y: DMatrix<f64>,
    pub f: DVector<f64>,
    pub w1: DMatrix<f64>,
    pub labels: Vec<String>,
}

pub fn shadow_project(x: &DMatrix<f64>, f: &DVector<f64>, w1: &DMatrix<f64>) -> Result<ShadowData> {
    if x.ncols() != w1.nrows() {
        return Err(Error::DimensionMismatch {
            expected: w1.nrows(),
            found: x.ncols(),
        });
    }
    if f.len() != x.nrows() {
        return Err(Error::DimensionMismatch {
            expected: x.nrows(),
            found: f.len(),
        });
    }
    Ok(ShadowData {
        y: x * w1,
        f: f.clone(),
        w1: w1.clone(),
        labels: (1..=w1.ncols()).map(|i| format!("y{i}")).collect(),
    })
}

impl ShadowData {
    pub fn dim(&self) -> usize {
        self.y.ncols()
    }

    /// `(min, max)` of each active coordinate.
    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.y.column_iter().map(|c| (c.min(), c.max())).collect()
    }

    /// Columns `y1[,y2],f`; plotting export is limited to one or two
    /// coordinates.
    pub fn write_csv(&self, path: &Path, comments: &[String]) -> Result<()> {
        if self.dim() == 0 || self.dim() > 2 {
            return Err(contract(format!(
                "shadow export needs 1 or 2 active coordinates, got {}",
                self.dim()
            )));
        }
        let mut header = self.labels.clone();
        header.push("f".into());
        let rows: Vec<Vec<String>> = (0..self.y.nrows())
            .map(|i| {
                let mut row: Vec<String> = self.y.row(i).iter().map(|v| fmt_f64(*v)).collect();
                row.push(fmt_f64(self.f[i]));
                row
            })
            .collect();
        write_csv(path, comments, &header, &rows)
    }
}

/// Exponent tuples of total degree `<= degree` in `n` variables, graded then
/// lexicographically descending (`1, y1, y2, y1^2, y1 y2, y2^2, ...`).
pub fn monomial_exponents(n: usize, degree: u32) -> Vec<Vec<u32>> {
    fn fill(prefix: &mut Vec<u32>, remaining: u32, slots: usize, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            fill(prefix, remaining - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    for d in 0..=degree {
        fill(&mut Vec::with_capacity(n), d, n, &mut out);
    }
    out
}

fn monomials(y: &[f64], exponents: &[Vec<u32>]) -> Vec<f64> {
    exponents
        .iter()
        .map(|e| e.iter().zip(y).map(|(&k, v)| v.powi(k as i32)).product())
        .collect()
}

/// `f(x) ~ g(W1^T x)` with `g` a polynomial of total degree `degree`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResponseSurface {
    /// Rows of `W1` (`m` rows, `n` columns).
    pub w1: Vec<Vec<f64>>,
    pub degree: u32,
    pub exponents: Vec<Vec<u32>>,
    pub coefficients: Vec<f64>,
    pub residual_rms: f64,
    pub r_squared: f64,
    pub samples: usize,
}

impl ResponseSurface {
    /// Polynomial with given coefficients, for constructed surrogates.
    pub fn from_coefficients(
        w1: &DMatrix<f64>,
        degree: u32,
        coefficients: Vec<f64>,
    ) -> Result<Self> {
        let exponents = monomial_exponents(w1.ncols(), degree);
        if coefficients.len() != exponents.len() {
            return Err(Error::DimensionMismatch {
                expected: exponents.len(),
                found: coefficients.len(),
            });
        }
        Ok(Self {
            w1: crate::activesubspace::rows_of(w1),
            degree,
            exponents,
            coefficients,
            residual_rms: 0.0,
            r_squared: 1.0,
            samples: 0,
        })
    }

    pub fn active_dim(&self) -> usize {
        self.w1.first().map_or(0, Vec::len)
    }

    pub fn input_dim(&self) -> usize {
        self.w1.len()
    }

    pub fn basis(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.input_dim(), self.active_dim(), |i, j| self.w1[i][j])
    }

    pub fn eval_y(&self, y: &[f64]) -> f64 {
        monomials(y, &self.exponents)
            .iter()
            .zip(&self.coefficients)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        (0..self.active_dim())
            .map(|j| self.w1.iter().zip(x).map(|(row, v)| row[j] * v).sum())
            .collect()
    }

    pub fn eval_x(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.input_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.input_dim(),
                found: x.len(),
            });
        }
        Ok(self.eval_y(&self.project(x)))
    }
}

pub fn fit_link_function(shadow: &ShadowData, degree: u32) -> Result<ResponseSurface> {
    let exponents = monomial_exponents(shadow.dim(), degree);
    let n = shadow.y.nrows();
    let mut design = DMatrix::zeros(n, exponents.len());
    for i in 0..n {
        let y: Vec<f64> = shadow.y.row(i).iter().copied().collect();
        for (j, v) in monomials(&y, &exponents).into_iter().enumerate() {
            design[(i, j)] = v;
        }
    }
    let beta = lstsq(&design, &shadow.f)?;
    let residual = &design * &beta - &shadow.f;
    let mean = shadow.f.mean();
    let total: f64 = shadow.f.iter().map(|v| (v - mean).powi(2)).sum();
    let sse = residual.norm_squared();
    let r_squared = if total > 0.0 { 1.0 - sse / total } else { 1.0 };
    Ok(ResponseSurface {
        w1: crate::activesubspace::rows_of(&shadow.w1),
        degree,
        exponents,
        coefficients: beta.iter().copied().collect(),
        residual_rms: (sse / n as f64).sqrt(),
        r_squared,
        samples: n,
    })
}

/// Minimum of `w^T x` over `[-1, 1]^m` and a minimizing vertex. Zero
/// components of `w` take `+1`.
pub fn y_min(w: &[f64]) -> (f64, Vec<f64>) {
    let value = -w.iter().map(|v| v.abs()).sum::<f64>();
    let vertex = w
        .iter()
        .map(|&v| if v > 0.0 { -1.0 } else { 1.0 })
        .collect();
    (value, vertex)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ZPolicy {
    #[default]
    Zero,
    RandomFeasible,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParetoSegment {
    pub gamma: Vec<f64>,
    pub y: Vec<[f64; 2]>,
    pub x: Vec<Vec<f64>>,
    pub feasible: Vec<bool>,
    pub y1_min: f64,
    pub y2_min: f64,
    pub policy: ZPolicy,
}

impl ParetoSegment {
    pub fn len(&self) -> usize {
        self.gamma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gamma.is_empty()
    }
}

pub fn in_unit_box(x: &[f64]) -> bool {
    x.iter().all(|v| v.abs() <= 1.0 + BOX_SLACK)
}

fn check_basis(partition: &SubspacePartition) -> Result<DMatrix<f64>> {
    let m = partition.w1.nrows();
    if partition.w2.nrows() != m || partition.w1.ncols() + partition.w2.ncols() != m {
        return Err(contract("active and inactive bases must together span R^m"));
    }
    let full = DMatrix::from_fn(m, m, |i, j| {
        if j < partition.w1.ncols() {
            partition.w1[(i, j)]
        } else {
            partition.w2[(i, j - partition.w1.ncols())]
        }
    });
    let defect = orthonormality_defect(&full);
    if defect > ORTHONORMAL_TOLERANCE {
        return Err(contract(format!(
            "basis is not orthonormal (defect {defect:.3e})"
        )));
    }
    Ok(full)
}

fn combine(partition: &SubspacePartition, y: &[f64], z: &[f64]) -> Vec<f64> {
    let x = &partition.w1 * DVector::from_column_slice(y)
        + &partition.w2 * DVector::from_column_slice(z);
    x.iter().copied().collect()
}

/// Inactive coordinates of a uniform draw from the cube.
fn draw_z(partition: &SubspacePartition, rng: &mut impl Rng) -> Vec<f64> {
    let m = partition.w1.nrows();
    let x = DVector::from_fn(m, |_, _| 2.0 * rng.random::<f64>() - 1.0);
    (partition.w2.transpose() * x).iter().copied().collect()
}

/// Points `y = gamma (y1_min, 0) + (1 - gamma) (0, y2_min)` on a uniform
/// `gamma` grid, with designs `x = W1 y + W2 z`. Under
/// [`ZPolicy::RandomFeasible`], `z` is the inactive part of a uniform cube
/// draw, retried up to [`MAX_Z_TRIES`] times; a point that never lands in the
/// cube keeps `z = 0` and is flagged.
pub fn pareto_segment(
    partition: &SubspacePartition,
    gamma_count: usize,
    policy: ZPolicy,
    seed: u64,
) -> Result<ParetoSegment> {
    if partition.w1.ncols() != 2 {
        return Err(contract(format!(
            "the trade-off segment needs a 2-D active basis, got {}",
            partition.w1.ncols()
        )));
    }
    if gamma_count < 2 {
        return Err(contract("gamma grid needs at least 2 points"));
    }
    check_basis(partition)?;
    let w1: Vec<f64> = partition.w1.column(0).iter().copied().collect();
    let w2: Vec<f64> = partition.w1.column(1).iter().copied().collect();
    let (y1_min, _) = y_min(&w1);
    let (y2_min, _) = y_min(&w2);
    let inactive = partition.w2.ncols();
    let last = (gamma_count - 1) as f64;
    let gamma: Vec<f64> = (0..gamma_count).map(|k| k as f64 / last).collect();
    let y: Vec<[f64; 2]> = gamma
        .iter()
        .map(|&g| [g * y1_min, (1.0 - g) * y2_min])
        .collect();
    let points: Vec<(Vec<f64>, bool)> = y
        .par_iter()
        .enumerate()
        .map(|(k, yk)| {
            let zero = combine(partition, yk, &vec![0.0; inactive]);
            match policy {
                ZPolicy::Zero => {
                    let ok = in_unit_box(&zero);
                    (zero, ok)
                }
                ZPolicy::RandomFeasible => {
                    let mut rng = stream_rng(seed, k as u64);
                    for _ in 0..MAX_Z_TRIES {
                        let x = combine(partition, yk, &draw_z(partition, &mut rng));
                        if in_unit_box(&x) {
                            return (x, true);
                        }
                    }
                    (zero, false)
                }
            }
        })
        .collect();
    let (x, feasible) = points.into_iter().unzip();
    Ok(ParetoSegment {
        gamma,
        y,
        x,
        feasible,
        y1_min,
        y2_min,
        policy,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParetoPoint {
    pub gamma: f64,
    pub y: [f64; 2],
    pub feasible: bool,
    /// `None` when strict mode skipped an infeasible point.
    pub drag: Option<f64>,
    pub lift: Option<f64>,
}

/// Predicted `(drag, lift)` along the segment; each surface projects the
/// reconstructed design onto its own active basis.
pub fn pareto_front(
    segment: &ParetoSegment,
    lift_surface: &ResponseSurface,
    drag_surface: &ResponseSurface,
    strict: bool,
) -> Result<Vec<ParetoPoint>> {
    let mut out = Vec::with_capacity(segment.len());
    for k in 0..segment.len() {
        let x = &segment.x[k];
        let skip = strict && !segment.feasible[k];
        let (drag, lift) = if skip {
            (None, None)
        } else {
            (Some(drag_surface.eval_x(x)?), Some(lift_surface.eval_x(x)?))
        };
        out.push(ParetoPoint {
            gamma: segment.gamma[k],
            y: segment.y[k],
            feasible: segment.feasible[k],
            drag,
            lift,
        });
    }
    Ok(out)
}

pub const PARETO_HEADER: [&str; 6] = ["gamma", "y1", "y2", "feasible", "drag_pred", "lift_pred"];

/// Skipped predictions are written as empty fields.
pub fn write_pareto_csv(path: &Path, points: &[ParetoPoint], comments: &[String]) -> Result<()> {
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let rows: Vec<Vec<String>> = points
        .iter()
        .map(|p| {
            vec![
                fmt_f64(p.gamma),
                fmt_f64(p.y[0]),
                fmt_f64(p.y[1]),
                fmt_bool(p.feasible).to_string(),
                opt(p.drag),
                opt(p.lift),
            ]
        })
        .collect();
    let header: Vec<String> = PARETO_HEADER.iter().map(|s| s.to_string()).collect();
    write_csv(path, comments, &header, &rows)
}

/// Reconstructed designs along the segment, columns `gamma,feasible,x1..xm`.
pub fn write_segment_designs(
    path: &Path,
    segment: &ParetoSegment,
    comments: &[String],
) -> Result<()> {
    let m = segment.x.first().map_or(0, Vec::len);
    let mut header = vec!["gamma".to_string(), "feasible".into()];
    header.extend((1..=m).map(|i| format!("x{i}")));
    let rows: Vec<Vec<String>> = (0..segment.len())
        .map(|k| {
            let mut row = vec![
                fmt_f64(segment.gamma[k]),
                fmt_bool(segment.feasible[k]).to_string(),
            ];
            row.extend(segment.x[k].iter().map(|v| fmt_f64(*v)));
            row
        })
        .collect();
    write_csv(path, comments, &header, &rows)
}

/// Inactive draws for [`inactive_sensitivity_check`]: `W2^T x` for uniform
/// cube samples `x`.
pub fn inactive_samples(partition: &SubspacePartition, count: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = stream_rng(seed, 0);
    let k = partition.w2.ncols();
    let mut z = DMatrix::zeros(count, k);
    for i in 0..count {
        for (j, v) in draw_z(partition, &mut rng).into_iter().enumerate() {
            z[(i, j)] = v;
        }
    }
    z
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivityPoint {
    pub y: Vec<f64>,
    /// `max - min` over the usable `z`; `None` when no `z` kept `x` in the cube
    /// or every evaluation failed.
    pub spread: Option<f64>,
    pub used: usize,
    pub rejected: usize,
}

/// Output spread over inactive perturbations at each fixed `y`.
pub fn inactive_sensitivity_check(
    partition: &SubspacePartition,
    y_points: &[Vec<f64>],
    z_samples: &DMatrix<f64>,
    evaluator: &dyn QoiEvaluator,
) -> Result<Vec<SensitivityPoint>> {
    check_basis(partition)?;
    let n = partition.w1.ncols();
    if z_samples.ncols() != partition.w2.ncols() {
        return Err(Error::DimensionMismatch {
            expected: partition.w2.ncols(),
            found: z_samples.ncols(),
        });
    }
    if evaluator.dim() != partition.w1.nrows() {
        return Err(Error::DimensionMismatch {
            expected: partition.w1.nrows(),
            found: evaluator.dim(),
        });
    }
    y_points
        .par_iter()
        .map(|y| {
            if y.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: y.len(),
                });
            }
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            let mut used = 0;
            let mut rejected = 0;
            for zi in z_samples.row_iter() {
                let z: Vec<f64> = zi.iter().copied().collect();
                let x = combine(partition, y, &z);
                if !in_unit_box(&x) {
                    rejected += 1;
                    continue;
                }
                match evaluator.evaluate(&x) {
                    Ok(v) => {
                        lo = lo.min(v);
                        hi = hi.max(v);
                        used += 1;
                    }
                    Err(_) => rejected += 1,
                }
            }
            Ok(SensitivityPoint {
                y: y.clone(),
                spread: (used > 0).then_some(hi - lo),
                used,
                rejected,
            })
        })
        .collect()
}

/// Values of a 2-D surface on a uniform `size x size` grid over `bounds`,
/// rows ordered with `y1` outermost.
pub fn contour_grid(
    surface: &ResponseSurface,
    bounds: [(f64, f64); 2],
    size: usize,
) -> Result<Vec<[f64; 3]>> {
    if surface.active_dim() != 2 {
        return Err(contract(
            "contour grid needs a surface in two active coordinates",
        ));
    }
    if size < 2 {
        return Err(contract("contour grid needs at least 2 points per axis"));
    }
    let step = |(lo, hi): (f64, f64), k: usize| lo + (hi - lo) * k as f64 / (size - 1) as f64;
    let mut out = Vec::with_capacity(size * size);
    for i in 0..size {
        let a = step(bounds[0], i);
        for j in 0..size {
            let b = step(bounds[1], j);
            out.push([a, b, surface.eval_y(&[a, b])]);
        }
    }
    Ok(out)
}

/// Blank lines between `y1` blocks so gnuplot reads it as a grid.
pub fn write_contour_csv(
    path: &Path,
    grid: &[[f64; 3]],
    size: usize,
    comments: &[String],
) -> Result<()> {
    use std::io::Write as _;
    let mut text = String::new();
    for c in comments {
        text.push_str("# ");
        text.push_str(c);
        text.push('\n');
    }
    text.push_str("y1,y2,value\n");
    for (k, p) in grid.iter().enumerate() {
        if k > 0 && k % size == 0 {
            text.push('\n');
        }
        text.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(p[0]),
            fmt_f64(p[1]),
            fmt_f64(p[2])
        ));
    }
    let mut file = std::fs::File::create(path)?;
    file.write_all(text.as_bytes())?;
    Ok(())
}

/// Scatter of a shadow CSV; 2-D data is colored by `f`.
pub fn shadow_gnuplot(csv_name: &str, dim: usize, title: &str) -> String {
    let mut s = String::from("set datafile separator ','\nset key off\n");
    s.push_str(&format!("set title '{title}'\n"));
    if dim == 1 {
        s.push_str("set xlabel 'y1'\nset ylabel 'f'\n");
        s.push_str(&format!(
            "plot '{csv_name}' skip 1 using 1:2 with points pt 7 ps 0.6\n"
        ));
    } else {
        s.push_str("set xlabel 'y1'\nset ylabel 'y2'\nset palette rgbformulae 33,13,10\n");
        s.push_str(&format!(
            "plot '{csv_name}' skip 1 using 1:2:3 with points pt 7 ps 0.6 palette\n"
        ));
    }
    s
}

/// 2-D shadow of one output with contour lines of another overlaid.
pub fn overlay_gnuplot(shadow_csv: &str, contour_csv: &str, title: &str) -> String {
    format!(
        "set datafile separator ','\nset key off\nset title '{title}'\n\
         set xlabel 'y1'\nset ylabel 'y2'\nset palette rgbformulae 33,13,10\n\
         set contour base\nunset surface\nset view map\nset cntrparam levels 12\n\
         set table 'contour_lines.tmp'\nsplot '{contour_csv}' skip 1 using 1:2:3 with lines\nunset table\n\
         plot '{shadow_csv}' skip 1 using 1:2:3 with points pt 7 ps 0.6 palette, \\\n\
         \x20    'contour_lines.tmp' using 1:2 with lines lc rgb 'black'\n"
    )
}

pub fn pareto_gnuplot(csv_name: &str) -> String {
    format!(
        "set datafile separator ','\nset key off\nset title 'predicted trade-off'\n\
         set xlabel 'drag'\nset ylabel 'lift'\n\
         plot '{csv_name}' skip 1 using 5:6 with lines lw 2\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn identity_partition(m: usize, n: usize) -> SubspacePartition {
        let eye = DMatrix::<f64>::identity(m, m);
        SubspacePartition {
            w1: eye.columns(0, n).into_owned(),
            w2: eye.columns(n, m - n).into_owned(),
            n,
        }
    }

    #[test]
    fn monomial_order() {
        let e = monomial_exponents(2, 2);
        assert_eq!(
            e,
            vec![
                vec![0, 0],
                vec![1, 0],
                vec![0, 1],
                vec![2, 0],
                vec![1, 1],
                vec![0, 2]
            ]
        );
        assert_eq!(monomial_exponents(1, 3).len(), 4);
        assert_eq!(monomial_exponents(3, 2).len(), 10);
    }

    #[test]
    fn y_min_examples() {
        let (v, x) = y_min(&[0.6, 0.8]);
        assert!((v + 1.4).abs() < 1e-15);
        assert_eq!(x, vec![-1.0, -1.0]);
        assert_eq!(y_min(&[1.0, 0.0, 0.0]), (-1.0, vec![-1.0, 1.0, 1.0]));
        assert_eq!(y_min(&[0.0, 0.0]).0, 0.0);
    }

    #[test]
    fn shadow_of_first_axis_is_first_column() {
        let x = DMatrix::from_row_slice(3, 2, &[0.1, 0.2, -0.3, 0.4, 0.5, -0.6]);
        let f = DVector::from_vec(vec![1.0, 2.0, 3.0]);
        let s = shadow_project(&x, &f, &DMatrix::from_column_slice(2, 1, &[1.0, 0.0])).unwrap();
        assert_eq!(s.y.column(0), x.column(0));
        assert!(shadow_project(&x, &f, &DMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn identity_segment_in_two_dims() {
        let p = identity_partition(2, 2);
        let seg = pareto_segment(&p, 5, ZPolicy::Zero, 0).unwrap();
        assert_eq!(seg.y[0], [0.0, -1.0]);
        assert_eq!(seg.y[4], [-1.0, 0.0]);
        for k in 0..5 {
            assert_eq!(seg.x[k], seg.y[k].to_vec());
            assert!(seg.feasible[k]);
        }
    }

    #[test]
    fn segment_rejects_bad_basis() {
        let mut p = identity_partition(3, 2);
        p.w1[(0, 1)] = 0.5;
        assert!(matches!(
            pareto_segment(&p, 5, ZPolicy::Zero, 0),
            Err(Error::Contract(_))
        ));
        assert!(pareto_segment(&identity_partition(3, 1), 5, ZPolicy::Zero, 0).is_err());
        assert!(pareto_segment(&identity_partition(3, 2), 1, ZPolicy::Zero, 0).is_err());
    }

    #[test]
    fn random_policy_stays_in_box_and_on_segment() {
        let p = identity_partition(4, 2);
        let seg = pareto_segment(&p, 11, ZPolicy::RandomFeasible, 3).unwrap();
        for k in 0..seg.len() {
            assert!(seg.feasible[k]);
            assert!(in_unit_box(&seg.x[k]));
            assert_eq!(&seg.x[k][..2], &seg.y[k]);
        }
    }

    #[test]
    fn response_surface_roundtrip() {
        let w1 = DMatrix::from_column_slice(3, 1, &[0.0, 1.0, 0.0]);
        let s = ResponseSurface::from_coefficients(&w1, 2, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(s.eval_x(&[9.0, 0.5, 9.0]).unwrap(), 1.0 + 1.0 + 0.75);
        assert!(s.eval_x(&[0.0]).is_err());
    }

    #[test]
    fn contour_grid_shape() {
        let w1 = DMatrix::<f64>::identity(2, 2);
        let s = ResponseSurface::from_coefficients(&w1, 1, vec![0.0, 1.0, 1.0]).unwrap();
        let g = contour_grid(&s, [(-1.0, 1.0), (0.0, 2.0)], CONTOUR_GRID).unwrap();
        assert_eq!(g.len(), CONTOUR_GRID * CONTOUR_GRID);
        assert_eq!(g[0], [-1.0, 0.0, -1.0]);
        assert_eq!(g[g.len() - 1], [1.0, 2.0, 3.0]);
    }
}
