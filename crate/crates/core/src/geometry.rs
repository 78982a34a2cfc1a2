//! Polynomial shape functions over the chord coordinate `l` in `[0, 1]`.
//!
//! Every basis supported here is a sum of powers of `t = sqrt(l)`, so a surface
//! can be evaluated either in `l` or in `t`. The round leading edge shows up as a
//! `sqrt(l)` term, whose slope is unbounded at `l = 0`.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::linalg::lstsq;

/// Default number of nodes of the validity grid (uniform in `t`).
pub const DEFAULT_GRID_SIZE: usize = 201;
/// Absolute tolerance, in chord units, for the fixed-endpoint checks.
pub const ENDPOINT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisKind {
    /// `sqrt(l), l, l^2, l^3, ...`
    Naca4Like,
    /// `l^(j - 1/2)` for `j = 1..k`
    HalfIntegerPowers,
    /// `t^(2j - 1)` for `j = 1..k`; the same functions as the half-integer basis
    /// written in the `t` variable.
    OddPowersInT,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub kind: BasisKind,
    pub term_count: usize,
}

impl BasisSpec {
    pub fn new(kind: BasisKind, term_count: usize) -> Result<Self> {
        if term_count == 0 {
            return Err(contract("basis needs at least one term"));
        }
        Ok(Self { kind, term_count })
    }

    /// The five-term basis of the classical four-digit thickness polynomial.
    pub fn naca4() -> Self {
        Self {
            kind: BasisKind::Naca4Like,
            term_count: 5,
        }
    }

    pub fn half_integer(term_count: usize) -> Result<Self> {
        Self::new(BasisKind::HalfIntegerPowers, term_count)
    }

    pub fn odd_in_t(term_count: usize) -> Result<Self> {
        Self::new(BasisKind::OddPowersInT, term_count)
    }

    /// Power of `t` carried by the zero-based term `j`.
    pub fn t_power(&self, j: usize) -> u32 {
        let j = j as u32;
        match self.kind {
            BasisKind::Naca4Like if j == 0 => 1,
            BasisKind::Naca4Like => 2 * j,
            BasisKind::HalfIntegerPowers | BasisKind::OddPowersInT => 2 * j + 1,
        }
    }

    pub fn t_powers(&self) -> Vec<u32> {
        (0..self.term_count).map(|j| self.t_power(j)).collect()
    }

    /// Basis values `phi_j(l)` evaluated in the `l` variable.
    pub fn values(&self, ell: f64) -> Vec<f64> {
        let root = ell.sqrt();
        (0..self.term_count)
            .map(|j| ell_power(ell, root, self.t_power(j)))
            .collect()
    }
}

/// `l^(p/2)` without going through `powf`.
fn ell_power(ell: f64, root: f64, t_power: u32) -> f64 {
    let half = (t_power / 2) as i32;
    if t_power.is_multiple_of(2) {
        ell.powi(half)
    } else {
        root * ell.powi(half)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapeCoefficients {
    pub values: Vec<f64>,
    /// Overall multiplier; 1.0 except for NACA-style thickness scaling.
    pub scale: f64,
}

impl ShapeCoefficients {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values, scale: 1.0 }
    }

    pub fn scaled(values: Vec<f64>, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!(
                "scale must be positive, got {scale}"
            )));
        }
        Ok(Self { values, scale })
    }

    pub fn zeros(len: usize) -> Self {
        Self::new(vec![0.0; len])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Coefficients with the scale folded in.
    pub fn effective(&self) -> Vec<f64> {
        self.values.iter().map(|a| a * self.scale).collect()
    }
}

/// One surface `s(l) = tau * sum_j a_j phi_j(l)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Surface {
    basis: BasisSpec,
    coeffs: ShapeCoefficients,
}

impl Surface {
    pub fn new(basis: BasisSpec, coeffs: ShapeCoefficients) -> Result<Self> {
        if coeffs.len() != basis.term_count {
            return Err(contract(format!(
                "basis has {} terms but {} coefficients were given",
                basis.term_count,
                coeffs.len()
            )));
        }
        if coeffs.values.iter().any(|a| !a.is_finite()) {
            return Err(contract("shape coefficients must be finite"));
        }
        Ok(Self { basis, coeffs })
    }

    pub fn basis(&self) -> &BasisSpec {
        &self.basis
    }

    pub fn coefficients(&self) -> &ShapeCoefficients {
        &self.coeffs
    }

    /// Height at chord position `l`.
    pub fn eval(&self, ell: f64) -> Result<f64> {
        check_unit("l", ell)?;
        let root = ell.sqrt();
        let sum: f64 = self
            .coeffs
            .values
            .iter()
            .enumerate()
            .map(|(j, a)| a * ell_power(ell, root, self.basis.t_power(j)))
            .sum();
        Ok(self.coeffs.scale * sum)
    }

    /// Height at `t = sqrt(l)`.
    pub fn eval_t(&self, t: f64) -> Result<f64> {
        check_unit("t", t)?;
        Ok(self.eval_t_unchecked(t))
    }

    fn eval_t_unchecked(&self, t: f64) -> f64 {
        let sum: f64 = self
            .coeffs
            .values
            .iter()
            .enumerate()
            .map(|(j, a)| a * t.powi(self.basis.t_power(j) as i32))
            .sum();
        self.coeffs.scale * sum
    }

    /// `ds/dl` from the power rule in `l`. Singular at the nose.
    pub fn slope(&self, ell: f64) -> Result<f64> {
        check_unit("l", ell)?;
        if ell == 0.0 {
            return Err(Error::LeadingEdgeSingularity);
        }
        let root = ell.sqrt();
        let sum: f64 = self
            .coeffs
            .values
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let p = self.basis.t_power(j);
                // d/dl l^(p/2) = (p/2) l^(p/2 - 1)
                let factor = 0.5 * p as f64;
                let term = if p == 1 {
                    1.0 / root
                } else if p.is_multiple_of(2) {
                    ell.powi((p / 2) as i32 - 1)
                } else {
                    root * ell.powi(((p - 1) / 2) as i32 - 1)
                };
                a * factor * term
            })
            .sum();
        Ok(self.coeffs.scale * sum)
    }

    /// `ds/dt` of the `t`-form.
    pub fn slope_t(&self, t: f64) -> Result<f64> {
        check_unit("t", t)?;
        let sum: f64 = self
            .coeffs
            .values
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let p = self.basis.t_power(j);
                a * p as f64 * t.powi(p as i32 - 1)
            })
            .sum();
        Ok(self.coeffs.scale * sum)
    }

    /// `d2s/dl2`.
    pub fn curvature(&self, ell: f64) -> Result<f64> {
        check_unit("l", ell)?;
        if ell == 0.0 {
            return Err(Error::LeadingEdgeSingularity);
        }
        let sum: f64 = self
            .coeffs
            .values
            .iter()
            .enumerate()
            .map(|(j, a)| {
                let e = 0.5 * self.basis.t_power(j) as f64;
                a * e * (e - 1.0) * ell.powf(e - 2.0)
            })
            .sum();
        Ok(self.coeffs.scale * sum)
    }

    pub fn negated(&self) -> Self {
        let mut out = self.clone();
        out.coeffs.values.iter_mut().for_each(|a| *a = -*a);
        out
    }

    pub fn scaled_by(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.coeffs.values.iter_mut().for_each(|a| *a *= factor);
        out
    }
}

fn check_unit(name: &str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {value} is outside [0, 1]")))
    }
}

pub fn eval_shape(coeffs: &ShapeCoefficients, basis: &BasisSpec, ell: f64) -> Result<f64> {
    Surface::new(*basis, coeffs.clone())?.eval(ell)
}

pub fn eval_shape_t(coeffs: &ShapeCoefficients, basis: &BasisSpec, t: f64) -> Result<f64> {
    Surface::new(*basis, coeffs.clone())?.eval_t(t)
}

pub fn shape_derivative(coeffs: &ShapeCoefficients, basis: &BasisSpec, ell: f64) -> Result<f64> {
    Surface::new(*basis, coeffs.clone())?.slope(ell)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AirfoilSurfacePair {
    pub upper: Surface,
    pub lower: Surface,
}

impl AirfoilSurfacePair {
    pub fn new(upper: Surface, lower: Surface) -> Self {
        Self { upper, lower }
    }

    /// Reflects the airfoil about the chord line.
    pub fn mirrored(&self) -> Self {
        Self {
            upper: self.lower.negated(),
            lower: self.upper.negated(),
        }
    }

    pub fn scaled_by(&self, factor: f64) -> Self {
        Self {
            upper: self.upper.scaled_by(factor),
            lower: self.lower.scaled_by(factor),
        }
    }
}

/// Classical four-digit thickness coefficients; the closed form replaces the
/// last coefficient so the series sums to zero.
pub const NACA4_THICKNESS: [f64; 5] = [0.2969, -0.1260, -0.3516, 0.2843, -0.1015];
pub const NACA4_THICKNESS_CLOSED: [f64; 5] = [0.2969, -0.1260, -0.3516, 0.2843, -0.1036];

/// Symmetric four-digit section with thickness ratio `thickness`, upper and
/// lower surfaces scaled independently by `upper_scale` and `lower_scale`.
pub fn naca_thickness_pair(
    thickness: f64,
    upper_scale: f64,
    lower_scale: f64,
    closed: bool,
) -> Result<AirfoilSurfacePair> {
    if !(thickness > 0.0 && upper_scale > 0.0 && lower_scale > 0.0) {
        return Err(Error::Domain(
            "thickness and surface scales must be positive".into(),
        ));
    }
    let base = if closed {
        NACA4_THICKNESS_CLOSED
    } else {
        NACA4_THICKNESS
    };
    let tau = 5.0 * thickness;
    let upper = ShapeCoefficients::scaled(base.iter().map(|a| upper_scale * a).collect(), tau)?;
    let lower = ShapeCoefficients::scaled(base.iter().map(|a| -lower_scale * a).collect(), tau)?;
    Ok(AirfoilSurfacePair::new(
        Surface::new(BasisSpec::naca4(), upper)?,
        Surface::new(BasisSpec::naca4(), lower)?,
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityOptions {
    pub grid_size: usize,
    /// Also require `s_U(1) = s_L(1) = 0`.
    pub sharp_trailing_edge: bool,
    pub endpoint_tolerance: f64,
}

impl Default for ValidityOptions {
    fn default() -> Self {
        Self {
            grid_size: DEFAULT_GRID_SIZE,
            sharp_trailing_edge: false,
            endpoint_tolerance: ENDPOINT_TOLERANCE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidityReport {
    /// Surfaces finite with `s_U >= 0` and `s_L <= 0` on the grid.
    pub bounded: bool,
    /// Observed minimum of `s_L`.
    pub lower_bound: f64,
    /// Observed maximum of `s_U`.
    pub upper_bound: f64,
    pub endpoints_fixed: bool,
    pub sharp_trailing_edge: bool,
    /// `s_U > s_L` at every interior node.
    pub feasible: bool,
    pub min_gap: f64,
    pub min_gap_at: f64,
    pub grid_size: usize,
}

/// Checks the airfoil conditions on a grid uniform in `t` (so `l = t^2`).
/// Smoothness is not checked: it holds for every polynomial basis here.
pub fn validate_airfoil(pair: &AirfoilSurfacePair, options: &ValidityOptions) -> ValidityReport {
    let n = options.grid_size.max(3);
    let tol = options.endpoint_tolerance;
    let mut upper_bound = f64::NEG_INFINITY;
    let mut lower_bound = f64::INFINITY;
    let mut finite = true;
    let mut signs_ok = true;
    let mut min_gap = f64::INFINITY;
    let mut min_gap_at = f64::NAN;
    let mut feasible = true;
    let mut ends = [(0.0, 0.0); 2];

    for i in 0..n {
        let t = i as f64 / (n - 1) as f64;
        let su = pair.upper.eval_t_unchecked(t);
        let sl = pair.lower.eval_t_unchecked(t);
        if !(su.is_finite() && sl.is_finite()) {
            finite = false;
            feasible = false;
            continue;
        }
        upper_bound = upper_bound.max(su);
        lower_bound = lower_bound.min(sl);
        if su < -tol || sl > tol {
            signs_ok = false;
        }
        if i == 0 {
            ends[0] = (su, sl);
        } else if i == n - 1 {
            ends[1] = (su, sl);
        } else {
            let gap = su - sl;
            if gap < min_gap {
                min_gap = gap;
                min_gap_at = t * t;
            }
            if gap.is_nan() || gap <= 0.0 {
                feasible = false;
            }
        }
    }

    let leading = ends[0].0.abs() <= tol && ends[0].1.abs() <= tol;
    let trailing = ends[1].0.abs() <= tol && ends[1].1.abs() <= tol;
    ValidityReport {
        bounded: finite && signs_ok,
        lower_bound,
        upper_bound,
        endpoints_fixed: leading && (!options.sharp_trailing_edge || trailing),
        sharp_trailing_edge: options.sharp_trailing_edge,
        feasible,
        min_gap,
        min_gap_at,
        grid_size: n,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFit {
    pub coefficients: ShapeCoefficients,
    pub residual_norm: f64,
    pub max_abs_error: f64,
}

/// Linear least-squares fit of a fixed basis to `(l, height)` targets.
pub fn fit_coefficients(targets: &[(f64, f64)], basis: &BasisSpec) -> Result<CoefficientFit> {
    let k = basis.term_count;
    for &(ell, h) in targets {
        check_unit("l", ell)?;
        if !h.is_finite() {
            return Err(contract("target heights must be finite"));
        }
    }
    let mut distinct: Vec<f64> = targets.iter().map(|p| p.0).collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < k {
        return Err(Error::IllPosedFit {
            rank: distinct.len(),
            columns: k,
        });
    }
    let rows = targets.len();
    let mut design = DMatrix::zeros(rows, k);
    for (i, &(ell, _)) in targets.iter().enumerate() {
        for (j, phi) in basis.values(ell).into_iter().enumerate() {
            design[(i, j)] = phi;
        }
    }
    let rhs = DVector::from_iterator(rows, targets.iter().map(|p| p.1));
    let a = lstsq(&design, &rhs)?;
    let residual = &design * &a - &rhs;
    Ok(CoefficientFit {
        coefficients: ShapeCoefficients::new(a.iter().copied().collect()),
        residual_norm: residual.norm(),
        max_abs_error: residual.amax(),
    })
}

/// `(l, height)` pairs on a grid uniform in `t`, running from the leading edge.
pub fn surface_points(surface: &Surface, grid_size: usize) -> Vec<(f64, f64)> {
    let n = grid_size.max(2);
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            (t * t, surface.eval_t_unchecked(t))
        })
        .collect()
}

/// Closed loop: trailing edge, along the upper surface to the nose, then along
/// the lower surface back to the trailing edge.
pub fn coordinate_loop(pair: &AirfoilSurfacePair, grid_size: usize) -> Vec<(f64, f64)> {
    let mut pts: Vec<(f64, f64)> = surface_points(&pair.upper, grid_size)
        .into_iter()
        .rev()
        .collect();
    pts.extend(surface_points(&pair.lower, grid_size).into_iter().skip(1));
    pts
}

/// Two whitespace-separated columns, 15 significant digits.
pub fn format_points(points: &[(f64, f64)]) -> String {
    let mut out = String::with_capacity(points.len() * 48);
    for (x, y) in points {
        let _ = writeln!(out, "{x:.14e} {y:.14e}");
    }
    out
}

pub fn write_points(path: &Path, points: &[(f64, f64)]) -> Result<()> {
    let mut file = std::io::BufWriter::new(std::fs::File::create(path)?);
    file.write_all(format_points(points).as_bytes())?;
    file.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surface(kind: BasisKind, values: &[f64]) -> Surface {
        Surface::new(
            BasisSpec::new(kind, values.len()).unwrap(),
            ShapeCoefficients::new(values.to_vec()),
        )
        .unwrap()
    }

    #[test]
    fn half_integer_leading_term_is_square_root() {
        let s = surface(
            BasisKind::HalfIntegerPowers,
            &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        );
        assert_eq!(s.eval(0.25).unwrap(), 0.5);
        assert_eq!(s.eval_t(0.5).unwrap(), 0.5);
    }

    #[test]
    fn zero_coefficients_vanish_everywhere() {
        for kind in [
            BasisKind::Naca4Like,
            BasisKind::HalfIntegerPowers,
            BasisKind::OddPowersInT,
        ] {
            let s = surface(kind, &[0.0; 5]);
            for ell in [0.0, 0.3, 1.0] {
                assert_eq!(s.eval(ell).unwrap(), 0.0);
                if ell > 0.0 {
                    assert_eq!(s.slope(ell).unwrap(), 0.0);
                }
            }
        }
    }

    #[test]
    fn every_basis_vanishes_at_leading_edge() {
        for kind in [
            BasisKind::Naca4Like,
            BasisKind::HalfIntegerPowers,
            BasisKind::OddPowersInT,
        ] {
            let s = surface(kind, &[0.3, -1.2, 2.0, 0.7]);
            assert_eq!(s.eval(0.0).unwrap(), 0.0);
            assert_eq!(s.eval_t(0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn naca_series_summing_to_zero_closes_trailing_edge() {
        let s = Surface::new(
            BasisSpec::naca4(),
            ShapeCoefficients::scaled(NACA4_THICKNESS_CLOSED.to_vec(), 0.6).unwrap(),
        )
        .unwrap();
        assert!(s.eval(1.0).unwrap().abs() < 1e-15);
    }

    #[test]
    fn odd_series_at_unit_t() {
        let s = surface(BasisKind::OddPowersInT, &[1.0, 1.0, 0.0, 0.0]);
        assert_eq!(s.eval_t(1.0).unwrap(), 2.0);
    }

    #[test]
    fn slope_of_square_root_term() {
        let s = surface(BasisKind::HalfIntegerPowers, &[1.0, 0.0, 0.0]);
        assert!((s.slope(0.25).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn slope_of_linear_naca_term() {
        let s = surface(BasisKind::Naca4Like, &[0.0, 1.0, 0.0, 0.0, 0.0]);
        for ell in [0.01, 0.4, 1.0] {
            assert_eq!(s.slope(ell).unwrap(), 1.0);
        }
    }

    #[test]
    fn slope_at_nose_is_singular() {
        let s = surface(BasisKind::HalfIntegerPowers, &[1.0, 0.0]);
        assert!(matches!(s.slope(0.0), Err(Error::LeadingEdgeSingularity)));
        assert!(matches!(
            s.curvature(0.0),
            Err(Error::LeadingEdgeSingularity)
        ));
    }

    #[test]
    fn length_mismatch_is_rejected() {
        let basis = BasisSpec::half_integer(6).unwrap();
        let coeffs = ShapeCoefficients::new(vec![1.0, 2.0]);
        assert!(matches!(
            eval_shape(&coeffs, &basis, 0.5),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn out_of_domain_position_is_rejected() {
        let s = surface(BasisKind::OddPowersInT, &[1.0]);
        assert!(matches!(s.eval(1.5), Err(Error::Domain(_))));
        assert!(matches!(s.eval_t(-0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn mirrored_square_root_pair_is_feasible() {
        let upper = surface(BasisKind::HalfIntegerPowers, &[0.2, 0.0, 0.0]);
        let pair = AirfoilSurfacePair::new(upper.clone(), upper.negated());
        let report = validate_airfoil(&pair, &ValidityOptions::default());
        assert!(report.feasible);
        assert!(report.bounded);
        // gap 0.4 sqrt(l) is smallest at the first interior node
        let t1 = 1.0 / 200.0;
        assert!((report.min_gap_at - t1 * t1).abs() < 1e-18);
        assert!((report.min_gap - 0.4 * t1).abs() < 1e-15);
    }

    #[test]
    fn identical_surfaces_are_infeasible() {
        let s = surface(BasisKind::HalfIntegerPowers, &[0.2, 0.1, 0.0]);
        let pair = AirfoilSurfacePair::new(s.clone(), s);
        let report = validate_airfoil(&pair, &ValidityOptions::default());
        assert!(!report.feasible);
        assert_eq!(report.min_gap, 0.0);
    }

    #[test]
    fn naca0012_pair_is_valid_with_sharp_trailing_edge() {
        let pair = naca_thickness_pair(0.12, 1.0, 1.0, true).unwrap();
        let report = validate_airfoil(
            &pair,
            &ValidityOptions {
                sharp_trailing_edge: true,
                ..Default::default()
            },
        );
        assert!(report.feasible);
        assert!(report.endpoints_fixed);
        assert!(report.bounded);
        assert!((report.upper_bound - 0.06).abs() < 2e-4);
    }

    #[test]
    fn open_trailing_edge_fails_sharp_check() {
        let pair = naca_thickness_pair(0.12, 1.0, 1.0, false).unwrap();
        let sharp = ValidityOptions {
            sharp_trailing_edge: true,
            ..Default::default()
        };
        assert!(!validate_airfoil(&pair, &sharp).endpoints_fixed);
        assert!(validate_airfoil(&pair, &ValidityOptions::default()).endpoints_fixed);
    }

    #[test]
    fn fit_recovers_generating_coefficients() {
        let basis = BasisSpec::half_integer(6).unwrap();
        let truth = [0.17, -0.3, 0.5, -0.2, 0.1, -0.05];
        let s = Surface::new(basis, ShapeCoefficients::new(truth.to_vec())).unwrap();
        let targets: Vec<_> = (0..=40)
            .map(|i| {
                let ell = i as f64 / 40.0;
                (ell, s.eval(ell).unwrap())
            })
            .collect();
        let fit = fit_coefficients(&targets, &basis).unwrap();
        for (a, b) in fit.coefficients.values.iter().zip(truth) {
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn fit_of_zero_targets_is_zero() {
        let basis = BasisSpec::naca4();
        let targets: Vec<_> = (0..20).map(|i| (i as f64 / 19.0, 0.0)).collect();
        let fit = fit_coefficients(&targets, &basis).unwrap();
        assert!(fit.coefficients.values.iter().all(|a| *a == 0.0));
    }

    #[test]
    fn fit_with_too_few_distinct_points_is_ill_posed() {
        let basis = BasisSpec::naca4();
        let targets = vec![(0.1, 0.0), (0.1, 0.1), (0.2, 0.0), (0.3, 0.0)];
        assert!(matches!(
            fit_coefficients(&targets, &basis),
            Err(Error::IllPosedFit { .. })
        ));
    }

    #[test]
    fn coordinate_loop_runs_trailing_edge_to_trailing_edge() {
        let pair = naca_thickness_pair(0.12, 1.0, 1.0, true).unwrap();
        let pts = coordinate_loop(&pair, 11);
        assert_eq!(pts.len(), 21);
        assert_eq!(pts[0].0, 1.0);
        assert_eq!(pts[10], (0.0, 0.0));
        assert_eq!(pts[20].0, 1.0);
        assert!(pts[5].1 > 0.0 && pts[15].1 < 0.0);
        let text = format_points(&pts[..1]);
        assert!(text.starts_with("1.00000000000000e0 "));
        assert!(text.ends_with('\n'));
    }
}
