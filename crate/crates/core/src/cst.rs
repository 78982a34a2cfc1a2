//! Class-shape transformation surfaces `s(l) = l^r1 (1 - l)^r2 * sum_j x_j l^j`.
//!
//! With the round-nose, sharp-trailing-edge class exponents `r1 = 1/2, r2 = 1`
//! each surface is an odd polynomial in `t = sqrt(l)`:
//! `s(t) = x_0 t + sum_{j=1}^{m-1} (x_j - x_{j-1}) t^(2j+1) - x_{m-1} t^(2m+1)`.

use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::geometry::{AirfoilSurfacePair, BasisSpec, ShapeCoefficients, Surface};

pub const DEFAULT_TERMS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassFunctionSpec {
    pub r1: f64,
    pub r2: f64,
}

impl Default for ClassFunctionSpec {
    fn default() -> Self {
        Self { r1: 0.5, r2: 1.0 }
    }
}

impl ClassFunctionSpec {
    pub fn is_round_nose_sharp_tail(&self) -> bool {
        self.r1 == 0.5 && self.r2 == 1.0
    }
}

/// Upper and lower shape-function coefficients. The lower surface keeps its own
/// sign: a negative leading coefficient puts it below the chord.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CstParams {
    pub m: usize,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl CstParams {
    pub fn new(upper: Vec<f64>, lower: Vec<f64>) -> Result<Self> {
        let params = Self {
            m: upper.len(),
            upper,
            lower,
        };
        params.validate()?;
        Ok(params)
    }

    /// Splits a flat `2m` vector: first half upper, second half lower.
    pub fn from_flat(values: &[f64]) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(2) {
            return Err(contract(format!(
                "CST parameter vector must have even, nonzero length (got {})",
                values.len()
            )));
        }
        let m = values.len() / 2;
        Self::new(values[..m].to_vec(), values[m..].to_vec())
    }

    pub fn to_flat(&self) -> Vec<f64> {
        self.upper.iter().chain(&self.lower).copied().collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.upper.len() != self.m || self.lower.len() != self.m {
            return Err(contract(format!(
                "upper ({}) and lower ({}) must both have m = {} > 0 coefficients",
                self.upper.len(),
                self.lower.len(),
                self.m
            )));
        }
        if self.to_flat().iter().any(|v| !v.is_finite()) {
            return Err(contract("CST coefficients must be finite"));
        }
        Ok(())
    }

    /// Both surfaces as odd polynomials in `t` (`m + 1` terms each).
    pub fn surfaces(&self) -> Result<AirfoilSurfacePair> {
        self.validate()?;
        Ok(AirfoilSurfacePair::new(
            expand_odd_polynomial(&self.upper, &ClassFunctionSpec::default())?,
            expand_odd_polynomial(&self.lower, &ClassFunctionSpec::default())?,
        ))
    }
}

pub fn class_function(ell: f64, spec: &ClassFunctionSpec) -> f64 {
    ell.powf(spec.r1) * (1.0 - ell).powf(spec.r2)
}

/// `sum_j x_j l^j` by Horner's rule.
pub fn shape_function(ell: f64, coeffs: &[f64]) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, x| acc * ell + x)
}

pub fn cst_surface(ell: f64, coeffs: &[f64], spec: &ClassFunctionSpec) -> Result<f64> {
    if coeffs.is_empty() {
        return Err(contract(
            "CST shape function needs at least one coefficient",
        ));
    }
    if !(0.0..=1.0).contains(&ell) {
        return Err(Error::Domain(format!("l = {ell} is outside [0, 1]")));
    }
    Ok(class_function(ell, spec) * shape_function(ell, coeffs))
}

/// Collects `sum_j x_j t^(2j+1) (1 - t^2)` by power of `t`.
pub fn expand_odd_polynomial(coeffs: &[f64], spec: &ClassFunctionSpec) -> Result<Surface> {
    if !spec.is_round_nose_sharp_tail() {
        return Err(Error::UnsupportedExpansion {
            r1: spec.r1,
            r2: spec.r2,
        });
    }
    let m = coeffs.len();
    if m == 0 {
        return Err(contract(
            "CST shape function needs at least one coefficient",
        ));
    }
    let mut out = vec![0.0; m + 1];
    for (j, x) in coeffs.iter().enumerate() {
        out[j] += x;
        out[j + 1] -= x;
    }
    Surface::new(BasisSpec::odd_in_t(m + 1)?, ShapeCoefficients::new(out))
}
