//! PARSEC sections: eleven geometric parameters fix the six half-integer-power
//! coefficients of each surface through a 6x6 linear constraint system.
//!
//! Constraint rows, for a surface with interior crest position `l_int`:
//!
//! 1. crest height `s(l_int)`
//! 2. trailing-edge height `s(1)`
//! 3. zero slope at the crest
//! 4. trailing-edge slope `s'(1)`
//! 5. crest curvature `s''(l_int)` (a bare second derivative)
//! 6. leading coefficient `a_1 = +-sqrt(2 r_le)`
//!
//! Angle convention: `x7` and `x8` are in degrees, and the trailing-edge slopes
//! are `tan(x7 - x8)` on the upper surface and `tan(x7 + x8)` on the lower one.

use nalgebra::{Matrix6, Vector6};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{AirfoilSurfacePair, BasisSpec, ShapeCoefficients, Surface};

/// Largest accepted 2-norm condition number of a constraint matrix.
pub const CONDITION_LIMIT: f64 = 1e12;

pub const PARAMETER_COUNT: usize = 11;

pub const PARAMETER_NAMES: [&str; PARAMETER_COUNT] = [
    "upper crest position",
    "lower crest position",
    "upper crest height",
    "lower crest height",
    "trailing-edge offset",
    "trailing-edge half-thickness",
    "wedge angle (deg)",
    "wedge half-angle (deg)",
    "upper crest curvature",
    "lower crest curvature",
    "leading-edge radius",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParsecParams {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
    pub x5: f64,
    pub x6: f64,
    pub x7: f64,
    pub x8: f64,
    pub x9: f64,
    pub x10: f64,
    pub x11: f64,
}

impl ParsecParams {
    pub fn from_slice(values: &[f64]) -> Result<Self> {
        if values.len() != PARAMETER_COUNT {
            return Err(Error::DimensionMismatch {
                expected: PARAMETER_COUNT,
                found: values.len(),
            });
        }
        let v = values;
        Ok(Self {
            x1: v[0],
            x2: v[1],
            x3: v[2],
            x4: v[3],
            x5: v[4],
            x6: v[5],
            x7: v[6],
            x8: v[7],
            x9: v[8],
            x10: v[9],
            x11: v[10],
        })
    }

    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.x1, self.x2, self.x3, self.x4, self.x5, self.x6, self.x7, self.x8, self.x9,
            self.x10, self.x11,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        if self.to_vec().iter().any(|v| !v.is_finite()) {
            return Err(Error::Domain("PARSEC parameters must be finite".into()));
        }
        for (name, v) in [("x1", self.x1), ("x2", self.x2)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Domain(format!(
                    "{name} = {v}: crest position must lie in (0, 1)"
                )));
            }
        }
        if self.x6 < 0.0 {
            return Err(Error::Domain(format!(
                "x6 = {}: trailing-edge half-thickness must be >= 0",
                self.x6
            )));
        }
        if !(self.x11 > 0.0) {
            return Err(Error::Domain(format!(
                "x11 = {}: leading-edge radius must be positive",
                self.x11
            )));
        }
        Ok(())
    }

    /// The trailing edge closes to a point.
    pub fn has_sharp_trailing_edge(&self) -> bool {
        self.x5 == 0.0 && self.x6 == 0.0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Upper,
    Lower,
}

impl Side {
    fn sign(self) -> f64 {
        match self {
            Side::Upper => 1.0,
            Side::Lower => -1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintSystem {
    pub matrix: Matrix6<f64>,
    pub rhs: Vector6<f64>,
    pub side: Side,
    pub ell_int: f64,
}

impl ConstraintSystem {
    pub fn residual(&self, coeffs: &[f64]) -> f64 {
        let a = Vector6::from_column_slice(coeffs);
        (self.matrix * a - self.rhs).amax()
    }
}

/// Constraint matrix for crest position `ell_int`; depends on nothing else.
pub fn constraint_matrix(ell_int: f64) -> Matrix6<f64> {
    let mut m = Matrix6::zeros();
    let root = ell_int.sqrt();
    for j in 0..6 {
        // exponent of l for basis term j: j + 1/2
        let e = j as f64 + 0.5;
        let odd = |p: i32| root.powi(p);
        m[(0, j)] = odd(2 * j as i32 + 1);
        m[(1, j)] = 1.0;
        m[(2, j)] = e * odd(2 * j as i32 - 1);
        m[(3, j)] = e;
        m[(4, j)] = e * (e - 1.0) * odd(2 * j as i32 - 3);
    }
    m[(5, 0)] = 1.0;
    m
}

/// Trailing-edge slopes `(ds_U/dl(1), ds_L/dl(1))` from the wedge angles.
pub fn trailing_edge_slopes(wedge_deg: f64, half_angle_deg: f64) -> (f64, f64) {
    (
        (wedge_deg - half_angle_deg).to_radians().tan(),
        (wedge_deg + half_angle_deg).to_radians().tan(),
    )
}

/// `+sqrt(2 eps)` on the upper surface, `-sqrt(2 eps)` on the lower.
pub fn leading_edge_coefficient(radius: f64, side: Side) -> Result<f64> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Domain(format!(
            "leading-edge radius must be positive, got {radius}"
        )));
    }
    Ok(side.sign() * (2.0 * radius).sqrt())
}

pub fn build_constraint_system(params: &ParsecParams, side: Side) -> Result<ConstraintSystem> {
    params.validate()?;
    let (upper_slope, lower_slope) = trailing_edge_slopes(params.x7, params.x8);
    let a1 = leading_edge_coefficient(params.x11, side)?;
    let (ell_int, rhs) = match side {
        Side::Upper => (
            params.x1,
            Vector6::new(
                params.x3,
                params.x5 + params.x6,
                0.0,
                upper_slope,
                params.x9,
                a1,
            ),
        ),
        Side::Lower => (
            params.x2,
            Vector6::new(
                params.x4,
                params.x5 - params.x6,
                0.0,
                lower_slope,
                params.x10,
                a1,
            ),
        ),
    };
    Ok(ConstraintSystem {
        matrix: constraint_matrix(ell_int),
        rhs,
        side,
        ell_int,
    })
}

pub fn solve_system(system: &ConstraintSystem) -> Result<Vector6<f64>> {
    let condition = {
        let sv = system.matrix.singular_values();
        let smin = sv.min();
        if smin > 0.0 {
            sv.max() / smin
        } else {
            f64::INFINITY
        }
    };
    if !(condition < CONDITION_LIMIT) {
        return Err(Error::Conditioning {
            ell_int: system.ell_int,
            condition,
        });
    }
    system
        .matrix
        .lu()
        .solve(&system.rhs)
        .ok_or(Error::Conditioning {
            ell_int: system.ell_int,
            condition,
        })
}

/// Solves both surface systems.
pub fn solve_coefficients(params: &ParsecParams) -> Result<AirfoilSurfacePair> {
    let basis = BasisSpec::half_integer(6)?;
    let mut surfaces = [Side::Upper, Side::Lower].into_iter().map(|side| {
        let system = build_constraint_system(params, side)?;
        let a = solve_system(&system)?;
        Surface::new(basis, ShapeCoefficients::new(a.iter().copied().collect()))
    });
    let upper = surfaces.next().expect("upper")?;
    let lower = surfaces.next().expect("lower")?;
    Ok(AirfoilSurfacePair::new(upper, lower))
}
