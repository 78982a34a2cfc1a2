//! Parameter boxes, the affine map to `[-1, 1]^m`, and uniform Monte Carlo draws.

use std::path::Path;

use nalgebra::DMatrix;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{contract, Error, Result};
use crate::seeding::stream_rng;

/// Relative slack (in box widths) accepted by [`ParameterBox::normalize`].
const BOX_SLACK: f64 = 1e-12;

/// PARSEC bounds as printed, including the two negative rows whose columns are
/// reversed (`x7`, `x9`); [`parsec_table2`] sorts them.
pub const PARSEC_TABLE2_AS_PRINTED: [(f64, f64); 11] = [
    (0.242, 0.363),
    (0.242, 0.363),
    (0.048, 0.072),
    (-0.072, -0.048),
    (-0.004, 0.004),
    (0.008, 0.012),
    (-2.223, -3.335),
    (7.40, 11.10),
    (-0.400, -0.600),
    (0.400, 0.600),
    (0.012, 0.018),
];

/// CST bounds as printed; `x6` has reversed columns.
pub const CST_TABLE3_AS_PRINTED: [(f64, f64); 10] = [
    (0.12, 0.18),
    (0.8, 1.2),
    (0.8, 1.2),
    (0.8, 1.2),
    (0.8, 1.2),
    (-0.12, -0.18),
    (0.8, 1.2),
    (0.8, 1.2),
    (0.8, 1.2),
    (0.8, 1.2),
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBox")]
pub struct ParameterBox {
    pub labels: Vec<String>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Deserialize)]
struct RawBox {
    labels: Option<Vec<String>>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl TryFrom<RawBox> for ParameterBox {
    type Error = Error;

    fn try_from(raw: RawBox) -> Result<Self> {
        let labels = raw
            .labels
            .unwrap_or_else(|| default_labels(raw.lower.len()));
        ParameterBox::new(labels, raw.lower, raw.upper)
    }
}

pub fn default_labels(m: usize) -> Vec<String> {
    (1..=m).map(|i| format!("x{i}")).collect()
}

impl ParameterBox {
    /// Builds a box, sorting each `(lower, upper)` pair.
    pub fn new(labels: Vec<String>, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let m = lower.len();
        if m == 0 {
            return Err(contract("parameter box needs at least one coordinate"));
        }
        if upper.len() != m || labels.len() != m {
            return Err(contract(format!(
                "box arrays disagree: {} labels, {} lower, {} upper",
                labels.len(),
                m,
                upper.len()
            )));
        }
        let mut lo = Vec::with_capacity(m);
        let mut hi = Vec::with_capacity(m);
        for (i, (&a, &b)) in lower.iter().zip(&upper).enumerate() {
            if !(a.is_finite() && b.is_finite()) {
                return Err(contract(format!("bounds of {} are not finite", labels[i])));
            }
            let (a, b) = if a <= b { (a, b) } else { (b, a) };
            if a == b {
                return Err(Error::DegenerateInterval { index: i });
            }
            lo.push(a);
            hi.push(b);
        }
        Ok(Self {
            labels,
            lower: lo,
            upper: hi,
        })
    }

    fn from_pairs(pairs: &[(f64, f64)]) -> Self {
        let (lower, upper): (Vec<f64>, Vec<f64>) = pairs.iter().copied().unzip();
        Self::new(default_labels(pairs.len()), lower, upper).expect("built-in table is valid")
    }

    /// The hypercube `[-1, 1]^m` itself.
    pub fn unit(m: usize) -> Result<Self> {
        Self::new(default_labels(m), vec![-1.0; m], vec![1.0; m])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn center(&self) -> Vec<f64> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| 0.5 * (a + b))
            .collect()
    }

    fn half_widths(&self) -> impl Iterator<Item = f64> + '_ {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(a, b)| 0.5 * (b - a))
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.len() == self.dim()
            && x.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(v, (a, b))| *v >= *a && *v <= *b)
    }

    /// Physical point to `[-1, 1]^m`.
    pub fn normalize(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_len(x.len())?;
        let center = self.center();
        x.iter()
            .zip(self.half_widths())
            .zip(&center)
            .enumerate()
            .map(|(i, ((&v, half), &mid))| {
                let slack = 2.0 * half * BOX_SLACK;
                if !(v >= self.lower[i] - slack && v <= self.upper[i] + slack) {
                    return Err(Error::OutOfRange {
                        label: self.labels[i].clone(),
                        value: v,
                        lower: self.lower[i],
                        upper: self.upper[i],
                    });
                }
                Ok(((v - mid) / half).clamp(-1.0, 1.0))
            })
            .collect()
    }

    /// `[-1, 1]^m` point back to physical units.
    pub fn denormalize(&self, y: &[f64]) -> Result<Vec<f64>> {
        self.check_len(y.len())?;
        let center = self.center();
        y.iter()
            .zip(self.half_widths())
            .zip(&center)
            .enumerate()
            .map(|(i, ((&v, half), &mid))| {
                if !(v.abs() <= 1.0 + BOX_SLACK) {
                    return Err(Error::OutOfRange {
                        label: self.labels[i].clone(),
                        value: v,
                        lower: -1.0,
                        upper: 1.0,
                    });
                }
                Ok((mid + v * half).clamp(self.lower[i], self.upper[i]))
            })
            .collect()
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: len,
            });
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("box serializes")
    }
}

/// Box of `center * (1 -+ fraction)`, pairs sorted so negative centers work.
pub fn make_box(center: &[f64], fraction: f64) -> Result<ParameterBox> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Domain(format!(
            "fraction {fraction} must lie in (0, 1)"
        )));
    }
    if let Some(index) = center.iter().position(|c| *c == 0.0) {
        return Err(Error::DegenerateInterval { index });
    }
    let lower = center.iter().map(|c| c * (1.0 - fraction)).collect();
    let upper = center.iter().map(|c| c * (1.0 + fraction)).collect();
    ParameterBox::new(default_labels(center.len()), lower, upper)
}

pub fn parsec_table2() -> ParameterBox {
    ParameterBox::from_pairs(&PARSEC_TABLE2_AS_PRINTED)
}

pub fn cst_table3() -> ParameterBox {
    ParameterBox::from_pairs(&CST_TABLE3_AS_PRINTED)
}

/// Resolves `parsec-table2`, `cst-table3` or `unit:M`.
pub fn builtin_box(name: &str) -> Option<ParameterBox> {
    match name {
        "parsec-table2" => Some(parsec_table2()),
        "cst-table3" => Some(cst_table3()),
        _ => {
            let m: usize = name.strip_prefix("unit:")?.parse().ok()?;
            ParameterBox::unit(m).ok()
        }
    }
}

/// `N` uniform draws on `[-1, 1]^m`, in normalized coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    pub x: DMatrix<f64>,
    pub seed: u64,
    pub parameter_box: ParameterBox,
}

impl SampleSet {
    pub fn len(&self) -> usize {
        self.x.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.x.nrows() == 0
    }

    pub fn physical_row(&self, i: usize) -> Result<Vec<f64>> {
        let row: Vec<f64> = self.x.row(i).iter().copied().collect();
        self.parameter_box.denormalize(&row)
    }
}

/// Row `i` comes from stream `i` of `seed`, so rows can be generated in parallel.
pub fn sample(parameter_box: &ParameterBox, n: usize, seed: u64) -> Result<SampleSet> {
    if n == 0 {
        return Err(contract("sample size must be at least 1"));
    }
    let m = parameter_box.dim();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i as u64);
            (0..m).map(|_| 2.0 * rng.random::<f64>() - 1.0).collect()
        })
        .collect();
    let x = DMatrix::from_fn(n, m, |i, j| rows[i][j]);
    Ok(SampleSet {
        x,
        seed,
        parameter_box: parameter_box.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_box_matches_table_rows() {
        let b = make_box(&[0.3025], 0.2).unwrap();
        assert!((b.lower[0] - 0.242).abs() < 1e-15);
        assert!((b.upper[0] - 0.363).abs() < 1e-15);
        let b = make_box(&[-0.06], 0.2).unwrap();
        assert!((b.lower[0] + 0.072).abs() < 1e-15);
        assert!((b.upper[0] + 0.048).abs() < 1e-15);
        let b = make_box(&[1.0], 0.2).unwrap();
        assert_eq!((b.lower[0], b.upper[0]), (0.8, 1.2));
    }

    #[test]
    fn make_box_rejects_zero_center_and_bad_fraction() {
        assert!(matches!(
            make_box(&[1.0, 0.0], 0.2),
            Err(Error::DegenerateInterval { index: 1 })
        ));
        assert!(matches!(make_box(&[1.0], 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn normalize_maps_center_and_corner() {
        let b = parsec_table2();
        let center = b.center();
        assert!(b
            .normalize(&center)
            .unwrap()
            .iter()
            .all(|v| v.abs() < 1e-15));
        let corner = b.normalize(&b.upper).unwrap();
        assert!(corner.iter().all(|v| (v - 1.0).abs() < 1e-15));
        let lower = b.normalize(&b.lower).unwrap();
        assert!(lower.iter().all(|v| (v + 1.0).abs() < 1e-15));
        assert!(b.normalize(&center).unwrap()[0].abs() < 1e-15);
        assert!((center[0] - 0.3025).abs() < 1e-15);
    }

    #[test]
    fn normalize_rejects_points_outside() {
        let b = cst_table3();
        let mut x = b.center();
        x[3] = 1.5;
        match b.normalize(&x) {
            Err(Error::OutOfRange { label, .. }) => assert_eq!(label, "x4"),
            other => panic!("expected range error, got {other:?}"),
        }
        assert!(matches!(
            b.normalize(&[0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn sample_is_deterministic_and_in_range() {
        let b = cst_table3();
        let s1 = sample(&b, 200, 7).unwrap();
        let s2 = sample(&b, 200, 7).unwrap();
        assert_eq!(s1.x, s2.x);
        assert!(s1.x.iter().all(|v| (-1.0..=1.0).contains(v)));
        let s3 = sample(&b, 200, 8).unwrap();
        assert_ne!(s1.x, s3.x);
        // prefix property: rows depend only on (seed, row)
        let s4 = sample(&b, 50, 7).unwrap();
        assert_eq!(s4.x, s1.x.rows(0, 50).into_owned());
    }

    #[test]
    fn sample_mean_is_near_zero() {
        let b = ParameterBox::unit(10).unwrap();
        let s = sample(&b, 1000, 7).unwrap();
        for j in 0..10 {
            let mean = s.x.column(j).mean();
            // 3 sigma of a uniform mean: 3 * sqrt(1/3) / sqrt(1000) ~ 0.055
            assert!(mean.abs() < 0.06, "coordinate {j}: mean {mean}");
        }
    }

    #[test]
    fn single_sample() {
        let s = sample(&ParameterBox::unit(4).unwrap(), 1, 0).unwrap();
        assert_eq!(s.x.shape(), (1, 4));
        assert!(sample(&ParameterBox::unit(4).unwrap(), 0, 0).is_err());
    }

    #[test]
    fn box_json_round_trip_canonicalizes() {
        let text = r#"{"labels":["a","b"],"lower":[1.0,-0.6],"upper":[2.0,-0.4]}"#;
        let b: ParameterBox = serde_json::from_str(text).unwrap();
        assert_eq!(b.lower, vec![1.0, -0.6]);
        let reversed = r#"{"lower":[2.0],"upper":[1.0]}"#;
        let b: ParameterBox = serde_json::from_str(reversed).unwrap();
        assert_eq!((b.lower[0], b.upper[0]), (1.0, 2.0));
        assert_eq!(b.labels, vec!["x1"]);
        let again: ParameterBox = serde_json::from_str(&b.to_json()).unwrap();
        assert_eq!(again, b);
    }

    #[test]
    fn builtin_names_resolve() {
        assert_eq!(builtin_box("parsec-table2").unwrap().dim(), 11);
        assert_eq!(builtin_box("cst-table3").unwrap().dim(), 10);
        assert_eq!(builtin_box("unit:3").unwrap().dim(), 3);
        assert!(builtin_box("nope").is_none());
    }
}
