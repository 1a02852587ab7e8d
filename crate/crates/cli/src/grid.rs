//! Sampling grids over `(x1, x2, x3, t)`.

use serde::Deserialize;

use crate::error::CliError;

pub const DEFAULT_MAX_POINTS: u64 = 100_000_000;

/// Either a fixed coordinate or `count` evenly spaced values on `[min, max]`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    Fixed(f64),
    Range { min: f64, max: f64, count: usize },
}

impl Default for Axis {
    fn default() -> Self {
        Axis::Fixed(0.0)
    }
}

impl Axis {
    fn validate(&self, name: &str) -> Result<(), CliError> {
        match *self {
            Axis::Fixed(v) if !v.is_finite() => Err(CliError::Validation(format!("grid axis {name}: value must be finite"))),
            Axis::Range { min, max, .. } if !(min.is_finite() && max.is_finite()) => {
                Err(CliError::Validation(format!("grid axis {name}: bounds must be finite")))
            }
            Axis::Range { count: 0, .. } => Err(CliError::Validation(format!("grid axis {name}: count must be >= 1"))),
            Axis::Range { min, max, .. } if min > max => {
                Err(CliError::Validation(format!("grid axis {name}: min {min} exceeds max {max}")))
            }
            _ => Ok(()),
        }
    }

    pub fn count(&self) -> usize {
        match *self {
            Axis::Fixed(_) => 1,
            Axis::Range { count, .. } => count,
        }
    }

    pub fn value(&self, k: usize) -> f64 {
        match *self {
            Axis::Fixed(v) => v,
            Axis::Range { min, count: 1, .. } => min,
            Axis::Range { min, max, count } => {
                if k + 1 == count {
                    max
                } else {
                    min + (max - min) * k as f64 / (count - 1) as f64
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    #[serde(default)]
    pub x1: Axis,
    #[serde(default)]
    pub x2: Axis,
    #[serde(default)]
    pub x3: Axis,
    #[serde(default)]
    pub t: Axis,
}

/// A validated grid; points are enumerated row-major in `x1, x2, x3, t`
/// order with `t` varying fastest.
#[derive(Debug, Clone, Copy)]
pub struct Grid {
    axes: [Axis; 4],
    dims: usize,
}

impl Grid {
    /// `with_time = false` drops the `t` axis (spatial-only quantities).
    pub fn new(spec: &GridSpec, with_time: bool, max_points: u64) -> Result<Self, CliError> {
        for (axis, name) in [(&spec.x1, "x1"), (&spec.x2, "x2"), (&spec.x3, "x3"), (&spec.t, "t")] {
            axis.validate(name)?;
        }
        let grid = Self { axes: [spec.x1, spec.x2, spec.x3, spec.t], dims: if with_time { 4 } else { 3 } };
        let total = grid.axes[..grid.dims]
            .iter()
            .try_fold(1u64, |acc, a| acc.checked_mul(a.count() as u64))
            .unwrap_or(u64::MAX);
        if total > max_points {
            return Err(CliError::Validation(format!("grid has {total} points, above the cap of {max_points}")));
        }
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.axes[..self.dims].iter().map(Axis::count).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn point(&self, mut index: usize) -> [f64; 4] {
        let mut out = [0.0; 4];
        for d in (0..4).rev() {
            let axis = &self.axes[d];
            if d >= self.dims {
                out[d] = axis.value(0);
                continue;
            }
            let n = axis.count();
            out[d] = axis.value(index % n);
            index /= n;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_with_time_fastest() {
        let spec = GridSpec {
            x1: Axis::Range { min: 0.0, max: 1.0, count: 2 },
            t: Axis::Range { min: 5.0, max: 6.0, count: 2 },
            x3: Axis::Fixed(3.0),
            ..Default::default()
        };
        let g = Grid::new(&spec, true, 100).unwrap();
        let pts: Vec<_> = (0..g.len()).map(|k| g.point(k)).collect();
        assert_eq!(
            pts,
            vec![[0.0, 0.0, 3.0, 5.0], [0.0, 0.0, 3.0, 6.0], [1.0, 0.0, 3.0, 5.0], [1.0, 0.0, 3.0, 6.0]]
        );
        let g = Grid::new(&spec, false, 100).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(g.point(1), [1.0, 0.0, 3.0, 5.0]);
    }

    #[test]
    fn cap_and_validation() {
        let big = Axis::Range { min: 0.0, max: 1.0, count: 1000 };
        let spec = GridSpec { x1: big, x2: big, x3: big, t: big };
        assert!(matches!(Grid::new(&spec, true, DEFAULT_MAX_POINTS), Err(CliError::Validation(_))));
        let bad = GridSpec { x1: Axis::Range { min: 1.0, max: 0.0, count: 3 }, ..Default::default() };
        assert!(Grid::new(&bad, true, 10).is_err());
        let zero = GridSpec { x1: Axis::Range { min: 0.0, max: 1.0, count: 0 }, ..Default::default() };
        assert!(Grid::new(&zero, true, 10).is_err());
    }

    #[test]
    fn parses_fixed_and_range_axes() {
        let spec: GridSpec = serde_json::from_str(r#"{"x1": 0.5, "x3": {"min": -1, "max": 1, "count": 5}}"#).unwrap();
        assert_eq!(spec.x1, Axis::Fixed(0.5));
        assert_eq!(spec.x3.count(), 5);
        assert_eq!(spec.x3.value(2), 0.0);
        assert_eq!(spec.t, Axis::Fixed(0.0));
    }
}
