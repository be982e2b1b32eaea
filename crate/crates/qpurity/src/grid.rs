//! Uniform axis construction from `start:stop:step` ranges.

use crate::error::{Error, Result};

/// An inclusive numeric range with a step, as written on the command
/// line (`start:stop:step`). The stop value is included when it lies
/// within half a step of the last grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRange {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !start.is_finite() || !stop.is_finite() || !step.is_finite() {
            return Err(Error::Config(format!(
                "range bounds must be finite: {start}:{stop}:{step}"
            )));
        }
        if step <= 0.0 || stop < start {
            return Err(Error::Config(format!(
                "range must have stop >= start and step > 0: {start}:{stop}:{step}"
            )));
        }
        Ok(Self { start, stop, step })
    }

    /// Expands to the sorted axis values. The final point snaps to
    /// `stop` exactly when the rounding error is below half a step.
    pub fn to_axis(self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 0.5).floor() as usize;
        let mut axis: Vec<f64> = (0..=n).map(|k| self.start + k as f64 * self.step).collect();
        if let Some(last) = axis.last_mut() {
            if (*last - self.stop).abs() <= 0.5 * self.step {
                *last = self.stop;
            }
        }
        // Guards against the snap exceeding stop or duplicating a point.
        axis.retain(|&v| v <= self.stop);
        axis.dedup();
        axis
    }
}

/// Parses `start:stop:step`.
pub fn parse_range(text: &str) -> Result<GridRange> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::Config(format!(
            "expected start:stop:step, got `{text}`"
        )));
    }
    let nums: Result<Vec<f64>> = parts
        .iter()
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad number `{p}` in range `{text}`: {e}")))
        })
        .collect();
    let nums = nums?;
    GridRange::new(nums[0], nums[1], nums[2])
}

/// Checks an axis is strictly increasing and uniformly spaced; returns
/// the spacing.
pub fn uniform_spacing(axis: &[f64]) -> Result<f64> {
    if axis.len() < 2 {
        return Err(Error::Config("axis needs at least 2 points".into()));
    }
    let h = axis[1] - axis[0];
    if h <= 0.0 {
        return Err(Error::NonUniformAxis {
            index: 1,
            found: h,
            expected: h,
        });
    }
    for i in 2..axis.len() {
        let hi = axis[i] - axis[i - 1];
        if (hi - h).abs() > 1e-9 * h.max(1.0) {
            return Err(Error::NonUniformAxis {
                index: i,
                found: hi,
                expected: h,
            });
        }
    }
    Ok(h)
}

/// `n` uniformly spaced points on [a, b] inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + i as f64 * h })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axis_includes_snapped_stop() {
        // 1e-4 : 0.5 : 1e-3 overshoots by half a step; stop must be kept.
        let axis = parse_range("1e-4:0.5:1e-3").unwrap().to_axis();
        assert_eq!(axis.first().copied(), Some(1e-4));
        assert_eq!(axis.last().copied(), Some(0.5));
        assert_eq!(axis.len(), 501);
    }

    #[test]
    fn axis_exact_division() {
        let axis = parse_range("0:50:0.01").unwrap().to_axis();
        assert_eq!(axis.len(), 5001);
        assert_eq!(axis[0], 0.0);
        assert_eq!(*axis.last().unwrap(), 50.0);
    }

    #[test]
    fn rejects_malformed() {
        assert!(parse_range("1:2").is_err());
        assert!(parse_range("2:1:0.1").is_err());
        assert!(parse_range("0:1:0").is_err());
        assert!(parse_range("a:1:0.1").is_err());
    }

    #[test]
    fn uniformity_check() {
        assert!(uniform_spacing(&[0.0, 0.1, 0.2, 0.3]).is_ok());
        assert!(uniform_spacing(&[0.0, 0.1, 0.25]).is_err());
        let axis = linspace(0.01, 0.49, 101);
        let h = uniform_spacing(&axis).unwrap();
        assert!((h - 0.0048).abs() < 1e-12);
    }
}
