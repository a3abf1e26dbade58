use serde::Serialize;

use super::{ActionError, ActionWindow, PointSet};
use crate::group_model::{Rational, Shape};

/// Extremal window counts for one shape.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowCounts {
    pub size: usize,
    pub min: usize,
    pub max: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub windows: Vec<WindowCounts>,
    pub lower: Rational,
    pub upper: Rational,
}

impl ActionWindow {
    /// `min_x |A ∩ F x|` and `max_x |A ∩ F x|`.
    pub fn extremal_counts(&self, a: &PointSet, f: &Shape) -> WindowCounts {
        let counts = self.window_counts(a, f);
        WindowCounts {
            size: f.len(),
            min: counts.iter().copied().min().unwrap_or(0) as usize,
            max: counts.iter().copied().max().unwrap_or(0) as usize,
        }
    }
}

/// Lower and upper Banach densities of `A` along the given windows:
/// `lower = max_F min_x |A ∩ Fx| / |F|`, `upper = min_F max_x |A ∩ Fx| / |F|`.
pub fn banach_density(
    window: &ActionWindow,
    a: &PointSet,
    windows: &[Shape],
) -> Result<DensityReport, ActionError> {
    if windows.is_empty() {
        return Err(ActionError::NoWindows);
    }
    let mut report = DensityReport {
        windows: Vec::with_capacity(windows.len()),
        lower: Rational::zero(),
        upper: Rational::one(),
    };
    for (i, f) in windows.iter().enumerate() {
        if f.is_empty() {
            return Err(ActionError::EmptyWindow(i));
        }
        window.check_shape("window", f)?;
        let wc = window.extremal_counts(a, f);
        let lo = Rational::ratio(wc.min, wc.size);
        let hi = Rational::ratio(wc.max, wc.size);
        if lo > report.lower {
            report.lower = lo;
        }
        if hi < report.upper {
            report.upper = hi;
        }
        report.windows.push(wc);
    }
    Ok(report)
}

pub fn lower_banach_density(
    window: &ActionWindow,
    a: &PointSet,
    windows: &[Shape],
) -> Result<DensityReport, ActionError> {
    banach_density(window, a, windows)
}
