//! Local-optimality and convexity conditions for the null-measurement
//! protocol, scanned over the (alpha, L) plane.
//!
//! The differential operator deciding local optimality is
//!
//!   D[F] = 4 L (1-2L) (F' + 2 L F'')
//!
//! whose sign at each (alpha, L) selects which protocol minimizes the
//! expected one-step cost increment: D >= 0 favors u = 0, D <= 0 favors
//! u = 1. The companion convexity condition reads
//!
//!   L F''^2 / F' - L F''' - F'' >= 0.
//!
//! Because 4L(1-2L) vanishes identically at L = 1/2 while the interval
//! boundaries are set by the behavior there, sign decisions use the
//! bracket F' + 2 L F''.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qubit::{renyi_derivatives, EntropyDerivatives, Impurity, RenyiOrder};
use crate::roots::bisect;

/// Condition margins at a single (alpha, L) cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionMargin {
    /// B = F' + 2 L F''.
    pub local_opt_bracket: f64,
    /// D[F] = 4 L (1-2L) B.
    pub local_opt_full: f64,
    /// L F''^2 / F' - L F''' - F''.
    pub convexity_margin: f64,
}

impl ConditionMargin {
    /// Closed inequality: exact zeros count as satisfied.
    pub fn local_opt_ok(&self) -> bool {
        self.local_opt_bracket >= 0.0
    }

    pub fn convex_ok(&self) -> bool {
        self.convexity_margin >= 0.0
    }
}

/// Margins assembled from a derivative triple. Exposed so test fixtures
/// (the identity cost F(L) = L) can reuse the same arithmetic.
pub fn margins_from_derivatives(d: &EntropyDerivatives, l: f64) -> ConditionMargin {
    let bracket = d.s1 + 2.0 * l * d.s2;
    ConditionMargin {
        local_opt_bracket: bracket,
        local_opt_full: 4.0 * l * (1.0 - 2.0 * l) * bracket,
        convexity_margin: l * d.s2 * d.s2 / d.s1 - l * d.s3 - d.s2,
    }
}

/// Condition margins for the Renyi cost of the given order.
pub fn condition_margins(order: RenyiOrder, l: Impurity) -> Result<ConditionMargin> {
    let d = renyi_derivatives(order, l)?;
    Ok(margins_from_derivatives(&d, l.value()))
}

/// Boolean/margin fields over an (alpha, L) lattice. Cells where the
/// derivatives cannot be evaluated (alpha <= 0 rows, or L = 0 with
/// alpha < 1) are explicitly marked singular, never silently skipped.
#[derive(Debug, Clone)]
pub struct ConditionGrid {
    pub alpha_axis: Vec<f64>,
    pub l_axis: Vec<f64>,
    /// Row-major over alpha, then L; `None` marks a singular cell.
    pub cells: Vec<Option<ConditionMargin>>,
}

/// Per-alpha reduction of a scan: whether each condition holds for all
/// L in the grid row. Rows containing singular cells report false.
#[derive(Debug, Clone, Copy)]
pub struct AlphaSummary {
    pub alpha: f64,
    pub local_opt_all_l: bool,
    pub convex_all_l: bool,
    pub both_all_l: bool,
    pub singular_cells: usize,
}

impl ConditionGrid {
    pub fn cell(&self, alpha_idx: usize, l_idx: usize) -> &Option<ConditionMargin> {
        &self.cells[alpha_idx * self.l_axis.len() + l_idx]
    }

    pub fn summaries(&self) -> Vec<AlphaSummary> {
        let nl = self.l_axis.len();
        self.alpha_axis
            .iter()
            .enumerate()
            .map(|(i, &alpha)| {
                let row = &self.cells[i * nl..(i + 1) * nl];
                let singular = row.iter().filter(|c| c.is_none()).count();
                let local = singular == 0 && row.iter().all(|c| c.unwrap().local_opt_ok());
                let convex = singular == 0 && row.iter().all(|c| c.unwrap().convex_ok());
                AlphaSummary {
                    alpha,
                    local_opt_all_l: local,
                    convex_all_l: convex,
                    both_all_l: local && convex,
                    singular_cells: singular,
                }
            })
            .collect()
    }
}

/// Scans the (alpha, L) lattice. The L axis must stay at or above the
/// 1e-4 floor: below it the alpha < 1 derivatives blow up and the
/// interval boundaries are set by L = 1/2 anyway.
pub fn scan_regions(alpha_axis: &[f64], l_axis: &[f64]) -> Result<ConditionGrid> {
    if alpha_axis.is_empty() || l_axis.is_empty() {
        return Err(Error::Config("scan axes must be non-empty".into()));
    }
    for axis in [alpha_axis, l_axis] {
        if axis.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config("scan axes must be strictly increasing".into()));
        }
    }
    if l_axis[0] < 1e-4 {
        return Err(Error::Config(format!(
            "L axis lower bound {} below the 1e-4 floor",
            l_axis[0]
        )));
    }
    if *l_axis.last().unwrap() > 0.5 {
        return Err(Error::Config("L axis exceeds 1/2".into()));
    }

    let nl = l_axis.len();
    let cells: Vec<Option<ConditionMargin>> = (0..alpha_axis.len() * nl)
        .into_par_iter()
        .map(|idx| {
            let alpha = alpha_axis[idx / nl];
            let l = l_axis[idx % nl];
            let order = RenyiOrder::new(alpha).ok()?;
            let imp = Impurity::new(l).ok()?;
            condition_margins(order, imp).ok()
        })
        .collect();

    Ok(ConditionGrid {
        alpha_axis: alpha_axis.to_vec(),
        l_axis: l_axis.to_vec(),
        cells,
    })
}

/// The critical orders bounding the all-L validity interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalAlphas {
    /// Root of the local-optimality bracket at L = 1/2 (~0.823).
    pub alpha_lo: f64,
    /// Root of the convexity margin at L = 1/2 (~1.103).
    pub alpha_hi: f64,
}

/// Locates both critical orders by bisection at L = 1/2 to 1e-6.
pub fn critical_alphas() -> Result<CriticalAlphas> {
    let half = Impurity::MAXIMALLY_MIXED;
    let margin_at = |alpha: f64| -> ConditionMargin {
        condition_margins(RenyiOrder::new(alpha).unwrap(), half)
            .expect("derivatives are regular at L = 1/2 for finite alpha")
    };
    let alpha_lo = bisect(|a| margin_at(a).local_opt_bracket, 0.5, 1.0, 1e-6)?;
    let alpha_hi = bisect(|a| margin_at(a).convexity_margin, 1.0, 1.5, 1e-6)?;
    Ok(CriticalAlphas { alpha_lo, alpha_hi })
}

/// True iff the min-entropy local-optimality bracket is nonnegative on
/// every grid point. At L = 1/2 the bracket diverges to +infinity,
/// which counts as satisfied (the sign of the limit is positive).
pub fn min_entropy_local_opt_check(l_grid: &[f64]) -> Result<bool> {
    let order = RenyiOrder::min_entropy();
    for &l in l_grid {
        let imp = Impurity::new(l)?;
        let d = renyi_derivatives(order, imp)?;
        let bracket = d.s1 + 2.0 * l * d.s2;
        if !(bracket >= 0.0) {
            return Ok(false);
        }
    }
    Ok(true)
}
