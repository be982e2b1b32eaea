//! Semi-analytic expected cost of the null-control (u = 1) protocol.
//!
//! With the state kept diagonal in the measurement basis, linear
//! trajectory theory gives the distribution of the record functional w
//! after elapsed time tau in closed form,
//!
//!   p(w, L0, tau) = (cosh 2w + c sinh 2w) e^(-w^2/(2 tau)) / sqrt(2 pi tau) e^(-2 tau)
//!
//! with c = sqrt(1 - 2 L0), and the conditioned Bloch z-component
//!
//!   z(w, L0) = (c cosh 2w + sinh 2w) / (cosh 2w + c sinh 2w).
//!
//! The expected entropy is the integral of S_alpha over this weight.
//! Algebraically p is the two-component Gaussian mixture
//!
//!   p = (1+c)/2 N(w; 2 tau, tau) + (1-c)/2 N(w; -2 tau, tau),
//!
//! which is the quadrature backbone: Gauss-Hermite per component with
//! node escalation, validated by an adaptive trapezoid on the direct
//! form.

use crate::error::{Error, Result};
use crate::qubit::{entropy_from_eigenvalues, Impurity, RenyiOrder};
use crate::quad::{adaptive_trapezoid, hermite_rule};

/// Absolute accuracy target for `wr_expected_entropy`.
pub const QUAD_TOL: f64 = 1e-8;

/// Node-count ladder for the Gauss-Hermite evaluation. 200 nodes meet
/// the tolerance for small tau; the tail of the ladder covers tau up
/// to a few where the integrand's analyticity strip narrows.
const NODE_LADDER: [usize; 3] = [200, 400, 800];

fn bloch_coefficient(l0: Impurity) -> f64 {
    (1.0 - 2.0 * l0.value()).max(0.0).sqrt()
}

/// z(w, L0) = (c cosh 2w + sinh 2w)/(cosh 2w + c sinh 2w), evaluated as
/// tanh(2w + atanh c) which is the same rational function of e^(2w) but
/// immune to cosh/sinh overflow. |z| <= 1 for all w.
pub fn z_of_w(w: f64, l0: Impurity) -> f64 {
    let c = bloch_coefficient(l0);
    (2.0 * w + c.atanh()).tanh()
}

/// The record distribution p(w, L0, tau); nonnegative for all w.
pub fn wr_weight(w: f64, l0: Impurity, tau: f64) -> f64 {
    let c = bloch_coefficient(l0);
    let two_w = 2.0 * w;
    (two_w.cosh() + c * two_w.sinh()) * (-w * w / (2.0 * tau)).exp()
        / (2.0 * std::f64::consts::PI * tau).sqrt()
        * (-2.0 * tau).exp()
}

fn normal_pdf(w: f64, mu: f64, var: f64) -> f64 {
    (-(w - mu) * (w - mu) / (2.0 * var)).exp() / (2.0 * std::f64::consts::PI * var).sqrt()
}

/// The exact two-Gaussian rearrangement of `wr_weight`.
pub fn wr_weight_mixture(w: f64, l0: Impurity, tau: f64) -> f64 {
    let c = bloch_coefficient(l0);
    0.5 * (1.0 + c) * normal_pdf(w, 2.0 * tau, tau) + 0.5 * (1.0 - c) * normal_pdf(w, -2.0 * tau, tau)
}

/// Eigenvalues conditioned on the record, through the sigmoid form
/// lambda_-= 1/(1 + e^(2y)) with y = 2w + atanh c; exact at both tails.
fn eigenvalues_of_record(y: f64) -> (f64, f64) {
    let y = y.abs();
    let small = 1.0 / (1.0 + (2.0 * y).exp());
    (1.0 - small, small)
}

/// E[S_alpha(t0 + tau) | L0] for the null-control protocol, by
/// Gauss-Hermite quadrature over the mixture components with node
/// escalation; falls back to the adaptive trapezoid when the ladder
/// does not settle. Absolute error at most `QUAD_TOL`.
pub fn wr_expected_entropy(order: RenyiOrder, l0: Impurity, tau: f64) -> Result<f64> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::Config(format!("tau must be positive, got {tau}")));
    }
    // A pure state stays pure under measurement: z(w, 0) = 1 for all w.
    if l0.value() == 0.0 {
        return Ok(0.0);
    }
    let c = bloch_coefficient(l0);
    let atc = c.atanh();
    let sigma = tau.sqrt();
    let integrand = |w: f64| {
        let (lp, lm) = eigenvalues_of_record(2.0 * w + atc);
        entropy_from_eigenvalues(order, lp, lm)
    };

    let mut prev: Option<f64> = None;
    for &n in &NODE_LADDER {
        let rule = hermite_rule(n);
        let plus = rule.integrate_gaussian(integrand, 2.0 * tau, sigma);
        let minus = if c < 1.0 {
            rule.integrate_gaussian(integrand, -2.0 * tau, sigma)
        } else {
            0.0
        };
        let value = 0.5 * (1.0 + c) * plus + 0.5 * (1.0 - c) * minus;
        if let Some(p) = prev {
            if (value - p).abs() <= 0.25 * QUAD_TOL {
                return Ok(value);
            }
        }
        prev = Some(value);
    }

    let half_width = 2.0 * tau + 12.0 * sigma;
    adaptive_trapezoid(
        |w| integrand(w) * wr_weight(w, l0, tau),
        -half_width,
        half_width,
        0.1 * QUAD_TOL,
        &format!(
            "wr expected entropy alpha={} L0={} tau={}",
            order.alpha(),
            l0.value(),
            tau
        ),
    )
}

/// integral p dw by the adaptive trapezoid on the direct form; used by
/// the normalization checks.
pub fn wr_weight_mass(l0: Impurity, tau: f64) -> Result<f64> {
    let half_width = 2.0 * tau + 12.0 * tau.sqrt();
    adaptive_trapezoid(
        |w| wr_weight(w, l0, tau),
        -half_width,
        half_width,
        1e-12,
        &format!("wr weight mass L0={} tau={}", l0.value(), tau),
    )
}
