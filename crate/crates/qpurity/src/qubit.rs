//! Qubit state parametrizations and the Renyi entropy family.
//!
//! The controlled state variable is the impurity L = (1 - r^2)/2 with
//! r the Bloch vector length, so L = 0 is pure and L = 1/2 maximally
//! mixed. Eigenvalues of the state are lambda_pm = (1 +- sqrt(1-2L))/2.
//!
//! Entropy derivatives are evaluated in the variable m = 1 - 2L. The
//! composite S_alpha(m) is smooth through m = 0 even though the chain
//! rule via r = sqrt(m) is singular there, so the closed forms in r are
//! used away from m = 0 and an even binomial series in m near it.

use crate::error::{Error, Result};

/// Half-width of the band around alpha = 1 routed to the von Neumann branch.
pub const VON_NEUMANN_BAND: f64 = 1e-8;

/// Below this m = 1 - 2L the derivative evaluation switches to the
/// binomial series (provided the series converges fast, see `use_series`).
const SERIES_SWITCH_M: f64 = 1e-3;

/// Order of the Renyi entropy. Positive and finite, or the distinguished
/// infinite value selecting the min-entropy limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenyiOrder(f64);

impl RenyiOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha.is_nan() || alpha <= 0.0 {
            return Err(Error::InvalidOrder(alpha));
        }
        Ok(Self(alpha))
    }

    /// The alpha -> infinity limit, S_inf(L) = -ln lambda_plus.
    pub const fn min_entropy() -> Self {
        Self(f64::INFINITY)
    }

    pub fn alpha(self) -> f64 {
        self.0
    }

    pub fn is_min_entropy(self) -> bool {
        self.0.is_infinite()
    }

    /// Orders within `VON_NEUMANN_BAND` of 1 evaluate on the exact
    /// von Neumann branch to avoid the 0/0 in the (1-alpha)^-1 prefactor.
    pub fn is_von_neumann(self) -> bool {
        (self.0 - 1.0).abs() < VON_NEUMANN_BAND
    }
}

/// Impurity L = 1 - Tr[rho^2] rescaled to [0, 1/2] for a qubit.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Impurity(f64);

impl Impurity {
    pub const PURE: Impurity = Impurity(0.0);
    pub const MAXIMALLY_MIXED: Impurity = Impurity(0.5);

    pub fn new(l: f64) -> Result<Self> {
        if l.is_nan() || !(0.0..=0.5).contains(&l) {
            return Err(Error::ImpurityOutOfRange(l));
        }
        Ok(Self(l))
    }

    /// Projects an out-of-range value onto [0, 1/2]. Used by the SDE
    /// steppers, which may overshoot the domain by O(dt).
    pub fn clamped(l: f64) -> Self {
        Self(l.clamp(0.0, 0.5))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Bloch state restricted to the x-z plane (y = 0 throughout).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochState {
    x: f64,
    z: f64,
}

impl BlochState {
    pub fn new(x: f64, z: f64) -> Result<Self> {
        let norm2 = x * x + z * z;
        if !norm2.is_finite() || norm2 > 1.0 + 4.0 * f64::EPSILON {
            return Err(Error::BlochOutOfRange { x, z });
        }
        Ok(Self { x, z })
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::new(r * theta.sin(), r * theta.cos())
    }

    pub fn x(self) -> f64 {
        self.x
    }

    pub fn z(self) -> f64 {
        self.z
    }

    /// Bloch vector length.
    pub fn r(self) -> f64 {
        self.x.hypot(self.z).min(1.0)
    }

    /// Angle with the z axis, in [-pi, pi].
    pub fn theta(self) -> f64 {
        self.x.atan2(self.z)
    }

    pub fn impurity(self) -> Impurity {
        let r = self.r();
        Impurity::clamped(0.5 * (1.0 - r * r))
    }
}

/// Eigenvalues (lambda_plus, lambda_minus) of the state with impurity L.
///
/// lambda_plus = (1 + sqrt(1-2L))/2; the smaller eigenvalue is computed
/// as L / (2 lambda_plus), which is exact at both endpoints and avoids
/// cancellation for small L.
pub fn eigenvalues(l: Impurity) -> (f64, f64) {
    let r = (1.0 - 2.0 * l.value()).max(0.0).sqrt();
    let lp = 0.5 * (1.0 + r);
    let lm = l.value() / (2.0 * lp);
    (lp, lm)
}

/// Renyi entropy S_alpha(L), in [0, ln 2].
pub fn renyi_entropy(order: RenyiOrder, l: Impurity) -> f64 {
    let (lp, lm) = eigenvalues(l);
    entropy_from_eigenvalues(order, lp, lm)
}

/// S_alpha evaluated directly from an eigenvalue pair (order-insensitive).
///
/// Uses the factored form S = [alpha ln l_max + ln(1 + (l_min/l_max)^alpha)]
/// / (1 - alpha), which neither overflows for large alpha nor loses accuracy
/// as the state approaches purity.
pub fn entropy_from_eigenvalues(order: RenyiOrder, a: f64, b: f64) -> f64 {
    let big = a.max(b).max(0.0);
    let small = a.min(b).max(0.0);
    debug_assert!((big + small - 1.0).abs() < 1e-9, "eigenvalues must sum to 1");
    if order.is_min_entropy() {
        return -big.ln();
    }
    let alpha = order.alpha();
    if order.is_von_neumann() {
        // 0 ln 0 := 0 at the pure state.
        let mut s = -big * big.ln();
        if small > 0.0 {
            s -= small * small.ln();
        }
        return s.max(0.0);
    }
    let rho = small / big;
    let s = (alpha * big.ln() + rho.powf(alpha).ln_1p()) / (1.0 - alpha);
    s.max(0.0)
}

/// First three derivatives of S_alpha with respect to L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyDerivatives {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

/// Analytic S', S'', S''' of the Renyi entropy with respect to L.
///
/// For alpha < 1 the derivatives diverge like L^(alpha-1) as L -> 0; a
/// query at exactly L = 0 fails loudly rather than returning clipped
/// values. At L = 1/2 the min-entropy derivatives are +infinity (the
/// limit has a cusp there); finite orders are regular at L = 1/2.
pub fn renyi_derivatives(order: RenyiOrder, l: Impurity) -> Result<EntropyDerivatives> {
    let lv = l.value();
    if order.is_min_entropy() {
        return Ok(min_entropy_derivatives(lv));
    }
    if order.is_von_neumann() {
        return Ok(von_neumann_derivatives(lv));
    }
    let alpha = order.alpha();
    if alpha < 1.0 && lv == 0.0 {
        return Err(Error::SingularDerivative { alpha });
    }
    // m = 1 - 2L is exact: 2L and the subtraction round-trip in f64
    // for L in [0, 1/2].
    let m = 1.0 - 2.0 * lv;
    let (gm, gmm, gmmm) = if use_series(alpha, m) {
        log_trace_m_derivs_series(alpha, m)
    } else {
        log_trace_m_derivs_closed(alpha, lv, m)
    };
    // S = ln Tr rho^alpha / (1 - alpha) and d/dL = -2 d/dm.
    let pre = 1.0 / (1.0 - alpha);
    Ok(EntropyDerivatives {
        s1: -2.0 * gm * pre,
        s2: 4.0 * gmm * pre,
        s3: -8.0 * gmmm * pre,
    })
}

/// The series in m converges fast only while alpha^2 m is small; large
/// orders stay on the closed form (whose cancellation error is negligible
/// against their huge derivative magnitudes).
fn use_series(alpha: f64, m: f64) -> bool {
    m < SERIES_SWITCH_M && alpha * alpha * m <= 1.0
}

/// Generalized binomial coefficients C(alpha, 2j) for j = 0..=8.
fn even_binomials(alpha: f64) -> [f64; 9] {
    let mut c = [0.0; 9];
    c[0] = 1.0;
    for j in 1..9 {
        let k = (2 * j) as f64;
        // alpha - (k-2) keeps the subtraction at the result's own scale;
        // alpha - k + 2.0 would round at scale k and then cancel.
        c[j] = c[j - 1] * (alpha - (k - 2.0)) * (alpha - (k - 1.0)) / ((k - 1.0) * k);
    }
    c
}

/// d/dm derivatives of G = ln Tr rho^alpha near m = 0, via
/// Tr rho^alpha = 2^(1-alpha) sum_j C(alpha,2j) m^j. The 2^(1-alpha)
/// factor drops out of all logarithmic derivatives.
fn log_trace_m_derivs_series(alpha: f64, m: f64) -> (f64, f64, f64) {
    let c = even_binomials(alpha);
    let (mut p0, mut p1, mut p2, mut p3) = (0.0, 0.0, 0.0, 0.0);
    for j in (0..9).rev() {
        let jf = j as f64;
        p0 = p0 * m + c[j];
        if j >= 1 {
            p1 = p1 * m + jf * c[j];
        }
        if j >= 2 {
            p2 = p2 * m + jf * (jf - 1.0) * c[j];
        }
        if j >= 3 {
            p3 = p3 * m + jf * (jf - 1.0) * (jf - 2.0) * c[j];
        }
    }
    let g1 = p1 / p0;
    let g2 = p2 / p0 - g1 * g1;
    let g3 = p3 / p0 - 3.0 * (p2 / p0) * g1 + 2.0 * g1 * g1 * g1;
    (g1, g2, g3)
}

/// d/dm derivatives of G = ln Tr rho^alpha via the closed forms in
/// r = sqrt(m), using ratios that never overflow: with rho = lm/lp,
///
///   T_r/T   = alpha/(2 lp) (1 - rho^(alpha-1)) / (1 + rho^alpha)
///   T_rr/T  = alpha(alpha-1)/(4 lp^2) (1 + rho^(alpha-2)) / (1 + rho^alpha)
///   T_rrr/T = alpha(alpha-1)(alpha-2)/(8 lp^3) (1 - rho^(alpha-3)) / (1 + rho^alpha)
///
/// A vanishing polynomial coefficient zeroes its term before rho^(alpha-k)
/// can produce inf * 0 at the pure state.
fn log_trace_m_derivs_closed(alpha: f64, l: f64, m: f64) -> (f64, f64, f64) {
    let r = m.sqrt();
    let lp = 0.5 * (1.0 + r);
    let lm = l / (2.0 * lp);
    let rho = lm / lp;
    let q = rho.powf(alpha);
    let denom = 1.0 + q;

    let u1 = alpha / (2.0 * lp) * (1.0 - rho.powf(alpha - 1.0)) / denom;
    let c2 = alpha * (alpha - 1.0);
    let u2 = if c2 == 0.0 {
        0.0
    } else {
        c2 / (4.0 * lp * lp) * (1.0 + rho.powf(alpha - 2.0)) / denom
    };
    let c3 = c2 * (alpha - 2.0);
    let u3 = if c3 == 0.0 {
        0.0
    } else {
        c3 / (8.0 * lp * lp * lp) * (1.0 - rho.powf(alpha - 3.0)) / denom
    };

    let g_r = u1;
    let g_rr = u2 - u1 * u1;
    let g_rrr = u3 - 3.0 * u1 * u2 + 2.0 * u1 * u1 * u1;

    let g1 = g_r / (2.0 * r);
    let g2 = (g_rr - g_r / r) / (4.0 * m);
    let g3 = (g_rrr - 3.0 * g_rr / r + 3.0 * g_r / m) / (8.0 * m * r);
    (g1, g2, g3)
}

/// Von Neumann derivatives: S_r = -atanh(r), converted to m-derivatives,
/// with the series branch taking over where the closed forms cancel.
fn von_neumann_derivatives(l: f64) -> EntropyDerivatives {
    let m = 1.0 - 2.0 * l;
    let (sm, smm, smmm) = if m < SERIES_SWITCH_M {
        // S_m = -(1/2) sum m^j/(2j+1), differentiated termwise.
        let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
        for j in (0..9).rev() {
            let jf = j as f64;
            let c = -0.5 / (2.0 * jf + 1.0);
            s0 = s0 * m + c;
            if j >= 1 {
                s1 = s1 * m + jf * c;
            }
            if j >= 2 {
                s2 = s2 * m + jf * (jf - 1.0) * c;
            }
        }
        (s0, s1, s2)
    } else {
        let r = m.sqrt();
        let at = r.atanh();
        let sm = -at / (2.0 * r);
        let n = at - r / (1.0 - m);
        let smm = n / (4.0 * r * r * r);
        let np = -2.0 * m / ((1.0 - m) * (1.0 - m));
        let smmm = (np * r - 3.0 * n) / (8.0 * r * r * r * r * r);
        (sm, smm, smmm)
    };
    EntropyDerivatives {
        s1: -2.0 * sm,
        s2: 4.0 * smm,
        s3: -8.0 * smmm,
    }
}

/// Min-entropy derivatives of S_inf = ln 2 - ln(1+r). These diverge as
/// L -> 1/2 (r -> 0): the limit entropy has a cusp at the maximally
/// mixed state, and the closed forms return +infinity there.
fn min_entropy_derivatives(l: f64) -> EntropyDerivatives {
    let m = 1.0 - 2.0 * l;
    let r = m.sqrt();
    if r == 0.0 {
        return EntropyDerivatives {
            s1: f64::INFINITY,
            s2: f64::INFINITY,
            s3: f64::INFINITY,
        };
    }
    let opr = 1.0 + r;
    let s1 = 1.0 / (r * opr);
    let s2 = (1.0 + 2.0 * r) / (r * r * r * opr * opr);
    let r3 = r * r * r;
    let s3 = 2.0 / (r3 * opr * opr * opr) + 3.0 / (r3 * r * opr * opr) + 3.0 / (r3 * r * r * opr);
    EntropyDerivatives { s1, s2, s3 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    const LN2: f64 = std::f64::consts::LN_2;

    fn ord(a: f64) -> RenyiOrder {
        RenyiOrder::new(a).unwrap()
    }

    fn imp(l: f64) -> Impurity {
        Impurity::new(l).unwrap()
    }

    #[test]
    fn order_validation() {
        assert!(RenyiOrder::new(0.0).is_err());
        assert!(RenyiOrder::new(-1.0).is_err());
        assert!(RenyiOrder::new(f64::NAN).is_err());
        assert!(RenyiOrder::new(f64::INFINITY).unwrap().is_min_entropy());
        assert!(ord(1.0).is_von_neumann());
        assert!(ord(1.0 + 0.9e-8).is_von_neumann());
        assert!(!ord(1.0 + 2e-8).is_von_neumann());
    }

    #[test]
    fn impurity_validation() {
        assert!(Impurity::new(-1e-12).is_err());
        assert!(Impurity::new(0.5 + 1e-12).is_err());
        assert!(Impurity::new(f64::NAN).is_err());
        assert_eq!(Impurity::clamped(0.7).value(), 0.5);
        assert_eq!(Impurity::clamped(-0.1).value(), 0.0);
    }

    #[test]
    fn eigenvalue_identities() {
        // L=0 -> (1, 0); L=1/2 -> (1/2, 1/2); L=0.375 -> (3/4, 1/4)
        assert_eq!(eigenvalues(Impurity::PURE), (1.0, 0.0));
        let (lp, lm) = eigenvalues(Impurity::MAXIMALLY_MIXED);
        assert_eq!((lp, lm), (0.5, 0.5));
        let (lp, lm) = eigenvalues(imp(0.375));
        assert_abs_diff_eq!(lp, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(lm, 0.25, epsilon = 1e-15);
        for &l in &[0.0, 1e-8, 0.1, 0.25, 0.4999, 0.5] {
            let (lp, lm) = eigenvalues(imp(l));
            assert_abs_diff_eq!(lp + lm, 1.0, epsilon = 1e-15);
            assert_abs_diff_eq!(2.0 * lp * lm, l, epsilon = 1e-15);
            assert!(lp >= lm && lm >= 0.0);
        }
    }

    #[test]
    fn bloch_round_trip() {
        let s = BlochState::from_polar(0.6, 0.3).unwrap();
        assert_abs_diff_eq!(s.r(), 0.6, epsilon = 1e-14);
        assert_abs_diff_eq!(s.theta(), 0.3, epsilon = 1e-14);
        assert_abs_diff_eq!(s.impurity().value(), 0.5 * (1.0 - 0.36), epsilon = 1e-14);
        assert!(BlochState::new(0.8, 0.7).is_err());
    }

    #[test]
    fn entropy_spot_values() {
        // pure state, any order
        assert_eq!(renyi_entropy(ord(2.0), Impurity::PURE), 0.0);
        // maximally mixed: ln 2 for every order
        for &a in &[0.3, 1.0, 2.0, 10.0, 1e6] {
            assert_abs_diff_eq!(
                renyi_entropy(ord(a), Impurity::MAXIMALLY_MIXED),
                LN2,
                epsilon = 1e-12
            );
        }
        assert_abs_diff_eq!(
            renyi_entropy(RenyiOrder::min_entropy(), Impurity::MAXIMALLY_MIXED),
            LN2,
            epsilon = 1e-15
        );
        // collision entropy is -ln(purity): S_2(0.25) = -ln(0.75)
        assert_relative_eq!(
            renyi_entropy(ord(2.0), imp(0.25)),
            -(0.75f64).ln(),
            epsilon = 1e-14
        );
    }

    #[test]
    fn entropy_monotone_in_impurity() {
        for &a in &[0.3, 0.823, 1.0, 1.103, 2.0, 10.0, f64::INFINITY] {
            let order = RenyiOrder::new(a).unwrap();
            let mut prev = -1.0;
            for i in 0..=200 {
                let l = 0.5 * i as f64 / 200.0;
                let s = renyi_entropy(order, imp(l));
                assert!(
                    s > prev,
                    "S_{} not increasing at L={}: {} <= {}",
                    a,
                    l,
                    s,
                    prev
                );
                assert!((0.0..=LN2 + 1e-12).contains(&s));
                prev = s;
            }
        }
    }

    #[test]
    fn entropy_continuous_at_von_neumann() {
        let eps = 1e-4;
        for i in 0..=50 {
            let l = 0.01 + 0.49 * i as f64 / 50.0;
            let svn = renyi_entropy(ord(1.0), imp(l));
            let lo = renyi_entropy(ord(1.0 - eps), imp(l));
            let hi = renyi_entropy(ord(1.0 + eps), imp(l));
            assert!((lo - svn).abs() < 1e-3, "L={l}: {lo} vs {svn}");
            assert!((hi - svn).abs() < 1e-3, "L={l}: {hi} vs {svn}");
        }
    }

    #[test]
    fn entropy_large_order_approaches_min_entropy() {
        let big = ord(1e6);
        let inf = RenyiOrder::min_entropy();
        for i in 0..=100 {
            let l = 0.5 * i as f64 / 100.0;
            let d = (renyi_entropy(big, imp(l)) - renyi_entropy(inf, imp(l))).abs();
            assert!(d < 1e-4, "L={l}: diff {d}");
        }
    }

    #[test]
    fn derivatives_alpha2_closed_form() {
        // S_2 = -ln(1-L): S' = 1/(1-L), S'' = 1/(1-L)^2, S''' = 2/(1-L)^3
        for &l in &[0.0, 0.25, 0.375, 0.4999, 0.5] {
            let d = renyi_derivatives(ord(2.0), imp(l)).unwrap();
            let om = 1.0 - l;
            assert_relative_eq!(d.s1, 1.0 / om, max_relative = 1e-12);
            assert_relative_eq!(d.s2, 1.0 / (om * om), max_relative = 1e-12);
            assert_relative_eq!(d.s3, 2.0 / (om * om * om), max_relative = 1e-12);
        }
    }

    /// Frozen high-precision oracle triples (40-digit arithmetic).
    #[test]
    fn derivatives_match_frozen_oracle() {
        let cases: &[(f64, f64, [f64; 3])] = &[
            (
                0.3,
                0.2,
                [
                    0.6564711601522201759,
                    -2.755198529157191660,
                    24.80202966513742256,
                ],
            ),
            (
                0.3,
                0.45,
                [
                    0.3287375849508057954,
                    -0.6329749402469195074,
                    2.570828564595843297,
                ],
            ),
            (
                10.0,
                0.1,
                [
                    0.6557443819402714279,
                    1.206681102065824954,
                    4.981846373342469533,
                ],
            ),
            (
                1.103,
                0.3,
                [
                    1.237611216242810798,
                    -0.9191289116582303315,
                    3.546320832303758709,
                ],
            ),
            (
                0.823,
                0.49,
                [
                    0.8313402877249721971,
                    -0.8454114246960333437,
                    2.311777926700879521,
                ],
            ),
        ];
        for &(a, l, want) in cases {
            let d = renyi_derivatives(ord(a), imp(l)).unwrap();
            assert_relative_eq!(d.s1, want[0], max_relative = 1e-11);
            assert_relative_eq!(d.s2, want[1], max_relative = 1e-11);
            assert_relative_eq!(d.s3, want[2], max_relative = 1e-11);
        }
        // von Neumann at L = 0.3
        let d = renyi_derivatives(ord(1.0), imp(0.3)).unwrap();
        assert_relative_eq!(d.s1, 1.178736079831948140, max_relative = 1e-11);
        assert_relative_eq!(d.s2, -1.219826467086796317, max_relative = 1e-11);
        assert_relative_eq!(d.s3, 4.740190385737916510, max_relative = 1e-11);
    }

    #[test]
    fn derivatives_regular_at_maximally_mixed() {
        // S'(1/2) = alpha exactly; von Neumann limit S''(1/2) = -2/3, S'''(1/2) = 8/5.
        for &a in &[0.3, 0.9, 1.0 - 2e-8, 1.0, 2.0, 7.5, 50.0] {
            let d = renyi_derivatives(ord(a), Impurity::MAXIMALLY_MIXED).unwrap();
            assert_relative_eq!(d.s1, a, max_relative = 1e-12);
            assert!(d.s2.is_finite() && d.s3.is_finite());
        }
        let d = renyi_derivatives(ord(1.0), Impurity::MAXIMALLY_MIXED).unwrap();
        assert_relative_eq!(d.s2, -2.0 / 3.0, max_relative = 1e-12);
        assert_relative_eq!(d.s3, 8.0 / 5.0, max_relative = 1e-12);
    }

    #[test]
    fn derivative_branches_agree_near_switch() {
        // Both branches are valid at m = 1.5e-3, just above the switch.
        for &a in &[0.3, 0.99, 2.0, 10.0, 50.0] {
            let m = 1.5e-3;
            let l = 0.5 * (1.0 - m);
            let series = log_trace_m_derivs_series(a, m);
            let closed = log_trace_m_derivs_closed(a, l, m);
            assert_relative_eq!(series.0, closed.0, max_relative = 1e-9);
            assert_relative_eq!(series.1, closed.1, max_relative = 1e-8);
            assert_relative_eq!(series.2, closed.2, max_relative = 1e-6);
        }
    }

    #[test]
    fn derivative_singularity_below_one() {
        let err = renyi_derivatives(ord(0.3), Impurity::PURE).unwrap_err();
        assert!(matches!(err, Error::SingularDerivative { .. }));
        // alpha = 2 at L = 0 is regular: S' = 1, S'' = 1, S''' = 2.
        let d = renyi_derivatives(ord(2.0), Impurity::PURE).unwrap();
        assert_relative_eq!(d.s1, 1.0, max_relative = 1e-13);
        assert_relative_eq!(d.s2, 1.0, max_relative = 1e-13);
        assert_relative_eq!(d.s3, 2.0, max_relative = 1e-13);
    }

    #[test]
    fn min_entropy_derivative_cusp() {
        let d = renyi_derivatives(RenyiOrder::min_entropy(), Impurity::MAXIMALLY_MIXED).unwrap();
        assert!(d.s1.is_infinite() && d.s2.is_infinite() && d.s3.is_infinite());
        // At L = 0.25 (r^2 = 1/2): S' + 2L S'' = 2 exactly.
        let d = renyi_derivatives(RenyiOrder::min_entropy(), imp(0.25)).unwrap();
        assert_relative_eq!(d.s1 + 0.5 * d.s2, 2.0, max_relative = 1e-12);
    }

    /// Finite-difference chain: S' against values of S, S'' against S',
    /// S''' against S''. Each step is an independent check of one
    /// differentiation at h = 1e-5.
    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for &a in &[0.3, 0.823, 1.0, 1.103, 2.0, 10.0] {
            let order = ord(a);
            for i in 0..=40 {
                let l = 0.01 + (0.4999 - 0.01) * i as f64 / 40.0;
                let d = renyi_derivatives(order, imp(l)).unwrap();
                let s = |x: f64| renyi_entropy(order, imp(x));
                let d1 = |x: f64| renyi_derivatives(order, imp(x)).unwrap().s1;
                let d2 = |x: f64| renyi_derivatives(order, imp(x)).unwrap().s2;
                let fd1 = (s(l + h) - s(l - h)) / (2.0 * h);
                let fd2 = (d1(l + h) - d1(l - h)) / (2.0 * h);
                let fd3 = (d2(l + h) - d2(l - h)) / (2.0 * h);
                assert_relative_eq!(d.s1, fd1, max_relative = 1e-5);
                assert_relative_eq!(d.s2, fd2, max_relative = 1e-5);
                assert_relative_eq!(d.s3, fd3, max_relative = 1e-5);
            }
        }
    }
}
