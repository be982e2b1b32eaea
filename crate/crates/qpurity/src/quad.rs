//! Gauss-Hermite quadrature and an adaptive trapezoid fallback.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};

/// Nodes and weights for integrals of the form
/// integral f(x) e^(-x^2) dx over the real line.
#[derive(Debug, Clone)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Computes the n-point rule Golub-Welsch style: the nodes are the
    /// eigenvalues of the symmetric tridiagonal Jacobi matrix (diagonal
    /// zero, off-diagonal sqrt(j/2)), found by implicit-shift QL, then
    /// polished by one Newton step on the orthonormal recurrence, which
    /// also yields the weights w = 2 / p_{n-1}'^2.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut diag = vec![0.0; n];
        let mut off: Vec<f64> = (1..n).map(|j| (j as f64 / 2.0).sqrt()).collect();
        tridiagonal_eigenvalues(&mut diag, &mut off);
        diag.sort_by(|a, b| a.partial_cmp(b).unwrap());

        let pim4 = std::f64::consts::PI.powf(-0.25);
        let nf = n as f64;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // Evaluate the orthonormal recurrence at each eigenvalue. Values
        // grow like e^(x^2/2); where that overflows the true weight is
        // below the subnormal range and is stored as zero.
        let eval = |z: f64| -> (f64, f64) {
            let mut p1 = pim4;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let jf = j as f64;
                p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
            }
            (p1, (2.0 * nf).sqrt() * p2)
        };
        for (i, &ev) in diag.iter().enumerate() {
            let mut z = ev;
            let (p1, pp) = eval(z);
            let mut pp = pp;
            if p1.is_finite() && pp.is_finite() && pp != 0.0 {
                z -= p1 / pp;
                let (_, polished) = eval(z);
                if polished.is_finite() && polished != 0.0 {
                    pp = polished;
                }
            }
            nodes[i] = z;
            weights[i] = if pp.is_finite() && pp != 0.0 {
                2.0 / (pp * pp)
            } else {
                0.0
            };
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// integral f(x) e^(-x^2) dx.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    /// integral f(w) N(w; mu, sigma^2) dw via w = mu + sigma sqrt(2) x.
    pub fn integrate_gaussian<F: Fn(f64) -> f64>(&self, f: F, mu: f64, sigma: f64) -> f64 {
        let scale = std::f64::consts::SQRT_2 * sigma;
        let inv_sqrt_pi = 1.0 / std::f64::consts::PI.sqrt();
        self.integrate(|x| f(mu + scale * x)) * inv_sqrt_pi
    }
}

/// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift
/// QL algorithm (diagonal `d`, off-diagonal `e` of length n-1). On
/// return `d` holds the eigenvalues, unsorted.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    if n < 2 {
        return;
    }
    let mut work = vec![0.0; n];
    work[..n - 1].copy_from_slice(e);
    let e = &mut work;

    for l in 0..n {
        let mut iter = 0;
        loop {
            // Look for a negligible off-diagonal element.
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "tridiagonal QL failed to converge");
            // Implicit shift from the 2x2 block at l.
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0, 1.0);
            let mut p = 0.0;
            let mut completed = true;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // Recover from a vanishing rotation and retry.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    completed = false;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if !completed {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Shared rule cache: the WR cost evaluator escalates through a ladder
/// of node counts and grids of cells reuse the same tables.
pub fn hermite_rule(n: usize) -> Arc<GaussHermite> {
    static CACHE: OnceLock<RwLock<HashMap<usize, Arc<GaussHermite>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(rule) = cache.read().unwrap().get(&n) {
        return Arc::clone(rule);
    }
    let rule = Arc::new(GaussHermite::new(n));
    cache
        .write()
        .unwrap()
        .entry(n)
        .or_insert_with(|| Arc::clone(&rule))
        .clone()
}

/// Trapezoid integration on [a, b] with interval doubling until two
/// successive refinements agree within `tol` (absolute). Spectrally
/// accurate for smooth integrands that decay at the endpoints.
pub fn adaptive_trapezoid<F>(f: F, a: f64, b: f64, tol: f64, context: &str) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    const MAX_LEVELS: usize = 22;
    let mut n = 64usize;
    let h = (b - a) / n as f64;
    let mut total = 0.5 * (f(a) + f(b));
    for i in 1..n {
        total += f(a + i as f64 * h);
    }
    let mut estimate = total * h;
    let mut delta = f64::INFINITY;
    for _ in 0..MAX_LEVELS {
        // Refine by adding the midpoints of the current intervals.
        let h = (b - a) / n as f64;
        let mut new = 0.0;
        for i in 0..n {
            new += f(a + (i as f64 + 0.5) * h);
        }
        let next = 0.5 * estimate + 0.5 * h * new;
        delta = (next - estimate).abs();
        estimate = next;
        n *= 2;
        if delta <= tol {
            return Ok(estimate);
        }
    }
    Err(Error::QuadratureNonconvergence {
        context: context.to_string(),
        estimate,
        delta,
    })
}
