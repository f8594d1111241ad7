//! One-dimensional quadrature building blocks: Gauss-Legendre rules on
//! intervals and trigonometric Gaussian rules on subperiodic angular arcs.

use crate::error::{Error, Result};
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Domain of a one-dimensional rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Domain1D {
    /// Interval `[a, b]` with Lebesgue measure.
    Interval(f64, f64),
    /// Symmetric angular arc `[-omega, omega]` with arc-length measure.
    Arc(f64),
}

/// Nodes and positive weights of a one-dimensional quadrature rule.
#[derive(Clone, Debug)]
pub struct Rule1D {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: Domain1D,
}

impl Rule1D {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> Domain1D {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Gaussian nodes and weights from a symmetric tridiagonal Jacobi matrix
/// (diagonal `alpha`, off-diagonal `sqrt(beta_k)`), with `beta0` the measure
/// of the domain. Nodes are returned sorted.
///
/// Implicit-shift QL iteration accumulating only the first eigenvector row,
/// which is all the weights need (classic Golub-Welsch).
fn golub_welsch(alpha: &[f64], offdiag: &[f64], beta0: f64) -> (Vec<f64>, Vec<f64>) {
    let n = alpha.len();
    let mut d = alpha.to_vec();
    let mut e = offdiag.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; n];
    z[0] = 1.0;

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m < n - 1 {
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
            assert!(iter <= 60, "tridiagonal QL did not converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }

    let mut pairs: Vec<(f64, f64)> = (0..n).map(|k| (d[k], beta0 * z[k] * z[k])).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    pairs.into_iter().unzip()
}

/// `k`-point Gauss-Legendre rule on `[a, b]`: exact for polynomials of
/// degree `<= 2k - 1`.
pub fn gauss_legendre(k: usize, a: f64, b: f64) -> Result<Rule1D> {
    if k == 0 {
        return Err(Error::InvalidDegree("gauss_legendre requires k >= 1".into()));
    }
    if !(a < b) {
        return Err(Error::InvalidParameter(format!(
            "gauss_legendre interval [{a}, {b}] is empty"
        )));
    }
    let base = legendre_canonical(k);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    Ok(Rule1D {
        nodes: base.0.iter().map(|&x| mid + half * x).collect(),
        weights: base.1.iter().map(|&w| half * w).collect(),
        domain: Domain1D::Interval(a, b),
    })
}

/// Canonical `[-1, 1]` Gauss-Legendre nodes/weights, cached by point count
/// (rule assembly rebuilds the same sizes constantly).
fn legendre_canonical(k: usize) -> Arc<(Vec<f64>, Vec<f64>)> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<(Vec<f64>, Vec<f64>)>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(hit) = cache.lock().unwrap().get(&k) {
        return hit.clone();
    }
    let alpha = vec![0.0; k];
    let offdiag: Vec<f64> = (1..k)
        .map(|i| {
            let i = i as f64;
            i / (4.0 * i * i - 1.0).sqrt()
        })
        .collect();
    let (t, _) = golub_welsch(&alpha, &offdiag, 2.0);
    // Polish the eigenvalue nodes with Newton on P_k and use the analytic
    // weight formula; this brings both to full machine accuracy.
    let mut nodes = Vec::with_capacity(k);
    let mut weights = Vec::with_capacity(k);
    for &x0 in &t {
        let mut x = x0;
        let mut dp = 1.0;
        for _ in 0..3 {
            let (p, d) = legendre_with_derivative(k, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() < 1e-16 {
                let (_, d2) = legendre_with_derivative(k, x);
                dp = d2;
                break;
            }
        }
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    let entry = Arc::new((nodes, weights));
    cache.lock().unwrap().insert(k, entry.clone());
    entry
}

/// Legendre polynomial `P_k` and its derivative at `x` by the three-term
/// recurrence.
fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    if k == 0 {
        return (1.0, 0.0);
    }
    for j in 1..k {
        let jf = j as f64;
        let p_next = ((2.0 * jf + 1.0) * x * p - jf * p_prev) / (jf + 1.0);
        p_prev = p;
        p = p_next;
    }
    let d = k as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}

/// Trigonometric Gaussian rule on the arc `[-omega, omega]`, `0 < omega <= pi`:
/// `n + 1` nodes, positive weights, exact for all trigonometric polynomials of
/// degree `<= n`.
///
/// Construction: the substitution `theta = 2 asin(sin(omega/2) t)` turns the
/// arc integral into an algebraic one on `[-1, 1]` with an even weight, whose
/// recurrence coefficients are computed by the Stieltjes procedure over a
/// composite Gauss-Legendre discretization (refined until they stabilize),
/// followed by the Golub-Welsch eigenvalue method.
pub fn trig_gauss(n: usize, omega: f64) -> Result<Rule1D> {
    if !(omega > 0.0 && omega <= std::f64::consts::PI) {
        return Err(Error::InvalidParameter(format!(
            "trig_gauss arc half-length {omega} outside (0, pi]"
        )));
    }
    let s = (0.5 * omega).sin();
    let betas = stieltjes_betas(n, omega, s)?;

    let alpha = vec![0.0; n + 1]; // even weight: zero recurrence diagonal
    let offdiag: Vec<f64> = betas[1..].iter().map(|&b| b.sqrt()).collect();
    let (mut t, mut lam) = golub_welsch(&alpha, &offdiag, betas[0]);

    // The exact rule is symmetric about 0; averaging mirrored pairs removes
    // the asymmetric part of the eigensolver's rounding.
    let m = t.len();
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let node = 0.5 * (t[j] - t[i]);
        t[i] = -node;
        t[j] = node;
        let w = 0.5 * (lam[i] + lam[j]);
        lam[i] = w;
        lam[j] = w;
    }
    if m % 2 == 1 {
        t[m / 2] = 0.0;
    }

    let wmax = lam.iter().cloned().fold(0.0, f64::max);
    if lam.iter().any(|&w| w <= 1e-16 * wmax) {
        return Err(Error::QuadratureConstruction(format!(
            "trig_gauss(n={n}, omega={omega}): nonpositive weight from eigen solve"
        )));
    }
    let nodes: Vec<f64> = t
        .iter()
        .map(|&x| 2.0 * (s * x.clamp(-1.0, 1.0)).asin())
        .collect();
    Ok(Rule1D {
        nodes,
        weights: lam,
        domain: Domain1D::Arc(omega),
    })
}

/// Recurrence coefficients `beta_0 .. beta_n` for the weight
/// `w(t) = 2 sin(omega/2) / sqrt(1 - sin^2(omega/2) t^2)` on `[-1, 1]`.
///
/// With `t = sin(phi)/sin(omega/2)` the measure becomes plain `2 dphi` on
/// `[-omega/2, omega/2]`, so moments of polynomials are integrals of entire
/// functions and composite Gauss-Legendre converges fast.
fn stieltjes_betas(n: usize, omega: f64, s: f64) -> Result<Vec<f64>> {
    let pts_per_panel = (n + 24).min(200);
    let base = gauss_legendre(pts_per_panel, -1.0, 1.0)?;
    let mut panels = 2usize;
    let mut prev: Option<Vec<f64>> = None;
    loop {
        let mut xs = Vec::with_capacity(panels * pts_per_panel);
        let mut us = Vec::with_capacity(panels * pts_per_panel);
        let half_arc = 0.5 * omega;
        let width = 2.0 * half_arc / panels as f64;
        for p in 0..panels {
            let a = -half_arc + p as f64 * width;
            for (&x, &w) in base.nodes().iter().zip(base.weights()) {
                let phi = a + 0.5 * width * (x + 1.0);
                xs.push(phi.sin() / s);
                us.push(2.0 * 0.5 * width * w);
            }
        }
        let betas = stieltjes_from_discretization(n, &xs, &us);
        if let Some(ref p) = prev {
            // Floating-point summation noise in the norms caps the agreement
            // between two discretizations at a few ulps times the recursion
            // depth; 3e-14 relative is the practical stabilization floor.
            let stable = p
                .iter()
                .zip(&betas)
                .all(|(&a, &b)| (a - b).abs() <= 3e-14 * b.abs().max(1e-300));
            if stable {
                return Ok(betas);
            }
        }
        prev = Some(betas);
        panels *= 2;
        if panels > 256 {
            return Err(Error::QuadratureConstruction(format!(
                "trig_gauss(n={n}, omega={omega}): recurrence coefficients did not stabilize"
            )));
        }
    }
}

fn kahan_sum(it: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for v in it {
        let y = v - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Monic-polynomial Stieltjes procedure for a symmetric discrete measure;
/// returns `beta_0 .. beta_n` (the `alpha_k` vanish by symmetry).
fn stieltjes_from_discretization(n: usize, xs: &[f64], us: &[f64]) -> Vec<f64> {
    let nq = xs.len();
    let mut p_prev = vec![0.0; nq];
    let mut p_cur = vec![1.0; nq];
    let mut nrm_cur = kahan_sum(us.iter().copied());
    let beta0 = nrm_cur;
    let mut betas = Vec::with_capacity(n + 1);
    betas.push(beta0);
    let mut beta_last = 0.0;
    for _k in 1..=n {
        for q in 0..nq {
            let next = xs[q] * p_cur[q] - beta_last * p_prev[q];
            p_prev[q] = p_cur[q];
            p_cur[q] = next;
        }
        let nrm_next = kahan_sum(p_cur.iter().zip(us).map(|(&p, &u)| u * p * p));
        let beta = nrm_next / nrm_cur;
        betas.push(beta);
        beta_last = beta;
        nrm_cur = nrm_next;
    }
    betas
}
