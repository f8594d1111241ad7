//! Near-algebraic PI-type cubature on a single spherical triangle.
//!
//! The triangle is rotated so its centroid sits at the north pole and
//! projected onto the xy-plane, where its boundary consists of three
//! origin-centered ellipse arcs. The planar integrand `f/g` with
//! `g = sqrt(1 - x^2 - y^2)` is handled by raising the sector degree enough
//! to absorb a polynomial approximation of `1/g`, and the lifted weights use
//! the exact `1/g` value at each node, which makes the rule nearly (not
//! formally) exact on polynomials of the requested degree.

use crate::error::{Error, Result};
use crate::geom::{girard_area, rotation_to_north, SpherePoint, SphericalTriangle};
use crate::rule::CubatureRule;
use crate::sector::{elliptical_sector_rule, EllipticalSector};

/// Default relative accuracy of the `1/g` polynomial approximation.
pub const DEFAULT_INV_G_EPSILON: f64 = 1e-15;

/// Chebyshev approximation of `1/sqrt(1-t)` on `[0, t_max]`, carrying the
/// bivariate degree `m = 2 deg(q)` that the planar sector rules must absorb.
#[derive(Clone, Debug)]
pub struct InvGApprox {
    cheb_coeffs: Vec<f64>,
    t_max: f64,
    m: usize,
    epsilon: f64,
}

impl InvGApprox {
    pub fn cheb_coeffs(&self) -> &[f64] {
        &self.cheb_coeffs
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    /// Bivariate polynomial degree of `p_eps(x, y) = q(x^2 + y^2)`.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Evaluates the interpolant by the Clenshaw recurrence.
    pub fn eval(&self, t: f64) -> f64 {
        if self.t_max == 0.0 {
            return self.cheb_coeffs[0];
        }
        let u = 2.0 * t / self.t_max - 1.0;
        let mut b1 = 0.0;
        let mut b2 = 0.0;
        for &c in self.cheb_coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * u * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        u * b1 - b2 + self.cheb_coeffs[0]
    }
}

/// Minimal-degree Chebyshev interpolant of `1/sqrt(1-t)` on `[0, t_max]`
/// with relative error at most `eps`.
///
/// The degree is sized from the decay of the Chebyshev coefficients of the
/// fully resolved series: truncating after index `d` leaves an absolute error
/// of at most the discarded coefficient sum, and `f >= 1` turns that into a
/// relative bound. A dense-grid re-measurement cannot resolve below a few
/// f64 epsilons of evaluation noise, so the coefficient tail is the sharper
/// and better-conditioned criterion.
pub fn inv_g_degree(t_max: f64, eps: f64) -> Result<InvGApprox> {
    if !(0.0..1.0).contains(&t_max) {
        return Err(Error::HemisphereViolation);
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter("inv_g epsilon must be positive".into()));
    }
    let f = |t: f64| 1.0 / (1.0 - t).sqrt();
    if t_max == 0.0 {
        return Ok(InvGApprox {
            cheb_coeffs: vec![1.0],
            t_max,
            m: 0,
            epsilon: eps,
        });
    }

    // Resolve the series: grow the interpolation degree until the trailing
    // coefficients either reach the rounding floor or stop shrinking (the
    // floor itself rises with the strength of the nearby singularity).
    const MAX_DEGREE: usize = 2048;
    let tail_rel = |c: &[f64]| {
        let cmax = c.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
        let tail = c[c.len() * 3 / 4..]
            .iter()
            .fold(0.0f64, |m, &v| m.max(v.abs()));
        tail / cmax
    };
    let mut big = 32usize;
    let mut prev: Option<(Vec<f64>, f64)> = None;
    let coeffs = loop {
        let c = chebyshev_interpolate(f, 0.0, t_max, big);
        let t = tail_rel(&c);
        if t <= 1.5e-15 {
            break c;
        }
        if let Some((pc, pt)) = prev {
            // A genuine tail shrinks enormously per doubling; a stall means
            // the previous series was already fully resolved.
            if t > 0.25 * pt {
                break pc;
            }
            prev = Some((c, t));
        } else {
            prev = Some((c, t));
        }
        big *= 2;
        if big > MAX_DEGREE {
            return Err(Error::QuadratureConstruction(format!(
                "1/g approximation on [0, {t_max}] needs degree > {MAX_DEGREE}; \
                 region is too close to the equator"
            )));
        }
    };

    // Minimal d with discarded-coefficient sum <= eps, counting only
    // coefficients above the noise floor of the resolved series.
    let cmax = coeffs.iter().fold(0.0f64, |m, &v| m.max(v.abs()));
    let floor = 2.0 * tail_rel(&coeffs).max(1e-16) * cmax;
    let signal_end = coeffs
        .iter()
        .rposition(|&v| v.abs() > floor)
        .unwrap_or(0);
    let mut tail_sum = 0.0;
    let mut d = 0;
    for k in (1..=signal_end).rev() {
        tail_sum += coeffs[k].abs();
        if tail_sum > eps {
            d = k;
            break;
        }
    }
    Ok(InvGApprox {
        cheb_coeffs: chebyshev_interpolate(f, 0.0, t_max, d),
        t_max,
        m: 2 * d,
        epsilon: eps,
    })
}

/// Chebyshev coefficients of the degree-`d` interpolant of `f` at the
/// Chebyshev-Lobatto points of `[a, b]`.
fn chebyshev_interpolate(f: impl Fn(f64) -> f64, a: f64, b: f64, d: usize) -> Vec<f64> {
    use std::f64::consts::PI;
    if d == 0 {
        return vec![f(0.5 * (a + b))];
    }
    let df = d as f64;
    let vals: Vec<f64> = (0..=d)
        .map(|j| {
            let x = (j as f64 * PI / df).cos();
            f(0.5 * (a + b) + 0.5 * (b - a) * x)
        })
        .collect();
    let mut coeffs = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let kf = k as f64;
        let mut s = 0.5 * (vals[0] + (kf * PI).cos() * vals[d]);
        for (j, &v) in vals.iter().enumerate().take(d).skip(1) {
            s += v * (kf * j as f64 * PI / df).cos();
        }
        let mut c = 2.0 * s / df;
        if k == 0 || k == d {
            c *= 0.5;
        }
        coeffs.push(c);
    }
    coeffs
}

/// Near-algebraic degree-`n` PI-type rule on a spherical triangle, with the
/// default `1/g` accuracy.
pub fn spherical_triangle_rule(tri: &SphericalTriangle, n: usize) -> Result<CubatureRule> {
    spherical_triangle_rule_with_eps(tri, n, DEFAULT_INV_G_EPSILON)
}

/// Same as [`spherical_triangle_rule`] with a configurable `1/g` accuracy.
pub fn spherical_triangle_rule_with_eps(
    tri: &SphericalTriangle,
    n: usize,
    eps: f64,
) -> Result<CubatureRule> {
    build_triangle_rule(tri, n, eps, 0)
}

fn build_triangle_rule(
    tri: &SphericalTriangle,
    n: usize,
    eps: f64,
    depth: usize,
) -> Result<CubatureRule> {
    let ct = tri.centroid();
    let rot = rotation_to_north(&ct);
    let rot_back = rot.transpose();
    let verts: Vec<[f64; 3]> = tri
        .vertices()
        .iter()
        .map(|v| rot.apply_raw(v.as_array()))
        .collect();

    let mut t_max = 0.0f64;
    for v in &verts {
        if v[2] <= 0.0 {
            return Err(Error::HemisphereViolation);
        }
        t_max = t_max.max(v[0] * v[0] + v[1] * v[1]);
    }
    if t_max >= 1.0 {
        return Err(Error::HemisphereViolation);
    }

    // The three projected arcs must wind once around the origin for the
    // sector decomposition to tile the projected triangle. This holds
    // whenever the centroid is interior; a centroid split restores it
    // otherwise.
    if !origin_enclosed(&verts) {
        if depth >= 8 {
            return Err(Error::QuadratureConstruction(
                "sector decomposition failed: centroid subdivision exhausted".into(),
            ));
        }
        let [a, b, c] = tri.vertices();
        let parts = [
            SphericalTriangle::new(a, b, ct)?,
            SphericalTriangle::new(b, c, ct)?,
            SphericalTriangle::new(c, a, ct)?,
        ];
        let rules = parts
            .iter()
            .map(|t| build_triangle_rule(t, n, eps, depth + 1))
            .collect::<Result<Vec<_>>>()?;
        return CubatureRule::concat(n, rules);
    }

    let m = inv_g_degree(t_max, eps)?.m();
    let deg = n + m;

    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for i in 0..3 {
        let p = &verts[i];
        let q = &verts[(i + 1) % 3];
        let Some(sector) = edge_sector(p, q) else {
            continue; // radially degenerate arc spans no sector
        };
        let planar = elliptical_sector_rule(deg, &sector)?;
        for (xy, &w) in planar.nodes().iter().zip(planar.weights()) {
            let r2 = xy[0] * xy[0] + xy[1] * xy[1];
            let g = (1.0 - r2).sqrt();
            let lifted = rot_back.apply_raw([xy[0], xy[1], g]);
            nodes.push(SpherePoint::new(lifted[0], lifted[1], lifted[2])?);
            weights.push(w / g);
        }
    }
    let mut rule = CubatureRule::new(n, nodes, weights, girard_area(tri))?;
    rule.set_moment_residual(0.0);
    Ok(rule)
}

/// Projected sector swept by the great-circle arc from `p` to `q` (rotated
/// coordinates, both in the open northern hemisphere). Returns `None` when
/// the projected arc is a radial segment, which bounds a zero-area sector.
fn edge_sector(p: &[f64; 3], q: &[f64; 3]) -> Option<EllipticalSector> {
    let dot = (p[0] * q[0] + p[1] * q[1] + p[2] * q[2]).clamp(-1.0, 1.0);
    let len = dot.acos();
    // In-plane companion direction: the arc is p cos(s) + d sin(s).
    let mut d = [q[0] - dot * p[0], q[1] - dot * p[1], q[2] - dot * p[2]];
    let dn = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
    d = [d[0] / dn, d[1] / dn, d[2] / dn];
    EllipticalSector::new([[p[0], d[0]], [p[1], d[1]]], len).ok()
}

/// Checks that the projected boundary arcs wind once around the origin.
///
/// Along each arc the polar angle is strictly monotone (rate `det M / r^2`),
/// so the signed sweep of an arc is the principal angular difference of its
/// endpoints taken in the direction of `det M`.
fn origin_enclosed(verts: &[[f64; 3]]) -> bool {
    use std::f64::consts::PI;
    let mut winding = 0.0;
    for i in 0..3 {
        let p = &verts[i];
        let q = &verts[(i + 1) % 3];
        let Some(sector) = edge_sector(p, q) else {
            continue;
        };
        let a0 = p[1].atan2(p[0]);
        let a1 = q[1].atan2(q[0]);
        let mut span = a1 - a0;
        if sector.det() > 0.0 {
            while span < 0.0 {
                span += 2.0 * PI;
            }
        } else {
            while span > 0.0 {
                span -= 2.0 * PI;
            }
        }
        winding += span;
    }
    winding.abs() > PI
}
