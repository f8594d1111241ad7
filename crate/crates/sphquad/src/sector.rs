//! Algebraic cubature on circular sectors of the unit disk and on their
//! affine images, the origin-centered elliptical sectors produced by
//! projecting spherical triangles.

use crate::error::{Error, Result};
use crate::quad1d::{gauss_legendre, trig_gauss};

/// An origin-centered elliptical sector: the image of the circular sector
/// `{(r cos s, r sin s) : r in [0,1], s in [0, theta]}` under the linear map
/// with columns `m[..][0]`, `m[..][1]`.
#[derive(Clone, Copy, Debug)]
pub struct EllipticalSector {
    m: [[f64; 2]; 2],
    theta: f64,
}

impl EllipticalSector {
    pub fn new(m: [[f64; 2]; 2], theta: f64) -> Result<Self> {
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        if det.abs() <= 1e-14 {
            return Err(Error::SingularMatrix { det });
        }
        if !(theta > 0.0 && theta <= std::f64::consts::PI) {
            return Err(Error::InvalidParameter(format!(
                "sector arc parameter {theta} outside (0, pi]"
            )));
        }
        Ok(Self { m, theta })
    }

    pub fn matrix(&self) -> &[[f64; 2]; 2] {
        &self.m
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn apply(&self, p: [f64; 2]) -> [f64; 2] {
        [
            self.m[0][0] * p[0] + self.m[0][1] * p[1],
            self.m[1][0] * p[0] + self.m[1][1] * p[1],
        ]
    }
}

/// A planar cubature rule with positive weights and a declared algebraic
/// degree of exactness.
#[derive(Clone, Debug)]
pub struct PlanarRule {
    nodes: Vec<[f64; 2]>,
    weights: Vec<f64>,
    degree: usize,
}

impl PlanarRule {
    pub fn nodes(&self) -> &[[f64; 2]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w * f(p[0], p[1]))
            .sum()
    }
}

/// Product rule of algebraic degree `deg` on the unit-disk sector of angle
/// `theta`: Gauss-Legendre in the radius (absorbing the polar Jacobian) times
/// a trigonometric Gaussian rule on the re-centered arc.
///
/// Cardinality is exactly `ceil((deg+2)/2) * (deg+1)`.
pub fn circular_sector_rule(deg: usize, theta: f64) -> Result<PlanarRule> {
    if !(theta > 0.0 && theta <= std::f64::consts::PI) {
        return Err(Error::InvalidParameter(format!(
            "sector angle {theta} outside (0, pi]"
        )));
    }
    // Radial integrand carries the polar Jacobian r, so exactness through
    // r^(deg+1) is needed: ceil((deg+2)/2) Gauss points.
    let k_radial = (deg + 2).div_ceil(2);
    let radial = gauss_legendre(k_radial, 0.0, 1.0)?;
    // x^a y^b restricted to the arc is a trig polynomial of degree a+b <= deg;
    // the rule is built on the symmetric arc and shifted, which preserves
    // trigonometric exactness.
    let angular = trig_gauss(deg, 0.5 * theta)?;
    let shift = 0.5 * theta;
    let mut nodes = Vec::with_capacity(radial.len() * angular.len());
    let mut weights = Vec::with_capacity(radial.len() * angular.len());
    for (&r, &wr) in radial.nodes().iter().zip(radial.weights()) {
        for (&t, &wt) in angular.nodes().iter().zip(angular.weights()) {
            let s = t + shift;
            nodes.push([r * s.cos(), r * s.sin()]);
            weights.push(wr * wt * r);
        }
    }
    Ok(PlanarRule {
        nodes,
        weights,
        degree: deg,
    })
}

/// Affine image of [`circular_sector_rule`]: nodes mapped through the sector
/// matrix, weights scaled by `|det M|`. Algebraic exactness is preserved.
pub fn elliptical_sector_rule(deg: usize, sec: &EllipticalSector) -> Result<PlanarRule> {
    let base = circular_sector_rule(deg, sec.theta)?;
    let jac = sec.det().abs();
    Ok(PlanarRule {
        nodes: base.nodes.iter().map(|&p| sec.apply(p)).collect(),
        weights: base.weights.iter().map(|&w| jac * w).collect(),
        degree: deg,
    })
}
