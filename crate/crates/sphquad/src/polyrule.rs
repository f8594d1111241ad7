//! Composite PI-type rule over a spherical polygon, assembled from its
//! triangulation by additivity of integration.

use crate::error::{Error, Result};
use crate::geom::SphericalPolygon;
use crate::rule::CubatureRule;
use crate::trirule::{spherical_triangle_rule_with_eps, DEFAULT_INV_G_EPSILON};
use rayon::prelude::*;

/// Largest accepted near-algebraic degree; beyond this the dense compression
/// stage dominates the cost and results are unvalidated.
pub const MAX_DEGREE: usize = 60;

/// Near-algebraic degree-`n` PI-type rule over the polygon: the concatenation
/// of per-triangle rules in triangulation order.
pub fn polygon_rule(poly: &SphericalPolygon, n: usize) -> Result<CubatureRule> {
    polygon_rule_with_eps(poly, n, DEFAULT_INV_G_EPSILON)
}

/// Same as [`polygon_rule`] with a configurable `1/g` approximation accuracy.
pub fn polygon_rule_with_eps(
    poly: &SphericalPolygon,
    n: usize,
    eps: f64,
) -> Result<CubatureRule> {
    if n > MAX_DEGREE {
        return Err(Error::InvalidDegree(format!(
            "degree {n} exceeds the supported maximum {MAX_DEGREE}"
        )));
    }
    let triangles = poly.triangulate()?;
    // Triangle rules are independent; the ordered collect keeps assembly
    // deterministic.
    let parts: Vec<CubatureRule> = triangles
        .par_iter()
        .map(|t| spherical_triangle_rule_with_eps(t, n, eps))
        .collect::<Result<Vec<_>>>()?;
    CubatureRule::concat(n, parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{girard_area, SpherePoint};
    use crate::trirule::spherical_triangle_rule;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    fn sp(x: f64, y: f64, z: f64) -> SpherePoint {
        SpherePoint::new(x, y, z).unwrap()
    }

    fn cap_polygon(sides: usize, radius: f64) -> SphericalPolygon {
        let ring: Vec<SpherePoint> = (0..sides)
            .map(|k| {
                let phi = 2.0 * PI * k as f64 / sides as f64;
                sp(
                    radius.sin() * phi.cos(),
                    radius.sin() * phi.sin(),
                    radius.cos(),
                )
            })
            .collect();
        SphericalPolygon::new(ring).unwrap()
    }

    #[test]
    fn single_triangle_polygon_matches_triangle_rule() {
        let verts = [sp(1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0), sp(0.0, 0.0, 1.0)];
        let poly = SphericalPolygon::new(verts.to_vec()).unwrap();
        let tri = crate::geom::SphericalTriangle::new(verts[0], verts[1], verts[2]).unwrap();
        let a = polygon_rule(&poly, 4).unwrap();
        let b = spherical_triangle_rule(&tri, 4).unwrap();
        assert_eq!(a.len(), b.len());
        for i in 0..a.len() {
            assert_eq!(a.nodes()[i].x(), b.nodes()[i].x());
            assert_eq!(a.weights()[i], b.weights()[i]);
        }
    }

    #[test]
    fn weights_sum_to_polygon_area() {
        let poly = cap_polygon(9, 0.7);
        let rule = polygon_rule(&poly, 6).unwrap();
        let area: f64 = poly.triangulate().unwrap().iter().map(girard_area).sum();
        assert_abs_diff_eq!(rule.sum_weights(), area, epsilon = 1e-12 * area);
        assert_abs_diff_eq!(rule.region_area(), area, epsilon = 1e-13 * area);
    }

    #[test]
    fn additivity_over_triangulation() {
        let poly = cap_polygon(7, 0.5);
        let n = 5;
        let f = |p: &SpherePoint| (1.0 + p.x() + p.y() * p.z()).powi(2);
        let whole = polygon_rule(&poly, n).unwrap().integrate(f);
        let parts: f64 = poly
            .triangulate()
            .unwrap()
            .iter()
            .map(|t| spherical_triangle_rule(t, n).unwrap().integrate(f))
            .sum();
        assert_abs_diff_eq!(whole, parts, epsilon = 1e-15 * whole.abs());
    }

    #[test]
    fn degree_cap_enforced() {
        let poly = cap_polygon(5, 0.4);
        assert!(polygon_rule(&poly, 61).is_err());
        assert!(polygon_rule(&poly, 60).is_ok() || polygon_rule(&poly, 60).is_err());
    }
}
