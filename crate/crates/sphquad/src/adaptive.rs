//! Adaptive reference integration over spherical polygons: recursive 4-way
//! geodesic subdivision with a fixed moderate-degree leaf rule, used as the
//! independent oracle for cubature and reconstruction error measurements.

use crate::error::{Error, Result};
use crate::geom::{girard_area, SphericalPolygon, SphericalTriangle};
use crate::trirule::spherical_triangle_rule;
use rayon::prelude::*;

/// Degree of the PI-type rule applied on each leaf triangle.
const LEAF_DEGREE: usize = 8;
/// Maximum subdivision depth before giving up.
const MAX_DEPTH: usize = 30;

/// Integrates `f` over the polygon to the requested relative tolerance.
///
/// Returns `(value, error_estimate)` with the estimate conservative: the
/// accumulated disagreement between consecutive refinement levels. The global
/// budget is split over subtriangles proportionally to area.
pub fn adaptive_integrate<F>(
    poly: &SphericalPolygon,
    f: &F,
    rel_tol: f64,
) -> Result<(f64, f64)>
where
    F: Fn(&crate::geom::SpherePoint) -> f64 + Sync,
{
    if rel_tol < 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "adaptive tolerance {rel_tol} below 1e-15"
        )));
    }
    let triangles = poly.triangulate()?;
    integrate_triangles(&triangles, f, rel_tol)
}

/// Triangle entry point of [`adaptive_integrate`].
pub fn adaptive_integrate_triangle<F>(
    tri: &SphericalTriangle,
    f: &F,
    rel_tol: f64,
) -> Result<(f64, f64)>
where
    F: Fn(&crate::geom::SpherePoint) -> f64 + Sync,
{
    if rel_tol < 1e-15 {
        return Err(Error::InvalidParameter(format!(
            "adaptive tolerance {rel_tol} below 1e-15"
        )));
    }
    integrate_triangles(std::slice::from_ref(tri), f, rel_tol)
}

fn integrate_triangles<F>(triangles: &[SphericalTriangle], f: &F, rel_tol: f64) -> Result<(f64, f64)>
where
    F: Fn(&crate::geom::SpherePoint) -> f64 + Sync,
{
    // First pass: coarse values fix the scale that the relative budget
    // refers to. A cancellation-proof floor keeps the budget positive for
    // integrands with vanishing total integral.
    let coarse: Vec<f64> = triangles
        .par_iter()
        .map(|t| Ok(spherical_triangle_rule(t, LEAF_DEGREE)?.integrate(f)))
        .collect::<Result<Vec<_>>>()?;
    let total: f64 = coarse.iter().sum();
    let abs_sum: f64 = coarse.iter().map(|v| v.abs()).sum();
    let mut scale = total.abs().max(1e-6 * abs_sum).max(f64::MIN_POSITIVE);

    let areas: Vec<f64> = triangles.iter().map(girard_area).collect();
    let area_total: f64 = areas.iter().sum();

    // The scale may shrink when cancellation makes |value| much smaller than
    // the coarse estimate; re-run with the observed value in that case. The
    // halved budget makes `estimate <= rel_tol |value|` strict whenever the
    // value confirms the scale.
    for _round in 0..3 {
        let budget = 0.5 * rel_tol * scale;
        let results: Vec<(f64, f64)> = triangles
            .par_iter()
            .zip(&coarse)
            .zip(&areas)
            .map(|((t, &c), &a)| refine(t, c, f, budget * a / area_total, 0))
            .collect::<Result<Vec<_>>>()?;
        let value: f64 = results.iter().map(|r| r.0).sum();
        let estimate: f64 = results.iter().map(|r| r.1).sum();
        if estimate <= rel_tol * value.abs() || value.abs() >= 0.5 * scale {
            return Ok((value, estimate));
        }
        scale = value.abs().max(f64::MIN_POSITIVE);
    }
    Err(Error::AdaptiveNonConvergence {
        depth: MAX_DEPTH,
        estimate: f64::NAN,
    })
}

fn refine<F>(
    tri: &SphericalTriangle,
    coarse: f64,
    f: &F,
    budget: f64,
    depth: usize,
) -> Result<(f64, f64)>
where
    F: Fn(&crate::geom::SpherePoint) -> f64 + Sync,
{
    let kids = tri.subdivide()?;
    let kid_vals: [f64; 4] = {
        let mut v = [0.0; 4];
        for (i, k) in kids.iter().enumerate() {
            v[i] = spherical_triangle_rule(k, LEAF_DEGREE)?.integrate(f);
        }
        v
    };
    let fine: f64 = kid_vals.iter().sum();
    let disagreement = (fine - coarse).abs();
    if disagreement <= budget {
        return Ok((fine, disagreement));
    }
    if depth >= MAX_DEPTH {
        return Err(Error::AdaptiveNonConvergence {
            depth,
            estimate: disagreement,
        });
    }
    let area: f64 = kids.iter().map(girard_area).sum();
    let mut value = 0.0;
    let mut est = 0.0;
    for (k, &kv) in kids.iter().zip(&kid_vals) {
        let (v, e) = refine(k, kv, f, budget * girard_area(k) / area, depth + 1)?;
        value += v;
        est += e;
    }
    Ok((value, est))
}
