use super::*;
use approx::assert_abs_diff_eq;
use std::f64::consts::PI;

fn sp(x: f64, y: f64, z: f64) -> SpherePoint {
    SpherePoint::new(x, y, z).unwrap()
}

fn octant() -> SphericalTriangle {
    SphericalTriangle::new(sp(1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0), sp(0.0, 0.0, 1.0)).unwrap()
}

#[test]
fn centroid_of_octant_polygon() {
    let poly =
        SphericalPolygon::new(vec![sp(1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0), sp(0.0, 0.0, 1.0)])
            .unwrap();
    let c = poly.centroid().unwrap();
    let r = 1.0 / 3.0f64.sqrt();
    assert_abs_diff_eq!(c.x(), r, epsilon = 1e-15);
    assert_abs_diff_eq!(c.y(), r, epsilon = 1e-15);
    assert_abs_diff_eq!(c.z(), r, epsilon = 1e-15);
}

#[test]
fn centroid_of_symmetric_cap_is_pole() {
    // Vertices placed symmetrically about the z-axis.
    let n = 8;
    let ring: Vec<SpherePoint> = (0..n)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / n as f64;
            sp(0.3 * phi.cos(), 0.3 * phi.sin(), (1.0f64 - 0.09).sqrt())
        })
        .collect();
    let c = SphericalPolygon::new(ring).unwrap().centroid().unwrap();
    assert_abs_diff_eq!(c.z(), 1.0, epsilon = 1e-14);
}

#[test]
fn centroid_degenerate_balanced_vertices() {
    // Mean vector vanishes: no usable centroid. Construction itself fails.
    let ring = vec![
        sp(1.0, 0.0, 0.0),
        sp(0.0, 1.0, 0.0),
        sp(-1.0, 0.0, 0.0),
        sp(0.0, -1.0, 0.0),
    ];
    let err = SphericalPolygon::new(ring).unwrap_err();
    assert!(matches!(
        err,
        Error::DegeneratePolygon { .. } | Error::HemisphereViolation
    ));
}

#[test]
fn rotation_to_north_cases() {
    let id = rotation_to_north(&sp(0.0, 0.0, 1.0));
    for i in 0..3 {
        for j in 0..3 {
            let want = if i == j { 1.0 } else { 0.0 };
            assert_abs_diff_eq!(id.rows()[i][j], want, epsilon = 0.0);
        }
    }
    for c in [
        sp(1.0, 0.0, 0.0),
        sp(0.0, 0.0, -1.0),
        sp(0.3, -0.4, 0.86),
        sp(1e-8, 1e-8, -1.0),
        sp(0.6, 0.8, 1e-12),
    ] {
        let r = rotation_to_north(&c);
        let img = r.apply_raw(c.as_array());
        assert!(img[0].abs() < 1e-14 && img[1].abs() < 1e-14);
        assert_abs_diff_eq!(img[2], 1.0, epsilon = 1e-14);
        assert!(r.orthogonality_defect() < 1e-14);
        assert!(r.det() > 0.0);
    }
}

#[test]
fn gnomonic_center_maps_to_origin() {
    let c = sp(0.2, -0.5, 0.9);
    let pp = gnomonic(&c, &c).unwrap();
    assert_abs_diff_eq!(pp.x, 0.0, epsilon = 1e-15);
    assert_abs_diff_eq!(pp.y, 0.0, epsilon = 1e-15);
}

#[test]
fn gnomonic_analytic_tangent() {
    // center = north pole, p at polar angle theta in the xz-plane -> (tan theta, 0)
    // up to the orientation of the tangent basis (e1 = x-axis at the pole).
    let c = sp(0.0, 0.0, 1.0);
    for theta in [0.1f64, 0.4, 1.0, 1.4] {
        let p = sp(theta.sin(), 0.0, theta.cos());
        let pp = gnomonic(&p, &c).unwrap();
        assert_abs_diff_eq!(pp.x.hypot(pp.y), theta.tan(), epsilon = 1e-13);
        assert_abs_diff_eq!(pp.y, 0.0, epsilon = 1e-15);
    }
}

#[test]
fn gnomonic_equator_errors() {
    let c = sp(0.0, 0.0, 1.0);
    let p = sp(1.0, 0.0, 0.0);
    assert!(matches!(
        gnomonic(&p, &c),
        Err(Error::ProjectionAtInfinity { .. })
    ));
}

#[test]
fn girard_octant_area() {
    assert_abs_diff_eq!(girard_area(&octant()), PI / 2.0, epsilon = 1e-15);
}

#[test]
fn girard_small_triangle_flat_limit() {
    // Near-equilateral triangle with geodesic side eps: area -> (sqrt(3)/4) eps^2.
    for eps in [1e-2f64, 1e-3, 1e-4] {
        let h = eps * 3.0f64.sqrt() / 2.0;
        let t = SphericalTriangle::new(
            sp(0.0, 0.0, 1.0),
            sp(eps.sin() * (0.0f64).cos(), 0.0, eps.cos()),
            sp(
                (eps / 2.0) * 1.0, // small-angle chart around the pole
                h,
                (1.0 - (eps / 2.0_f64).powi(2) - h * h).sqrt(),
            )
            ,
        )
        .unwrap();
        let flat = 3.0f64.sqrt() / 4.0 * eps * eps;
        let rel = (girard_area(&t) - flat).abs() / flat;
        // Chart distortion is O(eps^2); the flat limit dominates for small eps.
        assert!(rel < 3.0 * eps * eps + 1e-9, "eps={eps} rel={rel}");
    }
}

#[test]
fn girard_near_half_lune() {
    // Angles pi/2, pi/2, pi - eps: area = pi - eps exactly.
    let eps = 1e-3f64;
    let t = SphericalTriangle::new(
        sp(1.0, 0.0, 0.0),
        sp(0.0, 1.0, 0.0),
        sp(-eps.cos(), 0.0, eps.sin()),
    )
    .unwrap();
    assert_abs_diff_eq!(girard_area(&t), PI - eps, epsilon = 1e-12);
}

#[test]
fn degenerate_triangle_rejected() {
    let r = SphericalTriangle::new(sp(1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0), sp(0.7, 0.7, 0.0));
    assert!(matches!(r, Err(Error::DegenerateTriangle { .. })));
}

#[test]
fn triangle_spanning_hemisphere_rejected() {
    // A . (A+B+C) = 1 - 0.6 - 0.6 < 0: vertex A falls outside the open
    // hemisphere around the centroid.
    let r = SphericalTriangle::new(
        sp(-0.6, -0.6, 0.28f64.sqrt()),
        sp(1.0, 0.0, 0.0),
        sp(0.0, 1.0, 0.0),
    );
    assert!(matches!(r, Err(Error::HemisphereViolation)));
}

#[test]
fn triangulate_three_vertices_is_identity() {
    let poly =
        SphericalPolygon::new(vec![sp(1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0), sp(0.0, 0.0, 1.0)])
            .unwrap();
    let tris = poly.triangulate().unwrap();
    assert_eq!(tris.len(), 1);
    assert_abs_diff_eq!(girard_area(&tris[0]), PI / 2.0, epsilon = 1e-14);
}

/// Interior angle sum oracle: the area of a spherical L-gon is the angle sum
/// minus (L-2) pi. Angles are measured as signed rotations so that reflex
/// vertices of a counterclockwise ring contribute more than pi.
fn polygon_angle_excess(ring: &[SpherePoint]) -> f64 {
    let n = ring.len();
    let mut sum = 0.0;
    for i in 0..n {
        let b = &ring[i];
        let a = &ring[(i + n - 1) % n];
        let c = &ring[(i + 1) % n];
        let t = |p: &SpherePoint| {
            let d = b.dot(p);
            let v = [p.x() - d * b.x(), p.y() - d * b.y(), p.z() - d * b.z()];
            let nn = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            [v[0] / nn, v[1] / nn, v[2] / nn]
        };
        let (tp, tn) = (t(a), t(c));
        // Rotate counterclockwise (as seen from outside at b) from the
        // outgoing tangent to the incoming one.
        let dot = tn[0] * tp[0] + tn[1] * tp[1] + tn[2] * tp[2];
        let crs = [
            tn[1] * tp[2] - tn[2] * tp[1],
            tn[2] * tp[0] - tn[0] * tp[2],
            tn[0] * tp[1] - tn[1] * tp[0],
        ];
        let det = crs[0] * b.x() + crs[1] * b.y() + crs[2] * b.z();
        let mut ang = det.atan2(dot);
        if ang < 0.0 {
            ang += 2.0 * PI;
        }
        sum += ang;
    }
    sum - (n as f64 - 2.0) * PI
}

#[test]
fn triangulate_quad_matches_angle_excess() {
    let ring = vec![
        sp(0.3, 0.1, 0.95),
        sp(-0.1, 0.35, 0.93),
        sp(-0.3, -0.2, 0.93),
        sp(0.25, -0.3, 0.92),
    ];
    let poly = SphericalPolygon::new(ring.clone()).unwrap();
    let tris = poly.triangulate().unwrap();
    assert_eq!(tris.len(), 2);
    let sum: f64 = tris.iter().map(girard_area).sum();
    assert_abs_diff_eq!(sum, polygon_angle_excess(&ring), epsilon = 1e-13);
    for t in &tris {
        assert!(t.orientation() > 0.0);
    }
}

#[test]
fn triangulate_clockwise_input_is_normalized() {
    let mut ring = vec![
        sp(0.3, 0.1, 0.95),
        sp(-0.1, 0.35, 0.93),
        sp(-0.3, -0.2, 0.93),
        sp(0.25, -0.3, 0.92),
    ];
    ring.reverse();
    let poly = SphericalPolygon::new(ring).unwrap();
    for t in poly.triangulate().unwrap() {
        assert!(t.orientation() > 0.0);
    }
}

#[test]
fn triangulate_star_polygon_count() {
    // Non-convex 12-gon around the pole: exactly L-2 triangles, area additive.
    let n = 12;
    let ring: Vec<SpherePoint> = (0..n)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / n as f64;
            let r = if k % 2 == 0 { 0.5 } else { 0.22 };
            sp(r * phi.cos(), r * phi.sin(), (1.0 - r * r).sqrt())
        })
        .collect();
    let poly = SphericalPolygon::new(ring.clone()).unwrap();
    let tris = poly.triangulate().unwrap();
    assert_eq!(tris.len(), n - 2);
    let sum: f64 = tris.iter().map(girard_area).sum();
    assert_abs_diff_eq!(sum, polygon_angle_excess(&ring), epsilon = 1e-12);
}

#[test]
fn triangulate_with_hole_area() {
    let outer: Vec<SpherePoint> = (0..8)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / 8.0;
            sp(0.5 * phi.cos(), 0.5 * phi.sin(), (1.0f64 - 0.25).sqrt())
        })
        .collect();
    let hole: Vec<SpherePoint> = (0..6)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / 6.0 + 0.3;
            sp(0.15 * phi.cos(), 0.15 * phi.sin(), (1.0f64 - 0.0225).sqrt())
        })
        .collect();
    let holed = SphericalPolygon::with_holes(outer.clone(), vec![hole.clone()]).unwrap();
    let tris = holed.triangulate().unwrap();
    let holed_area: f64 = tris.iter().map(girard_area).sum();
    // Independent oracle: area(outer) - area(hole), each from a hole-free run.
    let a_outer = SphericalPolygon::new(outer).unwrap().area().unwrap();
    let a_hole = SphericalPolygon::new(hole).unwrap().area().unwrap();
    assert_abs_diff_eq!(holed_area, a_outer - a_hole, epsilon = 1e-12);
    for t in &tris {
        assert!(t.orientation() > 0.0);
    }
}

#[test]
fn self_intersecting_boundary_rejected() {
    // Bow-tie quadrilateral.
    let ring = vec![
        sp(0.3, 0.3, 0.9),
        sp(-0.3, -0.3, 0.9),
        sp(-0.3, 0.3, 0.9),
        sp(0.3, -0.3, 0.9),
    ];
    let poly = SphericalPolygon::new(ring).unwrap();
    assert!(matches!(
        poly.triangulate(),
        Err(Error::InvalidPolygon(_))
    ));
}

#[test]
fn polygon_rejects_short_rings_and_duplicates() {
    assert!(SphericalPolygon::new(vec![sp(1.0, 0.0, 0.0), sp(0.0, 1.0, 0.0)]).is_err());
    let dup = vec![sp(1.0, 0.0, 0.0), sp(1.0, 0.0, 0.0), sp(0.0, 0.0, 1.0)];
    assert!(SphericalPolygon::new(dup).is_err());
}

#[test]
fn subdivide_preserves_area() {
    let t = octant();
    let parts = t.subdivide().unwrap();
    let sum: f64 = parts.iter().map(girard_area).sum();
    assert_abs_diff_eq!(sum, girard_area(&t), epsilon = 1e-14);
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn unit_point() -> impl Strategy<Value = SpherePoint> {
        (-1.0f64..1.0, -1.0f64..1.0, -1.0f64..1.0)
            .prop_filter("nonzero", |(x, y, z)| x * x + y * y + z * z > 1e-3)
            .prop_map(|(x, y, z)| SpherePoint::new(x, y, z).unwrap())
    }

    proptest! {
        #[test]
        fn gnomonic_round_trip(p in unit_point(), c in unit_point()) {
            prop_assume!(p.dot(&c) > 1e-3);
            let pp = gnomonic(&p, &c).unwrap();
            let back = inverse_gnomonic(&pp, &c);
            prop_assert!(back.geodesic_distance(&p) < 1e-13);
        }

        #[test]
        fn rotation_preserves_dot(p in unit_point(), q in unit_point(), c in unit_point()) {
            let r = rotation_to_north(&c);
            let (rp, rq) = (r.apply(&p), r.apply(&q));
            prop_assert!((rp.dot(&rq) - p.dot(&q)).abs() < 1e-14);
        }
    }
}
