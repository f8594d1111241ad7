//! Geometry on the unit sphere: points, rotations, gnomonic projection,
//! geodesic triangles and polygons, and their triangulation.

mod earclip;

use crate::error::{Error, Result};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Tolerance below which a vertex mean is considered degenerate.
const CENTROID_TOL: f64 = 1e-12;
/// Minimum dot product of a vertex with the region centroid (open-hemisphere check).
const HEMISPHERE_TOL: f64 = 1e-10;
/// Scalar triple product threshold for triangle non-degeneracy.
const TRIANGLE_DET_TOL: f64 = 1e-14;

/// A point on the unit sphere. Coordinates are renormalized on construction,
/// so `x^2 + y^2 + z^2 = 1` holds to machine precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpherePoint {
    x: f64,
    y: f64,
    z: f64,
}

impl SpherePoint {
    /// Builds a point from Cartesian coordinates, renormalizing to unit length.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let n = (x * x + y * y + z * z).sqrt();
        if !n.is_finite() || n < CENTROID_TOL {
            return Err(Error::InvalidParameter(format!(
                "cannot normalize vector of norm {n:.3e} onto the sphere"
            )));
        }
        Ok(Self {
            x: x / n,
            y: y / n,
            z: z / n,
        })
    }

    /// Point from geographic coordinates in degrees:
    /// `(cos lat cos lon, cos lat sin lon, sin lat)`.
    pub fn from_lonlat_deg(lon: f64, lat: f64) -> Result<Self> {
        let (l, p) = (lon.to_radians(), lat.to_radians());
        Self::new(p.cos() * l.cos(), p.cos() * l.sin(), p.sin())
    }

    pub fn x(&self) -> f64 {
        self.x
    }
    pub fn y(&self) -> f64 {
        self.y
    }
    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &SpherePoint) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Geodesic (great-circle) distance to another point, in radians.
    pub fn geodesic_distance(&self, other: &SpherePoint) -> f64 {
        // atan2 form is accurate for both small and near-pi separations.
        let c = self.cross(other);
        let cn = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
        cn.atan2(self.dot(other))
    }
}

impl Serialize for SpherePoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.x, self.y, self.z].serialize(s)
    }
}

impl<'de> Deserialize<'de> for SpherePoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [x, y, z] = <[f64; 3]>::deserialize(d)?;
        let n2 = x * x + y * y + z * z;
        // Stored points are already unit; renormalizing would perturb the
        // coordinates by an ulp and break byte-identical round trips.
        if (n2 - 1.0).abs() <= 1e-12 {
            return Ok(SpherePoint { x, y, z });
        }
        SpherePoint::new(x, y, z).map_err(D::Error::custom)
    }
}

/// A point of a tangent plane, expressed in the plane's orthonormal basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanePoint {
    pub x: f64,
    pub y: f64,
}

/// A proper orthogonal 3x3 matrix (rows stored).
#[derive(Clone, Copy, Debug)]
pub struct Rotation3 {
    m: [[f64; 3]; 3],
}

impl Rotation3 {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    /// Builds from rows; validates orthogonality and positive determinant.
    pub fn from_rows(m: [[f64; 3]; 3]) -> Result<Self> {
        let r = Self { m };
        let e = r.orthogonality_defect();
        if e > 1e-13 {
            return Err(Error::InvalidParameter(format!(
                "matrix is not orthogonal: defect {e:.3e}"
            )));
        }
        if r.det() < 0.0 {
            return Err(Error::InvalidParameter(
                "matrix is a reflection (det < 0)".into(),
            ));
        }
        Ok(r)
    }

    pub fn rows(&self) -> &[[f64; 3]; 3] {
        &self.m
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    /// max |R^T R - I| entry.
    pub fn orthogonality_defect(&self) -> f64 {
        let m = &self.m;
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let mut s = 0.0;
                for k in 0..3 {
                    s += m[k][i] * m[k][j];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((s - target).abs());
            }
        }
        worst
    }

    pub fn apply_raw(&self, v: [f64; 3]) -> [f64; 3] {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn apply(&self, p: &SpherePoint) -> SpherePoint {
        let v = self.apply_raw(p.as_array());
        SpherePoint::new(v[0], v[1], v[2]).expect("rotation of a unit vector")
    }

    /// The inverse rotation (transpose).
    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }
}

/// Rotation carrying `c` to the north pole `(0,0,1)`.
///
/// The axis is `c x N`; at the poles themselves the choice degenerates and a
/// fixed convention is used: identity at the north pole, a half-turn about
/// `(1,0,0)` at the south pole.
pub fn rotation_to_north(c: &SpherePoint) -> Rotation3 {
    let (cx, cy, cz) = (c.x, c.y, c.z);
    let s2 = cx * cx + cy * cy;
    if s2 == 0.0 {
        if cz > 0.0 {
            return Rotation3::identity();
        }
        return Rotation3 {
            m: [[1.0, 0.0, 0.0], [0.0, -1.0, 0.0], [0.0, 0.0, -1.0]],
        };
    }
    // Rodrigues formula for axis (cy,-cx,0)/s, angle acos(cz), written with
    // k = (1-cz)/s^2 = 1/(1+cz) to stay accurate near the south pole.
    let k = (1.0 - cz) / s2;
    Rotation3 {
        m: [
            [cz + k * cy * cy, -k * cx * cy, -cx],
            [-k * cx * cy, cz + k * cx * cx, -cy],
            [cx, cy, cz],
        ],
    }
}

/// Orthonormal basis of the tangent plane at `c`.
///
/// `e1` is the normalized projection of `(0,0,1)` onto the plane, falling back
/// to `(1,0,0)` near the poles; `e2 = c x e1`.
pub fn tangent_basis(c: &SpherePoint) -> ([f64; 3], [f64; 3]) {
    let u: [f64; 3] = if c.z.abs() > 1.0 - 1e-10 {
        [1.0, 0.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    let d = u[0] * c.x + u[1] * c.y + u[2] * c.z;
    let mut e1 = [u[0] - d * c.x, u[1] - d * c.y, u[2] - d * c.z];
    let n = (e1[0] * e1[0] + e1[1] * e1[1] + e1[2] * e1[2]).sqrt();
    e1 = [e1[0] / n, e1[1] / n, e1[2] / n];
    let e2 = [
        c.y * e1[2] - c.z * e1[1],
        c.z * e1[0] - c.x * e1[2],
        c.x * e1[1] - c.y * e1[0],
    ];
    (e1, e2)
}

/// Gnomonic (central) projection of `p` onto the plane tangent at `center`.
pub fn gnomonic(p: &SpherePoint, center: &SpherePoint) -> Result<PlanePoint> {
    let d = p.dot(center);
    if d <= 1e-12 {
        return Err(Error::ProjectionAtInfinity { dot: d });
    }
    let (e1, e2) = tangent_basis(center);
    let q = [
        p.x / d - center.x,
        p.y / d - center.y,
        p.z / d - center.z,
    ];
    Ok(PlanePoint {
        x: q[0] * e1[0] + q[1] * e1[1] + q[2] * e1[2],
        y: q[0] * e2[0] + q[1] * e2[1] + q[2] * e2[2],
    })
}

/// Inverse of [`gnomonic`]: lifts a tangent-plane point back to the sphere.
pub fn inverse_gnomonic(pp: &PlanePoint, center: &SpherePoint) -> SpherePoint {
    let (e1, e2) = tangent_basis(center);
    SpherePoint::new(
        center.x + pp.x * e1[0] + pp.y * e2[0],
        center.y + pp.x * e1[1] + pp.y * e2[1],
        center.z + pp.x * e1[2] + pp.y * e2[2],
    )
    .expect("center + tangent vector is never zero")
}

/// A non-degenerate spherical triangle contained in the open hemisphere
/// centered at its own centroid.
#[derive(Clone, Copy, Debug)]
pub struct SphericalTriangle {
    a: SpherePoint,
    b: SpherePoint,
    c: SpherePoint,
}

impl SphericalTriangle {
    pub fn new(a: SpherePoint, b: SpherePoint, c: SpherePoint) -> Result<Self> {
        let det = triple_product(&a, &b, &c);
        // Scale-invariant flatness test: dividing by the edge-chord product
        // keeps legitimately tiny triangles (det shrinks with size cubed)
        // while rejecting slivers of any size.
        let chord = |p: &SpherePoint, q: &SpherePoint| {
            ((p.x - q.x).powi(2) + (p.y - q.y).powi(2) + (p.z - q.z).powi(2)).sqrt()
        };
        let edge_product = chord(&a, &b) * chord(&b, &c) * chord(&c, &a);
        if det.abs() <= TRIANGLE_DET_TOL * edge_product.min(1.0)
            || det.abs() <= f64::MIN_POSITIVE
        {
            return Err(Error::DegenerateTriangle { det });
        }
        let tri = Self { a, b, c };
        // Edges are minor arcs and open hemispheres are geodesically convex
        // for minor arcs, so containment reduces to the vertex check.
        let ct = tri.centroid();
        for p in [&a, &b, &c] {
            if p.dot(&ct) <= HEMISPHERE_TOL {
                return Err(Error::HemisphereViolation);
            }
        }
        Ok(tri)
    }

    pub fn vertices(&self) -> [SpherePoint; 3] {
        [self.a, self.b, self.c]
    }

    /// `(A+B+C) / ||A+B+C||`.
    pub fn centroid(&self) -> SpherePoint {
        SpherePoint::new(
            self.a.x + self.b.x + self.c.x,
            self.a.y + self.b.y + self.c.y,
            self.a.z + self.b.z + self.c.z,
        )
        .expect("non-degenerate triangle has nonzero vertex sum")
    }

    /// Scalar triple product det[A B C]; positive for counterclockwise
    /// orientation seen from outside the sphere.
    pub fn orientation(&self) -> f64 {
        triple_product(&self.a, &self.b, &self.c)
    }

    /// Subdivides at geodesic edge midpoints into four triangles.
    pub fn subdivide(&self) -> Result<[SphericalTriangle; 4]> {
        let mab = midpoint(&self.a, &self.b)?;
        let mbc = midpoint(&self.b, &self.c)?;
        let mca = midpoint(&self.c, &self.a)?;
        Ok([
            SphericalTriangle::new(self.a, mab, mca)?,
            SphericalTriangle::new(mab, self.b, mbc)?,
            SphericalTriangle::new(mca, mbc, self.c)?,
            SphericalTriangle::new(mab, mbc, mca)?,
        ])
    }
}

fn triple_product(a: &SpherePoint, b: &SpherePoint, c: &SpherePoint) -> f64 {
    let cr = b.cross(c);
    a.x * cr[0] + a.y * cr[1] + a.z * cr[2]
}

/// Normalized chord midpoint of a geodesic edge.
pub fn midpoint(a: &SpherePoint, b: &SpherePoint) -> Result<SpherePoint> {
    SpherePoint::new(a.x + b.x, a.y + b.y, a.z + b.z)
}

/// Spherical excess (surface area) via the half-angle triple-product formula,
/// which is cancellation-free for small triangles: equal to the Girard excess
/// `alpha + beta + gamma - pi`.
pub fn girard_area(tri: &SphericalTriangle) -> f64 {
    let [a, b, c] = tri.vertices();
    let num = triple_product(&a, &b, &c).abs();
    let den = 1.0 + a.dot(&b) + b.dot(&c) + c.dot(&a);
    2.0 * num.atan2(den)
}

/// A spherical polygon bounded by geodesic arcs: a counterclockwise outer
/// ring plus optional clockwise hole rings, all contained in the open
/// hemisphere around the outer-ring centroid.
#[derive(Clone, Debug)]
pub struct SphericalPolygon {
    vertices: Vec<SpherePoint>,
    holes: Vec<Vec<SpherePoint>>,
}

impl SphericalPolygon {
    /// Polygon from an outer ring only. The ring must be open (no repeated
    /// final vertex); orientation is normalized to counterclockwise.
    pub fn new(vertices: Vec<SpherePoint>) -> Result<Self> {
        Self::with_holes(vertices, Vec::new())
    }

    /// Polygon with hole rings. Holes are normalized to clockwise orientation.
    pub fn with_holes(vertices: Vec<SpherePoint>, holes: Vec<Vec<SpherePoint>>) -> Result<Self> {
        let mut poly = Self { vertices, holes };
        poly.validate_rings()?;
        let c = poly.centroid()?;
        for p in poly.vertices.iter().chain(poly.holes.iter().flatten()) {
            if p.dot(&c) < HEMISPHERE_TOL {
                return Err(Error::HemisphereViolation);
            }
        }
        // Normalize orientations on the gnomonic image: outer CCW, holes CW.
        if ring_signed_area(&project_ring(&poly.vertices, &c)?) < 0.0 {
            poly.vertices.reverse();
        }
        for hole in &mut poly.holes {
            if ring_signed_area(&project_ring(hole, &c)?) > 0.0 {
                hole.reverse();
            }
        }
        Ok(poly)
    }

    fn validate_rings(&self) -> Result<()> {
        for (ring, what) in std::iter::once((&self.vertices, "outer ring"))
            .chain(self.holes.iter().map(|h| (h, "hole ring")))
        {
            let n = ring.len();
            if n < 3 {
                return Err(Error::InvalidPolygon(format!(
                    "{what} has {n} vertices, need at least 3"
                )));
            }
            for i in 0..n {
                let (p, q) = (&ring[i], &ring[(i + 1) % n]);
                let chord2 = (p.x - q.x).powi(2) + (p.y - q.y).powi(2) + (p.z - q.z).powi(2);
                if chord2 < 1e-24 {
                    return Err(Error::InvalidPolygon(format!(
                        "{what}: consecutive vertices {i} and {} coincide",
                        (i + 1) % n
                    )));
                }
                if p.dot(q) < -1.0 + 1e-12 {
                    return Err(Error::InvalidPolygon(format!(
                        "{what}: edge {i} has geodesic length >= pi"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn vertices(&self) -> &[SpherePoint] {
        &self.vertices
    }

    pub fn holes(&self) -> &[Vec<SpherePoint>] {
        &self.holes
    }

    /// Normalized arithmetic mean of the outer-ring vertices.
    pub fn centroid(&self) -> Result<SpherePoint> {
        let n = self.vertices.len() as f64;
        let (mut x, mut y, mut z) = (0.0, 0.0, 0.0);
        for v in &self.vertices {
            x += v.x;
            y += v.y;
            z += v.z;
        }
        let norm = (x * x + y * y + z * z).sqrt() / n;
        if norm < CENTROID_TOL {
            return Err(Error::DegeneratePolygon { norm });
        }
        SpherePoint::new(x, y, z)
    }

    /// Triangulates the polygon: gnomonic projection at the centroid, planar
    /// ear clipping (holes joined by bridge edges), lift back to the sphere.
    ///
    /// For a simple outer ring without holes this yields exactly `L - 2`
    /// triangles, all positively oriented.
    pub fn triangulate(&self) -> Result<Vec<SphericalTriangle>> {
        let c = self.centroid()?;
        let mut rings: Vec<Vec<earclip::Pt>> = Vec::with_capacity(1 + self.holes.len());
        rings.push(project_ring(&self.vertices, &c)?);
        for h in &self.holes {
            rings.push(project_ring(h, &c)?);
        }
        check_no_self_intersection(&rings)?;
        for (hi, hole) in rings.iter().enumerate().skip(1) {
            if !earclip::point_in_ring(&hole[0], &rings[0]) {
                return Err(Error::InvalidPolygon(format!(
                    "hole {} is not inside the outer ring",
                    hi - 1
                )));
            }
        }
        let index_triples = earclip::triangulate(&rings)?;
        let all_vertices: Vec<&SpherePoint> = self
            .vertices
            .iter()
            .chain(self.holes.iter().flatten())
            .collect();
        let mut out = Vec::with_capacity(index_triples.len());
        for [i, j, k] in index_triples {
            match SphericalTriangle::new(*all_vertices[i], *all_vertices[j], *all_vertices[k]) {
                Ok(t) => {
                    debug_assert!(t.orientation() > 0.0);
                    out.push(t);
                }
                // Sliver below the degeneracy threshold: contributes no area.
                Err(Error::DegenerateTriangle { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        if out.is_empty() {
            return Err(Error::InvalidPolygon("triangulation is empty".into()));
        }
        Ok(out)
    }

    /// Surface area, as the sum of Girard excesses over a triangulation.
    pub fn area(&self) -> Result<f64> {
        Ok(self.triangulate()?.iter().map(girard_area).sum())
    }
}

/// Free-function form of [`SphericalPolygon::centroid`].
pub fn centroid(poly: &SphericalPolygon) -> Result<SpherePoint> {
    poly.centroid()
}

fn project_ring(ring: &[SpherePoint], center: &SpherePoint) -> Result<Vec<earclip::Pt>> {
    ring.iter()
        .map(|p| {
            let pp = gnomonic(p, center)?;
            Ok(earclip::Pt { x: pp.x, y: pp.y })
        })
        .collect()
}

fn ring_signed_area(ring: &[earclip::Pt]) -> f64 {
    let n = ring.len();
    let mut s = 0.0;
    for i in 0..n {
        let (p, q) = (&ring[i], &ring[(i + 1) % n]);
        s += p.x * q.y - q.x * p.y;
    }
    0.5 * s
}

/// Rejects rings whose projected edges cross each other (non-adjacent pairs).
fn check_no_self_intersection(rings: &[Vec<earclip::Pt>]) -> Result<()> {
    struct Seg {
        ring: usize,
        idx: usize,
        a: earclip::Pt,
        b: earclip::Pt,
    }
    let mut segs = Vec::new();
    for (ri, ring) in rings.iter().enumerate() {
        let n = ring.len();
        for i in 0..n {
            segs.push(Seg {
                ring: ri,
                idx: i,
                a: ring[i],
                b: ring[(i + 1) % n],
            });
        }
    }
    for i in 0..segs.len() {
        for j in (i + 1)..segs.len() {
            let (s, t) = (&segs[i], &segs[j]);
            let adjacent = s.ring == t.ring && {
                let n = rings[s.ring].len();
                (s.idx + 1) % n == t.idx || (t.idx + 1) % n == s.idx
            };
            if adjacent {
                continue;
            }
            if earclip::segments_intersect(&s.a, &s.b, &t.a, &t.b) {
                return Err(Error::InvalidPolygon(format!(
                    "boundary self-intersects: edge {} of ring {} crosses edge {} of ring {}",
                    s.idx, s.ring, t.idx, t.ring
                )));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests;
