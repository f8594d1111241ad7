//! Planar ear-clipping triangulation with hole support via bridge edges.
//!
//! Input rings carry implicit global vertex indices (outer ring first, then
//! holes in order); output triangles refer to those indices so the caller can
//! lift the triangulation back onto the sphere using the original vertices.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Pt {
    pub x: f64,
    pub y: f64,
}

fn cross(o: &Pt, a: &Pt, b: &Pt) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Inclusive point-in-triangle test (boundary counts as inside).
fn point_in_triangle(a: &Pt, b: &Pt, c: &Pt, p: &Pt) -> bool {
    let d1 = cross(a, b, p);
    let d2 = cross(b, c, p);
    let d3 = cross(c, a, p);
    (d1 >= 0.0 && d2 >= 0.0 && d3 >= 0.0) || (d1 <= 0.0 && d2 <= 0.0 && d3 <= 0.0)
}

fn strictly_in_triangle(a: &Pt, b: &Pt, c: &Pt, p: &Pt) -> bool {
    let d1 = cross(a, b, p);
    let d2 = cross(b, c, p);
    let d3 = cross(c, a, p);
    (d1 > 0.0 && d2 > 0.0 && d3 > 0.0) || (d1 < 0.0 && d2 < 0.0 && d3 < 0.0)
}

/// Proper or improper intersection of closed segments, excluding the case of
/// a shared endpoint (callers filter adjacency themselves).
pub(crate) fn segments_intersect(a: &Pt, b: &Pt, c: &Pt, d: &Pt) -> bool {
    let d1 = cross(c, d, a);
    let d2 = cross(c, d, b);
    let d3 = cross(a, b, c);
    let d4 = cross(a, b, d);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: &Pt, q: &Pt, r: &Pt| -> bool {
        cross(p, q, r) == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(c, d, a) || on(c, d, b) || on(a, b, c) || on(a, b, d)
}

/// Crossing-number point-in-ring test.
pub(crate) fn point_in_ring(p: &Pt, ring: &[Pt]) -> bool {
    let n = ring.len();
    let mut inside = false;
    let mut j = n - 1;
    for i in 0..n {
        let (a, b) = (&ring[i], &ring[j]);
        if (a.y > p.y) != (b.y > p.y) {
            let xi = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if p.x < xi {
                inside = !inside;
            }
        }
        j = i;
    }
    inside
}

#[derive(Clone, Copy)]
struct Node {
    /// Global vertex index (stable across bridge duplication).
    vid: usize,
    p: Pt,
    prev: usize,
    next: usize,
    alive: bool,
}

struct Ring {
    nodes: Vec<Node>,
}

impl Ring {
    fn link(&mut self, a: usize, b: usize) {
        self.nodes[a].next = b;
        self.nodes[b].prev = a;
    }

    fn push(&mut self, vid: usize, p: Pt) -> usize {
        let id = self.nodes.len();
        self.nodes.push(Node {
            vid,
            p,
            prev: id,
            next: id,
            alive: true,
        });
        id
    }
}

/// Triangulates a polygon given as rings of planar points: `rings[0]` is the
/// outer ring (counterclockwise), the rest are holes (clockwise).
pub(crate) fn triangulate(rings: &[Vec<Pt>]) -> Result<Vec<[usize; 3]>> {
    let outer = &rings[0];
    let mut ring = Ring { nodes: Vec::new() };
    let mut head = 0;
    let mut base = 0usize;
    for (i, p) in outer.iter().enumerate() {
        let id = ring.push(i, *p);
        if i > 0 {
            ring.link(id - 1, id);
        } else {
            head = id;
        }
    }
    let last = ring.nodes.len() - 1;
    ring.link(last, head);
    base += outer.len();

    // Join holes one by one, rightmost-first, each via a bridge to the
    // current boundary (Eberly's max-x visibility construction).
    let mut holes: Vec<(usize, &Vec<Pt>)> = rings.iter().skip(1).map(|h| (base, h)).collect();
    {
        let mut b = base;
        for item in &mut holes {
            item.0 = b;
            b += item.1.len();
        }
    }
    holes.sort_by(|a, b| {
        let ax = a.1.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        let bx = b.1.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max);
        bx.partial_cmp(&ax).unwrap_or(std::cmp::Ordering::Equal)
    });
    for (hole_base, hole) in holes {
        head = splice_hole(&mut ring, head, hole_base, hole)?;
    }

    let count = ring.nodes.iter().filter(|n| n.alive).count();
    clip_ears(&mut ring, head, count)
}

/// Connects a hole into the boundary ring, returning a valid head node.
fn splice_hole(ring: &mut Ring, head: usize, hole_base: usize, hole: &[Pt]) -> Result<usize> {
    // Hole vertex of maximum x (ties: maximum y).
    let mut mi = 0;
    for (i, p) in hole.iter().enumerate() {
        let m = &hole[mi];
        if p.x > m.x || (p.x == m.x && p.y > m.y) {
            mi = i;
        }
    }
    let m = hole[mi];

    // Closest boundary intersection of the ray from m in +x direction.
    let mut best: Option<(f64, usize)> = None; // (x of intersection, edge start node)
    let mut i = head;
    loop {
        let a = ring.nodes[i];
        let b = ring.nodes[a.next];
        // Half-open rule avoids double-counting vertices on the ray.
        if (a.p.y <= m.y && b.p.y > m.y) || (b.p.y <= m.y && a.p.y > m.y) {
            let t = (m.y - a.p.y) / (b.p.y - a.p.y);
            let xi = a.p.x + t * (b.p.x - a.p.x);
            if xi >= m.x && best.map_or(true, |(bx, _)| xi < bx) {
                best = Some((xi, i));
            }
        }
        i = a.next;
        if i == head {
            break;
        }
    }
    let (ix, edge_start) = best.ok_or_else(|| {
        Error::InvalidPolygon("hole is not horizontally visible from the outer boundary".into())
    })?;
    let ipt = Pt { x: ix, y: m.y };

    // Candidate bridge endpoint: the endpoint of the hit edge with larger x.
    let (ea, eb) = (edge_start, ring.nodes[edge_start].next);
    let mut bridge = if ring.nodes[ea].p.x > ring.nodes[eb].p.x {
        ea
    } else {
        eb
    };
    // A reflex vertex inside triangle (m, i, bridge) would make the candidate
    // invisible; take the one minimizing the angle to the ray instead.
    let bp = ring.nodes[bridge].p;
    let mut best_metric: Option<(f64, f64)> = None;
    let mut j = head;
    loop {
        let n = ring.nodes[j];
        let is_corner = n.p == m || n.p == ipt || n.p == bp;
        if !is_corner && point_in_triangle(&m, &ipt, &bp, &n.p) {
            let reflex = cross(&ring.nodes[n.prev].p, &n.p, &ring.nodes[n.next].p) < 0.0;
            if reflex {
                let dx = n.p.x - m.x;
                let dy = (n.p.y - m.y).abs();
                let tan = if dx > 0.0 { dy / dx } else { f64::INFINITY };
                let d2 = dx * dx + dy * dy;
                if best_metric.map_or(true, |bm| (tan, d2) < bm) {
                    best_metric = Some((tan, d2));
                    bridge = j;
                }
            }
        }
        j = n.next;
        if j == head {
            break;
        }
    }

    // Splice: bridge -> m -> (hole cycle) -> m' -> bridge' -> old successor.
    let succ = ring.nodes[bridge].next;
    let m_id = ring.push(hole_base + mi, m);
    ring.link(bridge, m_id);
    let mut prev = m_id;
    for k in 1..hole.len() {
        let idx = (mi + k) % hole.len();
        let id = ring.push(hole_base + idx, hole[idx]);
        ring.link(prev, id);
        prev = id;
    }
    let m_twin = ring.push(hole_base + mi, m);
    ring.link(prev, m_twin);
    let bridge_twin = ring.push(ring.nodes[bridge].vid, ring.nodes[bridge].p);
    ring.link(m_twin, bridge_twin);
    ring.link(bridge_twin, succ);
    Ok(bridge)
}

fn clip_ears(ring: &mut Ring, start: usize, mut remaining: usize) -> Result<Vec<[usize; 3]>> {
    let mut tris = Vec::with_capacity(remaining.saturating_sub(2));
    let mut cur = start;
    let mut misses = 0usize;
    let mut relaxed = false;
    while remaining > 3 {
        let node = ring.nodes[cur];
        let (pi, ni) = (node.prev, node.next);
        let (p, q, r) = (ring.nodes[pi].p, node.p, ring.nodes[ni].p);
        let convex = cross(&p, &q, &r) > 0.0;
        let mut is_ear = convex;
        if convex {
            let mut j = ring.nodes[ni].next;
            while j != pi {
                let cand = ring.nodes[j];
                let blocking = if relaxed {
                    strictly_in_triangle(&p, &q, &r, &cand.p)
                } else {
                    let reflex =
                        cross(&ring.nodes[cand.prev].p, &cand.p, &ring.nodes[cand.next].p) <= 0.0;
                    reflex && point_in_triangle(&p, &q, &r, &cand.p)
                };
                if blocking {
                    is_ear = false;
                    break;
                }
                j = cand.next;
            }
        }
        if is_ear {
            tris.push(rotate_min([ring.nodes[pi].vid, node.vid, ring.nodes[ni].vid]));
            ring.nodes[cur].alive = false;
            ring.link(pi, ni);
            remaining -= 1;
            misses = 0;
            relaxed = false;
            cur = ni;
        } else {
            cur = ni;
            misses += 1;
            if misses > remaining {
                if !relaxed {
                    // Bridge twins can block every strict ear; retry with the
                    // boundary-exclusive containment test before giving up.
                    relaxed = true;
                    misses = 0;
                } else {
                    return Err(Error::InvalidPolygon(
                        "ear clipping failed; boundary is not simple".into(),
                    ));
                }
            }
        }
    }
    let a = ring.nodes[cur];
    tris.push(rotate_min([ring.nodes[a.prev].vid, a.vid, ring.nodes[a.next].vid]));
    Ok(tris)
}

/// Cyclic rotation putting the smallest vertex index first; preserves
/// orientation and makes the output independent of the clip cursor.
fn rotate_min(t: [usize; 3]) -> [usize; 3] {
    if t[0] <= t[1] && t[0] <= t[2] {
        t
    } else if t[1] <= t[2] {
        [t[1], t[2], t[0]]
    } else {
        [t[2], t[0], t[1]]
    }
}
