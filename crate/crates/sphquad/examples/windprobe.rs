use sphquad::geom::{SpherePoint, SphericalTriangle};
use sphquad::trirule::{spherical_triangle_rule, inv_g_degree};
use sphquad::quad1d::{trig_gauss, gauss_legendre};
use std::time::Instant;
fn sp(x: f64, y: f64, z: f64) -> SpherePoint { SpherePoint::new(x, y, z).unwrap() }
fn main() {
    let t = SphericalTriangle::new(sp(0.02, 0.001, 0.999), sp(0.001, 0.025, 0.999), sp(-0.015, -0.01, 0.999)).unwrap();
    let k = 2000;
    let t0 = Instant::now();
    for _ in 0..k { let _ = spherical_triangle_rule(&t, 8).unwrap(); }
    println!("tiny rule n=8: {:?}/build", t0.elapsed() / k);
    let t0 = Instant::now();
    for _ in 0..k { let _ = inv_g_degree(0.001, 1e-15).unwrap(); }
    println!("inv_g tiny: {:?}", t0.elapsed() / k);
    let t0 = Instant::now();
    for _ in 0..k { let _ = trig_gauss(12, 0.01).unwrap(); }
    println!("trig_gauss(12, 0.01): {:?}", t0.elapsed() / k);
    let t0 = Instant::now();
    for _ in 0..k { let _ = gauss_legendre(8, 0.0, 1.0).unwrap(); }
    println!("gauss_legendre(8): {:?}", t0.elapsed() / k);
}
