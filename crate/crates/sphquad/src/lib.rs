//! Cubature and hyperinterpolation on spherical polygons of the unit sphere.
//!
//! The crate builds low-cardinality positive-interior (PI-type) cubature
//! rules of prescribed near-algebraic degree over spherical polygons with
//! geodesic edges, compresses them to at most `(n+1)^2` nodes by
//! Caratheodory-Tchakaloff extraction, and uses them to construct discretely
//! orthonormal polynomial bases and four hyperinterpolation operators
//! (classical, filtered, Lasso, hybrid) for function reconstruction from
//! exact or noisy samples.

pub mod error;
pub mod geom;
pub mod quad1d;
pub mod polyrule;
pub mod rule;
pub mod sector;
pub mod trirule;
pub mod adaptive;

pub use error::{Error, Result};
