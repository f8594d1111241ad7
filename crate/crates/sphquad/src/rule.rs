//! Cubature rules on the sphere: positive weights attached to interior nodes,
//! with a declared near-algebraic degree of exactness, plus the JSON
//! persistence format shared by the rule-building pipeline.

use crate::error::{Error, Result};
use crate::geom::SpherePoint;
use serde::{Deserialize, Serialize};

/// A positive-interior cubature rule over a spherical region.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CubatureRule {
    degree: usize,
    nodes: Vec<SpherePoint>,
    weights: Vec<f64>,
    /// l2 residual of the spherical-harmonics moment-matching system; zero
    /// for freshly assembled rules, filled by validation or compression.
    moment_residual: f64,
    /// Surface area of the source region (sum of Girard excesses).
    region_area: f64,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    compressed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    parent_cardinality: Option<usize>,
}

impl CubatureRule {
    pub fn new(
        degree: usize,
        nodes: Vec<SpherePoint>,
        weights: Vec<f64>,
        region_area: f64,
    ) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: nodes.len(),
                got: weights.len(),
            });
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidParameter(
                "cubature weights must be strictly positive and finite".into(),
            ));
        }
        Ok(Self {
            degree,
            nodes,
            weights,
            moment_residual: 0.0,
            region_area,
            compressed: false,
            parent_cardinality: None,
        })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn nodes(&self) -> &[SpherePoint] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn moment_residual(&self) -> f64 {
        self.moment_residual
    }

    pub fn region_area(&self) -> f64 {
        self.region_area
    }

    pub fn is_compressed(&self) -> bool {
        self.compressed
    }

    pub fn parent_cardinality(&self) -> Option<usize> {
        self.parent_cardinality
    }

    pub fn sum_weights(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Applies the rule to a function of sphere points.
    pub fn integrate(&self, f: impl Fn(&SpherePoint) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(p, &w)| w * f(p))
            .sum()
    }

    /// Concatenates per-triangle rules into a composite rule (additivity of
    /// integration); ordering of the parts is preserved.
    pub fn concat(degree: usize, parts: Vec<CubatureRule>) -> Result<Self> {
        let mut nodes = Vec::new();
        let mut weights = Vec::new();
        let mut area = 0.0;
        for part in parts {
            nodes.extend(part.nodes);
            weights.extend(part.weights);
            area += part.region_area;
        }
        Self::new(degree, nodes, weights, area)
    }

    pub(crate) fn set_moment_residual(&mut self, r: f64) {
        self.moment_residual = r;
    }

    pub(crate) fn mark_compressed(&mut self, parent_cardinality: usize) {
        self.compressed = true;
        self.parent_cardinality = Some(parent_cardinality);
    }

    /// Serializes to the documented JSON schema. `f64` values round-trip
    /// exactly (shortest-representation encoding).
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("rule serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let rule: CubatureRule =
            serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        if rule.nodes.len() != rule.weights.len() {
            return Err(Error::LengthMismatch {
                expected: rule.nodes.len(),
                got: rule.weights.len(),
            });
        }
        if rule.weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::Parse("rule has nonpositive weights".into()));
        }
        Ok(rule)
    }

    /// SHA-256 of the canonical JSON encoding, as a hex string.
    pub fn content_hash(&self) -> String {
        use sha2::{Digest, Sha256};
        let digest = Sha256::digest(self.to_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
