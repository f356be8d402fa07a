use serde::Serialize;

use crate::error::{Error, Result};
use crate::PlanePoint;

/// A polygonal curve given by its vertices.
///
/// Paths built with [`PolylinePath::new`] have at least two vertices and no
/// repeated consecutive vertex. [`PolylinePath::point`] builds the degenerate
/// one-vertex path returned for zero-distance queries.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolylinePath {
    vertices: Vec<PlanePoint>,
}

impl PolylinePath {
    pub fn new(vertices: Vec<PlanePoint>) -> Result<PolylinePath> {
        if vertices.len() < 2 {
            return Err(Error::InvalidPath("a path needs at least two vertices".into()));
        }
        if vertices.iter().any(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::InvalidPath("non-finite vertex".into()));
        }
        if vertices.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPath("repeated consecutive vertex".into()));
        }
        Ok(PolylinePath { vertices })
    }

    pub fn segment(a: PlanePoint, b: PlanePoint) -> Result<PolylinePath> {
        PolylinePath::new(vec![a, b])
    }

    pub fn point(z: PlanePoint) -> PolylinePath {
        PolylinePath { vertices: vec![z] }
    }

    /// Drop repeated consecutive vertices before validating.
    pub fn from_vertices_dedup(mut vertices: Vec<PlanePoint>) -> Result<PolylinePath> {
        vertices.dedup();
        if vertices.len() == 1 {
            return Ok(PolylinePath::point(vertices[0]));
        }
        PolylinePath::new(vertices)
    }

    pub fn vertices(&self) -> &[PlanePoint] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 2
    }

    pub fn start(&self) -> PlanePoint {
        self.vertices[0]
    }

    pub fn end(&self) -> PlanePoint {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn segments(&self) -> impl Iterator<Item = (PlanePoint, PlanePoint)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn euclidean_length(&self) -> f64 {
        self.segments().map(|(a, b)| (b - a).norm()).sum()
    }

    /// Complex conjugate of every vertex.
    pub fn reflect(&self) -> PolylinePath {
        PolylinePath {
            vertices: self.vertices.iter().map(|v| v.conj()).collect(),
        }
    }

    pub fn reversed(&self) -> PolylinePath {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        PolylinePath { vertices }
    }

    pub fn scaled(&self, t: f64) -> PolylinePath {
        PolylinePath {
            vertices: self.vertices.iter().map(|v| v * t).collect(),
        }
    }

    /// `self` followed by `other`; the paths must share the junction vertex.
    pub fn concat(&self, other: &PolylinePath) -> Result<PolylinePath> {
        if self.end() != other.start() {
            return Err(Error::InvalidPath("paths do not share a junction vertex".into()));
        }
        let mut v = self.vertices.clone();
        v.extend_from_slice(&other.vertices[1..]);
        PolylinePath::from_vertices_dedup(v)
    }

    /// `count` points spaced evenly by Euclidean arc length, ends included.
    pub fn sample_uniform(&self, count: usize) -> Vec<PlanePoint> {
        if self.is_degenerate() || count < 2 {
            return vec![self.start(); count.max(1)];
        }
        let total = self.euclidean_length();
        let cum = self.cumulative_lengths();
        (0..count)
            .map(|k| {
                let s = total * k as f64 / (count - 1) as f64;
                point_at(&self.vertices, &cum, s)
            })
            .collect()
    }

    /// Running Euclidean arc length at each vertex.
    pub fn cumulative_lengths(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.vertices.len());
        let mut acc = 0.0;
        out.push(0.0);
        for (a, b) in self.segments() {
            acc += (b - a).norm();
            out.push(acc);
        }
        out
    }
}

/// Point at arc length `s` along a vertex chain with cumulative lengths `cum`.
pub(crate) fn point_at(vertices: &[PlanePoint], cum: &[f64], s: f64) -> PlanePoint {
    let last = vertices.len() - 1;
    if s <= 0.0 {
        return vertices[0];
    }
    if s >= cum[last] {
        return vertices[last];
    }
    let i = cum.partition_point(|&c| c <= s).min(last);
    let (a, b) = (vertices[i - 1], vertices[i]);
    let seg = cum[i] - cum[i - 1];
    if seg == 0.0 {
        return a;
    }
    let t = (s - cum[i - 1]) / seg;
    a + (b - a) * t
}
