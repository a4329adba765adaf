//! Weighted path traces over bag vertices.
//!
//! Inside the solver, each monochromatic fusable path is summarized by the
//! bag vertices it visits. Runs of forgotten interior vertices collapse into
//! edge weights, and forgotten segments hanging off the ends collapse into
//! the two dangle lengths. Only distances survive: once a path end leaves
//! every bag it can never gain a neighbor again, so its identity is
//! irrelevant.

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("trace path needs at least one vertex")]
    Empty,
    #[error("vertex {0} repeated on trace path")]
    RepeatedVertex(usize),
    #[error("expected {expected} weights for {vertices} vertices, got {got}")]
    WeightCountMismatch {
        vertices: usize,
        expected: usize,
        got: usize,
    },
    #[error("trace weights must be positive")]
    ZeroWeight,
    #[error("weight-1 segment between {u} and {v} requires a graph edge")]
    MissingEdge { u: usize, v: usize },
    #[error("total length {total} exceeds k = {k}")]
    TooLong { total: u64, k: u32 },
}

/// A path whose interior may pass through forgotten vertices. `weights[i]`
/// counts graph edges between `vertices[i]` and `vertices[i+1]`; the dangles
/// count edges hanging past the first and last bag vertex.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TracePath {
    vertices: Vec<usize>,
    weights: Vec<u32>,
    left_dangle: u32,
    right_dangle: u32,
}

/// Outcome of removing a bag vertex from its trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Shrunk {
    Path(TracePath),
    /// The path lost its last bag vertex. It already satisfies the length
    /// bound and can never be extended, so callers drop it.
    Completed,
}

impl TracePath {
    /// Validates and canonicalizes a trace path. A weight of 1 claims a
    /// direct graph edge between consecutive bag vertices, so it is checked
    /// against `g`; larger weights pass through forgotten vertices that no
    /// longer constrain anything beyond their count.
    pub fn new(
        vertices: Vec<usize>,
        weights: Vec<u32>,
        dangles: (u32, u32),
        g: &Graph,
        k: u32,
    ) -> Result<TracePath, TraceError> {
        if vertices.is_empty() {
            return Err(TraceError::Empty);
        }
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(TraceError::RepeatedVertex(w[0]));
            }
        }
        if weights.len() != vertices.len() - 1 {
            return Err(TraceError::WeightCountMismatch {
                vertices: vertices.len(),
                expected: vertices.len() - 1,
                got: weights.len(),
            });
        }
        if weights.contains(&0) {
            return Err(TraceError::ZeroWeight);
        }
        for (i, &w) in weights.iter().enumerate() {
            if w == 1 && !g.has_edge(vertices[i], vertices[i + 1]) {
                return Err(TraceError::MissingEdge {
                    u: vertices[i],
                    v: vertices[i + 1],
                });
            }
        }
        let total =
            dangles.0 as u64 + dangles.1 as u64 + weights.iter().map(|&w| w as u64).sum::<u64>();
        if total > k as u64 {
            return Err(TraceError::TooLong { total, k });
        }
        let mut path = TracePath {
            vertices,
            weights,
            left_dangle: dangles.0,
            right_dangle: dangles.1,
        };
        path.canonicalize();
        Ok(path)
    }

    pub fn singleton(v: usize) -> TracePath {
        TracePath {
            vertices: vec![v],
            weights: Vec::new(),
            left_dangle: 0,
            right_dangle: 0,
        }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn dangles(&self) -> (u32, u32) {
        (self.left_dangle, self.right_dangle)
    }

    pub fn total_length(&self) -> u64 {
        self.left_dangle as u64
            + self.right_dangle as u64
            + self.weights.iter().map(|&w| w as u64).sum::<u64>()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    /// First and last bag vertex (equal for singletons).
    pub fn ends(&self) -> (usize, usize) {
        (self.vertices[0], *self.vertices.last().unwrap())
    }

    /// Removes `v` from the path. Interior removal merges the two incident
    /// weights; end removal absorbs the incident weight into the dangle on
    /// that side. Total length is preserved in every case.
    pub fn shrink_vertex(&self, v: usize) -> Shrunk {
        let pos = self
            .vertices
            .iter()
            .position(|&u| u == v)
            .unwrap_or_else(|| panic!("vertex {v} not on trace path"));
        if self.vertices.len() == 1 {
            return Shrunk::Completed;
        }
        let mut vertices = self.vertices.clone();
        let mut weights = self.weights.clone();
        let mut left = self.left_dangle;
        let mut right = self.right_dangle;
        vertices.remove(pos);
        if pos == 0 {
            left = left.saturating_add(weights.remove(0));
        } else if pos == self.vertices.len() - 1 {
            right = right.saturating_add(weights.pop().unwrap());
        } else {
            let merged = weights[pos - 1].saturating_add(weights[pos]);
            weights[pos - 1] = merged;
            weights.remove(pos);
        }
        let mut path = TracePath {
            vertices,
            weights,
            left_dangle: left,
            right_dangle: right,
        };
        path.canonicalize();
        Shrunk::Path(path)
    }

    /// Orients the path so that the (vertex sequence, dangle pair) tuple is
    /// lexicographically smallest. Reversal is the only symmetry a path has,
    /// so this makes structural equality coincide with semantic equality.
    fn canonicalize(&mut self) {
        let forward = (&self.vertices[..], (self.left_dangle, self.right_dangle));
        let rev: Vec<usize> = self.vertices.iter().rev().copied().collect();
        let backward = (&rev[..], (self.right_dangle, self.left_dangle));
        if backward < forward {
            self.vertices = rev;
            self.weights.reverse();
            std::mem::swap(&mut self.left_dangle, &mut self.right_dangle);
        }
    }

    /// Rebuilds from parts without the graph edge check, canonicalizing.
    /// For solver-internal merges whose segments are already validated.
    pub(crate) fn from_parts_unchecked(
        vertices: Vec<usize>,
        weights: Vec<u32>,
        dangles: (u32, u32),
    ) -> TracePath {
        debug_assert_eq!(weights.len() + 1, vertices.len());
        debug_assert!(weights.iter().all(|&w| w > 0));
        let mut path = TracePath {
            vertices,
            weights,
            left_dangle: dangles.0,
            right_dangle: dangles.1,
        };
        path.canonicalize();
        path
    }
}
