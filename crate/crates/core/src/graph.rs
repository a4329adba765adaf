//! Conflict graph with a fusable edge subset.
//!
//! A vertex coloring is feasible when every color class induces a disjoint
//! union of paths made of fusable edges, each path carrying at most `k`
//! edges. [`Graph::is_valid_color_class`] checks that condition for a single
//! class and reports the first violation found.

use std::collections::VecDeque;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
}

/// Undirected simple graph. Every edge carries a flag telling whether the
/// two endpoints may be fused into a common color class (the F subset).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize, bool)>,
    adj: Vec<Vec<(usize, bool)>>,
}

impl Graph {
    /// Builds a graph from `(u, v, fusable)` triples. Endpoint order within a
    /// triple does not matter; duplicates and self-loops are rejected.
    pub fn new(n: usize, edges: &[(usize, usize, bool)]) -> Result<Graph, GraphError> {
        let mut canon: Vec<(usize, usize, bool)> = Vec::with_capacity(edges.len());
        for &(a, b, f) in edges {
            for x in [a, b] {
                if x >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: x, n });
                }
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            canon.push((a.min(b), a.max(b), f));
        }
        canon.sort_unstable();
        for w in canon.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(GraphError::DuplicateEdge(w[0].0, w[0].1));
            }
        }
        let mut adj = vec![Vec::new(); n];
        for &(u, v, f) in &canon {
            adj[u].push((v, f));
            adj[v].push((u, f));
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Ok(Graph {
            n,
            edges: canon,
            adj,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    /// Number of fusable edges.
    pub fn f_count(&self) -> usize {
        self.edges.iter().filter(|e| e.2).count()
    }

    /// Edges in canonical order: `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[(usize, usize, bool)] {
        &self.edges
    }

    /// Neighbors of `v` with the fusable flag, sorted by vertex id.
    pub fn neighbors(&self, v: usize) -> &[(usize, bool)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_flag(u, v).is_some()
    }

    /// `Some(true)` for a fusable edge, `Some(false)` for a conflict-only
    /// edge, `None` when `u` and `v` are not adjacent.
    pub fn edge_flag(&self, u: usize, v: usize) -> Option<bool> {
        self.adj[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| self.adj[u][i].1)
    }

    /// Checks that `class` induces a disjoint union of fusable paths with at
    /// most `k` edges each. Violations are reported deterministically: the
    /// checks run in the order non-fusable edge, degree, cycle, path length,
    /// scanning vertices in ascending order.
    pub fn is_valid_color_class(&self, class: &[usize], k: u32) -> ColorClassVerdict {
        let mut members = class.to_vec();
        members.sort_unstable();
        members.dedup();
        for &v in &members {
            assert!(v < self.n, "class vertex {v} out of range");
        }
        let in_class = |v: usize| members.binary_search(&v).is_ok();

        for &u in &members {
            for &(v, fusable) in &self.adj[u] {
                if u < v && in_class(v) && !fusable {
                    return ColorClassVerdict::invalid(ClassViolation::NonFusableEdge { u, v });
                }
            }
        }

        let induced_deg = |u: usize| self.adj[u].iter().filter(|&&(v, _)| in_class(v)).count();
        for &u in &members {
            if induced_deg(u) > 2 {
                return ColorClassVerdict::invalid(ClassViolation::DegreeExceeded { vertex: u });
            }
        }

        // Degrees are at most 2, so every component is a path or a cycle and
        // a component is a cycle exactly when #edges = #vertices.
        let mut seen = vec![false; self.n];
        for &root in &members {
            if seen[root] {
                continue;
            }
            let mut comp = Vec::new();
            let mut edge_ends = 0usize;
            let mut queue = VecDeque::from([root]);
            seen[root] = true;
            while let Some(u) = queue.pop_front() {
                comp.push(u);
                for &(v, _) in &self.adj[u] {
                    if in_class(v) {
                        edge_ends += 1;
                        if !seen[v] {
                            seen[v] = true;
                            queue.push_back(v);
                        }
                    }
                }
            }
            comp.sort_unstable();
            let edges = edge_ends / 2;
            if edges >= comp.len() {
                return ColorClassVerdict::invalid(ClassViolation::Cycle { vertices: comp });
            }
            if edges as u64 > k as u64 {
                return ColorClassVerdict::invalid(ClassViolation::PathTooLong { vertices: comp });
            }
        }
        ColorClassVerdict::valid()
    }

    /// Splits into connected components, each relabeled to `0..nᵢ−1`.
    /// The returned map sends local ids to the original ids (ascending), and
    /// components are ordered by their smallest original vertex.
    pub fn connected_components(&self) -> Vec<(Graph, Vec<usize>)> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for root in 0..self.n {
            if seen[root] {
                continue;
            }
            let mut verts = Vec::new();
            let mut queue = VecDeque::from([root]);
            seen[root] = true;
            while let Some(u) = queue.pop_front() {
                verts.push(u);
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        queue.push_back(v);
                    }
                }
            }
            verts.sort_unstable();
            let local = |g: usize| verts.binary_search(&g).unwrap();
            let edges: Vec<_> = verts
                .iter()
                .flat_map(|&u| {
                    self.adj[u]
                        .iter()
                        .filter(move |&&(v, _)| u < v)
                        .map(move |&(v, f)| (local(u), local(v), f))
                })
                .collect();
            let g = Graph::new(verts.len(), &edges).expect("component of a valid graph");
            out.push((g, verts));
        }
        out
    }

    /// Bridges of the graph that are not fusable. Removing such an edge
    /// splits its component, and the two sides only interact through the
    /// constraint that the endpoint colors differ.
    pub fn find_ef_cut_edges(&self) -> Vec<(usize, usize)> {
        let mut cut: Vec<(usize, usize)> = self
            .bridges()
            .into_iter()
            .filter(|&(u, v)| self.edge_flag(u, v) == Some(false))
            .collect();
        cut.sort_unstable();
        cut
    }

    /// All bridges, via an iterative lowpoint DFS.
    pub fn bridges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut disc = vec![usize::MAX; n];
        let mut low = vec![0usize; n];
        let mut timer = 0usize;
        let mut out = Vec::new();
        // stack entries: (vertex, parent edge as neighbor index into adj[v])
        for root in 0..n {
            if disc[root] != usize::MAX {
                continue;
            }
            let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
            disc[root] = timer;
            low[root] = timer;
            timer += 1;
            while let Some(&mut (u, parent, ref mut idx)) = stack.last_mut() {
                if *idx < self.adj[u].len() {
                    let (v, _) = self.adj[u][*idx];
                    *idx += 1;
                    if disc[v] == usize::MAX {
                        disc[v] = timer;
                        low[v] = timer;
                        timer += 1;
                        stack.push((v, u, 0));
                    } else if v != parent {
                        low[u] = low[u].min(disc[v]);
                    }
                } else {
                    stack.pop();
                    if let Some(&mut (p, _, _)) = stack.last_mut() {
                        low[p] = low[p].min(low[u]);
                        if low[u] > disc[p] {
                            out.push((p.min(u), p.max(u)));
                        }
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Why a vertex set fails to be a feasible color class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassViolation {
    /// The class induces a conflict-only edge; its endpoints can never share
    /// a color.
    NonFusableEdge { u: usize, v: usize },
    /// Some vertex has three or more same-class neighbors.
    DegreeExceeded { vertex: usize },
    /// A whole induced component forms a cycle.
    Cycle { vertices: Vec<usize> },
    /// An induced path component carries more than `k` edges.
    PathTooLong { vertices: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColorClassVerdict {
    pub valid: bool,
    pub violation: Option<ClassViolation>,
}

impl ColorClassVerdict {
    fn valid() -> Self {
        ColorClassVerdict {
            valid: true,
            violation: None,
        }
    }

    fn invalid(violation: ClassViolation) -> Self {
        ColorClassVerdict {
            valid: false,
            violation: Some(violation),
        }
    }
}
