//! Instance text format, geometric instance generation, and per-instance
//! statistics.
//!
//! The file format is line-oriented ASCII: a header `p kpath <n> <m> <k>`,
//! then one `e <u> <v> <f>` line per edge with `u < v` and `f` 1 when the
//! edge is fusable. `c` lines are comments. Vertices are 0-based.
//!
//! Generated instances model via layouts: points snapped to a pitch grid,
//! conflicts between points closer than the lithography distance, fusable
//! conflicts those whose distance also reaches the lower end of the
//! correction window.

use std::collections::HashMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::clique::max_clique;
use crate::decomp::{heuristic_decompose, Strategy};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    /// Default path-length budget stored with the instance; callers may
    /// override it.
    pub k: u32,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: malformed header: {msg}")]
    BadHeader { line: usize, msg: String },
    #[error("line {line}: malformed edge line: {msg}")]
    BadEdge { line: usize, msg: String },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: duplicate edge ({u}, {v})")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("line {line}: vertex {v} out of range for n = {n}")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("line {line}: unrecognized line kind {kind:?}")]
    UnknownLine { line: usize, kind: String },
    #[error("header promises {expected} edges, file has {found}")]
    EdgeCountMismatch { expected: usize, found: usize },
}

/// Parses the instance format. Errors carry 1-based line numbers.
pub fn parse_instance(text: &str) -> Result<Instance, ParseError> {
    let mut header: Option<(usize, usize, u32)> = None;
    let mut edges: Vec<(usize, usize, bool)> = Vec::new();
    let mut seen: HashMap<(usize, usize), ()> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        match tokens[0] {
            "p" => {
                if header.is_some() {
                    return Err(ParseError::BadHeader {
                        line,
                        msg: "second header".into(),
                    });
                }
                if tokens.len() != 5 || tokens[1] != "kpath" {
                    return Err(ParseError::BadHeader {
                        line,
                        msg: format!("expected `p kpath <n> <m> <k>`, got {trimmed:?}"),
                    });
                }
                let n = tokens[2].parse().map_err(|_| ParseError::BadHeader {
                    line,
                    msg: format!("bad vertex count {:?}", tokens[2]),
                })?;
                let m = tokens[3].parse().map_err(|_| ParseError::BadHeader {
                    line,
                    msg: format!("bad edge count {:?}", tokens[3]),
                })?;
                let k = tokens[4].parse().map_err(|_| ParseError::BadHeader {
                    line,
                    msg: format!("bad k {:?}", tokens[4]),
                })?;
                header = Some((n, m, k));
            }
            "e" => {
                let (n, _, _) = header.ok_or(ParseError::BadEdge {
                    line,
                    msg: "edge before header".into(),
                })?;
                if tokens.len() != 4 {
                    return Err(ParseError::BadEdge {
                        line,
                        msg: format!("expected `e <u> <v> <f>`, got {trimmed:?}"),
                    });
                }
                let mut ends = [0usize; 2];
                for (slot, tok) in ends.iter_mut().zip(&tokens[1..3]) {
                    *slot = tok.parse().map_err(|_| ParseError::BadEdge {
                        line,
                        msg: format!("bad endpoint {tok:?}"),
                    })?;
                }
                let [u, v] = ends;
                let f = match tokens[3] {
                    "0" => false,
                    "1" => true,
                    other => {
                        return Err(ParseError::BadEdge {
                            line,
                            msg: format!("fusable flag must be 0 or 1, got {other:?}"),
                        })
                    }
                };
                if u == v {
                    return Err(ParseError::SelfLoop { line, v: u });
                }
                if u > v {
                    return Err(ParseError::BadEdge {
                        line,
                        msg: format!("endpoints must satisfy u < v, got {u} > {v}"),
                    });
                }
                for x in [u, v] {
                    if x >= n {
                        return Err(ParseError::VertexOutOfRange { line, v: x, n });
                    }
                }
                if seen.insert((u, v), ()).is_some() {
                    return Err(ParseError::DuplicateEdge { line, u, v });
                }
                edges.push((u, v, f));
            }
            kind => {
                return Err(ParseError::UnknownLine {
                    line,
                    kind: kind.to_string(),
                });
            }
        }
    }
    let (n, m, k) = header.ok_or(ParseError::BadHeader {
        line: 0,
        msg: "missing header".into(),
    })?;
    if edges.len() != m {
        return Err(ParseError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    let graph = Graph::new(n, &edges).expect("per-line validation covers graph construction");
    Ok(Instance { graph, k })
}

/// Canonical text form: header, then edges sorted with `u < v`.
pub fn serialize_instance(inst: &Instance) -> String {
    let g = &inst.graph;
    let mut out = format!("p kpath {} {} {}\n", g.n(), g.m(), inst.k);
    for &(u, v, f) in g.edges() {
        out.push_str(&format!("e {} {} {}\n", u, v, f as u8));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    /// Number of points to place.
    pub n: usize,
    /// Region extent in length units; points live on the pitch grid inside.
    pub region_width: u32,
    pub region_height: u32,
    /// Grid snap; also the minimum pairwise distance.
    pub pitch: u32,
    /// Conflict threshold: edge iff squared distance <= d_lith^2.
    pub d_lith: u32,
    /// Lower end of the correction window: fusable iff distance also
    /// >= d_dsa_min. Zero makes every conflict fusable.
    pub d_dsa_min: u32,
    pub seed: u64,
}

impl GenParams {
    /// Calibrated defaults for an n-point instance: density tuned so the
    /// bulk of instances land at clique number 3, max degree 3 to 5, and
    /// heuristic width 2 to 3.
    pub fn for_n(n: usize, seed: u64) -> GenParams {
        // Twelve grid nodes per point on the offset-row grid: dense
        // enough that triangles and degree-3 vertices appear, sparse
        // enough to keep the width at 2 or 3.
        let side_nodes = ((n as f64 * 12.0).sqrt().ceil() as u32).max(2);
        let pitch = 8;
        GenParams {
            n,
            region_width: side_nodes * pitch,
            region_height: side_nodes * pitch,
            pitch,
            // Covers the six nearest offset-grid gaps (squared distances
            // 64 and 80) and nothing further; 4-cliques are then
            // geometrically impossible, matching how tight via packings
            // behave.
            d_lith: 11,
            d_dsa_min: 8,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.pitch == 0 {
            return Err(GenError::BadParams("pitch must be positive".into()));
        }
        if self.d_dsa_min > self.d_lith {
            return Err(GenError::BadParams(
                "correction window lower end exceeds the conflict distance".into(),
            ));
        }
        Ok(())
    }
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams::for_n(1000, 0)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("region too small: placed {placed} of {wanted} points")]
    RegionTooSmall { placed: usize, wanted: usize },
}

/// A generated instance together with its point layout, one point per
/// vertex in vertex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub graph: Graph,
    pub points: Vec<(u32, u32)>,
    pub params: GenParams,
}

/// Places points on an offset-row pitch grid (odd rows shifted by half a
/// pitch, the usual dense via packing) by rejection sampling, then derives
/// conflict and fusable edges from exact squared distances. Deterministic
/// for a given seed.
pub fn generate(params: &GenParams) -> Result<Layout, GenError> {
    params.validate()?;
    let nodes_x = params.region_width / params.pitch + 1;
    let nodes_y = params.region_height / params.pitch + 1;
    if (nodes_x as u64) * (nodes_y as u64) < params.n as u64 {
        return Err(GenError::RegionTooSmall {
            placed: 0,
            wanted: params.n,
        });
    }
    let coords = |gx: u32, gy: u32| -> (u32, u32) {
        let shift = if gy % 2 == 1 { params.pitch / 2 } else { 0 };
        (gx * params.pitch + shift, gy * params.pitch)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut occupied: HashMap<(u32, u32), usize> = HashMap::new();
    let mut cells: Vec<(u32, u32)> = Vec::with_capacity(params.n);
    let mut attempts = 0usize;
    let budget = 60 * params.n + 1000;
    while cells.len() < params.n {
        attempts += 1;
        if attempts > budget {
            return Err(GenError::RegionTooSmall {
                placed: cells.len(),
                wanted: params.n,
            });
        }
        let gx = rng.gen_range(0..nodes_x);
        let gy = rng.gen_range(0..nodes_y);
        if occupied.contains_key(&(gx, gy)) {
            continue;
        }
        occupied.insert((gx, gy), cells.len());
        cells.push((gx, gy));
    }
    let points: Vec<(u32, u32)> = cells.iter().map(|&(gx, gy)| coords(gx, gy)).collect();

    // Conflicts only reach a bounded grid neighborhood; scan those offsets.
    let reach = (params.d_lith / params.pitch + 1) as i64;
    let lith2 = (params.d_lith as i64).pow(2);
    let dsa2 = (params.d_dsa_min as i64).pow(2);
    let mut edges: Vec<(usize, usize, bool)> = Vec::new();
    for (v, &(gx, gy)) in cells.iter().enumerate() {
        let (x, y) = points[v];
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if dx == 0 && dy == 0 {
                    continue;
                }
                let (ox, oy) = (gx as i64 + dx, gy as i64 + dy);
                if ox < 0 || oy < 0 {
                    continue;
                }
                let Some(&u) = occupied.get(&(ox as u32, oy as u32)) else {
                    continue;
                };
                if u <= v {
                    continue; // each pair once
                }
                let (ux, uy) = points[u];
                let d2 = (ux as i64 - x as i64).pow(2) + (uy as i64 - y as i64).pow(2);
                if d2 <= lith2 {
                    edges.push((v, u, d2 >= dsa2));
                }
            }
        }
    }
    let graph = Graph::new(params.n, &edges).expect("generator emits simple edges");
    Ok(Layout {
        graph,
        points,
        params: *params,
    })
}

/// Layout sidecar: one `<x> <y>` line per vertex.
pub fn serialize_layout(layout: &Layout) -> String {
    let mut out = String::new();
    for &(x, y) in &layout.points {
        out.push_str(&format!("{x} {y}\n"));
    }
    out
}

/// Deterministic width-2 family for scaling runs: a chain of triangles
/// sharing single vertices, padded with a pendant vertex when `n` is even.
pub fn chain_graph(n: usize) -> Graph {
    let mut edges: Vec<(usize, usize, bool)> = Vec::new();
    let mut v = 0;
    while v + 2 < n {
        edges.push((v, v + 1, true));
        edges.push((v, v + 2, true));
        edges.push((v + 1, v + 2, true));
        v += 2;
    }
    if v + 1 < n {
        edges.push((v, v + 1, true));
    }
    Graph::new(n, &edges).expect("chain family is simple")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceStats {
    pub n: usize,
    pub m: usize,
    pub f_count: usize,
    /// Clique number; a lower bound when `omega_exact` is false.
    pub omega: usize,
    pub omega_exact: bool,
    pub max_degree: usize,
    /// Heuristic decomposition width (best of both orderings).
    pub width: usize,
    pub components: usize,
    pub max_component: usize,
}

/// Computes the summary statistics used in reports and calibration.
pub fn stats(g: &Graph) -> InstanceStats {
    let clique = max_clique(g);
    let width = heuristic_decompose(g, Strategy::BestOfBoth).width();
    // Any clique must appear inside one bag, so this can only fail if the
    // clique search or the decomposition is broken.
    assert!(
        clique.size.saturating_sub(1) <= width,
        "clique of size {} exceeds width {} + 1",
        clique.size,
        width
    );
    let comps = g.connected_components();
    InstanceStats {
        n: g.n(),
        m: g.m(),
        f_count: g.f_count(),
        omega: clique.size,
        omega_exact: clique.exact,
        max_degree: g.max_degree(),
        width,
        components: comps.len(),
        max_component: comps.iter().map(|(cg, _)| cg.n()).max().unwrap_or(0),
    }
}
