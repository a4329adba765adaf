//! Partial solutions and the four bag procedures of the dynamic program.
//!
//! A partial solution pairs a coloring of the current bag with, per color,
//! the trace of that color class: the paths it induces on bag vertices,
//! with forgotten stretches compressed into edge weights and dangles. Two
//! partial solutions with equal canonical forms admit exactly the same
//! extensions, which is what makes table deduplication sound.

use std::collections::BTreeMap;

use crate::graph::Graph;
use crate::trace::{Shrunk, TracePath};

/// Bag coloring plus per-color traces, in canonical form. `colors` is
/// parallel to the sorted bag vertex list held by the decomposition node;
/// `paths` is sorted, and every bag vertex lies on exactly one path (whose
/// color is the color of its vertices, so paths need no color tag).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartialSolution {
    colors: Vec<u16>,
    paths: Vec<TracePath>,
}

impl PartialSolution {
    /// Builds from parts, sorting the paths. Callers are responsible for
    /// semantic validity; use [`check_invariants`] in tests.
    ///
    /// [`check_invariants`]: PartialSolution::check_invariants
    pub fn from_parts(colors: Vec<u16>, mut paths: Vec<TracePath>) -> PartialSolution {
        paths.sort_unstable();
        PartialSolution { colors, paths }
    }

    pub fn colors(&self) -> &[u16] {
        &self.colors
    }

    pub fn paths(&self) -> &[TracePath] {
        &self.paths
    }

    /// Color of bag vertex `v`. Panics if `v` is not in `bag`.
    pub fn color_of(&self, bag: &[usize], v: usize) -> u16 {
        let pos = bag.binary_search(&v).expect("vertex in bag");
        self.colors[pos]
    }

    /// Relabels colors in first-use order over bag positions. Traces carry
    /// vertices, not colors, so only the coloring changes. Two solutions
    /// normalize to the same value exactly when one is a palette
    /// permutation of the other.
    pub fn normalize_colors(&mut self) {
        let mut map: Vec<(u16, u16)> = Vec::new();
        for c in &mut self.colors {
            let to = match map.iter().find(|(from, _)| from == c) {
                Some(&(_, t)) => t,
                None => {
                    let t = map.len() as u16;
                    map.push((*c, t));
                    t
                }
            };
            *c = to;
        }
    }

    /// Exhaustive structural check used by tests: partition of the bag into
    /// monochromatic paths, length bounds, weight-1 entries backed by real
    /// fusable edges, canonical ordering.
    pub fn check_invariants(&self, bag: &[usize], g: &Graph, k: u32, l: u32) -> Result<(), String> {
        if self.colors.len() != bag.len() {
            return Err("coloring length differs from bag size".into());
        }
        if let Some(c) = self.colors.iter().find(|&&c| (c as u32) >= l) {
            return Err(format!("color {c} out of palette 0..{l}"));
        }
        let mut seen = vec![0usize; bag.len()];
        for path in &self.paths {
            let c0 = self.color_of(bag, path.vertices()[0]);
            for &v in path.vertices() {
                let pos = bag
                    .binary_search(&v)
                    .map_err(|_| format!("path vertex {v} not in bag"))?;
                seen[pos] += 1;
                if self.colors[pos] != c0 {
                    return Err(format!("path through {v} mixes colors"));
                }
            }
            if path.total_length() > k as u64 {
                return Err(format!("path too long: {}", path.total_length()));
            }
            for (i, w) in path.weights().iter().enumerate() {
                let (u, v) = (path.vertices()[i], path.vertices()[i + 1]);
                if *w == 0 {
                    return Err("zero weight".into());
                }
                if *w == 1 && g.edge_flag(u, v) != Some(true) {
                    return Err(format!("weight-1 segment ({u},{v}) is not a fusable edge"));
                }
            }
        }
        if seen.iter().any(|&s| s != 1) {
            return Err("bag vertices not partitioned by paths".into());
        }
        if !self.paths.windows(2).all(|w| w[0] < w[1]) {
            return Err("paths not sorted".into());
        }
        Ok(())
    }

    fn path_index_of(&self, v: usize) -> Option<usize> {
        self.paths.iter().position(|p| p.contains(v))
    }
}

/// Solutions for a leaf bag `{v}`: one per color, each with the singleton
/// trace.
pub fn process_leaf(v: usize, l: u32) -> Vec<PartialSolution> {
    (0..l)
        .map(|c| PartialSolution {
            colors: vec![c as u16],
            paths: vec![TracePath::singleton(v)],
        })
        .collect()
}

/// Extends every child solution by every color of `v`. `bag` is the new
/// bag (child bag plus `v`).
pub fn process_introduce(
    sols: &[PartialSolution],
    v: usize,
    bag: &[usize],
    g: &Graph,
    k: u32,
    l: u32,
) -> Vec<PartialSolution> {
    let child_bag: Vec<usize> = bag.iter().copied().filter(|&u| u != v).collect();
    assert_eq!(
        child_bag.len() + 1,
        bag.len(),
        "introduced vertex not in bag"
    );
    let mut out = Vec::new();
    for sol in sols {
        for c in 0..l {
            if let Some(ext) = introduce_one(sol, &child_bag, v, g, k, c as u16) {
                out.push(ext);
            }
        }
    }
    dedup_sorted(out)
}

/// Restricts every child solution to `bag` (child bag minus `v`),
/// shrinking `v` out of its trace path. Never rejects; collapsing
/// solutions deduplicate.
pub fn process_forget(
    sols: &[PartialSolution],
    v: usize,
    bag: &[usize],
    k: u32,
) -> Vec<PartialSolution> {
    let mut child_bag = bag.to_vec();
    let pos = child_bag.binary_search(&v).unwrap_err();
    child_bag.insert(pos, v);
    let out = sols
        .iter()
        .map(|sol| forget_one(sol, &child_bag, v, k))
        .collect();
    dedup_sorted(out)
}

/// Pairs solutions with identical bag colorings and merges their traces.
/// Pairs whose colorings disagree are skipped.
pub fn process_join(
    sols1: &[PartialSolution],
    sols2: &[PartialSolution],
    bag: &[usize],
    g: &Graph,
    k: u32,
    _l: u32,
) -> Vec<PartialSolution> {
    let mut by_coloring: BTreeMap<&[u16], Vec<&PartialSolution>> = BTreeMap::new();
    for s in sols1 {
        by_coloring.entry(s.colors()).or_default().push(s);
    }
    let mut out = Vec::new();
    for s2 in sols2 {
        if let Some(matches) = by_coloring.get(s2.colors()) {
            for s1 in matches {
                if let Some(merged) = join_pair(s1, s2, bag, g, k) {
                    out.push(merged);
                }
            }
        }
    }
    dedup_sorted(out)
}

fn dedup_sorted(mut sols: Vec<PartialSolution>) -> Vec<PartialSolution> {
    sols.sort_unstable();
    sols.dedup();
    sols
}

/// One introduce step: give `v` color `c` on top of `sol` (over
/// `child_bag`). Returns None when the extension is infeasible.
pub(crate) fn introduce_one(
    sol: &PartialSolution,
    child_bag: &[usize],
    v: usize,
    g: &Graph,
    k: u32,
    c: u16,
) -> Option<PartialSolution> {
    // Same-color neighbors of v in the bag. Any non-fusable such edge kills
    // the extension; fusable ones are attachment points.
    let mut attach: Vec<usize> = Vec::new();
    for (pos, &u) in child_bag.iter().enumerate() {
        if sol.colors[pos] == c {
            match g.edge_flag(u, v) {
                Some(true) => attach.push(u),
                Some(false) => return None,
                None => {}
            }
        }
    }
    if attach.len() > 2 {
        return None;
    }

    let new_path = match attach[..] {
        [] => TracePath::singleton(v),
        [u] => {
            let p = &sol.paths[sol.path_index_of(u).expect("colored vertex has a path")];
            let (seq, weights, far) = oriented_ending_at(p, u)?;
            if p.total_length() + 1 > k as u64 {
                return None;
            }
            let mut vs = seq;
            vs.push(v);
            let mut ws = weights;
            ws.push(1);
            TracePath::from_parts_unchecked(vs, ws, (far, 0))
        }
        [u, w] => {
            let pi = sol.path_index_of(u).expect("colored vertex has a path");
            let pj = sol.path_index_of(w).expect("colored vertex has a path");
            if pi == pj {
                // v closes the two ends of one path into a cycle.
                return None;
            }
            let (p1, p2) = (&sol.paths[pi], &sol.paths[pj]);
            if p1.total_length() + p2.total_length() + 2 > k as u64 {
                return None;
            }
            let (s1, w1, far1) = oriented_ending_at(p1, u)?;
            let (s2, w2, far2) = oriented_ending_at(p2, w)?;
            let mut vs = s1;
            vs.push(v);
            vs.extend(s2.into_iter().rev());
            let mut ws = w1;
            ws.push(1);
            ws.push(1);
            ws.extend(w2.into_iter().rev());
            TracePath::from_parts_unchecked(vs, ws, (far1, far2))
        }
        _ => unreachable!("attach capped at two"),
    };

    let ins = child_bag.binary_search(&v).unwrap_err();
    let mut colors = sol.colors.clone();
    colors.insert(ins, c);
    let mut paths: Vec<TracePath> = sol
        .paths
        .iter()
        .filter(|p| !attach.iter().any(|&u| p.contains(u)))
        .cloned()
        .collect();
    paths.push(new_path);
    paths.sort_unstable();
    Some(PartialSolution { colors, paths })
}

/// Orients `p` so it ends at `u` with a zero dangle on that side, the only
/// position a new edge may attach to. Returns (vertices, weights, far-end
/// dangle), or None when `u` is interior or its end already dangles.
fn oriented_ending_at(p: &TracePath, u: usize) -> Option<(Vec<usize>, Vec<u32>, u32)> {
    let (first, last) = p.ends();
    let (dl, dr) = p.dangles();
    if p.vertices().len() == 1 {
        // A singleton has two free slots; use whichever side is clean.
        return if dr == 0 {
            Some((p.vertices().to_vec(), Vec::new(), dl))
        } else if dl == 0 {
            Some((p.vertices().to_vec(), Vec::new(), dr))
        } else {
            None
        };
    }
    if last == u && dr == 0 {
        Some((p.vertices().to_vec(), p.weights().to_vec(), dl))
    } else if first == u && dl == 0 {
        let vs: Vec<usize> = p.vertices().iter().rev().copied().collect();
        let ws: Vec<u32> = p.weights().iter().rev().copied().collect();
        Some((vs, ws, dr))
    } else {
        None
    }
}

/// One forget step: drop `v` from the coloring and shrink it out of its
/// path. Completed singleton paths vanish with it.
pub(crate) fn forget_one(
    sol: &PartialSolution,
    child_bag: &[usize],
    v: usize,
    _k: u32,
) -> PartialSolution {
    let pos = child_bag
        .binary_search(&v)
        .expect("forgotten vertex in child bag");
    let mut colors = sol.colors.clone();
    colors.remove(pos);
    let idx = sol.path_index_of(v).expect("bag vertex has a path");
    let mut paths: Vec<TracePath> = Vec::with_capacity(sol.paths.len());
    for (i, p) in sol.paths.iter().enumerate() {
        if i != idx {
            paths.push(p.clone());
            continue;
        }
        match p.shrink_vertex(v) {
            Shrunk::Path(q) => paths.push(q),
            Shrunk::Completed => {}
        }
    }
    paths.sort_unstable();
    PartialSolution { colors, paths }
}

/// One join step: union the two trace multigraphs. An edge occurring in
/// both solutions is a single fusable bag edge only when its weight is 1
/// on both sides (weight-1 entries are real edges by invariant); any other
/// duplication is a parallel pair, i.e. a cycle. Degrees count nonzero
/// dangles. Rejects on degree overflow, cycles, or overlong paths.
pub(crate) fn join_pair(
    a: &PartialSolution,
    b: &PartialSolution,
    bag: &[usize],
    g: &Graph,
    k: u32,
) -> Option<PartialSolution> {
    debug_assert_eq!(a.colors, b.colors, "join pairs must agree on the coloring");
    let nb = bag.len();
    let local = |v: usize| bag.binary_search(&v).expect("path vertex in bag");

    // Edge -> (weight in a, weight in b); dangles per vertex.
    let mut edges: BTreeMap<(usize, usize), (Option<u32>, Option<u32>)> = BTreeMap::new();
    let mut dangles: Vec<Vec<u32>> = vec![Vec::new(); nb];
    for (which, sol) in [(0, a), (1, b)] {
        for p in &sol.paths {
            let vs = p.vertices();
            for (i, w) in p.weights().iter().enumerate() {
                let (x, y) = (local(vs[i]), local(vs[i + 1]));
                let key = (x.min(y), x.max(y));
                let slot = edges.entry(key).or_insert((None, None));
                let side = if which == 0 { &mut slot.0 } else { &mut slot.1 };
                debug_assert!(side.is_none(), "paths within one solution are disjoint");
                *side = Some(*w);
            }
            let (dl, dr) = p.dangles();
            let (first, last) = p.ends();
            if dl > 0 {
                dangles[local(first)].push(dl);
            }
            if dr > 0 {
                dangles[local(last)].push(dr);
            }
        }
    }

    let mut adj: Vec<Vec<(usize, u32)>> = vec![Vec::new(); nb];
    for (&(x, y), &(wa, wb)) in &edges {
        let w = match (wa, wb) {
            (Some(1), Some(1)) => {
                debug_assert_eq!(
                    g.edge_flag(bag[x], bag[y]),
                    Some(true),
                    "weight-1 trace edges are fusable bag edges"
                );
                1
            }
            (Some(_), Some(_)) => return None, // parallel edges form a cycle
            (Some(w), None) | (None, Some(w)) => w,
            (None, None) => unreachable!(),
        };
        adj[x].push((y, w));
        adj[y].push((x, w));
    }

    for x in 0..nb {
        if adj[x].len() + dangles[x].len() > 2 {
            return None;
        }
    }

    // Extract path components; any leftover edge-bearing vertex is on a
    // cycle.
    let mut visited = vec![false; nb];
    let mut paths: Vec<TracePath> = Vec::new();
    for start in 0..nb {
        if visited[start] || adj[start].len() == 2 {
            continue;
        }
        visited[start] = true;
        let mut vs = vec![bag[start]];
        let mut ws: Vec<u32> = Vec::new();
        let mut cur = start;
        let mut prev = usize::MAX;
        loop {
            let next = adj[cur].iter().find(|&&(t, _)| t != prev && !visited[t]);
            match next {
                Some(&(t, w)) => {
                    visited[t] = true;
                    vs.push(bag[t]);
                    ws.push(w);
                    prev = cur;
                    cur = t;
                }
                None => break,
            }
        }
        let dl = match dangles[start][..] {
            [] => 0,
            [d] => d,
            [d1, d2] => {
                // Isolated vertex carrying both ends' stubs.
                debug_assert!(adj[start].is_empty());
                let total: u64 = d1 as u64 + d2 as u64;
                if total > k as u64 {
                    return None;
                }
                let p = TracePath::from_parts_unchecked(
                    vec![bag[start]],
                    Vec::new(),
                    (d1.min(d2), d1.max(d2)),
                );
                paths.push(p);
                continue;
            }
            _ => unreachable!("degree bound"),
        };
        let dr = match dangles[cur][..] {
            [] => 0,
            [d] if cur != start => d,
            _ if cur == start => 0, // singleton handled via dl
            _ => unreachable!("degree bound"),
        };
        let total: u64 = dl as u64 + dr as u64 + ws.iter().map(|&w| w as u64).sum::<u64>();
        if total > k as u64 {
            return None;
        }
        paths.push(TracePath::from_parts_unchecked(vs, ws, (dl, dr)));
    }
    if visited.iter().any(|&v| !v) {
        return None; // all-degree-2 component: a cycle
    }

    paths.sort_unstable();
    Some(PartialSolution {
        colors: a.colors.clone(),
        paths,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(usize, usize, bool)]) -> Graph {
        Graph::new(n, edges).unwrap()
    }

    fn path(g: &Graph, k: u32, vs: &[usize], ws: &[u32], d: (u32, u32)) -> TracePath {
        TracePath::new(vs.to_vec(), ws.to_vec(), d, g, k).unwrap()
    }

    #[test]
    fn leaf_enumerates_one_solution_per_color() {
        for l in 1..=5u32 {
            let sols = process_leaf(7, l);
            assert_eq!(sols.len(), l as usize);
            for (c, s) in sols.iter().enumerate() {
                assert_eq!(s.colors(), &[c as u16]);
                assert_eq!(s.paths(), &[TracePath::singleton(7)]);
            }
        }
    }

    #[test]
    fn introduce_attaches_along_a_fusable_edge() {
        // Bag {0}; introduce 1 with (0,1) fusable, k = 1.
        let g = graph(2, &[(0, 1, true)]);
        let child = process_leaf(0, 2);
        let out = process_introduce(&child, 1, &[0, 1], &g, 1, 2);
        // Same color: path <0,1>; different colors: two singletons.
        let same: Vec<_> = out
            .iter()
            .filter(|s| s.colors()[0] == s.colors()[1])
            .collect();
        assert_eq!(same.len(), 2);
        for s in same {
            assert_eq!(s.paths().len(), 1);
            assert_eq!(s.paths()[0], path(&g, 1, &[0, 1], &[1], (0, 0)));
        }
        assert_eq!(out.len(), 4); // 2 same-color + 2 distinct-color
        for s in &out {
            s.check_invariants(&[0, 1], &g, 1, 2).unwrap();
        }
    }

    #[test]
    fn introduce_respects_the_length_budget() {
        // Child solution: 0 colored 0 with a dangle of 1 (a forgotten
        // neighbor). Introducing adjacent 1 with color 0 makes length 2.
        let g = graph(2, &[(0, 1, true)]);
        let sol = PartialSolution::from_parts(
            vec![0],
            vec![TracePath::from_parts_unchecked(vec![0], vec![], (1, 0))],
        );
        assert!(introduce_one(&sol, &[0], 1, &g, 1, 0).is_none());
        let other = introduce_one(&sol, &[0], 1, &g, 1, 1).unwrap();
        assert_eq!(other.colors(), &[0, 1]);
        assert_eq!(other.paths().len(), 2);
        // With k = 2 the same-color attachment fits.
        let fits = introduce_one(&sol, &[0], 1, &g, 2, 0).unwrap();
        assert_eq!(fits.paths().len(), 1);
        assert_eq!(fits.paths()[0].total_length(), 2);
    }

    #[test]
    fn introduce_rejects_non_fusable_same_color_edges() {
        let g = graph(2, &[(0, 1, false)]);
        let sol = PartialSolution::from_parts(vec![0], vec![TracePath::singleton(0)]);
        for k in 0..4 {
            assert!(introduce_one(&sol, &[0], 1, &g, k, 0).is_none());
        }
        assert!(introduce_one(&sol, &[0], 1, &g, 0, 1).is_some());
    }

    #[test]
    fn introduce_rejects_cycles_and_crowded_vertices() {
        // Path 0-1-2 all fusable; introducing 3 adjacent to both ends of
        // the one path would close a cycle.
        let g = graph(4, &[(0, 1, true), (0, 3, true), (1, 2, true), (2, 3, true)]);
        let sol = PartialSolution::from_parts(
            vec![0, 0, 0],
            vec![path(&g, 9, &[0, 1, 2], &[1, 1], (0, 0))],
        );
        assert!(introduce_one(&sol, &[0, 1, 2], 3, &g, 9, 0).is_none());
        // Attaching to the interior vertex 1 is also impossible.
        let g2 = graph(4, &[(0, 1, true), (1, 2, true), (1, 3, true)]);
        let sol2 = PartialSolution::from_parts(
            vec![0, 0, 0],
            vec![path(&g2, 9, &[0, 1, 2], &[1, 1], (0, 0))],
        );
        assert!(introduce_one(&sol2, &[0, 1, 2], 3, &g2, 9, 0).is_none());
        // Three same-color fusable neighbors exceed the degree bound.
        let g3 = graph(4, &[(0, 3, true), (1, 3, true), (2, 3, true)]);
        let sol3 = PartialSolution::from_parts(
            vec![0, 0, 0],
            vec![
                TracePath::singleton(0),
                TracePath::singleton(1),
                TracePath::singleton(2),
            ],
        );
        assert!(introduce_one(&sol3, &[0, 1, 2], 3, &g3, 9, 0).is_none());
    }

    #[test]
    fn introduce_merges_two_paths_through_the_new_vertex() {
        let g = graph(3, &[(0, 2, true), (1, 2, true)]);
        let sol = PartialSolution::from_parts(
            vec![0, 0],
            vec![TracePath::singleton(0), TracePath::singleton(1)],
        );
        let merged = introduce_one(&sol, &[0, 1], 2, &g, 2, 0).unwrap();
        assert_eq!(merged.paths().len(), 1);
        assert_eq!(merged.paths()[0], path(&g, 2, &[0, 2, 1], &[1, 1], (0, 0)));
        assert!(introduce_one(&sol, &[0, 1], 2, &g, 1, 0).is_none());
    }

    #[test]
    fn introduce_only_attaches_at_clean_ends() {
        // 0 already dangles on both sides: no room for a new edge.
        let g = graph(2, &[(0, 1, true)]);
        let sol = PartialSolution::from_parts(
            vec![0],
            vec![TracePath::from_parts_unchecked(vec![0], vec![], (1, 1))],
        );
        assert!(introduce_one(&sol, &[0], 1, &g, 9, 0).is_none());
    }

    #[test]
    fn forget_restricts_and_absorbs_the_end_weight() {
        let g = graph(2, &[(0, 1, true)]);
        let sol = PartialSolution::from_parts(vec![0, 0], vec![path(&g, 1, &[0, 1], &[1], (0, 0))]);
        let out = process_forget(&[sol], 1, &[0], 1);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].colors(), &[0]);
        assert_eq!(
            out[0].paths(),
            &[TracePath::from_parts_unchecked(vec![0], vec![], (0, 1))]
        );
    }

    #[test]
    fn forget_drops_completed_paths() {
        let sol = PartialSolution::from_parts(vec![1], vec![TracePath::singleton(5)]);
        let out = process_forget(&[sol], 5, &[], 3);
        assert_eq!(out.len(), 1);
        assert!(out[0].colors().is_empty());
        assert!(out[0].paths().is_empty());
    }

    #[test]
    fn forget_deduplicates_collapsing_solutions() {
        // Two solutions differing only in the forgotten vertex's color.
        let a = PartialSolution::from_parts(
            vec![0, 1],
            vec![TracePath::singleton(0), TracePath::singleton(9)],
        );
        let b = PartialSolution::from_parts(
            vec![0, 2],
            vec![TracePath::singleton(0), TracePath::singleton(9)],
        );
        let out = process_forget(&[a, b], 9, &[0], 3);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].colors(), &[0]);
    }

    #[test]
    fn join_identifies_shared_weight_one_edges() {
        let g = graph(2, &[(0, 1, true)]);
        let s = PartialSolution::from_parts(vec![0, 0], vec![path(&g, 2, &[0, 1], &[1], (0, 0))]);
        let merged = join_pair(&s, &s, &[0, 1], &g, 2).unwrap();
        assert_eq!(merged.paths(), s.paths());
    }

    #[test]
    fn join_rejects_parallel_edges() {
        let g = graph(2, &[(0, 1, true)]);
        let w1 = PartialSolution::from_parts(vec![0, 0], vec![path(&g, 3, &[0, 1], &[1], (0, 0))]);
        let w2 = PartialSolution::from_parts(
            vec![0, 0],
            vec![TracePath::from_parts_unchecked(vec![0, 1], vec![2], (0, 0))],
        );
        assert!(join_pair(&w1, &w2, &[0, 1], &g, 3).is_none());
        assert!(join_pair(&w2, &w2, &[0, 1], &g, 3).is_none());
    }

    #[test]
    fn join_adds_dangles_through_a_shared_vertex() {
        let g = graph(1, &[]);
        let s = PartialSolution::from_parts(
            vec![0],
            vec![TracePath::from_parts_unchecked(vec![0], vec![], (1, 0))],
        );
        let merged = join_pair(&s, &s, &[0], &g, 2).unwrap();
        assert_eq!(merged.paths().len(), 1);
        assert_eq!(merged.paths()[0].dangles(), (1, 1));
        assert_eq!(merged.paths()[0].total_length(), 2);
        assert!(join_pair(&s, &s, &[0], &g, 1).is_none());
    }

    #[test]
    fn join_skips_disagreeing_colorings() {
        let g = graph(2, &[]);
        let a = PartialSolution::from_parts(
            vec![0, 0],
            vec![TracePath::singleton(0), TracePath::singleton(1)],
        );
        let b = PartialSolution::from_parts(
            vec![0, 1],
            vec![TracePath::singleton(0), TracePath::singleton(1)],
        );
        let out = process_join(std::slice::from_ref(&a), &[b], &[0, 1], &g, 2, 2);
        assert!(out.is_empty());
        let out = process_join(
            std::slice::from_ref(&a),
            std::slice::from_ref(&a),
            &[0, 1],
            &g,
            2,
            2,
        );
        assert_eq!(out.len(), 1);
    }

    #[test]
    fn join_rejects_cycles_and_degree_overflow() {
        // Triangle: child traces 0-1-2 and 0..2 paths whose union closes a
        // cycle through weight-2 edges.
        let g = graph(3, &[(0, 1, true), (1, 2, true), (0, 2, true)]);
        let a = PartialSolution::from_parts(
            vec![0, 0, 0],
            vec![path(&g, 9, &[0, 1, 2], &[1, 1], (0, 0))],
        );
        let b = PartialSolution::from_parts(
            vec![0, 0, 0],
            vec![path(&g, 9, &[0, 2], &[1], (0, 0)), TracePath::singleton(1)],
        );
        assert!(join_pair(&a, &b, &[0, 1, 2], &g, 9).is_none());
        // Degree overflow: 1 is interior in one child and dangling in the
        // other.
        let c = PartialSolution::from_parts(
            vec![0, 0, 0],
            vec![
                TracePath::from_parts_unchecked(vec![1], vec![], (1, 0)),
                TracePath::singleton(0),
                TracePath::singleton(2),
            ],
        );
        assert!(join_pair(&a, &c, &[0, 1, 2], &g, 9).is_none());
    }

    #[test]
    fn normalization_orders_colors_by_first_use() {
        let mut s = PartialSolution::from_parts(
            vec![3, 1, 3, 0],
            vec![
                TracePath::singleton(0),
                TracePath::singleton(1),
                TracePath::singleton(2),
                TracePath::singleton(3),
            ],
        );
        s.normalize_colors();
        assert_eq!(s.colors(), &[0, 1, 0, 2]);
    }
}
