//! The dynamic program over nice tree decompositions, the chromatic-number
//! search wrapped around it, certificate reconstruction, and the
//! component/cut-edge preprocessing splits.

pub mod ops;

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::decomp::{heuristic_decompose, make_nice, NiceTreeDecomposition, NodeKind, Strategy};
use crate::graph::Graph;
use crate::oracle::{verify_coloring, Coloring};
use ops::PartialSolution;

#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub strategy: Strategy,
    /// Normalize bag colorings to first-use order before deduplication.
    /// Changes table sizes, never decisions.
    pub symmetry_reduction: bool,
    /// Record tables and backrefs so a coloring can be reconstructed.
    pub certificate: bool,
    /// Solve connected components and non-fusable cut-edge pieces
    /// independently and recombine.
    pub split: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            strategy: Strategy::BestOfBoth,
            symmetry_reduction: true,
            certificate: false,
            split: true,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SolveStats {
    /// Achieved heuristic decomposition width of the whole input graph.
    pub width: usize,
    /// Nice decomposition node count (summed over parts).
    pub bags: usize,
    /// Partial-solution count per nice node, parts concatenated, for the
    /// run that decided the reported answer.
    pub states_per_bag: Vec<usize>,
    /// Largest number of simultaneously live partial solutions.
    pub peak_states: usize,
    pub decompose_time: Duration,
    pub nicify_time: Duration,
    /// Cumulative decide time per attempted palette size L.
    pub decide_times: Vec<(u32, Duration)>,
    pub certificate_time: Duration,
}

#[derive(Debug, Clone)]
pub struct SolveResult {
    pub colorable: bool,
    pub coloring: Option<Coloring>,
    pub chromatic: Option<u32>,
    pub stats: SolveStats,
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("internal assertion failed: {0}")]
    Internal(String),
}

/// Backref from an emitted solution to the child solution(s) it came from.
#[derive(Debug, Clone, Copy)]
enum Prov {
    Leaf,
    Unary(u32),
    Binary(u32, u32),
}

struct Eval {
    tables: Vec<Vec<PartialSolution>>,
    prov: Vec<Vec<Prov>>,
    states_per_bag: Vec<usize>,
    peak_states: usize,
}

/// Runs the table computation over the whole tree. With `keep` false,
/// child tables are dropped as soon as their parent is done, leaving only
/// the root table.
fn evaluate(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    k: u32,
    l: u32,
    symmetry: bool,
    keep: bool,
) -> Eval {
    assert!(g.n() < (1 << 16), "vertex count beyond supported range");
    let nn = ntd.len();
    let mut tables: Vec<Vec<PartialSolution>> = vec![Vec::new(); nn];
    let mut prov: Vec<Vec<Prov>> = vec![Vec::new(); nn];
    let mut states_per_bag = vec![0usize; nn];
    let mut live = 0usize;
    let mut peak = 0usize;

    for i in ntd.post_order() {
        let bag = ntd.bag(i);
        let mut seen: HashSet<PartialSolution> = HashSet::new();
        let mut out: Vec<PartialSolution> = Vec::new();
        let mut out_prov: Vec<Prov> = Vec::new();
        {
            let mut push = |mut s: PartialSolution, p: Prov| {
                if symmetry {
                    s.normalize_colors();
                }
                if seen.insert(s.clone()) {
                    out.push(s);
                    out_prov.push(p);
                }
            };
            match ntd.kind(i) {
                NodeKind::Leaf => {
                    for s in ops::process_leaf(bag[0], l) {
                        push(s, Prov::Leaf);
                    }
                }
                NodeKind::Introduce(v) => {
                    let child = ntd.children(i)[0];
                    let child_bag = ntd.bag(child);
                    for (j, s) in tables[child].iter().enumerate() {
                        for c in 0..l {
                            if let Some(ext) = ops::introduce_one(s, child_bag, v, g, k, c as u16) {
                                push(ext, Prov::Unary(j as u32));
                            }
                        }
                    }
                }
                NodeKind::Forget(v) => {
                    let child = ntd.children(i)[0];
                    let child_bag = ntd.bag(child);
                    for (j, s) in tables[child].iter().enumerate() {
                        push(ops::forget_one(s, child_bag, v, k), Prov::Unary(j as u32));
                    }
                }
                NodeKind::Join => {
                    let (left, right) = (ntd.children(i)[0], ntd.children(i)[1]);
                    let mut by_coloring: HashMap<&[u16], Vec<u32>> = HashMap::new();
                    for (j, s) in tables[left].iter().enumerate() {
                        by_coloring.entry(s.colors()).or_default().push(j as u32);
                    }
                    for (j2, s2) in tables[right].iter().enumerate() {
                        if let Some(lefts) = by_coloring.get(s2.colors()) {
                            for &j1 in lefts {
                                if let Some(merged) =
                                    ops::join_pair(&tables[left][j1 as usize], s2, bag, g, k)
                                {
                                    push(merged, Prov::Binary(j1, j2 as u32));
                                }
                            }
                        }
                    }
                }
            }
        }
        states_per_bag[i] = out.len();
        live += out.len();
        peak = peak.max(live);
        if !keep {
            for &c in ntd.children(i) {
                live -= tables[c].len();
                tables[c] = Vec::new();
            }
        }
        tables[i] = out;
        if keep {
            prov[i] = out_prov;
        }
    }

    Eval {
        tables,
        prov,
        states_per_bag,
        peak_states: peak,
    }
}

/// Decides k-path L-colorability of `g` along the given nice
/// decomposition: true iff the root table is nonempty.
pub fn decide(g: &Graph, ntd: &NiceTreeDecomposition, k: u32, l: u32) -> bool {
    if l as usize >= g.n() {
        return true; // one color per vertex always works
    }
    let eval = evaluate(g, ntd, k, l, true, false);
    !eval.tables[ntd.root()].is_empty()
}

/// Like [`decide`], also extracting a witness coloring on success.
pub fn decide_with_certificate(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    k: u32,
    l: u32,
) -> Option<Coloring> {
    if l as usize >= g.n() {
        let colors: Vec<u32> = (0..g.n() as u32).collect();
        return Some(Coloring::new(colors, g.n() as u32).expect("singleton palette"));
    }
    let eval = evaluate(g, ntd, k, l, true, true);
    let root = ntd.root();
    let best = eval.tables[root]
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, _)| i)?;
    let coloring = reconstruct(g, ntd, &eval, root, best);
    debug_assert!(
        verify_coloring(g, &coloring, k)
            .map(|r| r.valid)
            .unwrap_or(false),
        "reconstructed coloring must verify"
    );
    Some(coloring)
}

/// Expands the recorded backrefs below `(start, sol_idx)` into an explicit
/// coloring of the subtree's vertices. Solution colors are local to each
/// node; the descent keeps an injective map from them to global colors,
/// extended via shared bag vertices and, at forgets that retire a class,
/// by the smallest color not used by the live classes around it.
fn expand_from(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    eval: &Eval,
    start: usize,
    sol_idx: usize,
) -> Vec<Option<u32>> {
    type Sigma = Vec<(u16, u32)>;
    let find = |sigma: &Sigma, c: u16| sigma.iter().find(|&&(f, _)| f == c).map(|&(_, t)| t);

    let mut coloring: Vec<Option<u32>> = vec![None; g.n()];
    let s0 = &eval.tables[start][sol_idx];
    let mut sigma0: Sigma = Vec::new();
    for (pos, &v) in ntd.bag(start).iter().enumerate() {
        let c = s0.colors()[pos];
        let global = match find(&sigma0, c) {
            Some(x) => x,
            None => {
                let x = sigma0.len() as u32;
                sigma0.push((c, x));
                x
            }
        };
        coloring[v] = Some(global);
    }

    // Child sigma from shared vertices; parent/child solutions agree on
    // them up to the relabeling this map records.
    let derive = |pbag: &[usize],
                  psol: &PartialSolution,
                  sigma_p: &Sigma,
                  cbag: &[usize],
                  csol: &PartialSolution|
     -> Sigma {
        let mut out: Sigma = Vec::new();
        for (pos, &u) in cbag.iter().enumerate() {
            if let Ok(ppos) = pbag.binary_search(&u) {
                let global =
                    find(sigma_p, psol.colors()[ppos]).expect("parent bag colors are mapped");
                match find(&out, csol.colors()[pos]) {
                    Some(x) => debug_assert_eq!(x, global, "inconsistent color map"),
                    None => out.push((csol.colors()[pos], global)),
                }
            }
        }
        out
    };

    let mut stack: Vec<(usize, usize, Sigma)> = vec![(start, sol_idx, sigma0)];
    while let Some((node, idx, sigma)) = stack.pop() {
        let sol = &eval.tables[node][idx];
        let bag = ntd.bag(node);
        match (ntd.kind(node), eval.prov[node][idx]) {
            (NodeKind::Leaf, Prov::Leaf) => {}
            (NodeKind::Introduce(_), Prov::Unary(j)) => {
                let child = ntd.children(node)[0];
                let csol = &eval.tables[child][j as usize];
                let sigma_c = derive(bag, sol, &sigma, ntd.bag(child), csol);
                stack.push((child, j as usize, sigma_c));
            }
            (NodeKind::Forget(v), Prov::Unary(j)) => {
                let child = ntd.children(node)[0];
                let cbag = ntd.bag(child);
                let csol = &eval.tables[child][j as usize];
                let mut sigma_c = derive(bag, sol, &sigma, cbag, csol);
                let cv = csol.color_of(cbag, v);
                let global = match find(&sigma_c, cv) {
                    Some(x) => x,
                    None => {
                        // v's class has no live vertex left; give it the
                        // smallest color unused among the classes it can
                        // still conflict with, which all sit in this bag.
                        let x = (0..)
                            .find(|x| sigma_c.iter().all(|&(_, t)| t != *x))
                            .unwrap();
                        sigma_c.push((cv, x));
                        x
                    }
                };
                debug_assert!(coloring[v].is_none(), "vertex colored twice");
                coloring[v] = Some(global);
                stack.push((child, j as usize, sigma_c));
            }
            (NodeKind::Join, Prov::Binary(j1, j2)) => {
                let (left, right) = (ntd.children(node)[0], ntd.children(node)[1]);
                let lsol = &eval.tables[left][j1 as usize];
                let rsol = &eval.tables[right][j2 as usize];
                let sigma_l = derive(bag, sol, &sigma, ntd.bag(left), lsol);
                let sigma_r = derive(bag, sol, &sigma, ntd.bag(right), rsol);
                stack.push((left, j1 as usize, sigma_l));
                stack.push((right, j2 as usize, sigma_r));
            }
            _ => unreachable!("backref shape matches node kind"),
        }
    }
    coloring
}

fn reconstruct(
    g: &Graph,
    ntd: &NiceTreeDecomposition,
    eval: &Eval,
    root: usize,
    sol_idx: usize,
) -> Coloring {
    let partial = expand_from(g, ntd, eval, root, sol_idx);
    let colors: Vec<u32> = partial
        .into_iter()
        .map(|c| c.expect("root expansion colors every vertex"))
        .collect();
    let num = colors.iter().max().map_or(0, |&m| m + 1);
    Coloring::new(colors, num).expect("reconstruction stays inside the palette")
}

/// How a graph falls apart for independent solving: connected components,
/// further cut along non-fusable bridges. `parts` use local vertex ids
/// with a local-to-global map; `cut_edges` are global.
#[derive(Debug, Clone)]
pub struct SplitPlan {
    pub parts: Vec<(Graph, Vec<usize>)>,
    pub cut_edges: Vec<(usize, usize)>,
}

/// Splits along connected components and non-fusable bridges. Endpoint
/// colors across a cut edge only need to differ, so pieces recombine by
/// palette permutation.
pub fn preprocess_split(g: &Graph) -> SplitPlan {
    let cut_edges = g.find_ef_cut_edges();
    if cut_edges.is_empty() {
        return SplitPlan {
            parts: g.connected_components(),
            cut_edges,
        };
    }
    let cut: HashSet<(usize, usize)> = cut_edges.iter().copied().collect();
    let kept: Vec<(usize, usize, bool)> = g
        .edges()
        .iter()
        .copied()
        .filter(|&(u, v, _)| !cut.contains(&(u, v)))
        .collect();
    let stripped = Graph::new(g.n(), &kept).expect("edge subset stays valid");
    SplitPlan {
        parts: stripped.connected_components(),
        cut_edges,
    }
}

/// Merges per-part chromatic numbers and colorings. The global value is
/// the max over parts, promoted to 2 when cut edges exist (their endpoints
/// must differ). Along each cut edge the child piece's palette is permuted
/// if its endpoint collides with the already-fixed side.
pub fn recombine(
    plan: &SplitPlan,
    parts: &[(u32, Option<Coloring>)],
    n: usize,
) -> (u32, Option<Coloring>) {
    let mut chi = parts.iter().map(|&(c, _)| c).max().unwrap_or(0);
    if !plan.cut_edges.is_empty() {
        chi = chi.max(2);
    }
    if parts.iter().any(|(_, c)| c.is_none()) {
        return (chi, None);
    }

    let mut global = vec![0u32; n];
    let mut piece_of = vec![usize::MAX; n];
    for (pi, ((_, coloring), (_, map))) in parts.iter().zip(&plan.parts).enumerate() {
        let coloring = coloring.as_ref().unwrap();
        for (local, &v) in map.iter().enumerate() {
            global[v] = coloring.color(local);
            piece_of[v] = pi;
        }
    }

    // Piece forest: bridges cannot pair the same two pieces twice.
    let mut adj: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); plan.parts.len()];
    for &(u, v) in &plan.cut_edges {
        adj[piece_of[u]].push((piece_of[v], u, v));
        adj[piece_of[v]].push((piece_of[u], v, u));
    }
    let mut visited = vec![false; plan.parts.len()];
    for root in 0..plan.parts.len() {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        let mut stack = vec![root];
        while let Some(p) = stack.pop() {
            for &(q, up, uq) in &adj[p] {
                if visited[q] {
                    continue;
                }
                visited[q] = true;
                if global[up] == global[uq] {
                    let fixed = global[up];
                    let alt = (0..chi)
                        .find(|&c| c != fixed)
                        .expect("chi >= 2 with cut edges");
                    for &w in &plan.parts[q].1 {
                        if global[w] == fixed {
                            global[w] = alt;
                        } else if global[w] == alt {
                            global[w] = fixed;
                        }
                    }
                }
                stack.push(q);
            }
        }
    }
    let coloring = Coloring::new(global, chi.max(1)).expect("recombined colors stay in range");
    (chi, Some(coloring))
}

struct PartOutcome {
    chi: u32,
    coloring: Option<Coloring>,
    stats: SolveStats,
}

fn solve_part(pg: &Graph, k: u32, opts: &SolveOptions) -> Result<PartOutcome, SolveError> {
    let mut stats = SolveStats::default();
    let t = Instant::now();
    let td = heuristic_decompose(pg, opts.strategy);
    stats.decompose_time = t.elapsed();
    let t = Instant::now();
    let ntd = make_nice(pg, &td)
        .map_err(|e| SolveError::Internal(format!("nicification failed: {e}")))?;
    stats.nicify_time = t.elapsed();
    let w = ntd.width();
    stats.width = w;
    stats.bags = ntd.len();

    // The palette never needs to exceed width + 1; not finding an L in
    // that range means the solver or the decomposition is broken.
    for l in 1..=(w as u32 + 1) {
        let t = Instant::now();
        let colorable = if (l as usize) >= pg.n() {
            true
        } else {
            let eval = evaluate(pg, &ntd, k, l, opts.symmetry_reduction, false);
            stats.states_per_bag = eval.states_per_bag;
            stats.peak_states = eval.peak_states;
            !eval.tables[ntd.root()].is_empty()
        };
        stats.decide_times.push((l, t.elapsed()));
        if !colorable {
            continue;
        }
        let coloring = if opts.certificate {
            let t = Instant::now();
            let c = decide_with_certificate(pg, &ntd, k, l);
            stats.certificate_time = t.elapsed();
            debug_assert!(c.is_some(), "certificate run disagrees with decision run");
            c
        } else {
            None
        };
        return Ok(PartOutcome {
            chi: l,
            coloring,
            stats,
        });
    }
    Err(SolveError::Internal(format!(
        "no palette of at most width+1 = {} colors worked on a {}-vertex part",
        w + 1,
        pg.n()
    )))
}

/// Smallest L for which `g` is k-path L-colorable, searched per part from
/// L = 1 up to the achieved width + 1. Parts run concurrently; everything
/// is deterministic.
pub fn chromatic_number(g: &Graph, k: u32, opts: &SolveOptions) -> Result<SolveResult, SolveError> {
    if g.n() == 0 {
        return Ok(SolveResult {
            colorable: true,
            coloring: Some(Coloring::new(Vec::new(), 0).expect("empty")),
            chromatic: Some(0),
            stats: SolveStats::default(),
        });
    }
    let plan = if opts.split {
        preprocess_split(g)
    } else {
        SplitPlan {
            parts: vec![(g.clone(), (0..g.n()).collect())],
            cut_edges: Vec::new(),
        }
    };
    let outcomes: Result<Vec<PartOutcome>, SolveError> = plan
        .parts
        .par_iter()
        .map(|(pg, _)| solve_part(pg, k, opts))
        .collect();
    let outcomes = outcomes?;

    // Report the width of the whole graph, not of the split parts: it is
    // the figure the w + 1 bound refers to (the split can only lower
    // part widths, and cut-edge promotion to 2 colors still needs an
    // edge, hence width >= 1).
    let mut stats = SolveStats {
        width: heuristic_decompose(g, opts.strategy).width(),
        ..SolveStats::default()
    };
    let mut per_l: Vec<(u32, Duration)> = Vec::new();
    for o in &outcomes {
        stats.bags += o.stats.bags;
        stats.states_per_bag.extend(&o.stats.states_per_bag);
        stats.peak_states = stats.peak_states.max(o.stats.peak_states);
        stats.decompose_time += o.stats.decompose_time;
        stats.nicify_time += o.stats.nicify_time;
        stats.certificate_time += o.stats.certificate_time;
        for &(l, d) in &o.stats.decide_times {
            match per_l.iter_mut().find(|(pl, _)| *pl == l) {
                Some((_, acc)) => *acc += d,
                None => per_l.push((l, d)),
            }
        }
    }
    per_l.sort_unstable_by_key(|&(l, _)| l);
    stats.decide_times = per_l;

    let parts: Vec<(u32, Option<Coloring>)> =
        outcomes.into_iter().map(|o| (o.chi, o.coloring)).collect();
    let (chi, coloring) = recombine(&plan, &parts, g.n());
    if let Some(c) = &coloring {
        debug_assert!(
            verify_coloring(g, c, k).map(|r| r.valid).unwrap_or(false),
            "recombined coloring must verify"
        );
    }
    Ok(SolveResult {
        colorable: true,
        coloring,
        chromatic: Some(chi),
        stats,
    })
}
