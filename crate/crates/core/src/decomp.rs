//! Tree decompositions: elimination-ordering heuristics, validation,
//! conversion to the rooted nice form consumed by the solver, and a text
//! format for interchange.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, HashSet};

use thiserror::Error;

use crate::graph::Graph;

/// Bags plus the tree connecting them. Fields are public; [`validate`]
/// checks the decomposition conditions against a graph.
///
/// [`validate`]: TreeDecomposition::validate
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    /// Vertex sets, each sorted ascending.
    pub bags: Vec<Vec<usize>>,
    /// Unordered pairs of bag indices.
    pub tree_edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    VertexNotCovered(usize),
    EdgeNotCovered(usize, usize),
    /// Bags containing the vertex do not form a connected subtree.
    OccurrenceDisconnected(usize),
    NotATree,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdValidation {
    pub valid: bool,
    pub violations: Vec<TdViolation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    MinDegree,
    MinFill,
    /// Runs both heuristics and keeps the smaller width; ties go to
    /// min-degree.
    BestOfBoth,
}

impl std::str::FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min-degree" => Ok(Strategy::MinDegree),
            "min-fill" => Ok(Strategy::MinFill),
            "best-of-both" => Ok(Strategy::BestOfBoth),
            other => Err(format!("unknown strategy {other:?}")),
        }
    }
}

impl TreeDecomposition {
    /// Largest bag size minus one. An empty decomposition reports 0.
    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Checks the decomposition conditions: every vertex covered, every edge
    /// inside some bag, per-vertex occurrences forming a connected subtree,
    /// and the bag graph being a tree.
    pub fn validate(&self, g: &Graph) -> TdValidation {
        let mut violations = Vec::new();
        let r = self.bags.len();

        let mut occurrences = vec![0usize; g.n()];
        for bag in &self.bags {
            for (i, &v) in bag.iter().enumerate() {
                if v < g.n() && !bag[..i].contains(&v) {
                    occurrences[v] += 1;
                }
            }
        }
        for (v, &occ) in occurrences.iter().enumerate() {
            if occ == 0 {
                violations.push(TdViolation::VertexNotCovered(v));
            }
        }

        let mut pairs: HashSet<(usize, usize)> = HashSet::new();
        for bag in &self.bags {
            for (i, &u) in bag.iter().enumerate() {
                for &v in &bag[i + 1..] {
                    pairs.insert((u.min(v), u.max(v)));
                }
            }
        }
        for &(u, v, _) in g.edges() {
            if !pairs.contains(&(u, v)) {
                violations.push(TdViolation::EdgeNotCovered(u, v));
            }
        }

        let mut adj = vec![Vec::new(); r];
        let mut tree_ok = self.tree_edges.len() + 1 == r || (r == 0 && self.tree_edges.is_empty());
        for &(a, b) in &self.tree_edges {
            if a >= r || b >= r || a == b {
                tree_ok = false;
                break;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        if tree_ok && r > 0 {
            let mut seen = vec![false; r];
            let mut stack = vec![0usize];
            seen[0] = true;
            let mut count = 1;
            while let Some(i) = stack.pop() {
                for &j in &adj[i] {
                    if !seen[j] {
                        seen[j] = true;
                        count += 1;
                        stack.push(j);
                    }
                }
            }
            tree_ok = count == r;
        }
        if !tree_ok {
            violations.push(TdViolation::NotATree);
        }

        // Occurrences of v form a subgraph of the tree, hence a forest with
        // occurrences(v) - (tree edges whose both bags hold v) components;
        // connectivity means exactly one component.
        if tree_ok {
            let mut shared = vec![0usize; g.n()];
            for &(a, b) in &self.tree_edges {
                for (i, &v) in self.bags[a].iter().enumerate() {
                    if v < g.n() && !self.bags[a][..i].contains(&v) && self.bags[b].contains(&v) {
                        shared[v] += 1;
                    }
                }
            }
            for v in 0..g.n() {
                if occurrences[v] > 1 && shared[v] != occurrences[v] - 1 {
                    violations.push(TdViolation::OccurrenceDisconnected(v));
                }
            }
        }

        TdValidation {
            valid: violations.is_empty(),
            violations,
        }
    }
}

/// Heuristic tree decomposition from an elimination ordering. Works on any
/// graph; for disconnected inputs the per-component trees are chained
/// together so the bag graph stays a tree.
pub fn heuristic_decompose(g: &Graph, strategy: Strategy) -> TreeDecomposition {
    match strategy {
        Strategy::MinDegree => eliminate(g, Score::Degree),
        Strategy::MinFill => eliminate(g, Score::Fill),
        Strategy::BestOfBoth => {
            let a = eliminate(g, Score::Degree);
            let b = eliminate(g, Score::Fill);
            if b.width() < a.width() {
                b
            } else {
                a
            }
        }
    }
}

#[derive(Clone, Copy)]
enum Score {
    Degree,
    Fill,
}

struct Elim {
    adj: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
}

impl Elim {
    fn score(&self, v: usize, by: Score) -> usize {
        match by {
            Score::Degree => self.adj[v].len(),
            Score::Fill => {
                let nbrs: Vec<usize> = self.adj[v].iter().copied().collect();
                let mut fill = 0;
                for (i, &a) in nbrs.iter().enumerate() {
                    for &b in &nbrs[i + 1..] {
                        if !self.adj[a].contains(&b) {
                            fill += 1;
                        }
                    }
                }
                fill
            }
        }
    }
}

fn eliminate(g: &Graph, by: Score) -> TreeDecomposition {
    let n = g.n();
    let mut st = Elim {
        adj: (0..n)
            .map(|v| g.neighbors(v).iter().map(|&(u, _)| u).collect())
            .collect(),
        alive: vec![true; n],
    };
    // Lazy heap: stale entries are skipped when popped. Ties break on the
    // lower vertex id via the Reverse ordering on (score, v).
    let mut heap: BinaryHeap<Reverse<(usize, usize)>> =
        (0..n).map(|v| Reverse((st.score(v, by), v))).collect();

    let mut bags = Vec::with_capacity(n);
    let mut position = vec![usize::MAX; n];
    let mut elim_nbrs: Vec<Vec<usize>> = Vec::with_capacity(n);

    while let Some(Reverse((score, v))) = heap.pop() {
        if !st.alive[v] || st.score(v, by) != score {
            continue;
        }
        let nbrs: Vec<usize> = st.adj[v].iter().copied().collect();
        position[v] = bags.len();
        let mut bag = nbrs.clone();
        bag.push(v);
        bag.sort_unstable();
        bags.push(bag);
        elim_nbrs.push(nbrs.clone());

        st.alive[v] = false;
        for &u in &nbrs {
            st.adj[u].remove(&v);
        }
        st.adj[v].clear();
        for (i, &a) in nbrs.iter().enumerate() {
            for &b in &nbrs[i + 1..] {
                st.adj[a].insert(b);
                st.adj[b].insert(a);
            }
        }
        // Rescore everything whose neighborhood may have changed.
        let mut touched: BTreeSet<usize> = nbrs.iter().copied().collect();
        if matches!(by, Score::Fill) {
            for &u in &nbrs {
                touched.extend(st.adj[u].iter().copied());
            }
        }
        for u in touched {
            if st.alive[u] {
                heap.push(Reverse((st.score(u, by), u)));
            }
        }
    }

    // Parent bag = bag of the earliest-eliminated neighbor. Bags without a
    // parent are roots of component chunks; chain them to keep one tree.
    let mut tree_edges = Vec::new();
    let mut roots = Vec::new();
    for (i, nbrs) in elim_nbrs.iter().enumerate() {
        match nbrs.iter().map(|&u| position[u]).min() {
            Some(p) => tree_edges.push((i.min(p), i.max(p))),
            None => roots.push(i),
        }
    }
    for w in roots.windows(2) {
        tree_edges.push((w[0].min(w[1]), w[0].max(w[1])));
    }
    tree_edges.sort_unstable();
    TreeDecomposition { bags, tree_edges }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NiceError {
    #[error("decomposition has no bags")]
    Empty,
    #[error("bag {0} is empty")]
    EmptyBag(usize),
    #[error("invalid decomposition: {0:?}")]
    Invalid(Vec<TdViolation>),
    #[error("root bag index {root} out of range ({bags} bags)")]
    RootOutOfRange { root: usize, bags: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    Leaf,
    Introduce(usize),
    Forget(usize),
    Join,
}

/// Rooted decomposition in which every node is a leaf, an introduce, a
/// forget, or a join. Built by [`make_nice`]; the solver walks it in post
/// order.
#[derive(Debug, Clone)]
pub struct NiceTreeDecomposition {
    bags: Vec<Vec<usize>>,
    kinds: Vec<NodeKind>,
    children: Vec<Vec<usize>>,
    parent: Vec<Option<usize>>,
    root: usize,
}

impl NiceTreeDecomposition {
    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    pub fn bag(&self, i: usize) -> &[usize] {
        &self.bags[i]
    }

    pub fn kind(&self, i: usize) -> NodeKind {
        self.kinds[i]
    }

    pub fn children(&self, i: usize) -> &[usize] {
        &self.children[i]
    }

    pub fn parent(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn width(&self) -> usize {
        self.bags
            .iter()
            .map(|b| b.len())
            .max()
            .unwrap_or(0)
            .saturating_sub(1)
    }

    /// Node ids in post order (children before parents), ending at the root.
    pub fn post_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((i, expanded)) = stack.pop() {
            if expanded {
                out.push(i);
            } else {
                stack.push((i, true));
                for &c in self.children[i].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Re-checks every structural invariant against the graph. Used by tests
    /// and the acceptance suite; construction is supposed to guarantee all
    /// of this.
    pub fn validate(&self, g: &Graph) -> Result<(), String> {
        let td = TreeDecomposition {
            bags: self.bags.clone(),
            tree_edges: (0..self.len())
                .filter_map(|i| self.parent[i].map(|p| (i.min(p), i.max(p))))
                .collect(),
        };
        let report = td.validate(g);
        if !report.valid {
            return Err(format!(
                "underlying decomposition invalid: {:?}",
                report.violations
            ));
        }
        // Subtree vertex sets, for the introduce freshness condition.
        let mut subtree: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); self.len()];
        for i in self.post_order() {
            let mut vs: BTreeSet<usize> = self.bags[i].iter().copied().collect();
            for &c in &self.children[i] {
                vs.extend(subtree[c].iter().copied());
            }
            subtree[i] = vs;
            let bag = &self.bags[i];
            match self.kinds[i] {
                NodeKind::Leaf => {
                    if !self.children[i].is_empty() || bag.len() != 1 {
                        return Err(format!("node {i}: bad leaf"));
                    }
                }
                NodeKind::Introduce(v) => {
                    let [c] = self.children[i][..] else {
                        return Err(format!("node {i}: introduce needs one child"));
                    };
                    let mut expect = self.bags[c].clone();
                    expect.push(v);
                    expect.sort_unstable();
                    if *bag != expect || self.bags[c].contains(&v) {
                        return Err(format!("node {i}: introduce({v}) bag mismatch"));
                    }
                    if subtree[c].contains(&v) {
                        return Err(format!("node {i}: introduce({v}) vertex already below"));
                    }
                }
                NodeKind::Forget(v) => {
                    let [c] = self.children[i][..] else {
                        return Err(format!("node {i}: forget needs one child"));
                    };
                    let expect: Vec<usize> =
                        self.bags[c].iter().copied().filter(|&u| u != v).collect();
                    if *bag != expect || !self.bags[c].contains(&v) {
                        return Err(format!("node {i}: forget({v}) bag mismatch"));
                    }
                }
                NodeKind::Join => {
                    let [a, b] = self.children[i][..] else {
                        return Err(format!("node {i}: join needs two children"));
                    };
                    if self.bags[a] != *bag || self.bags[b] != *bag {
                        return Err(format!("node {i}: join bags differ"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Converts a valid decomposition into the nice form, rooting at the bag
/// that contains the lowest vertex id.
pub fn make_nice(g: &Graph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition, NiceError> {
    let min_vertex = td
        .bags
        .iter()
        .flat_map(|b| b.iter().copied())
        .min()
        .ok_or(NiceError::Empty)?;
    let root = td
        .bags
        .iter()
        .position(|b| b.contains(&min_vertex))
        .expect("minimum comes from some bag");
    make_nice_rooted(g, td, root)
}

/// Same as [`make_nice`] with an explicit root bag. The choice changes state
/// table shapes but never the decision; tests rely on that.
pub fn make_nice_rooted(
    g: &Graph,
    td: &TreeDecomposition,
    root: usize,
) -> Result<NiceTreeDecomposition, NiceError> {
    if td.bags.is_empty() {
        return Err(NiceError::Empty);
    }
    if root >= td.bags.len() {
        return Err(NiceError::RootOutOfRange {
            root,
            bags: td.bags.len(),
        });
    }
    if let Some(i) = td.bags.iter().position(|b| b.is_empty()) {
        return Err(NiceError::EmptyBag(i));
    }
    let report = td.validate(g);
    if !report.valid {
        return Err(NiceError::Invalid(report.violations));
    }

    // Drop bags that are subsets of a neighbor. This keeps chains between
    // surviving bags short, which is what keeps the node count linear.
    let (bags, edges) = compress(&td.bags, &td.tree_edges, root);
    let root = 0; // compress relabels so the requested root is bag 0

    let r = bags.len();
    let mut adj = vec![Vec::new(); r];
    for &(a, b) in &edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    for list in &mut adj {
        list.sort_unstable();
    }

    // Root the bag tree (BFS keeps child order deterministic), then chain
    // siblings where separators allow. That removes most joins, which is
    // what keeps the nice node count linear even around hub bags.
    let mut children_of = vec![Vec::new(); r];
    let mut bfs_order = Vec::with_capacity(r);
    let mut seen = vec![false; r];
    seen[root] = true;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(i) = queue.pop_front() {
        bfs_order.push(i);
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                children_of[i].push(j);
                queue.push_back(j);
            }
        }
    }
    chain_siblings(&bags, &mut children_of, &bfs_order);

    let mut out = NiceBuilder::default();
    let mut order = Vec::with_capacity(r);
    let mut stack = vec![root];
    while let Some(i) = stack.pop() {
        order.push(i);
        for &j in children_of[i].iter().rev() {
            stack.push(j);
        }
    }
    let mut built: Vec<Option<usize>> = vec![None; r];
    for &i in order.iter().rev() {
        let tops: Vec<usize> = children_of[i]
            .iter()
            .map(|&c| {
                let top = built[c].expect("post order");
                out.chain(top, &bags[c], &bags[i])
            })
            .collect();
        let node = match tops.len() {
            0 => out.leaf_chain(&bags[i]),
            1 => tops[0],
            _ => tops[1..]
                .iter()
                .fold(tops[0], |acc, &t| out.join(&bags[i], acc, t)),
        };
        built[i] = Some(node);
    }
    let root_node = built[root].expect("root built");
    Ok(out.finish(root_node))
}

fn compress(
    bags: &[Vec<usize>],
    edges: &[(usize, usize)],
    root: usize,
) -> (Vec<Vec<usize>>, Vec<(usize, usize)>) {
    let r = bags.len();
    let mut neighbors: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); r];
    for &(a, b) in edges {
        neighbors[a].insert(b);
        neighbors[b].insert(a);
    }
    let mut alive = vec![true; r];
    loop {
        let mut merged = false;
        for i in 0..r {
            if !alive[i] {
                continue;
            }
            let target = neighbors[i].iter().copied().find(|&j| {
                let sub = bags[i].iter().all(|v| bags[j].contains(v));
                // Prefer keeping the root; otherwise keep the larger bag,
                // merging equal bags into the lower index.
                sub && (j != i)
                    && if bags[i].len() == bags[j].len() {
                        i != root && (j < i || j == root)
                    } else {
                        i != root || bags[j].len() > bags[i].len()
                    }
            });
            if let Some(j) = target {
                // If the root collapses into j, j becomes the root's stand-in
                // only when i was the root; handled below by remapping.
                let adj: Vec<usize> = neighbors[i].iter().copied().collect();
                for x in adj {
                    neighbors[x].remove(&i);
                    if x != j {
                        neighbors[x].insert(j);
                        neighbors[j].insert(x);
                    }
                }
                neighbors[i].clear();
                alive[i] = false;
                merged = true;
            }
        }
        if !merged {
            break;
        }
    }
    // Relabel with the (possibly merged-away) root first.
    let mut keep: Vec<usize> = (0..r).filter(|&i| alive[i]).collect();
    let effective_root = if alive[root] {
        root
    } else {
        // The root was a subset of some survivor; any bag containing it
        // works, and one must exist.
        *keep
            .iter()
            .find(|&&j| bags[root].iter().all(|v| bags[j].contains(v)))
            .expect("root contents survive compression")
    };
    keep.sort_unstable_by_key(|&i| (i != effective_root, i));
    let mut index_of = vec![usize::MAX; r];
    for (new, &old) in keep.iter().enumerate() {
        index_of[old] = new;
    }
    let new_bags: Vec<Vec<usize>> = keep.iter().map(|&i| bags[i].clone()).collect();
    let mut new_edges: Vec<(usize, usize)> = Vec::new();
    for &i in &keep {
        for &j in &neighbors[i] {
            let (a, b) = (index_of[i], index_of[j]);
            if a < b {
                new_edges.push((a, b));
            }
        }
    }
    new_edges.sort_unstable();
    new_edges.dedup();
    (new_bags, new_edges)
}

/// Re-parents each child under its preceding sibling when every vertex the
/// child shares with the rest of the tree (a subset of child bag ∩ parent
/// bag) appears in all bags along the sibling chain. Occurrence subtrees
/// stay connected, so validity is preserved; branching collapses to paths.
fn chain_siblings(bags: &[Vec<usize>], children: &mut [Vec<usize>], order: &[usize]) {
    for &p in order {
        let kids = std::mem::take(&mut children[p]);
        if kids.len() < 2 {
            children[p] = kids;
            continue;
        }
        let mut leaders = Vec::new();
        let mut tail = usize::MAX;
        let mut common: Vec<usize> = Vec::new();
        for c in kids {
            let sep: Vec<usize> = bags[c]
                .iter()
                .copied()
                .filter(|v| bags[p].contains(v))
                .collect();
            if tail != usize::MAX && sep.iter().all(|v| common.contains(v)) {
                children[tail].push(c);
                common.retain(|v| bags[c].contains(v));
            } else {
                leaders.push(c);
                common = bags[c].clone();
            }
            tail = c;
        }
        children[p] = leaders;
    }
}

#[derive(Default)]
struct NiceBuilder {
    bags: Vec<Vec<usize>>,
    kinds: Vec<NodeKind>,
    children: Vec<Vec<usize>>,
}

impl NiceBuilder {
    fn push(&mut self, bag: Vec<usize>, kind: NodeKind, children: Vec<usize>) -> usize {
        self.bags.push(bag);
        self.kinds.push(kind);
        self.children.push(children);
        self.bags.len() - 1
    }

    fn leaf_chain(&mut self, bag: &[usize]) -> usize {
        let mut cur = self.push(vec![bag[0]], NodeKind::Leaf, vec![]);
        for (i, &v) in bag.iter().enumerate().skip(1) {
            cur = self.push(bag[..=i].to_vec(), NodeKind::Introduce(v), vec![cur]);
        }
        cur
    }

    /// Forget/introduce chain transforming `from` into `to`, one vertex per
    /// node. Returns the top node, whose bag equals `to`.
    fn chain(&mut self, top: usize, from: &[usize], to: &[usize]) -> usize {
        let mut cur = top;
        let mut bag: Vec<usize> = from.to_vec();
        for &v in from.iter().filter(|v| !to.contains(v)) {
            bag.retain(|&u| u != v);
            cur = self.push(bag.clone(), NodeKind::Forget(v), vec![cur]);
        }
        for &v in to.iter().filter(|v| !from.contains(v)) {
            bag.push(v);
            bag.sort_unstable();
            cur = self.push(bag.clone(), NodeKind::Introduce(v), vec![cur]);
        }
        debug_assert_eq!(bag, to);
        cur
    }

    fn join(&mut self, bag: &[usize], left: usize, right: usize) -> usize {
        self.push(bag.to_vec(), NodeKind::Join, vec![left, right])
    }

    fn finish(self, root: usize) -> NiceTreeDecomposition {
        let mut parent = vec![None; self.bags.len()];
        for (i, kids) in self.children.iter().enumerate() {
            for &c in kids {
                parent[c] = Some(i);
            }
        }
        NiceTreeDecomposition {
            bags: self.bags,
            kinds: self.kinds,
            children: self.children,
            parent,
            root,
        }
    }
}

/// Exact treewidth by dynamic programming over elimination prefixes.
/// Exponential in n; refuse anything beyond 12 vertices. Test oracle only.
pub fn exact_treewidth(g: &Graph) -> Result<usize, &'static str> {
    const CAP: usize = 12;
    let n = g.n();
    if n > CAP {
        return Err("exact treewidth capped at 12 vertices");
    }
    if n == 0 {
        return Ok(0);
    }
    // f[S] = best over orders eliminating exactly S first of the largest
    // elimination degree seen; the degree of v given eliminated set W is the
    // number of vertices outside W reachable from v through W.
    let reach = |v: usize, w: u32| -> usize {
        let mut seen = 1u32 << v;
        let mut stack = vec![v];
        let mut count = 0;
        while let Some(u) = stack.pop() {
            for &(x, _) in g.neighbors(u) {
                if seen & (1 << x) != 0 {
                    continue;
                }
                seen |= 1 << x;
                if w & (1 << x) != 0 {
                    stack.push(x);
                } else {
                    count += 1;
                }
            }
        }
        count
    };
    let full = (1u32 << n) - 1;
    let mut f = vec![usize::MAX; (full as usize) + 1];
    f[0] = 0;
    for s in 1..=full {
        let mut best = usize::MAX;
        for v in 0..n {
            if s & (1 << v) == 0 {
                continue;
            }
            let rest = s & !(1 << v);
            let prev = f[rest as usize];
            if prev == usize::MAX {
                continue;
            }
            best = best.min(prev.max(reach(v, rest)));
        }
        f[s as usize] = best;
    }
    Ok(f[full as usize])
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PaceError {
    #[error("missing or malformed header: {0}")]
    BadHeader(String),
    #[error("line {0}: {1}")]
    BadLine(usize, String),
    #[error("bag id {0} out of range")]
    BagIdOutOfRange(usize),
    #[error("bag {0} defined twice")]
    DuplicateBag(usize),
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
}

/// Serializes in the PACE-style format: `s td <bags> <max bag size> <n>`,
/// then `b <id> <vertices...>` lines, then tree edges, everything 1-based
/// and LF-terminated. Output is canonical, so parse/serialize round-trips
/// are bit-exact.
pub fn to_pace_string(td: &TreeDecomposition, n: usize) -> String {
    let mut s = String::new();
    let max_bag = td.bags.iter().map(|b| b.len()).max().unwrap_or(0);
    s.push_str(&format!("s td {} {} {}\n", td.bags.len(), max_bag, n));
    for (i, bag) in td.bags.iter().enumerate() {
        s.push_str(&format!("b {}", i + 1));
        for &v in bag {
            s.push_str(&format!(" {}", v + 1));
        }
        s.push('\n');
    }
    let mut edges = td.tree_edges.clone();
    edges.sort_unstable();
    for (a, b) in edges {
        s.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    s
}

/// Parses the PACE-style format. Returns the decomposition and the vertex
/// count declared in the header. Comment lines starting with `c` are
/// skipped.
pub fn from_pace_str(input: &str) -> Result<(TreeDecomposition, usize), PaceError> {
    let mut header: Option<(usize, usize)> = None; // (num_bags, n)
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    for (lineno, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut it = line.split_ascii_whitespace();
        match it.next() {
            Some("s") => {
                if header.is_some() {
                    return Err(PaceError::BadLine(lineno + 1, "second header".into()));
                }
                let rest: Vec<&str> = it.collect();
                let [kind, nb, _maxw, n] = rest[..] else {
                    return Err(PaceError::BadHeader(line.into()));
                };
                if kind != "td" {
                    return Err(PaceError::BadHeader(line.into()));
                }
                let nb: usize = nb.parse().map_err(|_| PaceError::BadHeader(line.into()))?;
                let n: usize = n.parse().map_err(|_| PaceError::BadHeader(line.into()))?;
                bags = vec![None; nb];
                header = Some((nb, n));
            }
            Some("b") => {
                let (nb, n) = header.ok_or_else(|| PaceError::BadHeader("missing".into()))?;
                let mut nums = Vec::new();
                for tok in it {
                    nums.push(
                        tok.parse::<usize>()
                            .map_err(|_| PaceError::BadLine(lineno + 1, tok.into()))?,
                    );
                }
                let [id, verts @ ..] = &nums[..] else {
                    return Err(PaceError::BadLine(lineno + 1, "empty bag line".into()));
                };
                if *id == 0 || *id > nb {
                    return Err(PaceError::BagIdOutOfRange(*id));
                }
                if bags[id - 1].is_some() {
                    return Err(PaceError::DuplicateBag(*id));
                }
                let mut bag = Vec::with_capacity(verts.len());
                for &v in verts {
                    if v == 0 || v > n {
                        return Err(PaceError::VertexOutOfRange(v));
                    }
                    bag.push(v - 1);
                }
                bag.sort_unstable();
                bag.dedup();
                bags[id - 1] = Some(bag);
            }
            Some(tok) => {
                let (nb, _) = header.ok_or_else(|| PaceError::BadHeader("missing".into()))?;
                let a: usize = tok
                    .parse()
                    .map_err(|_| PaceError::BadLine(lineno + 1, tok.into()))?;
                let b: usize = it
                    .next()
                    .ok_or_else(|| PaceError::BadLine(lineno + 1, "missing endpoint".into()))?
                    .parse()
                    .map_err(|_| PaceError::BadLine(lineno + 1, line.into()))?;
                if it.next().is_some() {
                    return Err(PaceError::BadLine(lineno + 1, "trailing tokens".into()));
                }
                for x in [a, b] {
                    if x == 0 || x > nb {
                        return Err(PaceError::BagIdOutOfRange(x));
                    }
                }
                edges.push(((a - 1).min(b - 1), (a - 1).max(b - 1)));
            }
            None => unreachable!("empty lines skipped"),
        }
    }
    let (_, n) = header.ok_or_else(|| PaceError::BadHeader("missing".into()))?;
    let bags: Vec<Vec<usize>> = bags.into_iter().map(|b| b.unwrap_or_default()).collect();
    Ok((
        TreeDecomposition {
            bags,
            tree_edges: edges,
        },
        n,
    ))
}
