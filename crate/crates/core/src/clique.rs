//! Maximum clique computation for instance statistics.
//!
//! Small graphs get an exact branch-and-bound with a greedy-coloring upper
//! bound; anything larger falls back to a greedy lower bound and says so.

use crate::graph::Graph;

/// Largest vertex count for which [`max_clique`] stays exact.
pub const EXACT_CLIQUE_CAP: usize = 200;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueResult {
    pub size: usize,
    /// One clique of that size, sorted by vertex id.
    pub vertices: Vec<usize>,
    /// False when the size is only a greedy lower bound.
    pub exact: bool,
}

/// Computes the clique number, exactly up to [`EXACT_CLIQUE_CAP`] vertices.
pub fn max_clique(g: &Graph) -> CliqueResult {
    let mut best = greedy_clique(g);
    if g.n() > EXACT_CLIQUE_CAP {
        best.sort_unstable();
        return CliqueResult {
            size: best.len(),
            vertices: best,
            exact: false,
        };
    }
    let n = g.n();
    let mut adj = vec![vec![false; n]; n];
    for &(u, v, _) in g.edges() {
        adj[u][v] = true;
        adj[v][u] = true;
    }
    // Expanding high-degree vertices first makes the coloring bound bite.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
    let mut current = Vec::new();
    expand(&adj, &mut current, order, &mut best);
    best.sort_unstable();
    CliqueResult {
        size: best.len(),
        vertices: best,
        exact: true,
    }
}

/// Branch and bound over candidate sets. Candidates are greedily colored;
/// a vertex with color c can extend the clique by at most c + 1 vertices,
/// so branches that cannot beat the incumbent are cut.
fn expand(
    adj: &[Vec<bool>],
    current: &mut Vec<usize>,
    candidates: Vec<usize>,
    best: &mut Vec<usize>,
) {
    let colored = color_sort(adj, &candidates);
    for i in (0..colored.len()).rev() {
        let (v, color) = colored[i];
        if current.len() + color < best.len() {
            return; // earlier candidates have even smaller bounds
        }
        current.push(v);
        let rest: Vec<usize> = colored[..i]
            .iter()
            .map(|&(u, _)| u)
            .filter(|&u| adj[v][u])
            .collect();
        if rest.is_empty() {
            if current.len() > best.len() {
                *best = current.clone();
            }
        } else {
            expand(adj, current, rest, best);
        }
        current.pop();
    }
}

/// Greedy coloring of the candidate set, returned in nondecreasing color
/// order so the tail carries the largest bounds.
fn color_sort(adj: &[Vec<bool>], candidates: &[usize]) -> Vec<(usize, usize)> {
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in candidates {
        match classes
            .iter_mut()
            .find(|class| class.iter().all(|&u| !adj[u][v]))
        {
            Some(class) => class.push(v),
            None => classes.push(vec![v]),
        }
    }
    classes
        .iter()
        .enumerate()
        .flat_map(|(c, class)| class.iter().map(move |&v| (v, c)))
        .collect()
}

/// Grows a clique greedily from every seed vertex, keeping the best. Runs
/// in O(n * Δ^2); the result is a lower bound and a real clique.
fn greedy_clique(g: &Graph) -> Vec<usize> {
    let mut best: Vec<usize> = Vec::new();
    if g.n() > 0 {
        best.push(0);
    }
    for seed in 0..g.n() {
        let mut clique = vec![seed];
        let mut candidates: Vec<usize> = g.neighbors(seed).iter().map(|&(u, _)| u).collect();
        while !candidates.is_empty() {
            // Candidate keeping the most other candidates alive, then lowest id.
            let next = candidates
                .iter()
                .copied()
                .max_by_key(|&c| {
                    let alive = candidates.iter().filter(|&&o| g.has_edge(c, o)).count();
                    (alive, std::cmp::Reverse(c))
                })
                .unwrap();
            clique.push(next);
            candidates.retain(|&o| o != next && g.has_edge(next, o));
        }
        if clique.len() > best.len() {
            best = clique;
        }
    }
    best
}
