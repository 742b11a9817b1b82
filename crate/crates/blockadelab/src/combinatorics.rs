//! Independent sets, exact maximum-weight independent sets (classical ground
//! languages) and clique-contracting quotient graphs.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BlockadeGraph, Configuration, Language};

/// Default vertex cap of the exact MWIS solver.
pub const DEFAULT_MWIS_LIMIT: usize = 64;
/// Hard upper bound for the bitmask solver.
pub const MAX_MWIS_LIMIT: usize = 128;
/// Below this many vertices the solver enumerates every independent set.
pub const BRUTE_FORCE_BELOW: usize = 20;

/// Independent sets in lexicographic order, truncated to `max_count` when given.
pub fn enumerate_independent_sets(g: &BlockadeGraph, max_count: Option<usize>) -> Vec<Configuration> {
    let mut out = Vec::new();
    let mut walker = IndependentSetWalker::new(g);
    walker.walk(&mut |c| {
        out.push(c.clone());
        max_count.is_none_or(|m| out.len() < m)
    });
    out
}

/// All independent sets, or an error if there are more than `cap`.
pub fn enumerate_all_independent_sets(g: &BlockadeGraph, cap: usize) -> Result<Vec<Configuration>> {
    let sets = enumerate_independent_sets(g, Some(cap.saturating_add(1)));
    if sets.len() > cap {
        return Err(Error::LimitExceeded {
            what: "independent-set count",
            size: sets.len() as u128,
            limit: cap as u128,
        });
    }
    Ok(sets)
}

/// Number of independent sets (including the empty one).
pub fn count_independent_sets(g: &BlockadeGraph) -> u128 {
    let mut count = 0u128;
    IndependentSetWalker::new(g).walk(&mut |_| {
        count += 1;
        true
    });
    count
}

/// Depth-first walk deciding atom 0 first, "0" before "1", which visits
/// independent sets in lexicographic order.
struct IndependentSetWalker<'a> {
    g: &'a BlockadeGraph,
    blocked: Vec<u32>,
    current: Configuration,
}

impl<'a> IndependentSetWalker<'a> {
    fn new(g: &'a BlockadeGraph) -> Self {
        IndependentSetWalker {
            g,
            blocked: vec![0; g.n()],
            current: Configuration::zeros(g.n()),
        }
    }

    fn walk(&mut self, visit: &mut dyn FnMut(&Configuration) -> bool) {
        self.step(0, visit);
    }

    // returns false once the visitor asks to stop
    fn step(&mut self, v: usize, visit: &mut dyn FnMut(&Configuration) -> bool) -> bool {
        if v == self.g.n() {
            return visit(&self.current);
        }
        if !self.step(v + 1, visit) {
            return false;
        }
        if self.blocked[v] == 0 {
            self.current.set(v, true);
            for &u in self.g.neighbors(v) {
                self.blocked[u] += 1;
            }
            let keep_going = self.step(v + 1, visit);
            for &u in self.g.neighbors(v) {
                self.blocked[u] -= 1;
            }
            self.current.set(v, false);
            return keep_going;
        }
        true
    }
}

/// Maximum weight and every independent set attaining it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MwisResult {
    pub max_weight: u64,
    pub language: Language,
    /// Total number of independent sets, when the solver enumerated all of them.
    pub independent_count: Option<u128>,
}

/// Exact MWIS with the default vertex cap.
pub fn mwis(g: &BlockadeGraph) -> Result<MwisResult> {
    mwis_with_limit(g, DEFAULT_MWIS_LIMIT)
}

/// Exact MWIS refusing graphs with more than `limit` vertices.
pub fn mwis_with_limit(g: &BlockadeGraph, limit: usize) -> Result<MwisResult> {
    let limit = limit.min(MAX_MWIS_LIMIT);
    if g.n() > limit {
        return Err(Error::LimitExceeded {
            what: "MWIS vertex count",
            size: g.n() as u128,
            limit: limit as u128,
        });
    }
    if g.n() < BRUTE_FORCE_BELOW {
        Ok(mwis_by_enumeration(g))
    } else {
        Ok(mwis_branch_and_bound(g))
    }
}

/// Reference solver: enumerate all independent sets.
pub fn mwis_by_enumeration(g: &BlockadeGraph) -> MwisResult {
    let mut best = 0u64;
    let mut winners: Vec<Configuration> = Vec::new();
    let mut count = 0u128;
    IndependentSetWalker::new(g).walk(&mut |c| {
        count += 1;
        let w = g.configuration_weight(c);
        if w > best || winners.is_empty() {
            best = w;
            winners.clear();
        }
        if w == best {
            winners.push(c.clone());
        }
        true
    });
    MwisResult {
        max_weight: best,
        language: Language::new(winners).expect("all sets have the graph's length"),
        independent_count: Some(count),
    }
}

/// Branch and bound over `u128` vertex masks; bound = current weight plus a
/// greedy clique-cover bound on the residual candidates.
pub fn mwis_branch_and_bound(g: &BlockadeGraph) -> MwisResult {
    assert!(g.n() <= MAX_MWIS_LIMIT, "branch and bound holds at most 128 vertices");
    let neighbor_masks: Vec<u128> = (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u128, |m, &u| m | 1u128 << u))
        .collect();
    // branching priority: weight desc, degree desc, id asc
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&a, &b| {
        g.weight(b)
            .cmp(&g.weight(a))
            .then(g.degree(b).cmp(&g.degree(a)))
            .then(a.cmp(&b))
    });
    let mut search = BranchAndBound {
        weights: g.weights().iter().map(|&w| u64::from(w)).collect(),
        neighbor_masks,
        order,
        best: None,
        winners: Vec::new(),
    };
    let all = if g.n() == 128 { u128::MAX } else { (1u128 << g.n()) - 1 };
    search.explore(all, 0, 0);
    let language = Language::new(search.winners.iter().map(|&m| Configuration::from_mask(g.n(), m)))
        .expect("masks share the graph's length");
    MwisResult {
        max_weight: search.best.unwrap_or(0),
        language,
        independent_count: None,
    }
}

struct BranchAndBound {
    weights: Vec<u64>,
    neighbor_masks: Vec<u128>,
    order: Vec<usize>,
    best: Option<u64>,
    winners: Vec<u128>,
}

impl BranchAndBound {
    fn explore(&mut self, candidates: u128, chosen: u128, weight: u64) {
        if candidates == 0 {
            match self.best {
                Some(b) if weight < b => {}
                Some(b) if weight == b => self.winners.push(chosen),
                _ => {
                    self.best = Some(weight);
                    self.winners.clear();
                    self.winners.push(chosen);
                }
            }
            return;
        }
        if let Some(b) = self.best {
            if weight + self.clique_cover_bound(candidates) < b {
                return;
            }
        }
        let v = *self
            .order
            .iter()
            .find(|&&v| candidates >> v & 1 == 1)
            .expect("candidates are nonempty");
        let bit = 1u128 << v;
        self.explore(
            candidates & !bit & !self.neighbor_masks[v],
            chosen | bit,
            weight + self.weights[v],
        );
        self.explore(candidates & !bit, chosen, weight);
    }

    // An independent set meets every clique at most once, so the sum of the
    // per-clique maximum weights bounds the residual MWIS.
    fn clique_cover_bound(&self, mut remaining: u128) -> u64 {
        let mut bound = 0;
        while remaining != 0 {
            let v = remaining.trailing_zeros() as usize;
            remaining &= !(1u128 << v);
            let mut heaviest = self.weights[v];
            let mut common = remaining & self.neighbor_masks[v];
            while common != 0 {
                let u = common.trailing_zeros() as usize;
                let bit = 1u128 << u;
                remaining &= !bit;
                common &= !bit & self.neighbor_masks[u];
                heaviest = heaviest.max(self.weights[u]);
            }
            bound += heaviest;
        }
        bound
    }
}

/// Rule selecting the vertex classes that a quotient contracts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CliqueRule {
    /// Vertices whose open neighbourhood induces a connected subgraph; the
    /// connected components of that set are contracted.
    ConnectedNeighborhood,
    /// Explicit vertex sets to contract.
    Explicit(Vec<Vec<usize>>),
}

/// Partition of the vertices into classes and the induced simple graph on classes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientGraph {
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    pub quotient_edges: Vec<(usize, usize)>,
}

impl QuotientGraph {
    /// Quotient as a weighted graph; a class weighs the sum of its members.
    pub fn to_graph(&self, g: &BlockadeGraph) -> BlockadeGraph {
        let weights = self
            .classes
            .iter()
            .map(|c| c.iter().map(|&v| g.weight(v)).sum())
            .collect();
        BlockadeGraph::new(self.classes.len(), self.quotient_edges.iter().copied(), weights)
            .expect("quotient edges are simple by construction")
    }
}

/// Contracts the clique components selected by `rule` to single vertices.
///
/// Components must be disjoint cliques; anything else is a structural error.
pub fn quotient_by_cliques(g: &BlockadeGraph, rule: &CliqueRule) -> Result<QuotientGraph> {
    let components = match rule {
        CliqueRule::ConnectedNeighborhood => connected_neighborhood_components(g),
        CliqueRule::Explicit(sets) => sets.clone(),
    };
    let mut class_of = vec![usize::MAX; g.n()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for comp in &components {
        let mut members = comp.clone();
        members.sort_unstable();
        members.dedup();
        for (k, &a) in members.iter().enumerate() {
            if a >= g.n() {
                return Err(Error::Argument(format!("vertex {a} out of range")));
            }
            if class_of[a] != usize::MAX {
                return Err(Error::Graph(format!("vertex {a} belongs to two contracted components")));
            }
            for &b in &members[k + 1..] {
                if !g.has_edge(a, b) {
                    return Err(Error::Graph(format!(
                        "component {members:?} is not a clique ({a} and {b} are not adjacent)"
                    )));
                }
            }
        }
        let id = classes.len();
        for &a in &members {
            class_of[a] = id;
        }
        classes.push(members);
    }
    for (v, class) in class_of.iter_mut().enumerate() {
        if *class == usize::MAX {
            *class = classes.len();
            classes.push(vec![v]);
        }
    }
    // renumber classes by their smallest member for a deterministic layout
    let mut order: Vec<usize> = (0..classes.len()).collect();
    order.sort_by_key(|&c| classes[c][0]);
    let mut rank = vec![0; classes.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    let classes: Vec<Vec<usize>> = order.iter().map(|&c| classes[c].clone()).collect();
    let class_of: Vec<usize> = class_of.iter().map(|&c| rank[c]).collect();
    let mut quotient_edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| (class_of[a], class_of[b]))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (a.min(b), a.max(b)))
        .collect();
    quotient_edges.sort_unstable();
    quotient_edges.dedup();
    Ok(QuotientGraph {
        classes,
        class_of,
        quotient_edges,
    })
}

/// Connected components (with at least two vertices) of the set of vertices
/// whose open neighbourhood is connected.
fn connected_neighborhood_components(g: &BlockadeGraph) -> Vec<Vec<usize>> {
    let selected: Vec<bool> = (0..g.n()).map(|v| neighborhood_is_connected(g, v)).collect();
    let mut seen = vec![false; g.n()];
    let mut components = Vec::new();
    for start in 0..g.n() {
        if !selected[start] || seen[start] {
            continue;
        }
        let mut comp = vec![start];
        seen[start] = true;
        let mut k = 0;
        while k < comp.len() {
            let v = comp[k];
            k += 1;
            for &u in g.neighbors(v) {
                if selected[u] && !seen[u] {
                    seen[u] = true;
                    comp.push(u);
                }
            }
        }
        if comp.len() > 1 {
            comp.sort_unstable();
            components.push(comp);
        }
    }
    components
}

fn neighborhood_is_connected(g: &BlockadeGraph, v: usize) -> bool {
    let nbrs = g.neighbors(v);
    if nbrs.is_empty() {
        return false;
    }
    let mut reached = vec![false; nbrs.len()];
    reached[0] = true;
    let mut stack = vec![0];
    while let Some(i) = stack.pop() {
        for j in 0..nbrs.len() {
            if !reached[j] && g.has_edge(nbrs[i], nbrs[j]) {
                reached[j] = true;
                stack.push(j);
            }
        }
    }
    reached.into_iter().all(|r| r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> BlockadeGraph {
        BlockadeGraph::new(3, [(0, 1), (1, 2)], vec![1, 1, 1]).unwrap()
    }

    #[test]
    fn single_edge_independent_sets() {
        let g = BlockadeGraph::new(2, [(0, 1)], vec![1, 1]).unwrap();
        let sets: Vec<String> = enumerate_independent_sets(&g, None)
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(sets, ["00", "01", "10"]);
    }

    #[test]
    fn empty_graph_has_all_subsets() {
        let g = BlockadeGraph::new(3, [], vec![1; 3]).unwrap();
        assert_eq!(enumerate_independent_sets(&g, None).len(), 8);
        assert_eq!(count_independent_sets(&g), 8);
    }

    #[test]
    fn truncation_and_completeness_guard() {
        let g = BlockadeGraph::new(3, [], vec![1; 3]).unwrap();
        assert_eq!(enumerate_independent_sets(&g, Some(3)).len(), 3);
        assert!(enumerate_all_independent_sets(&g, 7).is_err());
        assert_eq!(enumerate_all_independent_sets(&g, 8).unwrap().len(), 8);
    }

    #[test]
    fn path_of_three() {
        let r = mwis(&path3()).unwrap();
        assert_eq!(r.max_weight, 2);
        assert_eq!(r.language.to_text(), "101\n");
    }

    #[test]
    fn branch_and_bound_matches_enumeration_on_path() {
        let g = path3();
        let a = mwis_branch_and_bound(&g);
        let b = mwis_by_enumeration(&g);
        assert_eq!(a.max_weight, b.max_weight);
        assert_eq!(a.language, b.language);
    }

    #[test]
    fn size_limit_is_refused() {
        let g = BlockadeGraph::new(70, [], vec![1; 70]).unwrap();
        let err = mwis(&g).unwrap_err();
        assert!(err.is_resource_refusal());
    }

    #[test]
    fn zero_weight_vertices_double_the_language() {
        let g = BlockadeGraph::new(2, [], vec![1, 0]).unwrap();
        let r = mwis(&g).unwrap();
        assert_eq!(r.language.to_text(), "10\n11\n");
    }

    #[test]
    fn quotient_without_cliques_is_identity() {
        let g = path3();
        let q = quotient_by_cliques(&g, &CliqueRule::ConnectedNeighborhood).unwrap();
        assert_eq!(q.classes, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(q.quotient_edges, g.edges().to_vec());
    }

    #[test]
    fn overlapping_components_are_rejected() {
        let g = BlockadeGraph::new(3, [(0, 1), (1, 2), (0, 2)], vec![1; 3]).unwrap();
        let rule = CliqueRule::Explicit(vec![vec![0, 1], vec![1, 2]]);
        assert!(quotient_by_cliques(&g, &rule).is_err());
    }

    #[test]
    fn non_clique_component_is_rejected() {
        let rule = CliqueRule::Explicit(vec![vec![0, 2]]);
        assert!(quotient_by_cliques(&path3(), &rule).is_err());
    }
}
