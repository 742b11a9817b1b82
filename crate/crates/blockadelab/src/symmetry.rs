//! Automorphism groups of weighted blockade graphs, their action on
//! configurations, orbit decompositions and the fully-symmetric test.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize, Serializer};

use crate::combinatorics::mwis;
use crate::error::{Error, Result};
use crate::model::{
    restrict_language_to_ports, BlockadeGraph, BlockadeStructure, Configuration, Language, PortMap,
    DISTANCE_TOLERANCE,
};

/// Default vertex cap of the automorphism search.
pub const DEFAULT_AUTOMORPHISM_LIMIT: usize = 512;

/// Bijection of `0..n`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Fails unless `image` is a bijection of `0..image.len()`.
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &x in &image {
            if x >= image.len() || std::mem::replace(&mut seen[x], true) {
                return Err(Error::Argument(format!("{image:?} is not a permutation")));
            }
        }
        Ok(Permutation { image })
    }

    pub fn identity(n: usize) -> Self {
        Permutation {
            image: (0..n).collect(),
        }
    }

    /// Product of disjoint or overlapping cycles, applied left to right.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut p = Permutation::identity(n);
        for cycle in cycles {
            let mut image: Vec<usize> = (0..n).collect();
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n {
                    return Err(Error::Argument(format!("cycle entry {a} out of range")));
                }
                image[a] = cycle[(k + 1) % cycle.len()];
            }
            p = p.then(&Permutation::new(image)?);
        }
        Ok(p)
    }

    /// Swaps `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut image: Vec<usize> = (0..n).collect();
        image.swap(a, b);
        Permutation { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.image[i]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    /// `self` followed by `other`: `i ↦ other(self(i))`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation {
            image: self.image.iter().map(|&x| other.image[x]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut image = vec![0; self.len()];
        for (i, &x) in self.image.iter().enumerate() {
            image[x] = i;
        }
        Permutation { image }
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &x)| i == x)
    }

    /// Points moved by the permutation.
    pub fn support(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.image[i] != i).collect()
    }

    fn first_moved_point(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.image[i] != i)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.image)
    }
}

/// True when `p` preserves weights and adjacency of `g`.
pub fn is_automorphism(g: &BlockadeGraph, p: &Permutation) -> bool {
    p.len() == g.n()
        && (0..g.n()).all(|v| g.weight(v) == g.weight(p.apply(v)))
        && g.edges().iter().all(|&(a, b)| g.has_edge(p.apply(a), p.apply(b)))
}

/// `act(φ, n)_i = n_{φ(i)}`.
pub fn act(p: &Permutation, c: &Configuration) -> Result<Configuration> {
    if p.len() != c.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            found: c.len(),
        });
    }
    Ok(Configuration::from_bits(
        &(0..c.len()).map(|i| c.get(p.apply(i))).collect::<Vec<_>>(),
    ))
}

fn serialize_biguint<S: Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// Generating set and exact order of an automorphism group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutGroup {
    pub n: usize,
    pub generators: Vec<Permutation>,
    #[serde(serialize_with = "serialize_biguint")]
    pub order: BigUint,
}

impl AutGroup {
    /// Group generated by `generators`, its order taken from a stabilizer chain.
    pub fn from_generators(n: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(bad) = generators.iter().find(|p| p.len() != n) {
            return Err(Error::LengthMismatch {
                expected: n,
                found: bad.len(),
            });
        }
        let order = StabilizerChain::new(n, &generators).order();
        Ok(AutGroup { n, generators, order })
    }

    /// Orbits of the vertices, each sorted, ordered by smallest member.
    pub fn vertex_orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for g in &self.generators {
            for i in 0..self.n {
                uf.union(i, g.apply(i));
            }
        }
        uf.classes()
    }
}

/// Automorphism group with the default vertex cap.
pub fn automorphism_group(g: &BlockadeGraph) -> Result<AutGroup> {
    automorphism_group_with_limit(g, DEFAULT_AUTOMORPHISM_LIMIT)
}

/// Automorphism group via individualization and equitable refinement.
///
/// The initial colouring is (weight, degree); the order is the product of the
/// stabilizer orbit lengths along the leftmost search path and is checked
/// against an independent Schreier–Sims chain on the generators.
pub fn automorphism_group_with_limit(g: &BlockadeGraph, limit: usize) -> Result<AutGroup> {
    if g.n() > limit {
        return Err(Error::LimitExceeded {
            what: "automorphism search vertex count",
            size: g.n() as u128,
            limit: limit as u128,
        });
    }
    let (generators, order) = AutomorphismSearch::new(g).run();
    for p in &generators {
        if !is_automorphism(g, p) {
            return Err(Error::Build(format!("search produced a non-automorphism {p:?}")));
        }
    }
    let chain_order = StabilizerChain::new(g.n(), &generators).order();
    if chain_order != order {
        return Err(Error::Build(format!(
            "search order {order} disagrees with stabilizer-chain order {chain_order}"
        )));
    }
    Ok(AutGroup {
        n: g.n(),
        generators,
        order,
    })
}

type Cells = Vec<Vec<usize>>;

struct SearchNode {
    cells: Cells,
    trace: u64,
    // index of the cell individualized from this node (None at leaves)
    target: Option<usize>,
}

struct AutomorphismSearch<'a> {
    g: &'a BlockadeGraph,
    path: Vec<SearchNode>,
    first_leaf: Vec<usize>,
}

impl<'a> AutomorphismSearch<'a> {
    fn new(g: &'a BlockadeGraph) -> Self {
        let mut keys: Vec<(u32, usize)> = (0..g.n()).map(|v| (g.weight(v), g.degree(v))).collect();
        keys.sort_unstable();
        keys.dedup();
        let mut cells: Cells = vec![Vec::new(); keys.len()];
        for v in 0..g.n() {
            let k = keys
                .binary_search(&(g.weight(v), g.degree(v)))
                .expect("every key was collected");
            cells[k].push(v);
        }
        let trace = refine(g, &mut cells);
        let mut path = Vec::new();
        let mut node = SearchNode {
            cells,
            trace,
            target: None,
        };
        loop {
            match node.cells.iter().position(|c| c.len() > 1) {
                None => break,
                Some(t) => {
                    node.target = Some(t);
                    let v = node.cells[t][0];
                    let mut child = individualize(&node.cells, t, v);
                    let trace = refine(g, &mut child);
                    path.push(node);
                    node = SearchNode {
                        cells: child,
                        trace,
                        target: None,
                    };
                }
            }
        }
        let first_leaf = node.cells.iter().map(|c| c[0]).collect();
        path.push(node);
        AutomorphismSearch { g, path, first_leaf }
    }

    fn run(&self) -> (Vec<Permutation>, BigUint) {
        let n = self.g.n();
        let mut generators: Vec<Permutation> = Vec::new();
        let mut order = BigUint::from(1u32);
        let mut uf = UnionFind::new(n);
        for level in (0..self.path.len() - 1).rev() {
            let node = &self.path[level];
            let t = node.target.expect("inner nodes have a target");
            let v = node.cells[t][0];
            for &w in &node.cells[t][1..] {
                if uf.find(v) == uf.find(w) {
                    continue;
                }
                if let Some(p) = self.find_automorphism(level, &node.cells, w) {
                    for i in 0..n {
                        uf.union(i, p.apply(i));
                    }
                    generators.push(p);
                }
            }
            let orbit = node.cells[t].iter().filter(|&&w| uf.find(w) == uf.find(v)).count();
            order *= BigUint::from(orbit);
        }
        (generators, order)
    }

    // Searches the subtree reached by individualizing `w` at `level` for a leaf
    // that maps the first leaf onto itself by an automorphism.
    fn find_automorphism(&self, level: usize, cells: &Cells, w: usize) -> Option<Permutation> {
        let t = self.path[level].target.expect("inner nodes have a target");
        let mut child = individualize(cells, t, w);
        let trace = refine(self.g, &mut child);
        let reference = &self.path[level + 1];
        if trace != reference.trace {
            return None;
        }
        match reference.target {
            None => {
                let mut image = vec![0; self.g.n()];
                for (k, c) in child.iter().enumerate() {
                    image[self.first_leaf[k]] = c[0];
                }
                let p = Permutation { image };
                is_automorphism(self.g, &p).then_some(p)
            }
            Some(next) => {
                let candidates = child[next].clone();
                candidates
                    .into_iter()
                    .find_map(|u| self.find_automorphism(level + 1, &child, u))
            }
        }
    }
}

fn individualize(cells: &Cells, target: usize, v: usize) -> Cells {
    let mut out = Vec::with_capacity(cells.len() + 1);
    out.extend_from_slice(&cells[..target]);
    out.push(vec![v]);
    out.push(cells[target].iter().copied().filter(|&u| u != v).collect());
    out.extend_from_slice(&cells[target + 1..]);
    out
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x0000_0100_0000_01b3).rotate_left(29)
}

/// Refines an ordered partition to the coarsest equitable refinement.
///
/// Every decision depends only on cell indices and neighbour counts, so the
/// result (and the returned trace hash) is invariant under relabelling.
fn refine(g: &BlockadeGraph, cells: &mut Cells) -> u64 {
    let n = g.n();
    let mut trace: u64 = 0xcbf2_9ce4_8422_2325;
    let mut counts = vec![0u32; n];
    loop {
        let mut changed = false;
        let mut s = 0;
        while s < cells.len() {
            for &v in &cells[s] {
                for &u in g.neighbors(v) {
                    counts[u] += 1;
                }
            }
            let mut next: Cells = Vec::with_capacity(cells.len());
            for (d, cell) in cells.iter().enumerate() {
                let first = counts[cell[0]];
                if cell.iter().all(|&u| counts[u] == first) {
                    next.push(cell.clone());
                    continue;
                }
                let mut sorted = cell.clone();
                sorted.sort_by_key(|&u| (counts[u], u));
                let mut start = 0;
                trace = mix(trace, ((s as u64) << 32) | d as u64);
                while start < sorted.len() {
                    let c = counts[sorted[start]];
                    let mut end = start;
                    while end < sorted.len() && counts[sorted[end]] == c {
                        end += 1;
                    }
                    trace = mix(trace, (u64::from(c) << 32) | (end - start) as u64);
                    let mut fragment = sorted[start..end].to_vec();
                    fragment.sort_unstable();
                    next.push(fragment);
                    start = end;
                }
                changed = true;
            }
            for &v in &cells[s] {
                for &u in g.neighbors(v) {
                    counts[u] = 0;
                }
            }
            *cells = next;
            s += 1;
        }
        if !changed {
            break;
        }
    }
    for c in cells.iter() {
        trace = mix(trace, c.len() as u64);
    }
    trace
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut y = x;
        while self.parent[y] != root {
            let next = self.parent[y];
            self.parent[y] = root;
            y = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }

    fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            let r = self.find(v);
            by_root[r].push(v);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

struct ChainLevel {
    base: usize,
    generators: Vec<Permutation>,
    orbit: Vec<usize>,
    // transversal: representative mapping the base point to each orbit point
    representatives: Vec<Option<Permutation>>,
    checked: HashSet<(usize, usize)>,
}

impl ChainLevel {
    fn new(n: usize, base: usize) -> Self {
        let mut representatives = vec![None; n];
        representatives[base] = Some(Permutation::identity(n));
        ChainLevel {
            base,
            generators: Vec::new(),
            orbit: vec![base],
            representatives,
            checked: HashSet::new(),
        }
    }

    fn add_generator(&mut self, p: Permutation) {
        self.generators.push(p);
        // extend the orbit without touching existing representatives
        let mut k = 0;
        while k < self.orbit.len() {
            let x = self.orbit[k];
            for s in &self.generators {
                let y = s.apply(x);
                if self.representatives[y].is_none() {
                    let rep = self.representatives[x]
                        .as_ref()
                        .expect("orbit points have representatives")
                        .then(s);
                    self.representatives[y] = Some(rep);
                    self.orbit.push(y);
                }
            }
            k += 1;
        }
    }
}

/// Base and strong generating set built by the deterministic Schreier–Sims algorithm.
pub struct StabilizerChain {
    n: usize,
    levels: Vec<ChainLevel>,
}

impl StabilizerChain {
    pub fn new(n: usize, generators: &[Permutation]) -> Self {
        let mut chain = StabilizerChain { n, levels: Vec::new() };
        for g in generators {
            let (residue, depth) = chain.sift(g.clone(), 0);
            if !residue.is_identity() {
                chain.insert(residue, 0, depth);
                chain.complete();
            }
        }
        chain
    }

    /// Product of the basic orbit lengths.
    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Membership test by sifting.
    pub fn contains(&self, p: &Permutation) -> bool {
        p.len() == self.n && self.sift(p.clone(), 0).0.is_identity()
    }

    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (j, level) in self.levels.iter().enumerate().skip(from) {
            let image = g.apply(level.base);
            match &level.representatives[image] {
                None => return (g, j),
                Some(rep) => g = g.then(&rep.inverse()),
            }
        }
        (g, self.levels.len())
    }

    // `p` fixes the base points before `depth`; record it on levels from..=depth
    fn insert(&mut self, p: Permutation, from: usize, depth: usize) {
        if depth == self.levels.len() {
            let base = p.first_moved_point().expect("residue is not the identity");
            self.levels.push(ChainLevel::new(self.n, base));
        }
        for level in &mut self.levels[from..=depth] {
            level.add_generator(p.clone());
        }
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let iu = i as usize;
            let orbit_len = self.levels[iu].orbit.len();
            for k in 0..orbit_len {
                let delta = self.levels[iu].orbit[k];
                for s_idx in 0..self.levels[iu].generators.len() {
                    if !self.levels[iu].checked.insert((delta, s_idx)) {
                        continue;
                    }
                    let level = &self.levels[iu];
                    let s = &level.generators[s_idx];
                    let u_delta = level.representatives[delta].as_ref().expect("orbit point");
                    let u_image = level.representatives[s.apply(delta)]
                        .as_ref()
                        .expect("orbits are closed");
                    let schreier = u_delta.then(s).then(&u_image.inverse());
                    let (residue, depth) = self.sift(schreier, iu + 1);
                    if !residue.is_identity() {
                        self.insert(residue, iu + 1, depth);
                        i = depth as isize;
                        continue 'outer;
                    }
                }
            }
            i -= 1;
        }
    }
}

/// Order of the group generated by `generators` on `n` points.
pub fn schreier_sims_order(n: usize, generators: &[Permutation]) -> BigUint {
    StabilizerChain::new(n, generators).order()
}

/// Every element of the generated group; refuses groups larger than `cap`.
pub fn group_elements(n: usize, generators: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    let identity = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([identity.clone()]);
    let mut out = vec![identity.clone()];
    let mut queue = VecDeque::from([identity]);
    while let Some(x) = queue.pop_front() {
        for g in generators {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if out.len() == cap {
                    return Err(Error::LimitExceeded {
                        what: "group element count",
                        size: cap as u128 + 1,
                        limit: cap as u128,
                    });
                }
                out.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Ok(out)
}

/// Partition of a language into orbits, numbered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Language>,
}

impl OrbitDecomposition {
    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Orbits projected onto the ports (duplicates inside an orbit merged).
    pub fn restricted_to_ports(&self, ports: &PortMap) -> Vec<Language> {
        self.orbits
            .iter()
            .map(|o| restrict_language_to_ports(o, ports))
            .collect()
    }
}

/// Orbits of `l` under the group generated by `a`'s generators.
pub fn orbit_decomposition(a: &AutGroup, l: &Language) -> Result<OrbitDecomposition> {
    orbits_under(&a.generators, l)
}

/// Orbits of `l` under the group generated by `generators`.
///
/// Fails if some generator maps a member outside `l`.
pub fn orbits_under(generators: &[Permutation], l: &Language) -> Result<OrbitDecomposition> {
    let mut seen: HashSet<&Configuration> = HashSet::new();
    let mut orbits = Vec::new();
    for start in l {
        if seen.contains(start) {
            continue;
        }
        seen.insert(start);
        let mut members = vec![start.clone()];
        let mut k = 0;
        while k < members.len() {
            for p in generators {
                let image = act(p, &members[k])?;
                match l.index_of(&image) {
                    None => {
                        return Err(Error::NotInvariant(format!(
                            "{p:?} maps {} to {image}, which is not in the language",
                            members[k]
                        )))
                    }
                    Some(idx) => {
                        let member = &l.as_slice()[idx];
                        if seen.insert(member) {
                            members.push(member.clone());
                        }
                    }
                }
            }
            k += 1;
        }
        orbits.push(Language::new(members).expect("orbit members share a length"));
    }
    // starts are visited in lexicographic order, so orbits are already sorted by minimum
    Ok(OrbitDecomposition { orbits })
}

/// Verdict of the fully-symmetric test with its witness.
#[derive(Clone, Debug, Serialize)]
pub struct FullSymmetryReport {
    pub fully_symmetric: bool,
    pub group: AutGroup,
    pub language: Language,
    pub orbits: OrbitDecomposition,
    pub port_orbits: Option<Vec<Language>>,
}

/// True iff the MWIS language of `g` is a single orbit of `Aut(g)`.
pub fn is_fully_symmetric(g: &BlockadeGraph, ports: Option<&PortMap>) -> Result<FullSymmetryReport> {
    let language = mwis(g)?.language;
    let group = automorphism_group(g)?;
    let orbits = orbit_decomposition(&group, &language)?;
    let port_orbits = ports.map(|p| orbits.restricted_to_ports(p));
    Ok(FullSymmetryReport {
        fully_symmetric: orbits.len() == 1,
        group,
        language,
        orbits,
        port_orbits,
    })
}

/// Outcome of comparing group and language sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BurnsideReport {
    pub single_orbit: bool,
    pub bound_satisfied: bool,
    #[serde(serialize_with = "serialize_biguint")]
    pub group_order: BigUint,
    pub language_size: usize,
}

/// A single orbit needs at least as many group elements as members.
pub fn burnside_check(a: &AutGroup, l: &Language) -> Result<BurnsideReport> {
    let orbits = orbit_decomposition(a, l)?;
    let single_orbit = orbits.len() == 1;
    let bound_satisfied = !single_orbit || a.order >= BigUint::from(l.len());
    Ok(BurnsideReport {
        single_orbit,
        bound_satisfied,
        group_order: a.order.clone(),
        language_size: l.len(),
    })
}

/// True iff `p` preserves every pairwise distance of the structure.
pub fn isometry_realizable(s: &BlockadeStructure, p: &Permutation) -> bool {
    let tol = DISTANCE_TOLERANCE * s.blockade_radius();
    p.len() == s.len()
        && (0..s.len()).all(|i| {
            (i + 1..s.len()).all(|j| (s.distance(i, j) - s.distance(p.apply(i), p.apply(j))).abs() <= tol)
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> BlockadeGraph {
        BlockadeGraph::new(n, (0..n).map(|i| (i, (i + 1) % n)), vec![1; n]).unwrap()
    }

    #[test]
    fn single_edge_has_order_two() {
        let g = BlockadeGraph::new(2, [(0, 1)], vec![1, 1]).unwrap();
        assert_eq!(automorphism_group(&g).unwrap().order, BigUint::from(2u32));
    }

    #[test]
    fn weights_break_symmetry() {
        let g = BlockadeGraph::new(2, [(0, 1)], vec![1, 2]).unwrap();
        assert_eq!(automorphism_group(&g).unwrap().order, BigUint::from(1u32));
    }

    #[test]
    fn cycles_have_dihedral_groups() {
        for n in 3..12 {
            let a = automorphism_group(&cycle(n)).unwrap();
            assert_eq!(a.order, BigUint::from(2 * n), "C_{n}");
        }
    }

    #[test]
    fn complete_and_empty_graphs_have_symmetric_groups() {
        let k5 = BlockadeGraph::new(5, (0..5).flat_map(|i| (i + 1..5).map(move |j| (i, j))), vec![3; 5]).unwrap();
        assert_eq!(automorphism_group(&k5).unwrap().order, BigUint::from(120u32));
        let e6 = BlockadeGraph::new(6, [], vec![0; 6]).unwrap();
        assert_eq!(automorphism_group(&e6).unwrap().order, BigUint::from(720u32));
    }

    #[test]
    fn petersen_graph_order() {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let g = BlockadeGraph::new(10, outer.chain(spokes).chain(inner), vec![1; 10]).unwrap();
        assert_eq!(automorphism_group(&g).unwrap().order, BigUint::from(120u32));
    }

    #[test]
    fn disjoint_triangles_wreath_product() {
        let edges = (0..3).flat_map(|t| [(3 * t, 3 * t + 1), (3 * t + 1, 3 * t + 2), (3 * t, 3 * t + 2)]);
        let g = BlockadeGraph::new(9, edges, vec![1; 9]).unwrap();
        // S3 wr S3 = 6^3 * 6
        assert_eq!(automorphism_group(&g).unwrap().order, BigUint::from(1296u32));
    }

    #[test]
    fn hypercube_q4_order() {
        let edges = (0..16usize).flat_map(|v| (0..4).map(move |b| (v, v ^ (1 << b)))).filter(|(a, b)| a < b);
        let g = BlockadeGraph::new(16, edges, vec![1; 16]).unwrap();
        assert_eq!(automorphism_group(&g).unwrap().order, BigUint::from(384u32));
    }

    #[test]
    fn stabilizer_chain_of_symmetric_group_generators() {
        let n = 7;
        let gens = vec![
            Permutation::transposition(n, 0, 1),
            Permutation::from_cycles(n, &[&[0, 1, 2, 3, 4, 5, 6]]).unwrap(),
        ];
        assert_eq!(schreier_sims_order(n, &gens), BigUint::from(5040u32));
        let chain = StabilizerChain::new(n, &gens[1..]);
        assert_eq!(chain.order(), BigUint::from(7u32));
        assert!(!chain.contains(&gens[0]));
    }

    #[test]
    fn act_follows_pullback_convention() {
        let p = Permutation::new(vec![1, 2, 0]).unwrap();
        let c: Configuration = "100".parse().unwrap();
        // component i of the result is component p(i) of the input
        assert_eq!(act(&p, &c).unwrap().to_string(), "001");
        let swap = Permutation::transposition(2, 0, 1);
        assert_eq!(act(&swap, &"01".parse().unwrap()).unwrap().to_string(), "10");
        assert!(act(&swap, &"011".parse().unwrap()).is_err());
    }

    #[test]
    fn orbits_of_empty_language() {
        let a = AutGroup::from_generators(3, vec![]).unwrap();
        assert!(orbit_decomposition(&a, &Language::empty()).unwrap().is_empty());
    }

    #[test]
    fn orbit_closure_violation_is_reported() {
        let a = AutGroup::from_generators(2, vec![Permutation::transposition(2, 0, 1)]).unwrap();
        let l = Language::parse_bit_strings("01").unwrap();
        assert!(matches!(orbit_decomposition(&a, &l), Err(Error::NotInvariant(_))));
    }

    #[test]
    fn burnside_trivial_group() {
        let a = AutGroup::from_generators(2, vec![]).unwrap();
        let l = Language::parse_bit_strings("10").unwrap();
        let r = burnside_check(&a, &l).unwrap();
        assert!(r.single_orbit && r.bound_satisfied);
    }

    #[test]
    fn group_elements_respects_cap() {
        let gens = vec![Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap()];
        assert_eq!(group_elements(5, &gens, 5).unwrap().len(), 5);
        assert!(group_elements(5, &gens, 4).is_err());
    }
}
