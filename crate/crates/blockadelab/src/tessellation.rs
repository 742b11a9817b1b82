//! Honeycomb tessellations: the fully-symmetric loop structure built from FSU
//! vertices, its loop language and loop automorphisms, the single-port XOR
//! tessellation, and three lattice models from the literature.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{BlockadeGraph, Configuration, Language, PortMap};
use crate::symmetry::{is_automorphism, Permutation};

/// Largest cycle-space dimension `loop_language` will enumerate.
pub const MAX_LOOP_SPACE_DIMENSION: usize = 24;

/// Detuning of tetrahedron atoms in the loop structure.
pub const LOOP_TETRA_DETUNING: u32 = 4;
/// Detuning of an edge atom shared by two vertices (two amalgamated wings).
pub const LOOP_SHARED_EDGE_DETUNING: u32 = 2;
/// Detuning of an edge atom on a dangling boundary edge.
pub const LOOP_DANGLING_EDGE_DETUNING: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Boundary {
    Periodic,
    OpenRough,
}

impl FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" | "torus" => Ok(Boundary::Periodic),
            "open" | "open-rough" | "rough" => Ok(Boundary::OpenRough),
            other => Err(Error::Argument(format!("unknown boundary {other:?} (expected periodic or open-rough)"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::OpenRough => "open-rough",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Sublattice {
    A,
    B,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Axis {
    X,
    Y,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(Axis::X),
            "y" | "Y" => Ok(Axis::Y),
            other => Err(Error::Argument(format!("unknown axis {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoneycombVertex {
    pub sublattice: Sublattice,
    pub cell: (i64, i64),
    /// Incident edge for each local direction 0, 1, 2.
    pub edges: [usize; 3],
}

/// Edge `(cell, dir)` joins `A(cell)` to its neighbor in direction `dir`:
/// `B(i, j)`, `B(i - 1, j)` or `B(i, j - 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoneycombEdge {
    pub cell: (i64, i64),
    pub dir: usize,
    /// Vertex ids of the A-side and B-side endpoint; `None` outside an open patch.
    pub ends: [Option<usize>; 2],
}

impl HoneycombEdge {
    pub fn is_dangling(&self) -> bool {
        self.ends.iter().any(Option::is_none)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Plaquette {
    pub cell: (i64, i64),
    /// Vertices of the hexagon that lie in the lattice, in cyclic order.
    pub vertices: Vec<usize>,
    /// Edges of the hexagon that lie in the lattice, in cyclic order.
    pub edges: Vec<usize>,
}

/// Brick-wall honeycomb of `nx × ny` two-vertex unit cells.
///
/// Open-rough patches keep every edge with at least one endpoint inside, so
/// boundary vertices carry dangling edges, and every hexagon touching the
/// patch is listed as a (possibly truncated) plaquette.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Honeycomb {
    pub nx: usize,
    pub ny: usize,
    pub boundary: Boundary,
    pub vertices: Vec<HoneycombVertex>,
    pub edges: Vec<HoneycombEdge>,
    pub plaquettes: Vec<Plaquette>,
    #[serde(skip)]
    edge_index: HashMap<(i64, i64, usize), usize>,
}

impl Honeycomb {
    pub fn new(nx: usize, ny: usize, boundary: Boundary) -> Result<Self> {
        let min = match boundary {
            Boundary::Periodic => 2,
            Boundary::OpenRough => 1,
        };
        if nx < min || ny < min {
            return Err(Error::Argument(format!(
                "{boundary} honeycomb needs at least {min}×{min} cells, got {nx}×{ny}"
            )));
        }
        let mut h = Honeycomb {
            nx,
            ny,
            boundary,
            vertices: Vec::new(),
            edges: Vec::new(),
            plaquettes: Vec::new(),
            edge_index: HashMap::new(),
        };
        for j in 0..ny as i64 {
            for i in 0..nx as i64 {
                for sublattice in [Sublattice::A, Sublattice::B] {
                    h.vertices.push(HoneycombVertex {
                        sublattice,
                        cell: (i, j),
                        edges: [usize::MAX; 3],
                    });
                }
            }
        }
        for j in 0..ny as i64 {
            for i in 0..nx as i64 {
                for dir in 0..3 {
                    h.add_edge((i, j), dir);
                }
            }
        }
        if boundary == Boundary::OpenRough {
            // edges from B vertices on the far side whose A endpoint is outside
            for j in 0..ny as i64 {
                for i in 0..nx as i64 {
                    if i + 1 == nx as i64 {
                        h.add_edge((i + 1, j), 1);
                    }
                    if j + 1 == ny as i64 {
                        h.add_edge((i, j + 1), 2);
                    }
                }
            }
        }
        for e in 0..h.edges.len() {
            let (cell, dir) = (h.edges[e].cell, h.edges[e].dir);
            if let Some(a) = h.edges[e].ends[0] {
                h.vertices[a].edges[dir] = e;
            }
            if let Some(b) = h.edges[e].ends[1] {
                debug_assert_eq!(h.b_neighbor(b, dir), (cell, dir));
                h.vertices[b].edges[dir] = e;
            }
        }
        let (i_range, j_range) = match boundary {
            Boundary::Periodic => (0..nx as i64, 0..ny as i64),
            Boundary::OpenRough => (-1..nx as i64, 0..ny as i64 + 1),
        };
        for j in j_range {
            for i in i_range.clone() {
                if let Some(p) = h.hexagon((i, j)) {
                    h.plaquettes.push(p);
                }
            }
        }
        Ok(h)
    }

    fn wrap(&self, (i, j): (i64, i64)) -> (i64, i64) {
        match self.boundary {
            Boundary::Periodic => (i.rem_euclid(self.nx as i64), j.rem_euclid(self.ny as i64)),
            Boundary::OpenRough => (i, j),
        }
    }

    /// Vertex id of the given sublattice site, if it lies in the lattice.
    pub fn vertex_at(&self, sublattice: Sublattice, cell: (i64, i64)) -> Option<usize> {
        let (i, j) = self.wrap(cell);
        if i < 0 || j < 0 || i >= self.nx as i64 || j >= self.ny as i64 {
            return None;
        }
        let base = 2 * (j as usize * self.nx + i as usize);
        Some(base + usize::from(sublattice == Sublattice::B))
    }

    /// Edge id of `(cell, dir)`, if it lies in the lattice.
    pub fn edge_at(&self, cell: (i64, i64), dir: usize) -> Option<usize> {
        let (i, j) = self.wrap(cell);
        self.edge_index.get(&(i, j, dir)).copied()
    }

    fn add_edge(&mut self, cell: (i64, i64), dir: usize) {
        let cell = self.wrap(cell);
        let b_cell = match dir {
            0 => cell,
            1 => (cell.0 - 1, cell.1),
            _ => (cell.0, cell.1 - 1),
        };
        let ends = [self.vertex_at(Sublattice::A, cell), self.vertex_at(Sublattice::B, b_cell)];
        self.edge_index.insert((cell.0, cell.1, dir), self.edges.len());
        self.edges.push(HoneycombEdge { cell, dir, ends });
    }

    /// The `(A cell, dir)` key of B vertex `b`'s edge in local direction `dir`.
    fn b_neighbor(&self, b: usize, dir: usize) -> ((i64, i64), usize) {
        let (i, j) = self.vertices[b].cell;
        let cell = match dir {
            0 => (i, j),
            1 => (i + 1, j),
            _ => (i, j + 1),
        };
        (self.wrap(cell), dir)
    }

    fn hexagon(&self, (i, j): (i64, i64)) -> Option<Plaquette> {
        use Sublattice::{A, B};
        let vertex_sites = [
            (A, (i, j)),
            (B, (i, j)),
            (A, (i + 1, j)),
            (B, (i + 1, j - 1)),
            (A, (i + 1, j - 1)),
            (B, (i, j - 1)),
        ];
        let edge_keys = [
            ((i, j), 0),
            ((i + 1, j), 1),
            ((i + 1, j), 2),
            ((i + 1, j - 1), 0),
            ((i + 1, j - 1), 1),
            ((i, j), 2),
        ];
        let vertices: Vec<usize> = vertex_sites.iter().filter_map(|&(s, c)| self.vertex_at(s, c)).collect();
        if vertices.is_empty() {
            return None;
        }
        let edges = edge_keys.iter().filter_map(|&(c, d)| self.edge_at(c, d)).collect();
        Some(Plaquette {
            cell: self.wrap((i, j)),
            vertices,
            edges,
        })
    }

    /// Number of selected edges at every vertex.
    pub fn vertex_degrees(&self, edge_set: &[bool]) -> Result<Vec<usize>> {
        if edge_set.len() != self.edges.len() {
            return Err(Error::LengthMismatch {
                expected: self.edges.len(),
                found: edge_set.len(),
            });
        }
        Ok(self
            .vertices
            .iter()
            .map(|v| v.edges.iter().filter(|&&e| edge_set[e]).count())
            .collect())
    }

    /// Whether every vertex meets an even number of selected edges.
    pub fn is_closed(&self, edge_set: &[bool]) -> Result<bool> {
        Ok(self.vertex_degrees(edge_set)?.iter().all(|d| d % 2 == 0))
    }

    /// Indicator of plaquette `p`'s edges.
    pub fn plaquette_edge_set(&self, p: usize) -> Result<Vec<bool>> {
        let plaquette = self
            .plaquettes
            .get(p)
            .ok_or_else(|| Error::Argument(format!("plaquette {p} out of range ({} plaquettes)", self.plaquettes.len())))?;
        let mut set = vec![false; self.edges.len()];
        for &e in &plaquette.edges {
            set[e] = true;
        }
        Ok(set)
    }

    /// Non-contractible cycle winding once around the torus along `axis`,
    /// at row (for `X`) or column (for `Y`) `offset`.
    pub fn homology_cycle(&self, axis: Axis, offset: usize) -> Result<Vec<bool>> {
        if self.boundary != Boundary::Periodic {
            return Err(Error::Argument(
                "homologically non-trivial loops need periodic boundaries".into(),
            ));
        }
        let mut set = vec![false; self.edges.len()];
        match axis {
            Axis::X => {
                if offset >= self.ny {
                    return Err(Error::Argument(format!("row {offset} out of range")));
                }
                for i in 0..self.nx as i64 {
                    for dir in [0, 1] {
                        set[self.edge_at((i, offset as i64), dir).expect("periodic edge")] = true;
                    }
                }
            }
            Axis::Y => {
                if offset >= self.nx {
                    return Err(Error::Argument(format!("column {offset} out of range")));
                }
                for j in 0..self.ny as i64 {
                    for dir in [0, 2] {
                        set[self.edge_at((offset as i64, j), dir).expect("periodic edge")] = true;
                    }
                }
            }
        }
        Ok(set)
    }

    /// Basis of the Z2 space of closed edge sets (dangling edges end freely).
    pub fn cycle_space_basis(&self) -> Vec<Vec<bool>> {
        let rows: Vec<Vec<bool>> = self
            .vertices
            .iter()
            .map(|v| {
                let mut row = vec![false; self.edges.len()];
                for &e in &v.edges {
                    row[e] = true;
                }
                row
            })
            .collect();
        z2_nullspace(&rows, self.edges.len())
    }
}

fn pack(v: &[bool]) -> Vec<u64> {
    let mut words = vec![0u64; v.len().div_ceil(64)];
    for (i, _) in v.iter().enumerate().filter(|(_, &b)| b) {
        words[i / 64] |= 1 << (i % 64);
    }
    words
}

fn bit(words: &[u64], i: usize) -> bool {
    words[i / 64] >> (i % 64) & 1 == 1
}

/// Rank over Z2 of a set of equal-length bit vectors.
pub fn z2_rank(vectors: &[Vec<bool>]) -> usize {
    let Some(width) = vectors.first().map(Vec::len) else {
        return 0;
    };
    let mut rows: Vec<Vec<u64>> = vectors.iter().map(|v| pack(v)).collect();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && bit(row, col) {
                row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a ^= b);
            }
        }
        rank += 1;
    }
    rank
}

/// Basis of `{x : M x = 0}` over Z2 for the matrix with the given rows.
pub fn z2_nullspace(rows: &[Vec<bool>], width: usize) -> Vec<Vec<bool>> {
    let mut rows: Vec<Vec<u64>> = rows.iter().map(|v| pack(v)).collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..rows.len()).find(|&r| bit(&rows[r], col)) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && bit(row, col) {
                row.iter_mut().zip(&pivot_row).for_each(|(a, b)| *a ^= b);
            }
        }
        pivots.push(col);
        rank += 1;
    }
    let free = (0..width).filter(|c| !pivots.contains(c));
    free.map(|f| {
        let mut x = vec![false; width];
        x[f] = true;
        for (r, &p) in pivots.iter().enumerate() {
            if bit(&rows[r], f) {
                x[p] = true;
            }
        }
        x
    })
    .collect()
}

/// Atom bookkeeping of the loop structure on top of its honeycomb.
///
/// Each vertex carries a tetrahedron `t0..t3` with apex `t3`; each edge carries
/// a light atom (excited when the edge holds a string) and a dark atom (excited
/// when it is empty). The light atom of local direction `k` blockades `t3` and
/// `tk`; the dark atom blockades the two remaining tetrahedron atoms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopLattice {
    pub honeycomb: Honeycomb,
    pub tetra: Vec<[usize; 4]>,
    pub light: Vec<usize>,
    pub dark: Vec<usize>,
    pub n_atoms: usize,
}

impl LoopLattice {
    fn new(honeycomb: Honeycomb) -> Self {
        let cells = honeycomb.nx * honeycomb.ny;
        let mut tetra = vec![[0; 4]; honeycomb.vertices.len()];
        let mut light = vec![0; honeycomb.edges.len()];
        let mut dark = vec![0; honeycomb.edges.len()];
        // cell c holds A tetra, B tetra and A's three edges: 14 atoms
        for c in 0..cells {
            for s in 0..2 {
                let base = 14 * c + 4 * s;
                tetra[2 * c + s] = [base, base + 1, base + 2, base + 3];
            }
            for d in 0..3 {
                light[3 * c + d] = 14 * c + 8 + 2 * d;
                dark[3 * c + d] = 14 * c + 9 + 2 * d;
            }
        }
        for e in 3 * cells..honeycomb.edges.len() {
            light[e] = 14 * cells + 2 * (e - 3 * cells);
            dark[e] = light[e] + 1;
        }
        let n_atoms = 14 * cells + 2 * (honeycomb.edges.len() - 3 * cells);
        LoopLattice {
            honeycomb,
            tetra,
            light,
            dark,
            n_atoms,
        }
    }

    /// Human-readable name of every atom, e.g. `A(0,1).t3` or `e(1,0,d2).light`.
    pub fn atom_labels(&self) -> Vec<String> {
        let mut labels = vec![String::new(); self.n_atoms];
        for (v, vertex) in self.honeycomb.vertices.iter().enumerate() {
            let (i, j) = vertex.cell;
            for (k, &atom) in self.tetra[v].iter().enumerate() {
                labels[atom] = format!("{:?}({i},{j}).t{k}", vertex.sublattice);
            }
        }
        for (e, edge) in self.honeycomb.edges.iter().enumerate() {
            let (i, j) = edge.cell;
            labels[self.light[e]] = format!("e({i},{j},d{}).light", edge.dir);
            labels[self.dark[e]] = format!("e({i},{j},d{}).dark", edge.dir);
        }
        labels
    }

    /// Blockade graph of the tessellation.
    pub fn graph(&self) -> BlockadeGraph {
        let mut edges = Vec::new();
        let mut weights = vec![LOOP_TETRA_DETUNING; self.n_atoms];
        for (v, vertex) in self.honeycomb.vertices.iter().enumerate() {
            let t = self.tetra[v];
            for a in 0..4 {
                for b in a + 1..4 {
                    edges.push((t[a], t[b]));
                }
            }
            for (k, &e) in vertex.edges.iter().enumerate() {
                edges.push((self.light[e], t[3]));
                edges.push((self.light[e], t[k]));
                edges.push((self.dark[e], t[(k + 1) % 3]));
                edges.push((self.dark[e], t[(k + 2) % 3]));
            }
        }
        for (e, edge) in self.honeycomb.edges.iter().enumerate() {
            let w = if edge.is_dangling() {
                LOOP_DANGLING_EDGE_DETUNING
            } else {
                LOOP_SHARED_EDGE_DETUNING
            };
            weights[self.light[e]] = w;
            weights[self.dark[e]] = w;
        }
        BlockadeGraph::new(self.n_atoms, edges, weights).expect("loop structure graph is well formed")
    }

    /// Swap of an edge's light and dark atom.
    pub fn edge_swap(&self, e: usize) -> Permutation {
        Permutation::transposition(self.n_atoms, self.light[e], self.dark[e])
    }

    /// Tetrahedron permutation `(t_α t3)(t_{α+1} t_{α+2})` at vertex `v`, where
    /// `α` is the local direction a loop through `v` does not traverse.
    pub fn vertex_permutation(&self, v: usize, alpha: usize) -> Permutation {
        let t = self.tetra[v];
        Permutation::from_cycles(
            self.n_atoms,
            &[&[t[alpha], t[3]], &[t[(alpha + 1) % 3], t[(alpha + 2) % 3]]],
        )
        .expect("tetrahedron atoms are distinct")
    }

    /// Full configuration encoding a closed edge set.
    pub fn configuration_of(&self, edge_set: &[bool]) -> Result<Configuration> {
        let degrees = self.honeycomb.vertex_degrees(edge_set)?;
        let mut c = Configuration::zeros(self.n_atoms);
        for (v, vertex) in self.honeycomb.vertices.iter().enumerate() {
            let excited = match degrees[v] {
                0 => 3,
                2 => (0..3).find(|&k| !edge_set[vertex.edges[k]]).expect("one untraversed direction"),
                d => {
                    return Err(Error::Argument(format!("edge set is not closed: vertex {v} has degree {d}")));
                }
            };
            c.set(self.tetra[v][excited], true);
        }
        for (e, &string) in edge_set.iter().enumerate() {
            c.set(if string { self.light[e] } else { self.dark[e] }, true);
        }
        Ok(c)
    }

    /// String occupation read off the light atoms.
    pub fn edge_set_of(&self, c: &Configuration) -> Vec<bool> {
        self.light.iter().map(|&a| c.get(a)).collect()
    }
}

/// Loop structure: the blockade graph together with its index maps.
#[derive(Clone, Debug, Serialize)]
pub struct LoopStructure {
    pub graph: BlockadeGraph,
    pub lattice: LoopLattice,
}

/// Places an FSU vertex on every honeycomb site and amalgamates port pairs
/// along shared edges.
pub fn build_loop_structure(nx: usize, ny: usize, boundary: Boundary) -> Result<LoopStructure> {
    let lattice = LoopLattice::new(Honeycomb::new(nx, ny, boundary)?);
    Ok(LoopStructure {
        graph: lattice.graph(),
        lattice,
    })
}

/// All configurations in which the edges hold a closed string net and every
/// vertex tetrahedron takes the state compatible with its strings.
pub fn loop_language(l: &LoopLattice) -> Result<Language> {
    let basis = l.honeycomb.cycle_space_basis();
    if basis.len() > MAX_LOOP_SPACE_DIMENSION {
        return Err(Error::LimitExceeded {
            what: "loop-space dimension",
            size: basis.len() as u128,
            limit: MAX_LOOP_SPACE_DIMENSION as u128,
        });
    }
    let mut out = Vec::with_capacity(1 << basis.len());
    for code in 0u64..1 << basis.len() {
        let mut set = vec![false; l.honeycomb.edges.len()];
        for (k, b) in basis.iter().enumerate() {
            if code >> k & 1 == 1 {
                set.iter_mut().zip(b).for_each(|(s, &x)| *s ^= x);
            }
        }
        out.push(l.configuration_of(&set)?);
    }
    Language::new(out)
}

/// Loop automorphism with its factorization into edge swaps and vertex
/// permutations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlaquettePermutation {
    /// Source plaquette, `None` for products and homology loops.
    pub plaquette: Option<usize>,
    pub permutation: Permutation,
    pub edge_factors: Vec<usize>,
    /// `(vertex, α)` pairs of the vertex factors.
    pub vertex_factors: Vec<(usize, usize)>,
}

/// Composes the edge swaps and vertex permutations along a closed edge set
/// and verifies the result is an automorphism.
pub fn cycle_automorphism(s: &LoopStructure, edge_set: &[bool]) -> Result<PlaquettePermutation> {
    let l = &s.lattice;
    let degrees = l.honeycomb.vertex_degrees(edge_set)?;
    let mut permutation = Permutation::identity(l.n_atoms);
    let edge_factors: Vec<usize> = (0..edge_set.len()).filter(|&e| edge_set[e]).collect();
    for &e in &edge_factors {
        permutation = permutation.then(&l.edge_swap(e));
    }
    let mut vertex_factors = Vec::new();
    for (v, vertex) in l.honeycomb.vertices.iter().enumerate() {
        match degrees[v] {
            0 => {}
            2 => {
                let alpha = (0..3).find(|&k| !edge_set[vertex.edges[k]]).expect("one untraversed direction");
                permutation = permutation.then(&l.vertex_permutation(v, alpha));
                vertex_factors.push((v, alpha));
            }
            d => return Err(Error::Argument(format!("edge set is not closed: vertex {v} has degree {d}"))),
        }
    }
    if !is_automorphism(&s.graph, &permutation) {
        return Err(Error::Build("loop permutation failed the automorphism check".into()));
    }
    Ok(PlaquettePermutation {
        plaquette: None,
        permutation,
        edge_factors,
        vertex_factors,
    })
}

pub fn plaquette_automorphism(s: &LoopStructure, p: usize) -> Result<PlaquettePermutation> {
    let set = s.lattice.honeycomb.plaquette_edge_set(p)?;
    let mut out = cycle_automorphism(s, &set)?;
    out.plaquette = Some(p);
    Ok(out)
}

/// Which loop a loop automorphism should follow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoopSpec {
    Plaquettes(Vec<usize>),
    Homology { axis: Axis, offset: usize },
}

/// Product of plaquette automorphisms, or the automorphism along a
/// non-contractible loop of a torus.
pub fn loop_automorphism(s: &LoopStructure, spec: &LoopSpec) -> Result<PlaquettePermutation> {
    match spec {
        LoopSpec::Plaquettes(ps) => {
            let mut permutation = Permutation::identity(s.lattice.n_atoms);
            let mut set = vec![false; s.lattice.honeycomb.edges.len()];
            for &p in ps {
                permutation = permutation.then(&plaquette_automorphism(s, p)?.permutation);
                let ps = s.lattice.honeycomb.plaquette_edge_set(p)?;
                set.iter_mut().zip(ps).for_each(|(a, b)| *a ^= b);
            }
            let direct = cycle_automorphism(s, &set)?;
            if direct.permutation != permutation {
                return Err(Error::Build("plaquette product disagrees with its boundary loop".into()));
            }
            Ok(direct)
        }
        LoopSpec::Homology { axis, offset } => {
            let set = s.lattice.honeycomb.homology_cycle(*axis, *offset)?;
            cycle_automorphism(s, &set)
        }
    }
}

/// All plaquette automorphisms, plus one loop per homology axis on a torus.
pub fn loop_generators(s: &LoopStructure) -> Result<Vec<PlaquettePermutation>> {
    let mut out = (0..s.lattice.honeycomb.plaquettes.len())
        .map(|p| plaquette_automorphism(s, p))
        .collect::<Result<Vec<_>>>()?;
    if s.lattice.honeycomb.boundary == Boundary::Periodic {
        for axis in [Axis::X, Axis::Y] {
            out.push(loop_automorphism(s, &LoopSpec::Homology { axis, offset: 0 })?);
        }
    }
    Ok(out)
}

/// Classical term attached to a single vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalTerm {
    pub site: usize,
    pub atoms: Vec<usize>,
    /// Detuning coefficient of each atom (in units of Δ).
    pub detunings: Vec<f64>,
    /// Blockaded pairs owned by this site, as global atom ids.
    pub blockades: Vec<(usize, usize)>,
}

impl LocalTerm {
    /// `-Σ δ_i n_i + penalty · (violated blockades)` restricted to this term.
    pub fn energy(&self, c: &Configuration, blockade_penalty: f64) -> f64 {
        let detuning: f64 = self.atoms.iter().zip(&self.detunings).filter(|(&a, _)| c.get(a)).map(|(_, d)| d).sum();
        let violated = self.blockades.iter().filter(|&&(a, b)| c.get(a) && c.get(b)).count();
        -detuning + blockade_penalty * violated as f64
    }

    /// Minimum of the term over blockade-respecting configurations.
    pub fn ground_energy(&self) -> f64 {
        let n = self.atoms.len();
        let position: HashMap<usize, usize> = self.atoms.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        let local: Vec<(usize, usize)> = self.blockades.iter().map(|(a, b)| (position[a], position[b])).collect();
        (0u64..1 << n)
            .filter(|m| local.iter().all(|&(a, b)| m >> a & 1 == 0 || m >> b & 1 == 0))
            .map(|m| -(0..n).filter(|&k| m >> k & 1 == 1).map(|k| self.detunings[k]).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }
}

/// Splits the classical Hamiltonian into one term per vertex; shared edge
/// atoms contribute half their detuning to each endpoint.
pub fn frustration_free_decomposition(s: &LoopStructure) -> Vec<LocalTerm> {
    let l = &s.lattice;
    l.honeycomb
        .vertices
        .iter()
        .enumerate()
        .map(|(v, vertex)| {
            let mut atoms: Vec<usize> = l.tetra[v].to_vec();
            let mut detunings = vec![f64::from(LOOP_TETRA_DETUNING); 4];
            for &e in &vertex.edges {
                let share = if l.honeycomb.edges[e].is_dangling() { 1.0 } else { 0.5 };
                for atom in [l.light[e], l.dark[e]] {
                    atoms.push(atom);
                    detunings.push(f64::from(s.graph.weight(atom)) * share);
                }
            }
            let member: std::collections::HashSet<usize> = atoms.iter().copied().collect();
            let tetra: std::collections::HashSet<usize> = l.tetra[v].iter().copied().collect();
            let blockades = s
                .graph
                .edges()
                .iter()
                .copied()
                .filter(|&(a, b)| member.contains(&a) && member.contains(&b) && (tetra.contains(&a) || tetra.contains(&b)))
                .collect();
            LocalTerm {
                site: v,
                atoms,
                detunings,
                blockades,
            }
        })
        .collect()
}

/// Honeycomb tessellation of a three-ancilla XOR vertex with a single port
/// atom per edge.
#[derive(Clone, Debug, Serialize)]
pub struct SingleportTessellation {
    pub graph: BlockadeGraph,
    pub honeycomb: Honeycomb,
    /// Ancillas of each vertex, by local direction.
    pub ancillas: Vec<[usize; 3]>,
    /// Port atom of each edge.
    pub ports: Vec<usize>,
}

impl SingleportTessellation {
    pub fn port_map(&self) -> PortMap {
        PortMap::new(self.ports.clone(), self.graph.n()).expect("ports are distinct atoms")
    }
}

/// Detuning of the singleport-XOR ancillas.
pub const SINGLEPORT_ANCILLA_DETUNING: u32 = 2;

/// Each vertex holds a triangle of ancillas `a0, a1, a2`; ancilla `ak`
/// blockades the ports of the two other directions. A port is excited unless
/// its edge holds a string.
pub fn build_singleport_xor_tessellation(nx: usize, ny: usize, boundary: Boundary) -> Result<SingleportTessellation> {
    let honeycomb = Honeycomb::new(nx, ny, boundary)?;
    let nv = honeycomb.vertices.len();
    let ancillas: Vec<[usize; 3]> = (0..nv).map(|v| [3 * v, 3 * v + 1, 3 * v + 2]).collect();
    let ports: Vec<usize> = (0..honeycomb.edges.len()).map(|e| 3 * nv + e).collect();
    let n = 3 * nv + ports.len();
    let mut weights = vec![SINGLEPORT_ANCILLA_DETUNING; n];
    let mut edges = Vec::new();
    for (v, vertex) in honeycomb.vertices.iter().enumerate() {
        let a = ancillas[v];
        edges.extend([(a[0], a[1]), (a[0], a[2]), (a[1], a[2])]);
        for (k, &ak) in a.iter().enumerate() {
            for other in [(k + 1) % 3, (k + 2) % 3] {
                edges.push((ak, ports[vertex.edges[other]]));
            }
        }
    }
    for (e, edge) in honeycomb.edges.iter().enumerate() {
        weights[ports[e]] = if edge.is_dangling() { 1 } else { 2 };
    }
    let graph = BlockadeGraph::new(n, edges, weights)?;
    Ok(SingleportTessellation {
        graph,
        honeycomb,
        ancillas,
        ports,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LiteratureModel {
    Verresen,
    Zeng,
    Stastny,
}

impl FromStr for LiteratureModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "verresen" => Ok(LiteratureModel::Verresen),
            "zeng" => Ok(LiteratureModel::Zeng),
            "stastny" => Ok(LiteratureModel::Stastny),
            other => Err(Error::Argument(format!("unknown model {other:?} (expected verresen, zeng or stastny)"))),
        }
    }
}

/// Periodic blockade graph of a literature model.
///
/// * `verresen`: atoms on the links of a kagome lattice blockading every atom
///   on a link sharing a site (the line graph of the kagome lattice).
/// * `zeng`: square lattice; each site holds a K4 of ancillas (one per link
///   direction, detuning 2) and each link a port (detuning 1) blockading the
///   three ancillas at either end that belong to other directions.
/// * `stastny`: the periodic single-port XOR tessellation.
pub fn build_literature_model(model: LiteratureModel, nx: usize, ny: usize) -> Result<BlockadeGraph> {
    if nx < 2 || ny < 2 {
        return Err(Error::Argument(format!("{model:?} model needs at least 2×2 cells, got {nx}×{ny}")));
    }
    match model {
        LiteratureModel::Verresen => Ok(build_verresen(nx, ny)),
        LiteratureModel::Zeng => Ok(build_zeng(nx, ny)),
        LiteratureModel::Stastny => Ok(build_singleport_xor_tessellation(nx, ny, Boundary::Periodic)?.graph),
    }
}

fn build_verresen(nx: usize, ny: usize) -> BlockadeGraph {
    let site = |i: usize, j: usize, s: usize| 3 * (j * nx + i) + s;
    // kagome sites a = 0, b = 1, c = 2; up triangle inside the cell, down
    // triangle joining a(i, j), b(i - 1, j), c(i, j - 1)
    let mut links: Vec<(usize, usize)> = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            let (im, jm) = ((i + nx - 1) % nx, (j + ny - 1) % ny);
            let (a, b, c) = (site(i, j, 0), site(i, j, 1), site(i, j, 2));
            let (b_left, c_down) = (site(im, j, 1), site(i, jm, 2));
            links.extend([(a, b), (b, c), (c, a), (a, b_left), (b_left, c_down), (c_down, a)]);
        }
    }
    let mut at_site: Vec<Vec<usize>> = vec![Vec::new(); 3 * nx * ny];
    for (k, &(u, v)) in links.iter().enumerate() {
        at_site[u].push(k);
        at_site[v].push(k);
    }
    let edges = at_site
        .iter()
        .flat_map(|ls| ls.iter().enumerate().flat_map(move |(x, &p)| ls[x + 1..].iter().map(move |&q| (p, q))));
    BlockadeGraph::new(links.len(), edges, vec![1; links.len()]).expect("kagome line graph is simple")
}

fn build_zeng(nx: usize, ny: usize) -> BlockadeGraph {
    // directions: 0 = +x, 1 = -x, 2 = +y, 3 = -y
    let ancilla = |i: usize, j: usize, d: usize| 4 * (j * nx + i) + d;
    let sites = nx * ny;
    let port_h = |i: usize, j: usize| 4 * sites + 2 * (j * nx + i);
    let port_v = |i: usize, j: usize| 4 * sites + 2 * (j * nx + i) + 1;
    let n = 6 * sites;
    let mut weights = vec![2; n];
    let mut edges = Vec::new();
    for j in 0..ny {
        for i in 0..nx {
            for a in 0..4 {
                for b in a + 1..4 {
                    edges.push((ancilla(i, j, a), ancilla(i, j, b)));
                }
            }
            let links = [
                (port_h(i, j), (i, j, 0), ((i + 1) % nx, j, 1)),
                (port_v(i, j), (i, j, 2), (i, (j + 1) % ny, 3)),
            ];
            for (port, (i0, j0, d0), (i1, j1, d1)) in links {
                weights[port] = 1;
                for d in 0..4 {
                    if d != d0 {
                        edges.push((port, ancilla(i0, j0, d)));
                    }
                    if d != d1 {
                        edges.push((port, ancilla(i1, j1, d)));
                    }
                }
            }
        }
    }
    BlockadeGraph::new(n, edges, weights).expect("square-lattice dimer graph is simple")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn torus_counts() {
        let s = build_loop_structure(2, 2, Boundary::Periodic).unwrap();
        assert_eq!(s.graph.n(), 56);
        assert_eq!(s.lattice.honeycomb.edges.len(), 12);
        assert_eq!(s.lattice.honeycomb.plaquettes.len(), 4);
        assert_eq!(s.lattice.honeycomb.cycle_space_basis().len(), 5);
    }

    #[test]
    fn open_single_cell() {
        let s = build_loop_structure(1, 1, Boundary::OpenRough).unwrap();
        assert_eq!(s.graph.n(), 18);
        assert_eq!(s.lattice.honeycomb.edges.iter().filter(|e| e.is_dangling()).count(), 4);
        assert_eq!(loop_language(&s.lattice).unwrap().len(), 8);
    }

    #[test]
    fn small_torus_rejected() {
        assert!(build_loop_structure(1, 3, Boundary::Periodic).is_err());
        assert!(build_loop_structure(0, 1, Boundary::OpenRough).is_err());
    }

    #[test]
    fn nullspace_of_path() {
        let rows = vec![vec![true, true, false], vec![false, true, true]];
        assert_eq!(z2_nullspace(&rows, 3), vec![vec![true, true, true]]);
        assert_eq!(z2_rank(&rows), 2);
    }
}
