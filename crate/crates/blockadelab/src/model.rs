//! Core data model: blockade structures, weighted blockade graphs, excitation
//! configurations, languages and port maps, plus their file formats.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance applied to blockade-radius comparisons.
pub const DISTANCE_TOLERANCE: f64 = 1e-9;

/// Excitation pattern over `len` atoms, stored as a packed bit vector.
///
/// Bit `i` is atom `i`; the textual form lists atom 0 first. Ordering is
/// lexicographic over the bit string (for equal lengths).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    len: usize,
    // bit i lives in words[i / 64] at position 63 - i % 64, so that comparing
    // words numerically matches lexicographic order of the bit string
    words: Vec<u64>,
}

impl Configuration {
    pub fn zeros(len: usize) -> Self {
        Configuration {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut c = Configuration::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                c.set(i, true);
            }
        }
        c
    }

    /// Configuration with exactly the listed atoms excited.
    pub fn from_excited(len: usize, excited: impl IntoIterator<Item = usize>) -> Self {
        let mut c = Configuration::zeros(len);
        for i in excited {
            c.set(i, true);
        }
        c
    }

    /// Builds a configuration from a bit mask where bit `i` of `mask` is atom `i`.
    pub fn from_mask(len: usize, mask: u128) -> Self {
        assert!(len <= 128, "mask-backed configurations hold at most 128 atoms");
        Configuration::from_excited(len, (0..len).filter(|&i| mask >> i & 1 == 1))
    }

    /// Inverse of [`Configuration::from_mask`].
    pub fn to_mask(&self) -> u128 {
        assert!(self.len <= 128, "mask-backed configurations hold at most 128 atoms");
        self.iter_ones().fold(0u128, |m, i| m | 1u128 << i)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        self.words[i / 64] >> (63 - i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range for length {}", self.len);
        let bit = 1u64 << (63 - i % 64);
        if value {
            self.words[i / 64] |= bit;
        } else {
            self.words[i / 64] &= !bit;
        }
    }

    pub fn flip(&mut self, i: usize) {
        let v = self.get(i);
        self.set(i, !v);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of excited atoms in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(move |&i| self.get(i))
    }

    pub fn hamming_distance(&self, other: &Configuration) -> usize {
        assert_eq!(self.len, other.len, "hamming distance needs equal lengths");
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    pub fn xor(&self, other: &Configuration) -> Configuration {
        assert_eq!(self.len, other.len, "xor needs equal lengths");
        Configuration {
            len: self.len,
            words: self.words.iter().zip(&other.words).map(|(a, b)| a ^ b).collect(),
        }
    }

    /// Projection onto the listed atoms, in the listed order.
    pub fn restrict(&self, atoms: &[usize]) -> Configuration {
        Configuration::from_bits(&atoms.iter().map(|&a| self.get(a)).collect::<Vec<_>>())
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }
}

impl Ord for Configuration {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.words.cmp(&other.words))
    }
}

impl PartialOrd for Configuration {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({})", self.to_bit_string())
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .trim()
            .chars()
            .map(|ch| match ch {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Configuration::from_bits(&bits))
    }
}

impl Serialize for Configuration {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_bit_string())
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A set of equal-length configurations kept in lexicographic order.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Language {
    configurations: Vec<Configuration>,
}

impl Language {
    pub fn empty() -> Self {
        Language::default()
    }

    /// Sorts and deduplicates; fails if the members have different lengths.
    pub fn new(configurations: impl IntoIterator<Item = Configuration>) -> Result<Self> {
        let mut configurations: Vec<Configuration> = configurations.into_iter().collect();
        if let Some(first) = configurations.first() {
            let width = first.len();
            if let Some(bad) = configurations.iter().find(|c| c.len() != width) {
                return Err(Error::LengthMismatch {
                    expected: width,
                    found: bad.len(),
                });
            }
        }
        configurations.sort();
        configurations.dedup();
        Ok(Language { configurations })
    }

    /// Parses whitespace-separated bit strings.
    pub fn parse_bit_strings(text: &str) -> Result<Self> {
        Language::new(
            text.split_whitespace()
                .map(str::parse)
                .collect::<Result<Vec<Configuration>>>()?,
        )
    }

    pub fn len(&self) -> usize {
        self.configurations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configurations.is_empty()
    }

    /// Common length of the members, `None` for the empty language.
    pub fn width(&self) -> Option<usize> {
        self.configurations.first().map(Configuration::len)
    }

    pub fn contains(&self, c: &Configuration) -> bool {
        self.configurations.binary_search(c).is_ok()
    }

    /// Position of `c` in canonical order.
    pub fn index_of(&self, c: &Configuration) -> Option<usize> {
        self.configurations.binary_search(c).ok()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Configuration> {
        self.configurations.iter()
    }

    pub fn as_slice(&self) -> &[Configuration] {
        &self.configurations
    }

    /// Newline-delimited bit strings (one per line, trailing newline).
    pub fn to_text(&self) -> String {
        self.configurations
            .iter()
            .map(|c| format!("{c}\n"))
            .collect()
    }
}

impl<'a> IntoIterator for &'a Language {
    type Item = &'a Configuration;
    type IntoIter = std::slice::Iter<'a, Configuration>;

    fn into_iter(self) -> Self::IntoIter {
        self.configurations.iter()
    }
}

impl<'de> Deserialize<'de> for Language {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let configs = Vec::<Configuration>::deserialize(deserializer)?;
        Language::new(configs).map_err(serde::de::Error::custom)
    }
}

/// Ordered list of atoms designated as logical ports.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PortMap {
    ports: Vec<usize>,
}

impl PortMap {
    /// Validates that the ports are distinct atom ids below `n`.
    pub fn new(ports: Vec<usize>, n: usize) -> Result<Self> {
        let mut seen = vec![false; n];
        for &p in &ports {
            if p >= n {
                return Err(Error::Argument(format!("port {p} out of range for {n} atoms")));
            }
            if std::mem::replace(&mut seen[p], true) {
                return Err(Error::Argument(format!("port {p} listed twice")));
            }
        }
        Ok(PortMap { ports })
    }

    /// Every atom is a port.
    pub fn all(n: usize) -> Self {
        PortMap {
            ports: (0..n).collect(),
        }
    }

    pub fn ports(&self) -> &[usize] {
        &self.ports
    }

    pub fn len(&self) -> usize {
        self.ports.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ports.is_empty()
    }
}

/// Projects each configuration onto the ports and merges duplicates.
pub fn restrict_language_to_ports(l: &Language, p: &PortMap) -> Language {
    Language::new(l.iter().map(|c| c.restrict(p.ports())))
        .expect("projections of equal-length configurations share a length")
}

/// A single atom: index, position and detuning in units of the unit detuning.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub id: usize,
    pub pos: Vec<f64>,
    pub detuning: u32,
}

/// Positions, detunings and blockade radius of a set of atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockadeStructure {
    dimension: usize,
    blockade_radius: f64,
    atoms: Vec<Atom>,
}

impl BlockadeStructure {
    pub fn new(dimension: usize, blockade_radius: f64, atoms: Vec<Atom>) -> Result<Self> {
        if dimension != 2 && dimension != 3 {
            return Err(Error::Structure(format!("dimension must be 2 or 3, got {dimension}")));
        }
        if !(blockade_radius.is_finite() && blockade_radius > 0.0) {
            return Err(Error::Structure(format!(
                "blockade radius must be positive and finite, got {blockade_radius}"
            )));
        }
        for (k, atom) in atoms.iter().enumerate() {
            if atom.id != k {
                return Err(Error::Structure(format!(
                    "atom ids must be 0..N-1 in order; position {k} holds id {}",
                    atom.id
                )));
            }
            if atom.pos.len() != dimension {
                return Err(Error::Structure(format!(
                    "atom {k} has {} coordinates, expected {dimension}",
                    atom.pos.len()
                )));
            }
            if atom.pos.iter().any(|x| !x.is_finite()) {
                return Err(Error::Structure(format!("atom {k} has a non-finite coordinate")));
            }
        }
        let structure = BlockadeStructure {
            dimension,
            blockade_radius,
            atoms,
        };
        let n = structure.atoms.len();
        for i in 0..n {
            for j in i + 1..n {
                if structure.distance(i, j) <= DISTANCE_TOLERANCE * blockade_radius {
                    return Err(Error::Structure(format!("atoms {i} and {j} share a position")));
                }
            }
        }
        Ok(structure)
    }

    /// Convenience constructor from positions and detunings.
    pub fn from_positions(
        dimension: usize,
        blockade_radius: f64,
        positions: &[Vec<f64>],
        detunings: &[u32],
    ) -> Result<Self> {
        if positions.len() != detunings.len() {
            return Err(Error::LengthMismatch {
                expected: positions.len(),
                found: detunings.len(),
            });
        }
        let atoms = positions
            .iter()
            .zip(detunings)
            .enumerate()
            .map(|(id, (pos, &detuning))| Atom {
                id,
                pos: pos.clone(),
                detuning,
            })
            .collect();
        BlockadeStructure::new(dimension, blockade_radius, atoms)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn blockade_radius(&self) -> f64 {
        self.blockade_radius
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.atoms[i]
            .pos
            .iter()
            .zip(&self.atoms[j].pos)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Copy with every position transformed by `f`.
    pub fn map_positions(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        let atoms = self
            .atoms
            .iter()
            .map(|a| Atom {
                id: a.id,
                pos: f(&a.pos),
                detuning: a.detuning,
            })
            .collect();
        BlockadeStructure::new(self.dimension, self.blockade_radius, atoms)
    }
}

/// How far the pairwise distances of a structure stay from the blockade radius.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DistanceMargins {
    /// Largest distance among blockaded pairs (`None` without edges).
    pub max_inside: Option<f64>,
    /// Smallest distance among non-blockaded pairs (`None` if every pair is blockaded).
    pub min_outside: Option<f64>,
    /// Smallest gap between any pairwise distance and the blockade radius.
    pub margin: f64,
}

/// Pairwise-distance margins relative to the blockade radius.
pub fn distance_margins(s: &BlockadeStructure) -> DistanceMargins {
    let r = s.blockade_radius();
    let mut max_inside: Option<f64> = None;
    let mut min_outside: Option<f64> = None;
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let d = s.distance(i, j);
            if d <= r * (1.0 + DISTANCE_TOLERANCE) {
                max_inside = Some(max_inside.map_or(d, |m| m.max(d)));
            } else {
                min_outside = Some(min_outside.map_or(d, |m| m.min(d)));
            }
        }
    }
    let margin = [max_inside.map(|d| r - d), min_outside.map(|d| d - r)]
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
    DistanceMargins {
        max_inside,
        min_outside,
        margin,
    }
}

/// Vertex-weighted simple graph; weights are detunings in units of the unit detuning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockadeGraph {
    n: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<u32>,
    adjacency: Vec<Vec<usize>>,
}

impl BlockadeGraph {
    /// Validates and normalizes the edge list (each pair stored once as `(i, j)` with `i < j`).
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>, weights: Vec<u32>) -> Result<Self> {
        if weights.len() != n {
            return Err(Error::Graph(format!("{} weights given for {n} vertices", weights.len())));
        }
        let mut normalized = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::Graph(format!("edge ({a}, {b}) out of range for {n} vertices")));
            }
            if a == b {
                return Err(Error::Graph(format!("self-loop at vertex {a}")));
            }
            normalized.push((a.min(b), a.max(b)));
        }
        normalized.sort_unstable();
        if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Graph(format!("duplicate edge ({}, {})", w[0].0, w[0].1)));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in &normalized {
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        Ok(BlockadeGraph {
            n,
            edges: normalized,
            weights,
            adjacency,
        })
    }

    /// Graph without vertices.
    pub fn empty() -> Self {
        BlockadeGraph::new(0, [], Vec::new()).expect("empty graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, v: usize) -> u32 {
        self.weights[v]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a].binary_search(&b).is_ok()
    }

    /// True when no two excited atoms are adjacent.
    pub fn is_independent(&self, c: &Configuration) -> bool {
        c.len() == self.n && self.edges.iter().all(|&(a, b)| !(c.get(a) && c.get(b)))
    }

    /// Total detuning of the excited atoms.
    pub fn configuration_weight(&self, c: &Configuration) -> u64 {
        c.iter_ones().map(|i| u64::from(self.weights[i])).sum()
    }

    /// Number of blockaded pairs that are both excited.
    pub fn violated_blockades(&self, c: &Configuration) -> usize {
        self.edges.iter().filter(|&&(a, b)| c.get(a) && c.get(b)).count()
    }

    pub fn total_weight(&self) -> u64 {
        self.weights.iter().map(|&w| u64::from(w)).sum()
    }

    /// Copy with different weights.
    pub fn with_weights(&self, weights: Vec<u32>) -> Result<Self> {
        BlockadeGraph::new(self.n, self.edges.iter().copied(), weights)
    }

    /// Breadth-first graph distances from `source` (`None` when unreachable).
    pub fn distances_from(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[source] = Some(0);
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].expect("queued vertices have a distance");
            for &u in &self.adjacency[v] {
                if dist[u].is_none() {
                    dist[u] = Some(d + 1);
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Induced subgraph on `vertices` (relabelled in the given order).
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Self> {
        let mut index = vec![usize::MAX; self.n];
        for (k, &v) in vertices.iter().enumerate() {
            if v >= self.n {
                return Err(Error::Argument(format!("vertex {v} out of range")));
            }
            index[v] = k;
        }
        let edges = self
            .edges
            .iter()
            .filter(|&&(a, b)| index[a] != usize::MAX && index[b] != usize::MAX)
            .map(|&(a, b)| (index[a], index[b]));
        BlockadeGraph::new(
            vertices.len(),
            edges,
            vertices.iter().map(|&v| self.weights[v]).collect(),
        )
    }
}

/// Unit-ball graph of a structure: an edge joins atoms at distance at most the
/// blockade radius (up to a relative tolerance of [`DISTANCE_TOLERANCE`]).
pub fn blockade_graph_from_structure(s: &BlockadeStructure) -> BlockadeGraph {
    let r = s.blockade_radius();
    let n = s.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if s.distance(i, j) <= r * (1.0 + DISTANCE_TOLERANCE) {
                edges.push((i, j));
            }
        }
    }
    let weights = s.atoms().iter().map(|a| a.detuning).collect();
    BlockadeGraph::new(n, edges, weights).expect("unit-ball edges are simple and in range")
}

#[derive(Serialize, Deserialize)]
struct StructureDocument {
    dimension: usize,
    blockade_radius: f64,
    atoms: Vec<Atom>,
    #[serde(default)]
    ports: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphDocument {
    n: usize,
    edges: Vec<[usize; 2]>,
    weights: Vec<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    ports: Vec<usize>,
}

/// Parses a structure document (`dimension`, `blockade_radius`, `atoms`, `ports`).
pub fn structure_from_json(text: &str) -> Result<(BlockadeStructure, PortMap)> {
    let doc: StructureDocument = serde_json::from_str(text)?;
    let s = BlockadeStructure::new(doc.dimension, doc.blockade_radius, doc.atoms)?;
    let ports = PortMap::new(doc.ports, s.len())?;
    Ok((s, ports))
}

/// Serializes a structure and its ports as pretty-printed JSON.
pub fn structure_to_json(s: &BlockadeStructure, ports: &PortMap) -> String {
    let doc = StructureDocument {
        dimension: s.dimension,
        blockade_radius: s.blockade_radius,
        atoms: s.atoms.clone(),
        ports: ports.ports().to_vec(),
    };
    serde_json::to_string_pretty(&doc).expect("structure documents always serialize")
}

/// Parses an abstract graph document (`n`, `edges`, `weights`).
pub fn graph_from_json(text: &str) -> Result<BlockadeGraph> {
    let doc: GraphDocument = serde_json::from_str(text)?;
    BlockadeGraph::new(doc.n, doc.edges.into_iter().map(|[a, b]| (a, b)), doc.weights)
}

/// Serializes a graph as pretty-printed JSON.
pub fn graph_to_json(g: &BlockadeGraph) -> String {
    serde_json::to_string_pretty(g).expect("graph documents always serialize")
}

/// Serializes a graph together with its ports.
pub fn graph_with_ports_to_json(g: &BlockadeGraph, ports: &PortMap) -> String {
    let mut doc = GraphDocument::from(g);
    doc.ports = ports.ports().to_vec();
    serde_json::to_string_pretty(&doc).expect("graph documents always serialize")
}

impl From<&BlockadeGraph> for GraphDocument {
    fn from(g: &BlockadeGraph) -> Self {
        GraphDocument {
            n: g.n,
            edges: g.edges.iter().map(|&(a, b)| [a, b]).collect(),
            weights: g.weights.clone(),
            ports: Vec::new(),
        }
    }
}

/// Reads either document kind: a structure (converted to its blockade graph)
/// or an abstract graph with optional ports.
pub fn graph_from_any_json(text: &str) -> Result<(BlockadeGraph, PortMap, Option<BlockadeStructure>)> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    if value.get("atoms").is_some() {
        let (s, ports) = structure_from_json(text)?;
        Ok((blockade_graph_from_structure(&s), ports, Some(s)))
    } else {
        let doc: GraphDocument = serde_json::from_value(value)?;
        let g = BlockadeGraph::new(doc.n, doc.edges.into_iter().map(|[a, b]| (a, b)), doc.weights)?;
        let ports = PortMap::new(doc.ports, g.n())?;
        Ok((g, ports, None))
    }
}

impl Serialize for BlockadeGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphDocument::from(self).serialize(serializer)
    }
}
