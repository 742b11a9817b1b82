//! Named blockade gadgets and the amalgamation operator.
//!
//! Every builder validates its MWIS language against the published truth
//! table before returning.

use crate::combinatorics::mwis;
use crate::error::{Error, Result};
use crate::model::{
    blockade_graph_from_structure, restrict_language_to_ports, BlockadeGraph, BlockadeStructure,
    Language, PortMap,
};
use crate::symmetry::Permutation;

/// Names accepted by [`catalog_entry`].
pub const CATALOG_NAMES: &[&str] = &["not", "nor", "or", "icrs", "fsu", "fsu-mirror", "fsu-extended"];

/// A gadget: its graph (and geometry when known), ports and port-level truth table.
#[derive(Clone, Debug)]
pub struct GateSpec {
    pub name: String,
    pub graph: BlockadeGraph,
    pub structure: Option<BlockadeStructure>,
    pub ports: PortMap,
    pub atom_labels: Vec<String>,
    /// MWIS language restricted to the ports.
    pub expected_language: Language,
}

impl GateSpec {
    /// Computes the port language by exact MWIS and stores it.
    pub fn new(
        name: impl Into<String>,
        graph: BlockadeGraph,
        structure: Option<BlockadeStructure>,
        ports: PortMap,
        atom_labels: Vec<String>,
    ) -> Result<Self> {
        let name = name.into();
        if atom_labels.len() != graph.n() {
            return Err(Error::Build(format!(
                "{name}: {} labels for {} atoms",
                atom_labels.len(),
                graph.n()
            )));
        }
        if let Some(s) = &structure {
            if blockade_graph_from_structure(s) != graph {
                return Err(Error::Build(format!("{name}: geometry does not reproduce the graph")));
            }
        }
        let full = mwis(&graph)?.language;
        let expected_language = restrict_language_to_ports(&full, &ports);
        Ok(GateSpec {
            name,
            graph,
            structure,
            ports,
            atom_labels,
            expected_language,
        })
    }

    /// The full MWIS language including ancillas.
    pub fn full_language(&self) -> Result<Language> {
        Ok(mwis(&self.graph)?.language)
    }

    /// Atom index carrying `label`.
    pub fn atom(&self, label: &str) -> Option<usize> {
        self.atom_labels.iter().position(|l| l == label)
    }

    fn require_port_language(self, published: &str) -> Result<Self> {
        let published = Language::parse_bit_strings(published)?;
        if self.expected_language != published {
            return Err(Error::Build(format!(
                "{}: port language {:?} differs from the truth table {:?}",
                self.name,
                self.expected_language.to_text(),
                published.to_text()
            )));
        }
        Ok(self)
    }
}

/// Looks a gadget up by name.
pub fn catalog_entry(name: &str) -> Result<GateSpec> {
    match name {
        "not" => build_not(),
        "nor" => build_nor(),
        "or" => build_or(),
        "icrs" => build_icrs(),
        "fsu" => build_fsu(false),
        "fsu-mirror" => build_fsu(true),
        "fsu-extended" => build_extended_fsu(),
        other => Err(Error::Argument(format!(
            "unknown catalog entry {other:?}; known: {}",
            CATALOG_NAMES.join(", ")
        ))),
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn planar(points: &[(f64, f64)]) -> Vec<Vec<f64>> {
    points.iter().map(|&(x, y)| vec![x, y]).collect()
}

fn gate_from_geometry(
    name: &str,
    dimension: usize,
    positions: &[Vec<f64>],
    detunings: &[u32],
    ports: Vec<usize>,
    atom_labels: &[&str],
) -> Result<GateSpec> {
    let s = BlockadeStructure::from_positions(dimension, 1.0, positions, detunings)?;
    let g = blockade_graph_from_structure(&s);
    let ports = PortMap::new(ports, s.len())?;
    GateSpec::new(name, g, Some(s), ports, labels(atom_labels))
}

/// Two equally detuned atoms in blockade.
pub fn build_not() -> Result<GateSpec> {
    gate_from_geometry(
        "not",
        2,
        &planar(&[(0.0, 0.0), (0.5, 0.0)]),
        &[1, 1],
        vec![0, 1],
        &["In", "Out"],
    )?
    .require_port_language("01 10")
}

/// Edge set of the NOR gadget over atoms (A, B, Q, a1, a2).
pub const NOR_EDGES: [(usize, usize); 7] = [(0, 2), (0, 4), (1, 2), (1, 3), (2, 3), (2, 4), (3, 4)];

/// NOR with ports (A, B, Q) and two ancillas; Q carries twice the unit detuning.
pub fn build_nor() -> Result<GateSpec> {
    let gate = gate_from_geometry(
        "nor",
        2,
        &planar(&[(-0.75, 0.55), (0.75, 0.55), (0.0, 0.0), (0.4, 0.5), (-0.4, 0.5)]),
        &[1, 1, 2, 1, 1],
        vec![0, 1, 2],
        &["A", "B", "Q", "a1", "a2"],
    )?;
    if gate.graph.edges() != NOR_EDGES {
        return Err(Error::Build("nor: geometry lost the frozen edge set".into()));
    }
    let full = gate.full_language()?;
    if full != Language::parse_bit_strings("00100 01001 10010 11000")? {
        return Err(Error::Build(format!("nor: unexpected full language {:?}", full.to_text())));
    }
    gate.require_port_language("001 010 100 110")
}

/// Joins two gadgets by identifying port pairs and summing their detunings.
///
/// Atoms of `a` keep their indices; the unidentified atoms of `b` follow in
/// order. Identified ports become internal atoms of the result.
pub fn amalgamate(a: &GateSpec, b: &GateSpec, identify: &[(usize, usize)]) -> Result<GateSpec> {
    let na = a.graph.n();
    let nb = b.graph.n();
    let mut image_of_b: Vec<Option<usize>> = vec![None; nb];
    let mut used_a = vec![false; na];
    for &(pa, pb) in identify {
        if !a.ports.ports().contains(&pa) || !b.ports.ports().contains(&pb) {
            return Err(Error::Argument(format!("identified atoms ({pa}, {pb}) must be ports")));
        }
        if std::mem::replace(&mut used_a[pa], true) || image_of_b[pb].is_some() {
            return Err(Error::Argument(format!(
                "identification collides two atoms of the same gadget at ({pa}, {pb})"
            )));
        }
        image_of_b[pb] = Some(pa);
    }
    let mut next = na;
    let mut index_b = vec![0; nb];
    for v in 0..nb {
        index_b[v] = match image_of_b[v] {
            Some(t) => t,
            None => {
                next += 1;
                next - 1
            }
        };
    }
    let n = next;
    let mut weights: Vec<u32> = a.graph.weights().to_vec();
    weights.resize(n, 0);
    let mut atom_labels = a.atom_labels.clone();
    atom_labels.resize(n, String::new());
    for v in 0..nb {
        weights[index_b[v]] += b.graph.weight(v);
        if image_of_b[v].is_none() {
            atom_labels[index_b[v]] = b.atom_labels[v].clone();
        }
    }
    let mut edges: Vec<(usize, usize)> = a.graph.edges().to_vec();
    for &(x, y) in b.graph.edges() {
        let (u, v) = (index_b[x].min(index_b[y]), index_b[x].max(index_b[y]));
        if u == v {
            return Err(Error::Argument(format!("identification merges adjacent atoms {x} and {y}")));
        }
        edges.push((u, v));
    }
    edges.sort_unstable();
    edges.dedup();
    let graph = BlockadeGraph::new(n, edges, weights)?;
    let ports: Vec<usize> = a
        .ports
        .ports()
        .iter()
        .copied()
        .filter(|&p| !used_a[p])
        .chain(
            b.ports
                .ports()
                .iter()
                .filter(|&&p| image_of_b[p].is_none())
                .map(|&p| index_b[p]),
        )
        .collect();
    let ports = PortMap::new(ports, n)?;
    GateSpec::new(format!("{}+{}", a.name, b.name), graph, None, ports, atom_labels)
}

/// OR = NOR with a NOT amalgamated on its output; ports (A, B, Q').
pub fn build_or() -> Result<GateSpec> {
    let nor = build_nor()?;
    let not = build_not()?;
    let glued = amalgamate(&nor, &not, &[(2, 0)])?;
    // geometry realizing the amalgam, validated against the glued graph
    let s = BlockadeStructure::from_positions(
        2,
        1.0,
        &planar(&[(-0.75, 0.55), (0.75, 0.55), (0.0, 0.0), (0.4, 0.5), (-0.4, 0.5), (0.0, -0.8)]),
        glued.graph.weights(),
    )?;
    let gate = GateSpec::new(
        "or",
        glued.graph,
        Some(s),
        glued.ports,
        labels(&["A", "B", "Q", "a1", "a2", "Q'"]),
    )?;
    gate.require_port_language("000 011 101 111")
}

/// Atom labels of the crossing gadget, ports first.
pub const ICRS_LABELS: [&str; 8] = ["A", "B", "Q", "R", "c1", "c2", "c3", "c4"];

/// Inverting crossing: four central atoms in mutual blockade, each port
/// blockaded by one side of the central square.
pub fn build_icrs() -> Result<GateSpec> {
    let h = 0.95;
    gate_from_geometry(
        "icrs",
        2,
        &planar(&[
            (0.0, -h),
            (h, 0.0),
            (0.0, h),
            (-h, 0.0),
            (-0.3, -0.3),
            (0.3, -0.3),
            (0.3, 0.3),
            (-0.3, 0.3),
        ]),
        &[1, 1, 1, 1, 3, 3, 3, 3],
        vec![0, 1, 2, 3],
        &ICRS_LABELS,
    )?
    .require_port_language("0011 0110 1001 1100")
}

/// Atom labels of the FSU gadget: tetrahedron, XOR wings, inverted wings.
pub const FSU_LABELS: [&str; 10] = ["T1", "T2", "T3", "T4", "A", "B", "C", "~A", "~B", "~C"];

/// Unit-ball coordinates (blockade radius 1) in [`FSU_LABELS`] order.
pub const FSU_COORDINATES: [[f64; 3]; 10] = [
    [-0.45455, -0.26243, 0.0],
    [0.45455, -0.26243, 0.0],
    [0.0, 0.52486, 0.0],
    [0.0, 0.0, -0.74227],
    [0.0, 0.7873, -0.74227],
    [-0.68182, -0.39365, -0.74227],
    [0.68182, -0.39365, -0.74227],
    [0.0, -0.7873, 0.37113],
    [0.68182, 0.39365, 0.37113],
    [-0.68182, 0.39365, 0.37113],
];

/// Tetrahedron detuning and wing detuning of the stand-alone FSU gadget.
pub const FSU_DETUNINGS: (u32, u32) = (4, 1);

/// Fully-symmetric universal gadget. With `mirror` the x coordinate is negated.
pub fn build_fsu(mirror: bool) -> Result<GateSpec> {
    let sign = if mirror { -1.0 } else { 1.0 };
    let positions: Vec<Vec<f64>> = FSU_COORDINATES
        .iter()
        .map(|p| vec![sign * p[0], p[1], p[2]])
        .collect();
    let (tetra, wing) = FSU_DETUNINGS;
    let detunings: Vec<u32> = (0..10).map(|i| if i < 4 { tetra } else { wing }).collect();
    let name = if mirror { "fsu-mirror" } else { "fsu" };
    gate_from_geometry(name, 3, &positions, &detunings, (4..10).collect(), &FSU_LABELS)?
        .require_port_language("000111 011100 101010 110001")
}

/// The Klein four-group of the FSU gadget: the three half-turns about axes
/// through opposite tetrahedron edges, listed by the wing pair they fix (A, B, C).
pub fn fsu_klein_generators() -> [Permutation; 3] {
    // wing on tetrahedron edge {a, b}, FSU_LABELS order
    let wing_edges: [(usize, usize); 6] = [(2, 3), (0, 3), (1, 3), (0, 1), (1, 2), (0, 2)];
    let tetra_perms: [[usize; 4]; 3] = [[1, 0, 3, 2], [3, 2, 1, 0], [2, 3, 0, 1]];
    tetra_perms.map(|sigma| {
        let mut image: Vec<usize> = sigma.to_vec();
        for &(a, b) in &wing_edges {
            let target = (sigma[a].min(sigma[b]), sigma[a].max(sigma[b]));
            let w = wing_edges
                .iter()
                .position(|&e| e == target)
                .expect("tetrahedron symmetries permute edges");
            image.push(4 + w);
        }
        Permutation::new(image).expect("edge action of a tetrahedron symmetry is bijective")
    })
}

/// Atom labels of the FSU gadget extended by link chains.
pub const EXTENDED_FSU_LABELS: [&str; 22] = [
    "T1", "T2", "T3", "T4", "Wing ~A", "Wing ~B", "Wing ~C", "Wing B", "Wing C", "Wing A", "Bridge ~A",
    "Bridge A", "A", "~A", "Bridge ~B", "Bridge B", "~B", "B", "Bridge ~C", "Bridge C", "~C", "C",
];

/// Unit-ball coordinates of the extended gadget in [`EXTENDED_FSU_LABELS`] order.
pub const EXTENDED_FSU_COORDINATES: [[f64; 3]; 22] = [
    [-0.45455, -0.26243, 0.0],
    [0.45455, -0.26243, 0.0],
    [0.0, 0.52486, 0.0],
    [0.0, 0.0, -0.74227],
    [0.0, -0.7873, 0.37113],
    [0.68182, 0.39365, 0.37113],
    [-0.68182, 0.39365, 0.37113],
    [-0.68182, -0.39365, -0.74227],
    [0.68182, -0.39365, -0.74227],
    [0.0, 0.7873, -0.74227],
    [0.72727, -1.1547, 0.63093],
    [0.72727, 1.1547, -1.00206],
    [1.45455, -1.1547, 0.63093],
    [1.45455, 1.1547, -1.00206],
    [0.63636, 1.20719, 0.63093],
    [-1.36364, 0.05249, -1.00206],
    [0.27273, 1.83702, 0.63093],
    [-1.72727, 0.68232, -1.00206],
    [-1.36364, -0.05249, 0.63093],
    [0.63636, -1.20719, -1.00206],
    [-1.72727, -0.68232, 0.63093],
    [0.27273, -1.83702, -1.00206],
];

/// FSU gadget whose six wings are continued by two-atom link chains.
///
/// Tetrahedron 4, wings 2, bridges 2, chain ends 1 (in units of the unit
/// detuning); the chain ends are the ports.
pub fn build_extended_fsu() -> Result<GateSpec> {
    let positions: Vec<Vec<f64>> = EXTENDED_FSU_COORDINATES.iter().map(|p| p.to_vec()).collect();
    let detunings: Vec<u32> = EXTENDED_FSU_LABELS
        .iter()
        .map(|l| {
            if l.starts_with('T') {
                4
            } else if l.starts_with("Wing") || l.starts_with("Bridge") {
                2
            } else {
                1
            }
        })
        .collect();
    let ports: Vec<usize> = (0..22)
        .filter(|&i| detunings[i] == 1)
        .collect();
    gate_from_geometry("fsu-extended", 3, &positions, &detunings, ports, &EXTENDED_FSU_LABELS)
}
