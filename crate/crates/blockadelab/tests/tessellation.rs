use std::collections::{BTreeSet, HashSet, VecDeque};

use blockadelab::catalog::{amalgamate, build_fsu};
use blockadelab::combinatorics::{mwis, quotient_by_cliques, CliqueRule};
use blockadelab::model::{BlockadeGraph, Configuration, Language};
use blockadelab::symmetry::{act, automorphism_group, is_automorphism, orbits_under, Permutation};
use blockadelab::tessellation::*;
use num_bigint::BigUint;

/// Closed edge sets by brute force over all subsets, using only edge endpoints.
fn brute_force_loops(h: &Honeycomb) -> Vec<Vec<bool>> {
    let m = h.edges.len();
    assert!(m <= 20);
    (0u32..1 << m)
        .map(|mask| (0..m).map(|e| mask >> e & 1 == 1).collect::<Vec<bool>>())
        .filter(|set| {
            let mut degree = vec![0; h.vertices.len()];
            for (e, edge) in h.edges.iter().enumerate() {
                if set[e] {
                    for v in edge.ends.iter().flatten() {
                        degree[*v] += 1;
                    }
                }
            }
            degree.iter().all(|d| d % 2 == 0)
        })
        .collect()
}

fn orbit(generators: &[Permutation], start: &Configuration) -> BTreeSet<Configuration> {
    let mut seen = BTreeSet::from([start.clone()]);
    let mut queue = VecDeque::from([start.clone()]);
    while let Some(c) = queue.pop_front() {
        for g in generators {
            let image = act(g, &c).unwrap();
            if seen.insert(image.clone()) {
                queue.push_back(image);
            }
        }
    }
    seen
}

fn empty_loop(s: &LoopStructure) -> Configuration {
    s.lattice.configuration_of(&vec![false; s.lattice.honeycomb.edges.len()]).unwrap()
}

#[test]
fn torus_atom_count_from_index_maps() {
    let s = build_loop_structure(2, 2, Boundary::Periodic).unwrap();
    let l = &s.lattice;
    let mut atoms = HashSet::new();
    for t in &l.tetra {
        atoms.extend(t.iter().copied());
    }
    atoms.extend(l.light.iter().copied());
    atoms.extend(l.dark.iter().copied());
    assert_eq!(atoms.len(), 56);
    assert_eq!(s.graph.n(), 56);
    assert_eq!(l.tetra.len() * 4 + l.light.len() * 2, 56);
}

#[test]
fn edges_belong_to_two_plaquettes_on_torus() {
    for (nx, ny) in [(2, 2), (3, 2), (3, 3)] {
        let h = Honeycomb::new(nx, ny, Boundary::Periodic).unwrap();
        let mut count = vec![0; h.edges.len()];
        for p in &h.plaquettes {
            assert_eq!(p.edges.len(), 6);
            assert_eq!(p.vertices.len(), 6);
            for &e in &p.edges {
                count[e] += 1;
            }
        }
        assert!(count.iter().all(|&c| c == 2));
    }
    let h = Honeycomb::new(2, 2, Boundary::OpenRough).unwrap();
    let mut count = vec![0; h.edges.len()];
    for p in &h.plaquettes {
        for &e in &p.edges {
            count[e] += 1;
        }
    }
    assert!(count.iter().all(|&c| (1..=2).contains(&c)));
}

#[test]
fn loop_language_matches_brute_force_enumeration() {
    for (nx, ny, b) in [(2, 2, Boundary::Periodic), (1, 1, Boundary::OpenRough), (1, 2, Boundary::OpenRough), (2, 2, Boundary::OpenRough)] {
        let s = build_loop_structure(nx, ny, b).unwrap();
        let l = &s.lattice;
        let loops = brute_force_loops(&l.honeycomb);
        let language = loop_language(l).unwrap();
        assert_eq!(language.len(), loops.len(), "{nx}x{ny} {b}");
        for set in loops {
            let c = language.iter().find(|c| l.edge_set_of(c) == set).expect("loop present");
            for (e, &string) in set.iter().enumerate() {
                assert_eq!(c.get(l.light[e]), string);
                assert_eq!(c.get(l.dark[e]), !string);
            }
            for t in &l.tetra {
                assert_eq!(t.iter().filter(|&&a| c.get(a)).count(), 1);
            }
        }
    }
    let torus = build_loop_structure(2, 2, Boundary::Periodic).unwrap();
    let p = torus.lattice.honeycomb.plaquettes.len();
    assert_eq!(loop_language(&torus.lattice).unwrap().len(), 1 << (p - 1 + 2));
}

#[test]
fn loop_language_equals_mwis_language() {
    for (nx, ny, b) in [(1, 1, Boundary::OpenRough), (1, 2, Boundary::OpenRough), (2, 2, Boundary::Periodic)] {
        let s = build_loop_structure(nx, ny, b).unwrap();
        let m = mwis(&s.graph).unwrap();
        assert_eq!(m.language, loop_language(&s.lattice).unwrap(), "{nx}x{ny} {b}");
    }
}

#[test]
fn empty_loop_in_language() {
    let s = build_loop_structure(2, 1, Boundary::OpenRough).unwrap();
    let language = loop_language(&s.lattice).unwrap();
    let empty = empty_loop(&s);
    assert!(language.contains(&empty));
    assert!(s.lattice.light.iter().all(|&a| !empty.get(a)));
}

#[test]
fn plaquette_certificates() {
    for (nx, ny, b) in [(2, 2, Boundary::Periodic), (3, 2, Boundary::Periodic), (2, 2, Boundary::OpenRough)] {
        let s = build_loop_structure(nx, ny, b).unwrap();
        let h = &s.lattice.honeycomb;
        let perms: Vec<PlaquettePermutation> =
            (0..h.plaquettes.len()).map(|p| plaquette_automorphism(&s, p).unwrap()).collect();
        for (p, pp) in perms.iter().enumerate() {
            assert!(is_automorphism(&s.graph, &pp.permutation));
            assert!(pp.permutation.then(&pp.permutation).is_identity());
            assert_eq!(pp.edge_factors.len(), h.plaquettes[p].edges.len());
            for q in &perms {
                assert_eq!(pp.permutation.then(&q.permutation), q.permutation.then(&pp.permutation));
            }
        }
    }
}

#[test]
fn plaquette_action_adds_elementary_loop() {
    let s = build_loop_structure(2, 2, Boundary::OpenRough).unwrap();
    let l = &s.lattice;
    let language = loop_language(l).unwrap();
    for p in 0..l.honeycomb.plaquettes.len() {
        let perm = plaquette_automorphism(&s, p).unwrap().permutation;
        let loop_p = l.honeycomb.plaquette_edge_set(p).unwrap();
        for c in &language {
            let image = act(&perm, c).unwrap();
            assert!(language.contains(&image));
            let expected: Vec<bool> = l.edge_set_of(c).iter().zip(&loop_p).map(|(a, b)| a ^ b).collect();
            assert_eq!(l.edge_set_of(&image), expected);
        }
    }
    // the all-empty state maps to the elementary hexagon loop
    let full = (0..l.honeycomb.plaquettes.len()).find(|&p| l.honeycomb.plaquettes[p].edges.len() == 6).unwrap();
    let image = act(&plaquette_automorphism(&s, full).unwrap().permutation, &empty_loop(&s)).unwrap();
    assert_eq!(l.edge_set_of(&image), l.honeycomb.plaquette_edge_set(full).unwrap());
}

#[test]
fn generated_group_is_transitive() {
    for (nx, ny, b) in [(2, 2, Boundary::Periodic), (1, 2, Boundary::OpenRough), (2, 2, Boundary::OpenRough), (3, 2, Boundary::OpenRough)] {
        let s = build_loop_structure(nx, ny, b).unwrap();
        let generators: Vec<Permutation> = loop_generators(&s).unwrap().into_iter().map(|g| g.permutation).collect();
        let language = loop_language(&s.lattice).unwrap();
        let reached = orbit(&generators, &empty_loop(&s));
        assert_eq!(reached.len(), language.len(), "{nx}x{ny} {b}");
        assert!(reached.iter().all(|c| language.contains(c)));
        let orbits = orbits_under(&generators, &language).unwrap();
        assert_eq!(orbits.len(), 1);
    }
}

#[test]
fn open_edge_paths_are_not_automorphisms() {
    let s = build_loop_structure(2, 2, Boundary::Periodic).unwrap();
    for e in 0..s.lattice.honeycomb.edges.len() {
        assert!(!is_automorphism(&s.graph, &s.lattice.edge_swap(e)));
    }
    let mut path = s.lattice.honeycomb.plaquette_edge_set(0).unwrap();
    let first = path.iter().position(|&x| x).unwrap();
    path[first] = false;
    assert!(cycle_automorphism(&s, &path).is_err());
    // the unverified composition along the open path is not an automorphism
    let mut perm = Permutation::identity(s.graph.n());
    for e in (0..path.len()).filter(|&e| path[e]) {
        perm = perm.then(&s.lattice.edge_swap(e));
    }
    assert!(!is_automorphism(&s.graph, &perm));
}

#[test]
fn three_plaquette_loop_acts_on_boundary_edges() {
    let s = build_loop_structure(3, 3, Boundary::Periodic).unwrap();
    let h = &s.lattice.honeycomb;
    // three hexagons around vertex A(1,1): p(1,1), p(0,1), p(0,2)
    let find = |cell: (i64, i64)| h.plaquettes.iter().position(|p| p.cell == cell).unwrap();
    let ps = vec![find((1, 1)), find((0, 1)), find((0, 2))];
    let a = h.vertex_at(Sublattice::A, (1, 1)).unwrap();
    for &p in &ps {
        assert!(h.plaquettes[p].vertices.contains(&a));
    }
    let product = loop_automorphism(&s, &LoopSpec::Plaquettes(ps.clone())).unwrap();
    let mut count = vec![0; h.edges.len()];
    for &p in &ps {
        for &e in &h.plaquettes[p].edges {
            count[e] += 1;
        }
    }
    let boundary: Vec<usize> = (0..h.edges.len()).filter(|&e| count[e] == 1).collect();
    assert_eq!(boundary.len(), 12);
    assert_eq!(product.edge_factors, boundary);
    assert!(product.vertex_factors.iter().all(|&(v, _)| v != a));
    for &e in &h.vertices[a].edges {
        let l = &s.lattice;
        assert_eq!(product.permutation.apply(l.light[e]), l.light[e]);
    }
}

#[test]
fn empty_plaquette_set_is_identity() {
    let s = build_loop_structure(2, 2, Boundary::OpenRough).unwrap();
    assert!(loop_automorphism(&s, &LoopSpec::Plaquettes(vec![])).unwrap().permutation.is_identity());
}

#[test]
fn homology_loops() {
    let s = build_loop_structure(2, 2, Boundary::Periodic).unwrap();
    let h = &s.lattice.honeycomb;
    let x = loop_automorphism(&s, &LoopSpec::Homology { axis: Axis::X, offset: 0 }).unwrap();
    let y = loop_automorphism(&s, &LoopSpec::Homology { axis: Axis::Y, offset: 1 }).unwrap();
    assert!(x.permutation.then(&x.permutation).is_identity());
    assert_eq!(x.permutation.then(&y.permutation), y.permutation.then(&x.permutation));
    let plaquette_sets: Vec<Vec<bool>> = (0..h.plaquettes.len()).map(|p| h.plaquette_edge_set(p).unwrap()).collect();
    let base = z2_rank(&plaquette_sets);
    assert_eq!(base, h.plaquettes.len() - 1);
    let hx = h.homology_cycle(Axis::X, 0).unwrap();
    let hy = h.homology_cycle(Axis::Y, 1).unwrap();
    let xy: Vec<bool> = hx.iter().zip(&hy).map(|(a, b)| a ^ b).collect();
    for extra in [&hx, &hy, &xy] {
        let mut with = plaquette_sets.clone();
        with.push(extra.clone());
        assert_eq!(z2_rank(&with), base + 1, "not a plaquette product");
    }
    let mut all = plaquette_sets.clone();
    all.extend([hx, hy]);
    assert_eq!(z2_rank(&all), h.cycle_space_basis().len());
    // shifted copies of a homology loop differ by plaquettes
    let x1 = h.homology_cycle(Axis::X, 1).unwrap();
    let x0 = h.homology_cycle(Axis::X, 0).unwrap();
    let diff: Vec<bool> = x0.iter().zip(&x1).map(|(a, b)| a ^ b).collect();
    let mut with = plaquette_sets.clone();
    with.push(diff);
    assert_eq!(z2_rank(&with), base);

    let open = build_loop_structure(2, 2, Boundary::OpenRough).unwrap();
    assert!(loop_automorphism(&open, &LoopSpec::Homology { axis: Axis::X, offset: 0 }).is_err());
}

#[test]
fn loop_support_rank_matches_cycle_space() {
    for (nx, ny) in [(2, 2), (3, 2), (3, 3)] {
        let s = build_loop_structure(nx, ny, Boundary::Periodic).unwrap();
        let supports: Vec<Vec<bool>> = loop_generators(&s)
            .unwrap()
            .iter()
            .map(|g| {
                let mut set = vec![false; s.lattice.honeycomb.edges.len()];
                for &e in &g.edge_factors {
                    set[e] = true;
                }
                set
            })
            .collect();
        let p = s.lattice.honeycomb.plaquettes.len();
        assert_eq!(z2_rank(&supports), p - 1 + 2);
    }
}

#[test]
fn torus_group_order_at_least_loop_group() {
    let s = build_loop_structure(2, 2, Boundary::Periodic).unwrap();
    let order = automorphism_group(&s.graph).unwrap().order;
    let p = s.lattice.honeycomb.plaquettes.len() as u32;
    let loops = BigUint::from(2u32).pow(p - 1 + 2);
    assert!(order >= loops);
    assert_eq!(&order % &loops, BigUint::from(0u32));
}

#[test]
fn local_terms_are_frustration_free() {
    for (nx, ny, b) in [(2, 2, Boundary::Periodic), (2, 2, Boundary::OpenRough)] {
        let s = build_loop_structure(nx, ny, b).unwrap();
        let terms = frustration_free_decomposition(&s);
        let mut coefficient = vec![0.0; s.graph.n()];
        let mut owned = Vec::new();
        for t in &terms {
            for (&a, &d) in t.atoms.iter().zip(&t.detunings) {
                coefficient[a] += d;
            }
            owned.extend(t.blockades.iter().copied());
        }
        for (a, &c) in coefficient.iter().enumerate() {
            assert_eq!(c, f64::from(s.graph.weight(a)));
        }
        owned.sort();
        assert_eq!(owned, s.graph.edges());
        let ground: Vec<f64> = terms.iter().map(LocalTerm::ground_energy).collect();
        for c in &loop_language(&s.lattice).unwrap() {
            for (t, &e0) in terms.iter().zip(&ground) {
                assert_eq!(t.energy(c, 1e6), e0);
            }
        }
        // a single string segment leaves its endpoints unsatisfied
        let mut open = empty_loop(&s);
        let e = 0;
        open.flip(s.lattice.light[e]);
        open.flip(s.lattice.dark[e]);
        let failing = terms.iter().zip(&ground).filter(|(t, &e0)| t.energy(&open, 1e6) > e0).count();
        assert!(failing >= 1);
    }
}

fn disjoint_union(a: &BlockadeGraph, b: &BlockadeGraph) -> BlockadeGraph {
    let n = a.n();
    let edges = a.edges().iter().copied().chain(b.edges().iter().map(|&(x, y)| (x + n, y + n)));
    BlockadeGraph::new(n + b.n(), edges, [a.weights(), b.weights()].concat()).unwrap()
}

#[test]
fn single_cell_patch_is_two_amalgamated_fsu_gates() {
    let s = build_loop_structure(1, 1, Boundary::OpenRough).unwrap();
    let fsu = build_fsu(false).unwrap();
    let mirror = build_fsu(true).unwrap();
    let (a, na) = (fsu.atom("A").unwrap(), fsu.atom("~A").unwrap());
    let pair = amalgamate(&fsu, &mirror, &[(a, a), (na, na)]).unwrap();
    assert_eq!(pair.graph.n(), s.graph.n());
    // connected graphs are isomorphic iff some automorphism of their disjoint
    // union exchanges the two components
    let union = disjoint_union(&s.graph, &pair.graph);
    let orbits = automorphism_group(&union).unwrap().vertex_orbits();
    assert!(orbits.iter().any(|o| o.iter().any(|&v| v < 18) && o.iter().any(|&v| v >= 18)));
    assert_eq!(pair.full_language().unwrap().len(), loop_language(&s.lattice).unwrap().len());
}

#[test]
fn singleport_patch_encodes_loops_in_empty_ports() {
    let t = build_singleport_xor_tessellation(2, 1, Boundary::OpenRough).unwrap();
    let m = mwis(&t.graph).unwrap();
    let loops: BTreeSet<Vec<bool>> = brute_force_loops(&t.honeycomb).into_iter().collect();
    let found: BTreeSet<Vec<bool>> =
        m.language.iter().map(|c| t.ports.iter().map(|&p| !c.get(p)).collect()).collect();
    assert_eq!(found, loops);
}

#[test]
fn singleport_automorphisms_fixing_an_annulus_fix_every_port() {
    let t = build_singleport_xor_tessellation(4, 4, Boundary::OpenRough).unwrap();
    let h = &t.honeycomb;
    // annulus: every vertex with a dangling edge, its ancillas and its ports
    let mut annulus: BTreeSet<usize> = BTreeSet::new();
    for (v, vertex) in h.vertices.iter().enumerate() {
        if vertex.edges.iter().any(|&e| h.edges[e].is_dangling()) {
            annulus.extend(t.ancillas[v]);
            annulus.extend(vertex.edges.iter().map(|&e| t.ports[e]));
        }
    }
    let mut weights = t.graph.weights().to_vec();
    for (k, &a) in annulus.iter().enumerate() {
        weights[a] = 100 + k as u32;
    }
    let pinned = t.graph.with_weights(weights).unwrap();
    let group = automorphism_group(&pinned).unwrap();
    for g in &group.generators {
        for &p in &t.ports {
            assert_eq!(g.apply(p), p);
        }
    }
    // the loop structure on the same patch keeps non-trivial interior automorphisms
    let s = build_loop_structure(4, 4, Boundary::OpenRough).unwrap();
    let h = &s.lattice.honeycomb;
    let mut boundary: BTreeSet<usize> = BTreeSet::new();
    for (v, vertex) in h.vertices.iter().enumerate() {
        if vertex.edges.iter().any(|&e| h.edges[e].is_dangling()) {
            boundary.extend(s.lattice.tetra[v]);
            for &e in &vertex.edges {
                boundary.extend([s.lattice.light[e], s.lattice.dark[e]]);
            }
        }
    }
    let mut weights = s.graph.weights().to_vec();
    for (k, &a) in boundary.iter().enumerate() {
        weights[a] = 100 + k as u32;
    }
    let pinned = s.graph.with_weights(weights).unwrap();
    let interior = (0..h.plaquettes.len())
        .find(|&p| h.plaquettes[p].vertices.iter().all(|&v| h.vertices[v].edges.iter().all(|&e| !h.edges[e].is_dangling())))
        .map(|p| plaquette_automorphism(&s, p).unwrap());
    assert!(is_automorphism(&pinned, &interior.expect("4x4 patch has an interior hexagon").permutation));
    assert!(automorphism_group(&pinned).unwrap().order > BigUint::from(1u32));
}

/// Counts automorphisms by extending a partial vertex map one vertex at a
/// time (breadth-first order, so each new vertex has a mapped neighbor).
fn count_automorphisms(g: &BlockadeGraph) -> u64 {
    let n = g.n();
    let mut order = Vec::new();
    let mut seen = vec![false; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &u in g.neighbors(v) {
                if !seen[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
    }
    fn extend(g: &BlockadeGraph, order: &[usize], k: usize, image: &mut Vec<Option<usize>>, used: &mut Vec<bool>) -> u64 {
        if k == order.len() {
            return 1;
        }
        let v = order[k];
        let anchor = g.neighbors(v).iter().find_map(|&u| image[u]);
        let candidates: Vec<usize> = match anchor {
            Some(a) => g.neighbors(a).to_vec(),
            None => (0..g.n()).collect(),
        };
        let mut total = 0;
        for w in candidates {
            if used[w] || g.weight(w) != g.weight(v) || g.degree(w) != g.degree(v) {
                continue;
            }
            let consistent = order[..k]
                .iter()
                .all(|&u| g.has_edge(u, v) == g.has_edge(image[u].unwrap(), w));
            if consistent {
                image[v] = Some(w);
                used[w] = true;
                total += extend(g, order, k + 1, image, used);
                image[v] = None;
                used[w] = false;
            }
        }
        total
    }
    extend(g, &order, 0, &mut vec![None; n], &mut vec![false; n])
}

#[test]
fn literature_group_orders() {
    let order = |m, nx, ny| automorphism_group(&build_literature_model(m, nx, ny).unwrap()).unwrap().order;
    assert_eq!(order(LiteratureModel::Zeng, 3, 3), BigUint::from(8u32 * 9));
    for m in [LiteratureModel::Verresen, LiteratureModel::Stastny] {
        assert_eq!(order(m, 4, 4), BigUint::from(12u32 * 16));
        assert_eq!(order(m, 5, 5), BigUint::from(12u32 * 25));
        // the reduced 3x3 honeycomb torus is the Pappus graph, whose
        // automorphism group is twice its lattice symmetry group
        assert_eq!(order(m, 3, 3), BigUint::from(2 * 12u32 * 9));
    }
    // two links between the same pair of sites add edge-swap symmetries
    assert!(order(LiteratureModel::Zeng, 3, 2) > BigUint::from(8u32 * 6));
}

#[test]
fn literature_group_orders_match_backtracking() {
    for (m, nx, ny) in [
        (LiteratureModel::Verresen, 3, 3),
        (LiteratureModel::Stastny, 3, 3),
        (LiteratureModel::Zeng, 3, 3),
        (LiteratureModel::Zeng, 3, 2),
        (LiteratureModel::Stastny, 3, 4),
    ] {
        let g = build_literature_model(m, nx, ny).unwrap();
        let expected = count_automorphisms(&g);
        assert_eq!(automorphism_group(&g).unwrap().order, BigUint::from(expected), "{m:?} {nx}x{ny}");
    }
    let pappus = Honeycomb::new(3, 3, Boundary::Periodic).unwrap();
    let edges = pappus.edges.iter().map(|e| (e.ends[0].unwrap(), e.ends[1].unwrap()));
    let g = BlockadeGraph::new(18, edges, vec![1; 18]).unwrap();
    assert_eq!(count_automorphisms(&g), 216);
}

#[test]
fn literature_quotients_keep_group_order() {
    for (m, clique) in [(LiteratureModel::Zeng, 4), (LiteratureModel::Stastny, 3)] {
        let g = build_literature_model(m, 3, 3).unwrap();
        let q = quotient_by_cliques(&g, &CliqueRule::ConnectedNeighborhood).unwrap();
        assert!(q.classes.iter().all(|c| c.len() == 1 || c.len() == clique));
        let reduced = q.to_graph(&g);
        assert_eq!(automorphism_group(&reduced).unwrap().order, automorphism_group(&g).unwrap().order);
    }
}

#[test]
fn zeng_dimer_language_orbits() {
    let g = build_literature_model(LiteratureModel::Zeng, 3, 2).unwrap();
    let m = mwis(&g).unwrap();
    let a = automorphism_group(&g).unwrap();
    let orbits = orbits_under(&a.generators, &m.language).unwrap();
    assert_eq!(orbits.len(), 2);
    // every ground state is a dimer covering: each site touches one excited port
    let ports: Vec<usize> = (0..g.n()).filter(|&v| g.weight(v) == 1).collect();
    for c in &m.language {
        assert_eq!(ports.iter().filter(|&&p| c.get(p)).count(), 3);
    }
    assert_eq!(m.language.len(), dimer_coverings(3, 2));
}

/// Dimer coverings of the periodic `nx × ny` square lattice (links counted
/// separately even when they join the same pair of sites).
fn dimer_coverings(nx: usize, ny: usize) -> usize {
    let sites = nx * ny;
    let links: Vec<(usize, usize)> = (0..ny)
        .flat_map(|j| (0..nx).flat_map(move |i| [(j * nx + i, j * nx + (i + 1) % nx), (j * nx + i, ((j + 1) % ny) * nx + i)]))
        .collect();
    (0u32..1 << links.len())
        .filter(|&m| {
            let mut cover = vec![0; sites];
            for (k, &(a, b)) in links.iter().enumerate() {
                if m >> k & 1 == 1 {
                    cover[a] += 1;
                    cover[b] += 1;
                }
            }
            cover.iter().all(|&c| c == 1)
        })
        .count()
}

#[test]
fn literature_sizes_rejected() {
    assert!(build_literature_model(LiteratureModel::Zeng, 1, 3).is_err());
    assert!("kitaev".parse::<LiteratureModel>().is_err());
}

#[test]
fn language_of_loops_is_a_language() {
    let s = build_loop_structure(1, 1, Boundary::OpenRough).unwrap();
    let l: Language = loop_language(&s.lattice).unwrap();
    assert_eq!(l.width(), Some(18));
}
