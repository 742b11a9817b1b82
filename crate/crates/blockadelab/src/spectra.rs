//! Exact diagonalization of blockade Hamiltonians
//! `H = Ω Σ σˣ_i − Δ Σ w_i n_i (+ U Σ_{ij∈E} n_i n_j) (+ ω/2 Σ_p (1 − U_p))`
//! in the blockade-constrained basis (or the full basis for finite `U`),
//! together with ground-state diagnostics, flux-sector labels and
//! Schrieffer–Wolff effective Hamiltonians.

use std::collections::{BTreeMap, HashMap};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combinatorics::enumerate_all_independent_sets;
use crate::error::{Error, Result};
use crate::model::{BlockadeGraph, Configuration, Language};
use crate::symmetry::{act, is_automorphism, Permutation};

/// Default cap on the Hilbert-space dimension.
pub const DEFAULT_MAX_BASIS: usize = 1 << 24;
/// Largest dimension handled by the dense solver.
pub const DENSE_LIMIT: usize = 4096;
/// Eigenvalues closer than this (in units of Δ) count as degenerate.
pub const DEGENERACY_TOLERANCE: f64 = 1e-9;
/// Lanczos residual tolerance relative to `max(1, |θ|)`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-12;
/// Amplitudes below this magnitude count as vanishing.
pub const AMPLITUDE_TOLERANCE: f64 = 1e-12;
/// Relative amplitude spread accepted as equal weight.
pub const EQUAL_WEIGHT_TOLERANCE: f64 = 1e-10;
/// Highest perturbative order `effective_hamiltonian` accepts by default.
pub const MAX_EFFECTIVE_ORDER: usize = 6;
/// Largest structure `effective_hamiltonian` accepts.
pub const MAX_EFFECTIVE_ATOMS: usize = 14;

const LANCZOS_SEED: u64 = 0x5eed_b10c;

/// Plaquette term `(ω/2) Σ_p (1 − U_p)` for a list of involutive automorphisms.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlaquetteTerm {
    pub omega: f64,
    pub permutations: Vec<Permutation>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HamiltonianSpec {
    pub graph: BlockadeGraph,
    pub omega: f64,
    pub delta: f64,
    /// Blockade strength; `None` restricts to independent sets.
    pub u0: Option<f64>,
    pub plaquettes: Option<PlaquetteTerm>,
    pub max_basis: usize,
}

impl HamiltonianSpec {
    /// Constrained Hamiltonian with `Δ = 1` and no plaquette term.
    pub fn new(graph: BlockadeGraph, omega: f64) -> Self {
        HamiltonianSpec {
            graph,
            omega,
            delta: 1.0,
            u0: None,
            plaquettes: None,
            max_basis: DEFAULT_MAX_BASIS,
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_blockade(mut self, u0: f64) -> Self {
        self.u0 = Some(u0);
        self
    }

    pub fn with_plaquettes(mut self, omega: f64, permutations: Vec<Permutation>) -> Self {
        self.plaquettes = Some(PlaquetteTerm { omega, permutations });
        self
    }

    pub fn with_max_basis(mut self, max_basis: usize) -> Self {
        self.max_basis = max_basis;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.delta.is_finite() && self.delta > 0.0) {
            return Err(Error::Argument(format!("Δ must be positive, got {}", self.delta)));
        }
        if !self.omega.is_finite() {
            return Err(Error::Argument("Ω must be finite".into()));
        }
        if let Some(u0) = self.u0 {
            let total = self.delta * self.graph.total_weight() as f64;
            if !(u0.is_finite() && u0 > total) {
                return Err(Error::Argument(format!(
                    "finite blockade strength {u0} must exceed the total detuning {total}"
                )));
            }
        }
        if self.graph.n() > 128 {
            return Err(Error::LimitExceeded {
                what: "atom count",
                size: self.graph.n() as u128,
                limit: 128,
            });
        }
        Ok(())
    }
}

/// Sparse real symmetric Hamiltonian in compressed-row form.
#[derive(Clone, Debug)]
pub struct SparseHamiltonian {
    pub basis: Vec<Configuration>,
    index: HashMap<u128, usize>,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
}

impl SparseHamiltonian {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, c: &Configuration) -> Option<usize> {
        if c.len() > 128 {
            return None;
        }
        self.index.get(&c.to_mask()).copied()
    }

    /// Nonzero entries `(column, value)` of a row.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[range.clone()].iter().copied().zip(self.vals[range].iter().copied())
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.row(i).find(|&(c, _)| c == j).map_or(0.0, |(_, v)| v)
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.par_iter_mut().enumerate().for_each(|(i, yi)| {
            *yi = self.row(i).map(|(j, v)| v * x[j]).sum();
        });
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim(), self.dim());
        for i in 0..self.dim() {
            for (j, v) in self.row(i) {
                m[(i, j)] = v;
            }
        }
        m
    }

    /// Exact symmetry of the stored pattern.
    pub fn is_symmetric(&self) -> bool {
        (0..self.dim()).all(|i| self.row(i).all(|(j, v)| self.entry(j, i) == v))
    }

    /// Whether `U_φ H U_φ† = H`, compared entry by entry.
    pub fn commutes_with(&self, p: &Permutation) -> bool {
        let image: Option<Vec<usize>> = self
            .basis
            .iter()
            .map(|c| act(p, c).ok().and_then(|d| self.index_of(&d)))
            .collect();
        let Some(image) = image else {
            return false;
        };
        (0..self.dim()).all(|i| {
            let (pi, row_len) = (image[i], self.row_ptr[i + 1] - self.row_ptr[i]);
            row_len == self.row_ptr[pi + 1] - self.row_ptr[pi] && self.row(i).all(|(j, v)| self.entry(pi, image[j]) == v)
        })
    }
}

fn basis_for(spec: &HamiltonianSpec) -> Result<Vec<Configuration>> {
    let n = spec.graph.n();
    match spec.u0 {
        None => enumerate_all_independent_sets(&spec.graph, spec.max_basis),
        Some(_) => {
            let size = 1u128 << n;
            if size > spec.max_basis as u128 {
                return Err(Error::LimitExceeded {
                    what: "basis size",
                    size,
                    limit: spec.max_basis as u128,
                });
            }
            let mut basis: Vec<Configuration> = (0..size).map(|m| Configuration::from_mask(n, m)).collect();
            basis.sort();
            Ok(basis)
        }
    }
}

pub fn build_hamiltonian(spec: &HamiltonianSpec) -> Result<SparseHamiltonian> {
    spec.validate()?;
    let g = &spec.graph;
    let n = g.n();
    let basis = basis_for(spec)?;
    let masks: Vec<u128> = basis.iter().map(Configuration::to_mask).collect();
    let index: HashMap<u128, usize> = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    if let Some(term) = &spec.plaquettes {
        for p in &term.permutations {
            if p.len() != n || !is_automorphism(g, p) {
                return Err(Error::NotInvariant("plaquette permutation is not a blockade-graph automorphism".into()));
            }
            if !p.then(p).is_identity() {
                return Err(Error::NotInvariant("plaquette permutation is not an involution".into()));
            }
        }
    }
    let rows: Vec<Vec<(usize, f64)>> = masks
        .par_iter()
        .zip(basis.par_iter())
        .map(|(&m, c)| {
            let mut row: BTreeMap<usize, f64> = BTreeMap::new();
            let mut diagonal = -spec.delta * g.configuration_weight(c) as f64;
            if let Some(u0) = spec.u0 {
                diagonal += u0 * g.violated_blockades(c) as f64;
            }
            if spec.omega != 0.0 {
                for i in 0..n {
                    if let Some(&j) = index.get(&(m ^ 1u128 << i)) {
                        *row.entry(j).or_default() += spec.omega;
                    }
                }
            }
            if let Some(term) = &spec.plaquettes {
                for p in &term.permutations {
                    let image = act(p, c).expect("lengths checked");
                    let j = index[&image.to_mask()];
                    diagonal += term.omega / 2.0;
                    *row.entry(j).or_default() -= term.omega / 2.0;
                }
            }
            *row.entry(index[&m]).or_default() += diagonal;
            row.into_iter().filter(|&(_, v)| v != 0.0).collect()
        })
        .collect();
    let mut row_ptr = vec![0];
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    for row in rows {
        for (j, v) in row {
            cols.push(j);
            vals.push(v);
        }
        row_ptr.push(cols.len());
    }
    Ok(SparseHamiltonian {
        basis,
        index,
        row_ptr,
        cols,
        vals,
    })
}

/// Eigenpairs in ascending order of energy.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

/// All eigenpairs by dense symmetric diagonalization.
pub fn dense_eigen(h: &SparseHamiltonian) -> Eigen {
    let eig = SymmetricEigen::new(h.to_dense());
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    Eigen {
        values: order.iter().map(|&k| eig.eigenvalues[k]).collect(),
        vectors: order.iter().map(|&k| eig.eigenvectors.column(k).iter().copied().collect()).collect(),
    }
}

/// The `k` lowest eigenpairs: dense below [`DENSE_LIMIT`], Lanczos above.
pub fn lowest_eigenpairs(h: &SparseHamiltonian, k: usize) -> Result<Eigen> {
    let k = k.min(h.dim());
    if h.dim() <= DENSE_LIMIT {
        let mut e = dense_eigen(h);
        e.values.truncate(k);
        e.vectors.truncate(k);
        Ok(e)
    } else {
        lanczos(h, k)
    }
}

/// Dot product with a compensated (error-free) accumulation, accurate to
/// about twice the working precision.
fn dot2(terms: impl Iterator<Item = (f64, f64)>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for (a, b) in terms {
        let p = a * b;
        let pe = a.mul_add(b, -p);
        let t = s + p;
        let z = t - s;
        c += (s - (t - z)) + (p - z) + pe;
        s = t;
    }
    s + c
}

/// Refines a simple eigenpair by Newton steps on the bordered system
/// `[[H − λ, v], [vᵀ, 0]]`, with residuals in compensated arithmetic. Near-degenerate
/// levels make double-precision eigenvectors accurate only to `ε‖H‖/gap`;
/// after refinement the error is that of rounding `v` itself.
pub fn refine_eigenpair(h: &SparseHamiltonian, value: &mut f64, vector: &mut [f64]) {
    let n = h.dim();
    if !(2..=DENSE_LIMIT).contains(&n) {
        return;
    }
    for _ in 0..3 {
        let lambda = *value;
        let residual: Vec<f64> = (0..n)
            .into_par_iter()
            .map(|i| dot2(h.row(i).map(|(j, x)| (x, vector[j])).chain(std::iter::once((-lambda, vector[i])))))
            .collect();
        let norm_r = residual.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm_r < f64::EPSILON * 1e-3 {
            break;
        }
        let mut bordered = DMatrix::<f64>::zeros(n + 1, n + 1);
        for i in 0..n {
            for (j, x) in h.row(i) {
                bordered[(i, j)] += x;
            }
            bordered[(i, i)] -= lambda;
            bordered[(i, n)] = vector[i];
            bordered[(n, i)] = vector[i];
        }
        let rhs = nalgebra::DVector::from_iterator(
            n + 1,
            residual.iter().map(|r| -r).chain(std::iter::once(0.0)),
        );
        let Some(step) = bordered.lu().solve(&rhs) else {
            return;
        };
        vector.iter_mut().zip(step.iter()).for_each(|(v, d)| *v += d);
        *value -= step[n];
        normalize(vector);
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += alpha * xi);
}

fn normalize(v: &mut [f64]) -> f64 {
    let norm = dot(v, v).sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
    norm
}

fn orthogonalize(v: &mut [f64], against: &[Vec<f64>]) {
    for _ in 0..2 {
        for u in against {
            let c = dot(u, v);
            axpy(-c, u, v);
        }
    }
}

/// Lowest `k` eigenpairs by Lanczos with full reorthogonalization, locking
/// each converged vector before searching for the next one (so degenerate
/// levels are resolved one copy at a time).
pub fn lanczos(h: &SparseHamiltonian, k: usize) -> Result<Eigen> {
    let mut rng = ChaCha8Rng::seed_from_u64(LANCZOS_SEED);
    let mut locked: Vec<Vec<f64>> = Vec::new();
    let mut values = Vec::new();
    for _ in 0..k.min(h.dim()) {
        let start: Vec<f64> = (0..h.dim()).map(|_| rng.gen::<f64>() - 0.5).collect();
        let (theta, x) = lanczos_lowest(h, &locked, start)?;
        values.push(theta);
        locked.push(x);
    }
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    Ok(Eigen {
        values: order.iter().map(|&i| values[i]).collect(),
        vectors: order.iter().map(|&i| locked[i].clone()).collect(),
    })
}

fn lanczos_lowest(h: &SparseHamiltonian, locked: &[Vec<f64>], mut start: Vec<f64>) -> Result<(f64, Vec<f64>)> {
    let dim = h.dim();
    let krylov_max = (dim - locked.len()).clamp(1, 400);
    let mut best_residual = f64::INFINITY;
    for _restart in 0..60 {
        orthogonalize(&mut start, locked);
        if normalize(&mut start) == 0.0 {
            return Err(Error::NoConvergence { residual: f64::NAN });
        }
        let mut basis: Vec<Vec<f64>> = vec![start.clone()];
        let mut alpha: Vec<f64> = Vec::new();
        let mut beta: Vec<f64> = Vec::new();
        let mut w = vec![0.0; dim];
        loop {
            let j = basis.len() - 1;
            h.matvec(&basis[j], &mut w);
            let a = dot(&w, &basis[j]);
            alpha.push(a);
            // locked directions last, so rounding never reintroduces them
            for _ in 0..2 {
                orthogonalize(&mut w, &basis);
                orthogonalize(&mut w, locked);
            }
            let b = dot(&w, &w).sqrt();
            let m = alpha.len();
            let check = m == krylov_max || b < 1e-14 || m.is_multiple_of(10);
            if check {
                let t = DMatrix::from_fn(m, m, |r, c| {
                    if r == c {
                        alpha[r]
                    } else if r + 1 == c {
                        beta[r]
                    } else if c + 1 == r {
                        beta[c]
                    } else {
                        0.0
                    }
                });
                let eig = SymmetricEigen::new(t);
                let lowest = (0..m).min_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b])).expect("m ≥ 1");
                let theta = eig.eigenvalues[lowest];
                let y = eig.eigenvectors.column(lowest);
                let mut x = vec![0.0; dim];
                for (v, &c) in basis.iter().zip(y.iter()) {
                    axpy(c, v, &mut x);
                }
                normalize(&mut x);
                let mut hx = vec![0.0; dim];
                h.matvec(&x, &mut hx);
                axpy(-theta, &x, &mut hx);
                orthogonalize(&mut hx, locked);
                let residual = dot(&hx, &hx).sqrt();
                best_residual = best_residual.min(residual);
                if residual < RESIDUAL_TOLERANCE * theta.abs().max(1.0) {
                    return Ok((theta, x));
                }
                if m == krylov_max || b < 1e-14 {
                    start = x;
                    break;
                }
            }
            beta.push(b);
            basis.push(w.iter().map(|x| x / b).collect());
        }
    }
    Err(Error::NoConvergence { residual: best_residual })
}

/// Groups ascending eigenvalues into `(energy, degeneracy)` levels.
pub fn group_levels(values: &[f64], tolerance: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize)> = Vec::new();
    for &v in values {
        match out.last_mut() {
            Some((e, d)) if (v - *e).abs() <= tolerance => *d += 1,
            _ => out.push((v, 1)),
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<f64>,
    /// Ground-state amplitude of every basis configuration.
    pub ground_amplitudes: Vec<(Configuration, f64)>,
    /// Amplitudes of the logical configurations, in language order.
    pub logical_amplitudes: Vec<(Configuration, f64)>,
    /// Total ground-state probability on the logical configurations.
    pub logical_weight: f64,
    pub gap: Option<f64>,
    pub unique: bool,
    /// `(max |λ| − min |λ|) / max |λ|` over the logical amplitudes.
    pub logical_spread: f64,
    pub equal_weight: bool,
    pub min_abs_amplitude: f64,
    /// Every amplitude is nonzero with sign `(−1)^{#excited}` (Ω > 0) or a
    /// common sign (Ω < 0).
    pub sign_structure: bool,
}

/// Lowest `levels` eigenvalues plus ground-state diagnostics over `logical`.
pub fn ground_state_analysis(spec: &HamiltonianSpec, logical: &Language, levels: usize) -> Result<SpectrumReport> {
    let h = build_hamiltonian(spec)?;
    let mut eig = lowest_eigenpairs(&h, levels.max(2))?;
    if eig.values.len() > 1 && eig.values[1] - eig.values[0] > DEGENERACY_TOLERANCE * spec.delta {
        let (values, vectors) = (&mut eig.values, &mut eig.vectors);
        refine_eigenpair(&h, &mut values[0], &mut vectors[0]);
    }
    report_from_eigen(spec, &h, &eig, logical, levels)
}

fn excitation_sign(c: &Configuration) -> f64 {
    if c.count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn report_from_eigen(
    spec: &HamiltonianSpec,
    h: &SparseHamiltonian,
    eig: &Eigen,
    logical: &Language,
    levels: usize,
) -> Result<SpectrumReport> {
    let mut ground = eig.vectors[0].clone();
    let sign_of = |c: &Configuration| if spec.omega > 0.0 { excitation_sign(c) } else { 1.0 };
    let logical_index: Vec<usize> = logical
        .iter()
        .map(|c| {
            h.index_of(c)
                .ok_or_else(|| Error::Argument(format!("logical configuration {c} is not a basis state")))
        })
        .collect::<Result<_>>()?;
    // phase: the first logical amplitude is positive after the sign transform
    let reference = logical_index.first().copied().unwrap_or_else(|| {
        (0..h.dim()).max_by(|&a, &b| ground[a].abs().total_cmp(&ground[b].abs())).unwrap_or(0)
    });
    if ground[reference] * sign_of(&h.basis[reference]) < 0.0 {
        ground.iter_mut().for_each(|x| *x = -*x);
    }
    let logical_amplitudes: Vec<(Configuration, f64)> =
        logical_index.iter().map(|&i| (h.basis[i].clone(), ground[i])).collect();
    let logical_weight = logical_amplitudes.iter().map(|(_, a)| a * a).sum();
    let magnitudes: Vec<f64> = logical_amplitudes.iter().map(|(_, a)| a.abs()).collect();
    let max = magnitudes.iter().copied().fold(0.0, f64::max);
    let min = magnitudes.iter().copied().fold(f64::INFINITY, f64::min);
    let logical_spread = if magnitudes.is_empty() || max == 0.0 { 0.0 } else { (max - min) / max };
    let min_abs_amplitude = ground.iter().map(|x| x.abs()).fold(f64::INFINITY, f64::min);
    let sign_structure = spec.omega != 0.0
        && h.basis
            .iter()
            .zip(&ground)
            .all(|(c, &a)| a.abs() > AMPLITUDE_TOLERANCE && a * sign_of(c) > 0.0);
    let gap = eig.values.get(1).map(|e1| e1 - eig.values[0]);
    let unique = gap.is_none_or(|g| g > DEGENERACY_TOLERANCE * spec.delta);
    let mut eigenvalues = eig.values.clone();
    eigenvalues.truncate(levels.max(1));
    Ok(SpectrumReport {
        eigenvalues,
        ground_amplitudes: h.basis.iter().cloned().zip(ground.iter().copied()).collect(),
        logical_amplitudes,
        logical_weight,
        gap,
        unique,
        logical_spread,
        equal_weight: logical_spread < EQUAL_WEIGHT_TOLERANCE,
        min_abs_amplitude,
        sign_structure,
    })
}

/// Whether the permutation's unitary commutes with the Hamiltonian.
pub fn symmetry_check(spec: &HamiltonianSpec, p: &Permutation) -> Result<bool> {
    let h = build_hamiltonian(spec)?;
    Ok(p.len() == spec.graph.n() && h.commutes_with(p))
}

/// Eigenstate with its flux pattern: `flux[p] = 1` when `U_p` has eigenvalue −1.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FluxLevel {
    pub energy: f64,
    pub flux: Vec<u8>,
    #[serde(skip)]
    pub vector: Vec<f64>,
}

impl FluxLevel {
    /// Number of plaquettes carrying flux, `|ξ|`.
    pub fn flux_count(&self) -> usize {
        self.flux.iter().filter(|&&f| f == 1).count()
    }
}

fn apply_permutation(h: &SparseHamiltonian, image: &[usize], v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (i, &x) in v.iter().enumerate() {
        out[image[i]] = x;
    }
    debug_assert_eq!(out.len(), h.dim());
    out
}

/// Flux-resolved spectrum by diagonalizing `H` separately in every joint
/// eigenspace of the operators, using the projectors `Π_p (1 ± U_p)/2` on
/// orbit representatives. `None` when the group or a block is too large.
fn sector_diagonalization(h: &SparseHamiltonian, images: &[Vec<usize>], levels: usize) -> Option<Vec<FluxLevel>> {
    let k = images.len();
    let dim = h.dim();
    if k > 8 || (dim << k) > 1 << 26 {
        return None;
    }
    // element_images[S] is the product of the generators in subset S
    let mut element_images: Vec<Vec<usize>> = vec![(0..dim).collect()];
    for s in 1usize..1 << k {
        let low = s.trailing_zeros() as usize;
        let rest = &element_images[s & (s - 1)];
        element_images.push(rest.iter().map(|&i| images[low][i]).collect());
    }
    let mut orbit_of = vec![usize::MAX; dim];
    let mut representatives = Vec::new();
    for i in 0..dim {
        if orbit_of[i] == usize::MAX {
            for image in &element_images {
                orbit_of[image[i]] = representatives.len();
            }
            representatives.push(i);
        }
    }
    let mut out = Vec::new();
    let mut coef = vec![0.0; dim];
    for xi in 0usize..1 << k {
        coef.iter_mut().for_each(|c| *c = 0.0);
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut block_of_orbit = vec![usize::MAX; representatives.len()];
        for (o, &r) in representatives.iter().enumerate() {
            for (s, image) in element_images.iter().enumerate() {
                coef[image[r]] += if (xi & s).count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            }
            let mut support: Vec<usize> = element_images.iter().map(|image| image[r]).collect();
            support.sort_unstable();
            support.dedup();
            support.retain(|&j| coef[j] != 0.0);
            let norm = support.iter().map(|&j| coef[j] * coef[j]).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            support.iter().for_each(|&j| coef[j] /= norm);
            block_of_orbit[o] = members.len();
            members.push(support);
        }
        let m = members.len();
        if m == 0 {
            continue;
        }
        if m > DENSE_LIMIT {
            return None;
        }
        let mut block = DMatrix::<f64>::zeros(m, m);
        for (a, support) in members.iter().enumerate() {
            for &i in support {
                for (j, x) in h.row(i) {
                    let b = block_of_orbit[orbit_of[j]];
                    if b != usize::MAX {
                        block[(a, b)] += coef[i] * x * coef[j];
                    }
                }
            }
        }
        let block = (&block + block.transpose()) * 0.5;
        let eig = SymmetricEigen::new(block);
        let flux: Vec<u8> = (0..k).map(|p| (xi >> p & 1) as u8).collect();
        for n in 0..m {
            let mut vector = vec![0.0; dim];
            for (a, support) in members.iter().enumerate() {
                let y = eig.eigenvectors[(a, n)];
                for &i in support {
                    vector[i] = coef[i] * y;
                }
            }
            out.push(FluxLevel {
                energy: eig.eigenvalues[n],
                flux: flux.clone(),
                vector,
            });
        }
    }
    out.sort_by(|a, b| a.energy.total_cmp(&b.energy).then_with(|| a.flux.cmp(&b.flux)));
    out.truncate(levels);
    Some(out)
}

/// Lowest `levels` eigenstates rotated into joint eigenstates of the plaquette
/// operators `U_p`, each labelled by its flux pattern.
pub fn flux_sector_labels(spec: &HamiltonianSpec, operators: &[Permutation], levels: usize) -> Result<Vec<FluxLevel>> {
    for (a, p) in operators.iter().enumerate() {
        for q in &operators[a + 1..] {
            if p.then(q) != q.then(p) {
                return Err(Error::NotInvariant("plaquette operators do not commute".into()));
            }
        }
    }
    let h = build_hamiltonian(spec)?;
    for p in operators {
        if !h.commutes_with(p) {
            return Err(Error::NotInvariant("plaquette operator does not commute with H".into()));
        }
    }
    let images: Vec<Vec<usize>> = operators
        .iter()
        .map(|p| h.basis.iter().map(|c| h.index_of(&act(p, c).expect("checked")).expect("closed")).collect())
        .collect();
    match sector_diagonalization(&h, &images, levels) {
        Some(out) => Ok(out),
        None => flux_labels_by_splitting(spec, &h, &images, levels),
    }
}

/// Flux labels by rotating each degenerate block of the full spectrum into
/// the joint eigenbasis of the operators, one operator at a time.
fn flux_labels_by_splitting(
    spec: &HamiltonianSpec,
    h: &SparseHamiltonian,
    images: &[Vec<usize>],
    levels: usize,
) -> Result<Vec<FluxLevel>> {
    // widen the window until the block holding the last requested level is complete
    let levels = levels.min(h.dim());
    let mut k = (levels + 8).min(h.dim());
    let eig = loop {
        let eig = lowest_eigenpairs(h, k)?;
        let mut end = levels.max(1);
        while end < k && eig.values[end] - eig.values[end - 1] <= DEGENERACY_TOLERANCE * spec.delta {
            end += 1;
        }
        if end < k || k == h.dim() {
            break eig;
        }
        k = (2 * k).min(h.dim());
    };
    let mut out = Vec::new();
    let mut start = 0;
    while start < levels {
        let mut end = start + 1;
        while end < eig.values.len() && eig.values[end] - eig.values[end - 1] <= DEGENERACY_TOLERANCE * spec.delta {
            end += 1;
        }
        // split the degenerate block one operator at a time
        let mut blocks: Vec<(Vec<u8>, Vec<Vec<f64>>)> = vec![(Vec::new(), eig.vectors[start..end].to_vec())];
        for image in images {
            let mut next = Vec::new();
            for (flux, vectors) in blocks {
                let d = vectors.len();
                let uv: Vec<Vec<f64>> = vectors.iter().map(|v| apply_permutation(h, image, v)).collect();
                let m = DMatrix::from_fn(d, d, |a, b| dot(&vectors[a], &uv[b]));
                let m = (&m + m.transpose()) * 0.5;
                let e = SymmetricEigen::new(m);
                let mut plus = Vec::new();
                let mut minus = Vec::new();
                for k in 0..d {
                    let mut v = vec![0.0; h.dim()];
                    for (a, basis_vector) in vectors.iter().enumerate() {
                        axpy(e.eigenvectors[(a, k)], basis_vector, &mut v);
                    }
                    normalize(&mut v);
                    if (e.eigenvalues[k] - 1.0).abs() < 1e-6 {
                        plus.push(v);
                    } else if (e.eigenvalues[k] + 1.0).abs() < 1e-6 {
                        minus.push(v);
                    } else {
                        return Err(Error::NotInvariant(format!(
                            "U_p eigenvalue {} is not ±1 within a degenerate block",
                            e.eigenvalues[k]
                        )));
                    }
                }
                for (bit, vs) in [(0u8, plus), (1u8, minus)] {
                    if !vs.is_empty() {
                        let mut f = flux.clone();
                        f.push(bit);
                        next.push((f, vs));
                    }
                }
            }
            blocks = next;
        }
        for (flux, vectors) in blocks {
            for vector in vectors {
                let mut hv = vec![0.0; h.dim()];
                h.matvec(&vector, &mut hv);
                out.push(FluxLevel {
                    energy: dot(&vector, &hv),
                    flux: flux.clone(),
                    vector,
                });
            }
        }
        start = end;
    }
    Ok(out)
}

/// Effective Hamiltonian on a degenerate classical ground manifold.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EffectiveHamiltonian {
    pub order: usize,
    pub omega: f64,
    pub basis: Language,
    /// Coefficient matrices `H_n` with `H_eff = Σ_n Ωⁿ H_n` (row-major).
    pub orders: Vec<Vec<Vec<f64>>>,
    /// `H_eff` with the constant diagonal shift removed.
    pub matrix: Vec<Vec<f64>>,
    pub shift: f64,
}

impl EffectiveHamiltonian {
    /// Eigenvalues of `H_eff` including the removed shift.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let d = self.matrix.len();
        let m = DMatrix::from_fn(d, d, |a, b| self.matrix[a][b]);
        let mut values: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().map(|e| e + self.shift).collect();
        values.sort_by(f64::total_cmp);
        values
    }
}

/// Schrieffer–Wolff block diagonalization of `H₀ + ΩV` with respect to the
/// classical ground manifold spanned by `logical`, up to `order` in Ω.
pub fn effective_hamiltonian(spec: &HamiltonianSpec, logical: &Language, order: usize) -> Result<EffectiveHamiltonian> {
    effective_hamiltonian_with_limit(spec, logical, order, MAX_EFFECTIVE_ORDER)
}

pub fn effective_hamiltonian_with_limit(
    spec: &HamiltonianSpec,
    logical: &Language,
    order: usize,
    max_order: usize,
) -> Result<EffectiveHamiltonian> {
    if order > max_order {
        return Err(Error::LimitExceeded {
            what: "perturbative order",
            size: order as u128,
            limit: max_order as u128,
        });
    }
    if spec.graph.n() > MAX_EFFECTIVE_ATOMS {
        return Err(Error::LimitExceeded {
            what: "atom count for perturbation theory",
            size: spec.graph.n() as u128,
            limit: MAX_EFFECTIVE_ATOMS as u128,
        });
    }
    if spec.plaquettes.is_some() {
        return Err(Error::Argument("perturbation theory takes Ω as the only perturbation".into()));
    }
    if logical.is_empty() {
        return Err(Error::Argument("empty logical manifold".into()));
    }
    let unperturbed = build_hamiltonian(&HamiltonianSpec { omega: 0.0, ..spec.clone() })?;
    let hopping = build_hamiltonian(&HamiltonianSpec {
        omega: 1.0,
        delta: spec.delta,
        ..spec.clone()
    })?;
    let dim = unperturbed.dim();
    let energies: Vec<f64> = (0..dim).map(|i| unperturbed.entry(i, i)).collect();
    let mut v = hopping.to_dense();
    for i in 0..dim {
        v[(i, i)] -= energies[i];
    }
    let p_index: Vec<usize> = logical
        .iter()
        .map(|c| {
            unperturbed
                .index_of(c)
                .ok_or_else(|| Error::Argument(format!("logical configuration {c} is not a basis state")))
        })
        .collect::<Result<_>>()?;
    let e_p = energies[p_index[0]];
    if let Some(&bad) = p_index.iter().find(|&&i| (energies[i] - e_p).abs() > DEGENERACY_TOLERANCE * spec.delta) {
        return Err(Error::Argument(format!(
            "logical manifold is not degenerate: energies {e_p} and {}",
            energies[bad]
        )));
    }
    let mut in_p = vec![false; dim];
    for &i in &p_index {
        in_p[i] = true;
    }
    for b in (0..dim).filter(|&b| !in_p[b]) {
        if (energies[b] - e_p).abs() <= DEGENERACY_TOLERANCE * spec.delta {
            return Err(Error::Resonance {
                first: e_p,
                second: energies[b],
            });
        }
    }

    let h0 = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(energies.clone()));
    let zero = DMatrix::<f64>::zeros(dim, dim);
    // f[k][m]: order-m part of ad_S^k(H)
    let mut f: Vec<Vec<DMatrix<f64>>> = vec![vec![zero.clone(); order + 1]; order + 1];
    f[0][0] = h0.clone();
    if order >= 1 {
        f[0][1] = v.clone();
    }
    let mut s: Vec<DMatrix<f64>> = vec![zero.clone(); order + 1];
    let mut h_eff: Vec<DMatrix<f64>> = vec![zero.clone(); order + 1];
    h_eff[0] = h0.clone();
    let commutator = |a: &DMatrix<f64>, b: &DMatrix<f64>| a * b - b * a;
    let mut factorial = vec![1.0; order + 2];
    for k in 1..order + 2 {
        factorial[k] = factorial[k - 1] * k as f64;
    }
    for m in 1..=order {
        for k in 1..=m {
            let mut acc = zero.clone();
            for j in 1..m {
                if m - j >= k - 1 {
                    acc += commutator(&s[j], &f[k - 1][m - j]);
                }
            }
            f[k][m] = acc;
        }
        let mut r = f[0][m].clone();
        for k in 1..=m {
            r += &f[k][m] / factorial[k];
        }
        let mut s_m = zero.clone();
        for a in 0..dim {
            for b in 0..dim {
                if in_p[a] != in_p[b] && r[(a, b)] != 0.0 {
                    s_m[(a, b)] = r[(a, b)] / (energies[a] - energies[b]);
                }
            }
        }
        let fix = commutator(&s_m, &h0);
        f[1][m] += &fix;
        r += &fix;
        s[m] = s_m;
        h_eff[m] = r;
    }
    let d = p_index.len();
    let orders: Vec<Vec<Vec<f64>>> = h_eff
        .iter()
        .map(|hm| p_index.iter().map(|&a| p_index.iter().map(|&b| hm[(a, b)]).collect()).collect())
        .collect();
    let mut matrix = vec![vec![0.0; d]; d];
    for (m, om) in orders.iter().enumerate() {
        let scale = spec.omega.powi(m as i32);
        for a in 0..d {
            for b in 0..d {
                matrix[a][b] += scale * om[a][b];
            }
        }
    }
    let shift = (0..d).map(|a| matrix[a][a]).sum::<f64>() / d as f64;
    for (a, row) in matrix.iter_mut().enumerate() {
        row[a] -= shift;
    }
    Ok(EffectiveHamiltonian {
        order,
        omega: spec.omega,
        basis: logical.clone(),
        orders,
        matrix,
        shift,
    })
}
