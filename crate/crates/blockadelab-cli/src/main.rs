//! `blockadelab` command-line front end. Reports go to standard output as
//! JSON (or CSV for spectra); a one-line human summary goes to standard error.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use blockadelab::catalog::{catalog_entry, CATALOG_NAMES};
use blockadelab::combinatorics::{mwis_with_limit, quotient_by_cliques, CliqueRule, DEFAULT_MWIS_LIMIT};
use blockadelab::model::{
    blockade_graph_from_structure, distance_margins, graph_from_any_json, graph_to_json, graph_with_ports_to_json,
    restrict_language_to_ports, structure_to_json, BlockadeGraph, Language, PortMap,
};
use blockadelab::spectra::{
    build_hamiltonian, effective_hamiltonian, flux_sector_labels, ground_state_analysis, group_levels,
    lowest_eigenpairs, HamiltonianSpec, DEFAULT_MAX_BASIS, DEGENERACY_TOLERANCE,
};
use blockadelab::symmetry::{automorphism_group, is_fully_symmetric, orbit_decomposition, Permutation};
use blockadelab::tessellation::{
    build_literature_model, build_loop_structure, build_singleport_xor_tessellation, loop_generators, Boundary,
    LiteratureModel,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

const MAX_BASIS_ENV: &str = "BLOCKADELAB_MAX_BASIS";

#[derive(Debug, Error)]
enum CliError {
    #[error(transparent)]
    Lib(#[from] blockadelab::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Lib(e) if e.is_resource_refusal() => 2,
            _ => 1,
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(name = "blockadelab", version, about = "Blockade graphs, ground-state languages, symmetries and spectra")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Tessellation {
    /// Tessellated fully-symmetric loop structure.
    Loop,
    /// Single-port XOR tessellation.
    Singleport,
    Verresen,
    Zeng,
    Stastny,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a catalog gadget as JSON.
    Catalog {
        /// One of: not, nor, or, icrs, fsu, fsu-mirror, fsu-extended.
        name: String,
        /// Emit the abstract graph even when coordinates are known.
        #[arg(long)]
        graph: bool,
    },
    /// Maximum-weight independent sets (the ground-state language).
    Mwis {
        /// Structure or graph JSON; `-` reads standard input.
        input: String,
        /// Print newline-separated bit strings instead of JSON.
        #[arg(long)]
        text: bool,
        /// Refuse graphs with more vertices than this.
        #[arg(long, default_value_t = DEFAULT_MWIS_LIMIT)]
        max_vertices: usize,
    },
    /// Automorphism group: generators, order and vertex orbits.
    Aut { input: String },
    /// Orbits of a language under the automorphism group.
    Orbits {
        input: String,
        /// Language file (bit strings, JSON list, or `mwis` output); defaults to the MWIS language.
        #[arg(long)]
        language: Option<String>,
    },
    /// Whether the ground-state language is a single automorphism orbit.
    Fullsym { input: String },
    /// Generate a tessellated or literature blockade graph.
    Tessellate {
        #[arg(value_enum)]
        model: Tessellation,
        #[arg(long, default_value_t = 2)]
        nx: usize,
        #[arg(long, default_value_t = 2)]
        ny: usize,
        /// periodic or open-rough (loop and singleport only).
        #[arg(long, default_value = "periodic")]
        boundary: String,
        /// Write the loop generators (plaquettes, and homology loops on a torus) to this file.
        #[arg(long)]
        plaquettes_out: Option<PathBuf>,
    },
    /// Low-lying spectrum as CSV; optional JSON ground-state report.
    Spectrum {
        input: String,
        /// Rabi frequency.
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        /// Number of lowest eigenvalues to report.
        #[arg(long, default_value_t = 8)]
        levels: usize,
        /// Detuning scale; vertex weights multiply it.
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Finite blockade strength (default: hard constraint).
        #[arg(long)]
        u0: Option<f64>,
        /// JSON list of plaquette permutations (image arrays).
        #[arg(long)]
        plaquettes: Option<String>,
        /// Coefficient of the plaquette term.
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        plaq_omega: f64,
        /// Write the ground-state amplitude report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Perturbative effective Hamiltonian on the classical ground manifold.
    Effective {
        input: String,
        #[arg(long, allow_hyphen_values = true)]
        omega: f64,
        /// Perturbative order in Ω (at most 6).
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// Logical manifold (defaults to the MWIS language).
        #[arg(long)]
        logical: Option<String>,
    },
    /// Check a geometric structure against its blockade radius (and optionally a target graph).
    EmbedCheck {
        input: String,
        /// Graph JSON the embedding must reproduce.
        #[arg(long)]
        graph: Option<String>,
        /// Minimum accepted distance margin.
        #[arg(long, default_value_t = 1e-3)]
        min_margin: f64,
    },
    /// Contract clique components (connected-neighbourhood rule, or explicit classes).
    Quotient {
        input: String,
        /// JSON list of vertex classes to contract.
        #[arg(long)]
        classes: Option<String>,
    },
}

fn read_source(path: &str) -> CliResult<String> {
    let io_err = |source| CliError::Io {
        path: path.to_string(),
        source,
    };
    if path == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text).map_err(io_err)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(io_err)
    }
}

fn check_output_path(path: &Path) -> CliResult<()> {
    let parent = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    if parent.is_dir() {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{}: directory does not exist", path.display())))
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_graph(path: &str) -> CliResult<(BlockadeGraph, PortMap)> {
    let (g, ports, _) = graph_from_any_json(&read_source(path)?)?;
    Ok((g, ports))
}

/// Accepts newline-separated bit strings, a JSON list, or an object with a `language` field.
fn parse_language(text: &str) -> CliResult<Language> {
    let trimmed = text.trim_start();
    if trimmed.starts_with('[') {
        Ok(serde_json::from_str(trimmed).map_err(blockadelab::Error::from)?)
    } else if trimmed.starts_with('{') {
        let value: Value = serde_json::from_str(trimmed).map_err(blockadelab::Error::from)?;
        let field = value
            .get("language")
            .ok_or_else(|| CliError::Usage("language document has no \"language\" field".into()))?;
        Ok(serde_json::from_value(field.clone()).map_err(blockadelab::Error::from)?)
    } else {
        Ok(Language::parse_bit_strings(text)?)
    }
}

fn parse_permutations(text: &str) -> CliResult<Vec<Permutation>> {
    let images: Vec<Vec<usize>> = serde_json::from_str(text).map_err(blockadelab::Error::from)?;
    Ok(images.into_iter().map(Permutation::new).collect::<blockadelab::Result<_>>()?)
}

fn max_basis() -> CliResult<usize> {
    match std::env::var(MAX_BASIS_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_BASIS_ENV}={v:?} is not a positive integer"))),
        Err(_) => Ok(DEFAULT_MAX_BASIS),
    }
}

fn pretty(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("JSON values always serialize")
}

fn language_strings(l: &Language) -> Vec<String> {
    l.iter().map(|c| c.to_string()).collect()
}

fn run(command: Command) -> CliResult<String> {
    match command {
        Command::Catalog { name, graph } => {
            let g = catalog_entry(&name).map_err(|_| {
                CliError::Usage(format!("unknown catalog entry {name:?} (expected one of {})", CATALOG_NAMES.join(", ")))
            })?;
            eprintln!(
                "{}: {} atoms, ports {:?}, port language {}",
                g.name,
                g.graph.n(),
                g.ports.ports(),
                language_strings(&g.expected_language).join(" ")
            );
            Ok(match (&g.structure, graph) {
                (Some(s), false) => structure_to_json(s, &g.ports),
                _ => graph_with_ports_to_json(&g.graph, &g.ports),
            })
        }
        Command::Mwis {
            input,
            text,
            max_vertices,
        } => {
            let (g, ports) = load_graph(&input)?;
            let r = mwis_with_limit(&g, max_vertices)?;
            eprintln!("max weight {}, {} ground configurations", r.max_weight, r.language.len());
            if text {
                return Ok(r.language.to_text().trim_end().to_string());
            }
            let mut doc = json!({
                "max_weight": r.max_weight,
                "language": language_strings(&r.language),
                "independent_count": r.independent_count.map(|c| c.to_string()),
            });
            if !ports.is_empty() {
                doc["ports"] = json!(ports.ports());
                doc["port_language"] = json!(language_strings(&restrict_language_to_ports(&r.language, &ports)));
            }
            Ok(pretty(&doc))
        }
        Command::Aut { input } => {
            let (g, _) = load_graph(&input)?;
            let a = automorphism_group(&g)?;
            eprintln!("|Aut| = {} ({} generators)", a.order, a.generators.len());
            Ok(pretty(&json!({
                "n": a.n,
                "order": a.order.to_string(),
                "generators": a.generators,
                "vertex_orbits": a.vertex_orbits(),
            })))
        }
        Command::Orbits { input, language } => {
            let (g, ports) = load_graph(&input)?;
            let l = match language {
                Some(path) => parse_language(&read_source(&path)?)?,
                None => mwis_with_limit(&g, DEFAULT_MWIS_LIMIT)?.language,
            };
            let a = automorphism_group(&g)?;
            let orbits = orbit_decomposition(&a, &l)?;
            eprintln!("{} configurations in {} orbits", l.len(), orbits.len());
            let mut doc = json!({
                "group_order": a.order.to_string(),
                "orbits": orbits.orbits.iter().map(language_strings).collect::<Vec<_>>(),
            });
            if !ports.is_empty() {
                doc["port_orbits"] = json!(orbits
                    .restricted_to_ports(&ports)
                    .iter()
                    .map(language_strings)
                    .collect::<Vec<_>>());
            }
            Ok(pretty(&doc))
        }
        Command::Fullsym { input } => {
            let (g, ports) = load_graph(&input)?;
            let r = is_fully_symmetric(&g, (!ports.is_empty()).then_some(&ports))?;
            eprintln!(
                "fully symmetric: {} ({} orbits, |Aut| = {})",
                r.fully_symmetric,
                r.orbits.len(),
                r.group.order
            );
            Ok(pretty(&json!({
                "fully_symmetric": r.fully_symmetric,
                "orbit_count": r.orbits.len(),
                "group_order": r.group.order.to_string(),
                "language": language_strings(&r.language),
                "orbits": r.orbits.orbits.iter().map(language_strings).collect::<Vec<_>>(),
                "port_orbits": r.port_orbits.map(|o| o.iter().map(language_strings).collect::<Vec<_>>()),
            })))
        }
        Command::Tessellate {
            model,
            nx,
            ny,
            boundary,
            plaquettes_out,
        } => {
            if let Some(path) = &plaquettes_out {
                check_output_path(path)?;
            }
            let boundary: Boundary = boundary.parse()?;
            match model {
                Tessellation::Loop => {
                    let s = build_loop_structure(nx, ny, boundary)?;
                    let generators = loop_generators(&s)?;
                    eprintln!(
                        "loop structure {nx}x{ny} {boundary}: {} atoms, {} generators",
                        s.graph.n(),
                        generators.len()
                    );
                    if let Some(path) = plaquettes_out {
                        let perms: Vec<&Permutation> = generators.iter().map(|g| &g.permutation).collect();
                        write_file(&path, &pretty(&json!(perms)))?;
                    }
                    let ports = PortMap::new(s.lattice.light.clone(), s.graph.n())?;
                    Ok(graph_with_ports_to_json(&s.graph, &ports))
                }
                Tessellation::Singleport => {
                    let t = build_singleport_xor_tessellation(nx, ny, boundary)?;
                    eprintln!("single-port XOR {nx}x{ny} {boundary}: {} atoms", t.graph.n());
                    Ok(graph_with_ports_to_json(&t.graph, &t.port_map()))
                }
                literature => {
                    let m = match literature {
                        Tessellation::Verresen => LiteratureModel::Verresen,
                        Tessellation::Zeng => LiteratureModel::Zeng,
                        _ => LiteratureModel::Stastny,
                    };
                    let g = build_literature_model(m, nx, ny)?;
                    eprintln!("{m:?} {nx}x{ny} periodic: {} atoms", g.n());
                    Ok(graph_to_json(&g))
                }
            }
        }
        Command::Spectrum {
            input,
            omega,
            levels,
            delta,
            u0,
            plaquettes,
            plaq_omega,
            report,
        } => {
            let (g, _) = load_graph(&input)?;
            let perms = plaquettes.map(|p| read_source(&p).and_then(|t| parse_permutations(&t))).transpose()?;
            if let Some(path) = &report {
                check_output_path(path)?;
            }
            let mut spec = HamiltonianSpec::new(g.clone(), omega)
                .with_delta(delta)
                .with_max_basis(max_basis()?);
            if let Some(u) = u0 {
                spec = spec.with_blockade(u);
            }
            if let Some(p) = &perms {
                spec = spec.with_plaquettes(plaq_omega, p.clone());
            }
            let (energies, fluxes): (Vec<f64>, Vec<Vec<u8>>) = match &perms {
                Some(p) => flux_sector_labels(&spec, p, levels)?
                    .into_iter()
                    .map(|l| (l.energy, l.flux))
                    .unzip(),
                None => {
                    let h = build_hamiltonian(&spec)?;
                    (lowest_eigenpairs(&h, levels)?.values, Vec::new())
                }
            };
            let mut degeneracy = Vec::with_capacity(energies.len());
            for (_, d) in group_levels(&energies, DEGENERACY_TOLERANCE * delta) {
                degeneracy.extend(std::iter::repeat_n(d, d));
            }
            let width = perms.as_ref().map_or(0, |p| p.len());
            let mut csv = String::from("level,energy,degeneracy");
            for p in 0..width {
                csv.push_str(&format!(",flux_{p}"));
            }
            for (k, e) in energies.iter().enumerate() {
                csv.push_str(&format!("\n{k},{e:.16e},{}", degeneracy[k]));
                if let Some(f) = fluxes.get(k) {
                    for bit in f {
                        csv.push_str(&format!(",{bit}"));
                    }
                }
            }
            let logical = mwis_with_limit(&g, DEFAULT_MWIS_LIMIT)?.language;
            let r = ground_state_analysis(&spec, &logical, levels.max(2))?;
            eprintln!(
                "E0 = {:.12}, gap {:.3e}, unique {}, Λ² = {:.6}, equal weight {}",
                energies.first().copied().unwrap_or(f64::NAN),
                r.gap.unwrap_or(f64::NAN),
                r.unique,
                r.logical_weight,
                r.equal_weight
            );
            if let Some(path) = report {
                let mut doc = serde_json::to_value(&r).map_err(blockadelab::Error::from)?;
                if !fluxes.is_empty() {
                    doc["flux_labels"] = json!(fluxes);
                }
                write_file(&path, &pretty(&doc))?;
            }
            Ok(csv)
        }
        Command::Effective {
            input,
            omega,
            order,
            logical,
        } => {
            let (g, _) = load_graph(&input)?;
            let logical = match logical {
                Some(path) => parse_language(&read_source(&path)?)?,
                None => mwis_with_limit(&g, DEFAULT_MWIS_LIMIT)?.language,
            };
            let spec = HamiltonianSpec::new(g, omega).with_max_basis(max_basis()?);
            let eff = effective_hamiltonian(&spec, &logical, order)?;
            let values = eff.eigenvalues();
            eprintln!(
                "order {order} on {} states: shift {:.12}, splitting {:.3e}",
                logical.len(),
                eff.shift,
                values.last().unwrap_or(&0.0) - values.first().unwrap_or(&0.0)
            );
            let mut doc = serde_json::to_value(&eff).map_err(blockadelab::Error::from)?;
            doc["eigenvalues"] = json!(values);
            Ok(pretty(&doc))
        }
        Command::EmbedCheck {
            input,
            graph,
            min_margin,
        } => {
            let (_, _, structure) = graph_from_any_json(&read_source(&input)?)?;
            let s = structure.ok_or_else(|| CliError::Usage("embed-check needs a structure with coordinates".into()))?;
            let target = graph.map(|p| load_graph(&p)).transpose()?;
            let realized = blockade_graph_from_structure(&s);
            let margins = distance_margins(&s);
            let matches = target.as_ref().map(|(t, _)| *t == realized);
            let ok = margins.margin > min_margin && matches.unwrap_or(true);
            let target_note = match matches {
                Some(true) => ", matches target",
                Some(false) => ", differs from target",
                None => "",
            };
            eprintln!("margin {:.6}{target_note}: {}", margins.margin, if ok { "ok" } else { "FAILED" });
            Ok(pretty(&json!({
                "ok": ok,
                "margins": margins,
                "matches_target": matches,
                "graph": realized,
            })))
        }
        Command::Quotient { input, classes } => {
            let (g, _) = load_graph(&input)?;
            let rule = match classes {
                Some(path) => CliqueRule::Explicit(
                    serde_json::from_str(&read_source(&path)?).map_err(blockadelab::Error::from)?,
                ),
                None => CliqueRule::ConnectedNeighborhood,
            };
            let q = quotient_by_cliques(&g, &rule)?;
            let reduced = q.to_graph(&g);
            eprintln!("{} vertices contracted to {}", g.n(), reduced.n());
            Ok(pretty(&json!({
                "classes": q.classes,
                "class_of": q.class_of,
                "graph": reduced,
            })))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(cli.command) {
        Ok(out) => match writeln!(io::stdout().lock(), "{out}") {
            Ok(()) => ExitCode::SUCCESS,
            // a closed downstream pipe is not an error
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
