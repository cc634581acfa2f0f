//! `holonomy`: batch front end. Each command prints one JSON document on
//! stdout and a one-line summary on stderr.
//!
//! Exit codes: 0 success, 2 invalid input, 3 size limit.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use holonomy::bubble::{bubble_move, find_embeddings, Embedding};
use holonomy::coloring::{chi, is_phi_complex, vertex_collapsible, Collapsibility};
use holonomy::generate::Complex;
use holonomy::groupoid::{bfs_tree, compose_path, holonomy_group_in, tree_path, FacetComplex, RidgeGraph};
use holonomy::hom::{transport_on, HomComplex};
use holonomy::homology::{hom_betti, induced_homology_map, BettiProfile};
use holonomy::invariants::{curvature_cc, embed_obstruction, invariant_i, signed_matrix, Curvature};
use holonomy::io::{normalize_map, parse_complex, parse_map, parse_vertex_list, resolve_label, ComplexFile};
use holonomy::{CubicalComplex, Error, Projectivity, SimplicialComplex, VertexId, VertexMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

#[derive(Parser, Debug)]
#[command(name = "holonomy", version, about = "Holonomy groups, cubical invariants and Hom complexes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Base facet as a comma-separated vertex list.
    #[arg(long, global = true)]
    base: Option<String>,
    /// Work with the k-dimensional faces (the k-skeleton).
    #[arg(long, global = true)]
    k: Option<usize>,
    /// Compute reduced integral homology.
    #[arg(long, global = true)]
    homology: bool,
    /// List every cell.
    #[arg(long, global = true)]
    cells: bool,
    /// Seed for the randomized self-check.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write the JSON document to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Holonomy group of the facet groupoid at a base facet.
    Holonomy { complex: PathBuf },
    /// Parity invariant I, odd-chain length Z and curvature CC of a cubical complex.
    Invariant { complex: PathBuf },
    /// Curvature obstruction to embedding K into L.
    EmbedCheck {
        #[arg(value_name = "K")]
        source: PathBuf,
        #[arg(value_name = "L")]
        target: PathBuf,
    },
    /// The complex Hom(K, L).
    Hom {
        #[arg(value_name = "K")]
        source: PathBuf,
        #[arg(value_name = "L")]
        target: PathBuf,
    },
    /// Parallel transport of Hom(σ, L) along a facet path of K.
    Transport {
        #[arg(value_name = "K")]
        source: PathBuf,
        #[arg(value_name = "L")]
        target: PathBuf,
        /// Facets separated by ';', each a comma-separated vertex list.
        #[arg(long)]
        path: String,
    },
    /// Chromatic number with witnesses.
    Chi { complex: PathBuf },
    /// Whether an involution and invariant simplex make a Φ-complex.
    PhiCheck {
        complex: PathBuf,
        #[arg(long)]
        involution: PathBuf,
        #[arg(long)]
        sigma: String,
    },
    /// Whether a pure complex is tree-like (vertex collapsible).
    CollapseCheck { complex: PathBuf },
    /// Replace a ball of top cubes by its complement in the boundary of a cube.
    Bubble {
        complex: PathBuf,
        /// Cubes of the ball, separated by ';'.
        #[arg(long = "move")]
        cubes: String,
        /// Vertex map `{"vertex_map":{"v": corner}}` into the big cube; searched for when absent.
        #[arg(long)]
        embedding: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((doc, summary)) => {
            let text = serde_json::to_string(&doc).expect("reports serialize");
            if let Some(out) = &cli.opts.out {
                if let Err(e) = std::fs::write(out, format!("{text}\n")) {
                    eprintln!("error: cannot write {}: {e}", out.display());
                    return ExitCode::from(2);
                }
            }
            println!("{text}");
            eprintln!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = match e.downcast_ref::<Error>() {
                Some(Error::SizeLimit(_)) => 3,
                _ => 2,
            };
            eprintln!("error: {e:#}");
            ExitCode::from(code)
        }
    }
}

type Report = (Value, String);

fn run(cli: &Cli) -> anyhow::Result<Report> {
    validate(cli)?;
    let o = &cli.opts;
    match &cli.command {
        Command::Holonomy { complex } => holonomy_cmd(&load(complex)?, o),
        Command::Invariant { complex } => {
            let k = cubical(load(complex)?, complex)?;
            let c = curvature_cc(&k)?;
            let summary = format!("I = {}, CC = {}", c.i, c.cc());
            Ok((curvature_json(&k, &c), summary))
        }
        Command::EmbedCheck { source: k, target: l } => {
            let (kc, lc) = (cubical(load(k)?, k)?, cubical(load(l)?, l)?);
            let r = embed_obstruction(&kc, &lc)?;
            let verdict = serde_json::to_value(&r.verdict)?;
            let summary = format!("{}: Z(K) = {}, Z(L) = {}", verdict.as_str().unwrap_or(""), r.source.z_length(), r.target.z_length());
            Ok((json!({"verdict": verdict, "source": curvature_json(&kc, &r.source), "target": curvature_json(&lc, &r.target)}), summary))
        }
        Command::Hom { source: k, target: l } => hom_cmd(&simplicial(load(k)?, k)?, &simplicial(load(l)?, l)?, o),
        Command::Transport { source: k, target: l, path } => transport_cmd(&simplicial(load(k)?, k)?, &simplicial(load(l)?, l)?, path, o),
        Command::Chi { complex } => {
            let k = simplicial(load(complex)?, complex)?;
            let c = chi(&k);
            let witness: Map<String, Value> =
                c.witness.iter().enumerate().map(|(v, &col)| (k.vertices()[v].to_string(), json!(col + 1))).collect();
            let summary = format!("chi = {} (clique number {})", c.value, c.clique.len());
            Ok((json!({"chi": c.value, "witness": witness, "clique": k.labels(&c.clique), "tight": c.tight}), summary))
        }
        Command::PhiCheck { complex, involution, sigma } => {
            let k = simplicial(load(complex)?, complex)?;
            let pairs = parse_map(&read(involution)?)?;
            let omega = VertexMap::from_labels(k.vertices(), k.vertices(), &normalize_map(&pairs, k.vertices(), k.vertices())?)?;
            let s = vertices_of(k.vertices(), &parse_vertex_list(sigma))?;
            let v = is_phi_complex(&k, &omega, &s)?;
            let tau: Map<String, Value> =
                v.tau.iter().enumerate().map(|(i, &j)| (k.vertices()[v.sigma[i]].to_string(), json!(k.vertices()[v.sigma[j]]))).collect();
            let evidence = v.evidence.as_ref().map(|p| p.iter().map(|&f| json!(k.facet_labels(f))).collect::<Vec<_>>());
            let summary =
                if v.is_phi { "Φ-complex".to_string() } else { format!("not a Φ-complex: {}", v.reason.clone().unwrap_or_default()) };
            Ok((json!({"is_phi": v.is_phi, "sigma": k.labels(&v.sigma), "tau": tau, "reason": v.reason, "evidence": evidence}), summary))
        }
        Command::CollapseCheck { complex } => {
            let k = simplicial(load(complex)?, complex)?;
            Ok(match vertex_collapsible(&k)? {
                Collapsibility::Collapsible { steps, remaining } => {
                    let steps: Vec<Value> = steps
                        .iter()
                        .map(|s| json!({"facet": k.facet_labels(s.facet), "ridge": k.labels(&s.ridge), "apex": k.vertices()[s.apex]}))
                        .collect();
                    let n = steps.len();
                    (
                        json!({"tree_like": true, "status": "collapsible", "steps": steps, "remaining": k.facet_labels(remaining)}),
                        format!("tree-like: {n} vertex collapses"),
                    )
                }
                Collapsibility::NotCollapsible => (json!({"tree_like": false, "status": "not_collapsible"}), "not tree-like".into()),
                Collapsibility::Unknown => (json!({"tree_like": null, "status": "unknown"}), "search budget exhausted".into()),
            })
        }
        Command::Bubble { complex, cubes, embedding } => bubble_cmd(&cubical(load(complex)?, complex)?, cubes, embedding.as_deref()),
    }
}

/// Flags each command accepts besides `--out`.
fn validate(cli: &Cli) -> anyhow::Result<()> {
    let o = &cli.opts;
    let (name, allowed): (&str, &[&str]) = match cli.command {
        Command::Holonomy { .. } => ("holonomy", &["base", "k", "seed"]),
        Command::Invariant { .. } => ("invariant", &[]),
        Command::EmbedCheck { .. } => ("embed-check", &[]),
        Command::Hom { .. } => ("hom", &["homology", "cells"]),
        Command::Transport { .. } => ("transport", &["k", "homology"]),
        Command::Chi { .. } => ("chi", &[]),
        Command::PhiCheck { .. } => ("phi-check", &[]),
        Command::CollapseCheck { .. } => ("collapse-check", &[]),
        Command::Bubble { .. } => ("bubble", &[]),
    };
    let given =
        [("base", o.base.is_some()), ("k", o.k.is_some()), ("homology", o.homology), ("cells", o.cells), ("seed", o.seed.is_some())];
    for (flag, on) in given {
        if on && !allowed.contains(&flag) {
            return Err(Error::Invalid(format!("--{flag} does not apply to {name}")).into());
        }
    }
    Ok(())
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> anyhow::Result<Complex> {
    parse_complex(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn simplicial(c: Complex, path: &Path) -> anyhow::Result<SimplicialComplex> {
    match c {
        Complex::Simplicial(k) => Ok(k),
        Complex::Cubical(_) => Err(Error::Invalid(format!("{} must be a simplicial complex", path.display())).into()),
    }
}

fn cubical(c: Complex, path: &Path) -> anyhow::Result<CubicalComplex> {
    match c {
        Complex::Cubical(k) => Ok(k),
        Complex::Simplicial(_) => Err(Error::Invalid(format!("{} must be a cubical complex", path.display())).into()),
    }
}

fn vertices_of(vertices: &[VertexId], labels: &[VertexId]) -> anyhow::Result<Vec<usize>> {
    labels.iter().map(|l| resolve_label(vertices, l).ok_or_else(|| Error::Invalid(format!("unknown vertex {l}")).into())).collect()
}

fn pairs_json<C: FacetComplex + ?Sized>(k: &C, p: &Projectivity) -> Map<String, Value> {
    let l = k.vertex_labels();
    p.vertex_pairs(k).into_iter().map(|(a, b)| (l[a].to_string(), json!(l[b]))).collect()
}

fn base_facet<C: FacetComplex + ?Sized>(k: &C, base: Option<&str>) -> anyhow::Result<usize> {
    if k.num_facets() == 0 {
        bail!(Error::Invalid("complex has no facets".into()));
    }
    Ok(match base {
        Some(b) => k.facet_by_labels(&parse_vertex_list(b))?,
        None => 0,
    })
}

fn holonomy_report<C: FacetComplex + ?Sized>(k: &C, o: &Opts) -> anyhow::Result<Report> {
    let base = base_facet(k, o.base.as_deref())?;
    let g = RidgeGraph::build(k)?;
    let group = holonomy_group_in(k, &g, base)?;
    let iso = group.iso_class();
    let generators: Vec<Value> = group
        .generators
        .iter()
        .map(|perm| json!(pairs_json(k, &Projectivity { source: base, target: base, perm: perm.clone() })))
        .collect();
    let paths: Vec<Value> = group.generator_paths.iter().map(|p| json!(p.iter().map(|&f| k.facet_labels(f)).collect::<Vec<_>>())).collect();
    let mut doc = json!({
        "base": k.facet_labels(base),
        "dim": k.pure_dim()?,
        "order": group.order(),
        "element_orders": iso.element_orders,
        "abelian": iso.abelian,
        "generators": generators,
        "generator_paths": paths,
    });
    if k.is_cubical() {
        let mats: Vec<Value> = group
            .generators
            .iter()
            .map(|perm| signed_matrix(&Projectivity { source: base, target: base, perm: perm.clone() }).map(|m| json!(m.to_dense())))
            .collect::<Result<_, _>>()?;
        let parities: Vec<u8> = group
            .elements
            .iter()
            .map(|perm| signed_matrix(&Projectivity { source: base, target: base, perm: perm.clone() }).map(|m| m.parity()))
            .collect::<Result<_, _>>()?;
        doc["signed_generators"] = json!(mats);
        doc["even"] = json!(parities.iter().all(|&p| p == 0));
    }
    if let Some(seed) = o.seed {
        doc["self_check"] = self_check(k, &g, base, &group, seed)?;
    }
    let summary = format!("holonomy at {}: order {}", k.fmt_facet(base), group.order());
    Ok((doc, summary))
}

/// Random closed walks at the base must compose to group elements.
fn self_check<C: FacetComplex + ?Sized>(
    k: &C,
    g: &RidgeGraph,
    base: usize,
    group: &holonomy::HolonomyGroup,
    seed: u64,
) -> anyhow::Result<Value> {
    const WALKS: usize = 64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parent = bfs_tree(g, base);
    let mut members = 0;
    for _ in 0..WALKS {
        let mut walk = vec![base];
        let steps = rng.gen_range(0..=2 * k.num_facets());
        for _ in 0..steps {
            let cur = *walk.last().expect("walk is never empty");
            let nbrs: Vec<usize> = g.neighbors(cur).collect();
            if nbrs.is_empty() {
                break;
            }
            walk.push(nbrs[rng.gen_range(0..nbrs.len())]);
        }
        let mut home = tree_path(&parent, *walk.last().expect("walk is never empty"));
        home.reverse();
        walk.extend_from_slice(&home[1..]);
        if group.contains(&compose_path(k, &walk)?.perm) {
            members += 1;
        }
    }
    Ok(json!({"seed": seed, "walks": WALKS, "members": members, "ok": members == WALKS}))
}

fn holonomy_cmd(c: &Complex, o: &Opts) -> anyhow::Result<Report> {
    match c {
        Complex::Simplicial(k) => match o.k {
            Some(d) if (d as isize) < k.dim() => holonomy_report(&k.skeleton(d)?, o),
            Some(d) if d as isize > k.dim() => bail!(Error::Invalid(format!("--k {d} exceeds the dimension {}", k.dim()))),
            _ => holonomy_report(k, o),
        },
        Complex::Cubical(k) => match o.k {
            Some(d) if d < k.dim() => holonomy_report(&k.skeleton(d)?, o),
            Some(d) if d > k.dim() => bail!(Error::Invalid(format!("--k {d} exceeds the dimension {}", k.dim()))),
            _ => holonomy_report(k, o),
        },
    }
}

fn curvature_json(k: &CubicalComplex, c: &Curvature) -> Value {
    let z = c.z_chain.map_or(json!("inf"), |m| json!(m));
    let witness: Vec<Vec<VertexId>> = c.witness.iter().map(|&f| k.facet_labels(f)).collect();
    json!({"I": c.i, "Z_chain": z, "CC": c.cc(), "witness": witness, "witness_cubes": c.witness_cubes})
}

fn betti_json(p: &BettiProfile, doc: &mut Value) {
    let v = serde_json::to_value(p).expect("profiles serialize");
    if let Value::Object(m) = v {
        for (key, val) in m {
            doc[key] = val;
        }
    }
}

fn hom_cmd(k: &SimplicialComplex, l: &SimplicialComplex, o: &Opts) -> anyhow::Result<Report> {
    let h = HomComplex::new(k, l)?;
    let mut doc = json!({"cells": h.len(), "dim": h.dim(), "f_vector": h.f_vector()});
    let mut summary = format!("Hom complex: {} cells, f-vector {:?}", h.len(), h.f_vector());
    if o.homology {
        let p = hom_betti(&h);
        summary.push_str(&format!(", reduced Betti {:?}", p.reduced_betti));
        betti_json(&p, &mut doc);
    }
    if o.cells {
        let cells: Vec<Value> = (0..h.len()).map(|i| json!({"eta": h.eta_labels(i), "dim": h.cell_dim(i)})).collect();
        doc["cell_list"] = json!(cells);
    }
    Ok((doc, summary))
}

fn transport_cmd(k: &SimplicialComplex, l: &SimplicialComplex, path: &str, o: &Opts) -> anyhow::Result<Report> {
    let owned;
    let k = match o.k {
        Some(d) if (d as isize) < k.dim() => {
            owned = k.skeleton(d)?;
            &owned
        }
        Some(d) if d as isize > k.dim() => bail!(Error::Invalid(format!("--k {d} exceeds the dimension {}", k.dim()))),
        _ => k,
    };
    let facets: Vec<usize> =
        path.split(';').filter(|s| !s.trim().is_empty()).map(|s| k.facet_by_labels(&parse_vertex_list(s))).collect::<Result<_, _>>()?;
    let p = compose_path(k, &facets)?;
    let d = k.pure_dim()?;
    let fiber = HomComplex::new(&holonomy::generate::simplex(d), l)?;
    let map = transport_on(&fiber, &p.perm)?;
    let mut doc = json!({
        "path": facets.iter().map(|&f| k.facet_labels(f)).collect::<Vec<_>>(),
        "projectivity": {"source": k.facet_labels(p.source), "target": k.facet_labels(p.target), "map": pairs_json(k, &p)},
        "fiber": {"cells": fiber.len(), "f_vector": fiber.f_vector()},
        "cell_map": map.image,
        "identity": map.is_identity(),
    });
    let mut summary = format!("transport on {} fibre cells, identity: {}", fiber.len(), map.is_identity());
    if o.homology {
        let prof = hom_betti(&fiber);
        let oc = fiber.order_complex();
        let phi = map.as_vertex_map();
        let mut induced = Vec::new();
        for q in prof.support() {
            if prof.betti(q) == 0 {
                continue;
            }
            let m = induced_homology_map(&phi, &oc, &oc, q)?;
            let m: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
            let shown: Vec<String> = m.iter().map(|r| format!("[{}]", r.join(" "))).collect();
            summary.push_str(&format!(", H_{q}: [{}]", shown.join(" ")));
            let m: Vec<Vec<Value>> =
                m.into_iter().map(|r| r.into_iter().map(|x| x.parse::<i64>().map_or(json!(x), |v| json!(v))).collect()).collect();
            induced.push(json!({"q": q, "matrix": m}));
        }
        betti_json(&prof, &mut doc);
        doc["induced"] = json!(induced);
    }
    Ok((doc, summary))
}

fn bubble_cmd(k: &CubicalComplex, cubes: &str, embedding: Option<&Path>) -> anyhow::Result<Report> {
    let b: Vec<usize> =
        cubes.split(';').filter(|s| !s.trim().is_empty()).map(|s| k.facet_by_labels(&parse_vertex_list(s))).collect::<Result<_, _>>()?;
    let embed: Embedding = match embedding {
        Some(path) => {
            let pairs = parse_map(&read(path)?)?;
            let mut e = BTreeMap::new();
            for (v, c) in pairs {
                let i = resolve_label(k.vertices(), &v).ok_or_else(|| anyhow!(Error::Invalid(format!("unknown vertex {v}"))))?;
                let VertexId::Int(c) = c else { bail!(Error::Invalid(format!("corner {c} is not an integer"))) };
                let c = usize::try_from(c).map_err(|_| anyhow!(Error::Invalid(format!("corner {c} is negative"))))?;
                e.insert(i, c);
            }
            e
        }
        None => find_embeddings(k, &b, 1)
            .into_iter()
            .next()
            .ok_or_else(|| anyhow!(Error::Invalid("the cubes do not embed in the boundary of a cube".into())))?,
    };
    let before = invariant_i(k)?;
    let result = bubble_move(k, &b, &embed)?;
    let after = invariant_i(&result)?;
    let embed_json: Map<String, Value> = embed.iter().map(|(&v, &c)| (k.vertices()[v].to_string(), json!(c))).collect();
    let doc = json!({
        "I_before": before,
        "I_after": after,
        "cubes_before": k.cubes().len(),
        "cubes_after": result.cubes().len(),
        "embedding": embed_json,
        "result": ComplexFile::from_cubical(&result),
    });
    Ok((doc, format!("bubble move: {} -> {} cubes, I {} -> {}", k.cubes().len(), result.cubes().len(), before, after)))
}
