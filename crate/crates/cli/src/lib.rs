//! Command-line front end for `prefgeom`.
//!
//! Every subcommand prints one JSON document on stdout. Candidate indices are 0-based.
//! Exit codes: 2 bad input, 3 identical candidates, 4 degenerate embedding, 5 wrong arity.

pub mod document;
pub mod svg;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use prefgeom::arrangement::{
    build_graph, cells_profile, critical_points, enumerate_cells, euler_audit, ArrangementError,
};
use prefgeom::constructions::{
    hv_counts, l1_last_place_embedding, linf_last_place_embedding, theta_m4_embedding, theta_orientations_hold,
    voter_profile_d,
};
use prefgeom::geometry::{
    build_bisector, detect_degeneracies, perturb_generic, Bisector, GeometryError, NormTag, Piece, Point2,
};
use prefgeom::profiles::{
    canonical, check_last_place_bound, find_isomorphic_subprofile, last_place_candidates, profile_of,
    recognize_l2_four, size_bound_report, CanonicalId, Embedding2, Profile, ProfileError,
};

use document::{point_coords, EmbeddingDocument, ProfileDocument};

/// Environment variable that overrides `--seed`.
pub const SEED_ENV: &str = "PREFGEOM_SEED";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Parse(String),
    #[error("candidates coincide")]
    IdenticalCandidates,
    #[error("embedding is degenerate ({0}); rerun with --perturb")]
    Degenerate(String),
    #[error("expected 4 candidates, got {0}")]
    WrongArity(usize),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => 2,
            CliError::IdenticalCandidates => 3,
            CliError::Degenerate(_) => 4,
            CliError::WrongArity(_) => 5,
            CliError::Internal(_) => 1,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::IdenticalCandidates | GeometryError::DuplicateCandidates => CliError::IdenticalCandidates,
            GeometryError::Parse(s) => CliError::Parse(s),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<ProfileError> for CliError {
    fn from(e: ProfileError) -> Self {
        match e {
            ProfileError::DuplicateCandidates => CliError::IdenticalCandidates,
            ProfileError::WrongArity(m) => CliError::WrongArity(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

impl From<ArrangementError> for CliError {
    fn from(e: ArrangementError) -> Self {
        match e {
            ArrangementError::DegenerateEmbedding(report) => {
                CliError::Degenerate(format!("{} degenerate configurations", report.total()))
            }
            ArrangementError::Geometry(g) => g.into(),
            ArrangementError::Profile(p) => p.into(),
            ArrangementError::WrongArity(m) => CliError::WrongArity(m),
            other => CliError::Internal(other.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum NormArg {
    L1,
    L2,
    Linf,
}

impl From<NormArg> for NormTag {
    fn from(n: NormArg) -> Self {
        match n {
            NormArg::L1 => NormTag::L1,
            NormArg::L2 => NormTag::L2,
            NormArg::Linf => NormTag::Linf,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Family {
    ThetaM4,
    LinfLast,
    L1Last,
}

#[derive(Debug, Parser)]
#[command(name = "prefgeom", version, about = "Exact preference geometry under l1, l2 and linf")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Describe the bisector of two candidates.
    Bisector {
        #[arg(long, value_enum)]
        norm: NormArg,
        /// First candidate as `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        c1: String,
        /// Second candidate as `x,y`.
        #[arg(long, allow_hyphen_values = true)]
        c2: String,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Enumerate the preference cells of an embedding.
    Areas {
        #[arg(long, value_enum)]
        norm: NormArg,
        #[arg(long)]
        embedding: PathBuf,
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Also report the vertex/edge graph and the Euler audit.
        #[arg(long)]
        graph: bool,
        /// Nudge a degenerate embedding into general position first.
        #[arg(long)]
        perturb: bool,
    },
    /// Decide l2 realizability of a four-candidate profile.
    Recognize4 {
        #[arg(long)]
        profile: PathBuf,
    },
    /// Emit one of the extremal constructions.
    Construct {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        verify: bool,
    },
    /// Print a maximal four-candidate profile.
    Maximal {
        #[arg(long)]
        which: CanonicalId,
    },
    /// Sample random four-candidate l1 embeddings and record their cell counts.
    ExperimentMaxsearch {
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs one command and returns the JSON to print.
pub fn run(command: Command) -> Result<Value, CliError> {
    match command {
        Command::Bisector { norm, c1, c2, svg } => cmd_bisector(norm.into(), &c1, &c2, svg.as_deref()),
        Command::Areas { norm, embedding, svg, graph, perturb } => {
            cmd_areas(norm.into(), &read_json(&embedding)?, svg.as_deref(), graph, perturb)
        }
        Command::Recognize4 { profile } => cmd_recognize4(&read_json(&profile)?),
        Command::Construct { family, m, d, verify } => cmd_construct(family, m, d, verify),
        Command::Maximal { which } => Ok(cmd_maximal(which)),
        Command::ExperimentMaxsearch { m, trials, seed } => {
            let seed = match std::env::var(SEED_ENV) {
                Ok(s) => s.trim().parse().map_err(|_| CliError::Parse(format!("{SEED_ENV}={s}")))?,
                Err(_) => seed,
            };
            cmd_experiment_maxsearch(m, trials, seed)
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn write_svg(path: &Path, content: &str) -> Result<(), CliError> {
    fs::write(path, content).map_err(|e| CliError::Internal(format!("{}: {e}", path.display())))
}

fn piece_json(piece: &Piece) -> Value {
    match piece {
        Piece::Segment { a, b } => json!({"type": "segment", "a": point_coords(a), "b": point_coords(b)}),
        Piece::Ray { origin, dir } => json!({"type": "ray", "origin": point_coords(origin), "dir": point_coords(dir)}),
        Piece::Line { point, dir } => json!({"type": "line", "point": point_coords(point), "dir": point_coords(dir)}),
    }
}

fn kind_label(b: &Bisector) -> String {
    match b {
        Bisector::Line { .. } => "line".to_string(),
        Bisector::Rotated(inner) => format!("rotated {}", kind_label(inner)),
        other => other.kind().label().to_string(),
    }
}

pub fn cmd_bisector(norm: NormTag, c1: &str, c2: &str, svg_path: Option<&Path>) -> Result<Value, CliError> {
    let p1 = Point2::parse(c1)?;
    let p2 = Point2::parse(c2)?;
    let b = build_bisector(norm, &p1, &p2)?;
    let mut out = json!({
        "norm": norm.name(),
        "kind": kind_label(&b),
        "description": b.describe(),
        "pieces": b.pieces().iter().map(piece_json).collect::<Vec<_>>(),
        "endpoints": b.breakpoints().iter().map(point_coords).collect::<Vec<_>>(),
    });
    if b.is_degenerate() {
        out["warning"] =
            json!("dx = dy: the bisector contains two closed quadrants; perturb before building arrangements");
    }
    if let Some(path) = svg_path {
        let cands = [p1, p2];
        let scene = svg::Scene {
            candidates: &cands,
            bisectors: std::slice::from_ref(&b),
            labels: Vec::new(),
            extent: Vec::new(),
        };
        write_svg(path, &svg::render(&scene))?;
    }
    Ok(out)
}

pub fn cmd_areas(
    norm: NormTag,
    doc: &EmbeddingDocument,
    svg_path: Option<&Path>,
    graph: bool,
    perturb: bool,
) -> Result<Value, CliError> {
    let (mut emb, voters) = doc.planar()?;
    let voter_opt = (!voters.is_empty()).then_some(voters.as_slice());
    let report = detect_degeneracies(norm, emb.positions(), voter_opt)?;
    let mut perturbed = None;
    if !report.is_empty() {
        if !perturb {
            return Err(CliError::Degenerate(format!("{} degenerate configurations", report.total())));
        }
        let moved = perturb_generic(norm, emb.positions(), voter_opt)?;
        emb = Embedding2::new(moved)?;
        perturbed = Some(EmbeddingDocument::from_points(emb.positions(), voter_opt));
    }
    let cells = enumerate_cells(&emb, norm)?;
    let profile = cells_profile(emb.m(), &cells);
    let mut out = json!({
        "norm": norm.name(),
        "profile": ProfileDocument::from_profile(&profile),
        "count": profile.len(),
        "cells": cells.iter().map(|c| json!({
            "ranking": c.ranking.order(),
            "witness": point_coords(&c.witness),
            "bounded": c.bounded,
        })).collect::<Vec<_>>(),
        "unbounded_cells": cells.iter().filter(|c| !c.bounded).count(),
        "perturbed": perturbed.is_some(),
    });
    if let Some(doc) = perturbed {
        out["embedding"] = serde_json::to_value(doc).map_err(|e| CliError::Internal(e.to_string()))?;
    }
    if voter_opt.is_some() {
        let vp = profile_of(&emb, norm, &voters).map_err(|e| CliError::Degenerate(e.to_string()))?;
        out["voter_profile"] = json!(ProfileDocument::from_profile(&vp));
    }
    if graph {
        let g = build_graph(&emb, norm)?;
        let audit = euler_audit(&g);
        out["unbounded_cells"] = json!(g.unbounded_cells);
        out["euler"] = json!({
            "n_v": audit.n_v,
            "n_e": audit.n_e,
            "n_z": audit.n_z,
            "components": audit.components,
            "unbounded_cells": audit.unbounded_cells,
            "bound": audit.bound,
            "inequality_holds": audit.inequality_holds,
            "four_candidate_checks": audit.four_candidate_checks.map(|(v, z)| json!({"n_v_le_8": v, "n_z_le_19": z})),
            "pass": audit.pass,
        });
    }
    if let Some(path) = svg_path {
        let critical = critical_points(&emb, norm)?;
        let bisectors: Vec<Bisector> = critical.bisectors.iter().map(|lb| lb.bisector.clone()).collect();
        let labels = cells
            .iter()
            .filter(|c| c.bounded)
            .map(|c| svg::Label {
                at: c.witness.clone(),
                text: c.ranking.order().iter().map(|k| format!("c{k}")).collect::<Vec<_>>().join("&gt;"),
            })
            .collect();
        let scene = svg::Scene {
            candidates: emb.positions(),
            bisectors: &bisectors,
            labels,
            extent: critical.vertices.keys().cloned().collect(),
        };
        write_svg(path, &svg::render(&scene))?;
    }
    Ok(out)
}

pub fn cmd_recognize4(doc: &ProfileDocument) -> Result<Value, CliError> {
    let profile = doc.to_profile()?;
    if profile.m() != 4 {
        return Err(CliError::WrongArity(profile.m()));
    }
    let verdict = recognize_l2_four(&profile)?;
    let size = size_bound_report(&profile, NormTag::L1);
    let last = check_last_place_bound(&profile, NormTag::L1, 2)?;
    let (witness, permutation) = match verdict.witness {
        Some((id, sigma)) => (json!(id.name()), json!(sigma)),
        None => (Value::Null, Value::Null),
    };
    Ok(json!({
        "euclidean_l2": verdict.euclidean,
        "witness_profile": witness,
        "permutation": permutation,
        "l1_checks": {
            "size": size.size,
            "size_ok": !size.violation,
            "last_place": last.last_place.len(),
            "last_place_ok": last.pass,
        },
    }))
}

fn required(flag: Option<usize>, name: &str, family: &str) -> Result<usize, CliError> {
    flag.ok_or_else(|| CliError::Parse(format!("--{name} is required for {family}")))
}

pub fn cmd_construct(family: Family, m: Option<usize>, d: Option<usize>, verify: bool) -> Result<Value, CliError> {
    match family {
        Family::ThetaM4 => {
            let m = required(m, "m", "theta-m4")?;
            if m < 2 {
                return Err(CliError::Parse("theta-m4 needs --m at least 2".to_string()));
            }
            let emb = theta_m4_embedding(m)?;
            let doc = EmbeddingDocument::from_points(emb.positions(), None);
            if !verify {
                return serde_json::to_value(doc).map_err(|e| CliError::Internal(e.to_string()));
            }
            let counts = hv_counts(m);
            let cells = enumerate_cells(&emb, NormTag::L1)?.len();
            Ok(json!({
                "embedding": doc,
                "verification": {
                    "orientations_hold": theta_orientations_hold(&emb),
                    "horizontal": counts.h,
                    "vertical": counts.v,
                    "cell_lower_bound": counts.cell_lower_bound(),
                    "cells": cells,
                    "pass": theta_orientations_hold(&emb) && cells >= counts.cell_lower_bound(),
                },
            }))
        }
        Family::LinfLast | Family::L1Last => {
            let d = required(d, "d", "the last-place families")?;
            if d == 0 || d > 16 {
                return Err(CliError::Parse("--d must lie in 1..=16".to_string()));
            }
            let (emb, norm, expected) = match family {
                Family::LinfLast => (linf_last_place_embedding(d), NormTag::Linf, 2 * d),
                _ => (l1_last_place_embedding(d), NormTag::L1, 1 << d),
            };
            let doc = EmbeddingDocument::from_embedding_d(&emb);
            if !verify {
                return serde_json::to_value(doc).map_err(|e| CliError::Internal(e.to_string()));
            }
            let profile = voter_profile_d(&emb, norm)?;
            let report = check_last_place_bound(&profile, norm, d)?;
            let last = last_place_candidates(&profile).len();
            Ok(json!({
                "embedding": doc,
                "verification": {
                    "norm": norm.name(),
                    "last_place": last,
                    "expected": expected,
                    "bound": report.bound.to_string(),
                    "pass": last == expected && report.pass,
                },
            }))
        }
    }
}

pub fn cmd_maximal(which: CanonicalId) -> Value {
    json!(ProfileDocument::from_profile(canonical(which)))
}

/// Summary of a random search over generic l1 embeddings.
pub fn cmd_experiment_maxsearch(m: usize, trials: usize, seed: u64) -> Result<Value, CliError> {
    if m != 4 {
        return Err(CliError::WrongArity(m));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut histogram: BTreeMap<usize, usize> = BTreeMap::new();
    let mut hits = Vec::new();
    let mut all_iso = true;
    let p0 = canonical(CanonicalId::P0);
    for _ in 0..trials {
        let emb = loop {
            let pts: Vec<Point2> = (0..m).map(|_| Point2::int(rng.gen_range(0..=40), rng.gen_range(0..=40))).collect();
            let Ok(emb) = Embedding2::new(pts) else { continue };
            if detect_degeneracies(NormTag::L1, emb.positions(), None)?.is_empty() {
                break emb;
            }
        };
        let cells = enumerate_cells(&emb, NormTag::L1)?;
        let profile: Profile = cells_profile(m, &cells);
        *histogram.entry(profile.len()).or_default() += 1;
        if profile.len() == 19 {
            let iso = find_isomorphic_subprofile(&profile, p0)?.is_some()
                && find_isomorphic_subprofile(p0, &profile)?.is_some();
            all_iso &= iso;
            hits.push(json!({
                "positions": emb.positions().iter().map(point_coords).collect::<Vec<_>>(),
                "isomorphic_to_p0": iso,
            }));
        }
    }
    let max = histogram.keys().next_back().copied();
    Ok(json!({
        "m": m,
        "trials": trials,
        "seed": seed,
        "max_cells": max,
        "histogram": histogram.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
        "nineteen_hits": hits.len(),
        "all_nineteen_isomorphic_to_p0": all_iso,
        "hits": hits,
        "max_within_bound": max.is_none_or(|v| v <= 19),
    }))
}
