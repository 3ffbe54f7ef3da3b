//! Command implementations behind the command-line surface. Each command
//! takes the parsed configuration and run parameters, writes its files
//! under the output directory, and prints a deterministic summary.

use super::cache::{enumerate_and_store, load_or_compute};
use super::config::ParsedConfig;
use super::fmt::fmt_sig12;
use super::render::{render_svg, RenderLayout};
use super::CliError;
use crate::isometry::{IsometryKind, TupleKind};
use crate::limitsets::discrete::{discreteness_report, trace_field_profile};
use crate::limitsets::predict::{
    audit_phi_conjugate, exact_float_agreement, nonelementarity_precheck, predict_structure,
};
use crate::limitsets::samplers::{
    orbit_boundary_estimate, sample_furstenberg, sample_projective, DirectionMode,
};
use crate::limitsets::ElementSet;
use crate::isometry::HPoint;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Classify,
    Enumerate,
    Plimit,
    Flimit,
    Tracefield,
    Discreteness,
    Predict,
    Verify,
    Render,
}

#[derive(Clone, Debug)]
pub struct RunParams {
    pub max_word_length: usize,
    pub iterations: u32,
    pub maxpow: u32,
    pub out_dir: PathBuf,
    pub cache_dir: Option<PathBuf>,
}

impl Default for RunParams {
    fn default() -> Self {
        RunParams {
            max_word_length: 8,
            iterations: 20,
            maxpow: 5,
            out_dir: PathBuf::from("."),
            cache_dir: None,
        }
    }
}

/// Files written by a command, in creation order.
pub struct CommandOutput {
    pub stdout: String,
    pub files: Vec<PathBuf>,
}

pub fn run_command(
    cmd: Command,
    cfg: &ParsedConfig,
    params: &RunParams,
) -> Result<CommandOutput, CliError> {
    let mut out = String::new();
    let mut files = Vec::new();
    match cmd {
        Command::Classify => {
            let bound = cfg.group.order_bound();
            for (label, g) in cfg.group.labels.iter().zip(&cfg.group.generators) {
                let class = g.classify(cfg.group.r, bound);
                let comps: Vec<String> = class
                    .per_component
                    .iter()
                    .map(|c| match c.kind {
                        IsometryKind::Hyperbolic => {
                            format!("Hyperbolic(ℓ≈{})", fmt_sig12(c.length))
                        }
                        other => other.to_string(),
                    })
                    .collect();
                writeln!(out, "{}: {}: {}", label, class.kind, comps.join(", ")).unwrap();
            }
        }
        Command::Enumerate => {
            let cache_dir = params
                .cache_dir
                .clone()
                .unwrap_or_else(|| params.out_dir.join("cache"));
            let (set, path) = enumerate_and_store(cfg, params.max_word_length, &cache_dir)?;
            writeln!(
                out,
                "{} elements at L = {}; cache {}",
                set.len(),
                params.max_word_length,
                path.display()
            )
            .unwrap();
            files.push(path);
        }
        Command::Plimit => {
            let set = element_set(cfg, params)?;
            let sample = sample_projective(&cfg.group, &set, DirectionMode::ProjectiveLimit);
            let mut csv = String::new();
            let wcols: Vec<String> = (1..=cfg.group.r).map(|i| format!("w{}", i)).collect();
            writeln!(csv, "theta,{},word", wcols.join(",")).unwrap();
            for (d, word) in &sample.points {
                let ws: Vec<String> = d.coords.iter().map(|&c| fmt_sig12(c)).collect();
                writeln!(
                    csv,
                    "{},{},{}",
                    fmt_sig12(d.theta()),
                    ws.join(","),
                    cfg.group.format_word(word)
                )
                .unwrap();
            }
            let path = params.out_dir.join("plimit.csv");
            std::fs::create_dir_all(&params.out_dir)?;
            std::fs::write(&path, csv)?;
            writeln!(out, "{} directions -> {}", sample.points.len(), path.display()).unwrap();
            files.push(path);
        }
        Command::Flimit => {
            let set = element_set(cfg, params)?;
            let sample = sample_furstenberg(&cfg.group, &set);
            let mut csv = String::new();
            let acols: Vec<String> = (1..=cfg.group.r).map(|i| format!("alpha{}", i)).collect();
            writeln!(csv, "{},word", acols.join(",")).unwrap();
            for (tuple, word) in &sample.points {
                let als: Vec<String> = tuple.iter().map(|b| fmt_sig12(b.angle())).collect();
                writeln!(csv, "{},{}", als.join(","), cfg.group.format_word(word)).unwrap();
            }
            let path = params.out_dir.join("flimit.csv");
            std::fs::create_dir_all(&params.out_dir)?;
            std::fs::write(&path, csv)?;
            writeln!(
                out,
                "{} boundary tuples -> {}",
                sample.points.len(),
                path.display()
            )
            .unwrap();
            files.push(path);
        }
        Command::Tracefield => {
            let profile = profile(cfg)?;
            writeln!(out, "subgroup_degree = {}", profile.subgroup_degree).unwrap();
            writeln!(out, "ambient_degree = {}", profile.ambient_degree).unwrap();
            writeln!(out, "k = {}", profile.k).unwrap();
        }
        Command::Discreteness => {
            let set = element_set(cfg, params)?;
            let report = discreteness_report(&cfg.group, &set);
            for p in &report.places {
                writeln!(out, "place {}: {}: {}", p.place, p.status, p.evidence).unwrap();
            }
        }
        Command::Predict => {
            let profile = profile(cfg)?;
            let set = element_set(cfg, params)?;
            let report = discreteness_report(&cfg.group, &set);
            let prediction = predict_structure(&cfg.group, &profile, &report)
                .map_err(CliError::from_compute)?;
            writeln!(out, "{}", prediction).unwrap();
        }
        Command::Verify => {
            let failures = run_verify(cfg, params, &mut out)?;
            if !failures.is_empty() {
                return Err(CliError::Verification(failures));
            }
        }
        Command::Render => {
            if cfg.group.r != 2 {
                return Err(CliError::Computation(format!(
                    "rendering supports rank 2 only, configuration has rank {}",
                    cfg.group.r
                )));
            }
            let set = element_set(cfg, params)?;
            let f = sample_furstenberg(&cfg.group, &set);
            let p = sample_projective(&cfg.group, &set, DirectionMode::ProjectiveLimit);
            let svg = render_svg(&f, &p, &RenderLayout::default())?;
            let path = params.out_dir.join("render.svg");
            std::fs::create_dir_all(&params.out_dir)?;
            std::fs::write(&path, svg)?;
            writeln!(
                out,
                "{} boundary tuples, {} ticks -> {}",
                f.points.len(),
                p.points.len(),
                path.display()
            )
            .unwrap();
            files.push(path);
        }
    }
    Ok(CommandOutput { stdout: out, files })
}

fn element_set(cfg: &ParsedConfig, params: &RunParams) -> Result<ElementSet, CliError> {
    load_or_compute(cfg, params.max_word_length, params.cache_dir.as_deref())
}

fn profile(
    cfg: &ParsedConfig,
) -> Result<crate::limitsets::discrete::TraceFieldProfile, CliError> {
    let ambient = cfg.ambient.as_ref().ok_or_else(|| {
        CliError::Computation(
            "this command needs ambient generators (ambient.gen.* / ambient.qgen.*)".into(),
        )
    })?;
    trace_field_profile(&cfg.group, ambient).map_err(CliError::from_compute)
}

/// The verification suite: every check prints one PASS/FAIL line; the
/// returned vector collects the failures.
fn run_verify(
    cfg: &ParsedConfig,
    params: &RunParams,
    out: &mut String,
) -> Result<Vec<String>, CliError> {
    let mut failures: Vec<String> = Vec::new();
    let mut check = |out: &mut String, name: &str, result: Result<String, String>| match result {
        Ok(detail) => {
            if detail.is_empty() {
                writeln!(out, "PASS {}", name).unwrap();
            } else {
                writeln!(out, "PASS {} ({})", name, detail).unwrap();
            }
        }
        Err(msg) => {
            writeln!(out, "FAIL {}: {}", name, msg).unwrap();
            failures.push(format!("{}: {}", name, msg));
        }
    };

    // a usable configuration must expose a hyperbolic tuple quickly
    let precheck = nonelementarity_precheck(&cfg.group, 6);
    check(
        out,
        "nonelementarity-precheck",
        precheck
            .as_ref()
            .map(|(_, w)| format!("hyperbolic tuple at word {}", cfg.group.format_word(w)))
            .map_err(|e| e.to_string()),
    );
    if precheck.is_err() {
        return Ok(failures);
    }

    let set = element_set(cfg, params)?;
    check(
        out,
        "enumeration",
        Ok(format!("{} elements at L = {}", set.len(), params.max_word_length)),
    );

    check(
        out,
        "phi-conjugate-audit",
        audit_phi_conjugate(&cfg.group, &set).map(|_| String::new()),
    );

    let disagreements = exact_float_agreement(&cfg.group, &set);
    check(
        out,
        "exact-float-agreement",
        if disagreements.is_empty() {
            Ok(String::new())
        } else {
            Err(format!(
                "{} disagreements, first: {}",
                disagreements.len(),
                disagreements[0]
            ))
        },
    );

    // direction invariance spot check: conjugation and squaring
    let mut invariance_ok = Ok(String::new());
    let mut tested = 0;
    'outer: for (elt, entry) in set.iter() {
        if entry.class.kind != TupleKind::Hyperbolic {
            continue;
        }
        let d = elt.direction(&entry.class).expect("hyperbolic tuples translate");
        for (conj, _) in set.iter().take(8) {
            let c = conj.mul(elt).mul(&conj.inverse());
            let cc = c.classify(cfg.group.r, cfg.group.order_bound());
            let dc = c.direction(&cc).expect("conjugate translates");
            if d.coords != dc.coords {
                invariance_ok = Err(format!(
                    "conjugation moved the direction of {}",
                    cfg.group.format_word(&entry.word)
                ));
                break 'outer;
            }
        }
        let sq = elt.mul(elt);
        let sq_class = sq.classify(cfg.group.r, cfg.group.order_bound());
        let dsq = sq.direction(&sq_class).expect("square translates");
        if d.coords != dsq.coords {
            invariance_ok = Err(format!(
                "squaring moved the direction of {}",
                cfg.group.format_word(&entry.word)
            ));
            break;
        }
        tested += 1;
        if tested >= 20 {
            break;
        }
    }
    check(out, "direction-invariance", invariance_ok);

    // joint product sampling: each hyperbolic witness appears in both
    // samples, and orbit estimates reproduce its exact data
    let proj = sample_projective(&cfg.group, &set, DirectionMode::ProjectiveLimit);
    let fur = sample_furstenberg(&cfg.group, &set);
    let mut link_ok = Ok(String::new());
    let mut checked = 0;
    for (d, word) in &proj.points {
        let elt = cfg.group.evaluate_word(word);
        let class = elt.classify(cfg.group.r, cfg.group.order_bound());
        if class
            .per_component
            .iter()
            .any(|c| c.length < 1.2)
        {
            continue;
        }
        let tuple = elt.tuple(cfg.group.r);
        let base: Vec<HPoint> = (0..cfg.group.r).map(|_| HPoint::i()).collect();
        match orbit_boundary_estimate(&tuple, &base, params.iterations) {
            Ok(est) => {
                let dir_err = est
                    .direction
                    .coords
                    .iter()
                    .zip(&d.coords)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                if dir_err > 1e-6 {
                    link_ok = Err(format!(
                        "orbit direction estimate off by {} for {}",
                        dir_err,
                        cfg.group.format_word(word)
                    ));
                    break;
                }
                // the same witness must appear in the Furstenberg sample
                let key: Vec<u64> = est.furstenberg.iter().map(|b| b.angle().to_bits()).collect();
                let present = fur.points.iter().any(|(tuple, _)| {
                    tuple
                        .iter()
                        .zip(est.furstenberg.iter())
                        .all(|(a, b)| a.angular_distance(b) < 1e-6)
                });
                let _ = key;
                if !present {
                    link_ok = Err(format!(
                        "attractive tuple of {} missing from the Furstenberg sample",
                        cfg.group.format_word(word)
                    ));
                    break;
                }
            }
            Err(e) => {
                link_ok = Err(format!("orbit estimate failed: {}", e));
                break;
            }
        }
        checked += 1;
        if checked >= 10 {
            break;
        }
    }
    check(
        out,
        "limit-set-product-consistency",
        link_ok.map(|_| format!("{} witnesses checked", checked)),
    );

    // prediction coherence when an ambient group is configured, plus the
    // product-structure diagnostic that backs the predicted Furstenberg
    // shape statistically
    if cfg.ambient.is_some() {
        let report = discreteness_report(&cfg.group, &set);
        let coherence = profile(cfg).and_then(|profile| {
            predict_structure(&cfg.group, &profile, &report)
                .map_err(CliError::from_compute)
                .map(|p| (profile.k, p))
        });
        match coherence {
            Ok((k, p)) => {
                check(
                    out,
                    "prediction-coherence",
                    Ok(format!("k = {}, dim_P = {}", k, p.dim_p)),
                );
                if cfg.group.r == 2 {
                    use crate::limitsets::discrete::PlaceStatus;
                    use crate::limitsets::samplers::{
                        product_structure_check, ProductDiagnostic, ProductMode,
                    };
                    let mode = if k == cfg.group.r {
                        Some(ProductMode::Locked)
                    } else if k == 1
                        && report.count(PlaceStatus::NondiscreteCertified) == cfg.group.r
                    {
                        Some(ProductMode::FullProduct)
                    } else {
                        None
                    };
                    if let Some(mode) = mode {
                        let diag = product_structure_check(&fur, mode)
                            .map(|d| match d {
                                ProductDiagnostic::LockedMaxAngleGap(g) => {
                                    format!("locked max angle gap {}", fmt_sig12(g))
                                }
                                ProductDiagnostic::EmptyBoxScore(s) => {
                                    format!("empty-box score {}", fmt_sig12(s))
                                }
                                ProductDiagnostic::InsufficientData => {
                                    "insufficient data".to_string()
                                }
                            })
                            .map_err(|e| e.to_string());
                        check(out, "product-structure-diagnostic", diag);
                    }
                }
            }
            Err(e) => check(out, "prediction-coherence", Err(e.to_string())),
        }
    }

    Ok(failures)
}
