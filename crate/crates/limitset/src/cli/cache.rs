//! On-disk element cache: one file per (configuration hash, word length).
//!
//! The header line carries the enumeration manifest hash; each record is a
//! witness word followed by the canonical entries as exact rationals in
//! power-basis coordinates, so exactness survives the disk boundary. Cache
//! hits must be bit-identical to recomputation; `enumerate` enforces this
//! by recomputing and comparing bytes when a file already exists.

use super::config::ParsedConfig;
use super::CliError;
use crate::limitsets::{
    enumerate_elements, ElementEntry, ElementSet, EnumerationOptions, GroupElement,
};
use crate::numfield::FieldElement;
use crate::quatalg::Quaternion;
use num_rational::BigRational;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

const CACHE_VERSION: &str = "v1";

/// Manifest of an enumeration run: the cache is an enumeration artifact, so
/// the same manifest applies no matter which command populated it.
pub fn enumeration_manifest_hash(cfg: &ParsedConfig, max_word_length: usize) -> String {
    let mut h = Sha256::new();
    h.update(cfg.config_hash().as_bytes());
    h.update(b"|enumerate|");
    h.update(max_word_length.to_string().as_bytes());
    h.update(b"|");
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.finalize().iter().map(|b| format!("{:02x}", b)).collect()
}

pub fn cache_path(dir: &Path, cfg: &ParsedConfig, max_word_length: usize) -> PathBuf {
    dir.join(format!("{}-L{}.elements", cfg.config_hash(), max_word_length))
}

fn coords_to_string(e: &FieldElement) -> String {
    e.coords()
        .iter()
        .map(|c| c.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn coords_from_string(
    s: &str,
    cfg: &ParsedConfig,
) -> Result<FieldElement, CliError> {
    let coords: Result<Vec<BigRational>, _> =
        s.split(',').map(BigRational::from_str).collect();
    let coords = coords.map_err(|_| CliError::Computation(format!("bad cache rational: {}", s)))?;
    if coords.len() != cfg.group.field.degree() {
        return Err(CliError::Computation("cache coordinate arity mismatch".into()));
    }
    Ok(FieldElement::new(cfg.group.field.clone(), coords))
}

/// Serialize an element set to the cache format.
pub fn render_cache(cfg: &ParsedConfig, set: &ElementSet) -> String {
    let kind = match cfg.group.generators[0] {
        GroupElement::Matrix(_) => "matrix",
        GroupElement::Quaternion(_, _) => "quaternion",
    };
    let mut out = format!(
        "limitset-cache {} {} L={} kind={}\n",
        CACHE_VERSION,
        enumeration_manifest_hash(cfg, set.max_word_length),
        set.max_word_length,
        kind
    );
    for (elt, entry) in set.iter() {
        let parts: [String; 4] = match elt {
            GroupElement::Matrix(m) => [
                coords_to_string(&m.a),
                coords_to_string(&m.b),
                coords_to_string(&m.c),
                coords_to_string(&m.d),
            ],
            GroupElement::Quaternion(_, q) => [
                coords_to_string(&q.x),
                coords_to_string(&q.y),
                coords_to_string(&q.z),
                coords_to_string(&q.w),
            ],
        };
        out.push_str(&format!(
            "{}|{}|{}|{}|{}\n",
            cfg.group.format_word(&entry.word),
            parts[0],
            parts[1],
            parts[2],
            parts[3]
        ));
    }
    out
}

/// Parse a cache file back into an element set, reclassifying each element.
pub fn parse_cache(text: &str, cfg: &ParsedConfig) -> Result<ElementSet, CliError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Computation("empty cache file".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 5 || fields[0] != "limitset-cache" || fields[1] != CACHE_VERSION {
        return Err(CliError::Computation("unrecognized cache header".into()));
    }
    let manifest = fields[2];
    let l: usize = fields[3]
        .strip_prefix("L=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| CliError::Computation("bad cache length field".into()))?;
    if manifest != enumeration_manifest_hash(cfg, l) {
        return Err(CliError::Computation(
            "cache manifest does not match this configuration".into(),
        ));
    }
    let bound = cfg.group.order_bound();
    let mut elements = BTreeMap::new();
    for line in lines {
        if line.is_empty() {
            continue;
        }
        let parts: Vec<&str> = line.split('|').collect();
        if parts.len() != 5 {
            return Err(CliError::Computation(format!("bad cache record: {}", line)));
        }
        let word = cfg
            .group
            .parse_word(parts[0])
            .ok_or_else(|| CliError::Computation(format!("bad cache word: {}", parts[0])))?;
        let e1 = coords_from_string(parts[1], cfg)?;
        let e2 = coords_from_string(parts[2], cfg)?;
        let e3 = coords_from_string(parts[3], cfg)?;
        let e4 = coords_from_string(parts[4], cfg)?;
        let elt = match &cfg.group.generators[0] {
            GroupElement::Matrix(_) => GroupElement::Matrix(
                crate::isometry::ExactMobius::new(e1, e2, e3, e4)
                    .map_err(|e| CliError::Computation(format!("cache matrix invalid: {}", e)))?,
            ),
            GroupElement::Quaternion(alg, _) => {
                GroupElement::quaternion(alg.clone(), Quaternion::new(e1, e2, e3, e4))
            }
        };
        let class = elt.classify(cfg.group.r, bound);
        elements.insert(elt, ElementEntry { word, class });
    }
    Ok(ElementSet {
        max_word_length: l,
        elements,
    })
}

/// Load the element set from cache when available, otherwise enumerate;
/// write back to the cache directory when one is configured.
pub fn load_or_compute(
    cfg: &ParsedConfig,
    max_word_length: usize,
    cache_dir: Option<&Path>,
) -> Result<ElementSet, CliError> {
    if let Some(dir) = cache_dir {
        let path = cache_path(dir, cfg, max_word_length);
        if path.is_file() {
            let text = std::fs::read_to_string(&path)?;
            return parse_cache(&text, cfg);
        }
        let set = enumerate_elements(cfg_opts(cfg), &EnumerationOptions::with_length(max_word_length))
            .map_err(CliError::from_compute)?;
        std::fs::create_dir_all(dir)?;
        std::fs::write(&path, render_cache(cfg, &set))?;
        Ok(set)
    } else {
        enumerate_elements(cfg_opts(cfg), &EnumerationOptions::with_length(max_word_length))
            .map_err(CliError::from_compute)
    }
}

fn cfg_opts(cfg: &ParsedConfig) -> &crate::limitsets::GroupConfig {
    &cfg.group
}

/// The `enumerate` command body: always recompute; verify byte identity
/// against an existing file, else write it.
pub fn enumerate_and_store(
    cfg: &ParsedConfig,
    max_word_length: usize,
    cache_dir: &Path,
) -> Result<(ElementSet, PathBuf), CliError> {
    let set = enumerate_elements(&cfg.group, &EnumerationOptions::with_length(max_word_length))
        .map_err(CliError::from_compute)?;
    let rendered = render_cache(cfg, &set);
    let path = cache_path(cache_dir, cfg, max_word_length);
    if path.is_file() {
        let existing = std::fs::read_to_string(&path)?;
        if existing != rendered {
            return Err(CliError::Computation(format!(
                "cache file {} disagrees with recomputation",
                path.display()
            )));
        }
    } else {
        std::fs::create_dir_all(cache_dir)?;
        std::fs::write(&path, &rendered)?;
    }
    Ok((set, path))
}
