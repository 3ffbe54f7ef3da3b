//! The line-oriented configuration format.
//!
//! ```text
//! # comment
//! field.minpoly = x^2 - 2
//! field.phi1_root = 2          # optional: 1-based index, increasing roots
//! group.r = 2
//! gen.E = [[1+t, 0], [0, t-1]]
//! ambient.gen.T = [[1, 1], [0, 1]]
//! # quaternion configurations instead carry:
//! quat.a = t^2 - 1
//! quat.b = t - 1
//! qgen.U = (t, 1, 0, 0)
//! ```
//!
//! Matrix entries and quaternion coordinates use the expression grammar of
//! [`super::expr`]. Every matrix must have exact determinant one; every
//! entry must lie in the Z-span of the power basis; every quaternion
//! generator must have reduced norm one and pass order membership.

use super::expr::{format_polynomial, parse_field_element, parse_polynomial};
use crate::isometry::ExactMobius;
use crate::limitsets::{GroupConfig, GroupElement, LimitSetError};
use crate::numfield::{make_field_with_phi1, FieldElement, NumberField, NumFieldError};
use crate::quatalg::{order_membership, reduced_norm, Quaternion, QuaternionAlgebra};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: parse error: {msg}")]
    Parse { line: usize, msg: String },
    #[error("generator {label}: determinant is not one")]
    DetNotOne { label: String },
    #[error("generator {label}: entries are not integral in the standard order")]
    NotIntegral { label: String },
    #[error("generator {label}: reduced norm is not one")]
    NormNotOne { label: String },
    #[error("field error: {0}")]
    Field(#[from] NumFieldError),
    #[error("group error: {0}")]
    Group(#[from] LimitSetError),
}

/// A parsed and validated configuration, with its canonical text form.
#[derive(Debug, Clone)]
pub struct ParsedConfig {
    pub group: GroupConfig,
    pub ambient: Option<GroupConfig>,
    canonical: String,
}

impl ParsedConfig {
    pub fn canonical_text(&self) -> &str {
        &self.canonical
    }

    /// Hex SHA-256 of the canonical text; the identity of the configuration
    /// for caches and manifests.
    pub fn config_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.canonical.as_bytes());
        let out = h.finalize();
        out.iter().map(|b| format!("{:02x}", b)).collect()
    }
}

#[derive(Default)]
struct RawConfig {
    minpoly: Option<(usize, String)>,
    phi1_root: Option<(usize, String)>,
    r: Option<(usize, String)>,
    quat_a: Option<(usize, String)>,
    quat_b: Option<(usize, String)>,
    gens: Vec<(usize, String, String)>,
    qgens: Vec<(usize, String, String)>,
    ambient_gens: Vec<(usize, String, String)>,
    ambient_qgens: Vec<(usize, String, String)>,
}

pub fn parse_config(text: &str) -> Result<ParsedConfig, ConfigError> {
    let mut raw = RawConfig::default();
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('#') {
            Some(p) => &raw_line[..p],
            None => raw_line,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| ConfigError::Parse {
            line: line_no,
            msg: "expected 'key = value'".into(),
        })?;
        let key = key.trim();
        let value = value.trim().to_string();
        let set_once = |slot: &mut Option<(usize, String)>, what: &str| {
            if slot.is_some() {
                Err(ConfigError::Parse {
                    line: line_no,
                    msg: format!("duplicate key {}", what),
                })
            } else {
                *slot = Some((line_no, value.clone()));
                Ok(())
            }
        };
        match key {
            "field.minpoly" => set_once(&mut raw.minpoly, key)?,
            "field.phi1_root" => set_once(&mut raw.phi1_root, key)?,
            "group.r" => set_once(&mut raw.r, key)?,
            "quat.a" => set_once(&mut raw.quat_a, key)?,
            "quat.b" => set_once(&mut raw.quat_b, key)?,
            _ => {
                if let Some(label) = key.strip_prefix("gen.") {
                    raw.gens.push((line_no, validate_label(label, line_no)?, value));
                } else if let Some(label) = key.strip_prefix("qgen.") {
                    raw.qgens.push((line_no, validate_label(label, line_no)?, value));
                } else if let Some(label) = key.strip_prefix("ambient.gen.") {
                    raw.ambient_gens
                        .push((line_no, validate_label(label, line_no)?, value));
                } else if let Some(label) = key.strip_prefix("ambient.qgen.") {
                    raw.ambient_qgens
                        .push((line_no, validate_label(label, line_no)?, value));
                } else {
                    return Err(ConfigError::Parse {
                        line: line_no,
                        msg: format!("unknown key {:?}", key),
                    });
                }
            }
        }
    }

    let (mp_line, mp_text) = raw.minpoly.ok_or_else(|| ConfigError::Parse {
        line: 0,
        msg: "missing field.minpoly".into(),
    })?;
    let minpoly = parse_polynomial(&mp_text).map_err(|e| ConfigError::Parse {
        line: mp_line,
        msg: format!("column {}: {}", e.col, e.msg),
    })?;
    let degree = minpoly.degree();
    let phi1 = match &raw.phi1_root {
        Some((line, s)) => s.parse::<usize>().map_err(|_| ConfigError::Parse {
            line: *line,
            msg: "field.phi1_root must be a positive integer".into(),
        })?,
        None => degree.max(1),
    };
    let field = make_field_with_phi1(minpoly, phi1)?;

    let (r_line, r_text) = raw.r.ok_or_else(|| ConfigError::Parse {
        line: 0,
        msg: "missing group.r".into(),
    })?;
    let r: usize = r_text.parse().map_err(|_| ConfigError::Parse {
        line: r_line,
        msg: "group.r must be a positive integer".into(),
    })?;

    if !raw.gens.is_empty() && !raw.qgens.is_empty() {
        return Err(ConfigError::Parse {
            line: raw.qgens[0].0,
            msg: "a configuration carries either gen.* or qgen.* entries, not both".into(),
        });
    }

    let algebra = match (&raw.quat_a, &raw.quat_b) {
        (Some((la, a)), Some((lb, b))) => {
            let a = parse_entry(a, &field, *la)?;
            let b = parse_entry(b, &field, *lb)?;
            Some(QuaternionAlgebra::new(a, b).map_err(|e| ConfigError::Parse {
                line: *la,
                msg: e.to_string(),
            })?)
        }
        (None, None) => None,
        (Some((l, _)), None) | (None, Some((l, _))) => {
            return Err(ConfigError::Parse {
                line: *l,
                msg: "quat.a and quat.b must be given together".into(),
            })
        }
    };
    if !raw.qgens.is_empty() && algebra.is_none() {
        return Err(ConfigError::Parse {
            line: raw.qgens[0].0,
            msg: "qgen.* entries require quat.a and quat.b".into(),
        });
    }

    let group = build_group(&field, r, &raw.gens, &raw.qgens, algebra.clone())?;
    let ambient = if raw.ambient_gens.is_empty() && raw.ambient_qgens.is_empty() {
        None
    } else {
        Some(build_group(
            &field,
            r,
            &raw.ambient_gens,
            &raw.ambient_qgens,
            algebra.clone(),
        )?)
    };

    let canonical = print_config(&group, ambient.as_ref());
    Ok(ParsedConfig {
        group,
        ambient,
        canonical,
    })
}

fn validate_label(label: &str, line: usize) -> Result<String, ConfigError> {
    if label.is_empty()
        || !label
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
    {
        return Err(ConfigError::Parse {
            line,
            msg: format!("label {:?} must be alphanumeric", label),
        });
    }
    Ok(label.to_string())
}

fn parse_entry(
    src: &str,
    field: &Arc<NumberField>,
    line: usize,
) -> Result<FieldElement, ConfigError> {
    parse_field_element(src, field).map_err(|e| ConfigError::Parse {
        line,
        msg: format!("column {}: {}", e.col, e.msg),
    })
}

/// Split `[[a, b], [c, d]]` into the four entry expressions.
fn split_matrix(src: &str, line: usize) -> Result<[String; 4], ConfigError> {
    let err = |msg: &str| ConfigError::Parse { line, msg: msg.into() };
    let s = src.trim();
    if !s.starts_with("[[") || !s.ends_with("]]") {
        return Err(err("matrix must look like [[a, b], [c, d]]"));
    }
    let mut entries: Vec<String> = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for ch in s.chars() {
        match ch {
            '[' => {
                depth += 1;
                if depth > 2 {
                    return Err(err("unexpected '[' nesting"));
                }
            }
            ']' => {
                if depth == 0 {
                    return Err(err("unbalanced ']'"));
                }
                if depth == 2 {
                    entries.push(cur.trim().to_string());
                    cur.clear();
                }
                depth -= 1;
            }
            ',' => match depth {
                2 => {
                    entries.push(cur.trim().to_string());
                    cur.clear();
                }
                1 => {}
                _ => return Err(err("unexpected ','")),
            },
            c => {
                if depth == 2 {
                    cur.push(c);
                } else if !c.is_whitespace() {
                    return Err(err("unexpected text outside matrix rows"));
                }
            }
        }
    }
    if depth != 0 || entries.len() != 4 {
        return Err(err("matrix must have exactly two rows of two entries"));
    }
    Ok([
        entries[0].clone(),
        entries[1].clone(),
        entries[2].clone(),
        entries[3].clone(),
    ])
}

/// Split `(x, y, z, w)` into the four coordinate expressions.
fn split_quaternion(src: &str, line: usize) -> Result<[String; 4], ConfigError> {
    let err = |msg: &str| ConfigError::Parse { line, msg: msg.into() };
    let s = src.trim();
    let inner = s
        .strip_prefix('(')
        .and_then(|t| t.strip_suffix(')'))
        .ok_or_else(|| err("quaternion must look like (x, y, z, w)"))?;
    let mut parts: Vec<String> = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for ch in inner.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                cur.push(ch);
            }
            ',' if depth == 0 => {
                parts.push(cur.trim().to_string());
                cur.clear();
            }
            c => cur.push(c),
        }
    }
    parts.push(cur.trim().to_string());
    if parts.len() != 4 {
        return Err(err("quaternion needs exactly four coordinates"));
    }
    Ok([
        parts[0].clone(),
        parts[1].clone(),
        parts[2].clone(),
        parts[3].clone(),
    ])
}

fn build_group(
    field: &Arc<NumberField>,
    r: usize,
    gens: &[(usize, String, String)],
    qgens: &[(usize, String, String)],
    algebra: Option<Arc<QuaternionAlgebra>>,
) -> Result<GroupConfig, ConfigError> {
    let mut labels = Vec::new();
    let mut elements = Vec::new();
    for (line, label, value) in gens {
        let [a, b, c, d] = split_matrix(value, *line)?;
        let a = parse_entry(&a, field, *line)?;
        let b = parse_entry(&b, field, *line)?;
        let c = parse_entry(&c, field, *line)?;
        let d = parse_entry(&d, field, *line)?;
        for e in [&a, &b, &c, &d] {
            if !e.is_power_basis_integral() {
                return Err(ConfigError::NotIntegral { label: label.clone() });
            }
        }
        let m = ExactMobius::new(a, b, c, d)
            .map_err(|_| ConfigError::DetNotOne { label: label.clone() })?;
        labels.push(label.clone());
        elements.push(GroupElement::Matrix(m));
    }
    for (line, label, value) in qgens {
        let alg = algebra.as_ref().expect("qgens imply an algebra");
        let [x, y, z, w] = split_quaternion(value, *line)?;
        let q = Quaternion::new(
            parse_entry(&x, field, *line)?,
            parse_entry(&y, field, *line)?,
            parse_entry(&z, field, *line)?,
            parse_entry(&w, field, *line)?,
        );
        if !order_membership(&q) {
            return Err(ConfigError::NotIntegral { label: label.clone() });
        }
        if !reduced_norm(alg, &q).is_one() {
            return Err(ConfigError::NormNotOne { label: label.clone() });
        }
        labels.push(label.clone());
        elements.push(GroupElement::quaternion(alg.clone(), q));
    }
    Ok(GroupConfig::new(field.clone(), r, labels, elements)?)
}

/// Canonical printed form; `parse_config(print_config(..))` reproduces the
/// configuration.
pub fn print_config(group: &GroupConfig, ambient: Option<&GroupConfig>) -> String {
    let mut out = String::new();
    writeln!(
        out,
        "field.minpoly = {}",
        format_polynomial(group.field.minpoly(), "x")
    )
    .unwrap();
    writeln!(out, "field.phi1_root = {}", group.field.phi1_root_index()).unwrap();
    writeln!(out, "group.r = {}", group.r).unwrap();
    if let Some(alg) = &group.algebra {
        writeln!(out, "quat.a = {}", alg.a()).unwrap();
        writeln!(out, "quat.b = {}", alg.b()).unwrap();
    }
    let write_gens = |out: &mut String, prefix: &str, cfg: &GroupConfig| {
        for (label, g) in cfg.labels.iter().zip(&cfg.generators) {
            match g {
                GroupElement::Matrix(m) => {
                    writeln!(
                        out,
                        "{}gen.{} = [[{}, {}], [{}, {}]]",
                        prefix, label, m.a, m.b, m.c, m.d
                    )
                    .unwrap();
                }
                GroupElement::Quaternion(_, q) => {
                    writeln!(
                        out,
                        "{}qgen.{} = ({}, {}, {}, {})",
                        prefix, label, q.x, q.y, q.z, q.w
                    )
                    .unwrap();
                }
            }
        }
    };
    write_gens(&mut out, "", group);
    if let Some(amb) = ambient {
        write_gens(&mut out, "ambient.", amb);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const RATIONAL_DIAGONAL: &str = "\
# the rational diagonal pair over Q(sqrt 2)
field.minpoly = x^2 - 2
group.r = 2
gen.G1 = [[2, 1], [1, 1]]
gen.G2 = [[1, 1], [1, 2]]
ambient.gen.T = [[1, 1], [0, 1]]
ambient.gen.U = [[1, t], [0, 1]]
ambient.gen.S = [[0, -1], [1, 0]]
";

    #[test]
    fn parses_a_full_configuration() {
        let cfg = parse_config(RATIONAL_DIAGONAL).unwrap();
        assert_eq!(cfg.group.r, 2);
        assert_eq!(cfg.group.labels, vec!["G1", "G2"]);
        assert_eq!(cfg.ambient.as_ref().unwrap().labels.len(), 3);
        assert_eq!(cfg.group.field.degree(), 2);
        assert_eq!(cfg.group.field.phi1_root_index(), 2);
    }

    #[test]
    fn round_trips_through_canonical_print() {
        let cfg = parse_config(RATIONAL_DIAGONAL).unwrap();
        let printed = cfg.canonical_text().to_string();
        let again = parse_config(&printed).unwrap();
        assert_eq!(again.canonical_text(), printed);
        assert_eq!(again.config_hash(), cfg.config_hash());
    }

    #[test]
    fn det_and_integrality_diagnostics() {
        let bad_det = "field.minpoly = x^2 - 2\ngroup.r = 2\ngen.B = [[1, 1], [0, 2]]\n";
        assert!(matches!(
            parse_config(bad_det),
            Err(ConfigError::DetNotOne { label }) if label == "B"
        ));
        let bad_integral = "field.minpoly = x^2 - 2\ngroup.r = 2\ngen.C = [[1, t/2], [0, 1]]\n";
        assert!(matches!(
            parse_config(bad_integral),
            Err(ConfigError::NotIntegral { label }) if label == "C"
        ));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let text = "field.minpoly = x^2 - 2\ngroup.r = 2\ngen.G = [[1, 1], [0, y]]\n";
        match parse_config(text) {
            Err(ConfigError::Parse { line, msg }) => {
                assert_eq!(line, 3);
                assert!(msg.contains("unknown symbol"), "{}", msg);
            }
            other => panic!("expected parse error, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn quaternion_configuration() {
        let text = "\
field.minpoly = x^3 - 3*x - 1
group.r = 2
quat.a = t^2 - 1
quat.b = t - 1
qgen.U = (t, 1, 0, 0)
qgen.V = (1 + t, 0, 1 + t, 0)
";
        let cfg = parse_config(text).unwrap();
        assert!(cfg.group.algebra.is_some());
        assert_eq!(cfg.group.generators.len(), 2);
        let printed = cfg.canonical_text().to_string();
        let again = parse_config(&printed).unwrap();
        assert_eq!(again.canonical_text(), printed);

        let bad_norm = "\
field.minpoly = x^3 - 3*x - 1
group.r = 2
quat.a = t^2 - 1
quat.b = t - 1
qgen.W = (t, 0, 0, 0)
";
        assert!(matches!(
            parse_config(bad_norm),
            Err(ConfigError::NormNotOne { label }) if label == "W"
        ));
    }

    #[test]
    fn phi1_override_is_respected_and_printed() {
        let text = "field.minpoly = x^2 - 2\nfield.phi1_root = 1\ngroup.r = 2\ngen.G = [[2, 1], [1, 1]]\n";
        let cfg = parse_config(text).unwrap();
        assert_eq!(cfg.group.field.phi1_root_index(), 1);
        assert!(cfg.canonical_text().contains("field.phi1_root = 1"));
    }
}
