//! Structure predictions and the consistency audits.
//!
//! Given the trace-field block size k and the per-place discreteness
//! verdicts, the predicted projective limit set has dimension r/k - 1 and
//! the predicted Furstenberg limit set is a product of a Fuchsian limit set
//! (when some projection is discrete) with m/k circle factors, the whole
//! Furstenberg boundary in the Zariski-dense all-nondiscrete case. Unknown
//! verdicts propagate as a range for m rather than being guessed.

use super::discrete::{DiscretenessReport, PlaceStatus, TraceFieldProfile};
use super::{ElementSet, EnumerationOptions, GroupConfig, GroupElement, LimitSetError, Word};
use crate::isometry::{classify_float, IsometryError, IsometryKind, TupleClass, TupleKind};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::fmt;

/// Predicted shape of the limit sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructurePrediction {
    pub r: usize,
    pub k: usize,
    /// Range for the number of nondiscrete projections; equal endpoints
    /// when every place is certified.
    pub m_min: usize,
    pub m_max: usize,
    pub dim_p: usize,
    pub furstenberg_descriptor: String,
    pub zariski_blocks: Vec<usize>,
}

impl fmt::Display for StructurePrediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "k = {}", self.k)?;
        if self.m_min == self.m_max {
            writeln!(f, "m = {}", self.m_min)?;
        } else {
            writeln!(f, "m = {}..{}", self.m_min, self.m_max)?;
        }
        writeln!(f, "dim_P = {}", self.dim_p)?;
        writeln!(f, "F = {}", self.furstenberg_descriptor)?;
        write!(
            f,
            "zariski_blocks = [{}]",
            self.zariski_blocks
                .iter()
                .map(|b| b.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        )
    }
}

/// Combine the trace-field profile with the discreteness report.
pub fn predict_structure(
    cfg: &GroupConfig,
    profile: &TraceFieldProfile,
    report: &DiscretenessReport,
) -> Result<StructurePrediction, LimitSetError> {
    let r = cfg.r;
    let k = profile.k;
    if r % k != 0 {
        return Err(LimitSetError::InconsistentInput(format!(
            "block size k = {} does not divide the rank r = {}",
            k, r
        )));
    }
    let m_min = report.count(PlaceStatus::NondiscreteCertified);
    let unknowns = report.count(PlaceStatus::Unknown);
    let m_max = m_min + unknowns;
    let all_certified = unknowns == 0;
    if all_certified && m_min % k != 0 {
        return Err(LimitSetError::InconsistentInput(format!(
            "certified nondiscrete count m = {} is not divisible by k = {}",
            m_min, k
        )));
    }
    let dim_p = r / k - 1;
    let has_discrete = report.count(PlaceStatus::DiscreteCertified) > 0;
    let descriptor = if has_discrete {
        let j = report
            .places
            .iter()
            .find(|p| p.status == PlaceStatus::DiscreteCertified)
            .map(|p| p.place)
            .unwrap();
        if all_certified {
            format!("L_(p_{}(Γ)) × (∂H²)^{}", j, m_min / k)
        } else {
            format!(
                "L_(p_{}(Γ)) × (∂H²)^(m/k), m ∈ [{}, {}]",
                j, m_min, m_max
            )
        }
    } else if all_certified && m_min == r {
        if k == 1 {
            "full Furstenberg boundary (∂H²)^r".to_string()
        } else {
            format!("(∂H²)^{}", m_min / k)
        }
    } else if all_certified {
        format!("(∂H²)^{}", m_min / k)
    } else {
        format!(
            "undetermined: (∂H²)^(m/k) with m ∈ [{}, {}], times a Fuchsian limit set if some unknown projection is discrete",
            m_min, m_max
        )
    };
    // descriptor-level restatement of dim F <= 1 + dim P for certified input
    if all_certified {
        let dim_f_upper = m_max / k + if has_discrete { 1 } else { 0 };
        if dim_f_upper > 1 + dim_p {
            return Err(LimitSetError::InconsistentInput(format!(
                "predicted dim F = {} exceeds 1 + dim P = {}",
                dim_f_upper,
                1 + dim_p
            )));
        }
    }
    Ok(StructurePrediction {
        r,
        k,
        m_min,
        m_max,
        dim_p,
        furstenberg_descriptor: descriptor,
        zariski_blocks: vec![k; r / k],
    })
}

// ---------------------------------------------------------------------------
// the mixed-upgrade search

#[derive(Clone, Debug)]
pub struct MixedUpgradeWitness {
    pub m: u32,
    pub element: GroupElement,
    pub class: TupleClass,
}

/// Search for the smallest m <= maxm such that g^m * h is hyperbolic on
/// components 1..=kk and elliptic on component kk+1 (when kk < r). The
/// input g must be mixed with components 1..kk-1 hyperbolic and kk..r
/// elliptic of infinite order, and h must be hyperbolic.
pub fn mixed_upgrade_search(
    cfg: &GroupConfig,
    g: &GroupElement,
    h: &GroupElement,
    kk: usize,
    maxm: u32,
) -> Result<MixedUpgradeWitness, LimitSetError> {
    let r = cfg.r;
    let bound = cfg.order_bound();
    if kk < 1 || kk > r {
        return Err(LimitSetError::PreconditionViolated(format!(
            "index kk = {} outside 1..={}",
            kk, r
        )));
    }
    let class_g = g.classify(r, bound);
    for (i, c) in class_g.per_component.iter().enumerate() {
        let place = i + 1;
        if place < kk && c.kind != IsometryKind::Hyperbolic {
            return Err(LimitSetError::PreconditionViolated(format!(
                "component {} of g must be hyperbolic, found {}",
                place, c.kind
            )));
        }
        if place >= kk && c.kind != IsometryKind::EllipticInfinite {
            return Err(LimitSetError::PreconditionViolated(format!(
                "component {} of g must be elliptic of infinite order, found {}",
                place, c.kind
            )));
        }
    }
    let class_h = h.classify(r, bound);
    if class_h.kind != TupleKind::Hyperbolic {
        return Err(LimitSetError::PreconditionViolated(
            "h must be hyperbolic in every component".into(),
        ));
    }
    let mut power = g.identity_like();
    for m in 1..=maxm {
        power = power.mul(g);
        let candidate = power.mul(h);
        let class = candidate.classify(r, bound);
        let head_hyperbolic = class.per_component[..kk.min(r)]
            .iter()
            .all(|c| c.kind == IsometryKind::Hyperbolic);
        let tail_ok = if kk + 1 <= r {
            class.per_component[kk].kind.is_elliptic()
        } else {
            true
        };
        if head_hyperbolic && tail_ok {
            return Ok(MixedUpgradeWitness {
                m,
                element: candidate,
                class,
            });
        }
    }
    Err(LimitSetError::NotFound(maxm))
}

// ---------------------------------------------------------------------------
// audits

/// Check every enumerated element against the conjugate-type constraints:
/// identity and parabolic are all-or-nothing, finite elliptic order is
/// shared by every component, and an element with a hyperbolic or
/// infinite-elliptic component has only such components.
pub fn audit_phi_conjugate(cfg: &GroupConfig, set: &ElementSet) -> Result<(), String> {
    for (_, entry) in set.iter() {
        let kinds: Vec<IsometryKind> = entry.class.per_component.iter().map(|c| c.kind).collect();
        let any = |f: fn(&IsometryKind) -> bool| kinds.iter().any(f);
        let all = |f: fn(&IsometryKind) -> bool| kinds.iter().all(f);
        let word = cfg.format_word(&entry.word);
        if any(|k| *k == IsometryKind::Identity) && !all(|k| *k == IsometryKind::Identity) {
            return Err(format!("{}: identity component in a non-identity tuple", word));
        }
        if any(|k| *k == IsometryKind::Parabolic) && !all(|k| *k == IsometryKind::Parabolic) {
            return Err(format!("{}: parabolic component in a non-parabolic tuple", word));
        }
        let orders: Vec<u32> = kinds
            .iter()
            .filter_map(|k| match k {
                IsometryKind::EllipticFinite(m) => Some(*m),
                _ => None,
            })
            .collect();
        if !orders.is_empty() {
            if orders.len() != kinds.len() {
                return Err(format!(
                    "{}: finite-order elliptic component in a tuple with non-elliptic parts",
                    word
                ));
            }
            if orders.iter().any(|&m| m != orders[0]) {
                return Err(format!("{}: unequal finite elliptic orders", word));
            }
        }
        let free_kinds = |k: &IsometryKind| {
            matches!(k, IsometryKind::Hyperbolic | IsometryKind::EllipticInfinite)
        };
        if any(free_kinds) && !all(free_kinds) {
            return Err(format!(
                "{}: hyperbolic/infinite-elliptic tuple contains a torsion or parabolic component",
                word
            ));
        }
    }
    Ok(())
}

/// Every usable configuration must expose a hyperbolic tuple at a short
/// word length; configurations without one are rejected as unverifiable.
pub fn nonelementarity_precheck(
    cfg: &GroupConfig,
    max_len: usize,
) -> Result<(GroupElement, Word), LimitSetError> {
    let opts = EnumerationOptions::with_length(max_len);
    let set = super::enumerate_elements(cfg, &opts)?;
    set.iter()
        .filter(|(_, entry)| entry.class.kind == TupleKind::Hyperbolic)
        .min_by(|(_, a), (_, b)| a.word.shortlex_cmp(&b.word))
        .map(|(elt, entry)| (elt.clone(), entry.word.clone()))
        .ok_or(LimitSetError::NonelementaryPrecheckFailed(max_len))
}

/// Compare exact and floating classification kinds over a whole element
/// set. A floating refusal (the parabolic band) against an exact parabolic
/// is agreement: the band exists precisely to keep near-parabolic floats
/// from being misclassified. Returns the disagreements.
pub fn exact_float_agreement(cfg: &GroupConfig, set: &ElementSet) -> Vec<String> {
    let width = BigRational::new(BigInt::from(1), BigInt::from(10).pow(12));
    let bound = cfg.order_bound();
    let mut disagreements = Vec::new();
    for (elt, entry) in set.iter() {
        for place in 1..=cfg.r {
            let exact_kind = entry.class.per_component[place - 1].kind;
            let float_mob = match elt {
                GroupElement::Matrix(m) => m.evaluate(place, &width),
                GroupElement::Quaternion(_, _) => elt.evaluate(place),
            };
            let verdict = classify_float(&float_mob, bound);
            let agrees = match (&verdict, exact_kind) {
                (Ok(c), k) => c.kind == k,
                (Err(IsometryError::UndecidableOrder), IsometryKind::Parabolic) => true,
                (Err(_), _) => false,
            };
            if !agrees {
                disagreements.push(format!(
                    "{} at place {}: exact {} vs float {:?}",
                    cfg.format_word(&entry.word),
                    place,
                    exact_kind,
                    verdict.map(|c| c.kind)
                ));
            }
        }
    }
    disagreements
}
