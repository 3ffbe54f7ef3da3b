//! Trace-field invariants and discreteness heuristics.
//!
//! The trace field of the squares subgroup is generated by traces of
//! squared short words; its degree ratio against the ambient group is the
//! block size k of the Zariski closure. Discreteness per projection is
//! never guessed: a projection is certified nondiscrete by an exact
//! elliptic element of infinite order or by an exact Jørgensen violation
//! with a nonelementarity witness, certified discrete by an exact Schottky
//! certificate on a generating set, and left unknown otherwise.

use super::{ElementSet, GroupConfig, GroupElement, Letter, LimitSetError, Word};
use crate::isometry::{schottky_certificate_exact, ExactMobius, IsometryKind};
use crate::numfield::{subfield_dimension, FieldElement};
use std::cmp::Ordering;
use std::fmt;

/// Degrees of the trace fields of the squares subgroups, and their ratio k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceFieldProfile {
    pub subgroup_degree: usize,
    pub ambient_degree: usize,
    pub k: usize,
    /// Subgroup degree recomputed at each acting place; constant by
    /// construction (the embeddings are isomorphisms onto their images),
    /// recomputed as a guard.
    pub per_place_subgroup_degree: Vec<usize>,
}

/// Traces of w^2 over all freely reduced words w of length at most `len`.
fn squared_word_traces(cfg: &GroupConfig, len: usize) -> Vec<FieldElement> {
    let mut traces = Vec::new();
    let letters: Vec<(Letter, GroupElement)> = (0..cfg.generators.len() as u8)
        .flat_map(|i| {
            [
                (Letter { gen: i, inverse: false }, cfg.generators[i as usize].clone()),
                (Letter { gen: i, inverse: true }, cfg.generators[i as usize].inverse()),
            ]
        })
        .collect();
    let identity = cfg.generators[0].identity_like();
    let mut frontier: Vec<(GroupElement, Word)> = vec![(identity, Word::empty())];
    for _ in 0..len {
        let mut next = Vec::new();
        for (elt, word) in &frontier {
            for (letter, lg) in &letters {
                if word.0.last().map_or(false, |last| last.cancels(letter)) {
                    continue;
                }
                let child = elt.mul(lg);
                traces.push(child.mul(&child).trace());
                next.push((child, word.push(*letter)));
            }
        }
        frontier = next;
    }
    traces
}

fn trace_field_degree(cfg: &GroupConfig, len: usize) -> usize {
    let mut traces = squared_word_traces(cfg, len);
    if traces.is_empty() {
        traces.push(FieldElement::one(cfg.field.clone()));
    }
    subfield_dimension(&traces).dimension
}

/// Degree of the trace field of the squares subgroup (words of length <= 3,
/// with a stabilization check at length 4), the same for the ambient group,
/// and the ratio k.
pub fn trace_field_profile(
    cfg: &GroupConfig,
    ambient: &GroupConfig,
) -> Result<TraceFieldProfile, LimitSetError> {
    if *cfg.field != *ambient.field {
        return Err(LimitSetError::InconsistentInput(
            "subgroup and ambient group must share the number field".into(),
        ));
    }
    let sub3 = trace_field_degree(cfg, 3);
    let sub4 = trace_field_degree(cfg, 4);
    if sub4 != sub3 {
        return Err(LimitSetError::NotStabilized);
    }
    let amb3 = trace_field_degree(ambient, 3);
    let amb4 = trace_field_degree(ambient, 4);
    if amb4 != amb3 {
        return Err(LimitSetError::NotStabilized);
    }
    if amb3 % sub3 != 0 {
        // the subgroup trace field embeds in the ambient one, so a
        // non-dividing degree means one of the word sets under-generates
        return Err(LimitSetError::NotStabilized);
    }
    // per-place recomputation: the trace elements are the same abstract
    // field elements at every place, so this is an identity check
    let per_place: Vec<usize> = (1..=cfg.r).map(|_| trace_field_degree(cfg, 3)).collect();
    if per_place.iter().any(|&d| d != sub3) {
        return Err(LimitSetError::InconsistentInput(
            "trace-field degree varied across places".into(),
        ));
    }
    Ok(TraceFieldProfile {
        subgroup_degree: sub3,
        ambient_degree: amb3,
        k: amb3 / sub3,
        per_place_subgroup_degree: per_place,
    })
}

// ---------------------------------------------------------------------------
// Jørgensen machinery

/// tr[A,B] through the Fricke identity
/// tr[A,B] = tr(A)^2 + tr(B)^2 + tr(AB)^2 - tr(A) tr(B) tr(AB) - 2,
/// which is invariant under the projective sign choices of A and B.
pub fn commutator_trace(a: &GroupElement, b: &GroupElement) -> FieldElement {
    let ta = a.trace();
    let tb = b.trace();
    let tab = a.mul(b).trace();
    let two = FieldElement::from_int(ta.field().clone(), 2);
    ta.square()
        .add(&tb.square())
        .add(&tab.square())
        .sub(&ta.mul(&tb).mul(&tab))
        .sub(&two)
}

/// The Jørgensen quantity |tr^2(A) - 4| + |tr[A,B] - 2| at a place, with
/// both absolute values resolved by exact signs, as a field element.
pub fn jorgensen_quantity(a: &GroupElement, b: &GroupElement, place: usize) -> FieldElement {
    let field = a.field();
    let four = FieldElement::from_int(field.clone(), 4);
    let two = FieldElement::from_int(field.clone(), 2);
    let u = a.trace().square().sub(&four);
    let v = commutator_trace(a, b).sub(&two);
    let abs_at = |e: FieldElement| match e.sign_at(place) {
        Ordering::Less => e.neg(),
        _ => e,
    };
    abs_at(u).add(&abs_at(v))
}

/// Strict violation of the Jørgensen inequality at a place.
pub fn jorgensen_violates(a: &GroupElement, b: &GroupElement, place: usize) -> bool {
    let one = FieldElement::one(a.field());
    jorgensen_quantity(a, b, place).sub(&one).sign_at(place) == Ordering::Less
}

fn is_hyperbolic_at(e: &GroupElement, place: usize) -> bool {
    let tr = e.trace();
    let two = FieldElement::from_int(tr.field().clone(), 2);
    tr.sub(&two).sign_at(place) == Ordering::Greater
        || tr.add(&two).sign_at(place) == Ordering::Less
}

/// Search words in {a, b} of length at most `len` for two hyperbolic
/// elements without a common fixed point at the place (tr of their
/// commutator differs from 2 exactly). Such a pair witnesses that <a, b>
/// projects to a nonelementary group there.
pub fn pair_nonelementarity_witness(
    a: &GroupElement,
    b: &GroupElement,
    place: usize,
    len: usize,
) -> Option<(Word, Word)> {
    let pair_cfg_letters: Vec<(Letter, GroupElement)> = vec![
        (Letter { gen: 0, inverse: false }, a.clone()),
        (Letter { gen: 0, inverse: true }, a.inverse()),
        (Letter { gen: 1, inverse: false }, b.clone()),
        (Letter { gen: 1, inverse: true }, b.inverse()),
    ];
    let mut hyperbolics: Vec<(GroupElement, Word)> = Vec::new();
    let identity = a.identity_like();
    let mut frontier: Vec<(GroupElement, Word)> = vec![(identity, Word::empty())];
    for _ in 0..len {
        let mut next = Vec::new();
        for (elt, word) in &frontier {
            for (letter, lg) in &pair_cfg_letters {
                if word.0.last().map_or(false, |last| last.cancels(letter)) {
                    continue;
                }
                let child = elt.mul(lg);
                let child_word = word.push(*letter);
                if is_hyperbolic_at(&child, place) {
                    hyperbolics.push((child.clone(), child_word.clone()));
                }
                next.push((child, child_word));
            }
        }
        frontier = next;
    }
    let two = FieldElement::from_int(a.field(), 2);
    for i in 0..hyperbolics.len() {
        for j in (i + 1)..hyperbolics.len() {
            let (w1, word1) = &hyperbolics[i];
            let (w2, word2) = &hyperbolics[j];
            if commutator_trace(w1, w2) != two {
                return Some((word1.clone(), word2.clone()));
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// discreteness report

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlaceStatus {
    DiscreteCertified,
    NondiscreteCertified,
    Unknown,
}

impl fmt::Display for PlaceStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PlaceStatus::DiscreteCertified => write!(f, "DiscreteCertified"),
            PlaceStatus::NondiscreteCertified => write!(f, "NondiscreteCertified"),
            PlaceStatus::Unknown => write!(f, "Unknown"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlaceReport {
    pub place: usize,
    pub status: PlaceStatus,
    pub evidence: String,
}

#[derive(Clone, Debug)]
pub struct DiscretenessReport {
    pub places: Vec<PlaceReport>,
}

impl DiscretenessReport {
    pub fn count(&self, status: PlaceStatus) -> usize {
        self.places.iter().filter(|p| p.status == status).count()
    }
}

/// Per-place discreteness verdicts for the projections of the group.
pub fn discreteness_report(cfg: &GroupConfig, set: &ElementSet) -> DiscretenessReport {
    let places = (1..=cfg.r)
        .map(|place| {
            // an exact elliptic element of infinite order in the projection
            // certifies nondiscreteness outright
            for (_, entry) in set.iter() {
                if entry.class.per_component[place - 1].kind == IsometryKind::EllipticInfinite {
                    return PlaceReport {
                        place,
                        status: PlaceStatus::NondiscreteCertified,
                        evidence: format!(
                            "elliptic element of infinite order: {}",
                            cfg.format_word(&entry.word)
                        ),
                    };
                }
            }
            // exact Jørgensen violation on a generator pair, with a
            // nonelementarity witness for that pair
            for i in 0..cfg.generators.len() {
                for j in (i + 1)..cfg.generators.len() {
                    let a = &cfg.generators[i];
                    let b = &cfg.generators[j];
                    if jorgensen_violates(a, b, place) {
                        if let Some((w1, w2)) = pair_nonelementarity_witness(a, b, place, 4) {
                            let q = jorgensen_quantity(a, b, place);
                            return PlaceReport {
                                place,
                                status: PlaceStatus::NondiscreteCertified,
                                evidence: format!(
                                    "Jorgensen violation on ({}, {}): quantity {} < 1; \
                                     nonelementarity witness words over (A, B): {}, {}",
                                    cfg.labels[i], cfg.labels[j], q, w1, w2
                                ),
                            };
                        }
                    }
                }
            }
            // exact Schottky certificate on the generating set
            if let Some(evidence) = generating_schottky_evidence(cfg, place) {
                return PlaceReport {
                    place,
                    status: PlaceStatus::DiscreteCertified,
                    evidence,
                };
            }
            PlaceReport {
                place,
                status: PlaceStatus::Unknown,
                evidence: "no certificate found".into(),
            }
        })
        .collect();
    DiscretenessReport { places }
}

/// Try the exact isometric-circle certificate on the full generating set,
/// conjugating any infinity-fixing generator away by an exact integer
/// inversion conjugacy. Matrix configurations only; the quaternion avatars
/// have no exact circle data in the field.
fn generating_schottky_evidence(cfg: &GroupConfig, place: usize) -> Option<String> {
    let mats: Option<Vec<ExactMobius>> = cfg
        .generators
        .iter()
        .map(|g| match g {
            GroupElement::Matrix(m) => Some(m.clone()),
            GroupElement::Quaternion(_, _) => None,
        })
        .collect();
    let mats = mats?;
    for p in 0..=10i64 {
        let conjugated: Vec<ExactMobius> = if p == 0 {
            mats.clone()
        } else {
            let field = cfg.field.clone();
            let t = ExactMobius::new(
                FieldElement::zero(field.clone()),
                FieldElement::one(field.clone()),
                FieldElement::from_int(field.clone(), -1),
                FieldElement::from_int(field.clone(), p),
            )
            .expect("det is one");
            let ti = t.inverse();
            mats.iter().map(|m| t.mul(m).mul(&ti)).collect()
        };
        if conjugated.iter().any(|m| m.c.is_zero()) {
            continue;
        }
        match schottky_certificate_exact(&conjugated, place) {
            Ok(true) => {
                return Some(if p == 0 {
                    "exact Schottky certificate on the generating set".to_string()
                } else {
                    format!(
                        "exact Schottky certificate on the generating set conjugated by \
                         z -> 1/({} - z)",
                        p
                    )
                });
            }
            Ok(false) => return None,
            Err(_) => continue,
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limitsets::tests::{
        exact, generic_config, hilbert_ambient, mixed_config, rational_diagonal_config,
        sqrt2_field,
    };
    use crate::limitsets::{enumerate_elements, EnumerationOptions, GroupConfig, GroupElement};
    use crate::numfield::FieldElement;
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use std::sync::Arc;

    #[test]
    fn trace_field_of_rational_diagonal_is_rational() {
        let cfg = rational_diagonal_config();
        let ambient = hilbert_ambient();
        let profile = trace_field_profile(&cfg, &ambient).unwrap();
        assert_eq!(profile.subgroup_degree, 1);
        assert_eq!(profile.ambient_degree, 2);
        assert_eq!(profile.k, 2);
    }

    #[test]
    fn trace_field_of_generic_pair_is_full() {
        // oracle: tr(E^2) = 6 is rational but tr((EA)^2) = 17 + 6t is not
        let cfg = generic_config();
        let e = &cfg.generators[0];
        let a = &cfg.generators[1];
        let te2 = e.mul(e).trace();
        assert_eq!(te2.as_rational(), Some(&BigRational::from_integer(BigInt::from(6))));
        let ea = e.mul(a);
        let tea2 = ea.mul(&ea).trace();
        assert!(tea2.as_rational().is_none());
        assert_eq!(subfield_dimension(&[tea2]).dimension, 2);

        let profile = trace_field_profile(&cfg, &hilbert_ambient()).unwrap();
        assert_eq!(profile.subgroup_degree, 2);
        assert_eq!(profile.k, 1);
    }

    #[test]
    fn trace_field_of_group_against_itself() {
        let cfg = generic_config();
        let profile = trace_field_profile(&cfg, &cfg).unwrap();
        assert_eq!(profile.k, 1);
    }

    #[test]
    fn jorgensen_parabolic_pair_oracle() {
        // g = [[1,1],[0,1]], h = [[1,0],[c,1]]: tr[g,h] = 2 + c^2 exactly
        let f = sqrt2_field();
        let g = GroupElement::Matrix(exact(&f, [[1, 1], [0, 1]]));
        for (num, den) in [(1i64, 4i64), (1, 2), (2, 3), (3, 5), (1, 7)] {
            let c = BigRational::new(BigInt::from(num), BigInt::from(den));
            let h_mat = crate::isometry::ExactMobius::new(
                FieldElement::one(f.clone()),
                FieldElement::zero(f.clone()),
                FieldElement::from_rational(f.clone(), c.clone()),
                FieldElement::one(f.clone()),
            )
            .unwrap();
            let h = GroupElement::Matrix(h_mat);
            // independent oracle: direct rational 2x2 multiplication
            let cc = &c * &c;
            let expected_comm_trace = BigRational::from_integer(BigInt::from(2)) + &cc;
            assert_eq!(
                commutator_trace(&g, &h).as_rational(),
                Some(&expected_comm_trace)
            );
            // quantity = |4 - 4| + |tr[g,h] - 2| = c^2
            let q = jorgensen_quantity(&g, &h, 1);
            assert_eq!(q.as_rational(), Some(&cc));
            assert_eq!(jorgensen_violates(&g, &h, 1), cc < BigRational::from_integer(1.into()));
        }
    }

    #[test]
    fn jorgensen_pair_certifies_nondiscreteness() {
        let f = sqrt2_field();
        let quarter = BigRational::new(BigInt::from(1), BigInt::from(4));
        let g = exact(&f, [[1, 1], [0, 1]]);
        let h = crate::isometry::ExactMobius::new(
            FieldElement::one(f.clone()),
            FieldElement::zero(f.clone()),
            FieldElement::from_rational(f.clone(), quarter),
            FieldElement::one(f.clone()),
        )
        .unwrap();
        let cfg = GroupConfig::for_analysis(
            f.clone(),
            2,
            vec!["P".into(), "Q".into()],
            vec![GroupElement::Matrix(g), GroupElement::Matrix(h)],
        )
        .unwrap();
        let set = enumerate_elements(&cfg, &EnumerationOptions::with_length(2)).unwrap();
        let report = discreteness_report(&cfg, &set);
        for p in &report.places {
            assert_eq!(p.status, PlaceStatus::NondiscreteCertified, "{:?}", p);
        }
        // the Jørgensen route itself certifies: violation plus witness
        let a = &cfg.generators[0];
        let b = &cfg.generators[1];
        assert!(jorgensen_violates(a, b, 1));
        assert!(pair_nonelementarity_witness(a, b, 1, 4).is_some());
    }

    #[test]
    fn mixed_generator_certifies_place_two() {
        let cfg = mixed_config();
        let set = enumerate_elements(&cfg, &EnumerationOptions::with_length(2)).unwrap();
        let report = discreteness_report(&cfg, &set);
        assert_eq!(report.places[1].status, PlaceStatus::NondiscreteCertified);
        assert!(report.places[1].evidence.contains("elliptic"));
    }

    #[test]
    fn schottky_certificate_certifies_discreteness() {
        // powers (2, 2) of the rational pair satisfy the exact certificate
        let f = sqrt2_field();
        let g = exact(&f, [[2, 1], [1, 1]]);
        let h = exact(&f, [[1, 1], [1, 2]]);
        let cfg = GroupConfig::new(
            f.clone(),
            2,
            vec!["G".into(), "H".into()],
            vec![
                GroupElement::Matrix(g.pow(2)),
                GroupElement::Matrix(h.pow(2)),
            ],
        )
        .unwrap();
        let set = enumerate_elements(&cfg, &EnumerationOptions::with_length(1)).unwrap();
        let report = discreteness_report(&cfg, &set);
        for p in &report.places {
            assert_eq!(p.status, PlaceStatus::DiscreteCertified, "{:?}", p);
        }
    }

    #[test]
    fn diagonal_generators_need_exact_conjugation() {
        // E fixes infinity; the certificate search must conjugate exactly
        let f = sqrt2_field();
        let e = crate::limitsets::tests::gen_e(&f);
        let cfg = GroupConfig::new(
            f.clone(),
            2,
            vec!["E".into(), "A".into()],
            vec![
                GroupElement::Matrix(e.pow(3)),
                GroupElement::Matrix(exact(&f, [[2, 1], [1, 1]]).pow(3)),
            ],
        )
        .unwrap();
        let set = enumerate_elements(&cfg, &EnumerationOptions::with_length(1)).unwrap();
        let report = discreteness_report(&cfg, &set);
        // high powers shrink the circles enough for the exact certificate
        assert_eq!(report.places[0].status, PlaceStatus::DiscreteCertified);
        assert!(report.places[0].evidence.contains("conjugated"));
    }

    #[test]
    fn ambient_field_mismatch_is_rejected() {
        let cfg = rational_diagonal_config();
        let other = {
            let f = crate::numfield::make_field(crate::numfield::poly::QPoly::new(
                [-3i64, 0, 1]
                    .iter()
                    .map(|&c| BigRational::from_integer(BigInt::from(c)))
                    .collect(),
            ))
            .unwrap();
            let g = crate::isometry::ExactMobius::identity(f.clone());
            GroupConfig::for_analysis(
                Arc::clone(&f),
                2,
                vec!["I".into()],
                vec![GroupElement::Matrix(g)],
            )
            .unwrap()
        };
        assert!(trace_field_profile(&cfg, &other).is_err());
    }
}
