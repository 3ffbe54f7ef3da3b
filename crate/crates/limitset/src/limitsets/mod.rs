//! Finitely generated subgroups and their limit-set samplers: word
//! enumeration with exact deduplication, projective and Furstenberg
//! sampling, trace-field invariants, discreteness certificates and the
//! block-structure predictions.
//!
//! Groups come in two exact flavors behind one element type: matrices in
//! SL(2, K) (the split, Hilbert-modular style configuration) and norm-one
//! quaternions of a division algebra. Both multiply, invert, dedup and
//! classify exactly; floating matrices appear only as per-place avatars for
//! boundary geometry.

pub mod discrete;
pub mod predict;
pub mod samplers;

use crate::isometry::{
    classify_exact_at_places, exact_direction_from_trace, Direction, IsometryError, IsometryTuple,
    Mobius, TupleClass,
};
use crate::numfield::{FieldElement, NumberField, NumFieldError};
use crate::quatalg::{
    matrix_embedding, order_membership, quat_mul, reduced_norm, reduced_trace, Quaternion,
    QuaternionAlgebra,
};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub use crate::isometry::ExactMobius;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LimitSetError {
    #[error("enumeration exceeded the element budget of {0}")]
    BudgetExceeded(usize),
    #[error("trace field did not stabilize at the probing word length; rerun with a larger bound")]
    NotStabilized,
    #[error("no witness found within the search bound {0}")]
    NotFound(u32),
    #[error("inconsistent input: {0}")]
    InconsistentInput(String),
    #[error("sample is empty")]
    EmptySample,
    #[error("rank {0} is not supported by this operation")]
    UnsupportedRank(usize),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("no hyperbolic tuple found at word length <= {0}; configuration rejected as unverifiable")]
    NonelementaryPrecheckFailed(usize),
    #[error(transparent)]
    Isometry(#[from] IsometryError),
    #[error(transparent)]
    Field(#[from] NumFieldError),
}

// ---------------------------------------------------------------------------
// words

/// One letter of a reduced word: a generator index and an inversion flag.
/// The derived order (index, then plain before inverse) is the alphabet
/// order used by every lexicographic tie-break.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: u8,
    pub inverse: bool,
}

impl Letter {
    pub fn cancels(&self, other: &Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }
}

/// A freely reduced word over the generator alphabet.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&self, l: Letter) -> Word {
        let mut v = self.0.clone();
        v.push(l);
        Word(v)
    }

    /// Shortlex: length first, then the alphabet order.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

// ---------------------------------------------------------------------------
// group elements

/// An exact group element: a unit-determinant matrix over the field, or a
/// norm-one quaternion of a fixed algebra. Both carry the canonical
/// projective sign, so equality and ordering are PSL-level.
#[derive(Clone, Debug)]
pub enum GroupElement {
    Matrix(ExactMobius),
    Quaternion(Arc<QuaternionAlgebra>, Quaternion),
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (GroupElement::Matrix(a), GroupElement::Matrix(b)) => a == b,
            (GroupElement::Quaternion(_, a), GroupElement::Quaternion(_, b)) => a == b,
            _ => false,
        }
    }
}
impl Eq for GroupElement {}

impl PartialOrd for GroupElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for GroupElement {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GroupElement::Matrix(a), GroupElement::Matrix(b)) => a.cmp(b),
            (GroupElement::Quaternion(_, a), GroupElement::Quaternion(_, b)) => a.cmp(b),
            (GroupElement::Matrix(_), GroupElement::Quaternion(_, _)) => Ordering::Less,
            (GroupElement::Quaternion(_, _), GroupElement::Matrix(_)) => Ordering::Greater,
        }
    }
}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            GroupElement::Matrix(m) => {
                0u8.hash(state);
                m.hash(state);
            }
            GroupElement::Quaternion(_, q) => {
                1u8.hash(state);
                q.hash(state);
            }
        }
    }
}

fn canonical_quaternion(q: Quaternion) -> Quaternion {
    let flip = [&q.x, &q.y, &q.z, &q.w]
        .iter()
        .find(|e| !e.is_zero())
        .map_or(false, |e| e.sign_at(1) == Ordering::Less);
    if flip {
        q.neg()
    } else {
        q
    }
}

impl GroupElement {
    pub fn quaternion(alg: Arc<QuaternionAlgebra>, q: Quaternion) -> Self {
        GroupElement::Quaternion(alg, canonical_quaternion(q))
    }

    pub fn field(&self) -> Arc<NumberField> {
        match self {
            GroupElement::Matrix(m) => m.field().clone(),
            GroupElement::Quaternion(alg, _) => alg.field().clone(),
        }
    }

    pub fn identity_like(&self) -> GroupElement {
        match self {
            GroupElement::Matrix(m) => GroupElement::Matrix(ExactMobius::identity(m.field().clone())),
            GroupElement::Quaternion(alg, _) => {
                GroupElement::Quaternion(alg.clone(), Quaternion::one(alg.field().clone()))
            }
        }
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        match (self, other) {
            (GroupElement::Matrix(a), GroupElement::Matrix(b)) => GroupElement::Matrix(a.mul(b)),
            (GroupElement::Quaternion(alg, a), GroupElement::Quaternion(_, b)) => {
                GroupElement::Quaternion(alg.clone(), canonical_quaternion(quat_mul(alg, a, b)))
            }
            _ => panic!("mixed element kinds in one group"),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        match self {
            GroupElement::Matrix(m) => GroupElement::Matrix(m.inverse()),
            GroupElement::Quaternion(alg, q) => {
                GroupElement::Quaternion(alg.clone(), canonical_quaternion(q.conjugate()))
            }
        }
    }

    pub fn pow(&self, e: u32) -> GroupElement {
        let mut acc = self.identity_like();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn is_projective_identity(&self) -> bool {
        match self {
            GroupElement::Matrix(m) => m.is_projective_identity(),
            GroupElement::Quaternion(_, q) => q.is_one(),
        }
    }

    /// Trace of the projective representative (of the matrix embedding, for
    /// quaternions); classification uses only its absolute value.
    pub fn trace(&self) -> FieldElement {
        match self {
            GroupElement::Matrix(m) => m.trace(),
            GroupElement::Quaternion(_, q) => reduced_trace(q),
        }
    }

    /// Floating avatar at a place.
    pub fn evaluate(&self, place: usize) -> Mobius {
        match self {
            GroupElement::Matrix(m) => m.evaluate_default(place),
            GroupElement::Quaternion(alg, q) => {
                let e = matrix_embedding(alg, q, place).expect("place must be unramified");
                Mobius::new(e[0][0], e[0][1], e[1][0], e[1][1]).expect("unit quaternion embeds with det 1")
            }
        }
    }

    /// Exact classification of all components 1..=r.
    ///
    /// The finite-order power scan multiplies without re-canonicalizing the
    /// projective sign: the plus-or-minus-identity test is sign-blind, and
    /// canonicalization costs a sign query per step.
    pub fn classify(&self, r: usize, finite_order_bound: u32) -> TupleClass {
        let places: Vec<usize> = (1..=r).collect();
        let mut scan: Option<RawPowerScan> = None;
        let per = classify_exact_at_places(
            &self.trace(),
            self.is_projective_identity(),
            &places,
            finite_order_bound,
            &mut |m| {
                scan.get_or_insert_with(|| RawPowerScan::new(self))
                    .is_projectively_one_at(m)
            },
        );
        TupleClass::from_components(per)
    }

    /// Exact translation direction given a classification.
    pub fn direction(&self, class: &TupleClass) -> Result<Direction, IsometryError> {
        exact_direction_from_trace(&self.trace(), class)
    }

    fn raw_entries(&self) -> Vec<FieldElement> {
        match self {
            GroupElement::Matrix(m) => vec![m.a.clone(), m.b.clone(), m.c.clone(), m.d.clone()],
            GroupElement::Quaternion(_, q) => {
                vec![q.x.clone(), q.y.clone(), q.z.clone(), q.w.clone()]
            }
        }
    }

    /// Tuple view for boundary geometry: floating components, exact source
    /// retained for matrix avatars.
    pub fn tuple(&self, r: usize) -> IsometryTuple {
        IsometryTuple {
            components: (1..=r).map(|p| self.evaluate(p)).collect(),
            source: match self {
                GroupElement::Matrix(m) => Some(m.clone()),
                GroupElement::Quaternion(_, _) => None,
            },
        }
    }
}

/// Power scan over raw (sign-uncanonicalized) products; the identity test
/// accepts both signs, so no sign queries are spent on intermediate steps.
struct RawPowerScan {
    base: GroupElement,
    acc: Vec<FieldElement>,
    at: u32,
}

impl RawPowerScan {
    fn new(base: &GroupElement) -> Self {
        RawPowerScan {
            base: base.clone(),
            acc: base.raw_entries(),
            at: 1,
        }
    }

    fn step(&mut self) {
        match &self.base {
            GroupElement::Matrix(m) => {
                let [a, b, c, d] = [&self.acc[0], &self.acc[1], &self.acc[2], &self.acc[3]];
                self.acc = vec![
                    a.mul(&m.a).add(&b.mul(&m.c)),
                    a.mul(&m.b).add(&b.mul(&m.d)),
                    c.mul(&m.a).add(&d.mul(&m.c)),
                    c.mul(&m.b).add(&d.mul(&m.d)),
                ];
            }
            GroupElement::Quaternion(alg, q) => {
                let acc = Quaternion::new(
                    self.acc[0].clone(),
                    self.acc[1].clone(),
                    self.acc[2].clone(),
                    self.acc[3].clone(),
                );
                let next = quat_mul(alg, &acc, q);
                self.acc = vec![next.x, next.y, next.z, next.w];
            }
        }
        self.at += 1;
    }

    fn is_projectively_one_at(&mut self, m: u32) -> bool {
        assert!(m >= self.at, "power scan must advance monotonically");
        while self.at < m {
            self.step();
        }
        match &self.base {
            GroupElement::Matrix(_) => {
                let [a, b, c, d] = [&self.acc[0], &self.acc[1], &self.acc[2], &self.acc[3]];
                b.is_zero() && c.is_zero() && a == d && (a.is_one() || a.neg().is_one())
            }
            GroupElement::Quaternion(_, _) => {
                self.acc[1].is_zero()
                    && self.acc[2].is_zero()
                    && self.acc[3].is_zero()
                    && (self.acc[0].is_one() || self.acc[0].neg().is_one())
            }
        }
    }
}

// ---------------------------------------------------------------------------
// group configurations

/// A finitely generated subgroup presentation: field, rank, labeled exact
/// generators, and the quaternion algebra when the generators live in one.
#[derive(Clone, Debug)]
pub struct GroupConfig {
    pub field: Arc<NumberField>,
    pub r: usize,
    pub labels: Vec<String>,
    pub generators: Vec<GroupElement>,
    pub algebra: Option<Arc<QuaternionAlgebra>>,
}

impl GroupConfig {
    /// Validating constructor: rank bounds, label sanity, generator
    /// integrality (entries or coordinates in the standard order), norm
    /// one for quaternions, and unramified places 1..=r.
    pub fn new(
        field: Arc<NumberField>,
        r: usize,
        labels: Vec<String>,
        generators: Vec<GroupElement>,
    ) -> Result<Self, LimitSetError> {
        let cfg = Self::for_analysis(field, r, labels, generators)?;
        for (label, g) in cfg.labels.iter().zip(&cfg.generators) {
            let integral = match g {
                GroupElement::Matrix(m) => {
                    m.a.is_power_basis_integral()
                        && m.b.is_power_basis_integral()
                        && m.c.is_power_basis_integral()
                        && m.d.is_power_basis_integral()
                }
                GroupElement::Quaternion(_, q) => order_membership(q),
            };
            if !integral {
                return Err(LimitSetError::PreconditionViolated(format!(
                    "generator {} is not integral in the standard order",
                    label
                )));
            }
        }
        Ok(cfg)
    }

    /// Constructor without the integrality requirement, for analyzing
    /// subgroups that do not sit inside the standard order (discreteness
    /// heuristics apply to any subgroup of the isometry group).
    pub fn for_analysis(
        field: Arc<NumberField>,
        r: usize,
        labels: Vec<String>,
        generators: Vec<GroupElement>,
    ) -> Result<Self, LimitSetError> {
        if r < 2 || r > field.degree() {
            return Err(LimitSetError::InconsistentInput(format!(
                "rank must satisfy 2 <= r <= field degree; got r = {}, degree = {}",
                r,
                field.degree()
            )));
        }
        if labels.len() != generators.len() || generators.is_empty() {
            return Err(LimitSetError::InconsistentInput(
                "need one label per generator and at least one generator".into(),
            ));
        }
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            if l.is_empty() || !seen.insert(l.clone()) {
                return Err(LimitSetError::InconsistentInput(format!(
                    "labels must be unique and nonempty; offending label: {:?}",
                    l
                )));
            }
        }
        let mut algebra = None;
        for g in &generators {
            if let GroupElement::Quaternion(alg, q) = g {
                if !reduced_norm(alg, q).is_one() {
                    return Err(LimitSetError::PreconditionViolated(
                        "quaternion generator does not have reduced norm one".into(),
                    ));
                }
                for place in 1..=r {
                    if alg.ramified_at(place) {
                        return Err(LimitSetError::InconsistentInput(format!(
                            "place {} is ramified but lies in the acting range 1..={}",
                            place, r
                        )));
                    }
                }
                algebra = Some(alg.clone());
            }
        }
        let kinds_mixed = generators
            .iter()
            .any(|g| matches!(g, GroupElement::Matrix(_)))
            && generators
                .iter()
                .any(|g| matches!(g, GroupElement::Quaternion(_, _)));
        if kinds_mixed {
            return Err(LimitSetError::InconsistentInput(
                "generators must be all matrices or all quaternions".into(),
            ));
        }
        Ok(GroupConfig {
            field,
            r,
            labels,
            generators,
            algebra,
        })
    }

    pub fn order_bound(&self) -> u32 {
        crate::isometry::default_order_bound(self.field.degree())
    }

    /// Render a word with the configured labels.
    pub fn format_word(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.0.iter()
            .map(|l| {
                let base = &self.labels[l.gen as usize];
                if l.inverse {
                    format!("{}^-1", base)
                } else {
                    base.clone()
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Parse a word rendered by `format_word`.
    pub fn parse_word(&self, s: &str) -> Option<Word> {
        if s == "1" {
            return Some(Word::empty());
        }
        let mut letters = Vec::new();
        for part in s.split('*') {
            let (name, inverse) = match part.strip_suffix("^-1") {
                Some(base) => (base, true),
                None => (part, false),
            };
            let gen = self.labels.iter().position(|l| l == name)? as u8;
            letters.push(Letter { gen, inverse });
        }
        Some(Word(letters))
    }

    /// Evaluate a word to its exact element.
    pub fn evaluate_word(&self, w: &Word) -> GroupElement {
        let mut acc = self.generators[0].identity_like();
        for l in &w.0 {
            let g = &self.generators[l.gen as usize];
            let g = if l.inverse { g.inverse() } else { g.clone() };
            acc = acc.mul(&g);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// enumeration

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    pub max_word_length: usize,
    pub element_budget: usize,
    pub finite_order_bound: u32,
}

impl EnumerationOptions {
    pub fn with_length(max_word_length: usize) -> Self {
        EnumerationOptions {
            max_word_length,
            element_budget: 1_000_000,
            finite_order_bound: 0, // 0 = use the config default
        }
    }
}

#[derive(Clone, Debug)]
pub struct ElementEntry {
    pub word: Word,
    pub class: TupleClass,
}

/// The distinct values of all freely reduced words up to a length, keyed by
/// canonical exact element. Each entry carries its shortlex-least witness
/// word and the exact tuple classification.
#[derive(Clone, Debug)]
pub struct ElementSet {
    pub max_word_length: usize,
    pub elements: BTreeMap<GroupElement, ElementEntry>,
}

impl ElementSet {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&GroupElement, &ElementEntry)> {
        self.elements.iter()
    }
}

/// Breadth-first enumeration of freely reduced words with exact
/// deduplication.
///
/// Within each length the frontier is kept in lexicographic word order and
/// children are emitted in alphabet order, so the first word reaching an
/// element is its shortlex-least witness. Subtrees of duplicated values are
/// pruned; every value of a longer word through the pruned branch is still
/// reached through the retained shorter witness.
pub fn enumerate_elements(
    cfg: &GroupConfig,
    opts: &EnumerationOptions,
) -> Result<ElementSet, LimitSetError> {
    let bound = if opts.finite_order_bound == 0 {
        cfg.order_bound()
    } else {
        opts.finite_order_bound
    };
    let letters: Vec<(Letter, GroupElement)> = (0..cfg.generators.len() as u8)
        .flat_map(|i| {
            [
                (Letter { gen: i, inverse: false }, cfg.generators[i as usize].clone()),
                (Letter { gen: i, inverse: true }, cfg.generators[i as usize].inverse()),
            ]
        })
        .collect();
    let identity = cfg.generators[0].identity_like();
    let mut map: BTreeMap<GroupElement, Word> = BTreeMap::new();
    map.insert(identity.clone(), Word::empty());
    let mut frontier: Vec<(GroupElement, Word)> = vec![(identity, Word::empty())];
    for _ in 1..=opts.max_word_length {
        let mut next = Vec::new();
        for (elt, word) in &frontier {
            for (letter, lg) in &letters {
                if word.0.last().map_or(false, |last| last.cancels(letter)) {
                    continue;
                }
                let child = elt.mul(lg);
                let child_word = word.push(*letter);
                if let std::collections::btree_map::Entry::Vacant(e) = map.entry(child.clone()) {
                    e.insert(child_word.clone());
                    next.push((child, child_word));
                    if map.len() > opts.element_budget {
                        return Err(LimitSetError::BudgetExceeded(opts.element_budget));
                    }
                }
            }
        }
        frontier = next;
    }
    let elements = map
        .into_iter()
        .map(|(elt, word)| {
            let class = elt.classify(cfg.r, bound);
            (elt, ElementEntry { word, class })
        })
        .collect();
    Ok(ElementSet {
        max_word_length: opts.max_word_length,
        elements,
    })
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            write!(f, "g{}{}", l.gen, if l.inverse { "^-1" } else { "" })?;
        }
        Ok(())
    }
}
