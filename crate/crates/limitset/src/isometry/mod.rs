//! Möbius transformations of the hyperbolic plane and their exact avatars
//! over a number field: trace classification, translation lengths and
//! directions, fixed points on the boundary, the star embedding into a
//! product of hyperbolic planes, and Schottky certificates.
//!
//! Classification is trace-driven. For exact matrices the comparison of
//! |tr| against the parabolic threshold 2 is a sign computation in the
//! field, so the hyperbolic/parabolic/elliptic split is exact at every
//! place, and elliptic elements are resolved into finite or infinite order
//! by an exact power scan (a matrix has finite order in the projective
//! group iff some power equals plus or minus the identity, which happens at
//! one place iff it happens at all of them). Floating matrices get the same
//! classification with a guard band around |tr| = 2.

pub mod schottky;

use crate::fixed::{rational_to_f64, FixedReal};
use crate::numfield::{FieldElement, NumberField};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub use schottky::{
    find_schottky_powers, schottky_certificate, schottky_certificate_exact,
    schottky_certificate_multi, IsometricDisk, SchottkyCertificate,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsometryError {
    #[error("matrix determinant is not one")]
    DetNotOne,
    #[error("floating trace too close to the parabolic threshold to classify")]
    UndecidableOrder,
    #[error("transformation is not hyperbolic")]
    NotHyperbolic,
    #[error("a transformation fixes infinity; conjugate it away first")]
    InfinityFixed,
    #[error("the transformations share a fixed point")]
    CommonFixedPoint,
    #[error("no Schottky powers found within bound {0}")]
    PowersNotFound(u32),
    #[error("every component has zero translation length")]
    NoTranslation,
}

/// Band around |tr| = 2 inside which floating classification refuses to
/// decide. A floating trace that is exactly 2.0 is treated as parabolic.
pub const PARABOLIC_BAND: f64 = 1e-9;

/// Entries this close to zero are treated as zero by floating
/// canonicalization and the isometric-circle construction.
const FLOAT_ZERO: f64 = 1e-12;

/// Default width used when exact matrices are evaluated to floats.
fn eval_width() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(1) << 48)
}

fn length_width() -> BigRational {
    BigRational::new(BigInt::from(1), BigInt::from(1) << 160)
}

// ---------------------------------------------------------------------------
// floating Möbius transformations

/// A Möbius transformation in PSL(2, R): det = 1, and the first entry of
/// (a, b, c, d) that is not numerically zero is positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// A point of the upper half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Self {
        assert!(y > 0.0, "upper half-plane point needs positive height");
        HPoint { x, y }
    }

    /// The basepoint i.
    pub fn i() -> Self {
        HPoint { x: 0.0, y: 1.0 }
    }
}

impl Mobius {
    /// Build from raw entries, normalizing the determinant to 1.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, IsometryError> {
        let det = a * d - b * c;
        if !(det.is_finite() && det > 0.0) {
            return Err(IsometryError::DetNotOne);
        }
        let s = det.sqrt();
        Ok(Mobius {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        }
        .canonical())
    }

    pub fn identity() -> Self {
        Mobius { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    fn canonical(self) -> Self {
        for e in [self.a, self.b, self.c, self.d] {
            if e.abs() > FLOAT_ZERO {
                if e < 0.0 {
                    return Mobius { a: -self.a, b: -self.b, c: -self.c, d: -self.d };
                }
                return self;
            }
        }
        self
    }

    pub fn mul(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
        .canonical()
    }

    pub fn inverse(&self) -> Mobius {
        Mobius { a: self.d, b: -self.b, c: -self.c, d: self.a }.canonical()
    }

    pub fn pow(&self, e: u32) -> Mobius {
        let mut acc = Mobius::identity();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    /// Action on the upper half-plane.
    pub fn apply_point(&self, z: HPoint) -> HPoint {
        let den = (self.c * z.x + self.d).powi(2) + (self.c * z.y).powi(2);
        let num_re = (self.a * z.x + self.b) * (self.c * z.x + self.d) + self.a * z.y * self.c * z.y;
        HPoint {
            x: num_re / den,
            y: z.y / den,
        }
    }

    fn near(&self, o: &Mobius, tol: f64) -> bool {
        (self.a - o.a).abs() < tol
            && (self.b - o.b).abs() < tol
            && (self.c - o.c).abs() < tol
            && (self.d - o.d).abs() < tol
    }
}

// ---------------------------------------------------------------------------
// boundary points

/// A point of the boundary circle in homogeneous coordinates; (1 : 0) is
/// the point at infinity. Equality is scaling-invariant through the
/// canonical angle.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryPoint {
    pub u: f64,
    pub v: f64,
}

impl BoundaryPoint {
    pub fn new(u: f64, v: f64) -> Self {
        assert!(u != 0.0 || v != 0.0, "homogeneous coordinates cannot both vanish");
        BoundaryPoint { u, v }
    }

    pub fn from_real(x: f64) -> Self {
        BoundaryPoint { u: x, v: 1.0 }
    }

    pub fn infinity() -> Self {
        BoundaryPoint { u: 1.0, v: 0.0 }
    }

    /// Canonical coordinate in [0, 1): (atan2(v, u) mod pi) / pi.
    pub fn angle(&self) -> f64 {
        let mut a = self.v.atan2(self.u);
        if a < 0.0 {
            a += std::f64::consts::PI;
        }
        if a >= std::f64::consts::PI {
            a -= std::f64::consts::PI;
        }
        a / std::f64::consts::PI
    }

    /// Real coordinate, or None for the point at infinity.
    pub fn as_real(&self) -> Option<f64> {
        if self.v.abs() <= FLOAT_ZERO * self.u.abs() {
            None
        } else {
            Some(self.u / self.v)
        }
    }

    /// Distance between canonical angles on the circle (angles mod 1).
    pub fn angular_distance(&self, other: &BoundaryPoint) -> f64 {
        let d = (self.angle() - other.angle()).abs();
        d.min(1.0 - d)
    }
}

impl PartialEq for BoundaryPoint {
    fn eq(&self, other: &Self) -> bool {
        self.angle() == other.angle()
    }
}

/// Linear fractional action on homogeneous boundary coordinates.
pub fn apply_boundary(g: &Mobius, xi: &BoundaryPoint) -> BoundaryPoint {
    BoundaryPoint::new(g.a * xi.u + g.b * xi.v, g.c * xi.u + g.d * xi.v)
}

/// Hyperbolic distance in the upper half-plane.
pub fn hyp_distance(z: HPoint, w: HPoint) -> f64 {
    let dx = z.x - w.x;
    let dy = z.y - w.y;
    (1.0 + (dx * dx + dy * dy) / (2.0 * z.y * w.y)).acosh()
}

// ---------------------------------------------------------------------------
// classification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IsometryKind {
    Identity,
    Parabolic,
    EllipticFinite(u32),
    EllipticInfinite,
    Hyperbolic,
}

impl IsometryKind {
    pub fn is_elliptic(&self) -> bool {
        matches!(self, IsometryKind::EllipticFinite(_) | IsometryKind::EllipticInfinite)
    }

    pub fn is_hyperbolic(&self) -> bool {
        matches!(self, IsometryKind::Hyperbolic)
    }
}

impl fmt::Display for IsometryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IsometryKind::Identity => write!(f, "Identity"),
            IsometryKind::Parabolic => write!(f, "Parabolic"),
            IsometryKind::EllipticFinite(m) => write!(f, "EllipticFinite({})", m),
            IsometryKind::EllipticInfinite => write!(f, "EllipticInfinite"),
            IsometryKind::Hyperbolic => write!(f, "Hyperbolic"),
        }
    }
}

/// Type and translation length of one component; the length is zero unless
/// the component is hyperbolic.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub kind: IsometryKind,
    pub length: f64,
}

impl Classification {
    fn of_kind(kind: IsometryKind) -> Self {
        Classification { kind, length: 0.0 }
    }
}

/// Largest projective order an elliptic element can have when its trace
/// lies in a field of the given degree (Euler phi of twice the order is at
/// most twice the degree), padded for safety.
pub fn default_order_bound(field_degree: usize) -> u32 {
    let phi = |mut n: u32| -> u32 {
        let mut result = n;
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                while n % p == 0 {
                    n /= p;
                }
                result -= result / p;
            }
            p += 1;
        }
        if n > 1 {
            result -= result / n;
        }
        result
    };
    let cap = (1..=1000u32)
        .filter(|&m| phi(2 * m) <= 2 * field_degree as u32)
        .max()
        .unwrap_or(1);
    cap.max(60)
}

/// Classify a floating transformation.
///
/// A trace bit-exactly equal to +-2 classifies as parabolic; traces inside
/// the open band (0, PARABOLIC_BAND) around the threshold refuse with
/// `UndecidableOrder`. Elliptic order is resolved by testing powers against
/// +-identity at the same tolerance.
pub fn classify_float(g: &Mobius, finite_order_bound: u32) -> Result<Classification, IsometryError> {
    let id = Mobius::identity();
    if g.near(&id, PARABOLIC_BAND) {
        return Ok(Classification::of_kind(IsometryKind::Identity));
    }
    let t = g.trace().abs();
    if t > 2.0 {
        if t - 2.0 < PARABOLIC_BAND {
            return Err(IsometryError::UndecidableOrder);
        }
        return Ok(Classification {
            kind: IsometryKind::Hyperbolic,
            length: 2.0 * (t / 2.0).acosh(),
        });
    }
    if t == 2.0 {
        return Ok(Classification::of_kind(IsometryKind::Parabolic));
    }
    if 2.0 - t < PARABOLIC_BAND {
        return Err(IsometryError::UndecidableOrder);
    }
    let mut acc = *g;
    for m in 2..=finite_order_bound {
        acc = acc.mul(g);
        if acc.near(&id, PARABOLIC_BAND) {
            return Ok(Classification::of_kind(IsometryKind::EllipticFinite(m)));
        }
    }
    Ok(Classification::of_kind(IsometryKind::EllipticInfinite))
}

/// Attractive and repulsive fixed points of a hyperbolic transformation:
/// the eigen-directions on the projective line, attractive for the
/// eigenvalue of modulus greater than one.
pub fn fixed_points(g: &Mobius) -> Result<(BoundaryPoint, BoundaryPoint), IsometryError> {
    let t = g.trace();
    if t.abs() <= 2.0 {
        return Err(IsometryError::NotHyperbolic);
    }
    let s = (t * t - 4.0).sqrt();
    let lam_att = (t + t.signum() * s) / 2.0;
    let lam_rep = (t - t.signum() * s) / 2.0;
    if g.c.abs() > FLOAT_ZERO {
        Ok((
            BoundaryPoint::new(lam_att - g.d, g.c),
            BoundaryPoint::new(lam_rep - g.d, g.c),
        ))
    } else {
        let inf = BoundaryPoint::infinity();
        let other = BoundaryPoint::new(g.b, g.d - g.a);
        if g.a.abs() > g.d.abs() {
            Ok((inf, other))
        } else {
            Ok((other, inf))
        }
    }
}

// ---------------------------------------------------------------------------
// exact Möbius transformations

/// A matrix in SL(2, K) with determinant exactly one, stored with the
/// canonical projective sign: the first nonzero entry of (a, b, c, d) is
/// positive under the identity embedding.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactMobius {
    pub a: FieldElement,
    pub b: FieldElement,
    pub c: FieldElement,
    pub d: FieldElement,
}

impl fmt::Debug for ExactMobius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl ExactMobius {
    pub fn new(
        a: FieldElement,
        b: FieldElement,
        c: FieldElement,
        d: FieldElement,
    ) -> Result<Self, IsometryError> {
        let det = a.mul(&d).sub(&b.mul(&c));
        if !det.is_one() {
            return Err(IsometryError::DetNotOne);
        }
        Ok(ExactMobius { a, b, c, d }.canonical())
    }

    pub fn identity(field: Arc<NumberField>) -> Self {
        ExactMobius {
            a: FieldElement::one(field.clone()),
            b: FieldElement::zero(field.clone()),
            c: FieldElement::zero(field.clone()),
            d: FieldElement::one(field),
        }
    }

    fn canonical(self) -> Self {
        let flip = {
            let entries = [&self.a, &self.b, &self.c, &self.d];
            entries
                .iter()
                .find(|e| !e.is_zero())
                .map_or(false, |e| e.sign_at(1) == Ordering::Less)
        };
        if flip {
            ExactMobius {
                a: self.a.neg(),
                b: self.b.neg(),
                c: self.c.neg(),
                d: self.d.neg(),
            }
        } else {
            self
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        self.a.field()
    }

    pub fn mul(&self, o: &ExactMobius) -> ExactMobius {
        ExactMobius {
            a: self.a.mul(&o.a).add(&self.b.mul(&o.c)),
            b: self.a.mul(&o.b).add(&self.b.mul(&o.d)),
            c: self.c.mul(&o.a).add(&self.d.mul(&o.c)),
            d: self.c.mul(&o.b).add(&self.d.mul(&o.d)),
        }
        .canonical()
    }

    pub fn inverse(&self) -> ExactMobius {
        ExactMobius {
            a: self.d.clone(),
            b: self.b.neg(),
            c: self.c.neg(),
            d: self.a.clone(),
        }
        .canonical()
    }

    pub fn pow(&self, e: u32) -> ExactMobius {
        let mut acc = ExactMobius::identity(self.field().clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Trace of the canonical representative; classification only consumes
    /// its absolute value, so the projective sign ambiguity is harmless.
    pub fn trace(&self) -> FieldElement {
        self.a.add(&self.d)
    }

    pub fn is_projective_identity(&self) -> bool {
        // the canonical form of -I is I
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    /// Floating evaluation at a place: entries to enclosures of the given
    /// width, midpoints to f64, then canonical normalization.
    pub fn evaluate(&self, place: usize, width: &BigRational) -> Mobius {
        let ev = |e: &FieldElement| {
            if let Some(q) = e.as_rational() {
                rational_to_f64(q)
            } else {
                rational_to_f64(&e.embed(place, width).midpoint())
            }
        };
        Mobius {
            a: ev(&self.a),
            b: ev(&self.b),
            c: ev(&self.c),
            d: ev(&self.d),
        }
        .canonical()
    }

    pub fn evaluate_default(&self, place: usize) -> Mobius {
        self.evaluate(place, &eval_width())
    }

    /// Exact classification at a place.
    pub fn classify(&self, place: usize, finite_order_bound: u32) -> Classification {
        let mut powers = PowerScan::new(self.clone());
        classify_exact_at_places(
            &self.trace(),
            self.is_projective_identity(),
            &[place],
            finite_order_bound,
            &mut |m| powers.is_projectively_one_at(m),
        )
        .pop()
        .unwrap()
    }
}

/// Incremental power scan for the finite-order test.
struct PowerScan {
    base: ExactMobius,
    acc: ExactMobius,
    at: u32,
}

impl PowerScan {
    fn new(base: ExactMobius) -> Self {
        let acc = base.clone();
        PowerScan { base, acc, at: 1 }
    }

    fn is_projectively_one_at(&mut self, m: u32) -> bool {
        assert!(m >= self.at, "power scan must advance monotonically");
        while self.at < m {
            self.acc = self.acc.mul(&self.base);
            self.at += 1;
        }
        self.acc.is_projective_identity()
    }
}

/// Does the trace satisfy one of the degree-two finite-order trace
/// relations |tr| in {0, 1, sqrt 2, sqrt 3, (sqrt 5 +- 1)/2}?
fn finite_order_trace_possible(t: &FieldElement) -> bool {
    let f = t.field().clone();
    let one = FieldElement::one(f.clone());
    let t2 = t.square();
    t.is_zero()
        || t2 == one
        || t2 == FieldElement::from_int(f.clone(), 2)
        || t2 == FieldElement::from_int(f.clone(), 3)
        || t2.sub(t) == one
        || t2.add(t) == one
}

/// Exact per-place classification from a trace and a power oracle.
///
/// The oracle answers whether the m-th power of the element is projectively
/// the identity; it is consulted only for elliptic traces, with strictly
/// increasing m, and the answer is place-independent, so one scan serves
/// every requested place.
pub fn classify_exact_at_places(
    trace: &FieldElement,
    is_projective_identity: bool,
    places: &[usize],
    finite_order_bound: u32,
    power_is_projectively_one: &mut dyn FnMut(u32) -> bool,
) -> Vec<Classification> {
    if is_projective_identity {
        return places
            .iter()
            .map(|_| Classification::of_kind(IsometryKind::Identity))
            .collect();
    }
    let field = trace.field().clone();
    let two = FieldElement::from_int(field.clone(), 2);
    // tr = +-2 is a field identity, hence parabolic at every place at once
    if *trace == two || *trace == two.neg() {
        return places
            .iter()
            .map(|_| Classification::of_kind(IsometryKind::Parabolic))
            .collect();
    }
    // split the places by the exact sign of |tr| - 2 first
    let hyperbolic_above: Vec<Option<bool>> = places
        .iter()
        .map(|&place| {
            if trace.sub(&two).sign_at(place) == Ordering::Greater {
                Some(true)
            } else if trace.add(&two).sign_at(place) == Ordering::Less {
                Some(false)
            } else {
                None
            }
        })
        .collect();
    // A hyperbolic component rules out finite order: a power equal to
    // +-identity would be so at every place. Elliptic components of such
    // elements are infinite order without any power scan.
    let any_hyperbolic = hyperbolic_above.iter().any(Option::is_some);
    let mut elliptic_kind: Option<IsometryKind> = None;
    let resolve_elliptic = |oracle: &mut dyn FnMut(u32) -> bool| -> IsometryKind {
        if any_hyperbolic {
            return IsometryKind::EllipticInfinite;
        }
        if field.degree() <= 2 && !finite_order_trace_possible(trace) {
            return IsometryKind::EllipticInfinite;
        }
        for m in 2..=finite_order_bound {
            if oracle(m) {
                return IsometryKind::EllipticFinite(m);
            }
        }
        IsometryKind::EllipticInfinite
    };
    places
        .iter()
        .zip(&hyperbolic_above)
        .map(|(&place, above)| {
            if let Some(above) = above {
                let abs_trace = if *above { trace.clone() } else { trace.neg() };
                Classification {
                    kind: IsometryKind::Hyperbolic,
                    length: hyperbolic_length_f64(&abs_trace, place),
                }
            } else {
                let kind = *elliptic_kind
                    .get_or_insert_with(|| resolve_elliptic(power_is_projectively_one));
                Classification::of_kind(kind)
            }
        })
        .collect()
}

/// Reported translation length: f64 arccosh of a certified midpoint. The
/// direction pipeline never consumes this; it recomputes on the
/// fixed-point scale from the exact trace.
fn hyperbolic_length_f64(abs_trace: &FieldElement, place: usize) -> f64 {
    let width = BigRational::new(BigInt::from(1), BigInt::from(1) << 45);
    let mid = rational_to_f64(&abs_trace.embed(place, &width).midpoint());
    2.0 * (mid / 2.0).acosh()
}

/// Translation length 2 arccosh(|tr|/2) on the deterministic fixed-point
/// scale; requires |tr| > 2 at the place.
pub fn hyperbolic_length_fixed(abs_trace: &FieldElement, place: usize) -> FixedReal {
    let mid = abs_trace.embed(place, &length_width()).midpoint();
    let x = FixedReal::from_ratio(&(mid / BigRational::from_integer(2.into())));
    let l = x.arccosh();
    l.clone() + l
}

// ---------------------------------------------------------------------------
// tuples

/// An r-tuple of Möbius transformations, one per place; when the tuple
/// comes from the star embedding the exact source is retained and all
/// classification runs on it.
#[derive(Clone, Debug)]
pub struct IsometryTuple {
    pub components: Vec<Mobius>,
    pub source: Option<ExactMobius>,
}

impl IsometryTuple {
    pub fn rank(&self) -> usize {
        self.components.len()
    }
}

/// The tuple g* = (phi_1(g), ..., phi_r(g)) of Galois-conjugate actions.
pub fn star_embedding(m: &ExactMobius, r: usize) -> IsometryTuple {
    assert!(r >= 1 && r <= m.field().degree(), "rank exceeds field degree");
    let components = (1..=r).map(|p| m.evaluate_default(p)).collect();
    IsometryTuple {
        components,
        source: Some(m.clone()),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TupleKind {
    Identity,
    Hyperbolic,
    Elliptic,
    Parabolic,
    Mixed,
}

impl fmt::Display for TupleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TupleKind::Identity => write!(f, "Identity"),
            TupleKind::Hyperbolic => write!(f, "Hyperbolic"),
            TupleKind::Elliptic => write!(f, "Elliptic"),
            TupleKind::Parabolic => write!(f, "Parabolic"),
            TupleKind::Mixed => write!(f, "Mixed"),
        }
    }
}

/// Per-component classifications plus the tuple-level kind: hyperbolic,
/// elliptic or parabolic when every component is, identity for the
/// identity, mixed in all other cases.
#[derive(Clone, Debug, PartialEq)]
pub struct TupleClass {
    pub kind: TupleKind,
    pub per_component: Vec<Classification>,
}

impl TupleClass {
    pub fn from_components(per_component: Vec<Classification>) -> Self {
        let kind = if per_component.iter().all(|c| c.kind == IsometryKind::Identity) {
            TupleKind::Identity
        } else if per_component.iter().all(|c| c.kind == IsometryKind::Hyperbolic) {
            TupleKind::Hyperbolic
        } else if per_component.iter().all(|c| c.kind.is_elliptic()) {
            TupleKind::Elliptic
        } else if per_component.iter().all(|c| c.kind == IsometryKind::Parabolic) {
            TupleKind::Parabolic
        } else {
            TupleKind::Mixed
        };
        TupleClass { kind, per_component }
    }

    pub fn has_translation(&self) -> bool {
        self.per_component.iter().any(|c| c.length > 0.0)
    }
}

/// Classify every component of a tuple. Exact when the source is present;
/// otherwise floating, where the parabolic band may refuse.
pub fn classify_tuple(t: &IsometryTuple, finite_order_bound: u32) -> Result<TupleClass, IsometryError> {
    if let Some(src) = &t.source {
        let places: Vec<usize> = (1..=t.rank()).collect();
        let mut powers = PowerScan::new(src.clone());
        let per = classify_exact_at_places(
            &src.trace(),
            src.is_projective_identity(),
            &places,
            finite_order_bound,
            &mut |m| powers.is_projectively_one_at(m),
        );
        Ok(TupleClass::from_components(per))
    } else {
        let per = t
            .components
            .iter()
            .map(|g| classify_float(g, finite_order_bound))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TupleClass::from_components(per))
    }
}

// ---------------------------------------------------------------------------
// translation directions

/// A point of the closed projective simplex: nonnegative coordinates
/// normalized to unit sum. All coordinates positive means the direction
/// lies in the open cone the regular boundary fibers over.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    pub coords: Vec<f64>,
}

impl Direction {
    pub fn is_interior(&self) -> bool {
        self.coords.iter().all(|&c| c > 0.0)
    }

    /// Bit-pattern key for exact deduplication and deterministic ordering.
    pub fn key(&self) -> Vec<u64> {
        self.coords.iter().map(|c| c.to_bits()).collect()
    }

    /// Chart coordinate for rank 2: the weight of the second place.
    pub fn theta(&self) -> f64 {
        self.coords[1] / (self.coords[0] + self.coords[1])
    }
}

/// Direction of a classified tuple, recomputed on the fixed-point scale
/// straight from the exact trace. Anything with the same trace up to sign,
/// or a trace related by a power, lands on bit-identical coordinates.
pub fn exact_direction_from_trace(
    trace: &FieldElement,
    class: &TupleClass,
) -> Result<Direction, IsometryError> {
    let two = FieldElement::from_int(trace.field().clone(), 2);
    let lengths: Vec<FixedReal> = class
        .per_component
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if c.kind == IsometryKind::Hyperbolic {
                let place = i + 1;
                let above = trace.sub(&two).sign_at(place) == Ordering::Greater;
                let abs_trace = if above { trace.clone() } else { trace.neg() };
                hyperbolic_length_fixed(&abs_trace, place)
            } else {
                FixedReal::zero()
            }
        })
        .collect();
    let total = lengths
        .iter()
        .cloned()
        .fold(FixedReal::zero(), |acc, l| acc + l);
    if total.is_zero() {
        return Err(IsometryError::NoTranslation);
    }
    let coords = lengths.iter().map(|l| l.div(&total).to_f64()).collect();
    Ok(Direction { coords })
}

/// The translation direction (l(g_1) : ... : l(g_r)), normalized to unit
/// sum. Exact sources run on the fixed-point scale, which collapses
/// conjugates and powers to bit-identical directions.
pub fn translation_direction(
    t: &IsometryTuple,
    finite_order_bound: u32,
) -> Result<Direction, IsometryError> {
    let class = classify_tuple(t, finite_order_bound)?;
    if let Some(src) = &t.source {
        exact_direction_from_trace(&src.trace(), &class)
    } else {
        let total: f64 = class.per_component.iter().map(|c| c.length).sum();
        if total <= 0.0 {
            return Err(IsometryError::NoTranslation);
        }
        Ok(Direction {
            coords: class.per_component.iter().map(|c| c.length / total).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numfield::{make_field, poly::QPoly};

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int_poly(cs: &[i64]) -> QPoly {
        QPoly::new(cs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    fn sqrt2_field() -> Arc<NumberField> {
        make_field(int_poly(&[-2, 0, 1])).unwrap()
    }

    fn exact(field: &Arc<NumberField>, m: [[i64; 2]; 2]) -> ExactMobius {
        ExactMobius::new(
            FieldElement::from_int(field.clone(), m[0][0]),
            FieldElement::from_int(field.clone(), m[0][1]),
            FieldElement::from_int(field.clone(), m[1][0]),
            FieldElement::from_int(field.clone(), m[1][1]),
        )
        .unwrap()
    }

    /// E = [[1+t, 0], [0, t-1]], det = t^2 - 1 = 1.
    fn gen_e(field: &Arc<NumberField>) -> ExactMobius {
        let t = FieldElement::generator(field.clone());
        let one = FieldElement::one(field.clone());
        ExactMobius::new(
            one.add(&t),
            FieldElement::zero(field.clone()),
            FieldElement::zero(field.clone()),
            t.sub(&one),
        )
        .unwrap()
    }

    /// M = [[1+t, t], [1, 1]], det = 1, traces 2 +- sqrt 2.
    fn gen_m(field: &Arc<NumberField>) -> ExactMobius {
        let t = FieldElement::generator(field.clone());
        let one = FieldElement::one(field.clone());
        ExactMobius::new(
            one.add(&t),
            t.clone(),
            one.clone(),
            one.clone(),
        )
        .unwrap()
    }

    #[test]
    fn float_classification_examples() {
        let parabolic = Mobius::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            classify_float(&parabolic, 60).unwrap().kind,
            IsometryKind::Parabolic
        );
        let hyp = Mobius::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let c = classify_float(&hyp, 60).unwrap();
        assert_eq!(c.kind, IsometryKind::Hyperbolic);
        assert!((c.length - 1.9248473002384139).abs() < 1e-12);
        // rotation by pi/2: [[0, -1], [1, 0]] has order 2 in the projective group
        let rot = Mobius::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(
            classify_float(&rot, 60).unwrap().kind,
            IsometryKind::EllipticFinite(2)
        );
        // inside the band: undecidable
        let nearly = Mobius { a: 1.0 + 2.5e-10, b: 1.0, c: 5e-10, d: 1.0 + 2.5e-10 };
        assert_eq!(
            classify_float(&nearly, 60).unwrap_err(),
            IsometryError::UndecidableOrder
        );
    }

    #[test]
    fn exact_elliptic_infinite_example() {
        // trace t - 1 = sqrt2 - 1: absent from the finite-order trace table
        let f = sqrt2_field();
        let t = FieldElement::generator(f.clone());
        let g = ExactMobius::new(
            t.sub(&FieldElement::one(f.clone())),
            FieldElement::from_int(f.clone(), -1),
            FieldElement::one(f.clone()),
            FieldElement::zero(f.clone()),
        )
        .unwrap();
        assert_eq!(g.classify(1, 60).kind, IsometryKind::EllipticInfinite);
    }

    #[test]
    fn exact_order_nine_in_cubic_field() {
        // the cubic generator is 2 cos(pi/9): companion matrix has order 9
        let f = make_field(int_poly(&[-1, -3, 0, 1])).unwrap();
        let t = FieldElement::generator(f.clone());
        let g = ExactMobius::new(
            t,
            FieldElement::from_int(f.clone(), -1),
            FieldElement::one(f.clone()),
            FieldElement::zero(f.clone()),
        )
        .unwrap();
        let c = g.classify(1, 60);
        assert_eq!(c.kind, IsometryKind::EllipticFinite(9));
        // same order at every place, per the conjugate-type constraint
        assert_eq!(g.classify(2, 60).kind, IsometryKind::EllipticFinite(9));
    }

    #[test]
    fn fixed_point_examples() {
        let g = Mobius::new(2.0, 1.0, 1.0, 1.0).unwrap();
        // oracle: iteration from a generic boundary point converges to the
        // attractive fixed point
        let mut xi = BoundaryPoint::from_real(0.3);
        for _ in 0..200 {
            xi = apply_boundary(&g, &xi);
            // renormalize to avoid overflow
            let n = xi.u.hypot(xi.v);
            xi = BoundaryPoint::new(xi.u / n, xi.v / n);
        }
        let limit = xi.as_real().unwrap();
        assert!((limit - 1.618033988749895).abs() < 1e-9);

        let (att, rep) = fixed_points(&g).unwrap();
        assert!((att.as_real().unwrap() - 1.618033988749895).abs() < 1e-12);
        assert!((rep.as_real().unwrap() + 0.6180339887498949).abs() < 1e-12);
        // attractive point is fixed
        assert_eq!(apply_boundary(&g, &att).angle(), att.angle());

        let diag = Mobius::new(3.0, 0.0, 0.0, 1.0 / 3.0).unwrap();
        let (att, rep) = fixed_points(&diag).unwrap();
        assert!(att.as_real().is_none()); // infinity
        assert!((rep.as_real().unwrap()).abs() < 1e-15);

        let rot = Mobius::new(0.0, -1.0, 1.0, 0.0).unwrap();
        assert_eq!(fixed_points(&rot).unwrap_err(), IsometryError::NotHyperbolic);
    }

    #[test]
    fn boundary_action_examples() {
        let id = Mobius::identity();
        let xi = BoundaryPoint::from_real(0.25);
        assert_eq!(apply_boundary(&id, &xi), xi);
        let shift = Mobius::new(1.0, 1.0, 0.0, 1.0).unwrap();
        let moved = apply_boundary(&shift, &BoundaryPoint::from_real(0.0));
        assert_eq!(moved.as_real().unwrap(), 1.0);
        let inv = Mobius::new(0.0, -1.0, 1.0, 0.0).unwrap();
        let zero = apply_boundary(&inv, &BoundaryPoint::infinity());
        assert_eq!(zero.angle(), BoundaryPoint::from_real(0.0).angle());
    }

    #[test]
    fn hyperbolic_distance_examples() {
        assert_eq!(hyp_distance(HPoint::i(), HPoint::i()), 0.0);
        let d = hyp_distance(HPoint::i(), HPoint::new(0.0, 2.0));
        assert!((d - std::f64::consts::LN_2).abs() < 1e-14);
        // isometry invariance
        let g = Mobius::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let z = HPoint::new(0.3, 0.7);
        let w = HPoint::new(-1.2, 2.5);
        let dd = hyp_distance(g.apply_point(z), g.apply_point(w));
        assert!((dd - hyp_distance(z, w)).abs() < 1e-12);
    }

    #[test]
    fn star_embedding_examples() {
        let f = sqrt2_field();
        let id = ExactMobius::identity(f.clone());
        let tup = star_embedding(&id, 2);
        let class = classify_tuple(&tup, 60).unwrap();
        assert_eq!(class.kind, TupleKind::Identity);

        let e = gen_e(&f);
        let tup = star_embedding(&e, 2);
        let class = classify_tuple(&tup, 60).unwrap();
        assert_eq!(class.kind, TupleKind::Hyperbolic);
        // traces 2 sqrt2 and -2 sqrt2: equal lengths
        let l = 2.0 * (2f64.sqrt()).acosh();
        for c in &class.per_component {
            assert!((c.length - l).abs() < 1e-12);
        }

        let m = gen_m(&f);
        let tup = star_embedding(&m, 2);
        let class = classify_tuple(&tup, 60).unwrap();
        assert_eq!(class.kind, TupleKind::Mixed);
        assert_eq!(class.per_component[0].kind, IsometryKind::Hyperbolic);
        assert_eq!(class.per_component[1].kind, IsometryKind::EllipticInfinite);
        // trace is 2 + t, i.e. 2 + sqrt2 at place 1
        let tr = m.trace();
        assert_eq!(tr.coords()[0], rat(2, 1));
        assert_eq!(tr.coords()[1], rat(1, 1));
    }

    #[test]
    fn direction_examples() {
        let f = sqrt2_field();
        let e = gen_e(&f);
        let d = translation_direction(&star_embedding(&e, 2), 60).unwrap();
        assert_eq!(d.coords, vec![0.5, 0.5]);
        // rational generator: identical components force (1/2, 1/2) exactly
        let g = exact(&f, [[2, 1], [1, 1]]);
        let d = translation_direction(&star_embedding(&g, 2), 60).unwrap();
        assert_eq!(d.coords, vec![0.5, 0.5]);
        // no translation at all
        let id = ExactMobius::identity(f.clone());
        assert_eq!(
            translation_direction(&star_embedding(&id, 2), 60).unwrap_err(),
            IsometryError::NoTranslation
        );
    }

    #[test]
    fn direction_invariance_exact() {
        let f = sqrt2_field();
        let e = gen_e(&f);
        let g = exact(&f, [[2, 1], [1, 1]]);
        let w = g.mul(&e); // a mixing word
        let d = translation_direction(&star_embedding(&w, 2), 60).unwrap();
        // conjugation by another word
        let conj = e.mul(&g).mul(&e.inverse());
        let wc = conj.mul(&w).mul(&conj.inverse());
        let dc = translation_direction(&star_embedding(&wc, 2), 60).unwrap();
        assert_eq!(d.coords, dc.coords);
        // powers
        for m in [2u32, 3, 5] {
            let dm = translation_direction(&star_embedding(&w.pow(m), 2), 60).unwrap();
            assert_eq!(d.coords, dm.coords, "direction of power {} drifted", m);
        }
    }

    #[test]
    fn mobius_det_checks() {
        let f = sqrt2_field();
        assert_eq!(
            ExactMobius::new(
                FieldElement::from_int(f.clone(), 1),
                FieldElement::from_int(f.clone(), 1),
                FieldElement::zero(f.clone()),
                FieldElement::from_int(f.clone(), 2),
            )
            .unwrap_err(),
            IsometryError::DetNotOne
        );
        assert!(Mobius::new(1.0, 0.0, 0.0, -1.0).is_err());
    }
}
