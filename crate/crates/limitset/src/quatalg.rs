//! Quaternion algebras over a totally real field: defining relations,
//! reduced norm and trace, ramification at the real places, the standard
//! order, and the (non-canonical, explicitly fixed) matrix embeddings at
//! unramified places.

use crate::fixed::rational_to_f64;
use crate::numfield::{FieldElement, NumberField};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuatAlgError {
    #[error("algebra parameters a, b must be nonzero")]
    ZeroParameter,
    #[error("place {0} is ramified; no matrix embedding exists there")]
    RamifiedPlace(usize),
}

/// The algebra (a, b / K): i^2 = a, j^2 = b, ij = -ji.
#[derive(Debug, Clone)]
pub struct QuaternionAlgebra {
    field: Arc<NumberField>,
    a: FieldElement,
    b: FieldElement,
    unramified_places: Vec<usize>,
}

impl QuaternionAlgebra {
    pub fn new(a: FieldElement, b: FieldElement) -> Result<Arc<Self>, QuatAlgError> {
        if a.is_zero() || b.is_zero() {
            return Err(QuatAlgError::ZeroParameter);
        }
        let field = a.field().clone();
        let n = field.degree();
        let mut unramified = Vec::new();
        for place in 1..=n {
            if !(a.sign_at(place) == Ordering::Less && b.sign_at(place) == Ordering::Less) {
                unramified.push(place);
            }
        }
        Ok(Arc::new(QuaternionAlgebra {
            field,
            a,
            b,
            unramified_places: unramified,
        }))
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    pub fn unramified_places(&self) -> &[usize] {
        &self.unramified_places
    }

    /// True iff the algebra tensored with the reals at `place` is the
    /// Hamilton quaternions: both parameters embed negative.
    pub fn ramified_at(&self, place: usize) -> bool {
        self.a.sign_at(place) == Ordering::Less && self.b.sign_at(place) == Ordering::Less
    }
}

/// Element x + y i + z j + w ij of a quaternion algebra.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Quaternion {
    pub x: FieldElement,
    pub y: FieldElement,
    pub z: FieldElement,
    pub w: FieldElement,
}

impl fmt::Debug for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i + ({})j + ({})ij", self.x, self.y, self.z, self.w)
    }
}

impl Quaternion {
    pub fn new(x: FieldElement, y: FieldElement, z: FieldElement, w: FieldElement) -> Self {
        Quaternion { x, y, z, w }
    }

    pub fn one(field: Arc<NumberField>) -> Self {
        Quaternion {
            x: FieldElement::one(field.clone()),
            y: FieldElement::zero(field.clone()),
            z: FieldElement::zero(field.clone()),
            w: FieldElement::zero(field),
        }
    }

    pub fn neg(&self) -> Self {
        Quaternion {
            x: self.x.neg(),
            y: self.y.neg(),
            z: self.z.neg(),
            w: self.w.neg(),
        }
    }

    pub fn conjugate(&self) -> Self {
        Quaternion {
            x: self.x.clone(),
            y: self.y.neg(),
            z: self.z.neg(),
            w: self.w.neg(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero() && self.z.is_zero() && self.w.is_zero()
    }

    /// Equal to 1 or -1, the kernel of the projective action.
    pub fn is_projectively_one(&self) -> bool {
        self.is_one() || self.neg().is_one()
    }
}

/// Product under i^2 = a, j^2 = b, ij = -ji.
pub fn quat_mul(alg: &QuaternionAlgebra, p: &Quaternion, q: &Quaternion) -> Quaternion {
    let (a, b) = (&alg.a, &alg.b);
    let ab = a.mul(b);
    let x = p
        .x
        .mul(&q.x)
        .add(&a.mul(&p.y.mul(&q.y)))
        .add(&b.mul(&p.z.mul(&q.z)))
        .sub(&ab.mul(&p.w.mul(&q.w)));
    let y = p
        .x
        .mul(&q.y)
        .add(&p.y.mul(&q.x))
        .sub(&b.mul(&p.z.mul(&q.w)))
        .add(&b.mul(&p.w.mul(&q.z)));
    let z = p
        .x
        .mul(&q.z)
        .add(&p.z.mul(&q.x))
        .add(&a.mul(&p.y.mul(&q.w)))
        .sub(&a.mul(&p.w.mul(&q.y)));
    let w = p
        .x
        .mul(&q.w)
        .add(&p.w.mul(&q.x))
        .add(&p.y.mul(&q.z))
        .sub(&p.z.mul(&q.y));
    Quaternion { x, y, z, w }
}

/// nrd(q) = x^2 - a y^2 - b z^2 + ab w^2.
pub fn reduced_norm(alg: &QuaternionAlgebra, q: &Quaternion) -> FieldElement {
    let (a, b) = (&alg.a, &alg.b);
    q.x.square()
        .sub(&a.mul(&q.y.square()))
        .sub(&b.mul(&q.z.square()))
        .add(&a.mul(b).mul(&q.w.square()))
}

/// trd(q) = q + conj(q) = 2x; this is the trace of every matrix embedding,
/// independent of the chosen identification.
pub fn reduced_trace(q: &Quaternion) -> FieldElement {
    q.x.add(&q.x)
}

/// Inverse of a norm-1 quaternion (the conjugate).
pub fn unit_inverse(alg: &QuaternionAlgebra, q: &Quaternion) -> Quaternion {
    debug_assert!(reduced_norm(alg, q).is_one(), "inverse of a non-unit");
    q.conjugate()
}

/// Membership in the standard order: all four coordinates lie in the Z-span
/// of the power basis.
pub fn order_membership(q: &Quaternion) -> bool {
    q.x.is_power_basis_integral()
        && q.y.is_power_basis_integral()
        && q.z.is_power_basis_integral()
        && q.w.is_power_basis_integral()
}

/// The fixed matrix embedding at an unramified place.
///
/// With alpha = sqrt(phi(a)) when phi(a) > 0:
///   q -> [[x + y alpha, z + w alpha], [phi(b)(z - w alpha), x - y alpha]]
/// evaluated at the place. When phi(a) < 0 (then phi(b) > 0 at an
/// unramified place) the roles of (a, i) and (b, j) are swapped first,
/// which rewrites q in coordinates (x, z, y, -w) of the algebra (b, a).
pub fn matrix_embedding(
    alg: &QuaternionAlgebra,
    q: &Quaternion,
    place: usize,
) -> Result<[[f64; 2]; 2], QuatAlgError> {
    if alg.ramified_at(place) {
        return Err(QuatAlgError::RamifiedPlace(place));
    }
    let width = BigRational::new(BigInt::from(1), BigInt::from(1) << 96);
    let ev = |e: &FieldElement| rational_to_f64(&e.embed(place, &width).midpoint());
    let (pa, pb) = (ev(&alg.a), ev(&alg.b));
    let (x, y, z, w) = (ev(&q.x), ev(&q.y), ev(&q.z), ev(&q.w));
    if alg.a.sign_at(place) == Ordering::Greater {
        let alpha = pa.sqrt();
        Ok([
            [x + y * alpha, z + w * alpha],
            [pb * (z - w * alpha), x - y * alpha],
        ])
    } else {
        let beta = pb.sqrt();
        Ok([
            [x + z * beta, y - w * beta],
            [pa * (y + w * beta), x - z * beta],
        ])
    }
}
