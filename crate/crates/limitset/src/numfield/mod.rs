//! Exact arithmetic in totally real number fields.
//!
//! A field is a monic irreducible rational polynomial together with
//! certified enclosures of all its real roots. Elements are power-basis
//! coordinate vectors reduced modulo the minimal polynomial; the `n` real
//! embeddings evaluate the coordinate polynomial on a root enclosure, so
//! every embedded value comes with an interval that can be refined on
//! demand and every nonzero sign is decidable exactly.
//!
//! Place numbering: place 1 is the designated identity embedding (by
//! default the largest root, overridable); the remaining places follow in
//! increasing root order.

pub mod interval;
pub mod poly;

use crate::fixed::rational_to_f64;
use interval::RatInterval;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use poly::QPoly;
use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumFieldError {
    #[error("defining polynomial is not monic")]
    NotMonic,
    #[error("defining polynomial is reducible over the rationals")]
    NotIrreducible,
    #[error("defining polynomial is not totally real")]
    NotTotallyReal,
    #[error("field degree {0} exceeds the supported cap of 4")]
    UnsupportedDegree(usize),
    #[error("division by zero field element")]
    DivisionByZero,
    #[error("invalid identity-embedding root index {0} for degree {1}")]
    BadPhi1Index(usize, usize),
}

/// Enclosure widths pre-computed at construction. The quick tier keeps the
/// endpoint denominators word-sized so that routine sign queries cost a few
/// machine multiplications; the tight tier serves high-precision embeds
/// without per-call bisection.
fn quick_enclosure_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 64)
}

fn tight_enclosure_width() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::one() << 256)
}

/// A totally real number field in power-basis presentation.
#[derive(Debug)]
pub struct NumberField {
    minpoly: QPoly,
    degree: usize,
    /// Coarse enclosures of all real roots, in increasing order.
    roots_quick: Vec<RatInterval>,
    /// Refinements of `roots_quick` for high-precision evaluation.
    roots_tight: Vec<RatInterval>,
    /// `place_order[i]` is the index into the root lists used by place
    /// `i+1`; `place_order[0]` is the designated identity embedding.
    place_order: Vec<usize>,
    /// Reduced coordinates of `t^n .. t^(2n-2)` for multiplication.
    power_table: Vec<Vec<BigRational>>,
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly && self.place_order == other.place_order
    }
}
impl Eq for NumberField {}

/// Construct a field with the default identity embedding (largest root).
pub fn make_field(minpoly: QPoly) -> Result<Arc<NumberField>, NumFieldError> {
    let deg = minpoly.degree();
    make_field_with_phi1(minpoly, deg)
}

/// Construct a field designating the `phi1_root`-th root (1-based, in
/// increasing order) as the identity embedding.
pub fn make_field_with_phi1(
    minpoly: QPoly,
    phi1_root: usize,
) -> Result<Arc<NumberField>, NumFieldError> {
    if !minpoly.is_monic() {
        return Err(NumFieldError::NotMonic);
    }
    let n = minpoly.degree();
    if n == 0 || n > 4 {
        return Err(NumFieldError::UnsupportedDegree(n));
    }
    if !poly::is_irreducible(&minpoly) {
        return Err(NumFieldError::NotIrreducible);
    }
    let raw_roots = poly::isolate_real_roots(&minpoly);
    if raw_roots.len() != n {
        return Err(NumFieldError::NotTotallyReal);
    }
    if phi1_root == 0 || phi1_root > n {
        return Err(NumFieldError::BadPhi1Index(phi1_root, n));
    }
    let quick_width = quick_enclosure_width();
    let tight_width = tight_enclosure_width();
    let roots_quick: Vec<RatInterval> = raw_roots
        .iter()
        .map(|iv| poly::refine_sign_change(&minpoly, iv, &quick_width))
        .collect();
    let roots_tight: Vec<RatInterval> = roots_quick
        .iter()
        .map(|iv| poly::refine_sign_change(&minpoly, iv, &tight_width))
        .collect();
    let phi1 = phi1_root - 1;
    let mut place_order = vec![phi1];
    place_order.extend((0..n).filter(|&i| i != phi1));
    // reduction table: t^n = -(c_0 + ... + c_{n-1} t^{n-1}), then upward
    let mut power_table: Vec<Vec<BigRational>> = Vec::new();
    let tn: Vec<BigRational> = (0..n).map(|i| -minpoly.coeff(i)).collect();
    power_table.push(tn);
    for _ in 1..n.saturating_sub(1) {
        let prev = power_table.last().unwrap().clone();
        // multiply by t: shift up, reduce the overflow coefficient
        let overflow = prev[n - 1].clone();
        let mut next = vec![BigRational::zero(); n];
        for i in 1..n {
            next[i] = prev[i - 1].clone();
        }
        for (i, c) in power_table[0].iter().enumerate() {
            next[i] = &next[i] + c * &overflow;
        }
        power_table.push(next);
    }
    Ok(Arc::new(NumberField {
        minpoly,
        degree: n,
        roots_quick,
        roots_tight,
        place_order,
        power_table,
    }))
}

impl NumberField {
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    /// 1-based increasing-order index of the designated identity embedding.
    pub fn phi1_root_index(&self) -> usize {
        self.place_order[0] + 1
    }

    /// Stored (tight) enclosure of the root used by `place` (1-based).
    pub fn place_enclosure(&self, place: usize) -> &RatInterval {
        &self.roots_tight[self.place_order[place - 1]]
    }

    fn quick_enclosure(&self, place: usize) -> &RatInterval {
        &self.roots_quick[self.place_order[place - 1]]
    }

    fn refined_enclosure(&self, place: usize, target: &BigRational) -> RatInterval {
        let stored = self.place_enclosure(place);
        if &stored.width() <= target {
            stored.clone()
        } else {
            poly::refine_sign_change(&self.minpoly, stored, target)
        }
    }
}

/// An element of a [`NumberField`] in reduced power-basis coordinates.
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<NumberField>,
    coords: Vec<BigRational>,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement({})", self)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.coords == other.coords && *self.field == *other.field
    }
}
impl Eq for FieldElement {}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coords.cmp(&other.coords)
    }
}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coords.hash(state);
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coords.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match i {
                0 => write!(f, "{}", mag)?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{}*", mag)?;
                    }
                    if i == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{}", i)?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl FieldElement {
    pub fn new(field: Arc<NumberField>, mut coords: Vec<BigRational>) -> Self {
        coords.resize(field.degree, BigRational::zero());
        FieldElement { field, coords }
    }

    pub fn from_rational(field: Arc<NumberField>, q: BigRational) -> Self {
        let mut coords = vec![BigRational::zero(); field.degree];
        coords[0] = q;
        FieldElement { field, coords }
    }

    pub fn from_int(field: Arc<NumberField>, n: i64) -> Self {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero(field: Arc<NumberField>) -> Self {
        Self::from_int(field, 0)
    }

    pub fn one(field: Arc<NumberField>) -> Self {
        Self::from_int(field, 1)
    }

    /// The power-basis generator t.
    pub fn generator(field: Arc<NumberField>) -> Self {
        let n = field.degree;
        let mut coords = vec![BigRational::zero(); n];
        if n == 1 {
            // degree-1 fields are the rationals; t is the rational root
            coords[0] = -field.minpoly.coeff(0);
        } else {
            coords[1] = BigRational::one();
        }
        FieldElement { field, coords }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coords[0].is_one() && self.coords[1..].iter().all(Zero::is_zero)
    }

    /// Rational value if the element lies in the prime field.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coords[1..].iter().all(Zero::is_zero) {
            Some(&self.coords[0])
        } else {
            None
        }
    }

    fn same_field(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.field, &other.field) || *self.field == *other.field
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_field(other), "field mismatch");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.same_field(other), "field mismatch");
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect();
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn neg(&self) -> Self {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert!(self.same_field(other), "field mismatch");
        let n = self.field.degree;
        let mut conv = vec![BigRational::zero(); 2 * n - 1];
        for (i, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coords.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                conv[i + j] = &conv[i + j] + a * b;
            }
        }
        let mut coords: Vec<BigRational> = conv[..n].to_vec();
        for (k, c) in conv[n..].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, red) in self.field.power_table[k].iter().enumerate() {
                coords[i] = &coords[i] + c * red;
            }
        }
        FieldElement { field: self.field.clone(), coords }
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        FieldElement {
            field: self.field.clone(),
            coords: self.coords.iter().map(|a| a * q).collect(),
        }
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    pub fn inverse(&self) -> Result<Self, NumFieldError> {
        if self.is_zero() {
            return Err(NumFieldError::DivisionByZero);
        }
        // extended Euclid: u * self + v * minpoly = 1 in Q[x]
        let a = QPoly::new(self.coords.clone());
        let m = self.field.minpoly.clone();
        let (mut r0, mut r1) = (m, a);
        let (mut s0, mut s1) = (QPoly::zero(), QPoly::new(vec![BigRational::one()]));
        while !r1.is_zero() && r1.degree() > 0 {
            let (q, r) = r0.divmod(&r1);
            let s = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r1 is a nonzero constant: gcd(minpoly, a) = 1 by irreducibility
        let c = r1.coeff(0);
        debug_assert!(!c.is_zero());
        let inv_coeffs: Vec<BigRational> = (0..self.field.degree)
            .map(|i| s1.coeff(i) / &c)
            .collect();
        Ok(FieldElement::new(self.field.clone(), inv_coeffs))
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumFieldError> {
        Ok(self.mul(&other.inverse()?))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = FieldElement::one(self.field.clone());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Certified enclosure of the image under place `place` (1-based), of
    /// width at most `width`. Narrower requests yield nested intervals: the
    /// evaluation always walks the same refinement chain of the root
    /// enclosure, and interval evaluation is inclusion-isotone.
    pub fn embed(&self, place: usize, width: &BigRational) -> RatInterval {
        let p = QPoly::new(self.coords.clone());
        let quick = p.eval_interval(self.field.quick_enclosure(place));
        if &quick.width() <= width {
            return quick;
        }
        let mut target = self.field.place_enclosure(place).width();
        loop {
            let root = self.field.refined_enclosure(place, &target);
            let val = p.eval_interval(&root);
            if &val.width() <= width {
                return val;
            }
            target = target / BigRational::from_integer(4.into());
        }
    }

    /// Midpoint of a tight enclosure, as f64.
    pub fn to_f64(&self, place: usize) -> f64 {
        if let Some(q) = self.as_rational() {
            return rational_to_f64(q);
        }
        let width = BigRational::new(BigInt::one(), BigInt::one() << 96);
        rational_to_f64(&self.embed(place, &width).midpoint())
    }

    /// Exact sign of the image under place `place`. Nonzero elements have
    /// nonzero images, so the refinement loop terminates.
    pub fn sign_at(&self, place: usize) -> Ordering {
        if self.is_zero() {
            return Ordering::Equal;
        }
        if let Some(q) = self.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        let p = QPoly::new(self.coords.clone());
        if let Some(s) = p.eval_interval(self.field.quick_enclosure(place)).sign() {
            return s;
        }
        let mut target = self.field.place_enclosure(place).width();
        loop {
            let root = self.field.refined_enclosure(place, &target);
            if let Some(s) = p.eval_interval(&root).sign() {
                return s;
            }
            target = target / BigRational::from_integer(4.into());
        }
    }

    /// Exact comparison of embedded images: sign of `self - other` at place.
    pub fn cmp_at(&self, other: &Self, place: usize) -> Ordering {
        self.sub(other).sign_at(place)
    }

    /// Monic minimal polynomial over the rationals.
    pub fn minimal_polynomial(&self) -> QPoly {
        let n = self.field.degree;
        // rows: coordinates of 1, x, x^2, ... until dependence
        let mut powers: Vec<FieldElement> = vec![FieldElement::one(self.field.clone())];
        loop {
            let k = powers.len();
            let rows: Vec<Vec<BigRational>> = powers.iter().map(|e| e.coords.clone()).collect();
            let next = powers.last().unwrap().mul(self);
            if let Some(combo) = express_in_span(&rows, &next.coords) {
                // x^k = sum combo_i x^i  =>  minpoly = x^k - sum combo_i x^i
                let mut coeffs: Vec<BigRational> = combo.iter().map(|c| -c).collect();
                coeffs.push(BigRational::one());
                return QPoly::new(coeffs);
            }
            powers.push(next);
            assert!(k < n, "power basis dependence must appear by degree n");
        }
    }

    /// Degree of the minimal polynomial; divides the field degree.
    pub fn degree(&self) -> usize {
        self.minimal_polynomial().degree()
    }

    /// True iff the minimal polynomial has integer coefficients.
    pub fn is_integral(&self) -> bool {
        self.minimal_polynomial()
            .coeffs()
            .iter()
            .all(|c| c.denom().is_one())
    }

    /// True iff every power-basis coordinate is an integer. This is
    /// membership in the Z-span of the power basis, the notion the standard
    /// order is built on; it is finer than `is_integral`.
    pub fn is_power_basis_integral(&self) -> bool {
        self.coords.iter().all(|c| c.denom().is_one())
    }
}

fn poly_mul(a: &QPoly, b: &QPoly) -> QPoly {
    let mut out = vec![BigRational::zero(); a.degree() + b.degree() + 1];
    for (i, x) in a.coeffs().iter().enumerate() {
        for (j, y) in b.coeffs().iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    QPoly::new(out)
}

fn poly_sub(a: &QPoly, b: &QPoly) -> QPoly {
    let len = a.coeffs().len().max(b.coeffs().len());
    let out = (0..len).map(|i| a.coeff(i) - b.coeff(i)).collect();
    QPoly::new(out)
}

/// If `target` lies in the row span, return its coefficients.
fn express_in_span(rows: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = target.len();
    let k = rows.len();
    // Gaussian elimination on the transpose system: sum c_i rows[i] = target
    let mut mat: Vec<Vec<BigRational>> = (0..n)
        .map(|col| {
            let mut row: Vec<BigRational> = rows.iter().map(|r| r[col].clone()).collect();
            row.push(target[col].clone());
            row
        })
        .collect();
    let mut pivot_rows = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..n).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].clone();
        for j in c..=k {
            mat[r][j] = &mat[r][j] / &inv;
        }
        for i in 0..n {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                for j in c..=k {
                    let t = &mat[r][j] * &f;
                    mat[i][j] = &mat[i][j] - &t;
                }
            }
        }
        pivot_rows.push((r, c));
        r += 1;
    }
    // inconsistent if any zero-row has nonzero rhs
    for i in r..n {
        if !mat[i][k].is_zero() {
            return None;
        }
    }
    let mut combo = vec![BigRational::zero(); k];
    for &(row, col) in &pivot_rows {
        combo[col] = mat[row][k].clone();
    }
    Some(combo)
}

/// The subfield a set of elements generates, with its rational dimension.
#[derive(Debug, Clone)]
pub struct SubfieldProfile {
    pub generators: Vec<FieldElement>,
    pub dimension: usize,
}

/// Dimension over the rationals of the smallest unital, multiplicatively
/// closed subspace containing `gens`: iterated linear-span closure under
/// products, which stabilizes at or below the field degree.
pub fn subfield_dimension(gens: &[FieldElement]) -> SubfieldProfile {
    assert!(!gens.is_empty(), "subfield of an empty set");
    let field = gens[0].field().clone();
    let mut basis: Vec<FieldElement> = Vec::new();
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    let add = |rows: &mut Vec<Vec<BigRational>>, basis: &mut Vec<FieldElement>, e: &FieldElement| -> bool {
        if express_in_span(rows, e.coords()).is_some() {
            return false;
        }
        rows.push(e.coords().to_vec());
        basis.push(e.clone());
        true
    };
    add(&mut rows, &mut basis, &FieldElement::one(field.clone()));
    for g in gens {
        add(&mut rows, &mut basis, g);
    }
    loop {
        let mut grew = false;
        let snapshot = basis.clone();
        for (i, a) in snapshot.iter().enumerate() {
            for b in &snapshot[i..] {
                let p = a.mul(b);
                if add(&mut rows, &mut basis, &p) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    SubfieldProfile {
        generators: gens.to_vec(),
        dimension: basis.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int_poly(cs: &[i64]) -> QPoly {
        QPoly::new(cs.iter().map(|&c| BigRational::from_integer(BigInt::from(c))).collect())
    }

    fn sqrt2_field() -> Arc<NumberField> {
        make_field(int_poly(&[-2, 0, 1])).unwrap()
    }

    #[test]
    fn make_field_examples() {
        let f = sqrt2_field();
        assert_eq!(f.degree(), 2);
        // default identity embedding is the positive root
        let t = FieldElement::generator(f.clone());
        assert!((t.to_f64(1) - 1.41421356).abs() < 1e-7);
        assert!((t.to_f64(2) + 1.41421356).abs() < 1e-7);

        assert_eq!(
            make_field(int_poly(&[1, 0, 1])).unwrap_err(),
            NumFieldError::NotTotallyReal
        );
        let cubic = make_field(int_poly(&[-1, -3, 0, 1])).unwrap();
        assert_eq!(cubic.degree(), 3);

        assert_eq!(
            make_field(int_poly(&[-1, 0, 2])).unwrap_err(),
            NumFieldError::NotMonic
        );
        assert_eq!(
            make_field(int_poly(&[-4, 0, 0, 0, 0, 1])).unwrap_err(),
            NumFieldError::UnsupportedDegree(5)
        );
        assert_eq!(
            make_field(int_poly(&[-1, 0, 1])).unwrap_err(),
            NumFieldError::NotIrreducible
        );
    }

    #[test]
    fn arithmetic_examples() {
        let f = sqrt2_field();
        let t = FieldElement::generator(f.clone());
        // t * t = 2
        assert_eq!(t.mul(&t), FieldElement::from_int(f.clone(), 2));
        // oracle first: (1 + t)(-1 + t) = 1, hence 1/(1+t) = -1 + t
        let one_plus = FieldElement::one(f.clone()).add(&t);
        let candidate = t.sub(&FieldElement::one(f.clone()));
        assert!(one_plus.mul(&candidate).is_one());
        assert_eq!(
            FieldElement::one(f.clone()).div(&one_plus).unwrap(),
            candidate
        );
        // 1/2 + 1/3 = 5/6
        let a = FieldElement::from_rational(f.clone(), rat(1, 2));
        let b = FieldElement::from_rational(f.clone(), rat(1, 3));
        assert_eq!(a.add(&b).as_rational(), Some(&rat(5, 6)));
        // division by zero
        assert_eq!(
            t.div(&FieldElement::zero(f.clone())).unwrap_err(),
            NumFieldError::DivisionByZero
        );
    }

    #[test]
    fn embeddings() {
        let f = sqrt2_field();
        let t = FieldElement::generator(f.clone());
        let one_plus = FieldElement::one(f.clone()).add(&t);
        let w = rat(1, 1 << 40);
        let e1 = one_plus.embed(1, &w);
        assert!((e1.to_f64_mid() - 2.41421356).abs() < 1e-7);
        let e2 = one_plus.embed(2, &w);
        assert!((e2.to_f64_mid() + 0.41421356).abs() < 1e-7);
        // rationals are fixed by every embedding, as exact points
        let five = FieldElement::from_int(f.clone(), 5);
        let e = five.embed(2, &w);
        assert_eq!(e.lo, rat(5, 1));
        assert_eq!(e.hi, rat(5, 1));
        // nesting under narrower requests
        let wide = one_plus.embed(1, &rat(1, 1024));
        let tight = one_plus.embed(1, &rat(1, 1 << 50));
        assert!(wide.contains_interval(&tight));
    }

    #[test]
    fn embed_respects_products() {
        let f = sqrt2_field();
        let t = FieldElement::generator(f.clone());
        let x = FieldElement::new(f.clone(), vec![rat(3, 7), rat(-2, 5)]);
        let y = t.add(&FieldElement::from_int(f.clone(), 4));
        let w = rat(1, 1 << 60);
        for place in 1..=2 {
            let prod = x.mul(&y).embed(place, &w);
            let hull = x.embed(place, &w).mul(&y.embed(place, &w));
            assert!(hull.contains(&prod.midpoint()));
        }
    }

    #[test]
    fn degrees_and_integrality() {
        let f = sqrt2_field();
        let t = FieldElement::generator(f.clone());
        assert_eq!(t.degree(), 2);
        assert_eq!(FieldElement::from_rational(f.clone(), rat(3, 2)).degree(), 1);
        assert_eq!(t.square().degree(), 1); // t^2 = 2 is rational

        assert!(t.is_integral());
        assert!(!FieldElement::from_rational(f.clone(), rat(1, 2)).is_integral());
        // minimal polynomial of t/2 is x^2 - 1/2
        let half_t = t.mul_rational(&rat(1, 2));
        let mp = half_t.minimal_polynomial();
        assert_eq!(mp.coeff(0), rat(-1, 2));
        assert_eq!(mp.coeff(1), rat(0, 1));
        assert_eq!(mp.coeff(2), rat(1, 1));
        assert!(!half_t.is_integral());
        assert!(t.is_power_basis_integral());
        assert!(!half_t.is_power_basis_integral());
    }

    #[test]
    fn subfield_dimensions() {
        let f = sqrt2_field();
        let t = FieldElement::generator(f.clone());
        let two_plus_t = FieldElement::from_int(f.clone(), 2).add(&t);
        assert_eq!(subfield_dimension(&[two_plus_t.clone()]).dimension, 2);
        let rats = [
            FieldElement::from_int(f.clone(), 3),
            FieldElement::from_rational(f.clone(), rat(7, 2)),
        ];
        assert_eq!(subfield_dimension(&rats).dimension, 1);
        assert_eq!(subfield_dimension(&[t.square()]).dimension, 1);
        // monotone under inclusion, invariant under adding products
        let with_more = [two_plus_t.clone(), two_plus_t.square()];
        assert_eq!(subfield_dimension(&with_more).dimension, 2);
    }

    #[test]
    fn field_axioms_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        let f = sqrt2_field();
        let random_elt = |rng: &mut rand_chacha::ChaCha8Rng| {
            let c0 = rat(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            let c1 = rat(rng.gen_range(-9..=9), rng.gen_range(1..=4));
            FieldElement::new(f.clone(), vec![c0, c1])
        };
        for _ in 0..200 {
            let x = random_elt(&mut rng);
            let y = random_elt(&mut rng);
            let z = random_elt(&mut rng);
            assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
            assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
            if !y.is_zero() {
                assert_eq!(x.mul(&y).div(&y).unwrap(), x);
            }
        }
    }

    #[test]
    fn embedding_multiset_matches_conjugate_roots() {
        // the images of x under all places are the roots of its minimal
        // polynomial, each with multiplicity n / degree(x)
        let f = sqrt2_field();
        let t = FieldElement::generator(f.clone());
        let x = t.add(&FieldElement::from_int(f.clone(), 1));
        let mp = x.minimal_polynomial();
        let roots = poly::isolate_real_roots(&mp);
        assert_eq!(roots.len(), 2);
        let w = BigRational::new(BigInt::one(), BigInt::one() << 80);
        let mut embeds: Vec<f64> = (1..=2).map(|p| x.embed(p, &w).to_f64_mid()).collect();
        embeds.sort_by(f64::total_cmp);
        let mut root_mids: Vec<f64> = roots
            .iter()
            .map(|iv| poly::refine_sign_change(&mp, iv, &w).to_f64_mid())
            .collect();
        root_mids.sort_by(f64::total_cmp);
        for (a, b) in embeds.iter().zip(&root_mids) {
            assert!((a - b).abs() < 1e-12);
        }
        // rational element: single root, multiplicity n
        let q = FieldElement::from_rational(f.clone(), rat(7, 3));
        assert_eq!(q.degree(), 1);
        for p in 1..=2 {
            assert_eq!(q.embed(p, &w).midpoint(), rat(7, 3));
        }
    }

    #[test]
    fn phi1_override() {
        let f = make_field_with_phi1(int_poly(&[-2, 0, 1]), 1).unwrap();
        let t = FieldElement::generator(f.clone());
        assert!(t.to_f64(1) < 0.0);
        assert!(t.to_f64(2) > 0.0);
        assert_eq!(f.phi1_root_index(), 1);
    }
}
