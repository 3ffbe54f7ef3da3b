//! Schottky certificates from isometric circles.
//!
//! A transformation with lower-left entry c != 0 has isometric circle of
//! center -d/c and radius 1/|c|; it maps the exterior of its circle onto
//! the interior of the circle of its inverse. When the closed disks of all
//! generators and their inverses are pairwise disjoint, ping-pong applies:
//! the group is free on the generators, discrete, and every nontrivial
//! element is hyperbolic.

use super::{fixed_points, ExactMobius, IsometryError, Mobius};
use crate::numfield::FieldElement;
use std::cmp::Ordering;

/// Closed disk centered on the real line.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IsometricDisk {
    pub center: f64,
    pub radius: f64,
}

impl IsometricDisk {
    fn disjoint(&self, other: &IsometricDisk) -> bool {
        (self.center - other.center).abs() > self.radius + other.radius
    }
}

/// Witness that a list of hyperbolic transformations generates a Schottky
/// group: one disk pair (element, inverse) per generator, pairwise disjoint.
#[derive(Clone, Debug)]
pub struct SchottkyCertificate {
    pub disks: Vec<(IsometricDisk, IsometricDisk)>,
}

const C_ZERO: f64 = 1e-12;

fn isometric_disks(g: &Mobius) -> Result<(IsometricDisk, IsometricDisk), IsometryError> {
    if g.c.abs() <= C_ZERO {
        return Err(IsometryError::InfinityFixed);
    }
    let r = 1.0 / g.c.abs();
    Ok((
        IsometricDisk { center: -g.d / g.c, radius: r },
        IsometricDisk { center: g.a / g.c, radius: r },
    ))
}

/// Certificate for an arbitrary generator list; `None` when some pair of
/// the 2k closed disks meets.
pub fn schottky_certificate_multi(
    gens: &[Mobius],
) -> Result<Option<SchottkyCertificate>, IsometryError> {
    let mut disks = Vec::with_capacity(gens.len());
    for g in gens {
        if g.trace().abs() <= 2.0 {
            return Err(IsometryError::NotHyperbolic);
        }
        disks.push(isometric_disks(g)?);
    }
    let flat: Vec<IsometricDisk> = disks.iter().flat_map(|&(a, b)| [a, b]).collect();
    for i in 0..flat.len() {
        for j in (i + 1)..flat.len() {
            if !flat[i].disjoint(&flat[j]) {
                return Ok(None);
            }
        }
    }
    Ok(Some(SchottkyCertificate { disks }))
}

/// Two-generator certificate.
pub fn schottky_certificate(
    g: &Mobius,
    h: &Mobius,
) -> Result<Option<SchottkyCertificate>, IsometryError> {
    schottky_certificate_multi(&[*g, *h])
}

/// Exact certificate at a place: the disjointness of the 2k closed disks is
/// decided by field-element signs, so a `Some` here is a rigorous
/// discreteness and freeness proof for the projected group.
pub fn schottky_certificate_exact(
    gens: &[ExactMobius],
    place: usize,
) -> Result<bool, IsometryError> {
    if gens.is_empty() {
        return Ok(false);
    }
    let field = gens[0].field().clone();
    let two = FieldElement::from_int(field.clone(), 2);
    // (center, radius) with radius = 1/|c| kept as exact field elements
    let mut disks: Vec<(FieldElement, FieldElement)> = Vec::new();
    for g in gens {
        let tr = g.trace();
        let hyperbolic = tr.sub(&two).sign_at(place) == Ordering::Greater
            || tr.add(&two).sign_at(place) == Ordering::Less;
        if !hyperbolic {
            return Err(IsometryError::NotHyperbolic);
        }
        if g.c.is_zero() {
            return Err(IsometryError::InfinityFixed);
        }
        let abs_c = match g.c.sign_at(place) {
            Ordering::Less => g.c.neg(),
            _ => g.c.clone(),
        };
        let radius = FieldElement::one(field.clone()).div(&abs_c).expect("c nonzero");
        let center = g.d.neg().div(&g.c).expect("c nonzero");
        let center_inv = g.a.div(&g.c).expect("c nonzero");
        disks.push((center, radius.clone()));
        disks.push((center_inv, radius));
    }
    for i in 0..disks.len() {
        for j in (i + 1)..disks.len() {
            let gap = disks[i].0.sub(&disks[j].0);
            let rsum = disks[i].1.add(&disks[j].1);
            // |gap| > rsum  <=>  gap^2 - rsum^2 > 0
            let sep = gap.square().sub(&rsum.square());
            if sep.sign_at(place) != Ordering::Greater {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Smallest powers (m, n), lexicographic with m outermost, such that g^m
/// and h^n carry a Schottky certificate, after conjugating any fixed point
/// away from infinity.
pub fn find_schottky_powers(
    g: &Mobius,
    h: &Mobius,
    maxpow: u32,
) -> Result<(u32, u32, SchottkyCertificate), IsometryError> {
    let (g_att, g_rep) = fixed_points(g)?;
    let (h_att, h_rep) = fixed_points(h)?;
    for a in [&g_att, &g_rep] {
        for b in [&h_att, &h_rep] {
            if a.angular_distance(b) < 1e-9 {
                return Err(IsometryError::CommonFixedPoint);
            }
        }
    }
    // conjugate so that no fixed point sits at infinity
    let needs_conjugation = g.c.abs() <= C_ZERO || h.c.abs() <= C_ZERO;
    let (g, h) = if needs_conjugation {
        let fixed = [&g_att, &g_rep, &h_att, &h_rep];
        let p = (0..)
            .map(|k| {
                // 0, 1, -1, 2, -2, ...
                let k = k as i64;
                if k % 2 == 0 { k / 2 } else { -(k / 2) - 1 }
            })
            .map(|v| v as f64)
            .find(|&p| {
                fixed.iter().all(|f| {
                    super::BoundaryPoint::from_real(p).angular_distance(f) > 1e-3
                })
            })
            .expect("some small integer avoids four fixed points");
        let t = Mobius::new(0.0, 1.0, -1.0, p).expect("det is one");
        let ti = t.inverse();
        (t.mul(g).mul(&ti), t.mul(h).mul(&ti))
    } else {
        (*g, *h)
    };
    for m in 1..=maxpow {
        let gm = g.pow(m);
        for n in 1..=maxpow {
            let hn = h.pow(n);
            if let Some(cert) = schottky_certificate(&gm, &hn)? {
                return Ok((m, n, cert));
            }
        }
    }
    Err(IsometryError::PowersNotFound(maxpow))
}
