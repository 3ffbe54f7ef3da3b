//! Closed intervals with rational endpoints.
//!
//! These are the certified enclosures behind every real embedding: interval
//! evaluation of a polynomial with rational coefficients is
//! inclusion-isotone, so refining the enclosure of the field generator
//! yields nested enclosures of every derived value.

use crate::fixed::rational_to_f64;
use num_rational::BigRational;
use num_traits::Zero;
use std::cmp::Ordering;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RatInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        RatInterval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        RatInterval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigRational::from_integer(2.into())
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, other: &RatInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Sign of every point in the interval, or `None` if it straddles zero.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo > BigRational::zero() {
            Some(Ordering::Greater)
        } else if self.hi < BigRational::zero() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn add(&self, other: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn add_scalar(&self, s: &BigRational) -> RatInterval {
        RatInterval {
            lo: &self.lo + s,
            hi: &self.hi + s,
        }
    }

    pub fn mul(&self, other: &RatInterval) -> RatInterval {
        let cands = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        RatInterval { lo, hi }
    }

    pub fn mul_scalar(&self, s: &BigRational) -> RatInterval {
        let a = &self.lo * s;
        let b = &self.hi * s;
        if a <= b {
            RatInterval { lo: a, hi: b }
        } else {
            RatInterval { lo: b, hi: a }
        }
    }

    pub fn to_f64_mid(&self) -> f64 {
        rational_to_f64(&self.midpoint())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn interval_products_cover_endpoints() {
        let a = RatInterval::new(rat(-1, 2), rat(3, 1));
        let b = RatInterval::new(rat(-2, 1), rat(1, 3));
        let p = a.mul(&b);
        assert_eq!(p.lo, rat(-6, 1));
        assert_eq!(p.hi, rat(1, 1));
    }

    #[test]
    fn sign_detection() {
        assert_eq!(
            RatInterval::new(rat(1, 7), rat(2, 7)).sign(),
            Some(Ordering::Greater)
        );
        assert_eq!(RatInterval::new(rat(-1, 7), rat(2, 7)).sign(), None);
        assert_eq!(
            RatInterval::point(rat(0, 1)).sign(),
            Some(Ordering::Equal)
        );
    }
}
