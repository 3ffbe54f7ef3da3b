//! Deterministic fixed-point reals on a 192-bit binary scale.
//!
//! Translation directions must collapse algebraically equal inputs to the
//! same output bits: a conjugate has the same trace, a power has a length
//! that is an exact integer multiple. Computing lengths through `f64`
//! transcendentals breaks those identities in the last bits, so lengths are
//! evaluated here instead: pure `BigInt` arithmetic on a fixed scale, then a
//! single correctly rounded conversion to `f64` at the very end. Two
//! mathematically equal directions agree to ~140 bits before rounding and
//! therefore round to identical doubles.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

/// Fractional bits carried by every [`FixedReal`].
pub const SCALE_BITS: u64 = 192;

/// A real number represented as `mantissa / 2^SCALE_BITS`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FixedReal(BigInt);

fn one_scaled() -> BigInt {
    BigInt::from(1) << SCALE_BITS
}

impl FixedReal {
    pub fn zero() -> Self {
        FixedReal(BigInt::zero())
    }

    pub fn one() -> Self {
        FixedReal(one_scaled())
    }

    pub fn from_int(n: i64) -> Self {
        FixedReal(BigInt::from(n) << SCALE_BITS)
    }

    /// Nearest representable value below or at `r`.
    pub fn from_ratio(r: &BigRational) -> Self {
        FixedReal((r.numer() << SCALE_BITS).div_floor(r.denom()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn abs(&self) -> Self {
        FixedReal(self.0.abs())
    }

    pub fn div(&self, rhs: &Self) -> Self {
        assert!(!rhs.0.is_zero(), "fixed-point division by zero");
        FixedReal((&self.0 << SCALE_BITS).div_floor(&rhs.0))
    }

    /// Floor square root; requires a nonnegative value.
    pub fn sqrt(&self) -> Self {
        assert!(!self.0.is_negative(), "fixed-point sqrt of negative value");
        FixedReal((&self.0 << SCALE_BITS).sqrt())
    }

    /// Natural logarithm; requires a positive value.
    ///
    /// Range-reduces to `m in [1, 2)` and sums `2*atanh((m-1)/(m+1))`,
    /// which converges one bit every ~1.6 terms at worst.
    pub fn ln(&self) -> Self {
        assert!(self.0.is_positive(), "fixed-point ln of nonpositive value");
        let bits = self.0.bits();
        // self = m * 2^k with m in [1, 2)
        let k = bits as i64 - 1 - SCALE_BITS as i64;
        let m = if k >= 0 {
            FixedReal(&self.0 >> (k as u64))
        } else {
            FixedReal(&self.0 << ((-k) as u64))
        };
        let num = m.clone() - FixedReal::one();
        let den = m + FixedReal::one();
        let ln_m = atanh_series(&num.div(&den)).scale_int(2);
        let k_ln2 = FixedReal(ln2_scaled() * BigInt::from(k));
        ln_m + k_ln2
    }

    /// `arccosh(x) = ln(x + sqrt(x^2 - 1))`; requires `x >= 1`.
    pub fn arccosh(&self) -> Self {
        let one = FixedReal::one();
        assert!(self.0 >= one.0, "arccosh domain requires x >= 1");
        let disc = self.clone() * self.clone() - one;
        (self.clone() + disc.sqrt()).ln()
    }

    fn scale_int(&self, n: i64) -> Self {
        FixedReal(&self.0 * BigInt::from(n))
    }

    /// Correctly rounded (nearest, ties to even) conversion to `f64`.
    pub fn to_f64(&self) -> f64 {
        if self.0.is_zero() {
            return 0.0;
        }
        let neg = self.0.is_negative();
        let a = self.0.abs();
        let bits = a.bits();
        // Keep 54 bits: 53-bit mantissa plus a guard bit for rounding.
        let (mut top, exp2) = if bits > 53 {
            let shift = bits - 54;
            let mut t = (&a >> shift).to_u64().expect("54-bit window");
            let sticky = a.trailing_zeros().unwrap_or(0) < shift;
            // round to nearest, ties to even on the guard bit
            let guard = t & 1;
            t >>= 1;
            if guard == 1 && (sticky || t & 1 == 1) {
                t += 1;
            }
            (t, shift as i64 + 1 - SCALE_BITS as i64)
        } else {
            (a.to_u64().expect("small mantissa"), -(SCALE_BITS as i64))
        };
        let mut exp = exp2 as i32;
        // normalize in case rounding carried into a new bit
        while top >= (1u64 << 54) {
            top >>= 1;
            exp += 1;
        }
        let v = top as f64 * 2f64.powi(exp);
        if neg {
            -v
        } else {
            v
        }
    }
}

impl Add for FixedReal {
    type Output = FixedReal;
    fn add(self, rhs: Self) -> Self {
        FixedReal(self.0 + rhs.0)
    }
}

impl Sub for FixedReal {
    type Output = FixedReal;
    fn sub(self, rhs: Self) -> Self {
        FixedReal(self.0 - rhs.0)
    }
}

impl Mul for FixedReal {
    type Output = FixedReal;
    fn mul(self, rhs: Self) -> Self {
        FixedReal((self.0 * rhs.0).div_floor(&one_scaled()))
    }
}

/// `atanh(u) = u + u^3/3 + u^5/5 + ...` for `|u| < 1`.
fn atanh_series(u: &FixedReal) -> FixedReal {
    let u2 = u.clone() * u.clone();
    let mut term = u.clone();
    let mut acc = u.clone();
    let mut n = 3i64;
    loop {
        term = term * u2.clone();
        if term.0.is_zero() {
            break;
        }
        acc = acc + FixedReal(term.0.div_floor(&BigInt::from(n)));
        n += 2;
        if n > 4 * SCALE_BITS as i64 {
            break;
        }
    }
    acc
}

fn ln2_scaled() -> &'static BigInt {
    static LN2: OnceLock<BigInt> = OnceLock::new();
    LN2.get_or_init(|| {
        // ln 2 = 2 atanh(1/3)
        let third = FixedReal(one_scaled().div_floor(&BigInt::from(3)));
        atanh_series(&third).scale_int(2).0
    })
}

/// Correctly rounded rational-to-f64 conversion, shared by everything that
/// crosses from exact values to floating output.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    FixedReal::from_ratio(r).to_f64()
}
