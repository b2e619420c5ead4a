//! Closed rational intervals with outward rounding to dyadic endpoints.
//!
//! Used where a transcendental value (here only `exp(-x)`) meets exact
//! counts: every result is an enclosure, so comparisons between enclosures
//! are rigorous.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Interval {
    pub fn point(x: BigRational) -> Self {
        Interval {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "empty interval");
        Interval { lo, hi }
    }

    pub fn zero() -> Self {
        Interval::point(BigRational::zero())
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
        }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
        }
    }

    /// Product with an exact scalar of either sign.
    pub fn scale(&self, c: &BigRational) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            Interval { lo: b, hi: a }
        } else {
            Interval { lo: a, hi: b }
        }
    }

    pub fn abs(&self) -> Interval {
        if !self.lo.is_negative() {
            self.clone()
        } else if !self.hi.is_positive() {
            Interval {
                lo: -self.hi.clone(),
                hi: -self.lo.clone(),
            }
        } else {
            let hi = if -self.lo.clone() > self.hi {
                -self.lo.clone()
            } else {
                self.hi.clone()
            };
            Interval {
                lo: BigRational::zero(),
                hi,
            }
        }
    }

    /// Widens both endpoints to multiples of `2^-bits`.
    pub fn round_outward(&self, bits: usize) -> Interval {
        let scale = BigInt::one() << bits;
        let down = |x: &BigRational| {
            let scaled = x * BigRational::from_integer(scale.clone());
            BigRational::new(scaled.numer().div_floor(scaled.denom()), scale.clone())
        };
        let up = |x: &BigRational| {
            let scaled = x * BigRational::from_integer(scale.clone());
            BigRational::new(scaled.numer().div_ceil(scaled.denom()), scale.clone())
        };
        Interval {
            lo: down(&self.lo),
            hi: up(&self.hi),
        }
    }

    /// `self` lies entirely below `other`.
    pub fn strictly_below(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigRational::from_integer(BigInt::from(2)))
            .to_f64()
            .unwrap_or(f64::NAN)
    }

    pub fn hi_f64(&self) -> f64 {
        self.hi.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{:.15e}, {:.15e}]",
            self.lo.to_f64().unwrap_or(f64::NAN),
            self.hi.to_f64().unwrap_or(f64::NAN)
        )
    }
}

/// Enclosure of `exp(-x)` for rational `x >= 0`, tight to about `2^-bits`.
pub fn exp_neg(x: &BigRational, bits: usize) -> Interval {
    assert!(!x.is_negative(), "exp_neg needs x >= 0");
    let eps = BigRational::new(BigInt::one(), BigInt::one() << (bits + 2));
    // exp(x) = sum_{i<N} x^i/i! + R, 0 <= R <= x^N/N! / (1 - x/(N+1)) once N+1 > x
    let mut partial = BigRational::zero();
    let mut term = BigRational::one();
    let mut i = 0usize;
    loop {
        let next_index = BigRational::from_integer(BigInt::from(i + 1));
        if x < &next_index && term < eps {
            let ratio = x / &next_index;
            let tail = &term / (BigRational::one() - ratio);
            let lower = partial.clone();
            let upper = &partial + tail;
            let out = Interval {
                lo: upper.recip(),
                hi: lower.recip(),
            };
            return out.round_outward(bits);
        }
        partial += &term;
        term = &term * x / &next_index;
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn exp_neg_encloses_known_values() {
        let e1 = exp_neg(&r(1, 1), 80);
        let truth = (-1.0f64).exp();
        assert!(e1.lo.to_f64().unwrap() <= truth && truth <= e1.hi.to_f64().unwrap());
        assert!(e1.width() < r(1, 1 << 40));
        let e0 = exp_neg(&r(0, 1), 40);
        assert!(e0.lo <= r(1, 1) && r(1, 1) <= e0.hi);
        let e2 = exp_neg(&r(2, 3), 60);
        let t2 = (-2.0f64 / 3.0).exp();
        assert!((e2.midpoint_f64() - t2).abs() < 1e-15);
    }

    #[test]
    fn abs_and_rounding() {
        let i = Interval::new(r(-1, 3), r(1, 2));
        assert_eq!(i.abs(), Interval::new(r(0, 1), r(1, 2)));
        let j = Interval::new(r(-3, 4), r(-1, 4)).abs();
        assert_eq!(j, Interval::new(r(1, 4), r(3, 4)));
        let k = Interval::point(r(1, 3)).round_outward(4);
        assert!(k.lo <= r(1, 3) && r(1, 3) <= k.hi);
        assert_eq!(k.width(), r(1, 16));
    }
}
