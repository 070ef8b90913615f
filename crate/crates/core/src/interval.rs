//! Outward-rounded enclosures of real quantities.
//!
//! Every arithmetic result is widened by one ulp on each side, so an
//! `IntervalValue` built from exact inputs always contains the exact result
//! of the same real-number expression.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntervalValue {
    pub lo: f64,
    pub hi: f64,
}

impl IntervalValue {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(invalid(format!("interval bounds must be finite, got [{lo}, {hi}]")));
        }
        if lo > hi {
            return Err(invalid(format!("interval lower bound {lo} exceeds upper bound {hi}")));
        }
        Ok(Self { lo, hi })
    }

    /// Degenerate interval holding a value that is exact in f64.
    pub const fn exact(x: f64) -> Self {
        Self { lo: x, hi: x }
    }

    /// Interval around a computed value whose rounding error is at most `ulps` ulps.
    pub fn around(x: f64, ulps: u32) -> Self {
        let mut lo = x;
        let mut hi = x;
        for _ in 0..ulps {
            lo = lo.next_down();
            hi = hi.next_up();
        }
        Self { lo, hi }
    }

    pub(crate) fn outward(lo: f64, hi: f64) -> Self {
        debug_assert!(lo <= hi, "outward({lo}, {hi})");
        Self { lo: lo.next_down(), hi: hi.next_up() }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    /// True when every point of `self` is strictly below every point of `other`.
    pub fn strictly_below(&self, other: &IntervalValue) -> bool {
        self.hi < other.lo
    }

    pub fn is_subset_of(&self, other: &IntervalValue) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn scale(self, k: f64) -> Self {
        if k >= 0.0 {
            Self::outward(self.lo * k, self.hi * k)
        } else {
            Self::outward(self.hi * k, self.lo * k)
        }
    }

    /// Quotient; `other` must not contain zero.
    pub fn checked_div(self, other: Self) -> Result<Self> {
        if other.contains(0.0) {
            return Err(invalid("interval division by an interval containing zero"));
        }
        let c = [self.lo / other.lo, self.lo / other.hi, self.hi / other.lo, self.hi / other.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self::outward(lo, hi))
    }

    pub fn hull(self, other: Self) -> Self {
        Self { lo: self.lo.min(other.lo), hi: self.hi.max(other.hi) }
    }
}

impl Add for IntervalValue {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::outward(self.lo + rhs.lo, self.hi + rhs.hi)
    }
}

impl Sub for IntervalValue {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::outward(self.lo - rhs.hi, self.hi - rhs.lo)
    }
}

impl Neg for IntervalValue {
    type Output = Self;
    fn neg(self) -> Self {
        Self { lo: -self.hi, hi: -self.lo }
    }
}

impl fmt::Display for IntervalValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12}, {:.12}]", self.lo, self.hi)
    }
}

impl Mul for IntervalValue {
    type Output = Self;

    fn mul(self, other: Self) -> Self {
        let c = [self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi];
        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self::outward(lo, hi)
    }
}

/// Enclosure of pi.
pub const PI: IntervalValue = IntervalValue { lo: std::f64::consts::PI, hi: 3.141_592_653_589_793_6 };

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_inverted_and_nonfinite() {
        assert!(IntervalValue::new(1.0, 0.0).is_err());
        assert!(IntervalValue::new(f64::NAN, 0.0).is_err());
        assert!(IntervalValue::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn pi_enclosure_contains_std_pi() {
        assert!(PI.contains(std::f64::consts::PI));
        assert_eq!(PI.hi, PI.lo.next_up());
    }

    #[test]
    fn arithmetic_encloses_exact_sum() {
        // 0.1 + 0.2 is inexact in binary; the enclosure must still contain 0.3
        let a = IntervalValue::around(0.1, 1);
        let b = IntervalValue::around(0.2, 1);
        let s = a + b;
        assert!(s.contains(0.3));
        assert!(s.width() < 1e-15);
        let d = s - a;
        assert!(d.contains(0.2));
    }

    #[test]
    fn division_by_zero_interval_fails() {
        let a = IntervalValue::exact(1.0);
        assert!(a.checked_div(IntervalValue::new(-1.0, 1.0).unwrap()).is_err());
        let q = a.checked_div(IntervalValue::exact(3.0)).unwrap();
        assert!(q.contains(1.0 / 3.0));
    }
}
