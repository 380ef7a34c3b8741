use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// A nondegenerate closed interval, `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) {
            return Err(CoreError::Domain(format!(
                "interval needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    /// Interval spanned by two points in either order.
    pub fn spanning(a: f64, b: f64) -> Result<Self> {
        Self::new(a.min(b), a.max(b))
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn contains_interval(&self, other: &Interval, tol: f64) -> bool {
        self.lo - tol <= other.lo && other.hi <= self.hi + tol
    }

    pub fn strictly_inside(&self, outer: &Interval) -> bool {
        outer.lo < self.lo && self.hi < outer.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo < other.hi && other.lo < self.hi
    }

    /// Distance between this interval and a point.
    pub fn dist_to_point(&self, x: f64) -> f64 {
        if x < self.lo {
            self.lo - x
        } else if x > self.hi {
            x - self.hi
        } else {
            0.0
        }
    }

    /// Clamp a point into the interval.
    pub fn clamp(&self, x: f64) -> f64 {
        x.max(self.lo).min(self.hi)
    }
}

/// Affine map t -> a + b*t.  Charts between [0,1] and tower intervals are
/// stored in this form; `b` may be negative (orientation reversing).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub a: f64,
    pub b: f64,
}

impl Affine {
    pub fn identity() -> Self {
        Affine { a: 0.0, b: 1.0 }
    }

    /// The affine map sending 0 -> p and 1 -> q.
    pub fn from_unit(p: f64, q: f64) -> Self {
        Affine { a: p, b: q - p }
    }

    pub fn apply(&self, t: f64) -> f64 {
        self.a + self.b * t
    }

    pub fn invert(&self, y: f64) -> f64 {
        (y - self.a) / self.b
    }

    pub fn slope(&self) -> f64 {
        self.b
    }

    /// self ∘ other
    pub fn compose(&self, other: &Affine) -> Affine {
        Affine {
            a: self.a + self.b * other.a,
            b: self.b * other.b,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_rejects_degenerate() {
        assert!(Interval::new(0.5, 0.5).is_err());
        assert!(Interval::new(0.7, 0.2).is_err());
    }

    #[test]
    fn spanning_orders_endpoints() {
        let iv = Interval::spanning(0.9, 0.1).unwrap();
        assert_eq!(iv.lo, 0.1);
        assert_eq!(iv.hi, 0.9);
    }

    #[test]
    fn affine_roundtrip() {
        let h = Affine::from_unit(0.4, 0.0);
        assert_eq!(h.apply(0.0), 0.4);
        assert_eq!(h.apply(1.0), 0.0);
        let x = 0.273;
        assert!((h.invert(h.apply(x)) - x).abs() < 1e-15);
    }
}
