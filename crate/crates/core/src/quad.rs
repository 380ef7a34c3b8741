use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};

/// The normalized quadratic unimodal map with critical point `c`:
/// q(x) = 1 - ((x-c)/(1-c))^2, so q(c) = 1 and q(1) = 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quadratic {
    pub c: f64,
}

/// q_c(x) for c in (0,1).
pub fn eval_quadratic(c: f64, x: f64) -> Result<f64> {
    if !(0.0 < c && c < 1.0) {
        return Err(CoreError::Domain(format!(
            "quadratic critical point must lie in (0,1), got {c}"
        )));
    }
    let r = (x - c) / (1.0 - c);
    Ok(1.0 - r * r)
}

impl Quadratic {
    pub fn new(c: f64) -> Result<Self> {
        if !(0.0 < c && c < 1.0) {
            return Err(CoreError::Domain(format!(
                "quadratic critical point must lie in (0,1), got {c}"
            )));
        }
        Ok(Self { c })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let r = (x - self.c) / (1.0 - self.c);
        1.0 - r * r
    }

    pub fn d1(&self, x: f64) -> f64 {
        let s = 1.0 - self.c;
        -2.0 * (x - self.c) / (s * s)
    }

    pub fn d2(&self) -> f64 {
        let s = 1.0 - self.c;
        -2.0 / (s * s)
    }

    /// Right inverse branch: the x in [c, 1+...] with q(x) = u, u <= 1.
    pub fn inv_right(&self, u: f64) -> f64 {
        self.c + (1.0 - self.c) * (1.0 - u).max(0.0).sqrt()
    }

    /// Left inverse branch: the x <= c with q(x) = u.
    pub fn inv_left(&self, u: f64) -> f64 {
        self.c - (1.0 - self.c) * (1.0 - u).max(0.0).sqrt()
    }

    /// k-fold iterate.
    pub fn iterate(&self, mut x: f64, k: usize) -> f64 {
        for _ in 0..k {
            x = self.eval(x);
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization_identities() {
        // q(c) = 1 and q(1) = 0 exactly for a spread of c values
        for &c in &[0.05, 0.25, 0.2868334471347628, 0.4999] {
            assert_eq!(eval_quadratic(c, c).unwrap(), 1.0);
            assert_eq!(eval_quadratic(c, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn critical_value_examples() {
        assert_eq!(eval_quadratic(0.5, 0.5).unwrap(), 1.0);
        assert_eq!(eval_quadratic(0.3, 1.0).unwrap(), 0.0);
        // (0.25/0.75)^2 = 1/9
        let v = eval_quadratic(0.25, 0.0).unwrap();
        assert!((v - 8.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_c() {
        assert!(eval_quadratic(0.0, 0.5).is_err());
        assert!(eval_quadratic(1.0, 0.5).is_err());
        assert!(eval_quadratic(-0.2, 0.5).is_err());
    }

    #[test]
    fn inverse_branches() {
        let q = Quadratic::new(0.3).unwrap();
        for &u in &[0.0, 0.21, 0.77, 1.0] {
            let xr = q.inv_right(u);
            let xl = q.inv_left(u);
            assert!((q.eval(xr) - u).abs() < 1e-14);
            assert!((q.eval(xl) - u).abs() < 1e-14);
            assert!(xl <= q.c && q.c <= xr);
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let q = Quadratic::new(0.37).unwrap();
        let h = 1e-6;
        for &x in &[0.1, 0.37, 0.8] {
            let fd = (q.eval(x + h) - q.eval(x - h)) / (2.0 * h);
            assert!((fd - q.d1(x)).abs() < 1e-9);
        }
    }
}
