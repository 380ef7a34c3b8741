use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::interval::{Affine, Interval};
use crate::map::UnimodalMap;
use crate::quad::Quadratic;

/// Dense polynomial in the power basis, coefficients low to high.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly {
    pub coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::new(vec![0.0]);
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| i as f64 * c)
                .collect(),
        )
    }
}

/// Monotone C^1 interpolant of samples (Fritsch-Carlson slopes).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotoneSamples {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub slopes: Vec<f64>,
}

impl MonotoneSamples {
    /// xs strictly increasing, ys strictly monotone (either direction).
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(CoreError::InfeasibleData(
                "need at least two matching samples".into(),
            ));
        }
        if !xs.windows(2).all(|w| w[0] < w[1]) {
            return Err(CoreError::InfeasibleData("xs must be strictly increasing".into()));
        }
        let inc = ys[n - 1] > ys[0];
        if !ys.windows(2).all(|w| if inc { w[0] < w[1] } else { w[0] > w[1] }) {
            return Err(CoreError::NotMonotone { lo: xs[0], hi: xs[n - 1] });
        }
        let slopes = fritsch_carlson_slopes(&xs, &ys);
        Ok(Self { xs, ys, slopes })
    }

    fn cell(&self, x: f64) -> usize {
        match self
            .xs
            .binary_search_by(|v| v.partial_cmp(&x).expect("no NaN in samples"))
        {
            Ok(i) => i.min(self.xs.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.xs.len() - 2),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        let i = self.cell(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let h00 = (1.0 + 2.0 * t) * (1.0 - t) * (1.0 - t);
        let h10 = t * (1.0 - t) * (1.0 - t);
        let h01 = t * t * (3.0 - 2.0 * t);
        let h11 = t * t * (t - 1.0);
        h00 * self.ys[i] + h10 * h * self.slopes[i] + h01 * self.ys[i + 1] + h11 * h * self.slopes[i + 1]
    }

    pub fn d1(&self, x: f64) -> f64 {
        let i = self.cell(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let d00 = 6.0 * t * t - 6.0 * t;
        let d10 = 3.0 * t * t - 4.0 * t + 1.0;
        let d01 = -6.0 * t * t + 6.0 * t;
        let d11 = 3.0 * t * t - 2.0 * t;
        (d00 * self.ys[i] + d01 * self.ys[i + 1]) / h + d10 * self.slopes[i] + d11 * self.slopes[i + 1]
    }

    pub fn d2(&self, x: f64) -> f64 {
        let i = self.cell(x);
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let s00 = 12.0 * t - 6.0;
        let s10 = 6.0 * t - 4.0;
        let s01 = -12.0 * t + 6.0;
        let s11 = 6.0 * t - 2.0;
        (s00 * self.ys[i] + s01 * self.ys[i + 1]) / (h * h)
            + (s10 * self.slopes[i] + s11 * self.slopes[i + 1]) / h
    }
}

fn fritsch_carlson_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut h = vec![0.0; n - 1];
    let mut delta = vec![0.0; n - 1];
    for i in 0..n - 1 {
        h[i] = xs[i + 1] - xs[i];
        delta[i] = (ys[i + 1] - ys[i]) / h[i];
    }
    let mut d = vec![0.0; n];
    if n == 2 {
        d[0] = delta[0];
        d[1] = delta[0];
        return d;
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    for i in 1..n - 1 {
        let (dp, dn) = (delta[i - 1], delta[i]);
        if dp == 0.0 || dn == 0.0 || dp.signum() != dn.signum() {
            d[i] = 0.0;
        } else {
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / dp + w2 / dn);
        }
    }
    d
}

fn end_slope(h0: f64, h1: f64, del0: f64, del1: f64) -> f64 {
    let mut d = ((2.0 * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        d = 0.0;
    } else if del0.signum() != del1.signum() && d.abs() > 3.0 * del0.abs() {
        d = 3.0 * del0;
    }
    d
}

/// Single-segment quintic Hermite on [a,b] matching value, slope and
/// curvature at both endpoints.  C^infinity inside; used for gap pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Quintic {
    pub domain: Interval,
    poly: Poly,  // in local variable t = (x-a)/h
    dpoly: Poly,
    ddpoly: Poly,
}

impl Quintic {
    pub fn from_jets(
        domain: Interval,
        (v0, s0, k0): (f64, f64, f64),
        (v1, s1, k1): (f64, f64, f64),
    ) -> Self {
        let h = domain.len();
        // quintic Hermite basis in power form
        // p = v0*H0 + s0*h*H1 + k0*h^2*H2 + v1*H3 + s1*h*H4 + k1*h^2*H5
        let b0 = s0 * h;
        let b1 = s1 * h;
        let c0 = k0 * h * h;
        let c1 = k1 * h * h;
        let coeffs = vec![
            v0,
            b0,
            0.5 * c0,
            -10.0 * v0 - 6.0 * b0 - 1.5 * c0 + 10.0 * v1 - 4.0 * b1 + 0.5 * c1,
            15.0 * v0 + 8.0 * b0 + 1.5 * c0 - 15.0 * v1 + 7.0 * b1 - c1,
            -6.0 * v0 - 3.0 * b0 - 0.5 * c0 + 6.0 * v1 - 3.0 * b1 + 0.5 * c1,
        ];
        let poly = Poly::new(coeffs);
        let dpoly = poly.derivative();
        let ddpoly = dpoly.derivative();
        Self { domain, poly, dpoly, ddpoly }
    }

    fn local(&self, x: f64) -> f64 {
        (x - self.domain.lo) / self.domain.len()
    }

    pub fn value(&self, x: f64) -> f64 {
        self.poly.eval(self.local(x))
    }

    pub fn d1(&self, x: f64) -> f64 {
        self.dpoly.eval(self.local(x)) / self.domain.len()
    }

    pub fn d2(&self, x: f64) -> f64 {
        let h = self.domain.len();
        self.ddpoly.eval(self.local(x)) / (h * h)
    }

    /// True if the derivative keeps one sign strictly on the domain.
    pub fn is_strictly_monotone(&self, samples: usize) -> bool {
        let first = self.dpoly.eval(0.0);
        if first == 0.0 {
            return false;
        }
        let sign = first.signum();
        (0..=samples).all(|i| {
            let t = i as f64 / samples as f64;
            let d = self.dpoly.eval(t);
            d != 0.0 && d.signum() == sign
        })
    }

    /// Max |second derivative| over the domain (Lipschitz constant of d1).
    pub fn d1_lipschitz(&self, samples: usize) -> f64 {
        let h = self.domain.len();
        (0..=samples)
            .map(|i| self.ddpoly.eval(i as f64 / samples as f64).abs() / (h * h))
            .fold(0.0, f64::max)
    }
}

/// Which half of the unimodal map a q-decomposition factor describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Side {
    Plus,
    Minus,
}

/// Evaluation rule of a diffeomorphism piece.
#[derive(Debug, Clone)]
pub enum PieceRule {
    /// y = poly(x) in global coordinates.
    Poly(Poly),
    /// Monotone C^1 interpolant of samples.
    Pchip(MonotoneSamples),
    /// Quintic Hermite segment.
    Quintic(Quintic),
    /// Restriction of a unimodal map to an interval where it is monotone.
    MapRestrict(Arc<UnimodalMap>),
    /// u -> f(q_c^{-1}(u)) on the chosen side; the decomposition factor.
    QDecomposed {
        map: Arc<UnimodalMap>,
        q: Quadratic,
        side: Side,
    },
    /// ran ∘ base ∘ dom, both charts affine. Domain of the new piece maps
    /// through `dom` into the base piece's domain.
    Rescaled {
        base: Box<DiffeoPiece>,
        dom: Affine,
        ran: Affine,
    },
    /// outer ∘ inner.
    Composed {
        outer: Box<DiffeoPiece>,
        inner: Box<DiffeoPiece>,
    },
    /// x + t*w(x) on [0,1]; w a fixed polynomial with triple zeros at 0, 1.
    Bump { t: f64, w: Poly, dw: Poly, ddw: Poly },
    /// num(x)/den(x) with den nonvanishing on the domain.
    Rational { num: Poly, den: Poly },
}

/// An orientation-definite diffeomorphism piece with value, derivative and
/// (where the rule allows) second-derivative access.
#[derive(Debug, Clone)]
pub struct DiffeoPiece {
    pub domain: Interval,
    pub rule: PieceRule,
}

/// Step used when a finite-difference fallback is needed.
const FD_STEP: f64 = 1e-6;

impl DiffeoPiece {
    pub fn affine(domain: Interval, v_lo: f64, v_hi: f64) -> Self {
        let slope = (v_hi - v_lo) / domain.len();
        DiffeoPiece {
            domain,
            rule: PieceRule::Poly(Poly::new(vec![v_lo - slope * domain.lo, slope])),
        }
    }

    pub fn identity(domain: Interval) -> Self {
        DiffeoPiece {
            domain,
            rule: PieceRule::Poly(Poly::new(vec![0.0, 1.0])),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        match &self.rule {
            PieceRule::Poly(p) => p.eval(x),
            PieceRule::Pchip(m) => m.value(x),
            PieceRule::Quintic(q) => q.value(x),
            PieceRule::MapRestrict(f) => f.eval_clamped(self.domain.clamp(x)),
            PieceRule::QDecomposed { map, q, side } => {
                let xx = match side {
                    Side::Plus => q.inv_right(x),
                    Side::Minus => q.inv_left(x),
                };
                map.eval_clamped(xx)
            }
            PieceRule::Rescaled { base, dom, ran } => ran.apply(base.value(dom.apply(x))),
            PieceRule::Composed { outer, inner } => outer.value(inner.value(x)),
            PieceRule::Bump { t, w, .. } => x + t * w.eval(x),
            PieceRule::Rational { num, den } => num.eval(x) / den.eval(x),
        }
    }

    pub fn d1(&self, x: f64) -> f64 {
        match &self.rule {
            PieceRule::Poly(p) => p.derivative().eval(x),
            PieceRule::Pchip(m) => m.d1(x),
            PieceRule::Quintic(q) => q.d1(x),
            PieceRule::MapRestrict(f) => f.d1_clamped(self.domain.clamp(x)),
            PieceRule::QDecomposed { map, q, side } => {
                let xx = match side {
                    Side::Plus => q.inv_right(x),
                    Side::Minus => q.inv_left(x),
                };
                let dq = q.d1(xx);
                if dq.abs() < 1e-9 {
                    // limit at the tip: Df/Dq -> D2f(c)/D2q(c)
                    return map.d2_clamped(q.c) / q.d2();
                }
                map.d1_clamped(xx) / dq
            }
            PieceRule::Rescaled { base, dom, ran } => {
                ran.slope() * base.d1(dom.apply(x)) * dom.slope()
            }
            PieceRule::Composed { outer, inner } => {
                let y = inner.value(x);
                outer.d1(y) * inner.d1(x)
            }
            PieceRule::Bump { t, dw, .. } => 1.0 + t * dw.eval(x),
            PieceRule::Rational { num, den } => {
                let (n, d) = (num.eval(x), den.eval(x));
                let (dn, dd) = (num.derivative().eval(x), den.derivative().eval(x));
                (dn * d - n * dd) / (d * d)
            }
        }
    }

    pub fn d2(&self, x: f64) -> f64 {
        match &self.rule {
            PieceRule::Poly(p) => p.derivative().derivative().eval(x),
            PieceRule::Pchip(m) => m.d2(x),
            PieceRule::Quintic(q) => q.d2(x),
            PieceRule::MapRestrict(f) => f.d2_clamped(self.domain.clamp(x)),
            PieceRule::QDecomposed { map, q, side } => {
                let xx = match side {
                    Side::Plus => q.inv_right(x),
                    Side::Minus => q.inv_left(x),
                };
                let dq = q.d1(xx);
                if dq.abs() < 1e-5 {
                    // one-sided difference of d1 toward the interior
                    let h = 1e-5;
                    let xs = if x > h { x - h } else { x + h };
                    return (self.d1(x) - self.d1(xs)) / (x - xs);
                }
                let df = map.d1_clamped(xx);
                let ddf = map.d2_clamped(xx);
                (ddf * dq - df * q.d2()) / (dq * dq * dq)
            }
            PieceRule::Rescaled { base, dom, ran } => {
                ran.slope() * base.d2(dom.apply(x)) * dom.slope() * dom.slope()
            }
            PieceRule::Composed { outer, inner } => {
                let y = inner.value(x);
                let di = inner.d1(x);
                outer.d2(y) * di * di + outer.d1(y) * inner.d2(x)
            }
            PieceRule::Bump { t, ddw, .. } => t * ddw.eval(x),
            PieceRule::Rational { num, den } => {
                let (n, d) = (num.eval(x), den.eval(x));
                let dnum = num.derivative();
                let dden = den.derivative();
                let (dn, dd) = (dnum.eval(x), dden.eval(x));
                let (ddn, ddd) = (dnum.derivative().eval(x), dden.derivative().eval(x));
                ((ddn * d - n * ddd) * d - 2.0 * dd * (dn * d - n * dd)) / (d * d * d)
            }
        }
    }

    /// Nonlinearity D ln D phi = d2/d1.
    pub fn nonlinearity(&self, x: f64) -> Result<f64> {
        let d1 = self.d1(x);
        if d1.abs() < 1e-12 {
            return Err(CoreError::NotDifferentiable { x });
        }
        Ok(self.d2(x) / d1)
    }

    /// Nonlinearity estimated by symmetric differences of ln|d1| with step h.
    /// Error O(h^2) for C^3 rules; used as an independent cross-check.
    pub fn nonlinearity_fd(&self, x: f64, h: f64) -> Result<f64> {
        let d1 = self.d1(x);
        if d1.abs() < 1e-12 {
            return Err(CoreError::NotDifferentiable { x });
        }
        let dlo = self.d1(x - h).abs();
        let dhi = self.d1(x + h).abs();
        Ok((dhi.ln() - dlo.ln()) / (2.0 * h))
    }

    /// Sup of |nonlinearity| sampled over the domain interior.
    pub fn nonlinearity_sup(&self, samples: usize) -> f64 {
        let mut sup: f64 = 0.0;
        for i in 1..samples {
            let x = self.domain.lo + self.domain.len() * i as f64 / samples as f64;
            if let Ok(eta) = self.nonlinearity(x) {
                sup = sup.max(eta.abs());
            }
        }
        sup
    }

    /// outer ∘ self (checked: self's range should land in outer's domain;
    /// left to the caller where ranges are only known numerically).
    pub fn compose(outer: DiffeoPiece, inner: DiffeoPiece) -> DiffeoPiece {
        DiffeoPiece {
            domain: inner.domain,
            rule: PieceRule::Composed {
                outer: Box::new(outer),
                inner: Box::new(inner),
            },
        }
    }

    /// Monotonicity check by derivative sampling.
    pub fn is_monotone(&self, samples: usize) -> bool {
        let probe = |i: usize| {
            let x = self.domain.lo
                + self.domain.len() * (i as f64 + 0.5) / (samples as f64 + 1.0);
            self.d1(x)
        };
        let first = probe(0);
        if first == 0.0 || first.is_nan() {
            return false;
        }
        let sign = first.signum();
        (0..samples).all(|i| {
            let d = probe(i);
            d != 0.0 && d.signum() == sign
        })
    }

    /// Normalized restriction to [a,b] ⊂ domain: the diffeomorphism of
    /// [0,1] with 0 corresponding to a.  Affine pre/post charts only.
    pub fn rescale_to_unit(&self, ab: Interval) -> Result<DiffeoPiece> {
        let va = self.value(ab.lo);
        let vb = self.value(ab.hi);
        if (va - vb).abs() < 1e-300 {
            return Err(CoreError::NotMonotone { lo: ab.lo, hi: ab.hi });
        }
        let dom = Affine::from_unit(ab.lo, ab.hi);
        // values chart: va -> 0, vb -> 1
        let ran = Affine {
            a: -va / (vb - va),
            b: 1.0 / (vb - va),
        };
        Ok(DiffeoPiece {
            domain: Interval::new(0.0, 1.0)?,
            rule: PieceRule::Rescaled {
                base: Box::new(self.clone()),
                dom,
                ran,
            },
        })
    }
}

/// Normalized restriction of a unimodal map to an interval [a,b] on which it
/// is a diffeomorphism: returns the rescaled map of [0,1] with 0
/// corresponding to a.
pub fn rescale_restriction(f: &Arc<UnimodalMap>, ab: Interval) -> Result<DiffeoPiece> {
    // injectivity probe on a short grid
    let n = 32;
    let mut prev = f.eval_checked(ab.lo)?;
    let v0 = prev;
    let mut dir = 0.0;
    for i in 1..=n {
        let x = ab.lo + ab.len() * i as f64 / n as f64;
        let v = f.eval_checked(x)?;
        let step = v - prev;
        if step == 0.0 {
            return Err(CoreError::NotMonotone { lo: ab.lo, hi: ab.hi });
        }
        if dir == 0.0 {
            dir = step.signum();
        } else if step.signum() != dir {
            return Err(CoreError::NotMonotone { lo: ab.lo, hi: ab.hi });
        }
        prev = v;
    }
    let v1 = prev;
    let piece = DiffeoPiece {
        domain: ab,
        rule: PieceRule::MapRestrict(f.clone()),
    };
    let dom = Affine::from_unit(ab.lo, ab.hi);
    let ran = Affine {
        a: -v0 / (v1 - v0),
        b: 1.0 / (v1 - v0),
    };
    Ok(DiffeoPiece {
        domain: Interval::new(0.0, 1.0)?,
        rule: PieceRule::Rescaled {
            base: Box::new(piece),
            dom,
            ran,
        },
    })
}

/// The fixed degree-7 bump polynomial w with triple zeros at 0 and 1 and an
/// interior maximum, normalized so max w = 1.
pub fn bump_polynomial() -> Poly {
    // w0(x) = x^3 (1-x)^3 (1+x); normalize the maximum to 1.
    let base = Poly::new(vec![0.0, 0.0, 0.0, 1.0, -2.0, 0.0, 2.0, -1.0]);
    let mut maxv: f64 = 0.0;
    for i in 1..4096 {
        let x = i as f64 / 4096.0;
        maxv = maxv.max(base.eval(x).abs());
    }
    Poly::new(base.coeffs.iter().map(|c| c / maxv).collect())
}
