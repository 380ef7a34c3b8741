use serde::{Deserialize, Serialize};

use crate::error::{CoreError, Result};
use crate::interval::{Affine, Interval};
use crate::quad::Quadratic;

/// A point of the open triangle { s0, s1 > 0, s0 + s1 < 1 }.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingBiFactor {
    pub s0: f64,
    pub s1: f64,
}

impl ScalingBiFactor {
    pub fn new(s0: f64, s1: f64) -> Result<Self> {
        let f = Self { s0, s1 };
        if !f.in_triangle() {
            return Err(CoreError::ImproperScalingData { level: 0, s0, s1 });
        }
        Ok(f)
    }

    pub fn in_triangle(&self) -> bool {
        self.s0 > 0.0 && self.s1 > 0.0 && self.s0 + self.s1 < 1.0
    }

    /// Distance to the boundary of the triangle.
    pub fn margin(&self) -> f64 {
        let to_hyp = (1.0 - self.s0 - self.s1) / std::f64::consts::SQRT_2;
        self.s0.min(self.s1).min(to_hyp)
    }
}

/// A sequence of bi-factors, level index starting at 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ScalingData {
    Constant(ScalingBiFactor),
    Periodic(Vec<ScalingBiFactor>),
    /// Explicit per-level values (used for symbol-driven data); queries
    /// beyond the stored prefix are DepthExceeded.
    Explicit(Vec<ScalingBiFactor>),
}

impl ScalingData {
    /// Bi-factor at level k >= 1.
    pub fn at(&self, k: usize) -> Result<ScalingBiFactor> {
        debug_assert!(k >= 1);
        match self {
            ScalingData::Constant(f) => Ok(*f),
            ScalingData::Periodic(v) => Ok(v[(k - 1) % v.len()]),
            ScalingData::Explicit(v) => v.get(k - 1).copied().ok_or(CoreError::DepthExceeded {
                depth: v.len(),
                what: format!("scaling data level {k}"),
            }),
        }
    }

    /// Number of levels on which the data is defined (None = unbounded).
    pub fn available_depth(&self) -> Option<usize> {
        match self {
            ScalingData::Explicit(v) => Some(v.len()),
            _ => None,
        }
    }

    /// Minimal distance of the first `depth` levels to the triangle boundary.
    pub fn properness_margin(&self, depth: usize) -> Result<f64> {
        let mut m = f64::INFINITY;
        for k in 1..=depth {
            let f = self.at(k)?;
            if !f.in_triangle() {
                return Err(CoreError::ImproperScalingData {
                    level: k,
                    s0: f.s0,
                    s1: f.s1,
                });
            }
            m = m.min(f.margin());
        }
        Ok(m)
    }

    /// The shifted data s^n(sigma), with s(sigma)(k) = sigma(k+1).
    pub fn shift(&self, n: usize) -> ScalingData {
        match self {
            ScalingData::Constant(f) => ScalingData::Constant(*f),
            ScalingData::Periodic(v) => {
                let len = v.len();
                let rot = n % len;
                let mut w = v.clone();
                w.rotate_left(rot);
                ScalingData::Periodic(w)
            }
            ScalingData::Explicit(v) => ScalingData::Explicit(v[n.min(v.len())..].to_vec()),
        }
    }
}

/// Shift operator on scaling data (free function form of the spec).
pub fn shift_scaling(sigma: &ScalingData, n: usize) -> ScalingData {
    sigma.shift(n)
}

/// The nested intervals generated by scaling data.
///
/// Level k = 1..=depth is stored at index k-1.  `x[k]` is the endpoint of
/// I0^k not shared with I0^{k-1}; `y[k]` likewise for I1^k.  Sentinels
/// x_0 = 0 and x_{-1} = 1 are reachable through `xk()`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IntervalTower {
    pub depth: usize,
    pub i0: Vec<Interval>,
    pub i1: Vec<Interval>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Signed orientation of the chart onto I0^k: +1 preserving.
    pub orientation: Vec<i8>,
    /// Midpoint of the deepest I0; within |I0^depth| of the critical point.
    pub c: f64,
}

impl IntervalTower {
    /// x_k with sentinels k = -1 -> 1, k = 0 -> 0.
    pub fn xk(&self, k: isize) -> f64 {
        match k {
            -1 => 1.0,
            0 => 0.0,
            _ => self.x[(k - 1) as usize],
        }
    }

    pub fn yk(&self, k: usize) -> f64 {
        self.y[k - 1]
    }

    pub fn i0k(&self, k: usize) -> Interval {
        self.i0[k - 1]
    }

    pub fn i1k(&self, k: usize) -> Interval {
        self.i1[k - 1]
    }

    /// Chart [0,1] -> I0^k with 0 -> x_k and 1 -> x_{k-1} (k >= 0).
    pub fn chart(&self, k: usize) -> Affine {
        Affine::from_unit(self.xk(k as isize), self.xk(k as isize - 1))
    }
}

/// Build the tower for the first `depth` levels.
pub fn interval_tower(sigma: &ScalingData, depth: usize) -> Result<IntervalTower> {
    assert!(depth >= 1);
    sigma.properness_margin(depth)?;
    // running affine composition sigma~0(1) ∘ ... ∘ sigma~0(k-1)
    let mut chart = Affine::identity();
    let mut i0 = Vec::with_capacity(depth);
    let mut i1 = Vec::with_capacity(depth);
    let mut xs = Vec::with_capacity(depth);
    let mut ys = Vec::with_capacity(depth);
    let mut orient = Vec::with_capacity(depth);
    for k in 1..=depth {
        let f = sigma.at(k)?;
        // sigma~0(t) = s0(1-t), sigma~1(t) = 1 - s1(1-t)
        let s0map = Affine { a: f.s0, b: -f.s0 };
        let s1map = Affine { a: 1.0 - f.s1, b: f.s1 };
        let next = chart.compose(&s0map);
        // next(0) = x_k (new endpoint), next(1) = x_{k-1} (shared with parent)
        let a = next.apply(0.0);
        let b = next.apply(1.0);
        i0.push(Interval::spanning(a, b)?);
        let c = chart.compose(&s1map).apply(0.0);
        let d = chart.compose(&s1map).apply(1.0);
        i1.push(Interval::spanning(c, d)?);
        xs.push(a);
        // endpoint of I1^k not on the boundary of I0^{k-1}
        ys.push(c);
        orient.push(if next.slope() > 0.0 { 1 } else { -1 });
        chart = next;
    }
    let c = i0[depth - 1].mid();
    Ok(IntervalTower {
        depth,
        i0,
        i1,
        x: xs,
        y: ys,
        orientation: orient,
        c,
    })
}

/// Midpoint of the first I0^N with |I0^N| < tol, together with the attained
/// error bound |I0^N|.  When the data runs out of levels or the nested
/// intervals reach the floating-point floor before tol, the deepest
/// achievable midpoint is returned with its (larger) error bound.
pub fn critical_point(sigma: &ScalingData, tol: f64) -> Result<(f64, f64)> {
    assert!(tol > 0.0);
    let mut chart = Affine::identity();
    let mut last: Option<(f64, f64)> = None;
    for k in 1..=200 {
        let f = match sigma.at(k) {
            Ok(f) => f,
            Err(CoreError::DepthExceeded { .. }) if last.is_some() => return Ok(last.unwrap()),
            Err(e) => return Err(e),
        };
        if !f.in_triangle() {
            return Err(CoreError::ImproperScalingData {
                level: k,
                s0: f.s0,
                s1: f.s1,
            });
        }
        chart = chart.compose(&Affine { a: f.s0, b: -f.s0 });
        let a = chart.apply(0.0);
        let b = chart.apply(1.0);
        let len = (b - a).abs();
        let mid = 0.5 * (a + b);
        last = Some((mid, len));
        if len < tol || len < 8.0 * f64::EPSILON * mid.abs().max(1e-3) {
            return Ok((mid, len));
        }
    }
    Ok(last.expect("at least one level built"))
}

/// One affine branch of a piecewise-affine map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Branch {
    pub dom: Interval,
    /// values at dom.lo and dom.hi
    pub v_lo: f64,
    pub v_hi: f64,
}

impl Branch {
    pub fn slope(&self) -> f64 {
        (self.v_hi - self.v_lo) / self.dom.len()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.v_lo + (x - self.dom.lo) * self.slope()
    }

    pub fn image(&self) -> Interval {
        Interval::spanning(self.v_lo, self.v_hi).expect("nondegenerate branch image")
    }
}

/// The piecewise-affine map defined on the union of the I1^k: on each I1^k
/// it is the affine extension of q_c restricted to the endpoints of I1^k.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PiecewiseAffineMap {
    pub sigma: ScalingData,
    pub tower: IntervalTower,
    pub c: f64,
    pub branches: Vec<Branch>,
    /// absolute tolerance used for branch membership
    pub tol: f64,
}

impl PiecewiseAffineMap {
    pub fn depth(&self) -> usize {
        self.tower.depth
    }

    /// Locate the branch containing x (within tol); Err(true) means the
    /// point sits in the unresolved central region I0^depth.
    pub fn branch_index(&self, x: f64) -> std::result::Result<usize, bool> {
        for (i, b) in self.branches.iter().enumerate() {
            if b.dom.lo - self.tol <= x && x <= b.dom.hi + self.tol {
                return Ok(i);
            }
        }
        let deepest = self.tower.i0k(self.depth());
        Err(deepest.lo - self.tol <= x && x <= deepest.hi + self.tol)
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        match self.branch_index(x) {
            Ok(i) => Ok(self.branches[i].eval(x)),
            Err(true) => Err(CoreError::DepthExceeded {
                depth: self.depth(),
                what: format!("point {x} inside unresolved central interval"),
            }),
            Err(false) => Err(CoreError::OutsideDomain { x }),
        }
    }

    pub fn d1(&self, x: f64) -> Result<f64> {
        match self.branch_index(x) {
            Ok(i) => Ok(self.branches[i].slope()),
            Err(true) => Err(CoreError::DepthExceeded {
                depth: self.depth(),
                what: format!("point {x} inside unresolved central interval"),
            }),
            Err(false) => Err(CoreError::OutsideDomain { x }),
        }
    }
}

/// Build f_sigma down to `depth` levels.
pub fn build_piecewise_map(sigma: &ScalingData, depth: usize) -> Result<PiecewiseAffineMap> {
    let tower = interval_tower(sigma, depth)?;
    let (c, _err) = critical_point(sigma, 1e-15)?;
    let q = Quadratic::new(c)?;
    let branches = (1..=depth)
        .map(|k| {
            let dom = tower.i1k(k);
            Branch {
                dom,
                v_lo: q.eval(dom.lo),
                v_hi: q.eval(dom.hi),
            }
        })
        .collect();
    Ok(PiecewiseAffineMap {
        sigma: sigma.clone(),
        tower,
        c,
        branches,
        tol: 1e-12,
    })
}

/// Outcome of the renormalizability trace at one level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RenormCheckLevel {
    pub level: usize,
    /// condition (i): the domain cannot be extended and stay affine
    pub maximal: bool,
    /// condition (ii): the orbit interval lands onto I0^n
    pub lands_on_i0: bool,
    pub landing_defect: f64,
}

/// Verdict of `check_inf_renorm`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RenormCheck {
    pub levels: Vec<RenormCheckLevel>,
    pub first_failure: Option<usize>,
    /// orbit segment at the first failure (current interval), if any
    pub witness: Option<(f64, f64)>,
}

impl RenormCheck {
    pub fn success(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Trace the interval [f(x_{n-1}), 1] through the affine branches for each
/// n <= depth, verifying that the 2^n - 1 fold composition is defined
/// affinely on a maximal domain and lands onto I0^n.
pub fn check_inf_renorm(sigma: &ScalingData, depth: usize) -> Result<RenormCheck> {
    assert!(depth >= 1);
    // need a tower a few levels deeper than checked so the orbit intervals
    // of the deepest check stay inside resolved branches
    let build_depth = (2 * depth + 6).min(60);
    let f = build_piecewise_map(sigma, build_depth)?;
    let tol = 10.0 * f64::EPSILON * (1 << depth.min(30)) as f64;
    let mut levels = Vec::new();
    let mut first_failure = None;
    let mut witness = None;
    'level: for n in 1..=depth {
        let x_prev = f.tower.xk(n as isize - 1);
        let fx = f.eval(x_prev)?;
        let mut lo = fx.min(1.0);
        let mut hi = 1.0f64.max(fx);
        // the free endpoint is the image of f(x_{n-1}); 1's orbit is pinned
        let mut free_is_lo = fx < 1.0;
        let mut maximal = false;
        let steps = (1usize << n) - 1;
        for step in 0..steps {
            // containing branch
            let i = match f.branch_index(0.5 * (lo + hi)) {
                Ok(i) => i,
                Err(_) => {
                    levels.push(RenormCheckLevel {
                        level: n,
                        maximal: false,
                        lands_on_i0: false,
                        landing_defect: f64::NAN,
                    });
                    if first_failure.is_none() {
                        first_failure = Some(n);
                        witness = Some((lo, hi));
                    }
                    continue 'level;
                }
            };
            let b = &f.branches[i];
            if lo < b.dom.lo - tol || hi > b.dom.hi + tol {
                // not affine on the whole current interval: condition (i)
                levels.push(RenormCheckLevel {
                    level: n,
                    maximal: false,
                    lands_on_i0: false,
                    landing_defect: f64::NAN,
                });
                if first_failure.is_none() {
                    first_failure = Some(n);
                    witness = Some((lo, hi));
                }
                continue 'level;
            }
            // does the free endpoint touch the far branch boundary?
            let free = if free_is_lo { lo } else { hi };
            if (free - b.dom.lo).abs() <= tol || (free - b.dom.hi).abs() <= tol {
                maximal = true;
            }
            let (a, bb) = (b.eval(lo), b.eval(hi));
            let flip = b.slope() < 0.0;
            lo = a.min(bb);
            hi = a.max(bb);
            if flip {
                free_is_lo = !free_is_lo;
            }
            let _ = step;
        }
        // the initial interval equal to a full branch also witnesses (i)
        let i0n = f.tower.i0k(n);
        let defect = (lo - i0n.lo).abs().max((hi - i0n.hi).abs());
        let lands = defect <= tol.max(1e-9 * i0n.len().max(1e-12));
        let ok = maximal && lands;
        levels.push(RenormCheckLevel {
            level: n,
            maximal,
            lands_on_i0: lands,
            landing_defect: defect,
        });
        if !ok && first_failure.is_none() {
            first_failure = Some(n);
            witness = Some((lo, hi));
        }
    }
    Ok(RenormCheck {
        levels,
        first_failure,
        witness,
    })
}

/// Renormalization of a piecewise-affine map: the map of the shifted data,
/// one level shallower.
pub fn renormalize_piecewise(f: &PiecewiseAffineMap) -> Result<PiecewiseAffineMap> {
    if f.depth() < 2 {
        return Err(CoreError::DepthExceeded {
            depth: f.depth(),
            what: "renormalize_piecewise needs depth >= 2".into(),
        });
    }
    build_piecewise_map(&f.sigma.shift(1), f.depth() - 1)
}

/// Max over sample points of |hhat^{-1} ∘ f_sigma ∘ h - f_{s(sigma)}|,
/// where h is the chart onto I0^1 and hhat the orientation preserving chart
/// onto [f(x_0), 1].  Zero (to tolerance) exactly when the level-one
/// conjugacy identity holds for the data.
pub fn conjugacy_defect(f: &PiecewiseAffineMap, samples: usize) -> Result<f64> {
    let g = renormalize_piecewise(f)?;
    let s1 = f.sigma.at(1)?;
    let h = Affine { a: s1.s0, b: -s1.s0 };
    let fx0 = f.eval(0.0)?;
    let hhat = Affine::from_unit(fx0, 1.0);
    let mut worst: f64 = 0.0;
    let mut used = 0;
    for k in 1..=g.depth() {
        let dom = g.tower.i1k(k);
        for i in 0..=samples {
            let u = dom.lo + dom.len() * i as f64 / samples as f64;
            let lhs = match f.eval(h.apply(u)) {
                Ok(v) => hhat.invert(v),
                Err(_) => continue,
            };
            let rhs = match g.eval(u) {
                Ok(v) => v,
                Err(_) => continue,
            };
            worst = worst.max((lhs - rhs).abs());
            used += 1;
        }
    }
    if used == 0 {
        return Err(CoreError::Domain("no shared sample points".into()));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixedpoint::solve_fixed_point;

    fn third() -> ScalingData {
        ScalingData::Constant(ScalingBiFactor::new(1.0 / 3.0, 1.0 / 3.0).unwrap())
    }

    #[test]
    fn tower_first_levels_for_one_third() {
        let t = interval_tower(&third(), 2).unwrap();
        let i01 = t.i0k(1);
        assert!((i01.lo - 0.0).abs() < 1e-15 && (i01.hi - 1.0 / 3.0).abs() < 1e-15);
        let i11 = t.i1k(1);
        assert!((i11.lo - 2.0 / 3.0).abs() < 1e-15 && (i11.hi - 1.0).abs() < 1e-15);
        let i02 = t.i0k(2);
        assert!((i02.lo - 2.0 / 9.0).abs() < 1e-14 && (i02.hi - 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn tower_length_products() {
        let sigma = ScalingData::Periodic(vec![
            ScalingBiFactor::new(0.3, 0.25).unwrap(),
            ScalingBiFactor::new(0.42, 0.11).unwrap(),
            ScalingBiFactor::new(0.2, 0.5).unwrap(),
        ]);
        let depth = 12;
        let t = interval_tower(&sigma, depth).unwrap();
        let mut p0 = 1.0;
        for k in 1..=depth {
            let f = sigma.at(k).unwrap();
            let len1 = f.s1 * p0;
            p0 *= f.s0;
            assert!((t.i0k(k).len() - p0).abs() < 1e-14 * p0.max(1e-30));
            assert!((t.i1k(k).len() - len1).abs() < 1e-14);
        }
    }

    #[test]
    fn proper_data_tail_bound() {
        let sigma = third();
        let eps = sigma.properness_margin(40).unwrap();
        assert!(eps > 0.0);
        let t = interval_tower(&sigma, 40).unwrap();
        for k in 1..=40 {
            let bound = (1.0 - eps).powi(k as i32);
            assert!(t.i0k(k).len() <= bound + 1e-15);
            assert!(t.i1k(k).len() <= bound + 1e-15);
        }
    }

    #[test]
    fn nesting_and_disjointness() {
        let sigma = third();
        let t = interval_tower(&sigma, 20).unwrap();
        for k in 2..=20 {
            assert!(t.i0k(k).strictly_inside(&t.i0k(k - 1)) || t.i0k(k).hi == t.i0k(k - 1).hi
                || t.i0k(k).lo == t.i0k(k - 1).lo);
            assert!(t.i0k(k - 1).contains_interval(&t.i0k(k), 1e-15));
            assert!(t.i0k(k - 1).contains_interval(&t.i1k(k), 1e-15));
            assert!(!t.i0k(k).intersects(&t.i1k(k)));
        }
    }

    #[test]
    fn critical_point_geometric_series() {
        // alternating-orientation geometric sum gives c = 1/4 for s0 = 1/3
        let (c, err) = critical_point(&third(), 1e-12).unwrap();
        assert!((c - 0.25).abs() < 1e-12 + err);
        // c is in every I0^k
        let t = interval_tower(&third(), 30).unwrap();
        for k in 1..=30 {
            assert!(t.i0k(k).contains(c));
        }
    }

    #[test]
    fn piecewise_map_interpolates_quadratic() {
        let f = build_piecewise_map(&third(), 12).unwrap();
        let q = Quadratic::new(f.c).unwrap();
        for k in 1..=12 {
            let dom = f.tower.i1k(k);
            // endpoint agreement with q_c
            assert!((f.eval(dom.lo).unwrap() - q.eval(dom.lo)).abs() < 1e-13);
            assert!((f.eval(dom.hi).unwrap() - q.eval(dom.hi)).abs() < 1e-13);
            // slope = chord slope of q_c
            let slope = (q.eval(dom.hi) - q.eval(dom.lo)) / dom.len();
            assert!((f.d1(dom.mid()).unwrap() - slope).abs() < 1e-12);
        }
        // y_n is an endpoint of I1^n
        for k in 1..=12 {
            let yk = f.tower.yk(k);
            assert!((f.eval(yk).unwrap() - q.eval(yk)).abs() < 1e-13);
        }
    }

    #[test]
    fn eval_outside_domain_errors() {
        let f = build_piecewise_map(&third(), 6).unwrap();
        // the central gap between I0^1 and I1^1 is not in the domain
        assert!(matches!(
            f.eval(0.5),
            Err(CoreError::OutsideDomain { .. })
        ));
        // deep central region: DepthExceeded
        assert!(matches!(
            f.eval(f.c),
            Err(CoreError::DepthExceeded { .. })
        ));
    }

    #[test]
    fn shift_acts_on_periodic_data() {
        let a = ScalingBiFactor::new(0.3, 0.3).unwrap();
        let b = ScalingBiFactor::new(0.25, 0.4).unwrap();
        let sigma = ScalingData::Periodic(vec![a, b]);
        let shifted = shift_scaling(&sigma, 1);
        assert_eq!(shifted.at(1).unwrap(), b);
        assert_eq!(shifted.at(2).unwrap(), a);
        // constant data is shift invariant
        assert_eq!(third().shift(5).at(3).unwrap(), third().at(3).unwrap());
    }

    #[test]
    fn renormalize_commutes_with_shift() {
        let a = ScalingBiFactor::new(0.3, 0.3).unwrap();
        let b = ScalingBiFactor::new(0.25, 0.4).unwrap();
        let sigma = ScalingData::Periodic(vec![a, b]);
        let f = build_piecewise_map(&sigma, 10).unwrap();
        let rf = renormalize_piecewise(&f).unwrap();
        let g = build_piecewise_map(&shift_scaling(&sigma, 1), 9).unwrap();
        // identical representations: same branches pointwise
        for k in 1..=9 {
            let dom = rf.tower.i1k(k);
            let dom2 = g.tower.i1k(k);
            assert!((dom.lo - dom2.lo).abs() < 1e-15);
            assert!((dom.hi - dom2.hi).abs() < 1e-15);
            assert!((rf.eval(dom.mid()).unwrap() - g.eval(dom.mid()).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn renormalize_depth_one_errors() {
        let f = build_piecewise_map(&third(), 1).unwrap();
        assert!(renormalize_piecewise(&f).is_err());
    }

    #[test]
    fn inf_renorm_fails_for_one_third() {
        let check = check_inf_renorm(&third(), 4).unwrap();
        assert!(!check.success());
        assert_eq!(check.first_failure, Some(1));
        assert!(check.witness.is_some());
    }

    #[test]
    fn inf_renorm_succeeds_at_fixed_point() {
        let cert = solve_fixed_point(1e-13).unwrap();
        let sigma = ScalingData::Constant(cert.sigma_star);
        let check = check_inf_renorm(&sigma, 8).unwrap();
        assert!(
            check.success(),
            "fixed-point data failed at level {:?}",
            check.first_failure
        );
        for lvl in &check.levels {
            assert!(lvl.maximal && lvl.lands_on_i0);
        }
    }

    #[test]
    fn inf_renorm_perturbed_data_fails_early() {
        let cert = solve_fixed_point(1e-13).unwrap();
        let mut v = vec![cert.sigma_star; 12];
        v[0] = ScalingBiFactor::new(cert.sigma_star.s0 + 1e-2, cert.sigma_star.s1).unwrap();
        let sigma = ScalingData::Explicit(v);
        let check = check_inf_renorm(&sigma, 4).unwrap();
        assert!(!check.success());
        assert!(check.first_failure.unwrap() <= 2);
    }

    #[test]
    fn conjugacy_identity_at_fixed_point_only() {
        let cert = solve_fixed_point(1e-13).unwrap();
        let f = build_piecewise_map(&ScalingData::Constant(cert.sigma_star), 12).unwrap();
        let defect = conjugacy_defect(&f, 10).unwrap();
        assert!(defect < 1e-12, "sigma* conjugacy defect {defect}");
        // generic data: the pointwise identity fails even though the
        // representation-level shift always holds
        let g = build_piecewise_map(&third(), 12).unwrap();
        let d2 = conjugacy_defect(&g, 10).unwrap();
        assert!(d2 > 1e-3, "expected visible defect, got {d2}");
    }

    #[test]
    fn quadratic_tip_ratio_converges() {
        // (f(x_n) - 1)/(x_n - c)^2 -> -1/(1-c)^2 over the last levels
        let cert = solve_fixed_point(1e-13).unwrap();
        let f = build_piecewise_map(&ScalingData::Constant(cert.sigma_star), 25).unwrap();
        let target = -1.0 / ((1.0 - f.c) * (1.0 - f.c));
        for k in 18..=22 {
            let xn = f.tower.xk(k);
            let v = f.eval(xn).unwrap();
            let ratio = (v - 1.0) / ((xn - f.c) * (xn - f.c));
            assert!(
                (ratio - target).abs() < 1e-4 * target.abs(),
                "tip ratio {ratio} vs {target}"
            );
        }
    }
}
