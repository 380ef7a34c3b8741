/// Chebyshev-distributed grid on [0,1]: points cluster at both endpoints.
pub fn chebyshev(n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| 0.5 * (1.0 - (std::f64::consts::PI * i as f64 / (n - 1) as f64).cos()))
        .collect()
}

/// Grid clustered at 0, at c and at 1: Chebyshev halves on [0,c] and [c,1].
/// Total size is 2*half+1 points (c appears once).
pub fn chebyshev_split(half: usize, c: f64) -> Vec<f64> {
    assert!(half >= 2);
    assert!(0.0 < c && c < 1.0);
    let unit = chebyshev(half + 1);
    let mut pts: Vec<f64> = unit.iter().map(|u| c * u).collect();
    pts.extend(unit.iter().skip(1).map(|u| c + (1.0 - c) * u));
    pts
}

/// Uniform grid on [lo, hi] with n points inclusive.
pub fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chebyshev_endpoints() {
        let g = chebyshev(1025);
        assert_eq!(g.len(), 1025);
        assert!(g[0].abs() < 1e-15);
        assert!((g[1024] - 1.0).abs() < 1e-15);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        // clustering: first gap much smaller than the middle gap
        assert!(g[1] - g[0] < 0.1 * (g[513] - g[512]));
    }

    #[test]
    fn split_grid_hits_c() {
        let c = 0.2868;
        let g = chebyshev_split(512, c);
        assert_eq!(g.len(), 1025);
        assert!(g.iter().any(|&x| (x - c).abs() < 1e-15));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
