//! Logarithmic evaluation grids.

/// Log-spaced grid of `n` points on `[lo, hi]`, endpoints included.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && n >= 2);
    let (a, b) = (lo.ln(), hi.ln());
    let h = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == n {
                hi
            } else {
                (a + h * i as f64).exp()
            }
        })
        .collect()
}

/// Log grid with a fixed density of points per decade (at least 2 points).
pub fn per_decade_grid(lo: f64, hi: f64, points_per_decade: usize) -> Vec<f64> {
    let decades = (hi / lo).log10();
    let n = ((decades * points_per_decade as f64).ceil() as usize).max(1) + 1;
    log_grid(lo, hi, n)
}

/// Grid over `p in (1, p_max]` that is geometric in `p - 1` near 1 and in `p`
/// near infinity; weights in the extrapolation scales blow up precisely at
/// the two ends.
pub fn p_grid(p_min_offset: f64, p_max: f64, points_per_decade: usize) -> Vec<f64> {
    assert!(p_min_offset > 0.0 && p_max > 2.0);
    let mut ps: Vec<f64> = per_decade_grid(p_min_offset, 1.0, points_per_decade)
        .into_iter()
        .map(|d| 1.0 + d)
        .collect();
    ps.extend(per_decade_grid(2.0, p_max, points_per_decade));
    ps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ps.dedup();
    ps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints() {
        let g = log_grid(1e-3, 1e3, 7);
        assert_eq!(g.len(), 7);
        assert_eq!(g[0], 1e-3);
        assert_eq!(g[6], 1e3);
        assert!((g[3] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn p_grid_spans_both_ends() {
        let g = p_grid(1e-6, 1024.0, 8);
        assert!(g[0] > 1.0 && g[0] < 1.0 + 2e-6);
        assert_eq!(*g.last().unwrap(), 1024.0);
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }
}
