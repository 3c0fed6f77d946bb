//! Seeded synthetic curves and measures with known fractal dimensions.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Fractional Brownian motion `B_H(0), ..., B_H(n)` by circulant embedding
/// (Davies-Harte). The graph has box dimension `2 - H`.
pub fn fbm(n: usize, hurst: f64, seed: u64) -> Result<Vec<f64>> {
    if !(hurst > 0.0 && hurst < 1.0) {
        return Err(Error::invalid(format!("Hurst exponent must lie in (0, 1), got {hurst}")));
    }
    if n < 2 {
        return Err(Error::invalid("fbm needs at least 2 increments"));
    }
    let h2 = 2.0 * hurst;
    let gamma = |k: f64| 0.5 * ((k + 1.0).powf(h2) - 2.0 * k.powf(h2) + (k - 1.0).abs().powf(h2));
    let m = 2 * n;
    let mut row: Vec<Complex<f64>> = (0..m)
        .map(|k| {
            let lag = if k <= n { k } else { m - k };
            Complex::new(gamma(lag as f64), 0.0)
        })
        .collect();
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut row);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w: Vec<Complex<f64>> = row
        .iter()
        .map(|lam| {
            let s = (lam.re.max(0.0) / m as f64).sqrt();
            let re: f64 = StandardNormal.sample(&mut rng);
            let im: f64 = StandardNormal.sample(&mut rng);
            Complex::new(s * re, s * im)
        })
        .collect();
    fft.process(&mut w);

    let mut path = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    path.push(acc);
    for z in &w[..n] {
        acc += z.re;
        path.push(acc);
    }
    Ok(path)
}

/// Brownian bridge on `n` unit steps, pinned to 0 at both ends.
pub fn brownian_bridge(n: usize, seed: u64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::invalid("a bridge needs at least 2 steps"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut walk = Vec::with_capacity(n + 1);
    let mut acc = 0.0;
    walk.push(acc);
    for _ in 0..n {
        let step: f64 = StandardNormal.sample(&mut rng);
        acc += step;
        walk.push(acc);
    }
    let end = walk[n];
    Ok(walk
        .iter()
        .enumerate()
        .map(|(k, v)| v - end * k as f64 / n as f64)
        .collect())
}

/// Binomial multiplicative cascade on `2^levels` cells with weights
/// `p` and `1 - p`. Its information dimension is `-(p log2 p + q log2 q)`
/// and its correlation dimension `-log2(p^2 + q^2)`.
pub fn binomial_cascade(levels: u32, p: f64) -> Result<Vec<f64>> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid(format!("cascade weight must lie in [0, 1], got {p}")));
    }
    if levels > 30 {
        return Err(Error::invalid(format!("cascade depth {levels} is too large")));
    }
    let mut mass = vec![1.0];
    for _ in 0..levels {
        mass = mass.iter().flat_map(|m| [m * p, m * (1.0 - p)]).collect();
    }
    Ok(mass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fbm_increment_variance_scales_with_hurst() {
        for h in [0.25, 0.5, 0.75] {
            let path = fbm(1 << 14, h, 11).unwrap();
            let var = |lag: usize| {
                let d: Vec<f64> = path.windows(lag + 1).map(|w| w[lag] - w[0]).collect();
                d.iter().map(|v| v * v).sum::<f64>() / d.len() as f64
            };
            let ratio = (var(16) / var(1)).ln() / 16f64.ln();
            assert!((ratio - 2.0 * h).abs() < 0.1, "H={h}: {ratio}");
        }
    }

    #[test]
    fn seeded_generators_are_reproducible() {
        assert_eq!(fbm(100, 0.3, 5).unwrap(), fbm(100, 0.3, 5).unwrap());
        assert_ne!(fbm(100, 0.3, 5).unwrap(), fbm(100, 0.3, 6).unwrap());
        let b = brownian_bridge(1000, 9).unwrap();
        assert_eq!(b.len(), 1001);
        assert_eq!(b[0], 0.0);
        assert!(b[1000].abs() < 1e-12);
        assert!(fbm(100, 1.0, 0).is_err());
    }

    #[test]
    fn cascade_is_normalised() {
        let c = binomial_cascade(10, 0.3).unwrap();
        assert_eq!(c.len(), 1024);
        assert!((c.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
