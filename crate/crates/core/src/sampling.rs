//! Deterministic sphere grids and random sphere samples.
//!
//! Tests and verification sweeps use the deterministic grids (identical
//! output for identical arguments); property sweeps use seeded uniform
//! samples.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::scalar::Real;

/// Golden-angle Fibonacci grid on S² ⊂ ℝ³: `n` quasi-uniform points,
/// deterministic in `n`.
pub fn fibonacci_sphere<T: Real>(n: usize) -> Vec<[T; 3]> {
    let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let z = 1.0 - 2.0 * (k as f64 + 0.5) / n as f64;
        let r = (1.0 - z * z).sqrt();
        let phi = 2.0 * std::f64::consts::PI * (k as f64 / golden).fract();
        out.push([T::of(r * phi.cos()), T::of(r * phi.sin()), T::of(z)]);
    }
    out
}

/// Uniform random point on S² (normalized Gaussian triple).
pub fn uniform_sphere2<T: Real>(rng: &mut impl Rng) -> [T; 3] {
    loop {
        let v: [f64; 3] = [
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
            StandardNormal.sample(rng),
        ];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [T::of(v[0] / n), T::of(v[1] / n), T::of(v[2] / n)];
        }
    }
}

/// Generalized low-discrepancy grid on S⁶ ⊂ ℝ⁷: a Kronecker (R_d) sequence
/// in the unit cube pushed through Box–Muller pairs and normalized.
/// Deterministic in `n`.
pub fn sphere6_points<T: Real>(n: usize) -> Vec<[T; 7]> {
    // R_8 sequence: alphas are inverse powers of the generalized golden
    // ratio, the unique positive root of x^{d+1} = x + 1 for d = 8.
    let d = 8usize;
    let mut g = 1.5f64;
    for _ in 0..64 {
        g = (1.0 + g).powf(1.0 / (d as f64 + 1.0));
    }
    let alphas: Vec<f64> = (1..=d).map(|i| (1.0 / g.powi(i as i32)).fract()).collect();
    let mut out = Vec::with_capacity(n);
    let mut u = vec![0.5f64; d];
    let two_pi = 2.0 * std::f64::consts::PI;
    for _ in 0..n {
        for (ui, ai) in u.iter_mut().zip(&alphas) {
            *ui = (*ui + ai).fract();
        }
        // Box–Muller on pairs, keep the first 7 of 8 normals
        let mut z = [0.0f64; 8];
        for p in 0..4 {
            let u1 = u[2 * p].max(1e-12);
            let u2 = u[2 * p + 1];
            let r = (-2.0 * u1.ln()).sqrt();
            z[2 * p] = r * (two_pi * u2).cos();
            z[2 * p + 1] = r * (two_pi * u2).sin();
        }
        let norm = z[..7].iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-9 {
            continue;
        }
        let mut pt = [T::zero(); 7];
        for (i, v) in z[..7].iter().enumerate() {
            pt[i] = T::of(v / norm);
        }
        out.push(pt);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fibonacci_points_are_unit_and_deterministic() {
        let a = fibonacci_sphere::<f64>(100);
        let b = fibonacci_sphere::<f64>(100);
        assert_eq!(a, b);
        for p in &a {
            let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fibonacci_covers_hemispheres_evenly() {
        let pts = fibonacci_sphere::<f64>(1000);
        let north = pts.iter().filter(|p| p[2] > 0.0).count();
        assert!((north as i64 - 500).abs() <= 1);
    }

    #[test]
    fn sphere6_points_unit_and_spread() {
        let pts = sphere6_points::<f64>(2000);
        assert_eq!(pts.len(), 2000);
        for p in &pts {
            let n = p.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() < 1e-12);
        }
        // determinism
        assert_eq!(pts[17], sphere6_points::<f64>(2000)[17]);
        // crude uniformity: each coordinate has mean ~0
        for c in 0..7 {
            let mean: f64 = pts.iter().map(|p| p[c]).sum::<f64>() / pts.len() as f64;
            assert!(mean.abs() < 0.05, "coordinate {c} mean {mean}");
        }
    }
}
