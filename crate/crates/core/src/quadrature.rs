//! Legendre polynomial zeros, Gauss-Legendre rules and Gauss-Lobatto nodes.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_NEWTON: usize = 100;
const NEWTON_TOL: f64 = 1e-15;

/// `(P_d(x), P_d'(x))` by the three-term recurrence.
pub fn legendre(d: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if d == 0 {
        return (1.0, 0.0);
    }
    for k in 1..d {
        let k = k as f64;
        let p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let d = d as f64;
    let dp = if (1.0 - x * x).abs() < 1e-300 {
        // P_d'(±1) = ±d(d+1)/2
        x.signum().powi(d as i32 + 1) * d * (d + 1.0) / 2.0
    } else {
        d * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, dp)
}

/// All `d` zeros of `P_d` in increasing order, by Newton's method from the
/// asymptotic guesses `cos(π(i - 1/4)/(d + 1/2))`. Symmetric pairs are mirrored
/// and the middle zero of an odd degree is exactly 0.
pub fn legendre_zeros(d: usize) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(Error::InvalidArgument("Legendre degree must be >= 1".into()));
    }
    let mut upper = Vec::with_capacity(d / 2);
    for i in 1..=d / 2 {
        let mut z = (PI * (i as f64 - 0.25) / (d as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..MAX_NEWTON {
            let (p, dp) = legendre(d, z);
            let step = p / dp;
            z -= step;
            if step.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { degree: d });
        }
        upper.push(z);
    }
    let mut zeros: Vec<f64> = upper.iter().map(|z| -z).collect();
    if d % 2 == 1 {
        zeros.push(0.0);
    }
    zeros.extend(upper.iter().rev());
    Ok(zeros)
}

/// Gauss-Legendre rule on `[-1, 1]` with `n` points.
pub fn gauss_legendre(n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let nodes = legendre_zeros(n)?;
    let weights = nodes
        .iter()
        .map(|&x| {
            let (_, dp) = legendre(n, x);
            2.0 / ((1.0 - x * x) * dp * dp)
        })
        .collect();
    Ok((nodes, weights))
}

/// The `n + 1` Gauss-Lobatto nodes of degree `n` (the zeros of `(1 - x²) P_n'(x)`),
/// in increasing order, endpoints `±1` included.
pub fn lobatto_nodes(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("Lobatto degree must be >= 1".into()));
    }
    // Interior nodes are the zeros of g = P_{n-1} - x P_n, which is a multiple
    // of (1 - x²) P_n'. Guesses are the Chebyshev-Lobatto points.
    let g = |x: f64| {
        let (pn, dpn) = legendre(n, x);
        let (pm, dpm) = legendre(n - 1, x);
        (pm - x * pn, dpm - pn - x * dpn)
    };
    let mut upper = Vec::new();
    for i in 1..=(n - 1) / 2 {
        let mut z = (PI * i as f64 / n as f64).cos();
        let mut converged = false;
        for _ in 0..MAX_NEWTON {
            let (v, dv) = g(z);
            let step = v / dv;
            z -= step;
            if step.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NoConvergence { degree: n });
        }
        upper.push(z);
    }
    let mut nodes = Vec::with_capacity(n + 1);
    nodes.push(-1.0);
    nodes.extend(upper.iter().map(|z| -z));
    if n % 2 == 0 {
        nodes.push(0.0);
    }
    nodes.extend(upper.iter().rev());
    nodes.push(1.0);
    Ok(nodes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degree_zeros() {
        assert_eq!(legendre_zeros(1).unwrap(), [0.0]);
        let z = legendre_zeros(2).unwrap();
        assert!((z[0] + 0.5773502691896258).abs() < 1e-15);
        assert!((z[1] - 0.5773502691896258).abs() < 1e-15);
        assert!(legendre_zeros(0).is_err());
    }

    #[test]
    fn odd_degree_symmetric() {
        let z = legendre_zeros(11).unwrap();
        assert_eq!(z.len(), 11);
        assert_eq!(z[5], 0.0);
        for i in 0..11 {
            assert_eq!(z[i], -z[10 - i]);
        }
    }

    #[test]
    fn zeros_are_roots() {
        for d in 1..=64 {
            let z = legendre_zeros(d).unwrap();
            assert_eq!(z.len(), d);
            for w in z.windows(2) {
                assert!(w[0] < w[1]);
            }
            for &x in &z {
                assert!(legendre(d, x).0.abs() < 1e-12, "P_{d}({x})");
            }
        }
    }

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let (x, w) = gauss_legendre(10).unwrap();
        // exact through degree 19
        for k in 0..20 {
            let q: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((q - exact).abs() < 1e-14, "x^{k}: {q} vs {exact}");
        }
    }

    #[test]
    fn lobatto_small_cases() {
        assert_eq!(lobatto_nodes(1).unwrap(), [-1.0, 1.0]);
        assert_eq!(lobatto_nodes(2).unwrap(), [-1.0, 0.0, 1.0]);
        // (1 - x²) P_3' vanishes at ±1/√5
        let n3 = lobatto_nodes(3).unwrap();
        assert!((n3[2] - 1.0 / 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn lobatto_interior_are_derivative_roots() {
        for n in 2..=40 {
            let nodes = lobatto_nodes(n).unwrap();
            assert_eq!(nodes.len(), n + 1);
            for &x in &nodes[1..n] {
                let (_, dp) = legendre(n, x);
                // P_n' grows like n²; compare relative to its endpoint value
                assert!(dp.abs() < 1e-12 * (n * n) as f64, "P_{n}'({x}) = {dp}");
            }
        }
    }
}
