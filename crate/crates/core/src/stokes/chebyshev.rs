//! Chebyshev interpolation on `[-1, 1]` and rootfinding by the eigenvalues
//! of the colleague matrix.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

/// Coefficients `c₀..c_N` of the degree-`N` interpolant through the
/// Chebyshev points `cos(kπ/N)`, `k = 0..N`.
pub fn interpolate<F: Fn(f64) -> f64>(f: F, degree: usize) -> Vec<f64> {
    let n = degree;
    let values: Vec<f64> = (0..=n).map(|k| f((k as f64 * PI / n as f64).cos())).collect();
    (0..=n)
        .map(|j| {
            let mut sum = 0.0;
            for (k, v) in values.iter().enumerate() {
                let w = if k == 0 || k == n { 0.5 } else { 1.0 };
                sum += w * v * ((j * k) as f64 * PI / n as f64).cos();
            }
            let scale = if j == 0 || j == n { 1.0 } else { 2.0 };
            scale * sum / n as f64
        })
        .collect()
}

/// `Σ cⱼ Tⱼ(x)` by Clenshaw's recurrence.
pub fn evaluate(coeffs: &[f64], x: Complex64) -> Complex64 {
    let (mut b1, mut b2) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + coeffs.first().copied().unwrap_or(0.0)
}

/// Drops trailing coefficients below `tol · max|cⱼ|`.
pub fn chop(coeffs: &[f64], tol: f64) -> &[f64] {
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let mut len = coeffs.len();
    while len > 1 && coeffs[len - 1].abs() <= tol * scale {
        len -= 1;
    }
    &coeffs[..len]
}

/// All complex roots of `Σ cⱼ Tⱼ`, or `None` if the eigenvalue iteration
/// fails to converge.
pub fn roots(coeffs: &[f64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len().checked_sub(1)?;
    match n {
        0 => return Some(Vec::new()),
        1 => return Some(vec![Complex64::new(-coeffs[0] / coeffs[1], 0.0)]),
        _ => {}
    }
    let lead = coeffs[n];
    let mut m = DMatrix::<f64>::zeros(n, n);
    m[(0, 1)] = 1.0;
    for k in 1..n - 1 {
        m[(k, k - 1)] = 0.5;
        m[(k, k + 1)] = 0.5;
    }
    m[(n - 1, n - 2)] += 0.5;
    for j in 0..n {
        m[(n - 1, j)] -= coeffs[j] / (2.0 * lead);
    }
    let schur = Schur::try_new(m, f64::EPSILON, 10_000)?;
    Some(schur.complex_eigenvalues().iter().copied().collect())
}
