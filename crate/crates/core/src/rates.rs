//! Bernstein-ellipse and strip geometry: predicted convergence rates from
//! singularity locations, and empirical rates fitted from error sequences.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Records with relative error below this are treated as round-off plateau.
pub const PLATEAU_CUTOFF: f64 = 1e-13;

/// Minimum number of pre-plateau records [`fit_slope`] accepts.
pub const MIN_FIT_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RateKind {
    /// Bernstein ellipse parameter ρ (Gauss-Legendre based rules).
    Ellipse,
    /// Strip half-width λ (trapezoid based rules).
    Strip,
    /// The transplanted integrand is entire; no geometric rate applies.
    Entire,
}

/// A predicted asymptotic convergence rate.
///
/// `per_node_decay` is the factor by which the error bound shrinks per
/// additional quadrature node: `e^{-λ}` for the trapezoid rule, `ρ^{-2}`
/// for an `n`-point Gauss-Legendre rule, and `ρ^{-1}` for split methods
/// that spend `n/2` nodes on each of two pieces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergencePrediction {
    kind: RateKind,
    value: f64,
    per_node_decay: f64,
}

impl ConvergencePrediction {
    pub fn strip(lambda: f64) -> Self {
        debug_assert!(lambda > 0.0, "strip half-width must be positive");
        Self {
            kind: RateKind::Strip,
            value: lambda,
            per_node_decay: (-lambda).exp(),
        }
    }

    pub fn ellipse(rho: f64) -> Self {
        debug_assert!(rho > 1.0, "ellipse parameter must exceed one");
        Self {
            kind: RateKind::Ellipse,
            value: rho,
            per_node_decay: rho.powi(-2),
        }
    }

    /// Ellipse rate for a rule that splits its nodes evenly over two pieces.
    pub fn split_ellipse(rho: f64) -> Self {
        debug_assert!(rho > 1.0, "ellipse parameter must exceed one");
        Self {
            kind: RateKind::Ellipse,
            value: rho,
            per_node_decay: rho.recip(),
        }
    }

    /// Sentinel for an entire transplanted integrand: `value = ∞`, `per_node_decay = 0`.
    pub fn entire() -> Self {
        Self {
            kind: RateKind::Entire,
            value: f64::INFINITY,
            per_node_decay: 0.0,
        }
    }

    pub fn kind(&self) -> RateKind {
        self.kind
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn per_node_decay(&self) -> f64 {
        self.per_node_decay
    }

    /// `-ln(per_node_decay)`, the predicted slope of `-ln(error)` against `n`.
    pub fn rate_per_node(&self) -> f64 {
        -self.per_node_decay.ln()
    }
}

/// One point of a convergence study.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRecord {
    pub method: String,
    pub n: usize,
    pub abs_error: f64,
    pub rel_error: f64,
}

/// The parameter ρ > 1 of the Bernstein ellipse (foci ±1) through `z`.
///
/// `ρ = |z ± √(z² − 1)|` with the sign giving ρ > 1. The point is folded
/// into the first quadrant first, where `z + √(z² − 1)` (principal root) is
/// the large branch and both terms add without cancellation; this also makes
/// the result exactly invariant under `z → −z` and `z → z̄`.
pub fn rho_from_point(z: Complex64) -> Result<f64> {
    let folded = Complex64::new(z.re.abs(), z.im.abs());
    if folded.im <= 1e-14 && folded.re <= 1.0 {
        return Err(Error::DegenerateSingularity(z));
    }
    let w = folded + (folded * folded - 1.0).sqrt();
    Ok(w.norm())
}

/// The `n`-dependent factor of the error bound, `per_node_decay^n`.
pub fn decay_bound(pred: &ConvergencePrediction, n: usize) -> f64 {
    pred.per_node_decay.powf(n as f64)
}

/// Least-squares decay rate per node, `-d ln(error)/dn`, over the
/// pre-plateau records.
///
/// Records are taken in order of increasing `n` up to the first one whose
/// relative error falls below [`PLATEAU_CUTOFF`].
pub fn fit_slope(records: &[ConvergenceRecord]) -> Result<f64> {
    let mut sorted: Vec<&ConvergenceRecord> = records.iter().collect();
    sorted.sort_by_key(|r| r.n);
    let usable: Vec<(f64, f64)> = sorted
        .iter()
        .take_while(|r| r.rel_error >= PLATEAU_CUTOFF && r.rel_error.is_finite())
        .map(|r| (r.n as f64, r.rel_error.ln()))
        .collect();
    if usable.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientData {
            found: usable.len(),
            needed: MIN_FIT_POINTS,
        });
    }
    let len = usable.len() as f64;
    let mean_n = usable.iter().map(|p| p.0).sum::<f64>() / len;
    let mean_e = usable.iter().map(|p| p.1).sum::<f64>() / len;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (n, e) in &usable {
        sxy += (n - mean_n) * (e - mean_e);
        sxx += (n - mean_n).powi(2);
    }
    Ok(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn records(errors: impl IntoIterator<Item = (usize, f64)>) -> Vec<ConvergenceRecord> {
        errors
            .into_iter()
            .map(|(n, e)| ConvergenceRecord {
                method: "synthetic".into(),
                n,
                abs_error: e,
                rel_error: e,
            })
            .collect()
    }

    #[test]
    fn rho_examples() {
        let r = rho_from_point(Complex64::new(4.0 / 3.0, 0.0)).unwrap();
        assert!((r - (4.0 + 7f64.sqrt()) / 3.0).abs() < 1e-15);
        assert!((r - 2.2153).abs() < 1e-4);
        let r = rho_from_point(Complex64::i()).unwrap();
        assert!((r - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        for s in [0.01, 0.5, 3.0] {
            let r = rho_from_point(Complex64::new(f64::cosh(s), 0.0)).unwrap();
            assert!((r - s.exp()).abs() < 1e-12 * s.exp(), "s={s}");
        }
    }

    #[test]
    fn rho_rejects_points_on_the_interval() {
        for z in [
            Complex64::new(0.3, 0.0),
            Complex64::new(-1.0, 1e-15),
            Complex64::new(1.0, 0.0),
        ] {
            assert!(matches!(rho_from_point(z), Err(Error::DegenerateSingularity(_))));
        }
    }

    #[test]
    fn decay_bound_examples() {
        let p = ConvergencePrediction::strip(0.1);
        assert!((decay_bound(&p, 100) - (-10f64).exp()).abs() < 1e-18);
        let p = ConvergencePrediction::ellipse(2.0);
        assert_eq!(decay_bound(&p, 10), 2f64.powi(-20));
        let p = ConvergencePrediction::split_ellipse(4.19);
        assert!((decay_bound(&p, 20) / 4.19f64.powi(-20) - 1.0).abs() < 1e-13);
        assert_eq!(decay_bound(&ConvergencePrediction::entire(), 3), 0.0);
    }

    #[test]
    fn fit_exact_log_linear_data() {
        let recs = records((1..=30).map(|n| (n, 10.0 * (-0.5 * n as f64).exp())));
        assert!((fit_slope(&recs).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn fit_ignores_plateau() {
        let recs = records((1..=120).map(|n| (n, (10.0 * (-0.5 * n as f64).exp()).max(1e-16))));
        assert!((fit_slope(&recs).unwrap() - 0.5).abs() < 1e-3);
    }

    #[test]
    fn fit_needs_enough_points() {
        let recs = records([(1, 1e-2), (2, 1e-3), (3, 1e-4), (4, 1e-15)]);
        assert_eq!(fit_slope(&recs), Err(Error::InsufficientData { found: 3, needed: 4 }));
    }

    proptest! {
        #[test]
        fn rho_is_symmetric(re in -5.0f64..5.0, im in 0.01f64..5.0) {
            let z = Complex64::new(re, im);
            let r = rho_from_point(z).unwrap();
            prop_assert_eq!(r, rho_from_point(z.conj()).unwrap());
            prop_assert_eq!(r, rho_from_point(-z).unwrap());
            prop_assert!(r > 1.0);
        }

        #[test]
        fn rho_ellipse_passes_through_point(rho in 1.001f64..20.0, theta in 0.0f64..std::f64::consts::TAU) {
            let (a, b) = ((rho + rho.recip()) / 2.0, (rho - rho.recip()) / 2.0);
            let z = Complex64::new(a * theta.cos(), b * theta.sin());
            prop_assume!(z.im.abs() > 1e-6 || z.re.abs() > 1.0 + 1e-6);
            let r = rho_from_point(z).unwrap();
            let (a2, b2) = ((r + r.recip()) / 2.0, (r - r.recip()) / 2.0);
            let lhs = (z.re / a2).powi(2) + (z.im / b2).powi(2);
            prop_assert!((lhs - 1.0).abs() < 1e-12, "lhs = {}", lhs);
        }

        #[test]
        fn fit_is_scale_invariant(rate in 0.05f64..1.5, scale in 1e-3f64..1e3, noise in 0.0f64..0.3) {
            let base: Vec<(usize, f64)> = (1..=12)
                .map(|n| (n, (1.0 + noise * ((n * 7 % 5) as f64 - 2.0) / 2.0) * (-rate * n as f64).exp()))
                .collect();
            let a = fit_slope(&records(base.iter().copied())).unwrap();
            let b = fit_slope(&records(base.iter().map(|&(n, e)| (n, e * scale)))).unwrap();
            prop_assert!((a - b).abs() < 1e-9 * a.abs().max(1.0));
        }
    }
}
