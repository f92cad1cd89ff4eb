//! Methods for 2π-periodic integrands whose nearest singularities sit at
//! `x0 + 2πk ± Bi`: subdivision, the Jacobi amplitude map (JAM), the
//! boundary correspondence map (BCM) and the iterated sine map (ISM).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::map::{Transform, VariableMap};
use crate::rates::ConvergencePrediction;
use crate::rules::{self, Domain};
use crate::special::{complete_elliptic_k, EllipticParameter};

/// Above this height the iterated sine map is abandoned for the identity.
pub const ISM_MAX_HEIGHT: f64 = 1.5;

/// Branch points at `center + 2πk ± height·i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicSingularity {
    height: f64,
    center: f64,
}

impl PeriodicSingularity {
    /// `height > 0`; `center` is reduced into `[-π, π)`.
    pub fn new(height: f64, center: f64) -> Result<Self> {
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::Argument(format!(
                "periodic singularity height must be positive, got {height}"
            )));
        }
        if !center.is_finite() {
            return Err(Error::Argument("singularity center must be finite".into()));
        }
        let center = (center + PI).rem_euclid(2.0 * PI) - PI;
        Ok(Self { height, center })
    }

    /// Singularity at `±height·i` (center 0).
    pub fn centered(height: f64) -> Result<Self> {
        Self::new(height, 0.0)
    }

    pub fn height(&self) -> f64 {
        self.height
    }

    pub fn center(&self) -> f64 {
        self.center
    }
}

/// Plain trapezoid rate: strip half-width equal to the singularity height.
pub fn trapezoid_prediction(sing: &PeriodicSingularity) -> ConvergencePrediction {
    ConvergencePrediction::strip(sing.height)
}

/// Split point δ equalizing the ellipse rates of `[-δ, δ]` and `[δ, 2π − δ]`:
/// the real root of `2δ³ + 2B²δ − B²π = 0`.
pub fn periodic_split_delta(height: f64) -> Result<f64> {
    if !(height > 0.0 && height.is_finite()) {
        return Err(Error::Argument(format!(
            "split needs a positive singularity height, got {height}"
        )));
    }
    let b = height;
    Ok(2.0 * b / 3f64.sqrt() * ((3.0 * PI * 3f64.sqrt() / (4.0 * b)).asinh() / 3.0).sinh())
}

/// Common ellipse parameter `ρ = (B + √(B² + δ²))/δ` of both split pieces.
pub fn periodic_split_rho(height: f64) -> Result<f64> {
    let delta = periodic_split_delta(height)?;
    Ok((height + height.hypot(delta)) / delta)
}

/// The height `B` at which splitting stops paying off: the root of
/// `ln ρ_split(B) = B`, located by bisection on `[0.1, 3]`.
pub fn split_crossover_height() -> Result<f64> {
    let gain = |b: f64| periodic_split_rho(b).map(|rho| rho.ln() - b);
    let (mut lo, mut hi) = (0.1, 3.0);
    if gain(lo)? <= 0.0 || gain(hi)? >= 0.0 {
        return Err(Error::Domain("split crossover is not bracketed".into()));
    }
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if gain(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn periodic_split_prediction(sing: &PeriodicSingularity) -> Result<ConvergencePrediction> {
    Ok(ConvergencePrediction::split_ellipse(periodic_split_rho(sing.height)?))
}

/// Nodes and weights of the split rule: Gauss-Legendre on
/// `[x0 − δ, x0 + δ]` and `[x0 + δ, x0 + 2π − δ]`, `n/2` nodes each, the odd
/// node going to the longer piece.
pub fn periodic_split_nodes(sing: &PeriodicSingularity, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 2 {
        return Err(Error::Argument(format!("split rule needs n >= 2, got {n}")));
    }
    let delta = periodic_split_delta(sing.height)?;
    let x0 = sing.center;
    let inner_len = 2.0 * delta;
    let outer_len = 2.0 * PI - 2.0 * delta;
    let (n_inner, n_outer) = if inner_len > outer_len {
        (n - n / 2, n / 2)
    } else {
        (n / 2, n - n / 2)
    };
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (count, mid, half) in [(n_inner, x0, delta), (n_outer, x0 + PI, PI - delta)] {
        let rule = rules::gauss_legendre(count)?;
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            nodes.push(mid + half * t);
            weights.push(half * w);
        }
    }
    Ok((nodes, weights))
}

/// `∫_{-π}^{π} f` by the split rule with `n` total nodes.
pub fn periodic_split_integrate<F: Fn(f64) -> f64>(f: F, sing: &PeriodicSingularity, n: usize) -> Result<f64> {
    let (nodes, weights) = periodic_split_nodes(sing, n)?;
    let mut sum = 0.0;
    for (index, (&x, &w)) in nodes.iter().zip(&weights).enumerate() {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { index, x });
        }
        sum += w * v;
    }
    Ok(sum)
}

/// Jacobi amplitude map
/// `x(t) = −π + 2 am(((π + t)/π) K(m), m)`, `m = 4/(4 + B²)`,
/// with strip rate `λ = π K(1 − m)/K(m)`.
pub fn jam_map(sing: &PeriodicSingularity) -> Result<VariableMap> {
    let b2 = sing.height * sing.height;
    let param = EllipticParameter::from_parts(4.0 / (4.0 + b2), b2 / (4.0 + b2))?;
    let k = complete_elliptic_k(param);
    let k_comp = complete_elliptic_k(param.complementary()?);
    let lambda = PI * k_comp / k;
    Ok(VariableMap::new(
        "jam",
        Transform::JacobiAmplitude { param, k },
        Domain::Period,
        ConvergencePrediction::strip(lambda),
    )
    .with_shift(sing.center))
}

/// The BCM parameter `a = e^B − √(e^{2B} − 1)`, evaluated as its reciprocal
/// form `1/(e^B + √(e^{2B} − 1))`.
pub fn bcm_parameter(height: f64) -> f64 {
    1.0 / (height.exp() + (2.0 * height).exp_m1().sqrt())
}

/// Boundary correspondence map
/// `x(t) = −i log((e^{it} + a)/(1 + a e^{it}))`, in the real form
/// `t − 2 atan2(a sin t, 1 + a cos t)`, with strip rate `λ = −log a`.
pub fn bcm_map(sing: &PeriodicSingularity) -> Result<VariableMap> {
    let a = bcm_parameter(sing.height);
    let lambda = (sing.height.exp() + (2.0 * sing.height).exp_m1().sqrt()).ln();
    Ok(VariableMap::new(
        "bcm",
        Transform::BoundaryCorrespondence { a },
        Domain::Period,
        ConvergencePrediction::strip(lambda),
    )
    .with_shift(sing.center))
}

/// The approximate optimal ISM parameter `a = 1 + B/5 − B^{2/5}`.
pub fn ism_parameter(height: f64) -> f64 {
    1.0 + height / 5.0 - height.powf(0.4)
}

/// Iterated sine map with the standard parameter rule; see [`ism_map_with`].
pub fn ism_map(sing: &PeriodicSingularity) -> Result<VariableMap> {
    ism_map_with(sing, ism_parameter)
}

/// Iterated sine map `x = φ(φ(t))`, `φ(t) = t − a sin t`, with `a` chosen by
/// `rule(B)` and strip rate `λ = arcsech(a)`.
///
/// For `B > 1.5` the identity map (plain trapezoid rule) is returned.
pub fn ism_map_with(sing: &PeriodicSingularity, rule: fn(f64) -> f64) -> Result<VariableMap> {
    if sing.height > ISM_MAX_HEIGHT {
        return Ok(VariableMap::identity(Domain::Period, trapezoid_prediction(sing)));
    }
    let a = rule(sing.height);
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::Argument(format!(
            "iterated sine parameter a = {a} outside (0, 1) for B = {}",
            sing.height
        )));
    }
    let lambda = a.recip().acosh();
    Ok(VariableMap::new(
        "ism",
        Transform::IteratedSine { a },
        Domain::Period,
        ConvergencePrediction::strip(lambda),
    )
    .with_shift(sing.center))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::QuadRule;

    fn maps(b: f64, x0: f64) -> Vec<VariableMap> {
        let s = PeriodicSingularity::new(b, x0).unwrap();
        vec![jam_map(&s).unwrap(), bcm_map(&s).unwrap(), ism_map(&s).unwrap()]
    }

    #[test]
    fn split_delta_solves_cubic() {
        for b in [1e-6, 1e-3, 0.1, 0.3, 0.95, 2.0, 10.0] {
            let d = periodic_split_delta(b).unwrap();
            let res = (2.0 * d.powi(3) + 2.0 * b * b * d - b * b * PI).abs() / (b * b * PI);
            assert!(res < 1e-12, "B={b}: residual {res}");
            assert!(d > 0.0 && d < PI);
        }
    }

    #[test]
    fn split_delta_matches_newton() {
        let b: f64 = 0.3;
        let mut d = (b * b * PI / 2.0).cbrt();
        for _ in 0..50 {
            d -= (2.0 * d.powi(3) + 2.0 * b * b * d - b * b * PI) / (6.0 * d * d + 2.0 * b * b);
        }
        assert!((periodic_split_delta(b).unwrap() - d).abs() < 1e-14);
    }

    #[test]
    fn split_delta_small_height_asymptote() {
        let b: f64 = 1e-6;
        let ratio = periodic_split_delta(b).unwrap() / (b * b * PI / 2.0).cbrt();
        assert!((ratio - 1.0).abs() < 1e-3);
    }

    #[test]
    fn split_delta_rejects_nonpositive() {
        assert!(periodic_split_delta(0.0).is_err());
        assert!(PeriodicSingularity::centered(-1.0).is_err());
    }

    #[test]
    fn split_integrates_constants() {
        for b in [1e-3, 0.3, 2.0] {
            let s = PeriodicSingularity::centered(b).unwrap();
            for n in [2, 7, 8] {
                let v = periodic_split_integrate(|_| 1.0, &s, n).unwrap();
                assert!((v - 2.0 * PI).abs() < 1e-13);
            }
        }
        let s = PeriodicSingularity::centered(0.1).unwrap();
        assert!(periodic_split_integrate(|_| 1.0, &s, 1).is_err());
    }

    #[test]
    fn odd_split_gives_extra_node_to_long_piece() {
        let s = PeriodicSingularity::centered(0.1).unwrap();
        let delta = periodic_split_delta(0.1).unwrap();
        let (nodes, _) = periodic_split_nodes(&s, 9).unwrap();
        let inside = nodes.iter().filter(|x| x.abs() < delta).count();
        assert_eq!(inside, 4);
    }

    #[test]
    fn split_crossover_near_095() {
        let adv = |b: f64| periodic_split_rho(b).unwrap().ln() > b;
        assert!(adv(0.94));
        assert!(!adv(0.96));
        let b = split_crossover_height().unwrap();
        assert!((b - 0.95334).abs() < 1e-5, "{b}");
    }

    #[test]
    fn rates_at_height_point_three() {
        let s = PeriodicSingularity::centered(0.3).unwrap();
        let jam = jam_map(&s).unwrap().prediction().value();
        let bcm = bcm_map(&s).unwrap().prediction().value();
        let ism = ism_map(&s).unwrap().prediction().value();
        assert_eq!(format!("{jam:.1}"), "1.5");
        assert_eq!(format!("{bcm:.2}"), "0.81");
        assert_eq!(format!("{ism:.2}"), "1.46");
        assert!((bcm_parameter(0.3) - 0.44315).abs() < 1e-5);
        assert!((ism_parameter(0.3) - 0.44220).abs() < 1e-5);
        assert!((bcm - 0.8139).abs() < 1e-4);
        assert!((ism - 1.456).abs() < 1e-3);
    }

    #[test]
    fn endpoints_and_oddness() {
        for b in [1e-4, 0.01, 0.3, 1.0] {
            for m in maps(b, 0.0) {
                assert!((m.forward(-PI) + PI).abs() < 1e-12, "{} B={b}", m.name());
                assert!((m.forward(PI) - PI).abs() < 1e-12, "{} B={b}", m.name());
                assert!(m.forward(0.0).abs() < 1e-12, "{} B={b}", m.name());
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let mut seed = 7u64;
        let mut next = || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64
        };
        for b in [0.01, 0.3] {
            for m in maps(b, 0.4) {
                for _ in 0..20 {
                    let t = -PI + 2.0 * PI * next();
                    let h = 1e-5;
                    let fd = (m.forward(t + h) - m.forward(t - h)) / (2.0 * h);
                    assert!((fd - m.derivative(t)).abs() < 1e-6, "{} t={t}", m.name());
                }
            }
        }
    }

    #[test]
    fn maps_are_identity_plus_periodic() {
        for m in maps(0.05, 1.0) {
            for t in [-2.9, -0.3, 0.8, 2.2] {
                let d = m.forward(t + 2.0 * PI) - m.forward(t) - 2.0 * PI;
                assert!(d.abs() < 1e-11, "{}", m.name());
            }
        }
    }

    #[test]
    fn derivative_integrates_to_period() {
        let rule = QuadRule::trapezoid_periodic(2000).unwrap();
        for b in [1e-3, 0.3] {
            for m in maps(b, 0.7) {
                let v = rule.apply_mapped(&m, |_| 1.0).unwrap();
                assert!((v - 2.0 * PI).abs() < 1e-12, "{} B={b}: {v}", m.name());
            }
        }
    }

    #[test]
    fn ism_is_monotone() {
        for b in [1e-4, 1e-2, 0.3, 1.0] {
            let m = ism_map(&PeriodicSingularity::centered(b).unwrap()).unwrap();
            for j in 0..=10_000 {
                let t = -PI + 2.0 * PI * j as f64 / 10_000.0;
                assert!(m.derivative(t) >= 0.0);
            }
        }
    }

    #[test]
    fn ism_falls_back_to_identity_for_tall_singularity() {
        let m = ism_map(&PeriodicSingularity::centered(2.0).unwrap()).unwrap();
        assert!(m.is_identity());
        assert_eq!(m.prediction().value(), 2.0);
    }

    #[test]
    fn bcm_real_form_matches_complex_formula() {
        use num_complex::Complex64;
        let m = bcm_map(&PeriodicSingularity::centered(0.2).unwrap()).unwrap();
        for t in [-3.0, -1.0, -0.1, 0.4, 2.9] {
            let c = m.forward_complex(Complex64::new(t, 0.0)).unwrap();
            assert!((c.re - m.forward(t)).abs() < 1e-13);
            assert!(c.im.abs() < 1e-13);
        }
    }

    #[test]
    fn translated_maps_move_the_clustering() {
        let x0 = 1.3;
        for m in maps(0.01, x0) {
            // the derivative is smallest at the recentred singularity
            let at = m.derivative(x0);
            assert!(at < m.derivative(x0 + 0.5) && at < m.derivative(x0 - 0.5));
            assert!((m.forward(x0) - x0).abs() < 1e-12);
            assert!((m.forward(x0 + PI) - x0 - PI).abs() < 1e-11, "{}", m.name());
        }
    }
}
