//! Methods on `[-1, 1]` for integrands with singularities at `A ± Bi`,
//! `B > 0`: subdivision and the sinh, Tee elliptic-sine, Jafari-Varzaneh
//! and iterated sinh maps.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::map::{Transform, VariableMap};
use crate::rates::{rho_from_point, ConvergencePrediction};
use crate::rules::{self, Domain};
use crate::special::{complete_elliptic_k, EllipticParameter};

/// Default tuning parameter of the Jafari-Varzaneh map.
pub const JVH_DEFAULT_L: f64 = 0.5;

/// Singularity pair `re ± im·i` with `im > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexSingularity {
    re: f64,
    im: f64,
}

impl ComplexSingularity {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(im > 0.0 && im.is_finite() && re.is_finite()) {
            return Err(Error::Argument(format!(
                "complex singularity needs finite A and B > 0, got A = {re}, B = {im}"
            )));
        }
        Ok(Self { re, im })
    }

    pub fn re(&self) -> f64 {
        self.re
    }

    pub fn im(&self) -> f64 {
        self.im
    }

    pub fn point(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `√(((1−A)² + B²)((1+A)² + B²)) = √((1 + A² + B²)² − 4A²)`.
fn product_radius(a: f64, b: f64) -> f64 {
    (((1.0 - a).powi(2) + b * b) * ((1.0 + a).powi(2) + b * b)).sqrt()
}

/// Gauss-Legendre rate with no treatment: ρ of the singularity itself.
pub fn gauss_legendre_prediction(s: &ComplexSingularity) -> Result<ConvergencePrediction> {
    Ok(ConvergencePrediction::ellipse(rho_from_point(s.point())?))
}

/// Split point δ making the Bernstein ellipses of both rescaled pieces
/// pass through the respective images of `A + Bi`.
///
/// Closed form `δ = sgn(A)(|A| − √((A² − 1 − B² + R)/2))`,
/// `R = √((1 + A² + B²)² − 4A²)`, rearranged so that no difference of
/// nearly equal terms is formed.
pub fn aperiodic_split_delta(s: &ComplexSingularity) -> f64 {
    let (a, b) = (s.re, s.im);
    let a2 = a * a;
    let r = product_radius(a, b);
    let big = 1.0 + a2 + b * b;
    let lin = a2 - 1.0 - b * b;
    // A² − 1 − B² + R, via the conjugate when the terms cancel
    let sum = if lin >= 0.0 {
        lin + r
    } else {
        4.0 * a2 * b * b / (r - lin)
    };
    let root = (0.5 * sum).sqrt();
    // |A| − root = (A² − root²)/(|A| + root), and A² − root² = 2A²/(big + R)
    if a == 0.0 {
        return 0.0;
    }
    sgn(a) * 2.0 * a2 / ((big + r) * (a.abs() + root))
}

/// Images of the singularity in the rescaled left and right pieces.
pub fn split_images(s: &ComplexSingularity, delta: f64) -> (Complex64, Complex64) {
    let num = Complex64::new(2.0 * s.re - delta, 2.0 * s.im);
    ((num + 1.0) / (1.0 + delta), (num - 1.0) / (1.0 - delta))
}

pub fn split_prediction(s: &ComplexSingularity) -> Result<ConvergencePrediction> {
    let delta = aperiodic_split_delta(s);
    let (t_star, _) = split_images(s, delta);
    Ok(ConvergencePrediction::split_ellipse(rho_from_point(t_star)?))
}

/// Gauss-Legendre nodes on `[-1, δ]` and `[δ, 1]`; `n/2` each, the odd
/// node going to the longer piece.
pub fn split_nodes_at(delta: f64, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 2 {
        return Err(Error::Argument(format!("split rule needs n >= 2, got {n}")));
    }
    let (n_left, n_right) = if 1.0 + delta > 1.0 - delta {
        (n - n / 2, n / 2)
    } else {
        (n / 2, n - n / 2)
    };
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for (count, mid, half) in [
        (n_left, 0.5 * (delta - 1.0), 0.5 * (delta + 1.0)),
        (n_right, 0.5 * (1.0 + delta), 0.5 * (1.0 - delta)),
    ] {
        let rule = rules::gauss_legendre(count)?;
        for (&t, &w) in rule.nodes().iter().zip(rule.weights()) {
            nodes.push(mid + half * t);
            weights.push(half * w);
        }
    }
    Ok((nodes, weights))
}

pub fn split_nodes(s: &ComplexSingularity, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    split_nodes_at(aperiodic_split_delta(s), n)
}

pub(crate) fn sum_nodes<F: Fn(f64) -> f64>(f: F, nodes: &[f64], weights: &[f64]) -> Result<f64> {
    let mut sum = 0.0;
    for (index, (&x, &w)) in nodes.iter().zip(weights).enumerate() {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { index, x });
        }
        sum += w * v;
    }
    Ok(sum)
}

/// `∫_{-1}^{1} f` by the split rule with `n` total nodes.
pub fn split_integrate<F: Fn(f64) -> f64>(f: F, s: &ComplexSingularity, n: usize) -> Result<f64> {
    let (nodes, weights) = split_nodes(s, n)?;
    sum_nodes(f, &nodes, &weights)
}

/// Hyperbolic sine map
/// `x(t) = A + B sinh(((1−t)/2) asinh((−1−A)/B) + ((1+t)/2) asinh((1−A)/B))`.
pub fn sinh_map(s: &ComplexSingularity) -> Result<VariableMap> {
    let (a, b) = (s.re, s.im);
    let lo = ((-1.0 - a) / b).asinh();
    let hi = ((1.0 - a) / b).asinh();
    let t_star = 1.0 + (Complex64::new(-2.0 * hi, PI)) / (hi - lo);
    Ok(VariableMap::new(
        "sinh",
        Transform::Sinh {
            center: a,
            height: b,
            lo,
            hi,
        },
        Domain::Interval,
        ConvergencePrediction::ellipse(rho_from_point(t_star)?),
    )
    .with_preimage(t_star))
}

/// Tee-Hale elliptic-sine map carrying a Bernstein ellipse onto the plane
/// slit along the vertical rays from `A ± Bi`.
pub fn tee_elliptic_map(s: &ComplexSingularity) -> Result<VariableMap> {
    let (a, b) = (s.re, s.im);
    let a2 = a * a;
    let big = 1.0 + a2 + b * b;
    let r = product_radius(a, b);
    let c = sgn(a) * 2f64.sqrt() * a.abs() / (big + r).sqrt();
    // 1 − c² = (1 − A² + B² + R)/(big + R)
    let lin = 1.0 - a2 + b * b;
    let num = if lin >= 0.0 {
        lin + r
    } else {
        4.0 * a2 * b * b / (r - lin)
    };
    let d = (num / (big + r)).sqrt();
    let hyp = b.hypot(d);
    let q = d / (b + hyp);
    let one_minus_q = (b + b * b / (hyp + d)) / (b + hyp);
    let param = elliptic_from_quartic_root(q, one_minus_q)?;
    let k = complete_elliptic_k(param);
    let rho = schwarz_rho(param, k)?;
    Ok(VariableMap::new(
        "tee",
        Transform::TeeElliptic {
            c,
            q,
            one_minus_q2: one_minus_q * (1.0 + q),
            param,
            k,
        },
        Domain::Interval,
        ConvergencePrediction::ellipse(rho),
    ))
}

/// `m = q⁴` with its complement formed as `(1 − q)(1 + q)(1 + q²)`.
pub(crate) fn elliptic_from_quartic_root(q: f64, one_minus_q: f64) -> Result<EllipticParameter> {
    let m = q.powi(4);
    let complement = one_minus_q * (1.0 + q) * (1.0 + q * q);
    EllipticParameter::from_parts(m, complement)
}

/// `ρ = exp(π K(1 − m)/(4 K(m)))`.
pub(crate) fn schwarz_rho(param: EllipticParameter, k: f64) -> Result<f64> {
    let k_comp = complete_elliptic_k(param.complementary()?);
    Ok((PI * k_comp / (4.0 * k)).exp())
}

/// Jafari-Varzaneh–Hosseini map with tuning parameter `L ∈ [0.2, 0.9]`.
pub fn jvh_map(s: &ComplexSingularity, l: f64) -> Result<VariableMap> {
    if !(0.2..=0.9).contains(&l) {
        return Err(Error::Argument(format!(
            "Jafari-Varzaneh parameter L = {l} outside [0.2, 0.9]"
        )));
    }
    let (a, b) = (s.re, s.im);
    let hi = ((1.0 - a) / b).asinh();
    let alpha = 0.5 * hi + 0.5 * ((1.0 + a) / b).asinh();
    let denom = 2.0 * alpha * l + PI;
    let theta = (2.0 * alpha / denom).atan();
    let t_star = (Complex64::new(2.0 * alpha - 2.0 * hi, PI) / denom).atan() / theta;
    Ok(VariableMap::new(
        "jvh",
        Transform::JafariVarzaneh {
            center: a,
            height: b,
            offset: hi - alpha,
            scale: 0.5 * denom,
            theta,
        },
        Domain::Interval,
        ConvergencePrediction::ellipse(rho_from_point(t_star)?),
    )
    .with_preimage(t_star))
}

/// Iterated sinh map `x(t) = A + B sinh((π/2) sinh(ℓ(t)))`.
pub fn iterated_sinh_map(s: &ComplexSingularity) -> Result<VariableMap> {
    let (a, b) = (s.re, s.im);
    let hi = (2.0 / PI * ((1.0 - a) / b).asinh()).asinh();
    let lo = (2.0 / PI * ((1.0 + a) / b).asinh()).asinh();
    let t_star = 1.0 + Complex64::new(-2.0 * hi, PI) / (hi + lo);
    Ok(VariableMap::new(
        "sinhsinh",
        Transform::IteratedSinh {
            center: a,
            height: b,
            lo,
            hi,
        },
        Domain::Interval,
        ConvergencePrediction::ellipse(rho_from_point(t_star)?),
    )
    .with_preimage(t_star))
}
