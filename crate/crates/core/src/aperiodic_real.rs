//! Methods on `[-1, 1]` for integrands with a pole or branch point at a
//! real `A` with `|A| > 1`: subdivision and the quadratic, exponential and
//! elliptic-sine maps.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::aperiodic_complex::{elliptic_from_quartic_root, schwarz_rho, split_nodes_at, sum_nodes};
use crate::error::{Error, Result};
use crate::map::{Transform, VariableMap};
use crate::rates::{rho_from_point, ConvergencePrediction};
use crate::rules::Domain;
use crate::special::complete_elliptic_k;

/// A real singularity outside `[-1, 1]`. With `branch_cut` set the
/// integrand is taken to have a logarithmic or algebraic branch point whose
/// cut runs away from the interval; otherwise it has an isolated pole.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RealSingularity {
    position: f64,
    branch_cut: bool,
}

impl RealSingularity {
    pub fn new(position: f64, branch_cut: bool) -> Result<Self> {
        if !(position.abs() > 1.0 && position.is_finite()) {
            return Err(Error::Argument(format!(
                "real singularity must satisfy 1 < |A| < ∞, got A = {position}"
            )));
        }
        Ok(Self { position, branch_cut })
    }

    pub fn position(&self) -> f64 {
        self.position
    }

    pub fn has_branch_cut(&self) -> bool {
        self.branch_cut
    }
}

fn sgn(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// `|A| − √(A² − 1)`, formed as a reciprocal.
fn small_root(a: f64) -> f64 {
    let a = a.abs();
    1.0 / (a + ((a - 1.0) * (a + 1.0)).sqrt())
}

pub fn gauss_legendre_prediction(s: &RealSingularity) -> Result<ConvergencePrediction> {
    Ok(ConvergencePrediction::ellipse(rho_from_point(Complex64::new(
        s.position, 0.0,
    ))?))
}

/// Split point `δ = sgn(A)(|A| − √(A² − 1))` equalising the ellipses of both
/// rescaled pieces.
pub fn split_delta(s: &RealSingularity) -> f64 {
    sgn(s.position) * small_root(s.position)
}

pub fn split_prediction(s: &RealSingularity) -> Result<ConvergencePrediction> {
    let a = s.position.abs();
    let delta = small_root(a);
    let t_star = (2.0 * a - delta + 1.0) / (1.0 + delta);
    Ok(ConvergencePrediction::split_ellipse(rho_from_point(Complex64::new(
        t_star, 0.0,
    ))?))
}

pub fn split_nodes(s: &RealSingularity, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    split_nodes_at(split_delta(s), n)
}

pub fn split_integrate<F: Fn(f64) -> f64>(f: F, s: &RealSingularity, n: usize) -> Result<f64> {
    let (nodes, weights) = split_nodes(s, n)?;
    sum_nodes(f, &nodes, &weights)
}

/// Quadratic map `x(t) = t − c(t² − 1)/2`, `c = sgn(A)(|A| − √(A² − 1))`.
pub fn quadratic_map(s: &RealSingularity) -> Result<VariableMap> {
    let a = s.position;
    let coef = sgn(a) * small_root(a);
    let reach = a.abs() + ((a.abs() - 1.0) * (a.abs() + 1.0)).sqrt();
    let rho = reach + ((reach - 1.0) * (reach + 1.0)).sqrt();
    Ok(VariableMap::new(
        "quadratic",
        Transform::Quadratic { coef },
        Domain::Interval,
        ConvergencePrediction::ellipse(rho),
    )
    .with_preimage(Complex64::new(sgn(a) * reach, 0.0)))
}

/// Exponential map `x(t) = A + (1 − A)((A+1)/(A−1))^{(1−t)/2}` for `A > 1`,
/// reflected for `A < −1`. It sends the singularity to infinity, so a pole
/// becomes entire; a branch cut leaves a strip of width `2π/log((A+1)/(A−1))`.
pub fn exponential_map(s: &RealSingularity) -> Result<VariableMap> {
    let a = s.position.abs();
    // ln((A+1)/(A−1)) = ln1p(2/(A−1))
    let log_ratio = (2.0 / (a - 1.0)).ln_1p();
    let prediction = if s.branch_cut {
        let h = 2.0 * PI / log_ratio;
        ConvergencePrediction::ellipse(h + h.hypot(1.0))
    } else {
        ConvergencePrediction::entire()
    };
    let map = VariableMap::new(
        "exponential",
        Transform::Exponential { center: a, log_ratio },
        Domain::Interval,
        prediction,
    );
    Ok(if s.position < 0.0 { map.reflected() } else { map })
}

/// Elliptic-sine map carrying a Bernstein ellipse onto `ℂ \ [A, ∞)` for
/// `A > 1`, reflected for `A < −1`.
///
/// The parameter is `m = q⁴` with `q = (1 − g)/(1 + g)`,
/// `g = ((A − 1)/(A + 1))^{1/4}`; `1 − g` and `1 − m` are formed without
/// cancellation so that `A` close to 1 keeps full accuracy.
pub fn real_elliptic_map(s: &RealSingularity) -> Result<VariableMap> {
    let a = s.position.abs();
    let g = ((a - 1.0) / (a + 1.0)).powf(0.25);
    let one_minus_g = 2.0 / ((a + 1.0) * (1.0 + g) * (1.0 + g * g));
    let q = one_minus_g / (1.0 + g);
    let one_minus_q = 2.0 * g / (1.0 + g);
    let param = elliptic_from_quartic_root(q, one_minus_q)?;
    let k = complete_elliptic_k(param);
    let rho = schwarz_rho(param, k)?;
    let map = VariableMap::new(
        "elliptic",
        Transform::RealElliptic {
            q,
            one_minus_q2: one_minus_q * (1.0 + q),
            param,
            k,
        },
        Domain::Interval,
        ConvergencePrediction::ellipse(rho),
    );
    Ok(if s.position < 0.0 { map.reflected() } else { map })
}
