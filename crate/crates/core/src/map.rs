//! Changes of variable `x(t)` that fix the integration domain.
//!
//! A [`VariableMap`] is an immutable value: the map parameters are computed
//! once by the constructors in [`crate::periodic`], [`crate::aperiodic_complex`]
//! and [`crate::aperiodic_real`], and evaluation is a pure function of `t`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::rates::ConvergencePrediction;
use crate::rules::Domain;
use crate::special::{jacobi_am, jacobi_sn_cn_dn, EllipticParameter};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Transform {
    Identity,
    /// Jacobi amplitude map; `k` is the quarter period `K(m)`.
    JacobiAmplitude {
        param: EllipticParameter,
        k: f64,
    },
    /// Boundary correspondence (Möbius) map with parameter `a ∈ (0, 1)`.
    BoundaryCorrespondence {
        a: f64,
    },
    /// Iterated sine map `φ∘φ`, `φ(t) = t − a sin t`.
    IteratedSine {
        a: f64,
    },
    /// `A + B sinh(lo (1−t)/2 + hi (1+t)/2)`.
    Sinh {
        center: f64,
        height: f64,
        lo: f64,
        hi: f64,
    },
    /// Elliptic-sine map onto the doubly slit plane.
    TeeElliptic {
        c: f64,
        q: f64,
        one_minus_q2: f64,
        param: EllipticParameter,
        k: f64,
    },
    /// Sinh composed with a tangent stretch.
    JafariVarzaneh {
        center: f64,
        height: f64,
        offset: f64,
        scale: f64,
        theta: f64,
    },
    /// `A + B sinh((π/2) sinh(ℓ(t)))` with `ℓ` linear from `-lo` to `hi`.
    IteratedSinh {
        center: f64,
        height: f64,
        lo: f64,
        hi: f64,
    },
    /// `x = t − coef (t² − 1)/2`.
    Quadratic {
        coef: f64,
    },
    /// `A + (1 − A) exp(((1 − t)/2) log((A+1)/(A−1)))`, for `A > 1`.
    Exponential {
        center: f64,
        log_ratio: f64,
    },
    /// Elliptic-sine map onto the slit plane `ℂ \ [A, ∞)`, for `A > 1`.
    RealElliptic {
        q: f64,
        one_minus_q2: f64,
        param: EllipticParameter,
        k: f64,
    },
}

/// A monotone change of variable on a canonical domain, with its predicted
/// convergence rate.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableMap {
    name: &'static str,
    transform: Transform,
    domain: Domain,
    prediction: ConvergencePrediction,
    /// Recentering: `x(t) = shift + x̃(t − shift)`.
    shift: f64,
    /// Reflection: `x(t) = −x̃(−t)`.
    reflected: bool,
    preimage: Option<Complex64>,
}

impl VariableMap {
    pub(crate) fn new(
        name: &'static str,
        transform: Transform,
        domain: Domain,
        prediction: ConvergencePrediction,
    ) -> Self {
        Self {
            name,
            transform,
            domain,
            prediction,
            shift: 0.0,
            reflected: false,
            preimage: None,
        }
    }

    /// The identity map `x(t) = t` with the given plain-rule prediction.
    pub fn identity(domain: Domain, prediction: ConvergencePrediction) -> Self {
        Self::new("identity", Transform::Identity, domain, prediction)
    }

    pub(crate) fn with_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        if let Some(p) = self.preimage.as_mut() {
            *p += shift;
        }
        self
    }

    pub(crate) fn reflected(mut self) -> Self {
        self.reflected = !self.reflected;
        if let Some(p) = self.preimage.as_mut() {
            *p = -*p;
        }
        self
    }

    pub(crate) fn with_preimage(mut self, t_star: Complex64) -> Self {
        self.preimage = Some(t_star);
        self
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn prediction(&self) -> ConvergencePrediction {
        self.prediction
    }

    /// Translation applied to a periodic map (0 when not recentred).
    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.transform, Transform::Identity)
    }

    /// The point `t*` with `x(t*)` equal to the treated singularity, for the
    /// maps where it is known in closed form.
    pub fn singular_preimage(&self) -> Option<Complex64> {
        self.preimage
    }

    #[cfg(test)]
    pub(crate) fn transform_for_tests(&self) -> Transform {
        self.transform
    }

    pub fn forward(&self, t: f64) -> f64 {
        self.eval(t).0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        self.eval(t).1
    }

    /// `(x(t), x'(t))`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let local = if self.reflected {
            -(t - self.shift)
        } else {
            t - self.shift
        };
        let (x, dx) = self.transform.eval(local);
        let x = if self.reflected { -x } else { x };
        (self.shift + x, dx)
    }

    /// `x(t)` for complex `t`, available for the elementary maps only.
    pub fn forward_complex(&self, t: Complex64) -> Option<Complex64> {
        let local = if self.reflected {
            -(t - self.shift)
        } else {
            t - self.shift
        };
        let x = self.transform.eval_complex(local)?;
        Some(self.shift + if self.reflected { -x } else { x })
    }
}

impl Transform {
    fn eval(&self, t: f64) -> (f64, f64) {
        match *self {
            Transform::Identity => (t, 1.0),
            Transform::JacobiAmplitude { param, k } => {
                let u = (PI + t) / PI * k;
                let (_, _, dn) = jacobi_sn_cn_dn(u, param);
                (-PI + 2.0 * jacobi_am(u, param), 2.0 * k / PI * dn)
            }
            Transform::BoundaryCorrespondence { a } => {
                let (s, c) = t.sin_cos();
                let x = t - 2.0 * (a * s).atan2(1.0 + a * c);
                (x, (1.0 - a * a) / (a * a + 2.0 * a * c + 1.0))
            }
            Transform::IteratedSine { a } => {
                let (s, c) = t.sin_cos();
                let inner = t - a * s;
                let (si, ci) = inner.sin_cos();
                (inner - a * si, (1.0 - a * c) * (1.0 - a * ci))
            }
            Transform::Sinh { center, height, lo, hi } => {
                let arg = 0.5 * (1.0 - t) * lo + 0.5 * (1.0 + t) * hi;
                (center + height * arg.sinh(), height * arg.cosh() * 0.5 * (hi - lo))
            }
            Transform::TeeElliptic {
                c,
                q,
                one_minus_q2,
                param,
                k,
            } => {
                let (h, dh) = schwarz_ellipse_to_disk(t, q, param, k);
                let pre = one_minus_q2 / (2.0 * q);
                let x = c / q - pre * ((1.0 - c) / (h - 1.0) + (1.0 + c) / (h + 1.0));
                let dxdh = pre * ((1.0 - c) / (h - 1.0).powi(2) + (1.0 + c) / (h + 1.0).powi(2));
                (x, dxdh * dh)
            }
            Transform::JafariVarzaneh {
                center,
                height,
                offset,
                scale,
                theta,
            } => {
                let tan = (t * theta).tan();
                let arg = offset + scale * tan;
                (
                    center + height * arg.sinh(),
                    height * arg.cosh() * scale * theta * (1.0 + tan * tan),
                )
            }
            Transform::IteratedSinh { center, height, lo, hi } => {
                let ell = 0.5 * (t + 1.0) * hi - 0.5 * (1.0 - t) * lo;
                let inner = 0.5 * PI * ell.sinh();
                (
                    center + height * inner.sinh(),
                    height * inner.cosh() * 0.5 * PI * ell.cosh() * 0.5 * (hi + lo),
                )
            }
            Transform::Quadratic { coef } => (t - 0.5 * coef * (t * t - 1.0), 1.0 - coef * t),
            Transform::Exponential { center, log_ratio } => {
                let e = (0.5 * (1.0 - t) * log_ratio).exp();
                (center + (1.0 - center) * e, (center - 1.0) * 0.5 * log_ratio * e)
            }
            Transform::RealElliptic {
                q,
                one_minus_q2,
                param,
                k,
            } => {
                let (h, dh) = schwarz_ellipse_to_disk(t, q, param, k);
                let q2 = q * q;
                let denom = (1.0 + h).powi(2) * (1.0 + q2) * q;
                let x = (h + 2.0 * q2 * (1.0 + h + h * h) + q2 * q2 * h) / denom;
                let dx = dh * (1.0 - h) * one_minus_q2 * one_minus_q2 / (denom * (1.0 + h));
                (x, dx)
            }
        }
    }

    fn eval_complex(&self, t: Complex64) -> Option<Complex64> {
        let i = Complex64::i();
        Some(match *self {
            Transform::Identity => t,
            Transform::BoundaryCorrespondence { a } => {
                let e = (i * t).exp();
                -i * ((e + a) / (1.0 + a * e)).ln()
            }
            Transform::IteratedSine { a } => {
                let inner = t - a * t.sin();
                inner - a * inner.sin()
            }
            Transform::Sinh { center, height, lo, hi } => {
                let arg = 0.5 * (1.0 - t) * lo + 0.5 * (1.0 + t) * hi;
                center + height * arg.sinh()
            }
            Transform::JafariVarzaneh {
                center,
                height,
                offset,
                scale,
                theta,
            } => center + height * (offset + scale * (t * theta).tan()).sinh(),
            Transform::IteratedSinh { center, height, lo, hi } => {
                let ell = 0.5 * (t + 1.0) * hi - 0.5 * (1.0 - t) * lo;
                center + height * (0.5 * PI * ell.sinh()).sinh()
            }
            Transform::Quadratic { coef } => t - 0.5 * coef * (t * t - 1.0),
            Transform::Exponential { center, log_ratio } => {
                center + (1.0 - center) * (0.5 * (1.0 - t) * log_ratio).exp()
            }
            Transform::JacobiAmplitude { .. } | Transform::TeeElliptic { .. } | Transform::RealElliptic { .. } => {
                return None
            }
        })
    }
}

/// Schwarz's map of the Bernstein ellipse onto the disk,
/// `h(t) = m^{1/4} sn((2K/π) arcsin t, m)`, and its derivative.
///
/// `cn(u)/√(1 − t²)` is 0/0 at `t = ±1`; with `w = K − |u| = (2K/π) acos|t|`
/// it is `k' sn(w)/(dn(w) sin(acos|t|))`, which tends to `2Kk'/π`.
fn schwarz_ellipse_to_disk(t: f64, q: f64, param: EllipticParameter, k: f64) -> (f64, f64) {
    let t = t.clamp(-1.0, 1.0);
    let scale = 2.0 * k / PI;
    let u = scale * t.asin();
    let (sn, _, dn) = jacobi_sn_cn_dn(u, param);
    let a = t.abs().acos();
    let (sn_w, _, dn_w) = jacobi_sn_cn_dn(scale * a, param);
    let ratio = if a == 0.0 { scale } else { sn_w / a.sin() };
    let cn_over_root = param.complement().sqrt() * ratio / dn_w;
    (q * sn, q * scale * cn_over_root * dn)
}
