//! Complete elliptic integral of the first kind and the Jacobi elliptic
//! functions for real arguments.
//!
//! **Parameter convention.** Everything here uses the *parameter* `m`
//! (the square of the modulus `k`), so that
//!
//! ```text
//!          π/2
//!         ⌠          dθ
//! K(m) =  │  ─────────────────
//!         ⌡   √(1 − m sin²θ)
//!        0
//! ```
//!
//! Libraries disagree on this (some take `k`, some take `m`); callers coming
//! from a modulus-based API must square first.
//!
//! The maps in this crate evaluate these functions with `m` extremely close
//! to one (for example `m = 4/(4+B²)` with `B ~ 1e-4`). To keep full accuracy
//! there, an [`EllipticParameter`] stores both `m` and its complement `1 − m`;
//! construct it with [`EllipticParameter::from_complement`] whenever the
//! complement is known analytically.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const MAX_AGM_STEPS: usize = 64;

/// An elliptic parameter `m ∈ [0, 1)` together with its complement `1 − m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticParameter {
    m: f64,
    complement: f64,
}

impl EllipticParameter {
    /// Builds a parameter from `m`, requiring `0 ≤ m < 1`.
    pub fn new(m: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&m) {
            return Err(Error::Domain(format!("elliptic parameter m = {m} outside [0, 1)")));
        }
        Ok(Self { m, complement: 1.0 - m })
    }

    /// Builds a parameter from its complement `1 − m`, requiring `0 < 1 − m ≤ 1`.
    ///
    /// The complement is stored exactly as given, so `K` keeps full relative
    /// accuracy even when `m` itself rounds to one.
    pub fn from_complement(complement: f64) -> Result<Self> {
        if !(complement > 0.0 && complement <= 1.0) {
            return Err(Error::Domain(format!(
                "complementary parameter 1 - m = {complement} outside (0, 1]"
            )));
        }
        Ok(Self {
            m: 1.0 - complement,
            complement,
        })
    }

    /// Builds a parameter from both halves; they must be consistent to rounding.
    pub(crate) fn from_parts(m: f64, complement: f64) -> Result<Self> {
        if !(m >= 0.0 && complement > 0.0 && (m + complement - 1.0).abs() < 1e-12) {
            return Err(Error::Domain(format!(
                "inconsistent elliptic parameter pair m = {m}, 1 - m = {complement}"
            )));
        }
        Ok(Self { m, complement })
    }

    pub fn m(&self) -> f64 {
        self.m
    }

    pub fn complement(&self) -> f64 {
        self.complement
    }

    /// The complementary parameter `1 − m`, as its own parameter.
    pub fn complementary(&self) -> Result<Self> {
        if self.m <= 0.0 {
            return Err(Error::Domain("complementary parameter of m = 0 is singular".into()));
        }
        Ok(Self {
            m: self.complement,
            complement: self.m,
        })
    }
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..MAX_AGM_STEPS {
        if (a - b).abs() <= 4.0 * f64::EPSILON * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    0.5 * (a + b)
}

/// The complete elliptic integral of the first kind, `K(m) = π / (2 agm(1, √(1−m)))`.
pub fn complete_elliptic_k(p: EllipticParameter) -> f64 {
    FRAC_PI_2 / agm(1.0, p.complement.sqrt())
}

/// `K(m)` for a raw parameter value; fails unless `0 ≤ m < 1`.
pub fn ellipk(m: f64) -> Result<f64> {
    Ok(complete_elliptic_k(EllipticParameter::new(m)?))
}

/// Jacobi amplitude `am(u, m)` by the descending AGM phase recursion.
pub fn jacobi_am(u: f64, p: EllipticParameter) -> f64 {
    if p.m == 0.0 {
        return u;
    }
    // a_n, c_n of the AGM started at (1, √(1−m)), c_0 = √m.
    let mut a = [0.0_f64; MAX_AGM_STEPS + 1];
    let mut c = [0.0_f64; MAX_AGM_STEPS + 1];
    a[0] = 1.0;
    c[0] = p.m.sqrt();
    let mut b = p.complement.sqrt();
    let mut steps = 0;
    while steps < MAX_AGM_STEPS && c[steps].abs() > f64::EPSILON * a[steps] {
        let (an, bn) = (a[steps], b);
        a[steps + 1] = 0.5 * (an + bn);
        c[steps + 1] = 0.5 * (an - bn);
        b = (an * bn).sqrt();
        steps += 1;
    }
    let mut phi = (2.0_f64).powi(steps as i32) * a[steps] * u;
    for k in (1..=steps).rev() {
        phi = 0.5 * (phi + (c[k] / a[k] * phi.sin()).asin());
    }
    phi
}

/// The triple `(sn, cn, dn)(u, m)`.
///
/// `dn` is formed as `√((1−m) + m cn²)`, which has no cancellation as
/// `m → 1`.
pub fn jacobi_sn_cn_dn(u: f64, p: EllipticParameter) -> (f64, f64, f64) {
    let phi = jacobi_am(u, p);
    let (sn, cn) = phi.sin_cos();
    let dn = (p.complement + p.m * cn * cn).sqrt();
    (sn, cn, dn)
}

/// Checked variant of [`jacobi_am`] taking a raw parameter value.
pub fn am(u: f64, m: f64) -> Result<f64> {
    Ok(jacobi_am(u, EllipticParameter::new(m)?))
}

/// Checked variant of [`jacobi_sn_cn_dn`] taking a raw parameter value.
pub fn sn_cn_dn(u: f64, m: f64) -> Result<(f64, f64, f64)> {
    Ok(jacobi_sn_cn_dn(u, EllipticParameter::new(m)?))
}
