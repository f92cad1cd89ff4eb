//! Singularities of the single-layer integrand: in the circumferential
//! variable `t` for fixed `s` (closed form) and in the centerline variable
//! `s` (Chebyshev rootfinding on each panel).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rates::rho_from_point;
use crate::stokes::chebyshev;
use crate::stokes::geometry::{CrossSection, FiberSurface, Vec3};

/// Degree of the Chebyshev interpolant of the outer residual.
pub const OUTER_DEGREE: usize = 50;

/// Roots outside `[-BOX, BOX]²` in panel coordinates are discarded.
pub const ROOT_BOX: f64 = 1.5;

/// Trailing Chebyshev coefficients below this fraction of the largest are
/// treated as round-off.
const CHOP_TOLERANCE: f64 = 1e-13;
/// Newton polishing runs at least this many steps...
const NEWTON_STEPS: usize = 3;
/// ...and continues up to this many while the step is still significant.
const NEWTON_MAX_STEPS: usize = 16;
/// Smallest starting height for Newton, in panel coordinates.
const NEWTON_SEED_HEIGHT: f64 = 1e-3;
const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Singularity `t* = ξ + iη` of the inner integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InnerSingularity {
    /// Phase ξ of the nearest surface point on this cross-section.
    pub xi: f64,
    /// `Im t*`; infinite when the target is on the centerline's normal
    /// plane axis, where the inner integrand is a constant-distance circle.
    pub height: f64,
}

impl InnerSingularity {
    pub fn t_star(&self) -> Complex64 {
        Complex64::new(self.xi, self.height)
    }
}

/// `t* = ξ + i arccosh((|x − w|² + ε²)/(2ε√((d·N)² + (d·B)²)))`.
///
/// The argument minus one is formed as
/// `((ρ⊥ − ε)² + (d·T)²)/(2ερ⊥)`, exact for targets close to the surface.
pub fn inner_singularity_at(section: &CrossSection, x: &Vec3) -> Result<InnerSingularity> {
    let d = x - section.center;
    let dn = d.dot(&section.frame.normal);
    let db = d.dot(&section.frame.binormal);
    let dt = d.dot(&section.frame.tangent);
    let perp = dn.hypot(db);
    let eps = section.radius;
    if perp == 0.0 {
        return Ok(InnerSingularity {
            xi: 0.0,
            height: f64::INFINITY,
        });
    }
    let excess = ((perp - eps).powi(2) + dt * dt) / (2.0 * eps * perp);
    if excess == 0.0 {
        return Err(Error::OnSurface);
    }
    let height = (excess + (excess * (2.0 + excess)).sqrt()).ln_1p();
    Ok(InnerSingularity {
        xi: db.atan2(dn),
        height,
    })
}

pub fn inner_singularity(surface: &FiberSurface, x: &Vec3, s: f64) -> Result<InnerSingularity> {
    inner_singularity_at(&surface.cross_section(s), x)
}

/// A root of the outer residual in panel coordinates `τ ∈ [-1, 1] ↦ s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterRoot {
    pub tau: Complex64,
    pub s: Complex64,
    pub rho: f64,
}

/// `(|d|² + ε²)² − 4ε²(|d|² − (d·T)²)` for complex `s`, `d = x − w(s)`,
/// with bilinear dot products and `(d·T)² = (d·w')²/(w'·w')`.
pub fn outer_residual(surface: &FiberSurface, x: &Vec3, s: Complex64) -> Complex64 {
    let (w, dw) = surface.curve().jet_complex(s);
    let d = x.map(Complex64::from) - w;
    let dd = d.dot(&d);
    let dwd = d.dot(&dw);
    let eps2 = surface.radius().powi(2);
    let along2 = dwd * dwd / dw.dot(&dw);
    (dd + eps2).powi(2) - 4.0 * eps2 * (dd - along2)
}

/// The same residual for real `s`, as the product
/// `((ρ⊥ − ε)² + (d·T)²)(|d|² + ε² + 2ερ⊥)` of two nonnegative factors.
pub fn outer_residual_real(surface: &FiberSurface, x: &Vec3, s: f64) -> f64 {
    let c = surface.cross_section(s);
    let d = x - c.center;
    let dt = d.dot(&c.frame.tangent);
    let perp = d.dot(&c.frame.normal).hypot(d.dot(&c.frame.binormal));
    let eps = surface.radius();
    ((perp - eps).powi(2) + dt * dt) * (d.norm_squared() + eps * eps + 2.0 * eps * perp)
}

/// Roots of the outer residual on panel `k`, sorted by increasing ρ.
///
/// `None` signals a rootfinder failure (the caller falls back to the
/// reference rule).
pub fn outer_singularities(surface: &FiberSurface, x: &Vec3, k: usize) -> Option<Vec<OuterRoot>> {
    let (a, b) = surface.panel(k);
    let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
    let coeffs = chebyshev::interpolate(|tau| outer_residual_real(surface, x, mid + half * tau), OUTER_DEGREE);
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let residual = |tau: Complex64| outer_residual(surface, x, mid + half * tau);
    let mut found: Vec<OuterRoot> = Vec::new();
    for z in chebyshev::roots(chebyshev::chop(&coeffs, CHOP_TOLERANCE))? {
        if !(z.re.abs() <= ROOT_BOX && z.im.abs() <= ROOT_BOX) {
            continue;
        }
        // The residual is positive on the real line, so every root is
        // complex; start in the upper half plane so Newton can get there.
        let mut tau = Complex64::new(z.re, z.im.abs().max(NEWTON_SEED_HEIGHT));
        for iter in 0..NEWTON_MAX_STEPS {
            let h = 1e-6;
            let slope = (residual(tau + h) - residual(tau - h)) / (2.0 * h);
            let step = residual(tau) / slope;
            if !step.is_finite() {
                break;
            }
            tau -= step;
            if iter + 1 >= NEWTON_STEPS && step.norm() < 1e-14 {
                break;
            }
        }
        if residual(tau).norm() > RESIDUAL_TOLERANCE * scale {
            log::debug!("discarding unpolished outer root {tau} on panel {k}");
            continue;
        }
        for tau in [tau, tau.conj()] {
            if found.iter().any(|r| (r.tau - tau).norm() < 1e-9) {
                continue;
            }
            if let Ok(rho) = rho_from_point(tau) {
                found.push(OuterRoot {
                    tau,
                    s: mid + half * tau,
                    rho,
                });
            }
        }
    }
    found.sort_by(|p, q| p.rho.partial_cmp(&q.rho).expect("finite rho"));
    Some(found)
}
