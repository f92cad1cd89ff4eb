//! The Stokeslet kernel (without the `1/(8π)` factor) and surface densities.

use crate::error::{Error, Result};
use crate::stokes::geometry::{CrossSection, FiberSurface, Vec3};

/// A traction density on the surface.
pub trait Density: Sync {
    fn value(&self, s: f64, t: f64, section: &CrossSection) -> Vec3;
}

/// The unit outward normal `cos t N + sin t B`; its single-layer potential
/// vanishes identically.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SurfaceNormal;

impl Density for SurfaceNormal {
    fn value(&self, _s: f64, t: f64, section: &CrossSection) -> Vec3 {
        section.unit_normal(t)
    }
}

/// A density scaled by a constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled<D> {
    pub factor: f64,
    pub inner: D,
}

impl<D: Density> Density for Scaled<D> {
    fn value(&self, s: f64, t: f64, section: &CrossSection) -> Vec3 {
        self.inner.value(s, t, section) * self.factor
    }
}

impl<F> Density for F
where
    F: Fn(f64, f64) -> Vec3 + Sync,
{
    fn value(&self, s: f64, t: f64, _section: &CrossSection) -> Vec3 {
        self(s, t)
    }
}

/// `f/|r| + r (r·f)/|r|³`.
#[inline]
pub fn stokeslet(r: &Vec3, f: &Vec3) -> Vec3 {
    let r2 = r.norm_squared();
    let inv = r2.sqrt().recip();
    f * inv + r * (r.dot(f) * inv * inv * inv)
}

/// `(f/|r| + r (r·f)/|r|³) J` at the surface point `y(s, t)`, `r = x − y`.
pub fn slp_integrand(surface: &FiberSurface, x: &Vec3, s: f64, t: f64, density: &dyn Density) -> Result<Vec3> {
    let section = surface.cross_section(s);
    section_integrand(&section, x, t, density)
}

pub(crate) fn section_integrand(section: &CrossSection, x: &Vec3, t: f64, density: &dyn Density) -> Result<Vec3> {
    let r = x - section.point(t);
    if r.norm_squared() == 0.0 {
        return Err(Error::OnSurface);
    }
    Ok(stokeslet(&r, &density.value(section.s, t, section)) * section.jacobian(t))
}
