//! Fixtures shared by the benchmarks in `benches/`.

use std::sync::Arc;

use nsquad_core::stokes::geometry::DEFAULT_TUBE_RADIUS;
use nsquad_core::stokes::{FiberSurface, RuleBuilder, Vec3};
use nsquad_core::{make_integrand, IntegrandId, ReferenceStore, TestIntegrand};

/// An integrand at one of its standard ε with its reference value.
pub fn integrand(id: IntegrandId, epsilon: f64) -> (TestIntegrand, f64) {
    let ti = make_integrand(id, epsilon).expect("standard integrand");
    let store = ReferenceStore::embedded().expect("embedded references");
    let reference = ti.reference(&store).expect("standard reference");
    (ti, reference)
}

/// Rule builder for the default torus fiber.
pub fn fiber_builder(n: usize) -> RuleBuilder {
    let surface = FiberSurface::torus_fiber(DEFAULT_TUBE_RADIUS).expect("torus fiber");
    RuleBuilder::new(Arc::new(surface), n).expect("rule builder")
}

/// A target `offset·ε` outside the fiber surface, on the normal at `s`.
pub fn near_target(builder: &RuleBuilder, s: f64, offset: f64) -> Vec3 {
    let surface = builder.surface();
    let c = surface.cross_section(s);
    c.center + c.frame.normal * (surface.radius() * (1.0 + offset))
}
