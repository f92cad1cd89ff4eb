//! Stokes single-layer potential over a slender tube whose centerline winds
//! around a torus, evaluated with per-target customized surface quadrature.

pub mod chebyshev;
pub mod geometry;
pub mod grid;
pub mod kernel;
pub mod rule;
pub mod singularities;

pub use geometry::{Centerline, CrossSection, FiberSurface, Frame, StraightLine, TorusCurve, Vec3};
pub use grid::{error_grid, ErrorGrid, GridCell};
pub use kernel::{slp_integrand, Density, Scaled, SurfaceNormal};
pub use rule::{evaluate_slp, PanelRule, Provenance, RuleBuilder, Strategy, SurfaceRule};
pub use singularities::{inner_singularity, outer_singularities, InnerSingularity, OuterRoot};
