//! Error grids over the target square `0 < x < 1`, `−5/8 < y < 3/8`, `z = 0`.

use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::stokes::geometry::Vec3;
use crate::stokes::kernel::SurfaceNormal;
use crate::stokes::rule::{evaluate_slp, RuleBuilder, Strategy};

/// Targets closer than this to the surface are masked.
pub const MASK_DISTANCE: f64 = 1e-3;

pub const GRID_X: (f64, f64) = (0.0, 1.0);
pub const GRID_Y: (f64, f64) = (-0.625, 0.375);

/// Floor applied before taking `log10 |u|`.
const LOG_FLOOR: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub x: f64,
    pub y: f64,
    /// `log10 |u|`, NaN when masked.
    pub log10_error: f64,
    pub masked: bool,
    /// Distance from the target to the surface.
    pub surface_distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorGrid {
    pub resolution: usize,
    pub strategy: Strategy,
    pub n: usize,
    /// Row-major: `y` index outer, `x` index inner.
    pub cells: Vec<GridCell>,
}

/// Cell-centred target points, row-major.
pub fn grid_points(resolution: usize) -> Vec<(f64, f64)> {
    let r = resolution as f64;
    (0..resolution)
        .flat_map(|j| {
            (0..resolution).map(move |i| {
                (
                    GRID_X.0 + (GRID_X.1 - GRID_X.0) * (i as f64 + 0.5) / r,
                    GRID_Y.0 + (GRID_Y.1 - GRID_Y.0) * (j as f64 + 0.5) / r,
                )
            })
        })
        .collect()
}

/// `log10 |u|` for the surface-normal density (exact answer zero) at every
/// grid target. Targets are processed in parallel; the output order is
/// fixed by the grid.
pub fn error_grid(builder: &RuleBuilder, resolution: usize, strategy: Strategy) -> Result<ErrorGrid> {
    if resolution < 2 {
        return Err(Error::Argument(format!(
            "grid resolution must be >= 2, got {resolution}"
        )));
    }
    let surface = builder.surface();
    let cells = grid_points(resolution)
        .into_par_iter()
        .map(|(x, y)| {
            let target = Vec3::new(x, y, 0.0);
            let distance = surface.surface_distance(&target);
            if distance.abs() < MASK_DISTANCE {
                return Ok(GridCell {
                    x,
                    y,
                    log10_error: f64::NAN,
                    masked: true,
                    surface_distance: distance,
                });
            }
            let rule = builder.build(&target, strategy)?;
            let u = evaluate_slp(&target, &rule, &SurfaceNormal)?;
            Ok(GridCell {
                x,
                y,
                log10_error: u.norm().max(LOG_FLOOR).log10(),
                masked: false,
                surface_distance: distance,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ErrorGrid {
        resolution,
        strategy,
        n: builder.n(),
        cells,
    })
}

impl ErrorGrid {
    /// CSV with header `x,y,log10_error,masked`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,log10_error,masked\n");
        for c in &self.cells {
            if c.masked {
                writeln!(out, "{:.6},{:.6},nan,1", c.x, c.y)
            } else {
                writeln!(out, "{:.6},{:.6},{:.6},0", c.x, c.y, c.log10_error)
            }
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn unmasked(&self) -> impl Iterator<Item = &GridCell> {
        self.cells.iter().filter(|c| !c.masked)
    }

    /// Largest `log10 |u|` over unmasked cells passing `keep`.
    pub fn max_log10_where(&self, keep: impl Fn(&GridCell) -> bool) -> Option<f64> {
        self.unmasked()
            .filter(|c| keep(c))
            .map(|c| c.log10_error)
            .reduce(f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stokes::geometry::FiberSurface;
    use std::sync::Arc;

    #[test]
    fn points_are_cell_centred() {
        let p = grid_points(4);
        assert_eq!(p.len(), 16);
        assert_eq!(p[0], (0.125, -0.5));
        assert_eq!(p[1].1, p[0].1);
        assert!(p.iter().all(|&(x, y)| x > 0.0 && x < 1.0 && y > -0.625 && y < 0.375));
    }

    #[test]
    fn small_grid_is_complete_and_deterministic() {
        let surface = Arc::new(FiberSurface::torus_fiber(0.05).unwrap());
        let b = RuleBuilder::new(surface, 6).unwrap();
        let g = error_grid(&b, 5, Strategy::Conformal).unwrap();
        assert_eq!(g.cells.len(), 25);
        assert!(g.cells.iter().all(|c| c.masked || c.log10_error.is_finite()));
        let again = error_grid(&b, 5, Strategy::Conformal).unwrap();
        assert_eq!(g.to_csv(), again.to_csv());
        assert!(g.to_csv().starts_with("x,y,log10_error,masked\n"));
    }

    #[test]
    fn rejects_tiny_resolution() {
        let surface = Arc::new(FiberSurface::torus_fiber(0.05).unwrap());
        let b = RuleBuilder::new(surface, 4).unwrap();
        assert!(error_grid(&b, 1, Strategy::Reference).is_err());
    }
}
