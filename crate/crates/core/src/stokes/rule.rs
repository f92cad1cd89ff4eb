//! Per-target surface quadrature: an outer rule in `s` on each panel and,
//! for every outer node, an inner periodic rule in `t`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::aperiodic_complex::{self, ComplexSingularity};
use crate::error::{Error, Result};
use crate::periodic::{self, PeriodicSingularity};
use crate::rates::ConvergencePrediction;
use crate::rules;
use crate::stokes::geometry::{CrossSection, FiberSurface, Vec3};
use crate::stokes::kernel::{stokeslet, Density};
use crate::stokes::singularities::{inner_singularity_at, outer_singularities};

/// Panels farther than this many tube radii use the reference rule.
pub const FAR_FIELD_RADII: f64 = 7.0;

/// Outer roots with ρ above this leave the reference rule in place.
pub const REVERSION_RHO: f64 = 2.0;

/// Smallest imaginary part used when building an outer rule from a root.
const MIN_ROOT_HEIGHT: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    /// Gauss-Legendre in `s` × trapezoid in `t` for every target.
    Reference,
    /// Aperiodic split in `s`, periodic split in `t`.
    Split,
    /// Sinh map in `s`, iterated sine map in `t`.
    Conformal,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Reference, Strategy::Split, Strategy::Conformal];

    pub fn as_str(self) -> &'static str {
        match self {
            Strategy::Reference => "reference",
            Strategy::Split => "split",
            Strategy::Conformal => "conformal",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL.into_iter().find(|k| k.as_str() == s).ok_or_else(|| {
            Error::Argument(format!(
                "unknown strategy `{s}` (expected reference, split or conformal)"
            ))
        })
    }
}

/// Whether a rule was customized for its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provenance {
    Reference,
    Accelerated,
}

/// Nodes `t` with precomputed `cos t`, `sin t`, and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct InnerRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    cos: Vec<f64>,
    sin: Vec<f64>,
    pub provenance: Provenance,
}

impl InnerRule {
    fn new(nodes: Vec<f64>, weights: Vec<f64>, provenance: Provenance) -> Self {
        let (sin, cos) = nodes.iter().map(|t| t.sin_cos()).unzip();
        Self {
            nodes,
            weights,
            cos,
            sin,
            provenance,
        }
    }

    fn trapezoid(n: usize) -> Result<Self> {
        let rule = rules::trapezoid_periodic(n)?;
        Ok(Self::new(
            rule.nodes().to_vec(),
            rule.weights().to_vec(),
            Provenance::Reference,
        ))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OuterNode {
    pub weight: f64,
    pub section: CrossSection,
    pub inner: Arc<InnerRule>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PanelRule {
    pub panel: usize,
    pub provenance: Provenance,
    pub nodes: Vec<OuterNode>,
}

impl PanelRule {
    pub fn node_count(&self) -> usize {
        self.nodes.iter().map(|o| o.inner.len()).sum()
    }
}

/// A complete surface rule for one target.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceRule {
    pub strategy: Strategy,
    pub panels: Vec<Arc<PanelRule>>,
}

/// Builds surface rules for many targets, sharing the reference panel
/// rules among all of them.
#[derive(Debug, Clone)]
pub struct RuleBuilder {
    surface: Arc<FiberSurface>,
    n: usize,
    reference: Vec<Arc<PanelRule>>,
}

impl RuleBuilder {
    pub fn new(surface: Arc<FiberSurface>, n: usize) -> Result<Self> {
        if n < 4 {
            return Err(Error::Argument(format!("surface rules need n >= 4, got {n}")));
        }
        let trap = Arc::new(InnerRule::trapezoid(n)?);
        let gl = rules::gauss_legendre(n)?;
        let reference = (0..surface.panel_count())
            .map(|k| {
                let (a, b) = surface.panel(k);
                let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
                let nodes = gl
                    .nodes()
                    .iter()
                    .zip(gl.weights())
                    .map(|(&tau, &w)| OuterNode {
                        weight: half * w,
                        section: surface.cross_section(mid + half * tau),
                        inner: Arc::clone(&trap),
                    })
                    .collect();
                Arc::new(PanelRule {
                    panel: k,
                    provenance: Provenance::Reference,
                    nodes,
                })
            })
            .collect();
        Ok(Self { surface, n, reference })
    }

    pub fn surface(&self) -> &FiberSurface {
        &self.surface
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn build(&self, x: &Vec3, strategy: Strategy) -> Result<SurfaceRule> {
        let panels = (0..self.surface.panel_count())
            .map(|k| self.build_panel(x, k, strategy))
            .collect::<Result<_>>()?;
        Ok(SurfaceRule { strategy, panels })
    }

    fn build_panel(&self, x: &Vec3, k: usize, strategy: Strategy) -> Result<Arc<PanelRule>> {
        let reference = &self.reference[k];
        if strategy == Strategy::Reference
            || self.surface.panel_distance(x, k) > FAR_FIELD_RADII * self.surface.radius()
        {
            return Ok(Arc::clone(reference));
        }
        let Some(roots) = outer_singularities(&self.surface, x, k) else {
            log::warn!("outer rootfinding failed on panel {k}; using the reference rule");
            return Ok(Arc::clone(reference));
        };
        let Some(root) = roots.first().filter(|r| r.rho <= REVERSION_RHO) else {
            return Ok(Arc::clone(reference));
        };
        let sing = ComplexSingularity::new(root.tau.re, root.tau.im.abs().max(MIN_ROOT_HEIGHT))?;
        let (taus, weights) = self.outer_rule(&sing, strategy)?;
        let (a, b) = self.surface.panel(k);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut nodes = Vec::with_capacity(taus.len());
        for (tau, w) in taus.into_iter().zip(weights) {
            let section = self.surface.cross_section(mid + half * tau);
            let inner = self.inner_rule(&section, x, strategy)?;
            nodes.push(OuterNode {
                weight: half * w,
                section,
                inner,
            });
        }
        Ok(Arc::new(PanelRule {
            panel: k,
            provenance: Provenance::Accelerated,
            nodes,
        }))
    }

    /// Outer nodes and weights on `[-1, 1]`.
    fn outer_rule(&self, sing: &ComplexSingularity, strategy: Strategy) -> Result<(Vec<f64>, Vec<f64>)> {
        let n = self.n;
        match strategy {
            Strategy::Split => {
                let plain = aperiodic_complex::gauss_legendre_prediction(sing)?;
                let split = aperiodic_complex::split_prediction(sing)?;
                if advantageous(&split, &plain) {
                    aperiodic_complex::split_nodes(sing, n)
                } else {
                    let gl = rules::gauss_legendre(n)?;
                    Ok((gl.nodes().to_vec(), gl.weights().to_vec()))
                }
            }
            _ => {
                let map = aperiodic_complex::sinh_map(sing)?;
                let gl = rules::gauss_legendre(n)?;
                Ok(gl
                    .nodes()
                    .iter()
                    .zip(gl.weights())
                    .map(|(&t, &w)| {
                        let (x, dx) = map.eval(t);
                        (x, w * dx)
                    })
                    .unzip())
            }
        }
    }

    fn inner_rule(&self, section: &CrossSection, x: &Vec3, strategy: Strategy) -> Result<Arc<InnerRule>> {
        let n = self.n;
        let sing = inner_singularity_at(section, x)?;
        let trap = || Ok(Arc::clone(&self.reference[0].nodes[0].inner));
        if !sing.height.is_finite() {
            return trap();
        }
        let periodic_sing = PeriodicSingularity::new(sing.height, sing.xi)?;
        match strategy {
            Strategy::Split => {
                let plain = periodic::trapezoid_prediction(&periodic_sing);
                let split = periodic::periodic_split_prediction(&periodic_sing)?;
                if !advantageous(&split, &plain) {
                    return trap();
                }
                let (nodes, weights) = periodic::periodic_split_nodes(&periodic_sing, n)?;
                Ok(Arc::new(InnerRule::new(nodes, weights, Provenance::Accelerated)))
            }
            _ => {
                let map = periodic::ism_map(&periodic_sing)?;
                if map.is_identity() {
                    return trap();
                }
                let rule = rules::trapezoid_periodic(n)?;
                let (nodes, weights) = rule
                    .nodes()
                    .iter()
                    .zip(rule.weights())
                    .map(|(&t, &w)| {
                        let (x, dx) = map.eval(t);
                        (x, w * dx)
                    })
                    .unzip();
                Ok(Arc::new(InnerRule::new(nodes, weights, Provenance::Accelerated)))
            }
        }
    }
}

fn advantageous(candidate: &ConvergencePrediction, plain: &ConvergencePrediction) -> bool {
    candidate.per_node_decay() < plain.per_node_decay()
}

/// Nested quadrature of the single-layer integrand with `rule`.
pub fn evaluate_slp(x: &Vec3, rule: &SurfaceRule, density: &dyn Density) -> Result<Vec3> {
    let mut total = Vec3::zeros();
    for panel in &rule.panels {
        for node in &panel.nodes {
            let c = &node.section;
            let inner = &node.inner;
            let mut acc = Vec3::zeros();
            for j in 0..inner.nodes.len() {
                let (ct, st) = (inner.cos[j], inner.sin[j]);
                let r = x - c.point_cs(ct, st);
                if r.norm_squared() == 0.0 {
                    return Err(Error::OnSurface);
                }
                let f = density.value(c.s, inner.nodes[j], c);
                acc += stokeslet(&r, &f) * (inner.weights[j] * c.jacobian_cs(ct, st));
            }
            total += acc * node.weight;
        }
    }
    Ok(total)
}

/// Total angle covered by an inner rule's weights (2π for any valid rule).
pub fn inner_weight_sum(rule: &InnerRule) -> f64 {
    rule.weights.iter().sum()
}

/// Mean spacing of an inner rule on the circle.
pub fn mean_inner_spacing(rule: &InnerRule) -> f64 {
    2.0 * PI / rule.len() as f64
}
