//! Baseline Gauss-Legendre and periodic trapezoid rules, and their
//! application to integrands directly or through a change of variable.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::map::VariableMap;

/// The canonical domain a rule (or map) lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    /// The interval `[-1, 1]`.
    Interval,
    /// One period `[-π, π)`.
    Period,
}

impl Domain {
    pub fn bounds(self) -> (f64, f64) {
        match self {
            Domain::Interval => (-1.0, 1.0),
            Domain::Period => (-PI, PI),
        }
    }

    pub fn length(self) -> f64 {
        match self {
            Domain::Interval => 2.0,
            Domain::Period => 2.0 * PI,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleKind {
    GaussLegendre,
    Trapezoid,
}

/// Abscissae and positive weights on a canonical [`Domain`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: Domain,
}

impl QuadRule {
    /// The `n`-point Gauss-Legendre rule on `[-1, 1]`.
    ///
    /// Nodes come from Newton's method on `Pₙ` (three-term recurrence),
    /// started from the Chebyshev-angle estimate `cos(π(k − ¼)/(n + ½))`.
    /// Only the non-negative half is computed; the rest is mirrored so the
    /// rule is exactly symmetric.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("Gauss-Legendre rule needs n >= 1".into()));
        }
        let half = n / 2;
        let mut pos_nodes = Vec::with_capacity(half);
        let mut pos_weights = Vec::with_capacity(half);
        for k in 1..=half {
            let mut x = (PI * (k as f64 - 0.25) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 4.0 * f64::EPSILON * x.abs().max(1e-3) {
                    dp = legendre_with_derivative(n, x).1;
                    break;
                }
            }
            pos_nodes.push(x);
            pos_weights.push(2.0 / ((1.0 - x * x) * dp * dp));
        }

        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for (x, w) in pos_nodes.iter().zip(&pos_weights) {
            nodes.push(-x);
            weights.push(*w);
        }
        if n % 2 == 1 {
            let dp = legendre_with_derivative(n, 0.0).1;
            nodes.push(0.0);
            weights.push(2.0 / (dp * dp));
        }
        for (x, w) in pos_nodes.iter().zip(&pos_weights).rev() {
            nodes.push(*x);
            weights.push(*w);
        }
        Ok(Self {
            nodes,
            weights,
            domain: Domain::Interval,
        })
    }

    /// The `n`-point trapezoid rule on `[-π, π)` with nodes `−π + 2πj/n`.
    pub fn trapezoid_periodic(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Argument("trapezoid rule needs n >= 1".into()));
        }
        let h = 2.0 * PI / n as f64;
        Ok(Self {
            nodes: (0..n).map(|j| -PI + h * j as f64).collect(),
            weights: vec![h; n],
            domain: Domain::Period,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ wⱼ f(xⱼ)`.
    pub fn apply<F: Fn(f64) -> f64>(&self, f: F) -> Result<f64> {
        let mut sum = 0.0;
        for (index, (&x, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let v = f(x);
            if !v.is_finite() {
                return Err(Error::NonFinite { index, x });
            }
            sum += w * v;
        }
        Ok(sum)
    }

    /// `Σ wⱼ f(x(tⱼ)) x'(tⱼ)`.
    pub fn apply_mapped<F: Fn(f64) -> f64>(&self, map: &VariableMap, f: F) -> Result<f64> {
        if map.domain() != self.domain {
            return Err(Error::Argument(format!(
                "map domain {:?} does not match rule domain {:?}",
                map.domain(),
                self.domain
            )));
        }
        let mut sum = 0.0;
        for (index, (&t, &w)) in self.nodes.iter().zip(&self.weights).enumerate() {
            let (x, dx) = map.eval(t);
            let v = f(x) * dx;
            if !v.is_finite() {
                return Err(Error::NonFinite { index, x });
            }
            sum += w * v;
        }
        Ok(sum)
    }

    /// Applies an interval rule to `∫ₐᵇ f` by the affine change of variable.
    pub fn apply_on<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> Result<f64> {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        Ok(half * self.apply(|t| f(mid + half * t))?)
    }
}

/// `(Pₙ(x), Pₙ'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

type RuleCache = RwLock<HashMap<(RuleKind, usize), Arc<QuadRule>>>;

fn cache() -> &'static RuleCache {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Shared, lazily generated rule keyed by `(kind, n)`.
pub fn cached_rule(kind: RuleKind, n: usize) -> Result<Arc<QuadRule>> {
    if let Some(rule) = cache().read().expect("rule cache poisoned").get(&(kind, n)) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(match kind {
        RuleKind::GaussLegendre => QuadRule::gauss_legendre(n)?,
        RuleKind::Trapezoid => QuadRule::trapezoid_periodic(n)?,
    });
    let mut guard = cache().write().expect("rule cache poisoned");
    Ok(Arc::clone(guard.entry((kind, n)).or_insert(rule)))
}

pub fn gauss_legendre(n: usize) -> Result<Arc<QuadRule>> {
    cached_rule(RuleKind::GaussLegendre, n)
}

pub fn trapezoid_periodic(n: usize) -> Result<Arc<QuadRule>> {
    cached_rule(RuleKind::Trapezoid, n)
}
