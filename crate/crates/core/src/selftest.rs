//! Invariant checks across all modules, runnable from the command line.
//!
//! [`SelfTestOptions::ism_rule`] swaps the iterated-sine parameter rule so a
//! deliberately wrong formula can be shown to be caught.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::sync::Arc;

use num_complex::Complex64;

use crate::aperiodic_complex::{self, ComplexSingularity, JVH_DEFAULT_L};
use crate::aperiodic_real::{self, RealSingularity};
use crate::error::Result;
use crate::experiments::Method;
use crate::integrands::{make_integrand, IntegrandId, F_EPSILONS};
use crate::map::VariableMap;
use crate::periodic::{self, PeriodicSingularity};
use crate::references::ReferenceStore;
use crate::rules;
use crate::singularity::SingularityInfo;
use crate::special::{jacobi_am, jacobi_sn_cn_dn, EllipticParameter};
use crate::stokes::geometry::DEFAULT_TUBE_RADIUS;
use crate::stokes::{evaluate_slp, FiberSurface, RuleBuilder, Strategy, SurfaceNormal, Vec3};

/// Derivative check tolerance, relative to `max(1, |x'|)`.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-6;
/// `|x(t*) − singularity|` tolerance.
pub const PREIMAGE_TOLERANCE: f64 = 1e-10;
/// Tolerance for the Jacobi elliptic identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SelfTestOptions {
    /// Iterated sine map parameter `a(B)`.
    pub ism_rule: fn(f64) -> f64,
    /// Reference values; checks that need them fail when absent.
    pub references: Option<ReferenceStore>,
    /// Include the Stokes single-layer check (about a second).
    pub stokes: bool,
}

impl Default for SelfTestOptions {
    fn default() -> Self {
        Self {
            ism_rule: periodic::ism_parameter,
            references: ReferenceStore::embedded().ok(),
            stokes: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SelfTestReport {
    pub checks: Vec<CheckOutcome>,
}

impl SelfTestReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {}: {}", c.name, c.detail).expect("writing to a String cannot fail");
        }
        out
    }
}

/// Runs every check; never stops early.
pub fn run_selftest(options: &SelfTestOptions) -> SelfTestReport {
    let mut report = SelfTestReport::default();
    let mut record = |name: &'static str, outcome: std::result::Result<String, String>| {
        let (passed, detail) = match outcome {
            Ok(d) => (true, d),
            Err(d) => (false, d),
        };
        report.checks.push(CheckOutcome { name, passed, detail });
    };
    record("elliptic-identities", elliptic_identities(400));
    record("base-rules", base_rule_exactness());
    record("map-invariants", all_map_invariants(options.ism_rule));
    record("periodic-rates", periodic_rates(options.ism_rule));
    record("real-rates", real_rates());
    record("complex-rate-ordering", complex_rate_ordering());
    record("split-crossover", split_crossover());
    match &options.references {
        Some(store) => {
            record("reference-store", reference_coverage(store));
            record("ism-headline", ism_headline(store, options.ism_rule));
        }
        None => {
            let missing = "no reference store loaded; generate one with `nsquad references --out <path>`";
            record("reference-store", Err(missing.to_string()));
            record("ism-headline", Err(missing.to_string()));
        }
    }
    if options.stokes {
        record("stokes-zero-velocity", stokes_zero_velocity());
    }
    report
}

/// A deterministic, evenly spread sequence in `[0, 1)`.
fn weyl(k: usize) -> f64 {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    (0.5 + GOLDEN * k as f64).fract()
}

/// `sn² + cn² = 1`, `dn² + m sn² = 1`, `sin(am) = sn` over spread-out `(u, m)`.
pub fn elliptic_identities(samples: usize) -> std::result::Result<String, String> {
    let mut worst = 0.0f64;
    for k in 0..samples {
        let u = 20.0 * weyl(2 * k) - 10.0;
        let m = weyl(2 * k + 1);
        let p = EllipticParameter::new(m).map_err(|e| e.to_string())?;
        let (sn, cn, dn) = jacobi_sn_cn_dn(u, p);
        let am = jacobi_am(u, p);
        let errs = [
            (sn * sn + cn * cn - 1.0).abs(),
            (dn * dn + m * sn * sn - 1.0).abs(),
            (am.sin() - sn).abs(),
            (am.cos() - cn).abs(),
        ];
        let e = errs.into_iter().fold(0.0, f64::max);
        if e.is_nan() || e > IDENTITY_TOLERANCE {
            return Err(format!("identity residual {e:.2e} at u = {u}, m = {m}"));
        }
        worst = worst.max(e);
    }
    Ok(format!("{samples} samples, worst residual {worst:.1e}"))
}

/// Gauss-Legendre exactness to degree `2n − 1`, trapezoid exactness for
/// trigonometric polynomials of degree `< n`.
fn base_rule_exactness() -> std::result::Result<String, String> {
    for n in [1, 2, 5, 16, 40] {
        let gl = rules::gauss_legendre(n).map_err(|e| e.to_string())?;
        for deg in 0..2 * n {
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            let got = gl.apply(|x| x.powi(deg as i32)).map_err(|e| e.to_string())?;
            if (got - want).abs() > 1e-13 {
                return Err(format!("Gauss-Legendre n = {n}: ∫x^{deg} = {got}, want {want}"));
            }
        }
    }
    for n in [3, 8, 33] {
        let tr = rules::trapezoid_periodic(n).map_err(|e| e.to_string())?;
        for k in 1..n {
            let got = tr.apply(|x| (k as f64 * x).cos()).map_err(|e| e.to_string())?;
            if got.abs() > 1e-13 {
                return Err(format!("trapezoid n = {n}: ∫cos({k}x) = {got}"));
            }
        }
    }
    Ok("polynomial and trigonometric exactness".into())
}

/// Endpoint, monotonicity, derivative and singularity-image checks for one
/// map on `[lo, hi]`; `target` is the treated singularity.
pub fn check_map(map: &VariableMap, lo: f64, hi: f64, target: Complex64) -> std::result::Result<(), String> {
    let name = map.name();
    let scale = (hi - lo) / 2.0;
    for (t, want) in [(lo, lo), (hi, hi)] {
        let x = map.forward(t);
        if (x - want).abs() > 1e-10 * scale.max(1.0) {
            return Err(format!("{name}: x({t}) = {x}, want {want}"));
        }
    }
    let steps = 2000;
    let mut prev = f64::NEG_INFINITY;
    for j in 0..=steps {
        let t = lo + (hi - lo) * j as f64 / steps as f64;
        let (x, dx) = map.eval(t);
        if x.is_nan() || x < prev || dx.is_nan() || dx <= 0.0 {
            return Err(format!("{name}: not increasing at t = {t}"));
        }
        prev = x;
    }
    for k in 0..16 {
        let t = lo + (hi - lo) * (0.02 + 0.96 * weyl(k));
        let h = 1e-6 * scale;
        let fd = (map.forward(t + h) - map.forward(t - h)) / (2.0 * h);
        let d = map.derivative(t);
        if (fd - d).abs() > DERIVATIVE_TOLERANCE * d.abs().max(1.0) {
            return Err(format!("{name}: x'({t}) = {d}, finite difference {fd}"));
        }
    }
    if let Some(t_star) = map.singular_preimage() {
        if let Some(x) = map.forward_complex(t_star) {
            let err = (x - target).norm();
            if err > PREIMAGE_TOLERANCE * target.norm().max(1.0) {
                return Err(format!("{name}: x(t*) = {x}, want {target} (error {err:.1e})"));
            }
        }
    }
    Ok(())
}

/// Every map of every family over a spread of singularity locations.
pub fn all_map_invariants(ism_rule: fn(f64) -> f64) -> std::result::Result<String, String> {
    let err = |e: crate::Error| e.to_string();
    let mut count = 0;
    for (b, x0) in [
        (1e-3, 0.0),
        (0.03, 1.0),
        (0.3, 0.0),
        (0.3, -2.5),
        (1.0, 0.5),
        (2.0, 0.0),
    ] {
        let s = PeriodicSingularity::new(b, x0).map_err(err)?;
        let maps = [
            periodic::jam_map(&s).map_err(err)?,
            periodic::bcm_map(&s).map_err(err)?,
            periodic::ism_map_with(&s, ism_rule).map_err(err)?,
        ];
        for m in &maps {
            // recentred periodic maps fix the shifted period
            check_map(m, x0 - PI, x0 + PI, Complex64::new(x0, b))?;
            count += 1;
        }
    }
    for (a, b) in [
        (2.0 / 3.0, 1.0 / 3.0),
        (2.0 / 3.0, 1.0 / 3000.0),
        (0.0, 0.05),
        (-0.9, 0.01),
        (1.2, 0.1),
    ] {
        let s = ComplexSingularity::new(a, b).map_err(err)?;
        let maps = [
            aperiodic_complex::sinh_map(&s).map_err(err)?,
            aperiodic_complex::tee_elliptic_map(&s).map_err(err)?,
            aperiodic_complex::jvh_map(&s, JVH_DEFAULT_L).map_err(err)?,
            aperiodic_complex::iterated_sinh_map(&s).map_err(err)?,
        ];
        for m in &maps {
            check_map(m, -1.0, 1.0, Complex64::new(a, b))?;
            count += 1;
        }
    }
    for (a, cut) in [
        (4.0 / 3.0, true),
        (1.0 + 1.0 / 300.0, true),
        (-1.5, true),
        (3.0, false),
        (1.01, false),
    ] {
        let s = RealSingularity::new(a, cut).map_err(err)?;
        let maps = [
            aperiodic_real::quadratic_map(&s).map_err(err)?,
            aperiodic_real::exponential_map(&s).map_err(err)?,
            aperiodic_real::real_elliptic_map(&s).map_err(err)?,
        ];
        for m in &maps {
            check_map(m, -1.0, 1.0, Complex64::new(a, 0.0))?;
            count += 1;
        }
    }
    Ok(format!("{count} maps"))
}

/// `value` agrees with a displayed number to within one unit of its last
/// digit (so both rounded and truncated displays match).
pub fn matches_displayed(value: f64, displayed: &str) -> bool {
    let decimals = displayed.split_once('.').map_or(0, |(_, d)| d.len());
    let shown: f64 = displayed.parse().expect("displayed value is a number");
    (value - shown).abs() < 10f64.powi(-(decimals as i32))
}

fn compare(label: &str, value: f64, displayed: &str) -> std::result::Result<String, String> {
    if matches_displayed(value, displayed) {
        Ok(format!("{label} {value:.4} (shown {displayed})"))
    } else {
        Err(format!("{label} {value:.4} does not match the expected {displayed}"))
    }
}

fn join(parts: Vec<std::result::Result<String, String>>) -> std::result::Result<String, String> {
    let failed: Vec<String> = parts.iter().filter_map(|p| p.as_ref().err().cloned()).collect();
    if failed.is_empty() {
        Ok(parts.into_iter().map(|p| p.unwrap()).collect::<Vec<_>>().join(", "))
    } else {
        Err(failed.join("; "))
    }
}

/// λ at B = 0.3: JAM 1.5, BCM 0.81, ISM 1.46.
pub fn periodic_rates(ism_rule: fn(f64) -> f64) -> std::result::Result<String, String> {
    let s = PeriodicSingularity::centered(0.3).map_err(|e| e.to_string())?;
    let lam = |m: Result<VariableMap>| m.map(|m| m.prediction().value()).map_err(|e| e.to_string());
    join(vec![
        compare("jam", lam(periodic::jam_map(&s))?, "1.5"),
        compare("bcm", lam(periodic::bcm_map(&s))?, "0.81"),
        compare("ism", lam(periodic::ism_map_with(&s, ism_rule))?, "1.46"),
    ])
}

/// ρ at A = 4/3: plain 2.21, quadratic 4.19, exponential 6.61, elliptic 8.38.
pub fn real_rates() -> std::result::Result<String, String> {
    let s = SingularityInfo::Real(RealSingularity::new(4.0 / 3.0, true).map_err(|e| e.to_string())?);
    let rho = |m: Method| m.prediction(&s).map(|p| p.value()).map_err(|e| e.to_string());
    join(vec![
        compare("gauss-legendre", rho(Method::RealGaussLegendre)?, "2.21"),
        compare("quadratic", rho(Method::Quadratic)?, "4.19"),
        compare("exponential", rho(Method::Exponential)?, "6.61"),
        compare("elliptic", rho(Method::RealElliptic)?, "8.38"),
    ])
}

/// ρ_sinh < ρ_JVH < ρ_Tee at A = 2/3, B = 1/3.
fn complex_rate_ordering() -> std::result::Result<String, String> {
    let s = SingularityInfo::Complex(ComplexSingularity::new(2.0 / 3.0, 1.0 / 3.0).map_err(|e| e.to_string())?);
    let rho = |m: Method| m.prediction(&s).map(|p| p.value()).map_err(|e| e.to_string());
    let (sinh, jvh, tee) = (rho(Method::Sinh)?, rho(Method::Jvh)?, rho(Method::Tee)?);
    let detail = format!("sinh {sinh:.3}, jvh {jvh:.3}, tee {tee:.3}");
    if sinh < jvh && jvh < tee {
        Ok(detail)
    } else {
        Err(format!("ordering violated: {detail}"))
    }
}

/// `ln ρ_split = B` at `B = 0.95 ± 0.02`.
pub fn split_crossover() -> std::result::Result<String, String> {
    let b = periodic::split_crossover_height().map_err(|e| e.to_string())?;
    if (b - 0.95).abs() <= 0.02 {
        Ok(format!("B = {b:.5}"))
    } else {
        Err(format!("crossover at B = {b:.5}, expected 0.95 ± 0.02"))
    }
}

/// The store has a value for every standard `(integrand, ε)`.
fn reference_coverage(store: &ReferenceStore) -> std::result::Result<String, String> {
    let mut count = 0;
    for id in IntegrandId::ALL {
        for eps in id.standard_epsilons() {
            store.lookup(id, eps).map_err(|e| e.to_string())?;
            count += 1;
        }
    }
    Ok(format!("{count} standard values present"))
}

/// f1 with the ISM reaches relative error 1e-13 by n = 60 for every ε.
pub fn ism_headline(store: &ReferenceStore, ism_rule: fn(f64) -> f64) -> std::result::Result<String, String> {
    let mut firsts = Vec::new();
    for eps in F_EPSILONS {
        let ti = make_integrand(IntegrandId::F1, eps).map_err(|e| e.to_string())?;
        let reference = ti.reference(store).map_err(|e| e.to_string())?;
        let SingularityInfo::Periodic(sing) = ti.primary_singularity() else {
            return Err("f1 has a periodic singularity".into());
        };
        let map = periodic::ism_map_with(sing, ism_rule).map_err(|e| e.to_string())?;
        let mut first = None;
        for n in 4..=60 {
            let rule = rules::trapezoid_periodic(n).map_err(|e| e.to_string())?;
            let q = rule.apply_mapped(&map, |x| ti.eval(x)).map_err(|e| e.to_string())?;
            if ((q - reference) / reference).abs() < 1e-13 {
                first = Some(n);
                break;
            }
        }
        match first {
            Some(n) => firsts.push(format!("ε = {eps}: n = {n}")),
            None => return Err(format!("ε = {eps}: relative error still ≥ 1e-13 at n = 60")),
        }
    }
    Ok(firsts.join(", "))
}

/// The single-layer potential of the surface normal vanishes: far targets
/// at n = 24, and a target 0.1ε from the surface with the conformal rule.
fn stokes_zero_velocity() -> std::result::Result<String, String> {
    let err = |e: crate::Error| e.to_string();
    let surface = Arc::new(FiberSurface::torus_fiber(DEFAULT_TUBE_RADIUS).map_err(err)?);
    let far = Vec3::new(2.5, 1.0, 1.0);
    let b24 = RuleBuilder::new(Arc::clone(&surface), 24).map_err(err)?;
    let u_far = evaluate_slp(
        &far,
        &b24.build(&far, Strategy::Reference).map_err(err)?,
        &SurfaceNormal,
    )
    .map_err(err)?
    .norm();
    let c = surface.cross_section(2.0);
    let near = c.center + c.frame.normal * (surface.radius() * 1.1);
    let b32 = RuleBuilder::new(surface, 32).map_err(err)?;
    let u_near = |s| -> std::result::Result<f64, String> {
        Ok(evaluate_slp(&near, &b32.build(&near, s).map_err(err)?, &SurfaceNormal)
            .map_err(err)?
            .norm())
    };
    let (u_ref, u_conf) = (u_near(Strategy::Reference)?, u_near(Strategy::Conformal)?);
    let detail = format!("far |u| {u_far:.1e}; near |u| reference {u_ref:.1e}, conformal {u_conf:.1e}");
    if u_far < 1e-12 && u_conf < 1e-6 * u_ref {
        Ok(detail)
    } else {
        Err(detail)
    }
}
