//! Fiber centerlines, the `{T, N, B}` frame and the tube surface
//! `y(s, t) = w(s) + ε cos t N(s) + ε sin t B(s)`.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Vec3 = Vector3<f64>;
pub type CVec3 = Vector3<Complex64>;

/// Default tube radius.
pub const DEFAULT_TUBE_RADIUS: f64 = 0.05;

/// Minor radius of the torus carrying the centerline.
pub const TORUS_MINOR_RADIUS: f64 = 0.4;

/// Panel endpoints in the centerline parameter.
pub const PANEL_BREAKPOINTS: [f64; 17] = [
    0.0,
    0.58,
    1.21,
    1.83,
    2.35,
    2.76,
    3.19,
    3.86,
    4.26,
    4.65,
    5.04,
    5.24,
    5.41,
    5.57,
    5.75,
    6.05,
    2.0 * PI,
];

/// Frame reference vector; `T(s)` stays far from the line through `±p`.
pub const FRAME_REFERENCE: [f64; 3] = [10.0, 3.0, 6.0];

/// A smooth space curve with analytic derivatives.
pub trait Centerline: Send + Sync + std::fmt::Debug {
    /// `(w(s), w'(s), w''(s))`.
    fn jet(&self, s: f64) -> (Vec3, Vec3, Vec3);

    /// `(w(s), w'(s))` for complex `s`.
    fn jet_complex(&self, s: Complex64) -> (CVec3, CVec3);
}

/// The closed curve `w(s) = v(s, φ(s))` on the torus
/// `v(θ, φ) = (1 + r cos φ)(cos θ, sin θ, 0) + r sin φ (0, 0, 1)`, with
/// `φ(s) = 2 exp(cos(s + 1)) cos 2s + 2s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusCurve {
    pub minor_radius: f64,
}

impl Default for TorusCurve {
    fn default() -> Self {
        Self {
            minor_radius: TORUS_MINOR_RADIUS,
        }
    }
}

impl TorusCurve {
    /// `(φ, φ', φ'')`.
    fn phase(s: f64) -> (f64, f64, f64) {
        let e = (s + 1.0).cos().exp();
        let (s1, c1) = (s + 1.0).sin_cos();
        let (s2, c2) = (2.0 * s).sin_cos();
        let g = -s1 * c2 - 2.0 * s2;
        let dg = -c1 * c2 + 2.0 * s1 * s2 - 4.0 * c2;
        (2.0 * e * c2 + 2.0 * s, 2.0 * e * g + 2.0, 2.0 * e * (-s1 * g + dg))
    }

    fn phase_complex(s: Complex64) -> (Complex64, Complex64) {
        let e = (s + 1.0).cos().exp();
        let s1 = (s + 1.0).sin();
        let (s2, c2) = ((2.0 * s).sin(), (2.0 * s).cos());
        (2.0 * e * c2 + 2.0 * s, 2.0 * e * (-s1 * c2 - 2.0 * s2) + 2.0)
    }
}

impl Centerline for TorusCurve {
    fn jet(&self, s: f64) -> (Vec3, Vec3, Vec3) {
        let r = self.minor_radius;
        let (phi, dphi, ddphi) = Self::phase(s);
        let (sp, cp) = phi.sin_cos();
        let big = 1.0 + r * cp;
        let dbig = -r * sp * dphi;
        let ddbig = -r * (cp * dphi * dphi + sp * ddphi);
        let z = r * sp;
        let dz = r * cp * dphi;
        let ddz = r * (-sp * dphi * dphi + cp * ddphi);
        let (st, ct) = s.sin_cos();
        (
            Vec3::new(big * ct, big * st, z),
            Vec3::new(dbig * ct - big * st, dbig * st + big * ct, dz),
            Vec3::new(
                ddbig * ct - 2.0 * dbig * st - big * ct,
                ddbig * st + 2.0 * dbig * ct - big * st,
                ddz,
            ),
        )
    }

    fn jet_complex(&self, s: Complex64) -> (CVec3, CVec3) {
        let r = self.minor_radius;
        let (phi, dphi) = Self::phase_complex(s);
        let (sp, cp) = (phi.sin(), phi.cos());
        let big = 1.0 + r * cp;
        let dbig = -r * sp * dphi;
        let (st, ct) = (s.sin(), s.cos());
        (
            CVec3::new(big * ct, big * st, r * sp),
            CVec3::new(dbig * ct - big * st, dbig * st + big * ct, r * cp * dphi),
        )
    }
}

/// `w(s) = origin + s·direction`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StraightLine {
    pub origin: Vec3,
    pub direction: Vec3,
}

impl Centerline for StraightLine {
    fn jet(&self, s: f64) -> (Vec3, Vec3, Vec3) {
        (self.origin + self.direction * s, self.direction, Vec3::zeros())
    }

    fn jet_complex(&self, s: Complex64) -> (CVec3, CVec3) {
        let o = self.origin.map(Complex64::from);
        let d = self.direction.map(Complex64::from);
        (o + d * s, d)
    }
}

/// Orthonormal frame at one centerline parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Frame {
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
}

/// Everything about the cross-section at `s` needed to evaluate the
/// surface, its normal and its area element for any `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossSection {
    pub s: f64,
    pub center: Vec3,
    pub velocity: Vec3,
    pub frame: Frame,
    pub normal_rate: Vec3,
    pub binormal_rate: Vec3,
    pub radius: f64,
}

impl CrossSection {
    pub fn point(&self, t: f64) -> Vec3 {
        let (st, ct) = t.sin_cos();
        self.point_cs(ct, st)
    }

    pub(crate) fn point_cs(&self, ct: f64, st: f64) -> Vec3 {
        self.center + (self.frame.normal * ct + self.frame.binormal * st) * self.radius
    }

    pub fn unit_normal(&self, t: f64) -> Vec3 {
        let (st, ct) = t.sin_cos();
        self.frame.normal * ct + self.frame.binormal * st
    }

    /// `|∂y/∂s × ∂y/∂t|`.
    pub fn jacobian(&self, t: f64) -> f64 {
        let (st, ct) = t.sin_cos();
        self.jacobian_cs(ct, st)
    }

    pub(crate) fn jacobian_cs(&self, ct: f64, st: f64) -> f64 {
        let e = self.radius;
        let ys = self.velocity + (self.normal_rate * ct + self.binormal_rate * st) * e;
        let yt = (self.frame.binormal * ct - self.frame.normal * st) * e;
        ys.cross(&yt).norm()
    }
}

/// A tube of constant radius around a closed centerline, split into panels.
#[derive(Debug, Clone)]
pub struct FiberSurface {
    curve: Arc<dyn Centerline>,
    radius: f64,
    reference: Vec3,
    breakpoints: Vec<f64>,
}

impl FiberSurface {
    pub fn new(curve: Arc<dyn Centerline>, radius: f64, reference: Vec3, breakpoints: Vec<f64>) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::Geometry(format!("tube radius must be positive, got {radius}")));
        }
        if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Geometry("panel breakpoints must be strictly increasing".into()));
        }
        Ok(Self {
            curve,
            radius,
            reference,
            breakpoints,
        })
    }

    /// The torus fiber with the standard panels.
    pub fn torus_fiber(radius: f64) -> Result<Self> {
        Self::new(
            Arc::new(TorusCurve::default()),
            radius,
            Vec3::from(FRAME_REFERENCE),
            PANEL_BREAKPOINTS.to_vec(),
        )
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn curve(&self) -> &dyn Centerline {
        self.curve.as_ref()
    }

    pub fn frame_reference(&self) -> Vec3 {
        self.reference
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn panel_count(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// `(start, end)` of panel `k`.
    pub fn panel(&self, k: usize) -> (f64, f64) {
        (self.breakpoints[k], self.breakpoints[k + 1])
    }

    pub fn centerline(&self, s: f64) -> Vec3 {
        self.curve.jet(s).0
    }

    pub fn frame(&self, s: f64) -> Frame {
        self.cross_section(s).frame
    }

    pub fn surface_point(&self, s: f64, t: f64) -> Vec3 {
        self.cross_section(s).point(t)
    }

    pub fn normal(&self, s: f64, t: f64) -> Vec3 {
        self.cross_section(s).unit_normal(t)
    }

    /// Area element; a nonpositive value means the tube folds over itself.
    pub fn jacobian(&self, s: f64, t: f64) -> Result<f64> {
        let j = self.cross_section(s).jacobian(t);
        if j > 0.0 {
            Ok(j)
        } else {
            Err(Error::Geometry(format!(
                "nonpositive area element {j} at s = {s}, t = {t}"
            )))
        }
    }

    pub fn cross_section(&self, s: f64) -> CrossSection {
        let (w, dw, ddw) = self.curve.jet(s);
        let speed = dw.norm();
        let tangent = dw / speed;
        let dtangent = (ddw - tangent * tangent.dot(&ddw)) / speed;
        let u = tangent.cross(&self.reference);
        let u_len = u.norm();
        let normal = u / u_len;
        let du = dtangent.cross(&self.reference);
        let dnormal = (du - normal * normal.dot(&du)) / u_len;
        let binormal = tangent.cross(&normal);
        let dbinormal = dtangent.cross(&normal) + tangent.cross(&dnormal);
        CrossSection {
            s,
            center: w,
            velocity: dw,
            frame: Frame {
                tangent,
                normal,
                binormal,
            },
            normal_rate: dnormal,
            binormal_rate: dbinormal,
            radius: self.radius,
        }
    }

    /// Smallest `|T(s) × p|/|p|` over `samples` equispaced parameters.
    pub fn frame_clearance(&self, samples: usize) -> f64 {
        let (a, b) = (self.breakpoints[0], *self.breakpoints.last().expect("nonempty"));
        (0..samples)
            .map(|k| {
                let s = a + (b - a) * k as f64 / samples as f64;
                let (_, dw, _) = self.curve.jet(s);
                dw.normalize().cross(&self.reference).norm() / self.reference.norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// `min |x − w(s)|` over `s ∈ [a, b]`, by sampling then golden-section
    /// refinement, and the minimizing `s`.
    pub fn centerline_distance(&self, x: &Vec3, a: f64, b: f64) -> (f64, f64) {
        const SAMPLES: usize = 48;
        let dist = |s: f64| (x - self.centerline(s)).norm();
        let h = (b - a) / SAMPLES as f64;
        let (mut best_k, mut best) = (0, f64::INFINITY);
        for k in 0..=SAMPLES {
            let d = dist(a + h * k as f64);
            if d < best {
                best = d;
                best_k = k;
            }
        }
        let mut lo = (a + h * best_k as f64 - h).max(a);
        let mut hi = (a + h * best_k as f64 + h).min(b);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = hi - g * (hi - lo);
        let mut d = lo + g * (hi - lo);
        let (mut fc, mut fd) = (dist(c), dist(d));
        for _ in 0..60 {
            if fc < fd {
                hi = d;
                d = c;
                fd = fc;
                c = hi - g * (hi - lo);
                fc = dist(c);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + g * (hi - lo);
                fd = dist(d);
            }
        }
        let s = 0.5 * (lo + hi);
        let d = dist(s);
        if d < best {
            (d, s)
        } else {
            (best, a + h * best_k as f64)
        }
    }

    /// Approximate distance from `x` to the surface of panel `k`.
    pub fn panel_distance(&self, x: &Vec3, k: usize) -> f64 {
        let (a, b) = self.panel(k);
        self.centerline_distance(x, a, b).0 - self.radius
    }

    /// Approximate distance from `x` to the whole surface (negative inside).
    pub fn surface_distance(&self, x: &Vec3) -> f64 {
        (0..self.panel_count())
            .map(|k| self.panel_distance(x, k))
            .fold(f64::INFINITY, f64::min)
    }
}
