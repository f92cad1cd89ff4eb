//! The twelve test integrands `f1..f4` (periodic), `g1..g4` (complex pair)
//! and `h1..h4` (real singularity), with their singularity registries.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use crate::aperiodic_complex::ComplexSingularity;
use crate::aperiodic_real::RealSingularity;
use crate::error::{Error, Result};
use crate::periodic::PeriodicSingularity;
use crate::rules::Domain;
use crate::singularity::{Family, SingularityInfo};

pub const F_EPSILONS: [f64; 3] = [1e-1, 1e-2, 1e-3];
pub const GH_EPSILONS: [f64; 3] = [1.0 / 30.0, 1.0 / 300.0, 1.0 / 3000.0];

const G_CENTER: f64 = 2.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IntegrandId {
    F1,
    F2,
    F3,
    F4,
    G1,
    G2,
    G3,
    G4,
    H1,
    H2,
    H3,
    H4,
}

impl IntegrandId {
    pub const ALL: [IntegrandId; 12] = [
        IntegrandId::F1,
        IntegrandId::F2,
        IntegrandId::F3,
        IntegrandId::F4,
        IntegrandId::G1,
        IntegrandId::G2,
        IntegrandId::G3,
        IntegrandId::G4,
        IntegrandId::H1,
        IntegrandId::H2,
        IntegrandId::H3,
        IntegrandId::H4,
    ];

    pub fn as_str(self) -> &'static str {
        use IntegrandId::*;
        match self {
            F1 => "f1",
            F2 => "f2",
            F3 => "f3",
            F4 => "f4",
            G1 => "g1",
            G2 => "g2",
            G3 => "g3",
            G4 => "g4",
            H1 => "h1",
            H2 => "h2",
            H3 => "h3",
            H4 => "h4",
        }
    }

    pub fn family(self) -> Family {
        use IntegrandId::*;
        match self {
            F1 | F2 | F3 | F4 => Family::Periodic,
            G1 | G2 | G3 | G4 => Family::AperiodicComplex,
            H1 | H2 | H3 | H4 => Family::AperiodicReal,
        }
    }

    /// The standard ε values for this id.
    pub fn standard_epsilons(self) -> [f64; 3] {
        match self.family() {
            Family::Periodic => F_EPSILONS,
            _ => GH_EPSILONS,
        }
    }

    pub fn of_family(family: Family) -> impl Iterator<Item = IntegrandId> {
        Self::ALL.into_iter().filter(move |id| id.family() == family)
    }
}

impl fmt::Display for IntegrandId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IntegrandId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::UnknownIntegrand(s.to_string()))
    }
}

/// A test integrand at a fixed ε.
#[derive(Debug, Clone, PartialEq)]
pub struct TestIntegrand {
    id: IntegrandId,
    epsilon: f64,
    primary: SingularityInfo,
    extra: Vec<SingularityInfo>,
}

/// Builds integrand `id` with parameter `epsilon > 0`.
pub fn make_integrand(id: IntegrandId, epsilon: f64) -> Result<TestIntegrand> {
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::Argument(format!("epsilon must be positive, got {epsilon}")));
    }
    let primary = match id.family() {
        Family::Periodic => SingularityInfo::Periodic(PeriodicSingularity::centered(epsilon)?),
        Family::AperiodicComplex => SingularityInfo::Complex(ComplexSingularity::new(G_CENTER, epsilon)?),
        Family::AperiodicReal => SingularityInfo::Real(RealSingularity::new(1.0 + epsilon, true)?),
    };
    let extra = match id {
        IntegrandId::F4 => vec![SingularityInfo::Periodic(PeriodicSingularity::new(1.0, PI)?)],
        IntegrandId::G4 | IntegrandId::H4 => {
            vec![SingularityInfo::Complex(ComplexSingularity::new(-G_CENTER, 1.0)?)]
        }
        _ => Vec::new(),
    };
    Ok(TestIntegrand {
        id,
        epsilon,
        primary,
        extra,
    })
}

/// `cosh a − cos b = 2 sinh²(a/2) + 2 sin²(b/2)`, free of cancellation
/// when both arguments are small.
fn cosh_minus_cos(a: f64, b: f64) -> f64 {
    2.0 * (0.5 * a).sinh().powi(2) + 2.0 * (0.5 * b).sin().powi(2)
}

impl TestIntegrand {
    pub fn id(&self) -> IntegrandId {
        self.id
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn family(&self) -> Family {
        self.id.family()
    }

    pub fn domain(&self) -> Domain {
        match self.family() {
            Family::Periodic => Domain::Period,
            _ => Domain::Interval,
        }
    }

    pub fn primary_singularity(&self) -> &SingularityInfo {
        &self.primary
    }

    pub fn extra_singularities(&self) -> &[SingularityInfo] {
        &self.extra
    }

    /// The distance-like quantity whose root/log gives the singularity.
    fn base(&self, x: f64) -> f64 {
        let e = self.epsilon;
        match self.family() {
            Family::Periodic => cosh_minus_cos(e, x),
            Family::AperiodicComplex => cosh_minus_cos(x - G_CENTER, e),
            Family::AperiodicReal => (1.0 - x) + e,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        use IntegrandId::*;
        let d = self.base(x);
        match self.id {
            F1 => d.ln() + d.powf(0.3),
            G1 | H1 => -d.ln() + d.powf(0.3),
            F2 | G2 | H2 => 1.0 / d.sqrt(),
            F3 => (6.0 * x).cos().powi(2) / d.sqrt(),
            G3 | H3 => (6.0 * PI * x).cos().powi(2) / d.sqrt(),
            F4 => (1f64.cosh() + x.cos()).sqrt() / d.sqrt(),
            G4 | H4 => cosh_minus_cos(x + G_CENTER, 1.0).sqrt() / d.sqrt(),
        }
    }

    /// Closed-form integral where one is known (`h2` only).
    pub fn closed_form(&self) -> Option<f64> {
        match self.id {
            IntegrandId::H2 => {
                let e = self.epsilon;
                Some(2.0 * ((2.0 + e).sqrt() - e.sqrt()))
            }
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ti(id: IntegrandId, e: f64) -> TestIntegrand {
        make_integrand(id, e).unwrap()
    }

    #[test]
    fn substitution_examples() {
        for e in [0.1f64, 1e-3] {
            let want = 1.0 / (e.cosh() - 1.0).sqrt();
            assert!((ti(IntegrandId::F2, e).eval(0.0) / want - 1.0).abs() < 1e-9);
            let want = 1.0 / (1.0 - e.cos()).sqrt();
            assert!((ti(IntegrandId::G2, e).eval(2.0 / 3.0) / want - 1.0).abs() < 1e-9);
            assert!((ti(IntegrandId::H2, e).eval(1.0) - 1.0 / e.sqrt()).abs() < 1e-12 / e.sqrt());
        }
    }

    #[test]
    fn matches_display_formulas_at_moderate_arguments() {
        let e: f64 = 0.1;
        for x in [-2.5f64, -0.7, 0.4, 1.9] {
            let d = e.cosh() - x.cos();
            let direct = [
                d.ln() + d.powf(0.3),
                1.0 / d.sqrt(),
                (6.0 * x).cos().powi(2) / d.sqrt(),
                (1f64.cosh() + x.cos()).sqrt() / d.sqrt(),
            ];
            for (id, want) in [IntegrandId::F1, IntegrandId::F2, IntegrandId::F3, IntegrandId::F4]
                .into_iter()
                .zip(direct)
            {
                let got = ti(id, e).eval(x);
                assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{id} x={x}");
            }
        }
        for x in [-0.9f64, 0.1, 0.95] {
            let dg = (x - 2.0 / 3.0).cosh() - e.cos();
            let dh = 1.0 + e - x;
            let g4 = ((x + 2.0 / 3.0).cosh() - 1f64.cos()).sqrt();
            let cases = [
                (IntegrandId::G1, -dg.ln() + dg.powf(0.3)),
                (IntegrandId::G3, (6.0 * PI * x).cos().powi(2) / dg.sqrt()),
                (IntegrandId::G4, g4 / dg.sqrt()),
                (IntegrandId::H1, -dh.ln() + dh.powf(0.3)),
                (IntegrandId::H3, (6.0 * PI * x).cos().powi(2) / dh.sqrt()),
                (IntegrandId::H4, g4 / dh.sqrt()),
            ];
            for (id, want) in cases {
                let got = ti(id, e).eval(x);
                assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{id} x={x}");
            }
        }
    }

    #[test]
    fn registries() {
        let f4 = ti(IntegrandId::F4, 0.01);
        assert_eq!(f4.extra_singularities().len(), 1);
        let p = f4.extra_singularities()[0].point();
        assert!((p.re.abs() - PI).abs() < 1e-15 && p.im == 1.0);
        let g = ti(IntegrandId::G2, 1.0 / 30.0);
        assert_eq!(g.primary_singularity().point().re, 2.0 / 3.0);
        assert!(ti(IntegrandId::G1, 0.1).extra_singularities().is_empty());
        let h4 = ti(IntegrandId::H4, 0.1);
        assert_eq!(h4.extra_singularities()[0].point().re, -2.0 / 3.0);
        assert_eq!(h4.primary_singularity().point().re, 1.1);
    }

    #[test]
    fn parse_ids() {
        assert_eq!("g3".parse::<IntegrandId>().unwrap(), IntegrandId::G3);
        assert!(matches!("q9".parse::<IntegrandId>(), Err(Error::UnknownIntegrand(_))));
        assert!(make_integrand(IntegrandId::F1, 0.0).is_err());
    }

    #[test]
    fn finite_on_open_domain() {
        for id in IntegrandId::ALL {
            for e in id.standard_epsilons() {
                let t = ti(id, e);
                let (lo, hi) = t.domain().bounds();
                for j in 0..=2000 {
                    let x = lo + (hi - lo) * j as f64 / 2000.0;
                    assert!(t.eval(x).is_finite(), "{id} eps={e} x={x}");
                }
            }
        }
    }

    #[test]
    fn symmetric_integrands_are_even() {
        for id in [IntegrandId::F1, IntegrandId::F2, IntegrandId::F3, IntegrandId::F4] {
            let t = ti(id, 0.01);
            for x in [0.3, 1.7, 3.0] {
                assert_eq!(t.eval(x), t.eval(-x));
            }
        }
    }
}
