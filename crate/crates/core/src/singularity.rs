use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::aperiodic_complex::ComplexSingularity;
use crate::aperiodic_real::RealSingularity;
use crate::error::{Error, Result};
use crate::periodic::PeriodicSingularity;

/// Problem class, which fixes the integration domain and the method set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// 2π-periodic on `[-π, π]`.
    Periodic,
    /// `[-1, 1]` with a conjugate pair off the real axis.
    AperiodicComplex,
    /// `[-1, 1]` with a real singularity outside the interval.
    AperiodicReal,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Periodic, Family::AperiodicComplex, Family::AperiodicReal];

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Periodic => "periodic",
            Family::AperiodicComplex => "complex",
            Family::AperiodicReal => "real",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(Family::Periodic),
            "complex" | "aperiodic-complex" | "aperiodic_complex" => Ok(Family::AperiodicComplex),
            "real" | "aperiodic-real" | "aperiodic_real" => Ok(Family::AperiodicReal),
            other => Err(Error::Argument(format!(
                "unknown family `{other}` (expected periodic, complex or real)"
            ))),
        }
    }
}

/// Location of the nearest non-analyticity of an integrand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SingularityInfo {
    Periodic(PeriodicSingularity),
    Complex(ComplexSingularity),
    Real(RealSingularity),
}

impl SingularityInfo {
    pub fn family(&self) -> Family {
        match self {
            SingularityInfo::Periodic(_) => Family::Periodic,
            SingularityInfo::Complex(_) => Family::AperiodicComplex,
            SingularityInfo::Real(_) => Family::AperiodicReal,
        }
    }

    /// The singular point in the upper half plane (or on the real axis).
    pub fn point(&self) -> Complex64 {
        match self {
            SingularityInfo::Periodic(s) => Complex64::new(s.center(), s.height()),
            SingularityInfo::Complex(s) => s.point(),
            SingularityInfo::Real(s) => Complex64::new(s.position(), 0.0),
        }
    }
}
