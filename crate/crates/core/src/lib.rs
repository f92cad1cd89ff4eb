//! Quadrature for nearly singular integrals by domain decomposition and
//! conformal variable transformations.

pub mod aperiodic_complex;
pub mod aperiodic_real;
pub mod error;
pub mod experiments;
pub mod integrands;
mod map;
pub mod periodic;
pub mod rates;
pub mod references;
pub mod rules;
pub mod selftest;
pub mod singularity;
pub mod special;
pub mod stokes;

pub use error::{Error, Result};
pub use integrands::{make_integrand, IntegrandId, TestIntegrand};
pub use map::VariableMap;
pub use rates::{ConvergencePrediction, ConvergenceRecord, RateKind};
pub use references::{ReferenceRecord, ReferenceStore};
pub use rules::{Domain, QuadRule, RuleKind};
pub use singularity::{Family, SingularityInfo};
