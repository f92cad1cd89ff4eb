//! High-accuracy reference values for the test integrands.
//!
//! Each value is computed by two independent oracles: a conformally mapped
//! rule refined by doubling `n`, and a composite Gauss-Legendre rule on a
//! mesh graded geometrically toward the singularity. The stored value is
//! their mean; a relative disagreement above 1e-12 is an error.
//!
//! Values are persisted in a flat text file, one record per line:
//! `id epsilon reference_value oracle1 oracle2`.

use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;

use crate::aperiodic_complex::sinh_map;
use crate::aperiodic_real::quadratic_map;
use crate::error::{Error, Result};
use crate::integrands::{make_integrand, IntegrandId, TestIntegrand};
use crate::map::VariableMap;
use crate::periodic::ism_map;
use crate::rules::{self, Domain};
use crate::singularity::SingularityInfo;

/// Largest tolerated relative disagreement between the two oracles.
pub const ORACLE_TOLERANCE: f64 = 1e-12;

const EMBEDDED: &str = include_str!("../data/references.txt");

const GRADED_NODES: usize = 60;
const GRADED_MAX_PIECE: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceRecord {
    pub id: IntegrandId,
    pub epsilon: f64,
    pub value: f64,
    pub oracle1: f64,
    pub oracle2: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceStore {
    records: Vec<ReferenceRecord>,
}

impl ReferenceStore {
    /// The store shipped with the crate.
    pub fn embedded() -> Result<Self> {
        Self::parse(EMBEDDED)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut records = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 5 {
                return Err(Error::Parse(format!(
                    "reference line {}: expected 5 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            }
            let num = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("reference line {}: {e}", lineno + 1)))
            };
            records.push(ReferenceRecord {
                id: fields[0].parse()?,
                epsilon: num(fields[1])?,
                value: num(fields[2])?,
                oracle1: num(fields[3])?,
                oracle2: num(fields[4])?,
            });
        }
        Ok(Self { records })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::from("# id epsilon reference_value oracle1 oracle2\n");
        for r in &self.records {
            writeln!(
                out,
                "{} {:.16e} {:.16e} {:.16e} {:.16e}",
                r.id, r.epsilon, r.value, r.oracle1, r.oracle2
            )
            .expect("writing to a String cannot fail");
        }
        out
    }

    pub fn records(&self) -> &[ReferenceRecord] {
        &self.records
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, id: IntegrandId, epsilon: f64) -> Option<&ReferenceRecord> {
        self.records
            .iter()
            .find(|r| r.id == id && (r.epsilon - epsilon).abs() <= 1e-13 * epsilon)
    }

    /// The reference value, or [`Error::MissingReference`].
    pub fn lookup(&self, id: IntegrandId, epsilon: f64) -> Result<f64> {
        self.get(id, epsilon)
            .map(|r| r.value)
            .ok_or_else(|| Error::MissingReference {
                id: id.to_string(),
                epsilon,
            })
    }

    /// Adds or replaces the record for `(id, epsilon)`.
    pub fn insert(&mut self, record: ReferenceRecord) {
        self.records
            .retain(|r| !(r.id == record.id && r.epsilon == record.epsilon));
        self.records.push(record);
        self.records.sort_by(|a, b| {
            (a.id, a.epsilon)
                .partial_cmp(&(b.id, b.epsilon))
                .expect("finite epsilon")
        });
    }
}

impl TestIntegrand {
    /// Reference value from `store`.
    pub fn reference(&self, store: &ReferenceStore) -> Result<f64> {
        store.lookup(self.id(), self.epsilon())
    }
}

/// Runs both oracles and returns their mean, or
/// [`Error::ReferenceDisagreement`].
pub fn compute_reference(ti: &TestIntegrand) -> Result<ReferenceRecord> {
    let oracle1 = mapped_oracle(ti)?;
    let oracle2 = graded_oracle(ti)?;
    if (oracle1 - oracle2).abs() > ORACLE_TOLERANCE * oracle1.abs().max(oracle2.abs()) {
        return Err(Error::ReferenceDisagreement {
            id: ti.id().to_string(),
            epsilon: ti.epsilon(),
            oracle1,
            oracle2,
        });
    }
    Ok(ReferenceRecord {
        id: ti.id(),
        epsilon: ti.epsilon(),
        value: 0.5 * (oracle1 + oracle2),
        oracle1,
        oracle2,
    })
}

/// References for every standard `(id, ε)` pair, computed in parallel.
pub fn generate_standard_store() -> Result<ReferenceStore> {
    let pairs: Vec<(IntegrandId, f64)> = IntegrandId::ALL
        .iter()
        .flat_map(|&id| id.standard_epsilons().map(|e| (id, e)))
        .collect();
    let records: Result<Vec<ReferenceRecord>> = pairs
        .par_iter()
        .map(|&(id, e)| compute_reference(&make_integrand(id, e)?))
        .collect();
    let mut store = ReferenceStore::default();
    for r in records? {
        store.insert(r);
    }
    Ok(store)
}

fn oracle_map(ti: &TestIntegrand) -> Result<(VariableMap, usize, usize)> {
    Ok(match ti.primary_singularity() {
        SingularityInfo::Periodic(s) => (ism_map(s)?, 400, 12_800),
        SingularityInfo::Complex(s) => (sinh_map(s)?, 100, 3200),
        SingularityInfo::Real(s) => (quadratic_map(s)?, 100, 3200),
    })
}

/// Oracle 1: the mapped rule with `n` doubled until successive values agree.
pub fn mapped_oracle(ti: &TestIntegrand) -> Result<f64> {
    let (map, mut n, n_max) = oracle_map(ti)?;
    let rule_at = |n: usize| match ti.domain() {
        Domain::Period => rules::trapezoid_periodic(n),
        Domain::Interval => rules::gauss_legendre(n),
    };
    let mut prev = rule_at(n)?.apply_mapped(&map, |x| ti.eval(x))?;
    while n < n_max {
        n *= 2;
        let next = rule_at(n)?.apply_mapped(&map, |x| ti.eval(x))?;
        if (next - prev).abs() <= 2e-15 * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    log::warn!("mapped oracle for {} at {} stopped at n = {n}", ti.id(), ti.epsilon());
    Ok(prev)
}

/// Breakpoints on `[lo, hi]` graded toward the real point `center` where a
/// singularity sits at distance `width`: each piece is no longer than its
/// distance to the singularity (ratio 2 growth) nor than `max_piece`.
pub fn graded_breakpoints(lo: f64, hi: f64, center: f64, width: f64, max_piece: f64) -> Vec<f64> {
    let mut points = vec![lo, hi];
    let step = |x: f64| max_piece.min((x - center).hypot(width));
    let mut x = center;
    while x < hi {
        if x > lo {
            points.push(x);
        }
        x += step(x);
    }
    let mut x = center;
    while x > lo {
        if x < hi {
            points.push(x);
        }
        x -= step(x);
    }
    points.sort_by(|a, b| a.partial_cmp(b).expect("finite breakpoints"));
    points.dedup_by(|a, b| (*a - *b).abs() < 1e-15);
    points
}

/// Oracle 2: composite Gauss-Legendre on a mesh graded toward the
/// singularity's real part.
pub fn graded_oracle(ti: &TestIntegrand) -> Result<f64> {
    let (lo, hi) = ti.domain().bounds();
    let (center, width) = match ti.primary_singularity() {
        SingularityInfo::Periodic(s) => (s.center(), s.height()),
        SingularityInfo::Complex(s) => (s.re(), s.im()),
        SingularityInfo::Real(s) => (s.position(), (s.position().abs() - 1.0)),
    };
    let breaks = graded_breakpoints(lo, hi, center, width, GRADED_MAX_PIECE);
    let rule = rules::gauss_legendre(GRADED_NODES)?;
    let mut sum = 0.0;
    for w in breaks.windows(2) {
        sum += rule.apply_on(w[0], w[1], |x| ti.eval(x))?;
    }
    Ok(sum)
}
