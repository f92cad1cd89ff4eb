//! Method registry and the experiment drivers behind the command-line tool:
//! predicted-rate tables and convergence sweeps over the test integrands.

use std::fmt::{self, Write as _};

use rayon::prelude::*;

use crate::aperiodic_complex::{self, ComplexSingularity, JVH_DEFAULT_L};
use crate::aperiodic_real::{self, RealSingularity};
use crate::error::{Error, Result};
use crate::integrands::{make_integrand, IntegrandId, TestIntegrand};
use crate::map::VariableMap;
use crate::periodic::{self, PeriodicSingularity};
use crate::rates::{fit_slope, ConvergencePrediction, ConvergenceRecord, RateKind};
use crate::references::ReferenceStore;
use crate::rules;
use crate::singularity::{Family, SingularityInfo};

/// Every quadrature method, grouped by the singularity family it treats.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Trapezoid,
    PeriodicSplit,
    Jam,
    Bcm,
    Ism,
    ComplexGaussLegendre,
    ComplexSplit,
    Sinh,
    Tee,
    Jvh,
    SinhSinh,
    RealGaussLegendre,
    RealSplit,
    Quadratic,
    Exponential,
    RealElliptic,
}

const PERIODIC_METHODS: [Method; 5] = [
    Method::Trapezoid,
    Method::PeriodicSplit,
    Method::Jam,
    Method::Bcm,
    Method::Ism,
];
const COMPLEX_METHODS: [Method; 6] = [
    Method::ComplexGaussLegendre,
    Method::ComplexSplit,
    Method::Sinh,
    Method::Tee,
    Method::Jvh,
    Method::SinhSinh,
];
const REAL_METHODS: [Method; 5] = [
    Method::RealGaussLegendre,
    Method::RealSplit,
    Method::Quadratic,
    Method::Exponential,
    Method::RealElliptic,
];

impl Method {
    /// Methods of `family` in registry order.
    pub fn of_family(family: Family) -> &'static [Method] {
        match family {
            Family::Periodic => &PERIODIC_METHODS,
            Family::AperiodicComplex => &COMPLEX_METHODS,
            Family::AperiodicReal => &REAL_METHODS,
        }
    }

    pub fn family(self) -> Family {
        use Method::*;
        match self {
            Trapezoid | PeriodicSplit | Jam | Bcm | Ism => Family::Periodic,
            ComplexGaussLegendre | ComplexSplit | Sinh | Tee | Jvh | SinhSinh => Family::AperiodicComplex,
            RealGaussLegendre | RealSplit | Quadratic | Exponential | RealElliptic => Family::AperiodicReal,
        }
    }

    /// Name used on the command line and in CSV output; unique per family.
    pub fn name(self) -> &'static str {
        use Method::*;
        match self {
            Trapezoid => "trapezoid",
            PeriodicSplit | ComplexSplit | RealSplit => "split",
            Jam => "jam",
            Bcm => "bcm",
            Ism => "ism",
            ComplexGaussLegendre | RealGaussLegendre => "gauss-legendre",
            Sinh => "sinh",
            Tee => "tee",
            Jvh => "jvh",
            SinhSinh => "sinhsinh",
            Quadratic => "quadratic",
            Exponential => "exponential",
            RealElliptic => "elliptic",
        }
    }

    /// Whether this is the unaccelerated baseline of its family.
    pub fn is_plain(self) -> bool {
        matches!(
            self,
            Method::Trapezoid | Method::ComplexGaussLegendre | Method::RealGaussLegendre
        )
    }

    pub fn parse(family: Family, name: &str) -> Result<Method> {
        let name = name.trim();
        Method::of_family(family)
            .iter()
            .copied()
            .find(|m| m.name() == name)
            .ok_or_else(|| {
                let known: Vec<_> = Method::of_family(family).iter().map(|m| m.name()).collect();
                Error::Argument(format!(
                    "method `{name}` is not available for the {family} family (expected one of {})",
                    known.join(", ")
                ))
            })
    }

    /// The change of variable this method applies, or `None` for the plain
    /// and split rules.
    pub fn map(self, sing: &SingularityInfo) -> Result<Option<VariableMap>> {
        use Method::*;
        let map = match self {
            Trapezoid | PeriodicSplit | ComplexGaussLegendre | ComplexSplit | RealGaussLegendre | RealSplit => {
                return Ok(None)
            }
            Jam => periodic::jam_map(self.periodic(sing)?)?,
            Bcm => periodic::bcm_map(self.periodic(sing)?)?,
            Ism => periodic::ism_map(self.periodic(sing)?)?,
            Sinh => aperiodic_complex::sinh_map(self.complex(sing)?)?,
            Tee => aperiodic_complex::tee_elliptic_map(self.complex(sing)?)?,
            Jvh => aperiodic_complex::jvh_map(self.complex(sing)?, JVH_DEFAULT_L)?,
            SinhSinh => aperiodic_complex::iterated_sinh_map(self.complex(sing)?)?,
            Quadratic => aperiodic_real::quadratic_map(self.real(sing)?)?,
            Exponential => aperiodic_real::exponential_map(self.real(sing)?)?,
            RealElliptic => aperiodic_real::real_elliptic_map(self.real(sing)?)?,
        };
        Ok(Some(map))
    }

    pub fn prediction(self, sing: &SingularityInfo) -> Result<ConvergencePrediction> {
        use Method::*;
        match self {
            Trapezoid => Ok(periodic::trapezoid_prediction(self.periodic(sing)?)),
            PeriodicSplit => periodic::periodic_split_prediction(self.periodic(sing)?),
            ComplexGaussLegendre => aperiodic_complex::gauss_legendre_prediction(self.complex(sing)?),
            ComplexSplit => aperiodic_complex::split_prediction(self.complex(sing)?),
            RealGaussLegendre => aperiodic_real::gauss_legendre_prediction(self.real(sing)?),
            RealSplit => aperiodic_real::split_prediction(self.real(sing)?),
            _ => Ok(self.map(sing)?.expect("mapped method").prediction()),
        }
    }

    /// The `n`-node approximation of `∫ f` with the method tuned to `sing`.
    pub fn integrate<F: Fn(f64) -> f64>(self, f: F, sing: &SingularityInfo, n: usize) -> Result<f64> {
        use Method::*;
        match self {
            Trapezoid | ComplexGaussLegendre | RealGaussLegendre => {
                self.check_family(sing)?;
                match self {
                    Trapezoid => rules::trapezoid_periodic(n)?.apply(f),
                    _ => rules::gauss_legendre(n)?.apply(f),
                }
            }
            PeriodicSplit => periodic::periodic_split_integrate(f, self.periodic(sing)?, n),
            ComplexSplit => aperiodic_complex::split_integrate(f, self.complex(sing)?, n),
            RealSplit => aperiodic_real::split_integrate(f, self.real(sing)?, n),
            _ => {
                let map = self.map(sing)?.expect("mapped method");
                let rule = match self.family() {
                    Family::Periodic => rules::trapezoid_periodic(n)?,
                    _ => rules::gauss_legendre(n)?,
                };
                rule.apply_mapped(&map, f)
            }
        }
    }

    fn check_family(self, sing: &SingularityInfo) -> Result<()> {
        if sing.family() == self.family() {
            Ok(())
        } else {
            Err(Error::Argument(format!(
                "method `{}` ({} family) cannot treat a {} singularity",
                self.name(),
                self.family(),
                sing.family()
            )))
        }
    }

    fn periodic(self, sing: &SingularityInfo) -> Result<&PeriodicSingularity> {
        self.check_family(sing)?;
        match sing {
            SingularityInfo::Periodic(s) => Ok(s),
            _ => unreachable!("family checked"),
        }
    }

    fn complex(self, sing: &SingularityInfo) -> Result<&ComplexSingularity> {
        self.check_family(sing)?;
        match sing {
            SingularityInfo::Complex(s) => Ok(s),
            _ => unreachable!("family checked"),
        }
    }

    fn real(self, sing: &SingularityInfo) -> Result<&RealSingularity> {
        self.check_family(sing)?;
        match sing {
            SingularityInfo::Real(s) => Ok(s),
            _ => unreachable!("family checked"),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a comma-separated method list; `all` selects the whole family.
pub fn parse_methods(family: Family, list: &str) -> Result<Vec<Method>> {
    if list.trim() == "all" {
        return Ok(Method::of_family(family).to_vec());
    }
    list.split(',').map(|name| Method::parse(family, name)).collect()
}

/// Builds the singularity a rate query refers to. Periodic queries give the
/// height `B` (centred at 0), real queries the position `A` (with a branch
/// cut), complex queries `A` and `B`.
pub fn singularity_for(family: Family, params: &[f64]) -> Result<SingularityInfo> {
    let wrong = || {
        Error::Argument(format!(
            "the {family} family takes {} parameter(s), got {}",
            if family == Family::AperiodicComplex { 2 } else { 1 },
            params.len()
        ))
    };
    Ok(match (family, params) {
        (Family::Periodic, &[b]) => SingularityInfo::Periodic(PeriodicSingularity::centered(b)?),
        (Family::AperiodicComplex, &[a, b]) => SingularityInfo::Complex(ComplexSingularity::new(a, b)?),
        (Family::AperiodicReal, &[a]) => SingularityInfo::Real(RealSingularity::new(a, true)?),
        _ => return Err(wrong()),
    })
}

/// Parses one rate-query parameter: `B`, `A`, or `A:B`. Fractions such as
/// `4/3` are accepted.
pub fn parse_param(text: &str) -> Result<Vec<f64>> {
    text.split(':').map(parse_number).collect()
}

/// A decimal number or a fraction `p/q`.
pub fn parse_number(text: &str) -> Result<f64> {
    let text = text.trim();
    let bad = || Error::Parse(format!("invalid number `{text}`"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p.trim().parse().map_err(|_| bad())?;
            let q: f64 = q.trim().parse().map_err(|_| bad())?;
            Ok(p / q)
        }
        None => text.parse().map_err(|_| bad()),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub method: Method,
    pub param: String,
    pub prediction: ConvergencePrediction,
}

impl RateRow {
    /// ρ for ellipse rates, λ for strip rates, `inf` when entire.
    pub fn predicted_rate(&self) -> f64 {
        self.prediction.value()
    }
}

/// Predicted rates of `methods` for every singularity in `params`.
pub fn rate_table(family: Family, params: &[Vec<f64>], methods: &[Method]) -> Result<Vec<RateRow>> {
    let mut rows = Vec::with_capacity(params.len() * methods.len());
    for p in params {
        let sing = singularity_for(family, p)?;
        let label = p.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(":");
        for &method in methods {
            rows.push(RateRow {
                method,
                param: label.clone(),
                prediction: method.prediction(&sing)?,
            });
        }
    }
    Ok(rows)
}

/// CSV with header `method,param,predicted_rate`.
pub fn rates_csv(rows: &[RateRow]) -> String {
    let mut out = String::from("method,param,predicted_rate\n");
    for r in rows {
        let rate = match r.prediction.kind() {
            RateKind::Entire => "inf".to_string(),
            _ => format!("{:.6}", r.predicted_rate()),
        };
        writeln!(out, "{},{},{}", r.method, r.param, rate).expect("writing to a String cannot fail");
    }
    out
}

/// Default sweep node counts: the multiples of 7 up to 147.
pub fn default_ns() -> Vec<usize> {
    (7..=147).step_by(7).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub family: Family,
    pub ids: Vec<IntegrandId>,
    /// `None` uses each integrand's standard ε values.
    pub epsilons: Option<Vec<f64>>,
    pub methods: Vec<Method>,
    pub ns: Vec<usize>,
}

impl SweepConfig {
    /// All integrands and methods of `family` at the standard ε and `n`.
    pub fn standard(family: Family) -> Self {
        Self {
            family,
            ids: IntegrandId::of_family(family).collect(),
            epsilons: None,
            methods: Method::of_family(family).to_vec(),
            ns: default_ns(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.ns.is_empty() || self.ns[0] == 0 || self.ns.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Argument(format!(
                "n values must be positive and strictly increasing, got {:?}",
                self.ns
            )));
        }
        if let Some(m) = self.methods.iter().find(|m| m.family() != self.family) {
            return Err(Error::Argument(format!(
                "method `{m}` belongs to the {} family, not {}",
                m.family(),
                self.family
            )));
        }
        if let Some(id) = self.ids.iter().find(|id| id.family() != self.family) {
            return Err(Error::Argument(format!(
                "integrand {id} belongs to the {} family, not {}",
                id.family(),
                self.family
            )));
        }
        if let Some(eps) = &self.epsilons {
            if eps.iter().any(|e| !(*e > 0.0 && e.is_finite())) {
                return Err(Error::Argument(format!("epsilon values must be positive, got {eps:?}")));
            }
        }
        Ok(())
    }

    /// `(integrand, ε)` pairs in sweep order.
    pub fn cases(&self) -> Vec<(IntegrandId, f64)> {
        self.ids
            .iter()
            .flat_map(|&id| {
                let eps = match &self.epsilons {
                    Some(list) => list.clone(),
                    None => id.standard_epsilons().to_vec(),
                };
                eps.into_iter().map(move |e| (id, e))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub id: IntegrandId,
    pub epsilon: f64,
    pub method: Method,
    pub n: usize,
    pub rel_error: f64,
    pub predicted_per_node_decay: f64,
    pub abs_error: f64,
}

/// Error rows for one integrand and method over `ns`.
pub fn convergence_rows(ti: &TestIntegrand, reference: f64, method: Method, ns: &[usize]) -> Result<Vec<SweepRow>> {
    let sing = ti.primary_singularity();
    let decay = method.prediction(sing)?.per_node_decay();
    ns.iter()
        .map(|&n| {
            let q = method.integrate(|x| ti.eval(x), sing, n)?;
            let abs_error = (q - reference).abs();
            Ok(SweepRow {
                id: ti.id(),
                epsilon: ti.epsilon(),
                method,
                n,
                rel_error: abs_error / reference.abs(),
                predicted_per_node_decay: decay,
                abs_error,
            })
        })
        .collect()
}

/// Runs the sweep; tasks `(integrand, ε, method)` run in parallel and the
/// rows come back ordered by `(integrand, ε, method, n)` as configured.
pub fn run_sweep(config: &SweepConfig, store: &ReferenceStore) -> Result<Vec<SweepRow>> {
    config.validate()?;
    let mut tasks = Vec::new();
    for (id, eps) in config.cases() {
        let ti = make_integrand(id, eps)?;
        let reference = ti.reference(store)?;
        for &method in &config.methods {
            tasks.push((ti.clone(), reference, method));
        }
    }
    let chunks = tasks
        .par_iter()
        .map(|(ti, reference, method)| convergence_rows(ti, *reference, *method, &config.ns))
        .collect::<Result<Vec<_>>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// CSV with header
/// `id,epsilon,method,n,rel_error,predicted_per_node_decay,abs_error`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("id,epsilon,method,n,rel_error,predicted_per_node_decay,abs_error\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{:.6e},{:.6e},{:.6e}",
            r.id, r.epsilon, r.method, r.n, r.rel_error, r.predicted_per_node_decay, r.abs_error
        )
        .expect("writing to a String cannot fail");
    }
    out
}

pub fn records(rows: &[SweepRow]) -> Vec<ConvergenceRecord> {
    rows.iter()
        .map(|r| ConvergenceRecord {
            method: r.method.name().to_string(),
            n: r.n,
            abs_error: r.abs_error,
            rel_error: r.rel_error,
        })
        .collect()
}

/// Fitted against predicted decay for one `(integrand, ε, method)` series.
#[derive(Debug, Clone, PartialEq)]
pub struct SlopeCheck {
    pub id: IntegrandId,
    pub epsilon: f64,
    pub method: Method,
    /// Fitted `-d ln(error)/dn`.
    pub fitted: f64,
    /// Predicted `-ln(per_node_decay)`.
    pub predicted: f64,
}

impl SlopeCheck {
    pub fn ratio(&self) -> f64 {
        self.fitted / self.predicted
    }
}

/// Groups rows into series and fits each; series with too few pre-plateau
/// points are skipped.
pub fn slope_checks(rows: &[SweepRow]) -> Vec<SlopeCheck> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < rows.len() {
        let head = &rows[start];
        let len = rows[start..]
            .iter()
            .take_while(|r| r.id == head.id && r.epsilon == head.epsilon && r.method == head.method)
            .count();
        let series = &rows[start..start + len];
        if let Ok(fitted) = fit_slope(&records(series)) {
            out.push(SlopeCheck {
                id: head.id,
                epsilon: head.epsilon,
                method: head.method,
                fitted,
                predicted: -head.predicted_per_node_decay.ln(),
            });
        }
        start += len;
    }
    out
}

const ADAPTED_POINTS: usize = 30;

/// Up to 30 `n` values spanning roughly `6/r .. 30/r` nodes for predicted
/// rate `r` per node: the stretch where the error runs from `e^{-6}` to the
/// plateau, so a fit sees the asymptotic slope instead of round-off.
pub fn adapted_ns(prediction: &ConvergencePrediction) -> Vec<usize> {
    let r = prediction.rate_per_node();
    if !r.is_finite() {
        return (4..14).collect();
    }
    let lo = ((6.0 / r).ceil() as usize).max(4);
    let hi = ((30.0 / r).ceil() as usize).max(lo + 9);
    let mut ns: Vec<usize> = (0..ADAPTED_POINTS)
        .map(|k| lo + (hi - lo) * k / (ADAPTED_POINTS - 1))
        .collect();
    ns.dedup();
    ns
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_names_are_unique_per_family() {
        for family in Family::ALL {
            let methods = Method::of_family(family);
            for m in methods {
                assert_eq!(m.family(), family);
                assert_eq!(Method::parse(family, m.name()).unwrap(), *m);
                assert_eq!(methods.iter().filter(|k| k.name() == m.name()).count(), 1);
            }
        }
        assert_eq!(PERIODIC_METHODS.len() + COMPLEX_METHODS.len() + REAL_METHODS.len(), 16);
        assert!(Method::parse(Family::Periodic, "sinh").is_err());
        assert_eq!(
            parse_methods(Family::AperiodicReal, "split,elliptic").unwrap(),
            vec![Method::RealSplit, Method::RealElliptic]
        );
    }

    #[test]
    fn standard_rate_rows() {
        let rows = rate_table(Family::Periodic, &[vec![0.3]], Method::of_family(Family::Periodic)).unwrap();
        let csv = rates_csv(&rows);
        assert!(csv.contains("jam,0.3,1.500"), "{csv}");
        assert!(csv.contains("bcm,0.3,0.813"), "{csv}");
        assert!(csv.contains("ism,0.3,1.456"), "{csv}");
        assert!(csv.contains("trapezoid,0.3,0.300000"), "{csv}");
        let rows = rate_table(Family::AperiodicReal, &[vec![4.0 / 3.0]], &REAL_METHODS).unwrap();
        let got: Vec<String> = rows.iter().map(|r| format!("{:.2}", r.predicted_rate())).collect();
        for want in ["2.22", "4.19", "6.61", "8.38"] {
            assert!(got.iter().any(|g| g == want), "{want} not in {got:?}");
        }
    }

    #[test]
    fn plain_rows_match_point_geometry() {
        let rows = rate_table(
            Family::AperiodicComplex,
            &[vec![0.5, 0.2]],
            &[Method::ComplexGaussLegendre],
        )
        .unwrap();
        let rho = crate::rates::rho_from_point(num_complex::Complex64::new(0.5, 0.2)).unwrap();
        assert!((rows[0].predicted_rate() - rho).abs() < 1e-14);
    }

    #[test]
    fn params_parse() {
        assert_eq!(parse_param("4/3").unwrap(), vec![4.0 / 3.0]);
        assert_eq!(parse_param("0.5:0.25").unwrap(), vec![0.5, 0.25]);
        assert!(parse_param("x").is_err());
        assert!(singularity_for(Family::AperiodicComplex, &[0.5]).is_err());
    }

    #[test]
    fn config_validation() {
        let mut c = SweepConfig::standard(Family::Periodic);
        assert!(c.validate().is_ok());
        assert_eq!(c.cases().len(), 12);
        c.ns = vec![7, 7];
        assert!(c.validate().is_err());
        c.ns = vec![7];
        c.methods = vec![Method::Sinh];
        assert!(c.validate().is_err());
        let mut c = SweepConfig::standard(Family::AperiodicReal);
        c.ids = vec![IntegrandId::F1];
        assert!(c.validate().is_err());
    }

    #[test]
    fn sweep_rows_are_ordered_and_finite() {
        let store = ReferenceStore::embedded().unwrap();
        let config = SweepConfig {
            family: Family::AperiodicComplex,
            ids: vec![IntegrandId::G2, IntegrandId::G1],
            epsilons: Some(vec![1.0 / 30.0]),
            methods: vec![Method::Sinh, Method::ComplexGaussLegendre],
            ns: vec![10, 20, 40],
        };
        let rows = run_sweep(&config, &store).unwrap();
        assert_eq!(rows.len(), 12);
        assert_eq!(
            (rows[0].id, rows[0].method, rows[0].n),
            (IntegrandId::G2, Method::Sinh, 10)
        );
        assert_eq!(
            (rows[11].id, rows[11].method, rows[11].n),
            (IntegrandId::G1, Method::ComplexGaussLegendre, 40)
        );
        assert!(rows.iter().all(|r| r.rel_error >= 0.0 && r.rel_error.is_finite()));
        let sinh40 = rows
            .iter()
            .find(|r| r.id == IntegrandId::G2 && r.method == Method::Sinh && r.n == 40)
            .unwrap();
        assert!(sinh40.rel_error < 1e-10, "{}", sinh40.rel_error);
        assert_eq!(sweep_csv(&rows), sweep_csv(&run_sweep(&config, &store).unwrap()));
    }

    #[test]
    fn missing_reference_names_the_generator() {
        let store = ReferenceStore::parse("").unwrap();
        let mut config = SweepConfig::standard(Family::Periodic);
        config.ns = vec![8];
        let err = run_sweep(&config, &store).unwrap_err().to_string();
        assert!(err.contains("nsquad references"), "{err}");
    }

    #[test]
    fn adapted_grid_spans_the_pre_plateau_range() {
        let ns = adapted_ns(&ConvergencePrediction::strip(0.5));
        assert_eq!(ns.len(), ADAPTED_POINTS);
        assert_eq!(ns[0], 12);
        assert_eq!(*ns.last().unwrap(), 60);
        assert!(ns.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(adapted_ns(&ConvergencePrediction::entire()).len(), 10);
    }

    #[test]
    fn slope_checks_recover_predictions() {
        let store = ReferenceStore::embedded().unwrap();
        let ti = make_integrand(IntegrandId::F1, 0.1).unwrap();
        let reference = ti.reference(&store).unwrap();
        let mut rows = Vec::new();
        for method in [Method::Jam, Method::Bcm] {
            let pred = method.prediction(ti.primary_singularity()).unwrap();
            rows.extend(convergence_rows(&ti, reference, method, &adapted_ns(&pred)).unwrap());
        }
        let checks = slope_checks(&rows);
        assert_eq!(checks.len(), 2);
        for c in &checks {
            assert!((c.ratio() - 1.0).abs() < 0.1, "{c:?}");
        }
    }

    /// Before round-off takes over, the ISM error falls faster than its
    /// asymptotic rate arcsech(a); the asymptotic rate only shows at
    /// errors far below double precision.
    #[test]
    fn ism_is_faster_than_predicted_before_the_plateau() {
        let store = ReferenceStore::embedded().unwrap();
        let ti = make_integrand(IntegrandId::F1, 0.1).unwrap();
        let pred = Method::Ism.prediction(ti.primary_singularity()).unwrap();
        let rows = convergence_rows(&ti, ti.reference(&store).unwrap(), Method::Ism, &adapted_ns(&pred)).unwrap();
        let ratio = slope_checks(&rows)[0].ratio();
        assert!(ratio > 1.3, "{ratio}");
    }
}
