//! Acceptance criteria, one `PASS`/`FAIL` line each.
//!
//! Runs without the libtest harness so the lines are always printed. The
//! process fails on any unexpected failure.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use nsquad_core::experiments::{adapted_ns, convergence_rows, slope_checks, Method};
use nsquad_core::integrands::{F_EPSILONS, GH_EPSILONS};
use nsquad_core::rates::fit_slope;
use nsquad_core::selftest::{all_map_invariants, matches_displayed};
use nsquad_core::special::{jacobi_am, jacobi_sn_cn_dn, EllipticParameter};
use nsquad_core::stokes::geometry::DEFAULT_TUBE_RADIUS;
use nsquad_core::stokes::{error_grid, FiberSurface, RuleBuilder, Strategy};
use nsquad_core::{
    make_integrand, periodic, rules, ConvergenceRecord, Family, IntegrandId, ReferenceStore, SingularityInfo,
};

type Outcome = Result<String, String>;

/// Slope series that converge faster or slower than their asymptotic
/// prediction over the pre-plateau range; see the README.
const KNOWN_SLOPE_DEVIATIONS: [(&str, &str); 4] =
    [("f1", "ism"), ("g1", "sinhsinh"), ("g1", "jvh"), ("h1", "exponential")];

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    outcome: Outcome,
    /// Failure that is documented and tolerated.
    expected_failure: bool,
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("rate tables", || plain(criterion_1())),
        ("slope fidelity", criterion_2),
        ("ism headline", || plain(criterion_3())),
        ("split crossover", || plain(criterion_4())),
        ("oracle equivalence", || plain(criterion_5())),
        ("bcm parity", || plain(criterion_6())),
        ("stokes zero velocity", || plain(criterion_7())),
        ("determinism", || plain(criterion_8())),
    ];
    let mut unexpected = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = check();
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &v.outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(d) if v.expected_failure => ("FAIL (known)", d.clone()),
            Err(d) => ("FAIL", d.clone()),
        };
        println!("criterion {} [{name}]: {tag} ({secs:.1} s) {detail}", k + 1);
        if v.outcome.is_err() && !v.expected_failure {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}

fn plain(outcome: Outcome) -> Verdict {
    Verdict {
        outcome,
        expected_failure: false,
    }
}

fn store() -> ReferenceStore {
    ReferenceStore::embedded().expect("embedded reference store parses")
}

fn criterion_1() -> Outcome {
    let mut mismatches = Vec::new();
    let mut check = |family: Family, param: f64, method: Method, shown: &str| {
        let sing = nsquad_core::experiments::singularity_for(family, &[param]).expect("valid singularity");
        let v = method.prediction(&sing).expect("prediction").value();
        if !matches_displayed(v, shown) {
            mismatches.push(format!("{method} {v:.4} vs {shown}"));
        }
    };
    check(Family::Periodic, 0.3, Method::Jam, "1.5");
    check(Family::Periodic, 0.3, Method::Bcm, "0.81");
    check(Family::Periodic, 0.3, Method::Ism, "1.46");
    check(Family::AperiodicReal, 4.0 / 3.0, Method::RealGaussLegendre, "2.21");
    check(Family::AperiodicReal, 4.0 / 3.0, Method::Quadratic, "4.19");
    check(Family::AperiodicReal, 4.0 / 3.0, Method::Exponential, "6.61");
    check(Family::AperiodicReal, 4.0 / 3.0, Method::RealElliptic, "8.38");
    if mismatches.is_empty() {
        Ok("7 rates within one unit of the displayed digit".into())
    } else {
        Err(mismatches.join(", "))
    }
}

fn criterion_2() -> Verdict {
    let store = store();
    let mut cases = Vec::new();
    for eps in F_EPSILONS {
        cases.push((IntegrandId::F1, eps));
    }
    for id in [IntegrandId::G1, IntegrandId::H1] {
        for eps in &GH_EPSILONS[..2] {
            cases.push((id, *eps));
        }
    }
    let mut rows = Vec::new();
    for (id, eps) in cases {
        let ti = make_integrand(id, eps).expect("standard integrand");
        let reference = ti.reference(&store).expect("standard reference");
        for &method in Method::of_family(id.family()) {
            let pred = method.prediction(ti.primary_singularity()).expect("prediction");
            rows.extend(convergence_rows(&ti, reference, method, &adapted_ns(&pred)).expect("sweep"));
        }
    }
    let checks = slope_checks(&rows);
    let series: BTreeSet<_> = rows
        .iter()
        .map(|r| (r.id.as_str(), r.epsilon.to_bits(), r.method.name()))
        .collect();
    let mut failing = Vec::new();
    let mut unexplained = Vec::new();
    for c in &checks {
        if (c.ratio() - 1.0).abs() > 0.2 {
            let label = format!("{} ε={} {} ratio {:.2}", c.id, c.epsilon, c.method, c.ratio());
            if !KNOWN_SLOPE_DEVIATIONS.contains(&(c.id.as_str(), c.method.name())) {
                unexplained.push(label.clone());
            }
            failing.push(label);
        }
    }
    if checks.len() != series.len() {
        unexplained.push(format!(
            "only {} of {} series could be fitted",
            checks.len(),
            series.len()
        ));
    }
    let summary = format!(
        "{} series fitted, {} within 20%",
        checks.len(),
        checks.len() - failing.len()
    );
    let outcome = if failing.is_empty() && unexplained.is_empty() {
        Ok(summary)
    } else {
        let mut detail = format!("{summary}; outside: {}", failing.join("; "));
        if !unexplained.is_empty() {
            detail.push_str(&format!("; UNEXPECTED: {}", unexplained.join("; ")));
        }
        Err(detail)
    };
    Verdict {
        outcome,
        expected_failure: unexplained.is_empty(),
    }
}

fn criterion_3() -> Outcome {
    let store = store();
    let mut firsts = Vec::new();
    for eps in F_EPSILONS {
        let ti = make_integrand(IntegrandId::F1, eps).map_err(|e| e.to_string())?;
        let reference = ti.reference(&store).map_err(|e| e.to_string())?;
        let SingularityInfo::Periodic(sing) = ti.primary_singularity() else {
            return Err("f1 is periodic".into());
        };
        let map = periodic::ism_map(sing).map_err(|e| e.to_string())?;
        let first = (4..=60).find(|&n| {
            let q = rules::trapezoid_periodic(n)
                .unwrap()
                .apply_mapped(&map, |x| ti.eval(x))
                .unwrap();
            ((q - reference) / reference).abs() < 1e-13
        });
        match first {
            Some(n) => firsts.push(format!("ε={eps}: n={n}")),
            None => return Err(format!("ε={eps}: not below 1e-13 by n = 60")),
        }
    }
    Ok(firsts.join(", "))
}

fn criterion_4() -> Outcome {
    let b = periodic::split_crossover_height().map_err(|e| e.to_string())?;
    let detail = format!("B = {b:.5}");
    if (b - 0.95).abs() <= 0.02 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_5() -> Outcome {
    let maps = all_map_invariants(periodic::ism_parameter)?;
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..5000 {
        let u: f64 = rng.gen_range(-20.0..20.0);
        let m: f64 = rng.gen_range(0.0..1.0);
        let p = EllipticParameter::new(m).map_err(|e| e.to_string())?;
        let (sn, cn, dn) = jacobi_sn_cn_dn(u, p);
        let am = jacobi_am(u, p);
        for r in [
            sn * sn + cn * cn - 1.0,
            dn * dn + m * sn * sn - 1.0,
            am.sin() - sn,
            am.cos() - cn,
        ] {
            worst = worst.max(r.abs());
        }
    }
    if worst > 1e-12 {
        return Err(format!("elliptic identity residual {worst:.2e}"));
    }
    Ok(format!(
        "{maps} pass; elliptic identities over 5000 random inputs, worst {worst:.1e}"
    ))
}

fn criterion_6() -> Outcome {
    let ti = make_integrand(IntegrandId::F2, 0.1).map_err(|e| e.to_string())?;
    let reference = ti.reference(&store()).map_err(|e| e.to_string())?;
    let ns: Vec<usize> = (5..=80).collect();
    let rows = convergence_rows(&ti, reference, Method::Bcm, &ns).map_err(|e| e.to_string())?;
    let fit = |parity: usize| {
        let recs: Vec<ConvergenceRecord> = rows
            .iter()
            .filter(|r| r.n % 2 == parity)
            .map(|r| ConvergenceRecord {
                method: "bcm".into(),
                n: r.n,
                abs_error: r.abs_error,
                rel_error: r.rel_error,
            })
            .collect();
        fit_slope(&recs).map_err(|e| e.to_string())
    };
    let (odd, even) = (fit(1)?, fit(0)?);
    let ratio = odd / even;
    let detail = format!("odd {odd:.4}, even {even:.4}, ratio {ratio:.3}");
    if (ratio / 2.0 - 1.0).abs() <= 0.3 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_7() -> Outcome {
    let surface = Arc::new(FiberSurface::torus_fiber(DEFAULT_TUBE_RADIUS).map_err(|e| e.to_string())?);
    let builder = RuleBuilder::new(surface, 32).map_err(|e| e.to_string())?;
    let reference = error_grid(&builder, 40, Strategy::Reference).map_err(|e| e.to_string())?;
    let conformal = error_grid(&builder, 40, Strategy::Conformal).map_err(|e| e.to_string())?;
    let far_cut = 7.0 * DEFAULT_TUBE_RADIUS;
    let near = |c: &nsquad_core::stokes::GridCell| c.surface_distance <= far_cut;
    let (Some(ref_near), Some(conf_near)) = (reference.max_log10_where(near), conformal.max_log10_where(near)) else {
        return Err("no unmasked near-surface cells".into());
    };
    let mut far_diff = 0.0f64;
    let mut far_cells = 0;
    for (a, b) in reference.cells.iter().zip(&conformal.cells) {
        if !a.masked && a.surface_distance > far_cut {
            far_diff = far_diff.max((10f64.powf(a.log10_error) - 10f64.powf(b.log10_error)).abs());
            far_cells += 1;
        }
    }
    let detail = format!(
        "near max log10|u|: reference {ref_near:.2}, conformal {conf_near:.2}; \
         {far_cells} far cells differ by at most {far_diff:.1e}"
    );
    if ref_near - conf_near >= 6.0 && far_diff <= 1e-12 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_8() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let runs: [&[&str]; 3] = [
        &["rates", "--family", "complex", "--param", "2/3:1/3,0:0.05"],
        &["sweep", "--id", "f1,f2", "--epsilon", "0.1", "--n", "7,14,21,28"],
        &[
            "stokes-grid",
            "--n",
            "16",
            "--resolution",
            "10",
            "--strategy",
            "conformal",
        ],
    ];
    for args in runs {
        let a = run_cli(args, &dir.path().join("a.csv"))?;
        let b = run_cli(args, &dir.path().join("b.csv"))?;
        if a != b {
            return Err(format!("`nsquad {}` output differs between runs", args.join(" ")));
        }
    }
    Ok("rates, sweep and stokes-grid CSVs byte-identical across runs".into())
}

fn run_cli(args: &[&str], out: &Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_nsquad"))
        .args(args)
        .arg("--out")
        .arg(out)
        .status()
        .map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("`nsquad {}` exited with {status}", args.join(" ")));
    }
    std::fs::read(out).map_err(|e| e.to_string())
}
