//! Acceptance criteria 1-11, one line each.
//!
//! Run with `cargo test -p phigeo-tests --test acceptance`. The process exits
//! non-zero when any criterion fails.

use std::path::Path;
use std::time::{Duration, Instant};

use clap::Parser;
use phigeo::families::{cd_family, tsallis, CdParams};
use phigeo::geometry::{
    cd_entropy_compare, cd_metrics_closed, entropy_amari, entropy_naudts, fisher_metric, metric_amari,
};
use phigeo::maxent::{
    eta_coords, fit_escort_moments, fit_linear_moments, normalize, psi_forms, varphi_dual, ConfigMatrix,
};
use phigeo::sampling::{random_points, seeded_rng};
use phigeo_cli::commands::figure::{fig2_rows, Metric};
use phigeo_cli::commands::verify::{estimation_families, run_suite, test_config, Check, Suite};
use phigeo_cli::{dispatch, Cli};
use rand::Rng;

const SEED: u64 = 20240917;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self { pass, detail: detail.into() }
    }
}

fn suite(s: Suite, budget: Option<Duration>) -> Outcome {
    let start = Instant::now();
    let checks = run_suite(s, SEED);
    let elapsed = start.elapsed();
    let failed: Vec<&Check> = checks.iter().filter(|c| !c.passed).collect();
    let worst = checks.iter().filter(|c| c.tol > 0.0).map(|c| c.residual / c.tol).fold(0.0f64, |a, b| {
        if b.is_nan() {
            f64::NAN
        } else {
            a.max(b)
        }
    });
    let mut detail = format!("{} checks, worst residual/tol {worst:.2e}, {:.2?}", checks.len(), elapsed);
    let mut pass = failed.is_empty();
    if let Some(first) = failed.first() {
        detail.push_str(&format!(
            "; {} failed, first: {} residual {:e} tol {:e}{}",
            failed.len(),
            first.case,
            first.residual,
            first.tol,
            first.error.as_deref().map(|e| format!(" ({e})")).unwrap_or_default()
        ));
    }
    if let Some(budget) = budget {
        if elapsed > budget {
            pass = false;
            detail.push_str(&format!("; over the {budget:?} budget"));
        }
    }
    Outcome::new(pass, detail)
}

fn criterion_7() -> phigeo::Result<Outcome> {
    let mut worst = 0.0f64;
    for q in [0.5, 0.8, 1.5] {
        let sa = tsallis(q)?;
        let sn = tsallis(2.0 - q)?;
        for p in random_points::<f64>(SEED, 3, 200)? {
            let a = entropy_amari(&sa, &p)?;
            let n = entropy_naudts(&sn, &p)?;
            let h: f64 = p.probs().iter().map(|&x| x.powf(q)).sum();
            let from_h = (1.0 - 1.0 / h) / (1.0 - q);
            let from_n = (1.0 - 1.0 / (q * (1.0 + (1.0 - q) * n))) / (1.0 - q);
            worst = worst.max((a - from_n).abs()).max((a - from_h).abs());
        }
    }
    Ok(Outcome::new(worst < 1e-10, format!("max |S^A_q - F(S^N_(2-q))| = {worst:.2e} over 600 points")))
}

fn criterion_9() -> phigeo::Result<Outcome> {
    let mut entropy = 0.0f64;
    let mut metrics = 0.0f64;
    for (c, d) in [(0.7, 0.4), (0.8, 0.5)] {
        let params = CdParams::new(c, d, None)?;
        for p in random_points::<f64>(SEED, 3, 10)? {
            entropy = entropy.max(cd_entropy_compare(&params, &p)?.aligned_residual);
            let m = cd_metrics_closed(&params, &p)?;
            metrics = metrics.max(m.naudts_residual).max(m.amari_residual);
        }
    }
    let mut conformal = 0.0f64;
    for q in [0.5, 0.7] {
        let d = cd_family(q, 0.0, None)?;
        for p in random_points::<f64>(SEED + 1, 3, 10)? {
            let scaled = metric_amari(&d, &p)?.scale(d.h(&p)?);
            conformal = conformal.max(scaled.rel_diff(&fisher_metric(&p)?.scale(2.0 - q))?);
        }
    }
    let pass = entropy < 1e-7 && metrics < 1e-6 && conformal < 1e-8;
    Ok(Outcome::new(
        pass,
        format!("entropy alignment {entropy:.2e}, closed metrics {metrics:.2e}, (q,0) h*g^A vs (2-q) Fisher {conformal:.2e}"),
    ))
}

fn criterion_10() -> phigeo::Result<Outcome> {
    let mut rng = seeded_rng(SEED);
    let (mut psi, mut legendre, mut lin, mut esc) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let mut fixtures = 0;
    for d in estimation_families()? {
        for (n, m) in [(3, 1), (3, 2), (5, 2)] {
            let e: ConfigMatrix<f64> = test_config(n, m)?;
            for _ in 0..2 {
                let theta: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let fam = normalize(&d, &e, &theta)?;
                psi = psi.max(psi_forms(&fam)?.max_discrepancy());
                let v = varphi_dual(&fam)?;
                legendre = legendre.max(
                    (v.escort_average_value + fam.legendre_potential()
                        - eta_coords(&fam)?.iter().zip(&theta).map(|(a, b)| a * b).sum::<f64>())
                    .abs(),
                );
                let back = fit_linear_moments(&d, &e, &fam.linear_moments())?;
                lin = lin.max(max_diff(back.theta(), &theta));
                let back = fit_escort_moments(&d, &e, &eta_coords(&fam)?)?;
                esc = esc.max(max_diff(back.theta(), &theta));
                fixtures += 1;
            }
        }
    }
    let pass = psi < 1e-9 && legendre < 1e-9 && lin < 1e-6 && esc < 1e-6;
    Ok(Outcome::new(
        pass,
        format!("{fixtures} fixtures: psi forms {psi:.2e}, Legendre {legendre:.2e}, theta recovery linear {lin:.2e} escort {esc:.2e}"),
    ))
}

fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn run_cli(args: &[&str]) -> Result<(), String> {
    let cli = Cli::try_parse_from(std::iter::once("phigeo").chain(args.iter().copied())).map_err(|e| e.to_string())?;
    dispatch(&cli).map_err(|e| e.to_string())
}

fn csv_rows(path: &Path) -> Result<Vec<Vec<String>>, String> {
    let mut r = csv::Reader::from_path(path).map_err(|e| e.to_string())?;
    r.records().map(|rec| rec.map(|r| r.iter().map(String::from).collect()).map_err(|e| e.to_string())).collect()
}

fn criterion_11() -> Result<Outcome, String> {
    let start = Instant::now();
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().to_str().ok_or("temporary path is not UTF-8")?;
    run_cli(&["figure", "--which", "fig1", "--out", out])?;
    run_cli(&["figure", "--which", "fig2", "--out", out])?;
    let elapsed = start.elapsed();
    let mut notes = Vec::new();
    let mut pass = elapsed < Duration::from_secs(120);
    for name in ["fig1_naudts.csv", "fig1_amari.csv", "fig1_crbound.csv"] {
        let rows = csv_rows(&dir.path().join(name))?;
        if rows.len() != 393 {
            pass = false;
            notes.push(format!("{name} has {} rows", rows.len()));
        }
    }
    for name in ["fig2_naudts.csv", "fig2_amari.csv"] {
        let rows = csv_rows(&dir.path().join(name))?;
        let shannon = rows.iter().find(|r| r[0] == "1" && r[1] == "1").map(|r| r[2].clone());
        if shannon.as_deref() != Some("4.5") {
            pass = false;
            notes.push(format!("{name} value at (1,1) is {shannon:?}"));
        }
    }
    notes.push(format!("figures written in {elapsed:.2?}"));
    if pass {
        notes.push("fig1 has 393 rows per file and fig2 is 4.5 at (1,1)".into());
    }

    // approach (1, 0) along c = 1 - eps, d = 0.01
    let cs = [0.8, 0.9, 0.95, 0.975];
    for metric in [Metric::Naudts, Metric::Amari] {
        let values: Vec<f64> = fig2_rows(&cs, &[0.01], metric).iter().map(|r| r[2]).collect();
        let increasing = values.windows(2).all(|w| w[1] > w[0]);
        if !increasing {
            pass = false;
        }
        notes.push(format!(
            "{metric:?} along eps-path {values:.4?} {}",
            if increasing { "increases" } else { "does not increase" }
        ));
    }
    Ok(Outcome::new(pass, notes.join("; ")))
}

fn lib<E: std::fmt::Display>(r: Result<Outcome, E>) -> Outcome {
    r.unwrap_or_else(|e| Outcome::new(false, format!("error: {e}")))
}

type Criterion = Box<dyn Fn() -> Outcome>;

fn main() {
    let criteria: Vec<(&str, Criterion)> = vec![
        ("round-trip exp(log x) = x", Box::new(|| suite(Suite::Roundtrip, Some(Duration::from_secs(5))))),
        ("metrics match divergence Hessians", Box::new(|| suite(Suite::MetricsFd, Some(Duration::from_secs(60))))),
        ("T(g^N) = g^A", Box::new(|| suite(Suite::TOperator, None))),
        ("conformal duality g^N = h_xi g^A_xi", Box::new(|| suite(Suite::Conformal, None))),
        ("Cramer-Rao bound and equality", Box::new(|| suite(Suite::CrBound, Some(Duration::from_secs(30))))),
        ("Fisher information identities", Box::new(|| suite(Suite::Identities, None))),
        ("Tsallis additive duality collapse", Box::new(|| lib(criterion_7()))),
        ("Tsallis-Souza duality", Box::new(|| suite(Suite::TsDuality, None))),
        ("(c,d) closed forms", Box::new(|| lib(criterion_9()))),
        ("MaxEnt potentials and fits", Box::new(|| lib(criterion_10()))),
        ("figure data", Box::new(|| lib(criterion_11()))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status}  {name}: {}", i + 1, outcome.detail);
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
