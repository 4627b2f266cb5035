use clap::{Args, ValueEnum};
use phigeo::deform::ts_dual;
use phigeo::estimation::{amari_identity_check, cr_report, naudts_identity_check, Estimator};
use phigeo::families::{builtin_families, cd_family, identity, stretched, tsallis};
use phigeo::geometry::{
    conformal_check, divergence_amari, divergence_naudts, entropy_from_phi_nu, metric_amari, metric_fd_oracle,
    metric_naudts, t_operator, ts_metric_transform,
};
use phigeo::maxent::{normalize, ConfigMatrix, PhiExpFamily};
use phigeo::sampling::{random_interior, random_points, seeded_rng};
use phigeo::{Deformation, ProbVec};
use rand::Rng;

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Roundtrip,
    MetricsFd,
    Conformal,
    TOperator,
    TsDuality,
    CrBound,
    Identities,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] = [
        Suite::Roundtrip,
        Suite::MetricsFd,
        Suite::Conformal,
        Suite::TOperator,
        Suite::TsDuality,
        Suite::CrBound,
        Suite::Identities,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Suite::Roundtrip => "roundtrip",
            Suite::MetricsFd => "metrics-fd",
            Suite::Conformal => "conformal",
            Suite::TOperator => "t-operator",
            Suite::TsDuality => "ts-duality",
            Suite::CrBound => "cr-bound",
            Suite::Identities => "identities",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// One residual compared against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub case: String,
    pub residual: f64,
    pub tol: f64,
    pub passed: bool,
    pub error: Option<String>,
}

impl Check {
    pub fn new(suite: &'static str, case: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self { suite, case: case.into(), residual, tol, passed: residual <= tol, error: None }
    }

    fn from_result(suite: &'static str, case: impl Into<String>, r: phigeo::Result<f64>, tol: f64) -> Self {
        match r {
            Ok(v) => Self::new(suite, case, v, tol),
            Err(e) => {
                Self { suite, case: case.into(), residual: f64::NAN, tol, passed: false, error: Some(e.to_string()) }
            }
        }
    }
}

pub fn run(args: &VerifyArgs) -> CliResult<()> {
    let checks = run_suite(args.suite, args.seed);
    print_table(&checks);
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::Verification { failed, total: checks.len() });
    }
    Ok(())
}

pub fn print_table(checks: &[Check]) {
    let width = checks.iter().map(|c| c.case.len()).max().unwrap_or(4).max(4);
    println!("{:<11} {:<width$} {:>12} {:>9}  status", "suite", "case", "residual", "tol");
    for c in checks {
        let status = if c.passed { "ok" } else { "FAIL" };
        print!("{:<11} {:<width$} {:>12.3e} {:>9.0e}  {status}", c.suite, c.case, c.residual, c.tol);
        match &c.error {
            Some(e) => println!("  ({e})"),
            None => println!(),
        }
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<Check> {
    match suite {
        Suite::Roundtrip => roundtrip(),
        Suite::MetricsFd => metrics_fd(seed),
        Suite::Conformal => conformal(seed),
        Suite::TOperator => t_operator_suite(seed),
        Suite::TsDuality => ts_duality(seed),
        Suite::CrBound => cr_bound(seed),
        Suite::Identities => identities(seed),
        Suite::All => Suite::EACH.iter().flat_map(|&s| run_suite(s, seed)).collect(),
    }
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo * (hi / lo).powf(k as f64 / (n - 1) as f64)).collect()
}

fn max_rel(pairs: impl Iterator<Item = phigeo::Result<(f64, f64)>>) -> phigeo::Result<f64> {
    let mut worst = 0.0f64;
    for pair in pairs {
        let (got, want) = pair?;
        worst = worst.max(((got - want) / want).abs());
    }
    Ok(worst)
}

fn roundtrip() -> Vec<Check> {
    const S: &str = "roundtrip";
    let mut out = Vec::new();
    let families = match builtin_families::<f64>() {
        Ok(f) => f,
        Err(e) => return vec![Check::from_result(S, "construction", Err(e), 0.0)],
    };
    for d in &families {
        let (lo, hi) = d.domain();
        let grid: Vec<f64> = log_grid(1e-6, 1e3, 91).into_iter().filter(|&x| x > lo && x < hi * 0.999).collect();
        let (label, tol) = if d.name().starts_with("cd(") {
            ("closed (c,d) exp(log x)", 1e-8)
        } else if d.has_closed_exp() {
            ("closed exp(log x)", 1e-10)
        } else {
            ("exp(log x)", 1e-8)
        };
        let closed = max_rel(grid.iter().map(|&x| Ok((d.exp(d.log(x)?)?, x))));
        out.push(Check::from_result(S, format!("{} {label}", d.name()), closed, tol));
        let inverted = max_rel(grid.iter().map(|&x| Ok((d.exp_by_inversion(d.log(x)?)?, x))));
        out.push(Check::from_result(S, format!("{} inversion", d.name()), inverted, 1e-8));
    }
    out
}

const SWEEP_NS: [usize; 3] = [2, 3, 5];
const SWEEP_POINTS: usize = 20;

fn sweep<F>(suite: &'static str, seed: u64, tol: f64, label: &'static str, f: F) -> Vec<Check>
where
    F: Fn(&Deformation<f64>, &ProbVec<f64>) -> phigeo::Result<f64> + Sync,
{
    let families = match builtin_families::<f64>() {
        Ok(f) => f,
        Err(e) => return vec![Check::from_result(suite, "construction", Err(e), tol)],
    };
    let jobs: Vec<(Deformation<f64>, usize)> =
        families.iter().flat_map(|d| SWEEP_NS.iter().map(move |&n| (d.clone(), n))).collect();
    jobs.iter()
        .map(|(d, n)| {
            let residual = random_points::<f64>(seed.wrapping_add(*n as u64), *n, SWEEP_POINTS)
                .and_then(|pts| pts.iter().try_fold(0.0f64, |acc, p| Ok(acc.max(f(d, p)?))));
            Check::from_result(suite, format!("{} n={n} {label}", d.name()), residual, tol)
        })
        .collect()
}

fn metrics_fd(seed: u64) -> Vec<Check> {
    const S: &str = "metrics-fd";
    let mut out = sweep(S, seed, 1e-4, "g^N vs Hessian of D^N", |d, p| {
        metric_naudts(d, p)?.rel_diff(&metric_fd_oracle(|a, b| divergence_naudts(d, a, b), p)?)
    });
    out.extend(sweep(S, seed, 1e-4, "g^A vs Hessian of D^A", |d, p| {
        metric_amari(d, p)?.rel_diff(&metric_fd_oracle(|a, b| divergence_amari(d, a, b), p)?)
    }));
    out
}

fn t_operator_suite(seed: u64) -> Vec<Check> {
    sweep("t-operator", seed, 1e-10, "T(g^N) vs g^A", |d, p| t_operator(d, p)?.rel_diff(&metric_amari(d, p)?))
}

fn conformal(seed: u64) -> Vec<Check> {
    const S: &str = "conformal";
    let mut out = Vec::new();
    let chis: Vec<phigeo::Result<Deformation<f64>>> = vec![tsallis(0.5), tsallis(2.0), cd_family(0.8, 0.5, None)];
    for chi in chis {
        let chi = match chi {
            Ok(c) => c,
            Err(e) => {
                out.push(Check::from_result(S, "construction", Err(e), 1e-6));
                continue;
            }
        };
        for n in [2, 3] {
            let residual = random_points::<f64>(seed.wrapping_add(100 + n as u64), n, 10).and_then(|pts| {
                pts.iter().try_fold(0.0f64, |acc, p| Ok(acc.max(conformal_check(&chi, p)?.max_rel_residual)))
            });
            out.push(Check::from_result(S, format!("{} n={n} g^N = h_xi g^A_xi", chi.name()), residual, 1e-6));
        }
    }
    out
}

fn ts_duality(seed: u64) -> Vec<Check> {
    const S: &str = "ts-duality";
    let mut out = Vec::new();
    for q in [0.5, 2.0, 0.8] {
        let residual = (|| {
            let d = tsallis(q)?;
            let dual = ts_dual(&d, 1.0 - q)?;
            random_points::<f64>(seed.wrapping_add(200), 3, 10)?.iter().try_fold(0.0f64, |acc, p| {
                Ok(acc.max(ts_metric_transform(&d, 1.0 - q, p)?.rel_diff(&metric_naudts(&dual, p)?)?))
            })
        })();
        out.push(Check::from_result(S, format!("tsallis({q}) T_nu metric vs ts_dual metric"), residual, 1e-8));
        let residual = (|| {
            let d = tsallis(q)?;
            random_points::<f64>(seed.wrapping_add(300), 3, 20)?.iter().try_fold(0.0f64, |acc, p| {
                let closed: f64 = p.probs().iter().map(|&x| (x.powf(q) - x) / (1.0 - q)).sum();
                Ok(acc.max((entropy_from_phi_nu(&d, 1.0 - q, p)? - closed).abs()))
            })
        })();
        out.push(Check::from_result(S, format!("tsallis({q}) entropy from (phi, nu)"), residual, 1e-14));
    }
    out
}

/// Families used by the estimation checks.
pub fn estimation_families() -> phigeo::Result<Vec<Deformation<f64>>> {
    Ok(vec![identity(), tsallis(0.5)?, tsallis(2.0)?, stretched(2.0)?, cd_family(0.8, 0.5, None)?])
}

/// Configurations with `n` states: `xᵢ = i/(n−1)` and, for m = 2, `(xᵢ − 0.4)²`.
pub fn test_config(n: usize, m: usize) -> phigeo::Result<ConfigMatrix<f64>> {
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let x = i as f64 / (n - 1) as f64;
            (0..m).map(|k| if k == 0 { x } else { (x - 0.4).powi(2) }).collect()
        })
        .collect();
    ConfigMatrix::new(&rows)
}

fn random_family(d: &Deformation<f64>, n: usize, m: usize, rng: &mut impl Rng) -> phigeo::Result<PhiExpFamily<f64>> {
    let theta: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    normalize(d, &test_config(n, m)?, &theta)
}

fn cr_bound(seed: u64) -> Vec<Check> {
    const S: &str = "cr-bound";
    let families = match estimation_families() {
        Ok(f) => f,
        Err(e) => return vec![Check::from_result(S, "construction", Err(e), 1e-10)],
    };
    let mut rng = seeded_rng(seed);
    let mut out = Vec::new();
    for d in &families {
        for draw in 0..3 {
            let fam = match random_family(d, 3, 1, &mut rng) {
                Ok(f) => f,
                Err(e) => {
                    out.push(Check::from_result(S, format!("{} draw {draw}", d.name()), Err(e), 1e-10));
                    continue;
                }
            };
            let est = Estimator::from_config(fam.config());
            let mut worst = Ok(0.0f64);
            for _ in 0..100 {
                worst = worst.and_then(|w| {
                    let big_p = random_interior(&mut rng, 3)?;
                    Ok(w.max(-cr_report(&fam, &big_p, &est, 0, 0)?.slack))
                });
            }
            let theta = fam.theta()[0];
            out.push(Check::from_result(S, format!("{} theta={theta:.4} bound over 100 P", d.name()), worst, 1e-10));
            let equality = d.escort(fam.pmf()).and_then(|esc| Ok(cr_report(&fam, &esc, &est, 0, 0)?.slack.abs()));
            out.push(Check::from_result(
                S,
                format!("{} theta={theta:.4} equality at escort", d.name()),
                equality,
                1e-8,
            ));
        }
    }
    out
}

fn identities(seed: u64) -> Vec<Check> {
    const S: &str = "identities";
    let families = match estimation_families() {
        Ok(f) => f,
        Err(e) => return vec![Check::from_result(S, "construction", Err(e), 1e-6)],
    };
    let mut rng = seeded_rng(seed.wrapping_add(17));
    let mut out = Vec::new();
    for d in &families {
        for (n, m) in [(2, 1), (3, 1), (3, 2)] {
            let fam = random_family(d, n, m, &mut rng);
            let naudts = fam.clone().and_then(|f| Ok(naudts_identity_check(&f)?.max_rel_residual));
            out.push(Check::from_result(S, format!("{} (n,m)=({n},{m}) I = h g^N", d.name()), naudts, 1e-6));
            let amari = fam.and_then(|f| Ok(amari_identity_check(&f)?.max_rel_residual));
            out.push(Check::from_result(S, format!("{} (n,m)=({n},{m}) I^A = h_xi g^A_xi", d.name()), amari, 1e-5));
        }
    }
    out
}
