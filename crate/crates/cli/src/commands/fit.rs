use std::path::PathBuf;

use clap::{Args, ValueEnum};
use phigeo::geometry::{entropy_amari, entropy_naudts};
use phigeo::maxent::{eta_coords, fit_escort_moments, fit_linear_moments, varphi_dual, ConfigMatrix, PhiExpFamily};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{usage, CliResult};
use crate::family::FamilyArgs;
use crate::output::{num, nums, print_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Constraints {
    Linear,
    Escort,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_enum, default_value = "linear")]
    pub constraints: Constraints,
    /// JSON file with `{"E": [[...], ...], "targets": [...]}`.
    #[arg(long)]
    pub config: PathBuf,
}

/// Contents of a fit configuration file.
#[derive(Debug, Clone, Deserialize)]
pub struct FitConfig {
    #[serde(rename = "E")]
    pub e: Vec<Vec<f64>>,
    pub targets: Vec<f64>,
}

impl FitConfig {
    pub fn load(path: &std::path::Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

pub fn fit(args: &FitArgs) -> CliResult<PhiExpFamily<f64>> {
    let d = args.family.build()?;
    let cfg = FitConfig::load(&args.config)?;
    let e = ConfigMatrix::new(&cfg.e)?;
    let fam = match args.constraints {
        Constraints::Linear => fit_linear_moments(&d, &e, &cfg.targets)?,
        Constraints::Escort => fit_escort_moments(&d, &e, &cfg.targets)?,
    };
    Ok(fam)
}

fn or_null(r: phigeo::Result<Value>) -> Value {
    r.unwrap_or(Value::Null)
}

/// JSON record of a fitted family; quantities that cannot be evaluated are `null`.
pub fn report(fam: &PhiExpFamily<f64>) -> Value {
    let d = fam.deformation();
    json!({
        "family": d.name(),
        "theta": nums(fam.theta()),
        "psi": num(fam.psi()),
        "pmf": nums(fam.pmf().probs()),
        "eta": or_null(eta_coords(fam).map(|v| nums(&v))),
        "varphi": or_null(varphi_dual(fam).map(|v| num(v.legendre_value))),
        "entropy_naudts": or_null(entropy_naudts(d, fam.pmf()).map(num)),
        "entropy_amari": or_null(entropy_amari(d, fam.pmf()).map(num)),
    })
}

pub fn run(args: &FitArgs) -> CliResult<()> {
    print_json(&report(&fit(args)?))
}
