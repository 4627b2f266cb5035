use clap::{Args, ValueEnum};
use phigeo::geometry::{
    divergence_amari, divergence_naudts, entropy_amari, entropy_naudts, metric_amari, metric_naudts,
};
use phigeo::ProbVec;
use serde_json::json;

use crate::error::{usage, CliResult};
use crate::family::{FamilyArgs, NumList};
use crate::output::{matrix, num, nums, print_json};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Quantity {
    Log,
    Exp,
    Phi,
    Escort,
    H,
    EntropyN,
    EntropyA,
    DivergenceN,
    DivergenceA,
    MetricN,
    MetricA,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long, value_enum)]
    pub what: Quantity,
    /// Distribution, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<NumList>,
    /// Second distribution for divergences.
    #[arg(long, allow_hyphen_values = true)]
    pub p2: Option<NumList>,
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
}

fn dist(v: &Option<NumList>, flag: &str) -> CliResult<ProbVec<f64>> {
    let v = v.clone().ok_or_else(|| usage(format!("--{flag} is required for this quantity")))?.0;
    Ok(ProbVec::new(v)?)
}

pub fn run(args: &EvalArgs) -> CliResult<()> {
    let d = args.family.build()?;
    let x = || args.x.ok_or_else(|| usage("--x is required for this quantity"));
    let value = match args.what {
        Quantity::Log => json!({ "value": num(d.log(x()?)?) }),
        Quantity::Exp => json!({ "value": num(d.exp(x()?)?) }),
        Quantity::Phi => {
            let x = x()?;
            let (lo, hi) = d.domain();
            if !(x > lo && x < hi) {
                return Err(usage(format!("x = {x} is outside the domain ({lo}, {hi})")));
            }
            json!({ "value": num(d.phi(x)) })
        }
        Quantity::Escort => json!({ "value": nums(d.escort(&dist(&args.p, "p")?)?.probs()) }),
        Quantity::H => json!({ "value": num(d.h(&dist(&args.p, "p")?)?) }),
        Quantity::EntropyN => json!({ "value": num(entropy_naudts(&d, &dist(&args.p, "p")?)?) }),
        Quantity::EntropyA => json!({ "value": num(entropy_amari(&d, &dist(&args.p, "p")?)?) }),
        Quantity::DivergenceN => {
            json!({ "value": num(divergence_naudts(&d, &dist(&args.p, "p")?, &dist(&args.p2, "p2")?)?) })
        }
        Quantity::DivergenceA => {
            json!({ "value": num(divergence_amari(&d, &dist(&args.p, "p")?, &dist(&args.p2, "p2")?)?) })
        }
        Quantity::MetricN => matrix(&metric_naudts(&d, &dist(&args.p, "p")?)?.to_rows()),
        Quantity::MetricA => matrix(&metric_amari(&d, &dist(&args.p, "p")?)?.to_rows()),
    };
    print_json(&value)
}
