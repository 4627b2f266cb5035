use clap::Args;
use phigeo::families::{stretched, tsallis};
use phigeo::geometry::{entropy_amari, entropy_naudts};
use phigeo::specfun::{upper_gamma, Tolerance};
use phigeo::{Deformation, ProbVec};
use serde_json::{json, Value};

use crate::error::CliResult;
use crate::family::NumList;
use crate::output::{num, print_json};

#[derive(Debug, Clone, Args)]
pub struct Table2Args {
    #[arg(long, allow_hyphen_values = true)]
    pub q: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub eta: f64,
    /// Distribution for the entropy rows, comma separated.
    #[arg(long, allow_hyphen_values = true)]
    pub p: NumList,
    /// Argument of the φ, log, exp and χ rows.
    #[arg(long, default_value_t = 0.5, allow_hyphen_values = true)]
    pub x: f64,
}

pub const SA_FOOTNOTE: &str = "The printed S^A rows have the opposite sign of -(1/h) sum phi(p) log_phi(p); the library value follows that definition.";

/// One table row: the printed formula and the library evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub quantity: &'static str,
    pub printed: f64,
    pub library: Option<f64>,
    pub footnote: bool,
}

impl Row {
    fn discrepancy(&self) -> Option<bool> {
        let lib = self.library?;
        if self.printed.is_nan() || lib.is_nan() {
            return None;
        }
        Some((self.printed - lib).abs() > 1e-10 * lib.abs().max(1.0))
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "quantity": self.quantity,
            "printed": num(self.printed),
            "library": self.library.map_or(Value::Null, num),
            "discrepancy": self.discrepancy(),
        });
        if self.footnote {
            v["footnote"] = json!(SA_FOOTNOTE);
        }
        v
    }
}

fn signed_pow(t: f64, a: f64) -> f64 {
    t.signum() * t.abs().powf(a)
}

fn generic_rows(d: &Deformation<f64>, x: f64, p: &ProbVec<f64>, printed: [f64; 6]) -> Vec<Row> {
    let names = ["phi", "log", "exp", "chi", "S^N", "S^A"];
    let library = [
        Some(d.phi(x)),
        d.log(x).ok(),
        d.exp(x).ok(),
        Some(d.phi(x) / d.phi_prime(x)),
        entropy_naudts(d, p).ok(),
        entropy_amari(d, p).ok(),
    ];
    names
        .iter()
        .zip(printed)
        .zip(library)
        .map(|((&quantity, printed), library)| Row { quantity, printed, library, footnote: quantity == "S^A" })
        .collect()
}

pub fn tsallis_rows(q: f64, x: f64, p: &ProbVec<f64>) -> CliResult<Vec<Row>> {
    let d = tsallis(q)?;
    let sum_pow = |a: f64| p.probs().iter().map(|&pi| pi.powf(a)).sum::<f64>();
    let base = 1.0 + (1.0 - q) * x;
    let printed = [
        x.powf(q),
        (x.powf(1.0 - q) - 1.0) / (1.0 - q),
        if base > 0.0 { base.powf(1.0 / (1.0 - q)) } else { 0.0 },
        x / q,
        (sum_pow(2.0 - q) / (2.0 - q) - 1.0) / (q - 1.0),
        (1.0 / sum_pow(q) - 1.0) / (1.0 - q),
    ];
    Ok(generic_rows(&d, x, p, printed))
}

/// Printed stretched rows with `log(x)^a` read as `sgn(ln x)|ln x|^a` in log and exp
/// and as `|ln x|^a` inside φ.
pub fn stretched_rows(eta: f64, x: f64, p: &ProbVec<f64>) -> CliResult<Vec<Row>> {
    let d = stretched(eta)?;
    let l = x.ln();
    let entropy_n = p
        .probs()
        .iter()
        .map(|&pi| upper_gamma(1.0 + 1.0 / eta, -pi.ln(), &Tolerance::standard()).unwrap_or(f64::NAN))
        .sum();
    let num_a: f64 = p.probs().iter().map(|&pi| pi * pi.ln()).sum();
    let den_a: f64 = p.probs().iter().map(|&pi| pi * pi.ln().abs().powf(1.0 - 1.0 / eta)).sum();
    let printed = [
        x * eta * l.abs().powf(1.0 - 1.0 / eta),
        signed_pow(l, 1.0 / eta),
        signed_pow(x, eta).exp(),
        x * eta * l / ((eta - 1.0) + eta * l),
        entropy_n,
        num_a / den_a,
    ];
    Ok(generic_rows(&d, x, p, printed))
}

pub fn run(args: &Table2Args) -> CliResult<()> {
    let p = ProbVec::new(args.p.0.clone())?;
    let rows = |r: Vec<Row>| Value::Array(r.iter().map(Row::to_json).collect());
    let out = json!({
        "x": num(args.x),
        "p": p.probs(),
        "tsallis": { "q": args.q, "rows": rows(tsallis_rows(args.q, args.x, &p)?) },
        "stretched": { "eta": args.eta, "rows": rows(stretched_rows(args.eta, args.x, &p)?) },
        "footnote": SA_FOOTNOTE,
    });
    print_json(&out)
}
