use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use phigeo::families::cd_family;
use phigeo::geometry::{metric_amari, metric_naudts};
use phigeo::{Deformation, ProbVec};
use rayon::prelude::*;

use crate::error::{usage, CliResult};
use crate::output::write_csv;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Fig1,
    Fig2,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    #[arg(long, value_enum)]
    pub which: Which,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// p grid of fig1 as start:stop:step.
    #[arg(long, default_value = "0.01:0.99:0.0025", allow_hyphen_values = true)]
    pub p_grid: String,
    /// c grid of fig2 as start:stop:step.
    #[arg(long, default_value = "0.2:1.4:0.02", allow_hyphen_values = true)]
    pub c_grid: String,
    /// d grid of fig2 as start:stop:step.
    #[arg(long, default_value = "-1:2:0.05", allow_hyphen_values = true)]
    pub d_grid: String,
}

/// Evenly spaced values `start + k·step`, rounded to 9 decimals so that
/// decimal grid points such as 1.0 come out exact.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(usage(format!("grid {text:?} must be start:stop:step")));
    }
    let mut v = [0.0f64; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.trim().parse().map_err(|e| usage(format!("grid {text:?}: bad number {part:?}: {e}")))?;
    }
    let [start, stop, step] = v;
    if !(start.is_finite() && stop.is_finite() && step.is_finite()) || step <= 0.0 || stop < start {
        return Err(usage(format!("grid {text:?} needs finite start <= stop and step > 0")));
    }
    let intervals = (stop - start) / step;
    let count = intervals.round();
    if (intervals - count).abs() > 1e-6 || count > 1e6 {
        return Err(usage(format!("grid {text:?}: step does not divide the range")));
    }
    Ok((0..=count as usize).map(|k| ((start + k as f64 * step) * 1e9).round() / 1e9).collect())
}

/// (c, d) pairs of the fig1 panels.
pub const FIG1_FAMILIES: [(f64, f64); 3] = [(1.0, 1.0), (1.0, 0.5), (0.5, 0.0)];

/// Point at which fig2 evaluates the metrics.
pub fn fig2_point() -> ProbVec<f64> {
    ProbVec::new(vec![1.0 / 3.0, 2.0 / 3.0]).expect("valid distribution")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Naudts,
    Amari,
}

/// The 1 × 1 metric of a two-state distribution, NaN when evaluation fails.
pub fn metric_value(d: &Deformation<f64>, p: &ProbVec<f64>, metric: Metric) -> f64 {
    let g = match metric {
        Metric::Naudts => metric_naudts(d, p),
        Metric::Amari => metric_amari(d, p),
    };
    match g {
        Ok(g) => g.get(0, 0),
        Err(e) => {
            log::debug!("{} at {:?}: {e}", d.name(), p.probs());
            f64::NAN
        }
    }
}

/// `value` at every (c, d) with c varying slowest, NaN where the family or metric fails.
pub fn fig2_rows(cs: &[f64], ds: &[f64], metric: Metric) -> Vec<Vec<f64>> {
    let p = fig2_point();
    let points: Vec<(f64, f64)> = cs.iter().flat_map(|&c| ds.iter().map(move |&d| (c, d))).collect();
    points
        .par_iter()
        .map(|&(c, d)| {
            let value = cd_family(c, d, None).map_or(f64::NAN, |fam| metric_value(&fam, &p, metric));
            vec![c, d, value]
        })
        .collect()
}

fn label(c: f64, d: f64) -> String {
    format!("c{c}_d{d}")
}

fn two_state(p: f64) -> Option<ProbVec<f64>> {
    ProbVec::new(vec![p, 1.0 - p]).ok()
}

/// Rows `p, value per family` for one fig1 panel.
pub fn fig1_rows(ps: &[f64], metric: Metric) -> Vec<Vec<f64>> {
    let families: Vec<Option<Deformation<f64>>> =
        FIG1_FAMILIES.iter().map(|&(c, d)| cd_family(c, d, None).ok()).collect();
    ps.iter()
        .map(|&p| {
            let mut row = vec![p];
            for fam in &families {
                row.push(match (fam, two_state(p)) {
                    (Some(fam), Some(pv)) => metric_value(fam, &pv, metric),
                    _ => f64::NAN,
                });
            }
            row
        })
        .collect()
}

/// Rows `p, I, 1/I` per family with `I = h_φ g^N`.
pub fn fig1_crbound_rows(ps: &[f64]) -> Vec<Vec<f64>> {
    let families: Vec<Option<Deformation<f64>>> =
        FIG1_FAMILIES.iter().map(|&(c, d)| cd_family(c, d, None).ok()).collect();
    ps.iter()
        .map(|&p| {
            let mut row = vec![p];
            for fam in &families {
                let info = match (fam, two_state(p)) {
                    (Some(fam), Some(pv)) => {
                        fam.h(&pv).map_or(f64::NAN, |h| h * metric_value(fam, &pv, Metric::Naudts))
                    }
                    _ => f64::NAN,
                };
                row.push(info);
                row.push(info.recip());
            }
            row
        })
        .collect()
}

fn thread_pool() -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var("PHIGEO_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| usage(format!("PHIGEO_THREADS={v:?} is not a thread count")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| usage(format!("cannot start thread pool: {e}")))
}

fn write_fig1(out: &Path, ps: &[f64]) -> CliResult<()> {
    let values: Vec<String> = std::iter::once("p".to_string())
        .chain(FIG1_FAMILIES.iter().map(|&(c, d)| format!("value_{}", label(c, d))))
        .collect();
    write_csv(&out.join("fig1_naudts.csv"), &values, &fig1_rows(ps, Metric::Naudts))?;
    write_csv(&out.join("fig1_amari.csv"), &values, &fig1_rows(ps, Metric::Amari))?;
    let mut header = vec!["p".to_string()];
    for &(c, d) in &FIG1_FAMILIES {
        header.push(format!("I_{}", label(c, d)));
        header.push(format!("inv_I_{}", label(c, d)));
    }
    write_csv(&out.join("fig1_crbound.csv"), &header, &fig1_crbound_rows(ps))
}

fn write_fig2(out: &Path, cs: &[f64], ds: &[f64]) -> CliResult<()> {
    let pool = thread_pool()?;
    let header: Vec<String> = ["c", "d", "value"].iter().map(|s| s.to_string()).collect();
    for (name, metric) in [("fig2_naudts.csv", Metric::Naudts), ("fig2_amari.csv", Metric::Amari)] {
        let rows = pool.install(|| fig2_rows(cs, ds, metric));
        write_csv(&out.join(name), &header, &rows)?;
    }
    Ok(())
}

pub fn run(args: &FigureArgs) -> CliResult<()> {
    std::fs::create_dir_all(&args.out)?;
    match args.which {
        Which::Fig1 => {
            let ps = parse_grid(&args.p_grid)?;
            if ps.iter().any(|&p| !(p > 0.0 && p < 1.0)) {
                return Err(usage("fig1 p grid must lie inside (0, 1)"));
            }
            write_fig1(&args.out, &ps)
        }
        Which::Fig2 => write_fig2(&args.out, &parse_grid(&args.c_grid)?, &parse_grid(&args.d_grid)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grids() {
        let ps = parse_grid("0.01:0.99:0.0025").unwrap();
        assert_eq!(ps.len(), 393);
        assert_eq!(ps[392], 0.99);
        let cs = parse_grid("0.2:1.4:0.02").unwrap();
        assert_eq!(cs.len(), 61);
        assert_eq!(cs[40], 1.0);
        let ds = parse_grid("-1:2:0.05").unwrap();
        assert_eq!(ds[20], 0.0);
        assert_eq!(ds[40], 1.0);
        for bad in ["1:0:0.1", "0:1:0", "0:1", "0:1:0.3", "a:1:0.1"] {
            assert!(parse_grid(bad).is_err(), "{bad}");
        }
    }
}
