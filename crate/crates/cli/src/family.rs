use clap::{Args, ValueEnum};
use phigeo::deform::ts_dual;
use phigeo::families::{cd_family, identity, stretched, tsallis};
use phigeo::Deformation;

use crate::error::{usage, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    Shannon,
    Tsallis,
    Stretched,
    Cd,
    TsDual,
}

/// Flags selecting a deformation.
#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum, default_value = "shannon")]
    pub family: FamilyKind,
    /// Tsallis exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    /// Stretched-exponential exponent.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<f64>,
    /// Scale of the (c,d) family; automatic when omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<f64>,
    /// Tsallis–Souza parameter for `ts-dual`.
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// Family that `ts-dual` transforms.
    #[arg(long, value_enum, default_value = "shannon")]
    pub base: FamilyKind,
}

fn need(v: Option<f64>, flag: &str, family: &str) -> CliResult<f64> {
    v.ok_or_else(|| usage(format!("--{flag} is required for --family {family}")))
}

impl FamilyArgs {
    pub fn build(&self) -> CliResult<Deformation<f64>> {
        match self.family {
            FamilyKind::TsDual => {
                if self.base == FamilyKind::TsDual {
                    return Err(usage("--base ts-dual is not allowed"));
                }
                let base = self.build_kind(self.base)?;
                Ok(ts_dual(&base, need(self.nu, "nu", "ts-dual")?)?)
            }
            kind => self.build_kind(kind),
        }
    }

    fn build_kind(&self, kind: FamilyKind) -> CliResult<Deformation<f64>> {
        Ok(match kind {
            FamilyKind::Shannon => identity(),
            FamilyKind::Tsallis => tsallis(need(self.q, "q", "tsallis")?)?,
            FamilyKind::Stretched => stretched(need(self.eta, "eta", "stretched")?)?,
            FamilyKind::Cd => cd_family(need(self.c, "c", "cd")?, need(self.d, "d", "cd")?, self.r)?,
            FamilyKind::TsDual => unreachable!("handled by build"),
        })
    }
}

/// Comma-separated numbers such as `0.3,0.7`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumList(pub Vec<f64>);

impl std::str::FromStr for NumList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("bad number {t:?}: {e}")))
            .collect::<Result<_, _>>()
            .map(NumList)
    }
}
