use std::fmt;
use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    CountV,
    CountU,
    OracleDiff,
    Lattice,
    Zeta,
    Constants,
    Tamagawa,
    Sym2V,
    Sym2P1,
    Sym2P1xp1,
    LSums,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::CountV => "count-v",
            Kind::CountU => "count-u",
            Kind::OracleDiff => "oracle-diff",
            Kind::Lattice => "lattice",
            Kind::Zeta => "zeta",
            Kind::Constants => "constants",
            Kind::Tamagawa => "tamagawa",
            Kind::Sym2V => "sym2-v",
            Kind::Sym2P1 => "sym2-p1",
            Kind::Sym2P1xp1 => "sym2-p1xp1",
            Kind::LSums => "l-sums",
        }
    }

    /// Kinds that run over imaginary quadratic fields as well as Q.
    pub fn allows_imaginary(self) -> bool {
        matches!(self, Kind::CountV | Kind::CountU | Kind::OracleDiff | Kind::Lattice | Kind::Zeta)
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub kind: Kind,
    pub field_disc: i64,
    pub b_schedule: Vec<f64>,
    pub tolerance: f64,
    pub workers: usize,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub seed: u64,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.b_schedule.is_empty() {
            return Err(CliError::InvalidSpec("empty cutoff schedule".into()));
        }
        if self.b_schedule.iter().any(|b| !(b.is_finite() && *b > 0.0)) {
            return Err(CliError::InvalidSpec("cutoffs must be positive".into()));
        }
        if self.b_schedule.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::InvalidSpec("cutoff schedule must be strictly increasing".into()));
        }
        if !(self.tolerance > 0.0) {
            return Err(CliError::InvalidSpec(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.workers == 0 {
            return Err(CliError::InvalidSpec("workers must be positive".into()));
        }
        Ok(())
    }
}

/// The cutoffs from `b` to `b_max`: every integer when `steps` is absent,
/// otherwise `steps` geometrically spaced values.
pub fn schedule(b: f64, b_max: Option<f64>, steps: Option<usize>) -> Result<Vec<f64>, CliError> {
    let Some(top) = b_max else {
        return Ok(vec![b]);
    };
    if top < b {
        return Err(CliError::InvalidSpec(format!("--b-max {top} is below --b {b}")));
    }
    match steps {
        None => {
            let (lo, hi) = (b.ceil() as u64, top.floor() as u64);
            if hi - lo >= 100_000 {
                return Err(CliError::InvalidSpec("integer schedule longer than 100000 cutoffs; pass --steps".into()));
            }
            Ok((lo..=hi).map(|x| x as f64).collect())
        }
        Some(0) => Err(CliError::InvalidSpec("--steps must be positive".into())),
        Some(1) => Ok(vec![top]),
        Some(n) => {
            let ratio = (top / b).ln() / (n - 1) as f64;
            Ok((0..n)
                .map(|i| {
                    let x = b * (ratio * i as f64).exp();
                    // land exactly on round values such as 10^4
                    let r = x.round();
                    if (x - r).abs() <= 1e-9 * x {
                        r
                    } else {
                        x
                    }
                })
                .collect())
        }
    }
}
