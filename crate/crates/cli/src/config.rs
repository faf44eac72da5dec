use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use psiseries::recurrences::Family;
use psiseries::{BigReal, Error, Rational, Result};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum FamilyName {
    Bst,
    Dbst,
    Mary,
    Fringe,
    Phylo,
    Quadtree,
    Kd,
    Partition,
    Boltzmann,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Sequence values from the recurrence
    Sequence(Opts),
    /// Resonances and the compatibility residual
    Ars(Opts),
    /// Two-sided connection for rho and the free constant
    Solve(Opts),
    /// Asymptotic expansion of the coefficients
    Expand(Opts),
    /// Residual of the expansion against the sequence
    Validate(Opts),
    /// Boltzmann nu = 1, 2 closed forms
    Integrable(Opts),
    /// Quadtree moment generating function
    Mgf(Opts),
    /// Upper bound for rho from the first n0 coefficients
    Bracket(Opts),
}

impl Command {
    pub fn opts_mut(&mut self) -> &mut Opts {
        match self {
            Command::Sequence(o)
            | Command::Ars(o)
            | Command::Solve(o)
            | Command::Expand(o)
            | Command::Validate(o)
            | Command::Integrable(o)
            | Command::Mgf(o)
            | Command::Bracket(o) => o,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Sequence(_) => "sequence",
            Command::Ars(_) => "ars",
            Command::Solve(_) => "solve",
            Command::Expand(_) => "expand",
            Command::Validate(_) => "validate",
            Command::Integrable(_) => "integrable",
            Command::Mgf(_) => "mgf",
            Command::Bracket(_) => "bracket",
        }
    }

    pub fn opts(&self) -> &Opts {
        match self {
            Command::Sequence(o)
            | Command::Ars(o)
            | Command::Solve(o)
            | Command::Expand(o)
            | Command::Validate(o)
            | Command::Integrable(o)
            | Command::Mgf(o)
            | Command::Bracket(o) => o,
        }
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct Opts {
    #[arg(long, value_enum, default_value = "bst")]
    pub family: FamilyName,
    #[arg(long)]
    pub d: Option<u32>,
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long)]
    pub t: Option<u32>,
    #[arg(long)]
    pub nu: Option<u32>,
    #[arg(long)]
    pub omega: Option<String>,
    /// kd split parameter, or use --k/--s
    #[arg(long)]
    pub beta: Option<String>,
    #[arg(long)]
    pub k: Option<u32>,
    #[arg(long)]
    pub s: Option<u32>,

    /// Working precision in bits
    #[arg(long, default_value_t = 512)]
    pub prec: u32,
    /// Target significant digits
    #[arg(long, default_value_t = 15)]
    pub digits: u32,
    #[arg(long, default_value = "1/2")]
    pub beta_split: String,
    /// Sequence terms N (sequence) or the cap on Taylor terms (solve)
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub n0: Option<usize>,
    /// Expansion order: lowest power of n kept is n^-order
    #[arg(long)]
    pub order: Option<i64>,
    #[arg(long)]
    pub n_min: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
    #[arg(long)]
    pub n_step: Option<u64>,
    /// Resonance index for ars (defaults to the least one)
    #[arg(long)]
    pub r: Option<usize>,
    /// MGF arguments
    #[arg(long, value_delimiter = ',')]
    pub z: Vec<String>,
    /// Floating sequence values even for rational families
    #[arg(long)]
    pub float: bool,

    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Not echoed in reports
    #[arg(long)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub compare_paper: bool,
}

fn need<T: Copy>(v: Option<T>, flag: &str, fam: &str) -> Result<T> {
    v.ok_or_else(|| Error::Domain(format!("--family {fam} needs --{flag}")))
}

pub fn parse_real(s: &str, prec: u32) -> Result<BigReal> {
    if let Ok(q) = s.parse::<Rational>() {
        return Ok(BigReal::from_rational(&q, prec));
    }
    BigReal::parse(s, prec).ok_or_else(|| Error::Domain(format!("cannot parse number {s:?}")))
}

impl Opts {
    pub fn family(&self) -> Result<Family> {
        let f = match self.family {
            FamilyName::Bst => Family::bst(),
            FamilyName::Dbst => Family::BstEquality { d: need(self.d, "d", "dbst")? },
            FamilyName::Mary => Family::MarySearch { m: need(self.m, "m", "mary")? },
            FamilyName::Fringe => Family::FringeBalanced { t: need(self.t, "t", "fringe")? },
            FamilyName::Phylo => Family::PhyloAgreement,
            FamilyName::Quadtree => Family::QuadtreeMoments,
            FamilyName::Kd => match (&self.beta, self.k, self.s) {
                (Some(b), _, _) => Family::RelaxedKd { beta: parse_real(b, self.prec)? },
                (None, Some(k), Some(s)) => Family::relaxed_kd_from_pattern(k, s, self.prec)?,
                _ => return Err(Error::Domain("--family kd needs --beta or --k and --s".into())),
            },
            FamilyName::Partition => {
                let omega = match &self.omega {
                    Some(w) => parse_real(w, self.prec)?,
                    None => BigReal::from_i64(1, self.prec),
                };
                Family::Partition { d: need(self.d, "d", "partition")?, omega }
            }
            FamilyName::Boltzmann => Family::Boltzmann { nu: need(self.nu, "nu", "boltzmann")? },
        };
        f.validate()?;
        Ok(f)
    }

    pub fn beta_split(&self) -> Result<Rational> {
        let q: Rational = self
            .beta_split
            .parse()
            .map_err(|_| Error::Domain(format!("cannot parse --beta-split {:?}", self.beta_split)))?;
        if q <= 0 || q >= 1 {
            return Err(Error::Domain("--beta-split must lie in (0, 1)".into()));
        }
        Ok(q)
    }

    /// Digits printed for floating results.
    pub fn out_digits(&self) -> usize {
        self.digits as usize + 5
    }
}
