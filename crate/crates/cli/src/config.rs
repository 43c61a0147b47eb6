//! Command line flags and their resolved form.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "latcoh", version, about = "Lattice homology and filtered spectral sequences of plumbing graphs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Intersection matrix, discriminant group, Z_K, s_h and k_h.
    Invariants(Common),
    /// Lattice homology as Z[U]-modules and the homology of each S_n.
    Homology(Common),
    /// Graded root of the components of S_n.
    Root(Common),
    /// Pages of the spectral sequence of the filtration by s.
    Specseq(Common),
    /// Poincare series of the pages, Seiberg-Witten polynomial and period.
    Series(Common),
    /// Reduced weight table on a bad vertex set.
    Reduce(Common),
    /// Blows up a vertex, an edge or the base point of an arrow.
    Blowup(BlowupArgs),
    /// Checks the identity battery; exits with 1 on any failure.
    Verify(Common),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Graph file; `-` reads standard input.
    pub graph: PathBuf,
    /// Class as E^*-coefficients (comma separated), or `all`.
    #[arg(long)]
    pub class: Option<String>,
    /// Semigroup element as E^*-coefficients; defaults to the arrows.
    #[arg(long)]
    pub s: Option<String>,
    /// Rectangle corner, one entry per model coordinate.
    #[arg(long)]
    pub rect: Option<String>,
    /// Added to every coordinate of the default rectangle.
    #[arg(long, default_value_t = 0)]
    pub margin: i64,
    /// Top level; switches to the capped quadrant model.
    #[arg(long)]
    pub nmax: Option<i64>,
    /// Page to print: a positive integer or `inf`.
    #[arg(long)]
    pub page: Option<String>,
    /// Bad vertex ids (comma separated).
    #[arg(long)]
    pub bad: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Limit on materialized cubes.
    #[arg(long, env = "LATCOH_BUDGET")]
    pub budget: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BlowupArgs {
    #[command(flatten)]
    pub common: Common,
    /// `vertex:ID`, `edge:ID,ID` or `arrow:K` (K counts arrows from 0).
    #[arg(long)]
    pub center: String,
}

/// Everything a run depends on, embedded in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub input: String,
    pub class: ClassSpec,
    pub s: Option<Vec<i64>>,
    pub rect: Option<Vec<i64>>,
    pub margin: i64,
    pub nmax: Option<i64>,
    pub page: Option<PageSpec>,
    pub bad: Option<Vec<u32>>,
    pub center: Option<String>,
    pub format: Format,
    pub jobs: usize,
    pub budget: u128,
    /// Pending base-point blow-ups were carried out on reading.
    pub decorations_applied: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassSpec {
    All,
    Dual(Vec<i64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PageSpec {
    Finite(usize),
    Infinity,
}

pub fn parse_list<T: std::str::FromStr>(flag: &str, text: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|_| CliError::Parse(format!("--{flag}: cannot read `{t}` as a number")))
        })
        .collect()
}

impl RunConfig {
    pub fn resolve(command: &'static str, c: &Common, center: Option<&str>) -> Result<Self, CliError> {
        let class = match c.class.as_deref() {
            None => ClassSpec::Dual(Vec::new()),
            Some("all") => ClassSpec::All,
            Some(t) => ClassSpec::Dual(parse_list("class", t)?),
        };
        let page = match c.page.as_deref() {
            None => None,
            Some("inf") | Some("infinity") => Some(PageSpec::Infinity),
            Some(t) => match t.parse::<usize>() {
                Ok(k) if k >= 1 => Some(PageSpec::Finite(k)),
                _ => return Err(CliError::Parse(format!("--page: expected a positive integer or `inf`, got `{t}`"))),
            },
        };
        if c.margin < 0 {
            return Err(CliError::Parse("--margin must be nonnegative".into()));
        }
        let budget = match c.budget {
            Some(b) if b.is_finite() && b >= 1.0 => b as u128,
            Some(b) => return Err(CliError::Parse(format!("--budget must be at least 1, got {b}"))),
            None => latcoh::complex::DEFAULT_BUDGET,
        };
        Ok(RunConfig {
            command,
            input: c.graph.display().to_string(),
            class,
            s: c.s.as_deref().map(|t| parse_list("s", t)).transpose()?,
            rect: c.rect.as_deref().map(|t| parse_list("rect", t)).transpose()?,
            margin: c.margin,
            nmax: c.nmax,
            page,
            bad: c.bad.as_deref().map(|t| parse_list("bad", t)).transpose()?,
            center: center.map(str::to_string),
            format: c.format,
            jobs: c.jobs,
            budget,
            decorations_applied: false,
        })
    }
}
