//! Command-line driver. Every subcommand is a thin composition of library
//! operations that renders its result as CSV or JSON text.

use crate::agcode::{self, AgError, DordSource, OnePointFamily, Place, DEFAULT_SEED};
use crate::aut::{self, AutError};
use crate::curve::{Curve, CurveError};
use crate::derived::{self, DerivedError};
use crate::ffield::prime_power;
use crate::pzero::{self, PzeroError};
use crate::qtwo::{self, DordClosed, DordOptions, Q2, QtwoError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("failed hypothesis: {0}")]
    Hypothesis(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Ag(#[from] AgError),
    #[error(transparent)]
    Pzero(#[from] PzeroError),
    #[error(transparent)]
    Qtwo(#[from] QtwoError),
    #[error(transparent)]
    Derived(DerivedError),
    #[error(transparent)]
    Aut(AutError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl From<DerivedError> for CliError {
    fn from(e: DerivedError) -> Self {
        match e {
            DerivedError::HypothesisViolated { family, hypothesis } => {
                CliError::Hypothesis(format!("{family}: {hypothesis}"))
            }
            other => CliError::Derived(other),
        }
    }
}

impl From<AutError> for CliError {
    fn from(e: AutError) -> Self {
        match e {
            AutError::HypothesisViolated(h) => CliError::Hypothesis(h),
            other => CliError::Aut(other),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PointArg {
    Infinity,
    P0,
}

impl From<PointArg> for Place {
    fn from(p: PointArg) -> Place {
        match p {
            PointArg::Infinity => Place::Infinity,
            PointArg::P0 => Place::P0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum QuantumFamily {
    TwoPoint,
    T1,
    T1Max,
    Improved,
}

#[derive(Debug, Parser)]
#[command(name = "ggs", about = "One-point AG codes on GGS maximal curves")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct RunConfig {
    #[arg(long, global = true, default_value_t = 2)]
    pub q: u64,
    #[arg(long, global = true, default_value_t = 5)]
    pub n: u64,
    #[arg(long, global = true, value_enum, default_value_t = PointArg::Infinity)]
    pub point: PointArg,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Clone, Debug, Args)]
pub struct Range {
    #[arg(long, default_value_t = 1)]
    pub lmin: u64,
    #[arg(long, default_value_t = 20)]
    pub lmax: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Semigroup elements up to --max with their decomposition.
    Semigroup {
        #[arg(long, default_value_t = 100)]
        max: u64,
    },
    /// nu_l for l in [lmin, lmax].
    Nu(Range),
    /// d_ORD(l) by counting, with the q = 2 closed form where one applies.
    Dord(Range),
    /// Dual code parameters, or the delta comparison P_inf vs P_0.
    Table {
        #[command(flatten)]
        range: Range,
        #[arg(long)]
        compare: bool,
    },
    /// CSS quantum code certificate.
    Quantum {
        #[arg(long, value_enum, default_value_t = QuantumFamily::T1)]
        family: QuantumFamily,
        #[arg(long)]
        a: Option<u64>,
        #[arg(long)]
        b: Option<u64>,
        #[arg(long)]
        l: Option<u64>,
        #[arg(long, default_value_t = 1)]
        s: u64,
    },
    /// Unit-memory convolutional code certificate.
    Conv {
        #[arg(long)]
        rho: u64,
        #[arg(long)]
        s: u64,
    },
    /// Orbits of the automorphism group on the rational points.
    Orbits,
    /// Order of the automorphism group of C(D, l P_inf).
    CodeAut {
        #[arg(long)]
        l: u64,
    },
    /// Minimum weight of seeded random dual codewords at rho.
    Falsify {
        #[arg(long)]
        rho: u64,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
}

fn check_config(c: &RunConfig) -> Result<(), CliError> {
    if prime_power(c.q).is_none() {
        return Err(CliError::Usage(format!("--q {} is not a prime power", c.q)));
    }
    if c.n < 3 || c.n.is_multiple_of(2) {
        return Err(CliError::Usage(format!("--n {} must be odd and at least 3", c.n)));
    }
    Ok(())
}

fn json<T: Serialize>(v: &T) -> Result<String, CliError> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    let c = &cli.config;
    check_config(c)?;
    match &cli.command {
        Command::Semigroup { max } => cmd_semigroup(c, *max),
        Command::Nu(r) => cmd_nu(c, r),
        Command::Dord(r) => cmd_dord(c, r),
        Command::Table { range, compare } => cmd_table(c, range, *compare),
        Command::Quantum { family, a, b, l, s } => cmd_quantum(c, *family, *a, *b, *l, *s),
        Command::Conv { rho, s } => cmd_conv(c, *rho, *s),
        Command::Orbits => cmd_orbits(c),
        Command::CodeAut { l } => json(&aut::code_aut_order(*l, c.q, c.n)?),
        Command::Falsify { rho, samples } => cmd_falsify(c, *rho, *samples),
    }
}

#[derive(Serialize)]
struct Listed {
    value: u64,
    decomposition: String,
}

pub fn cmd_semigroup(c: &RunConfig, max: u64) -> Result<String, CliError> {
    let fam = OnePointFamily::new(c.q, c.n, c.point.into())?;
    let sg = &fam.semigroup;
    let q2 = if c.q == 2 { Some(Q2::new(c.n)?) } else { None };
    let lsets = match c.point {
        PointArg::P0 => Some(pzero::build_lsets(c.q, c.n)?),
        PointArg::Infinity => None,
    };
    let two_g = 2 * sg.genus();
    let rows: Vec<Listed> = sg
        .elements_upto(max)
        .into_iter()
        .map(|v| {
            let decomposition = match (&lsets, &q2) {
                (Some(ls), _) if v < two_g => ls
                    .sets
                    .iter()
                    .position(|s| s.contains(&(v as i64)))
                    .map(|i| format!("L{}", i + 1))
                    .unwrap_or_default(),
                (Some(_), _) => ">=2g".to_string(),
                (None, Some(q2)) => q2.triple_of(v).map(|t| t.to_string()).unwrap_or_default(),
                (None, None) => String::new(),
            };
            Listed { value: v, decomposition }
        })
        .collect();
    match c.format {
        Format::Json => json(&serde_json::json!({
            "q": c.q,
            "n": c.n,
            "point": format!("{:?}", c.point),
            "genus": sg.genus(),
            "conductor": sg.conductor(),
            "elements": rows,
        })),
        Format::Csv => {
            let mut out = String::from("value,decomposition\n");
            for r in rows {
                writeln!(out, "{},\"{}\"", r.value, r.decomposition).unwrap();
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct NuRow {
    l: u64,
    rho_next: u64,
    nu: u64,
}

pub fn cmd_nu(c: &RunConfig, r: &Range) -> Result<String, CliError> {
    let fam = OnePointFamily::new(c.q, c.n, c.point.into())?;
    let sg = &fam.semigroup;
    let mut rows = Vec::new();
    for l in r.lmin.max(1)..=r.lmax {
        rows.push(NuRow {
            l,
            rho_next: sg.rho(l + 1).map_err(AgError::from)?,
            nu: sg.nu(l),
        });
    }
    match c.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = String::from("l,rho_next,nu\n");
            for x in rows {
                writeln!(out, "{},{},{}", x.l, x.rho_next, x.nu).unwrap();
            }
            Ok(out)
        }
    }
}

#[derive(Serialize)]
struct DordRow {
    l: u64,
    rho_next: u64,
    nu: u64,
    d_ord: u64,
    closed: Option<u64>,
    case: Option<String>,
}

pub fn cmd_dord(c: &RunConfig, r: &Range) -> Result<String, CliError> {
    let fam = OnePointFamily::new(c.q, c.n, c.point.into())?;
    let sg = &fam.semigroup;
    let use_closed = c.q == 2 && c.n >= 5 && c.point == PointArg::Infinity;
    let lmin = r.lmin.max(1);
    let dords = sg.dord_range(lmin, r.lmax);
    let mut rows = Vec::new();
    for (l, &d_ord) in (lmin..=r.lmax).zip(&dords) {
        let rho_next = sg.rho(l + 1).map_err(AgError::from)?;
        let (closed, case) = if use_closed {
            match qtwo::dord_closed(rho_next, c.n, DordOptions::default())? {
                DordClosed::Value { value, case } => (Some(value), Some(format!("{case:?}"))),
                DordClosed::Unresolved => (None, None),
            }
        } else {
            (None, None)
        };
        rows.push(DordRow {
            l,
            rho_next,
            nu: sg.nu(l),
            d_ord,
            closed,
            case,
        });
    }
    match c.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut out = String::from("l,rho_next,nu,d_ord,closed,case\n");
            for x in rows {
                let closed = x.closed.map(|v| v.to_string()).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    x.l,
                    x.rho_next,
                    x.nu,
                    x.d_ord,
                    closed,
                    x.case.unwrap_or_default()
                )
                .unwrap();
            }
            Ok(out)
        }
    }
}

pub fn cmd_table(c: &RunConfig, r: &Range, compare: bool) -> Result<String, CliError> {
    if compare {
        if (c.q, c.n) != (2, 5) {
            return Err(CliError::Usage("--compare is available for --q 2 --n 5 only".into()));
        }
        let inf = OnePointFamily::new(2, 5, Place::Infinity)?;
        let p0 = OnePointFamily::new(2, 5, Place::P0)?;
        let pairs: Vec<(u64, u64)> = agcode::COMPARISON_Q2_N5
            .iter()
            .filter(|&&(l0, _, _)| (r.lmin..=r.lmax).contains(&l0))
            .map(|&(l0, linf, _)| (l0, linf))
            .collect();
        let rows = agcode::compare(&inf, &p0, &pairs)?;
        return match c.format {
            Format::Json => json(&rows),
            Format::Csv => Ok(agcode::comparison_csv(&rows)),
        };
    }
    let fam = OnePointFamily::new(c.q, c.n, c.point.into())?;
    let rows = fam.table(r.lmin, r.lmax, DordSource::Oracle)?;
    match c.format {
        Format::Json => json(&rows),
        Format::Csv => Ok(agcode::table_csv(&rows)),
    }
}

fn required(v: Option<u64>, name: &str) -> Result<u64, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("--{name} is required for this family")))
}

pub fn cmd_quantum(
    c: &RunConfig,
    family: QuantumFamily,
    a: Option<u64>,
    b: Option<u64>,
    l: Option<u64>,
    s: u64,
) -> Result<String, CliError> {
    match family {
        QuantumFamily::TwoPoint => json(&derived::css_two_point(required(a, "a")?, required(b, "b")?, c.q, c.n)?),
        QuantumFamily::T1 => json(&derived::css_family_t1(required(l, "l")?, s, c.q, c.n)?),
        QuantumFamily::T1Max => json(&derived::css_family_t1_max(c.q, c.n)?),
        QuantumFamily::Improved => {
            if c.q != 2 {
                return Err(CliError::Hypothesis("css_improved: q = 2".into()));
            }
            json(&derived::css_improved(required(l, "l")?, s, c.n)?)
        }
    }
}

pub fn cmd_conv(c: &RunConfig, rho: u64, s: u64) -> Result<String, CliError> {
    let fam = OnePointFamily::new(c.q, c.n, Place::Infinity)?;
    json(&derived::conv_params(rho, s, &fam, DordSource::Oracle)?)
}

pub fn cmd_orbits(c: &RunConfig) -> Result<String, CliError> {
    let curve = Curve::new(c.q, c.n)?;
    let points = curve.enumerate_points()?;
    let mut gens = aut::q_group(&curve)?;
    gens.push(aut::sigma_generator(&curve)?);
    json(&aut::orbits(&curve, &points, &gens)?)
}

pub fn cmd_falsify(c: &RunConfig, rho: u64, samples: usize) -> Result<String, CliError> {
    let curve = Curve::new(c.q, c.n)?;
    let points = curve.enumerate_points()?;
    let code = agcode::build_code(&curve, &points, rho)?;
    json(&agcode::weight_falsification(curve.field(), &code, samples, c.seed))
}
