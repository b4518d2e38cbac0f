//! Command-line surface: defect and multiplicity queries plus the census
//! drivers, with text, JSON, and CSV output.
//!
//! Exit codes: 0 success, 1 invalid input, 2 unsupported field
//! (real quadratic with positive p-class rank), 3 internal invariant
//! violation.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ringspaces::cache::Cache;
use ringspaces::census::{self, CensusReport};
use ringspaces::error::Error;
use ringspaces::multiplicity::admissibility;
use ringspaces::ringspace::{formal_divisors, selmer_basis};
use serde_json::json;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "ringspaces",
    version,
    about = "Count dihedral fields over quadratic base fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Common {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Cache file (overrides RINGSPACES_CACHE)
    #[arg(long)]
    cache: Option<PathBuf>,

    /// Worker threads for scans (0 = rayon default)
    #[arg(long, default_value_t = 0)]
    workers: usize,

    /// Write the result to a file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// p-defect of a conductor: delta_p(c), per-divisor defects, dimensions
    Defect {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        c: u64,
        #[command(flatten)]
        common: Common,
    },
    /// p-multiplicity m_p(d, c) with its full breakdown
    Multiplicity {
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        c: u64,
        /// Also evaluate the general divisor sum and assert agreement
        #[arg(long)]
        verify: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Batch scans reproducing the statistical tables
    Census {
        #[command(subcommand)]
        scan: Scan,
    },
}

#[derive(Subcommand, Debug)]
enum Scan {
    /// Frequency of p-class ranks over a discriminant range
    RankFrequencies {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = -100_000, allow_hyphen_values = true)]
        min: i64,
        #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
        max: i64,
        /// Allow scans past the scaled default range
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Minimal |d| with a given p-class rank
    Minimal {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        rho: u32,
        /// Search positive discriminants (unsupported, reported as such)
        #[arg(long)]
        positive: bool,
        #[arg(long, default_value_t = 20_000_000)]
        bound: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Multiplet counts with root discriminant bound c^2 |d| < B
    Multiplets {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 10_000)]
        bound: u64,
        /// Allow the full-size bound (10^6); scans may take minutes
        #[arg(long)]
        full: bool,
        #[command(flatten)]
        common: Common,
    },
    /// First occurrence of free prime conductors 2 <= c <= 13 for rho_3 = 1
    FirstFree {
        #[arg(long, default_value_t = 3)]
        p: u32,
        #[arg(long, default_value_t = -100_000, allow_hyphen_values = true)]
        floor: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Survey of the irregular conductor c = 9 over listed discriminants
    Irregular {
        /// File with one discriminant per line; defaults to the survey list
        #[arg(long)]
        input: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap help/version are successes, everything else is input error
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnsupportedField { .. } => 2,
        Error::Invariant(_) => 3,
        _ => 1,
    }
}

fn open_cache(common: &Common) -> Result<Cache, Error> {
    let path = common
        .cache
        .clone()
        .or_else(|| std::env::var_os("RINGSPACES_CACHE").map(PathBuf::from));
    match path {
        Some(p) => Cache::open(p),
        None => Ok(Cache::in_memory()),
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Defect { d, p, c, common } => defect_cmd(d, p, c, &common),
        Command::Multiplicity {
            d,
            p,
            c,
            verify,
            common,
        } => multiplicity_cmd(d, p, c, verify, &common),
        Command::Census { scan } => census_cmd(scan),
    }
}

fn basis_for(d: i64, p: u32, common: &Common) -> Result<ringspaces::ringspace::SelmerBasis, Error> {
    let path = common
        .cache
        .clone()
        .or_else(|| std::env::var_os("RINGSPACES_CACHE").map(PathBuf::from));
    match path {
        Some(p_) => {
            let cache = Cache::open(p_)?;
            ringspaces::ringspace::selmer_basis_cached(d, p, &cache)
        }
        None => selmer_basis(d, p),
    }
}

fn defect_cmd(d: i64, p: u32, c: u64, common: &Common) -> Result<(), Error> {
    let profile = admissibility(d, p, c)?;
    let rc = ringspaces::residues::rank_counters(d, c, p);
    let basis = basis_for(d, p, common)?;
    let space = basis.ring_space(c)?;
    let delta = space.codim();
    let divisors = formal_divisors(c, p);
    let mut per_divisor = Vec::new();
    for &q in &divisors {
        per_divisor.push((q, basis.defect(q)?));
    }
    match common.format {
        Format::Json => {
            let obj = json!({
                "d": d,
                "p": p,
                "c": c,
                "admissible": profile.admissible,
                "irregular": profile.irregular,
                "rho": basis.rho,
                "sigma": basis.sigma,
                "t": rc.t,
                "w": rc.w,
                "delta": delta,
                "dim": space.dim(),
                "per_divisor": per_divisor
                    .iter()
                    .map(|(q, dl)| json!({"q": q, "delta": dl}))
                    .collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        }
        _ => {
            println!("d = {d}  p = {p}  c = {c}");
            println!(
                "admissible = {}{}",
                profile.admissible,
                if profile.irregular {
                    " (irregular)"
                } else {
                    ""
                }
            );
            println!("rho_{p} = {}  sigma_{p} = {}", basis.rho, basis.sigma);
            println!("t = {}  w = {}", rc.t, rc.w);
            println!("dim V_{p}({c}) = {}  delta_{p}({c}) = {delta}", space.dim());
            let parts: Vec<String> = per_divisor
                .iter()
                .map(|(q, dl)| format!("delta_{p}({q}) = {dl}"))
                .collect();
            if !parts.is_empty() {
                println!("per divisor: {}", parts.join(", "));
            }
        }
    }
    Ok(())
}

fn multiplicity_cmd(d: i64, p: u32, c: u64, verify: bool, common: &Common) -> Result<(), Error> {
    let b = if common.cache.is_some() || std::env::var_os("RINGSPACES_CACHE").is_some() {
        let profile = admissibility(d, p, c)?;
        let basis = basis_for(d, p, common)?;
        ringspaces::multiplicity::multiplicity_with(&profile, basis.rho, basis.sigma, Some(&basis))?
    } else {
        ringspaces::multiplicity::multiplicity(d, p, c)?
    };
    if verify && b.admissible {
        let general = ringspaces::multiplicity::general_multiplicity(d, p, c)?;
        if general != b.m {
            return Err(Error::Invariant(format!(
                "closed form m = {} disagrees with divisor sum {general}",
                b.m
            )));
        }
    }
    match common.format {
        Format::Json => {
            let obj = json!({
                "d": d,
                "p": p,
                "c": c,
                "m": b.m,
                "admissible": b.admissible,
                "irregular": b.irregular,
                "formula": b.formula.label(),
                "rho": b.rho,
                "sigma": b.sigma,
                "omega": b.omega,
                "tau": b.tau,
                "delta": b.delta,
                "delta3": b.delta3.map(|(a, b)| json!([a, b])),
                "u": b.u,
                "v": b.v,
                "occupations": b.occupations,
                "degenerate_n": b.degenerate_n,
                "unramified": b.unramified,
                "free": b.free,
                "restrictive": format!("{}", b.restrictive),
                "d_N": b.d_n.to_string(),
                "d_L": b.d_l.to_string(),
                "verified": verify,
            });
            println!("{}", serde_json::to_string_pretty(&obj).unwrap());
        }
        _ => {
            println!("m_{p}({d}, {c}) = {}", b.m);
            if !b.admissible {
                println!("inadmissible conductor (no such fields)");
                return Ok(());
            }
            println!(
                "formula = {}  delta = {}{}",
                b.formula.label(),
                b.delta,
                match b.delta3 {
                    Some((d3, d9)) => format!("  (delta_3(3), delta_3(9)) = ({d3}, {d9})"),
                    None => String::new(),
                }
            );
            println!(
                "trichotomy: U = {}  F = {}  R = {}",
                b.unramified, b.free, b.restrictive
            );
            println!(
                "counters: rho = {}  omega = {}  tau = {}  u = {}  v = {}{}",
                b.rho,
                b.omega,
                b.tau,
                b.u,
                b.v,
                if b.occupations.iter().any(|&n| n > 0) {
                    format!("  (n_i) = {:?}", b.occupations)
                } else {
                    String::new()
                }
            );
            println!("d_N = {}  d_L = {}", b.d_n, b.d_l);
            if verify {
                println!("verified against the general divisor sum");
            }
        }
    }
    Ok(())
}

fn emit(report: &CensusReport, common: &Common) -> Result<(), Error> {
    let text = match common.format {
        Format::Text => report.to_text(),
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        Format::Csv => report.to_csv(),
    };
    match &common.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn census_cmd(scan: Scan) -> Result<(), Error> {
    match scan {
        Scan::RankFrequencies {
            p,
            min,
            max,
            full,
            common,
        } => {
            if !full && min < -200_000 {
                return Err(Error::DimensionMismatch(format!(
                    "range below -200000 needs --full (got {min})"
                )));
            }
            let cache = open_cache(&common)?;
            let rep = census::rank_frequencies(p, min, max, &cache, common.workers)?;
            emit(&rep, &common)?;
        }
        Scan::Minimal {
            p,
            rho,
            positive,
            bound,
            common,
        } => {
            let (d, m) = census::minimal_discriminant(p, rho, !positive, bound)?;
            match common.format {
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&json!({
                        "p": p, "rho": rho, "d": d, "m": m
                    }))
                    .unwrap()
                ),
                _ => println!("p = {p}  rho = {rho}  d = {d}  m_p(d,1) = {m}"),
            }
        }
        Scan::Multiplets {
            p,
            bound,
            full,
            common,
        } => {
            if !full && bound > 100_000 {
                return Err(Error::DimensionMismatch(format!(
                    "bound {bound} needs --full"
                )));
            }
            let cache = open_cache(&common)?;
            let rep = census::multiplet_census(p, bound, &cache, common.workers)?;
            emit(&rep, &common)?;
        }
        Scan::FirstFree { p, floor, common } => {
            let rep = census::first_free_report(p, floor)?;
            emit(&rep, &common)?;
        }
        Scan::Irregular { input, common } => {
            let ds: Vec<i64> = match input {
                Some(path) => std::fs::read_to_string(path)?
                    .lines()
                    .filter(|l| !l.trim().is_empty())
                    .map(|l| {
                        l.trim()
                            .parse::<i64>()
                            .map_err(|e| Error::CacheFormat(format!("bad discriminant {l:?}: {e}")))
                    })
                    .collect::<Result<_, _>>()?,
                None => vec![
                    -3, -39, -255, -687, -3387, -8751, -42591, -128451, -2069688, 24, 69, 717,
                ],
            };
            let rep = census::irregular_survey(&ds)?;
            emit(&rep, &common)?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_structure() {
        Cli::command().debug_assert();
    }
}
