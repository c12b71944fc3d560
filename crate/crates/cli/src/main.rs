//! `pierce`: certified piercing from the command line.
//!
//! Exit codes: 0 ok, 1 verification failure or other internal error,
//! 2 unreadable or invalid input, 3 instance over a size limit.

use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use pierce_core::bodies::{ConvexBody, Family, FamilyKind};
use pierce_core::experiment::{self, ExperimentConfig};
use pierce_core::generators;
use pierce_core::geom::parse_scalar;
use pierce_core::io::{self, BaseFile, InstanceFile};
use pierce_core::pierce::{pierce, MethodChoice, PierceOptions};
use pierce_core::{oracle, svg, Error};

#[derive(Parser)]
#[command(name = "pierce", version, about = "Certified piercing of translates and homothets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pierce an instance and print a self-contained certificate.
    Pierce {
        input: PathBuf,
        #[arg(long, default_value = "auto")]
        method: MethodChoice,
        /// Replace the last cluster's points by the exact optimum.
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        refine: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Exact transversal and packing numbers of a small instance.
    Exact {
        input: PathBuf,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Write a generated instance.
    Gen {
        #[command(subcommand)]
        which: Gen,
        #[arg(long, short, global = true)]
        out: Option<PathBuf>,
    },
    /// Batch of random instances; every certificate is verified.
    Experiment {
        #[arg(long, default_value = "disk")]
        base: String,
        #[arg(long, value_enum, default_value = "translates")]
        kind: Kind,
        #[arg(long, default_value = "auto")]
        method: MethodChoice,
        /// `n`, `lo..hi` or `lo-hi`, inclusive.
        #[arg(long, default_value = "5..20")]
        n_range: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Compare exact union area with τ and ν on random translate families.
    Conjecture {
        /// Base body JSON, e.g. `{"type":"polygon","vertices":[…]}`, or an
        /// instance file whose base is used.
        #[arg(long, conflicts_with = "base")]
        body: Option<PathBuf>,
        #[arg(long)]
        base: Option<String>,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 10)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Append extremal records to this JSONL file.
        #[arg(long)]
        log: Option<PathBuf>,
    },
    /// Time the greedy method on many random unit disks or squares.
    Bench {
        #[arg(long, default_value_t = 100_000)]
        n: usize,
        #[arg(long, default_value = "disk")]
        base: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Check every member instead of a sample.
        #[arg(long)]
        full_verify: bool,
    },
    /// Re-verify a certificate file.
    Verify { certificate: PathBuf },
}

#[derive(Subcommand)]
enum Gen {
    /// Five unit squares whose intersection graph is a 5-cycle
    FiveCycle,
    /// Nine pairwise intersecting triangles that need three points
    NineTriangles {
        #[arg(long, default_value = "1/100")]
        epsilon: String,
    },
    /// n⁴ translates on the grid (i/n, j/n), 1 ≤ i, j ≤ n²
    Grid {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value = "disk")]
        base: String,
    },
    /// Seeded random translates or homothets
    Random {
        #[arg(long, default_value = "disk")]
        base: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, value_enum, default_value = "translates")]
        kind: Kind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Seeded pairwise intersecting translates
    Pairwise {
        #[arg(long, default_value = "hexagon")]
        base: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Copy, Clone, ValueEnum)]
enum Kind {
    Translates,
    Homothets,
}

impl From<Kind> for FamilyKind {
    fn from(k: Kind) -> FamilyKind {
        match k {
            Kind::Translates => FamilyKind::Translates,
            Kind::Homothets => FamilyKind::Homothets,
        }
    }
}

/// Marks a failed check so it maps to exit code 1.
#[derive(Debug)]
struct Rejected(String);

impl std::fmt::Display for Rejected {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Rejected {}

/// Input that could not be read maps to exit code 2.
#[derive(Debug)]
struct Unreadable(String);

impl std::fmt::Display for Unreadable {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Unreadable {}

fn exit_code(e: &anyhow::Error) -> u8 {
    if e.downcast_ref::<Unreadable>().is_some() {
        return 2;
    }
    match e.downcast_ref::<Error>() {
        Some(Error::TooLarge { .. }) => 3,
        Some(
            Error::Parse(_)
            | Error::InvalidFamily(_)
            | Error::DegenerateInput(_)
            | Error::UnsupportedBase { .. }
            | Error::NotCentrallySymmetric
            | Error::EpsilonTooLarge(_),
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).map_err(|e| anyhow!(Unreadable(format!("{}: {e}", path.display()))))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cmd: Command) -> anyhow::Result<()> {
    match cmd {
        Command::Pierce { input, method, refine, seed, svg: svg_out, out } => {
            let f = io::family_from_json(&read(&input)?)?;
            let cert = pierce(&f, &PierceOptions { method, refine, seed })?;
            let v = cert.verify(&f)?;
            if let Some(p) = svg_out {
                fs::write(&p, svg::render(&f, Some(&cert))?).with_context(|| format!("writing {}", p.display()))?;
            }
            emit(out.as_deref(), &io::certificate_to_json(&f, &cert))?;
            if !v.ok() {
                bail!(Rejected(format!("certificate failed verification: {v:?}")));
            }
            Ok(())
        }
        Command::Exact { input, out } => {
            let f = io::family_from_json(&read(&input)?)?;
            let r = oracle::solve(&f)?;
            emit(out.as_deref(), &serde_json::to_string_pretty(&r)?)
        }
        Command::Gen { which, out } => {
            let f = generate(which)?;
            emit(out.as_deref(), &io::family_to_json(&f))
        }
        Command::Experiment { base, kind, method, n_range, trials, seed, csv } => {
            let cfg = ExperimentConfig { base, kind: kind.into(), method, n_range: parse_range(&n_range)?, trials, seed };
            let rows = experiment::run_experiment(&cfg)?;
            if let Some(p) = csv {
                let mut w = ::csv::Writer::from_path(&p).with_context(|| format!("writing {}", p.display()))?;
                for r in &rows {
                    w.serialize(r)?;
                }
                w.flush()?;
            }
            println!("base\tkind\tmethod\tn\ttrials\tmax_ratio\tfactor\tmax_tau/nu");
            for s in experiment::summarize(&rows) {
                let tn = s.max_tau_over_nu.map_or("-".to_string(), |x| format!("{x:.3}"));
                println!(
                    "{}\t{}\t{}\t{}\t{}\t{:.3}\t{}\t{tn}",
                    s.base, s.kind, s.method, s.n, s.trials, s.max_ratio, s.factor
                );
            }
            Ok(())
        }
        Command::Conjecture { body, base, trials, n_max, seed, log } => {
            let base = match (body, base) {
                (Some(p), _) => read_body(&p)?,
                (None, Some(name)) => generators::named_base(&name, seed)?,
                (None, None) => generators::named_base("hexagon", seed)?,
            };
            let report = experiment::run_conjecture(&base, trials, n_max, seed)?;
            if let Some(p) = log {
                let mut file = OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&p)
                    .with_context(|| format!("opening {}", p.display()))?;
                for r in &report.extremal {
                    writeln!(file, "{}", serde_json::to_string(r)?)?;
                }
            }
            let summary = serde_json::json!({
                "trials": report.trials,
                "max_tau_slack": report.max_tau_slack,
                "min_nu_slack": report.min_nu_slack,
                "counterexamples": report.counterexamples.len(),
                "extremal_records": report.extremal.len(),
            });
            println!("{}", serde_json::to_string_pretty(&summary)?);
            Ok(())
        }
        Command::Bench { n, base, seed, full_verify } => {
            let (report, _) = experiment::run_bench(&base, n, seed, full_verify)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            if !report.verified {
                bail!(Rejected("benchmark certificate failed verification".into()));
            }
            Ok(())
        }
        Command::Verify { certificate } => {
            let (f, cert) = io::certificate_from_json(&read(&certificate)?)?;
            let v = cert.verify(&f)?;
            println!("{}", serde_json::to_string_pretty(&v)?);
            if !v.ok() {
                bail!(Rejected("certificate failed verification".into()));
            }
            Ok(())
        }
    }
}

fn generate(which: Gen) -> anyhow::Result<Family> {
    Ok(match which {
        Gen::FiveCycle => generators::five_square_cycle(),
        Gen::NineTriangles { epsilon } => generators::nine_triangles(&parse_scalar(&epsilon)?)?,
        Gen::Grid { n, base } => generators::grid_family(n, &generators::named_base(&base, 0)?)?,
        Gen::Random { base, n, kind, seed } => {
            experiment::experiment_family(&generators::named_base(&base, seed)?, kind.into(), n, seed)?
        }
        Gen::Pairwise { base, n, seed } => {
            generators::pairwise_intersecting_family(&generators::named_base(&base, seed)?, n, seed)?
        }
    })
}

/// A bare base object or an instance file.
fn read_body(path: &Path) -> anyhow::Result<ConvexBody> {
    let text = read(path)?;
    let base: BaseFile = match serde_json::from_str::<InstanceFile>(&text) {
        Ok(inst) => inst.base,
        Err(_) => serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?,
    };
    let origin = io::MemberFile { t: vec![parse_scalar("0")?; 2], s: parse_scalar("1")? };
    let probe = InstanceFile { base, kind: io::KindFile::Translates, members: vec![origin] };
    Ok(probe.to_family()?.base)
}

fn parse_range(s: &str) -> anyhow::Result<(usize, usize)> {
    let bad = || Error::Parse(format!("bad size range {s:?}"));
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| bad());
    let (lo, hi) = match s.split_once("..").or_else(|| s.split_once('-')) {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let n = num(s)?;
            (n, n)
        }
    };
    if lo == 0 || lo > hi {
        return Err(bad().into());
    }
    Ok((lo, hi))
}
