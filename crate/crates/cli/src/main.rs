//! Command-line front end: orbit listings, dimensions, Kostka–Foulkes
//! polynomials, stalk queries, singular-locus reports with optional DOT
//! export, the fixed-point check at the origin, the Springer block listing,
//! the self-test battery, and cache management.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 invalid mathematical
//! input, 3 internal validation failure.

mod dot;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use nilrat_core::cache::{Cache, CacheChoice};
use nilrat_core::engine::{Engine, EngineOptions, Limits};
use nilrat_core::orbits::{self, Algebra, ClassicalOrbit, Family, G2Orbit, OrbitLabel};
use nilrat_core::{kostka, ratsmooth, selfcheck, springer, Error, Partition};

#[derive(Parser)]
#[command(
    name = "nilrat",
    version,
    about = "Rational singular loci of nilpotent orbit closures in classical Lie algebras",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct AlgebraArgs {
    /// Family: A, B, C, D or G2
    #[arg(long = "type", value_name = "FAMILY")]
    family: String,
    /// Rank (ignored for G2)
    #[arg(long, default_value_t = 2)]
    rank: u32,
    /// Override the per-family rank bounds
    #[arg(long, value_name = "RANK")]
    max_rank: Option<u32>,
}

impl AlgebraArgs {
    fn algebra(&self) -> Result<Algebra, Error> {
        let family: Family = self.family.parse()?;
        Algebra::new(family, if family == Family::G2 { 2 } else { self.rank })
    }

    fn engine(&self) -> Engine {
        engine_with(self.max_rank)
    }
}

fn engine_with(max_rank: Option<u32>) -> Engine {
    let limits = max_rank.map_or_else(Limits::default, Limits::uniform);
    Engine::new(EngineOptions {
        limits,
        ..EngineOptions::default()
    })
}

#[derive(Subcommand)]
enum Command {
    /// List all nilpotent orbit labels with their dimensions
    Orbits {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        json: bool,
    },
    /// Dimension of one orbit
    Dim {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Orbit label ("3,3", "4,4:I", or a G2 label like "A1")
        #[arg(long)]
        orbit: String,
        #[arg(long)]
        json: bool,
    },
    /// Kostka-Foulkes polynomial K_{lambda,mu}(q)
    Kf {
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        json: bool,
    },
    /// Normalized stalk polynomial of the closure of lambda at mu
    Stalk {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        lambda: String,
        #[arg(long)]
        mu: String,
        #[arg(long)]
        json: bool,
    },
    /// Rational singular locus report for an orbit closure
    Ratsing {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        orbit: String,
        #[arg(long)]
        json: bool,
        /// Write the closure Hasse diagram below the orbit as a DOT file
        #[arg(long, value_name = "PATH")]
        dot: Option<std::path::PathBuf>,
    },
    /// Fixed-point dimension count at the origin (necessary condition)
    Brion0 {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        orbit: String,
        #[arg(long)]
        json: bool,
    },
    /// Springer correspondence block listing
    Springer {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        json: bool,
    },
    /// Run the verification battery
    Selftest {
        #[arg(long, value_name = "RANK")]
        max_rank: Option<u32>,
    },
    /// Remove cached tables and factorizations
    CacheClear,
}

fn parse_orbit(alg: Algebra, s: &str) -> Result<OrbitLabel, Error> {
    if alg.family() == Family::G2 {
        return Ok(OrbitLabel::G2(G2Orbit::from_name(s)?));
    }
    let label: ClassicalOrbit = s.parse()?;
    orbits::check_label(alg, &label)?;
    Ok(OrbitLabel::Classical(label))
}

fn parse_classical(alg: Algebra, s: &str) -> Result<ClassicalOrbit, Error> {
    match parse_orbit(alg, s)? {
        OrbitLabel::Classical(c) => Ok(c),
        OrbitLabel::G2(_) => Err(Error::Unsupported {
            family: "G2",
            operation: "stalk computations",
        }),
    }
}

fn print_json<T: Serialize>(value: &T) {
    println!(
        "{}",
        serde_json::to_string(value).expect("serializable report")
    );
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Orbits { alg, json } => {
            let a = alg.algebra()?;
            if a.family() == Family::G2 {
                let rows: Vec<(String, u64)> = G2Orbit::ALL
                    .iter()
                    .rev()
                    .map(|g| (g.to_string(), g.dimension()))
                    .collect();
                emit_orbit_rows(&rows, json);
                return Ok(());
            }
            let labels = orbits::valid_partitions(a)?;
            let rows: Vec<(String, u64)> = labels
                .iter()
                .map(|o| {
                    let d = orbits::orbit_dimension(a, &OrbitLabel::Classical(o.clone()))
                        .expect("valid label");
                    (o.to_string(), d)
                })
                .collect();
            emit_orbit_rows(&rows, json);
        }
        Command::Dim { alg, orbit, json } => {
            let a = alg.algebra()?;
            let label = parse_orbit(a, &orbit)?;
            let d = orbits::orbit_dimension(a, &label)?;
            if json {
                #[derive(Serialize)]
                #[serde(rename_all = "camelCase")]
                struct DimReport {
                    algebra: String,
                    orbit: String,
                    dim: u64,
                }
                print_json(&DimReport {
                    algebra: a.to_string(),
                    orbit: label.to_string(),
                    dim: d,
                });
            } else {
                println!("{d}");
            }
        }
        Command::Kf { lambda, mu, json } => {
            let lam: Partition = lambda.parse()?;
            let m: Partition = mu.parse()?;
            let k = kostka::kostka_foulkes(&lam, &m)?;
            if json {
                #[derive(Serialize)]
                #[serde(rename_all = "camelCase")]
                struct KfReport {
                    lambda: String,
                    mu: String,
                    polynomial: String,
                    coefficients: Vec<String>,
                }
                print_json(&KfReport {
                    lambda: lam.to_string(),
                    mu: m.to_string(),
                    polynomial: k.to_string(),
                    coefficients: k
                        .dense_coeffs()?
                        .iter()
                        .map(|c| c.to_string())
                        .collect(),
                });
            } else {
                println!("{k}");
            }
        }
        Command::Stalk {
            alg,
            lambda,
            mu,
            json,
        } => {
            let a = alg.algebra()?;
            let engine = alg.engine();
            let lam = parse_classical(a, &lambda)?;
            let m = parse_classical(a, &mu)?;
            let stalk = ratsmooth::stalk_poincare(&engine, a, &lam, &m)?;
            let trivial = stalk.is_one();
            let smooth = ratsmooth::rationally_smooth_at(&engine, a, &lam, &m)?;
            if json {
                #[derive(Serialize)]
                #[serde(rename_all = "camelCase")]
                struct StalkQuery {
                    algebra: String,
                    lambda: String,
                    mu: String,
                    stalk: String,
                    trivial: bool,
                    rationally_smooth: bool,
                }
                print_json(&StalkQuery {
                    algebra: a.to_string(),
                    lambda: lam.to_string(),
                    mu: m.to_string(),
                    stalk: stalk.to_string(),
                    trivial,
                    rationally_smooth: smooth,
                });
            } else {
                println!("stalk: {stalk}");
                println!("trivial: {trivial}");
                println!("rationally smooth at {m}: {smooth}");
            }
        }
        Command::Ratsing {
            alg,
            orbit,
            json,
            dot,
        } => {
            let a = alg.algebra()?;
            let engine = alg.engine();
            let lam = parse_classical(a, &orbit)?;
            let locus = ratsmooth::rational_singular_locus(&engine, a, &lam)?;
            if let Some(path) = &dot {
                dot::export_dot(&locus, path)?;
            }
            if json {
                print_json(&locus.to_report());
            } else {
                println!("algebra: {a}");
                println!("orbit: {lam}");
                for (mu, d, stalk, trivial, smooth) in &locus.entries {
                    println!(
                        "  {:<16} dim {d:<3} stalk {stalk}{}{}",
                        mu.to_string(),
                        if *trivial { "" } else { "  [non-trivial]" },
                        if *smooth { "" } else { "  [in locus]" }
                    );
                }
                let max: Vec<String> = locus
                    .rat_sing_maximal
                    .iter()
                    .map(|o| o.to_string())
                    .collect();
                if max.is_empty() {
                    println!("rationally smooth everywhere");
                } else {
                    println!("rational singular locus: union of closures of {}", max.join(", "));
                    if let Some(d) = locus.locus_dimension() {
                        println!("locus dimension: {d}");
                    }
                }
            }
        }
        Command::Brion0 { alg, orbit, json } => {
            let a = alg.algebra()?;
            let label = parse_orbit(a, &orbit)?;
            let report = ratsmooth::brion_zero_check(a, &label)?;
            if json {
                print_json(&report);
            } else {
                println!(
                    "dim X = {}, fixed-point sum = {}, necessary condition {}",
                    report.dim_x,
                    report.brion_sum,
                    if report.passes { "passes" } else { "fails" }
                );
            }
        }
        Command::Springer { alg, json } => {
            let a = alg.algebra()?;
            let engine = alg.engine();
            let solved = engine.solved(a)?;
            if json {
                #[derive(Serialize)]
                #[serde(rename_all = "camelCase")]
                struct BlockReport {
                    orbit: String,
                    dim: u64,
                    shift: u64,
                    members: Vec<String>,
                }
                let blocks: Vec<BlockReport> = solved
                    .map
                    .blocks()
                    .iter()
                    .map(|b| BlockReport {
                        orbit: b.orbit.to_string(),
                        dim: b.dim,
                        shift: b.a_value,
                        members: springer::block_member_labels(&solved.table, b)
                            .iter()
                            .map(|l| l.to_string())
                            .collect(),
                    })
                    .collect();
                print_json(&blocks);
            } else {
                for b in solved.map.blocks() {
                    let members: Vec<String> = springer::block_member_labels(&solved.table, b)
                        .iter()
                        .map(|l| l.to_string())
                        .collect();
                    println!(
                        "{:<16} dim {:<3} shift {:<3} {}",
                        b.orbit.to_string(),
                        b.dim,
                        b.a_value,
                        members.join("  ")
                    );
                }
            }
        }
        Command::Selftest { max_rank } => {
            let engine = engine_with(max_rank);
            let outcomes = selfcheck::run_all(&engine, max_rank);
            let (report, ok) = selfcheck::format_outcomes(&outcomes);
            print!("{report}");
            if !ok {
                return Err(Error::Internal("selftest failed".into()));
            }
            println!("all {} checks passed", outcomes.len());
        }
        Command::CacheClear => {
            let cache = Cache::new(CacheChoice::EnvOrDefault);
            let removed = cache.clear()?;
            println!(
                "removed {removed} cache file(s) from {}",
                cache
                    .dir()
                    .map(|d| d.display().to_string())
                    .unwrap_or_default()
            );
        }
    }
    Ok(())
}

fn emit_orbit_rows(rows: &[(String, u64)], json: bool) {
    if json {
        #[derive(Serialize)]
        struct Row {
            orbit: String,
            dim: u64,
        }
        let rows: Vec<Row> = rows
            .iter()
            .map(|(o, d)| Row {
                orbit: o.clone(),
                dim: *d,
            })
            .collect();
        print_json(&rows);
    } else {
        for (o, d) in rows {
            println!("{o:<20} dim {d}");
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version requests are successes
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            let code = if e.is_invalid_input() {
                2
            } else if e.is_internal() {
                3
            } else {
                1
            };
            ExitCode::from(code)
        }
    }
}
