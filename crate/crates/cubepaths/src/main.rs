//! Thin command-line front end over the library: graph generation, block
//! decomposition, path/cycle construction, exact search, peeling and the
//! experiment runner.
//!
//! Exit codes: 0 when all requested bounds are met, 2 on a certificate
//! failure, 3 on I/O or configuration errors.

use clap::{Parser, Subcommand};
use cubepaths::constructor::{self, Mode, Options};
use cubepaths::decompose;
use cubepaths::host::{build_host, CubeVertex, HostSpec};
use cubepaths::lab::{self, ExperimentConfig};
use cubepaths::oracle;
use cubepaths::subgraph::GraphJson;
use cubepaths::SubgraphView;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cubepaths", version, about = "Long paths and cycles in subgraphs of product graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a generated graph as JSON.
    Gen {
        /// Generator: subcube | gprime | random | full
        #[arg(long)]
        kind: String,
        /// Host spec as JSON (for random/full), e.g. {"kind":"hypercube","n":5,"split_loss_k":1}
        #[arg(long)]
        host: Option<String>,
        /// Hypercube dimension for subcube generation.
        #[arg(long)]
        n: Option<usize>,
        /// Subcube dimension / gprime degree parameter.
        #[arg(long)]
        d: Option<u32>,
        /// Target size for random generation.
        #[arg(long, default_value_t = 20)]
        size: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Block-cutvertex decomposition; optionally a DOT rendering.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Construct a long path certificate.
    Longpath {
        #[arg(long)]
        graph: PathBuf,
        /// Endpoint as a JSON vertex (integer for hypercubes, array otherwise).
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long)]
        d: u32,
        /// weak | tight | general
        #[arg(long, default_value = "tight")]
        mode: String,
        /// Split cost for general mode (defaults to the host's).
        #[arg(long)]
        k: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        oracle_threshold: usize,
    },
    /// Construct a long cycle certificate.
    Longcycle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        d: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact longest path / cycle search.
    Oracle {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        a: Option<String>,
        #[arg(long)]
        b: Option<String>,
        #[arg(long, default_value_t = false)]
        cycle: bool,
        #[arg(long, default_value_t = 10_000_000)]
        budget: u64,
    },
    /// Peel to minimum degree at a rational threshold like 5/2.
    Peel {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        threshold: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a seeded experiment from a JSON config; writes CSV plus a JSON
    /// mirror next to it.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read_graph(path: &PathBuf) -> Result<SubgraphView, cubepaths::Error> {
    let text = std::fs::read_to_string(path)?;
    let js: GraphJson = serde_json::from_str(&text)?;
    js.into_view()
}

fn parse_vertex(s: &str) -> Result<CubeVertex, cubepaths::Error> {
    serde_json::from_str(s).map_err(cubepaths::Error::from)
}

fn write_out(path: &Option<PathBuf>, content: &str) -> Result<(), cubepaths::Error> {
    match path {
        Some(p) => {
            std::fs::write(p, content)?;
            Ok(())
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
    }
}

fn parse_ratio(s: &str) -> Result<num_rational::Ratio<i64>, cubepaths::Error> {
    let parts: Vec<&str> = s.split('/').collect();
    let bad = || cubepaths::Error::InvalidArgument(format!("bad threshold {s}"));
    match parts.as_slice() {
        [n] => n.parse().map(num_rational::Ratio::from_integer).map_err(|_| bad()),
        [n, d] => {
            let n: i64 = n.parse().map_err(|_| bad())?;
            let d: i64 = d.parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(num_rational::Ratio::new(n, d))
        }
        _ => Err(bad()),
    }
}

/// Exit code semantics: certificate failures are distinct from I/O trouble.
enum Outcome {
    Ok,
    CertificateFailure(String),
}

fn run(cli: Cli) -> Result<Outcome, cubepaths::Error> {
    match cli.cmd {
        Cmd::Gen {
            kind,
            host,
            n,
            d,
            size,
            seed,
            out,
        } => {
            let view = match kind.as_str() {
                "subcube" => {
                    let n = n.kor("gen subcube needs --n")?;
                    let dim = d.kor("gen subcube needs --d")? as usize;
                    use rand::{Rng, SeedableRng};
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
                    let mut axes: Vec<usize> = (0..n).collect();
                    for i in (1..n).rev() {
                        let j = rng.gen_range(0..=i);
                        axes.swap(i, j);
                    }
                    axes.truncate(dim);
                    axes.sort_unstable();
                    let base = rng.gen_range(0..(1u64 << n));
                    lab::gen_subcube(n, dim, base, &axes)?
                }
                "gprime" => lab::gen_gprime(d.kor("gen gprime needs --d")?)?.0,
                "random" => {
                    let spec: HostSpec =
                        serde_json::from_str(&host.kor("gen random needs --host")?)?;
                    let host = build_host(spec)?;
                    lab::gen_random_mindeg(&host, d.kor("gen random needs --d")?, size, seed)?
                }
                "full" => {
                    let spec: HostSpec =
                        serde_json::from_str(&host.kor("gen full needs --host")?)?;
                    let host = build_host(spec)?;
                    let verts = host.enumerate_vertices(1 << 20)?;
                    SubgraphView::induced(host, verts)?
                }
                other => {
                    return Err(cubepaths::Error::InvalidArgument(format!(
                        "unknown generator {other}"
                    )))
                }
            };
            let json = serde_json::to_string_pretty(&view.to_json())?;
            write_out(&out, &(json + "\n"))?;
            Ok(Outcome::Ok)
        }
        Cmd::Decompose { graph, dot } => {
            let g = read_graph(&graph)?;
            let forest = decompose::block_cut_tree(&g);
            if let Some(p) = dot {
                std::fs::write(p, forest.to_dot(&g))?;
            }
            let records = decompose::block_records(&g, &forest);
            let cuts: Vec<&CubeVertex> = forest.cutvertices.iter().map(|&i| g.vertex(i)).collect();
            let mut text = String::new();
            for (i, r) in records.iter().enumerate() {
                let kind = if r.is_bridge { "bridge" } else { "block" };
                let members: Vec<String> = r.verts.iter().map(|v| v.to_string()).collect();
                text.push_str(&format!("{kind} B{i}: {}\n", members.join(" ")));
            }
            let cut_names: Vec<String> = cuts.iter().map(|v| v.to_string()).collect();
            text.push_str(&format!("cutvertices: {}\n", cut_names.join(" ")));
            text.push_str(&format!(
                "connected: {} biconnected: {}\n",
                forest.connected,
                forest.is_biconnected()
            ));
            print!("{text}");
            Ok(Outcome::Ok)
        }
        Cmd::Longpath {
            graph,
            a,
            b,
            d,
            mode,
            k,
            out,
            oracle_threshold,
        } => {
            let g = read_graph(&graph)?;
            let opts = Options {
                oracle_threshold,
                ..Options::default()
            };
            let cert = match (a, b) {
                (Some(a), Some(b)) => {
                    let a = parse_vertex(&a)?;
                    let b = parse_vertex(&b)?;
                    match mode.as_str() {
                        "weak" => constructor::find_ab_path(&g, &a, &b, d, Mode::Weak, &opts)?,
                        "tight" => constructor::find_ab_path(&g, &a, &b, d, Mode::Tight, &opts)?,
                        "general" => {
                            let k = k.unwrap_or_else(|| g.host().split_loss());
                            constructor::find_long_path_general(&g, &a, &b, d, k, &opts)?
                        }
                        other => {
                            return Err(cubepaths::Error::InvalidArgument(format!(
                                "unknown mode {other}"
                            )))
                        }
                    }
                }
                (None, None) => constructor::find_long_path_min_degree(&g, d, &opts)?,
                _ => {
                    return Err(cubepaths::Error::InvalidArgument(
                        "provide both --a and --b or neither".into(),
                    ))
                }
            };
            let report = oracle::validate_certificate(&g, &cert);
            let json = serde_json::to_string_pretty(&cert)?;
            write_out(&out, &(json + "\n"))?;
            eprintln!(
                "length {} bound {} valid {} bound_met {}",
                report.length, cert.claimed_bound, report.valid, report.bound_met
            );
            if report.valid && report.bound_met {
                Ok(Outcome::Ok)
            } else {
                Ok(Outcome::CertificateFailure(format!("{:?}", report.failures)))
            }
        }
        Cmd::Longcycle { graph, d, out } => {
            let g = read_graph(&graph)?;
            let cert = constructor::find_long_cycle(&g, d, &Options::default())?;
            let report = oracle::validate_cycle_certificate(&g, &cert);
            let json = serde_json::to_string_pretty(&cert)?;
            write_out(&out, &(json + "\n"))?;
            eprintln!(
                "cycle length {} bound {} valid {}",
                report.length, cert.claimed_bound, report.valid
            );
            if report.valid && report.bound_met {
                Ok(Outcome::Ok)
            } else {
                Ok(Outcome::CertificateFailure(format!("{:?}", report.failures)))
            }
        }
        Cmd::Oracle {
            graph,
            a,
            b,
            cycle,
            budget,
        } => {
            let g = read_graph(&graph)?;
            let r = match (a, b, cycle) {
                (Some(a), Some(b), false) => {
                    oracle::longest_path_between(&g, &parse_vertex(&a)?, &parse_vertex(&b)?, budget)?
                }
                (None, None, false) => oracle::longest_path(&g, budget)?,
                (None, None, true) => oracle::longest_cycle(&g, budget)?,
                _ => {
                    return Err(cubepaths::Error::InvalidArgument(
                        "use --a/--b for paths or --cycle alone".into(),
                    ))
                }
            };
            println!("{}", serde_json::to_string_pretty(&r)?);
            Ok(Outcome::Ok)
        }
        Cmd::Peel {
            graph,
            threshold,
            out,
        } => {
            let g = read_graph(&graph)?;
            let t = parse_ratio(&threshold)?;
            let peeled = oracle::dcore_peel(&g, t);
            let json = serde_json::to_string_pretty(&peeled.to_json())?;
            write_out(&out, &(json + "\n"))?;
            eprintln!("kept {} of {} vertices", peeled.n(), g.n());
            Ok(Outcome::Ok)
        }
        Cmd::Experiment { config, seed, out } => {
            let text = std::fs::read_to_string(&config)?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let result = lab::run_experiment(&cfg)?;
            let csv_path = out.unwrap_or_else(|| PathBuf::from("experiment.csv"));
            let file = std::fs::File::create(&csv_path)?;
            lab::write_csv(&result, file)?;
            let json_path = csv_path.with_extension("json");
            std::fs::write(&json_path, serde_json::to_string_pretty(&result)?)?;
            eprintln!(
                "{} rows ({} nonempty), fallbacks {}, bounds all met: {}",
                result.summary.rows,
                result.summary.nonempty,
                result.summary.fallback_count,
                result.summary.bound_met_all
            );
            if result.summary.bound_met_all {
                Ok(Outcome::Ok)
            } else {
                Ok(Outcome::CertificateFailure("some rows missed their bound".into()))
            }
        }
    }
}

/// Small helper: `Option` to error with a message.
trait Kor<T> {
    fn kor(self, msg: &str) -> Result<T, cubepaths::Error>;
}

impl<T> Kor<T> for Option<T> {
    fn kor(self, msg: &str) -> Result<T, cubepaths::Error> {
        self.ok_or_else(|| cubepaths::Error::InvalidArgument(msg.into()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::from(0),
        Ok(Outcome::CertificateFailure(msg)) => {
            eprintln!("certificate failure: {msg}");
            ExitCode::from(2)
        }
        Err(e @ (cubepaths::Error::ConstructionGap(_) | cubepaths::Error::Precondition(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}
