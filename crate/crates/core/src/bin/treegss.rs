//! Command-line front end.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treegss::gss::{result_json, GssInstance, GssSolver};
use treegss::harness::bench::{bench_grid, fit_slope, parse_sides, write_csv, BenchRow};
use treegss::harness::circuit::{CircuitSampler, CliffordCircuit};
use treegss::planar::{planar_solver, solve_planar_f2, solve_symmetric_f2, GridAlgo, SymmetricSystem};
use treegss::tableau::Basis;
use treegss::treedecomp::{is_planar, Graph, GraphJson};

#[derive(Parser)]
#[command(name = "treegss", version, about = "Graph state and planar Clifford circuit sampling")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample Pauli measurements of a graph state; one JSON result per line.
    Sample {
        /// Graph as {"n": .., "edges": [[u, v], ..]}.
        #[arg(long)]
        graph: PathBuf,
        /// One of X, Y, Z per vertex.
        #[arg(long)]
        bases: String,
        /// Postselected outcomes as {"vertex": bit, ..}.
        #[arg(long)]
        postselect: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        shots: usize,
    },
    /// Time one grid algorithm; writes CSV rows.
    Grid {
        #[arg(long)]
        side: usize,
        #[arg(long, default_value = "recursive")]
        algo: String,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Sample the output of a Clifford circuit given as JSON.
    Circuit {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        shots: usize,
    },
    /// Random solution of A x = b over GF(2), A symmetric with zero diagonal.
    Solve {
        #[arg(long)]
        matrix: PathBuf,
        /// A line of n bits.
        #[arg(long)]
        rhs: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Time the grid algorithms over a range of sides and fit slopes.
    Bench {
        /// `a:b:*k`, `a:b:+k` or a comma list.
        #[arg(long, default_value = "8:64:*2")]
        sides: String,
        /// `all` or a comma list of algorithm names.
        #[arg(long, default_value = "all")]
        algos: String,
        #[arg(long, default_value_t = 3)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn emit_csv(rows: &[BenchRow], path: &Option<PathBuf>) -> Result<()> {
    match path {
        Some(p) => write_csv(rows, fs::File::create(p).with_context(|| format!("creating {}", p.display()))?)?,
        None => write_csv(rows, io::stdout().lock())?,
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().cmd {
        Cmd::Sample { graph, bases, postselect, seed, shots } => {
            let gj: GraphJson = serde_json::from_str(&read(&graph)?).context("graph JSON")?;
            let graph = Graph::from_json(&gj)?;
            let mut post = BTreeMap::new();
            if let Some(p) = postselect {
                let raw: BTreeMap<String, u8> = serde_json::from_str(&read(&p)?).context("postselect JSON")?;
                for (k, v) in raw {
                    if v > 1 {
                        bail!("postselected outcome {v} is not a bit");
                    }
                    post.insert(k.parse::<usize>().context("postselect key")?, v == 1);
                }
            }
            let inst = GssInstance::new(graph, Basis::parse_list(&bases)?, post)?;
            let solver = if is_planar(&inst.graph) { planar_solver(inst)? } else { GssSolver::new(inst, None)? };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = io::stdout().lock();
            for _ in 0..shots {
                writeln!(out, "{}", result_json(&solver.sample(&mut rng)?))?;
            }
        }
        Cmd::Grid { side, algo, trials, seed, csv } => {
            let algo: GridAlgo = algo.parse()?;
            emit_csv(&bench_grid(&[side], &[algo], trials, seed), &csv)?;
        }
        Cmd::Circuit { file, seed, shots } => {
            let c = CliffordCircuit::from_json(&read(&file)?)?;
            let sampler = CircuitSampler::new(&c)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut out = io::stdout().lock();
            for _ in 0..shots {
                writeln!(out, "{}", sampler.sample(&mut rng)?.to_string01())?;
            }
        }
        Cmd::Solve { matrix, rhs, seed } => {
            let sys = SymmetricSystem::parse(&read(&matrix)?, read(&rhs)?.trim())?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = if is_planar(&sys.graph()) { solve_planar_f2(&sys, &mut rng)? } else { solve_symmetric_f2(&sys, None, &mut rng)? };
            match x {
                Some(x) => println!("{}", x.to_string01()),
                None => println!("INFEASIBLE"),
            }
        }
        Cmd::Bench { sides, algos, trials, seed, csv } => {
            let sides = parse_sides(&sides)?;
            let algos: Vec<GridAlgo> = if algos == "all" {
                GridAlgo::ALL.to_vec()
            } else {
                algos.split(',').map(|a| a.trim().parse()).collect::<treegss::Result<_>>()?
            };
            let rows = bench_grid(&sides, &algos, trials, seed);
            emit_csv(&rows, &csv)?;
            for a in algos {
                if let Some(s) = fit_slope(&rows, a) {
                    eprintln!("{}: slope {s:.3}", a.name());
                }
            }
        }
    }
    Ok(())
}
