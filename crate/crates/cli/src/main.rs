use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sprofile::bench::{self, Cell, Fault, Impl, Query, VerifyOptions};
use sprofile::peel::{self, Graph};
use sprofile::streamgen::{self, Preset, StreamConfig};

#[derive(Parser)]
#[command(name = "sprofile", version, about = "Constant-time frequency profiling: streams, verification, benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic event stream to a file.
    Gen(GenArgs),
    /// Replay a generated stream against the brute-force oracle.
    Verify(VerifyArgs),
    /// Time update+query loops and write CSV rows.
    Bench(BenchArgs),
    /// Print the degeneracy and core numbers of an edge-list graph.
    Peel(PeelArgs),
}

#[derive(Args)]
struct StreamArgs {
    #[arg(long, default_value = "stream1")]
    preset: Preset,
    #[arg(long)]
    n: u64,
    #[arg(long)]
    m: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Probability of an add event.
    #[arg(long = "p-add")]
    p_add: Option<f64>,
}

impl StreamArgs {
    fn config(&self) -> Result<StreamConfig> {
        let cfg = StreamConfig::preset(self.preset, self.n, self.m, self.seed)?;
        Ok(match self.p_add {
            Some(p) => cfg.with_p_add(p)?,
            None => cfg,
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    stream: StreamArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    stream: StreamArgs,
    /// Deliberately break the profiler to check that verification notices.
    #[arg(long, hide = true)]
    inject_fault: Option<FaultArg>,
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum FaultArg {
    SkipSwap,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    query: Query,
    /// Comma-separated implementations: sprofile, heap, ost.
    #[arg(long = "impl", value_delimiter = ',', required = true)]
    impls: Vec<Impl>,
    #[arg(long, default_value = "stream1")]
    preset: Preset,
    /// Comma-separated stream lengths.
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<u64>,
    /// Comma-separated universe sizes.
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<u32>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    repeats: u32,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PeelArgs {
    graph: PathBuf,
}

fn gen(args: &GenArgs) -> Result<()> {
    let events = streamgen::generate(&args.stream.config()?)?;
    streamgen::write_stream(&args.out, &events)?;
    Ok(())
}

fn verify(args: &VerifyArgs) -> Result<bool> {
    let cfg = args.stream.config()?;
    let opts = VerifyOptions {
        fault: args.inject_fault.map(|FaultArg::SkipSwap| Fault::SkipPermutationSwap),
        ..VerifyOptions::default()
    };
    let report = bench::verify_preset(&cfg, &opts)?;
    match &report.mismatch {
        None => {
            println!(
                "ok: {} events, {} full checks ({}, m = {}, seed = {})",
                report.events, report.full_checks, args.stream.preset, cfg.m, cfg.seed
            );
            Ok(true)
        }
        Some(m) => {
            eprintln!("MISMATCH {m}");
            Ok(false)
        }
    }
}

fn run_bench(args: &BenchArgs) -> Result<()> {
    if args.repeats == 0 {
        bail!("--repeats must be at least 1");
    }
    for &imp in &args.impls {
        if !imp.supports(args.query) {
            bail!("{imp} cannot answer {} queries", args.query);
        }
    }
    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut csv = csv::Writer::from_writer(sink);
    csv.write_record(bench::BenchRecord::CSV_HEADER)?;

    for &n in &args.n {
        for &m in &args.m {
            let cfg = StreamConfig::preset(args.preset, n, m, args.seed)?;
            let events = streamgen::generate(&cfg)?;
            for &imp in &args.impls {
                let cell = Cell {
                    implementation: imp,
                    query: args.query,
                    preset: args.preset,
                    n,
                    m,
                    seed: args.seed,
                    repeats: args.repeats,
                };
                let record = bench::measure(&cell, &events)?;
                csv.write_record(record.csv_fields())?;
                csv.flush()?;
            }
        }
    }
    Ok(())
}

fn run_peel(args: &PeelArgs) -> Result<()> {
    let g = Graph::read(&args.graph)?;
    let result = peel::degeneracy_order(&g);
    let mut out = io::stdout().lock();
    writeln!(out, "degeneracy {}", result.degeneracy)?;
    for (i, core) in result.core.iter().enumerate() {
        writeln!(out, "{} {core}", i + 1)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Gen(a) => gen(a).map(|_| true),
        Command::Verify(a) => verify(a),
        Command::Bench(a) => run_bench(a).map(|_| true),
        Command::Peel(a) => run_peel(a).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
