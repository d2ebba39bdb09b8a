//! Command-line front end: generate workloads, run an engine over a
//! stream, verify all engines against the oracle, and benchmark.

use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rmq_stream::workload::{write_commands, write_stream, DEFAULT_VALUE_BOUND};
use rmq_stream::{
    parse_stream, validate, Command, CompactEngine, OracleEngine, RealtimeEngine, RmqEngine,
    SearchStrategy, VanillaEngine, WorkloadSpec,
};

#[derive(Parser)]
#[command(name = "rmq-stream", version, about = "Online range-minimum queries over command streams")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a random workload stream.
    Generate(GenerateArgs),
    /// Run one engine over a stream, printing one answer per query.
    Run(RunArgs),
    /// Run every engine plus the oracle and compare answer streams.
    Verify(VerifyArgs),
    /// Measure ns per command and peak structure capacity, as CSV.
    Bench(BenchArgs),
}

#[derive(Args, Clone)]
struct GenerateArgs {
    /// Number of values.
    #[arg(long)]
    n: u64,
    /// Number of queries (= marks = closes).
    #[arg(long)]
    q: u64,
    /// Target expected number of simultaneously open positions.
    #[arg(long)]
    ell: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exclusive upper bound for values.
    #[arg(long, default_value_t = DEFAULT_VALUE_BOUND)]
    value_bound: u64,
    /// Output file; "-" for standard output. ".gz" compresses.
    #[arg(long)]
    out: String,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum EngineKind {
    Vanilla,
    Compact,
    Realtime,
    Oracle,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum SearchKind {
    Binary,
    Exponential,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum)]
    engine: EngineKind,
    /// Input stream file; "-" for standard input.
    #[arg(long = "in")]
    input: String,
    /// Discard answers into a write-once sink instead of printing.
    #[arg(long)]
    sink: bool,
    /// Skip validation and ignore runtime engine errors.
    #[arg(long)]
    lenient: bool,
    /// Initial capacity for the compact and realtime engines.
    #[arg(long, default_value_t = 16)]
    a0: usize,
    /// Stack truncation search used by the realtime engine.
    #[arg(long, value_enum, default_value_t = SearchKind::Binary)]
    search: SearchKind,
}

#[derive(Args)]
struct VerifyArgs {
    /// Input stream file; "-" for standard input.
    #[arg(long = "in")]
    input: String,
    #[arg(long, default_value_t = 16)]
    a0: usize,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_enum)]
    engine: EngineKind,
    /// Input stream file; omit to generate via --n/--q/--ell/--seed.
    #[arg(long = "in")]
    input: Option<String>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    ell: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    repeat: usize,
    #[arg(long, default_value_t = 16)]
    a0: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Cmd::Generate(args) => cmd_generate(args),
        Cmd::Run(args) => cmd_run(args),
        Cmd::Verify(args) => cmd_verify(args),
        Cmd::Bench(args) => cmd_bench(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut spec = WorkloadSpec::new(args.n, args.q, args.ell, args.seed);
    spec.value_bound = args.value_bound;
    let commands = spec.generate()?;
    if args.out == "-" {
        let stdout = io::stdout();
        let mut w = io::BufWriter::new(stdout.lock());
        write_commands(&mut w, &commands)?;
        w.flush()?;
    } else {
        write_stream(&PathBuf::from(&args.out), &commands)?;
    }
    Ok(ExitCode::SUCCESS)
}

fn read_input(path: &str) -> io::Result<String> {
    let mut text = String::new();
    if path == "-" {
        io::stdin().read_to_string(&mut text)?;
    } else if path.ends_with(".gz") {
        let file = std::fs::File::open(path)?;
        flate2::read::GzDecoder::new(file).read_to_string(&mut text)?;
    } else {
        text = std::fs::read_to_string(path)?;
    }
    Ok(text)
}

fn load_commands(path: &str, lenient: bool) -> Result<Vec<Command>, Box<dyn std::error::Error>> {
    let text = read_input(path)?;
    let commands = parse_stream(&text)?;
    if !lenient {
        let report = validate(&commands);
        if let Some(&(ordinal, kind)) = report.violations.first() {
            return Err(format!(
                "invalid stream: command {ordinal} violates {kind:?} \
                 ({} violations total)",
                report.violations.len()
            )
            .into());
        }
    }
    Ok(commands)
}

fn make_engine(kind: EngineKind, a0: usize, search: SearchKind) -> Box<dyn RmqEngine> {
    let strategy = match search {
        SearchKind::Binary => SearchStrategy::Binary,
        SearchKind::Exponential => SearchStrategy::Exponential,
    };
    match kind {
        EngineKind::Vanilla => Box::new(VanillaEngine::new()),
        EngineKind::Compact => Box::new(CompactEngine::with_initial_capacity(a0)),
        EngineKind::Realtime => Box::new(RealtimeEngine::with_config(a0, strategy)),
        EngineKind::Oracle => Box::new(OracleEngine::new()),
    }
}

struct RunOutcome {
    commands: usize,
    values: u64,
    queries: u64,
    wall_ns: u128,
    digest: u64,
    peak_capacity: usize,
    peak_active: usize,
}

impl RunOutcome {
    fn ns_per_command(&self) -> f64 {
        let denom = self.values + self.queries;
        if denom == 0 {
            0.0
        } else {
            self.wall_ns as f64 / denom as f64
        }
    }
}

const FNV_OFFSET: u64 = 0xCBF2_9CE4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01B3;

fn fnv1a(digest: u64, answer: i64) -> u64 {
    let mut d = digest;
    for byte in answer.to_le_bytes() {
        d ^= byte as u64;
        d = d.wrapping_mul(FNV_PRIME);
    }
    d
}

fn drive(
    engine: &mut dyn RmqEngine,
    commands: &[Command],
    mut out: Option<&mut dyn Write>,
    lenient: bool,
) -> Result<RunOutcome, Box<dyn std::error::Error>> {
    let mut outcome = RunOutcome {
        commands: commands.len(),
        values: 0,
        queries: 0,
        wall_ns: 0,
        digest: FNV_OFFSET,
        peak_capacity: 0,
        peak_active: 0,
    };
    let start = Instant::now();
    for (ordinal, &cmd) in commands.iter().enumerate() {
        match cmd {
            Command::Value(_) => outcome.values += 1,
            Command::Query(_) => outcome.queries += 1,
            _ => {}
        }
        match engine.apply(cmd) {
            Ok(Some(answer)) => {
                outcome.digest = fnv1a(outcome.digest, answer);
                if let Some(w) = out.as_deref_mut() {
                    writeln!(w, "{answer}")?;
                } else {
                    // Write-once sink: the answer is produced but not kept.
                    std::hint::black_box(answer);
                }
            }
            Ok(None) => {}
            Err(err) if lenient => {
                std::hint::black_box(err);
            }
            Err(err) => {
                return Err(format!("command {ordinal} ({cmd}): {err}").into());
            }
        }
    }
    outcome.wall_ns = start.elapsed().as_nanos();
    outcome.peak_capacity = engine.peak_capacity();
    outcome.peak_active = engine.peak_active();
    Ok(outcome)
}

fn cmd_run(args: RunArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let commands = load_commands(&args.input, args.lenient)?;
    let mut engine = make_engine(args.engine, args.a0, args.search);
    let stdout = io::stdout();
    let mut locked;
    let out: Option<&mut dyn Write> = if args.sink {
        None
    } else {
        locked = io::BufWriter::new(stdout.lock());
        Some(&mut locked)
    };
    let outcome = drive(engine.as_mut(), &commands, out, args.lenient)?;
    eprintln!("engine={}", engine.name());
    eprintln!("commands={}", outcome.commands);
    eprintln!("values={}", outcome.values);
    eprintln!("queries={}", outcome.queries);
    eprintln!("wall_ns={}", outcome.wall_ns);
    eprintln!("ns_per_command={:.2}", outcome.ns_per_command());
    eprintln!("peak_capacity={}", outcome.peak_capacity);
    eprintln!("peak_active={}", outcome.peak_active);
    eprintln!("digest={:016x}", outcome.digest);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let commands = load_commands(&args.input, false)?;
    let mut engines: Vec<Box<dyn RmqEngine>> = vec![
        Box::new(VanillaEngine::new()),
        Box::new(CompactEngine::with_initial_capacity(args.a0)),
        Box::new(RealtimeEngine::with_config(args.a0, SearchStrategy::Binary)),
        Box::new(RealtimeEngine::with_config(args.a0, SearchStrategy::Exponential)),
        Box::new(OracleEngine::new()),
    ];
    let names = ["vanilla", "compact", "realtime", "realtime-exp", "oracle"];
    let mut query_ordinal = 0u64;
    for (ordinal, &cmd) in commands.iter().enumerate() {
        let mut answers = Vec::with_capacity(engines.len());
        for engine in engines.iter_mut() {
            let answer = engine
                .apply(cmd)
                .map_err(|e| format!("command {ordinal} ({cmd}): {e}"))?;
            answers.push(answer);
        }
        if let Command::Query(i) = cmd {
            query_ordinal += 1;
            if answers.windows(2).any(|w| w[0] != w[1]) {
                eprintln!("mismatch at query {query_ordinal} (command {ordinal}, position {i}):");
                for (name, answer) in names.iter().zip(&answers) {
                    eprintln!("  {name}: {answer:?}");
                }
                return Ok(ExitCode::FAILURE);
            }
        }
    }
    eprintln!("verified {} commands, {} queries: all engines agree", commands.len(), query_ordinal);
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: BenchArgs) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let (commands, ell) = match (&args.input, args.n, args.q, args.ell) {
        (Some(path), _, _, _) => (load_commands(path, false)?, None),
        (None, Some(n), Some(q), Some(ell)) => {
            let spec = WorkloadSpec::new(n, q, ell, args.seed);
            (spec.generate()?, Some(ell))
        }
        _ => {
            return Err("bench needs either --in or all of --n/--q/--ell".into());
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "engine,n,q,ell,ns_per_command,peak_capacity")?;
    for _ in 0..args.repeat {
        let mut engine = make_engine(args.engine, args.a0, SearchKind::Binary);
        let outcome = drive(engine.as_mut(), &commands, None, false)?;
        writeln!(
            out,
            "{},{},{},{},{:.2},{}",
            engine.name(),
            outcome.values,
            outcome.queries,
            ell.map(|e| e.to_string()).unwrap_or_else(|| outcome.peak_active.to_string()),
            outcome.ns_per_command(),
            outcome.peak_capacity,
        )?;
    }
    Ok(ExitCode::SUCCESS)
}
