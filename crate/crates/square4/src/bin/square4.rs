use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use square4::adversary::AdversaryKind;
use square4::batch::{run_batch, BatchSpec};
use square4::config::{tolerance, RunConfig};
use square4::generate::Family;
use square4::properties::all_suites;
use square4::render::render_svg;
use square4::sim::{run, Limits, Outcome, World, DEFAULT_EVENTS_MAX};
use square4::trace::{read_trace, JsonlWriter, NullSink, TraceSink, VecSink};

const EXIT_LIMIT: u8 = 2;
const EXIT_FALSIFIED: u8 = 3;
const EXIT_BAD_INPUT: u8 = 4;

#[derive(Parser)]
#[command(name = "square4", version, about = "Square formation for four asynchronous oblivious robots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one simulation and print its outcome.
    Run(RunArgs),
    /// Sweep many configurations, adversaries and step bounds.
    Batch(BatchArgs),
    /// Run the property suites.
    CheckLemmas(SuiteArgs),
    /// Convert a JSONL trace into an SVG figure.
    Render(RenderArgs),
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    adversary: Option<AdversaryKind>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long)]
    events_max: Option<u64>,
    /// JSONL trace output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    #[arg(long, default_value_t = 1000)]
    n: u64,
    #[arg(long, default_value = "uniform")]
    family: Family,
    /// Adversary names, comma separated, or `all`.
    #[arg(long, default_value = "all")]
    adversary: String,
    /// Step bounds, comma separated.
    #[arg(long, default_value = "1e-3,0.1")]
    delta: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_EVENTS_MAX)]
    events_max: u64,
    /// CSV output; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SuiteArgs {
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct RenderArgs {
    trace: PathBuf,
    #[arg(long, alias = "out")]
    svg: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

fn bad(message: impl ToString) -> Failure {
    Failure { code: EXIT_BAD_INPUT, message: message.to_string() }
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| bad(format!("{}: {e}", path.display())))
}

fn outcome_code(o: &Outcome) -> u8 {
    if o.is_success() {
        0
    } else if o.is_falsification() {
        EXIT_FALSIFIED
    } else {
        EXIT_LIMIT
    }
}

fn cmd_run(a: RunArgs) -> Result<u8, Failure> {
    let mut cfg = match &a.config {
        Some(path) => RunConfig::load(path).map_err(bad)?,
        None => RunConfig::new(AdversaryKind::RandomAsync, 0.1, 0),
    };
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    if let Some(k) = a.adversary {
        cfg.adversary = k;
    }
    if let Some(d) = a.delta {
        cfg.delta = d;
    }
    if a.family.is_some() {
        cfg.family = a.family;
        cfg.positions = None;
    }
    if a.events_max.is_some() {
        cfg.events_max = a.events_max;
    }
    let trace_path = a.out.or(cfg.trace.clone());
    let svg_path = a.svg.or(cfg.svg.clone());
    let r = cfg.resolve().map_err(bad)?;

    let world = World::new(r.positions, r.frames, r.delta, r.tol);
    let mut adv = r.adversary.build(r.seed);
    let limits = Limits { events_max: r.events_max, ..Limits::default() };
    let mut events = VecSink::default();
    let report = match &trace_path {
        Some(path) => {
            let mut w = JsonlWriter::new(create(path)?).map_err(bad)?;
            let report = {
                let mut tee = Tee { a: &mut w, b: svg_path.as_ref().map(|_| &mut events) };
                run(world, adv.as_mut(), limits, &mut tee)
            };
            if let Some(e) = w.error() {
                return Err(bad(format!("{}: {e}", path.display())));
            }
            report
        }
        None if svg_path.is_some() => run(world, adv.as_mut(), limits, &mut events),
        None => run(world, adv.as_mut(), limits, &mut NullSink),
    };
    if let Some(path) = &svg_path {
        create(path)?.write_all(render_svg(&events.events).as_bytes()).map_err(bad)?;
    }

    let o = &report.outcome;
    println!("outcome: {}", o.name());
    println!("events: {}", o.events());
    println!("looks: {}", report.stats.looks);
    if let Some(c) = report.stats.start_class {
        println!("start_class: {c}");
    }
    for (i, p) in o.positions().iter().enumerate() {
        println!("r{i}: {:.12} {:.12}", p.x, p.y);
    }
    match o {
        Outcome::Collision { robots, .. } => println!("collision: {} {}", robots.0, robots.1),
        Outcome::AssertionFailure { message, .. } => println!("assertion: {message}"),
        _ => {}
    }
    for v in report.stats.violations() {
        println!("monotonicity_violation: event {} {} -> {}", v.event, v.from, v.to);
    }
    Ok(outcome_code(o))
}

/// Forwards events to a trace writer and, optionally, a collector.
struct Tee<'a, A: TraceSink> {
    a: &'a mut A,
    b: Option<&'a mut VecSink>,
}

impl<A: TraceSink> TraceSink for Tee<'_, A> {
    fn record(&mut self, e: &square4::trace::TraceEvent) {
        self.a.record(e);
        if let Some(b) = self.b.as_mut() {
            b.record(e);
        }
    }

    fn finish(&mut self) {
        self.a.finish();
    }
}

fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>, Failure>
where
    T::Err: std::fmt::Display,
{
    s.split(',').map(|x| x.trim().parse::<T>().map_err(|e| bad(format!("`{x}`: {e}")))).collect()
}

fn cmd_batch(a: BatchArgs) -> Result<u8, Failure> {
    let adversaries = if a.adversary == "all" { AdversaryKind::ALL.to_vec() } else { parse_list(&a.adversary)? };
    let deltas: Vec<f64> = parse_list(&a.delta)?;
    if deltas.iter().any(|d| !(*d > 0.0 && d.is_finite())) {
        return Err(bad("delta must be positive"));
    }
    let spec = BatchSpec {
        n: a.n,
        family: a.family,
        adversaries,
        deltas,
        seed: a.seed,
        tol: tolerance(None).map_err(bad)?,
        events_max: a.events_max,
    };
    let summary = run_batch(&spec).map_err(bad)?;
    match &a.out {
        Some(path) => {
            let mut f = create(path)?;
            summary.write_csv(&mut f).and_then(|_| f.flush()).map_err(bad)?;
        }
        None => summary.write_csv(io::stdout().lock()).map_err(bad)?,
    }
    eprintln!(
        "{}/{} formed_square, {} collision, {} timeout, {} assertion_failure, max events {}, {} monotonicity violations",
        summary.successes(),
        summary.total(),
        summary.count("collision"),
        summary.count("timeout"),
        summary.count("assertion_failure"),
        summary.max_events(),
        summary.monotonicity_violations()
    );
    Ok(summary.exit_code() as u8)
}

fn cmd_check_lemmas(a: SuiteArgs) -> Result<u8, Failure> {
    let tol = tolerance(None).map_err(bad)?;
    let mut failed = false;
    for r in all_suites(a.samples, a.seed, tol) {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        println!("{status} {}: {} samples, {} counterexamples; {}", r.name, r.samples, r.failures, r.note);
        if let Some(p) = r.counterexample {
            println!("  counterexample: {p:?}");
        }
        failed |= !r.passed();
    }
    Ok(if failed { EXIT_FALSIFIED } else { 0 })
}

fn cmd_render(a: RenderArgs) -> Result<u8, Failure> {
    let file = File::open(&a.trace).map_err(|e| bad(format!("{}: {e}", a.trace.display())))?;
    let events = read_trace(BufReader::new(file)).map_err(bad)?;
    let svg = render_svg(&events);
    match &a.svg {
        Some(path) => create(path)?.write_all(svg.as_bytes()).map_err(bad)?,
        None => io::stdout().lock().write_all(svg.as_bytes()).map_err(bad)?,
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Batch(a) => cmd_batch(a),
        Command::CheckLemmas(a) => cmd_check_lemmas(a),
        Command::Render(a) => cmd_render(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
