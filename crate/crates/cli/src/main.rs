use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rigidkit::ggr::{is_generically_globally_rigid, is_minimally_ggr};
use rigidkit::harness::{self, Checks, InputSource, RunConfig};
use rigidkit::io::{read_graphs, serialize_graph6, InputFormat};
use rigidkit::matroid::MatroidOracle;
use rigidkit::rigidity::{is_generically_rigid, DEFAULT_COORD_BITS, DEFAULT_SEED, DEFAULT_TRIALS};
use rigidkit::{Error, Graph, RandomRegime};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "rigidkit", version, about = "Generic rigidity and global rigidity of graphs, in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generic (local) rigidity.
    Rigid(Query),
    /// Generic global rigidity via the stress-rank test.
    GloballyRigid(Query),
    /// Generically globally rigid with no removable edge.
    Minimal(Query),
    /// All circuits of the rigidity matroid (at most 10 edges).
    Circuits(Query),
    /// Whether every pair of edges lies on a common circuit.
    RdConnected(Query),
    /// No graph containing K_{d+2} on at least d+3 vertices is minimally GGR.
    VerifyTheorem1(Verify),
    /// Every GGR graph on at least d+2 vertices is R_d-connected.
    VerifyTheorem3(Verify),
    /// Stress perturbation, simplex, circuit-stress and proportionality checks.
    VerifyGadgets(Verify),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Graph6,
    Edges,
}

impl From<Format> for InputFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Graph6 => InputFormat::Graph6,
            Format::Edges => InputFormat::Edges,
        }
    }
}

#[derive(Args)]
struct Common {
    /// Ambient dimension, at least 1.
    #[arg(short = 'd', value_parser = clap::value_parser!(u32).range(1..))]
    dimension: u32,
    #[arg(long, default_value_t = DEFAULT_SEED, value_parser = parse_seed)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: u32,
    #[arg(long, default_value_t = DEFAULT_COORD_BITS)]
    coord_bits: u32,
    /// Graph file, or `-` for standard input.
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Graph6)]
    format: Format,
    /// Write the full result as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct Query {
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Verify {
    #[command(flatten)]
    common: Common,
    /// Enumerate all labeled graphs with vertex counts in `a..b` (inclusive).
    #[arg(long, value_parser = parse_range, conflicts_with = "input")]
    builtin: Option<(usize, usize)>,
    /// Restrict the built-in enumeration to connected graphs.
    #[arg(long, requires = "builtin")]
    connected: bool,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    }
    .map_err(|e| e.to_string())
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or("expected a range like 4..7")?;
    let a = a.parse().map_err(|e| format!("{e}"))?;
    let b = b.parse().map_err(|e| format!("{e}"))?;
    Ok((a, b))
}

impl Common {
    fn regime(&self) -> Result<RandomRegime, Error> {
        RandomRegime::new(self.seed, self.coord_bits, self.trials)
    }

    fn read_text(&self) -> Result<(String, String), Error> {
        match &self.input {
            Some(p) if p.as_os_str() != "-" => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| Error::Io { context: format!("reading {}", p.display()), message: e.to_string() })?;
                Ok((text, p.display().to_string()))
            }
            _ => {
                let mut text = String::new();
                std::io::stdin()
                    .read_to_string(&mut text)
                    .map_err(|e| Error::Io { context: "reading standard input".into(), message: e.to_string() })?;
                Ok((text, "<stdin>".into()))
            }
        }
    }

    fn write_json(&self, value: &str) -> Result<(), Error> {
        match &self.json {
            Some(p) => std::fs::write(p, value)
                .map_err(|e| Error::Io { context: format!("writing {}", p.display()), message: e.to_string() }),
            None => Ok(()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(2) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Rigid(q) => query(&q.common, |g, d, r| {
            let v = is_generically_rigid(g, d, r);
            Ok((v.decision.to_string(), serde_json::to_value(&v).expect("verdicts serialize")))
        }),
        Command::GloballyRigid(q) => query(&q.common, |g, d, r| {
            let v = is_generically_globally_rigid(g, d, r);
            Ok((v.decision.to_string(), serde_json::to_value(&v).expect("verdicts serialize")))
        }),
        Command::Minimal(q) => query(&q.common, |g, d, r| {
            let v = is_minimally_ggr(g, d, r);
            let line = match v.witness_edge {
                Some((a, b)) => format!("false (removable edge {a}-{b})"),
                None => v.decision.to_string(),
            };
            Ok((line, serde_json::to_value(&v).expect("verdicts serialize")))
        }),
        Command::Circuits(q) => query(&q.common, |g, d, r| {
            let circuits = MatroidOracle::new(g, d, r)?.all_circuits()?;
            let lists: Vec<Vec<(usize, usize)>> = circuits.iter().map(|c| c.edges(g)).collect();
            let line = lists
                .iter()
                .map(|c| c.iter().map(|(a, b)| format!("{a}-{b}")).collect::<Vec<_>>().join(" "))
                .collect::<Vec<_>>()
                .join("\n");
            let line = if line.is_empty() { "none".to_string() } else { line };
            Ok((line, json!({ "circuits": lists })))
        }),
        Command::RdConnected(q) => query(&q.common, |g, d, r| {
            let ok = MatroidOracle::new(g, d, r)?.is_rd_connected()?;
            Ok((ok.to_string(), json!({ "rd_connected": ok })))
        }),
        Command::VerifyTheorem1(v) => verify(&v, Checks::THEOREM1),
        Command::VerifyTheorem3(v) => verify(&v, Checks::THEOREM3),
        Command::VerifyGadgets(v) => verify(&v, Checks::GADGETS),
    }
}

/// Answers a yes/no question for every input graph. One graph prints the
/// bare answer; several prefix each answer with the graph's graph6 string.
fn query(
    c: &Common,
    answer: impl Fn(&Graph, usize, &RandomRegime) -> Result<(String, Value), Error>,
) -> Result<ExitCode, Error> {
    let regime = c.regime()?;
    let (text, source) = c.read_text()?;
    let graphs = read_graphs(&text, c.format.into(), &source)?;
    let d = c.dimension as usize;
    let mut records = Vec::new();
    for g in &graphs {
        let name = serialize_graph6(g)?;
        let (line, value) = answer(g, d, &regime)?;
        if graphs.len() == 1 {
            println!("{line}");
        } else {
            println!("{name}\t{}", line.replace('\n', "\n\t"));
        }
        records.push(json!({ "graph6": name, "result": value }));
    }
    let doc = json!({ "schema_version": harness::SCHEMA_VERSION, "dimension": d, "regime": regime, "results": records });
    c.write_json(&format!("{}\n", serde_json::to_string_pretty(&doc).expect("json values serialize")))?;
    Ok(ExitCode::SUCCESS)
}

fn verify(v: &Verify, checks: Checks) -> Result<ExitCode, Error> {
    let c = &v.common;
    let input = match (v.builtin, &c.input) {
        (Some((n_min, n_max)), None) => InputSource::Builtin { n_min, n_max, connected: v.connected },
        (None, Some(p)) if p.as_os_str() != "-" => InputSource::File { path: p.clone(), format: c.format.into() },
        (None, _) => {
            let (text, label) = c.read_text()?;
            InputSource::Inline { label, format: c.format.into(), text }
        }
        (Some(_), Some(_)) => unreachable!("clap rejects --builtin together with --input"),
    };
    let cfg = RunConfig { dimension: c.dimension as usize, input, regime: c.regime()?, output: c.json.clone(), checks };
    let report = harness::run(&cfg)?;
    print!("{}", report.summary());
    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
