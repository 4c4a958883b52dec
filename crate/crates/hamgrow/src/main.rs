use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hamgrow::generate::{gen_gnp, gen_planted_hamiltonian, rng_from_seed, shuffled_order};
use hamgrow::harness::{parse_records, EdgeList};
use hamgrow::{
    parse_graph, replay, run_campaign, serialize_graph, Campaign, ExperimentConfig, Generator, HarnessError,
    OrderPolicy,
};
use hamgrow_core::{
    decide_hamiltonian, hc_exists, held_karp, reduce_to_tsp, select_initial_quad, Graph, GrowthConfig, Provider,
    QuadSelection, Verdict,
};

const OK: u8 = 0;
const USAGE: u8 = 1;
const DISCREPANCIES: u8 = 2;
const INVARIANT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "hamgrow",
    version,
    about = "Vertex-growth Hamiltonicity procedure, exact oracles and falsification campaigns"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a graph file.
    Gen(GenArgs),
    /// Run the growth procedure on a graph file.
    Solve(SolveArgs),
    /// Run the exact oracles on a graph file.
    Oracle(OracleArgs),
    /// Run a verification campaign.
    Verify(VerifyArgs),
    /// End-to-end campaign over large random batches.
    Hunt(HuntArgs),
    /// Re-run the trials behind discrepancy records.
    Replay(ReplayArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Model {
    Gnp,
    Planted,
    Path,
    Cycle,
    Complete,
    Star,
    Petersen,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    model: Model,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    extra_p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderArg {
    Closure,
    Oracle,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// `default` or `shuffle:SEED`.
    #[arg(long, default_value = "default")]
    order: String,
    #[arg(long, value_enum, default_value_t = ProviderArg::Closure)]
    provider: ProviderArg,
    #[arg(long)]
    trace: bool,
    /// Exit 3 when a step's constructed cost misses its prediction.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long)]
    hc: bool,
    #[arg(long)]
    tsp: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckArg {
    Table1,
    Closure,
    Quad,
    Connectivity,
    Endtoend,
}

impl CheckArg {
    fn campaign(self) -> Campaign {
        match self {
            CheckArg::Table1 => Campaign::Table1,
            CheckArg::Closure => Campaign::Closure,
            CheckArg::Quad => Campaign::QuadShortcut,
            CheckArg::Connectivity => Campaign::Connectivity,
            CheckArg::Endtoend => Campaign::EndToEnd,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    Default,
    Shuffle,
}

#[derive(Args)]
struct CampaignArgs {
    /// Inclusive vertex range, `A..B`.
    #[arg(long, default_value = "5..8")]
    n_range: String,
    /// Number of trials; for exhaustive and file sets, a cap (all by default).
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSONL output; records are discarded when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// `gnp:P`, `planted:EXTRA_P` or `exhaustive`.
    #[arg(long, default_value = "gnp:0.5")]
    generator: String,
    #[arg(long, value_enum, default_value_t = OrderArg::Default)]
    order: OrderArg,
    /// Graph files to use instead of a generator.
    #[arg(long = "in", num_args = 1..)]
    inputs: Vec<PathBuf>,
    /// Upgrade construction mismatches to exit 3.
    #[arg(long)]
    strict: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    check: CheckArg,
    #[command(flatten)]
    campaign: CampaignArgs,
}

#[derive(Args)]
struct HuntArgs {
    #[command(flatten)]
    campaign: CampaignArgs,
}

#[derive(Args)]
struct ReplayArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Replay only the record at this 0-based position.
    #[arg(long)]
    index: Option<usize>,
}

struct Failure(u8, String);

impl From<HarnessError> for Failure {
    fn from(e: HarnessError) -> Self {
        let code = if matches!(e, HarnessError::Invariant(_)) { INVARIANT } else { USAGE };
        Failure(code, e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure(USAGE, msg.into())
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_graph(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| usage(e.to_string())),
    }
}

fn cmd_gen(a: GenArgs) -> Result<u8, Failure> {
    let need_n = || a.n.ok_or_else(|| usage("--n is required for this model"));
    let g = match a.model {
        Model::Gnp => {
            let p = a.p.ok_or_else(|| usage("--model gnp needs --p"))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(usage("--p must lie in [0, 1]"));
            }
            gen_gnp(need_n()?, p, a.seed)
        }
        Model::Planted => {
            let p = a.extra_p.unwrap_or(0.0);
            let n = need_n()?;
            if !(0.0..=1.0).contains(&p) || n < 3 {
                return Err(usage("--model planted needs --n >= 3 and --extra-p in [0, 1]"));
            }
            gen_planted_hamiltonian(n, p, a.seed)
        }
        Model::Path => Graph::path(need_n()?),
        Model::Cycle => {
            let n = need_n()?;
            if n < 3 {
                return Err(usage("a cycle needs --n >= 3"));
            }
            Graph::cycle(n)
        }
        Model::Complete => Graph::complete(need_n()?),
        Model::Star => Graph::star(need_n()?),
        Model::Petersen => {
            if a.n.is_some_and(|n| n != 10) {
                return Err(usage("the Petersen graph has 10 vertices"));
            }
            Graph::petersen()
        }
    };
    if a.p.is_some() && !matches!(a.model, Model::Gnp) || a.extra_p.is_some() && !matches!(a.model, Model::Planted) {
        return Err(usage("--p only applies to gnp and --extra-p only to planted"));
    }
    emit(a.out.as_deref(), &serialize_graph(&g))?;
    Ok(OK)
}

fn cmd_solve(a: SolveArgs) -> Result<u8, Failure> {
    let g = read_graph(&a.input)?;
    let order = match a.order.as_str() {
        "default" => None,
        arg => {
            let seed = arg
                .strip_prefix("shuffle:")
                .and_then(|s| s.parse::<u64>().ok())
                .ok_or_else(|| usage(format!("bad --order {arg:?}; expected default or shuffle:SEED")))?;
            if g.n() < 4 {
                None
            } else {
                match select_initial_quad(&reduce_to_tsp(&g)).map_err(|e| usage(e.to_string()))? {
                    QuadSelection::Quad { quad, .. } => Some(shuffled_order(&mut rng_from_seed(seed), g.n(), quad)),
                    QuadSelection::AllZeroShortcut => None,
                }
            }
        }
    };
    let provider = match a.provider {
        ProviderArg::Closure => Provider::Closure,
        ProviderArg::Oracle => Provider::OracleExact,
    };
    let cfg = GrowthConfig { provider, ..GrowthConfig::default() };
    let decision = decide_hamiltonian(&g, order.as_deref(), &cfg).map_err(|e| match e {
        hamgrow_core::Error::InvariantViolation(_) => Failure(INVARIANT, e.to_string()),
        _ => usage(e.to_string()),
    })?;

    let mut out = String::new();
    match &decision.verdict {
        Verdict::Hamiltonian(t) => {
            out.push_str("HAMILTONIAN\nfinal_cost: 0\n");
            let ids: Vec<String> = t.order().iter().map(|v| v.to_string()).collect();
            out.push_str(&format!("witness: {}\n", ids.join(" ")));
        }
        Verdict::NotHamiltonian { final_cost } => {
            out.push_str("NOT_HAMILTONIAN\n");
            match final_cost {
                Some(c) => out.push_str(&format!("final_cost: {c}\n")),
                None => out.push_str("final_cost: none\n"),
            }
        }
        Verdict::HamiltonianByQuadShortcut => out.push_str("HAMILTONIAN_BY_QUAD_SHORTCUT\n"),
    }
    let mismatches =
        decision.final_state.as_ref().map_or(0, |s| s.trace.iter().filter(|r| r.construction_mismatch).count());
    if a.trace {
        if let Some(state) = &decision.final_state {
            out.push_str(&format!("order: {:?}\n", state.subset));
            out.push_str("m\tnew_vertex\td_star\tomega_size\tc_star\tpredicted\tconstructed\tc_star_next\th_size\tconstruction_mismatch\tfallback_splice\n");
            for r in &state.trace {
                out.push_str(&format!(
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\n",
                    r.m,
                    r.new_vertex,
                    r.d_star,
                    r.omega_size,
                    r.c_star,
                    r.predicted,
                    r.constructed,
                    r.c_star_next,
                    r.h_size,
                    r.construction_mismatch,
                    r.fallback_splice
                ));
            }
        }
    }
    emit(None, &out)?;
    if a.strict && mismatches > 0 {
        return Err(Failure(INVARIANT, format!("{mismatches} construction mismatch step(s)")));
    }
    Ok(OK)
}

fn cmd_oracle(a: OracleArgs) -> Result<u8, Failure> {
    if !a.hc && !a.tsp {
        return Err(usage("pass --hc and/or --tsp"));
    }
    let g = read_graph(&a.input)?;
    let mut out = String::new();
    if a.hc {
        out.push_str(if hc_exists(&g).is_some() { "true\n" } else { "false\n" });
    }
    if a.tsp {
        let all: Vec<usize> = (0..g.n()).collect();
        let cost = held_karp(&reduce_to_tsp(&g), &all).map_err(|e| usage(e.to_string()))?;
        out.push_str(&format!("{cost}\n"));
    }
    emit(None, &out)?;
    Ok(OK)
}

fn parse_range(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || usage(format!("bad --n-range {s:?}; expected A..B"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    Ok((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?))
}

fn parse_generator(s: &str) -> Result<Generator, Failure> {
    let bad = || usage(format!("bad --generator {s:?}; expected gnp:P, planted:EXTRA_P or exhaustive"));
    if s == "exhaustive" {
        return Ok(Generator::Exhaustive);
    }
    let (kind, p) = s.split_once(':').ok_or_else(bad)?;
    let p: f64 = p.parse().map_err(|_| bad())?;
    match kind {
        "gnp" => Ok(Generator::Gnp { p }),
        "planted" => Ok(Generator::Planted { extra_p: p }),
        _ => Err(bad()),
    }
}

fn run(campaign: Campaign, a: CampaignArgs, default_trials: u64) -> Result<u8, Failure> {
    let generator = if a.inputs.is_empty() {
        parse_generator(&a.generator)?
    } else {
        let graphs = a.inputs.iter().map(|p| read_graph(p).map(|g| EdgeList::of(&g))).collect::<Result<_, _>>()?;
        Generator::Graphs { graphs }
    };
    let random = matches!(generator, Generator::Gnp { .. } | Generator::Planted { .. });
    let n_range = match &generator {
        Generator::Graphs { graphs } => {
            let ns = graphs.iter().map(|g| g.n);
            (ns.clone().min().unwrap_or(0), ns.max().unwrap_or(0))
        }
        _ => parse_range(&a.n_range)?,
    };
    let cfg = ExperimentConfig {
        campaign,
        n_range,
        generator,
        trials: a.trials.unwrap_or(if random { default_trials } else { u64::MAX }),
        master_seed: a.seed,
        order_policy: match a.order {
            OrderArg::Default => OrderPolicy::Default,
            OrderArg::Shuffle => OrderPolicy::Shuffle,
        },
        strict: a.strict,
    };
    let report = match &a.out {
        Some(path) => {
            let file = fs::File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let mut sink = BufWriter::new(file);
            run_campaign(&cfg, &mut sink)?
        }
        None => run_campaign(&cfg, &mut io::sink())?,
    };
    let text = serde_json::to_string_pretty(&report).map_err(|e| usage(e.to_string()))?;
    emit(None, &(text + "\n"))?;
    Ok(if report.discrepancy_total() > 0 { DISCREPANCIES } else { OK })
}

fn cmd_replay(a: ReplayArgs) -> Result<u8, Failure> {
    let text = fs::read_to_string(&a.input).map_err(|e| usage(format!("{}: {e}", a.input.display())))?;
    let records = parse_records(&text).map_err(|(line, e)| usage(format!("line {line}: {e}")))?;
    let selected: Vec<(usize, _)> = match a.index {
        Some(k) if k >= records.len() => {
            return Err(usage(format!("--index {k} out of range; file has {} records", records.len())))
        }
        Some(k) => vec![(k, &records[k])],
        None => records.iter().enumerate().collect(),
    };
    let mut failed = 0;
    let mut out = String::new();
    for (k, r) in selected {
        let ok = replay(r)?.reproduced;
        failed += usize::from(!ok);
        out.push_str(&format!("{k}\t{}\n", if ok { "reproduced" } else { "NOT REPRODUCED" }));
    }
    emit(None, &out)?;
    Ok(if failed > 0 { INVARIANT } else { OK })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { OK });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Oracle(a) => cmd_oracle(a),
        Command::Verify(a) => run(a.check.campaign(), a.campaign, 1000),
        Command::Hunt(a) => run(Campaign::EndToEnd, a.campaign, 100_000),
        Command::Replay(a) => cmd_replay(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("hamgrow: {msg}");
            ExitCode::from(code)
        }
    }
}
