//! `swapreach` command-line front end.
//!
//! Exit codes: 0 success, 1 the answer is no, 2 bad input, 3 cap or budget
//! exhausted, 4 an internal check failed.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use swapreach::oracle::DEFAULT_BUDGET;
use swapreach::reduction::PmrStatus;
use swapreach::stable_sets::min_stable_containing;
use swapreach::witness::DEFAULT_CAP;
use swapreach::{
    bfs_reachable, build_witness, gen_instance, gen_pmr, matching_bfs, min_proper_stable,
    parse_instance, reduce_pmr, run_bench, serialize, solve_tree, BenchConfig, Decision, Error,
    GenSpec, Instance, NoCertificate, OracleStatus, PMRInstance, Shape, Suite,
};

#[derive(Parser)]
#[command(name = "swapreach", version, about = "Reachability of assignments under rational swaps")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Args, Clone, Copy)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for `gen`; added to every suite seed by `bench`.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Maximum number of moves a witness may have.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Maximum number of states the oracle may discover.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check an instance file and print its canonical form.
    Validate { file: PathBuf },
    /// Decide reachability on a tree.
    Solve { file: PathBuf },
    /// Print a swap sequence from `a` to `b` on a tree.
    Witness {
        file: PathBuf,
        /// Replay the sequence and verify it before printing.
        #[arg(long)]
        check: bool,
    },
    /// Exhaustive breadth-first search on any graph.
    Oracle { file: PathBuf },
    /// Print the minimum proper stable set, or the minimum stable set
    /// containing an item.
    Stable {
        file: PathBuf,
        #[arg(long)]
        item: Option<String>,
    },
    /// Turn a perfect matching reconfiguration file into an instance.
    Reduce {
        pmr_file: PathBuf,
        /// Where to write the instance (standard output if absent).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Run both searches and report whether they agree.
        #[arg(long)]
        verify: bool,
    },
    /// Generate a random instance.
    Gen {
        #[arg(long, default_value = "tree")]
        shape: String,
        #[arg(long)]
        agents: usize,
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        /// For `pmr-cycle`, print the matching instance instead of its
        /// reduction.
        #[arg(long)]
        pmr: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run a benchmark suite.
    Bench {
        suite: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also write the CSV report here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// Failures with a dedicated exit code.
#[derive(Debug)]
enum Outcome {
    No,
    Exhausted,
    CheckFailed(String),
}

impl std::fmt::Display for Outcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Outcome::No => f.write_str("answer is no"),
            Outcome::Exhausted => f.write_str("budget exhausted"),
            Outcome::CheckFailed(why) => write!(f, "check failed: {why}"),
        }
    }
}

impl std::error::Error for Outcome {}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load(path: &Path) -> Result<Instance> {
    let text = read(path)?;
    parse_instance(&text).with_context(|| format!("invalid instance {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn names<'a>(list: impl IntoIterator<Item = &'a str>) -> String {
    list.into_iter().collect::<Vec<_>>().join(" ")
}

fn validate(g: &Global, file: &Path) -> Result<()> {
    let inst = load(file)?;
    if g.format == Format::Csv {
        println!("agents,items,edges\n{},{},{}", inst.len(), inst.len(), inst.edge_count());
    } else {
        print!("{}", serialize(&inst));
    }
    Ok(())
}

fn solve(g: &Global, file: &Path) -> Result<()> {
    let inst = load(file)?;
    let decision = solve_tree(&inst)?;
    let agents = |v: &[usize]| names(v.iter().map(|&i| inst.agent_name(i)));
    let items = |v: &[usize]| names(v.iter().map(|&j| inst.item_name(j)));
    let mut out = String::new();
    match &decision {
        Decision::Yes(cert) if g.format == Format::Csv => {
            out += "answer,leaf,agents,items\n";
            for (k, leaf) in cert.leaves.iter().enumerate() {
                writeln!(out, "YES,{k},{},{}", agents(&leaf.agents), items(&leaf.items))?;
            }
        }
        Decision::Yes(cert) => {
            out += "YES\n";
            writeln!(out, "splits {}", cert.splits)?;
            writeln!(out, "leaves {}", cert.leaves.len())?;
            for leaf in &cert.leaves {
                writeln!(out, "leaf agents {} items {}", agents(&leaf.agents), items(&leaf.items))?;
            }
        }
        Decision::No(cert) => {
            let (kind, item, from, to, component, stable) = match cert {
                NoCertificate::Disconnected(d) => (
                    "disconnected",
                    d.item,
                    inst.agent_name(d.source_holder).to_string(),
                    d.target_holder,
                    String::new(),
                    String::new(),
                ),
                NoCertificate::Crossing(c) => (
                    "crossing",
                    c.item,
                    String::new(),
                    c.target_holder,
                    agents(&c.component.agents),
                    items(&c.stable),
                ),
            };
            let item = inst.item_name(item);
            let to = inst.agent_name(to);
            if g.format == Format::Csv {
                out += "answer,certificate,item,source_holder,target_holder,component,stable\n";
                writeln!(out, "NO,{kind},{item},{from},{to},{component},{stable}")?;
            } else {
                out += "NO\n";
                writeln!(out, "certificate {kind}")?;
                writeln!(out, "item {item}")?;
                if !from.is_empty() {
                    writeln!(out, "source-holder {from}")?;
                }
                writeln!(out, "target-holder {to}")?;
                if !component.is_empty() {
                    writeln!(out, "component {component}")?;
                    writeln!(out, "stable {stable}")?;
                }
            }
        }
    }
    print!("{out}");
    if decision.is_yes() {
        Ok(())
    } else {
        Err(Outcome::No.into())
    }
}

fn witness(g: &Global, file: &Path, check: bool) -> Result<()> {
    let inst = load(file)?;
    let cap = g.cap;
    let seq = std::thread::Builder::new()
        .stack_size(swapreach::harness::WORKER_STACK)
        .spawn(move || build_witness(&inst, cap).map(|s| (inst, s)))
        .context("cannot spawn worker thread")?
        .join()
        .map_err(|_| anyhow!("witness construction panicked"))?;
    let (inst, seq) = match seq {
        Err(Error::NotYesInstance) => {
            println!("NO");
            return Err(Outcome::No.into());
        }
        other => other?,
    };
    if check {
        seq.verify(&inst)
            .map_err(|e| Outcome::CheckFailed(e.to_string()))?;
    }
    let mut out = String::with_capacity(seq.len() * 12);
    if g.format == Format::Csv {
        out += "step,first,second\n";
    }
    for (k, m) in seq.moves.iter().enumerate() {
        let (u, v) = (inst.agent_name(m.first), inst.agent_name(m.second));
        match g.format {
            Format::Csv => writeln!(out, "{k},{u},{v}")?,
            Format::Text => writeln!(out, "swap {u} {v}")?,
        }
    }
    print!("{out}");
    Ok(())
}

fn oracle(g: &Global, file: &Path) -> Result<()> {
    let inst = load(file)?;
    let r = bfs_reachable(&inst, g.budget);
    let (status, distance) = match &r.status {
        OracleStatus::Reachable { distance, .. } => ("reachable", distance.to_string()),
        OracleStatus::Unreachable => ("unreachable", String::new()),
        OracleStatus::Exhausted { .. } => ("exhausted", String::new()),
    };
    let mut out = String::new();
    if g.format == Format::Csv {
        out += "status,distance,explored\n";
        writeln!(out, "{status},{distance},{}", r.explored)?;
    } else {
        writeln!(out, "status {status}")?;
        if !distance.is_empty() {
            writeln!(out, "distance {distance}")?;
        }
        writeln!(out, "explored {}", r.explored)?;
        if let OracleStatus::Reachable { moves, .. } = &r.status {
            for m in moves {
                writeln!(out, "swap {} {}", inst.agent_name(m.first), inst.agent_name(m.second))?;
            }
        }
    }
    print!("{out}");
    match r.status {
        OracleStatus::Reachable { .. } => Ok(()),
        OracleStatus::Unreachable => Err(Outcome::No.into()),
        OracleStatus::Exhausted { .. } => Err(Outcome::Exhausted.into()),
    }
}

fn stable(g: &Global, file: &Path, item: Option<&str>) -> Result<()> {
    let inst = load(file)?;
    let set = match item {
        Some(name) => {
            let j = inst
                .item_by_name(name)
                .ok_or_else(|| Error::Parse { line: 0, message: format!("unknown item `{name}`") })?;
            Some(min_stable_containing(&inst, j))
        }
        None => min_proper_stable(&inst),
    };
    let text = match &set {
        Some(s) => {
            let sep = if g.format == Format::Csv { "," } else { " " };
            s.items()
                .iter()
                .map(|&j| inst.item_name(j))
                .collect::<Vec<_>>()
                .join(sep)
        }
        None => "none".into(),
    };
    println!("{text}");
    Ok(())
}

fn reduce(g: &Global, file: &Path, output: Option<&Path>, verify: bool) -> Result<()> {
    let text = read(file)?;
    let p = PMRInstance::parse(&text).with_context(|| format!("invalid matching instance {}", file.display()))?;
    let inst = reduce_pmr(&p)?;
    if !verify {
        return emit(output, &serialize(&inst));
    }
    if let Some(out) = output {
        emit(Some(out), &serialize(&inst))?;
    }
    let matchings = matching_bfs(&p, g.budget);
    let assignments = bfs_reachable(&inst, g.budget);
    let left = match &matchings.status {
        PmrStatus::Reachable { distance, .. } => Some(Some(*distance)),
        PmrStatus::Unreachable => Some(None),
        PmrStatus::Exhausted { .. } => None,
    };
    let right = match &assignments.status {
        OracleStatus::Reachable { distance, .. } => Some(Some(*distance)),
        OracleStatus::Unreachable => Some(None),
        OracleStatus::Exhausted { .. } => None,
    };
    let show = |s: Option<Option<usize>>| match s {
        Some(Some(d)) => format!("reachable distance {d}"),
        Some(None) => "unreachable".to_string(),
        None => "exhausted".to_string(),
    };
    if g.format == Format::Csv {
        println!("search,result,explored");
        println!("matchings,{},{}", show(left), matchings.explored);
        println!("assignments,{},{}", show(right), assignments.explored);
    } else {
        println!("matchings   {} (explored {})", show(left), matchings.explored);
        println!("assignments {} (explored {})", show(right), assignments.explored);
    }
    match (left, right) {
        (Some(l), Some(r)) if l == r => {
            println!("agree");
            Ok(())
        }
        (Some(_), Some(_)) => Err(Outcome::CheckFailed("searches disagree".into()).into()),
        _ => Err(Outcome::Exhausted.into()),
    }
}

fn generate(
    g: &Global,
    shape: &str,
    agents: usize,
    density: f64,
    pmr: bool,
    output: Option<&Path>,
) -> Result<()> {
    let shape: Shape = shape.parse()?;
    let spec = GenSpec::new(shape, agents, density, g.seed);
    let text = if pmr {
        if shape != Shape::PmrCycle {
            bail!(Error::GenerationFailed("--pmr needs --shape pmr-cycle".into()));
        }
        gen_pmr(&spec)?.serialize()
    } else {
        serialize(&gen_instance(&spec)?)
    };
    emit(output, &text)
}

fn bench(g: &Global, file: &Path, jobs: usize, output: Option<&Path>) -> Result<()> {
    let mut suite = Suite::parse(&read(file)?).with_context(|| format!("invalid suite {}", file.display()))?;
    for job in &mut suite.jobs {
        job.spec.seed = job.spec.seed.wrapping_add(g.seed);
    }
    let cfg = BenchConfig {
        cap: g.cap,
        budget: g.budget,
        jobs,
    };
    let report = run_bench(&suite, &cfg)?;
    let csv = report.to_csv();
    if let Some(out) = output {
        emit(Some(out), &csv)?;
    }
    match g.format {
        Format::Csv => print!("{csv}"),
        Format::Text => print!("{}", report.summary()),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Cmd::Validate { file } => validate(g, file),
        Cmd::Solve { file } => solve(g, file),
        Cmd::Witness { file, check } => witness(g, file, *check),
        Cmd::Oracle { file } => oracle(g, file),
        Cmd::Stable { file, item } => stable(g, file, item.as_deref()),
        Cmd::Reduce {
            pmr_file,
            output,
            verify,
        } => reduce(g, pmr_file, output.as_deref(), *verify),
        Cmd::Gen {
            shape,
            agents,
            density,
            pmr,
            output,
        } => generate(g, shape, *agents, *density, *pmr, output.as_deref()),
        Cmd::Bench {
            suite,
            jobs,
            output,
        } => bench(g, suite, *jobs, output.as_deref()),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(o) = err.downcast_ref::<Outcome>() {
        return match o {
            Outcome::No => 1,
            Outcome::Exhausted => 3,
            Outcome::CheckFailed(_) => 4,
        };
    }
    match err.downcast_ref::<Error>() {
        Some(Error::CapExceeded(_) | Error::LimitExceeded(_)) => 3,
        Some(Error::Invariant(_)) => 4,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let code = exit_code(&err);
            if code != 1 {
                eprintln!("error: {err:#}");
            }
            ExitCode::from(code)
        }
    }
}
