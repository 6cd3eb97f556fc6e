//! Benchmark suites: generated instances run through the solver, the
//! witness builder and the oracle, with wall times.
//!
//! A suite is a text file with one job per line,
//!
//! ```text
//! <shape> <agents> <density> <seed> <command>[,<command>...]
//! ```
//!
//! where a command is `solve`, `witness` or `oracle`. Blank lines and `#`
//! comments are ignored.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::format::{parse_err, tokenized_lines};
use crate::generator::{gen_instance, GenSpec, Shape};
use crate::instance::Instance;
use crate::oracle::{bfs_reachable, OracleStatus};
use crate::tree_solver::solve_tree;
use crate::witness::stream_witness;

/// Stack size for worker threads; the witness construction recurses once
/// per contraction.
pub const WORKER_STACK: usize = 256 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Solve,
    Witness,
    Oracle,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Solve => "solve",
            Command::Witness => "witness",
            Command::Oracle => "oracle",
        })
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solve" => Ok(Command::Solve),
            "witness" => Ok(Command::Witness),
            "oracle" => Ok(Command::Oracle),
            other => Err(parse_err(0, format!("unknown command `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Job {
    pub spec: GenSpec,
    pub commands: Vec<Command>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Suite {
    pub jobs: Vec<Job>,
}

impl Suite {
    pub fn parse(text: &str) -> Result<Self> {
        let mut jobs = Vec::new();
        for (line, tokens) in tokenized_lines(text) {
            if tokens.len() != 5 {
                return Err(parse_err(
                    line,
                    "expected `<shape> <agents> <density> <seed> <commands>`",
                ));
            }
            let field = |what: &str| parse_err(line, format!("bad {what}"));
            let shape: Shape = tokens[0].parse().map_err(|_| field("shape"))?;
            let agents: usize = tokens[1].parse().map_err(|_| field("agent count"))?;
            let density: f64 = tokens[2].parse().map_err(|_| field("density"))?;
            let seed: u64 = tokens[3].parse().map_err(|_| field("seed"))?;
            let commands = tokens[4]
                .split(',')
                .map(|c| c.parse().map_err(|_| parse_err(line, format!("unknown command `{c}`"))))
                .collect::<Result<Vec<Command>>>()?;
            jobs.push(Job {
                spec: GenSpec::new(shape, agents, density, seed),
                commands,
            });
        }
        Ok(Suite { jobs })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchConfig {
    pub cap: usize,
    pub budget: usize,
    /// Worker threads; jobs are distributed round-robin and rows keep
    /// suite order.
    pub jobs: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub spec: GenSpec,
    pub command: Command,
    /// `yes`, `no`, `reachable`, `unreachable`, `exhausted`, `ok`,
    /// `CapExceeded`, `NotATree` or `error`.
    pub status: String,
    pub millis: f64,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub rows: Vec<Row>,
}

fn run_command(inst: &Instance, command: Command, cfg: &BenchConfig) -> (String, String) {
    match command {
        Command::Solve => match solve_tree(inst) {
            Ok(d) if d.is_yes() => ("yes".into(), String::new()),
            Ok(_) => ("no".into(), String::new()),
            Err(Error::NotATree) => ("NotATree".into(), String::new()),
            Err(e) => ("error".into(), e.to_string()),
        },
        Command::Witness => match stream_witness(inst, cfg.cap, &mut |_| Ok(())) {
            Ok(len) => ("ok".into(), format!("moves={len}")),
            Err(Error::NotATree) => ("NotATree".into(), String::new()),
            Err(Error::CapExceeded(cap)) => ("CapExceeded".into(), format!("cap={cap}")),
            Err(Error::NotYesInstance) => ("no".into(), String::new()),
            Err(e) => ("error".into(), e.to_string()),
        },
        Command::Oracle => {
            let r = bfs_reachable(inst, cfg.budget);
            let status = match r.status {
                OracleStatus::Reachable { distance, .. } => {
                    return ("reachable".into(), format!("distance={distance} explored={}", r.explored))
                }
                OracleStatus::Unreachable => "unreachable",
                OracleStatus::Exhausted { .. } => "exhausted",
            };
            (status.into(), format!("explored={}", r.explored))
        }
    }
}

fn run_job(job: &Job, cfg: &BenchConfig) -> Vec<Row> {
    let inst = match gen_instance(&job.spec) {
        Ok(inst) => inst,
        Err(e) => {
            return job
                .commands
                .iter()
                .map(|&command| Row {
                    spec: job.spec,
                    command,
                    status: "error".into(),
                    millis: 0.0,
                    detail: e.to_string(),
                })
                .collect()
        }
    };
    job.commands
        .iter()
        .map(|&command| {
            let start = Instant::now();
            let (status, detail) = run_command(&inst, command, cfg);
            Row {
                spec: job.spec,
                command,
                status,
                millis: start.elapsed().as_secs_f64() * 1e3,
                detail,
            }
        })
        .collect()
}

/// Runs every job of the suite. Per-instance failures become rows with
/// an error status; only thread spawning can fail.
pub fn run_bench(suite: &Suite, cfg: &BenchConfig) -> Result<Report> {
    let workers = cfg.jobs.clamp(1, suite.jobs.len().max(1));
    let mut per_job: Vec<Option<Vec<Row>>> = vec![None; suite.jobs.len()];
    std::thread::scope(|scope| -> Result<()> {
        let mut handles = Vec::with_capacity(workers);
        for w in 0..workers {
            let handle = std::thread::Builder::new()
                .stack_size(WORKER_STACK)
                .spawn_scoped(scope, move || {
                    suite
                        .jobs
                        .iter()
                        .enumerate()
                        .skip(w)
                        .step_by(workers)
                        .map(|(k, job)| (k, run_job(job, cfg)))
                        .collect::<Vec<_>>()
                })
                .map_err(|e| Error::Invariant(format!("cannot spawn worker: {e}")))?;
            handles.push(handle);
        }
        for handle in handles {
            let done = handle
                .join()
                .map_err(|_| Error::Invariant("bench worker panicked".into()))?;
            for (k, rows) in done {
                per_job[k] = Some(rows);
            }
        }
        Ok(())
    })?;
    Ok(Report {
        rows: per_job.into_iter().flatten().flatten().collect(),
    })
}

impl Report {
    pub const CSV_HEADER: &'static str = "shape,agents,density,seed,command,status,millis,detail";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            out += &format!(
                "{},{},{},{},{},{},{:.3},{}\n",
                r.spec.shape,
                r.spec.agent_count,
                r.spec.accept_density,
                r.spec.seed,
                r.command,
                r.status,
                r.millis,
                r.detail.replace(',', ";")
            );
        }
        out
    }

    /// One line per (command, shape, size) with the row count, the status
    /// tally and the mean and maximum time.
    pub fn summary(&self) -> String {
        let mut keys: Vec<(String, String, usize)> = Vec::new();
        for r in &self.rows {
            let key = (r.command.to_string(), r.spec.shape.to_string(), r.spec.agent_count);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        let mut out = String::new();
        for (command, shape, n) in keys {
            let rows: Vec<&Row> = self
                .rows
                .iter()
                .filter(|r| {
                    r.command.to_string() == command
                        && r.spec.shape.to_string() == shape
                        && r.spec.agent_count == n
                })
                .collect();
            let mut tally: Vec<(String, usize)> = Vec::new();
            for r in &rows {
                match tally.iter_mut().find(|(s, _)| *s == r.status) {
                    Some((_, c)) => *c += 1,
                    None => tally.push((r.status.clone(), 1)),
                }
            }
            let mean = rows.iter().map(|r| r.millis).sum::<f64>() / rows.len() as f64;
            let max = rows.iter().map(|r| r.millis).fold(0.0, f64::max);
            let tally: Vec<String> = tally.iter().map(|(s, c)| format!("{s}={c}")).collect();
            out += &format!(
                "{command:<8} {shape:<10} n={n:<7} runs={:<4} mean={mean:.3}ms max={max:.3}ms {}\n",
                rows.len(),
                tally.join(" ")
            );
        }
        out
    }
}
