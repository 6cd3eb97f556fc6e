//! Line-oriented instance files.
//!
//! ```text
//! # comment
//! agents 3
//! items 3
//! accept x 1 2
//! accept y 1 2 3
//! accept z 2 3
//! edge 1 2
//! edge 2 3
//! assign a 1 x
//! assign b 1 y
//! ```
//!
//! The agent and item universes are the names used by the `assign a` lines;
//! every other line must refer to those names. Dense indices follow the
//! natural order of the names, and [`serialize`] writes the canonical form:
//! headers, then `accept`, `edge`, `assign a`, `assign b`, each sorted by
//! index.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::instance::{natural_cmp, Instance};

/// An instance file as written, before any validation beyond tokenizing.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RawInstance {
    pub agents: Option<usize>,
    pub items: Option<usize>,
    /// `(line, item, agents)`
    pub accept: Vec<(usize, String, Vec<String>)>,
    /// `(line, u, v)`
    pub edges: Vec<(usize, String, String)>,
    /// `(line, agent, item)`
    pub assign_a: Vec<(usize, String, String)>,
    pub assign_b: Vec<(usize, String, String)>,
}

/// Splits a file into `(line number, tokens)` with comments and blank lines
/// removed.
pub(crate) fn tokenized_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(k, line)| {
        let body = line.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = body.split_whitespace().collect();
        (!tokens.is_empty()).then_some((k + 1, tokens))
    })
}

pub(crate) fn parse_count(line: usize, tokens: &[&str], slot: &mut Option<usize>) -> Result<()> {
    if tokens.len() != 2 {
        return Err(parse_err(line, format!("expected `{} <count>`", tokens[0])));
    }
    if slot.is_some() {
        return Err(parse_err(line, format!("duplicate `{}` header", tokens[0])));
    }
    let n = tokens[1]
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("invalid count `{}`", tokens[1])))?;
    *slot = Some(n);
    Ok(())
}

pub(crate) fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

impl RawInstance {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = RawInstance::default();
        for (line, tokens) in tokenized_lines(text) {
            match tokens[0] {
                "agents" => parse_count(line, &tokens, &mut raw.agents)?,
                "items" => parse_count(line, &tokens, &mut raw.items)?,
                "accept" => {
                    if tokens.len() < 2 {
                        return Err(parse_err(line, "expected `accept <item> <agent>...`"));
                    }
                    raw.accept.push((
                        line,
                        tokens[1].to_string(),
                        tokens[2..].iter().map(|s| s.to_string()).collect(),
                    ));
                }
                "edge" => {
                    if tokens.len() != 3 {
                        return Err(parse_err(line, "expected `edge <u> <v>`"));
                    }
                    raw.edges
                        .push((line, tokens[1].to_string(), tokens[2].to_string()));
                }
                "assign" => {
                    if tokens.len() != 4 {
                        return Err(parse_err(line, "expected `assign a|b <agent> <item>`"));
                    }
                    let entry = (line, tokens[2].to_string(), tokens[3].to_string());
                    match tokens[1] {
                        "a" => raw.assign_a.push(entry),
                        "b" => raw.assign_b.push(entry),
                        other => {
                            return Err(parse_err(
                                line,
                                format!("unknown assignment `{other}`, expected a or b"),
                            ))
                        }
                    }
                }
                other => return Err(parse_err(line, format!("unknown keyword `{other}`"))),
            }
        }
        Ok(raw)
    }
}

pub(crate) fn sorted_names<'a>(names: impl Iterator<Item = &'a str>) -> Vec<String> {
    let mut out: Vec<String> = names.map(str::to_string).collect();
    out.sort_by(|a, b| natural_cmp(a, b));
    out.dedup();
    out
}

/// Resolves names, re-indexes densely and checks every instance invariant.
pub fn validate_instance(raw: &RawInstance) -> Result<Instance> {
    let declared_agents = raw
        .agents
        .ok_or_else(|| parse_err(0, "missing `agents <n>` header"))?;
    let declared_items = raw
        .items
        .ok_or_else(|| parse_err(0, "missing `items <n>` header"))?;
    if declared_agents != declared_items {
        return Err(Error::SizeMismatch {
            agents: declared_agents,
            items: declared_items,
        });
    }
    let n = declared_agents;

    let agent_names = sorted_names(raw.assign_a.iter().map(|(_, a, _)| a.as_str()));
    let item_names = sorted_names(raw.assign_a.iter().map(|(_, _, j)| j.as_str()));
    if agent_names.len() != n || raw.assign_a.len() != n {
        return Err(Error::NotBijection {
            which: "a".into(),
            detail: format!(
                "{} assignment lines over {} distinct agents for {n} declared agents",
                raw.assign_a.len(),
                agent_names.len()
            ),
        });
    }
    if item_names.len() != n {
        return Err(Error::NotBijection {
            which: "a".into(),
            detail: format!("{} distinct items for {n} declared items", item_names.len()),
        });
    }
    let agent_id = Instance::name_lookup(&agent_names);
    let item_id = Instance::name_lookup(&item_names);

    let mut accept: Vec<Option<Vec<usize>>> = vec![None; n];
    for (line, item, agents) in &raw.accept {
        let &j = item_id
            .get(item.as_str())
            .ok_or_else(|| parse_err(*line, format!("unknown item `{item}`")))?;
        if accept[j].is_some() {
            return Err(parse_err(*line, format!("second `accept` line for item `{item}`")));
        }
        let set = agents
            .iter()
            .map(|a| {
                agent_id
                    .get(a.as_str())
                    .copied()
                    .ok_or_else(|| parse_err(*line, format!("unknown agent `{a}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        accept[j] = Some(set);
    }
    let accept: Vec<Vec<usize>> = accept.into_iter().map(Option::unwrap_or_default).collect();

    let mut edges = Vec::with_capacity(raw.edges.len());
    for (_, u, v) in &raw.edges {
        let lookup = |name: &str| agent_id.get(name).copied();
        match (lookup(u), lookup(v)) {
            (Some(a), Some(b)) => edges.push((a, b)),
            _ => {
                return Err(Error::BadEdge {
                    u: u.clone(),
                    v: v.clone(),
                    reason: "unknown agent".into(),
                })
            }
        }
    }

    let source = resolve_assignment("a", &raw.assign_a, n, &agent_id, &item_id)?;
    let target = resolve_assignment("b", &raw.assign_b, n, &agent_id, &item_id)?;
    Instance::new(agent_names, item_names, accept, &edges, source, target)
}

fn resolve_assignment(
    which: &str,
    lines: &[(usize, String, String)],
    n: usize,
    agent_id: &HashMap<&str, usize>,
    item_id: &HashMap<&str, usize>,
) -> Result<Vec<usize>> {
    let bad = |detail: String| Error::NotBijection {
        which: which.into(),
        detail,
    };
    let mut items = vec![usize::MAX; n];
    for (line, agent, item) in lines {
        let &i = agent_id
            .get(agent.as_str())
            .ok_or_else(|| bad(format!("line {line}: unknown agent `{agent}`")))?;
        let &j = item_id
            .get(item.as_str())
            .ok_or_else(|| bad(format!("line {line}: unknown item `{item}`")))?;
        if items[i] != usize::MAX {
            return Err(bad(format!("line {line}: agent `{agent}` assigned twice")));
        }
        items[i] = j;
    }
    if items.contains(&usize::MAX) {
        return Err(bad(format!("{} of {n} agents assigned", lines.len())));
    }
    Ok(items)
}

/// Parses and validates in one step.
pub fn parse_instance(text: &str) -> Result<Instance> {
    validate_instance(&RawInstance::parse(text)?)
}

/// Canonical text form of an instance.
pub fn serialize(inst: &Instance) -> String {
    let mut out = String::new();
    let n = inst.len();
    writeln!(out, "agents {n}").unwrap();
    writeln!(out, "items {n}").unwrap();
    for j in 0..n {
        write!(out, "accept {}", inst.item_name(j)).unwrap();
        for &i in inst.acceptors(j) {
            write!(out, " {}", inst.agent_name(i)).unwrap();
        }
        out.push('\n');
    }
    for (u, v) in inst.edges() {
        writeln!(out, "edge {} {}", inst.agent_name(u), inst.agent_name(v)).unwrap();
    }
    for (tag, c) in [("a", inst.source()), ("b", inst.target())] {
        for i in 0..n {
            writeln!(
                out,
                "assign {tag} {} {}",
                inst.agent_name(i),
                inst.item_name(c.item(i))
            )
            .unwrap();
        }
    }
    out
}
