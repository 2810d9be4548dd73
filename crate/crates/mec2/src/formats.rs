//! Bit-exact text formats: graphs, colorings, branch and tree
//! decompositions, and task-assignment instances. Everything is
//! whitespace-separated ASCII with LF line endings and 0-based indices;
//! `#`-prefixed comment lines are allowed anywhere. Parse errors are
//! deterministic and cite the offending line.

use crate::decomp::{BranchDecomposition, TreeDecomposition};
use crate::graph::{EdgeColoring, Graph};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("{0}")]
    Structure(String),
    #[error("unsupported instance: {0}")]
    Unsupported(String),
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line { line, msg: msg.into() }
}

/// Non-comment, non-blank lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(token: &str, line: usize, what: &str) -> Result<usize, ParseError> {
    token
        .parse::<usize>()
        .map_err(|_| err(line, format!("expected {what}, found {token:?}")))
}

/// Parses the `p <n> <m>` graph format.
pub fn parse_graph(text: &str) -> Result<Graph, ParseError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| err(0, "empty input, expected a 'p <n> <m>' header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "p" {
        return Err(err(header_line, "expected header 'p <n> <m>'"));
    }
    let n = parse_usize(tokens[1], header_line, "vertex count")?;
    let m = parse_usize(tokens[2], header_line, "edge count")?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashMap::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 3 || tokens[0] != "e" {
            return Err(err(line, "expected edge line 'e <u> <v>'"));
        }
        let u = parse_usize(tokens[1], line, "endpoint")?;
        let v = parse_usize(tokens[2], line, "endpoint")?;
        if u == v {
            return Err(err(line, format!("self-loop at vertex {u}")));
        }
        if u >= n || v >= n {
            return Err(err(line, format!("endpoint out of range for {n} vertices")));
        }
        let key = (u.min(v), u.max(v));
        if let Some(first) = seen.insert(key, line) {
            return Err(err(line, format!("duplicate of edge ({}, {}) from line {first}", key.0, key.1)));
        }
        edges.push(key);
    }
    if edges.len() != m {
        return Err(ParseError::Structure(format!(
            "header declares {m} edges but {} edge lines found",
            edges.len()
        )));
    }
    Graph::new(n, edges).map_err(|e| ParseError::Structure(e.to_string()))
}

pub fn emit_graph(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p {} {}", g.vertex_count(), g.edge_count());
    for &(u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}

/// Parses the `c <edge_index> <color>` / trailing `v <value>` format. The
/// edge count is inferred; indices must cover it exactly once and the
/// declared value must equal the number of true-colored edges.
pub fn parse_coloring(text: &str) -> Result<EdgeColoring, ParseError> {
    let mut assignments: Vec<(usize, usize, u8)> = Vec::new();
    let mut declared: Option<(usize, usize)> = None;
    for (line, content) in content_lines(text) {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["c", idx, color] => {
                if declared.is_some() {
                    return Err(err(line, "color line after the 'v <value>' trailer"));
                }
                let idx = parse_usize(idx, line, "edge index")?;
                let color = parse_usize(color, line, "color")?;
                if color > 2 {
                    return Err(err(line, format!("color {color} is not in {{0, 1, 2}}")));
                }
                assignments.push((idx, line, color as u8));
            }
            ["v", value] => {
                if declared.is_some() {
                    return Err(err(line, "second 'v <value>' trailer"));
                }
                declared = Some((parse_usize(value, line, "value")?, line));
            }
            _ => return Err(err(line, "expected 'c <edge_index> <color>' or 'v <value>'")),
        }
    }
    let (declared_value, trailer_line) =
        declared.ok_or_else(|| ParseError::Structure("missing 'v <value>' trailer".into()))?;
    let m = assignments.len();
    let mut colors = vec![None; m];
    for &(idx, line, color) in &assignments {
        if idx >= m {
            return Err(err(line, format!("edge index {idx} out of range for {m} color lines")));
        }
        if colors[idx].is_some() {
            return Err(err(line, format!("edge index {idx} assigned twice")));
        }
        colors[idx] = Some(color);
    }
    let colors: Vec<u8> = colors.into_iter().map(|c| c.expect("pigeonhole")).collect();
    let coloring = EdgeColoring::new(colors).map_err(|e| ParseError::Structure(e.to_string()))?;
    if coloring.value() != declared_value {
        return Err(err(
            trailer_line,
            format!("declared value {declared_value} but {} edges are colored", coloring.value()),
        ));
    }
    Ok(coloring)
}

pub fn emit_coloring(c: &EdgeColoring) -> String {
    let mut out = String::new();
    for (i, &color) in c.colors().iter().enumerate() {
        let _ = writeln!(out, "c {i} {color}");
    }
    let _ = writeln!(out, "v {}", c.value());
    out
}

/// Parses `bd <num_nodes> <width>` with `t <a> <b>` tree edges and
/// `l <node> <edge_index>` leaf lines; validates against `g` and requires
/// the declared width to match the recomputed one.
pub fn parse_branchdecomp(text: &str, g: &Graph) -> Result<BranchDecomposition, ParseError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| err(0, "empty input, expected a 'bd <num_nodes> <width>' header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "bd" {
        return Err(err(header_line, "expected header 'bd <num_nodes> <width>'"));
    }
    let node_count = parse_usize(tokens[1], header_line, "node count")?;
    let width = parse_usize(tokens[2], header_line, "width")?;
    let mut tree_edges = Vec::new();
    let mut leaf_map = Vec::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.as_slice() {
            ["t", a, b] => tree_edges.push((
                parse_usize(a, line, "node")?,
                parse_usize(b, line, "node")?,
            )),
            ["l", node, edge] => leaf_map.push((
                parse_usize(node, line, "node")?,
                parse_usize(edge, line, "edge index")?,
            )),
            _ => return Err(err(line, "expected 't <a> <b>' or 'l <node> <edge_index>'")),
        }
    }
    let bd = BranchDecomposition::from_parts(node_count, tree_edges, leaf_map, g)
        .map_err(|e| ParseError::Structure(e.to_string()))?;
    if bd.width() != width {
        return Err(ParseError::Structure(format!(
            "declared width {width} but the decomposition has width {}",
            bd.width()
        )));
    }
    Ok(bd)
}

pub fn emit_branchdecomp(bd: &BranchDecomposition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "bd {} {}", bd.node_count(), bd.width());
    for &(a, b) in bd.tree_edges() {
        let _ = writeln!(out, "t {a} {b}");
    }
    for (node, edge) in bd.leaf_map() {
        let _ = writeln!(out, "l {node} {edge}");
    }
    out
}

/// Parses `td <num_bags> <width>` with `b <bag_id> <v1> ...` bags and
/// `t <a> <b>` tree edges; validates the three decomposition conditions
/// against `g`.
pub fn parse_treedecomp(text: &str, g: &Graph) -> Result<TreeDecomposition, ParseError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| err(0, "empty input, expected a 'td <num_bags> <width>' header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 3 || tokens[0] != "td" {
        return Err(err(header_line, "expected header 'td <num_bags> <width>'"));
    }
    let bag_count = parse_usize(tokens[1], header_line, "bag count")?;
    let width = parse_usize(tokens[2], header_line, "width")?;
    let mut bags: Vec<Option<Vec<usize>>> = vec![None; bag_count];
    let mut tree_edges = Vec::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        match tokens.split_first() {
            Some((&"b", rest)) if !rest.is_empty() => {
                let id = parse_usize(rest[0], line, "bag id")?;
                if id >= bag_count {
                    return Err(err(line, format!("bag id {id} out of range for {bag_count} bags")));
                }
                if bags[id].is_some() {
                    return Err(err(line, format!("bag {id} declared twice")));
                }
                let vertices = rest[1..]
                    .iter()
                    .map(|t| parse_usize(t, line, "vertex"))
                    .collect::<Result<Vec<_>, _>>()?;
                bags[id] = Some(vertices);
            }
            Some((&"t", rest)) if rest.len() == 2 => {
                tree_edges.push((
                    parse_usize(rest[0], line, "bag id")?,
                    parse_usize(rest[1], line, "bag id")?,
                ));
            }
            _ => return Err(err(line, "expected 'b <bag_id> <v1> ...' or 't <a> <b>'")),
        }
    }
    let bags: Vec<Vec<usize>> = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| ParseError::Structure(format!("bag {i} missing"))))
        .collect::<Result<_, _>>()?;
    let td = TreeDecomposition::new(bags, tree_edges);
    td.validate(g).map_err(|e| ParseError::Structure(e.to_string()))?;
    if td.width() != width {
        return Err(ParseError::Structure(format!(
            "declared width {width} but the decomposition has width {}",
            td.width()
        )));
    }
    Ok(td)
}

pub fn emit_treedecomp(td: &TreeDecomposition) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "td {} {}", td.bags().len(), td.width());
    for (id, bag) in td.bags().iter().enumerate() {
        let _ = write!(out, "b {id}");
        for v in bag {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    for &(a, b) in td.tree_edges() {
        let _ = writeln!(out, "t {a} {b}");
    }
    out
}

/// A two-slot task assignment instance: agents are vertices, two-agent tasks
/// are edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct T2atcInstance {
    pub agents: usize,
    pub tasks: Vec<(usize, usize)>,
}

/// Parses `tasks <n_agents> <n_tasks> <k>` with `task <a> <b>` lines. Only
/// k = 2 with two-agent tasks is supported.
pub fn parse_t2atc(text: &str) -> Result<T2atcInstance, ParseError> {
    let mut lines = content_lines(text);
    let (header_line, header) = lines
        .next()
        .ok_or_else(|| err(0, "empty input, expected a 'tasks <n_agents> <n_tasks> <k>' header"))?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.len() != 4 || tokens[0] != "tasks" {
        return Err(err(header_line, "expected header 'tasks <n_agents> <n_tasks> <k>'"));
    }
    let agents = parse_usize(tokens[1], header_line, "agent count")?;
    let task_count = parse_usize(tokens[2], header_line, "task count")?;
    let k = parse_usize(tokens[3], header_line, "slot count")?;
    if k != 2 {
        return Err(ParseError::Unsupported(format!("only k = 2 time slots are supported, got k = {k}")));
    }
    let mut tasks = Vec::with_capacity(task_count);
    let mut seen = std::collections::HashMap::new();
    for (line, content) in lines {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.len() != 3 || tokens[0] != "task" {
            if tokens.first() == Some(&"task") {
                return Err(ParseError::Unsupported(
                    "only two-agent tasks are supported".into(),
                ));
            }
            return Err(err(line, "expected task line 'task <agent_a> <agent_b>'"));
        }
        let a = parse_usize(tokens[1], line, "agent")?;
        let b = parse_usize(tokens[2], line, "agent")?;
        if a == b {
            return Err(err(line, format!("task assigned twice to agent {a}")));
        }
        if a >= agents || b >= agents {
            return Err(err(line, format!("agent out of range for {agents} agents")));
        }
        let key = (a.min(b), a.max(b));
        if let Some(first) = seen.insert(key, line) {
            return Err(err(line, format!("duplicate of task from line {first}")));
        }
        tasks.push(key);
    }
    if tasks.len() != task_count {
        return Err(ParseError::Structure(format!(
            "header declares {task_count} tasks but {} task lines found",
            tasks.len()
        )));
    }
    tasks.sort_unstable();
    Ok(T2atcInstance { agents, tasks })
}

pub fn emit_t2atc(inst: &T2atcInstance) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "tasks {} {} 2", inst.agents, inst.tasks.len());
    let mut tasks = inst.tasks.clone();
    tasks.sort_unstable();
    for (a, b) in tasks {
        let _ = writeln!(out, "task {a} {b}");
    }
    out
}

/// One graph edge per task.
pub fn t2atc_to_graph(inst: &T2atcInstance) -> Result<Graph, ParseError> {
    Graph::new(inst.agents, inst.tasks.iter().copied())
        .map_err(|e| ParseError::Structure(e.to_string()))
}

/// Social welfare summary for a solution executing `tasks_executed` tasks:
/// each two-agent task contributes one unit of utility to both agents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SwReport {
    pub tasks_executed: usize,
    pub social_welfare: usize,
}

pub fn sw_report(tasks_executed: usize) -> SwReport {
    SwReport { tasks_executed, social_welfare: 2 * tasks_executed }
}
