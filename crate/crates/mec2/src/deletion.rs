//! Iterative-compression solvers for the two deletion problems: remove at
//! most k edges (respectively vertices) so that the remainder is
//! 2-edge-colorable. The compression steps reduce to constrained instances
//! on graphs of maximum degree two, which are solved exactly in polynomial
//! time per component.

use crate::graph::{color_feasible_graph, is_2ec_feasible, EdgeColoring, Graph};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DeletionError {
    #[error("host graph has maximum degree {0}, the constrained solver needs at most 2")]
    HostDegreeTooHigh(usize),
    #[error("invalid constraint set: {0}")]
    BadConstraintSet(String),
    #[error("removing W must leave a 2-edge-colorable graph")]
    DisjointPrecondition,
    #[error("pendant instance breaks the single-pendant restriction: {0}")]
    PendantRestriction(String),
}

/// A walk through one component of a max-degree-two graph.
#[derive(Debug, Clone)]
struct Trace {
    /// Vertices in walk order.
    vertices: Vec<usize>,
    /// edges[i] joins vertices[i] and vertices[i + 1]; on cycles the last
    /// entry closes back to vertices[0].
    edges: Vec<usize>,
    is_cycle: bool,
}

/// Deterministic traversal: paths start at their lowest endpoint, cycles at
/// their lowest vertex heading toward its lowest neighbor.
fn trace_components(g: &Graph) -> Vec<Trace> {
    let mut traces = Vec::new();
    for part in g.components() {
        if part.len() == 1 && g.degree(part[0]) == 0 {
            traces.push(Trace { vertices: part, edges: Vec::new(), is_cycle: false });
            continue;
        }
        let is_cycle = part.iter().all(|&v| g.degree(v) == 2);
        let start = if is_cycle {
            part[0]
        } else {
            *part.iter().find(|&&v| g.degree(v) <= 1).expect("a path has an endpoint")
        };
        let mut vertices = vec![start];
        let mut edges = Vec::new();
        let mut used_edge = vec![false; g.edge_count()];
        let mut at = start;
        loop {
            let next = g
                .incident_edges(at)
                .iter()
                .copied()
                .find(|&e| !used_edge[e]);
            let Some(e) = next else { break };
            used_edge[e] = true;
            edges.push(e);
            at = g.other_endpoint(e, at);
            if at == start {
                break;
            }
            vertices.push(at);
        }
        traces.push(Trace { vertices, edges, is_cycle });
    }
    traces
}

/// A max-degree-two host with two sets of edges forced to color 1 and 2
/// respectively (unless deleted).
#[derive(Debug, Clone)]
pub struct ConstrainedPathInstance {
    host: Graph,
    in_e1: Vec<bool>,
    in_e2: Vec<bool>,
}

impl ConstrainedPathInstance {
    pub fn new(host: Graph, e1: &[usize], e2: &[usize]) -> Result<Self, DeletionError> {
        if host.max_degree() > 2 {
            return Err(DeletionError::HostDegreeTooHigh(host.max_degree()));
        }
        let mut in_e1 = vec![false; host.edge_count()];
        let mut in_e2 = vec![false; host.edge_count()];
        for (&set, flags) in [(&e1, &mut in_e1), (&e2, &mut in_e2)] {
            for &e in set.iter() {
                if e >= host.edge_count() {
                    return Err(DeletionError::BadConstraintSet(format!(
                        "edge index {e} out of range"
                    )));
                }
                flags[e] = true;
            }
        }
        Ok(ConstrainedPathInstance { host, in_e1, in_e2 })
    }

    pub fn host(&self) -> &Graph {
        &self.host
    }

    fn class(&self, e: usize) -> Option<u8> {
        match (self.in_e1[e], self.in_e2[e]) {
            (true, _) => Some(1),
            (_, true) => Some(2),
            _ => None,
        }
    }
}

/// Two constrained edges on the same walk clash iff the parity of the gap
/// between them contradicts their classes: a total proper coloring
/// alternates, so equal classes need an odd number of in-between edges and
/// distinct classes an even number.
fn in_conflict(class_a: u8, class_b: u8, gap: usize) -> bool {
    if class_a == class_b {
        gap.is_multiple_of(2)
    } else {
        !gap.is_multiple_of(2)
    }
}

/// Smallest deletion set making the forced classes satisfiable, plus a total
/// proper coloring of the remainder.
///
/// Edges in both classes are deleted outright. Path components fall to a
/// left-to-right scan deleting the right edge of every conflict; cycles cut
/// at a conflict-free gap and reduce to paths, or, when every consecutive
/// pair conflicts, drop every other constrained edge.
pub fn solve_constrained_paths(inst: &ConstrainedPathInstance) -> (Vec<usize>, EdgeColoring) {
    let host = &inst.host;
    let mut deleted = vec![false; host.edge_count()];
    for (e, slot) in deleted.iter_mut().enumerate() {
        if inst.in_e1[e] && inst.in_e2[e] {
            *slot = true;
        }
    }
    let (residual, map) = host.edge_subgraph(|e| !deleted[e]);

    for trace in trace_components(&residual) {
        let classes: Vec<(usize, u8)> = trace
            .edges
            .iter()
            .enumerate()
            .filter_map(|(pos, &e)| inst.class(map[e]).map(|c| (pos, c)))
            .collect();
        if !trace.is_cycle {
            scan_path(&trace, &classes, &map, &mut deleted);
        } else if classes.is_empty() {
            if trace.edges.len() % 2 == 1 {
                // Unconstrained odd cycle: one cut is forced either way.
                let cut = *trace.edges.iter().min().unwrap();
                deleted[map[cut]] = true;
            }
        } else {
            let r = classes.len();
            let len = trace.edges.len();
            let gap_after = |i: usize| {
                let here = classes[i].0;
                let next = classes[(i + 1) % r].0;
                if r == 1 {
                    len - 1
                } else if next > here {
                    next - here - 1
                } else {
                    len - here + next - 1
                }
            };
            let conflict_free =
                (0..r).find(|&i| !in_conflict(classes[i].1, classes[(i + 1) % r].1, gap_after(i)));
            match conflict_free {
                Some(i) => {
                    // Cut the gap out and solve the long way round as a path
                    // running from the (i+1)-th constrained edge back to the
                    // i-th; the gap edges rejoin during coloring.
                    let first = (classes[(i + 1) % r].0) % len;
                    let path_len = len - gap_after(i);
                    let path_edges: Vec<usize> =
                        (0..path_len).map(|j| trace.edges[(first + j) % len]).collect();
                    let path_classes: Vec<(usize, u8)> = path_edges
                        .iter()
                        .enumerate()
                        .filter_map(|(pos, &e)| inst.class(map[e]).map(|c| (pos, c)))
                        .collect();
                    let pseudo = Trace { vertices: Vec::new(), edges: path_edges, is_cycle: false };
                    scan_path(&pseudo, &path_classes, &map, &mut deleted);
                }
                None => {
                    // Every consecutive pair conflicts: ceil(r / 2) deletions.
                    for j in (1..r).step_by(2) {
                        deleted[map[trace.edges[classes[j].0]]] = true;
                    }
                    if r % 2 == 1 {
                        deleted[map[trace.edges[classes[r - 1].0]]] = true;
                    }
                }
            }
        }
    }

    let coloring = color_remainder(inst, &deleted);
    let removed: Vec<usize> = (0..host.edge_count()).filter(|&e| deleted[e]).collect();
    (removed, coloring)
}

fn scan_path(trace: &Trace, classes: &[(usize, u8)], map: &[usize], deleted: &mut [bool]) {
    let mut prev: Option<(usize, u8)> = None;
    for &(pos, class) in classes {
        match prev {
            None => prev = Some((pos, class)),
            Some((ppos, pclass)) => {
                if in_conflict(pclass, class, pos - ppos - 1) {
                    deleted[map[trace.edges[pos]]] = true;
                    prev = None;
                } else {
                    prev = Some((pos, class));
                }
            }
        }
    }
}

/// Totally colors the kept edges, anchoring each walk at its first
/// constrained edge (or color 1 when unconstrained) and alternating outward.
fn color_remainder(inst: &ConstrainedPathInstance, deleted: &[bool]) -> EdgeColoring {
    let host = &inst.host;
    let (kept, map) = host.edge_subgraph(|e| !deleted[e]);
    let mut coloring = EdgeColoring::uncolored(host.edge_count());
    for trace in trace_components(&kept) {
        if trace.edges.is_empty() {
            continue;
        }
        let anchor = trace
            .edges
            .iter()
            .position(|&e| inst.class(map[e]).is_some());
        let (anchor_pos, anchor_color) = match anchor {
            Some(pos) => (pos, inst.class(map[trace.edges[pos]]).unwrap()),
            None => (0, 1),
        };
        for (pos, &e) in trace.edges.iter().enumerate() {
            let flip = (pos + anchor_pos) % 2 == 1;
            let color = if flip { 3 - anchor_color } else { anchor_color };
            coloring.set(map[e], color);
        }
    }
    debug_assert!(crate::graph::validate_coloring(host, &coloring).unwrap());
    coloring
}

/// Disjoint compression step for edge deletion: keep every edge of `w_edges`
/// (they must leave a 2-edge-colorable graph when removed), enumerate the
/// proper total colorings of the kept set per component, derive the forced
/// classes on the rest, and solve the constrained instance.
pub fn solve_disjoint_edges(
    g: &Graph,
    w_edges: &[usize],
    budget: usize,
) -> Result<Option<Vec<usize>>, DeletionError> {
    let m = g.edge_count();
    let mut in_w = vec![false; m];
    for &e in w_edges {
        if e >= m {
            return Err(DeletionError::BadConstraintSet(format!("edge index {e} out of range")));
        }
        if in_w[e] {
            return Err(DeletionError::BadConstraintSet(format!("edge {e} listed twice in W")));
        }
        in_w[e] = true;
    }
    let (without_w, _) = g.edge_subgraph(|e| !in_w[e]);
    if !is_2ec_feasible(&without_w) {
        return Err(DeletionError::DisjointPrecondition);
    }
    let (gw, gw_map) = g.edge_subgraph(|e| in_w[e]);
    if !is_2ec_feasible(&gw) {
        // W itself cannot be totally colored.
        return Ok(None);
    }
    let traces: Vec<Trace> =
        trace_components(&gw).into_iter().filter(|t| !t.edges.is_empty()).collect();

    // Each path or cycle component has exactly two alternating colorings.
    let mut w_colors = vec![0u8; m];
    let variants = 1u32 << traces.len();
    for selector in 0..variants {
        for (ti, trace) in traces.iter().enumerate() {
            let start = 1 + ((selector >> ti) & 1) as u8;
            for (pos, &e) in trace.edges.iter().enumerate() {
                w_colors[gw_map[e]] = if pos % 2 == 0 { start } else { 3 - start };
            }
        }

        // Forced classes on the remaining edges: a neighbor of a color-2
        // kept edge must take color 1, and vice versa; both at once forces
        // deletion.
        let mut forced = vec![0u8; m]; // bit0: must-be-1, bit1: must-be-2
        for e in 0..m {
            if in_w[e] {
                continue;
            }
            let (u, v) = g.edge(e);
            for x in [u, v] {
                for &f in g.incident_edges(x) {
                    if in_w[f] {
                        forced[e] |= match w_colors[f] {
                            1 => 0b10,
                            2 => 0b01,
                            _ => unreachable!("kept edges are totally colored"),
                        };
                    }
                }
            }
        }
        let forced_deletions: Vec<usize> =
            (0..m).filter(|&e| !in_w[e] && forced[e] == 0b11).collect();
        if forced_deletions.len() > budget {
            continue;
        }
        let keep = |e: usize| !in_w[e] && forced[e] != 0b11;
        let (host, host_map) = g.edge_subgraph(keep);
        let e1: Vec<usize> = (0..host.edge_count()).filter(|&i| forced[host_map[i]] == 0b01).collect();
        let e2: Vec<usize> = (0..host.edge_count()).filter(|&i| forced[host_map[i]] == 0b10).collect();
        let inst = ConstrainedPathInstance::new(host, &e1, &e2)?;
        let (removed, _) = solve_constrained_paths(&inst);
        if forced_deletions.len() + removed.len() <= budget {
            let mut x: Vec<usize> = forced_deletions;
            x.extend(removed.into_iter().map(|i| host_map[i]));
            x.sort_unstable();
            debug_assert!({
                let (residual, _) = g.edge_subgraph(|e| !x.contains(&e));
                is_2ec_feasible(&residual)
            });
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// A set of edges whose removal makes the graph 2-edge-colorable, plus a
/// total proper coloring of everything that remains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDeletionCertificate {
    pub removed_edges: Vec<usize>,
    pub witness: EdgeColoring,
}

impl EdgeDeletionCertificate {
    pub fn verify(&self, g: &Graph) -> bool {
        let (residual, map) = g.edge_subgraph(|e| !self.removed_edges.contains(&e));
        is_2ec_feasible(&residual)
            && crate::graph::validate_coloring(g, &self.witness).unwrap_or(false)
            && map.iter().all(|&e| self.witness.color(e) != 0)
            && self.removed_edges.iter().all(|&e| self.witness.color(e) == 0)
    }
}

fn edge_certificate(g: &Graph, removed: Vec<usize>) -> EdgeDeletionCertificate {
    let (residual, map) = g.edge_subgraph(|e| !removed.contains(&e));
    let sub = color_feasible_graph(&residual);
    let mut witness = EdgeColoring::uncolored(g.edge_count());
    for (i, &orig) in map.iter().enumerate() {
        witness.set(orig, sub.color(i));
    }
    EdgeDeletionCertificate { removed_edges: removed, witness }
}

/// Decides whether at most `k` edge deletions reach 2-edge-colorability,
/// via iterative compression over the canonical edge order.
pub fn solve_edge_deletion(g: &Graph, k: usize) -> Result<Option<EdgeDeletionCertificate>, DeletionError> {
    let m = g.edge_count();
    let mut x: Vec<usize> = Vec::new();
    for i in 0..m {
        let (prefix, _) = g.edge_subgraph(|e| e <= i);
        let (residual, _) = prefix.edge_subgraph(|e| !x.contains(&e));
        if is_2ec_feasible(&residual) {
            continue;
        }
        x.push(i);
        if x.len() <= k {
            continue;
        }
        // |x| = k + 1: compress on the prefix graph or conclude infeasibility.
        let w = std::mem::take(&mut x);
        let mut compressed = None;
        for mask in 0u32..(1 << w.len()) {
            if mask.count_ones() as usize > k {
                continue;
            }
            let deleted: Vec<usize> =
                (0..w.len()).filter(|&j| mask >> j & 1 == 1).map(|j| w[j]).collect();
            let (reduced, reduced_map) =
                prefix.edge_subgraph(|e| e <= i && !deleted.contains(&e));
            let kept_w: Vec<usize> = (0..reduced.edge_count())
                .filter(|&j| w.contains(&reduced_map[j]))
                .collect();
            if let Some(inner) = solve_disjoint_edges(&reduced, &kept_w, k - deleted.len())? {
                let mut new_x = deleted;
                new_x.extend(inner.into_iter().map(|j| reduced_map[j]));
                new_x.sort_unstable();
                compressed = Some(new_x);
                break;
            }
        }
        match compressed {
            Some(new_x) => x = new_x,
            None => return Ok(None),
        }
    }
    Ok(Some(edge_certificate(g, x)))
}

/// An external constraint vertex: its pendant edges all carry one forced
/// color, and only core vertices may ever be deleted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pendant {
    pub roots: Vec<usize>,
    pub color: u8,
}

/// Core graph of maximum degree two plus pendant constraint edges.
#[derive(Debug, Clone)]
pub struct PendantInstance {
    core: Graph,
    pendants: Vec<Pendant>,
}

impl PendantInstance {
    pub fn new(core: Graph, pendants: Vec<Pendant>) -> Result<Self, DeletionError> {
        if core.max_degree() > 2 {
            return Err(DeletionError::HostDegreeTooHigh(core.max_degree()));
        }
        for p in &pendants {
            if p.color != 1 && p.color != 2 {
                return Err(DeletionError::BadConstraintSet(format!(
                    "pendant color {} is not a true color",
                    p.color
                )));
            }
            if p.roots.is_empty() {
                return Err(DeletionError::BadConstraintSet("pendant with no roots".into()));
            }
            let mut sorted = p.roots.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != p.roots.len() {
                return Err(DeletionError::BadConstraintSet("pendant roots repeat".into()));
            }
            if let Some(&v) = sorted.iter().find(|&&v| v >= core.vertex_count()) {
                return Err(DeletionError::BadConstraintSet(format!("root {v} out of range")));
            }
        }
        Ok(PendantInstance { core, pendants })
    }

    pub fn core(&self) -> &Graph {
        &self.core
    }

    pub fn pendants(&self) -> &[Pendant] {
        &self.pendants
    }

    /// Degree inside the full instance graph (core edges plus pendant edges).
    fn instance_degree(&self, v: usize) -> usize {
        self.core.degree(v)
            + self
                .pendants
                .iter()
                .filter(|p| p.roots.contains(&v))
                .count()
    }
}

const DELETED: usize = 0;
const KEPT_BASE: usize = 1; // states 1..=4 are Kept with used-color masks 0..=3
const STATE_COUNT: usize = 5;
const INFINITY: usize = usize::MAX / 2;

/// Forced-color mask of the pendant edges at `v`; `None` when two pendants
/// collide, making "keep v" infeasible.
fn pendant_mask(colors: &[u8]) -> Option<u8> {
    let mut mask = 0u8;
    for &c in colors {
        let bit = 1 << (c - 1);
        if mask & bit != 0 {
            return None;
        }
        mask |= bit;
    }
    Some(mask)
}

struct ComponentSolution {
    deletions: Vec<usize>,
    edge_colors: Vec<(usize, u8)>,
}

/// Minimum-deletion DP along one path or cycle component of the core.
/// `pendant_colors[v]` lists forced colors of pendant edges rooted at `v`;
/// `deletable[v]` tells whether the solver may remove `v`.
#[allow(clippy::needless_range_loop)]
fn component_dp(
    trace: &Trace,
    pendant_colors: &[Vec<u8>],
    deletable: &[bool],
) -> Option<ComponentSolution> {
    let s = trace.vertices.len();
    let masks: Vec<Option<u8>> =
        trace.vertices.iter().map(|&v| pendant_mask(&pendant_colors[v])).collect();

    // Cycle cases: how vertex 0 meets the closing edge.
    // (forced_v0_deleted, reserved closing color)
    let cases: Vec<(bool, Option<u8>)> = if trace.is_cycle {
        vec![(true, None), (false, None), (false, Some(1)), (false, Some(2))]
    } else {
        vec![(false, None)]
    };

    type BackRow = Vec<[(usize, u8); STATE_COUNT]>;
    let mut best: Option<(usize, usize, BackRow, Option<u8>)> = None;
    for &(v0_deleted, reserve) in &cases {
        let mut dp = vec![[INFINITY; STATE_COUNT]; s];
        let mut back = vec![[(usize::MAX, 0u8); STATE_COUNT]; s];
        let v0 = trace.vertices[0];
        if v0_deleted {
            if deletable[v0] {
                dp[0][DELETED] = 1;
            }
        } else {
            if deletable[v0] && !trace.is_cycle {
                dp[0][DELETED] = 1;
            }
            if let Some(mask) = masks[0] {
                let reserved_bit = reserve.map_or(0, |c| 1 << (c - 1));
                if mask & reserved_bit == 0 {
                    dp[0][KEPT_BASE + (mask | reserved_bit) as usize] = 0;
                }
            }
        }
        for i in 1..s {
            let vi = trace.vertices[i];
            for state in 0..STATE_COUNT {
                let cost = dp[i - 1][state];
                if cost >= INFINITY {
                    continue;
                }
                if deletable[vi] && cost + 1 < dp[i][DELETED] {
                    dp[i][DELETED] = cost + 1;
                    back[i][DELETED] = (state, 0);
                }
                let Some(base) = masks[i] else { continue };
                if state == DELETED {
                    let target = KEPT_BASE + base as usize;
                    if cost < dp[i][target] {
                        dp[i][target] = cost;
                        back[i][target] = (state, 0);
                    }
                } else {
                    let used = (state - KEPT_BASE) as u8;
                    for c in 1..=2u8 {
                        let bit = 1 << (c - 1);
                        if used & bit != 0 || base & bit != 0 {
                            continue;
                        }
                        let target = KEPT_BASE + (base | bit) as usize;
                        if cost < dp[i][target] {
                            dp[i][target] = cost;
                            back[i][target] = (state, c);
                        }
                    }
                }
            }
        }
        // Acceptable final states for this case.
        for state in 0..STATE_COUNT {
            let cost = dp[s - 1][state];
            if cost >= INFINITY {
                continue;
            }
            if trace.is_cycle && s > 1 {
                match (v0_deleted, reserve) {
                    (true, _) => {}
                    (false, None) => {
                        if state != DELETED {
                            continue;
                        }
                    }
                    (false, Some(c)) => {
                        if state == DELETED {
                            continue;
                        }
                        let used = (state - KEPT_BASE) as u8;
                        if used & (1 << (c - 1)) != 0 {
                            continue;
                        }
                    }
                }
            }
            if best.as_ref().is_none_or(|&(bc, _, _, _)| cost < bc) {
                best = Some((cost, state, back.clone(), reserve));
            }
        }
    }

    let (_, mut state, back, reserve) = best?;
    let mut deletions = Vec::new();
    let mut edge_colors = Vec::new();
    if trace.is_cycle && state != DELETED {
        if let Some(c) = reserve {
            edge_colors.push((*trace.edges.last().unwrap(), c));
        }
    }
    for i in (0..s).rev() {
        if state == DELETED {
            deletions.push(trace.vertices[i]);
        }
        if i > 0 {
            let (prev, color) = back[i][state];
            if color != 0 {
                edge_colors.push((trace.edges[i - 1], color));
            }
            state = prev;
        }
    }
    deletions.reverse();
    Some(ComponentSolution { deletions, edge_colors })
}

/// Restricted pendant problem: every pendant has a single root, at most one
/// pendant per root, pendant-carrying degree-three vertices are pairwise
/// non-adjacent, and only degree-two vertices of the combined graph may be
/// deleted. Returns the minimum deletion set and a total coloring of the
/// kept core edges, or `None` when no deletion set works.
pub fn solve_pendant_paths(
    inst: &PendantInstance,
) -> Result<Option<(Vec<usize>, EdgeColoring)>, DeletionError> {
    let core = &inst.core;
    let mut pendant_colors: Vec<Vec<u8>> = vec![Vec::new(); core.vertex_count()];
    for p in inst.pendants() {
        if p.roots.len() != 1 {
            return Err(DeletionError::PendantRestriction(format!(
                "pendant with {} roots",
                p.roots.len()
            )));
        }
        let root = p.roots[0];
        if !pendant_colors[root].is_empty() {
            return Err(DeletionError::PendantRestriction(format!(
                "vertex {root} carries two pendants"
            )));
        }
        pendant_colors[root].push(p.color);
    }
    let degree3: Vec<usize> = (0..core.vertex_count())
        .filter(|&v| inst.instance_degree(v) >= 3)
        .collect();
    for &v in &degree3 {
        if core.neighbors(v).iter().any(|u| degree3.binary_search(u).is_ok()) {
            return Err(DeletionError::PendantRestriction(format!(
                "adjacent degree-three vertices around {v}"
            )));
        }
    }
    let deletable: Vec<bool> =
        (0..core.vertex_count()).map(|v| inst.instance_degree(v) == 2).collect();

    let mut deletions = Vec::new();
    let mut coloring = EdgeColoring::uncolored(core.edge_count());
    for trace in trace_components(core) {
        match component_dp(&trace, &pendant_colors, &deletable) {
            Some(sol) => {
                deletions.extend(sol.deletions);
                for (e, c) in sol.edge_colors {
                    coloring.set(e, c);
                }
            }
            None => return Ok(None),
        }
    }
    deletions.sort_unstable();
    Ok(Some((deletions, coloring)))
}

/// General pendant problem: pendants may have several roots and share
/// roots, and any core vertex may be deleted. Multi-root pendants admit at
/// most one surviving edge, so the solver branches on the kept root (or
/// none), spending budget on the removed ones, and finishes with the
/// per-component DP.
pub fn solve_pendant_general(
    inst: &PendantInstance,
    budget: usize,
) -> Result<Option<Vec<usize>>, DeletionError> {
    let removed = vec![false; inst.core.vertex_count()];
    Ok(general_search(inst, removed, budget))
}

fn general_search(inst: &PendantInstance, removed: Vec<bool>, budget: usize) -> Option<Vec<usize>> {
    // Live roots of each pendant under the current removals.
    let live: Vec<Vec<usize>> = inst
        .pendants
        .iter()
        .map(|p| p.roots.iter().copied().filter(|&r| !removed[r]).collect())
        .collect();
    if let Some(multi) = live.iter().position(|roots| roots.len() >= 2) {
        let roots = &live[multi];
        if roots.len() > budget + 1 {
            // Keeping at most one survivor already costs more than the budget.
            return None;
        }
        let mut choices: Vec<Option<usize>> = roots.iter().copied().map(Some).collect();
        choices.push(None);
        for kept in choices {
            let cost = roots.len() - usize::from(kept.is_some());
            if cost > budget {
                continue;
            }
            let mut next_removed = removed.clone();
            for &r in roots {
                if Some(r) != kept {
                    next_removed[r] = true;
                }
            }
            if let Some(solution) = general_search(inst, next_removed, budget - cost) {
                return Some(solution);
            }
        }
        return None;
    }

    // All pendants have at most one live root: per-component DP finishes.
    // Only fresh deletions count against the remaining budget; the removals
    // accumulated by the branching were paid for already.
    let (core, _) = inst.core.delete_vertices(&removed);
    let mut pendant_colors: Vec<Vec<u8>> = vec![Vec::new(); core.vertex_count()];
    for (p, roots) in inst.pendants.iter().zip(&live) {
        if let [root] = roots[..] {
            pendant_colors[root].push(p.color);
        }
    }
    let deletable = vec![true; core.vertex_count()];
    let mut fresh: Vec<usize> = Vec::new();
    for trace in trace_components(&core) {
        if trace.vertices.iter().all(|&v| removed[v]) {
            continue;
        }
        let sol = component_dp(&trace, &pendant_colors, &deletable)
            .expect("every vertex is deletable, so a solution exists");
        fresh.extend(sol.deletions.into_iter().filter(|&v| !removed[v]));
    }
    if fresh.len() <= budget {
        let mut deletions: Vec<usize> = (0..removed.len()).filter(|&v| removed[v]).collect();
        deletions.extend(fresh);
        deletions.sort_unstable();
        Some(deletions)
    } else {
        None
    }
}

/// Disjoint compression step for vertex deletion: W stays untouched, so its
/// induced edges must be totally colorable; each such coloring forces
/// complementary colors on the edges leaving W, which become pendant
/// constraints on the remaining graph. W-vertices with no induced edge are
/// free and get their surviving slots enumerated explicitly.
pub fn solve_disjoint_vertices(
    g: &Graph,
    w: &[usize],
    budget: usize,
) -> Result<Option<Vec<usize>>, DeletionError> {
    let n = g.vertex_count();
    let mut in_w = vec![false; n];
    for &v in w {
        if v >= n {
            return Err(DeletionError::BadConstraintSet(format!("vertex {v} out of range")));
        }
        if in_w[v] {
            return Err(DeletionError::BadConstraintSet(format!("vertex {v} listed twice in W")));
        }
        in_w[v] = true;
    }
    let (without_w, _) = g.delete_vertices(&in_w);
    if !is_2ec_feasible(&without_w) {
        return Err(DeletionError::DisjointPrecondition);
    }
    // Induced edges of W must survive and be totally colored.
    let (gw, gw_map) = g.edge_subgraph(|e| {
        let (u, v) = g.edge(e);
        in_w[u] && in_w[v]
    });
    if !is_2ec_feasible(&gw) {
        return Ok(None);
    }
    let traces: Vec<Trace> =
        trace_components(&gw).into_iter().filter(|t| !t.edges.is_empty()).collect();

    let mut w_colors = vec![0u8; g.edge_count()];
    let variants = 1u32 << traces.len();
    for selector in 0..variants {
        for (ti, trace) in traces.iter().enumerate() {
            let start = 1 + ((selector >> ti) & 1) as u8;
            for (pos, &e) in trace.edges.iter().enumerate() {
                w_colors[gw_map[e]] = if pos % 2 == 0 { start } else { 3 - start };
            }
        }
        // Color mask used at each W-vertex by its induced edges.
        let mut used_at = vec![0u8; n];
        for (i, &orig) in gw_map.iter().enumerate() {
            let _ = i;
            let (u, v) = g.edge(orig);
            let bit = 1 << (w_colors[orig] - 1);
            used_at[u] |= bit;
            used_at[v] |= bit;
        }

        // Saturated W-vertices force their outside neighbors out.
        let mut forced = vec![false; n];
        for &wv in w {
            if used_at[wv] == 0b11 {
                for u in g.neighbors(wv) {
                    if !in_w[u] {
                        forced[u] = true;
                    }
                }
            }
        }
        let forced_count = forced.iter().filter(|&&f| f).count();
        if forced_count > budget {
            continue;
        }

        let free_w: Vec<usize> =
            w.iter().copied().filter(|&wv| used_at[wv] == 0 && g.degree(wv) > 0).collect();
        if let Some(x) =
            enumerate_free_slots(g, w, &in_w, &used_at, &free_w, 0, forced, budget, Vec::new())?
        {
            debug_assert!({
                let mut removed = vec![false; n];
                for &v in &x {
                    removed[v] = true;
                }
                is_2ec_feasible(&g.delete_vertices(&removed).0)
            });
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Enumerates, for each W-vertex with no induced edge, which color slots its
/// surviving leaving edges may use: none (every outside neighbor goes), one
/// fixed color (at most one survivor, picked by the pendant machinery), or
/// both (an ordered survivor pair, affordable only when few neighbors
/// remain). Accumulated pendants in `extra` reach the final instance.
#[allow(clippy::too_many_arguments)]
fn enumerate_free_slots(
    g: &Graph,
    w: &[usize],
    in_w: &[bool],
    used_at: &[u8],
    free_w: &[usize],
    next_free: usize,
    forced: Vec<bool>,
    budget: usize,
    extra: Vec<Pendant>,
) -> Result<Option<Vec<usize>>, DeletionError> {
    let forced_count = forced.iter().filter(|&&f| f).count();
    if forced_count > budget {
        return Ok(None);
    }
    if next_free == free_w.len() {
        return finish_pendant_instance(g, w, in_w, used_at, &forced, budget, &extra);
    }
    let wv = free_w[next_free];
    let neighbors: Vec<usize> =
        g.neighbors(wv).into_iter().filter(|&u| !in_w[u] && !forced[u]).collect();

    // Shape: no surviving edge at wv.
    if forced_count + neighbors.len() <= budget {
        let mut f = forced.clone();
        for &u in &neighbors {
            f[u] = true;
        }
        if let Some(x) = enumerate_free_slots(
            g, w, in_w, used_at, free_w, next_free + 1, f, budget, extra.clone(),
        )? {
            return Ok(Some(x));
        }
    }
    // Shape: at most one survivor of a fixed color.
    for color in 1..=2u8 {
        if neighbors.is_empty() {
            break;
        }
        let mut with = extra.clone();
        with.push(Pendant { roots: neighbors.clone(), color });
        if let Some(x) = enumerate_free_slots(
            g, w, in_w, used_at, free_w, next_free + 1, forced.clone(), budget, with,
        )? {
            return Ok(Some(x));
        }
    }
    // Shape: two survivors with distinct colors.
    if neighbors.len() >= 2 && forced_count + neighbors.len() - 2 <= budget {
        for &u1 in &neighbors {
            for &u2 in &neighbors {
                if u1 == u2 {
                    continue;
                }
                let mut f = forced.clone();
                for &u in &neighbors {
                    if u != u1 && u != u2 {
                        f[u] = true;
                    }
                }
                let mut with = extra.clone();
                with.push(Pendant { roots: vec![u1], color: 1 });
                with.push(Pendant { roots: vec![u2], color: 2 });
                if let Some(x) = enumerate_free_slots(
                    g, w, in_w, used_at, free_w, next_free + 1, f, budget, with,
                )? {
                    return Ok(Some(x));
                }
            }
        }
    }
    Ok(None)
}

fn finish_pendant_instance(
    g: &Graph,
    w: &[usize],
    in_w: &[bool],
    used_at: &[u8],
    forced: &[bool],
    budget: usize,
    extra: &[Pendant],
) -> Result<Option<Vec<usize>>, DeletionError> {
    let forced_count = forced.iter().filter(|&&f| f).count();
    if forced_count > budget {
        return Ok(None);
    }
    // Host: everything outside W that has not been force-deleted.
    let n = g.vertex_count();
    let mut removed = vec![false; n];
    for v in 0..n {
        if in_w[v] || forced[v] {
            removed[v] = true;
        }
    }
    let (core, _) = g.delete_vertices(&removed);
    let mut pendants: Vec<Pendant> = Vec::new();
    for &wv in w {
        // Saturated vertices lost all their leaving edges; free ones are
        // handled by the explicit slot enumeration.
        let used = used_at[wv];
        if used == 0 || used == 0b11 {
            continue;
        }
        let complement = if used == 0b01 { 2 } else { 1 };
        let roots: Vec<usize> =
            g.neighbors(wv).into_iter().filter(|&u| !in_w[u] && !forced[u]).collect();
        if roots.is_empty() {
            continue;
        }
        pendants.push(Pendant { roots, color: complement });
    }
    for p in extra {
        let roots: Vec<usize> = p.roots.iter().copied().filter(|&u| !forced[u]).collect();
        if roots.is_empty() {
            continue;
        }
        pendants.push(Pendant { roots, color: p.color });
    }
    let inst = PendantInstance::new(core, pendants)?;
    match solve_pendant_general(&inst, budget - forced_count)? {
        Some(j) => {
            let mut x: Vec<usize> = (0..n).filter(|&v| forced[v]).collect();
            x.extend(j);
            x.sort_unstable();
            x.dedup();
            if x.len() <= budget {
                Ok(Some(x))
            } else {
                Ok(None)
            }
        }
        None => Ok(None),
    }
}

/// A set of vertices whose removal makes the graph 2-edge-colorable, plus a
/// total proper coloring of the surviving edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexDeletionCertificate {
    pub removed_vertices: Vec<usize>,
    pub witness: EdgeColoring,
}

impl VertexDeletionCertificate {
    pub fn verify(&self, g: &Graph) -> bool {
        let mut removed = vec![false; g.vertex_count()];
        for &v in &self.removed_vertices {
            if v >= g.vertex_count() {
                return false;
            }
            removed[v] = true;
        }
        let (residual, map) = g.delete_vertices(&removed);
        is_2ec_feasible(&residual)
            && crate::graph::validate_coloring(g, &self.witness).unwrap_or(false)
            && map.iter().all(|&e| self.witness.color(e) != 0)
            && (0..g.edge_count())
                .filter(|&e| !map.contains(&e))
                .all(|e| self.witness.color(e) == 0)
    }
}

fn vertex_certificate(g: &Graph, removed_vertices: Vec<usize>) -> VertexDeletionCertificate {
    let mut removed = vec![false; g.vertex_count()];
    for &v in &removed_vertices {
        removed[v] = true;
    }
    let (residual, map) = g.delete_vertices(&removed);
    let sub = color_feasible_graph(&residual);
    let mut witness = EdgeColoring::uncolored(g.edge_count());
    for (i, &orig) in map.iter().enumerate() {
        witness.set(orig, sub.color(i));
    }
    VertexDeletionCertificate { removed_vertices, witness }
}

/// Decides whether at most `k` vertex deletions reach 2-edge-colorability,
/// via iterative compression over the vertex order.
pub fn solve_vertex_deletion(
    g: &Graph,
    k: usize,
) -> Result<Option<VertexDeletionCertificate>, DeletionError> {
    let n = g.vertex_count();
    let mut x: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut outside = vec![false; n];
        outside.iter_mut().skip(i + 1).for_each(|s| *s = true);
        let (prefix, _) = g.delete_vertices(&outside);
        let mut cur = outside.clone();
        for &v in &x {
            cur[v] = true;
        }
        if is_2ec_feasible(&g.delete_vertices(&cur).0) {
            continue;
        }
        x.push(i);
        if x.len() <= k {
            continue;
        }
        let w = std::mem::take(&mut x);
        let mut compressed = None;
        for mask in 0u32..(1 << w.len()) {
            if mask.count_ones() as usize > k {
                continue;
            }
            let deleted: Vec<usize> =
                (0..w.len()).filter(|&j| mask >> j & 1 == 1).map(|j| w[j]).collect();
            let kept_w: Vec<usize> =
                (0..w.len()).filter(|&j| mask >> j & 1 == 0).map(|j| w[j]).collect();
            let mut removed = vec![false; n];
            for &v in &deleted {
                removed[v] = true;
            }
            let (host, _) = prefix.delete_vertices(&removed);
            if let Some(inner) = solve_disjoint_vertices(&host, &kept_w, k - deleted.len())? {
                let mut new_x = deleted;
                new_x.extend(inner);
                new_x.sort_unstable();
                compressed = Some(new_x);
                break;
            }
        }
        match compressed {
            Some(new_x) => x = new_x,
            None => return Ok(None),
        }
    }
    Ok(Some(vertex_certificate(g, x)))
}
