//! Steiner tree: Mehlhorn's MST heuristic, ALPS (predicted edges scaled
//! down by a confidence α before running the heuristic), the geometric α
//! search, the ALPS performance-bound evaluator and the tight-example
//! generator.

use std::fmt;
use std::str::FromStr;

use crate::blackbox::ApproxSolver;
use crate::graph::{kruskal_mst, multi_source_dijkstra, spans_terminals, Graph, MstCandidate};
use crate::io::SteinerInstance;
use crate::{Error, ItemSet, Result};

/// Confidence parameter α ≥ 1. `α = ∞` makes predicted edges free.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct AlphaParam(f64);

impl AlphaParam {
    pub const ONE: AlphaParam = AlphaParam(1.0);
    pub const INFINITY: AlphaParam = AlphaParam(f64::INFINITY);

    pub fn new(alpha: f64) -> Result<Self> {
        if alpha >= 1.0 {
            Ok(AlphaParam(alpha))
        } else {
            Err(Error::InvalidParameter(format!("alpha must be >= 1, got {alpha}")))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// Scaled weight of a predicted edge.
    pub fn scale(self, w: f64) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            w / self.0
        }
    }
}

impl fmt::Display for AlphaParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for AlphaParam {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
            return Ok(AlphaParam::INFINITY);
        }
        let v: f64 = t
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("cannot parse alpha `{s}`")))?;
        AlphaParam::new(v)
    }
}

/// One connection of the terminal MST, expanded into graph edges.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureEdge {
    pub t1: usize,
    pub t2: usize,
    /// Cost under the weights the heuristic ran with.
    pub cost: f64,
    /// Edge ids of the witness path, ordered from `t1` to `t2`.
    pub via: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SteinerSolution {
    pub edges: ItemSet,
    /// Weight under the instance's original weights.
    pub weight_original: f64,
    /// The `k − 1` connection costs of the terminal MST, ascending.
    pub closure_mst_costs: Vec<f64>,
    pub connections: Vec<ClosureEdge>,
}

/// Whether non-terminal leaves are stripped from the union of paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pruning {
    #[default]
    Prune,
    Keep,
}

/// Mehlhorn's heuristic under `edge_weights`, pruning non-terminal leaves.
pub fn mehlhorn(inst: &SteinerInstance, edge_weights: &[f64]) -> Result<SteinerSolution> {
    mehlhorn_with(inst, edge_weights, Pruning::Prune)
}

/// Mehlhorn's construction: Voronoi cells of the terminals, one candidate
/// connection per edge crossing two cells with cost `d(u) + w(uv) + d(v)`,
/// Kruskal over the candidates, then the union of the witness paths.
pub fn mehlhorn_with(inst: &SteinerInstance, edge_weights: &[f64], pruning: Pruning) -> Result<SteinerSolution> {
    let g = &inst.graph;
    let terminals = inst.terminal_list();
    let forest = multi_source_dijkstra(g, &terminals, edge_weights)?;

    let mut candidates = Vec::new();
    for (id, e) in g.edges().iter().enumerate() {
        let (Some(a), Some(b)) = (forest.nearest_source[e.u], forest.nearest_source[e.v]) else {
            continue;
        };
        if a != b {
            candidates.push(MstCandidate {
                cost: forest.dist[e.u] + edge_weights[id] + forest.dist[e.v],
                key: id,
                a,
                b,
                payload: id,
            });
        }
    }
    let mst = kruskal_mst(g.vertex_count(), candidates);
    if mst.len() + 1 < terminals.len() {
        let mut reached = ItemSet::from([terminals[0]]);
        let mut grew = true;
        while grew {
            grew = false;
            for c in &mst {
                if reached.contains(&c.a) != reached.contains(&c.b) {
                    reached.insert(c.a);
                    reached.insert(c.b);
                    grew = true;
                }
            }
        }
        let lost = terminals.iter().find(|t| !reached.contains(t)).copied().unwrap_or(terminals[0]);
        return Err(Error::Infeasible(format!(
            "terminal {} is disconnected from terminal {}",
            lost + 1,
            terminals[0] + 1
        )));
    }

    let mut edges = ItemSet::new();
    let mut connections = Vec::with_capacity(mst.len());
    for c in mst {
        let e = g.edge(c.payload);
        let (from_a, from_b) = if forest.nearest_source[e.u] == Some(c.a) {
            (e.u, e.v)
        } else {
            (e.v, e.u)
        };
        let mut via = forest.path_to_source(g, from_a);
        via.reverse();
        via.push(c.payload);
        via.extend(forest.path_to_source(g, from_b));
        edges.extend(via.iter().copied());
        connections.push(ClosureEdge {
            t1: c.a,
            t2: c.b,
            cost: c.cost,
            via,
        });
    }
    if pruning == Pruning::Prune {
        prune_leaves(g, &mut edges, &inst.terminals);
    }
    let mut closure_mst_costs: Vec<f64> = connections.iter().map(|c| c.cost).collect();
    closure_mst_costs.sort_by(f64::total_cmp);
    Ok(SteinerSolution {
        weight_original: g.weight_of(&edges),
        edges,
        closure_mst_costs,
        connections,
    })
}

/// Repeatedly removes edges hanging off non-terminal degree-1 vertices.
pub fn prune_leaves(g: &Graph, edges: &mut ItemSet, terminals: &ItemSet) {
    let mut degree = vec![0usize; g.vertex_count()];
    for &e in edges.iter() {
        degree[g.edge(e).u] += 1;
        degree[g.edge(e).v] += 1;
    }
    let mut stack: Vec<usize> = (0..g.vertex_count())
        .filter(|v| degree[*v] == 1 && !terminals.contains(v))
        .collect();
    while let Some(v) = stack.pop() {
        if degree[v] != 1 {
            continue;
        }
        let Some(&e) = g.incident(v).iter().find(|e| edges.contains(e)) else {
            continue;
        };
        edges.remove(&e);
        degree[v] -= 1;
        let x = g.edge(e).other(v);
        degree[x] -= 1;
        if degree[x] == 1 && !terminals.contains(&x) {
            stack.push(x);
        }
    }
}

fn check_edges(g: &Graph, edges: &ItemSet) -> Result<()> {
    match edges.iter().next_back() {
        Some(&e) if e >= g.edge_count() => Err(Error::ItemOutOfRange {
            id: e,
            len: g.edge_count(),
        }),
        _ => Ok(()),
    }
}

/// Edge weights with every predicted edge scaled by `1/α`.
pub fn scaled_weights(g: &Graph, predicted: &ItemSet, alpha: AlphaParam) -> Vec<f64> {
    g.edges()
        .iter()
        .enumerate()
        .map(|(id, e)| {
            if predicted.contains(&id) {
                alpha.scale(e.weight)
            } else {
                e.weight
            }
        })
        .collect()
}

/// ALPS: Mehlhorn's heuristic on weights with predicted edges divided by α.
/// The reported weight is under the original weights.
pub fn alps(inst: &SteinerInstance, predicted: &ItemSet, alpha: AlphaParam) -> Result<SteinerSolution> {
    alps_with(inst, predicted, alpha, Pruning::Prune)
}

pub fn alps_with(
    inst: &SteinerInstance,
    predicted: &ItemSet,
    alpha: AlphaParam,
    pruning: Pruning,
) -> Result<SteinerSolution> {
    check_edges(&inst.graph, predicted)?;
    mehlhorn_with(inst, &scaled_weights(&inst.graph, predicted, alpha), pruning)
}

/// The lighter of the ALPS tree and the plain Mehlhorn tree; ties keep ALPS.
/// At `α = ∞` this is the generic robust transform.
pub fn alps_robust(
    inst: &SteinerInstance,
    predicted: &ItemSet,
    alpha: AlphaParam,
    pruning: Pruning,
) -> Result<SteinerSolution> {
    let augmented = alps_with(inst, predicted, alpha, pruning)?;
    let plain = mehlhorn_with(inst, &inst.graph.weights(), pruning)?;
    Ok(if plain.weight_original < augmented.weight_original {
        plain
    } else {
        augmented
    })
}

/// The α values tried by [`alpha_search`]: `(1+ε)^i` for
/// `i = 0..=⌈log_{1+ε}(1/ε)⌉`.
pub fn alpha_grid(epsilon: f64) -> Result<Vec<AlphaParam>> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let steps = ((1.0 / epsilon).ln() / (1.0 + epsilon).ln()).ceil() as i32;
    Ok((0..=steps).map(|i| AlphaParam((1.0 + epsilon).powi(i))).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSearchResult {
    pub solution: SteinerSolution,
    pub alpha: AlphaParam,
}

/// Runs ALPS over [`alpha_grid`] and keeps the lightest tree (smallest α on ties).
pub fn alpha_search(inst: &SteinerInstance, predicted: &ItemSet, epsilon: f64) -> Result<AlphaSearchResult> {
    alpha_search_with(inst, predicted, epsilon, Pruning::Prune)
}

pub fn alpha_search_with(
    inst: &SteinerInstance,
    predicted: &ItemSet,
    epsilon: f64,
    pruning: Pruning,
) -> Result<AlphaSearchResult> {
    let mut best: Option<AlphaSearchResult> = None;
    for alpha in alpha_grid(epsilon)? {
        let solution = alps_with(inst, predicted, alpha, pruning)?;
        if best
            .as_ref()
            .is_none_or(|b| solution.weight_original < b.solution.weight_original)
        {
            best = Some(AlphaSearchResult { solution, alpha });
        }
    }
    Ok(best.expect("alpha grid is never empty"))
}

/// Right-hand side of the ALPS guarantee for a reference tree `X'`:
///
/// `(1 + 1/α)·w(X') + (1 − 1/α)·η⁻ + min{η⁺, (α − 1)·Σ_{e∈S} c(e)}`
///
/// where `S` holds the `min{k − 1, |X̂ \ X'|}` most expensive connections of
/// the terminal MST under the original weights. At `α = ∞` the last term is
/// `η⁺`.
pub fn steiner_bound_rhs(
    inst: &SteinerInstance,
    predicted: &ItemSet,
    reference: &ItemSet,
    alpha: AlphaParam,
) -> Result<f64> {
    let g = &inst.graph;
    check_edges(g, predicted)?;
    check_edges(g, reference)?;
    if !spans_terminals(g, reference, &inst.terminals) {
        return Err(Error::InvalidParameter("reference edge set does not span the terminals".into()));
    }
    let w_ref = g.weight_of(reference);
    let false_pos: ItemSet = predicted.difference(reference).copied().collect();
    let eta_plus = g.weight_of(&false_pos);
    let eta_minus: f64 = reference
        .difference(predicted)
        .map(|&e| g.edge(e).weight)
        .sum();

    let mst = mehlhorn(inst, &g.weights())?;
    let take = false_pos.len().min(inst.terminals.len().saturating_sub(1));
    let top: f64 = mst.closure_mst_costs.iter().rev().take(take).sum();

    let inv = if alpha.is_infinite() { 0.0 } else { 1.0 / alpha.value() };
    let capped = if alpha.is_infinite() {
        eta_plus
    } else {
        eta_plus.min((alpha.value() - 1.0) * top)
    };
    Ok((1.0 + inv) * w_ref + (1.0 - inv) * eta_minus + capped)
}

/// Mehlhorn's heuristic as a weight-parametrised solver over edges (ρ = 2).
#[derive(Debug, Clone, Copy)]
pub struct MehlhornSolver<'a> {
    pub inst: &'a SteinerInstance,
}

impl ApproxSolver for MehlhornSolver<'_> {
    fn item_count(&self) -> usize {
        self.inst.graph.edge_count()
    }

    fn ratio(&self) -> f64 {
        2.0
    }

    fn solve(&self, weights: &[f64]) -> Result<ItemSet> {
        Ok(mehlhorn(self.inst, weights)?.edges)
    }

    fn is_feasible(&self, items: &ItemSet) -> bool {
        spans_terminals(&self.inst.graph, items, &self.inst.terminals)
    }
}

/// Tight instance for ALPS: `k` terminals on a cycle around one
/// non-terminal centre. Cycle edges weigh 2 except the closing edge
/// `(v1, vk)` of weight `beta`; the `k` spokes weigh `1 + eps`. The
/// prediction is the `beta` edge plus the spokes to `v2..vk`.
///
/// Vertices `0..k` are the terminals `v1..vk`, vertex `k` is the centre.
/// Edge ids: cycle edges `(v_i, v_{i+1})` first, then the `beta` edge
/// (id `k − 1`), then spokes to `v1..vk` (ids `k..2k`).
pub fn tight_example(k: usize, eps: f64, beta: f64) -> Result<(SteinerInstance, ItemSet)> {
    if k < 3 {
        return Err(Error::InvalidParameter(format!("k must be at least 3, got {k}")));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    if !(beta > 2.0 && beta.is_finite()) {
        return Err(Error::InvalidParameter(format!("beta must exceed 2, got {beta}")));
    }
    let centre = k;
    let mut edges: Vec<(usize, usize, f64)> = (0..k - 1).map(|i| (i, i + 1, 2.0)).collect();
    edges.push((0, k - 1, beta));
    edges.extend((0..k).map(|i| (centre, i, 1.0 + eps)));
    let graph = Graph::new(k + 1, edges)?;
    let terminals: ItemSet = (0..k).collect();
    let mut predicted: ItemSet = [k - 1].into();
    predicted.extend(k + 1..2 * k);
    let name = format!("tight-k{k}");
    Ok((SteinerInstance::new(graph, terminals, name)?, predicted))
}
