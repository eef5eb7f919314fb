//! Weighted Vertex Cover by local ratio, and Independent Set as its
//! complementary problem.

use crate::blackbox::{
    max_with_predictions, min_with_predictions, robust_max, robust_min, ApproxSolver, Prediction,
    SelectionInstance,
};
use crate::graph::Graph;
use crate::{weight_of, Error, ItemSet, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct VertexWeightedGraph {
    pub graph: Graph,
    weights: Vec<f64>,
}

impl VertexWeightedGraph {
    pub fn new(graph: Graph, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != graph.vertex_count() {
            return Err(Error::WeightLength {
                got: weights.len(),
                expected: graph.vertex_count(),
            });
        }
        if let Some((v, w)) = weights.iter().enumerate().find(|(_, w)| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter(format!("vertex {v} has weight {w}")));
        }
        Ok(VertexWeightedGraph { graph, weights })
    }

    pub fn unit(graph: Graph) -> Self {
        let n = graph.vertex_count();
        VertexWeightedGraph {
            graph,
            weights: vec![1.0; n],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_of(&self, set: &ItemSet) -> f64 {
        weight_of(&self.weights, set)
    }

    pub fn selection(&self) -> SelectionInstance {
        SelectionInstance::new(self.weights.clone()).expect("weights validated at construction")
    }
}

pub fn is_vertex_cover(g: &Graph, set: &ItemSet) -> bool {
    g.edges().iter().all(|e| set.contains(&e.u) || set.contains(&e.v))
}

pub fn is_independent_set(g: &Graph, set: &ItemSet) -> bool {
    g.edges().iter().all(|e| !(set.contains(&e.u) && set.contains(&e.v)))
}

/// Bar-Yehuda–Even local ratio under arbitrary vertex weights.
///
/// Edges are processed in id order, each paying `min(residual(u), residual(v))`
/// from both endpoints. The cover is every endpoint of a processed edge whose
/// residual dropped to zero.
pub fn local_ratio_cover(g: &Graph, weights: &[f64]) -> ItemSet {
    let mut residual = weights.to_vec();
    let mut touched = vec![false; g.vertex_count()];
    for e in g.edges() {
        let pay = residual[e.u].min(residual[e.v]);
        residual[e.u] -= pay;
        residual[e.v] -= pay;
        touched[e.u] = true;
        touched[e.v] = true;
    }
    (0..g.vertex_count())
        .filter(|&v| touched[v] && residual[v] == 0.0)
        .collect()
}

/// 2-approximate minimum-weight vertex cover.
pub fn vc_local_ratio(g: &VertexWeightedGraph) -> ItemSet {
    local_ratio_cover(&g.graph, &g.weights)
}

/// Local ratio as an [`ApproxSolver`] over vertex weights (ρ = 2).
#[derive(Debug, Clone, Copy)]
pub struct LocalRatioVc<'a> {
    pub graph: &'a Graph,
}

impl ApproxSolver for LocalRatioVc<'_> {
    fn item_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn ratio(&self) -> f64 {
        2.0
    }

    fn solve(&self, weights: &[f64]) -> Result<ItemSet> {
        if weights.len() != self.graph.vertex_count() {
            return Err(Error::WeightLength {
                got: weights.len(),
                expected: self.graph.vertex_count(),
            });
        }
        Ok(local_ratio_cover(self.graph, weights))
    }

    fn is_feasible(&self, items: &ItemSet) -> bool {
        is_vertex_cover(self.graph, items)
    }
}

/// Greedy maximal independent set by decreasing weight (ties by id); the
/// conventional baseline for robust Independent Set.
#[derive(Debug, Clone, Copy)]
pub struct GreedyIndependentSet<'a> {
    pub graph: &'a Graph,
}

impl ApproxSolver for GreedyIndependentSet<'_> {
    fn item_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// No constant-factor guarantee exists for this heuristic.
    fn ratio(&self) -> f64 {
        0.0
    }

    fn solve(&self, weights: &[f64]) -> Result<ItemSet> {
        let g = self.graph;
        let mut order: Vec<usize> = (0..g.vertex_count()).collect();
        order.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
        let mut blocked = vec![false; g.vertex_count()];
        let mut set = ItemSet::new();
        for v in order {
            if blocked[v] {
                continue;
            }
            set.insert(v);
            for &e in g.incident(v) {
                blocked[g.edge(e).other(v)] = true;
            }
        }
        Ok(set)
    }

    fn is_feasible(&self, items: &ItemSet) -> bool {
        is_independent_set(self.graph, items)
    }
}

/// Complementary-problem solver for Independent Set: a cover `Y` whose
/// complement is independent.
#[derive(Debug, Clone, Copy)]
struct IsComplement<'a>(LocalRatioVc<'a>);

impl ApproxSolver for IsComplement<'_> {
    fn item_count(&self) -> usize {
        self.0.item_count()
    }
    fn ratio(&self) -> f64 {
        self.0.ratio()
    }
    fn solve(&self, weights: &[f64]) -> Result<ItemSet> {
        self.0.solve(weights)
    }
    fn is_feasible(&self, items: &ItemSet) -> bool {
        self.0.is_feasible(items)
    }
}

fn check_prediction(g: &VertexWeightedGraph, predicted: &ItemSet) -> Result<Prediction> {
    let n = g.graph.vertex_count();
    match predicted.iter().next_back() {
        Some(&v) if v >= n => Err(Error::ItemOutOfRange { id: v, len: n }),
        _ => Ok(Prediction::new(predicted.clone())),
    }
}

/// Vertex cover with predicted vertices made free before local ratio.
pub fn vc_with_predictions(g: &VertexWeightedGraph, predicted: &ItemSet) -> Result<ItemSet> {
    let pred = check_prediction(g, predicted)?;
    min_with_predictions(&g.selection(), &LocalRatioVc { graph: &g.graph }, &pred)
}

pub fn vc_robust(g: &VertexWeightedGraph, predicted: &ItemSet) -> Result<ItemSet> {
    let pred = check_prediction(g, predicted)?;
    robust_min(&g.selection(), &LocalRatioVc { graph: &g.graph }, &pred)
}

/// Independent set via local ratio on the complementary cover problem,
/// with unpredicted vertices made free.
pub fn is_with_predictions(g: &VertexWeightedGraph, predicted: &ItemSet) -> Result<ItemSet> {
    let pred = check_prediction(g, predicted)?;
    max_with_predictions(
        &g.selection(),
        &IsComplement(LocalRatioVc { graph: &g.graph }),
        &pred,
    )
}

pub fn is_robust(g: &VertexWeightedGraph, predicted: &ItemSet) -> Result<ItemSet> {
    let pred = check_prediction(g, predicted)?;
    robust_max(
        &g.selection(),
        &IsComplement(LocalRatioVc { graph: &g.graph }),
        &GreedyIndependentSet { graph: &g.graph },
        &pred,
    )
}
