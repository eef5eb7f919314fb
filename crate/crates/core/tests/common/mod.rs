#![allow(dead_code)]

use std::path::PathBuf;

use alps_core::cover::VertexWeightedGraph;
use alps_core::io::SteinerInstance;
use alps_core::knapsack::KnapsackInstance;
use alps_core::lab::LabRng;
use alps_core::{Graph, ItemSet};

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn int_weight(rng: &mut LabRng, max: u64) -> f64 {
    (1 + rng.below(max)) as f64
}

/// Connected graph: a random spanning tree plus `extra` random edges
/// (parallel edges allowed), integer weights in `1..=max_w`.
pub fn connected_graph(rng: &mut LabRng, n: usize, extra: usize, max_w: u64) -> Graph {
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.below(v as u64) as usize;
        edges.push((u, v, int_weight(rng, max_w)));
    }
    while edges.len() < n - 1 + extra {
        let u = rng.below(n as u64) as usize;
        let v = rng.below(n as u64) as usize;
        if u != v {
            edges.push((u, v, int_weight(rng, max_w)));
        }
    }
    Graph::new(n, edges).unwrap()
}

/// Steiner instance with `|V| ≤ max_n`, `k ≤ max_k`.
pub fn steiner(rng: &mut LabRng, max_n: usize, max_k: usize) -> SteinerInstance {
    let n = 2 + rng.below(max_n as u64 - 1) as usize;
    let extra = rng.below(n as u64 + 1) as usize;
    let g = connected_graph(rng, n, extra, 10);
    let k = 1 + rng.below(max_k.min(n) as u64) as usize;
    let all: Vec<usize> = (0..n).collect();
    let terms: ItemSet = rng.choose(&all, k).into_iter().collect();
    SteinerInstance::new(g, terms, "random").unwrap()
}

/// Graph on `n ≤ max_n` vertices with edge probability 0.35 and integer
/// vertex weights.
pub fn vertex_weighted(rng: &mut LabRng, max_n: usize) -> VertexWeightedGraph {
    let n = 1 + rng.below(max_n as u64) as usize;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.unit() < 0.35 {
                edges.push((u, v, 1.0));
            }
        }
    }
    let weights = (0..n).map(|_| int_weight(rng, 10)).collect();
    VertexWeightedGraph::new(Graph::new(n, edges).unwrap(), weights).unwrap()
}

pub fn knapsack(rng: &mut LabRng, max_n: usize) -> KnapsackInstance {
    let n = 1 + rng.below(max_n as u64) as usize;
    let sizes: Vec<f64> = (0..n).map(|_| int_weight(rng, 20)).collect();
    let worths: Vec<f64> = (0..n).map(|_| int_weight(rng, 20)).collect();
    let total: f64 = sizes.iter().sum();
    let capacity = (rng.unit() * total).floor();
    KnapsackInstance::new(sizes, worths, capacity).unwrap()
}

/// Uniformly random subset of `0..n`, each item kept with probability `q`.
pub fn random_subset(rng: &mut LabRng, n: usize, q: f64) -> ItemSet {
    (0..n).filter(|_| rng.unit() < q).collect()
}

/// Random subset at a density drawn per call.
pub fn any_subset(rng: &mut LabRng, n: usize) -> ItemSet {
    let q = rng.unit();
    random_subset(rng, n, q)
}

/// Random prediction: the reference with each member dropped and each
/// non-member added independently, at a rate drawn per call.
pub fn noisy(rng: &mut LabRng, n: usize, reference: &ItemSet) -> ItemSet {
    let flip = rng.unit();
    (0..n)
        .filter(|i| reference.contains(i) != (rng.unit() < flip))
        .collect()
}

/// Minimum worth of a subset with total size at least `target`, by
/// enumeration.
pub fn min_cover_by_enumeration(worths: &[f64], sizes: &[f64], target: f64) -> f64 {
    let n = worths.len();
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        let (mut w, mut s) = (0.0, 0.0);
        for i in 0..n {
            if mask >> i & 1 == 1 {
                w += worths[i];
                s += sizes[i];
            }
        }
        if s >= target && w < best {
            best = w;
        }
    }
    best
}

/// Minimum-weight terminal-spanning edge subset by enumeration over all
/// `2^m` subsets.
pub fn steiner_by_enumeration(inst: &SteinerInstance) -> f64 {
    let g = &inst.graph;
    let m = g.edge_count();
    assert!(m <= 20);
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << m) {
        let set: ItemSet = (0..m).filter(|&e| mask >> e & 1 == 1).collect();
        let w = g.weight_of(&set);
        if w < best && alps_core::graph::spans_terminals(g, &set, &inst.terminals) {
            best = w;
        }
    }
    best
}
