//! Exact solvers for small instances, used as ground truth.

use crate::cover::VertexWeightedGraph;
use crate::graph::{kruskal_mst, Graph, MstCandidate};
use crate::io::SteinerInstance;
use crate::knapsack::KnapsackInstance;
use crate::steiner::prune_leaves;
use crate::{Error, ItemSet, Result};

pub const MAX_STEINER_TERMINALS: usize = 10;
pub const MAX_STEINER_VERTICES: usize = 60;
pub const MAX_VC_VERTICES: usize = 20;
pub const MAX_KNAPSACK_ENUM: usize = 20;
/// Upper bound on `n · (capacity + 1)` for the size-indexed knapsack DP.
pub const MAX_KNAPSACK_DP_CELLS: usize = 20_000_000;

/// All-pairs shortest paths with the first edge of each path.
struct Apsp {
    dist: Vec<Vec<f64>>,
    /// `next[i][j]`: first edge on the chosen path from `i` to `j`.
    next: Vec<Vec<Option<usize>>>,
}

impl Apsp {
    fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let mut dist = vec![vec![f64::INFINITY; n]; n];
        let mut next = vec![vec![None; n]; n];
        for (v, row) in dist.iter_mut().enumerate() {
            row[v] = 0.0;
        }
        for (id, e) in g.edges().iter().enumerate() {
            if e.weight < dist[e.u][e.v] {
                dist[e.u][e.v] = e.weight;
                dist[e.v][e.u] = e.weight;
                next[e.u][e.v] = Some(id);
                next[e.v][e.u] = Some(id);
            }
        }
        for k in 0..n {
            for i in 0..n {
                if dist[i][k].is_infinite() {
                    continue;
                }
                for j in 0..n {
                    let via = dist[i][k] + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                        next[i][j] = next[i][k];
                    }
                }
            }
        }
        Apsp { dist, next }
    }

    fn add_path(&self, g: &Graph, mut from: usize, to: usize, out: &mut ItemSet) {
        while from != to {
            let e = self.next[from][to].expect("path exists");
            out.insert(e);
            from = g.edge(e).other(from);
        }
    }
}

/// Minimum-weight Steiner tree by the Dreyfus–Wagner dynamic program.
///
/// Limited to `k ≤ 10` terminals and `|V| ≤ 60`. The returned edge set is a
/// tree with no non-terminal leaves.
pub fn exact_steiner(inst: &SteinerInstance) -> Result<ItemSet> {
    let g = &inst.graph;
    let n = g.vertex_count();
    let terms = inst.terminal_list();
    let k = terms.len();
    if k > MAX_STEINER_TERMINALS || n > MAX_STEINER_VERTICES {
        return Err(Error::OracleGuard(format!(
            "{k} terminals / {n} vertices; limits are {MAX_STEINER_TERMINALS} / {MAX_STEINER_VERTICES}"
        )));
    }
    if k <= 1 {
        return Ok(ItemSet::new());
    }
    let apsp = Apsp::new(g);
    let root = terms[k - 1];
    if let Some(&t) = terms.iter().find(|&&t| apsp.dist[root][t].is_infinite()) {
        return Err(Error::Infeasible(format!(
            "terminal {} is disconnected from terminal {}",
            t + 1,
            root + 1
        )));
    }

    let q = k - 1;
    let full = (1usize << q) - 1;
    let mut dp = vec![vec![f64::INFINITY; n]; full + 1];
    // How dp[s][v] was reached: a split of s at v, or a move from vertex u.
    let mut split = vec![vec![0usize; n]; full + 1];
    let mut moved = vec![vec![usize::MAX; n]; full + 1];
    for (i, &t) in terms[..q].iter().enumerate() {
        dp[1 << i][..n].copy_from_slice(&apsp.dist[t]);
    }
    for s in 1..=full {
        if s.count_ones() < 2 {
            continue;
        }
        let low = s & s.wrapping_neg();
        let mut merged = vec![f64::INFINITY; n];
        // Subsets containing the lowest bit, so each split is tried once.
        let rest = s ^ low;
        let mut sub = rest;
        loop {
            let a = sub | low;
            if a != s {
                let b = s ^ a;
                for v in 0..n {
                    let c = dp[a][v] + dp[b][v];
                    if c < merged[v] {
                        merged[v] = c;
                        split[s][v] = a;
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        for v in 0..n {
            let mut best = f64::INFINITY;
            let mut from = usize::MAX;
            for u in 0..n {
                let c = merged[u] + apsp.dist[u][v];
                if c < best {
                    best = c;
                    from = u;
                }
            }
            dp[s][v] = best;
            moved[s][v] = from;
        }
    }

    let mut edges = ItemSet::new();
    let mut stack = vec![(full, root)];
    while let Some((s, v)) = stack.pop() {
        if s.count_ones() == 1 {
            let t = terms[s.trailing_zeros() as usize];
            apsp.add_path(g, t, v, &mut edges);
            continue;
        }
        let u = moved[s][v];
        apsp.add_path(g, u, v, &mut edges);
        let a = split[s][u];
        stack.push((a, u));
        stack.push((s ^ a, u));
    }

    // The union of paths may share vertices; reduce it to a tree.
    let candidates = edges
        .iter()
        .map(|&e| MstCandidate {
            cost: g.edge(e).weight,
            key: e,
            a: g.edge(e).u,
            b: g.edge(e).v,
            payload: e,
        })
        .collect();
    let mut tree: ItemSet = kruskal_mst(n, candidates).into_iter().map(|c| c.payload).collect();
    prune_leaves(g, &mut tree, &inst.terminals);
    Ok(tree)
}

/// Minimum-weight vertex cover by branch and bound (`n ≤ 20`).
pub fn exact_vc(g: &VertexWeightedGraph) -> Result<ItemSet> {
    let n = g.graph.vertex_count();
    if n > MAX_VC_VERTICES {
        return Err(Error::OracleGuard(format!("{n} vertices; limit is {MAX_VC_VERTICES}")));
    }
    let mut search = VcSearch {
        g,
        state: vec![State::Free; n],
        best: f64::INFINITY,
        best_set: ItemSet::new(),
    };
    search.run(0.0);
    Ok(search.best_set)
}

/// Maximum-weight independent set, the complement of [`exact_vc`].
pub fn exact_is(g: &VertexWeightedGraph) -> Result<ItemSet> {
    let cover = exact_vc(g)?;
    Ok((0..g.graph.vertex_count()).filter(|v| !cover.contains(v)).collect())
}

#[derive(Clone, Copy, PartialEq)]
enum State {
    Free,
    In,
    Out,
}

struct VcSearch<'a> {
    g: &'a VertexWeightedGraph,
    state: Vec<State>,
    best: f64,
    best_set: ItemSet,
}

impl VcSearch<'_> {
    fn run(&mut self, cost: f64) {
        if cost >= self.best {
            return;
        }
        let open = self
            .g
            .graph
            .edges()
            .iter()
            .find(|e| self.state[e.u] != State::In && self.state[e.v] != State::In);
        let Some(e) = open.copied() else {
            self.best = cost;
            self.best_set = (0..self.state.len()).filter(|&v| self.state[v] == State::In).collect();
            return;
        };
        let w = self.g.weights();
        // Branch on the first endpoint that is still free: take it, or
        // exclude it and take the other endpoint.
        let (a, b) = if self.state[e.u] == State::Free { (e.u, e.v) } else { (e.v, e.u) };
        if self.state[a] == State::Out {
            // Both endpoints excluded: dead branch.
            return;
        }
        self.state[a] = State::In;
        self.run(cost + w[a]);
        if self.state[b] == State::Free {
            self.state[a] = State::Out;
            self.state[b] = State::In;
            self.run(cost + w[b]);
            self.state[b] = State::Free;
        }
        self.state[a] = State::Free;
    }
}

/// Maximum-worth packing: a size-indexed DP for integral sizes and
/// capacity, subset enumeration (`n ≤ 20`) otherwise.
pub fn exact_knapsack(inst: &KnapsackInstance) -> Result<ItemSet> {
    let n = inst.len();
    let integral = inst.sizes().iter().all(|s| s.fract() == 0.0) && inst.capacity().is_finite();
    let cap = inst.capacity().floor();
    if integral && (n as f64) * (cap + 1.0) <= MAX_KNAPSACK_DP_CELLS as f64 {
        return Ok(knapsack_dp(inst, cap as usize));
    }
    if n > MAX_KNAPSACK_ENUM {
        return Err(Error::OracleGuard(format!(
            "{n} items with non-integral or large sizes; enumeration limit is {MAX_KNAPSACK_ENUM}"
        )));
    }
    let mut best = (0.0, 0u32);
    for mask in 0u32..(1 << n) {
        let items = (0..n).filter(|i| mask >> i & 1 == 1);
        let size: f64 = items.clone().map(|i| inst.sizes()[i]).sum();
        if size <= inst.capacity() {
            let worth: f64 = items.map(|i| inst.worths()[i]).sum();
            if worth > best.0 {
                best = (worth, mask);
            }
        }
    }
    Ok((0..n).filter(|i| best.1 >> i & 1 == 1).collect())
}

fn knapsack_dp(inst: &KnapsackInstance, cap: usize) -> ItemSet {
    let n = inst.len();
    let mut best = vec![0.0f64; cap + 1];
    let mut take = vec![vec![false; cap + 1]; n];
    for i in 0..n {
        let s = inst.sizes()[i] as usize;
        let w = inst.worths()[i];
        if s > cap {
            continue;
        }
        for c in (s..=cap).rev() {
            let with = best[c - s] + w;
            if with > best[c] {
                best[c] = with;
                take[i][c] = true;
            }
        }
    }
    let mut items = ItemSet::new();
    let mut c = cap;
    for i in (0..n).rev() {
        if take[i][c] {
            items.insert(i);
            c -= inst.sizes()[i] as usize;
        }
    }
    items
}
