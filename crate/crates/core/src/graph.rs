//! Undirected weighted multigraphs and the shortest-path / spanning-tree
//! primitives shared by the solvers.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::{Error, ItemSet, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

impl Edge {
    /// The endpoint opposite to `x`.
    pub fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

/// An undirected multigraph with non-negative edge weights.
///
/// Edge ids are `0..m` in insertion order. Parallel edges are kept; self
/// loops are rejected. The graph is immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let mut adjacency = vec![Vec::new(); vertex_count];
        let mut list = Vec::new();
        for (id, (u, v, weight)) in edges.into_iter().enumerate() {
            if u >= vertex_count || v >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge {id} ({u}, {v}) references a vertex outside 0..{vertex_count}"
                )));
            }
            if u == v {
                return Err(Error::InvalidGraph(format!("edge {id} is a self-loop at {u}")));
            }
            check_weight(weight).map_err(|msg| Error::InvalidGraph(format!("edge {id}: {msg}")))?;
            adjacency[u].push(id);
            adjacency[v].push(id);
            list.push(Edge { u, v, weight });
        }
        Ok(Graph {
            vertex_count,
            edges: list,
            adjacency,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    /// Ids of the edges incident to `v`, in insertion order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn weights(&self) -> Vec<f64> {
        self.edges.iter().map(|e| e.weight).collect()
    }

    pub fn weight_of(&self, edges: &ItemSet) -> f64 {
        edges.iter().map(|&e| self.edges[e].weight).sum()
    }

    /// Ids of all edges joining `u` and `v`, in id order.
    pub fn edges_between(&self, u: usize, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adjacency
            .get(u)
            .into_iter()
            .flatten()
            .copied()
            .filter(move |&e| self.edges[e].other(u) == v)
    }
}

fn check_weight(w: f64) -> std::result::Result<(), String> {
    if w.is_nan() || w < 0.0 || w.is_infinite() {
        Err(format!("weight {w} is not a finite non-negative number"))
    } else {
        Ok(())
    }
}

/// Result of a multi-source Dijkstra run: distances to the closest source,
/// the source itself (the Voronoi cell) and the tree edge towards it.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPathForest {
    pub dist: Vec<f64>,
    pub nearest_source: Vec<Option<usize>>,
    pub parent_edge: Vec<Option<usize>>,
}

impl ShortestPathForest {
    pub fn is_reached(&self, v: usize) -> bool {
        self.nearest_source[v].is_some()
    }

    /// Edge ids on the tree path from `v` to its nearest source, starting at `v`.
    pub fn path_to_source(&self, g: &Graph, mut v: usize) -> Vec<usize> {
        let mut path = Vec::new();
        while let Some(e) = self.parent_edge[v] {
            path.push(e);
            v = g.edge(e).other(v);
        }
        path
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dist(f64);

impl Eq for Dist {}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Shortest paths from every vertex to its closest source.
///
/// Labels are compared lexicographically as `(distance, source id)`, so a
/// vertex equidistant from several sources is assigned to the one with the
/// smallest id; heap ties are then broken by vertex id. A source always keeps
/// its own label, even at distance zero from another. Unreachable vertices
/// keep an infinite distance and no source.
pub fn multi_source_dijkstra(
    g: &Graph,
    sources: &[usize],
    weights: &[f64],
) -> Result<ShortestPathForest> {
    if sources.is_empty() {
        return Err(Error::InvalidParameter("source set is empty".into()));
    }
    if weights.len() != g.edge_count() {
        return Err(Error::WeightLength {
            got: weights.len(),
            expected: g.edge_count(),
        });
    }
    if let Some((id, &w)) = weights.iter().enumerate().find(|(_, &w)| w.is_nan() || w < 0.0) {
        return Err(Error::InvalidParameter(format!("edge {id} has weight {w}")));
    }
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut nearest: Vec<Option<usize>> = vec![None; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();

    for &s in sources {
        if s >= n {
            return Err(Error::ItemOutOfRange { id: s, len: n });
        }
        let better = match nearest[s] {
            None => true,
            Some(cur) => s < cur,
        };
        if better {
            dist[s] = 0.0;
            nearest[s] = Some(s);
            heap.push(Reverse((Dist(0.0), s, s)));
        }
    }

    while let Some(Reverse((Dist(d), src, v))) = heap.pop() {
        if done[v] || nearest[v] != Some(src) || d != dist[v] {
            continue;
        }
        done[v] = true;
        for &e in g.incident(v) {
            let x = g.edge(e).other(v);
            if done[x] || nearest[x] == Some(x) {
                continue;
            }
            let nd = d + weights[e];
            let improves = match nearest[x] {
                None => true,
                Some(cur) => nd < dist[x] || (nd == dist[x] && src < cur),
            };
            if improves {
                dist[x] = nd;
                nearest[x] = Some(src);
                parent[x] = Some(e);
                heap.push(Reverse((Dist(nd), src, x)));
            }
        }
    }

    Ok(ShortestPathForest {
        dist,
        nearest_source: nearest,
        parent_edge: parent,
    })
}

/// Union-find with union by rank and path compression.
#[derive(Debug, Clone)]
pub struct DisjointSets {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSets {
    pub fn new(size: usize) -> Self {
        DisjointSets {
            parent: (0..size).collect(),
            rank: vec![0; size],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the sets of `a` and `b`; returns false if they were already one set.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            Ordering::Less => self.parent[ra] = rb,
            Ordering::Greater => self.parent[rb] = ra,
            Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// A candidate edge for [`kruskal_mst`].
#[derive(Debug, Clone, PartialEq)]
pub struct MstCandidate<P> {
    pub cost: f64,
    pub key: usize,
    pub a: usize,
    pub b: usize,
    pub payload: P,
}

/// Minimum spanning forest over the ground set `0..vertex_count`.
///
/// Candidates are scanned in `(cost, key)` order; accepted payloads are
/// returned in that order.
pub fn kruskal_mst<P>(vertex_count: usize, mut candidates: Vec<MstCandidate<P>>) -> Vec<MstCandidate<P>> {
    candidates.sort_by(|x, y| x.cost.total_cmp(&y.cost).then(x.key.cmp(&y.key)));
    let mut sets = DisjointSets::new(vertex_count);
    let mut forest = Vec::new();
    for c in candidates {
        if forest.len() + 1 >= vertex_count.max(1) {
            break;
        }
        if sets.union(c.a, c.b) {
            forest.push(c);
        }
    }
    forest
}

/// True iff all `terminals` lie in one connected component of `(V, edge_subset)`.
pub fn spans_terminals(g: &Graph, edge_subset: &ItemSet, terminals: &ItemSet) -> bool {
    let mut sets = DisjointSets::new(g.vertex_count());
    for &e in edge_subset {
        let edge = g.edge(e);
        sets.union(edge.u, edge.v);
    }
    let mut it = terminals.iter();
    match it.next() {
        None => true,
        Some(&first) => {
            let root = sets.find(first);
            it.all(|&t| sets.find(t) == root)
        }
    }
}
