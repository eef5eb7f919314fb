//! Prediction laboratory: synthetic noise around a reference solution,
//! majority-vote ERM over sampled solutions, and terminal-resampling
//! instance distributions.
//!
//! All randomness comes from SplitMix64 streams. Uniform integers below `n`
//! are drawn by rejection from the top of the 64-bit range, and subsets by
//! a partial Fisher–Yates shuffle, so a seed gives the same output on every
//! platform.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::blackbox::Prediction;
use crate::graph::Graph;
use crate::io::SteinerInstance;
use crate::{Error, ItemSet, Result};

/// Deterministic random source used throughout the lab.
#[derive(Debug, Clone)]
pub struct LabRng(SplitMix64);

impl LabRng {
    pub fn new(seed: u64) -> Self {
        LabRng(SplitMix64::seed_from_u64(seed))
    }

    /// Independent stream for `(seed, stream)`.
    pub fn derived(seed: u64, stream: u64) -> Self {
        let mut mix = SplitMix64::seed_from_u64(seed ^ stream.wrapping_mul(0xD6E8_FEB8_6659_FD93));
        LabRng::new(mix.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in `0..n` (`n > 0`).
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "empty range");
        let zone = u64::MAX - (u64::MAX % n);
        loop {
            let x = self.next_u64();
            if x < zone {
                return x % n;
            }
        }
    }

    /// Uniform real in `[0, 1)` with 53 bits of precision.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// `count` distinct elements of `pool`, in draw order.
    pub fn choose(&mut self, pool: &[usize], count: usize) -> Vec<usize> {
        let mut pool = pool.to_vec();
        let count = count.min(pool.len());
        for i in 0..count {
            let j = i + self.below((pool.len() - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(count);
        pool
    }
}

/// `⌈p·n⌉`, ignoring floating-point residue below 1e-9 (so that e.g.
/// `0.7 · 10` counts as 7).
pub fn fraction_count(p: f64, n: usize) -> usize {
    ((p * n as f64 - 1e-9).ceil().max(0.0) as usize).min(n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseParam {
    p: f64,
    pub seed: u64,
}

impl NoiseParam {
    pub fn new(p: f64, seed: u64) -> Result<Self> {
        check_fraction(p)?;
        Ok(NoiseParam { p, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

fn check_fraction(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("p must lie in [0, 1], got {p}")))
    }
}

/// Swaps `⌈p·|S|⌉` uniformly chosen reference items for as many uniformly
/// chosen items outside the reference (fewer if the outside is smaller).
pub fn synth_noise(ground_set_size: usize, reference: &ItemSet, noise: NoiseParam) -> Result<Prediction> {
    if let Some(&id) = reference.iter().next_back().filter(|&&id| id >= ground_set_size) {
        return Err(Error::ItemOutOfRange {
            id,
            len: ground_set_size,
        });
    }
    let inside: Vec<usize> = reference.iter().copied().collect();
    let outside: Vec<usize> = (0..ground_set_size).filter(|i| !reference.contains(i)).collect();
    let swaps = fraction_count(noise.p, inside.len()).min(outside.len());
    let mut rng = LabRng::new(noise.seed);
    let removed = rng.choose(&inside, swaps);
    let added = rng.choose(&outside, swaps);
    let mut items = reference.clone();
    for r in removed {
        items.remove(&r);
    }
    items.extend(added);
    Ok(Prediction::new(items))
}

/// Coordinate-wise majority vote: an item is predicted iff it occurs in
/// strictly more than half of the solutions.
pub fn erm_majority(solutions: &[ItemSet]) -> Result<Prediction> {
    if solutions.is_empty() {
        return Err(Error::InvalidParameter("no solutions to learn from".into()));
    }
    let mut counts = std::collections::BTreeMap::<usize, usize>::new();
    for s in solutions {
        for &i in s {
            *counts.entry(i).or_default() += 1;
        }
    }
    let items = counts
        .into_iter()
        .filter(|&(_, c)| 2 * c > solutions.len())
        .map(|(i, _)| i)
        .collect();
    Ok(Prediction::new(items))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoreMode {
    /// The retained terminals depend on the seed only.
    FixedCore,
    /// The retained terminals are redrawn for every sample.
    NoCore,
}

impl std::str::FromStr for CoreMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fixed-core" => Ok(CoreMode::FixedCore),
            "no-core" => Ok(CoreMode::NoCore),
            _ => Err(Error::InvalidParameter(format!(
                "unknown mode `{s}` (expected fixed-core or no-core)"
            ))),
        }
    }
}

impl std::fmt::Display for CoreMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CoreMode::FixedCore => "fixed-core",
            CoreMode::NoCore => "no-core",
        })
    }
}

#[derive(Debug, Clone)]
pub struct DistributionSpec {
    pub base: SteinerInstance,
    pub mode: CoreMode,
    p: f64,
    pub seed: u64,
}

const CORE_STREAM: u64 = u64::MAX;

impl DistributionSpec {
    pub fn new(base: SteinerInstance, mode: CoreMode, p: f64, seed: u64) -> Result<Self> {
        check_fraction(p)?;
        Ok(DistributionSpec { base, mode, p, seed })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Draws instance `index` of the distribution: `|T| − ⌈p·|T|⌉` retained
/// terminals plus `⌈p·|T|⌉` fresh ones from the base non-terminals.
pub fn sample_instance(spec: &DistributionSpec, index: u64) -> Result<SteinerInstance> {
    let base = &spec.base;
    let terminals: Vec<usize> = base.terminal_list();
    let fresh = fraction_count(spec.p, terminals.len());
    let others: Vec<usize> = (0..base.graph.vertex_count())
        .filter(|v| !base.terminals.contains(v))
        .collect();
    if others.len() < fresh {
        return Err(Error::InvalidParameter(format!(
            "need {fresh} non-terminal vertices to resample, graph has {}",
            others.len()
        )));
    }
    let index_stream = index.wrapping_mul(2);
    let mut core_rng = match spec.mode {
        CoreMode::FixedCore => LabRng::derived(spec.seed, CORE_STREAM),
        CoreMode::NoCore => LabRng::derived(spec.seed, index_stream + 1),
    };
    let mut fresh_rng = LabRng::derived(spec.seed, index_stream);
    let mut chosen: ItemSet = core_rng.choose(&terminals, terminals.len() - fresh).into_iter().collect();
    chosen.extend(fresh_rng.choose(&others, fresh));
    SteinerInstance::new(base.graph.clone(), chosen, format!("{}.{index}", base.name))
}

/// Random connected instance with integer weights: a random spanning tree
/// plus `extra_edges` random edges (parallel edges allowed), weights drawn
/// uniformly from `1..=max_weight`, and `k` distinct terminals.
pub fn random_steiner_instance(
    n: usize,
    extra_edges: usize,
    k: usize,
    max_weight: u64,
    seed: u64,
) -> Result<SteinerInstance> {
    if n < 2 || k == 0 || k > n || max_weight == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2, 1 <= k <= n and a positive weight range (n = {n}, k = {k})"
        )));
    }
    let mut rng = LabRng::new(seed);
    let mut edges = Vec::with_capacity(n - 1 + extra_edges);
    for v in 1..n {
        let u = rng.below(v as u64) as usize;
        edges.push((u, v, (1 + rng.below(max_weight)) as f64));
    }
    while edges.len() < n - 1 + extra_edges {
        let u = rng.below(n as u64) as usize;
        let v = rng.below(n as u64) as usize;
        if u != v {
            edges.push((u, v, (1 + rng.below(max_weight)) as f64));
        }
    }
    let graph = Graph::new(n, edges)?;
    let all: Vec<usize> = (0..n).collect();
    let terminals = rng.choose(&all, k).into_iter().collect();
    SteinerInstance::new(graph, terminals, format!("rand-n{n}-k{k}-s{seed}"))
}
