//! Experiment harness: synthetic-noise and learned-prediction runs of ALPS
//! against exact optima, producing one [`ExperimentRecord`] per cell.

use std::fmt;

use crate::io::{format_sig6, SteinerInstance};
use crate::lab::{erm_majority, sample_instance, synth_noise, CoreMode, DistributionSpec, NoiseParam};
use crate::oracles::exact_steiner;
use crate::steiner::{alpha_search, alps, mehlhorn, AlphaParam};
use crate::{Error, ItemSet, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Problem {
    Steiner,
    VertexCover,
    IndependentSet,
    Knapsack,
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Problem::Steiner => "steiner",
            Problem::VertexCover => "vc",
            Problem::IndependentSet => "is",
            Problem::Knapsack => "knapsack",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Mehlhorn,
    Alps,
    AlphaSearch,
    Vc,
    VcPred,
    IsPred,
    KnapsackPred,
    Oracle,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Mehlhorn => "mehlhorn",
            Algorithm::Alps => "alps",
            Algorithm::AlphaSearch => "alpha-search",
            Algorithm::Vc => "vc",
            Algorithm::VcPred => "vc-pred",
            Algorithm::IsPred => "is-pred",
            Algorithm::KnapsackPred => "knapsack-pred",
            Algorithm::Oracle => "oracle",
        })
    }
}

/// Normalised cost: 0 at the optimum, 1 at Mehlhorn's cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormalizedCost {
    Value(f64),
    /// Mehlhorn is optimal but the algorithm is not.
    Unbounded,
}

impl fmt::Display for NormalizedCost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalizedCost::Value(v) => f.write_str(&format_sig6(*v)),
            NormalizedCost::Unbounded => f.write_str("inf"),
        }
    }
}

/// `(c_alg − c_opt) / (c_mst − c_opt)`. A cost below the optimum is clamped
/// to the optimum.
pub fn normalized_cost(c_alg: f64, c_opt: f64, c_mst: f64) -> NormalizedCost {
    let c_alg = c_alg.max(c_opt);
    if c_mst == c_opt {
        if c_alg == c_opt {
            NormalizedCost::Value(0.0)
        } else {
            NormalizedCost::Unbounded
        }
    } else {
        NormalizedCost::Value((c_alg - c_opt) / (c_mst - c_opt))
    }
}

/// `cost / opt`, with `0/0 = 1`.
pub fn approximation_ratio(cost: f64, opt: f64) -> f64 {
    if opt > 0.0 {
        cost / opt
    } else if cost == 0.0 {
        1.0
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Measurement {
    pub cost: f64,
    pub opt_cost: f64,
    pub mst_cost: Option<f64>,
    pub ratio: f64,
    pub normalized_cost: Option<NormalizedCost>,
}

impl Measurement {
    pub fn steiner(cost: f64, opt_cost: f64, mst_cost: f64) -> Self {
        Measurement {
            cost,
            opt_cost,
            mst_cost: Some(mst_cost),
            ratio: approximation_ratio(cost, opt_cost),
            normalized_cost: Some(normalized_cost(cost, opt_cost, mst_cost)),
        }
    }
}

/// One CSV row. A failed cell keeps its coordinates and carries the error
/// message in place of the measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub instance: String,
    pub problem: Problem,
    pub algorithm: Algorithm,
    pub p: f64,
    pub alpha: Option<AlphaParam>,
    pub seed: u64,
    pub outcome: std::result::Result<Measurement, String>,
}

impl ExperimentRecord {
    pub const HEADER: [&'static str; 11] = [
        "instance",
        "problem",
        "algorithm",
        "p",
        "alpha",
        "seed",
        "cost",
        "opt_cost",
        "mst_cost",
        "ratio",
        "normalized_cost",
    ];

    pub fn measurement(&self) -> Option<&Measurement> {
        self.outcome.as_ref().ok()
    }

    pub fn fields(&self) -> [String; 11] {
        let head = [
            self.instance.clone(),
            self.problem.to_string(),
            self.algorithm.to_string(),
            format_sig6(self.p),
            self.alpha.map(|a| if a.is_infinite() { "inf".into() } else { format_sig6(a.value()) })
                .unwrap_or_default(),
            self.seed.to_string(),
        ];
        let tail = match &self.outcome {
            Ok(m) => [
                format_sig6(m.cost),
                format_sig6(m.opt_cost),
                m.mst_cost.map(format_sig6).unwrap_or_default(),
                format_sig6(m.ratio),
                m.normalized_cost.map(|c| c.to_string()).unwrap_or_default(),
            ],
            Err(msg) => [
                format!("error: {msg}"),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
            ],
        };
        let mut out: [String; 11] = Default::default();
        for (slot, v) in out.iter_mut().zip(head.into_iter().chain(tail)) {
            *slot = v;
        }
        out
    }
}

/// Maps `f` over `items` on up to `threads` scoped threads; results keep
/// the input order.
pub fn par_map<T, R, F>(items: &[T], threads: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let threads = threads.max(1).min(items.len().max(1));
    if threads == 1 {
        return items.iter().map(f).collect();
    }
    let chunk = items.len().div_ceil(threads);
    std::thread::scope(|scope| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|part| {
                let f = &f;
                scope.spawn(move || part.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("experiment worker panicked"))
            .collect()
    })
}

#[derive(Debug, Clone)]
pub struct SyntheticConfig {
    pub p_grid: Vec<f64>,
    pub alpha_grid: Vec<AlphaParam>,
    pub seeds: Vec<u64>,
    /// ε of the α search.
    pub epsilon: f64,
    pub threads: usize,
}

/// An instance of the synthetic experiment with an optional precomputed
/// reference solution and optimum value.
#[derive(Debug, Clone)]
pub struct SyntheticInput {
    pub instance: SteinerInstance,
    pub reference: Option<ItemSet>,
    pub opt_override: Option<f64>,
}

struct Baseline {
    reference: ItemSet,
    opt: f64,
    mst: f64,
}

fn baseline(input: &SyntheticInput) -> Result<Baseline> {
    let inst = &input.instance;
    let reference = match &input.reference {
        Some(r) => r.clone(),
        None => exact_steiner(inst)?,
    };
    let opt = input
        .opt_override
        .unwrap_or_else(|| inst.graph.weight_of(&reference));
    let mst = mehlhorn(inst, &inst.graph.weights())?.weight_original;
    Ok(Baseline { reference, opt, mst })
}

/// Synthetic-noise experiment. For every instance, `p` and seed, the
/// reference solution is perturbed by [`synth_noise`] and fed to Mehlhorn
/// (as the baseline row), ALPS at every α and the α search. Rows come out
/// in `(instance, p, seed, algorithm, α)` order.
pub fn run_synthetic(inputs: &[SyntheticInput], cfg: &SyntheticConfig) -> Vec<ExperimentRecord> {
    let baselines = par_map(inputs, cfg.threads, baseline);
    let mut cells = Vec::new();
    for (i, input) in inputs.iter().enumerate() {
        for &p in &cfg.p_grid {
            for &seed in &cfg.seeds {
                cells.push((i, input, p, seed));
            }
        }
    }
    let per_cell = par_map(&cells, cfg.threads, |&(i, input, p, seed)| {
        synthetic_cell(input, &baselines[i], p, seed, cfg)
    });
    per_cell.into_iter().flatten().collect()
}

fn synthetic_cell(
    input: &SyntheticInput,
    base: &Result<Baseline>,
    p: f64,
    seed: u64,
    cfg: &SyntheticConfig,
) -> Vec<ExperimentRecord> {
    let inst = &input.instance;
    let row = |algorithm, alpha, outcome| ExperimentRecord {
        instance: inst.name.clone(),
        problem: Problem::Steiner,
        algorithm,
        p,
        alpha,
        seed,
        outcome,
    };
    let slots: Vec<(Algorithm, Option<AlphaParam>)> = std::iter::once((Algorithm::Mehlhorn, Some(AlphaParam::ONE)))
        .chain(cfg.alpha_grid.iter().map(|&a| (Algorithm::Alps, Some(a))))
        .chain(std::iter::once((Algorithm::AlphaSearch, None)))
        .collect();

    let base = match base {
        Ok(b) => b,
        Err(e) => {
            return slots
                .into_iter()
                .map(|(alg, a)| row(alg, a, Err(e.to_string())))
                .collect()
        }
    };
    let prediction = match NoiseParam::new(p, seed)
        .and_then(|noise| synth_noise(inst.graph.edge_count(), &base.reference, noise))
    {
        Ok(pred) => pred.items,
        Err(e) => {
            return slots
                .into_iter()
                .map(|(alg, a)| row(alg, a, Err(e.to_string())))
                .collect()
        }
    };
    let measure = |cost: f64| Measurement::steiner(cost, base.opt, base.mst);
    slots
        .into_iter()
        .map(|(alg, alpha)| match alg {
            Algorithm::Mehlhorn => row(alg, alpha, Ok(measure(base.mst))),
            Algorithm::Alps => {
                let a = alpha.expect("alps rows carry alpha");
                let out = alps(inst, &prediction, a).map(|s| measure(s.weight_original));
                row(alg, alpha, out.map_err(|e| e.to_string()))
            }
            _ => match alpha_search(inst, &prediction, cfg.epsilon) {
                Ok(r) => row(alg, Some(r.alpha), Ok(measure(r.solution.weight_original))),
                Err(e) => row(alg, None, Err(e.to_string())),
            },
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct LearnedConfig {
    pub mode: CoreMode,
    pub p: f64,
    /// Number of sampled instances (folds).
    pub samples: usize,
    pub seed: u64,
    pub alpha_grid: Vec<AlphaParam>,
    pub threads: usize,
}

/// Sampled instances with their exact solutions.
#[derive(Debug, Clone)]
pub struct LearnedSample {
    pub instance: SteinerInstance,
    pub solution: ItemSet,
}

impl LearnedConfig {
    /// Leave-one-out needs at least one training sample per fold.
    pub fn check(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::InvalidParameter(format!(
                "learned experiment needs at least 2 samples, got {}",
                self.samples
            )));
        }
        NoiseParam::new(self.p, self.seed).map(|_| ())
    }
}

pub fn draw_samples(base: &SteinerInstance, cfg: &LearnedConfig) -> Result<Vec<LearnedSample>> {
    let spec = DistributionSpec::new(base.clone(), cfg.mode, cfg.p, cfg.seed)?;
    let instances = (0..cfg.samples as u64)
        .map(|i| sample_instance(&spec, i))
        .collect::<Result<Vec<_>>>()?;
    par_map(&instances, cfg.threads, |inst| {
        exact_steiner(inst).map(|solution| LearnedSample {
            instance: inst.clone(),
            solution,
        })
    })
    .into_iter()
    .collect()
}

/// Learned-prediction experiment with leave-one-out folds: the prediction
/// for sample `i` is the majority vote over the other samples' optima.
/// Each fold yields a Mehlhorn row and one ALPS row per α.
pub fn run_learned(base: &SteinerInstance, cfg: &LearnedConfig) -> Result<Vec<ExperimentRecord>> {
    cfg.check()?;
    let samples = draw_samples(base, cfg)?;
    Ok(run_learned_on(&samples, cfg))
}

/// The fold loop of [`run_learned`] over already solved samples.
pub fn run_learned_on(samples: &[LearnedSample], cfg: &LearnedConfig) -> Vec<ExperimentRecord> {
    let folds: Vec<usize> = (0..samples.len()).collect();
    par_map(&folds, cfg.threads, |&i| learned_fold(samples, i, cfg))
        .into_iter()
        .flatten()
        .collect()
}

fn learned_fold(samples: &[LearnedSample], i: usize, cfg: &LearnedConfig) -> Vec<ExperimentRecord> {
    let sample = &samples[i];
    let inst = &sample.instance;
    let row = |algorithm, alpha, outcome| ExperimentRecord {
        instance: inst.name.clone(),
        problem: Problem::Steiner,
        algorithm,
        p: cfg.p,
        alpha,
        seed: cfg.seed,
        outcome,
    };
    let training: Vec<ItemSet> = samples
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, s)| s.solution.clone())
        .collect();
    let opt = inst.graph.weight_of(&sample.solution);
    let prepared = erm_majority(&training).and_then(|pred| {
        let mst = mehlhorn(inst, &inst.graph.weights())?.weight_original;
        Ok((pred.items, mst))
    });
    let (prediction, mst) = match prepared {
        Ok(v) => v,
        Err(e) => {
            let msg = e.to_string();
            return std::iter::once(row(Algorithm::Mehlhorn, Some(AlphaParam::ONE), Err(msg.clone())))
                .chain(cfg.alpha_grid.iter().map(|&a| row(Algorithm::Alps, Some(a), Err(msg.clone()))))
                .collect();
        }
    };
    let mut rows = vec![row(
        Algorithm::Mehlhorn,
        Some(AlphaParam::ONE),
        Ok(Measurement::steiner(mst, opt, mst)),
    )];
    for &a in &cfg.alpha_grid {
        let out = alps(inst, &prediction, a)
            .map(|s| Measurement::steiner(s.weight_original, opt, mst))
            .map_err(|e| e.to_string());
        rows.push(row(Algorithm::Alps, Some(a), out));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::write_csv;
    use crate::lab::random_steiner_instance;

    #[test]
    fn normalized_cost_anchors() {
        assert_eq!(normalized_cost(5.0, 5.0, 9.0), NormalizedCost::Value(0.0));
        assert_eq!(normalized_cost(9.0, 5.0, 9.0), NormalizedCost::Value(1.0));
        assert_eq!(normalized_cost(7.0, 5.0, 9.0), NormalizedCost::Value(0.5));
        assert_eq!(normalized_cost(4.0, 5.0, 9.0), NormalizedCost::Value(0.0));
        assert_eq!(normalized_cost(5.0, 5.0, 5.0), NormalizedCost::Value(0.0));
        assert_eq!(normalized_cost(6.0, 5.0, 5.0), NormalizedCost::Unbounded);
        assert_eq!(NormalizedCost::Unbounded.to_string(), "inf");
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(approximation_ratio(3.0, 2.0), 1.5);
        assert_eq!(approximation_ratio(0.0, 0.0), 1.0);
        assert!(approximation_ratio(1.0, 0.0).is_infinite());
    }

    fn record(outcome: std::result::Result<Measurement, String>) -> ExperimentRecord {
        ExperimentRecord {
            instance: "a,b".into(),
            problem: Problem::Steiner,
            algorithm: Algorithm::Alps,
            p: 0.25,
            alpha: Some(AlphaParam::INFINITY),
            seed: 3,
            outcome,
        }
    }

    #[test]
    fn csv_rows() {
        assert_eq!(write_csv(&[]).unwrap(), ExperimentRecord::HEADER.join(",") + "\n");
        let r = record(Ok(Measurement::steiner(7.0, 6.0, 8.0)));
        let text = write_csv(std::slice::from_ref(&r)).unwrap();
        assert_eq!(text.lines().count(), 2);
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let row = reader.records().next().unwrap().unwrap();
        assert_eq!(&row[0], "a,b");
        assert_eq!(&row[4], "inf");
        assert_eq!(row[9].parse::<f64>().unwrap(), 1.16667);
        assert_eq!(&row[10], "0.5");
        let failed = write_csv(&[record(Err("boom".into()))]).unwrap();
        assert!(failed.contains("error: boom"));
    }

    #[test]
    fn par_map_keeps_order() {
        let items: Vec<u32> = (0..37).collect();
        assert_eq!(par_map(&items, 4, |x| x * 2), par_map(&items, 1, |x| x * 2));
    }

    #[test]
    fn synthetic_row_count_and_perfect_prediction() {
        let inputs: Vec<SyntheticInput> = (0..2)
            .map(|s| SyntheticInput {
                instance: random_steiner_instance(12, 8, 4, 9, s).unwrap(),
                reference: None,
                opt_override: None,
            })
            .collect();
        let cfg = SyntheticConfig {
            p_grid: vec![0.0, 0.5],
            alpha_grid: vec![AlphaParam::new(2.0).unwrap(), AlphaParam::INFINITY],
            seeds: vec![1, 2, 3],
            epsilon: 0.25,
            threads: 2,
        };
        let rows = run_synthetic(&inputs, &cfg);
        assert_eq!(rows.len(), 2 * 2 * 3 * (2 + 2));
        for r in &rows {
            let m = r.measurement().unwrap_or_else(|| panic!("{} failed: {:?}", r.algorithm, r.outcome));
            assert!(m.ratio >= 1.0);
            if r.p == 0.0 && r.alpha == Some(AlphaParam::INFINITY) {
                assert_eq!(m.ratio, 1.0);
            }
        }
        let serial = run_synthetic(&inputs, &SyntheticConfig { threads: 1, ..cfg });
        assert_eq!(write_csv(&rows).unwrap(), write_csv(&serial).unwrap());
    }

    #[test]
    fn learned_requires_two_samples() {
        let base = random_steiner_instance(12, 8, 4, 9, 1).unwrap();
        let cfg = LearnedConfig {
            mode: CoreMode::FixedCore,
            p: 0.5,
            samples: 1,
            seed: 1,
            alpha_grid: vec![AlphaParam::ONE],
            threads: 1,
        };
        assert!(run_learned(&base, &cfg).is_err());
    }

    #[test]
    fn broken_instance_yields_error_rows() {
        let g = crate::Graph::new(3, [(0, 1, 1.0)]).unwrap();
        let inst = SteinerInstance::new(g, [0, 2].into(), "cut").unwrap();
        let cfg = SyntheticConfig {
            p_grid: vec![0.0],
            alpha_grid: vec![AlphaParam::ONE],
            seeds: vec![1],
            epsilon: 0.5,
            threads: 1,
        };
        let rows = run_synthetic(
            &[SyntheticInput {
                instance: inst,
                reference: None,
                opt_override: None,
            }],
            &cfg,
        );
        assert_eq!(rows.len(), 3);
        assert!(rows.iter().all(|r| r.outcome.is_err()));
    }
}
