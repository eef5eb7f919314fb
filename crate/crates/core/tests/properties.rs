mod common;

use std::cell::RefCell;

use alps_core::blackbox::{complement, min_with_predictions, ApproxSolver, Prediction, SelectionInstance};
use alps_core::cover::{
    is_independent_set, is_robust, is_vertex_cover, is_with_predictions, vc_local_ratio, vc_robust,
    vc_with_predictions,
};
use alps_core::graph::spans_terminals;
use alps_core::io::{load_stp, parse_stp, write_stp};
use alps_core::knapsack::{is_feasible_packing, knapsack_robust, knapsack_with_predictions};
use alps_core::lab::{synth_noise, LabRng, NoiseParam};
use alps_core::oracles::{exact_is, exact_knapsack, exact_steiner, exact_vc};
use alps_core::steiner::{
    alps, alps_with, mehlhorn, mehlhorn_with, tight_example, AlphaParam, MehlhornSolver, Pruning,
};
use alps_core::{ItemSet, Result};

fn alpha_grid() -> Vec<AlphaParam> {
    [1.0, 1.1, 1.4, 2.0, 4.0]
        .into_iter()
        .map(|a| AlphaParam::new(a).unwrap())
        .chain([AlphaParam::INFINITY])
        .collect()
}

#[test]
fn transforms_keep_outputs_feasible() {
    let mut rng = LabRng::new(11);
    for _ in 0..1000 {
        let g = common::vertex_weighted(&mut rng, 14);
        let n = g.graph.vertex_count();
        let pred = common::any_subset(&mut rng, n);
        assert!(is_vertex_cover(&g.graph, &vc_with_predictions(&g, &pred).unwrap()));
        assert!(is_vertex_cover(&g.graph, &vc_robust(&g, &pred).unwrap()));
        let is = is_with_predictions(&g, &pred).unwrap();
        assert!(is_independent_set(&g.graph, &is));
        assert!(is_vertex_cover(&g.graph, &complement(n, &is)));
        assert!(is_independent_set(&g.graph, &is_robust(&g, &pred).unwrap()));

        let k = common::knapsack(&mut rng, 15);
        let pred = common::any_subset(&mut rng, k.len());
        assert!(is_feasible_packing(&k, &knapsack_with_predictions(&k, &pred).unwrap()));
        assert!(is_feasible_packing(&k, &knapsack_robust(&k, &pred).unwrap()));

        let inst = common::steiner(&mut rng, 10, 5);
        let pred = common::any_subset(&mut rng, inst.graph.edge_count());
        for a in alpha_grid() {
            let sol = alps(&inst, &pred, a).unwrap();
            assert!(spans_terminals(&inst.graph, &sol.edges, &inst.terminals));
        }
    }
}

/// Records every weight vector handed to the wrapped solver.
struct Spy<'a> {
    inner: MehlhornSolver<'a>,
    seen: RefCell<Vec<Vec<f64>>>,
}

impl ApproxSolver for Spy<'_> {
    fn item_count(&self) -> usize {
        self.inner.item_count()
    }
    fn ratio(&self) -> f64 {
        self.inner.ratio()
    }
    fn solve(&self, weights: &[f64]) -> Result<ItemSet> {
        self.seen.borrow_mut().push(weights.to_vec());
        self.inner.solve(weights)
    }
    fn is_feasible(&self, items: &ItemSet) -> bool {
        self.inner.is_feasible(items)
    }
}

#[test]
fn wrapped_solver_sees_zeroed_prediction() {
    let mut rng = LabRng::new(12);
    for _ in 0..200 {
        let inst = common::steiner(&mut rng, 10, 5);
        let w = inst.graph.weights();
        let pred = common::random_subset(&mut rng, w.len(), 0.5);
        let spy = Spy {
            inner: MehlhornSolver { inst: &inst },
            seen: RefCell::new(Vec::new()),
        };
        let sel = SelectionInstance::new(w.clone()).unwrap();
        min_with_predictions(&sel, &spy, &Prediction::new(pred.clone())).unwrap();
        let seen = spy.seen.into_inner();
        assert_eq!(seen.len(), 1);
        for (i, (&got, &orig)) in seen[0].iter().zip(&w).enumerate() {
            assert_eq!(got, if pred.contains(&i) { 0.0 } else { orig });
        }
    }
}

#[test]
fn local_ratio_within_factor_two() {
    let mut rng = LabRng::new(13);
    for _ in 0..1000 {
        let g = common::vertex_weighted(&mut rng, 14);
        let cover = vc_local_ratio(&g);
        assert!(is_vertex_cover(&g.graph, &cover));
        assert!(g.weight_of(&cover) <= 2.0 * g.weight_of(&exact_vc(&g).unwrap()));
    }
}

#[test]
fn oracle_identities_and_feasibility() {
    let mut rng = LabRng::new(14);
    for _ in 0..300 {
        let g = common::vertex_weighted(&mut rng, 14);
        let vc = exact_vc(&g).unwrap();
        let is = exact_is(&g).unwrap();
        assert!(is_vertex_cover(&g.graph, &vc));
        assert!(is_independent_set(&g.graph, &is));
        let total: f64 = g.weights().iter().sum();
        assert_eq!(g.weight_of(&is), total - g.weight_of(&vc));

        let k = common::knapsack(&mut rng, 15);
        assert!(is_feasible_packing(&k, &exact_knapsack(&k).unwrap()));
    }
}

#[test]
fn dreyfus_wagner_matches_enumeration() {
    let mut rng = LabRng::new(15);
    let mut checked = 0;
    while checked < 300 {
        let inst = common::steiner(&mut rng, 9, 5);
        if inst.graph.edge_count() > 14 {
            continue;
        }
        let tree = exact_steiner(&inst).unwrap();
        assert!(spans_terminals(&inst.graph, &tree, &inst.terminals));
        assert_eq!(inst.graph.weight_of(&tree), common::steiner_by_enumeration(&inst));
        checked += 1;
    }
}

#[test]
fn pruning_never_hurts() {
    let mut rng = LabRng::new(16);
    for _ in 0..500 {
        let inst = common::steiner(&mut rng, 10, 5);
        let pred = common::random_subset(&mut rng, inst.graph.edge_count(), 0.5);
        for a in alpha_grid() {
            let kept = alps_with(&inst, &pred, a, Pruning::Keep).unwrap();
            let pruned = alps_with(&inst, &pred, a, Pruning::Prune).unwrap();
            assert!(pruned.edges.is_subset(&kept.edges));
            assert!(pruned.weight_original <= kept.weight_original);
            assert!(spans_terminals(&inst.graph, &pruned.edges, &inst.terminals));
        }
        let plain = mehlhorn_with(&inst, &inst.graph.weights(), Pruning::Keep).unwrap();
        assert!(mehlhorn(&inst, &inst.graph.weights()).unwrap().weight_original <= plain.weight_original);
    }
}

#[test]
fn synthetic_noise_error_in_expectation() {
    let reference: ItemSet = (0..20).collect();
    let n = 60;
    for p in [0.25, 0.5, 0.75] {
        let (mut plus, mut minus) = (0.0, 0.0);
        for seed in 0..1000 {
            let pred = synth_noise(n, &reference, NoiseParam::new(p, seed).unwrap()).unwrap();
            plus += pred.items.difference(&reference).count() as f64;
            minus += reference.difference(&pred.items).count() as f64;
        }
        let expected = p * reference.len() as f64;
        for got in [plus / 1000.0, minus / 1000.0] {
            assert!((got - expected).abs() <= 0.1 * expected, "p {p}: {got} vs {expected}");
        }
    }
}

#[test]
fn stp_round_trip_on_bundled_and_generated() {
    let dir = common::data_dir();
    let mut files: Vec<_> = std::fs::read_dir(dir.join("instances"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    files.push(dir.join("learned-base.stp"));
    files.push(dir.join("tight.stp"));
    let mut rng = LabRng::new(17);
    let mut instances: Vec<_> = files.iter().map(|p| load_stp(p).unwrap()).collect();
    instances.extend((0..50).map(|_| common::steiner(&mut rng, 30, 8)));
    for inst in instances {
        let back = parse_stp(&write_stp(&inst)).unwrap();
        assert_eq!(back.graph, inst.graph);
        assert_eq!(back.terminals, inst.terminals);
    }
}

#[test]
fn bundled_tight_example_matches_generator() {
    let (inst, pred) = tight_example(6, 0.1, 6.0).unwrap();
    let dir = common::data_dir();
    let file = load_stp(&dir.join("tight.stp")).unwrap();
    assert_eq!(file.graph, inst.graph);
    assert_eq!(file.terminals, inst.terminals);
    let text = std::fs::read_to_string(dir.join("tight.pred")).unwrap();
    assert_eq!(alps_core::io::parse_edge_set(&file.graph, &text).unwrap(), pred);
}
