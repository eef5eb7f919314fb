//! Black-box prediction transforms for selection problems.
//!
//! A selection problem picks a feasible subset of `n` weighted items. Given
//! a conventional ρ-approximation, [`min_with_predictions`] zeroes the
//! weight of every predicted item before calling it; for maximisation,
//! [`max_with_predictions`] zeroes every *unpredicted* item and solves the
//! complementary covering problem instead. The `robust_*` variants return
//! the better of the augmented and the plain run.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::{weight_of, Error, ItemSet, Result};

/// Item weights of a selection problem. The feasible family itself lives in
/// the solver's [`ApproxSolver::is_feasible`].
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionInstance {
    weights: Vec<f64>,
}

impl SelectionInstance {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| !(**w >= 0.0)) {
            return Err(Error::InvalidParameter(format!("item {i} has weight {w}")));
        }
        Ok(SelectionInstance { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_of(&self, items: &ItemSet) -> f64 {
        weight_of(&self.weights, items)
    }

    fn check_ids(&self, items: &ItemSet) -> Result<()> {
        match items.iter().next_back() {
            Some(&id) if id >= self.len() => Err(Error::ItemOutOfRange { id, len: self.len() }),
            _ => Ok(()),
        }
    }
}

/// A weight-parametrised approximation algorithm for a fixed instance
/// structure (graph, sizes, ...), together with its feasibility predicate.
pub trait ApproxSolver {
    /// Size of the ground set.
    fn item_count(&self) -> usize;

    /// The approximation ratio ρ (≥ 1 for minimisation problems).
    fn ratio(&self) -> f64;

    /// Solves the instance under the given per-item weights.
    fn solve(&self, weights: &[f64]) -> Result<ItemSet>;

    fn is_feasible(&self, items: &ItemSet) -> bool;
}

impl<S: ApproxSolver + ?Sized> ApproxSolver for &S {
    fn item_count(&self) -> usize {
        (**self).item_count()
    }
    fn ratio(&self) -> f64 {
        (**self).ratio()
    }
    fn solve(&self, weights: &[f64]) -> Result<ItemSet> {
        (**self).solve(weights)
    }
    fn is_feasible(&self, items: &ItemSet) -> bool {
        (**self).is_feasible(items)
    }
}

/// A predicted solution. Feasibility is not required.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Prediction {
    pub items: ItemSet,
}

impl Prediction {
    pub fn new(items: ItemSet) -> Self {
        Prediction { items }
    }

    pub fn empty() -> Self {
        Prediction::default()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.items.contains(&item)
    }
}

impl From<ItemSet> for Prediction {
    fn from(items: ItemSet) -> Self {
        Prediction { items }
    }
}

/// False-positive and false-negative weight of a prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredictionError {
    pub eta_plus: f64,
    pub eta_minus: f64,
}

impl PredictionError {
    pub fn total(&self) -> f64 {
        self.eta_plus + self.eta_minus
    }
}

/// `(w(X̂ \ X), w(X \ X̂))` for prediction `X̂` and reference solution `X`.
pub fn prediction_error(
    inst: &SelectionInstance,
    predicted: &Prediction,
    reference: &ItemSet,
) -> Result<PredictionError> {
    inst.check_ids(&predicted.items)?;
    inst.check_ids(reference)?;
    let w = inst.weights();
    Ok(PredictionError {
        eta_plus: predicted.items.difference(reference).map(|&i| w[i]).sum(),
        eta_minus: reference.difference(&predicted.items).map(|&i| w[i]).sum(),
    })
}

/// Weights with every predicted item set to zero.
pub fn zero_predicted(inst: &SelectionInstance, predicted: &Prediction) -> Vec<f64> {
    inst.weights()
        .iter()
        .enumerate()
        .map(|(i, &w)| if predicted.contains(i) { 0.0 } else { w })
        .collect()
}

/// Weights with every item outside the prediction set to zero.
pub fn zero_unpredicted(inst: &SelectionInstance, predicted: &Prediction) -> Vec<f64> {
    inst.weights()
        .iter()
        .enumerate()
        .map(|(i, &w)| if predicted.contains(i) { w } else { 0.0 })
        .collect()
}

fn check_solver(inst: &SelectionInstance, solver: &impl ApproxSolver) -> Result<()> {
    if solver.item_count() != inst.len() {
        return Err(Error::WeightLength {
            got: inst.len(),
            expected: solver.item_count(),
        });
    }
    Ok(())
}

fn feasible_or_err(solver: &impl ApproxSolver, items: ItemSet) -> Result<ItemSet> {
    if solver.is_feasible(&items) {
        Ok(items)
    } else {
        Err(Error::InfeasibleOutput)
    }
}

/// Runs `solver` with the predicted items made free.
///
/// For every feasible `X'` the output satisfies
/// `w(X) ≤ w(X') + η⁺ + (ρ − 1)·η⁻`, errors taken w.r.t. `X'`.
pub fn min_with_predictions(
    inst: &SelectionInstance,
    solver: &impl ApproxSolver,
    predicted: &Prediction,
) -> Result<ItemSet> {
    check_solver(inst, solver)?;
    inst.check_ids(&predicted.items)?;
    let out = solver.solve(&zero_predicted(inst, predicted))?;
    feasible_or_err(solver, out)
}

/// The lighter of the prediction-augmented and the plain solution; ties
/// keep the augmented one.
pub fn robust_min(
    inst: &SelectionInstance,
    solver: &impl ApproxSolver,
    predicted: &Prediction,
) -> Result<ItemSet> {
    let augmented = min_with_predictions(inst, solver, predicted)?;
    let plain = feasible_or_err(solver, solver.solve(inst.weights())?)?;
    if inst.weight_of(&plain) < inst.weight_of(&augmented) {
        Ok(plain)
    } else {
        Ok(augmented)
    }
}

/// Maximisation through the complementary problem.
///
/// `comp_solver` minimises `w(Y)` subject to `[n] \ Y` being feasible for
/// the original problem; its `is_feasible` is the predicate on `Y`. The
/// result `X = [n] \ Y` satisfies `w(X) ≥ w(X') − (ρ − 1)·η⁺ − η⁻`.
pub fn max_with_predictions(
    inst: &SelectionInstance,
    comp_solver: &impl ApproxSolver,
    predicted: &Prediction,
) -> Result<ItemSet> {
    check_solver(inst, comp_solver)?;
    inst.check_ids(&predicted.items)?;
    let y = feasible_or_err(comp_solver, comp_solver.solve(&zero_unpredicted(inst, predicted))?)?;
    Ok(complement(inst.len(), &y))
}

/// The heavier of the augmented solution and `baseline`'s solution on the
/// original weights; ties keep the augmented one. `baseline` solves the
/// maximisation problem directly.
pub fn robust_max(
    inst: &SelectionInstance,
    comp_solver: &impl ApproxSolver,
    baseline: &impl ApproxSolver,
    predicted: &Prediction,
) -> Result<ItemSet> {
    let augmented = max_with_predictions(inst, comp_solver, predicted)?;
    let plain = feasible_or_err(baseline, baseline.solve(inst.weights())?)?;
    if inst.weight_of(&plain) > inst.weight_of(&augmented) {
        Ok(plain)
    } else {
        Ok(augmented)
    }
}

pub fn complement(n: usize, items: &ItemSet) -> ItemSet {
    (0..n).filter(|i| !items.contains(i)).collect()
}

/// Rounds per-item confidences to a set: item `i` is kept iff a uniform
/// draw in `[0, 1)` falls below `probabilities[i]`. Draws come from a
/// SplitMix64 stream seeded with `seed`, one per item in id order.
pub fn round_confidences(probabilities: &[f64], seed: u64) -> Result<Prediction> {
    if let Some((i, p)) = probabilities
        .iter()
        .enumerate()
        .find(|(_, p)| !(0.0..=1.0).contains(*p))
    {
        return Err(Error::InvalidParameter(format!("confidence {p} of item {i} outside [0, 1]")));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let items = probabilities
        .iter()
        .enumerate()
        .filter(|(_, &p)| {
            let u = (rng.next_u64() >> 11) as f64 / (1u64 << 53) as f64;
            u < p
        })
        .map(|(i, _)| i)
        .collect();
    Ok(Prediction { items })
}
