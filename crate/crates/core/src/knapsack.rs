//! Knapsack with predictions through its complementary covering problem:
//! pick items of total size at least `t = Σ s_i − c` at minimum worth; the
//! unpicked items form the packing.

use std::cmp::Ordering;

use crate::blackbox::{max_with_predictions, robust_max, ApproxSolver, Prediction, SelectionInstance};
use crate::{weight_of, Error, ItemSet, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct KnapsackInstance {
    sizes: Vec<f64>,
    worths: Vec<f64>,
    capacity: f64,
}

impl KnapsackInstance {
    pub fn new(sizes: Vec<f64>, worths: Vec<f64>, capacity: f64) -> Result<Self> {
        if sizes.len() != worths.len() {
            return Err(Error::WeightLength {
                got: worths.len(),
                expected: sizes.len(),
            });
        }
        if let Some((i, s)) = sizes.iter().enumerate().find(|(_, s)| !(**s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidParameter(format!("item {i} has size {s}; sizes must be positive")));
        }
        if let Some((i, w)) = worths.iter().enumerate().find(|(_, w)| !(**w >= 0.0 && w.is_finite())) {
            return Err(Error::InvalidParameter(format!("item {i} has worth {w}")));
        }
        if !(capacity >= 0.0) {
            return Err(Error::InvalidParameter(format!("capacity {capacity} is negative")));
        }
        Ok(KnapsackInstance {
            sizes,
            worths,
            capacity,
        })
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    pub fn sizes(&self) -> &[f64] {
        &self.sizes
    }

    pub fn worths(&self) -> &[f64] {
        &self.worths
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn worth_of(&self, items: &ItemSet) -> f64 {
        weight_of(&self.worths, items)
    }

    pub fn size_of(&self, items: &ItemSet) -> f64 {
        weight_of(&self.sizes, items)
    }

    /// Size the complementary cover must reach: `Σ s_i − c`.
    pub fn cover_target(&self) -> CoverTarget {
        CoverTarget(self.sizes.iter().sum::<f64>() - self.capacity)
    }
}

/// Required total size of a covering selection. Non-positive targets are
/// met by the empty set.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct CoverTarget(pub f64);

pub fn is_feasible_packing(inst: &KnapsackInstance, items: &ItemSet) -> bool {
    inst.size_of(items) <= inst.capacity
}

/// Greedy 2-approximation for min-worth covering (Σ s ≥ t).
///
/// Items are scanned by increasing worth/size ratio, compared by cross
/// multiplication with ties broken by id. An item that would make the
/// running set reach `t` is not added; instead `running ∪ {item}` becomes a
/// candidate. The cheapest candidate wins, the earliest one on ties.
pub fn complementary_greedy(worths: &[f64], sizes: &[f64], target: CoverTarget) -> Result<ItemSet> {
    let t = target.0;
    if worths.len() != sizes.len() {
        return Err(Error::WeightLength {
            got: worths.len(),
            expected: sizes.len(),
        });
    }
    if t <= 0.0 {
        return Ok(ItemSet::new());
    }
    let total: f64 = sizes.iter().sum();
    if total < t {
        return Err(Error::Infeasible(format!(
            "total size {total} is below the cover target {t}"
        )));
    }

    let mut order: Vec<usize> = (0..sizes.len()).collect();
    order.sort_by(|&i, &j| {
        (worths[i] * sizes[j])
            .partial_cmp(&(worths[j] * sizes[i]))
            .unwrap_or(Ordering::Equal)
            .then(i.cmp(&j))
    });

    let mut running: Vec<usize> = Vec::new();
    let mut running_size = 0.0;
    let mut running_worth = 0.0;
    // (worth, prefix length of `running`, closing item)
    let mut best: Option<(f64, usize, usize)> = None;
    for &i in &order {
        if running_size + sizes[i] < t {
            running.push(i);
            running_size += sizes[i];
            running_worth += worths[i];
        } else {
            let worth = running_worth + worths[i];
            if best.is_none_or(|(b, _, _)| worth < b) {
                best = Some((worth, running.len(), i));
            }
        }
    }
    let (_, len, closing) = best.expect("a candidate exists whenever Σ s ≥ t");
    let mut set: ItemSet = running[..len].iter().copied().collect();
    set.insert(closing);
    Ok(set)
}

/// [`complementary_greedy`] as a weight-parametrised solver (ρ = 2).
#[derive(Debug, Clone)]
pub struct ComplementaryGreedy<'a> {
    pub sizes: &'a [f64],
    pub target: CoverTarget,
}

impl ApproxSolver for ComplementaryGreedy<'_> {
    fn item_count(&self) -> usize {
        self.sizes.len()
    }

    fn ratio(&self) -> f64 {
        2.0
    }

    fn solve(&self, weights: &[f64]) -> Result<ItemSet> {
        complementary_greedy(weights, self.sizes, self.target)
    }

    fn is_feasible(&self, items: &ItemSet) -> bool {
        self.target.0 <= 0.0 || weight_of(self.sizes, items) >= self.target.0
    }
}

/// Density greedy packing, compared against the best single item; the
/// conventional 1/2-approximation used as the robust baseline.
#[derive(Debug, Clone)]
pub struct GreedyPacking<'a> {
    pub inst: &'a KnapsackInstance,
}

impl ApproxSolver for GreedyPacking<'_> {
    fn item_count(&self) -> usize {
        self.inst.len()
    }

    fn ratio(&self) -> f64 {
        0.5
    }

    fn solve(&self, weights: &[f64]) -> Result<ItemSet> {
        let sizes = self.inst.sizes();
        let cap = self.inst.capacity();
        let mut order: Vec<usize> = (0..sizes.len()).collect();
        order.sort_by(|&i, &j| {
            (weights[j] * sizes[i])
                .partial_cmp(&(weights[i] * sizes[j]))
                .unwrap_or(Ordering::Equal)
                .then(i.cmp(&j))
        });
        let mut packed = ItemSet::new();
        let mut used = 0.0;
        for i in order {
            if used + sizes[i] <= cap {
                used += sizes[i];
                packed.insert(i);
            }
        }
        let single = (0..sizes.len())
            .filter(|&i| sizes[i] <= cap)
            .max_by(|&a, &b| weights[a].total_cmp(&weights[b]).then(b.cmp(&a)));
        match single {
            Some(i) if weights[i] > weight_of(weights, &packed) => Ok([i].into()),
            _ => Ok(packed),
        }
    }

    fn is_feasible(&self, items: &ItemSet) -> bool {
        is_feasible_packing(self.inst, items)
    }
}

fn selection(inst: &KnapsackInstance, predicted: &ItemSet) -> Result<(SelectionInstance, Prediction)> {
    if let Some(&i) = predicted.iter().next_back().filter(|&&i| i >= inst.len()) {
        return Err(Error::ItemOutOfRange { id: i, len: inst.len() });
    }
    Ok((
        SelectionInstance::new(inst.worths.clone())?,
        Prediction::new(predicted.clone()),
    ))
}

/// Packing derived from a predicted packing. Unpredicted items are made
/// free for the complementary cover, so the greedy prefers to drop them.
pub fn knapsack_with_predictions(inst: &KnapsackInstance, predicted: &ItemSet) -> Result<ItemSet> {
    let (sel, pred) = selection(inst, predicted)?;
    let solver = ComplementaryGreedy {
        sizes: &inst.sizes,
        target: inst.cover_target(),
    };
    max_with_predictions(&sel, &solver, &pred)
}

pub fn knapsack_robust(inst: &KnapsackInstance, predicted: &ItemSet) -> Result<ItemSet> {
    let (sel, pred) = selection(inst, predicted)?;
    let solver = ComplementaryGreedy {
        sizes: &inst.sizes,
        target: inst.cover_target(),
    };
    robust_max(&sel, &solver, &GreedyPacking { inst }, &pred)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Minimum worth of any subset with size ≥ t.
    fn brute_cover(worths: &[f64], sizes: &[f64], t: f64) -> f64 {
        let n = worths.len();
        (0u32..1 << n)
            .filter_map(|m| {
                let s: f64 = (0..n).filter(|i| m >> i & 1 == 1).map(|i| sizes[i]).sum();
                (s >= t).then(|| (0..n).filter(|i| m >> i & 1 == 1).map(|i| worths[i]).sum::<f64>())
            })
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn greedy_examples() {
        let (w, s) = ([1.0, 2.0, 3.0], [1.0, 1.0, 1.0]);
        let out = complementary_greedy(&w, &s, CoverTarget(2.0)).unwrap();
        assert_eq!(out, ItemSet::from([0, 1]));
        assert_eq!(brute_cover(&w, &s, 2.0), 3.0);

        assert!(complementary_greedy(&w, &s, CoverTarget(0.0)).unwrap().is_empty());
        assert_eq!(
            complementary_greedy(&[4.0], &[5.0], CoverTarget(5.0)).unwrap(),
            ItemSet::from([0])
        );
    }

    #[test]
    fn reaching_target_exactly_makes_a_candidate() {
        // Item 0 alone reaches t exactly: it must become a candidate, not be
        // absorbed into the running set.
        let out = complementary_greedy(&[1.0, 10.0], &[2.0, 1.0], CoverTarget(2.0)).unwrap();
        assert_eq!(out, ItemSet::from([0]));
        // Running size 1 plus the next item reaches t = 2 exactly, giving the
        // candidate {0, 1} (worth 2) which beats {2} (worth 5).
        let out = complementary_greedy(&[1.0, 1.0, 5.0], &[1.0, 1.0, 10.0], CoverTarget(2.0)).unwrap();
        assert_eq!(out, ItemSet::from([0, 1]));
    }

    #[test]
    fn infeasible_target() {
        assert!(matches!(
            complementary_greedy(&[1.0], &[1.0], CoverTarget(2.0)),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn prediction_examples() {
        let inst = KnapsackInstance::new(vec![4.0, 3.0, 3.0], vec![6.0, 5.0, 5.0], 6.0).unwrap();
        let out = knapsack_with_predictions(&inst, &[1, 2].into()).unwrap();
        assert_eq!(out, ItemSet::from([1, 2]));
        assert_eq!(inst.worth_of(&out), 10.0);

        let roomy = KnapsackInstance::new(vec![1.0, 2.0], vec![1.0, 1.0], 3.0).unwrap();
        assert_eq!(
            knapsack_with_predictions(&roomy, &ItemSet::new()).unwrap(),
            ItemSet::from([0, 1])
        );
    }

    #[test]
    fn feasibility_predicate() {
        let inst = KnapsackInstance::new(vec![2.0, 3.0, 9.0], vec![1.0; 3], 5.0).unwrap();
        assert!(is_feasible_packing(&inst, &ItemSet::new()));
        assert!(is_feasible_packing(&inst, &[0, 1].into()));
        assert!(!is_feasible_packing(&inst, &[2].into()));
        let full = KnapsackInstance::new(vec![2.0, 3.0], vec![1.0; 2], 5.0).unwrap();
        assert!(is_feasible_packing(&full, &[0, 1].into()));
    }

    #[test]
    fn robust_never_below_baseline() {
        let inst = KnapsackInstance::new(vec![4.0, 3.0, 3.0], vec![6.0, 5.0, 5.0], 6.0).unwrap();
        let out = knapsack_robust(&inst, &[0].into()).unwrap();
        assert!(is_feasible_packing(&inst, &out));
        assert_eq!(inst.worth_of(&out), 10.0);
    }

    #[test]
    fn rejects_bad_instances() {
        assert!(KnapsackInstance::new(vec![0.0], vec![1.0], 1.0).is_err());
        assert!(KnapsackInstance::new(vec![1.0], vec![-1.0], 1.0).is_err());
        assert!(KnapsackInstance::new(vec![1.0], vec![1.0, 2.0], 1.0).is_err());
    }
}
