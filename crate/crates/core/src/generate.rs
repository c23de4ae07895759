//! Seeded random instances, mechanisms and flows over small rational grids,
//! for property tests and benchmarks.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::duality::Flow;
use crate::model::{Instance, Mechanism, Node, UpgradeMenu};
use crate::rational::{int, rat, Rational};

/// Positive probabilities with small integer weights.
pub fn probabilities<R: Rng>(rng: &mut R, n: usize) -> Vec<Rational> {
    let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=8)).collect();
    let total: i64 = weights.iter().sum();
    weights.iter().map(|&w| rat(w, total)).collect()
}

/// A value `k / den` with `k` drawn from `lo..=hi`.
pub fn grid_value<R: Rng>(rng: &mut R, lo: i64, hi: i64, den: i64) -> Rational {
    rat(rng.gen_range(lo..=hi), den)
}

/// Independent values in `{0, 1/4, ..., 5}`.
pub fn instance<R: Rng>(rng: &mut R, n: usize, d: usize) -> Instance {
    let theta = (0..n)
        .map(|_| (0..d).map(|_| grid_value(rng, 0, 20, 4)).collect())
        .collect();
    Instance::new(theta, probabilities(rng, n)).expect("generated instance is valid")
}

/// Values non-decreasing (or increasing) down each column.
pub fn monotone_instance<R: Rng>(rng: &mut R, n: usize, d: usize, strict: bool) -> Instance {
    let step_lo = if strict { 1 } else { 0 };
    let mut theta = vec![vec![Rational::zero(); d]; n];
    for k in 0..d {
        let mut v = grid_value(rng, 0, 8, 4);
        for row in theta.iter_mut() {
            row[k] = v.clone();
            v += grid_value(rng, step_lo, 8, 4);
        }
    }
    Instance::new(theta, probabilities(rng, n)).expect("generated instance is valid")
}

/// Strictly positive values whose ratio of every higher item to every lower
/// item is non-decreasing in the type index.
pub fn mrs_instance<R: Rng>(rng: &mut R, n: usize, d: usize) -> Instance {
    let base: Vec<Rational> = (0..n).map(|_| grid_value(rng, 1, 16, 4)).collect();
    let mut theta: Vec<Vec<Rational>> = base.into_iter().map(|b| vec![b]).collect();
    for _ in 1..d {
        let mut growth: Vec<Rational> = (0..n).map(|_| grid_value(rng, 1, 12, 4)).collect();
        growth.sort();
        for (row, g) in theta.iter_mut().zip(growth) {
            let next = row.last().expect("non-empty row") * g;
            row.push(next);
        }
    }
    Instance::new(theta, probabilities(rng, n)).expect("generated instance is valid")
}

/// Allocation in `{0, 1/2, 1}` and transfers in `[-2, 5]`.
pub fn mechanism<R: Rng>(rng: &mut R, n: usize, d: usize) -> Mechanism {
    let q = (0..n)
        .map(|_| (0..d).map(|_| grid_value(rng, 0, 2, 2)).collect())
        .collect();
    let t = (0..n).map(|_| grid_value(rng, -8, 20, 4)).collect();
    Mechanism { q, t }
}

/// A non-negative feasible flow. Every type spreads its required outflow
/// over random lower types and the sink; unless `downward`, random
/// two-cycles are added on top, which keeps every net outflow unchanged.
pub fn feasible_flow<R: Rng>(rng: &mut R, inst: &Instance, downward: bool) -> Flow {
    let n = inst.n();
    let mut flow = Flow::zero(n);
    for i in (0..n).rev() {
        let mut remaining = inst.prob(i) + flow.inflow(i);
        let targets: Vec<Node> = std::iter::once(Node::Sink)
            .chain((0..i).map(Node::Type))
            .collect();
        let picks = rng.gen_range(1..=targets.len());
        let chosen: Vec<Node> = targets.choose_multiple(rng, picks).copied().collect();
        for (idx, &to) in chosen.iter().enumerate() {
            let share = if idx + 1 == chosen.len() {
                remaining.clone()
            } else {
                &remaining * grid_value(rng, 0, 4, 4)
            };
            remaining -= &share;
            flow.add(i, to, &share);
        }
    }
    if !downward {
        for _ in 0..n {
            let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if a != b {
                let c = grid_value(rng, 1, 4, 8);
                flow.add(a, Node::Type(b), &c);
                flow.add(b, Node::Type(a), &c);
            }
        }
    }
    flow
}

/// A random chain of 0/1 bundles with increasing prices; each type picks
/// its favourite offer.
pub fn upgrade_menu<R: Rng>(rng: &mut R, inst: &Instance) -> UpgradeMenu {
    let d = inst.d();
    let mut goods: Vec<usize> = (0..d).collect();
    goods.shuffle(rng);
    let tiers = rng.gen_range(1..=d);
    let mut cuts: Vec<usize> = (1..=d).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(tiers).collect();
    cuts.sort();
    let mut bundles = Vec::new();
    let mut prices = Vec::new();
    let mut price = Rational::zero();
    for &cut in &cuts {
        let mut bundle = vec![int(0); d];
        for &g in &goods[..cut] {
            bundle[g] = int(1);
        }
        price += grid_value(rng, 1, 24, 4);
        bundles.push(bundle);
        prices.push(price.clone());
    }
    UpgradeMenu::from_offers(inst, bundles, prices).expect("generated menu is a chain")
}
