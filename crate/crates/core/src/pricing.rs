//! Upgrade allocations, optimal transfers for a fixed allocation, separate
//! monopoly pricing, and conversions between upgrade menus and separate
//! posted prices on monotone type spaces.

use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::analysis::CutoffVector;
use crate::lp::{build_transfer_lp, solve_lp};
use crate::model::{chain_order, expectation, Instance, Mechanism, UpgradeMenu};
use crate::rational::{is_zero_one, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PricingError {
    #[error(
        "type space is not monotone: type {} values item {} above type {}",
        lower + 1,
        item + 1,
        upper + 1
    )]
    NotMonotone {
        lower: usize,
        upper: usize,
        item: usize,
    },
    #[error("menu bundle {bundle} is not a 0/1 vector")]
    FractionalBundle { bundle: usize },
    #[error("upgrade to bundle {bundle} costs {price}, outside the bounds [{lower}, {upper}]")]
    InfeasiblePriceBounds {
        bundle: usize,
        price: Rational,
        lower: Rational,
        upper: Rational,
    },
    #[error("separate prices do not replicate the purchase of type {}", type_index + 1)]
    NotReplicable { type_index: usize },
    #[error("no incentive compatible transfers implement the allocation")]
    NotImplementable,
}

/// `q_i^k = 1` iff `i >= cutoffs[k]`.
pub fn upgrade_allocation(inst: &Instance, cutoffs: &CutoffVector) -> Vec<Vec<Rational>> {
    (0..inst.n())
        .map(|i| {
            (0..inst.d())
                .map(|k| {
                    if i >= cutoffs.get(k) {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// Revenue-maximizing incentive compatible and individually rational
/// transfers for the allocation `q`.
pub fn price_allocation(inst: &Instance, q: &[Vec<Rational>]) -> Result<Mechanism, PricingError> {
    let (_, t) = solve_lp(&build_transfer_lp(inst, q))
        .into_optimum()
        .map_err(|_| PricingError::NotImplementable)?;
    Ok(Mechanism { q: q.to_vec(), t })
}

/// Posted per-item prices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SeparatePrices(pub Vec<Rational>);

impl fmt::Display for SeparatePrices {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Each type buys every item it values at least at its price.
pub fn separate_demand(inst: &Instance, prices: &SeparatePrices) -> Mechanism {
    let mut q = Vec::with_capacity(inst.n());
    let mut t = Vec::with_capacity(inst.n());
    for i in 0..inst.n() {
        let mut row = Vec::with_capacity(inst.d());
        let mut pay = Rational::zero();
        for (k, p) in prices.0.iter().enumerate() {
            if inst.value(i, k) >= p {
                row.push(Rational::one());
                pay += p;
            } else {
                row.push(Rational::zero());
            }
        }
        q.push(row);
        t.push(pay);
    }
    Mechanism { q, t }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparateOutcome {
    pub prices: SeparatePrices,
    pub mechanism: Mechanism,
    pub revenue: Rational,
}

/// Item by item, the revenue-maximizing posted price among observed values,
/// lowest price on ties.
pub fn separate_monopoly_pricing(inst: &Instance) -> SeparateOutcome {
    let prices = (0..inst.d())
        .map(|k| {
            let mut candidates: Vec<&Rational> = (0..inst.n()).map(|i| inst.value(i, k)).collect();
            candidates.sort();
            candidates.dedup();
            let mut best: Option<(Rational, Rational)> = None;
            for p in candidates {
                let buyers: Rational = (0..inst.n())
                    .filter(|&i| inst.value(i, k) >= p)
                    .map(|i| inst.prob(i))
                    .sum();
                let rev = p * buyers;
                if best.as_ref().is_none_or(|(_, r)| rev > *r) {
                    best = Some((p.clone(), rev));
                }
            }
            best.expect("at least one type").0
        })
        .collect();
    let prices = SeparatePrices(prices);
    let mechanism = separate_demand(inst, &prices);
    let revenue = expectation(inst, &mechanism.t);
    SeparateOutcome {
        prices,
        mechanism,
        revenue,
    }
}

/// First adjacent pair `(i, i+1)` and item where values decrease, scanning
/// item by item.
pub fn check_monotone_type_space(inst: &Instance) -> Option<(usize, usize, usize)> {
    (0..inst.d()).find_map(|k| {
        (0..inst.n().saturating_sub(1))
            .find(|&i| inst.value(i, k) > inst.value(i + 1, k))
            .map(|i| (i, i + 1, k))
    })
}

/// Separate prices that make every type buy the same bundle for the same
/// payment as under `menu`. Bundles nobody buys are skipped.
///
/// Each upgrade's price is split over its new goods by interpolating every
/// good between the highest value among buyers of the tier below and the
/// lowest value among buyers of the tier, with a common ratio.
pub fn upgrade_to_separate(
    inst: &Instance,
    menu: &UpgradeMenu,
) -> Result<SeparatePrices, PricingError> {
    if let Some((lower, upper, item)) = check_monotone_type_space(inst) {
        return Err(PricingError::NotMonotone { lower, upper, item });
    }
    if let Some(bundle) = menu.bundles.iter().position(|b| !b.iter().all(is_zero_one)) {
        return Err(PricingError::FractionalBundle { bundle });
    }
    let d = inst.d();
    let buyers =
        |b: usize| -> Vec<usize> { (0..inst.n()).filter(|&i| menu.assignment[i] == b).collect() };
    let sold: Vec<usize> = std::iter::once(0)
        .chain((1..menu.bundles.len()).filter(|&b| !buyers(b).is_empty()))
        .collect();

    let mut prices: Vec<Option<Rational>> = vec![None; d];
    for pair in sold.windows(2) {
        let (below, tier) = (pair[0], pair[1]);
        let goods: Vec<usize> = (0..d)
            .filter(|&j| menu.bundles[tier][j].is_one() && menu.bundles[below][j].is_zero())
            .collect();
        let (low_types, high_types) = (buyers(below), buyers(tier));
        let lower: Vec<Rational> = goods
            .iter()
            .map(|&j| {
                low_types
                    .iter()
                    .map(|&i| inst.value(i, j).clone())
                    .max()
                    .unwrap_or_else(Rational::zero)
            })
            .collect();
        let upper: Vec<Rational> = goods
            .iter()
            .map(|&j| {
                high_types
                    .iter()
                    .map(|&i| inst.value(i, j).clone())
                    .min()
                    .expect("sold tiers have buyers")
            })
            .collect();
        let tau = &menu.prices[tier] - &menu.prices[below];
        let (lo_sum, hi_sum): (Rational, Rational) = (lower.iter().sum(), upper.iter().sum());
        if tau < lo_sum || tau > hi_sum {
            return Err(PricingError::InfeasiblePriceBounds {
                bundle: tier,
                price: tau,
                lower: lo_sum,
                upper: hi_sum,
            });
        }
        let ratio = if hi_sum == lo_sum {
            Rational::zero()
        } else {
            (&tau - &lo_sum) / (&hi_sum - &lo_sum)
        };
        for (idx, &j) in goods.iter().enumerate() {
            prices[j] = Some(&lower[idx] + &ratio * (&upper[idx] - &lower[idx]));
        }
    }
    let prices = SeparatePrices(
        prices
            .into_iter()
            .enumerate()
            .map(|(j, p)| {
                p.unwrap_or_else(|| {
                    (0..inst.n())
                        .map(|i| inst.value(i, j).clone())
                        .max()
                        .expect("at least one type")
                        + Rational::one()
                })
            })
            .collect(),
    );
    let expected = menu.to_mechanism();
    let got = separate_demand(inst, &prices);
    if let Some(type_index) =
        (0..inst.n()).find(|&i| got.q[i] != expected.q[i] || got.t[i] != expected.t[i])
    {
        return Err(PricingError::NotReplicable { type_index });
    }
    Ok(prices)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeparateConversion {
    Chain(Mechanism),
    /// Two types whose purchased sets are not nested.
    NotChain {
        first: usize,
        second: usize,
    },
}

pub fn separate_to_upgrade(inst: &Instance, prices: &SeparatePrices) -> SeparateConversion {
    let m = separate_demand(inst, prices);
    match chain_order(&m.q) {
        Ok(_) => SeparateConversion::Chain(m),
        Err((first, second)) => SeparateConversion::NotChain { first, second },
    }
}
