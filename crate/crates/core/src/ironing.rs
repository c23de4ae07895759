//! The ironing map and the flow-rerouting algorithm that turns the initial
//! flow into a certificate whose pseudo-revenues attain the quasi-concave
//! closures.

use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::analysis::{candidate_ironing_intervals, CutoffVector, IroningInterval, RevenueCurves};
use crate::duality::{flow_pseudo_revenues, initial_flow, Flow};
use crate::model::{Instance, Node};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IroningError {
    #[error("type {}: neither {first} nor {second} contains the other", type_index + 1)]
    AmbiguousContainment {
        type_index: usize,
        first: IroningInterval,
        second: IroningInterval,
    },
    #[error("type {}: no gamma in [0, 1] attains the closure of item {}", type_index + 1, item + 1)]
    NoRoot { type_index: usize, item: usize },
    #[error("bad cutoffs: {0}")]
    BadCutoffs(String),
}

/// The item `kappa(i)` whose closure type `i` is ironed towards. Types
/// covered by identical intervals of two neighbouring items are marked as
/// tied; the algorithm then pins whichever of the two items needs more
/// rerouting.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IroningMap {
    kappa: Vec<usize>,
    tied: Vec<bool>,
}

impl IroningMap {
    pub fn new(kappa: Vec<usize>) -> Self {
        let tied = vec![false; kappa.len()];
        Self { kappa, tied }
    }

    pub fn get(&self, i: usize) -> usize {
        self.kappa[i]
    }

    /// Type `i` may also be ironed for item `get(i) + 1`.
    pub fn is_tied(&self, i: usize) -> bool {
        self.tied[i]
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.kappa
    }

    pub fn labels(&self) -> Vec<usize> {
        self.kappa.iter().map(|k| k + 1).collect()
    }
}

fn covering(intervals: &[IroningInterval], i: usize) -> Option<IroningInterval> {
    intervals.iter().copied().find(|iv| iv.contains(i))
}

fn includes(outer: &IroningInterval, inner: &IroningInterval) -> bool {
    outer.lo <= inner.lo && inner.hi <= outer.hi
}

/// Ties between identical intervals of neighbouring items are reported as
/// the lower item and marked in the map.
pub fn ironing_map(
    inst: &Instance,
    curves: &RevenueCurves,
    cutoffs: &CutoffVector,
) -> Result<IroningMap, IroningError> {
    let (n, d) = (inst.n(), inst.d());
    if cutoffs.len() != d || cutoffs.as_slice().iter().any(|&c| c >= n) {
        return Err(IroningError::BadCutoffs(format!(
            "{cutoffs} for {n} types and {d} goods"
        )));
    }
    if !cutoffs.is_nondecreasing() {
        return Err(IroningError::BadCutoffs(format!(
            "{cutoffs} is not nondecreasing"
        )));
    }
    let intervals: Vec<Vec<IroningInterval>> = (0..d)
        .map(|k| candidate_ironing_intervals(curves, k))
        .collect();
    let c = cutoffs.as_slice();
    let mut kappa = Vec::with_capacity(n);
    let mut tied = vec![false; n];
    for i in 0..n {
        if i <= c[0] {
            kappa.push(0);
            continue;
        }
        if i >= c[d - 1] {
            kappa.push(d - 1);
            continue;
        }
        if let Some(k) = c.iter().position(|&ck| ck == i) {
            kappa.push(k);
            continue;
        }
        let k = c
            .iter()
            .rposition(|&ck| ck < i)
            .expect("i exceeds the first cutoff");
        let item = match (covering(&intervals[k], i), covering(&intervals[k + 1], i)) {
            (None, None) => k,
            (Some(_), None) => k,
            (None, Some(_)) => k + 1,
            (Some(a), Some(b)) => {
                if a.same_span(&b) {
                    tied[i] = true;
                    k
                } else if includes(&a, &b) {
                    k
                } else if includes(&b, &a) {
                    k + 1
                } else {
                    return Err(IroningError::AmbiguousContainment {
                        type_index: i,
                        first: a,
                        second: b,
                    });
                }
            }
        };
        kappa.push(item);
    }
    Ok(IroningMap { kappa, tied })
}

/// Moves the fraction `1 - gamma` of every edge from a higher type into `i`
/// one step down, to `i - 1` (or the sink), and takes the same mass off the
/// edge from `i` to `i - 1`.
pub fn reroute(flow: &Flow, i: usize, gamma: &Rational) -> Flow {
    let mut out = flow.clone();
    let lower = if i == 0 {
        Node::Sink
    } else {
        Node::Type(i - 1)
    };
    let keep_off = Rational::one() - gamma;
    let mut moved_total = Rational::zero();
    for j in i + 1..flow.n() {
        let value = flow.get(j, Node::Type(i));
        if value.is_zero() {
            continue;
        }
        let moved = &keep_off * value;
        out.set(j, Node::Type(i), gamma * value);
        out.add(j, lower, &moved);
        moved_total += moved;
    }
    out.add(i, lower, &-moved_total);
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IroningStep {
    pub type_index: usize,
    pub item: usize,
    pub gamma: Rational,
    pub flow: Flow,
    /// Flow pseudo-revenues after the step, indexed `[i][k]`.
    pub revenues: Vec<Vec<Rational>>,
}

/// Steps in execution order, from the highest type down to the lowest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IroningTrace {
    pub steps: Vec<IroningStep>,
}

impl IroningTrace {
    /// `gamma_i` listed by type, lowest first.
    pub fn gammas(&self) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.steps.len()];
        for step in &self.steps {
            out[step.type_index] = step.gamma.clone();
        }
        out
    }

    /// The item pinned at each type, lowest type first.
    pub fn items(&self) -> Vec<usize> {
        let mut out = vec![0; self.steps.len()];
        for step in &self.steps {
            out[step.type_index] = step.item;
        }
        out
    }

    pub fn final_flow(&self) -> Option<&Flow> {
        self.steps.last().map(|s| &s.flow)
    }
}

impl fmt::Display for IroningTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gammas: Vec<String> = self.gammas().iter().map(ToString::to_string).collect();
        write!(f, "({})", gammas.join(", "))
    }
}

fn revenue_at(inst: &Instance, flow: &Flow, i: usize, k: usize) -> Rational {
    flow_pseudo_revenues(inst, flow)[i][k].clone()
}

/// The `gamma` in `[0, 1]` at which rerouting into `i` brings the item-`k`
/// pseudo-revenue of type `i` to its closure.
fn solve_gamma(
    inst: &Instance,
    curves: &RevenueCurves,
    flow: &Flow,
    i: usize,
    k: usize,
) -> Option<Rational> {
    let target = &curves.closure[k][i];
    let at_one = revenue_at(inst, flow, i, k);
    let at_zero = revenue_at(inst, &reroute(flow, i, &Rational::zero()), i, k);
    let slope = &at_one - &at_zero;
    if slope.is_zero() {
        return (&at_one == target).then(Rational::one);
    }
    let g = (target - &at_zero) / slope;
    (!g.is_negative() && g <= Rational::one()).then_some(g)
}

/// Runs the algorithm from the initial flow, choosing each `gamma_i` so the
/// item-`kappa(i)` pseudo-revenue of type `i` meets its closure. At tied
/// types the item with the smaller root is pinned, the lower item on equal
/// roots.
pub fn iron(
    inst: &Instance,
    curves: &RevenueCurves,
    kappa: &IroningMap,
) -> Result<(Flow, IroningTrace), IroningError> {
    let mut flow = initial_flow(inst);
    let mut steps = Vec::with_capacity(inst.n());
    for i in (0..inst.n()).rev() {
        let k = kappa.get(i);
        let own = solve_gamma(inst, curves, &flow, i, k);
        let (item, gamma) = if kappa.is_tied(i) {
            match (own, solve_gamma(inst, curves, &flow, i, k + 1)) {
                (Some(a), Some(b)) if b < a => (k + 1, b),
                (Some(a), _) => (k, a),
                (None, Some(b)) => (k + 1, b),
                (None, None) => {
                    return Err(IroningError::NoRoot {
                        type_index: i,
                        item: k,
                    })
                }
            }
        } else {
            (
                k,
                own.ok_or(IroningError::NoRoot {
                    type_index: i,
                    item: k,
                })?,
            )
        };
        flow = reroute(&flow, i, &gamma);
        steps.push(IroningStep {
            type_index: i,
            item,
            gamma,
            revenues: flow_pseudo_revenues(inst, &flow),
            flow: flow.clone(),
        });
    }
    Ok((flow, IroningTrace { steps }))
}

/// Ironing map and algorithm in one call.
pub fn iron_instance(
    inst: &Instance,
    cutoffs: &CutoffVector,
) -> Result<(IroningMap, Flow, IroningTrace), IroningError> {
    let curves = RevenueCurves::new(inst);
    let kappa = ironing_map(inst, &curves, cutoffs)?;
    let (flow, trace) = iron(inst, &curves, &kappa)?;
    Ok((kappa, flow, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{default_peak_cutoffs, find_compatible_cutoffs, Route};
    use crate::duality::verify_certificate;
    use crate::fixtures::{inst_b, inst_b_caption_mechanism, overlapping_intervals};
    use crate::rational::{int, rat};

    #[test]
    fn map_on_inst_b() {
        let inst = inst_b();
        let curves = RevenueCurves::new(&inst);
        let kappa = ironing_map(&inst, &curves, &CutoffVector::from_labels(&[1, 4])).unwrap();
        assert_eq!(kappa.labels(), vec![1, 1, 1, 2]);
    }

    #[test]
    fn map_defaults_without_intervals() {
        let inst = Instance::new(
            vec![
                vec![int(1), int(1)],
                vec![int(2), int(3)],
                vec![int(3), int(5)],
            ],
            vec![rat(1, 3); 3],
        )
        .unwrap();
        let curves = RevenueCurves::new(&inst);
        let cutoffs = default_peak_cutoffs(&inst).unwrap();
        let kappa = ironing_map(&inst, &curves, &cutoffs).unwrap();
        let c = cutoffs.as_slice();
        for i in 0..3 {
            let expected = if i <= c[0] { 0 } else { 1 };
            assert_eq!(kappa.get(i), expected);
        }
    }

    #[test]
    fn map_rejects_partial_overlap() {
        let inst = overlapping_intervals();
        let curves = RevenueCurves::new(&inst);
        let err = ironing_map(&inst, &curves, &CutoffVector::from_labels(&[1, 5])).unwrap_err();
        assert!(matches!(
            err,
            IroningError::AmbiguousContainment { type_index: 2, .. }
        ));
    }

    #[test]
    fn algorithm_on_inst_b() {
        let inst = inst_b();
        let (_, flow, trace) = iron_instance(&inst, &CutoffVector::from_labels(&[1, 4])).unwrap();
        assert_eq!(trace.gammas(), vec![int(1), rat(2, 3), int(1), int(1)]);
        assert_eq!(
            flow.entries(),
            vec![
                (0, Node::Sink, int(1)),
                (1, Node::Type(0), rat(1, 2)),
                (2, Node::Type(0), rat(1, 8)),
                (2, Node::Type(1), rat(1, 4)),
                (3, Node::Type(2), rat(1, 4)),
            ]
        );
        assert_eq!(trace.steps.len(), 4);
        assert_eq!(trace.steps[0].type_index, 3);
        assert!(verify_certificate(&inst, &inst_b_caption_mechanism(), &flow).holds());
    }

    #[test]
    fn regular_instance_keeps_initial_flow() {
        let inst = Instance::new(
            vec![vec![int(1)], vec![int(2)], vec![int(3)]],
            vec![rat(1, 3); 3],
        )
        .unwrap();
        let cutoffs = find_compatible_cutoffs(&inst, Route::Regular).unwrap();
        let (_, flow, trace) = iron_instance(&inst, &cutoffs).unwrap();
        assert!(trace.gammas().iter().all(One::is_one));
        assert_eq!(flow, initial_flow(&inst));
    }

    #[test]
    fn tied_type_pins_the_item_needing_more_rerouting() {
        let inst = Instance::new(
            vec![
                vec![int(1), int(1)],
                vec![rat(5, 4), rat(5, 4)],
                vec![rat(15, 4), rat(45, 8)],
            ],
            vec![rat(5, 16), rat(7, 16), rat(1, 4)],
        )
        .unwrap();
        let cutoffs = CutoffVector::new(vec![0, 2]);
        let (kappa, flow, trace) = iron_instance(&inst, &cutoffs).unwrap();
        assert_eq!(kappa.labels(), vec![1, 1, 2]);
        assert!(kappa.is_tied(1));
        assert_eq!(trace.items(), vec![0, 1, 1]);
        assert_eq!(trace.gammas(), vec![int(1), rat(61, 70), int(1)]);
        let q = crate::pricing::upgrade_allocation(&inst, &cutoffs);
        let m = crate::pricing::price_allocation(&inst, &q).unwrap();
        assert!(verify_certificate(&inst, &m, &flow).holds());
    }

    #[test]
    fn single_type() {
        let inst = Instance::new(vec![vec![int(7)]], vec![int(1)]).unwrap();
        let (_, flow, trace) = iron_instance(&inst, &CutoffVector::new(vec![0])).unwrap();
        assert_eq!(trace.gammas(), vec![int(1)]);
        assert_eq!(flow.entries(), vec![(0, Node::Sink, int(1))]);
    }

    #[test]
    fn reroute_conserves_flow() {
        let inst = inst_b();
        let flow = initial_flow(&inst);
        for i in 0..4 {
            for gamma in [int(0), rat(1, 3), int(1)] {
                assert!(reroute(&flow, i, &gamma).is_feasible(&inst));
            }
        }
    }
}
