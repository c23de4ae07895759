//! Instances, mechanisms and menus.
//!
//! Types and goods are indexed from zero in this API. The participation
//! sink (the outside option) is [`Node::Sink`]; text and JSON output use the
//! one-based convention with node `0` for the sink.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{dot, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("negative value theta[{type_index}][{good}]")]
    NegativeValue { type_index: usize, good: usize },
    #[error("bad distribution: {0}")]
    BadDistribution(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("allocation q[{type_index}][{good}] outside [0, 1]")]
    AllocationOutOfRange { type_index: usize, good: usize },
    #[error("allocations of types {0} and {1} are not comparable")]
    NotChainOrdered(usize, usize),
    #[error("inconsistent pricing: {0}")]
    InconsistentPricing(String),
}

/// A node of the incentive graph: a type or the outside option.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Sink,
    Type(usize),
}

impl Node {
    /// One-based label with `0` for the sink.
    pub fn label(self) -> usize {
        match self {
            Node::Sink => 0,
            Node::Type(i) => i + 1,
        }
    }

    pub fn from_label(label: usize) -> Self {
        match label {
            0 => Node::Sink,
            l => Node::Type(l - 1),
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// An unvalidated instance as read from input.
#[derive(Debug, Clone, PartialEq)]
pub struct RawInstance {
    pub n: usize,
    pub d: usize,
    pub theta: Vec<Vec<Rational>>,
    pub f: Vec<Rational>,
}

/// A finite type space with a full-support distribution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    theta: Vec<Vec<Rational>>,
    f: Vec<Rational>,
    cdf: Vec<Rational>,
}

pub fn validate_instance(raw: RawInstance) -> Result<Instance, ModelError> {
    if raw.theta.len() != raw.n || raw.f.len() != raw.n {
        return Err(ModelError::ShapeMismatch(format!(
            "expected {} types, got {} value rows and {} probabilities",
            raw.n,
            raw.theta.len(),
            raw.f.len()
        )));
    }
    if let Some(i) = raw.theta.iter().position(|row| row.len() != raw.d) {
        return Err(ModelError::ShapeMismatch(format!(
            "type {} has {} values, expected {}",
            i + 1,
            raw.theta[i].len(),
            raw.d
        )));
    }
    Instance::new(raw.theta, raw.f)
}

impl Instance {
    pub fn new(theta: Vec<Vec<Rational>>, f: Vec<Rational>) -> Result<Self, ModelError> {
        let n = theta.len();
        if n == 0 {
            return Err(ModelError::ShapeMismatch("no types".into()));
        }
        if f.len() != n {
            return Err(ModelError::ShapeMismatch(format!(
                "{n} types but {} probabilities",
                f.len()
            )));
        }
        let d = theta[0].len();
        if d == 0 {
            return Err(ModelError::ShapeMismatch("no goods".into()));
        }
        for (i, row) in theta.iter().enumerate() {
            if row.len() != d {
                return Err(ModelError::ShapeMismatch(format!(
                    "type {} has {} values, expected {d}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(k) = row.iter().position(|v| v.is_negative()) {
                return Err(ModelError::NegativeValue {
                    type_index: i,
                    good: k,
                });
            }
        }
        if let Some(i) = f.iter().position(|p| !p.is_positive()) {
            return Err(ModelError::BadDistribution(format!(
                "f[{}] = {} is not positive",
                i + 1,
                f[i]
            )));
        }
        let mut cdf = Vec::with_capacity(n);
        let mut acc = Rational::zero();
        for p in &f {
            acc += p;
            cdf.push(acc.clone());
        }
        if !acc.is_one() {
            return Err(ModelError::BadDistribution(format!(
                "probabilities sum to {acc}"
            )));
        }
        Ok(Self { theta, f, cdf })
    }

    pub fn n(&self) -> usize {
        self.theta.len()
    }

    pub fn d(&self) -> usize {
        self.theta[0].len()
    }

    pub fn theta(&self) -> &[Vec<Rational>] {
        &self.theta
    }

    pub fn value(&self, i: usize, k: usize) -> &Rational {
        &self.theta[i][k]
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.theta[i]
    }

    pub fn f(&self) -> &[Rational] {
        &self.f
    }

    pub fn prob(&self, i: usize) -> &Rational {
        &self.f[i]
    }

    /// `F_{i+1}` in one-based terms: the mass of types `0..=i`.
    pub fn cdf(&self) -> &[Rational] {
        &self.cdf
    }

    /// Mass of types strictly above `i`.
    pub fn upper_mass(&self, i: usize) -> Rational {
        Rational::one() - &self.cdf[i]
    }

    /// Mass of types `i` and above.
    pub fn mass_from(&self, i: usize) -> Rational {
        if i == 0 {
            Rational::one()
        } else {
            self.upper_mass(i - 1)
        }
    }

    /// The same instance with types listed in `order` (a permutation of
    /// `0..n`): type `r` of the result is type `order[r]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Instance {
        let theta = order.iter().map(|&i| self.theta[i].clone()).collect();
        let f = order.iter().map(|&i| self.f[i].clone()).collect();
        Instance::new(theta, f).expect("a permutation of a valid instance is valid")
    }
}

/// A direct mechanism. The outside option `(0, 0)` is implicit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mechanism {
    pub q: Vec<Vec<Rational>>,
    pub t: Vec<Rational>,
}

impl Mechanism {
    pub fn new(q: Vec<Vec<Rational>>, t: Vec<Rational>) -> Result<Self, ModelError> {
        if q.len() != t.len() {
            return Err(ModelError::ShapeMismatch(format!(
                "{} allocation rows but {} transfers",
                q.len(),
                t.len()
            )));
        }
        if let Some(row) = q.first() {
            if let Some(i) = q.iter().position(|r| r.len() != row.len()) {
                return Err(ModelError::ShapeMismatch(format!(
                    "allocation row {} has length {}, expected {}",
                    i + 1,
                    q[i].len(),
                    row.len()
                )));
            }
        }
        for (i, row) in q.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                if v.is_negative() || *v > Rational::one() {
                    return Err(ModelError::AllocationOutOfRange {
                        type_index: i,
                        good: k,
                    });
                }
            }
        }
        Ok(Self { q, t })
    }

    pub fn zero(n: usize, d: usize) -> Self {
        Self {
            q: vec![vec![Rational::zero(); d]; n],
            t: vec![Rational::zero(); n],
        }
    }

    pub fn n(&self) -> usize {
        self.t.len()
    }

    pub fn check_shape(&self, inst: &Instance) -> Result<(), ModelError> {
        if self.n() != inst.n() || self.q.iter().any(|r| r.len() != inst.d()) {
            return Err(ModelError::ShapeMismatch(format!(
                "mechanism is not {}x{}",
                inst.n(),
                inst.d()
            )));
        }
        Ok(())
    }

    /// Allocation and transfer offered to a node; the sink gets `(0, 0)`.
    fn offer(&self, node: Node) -> Option<(&[Rational], &Rational)> {
        match node {
            Node::Sink => None,
            Node::Type(i) => Some((&self.q[i], &self.t[i])),
        }
    }

    /// Same rows reordered: row `r` of the result is row `order[r]`.
    pub fn permuted(&self, order: &[usize]) -> Mechanism {
        Mechanism {
            q: order.iter().map(|&i| self.q[i].clone()).collect(),
            t: order.iter().map(|&i| self.t[i].clone()).collect(),
        }
    }
}

pub fn utility(inst: &Instance, i: usize, q: &[Rational], t: &Rational) -> Rational {
    dot(inst.row(i), q) - t
}

/// Expected payment `sum_i f_i t_i`.
pub fn revenue(inst: &Instance, m: &Mechanism) -> Rational {
    expectation(inst, &m.t)
}

/// Slack of the constraint "type `j` does not prefer the offer of `to`":
/// `(<q_j, theta_j> - t_j) - (<q_to, theta_j> - t_to)`.
pub fn ic_slack(inst: &Instance, m: &Mechanism, j: usize, to: Node) -> Rational {
    let own = utility(inst, j, &m.q[j], &m.t[j]);
    match m.offer(to) {
        None => own,
        Some((q, t)) => own - utility(inst, j, q, t),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IcViolation {
    pub from: usize,
    pub to: Node,
    pub slack: Rational,
}

impl fmt::Display for IcViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.to == Node::Sink { "IR" } else { "IC" };
        write!(
            f,
            "{kind}({} -> {}) slack {}",
            self.from + 1,
            self.to,
            self.slack
        )
    }
}

/// Every violated incentive or participation constraint, with its slack.
pub fn ic_ir_violations(inst: &Instance, m: &Mechanism) -> Vec<IcViolation> {
    let n = inst.n();
    let mut out = Vec::new();
    for j in 0..n {
        let targets = std::iter::once(Node::Sink).chain((0..n).filter(|&i| i != j).map(Node::Type));
        for to in targets {
            let slack = ic_slack(inst, m, j, to);
            if slack.is_negative() {
                out.push(IcViolation { from: j, to, slack });
            }
        }
    }
    out
}

fn componentwise_le(a: &[Rational], b: &[Rational]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn chain_cmp(a: &[Rational], b: &[Rational]) -> Option<Ordering> {
    match (componentwise_le(a, b), componentwise_le(b, a)) {
        (true, true) => Some(Ordering::Equal),
        (true, false) => Some(Ordering::Less),
        (false, true) => Some(Ordering::Greater),
        (false, false) => None,
    }
}

/// Returns the types ordered along the allocation chain, or the first
/// incomparable pair.
pub fn chain_order(rows: &[Vec<Rational>]) -> Result<Vec<usize>, (usize, usize)> {
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            if chain_cmp(&rows[a], &rows[b]).is_none() {
                return Err((a, b));
            }
        }
    }
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| {
        chain_cmp(&rows[a], &rows[b])
            .expect("rows were checked pairwise")
            .then(a.cmp(&b))
    });
    Ok(order)
}

/// True (with the chain order of types) iff `{0, q_1, ..., q_n}` is totally
/// ordered component-wise. The zero bundle is below every allocation.
pub fn is_upgrade_menu(m: &Mechanism) -> Option<Vec<usize>> {
    chain_order(&m.q).ok()
}

/// A chain of nested bundles with increasing prices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UpgradeMenu {
    /// `bundles[0]` is the zero bundle.
    pub bundles: Vec<Vec<Rational>>,
    /// `prices[0]` is zero.
    pub prices: Vec<Rational>,
    /// Bundle index chosen by each type.
    pub assignment: Vec<usize>,
}

impl UpgradeMenu {
    /// Validates the chain and price invariants. `bundles` and `prices`
    /// must include the leading outside option.
    pub fn new(
        bundles: Vec<Vec<Rational>>,
        prices: Vec<Rational>,
        assignment: Vec<usize>,
    ) -> Result<Self, ModelError> {
        if bundles.is_empty() || bundles.len() != prices.len() {
            return Err(ModelError::ShapeMismatch(format!(
                "{} bundles but {} prices",
                bundles.len(),
                prices.len()
            )));
        }
        if bundles[0].iter().any(|v| !v.is_zero()) || !prices[0].is_zero() {
            return Err(ModelError::InconsistentPricing(
                "the first menu item must be the zero bundle at price zero".into(),
            ));
        }
        for k in 1..bundles.len() {
            if chain_cmp(&bundles[k - 1], &bundles[k]) != Some(Ordering::Less) {
                return Err(ModelError::NotChainOrdered(k - 1, k));
            }
            if prices[k] <= prices[k - 1] {
                return Err(ModelError::InconsistentPricing(format!(
                    "price of bundle {k} is not above the price of bundle {}",
                    k - 1
                )));
            }
        }
        if let Some(&bad) = assignment.iter().find(|&&b| b >= bundles.len()) {
            return Err(ModelError::ShapeMismatch(format!(
                "assignment refers to bundle {bad}"
            )));
        }
        Ok(Self {
            bundles,
            prices,
            assignment,
        })
    }

    /// Builds a menu from posted offers (excluding the outside option); each
    /// type takes a utility-maximizing item, the largest bundle on ties.
    pub fn from_offers(
        inst: &Instance,
        offers: Vec<Vec<Rational>>,
        prices: Vec<Rational>,
    ) -> Result<Self, ModelError> {
        let d = inst.d();
        if offers.len() != prices.len() || offers.iter().any(|b| b.len() != d) {
            return Err(ModelError::ShapeMismatch(format!(
                "menu must list {d}-dimensional bundles, one price each"
            )));
        }
        let mut bundles = vec![vec![Rational::zero(); d]];
        let mut all_prices = vec![Rational::zero()];
        for (b, p) in offers.into_iter().zip(prices) {
            if b.iter().all(Zero::is_zero) && p.is_zero() {
                continue;
            }
            bundles.push(b);
            all_prices.push(p);
        }
        let assignment = (0..inst.n())
            .map(|i| {
                let mut best = 0;
                let mut best_u = Rational::zero();
                for (k, (b, p)) in bundles.iter().zip(&all_prices).enumerate().skip(1) {
                    let u = utility(inst, i, b, p);
                    if u >= best_u {
                        best = k;
                        best_u = u;
                    }
                }
                best
            })
            .collect();
        UpgradeMenu::new(bundles, all_prices, assignment)
    }

    pub fn tiers(&self) -> usize {
        self.bundles.len() - 1
    }

    /// Direct mechanism in which every type receives its assigned item.
    pub fn to_mechanism(&self) -> Mechanism {
        Mechanism {
            q: self
                .assignment
                .iter()
                .map(|&b| self.bundles[b].clone())
                .collect(),
            t: self
                .assignment
                .iter()
                .map(|&b| self.prices[b].clone())
                .collect(),
        }
    }
}

/// Collapses an upgrade-pricing mechanism to its distinct nested bundles.
pub fn mechanism_to_menu(inst: &Instance, m: &Mechanism) -> Result<UpgradeMenu, ModelError> {
    m.check_shape(inst)?;
    let order = chain_order(&m.q).map_err(|(a, b)| ModelError::NotChainOrdered(a, b))?;
    let d = inst.d();
    let mut bundles = vec![vec![Rational::zero(); d]];
    let mut prices = vec![Rational::zero()];
    let mut owner = vec![None::<usize>];
    let mut assignment = vec![0; inst.n()];
    for &i in &order {
        let last = bundles.len() - 1;
        if m.q[i] == bundles[last] {
            if m.t[i] != prices[last] {
                let other = match owner[last] {
                    Some(o) => format!("type {}", o + 1),
                    None => "the outside option".to_string(),
                };
                return Err(ModelError::InconsistentPricing(format!(
                    "type {} and {other} share an allocation but pay {} and {}",
                    i + 1,
                    m.t[i],
                    prices[last]
                )));
            }
        } else {
            bundles.push(m.q[i].clone());
            prices.push(m.t[i].clone());
            owner.push(Some(i));
        }
        assignment[i] = bundles.len() - 1;
    }
    UpgradeMenu::new(bundles, prices, assignment)
}

/// `sum_i f_i x_i`.
pub fn expectation(inst: &Instance, values: &[Rational]) -> Rational {
    inst.f()
        .iter()
        .zip(values)
        .fold(Rational::zero(), |acc, (p, v)| acc + p * v)
}
