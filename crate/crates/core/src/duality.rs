//! Flows (Lagrange multipliers on incentive and participation constraints),
//! the virtual values and pseudo-revenues they induce, and the exact
//! five-condition optimality certificate.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::analysis::suffix_sums;
use crate::model::{ic_ir_violations, ic_slack, IcViolation, Instance, Mechanism, Node};
use crate::rational::{dot, positive_part, Rational};

/// Multipliers `lambda[j][to]` for the constraint "type `j` does not deviate
/// to `to`", where `to` ranges over the sink and every type.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Flow {
    lambda: Vec<Vec<Rational>>,
}

fn column(to: Node) -> usize {
    match to {
        Node::Sink => 0,
        Node::Type(i) => i + 1,
    }
}

fn node(col: usize) -> Node {
    if col == 0 {
        Node::Sink
    } else {
        Node::Type(col - 1)
    }
}

impl Flow {
    pub fn zero(n: usize) -> Self {
        Self {
            lambda: vec![vec![Rational::zero(); n + 1]; n],
        }
    }

    pub fn n(&self) -> usize {
        self.lambda.len()
    }

    pub fn get(&self, from: usize, to: Node) -> &Rational {
        &self.lambda[from][column(to)]
    }

    pub fn set(&mut self, from: usize, to: Node, value: Rational) {
        self.lambda[from][column(to)] = value;
    }

    pub fn add(&mut self, from: usize, to: Node, delta: &Rational) {
        self.lambda[from][column(to)] += delta;
    }

    /// Every `(from, to, value)` with nonzero value, ordered by `from`, then
    /// by `to` with the sink first.
    pub fn entries(&self) -> Vec<(usize, Node, Rational)> {
        let mut out = Vec::new();
        for (j, row) in self.lambda.iter().enumerate() {
            for (col, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    out.push((j, node(col), v.clone()));
                }
            }
        }
        out
    }

    pub fn from_entries(
        n: usize,
        entries: impl IntoIterator<Item = (usize, Node, Rational)>,
    ) -> Self {
        let mut flow = Self::zero(n);
        for (j, to, v) in entries {
            flow.add(j, to, &v);
        }
        flow
    }

    pub fn outflow(&self, i: usize) -> Rational {
        self.lambda[i].iter().sum()
    }

    /// Mass arriving at type `i` from other types.
    pub fn inflow(&self, i: usize) -> Rational {
        self.lambda.iter().map(|row| &row[i + 1]).sum()
    }

    pub fn first_negative(&self) -> Option<(usize, Node, Rational)> {
        self.entries().into_iter().find(|(_, _, v)| v.is_negative())
    }

    pub fn is_non_negative(&self) -> bool {
        self.first_negative().is_none()
    }

    /// First type whose outflow minus inflow differs from its probability.
    pub fn feasibility_violation(&self, inst: &Instance) -> Option<FeasibilityViolation> {
        (0..self.n()).find_map(|i| {
            let excess = self.outflow(i) - self.inflow(i);
            (&excess != inst.prob(i)).then(|| FeasibilityViolation {
                type_index: i,
                excess,
                expected: inst.prob(i).clone(),
            })
        })
    }

    pub fn is_feasible(&self, inst: &Instance) -> bool {
        self.feasibility_violation(inst).is_none()
    }

    /// Positive mass only on edges to lower types or the sink.
    pub fn is_downward(&self) -> bool {
        self.entries().iter().all(|(j, to, v)| match to {
            Node::Sink => true,
            Node::Type(i) => i < j || !v.is_positive(),
        })
    }
}

impl fmt::Display for Flow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .entries()
            .iter()
            .map(|(j, to, v)| format!("{}->{}: {v}", j + 1, to))
            .collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `lambda_{(i+1) i} = 1 - F_i`, with the lowest type feeding the sink.
pub fn initial_flow(inst: &Instance) -> Flow {
    let mut flow = Flow::zero(inst.n());
    for j in 0..inst.n() {
        let to = if j == 0 {
            Node::Sink
        } else {
            Node::Type(j - 1)
        };
        flow.set(j, to, inst.mass_from(j));
    }
    flow
}

/// `phi_i^k = theta_i^k - (1/f_i) sum_j lambda_{ji} (theta_j^k - theta_i^k)`,
/// indexed `[i][k]`.
pub fn virtual_values(inst: &Instance, flow: &Flow) -> Vec<Vec<Rational>> {
    (0..inst.n())
        .map(|i| {
            (0..inst.d())
                .map(|k| {
                    let theta = inst.value(i, k);
                    let pull: Rational = (0..inst.n())
                        .map(|j| flow.get(j, Node::Type(i)) * (inst.value(j, k) - theta))
                        .sum();
                    theta - pull / inst.prob(i)
                })
                .collect()
        })
        .collect()
}

/// `R_i^{lambda,k} = sum_{j >= i} f_j phi_j^k`, indexed `[i][k]`.
pub fn flow_pseudo_revenues(inst: &Instance, flow: &Flow) -> Vec<Vec<Rational>> {
    revenues_from_virtual_values(inst, &virtual_values(inst, flow))
}

pub fn revenues_from_virtual_values(inst: &Instance, phi: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let per_item: Vec<Vec<Rational>> = (0..inst.d())
        .map(|k| {
            let column: Vec<Rational> = phi.iter().map(|row| row[k].clone()).collect();
            suffix_sums(inst, &column)
        })
        .collect();
    (0..inst.n())
        .map(|i| per_item.iter().map(|r| r[i].clone()).collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeasibilityViolation {
    pub type_index: usize,
    pub excess: Rational,
    pub expected: Rational,
}

impl fmt::Display for FeasibilityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "type {} has net outflow {}, expected {}",
            self.type_index + 1,
            self.excess,
            self.expected
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WelfareViolation {
    pub type_index: usize,
    pub item: usize,
    pub virtual_value: Rational,
    pub allocation: Rational,
}

impl fmt::Display for WelfareViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "type {} item {}: virtual value {} with allocation {}",
            self.type_index + 1,
            self.item + 1,
            self.virtual_value,
            self.allocation
        )
    }
}

/// `phi > 0` forces `q = 1` and `phi < 0` forces `q = 0`; scans item by
/// item.
pub fn check_virtual_welfare_max(
    q: &[Vec<Rational>],
    phi: &[Vec<Rational>],
) -> Option<WelfareViolation> {
    let d = q.first().map_or(0, Vec::len);
    for k in 0..d {
        for (i, (qi, pi)) in q.iter().zip(phi).enumerate() {
            let (a, v) = (&qi[k], &pi[k]);
            let ok = if v.is_positive() {
                a.is_one()
            } else if v.is_negative() {
                a.is_zero()
            } else {
                true
            };
            if !ok {
                return Some(WelfareViolation {
                    type_index: i,
                    item: k,
                    virtual_value: v.clone(),
                    allocation: a.clone(),
                });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlacknessViolation {
    pub from: usize,
    pub to: Node,
    pub multiplier: Rational,
    pub slack: Rational,
}

impl fmt::Display for SlacknessViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "edge {} -> {} carries {} but its constraint has slack {}",
            self.from + 1,
            self.to,
            self.multiplier,
            self.slack
        )
    }
}

/// Every edge with nonzero multiplier must bind.
pub fn check_complementary_slackness(
    inst: &Instance,
    m: &Mechanism,
    flow: &Flow,
) -> Option<SlacknessViolation> {
    flow.entries().into_iter().find_map(|(j, to, v)| {
        if to == Node::Type(j) {
            return None;
        }
        let slack = ic_slack(inst, m, j, to);
        (!slack.is_zero()).then_some(SlacknessViolation {
            from: j,
            to,
            multiplier: v,
            slack,
        })
    })
}

/// One verdict per certificate condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificateVerdict {
    pub non_negative: Option<(usize, Node, Rational)>,
    pub virtual_welfare: Option<WelfareViolation>,
    pub feasible: Option<FeasibilityViolation>,
    pub complementary_slackness: Option<SlacknessViolation>,
    pub implementable: Vec<IcViolation>,
}

impl CertificateVerdict {
    pub fn holds(&self) -> bool {
        self.non_negative.is_none()
            && self.virtual_welfare.is_none()
            && self.feasible.is_none()
            && self.complementary_slackness.is_none()
            && self.implementable.is_empty()
    }

    /// `(name, passed, witness)` in condition order.
    pub fn conditions(&self) -> Vec<(&'static str, bool, Option<String>)> {
        vec![
            (
                "non-negativity",
                self.non_negative.is_none(),
                self.non_negative
                    .as_ref()
                    .map(|(j, to, v)| format!("edge {} -> {to} carries {v}", j + 1)),
            ),
            (
                "virtual-welfare-maximization",
                self.virtual_welfare.is_none(),
                self.virtual_welfare.as_ref().map(ToString::to_string),
            ),
            (
                "feasibility",
                self.feasible.is_none(),
                self.feasible.as_ref().map(ToString::to_string),
            ),
            (
                "complementary-slackness",
                self.complementary_slackness.is_none(),
                self.complementary_slackness
                    .as_ref()
                    .map(ToString::to_string),
            ),
            (
                "implementability",
                self.implementable.is_empty(),
                self.implementable.first().map(ToString::to_string),
            ),
        ]
    }
}

pub fn verify_certificate(inst: &Instance, m: &Mechanism, flow: &Flow) -> CertificateVerdict {
    let phi = virtual_values(inst, flow);
    CertificateVerdict {
        non_negative: flow.first_negative(),
        virtual_welfare: check_virtual_welfare_max(&m.q, &phi),
        feasible: flow.feasibility_violation(inst),
        complementary_slackness: check_complementary_slackness(inst, m, flow),
        implementable: ic_ir_violations(inst, m),
    }
}

/// `sum_i f_i t_i + sum_{j,i} lambda_{ji} s_{ji}`.
pub fn lagrangian(inst: &Instance, m: &Mechanism, flow: &Flow) -> Rational {
    let mut total: Rational = (0..inst.n()).map(|i| inst.prob(i) * &m.t[i]).sum();
    for (j, to, v) in flow.entries() {
        if to != Node::Type(j) {
            total += v * ic_slack(inst, m, j, to);
        }
    }
    total
}

/// `sum_j f_j <q_j, phi_j>`.
pub fn virtual_welfare(inst: &Instance, q: &[Vec<Rational>], phi: &[Vec<Rational>]) -> Rational {
    (0..inst.n())
        .map(|j| inst.prob(j) * dot(&q[j], &phi[j]))
        .sum()
}

/// `sum_{i,k} f_i max(phi_i^k, 0)`: revenue upper bound for any
/// implementable mechanism when the flow is feasible and non-negative.
pub fn dual_bound(inst: &Instance, flow: &Flow) -> Rational {
    virtual_values(inst, flow)
        .iter()
        .enumerate()
        .map(|(i, row)| inst.prob(i) * row.iter().map(positive_part).sum::<Rational>())
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{initial_virtual_values, pseudo_revenues};
    use crate::fixtures::{inst_a, inst_b, inst_b_caption_mechanism};
    use crate::rational::{int, rat};

    fn final_flow_b() -> Flow {
        Flow::from_entries(
            4,
            [
                (0, Node::Sink, int(1)),
                (1, Node::Type(0), rat(1, 2)),
                (2, Node::Type(0), rat(1, 8)),
                (2, Node::Type(1), rat(1, 4)),
                (3, Node::Type(2), rat(1, 4)),
            ],
        )
    }

    fn column(table: &[Vec<Rational>], k: usize) -> Vec<Rational> {
        table.iter().map(|row| row[k].clone()).collect()
    }

    #[test]
    fn initial_flow_examples() {
        let flow = initial_flow(&inst_b());
        assert_eq!(
            flow.entries(),
            vec![
                (0, Node::Sink, int(1)),
                (1, Node::Type(0), rat(5, 8)),
                (2, Node::Type(1), rat(3, 8)),
                (3, Node::Type(2), rat(1, 4)),
            ]
        );
        assert!(flow.is_feasible(&inst_b()) && flow.is_downward());
        let single = Instance::new(vec![vec![int(2)]], vec![int(1)]).unwrap();
        assert_eq!(
            initial_flow(&single).entries(),
            vec![(0, Node::Sink, int(1))]
        );
        for inst in [inst_a(), inst_b()] {
            assert_eq!(
                virtual_values(&inst, &initial_flow(&inst)),
                initial_virtual_values(&inst)
            );
        }
    }

    #[test]
    fn virtual_value_examples() {
        let inst = inst_b();
        let phi = virtual_values(&inst, &final_flow_b());
        assert_eq!(
            column(&phi, 0),
            vec![rat(3, 8), int(0), rat(3, 2), rat(9, 4)]
        );
        assert_eq!(column(&phi, 1), vec![int(0), rat(-1, 2), int(-1), int(5)]);
        assert_eq!(virtual_values(&inst, &Flow::zero(4)), inst.theta().to_vec());
        let phi0 = virtual_values(&inst, &initial_flow(&inst));
        assert_eq!(
            column(&phi0, 0),
            vec![rat(17, 24), rat(-1, 2), rat(3, 2), rat(9, 4)]
        );
    }

    #[test]
    fn flow_pseudo_revenue_examples() {
        let inst = inst_b();
        let initial = flow_pseudo_revenues(&inst, &initial_flow(&inst));
        assert_eq!(column(&initial, 0), pseudo_revenues(&inst)[0]);
        let ironed = flow_pseudo_revenues(&inst, &final_flow_b());
        assert_eq!(
            column(&ironed, 0),
            vec![rat(57, 64), rat(3, 4), rat(3, 4), rat(9, 16)]
        );
        let zero = flow_pseudo_revenues(&inst, &Flow::zero(4));
        assert_eq!(zero[3][1], rat(5, 4));
        assert_eq!(zero[2][1], rat(5, 4) + rat(3, 8));
    }

    #[test]
    fn welfare_sign_examples() {
        let inst = inst_b();
        let m = inst_b_caption_mechanism();
        assert_eq!(
            check_virtual_welfare_max(&m.q, &virtual_values(&inst, &final_flow_b())),
            None
        );
        let zeros = vec![vec![int(0); 2]; 4];
        assert_eq!(check_virtual_welfare_max(&m.q, &zeros), None);
        let witness = check_virtual_welfare_max(&[vec![int(0)]], &[vec![int(1)]]).unwrap();
        assert_eq!((witness.type_index, witness.item), (0, 0));
    }

    #[test]
    fn slackness_examples() {
        let inst = inst_b();
        let mut m = inst_b_caption_mechanism();
        assert_eq!(
            check_complementary_slackness(&inst, &m, &final_flow_b()),
            None
        );
        assert_eq!(
            check_complementary_slackness(&inst, &m, &Flow::zero(4)),
            None
        );
        m.t[3] = rat(376, 64);
        let v = check_complementary_slackness(&inst, &m, &final_flow_b()).unwrap();
        assert_eq!((v.from, v.to, v.slack), (3, Node::Type(2), rat(1, 64)));
    }

    #[test]
    fn certificate_examples() {
        let inst = inst_b();
        let m = inst_b_caption_mechanism();
        assert!(verify_certificate(&inst, &m, &final_flow_b()).holds());

        let zero = verify_certificate(&inst, &Mechanism::zero(4, 2), &Flow::zero(4));
        assert!(!zero.holds());
        assert_eq!(zero.feasible.as_ref().map(|v| v.type_index), Some(0));

        let initial = verify_certificate(&inst, &m, &initial_flow(&inst));
        let v = initial.virtual_welfare.unwrap();
        assert_eq!((v.type_index, v.item, v.virtual_value), (1, 0, rat(-1, 2)));
    }

    #[test]
    fn lagrangian_identity_and_bound_on_inst_b() {
        let inst = inst_b();
        let m = inst_b_caption_mechanism();
        for flow in [initial_flow(&inst), final_flow_b()] {
            let phi = virtual_values(&inst, &flow);
            assert_eq!(
                lagrangian(&inst, &m, &flow),
                virtual_welfare(&inst, &m.q, &phi)
            );
        }
        assert_eq!(dual_bound(&inst, &final_flow_b()), rat(137, 64));
    }
}
