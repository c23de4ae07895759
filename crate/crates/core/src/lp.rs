//! Exact rational linear programming.
//!
//! A dense two-phase primal simplex over [`Rational`]. Entering columns are
//! priced by largest reduced cost; long runs of degenerate pivots switch to
//! Bland's rule until the objective moves, so it always terminates. Sizes
//! here are a few hundred columns at most.

use std::collections::HashSet;
use std::fmt;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::model::{Instance, Mechanism};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LpError {
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("variable index {0} out of range")]
    UnknownVariable(usize),
    #[error("linear program is infeasible")]
    Infeasible,
    #[error("linear program is unbounded")]
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Bound {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Bound {
    pub fn free() -> Self {
        Self::default()
    }

    pub fn non_negative() -> Self {
        Self {
            lower: Some(Rational::zero()),
            upper: None,
        }
    }

    pub fn between(lower: Rational, upper: Rational) -> Self {
        Self {
            lower: Some(lower),
            upper: Some(upper),
        }
    }

    fn contains(&self, x: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| x >= l) && self.upper.as_ref().is_none_or(|u| x <= u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub label: String,
    pub terms: Vec<(usize, Rational)>,
    pub relation: Relation,
    pub rhs: Rational,
}

impl Constraint {
    fn lhs(&self, x: &[Rational]) -> Rational {
        self.terms
            .iter()
            .fold(Rational::zero(), |acc, (v, a)| acc + a * &x[*v])
    }

    fn holds(&self, x: &[Rational]) -> bool {
        let lhs = self.lhs(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

/// Maximize `objective . x` subject to labelled rows and variable bounds.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LinearProgram {
    labels: Vec<String>,
    objective: Vec<Rational>,
    bounds: Vec<Bound>,
    rows: Vec<Constraint>,
    used_labels: HashSet<String>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_variable(
        &mut self,
        label: impl Into<String>,
        bound: Bound,
        objective: Rational,
    ) -> Result<usize, LpError> {
        let label = label.into();
        if !self.used_labels.insert(label.clone()) {
            return Err(LpError::DuplicateLabel(label));
        }
        self.labels.push(label);
        self.objective.push(objective);
        self.bounds.push(bound);
        Ok(self.labels.len() - 1)
    }

    pub fn add_constraint(
        &mut self,
        label: impl Into<String>,
        terms: Vec<(usize, Rational)>,
        relation: Relation,
        rhs: Rational,
    ) -> Result<usize, LpError> {
        let label = label.into();
        if let Some((v, _)) = terms.iter().find(|(v, _)| *v >= self.labels.len()) {
            return Err(LpError::UnknownVariable(*v));
        }
        if !self.used_labels.insert(label.clone()) {
            return Err(LpError::DuplicateLabel(label));
        }
        let terms = terms.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        self.rows.push(Constraint {
            label,
            terms,
            relation,
            rhs,
        });
        Ok(self.rows.len() - 1)
    }

    pub fn num_variables(&self) -> usize {
        self.labels.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.rows.len()
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.rows
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective
            .iter()
            .zip(x)
            .fold(Rational::zero(), |acc, (c, v)| acc + c * v)
    }

    /// Exact feasibility of a point: all bounds and rows hold.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.num_variables()
            && self.bounds.iter().zip(x).all(|(b, v)| b.contains(v))
            && self.rows.iter().all(|r| r.holds(x))
    }
}

impl fmt::Display for LinearProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |a: &Rational, v: usize| format!("{a} {}", self.labels[v]);
        let objective: Vec<String> = self
            .objective
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| term(c, v))
            .collect();
        writeln!(f, "maximize")?;
        writeln!(f, "  {}", objective.join(" + "))?;
        writeln!(f, "subject to")?;
        for row in &self.rows {
            let lhs: Vec<String> = row.terms.iter().map(|(v, a)| term(a, *v)).collect();
            writeln!(
                f,
                "  {}: {} {} {}",
                row.label,
                lhs.join(" + "),
                row.relation,
                row.rhs
            )?;
        }
        writeln!(f, "bounds")?;
        for (label, b) in self.labels.iter().zip(&self.bounds) {
            let lo = b
                .lower
                .as_ref()
                .map_or("-inf".to_string(), ToString::to_string);
            let hi = b
                .upper
                .as_ref()
                .map_or("+inf".to_string(), ToString::to_string);
            writeln!(f, "  {lo} <= {label} <= {hi}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Objective value when optimal.
    pub value: Option<Rational>,
    /// Variable assignment when optimal.
    pub x: Vec<Rational>,
    pub iterations: usize,
}

impl LpSolution {
    pub fn into_optimum(self) -> Result<(Rational, Vec<Rational>), LpError> {
        match self.status {
            LpStatus::Optimal => Ok((self.value.expect("optimal has a value"), self.x)),
            LpStatus::Infeasible => Err(LpError::Infeasible),
            LpStatus::Unbounded => Err(LpError::Unbounded),
        }
    }
}

/// How an original variable maps onto non-negative tableau columns.
enum Substitution {
    /// `x = offset + y`
    Shifted { offset: Rational, col: usize },
    /// `x = offset - y`
    Mirrored { offset: Rational, col: usize },
    /// `x = plus - minus`
    Split { plus: usize, minus: usize },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs of the objective being optimized.
    reduced: Vec<Rational>,
    iterations: usize,
}

enum PhaseOutcome {
    Optimal,
    Unbounded,
}

/// Consecutive degenerate pivots after which entering columns are chosen by
/// least index until the objective moves again.
const DEGENERATE_RUN: usize = 16;

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        if !inv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
            self.rhs[r] *= &inv;
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let support: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |row: &mut Vec<Rational>, factor: &Rational| {
            for &j in &support {
                row[j] -= factor * &pivot_row[j];
            }
        };
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let factor = self.rows[i][c].clone();
            eliminate(&mut self.rows[i], &factor);
            let delta = &factor * &self.rhs[r];
            self.rhs[i] -= delta;
        }
        if !self.reduced[c].is_zero() {
            let factor = self.reduced[c].clone();
            eliminate(&mut self.reduced, &factor);
        }
        self.rows[r] = pivot_row;
        self.basis[r] = c;
        self.iterations += 1;
    }

    fn price(&mut self, cost: &[Rational]) {
        let mut reduced = cost.to_vec();
        for (i, &b) in self.basis.iter().enumerate() {
            if cost[b].is_zero() {
                continue;
            }
            for (r, a) in reduced.iter_mut().zip(&self.rows[i]) {
                if !a.is_zero() {
                    *r -= &cost[b] * a;
                }
            }
        }
        self.reduced = reduced;
    }

    /// Maximizes `cost . y` over the current basis; `allowed` masks columns
    /// that may enter. Entering columns have the largest reduced cost, or
    /// the least index during long degenerate runs; leaving rows follow the
    /// least-index rule on ties.
    fn optimize(&mut self, cost: &[Rational], allowed: &[bool]) -> PhaseOutcome {
        self.price(cost);
        let mut degenerate = 0;
        loop {
            let candidates =
                (0..cost.len()).filter(|&j| allowed[j] && self.reduced[j].is_positive());
            let entering = if degenerate >= DEGENERATE_RUN {
                candidates.min()
            } else {
                candidates.fold(None, |best: Option<usize>, j| match best {
                    Some(b) if self.reduced[b] >= self.reduced[j] => Some(b),
                    _ => Some(j),
                })
            };
            let Some(c) = entering else {
                return PhaseOutcome::Optimal;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &leaving {
                    None => true,
                    Some((r, best)) => {
                        ratio < *best || (ratio == *best && self.basis[i] < self.basis[*r])
                    }
                };
                if better {
                    leaving = Some((i, ratio));
                }
            }
            match leaving {
                Some((r, ratio)) => {
                    degenerate = if ratio.is_zero() { degenerate + 1 } else { 0 };
                    self.pivot(r, c);
                }
                None => return PhaseOutcome::Unbounded,
            }
        }
    }

    fn values(&self, ncols: usize) -> Vec<Rational> {
        let mut y = vec![Rational::zero(); ncols];
        for (i, &b) in self.basis.iter().enumerate() {
            y[b] = self.rhs[i].clone();
        }
        y
    }
}

/// Solves `lp` exactly.
pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    // Substitute every variable by non-negative columns.
    let mut subs = Vec::with_capacity(lp.num_variables());
    let mut ncols = 0;
    let mut extra_rows: Vec<(usize, Rational)> = Vec::new();
    for b in &lp.bounds {
        let sub = match (&b.lower, &b.upper) {
            (Some(l), upper) => {
                let col = ncols;
                ncols += 1;
                if let Some(u) = upper {
                    extra_rows.push((col, u - l));
                }
                Substitution::Shifted {
                    offset: l.clone(),
                    col,
                }
            }
            (None, Some(u)) => {
                let col = ncols;
                ncols += 1;
                Substitution::Mirrored {
                    offset: u.clone(),
                    col,
                }
            }
            (None, None) => {
                ncols += 2;
                Substitution::Split {
                    plus: ncols - 2,
                    minus: ncols - 1,
                }
            }
        };
        subs.push(sub);
    }
    let structural = ncols;

    // Rows as (coefficients over structural columns, relation, rhs).
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for row in &lp.rows {
        let mut coeffs = vec![Rational::zero(); structural];
        let mut rhs = row.rhs.clone();
        for (v, a) in &row.terms {
            match &subs[*v] {
                Substitution::Shifted { offset, col } => {
                    rhs -= a * offset;
                    coeffs[*col] += a;
                }
                Substitution::Mirrored { offset, col } => {
                    rhs -= a * offset;
                    coeffs[*col] -= a;
                }
                Substitution::Split { plus, minus } => {
                    coeffs[*plus] += a;
                    coeffs[*minus] -= a;
                }
            }
        }
        rows.push((coeffs, row.relation, rhs));
    }
    for (col, width) in extra_rows {
        let mut coeffs = vec![Rational::zero(); structural];
        coeffs[col] = Rational::one();
        rows.push((coeffs, Relation::Le, width));
    }

    let mut cost = vec![Rational::zero(); structural];
    for (v, c) in lp.objective.iter().enumerate() {
        match &subs[v] {
            Substitution::Shifted { col, .. } => cost[*col] += c,
            Substitution::Mirrored { col, .. } => cost[*col] -= c,
            Substitution::Split { plus, minus } => {
                cost[*plus] += c;
                cost[*minus] -= c;
            }
        }
    }

    // Normalize to non-negative right-hand sides, preferring `<=` rows so
    // their slacks can start in the basis.
    for (coeffs, rel, rhs) in rows.iter_mut() {
        if rhs.is_negative() || (rhs.is_zero() && *rel == Relation::Ge) {
            for a in coeffs.iter_mut() {
                *a = -&*a;
            }
            *rhs = -&*rhs;
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    // Slack, surplus and artificial columns.
    let m = rows.len();
    let slack_count = rows.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
    let artificial_count = rows.iter().filter(|(_, r, _)| *r != Relation::Le).count();
    let total = structural + slack_count + artificial_count;
    let first_artificial = structural + slack_count;
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        rhs: Vec::with_capacity(m),
        basis: Vec::with_capacity(m),
        reduced: Vec::new(),
        iterations: 0,
    };
    let (mut next_slack, mut next_artificial) = (structural, first_artificial);
    for (coeffs, rel, rhs) in rows {
        let mut full = coeffs;
        full.resize(total, Rational::zero());
        match rel {
            Relation::Le => {
                full[next_slack] = Rational::one();
                tab.basis.push(next_slack);
                next_slack += 1;
            }
            Relation::Ge => {
                full[next_slack] = -Rational::one();
                next_slack += 1;
                full[next_artificial] = Rational::one();
                tab.basis.push(next_artificial);
                next_artificial += 1;
            }
            Relation::Eq => {
                full[next_artificial] = Rational::one();
                tab.basis.push(next_artificial);
                next_artificial += 1;
            }
        }
        tab.rows.push(full);
        tab.rhs.push(rhs);
    }

    if artificial_count > 0 {
        let mut phase_one = vec![Rational::zero(); total];
        for c in phase_one.iter_mut().skip(first_artificial) {
            *c = -Rational::one();
        }
        let allowed = vec![true; total];
        tab.optimize(&phase_one, &allowed);
        let infeasibility = tab
            .basis
            .iter()
            .zip(&tab.rhs)
            .filter(|(&b, _)| b >= first_artificial)
            .fold(Rational::zero(), |acc, (_, v)| acc + v);
        if infeasibility.is_positive() {
            return LpSolution {
                status: LpStatus::Infeasible,
                value: None,
                x: Vec::new(),
                iterations: tab.iterations,
            };
        }
        // Drive zero-valued artificials out of the basis; drop redundant rows.
        let mut r = 0;
        while r < tab.rows.len() {
            if tab.basis[r] < first_artificial {
                r += 1;
                continue;
            }
            match (0..first_artificial).find(|&j| !tab.rows[r][j].is_zero()) {
                Some(c) => {
                    tab.pivot(r, c);
                    r += 1;
                }
                None => {
                    tab.rows.remove(r);
                    tab.rhs.remove(r);
                    tab.basis.remove(r);
                }
            }
        }
    }

    let mut phase_two = cost;
    phase_two.resize(total, Rational::zero());
    let allowed: Vec<bool> = (0..total).map(|j| j < first_artificial).collect();
    if let PhaseOutcome::Unbounded = tab.optimize(&phase_two, &allowed) {
        return LpSolution {
            status: LpStatus::Unbounded,
            value: None,
            x: Vec::new(),
            iterations: tab.iterations,
        };
    }

    let y = tab.values(total);
    let x: Vec<Rational> = subs
        .iter()
        .map(|s| match s {
            Substitution::Shifted { offset, col } => offset + &y[*col],
            Substitution::Mirrored { offset, col } => offset - &y[*col],
            Substitution::Split { plus, minus } => &y[*plus] - &y[*minus],
        })
        .collect();
    debug_assert!(lp.is_feasible(&x), "simplex returned an infeasible point");
    LpSolution {
        status: LpStatus::Optimal,
        value: Some(lp.objective_value(&x)),
        x,
        iterations: tab.iterations,
    }
}

/// Variable layout of [`build_revenue_lp`]: `q[i][k]` then `t[i]`.
pub fn revenue_lp_allocation_var(inst: &Instance, i: usize, k: usize) -> usize {
    i * inst.d() + k
}

pub fn revenue_lp_transfer_var(inst: &Instance, i: usize) -> usize {
    inst.n() * inst.d() + i
}

/// The full revenue-maximization LP over direct mechanisms.
pub fn build_revenue_lp(inst: &Instance) -> LinearProgram {
    let (n, d) = (inst.n(), inst.d());
    let mut lp = LinearProgram::new();
    for i in 0..n {
        for k in 0..d {
            lp.add_variable(
                format!("q{}_{}", i + 1, k + 1),
                Bound::between(Rational::zero(), Rational::one()),
                Rational::zero(),
            )
            .expect("fresh label");
        }
    }
    for i in 0..n {
        lp.add_variable(format!("t{}", i + 1), Bound::free(), inst.prob(i).clone())
            .expect("fresh label");
    }
    let q = |i: usize, k: usize| revenue_lp_allocation_var(inst, i, k);
    let t = |i: usize| revenue_lp_transfer_var(inst, i);
    for j in 0..n {
        for i in (0..n).filter(|&i| i != j) {
            // <q_j - q_i, theta_j> - t_j + t_i >= 0
            let mut terms = Vec::with_capacity(2 * d + 2);
            for k in 0..d {
                terms.push((q(j, k), inst.value(j, k).clone()));
                terms.push((q(i, k), -inst.value(j, k)));
            }
            terms.push((t(j), -Rational::one()));
            terms.push((t(i), Rational::one()));
            lp.add_constraint(
                format!("ic{}_{}", j + 1, i + 1),
                terms,
                Relation::Ge,
                Rational::zero(),
            )
            .expect("fresh label");
        }
    }
    for j in 0..n {
        let mut terms: Vec<(usize, Rational)> = (0..d)
            .map(|k| (q(j, k), inst.value(j, k).clone()))
            .collect();
        terms.push((t(j), -Rational::one()));
        lp.add_constraint(
            format!("ir{}", j + 1),
            terms,
            Relation::Ge,
            Rational::zero(),
        )
        .expect("fresh label");
    }
    lp
}

/// Transfers-only LP for a fixed allocation `q`.
pub fn build_transfer_lp(inst: &Instance, q: &[Vec<Rational>]) -> LinearProgram {
    let n = inst.n();
    let value = |j: usize, i: usize| crate::rational::dot(inst.row(j), &q[i]);
    let mut lp = LinearProgram::new();
    for i in 0..n {
        lp.add_variable(format!("t{}", i + 1), Bound::free(), inst.prob(i).clone())
            .expect("fresh label");
    }
    for j in 0..n {
        let own = value(j, j);
        for i in (0..n).filter(|&i| i != j) {
            // t_j - t_i <= <q_j - q_i, theta_j>
            lp.add_constraint(
                format!("ic{}_{}", j + 1, i + 1),
                vec![(j, Rational::one()), (i, -Rational::one())],
                Relation::Le,
                &own - value(j, i),
            )
            .expect("fresh label");
        }
        lp.add_constraint(
            format!("ir{}", j + 1),
            vec![(j, Rational::one())],
            Relation::Le,
            own,
        )
        .expect("fresh label");
    }
    lp
}

/// Solves the revenue LP and reads back the optimal mechanism.
pub fn optimal_mechanism(inst: &Instance) -> (Rational, Mechanism) {
    let lp = build_revenue_lp(inst);
    let (value, x) = solve_lp(&lp)
        .into_optimum()
        .expect("the revenue LP is feasible and bounded");
    let (n, d) = (inst.n(), inst.d());
    let q = (0..n)
        .map(|i| {
            (0..d)
                .map(|k| x[revenue_lp_allocation_var(inst, i, k)].clone())
                .collect()
        })
        .collect();
    let t = (0..n)
        .map(|i| x[revenue_lp_transfer_var(inst, i)].clone())
        .collect();
    (value, Mechanism { q, t })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{inst_a, inst_b};
    use crate::model::{ic_ir_violations, revenue};
    use crate::rational::{int, rat};

    fn single(lower: Option<i64>, upper: Option<i64>) -> LinearProgram {
        let mut lp = LinearProgram::new();
        lp.add_variable(
            "x",
            Bound {
                lower: lower.map(int),
                upper: upper.map(int),
            },
            int(1),
        )
        .unwrap();
        lp
    }

    #[test]
    fn bounded_single_variable() {
        let mut lp = single(Some(0), None);
        lp.add_constraint("cap", vec![(0, int(1))], Relation::Le, int(3))
            .unwrap();
        let sol = solve_lp(&lp);
        assert_eq!(sol.status, LpStatus::Optimal);
        assert_eq!(sol.value, Some(int(3)));
        assert_eq!(sol.x, vec![int(3)]);
    }

    #[test]
    fn simplex_constraint() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", Bound::non_negative(), int(1)).unwrap();
        let y = lp.add_variable("y", Bound::non_negative(), int(1)).unwrap();
        lp.add_constraint("sum", vec![(x, int(1)), (y, int(1))], Relation::Le, int(1))
            .unwrap();
        assert_eq!(solve_lp(&lp).value, Some(int(1)));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        let mut lp = LinearProgram::new();
        let costs = [rat(3, 4), int(-20), rat(1, 2), int(-6)];
        let x: Vec<usize> = costs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                lp.add_variable(format!("x{i}"), Bound::non_negative(), c.clone())
                    .unwrap()
            })
            .collect();
        let rows = [
            [rat(1, 4), int(-8), int(-1), int(9)],
            [rat(1, 2), int(-12), rat(-1, 2), int(3)],
        ];
        for (r, coeffs) in rows.iter().enumerate() {
            let terms = x.iter().copied().zip(coeffs.iter().cloned()).collect();
            lp.add_constraint(format!("r{r}"), terms, Relation::Le, int(0))
                .unwrap();
        }
        lp.add_constraint("cap", vec![(x[2], int(1))], Relation::Le, int(1))
            .unwrap();
        let solution = solve_lp(&lp);
        assert_eq!(solution.value, Some(rat(5, 4)));
        assert!(lp.is_feasible(&solution.x));
    }

    #[test]
    fn unbounded_ray() {
        let lp = single(Some(0), None);
        assert_eq!(solve_lp(&lp).status, LpStatus::Unbounded);
    }

    #[test]
    fn infeasible_rows() {
        let mut lp = single(Some(0), None);
        lp.add_constraint("lo", vec![(0, int(1))], Relation::Ge, int(2))
            .unwrap();
        lp.add_constraint("hi", vec![(0, int(1))], Relation::Le, int(1))
            .unwrap();
        assert_eq!(solve_lp(&lp).status, LpStatus::Infeasible);
    }

    #[test]
    fn equality_and_free_variables() {
        // maximize x - y with x free, y <= 4, x + y = 3/2, x <= 1
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", Bound::free(), int(1)).unwrap();
        let y = lp
            .add_variable(
                "y",
                Bound {
                    lower: None,
                    upper: Some(int(4)),
                },
                int(-1),
            )
            .unwrap();
        lp.add_constraint(
            "eq",
            vec![(x, int(1)), (y, int(1))],
            Relation::Eq,
            rat(3, 2),
        )
        .unwrap();
        lp.add_constraint("cap", vec![(x, int(1))], Relation::Le, int(1))
            .unwrap();
        let sol = solve_lp(&lp);
        assert_eq!(sol.x, vec![int(1), rat(1, 2)]);
        assert_eq!(sol.value, Some(rat(1, 2)));
    }

    #[test]
    fn redundant_equalities_are_dropped() {
        let mut lp = LinearProgram::new();
        let x = lp.add_variable("x", Bound::non_negative(), int(2)).unwrap();
        let y = lp.add_variable("y", Bound::non_negative(), int(1)).unwrap();
        lp.add_constraint("a", vec![(x, int(1)), (y, int(1))], Relation::Eq, int(2))
            .unwrap();
        lp.add_constraint("b", vec![(x, int(2)), (y, int(2))], Relation::Eq, int(4))
            .unwrap();
        assert_eq!(solve_lp(&lp).value, Some(int(4)));
    }

    #[test]
    fn duplicate_labels_rejected() {
        let mut lp = single(Some(0), None);
        assert_eq!(
            lp.add_variable("x", Bound::free(), int(0)),
            Err(LpError::DuplicateLabel("x".into()))
        );
        assert_eq!(
            lp.add_constraint("r", vec![(5, int(1))], Relation::Le, int(0)),
            Err(LpError::UnknownVariable(5))
        );
    }

    #[test]
    fn revenue_lp_shape_and_optimum_on_inst_b() {
        let inst = inst_b();
        let lp = build_revenue_lp(&inst);
        assert_eq!(lp.num_variables(), 12);
        assert_eq!(lp.num_constraints(), 16);
        let (value, m) = optimal_mechanism(&inst);
        assert_eq!(value, rat(137, 64));
        assert_eq!(revenue(&inst, &m), value);
        assert!(ic_ir_violations(&inst, &m).is_empty());
    }

    #[test]
    fn single_type_sells_at_value() {
        let inst = Instance::new(vec![vec![rat(7, 3)]], vec![int(1)]).unwrap();
        assert_eq!(optimal_mechanism(&inst).0, rat(7, 3));
    }

    #[test]
    fn single_good_posted_price() {
        let inst = Instance::new(
            vec![vec![int(1)], vec![int(2)], vec![int(3)]],
            vec![rat(1, 3); 3],
        )
        .unwrap();
        assert_eq!(optimal_mechanism(&inst).0, rat(4, 3));
    }

    #[test]
    fn transfer_lp_examples() {
        let inst = inst_b();
        let q = crate::fixtures::inst_b_caption_mechanism().q;
        let (value, t) = solve_lp(&build_transfer_lp(&inst, &q))
            .into_optimum()
            .unwrap();
        assert_eq!(value, rat(137, 64));
        assert_eq!(t, vec![rat(57, 64), rat(57, 64), rat(57, 64), rat(377, 64)]);

        let zero = vec![vec![int(0); 2]; 4];
        let (value, t) = solve_lp(&build_transfer_lp(&inst, &zero))
            .into_optimum()
            .unwrap();
        assert_eq!(value, int(0));
        assert_eq!(t, vec![int(0); 4]);

        let a = inst_a();
        let q = vec![
            vec![int(0), int(0)],
            vec![int(0), int(1)],
            vec![int(0), int(1)],
            vec![int(1), int(1)],
        ];
        let (value, t) = solve_lp(&build_transfer_lp(&a, &q)).into_optimum().unwrap();
        assert_eq!(value, rat(31, 32));
        assert_eq!(t, vec![int(0), rat(3, 2), rat(3, 2), int(2)]);
    }

    #[test]
    fn dump_lists_rows_and_bounds() {
        let text = build_revenue_lp(&inst_b()).to_string();
        assert!(text.starts_with("maximize\n"));
        assert!(text.contains("ir4:"));
        assert!(text.contains("-inf <= t1 <= +inf"));
    }
}
