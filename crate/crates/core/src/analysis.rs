//! Pseudo-revenues, quasi-concave closures and the sufficient-condition
//! checkers for optimality of upgrade pricing.
//!
//! Cutoffs are zero-based type indices, one per good: type `i` receives
//! good `k` under the upgrade allocation iff `i >= cutoffs[k]`.

use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::model::Instance;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("bad cutoff: {0}")]
    BadCutoff(String),
    #[error("order search is limited to {max} types, instance has {n}")]
    TooLarge { n: usize, max: usize },
}

/// Largest instance for which [`search_type_orders`] enumerates orders.
pub const MAX_ORDER_SEARCH: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CutoffVector(Vec<usize>);

impl CutoffVector {
    pub fn new(cutoffs: Vec<usize>) -> Self {
        Self(cutoffs)
    }

    /// From one-based type labels.
    pub fn from_labels(labels: &[usize]) -> Self {
        Self(labels.iter().map(|&l| l - 1).collect())
    }

    pub fn labels(&self) -> Vec<usize> {
        self.0.iter().map(|&c| c + 1).collect()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn get(&self, k: usize) -> usize {
        self.0[k]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    fn check_for(&self, inst: &Instance) -> Result<(), AnalysisError> {
        if self.len() != inst.d() {
            return Err(AnalysisError::BadCutoff(format!(
                "{} cutoffs for {} goods",
                self.len(),
                inst.d()
            )));
        }
        if let Some(&c) = self.0.iter().find(|&&c| c >= inst.n()) {
            return Err(AnalysisError::BadCutoff(format!(
                "cutoff {} exceeds the {} types",
                c + 1,
                inst.n()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CutoffVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = self.labels().iter().map(ToString::to_string).collect();
        write!(f, "({})", labels.join(", "))
    }
}

/// Per-good pseudo-revenue `R_i^k = (1 - F_{i-1}) theta_i^k`, indexed `[k][i]`.
pub fn pseudo_revenues(inst: &Instance) -> Vec<Vec<Rational>> {
    let mass: Vec<Rational> = (0..inst.n()).map(|i| inst.mass_from(i)).collect();
    (0..inst.d())
        .map(|k| (0..inst.n()).map(|i| &mass[i] * inst.value(i, k)).collect())
        .collect()
}

/// Myersonian virtual values of adjacent downward deviations, indexed `[i][k]`:
/// `phi_i = theta_i - (1 - F_i) / f_i * (theta_{i+1} - theta_i)`, and
/// `phi_n = theta_n`.
pub fn initial_virtual_values(inst: &Instance) -> Vec<Vec<Rational>> {
    let n = inst.n();
    (0..n)
        .map(|i| {
            if i + 1 == n {
                return inst.row(i).to_vec();
            }
            let weight = inst.upper_mass(i) / inst.prob(i);
            (0..inst.d())
                .map(|k| {
                    let theta = inst.value(i, k);
                    theta - &weight * (inst.value(i + 1, k) - theta)
                })
                .collect()
        })
        .collect()
}

/// All indices attaining the maximum, ascending.
pub fn argmax(seq: &[Rational]) -> Vec<usize> {
    let Some(best) = seq.iter().max() else {
        return Vec::new();
    };
    seq.iter()
        .enumerate()
        .filter(|(_, v)| *v == best)
        .map(|(i, _)| i)
        .collect()
}

fn closure_around(seq: &[Rational], peak: usize) -> Vec<Rational> {
    let mut out = seq.to_vec();
    for i in 1..=peak {
        if out[i - 1] > out[i] {
            out[i] = out[i - 1].clone();
        }
    }
    for i in (peak..seq.len().saturating_sub(1)).rev() {
        if out[i + 1] > out[i] {
            out[i] = out[i + 1].clone();
        }
    }
    out
}

/// Pointwise smallest quasi-concave sequence dominating `seq`: running
/// maxima from the left up to a peak and from the right after it.
pub fn quasi_concave_closure(seq: &[Rational]) -> Vec<Rational> {
    let peaks = argmax(seq);
    let Some(&first) = peaks.first() else {
        return Vec::new();
    };
    let out = closure_around(seq, first);
    debug_assert!(
        peaks.len() == 1 || out == closure_around(seq, *peaks.last().unwrap()),
        "closure depends on the choice of peak"
    );
    out
}

/// Nondecreasing up to some index, nonincreasing after it.
pub fn is_quasi_concave(seq: &[Rational]) -> bool {
    let mut i = 0;
    while i + 1 < seq.len() && seq[i] <= seq[i + 1] {
        i += 1;
    }
    seq[i..].windows(2).all(|w| w[0] >= w[1])
}

/// Pseudo-revenues, their closures and their peaks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevenueCurves {
    /// `revenue[k][i]`
    pub revenue: Vec<Vec<Rational>>,
    /// `closure[k][i]`
    pub closure: Vec<Vec<Rational>>,
    /// `peaks[k]`: argmax of `revenue[k]`.
    pub peaks: Vec<Vec<usize>>,
}

impl RevenueCurves {
    pub fn new(inst: &Instance) -> Self {
        let revenue = pseudo_revenues(inst);
        let closure = revenue.iter().map(|r| quasi_concave_closure(r)).collect();
        let peaks = revenue.iter().map(|r| argmax(r)).collect();
        Self {
            revenue,
            closure,
            peaks,
        }
    }

    pub fn items(&self) -> usize {
        self.revenue.len()
    }
}

/// A maximal run of types `lo..=hi` where an item's closure lies strictly
/// above its pseudo-revenue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IroningInterval {
    pub item: usize,
    pub lo: usize,
    pub hi: usize,
}

impl IroningInterval {
    pub fn contains(&self, i: usize) -> bool {
        self.lo <= i && i <= self.hi
    }

    pub fn same_span(&self, other: &IroningInterval) -> bool {
        self.lo == other.lo && self.hi == other.hi
    }

    /// `other` lies inside `self` without touching either endpoint.
    pub fn strictly_contains(&self, other: &IroningInterval) -> bool {
        self.lo < other.lo && other.hi < self.hi
    }

    /// Disjoint with at least one type strictly between them.
    pub fn separated_from(&self, other: &IroningInterval) -> bool {
        self.hi + 1 < other.lo || other.hi + 1 < self.lo
    }
}

impl fmt::Display for IroningInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "item {}: {{{}}}", self.item + 1, self.lo + 1)
        } else {
            write!(
                f,
                "item {}: {{{}..{}}}",
                self.item + 1,
                self.lo + 1,
                self.hi + 1
            )
        }
    }
}

pub fn candidate_ironing_intervals(curves: &RevenueCurves, k: usize) -> Vec<IroningInterval> {
    let (r, bar) = (&curves.revenue[k], &curves.closure[k]);
    let mut out = Vec::new();
    let mut start = None;
    for i in 0..=r.len() {
        let ironed = i < r.len() && r[i] != bar[i];
        match (ironed, start) {
            (true, None) => start = Some(i),
            (false, Some(lo)) => {
                out.push(IroningInterval {
                    item: k,
                    lo,
                    hi: i - 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeakMonotonicityViolation {
    pub lower: usize,
    pub upper: usize,
    pub item: usize,
}

impl fmt::Display for WeakMonotonicityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "type {} values item {} above type {}",
            self.lower + 1,
            self.item + 1,
            self.upper + 1
        )
    }
}

fn weak_monotonicity_item(
    inst: &Instance,
    k: usize,
    cutoff: usize,
) -> Option<WeakMonotonicityViolation> {
    for i in 0..=cutoff {
        for j in cutoff..inst.n() {
            if inst.value(i, k) > inst.value(j, k) {
                return Some(WeakMonotonicityViolation {
                    lower: i,
                    upper: j,
                    item: k,
                });
            }
        }
    }
    None
}

/// `i <= c_k <= j` implies `theta_i^k <= theta_j^k`; returns the first
/// violating triple.
pub fn check_weak_monotonicity(
    inst: &Instance,
    cutoffs: &CutoffVector,
) -> Result<Option<WeakMonotonicityViolation>, AnalysisError> {
    cutoffs.check_for(inst)?;
    Ok((0..inst.d()).find_map(|k| weak_monotonicity_item(inst, k, cutoffs.get(k))))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegularityViolation {
    pub type_index: usize,
    pub item: usize,
    pub virtual_value: Rational,
}

impl fmt::Display for RegularityViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "virtual value of type {} for item {} is {}",
            self.type_index + 1,
            self.item + 1,
            self.virtual_value
        )
    }
}

fn regularity_item(phi: &[Vec<Rational>], k: usize, cutoff: usize) -> Option<RegularityViolation> {
    phi.iter().enumerate().find_map(|(i, row)| {
        let v = &row[k];
        let wrong = if i < cutoff {
            v.is_positive()
        } else {
            v.is_negative()
        };
        wrong.then(|| RegularityViolation {
            type_index: i,
            item: k,
            virtual_value: v.clone(),
        })
    })
}

/// Virtual values are nonpositive below each cutoff and nonnegative from
/// the cutoff on.
pub fn check_regularity(
    inst: &Instance,
    cutoffs: &CutoffVector,
) -> Result<Option<RegularityViolation>, AnalysisError> {
    cutoffs.check_for(inst)?;
    let phi = initial_virtual_values(inst);
    Ok((0..inst.d()).find_map(|k| regularity_item(&phi, k, cutoffs.get(k))))
}

/// Equivalent form of regularity: every pseudo-revenue rises weakly to the
/// cutoff and falls weakly after it.
pub fn pseudo_revenues_single_peaked(inst: &Instance, cutoffs: &CutoffVector) -> bool {
    pseudo_revenues(inst).iter().enumerate().all(|(k, r)| {
        let c = cutoffs.get(k);
        r[..=c].windows(2).all(|w| w[0] <= w[1]) && r[c..].windows(2).all(|w| w[0] >= w[1])
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MrsViolation {
    pub lower: usize,
    pub upper: usize,
    pub item: usize,
    pub other_item: usize,
}

impl fmt::Display for MrsViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ratio of item {} to item {} falls from type {} to type {}",
            self.other_item + 1,
            self.item + 1,
            self.lower + 1,
            self.upper + 1
        )
    }
}

/// For `i <= j` and `k <= l`: `theta_i^l theta_j^k <= theta_j^l theta_i^k`.
pub fn check_monotone_mrs(inst: &Instance) -> Option<MrsViolation> {
    let (n, d) = (inst.n(), inst.d());
    for i in 0..n {
        for j in i + 1..n {
            for k in 0..d {
                for l in k + 1..d {
                    let left = inst.value(i, l) * inst.value(j, k);
                    let right = inst.value(j, l) * inst.value(i, k);
                    if left > right {
                        return Some(MrsViolation {
                            lower: i,
                            upper: j,
                            item: k,
                            other_item: l,
                        });
                    }
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MostlyRegularViolation {
    /// Candidate intervals of neighbouring items overlap without nesting,
    /// or touch without a separating type.
    PartialOverlap {
        first: IroningInterval,
        second: IroningInterval,
    },
    /// An interval covers the cutoff of its own or a neighbouring item.
    IroningOnMaximum {
        interval: IroningInterval,
        cutoff_item: usize,
    },
    /// Values inside an interval are out of order.
    TooShuffled {
        interval: IroningInterval,
        type_index: usize,
        item: usize,
    },
}

impl fmt::Display for MostlyRegularViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PartialOverlap { first, second } => {
                write!(f, "partial overlap of {first} and {second}")
            }
            Self::IroningOnMaximum {
                interval,
                cutoff_item,
            } => write!(
                f,
                "{interval} contains the cutoff of item {}",
                cutoff_item + 1
            ),
            Self::TooShuffled {
                interval,
                type_index,
                item,
            } => write!(
                f,
                "{interval} is too shuffled at type {} for item {}",
                type_index + 1,
                item + 1
            ),
        }
    }
}

/// Verifies the three interval conditions for every neighbouring pair of
/// items. The cutoffs must be nondecreasing peaks of the pseudo-revenues.
pub fn check_mostly_regular(
    inst: &Instance,
    cutoffs: &CutoffVector,
) -> Result<Option<MostlyRegularViolation>, AnalysisError> {
    let curves = RevenueCurves::new(inst);
    check_mostly_regular_with(inst, &curves, cutoffs)
}

pub fn check_mostly_regular_with(
    inst: &Instance,
    curves: &RevenueCurves,
    cutoffs: &CutoffVector,
) -> Result<Option<MostlyRegularViolation>, AnalysisError> {
    cutoffs.check_for(inst)?;
    for k in 0..inst.d() {
        if !curves.peaks[k].contains(&cutoffs.get(k)) {
            return Err(AnalysisError::BadCutoff(format!(
                "cutoff {} of item {} is not a peak of its pseudo-revenue",
                cutoffs.get(k) + 1,
                k + 1
            )));
        }
    }
    if !cutoffs.is_nondecreasing() {
        return Err(AnalysisError::BadCutoff(format!(
            "cutoffs {cutoffs} are not nondecreasing"
        )));
    }
    let intervals: Vec<Vec<IroningInterval>> = (0..inst.d())
        .map(|k| candidate_ironing_intervals(curves, k))
        .collect();

    for k in 0..inst.d().saturating_sub(1) {
        let (lower, upper) = (&intervals[k], &intervals[k + 1]);
        for a in lower {
            for b in upper {
                let nested = a.same_span(b) || a.strictly_contains(b) || b.strictly_contains(a);
                if !nested && !a.separated_from(b) {
                    return Ok(Some(MostlyRegularViolation::PartialOverlap {
                        first: *a,
                        second: *b,
                    }));
                }
            }
        }
    }

    for k in 0..inst.d().saturating_sub(1) {
        for interval in intervals[k].iter().chain(&intervals[k + 1]) {
            for item in [k, k + 1] {
                if interval.contains(cutoffs.get(item)) {
                    return Ok(Some(MostlyRegularViolation::IroningOnMaximum {
                        interval: *interval,
                        cutoff_item: item,
                    }));
                }
            }
        }
    }

    for k in 0..inst.d().saturating_sub(1) {
        let (lo, hi) = (cutoffs.get(k), cutoffs.get(k + 1));
        for interval in intervals[k].iter().chain(&intervals[k + 1]) {
            if interval.lo <= lo || interval.hi >= hi {
                continue;
            }
            let floor = inst.value(interval.lo, k + 1);
            for i in interval.lo..=interval.hi {
                if inst.value(i, k + 1) < floor {
                    return Ok(Some(MostlyRegularViolation::TooShuffled {
                        interval: *interval,
                        type_index: i,
                        item: k + 1,
                    }));
                }
            }
            if inst.value(interval.hi, k) > inst.value(interval.hi + 1, k) {
                return Ok(Some(MostlyRegularViolation::TooShuffled {
                    interval: *interval,
                    type_index: interval.hi,
                    item: k,
                }));
            }
        }
    }
    Ok(None)
}

/// Which set of sufficient conditions a cutoff search targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Route {
    /// Compatible weak monotonicity and regularity.
    Regular,
    /// Compatible weak monotonicity and mostly-regularity.
    MostlyRegular,
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Route::Regular => "regular",
            Route::MostlyRegular => "mostly-regular",
        })
    }
}

/// Per item, the cutoffs passing weak monotonicity and those passing
/// regularity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ItemCutoffs {
    pub weakly_monotone: Vec<usize>,
    pub regular: Vec<usize>,
}

impl ItemCutoffs {
    pub fn compatible(&self) -> Vec<usize> {
        self.regular
            .iter()
            .copied()
            .filter(|c| self.weakly_monotone.contains(c))
            .collect()
    }
}

pub fn item_cutoffs(inst: &Instance) -> Vec<ItemCutoffs> {
    let phi = initial_virtual_values(inst);
    (0..inst.d())
        .map(|k| ItemCutoffs {
            weakly_monotone: (0..inst.n())
                .filter(|&c| weak_monotonicity_item(inst, k, c).is_none())
                .collect(),
            regular: (0..inst.n())
                .filter(|&c| regularity_item(&phi, k, c).is_none())
                .collect(),
        })
        .collect()
}

/// Nondecreasing selections of one peak per item, in lexicographic order.
fn peak_selections(curves: &RevenueCurves) -> Vec<CutoffVector> {
    fn extend(curves: &RevenueCurves, prefix: &mut Vec<usize>, out: &mut Vec<CutoffVector>) {
        let k = prefix.len();
        if k == curves.items() {
            out.push(CutoffVector::new(prefix.clone()));
            return;
        }
        let floor = prefix.last().copied().unwrap_or(0);
        for &p in curves.peaks[k].iter().filter(|&&p| p >= floor) {
            prefix.push(p);
            extend(curves, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(curves, &mut Vec::new(), &mut out);
    out
}

/// The first nondecreasing peak selection, ignoring every other condition.
pub fn default_peak_cutoffs(inst: &Instance) -> Option<CutoffVector> {
    peak_selections(&RevenueCurves::new(inst))
        .into_iter()
        .next()
}

/// Cutoffs under which the instance meets the conditions of `route`.
pub fn find_compatible_cutoffs(inst: &Instance, route: Route) -> Option<CutoffVector> {
    match route {
        Route::Regular => {
            let per_item: Option<Vec<usize>> = item_cutoffs(inst)
                .iter()
                .map(|c| c.compatible().first().copied())
                .collect();
            per_item.map(CutoffVector::new)
        }
        Route::MostlyRegular => {
            let curves = RevenueCurves::new(inst);
            peak_selections(&curves).into_iter().find(|c| {
                matches!(check_weak_monotonicity(inst, c), Ok(None))
                    && matches!(check_mostly_regular_with(inst, &curves, c), Ok(None))
            })
        }
    }
}

/// The conditions of `route` hold in the given order; the mostly-regular
/// route also needs monotone marginal rates of substitution.
pub fn route_cutoffs(inst: &Instance, route: Route) -> Option<CutoffVector> {
    if route == Route::MostlyRegular && check_monotone_mrs(inst).is_some() {
        return None;
    }
    find_compatible_cutoffs(inst, route)
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len())
        .rev()
        .find(|&j| p[j] > p[i - 1])
        .expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// An order of types found by [`search_type_orders`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeOrder {
    /// Type `r` of `instance` is type `order[r]` of the input.
    pub order: Vec<usize>,
    pub instance: Instance,
    pub cutoffs: CutoffVector,
}

/// Exhaustively tries type orders (lexicographically, identity first) until
/// the conditions of `route` hold.
pub fn search_type_orders(
    inst: &Instance,
    route: Route,
) -> Result<Option<TypeOrder>, AnalysisError> {
    let n = inst.n();
    if n > MAX_ORDER_SEARCH {
        return Err(AnalysisError::TooLarge {
            n,
            max: MAX_ORDER_SEARCH,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    loop {
        let candidate = inst.permuted(&order);
        if let Some(cutoffs) = route_cutoffs(&candidate, route) {
            return Ok(Some(TypeOrder {
                order,
                instance: candidate,
                cutoffs,
            }));
        }
        if !next_permutation(&mut order) {
            return Ok(None);
        }
    }
}

/// A verdict with its cutoffs when positive and a counterexample otherwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub holds: bool,
    pub cutoffs: Option<CutoffVector>,
    pub witness: Option<String>,
}

impl Verdict {
    fn pass(cutoffs: Option<CutoffVector>) -> Self {
        Self {
            holds: true,
            cutoffs,
            witness: None,
        }
    }

    fn fail(witness: impl Into<String>) -> Self {
        Self {
            holds: false,
            cutoffs: None,
            witness: Some(witness.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub weakly_monotone: Verdict,
    pub regular: Verdict,
    pub compatibly_regular: Verdict,
    pub monotone_mrs: Verdict,
    pub mostly_regular: Verdict,
    pub compatibly_mostly_regular: Verdict,
}

fn format_set(items: &[usize]) -> String {
    let labels: Vec<String> = items.iter().map(|c| (c + 1).to_string()).collect();
    format!("{{{}}}", labels.join(", "))
}

/// Evaluates every sufficient condition in the given type order.
pub fn analyze_conditions(inst: &Instance) -> ConditionReport {
    let per_item = item_cutoffs(inst);
    let phi = initial_virtual_values(inst);

    let weakly_monotone = match per_item.iter().position(|c| c.weakly_monotone.is_empty()) {
        None => Verdict::pass(Some(CutoffVector::new(
            per_item.iter().map(|c| c.weakly_monotone[0]).collect(),
        ))),
        Some(k) => {
            let v = weak_monotonicity_item(inst, k, 0).expect("no cutoff passes");
            Verdict::fail(format!("item {} admits no cutoff; at cutoff 1: {v}", k + 1))
        }
    };

    let regular = match per_item.iter().position(|c| c.regular.is_empty()) {
        None => Verdict::pass(Some(CutoffVector::new(
            per_item.iter().map(|c| c.regular[0]).collect(),
        ))),
        Some(k) => {
            let v = regularity_item(&phi, k, 0).expect("no cutoff passes");
            Verdict::fail(format!("item {} admits no cutoff; at cutoff 1: {v}", k + 1))
        }
    };

    let compatibly_regular = match find_compatible_cutoffs(inst, Route::Regular) {
        Some(c) => Verdict::pass(Some(c)),
        None => {
            let k = per_item
                .iter()
                .position(|c| c.compatible().is_empty())
                .expect("some item has no compatible cutoff");
            Verdict::fail(format!(
                "item {}: regular cutoffs {}, weakly monotone cutoffs {}",
                k + 1,
                format_set(&per_item[k].regular),
                format_set(&per_item[k].weakly_monotone)
            ))
        }
    };

    let monotone_mrs = match check_monotone_mrs(inst) {
        None => Verdict::pass(None),
        Some(v) => Verdict::fail(v.to_string()),
    };

    let curves = RevenueCurves::new(inst);
    let selections = peak_selections(&curves);
    let mostly_regular = if selections.is_empty() {
        Verdict::fail("no nondecreasing selection of pseudo-revenue peaks")
    } else {
        let mut first_failure = None;
        let mut found = None;
        for c in &selections {
            match check_mostly_regular_with(inst, &curves, c) {
                Ok(None) => {
                    found = Some(c.clone());
                    break;
                }
                Ok(Some(v)) => {
                    first_failure.get_or_insert_with(|| format!("cutoffs {c}: {v}"));
                }
                Err(e) => {
                    first_failure.get_or_insert_with(|| e.to_string());
                }
            }
        }
        match found {
            Some(c) => Verdict::pass(Some(c)),
            None => Verdict::fail(first_failure.unwrap_or_default()),
        }
    };

    let compatibly_mostly_regular = match find_compatible_cutoffs(inst, Route::MostlyRegular) {
        Some(c) => Verdict::pass(Some(c)),
        None if !mostly_regular.holds => Verdict::fail(
            mostly_regular
                .witness
                .clone()
                .unwrap_or_else(|| "not mostly regular".into()),
        ),
        None => {
            let c = &selections[0];
            let witness = match check_weak_monotonicity(inst, c) {
                Ok(Some(v)) => format!("cutoffs {c}: {v}"),
                _ => "no mostly-regular cutoffs are weakly monotone".to_string(),
            };
            Verdict::fail(witness)
        }
    };

    ConditionReport {
        weakly_monotone,
        regular,
        compatibly_regular,
        monotone_mrs,
        mostly_regular,
        compatibly_mostly_regular,
    }
}

/// Sum of `values` weighted by `f`, from each index to the end:
/// `out[i] = sum_{j >= i} f_j values[j]`.
pub fn suffix_sums(inst: &Instance, values: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); values.len()];
    let mut acc = Rational::zero();
    for i in (0..values.len()).rev() {
        acc += inst.prob(i) * &values[i];
        out[i] = acc.clone();
    }
    out
}
