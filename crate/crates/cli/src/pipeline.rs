//! The analysis pipeline behind `upl analyze`.

use std::fmt;

use upl_core::analysis::{
    analyze_conditions, route_cutoffs, search_type_orders, ConditionReport, CutoffVector, Route,
};
use upl_core::duality::{initial_flow, verify_certificate, CertificateVerdict};
use upl_core::ironing::iron_instance;
use upl_core::lp::optimal_mechanism;
use upl_core::model::revenue;
use upl_core::pricing::{price_allocation, upgrade_allocation};
use upl_core::rational::int;
use upl_core::{Instance, Mechanism, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    CertifiedOptimal,
    ConditionsUnmet,
    CertificateFailed,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::CertifiedOptimal => 0,
            Status::ConditionsUnmet => 3,
            Status::CertificateFailed => 4,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::CertifiedOptimal => "certified-optimal",
            Status::ConditionsUnmet => "conditions-unmet",
            Status::CertificateFailed => "certificate-failed",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Cross-check against the revenue LP.
    pub lp: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        Self { lp: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IroningSummary {
    /// 0-based item per type.
    pub kappa: Vec<usize>,
    /// Indexed by type.
    pub gamma: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpCheck {
    pub optimum: Rational,
    /// LP optimum minus mechanism revenue; absent without a mechanism.
    pub gap: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub n: usize,
    pub d: usize,
    pub conditions: ConditionReport,
    pub route: Option<Route>,
    /// Set when the conditions only hold after relabelling types: type `r`
    /// of the analysed order is type `type_order[r]` of the input.
    pub type_order: Option<Vec<usize>>,
    /// Cutoffs in the analysed order.
    pub cutoffs: Option<CutoffVector>,
    /// Mechanism in the input order.
    pub mechanism: Option<Mechanism>,
    pub revenue: Option<Rational>,
    pub ironing: Option<IroningSummary>,
    /// Verdict in the analysed order.
    pub certificate: Option<CertificateVerdict>,
    /// Why no certificate could be built although the conditions hold.
    pub failure: Option<String>,
    pub lp: Option<LpCheck>,
    pub status: Status,
}

/// Route, type order and cutoffs under which the sufficient conditions
/// hold. The input order is tried on both routes before any relabelling.
pub fn select_route(inst: &Instance) -> Option<(Route, Option<Vec<usize>>, CutoffVector)> {
    const ROUTES: [Route; 2] = [Route::Regular, Route::MostlyRegular];
    for route in ROUTES {
        if let Some(cutoffs) = route_cutoffs(inst, route) {
            return Some((route, None, cutoffs));
        }
    }
    for route in ROUTES {
        if let Ok(Some(found)) = search_type_orders(inst, route) {
            return Some((route, Some(found.order), found.cutoffs));
        }
    }
    None
}

fn inverse(order: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; order.len()];
    for (r, &i) in order.iter().enumerate() {
        inv[i] = r;
    }
    inv
}

pub fn analyze(inst: &Instance, options: AnalyzeOptions) -> AnalysisReport {
    let mut report = AnalysisReport {
        n: inst.n(),
        d: inst.d(),
        conditions: analyze_conditions(inst),
        route: None,
        type_order: None,
        cutoffs: None,
        mechanism: None,
        revenue: None,
        ironing: None,
        certificate: None,
        failure: None,
        lp: None,
        status: Status::ConditionsUnmet,
    };
    if let Some((route, order, cutoffs)) = select_route(inst) {
        let work = match &order {
            Some(order) => inst.permuted(order),
            None => inst.clone(),
        };
        report.route = Some(route);
        report.type_order = order.clone();
        report.cutoffs = Some(cutoffs.clone());
        report.status = Status::CertificateFailed;
        match certify(&work, route, &cutoffs, &mut report) {
            Ok((m, verdict)) => {
                let m = match &order {
                    Some(order) => m.permuted(&inverse(order)),
                    None => m,
                };
                report.revenue = Some(revenue(inst, &m));
                report.mechanism = Some(m);
                if verdict.holds() {
                    report.status = Status::CertifiedOptimal;
                }
                report.certificate = Some(verdict);
            }
            Err(msg) => report.failure = Some(msg),
        }
    }
    if options.lp {
        let (optimum, _) = optimal_mechanism(inst);
        let gap = report.revenue.as_ref().map(|r| &optimum - r);
        if report.status == Status::CertifiedOptimal && gap.as_ref().is_some_and(|g| *g != int(0)) {
            report.status = Status::CertificateFailed;
        }
        report.lp = Some(LpCheck { optimum, gap });
    }
    report
}

fn certify(
    work: &Instance,
    route: Route,
    cutoffs: &CutoffVector,
    report: &mut AnalysisReport,
) -> Result<(Mechanism, CertificateVerdict), String> {
    let m =
        price_allocation(work, &upgrade_allocation(work, cutoffs)).map_err(|e| e.to_string())?;
    let flow = match route {
        Route::Regular => initial_flow(work),
        Route::MostlyRegular => {
            let (kappa, flow, trace) = iron_instance(work, cutoffs).map_err(|e| e.to_string())?;
            report.ironing = Some(IroningSummary {
                kappa: kappa.as_slice().to_vec(),
                gamma: trace.gammas(),
            });
            flow
        }
    };
    let verdict = verify_certificate(work, &m, &flow);
    Ok((m, verdict))
}
