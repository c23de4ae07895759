//! JSON and text renderings of command results.

use std::fmt::Write;

use serde_json::{json, Value};
use upl_core::analysis::{ConditionReport, CutoffVector, Verdict};
use upl_core::duality::CertificateVerdict;
use upl_core::format::{mechanism_to_json, rat_to_json, rats_to_json};
use upl_core::model::IcViolation;
use upl_core::rational::format_rational;
use upl_core::{Mechanism, Rational};

use crate::pipeline::{AnalysisReport, Status};

/// ANSI colouring for text output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Style {
    pub color: bool,
}

impl Style {
    pub const PLAIN: Style = Style { color: false };

    /// Colour unless `UPL_NO_COLOR` is set.
    pub fn from_env() -> Self {
        Self {
            color: std::env::var_os("UPL_NO_COLOR").is_none(),
        }
    }

    fn paint(&self, text: &str, code: &str) -> String {
        if self.color {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    fn good(&self, text: &str) -> String {
        self.paint(text, "32")
    }

    fn bad(&self, text: &str) -> String {
        self.paint(text, "31")
    }

    fn warn(&self, text: &str) -> String {
        self.paint(text, "33")
    }

    fn flag(&self, ok: bool) -> String {
        if ok {
            self.good("yes")
        } else {
            self.bad("no")
        }
    }

    fn status(&self, status: Status) -> String {
        let text = status.to_string();
        match status {
            Status::CertifiedOptimal => self.good(&text),
            Status::ConditionsUnmet => self.warn(&text),
            Status::CertificateFailed => self.bad(&text),
        }
    }
}

pub fn labels(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}

pub fn tuple<T: ToString>(items: &[T]) -> String {
    let parts: Vec<String> = items.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn cutoffs_json(cutoffs: Option<&CutoffVector>) -> Value {
    cutoffs.map_or(Value::Null, |c| json!(c.labels()))
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "holds": v.holds,
        "cutoffs": cutoffs_json(v.cutoffs.as_ref()),
        "witness": v.witness,
    })
}

fn condition_rows(c: &ConditionReport) -> [(&'static str, &Verdict); 6] {
    [
        ("weakly_monotone", &c.weakly_monotone),
        ("regular", &c.regular),
        ("compatibly_regular", &c.compatibly_regular),
        ("monotone_mrs", &c.monotone_mrs),
        ("mostly_regular", &c.mostly_regular),
        ("compatibly_mostly_regular", &c.compatibly_mostly_regular),
    ]
}

pub fn conditions_json(c: &ConditionReport) -> Value {
    Value::Object(
        condition_rows(c)
            .into_iter()
            .map(|(name, v)| (name.to_string(), verdict_json(v)))
            .collect(),
    )
}

pub fn certificate_json(v: &CertificateVerdict) -> Value {
    let conditions: Vec<Value> = v
        .conditions()
        .into_iter()
        .map(|(name, passed, witness)| json!({"name": name, "passed": passed, "witness": witness}))
        .collect();
    json!({ "holds": v.holds(), "conditions": conditions })
}

pub fn violations_json(violations: &[IcViolation]) -> Value {
    Value::Array(
        violations
            .iter()
            .map(|v| {
                json!({
                    "from": v.from + 1,
                    "to": v.to.label(),
                    "slack": rat_to_json(&v.slack),
                })
            })
            .collect(),
    )
}

fn opt_rat(value: Option<&Rational>) -> Value {
    value.map_or(Value::Null, rat_to_json)
}

pub fn report_json(r: &AnalysisReport) -> Value {
    let mechanism = r.mechanism.as_ref().map_or(Value::Null, |m| {
        let mut v = mechanism_to_json(m);
        v["revenue"] = opt_rat(r.revenue.as_ref());
        v
    });
    let ironing = r.ironing.as_ref().map_or(Value::Null, |s| {
        json!({
            "kappa": labels(&s.kappa),
            "gamma": tuple(&s.gamma),
            "gammas": rats_to_json(&s.gamma),
        })
    });
    let lp = r.lp.as_ref().map_or(
        Value::Null,
        |lp| json!({ "optimum": rat_to_json(&lp.optimum), "gap": opt_rat(lp.gap.as_ref()) }),
    );
    json!({
        "n": r.n,
        "d": r.d,
        "status": r.status.to_string(),
        "conditions": conditions_json(&r.conditions),
        "route": r.route.map(|route| route.to_string()),
        "type_order": r.type_order.as_ref().map(|o| labels(o)),
        "cutoffs": cutoffs_json(r.cutoffs.as_ref()),
        "mechanism": mechanism,
        "ironing": ironing,
        "certificate": r.certificate.as_ref().map_or(Value::Null, certificate_json),
        "failure": r.failure,
        "lp": lp,
    })
}

pub fn mechanism_text(out: &mut String, m: &Mechanism) {
    for (i, (q, t)) in m.q.iter().zip(&m.t).enumerate() {
        let _ = writeln!(
            out,
            "  type {}: q {} t {}",
            i + 1,
            tuple(q),
            format_rational(t)
        );
    }
}

pub fn certificate_text(out: &mut String, v: &CertificateVerdict, style: Style) {
    for (name, passed, witness) in v.conditions() {
        let mark = if passed {
            style.good("pass")
        } else {
            style.bad("FAIL")
        };
        let _ = write!(out, "  {name:<30} {mark}");
        if let Some(w) = witness {
            let _ = write!(out, "  {w}");
        }
        out.push('\n');
    }
}

pub fn report_text(r: &AnalysisReport, style: Style) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "instance: {} types, {} goods", r.n, r.d);
    out.push_str("conditions:\n");
    for (name, v) in condition_rows(&r.conditions) {
        let _ = write!(
            out,
            "  {:<26} {}",
            name.replace('_', " "),
            style.flag(v.holds)
        );
        if let Some(c) = &v.cutoffs {
            let _ = write!(out, "  cutoffs {c}");
        }
        if let Some(w) = &v.witness {
            let _ = write!(out, "  {w}");
        }
        out.push('\n');
    }
    if let (Some(route), Some(cutoffs)) = (r.route, &r.cutoffs) {
        let _ = writeln!(out, "route: {route}, cutoffs {cutoffs}");
    }
    if let Some(order) = &r.type_order {
        let _ = writeln!(out, "type order: {}", tuple(&labels(order)));
    }
    if let (Some(m), Some(rev)) = (&r.mechanism, &r.revenue) {
        let _ = writeln!(out, "mechanism: revenue {rev}");
        mechanism_text(&mut out, m);
    }
    if let Some(s) = &r.ironing {
        let _ = writeln!(
            out,
            "ironing: gamma {}, kappa {}",
            tuple(&s.gamma),
            tuple(&labels(&s.kappa))
        );
    }
    if let Some(v) = &r.certificate {
        out.push_str("certificate:\n");
        certificate_text(&mut out, v, style);
    }
    if let Some(f) = &r.failure {
        let _ = writeln!(out, "failure: {}", style.bad(f));
    }
    if let Some(lp) = &r.lp {
        let _ = write!(out, "lp optimum: {}", lp.optimum);
        if let Some(gap) = &lp.gap {
            let _ = write!(out, ", gap {gap}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "status: {}", style.status(r.status));
    out
}
