//! JSON forms of instances, mechanisms, menus, prices and flows.
//!
//! Rationals are read from integers, `"p/q"` strings or finite decimal
//! strings, and always written as canonical `"p/q"` (or `"p"`) strings.
//! Types are numbered from 1 in files; node 0 is the participation sink.

use serde_json::{json, Value};
use thiserror::Error;

use crate::duality::Flow;
use crate::model::{
    validate_instance, Instance, Mechanism, ModelError, Node, RawInstance, UpgradeMenu,
};
use crate::pricing::SeparatePrices;
use crate::rational::{format_rational, parse_rational, ParseRationalError, Rational};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Schema(String),
    #[error(transparent)]
    Rational(#[from] ParseRationalError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn schema(msg: impl Into<String>) -> FormatError {
    FormatError::Schema(msg.into())
}

pub fn rat_to_json(value: &Rational) -> Value {
    Value::String(format_rational(value))
}

pub fn rats_to_json(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(rat_to_json).collect())
}

pub fn table_to_json(rows: &[Vec<Rational>]) -> Value {
    Value::Array(rows.iter().map(|r| rats_to_json(r)).collect())
}

pub fn rat_from_json(value: &Value) -> Result<Rational, FormatError> {
    match value {
        Value::String(s) => Ok(parse_rational(s)?),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(parse_rational(&n.to_string())?),
        other => Err(schema(format!(
            "expected an integer or a rational string, found {other}"
        ))),
    }
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value, FormatError> {
    obj.get(key)
        .ok_or_else(|| schema(format!("missing field {key:?}")))
}

fn array<'a>(value: &'a Value, what: &str) -> Result<&'a Vec<Value>, FormatError> {
    value
        .as_array()
        .ok_or_else(|| schema(format!("{what} must be an array")))
}

fn rat_list(value: &Value, what: &str) -> Result<Vec<Rational>, FormatError> {
    array(value, what)?.iter().map(rat_from_json).collect()
}

fn rat_table(value: &Value, what: &str) -> Result<Vec<Vec<Rational>>, FormatError> {
    array(value, what)?
        .iter()
        .map(|row| rat_list(row, what))
        .collect()
}

fn count(value: &Value, what: &str) -> Result<usize, FormatError> {
    value
        .as_u64()
        .map(|v| v as usize)
        .ok_or_else(|| schema(format!("{what} must be a non-negative integer")))
}

/// `{"n", "d", "theta", "f"}`.
pub fn instance_from_value(value: &Value) -> Result<Instance, FormatError> {
    let raw = RawInstance {
        n: count(field(value, "n")?, "n")?,
        d: count(field(value, "d")?, "d")?,
        theta: rat_table(field(value, "theta")?, "theta")?,
        f: rat_list(field(value, "f")?, "f")?,
    };
    Ok(validate_instance(raw)?)
}

pub fn instance_from_str(text: &str) -> Result<Instance, FormatError> {
    instance_from_value(&serde_json::from_str(text)?)
}

pub fn instance_to_json(inst: &Instance) -> Value {
    json!({
        "n": inst.n(),
        "d": inst.d(),
        "theta": table_to_json(inst.theta()),
        "f": rats_to_json(inst.f()),
    })
}

/// `{"q", "t"}`.
pub fn mechanism_from_value(value: &Value) -> Result<Mechanism, FormatError> {
    Ok(Mechanism::new(
        rat_table(field(value, "q")?, "q")?,
        rat_list(field(value, "t")?, "t")?,
    )?)
}

pub fn mechanism_from_str(text: &str) -> Result<Mechanism, FormatError> {
    mechanism_from_value(&serde_json::from_str(text)?)
}

pub fn mechanism_to_json(m: &Mechanism) -> Value {
    json!({ "q": table_to_json(&m.q), "t": rats_to_json(&m.t) })
}

/// `{"bundles", "prices"}` listing the offers other than the outside
/// option; a leading zero bundle at price zero is accepted and ignored.
pub fn menu_from_str(inst: &Instance, text: &str) -> Result<UpgradeMenu, FormatError> {
    let value: Value = serde_json::from_str(text)?;
    let bundles = rat_table(field(&value, "bundles")?, "bundles")?;
    let prices = rat_list(field(&value, "prices")?, "prices")?;
    Ok(UpgradeMenu::from_offers(inst, bundles, prices)?)
}

pub fn menu_to_json(menu: &UpgradeMenu) -> Value {
    json!({
        "bundles": table_to_json(&menu.bundles[1..]),
        "prices": rats_to_json(&menu.prices[1..]),
        "assignment": menu.assignment,
    })
}

/// `{"prices"}`.
pub fn prices_from_str(inst: &Instance, text: &str) -> Result<SeparatePrices, FormatError> {
    let value: Value = serde_json::from_str(text)?;
    let prices = rat_list(field(&value, "prices")?, "prices")?;
    if prices.len() != inst.d() {
        return Err(schema(format!(
            "{} prices for {} goods",
            prices.len(),
            inst.d()
        )));
    }
    Ok(SeparatePrices(prices))
}

pub fn prices_to_json(prices: &SeparatePrices) -> Value {
    json!({ "prices": rats_to_json(&prices.0) })
}

/// `{"lambda": [[j, i, value], ...]}` with `j` in `1..=n` and `i` in
/// `0..=n`; repeated edges add up.
pub fn flow_from_str(n: usize, text: &str) -> Result<Flow, FormatError> {
    let value: Value = serde_json::from_str(text)?;
    let mut entries = Vec::new();
    for entry in array(field(&value, "lambda")?, "lambda")? {
        let parts = array(entry, "flow entry")?;
        if parts.len() != 3 {
            return Err(schema("flow entries are [j, i, value] triples"));
        }
        let from = count(&parts[0], "flow source")?;
        let to = count(&parts[1], "flow target")?;
        if from == 0 || from > n || to > n {
            return Err(schema(format!(
                "flow entry [{from}, {to}] is outside the {n} types"
            )));
        }
        entries.push((from - 1, Node::from_label(to), rat_from_json(&parts[2])?));
    }
    Ok(Flow::from_entries(n, entries))
}

pub fn flow_to_json(flow: &Flow) -> Value {
    let entries: Vec<Value> = flow
        .entries()
        .iter()
        .map(|(j, to, v)| json!([j + 1, to.label(), format_rational(v)]))
        .collect();
    json!({ "lambda": entries })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::initial_flow;
    use crate::fixtures::{inst_b, inst_b_caption_mechanism};
    use crate::rational::{int, rat};

    const INST_B: &str = r#"{"n": 4, "d": 2,
        "theta": [["57/64", 1], [1, "5/4"], [2, 3], ["2.25", 5]],
        "f": ["0.375", "1/4", "1/8", "1/4"]}"#;

    #[test]
    fn instance_round_trip() {
        let inst = instance_from_str(INST_B).unwrap();
        assert_eq!(inst, inst_b());
        let again = instance_from_value(&instance_to_json(&inst)).unwrap();
        assert_eq!(again, inst);
        assert_eq!(instance_to_json(&inst)["theta"][0][0], "57/64");
    }

    #[test]
    fn instance_errors() {
        assert!(matches!(instance_from_str("{"), Err(FormatError::Json(_))));
        assert!(matches!(
            instance_from_str(r#"{"n": 1}"#),
            Err(FormatError::Schema(_))
        ));
        let bad_f = r#"{"n": 1, "d": 1, "theta": [[1]], "f": ["1/2"]}"#;
        assert!(matches!(
            instance_from_str(bad_f),
            Err(FormatError::Model(_))
        ));
        let bad_rat = r#"{"n": 1, "d": 1, "theta": [["x"]], "f": [1]}"#;
        assert!(matches!(
            instance_from_str(bad_rat),
            Err(FormatError::Rational(_))
        ));
        let float = r#"{"n": 1, "d": 1, "theta": [[0.5]], "f": [1]}"#;
        assert!(matches!(
            instance_from_str(float),
            Err(FormatError::Schema(_))
        ));
    }

    #[test]
    fn mechanism_round_trip() {
        let m = inst_b_caption_mechanism();
        let text = mechanism_to_json(&m).to_string();
        assert_eq!(mechanism_from_str(&text).unwrap(), m);
    }

    #[test]
    fn menu_and_prices() {
        let inst = inst_b();
        let menu = menu_from_str(
            &inst,
            r#"{"bundles": [[0, 0], [1, 0], [1, 1]], "prices": [0, "57/64", "377/64"]}"#,
        )
        .unwrap();
        assert_eq!(menu.assignment, vec![1, 1, 1, 2]);
        assert_eq!(menu_to_json(&menu)["prices"], json!(["57/64", "377/64"]));
        let p = prices_from_str(&inst, r#"{"prices": ["57/64", 5]}"#).unwrap();
        assert_eq!(p, SeparatePrices(vec![rat(57, 64), int(5)]));
        assert!(prices_from_str(&inst, r#"{"prices": [1]}"#).is_err());
    }

    #[test]
    fn flow_round_trip() {
        let flow = initial_flow(&inst_b());
        let value = flow_to_json(&flow);
        assert_eq!(value["lambda"][0], json!([1, 0, "1"]));
        assert_eq!(value["lambda"][1], json!([2, 1, "5/8"]));
        assert_eq!(flow_from_str(4, &value.to_string()).unwrap(), flow);
        assert!(flow_from_str(4, r#"{"lambda": [[0, 1, "1"]]}"#).is_err());
        assert!(flow_from_str(4, r#"{"lambda": [[5, 1, "1"]]}"#).is_err());
    }
}
