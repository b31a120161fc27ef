//! Canonical line-oriented JSON serialization of instances and valuations:
//! one object per variable/constraint line, stable field order, suitable for
//! fixtures and the command-line tools.

use std::collections::BTreeMap;

use super::{Instance, ModelError, Valuation};

/// Serializes an instance with one JSON object per variable/constraint line.
pub fn instance_to_json(instance: &Instance) -> String {
    let mut out = String::new();
    out.push_str("{\"vars\":[\n");
    for (i, v) in instance.vars.iter().enumerate() {
        out.push_str(&serde_json::to_string(v).expect("var serializes"));
        if i + 1 < instance.vars.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push_str("],\n\"constraints\":[\n");
    for (i, c) in instance.constraints.iter().enumerate() {
        out.push_str(&serde_json::to_string(c).expect("constraint serializes"));
        if i + 1 < instance.constraints.len() {
            out.push(',');
        }
        out.push('\n');
    }
    out.push(']');
    if !instance.metadata.is_empty() {
        out.push_str(",\n\"metadata\":");
        out.push_str(&serde_json::to_string(&instance.metadata).expect("metadata serializes"));
    }
    out.push_str("}\n");
    out
}

/// Parses an instance serialized by [`instance_to_json`] (any JSON layout
/// with the same fields is accepted) and validates it.
pub fn instance_from_json(text: &str) -> Result<Instance, ModelError> {
    let inst: Instance =
        serde_json::from_str(text).map_err(|_| ModelError::NonBooleanConstraint)?;
    inst.validate()?;
    Ok(inst)
}

/// Serializes a valuation as `{"assignment":{name:value,...}}` with keys in
/// sorted order.
pub fn valuation_to_json(instance: &Instance, valuation: &Valuation) -> String {
    let map: BTreeMap<&str, i64> = instance
        .vars
        .iter()
        .map(|v| (v.name.as_str(), valuation.value(v.id).unwrap_or(0)))
        .collect();
    let mut doc = BTreeMap::new();
    doc.insert("assignment", map);
    serde_json::to_string(&doc).expect("valuation serializes")
}

/// Parses a valuation document against its instance.
pub fn valuation_from_json(instance: &Instance, text: &str) -> Result<Valuation, ModelError> {
    #[derive(serde::Deserialize)]
    struct Doc {
        assignment: BTreeMap<String, i64>,
    }
    let doc: Doc = serde_json::from_str(text).map_err(|_| ModelError::PartialValuation)?;
    let mut values = Vec::with_capacity(instance.vars.len());
    for v in &instance.vars {
        match doc.assignment.get(&v.name) {
            Some(&x) => values.push(x),
            None => return Err(ModelError::PartialValuation),
        }
    }
    Valuation::new(instance, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::{CmpOp, Domain, Expr, VarId};

    fn sample() -> Instance {
        Instance::from_domains(
            vec![
                ("x", Domain::IntRange { low: 1, high: 3 }),
                ("b", Domain::Bool),
            ],
            vec![Expr::cmp(CmpOp::Le, Expr::var(VarId(0)), Expr::Int(2))],
        )
    }

    #[test]
    fn instance_round_trips_line_oriented() {
        let inst = sample();
        let text = instance_to_json(&inst);
        // one object per variable/constraint line
        assert!(text.lines().any(|l| l.starts_with("{\"id\":0")));
        let back = instance_from_json(&text).unwrap();
        assert_eq!(inst, back);
    }

    #[test]
    fn valuation_round_trips() {
        let inst = sample();
        let v = Valuation::new(&inst, vec![2, 1]).unwrap();
        let text = valuation_to_json(&inst, &v);
        assert!(text.contains("\"assignment\""));
        let back = valuation_from_json(&inst, &text).unwrap();
        assert_eq!(v, back);
    }

    #[test]
    fn valuation_outside_domain_rejected() {
        let inst = sample();
        let text = "{\"assignment\":{\"x\":9,\"b\":0}}";
        assert!(valuation_from_json(&inst, text).is_err());
    }
}
