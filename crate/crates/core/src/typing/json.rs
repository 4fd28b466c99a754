use serde_json::{json, Map, Value};

use super::Derivation;
use crate::types::Hypersequent;

/// One object per sequent mapping names to type text; sequents are ordered
/// by their least name and keys are sorted, so equal types print equally.
pub fn hypersequent_json(hs: &Hypersequent) -> Value {
    Value::Array(
        hs.sequents()
            .iter()
            .map(|s| {
                let obj: Map<String, Value> =
                    s.iter().map(|(n, a)| (n.to_string(), Value::String(a.to_string()))).collect();
                Value::Object(obj)
            })
            .collect(),
    )
}

/// `{rule, conclusion: {process, type}, premises: [...]}`
pub fn derivation_json(d: &Derivation) -> Value {
    json!({
        "rule": d.rule.name(),
        "conclusion": {
            "process": d.process().to_string(),
            "type": hypersequent_json(d.hypersequent()),
        },
        "premises": d.premises.iter().map(derivation_json).collect::<Vec<_>>(),
    })
}
