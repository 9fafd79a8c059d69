use serde_json::{json, Value};

use crate::error::{Error, Result};

/// JSON-level description of a field.
///
/// `{"kind":"Q"}`, `{"kind":"GF","p":5,"k":1}` or
/// `{"kind":"GF","p":2,"k":2,"modulus":[1,1,1]}` (modulus lowest degree first).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldDescriptor {
    Rationals,
    Galois {
        p: u64,
        k: u32,
        modulus: Option<Vec<u64>>,
    },
}

impl FieldDescriptor {
    pub fn to_json(&self) -> Value {
        match self {
            FieldDescriptor::Rationals => json!({"kind": "Q"}),
            FieldDescriptor::Galois { p, k, modulus: None } => json!({"kind": "GF", "p": p, "k": k}),
            FieldDescriptor::Galois {
                p,
                k,
                modulus: Some(m),
            } => json!({"kind": "GF", "p": p, "k": k, "modulus": m}),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("field descriptor must be an object".into()))?;
        let kind = obj
            .get("kind")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("field descriptor needs a string \"kind\"".into()))?;
        match kind {
            "Q" => Ok(FieldDescriptor::Rationals),
            "GF" => {
                let p = obj
                    .get("p")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| Error::Parse("GF descriptor needs an integer \"p\"".into()))?;
                let k = match obj.get("k") {
                    None => 1,
                    Some(v) => v
                        .as_u64()
                        .and_then(|k| u32::try_from(k).ok())
                        .ok_or_else(|| Error::Parse("\"k\" must be a positive integer".into()))?,
                };
                if k == 0 {
                    return Err(Error::Parse("\"k\" must be at least 1".into()));
                }
                let modulus = match obj.get("modulus") {
                    None | Some(Value::Null) => None,
                    Some(Value::Array(items)) => Some(
                        items
                            .iter()
                            .map(|c| {
                                c.as_u64().ok_or_else(|| {
                                    Error::Parse("modulus coefficients must be non-negative integers".into())
                                })
                            })
                            .collect::<Result<Vec<_>>>()?,
                    ),
                    Some(_) => return Err(Error::Parse("\"modulus\" must be an array".into())),
                };
                Ok(FieldDescriptor::Galois { p, k, modulus })
            }
            other => Err(Error::Parse(format!("unknown field kind {other:?}"))),
        }
    }
}
