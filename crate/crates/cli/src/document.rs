//! The JSON document written for every invocation.

use std::collections::BTreeMap;

use dynatomic::{AlgebraicPoint, Error, ZeroCycle};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::parse::MapSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
    Degenerate,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Error => 1,
            Status::Degenerate => 2,
            Status::Inconclusive => 3,
        }
    }

    pub fn of_error(e: &Error) -> Status {
        match e {
            Error::Degenerate(_) => Status::Degenerate,
            Error::Inconclusive(_) | Error::TheoremViolation(_) => Status::Inconclusive,
            _ => Status::Error,
        }
    }

    /// The more severe of two statuses.
    pub fn worst(self, other: Status) -> Status {
        let rank = |s: Status| match s {
            Status::Ok => 0,
            Status::Inconclusive => 1,
            Status::Degenerate => 2,
            Status::Error => 3,
        };
        if rank(other) > rank(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub field: String,
    /// Ascending coefficients of the modulus for F_{p^k}.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub modulus: Option<Vec<u64>>,
    pub vars: Vec<String>,
    pub model: String,
    pub map: Vec<String>,
}

impl InputEcho {
    pub fn new(spec: &MapSpec) -> Self {
        InputEcho {
            field: spec.field.descriptor(),
            modulus: spec.field.galois().map(|g| g.modulus().to_vec()),
            vars: spec.vars.clone(),
            model: spec.model.to_string(),
            map: spec.map.coords().iter().map(|c| c.display_with(&spec.vars)).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub command: CommandEcho,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub input: Option<InputEcho>,
    pub outputs: BTreeMap<String, Value>,
    pub status: Status,
    pub diagnostics: Vec<String>,
}

impl ResultDocument {
    pub fn new(name: &str, args: &[String]) -> Self {
        ResultDocument {
            command: CommandEcho {
                name: name.into(),
                args: args.to_vec(),
            },
            input: None,
            outputs: BTreeMap::new(),
            status: Status::Ok,
            diagnostics: Vec::new(),
        }
    }

    pub fn put(&mut self, key: &str, v: Value) {
        self.outputs.insert(key.into(), v);
    }

    pub fn fail(&mut self, status: Status, message: impl Into<String>) {
        self.status = self.status.worst(status);
        self.diagnostics.push(message.into());
    }

    pub fn fail_with(&mut self, e: &Error) {
        self.fail(Status::of_error(e), e.to_string());
    }

    pub fn render(&self, pretty: bool) -> String {
        if pretty {
            serde_json::to_string_pretty(self).expect("serializable")
        } else {
            serde_json::to_string(self).expect("serializable")
        }
    }
}

/// A point as JSON; finite-field coordinates are ascending coefficient
/// vectors over the modulus of their field.
pub fn point_json(p: &AlgebraicPoint, var: &str) -> Value {
    match p {
        AlgebraicPoint::Rational(c) => json!({
            "kind": "rational",
            "coords": c.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }),
        AlgebraicPoint::Finite { field, coords } => json!({
            "kind": "finite",
            "field": field.to_string(),
            "coords": coords.iter().map(|&c| field.digits(c)).collect::<Vec<_>>(),
        }),
        AlgebraicPoint::Orbit(q) => json!({
            "kind": "orbit",
            "polynomial": q.to_string_with(var),
            "degree": q.degree().unwrap_or(0),
        }),
        AlgebraicPoint::Infinity => json!({ "kind": "infinity" }),
    }
}

pub fn cycle_json(c: &ZeroCycle, var: &str, periods: &BTreeMap<AlgebraicPoint, u64>) -> Value {
    let entries: Vec<Value> = c
        .entries()
        .map(|(p, m)| {
            let mut v = json!({ "point": point_json(p, var), "multiplicity": m });
            if let Some(per) = periods.get(p) {
                v["minimal_period"] = json!(per);
            }
            v
        })
        .collect();
    json!({
        "ambient": c.ambient().to_string(),
        "ext_cap": c.ext_cap(),
        "entries": entries,
        "total": c.total_degree(),
    })
}

/// Moduli of every extension field appearing among the points.
pub fn fields_json<'a>(points: impl Iterator<Item = &'a AlgebraicPoint>) -> Value {
    let mut out = BTreeMap::new();
    for p in points {
        if let AlgebraicPoint::Finite { field, .. } = p {
            out.insert(field.to_string(), json!(field.modulus()));
        }
    }
    json!(out)
}
