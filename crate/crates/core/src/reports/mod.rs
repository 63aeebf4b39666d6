//! Classification and invariant reports, plus the command-line front end.

mod citations;
mod classify;
pub mod cli;
mod markdown;

pub use citations::{lookup, Citation, REGISTRY};
pub use classify::{classify_curve, ClassificationReport, Coherence, Embedding};
pub use cli::run_cli;
pub use markdown::to_markdown;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::ideal::krull_dimension;
use crate::ring::RingPresentation;

/// Report schema version.
pub const SCHEMA: &str = "perfchar/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Computed,
    Cited,
}

/// A reported value, labeled with where it comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Cited {
    pub value: Value,
    pub source: Provenance,
    /// Registry tag; present exactly when `source` is `cited`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub citation: Option<&'static str>,
}

impl Cited {
    pub fn computed(v: usize) -> Self {
        Cited {
            value: Value::from(v),
            source: Provenance::Computed,
            citation: None,
        }
    }

    pub fn cited(v: usize, tag: &'static str) -> Self {
        Self::cited_value(Value::from(v), tag)
    }

    pub fn text(v: &str, tag: &'static str) -> Self {
        Self::cited_value(Value::from(v), tag)
    }

    fn cited_value(value: Value, tag: &'static str) -> Self {
        debug_assert!(lookup(tag).is_some(), "unregistered tag {tag}");
        Cited {
            value,
            source: Provenance::Cited,
            citation: Some(tag),
        }
    }

    pub fn as_u64(&self) -> Option<u64> {
        self.value.as_u64()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantRow {
    pub name: &'static str,
    #[serde(flatten)]
    pub entry: Cited,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantTable {
    pub ring: String,
    pub rows: Vec<InvariantRow>,
}

impl InvariantTable {
    pub fn get(&self, name: &str) -> Option<&Cited> {
        self.rows.iter().find(|r| r.name == name).map(|r| &r.entry)
    }
}

/// `x·y` (up to a unit) in two variables.
fn is_node(r: &RingPresentation) -> bool {
    if r.vars().len() != 2 || r.relations().len() != 1 {
        return false;
    }
    let rel = &r.relations()[0];
    let (Ok(x), Ok(y)) = (r.var(&r.vars()[0]), r.var(&r.vars()[1])) else {
        return false;
    };
    let xy = &x * &y;
    match rel.terms() {
        [(m, c)] => *c != 0 && xy.terms()[0].0 == *m,
        _ => false,
    }
}

pub fn invariant_table(r: &RingPresentation) -> Result<InvariantTable> {
    let d = krull_dimension(&r.level(0).ideal(Vec::new())?)?
        .ok_or_else(|| Error::Invalid("the presentation defines the zero ring".into()))?;
    let mut rows = vec![
        InvariantRow {
            name: "dim",
            entry: Cited::computed(d),
        },
        InvariantRow {
            name: "gl_dim_bound",
            entry: Cited::cited(2 * d + 1, "gldim-upper-bound"),
        },
    ];
    let exact: Option<(usize, usize, bool, &'static str, &'static str)> = if d == 0 {
        Some((0, 0, true, "zero-dim-coherent", "zero-dim-coherent"))
    } else if is_node(r) {
        Some((3, 2, false, "node-invariants", "node-invariants"))
    } else if r.relations().is_empty() {
        Some((d + 1, d, true, "gldim-coherent", "wdim-coherent"))
    } else {
        None
    };
    if let Some((gl, w, coherent, gl_tag, w_tag)) = exact {
        rows.push(InvariantRow {
            name: "coherent",
            entry: Cited::cited_value(Value::Bool(coherent), gl_tag),
        });
        rows.push(InvariantRow {
            name: "gl_dim",
            entry: Cited::cited(gl, gl_tag),
        });
        rows.push(InvariantRow {
            name: "w_dim",
            entry: Cited::cited(w, w_tag),
        });
    }
    Ok(InvariantTable {
        ring: r.to_string(),
        rows,
    })
}

/// Every `cited` entry anywhere in `v` names a registered tag.
pub fn citations_registered(v: &Value) -> bool {
    match v {
        Value::Object(map) => {
            let ok_here = match (map.get("source"), map.get("citation")) {
                (Some(Value::String(s)), Some(Value::String(tag))) if s == "cited" => lookup(tag).is_some(),
                (Some(Value::String(s)), None) if s == "cited" => false,
                (Some(Value::String(s)), Some(_)) if s == "computed" => false,
                _ => true,
            };
            ok_here && map.values().all(citations_registered)
        }
        Value::Array(a) => a.iter().all(citations_registered),
        _ => true,
    }
}
