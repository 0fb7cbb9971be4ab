use std::fmt::Write;

use serde_json::{json, Value};

use hcon::evaluation::Evaluation;
use hcon::formulas::{Formula, Term};
use hcon::search::{InconsistencyCertificate, Origin, SearchStats};
use hcon::skolem::{SkolemRegistry, TermSet};

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Witness,
    Inconsistent,
    True,
    False,
    Budget,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Witness => "witness",
            Status::Inconsistent => "inconsistent",
            Status::True => "true",
            Status::False => "false",
            Status::Budget => "budget",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok | Status::Witness | Status::True => 0,
            Status::Inconsistent | Status::False => 1,
            Status::Budget => 3,
        }
    }
}

/// What a command prints: the same payload as text and as JSON.
pub struct Report {
    pub command: &'static str,
    pub status: Status,
    pub text: String,
    /// Command-specific fields, merged into the JSON envelope.
    pub fields: Value,
}

impl Report {
    pub fn json(&self) -> Value {
        let mut v = json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "status": self.status.name(),
        });
        if let (Some(out), Some(extra)) = (v.as_object_mut(), self.fields.as_object()) {
            for (k, x) in extra {
                out.insert(k.clone(), x.clone());
            }
        }
        v
    }
}

/// Renders terms and formulas with parameters by name.
pub struct Show<'a>(pub &'a SkolemRegistry);

impl Show<'_> {
    pub fn term(&self, t: &Term) -> String {
        self.0.show_term(t)
    }

    pub fn formula(&self, f: &Formula) -> String {
        self.0.show_formula(f)
    }

    pub fn terms(&self, ts: &TermSet) -> Vec<String> {
        ts.iter().map(|t| self.term(t)).collect()
    }

    pub fn evaluation(&self, e: &Evaluation) -> String {
        e.display_with(&|id| self.0.name_of(id))
    }

    pub fn symbols(&self) -> Value {
        let list: Vec<Value> = self
            .0
            .entries()
            .iter()
            .map(|e| match self.0.name_of(e.id) {
                Some(name) => json!({ "id": e.id.to_string(), "arity": e.arity, "parameter": name }),
                None => json!({ "id": e.id.to_string(), "arity": e.arity }),
            })
            .collect();
        Value::Array(list)
    }

    pub fn evaluation_json(&self, e: &Evaluation) -> Value {
        let classes: Vec<Vec<String>> =
            e.blocks().into_iter().map(|b| b.into_iter().map(|i| self.term(e.domain().get(i))).collect()).collect();
        json!({ "sequence": self.evaluation(e), "classes": classes })
    }

    pub fn certificate(&self, c: &InconsistencyCertificate, verified: Option<bool>) -> (String, Value) {
        let mut text = String::new();
        let method = format!("{:?}", c.method).to_lowercase();
        let _ = writeln!(text, "method: {method}");
        let _ = writeln!(
            text,
            "conflict core: {} of {} constraints over {} terms",
            c.conflict_core.len(),
            c.constraints.len(),
            c.core_domain.len()
        );
        let mut core = Vec::new();
        for con in c.core() {
            let (label, subst) = match &con.origin {
                Origin::Axiom { axiom, subst } => {
                    let s: Vec<String> = subst.iter().map(|(v, t)| format!("{v} := {}", self.term(t))).collect();
                    (format!("axiom {}", axiom + 1), s)
                }
                Origin::Extra => ("goal".to_string(), Vec::new()),
            };
            let f = self.formula(&con.formula);
            if subst.is_empty() {
                let _ = writeln!(text, "  [{label}] {f}");
            } else {
                let _ = writeln!(text, "  [{label}; {}] {f}", subst.join(", "));
            }
            core.push(json!({ "origin": label, "substitution": subst, "formula": f }));
        }
        let v = match verified {
            Some(true) => "yes",
            Some(false) => "NO",
            None => "skipped (core too large)",
        };
        let _ = writeln!(text, "core re-verified: {v}");
        let value = json!({
            "method": method,
            "constraints": c.constraints.len(),
            "core": core,
            "core_terms": self.terms(&c.core_domain),
            "verified": verified,
        });
        (text, value)
    }
}

pub fn stats_text(s: SearchStats) -> String {
    format!("nodes: {}, branches: {}\n", s.nodes, s.branches)
}

pub fn stats_json(s: SearchStats) -> Value {
    json!({ "nodes": s.nodes, "branches": s.branches })
}
