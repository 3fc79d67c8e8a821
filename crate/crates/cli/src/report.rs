//! JSON report envelope. Keys are sorted and output is compact, so equal
//! inputs give byte-identical reports.

use omegares::rational::format_rat;
use omegares::{LassoWord, Limits, ParityAutomaton, Rat};
use serde_json::{json, Value};

use crate::doc::{write_automaton, write_lasso};
use crate::error::CliError;

/// Outcome of one command: a JSON result object and its text rendering.
#[derive(Debug, Clone)]
pub struct Report {
    pub result: Value,
    pub text: String,
}

/// Flag values echoed in every report.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub max_product_states: usize,
    pub max_subset_search: usize,
    pub max_dag_colors: usize,
    pub deadline_seconds: Option<f64>,
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        let l = Limits::default();
        Settings {
            max_product_states: l.max_product_states,
            max_subset_search: l.max_subset_search,
            max_dag_colors: l.max_dag_colors,
            deadline_seconds: None,
            seed: 0,
        }
    }
}

impl Settings {
    fn json(&self) -> Value {
        json!({
            "max_product_states": self.max_product_states,
            "max_subset_search": self.max_subset_search,
            "max_dag_colors": self.max_dag_colors,
            "deadline_seconds": self.deadline_seconds,
            "seed": self.seed,
        })
    }
}

pub fn success(command: &str, settings: &Settings, result: Value) -> String {
    json!({"status": "ok", "command": command, "limits": settings.json(), "result": result}).to_string()
}

pub fn failure(command: Option<&str>, settings: &Settings, e: &CliError) -> String {
    json!({
        "status": "error",
        "command": command,
        "limits": settings.json(),
        "error": {"kind": e.kind(), "exit_code": e.exit_code(), "message": e.to_string()},
    })
    .to_string()
}

pub fn rat(r: &Rat) -> Value {
    Value::String(format_rat(r))
}

pub fn lasso(w: &LassoWord, a: &ParityAutomaton) -> Value {
    Value::String(write_lasso(w, a.alphabet()))
}

pub fn automaton(a: &ParityAutomaton) -> Value {
    Value::String(write_automaton(a))
}
