//! Deterministic result reports: a fixed text layout and a JSON mirror.
//!
//! JSON objects serialize with sorted keys, and every value is computed
//! from the instance alone, so identical input and flags always produce
//! byte-identical output.

use serde_json::{Map, Value};

pub struct Report {
    problem: &'static str,
    params: Vec<(&'static str, Value)>,
    objective: Value,
    witness_json: Vec<(&'static str, Value)>,
    witness_text: Vec<String>,
}

impl Report {
    pub fn new(problem: &'static str) -> Report {
        Report {
            problem,
            params: Vec::new(),
            objective: Value::Null,
            witness_json: Vec::new(),
            witness_text: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &'static str, value: impl Into<Value>) {
        self.params.push((key, value.into()));
    }

    pub fn objective(&mut self, value: impl Into<Value>) {
        self.objective = value.into();
    }

    /// One named witness component: a JSON field plus its text lines.
    pub fn witness(&mut self, key: &'static str, value: Value, lines: Vec<String>) {
        self.witness_json.push((key, value));
        self.witness_text.extend(lines);
    }

    /// Prints the report. The `verified` field is earned, not assumed: the
    /// caller re-checks the witness through core predicates and bails out
    /// before ever calling this on failure.
    pub fn print(&self, as_json: bool) {
        if as_json {
            let mut top = Map::new();
            top.insert("problem".into(), self.problem.into());
            top.insert("params".into(), object(&self.params));
            top.insert("objective".into(), self.objective.clone());
            top.insert("witness".into(), object(&self.witness_json));
            top.insert("verified".into(), true.into());
            println!("{}", pretty(&Value::Object(top)));
        } else {
            println!("problem: {}", self.problem);
            println!("params: {}", params_line(&self.params));
            println!("objective: {}", plain(&self.objective));
            for line in &self.witness_text {
                println!("{line}");
            }
            println!("verified: true");
        }
    }
}

/// Report for a problem without a solution under the given parameters,
/// such as a deletion budget that is too small.
pub fn print_infeasible(
    problem: &'static str,
    params: &[(&'static str, Value)],
    msg: &str,
    as_json: bool,
) {
    if as_json {
        let mut top = Map::new();
        top.insert("problem".into(), problem.into());
        top.insert("params".into(), object(params));
        top.insert("infeasible".into(), msg.into());
        println!("{}", pretty(&Value::Object(top)));
    } else {
        println!("problem: {problem}");
        println!("params: {}", params_line(params));
        println!("infeasible: {msg}");
    }
}

fn object(fields: &[(&'static str, Value)]) -> Value {
    let mut map = Map::new();
    for (k, v) in fields {
        map.insert((*k).into(), v.clone());
    }
    Value::Object(map)
}

fn params_line(params: &[(&'static str, Value)]) -> String {
    let parts: Vec<String> = params
        .iter()
        .map(|(k, v)| format!("{k}={}", plain(v)))
        .collect();
    parts.join(" ")
}

/// Strings without quotes, everything else as JSON.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("reports serialize")
}
