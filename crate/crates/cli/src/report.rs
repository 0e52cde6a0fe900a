use std::fmt::Write as _;
use std::process::ExitCode;

use serde::Serialize;
use serde_json::{Map, Value};

use monosync::oracle::SearchStats;
use monosync::Word;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Ok,
    No,
    BudgetExceeded,
    Error,
}

impl Status {
    pub fn exit_code(self) -> ExitCode {
        ExitCode::from(match self {
            Status::Ok => 0,
            Status::No => 1,
            Status::Error => 2,
            Status::BudgetExceeded => 3,
        })
    }

    fn label(self) -> &'static str {
        match self {
            Status::Ok => "OK",
            Status::No => "NO",
            Status::BudgetExceeded => "BUDGET_EXCEEDED",
            Status::Error => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessOut {
    pub letters: Vec<usize>,
    pub rendered: String,
    pub length: usize,
}

impl WitnessOut {
    pub fn new(w: &Word, names: Option<&[String]>) -> Self {
        WitnessOut {
            letters: w.letters().to_vec(),
            rendered: w.render(names),
            length: w.len(),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct BudgetOut {
    pub nodes: usize,
    pub bytes: usize,
}

impl From<SearchStats> for BudgetOut {
    fn from(s: SearchStats) -> Self {
        BudgetOut {
            nodes: s.nodes,
            bytes: s.bytes,
        }
    }
}

/// Outcome of one invocation. JSON keys are stable: `command`, `status`,
/// `witness`, `details`, `budget`, `error`, and `elapsed_ms` when timing
/// was requested.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub witness: Option<WitnessOut>,
    pub details: Map<String, Value>,
    pub budget: Option<BudgetOut>,
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
    /// Raw text output (automaton files); printed verbatim in text mode.
    #[serde(skip)]
    pub text: Option<String>,
}

impl RunReport {
    pub fn new(command: impl Into<String>, status: Status) -> Self {
        RunReport {
            command: command.into(),
            status,
            witness: None,
            details: Map::new(),
            budget: None,
            error: None,
            elapsed_ms: None,
            text: None,
        }
    }

    pub fn error(command: impl Into<String>, status: Status, message: String) -> Self {
        let mut r = RunReport::new(command, status);
        r.error = Some(message);
        r
    }

    pub fn detail(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.details.insert(key.to_string(), value.into());
        self
    }

    pub fn with_witness(mut self, w: &Word, names: Option<&[String]>) -> Self {
        self.witness = Some(WitnessOut::new(w, names));
        self
    }

    pub fn with_stats(mut self, s: SearchStats) -> Self {
        self.budget = Some(s.into());
        self
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        if let (Some(text), Value::Object(obj)) = (&self.text, &mut v) {
            if let Some(Value::Object(d)) = obj.get_mut("details") {
                d.insert("text".into(), Value::String(text.clone()));
            }
        }
        serde_json::to_string_pretty(&v).expect("report serializes")
    }

    /// Human-readable form. Reports that carry file text print only that
    /// text when the command succeeded, so the output can be redirected.
    pub fn to_human(&self) -> String {
        if let (Some(text), Status::Ok, true) = (&self.text, self.status, self.details.is_empty()) {
            return text.clone();
        }
        let mut out = String::new();
        let _ = writeln!(out, "status: {}", self.status.label());
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        if let Some(w) = &self.witness {
            let shown = if w.length == 0 { "(empty)" } else { &w.rendered };
            let _ = writeln!(out, "witness: {shown}");
            let _ = writeln!(out, "length: {}", w.length);
        }
        for (k, v) in &self.details {
            let shown = match v {
                Value::String(s) => s.clone(),
                Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(" "),
                other => other.to_string(),
            };
            let _ = writeln!(out, "{k}: {shown}");
        }
        if let Some(b) = &self.budget {
            let _ = writeln!(out, "search nodes: {}", b.nodes);
            let _ = writeln!(out, "search bytes: {}", b.bytes);
        }
        if let Some(ms) = self.elapsed_ms {
            let _ = writeln!(out, "elapsed ms: {ms:.3}");
        }
        if let Some(text) = &self.text {
            out.push('\n');
            out.push_str(text);
        }
        out
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(" ")),
        other => other.to_string(),
    }
}
