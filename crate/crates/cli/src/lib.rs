//! Command-line front end for `endodyn`: problem files, exact JSON output,
//! batch runs and seeded corpus generation.

pub mod batch;
pub mod commands;
pub mod generate;
pub mod problem;
pub mod wire;

use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use commands::{Command, Failure, Options, Outcome, EXIT_INVALID, EXIT_OK};
use problem::Problem;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// One run on one input, ready to be written as a JSON line.
#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub command: &'static str,
    pub input_digest: String,
    pub file: Option<String>,
    pub outcome: Result<Outcome, Failure>,
}

impl Record {
    pub fn exit_code(&self) -> i32 {
        match &self.outcome {
            Ok(_) => EXIT_OK,
            Err(f) => f.code,
        }
    }

    pub fn to_value(&self) -> Value {
        let mut m = Map::new();
        m.insert("tool_version".into(), json!(TOOL_VERSION));
        m.insert("command".into(), json!(self.command));
        m.insert("input_digest".into(), json!(self.input_digest));
        if let Some(f) = &self.file {
            m.insert("file".into(), json!(f));
        }
        match &self.outcome {
            Ok(o) => {
                m.insert("status".into(), json!("ok"));
                m.insert("result".into(), o.result.clone());
            }
            Err(e) => {
                m.insert("status".into(), json!("error"));
                m.insert("error".into(), e.to_value());
            }
        }
        Value::Object(m)
    }

    pub fn json_line(&self) -> String {
        wire::canonical(&self.to_value())
    }

    /// Short classification used by the batch summary.
    pub fn label(&self) -> String {
        let r = match &self.outcome {
            Ok(o) => &o.result,
            Err(f) => return format!("error:{}", f.kind),
        };
        let flag = |k: &str| r.get(k).and_then(Value::as_bool).unwrap_or(false);
        match self.command {
            "classify-abelian" => {
                let class = if flag("amplified") {
                    "amplified"
                } else if flag("pcd") {
                    "pcd"
                } else {
                    "not-pcd"
                };
                format!("{class}/{}", r["entropy"].as_str().unwrap_or("?"))
            }
            "classify-lattice" => format!("{}-entropy", r["entropy"].as_str().unwrap_or("?")),
            "descend-cone" => format!("{} contraction(s)", r["contractions"]),
            "poly-analyze" => if flag("is_reciprocal") { "reciprocal" } else { "not-reciprocal" }.to_string(),
            "salem-check" => r["verdict"].as_str().unwrap_or("?").to_string(),
            _ => "ok".to_string(),
        }
    }
}

/// A parsed machine-readable record.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope {
    pub tool_version: String,
    pub command: String,
    pub input_digest: String,
    pub file: Option<String>,
    /// `Ok(result)` or `Err(error)`.
    pub body: Result<Value, Value>,
}

impl Envelope {
    pub fn parse(line: &str) -> Result<Envelope, wire::InputError> {
        let v: Value = serde_json::from_str(line).map_err(|e| wire::InputError {
            line: Some(e.line()),
            field: "<document>".into(),
            message: e.to_string(),
        })?;
        let obj = v.as_object().ok_or_else(|| wire::InputError::new("<document>", "expected a JSON object"))?;
        let text = |k: &str| -> Result<String, wire::InputError> {
            wire::get(obj, k)?.as_str().map(str::to_owned).ok_or_else(|| wire::InputError::new(k, "expected a string"))
        };
        let body = match text("status")?.as_str() {
            "ok" => Ok(wire::get(obj, "result")?.clone()),
            "error" => Err(wire::get(obj, "error")?.clone()),
            s => return Err(wire::InputError::new("status", format!("unknown status `{s}`"))),
        };
        let file = obj
            .get("file")
            .map(|f| f.as_str().map(str::to_owned).ok_or_else(|| wire::InputError::new("file", "expected a string")))
            .transpose()?;
        let known = ["tool_version", "command", "input_digest", "file", "status", "result", "error"];
        if let Some(k) = obj.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(wire::InputError::new(k.clone(), "unknown field"));
        }
        Ok(Envelope {
            tool_version: text("tool_version")?,
            command: text("command")?,
            input_digest: text("input_digest")?,
            file,
            body,
        })
    }

    pub fn to_line(&self) -> String {
        let mut m = Map::new();
        m.insert("tool_version".into(), json!(self.tool_version));
        m.insert("command".into(), json!(self.command));
        m.insert("input_digest".into(), json!(self.input_digest));
        if let Some(f) = &self.file {
            m.insert("file".into(), json!(f));
        }
        match &self.body {
            Ok(r) => {
                m.insert("status".into(), json!("ok"));
                m.insert("result".into(), r.clone());
            }
            Err(e) => {
                m.insert("status".into(), json!("error"));
                m.insert("error".into(), e.clone());
            }
        }
        wire::canonical(&Value::Object(m))
    }
}

fn raw_digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Parses `text` and runs `cmd`, or the default command for its kind.
pub fn run_text(text: &str, cmd: Option<Command>, opts: &Options, file: Option<String>) -> Record {
    match Problem::parse(text) {
        Ok(p) => {
            let cmd = cmd.unwrap_or_else(|| Command::default_for(p.kind()));
            Record { command: cmd.name(), input_digest: p.digest(), file, outcome: commands::run(cmd, &p, opts) }
        }
        Err(e) => Record {
            command: cmd.map_or("batch", Command::name),
            input_digest: raw_digest(text),
            file,
            outcome: Err(Failure {
                code: EXIT_INVALID,
                kind: "invalid_input",
                message: e.to_string(),
                detail: Value::Null,
            }),
        },
    }
}

pub fn run_file(path: &Path, cmd: Option<Command>, opts: &Options, file: Option<String>) -> Record {
    match std::fs::read_to_string(path) {
        Ok(text) => run_text(&text, cmd, opts, file),
        Err(e) => Record {
            command: cmd.map_or("batch", Command::name),
            input_digest: raw_digest(""),
            file,
            outcome: Err(Failure {
                code: EXIT_INVALID,
                kind: "io",
                message: format!("{}: {e}", path.display()),
                detail: Value::Null,
            }),
        },
    }
}
