//! Run manifests: the parsed command line, resolved defaults, input hashes
//! and task fingerprints, enough to repeat a run exactly.

use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use widthdecomp::pddl::GroundedTask;

pub struct Manifest {
    command: Value,
    inputs: Vec<Value>,
    tasks: Vec<Value>,
    resolved: Map<String, Value>,
    outputs: Vec<String>,
    path: Option<PathBuf>,
}

impl Manifest {
    pub fn new(command: &impl Serialize) -> Self {
        Manifest {
            command: serde_json::to_value(command).unwrap_or(Value::Null),
            inputs: Vec::new(),
            tasks: Vec::new(),
            resolved: Map::new(),
            outputs: Vec::new(),
            path: None,
        }
    }

    pub fn input(&mut self, path: &Path, content: &str) {
        let digest = Sha256::digest(content.as_bytes());
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(json!({ "path": path.display().to_string(), "sha256": hex }));
    }

    pub fn task(&mut self, task: &GroundedTask) {
        self.tasks.push(json!({ "name": task.name, "fingerprint": task.fingerprint() }));
    }

    pub fn resolved(&mut self, key: &str, value: impl Serialize) {
        self.resolved.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    pub fn output(&mut self, path: &Path) {
        let p = path.display().to_string();
        if !self.outputs.contains(&p) {
            self.outputs.push(p);
        }
    }

    pub fn default_path(&mut self, path: PathBuf) {
        self.path = Some(path);
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    pub fn to_json(&self) -> String {
        let v = json!({
            "tool": "widthdecomp",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "inputs": self.inputs,
            "tasks": self.tasks,
            "resolved": self.resolved,
            "outputs": self.outputs,
        });
        serde_json::to_string_pretty(&v).expect("manifest serializes") + "\n"
    }
}
