use std::cell::RefCell;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliResult;

pub const TOOL: &str = "foilspace";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Where a run writes, and the provenance stamped into every file.
pub struct RunContext {
    pub out: PathBuf,
    pub seed: u64,
    pub config_hash: String,
    pub command: String,
    written: RefCell<Vec<String>>,
}

pub fn config_hash(seed: u64, command: &impl Serialize) -> String {
    let canonical = json!({
        "tool": TOOL,
        "version": VERSION,
        "seed": seed,
        "command": command,
    });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

impl RunContext {
    pub fn new(out: PathBuf, seed: u64, config_hash: String, command: &str) -> CliResult<Self> {
        std::fs::create_dir_all(&out)?;
        Ok(Self {
            out,
            seed,
            config_hash,
            command: command.to_string(),
            written: RefCell::new(Vec::new()),
        })
    }

    /// Registers `name` as an artifact and returns its path.
    pub fn path(&self, name: &str) -> PathBuf {
        self.written.borrow_mut().push(name.to_string());
        self.out.join(name)
    }

    pub fn written(&self) -> Vec<String> {
        let mut names = self.written.borrow().clone();
        names.sort();
        names.dedup();
        names
    }

    /// CSV header comments: provenance first, then `extra`.
    pub fn comments(&self, extra: &[String]) -> Vec<String> {
        let mut out = vec![
            format!("tool={TOOL} {VERSION}"),
            format!("command={}", self.command),
            format!("seed={}", self.seed),
            format!("config={}", self.config_hash),
        ];
        out.extend_from_slice(extra);
        out
    }

    pub fn meta(&self) -> Value {
        json!({
            "tool": TOOL,
            "version": VERSION,
            "command": self.command,
            "seed": self.seed,
            "config_hash": self.config_hash,
        })
    }

    /// Writes `{"meta": ..., <body fields>}` as pretty JSON.
    pub fn write_json(&self, name: &str, body: Value) -> CliResult<PathBuf> {
        let mut doc = serde_json::Map::new();
        doc.insert("meta".into(), self.meta());
        match body {
            Value::Object(map) => doc.extend(map),
            other => {
                doc.insert("data".into(), other);
            }
        }
        let path = self.path(name);
        let mut text = serde_json::to_string_pretty(&Value::Object(doc))?;
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }

    pub fn write_text(&self, name: &str, text: &str) -> CliResult<PathBuf> {
        let path = self.path(name);
        let mut body = format!(
            "# {TOOL} {VERSION} seed={} config={}\n",
            self.seed, self.config_hash
        );
        body.push_str(text);
        std::fs::write(&path, body)?;
        Ok(path)
    }
}

pub fn display(path: &Path) -> String {
    path.display().to_string()
}
