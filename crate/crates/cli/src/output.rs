//! Output directory bookkeeping and the run manifest.

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub struct Run {
    dir: PathBuf,
    command: &'static str,
    inputs: Map<String, Value>,
    derived: Map<String, Value>,
    outputs: BTreeMap<String, Value>,
}

impl Run {
    pub fn new(dir: PathBuf, command: &'static str, inputs: Map<String, Value>) -> Result<Self, CliError> {
        std::fs::create_dir_all(&dir)
            .map_err(|e| CliError::io(format!("cannot create output directory {}: {e}", dir.display())))?;
        Ok(Run {
            dir,
            command,
            inputs,
            derived: Map::new(),
            outputs: BTreeMap::new(),
        })
    }

    pub fn derive(&mut self, key: &str, value: impl Serialize) {
        self.derived
            .insert(key.to_string(), serde_json::to_value(value).unwrap_or(Value::Null));
    }

    /// Writes a file produced by `fill` and records its digest.
    pub fn write(
        &mut self,
        name: &str,
        fill: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>,
    ) -> Result<(), CliError> {
        let mut bytes = Vec::new();
        fill(&mut bytes).map_err(|e| CliError::io(format!("{name}: {e}")))?;
        let path = self.dir.join(name);
        std::fs::write(&path, &bytes).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.insert(
            name.to_string(),
            json!({ "sha256": hex(&Sha256::digest(&bytes)), "bytes": bytes.len() }),
        );
        Ok(())
    }

    pub fn write_json(&mut self, name: &str, value: &impl Serialize) -> Result<(), CliError> {
        self.write(name, |buf| {
            serde_json::to_writer_pretty(&mut *buf, value)?;
            buf.push(b'\n');
            Ok(())
        })
    }

    /// Writes `manifest.json`. It holds no timestamp, so identical runs
    /// produce identical manifests.
    pub fn finish(self) -> Result<(), CliError> {
        let grid_env = std::env::var(crate::config::GRID_ENV).ok();
        let manifest = json!({
            "tool": "chronoscope",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "inputs": self.inputs,
            "environment": { crate::config::GRID_ENV: grid_env },
            "derived": self.derived,
            "outputs": self.outputs,
        });
        let path = self.dir.join("manifest.json");
        let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        text.push('\n');
        std::fs::write(&path, text).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
