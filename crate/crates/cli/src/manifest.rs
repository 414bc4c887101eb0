//! Run manifests: every file the tool writes is accompanied by a
//! `<output>.manifest.json` recording the subcommand, its parameters, the
//! sha256 of every input file, and all outputs of the run. Re-running the
//! recorded invocation reproduces the outputs bitwise.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Serialize)]
struct RunManifest<'a> {
    tool_version: &'a str,
    subcommand: &'a str,
    params: &'a [String],
    inputs: &'a BTreeMap<String, String>,
    outputs: &'a [String],
}

/// Collects input digests and output paths over one invocation.
pub struct RunContext {
    subcommand: String,
    params: Vec<String>,
    inputs: BTreeMap<String, String>,
    outputs: Vec<(PathBuf, String)>,
}

impl RunContext {
    pub fn new(subcommand: &str) -> Self {
        Self {
            subcommand: subcommand.to_string(),
            params: std::env::args().skip(1).collect(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    /// Reads an input file, recording its digest.
    pub fn read_input(&mut self, path: &Path) -> Result<String> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.insert(path.display().to_string(), hex);
        String::from_utf8(bytes).with_context(|| format!("{} is not utf-8", path.display()))
    }

    /// Queues an output file; written together with its manifest by `finish`.
    pub fn stage_output(&mut self, path: &Path, content: String) {
        self.outputs.push((path.to_path_buf(), content));
    }

    /// Writes all staged outputs, then one manifest alongside each.
    pub fn finish(self) -> Result<()> {
        let output_names: Vec<String> = self
            .outputs
            .iter()
            .map(|(p, _)| p.display().to_string())
            .collect();
        for (path, content) in &self.outputs {
            fs::write(path, content).with_context(|| format!("writing {}", path.display()))?;
        }
        let manifest = RunManifest {
            tool_version: env!("CARGO_PKG_VERSION"),
            subcommand: &self.subcommand,
            params: &self.params,
            inputs: &self.inputs,
            outputs: &output_names,
        };
        let mut text = serde_json::to_string_pretty(&manifest).expect("serializable manifest");
        text.push('\n');
        for (path, _) in &self.outputs {
            let mut manifest_path = path.as_os_str().to_owned();
            manifest_path.push(".manifest.json");
            let manifest_path = PathBuf::from(manifest_path);
            fs::write(&manifest_path, &text)
                .with_context(|| format!("writing {}", manifest_path.display()))?;
        }
        Ok(())
    }
}
