//! Report envelope and its JSON / CSV renderings.
//!
//! The digest is sha256 over the compact JSON of the envelope without the
//! `timestamp` and `digest` fields. Object keys are sorted, so two runs with
//! the same inputs agree on every byte except the timestamp.

use std::io::Write;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use time::format_description::well_known::Rfc3339;
use time::OffsetDateTime;

use crate::commands::{Output, Table};
use crate::config::{Format, JobConfig};
use crate::CliError;

pub const TOOL: &str = "cfspectra";

pub struct Report {
    pub envelope: Map<String, Value>,
    pub table: Table,
}

pub fn digest_of(envelope: &Map<String, Value>) -> String {
    let mut body = envelope.clone();
    body.remove("timestamp");
    body.remove("digest");
    let text = serde_json::to_string(&Value::Object(body)).expect("json value serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl Report {
    pub fn new(cfg: &JobConfig, out: Output) -> Report {
        let mut envelope = Map::new();
        envelope.insert("tool".into(), json!(TOOL));
        envelope.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        envelope.insert("command".into(), json!(cfg.command));
        envelope.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
        envelope.insert("provenance".into(), out.provenance);
        envelope.insert("results".into(), out.results);
        envelope.insert("status".into(), json!(if out.undecided { "undecided" } else { "ok" }));
        let digest = digest_of(&envelope);
        envelope.insert("digest".into(), json!(digest));
        let now = OffsetDateTime::now_utc().format(&Rfc3339).unwrap_or_default();
        envelope.insert("timestamp".into(), json!(now));
        Report { envelope, table: out.table }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.envelope).expect("json value serializes");
        s.push('\n');
        s
    }

    /// `# key: value` header lines, then the table with a header row.
    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut out = Vec::new();
        for key in ["tool", "version", "command", "status", "digest", "timestamp", "config", "provenance"] {
            let v = &self.envelope[key];
            let text = match v {
                Value::String(s) => s.clone(),
                v => v.to_string(),
            };
            writeln!(out, "# {key}: {text}").expect("write to memory");
        }
        let mut w = csv::Writer::from_writer(out);
        let fail = |e: csv::Error| CliError::Input(format!("csv output: {e}"));
        w.write_record(&self.table.header).map_err(fail)?;
        for row in &self.table.rows {
            w.write_record(row).map_err(fail)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Input(format!("csv output: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn write(&self, cfg: &JobConfig) -> Result<(), CliError> {
        let text = match cfg.format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv()?,
        };
        match &cfg.output {
            Some(path) => std::fs::write(path, text).map_err(|e| CliError::Input(format!("cannot write {path}: {e}"))),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(text.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| CliError::Input(format!("cannot write output: {e}")))
            }
        }
    }
}
