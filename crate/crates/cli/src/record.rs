//! Result records and their JSON Lines / CSV serialization.

use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub schema: u32,
    pub command: String,
    pub version: String,
    pub config_hash: String,
    pub inputs: Map<String, Value>,
    pub outputs: Map<String, Value>,
    /// None when a check was skipped.
    pub pass: Option<bool>,
    pub timing_ms: f64,
}

impl ResultRecord {
    pub fn new(command: &str, config_hash: &str) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config_hash: config_hash.to_string(),
            inputs: Map::new(),
            outputs: Map::new(),
            pass: Some(true),
            timing_ms: 0.0,
        }
    }

    pub fn input(mut self, key: &str, value: impl Serialize) -> Self {
        self.inputs.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable input"),
        );
        self
    }

    pub fn output(mut self, key: &str, value: impl Serialize) -> Self {
        self.outputs.insert(
            key.to_string(),
            serde_json::to_value(value).expect("serializable output"),
        );
        self
    }

    /// Merges every field of a serializable struct into the outputs.
    pub fn outputs_from(mut self, value: impl Serialize) -> Self {
        if let Value::Object(map) = serde_json::to_value(value).expect("serializable report") {
            self.outputs.extend(map);
        }
        self
    }

    fn key_int(&self, key: &str) -> i128 {
        match self.inputs.get(key) {
            Some(Value::Number(n)) => n
                .as_i64()
                .map(i128::from)
                .or_else(|| n.as_u64().map(i128::from))
                .unwrap_or(0),
            _ => 0,
        }
    }

    /// Canonical ordering key (q, r, M).
    pub fn sort_key(&self) -> (i128, i128, i128) {
        (self.key_int("q"), self.key_int("r"), self.key_int("M"))
    }

    /// Flattened `section.key` columns with scalar string values.
    pub fn flatten(&self) -> Vec<(String, String)> {
        let mut cols = vec![
            ("schema".to_string(), self.schema.to_string()),
            ("command".to_string(), self.command.clone()),
            ("version".to_string(), self.version.clone()),
            ("config_hash".to_string(), self.config_hash.clone()),
        ];
        flatten_into("inputs", &Value::Object(self.inputs.clone()), &mut cols);
        flatten_into("outputs", &Value::Object(self.outputs.clone()), &mut cols);
        cols.push((
            "pass".to_string(),
            self.pass.map(|p| p.to_string()).unwrap_or_default(),
        ));
        cols.push(("timing_ms".to_string(), format!("{}", self.timing_ms)));
        cols
    }
}

fn flatten_into(prefix: &str, value: &Value, out: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                flatten_into(&format!("{prefix}.{k}"), v, out);
            }
        }
        Value::Null => out.push((prefix.to_string(), String::new())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// Sorts by (q, r, M) and writes every record.
pub fn emit(
    mut records: Vec<ResultRecord>,
    format: Format,
    mut w: impl Write,
) -> std::io::Result<()> {
    records.sort_by_key(|r| r.sort_key());
    match format {
        Format::Json => {
            for r in &records {
                serde_json::to_writer(&mut w, r)?;
                writeln!(w)?;
            }
        }
        Format::Csv => {
            let flat: Vec<Vec<(String, String)>> = records.iter().map(|r| r.flatten()).collect();
            let mut header: Vec<String> = Vec::new();
            for row in &flat {
                for (k, _) in row {
                    if !header.contains(k) {
                        header.push(k.clone());
                    }
                }
            }
            let mut csv = csv::Writer::from_writer(&mut w);
            csv.write_record(&header)?;
            for row in &flat {
                let line: Vec<&str> = header
                    .iter()
                    .map(|h| {
                        row.iter()
                            .find(|(k, _)| k == h)
                            .map(|(_, v)| v.as_str())
                            .unwrap_or("")
                    })
                    .collect();
                csv.write_record(&line)?;
            }
            csv.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(q: u64, r: u32, m: i64) -> ResultRecord {
        ResultRecord::new("sum", "abc")
            .input("q", q)
            .input("r", r)
            .input("M", m)
            .output("nested", serde_json::json!({"a": 1, "b": [1, 2]}))
            .output("none", Option::<u64>::None)
    }

    #[test]
    fn round_trip() {
        let rec = sample(101, 2, -3);
        let text = serde_json::to_string(&rec).unwrap();
        let back: ResultRecord = serde_json::from_str(&text).unwrap();
        assert_eq!(rec, back);
        assert!(text.contains("\"schema\":1"));
    }

    #[test]
    fn flattening() {
        let cols = sample(101, 2, 0).flatten();
        let keys: Vec<&str> = cols.iter().map(|(k, _)| k.as_str()).collect();
        assert!(keys.contains(&"outputs.nested.a"));
        assert!(keys.contains(&"outputs.nested.b"));
        assert!(keys.contains(&"inputs.q"));
        let b = cols.iter().find(|(k, _)| k == "outputs.nested.b").unwrap();
        assert_eq!(b.1, "[1,2]");
    }

    #[test]
    fn ordering() {
        let mut out = Vec::new();
        emit(
            vec![
                sample(1009, 2, 0),
                sample(101, 3, 0),
                sample(101, 2, 5),
                sample(101, 2, -1),
            ],
            Format::Json,
            &mut out,
        )
        .unwrap();
        let keys: Vec<(i128, i128, i128)> = String::from_utf8(out)
            .unwrap()
            .lines()
            .map(|l| serde_json::from_str::<ResultRecord>(l).unwrap().sort_key())
            .collect();
        assert_eq!(
            keys,
            vec![(101, 2, -1), (101, 2, 5), (101, 3, 0), (1009, 2, 0)]
        );
    }
}
