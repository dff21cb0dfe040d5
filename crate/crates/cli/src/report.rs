use std::collections::BTreeMap;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::spec::{ExperimentSpec, Format, Kind};

pub const SCHEMA: u32 = 1;

/// An exact count or a real-valued measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Value {
    Int(u64),
    Real(f64),
}

impl Value {
    pub fn as_f64(self) -> f64 {
        match self {
            Value::Int(n) => n as f64,
            Value::Real(x) => x,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Real(x) => write!(f, "{x}"),
        }
    }
}

/// What one cutoff produced; this is what the cache stores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub count: Value,
    pub predicted: Option<f64>,
    pub rel_err: Option<f64>,
    pub locus_breakdown: BTreeMap<String, Value>,
    /// Checks that hold regardless of tolerance, such as exact equalities.
    pub exact_ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    #[serde(rename = "B")]
    pub b: f64,
    pub count: Value,
    pub predicted: Option<f64>,
    pub rel_err: Option<f64>,
    pub locus_breakdown: BTreeMap<String, Value>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub name: String,
    pub value: f64,
    pub tail_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub name: String,
    pub kind: Kind,
    pub field_disc: i64,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rows: Vec<Row>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub constants: Vec<ConstantRow>,
    pub pass: bool,
}

impl Report {
    pub fn new(spec: &ExperimentSpec, rows: Vec<Row>, constants: Vec<ConstantRow>) -> Self {
        let pass = rows.iter().all(|r| r.pass) && constants.iter().all(|c| c.value.is_finite());
        Report {
            schema: SCHEMA,
            name: spec.name.clone(),
            kind: spec.kind,
            field_disc: spec.field_disc,
            tolerance: spec.tolerance,
            rows,
            constants,
            pass,
        }
    }

    pub fn write(&self, format: Format, out: impl Write) -> Result<(), CliError> {
        match format {
            Format::Json => {
                let mut out = out;
                serde_json::to_writer_pretty(&mut out, self).map_err(|e| CliError::Encode(e.to_string()))?;
                writeln!(out)?;
                Ok(())
            }
            Format::Csv => self.write_csv(out),
        }
    }

    fn write_csv(&self, out: impl Write) -> Result<(), CliError> {
        let mut w = csv::Writer::from_writer(out);
        let enc = |e: csv::Error| CliError::Encode(e.to_string());
        if self.kind == Kind::Constants {
            w.write_record(["name", "value", "tail_bound"]).map_err(enc)?;
            for c in &self.constants {
                w.write_record([c.name.clone(), c.value.to_string(), c.tail_bound.to_string()]).map_err(enc)?;
            }
        } else {
            w.write_record(["B", "count", "predicted", "rel_err", "locus_breakdown"]).map_err(enc)?;
            let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
            for r in &self.rows {
                let breakdown: Vec<String> = r.locus_breakdown.iter().map(|(k, v)| format!("{k}={v}")).collect();
                w.write_record([r.b.to_string(), r.count.to_string(), opt(r.predicted), opt(r.rel_err), breakdown.join(";")])
                    .map_err(enc)?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let spec = ExperimentSpec {
            name: "t".into(),
            kind: Kind::CountV,
            field_disc: 1,
            b_schedule: vec![10.0],
            tolerance: 0.1,
            workers: 1,
            output_path: None,
            format: Format::Csv,
            seed: 0,
        };
        let row = Row {
            b: 10.0,
            count: Value::Int(744),
            predicted: Some(787.0),
            rel_err: None,
            locus_breakdown: BTreeMap::from([("a".to_string(), Value::Int(1)), ("b".to_string(), Value::Real(0.5))]),
            pass: true,
        };
        let mut out = Vec::new();
        Report::new(&spec, vec![row], Vec::new()).write(Format::Csv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "B,count,predicted,rel_err,locus_breakdown\n10,744,787,,a=1;b=0.5\n");
    }
}
