use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Column {
    pub name: String,
    pub description: String,
}

impl Column {
    pub fn new(name: &str, description: &str) -> Self {
        Self {
            name: name.into(),
            description: description.into(),
        }
    }
}

/// Named real-valued columns plus free-form metadata (config echo, fits).
/// Flags are stored as `0`/`1`, undefined values as `NaN`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub experiment: String,
    pub columns: Vec<Column>,
    pub rows: Vec<Vec<f64>>,
    pub metadata: BTreeMap<String, Value>,
}

impl ResultTable {
    pub fn new(experiment: &str, columns: Vec<Column>) -> Self {
        Self {
            experiment: experiment.into(),
            columns,
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<f64>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn set_meta<T: Serialize>(&mut self, key: &str, value: T) {
        let v = serde_json::to_value(value).expect("metadata serializes");
        self.metadata.insert(key.into(), v);
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::InvalidConfig(format!("no column named {name:?}")))
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let k = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[k]).collect())
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(self.columns.iter().map(|c| c.name.as_str()))?;
        for row in &self.rows {
            w.write_record(row.iter().map(|x| x.to_string()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Reads a CSV written by [`ResultTable::write_csv`]; descriptions and
    /// metadata are left empty.
    pub fn read_csv<R: std::io::Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let columns = r
            .headers()?
            .iter()
            .map(|h| Column::new(h, ""))
            .collect::<Vec<_>>();
        let mut table = Self::new("", columns);
        for (k, rec) in r.records().enumerate() {
            let rec = rec?;
            let row = rec
                .iter()
                .enumerate()
                .map(|(c, s)| {
                    s.trim().parse::<f64>().map_err(|_| Error::Parse {
                        line: k + 2,
                        column: c + 1,
                        msg: format!("not a number: {s:?}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != table.columns.len() {
                return Err(Error::Parse {
                    line: k + 2,
                    column: 1,
                    msg: format!("expected {} fields, got {}", table.columns.len(), row.len()),
                });
            }
            table.rows.push(row);
        }
        Ok(table)
    }

    /// Sidecar document: column schema, metadata, tool version and the time
    /// of writing.
    pub fn sidecar(&self) -> Value {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        serde_json::json!({
            "experiment": self.experiment,
            "tool": env!("CARGO_PKG_NAME"),
            "tool_version": env!("CARGO_PKG_VERSION"),
            "written_unix_seconds": stamp,
            "columns": self.columns,
            "metadata": self.metadata,
        })
    }

    /// Writes `<stem>.csv` and `<stem>.json`.
    pub fn write_files(&self, csv_path: &Path) -> Result<()> {
        if let Some(dir) = csv_path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        self.write_csv(std::fs::File::create(csv_path)?)?;
        let json = serde_json::to_string_pretty(&self.sidecar())?;
        std::fs::write(csv_path.with_extension("json"), json + "\n")?;
        Ok(())
    }
}
