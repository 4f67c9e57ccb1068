//! Column tables and their CSV / JSON encodings.

use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
}

impl Cell {
    pub fn as_f64(self) -> f64 {
        match self {
            Cell::Int(v) => v as f64,
            Cell::Float(v) => v,
        }
    }

    /// Shortest string that parses back to the same value.
    pub fn render(self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => ryu::Buffer::new().format_finite(v).to_owned(),
            Cell::Float(v) if v.is_nan() => "NaN".to_owned(),
            Cell::Float(v) if v > 0.0 => "inf".to_owned(),
            Cell::Float(_) => "-inf".to_owned(),
        }
    }

    fn to_json(self) -> Value {
        match self {
            Cell::Int(v) => Value::from(v),
            Cell::Float(v) => Value::from(v),
        }
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(u64::from(v))
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    /// # Panics
    ///
    /// Panics if the row width does not match the header.
    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// All values of a named column.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i].as_f64()).collect())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.render()))?;
        }
        w.flush()
    }

    /// Array of row objects, keys in column order.
    pub fn write_json<W: Write>(&self, mut out: W) -> io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| ((*k).to_owned(), v.to_json()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut out, &rows)?;
        out.write_all(b"\n")
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        let mut buf = Vec::new();
        match format {
            Format::Csv => self.write_csv(&mut buf),
            Format::Json => self.write_json(&mut buf),
        }
        .expect("writing to memory");
        buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(&["n", "x", "density"]);
        t.push(vec![Cell::from(0u32), Cell::from(-0.1), Cell::from(0.1 + 0.2)]);
        t.push(vec![Cell::from(4u32), Cell::from(2.0), Cell::from(1e-300)]);
        t
    }

    #[test]
    fn csv_layout() {
        let text = String::from_utf8(sample().render(Format::Csv)).unwrap();
        assert_eq!(text, "n,x,density\n0,-0.1,0.30000000000000004\n4,2.0,1e-300\n");
    }

    #[test]
    fn floats_round_trip() {
        for v in [
            0.1 + 0.2,
            1.0 / 3.0,
            5e-324,
            f64::MAX,
            -2.5e-17,
            0.5641895835477563,
        ] {
            let s = Cell::Float(v).render();
            assert_eq!(s.parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_is_array_of_rows() {
        let bytes = sample().render(Format::Json);
        let v: Value = serde_json::from_slice(&bytes).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["n", "x", "density"]);
        assert_eq!(rows[0]["density"].as_f64().unwrap(), 0.1 + 0.2);
        assert_eq!(rows[1]["n"].as_u64().unwrap(), 4);
    }

    #[test]
    fn column_lookup() {
        assert_eq!(sample().column("x").unwrap(), vec![-0.1, 2.0]);
        assert!(sample().column("y").is_none());
    }

    #[test]
    fn format_names() {
        assert_eq!(Format::parse(" JSON "), Some(Format::Json));
        assert_eq!(Format::parse("tsv"), None);
        assert_eq!(Format::Csv.extension(), "csv");
    }
}
