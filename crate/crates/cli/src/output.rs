use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::args::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// `{"schema_version": 1, ...}` with the version first.
pub fn versioned(body: Value) -> Value {
    let mut m = Map::new();
    m.insert("schema_version".into(), SCHEMA_VERSION.into());
    if let Value::Object(fields) = body {
        m.extend(fields);
    }
    Value::Object(m)
}

pub struct Out<W: Write> {
    pub format: Format,
    pub w: W,
}

impl<W: Write> Out<W> {
    pub fn json_line(&mut self, v: &Value) -> io::Result<()> {
        serde_json::to_writer(&mut self.w, v)?;
        self.w.write_all(b"\n")
    }

    pub fn csv<R, I>(&mut self, header: &[&str], rows: R) -> io::Result<()>
    where
        R: IntoIterator<Item = I>,
        I: IntoIterator,
        I::Item: AsRef<[u8]>,
    {
        let mut wr = csv::Writer::from_writer(&mut self.w);
        wr.write_record(header)?;
        for row in rows {
            wr.write_record(row)?;
        }
        wr.flush()
    }

    pub fn line(&mut self, s: &str) -> io::Result<()> {
        writeln!(self.w, "{s}")
    }

    /// One document in whichever format was asked for.
    pub fn document(&mut self, json: Value, csv: (&[&str], Vec<Vec<String>>), text: &str) -> io::Result<()> {
        match self.format {
            Format::Json => self.json_line(&versioned(json)),
            Format::Csv => self.csv(csv.0, csv.1),
            Format::Text => self.line(text),
        }
    }
}
