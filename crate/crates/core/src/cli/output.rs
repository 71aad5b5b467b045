//! CSV emission with a fixed number format.

use crate::error::{Error, Result};

/// Shortest representation that parses back to the same `f64`. Plain
/// decimal for moderate magnitudes, exponent form otherwise.
pub fn fmt_num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-4..1e16).contains(&a) || !x.is_finite() {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

/// Accumulates one CSV table and optional trailing comment lines.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    footer: Vec<String>,
}

impl Table {
    pub fn new(header: &[String]) -> Result<Self> {
        let mut writer = csv::WriterBuilder::new().from_writer(Vec::new());
        writer.write_record(header).map_err(csv_err)?;
        Ok(Table { writer, footer: Vec::new() })
    }

    pub fn with_columns(columns: &[&str]) -> Result<Self> {
        Self::new(&columns.iter().map(|s| s.to_string()).collect::<Vec<_>>())
    }

    pub fn row(&mut self, values: &[f64]) -> Result<()> {
        self.writer.write_record(values.iter().map(|v| fmt_num(*v))).map_err(csv_err)
    }

    /// Adds a `# key=value` line after the table.
    pub fn note(&mut self, key: &str, value: impl std::fmt::Display) {
        self.footer.push(format!("# {key}={value}"));
    }

    pub fn finish(self) -> Result<String> {
        let bytes = self.writer.into_inner().map_err(|e| Error::Io(e.to_string()))?;
        let mut s = String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))?;
        for line in self.footer {
            s.push_str(&line);
            s.push('\n');
        }
        Ok(s)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Reads `(T_K, P_Pa, E_V)` rows from CSV text with a header line.
pub fn read_measurements(text: &str) -> Result<Vec<(f64, f64, f64)>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::Config(format!("measurement file lacks column {name}")))
    };
    let (it, ip, ie) = (col("T_K")?, col("P_Pa")?, col("E_V")?);
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let get = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Config(format!("measurement row {}: column {i} is not a number", k + 1)))
        };
        out.push((get(it)?, get(ip)?, get(ie)?));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 1.0, 298.15, 1e5, 1.2345678901234567e-7, -3.5e20, 0.1 + 0.2, f64::MIN_POSITIVE] {
            let s = fmt_num(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(fmt_num(1e5), "100000");
        assert_eq!(fmt_num(2.5e-7), "2.5e-7");
    }

    #[test]
    fn table_has_one_header_and_footer() {
        let mut t = Table::with_columns(&["a", "b"]).unwrap();
        t.row(&[1.0, 2.0]).unwrap();
        t.note("stop_reason", "converged");
        assert_eq!(t.finish().unwrap(), "a,b\n1,2\n# stop_reason=converged\n");
    }

    #[test]
    fn measurement_parsing() {
        let rows = read_measurements("T_K,P_Pa,E_V\n300,100000,1.1\n# note\n310,2e5,1.05\n").unwrap();
        assert_eq!(rows, vec![(300.0, 1e5, 1.1), (310.0, 2e5, 1.05)]);
        assert!(read_measurements("T,P\n1,2\n").is_err());
    }
}
