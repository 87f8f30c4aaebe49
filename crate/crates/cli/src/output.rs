use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use crate::Failure;

/// Seventeen significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn open_sink(out: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(|e| {
            Failure::Io(format!("cannot create {}: {e}", path.display()))
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_csv(out: Option<&Path>, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(open_sink(out)?);
    w.write_record(header).map_err(Failure::io)?;
    for row in rows {
        w.write_record(&row).map_err(Failure::io)?;
    }
    w.flush().map_err(Failure::io)
}

pub fn write_json<T: serde::Serialize>(out: Option<&Path>, value: &T) -> Result<(), Failure> {
    let mut sink = open_sink(out)?;
    serde_json::to_writer_pretty(&mut sink, value).map_err(Failure::io)?;
    writeln!(sink).map_err(Failure::io)?;
    sink.flush().map_err(Failure::io)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_f64(0.1).parse::<f64>().unwrap(), 0.1);
    }
}
