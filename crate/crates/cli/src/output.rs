use std::fs::File;
use std::io::{self, BufWriter, Write};

use serde::Serialize;

use crate::args::{Format, OutputArgs};
use crate::Failure;

pub fn format(args: &OutputArgs, default: Format) -> Format {
    args.format.unwrap_or(default)
}

pub fn open(args: &OutputArgs) -> Result<Box<dyn Write>, Failure> {
    Ok(match &args.output {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(args: &OutputArgs, value: &T) -> Result<(), Failure> {
    let mut w = open(args)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Failure::usage(e.to_string()))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Writes a header and rows of already formatted fields as RFC 4180 CSV.
pub fn write_csv(args: &OutputArgs, header: &[String], rows: impl IntoIterator<Item = Vec<String>>) -> Result<(), Failure> {
    let mut w = csv::Writer::from_writer(open(args)?);
    w.write_record(header)?;
    for row in rows {
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Shortest representation that parses back to the same `f64`; scientific
/// notation outside `[1e-4, 1e15)`.
pub fn num(v: f64) -> String {
    let a = v.abs();
    if a == 0.0 || (1e-4..1e15).contains(&a) || !v.is_finite() {
        v.to_string()
    } else {
        format!("{v:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::num;

    #[test]
    fn numbers_round_trip() {
        for v in [0.0, -0.0, 1.0, -2.5, 1e-4, 9.99e-5, 1.5677754214203676e-12, 123456.789, 1e15, 6.02e23, f64::MIN_POSITIVE] {
            assert_eq!(num(v).parse::<f64>().unwrap().to_bits(), v.to_bits(), "{v}");
        }
        assert_eq!(num(1.5677754214203676e-12), "1.5677754214203676e-12");
        assert_eq!(num(0.25), "0.25");
    }
}

pub fn header(fields: &[&str]) -> Vec<String> {
    fields.iter().map(|s| s.to_string()).collect()
}
