use std::io::{self, Write};

use semilag_core::numerics::decimal_digits;
use semilag_core::ExtReal;
use serde_json::{Map, Value};

use crate::args::Format;

/// Digits used for residuals and tolerances, which are error estimates
/// rather than values.
const RESIDUAL_DIGITS: usize = 6;

/// Column-ordered table of pre-rendered cells.
#[derive(Debug, Default)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: Table) {
        self.rows.extend(other.rows);
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.columns)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            Format::Json => {
                let rows: Vec<Value> = self
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = self
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), Value::String(v.clone())))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut *out, &rows)?;
                writeln!(out)
            }
        }
    }
}

/// Renders a value with the digit count implied by the run precision.
pub fn value(x: &ExtReal, prec: u32) -> String {
    x.with_prec(prec).to_decimal(decimal_digits(prec))
}

pub fn residual(x: &ExtReal) -> String {
    x.to_decimal(RESIDUAL_DIGITS)
}

pub fn tolerance(tol: f64) -> String {
    format!("{:.*e}", RESIDUAL_DIGITS - 1, tol)
}
