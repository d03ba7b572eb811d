use std::io::Write;
use std::time::Duration;

use crate::error::CliError;

pub const HEADER: [&str; 6] = ["op", "alpha", "beta", "result_size", "elapsed_micros", "entries_touched"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Op {
    Query,
    InsertS,
    DeleteS,
    InsertT,
    DeleteT,
    Build,
    Rebuild,
}

impl Op {
    pub fn name(self) -> &'static str {
        match self {
            Op::Query => "query",
            Op::InsertS => "insert_s",
            Op::DeleteS => "delete_s",
            Op::InsertT => "insert_t",
            Op::DeleteT => "delete_t",
            Op::Build => "build",
            Op::Rebuild => "rebuild",
        }
    }
}

/// One timed operation. `alpha` and `beta` are `-1` when not applicable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRecord {
    pub op: Op,
    pub alpha: i64,
    pub beta: i64,
    pub result_size: usize,
    pub elapsed_micros: u128,
    pub entries_touched: usize,
}

impl BenchRecord {
    pub fn new(op: Op, alpha: i64, beta: i64, elapsed: Duration) -> Self {
        BenchRecord {
            op,
            alpha,
            beta,
            result_size: 0,
            elapsed_micros: elapsed.as_micros(),
            entries_touched: 0,
        }
    }
}

pub fn write_records<W: Write>(out: W, records: &[BenchRecord]) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(HEADER)?;
    for r in records {
        w.write_record([
            r.op.name().to_string(),
            r.alpha.to_string(),
            r.beta.to_string(),
            r.result_size.to_string(),
            r.elapsed_micros.to_string(),
            r.entries_touched.to_string(),
        ])?;
    }
    w.flush().map_err(|e| CliError::Data(format!("writing records: {e}")))?;
    Ok(())
}
