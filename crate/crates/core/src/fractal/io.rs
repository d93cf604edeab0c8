use std::io::{self, Write};

use serde::Serialize;

use super::IntervalUnion;
use crate::body::rational_to_f64;
use crate::scalar::{rational_string, Rational};

/// Writes `a,b` rows with endpoints as exact `p/q` strings.
pub fn write_intervals_csv<W: Write>(u: &IntervalUnion<Rational>, mut out: W) -> io::Result<()> {
    out.write_all(b"a,b\n")?;
    for (a, b) in u.intervals() {
        writeln!(out, "{},{}", rational_string(a), rational_string(b))?;
    }
    Ok(())
}

/// Count and length of an exact union, as a rational string and a float.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IntervalSummary {
    pub intervals: usize,
    pub total_length: String,
    pub total_length_f64: f64,
}

impl From<&IntervalUnion<Rational>> for IntervalSummary {
    fn from(u: &IntervalUnion<Rational>) -> Self {
        Self {
            intervals: u.len(),
            total_length: rational_string(&u.total_length()),
            total_length_f64: rational_to_f64(u.total_length()),
        }
    }
}
