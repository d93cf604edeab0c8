use std::io::{self, Write};

use serde::Serialize;

use super::DecayProfile;

/// One evaluated transform value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanRow {
    pub r: f64,
    pub theta: f64,
    pub value_re: f64,
    pub value_im: f64,
}

impl ScanRow {
    pub fn abs(&self) -> f64 {
        self.value_re.hypot(self.value_im)
    }
}

/// Writes `R,theta,value_re,value_im,abs` rows with a header.
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], mut out: W) -> io::Result<()> {
    out.write_all(b"R,theta,value_re,value_im,abs\n")?;
    for r in rows {
        writeln!(out, "{},{},{},{},{}", r.r, r.theta, r.value_re, r.value_im, r.abs())?;
    }
    Ok(())
}

/// Serializable fit summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitSummary {
    pub gamma: f64,
    #[serde(rename = "C")]
    pub c: f64,
    pub residual: f64,
    pub n_samples: usize,
}

impl From<&DecayProfile> for FitSummary {
    fn from(p: &DecayProfile) -> Self {
        Self {
            gamma: p.gamma,
            c: p.c,
            residual: p.residual,
            n_samples: p.n_samples(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let rows = [ScanRow {
            r: 8.0,
            theta: 0.5,
            value_re: -3.0,
            value_im: 4.0,
        }];
        let mut buf = Vec::new();
        write_scan_csv(&rows, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "R,theta,value_re,value_im,abs\n8,0.5,-3,4,5\n");
    }
}
