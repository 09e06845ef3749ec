//! Result rows and their CSV encoding.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// Compared schemes, in the order rows are sorted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    AoMultiIrs,
    SingleIrs,
    Mrt,
    RandomBf,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::AoMultiIrs, Scheme::SingleIrs, Scheme::Mrt, Scheme::RandomBf];

    pub fn label(self) -> &'static str {
        match self {
            Scheme::AoMultiIrs => "ao-multi-irs",
            Scheme::SingleIrs => "single-irs",
            Scheme::Mrt => "mrt",
            Scheme::RandomBf => "random-bf",
        }
    }

    /// Whether the scheme runs the alternating optimization.
    pub fn is_iterative(self) -> bool {
        matches!(self, Scheme::AoMultiIrs | Scheme::SingleIrs)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Scheme::ALL
            .into_iter()
            .find(|k| k.label() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown scheme '{s}'")))
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRecord {
    pub trial: usize,
    pub scheme: Scheme,
    /// `round`, `power_dbm` or `n_refl`.
    pub sweep_name: &'static str,
    pub sweep_value: f64,
    pub secrecy_rate: f64,
    pub rounds: usize,
    pub runtime_ms: f64,
    pub seed: u64,
}

impl ExperimentRecord {
    fn key(&self) -> (usize, Scheme, &'static str) {
        (self.trial, self.scheme, self.sweep_name)
    }
}

/// Sorts by trial, scheme and sweep value.
pub fn sort_records(records: &mut [ExperimentRecord]) {
    records.sort_by(|a, b| a.key().cmp(&b.key()).then(a.sweep_value.total_cmp(&b.sweep_value)));
}

pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for r in records {
        writer.serialize(r).map_err(csv_error)?;
    }
    // an empty run still gets its header
    if records.is_empty() {
        writer
            .write_record(["trial", "scheme", "sweep_name", "sweep_value", "secrecy_rate", "rounds", "runtime_ms", "seed"])
            .map_err(csv_error)?;
    }
    writer.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Average secrecy rate over trials at one sweep point.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub scheme: Scheme,
    pub sweep_name: &'static str,
    pub sweep_value: f64,
    pub asr: f64,
    pub trials: usize,
}

pub fn summarize(records: &[ExperimentRecord]) -> Vec<SummaryRow> {
    let mut sorted: Vec<&ExperimentRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        (a.scheme, a.sweep_name)
            .cmp(&(b.scheme, b.sweep_name))
            .then(a.sweep_value.total_cmp(&b.sweep_value))
    });
    let mut rows: Vec<SummaryRow> = Vec::new();
    for r in sorted {
        match rows.last_mut() {
            Some(row)
                if row.scheme == r.scheme && row.sweep_name == r.sweep_name && row.sweep_value == r.sweep_value =>
            {
                row.asr += r.secrecy_rate;
                row.trials += 1;
            }
            _ => rows.push(SummaryRow {
                scheme: r.scheme,
                sweep_name: r.sweep_name,
                sweep_value: r.sweep_value,
                asr: r.secrecy_rate,
                trials: 1,
            }),
        }
    }
    for row in &mut rows {
        row.asr /= row.trials as f64;
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(trial: usize, scheme: Scheme, value: f64, rate: f64) -> ExperimentRecord {
        ExperimentRecord {
            trial,
            scheme,
            sweep_name: "power_dbm",
            sweep_value: value,
            secrecy_rate: rate,
            rounds: 2,
            runtime_ms: 0.0,
            seed: 7,
        }
    }

    #[test]
    fn csv_header_and_rows() {
        let mut buf = Vec::new();
        write_csv(&[rec(0, Scheme::RandomBf, 5.0, 0.25)], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("trial,scheme,sweep_name,sweep_value,secrecy_rate,rounds,runtime_ms,seed"));
        assert_eq!(lines.next(), Some("0,random-bf,power_dbm,5.0,0.25,2,0.0,7"));
        let mut buf = Vec::new();
        write_csv(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }

    #[test]
    fn sorting_and_summary() {
        let mut rows = vec![
            rec(1, Scheme::Mrt, 10.0, 1.0),
            rec(0, Scheme::Mrt, 10.0, 3.0),
            rec(0, Scheme::AoMultiIrs, 10.0, 4.0),
            rec(0, Scheme::Mrt, 5.0, 2.0),
        ];
        sort_records(&mut rows);
        let order: Vec<_> = rows.iter().map(|r| (r.trial, r.scheme, r.sweep_value)).collect();
        assert_eq!(
            order,
            vec![(0, Scheme::AoMultiIrs, 10.0), (0, Scheme::Mrt, 5.0), (0, Scheme::Mrt, 10.0), (1, Scheme::Mrt, 10.0)]
        );
        let summary = summarize(&rows);
        assert_eq!(summary.len(), 3);
        let mrt10 = summary.iter().find(|s| s.scheme == Scheme::Mrt && s.sweep_value == 10.0).unwrap();
        assert_eq!((mrt10.asr, mrt10.trials), (2.0, 2));
    }

    #[test]
    fn scheme_labels_round_trip() {
        for s in Scheme::ALL {
            assert_eq!(s.label().parse::<Scheme>().unwrap(), s);
        }
        assert!("mrtx".parse::<Scheme>().is_err());
    }
}
