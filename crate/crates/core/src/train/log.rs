use std::fmt::Write as _;

use crate::{Error, Result};

/// One line of the training log.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRecord {
    pub epoch: usize,
    pub loss: f64,
    pub probe_auprc: f64,
    pub wall_time_s: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainingLog {
    pub records: Vec<LogRecord>,
    /// Epoch whose parameters were returned; 0 means the initial ones.
    pub best_epoch: usize,
    pub stopped_early: bool,
}

impl TrainingLog {
    pub const HEADER: &'static str = "epoch,loss,probe_auprc,wall_time_s";

    pub fn to_csv(&self) -> String {
        let mut out = String::from(Self::HEADER);
        out.push('\n');
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{:.3}",
                r.epoch, r.loss, r.probe_auprc, r.wall_time_s
            )
            .expect("writing to a String");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(Self::HEADER) {
            return Err(Error::Input("training log header mismatch".into()));
        }
        let records = lines
            .filter(|l| !l.is_empty())
            .map(|line| {
                let bad = || Error::Input(format!("malformed training log line {line:?}"));
                let f: Vec<&str> = line.split(',').collect();
                if f.len() != 4 {
                    return Err(bad());
                }
                Ok(LogRecord {
                    epoch: f[0].parse().map_err(|_| bad())?,
                    loss: f[1].parse().map_err(|_| bad())?,
                    probe_auprc: f[2].parse().map_err(|_| bad())?,
                    wall_time_s: f[3].parse().map_err(|_| bad())?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            records,
            ..Self::default()
        })
    }

    /// Records without their wall times, for comparing runs.
    pub fn without_timing(&self) -> Vec<(usize, f64, f64)> {
        self.records
            .iter()
            .map(|r| (r.epoch, r.loss, r.probe_auprc))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let log = TrainingLog {
            records: vec![
                LogRecord { epoch: 1, loss: 3.25, probe_auprc: 0.5, wall_time_s: 0.125 },
                LogRecord { epoch: 2, loss: 1.0 / 3.0, probe_auprc: 0.75, wall_time_s: 0.25 },
            ],
            ..TrainingLog::default()
        };
        let back = TrainingLog::from_csv(&log.to_csv()).unwrap();
        assert_eq!(back.without_timing(), log.without_timing());
        assert!(TrainingLog::from_csv("nope\n").is_err());
    }
}
