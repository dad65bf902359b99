use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{fmt_f64, IoError};
use crate::engine::StepStats;

pub const STATS_HEADER: &str = "step,t,dt,mass,mass_drift,max_speed,wall_ms_flux,wall_ms_update";

/// Streams one CSV row per step.
///
/// Wall-clock columns are written as `0` unless `record_timings` is set,
/// so that repeated runs produce identical files.
pub struct StatsWriter {
    path: PathBuf,
    out: BufWriter<File>,
    record_timings: bool,
}

impl StatsWriter {
    pub fn create(path: &Path, record_timings: bool) -> Result<Self, IoError> {
        let file = File::create(path).map_err(|e| IoError::io(path, e))?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{STATS_HEADER}").map_err(|e| IoError::io(path, e))?;
        Ok(StatsWriter {
            path: path.to_path_buf(),
            out,
            record_timings,
        })
    }

    pub fn write(&mut self, s: &StepStats) -> Result<(), IoError> {
        let row = format_row(s, self.record_timings);
        writeln!(self.out, "{row}").map_err(|e| IoError::io(&self.path, e))
    }

    pub fn finish(mut self) -> Result<(), IoError> {
        self.out.flush().map_err(|e| IoError::io(&self.path, e))
    }
}

fn format_row(s: &StepStats, record_timings: bool) -> String {
    let (flux, update) = if record_timings {
        (
            format!("{:.6}", s.wall_flux.as_secs_f64() * 1e3),
            format!(
                "{:.6}",
                (s.wall_dt + s.wall_update + s.wall_friction).as_secs_f64() * 1e3
            ),
        )
    } else {
        ("0".to_string(), "0".to_string())
    };
    format!(
        "{},{},{},{},{},{},{},{}",
        s.step,
        fmt_f64(s.t),
        fmt_f64(s.dt),
        fmt_f64(s.mass),
        fmt_f64(s.mass_drift),
        fmt_f64(s.max_speed),
        flux,
        update
    )
}

pub fn write_stats_csv(path: &Path, series: &[StepStats], record_timings: bool) -> Result<(), IoError> {
    let mut w = StatsWriter::create(path, record_timings)?;
    for s in series {
        w.write(s)?;
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::time::Duration;

    #[test]
    fn rows_are_deterministic_without_timings() {
        let s = StepStats {
            step: 3,
            t: 0.5,
            dt: 0.125,
            mass: 10.0,
            mass_drift: -1e-16,
            max_speed: 3.0,
            wall_flux: Duration::from_millis(7),
            ..Default::default()
        };
        let row = format_row(&s, false);
        assert_eq!(row.split(',').count(), STATS_HEADER.split(',').count());
        assert!(row.ends_with(",0,0"));
        assert!(row.starts_with("3,5.0000000000000000e-1,1.2500000000000000e-1,"));
        assert!(format_row(&s, true).contains(",7.000000,"));
    }
}
