//! CSV and plain-text reports of an experiment.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::ops::Range;
use std::path::{Path, PathBuf};

use thiserror::Error;
use zalad_core::{to_db, ExperimentResult, MsdSeries};

pub const CSV_HEADER: &str = "iteration,algorithm,msd_linear,msd_db,phase_index";

#[derive(Debug, Error)]
#[error("cannot write {}: {source}", path.display())]
pub struct OutputError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

/// Formats a float so that parsing it back gives the same bits.
pub fn format_value(v: f64) -> String {
    if v.is_nan() {
        "nan".to_owned()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else if v == 0.0 {
        "0".to_owned()
    } else if (1e-5..1e17).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

/// Parses a value written by [`format_value`].
pub fn parse_value(s: &str) -> Option<f64> {
    match s {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

fn sorted_series(result: &ExperimentResult) -> Vec<&MsdSeries> {
    let mut series: Vec<&MsdSeries> = result.series.iter().collect();
    series.sort_by(|a, b| a.label.cmp(&b.label));
    series
}

/// Writes the MSD table, rows ordered by label then iteration.
pub fn write_csv<W: Write>(result: &ExperimentResult, mut out: W) -> io::Result<()> {
    let trajectory = &result.config.trajectory;
    writeln!(out, "{CSV_HEADER}")?;
    for series in sorted_series(result) {
        let mut phase = 0;
        for (n, &v) in series.values.iter().enumerate() {
            while phase + 1 < trajectory.phases().len() && trajectory.phases()[phase + 1].start <= n {
                phase += 1;
            }
            writeln!(
                out,
                "{n},{},{},{},{phase}",
                series.label,
                format_value(v),
                format_value(to_db(v))
            )?;
        }
    }
    out.flush()
}

pub fn emit_csv(result: &ExperimentResult, path: &Path) -> Result<(), OutputError> {
    let wrap = |source| OutputError {
        path: path.to_owned(),
        source,
    };
    let file = File::create(path).map_err(wrap)?;
    write_csv(result, BufWriter::new(file)).map_err(wrap)
}

pub fn write_text(path: &Path, text: &str) -> Result<(), OutputError> {
    std::fs::write(path, text).map_err(|source| OutputError {
        path: path.to_owned(),
        source,
    })
}

/// Final tenth of a phase, at least one iteration long.
pub fn steady_state_window(phase: Range<usize>) -> Range<usize> {
    let len = ((phase.end - phase.start) / 10).max(1);
    phase.end - len..phase.end
}

/// Steady-state MSD in dB of every series in phase `k`, in series order.
/// Series without any surviving trial yield `None`.
pub fn phase_steady_state(result: &ExperimentResult, k: usize) -> Vec<(&str, Option<f64>)> {
    let window = steady_state_window(result.config.trajectory.phase_range(k));
    result
        .series
        .iter()
        .map(|s| {
            let db = (s.trials > 0).then(|| to_db(s.mean_over(window.clone())));
            (s.label.as_str(), db)
        })
        .collect()
}

/// Human-readable per-phase summary.
pub fn summarize(result: &ExperimentResult) -> String {
    let cfg = &result.config;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "scenario {}: {} trials, {} iterations, {} taps, master seed {}",
        cfg.name,
        cfg.trials,
        cfg.total_iterations(),
        cfg.taps(),
        result.master_seed
    );
    let _ = writeln!(text, "wall time {:.3} s", result.wall_time.as_secs_f64());

    for k in 0..cfg.trajectory.phases().len() {
        let range = cfg.trajectory.phase_range(k);
        let window = steady_state_window(range.clone());
        let _ = writeln!(
            text,
            "\nphase {k} [{}, {}), steady-state MSD over [{}, {}):",
            range.start, range.end, window.start, window.end
        );
        let levels = phase_steady_state(result, k);
        let width = levels.iter().map(|(l, _)| l.len()).max().unwrap_or(0);
        for ((label, db), series) in levels.iter().zip(&result.series) {
            let level = db.map_or_else(|| "n/a".to_owned(), |v| format!("{v:8.2} dB"));
            let _ = writeln!(
                text,
                "  {label:width$}  {level}  diverged {}/{}",
                series.diverged, cfg.trials
            );
        }
        let mut ranked: Vec<(&str, f64)> = levels.iter().filter_map(|(l, v)| v.map(|v| (*l, v))).collect();
        ranked.sort_by(|a, b| a.1.total_cmp(&b.1));
        if let Some((best, _)) = ranked.first() {
            let order: Vec<&str> = ranked.iter().map(|(l, _)| *l).collect();
            let _ = writeln!(text, "  ordering (lowest first): {}", order.join(" < "));
            let _ = writeln!(text, "  minimum: {best}");
        }
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_formats() {
        assert_eq!(format_value(0.0), "0");
        assert_eq!(format_value(-0.0), "0");
        assert_eq!(format_value(f64::NEG_INFINITY), "-inf");
        assert_eq!(format_value(f64::INFINITY), "inf");
        assert_eq!(format_value(f64::NAN), "nan");
        assert_eq!(format_value(0.25), "0.25");
        assert_eq!(format_value(1e-7), "1e-7");
        assert_eq!(format_value(1e20), "1e20");
        assert_eq!(format_value(to_db(1.0)), "0");
    }

    #[test]
    fn values_round_trip() {
        for v in [
            0.1,
            1.0 / 3.0,
            -2.5e-300,
            f64::MIN_POSITIVE,
            5e-324,
            f64::MAX,
            123456789.123,
            -19.08123,
        ] {
            assert_eq!(parse_value(&format_value(v)).unwrap().to_bits(), v.to_bits());
        }
        assert!(parse_value("nan").unwrap().is_nan());
        assert_eq!(parse_value("-inf"), Some(f64::NEG_INFINITY));
    }

    #[test]
    fn steady_state_window_is_the_last_tenth() {
        assert_eq!(steady_state_window(0..3000), 2700..3000);
        assert_eq!(steady_state_window(3000..6000), 5700..6000);
        assert_eq!(steady_state_window(5..9), 8..9);
    }
}
