//! Bit-exact run outputs: trajectory CSV and the run manifest.
//!
//! Floats are printed with `{:.16e}` (17 significant digits), which round-trips
//! every `f64`; together with the deterministic noise streams this makes run
//! outputs byte-identical across repeats, platforms, and thread counts.

use crate::scalar::Real;
use crate::series::TrajectorySeries;
use std::fmt::Write as _;

/// CSV column header, fixed across versions.
pub const CSV_HEADER: &str = "step,t,q_hat,p_hat,tau_q2,tau_p2,dY,norm_drift,fit_residual";

fn fmt_float<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

fn fmt_opt<T: Real>(x: Option<T>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

/// Renders a trajectory as CSV with `\n` line endings and empty cells for
/// absent values.
pub fn series_to_csv<T: Real>(series: &TrajectorySeries<T>) -> String {
    let mut out = String::with_capacity(series.rows.len() * 160 + CSV_HEADER.len() + 1);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &series.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            row.step,
            fmt_float(row.t),
            fmt_float(row.q_hat),
            fmt_float(row.p_hat),
            fmt_float(row.tau_q2),
            fmt_float(row.tau_p2),
            fmt_opt(row.d_y),
            fmt_opt(row.norm_drift),
            fmt_opt(row.fit_residual),
        );
    }
    out
}

/// Ordered `key: value` run metadata, rendered one pair per line.
#[derive(Debug, Clone, Default)]
pub struct RunManifest {
    entries: Vec<(String, String)>,
}

impl RunManifest {
    pub fn new() -> Self {
        let mut m = Self::default();
        m.push("version", env!("CARGO_PKG_VERSION"));
        m
    }

    pub fn push(&mut self, key: &str, value: impl ToString) {
        self.entries.push((key.to_string(), value.to_string()));
    }

    pub fn push_float<T: Real>(&mut self, key: &str, value: T) {
        self.push(key, fmt_float(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k}: {v}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::SeriesRow;

    #[test]
    fn csv_schema_and_empty_cells() {
        let series = TrajectorySeries::<f64> {
            rows: vec![
                SeriesRow {
                    step: 0,
                    t: 0.0,
                    q_hat: 1.0,
                    p_hat: -0.5,
                    tau_q2: 0.25,
                    tau_p2: 1.0,
                    d_y: None,
                    norm_drift: None,
                    fit_residual: None,
                },
                SeriesRow {
                    step: 1,
                    t: 0.001,
                    q_hat: 1.0,
                    p_hat: -0.5,
                    tau_q2: 0.25,
                    tau_p2: 1.0,
                    d_y: Some(0.01),
                    norm_drift: Some(1e-9),
                    fit_residual: None,
                },
            ],
        };
        let csv = series_to_csv(&series);
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), CSV_HEADER);
        let row0 = lines.next().unwrap();
        assert!(row0.starts_with("0,0.0000000000000000e0,"));
        assert!(row0.ends_with(",,,"), "row0 = {row0}");
        let row1 = lines.next().unwrap();
        assert_eq!(row1.matches(',').count(), 8);
        assert!(row1.contains("1.0000000000000000e-2"));
        assert!(row1.ends_with(","), "row1 = {row1}");
        assert!(csv.ends_with('\n'));
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn float_format_round_trips() {
        for &x in &[1.0 / 3.0, 0.45508986056222733, -1e-300, 12345.6789] {
            let s = fmt_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "string {s}");
        }
    }

    #[test]
    fn manifest_renders_in_order() {
        let mut m = RunManifest::new();
        m.push("engine", "filter");
        m.push_float("dt", 1e-3_f64);
        let text = m.render();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], concat!("version: ", env!("CARGO_PKG_VERSION")));
        assert_eq!(lines[1], "engine: filter");
        assert_eq!(lines[2], "dt: 1.0000000000000000e-3");
        assert_eq!(m.get("engine"), Some("filter"));
    }
}
