//! Rectangular CSV output with controlled float formatting.
//!
//! Comma delimiter, dot decimal, header row, `\n` line endings. Floats are
//! written in scientific notation with a configurable number of significant
//! digits; at the default of 17 the text round-trips to the exact double.

use std::fmt::Write as _;

pub struct CsvTable {
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, cells: Vec<String>) {
        assert_eq!(
            cells.len(),
            self.header.len(),
            "CSV rows must be rectangular"
        );
        self.rows.push(cells);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }
}

/// Scientific notation with `precision` significant digits.
pub fn fmt_float(value: f64, precision: usize) -> String {
    format!("{:.*e}", precision.saturating_sub(1), value)
}

pub fn fmt_int(value: i64) -> String {
    value.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip_exactly() {
        for &x in &[
            0.0,
            1.0,
            -0.5,
            std::f64::consts::PI,
            0.1 + 0.2,
            1.0 - (-0.3f64).exp(),
            f64::MIN_POSITIVE,
        ] {
            let text = fmt_float(x, 17);
            let back: f64 = text.parse().unwrap();
            assert_eq!(back, x, "{text}");
        }
    }

    #[test]
    fn lower_precision_truncates() {
        assert_eq!(fmt_float(0.6321205588285577, 5), "6.3212e-1");
    }

    #[test]
    fn render_is_rectangular_with_header() {
        let mut t = CsvTable::new(vec!["a", "b"]);
        t.push_row(vec!["1".into(), "2".into()]);
        assert_eq!(t.render(), "a,b\n1,2\n");
    }
}
