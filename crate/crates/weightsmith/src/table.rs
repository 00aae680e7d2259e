//! Rectangular numeric result tables with a mandatory header, rendered as
//! RFC-4180-style CSV (comma separators, CRLF record endings, no quoting
//! needed because cells are decimal numbers). Numbers carry 17 significant
//! digits, enough to reproduce every finite double exactly.

use crate::analysis::ConvergenceTable;
use crate::error::{Error, Result};

/// One table cell: a number, or empty (used where a ratio has no
/// predecessor).
pub type Cell = Option<f64>;

#[derive(Debug, Clone, PartialEq)]
pub struct ResultTable {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

/// 17 significant digits: the shortest count that round-trips any f64.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

impl ResultTable {
    pub fn new(header: Vec<String>) -> Result<Self> {
        if header.is_empty() {
            return Err(Error::precondition("a table needs at least one column"));
        }
        for name in &header {
            if name.is_empty() || name.contains([',', '"', '\r', '\n']) {
                return Err(Error::precondition(format!(
                    "column name {name:?} needs CSV quoting, which cells never get; \
                     use a plain name"
                )));
            }
        }
        Ok(ResultTable { header, rows: Vec::new() })
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        self.push_cells(row.into_iter().map(Some).collect())
    }

    pub fn push_cells(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::DimMismatch { expected: self.header.len(), found: row.len() });
        }
        if row.iter().any(|c| c.is_some_and(|v| !v.is_finite())) {
            return Err(Error::NonFinite("table cell"));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.header.join(","));
        out.push_str("\r\n");
        for row in &self.rows {
            let line: Vec<String> =
                row.iter().map(|c| c.map(format_number).unwrap_or_default()).collect();
            out.push_str(&line.join(","));
            out.push_str("\r\n");
        }
        out
    }

    /// Convergence study rows as (parameter, sup_error, ratio); the first
    /// ratio cell is empty.
    pub fn from_convergence(table: &ConvergenceTable) -> Result<Self> {
        let mut out = ResultTable::new(vec![
            table.parameter_name().to_string(),
            "sup_error".to_string(),
            "ratio".to_string(),
        ])?;
        for row in table.rows() {
            out.push_cells(vec![Some(row.parameter), Some(row.sup_error), row.ratio])?;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn format_round_trips_doubles_exactly() {
        for v in [
            0.1,
            -0.0,
            1.0 / 3.0,
            0.43835262054180285,
            f64::MIN_POSITIVE,
            1.7976931348623157e308,
            -2.2250738585072014e-308,
        ] {
            let s = format_number(v);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{v} -> {s} -> {back}");
        }
    }

    #[test]
    fn csv_layout_is_rectangular_with_crlf() {
        let mut t = ResultTable::new(vec!["a".into(), "b".into()]).unwrap();
        t.push_row(vec![1.0, 2.0]).unwrap();
        t.push_cells(vec![Some(0.5), None]).unwrap();
        let csv = t.to_csv();
        let lines: Vec<&str> = csv.split("\r\n").collect();
        assert_eq!(lines.len(), 4); // header, two rows, trailing empty
        assert_eq!(lines[0], "a,b");
        assert!(lines[1].starts_with("1.0000000000000000e0,"));
        assert!(lines[2].ends_with(','), "empty trailing cell: {:?}", lines[2]);
        assert_eq!(lines[3], "");
    }

    #[test]
    fn shape_and_content_violations_are_rejected() {
        assert!(ResultTable::new(vec![]).is_err());
        assert!(ResultTable::new(vec!["a,b".into()]).is_err());
        assert!(ResultTable::new(vec!["".into()]).is_err());
        let mut t = ResultTable::new(vec!["a".into(), "b".into()]).unwrap();
        assert!(t.push_row(vec![1.0]).is_err());
        assert!(t.push_row(vec![1.0, f64::NAN]).is_err());
        assert!(t.push_row(vec![1.0, f64::INFINITY]).is_err());
        assert!(t.is_empty());
        t.push_row(vec![1.0, 2.0]).unwrap();
        assert!(!t.is_empty());
    }

    #[test]
    fn convergence_tables_render_with_empty_first_ratio() {
        let source =
            ConvergenceTable::new("gamma", vec![(0.1, 1.0), (0.05, 0.25)]).unwrap();
        let t = ResultTable::from_convergence(&source).unwrap();
        assert_eq!(t.header(), ["gamma", "sup_error", "ratio"]);
        assert_eq!(t.rows()[0][2], None);
        assert_eq!(t.rows()[1][2], Some(0.25));
        let csv = t.to_csv();
        assert!(csv.starts_with("gamma,sup_error,ratio\r\n"));
    }
}
