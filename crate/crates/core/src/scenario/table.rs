use std::collections::BTreeMap;

use num_complex::Complex64;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Complex(Complex64),
    Text(String),
}

/// Rectangular table of typed cells plus string metadata. Complex cells
/// expand to `<name>_re`/`<name>_im` columns on output.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ResultTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub metadata: BTreeMap<String, String>,
}

impl ResultTable {
    pub fn new(columns: &[&str]) -> Self {
        ResultTable {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            metadata: BTreeMap::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// Append the rows of a table with the same columns; metadata of `other`
    /// is merged with its keys prefixed by `prefix`.
    pub fn append(&mut self, other: ResultTable, prefix: &str) {
        assert_eq!(self.columns, other.columns, "tables must share columns");
        self.rows.extend(other.rows);
        for (k, v) in other.metadata {
            self.metadata.insert(format!("{prefix}{k}"), v);
        }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Expanded header: complex columns become two, chosen by the first row
    /// (a column is complex if any row holds a complex cell there).
    pub fn expanded_header(&self) -> Vec<String> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(i, name)| {
                if self.is_complex(i) {
                    vec![format!("{name}_re"), format!("{name}_im")]
                } else {
                    vec![name.clone()]
                }
            })
            .collect()
    }

    pub(crate) fn is_complex(&self, col: usize) -> bool {
        self.rows.iter().any(|r| matches!(r[col], Cell::Complex(_)))
    }
}
