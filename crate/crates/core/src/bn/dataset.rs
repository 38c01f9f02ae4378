//! Tab-separated dataset format: column names, then column kinds (`d<card>`
//! or `c`), then one line per sample.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: usize,
        message: String,
    },
    #[error("row {row}: expected {expected} values, found {found}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("invalid dataset: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Discrete(u32),
    Continuous,
}

impl ColumnKind {
    fn tag(self) -> String {
        match self {
            ColumnKind::Discrete(c) => format!("d{c}"),
            ColumnKind::Continuous => "c".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Column {
    Discrete { cardinality: u32, values: Vec<u32> },
    Continuous(Vec<f64>),
}

impl Column {
    pub fn kind(&self) -> ColumnKind {
        match self {
            Column::Discrete { cardinality, .. } => ColumnKind::Discrete(*cardinality),
            Column::Continuous(_) => ColumnKind::Continuous,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Column::Discrete { values, .. } => values.len(),
            Column::Continuous(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Column-major samples with per-column metadata. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    names: Vec<String>,
    columns: Vec<Column>,
    n_rows: usize,
}

impl Dataset {
    pub fn new(names: Vec<String>, columns: Vec<Column>) -> Result<Self, DatasetError> {
        if names.len() != columns.len() {
            return Err(DatasetError::Invalid(format!(
                "{} names for {} columns",
                names.len(),
                columns.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(DatasetError::Invalid(format!(
                    "invalid column name '{name}'"
                )));
            }
            if !seen.insert(name) {
                return Err(DatasetError::Invalid(format!(
                    "duplicate column name '{name}'"
                )));
            }
        }
        let n_rows = columns.first().map_or(0, Column::len);
        for (name, col) in names.iter().zip(&columns) {
            if col.len() != n_rows {
                return Err(DatasetError::Invalid(format!(
                    "column '{name}' has {} rows, expected {n_rows}",
                    col.len()
                )));
            }
            match col {
                Column::Discrete {
                    cardinality,
                    values,
                } => {
                    if *cardinality == 0 {
                        return Err(DatasetError::Invalid(format!(
                            "column '{name}' has cardinality 0"
                        )));
                    }
                    if let Some(v) = values.iter().find(|&&v| v >= *cardinality) {
                        return Err(DatasetError::Invalid(format!(
                            "column '{name}' holds {v}, outside 0..{cardinality}"
                        )));
                    }
                }
                Column::Continuous(values) => {
                    if values.iter().any(|v| !v.is_finite()) {
                        return Err(DatasetError::Invalid(format!(
                            "column '{name}' holds a non-finite value"
                        )));
                    }
                }
            }
        }
        Ok(Dataset {
            names,
            columns,
            n_rows,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, i: usize) -> &Column {
        &self.columns[i]
    }

    pub fn kind(&self, i: usize) -> ColumnKind {
        self.columns[i].kind()
    }

    pub fn discrete(&self, i: usize) -> Option<&[u32]> {
        match &self.columns[i] {
            Column::Discrete { values, .. } => Some(values),
            Column::Continuous(_) => None,
        }
    }

    pub fn cardinality(&self, i: usize) -> Option<u32> {
        match self.columns[i] {
            Column::Discrete { cardinality, .. } => Some(cardinality),
            Column::Continuous(_) => None,
        }
    }

    pub fn continuous(&self, i: usize) -> Option<&[f64]> {
        match &self.columns[i] {
            Column::Continuous(v) => Some(v),
            Column::Discrete { .. } => None,
        }
    }

    pub fn all_discrete(&self) -> bool {
        self.columns
            .iter()
            .all(|c| matches!(c, Column::Discrete { .. }))
    }

    pub fn all_continuous(&self) -> bool {
        self.columns
            .iter()
            .all(|c| matches!(c, Column::Continuous(_)))
    }

    /// A dataset with columns `cols[0], cols[1], …` of `self`.
    pub fn select(&self, cols: &[usize]) -> Dataset {
        Dataset {
            names: cols.iter().map(|&c| self.names[c].clone()).collect(),
            columns: cols.iter().map(|&c| self.columns[c].clone()).collect(),
            n_rows: self.n_rows,
        }
    }

    /// The first `n` rows.
    pub fn head(&self, n: usize) -> Dataset {
        let n = n.min(self.n_rows);
        let columns = self
            .columns
            .iter()
            .map(|c| match c {
                Column::Discrete {
                    cardinality,
                    values,
                } => Column::Discrete {
                    cardinality: *cardinality,
                    values: values[..n].to_vec(),
                },
                Column::Continuous(v) => Column::Continuous(v[..n].to_vec()),
            })
            .collect();
        Dataset {
            names: self.names.clone(),
            columns,
            n_rows: n,
        }
    }
}

pub fn write_dataset(data: &Dataset) -> String {
    let mut s = String::with_capacity(16 * (data.n_rows() + 2) * data.n_cols().max(1));
    s.push_str(&data.names.join("\t"));
    s.push('\n');
    let kinds: Vec<String> = data.columns.iter().map(|c| c.kind().tag()).collect();
    s.push_str(&kinds.join("\t"));
    s.push('\n');
    for r in 0..data.n_rows {
        for (j, col) in data.columns.iter().enumerate() {
            if j > 0 {
                s.push('\t');
            }
            match col {
                Column::Discrete { values, .. } => {
                    let _ = write!(s, "{}", values[r]);
                }
                // Debug formatting is the shortest representation that
                // parses back to the same f64.
                Column::Continuous(values) => {
                    let _ = write!(s, "{:?}", values[r]);
                }
            }
        }
        s.push('\n');
    }
    s
}

pub fn read_dataset(text: &str) -> Result<Dataset, DatasetError> {
    let mut lines = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty());
    let perr = |row: usize, column: usize, message: String| DatasetError::Parse {
        row,
        column,
        message,
    };

    let (_, header) = lines
        .next()
        .ok_or_else(|| perr(1, 1, "missing header line".into()))?;
    let names: Vec<String> = header.split('\t').map(|s| s.trim().to_string()).collect();
    let (kl, kind_line) = lines
        .next()
        .ok_or_else(|| perr(2, 1, "missing column-kind line".into()))?;
    let kind_tags: Vec<&str> = kind_line.split('\t').map(str::trim).collect();
    if kind_tags.len() != names.len() {
        return Err(DatasetError::Ragged {
            row: kl + 1,
            expected: names.len(),
            found: kind_tags.len(),
        });
    }
    let mut kinds = Vec::with_capacity(names.len());
    for (j, tag) in kind_tags.iter().enumerate() {
        let kind = if *tag == "c" {
            ColumnKind::Continuous
        } else if let Some(card) = tag.strip_prefix('d').and_then(|c| c.parse::<u32>().ok()) {
            ColumnKind::Discrete(card)
        } else {
            return Err(perr(kl + 1, j + 1, format!("unknown column kind '{tag}'")));
        };
        kinds.push(kind);
    }
    let mut disc: Vec<Vec<u32>> = vec![Vec::new(); names.len()];
    let mut cont: Vec<Vec<f64>> = vec![Vec::new(); names.len()];
    for (ln, line) in lines {
        let row = ln + 1;
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != names.len() {
            return Err(DatasetError::Ragged {
                row,
                expected: names.len(),
                found: fields.len(),
            });
        }
        for (j, field) in fields.iter().enumerate() {
            let field = field.trim();
            match kinds[j] {
                ColumnKind::Discrete(card) => {
                    let v: u32 = field.parse().map_err(|_| {
                        perr(row, j + 1, format!("'{field}' is not a category index"))
                    })?;
                    if v >= card {
                        return Err(perr(row, j + 1, format!("category {v} outside 0..{card}")));
                    }
                    disc[j].push(v);
                }
                ColumnKind::Continuous => {
                    let v: f64 = field
                        .parse()
                        .map_err(|_| perr(row, j + 1, format!("'{field}' is not a number")))?;
                    if !v.is_finite() {
                        return Err(perr(row, j + 1, "non-finite value".into()));
                    }
                    cont[j].push(v);
                }
            }
        }
    }
    let columns = kinds
        .iter()
        .enumerate()
        .map(|(j, k)| match k {
            ColumnKind::Discrete(card) => Column::Discrete {
                cardinality: *card,
                values: std::mem::take(&mut disc[j]),
            },
            ColumnKind::Continuous => Column::Continuous(std::mem::take(&mut cont[j])),
        })
        .collect();
    Dataset::new(names, columns)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Dataset {
        Dataset::new(
            vec!["a".into(), "b".into()],
            vec![
                Column::Discrete {
                    cardinality: 3,
                    values: vec![0, 2, 1],
                },
                Column::Discrete {
                    cardinality: 2,
                    values: vec![1, 0, 1],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn header_only_round_trip() {
        let d = Dataset::new(
            vec!["x".into(), "y".into()],
            vec![
                Column::Discrete {
                    cardinality: 2,
                    values: vec![],
                },
                Column::Continuous(vec![]),
            ],
        )
        .unwrap();
        let t = write_dataset(&d);
        assert_eq!(t, "x\ty\nd2\tc\n");
        assert_eq!(read_dataset(&t).unwrap(), d);
    }

    #[test]
    fn discrete_round_trip_is_bit_identical() {
        let d = small();
        let t = write_dataset(&d);
        assert_eq!(t, "a\tb\nd3\td2\n0\t1\n2\t0\n1\t1\n");
        assert_eq!(read_dataset(&t).unwrap(), d);
        assert_eq!(write_dataset(&read_dataset(&t).unwrap()), t);
    }

    #[test]
    fn continuous_values_survive() {
        let vals = vec![0.1, -1e-300, 12345.678901234567, f64::MAX, 5e-324];
        let d = Dataset::new(vec!["x".into()], vec![Column::Continuous(vals.clone())]).unwrap();
        let back = read_dataset(&write_dataset(&d)).unwrap();
        assert_eq!(back.continuous(0).unwrap(), vals.as_slice());
    }

    #[test]
    fn located_errors() {
        assert_eq!(
            read_dataset("a\tb\nd2\td2\n0\t1\n1\n"),
            Err(DatasetError::Ragged {
                row: 4,
                expected: 2,
                found: 1
            })
        );
        assert!(matches!(
            read_dataset("a\tb\nd2\td2\n0\t7\n"),
            Err(DatasetError::Parse {
                row: 3,
                column: 2,
                ..
            })
        ));
        assert!(matches!(
            read_dataset("a\nc\nhello\n"),
            Err(DatasetError::Parse {
                row: 3,
                column: 1,
                ..
            })
        ));
        assert!(matches!(
            read_dataset("a\nq\n"),
            Err(DatasetError::Parse {
                row: 2,
                column: 1,
                ..
            })
        ));
    }

    #[test]
    fn select_reorders_columns() {
        let d = small().select(&[1, 0]);
        assert_eq!(d.names(), &["b", "a"]);
        assert_eq!(d.discrete(1).unwrap(), &[0, 2, 1]);
    }
}
