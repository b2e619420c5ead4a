//! Triangles of exact counts indexed by `(n, statistic value)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::ExactInteger;

/// Which statistic a [`CountTable`] tabulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TableKind {
    /// `d(n, l)`: diagrams with exactly `l` short chords.
    ShortChords,
    /// `c(n, q)`: diagrams with exactly `q` connected components.
    Components,
    /// `T(m, l)`: fully non-crossing diagrams with exactly `l` short chords.
    NoncrossingShort,
}

impl TableKind {
    pub fn as_str(self) -> &'static str {
        match self {
            TableKind::ShortChords => "short",
            TableKind::Components => "components",
            TableKind::NoncrossingShort => "nc-short",
        }
    }
}

impl fmt::Display for TableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Row `n` holds the counts for statistic values `0..row.len()`; entries
/// beyond a row's end are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    pub k: usize,
    pub kind: TableKind,
    rows: Vec<Vec<ExactInteger>>,
}

impl CountTable {
    pub fn new(k: usize, kind: TableKind) -> Self {
        CountTable {
            k,
            kind,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(k: usize, kind: TableKind, rows: Vec<Vec<ExactInteger>>) -> Self {
        CountTable { k, kind, rows }
    }

    pub fn push_row(&mut self, row: Vec<ExactInteger>) {
        self.rows.push(row);
    }

    /// Largest `n` with a stored row; `None` for an empty table.
    pub fn n_max(&self) -> Option<usize> {
        self.rows.len().checked_sub(1)
    }

    pub fn row(&self, n: usize) -> &[ExactInteger] {
        &self.rows[n]
    }

    pub fn rows(&self) -> &[Vec<ExactInteger>] {
        &self.rows
    }

    pub fn get(&self, n: usize, value: usize) -> ExactInteger {
        self.rows
            .get(n)
            .and_then(|r| r.get(value))
            .cloned()
            .unwrap_or_else(BigInt::zero)
    }

    pub fn row_sum(&self, n: usize) -> ExactInteger {
        self.rows[n].iter().sum()
    }

    /// Row `n` with trailing zeros removed.
    pub fn trimmed_row(&self, n: usize) -> &[ExactInteger] {
        let row = &self.rows[n];
        let end = row.iter().rposition(|c| !c.is_zero()).map_or(0, |p| p + 1);
        &row[..end]
    }

    /// First `(n, value)` where the two tables disagree, comparing rows
    /// `from..=to` with implicit zeros.
    pub fn first_mismatch(
        &self,
        other: &CountTable,
        from: usize,
        to: usize,
    ) -> Option<(usize, usize, ExactInteger, ExactInteger)> {
        for n in from..=to {
            let width = self
                .rows
                .get(n)
                .map_or(0, Vec::len)
                .max(other.rows.get(n).map_or(0, Vec::len));
            for v in 0..width {
                let a = self.get(n, v);
                let b = other.get(n, v);
                if a != b {
                    return Some((n, v, a, b));
                }
            }
        }
        None
    }
}

/// `d(n, l, m)` for one fixed `n`: `counts[m][l]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleTable {
    pub k: usize,
    pub n: usize,
    counts: Vec<Vec<ExactInteger>>,
}

impl TripleTable {
    pub fn zeros(k: usize, n: usize) -> Self {
        TripleTable {
            k,
            n,
            counts: vec![vec![BigInt::zero(); n + 1]; n + 1],
        }
    }

    pub fn get(&self, short: usize, noncrossing: usize) -> &ExactInteger {
        &self.counts[noncrossing][short]
    }

    pub fn set(&mut self, short: usize, noncrossing: usize, value: ExactInteger) {
        self.counts[noncrossing][short] = value;
    }

    pub fn add_one(&mut self, short: usize, noncrossing: usize) {
        self.counts[noncrossing][short] += 1;
    }

    pub fn merge(&mut self, other: &TripleTable) {
        for (mine, theirs) in self.counts.iter_mut().zip(&other.counts) {
            for (a, b) in mine.iter_mut().zip(theirs) {
                *a += b;
            }
        }
    }

    pub fn total(&self) -> ExactInteger {
        self.counts.iter().flatten().sum()
    }

    /// `sum_m d(n, l, m)`.
    pub fn short_marginal(&self, short: usize) -> ExactInteger {
        self.counts.iter().map(|row| &row[short]).sum()
    }
}
