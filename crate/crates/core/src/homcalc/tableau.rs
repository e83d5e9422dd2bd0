use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::Partition;

/// Entry type of a tableau; values are 1-based.
pub type Entry = u16;

/// A tableau whose rows are weakly increasing. Rows may have any lengths; the
/// homomorphism calculus only uses shapes that are partitions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<Entry>>", into = "Vec<Vec<Entry>>")]
pub struct RowStandardTableau {
    rows: Vec<Vec<Entry>>,
}

impl RowStandardTableau {
    /// Validates that every row is weakly increasing and entries are positive.
    pub fn new(rows: Vec<Vec<Entry>>) -> Result<Self> {
        for row in &rows {
            if row.iter().any(|&v| v == 0) {
                return Err(Error::Precondition("tableau entries must be positive".into()));
            }
            if row.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::Precondition(format!("row {row:?} is not weakly increasing")));
            }
        }
        Ok(RowStandardTableau { rows })
    }

    /// Sorts each row; the homomorphism attached to a tableau depends only on row contents.
    pub fn from_rows_sorted(mut rows: Vec<Vec<Entry>>) -> Self {
        for row in &mut rows {
            row.sort_unstable();
        }
        RowStandardTableau { rows }
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<Vec<Entry>>) -> Self {
        debug_assert!(rows.iter().all(|r| r.windows(2).all(|w| w[0] <= w[1])));
        RowStandardTableau { rows }
    }

    pub fn rows(&self) -> &[Vec<Entry>] {
        &self.rows
    }

    pub fn row(&self, r: usize) -> &[Entry] {
        &self.rows[r]
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn max_entry(&self) -> Entry {
        self.rows.iter().flat_map(|r| r.last()).copied().max().unwrap_or(0)
    }

    /// Content vector: entry `i-1` counts the occurrences of `i`.
    pub fn content(&self) -> Vec<usize> {
        let mut c = vec![0usize; self.max_entry() as usize];
        for &v in self.rows.iter().flatten() {
            c[v as usize - 1] += 1;
        }
        c
    }

    /// Number of entries equal to `v` in row `r` (0-based row).
    pub fn count(&self, r: usize, v: Entry) -> usize {
        count_in(&self.rows[r], v)
    }

    /// Entries strictly increase down every column.
    pub fn is_semistandard(&self) -> bool {
        self.rows.windows(2).all(|w| {
            w[1].len() <= w[0].len() && w[1].iter().zip(&w[0]).all(|(lo, hi)| lo > hi)
        })
    }

    /// Some value `k` occurs `m` times, all in rows shorter than `m`.
    pub fn is_zero_by_toomany(&self) -> bool {
        let size = self.max_entry() as usize + 1;
        let mut totals = vec![0usize; size];
        let mut longest = vec![0usize; size];
        for row in &self.rows {
            for &v in row {
                totals[v as usize] += 1;
                longest[v as usize] = longest[v as usize].max(row.len());
            }
        }
        totals.iter().zip(&longest).any(|(&m, &l)| l < m)
    }

    /// The tableau of shape `lambda` whose row `i` is filled with `i`.
    pub fn identity(lambda: &Partition) -> Self {
        let rows = lambda
            .parts()
            .iter()
            .enumerate()
            .map(|(i, &len)| vec![(i + 1) as Entry; len])
            .collect();
        RowStandardTableau { rows }
    }
}

pub(crate) fn count_in(row: &[Entry], v: Entry) -> usize {
    let lo = row.partition_point(|&x| x < v);
    let hi = row.partition_point(|&x| x <= v);
    hi - lo
}

pub(crate) fn count_lt(row: &[Entry], v: Entry) -> usize {
    row.partition_point(|&x| x < v)
}

pub(crate) fn count_gt(row: &[Entry], v: Entry) -> usize {
    row.len() - row.partition_point(|&x| x <= v)
}

impl TryFrom<Vec<Vec<Entry>>> for RowStandardTableau {
    type Error = Error;
    fn try_from(rows: Vec<Vec<Entry>>) -> Result<Self> {
        RowStandardTableau::new(rows)
    }
}

impl From<RowStandardTableau> for Vec<Vec<Entry>> {
    fn from(t: RowStandardTableau) -> Self {
        t.rows
    }
}

impl fmt::Display for RowStandardTableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// All row-standard (or only semistandard) tableaux of the given shape and type,
/// in lexicographic order of their rows.
pub fn enumerate_tableaux(
    shape: &Partition,
    content: &[usize],
    semistandard_only: bool,
) -> Result<Vec<RowStandardTableau>> {
    let total: usize = content.iter().sum();
    if total != shape.size() {
        return Err(Error::SizeMismatch(shape.size(), total));
    }
    let mut out = Vec::new();
    let mut remaining = content.to_vec();
    let mut rows: Vec<Vec<Entry>> = Vec::new();
    fill_rows(shape.parts(), &mut remaining, &mut rows, semistandard_only, &mut out);
    Ok(out)
}

fn fill_rows(
    shape: &[usize],
    remaining: &mut Vec<usize>,
    rows: &mut Vec<Vec<Entry>>,
    semistandard_only: bool,
    out: &mut Vec<RowStandardTableau>,
) {
    let r = rows.len();
    if r == shape.len() {
        out.push(RowStandardTableau { rows: rows.clone() });
        return;
    }
    let mut row = Vec::with_capacity(shape[r]);
    fill_row(shape, remaining, rows, &mut row, 0, semistandard_only, out);
}

#[allow(clippy::too_many_arguments)]
fn fill_row(
    shape: &[usize],
    remaining: &mut Vec<usize>,
    rows: &mut Vec<Vec<Entry>>,
    row: &mut Vec<Entry>,
    min_value: usize,
    semistandard_only: bool,
    out: &mut Vec<RowStandardTableau>,
) {
    let r = rows.len();
    if row.len() == shape[r] {
        rows.push(row.clone());
        fill_rows(shape, remaining, rows, semistandard_only, out);
        rows.pop();
        return;
    }
    let c = row.len();
    for v in min_value..remaining.len() {
        if remaining[v] == 0 {
            continue;
        }
        let entry = (v + 1) as Entry;
        if semistandard_only && r > 0 && rows[r - 1][c] >= entry {
            continue;
        }
        remaining[v] -= 1;
        row.push(entry);
        fill_row(shape, remaining, rows, row, v, semistandard_only, out);
        row.pop();
        remaining[v] += 1;
    }
}
