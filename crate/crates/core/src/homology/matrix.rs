use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::HomologyError;

/// Sparse column vector: `(row, value)` pairs sorted by row, no zeros.
pub type SparseColumn = Vec<(usize, BigInt)>;

/// Column-major sparse integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    columns: Vec<SparseColumn>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            columns: vec![Vec::new(); cols],
        }
    }

    /// Duplicate positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self, HomologyError> {
        let mut columns: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); cols];
        for (i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(HomologyError::Shape(format!(
                    "entry ({i},{j}) outside {rows}x{cols}"
                )));
            }
            columns[j].push((i, v));
        }
        let columns = columns.into_iter().map(normalize_column).collect();
        Ok(SparseMatrix {
            rows,
            cols,
            columns,
        })
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseColumn>) -> Self {
        let cols = columns.len();
        SparseMatrix {
            rows,
            cols,
            columns: columns.into_iter().map(normalize_column).collect(),
        }
    }

    pub fn from_dense(dense: &[Vec<BigInt>], cols: usize) -> Self {
        let rows = dense.len();
        let triplets = dense.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| !v.is_zero())
                .map(move |(j, v)| (i, j, v.clone()))
        });
        Self::from_triplets(rows, cols, triplets).expect("in range")
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrix {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i, BigInt::one())]).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[(usize, BigInt)] {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SparseColumn] {
        &self.columns
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        self.columns[j]
            .binary_search_by_key(&i, |(r, _)| *r)
            .map(|k| self.columns[j][k].1.clone())
            .unwrap_or_default()
    }

    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(j, c)| c.iter().map(move |(i, v)| (*i, j, v)))
    }

    pub fn transpose(&self) -> SparseMatrix {
        let triplets = self.triplets().map(|(i, j, v)| (j, i, v.clone()));
        Self::from_triplets(self.cols, self.rows, triplets).expect("in range")
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, HomologyError> {
        if self.cols != rhs.rows {
            return Err(HomologyError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let columns = rhs
            .columns
            .iter()
            .map(|c| {
                let mut acc = Vec::new();
                for (k, v) in c {
                    for (i, w) in &self.columns[*k] {
                        acc.push((*i, v * w));
                    }
                }
                normalize_column(acc)
            })
            .collect();
        Ok(SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            columns,
        })
    }

    /// Image of a sparse vector.
    pub fn apply(&self, x: &[(usize, BigInt)]) -> SparseColumn {
        let mut acc = Vec::new();
        for (k, v) in x {
            for (i, w) in &self.columns[*k] {
                acc.push((*i, v * w));
            }
        }
        normalize_column(acc)
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (i, j, v) in self.triplets() {
            d[i][j] = v.clone();
        }
        d
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .triplets()
                .map(|(i, j, v)| (i, j, i64::try_from(v).expect("entry fits in i64")))
                .collect(),
        }
    }

    pub fn from_json(j: &MatrixJson) -> Result<Self, HomologyError> {
        Self::from_triplets(
            j.rows,
            j.cols,
            j.entries.iter().map(|&(i, c, v)| (i, c, BigInt::from(v))),
        )
    }
}

/// Sorts by row, sums duplicates and drops zeros.
pub fn normalize_column(mut c: Vec<(usize, BigInt)>) -> SparseColumn {
    c.sort_by_key(|(i, _)| *i);
    let mut out: SparseColumn = Vec::with_capacity(c.len());
    for (i, v) in c {
        match out.last_mut() {
            Some((j, w)) if *j == i => *w += v,
            _ => out.push((i, v)),
        }
    }
    out.retain(|(_, v)| !v.is_zero());
    out
}

/// `a*x + b*y` for sorted sparse vectors.
pub fn combine(a: &BigInt, x: &[(usize, BigInt)], b: &BigInt, y: &[(usize, BigInt)]) -> SparseColumn {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j == y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i == x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, b * &y[j].1));
            j += 1;
        } else {
            let v = a * &x[i].1 + b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Triplet exchange format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, i64)>,
}
