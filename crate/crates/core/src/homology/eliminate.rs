//! Sparse Gaussian elimination over the integers.
//!
//! Rows are stored sparsely alongside a per-column index of the rows that
//! touch it. Pivot columns are taken cheapest first (fewest live entries,
//! re-queued lazily as fill-in changes counts) and, inside a column, the row
//! with the fewest entries wins, unit entries first.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::{combine, SparseColumn, SparseMatrix};
use super::snf;

struct Eliminator {
    rows: Vec<Option<SparseColumn>>,
    col_rows: Vec<BTreeSet<usize>>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
}

impl Eliminator {
    fn new(m: &SparseMatrix) -> Self {
        let t = m.transpose();
        let rows: Vec<Option<SparseColumn>> = t.columns().iter().cloned().map(Some).collect();
        let mut col_rows = vec![BTreeSet::new(); m.cols()];
        for (i, row) in rows.iter().enumerate() {
            for (j, _) in row.as_ref().unwrap() {
                col_rows[*j].insert(i);
            }
        }
        let heap = col_rows
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_empty())
            .map(|(j, r)| Reverse((r.len(), j)))
            .collect();
        Eliminator {
            rows,
            col_rows,
            heap,
        }
    }

    fn entry(&self, r: usize, c: usize) -> &BigInt {
        let row = self.rows[r].as_ref().unwrap();
        let k = row.binary_search_by_key(&c, |(j, _)| *j).expect("indexed entry");
        &row[k].1
    }

    /// Best pivot row in column `c`, optionally restricted to unit entries.
    fn choose_row(&self, c: usize, units_only: bool) -> Option<usize> {
        self.col_rows[c]
            .iter()
            .filter_map(|&r| {
                let unit = self.entry(r, c).abs().is_one();
                if units_only && !unit {
                    return None;
                }
                let len = self.rows[r].as_ref().unwrap().len();
                Some(((!unit, len, r), r))
            })
            .min()
            .map(|(_, r)| r)
    }

    fn replace_row(&mut self, r: usize, new: SparseColumn) {
        let old = self.rows[r].take().unwrap();
        let old_cols: BTreeSet<usize> = old.iter().map(|(j, _)| *j).collect();
        let new_cols: BTreeSet<usize> = new.iter().map(|(j, _)| *j).collect();
        for &j in old_cols.difference(&new_cols) {
            self.col_rows[j].remove(&r);
            self.requeue(j);
        }
        for &j in new_cols.difference(&old_cols) {
            self.col_rows[j].insert(r);
            self.requeue(j);
        }
        self.rows[r] = Some(new);
    }

    fn requeue(&mut self, j: usize) {
        let len = self.col_rows[j].len();
        if len > 0 {
            self.heap.push(Reverse((len, j)));
        }
    }

    /// Clears column `c` below and above the pivot, then drops the pivot row.
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.entry(r, c).clone();
        let pivot_row = self.rows[r].clone().unwrap();
        let others: Vec<usize> = self.col_rows[c].iter().copied().filter(|&x| x != r).collect();
        for o in others {
            let b = self.entry(o, c).clone();
            let row = self.rows[o].as_ref().unwrap();
            let new = if p.abs().is_one() {
                combine(&BigInt::one(), row, &-(&b * &p), &pivot_row)
            } else {
                let g = p.gcd(&b);
                let mut new = combine(&(&p / &g), row, &-(&b / &g), &pivot_row);
                divide_content(&mut new);
                new
            };
            self.replace_row(o, new);
        }
        let row = self.rows[r].take().unwrap();
        for (j, _) in &row {
            self.col_rows[*j].remove(&r);
            if *j != c {
                self.requeue(*j);
            }
        }
    }

    fn pop_column(&mut self) -> Option<usize> {
        while let Some(Reverse((len, j))) = self.heap.pop() {
            if len == self.col_rows[j].len() && len > 0 {
                return Some(j);
            }
        }
        None
    }
}

pub(crate) fn divide_content(v: &mut SparseColumn) {
    let g = v.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in v.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Rank over the rationals by fraction-free sparse elimination.
pub fn rank_q(m: &SparseMatrix) -> usize {
    let mut e = Eliminator::new(m);
    let mut rank = 0;
    while let Some(c) = e.pop_column() {
        let r = e.choose_row(c, false).expect("nonempty column");
        e.pivot(r, c);
        rank += 1;
    }
    rank
}

/// Nonzero elementary divisors (`d_1 | d_2 | ...`) of an integer matrix.
///
/// Unit pivots are eliminated sparsely; whatever survives goes through a
/// dense Smith normal form.
pub fn elementary_divisors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut e = Eliminator::new(m);
    let mut units = 0;
    loop {
        let mut deferred = Vec::new();
        let mut progress = false;
        while let Some(c) = e.pop_column() {
            match e.choose_row(c, true) {
                Some(r) => {
                    e.pivot(r, c);
                    units += 1;
                    progress = true;
                }
                None => deferred.push(c),
            }
        }
        if !progress || deferred.is_empty() {
            for c in deferred {
                e.requeue(c);
            }
            break;
        }
        for c in deferred {
            e.requeue(c);
        }
    }
    let live_rows: Vec<usize> = (0..e.rows.len())
        .filter(|&r| e.rows[r].as_ref().is_some_and(|x| !x.is_empty()))
        .collect();
    let live_cols: Vec<usize> = (0..e.col_rows.len())
        .filter(|&c| !e.col_rows[c].is_empty())
        .collect();
    let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
    for (a, &r) in live_rows.iter().enumerate() {
        for (j, v) in e.rows[r].as_ref().unwrap() {
            let b = live_cols.binary_search(j).expect("live column");
            dense[a][b] = v.clone();
        }
    }
    let mut out = vec![BigInt::one(); units];
    out.extend(snf::diagonalize(dense, false).divisors);
    out
}
