use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::SparseMatrix;

type Dense = Vec<Vec<BigInt>>;

/// `left * m * right = diag(divisors, 0, ...)` with unimodular transforms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub divisors: Vec<BigInt>,
    pub left: Dense,
    pub right: Dense,
}

impl SmithForm {
    /// Recomputes `left * m * right` and compares it with the diagonal.
    pub fn verify(&self, m: &SparseMatrix) -> bool {
        let (r, c) = (m.rows(), m.cols());
        let d = dense_mul(&dense_mul(&self.left, &m.to_dense(), c), &self.right, c);
        let diag_ok = (0..r).all(|i| {
            (0..c).all(|j| {
                let want = if i == j && i < self.divisors.len() {
                    self.divisors[i].clone()
                } else {
                    BigInt::zero()
                };
                d[i][j] == want
            })
        });
        let chain_ok = self.divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero());
        let unimodular = determinant(&self.left).abs().is_one() && determinant(&self.right).abs().is_one();
        diag_ok && chain_ok && unimodular
    }
}

pub fn smith_normal_form(m: &SparseMatrix) -> SmithForm {
    let d = diagonalize(m.to_dense(), true);
    let left = d.left.unwrap_or_else(|| identity(m.rows()));
    let right = d.right.unwrap_or_else(|| identity(m.cols()));
    SmithForm {
        divisors: d.divisors,
        left,
        right,
    }
}

pub(crate) struct Diagonal {
    pub divisors: Vec<BigInt>,
    pub left: Option<Dense>,
    pub right: Option<Dense>,
}

fn identity(n: usize) -> Dense {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

/// In-place Smith reduction of a dense matrix.
pub(crate) fn diagonalize(mut a: Dense, track: bool) -> Diagonal {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut left = track.then(|| identity(rows));
    let mut right = track.then(|| identity(cols));
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = smallest_entry(&a, t) else { break };
        swap_rows(&mut a, left.as_mut(), t, pi);
        swap_cols(&mut a, right.as_mut(), t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                add_row(&mut a, left.as_mut(), i, t, &-q);
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col(&mut a, right.as_mut(), j, t, &-q);
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (pi, pj) = smallest_in_cross(&a, t);
                swap_rows(&mut a, left.as_mut(), t, pi);
                swap_cols(&mut a, right.as_mut(), t, pj);
                continue;
            }
            let bad = (t + 1..rows).find_map(|i| {
                (t + 1..cols)
                    .any(|j| !(&a[i][j] % &a[t][t]).is_zero())
                    .then_some(i)
            });
            match bad {
                Some(i) => add_row(&mut a, left.as_mut(), t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -&*x;
            }
            if let Some(l) = left.as_mut() {
                for x in l[t].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        t += 1;
    }
    let divisors = (0..t).map(|i| a[i][i].clone()).collect();
    Diagonal {
        divisors,
        left,
        right,
    }
}

fn smallest_entry(a: &Dense, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(BigInt, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if v.is_zero() {
                continue;
            }
            let m = v.abs();
            if best.as_ref().is_none_or(|(b, _, _)| m < *b) {
                let unit = m.is_one();
                best = Some((m, i, j));
                if unit {
                    return best.map(|(_, i, j)| (i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Smallest nonzero entry in row `t` or column `t`.
fn smallest_in_cross(a: &Dense, t: usize) -> (usize, usize) {
    let col = (t..a.len()).map(|i| (i, t));
    let row = (t..a[0].len()).map(|j| (t, j));
    col.chain(row)
        .filter(|&(i, j)| !a[i][j].is_zero())
        .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
        .expect("pivot cross is nonzero")
}

fn swap_rows(a: &mut Dense, left: Option<&mut Dense>, i: usize, k: usize) {
    if i != k {
        a.swap(i, k);
        if let Some(l) = left {
            l.swap(i, k);
        }
    }
}

fn swap_cols(a: &mut Dense, right: Option<&mut Dense>, j: usize, l: usize) {
    if j != l {
        for row in a.iter_mut() {
            row.swap(j, l);
        }
        if let Some(r) = right {
            for row in r.iter_mut() {
                row.swap(j, l);
            }
        }
    }
}

/// row_i += f * row_k
fn add_row(a: &mut Dense, left: Option<&mut Dense>, i: usize, k: usize, f: &BigInt) {
    let src = a[k].clone();
    for (x, y) in a[i].iter_mut().zip(&src) {
        *x += f * y;
    }
    if let Some(l) = left {
        let src = l[k].clone();
        for (x, y) in l[i].iter_mut().zip(&src) {
            *x += f * y;
        }
    }
}

/// col_j += f * col_k
fn add_col(a: &mut Dense, right: Option<&mut Dense>, j: usize, k: usize, f: &BigInt) {
    for row in a.iter_mut() {
        let y = row[k].clone();
        row[j] += f * y;
    }
    if let Some(r) = right {
        for row in r.iter_mut() {
            let y = row[k].clone();
            row[j] += f * y;
        }
    }
}

fn dense_mul(a: &Dense, b: &Dense, inner_if_empty: usize) -> Dense {
    let inner = b.len();
    let cols = b.first().map_or(inner_if_empty, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Integer determinant by Bareiss elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Dense = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}
