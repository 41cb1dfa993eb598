use std::collections::HashMap;

use num_bigint::BigInt;
use serde_json::Value;

use crate::enumerate::set_partitions;
use crate::homology::{ChainComplex, SparseMatrix};

/// Set partitions of `{0, ..., d}` into at most `n` blocks, as restricted
/// growth strings in lexicographic order.
pub fn pattern_cells(n: usize, d: usize) -> Vec<Vec<usize>> {
    set_partitions(d + 1)
        .into_iter()
        .filter(|p| p.iter().all(|&b| b < n))
        .collect()
}

/// Deletes position `i` and renumbers the blocks in order of first
/// appearance.
pub fn pattern_face(p: &[usize], i: usize) -> Vec<usize> {
    let mut relabel: Vec<Option<usize>> = vec![None; p.len()];
    let mut next = 0;
    p.iter()
        .enumerate()
        .filter(|&(k, _)| k != i)
        .map(|(_, &b)| {
            *relabel[b].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect()
}

/// Block lists, e.g. `[[0, 2], [1]]` for `0 1 0`.
pub fn pattern_key(p: &[usize]) -> Value {
    let blocks = p.iter().max().map_or(0, |m| m + 1);
    let mut out = vec![Vec::new(); blocks];
    for (pos, &b) in p.iter().enumerate() {
        out[b].push(pos);
    }
    serde_json::json!(out)
}

pub fn pattern_quotient(n: usize, max_dim: usize) -> ChainComplex {
    assert!(n >= 1, "rank must be positive");
    let cells: Vec<Vec<Vec<usize>>> = (0..=max_dim).map(|d| pattern_cells(n, d)).collect();
    let higher = (1..=max_dim)
        .map(|d| {
            let index: HashMap<&[usize], usize> = cells[d - 1]
                .iter()
                .enumerate()
                .map(|(i, c)| (c.as_slice(), i))
                .collect();
            let triplets = cells[d].iter().enumerate().flat_map(|(j, c)| {
                let index = &index;
                (0..=d).map(move |i| {
                    let f = pattern_face(c, i);
                    (index[f.as_slice()], j, BigInt::from(if i % 2 == 0 { 1 } else { -1 }))
                })
            });
            SparseMatrix::from_triplets(cells[d - 1].len(), cells[d].len(), triplets).expect("in range")
        })
        .collect();
    let keys = cells
        .iter()
        .map(|l| l.iter().map(|c| pattern_key(c)).collect())
        .collect();
    ChainComplex::from_boundaries(keys, higher).expect("consistent shapes")
}

/// Checks `d_i d_j = d_{j-1} d_i` for `i < j` on every cell through
/// `max_dim`. Returns the number of identities checked, or the first
/// failing `(cell, i, j)`.
pub fn check_semi_simplicial(n: usize, max_dim: usize) -> Result<usize, (Vec<usize>, usize, usize)> {
    let mut checked = 0;
    for d in 2..=max_dim {
        for c in pattern_cells(n, d) {
            for j in 1..=d {
                for i in 0..j {
                    let lhs = pattern_face(&pattern_face(&c, j), i);
                    let rhs = pattern_face(&pattern_face(&c, i), j - 1);
                    if lhs != rhs {
                        return Err((c, i, j));
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(checked)
}
