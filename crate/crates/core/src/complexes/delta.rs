use std::collections::HashMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use super::simplicial::SimplicialComplex;
use crate::error::{Error, Result};
use crate::homology::{ChainComplex, HomologySummary, SparseMatrix};

/// Ordered tuples of vertices spanning a face, repetitions allowed.
pub fn delta_cells(z: &SimplicialComplex, d: usize) -> Vec<Vec<usize>> {
    let faces = z.face_masks();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d + 1);
    fn rec(
        z: &SimplicialComplex,
        faces: &std::collections::HashSet<u64>,
        len: usize,
        mask: u64,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..z.vertex_count() {
            let m = mask | 1 << v;
            if faces.contains(&m) {
                cur.push(v);
                rec(z, faces, len, m, cur, out);
                cur.pop();
            }
        }
    }
    rec(z, &faces, d + 1, 0, &mut cur, &mut out);
    out
}

/// Chain complex of `Δ(Z)` through dimension `max_dim`, degenerate tuples
/// included.
pub fn delta_construction(z: &SimplicialComplex, max_dim: usize) -> Result<ChainComplex> {
    if max_dim < 1 {
        return Err(Error::Invalid("delta construction needs max_dim >= 1".into()));
    }
    let cells: Vec<Vec<Vec<usize>>> = (0..=max_dim).map(|d| delta_cells(z, d)).collect();
    let higher = (1..=max_dim)
        .map(|d| {
            let index: HashMap<&[usize], usize> = cells[d - 1]
                .iter()
                .enumerate()
                .map(|(i, c)| (c.as_slice(), i))
                .collect();
            let triplets = cells[d].iter().enumerate().flat_map(|(j, c)| {
                let index = &index;
                (0..c.len()).map(move |i| {
                    let mut f = c.clone();
                    f.remove(i);
                    (index[f.as_slice()], j, BigInt::from(if i % 2 == 0 { 1 } else { -1 }))
                })
            });
            SparseMatrix::from_triplets(cells[d - 1].len(), cells[d].len(), triplets).expect("in range")
        })
        .collect();
    let keys = cells
        .iter()
        .map(|l| l.iter().map(|c| serde_json::json!(c)).collect())
        .collect();
    Ok(ChainComplex::from_boundaries(keys, higher)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaCheck {
    pub max_check_dim: usize,
    pub simplicial: HomologySummary,
    pub delta: HomologySummary,
    pub delta_cells: Vec<usize>,
    /// Lowest dimension where the two disagree.
    pub mismatch: Option<usize>,
}

impl DeltaCheck {
    pub fn passed(&self) -> bool {
        self.mismatch.is_none()
    }
}

/// Compares integral homology of `Z` and `Δ(Z)` in dimensions up to
/// `max_check_dim`, building both one dimension higher.
pub fn delta_homology_check(z: &SimplicialComplex, max_check_dim: usize) -> Result<DeltaCheck> {
    let top = max_check_dim + 1;
    let simplicial = z.chain_complex(top).homology_z()?;
    let dz = delta_construction(z, top)?;
    let delta = dz.homology_z()?;
    let mismatch = (0..=max_check_dim).find(|&d| {
        let b = |h: &HomologySummary| h.betti.get(d).copied().unwrap_or(0);
        let t = |h: &HomologySummary| h.torsion.get(d).cloned().unwrap_or_default();
        b(&simplicial) != b(&delta) || t(&simplicial) != t(&delta)
    });
    Ok(DeltaCheck {
        max_check_dim,
        simplicial,
        delta,
        delta_cells: dz.cell_counts(),
        mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cell_counts() {
        let p = SimplicialComplex::point();
        let c = delta_construction(&p, 4).unwrap();
        assert_eq!(c.cell_counts(), vec![1; 5]);
        assert_eq!(c.truncate(4).betti_q().unwrap()[..4], [1, 0, 0, 0]);
        let edge = SimplicialComplex::simplex(1);
        assert_eq!(delta_cells(&edge, 1).len(), 4);
        assert!(delta_construction(&edge, 0).is_err());
    }

    #[test]
    fn spheres_and_points() {
        let circle = SimplicialComplex::simplex_boundary(2);
        let r = delta_homology_check(&circle, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.delta.betti[1], 1);
        let s2 = delta_homology_check(&SimplicialComplex::simplex_boundary(3), 2).unwrap();
        assert!(s2.passed());
        assert_eq!(s2.delta.betti[..3], [1, 0, 1]);
        let two = delta_homology_check(&SimplicialComplex::discrete(2), 1).unwrap();
        assert_eq!(two.delta.betti[0], 2);
        assert!(two.passed());
    }
}
