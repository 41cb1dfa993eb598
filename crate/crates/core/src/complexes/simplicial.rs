use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{simplicial_chain_complex, ChainComplex};

pub const MAX_VERTICES: usize = 64;

/// Finite abstract simplicial complex given by its maximal faces. Every
/// vertex `0..vertex_count` belongs to the complex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Vec<usize>>,
}

impl SimplicialComplex {
    /// `faces` may contain non-maximal faces; they are absorbed.
    pub fn new(vertex_count: usize, faces: Vec<Vec<usize>>) -> Result<Self> {
        if vertex_count > MAX_VERTICES {
            return Err(Error::Unsupported(format!("more than {MAX_VERTICES} vertices")));
        }
        let mut masks: BTreeSet<u64> = BTreeSet::new();
        for f in &faces {
            let mut m = 0u64;
            for &v in f {
                if v >= vertex_count {
                    return Err(Error::Invalid(format!("vertex {v} out of range")));
                }
                if m >> v & 1 == 1 {
                    return Err(Error::Invalid(format!("face {f:?} repeats vertex {v}")));
                }
                m |= 1 << v;
            }
            if m != 0 {
                masks.insert(m);
            }
        }
        for v in 0..vertex_count {
            masks.insert(1 << v);
        }
        let maximal: Vec<u64> = masks
            .iter()
            .copied()
            .filter(|&m| !masks.iter().any(|&o| o != m && o & m == m))
            .collect();
        let mut facets: Vec<Vec<usize>> = maximal.into_iter().map(vertices_of).collect();
        facets.sort();
        Ok(SimplicialComplex {
            vertex_count,
            facets,
        })
    }

    pub fn point() -> Self {
        Self::new(1, vec![]).expect("valid")
    }

    /// `k` isolated points.
    pub fn discrete(k: usize) -> Self {
        Self::new(k, vec![]).expect("valid")
    }

    /// The full simplex on `k + 1` vertices.
    pub fn simplex(k: usize) -> Self {
        Self::new(k + 1, vec![(0..=k).collect()]).expect("valid")
    }

    /// Boundary of the `k`-simplex, a `(k-1)`-sphere.
    pub fn simplex_boundary(k: usize) -> Self {
        let faces = (0..=k)
            .map(|i| (0..=k).filter(|&j| j != i).collect())
            .collect();
        Self::new(k + 1, faces).expect("valid")
    }

    /// The six-vertex projective plane.
    pub fn projective_plane() -> Self {
        let faces = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [1, 3, 5],
            [2, 4, 5],
        ];
        Self::new(6, faces.iter().map(|f| f.to_vec()).collect()).expect("valid")
    }

    /// Random complex on `vertex_count` vertices: `facet_count` random
    /// faces, each spanning between one and `max_dim + 1` vertices.
    pub fn random(vertex_count: usize, max_dim: usize, facet_count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let faces = (0..facet_count)
            .map(|_| {
                let size = rng.gen_range(1..=(max_dim + 1).min(vertex_count));
                let mut pool: Vec<usize> = (0..vertex_count).collect();
                let mut f = Vec::with_capacity(size);
                for _ in 0..size {
                    f.push(pool.swap_remove(rng.gen_range(0..pool.len())));
                }
                f
            })
            .collect();
        Self::new(vertex_count, faces).expect("valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Vec<usize>] {
        &self.facets
    }

    pub fn dimension(&self) -> usize {
        self.facets.iter().map(|f| f.len() - 1).max().unwrap_or(0)
    }

    /// Every face as a vertex mask.
    pub fn face_masks(&self) -> HashSet<u64> {
        let mut out = HashSet::new();
        for f in &self.facets {
            let m: u64 = f.iter().map(|&v| 1u64 << v).sum();
            let mut sub = m;
            while sub != 0 {
                out.insert(sub);
                sub = (sub - 1) & m;
            }
        }
        out
    }

    pub fn contains_face(&self, face: &[usize]) -> bool {
        let m: u64 = face.iter().fold(0, |m, &v| m | 1 << v);
        self.facets.iter().any(|f| {
            let fm: u64 = f.iter().map(|&v| 1u64 << v).sum();
            fm & m == m
        })
    }

    /// Simplicial chains through dimension `max_dim`.
    pub fn chain_complex(&self, max_dim: usize) -> ChainComplex {
        simplicial_chain_complex(&self.facets).truncate(max_dim)
    }
}

fn vertices_of(mask: u64) -> Vec<usize> {
    (0..64).filter(|i| mask >> i & 1 == 1).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn facets_are_maximal() {
        let z = SimplicialComplex::new(4, vec![vec![0, 1], vec![1, 0, 2], vec![2]]).unwrap();
        assert_eq!(z.facets(), &[vec![0, 1, 2], vec![3]]);
        assert!(z.contains_face(&[2, 0]));
        assert!(!z.contains_face(&[2, 3]));
        assert_eq!(z.face_masks().len(), 8);
        assert!(SimplicialComplex::new(2, vec![vec![0, 0]]).is_err());
        assert!(SimplicialComplex::new(2, vec![vec![2]]).is_err());
    }

    #[test]
    fn standard_examples() {
        assert_eq!(SimplicialComplex::simplex_boundary(3).chain_complex(3).betti_q().unwrap(), vec![1, 0, 1]);
        let rp2 = SimplicialComplex::projective_plane().chain_complex(2).homology_z().unwrap();
        assert_eq!(rp2.torsion[1].len(), 1);
        assert_eq!(SimplicialComplex::discrete(2).chain_complex(0).betti_q().unwrap(), vec![2]);
    }

    #[test]
    fn random_is_seeded() {
        let a = SimplicialComplex::random(8, 3, 6, 11);
        assert_eq!(a, SimplicialComplex::random(8, 3, 6, 11));
        assert!(a.dimension() <= 3);
        assert_eq!(a.vertex_count(), 8);
    }
}
