use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::eliminate::{elementary_divisors, rank_q};
use super::matrix::{MatrixJson, SparseMatrix};
use crate::error::HomologyError;

/// Finite chain complex of free abelian groups with an ordered cell basis in
/// each dimension. `boundaries[d]` maps `d`-cells to `(d-1)`-cells;
/// `boundaries[0]` has zero rows.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainComplex {
    cells: Vec<Vec<Value>>,
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    pub fn new(cells: Vec<Vec<Value>>, boundaries: Vec<SparseMatrix>) -> Result<Self, HomologyError> {
        if cells.len() != boundaries.len() {
            return Err(HomologyError::Shape(format!(
                "{} cell lists but {} boundary matrices",
                cells.len(),
                boundaries.len()
            )));
        }
        for (d, b) in boundaries.iter().enumerate() {
            let rows = if d == 0 { 0 } else { cells[d - 1].len() };
            if b.cols() != cells[d].len() || b.rows() != rows {
                return Err(HomologyError::Shape(format!(
                    "boundary in dimension {d} is {}x{}, expected {rows}x{}",
                    b.rows(),
                    b.cols(),
                    cells[d].len()
                )));
            }
        }
        Ok(ChainComplex { cells, boundaries })
    }

    /// Builds `boundaries[0]` itself.
    pub fn from_boundaries(cells: Vec<Vec<Value>>, higher: Vec<SparseMatrix>) -> Result<Self, HomologyError> {
        let n0 = cells.first().map_or(0, Vec::len);
        let mut boundaries = vec![SparseMatrix::zero(0, n0)];
        boundaries.extend(higher);
        Self::new(cells, boundaries)
    }

    /// Highest dimension present, or `None` for the empty complex.
    pub fn top_dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    pub fn dims(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self, d: usize) -> &[Value] {
        self.cells.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn boundary(&self, d: usize) -> &SparseMatrix {
        &self.boundaries[d]
    }

    /// Truncates to dimensions `0..=d`.
    pub fn truncate(&self, d: usize) -> ChainComplex {
        let k = (d + 1).min(self.cells.len());
        ChainComplex {
            cells: self.cells[..k].to_vec(),
            boundaries: self.boundaries[..k].to_vec(),
        }
    }

    pub fn euler_from_cells(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(d, c)| sign(d) * c.len() as i64)
            .sum()
    }

    /// First dimension `d` with `∂_{d-1} ∂_d ≠ 0`.
    pub fn dd_violation(&self) -> Option<usize> {
        (2..self.boundaries.len())
            .find(|&d| !self.boundaries[d - 1].mul(&self.boundaries[d]).expect("shapes checked").is_zero())
    }

    pub fn verify_dd_zero(&self) -> bool {
        self.dd_violation().is_none()
    }

    fn check(&self) -> Result<(), HomologyError> {
        match self.dd_violation() {
            Some(d) => Err(HomologyError::NotAComplex(d - 1, d)),
            None => Ok(()),
        }
    }

    /// Ranks of `∂_0, ..., ∂_D` over the rationals.
    pub fn boundary_ranks(&self) -> Vec<usize> {
        self.boundaries.par_iter().map(rank_q).collect()
    }

    /// Rational Betti numbers of the complex as given. The top dimension
    /// counts all cycles, so truncations overstate it.
    pub fn betti_q(&self) -> Result<Vec<usize>, HomologyError> {
        self.check()?;
        let ranks = self.boundary_ranks();
        Ok(betti_from_ranks(&self.cell_counts(), &ranks))
    }

    /// Free ranks and torsion coefficients over the integers.
    pub fn homology_z(&self) -> Result<HomologySummary, HomologyError> {
        self.check()?;
        let divisors: Vec<Vec<BigInt>> = self.boundaries.par_iter().map(elementary_divisors).collect();
        let ranks: Vec<usize> = divisors.iter().map(Vec::len).collect();
        let betti = betti_from_ranks(&self.cell_counts(), &ranks);
        let torsion = (0..self.dims())
            .map(|d| {
                divisors
                    .get(d + 1)
                    .map(|v| v.iter().filter(|x| !x.is_one()).cloned().collect())
                    .unwrap_or_default()
            })
            .collect();
        Ok(HomologySummary::new(betti, torsion, self.euler_from_cells()))
    }

    pub fn to_json(&self) -> ComplexJson {
        ComplexJson {
            dims: self
                .cells
                .iter()
                .zip(&self.boundaries)
                .map(|(c, b)| DimJson {
                    cells: c.clone(),
                    boundary: b.to_json(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &ComplexJson) -> Result<Self, HomologyError> {
        let cells = j.dims.iter().map(|d| d.cells.clone()).collect();
        let boundaries = j
            .dims
            .iter()
            .map(|d| SparseMatrix::from_json(&d.boundary))
            .collect::<Result<_, _>>()?;
        Self::new(cells, boundaries)
    }
}

fn sign(d: usize) -> i64 {
    if d % 2 == 0 {
        1
    } else {
        -1
    }
}

fn betti_from_ranks(counts: &[usize], ranks: &[usize]) -> Vec<usize> {
    (0..counts.len())
        .map(|d| counts[d] - ranks[d] - ranks.get(d + 1).copied().unwrap_or(0))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    pub betti: Vec<usize>,
    /// Torsion coefficients per dimension, each greater than one.
    #[serde(with = "bigint_lists")]
    pub torsion: Vec<Vec<BigInt>>,
    pub euler_cells: i64,
    pub euler_betti: i64,
}

impl HomologySummary {
    pub fn new(betti: Vec<usize>, torsion: Vec<Vec<BigInt>>, euler_cells: i64) -> Self {
        let euler_betti = betti.iter().enumerate().map(|(d, b)| sign(d) * *b as i64).sum();
        HomologySummary {
            betti,
            torsion,
            euler_cells,
            euler_betti,
        }
    }

    pub fn euler_consistent(&self) -> bool {
        self.euler_cells == self.euler_betti
    }

    /// Betti numbers with `H_0` reduced by one.
    pub fn reduced_betti(&self) -> Vec<usize> {
        let mut b = self.betti.clone();
        if let Some(b0) = b.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        b
    }
}

mod bigint_lists {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = v.iter().map(|l| l.iter().map(ToString::to_string).collect()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let strings: Vec<Vec<String>> = Vec::deserialize(d)?;
        strings
            .into_iter()
            .map(|l| {
                l.into_iter()
                    .map(|x| x.parse().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimJson {
    pub cells: Vec<Value>,
    pub boundary: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexJson {
    pub dims: Vec<DimJson>,
}
