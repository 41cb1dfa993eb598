use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::complex::ChainComplex;
use super::matrix::{SparseColumn, SparseMatrix};
use super::reduce::{reduce_columns, ColumnReduction};
use crate::error::HomologyError;

/// Degree-zero map of chain complexes; `maps[d]` sends source `d`-cells to
/// target `d`-chains.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    maps: Vec<SparseMatrix>,
}

impl ChainMap {
    pub fn new(maps: Vec<SparseMatrix>) -> Self {
        ChainMap { maps }
    }

    pub fn identity(c: &ChainComplex) -> Self {
        ChainMap {
            maps: c.cell_counts().into_iter().map(SparseMatrix::identity).collect(),
        }
    }

    pub fn dims(&self) -> usize {
        self.maps.len()
    }

    pub fn map(&self, d: usize) -> &SparseMatrix {
        &self.maps[d]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap, HomologyError> {
        let k = self.maps.len().min(other.maps.len());
        let maps = (0..k)
            .map(|d| self.maps[d].mul(&other.maps[d]))
            .collect::<Result<_, _>>()?;
        Ok(ChainMap { maps })
    }

    /// Checks shapes against both complexes and `∂ f = f ∂` wherever both
    /// sides are defined.
    pub fn check(&self, source: &ChainComplex, target: &ChainComplex) -> Result<(), HomologyError> {
        let k = self.maps.len();
        if k > source.dims() || k > target.dims() {
            return Err(HomologyError::Shape(format!(
                "chain map has {k} dimensions, complexes have {} and {}",
                source.dims(),
                target.dims()
            )));
        }
        for (d, m) in self.maps.iter().enumerate() {
            if m.rows() != target.cells(d).len() || m.cols() != source.cells(d).len() {
                return Err(HomologyError::Shape(format!(
                    "map in dimension {d} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.cells(d).len(),
                    source.cells(d).len()
                )));
            }
        }
        for d in 1..k {
            let lhs = target.boundary(d).mul(&self.maps[d])?;
            let rhs = self.maps[d - 1].mul(source.boundary(d))?;
            if lhs != rhs {
                return Err(HomologyError::NotAChainMap(d));
            }
        }
        Ok(())
    }

    pub fn commutes(&self, source: &ChainComplex, target: &ChainComplex) -> bool {
        self.check(source, target).is_ok()
    }
}

/// Basis of `H_d` made of cycles indexed by cells, chosen left to right in
/// cell order.
pub struct HomologyBasis {
    dim: usize,
    cycles: ColumnReduction,
    boundaries: Option<ColumnReduction>,
    essential: Vec<usize>,
}

impl HomologyBasis {
    pub fn new(c: &ChainComplex, d: usize) -> Result<Self, HomologyError> {
        if d >= c.dims() {
            return Err(HomologyError::Shape(format!("no dimension {d}")));
        }
        let cycles = reduce_columns(c.boundary(d));
        let boundaries = (d + 1 < c.dims()).then(|| reduce_columns(c.boundary(d + 1)));
        let essential = (0..c.cells(d).len())
            .filter(|&j| {
                cycles.reduced[j].is_empty()
                    && boundaries.as_ref().is_none_or(|b| b.low_owner[j].is_none())
            })
            .collect();
        Ok(HomologyBasis {
            dim: d,
            cycles,
            boundaries,
            essential,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.essential.len()
    }

    /// Cells whose cycles represent the basis.
    pub fn essential_cells(&self) -> &[usize] {
        &self.essential
    }

    pub fn cycle(&self, k: usize) -> &SparseColumn {
        &self.cycles.ops[self.essential[k]]
    }

    /// Coordinates of the class of a cycle `x`.
    pub fn coordinates(&self, x: &[(usize, BigInt)]) -> Result<Vec<BigRational>, HomologyError> {
        let mut v: BTreeMap<usize, BigRational> = x
            .iter()
            .map(|(i, a)| (*i, BigRational::from_integer(a.clone())))
            .collect();
        let mut out = vec![BigRational::zero(); self.essential.len()];
        while let Some((&l, a)) = v.iter().next_back() {
            let a = a.clone();
            let owner = self.boundaries.as_ref().and_then(|b| b.low_owner[l]);
            let column = match owner {
                Some(p) => &self.boundaries.as_ref().unwrap().reduced[p],
                None if self.cycles.reduced[l].is_empty() => {
                    let k = self.essential.binary_search(&l).expect("essential cycle");
                    let col = &self.cycles.ops[l];
                    out[k] = &a / BigRational::from_integer(col.last().unwrap().1.clone());
                    col
                }
                None => return Err(HomologyError::Shape(format!("chain in dimension {} is not a cycle", self.dim))),
            };
            let f = &a / BigRational::from_integer(column.last().unwrap().1.clone());
            for (i, b) in column {
                let e = v.entry(*i).or_insert_with(BigRational::zero);
                *e -= &f * BigRational::from_integer(b.clone());
                if e.is_zero() {
                    v.remove(i);
                }
            }
            debug_assert!(!v.contains_key(&l));
        }
        Ok(out)
    }
}

/// Matrix of `f_*` on `H_d` in the chosen bases: rows index target classes,
/// columns source classes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InducedMap {
    pub dim: usize,
    pub source_rank: usize,
    pub target_rank: usize,
    #[serde(with = "rational_matrix")]
    pub matrix: Vec<Vec<BigRational>>,
    pub rank: usize,
    pub injective: bool,
    pub surjective: bool,
    pub iso: bool,
}

impl InducedMap {
    pub fn is_identity(&self) -> bool {
        self.source_rank == self.target_rank
            && self.matrix.iter().enumerate().all(|(i, row)| {
                row.iter()
                    .enumerate()
                    .all(|(j, x)| if i == j { x.is_one() } else { x.is_zero() })
            })
    }
}

pub fn induced_map(f: &ChainMap, source: &ChainComplex, target: &ChainComplex, d: usize) -> Result<InducedMap, HomologyError> {
    f.check(source, target)?;
    if d >= f.dims() {
        return Err(HomologyError::Shape(format!("chain map has no dimension {d}")));
    }
    let sb = HomologyBasis::new(source, d)?;
    let tb = HomologyBasis::new(target, d)?;
    let mut matrix = vec![vec![BigRational::zero(); sb.rank()]; tb.rank()];
    for k in 0..sb.rank() {
        let image = f.map(d).apply(sb.cycle(k));
        for (i, x) in tb.coordinates(&image)?.into_iter().enumerate() {
            matrix[i][k] = x;
        }
    }
    let rank = dense_rank_q(matrix.clone());
    Ok(InducedMap {
        dim: d,
        source_rank: sb.rank(),
        target_rank: tb.rank(),
        rank,
        injective: rank == sb.rank(),
        surjective: rank == tb.rank(),
        iso: rank == sb.rank() && rank == tb.rank(),
        matrix,
    })
}

/// Induced maps in every dimension below the top one of either complex.
pub fn induced_maps(f: &ChainMap, source: &ChainComplex, target: &ChainComplex) -> Result<Vec<InducedMap>, HomologyError> {
    let top = f.dims().min(source.dims()).min(target.dims());
    (0..top.saturating_sub(1))
        .map(|d| induced_map(f, source, target, d))
        .collect()
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
pub fn dense_rank_q(mut rows: Vec<Vec<BigRational>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for x in rows[rank].iter_mut() {
            *x = &*x / &pivot;
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for k in 0..cols {
                    let delta = &f * &rows[rank][k];
                    rows[r][k] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

mod rational_matrix {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(m: &[Vec<BigRational>], s: S) -> Result<S::Ok, S::Error> {
        let strings: Vec<Vec<String>> = m.iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        strings.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigRational>>, D::Error> {
        let strings: Vec<Vec<String>> = Vec::deserialize(d)?;
        strings
            .into_iter()
            .map(|r| {
                r.into_iter()
                    .map(|x| x.parse().map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}
