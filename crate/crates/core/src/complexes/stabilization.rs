use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::spine::{SpineCell, SpineComplex};
use crate::canon::canonicalize;
use crate::error::{Error, Result};
use crate::graph::{mask_indices, ThornedGraph};
use crate::homology::{ChainMap, SparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StabilizationKind {
    /// New loop at the basepoint: `(n, s) -> (n + 1, s)`.
    Alpha,
    /// New mark at the basepoint: `(n, s) -> (n, s + 1)`.
    Mu,
    /// Edge joining the last two distinguished points, which are then
    /// forgotten: `(n, s) -> (n + 1, s - 2)`.
    Beta,
}

impl StabilizationKind {
    pub const ALL: [StabilizationKind; 3] = [Self::Alpha, Self::Mu, Self::Beta];

    pub fn name(self) -> &'static str {
        match self {
            Self::Alpha => "alpha",
            Self::Mu => "mu",
            Self::Beta => "beta",
        }
    }

    pub fn target(self, n: usize, s: usize) -> Result<(usize, usize)> {
        match self {
            Self::Alpha if s >= 1 => Ok((n + 1, s)),
            Self::Mu if s >= 1 => Ok((n, s + 1)),
            Self::Beta if s >= 2 => Ok((n + 1, s - 2)),
            _ => Err(Error::Unsupported(format!("{} is not defined for s = {s}", self.name()))),
        }
    }

    /// Image graph. Existing edges keep their indices.
    pub fn apply(self, g: &ThornedGraph) -> Result<ThornedGraph> {
        let h = match self {
            Self::Alpha => {
                if g.basepoint().is_none() {
                    return Err(crate::error::GraphError::NoBasepoint.into());
                }
                g.wedge_loop()
            }
            Self::Mu => g.add_mark_at_basepoint()?,
            Self::Beta => g.join_last_two()?,
        };
        let (n, s) = self.target(g.rank(), g.s())?;
        if h.rank() != n || h.s() != s {
            return Err(Error::Invalid(format!("{} changed parameters unexpectedly", self.name())));
        }
        if g.is_reduced() && !h.is_reduced() {
            return Err(Error::Invalid(format!("{} produced a non-reduced graph", self.name())));
        }
        Ok(h)
    }
}

impl fmt::Display for StabilizationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StabilizationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Self::Alpha),
            "mu" => Ok(Self::Mu),
            "beta" => Ok(Self::Beta),
            _ => Err(Error::Invalid(format!("unknown map {s:?}"))),
        }
    }
}

/// Cellular map `(G, flag) -> (φ(G), flag)` between spine quotients, checked
/// against both boundaries.
pub fn stabilization_chain_map(kind: StabilizationKind, source: &SpineComplex, target: &SpineComplex) -> Result<ChainMap> {
    let expected = kind.target(source.n(), source.s())?;
    if expected != (target.n(), target.s()) {
        return Err(Error::Invalid(format!(
            "{kind} sends ({}, {}) to {expected:?}, target is ({}, {})",
            source.n(),
            source.s(),
            target.n(),
            target.s()
        )));
    }
    let images: Vec<(usize, Vec<usize>)> = source
        .graphs()
        .par_iter()
        .map(|g| {
            let h = kind.apply(g.graph())?;
            let can = canonicalize(&h);
            let t = target.graph_index(can.canonical.bytes()).ok_or_else(|| {
                Error::Invalid(format!("{kind} image of {} is not a target 0-cell", g.hex()))
            })?;
            Ok((t, can.edge_map))
        })
        .collect::<Result<_>>()?;
    let dims = source.complex().dims().min(target.complex().dims());
    let maps = (0..dims)
        .map(|d| {
            let columns: Vec<Vec<(usize, BigInt)>> = source
                .cells(d)
                .par_iter()
                .map(|cell| {
                    let (t, relabel) = &images[cell.graph];
                    let flag: Vec<u64> = cell
                        .flag
                        .iter()
                        .map(|&m| mask_indices(m).fold(0, |acc, e| acc | 1 << relabel[e]))
                        .collect();
                    let image = SpineCell {
                        graph: *t,
                        flag: target.canonical_flag(*t, &flag),
                    };
                    let row = target
                        .cell_index(&image)
                        .ok_or_else(|| Error::Invalid(format!("{kind} image cell {image:?} missing")))?;
                    Ok(vec![(row, BigInt::from(1))])
                })
                .collect::<Result<_>>()?;
            Ok(SparseMatrix::from_columns(target.cells(d).len(), columns))
        })
        .collect::<Result<Vec<_>>>()?;
    let f = ChainMap::new(maps);
    f.check(source.complex(), target.complex())?;
    Ok(f)
}
