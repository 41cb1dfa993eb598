//! Quotient of the spine by the group action.
//!
//! A `d`-cell is an isomorphism class of pairs `(G, F_1 ⊊ ... ⊊ F_d)` with
//! `G` a reduced thorned graph and the `F_i` nonempty forests, standing for
//! the chain `G > G/F_1 > ... > G/F_d`. Face 0 collapses `F_1` and re-roots
//! the chain at `G/F_1`; face `i > 0` drops `F_i`. Automorphisms preserving a
//! flag fix each member (the members have different sizes), so every cell
//! keeps its orientation and signs `(-1)^i` pass to the quotient.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::canon::{canonicalize, CanonicalGraph};
use crate::enumerate::{enumerate_graphs, flag_masks, forest_masks, EnumerationQuery};
use crate::error::{Error, Result};
use crate::graph::{mask_indices, Forest};
use crate::homology::{ChainComplex, SparseMatrix};

pub const DEFAULT_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpineOptions {
    /// Keep only graphs with a loop at the basepoint.
    pub restrict_to_l: bool,
    pub degree_max: Option<i64>,
    pub max_dim: usize,
    /// Cap on the number of cells, and on raw flags per graph.
    pub budget: usize,
}

impl Default for SpineOptions {
    fn default() -> Self {
        SpineOptions {
            restrict_to_l: false,
            degree_max: None,
            max_dim: 2,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl SpineOptions {
    pub fn max_dim(mut self, d: usize) -> Self {
        self.max_dim = d;
        self
    }

    pub fn restrict_to_l(mut self) -> Self {
        self.restrict_to_l = true;
        self
    }

    pub fn degree_max(mut self, k: i64) -> Self {
        self.degree_max = Some(k);
        self
    }

    pub fn budget(mut self, b: usize) -> Self {
        self.budget = b;
        self
    }
}

/// Orbit representative: index of the canonical graph and the least flag
/// in its orbit, as edge masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SpineCell {
    pub graph: usize,
    pub flag: Vec<u64>,
}

struct GraphData {
    symmetries: Vec<Vec<usize>>,
    /// Forest mask -> (quotient graph index, edge relabelling).
    collapses: HashMap<u64, (usize, Vec<Option<usize>>)>,
}

pub struct SpineComplex {
    n: usize,
    s: usize,
    options: SpineOptions,
    graphs: Vec<CanonicalGraph>,
    graph_index: HashMap<Vec<u8>, usize>,
    data: Vec<GraphData>,
    cells: Vec<Vec<SpineCell>>,
    index: Vec<HashMap<SpineCell, usize>>,
    largest_forest: usize,
    complex: ChainComplex,
}

impl std::fmt::Debug for SpineComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpineComplex")
            .field("n", &self.n)
            .field("s", &self.s)
            .field("options", &self.options)
            .field("cells", &self.cell_counts())
            .finish()
    }
}

impl SpineComplex {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn options(&self) -> &SpineOptions {
        &self.options
    }

    pub fn graphs(&self) -> &[CanonicalGraph] {
        &self.graphs
    }

    pub fn graph_index(&self, bytes: &[u8]) -> Option<usize> {
        self.graph_index.get(bytes).copied()
    }

    pub fn cells(&self, d: usize) -> &[SpineCell] {
        self.cells.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn cell_index(&self, cell: &SpineCell) -> Option<usize> {
        self.index.get(cell.flag.len())?.get(cell).copied()
    }

    pub fn complex(&self) -> &ChainComplex {
        &self.complex
    }

    /// Whether every cell of the untruncated quotient is present.
    pub fn is_complete(&self) -> bool {
        self.largest_forest <= self.options.max_dim
    }

    /// Dimension of the untruncated quotient, if every cell is present.
    pub fn top_dim(&self) -> Option<usize> {
        self.is_complete().then_some(self.largest_forest)
    }

    /// Highest dimension whose homology is unaffected by truncation.
    pub fn exact_through(&self) -> Option<usize> {
        match self.top_dim() {
            Some(d) => Some(d),
            None => self.options.max_dim.checked_sub(1),
        }
    }

    /// Least image of `flag` under the symmetries of graph `g`.
    pub fn canonical_flag(&self, g: usize, flag: &[u64]) -> Vec<u64> {
        least_image(&self.data[g].symmetries, flag)
    }

    pub fn cell_key(&self, cell: &SpineCell) -> Value {
        cell_key(&self.graphs[cell.graph], &cell.flag)
    }
}

fn cell_key(g: &CanonicalGraph, flag: &[u64]) -> Value {
    let flag: Vec<Vec<usize>> = flag.iter().map(|&m| mask_indices(m).collect()).collect();
    serde_json::json!({ "graph": g.hex(), "flag": flag })
}

/// Lexicographic order of the sorted index lists of two edge sets.
fn set_cmp(mut a: u64, mut b: u64) -> Ordering {
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (x, y) = (a.trailing_zeros(), b.trailing_zeros());
        if x != y {
            return x.cmp(&y);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

fn flag_cmp(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match set_cmp(*x, *y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

fn permute(sym: &[usize], mask: u64) -> u64 {
    mask_indices(mask).fold(0, |m, e| m | 1 << sym[e])
}

fn least_image(symmetries: &[Vec<usize>], flag: &[u64]) -> Vec<u64> {
    let mut best = flag.to_vec();
    let mut cand = vec![0u64; flag.len()];
    for sym in symmetries {
        for (c, &f) in cand.iter_mut().zip(flag) {
            *c = permute(sym, f);
        }
        if flag_cmp(&cand, &best) == Ordering::Less {
            best.copy_from_slice(&cand);
        }
    }
    best
}

/// The enumeration whose output forms the 0-cells.
pub fn spine_query(n: usize, s: usize, options: &SpineOptions) -> EnumerationQuery {
    let mut q = EnumerationQuery::new(n, s);
    if options.restrict_to_l {
        q = q.require_basepoint_loop();
    }
    if let Some(k) = options.degree_max {
        q = q.degree_max(k);
    }
    q
}

pub fn spine_quotient(n: usize, s: usize, options: SpineOptions) -> Result<SpineComplex> {
    let graphs = enumerate_graphs(&spine_query(n, s, &options))?;
    spine_quotient_from_graphs(n, s, options, graphs)
}

/// As [`spine_quotient`], with the 0-cells supplied (for instance from the
/// enumeration cache). They must be the sorted output of [`spine_query`].
pub fn spine_quotient_from_graphs(
    n: usize,
    s: usize,
    options: SpineOptions,
    graphs: Vec<CanonicalGraph>,
) -> Result<SpineComplex> {
    if let Some(g) = graphs.iter().find(|g| g.graph().rank() != n || g.graph().s() != s) {
        return Err(Error::Invalid(format!("0-cell {} does not have rank {n} and s = {s}", g.hex())));
    }
    if graphs.len() > options.budget {
        return Err(Error::Budget {
            what: "spine 0-cells",
            count: graphs.len(),
            limit: options.budget,
        });
    }
    let graph_index: HashMap<Vec<u8>, usize> = graphs
        .iter()
        .enumerate()
        .map(|(i, g)| (g.bytes().to_vec(), i))
        .collect();

    let per_graph: Vec<(GraphData, Vec<Vec<Vec<u64>>>, usize)> = graphs
        .par_iter()
        .map(|g| {
            let symmetries = g.edge_symmetries();
            let forests = forest_masks(g.graph());
            let largest = forests.iter().map(|m| m.count_ones() as usize).max().unwrap_or(0);
            let mut collapses = HashMap::with_capacity(forests.len());
            for &f in &forests {
                let c = g.graph().collapse(&Forest::from_mask(f))?;
                let can = canonicalize(&c.graph);
                let target = *graph_index.get(can.canonical.bytes()).ok_or_else(|| {
                    Error::Invalid(format!(
                        "collapse of {} is missing from the 0-cells",
                        g.hex()
                    ))
                })?;
                let relabel = c.edge_map.iter().map(|e| e.map(|e| can.edge_map[e])).collect();
                collapses.insert(f, (target, relabel));
            }
            let mut by_dim = vec![Vec::new()];
            for d in 1..=options.max_dim {
                let raw = flag_masks(&forests, d);
                if raw.len() > options.budget {
                    return Err(Error::Budget {
                        what: "flags of one graph",
                        count: raw.len(),
                        limit: options.budget,
                    });
                }
                let mut reps: Vec<Vec<u64>> = raw
                    .into_iter()
                    .filter(|f| least_image(&symmetries, f) == *f)
                    .collect();
                reps.sort_by(|a, b| flag_cmp(a, b));
                by_dim.push(reps);
            }
            Ok((
                GraphData {
                    symmetries,
                    collapses,
                },
                by_dim,
                largest,
            ))
        })
        .collect::<Result<_>>()?;

    let mut cells: Vec<Vec<SpineCell>> = vec![Vec::new(); options.max_dim + 1];
    let mut data = Vec::with_capacity(graphs.len());
    let mut largest_forest = 0;
    for (g, (gd, by_dim, largest)) in per_graph.into_iter().enumerate() {
        cells[0].push(SpineCell {
            graph: g,
            flag: Vec::new(),
        });
        for (d, reps) in by_dim.into_iter().enumerate().skip(1) {
            cells[d].extend(reps.into_iter().map(|flag| SpineCell { graph: g, flag }));
        }
        largest_forest = largest_forest.max(largest);
        data.push(gd);
    }
    let total: usize = cells.iter().map(Vec::len).sum();
    if total > options.budget {
        return Err(Error::Budget {
            what: "spine cells",
            count: total,
            limit: options.budget,
        });
    }
    let index: Vec<HashMap<SpineCell, usize>> = cells
        .iter()
        .map(|l| l.iter().cloned().enumerate().map(|(i, c)| (c, i)).collect())
        .collect();

    let lookup = |cell: SpineCell| -> Result<usize> {
        index[cell.flag.len()]
            .get(&cell)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("face {cell:?} is not a cell")))
    };
    let higher = (1..cells.len())
        .map(|d| {
            let columns: Vec<Vec<(usize, BigInt)>> = cells[d]
                .par_iter()
                .map(|cell| {
                    let g = cell.graph;
                    let (target, relabel) = &data[g].collapses[&cell.flag[0]];
                    let rest: Vec<u64> = cell.flag[1..]
                        .iter()
                        .map(|&m| {
                            mask_indices(m & !cell.flag[0])
                                .fold(0, |acc, e| acc | 1 << relabel[e].expect("edge survives"))
                        })
                        .collect();
                    let mut column = vec![(
                        lookup(SpineCell {
                            graph: *target,
                            flag: least_image(&data[*target].symmetries, &rest),
                        })?,
                        BigInt::from(1),
                    )];
                    for i in 1..=d {
                        let mut flag = cell.flag.clone();
                        flag.remove(i - 1);
                        let row = lookup(SpineCell {
                            graph: g,
                            flag: least_image(&data[g].symmetries, &flag),
                        })?;
                        column.push((row, BigInt::from(if i % 2 == 0 { 1 } else { -1 })));
                    }
                    Ok(column)
                })
                .collect::<Result<_>>()?;
            Ok(SparseMatrix::from_columns(cells[d - 1].len(), columns))
        })
        .collect::<Result<Vec<_>>>()?;
    let keys = cells
        .iter()
        .map(|l| l.iter().map(|c| cell_key(&graphs[c.graph], &c.flag)).collect())
        .collect();
    let complex = ChainComplex::from_boundaries(keys, higher)?;
    if let Some(d) = complex.dd_violation() {
        return Err(crate::error::HomologyError::NotAComplex(d - 1, d).into());
    }
    Ok(SpineComplex {
        n,
        s,
        options,
        graphs,
        graph_index,
        data,
        cells,
        index,
        largest_forest,
        complex,
    })
}
