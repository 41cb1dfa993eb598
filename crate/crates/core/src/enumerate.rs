//! Isomorph-free generation of thorned graphs, their forests and flags.
//!
//! Generation runs in two stages. Core multigraphs (every vertex of valence
//! at least three) are produced by filling adjacency matrices over
//! nonincreasing degree sequences. The labelled distinguished points are
//! then placed one block at a time, either on a free core vertex or on a new
//! vertex subdividing an edge. Smoothing the valence-two distinguished
//! vertices of any admissible graph recovers its core, so the two stages
//! together reach every isomorphism class. Duplicates are removed by
//! canonical bytes.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalGraph};
use crate::error::{Error, Result};
use crate::graph::{Forest, ForestFlag, ThornedGraph, UnionFind, MAX_FOREST_EDGES};

pub mod cache;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EnumerationQuery {
    pub n: usize,
    pub s: usize,
    /// Exclude separating edges. Without it, bridges are allowed but every
    /// unmarked vertex still has valence at least three and distinguished
    /// vertices have valence at least two.
    pub reduced: bool,
    pub degree_max: Option<i64>,
    pub require_basepoint_loop: bool,
    pub forbid_basepoint_loop: bool,
}

impl EnumerationQuery {
    pub fn new(n: usize, s: usize) -> Self {
        EnumerationQuery {
            n,
            s,
            reduced: true,
            degree_max: None,
            require_basepoint_loop: false,
            forbid_basepoint_loop: false,
        }
    }

    pub fn degree_max(mut self, k: i64) -> Self {
        self.degree_max = Some(k);
        self
    }

    pub fn require_basepoint_loop(mut self) -> Self {
        self.require_basepoint_loop = true;
        self
    }

    pub fn forbid_basepoint_loop(mut self) -> Self {
        self.forbid_basepoint_loop = true;
        self
    }

    pub fn with_bridges(mut self) -> Self {
        self.reduced = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Unsupported("rank 0 is not supported".into()));
        }
        if self.require_basepoint_loop && self.forbid_basepoint_loop {
            return Err(Error::Invalid(
                "cannot both require and forbid basepoint loops".into(),
            ));
        }
        if self.s == 0 && (self.degree_max.is_some() || self.require_basepoint_loop) {
            return Err(Error::Unsupported(
                "degree and basepoint loops are undefined for s = 0".into(),
            ));
        }
        Ok(())
    }

    fn accepts(&self, g: &ThornedGraph) -> bool {
        if let Some(k) = self.degree_max {
            match g.degree() {
                Ok(d) if d <= k => {}
                _ => return false,
            }
        }
        let loops = g.basepoint_loop_count();
        if self.require_basepoint_loop && loops == 0 {
            return false;
        }
        if self.forbid_basepoint_loop && loops > 0 {
            return false;
        }
        if self.reduced {
            g.is_reduced()
        } else {
            (0..g.vertex_count()).all(|v| {
                let special = g.basepoint() == Some(v) || g.marks().contains(&v);
                g.valence(v) >= if special { 2 } else { 3 }
            })
        }
    }
}

/// Strict upper bound on vertex counts: unmarked vertices have valence at
/// least three and distinguished ones at least two, so `V <= 2(n-1) + s`.
pub fn vertex_bound(n: usize, s: usize) -> usize {
    2 * n.saturating_sub(1) + s + 1
}

/// One representative per label-preserving isomorphism class, sorted by
/// canonical bytes.
pub fn enumerate_graphs(q: &EnumerationQuery) -> Result<Vec<CanonicalGraph>> {
    q.validate()?;
    let cores = core_graphs(q.n, !q.reduced);
    let bound = vertex_bound(q.n, q.s);
    let found: Vec<BTreeMap<Vec<u8>, CanonicalGraph>> = cores
        .par_iter()
        .map(|core| {
            let mut local = BTreeMap::new();
            decorate(core, q.s, &mut |g| {
                if q.accepts(g) {
                    assert!(g.vertex_count() < bound, "vertex bound violated");
                    let c = canonical_form(g);
                    local.entry(c.bytes().to_vec()).or_insert(c);
                }
            });
            local
        })
        .collect();
    let mut merged = BTreeMap::new();
    for part in found {
        for (k, v) in part {
            merged.entry(k).or_insert(v);
        }
    }
    Ok(merged.into_values().collect())
}

/// Connected multigraphs of rank `n` whose vertices all have valence at least
/// three, with or without separating edges. Rank one is represented by the
/// single-vertex loop, which only becomes admissible once decorated.
pub fn core_graphs(n: usize, allow_bridges: bool) -> Vec<ThornedGraph> {
    if n == 1 {
        return vec![ThornedGraph::rose(1, 0)];
    }
    let mut out: BTreeMap<Vec<u8>, ThornedGraph> = BTreeMap::new();
    for v in 1..=2 * (n - 1) {
        let e = n - 1 + v;
        for seq in degree_sequences(v, 2 * e) {
            fill_adjacency(&seq, &mut |edges| {
                if let Ok(g) = ThornedGraph::new(v, edges, None, vec![]) {
                    if allow_bridges || g.bridges().is_empty() {
                        let c = canonical_form(&g);
                        out.entry(c.bytes().to_vec())
                            .or_insert_with(|| c.graph().clone());
                    }
                }
            });
        }
    }
    out.into_values().collect()
}

/// Nonincreasing sequences of `len` parts, each at least three, summing to `total`.
fn degree_sequences(len: usize, total: usize) -> Vec<Vec<usize>> {
    fn rec(len: usize, total: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if len == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if total < 3 * len {
            return;
        }
        let hi = max.min(total - 3 * (len - 1));
        for d in (3..=hi).rev() {
            cur.push(d);
            rec(len - 1, total - d, d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, total, total, &mut Vec::new(), &mut out);
    out
}

/// Every multigraph (loops allowed) realising `degrees`, up to swapping
/// vertices that are still interchangeable when their row is filled.
fn fill_adjacency(degrees: &[usize], emit: &mut dyn FnMut(Vec<(usize, usize)>)) {
    let v = degrees.len();
    let mut state = Fill {
        v,
        rem: degrees.to_vec(),
        mult: vec![0; v * v],
        // twin[j]: vertex j is interchangeable with j - 1 so far
        twin: (0..v)
            .map(|j| j > 0 && degrees[j] == degrees[j - 1])
            .collect(),
        emit,
    };
    state.row(0);
}

struct Fill<'a> {
    v: usize,
    rem: Vec<usize>,
    mult: Vec<usize>,
    twin: Vec<bool>,
    emit: &'a mut dyn FnMut(Vec<(usize, usize)>),
}

impl Fill<'_> {
    fn row(&mut self, i: usize) {
        if i == self.v {
            let mut edges = Vec::new();
            for a in 0..self.v {
                for b in a..self.v {
                    for _ in 0..self.mult[a * self.v + b] {
                        edges.push((a, b));
                    }
                }
            }
            (self.emit)(edges);
            return;
        }
        let r = self.rem[i];
        for loops in 0..=r / 2 {
            if i + 1 == self.v && r != 2 * loops {
                continue;
            }
            self.rem[i] -= 2 * loops;
            self.mult[i * self.v + i] = loops;
            self.column(i, i + 1);
            self.mult[i * self.v + i] = 0;
            self.rem[i] += 2 * loops;
        }
    }

    fn column(&mut self, i: usize, j: usize) {
        if j == self.v {
            if self.rem[i] == 0 {
                let saved = self.twin.clone();
                for k in i + 2..self.v {
                    if self.mult[i * self.v + k] != self.mult[i * self.v + k - 1] {
                        self.twin[k] = false;
                    }
                }
                self.row(i + 1);
                self.twin = saved;
            }
            return;
        }
        let mut hi = self.rem[i].min(self.rem[j]);
        if j > i + 1 && self.twin[j] {
            hi = hi.min(self.mult[i * self.v + j - 1]);
        }
        let tail: usize = self.rem[j + 1..].iter().sum();
        for m in (0..=hi).rev() {
            if self.rem[i] - m > tail {
                break;
            }
            self.rem[i] -= m;
            self.rem[j] -= m;
            self.mult[i * self.v + j] = m;
            self.column(i, j + 1);
            self.mult[i * self.v + j] = 0;
            self.rem[i] += m;
            self.rem[j] += m;
        }
    }
}

/// Places the `s` labelled distinguished points on `core` in every possible
/// way: labels are grouped by a set partition, and each block sits on an
/// unused core vertex or on a new vertex subdividing a current edge.
fn decorate(core: &ThornedGraph, s: usize, emit: &mut dyn FnMut(&ThornedGraph)) {
    if s == 0 {
        emit(core);
        return;
    }
    for blocks in set_partitions(s) {
        let k = blocks.iter().copied().max().unwrap() + 1;
        let mut edges = core.edges().to_vec();
        let mut placed = Vec::with_capacity(k);
        let mut used = vec![false; core.vertex_count()];
        place_blocks(core.vertex_count(), core.vertex_count(), &mut edges, &mut used, &mut placed, k, &mut |vc, edges, placed| {
            let basepoint = placed[blocks[0]];
            let marks = blocks[1..].iter().map(|&b| placed[b]).collect();
            let g = ThornedGraph::from_parts_unchecked(vc, edges.to_vec(), Some(basepoint), marks);
            emit(&g);
        });
    }
}

#[allow(clippy::too_many_arguments)]
fn place_blocks(
    core_vertices: usize,
    vertex_count: usize,
    edges: &mut Vec<(usize, usize)>,
    used: &mut Vec<bool>,
    placed: &mut Vec<usize>,
    k: usize,
    emit: &mut dyn FnMut(usize, &[(usize, usize)], &[usize]),
) {
    if placed.len() == k {
        emit(vertex_count, edges, placed);
        return;
    }
    for v in 0..core_vertices {
        if used[v] {
            continue;
        }
        used[v] = true;
        placed.push(v);
        place_blocks(core_vertices, vertex_count, edges, used, placed, k, emit);
        placed.pop();
        used[v] = false;
    }
    for e in 0..edges.len() {
        let (a, b) = edges[e];
        let w = vertex_count;
        edges[e] = (a, w);
        edges.push((b, w));
        placed.push(w);
        place_blocks(core_vertices, vertex_count + 1, edges, used, placed, k, emit);
        placed.pop();
        edges.pop();
        edges[e] = (a, b);
    }
}

/// Set partitions of `{0..k}` as restricted growth strings.
pub fn set_partitions(k: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, cur: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            if cur.is_empty() && b > 0 {
                break;
            }
            cur.push(b);
            let m = if cur.len() == 1 { 0 } else { max.max(b) };
            rec(k, cur, m, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k == 0 {
        out.push(Vec::new());
    } else {
        rec(k, &mut Vec::new(), 0, &mut out);
    }
    out
}

/// All nonempty forests as edge masks, ordered by size then by mask.
pub fn forest_masks(g: &ThornedGraph) -> Vec<u64> {
    assert!(g.edge_count() <= MAX_FOREST_EDGES, "too many edges for forest masks");
    let candidates: Vec<usize> = (0..g.edge_count()).filter(|&e| !g.is_loop(e)).collect();
    let mut out = Vec::new();
    let mut uf_stack = vec![UnionFind::new(g.vertex_count())];
    fn rec(
        g: &ThornedGraph,
        candidates: &[usize],
        start: usize,
        mask: u64,
        uf_stack: &mut Vec<UnionFind>,
        out: &mut Vec<u64>,
    ) {
        for idx in start..candidates.len() {
            let e = candidates[idx];
            let (a, b) = g.edges()[e];
            let mut uf = uf_stack.last().unwrap().clone();
            if uf.union(a, b) {
                let m = mask | 1 << e;
                out.push(m);
                uf_stack.push(uf);
                rec(g, candidates, idx + 1, m, uf_stack, out);
                uf_stack.pop();
            }
        }
    }
    rec(g, &candidates, 0, 0, &mut uf_stack, &mut out);
    out.sort_by_key(|&m| (m.count_ones(), m.reverse_bits()));
    out
}

pub fn enumerate_forests(g: &ThornedGraph) -> Vec<Forest> {
    forest_masks(g).into_iter().map(Forest::from_mask).collect()
}

/// Strictly increasing chains of `p` nonempty forests, as mask lists.
pub fn flag_masks(forests: &[u64], p: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    if p == 0 {
        return out;
    }
    fn rec(forests: &[u64], p: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if cur.len() == p {
            out.push(cur.clone());
            return;
        }
        let last = cur.last().copied();
        for &f in forests {
            if let Some(l) = last {
                if f == l || f & l != l {
                    continue;
                }
            }
            cur.push(f);
            rec(forests, p, cur, out);
            cur.pop();
        }
    }
    rec(forests, p, &mut Vec::new(), &mut out);
    out
}

pub fn enumerate_flags(g: &ThornedGraph, p: usize) -> Vec<ForestFlag> {
    flag_masks(&forest_masks(g), p)
        .into_iter()
        .map(|masks| {
            ForestFlag::new(masks.into_iter().map(Forest::from_mask).collect())
                .expect("chains are strictly increasing")
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaCase {
    pub n: usize,
    pub s: usize,
    /// Reduced graphs with degree below n/2.
    pub graphs_checked: usize,
    /// Canonical hex of graphs below n/2 without a basepoint loop.
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharpnessWitness {
    pub n: usize,
    pub degree: i64,
    /// Smallest s admitting a witness, with the witness itself.
    pub witness: Option<(usize, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub cases: Vec<LemmaCase>,
    pub sharpness: Vec<SharpnessWitness>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.violations.is_empty())
    }
}

/// Exhaustive check that reduced graphs of degree `k < n/2` have a basepoint
/// loop, for `1 <= n <= n_max` and `1 <= s <= s_max`, plus witnesses of
/// degree `ceil(n/2)` without basepoint loops.
pub fn verify_basepoint_loop_lemma(n_max: usize, s_max: usize) -> Result<LemmaReport> {
    let mut cases = Vec::new();
    let mut sharpness = Vec::new();
    for n in 1..=n_max {
        let below = (n as i64 - 1) / 2;
        let ceil_half = (n as i64 + 1) / 2;
        let mut witness = None;
        for s in 1..=s_max {
            let checked = enumerate_graphs(&EnumerationQuery::new(n, s).degree_max(below))?;
            let violations = checked
                .iter()
                .filter(|c| c.graph().basepoint_loop_count() == 0)
                .map(CanonicalGraph::hex)
                .collect();
            cases.push(LemmaCase {
                n,
                s,
                graphs_checked: checked.len(),
                violations,
            });
            if witness.is_none() {
                let q = EnumerationQuery::new(n, s)
                    .degree_max(ceil_half)
                    .forbid_basepoint_loop();
                witness = enumerate_graphs(&q)?
                    .into_iter()
                    .find(|c| c.graph().degree() == Ok(ceil_half))
                    .map(|c| (s, c.hex()));
            }
        }
        sharpness.push(SharpnessWitness {
            n,
            degree: ceil_half,
            witness,
        });
    }
    Ok(LemmaReport { cases, sharpness })
}

/// Counts per canonical graph of how many candidates hit each class; used to
/// check that generation order does not matter.
pub fn class_multiset(graphs: &[CanonicalGraph]) -> HashMap<Vec<u8>, usize> {
    let mut m = HashMap::new();
    for g in graphs {
        *m.entry(g.bytes().to_vec()).or_insert(0) += 1;
    }
    m
}
