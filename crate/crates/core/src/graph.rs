//! Thorned graphs and the forest-collapse machinery.
//!
//! A [`ThornedGraph`] is a finite connected multigraph with an optional
//! basepoint and a list of marked vertices. Each mark stands for a thorn
//! (a free edge) attached at that vertex; thorns are never stored as edges.
//! The distinguished points are labelled: `p_0` is the basepoint and
//! `p_i = marks[i - 1]` for `i >= 1`, so `s = marks.len() + 1` when a
//! basepoint is present and `s = 0` otherwise.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::GraphError;

/// Forest operations use `u64` edge masks.
pub const MAX_FOREST_EDGES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ThornedGraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    basepoint: Option<usize>,
    marks: Vec<usize>,
}

impl ThornedGraph {
    /// Builds a graph, checking indices and connectivity. Edge endpoints are
    /// stored with the smaller index first.
    pub fn new(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        basepoint: Option<usize>,
        marks: Vec<usize>,
    ) -> Result<Self, GraphError> {
        if vertex_count == 0 {
            return Err(GraphError::Empty);
        }
        let check = |v: usize| {
            if v < vertex_count {
                Ok(())
            } else {
                Err(GraphError::VertexOutOfRange(v))
            }
        };
        for &(u, v) in &edges {
            check(u)?;
            check(v)?;
        }
        if let Some(b) = basepoint {
            check(b)?;
        } else if !marks.is_empty() {
            return Err(GraphError::MarksWithoutBasepoint);
        }
        for &m in &marks {
            check(m)?;
        }
        let edges = edges
            .into_iter()
            .map(|(u, v)| if u <= v { (u, v) } else { (v, u) })
            .collect();
        let g = ThornedGraph {
            vertex_count,
            edges,
            basepoint,
            marks,
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Standard thorned rose: one vertex, `n` loops and `s - 1` thorns at the
    /// basepoint. With `s = 0` the rose is unpointed.
    pub fn rose(n: usize, s: usize) -> Self {
        ThornedGraph {
            vertex_count: 1,
            edges: vec![(0, 0); n],
            basepoint: (s > 0).then_some(0),
            marks: vec![0; s.saturating_sub(1)],
        }
    }

    /// Two vertices joined by three edges, basepoint at vertex 0 when `s >= 1`
    /// and all marks there too.
    pub fn theta(s: usize) -> Self {
        ThornedGraph {
            vertex_count: 2,
            edges: vec![(0, 1); 3],
            basepoint: (s > 0).then_some(0),
            marks: vec![0; s.saturating_sub(1)],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn basepoint(&self) -> Option<usize> {
        self.basepoint
    }

    pub fn marks(&self) -> &[usize] {
        &self.marks
    }

    /// Number of distinguished points, basepoint included.
    pub fn s(&self) -> usize {
        if self.basepoint.is_some() {
            self.marks.len() + 1
        } else {
            0
        }
    }

    /// First Betti number `E - V + 1`.
    pub fn rank(&self) -> usize {
        self.edges.len() + 1 - self.vertex_count
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64
    }

    /// Valence among stored edges; loops count twice.
    pub fn valence(&self, v: usize) -> usize {
        self.edges
            .iter()
            .map(|&(a, b)| (a == v) as usize + (b == v) as usize)
            .sum()
    }

    pub fn valences(&self) -> Vec<usize> {
        let mut val = vec![0; self.vertex_count];
        for &(a, b) in &self.edges {
            val[a] += 1;
            val[b] += 1;
        }
        val
    }

    pub fn mark_multiplicity(&self, v: usize) -> usize {
        self.marks.iter().filter(|&&m| m == v).count()
    }

    /// Valence including one thorn per mark at `v`.
    pub fn full_valence(&self, v: usize) -> usize {
        self.valence(v) + self.mark_multiplicity(v)
    }

    /// `2n + s - 1 - |v_0|`, where `|v_0|` counts thorns at the basepoint.
    pub fn degree(&self) -> Result<i64, GraphError> {
        let b = self.basepoint.ok_or(GraphError::NoBasepoint)?;
        Ok(2 * self.rank() as i64 + self.s() as i64 - 1 - self.full_valence(b) as i64)
    }

    /// Loop edges at the basepoint; zero for unpointed graphs.
    pub fn basepoint_loop_count(&self) -> usize {
        match self.basepoint {
            Some(b) => self.edges.iter().filter(|&&e| e == (b, b)).count(),
            None => 0,
        }
    }

    pub fn is_loop(&self, e: usize) -> bool {
        let (a, b) = self.edges[e];
        a == b
    }

    fn is_special(&self, v: usize) -> bool {
        self.basepoint == Some(v) || self.marks.contains(&v)
    }

    fn is_connected(&self) -> bool {
        self.component_count_without(None) == 1
    }

    fn component_count_without(&self, skip: Option<usize>) -> usize {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.vertex_count];
        let mut components = 0;
        for start in 0..self.vertex_count {
            if seen[start] {
                continue;
            }
            components += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for &w in &adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        components
    }

    /// Indices of separating (non-thorn) edges.
    pub fn bridges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| !self.is_loop(e) && self.component_count_without(Some(e)) > 1)
            .collect()
    }

    /// No separating stored edge, and every vertex that is neither the
    /// basepoint nor marked has valence at least three.
    pub fn is_reduced(&self) -> bool {
        let val = self.valences();
        let valence_ok = (0..self.vertex_count).all(|v| self.is_special(v) || val[v] >= 3);
        valence_ok && self.bridges().is_empty()
    }

    /// Graph membership in the subspace with a basepoint loop and no
    /// separating non-thorn edges.
    pub fn in_loop_subspace(&self) -> bool {
        self.basepoint_loop_count() > 0 && self.bridges().is_empty()
    }

    /// Quotient by a forest. Returns the collapsed graph and, for every edge of
    /// `self`, its index in the quotient (`None` for collapsed edges).
    pub fn collapse(&self, forest: &Forest) -> Result<Collapse, GraphError> {
        let mut uf = UnionFind::new(self.vertex_count);
        let mut collapsed = vec![false; self.edges.len()];
        for &e in forest.edges() {
            if e >= self.edges.len() {
                return Err(GraphError::EdgeOutOfRange(e));
            }
            let (a, b) = self.edges[e];
            if a == b {
                return Err(GraphError::LoopInForest(e));
            }
            if !uf.union(a, b) {
                return Err(GraphError::CycleInForest);
            }
            collapsed[e] = true;
        }
        // Quotient vertices are numbered by their smallest original vertex.
        let mut image = vec![usize::MAX; self.vertex_count];
        let mut root_label = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for v in 0..self.vertex_count {
            let r = uf.find(v);
            if root_label[r] == usize::MAX {
                root_label[r] = next;
                next += 1;
            }
            image[v] = root_label[r];
        }
        let mut edges = Vec::with_capacity(self.edges.len() - forest.len());
        let mut edge_map = vec![None; self.edges.len()];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            if !collapsed[i] {
                edge_map[i] = Some(edges.len());
                let (x, y) = (image[a], image[b]);
                edges.push(if x <= y { (x, y) } else { (y, x) });
            }
        }
        let graph = ThornedGraph {
            vertex_count: next,
            edges,
            basepoint: self.basepoint.map(|b| image[b]),
            marks: self.marks.iter().map(|&m| image[m]).collect(),
        };
        Ok(Collapse {
            graph,
            vertex_map: image,
            edge_map,
        })
    }

    /// Checks `n = 2k - E(Γ_1)` for graphs normalised as in the Euler
    /// characteristic argument: a basepoint, no basepoint loops, and every
    /// other vertex trivalent once its thorns are counted. `Γ_1` is the
    /// subgraph spanned by the non-basepoint vertices and thorn tips, so its
    /// edges are the stored edges avoiding the basepoint plus the thorns at
    /// non-basepoint vertices.
    pub fn proof_identity_check(&self) -> Result<bool, GraphError> {
        let b = self
            .basepoint
            .ok_or(GraphError::NotApplicable("no basepoint"))?;
        if self.basepoint_loop_count() > 0 {
            return Err(GraphError::NotApplicable("graph has a basepoint loop"));
        }
        if (0..self.vertex_count).any(|v| v != b && self.full_valence(v) != 3) {
            return Err(GraphError::NotApplicable(
                "a non-basepoint vertex is not trivalent",
            ));
        }
        let inner_edges = self.edges.iter().filter(|&&(x, y)| x != b && y != b).count();
        let inner_thorns = self.marks.iter().filter(|&&m| m != b).count();
        let k = self.degree()?;
        Ok(self.rank() as i64 == 2 * k - (inner_edges + inner_thorns) as i64)
    }

    /// Graph with one extra loop at the basepoint (or at vertex 0 when unpointed).
    pub fn wedge_loop(&self) -> ThornedGraph {
        let v = self.basepoint.unwrap_or(0);
        let mut g = self.clone();
        g.edges.push((v, v));
        g
    }

    /// Graph with one more mark, placed at the basepoint.
    pub fn add_mark_at_basepoint(&self) -> Result<ThornedGraph, GraphError> {
        let b = self.basepoint.ok_or(GraphError::NoBasepoint)?;
        let mut g = self.clone();
        g.marks.push(b);
        Ok(g)
    }

    /// Joins the last two distinguished points by a new edge and forgets both.
    /// For `s = 2` this forgets the basepoint and yields an unpointed graph.
    pub fn join_last_two(&self) -> Result<ThornedGraph, GraphError> {
        let s = self.s();
        if s < 2 {
            return Err(GraphError::NotApplicable("need at least two distinguished points"));
        }
        let mut g = self.clone();
        let last = g.marks.pop().expect("s >= 2");
        let second = if s == 2 {
            g.basepoint.take().expect("pointed")
        } else {
            g.marks.pop().expect("s >= 3")
        };
        g.edges.push(if second <= last {
            (second, last)
        } else {
            (last, second)
        });
        Ok(g)
    }

    /// Vertex/edge relabelling. `vertex_perm[v]` is the new index of `v` and
    /// `edge_order[i]` is the old index of the new edge `i`.
    pub(crate) fn relabeled(&self, vertex_perm: &[usize], edge_order: &[usize]) -> ThornedGraph {
        let edges = edge_order
            .iter()
            .map(|&e| {
                let (a, b) = self.edges[e];
                let (x, y) = (vertex_perm[a], vertex_perm[b]);
                if x <= y {
                    (x, y)
                } else {
                    (y, x)
                }
            })
            .collect();
        ThornedGraph {
            vertex_count: self.vertex_count,
            edges,
            basepoint: self.basepoint.map(|b| vertex_perm[b]),
            marks: self.marks.iter().map(|&m| vertex_perm[m]).collect(),
        }
    }

    pub(crate) fn from_parts_unchecked(
        vertex_count: usize,
        edges: Vec<(usize, usize)>,
        basepoint: Option<usize>,
        marks: Vec<usize>,
    ) -> ThornedGraph {
        ThornedGraph {
            vertex_count,
            edges,
            basepoint,
            marks,
        }
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            n: self.rank(),
            s: self.s(),
            vertices: self.vertex_count,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
            basepoint: self.basepoint,
            marks: self.marks.clone(),
        }
    }

    pub fn from_json(json: &GraphJson) -> Result<Self, GraphError> {
        let g = ThornedGraph::new(
            json.vertices,
            json.edges.iter().map(|e| (e[0], e[1])).collect(),
            json.basepoint,
            json.marks.clone(),
        )?;
        if g.rank() != json.n {
            return Err(GraphError::RankMismatch {
                declared: json.n,
                actual: g.rank(),
            });
        }
        if g.s() != json.s {
            return Err(GraphError::MarkCountMismatch {
                declared: json.s,
                actual: g.s(),
            });
        }
        Ok(g)
    }
}

/// Wire form of a graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub s: usize,
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
    pub basepoint: Option<usize>,
    pub marks: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Collapse {
    pub graph: ThornedGraph,
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<Option<usize>>,
}

/// A cycle-free set of non-loop edges of some host graph, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Forest {
    edges: Vec<usize>,
}

impl Forest {
    pub fn new(host: &ThornedGraph, mut edges: Vec<usize>) -> Result<Self, GraphError> {
        edges.sort_unstable();
        edges.dedup();
        let mut uf = UnionFind::new(host.vertex_count());
        for &e in &edges {
            let &(a, b) = host.edges().get(e).ok_or(GraphError::EdgeOutOfRange(e))?;
            if a == b {
                return Err(GraphError::LoopInForest(e));
            }
            if !uf.union(a, b) {
                return Err(GraphError::CycleInForest);
            }
        }
        Ok(Forest { edges })
    }

    pub fn empty() -> Self {
        Forest { edges: Vec::new() }
    }

    pub(crate) fn from_mask(mask: u64) -> Self {
        Forest {
            edges: mask_indices(mask).collect(),
        }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn mask(&self) -> u64 {
        self.edges.iter().fold(0, |m, &e| m | (1u64 << e))
    }

    pub fn is_subset(&self, other: &Forest) -> bool {
        self.mask() & !other.mask() == 0
    }
}

/// Strictly increasing chain of nonempty forests in one host graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ForestFlag {
    forests: Vec<Forest>,
}

impl ForestFlag {
    pub fn new(forests: Vec<Forest>) -> Result<Self, GraphError> {
        if forests.first().is_some_and(Forest::is_empty) {
            return Err(GraphError::FlagNotIncreasing);
        }
        for w in forests.windows(2) {
            if w[0].len() >= w[1].len() || !w[0].is_subset(&w[1]) {
                return Err(GraphError::FlagNotIncreasing);
            }
        }
        Ok(ForestFlag { forests })
    }

    pub fn forests(&self) -> &[Forest] {
        &self.forests
    }

    pub fn len(&self) -> usize {
        self.forests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forests.is_empty()
    }

    pub fn masks(&self) -> Vec<u64> {
        self.forests.iter().map(Forest::mask).collect()
    }
}

pub(crate) fn mask_indices(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let i = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(i)
        }
    })
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    /// Returns false if `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dumbbell() -> ThornedGraph {
        ThornedGraph::new(2, vec![(0, 0), (0, 1), (1, 1)], None, vec![]).unwrap()
    }

    #[test]
    fn rank_examples() {
        assert_eq!(ThornedGraph::rose(3, 4).rank(), 3);
        assert_eq!(ThornedGraph::theta(0).rank(), 2);
        assert_eq!(ThornedGraph::new(1, vec![], None, vec![]).unwrap().rank(), 0);
    }

    #[test]
    fn disconnected_is_rejected() {
        assert_eq!(
            ThornedGraph::new(2, vec![(0, 0)], None, vec![]),
            Err(GraphError::Disconnected)
        );
    }

    #[test]
    fn degree_examples() {
        for n in 1..=6 {
            for s in 1..=4 {
                assert_eq!(ThornedGraph::rose(n, s).degree(), Ok(0));
            }
        }
        assert_eq!(ThornedGraph::rose(1, 1).degree(), Ok(0));
        assert_eq!(ThornedGraph::theta(1).degree(), Ok(1));
        assert_eq!(ThornedGraph::theta(0).degree(), Err(GraphError::NoBasepoint));
    }

    #[test]
    fn basepoint_loops() {
        assert_eq!(ThornedGraph::rose(4, 2).basepoint_loop_count(), 4);
        assert_eq!(ThornedGraph::theta(1).basepoint_loop_count(), 0);
        // loop at v0 plus a theta-shaped handle hanging off v0
        let g = ThornedGraph::new(2, vec![(0, 0), (0, 1), (0, 1)], Some(0), vec![]).unwrap();
        assert_eq!(g.rank(), 2);
        assert_eq!(g.basepoint_loop_count(), 1);
    }

    #[test]
    fn reduced_examples() {
        assert!(!dumbbell().is_reduced());
        assert_eq!(dumbbell().bridges(), vec![1]);
        assert!(ThornedGraph::theta(0).is_reduced());
        assert!(ThornedGraph::rose(3, 3).is_reduced());
        // an unmarked valence-two vertex
        let g = ThornedGraph::new(2, vec![(0, 1), (0, 1), (0, 0)], Some(0), vec![]).unwrap();
        assert!(!g.is_reduced());
        let g = ThornedGraph::new(2, vec![(0, 1), (0, 1), (0, 0)], Some(0), vec![1]).unwrap();
        assert!(g.is_reduced());
    }

    #[test]
    fn collapse_examples() {
        let theta = ThornedGraph::theta(1);
        let c = theta
            .collapse(&Forest::new(&theta, vec![1]).unwrap())
            .unwrap();
        assert_eq!(c.graph.vertex_count(), 1);
        assert_eq!(c.graph.rank(), 2);
        assert_eq!(c.graph.basepoint_loop_count(), 2);
        assert_eq!(c.edge_map, vec![Some(0), None, Some(1)]);

        let empty = theta.collapse(&Forest::empty()).unwrap();
        assert_eq!(empty.graph, theta);

        let d = dumbbell();
        let c = d.collapse(&Forest::new(&d, vec![1]).unwrap()).unwrap();
        assert_eq!(c.graph.edges(), &[(0, 0), (0, 0)]);
    }

    #[test]
    fn forest_rejects_loops_and_cycles() {
        let theta = ThornedGraph::theta(0);
        assert_eq!(Forest::new(&theta, vec![0, 1]), Err(GraphError::CycleInForest));
        let rose = ThornedGraph::rose(2, 1);
        assert_eq!(Forest::new(&rose, vec![0]), Err(GraphError::LoopInForest(0)));
        let bad = Forest { edges: vec![0, 1] };
        assert_eq!(theta.collapse(&bad).unwrap_err(), GraphError::CycleInForest);
    }

    #[test]
    fn collapsing_basepoint_edge_to_trivalent_vertex() {
        let theta = ThornedGraph::theta(1);
        let c = theta.collapse(&Forest::new(&theta, vec![0]).unwrap()).unwrap();
        assert_eq!(c.graph.degree(), Ok(0));
    }

    #[test]
    fn proof_identity() {
        assert_eq!(ThornedGraph::theta(1).proof_identity_check(), Ok(true));
        assert!(matches!(
            ThornedGraph::rose(2, 1).proof_identity_check(),
            Err(GraphError::NotApplicable(_))
        ));
    }

    #[test]
    fn join_last_two() {
        let g = ThornedGraph::rose(1, 2).join_last_two().unwrap();
        assert_eq!(g.s(), 0);
        assert_eq!(g.rank(), 2);
        let g = ThornedGraph::new(2, vec![(0, 0), (0, 1), (0, 1)], Some(0), vec![1, 1])
            .unwrap()
            .join_last_two()
            .unwrap();
        assert_eq!(g.s(), 1);
        assert_eq!(g.rank(), 3);
        assert_eq!(g.valence(1), 4);
    }

    #[test]
    fn json_roundtrip_checks_declared_parameters() {
        let g = ThornedGraph::rose(2, 3);
        let mut j = g.to_json();
        assert_eq!(ThornedGraph::from_json(&j).unwrap(), g);
        j.n = 3;
        assert!(ThornedGraph::from_json(&j).is_err());
    }
}
