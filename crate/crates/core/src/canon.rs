//! Canonical labelling of thorned graphs by partition refinement with
//! individualisation, plus their automorphism groups.
//!
//! Vertices are seeded with (is-basepoint, mark labels, valence, loop count)
//! and refined by neighbour colour multiplicities. Every leaf of the search
//! tree yields a relabelling; the lexicographically least certificate wins and
//! the leaves that reach it differ exactly by vertex automorphisms.

use std::collections::BTreeSet;

use crate::error::GraphError;
use crate::graph::ThornedGraph;

const NO_BASEPOINT: u16 = u16::MAX;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalGraph {
    graph: ThornedGraph,
    bytes: Vec<u8>,
    vertex_automorphisms: Vec<Vec<usize>>,
}

/// Canonical form together with the relabelling that produced it.
#[derive(Debug, Clone)]
pub struct Canonicalization {
    pub canonical: CanonicalGraph,
    /// `vertex_map[v]` is the canonical index of input vertex `v`.
    pub vertex_map: Vec<usize>,
    /// `edge_map[e]` is the canonical index of input edge `e`.
    pub edge_map: Vec<usize>,
}

/// A symmetry of the graph as a map on vertices and edge slots; `reversed[e]`
/// records whether edge `e` is carried onto its image with endpoints swapped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Automorphism {
    pub vertices: Vec<usize>,
    pub edges: Vec<usize>,
    pub reversed: Vec<bool>,
}

impl CanonicalGraph {
    /// The canonically relabelled graph; its edges are sorted.
    pub fn graph(&self) -> &ThornedGraph {
        &self.graph
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn hex(&self) -> String {
        to_hex(&self.bytes)
    }

    pub fn from_hex(hex: &str) -> Result<CanonicalGraph, GraphError> {
        let bytes = from_hex(hex).ok_or(GraphError::NotApplicable("bad hex"))?;
        let graph = decode(&bytes).ok_or(GraphError::NotApplicable("bad canonical bytes"))?;
        ThornedGraph::new(
            graph.vertex_count(),
            graph.edges().to_vec(),
            graph.basepoint(),
            graph.marks().to_vec(),
        )?;
        let c = canonical_form(&graph);
        if c.bytes != bytes {
            return Err(GraphError::NotApplicable("bytes are not in canonical form"));
        }
        Ok(c)
    }

    /// The full group of vertex permutations induced by automorphisms,
    /// identity first.
    pub fn vertex_automorphisms(&self) -> &[Vec<usize>] {
        &self.vertex_automorphisms
    }

    /// Order of the automorphism group acting on vertices and half-edges,
    /// fixing the basepoint and every labelled mark.
    pub fn automorphism_group_order(&self) -> u128 {
        let mut order = self.vertex_automorphisms.len() as u128;
        for (range, is_loop) in parallel_classes(&self.graph) {
            let m = range.len() as u128;
            order *= (1..=m).product::<u128>();
            if is_loop {
                order *= 1u128 << m;
            }
        }
        order
    }

    /// A generating set: lifts of every vertex automorphism, adjacent
    /// transpositions inside each parallel class, and one flip per loop.
    pub fn automorphism_generators(&self) -> Vec<Automorphism> {
        let g = &self.graph;
        let e = g.edge_count();
        let mut gens = Vec::new();
        for sigma in &self.vertex_automorphisms[1..] {
            let edges = lift_vertex_automorphism(g, sigma);
            let reversed = g
                .edges()
                .iter()
                .map(|&(a, b)| a != b && sigma[a] > sigma[b])
                .collect();
            gens.push(Automorphism {
                vertices: sigma.clone(),
                edges,
                reversed,
            });
        }
        let identity: Vec<usize> = (0..g.vertex_count()).collect();
        for (range, is_loop) in parallel_classes(g) {
            for i in range.clone().skip(1) {
                let mut edges: Vec<usize> = (0..e).collect();
                edges.swap(i - 1, i);
                gens.push(Automorphism {
                    vertices: identity.clone(),
                    edges,
                    reversed: vec![false; e],
                });
            }
            if is_loop {
                for i in range {
                    let mut reversed = vec![false; e];
                    reversed[i] = true;
                    gens.push(Automorphism {
                        vertices: identity.clone(),
                        edges: (0..e).collect(),
                        reversed,
                    });
                }
            }
        }
        gens
    }

    /// The automorphism group acting on edge indices, restricted to what
    /// matters for forests: vertex automorphism lifts combined with all
    /// permutations of parallel non-loop edges. Loops are carried by the lift
    /// only. Identity first; no duplicates.
    pub fn edge_symmetries(&self) -> Vec<Vec<usize>> {
        let g = &self.graph;
        let classes: Vec<_> = parallel_classes(g)
            .into_iter()
            .filter(|(r, is_loop)| !is_loop && r.len() > 1)
            .map(|(r, _)| r)
            .collect();
        let mut inner: Vec<Vec<usize>> = vec![(0..g.edge_count()).collect()];
        for class in &classes {
            let perms = permutations(class.len());
            let mut next = Vec::with_capacity(inner.len() * perms.len());
            for base in &inner {
                for p in &perms {
                    let mut q = base.clone();
                    for (i, &pi) in p.iter().enumerate() {
                        q[class.start + i] = class.start + pi;
                    }
                    next.push(q);
                }
            }
            inner = next;
        }
        let mut out = Vec::with_capacity(self.vertex_automorphisms.len() * inner.len());
        for sigma in &self.vertex_automorphisms {
            let lift = lift_vertex_automorphism(g, sigma);
            for q in &inner {
                out.push(q.iter().map(|&e| lift[e]).collect());
            }
        }
        out
    }
}

/// Maximal runs of equal edges in a sorted edge list.
fn parallel_classes(g: &ThornedGraph) -> Vec<(std::ops::Range<usize>, bool)> {
    let edges = g.edges();
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=edges.len() {
        if i == edges.len() || edges[i] != edges[start] {
            out.push((start..i, edges[start].0 == edges[start].1));
            start = i;
        }
    }
    out
}

/// Edge map of a vertex automorphism on a graph with sorted edges: the i-th
/// edge of a parallel class goes to the i-th edge of the image class.
fn lift_vertex_automorphism(g: &ThornedGraph, sigma: &[usize]) -> Vec<usize> {
    let edges = g.edges();
    let mut lift = vec![0; edges.len()];
    for (range, _) in parallel_classes(g) {
        let (a, b) = edges[range.start];
        let (x, y) = (sigma[a].min(sigma[b]), sigma[a].max(sigma[b]));
        let target = edges.partition_point(|&e| e < (x, y));
        for (i, e) in range.enumerate() {
            lift[e] = target + i;
        }
    }
    lift
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..k).collect();
    heap_permute(k, &mut current, &mut out);
    out.sort();
    out
}

fn heap_permute(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k - 1 {
        heap_permute(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permute(k - 1, a, out);
}

pub fn canonical_form(g: &ThornedGraph) -> CanonicalGraph {
    canonicalize(g).canonical
}

pub fn canonicalize(g: &ThornedGraph) -> Canonicalization {
    let n = g.vertex_count();
    let mut mult = vec![0u16; n * n];
    let mut loops = vec![0u16; n];
    for &(a, b) in g.edges() {
        if a == b {
            loops[a] += 1;
        } else {
            mult[a * n + b] += 1;
            mult[b * n + a] += 1;
        }
    }
    let valences = g.valences();
    let mut labels = vec![Vec::new(); n];
    for (i, &m) in g.marks().iter().enumerate() {
        labels[m].push(i as u32);
    }
    let seeds: Vec<_> = (0..n)
        .map(|v| (g.basepoint() != Some(v), labels[v].clone(), valences[v], loops[v]))
        .collect();
    let colors = rank_keys(&seeds);

    let mut search = Search {
        g,
        n,
        mult: &mult,
        best: None,
        best_leaves: Vec::new(),
    };
    search.descend(colors);

    let best_leaves = search.best_leaves;
    let first = &best_leaves[0];
    let (graph, edge_map) = relabel_sorted(g, first);
    let bytes = encode(&graph);

    // leaf_i = sigma ∘ leaf_0 for sigma ranging over the automorphisms of the
    // canonical graph, so sigma = leaf_i ∘ leaf_0^{-1}.
    let mut inv_first = vec![0; n];
    for (v, &p) in first.iter().enumerate() {
        inv_first[p] = v;
    }
    let mut autos = BTreeSet::new();
    for leaf in &best_leaves {
        let sigma: Vec<usize> = (0..n).map(|c| leaf[inv_first[c]]).collect();
        autos.insert(sigma);
    }
    let identity: Vec<usize> = (0..n).collect();
    autos.remove(&identity);
    let mut vertex_automorphisms = vec![identity];
    vertex_automorphisms.extend(autos);

    Canonicalization {
        canonical: CanonicalGraph {
            graph,
            bytes,
            vertex_automorphisms,
        },
        vertex_map: first.clone(),
        edge_map,
    }
}

struct Search<'a> {
    g: &'a ThornedGraph,
    n: usize,
    mult: &'a [u16],
    best: Option<Vec<u16>>,
    best_leaves: Vec<Vec<usize>>,
}

impl Search<'_> {
    fn descend(&mut self, colors: Vec<u32>) {
        let colors = self.refine(colors);
        let cell_count = colors.iter().copied().max().map_or(0, |m| m as usize + 1);
        if cell_count == self.n {
            let perm: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
            let cert = certificate(self.g, &perm);
            match &self.best {
                Some(best) if cert > *best => {}
                Some(best) if cert == *best => self.best_leaves.push(perm),
                _ => {
                    self.best = Some(cert);
                    self.best_leaves = vec![perm];
                }
            }
            return;
        }
        // first non-singleton cell
        let mut sizes = vec![0usize; cell_count];
        for &c in &colors {
            sizes[c as usize] += 1;
        }
        let target = sizes.iter().position(|&s| s > 1).expect("not discrete") as u32;
        for v in 0..self.n {
            if colors[v] != target {
                continue;
            }
            let keys: Vec<_> = (0..self.n).map(|u| (colors[u], u != v)).collect();
            self.descend(rank_keys(&keys));
        }
    }

    fn refine(&self, mut colors: Vec<u32>) -> Vec<u32> {
        let n = self.n;
        let mut count = distinct(&colors);
        loop {
            let keys: Vec<(u32, Vec<(u32, u16)>)> = (0..n)
                .map(|v| {
                    let mut nb: Vec<(u32, u16)> = (0..n)
                        .filter(|&u| u != v && self.mult[v * n + u] > 0)
                        .map(|u| (colors[u], self.mult[v * n + u]))
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb)
                })
                .collect();
            let next = rank_keys(&keys);
            let next_count = distinct(&next);
            if next_count == count {
                return colors;
            }
            colors = next;
            count = next_count;
        }
    }
}

fn distinct(colors: &[u32]) -> usize {
    colors.iter().copied().max().map_or(0, |m| m as usize + 1)
}

/// Replaces each key by its rank among the distinct keys.
fn rank_keys<K: Ord + Clone>(keys: &[K]) -> Vec<u32> {
    let mut sorted: Vec<&K> = keys.iter().collect();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(&k).expect("present") as u32)
        .collect()
}

fn certificate(g: &ThornedGraph, perm: &[usize]) -> Vec<u16> {
    let mut edges: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (perm[a], perm[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    edges.sort_unstable();
    let mut out = Vec::with_capacity(4 + g.marks().len() + 2 * edges.len());
    out.push(g.vertex_count() as u16);
    out.push(edges.len() as u16);
    out.push(g.basepoint().map_or(NO_BASEPOINT, |b| perm[b] as u16));
    out.push(g.marks().len() as u16);
    out.extend(g.marks().iter().map(|&m| perm[m] as u16));
    for (a, b) in edges {
        out.push(a as u16);
        out.push(b as u16);
    }
    out
}

fn relabel_sorted(g: &ThornedGraph, perm: &[usize]) -> (ThornedGraph, Vec<usize>) {
    let image = |e: usize| {
        let (a, b) = g.edges()[e];
        let (x, y) = (perm[a], perm[b]);
        (x.min(y), x.max(y))
    };
    let mut order: Vec<usize> = (0..g.edge_count()).collect();
    order.sort_by_key(|&e| (image(e), e));
    let mut edge_map = vec![0; order.len()];
    for (pos, &e) in order.iter().enumerate() {
        edge_map[e] = pos;
    }
    (g.relabeled(perm, &order), edge_map)
}

fn encode(g: &ThornedGraph) -> Vec<u8> {
    let identity: Vec<usize> = (0..g.vertex_count()).collect();
    certificate(g, &identity)
        .into_iter()
        .flat_map(u16::to_be_bytes)
        .collect()
}

fn decode(bytes: &[u8]) -> Option<ThornedGraph> {
    if bytes.len() % 2 != 0 {
        return None;
    }
    let words: Vec<u16> = bytes
        .chunks(2)
        .map(|c| u16::from_be_bytes([c[0], c[1]]))
        .collect();
    let (&v, rest) = words.split_first()?;
    let (&e, rest) = rest.split_first()?;
    let (&b, rest) = rest.split_first()?;
    let (&m, rest) = rest.split_first()?;
    let (m, e) = (m as usize, e as usize);
    if rest.len() != m + 2 * e {
        return None;
    }
    let marks = rest[..m].iter().map(|&x| x as usize).collect();
    let edges = rest[m..]
        .chunks(2)
        .map(|c| (c[0] as usize, c[1] as usize))
        .collect();
    let basepoint = (b != NO_BASEPOINT).then_some(b as usize);
    Some(ThornedGraph::from_parts_unchecked(
        v as usize, edges, basepoint, marks,
    ))
}

pub fn to_hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn from_hex(hex: &str) -> Option<Vec<u8>> {
    if hex.len() % 2 != 0 {
        return None;
    }
    (0..hex.len())
        .step_by(2)
        .map(|i| u8::from_str_radix(hex.get(i..i + 2)?, 16).ok())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Counts vertex/edge/orientation bijections that preserve incidence,
    /// the basepoint and the labelled marks.
    fn brute_force_automorphisms(g: &ThornedGraph) -> usize {
        let vperms = permutations(g.vertex_count());
        let eperms = permutations(g.edge_count());
        let e = g.edge_count();
        let mut count = 0;
        for sigma in &vperms {
            if g.basepoint().map(|b| sigma[b]) != g.basepoint() {
                continue;
            }
            if g.marks().iter().any(|&m| sigma[m] != m) {
                continue;
            }
            for tau in &eperms {
                for flips in 0..(1u32 << e) {
                    let ok = (0..e).all(|i| {
                        let (a, b) = g.edges()[i];
                        let (x, y) = g.edges()[tau[i]];
                        if flips >> i & 1 == 1 {
                            (sigma[a], sigma[b]) == (y, x)
                        } else {
                            (sigma[a], sigma[b]) == (x, y)
                        }
                    });
                    count += ok as usize;
                }
            }
        }
        count
    }

    #[test]
    fn permuted_theta_has_same_bytes() {
        let a = ThornedGraph::new(2, vec![(0, 1), (1, 0), (0, 1)], None, vec![]).unwrap();
        let b = ThornedGraph::theta(0);
        assert_eq!(canonical_form(&a).bytes(), canonical_form(&b).bytes());
    }

    #[test]
    fn theta_group_order() {
        let c = canonical_form(&ThornedGraph::theta(0));
        assert_eq!(brute_force_automorphisms(&ThornedGraph::theta(0)), 12);
        assert_eq!(c.automorphism_group_order(), 12);
        assert_eq!(c.edge_symmetries().len(), 12);
    }

    #[test]
    fn rose_group_order() {
        let r = ThornedGraph::rose(2, 1);
        assert_eq!(brute_force_automorphisms(&r), 8);
        assert_eq!(canonical_form(&r).automorphism_group_order(), 8);
    }

    #[test]
    fn group_order_matches_brute_force_on_small_graphs() {
        let graphs = [
            ThornedGraph::new(3, vec![(0, 1), (1, 2), (0, 2), (0, 1)], Some(0), vec![]).unwrap(),
            ThornedGraph::new(3, vec![(0, 1), (1, 2), (0, 2), (1, 1)], None, vec![]).unwrap(),
            ThornedGraph::new(2, vec![(0, 1), (0, 1), (1, 1)], Some(0), vec![1]).unwrap(),
            ThornedGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (1, 3)], None, vec![])
                .unwrap(),
        ];
        for g in &graphs {
            let c = canonical_form(g);
            assert_eq!(
                c.automorphism_group_order(),
                brute_force_automorphisms(g) as u128,
                "{g:?}"
            );
        }
    }

    #[test]
    fn generators_are_automorphisms() {
        let g = ThornedGraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (2, 3), (1, 3), (1, 2)], None, vec![])
            .unwrap();
        let c = canonical_form(&g);
        let cg = c.graph();
        for a in c.automorphism_generators() {
            for (i, &(x, y)) in cg.edges().iter().enumerate() {
                let (p, q) = cg.edges()[a.edges[i]];
                let (sx, sy) = (a.vertices[x], a.vertices[y]);
                if a.reversed[i] {
                    assert_eq!((sy, sx), (p, q));
                } else {
                    assert_eq!((sx, sy), (p, q));
                }
            }
        }
    }

    #[test]
    fn labels_matter() {
        let a = ThornedGraph::new(2, vec![(0, 1), (0, 1), (0, 1)], Some(0), vec![1, 0]).unwrap();
        let b = ThornedGraph::new(2, vec![(0, 1), (0, 1), (0, 1)], Some(0), vec![0, 1]).unwrap();
        assert_ne!(canonical_form(&a).bytes(), canonical_form(&b).bytes());
        let c = ThornedGraph::new(2, vec![(0, 1), (0, 1), (0, 1)], Some(1), vec![0, 1]).unwrap();
        assert_eq!(canonical_form(&a).bytes(), canonical_form(&c).bytes());
    }

    #[test]
    fn hex_roundtrip() {
        let g = ThornedGraph::new(3, vec![(0, 1), (1, 2), (0, 2), (2, 2)], Some(1), vec![2]).unwrap();
        let c = canonical_form(&g);
        let back = CanonicalGraph::from_hex(&c.hex()).unwrap();
        assert_eq!(back, c);
        assert!(c.hex().chars().all(|ch| ch.is_ascii_digit() || ('a'..='f').contains(&ch)));
    }

    #[test]
    fn canonicalization_maps_edges_consistently() {
        let g = ThornedGraph::new(3, vec![(2, 1), (1, 0), (0, 2), (0, 0)], Some(2), vec![1]).unwrap();
        let c = canonicalize(&g);
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            let (x, y) = (c.vertex_map[a], c.vertex_map[b]);
            assert_eq!(c.canonical.graph().edges()[c.edge_map[e]], (x.min(y), x.max(y)));
        }
    }
}
