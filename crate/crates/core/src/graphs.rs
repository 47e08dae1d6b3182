//! Simple loopless graphs, grid graphs over `[n] x [L]`, lexicographic
//! products and the subset independence graph `h_L`.
//!
//! Vertices are 0-based in the API; serialized forms are 1-based.

use std::fmt;

use crate::error::{Error, Result};
use crate::subset::{Subset, MAX_LAYERS};

/// Anything that answers adjacency queries on vertices `0..order()`.
pub trait Adjacency {
    fn order(&self) -> usize;
    fn is_edge(&self, u: usize, v: usize) -> bool;
}

/// Undirected loopless graph on `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<bool>,
}

impl SimpleGraph {
    pub fn edgeless(n: usize) -> Self {
        SimpleGraph {
            n,
            adj: vec![false; n * n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::edgeless(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.adj[u * n + v] = true;
                }
            }
        }
        g
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Self::from_edges(n, &edges).expect("path edges are valid")
    }

    /// Builds a graph from 0-based edge pairs. Loops and out-of-range
    /// endpoints are rejected; duplicates are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::edgeless(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v {
            return Err(Error::domain(format!("loop at vertex {}", u + 1)));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::domain(format!(
                "edge ({}, {}) outside vertex range 1..={}",
                u + 1,
                v + 1,
                self.n
            )));
        }
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u * self.n + v]
    }

    /// Edges `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adj[u * self.n + v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count() / 2
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.adj[u * self.n + v])
    }

    /// True iff every pair of distinct vertices of `vertices` is adjacent.
    pub fn is_complete_on(&self, vertices: &[usize]) -> bool {
        vertices.iter().enumerate().all(|(a, &u)| {
            vertices[a + 1..]
                .iter()
                .all(|&v| u == v || self.has_edge(u, v))
        })
    }

    /// Completeness of the subgraph induced by a layer subset.
    pub fn is_complete_on_subset(&self, s: Subset) -> bool {
        let vs: Vec<usize> = s.layers().collect();
        self.is_complete_on(&vs)
    }

    /// Disjoint union, vertices of `other` shifted by `self.n`.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> SimpleGraph {
        let mut g = SimpleGraph::edgeless(self.n + other.n);
        for (u, v) in self.edges() {
            g.add_edge(u, v).expect("valid");
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n).expect("valid");
        }
        g
    }

    /// Subgraph on the same vertex set keeping the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> SimpleGraph {
        let mut g = SimpleGraph::edgeless(self.n);
        for (u, v) in self.edges() {
            if keep(u, v) {
                g.add_edge(u, v).expect("valid");
            }
        }
        g
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut idx = 0;
            while idx < comp.len() {
                let u = comp[idx];
                idx += 1;
                for v in self.neighbors(u) {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Induced subgraph on `vertices`, relabelled in the given order.
    pub fn induced(&self, vertices: &[usize]) -> SimpleGraph {
        let mut g = SimpleGraph::edgeless(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(a, b).expect("valid");
                }
            }
        }
        g
    }
}

impl Adjacency for SimpleGraph {
    fn order(&self) -> usize {
        self.n
    }

    fn is_edge(&self, u: usize, v: usize) -> bool {
        self.has_edge(u, v)
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let edges: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(u, v)| (u + 1, v + 1))
            .collect();
        f.debug_struct("SimpleGraph")
            .field("n", &self.n)
            .field("edges", &edges)
            .finish()
    }
}

/// Vertex `(k, l)` of a grid graph, both 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GridVertex {
    pub k: usize,
    pub l: usize,
}

impl GridVertex {
    pub fn new(k: usize, l: usize) -> Self {
        GridVertex { k, l }
    }
}

/// Loopless graph on `[n] x [L]`. Flat index of `(k, l)` is `k * L + l`.
#[derive(Clone, PartialEq, Eq)]
pub struct GridGraph {
    n: usize,
    layers: usize,
    flat: SimpleGraph,
}

impl GridGraph {
    pub fn edgeless(n: usize, layers: usize) -> Self {
        GridGraph {
            n,
            layers,
            flat: SimpleGraph::edgeless(n * layers),
        }
    }

    pub fn from_edges(n: usize, layers: usize, edges: &[(GridVertex, GridVertex)]) -> Result<Self> {
        let mut g = Self::edgeless(n, layers);
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: GridVertex, b: GridVertex) -> Result<()> {
        for v in [a, b] {
            if v.k >= self.n || v.l >= self.layers {
                return Err(Error::domain(format!(
                    "grid vertex ({}, {}) outside [{}] x [{}]",
                    v.k + 1,
                    v.l + 1,
                    self.n,
                    self.layers
                )));
            }
        }
        self.flat.add_edge(self.flat_index(a), self.flat_index(b))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn flat_index(&self, v: GridVertex) -> usize {
        v.k * self.layers + v.l
    }

    pub fn vertex(&self, flat: usize) -> GridVertex {
        GridVertex::new(flat / self.layers, flat % self.layers)
    }

    pub fn has_edge(&self, a: GridVertex, b: GridVertex) -> bool {
        a.k < self.n
            && b.k < self.n
            && a.l < self.layers
            && b.l < self.layers
            && self.flat.has_edge(self.flat_index(a), self.flat_index(b))
    }

    pub fn edge_count(&self) -> usize {
        self.flat.edge_count()
    }

    /// Edges as vertex pairs with the smaller flat index first.
    pub fn edges(&self) -> Vec<(GridVertex, GridVertex)> {
        self.flat
            .edges()
            .into_iter()
            .map(|(u, v)| (self.vertex(u), self.vertex(v)))
            .collect()
    }

    /// The graph on flat indices.
    pub fn as_flat(&self) -> &SimpleGraph {
        &self.flat
    }

    /// True iff the vertices `{(k, l) : l in s}` form a clique.
    pub fn is_complete_on_fiber(&self, k: usize, s: Subset) -> bool {
        let vs: Vec<usize> = s
            .layers()
            .map(|l| self.flat_index(GridVertex::new(k, l)))
            .collect();
        self.flat.is_complete_on(&vs)
    }
}

impl Adjacency for GridGraph {
    fn order(&self) -> usize {
        self.flat.vertex_count()
    }

    fn is_edge(&self, u: usize, v: usize) -> bool {
        self.flat.has_edge(u, v)
    }
}

impl fmt::Debug for GridGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridGraph")
            .field("n", &self.n)
            .field("layers", &self.layers)
            .field("edges", &self.edge_count())
            .finish()
    }
}

/// Lexicographic product `g' . g_L`: a copy of `g'` inside every layer, and
/// every pair `((i, l1), (j, l2))` joined whenever `(l1, l2)` is an edge of
/// `g_L` (including `i = j`).
pub fn lexicographic_product(base: &SimpleGraph, layer_graph: &SimpleGraph) -> GridGraph {
    let n = base.vertex_count();
    let layers = layer_graph.vertex_count();
    let mut g = GridGraph::edgeless(n, layers);
    for l in 0..layers {
        for (i, j) in base.edges() {
            g.add_edge(GridVertex::new(i, l), GridVertex::new(j, l))
                .expect("valid");
        }
    }
    for (l1, l2) in layer_graph.edges() {
        for i in 0..n {
            for j in 0..n {
                g.add_edge(GridVertex::new(i, l1), GridVertex::new(j, l2))
                    .expect("valid");
            }
        }
    }
    g
}

/// The independence graph on nonempty layer subsets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetGraph {
    pub subsets: Vec<Subset>,
    pub graph: SimpleGraph,
}

impl SubsetGraph {
    /// Vertex index of a subset, if present.
    pub fn vertex_of(&self, s: Subset) -> Option<usize> {
        self.subsets.iter().position(|&t| t == s)
    }
}

/// `h_L`: vertices are the nonempty subsets of `[L]` in canonical order,
/// `(J1, J2)` adjacent iff `J1 x J2` is contained in `E(g_L)`.
pub fn h_graph(layer_graph: &SimpleGraph) -> Result<SubsetGraph> {
    let layers = layer_graph.vertex_count();
    if layers == 0 || layers > MAX_LAYERS {
        return Err(Error::domain(format!(
            "layer graph must have between 1 and {MAX_LAYERS} vertices, got {layers}"
        )));
    }
    let subsets = Subset::nonempty(layers);
    let mut graph = SimpleGraph::edgeless(subsets.len());
    for (a, &s1) in subsets.iter().enumerate() {
        for (b, &s2) in subsets.iter().enumerate().skip(a + 1) {
            let all = s1
                .layers()
                .all(|l1| s2.layers().all(|l2| layer_graph.has_edge(l1, l2)));
            if all {
                graph.add_edge(a, b).expect("valid");
            }
        }
    }
    Ok(SubsetGraph { subsets, graph })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn figure_base() -> SimpleGraph {
        // 1-based edges (2,3), (1,3)
        SimpleGraph::from_edges(3, &[(1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn make_graph_kinds() {
        assert_eq!(SimpleGraph::complete(3).edge_count(), 3);
        assert_eq!(SimpleGraph::edgeless(5).edge_count(), 0);
        let g = figure_base();
        assert_eq!(g.edges(), vec![(0, 2), (1, 2)]);
        assert!(SimpleGraph::from_edges(3, &[(1, 1)]).is_err());
        assert!(SimpleGraph::from_edges(3, &[(0, 3)]).is_err());
    }

    #[test]
    fn lexicographic_product_examples() {
        let g = lexicographic_product(&figure_base(), &SimpleGraph::path(3));
        assert_eq!(g.edge_count(), 24);
        assert!(g.has_edge(GridVertex::new(0, 0), GridVertex::new(0, 1)));
        assert!(!g.has_edge(GridVertex::new(0, 0), GridVertex::new(0, 2)));
        assert!(g.has_edge(GridVertex::new(0, 2), GridVertex::new(2, 2)));

        let e = lexicographic_product(&SimpleGraph::edgeless(3), &SimpleGraph::edgeless(2));
        assert_eq!(e.edge_count(), 0);

        let c = lexicographic_product(&SimpleGraph::complete(2), &SimpleGraph::complete(2));
        assert_eq!(c.as_flat(), &SimpleGraph::complete(4));
    }

    #[test]
    fn h_graph_examples() {
        let h = h_graph(&SimpleGraph::complete(2)).unwrap();
        assert_eq!(h.subsets.len(), 3);
        assert_eq!(h.graph.edges(), vec![(0, 1)]);

        let h = h_graph(&SimpleGraph::edgeless(2)).unwrap();
        assert_eq!(h.graph.edge_count(), 0);

        let h = h_graph(&SimpleGraph::path(3)).unwrap();
        let named: Vec<(String, String)> = h
            .graph
            .edges()
            .into_iter()
            .map(|(a, b)| (h.subsets[a].to_string(), h.subsets[b].to_string()))
            .collect();
        assert_eq!(
            named,
            vec![
                ("{1}".to_string(), "{2}".to_string()),
                ("{2}".to_string(), "{3}".to_string()),
                ("{2}".to_string(), "{1,3}".to_string()),
            ]
        );
    }

    #[test]
    fn completeness_on_subsets() {
        assert!(SimpleGraph::complete(3).is_complete_on(&[0, 1, 2]));
        assert!(!SimpleGraph::path(3).is_complete_on(&[0, 2]));
        assert!(SimpleGraph::edgeless(4).is_complete_on(&[1]));
    }

    #[test]
    fn components_and_unions() {
        let g = SimpleGraph::from_edges(5, &[(0, 3), (3, 4)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 3, 4], vec![1], vec![2]]);
        let u = g.disjoint_union(&SimpleGraph::complete(2));
        assert_eq!(u.vertex_count(), 7);
        assert!(u.has_edge(5, 6));
    }
}
