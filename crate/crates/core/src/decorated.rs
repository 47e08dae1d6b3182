//! Graphs and step graphons decorated by subset-indexed matrices, and their
//! homomorphism densities.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::traits::Zero;

use crate::combinatorics::{PairPartition, WordSpec};
use crate::error::{Error, Result};
use crate::graphon::{cell_sum, StepGraphon};
use crate::graphs::{GridGraph, GridVertex, SimpleGraph};
use crate::scalar::{Accumulator, Scalar};
use crate::subset::{Subset, MAX_LAYERS};

/// A `2^L x 2^L` matrix with rows and columns indexed by subsets of `[L]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MLMatrix<T> {
    layers: usize,
    entries: Vec<T>,
}

fn check_layers(layers: usize) -> Result<()> {
    if layers == 0 || layers > MAX_LAYERS {
        return Err(Error::domain(format!(
            "number of layers must be between 1 and {MAX_LAYERS}, got {layers}"
        )));
    }
    Ok(())
}

fn hs_close<T: Scalar>(a: &T, b: &T) -> bool {
    if T::EXACT {
        a == b
    } else {
        let (x, y) = (a.to_f64(), b.to_f64());
        (x - y).abs() <= 1e-9 * x.abs().max(1.0)
    }
}

impl<T: Scalar> MLMatrix<T> {
    pub fn zero(layers: usize) -> Result<Self> {
        check_layers(layers)?;
        let d = 1usize << layers;
        Ok(MLMatrix {
            layers,
            entries: vec![T::zero(); d * d],
        })
    }

    /// `P_{I,J}`: a single 1 at `(I, J)`.
    pub fn basis(layers: usize, i: Subset, j: Subset) -> Result<Self> {
        let mut m = Self::zero(layers)?;
        m.set(i, j, T::one())?;
        Ok(m)
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn dim(&self) -> usize {
        1 << self.layers
    }

    fn slot(&self, i: Subset, j: Subset) -> Result<usize> {
        if !i.is_within(self.layers) || !j.is_within(self.layers) {
            return Err(Error::domain(format!(
                "subsets {i}, {j} are not contained in [{}]",
                self.layers
            )));
        }
        Ok(i.index() * self.dim() + j.index())
    }

    pub fn get(&self, i: Subset, j: Subset) -> &T {
        &self.entries[i.index() * self.dim() + j.index()]
    }

    pub fn set(&mut self, i: Subset, j: Subset, v: T) -> Result<()> {
        if v < T::zero() || v > T::one() {
            return Err(Error::domain(format!("entry {v} outside [0, 1]")));
        }
        let s = self.slot(i, j)?;
        self.entries[s] = v;
        Ok(())
    }

    /// `<S, T> = sum_{I,J} S_IJ T_IJ`.
    pub fn inner(&self, other: &MLMatrix<T>) -> Result<T> {
        if self.layers != other.layers {
            return Err(Error::domain(format!(
                "cannot pair matrices over {} and {} layers",
                self.layers, other.layers
            )));
        }
        let mut acc = T::Sum::default();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            if !a.is_zero() && !b.is_zero() {
                acc.add(a.clone() * b.clone());
            }
        }
        Ok(acc.total())
    }

    pub fn hs_norm_sq(&self) -> T {
        T::sum_of(self.entries.iter().map(|v| v.clone() * v.clone()))
    }

    /// Nonzero entries as `(I, J, value)`.
    pub fn support(&self) -> impl Iterator<Item = (Subset, Subset, &T)> + '_ {
        let d = self.dim();
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(s, v)| {
                (
                    Subset::from_mask((s / d) as u8),
                    Subset::from_mask((s % d) as u8),
                    v,
                )
            })
    }
}

/// A simple graph with a matrix on each oriented edge.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoratedGraph<T> {
    graph: SimpleGraph,
    layers: usize,
    beta: BTreeMap<(usize, usize), MLMatrix<T>>,
}

impl<T: Scalar> DecoratedGraph<T> {
    /// Edgeless decorated graph on `n` vertices.
    pub fn new(n: usize, layers: usize) -> Result<Self> {
        check_layers(layers)?;
        Ok(DecoratedGraph {
            graph: SimpleGraph::edgeless(n),
            layers,
            beta: BTreeMap::new(),
        })
    }

    /// Adds the edge `(u, v)` with `beta(u, v) = forward`, `beta(v, u) = backward`.
    pub fn add_edge(
        &mut self,
        u: usize,
        v: usize,
        forward: MLMatrix<T>,
        backward: MLMatrix<T>,
    ) -> Result<()> {
        if forward.layers != self.layers || backward.layers != self.layers {
            return Err(Error::domain("decoration layer count mismatch"));
        }
        if !hs_close(&forward.hs_norm_sq(), &backward.hs_norm_sq()) {
            return Err(Error::domain(format!(
                "decorations of ({}, {}) have different Hilbert-Schmidt norms",
                u + 1,
                v + 1
            )));
        }
        self.graph.add_edge(u, v)?;
        self.beta.insert((u, v), forward);
        self.beta.insert((v, u), backward);
        Ok(())
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    pub fn beta(&self, u: usize, v: usize) -> Option<&MLMatrix<T>> {
        self.beta.get(&(u, v))
    }
}

/// Step function on `[0,1]^2` with values in `M_L`.
#[derive(Clone, Debug, PartialEq)]
pub struct DecoratedStepGraphon<T> {
    breaks: Vec<T>,
    layers: usize,
    cells: Vec<MLMatrix<T>>,
}

impl<T: Scalar> DecoratedStepGraphon<T> {
    pub fn new(breaks: Vec<T>, cells: Vec<Vec<MLMatrix<T>>>) -> Result<Self> {
        // reuse the plain validation of breakpoints
        let m = breaks.len().saturating_sub(1);
        StepGraphon::new(breaks.clone(), vec![vec![T::zero(); m]; m])?;
        if cells.len() != m || cells.iter().any(|row| row.len() != m) {
            return Err(Error::domain(format!(
                "{m} cells need a {m}x{m} grid of matrices"
            )));
        }
        let layers = cells[0][0].layers;
        for a in 0..m {
            for b in 0..m {
                if cells[a][b].layers != layers {
                    return Err(Error::domain("cells decorate different layer counts"));
                }
                if !hs_close(&cells[a][b].hs_norm_sq(), &cells[b][a].hs_norm_sq()) {
                    return Err(Error::domain(format!(
                        "Hilbert-Schmidt norms differ on cells ({}, {}) and ({}, {})",
                        a + 1,
                        b + 1,
                        b + 1,
                        a + 1
                    )));
                }
            }
        }
        Ok(DecoratedStepGraphon {
            breaks,
            layers,
            cells: cells.into_iter().flatten().collect(),
        })
    }

    /// One cell carrying `s`.
    pub fn constant(s: MLMatrix<T>) -> Result<Self> {
        Self::new(vec![T::zero(), T::one()], vec![vec![s]])
    }

    pub fn layers(&self) -> usize {
        self.layers
    }

    pub fn cell_count(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn cell(&self, a: usize, b: usize) -> &MLMatrix<T> {
        &self.cells[a * self.cell_count() + b]
    }
}

/// `F^{J,alpha}_{f_pi}`: one vertex per block of `pi` (canonical order) and a
/// final vertex `xi`. Crossing blocks `u, v` are joined with `P_{J_u,J_v}`;
/// blocks `{r,s}` with `alpha_r = alpha_s` are joined to `xi` with `P_{J_u,0}`.
pub fn decorated_intersection_graph<T: Scalar>(
    pi: &PairPartition,
    spec: &WordSpec,
    layers: usize,
) -> Result<DecoratedGraph<T>> {
    if pi.size() != spec.len() {
        return Err(Error::domain(format!(
            "pair partition of {} positions paired with a word of length {}",
            pi.size(),
            spec.len()
        )));
    }
    spec.check_layers(layers)?;
    let pairs: Vec<(usize, usize)> = pi.pairs().collect();
    let mut js = Vec::with_capacity(pairs.len());
    for &(r, s) in &pairs {
        if spec.subset(r) != spec.subset(s) {
            return Err(Error::domain(format!(
                "block {{{}, {}}} joins letters with subsets {} and {}",
                r + 1,
                s + 1,
                spec.subset(r),
                spec.subset(s)
            )));
        }
        js.push(spec.subset(r));
    }
    let xi = pairs.len();
    let mut f = DecoratedGraph::new(xi + 1, layers)?;
    for (u, v) in pi.intersection_graph().edges() {
        f.add_edge(
            u,
            v,
            MLMatrix::basis(layers, js[u], js[v])?,
            MLMatrix::basis(layers, js[v], js[u])?,
        )?;
    }
    for (u, &(r, s)) in pairs.iter().enumerate() {
        if spec.exponent(r) == spec.exponent(s) {
            f.add_edge(
                u,
                xi,
                MLMatrix::basis(layers, js[u], Subset::EMPTY)?,
                MLMatrix::basis(layers, Subset::EMPTY, js[u])?,
            )?;
        }
    }
    Ok(f)
}

/// 1 when the fiber `{(k, l) : l in s}` is a clique of `g`.
fn fiber_complete<T: Scalar>(g: &GridGraph, k: usize, s: Subset) -> T {
    if g.is_complete_on_fiber(k, s) {
        T::one()
    } else {
        T::zero()
    }
}

fn grid_decoration<T: Scalar>(g: &GridGraph, u: usize, v: usize) -> Result<MLMatrix<T>> {
    let layers = g.layers();
    let mut m = MLMatrix::zero(layers)?;
    m.set(Subset::EMPTY, Subset::EMPTY, T::one())?;
    for j in Subset::nonempty(layers) {
        m.set(j, Subset::EMPTY, fiber_complete(g, u, j))?;
        m.set(Subset::EMPTY, j, fiber_complete(g, v, j))?;
    }
    for j1 in Subset::nonempty(layers) {
        for j2 in Subset::nonempty(layers) {
            let all = j1.layers().all(|l1| {
                j2.layers()
                    .all(|l2| g.has_edge(GridVertex::new(u, l1), GridVertex::new(v, l2)))
            });
            if all {
                m.set(j1, j2, T::one())?;
            }
        }
    }
    Ok(m)
}

/// `G_{g_n} = (K_n, gamma_n)` of a grid graph.
pub fn compressed_grid<T: Scalar>(g: &GridGraph) -> Result<DecoratedGraph<T>> {
    if g.n() == 0 {
        return Err(Error::domain("grid graph has no columns"));
    }
    let mut out = DecoratedGraph::new(g.n(), g.layers())?;
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            out.add_edge(u, v, grid_decoration(g, u, v)?, grid_decoration(g, v, u)?)?;
        }
    }
    Ok(out)
}

/// The decorated limit of the compressed grids of `g'_n . g_L` when
/// `g'_n -> w`.
pub fn lex_limit_decoration<T: Scalar>(
    layer_graph: &SimpleGraph,
    w: &StepGraphon<T>,
) -> Result<DecoratedStepGraphon<T>> {
    let layers = layer_graph.vertex_count();
    check_layers(layers)?;
    let subsets = Subset::nonempty(layers);
    let indicator = |b: bool| if b { T::one() } else { T::zero() };
    // cross-layer factor, without w*
    let cross = |j1: Subset, j2: Subset| {
        j1.layers().all(|l1| {
            j2.layers()
                .all(|l2| l1 == l2 || layer_graph.has_edge(l1, l2))
        })
    };
    let m = w.cell_count();
    let mut cells = Vec::with_capacity(m);
    for a in 0..m {
        let mut row = Vec::with_capacity(m);
        for b in 0..m {
            let mut s = MLMatrix::zero(layers)?;
            s.set(Subset::EMPTY, Subset::EMPTY, T::one())?;
            for &j in &subsets {
                let c = indicator(layer_graph.is_complete_on_subset(j));
                s.set(j, Subset::EMPTY, c.clone())?;
                s.set(Subset::EMPTY, j, c)?;
            }
            for &j1 in &subsets {
                for &j2 in &subsets {
                    if !cross(j1, j2) {
                        continue;
                    }
                    let v = if j1.intersects(j2) {
                        w.value(a, b).clone()
                    } else {
                        T::one()
                    };
                    s.set(j1, j2, v)?;
                }
            }
            row.push(s);
        }
        cells.push(row);
    }
    DecoratedStepGraphon::new(w.breaks().to_vec(), cells)
}

/// `rho(F, w) = int prod_{(u,v)} <beta(u,v), w(x_u, x_v)> dx`, each edge taken
/// once in its `u < v` orientation.
pub fn rho_decorated<T: Scalar>(f: &DecoratedGraph<T>, w: &DecoratedStepGraphon<T>) -> Result<T> {
    if f.layers != w.layers {
        return Err(Error::domain(format!(
            "decorated graph over {} layers evaluated on a graphon over {} layers",
            f.layers, w.layers
        )));
    }
    let m = w.cell_count();
    let widths = crate::graphon::widths(&w.breaks);
    let mut total = T::one();
    for comp in f.graph.components() {
        if comp.len() == 1 {
            continue;
        }
        let mut edges = Vec::new();
        let mut tables: Vec<Vec<T>> = Vec::new();
        for (u, v) in f.graph.induced(&comp).edges() {
            let beta = f.beta(comp[u], comp[v]).expect("decorated edge");
            let mut table = Vec::with_capacity(m * m);
            for a in 0..m {
                for b in 0..m {
                    table.push(beta.inner(w.cell(a, b))?);
                }
            }
            edges.push((u, v));
            tables.push(table);
        }
        let value = cell_sum(comp.len(), &widths, &edges, &|e, a, b| {
            tables[e][a * m + b].clone()
        });
        if value.is_zero() {
            return Ok(T::zero());
        }
        total *= value;
    }
    Ok(total)
}

/// Which maps `V(F) -> V(G)` a homomorphism count ranges over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomMode {
    All,
    Injective,
}

/// `hom(F, G) / |V(G)|^{|V(F)|}` or its injective variant.
///
/// An edge of `F` mapped onto a non-edge of `G`, or onto a single vertex,
/// contributes the zero decoration.
pub fn hom_variants<T: Scalar>(
    f: &DecoratedGraph<T>,
    g: &DecoratedGraph<T>,
    mode: HomMode,
) -> Result<T> {
    if f.layers != g.layers {
        return Err(Error::domain(format!(
            "decorated graphs over {} and {} layers",
            f.layers, g.layers
        )));
    }
    let nf = f.vertex_count();
    let ng = g.vertex_count();
    if ng == 0 {
        return Err(Error::domain("target graph has no vertices"));
    }
    let edges = f.graph.edges();
    // inner products per edge of F and oriented pair of G
    let mut tables: Vec<Vec<T>> = Vec::with_capacity(edges.len());
    for &(u, v) in &edges {
        let beta = f.beta(u, v).expect("decorated edge");
        let mut table = vec![T::zero(); ng * ng];
        for x in 0..ng {
            for y in 0..ng {
                if let Some(gamma) = g.beta(x, y) {
                    table[x * ng + y] = beta.inner(gamma)?;
                }
            }
        }
        tables.push(table);
    }
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for (e, &(_, v)) in edges.iter().enumerate() {
        closing[v].push(e);
    }
    struct Walk<'a, T: Scalar> {
        edges: &'a [(usize, usize)],
        tables: &'a [Vec<T>],
        closing: &'a [Vec<usize>],
        ng: usize,
        injective: bool,
        map: Vec<usize>,
        used: Vec<bool>,
        acc: T::Sum,
    }
    impl<T: Scalar> Walk<'_, T> {
        fn visit(&mut self, depth: usize, partial: T) {
            if depth == self.map.len() {
                self.acc.add(partial);
                return;
            }
            for x in 0..self.ng {
                if self.injective && self.used[x] {
                    continue;
                }
                self.map[depth] = x;
                let mut term = partial.clone();
                for &e in &self.closing[depth] {
                    let (u, v) = self.edges[e];
                    term *= self.tables[e][self.map[u] * self.ng + self.map[v]].clone();
                    if term.is_zero() {
                        break;
                    }
                }
                if term.is_zero() {
                    continue;
                }
                self.used[x] = true;
                self.visit(depth + 1, term);
                self.used[x] = false;
            }
        }
    }
    let mut walk = Walk {
        edges: &edges,
        tables: &tables,
        closing: &closing,
        ng,
        injective: mode == HomMode::Injective,
        map: vec![0; nf],
        used: vec![false; ng],
        acc: T::Sum::default(),
    };
    walk.visit(0, T::one());
    let total = num::pow(BigInt::from(ng), nf);
    Ok(walk.acc.total() / T::from_bigint(&total))
}

/// Injective density of `F^{J,alpha}_{f_pi}` in `G_{g_n}` through the product
/// formula: `((n - p/2)/n) n^{-p/2}` times the sum over injective block
/// placements of the fiber-completeness and crossing indicators, read
/// directly off `g`.
pub fn injective_density_product_formula<T: Scalar>(
    pi: &PairPartition,
    spec: &WordSpec,
    g: &GridGraph,
) -> Result<T> {
    if pi.size() != spec.len() {
        return Err(Error::domain("partition and word lengths differ"));
    }
    spec.check_layers(g.layers())?;
    let pairs: Vec<(usize, usize)> = pi.pairs().collect();
    if pairs.iter().any(|&(r, s)| spec.subset(r) != spec.subset(s)) {
        return Err(Error::domain(
            "a block joins letters with different subsets",
        ));
    }
    let n = g.n();
    let half = pairs.len();
    let crossings = pi.intersection_graph().edges();
    let mut count = BigInt::zero();
    let mut phi = vec![0usize; half];
    let mut used = vec![false; n];
    fn visit(
        depth: usize,
        phi: &mut [usize],
        used: &mut [bool],
        count: &mut BigInt,
        pairs: &[(usize, usize)],
        crossings: &[(usize, usize)],
        spec: &WordSpec,
        g: &GridGraph,
    ) {
        if depth == phi.len() {
            *count += 1;
            return;
        }
        let (r, s) = pairs[depth];
        let ju = spec.subset(r);
        for x in 0..g.n() {
            if used[x] {
                continue;
            }
            if spec.exponent(r) == spec.exponent(s) && !g.is_complete_on_fiber(x, ju) {
                continue;
            }
            phi[depth] = x;
            let ok = crossings
                .iter()
                .filter(|&&(_, v)| v == depth)
                .all(|&(u, _)| {
                    let jv = spec.subset(pairs[u].0);
                    jv.layers().all(|l1| {
                        ju.layers().all(|l2| {
                            g.has_edge(GridVertex::new(phi[u], l1), GridVertex::new(x, l2))
                        })
                    })
                });
            if !ok {
                continue;
            }
            used[x] = true;
            visit(depth + 1, phi, used, count, pairs, crossings, spec, g);
            used[x] = false;
        }
    }
    visit(
        0, &mut phi, &mut used, &mut count, &pairs, &crossings, spec, g,
    );
    let n_t = T::from_i64(n as i64);
    let prefactor = (n_t.clone() - T::from_ratio(pairs.len() as i64, 1)) / n_t.clone();
    let denom = num::pow(BigInt::from(n), half);
    Ok(prefactor * T::from_bigint(&count) / T::from_bigint(&denom))
}
