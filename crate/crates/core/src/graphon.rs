//! Step graphons and homomorphism densities of plain graphs.

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graphs::SimpleGraph;
use crate::scalar::{Accumulator, Scalar};

/// Piecewise-constant symmetric kernel on `[0,1]^2`.
///
/// Cell `a` is the interval `[breaks[a], breaks[a+1])`; `value(a, b)` is the
/// kernel on the product of cells `a` and `b`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepGraphon<T> {
    breaks: Vec<T>,
    values: Vec<T>,
}

fn check_breaks<T: Scalar>(breaks: &[T]) -> Result<()> {
    if breaks.len() < 2 {
        return Err(Error::domain(
            "a step graphon needs at least two breakpoints",
        ));
    }
    if breaks[0] != T::zero() || breaks[breaks.len() - 1] != T::one() {
        return Err(Error::domain("breakpoints must start at 0 and end at 1"));
    }
    if breaks.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::domain("breakpoints must be strictly increasing"));
    }
    Ok(())
}

pub(crate) fn widths<T: Scalar>(breaks: &[T]) -> Vec<T> {
    breaks
        .windows(2)
        .map(|w| w[1].clone() - w[0].clone())
        .collect()
}

/// Breakpoints `0, 1/n, ..., 1`.
pub(crate) fn uniform_breaks<T: Scalar>(n: usize) -> Vec<T> {
    (0..=n)
        .map(|i| T::from_i64(i as i64) / T::from_i64(n as i64))
        .collect()
}

impl<T: Scalar> StepGraphon<T> {
    pub fn new(breaks: Vec<T>, values: Vec<Vec<T>>) -> Result<Self> {
        check_breaks(&breaks)?;
        let m = breaks.len() - 1;
        if values.len() != m || values.iter().any(|row| row.len() != m) {
            return Err(Error::domain(format!(
                "{m} cells need a {m}x{m} value matrix"
            )));
        }
        for (a, row) in values.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                if *v < T::zero() || *v > T::one() {
                    return Err(Error::domain(format!(
                        "value {v} at cell ({}, {}) outside [0, 1]",
                        a + 1,
                        b + 1
                    )));
                }
                if *v != values[b][a] {
                    return Err(Error::domain(format!(
                        "values are not symmetric at cells ({}, {})",
                        a + 1,
                        b + 1
                    )));
                }
            }
        }
        Ok(StepGraphon {
            breaks,
            values: values.into_iter().flatten().collect(),
        })
    }

    /// Single cell of value `q`.
    pub fn constant(q: T) -> Result<Self> {
        Self::new(vec![T::zero(), T::one()], vec![vec![q]])
    }

    /// `n` equal cells carrying the adjacency matrix of `g` (diagonal 0).
    pub fn from_graph(g: &SimpleGraph) -> Result<Self> {
        let n = g.vertex_count();
        if n == 0 {
            return Err(Error::domain("graph has no vertices"));
        }
        let values = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if g.has_edge(a, b) {
                            T::one()
                        } else {
                            T::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self::new(uniform_breaks(n), values)
    }

    pub fn cell_count(&self) -> usize {
        self.breaks.len() - 1
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn widths(&self) -> Vec<T> {
        widths(&self.breaks)
    }

    pub fn value(&self, a: usize, b: usize) -> &T {
        &self.values[a * self.cell_count() + b]
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        let m = self.cell_count();
        self.values.chunks(m).map(<[T]>::to_vec).collect()
    }

    /// True when every cell value is 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.values.iter().all(|v| v.is_zero() || v.is_one())
    }

    pub fn is_constant(&self, q: &T) -> bool {
        self.values.iter().all(|v| v == q)
    }
}

/// Sum over cell assignments `c: V -> [m]` of
/// `prod_v width(c_v) * prod_e factor(e, c_u, c_v)`.
///
/// `edges[e] = (u, v)` with both endpoints below `vertices`. Assignments are
/// visited in lexicographic order, so float sums are deterministic.
pub(crate) fn cell_sum<T: Scalar>(
    vertices: usize,
    widths: &[T],
    edges: &[(usize, usize)],
    factor: &dyn Fn(usize, usize, usize) -> T,
) -> T {
    if vertices == 0 {
        return T::one();
    }
    // edges closed when their larger endpoint is assigned
    let mut closing: Vec<Vec<usize>> = vec![Vec::new(); vertices];
    for (e, &(u, v)) in edges.iter().enumerate() {
        closing[u.max(v)].push(e);
    }
    let mut acc = T::Sum::default();
    let mut cells = vec![0usize; vertices];
    fn visit<T: Scalar>(
        depth: usize,
        partial: T,
        cells: &mut [usize],
        widths: &[T],
        edges: &[(usize, usize)],
        closing: &[Vec<usize>],
        factor: &dyn Fn(usize, usize, usize) -> T,
        acc: &mut T::Sum,
    ) {
        if depth == cells.len() {
            acc.add(partial);
            return;
        }
        for c in 0..widths.len() {
            cells[depth] = c;
            let mut term = partial.clone() * widths[c].clone();
            for &e in &closing[depth] {
                if term.is_zero() {
                    break;
                }
                let (u, v) = edges[e];
                term *= factor(e, cells[u], cells[v]);
            }
            if term.is_zero() {
                continue;
            }
            visit(depth + 1, term, cells, widths, edges, closing, factor, acc);
        }
    }
    visit(
        0,
        T::one(),
        &mut cells,
        widths,
        edges,
        &closing,
        factor,
        &mut acc,
    );
    acc.total()
}

/// `rho(f, w)`: exact integral of `prod_{(u,v) in E(f)} w(x_u, x_v)`,
/// factored over the connected components of `f`.
pub fn rho_graphon<T: Scalar>(f: &SimpleGraph, w: &StepGraphon<T>) -> T {
    let widths = w.widths();
    let mut total = T::one();
    for comp in f.components() {
        if comp.len() == 1 {
            // isolated vertex integrates to 1
            continue;
        }
        let sub = f.induced(&comp);
        let edges = sub.edges();
        let value = cell_sum(comp.len(), &widths, &edges, &|_, a, b| {
            w.value(a, b).clone()
        });
        if value.is_zero() {
            return T::zero();
        }
        total *= value;
    }
    total
}

/// Number of homomorphisms `f -> g`.
pub fn hom_count(f: &SimpleGraph, g: &SimpleGraph) -> BigInt {
    let nf = f.vertex_count();
    let ng = g.vertex_count();
    let mut back: Vec<Vec<usize>> = vec![Vec::new(); nf];
    for (u, v) in f.edges() {
        back[v].push(u);
    }
    fn visit(
        depth: usize,
        map: &mut [usize],
        back: &[Vec<usize>],
        g: &SimpleGraph,
        ng: usize,
    ) -> BigInt {
        if depth == map.len() {
            return BigInt::one();
        }
        let mut count = BigInt::zero();
        for x in 0..ng {
            if back[depth].iter().all(|&u| g.has_edge(map[u], x)) {
                map[depth] = x;
                count += visit(depth + 1, map, back, g, ng);
            }
        }
        count
    }
    visit(0, &mut vec![0; nf], &back, g, ng)
}

/// `rho(f, g) = hom(f, g) / |V(g)|^{|V(f)|}`.
pub fn rho_graph<T: Scalar>(f: &SimpleGraph, g: &SimpleGraph) -> Result<T> {
    if g.vertex_count() == 0 {
        return Err(Error::domain("target graph has no vertices"));
    }
    let count = hom_count(f, g);
    let total = num::pow(BigInt::from(g.vertex_count()), f.vertex_count());
    Ok(T::from_bigint(&count) / T::from_bigint(&total))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn edge() -> SimpleGraph {
        SimpleGraph::complete(2)
    }

    #[test]
    fn from_graph_examples() {
        let w = StepGraphon::<Rational>::from_graph(&SimpleGraph::complete(2)).unwrap();
        assert_eq!(w.breaks(), &[q(0, 1), q(1, 2), q(1, 1)]);
        assert_eq!(
            w.rows(),
            vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]
        );
        let z = StepGraphon::<Rational>::from_graph(&SimpleGraph::edgeless(4)).unwrap();
        assert!(z.is_constant(&q(0, 1)));
        let g = SimpleGraph::from_edges(3, &[(1, 2), (0, 2)]).unwrap();
        let w = StepGraphon::<Rational>::from_graph(&g).unwrap();
        assert_eq!(w.value(0, 2), &q(1, 1));
        assert_eq!(w.value(2, 1), &q(1, 1));
        assert_eq!(w.value(0, 1), &q(0, 1));
    }

    #[test]
    fn constant_examples() {
        assert!(StepGraphon::constant(q(1, 1))
            .unwrap()
            .is_constant(&q(1, 1)));
        assert!(StepGraphon::constant(q(0, 1))
            .unwrap()
            .is_constant(&q(0, 1)));
        assert_eq!(StepGraphon::constant(q(1, 2)).unwrap().cell_count(), 1);
        assert!(StepGraphon::constant(q(3, 2)).is_err());
        assert!(StepGraphon::constant(q(-1, 2)).is_err());
    }

    #[test]
    fn invalid_graphons() {
        assert!(StepGraphon::new(vec![q(0, 1), q(1, 2)], vec![vec![q(0, 1)]]).is_err());
        assert!(StepGraphon::new(
            vec![q(0, 1), q(1, 2), q(1, 1)],
            vec![vec![q(0, 1), q(1, 1)], vec![q(0, 1), q(0, 1)]]
        )
        .is_err());
    }

    #[test]
    fn rho_graph_examples() {
        assert_eq!(
            rho_graph::<Rational>(&edge(), &SimpleGraph::complete(3)).unwrap(),
            q(2, 3)
        );
        assert_eq!(
            rho_graph::<Rational>(&edge(), &SimpleGraph::edgeless(4)).unwrap(),
            q(0, 1)
        );
        assert_eq!(
            rho_graph::<Rational>(&SimpleGraph::complete(3), &SimpleGraph::complete(3)).unwrap(),
            q(2, 9)
        );
    }

    #[test]
    fn rho_graphon_examples() {
        let w = StepGraphon::constant(q(3, 7)).unwrap();
        assert_eq!(rho_graphon(&edge(), &w), q(3, 7));
        let half = StepGraphon::<Rational>::from_graph(&SimpleGraph::complete(2)).unwrap();
        assert_eq!(rho_graphon(&edge(), &half), q(1, 2));
        assert_eq!(rho_graphon(&SimpleGraph::edgeless(3), &half), q(1, 1));
        assert_eq!(rho_graphon(&SimpleGraph::complete(3), &half), q(0, 1));
    }

    #[test]
    fn float_mode_matches_exact() {
        let half = StepGraphon::<f64>::from_graph(&SimpleGraph::complete(2)).unwrap();
        assert!((rho_graphon(&SimpleGraph::path(4), &half) - 0.125).abs() < 1e-15);
    }
}
