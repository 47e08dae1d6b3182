//! Free cumulants of a single law, the graph-independence moment formula and
//! pair-cumulant moments of semicircular and circular families.

use crate::combinatorics::{kernel, pairings_within, Exponent};
use crate::error::{Error, Result};
use crate::graphs::{Adjacency, SimpleGraph};
use crate::scalar::{Accumulator, Scalar};

/// Law of one self-adjoint variable, given by its moments `m_1..m_K`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarLaw<T> {
    moments: Vec<T>,
}

fn binomial(n: usize, k: usize) -> i64 {
    (0..k).fold(1i64, |acc, j| acc * (n - j) as i64 / (j + 1) as i64)
}

fn catalan(n: usize) -> i64 {
    binomial(2 * n, n) / (n as i64 + 1)
}

impl<T: Scalar> ScalarLaw<T> {
    pub fn new(moments: Vec<T>) -> Result<Self> {
        if moments.len() < 2 {
            return Err(Error::domain("a law needs at least two moments"));
        }
        let law = ScalarLaw { moments };
        if law.variance() < T::zero() {
            return Err(Error::domain(format!(
                "moments give negative variance {}",
                law.variance()
            )));
        }
        Ok(law)
    }

    /// `lambda + sqrt(sigma2) s` for a standard semicircle `s`, with moments up
    /// to `order`. Only even powers of `sqrt(sigma2)` occur, so the moments are
    /// rational whenever `lambda` and `sigma2` are.
    pub fn shifted_semicircle(lambda: T, sigma2: T, order: usize) -> Result<Self> {
        if sigma2 < T::zero() {
            return Err(Error::domain("variance must be nonnegative"));
        }
        let order = order.max(2);
        let moments = (1..=order)
            .map(|k| {
                T::sum_of((0..=k / 2).map(|j| {
                    T::from_i64(binomial(k, 2 * j) * catalan(j))
                        * lambda.powi((k - 2 * j) as u32)
                        * sigma2.powi(j as u32)
                }))
            })
            .collect();
        Self::new(moments)
    }

    /// Standard semicircle: odd moments 0, `m_{2j}` = Catalan(j).
    pub fn semicircle(order: usize) -> Self {
        Self::shifted_semicircle(T::zero(), T::one(), order).expect("valid")
    }

    /// Standard Gaussian: `m_{2j} = (2j-1)!!`.
    pub fn gaussian(order: usize) -> Self {
        let moments = (1..=order.max(2))
            .map(|k| {
                if k % 2 == 1 {
                    T::zero()
                } else {
                    T::from_i64((1..k as i64).step_by(2).product())
                }
            })
            .collect();
        Self::new(moments).expect("valid")
    }

    /// Symmetric `+-1` variable.
    pub fn rademacher(order: usize) -> Self {
        let moments = (1..=order.max(2))
            .map(|k| if k % 2 == 0 { T::one() } else { T::zero() })
            .collect();
        Self::new(moments).expect("valid")
    }

    pub fn moments(&self) -> &[T] {
        &self.moments
    }

    /// Largest available moment order `K`.
    pub fn order(&self) -> usize {
        self.moments.len()
    }

    /// `m_k`, with `m_0 = 1`.
    pub fn moment(&self, k: usize) -> Option<T> {
        match k {
            0 => Some(T::one()),
            _ => self.moments.get(k - 1).cloned(),
        }
    }

    pub fn mean(&self) -> T {
        self.moments[0].clone()
    }

    pub fn variance(&self) -> T {
        self.moments[1].clone() - self.moments[0].clone() * self.moments[0].clone()
    }

    /// Law of `a - m_1`.
    pub fn centered(&self) -> Self {
        let lambda = self.mean();
        let moments = (1..=self.order())
            .map(|k| {
                T::sum_of((0..=k).map(|j| {
                    let sign = if (k - j) % 2 == 0 {
                        T::one()
                    } else {
                        -T::one()
                    };
                    sign * T::from_i64(binomial(k, j))
                        * self.moment(j).expect("in range")
                        * lambda.powi((k - j) as u32)
                }))
            })
            .collect();
        ScalarLaw { moments }
    }

    pub fn is_centered(&self) -> bool {
        self.moments[0].is_zero()
    }

    /// Centered with unit variance.
    pub fn is_normalized(&self) -> bool {
        self.is_centered() && self.moments[1].is_one()
    }
}

/// Free cumulants `kappa_1..kappa_K`.
#[derive(Clone, Debug, PartialEq)]
pub struct FreeCumulants<T> {
    kappa: Vec<T>,
}

impl<T: Scalar> FreeCumulants<T> {
    pub fn new(kappa: Vec<T>) -> Self {
        FreeCumulants { kappa }
    }

    pub fn values(&self) -> &[T] {
        &self.kappa
    }

    pub fn order(&self) -> usize {
        self.kappa.len()
    }

    /// `kappa_k` for `1 <= k <= K`.
    pub fn get(&self, k: usize) -> Option<&T> {
        k.checked_sub(1).and_then(|i| self.kappa.get(i))
    }
}

/// `[x^j] M(x)^s` for `j <= top`, where `M(x) = sum_i m_i x^i` with `m_0 = 1`.
fn power_coefficients<T: Scalar>(m: &[T], top: usize) -> Vec<Vec<T>> {
    let base: Vec<T> = m.iter().take(top + 1).cloned().collect();
    let mut out = vec![{
        let mut one = vec![T::zero(); top + 1];
        one[0] = T::one();
        one
    }];
    for s in 1..=top + 1 {
        let prev = &out[s - 1];
        let next = (0..=top)
            .map(|j| {
                T::sum_of(
                    (0..=j)
                        .filter(|&a| a < base.len())
                        .map(|a| base[a].clone() * prev[j - a].clone()),
                )
            })
            .collect();
        out.push(next);
    }
    out
}

/// Inverts `m_n = sum_{s=1}^{n} kappa_s [x^{n-s}] M(x)^s`, the noncrossing
/// moment-cumulant relation grouped by the block containing 1.
pub fn moments_to_free_cumulants<T: Scalar>(law: &ScalarLaw<T>) -> FreeCumulants<T> {
    let k = law.order();
    let m: Vec<T> = (0..=k).map(|j| law.moment(j).expect("in range")).collect();
    let coeff = power_coefficients(&m, k);
    let mut kappa: Vec<T> = Vec::with_capacity(k);
    for n in 1..=k {
        let lower = T::sum_of((1..n).map(|s| kappa[s - 1].clone() * coeff[s][n - s].clone()));
        kappa.push(m[n].clone() - lower);
    }
    FreeCumulants { kappa }
}

/// Moments determined by free cumulants.
pub fn free_cumulants_to_moments<T: Scalar>(kappa: &FreeCumulants<T>) -> Result<ScalarLaw<T>> {
    let k = kappa.order();
    if k < 2 {
        return Err(Error::domain("need at least two cumulants"));
    }
    let mut m = vec![T::one()];
    for n in 1..=k {
        // coefficients of M^s up to degree n-1 only use known moments
        let coeff = power_coefficients(&m, n - 1);
        let value =
            T::sum_of((1..=n).map(|s| kappa.kappa[s - 1].clone() * coeff[s][n - s].clone()));
        m.push(value);
    }
    m.remove(0);
    Ok(ScalarLaw { moments: m })
}

/// Laws attached to the vertices of the independence graph, with cumulants
/// computed once.
#[derive(Clone, Debug)]
pub struct VertexLaws<T> {
    shared: bool,
    laws: Vec<ScalarLaw<T>>,
    cumulants: Vec<FreeCumulants<T>>,
}

impl<T: Scalar> VertexLaws<T> {
    /// The same law at every vertex.
    pub fn shared(law: ScalarLaw<T>) -> Self {
        let c = moments_to_free_cumulants(&law);
        VertexLaws {
            shared: true,
            laws: vec![law],
            cumulants: vec![c],
        }
    }

    /// One law per vertex.
    pub fn per_vertex(laws: Vec<ScalarLaw<T>>) -> Self {
        let cumulants = laws.iter().map(moments_to_free_cumulants).collect();
        VertexLaws {
            shared: false,
            laws,
            cumulants,
        }
    }

    fn index(&self, v: usize) -> Result<usize> {
        if self.shared {
            Ok(0)
        } else if v < self.laws.len() {
            Ok(v)
        } else {
            Err(Error::domain(format!("no law given for vertex {}", v + 1)))
        }
    }

    pub fn law(&self, v: usize) -> Result<&ScalarLaw<T>> {
        Ok(&self.laws[self.index(v)?])
    }

    pub fn cumulants(&self, v: usize) -> Result<&FreeCumulants<T>> {
        Ok(&self.cumulants[self.index(v)?])
    }
}

/// Block `b` and `c` (sorted) cross iff `c` meets two different gaps of `b`,
/// the gap before `b[0]` and after the last element counting as one.
fn crosses(b: &[usize], c: &[usize]) -> bool {
    let gap = |x: usize| b.partition_point(|&y| y < x) % b.len();
    let g0 = gap(c[0]);
    c[1..].iter().any(|&x| gap(x) != g0)
}

/// `tau(a_1 ... a_k)` for `a_j` the generator at vertex `i_j`: the sum over
/// `pi in NC(g, i)` of the product of free cumulants of the blocks.
pub fn epsilon_moment<T: Scalar, G: Adjacency + ?Sized>(
    g: &G,
    i: &[usize],
    laws: &VertexLaws<T>,
) -> Result<T> {
    let ker = kernel(i)?;
    if let Some(&bad) = i.iter().find(|&&v| v >= g.order()) {
        return Err(Error::domain(format!(
            "index {} is not a vertex of a graph with {} vertices",
            bad + 1,
            g.order()
        )));
    }
    let mut tables: Vec<&[T]> = Vec::with_capacity(i.len());
    for block in ker.blocks() {
        let v = i[block[0]];
        let c = laws.cumulants(v)?;
        if c.order() < block.len() {
            return Err(Error::domain(format!(
                "vertex {} occurs {} times but its law only provides cumulants up to order {}",
                v + 1,
                block.len(),
                c.order()
            )));
        }
    }
    for &v in i {
        tables.push(laws.cumulants(v)?.values());
    }
    let centered = tables.iter().all(|t| t[0].is_zero());
    // occurrences of i[pos] strictly after pos
    let mut later = vec![0usize; i.len()];
    for pos in (0..i.len()).rev() {
        later[pos] = i[pos + 1..].iter().filter(|&&v| v == i[pos]).count();
    }
    let mut search = Search {
        g,
        i,
        tables: &tables,
        min_block: if centered { 2 } else { 1 },
        later: &later,
        blocks: Vec::new(),
        acc: T::Sum::default(),
    };
    search.visit(0);
    Ok(search.acc.total())
}

struct Search<'a, T: Scalar, G: ?Sized> {
    g: &'a G,
    i: &'a [usize],
    tables: &'a [&'a [T]],
    min_block: usize,
    later: &'a [usize],
    blocks: Vec<Vec<usize>>,
    acc: T::Sum,
}

impl<T: Scalar, G: Adjacency + ?Sized> Search<'_, T, G> {
    fn admissible(&self, b: usize) -> bool {
        let block = &self.blocks[b];
        let v = self.i[block[0]];
        self.blocks.iter().enumerate().all(|(c, other)| {
            c == b || !crosses(block, other) || self.g.is_edge(v, self.i[other[0]])
        })
    }

    fn visit(&mut self, pos: usize) {
        if pos == self.i.len() {
            if self.blocks.iter().any(|b| b.len() < self.min_block) {
                return;
            }
            let mut term = T::one();
            for block in &self.blocks {
                term *= self.tables[block[0]][block.len() - 1].clone();
                if term.is_zero() {
                    return;
                }
            }
            self.acc.add(term);
            return;
        }
        let v = self.i[pos];
        for b in 0..self.blocks.len() {
            if self.i[self.blocks[b][0]] != v {
                continue;
            }
            self.blocks[b].push(pos);
            if self.admissible(b) {
                self.visit(pos + 1);
            }
            self.blocks[b].pop();
        }
        if self.min_block == 1 || self.later[pos] > 0 {
            self.blocks.push(vec![pos]);
            let b = self.blocks.len() - 1;
            if self.admissible(b) {
                self.visit(pos + 1);
            }
            self.blocks.pop();
        }
    }
}

/// Semicircle, circular, or a variable given by its pair-cumulant table
/// `kappa_2(x^a, x^b)` (index 0 for `1`, 1 for `*`).
#[derive(Clone, Debug, PartialEq)]
pub enum StarVariable<T> {
    Semicircle,
    Circular,
    General([[T; 2]; 2]),
}

impl<T: Scalar> StarVariable<T> {
    pub fn pair_cumulant(&self, a: Exponent, b: Exponent) -> T {
        let idx = |e: Exponent| usize::from(e == Exponent::Star);
        match self {
            StarVariable::Semicircle => T::one(),
            StarVariable::Circular => {
                if a == b {
                    T::zero()
                } else {
                    T::one()
                }
            }
            StarVariable::General(t) => t[idx(a)][idx(b)].clone(),
        }
    }
}

/// `tau(x_{v_1}^{alpha_1} ... x_{v_p}^{alpha_p})` for variables with only
/// second cumulants, independent over `h`: the sum over pair partitions in
/// `NC(h, v)` of the products of pair cumulants.
pub fn star_joint_moment<T: Scalar>(
    h: &SimpleGraph,
    vars: &[StarVariable<T>],
    letters: &[usize],
    alpha: &[Exponent],
) -> Result<T> {
    if letters.len() != alpha.len() {
        return Err(Error::domain(format!(
            "{} letters but {} exponents",
            letters.len(),
            alpha.len()
        )));
    }
    if vars.len() != h.vertex_count() {
        return Err(Error::domain(format!(
            "{} variables for a graph with {} vertices",
            vars.len(),
            h.vertex_count()
        )));
    }
    if let Some(&bad) = letters.iter().find(|&&v| v >= h.vertex_count()) {
        return Err(Error::domain(format!("letter {} is not a vertex", bad + 1)));
    }
    let mut acc = T::Sum::default();
    for pi in pairings_within(letters) {
        let mut term = T::one();
        for (r, s) in pi.pairs() {
            term *= vars[letters[r]].pair_cumulant(alpha[r], alpha[s]);
            if term.is_zero() {
                break;
            }
        }
        if term.is_zero() {
            continue;
        }
        if crate::combinatorics::is_gn_noncrossing(pi.as_partition(), letters, h)? {
            acc.add(term);
        }
    }
    Ok(acc.total())
}
