//! Exact moments at finite `n`: letter expansion of words in the products
//! `b_k^{(J)}`, the pair-partition densities `rho_n`, and moments of the
//! normalized sums, by brute force or through partition classes when the base
//! graph is a blow-up.

use std::collections::BTreeMap;
use std::fmt;

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::combinatorics::{
    is_gn_noncrossing, kernel, Exponent, PairPartition, PartitionFilter, Partitions, SetPartition,
    WordSpec,
};
use crate::cumulants::{epsilon_moment, ScalarLaw, VertexLaws};
use crate::error::{Error, Result};
use crate::graphon::StepGraphon;
use crate::graphs::{lexicographic_product, GridGraph, GridVertex, SimpleGraph};
use crate::limit_laws::{s_limit_moment, LimitModel, Normalization};
use crate::scalar::{falling_factorial, half_power, Accumulator, Scalar};
use crate::subset::Subset;

/// Default cap on brute-force work, in elementary terms.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Letters `theta_1 .. theta_m` of a word in the products `b_k^{(J)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridWord {
    letters: Vec<GridVertex>,
}

impl GridWord {
    pub fn letters(&self) -> &[GridVertex] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// Flat vertex indices in a grid with `layers` layers.
    pub fn flat(&self, layers: usize) -> Vec<usize> {
        self.letters.iter().map(|v| v.k * layers + v.l).collect()
    }

    /// `ker(theta)`.
    pub fn kernel(&self) -> SetPartition {
        SetPartition::from_labels(&self.letters)
    }
}

impl fmt::Display for GridWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (idx, v) in self.letters.iter().enumerate() {
            if idx > 0 {
                write!(f, " ")?;
            }
            write!(f, "({},{})", v.k + 1, v.l + 1)?;
        }
        Ok(())
    }
}

/// Concatenates the letters of `(b_{i_r}^{(J_r)})^{alpha_r}`; a starred factor
/// lists its layers in decreasing order.
pub fn expand_word(i: &[usize], spec: &WordSpec) -> Result<GridWord> {
    if i.len() != spec.len() {
        return Err(Error::domain(format!(
            "index tuple of length {} for a word of length {}",
            i.len(),
            spec.len()
        )));
    }
    let mut letters = Vec::with_capacity(spec.expanded_len());
    for (r, &k) in i.iter().enumerate() {
        let layers: Vec<usize> = spec.subset(r).layers().collect();
        match spec.exponent(r) {
            Exponent::One => letters.extend(layers.iter().map(|&l| GridVertex::new(k, l))),
            Exponent::Star => letters.extend(layers.iter().rev().map(|&l| GridVertex::new(k, l))),
        }
    }
    Ok(GridWord { letters })
}

/// Calls `visit` with every `i in [n]^{blocks}` having pairwise distinct
/// entries, in lexicographic order.
fn for_each_injection(
    blocks: usize,
    n: usize,
    visit: &mut dyn FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    fn rec(
        depth: usize,
        n: usize,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]) -> Result<()>,
        blocks: usize,
    ) -> Result<()> {
        if depth == blocks {
            return visit(cur);
        }
        for x in 0..n {
            if used[x] {
                continue;
            }
            used[x] = true;
            cur.push(x);
            rec(depth + 1, n, cur, used, visit, blocks)?;
            cur.pop();
            used[x] = false;
        }
        Ok(())
    }
    rec(
        0,
        n,
        &mut Vec::with_capacity(blocks),
        &mut vec![false; n],
        visit,
        blocks,
    )
}

/// Index tuple whose kernel is `pi`, with block `b` sent to `phi[b]`.
fn tuple_from_blocks(pi: &SetPartition, phi: &[usize]) -> Vec<usize> {
    let mut i = vec![0; pi.size()];
    for (b, block) in pi.blocks().iter().enumerate() {
        for &r in block {
            i[r] = phi[b];
        }
    }
    i
}

fn check_grid(spec: &WordSpec, g: &GridGraph) -> Result<()> {
    spec.check_layers(g.layers())?;
    if g.n() == 0 {
        return Err(Error::domain("grid graph has no columns"));
    }
    Ok(())
}

/// `rho_n(pi, alpha, J) = n^{-p/2} sum_{ker(i) = pi} tau(...)` for a
/// normalized law shared by all vertices.
pub fn rho_n<T: Scalar>(
    pi: &PairPartition,
    spec: &WordSpec,
    g: &GridGraph,
    law: &ScalarLaw<T>,
) -> Result<T> {
    if !law.is_normalized() {
        return Err(Error::domain(
            "rho_n needs a normalized law (mean 0, variance 1); center and rescale first",
        ));
    }
    if pi.size() != spec.len() {
        return Err(Error::domain("partition and word lengths differ"));
    }
    check_grid(spec, g)?;
    let laws = VertexLaws::shared(law.clone());
    let part = pi.as_partition();
    let mut acc = T::Sum::default();
    for_each_injection(part.num_blocks(), g.n(), &mut |phi| {
        let i = tuple_from_blocks(part, phi);
        let theta = expand_word(&i, spec)?;
        acc.add(epsilon_moment(g, &theta.flat(g.layers()), &laws)?);
        Ok(())
    })?;
    let scale = num::pow(BigInt::from(g.n()), pi.num_pairs());
    Ok(acc.total() / T::from_bigint(&scale))
}

/// `ker(theta)` is a pair partition lying in `NC_2(g, theta)`.
pub fn theta_kernel_admissible(i: &[usize], spec: &WordSpec, g: &GridGraph) -> Result<bool> {
    check_grid(spec, g)?;
    let theta = expand_word(i, spec)?;
    let ker = theta.kernel();
    if !ker.is_pair_partition() {
        return Ok(false);
    }
    is_gn_noncrossing(&ker, &theta.flat(g.layers()), g)
}

/// The fiber and crossing conditions characterising admissible `ker(theta)`
/// for `pi in P_2^J(p)` and `ker(i) = pi`.
pub fn pair_kernel_conditions(
    pi: &PairPartition,
    spec: &WordSpec,
    i: &[usize],
    g: &GridGraph,
) -> Result<bool> {
    check_grid(spec, g)?;
    if pi.size() != spec.len() || i.len() != spec.len() {
        return Err(Error::domain("partition, word and tuple lengths differ"));
    }
    let pairs: Vec<(usize, usize)> = pi.pairs().collect();
    for &(r, s) in &pairs {
        if spec.exponent(r) == spec.exponent(s) && !g.is_complete_on_fiber(i[r], spec.subset(r)) {
            return Ok(false);
        }
    }
    for (u, v) in pi.intersection_graph().edges() {
        let (r1, r2) = (pairs[u].0, pairs[v].0);
        let all = spec.subset(r1).layers().all(|l1| {
            spec.subset(r2)
                .layers()
                .all(|l2| g.has_edge(GridVertex::new(i[r1], l1), GridVertex::new(i[r2], l2)))
        });
        if !all {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Base graphs `g'_n` for every `n`.
#[derive(Clone, Debug, PartialEq)]
pub enum BaseFamily<T> {
    Complete,
    Edgeless,
    /// `k ~ k'` iff `w(x_k, x_k') = 1` with `x_k = k/n`; `w` must be 0/1 valued.
    BlowUp(StepGraphon<T>),
    /// One fixed graph; only its own `n` is available.
    Explicit(SimpleGraph),
}

impl<T: Scalar> BaseFamily<T> {
    /// Step graphon whose blow-ups give this family, when there is one.
    fn as_step(&self) -> Option<StepGraphon<T>> {
        match self {
            BaseFamily::Complete => Some(StepGraphon::constant(T::one()).expect("valid")),
            BaseFamily::Edgeless => Some(StepGraphon::constant(T::zero()).expect("valid")),
            BaseFamily::BlowUp(w) => Some(w.clone()),
            BaseFamily::Explicit(_) => None,
        }
    }

    /// The graphon the family converges to, when it is known.
    pub fn limit(&self) -> Option<StepGraphon<T>> {
        self.as_step()
    }

    /// Depends on `i` only through `ker(i)` and the cells of its entries.
    pub fn is_exchangeable(&self) -> bool {
        !matches!(self, BaseFamily::Explicit(_))
    }

    pub fn validate(&self) -> Result<()> {
        if let BaseFamily::BlowUp(w) = self {
            if !w.is_zero_one() {
                return Err(Error::domain(
                    "blow-up families need a graphon with values 0 and 1 only",
                ));
            }
        }
        Ok(())
    }

    /// `g'_n`.
    pub fn graph(&self, n: usize) -> Result<SimpleGraph> {
        self.validate()?;
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        match self {
            BaseFamily::Explicit(g) => {
                if g.vertex_count() != n {
                    return Err(Error::domain(format!(
                        "explicit base graph has {} vertices, not {n}",
                        g.vertex_count()
                    )));
                }
                Ok(g.clone())
            }
            _ => {
                let w = self.as_step().expect("exchangeable");
                let cell = cell_of_vertices(&w, n);
                let mut g = SimpleGraph::edgeless(n);
                for a in 0..n {
                    for b in a + 1..n {
                        if w.value(cell[a], cell[b]).is_one() {
                            g.add_edge(a, b)?;
                        }
                    }
                }
                Ok(g)
            }
        }
    }
}

/// Cell sizes `ceil(n t_{c+1}) - ceil(n t_c)`.
fn cell_sizes<T: Scalar>(w: &StepGraphon<T>, n: usize) -> Vec<u64> {
    let nt = T::from_i64(n as i64);
    let edges: Vec<i64> = w
        .breaks()
        .iter()
        .map(|t| (t.clone() * nt.clone()).ceil_i64())
        .collect();
    edges.windows(2).map(|e| (e[1] - e[0]) as u64).collect()
}

fn cell_of_vertices<T: Scalar>(w: &StepGraphon<T>, n: usize) -> Vec<usize> {
    cell_sizes(w, n)
        .iter()
        .enumerate()
        .flat_map(|(c, &size)| std::iter::repeat_n(c, size as usize))
        .collect()
}

/// `g'_n . g_L` for a base family and layer graph.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFamily<T> {
    pub base: BaseFamily<T>,
    pub layer_graph: SimpleGraph,
}

impl<T: Scalar> GridFamily<T> {
    pub fn new(base: BaseFamily<T>, layer_graph: SimpleGraph) -> Result<Self> {
        base.validate()?;
        if layer_graph.vertex_count() == 0 || layer_graph.vertex_count() > crate::subset::MAX_LAYERS
        {
            return Err(Error::domain(
                "layer graph must have between 1 and 6 vertices",
            ));
        }
        Ok(GridFamily { base, layer_graph })
    }

    pub fn layers(&self) -> usize {
        self.layer_graph.vertex_count()
    }

    pub fn grid(&self, n: usize) -> Result<GridGraph> {
        Ok(lexicographic_product(
            &self.base.graph(n)?,
            &self.layer_graph,
        ))
    }
}

/// How a finite-`n` moment is evaluated.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Partition classes when the family allows it, brute force otherwise.
    Auto,
    BruteForce,
    Classes,
}

fn scale_down<T: Scalar>(sum: T, n: usize, p: usize) -> Result<T> {
    if sum.is_zero() {
        return Ok(sum);
    }
    let d: T = half_power(n as u64, p).ok_or_else(|| {
        Error::Irrational(format!(
            "n^({p}/2) is irrational for n = {n}; use an even order, a square n, or float mode"
        ))
    })?;
    Ok(sum / d)
}

fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    Ok(())
}

fn pow_u128(n: usize, p: usize) -> u128 {
    (n as u128).saturating_pow(p as u32)
}

/// `sum_{i in [n]^p} tau(theta(i))`, literally.
fn brute_sum<T: Scalar>(g: &GridGraph, laws: &VertexLaws<T>, spec: &WordSpec) -> Result<T> {
    let n = g.n();
    let p = spec.len();
    let mut acc = T::Sum::default();
    let mut i = vec![0usize; p];
    loop {
        let theta = expand_word(&i, spec)?;
        acc.add(epsilon_moment(g, &theta.flat(g.layers()), laws)?);
        let mut idx = p;
        loop {
            if idx == 0 {
                return Ok(acc.total());
            }
            idx -= 1;
            i[idx] += 1;
            if i[idx] < n {
                break;
            }
            i[idx] = 0;
        }
    }
}

fn centered_laws<T: Scalar>(law: &ScalarLaw<T>) -> Result<VertexLaws<T>> {
    if !law.is_centered() {
        return Err(Error::domain("summand law must be centered"));
    }
    Ok(VertexLaws::shared(law.clone()))
}

/// `tau((S_n^{(J_1)})^{alpha_1} ... )` on an explicit grid, summing over all
/// `n^p` index tuples. Any centered law is accepted.
pub fn sn_product_moment_brute<T: Scalar>(
    g: &GridGraph,
    law: &ScalarLaw<T>,
    spec: &WordSpec,
    budget: u128,
) -> Result<T> {
    check_grid(spec, g)?;
    let laws = centered_laws(law)?;
    check_budget(pow_u128(g.n(), spec.len()), budget)?;
    scale_down(brute_sum(g, &laws, spec)?, g.n(), spec.len())
}

/// Moment as a function of `n` for a blow-up family: a sum over partition
/// classes `(sigma, cell types)` of falling-factorial counts times a fixed
/// trace.
#[derive(Clone, Debug)]
pub struct ClassTable<T> {
    w: StepGraphon<T>,
    p: usize,
    /// blocks per cell -> summed trace
    entries: BTreeMap<Vec<usize>, T>,
}

impl<T: Scalar> ClassTable<T> {
    /// Number of distinct count profiles.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Unscaled sum `sum_i tau(...)` at `n`.
    pub fn raw_sum(&self, n: usize) -> T {
        let sizes = cell_sizes(&self.w, n);
        let mut acc = T::Sum::default();
        for (profile, value) in &self.entries {
            let mut count = BigInt::one();
            for (&size, &m) in sizes.iter().zip(profile) {
                count *= falling_factorial(size, m);
                if count.is_zero() {
                    break;
                }
            }
            if !count.is_zero() {
                acc.add(T::from_bigint(&count) * value.clone());
            }
        }
        acc.total()
    }

    /// `n^{-p/2}` times [`Self::raw_sum`].
    pub fn eval(&self, n: usize) -> Result<T> {
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        scale_down(self.raw_sum(n), n, self.p)
    }
}

/// Iterates over `sigma in P_{>=2}(p)` and cell types of its blocks, calling
/// `visit(sigma-tuple, representative grid, profile)`.
fn for_each_class<T: Scalar>(
    w: &StepGraphon<T>,
    layer_graph: &SimpleGraph,
    p: usize,
    visit: &mut dyn FnMut(&[usize], &GridGraph, Vec<usize>) -> Result<()>,
) -> Result<()> {
    let cells = w.cell_count();
    for sigma in Partitions::new(p, PartitionFilter::MinBlock2)? {
        let blocks = sigma.num_blocks();
        let i = sigma.labels();
        let mut types = vec![0usize; blocks];
        loop {
            let mut rep = SimpleGraph::edgeless(blocks);
            for a in 0..blocks {
                for b in a + 1..blocks {
                    if w.value(types[a], types[b]).is_one() {
                        rep.add_edge(a, b)?;
                    }
                }
            }
            let grid = lexicographic_product(&rep, layer_graph);
            let mut profile = vec![0usize; cells];
            for &t in &types {
                profile[t] += 1;
            }
            visit(&i, &grid, profile)?;
            let mut idx = blocks;
            loop {
                if idx == 0 {
                    break;
                }
                idx -= 1;
                types[idx] += 1;
                if types[idx] < cells {
                    break;
                }
                types[idx] = 0;
            }
            if types.iter().all(|&t| t == 0) {
                break;
            }
        }
    }
    Ok(())
}

/// Class table of `tau((S_n^{(J_1)})^{alpha_1} ...)` for an exchangeable
/// family.
pub fn product_class_table<T: Scalar>(
    family: &GridFamily<T>,
    law: &ScalarLaw<T>,
    spec: &WordSpec,
) -> Result<ClassTable<T>> {
    full_class_table(family, law, &[(spec.clone(), T::one())], spec.len())
}

fn full_class_table<T: Scalar>(
    family: &GridFamily<T>,
    law: &ScalarLaw<T>,
    words: &[(WordSpec, T)],
    p: usize,
) -> Result<ClassTable<T>> {
    let w = family.base.as_step().ok_or_else(|| {
        Error::domain("partition classes need a complete, edgeless or blow-up base")
    })?;
    let laws = centered_laws(law)?;
    for (spec, _) in words {
        spec.check_layers(family.layers())?;
    }
    let mut entries: BTreeMap<Vec<usize>, T> = BTreeMap::new();
    for_each_class(&w, &family.layer_graph, p, &mut |i, grid, profile| {
        let mut acc = T::Sum::default();
        for (spec, weight) in words {
            let theta = expand_word(i, spec)?;
            let tau = epsilon_moment(grid, &theta.flat(grid.layers()), &laws)?;
            if !tau.is_zero() {
                acc.add(weight.clone() * tau);
            }
        }
        let value = acc.total();
        if !value.is_zero() {
            let slot = entries.entry(profile).or_insert_with(T::zero);
            *slot += value;
        }
        Ok(())
    })?;
    entries.retain(|_, v| !v.is_zero());
    Ok(ClassTable { w, p, entries })
}

/// `tau((S_n^{(J_1)})^{alpha_1} ... (S_n^{(J_p)})^{alpha_p})` with
/// `S_n^{(J)} = n^{-1/2} sum_k prod_{l in J} a_k^{(l)}` for a centered law.
pub fn sn_product_moment<T: Scalar>(
    family: &GridFamily<T>,
    law: &ScalarLaw<T>,
    spec: &WordSpec,
    n: usize,
    strategy: Strategy,
    budget: u128,
) -> Result<T> {
    let classes = match strategy {
        Strategy::Auto => family.base.is_exchangeable(),
        Strategy::Classes => true,
        Strategy::BruteForce => false,
    };
    if classes {
        product_class_table(family, law, spec)?.eval(n)
    } else {
        sn_product_moment_brute(&family.grid(n)?, law, spec, budget)
    }
}

/// The words `J in (P*(L))^p` with weights `prod_r lambda^{|J_r^c|}` that can
/// contribute: every layer is used by no position or by at least two.
fn full_words<T: Scalar>(
    layers: usize,
    lambda: &T,
    alpha: &[Exponent],
) -> Result<Vec<(WordSpec, T)>> {
    let subsets = Subset::nonempty(layers);
    let p = alpha.len();
    let mut out = Vec::new();
    let mut idx = vec![0usize; p];
    loop {
        let js: Vec<Subset> = idx.iter().map(|&a| subsets[a]).collect();
        let usable = (0..layers).all(|l| js.iter().filter(|j| j.contains(l)).count() != 1);
        if usable {
            let weight = js.iter().fold(T::one(), |acc, j| {
                acc * lambda.powi((layers - j.len()) as u32)
            });
            if !weight.is_zero() {
                out.push((WordSpec::new(js, alpha.to_vec())?, weight));
            }
        }
        let mut r = p;
        loop {
            if r == 0 {
                return Ok(out);
            }
            r -= 1;
            idx[r] += 1;
            if idx[r] < subsets.len() {
                break;
            }
            idx[r] = 0;
        }
    }
}

/// Variance of one summand `prod_l a^{(l)} - lambda^L`.
fn summand_variance<T: Scalar>(law: &ScalarLaw<T>, layers: usize) -> T {
    let lam2 = law.mean() * law.mean();
    law.moment(2).expect("two moments").powi(layers as u32) - lam2.powi(layers as u32)
}

/// `tau(S_n^{alpha_1} ... S_n^{alpha_p})` for
/// `S_n = n^{-1/2} sum_k (prod_l a_k^{(l)} - lambda^L)`.
///
/// Writing `a = lambda + y` expands each summand as
/// `sum_J lambda^{|J^c|} prod_{l in J} y^{(l)}`; the centered `y` keep the
/// whole computation rational without taking square roots of the variance.
pub fn sn_full_moment<T: Scalar>(
    family: &GridFamily<T>,
    law: &ScalarLaw<T>,
    alpha: &[Exponent],
    n: usize,
    norm: Normalization,
    strategy: Strategy,
    budget: u128,
) -> Result<T> {
    let table = FullMoment::new(family, law, alpha, strategy, budget)?;
    table.eval(n, norm)
}

/// A full-moment computation prepared once and evaluated at several `n`.
#[derive(Clone, Debug)]
pub struct FullMoment<T> {
    family: GridFamily<T>,
    centered: ScalarLaw<T>,
    words: Vec<(WordSpec, T)>,
    p: usize,
    variance: T,
    table: Option<ClassTable<T>>,
    budget: u128,
}

impl<T: Scalar> FullMoment<T> {
    pub fn new(
        family: &GridFamily<T>,
        law: &ScalarLaw<T>,
        alpha: &[Exponent],
        strategy: Strategy,
        budget: u128,
    ) -> Result<Self> {
        let p = alpha.len();
        if p == 0 {
            return Err(Error::domain("moment order must be positive"));
        }
        let layers = family.layers();
        if law.order() < p.max(2) {
            return Err(Error::domain(format!(
                "the summand law needs moments up to order {}",
                p.max(2)
            )));
        }
        let centered = law.centered();
        let words = full_words(layers, &law.mean(), alpha)?;
        let classes = match strategy {
            Strategy::Auto => family.base.is_exchangeable(),
            Strategy::Classes => true,
            Strategy::BruteForce => false,
        };
        let table = if classes {
            Some(full_class_table(family, &centered, &words, p)?)
        } else {
            None
        };
        Ok(FullMoment {
            family: family.clone(),
            centered,
            words,
            p,
            variance: summand_variance(law, layers),
            table,
            budget,
        })
    }

    pub fn eval(&self, n: usize, norm: Normalization) -> Result<T> {
        if n == 0 {
            return Err(Error::domain("n must be positive"));
        }
        let raw = match &self.table {
            Some(t) => t.eval(n)?,
            None => {
                let g = self.family.grid(n)?;
                let needed = pow_u128(n, self.p).saturating_mul(self.words.len().max(1) as u128);
                check_budget(needed, self.budget)?;
                let laws = VertexLaws::shared(self.centered.clone());
                let mut acc = T::Sum::default();
                for (spec, weight) in &self.words {
                    let s = brute_sum(&g, &laws, spec)?;
                    if !s.is_zero() {
                        acc.add(weight.clone() * s);
                    }
                }
                scale_down(acc.total(), n, self.p)?
            }
        };
        match norm {
            Normalization::Raw => Ok(raw),
            Normalization::UnitVariance => {
                if raw.is_zero() {
                    return Ok(raw);
                }
                if self.variance <= T::zero() {
                    return Err(Error::domain("summands have zero variance"));
                }
                let v: Option<T> = if self.p.is_multiple_of(2) {
                    Some(self.variance.powi((self.p / 2) as u32))
                } else {
                    self.variance
                        .exact_sqrt()
                        .map(|r| r * self.variance.powi((self.p / 2) as u32))
                };
                let v = v.ok_or_else(|| {
                    Error::Irrational(
                        "odd moment of the normalized sum has an irrational scale".into(),
                    )
                })?;
                Ok(raw / v)
            }
        }
    }
}

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow<T> {
    pub p: usize,
    pub n: usize,
    pub finite: T,
    pub limit: T,
    pub abs_diff: T,
}

fn abs<T: Scalar>(x: T) -> T {
    if x < T::zero() {
        -x
    } else {
        x
    }
}

/// Unit-variance moments `tau(S_n^p)` against their limits, for even
/// `p <= p_max` and each `n`.
pub fn convergence_table<T: Scalar>(
    family: &GridFamily<T>,
    law: &ScalarLaw<T>,
    p_max: usize,
    ns: &[usize],
    strategy: Strategy,
    budget: u128,
) -> Result<Vec<ConvergenceRow<T>>> {
    let w = family
        .base
        .limit()
        .ok_or_else(|| Error::domain("an explicit base graph has no known limit graphon"))?;
    let model = LimitModel::new(family.layer_graph.clone(), w, law.mean(), law.variance())?;
    let mut rows = Vec::new();
    for p in (2..=p_max).step_by(2) {
        let alpha = vec![Exponent::One; p];
        let limit = s_limit_moment(&model, &alpha, Normalization::UnitVariance)?;
        let prepared = FullMoment::new(family, law, &alpha, strategy, budget)?;
        for &n in ns {
            let finite = prepared.eval(n, Normalization::UnitVariance)?;
            rows.push(ConvergenceRow {
                p,
                n,
                abs_diff: abs(finite.clone() - limit.clone()),
                finite,
                limit: limit.clone(),
            });
        }
    }
    Ok(rows)
}

/// Brute-force split of `sum_i tau(...)` by `ker(i)`.
#[derive(Clone, Debug)]
pub struct KernelSplit<T> {
    /// `n^{-p/2}` times the sum over each kernel class.
    pub classes: Vec<(SetPartition, T)>,
    /// Largest `|tau|` over all enumerated tuples.
    pub max_trace: T,
}

/// Groups the brute-force moment by the kernel of the index tuple.
pub fn kernel_split<T: Scalar>(
    g: &GridGraph,
    law: &ScalarLaw<T>,
    spec: &WordSpec,
    budget: u128,
) -> Result<KernelSplit<T>> {
    check_grid(spec, g)?;
    let laws = centered_laws(law)?;
    let p = spec.len();
    let n = g.n();
    check_budget(pow_u128(n, p), budget)?;
    let mut sums: BTreeMap<SetPartition, T::Sum> = BTreeMap::new();
    let mut max_trace = T::zero();
    let mut i = vec![0usize; p];
    loop {
        let theta = expand_word(&i, spec)?;
        let tau = epsilon_moment(g, &theta.flat(g.layers()), &laws)?;
        if abs(tau.clone()) > max_trace {
            max_trace = abs(tau.clone());
        }
        sums.entry(kernel(&i)?).or_default().add(tau);
        let mut idx = p;
        loop {
            if idx == 0 {
                let classes = sums
                    .into_iter()
                    .map(|(k, s)| scale_down(s.total(), n, p).map(|v| (k, v)))
                    .collect::<Result<_>>()?;
                return Ok(KernelSplit { classes, max_trace });
            }
            idx -= 1;
            i[idx] += 1;
            if i[idx] < n {
                break;
            }
            i[idx] = 0;
        }
    }
}
