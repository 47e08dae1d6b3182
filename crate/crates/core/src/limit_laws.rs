//! Limiting *-moments of the variables `s_J` and of the normalized sum of
//! products `S`.

use std::fmt;

use crate::combinatorics::{pair_partitions, pairings_within, Exponent, PairPartition, WordSpec};
use crate::cumulants::{star_joint_moment, StarVariable};
use crate::decorated::{
    decorated_intersection_graph, lex_limit_decoration, rho_decorated, DecoratedStepGraphon,
};
use crate::error::{Error, Result};
use crate::graphon::{rho_graphon, StepGraphon};
use crate::graphs::{h_graph, SimpleGraph};
use crate::scalar::{Accumulator, Scalar};
use crate::subset::{Subset, MAX_LAYERS};

/// Layer graph `g_L`, limit graphon `w` of `g'_n`, and mean and variance of the
/// summands.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitModel<T> {
    layer_graph: SimpleGraph,
    w: StepGraphon<T>,
    lambda: T,
    sigma2: T,
}

impl<T: Scalar> LimitModel<T> {
    pub fn new(layer_graph: SimpleGraph, w: StepGraphon<T>, lambda: T, sigma2: T) -> Result<Self> {
        let layers = layer_graph.vertex_count();
        if layers == 0 || layers > MAX_LAYERS {
            return Err(Error::domain(format!(
                "layer graph must have between 1 and {MAX_LAYERS} vertices"
            )));
        }
        if sigma2 <= T::zero() {
            return Err(Error::domain("variance must be positive"));
        }
        Ok(LimitModel {
            layer_graph,
            w,
            lambda,
            sigma2,
        })
    }

    pub fn layers(&self) -> usize {
        self.layer_graph.vertex_count()
    }

    pub fn layer_graph(&self) -> &SimpleGraph {
        &self.layer_graph
    }

    pub fn graphon(&self) -> &StepGraphon<T> {
        &self.w
    }

    pub fn lambda(&self) -> &T {
        &self.lambda
    }

    pub fn sigma2(&self) -> &T {
        &self.sigma2
    }

    /// `c_J^2 = sigma^{2|J|} lambda^{2|J^c|}`.
    pub fn weight_sq(&self, j: Subset) -> T {
        let rest = self.layers() - j.len();
        self.sigma2.powi(j.len() as u32) * self.lambda.powi(2 * rest as u32)
    }

    /// Variance of `S`: `sum_J c_J^2 = (sigma^2 + lambda^2)^L - lambda^{2L}`.
    pub fn variance(&self) -> T {
        let l = self.layers() as u32;
        let lam2 = self.lambda.clone() * self.lambda.clone();
        (self.sigma2.clone() + lam2.clone()).powi(l) - lam2.powi(l)
    }
}

/// The two constants of the two-layer tensor law.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizationParams<T> {
    pub delta2: T,
    pub alpha: T,
}

impl<T: Scalar> NormalizationParams<T> {
    /// `delta^2 = sigma^2 (sigma^2 + 2 lambda^2)`, `alpha = 2 lambda^2 / (sigma^2 + 2 lambda^2)`.
    pub fn new(lambda: &T, sigma2: &T) -> Result<Self> {
        if *sigma2 <= T::zero() {
            return Err(Error::domain("variance must be positive"));
        }
        let two_lam2 = T::from_i64(2) * lambda.clone() * lambda.clone();
        let denom = sigma2.clone() + two_lam2.clone();
        Ok(NormalizationParams {
            delta2: sigma2.clone() * denom.clone(),
            alpha: two_lam2 / denom,
        })
    }
}

/// Whether a moment of `S` is reported as is or for `S / sqrt(Var S)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    UnitVariance,
}

/// Type of the limit variable `s_J`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SJKind {
    Semicircle,
    Circular,
}

impl SJKind {
    pub fn star_variable<T: Scalar>(self) -> StarVariable<T> {
        match self {
            SJKind::Semicircle => StarVariable::Semicircle,
            SJKind::Circular => StarVariable::Circular,
        }
    }
}

impl fmt::Display for SJKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SJKind::Semicircle => "semicircle",
            SJKind::Circular => "circular",
        })
    }
}

/// `s_J` is a semicircle iff `g_L` restricted to `J` is complete.
pub fn classify_sj(layer_graph: &SimpleGraph, j: Subset) -> Result<SJKind> {
    if j.is_empty() || !j.is_within(layer_graph.vertex_count()) {
        return Err(Error::domain(format!(
            "{j} is not a nonempty subset of [{}]",
            layer_graph.vertex_count()
        )));
    }
    Ok(if layer_graph.is_complete_on_subset(j) {
        SJKind::Semicircle
    } else {
        SJKind::Circular
    })
}

/// `sum_{pi in P_2^J(p)} rho(F^{J,alpha}_{f_pi}, w)`.
pub fn master_limit_moment<T: Scalar>(w: &DecoratedStepGraphon<T>, spec: &WordSpec) -> Result<T> {
    spec.check_layers(w.layers())?;
    let mut acc = T::Sum::default();
    for pi in pairings_within(spec.subsets()) {
        let f = decorated_intersection_graph(&pi, spec, w.layers())?;
        acc.add(rho_decorated(&f, w)?);
    }
    Ok(acc.total())
}

/// Whether `pi in P_2^J(p)` survives the two layer-graph conditions: crossing
/// blocks have all cross-layer pairs adjacent, and blocks with equal exponents
/// carry a clique of `g_L`.
fn lex_admissible(
    layer_graph: &SimpleGraph,
    pi: &PairPartition,
    spec: &WordSpec,
    crossings: &[(usize, usize)],
) -> bool {
    let pairs: Vec<(usize, usize)> = pi.pairs().collect();
    let same_exp_ok = pairs.iter().all(|&(r, s)| {
        spec.exponent(r) != spec.exponent(s) || layer_graph.is_complete_on_subset(spec.subset(r))
    });
    same_exp_ok
        && crossings.iter().all(|&(u, v)| {
            let (ju, jv) = (spec.subset(pairs[u].0), spec.subset(pairs[v].0));
            ju.layers().all(|l1| {
                jv.layers()
                    .all(|l2| l1 == l2 || layer_graph.has_edge(l1, l2))
            })
        })
}

/// Sum over admissible `pi in P_2^J(p)` of the integral of `w` over the
/// crossings whose subsets intersect.
pub fn lex_limit_moment<T: Scalar>(
    layer_graph: &SimpleGraph,
    w: &StepGraphon<T>,
    spec: &WordSpec,
) -> Result<T> {
    spec.check_layers(layer_graph.vertex_count())?;
    let mut acc = T::Sum::default();
    for pi in pairings_within(spec.subsets()) {
        let f = pi.intersection_graph();
        let crossings = f.edges();
        if !lex_admissible(layer_graph, &pi, spec, &crossings) {
            continue;
        }
        let pairs: Vec<(usize, usize)> = pi.pairs().collect();
        let weighted =
            f.filter_edges(|u, v| spec.subset(pairs[u].0).intersects(spec.subset(pairs[v].0)));
        acc.add(rho_graphon(&weighted, w));
    }
    Ok(acc.total())
}

/// Words `J in (P*(L))^p` in which every subset occurs an even number of
/// times, with their weight `prod_J (c_J^2)^{mult_J / 2}`.
fn even_words<T: Scalar>(
    model: &LimitModel<T>,
    p: usize,
    mut visit: impl FnMut(&[Subset], T) -> Result<()>,
) -> Result<()> {
    let subsets = Subset::nonempty(model.layers());
    let weights: Vec<T> = subsets.iter().map(|&j| model.weight_sq(j)).collect();
    let mut word: Vec<usize> = Vec::with_capacity(p);
    let mut counts = vec![0usize; subsets.len()];
    fn rec<T: Scalar>(
        p: usize,
        subsets: &[Subset],
        weights: &[T],
        word: &mut Vec<usize>,
        counts: &mut [usize],
        visit: &mut dyn FnMut(&[Subset], T) -> Result<()>,
    ) -> Result<()> {
        let odd = counts.iter().filter(|&&c| c % 2 == 1).count();
        if odd > p - word.len() {
            return Ok(());
        }
        if word.len() == p {
            let mut weight = T::one();
            for (c, w) in counts.iter().zip(weights) {
                if *c > 0 {
                    weight *= w.powi((c / 2) as u32);
                }
            }
            if weight.is_zero() {
                return Ok(());
            }
            let js: Vec<Subset> = word.iter().map(|&a| subsets[a]).collect();
            return visit(&js, weight);
        }
        for a in 0..subsets.len() {
            if weights[a].is_zero() {
                continue;
            }
            word.push(a);
            counts[a] += 1;
            rec(p, subsets, weights, word, counts, visit)?;
            counts[a] -= 1;
            word.pop();
        }
        Ok(())
    }
    rec(p, &subsets, &weights, &mut word, &mut counts, &mut visit)
}

fn normalize<T: Scalar>(model: &LimitModel<T>, raw: T, p: usize, norm: Normalization) -> T {
    match norm {
        Normalization::Raw => raw,
        Normalization::UnitVariance => raw / model.variance().powi((p / 2) as u32),
    }
}

/// `tau(S^{alpha_1} ... S^{alpha_p})` for `S = sum_J c_J s_J`, expanded over
/// words in the `s_J` and evaluated with [`lex_limit_moment`].
pub fn s_limit_moment<T: Scalar>(
    model: &LimitModel<T>,
    alpha: &[Exponent],
    norm: Normalization,
) -> Result<T> {
    let p = alpha.len();
    if p == 0 {
        return Err(Error::domain("moment order must be positive"));
    }
    if p % 2 == 1 {
        return Ok(T::zero());
    }
    let mut acc = T::Sum::default();
    even_words(model, p, |js, weight| {
        let spec = WordSpec::new(js.to_vec(), alpha.to_vec())?;
        let m = lex_limit_moment(&model.layer_graph, &model.w, &spec)?;
        if !m.is_zero() {
            acc.add(weight * m);
        }
        Ok(())
    })?;
    Ok(normalize(model, acc.total(), p, norm))
}

/// The same moment as [`s_limit_moment`], organised by pair partition first:
/// every block of `pi in P_2(p)` picks a subset, and each labelled partition
/// contributes its decorated density in the decorated limit graphon.
pub fn s_limit_moment_by_blocks<T: Scalar>(
    model: &LimitModel<T>,
    alpha: &[Exponent],
    norm: Normalization,
) -> Result<T> {
    let p = alpha.len();
    if p == 0 {
        return Err(Error::domain("moment order must be positive"));
    }
    if p % 2 == 1 {
        return Ok(T::zero());
    }
    let gamma = lex_limit_decoration(&model.layer_graph, &model.w)?;
    let subsets = Subset::nonempty(model.layers());
    let weights: Vec<T> = subsets.iter().map(|&j| model.weight_sq(j)).collect();
    let mut acc = T::Sum::default();
    for pi in pair_partitions(p)? {
        let pairs: Vec<(usize, usize)> = pi.pairs().collect();
        let mut labels = vec![0usize; pairs.len()];
        loop {
            let weight = labels
                .iter()
                .fold(T::one(), |acc, &a| acc * weights[a].clone());
            if !weight.is_zero() {
                let mut js = vec![Subset::EMPTY; p];
                for (&(r, s), &a) in pairs.iter().zip(&labels) {
                    js[r] = subsets[a];
                    js[s] = subsets[a];
                }
                let spec = WordSpec::new(js, alpha.to_vec())?;
                let f = decorated_intersection_graph(&pi, &spec, model.layers())?;
                let rho = rho_decorated(&f, &gamma)?;
                if !rho.is_zero() {
                    acc.add(weight * rho);
                }
            }
            // odometer over block labels
            let mut idx = labels.len();
            loop {
                if idx == 0 {
                    break;
                }
                idx -= 1;
                labels[idx] += 1;
                if labels[idx] < subsets.len() {
                    break;
                }
                labels[idx] = 0;
            }
            if labels.iter().all(|&a| a == 0) {
                break;
            }
        }
    }
    Ok(normalize(model, acc.total(), p, norm))
}

/// `sum_{pi in P_2(p)} rho(f_pi, w)`; zero for odd `p`.
pub fn clt_l1_moment<T: Scalar>(w: &StepGraphon<T>, p: usize) -> Result<T> {
    if p == 0 {
        return Err(Error::domain("moment order must be positive"));
    }
    if p % 2 == 1 {
        return Ok(T::zero());
    }
    Ok(T::sum_of(
        pair_partitions(p)?
            .iter()
            .map(|pi| rho_graphon(&pi.intersection_graph(), w)),
    ))
}

/// Moment of `sqrt(a/2) (s_1 + s_2) + sqrt(1 - a) s_3` with `s_1, s_2`
/// classically independent semicircles, both free from the semicircle `s_3`.
pub fn tensor2_reference_moment<T: Scalar>(
    params: &NormalizationParams<T>,
    alpha: &[Exponent],
) -> Result<T> {
    let a = &params.alpha;
    if *a < T::zero() || *a > T::one() {
        return Err(Error::domain(format!(
            "mixing parameter {a} outside [0, 1]"
        )));
    }
    let p = alpha.len();
    if p == 0 {
        return Err(Error::domain("moment order must be positive"));
    }
    if p % 2 == 1 {
        return Ok(T::zero());
    }
    let h = SimpleGraph::from_edges(3, &[(0, 1)])?;
    let vars = vec![StarVariable::Semicircle; 3];
    let half = a.clone() / T::from_i64(2);
    let weights = [half.clone(), half, T::one() - a.clone()];
    let mut acc = T::Sum::default();
    let mut letters = vec![0usize; p];
    loop {
        let mut counts = [0usize; 3];
        for &v in &letters {
            counts[v] += 1;
        }
        if counts.iter().all(|c| c % 2 == 0) {
            let weight = (0..3).fold(T::one(), |acc, v| {
                acc * weights[v].powi((counts[v] / 2) as u32)
            });
            if !weight.is_zero() {
                acc.add(weight * star_joint_moment(&h, &vars, &letters, alpha)?);
            }
        }
        let mut idx = p;
        loop {
            if idx == 0 {
                return Ok(acc.total());
            }
            idx -= 1;
            letters[idx] += 1;
            if letters[idx] < 3 {
                break;
            }
            letters[idx] = 0;
        }
    }
}

/// `tau(s_{J_1}^{alpha_1} ... )` for the family `(s_J)` that is independent
/// over `h_L`, each `s_J` typed by [`classify_sj`].
pub fn star_family_moment<T: Scalar>(layer_graph: &SimpleGraph, spec: &WordSpec) -> Result<T> {
    let h = h_graph(layer_graph)?;
    spec.check_layers(layer_graph.vertex_count())?;
    let vars = h
        .subsets
        .iter()
        .map(|&j| classify_sj(layer_graph, j).map(SJKind::star_variable))
        .collect::<Result<Vec<StarVariable<T>>>>()?;
    let letters: Vec<usize> = spec
        .subsets()
        .iter()
        .map(|&j| h.vertex_of(j).expect("nonempty subset"))
        .collect();
    star_joint_moment(&h.graph, &vars, &letters, spec.exponents())
}
