//! Cross-check suites comparing independent routes to the same quantity, and
//! seeded generators of small random instances.

use std::fmt;

use num::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{Exponent, PairPartition, WordSpec};
use crate::cumulants::ScalarLaw;
use crate::decorated::{
    compressed_grid, decorated_intersection_graph, hom_variants, injective_density_product_formula,
    lex_limit_decoration, HomMode,
};
use crate::error::Result;
use crate::finite_n::rho_n;
use crate::graphon::StepGraphon;
use crate::graphs::{GridGraph, GridVertex};
use crate::limit_laws::{
    lex_limit_moment, master_limit_moment, s_limit_moment, s_limit_moment_by_blocks,
    star_family_moment, tensor2_reference_moment, LimitModel, Normalization, NormalizationParams,
};
use crate::scalar::{Rational, Scalar};
use crate::subset::Subset;

/// Default seed for randomized suites.
pub const DEFAULT_SEED: u64 = 20_240_601;

/// Seeded generator used by every randomized suite.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Grid graph on `n x layers` vertices, each pair an edge with probability
/// `density`.
pub fn random_grid(rng: &mut impl Rng, n: usize, layers: usize, density: f64) -> Result<GridGraph> {
    let mut g = GridGraph::edgeless(n, layers);
    let total = n * layers;
    for a in 0..total {
        for b in a + 1..total {
            if rng.gen_bool(density) {
                g.add_edge(
                    GridVertex::new(a / layers, a % layers),
                    GridVertex::new(b / layers, b % layers),
                )?;
            }
        }
    }
    Ok(g)
}

/// Uniform pair partition of `0..p` (`p` even).
pub fn random_pair_partition(rng: &mut impl Rng, p: usize) -> Result<PairPartition> {
    let mut pos: Vec<usize> = (0..p).collect();
    pos.shuffle(rng);
    let pairs: Vec<(usize, usize)> = pos
        .chunks(2)
        .map(|c| (c[0].min(c[1]), c[0].max(c[1])))
        .collect();
    PairPartition::from_pairs(p, &pairs)
}

pub fn random_subset(rng: &mut impl Rng, layers: usize) -> Subset {
    let all = Subset::nonempty(layers);
    all[rng.gen_range(0..all.len())]
}

pub fn random_exponents(rng: &mut impl Rng, p: usize) -> Vec<Exponent> {
    (0..p)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Exponent::One
            } else {
                Exponent::Star
            }
        })
        .collect()
}

/// A word in `P_2^J` position for `pi`: both letters of a block share a
/// random subset.
pub fn random_word_for(rng: &mut impl Rng, pi: &PairPartition, layers: usize) -> Result<WordSpec> {
    let mut js = vec![Subset::EMPTY; pi.size()];
    for (r, s) in pi.pairs() {
        let j = random_subset(rng, layers);
        js[r] = j;
        js[s] = j;
    }
    WordSpec::new(js, random_exponents(rng, pi.size()))
}

/// Calls `visit` on every word spec of length `p` over the nonempty subsets
/// of `[layers]`, without materialising the list.
pub fn for_each_word_spec(
    layers: usize,
    p: usize,
    mut visit: impl FnMut(WordSpec) -> Result<()>,
) -> Result<()> {
    let subsets = Subset::nonempty(layers);
    let mut idx = vec![0usize; p];
    loop {
        let js: Vec<Subset> = idx.iter().map(|&a| subsets[a]).collect();
        for alpha in Exponent::all_words(p) {
            visit(WordSpec::new(js.clone(), alpha)?)?;
        }
        let mut r = p;
        loop {
            if r == 0 {
                return Ok(());
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

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub skipped: bool,
    /// Descriptions of the first few disagreements.
    pub failures: Vec<String>,
    pub failure_count: usize,
}

const KEPT_FAILURES: usize = 5;

impl CheckReport {
    fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            cases: 0,
            skipped: false,
            failures: Vec::new(),
            failure_count: 0,
        }
    }

    fn skipped(name: impl Into<String>, why: impl Into<String>) -> Self {
        let mut r = Self::new(name);
        r.skipped = true;
        r.failures.push(why.into());
        r
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.skipped || self.failure_count == 0
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.skipped {
            return write!(f, "SKIP {} ({})", self.name, self.failures.join("; "));
        }
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} [{} cases", self.name, self.cases)?;
        if self.failure_count > 0 {
            write!(f, ", {} failed", self.failure_count)?;
        }
        write!(f, "]")?;
        for msg in &self.failures {
            write!(f, "\n    {msg}")?;
        }
        Ok(())
    }
}

/// Injective decorated density from its definition against the block
/// product formula, on seeded random instances with `p <= 6`, `L <= 3`,
/// `n <= 6`.
pub fn check_injective_density(seed: u64, instances: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("injective density product formula");
    let mut rng = rng(seed);
    for _ in 0..instances {
        let p = 2 * rng.gen_range(1..=3);
        let layers = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=6);
        let density = rng.gen_range(0.3..0.95);
        let g = random_grid(&mut rng, n, layers, density)?;
        let pi = random_pair_partition(&mut rng, p)?;
        let spec = random_word_for(&mut rng, &pi, layers)?;
        let f = decorated_intersection_graph::<Rational>(&pi, &spec, layers)?;
        let from_def = hom_variants(&f, &compressed_grid(&g)?, HomMode::Injective)?;
        let formula: Rational = injective_density_product_formula(&pi, &spec, &g)?;
        report.record(from_def == formula, || {
            format!("pi={pi} word={spec} n={n}: definition {from_def}, formula {formula}")
        });
    }
    Ok(report)
}

/// `rho_n = n/(n - p/2) rho_inj` for the normalized semicircle law, on seeded
/// random instances with `n > p/2`.
pub fn check_rho_n_identity(seed: u64, instances: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("finite-n pair density vs injective density");
    let mut rng = rng(seed);
    let law = ScalarLaw::<Rational>::semicircle(6);
    for _ in 0..instances {
        let p = 2 * rng.gen_range(1..=3);
        let layers = rng.gen_range(1..=3);
        let n = rng.gen_range(p / 2 + 1..=5);
        let density = rng.gen_range(0.3..0.95);
        let g = random_grid(&mut rng, n, layers, density)?;
        let pi = random_pair_partition(&mut rng, p)?;
        let spec = random_word_for(&mut rng, &pi, layers)?;
        let rho = rho_n(&pi, &spec, &g, &law)?;
        let f = decorated_intersection_graph::<Rational>(&pi, &spec, layers)?;
        let inj = hom_variants(&f, &compressed_grid(&g)?, HomMode::Injective)?;
        let scaled = Rational::from_ratio(n as i64, (n - p / 2) as i64) * inj;
        report.record(rho == scaled, || {
            format!("pi={pi} word={spec} n={n}: rho_n {rho}, scaled injective density {scaled}")
        });
    }
    Ok(report)
}

/// The decorated master formula in the lexicographic limit decoration against
/// the direct joint-law formula, for every word with `p <= p_max`.
pub fn check_master_vs_lex(model: &LimitModel<Rational>, p_max: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("decorated master formula vs joint-law formula");
    let gamma = lex_limit_decoration(model.layer_graph(), model.graphon())?;
    for p in 1..=p_max {
        for_each_word_spec(model.layers(), p, |spec| {
            let master = master_limit_moment(&gamma, &spec)?;
            let lex = lex_limit_moment(model.layer_graph(), model.graphon(), &spec)?;
            report.record(master == lex, || {
                format!("word {spec}: master {master}, joint law {lex}")
            });
            Ok(())
        })?;
    }
    Ok(report)
}

/// Whether the model is the two-layer tensor case: complete `g_L` on two
/// layers and the zero graphon.
pub fn is_tensor2(model: &LimitModel<Rational>) -> bool {
    model.layers() == 2
        && model.layer_graph().has_edge(0, 1)
        && model.graphon().is_constant(&Rational::zero())
}

/// Moments of `S` through the word expansion, the block expansion and, for
/// the two-layer tensor case, the semicircle mixture.
pub fn check_s_routes(model: &LimitModel<Rational>, p_max: usize) -> Result<CheckReport> {
    let tensor = is_tensor2(model);
    let name = if tensor {
        "limit moments of S: three routes"
    } else {
        "limit moments of S: word and block routes"
    };
    let mut report = CheckReport::new(name);
    let params = NormalizationParams::new(model.lambda(), model.sigma2())?;
    for p in 1..=p_max {
        let words: Vec<Vec<Exponent>> = if p <= 4 {
            Exponent::all_words(p).collect()
        } else {
            vec![vec![Exponent::One; p]]
        };
        for alpha in words {
            let by_words = s_limit_moment(model, &alpha, Normalization::Raw)?;
            let by_blocks = s_limit_moment_by_blocks(model, &alpha, Normalization::Raw)?;
            let word: String = alpha.iter().map(|e| e.to_string()).collect();
            report.record(by_words == by_blocks, || {
                format!("alpha={word}: words {by_words}, blocks {by_blocks}")
            });
            if tensor {
                let unit = s_limit_moment(model, &alpha, Normalization::UnitVariance)?;
                let mixture = tensor2_reference_moment(&params, &alpha)?;
                report.record(unit == mixture, || {
                    format!("alpha={word}: unit-variance {unit}, semicircle mixture {mixture}")
                });
            }
        }
    }
    Ok(report)
}

/// Joint law of the `s_J` for the zero graphon against the star moments of a
/// semicircle/circular family independent over `h_L`, on every word with
/// `p <= p_max`.
pub fn check_star_chain(
    layer_graph: &crate::graphs::SimpleGraph,
    p_max: usize,
) -> Result<CheckReport> {
    let mut report = CheckReport::new("zero-graphon joint law vs semicircle/circular family");
    let zero = StepGraphon::constant(Rational::zero())?;
    for p in 1..=p_max {
        for_each_word_spec(layer_graph.vertex_count(), p, |spec| {
            let lex = lex_limit_moment(layer_graph, &zero, &spec)?;
            let star: Rational = star_family_moment(layer_graph, &spec)?;
            report.record(lex == star, || {
                format!("word {spec}: joint law {lex}, star family {star}")
            });
            Ok(())
        })?;
    }
    Ok(report)
}

/// Options for [`verify_model`].
#[derive(Clone, Copy, Debug)]
pub struct VerifyOptions {
    pub seed: u64,
    pub random_instances: usize,
    /// Largest word length in the exhaustive word suites.
    pub word_p_max: usize,
    /// Largest order in the moment-route suite.
    pub moment_p_max: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            random_instances: 50,
            word_p_max: 4,
            moment_p_max: 8,
        }
    }
}

/// Every suite, run against one model.
pub fn verify_model(model: &LimitModel<Rational>, opts: VerifyOptions) -> Result<Vec<CheckReport>> {
    let mut out = vec![
        check_injective_density(opts.seed, opts.random_instances)?,
        check_rho_n_identity(opts.seed.wrapping_add(1), opts.random_instances)?,
        check_master_vs_lex(model, opts.word_p_max)?,
        check_s_routes(model, opts.moment_p_max)?,
    ];
    if model.layers() <= 3 {
        out.push(check_star_chain(model.layer_graph(), opts.word_p_max)?);
    } else {
        out.push(CheckReport::skipped(
            "zero-graphon joint law vs semicircle/circular family",
            "more than three layers",
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::SimpleGraph;

    fn tensor_model() -> LimitModel<Rational> {
        LimitModel::new(
            SimpleGraph::complete(2),
            StepGraphon::constant(Rational::zero()).unwrap(),
            Rational::from_i64(1),
            Rational::from_i64(1),
        )
        .unwrap()
    }

    #[test]
    fn random_pair_partitions_are_valid() {
        let mut r = rng(7);
        for _ in 0..20 {
            let pi = random_pair_partition(&mut r, 6).unwrap();
            assert_eq!(pi.num_pairs(), 3);
        }
    }

    #[test]
    fn word_spec_count() {
        let mut count = 0;
        for_each_word_spec(2, 2, |_| {
            count += 1;
            Ok(())
        })
        .unwrap();
        assert_eq!(count, 9 * 4);
    }

    #[test]
    fn suites_pass_on_tensor_model() {
        let opts = VerifyOptions {
            random_instances: 10,
            word_p_max: 3,
            moment_p_max: 4,
            ..VerifyOptions::default()
        };
        for report in verify_model(&tensor_model(), opts).unwrap() {
            assert!(report.passed(), "{report}");
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn report_display() {
        let mut r = CheckReport::new("demo");
        r.record(true, String::new);
        r.record(false, || "bad".into());
        assert!(!r.passed());
        assert_eq!(r.to_string(), "FAIL demo [2 cases, 1 failed]\n    bad");
    }
}
