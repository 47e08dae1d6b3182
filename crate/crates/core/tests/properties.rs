//! Property tests for the structural invariants of each module.

use proptest::prelude::*;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use epsclt::checks::{random_exponents, random_grid, random_pair_partition, random_word_for, rng};
use epsclt::combinatorics::{
    blocks_cross, enumerate_partitions, is_gn_noncrossing, kernel, pair_partitions, Exponent,
    PartitionFilter, SetPartition, WordSpec,
};
use epsclt::cumulants::{
    epsilon_moment, free_cumulants_to_moments, moments_to_free_cumulants, star_joint_moment,
    ScalarLaw, StarVariable, VertexLaws,
};
use epsclt::decorated::{
    compressed_grid, decorated_intersection_graph, hom_variants, injective_density_product_formula,
    lex_limit_decoration, rho_decorated, DecoratedGraph, DecoratedStepGraphon, HomMode, MLMatrix,
};
use epsclt::finite_n::{
    kernel_split, rho_n, sn_product_moment, BaseFamily, FullMoment, GridFamily, Strategy,
    DEFAULT_BUDGET,
};
use epsclt::graphon::{rho_graph, rho_graphon, StepGraphon};
use epsclt::graphs::{h_graph, lexicographic_product, SimpleGraph};
use epsclt::limit_laws::{
    clt_l1_moment, lex_limit_moment, master_limit_moment, s_limit_moment, tensor2_reference_moment,
    LimitModel, Normalization, NormalizationParams,
};
use epsclt::subset::Subset;
use epsclt::{Rational, Scalar};

fn q(n: i64, d: i64) -> Rational {
    Rational::from_ratio(n, d)
}

fn int(n: i64) -> Rational {
    Rational::from_i64(n)
}

fn abs(x: Rational) -> Rational {
    if x < int(0) {
        -x
    } else {
        x
    }
}

fn random_graph(rng: &mut ChaCha8Rng, n: usize, density: f64) -> SimpleGraph {
    let mut g = SimpleGraph::edgeless(n);
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(density) {
                g.add_edge(a, b).unwrap();
            }
        }
    }
    g
}

/// Symmetric step graphon with `cells` cells and values in `{0, 1/d, .., 1}`.
fn random_graphon(rng: &mut ChaCha8Rng, cells: usize, d: i64) -> StepGraphon<Rational> {
    let mut cuts: Vec<i64> = (1..cells).map(|_| rng.gen_range(1..d)).collect();
    cuts.sort();
    cuts.dedup();
    let mut breaks = vec![int(0)];
    breaks.extend(cuts.iter().map(|&c| q(c, d)));
    breaks.push(int(1));
    let m = breaks.len() - 1;
    let mut values = vec![vec![int(0); m]; m];
    for a in 0..m {
        for b in a..m {
            let v = q(rng.gen_range(0..=d), d);
            values[a][b] = v.clone();
            values[b][a] = v;
        }
    }
    StepGraphon::new(breaks, values).unwrap()
}

fn random_zero_one_graphon(rng: &mut ChaCha8Rng, cells: usize) -> StepGraphon<Rational> {
    let w = random_graphon(rng, cells, 4);
    let rows = w
        .rows()
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| if *v >= q(1, 2) { int(1) } else { int(0) })
                .collect()
        })
        .collect();
    StepGraphon::new(w.breaks().to_vec(), rows).unwrap()
}

/// Centered law with moments up to `order`: random variance, then arbitrary
/// higher moments built from a random shifted semicircle.
fn random_centered_law(rng: &mut ChaCha8Rng, order: usize) -> ScalarLaw<Rational> {
    let lambda = q(rng.gen_range(-3..=3), rng.gen_range(1..=3));
    let sigma2 = q(rng.gen_range(1..=4), rng.gen_range(1..=2));
    ScalarLaw::shifted_semicircle(lambda, sigma2, order)
        .unwrap()
        .centered()
}

// ---------------------------------------------------------------- combinatorics

#[test]
fn pair_and_noncrossing_pair_counts() {
    let mut double_fact = 1usize;
    let mut catalan = 1usize;
    for p in 1..=6usize {
        double_fact *= 2 * p - 1;
        catalan = catalan * 2 * (2 * p - 1) / (p + 1);
        assert_eq!(
            enumerate_partitions(2 * p, PartitionFilter::Pair)
                .unwrap()
                .len(),
            double_fact
        );
        assert_eq!(
            enumerate_partitions(2 * p, PartitionFilter::NonCrossingPair)
                .unwrap()
                .len(),
            catalan
        );
    }
}

fn no_crossing_blocks_share_label(pi: &SetPartition, i: &[usize]) -> bool {
    let b = pi.blocks();
    (0..b.len())
        .all(|x| (x + 1..b.len()).all(|y| i[b[x][0]] != i[b[y][0]] || !blocks_cross(&b[x], &b[y])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn intersection_graph_empty_iff_noncrossing(seed in any::<u64>(), half in 1usize..=6) {
        let mut r = rng(seed);
        let pi = random_pair_partition(&mut r, 2 * half).unwrap();
        prop_assert_eq!(pi.intersection_graph().edge_count() == 0, pi.as_partition().is_noncrossing());
    }

    #[test]
    fn gn_noncrossing_on_complete_and_edgeless(i in prop::collection::vec(0usize..3, 1..=6)) {
        let complete = SimpleGraph::complete(3);
        let edgeless = SimpleGraph::edgeless(3);
        let ker = kernel(&i).unwrap();
        for pi in enumerate_partitions(i.len(), PartitionFilter::All).unwrap() {
            let below = pi.refines(&ker);
            prop_assert_eq!(
                is_gn_noncrossing(&pi, &i, &complete).unwrap(),
                below && no_crossing_blocks_share_label(&pi, &i)
            );
            prop_assert_eq!(
                is_gn_noncrossing(&pi, &i, &edgeless).unwrap(),
                below && pi.is_noncrossing()
            );
        }
    }

    #[test]
    fn kernel_invariant_under_injective_relabeling(
        i in prop::collection::vec(0usize..5, 1..=8),
        shift in 0usize..100,
        scale in 1usize..7,
    ) {
        let relabeled: Vec<usize> = i.iter().map(|&x| x * scale + shift).collect();
        prop_assert_eq!(kernel(&i).unwrap(), kernel(&relabeled).unwrap());
    }
}

// ---------------------------------------------------------------- graphs

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lex_of_complete_graphs_is_complete(n in 1usize..=5, layers in 1usize..=4) {
        let g = lexicographic_product(&SimpleGraph::complete(n), &SimpleGraph::complete(layers));
        prop_assert_eq!(g.as_flat(), &SimpleGraph::complete(n * layers));
    }

    #[test]
    fn lex_edge_count(seed in any::<u64>(), n in 1usize..=5, layers in 1usize..=4) {
        let mut r = rng(seed);
        let base = random_graph(&mut r, n, 0.5);
        let gl = random_graph(&mut r, layers, 0.5);
        let g = lexicographic_product(&base, &gl);
        prop_assert_eq!(g.edge_count(), layers * base.edge_count() + gl.edge_count() * n * n);
    }

    #[test]
    fn h_graph_edges_join_disjoint_subsets(seed in any::<u64>(), layers in 1usize..=4) {
        let mut r = rng(seed);
        let gl = random_graph(&mut r, layers, 0.6);
        let h = h_graph(&gl).unwrap();
        for (a, b) in h.graph.edges() {
            prop_assert!(!h.subsets[a].intersects(h.subsets[b]));
        }
    }
}

// ---------------------------------------------------------------- graphon

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn graphon_of_graph_matches_graph_density(seed in any::<u64>(), nf in 1usize..=4, ng in 1usize..=5) {
        let mut r = rng(seed);
        let f = random_graph(&mut r, nf, 0.5);
        let g = random_graph(&mut r, ng, 0.6);
        let a: Rational = rho_graphon(&f, &StepGraphon::from_graph(&g).unwrap());
        let b: Rational = rho_graph(&f, &g).unwrap();
        let bound = q((f.edge_count() * nf * nf) as i64, ng as i64);
        prop_assert!(abs(a - b) <= bound);
    }

    #[test]
    fn graphon_density_is_monotone(seed in any::<u64>(), nf in 1usize..=4) {
        let mut r = rng(seed);
        let f = random_graph(&mut r, nf, 0.6);
        let lo = random_graphon(&mut r, 3, 4);
        let rows: Vec<Vec<Rational>> = lo
            .rows()
            .iter()
            .map(|row| row.iter().map(|v| v.clone() + (int(1) - v.clone()) * q(1, 2)).collect())
            .collect();
        let hi = StepGraphon::new(lo.breaks().to_vec(), rows).unwrap();
        prop_assert!(rho_graphon(&f, &lo) <= rho_graphon(&f, &hi));
        if f.edge_count() > 0 {
            prop_assert_eq!(rho_graphon(&f, &StepGraphon::constant(int(0)).unwrap()), int(0));
        }
    }

    #[test]
    fn graphon_density_multiplies_on_disjoint_unions(seed in any::<u64>(), n1 in 1usize..=3, n2 in 1usize..=3) {
        let mut r = rng(seed);
        let f1 = random_graph(&mut r, n1, 0.6);
        let f2 = random_graph(&mut r, n2, 0.6);
        let w = random_graphon(&mut r, 3, 5);
        prop_assert_eq!(
            rho_graphon(&f1.disjoint_union(&f2), &w),
            rho_graphon(&f1, &w) * rho_graphon(&f2, &w)
        );
    }
}

// ---------------------------------------------------------------- decorated

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn injective_density_product_formula_holds(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = 2 * r.gen_range(1..=3);
        let layers = r.gen_range(1..=3);
        let n = r.gen_range(1..=5);
        let g = random_grid(&mut r, n, layers, 0.7).unwrap();
        let pi = random_pair_partition(&mut r, p).unwrap();
        let spec = random_word_for(&mut r, &pi, layers).unwrap();
        let f = decorated_intersection_graph::<Rational>(&pi, &spec, layers).unwrap();
        let cg = compressed_grid(&g).unwrap();
        let inj = hom_variants(&f, &cg, HomMode::Injective).unwrap();
        prop_assert_eq!(inj.clone(), injective_density_product_formula(&pi, &spec, &g).unwrap());
        let all = hom_variants(&f, &cg, HomMode::All).unwrap();
        let vf = f.vertex_count() as i64;
        prop_assert!(abs(all - inj) <= q(vf * vf, n as i64));
    }

    #[test]
    fn empty_decorations_give_density_one(seed in any::<u64>(), nf in 1usize..=5, layers in 1usize..=3) {
        let mut r = rng(seed);
        let shape = random_graph(&mut r, nf, 0.5);
        let e = MLMatrix::<Rational>::basis(layers, Subset::EMPTY, Subset::EMPTY).unwrap();
        let mut f = DecoratedGraph::new(nf, layers).unwrap();
        for (u, v) in shape.edges() {
            f.add_edge(u, v, e.clone(), e.clone()).unwrap();
        }
        let w = DecoratedStepGraphon::constant(e).unwrap();
        prop_assert_eq!(rho_decorated(&f, &w).unwrap(), int(1));
    }

    #[test]
    fn compressed_grid_is_hs_symmetric(seed in any::<u64>(), n in 1usize..=4, layers in 1usize..=3) {
        let mut r = rng(seed);
        let g = random_grid(&mut r, n, layers, 0.6).unwrap();
        let cg = compressed_grid::<Rational>(&g).unwrap();
        for u in 0..n {
            for v in 0..n {
                if let (Some(a), Some(b)) = (cg.beta(u, v), cg.beta(v, u)) {
                    prop_assert_eq!(a.hs_norm_sq(), b.hs_norm_sq());
                }
            }
        }
    }
}

// ---------------------------------------------------------------- cumulants

/// Free mixed moment: sum over noncrossing `pi <= ker(i)` of products of free
/// cumulants.
fn free_oracle(i: &[usize], laws: &[ScalarLaw<Rational>]) -> Rational {
    let ker = kernel(i).unwrap();
    let kappas: Vec<_> = laws.iter().map(moments_to_free_cumulants).collect();
    Rational::sum_of(
        enumerate_partitions(i.len(), PartitionFilter::NonCrossing)
            .unwrap()
            .into_iter()
            .filter(|pi| pi.refines(&ker))
            .map(|pi| {
                pi.blocks().iter().fold(int(1), |acc, b| {
                    acc * kappas[i[b[0]]].get(b.len()).unwrap().clone()
                })
            }),
    )
}

/// Commuting independent variables: product of moments of each vertex.
fn classical_oracle(i: &[usize], laws: &[ScalarLaw<Rational>]) -> Rational {
    (0..laws.len()).fold(int(1), |acc, v| {
        let c = i.iter().filter(|&&x| x == v).count();
        acc * laws[v].moment(c).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn cumulant_round_trip(
        m1 in -4i64..=4,
        spread in 0i64..=6,
        rest in prop::collection::vec((-20i64..=20, 1i64..=4), 0..=6),
    ) {
        let mut moments = vec![int(m1), int(m1 * m1 + spread)];
        moments.extend(rest.iter().map(|&(a, b)| q(a, b)));
        let law = ScalarLaw::new(moments).unwrap();
        let back = free_cumulants_to_moments(&moments_to_free_cumulants(&law)).unwrap();
        prop_assert_eq!(back.moments(), law.moments());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn epsilon_moment_extremes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let laws: Vec<ScalarLaw<Rational>> = (0..2)
            .map(|_| {
                let lambda = q(r.gen_range(-2..=2), r.gen_range(1..=2));
                ScalarLaw::shifted_semicircle(lambda, q(r.gen_range(1..=3), 1), 6).unwrap()
            })
            .collect();
        let vl = VertexLaws::per_vertex(laws.clone());
        for k in 1..=6u32 {
            for code in 0..1u32 << k {
                let i: Vec<usize> = (0..k).map(|b| (code >> b & 1) as usize).collect();
                prop_assert_eq!(
                    epsilon_moment(&SimpleGraph::complete(2), &i, &vl).unwrap(),
                    classical_oracle(&i, &laws)
                );
                prop_assert_eq!(
                    epsilon_moment(&SimpleGraph::edgeless(2), &i, &vl).unwrap(),
                    free_oracle(&i, &laws)
                );
            }
        }
    }

    #[test]
    fn alternating_centered_words_vanish(seed in any::<u64>(), v in 1usize..=4, i in prop::collection::vec(0usize..4, 1..=6)) {
        let mut r = rng(seed);
        let g = random_graph(&mut r, v, 0.5);
        let i: Vec<usize> = i.into_iter().map(|x| x % v).collect();
        let alternating = (0..i.len()).all(|a| {
            (a + 1..i.len()).all(|b| i[a] != i[b] || (a + 1..b).any(|c| i[c] == i[a] || !g.has_edge(i[a], i[c])))
        });
        prop_assume!(alternating);
        let laws = VertexLaws::per_vertex((0..v).map(|_| random_centered_law(&mut r, 6)).collect());
        prop_assert_eq!(epsilon_moment(&g, &i, &laws).unwrap(), int(0));
    }

    #[test]
    fn single_semicircle_star_moment_counts_nc_pairings(seed in any::<u64>(), half in 1usize..=4) {
        let mut r = rng(seed);
        let p = 2 * half;
        let alpha = random_exponents(&mut r, p);
        let nc2 = enumerate_partitions(p, PartitionFilter::NonCrossingPair).unwrap().len() as i64;
        let m: Rational = star_joint_moment(&SimpleGraph::edgeless(1), &[StarVariable::Semicircle], &vec![0; p], &alpha).unwrap();
        prop_assert_eq!(m, int(nc2));
    }
}

// ---------------------------------------------------------------- limit laws

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn odd_limit_moments_vanish(seed in any::<u64>(), half in 0usize..=2) {
        let mut r = rng(seed);
        let p = 2 * half + 1;
        let layers = r.gen_range(1..=3);
        let gl = random_graph(&mut r, layers, 0.5);
        let w = random_graphon(&mut r, 2, 3);
        let js: Vec<Subset> = (0..p).map(|_| epsclt::checks::random_subset(&mut r, layers)).collect();
        let spec = WordSpec::new(js, random_exponents(&mut r, p)).unwrap();
        let gamma = lex_limit_decoration(&gl, &w).unwrap();
        prop_assert_eq!(master_limit_moment(&gamma, &spec).unwrap(), int(0));
        prop_assert_eq!(lex_limit_moment(&gl, &w, &spec).unwrap(), int(0));
        prop_assert_eq!(clt_l1_moment(&w, p).unwrap(), int(0));
    }

    #[test]
    fn master_formula_matches_joint_law(seed in any::<u64>()) {
        let mut r = rng(seed);
        let layers = r.gen_range(1..=3);
        let gl = random_graph(&mut r, layers, 0.6);
        let w = random_graphon(&mut r, 2, 4);
        let gamma = lex_limit_decoration(&gl, &w).unwrap();
        let p = r.gen_range(1..=4);
        // pairs of repeated subsets make nonzero moments likely
        let mut js: Vec<Subset> = (0..p).map(|_| epsclt::checks::random_subset(&mut r, layers)).collect();
        if p >= 2 && r.gen_bool(0.7) {
            js[p - 1] = js[0];
        }
        let spec = WordSpec::new(js, random_exponents(&mut r, p)).unwrap();
        prop_assert_eq!(master_limit_moment(&gamma, &spec).unwrap(), lex_limit_moment(&gl, &w, &spec).unwrap());
    }

    #[test]
    fn tensor_triangle_for_rational_parameters(ln in -3i64..=3, ld in 1i64..=3, sn in 1i64..=4, sd in 1i64..=3) {
        let (lambda, sigma2) = (q(ln, ld), q(sn, sd));
        let model = LimitModel::new(SimpleGraph::complete(2), StepGraphon::constant(int(0)).unwrap(), lambda.clone(), sigma2.clone()).unwrap();
        let params = NormalizationParams::new(&lambda, &sigma2).unwrap();
        for p in 1..=6 {
            let alpha = vec![Exponent::One; p];
            prop_assert_eq!(
                s_limit_moment(&model, &alpha, Normalization::UnitVariance).unwrap(),
                tensor2_reference_moment(&params, &alpha).unwrap()
            );
        }
    }
}

#[test]
fn fully_classical_limit_is_gaussian() {
    for layers in 1..=3 {
        for (lambda, sigma2) in [(int(1), int(1)), (q(1, 2), int(2)), (int(0), int(3))] {
            let model = LimitModel::new(
                SimpleGraph::complete(layers),
                StepGraphon::constant(int(1)).unwrap(),
                lambda,
                sigma2,
            )
            .unwrap();
            let mut df = 1i64;
            for half in 1..=4usize {
                df *= 2 * half as i64 - 1;
                let m = s_limit_moment(
                    &model,
                    &vec![Exponent::One; 2 * half],
                    Normalization::UnitVariance,
                )
                .unwrap();
                assert_eq!(m, int(df), "L={layers} order {}", 2 * half);
            }
        }
    }
}

// ---------------------------------------------------------------- finite n

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kernel_classes_reduce_to_pair_partitions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let layers = r.gen_range(1..=2);
        let n = r.gen_range(1..=3);
        let p = 2 * r.gen_range(1..=2);
        let g = random_grid(&mut r, n, layers, 0.6).unwrap();
        let js: Vec<Subset> = (0..p).map(|_| epsclt::checks::random_subset(&mut r, layers)).collect();
        let spec = WordSpec::new(js, random_exponents(&mut r, p)).unwrap();
        let law = ScalarLaw::<Rational>::rademacher(2 * p);
        let split = kernel_split(&g, &law, &spec, DEFAULT_BUDGET).unwrap();
        let total = Rational::sum_of(split.classes.iter().map(|(_, v)| v.clone()));
        let brute = epsclt::finite_n::sn_product_moment_brute(&g, &law, &spec, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(total, brute);
        for (sigma, value) in &split.classes {
            if let Ok(pi) = epsclt::combinatorics::PairPartition::try_from(sigma.clone()) {
                prop_assert_eq!(value.clone(), rho_n(&pi, &spec, &g, &law).unwrap());
            } else if sigma.max_block_size() >= 3 {
                // |value| <= C n^{|sigma|} / n^{p/2}
                let nn = int(n as i64);
                let lhs = abs(value.clone()) * nn.clone().powi((p / 2) as u32);
                prop_assert!(lhs <= split.max_trace.clone() * nn.powi(sigma.num_blocks() as u32));
            }
        }
    }

    #[test]
    fn rho_n_matches_scaled_injective_density(seed in any::<u64>()) {
        let mut r = rng(seed);
        let p = 2 * r.gen_range(1..=2);
        let layers = r.gen_range(1..=3);
        let n = r.gen_range(p / 2 + 1..=4);
        let g = random_grid(&mut r, n, layers, 0.7).unwrap();
        let pi = random_pair_partition(&mut r, p).unwrap();
        let spec = random_word_for(&mut r, &pi, layers).unwrap();
        let f = decorated_intersection_graph::<Rational>(&pi, &spec, layers).unwrap();
        let inj = hom_variants(&f, &compressed_grid(&g).unwrap(), HomMode::Injective).unwrap();
        let rho: Rational = rho_n(&pi, &spec, &g, &ScalarLaw::gaussian(4)).unwrap();
        prop_assert_eq!(rho, q(n as i64, (n - p / 2) as i64) * inj);
    }

    #[test]
    fn class_path_matches_brute_force(seed in any::<u64>()) {
        let mut r = rng(seed);
        let layers = r.gen_range(1..=2);
        let gl = random_graph(&mut r, layers, 0.5);
        let base = match r.gen_range(0..3) {
            0 => BaseFamily::Complete,
            1 => BaseFamily::Edgeless,
            _ => BaseFamily::BlowUp(random_zero_one_graphon(&mut r, 2)),
        };
        let family = GridFamily::new(base, gl).unwrap();
        let p = r.gen_range(1..=4);
        let n = r.gen_range(1..=4);
        let law = random_centered_law(&mut r, p.max(2));
        let js: Vec<Subset> = (0..p).map(|_| epsclt::checks::random_subset(&mut r, layers)).collect();
        let spec = WordSpec::new(js, random_exponents(&mut r, p)).unwrap();
        let fast = sn_product_moment(&family, &law, &spec, n, Strategy::Classes, DEFAULT_BUDGET);
        let brute = sn_product_moment(&family, &law, &spec, n, Strategy::BruteForce, DEFAULT_BUDGET);
        match (fast, brute) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(epsclt::Error::Irrational(_)), Err(epsclt::Error::Irrational(_))) => {}
            (a, b) => prop_assert!(false, "paths disagree: {:?} vs {:?}", a, b),
        }

        let uncentered = ScalarLaw::shifted_semicircle(q(r.gen_range(-2..=2), 1), int(1), 4).unwrap();
        let len = 2 * r.gen_range(1..=2);
        let alpha = random_exponents(&mut r, len);
        let fast = FullMoment::new(&family, &uncentered, &alpha, Strategy::Classes, DEFAULT_BUDGET)
            .and_then(|m| m.eval(n.min(3), Normalization::Raw)).unwrap();
        let brute = FullMoment::new(&family, &uncentered, &alpha, Strategy::BruteForce, DEFAULT_BUDGET)
            .and_then(|m| m.eval(n.min(3), Normalization::Raw)).unwrap();
        prop_assert_eq!(fast, brute);
    }
}

#[test]
fn variance_of_full_sum_is_exact_for_all_n() {
    let mut r = rng(11);
    for _ in 0..6 {
        let layers = r.gen_range(1..=3);
        let gl = random_graph(&mut r, layers, 0.5);
        let lambda = q(r.gen_range(-2..=2), r.gen_range(1..=2));
        let sigma2 = q(r.gen_range(1..=3), 1);
        let law = ScalarLaw::shifted_semicircle(lambda.clone(), sigma2.clone(), 4).unwrap();
        let family =
            GridFamily::new(BaseFamily::BlowUp(random_zero_one_graphon(&mut r, 2)), gl).unwrap();
        let m = FullMoment::new(
            &family,
            &law,
            &[Exponent::One, Exponent::Star],
            Strategy::Auto,
            DEFAULT_BUDGET,
        )
        .unwrap();
        let l2 = lambda.clone() * lambda;
        let want = (sigma2 + l2.clone()).powi(layers as u32) - l2.powi(layers as u32);
        for n in 1..=6 {
            assert_eq!(m.eval(n, Normalization::Raw).unwrap(), want);
        }
    }
}

#[test]
fn pair_partition_count_matches_enumeration() {
    for half in 1..=4 {
        assert_eq!(
            pair_partitions(2 * half).unwrap().len(),
            enumerate_partitions(2 * half, PartitionFilter::Pair)
                .unwrap()
                .len()
        );
    }
}
