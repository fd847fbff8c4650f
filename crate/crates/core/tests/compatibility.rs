mod common;

use common::*;
use proptest::prelude::*;
use qfl_core::compatibility::*;
use qfl_core::exec::Exec;
use qfl_core::operator::validate_povm;
use qfl_core::pauli::{DegreeSet, PauliString};
use rand::seq::SliceRandom;
use rand::Rng;

/// `σ^s σ^t = σ^t σ^s` by dense products.
fn dense_commute(s: &PauliString, t: &PauliString) -> bool {
    let (a, b) = (s.matrix().unwrap(), t.matrix().unwrap());
    a.matrix().matmul(b.matrix()).max_abs_diff(&b.matrix().matmul(a.matrix())) < 1e-12
}

fn set(d: usize, strings: &[&str]) -> DegreeSet {
    DegreeSet::new(d, strings.iter().map(|s| ps(s))).unwrap()
}

/// A random degree set of `size` distinct strings on `d` qubits.
fn random_set(r: &mut impl Rng, d: usize, size: usize) -> DegreeSet {
    let mut all: Vec<PauliString> = DegreeSet::full(d).unwrap().strings().to_vec();
    all.shuffle(r);
    DegreeSet::new(d, all.into_iter().take(size)).unwrap()
}

#[test]
fn commute_examples() {
    assert!(!pauli_commute(&ps("1"), &ps("2")).unwrap());
    assert!(!dense_commute(&ps("1"), &ps("2")));
    assert!(pauli_commute(&ps("11"), &ps("22")).unwrap());
    assert!(dense_commute(&ps("11"), &ps("22")));
    let mut r = rng(20);
    for _ in 0..20 {
        let s = random_string(&mut r, 4);
        assert!(pauli_commute(&s, &PauliString::identity(4)).unwrap());
    }
    assert!(pauli_commute(&ps("1"), &ps("11")).is_err());
}

#[test]
fn commute_matches_dense_exhaustively_to_three_qubits() {
    for d in 1..=3 {
        let all = DegreeSet::full(d).unwrap();
        for s in all.iter() {
            for t in all.iter() {
                assert_eq!(pauli_commute(s, t).unwrap(), dense_commute(s, t), "{s} {t}");
            }
        }
    }
}

#[test]
fn commute_matches_dense_on_random_pairs() {
    let mut r = rng(21);
    for i in 0..500 {
        let d = 4 + i % 5;
        let (s, t) = (random_string(&mut r, d), random_string(&mut r, d));
        assert_eq!(pauli_commute(&s, &t).unwrap(), dense_commute(&s, &t), "{s} {t}");
    }
}

#[test]
fn graph_examples() {
    let g = build_commutation_graph(&set(2, &["00"]));
    assert_eq!((g.len(), g.edge_count()), (1, 0));
    let g = build_commutation_graph(&set(1, &["1", "2", "3"]));
    assert_eq!(g.edge_count(), 0);
    assert!((0..3).all(|i| g.commute(i, i)));
    let g = build_commutation_graph(&set(2, &["30", "03", "33"]));
    assert_eq!(g.edge_count(), 3);
    assert!(g.is_clique(&[0, 1, 2]));
}

#[test]
fn graph_is_symmetric_and_matches_dense() {
    let a = random_set(&mut rng(22), 3, 20);
    let g = build_commutation_graph(&a);
    for i in 0..g.len() {
        for j in 0..g.len() {
            assert_eq!(g.commute(i, j), g.commute(j, i));
            assert_eq!(g.commute(i, j), dense_commute(&a.strings()[i], &a.strings()[j]));
        }
    }
}

#[test]
fn greedy_examples() {
    let full = set(2, &["30", "03", "33", "00"]);
    let g = build_commutation_graph(&full);
    assert_eq!(greedy_cover(&g, &[3, 1, 0, 2]).unwrap().len(), 1);
    let xyz = set(1, &["1", "2", "3"]);
    let g = build_commutation_graph(&xyz);
    for ordering in [[0, 1, 2], [2, 0, 1], [1, 2, 0]] {
        assert_eq!(greedy_cover(&g, &ordering).unwrap().sizes(), vec![1, 1, 1]);
    }
    assert!(greedy_cover(&g, &[0, 0, 1]).is_err());
}

#[test]
fn greedy_follows_first_fit() {
    // 1X, 3Z, 2Y on one qubit pairwise anticommute; the identity commutes
    // with all of them and joins the first block.
    let a = set(1, &["0", "1", "2", "3"]);
    let g = build_commutation_graph(&a);
    let cover = greedy_cover(&g, &[1, 0, 2, 3]).unwrap();
    assert_eq!(cover.to_text(), "0,1\n2\n3\n");
}

#[test]
fn score_examples() {
    let delta = 0.1;
    assert!((cover_score(&[1], 100, delta).unwrap() - (2.0f64 / delta).ln() / 100.0).abs() < 1e-15);
    let two = cover_score(&[1, 1], 100, delta).unwrap();
    let direct = (2.0 * (20f64.ln() / 100.0).sqrt()).powi(2);
    assert!((two - direct).abs() < 1e-15);
    // Square loss 8 Σ_j |B_j| ln(2|B_j|/δ) / n_j at n_j = n/2.
    let square_loss: f64 = 2.0 * 8.0 * 20f64.ln() / 50.0;
    assert!((8.0 * two - square_loss).abs() < 1e-12);
    let (s1, s2) = (cover_score(&[3, 1], 400, delta).unwrap(), cover_score(&[3, 1], 800, delta).unwrap());
    assert!((s1 - 2.0 * s2).abs() < 1e-15);
    assert!(cover_score(&[1], 10, 1.0).is_err());
}

#[test]
fn best_cover_examples() {
    let z = DegreeSet::classical_upto(3, 3).unwrap();
    for strat in [CoverStrategy::default(), CoverStrategy::Exhaustive] {
        assert_eq!(best_cover(&z, 100, 0.05, strat, Exec::default()).unwrap().len(), 1);
    }
    let xyz = set(1, &["1", "2", "3"]);
    let ex = best_cover(&xyz, 100, 0.05, CoverStrategy::Exhaustive, Exec::default()).unwrap();
    assert_eq!(ex, Cover::singletons(&xyz));
    let big = DegreeSet::upto(2, 2).unwrap();
    assert!(best_cover(&big, 100, 0.05, CoverStrategy::Exhaustive, Exec::default()).is_err());
}

#[test]
fn exhaustive_never_worse_on_a_mixed_graph() {
    let a = set(2, &["10", "01", "11", "30", "33"]);
    let n = 1000;
    let ex = best_cover(&a, n, 0.05, CoverStrategy::Exhaustive, Exec::default()).unwrap();
    let gr = best_cover(&a, n, 0.05, CoverStrategy::default(), Exec::default()).unwrap();
    assert!(ex.score(n, 0.05).unwrap() <= gr.score(n, 0.05).unwrap());
    ex.validate(&a).unwrap();
    gr.validate(&a).unwrap();
}

/// Brute force over every set partition of `0..n` (restricted growth
/// strings), keeping clique partitions only.
fn brute_force_best(a: &DegreeSet, delta: f64) -> f64 {
    let g = build_commutation_graph(a);
    let n = a.len();
    let mut best = f64::INFINITY;
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, g: &CommutationGraph, delta: f64, best: &mut f64) {
        let n = labels.len();
        if i == n {
            let blocks: Vec<Vec<usize>> = (0..=max).map(|b| (0..n).filter(|&k| labels[k] == b).collect()).collect();
            if blocks.iter().all(|b| g.is_clique(b)) {
                let sizes: Vec<usize> = blocks.iter().map(|b| b.len()).collect();
                *best = best.min(cover_score(&sizes, 1, delta).unwrap());
            }
            return;
        }
        for b in 0..=max + 1 {
            labels[i] = b;
            rec(i + 1, max.max(b), labels, g, delta, best);
        }
    }
    labels[0] = 0;
    rec(1, 0, &mut labels, &g, delta, &mut best);
    best
}

#[test]
fn exhaustive_matches_brute_force() {
    let mut r = rng(23);
    for _ in 0..10 {
        let size = r.random_range(2..=7);
        let a = random_set(&mut r, 2, size);
        let ex = best_cover(&a, 1, 0.05, CoverStrategy::Exhaustive, Exec::default()).unwrap();
        assert!((ex.score(1, 0.05).unwrap() - brute_force_best(&a, 0.05)).abs() < 1e-12);
    }
}

#[test]
fn cover_quality_ordering_on_random_graphs() {
    let mut r = rng(24);
    for _ in 0..20 {
        let size = r.random_range(3..=10);
        let a = random_set(&mut r, 3, size);
        let n = 1000;
        let ex = best_cover(&a, n, 0.05, CoverStrategy::Exhaustive, Exec::default()).unwrap();
        let gr = best_cover(&a, n, 0.05, CoverStrategy::default(), Exec::default()).unwrap();
        let single = Cover::singletons(&a);
        for c in [&ex, &gr, &single] {
            c.validate(&a).unwrap();
        }
        let (se, sg, ss) = (ex.score(n, 0.05).unwrap(), gr.score(n, 0.05).unwrap(), single.score(n, 0.05).unwrap());
        assert!(se <= sg + 1e-12 && sg <= ss + 1e-12, "{se} {sg} {ss}");
    }
}

#[test]
fn cover_text_round_trip() {
    let a = DegreeSet::upto(2, 1).unwrap();
    let cover = best_cover(&a, 500, 0.05, CoverStrategy::default(), Exec::default()).unwrap();
    assert_eq!(Cover::parse(&cover.to_text()).unwrap(), cover);
    assert!(Cover::new(1, vec![vec![ps("1")], vec![ps("1")]]).is_err());
    let clash = Cover::new(1, vec![vec![ps("1"), ps("2")]]).unwrap();
    assert!(matches!(clash.validate(&DegreeSet::full(1).unwrap()), Err(qfl_core::Error::NonCommuting { .. })));
    Cover::singletons(&a).validate(&a).unwrap();
}

#[test]
fn allocation_examples() {
    assert_eq!(allocate_sizes(1000, &[3, 3], 0.05).unwrap().sizes, vec![500, 500]);
    assert_eq!(allocate_sizes(1000, &[7], 0.05).unwrap().sizes, vec![1000]);
    assert!(allocate_sizes(2, &[1, 1, 1], 0.05).is_err());
}

/// Unit-resolution search of `Σ b_j/x_j` over `x_1 + x_2 + x_3 = n`, `x_j ≥ 1`.
fn grid_search(n: usize, b: &[f64]) -> (Vec<usize>, f64) {
    let mut best = (vec![], f64::INFINITY);
    for x1 in 1..n - 1 {
        for x2 in 1..n - x1 {
            let x = [x1, x2, n - x1 - x2];
            let v: f64 = b.iter().zip(&x).map(|(b, &x)| b / x as f64).sum();
            if v < best.1 {
                best = (x.to_vec(), v);
            }
        }
    }
    best
}

#[test]
fn allocation_matches_grid_search() {
    let (n, delta, sizes) = (1000, 0.05, [4, 1, 1]);
    let b: Vec<f64> = sizes.iter().map(|&s| s as f64 * (2.0 * s as f64 / delta).ln()).collect();
    let plan = allocate_sizes(n, &sizes, delta).unwrap();
    let (grid, best) = grid_search(n, &b);
    assert_eq!(plan.sizes.iter().sum::<usize>(), n);
    for (p, g) in plan.sizes.iter().zip(&grid) {
        assert!(p.abs_diff(*g) <= 1, "{:?} vs {:?}", plan.sizes, grid);
    }
    assert!(allocation_objective(&b, &plan.sizes) <= best + 1e-12);
}

#[test]
fn reference_effects_are_a_projective_resolution() {
    let mut r = rng(25);
    for d in 1..=3 {
        let a = DegreeSet::full(d).unwrap();
        for _ in 0..5 {
            let cover = best_cover(&random_set(&mut r, d, 6.min(a.len())), 10, 0.1, CoverStrategy::default(), Exec::default()).unwrap();
            for clique in cover.subsets() {
                let effects: Vec<_> = reference_effects(clique).unwrap().into_iter().map(|e| e.into_matrix()).collect();
                validate_povm(&effects).unwrap();
                for (i, e) in effects.iter().enumerate() {
                    assert!(e.matmul(e).max_abs_diff(e) < 1e-8);
                    for f in &effects[i + 1..] {
                        assert!(e.matmul(f).max_abs() < 1e-8);
                    }
                }
            }
        }
    }
    assert!(reference_effects(&[ps("1"), ps("3")]).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn prop_covers_are_clique_partitions(seed in any::<u64>(), size in 1usize..16, restarts in 0usize..8) {
        let mut r = rng(seed);
        let a = random_set(&mut r, 3, size);
        let strategy = CoverStrategy::GreedyMulti { restarts, seed };
        let cover = best_cover(&a, 100, 0.1, strategy, Exec::default()).unwrap();
        cover.validate(&a).unwrap();
        let g = build_commutation_graph(&a);
        for b in cover.subsets() {
            let idx: Vec<usize> = b.iter().map(|s| a.index_of(s).unwrap()).collect();
            prop_assert!(g.is_clique(&idx));
        }
        prop_assert!(cover.len() <= a.len());
    }

    #[test]
    fn prop_greedy_multi_is_deterministic_under_both_policies(seed in any::<u64>(), size in 1usize..16) {
        let a = random_set(&mut rng(seed), 3, size);
        let strategy = CoverStrategy::GreedyMulti { restarts: 8, seed };
        let s = best_cover(&a, 100, 0.1, strategy, Exec::Sequential).unwrap();
        let p = best_cover(&a, 100, 0.1, strategy, Exec::Parallel).unwrap();
        prop_assert_eq!(s, p);
    }

    #[test]
    fn prop_equal_weights_balance(m in 1usize..12, extra in 0usize..500, size in 1usize..6) {
        let n = m + extra;
        let plan = allocate_sizes(n, &vec![size; m], 0.05).unwrap();
        prop_assert_eq!(plan.sizes.iter().sum::<usize>(), n);
        prop_assert!(plan.sizes.iter().max().unwrap() - plan.sizes.iter().min().unwrap() <= 1);
    }

    #[test]
    fn prop_allocation_is_locally_optimal(sizes in prop::collection::vec(1usize..20, 1..6), extra in 0usize..2000) {
        let n = sizes.len() + extra;
        let b: Vec<f64> = sizes.iter().map(|&s| s as f64 * (2.0 * s as f64 / 0.05).ln()).collect();
        let plan = allocate_sizes(n, &sizes, 0.05).unwrap();
        prop_assert!(plan.sizes.iter().all(|&x| x >= 1));
        let base = allocation_objective(&b, &plan.sizes);
        for i in 0..sizes.len() {
            for j in 0..sizes.len() {
                if i != j && plan.sizes[i] > 1 {
                    let mut moved = plan.sizes.clone();
                    moved[i] -= 1;
                    moved[j] += 1;
                    prop_assert!(base <= allocation_objective(&b, &moved) + 1e-9);
                }
            }
        }
    }

    #[test]
    fn prop_score_nonincreasing_in_n(sizes in prop::collection::vec(1usize..20, 1..6), n in 1usize..10_000) {
        prop_assert!(cover_score(&sizes, n + 1, 0.05).unwrap() <= cover_score(&sizes, n, 0.05).unwrap());
    }
}
