mod common;

use common::*;
use loopmod::graph::WeightedGraph;
use loopmod::modulus::{compute_modulus, find_top_k_violated, greedy_select, ModulusConfig, ModulusResult};
use loopmod::oracles::{enumerate_cycles, full_constraint_modulus};
use proptest::prelude::*;

fn small_cyclic_graph() -> impl Strategy<Value = (String, WeightedGraph)> {
    (4usize..=8, prop::sample::select(vec![0.4, 0.6, 0.8]), 0u64..5000)
        .prop_map(|(n, p, seed)| {
            let spec = format!("er:{n}:{p}:seed={seed}");
            let g = gen(&spec);
            (spec, g)
        })
        .prop_filter("needs a cycle", |(_, g)| !g.is_forest())
}

fn check_bookkeeping(r: &ModulusResult, config: &ModulusConfig) -> Result<(), String> {
    let added = r.constraints.len() - r.initial_constraints;
    let solves_after_first = r.qp_solves - 1;
    if r.qp_solves > r.iterations + 1 {
        return Err(format!("{} solves for {} iterations", r.qp_solves, r.iterations));
    }
    if added < solves_after_first || added > solves_after_first * config.cycles_per_iter {
        return Err(format!("{added} constraints added over {solves_after_first} re-solves"));
    }
    for w in r.trace.windows(2) {
        if w[1].modulus < w[0].modulus - 1e-7 {
            return Err(format!("modulus fell from {} to {}", w[0].modulus, w[1].modulus));
        }
        if w[1].constraints < w[0].constraints {
            return Err("constraint count fell".into());
        }
    }
    for c in &r.constraints {
        let ell = c.length_under(&r.rho);
        if ell < 1.0 - 1e-6 {
            return Err(format!("constraint {:?} has rho-length {ell}", c.vertices));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn matches_the_full_constraint_oracle((spec, g) in small_cyclic_graph()) {
        let oracle = full_constraint_modulus(&g, 1e-10).unwrap();
        for config in [ModulusConfig::default(), ModulusConfig::baseline()] {
            let r = compute_modulus(&g, &config);
            prop_assert!(r.converged, "{}", spec);
            prop_assert!((r.modulus - oracle).abs() <= 1e-6 * oracle.max(1.0), "{}: {} vs {}", spec, r.modulus, oracle);
            if let Err(e) = check_bookkeeping(&r, &config) {
                return Err(TestCaseError::fail(format!("{spec}: {e}")));
            }
            prop_assert!(find_top_k_violated(&g, None, &r.rho, 1, 1.0 - config.epsilon).is_empty());
        }
    }

    #[test]
    fn top_k_against_enumeration(
        (spec, g) in small_cyclic_graph(),
        rho_seed in prop::collection::vec(0.05f64..1.0, 64),
        k in 1usize..6,
        threshold in 0.5f64..4.0,
    ) {
        let rho: Vec<f64> = rho_seed[..g.edge_count()].to_vec();
        let mut all: Vec<f64> = enumerate_cycles(&g, 14).unwrap().iter().map(|c| c.length_under(&rho)).collect();
        all.sort_by(f64::total_cmp);
        let below = all.iter().filter(|&&l| l < threshold).count();
        let found = find_top_k_violated(&g, None, &rho, k, threshold);
        prop_assert!(found.len() <= k);
        prop_assert_eq!(found.is_empty(), below == 0, "{}", spec);
        if let Some((_, first)) = found.first() {
            prop_assert!((first - all[0]).abs() < 1e-12, "{}: {} vs {}", spec, first, all[0]);
        }
        for (i, (c, l)) in found.iter().enumerate() {
            prop_assert!(*l < threshold);
            prop_assert!((c.length_under(&rho) - l).abs() < 1e-12);
            prop_assert!(*l >= all[i] - 1e-12);
        }
        for w in found.windows(2) {
            prop_assert!(w[0].1 <= w[1].1);
            prop_assert!(w[0].0 != w[1].0);
        }
    }
}

#[test]
fn single_cycles_have_modulus_one_over_n() {
    for n in 3..=12 {
        let r = compute_modulus(&gen(&format!("cycle:{n}")), &ModulusConfig::default());
        assert!(r.converged);
        assert!((r.modulus - 1.0 / n as f64).abs() < 1e-9);
        assert!(r.rho.iter().all(|&x| (x - 1.0 / n as f64).abs() < 1e-9));
    }
}

#[test]
fn disjoint_loops_add_up() {
    let r = compute_modulus(&two_triangles(), &ModulusConfig::default());
    assert!((r.modulus - 2.0 / 3.0).abs() < 1e-9);
    let mut e = vec![(0, 1), (1, 2), (2, 3), (3, 0)];
    e.extend([(3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (8, 4)]);
    let r = compute_modulus(&unit(9, &e), &ModulusConfig::default());
    assert!((r.modulus - (0.25 + 0.2)).abs() < 1e-9);
}

#[test]
fn forest_has_zero_modulus() {
    let g = unit(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]);
    let r = compute_modulus(&g, &ModulusConfig::default());
    assert!(r.converged);
    assert_eq!(r.modulus, 0.0);
    assert!(r.constraints.is_empty());
    assert_eq!(r.qp_solves, 0);
}

#[test]
fn petersen_without_triangles_starts_from_a_pentagon() {
    let g = petersen();
    let r = compute_modulus(&g, &ModulusConfig::default());
    assert_eq!(r.initial_constraints, 1);
    assert_eq!(r.constraints[0].len(), 5);
    let oracle = full_constraint_modulus(&g, 1e-10).unwrap();
    assert!((r.modulus - oracle).abs() < 1e-6);
}

#[test]
fn larger_graphs_pass_the_final_check() {
    for spec in ["grid:8", "proximity:150:380:seed=7", "ws:80:4:0.2:seed=3", "ba:60:2:seed=9"] {
        let g = gen(spec);
        for config in [ModulusConfig::default(), ModulusConfig::baseline()] {
            let r = compute_modulus(&g, &config);
            assert!(r.converged, "{spec}");
            assert!(r.final_checks >= 1);
            check_bookkeeping(&r, &config).unwrap_or_else(|e| panic!("{spec}: {e}"));
            assert!(find_top_k_violated(&g, None, &r.rho, 1, 1.0 - config.epsilon).is_empty());
        }
    }
}

#[test]
fn pruning_and_batching_leave_the_value_alone() {
    let g = gen("proximity:120:300:seed=2");
    let a = compute_modulus(&g, &ModulusConfig::default());
    let b = compute_modulus(&g, &ModulusConfig::baseline());
    assert!((a.modulus - b.modulus).abs() <= 1e-6 * b.modulus);
    assert!(a.qp_solves < b.qp_solves);
}

#[test]
fn greedy_selection_prefers_disjoint_triangles() {
    // two triangles sharing edge 0-1 and a third far away
    let g = unit(7, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 1), (4, 5), (5, 6), (6, 4)]);
    let tri = loopmod::modulus::find_triangles(&g);
    assert_eq!(tri.len(), 3);
    let picked = greedy_select(&g, &tri, 2);
    assert_eq!(picked.len(), 2);
    let shared = picked[0].edges.iter().filter(|e| picked[1].edges.contains(e)).count();
    assert_eq!(shared, 0);
}

#[test]
fn iteration_cap_is_respected() {
    let g = gen("grid:10");
    let config = ModulusConfig {
        max_iters: Some(3),
        ..ModulusConfig::default()
    };
    let r = compute_modulus(&g, &config);
    assert!(!r.converged);
    assert_eq!(r.iterations, 3);
    assert_eq!(r.final_checks, 0);
}

#[test]
fn json_output_is_reproducible() {
    let g = gen("er:25:0.25:seed=8");
    let a = compute_modulus(&g, &ModulusConfig::default()).to_json(&g);
    let b = compute_modulus(&g, &ModulusConfig::default()).to_json(&g);
    assert_eq!(a, b);
    assert_eq!(a["rho"].as_array().unwrap().len(), g.edge_count());
}
