use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use treehl_core::Exponent;
use treehl_lab::abstract_trees::{
    abstract_weak_type_check, expansion_constant, expansion_objective, gamma_constant, m_s_all, random_pair,
    sphere_size_sup, ExpansionQuery, FiniteTree, GammaOptions, Strategy, TreeMetric,
};

fn metric(spec: &str) -> TreeMetric {
    TreeMetric::new(&FiniteTree::from_spec(spec).unwrap()).unwrap()
}

/// Every pair of nonempty subsets, no pruning.
fn brute_force(m: &TreeMetric, w: &[f64], s: Exponent, r: usize, alpha: f64, pool: &[usize]) -> f64 {
    let ms = m_s_all(m, w, s);
    let subset = |mask: u32| -> Vec<usize> { (0..pool.len()).filter(|i| mask >> i & 1 == 1).map(|i| pool[i]).collect() };
    let mut best = 0.0f64;
    for fm in 1u32..1 << pool.len() {
        for em in 1u32..1 << pool.len() {
            best = best.max(expansion_objective(m, w, &ms, r, alpha, &subset(em), &subset(fm)));
        }
    }
    best
}

#[test]
fn interior_spheres_match_closed_form() {
    for (k, depth) in [(2usize, 8usize), (3, 5)] {
        let tree = FiniteTree::kary(k, depth).unwrap();
        let m = TreeMetric::new(&tree).unwrap();
        let depths = tree.depths();
        for (x, &j) in depths.iter().enumerate() {
            for r in 1..=j.min(depth - j) {
                assert_eq!(m.sphere(x, r).len(), k.pow(r as u32) + k.pow(r as u32 - 1));
            }
        }
    }
    assert_eq!(sphere_size_sup(&metric("kary 2 6"), 2), 6);
}

#[test]
fn exhaustive_matches_brute_force() {
    let m = metric("random 24 11");
    let w: Vec<f64> = (0..24).map(|i| ((i * 5) % 7) as f64 * 0.5).collect();
    for (pool, r) in [(vec![0, 1, 2, 3, 5, 8, 13], 1), (vec![2, 4, 6, 8, 10, 12, 14], 2), (vec![0, 3, 7, 9, 20, 23], 3)] {
        let q = ExpansionQuery { metric: &m, w: &w, s: Exponent::new(3, 2), r, alpha: 0.4, pool: pool.clone(), strategy: Strategy::Exhaustive };
        let got = expansion_constant(&q).unwrap();
        let want = brute_force(&m, &w, q.s, r, q.alpha, &pool);
        assert!((got.value - want).abs() <= 1e-12 * want.max(1.0), "r={r}: {} vs {want}", got.value);
    }
}

#[test]
fn unit_weight_radius_zero_sup_is_one_at_full_pool() {
    let m = metric("kary 3 3");
    let w = vec![1.0; m.len()];
    let ones = vec![1.0; m.len()];
    for size in 1..=8usize {
        let pool: Vec<usize> = (0..size).map(|i| i * 4).collect();
        let q = ExpansionQuery { metric: &m, w: &w, s: Exponent::from(2), r: 0, alpha: 0.25, pool: pool.clone(), strategy: Strategy::Exhaustive };
        let res = expansion_constant(&q).unwrap();
        assert!((res.value - 1.0).abs() < 1e-12);
        assert!((expansion_objective(&m, &w, &ones, 0, 0.25, &pool, &pool) - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn monotone_in_pool(seed in 0u64..1000, r in 0usize..4, extra in 0usize..40) {
        let m = metric(&format!("random 40 {seed}"));
        let (_, w) = random_pair(40, seed);
        let small: Vec<usize> = (0..6).map(|i| (i * 7 + seed as usize) % 40).collect();
        let mut large = small.clone();
        large.push(extra);
        let q = |pool: Vec<usize>| ExpansionQuery { metric: &m, w: &w, s: Exponent::from(2), r, alpha: 0.3, pool, strategy: Strategy::Exhaustive };
        // A pool with no pair at distance r has nothing to bound.
        let Ok(a) = expansion_constant(&q(small)).map(|res| res.value) else { return Ok(()) };
        let b = expansion_constant(&q(large)).unwrap().value;
        prop_assert!(b >= a * (1.0 - 1e-12));
    }

    #[test]
    fn edge_list_round_trip(n in 1usize..80, seed in any::<u64>()) {
        let t = FiniteTree::random(n, seed).unwrap();
        prop_assert!((1..n).all(|i| t.parent(i).unwrap() < i));
        prop_assert_eq!(FiniteTree::parse_edge_list(&t.to_edge_list()).unwrap(), t);
    }
}

#[test]
fn relabeling_is_bit_exact() {
    let opts = GammaOptions { seed: 4, ..GammaOptions::default() };
    for seed in 0..4u64 {
        let tree = FiniteTree::random(70, seed).unwrap();
        let n = tree.len();
        let (f, w) = random_pair(n, seed + 100);
        let (a, ga) = abstract_weak_type_check(&tree, &w, &f, Exponent::from(2), 1.0 / 3.0, &opts).unwrap();
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let t2 = tree.relabel(&perm).unwrap();
        let (mut f2, mut w2) = (vec![0.0; n], vec![0.0; n]);
        for v in 0..n {
            f2[perm[v]] = f[v];
            w2[perm[v]] = w[v];
        }
        let (b, gb) = abstract_weak_type_check(&t2, &w2, &f2, Exponent::from(2), 1.0 / 3.0, &opts).unwrap();
        assert_eq!(ga.value.to_bits(), gb.value.to_bits());
        assert_eq!(a.ratio.to_bits(), b.ratio.to_bits());
    }
}

#[test]
fn weak_type_ratio_is_scale_invariant() {
    let tree = FiniteTree::kary(2, 5).unwrap();
    let (f, w) = random_pair(tree.len(), 8);
    let opts = GammaOptions::default();
    let (a, _) = abstract_weak_type_check(&tree, &w, &f, Exponent::from(2), 1.0 / 3.0, &opts).unwrap();
    // A power of two keeps every float operation exact up to scaling.
    let w2: Vec<f64> = w.iter().map(|v| v * 8.0).collect();
    let (b, _) = abstract_weak_type_check(&tree, &w2, &f, Exponent::from(2), 1.0 / 3.0, &opts).unwrap();
    assert!((a.ratio - b.ratio).abs() <= 1e-9 * a.ratio);
    let w3: Vec<f64> = w.iter().map(|v| v * 0.37).collect();
    let (c, _) = abstract_weak_type_check(&tree, &w3, &f, Exponent::from(2), 1.0 / 3.0, &opts).unwrap();
    assert!((a.ratio - c.ratio).abs() <= 1e-6 * a.ratio);
}

#[test]
fn single_vertex_indicator_is_dominated() {
    let tree = FiniteTree::kary(2, 3).unwrap();
    let n = tree.len();
    let mut delta = vec![0.0; n];
    delta[5] = 1.0;
    let (res, gamma) = abstract_weak_type_check(&tree, &delta, &delta, Exponent::from(2), 1.0 / 3.0, &GammaOptions::default()).unwrap();
    assert!(res.ratio <= 1.0);
    assert!(gamma.value >= 1.0);
}

#[test]
fn gamma_is_finite_across_alpha() {
    let tree = FiniteTree::kary(2, 5).unwrap();
    let w = vec![1.0; tree.len()];
    let g: Vec<f64> = [0.1, 1.0 / 3.0, 0.45]
        .iter()
        .map(|&a| gamma_constant(&tree, &w, Exponent::from(2), a, &GammaOptions::default()).unwrap().value)
        .collect();
    assert!(g.iter().all(|v| v.is_finite() && *v > 0.0));
}
