//! Operator invariants: sandwich between ball and sphere maximal functions,
//! agreement of the two engines, monotonicity, homogeneity, and enclosure
//! soundness.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use treehl_core::operators::{
    ball_maximal, maximal, maximal_enumerated, radial_maximal, radial_maximal_at, sphere_average,
    sphere_average_enumerated, spherical_maximal, MaximalKind, DEFAULT_ENUMERATION_CAP,
};
use treehl_core::tree::truncation;
use treehl_core::{Exact, OperatorConfig, PointFunction, RadialProfile, Scalar, Tail, TreeParams, VertexId, Weight};

fn params(k: u32) -> TreeParams {
    TreeParams::new(k).unwrap()
}

fn rat(n: i64, d: i64) -> Exact {
    BigRational::new(n.into(), d.into())
}

fn random_vertex(rng: &mut ChaCha8Rng, k: u32, max_depth: usize) -> VertexId {
    let d = rng.gen_range(0..=max_depth);
    VertexId::new((0..d).map(|_| rng.gen_range(0..k)).collect(), &params(k)).unwrap()
}

fn random_function(rng: &mut ChaCha8Rng, k: u32, max_depth: usize) -> PointFunction<Exact> {
    let n = rng.gen_range(1..=6);
    let entries = (0..n).map(|_| (random_vertex(rng, k, max_depth), rat(rng.gen_range(1..=20), rng.gen_range(1..=7))));
    PointFunction::from_entries(params(k), entries).unwrap()
}

#[test]
fn sandwich_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let ks = [2u32, 3, 5];
    let windows: Vec<Vec<VertexId>> = ks.iter().map(|&k| truncation(5, &params(k))).collect();
    let two = Exact::from_u64(2);
    for trial in 0..200 {
        let idx = trial % 3;
        let k = ks[idx];
        let f = random_function(&mut rng, k, 7);
        for x in &windows[idx] {
            let m = ball_maximal(&f, x);
            let mc = spherical_maximal(&f, x);
            assert!(m <= mc, "k={k} x={x}");
            assert!(mc <= two.clone() * m, "k={k} x={x}");
        }
    }
}

#[test]
fn point_engine_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in [2u32, 3] {
        for _ in 0..15 {
            let f = random_function(&mut rng, k, 4);
            for x in truncation(3, &params(k)) {
                for kind in [MaximalKind::Sphere, MaximalKind::Ball] {
                    assert_eq!(maximal(&f, &x, kind), maximal_enumerated(&f, &x, kind, DEFAULT_ENUMERATION_CAP).unwrap());
                }
                let w: Weight<Exact> = f.clone().into();
                for r in 0..4 {
                    assert_eq!(
                        sphere_average(&w, &x, r, &params(k)),
                        sphere_average_enumerated(&w, &x, r, &params(k), DEFAULT_ENUMERATION_CAP).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn radial_engine_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for k in [2u32, 3] {
        for _ in 0..6 {
            let head: Vec<Exact> = (0..rng.gen_range(0..4)).map(|_| rat(rng.gen_range(0..9), rng.gen_range(1..5))).collect();
            let tail = Tail::Geometric { first: rat(rng.gen_range(0..9), 4), ratio: rat(rng.gen_range(0..7), 3) };
            let p: Weight<Exact> = RadialProfile::new(head, tail).unwrap().into();
            for j in 0..=6usize {
                let x = VertexId::new(vec![k - 1; j], &params(k)).unwrap();
                for r in 0..=6 {
                    let fast = sphere_average(&p, &x, r, &params(k));
                    let slow = sphere_average_enumerated(&p, &x, r, &params(k), DEFAULT_ENUMERATION_CAP).unwrap();
                    assert_eq!(fast, slow, "k={k} j={j} r={r}");
                }
            }
        }
    }
}

/// Independent oracle: count level-`i` vertices by the depth `a` of their
/// common ancestor with `x`, then sum the profile over each sphere.
fn oracle_sphere_average(c: &dyn Fn(usize) -> Exact, j: usize, r: usize, k: u32) -> Exact {
    let kb = |e: usize| Exact::from_biguint(&BigUint::from(k).pow(e as u32));
    let mut num = Exact::zero();
    let mut den = Exact::zero();
    for i in 0..=j + r {
        for a in 0..=i.min(j) {
            if j + i - 2 * a != r {
                continue;
            }
            let count = if a == j {
                kb(i - j)
            } else if a == i {
                Exact::one()
            } else {
                Exact::from_u64(k as u64 - 1) * kb(i - a - 1)
            };
            num += count.clone() * c(i);
            den += count;
        }
    }
    num / den
}

#[test]
fn counterexample_iterates_stay_comparable() {
    let k = 2;
    let w = RadialProfile::<Exact>::counterexample(&params(k));
    let cfg = OperatorConfig::default();
    let encl = radial_maximal(&w, 16, 2, MaximalKind::Sphere, &cfg, &params(k)).unwrap();
    // Oracle: the depth-40 truncated profile with the full sup over radii,
    // iterated twice by brute force over all radii that reach level 40.
    let depth = 40;
    let c0: Vec<Exact> = (0..=depth).map(|i| w.value(i)).collect();
    let apply = |c: &Vec<Exact>| -> Vec<Exact> {
        (0..=depth)
            .map(|j| {
                let f = |i: usize| if i <= depth { c[i].clone() } else { Exact::zero() };
                (0..=depth + j).map(|r| oracle_sphere_average(&f, j, r, k)).fold(Exact::zero(), Exact::max_of)
            })
            .collect()
    };
    let c1 = apply(&c0);
    let c2 = apply(&c1);
    for j in 0..=16 {
        let e = &encl[j];
        // The truncated oracle only drops mass, so it bounds from below.
        assert!(c2[j] <= *e.upper(), "j={j}");
        assert!(*e.lower() <= c2[j] || *e.lower() == w.value(j));
        assert!(e.upper().clone() / w.value(j) <= Exact::from_u64(4), "j={j}");
        assert_eq!(c1[j], w.value(j));
    }
}

#[test]
fn zero_tail_enclosures_are_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in [2u32, 3] {
        for _ in 0..5 {
            let head: Vec<Exact> = (0..rng.gen_range(1..4)).map(|_| rat(rng.gen_range(0..9), rng.gen_range(1..5))).collect();
            let h = head.len();
            let p = RadialProfile::new(head, Tail::Zero).unwrap();
            let f = p.materialize(h - 1, params(k)).unwrap();
            for kind in [MaximalKind::Sphere, MaximalKind::Ball] {
                for j in 0..=3usize {
                    let e = radial_maximal_at(&p, j, kind, 0, &params(k)).unwrap();
                    assert!(e.is_degenerate());
                    let x = VertexId::new(vec![0; j], &params(k)).unwrap();
                    assert_eq!(*e.lower(), maximal_enumerated(&f, &x, kind, DEFAULT_ENUMERATION_CAP).unwrap());
                }
            }
        }
    }
}

#[test]
fn radial_oracle_agreement() {
    let k = 3;
    let p = RadialProfile::new(vec![rat(1, 1), rat(0, 1), rat(5, 2)], Tail::Geometric { first: rat(1, 3), ratio: rat(2, 5) })
        .unwrap();
    for j in 0..10 {
        for r in 0..10 {
            let want = oracle_sphere_average(&|i| p.value(i), j, r, k);
            assert_eq!(treehl_core::operators::radial_sphere_average(&p, j, r, &params(k)), want);
        }
    }
}

fn small_function(k: u32) -> impl Strategy<Value = Vec<(Vec<u32>, u32, u32)>> {
    prop::collection::vec((prop::collection::vec(0..k, 0..=4), 0u32..12, 1u32..6), 1..6)
}

fn build(k: u32, raw: &[(Vec<u32>, u32, u32)]) -> PointFunction<Exact> {
    let mut f = PointFunction::new(params(k));
    for (p, n, d) in raw {
        let v = VertexId::new(p.clone(), &params(k)).unwrap();
        let cur = f.evaluate(&v);
        f.insert(v, cur + rat(*n as i64, *d as i64)).unwrap();
    }
    f
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monotone(raw in small_function(2), extra in small_function(2), path in prop::collection::vec(0u32..2, 0..=4)) {
        let f = build(2, &raw);
        let mut g = f.clone();
        for (p, n, d) in &extra {
            let v = VertexId::new(p.clone(), &params(2)).unwrap();
            let cur = g.evaluate(&v);
            g.insert(v, cur + rat(*n as i64, *d as i64)).unwrap();
        }
        let x = VertexId::new(path, &params(2)).unwrap();
        for kind in [MaximalKind::Sphere, MaximalKind::Ball] {
            prop_assert!(maximal(&f, &x, kind) <= maximal(&g, &x, kind));
        }
        let (fw, gw): (Weight<Exact>, Weight<Exact>) = (f.into(), g.into());
        for r in 0..6 {
            prop_assert!(sphere_average(&fw, &x, r, &params(2)) <= sphere_average(&gw, &x, r, &params(2)));
        }
    }

    #[test]
    fn homogeneous(raw in small_function(3), n in 0i64..10, d in 1i64..5, path in prop::collection::vec(0u32..3, 0..=3)) {
        let f = build(3, &raw);
        let c = rat(n, d);
        let cf = f.scale(&c).unwrap();
        let x = VertexId::new(path, &params(3)).unwrap();
        for kind in [MaximalKind::Sphere, MaximalKind::Ball] {
            prop_assert_eq!(maximal(&cf, &x, kind), c.clone() * maximal(&f, &x, kind));
        }
    }

    #[test]
    fn maximal_dominates_function(raw in small_function(2)) {
        let f = build(2, &raw);
        for (x, v) in f.support() {
            prop_assert!(maximal(&f, x, MaximalKind::Ball) >= *v);
            prop_assert!(maximal(&f, x, MaximalKind::Sphere) >= *v);
        }
    }
}
