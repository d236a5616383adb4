//! Invariants of the quadratic space, the tree and the double coset classifier.

use std::collections::{BTreeMap, VecDeque};

use proptest::prelude::*;

use theta_local::double_coset::{classify_double_coset, hx_generators_mod, support_set, CosetRep};
use theta_local::mat2::ProjMat;
use theta_local::oracle::orbit_closure;
use theta_local::padic::{Prime, ValuedRational};
use theta_local::quadspace::{
    act, classify, in_lattice, q_value, standard_rep, CaseClass, CaseKind, Classification, TracelessMat,
};
use theta_local::tree::{
    canonicalize, dist_to_apartment, distance, neighbors, representatives_up_to, TreeVertex,
};

fn odd_prime() -> impl Strategy<Value = Prime> {
    prop::sample::select(vec![3u64, 5, 7]).prop_map(|p| Prime::new(p).unwrap())
}

fn rational() -> impl Strategy<Value = ValuedRational> {
    (-60i64..=60, prop::sample::select(vec![1i64, 2, 3, 5, 9, 25, 27, 7]))
        .prop_map(|(n, d)| ValuedRational::new(n, d))
}

fn proj_mat() -> impl Strategy<Value = ProjMat> {
    (rational(), rational(), rational(), rational())
        .prop_filter_map("singular", |(a, b, c, d)| ProjMat::from_entries(a, b, c, d).ok())
}

fn traceless() -> impl Strategy<Value = TracelessMat> {
    (rational(), rational(), rational()).prop_map(|(a, b, c)| TracelessMat::new(a, b, c))
}

/// An element of `GL_2(Z_p)` with small integer entries.
fn unimodular(p: Prime) -> impl Strategy<Value = ProjMat> {
    (-30i64..=30, -30i64..=30, -30i64..=30, -30i64..=30).prop_filter_map("det not a unit", move |(a, b, c, d)| {
        let det = a * d - b * c;
        (det % p.get() as i64 != 0).then(|| ProjMat::from_entries(a, b, c, d).unwrap())
    })
}

fn with_prime<S: Strategy>(f: impl Fn(Prime) -> S + Clone) -> impl Strategy<Value = (Prime, S::Value)> {
    odd_prime().prop_flat_map(move |p| (Just(p), f(p)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn q_is_invariant_under_conjugation(h in proj_mat(), x in traceless()) {
        prop_assert_eq!(q_value(&act(&h, &x)), q_value(&x));
    }

    #[test]
    fn classify_is_invariant_under_conjugation(p in odd_prime(), h in proj_mat(), x in traceless()) {
        let before = classify(&x, p);
        let after = classify(&act(&h, &x), p);
        prop_assert_eq!(before, after);
    }

    #[test]
    fn lattice_membership_is_k_invariant((p, k) in with_prime(unimodular), x in traceless()) {
        prop_assert_eq!(in_lattice(&act(&k, &x), p), in_lattice(&x, p));
    }

    #[test]
    fn canonicalize_ignores_right_k((p, k) in with_prime(unimodular), g in proj_mat()) {
        prop_assert_eq!(canonicalize(&(&g * &k), p), canonicalize(&g, p));
    }

    #[test]
    fn double_coset_is_bi_invariant(
        (p, k) in with_prime(unimodular),
        g in proj_mat(),
        kind in prop::sample::select(CaseKind::ALL.to_vec()),
        pick in any::<prop::sample::Index>(),
    ) {
        let alpha = if kind == CaseKind::Ramified { 1 } else { 0 };
        let c = CaseClass::with_default_unit(kind, alpha, p).unwrap();
        let gens = hx_generators_mod(&c, p, 1);
        let t = pick.get(&gens);
        let moved = &(t * &g) * &k;
        prop_assert_eq!(classify_double_coset(&moved, &c, p), classify_double_coset(&g, &c, p));
    }
}

#[test]
fn standard_reps_classify_back() {
    for p in [3, 5, 7].map(|p| Prime::new(p).unwrap()) {
        for kind in CaseKind::ALL {
            for alpha in (0..=6).filter(|&a| kind.admits_alpha(a)) {
                let c = CaseClass::with_default_unit(kind, alpha, p).unwrap();
                let Classification::Case(back) = classify(&standard_rep(&c, p), p).unwrap() else {
                    panic!("normal form is not anisotropic or split")
                };
                assert_eq!((back.kind(), back.alpha()), (kind, alpha));
            }
        }
    }
}

fn bfs_distances(p: Prime, radius: u32) -> BTreeMap<TreeVertex, BTreeMap<TreeVertex, u32>> {
    let ball = representatives_up_to(p, radius);
    let mut out = BTreeMap::new();
    for v in &ball {
        let mut dist = BTreeMap::from([(v.clone(), 0u32)]);
        let mut queue = VecDeque::from([v.clone()]);
        while let Some(w) = queue.pop_front() {
            let dw = dist[&w];
            if dw == 2 * radius {
                continue;
            }
            for x in neighbors(&w, p) {
                dist.entry(x.clone()).or_insert_with(|| {
                    queue.push_back(x.clone());
                    dw + 1
                });
            }
        }
        out.insert(v.clone(), dist);
    }
    out
}

#[test]
fn distance_equals_path_length() {
    for p in [2, 3].map(|p| Prime::allowing_two(p).unwrap()) {
        let table = bfs_distances(p, 3);
        let ball = representatives_up_to(p, 3);
        for a in &ball {
            for b in &ball {
                assert_eq!(distance(a, b, p), table[a][b], "{a:?} {b:?}");
            }
        }
    }
}

#[test]
fn support_set_is_sharp() {
    for p in [3, 5].map(|p| Prime::new(p).unwrap()) {
        for kind in CaseKind::ALL {
            for alpha in (0..=5).filter(|&a| kind.admits_alpha(a)) {
                let c = CaseClass::with_default_unit(kind, alpha, p).unwrap();
                let x = standard_rep(&c, p);
                let reps = support_set(&c, p);
                for rep in &reps {
                    assert!(in_lattice(&act(&rep.matrix().inverse(), &x), p));
                }
                let next = reps.last().map_or(1, |r| r.d() + 1);
                let beyond = CosetRep::new(kind, next, p).unwrap();
                assert!(!in_lattice(&act(&beyond.matrix().inverse(), &x), p), "{kind} {alpha}");
            }
        }
    }
}

#[test]
fn split_orbits_are_apartment_shells() {
    let p = Prime::new(3).unwrap();
    let c = CaseClass::with_default_unit(CaseKind::Split, 0, p).unwrap();
    let gens = hx_generators_mod(&c, p, 4);
    let ball = representatives_up_to(p, 4);
    for d in 0..=2 {
        let start = canonicalize(CosetRep::new(CaseKind::Split, d, p).unwrap().matrix(), p);
        let orbit = orbit_closure(&gens, &start, 4, p).unwrap().orbit;
        let shell: std::collections::BTreeSet<_> =
            ball.iter().filter(|v| dist_to_apartment(v, p) == d).cloned().collect();
        assert_eq!(orbit, shell, "d = {d}");
    }
}
