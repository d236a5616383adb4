//! Invariants of the matching functions.

use proptest::prelude::*;

use theta_local::double_coset::{hx_generators_mod, stabilizer_index_formula, MeasureSpec};
use theta_local::mat2::ProjMat;
use theta_local::matching::{
    build_xi_closed_form, build_xi_general, build_xi_general_with, evaluate_xi, matching_sides,
    verify_matching_at, MatchingDatum,
};
use theta_local::padic::{Prime, ValuedRational};
use theta_local::quadspace::{standard_rep, CaseClass, CaseKind};
use theta_local::tree::representatives_up_to;

fn case(kind: CaseKind, alpha: u32, p: Prime) -> CaseClass {
    CaseClass::with_default_unit(kind, alpha, p).unwrap()
}

fn datum(kind: CaseKind, alpha: u32, p: Prime) -> MatchingDatum {
    build_xi_general(&standard_rep(&case(kind, alpha, p), p), p).unwrap()
}

fn instance() -> impl Strategy<Value = (Prime, CaseKind, u32)> {
    (
        prop::sample::select(vec![3u64, 5]),
        prop::sample::select(CaseKind::ALL.to_vec()),
        0u32..=4,
    )
        .prop_filter_map("alpha parity", |(p, kind, alpha)| {
            kind.admits_alpha(alpha).then(|| (Prime::new(p).unwrap(), kind, alpha))
        })
}

fn unimodular() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (-20i64..=20, -20i64..=20, -20i64..=20, -20i64..=20)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn identity_survives_left_torus_translation(
        (p, kind, alpha) in instance(),
        vertex in any::<prop::sample::Index>(),
        elem in any::<prop::sample::Index>(),
    ) {
        let md = datum(kind, alpha, p);
        let vertices = representatives_up_to(p, 3);
        let h = vertex.get(&vertices).matrix(p);
        let gens = hx_generators_mod(md.xi.case(), p, 2);
        let t = elem.get(&gens);
        prop_assert!(verify_matching_at(&md, &h, p));
        prop_assert!(verify_matching_at(&md, &(t * &h), p));
    }

    #[test]
    fn xi_is_right_k_invariant((p, kind, alpha) in instance(), k in unimodular()) {
        let (a, b, c, d) = k;
        prop_assume!((a * d - b * c) % p.get() as i64 != 0);
        let k = ProjMat::from_entries(a, b, c, d).unwrap();
        let md = datum(kind, alpha, p);
        for (coeff, rep) in md.xi.terms() {
            prop_assert_eq!(&evaluate_xi(&md.xi, &(rep.matrix() * &k)), coeff);
        }
    }
}

#[test]
fn compact_closed_forms_agree_with_the_recipe() {
    for p in [3, 5, 7].map(|p| Prime::new(p).unwrap()) {
        for kind in [CaseKind::Inert, CaseKind::Ramified] {
            for alpha in (0..=5).filter(|&a| kind.admits_alpha(a)) {
                let c = case(kind, alpha, p);
                assert_eq!(datum(kind, alpha, p).xi, build_xi_closed_form(&c, p), "{kind} {alpha}");
            }
        }
    }
}

/// The split recipe differs from the unit coefficients of the closed form by
/// exactly the index of `H_x ∩ δ_d K δ_d^{-1}` in `H_x ∩ K`.
#[test]
fn split_recipe_carries_the_stabilizer_index() {
    for p in [3, 5, 7].map(|p| Prime::new(p).unwrap()) {
        for alpha in [0, 2, 4] {
            let c = case(CaseKind::Split, alpha, p);
            let recipe = datum(CaseKind::Split, alpha, p).xi;
            let closed = build_xi_closed_form(&c, p);
            assert_eq!(recipe.terms().len(), closed.terms().len());
            for (d, (coeff, _)) in closed.terms().iter().enumerate() {
                let index = stabilizer_index_formula(CaseKind::Split, d as u32, p).unwrap();
                assert_eq!(recipe.coefficient(d as u32), coeff * &ValuedRational::from(index));
            }
        }
    }
}

#[test]
fn doubling_the_torus_measure_halves_coefficients() {
    let half = ValuedRational::new(1, 2);
    for p in [3, 5].map(|p| Prime::new(p).unwrap()) {
        let measure = MeasureSpec::default().with_torus_scaled(&ValuedRational::from(2));
        for kind in CaseKind::ALL {
            for alpha in (0..=4).filter(|&a| kind.admits_alpha(a)) {
                let x = standard_rep(&case(kind, alpha, p), p);
                let base = build_xi_general(&x, p).unwrap();
                let scaled = build_xi_general_with(&x, p, &measure).unwrap();
                for ((c1, r1), (c2, r2)) in base.xi.terms().iter().zip(scaled.xi.terms()) {
                    assert_eq!(r1, r2);
                    assert_eq!(c2, &(c1 * &half));
                }
                for v in representatives_up_to(p, 3) {
                    let h = v.matrix(p);
                    assert_eq!(matching_sides(&base, &h, p), matching_sides(&scaled, &h, p));
                }
            }
        }
    }
}

#[test]
fn translated_representatives_give_the_same_function() {
    let p = Prime::new(3).unwrap();
    for kind in CaseKind::ALL {
        let alpha = if kind == CaseKind::Ramified { 3 } else { 4 };
        let md = datum(kind, alpha, p);
        let gens = hx_generators_mod(md.xi.case(), p, 1);
        let moved = md.xi.with_translated_reps(&gens[1..]);
        let md2 = MatchingDatum { xi: moved, ..md.clone() };
        for v in representatives_up_to(p, 3) {
            let h = v.matrix(p);
            assert!(verify_matching_at(&md2, &h, p), "{kind} {v:?}");
        }
    }
}
