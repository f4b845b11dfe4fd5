use std::cmp::Ordering;

use matsys::exactnum::{int, rat, Rat};
use matsys::ncpoly::{
    all_words, membership_report, normal_form, normal_form_traced, overlap_compositions, systems, truncated_buchberger,
    truncated_buchberger_with, Alphabet, GbError, GbOptions, NcPoly,
};
use proptest::prelude::*;

fn al() -> Alphabet {
    Alphabet::standard()
}

fn p(s: &str) -> NcPoly<Rat> {
    al().parse(s).unwrap()
}

fn ps(texts: &[&str]) -> Vec<NcPoly<Rat>> {
    texts.iter().map(|t| p(t)).collect()
}

#[test]
fn word_comparisons() {
    let a = al();
    let w = |s: &str| a.parse_word(s).unwrap();
    assert_eq!(a.compare(&w("b.a"), &w("a.b")), Ordering::Greater);
    assert_eq!(a.compare(&w("a.a.a.a"), &w("b.a.b")), Ordering::Greater);
    assert_eq!(a.compare(&w("a.b"), &w("u.u")), Ordering::Less);
}

#[test]
fn generator_reduces_itself() {
    let g = ps(&["a + b + c"]);
    assert!(normal_form(&al(), &p("a + b + c"), &g).is_zero());
}

#[test]
fn single_commutation_rule_is_already_complete() {
    let gb = truncated_buchberger(&al(), &ps(&["b.a - a.b"]), 6).unwrap();
    assert_eq!(gb.basis, ps(&["b.a - a.b"]));
    assert!(gb.complete_below_bound);
}

#[test]
fn non_homogeneous_generator_is_rejected_with_its_text() {
    let err = truncated_buchberger(&al(), &ps(&["a.b - c"]), 4).unwrap_err();
    match err {
        GbError::NonHomogeneous { poly } => assert!(poly.contains("a.b") && poly.contains('c')),
        other => panic!("unexpected {other:?}"),
    }
    assert!(matches!(truncated_buchberger(&al(), &ps(&["a.a.a"]), 2), Err(GbError::BoundTooSmall { .. })));
}

fn s4_reduces(targets: &[NcPoly<Rat>]) -> Vec<NcPoly<Rat>> {
    let a = al();
    let gb = truncated_buchberger(&a, &systems::s4(), 6).unwrap();
    assert!(gb.complete_below_bound);
    targets.iter().map(|t| gb.reduce(&a, t)).collect()
}

#[test]
fn zero_power_sum_system_relations_up_to_degree_five() {
    let rels = ps(&[
        "a + b + c",
        "a.b + b.a + 2*a.a + 2*b.b",
        "a.a.b - b.a.a",
        "2*a.a.a - a.a.b - b.a.b",
        "a.a.b.a + 1/2*a.a.a.a",
        "a.a.a.b + 1/2*a.a.a.a",
        "a.a.a.a.a",
    ]);
    for (t, r) in rels.iter().zip(s4_reduces(&rels)) {
        assert!(r.is_zero(), "{} left {}", al().format_rat(t), al().format_rat(&r));
    }
}

#[test]
fn zero_power_sum_system_degree_four_words() {
    let a = al();
    let mut targets = Vec::new();
    for w in all_words(&a, 2, 4) {
        let name = a.format_word(&w);
        let extra = match name.as_str() {
            "a.a.a.a" => continue,
            "b.b.b.b" => p("-a.a.a.a"),
            "a.b.a.b" | "b.a.b.a" => NcPoly::monomial(a.parse_word("a.a.a.a").unwrap(), rat(-5, 2)),
            _ => NcPoly::monomial(a.parse_word("a.a.a.a").unwrap(), rat(1, 2)),
        };
        targets.push(NcPoly::monomial(w, int(1)).add(&extra));
    }
    // 15 words besides a^4: b^4 = a^4, abab, baba, and 12 others at -a^4/2
    assert_eq!(targets.len(), 15);
    for (t, r) in targets.iter().zip(s4_reduces(&targets)) {
        assert!(r.is_zero(), "{} left {}", a.format_rat(t), a.format_rat(&r));
    }
}

#[test]
fn zero_power_sum_system_kills_degree_five() {
    let a = al();
    let words: Vec<NcPoly<Rat>> = all_words(&a, 2, 5).into_iter().map(|w| NcPoly::monomial(w, int(1))).collect();
    assert_eq!(words.len(), 32);
    assert!(s4_reduces(&words).iter().all(NcPoly::is_zero));
    // all three letters
    let words3: Vec<NcPoly<Rat>> = all_words(&a, 3, 5).into_iter().map(|w| NcPoly::monomial(w, int(1))).collect();
    assert!(s4_reduces(&words3).iter().all(NcPoly::is_zero));
}

#[test]
fn zero_power_sum_system_keeps_a_squared() {
    let r = s4_reduces(&ps(&["a.a"]));
    assert_eq!(r[0], p("a.a"));
}

#[test]
fn commuting_u_system_relations() {
    let targets = ps(&["a.a.b - b.a.a", "-b.a.b - a.a.b + 2*a.a.a - u.u.a", "6*a.a.a.a.a - 5*u.u.a.a.a + u.u.u.u.a"]);
    let (gb, rep) = membership_report(&al(), &targets, &systems::s2(), 6).unwrap();
    assert!(gb.complete_below_bound);
    for m in rep {
        assert!(m.reduces_to_zero, "{}", al().format_rat(&m.residual));
    }
}

#[test]
fn cube_equals_u_squared_system_commutator() {
    let a = al();
    let (_, rep) =
        membership_report(&a, &ps(&["a.b - b.a", "a.b.u - b.a.u", "a.b.u.u - b.a.u.u"]), &systems::s3(), 6).unwrap();
    // [a,b] itself is not in the homogeneous ideal; multiplied by u^2 it is
    assert!(!rep[0].reduces_to_zero);
    assert!(!rep[1].reduces_to_zero);
    assert!(rep[2].reduces_to_zero);
}

#[test]
fn u_v_systems_relations() {
    let targets = ps(&[
        "2*a.a + 2*b.b + a.b + b.a - u.u",
        "b.b.b.a - a.b.b.b - b.a.a.a + a.a.a.b",
        "b.a.a.a - a.a.a.b - a.a.b.b - a.b.a.b + b.b.a.a + b.a.b.a",
    ]);
    for gens in [systems::s21(), systems::s21_v_only()] {
        let (_, rep) = membership_report(&al(), &targets, &gens, 6).unwrap();
        assert!(rep.iter().all(|m| m.reduces_to_zero));
    }
}

#[test]
fn homogenized_cyclic_system_keeps_growing() {
    let a = al();
    for bound in 4..=8u32 {
        let gb = truncated_buchberger(&a, &systems::remark121(), bound).unwrap();
        let top = gb.element_count_by_degree.get(&bound).copied().unwrap_or(0);
        assert!(top > 0, "no new element at degree {bound}");
    }
}

#[test]
fn element_cap_marks_incomplete() {
    let gb =
        truncated_buchberger_with(&al(), &systems::remark121(), GbOptions { degree_bound: 8, max_elements: Some(10) })
            .unwrap();
    assert!(!gb.complete_below_bound);
}

#[test]
fn completed_bases_are_closed_under_compositions() {
    let a = al();
    for gens in [systems::s4(), systems::s2(), systems::s3(), systems::remark121()] {
        let gb = truncated_buchberger(&a, &gens, 6).unwrap();
        for comp in overlap_compositions(&a, &gb.basis, 6) {
            assert!(gb.reduce(&a, &comp.poly).is_zero());
        }
        // leading words pairwise non-divisible, elements monic and homogeneous
        for (i, f) in gb.basis.iter().enumerate() {
            assert_eq!(f.leading().unwrap().1, &int(1));
            assert!(f.is_homogeneous());
            for (j, g) in gb.basis.iter().enumerate() {
                if i != j {
                    assert!(f.leading_word().unwrap().find(g.leading_word().unwrap()).is_none());
                }
            }
        }
    }
}

fn arb_homogeneous(deg: usize) -> impl Strategy<Value = NcPoly<Rat>> {
    prop::collection::vec((prop::collection::vec(0u8..3, deg), -3i64..=3), 1..4).prop_map(|terms| {
        let a = Alphabet::standard();
        let mut poly = NcPoly::zero();
        for (letters, c) in terms {
            poly.add_term(a.word(&letters), int(c));
        }
        poly
    })
}

fn arb_poly() -> impl Strategy<Value = NcPoly<Rat>> {
    (1usize..=4).prop_flat_map(arb_homogeneous)
}

fn expand(alpha: &Alphabet, p: &NcPoly<Rat>, basis: &[NcPoly<Rat>]) -> bool {
    let (nf, trace) = normal_form_traced(alpha, p, basis);
    let mut sum = nf;
    for step in &trace {
        sum = sum.add(&basis[step.index].sandwich(&step.coeff, &step.left, &step.right));
    }
    &sum == p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent(target in arb_poly(), gens in prop::collection::vec(arb_homogeneous(2), 1..3)) {
        let a = Alphabet::standard();
        let gb = truncated_buchberger(&a, &gens, 4).unwrap();
        let once = gb.reduce(&a, &target);
        prop_assert_eq!(gb.reduce(&a, &once), once.clone());
        prop_assert_eq!(normal_form(&a, &once, &gb.basis), once);
    }

    #[test]
    fn reduction_differs_by_ideal_element(target in arb_poly(), gens in prop::collection::vec(arb_homogeneous(2), 1..3)) {
        let a = Alphabet::standard();
        let gb = truncated_buchberger(&a, &gens, 4).unwrap();
        prop_assert!(expand(&a, &target, &gb.basis));
    }

    #[test]
    fn random_bases_close_under_compositions(gens in prop::collection::vec(arb_homogeneous(2), 1..3)) {
        let a = Alphabet::standard();
        let gb = truncated_buchberger(&a, &gens, 5).unwrap();
        for comp in overlap_compositions(&a, &gb.basis, 5) {
            prop_assert!(gb.reduce(&a, &comp.poly).is_zero());
        }
        for g in &gens {
            prop_assert!(gb.reduce(&a, g).is_zero());
        }
    }
}
