use proptest::prelude::*;

use quadline::algebra::{
    abelianization, normalize_presentation, presentation_to_text, tietze_eliminate, tietze_introduce, GeneratorLabel,
    Presentation, Word,
};
use quadline::geometry::{build_family, compute_events, FamilyTag};
use quadline::sweep::{run_sweep, SweepOptions};
use quadline::verify::{check_trace_invariants, count_homs_finite, FiniteGroup};

const GENS: usize = 3;

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((0..GENS, any::<bool>()), 0..=max_len).prop_map(Word::from_letters)
}

fn presentation_strategy() -> impl Strategy<Value = Presentation> {
    prop::collection::vec(word_strategy(6), 0..=3)
        .prop_map(|rels| Presentation::with_names(&["a", "b", "c"], rels).expect("fixed names"))
}

fn is_freely_reduced(w: &Word) -> bool {
    w.runs().iter().all(|&(_, e)| e != 0) && w.runs().windows(2).all(|p| p[0].0 != p[1].0)
}

fn rotate_letters(w: &Word, k: usize) -> Word {
    let l = w.letters();
    if l.is_empty() {
        return w.clone();
    }
    let k = k % l.len();
    Word::from_letters(l[k..].iter().chain(&l[..k]).copied())
}

proptest! {
    #[test]
    fn words_are_freely_reduced(a in word_strategy(12), b in word_strategy(12)) {
        prop_assert!(is_freely_reduced(&a));
        prop_assert!(is_freely_reduced(&(&a * &b)));
        prop_assert!((&a * &a.inverse()).is_empty());
        prop_assert_eq!(a.inverse().inverse(), a);
    }

    #[test]
    fn multiplication_is_associative(a in word_strategy(8), b in word_strategy(8), c in word_strategy(8)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
    }

    #[test]
    fn cyclic_class_is_conjugation_invariant(w in word_strategy(10), u in word_strategy(6), k in 0usize..20) {
        let c = w.canonical_cyclic();
        prop_assert_eq!(rotate_letters(&w, k).canonical_cyclic(), c.clone());
        prop_assert_eq!(w.inverse().canonical_cyclic(), c.clone());
        prop_assert_eq!(Word::conjugate(&w, &u).canonical_cyclic(), c);
    }

    #[test]
    fn normalize_is_idempotent_and_rotation_invariant(p in presentation_strategy(), k in 0usize..20) {
        let n = normalize_presentation(&p);
        prop_assert_eq!(presentation_to_text(&normalize_presentation(&n)), presentation_to_text(&n));
        let rotated: Vec<Word> = p
            .relators()
            .iter()
            .enumerate()
            .map(|(i, r)| if i % 2 == 0 { rotate_letters(r, k) } else { r.inverse() })
            .collect();
        let q = Presentation::with_names(&["a", "b", "c"], rotated).unwrap();
        prop_assert_eq!(presentation_to_text(&normalize_presentation(&q)), presentation_to_text(&n));
    }

    #[test]
    fn tietze_introduction_preserves_invariants(p in presentation_strategy(), def in word_strategy(5)) {
        let q = tietze_introduce(&p, GeneratorLabel::plain("d"), &def).unwrap();
        prop_assert_eq!(abelianization(&q), abelianization(&p));
        let s3 = FiniteGroup::symmetric(3);
        prop_assert_eq!(count_homs_finite(&q, &s3), count_homs_finite(&p, &s3));
        let back = tietze_eliminate(&q, GENS, q.relators().len() - 1).unwrap();
        prop_assert_eq!(
            presentation_to_text(&normalize_presentation(&back)),
            presentation_to_text(&normalize_presentation(&p))
        );
    }

    #[test]
    fn adding_a_consequence_preserves_invariants(p in presentation_strategy(), u in word_strategy(4)) {
        prop_assume!(!p.relators().is_empty());
        let mut q = p.clone();
        let r = &p.relators()[0];
        q.add_relator(&Word::conjugate(r, &u) * &r.inverse()).unwrap();
        prop_assert_eq!(abelianization(&q), abelianization(&p));
        let s3 = FiniteGroup::symmetric(3);
        prop_assert_eq!(count_homs_finite(&q, &s3), count_homs_finite(&p, &s3));
    }
}

fn family_strategy() -> impl Strategy<Value = (FamilyTag, usize)> {
    prop_oneof![
        (1usize..=4).prop_map(|n| (FamilyTag::A, n)),
        (0usize..=3).prop_map(|n| (FamilyTag::B, n)),
        (1usize..=3).prop_map(|n| (FamilyTag::C, n)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn sweeps_satisfy_transport_invariants((family, n) in family_strategy()) {
        let arr = build_family(family, n, None).unwrap();
        let events = compute_events(&arr).unwrap();
        let r = run_sweep(&arr, SweepOptions { ignore_last_fiber: false, half_twist: true }).unwrap();
        let v = check_trace_invariants(&events, &r, true);
        prop_assert!(v.is_empty(), "{:?} {}: {:?}", family, n, v);
    }

    #[test]
    fn sweeps_are_deterministic((family, n) in family_strategy(), ignore in any::<bool>()) {
        let arr = build_family(family, n, None).unwrap();
        let opts = SweepOptions { ignore_last_fiber: ignore, half_twist: true };
        let a = run_sweep(&arr, opts).unwrap();
        let b = run_sweep(&arr, opts).unwrap();
        prop_assert_eq!(presentation_to_text(&a.presentation), presentation_to_text(&b.presentation));
        prop_assert_eq!(a.labels, b.labels);
        prop_assert_eq!(a.trace, b.trace);
    }
}

#[test]
fn tangent_family_event_count_matches_fiber_types() {
    for n in 1..=5 {
        let events = compute_events(&build_family(FamilyTag::A, n, None).unwrap()).unwrap();
        assert_eq!(events.len(), 2 + n + n * (n - 1) / 2, "n = {n}");
    }
}
