use proptest::prelude::*;
use varinc_core::transforms::{apply_sequence, canonical_sequences};
use varinc_core::{
    bundled, canonicalize, parse_formula, BaseProfile, Formula, FragmentSpec, Logic, MatrixClass,
    Substitution, VISequence,
};

fn formula(vars: &'static [&'static str]) -> impl Strategy<Value = Formula> {
    let leaf = proptest::sample::select(vars).prop_map(Formula::var);
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Formula::app("not", vec![a])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::app("and", vec![a, b])),
            (inner.clone(), inner).prop_map(|(a, b)| Formula::app("or", vec![a, b])),
        ]
    })
}

fn word() -> impl Strategy<Value = VISequence> {
    proptest::collection::vec(proptest::bool::ANY, 0..6).prop_map(|steps| {
        let w: String = steps.iter().map(|&l| if l { 'l' } else { 'r' }).collect();
        w.parse().unwrap()
    })
}

fn cl() -> Logic {
    Logic::from_matrices("CL", MatrixClass::single(bundled::b2_matrix()))
}

const XYZ: &[&str] = &["x", "y", "z"];

proptest! {
    #[test]
    fn printing_round_trips(f in formula(XYZ)) {
        let back = parse_formula(&f.to_string(), &bundled::classical_signature()).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn variables_of_a_substitution_instance(
        f in formula(XYZ),
        a in formula(&["u", "v"]),
        b in formula(&["v", "w"]),
    ) {
        let sigma = Substitution::new().with("x", a.clone()).with("y", b.clone());
        let mut expected = std::collections::BTreeSet::new();
        for v in f.vars() {
            match &*v {
                "x" => expected.extend(a.vars()),
                "y" => expected.extend(b.vars()),
                _ => { expected.insert(v.clone()); }
            }
        }
        prop_assert_eq!(f.substitute(&sigma).vars(), expected.into_iter().collect());
    }

    #[test]
    fn words_agree_with_their_normal_form(
        seq in word(),
        premises in proptest::collection::vec(formula(XYZ), 0..3),
        conclusion in formula(XYZ),
    ) {
        let base = cl();
        let profile = BaseProfile::of(&base, &FragmentSpec::new(&["x"], 2, 0).unwrap()).unwrap();
        let canonical = canonicalize(&seq, profile);
        prop_assert!(canonical_sequences(profile).contains(&canonical));
        prop_assert_eq!(
            apply_sequence(&base, &seq).entails(&premises, &conclusion),
            apply_sequence(&base, &canonical).entails(&premises, &conclusion),
            "{} vs {}", seq, canonical
        );
    }

    #[test]
    fn derived_logics_are_monotone(
        seq in word(),
        premises in proptest::collection::vec(formula(XYZ), 0..3),
        extra in formula(&["x", "y", "z", "w"]),
        conclusion in formula(XYZ),
    ) {
        let logic = apply_sequence(&cl(), &seq);
        if logic.entails(&premises, &conclusion) {
            let mut more = premises.clone();
            more.push(extra);
            prop_assert!(logic.entails(&more, &conclusion));
        }
    }
}
