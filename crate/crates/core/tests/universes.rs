use std::collections::BTreeSet;

use prdesc_core::universes::{
    closure, equiv, normalize, normalize_best_effort, replay, rewrite_instances, rules_of, Caps, EquivConfig,
    EquivVerdict, Mode, NotEqualReason, RuleId, RuleOptions,
};
use prdesc_core::{eval, fingerprint, mk_identity, parse, Budget, Term, Tuple, Universe};

fn t(s: &str) -> Term {
    parse(s).unwrap()
}

fn names(u: Universe) -> BTreeSet<&'static str> {
    rules_of(u).into_iter().map(|r| r.name).collect()
}

#[test]
fn rule_sets() {
    assert_eq!(names(Universe::C), BTreeSet::from(["assoc-comp"]));
    let cat: BTreeSet<_> = names(Universe::C).union(&names(Universe::I)).copied().collect();
    assert_eq!(names(Universe::Cat), cat);
    assert_eq!(names(Universe::CatX).len(), names(Universe::Cat).len() + 5);
    assert!(names(Universe::Desc).is_empty() && names(Universe::Func).is_empty());
    let gated = Universe::CatN.rules(RuleOptions { parametric_nno: true });
    assert!(gated.contains(&RuleId::NnoComposition));
    assert!(!Universe::CatN.rules(RuleOptions::default()).contains(&RuleId::NnoComposition));
}

#[test]
fn rewrite_examples() {
    let steps = rewrite_instances(&t("(comp s (comp s z))"), Universe::C, Mode::Oriented);
    assert_eq!(steps.len(), 1);
    assert_eq!(steps[0].result, t("(comp (comp s s) z)"));
    for u in Universe::ALL {
        assert!(rewrite_instances(&t("z"), u, Mode::Oriented).is_empty());
    }
    // read backwards, identity elimination applies to a leaf
    let grown = rewrite_instances(&t("z"), Universe::I, Mode::Both);
    assert!(grown.iter().any(|s| s.result == t("(comp z (pi 1 1))")));
    let with_id = Term::comp(mk_identity(1).unwrap(), Term::succ()).unwrap();
    let results: Vec<Term> = rewrite_instances(&with_id, Universe::I, Mode::Both)
        .into_iter()
        .map(|s| s.result)
        .collect();
    assert!(results.contains(&Term::succ()));
}

#[test]
fn normal_form_examples() {
    assert_eq!(normalize(&t("(comp s (comp s z))"), Universe::C).unwrap(), t("(comp (comp s s) z)"));
    assert_eq!(normalize(&t("(comp (id 1) (comp s (id 1)))"), Universe::I).unwrap(), t("s"));
    assert_eq!(
        normalize_best_effort(&t("(comp (pair s z) s)")),
        t("(pair (comp s s) (comp z s))")
    );
    let twice = t("(comp (tw 1 1) (tw 1 1))");
    assert_eq!(
        fingerprint(&twice, 4, Budget::default()),
        fingerprint(&t("(id 2)"), 4, Budget::default())
    );
}

#[test]
fn closure_examples() {
    let z_id = t("(comp z (pi 1 1))");
    assert!(closure(&t("z"), Universe::Cat, 6, 100).contains(&z_id));
    let c = closure(&t("s"), Universe::Desc, 10, 10);
    assert_eq!(c.terms(), [t("s")]);
    let chain = closure(&t("(comp s (comp s s))"), Universe::C, 7, 100);
    assert_eq!(chain.len(), 2);
    assert!(chain.complete);
}

#[test]
fn equiv_examples() {
    let cfg = EquivConfig::default();
    let (a, b) = (t("(comp s (comp s z))"), t("(comp (comp s s) z)"));
    let v = equiv(&a, &b, Universe::C, &cfg).unwrap();
    let EquivVerdict::Equal { witness, approximate } = v else { panic!("{v:?}") };
    assert!(!approximate);
    assert_eq!(replay(&a, &witness, &Universe::C.rules(cfg.rules)).unwrap(), b);

    let v = equiv(&t("s"), &t("z"), Universe::Func, &cfg).unwrap();
    let EquivVerdict::NotEqual { reason: NotEqualReason::FingerprintMismatch { input, left, right } } = v else {
        panic!("{v:?}")
    };
    assert_eq!((input, left, right), (Tuple::from_u64s(&[0]), Tuple::from_u64s(&[1]), Tuple::from_u64s(&[0])));

    // f ♯ π_b of a+b equals f ∘ π_a of a+1
    let rec = t("(rec (pi 1 1) (pi 2 2))");
    let proj = t("(comp (pi 1 1) (pi 2 1))");
    let v = equiv(&rec, &proj, Universe::CatN, &cfg).unwrap();
    let EquivVerdict::Equal { witness, .. } = v else { panic!("{v:?}") };
    assert_eq!(replay(&rec, &witness, &Universe::CatN.rules(cfg.rules)).unwrap(), proj);
    assert!(!equiv(&rec, &proj, Universe::Cat, &cfg).unwrap().is_equal());

    assert!(equiv(&t("s"), &t("(pi 2 1)"), Universe::C, &cfg).is_err());
}

#[test]
fn tight_caps_give_unknown() {
    let tight = EquivConfig {
        caps: Caps { size: 1, count: 1 },
        ..EquivConfig::default()
    };
    let (rec, proj) = (t("(rec (pi 1 1) (pi 2 2))"), t("(comp (pi 1 1) (pi 2 1))"));
    assert_eq!(equiv(&rec, &proj, Universe::CatN, &tight).unwrap().name(), "unknown");
    assert!(equiv(&rec, &proj, Universe::CatN, &EquivConfig::default()).unwrap().is_equal());
    // equal as functions, but the bracket needs projection laws CatN lacks
    let a = t("(comp (rec (pi 1 1) (comp s (pi 2 2))) (pair (pi 1 1) z))");
    assert_eq!(eval(&a, &Tuple::from_u64s(&[9]), Budget::default()).unwrap(), Tuple::from_u64s(&[9]));
    assert_eq!(equiv(&a, &t("(pi 1 1)"), Universe::CatN, &tight).unwrap().name(), "unknown");
}
