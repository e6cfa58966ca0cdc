mod common;

use phi_hilfer::expr::{self, Bindings, EvalErrorKind, Expression, ParseErrorKind, Scope};
use phi_hilfer::phi::PhiFunction;
use proptest::prelude::*;
use std::collections::HashMap;

fn corpus() -> Vec<String> {
    include_str!("fixtures/expr_corpus.txt").lines().filter(|l| !l.trim().is_empty()).map(String::from).collect()
}

fn value(text: &str) -> f64 {
    let e = expr::parse(text, &["t", "u"]).unwrap();
    let phi = PhiFunction::Identity;
    e.eval(&Bindings { t: Some(0.3), u: Some(-0.7), phi: Some(&phi) }).unwrap()
}

#[test]
fn corpus_round_trips() {
    let corpus = corpus();
    assert!(corpus.len() >= 40);
    for text in corpus {
        let e = expr::parse(&text, &["t", "u"]).unwrap_or_else(|err| panic!("{text}: {err}"));
        let printed = e.to_string();
        let again = expr::parse(&printed, &["t", "u"]).unwrap();
        assert_eq!(e.root(), again.root(), "{text} -> {printed}");
        assert_eq!(printed, again.to_string());
    }
}

#[test]
fn evaluation_examples() {
    assert_eq!(value("1+2*3"), 7.0);
    assert_eq!(value("sin(0)"), 0.0);
    assert_eq!(value("2+3*4^2"), 50.0);
    assert_eq!(value("-2^2"), -4.0);
    assert_eq!(value("2^3^2"), 512.0);
    assert_eq!(value("exp(0)"), 1.0);
    assert!((value("gamma(0.5)") - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    let e = expr::parse("t*u", &["t", "u"]).unwrap();
    assert_eq!(expr::eval(&e, &HashMap::from([("t", 2.0), ("u", 3.0)])).unwrap(), 6.0);
}

#[test]
fn reference_rhs_at_kernel_origin() {
    let e = Expression::parse(common::RHS_TEXT, Scope::RHS).unwrap();
    let phi = PhiFunction::Identity;
    assert_eq!(e.eval(&Bindings::tu(0.0, 0.0, &phi)).unwrap(), 0.0);
}

#[test]
fn reference_rhs_matches_closure() {
    let e = Expression::parse(common::RHS_TEXT, Scope::RHS).unwrap();
    let phi = PhiFunction::Identity;
    for i in 0..10 {
        for j in 0..10 {
            let (t, u) = (0.01 + 0.11 * i as f64, -3.0 + 0.67 * j as f64);
            let v = e.eval(&Bindings::tu(t, u, &phi)).unwrap();
            assert!((v - common::reference_rhs(t, u)).abs() <= 1e-12, "t={t} u={u}");
        }
    }
}

#[test]
fn syntax_errors_carry_positions() {
    let err = expr::parse("u +", &["u"]).unwrap_err();
    assert_eq!(err.position, 3);
    assert!(matches!(err.kind, ParseErrorKind::UnexpectedEnd { .. }));
    let err = expr::parse("2 * (t + 1", &["t"]).unwrap_err();
    assert_eq!(err.position, 10);
    let err = expr::parse("foo(t)", &["t"]).unwrap_err();
    assert_eq!((err.position, err.kind), (0, ParseErrorKind::UnknownIdentifier("foo".into())));
    let err = expr::parse("1 + pow(t)", &["t"]).unwrap_err();
    assert!(matches!(err.kind, ParseErrorKind::Arity { name: "pow", expected: 2, found: 1 }));
    assert_eq!(err.position, 4);
    let err = expr::parse("2 # t", &["t"]).unwrap_err();
    assert_eq!((err.position, err.kind), (2, ParseErrorKind::UnexpectedChar('#')));
}

#[test]
fn scopes_are_enforced() {
    let err = Expression::parse("u + t", Scope::IMPULSE).unwrap_err();
    assert_eq!((err.position, err.kind), (4, ParseErrorKind::DisallowedVariable("t".into())));
    assert!(Expression::parse("u", Scope::TIME).is_err());
    assert!(Expression::parse("phi(t)", Scope::KERNEL).is_err());
    assert!(Expression::parse("phi(0.5) * u", Scope::IMPULSE).is_ok());
}

#[test]
fn domain_errors_are_reported() {
    let e = expr::parse("ln(t)", &["t"]).unwrap();
    let err = expr::eval(&e, &HashMap::from([("t", -1.0)])).unwrap_err();
    assert!(matches!(err.kind, EvalErrorKind::Domain(_)));
    assert!(err.subexpr.contains("ln"));
    let e = expr::parse("1/(t-1)", &["t"]).unwrap();
    assert!(expr::eval(&e, &HashMap::from([("t", 1.0)])).is_err());
    let e = expr::parse("t*u", &["t", "u"]).unwrap();
    let err = expr::eval(&e, &HashMap::from([("t", 1.0)])).unwrap_err();
    assert!(matches!(err.kind, EvalErrorKind::MissingBinding(_)));
}

fn arb_expr() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0u32..1000).prop_map(|n| format!("{}", n as f64 / 8.0)),
        Just("t".to_string()),
        Just("u".to_string()),
        Just("pi".to_string()),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), prop_oneof![Just("+"), Just("-"), Just("*"), Just("/"), Just("^")], inner.clone())
                .prop_map(|(l, op, r)| format!("({l}){op}({r})")),
            inner.clone().prop_map(|x| format!("-({x})")),
            (prop_oneof![Just("sin"), Just("abs"), Just("exp")], inner.clone()).prop_map(|(f, x)| format!("{f}({x})")),
            (inner.clone(), inner).prop_map(|(a, b)| format!("max({a}, {b})")),
        ]
    })
}

proptest! {
    #[test]
    fn generated_expressions_round_trip(text in arb_expr()) {
        let e = expr::parse(&text, &["t", "u"]).unwrap();
        let again = expr::parse(&e.to_string(), &["t", "u"]).unwrap();
        prop_assert_eq!(e.root(), again.root());
    }
}
