use kleinkit::dsl::{parse, parse_angle, Expect, Expr, MapDef, MapEntry, Numeric, Program, StmtKind};
use kleinkit_core::{QMode, Statistics};
use num_rational::BigRational;
use proptest::prelude::*;

fn int(n: i64) -> Expr {
    Expr::Num(BigRational::from_integer(n.into()))
}

#[test]
fn declarations_parse() {
    let p = parse("mode a boson; mode b boson; exchange a b = -1; q formal;").unwrap();
    let kinds: Vec<_> = p.statements.iter().map(|s| s.kind.clone()).collect();
    assert_eq!(
        kinds,
        [
            StmtKind::Mode("a".into(), Statistics::Boson),
            StmtKind::Mode("b".into(), Statistics::Boson),
            StmtKind::Exchange("a".into(), "b".into(), Expr::Neg(Box::new(int(1)))),
            StmtKind::Q(QMode::Formal),
        ]
    );
    assert_eq!((p.statements[2].pos.line, p.statements[2].pos.col), (1, 29));
}

#[test]
fn parity_check_parses() {
    let p = parse("let eta = phase[a:1,b:1]; let bt = eta*ann(b); assert_zero comm(ann(a), bt);").unwrap();
    assert_eq!(p.statements.len(), 3);
    assert_eq!(
        p.statements[0].kind,
        StmtKind::Let("eta".into(), Expr::Phase(vec![("a".into(), 1), ("b".into(), 1)]))
    );
    assert_eq!(
        p.statements[2].kind,
        StmtKind::AssertZero(Expr::Comm(Box::new(Expr::Ann("a".into())), Box::new(Expr::Var("bt".into()))))
    );
}

#[test]
fn unclosed_parenthesis() {
    let e = parse("let x = ann(c").unwrap_err();
    assert_eq!(e.pos.line, 1);
    assert!(e.message.contains("unclosed parenthesis"), "{e}");
    assert_eq!(e.expected, ["')'"]);
}

#[test]
fn error_lists_expected_tokens() {
    let e = parse("mode a\n  quark;").unwrap_err();
    assert_eq!((e.pos.line, e.pos.col), (2, 3));
    assert_eq!(e.expected, ["'boson'", "'fermion'"]);
    let e = parse("bogus;").unwrap_err();
    assert!(e.expected.contains(&"'assert_zero'".to_string()));
    let e = parse("let x = 1 +;").unwrap_err();
    assert!(e.expected.contains(&"'ann'".to_string()) && e.expected.contains(&"integer".to_string()));
}

#[test]
fn lexical_errors() {
    assert!(parse("mode a boson; $").unwrap_err().message.starts_with("lexical error"));
    assert!(parse("let D = map \"open").unwrap_err().message.contains("unterminated"));
}

#[test]
fn duplicates_are_rejected() {
    for src in [
        "mode a boson; mode a fermion;",
        "mode a boson; mode b boson; exchange a b = 1; exchange b a = -1;",
        "q formal; q = -1;",
        "mode a boson; let a = 1;",
        "let x = 1; let x = 2;",
    ] {
        assert!(parse(src).unwrap_err().message.contains("duplicate declaration"), "{src}");
    }
}

#[test]
fn q_values() {
    let q = |s: &str| parse(s).map(|p| p.statements[0].kind.clone());
    assert_eq!(q("q = -1;").unwrap(), StmtKind::Q(QMode::RootOfUnity(2)));
    assert_eq!(q("q = 1;").unwrap(), StmtKind::Q(QMode::RootOfUnity(1)));
    assert_eq!(q("q = (0,1);").unwrap(), StmtKind::Q(QMode::RootOfUnity(4)));
    assert!(q("q = 2;").is_err());
}

#[test]
fn comments_and_rationals() {
    let p = parse("# header\nlet x = 3/2*q^-1 + (0,1)*q^2; # trailing\n").unwrap();
    assert_eq!(p.statements[0].pos.line, 2);
    assert!(parse("let x = 1/0;").is_err());
}

#[test]
fn angles() {
    assert_eq!(parse_angle("pi").unwrap(), std::f64::consts::PI);
    assert!((parse_angle("2*pi/7").unwrap() - 2.0 * std::f64::consts::PI / 7.0).abs() < 1e-15);
    assert_eq!(parse_angle("1e-10").unwrap(), 1e-10);
    assert_eq!(parse_angle("-0.5").unwrap(), -0.5);
    assert!(parse_angle("pi pi").is_err());
}

#[test]
fn bundled_scripts_round_trip() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/scripts");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let p = parse(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(parse(&p.to_string()).unwrap(), p, "{}", path.display());
    }
}

fn ident() -> impl Strategy<Value = String> {
    prop::sample::select(vec!["a", "b", "a'", "x_1", "eta", "Bt"]).prop_map(String::from)
}

fn rational() -> impl Strategy<Value = BigRational> {
    (0i64..20, 1i64..5).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn signed_rational() -> impl Strategy<Value = BigRational> {
    (-20i64..20, 1i64..5).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn phase() -> impl Strategy<Value = Vec<(String, i64)>> {
    prop::collection::vec((ident(), -3i64..=3), 0..3)
}

fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        rational().prop_map(Expr::Num),
        (signed_rational(), signed_rational()).prop_map(|(a, b)| Expr::Complex(a, b)),
        Just(Expr::Q),
        ident().prop_map(Expr::Ann),
        ident().prop_map(Expr::Cre),
        phase().prop_map(Expr::Phase),
        ident().prop_map(Expr::Var),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        let b = move || inner.clone().prop_map(Box::new);
        prop_oneof![
            b().prop_map(Expr::Adj),
            (b(), b()).prop_map(|(x, y)| Expr::Comm(x, y)),
            (b(), b()).prop_map(|(x, y)| Expr::AComm(x, y)),
            (b(), b(), b()).prop_map(|(x, y, s)| Expr::QComm(x, y, s)),
            (ident(), b()).prop_map(|(d, x)| Expr::Map(d, x)),
            b().prop_map(Expr::Neg),
            (b(), b()).prop_map(|(x, y)| Expr::Add(x, y)),
            (b(), b()).prop_map(|(x, y)| Expr::Sub(x, y)),
            (b(), b()).prop_map(|(x, y)| Expr::Mul(x, y)),
            (b(), -3i64..6).prop_map(|(x, k)| Expr::Pow(x, k)),
        ]
    })
}

fn finite() -> impl Strategy<Value = f64> {
    any::<f64>().prop_filter("finite", |x| x.is_finite())
}

fn stmt() -> impl Strategy<Value = StmtKind> {
    prop_oneof![
        (ident(), any::<bool>())
            .prop_map(|(n, b)| StmtKind::Mode(n, if b { Statistics::Boson } else { Statistics::Fermion })),
        (ident(), ident(), expr()).prop_map(|(a, b, e)| StmtKind::Exchange(a, b, e)),
        prop::sample::select(vec![QMode::Formal, QMode::RootOfUnity(1), QMode::RootOfUnity(2), QMode::RootOfUnity(4)])
            .prop_map(StmtKind::Q),
        (ident(), expr()).prop_map(|(n, e)| StmtKind::Let(n, e)),
        (ident(), prop::sample::select(vec!["cascade", "q-total-on-b", "no such map"]))
            .prop_map(|(n, c)| StmtKind::LetMap(n, MapDef::Catalog(c.into()))),
        (ident(), prop::collection::vec((ident(), prop::option::of(expr()), phase()), 0..3)).prop_map(|(n, es)| {
            StmtKind::LetMap(
                n,
                MapDef::Explicit(es.into_iter().map(|(mode, scale, phase)| MapEntry { mode, scale, phase }).collect()),
            )
        }),
        expr().prop_map(StmtKind::AssertZero),
        (expr(), expr()).prop_map(|(x, y)| StmtKind::AssertEqual(x, y)),
        (expr(), expr(), expr(), expr()).prop_map(|(x, y, s, rhs)| StmtKind::AssertBracket { x, y, s, rhs }),
        (
            ident(),
            prop::collection::vec(
                prop_oneof![
                    expr().prop_map(Expect::All),
                    (ident(), ident(), expr()).prop_map(|(a, b, e)| Expect::Pair(a, b, e))
                ],
                0..3
            )
        )
            .prop_map(|(n, e)| StmtKind::VerifyMap(n, e)),
        (2usize..20).prop_map(|d| StmtKind::Numeric(Numeric::Dim(d))),
        prop::collection::vec(finite(), 1..4).prop_map(|t| StmtKind::Numeric(Numeric::Theta(t))),
        finite().prop_filter("positive", |x| *x > 0.0).prop_map(|t| StmtKind::Numeric(Numeric::Tol(t))),
    ]
}

/// Gives every declaration a fresh name and keeps at most one `q` setting.
fn program() -> impl Strategy<Value = Program> {
    prop::collection::vec(stmt(), 0..8).prop_map(|stmts| {
        let mut seen_q = false;
        let kinds = stmts.into_iter().enumerate().filter_map(|(k, s)| match s {
            StmtKind::Mode(_, st) => Some(StmtKind::Mode(format!("m{k}"), st)),
            StmtKind::Let(_, e) => Some(StmtKind::Let(format!("v{k}"), e)),
            StmtKind::LetMap(_, d) => Some(StmtKind::LetMap(format!("d{k}"), d)),
            StmtKind::Exchange(_, _, e) => Some(StmtKind::Exchange(format!("e{k}"), format!("f{k}"), e)),
            StmtKind::Q(_) if std::mem::replace(&mut seen_q, true) => None,
            other => Some(other),
        });
        Program::from_kinds(kinds.collect::<Vec<_>>())
    })
}

proptest! {
    #[test]
    fn parse_render_round_trip(p in program()) {
        let text = p.to_string();
        let back = parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
        prop_assert_eq!(back, p);
    }
}
