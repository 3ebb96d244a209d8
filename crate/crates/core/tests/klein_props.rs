mod common;

use kleinkit_core::algebra::{anticommutator, commutator, is_zero, substitute, substitute_raw, ExchangeMatrix};
use kleinkit_core::klein::{apply_dressing, induced_exchange, standard_map, verify_klein, DressingMap, ModeDressing};
use kleinkit_core::{AlgebraSpec, ModeId, OpExpr, PhaseVector, QMode, UnitScalar};
use rand::Rng;

fn random_map(rng: &mut impl Rng, n: usize, with_scales: bool) -> DressingMap {
    DressingMap::from_modes(
        (0..n)
            .map(|_| ModeDressing {
                scale: if with_scales { common::unit_monomial(rng) } else { UnitScalar::one() },
                phase: PhaseVector::new((0..n).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>()),
            })
            .collect(),
    )
    .unwrap()
}

#[test]
fn composition_adds_exponents_and_multiplies_scales() {
    for seed in 0..40 {
        let mut rng = common::rng(seed);
        let spec = common::spec(&mut rng, 3);
        let m1 = random_map(&mut rng, 3, true);
        let m2 = random_map(&mut rng, 3, true);
        let e = common::expr(&mut rng, 3, 3);
        let stepwise = substitute(&substitute_raw(&e, &m1.assignment()).unwrap(), &m2.assignment(), &spec).unwrap();
        let composed = apply_dressing(&m1.then(&m2), &e, &spec).unwrap();
        assert!(is_zero(&(&stepwise - &composed), &spec).unwrap(), "seed {seed}");
    }
}

#[test]
fn random_dressings_match_closed_form() {
    for seed in 0..50 {
        let mut rng = common::rng(100 + seed);
        let spec = common::spec(&mut rng, 3);
        let scaled = rng.gen_bool(0.5);
        let map = random_map(&mut rng, 3, scaled);
        let induced = induced_exchange(&map, spec.exchange()).unwrap();
        let report = verify_klein(&map, &spec, &induced).unwrap();
        assert!(report.pass(), "seed {seed}: {:?}", report.failures().collect::<Vec<_>>());

        let special = spec.clone().with_q_mode(QMode::MINUS_ONE).unwrap();
        let report = verify_klein(&map, &special, &induced).unwrap();
        assert!(report.pass(), "seed {seed} at q = -1");
    }
}

#[test]
fn wrong_expectation_is_reported() {
    let mut rng = common::rng(7);
    for _ in 0..20 {
        let spec = common::spec(&mut rng, 3);
        let map = random_map(&mut rng, 3, false);
        let mut wrong = induced_exchange(&map, spec.exchange()).unwrap();
        let flipped = &wrong.get(0, 2) * &UnitScalar::from_int(-1);
        wrong.set(0, 2, flipped).unwrap();
        let report = verify_klein(&map, &spec, &wrong).unwrap();
        assert!(!report.pass());
        assert!(report.failures().all(|c| c.modes == (0, 2)));
    }
}

#[test]
fn total_parity_twice_is_identity_at_minus_one() {
    let spec = AlgebraSpec::bosons(&["a", "b", "c"])
        .unwrap()
        .with_uniform_exchange(AlgebraSpec::minus_one())
        .unwrap()
        .with_q_mode(QMode::MINUS_ONE)
        .unwrap();
    let eta = DressingMap::from_phases(vec![PhaseVector::ones(3); 3]);
    let twice = eta.then(&eta);
    for i in 0..3 {
        for g in [OpExpr::ann(ModeId(i)), OpExpr::cre(ModeId(i))] {
            assert_eq!(apply_dressing(&twice, &g, &spec).unwrap(), g);
        }
    }
    let formal = spec.clone().with_q_mode(QMode::Formal).unwrap();
    assert_ne!(apply_dressing(&twice, &OpExpr::ann(ModeId(0)), &formal).unwrap(), OpExpr::ann(ModeId(0)));
}

#[test]
fn parity_dressing_changes_bracket_type() {
    let spec = AlgebraSpec::bosons(&["a", "b"])
        .unwrap()
        .with_uniform_exchange(AlgebraSpec::minus_one())
        .unwrap()
        .with_q_mode(QMode::MINUS_ONE)
        .unwrap();
    let (a, b) = (OpExpr::ann(ModeId(0)), OpExpr::ann(ModeId(1)));
    assert!(anticommutator(&a, &b, &spec).unwrap().is_empty());
    assert!(!commutator(&a, &b, &spec).unwrap().is_empty());

    let map = standard_map("total-parity-on-b", &spec).unwrap();
    let bt = map.dressed_ann(ModeId(1));
    assert!(commutator(&a, &bt, &spec).unwrap().is_empty());
    assert!(!anticommutator(&a, &bt, &spec).unwrap().is_empty());
}

#[test]
fn empty_dressing_keeps_exchange() {
    let mut rng = common::rng(99);
    let spec = common::spec(&mut rng, 4);
    let id = DressingMap::identity(4);
    assert_eq!(&induced_exchange(&id, spec.exchange()).unwrap(), spec.exchange());
    let e = common::expr(&mut rng, 4, 4);
    assert_eq!(apply_dressing(&id, &e, &spec).unwrap(), kleinkit_core::algebra::normal_order(&e, &spec).unwrap());
}

#[test]
fn q_cascade_gives_epsilon_exchange() {
    let spec = AlgebraSpec::bosons(&["a", "b", "c", "d"]).unwrap();
    let map = standard_map("q-cascade", &spec).unwrap();
    let induced = induced_exchange(&map, spec.exchange()).unwrap();
    let mut expected = ExchangeMatrix::identity(4);
    for i in 0..4 {
        for j in i + 1..4 {
            expected.set(i, j, UnitScalar::q_pow(1)).unwrap();
        }
    }
    assert_eq!(induced, expected);
    assert!(verify_klein(&map, &spec, &expected).unwrap().pass());
}
