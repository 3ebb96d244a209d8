mod common;

use std::f64::consts::PI;

use kleinkit_core::algebra::{bracket_raw, is_zero, normal_order, LadderKind};
use kleinkit_core::fock::{
    check_zero, evaluate, evaluate_guarded, ladder_matrix, phase_matrix, Evaluator, FockSpace, LocalMode,
    MatrixOperator, ModeAssignment, Realization, COMPOSED_TOL, EXACT_TOL,
};
use kleinkit_core::klein::{induced_exchange, DressingMap};
use kleinkit_core::{AlgebraSpec, ModeId, OpExpr, PhaseVector, QMode, UnitScalar};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

const PROBES: [f64; 3] = [PI, PI / 3.0, 2.0 * PI / 7.0];

fn mixed_space() -> FockSpace {
    FockSpace::new(vec![LocalMode::boson(3), LocalMode::fermion(), LocalMode::boson(4)]).unwrap()
}

proptest! {
    #[test]
    fn phase_matrices_are_unitary(m in prop::collection::vec(-3i64..=3, 3), theta in -7.0f64..7.0) {
        let space = mixed_space();
        let p = phase_matrix(&space, &PhaseVector::new(m), theta);
        let id = MatrixOperator::identity(space.dim());
        prop_assert!((&p * &p.adjoint()).max_abs_diff(&id) <= 1e-15);
    }

    #[test]
    fn phase_ladder_exchange(m in prop::collection::vec(-3i64..=3, 3), theta in -7.0f64..7.0, k in 0usize..3) {
        let space = mixed_space();
        let pv = PhaseVector::new(m);
        let p = phase_matrix(&space, &pv, theta);
        for kind in [LadderKind::Annihilate, LadderKind::Create] {
            let a = ladder_matrix(&space, k, kind).unwrap();
            let s = Complex64::from_polar(1.0, kind.charge() as f64 * theta * pv.get(ModeId(k)) as f64);
            let diff = &(&p * &a) - &(&a * &p).scale(s);
            prop_assert!(diff.frobenius_norm() <= EXACT_TOL, "{}", diff.frobenius_norm());
        }
    }
}

#[test]
fn parity_is_involution() {
    let space = mixed_space();
    let eta = phase_matrix(&space, &PhaseVector::ones(3), PI);
    assert_eq!(&eta * &eta, MatrixOperator::identity(space.dim()));
}

#[test]
fn signed_charge_parity_equals_total_parity_on_fermions() {
    let space = FockSpace::new(vec![LocalMode::fermion(); 4]).unwrap();
    let charge = phase_matrix(&space, &PhaseVector::new(vec![-1, 1, -1, 1]), PI);
    assert_eq!(charge, phase_matrix(&space, &PhaseVector::ones(4), PI));
}

#[test]
fn number_operator_spectrum() {
    let mut rng = common::rng(11);
    for _ in 0..10 {
        let spec = common::spec(&mut rng, 3);
        let space = FockSpace::for_spec(&spec, 4).unwrap();
        let theta = rng.gen_range(0.0..6.0);
        let ev = Evaluator::new(&spec, &space, theta, ModeAssignment::identity(3), Realization::Exchange).unwrap();
        let mut total = vec![0.0; space.dim()];
        for k in 0..3 {
            let n = ev.evaluate(&OpExpr::number(ModeId(k))).unwrap();
            for (r, c, v) in n.entries() {
                assert_eq!(r, c);
                assert!((v.re - space.occupation(r, k) as f64).abs() < 1e-14 && v.im.abs() < 1e-14);
                total[r] += v.re.round();
            }
        }
        let via_exp =
            MatrixOperator::from_diagonal(total.iter().map(|n| Complex64::from_polar(1.0, PI * n)).collect());
        assert!(via_exp.max_abs_diff(&phase_matrix(&space, &PhaseVector::ones(3), PI)) <= 1e-14);
    }
}

#[test]
fn eval_of_dressed_b_is_phase_times_ladder() {
    let space = FockSpace::new(vec![LocalMode::boson(4), LocalMode::boson(4)]).unwrap();
    let eta_b = &OpExpr::phase(PhaseVector::ones(2)) * &OpExpr::ann(ModeId(1));
    let expected =
        &phase_matrix(&space, &PhaseVector::ones(2), PI) * &ladder_matrix(&space, 1, LadderKind::Annihilate).unwrap();

    let commuting = AlgebraSpec::bosons(&["a", "b"]).unwrap().with_q_mode(QMode::MINUS_ONE).unwrap();
    let x = evaluate(&eta_b, &commuting, &space, PI, ModeAssignment::identity(2)).unwrap();
    assert!(x.max_abs_diff(&expected) <= 1e-15);

    // Abnormal pair: the realized b already carries (-1)^{N_a}.
    let abnormal = commuting.with_uniform_exchange(AlgebraSpec::minus_one()).unwrap();
    let x = evaluate(&eta_b, &abnormal, &space, PI, ModeAssignment::identity(2)).unwrap();
    let expected = &phase_matrix(&space, &PhaseVector::new(vec![1, 0]), PI) * &expected;
    assert!(x.max_abs_diff(&expected) <= 1e-15);
}

#[test]
fn abnormal_pair_is_exact_on_full_space() {
    let spec = AlgebraSpec::bosons(&["a", "b"])
        .unwrap()
        .with_uniform_exchange(AlgebraSpec::minus_one())
        .unwrap()
        .with_q_mode(QMode::MINUS_ONE)
        .unwrap();
    let space = FockSpace::for_spec(&spec, 4).unwrap();
    let (a, b) = (OpExpr::ann(ModeId(0)), OpExpr::ann(ModeId(1)));
    let eta_b = &OpExpr::phase(PhaseVector::ones(2)) * &b;
    let minus = AlgebraSpec::minus_one();
    let one = UnitScalar::one();
    for x in [bracket_raw(&a, &b, &minus), bracket_raw(&a, &b.adjoint_raw(), &minus), bracket_raw(&a, &eta_b, &one)] {
        let m = evaluate(&x, &spec, &space, PI, ModeAssignment::identity(2)).unwrap();
        assert!(check_zero(&m, &space, EXACT_TOL).unwrap().full_residual <= EXACT_TOL);
    }
}

#[test]
fn cross_mode_relations_are_exact_on_full_space() {
    for seed in 0..30 {
        let mut rng = common::rng(seed);
        let spec = common::spec(&mut rng, 3);
        let space = FockSpace::for_spec(&spec, 4).unwrap();
        let map = DressingMap::from_phases(
            (0..3).map(|_| PhaseVector::new((0..3).map(|_| rng.gen_range(-2..=2)).collect::<Vec<_>>())),
        );
        let q = induced_exchange(&map, spec.exchange()).unwrap();
        for theta in PROBES {
            let ev = Evaluator::new(&spec, &space, theta, ModeAssignment::identity(3), Realization::Exchange).unwrap();
            for i in 0..3 {
                for j in i + 1..3 {
                    let qij = q.get(i, j);
                    let ai = map.dressed_ann(ModeId(i));
                    let aj = map.dressed_ann(ModeId(j));
                    for x in [
                        bracket_raw(&ai, &aj, &qij),
                        bracket_raw(&ai, &aj.adjoint_raw(), &qij.monomial_inverse().unwrap()),
                    ] {
                        let r = ev.evaluate(&x).unwrap().frobenius_norm();
                        assert!(r <= EXACT_TOL, "seed {seed} theta {theta} pair ({i},{j}): {r}");
                    }
                }
            }
        }
    }
}

fn residual(x: &OpExpr, spec: &AlgebraSpec, space: &FockSpace, theta: f64) -> f64 {
    let m = evaluate_guarded(x, spec, space, theta).unwrap();
    check_zero(&m, space, COMPOSED_TOL).unwrap().interior_residual
}

#[test]
fn value_preserved_by_normal_order() {
    for seed in 0..100 {
        let mut rng = common::rng(500 + seed);
        let spec = common::spec(&mut rng, 3);
        let space = FockSpace::for_spec(&spec, 4).unwrap();
        let e = common::expr(&mut rng, 3, 6);
        let diff = &e - &normal_order(&e, &spec).unwrap();
        for theta in [PI, PI / 3.0] {
            let r = residual(&diff, &spec, &space, theta);
            assert!(r <= COMPOSED_TOL, "seed {seed} theta {theta}: {r}");
        }
    }
}

#[test]
fn value_preserved_at_minus_one() {
    for seed in 0..50 {
        let mut rng = common::rng(700 + seed);
        let spec = common::spec(&mut rng, 3).with_q_mode(QMode::MINUS_ONE).unwrap();
        let space = FockSpace::for_spec(&spec, 4).unwrap();
        let e = common::expr(&mut rng, 3, 6);
        let diff = &e - &normal_order(&e, &spec).unwrap();
        assert!(residual(&diff, &spec, &space, PI) <= COMPOSED_TOL, "seed {seed}");
    }
}

// Words of length <= 3 keep every per-mode power below D = 4, so a nonzero
// normal form has a nonzero matrix element inside the D-space.
#[test]
fn symbolic_and_numeric_zero_agree() {
    let mut nonzero = 0;
    for seed in 0..150 {
        let mut rng = common::rng(900 + seed);
        let spec = common::spec(&mut rng, 3);
        let space = FockSpace::for_spec(&spec, 4).unwrap();
        let x = common::expr(&mut rng, 3, 3);
        let y = common::expr(&mut rng, 3, 3);
        let e = if seed % 2 == 0 { &(&x * &y) - &(&normal_order(&x, &spec).unwrap() * &y) } else { &x - &y };
        let zero = is_zero(&e, &spec).unwrap();
        let rs: Vec<f64> = PROBES.iter().map(|&t| residual(&e, &spec, &space, t)).collect();
        if zero {
            assert!(rs.iter().all(|&r| r <= COMPOSED_TOL), "seed {seed}: {rs:?}");
        } else {
            nonzero += 1;
            assert!(rs.iter().any(|&r| r >= 1e-6), "seed {seed}: {rs:?}");
        }
    }
    assert!(nonzero >= 20);
}

#[test]
fn hard_truncation_misreads_long_words() {
    let spec = AlgebraSpec::bosons(&["a"]).unwrap();
    let space = FockSpace::for_spec(&spec, 4).unwrap();
    let (a, ad) = (OpExpr::ann(ModeId(0)), OpExpr::cre(ModeId(0)));
    let e = &(&a * &a) * &(&ad * &ad);
    let diff = &e - &normal_order(&e, &spec).unwrap();
    let hard = evaluate(&diff, &spec, &space, PI, ModeAssignment::identity(1)).unwrap();
    let report = check_zero(&hard, &space, COMPOSED_TOL).unwrap();
    assert!((report.interior_residual - 12.0).abs() < 1e-12);
    assert!(residual(&diff, &spec, &space, PI) <= COMPOSED_TOL);
}
