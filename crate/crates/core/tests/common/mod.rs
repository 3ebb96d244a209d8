#![allow(dead_code)]

use kleinkit_core::algebra::{ExchangeMatrix, Factor, Generator, LadderKind, Term};
use kleinkit_core::{AlgebraSpec, Gaussian, ModeId, OpExpr, PhaseVector, Statistics, UnitScalar};
use kleinkit_core::algebra::Mode;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_gaussian(rng: &mut impl Rng) -> Gaussian {
    Gaussian::new(
        num_rational::BigRational::new(rng.gen_range(-3..=3).into(), rng.gen_range(1..=2).into()),
        num_rational::BigRational::new(rng.gen_range(-2..=2).into(), 1.into()),
    )
}

pub fn unit_coeff(rng: &mut impl Rng) -> Gaussian {
    match rng.gen_range(0..4) {
        0 => Gaussian::one(),
        1 => Gaussian::from_int(-1),
        2 => Gaussian::i(),
        _ => Gaussian::i().conj(),
    }
}

pub fn unit_monomial(rng: &mut impl Rng) -> UnitScalar {
    UnitScalar::monomial(unit_coeff(rng), rng.gen_range(-2..=2))
}

pub fn scalar(rng: &mut impl Rng) -> UnitScalar {
    let mut s = UnitScalar::zero();
    for _ in 0..rng.gen_range(1..=2) {
        s += &UnitScalar::monomial(small_gaussian(rng), rng.gen_range(-2..=2));
    }
    if s.is_zero() {
        UnitScalar::one()
    } else {
        s
    }
}

/// Random statistics and a random unit-monomial exchange matrix.
pub fn spec(rng: &mut impl Rng, n: usize) -> AlgebraSpec {
    let names = ["a", "b", "c", "d", "e"];
    let modes = (0..n)
        .map(|i| Mode {
            name: names[i].into(),
            statistics: if rng.gen_bool(0.5) { Statistics::Boson } else { Statistics::Fermion },
        })
        .collect();
    let mut q = ExchangeMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            q.set(i, j, unit_monomial(rng)).unwrap();
        }
    }
    AlgebraSpec::new(modes).unwrap().with_exchange_matrix(q).unwrap()
}

pub fn factor(rng: &mut impl Rng, n: usize) -> Factor {
    if rng.gen_ratio(1, 6) {
        Factor::Phase(PhaseVector::new((0..n).map(|_| rng.gen_range(-1..=1)).collect::<Vec<_>>()))
    } else {
        let kind = if rng.gen_bool(0.5) { LadderKind::Create } else { LadderKind::Annihilate };
        Factor::Ladder(Generator { mode: ModeId(rng.gen_range(0..n)), kind })
    }
}

pub fn word(rng: &mut impl Rng, n: usize, max_len: usize) -> Vec<Factor> {
    (0..rng.gen_range(0..=max_len)).map(|_| factor(rng, n)).collect()
}

pub fn expr(rng: &mut impl Rng, n: usize, max_len: usize) -> OpExpr {
    OpExpr::from_terms(
        (0..rng.gen_range(1..=3)).map(|_| Term { coeff: scalar(rng), word: word(rng, n, max_len) }),
    )
}
