//! Multi-mode ladder-operator algebras.
//!
//! An [`AlgebraSpec`] fixes the modes, their statistics, and the exchange
//! factors between different modes: for `i < j`
//!
//! ```text
//! a_i a_j  = Q_ij    a_j  a_i        a_i  a_j† = Q_ij^-1 a_j† a_i
//! a_i† a_j† = Q_ij   a_j† a_i†       a_j  a_i† = Q_ij    a_i† a_j
//! ```
//!
//! Phase generators `Φ(m) = ∏ q^{m_k N_k}` obey
//! `Φ(m) a_k = q^{-m_k} a_k Φ(m)` and `Φ(m) a_k† = q^{m_k} a_k† Φ(m)`.

mod expr;
mod order;
mod spec;

use alloc::collections::BTreeMap;
use alloc::string::String;

pub use expr::{ExprDisplay, Factor, Generator, LadderKind, ModeId, OpExpr, PhaseVector, Term};
pub use order::{normal_order, normal_order_with, Strategy};
pub use spec::{AlgebraSpec, ExchangeMatrix, Mode, QMode, Statistics};

use crate::qscalar::{ScalarError, UnitScalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("mode index {0} is not declared")]
    UnknownMode(usize),
    #[error("unknown mode `{0}`")]
    UnknownModeName(String),
    #[error("mode `{0}` declared twice")]
    DuplicateMode(String),
    #[error("exchange factor for modes {i},{j} must be a unit monomial (and 1 on the diagonal)")]
    InvalidExchange { i: usize, j: usize },
    #[error("q specialization to a root of unity of order {0} is not exact; use 1, 2 or 4")]
    UnsupportedRoot(u32),
    #[error("expected {expected} modes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no substitution given for generator {0:?}")]
    MissingGenerator(Generator),
    #[error("phase exponent overflow")]
    PhaseOverflow,
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// Images of generators under a substitution.
pub type Assignment = BTreeMap<Generator, OpExpr>;

/// True iff the normal form of `e` has no terms.
pub fn is_zero(e: &OpExpr, spec: &AlgebraSpec) -> Result<bool, AlgebraError> {
    Ok(normal_order(e, spec)?.is_empty())
}

/// Normal-ordered Hermitian adjoint.
pub fn adjoint(e: &OpExpr, spec: &AlgebraSpec) -> Result<OpExpr, AlgebraError> {
    normal_order(&e.adjoint_raw(), spec)
}

/// `[x, y]_s = x y - s y x`, raw.
pub fn bracket_raw(x: &OpExpr, y: &OpExpr, s: &UnitScalar) -> OpExpr {
    &(x * y) - &(y * x).scale(s)
}

/// `[x, y]_s = x y - s y x`, normal-ordered.
pub fn bracket(x: &OpExpr, y: &OpExpr, s: &UnitScalar, spec: &AlgebraSpec) -> Result<OpExpr, AlgebraError> {
    normal_order(&bracket_raw(x, y, s), spec)
}

pub fn commutator(x: &OpExpr, y: &OpExpr, spec: &AlgebraSpec) -> Result<OpExpr, AlgebraError> {
    bracket(x, y, &UnitScalar::one(), spec)
}

pub fn anticommutator(x: &OpExpr, y: &OpExpr, spec: &AlgebraSpec) -> Result<OpExpr, AlgebraError> {
    bracket(x, y, &-UnitScalar::one(), spec)
}

fn image(assignment: &Assignment, g: Generator) -> Result<OpExpr, AlgebraError> {
    if let Some(img) = assignment.get(&g) {
        return Ok(img.clone());
    }
    assignment
        .get(&g.dagger())
        .map(OpExpr::adjoint_raw)
        .ok_or(AlgebraError::MissingGenerator(g))
}

/// Word-level homomorphic image. Phase letters are left unchanged; a
/// generator without its own entry uses the adjoint of its partner's image.
pub fn substitute_raw(e: &OpExpr, assignment: &Assignment) -> Result<OpExpr, AlgebraError> {
    let mut out = OpExpr::zero();
    for term in e.terms() {
        let mut acc = OpExpr::scalar(term.coeff.clone());
        for f in &term.word {
            let img = match f {
                Factor::Ladder(g) => image(assignment, *g)?,
                Factor::Phase(m) => OpExpr::phase(m.clone()),
            };
            acc = &acc * &img;
        }
        out = out + acc;
    }
    Ok(out)
}

/// Homomorphic image, normal-ordered in `spec_out`.
pub fn substitute(e: &OpExpr, assignment: &Assignment, spec_out: &AlgebraSpec) -> Result<OpExpr, AlgebraError> {
    normal_order(&substitute_raw(e, assignment)?, spec_out)
}

/// `⟨0|e|0⟩`: the ladder-free part of the normal form, phases counted as 1.
pub fn vacuum_expectation(e: &OpExpr, spec: &AlgebraSpec) -> Result<UnitScalar, AlgebraError> {
    let mut total = UnitScalar::zero();
    for (mono, coeff) in order::canonical_monomials(e, spec)? {
        if mono.is_ladder_free() {
            total += &coeff;
        }
    }
    Ok(total)
}
