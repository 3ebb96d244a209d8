//! Klein and q-parity dressings.
//!
//! A dressing sends `a_i ↦ s_i Φ(m^(i)) a_i` (and `a_i† ↦ s̄_i a_i† Φ(-m^(i))`).
//! It never changes same-mode relations; it multiplies the exchange factor
//! of each pair `i < j` by `q^{m^(j)_i - m^(i)_j}`.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{
    self, bracket_raw, normal_order, AlgebraError, AlgebraSpec, Assignment, ExchangeMatrix, Generator, ModeId,
    OpExpr, PhaseVector, Statistics,
};
use crate::qscalar::UnitScalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KleinError {
    #[error("unknown map `{0}`")]
    UnknownMap(String),
    #[error("map `{name}` needs {needs}, the algebra has {found}")]
    Arity { name: &'static str, needs: &'static str, found: String },
    #[error("dressing scale for mode {0} is not a unit-modulus monomial")]
    NonUnitScale(usize),
    #[error("dressing covers {dressing} modes but the algebra has {algebra}")]
    SizeMismatch { dressing: usize, algebra: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Catalog of named dressings with a one-line description.
pub const CATALOG: &[(&str, &str)] = &[
    ("total-parity-on-b", "two modes: b -> eta b, eta = q^(N_a+N_b)"),
    ("eta-b-on-both", "two modes: a -> eta_b a, b -> eta_b b"),
    ("eta-a-on-b", "two modes: b -> eta_a b"),
    ("cascade", "n modes: a_i -> eta_1 ... eta_(i-1) a_i"),
    ("q-cascade", "n modes: a_i -> q^(N_1+...+N_(i-1)) a_i"),
    ("q-total-on-b", "two modes: b -> q^(N_a+N_b) b"),
    ("q-etab-on-both", "two modes: a -> q^N_b a, b -> q^N_b b"),
    ("charge-parity", "fermions a,b,a',b': primed modes -> e^(i pi Q) c', Q = -N_a+N_b-N_a'+N_b'"),
    ("total-parity-on-primed", "fermions a,b,a',b': primed modes -> (-1)^N c'"),
];

/// Scale and phase word attached to one mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeDressing {
    pub scale: UnitScalar,
    pub phase: PhaseVector,
}

impl ModeDressing {
    pub fn bare() -> Self {
        ModeDressing { scale: UnitScalar::one(), phase: PhaseVector::zero() }
    }

    pub fn phase(m: PhaseVector) -> Self {
        ModeDressing { scale: UnitScalar::one(), phase: m }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DressingMap {
    modes: Vec<ModeDressing>,
}

impl DressingMap {
    pub fn identity(n: usize) -> Self {
        DressingMap { modes: vec![ModeDressing::bare(); n] }
    }

    /// Unit scales, given phase exponents per mode.
    pub fn from_phases(phases: impl IntoIterator<Item = PhaseVector>) -> Self {
        DressingMap { modes: phases.into_iter().map(ModeDressing::phase).collect() }
    }

    pub fn from_modes(modes: Vec<ModeDressing>) -> Result<Self, KleinError> {
        for (i, m) in modes.iter().enumerate() {
            if !m.scale.is_unit_monomial() {
                return Err(KleinError::NonUnitScale(i));
            }
        }
        Ok(DressingMap { modes })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[ModeDressing] {
        &self.modes
    }

    pub fn phase(&self, mode: ModeId) -> &PhaseVector {
        &self.modes[mode.0].phase
    }

    /// Applies `self` first and then `then`: phases add, scales multiply.
    pub fn then(&self, then: &DressingMap) -> DressingMap {
        let n = self.len().max(then.len());
        let bare = ModeDressing::bare();
        let modes = (0..n)
            .map(|i| {
                let a = self.modes.get(i).unwrap_or(&bare);
                let b = then.modes.get(i).unwrap_or(&bare);
                ModeDressing { scale: &a.scale * &b.scale, phase: &a.phase + &b.phase }
            })
            .collect();
        DressingMap { modes }
    }

    /// `s_i Φ(m^(i)) a_i` as a raw word.
    pub fn dressed_ann(&self, mode: ModeId) -> OpExpr {
        let d = &self.modes[mode.0];
        (&OpExpr::phase(d.phase.clone()) * &OpExpr::ann(mode)).scale(&d.scale)
    }

    /// `s̄_i a_i† Φ(-m^(i))` as a raw word.
    pub fn dressed_cre(&self, mode: ModeId) -> OpExpr {
        self.dressed_ann(mode).adjoint_raw()
    }

    pub fn assignment(&self) -> Assignment {
        let mut out = Assignment::new();
        for i in 0..self.len() {
            out.insert(Generator::ann(ModeId(i)), self.dressed_ann(ModeId(i)));
            out.insert(Generator::cre(ModeId(i)), self.dressed_cre(ModeId(i)));
        }
        out
    }

    fn check_size(&self, spec: &AlgebraSpec) -> Result<(), KleinError> {
        if self.len() != spec.len() {
            return Err(KleinError::SizeMismatch { dressing: self.len(), algebra: spec.len() });
        }
        Ok(())
    }
}

fn arity(name: &'static str, needs: &'static str, spec: &AlgebraSpec) -> KleinError {
    let stats: Vec<&str> = spec
        .modes()
        .iter()
        .map(|m| match m.statistics {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        })
        .collect();
    KleinError::Arity { name, needs, found: alloc::format!("{} modes [{}]", spec.len(), stats.join(", ")) }
}

/// Looks up a catalog dressing for `spec`.
pub fn standard_map(name: &str, spec: &AlgebraSpec) -> Result<DressingMap, KleinError> {
    let n = spec.len();
    let (key, _) = CATALOG
        .iter()
        .find(|(k, _)| *k == name)
        .ok_or_else(|| KleinError::UnknownMap(name.to_string()))?;
    let two_mode = |v: [[i64; 2]; 2]| -> Result<DressingMap, KleinError> {
        if n != 2 {
            return Err(arity(key, "exactly 2 modes", spec));
        }
        Ok(DressingMap::from_phases(v.into_iter().map(PhaseVector::new)))
    };
    let primed = |m: [i64; 4]| -> Result<DressingMap, KleinError> {
        if n != 4 || spec.modes().iter().any(|m| m.statistics != Statistics::Fermion) {
            return Err(arity(key, "4 fermionic modes a, b, a', b'", spec));
        }
        let phase = PhaseVector::new(m);
        Ok(DressingMap::from_phases([
            PhaseVector::zero(),
            PhaseVector::zero(),
            phase.clone(),
            phase,
        ]))
    };
    let cascade = || {
        DressingMap::from_phases((0..n).map(|i| {
            let mut v = vec![0i64; n];
            v[..i].fill(1);
            PhaseVector::new(v)
        }))
    };
    match *key {
        "total-parity-on-b" | "q-total-on-b" => two_mode([[0, 0], [1, 1]]),
        "eta-b-on-both" | "q-etab-on-both" => two_mode([[0, 1], [0, 1]]),
        "eta-a-on-b" => two_mode([[0, 0], [1, 0]]),
        "cascade" | "q-cascade" => Ok(cascade()),
        "charge-parity" => primed([-1, 1, -1, 1]),
        "total-parity-on-primed" => primed([1, 1, 1, 1]),
        _ => unreachable!("catalog entry without construction"),
    }
}

/// Normal-ordered image of `e` under the dressing.
pub fn apply_dressing(map: &DressingMap, e: &OpExpr, spec: &AlgebraSpec) -> Result<OpExpr, KleinError> {
    map.check_size(spec)?;
    Ok(algebra::substitute(e, &map.assignment(), spec)?)
}

/// Closed form `Q'_ij = Q_ij q^{m^(j)_i - m^(i)_j}` for `i < j`.
pub fn induced_exchange(map: &DressingMap, q: &ExchangeMatrix) -> Result<ExchangeMatrix, KleinError> {
    if map.len() != q.len() {
        return Err(KleinError::SizeMismatch { dressing: map.len(), algebra: q.len() });
    }
    let mut out = ExchangeMatrix::identity(q.len());
    for i in 0..q.len() {
        for j in i + 1..q.len() {
            let shift = map.phase(ModeId(j)).get(ModeId(i)) - map.phase(ModeId(i)).get(ModeId(j));
            out.set(i, j, &q.get(i, j) * &UnitScalar::q_pow(shift))
                .map_err(KleinError::Algebra)?;
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    /// `[ã, ã†] = 1` (boson) or `{ã, ã†} = 1` (fermion).
    Ladder,
    /// `ã² = 0` for fermions.
    Pauli,
    /// `ã_i ã_j - Q'_ij ã_j ã_i = 0`.
    Exchange,
    /// `ã_i ã_j† - Q'_ij^-1 ã_j† ã_i = 0`.
    MixedExchange,
    /// `[Ñ_i, Ñ_j] = 0`.
    NumberCommute,
}

/// One certified relation: passes iff the residual normal form is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub modes: (usize, usize),
    pub relation: Relation,
    pub residual: OpExpr,
}

impl RelationCheck {
    pub fn pass(&self) -> bool {
        self.residual.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExchangeReport {
    /// Closed-form exchange matrix of the dressed generators.
    pub induced: ExchangeMatrix,
    /// Exchange matrix that was certified.
    pub expected: ExchangeMatrix,
    pub same_mode: Vec<RelationCheck>,
    pub pairs: Vec<RelationCheck>,
}

impl ExchangeReport {
    pub fn pass(&self) -> bool {
        self.same_mode.iter().chain(&self.pairs).all(RelationCheck::pass)
    }

    pub fn checks(&self) -> impl Iterator<Item = &RelationCheck> {
        self.same_mode.iter().chain(&self.pairs)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks().filter(|c| !c.pass())
    }
}

/// One relation of the dressed generators, unreduced: it holds iff `expr`
/// normal-orders to zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawRelation {
    pub modes: (usize, usize),
    pub relation: Relation,
    pub expr: OpExpr,
}

/// Same-mode relations of `spec_in` followed by the pair relations of
/// `expected` (taken as given, not reduced), in mode-index order.
pub fn relation_exprs(
    map: &DressingMap,
    spec_in: &AlgebraSpec,
    expected: &ExchangeMatrix,
) -> Result<Vec<RawRelation>, KleinError> {
    map.check_size(spec_in)?;
    if expected.len() != spec_in.len() {
        return Err(KleinError::SizeMismatch { dressing: expected.len(), algebra: spec_in.len() });
    }
    let n = spec_in.len();
    let ann: Vec<OpExpr> = (0..n).map(|i| map.dressed_ann(ModeId(i))).collect();
    let cre: Vec<OpExpr> = (0..n).map(|i| map.dressed_cre(ModeId(i))).collect();
    let num: Vec<OpExpr> = (0..n).map(|i| &cre[i] * &ann[i]).collect();
    let mut out = Vec::new();
    let mut push = |modes, relation, expr| out.push(RawRelation { modes, relation, expr });

    for i in 0..n {
        let sign = match spec_in.statistics(ModeId(i)) {
            Statistics::Boson => UnitScalar::one(),
            Statistics::Fermion => -UnitScalar::one(),
        };
        push((i, i), Relation::Ladder, &bracket_raw(&ann[i], &cre[i], &sign) - &OpExpr::one());
        if spec_in.statistics(ModeId(i)) == Statistics::Fermion {
            push((i, i), Relation::Pauli, &ann[i] * &ann[i]);
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let qij = expected.get(i, j);
            let inv = qij.monomial_inverse().map_err(AlgebraError::from)?;
            push((i, j), Relation::Exchange, bracket_raw(&ann[i], &ann[j], &qij));
            push((i, j), Relation::MixedExchange, bracket_raw(&ann[i], &cre[j], &inv));
            push((i, j), Relation::NumberCommute, bracket_raw(&num[i], &num[j], &UnitScalar::one()));
        }
    }
    Ok(out)
}

/// Certifies symbolically that the dressed generators satisfy the same-mode
/// relations of `spec_in` and the pair relations of `expected`.
pub fn verify_klein(
    map: &DressingMap,
    spec_in: &AlgebraSpec,
    expected: &ExchangeMatrix,
) -> Result<ExchangeReport, KleinError> {
    let q_mode = spec_in.q_mode();
    if expected.len() != spec_in.len() {
        return Err(KleinError::SizeMismatch { dressing: expected.len(), algebra: spec_in.len() });
    }
    let expected = expected.map_entries(|v| q_mode.reduce(v))?;
    let mut same_mode = Vec::new();
    let mut pairs = Vec::new();
    for raw in relation_exprs(map, spec_in, &expected)? {
        let check = RelationCheck { modes: raw.modes, relation: raw.relation, residual: normal_order(&raw.expr, spec_in)? };
        if raw.modes.0 == raw.modes.1 {
            same_mode.push(check);
        } else {
            pairs.push(check);
        }
    }
    let induced = induced_exchange(map, spec_in.exchange())?.map_entries(|v| q_mode.reduce(v))?;
    Ok(ExchangeReport { induced, expected, same_mode, pairs })
}
