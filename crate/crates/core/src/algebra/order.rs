//! Normal ordering.
//!
//! The canonical word of a monomial lists modes by ascending index, each
//! mode as `(a†)^p a^r`, followed by at most one phase factor. Such words
//! form a PBW-type basis, so an expression is zero exactly when its normal
//! form has no terms.
//!
//! Two independent routes produce the normal form:
//! * [`Strategy::Insertion`] multiplies a canonical monomial by one letter at
//!   a time, using closed-form exchange factors;
//! * [`Strategy::LeftmostRedex`] / [`Strategy::RightmostRedex`] rewrite
//!   adjacent out-of-order pairs until none remain. Each step lowers the
//!   number of inversions or removes a same-mode `a a†` pair, so rewriting
//!   terminates.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::qscalar::UnitScalar;

use super::expr::{Factor, Generator, LadderKind, ModeId, OpExpr, PhaseVector, Term};
use super::spec::{AlgebraSpec, Statistics};
use super::AlgebraError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Insertion,
    LeftmostRedex,
    RightmostRedex,
}

/// Canonical monomial key: per-mode `(creation power, annihilation power)`
/// and the trailing phase.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Monomial {
    pub(crate) powers: Vec<(u32, u32)>,
    pub(crate) phase: PhaseVector,
}

impl Monomial {
    fn identity(n: usize) -> Self {
        Monomial { powers: vec![(0, 0); n], phase: PhaseVector::zero() }
    }

    pub(crate) fn is_ladder_free(&self) -> bool {
        self.powers.iter().all(|&(p, r)| p == 0 && r == 0)
    }

    fn word(&self) -> Vec<Factor> {
        let mut word = Vec::new();
        for (k, &(p, r)) in self.powers.iter().enumerate() {
            let mode = ModeId(k);
            word.extend((0..p).map(|_| Factor::Ladder(Generator::cre(mode))));
            word.extend((0..r).map(|_| Factor::Ladder(Generator::ann(mode))));
        }
        if !self.phase.is_zero() {
            word.push(Factor::Phase(self.phase.clone()));
        }
        word
    }
}

/// Sparse sum of canonical monomials.
struct NormalForm<'s> {
    spec: &'s AlgebraSpec,
    terms: BTreeMap<Monomial, UnitScalar>,
}

impl<'s> NormalForm<'s> {
    fn new(spec: &'s AlgebraSpec) -> Self {
        NormalForm { spec, terms: BTreeMap::new() }
    }

    fn insert(&mut self, mut mono: Monomial, coeff: UnitScalar) {
        let q_mode = self.spec.q_mode();
        let coeff = q_mode.reduce(&coeff);
        if coeff.is_zero() {
            return;
        }
        if let Some(order) = q_mode.order() {
            mono.phase = mono.phase.reduce_mod(order);
        }
        let entry = self.terms.entry(mono);
        match entry {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += &coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn into_expr(self) -> OpExpr {
        OpExpr::from_terms(
            self.terms
                .into_iter()
                .map(|(mono, coeff)| Term { word: mono.word(), coeff }),
        )
    }
}

pub(crate) fn validate(e: &OpExpr, spec: &AlgebraSpec) -> Result<(), AlgebraError> {
    for term in e.terms() {
        for f in &term.word {
            match f {
                Factor::Ladder(g) => spec.check_mode(g.mode)?,
                Factor::Phase(m) => {
                    if m.support_len() > spec.len() {
                        return Err(AlgebraError::UnknownMode(m.support_len() - 1));
                    }
                }
            }
        }
    }
    Ok(())
}

/// `y_j x_i = Q_ij^{-e_x e_y} x_i y_j` for `i < j`.
fn swap_factor(spec: &AlgebraSpec, lower: Generator, upper: Generator) -> Result<UnitScalar, AlgebraError> {
    let n = -lower.kind.charge() * upper.kind.charge();
    Ok(spec.q(lower.mode, upper.mode).monomial_pow(n)?)
}

/// `Φ(m) x_k = q^{e_x m_k} x_k Φ(m)`.
fn phase_factor(m: &PhaseVector, g: Generator) -> Result<UnitScalar, AlgebraError> {
    let k = g
        .kind
        .charge()
        .checked_mul(m.get(g.mode))
        .ok_or(AlgebraError::Scalar(crate::qscalar::ScalarError::ExponentOverflow))?;
    Ok(UnitScalar::q_pow(k))
}

/// Right-multiplies `coeff · mono` by one letter.
fn insert_factor(
    spec: &AlgebraSpec,
    mono: &Monomial,
    coeff: &UnitScalar,
    factor: &Factor,
    out: &mut NormalForm<'_>,
) -> Result<(), AlgebraError> {
    let g = match factor {
        Factor::Phase(m) => {
            let phase = mono.phase.checked_add(m).ok_or(AlgebraError::PhaseOverflow)?;
            out.insert(Monomial { powers: mono.powers.clone(), phase }, coeff.clone());
            return Ok(());
        }
        Factor::Ladder(g) => *g,
    };
    let k = g.mode.0;
    let e = g.kind.charge();
    let mut c = coeff.checked_mul(&phase_factor(&mono.phase, g)?)?;
    for j in k + 1..mono.powers.len() {
        let (p, r) = mono.powers[j];
        let net = i64::from(p) - i64::from(r);
        if net != 0 {
            let q = spec.q(g.mode, ModeId(j)).monomial_pow(-e * net)?;
            c = c.checked_mul(&q)?;
        }
    }
    let (p, r) = mono.powers[k];
    let with = |p: u32, r: u32| {
        let mut powers = mono.powers.clone();
        powers[k] = (p, r);
        Monomial { powers, phase: mono.phase.clone() }
    };
    match (spec.statistics(g.mode), g.kind) {
        (Statistics::Boson, LadderKind::Annihilate) => out.insert(with(p, r + 1), c),
        (Statistics::Boson, LadderKind::Create) => {
            // a^r a† = a† a^r + r a^{r-1}
            if r > 0 {
                out.insert(with(p, r - 1), c.checked_mul(&UnitScalar::from_int(i64::from(r)))?);
            }
            out.insert(with(p + 1, r), c);
        }
        (Statistics::Fermion, LadderKind::Annihilate) => {
            if r == 0 {
                out.insert(with(p, 1), c);
            }
        }
        (Statistics::Fermion, LadderKind::Create) => match (p, r) {
            (0, 0) => out.insert(with(1, 0), c),
            (1, 0) => {}
            // c c† = 1 - c† c
            (0, _) => {
                out.insert(with(0, 0), c.clone());
                out.insert(with(1, 1), -c);
            }
            // c† c c† = c†
            _ => out.insert(with(1, 0), c),
        },
    }
    Ok(())
}

fn order_by_insertion(e: &OpExpr, spec: &AlgebraSpec) -> Result<OpExpr, AlgebraError> {
    let mut total = NormalForm::new(spec);
    for term in e.terms() {
        let mut acc = NormalForm::new(spec);
        acc.insert(Monomial::identity(spec.len()), term.coeff.clone());
        for factor in &term.word {
            let mut next = NormalForm::new(spec);
            for (mono, coeff) in &acc.terms {
                insert_factor(spec, mono, coeff, factor, &mut next)?;
            }
            acc = next;
        }
        for (mono, coeff) in acc.terms {
            total.insert(mono, coeff);
        }
    }
    Ok(total.into_expr())
}

fn is_redex(spec: &AlgebraSpec, left: &Factor, right: &Factor) -> bool {
    match (left, right) {
        (Factor::Phase(_), _) => true,
        (Factor::Ladder(_), Factor::Phase(_)) => false,
        (Factor::Ladder(x), Factor::Ladder(y)) => {
            if x.mode != y.mode {
                return x.mode > y.mode;
            }
            match (x.kind, y.kind) {
                (LadderKind::Annihilate, LadderKind::Create) => true,
                (a, b) if a == b => spec.statistics(x.mode) == Statistics::Fermion,
                _ => false,
            }
        }
    }
}

/// Rewrites the pair at `i, i+1`; returns the replacement words.
fn rewrite_at(
    spec: &AlgebraSpec,
    coeff: &UnitScalar,
    word: &[Factor],
    i: usize,
) -> Result<Vec<(UnitScalar, Vec<Factor>)>, AlgebraError> {
    let splice = |middle: &[Factor]| {
        let mut w = word[..i].to_vec();
        w.extend_from_slice(middle);
        w.extend_from_slice(&word[i + 2..]);
        w
    };
    let out = match (&word[i], &word[i + 1]) {
        (Factor::Phase(m1), Factor::Phase(m2)) => {
            let m = m1.checked_add(m2).ok_or(AlgebraError::PhaseOverflow)?;
            vec![(coeff.clone(), splice(&[Factor::Phase(m)]))]
        }
        (Factor::Phase(m), Factor::Ladder(g)) => {
            let c = coeff.checked_mul(&phase_factor(m, *g)?)?;
            vec![(c, splice(&[Factor::Ladder(*g), Factor::Phase(m.clone())]))]
        }
        (Factor::Ladder(y), Factor::Ladder(x)) if y.mode != x.mode => {
            let c = coeff.checked_mul(&swap_factor(spec, *x, *y)?)?;
            vec![(c, splice(&[Factor::Ladder(*x), Factor::Ladder(*y)]))]
        }
        (Factor::Ladder(y), Factor::Ladder(x)) if y.kind == x.kind => Vec::new(),
        (Factor::Ladder(y), Factor::Ladder(_)) => {
            let swapped = splice(&[Factor::Ladder(y.dagger()), Factor::Ladder(*y)]);
            let sign = match spec.statistics(y.mode) {
                Statistics::Boson => coeff.clone(),
                Statistics::Fermion => -coeff,
            };
            vec![(coeff.clone(), splice(&[])), (sign, swapped)]
        }
        (Factor::Ladder(_), Factor::Phase(_)) => unreachable!("not a redex"),
    };
    Ok(out)
}

fn canonical_word_monomial(n: usize, word: &[Factor]) -> Monomial {
    let mut mono = Monomial::identity(n);
    for f in word {
        match f {
            Factor::Ladder(g) => {
                let slot = &mut mono.powers[g.mode.0];
                match g.kind {
                    LadderKind::Create => slot.0 += 1,
                    LadderKind::Annihilate => slot.1 += 1,
                }
            }
            Factor::Phase(m) => mono.phase = m.clone(),
        }
    }
    mono
}

fn order_by_rewriting(e: &OpExpr, spec: &AlgebraSpec, leftmost: bool) -> Result<OpExpr, AlgebraError> {
    let mut out = NormalForm::new(spec);
    let mut work: Vec<(UnitScalar, Vec<Factor>)> =
        e.terms().iter().map(|t| (t.coeff.clone(), t.word.clone())).collect();
    while let Some((coeff, word)) = work.pop() {
        let mut redexes = (0..word.len().saturating_sub(1)).filter(|&i| is_redex(spec, &word[i], &word[i + 1]));
        let pos = if leftmost { redexes.next() } else { redexes.next_back() };
        match pos {
            Some(i) => work.extend(rewrite_at(spec, &coeff, &word, i)?),
            None => out.insert(canonical_word_monomial(spec.len(), &word), coeff),
        }
    }
    Ok(out.into_expr())
}

/// Normal form computed with an explicit strategy; all strategies agree.
pub fn normal_order_with(e: &OpExpr, spec: &AlgebraSpec, strategy: Strategy) -> Result<OpExpr, AlgebraError> {
    validate(e, spec)?;
    match strategy {
        Strategy::Insertion => order_by_insertion(e, spec),
        Strategy::LeftmostRedex => order_by_rewriting(e, spec, true),
        Strategy::RightmostRedex => order_by_rewriting(e, spec, false),
    }
}

/// Unique canonical form of `e` in the algebra `spec`.
pub fn normal_order(e: &OpExpr, spec: &AlgebraSpec) -> Result<OpExpr, AlgebraError> {
    normal_order_with(e, spec, Strategy::Insertion)
}

pub(crate) fn canonical_monomials(
    e: &OpExpr,
    spec: &AlgebraSpec,
) -> Result<Vec<(Monomial, UnitScalar)>, AlgebraError> {
    let nf = normal_order(e, spec)?;
    Ok(nf
        .into_terms()
        .into_iter()
        .map(|t| (canonical_word_monomial(spec.len(), &t.word), t.coeff))
        .collect())
}
