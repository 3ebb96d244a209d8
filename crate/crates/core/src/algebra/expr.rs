use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::qscalar::UnitScalar;

use super::AlgebraSpec;

/// Index of a mode in its [`AlgebraSpec`] declaration order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LadderKind {
    // Declaration order is the canonical order within a mode.
    Create,
    Annihilate,
}

impl LadderKind {
    pub fn dagger(self) -> Self {
        match self {
            LadderKind::Create => LadderKind::Annihilate,
            LadderKind::Annihilate => LadderKind::Create,
        }
    }

    /// Change of the mode's occupation number.
    pub fn charge(self) -> i64 {
        match self {
            LadderKind::Create => 1,
            LadderKind::Annihilate => -1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    pub mode: ModeId,
    pub kind: LadderKind,
}

impl Generator {
    pub fn ann(mode: ModeId) -> Self {
        Generator { mode, kind: LadderKind::Annihilate }
    }

    pub fn cre(mode: ModeId) -> Self {
        Generator { mode, kind: LadderKind::Create }
    }

    pub fn dagger(self) -> Self {
        Generator { mode: self.mode, kind: self.kind.dagger() }
    }
}

/// Exponents `m` of the diagonal phase `Φ(m) = ∏_k q^{m_k N_k}`.
///
/// Trailing zeros are trimmed so equality does not depend on length.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PhaseVector(Vec<i64>);

impl PhaseVector {
    pub fn zero() -> Self {
        PhaseVector(Vec::new())
    }

    pub fn new(exponents: impl Into<Vec<i64>>) -> Self {
        let mut v = exponents.into();
        while v.last() == Some(&0) {
            v.pop();
        }
        PhaseVector(v)
    }

    /// Total parity over `n` modes.
    pub fn ones(n: usize) -> Self {
        PhaseVector::new(vec![1; n])
    }

    /// `1` on a single mode.
    pub fn unit(mode: ModeId) -> Self {
        let mut v = vec![0; mode.0 + 1];
        v[mode.0] = 1;
        PhaseVector::new(v)
    }

    pub fn get(&self, mode: ModeId) -> i64 {
        self.0.get(mode.0).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of stored exponents (after trimming).
    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn exponents(&self) -> &[i64] {
        &self.0
    }

    /// Exponents padded or truncated to `n` entries.
    pub fn to_vec(&self, n: usize) -> Vec<i64> {
        (0..n).map(|k| self.get(ModeId(k))).collect()
    }

    pub fn checked_add(&self, rhs: &PhaseVector) -> Option<PhaseVector> {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.get(ModeId(k)).checked_add(rhs.get(ModeId(k)))?);
        }
        Some(PhaseVector::new(out))
    }

    pub fn checked_neg(&self) -> Option<PhaseVector> {
        self.0
            .iter()
            .map(|m| m.checked_neg())
            .collect::<Option<Vec<_>>>()
            .map(PhaseVector::new)
    }

    /// Exponents reduced into `0..order`, valid when `q^order = 1`.
    pub fn reduce_mod(&self, order: u32) -> PhaseVector {
        PhaseVector::new(
            self.0
                .iter()
                .map(|m| m.rem_euclid(i64::from(order)))
                .collect::<Vec<_>>(),
        )
    }
}

impl Add for &PhaseVector {
    type Output = PhaseVector;
    fn add(self, rhs: &PhaseVector) -> PhaseVector {
        self.checked_add(rhs).expect("phase exponent overflow")
    }
}

impl Neg for &PhaseVector {
    type Output = PhaseVector;
    fn neg(self) -> PhaseVector {
        self.checked_neg().expect("phase exponent overflow")
    }
}

/// One letter of an operator word.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Factor {
    Ladder(Generator),
    Phase(PhaseVector),
}

impl Factor {
    pub fn adjoint(&self) -> Factor {
        match self {
            Factor::Ladder(g) => Factor::Ladder(g.dagger()),
            Factor::Phase(m) => Factor::Phase(-m),
        }
    }
}

/// Coefficient times a word, read left to right as an operator product.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub coeff: UnitScalar,
    pub word: Vec<Factor>,
}

/// Finite linear combination of operator words.
///
/// Values built with the arithmetic operators are raw products; the output
/// of [`super::normal_order`] holds canonical words only, merged and sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct OpExpr {
    terms: Vec<Term>,
}

impl OpExpr {
    pub fn zero() -> Self {
        OpExpr { terms: Vec::new() }
    }

    pub fn one() -> Self {
        OpExpr::scalar(UnitScalar::one())
    }

    pub fn scalar(s: UnitScalar) -> Self {
        OpExpr::from_term(s, Vec::new())
    }

    pub fn from_term(coeff: UnitScalar, word: Vec<Factor>) -> Self {
        if coeff.is_zero() {
            OpExpr::zero()
        } else {
            OpExpr { terms: vec![Term { coeff, word }] }
        }
    }

    pub fn from_terms(terms: impl IntoIterator<Item = Term>) -> Self {
        OpExpr { terms: terms.into_iter().filter(|t| !t.coeff.is_zero()).collect() }
    }

    pub fn generator(g: Generator) -> Self {
        OpExpr::from_term(UnitScalar::one(), vec![Factor::Ladder(g)])
    }

    pub fn ann(mode: ModeId) -> Self {
        OpExpr::generator(Generator::ann(mode))
    }

    pub fn cre(mode: ModeId) -> Self {
        OpExpr::generator(Generator::cre(mode))
    }

    /// `N_k = a_k† a_k`.
    pub fn number(mode: ModeId) -> Self {
        &OpExpr::cre(mode) * &OpExpr::ann(mode)
    }

    pub fn phase(m: PhaseVector) -> Self {
        if m.is_zero() {
            OpExpr::one()
        } else {
            OpExpr::from_term(UnitScalar::one(), vec![Factor::Phase(m)])
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, s: &UnitScalar) -> OpExpr {
        OpExpr::from_terms(self.terms.iter().map(|t| Term {
            coeff: &t.coeff * s,
            word: t.word.clone(),
        }))
    }

    /// Longest word length.
    pub fn max_word_len(&self) -> usize {
        self.terms.iter().map(|t| t.word.len()).max().unwrap_or(0)
    }

    /// Word-level adjoint without normal ordering.
    pub fn adjoint_raw(&self) -> OpExpr {
        OpExpr::from_terms(self.terms.iter().map(|t| Term {
            coeff: t.coeff.conj(),
            word: t.word.iter().rev().map(Factor::adjoint).collect(),
        }))
    }

    /// Renders with mode names from `spec`, e.g. `(-1)*ad[b]*phase[1,1]`.
    pub fn display<'a>(&'a self, spec: &'a AlgebraSpec) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, spec }
    }
}

impl From<UnitScalar> for OpExpr {
    fn from(s: UnitScalar) -> Self {
        OpExpr::scalar(s)
    }
}

impl Add for &OpExpr {
    type Output = OpExpr;
    fn add(self, rhs: &OpExpr) -> OpExpr {
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        OpExpr { terms }
    }
}

impl Add for OpExpr {
    type Output = OpExpr;
    fn add(mut self, rhs: OpExpr) -> OpExpr {
        self.terms.extend(rhs.terms);
        self
    }
}

impl Neg for &OpExpr {
    type Output = OpExpr;
    fn neg(self) -> OpExpr {
        self.scale(&-UnitScalar::one())
    }
}

impl Neg for OpExpr {
    type Output = OpExpr;
    fn neg(self) -> OpExpr {
        -&self
    }
}

impl Sub for &OpExpr {
    type Output = OpExpr;
    fn sub(self, rhs: &OpExpr) -> OpExpr {
        self + &(-rhs)
    }
}

impl Sub for OpExpr {
    type Output = OpExpr;
    fn sub(self, rhs: OpExpr) -> OpExpr {
        &self - &rhs
    }
}

/// Concatenation of words; no rewriting.
impl Mul for &OpExpr {
    type Output = OpExpr;
    fn mul(self, rhs: &OpExpr) -> OpExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for l in &self.terms {
            for r in &rhs.terms {
                let mut word = l.word.clone();
                word.extend(r.word.iter().cloned());
                terms.push(Term { coeff: &l.coeff * &r.coeff, word });
            }
        }
        OpExpr::from_terms(terms)
    }
}

impl Mul for OpExpr {
    type Output = OpExpr;
    fn mul(self, rhs: OpExpr) -> OpExpr {
        &self * &rhs
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a OpExpr,
    spec: &'a AlgebraSpec,
}

impl ExprDisplay<'_> {
    fn mode_name(&self, m: ModeId) -> &str {
        self.spec.modes().get(m.0).map(|x| x.name.as_str()).unwrap_or("?")
    }

    fn write_factor(&self, f: &mut fmt::Formatter<'_>, factor: &Factor, power: usize) -> fmt::Result {
        match factor {
            Factor::Ladder(g) => {
                let tag = match g.kind {
                    LadderKind::Create => "ad",
                    LadderKind::Annihilate => "a",
                };
                write!(f, "{tag}[{}]", self.mode_name(g.mode))?;
            }
            Factor::Phase(m) => {
                f.write_str("phase[")?;
                let n = self.spec.len().max(m.support_len());
                for (k, e) in m.to_vec(n).iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{e}")?;
                }
                f.write_str("]")?;
            }
        }
        if power > 1 {
            write!(f, "^{power}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.expr.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, term) in self.expr.terms.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            if term.word.is_empty() {
                if term.coeff.num_terms() == 1 {
                    write!(f, "{}", term.coeff)?;
                } else {
                    write!(f, "({})", term.coeff)?;
                }
                continue;
            }
            if !term.coeff.is_one() {
                write!(f, "({})*", term.coeff)?;
            }
            // Runs of identical factors print as powers.
            let mut i = 0;
            let mut first = true;
            while i < term.word.len() {
                let mut j = i + 1;
                while j < term.word.len() && term.word[j] == term.word[i] {
                    j += 1;
                }
                if !first {
                    f.write_str("*")?;
                }
                first = false;
                self.write_factor(f, &term.word[i], j - i)?;
                i = j;
            }
        }
        Ok(())
    }
}
