//! Truncated Fock-space backend.
//!
//! Boson modes keep occupations `0..D`, fermion modes `0..2`. Basis states are
//! occupation tuples in row-major order (last mode fastest), so the vacuum is
//! index 0. Bare ladder operators of different modes commute; exchange
//! statistics are produced by diagonal phase dressings.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::algebra::{AlgebraError, AlgebraSpec, Factor, LadderKind, ModeId, OpExpr, PhaseVector, Statistics};
use crate::qscalar::{unit_angle, unit_phase};

/// Default cap on the total Hilbert-space dimension.
pub const DEFAULT_DIM_LIMIT: usize = 4096;
pub const DEFAULT_CUTOFF: usize = 4;
/// Tolerance for identities that are exact in floating point.
pub const EXACT_TOL: f64 = 1e-12;
/// Tolerance for composed expressions.
pub const COMPOSED_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FockError {
    #[error("space mode {0} does not exist")]
    UnknownMode(usize),
    #[error("symbolic mode {symbolic} is {expected:?} but space mode {space} is not")]
    StatisticsMismatch { symbolic: usize, space: usize, expected: Statistics },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("total dimension {dim} exceeds the limit {limit}")]
    TooLarge { dim: usize, limit: usize },
    #[error("boson cutoff must be at least 2, got {0}")]
    InvalidCutoff(usize),
    #[error("tolerance must be positive")]
    InvalidTolerance,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalMode {
    pub statistics: Statistics,
    pub dim: usize,
}

impl LocalMode {
    pub fn boson(cutoff: usize) -> Self {
        LocalMode { statistics: Statistics::Boson, dim: cutoff }
    }

    pub fn fermion() -> Self {
        LocalMode { statistics: Statistics::Fermion, dim: 2 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockSpace {
    modes: Vec<LocalMode>,
    strides: Vec<usize>,
    dim: usize,
}

impl FockSpace {
    pub fn new(modes: Vec<LocalMode>) -> Result<Self, FockError> {
        FockSpace::with_limit(modes, DEFAULT_DIM_LIMIT)
    }

    pub fn with_limit(modes: Vec<LocalMode>, limit: usize) -> Result<Self, FockError> {
        let mut dim: usize = 1;
        for m in &modes {
            match m.statistics {
                Statistics::Boson if m.dim < 2 => return Err(FockError::InvalidCutoff(m.dim)),
                Statistics::Fermion if m.dim != 2 => {
                    return Err(FockError::DimensionMismatch { expected: 2, found: m.dim })
                }
                _ => {}
            }
            dim = dim
                .checked_mul(m.dim)
                .filter(|d| *d <= limit)
                .ok_or(FockError::TooLarge { dim: usize::MAX, limit })?;
        }
        let mut strides = vec![1; modes.len()];
        for k in (0..modes.len().saturating_sub(1)).rev() {
            strides[k] = strides[k + 1] * modes[k + 1].dim;
        }
        Ok(FockSpace { modes, strides, dim })
    }

    /// One local factor per mode of `spec`, bosons cut off at `cutoff`.
    pub fn for_spec(spec: &AlgebraSpec, cutoff: usize) -> Result<Self, FockError> {
        FockSpace::new(
            spec.modes()
                .iter()
                .map(|m| match m.statistics {
                    Statistics::Boson => LocalMode::boson(cutoff),
                    Statistics::Fermion => LocalMode::fermion(),
                })
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn modes(&self) -> &[LocalMode] {
        &self.modes
    }

    pub fn num_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.strides[mode]) % self.modes[mode].dim
    }

    pub fn occupations(&self, index: usize) -> Vec<usize> {
        (0..self.modes.len()).map(|k| self.occupation(index, k)).collect()
    }

    pub fn index_of(&self, occupations: &[usize]) -> Option<usize> {
        if occupations.len() != self.modes.len() {
            return None;
        }
        let mut idx = 0;
        for (k, &n) in occupations.iter().enumerate() {
            if n >= self.modes[k].dim {
                return None;
            }
            idx += n * self.strides[k];
        }
        Some(idx)
    }

    /// Every boson occupation at most `D - 2`.
    pub fn is_interior(&self, index: usize) -> bool {
        self.modes.iter().enumerate().all(|(k, m)| {
            m.statistics == Statistics::Fermion || self.occupation(index, k) + 2 <= m.dim
        })
    }

    fn check_mode(&self, mode: usize) -> Result<(), FockError> {
        if mode < self.modes.len() {
            Ok(())
        } else {
            Err(FockError::UnknownMode(mode))
        }
    }
}

/// Sparse complex matrix stored by rows; each row sorted by column.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixOperator {
    dim: usize,
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl MatrixOperator {
    pub fn zero(dim: usize) -> Self {
        MatrixOperator { dim, rows: vec![Vec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        MatrixOperator::from_diagonal(vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn from_diagonal(diag: Vec<Complex64>) -> Self {
        let dim = diag.len();
        let rows = diag
            .into_iter()
            .enumerate()
            .map(|(i, v)| if v == Complex64::new(0.0, 0.0) { Vec::new() } else { vec![(i, v)] })
            .collect();
        MatrixOperator { dim, rows }
    }

    /// Builds from `(row, col, value)` triples; duplicates are summed.
    pub fn from_entries(dim: usize, entries: impl IntoIterator<Item = (usize, usize, Complex64)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, Complex64>> = vec![BTreeMap::new(); dim];
        for (r, c, v) in entries {
            assert!(r < dim && c < dim, "entry ({r},{c}) outside {dim}x{dim}");
            *acc[r].entry(c).or_insert(Complex64::new(0.0, 0.0)) += v;
        }
        MatrixOperator { dim, rows: acc.into_iter().map(finish_row).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.rows[row]
            .binary_search_by_key(&col, |e| e.0)
            .map(|i| self.rows[row][i].1)
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(r, row)| row.iter().map(move |&(c, v)| (r, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn scale(&self, s: Complex64) -> MatrixOperator {
        MatrixOperator {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(|&(c, v)| (c, v * s)).filter(|e| e.1 != Complex64::new(0.0, 0.0)).collect())
                .collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> MatrixOperator {
        MatrixOperator::from_entries(self.dim, self.entries().map(|(r, c, v)| (c, r, v.conj())))
    }

    /// Frobenius norm, summed in row-major order.
    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.entries().fold(0.0, |acc, (_, _, v)| acc + v.norm_sqr()))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &MatrixOperator) -> f64 {
        (self - other).entries().map(|(_, _, v)| v.norm()).fold(0.0, f64::max)
    }

    /// Restriction to the listed basis indices, in that order.
    pub fn compress(&self, keep: &[usize]) -> MatrixOperator {
        let mut pos = vec![usize::MAX; self.dim];
        for (new, &old) in keep.iter().enumerate() {
            pos[old] = new;
        }
        MatrixOperator::from_entries(
            keep.len(),
            keep.iter().enumerate().flat_map(|(new_r, &old_r)| {
                let pos = &pos;
                self.rows[old_r]
                    .iter()
                    .filter(move |(c, _)| pos[*c] != usize::MAX)
                    .map(move |&(c, v)| (new_r, pos[c], v))
            }),
        )
    }

    /// `self · v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim, "vector length mismatch");
        self.rows
            .iter()
            .map(|row| row.iter().fold(Complex64::new(0.0, 0.0), |acc, &(c, x)| acc + x * v[c]))
            .collect()
    }
}

fn finish_row(row: BTreeMap<usize, Complex64>) -> Vec<(usize, Complex64)> {
    row.into_iter().filter(|(_, v)| *v != Complex64::new(0.0, 0.0)).collect()
}

impl Mul for &MatrixOperator {
    type Output = MatrixOperator;
    fn mul(self, rhs: &MatrixOperator) -> MatrixOperator {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BTreeMap::new();
                for &(k, a) in row {
                    for &(j, b) in &rhs.rows[k] {
                        *acc.entry(j).or_insert(Complex64::new(0.0, 0.0)) += a * b;
                    }
                }
                finish_row(acc)
            })
            .collect();
        MatrixOperator { dim: self.dim, rows }
    }
}

fn merge(a: &MatrixOperator, b: &MatrixOperator, sign: f64) -> MatrixOperator {
    assert_eq!(a.dim, b.dim, "matrix dimension mismatch");
    let rows = a
        .rows
        .iter()
        .zip(&b.rows)
        .map(|(ra, rb)| {
            let mut acc: BTreeMap<usize, Complex64> = ra.iter().copied().collect();
            for &(c, v) in rb {
                *acc.entry(c).or_insert(Complex64::new(0.0, 0.0)) += v * sign;
            }
            finish_row(acc)
        })
        .collect();
    MatrixOperator { dim: a.dim, rows }
}

impl Add for &MatrixOperator {
    type Output = MatrixOperator;
    fn add(self, rhs: &MatrixOperator) -> MatrixOperator {
        merge(self, rhs, 1.0)
    }
}

impl Sub for &MatrixOperator {
    type Output = MatrixOperator;
    fn sub(self, rhs: &MatrixOperator) -> MatrixOperator {
        merge(self, rhs, -1.0)
    }
}

/// Bare ladder operator on one factor, identity on the rest.
pub fn ladder_matrix(space: &FockSpace, mode: usize, kind: LadderKind) -> Result<MatrixOperator, FockError> {
    space.check_mode(mode)?;
    let dim = space.modes[mode].dim;
    let stride = space.strides[mode];
    let entries = (0..space.dim).filter_map(|col| {
        let n = space.occupation(col, mode);
        match kind {
            // a|n⟩ = √n |n-1⟩
            LadderKind::Annihilate if n > 0 => Some((col - stride, col, Complex64::new(libm::sqrt(n as f64), 0.0))),
            // a†|n⟩ = √(n+1) |n+1⟩, zero on the top state
            LadderKind::Create if n + 1 < dim => {
                Some((col + stride, col, Complex64::new(libm::sqrt((n + 1) as f64), 0.0)))
            }
            _ => None,
        }
    });
    Ok(MatrixOperator::from_entries(space.dim, entries))
}

/// Diagonal `e^{iθ Σ_k m_k n_k}`, with `m` indexed by space mode.
pub fn phase_matrix(space: &FockSpace, m: &PhaseVector, theta: f64) -> MatrixOperator {
    let exps = m.to_vec(space.num_modes());
    MatrixOperator::from_diagonal(
        (0..space.dim)
            .map(|idx| {
                let s: i64 = exps
                    .iter()
                    .enumerate()
                    .map(|(k, e)| e * space.occupation(idx, k) as i64)
                    .sum();
                unit_phase(theta, s)
            })
            .collect(),
    )
}

/// Maps symbolic mode `i` to space mode `targets[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeAssignment {
    targets: Vec<usize>,
}

impl ModeAssignment {
    pub fn identity(n: usize) -> Self {
        ModeAssignment { targets: (0..n).collect() }
    }

    pub fn new(targets: Vec<usize>) -> Self {
        ModeAssignment { targets }
    }

    pub fn target(&self, mode: ModeId) -> Option<usize> {
        self.targets.get(mode.0).copied()
    }
}

/// How generators of a spec are represented on the bare space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Realization {
    /// Dressed so that the spec's exchange matrix holds exactly:
    /// `a_j ↦ exp(i Σ_{i<j} α_ij N_i) a_j` with `e^{iα_ij} = Q_ij(θ)`.
    #[default]
    Exchange,
    /// Undressed tensor-product operators (all modes commute).
    Bare,
}

/// Evaluates symbolic expressions as matrices at a fixed `θ`.
pub struct Evaluator<'a> {
    spec: &'a AlgebraSpec,
    space: &'a FockSpace,
    theta: f64,
    assignment: ModeAssignment,
    ann: Vec<MatrixOperator>,
    cre: Vec<MatrixOperator>,
}

impl<'a> Evaluator<'a> {
    pub fn new(
        spec: &'a AlgebraSpec,
        space: &'a FockSpace,
        theta: f64,
        assignment: ModeAssignment,
        realization: Realization,
    ) -> Result<Self, FockError> {
        let n = spec.len();
        let mut seen = vec![false; space.num_modes()];
        for i in 0..n {
            let t = assignment.target(ModeId(i)).ok_or(FockError::DimensionMismatch {
                expected: n,
                found: assignment.targets.len(),
            })?;
            space.check_mode(t)?;
            let expected = spec.statistics(ModeId(i));
            if space.modes[t].statistics != expected || seen[t] {
                return Err(FockError::StatisticsMismatch { symbolic: i, space: t, expected });
            }
            seen[t] = true;
        }
        let mut ann = Vec::with_capacity(n);
        let mut cre = Vec::with_capacity(n);
        for j in 0..n {
            let t = assignment.targets[j];
            let bare = ladder_matrix(space, t, LadderKind::Annihilate)?;
            let a = match realization {
                Realization::Bare => bare,
                Realization::Exchange => {
                    let angles: Vec<(usize, f64)> = (0..j)
                        .filter_map(|i| {
                            let q = spec.q(ModeId(i), ModeId(j));
                            let (c, k) = q.as_monomial().expect("exchange entries are monomials");
                            let alpha = c.arg() + k as f64 * theta;
                            (alpha != 0.0).then_some((assignment.targets[i], alpha))
                        })
                        .collect();
                    let dressing = MatrixOperator::from_diagonal(
                        (0..space.dim)
                            .map(|idx| {
                                let phi: f64 = angles.iter().map(|&(t, a)| a * space.occupation(idx, t) as f64).sum();
                                unit_angle(phi)
                            })
                            .collect(),
                    );
                    &dressing * &bare
                }
            };
            cre.push(a.adjoint());
            ann.push(a);
        }
        Ok(Evaluator { spec, space, theta, assignment, ann, cre })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn space(&self) -> &FockSpace {
        self.space
    }

    fn phase(&self, m: &PhaseVector) -> Result<MatrixOperator, FockError> {
        if m.support_len() > self.spec.len() {
            return Err(AlgebraError::UnknownMode(m.support_len() - 1).into());
        }
        let mut mapped = vec![0i64; self.space.num_modes()];
        for (i, e) in m.exponents().iter().enumerate() {
            mapped[self.assignment.targets[i]] = *e;
        }
        Ok(phase_matrix(self.space, &PhaseVector::new(mapped), self.theta))
    }

    /// Linear, with words mapped to matrix products in written order.
    pub fn evaluate(&self, e: &OpExpr) -> Result<MatrixOperator, FockError> {
        let mut total = MatrixOperator::zero(self.space.dim);
        for term in e.terms() {
            let mut acc = MatrixOperator::identity(self.space.dim).scale(term.coeff.eval(self.theta));
            for f in &term.word {
                let m = match f {
                    Factor::Ladder(g) => {
                        self.spec.check_mode(g.mode)?;
                        match g.kind {
                            LadderKind::Annihilate => &acc * &self.ann[g.mode.0],
                            LadderKind::Create => &acc * &self.cre[g.mode.0],
                        }
                    }
                    Factor::Phase(m) => &acc * &self.phase(m)?,
                };
                acc = m;
            }
            total = &total + &acc;
        }
        Ok(total)
    }
}

/// Evaluates `e` in the representation of `spec` (exchange realized by
/// dressing) on a hard-truncated space.
pub fn evaluate(
    e: &OpExpr,
    spec: &AlgebraSpec,
    space: &FockSpace,
    theta: f64,
    assignment: ModeAssignment,
) -> Result<MatrixOperator, FockError> {
    Evaluator::new(spec, space, theta, assignment, Realization::Exchange)?.evaluate(e)
}

/// Evaluates on a space where each boson gets as many extra levels as the
/// most creators of that mode in any word, then compresses back to `space`.
/// No intermediate state reaches the enlarged cutoff, so the result holds the
/// exact matrix elements of the untruncated operator between states of `space`.
pub fn evaluate_guarded(e: &OpExpr, spec: &AlgebraSpec, space: &FockSpace, theta: f64) -> Result<MatrixOperator, FockError> {
    let mut guard = vec![0usize; spec.len()];
    for term in e.terms() {
        let mut count = vec![0usize; spec.len()];
        for f in &term.word {
            if let Factor::Ladder(g) = f {
                spec.check_mode(g.mode)?;
                if g.kind == LadderKind::Create {
                    count[g.mode.0] += 1;
                }
            }
        }
        for (g, c) in guard.iter_mut().zip(count) {
            *g = (*g).max(c);
        }
    }
    if space.num_modes() != spec.len() {
        return Err(FockError::DimensionMismatch { expected: spec.len(), found: space.num_modes() });
    }
    let big_modes: Vec<LocalMode> = space
        .modes
        .iter()
        .zip(&guard)
        .map(|(m, g)| match m.statistics {
            Statistics::Boson => LocalMode::boson(m.dim + g),
            Statistics::Fermion => *m,
        })
        .collect();
    let big = FockSpace::with_limit(big_modes, DEFAULT_DIM_LIMIT * 64)?;
    let x = evaluate(e, spec, &big, theta, ModeAssignment::identity(spec.len()))?;
    let keep: Vec<usize> = (0..space.dim)
        .map(|i| big.index_of(&space.occupations(i)).expect("small basis embeds in big basis"))
        .collect();
    Ok(x.compress(&keep))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    Frobenius,
}

/// Matrix entry outside the interior block.
#[derive(Clone, Debug, PartialEq)]
pub struct Defect {
    pub row: usize,
    pub col: usize,
    pub value: Complex64,
    pub row_occupations: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckReport {
    pub norm: NormKind,
    pub full_residual: f64,
    pub interior_residual: f64,
    pub tol: f64,
    pub pass: bool,
    /// Largest entries outside the interior block, at most 16.
    pub defects: Vec<Defect>,
}

const MAX_DEFECTS: usize = 16;

/// Zero test on the interior block `P X P`, P = all boson occupations ≤ D-2.
pub fn check_zero(x: &MatrixOperator, space: &FockSpace, tol: f64) -> Result<CheckReport, FockError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(FockError::InvalidTolerance);
    }
    if x.dim() != space.dim() {
        return Err(FockError::DimensionMismatch { expected: space.dim(), found: x.dim() });
    }
    let interior: Vec<bool> = (0..space.dim()).map(|i| space.is_interior(i)).collect();
    let mut inner = 0.0;
    let mut defects = Vec::new();
    for (r, c, v) in x.entries() {
        if interior[r] && interior[c] {
            inner += v.norm_sqr();
        } else if v.norm() > tol {
            defects.push(Defect { row: r, col: c, value: v, row_occupations: space.occupations(r) });
        }
    }
    defects.sort_by(|a, b| b.value.norm().total_cmp(&a.value.norm()).then((a.row, a.col).cmp(&(b.row, b.col))));
    defects.truncate(MAX_DEFECTS);
    let interior_residual = libm::sqrt(inner);
    Ok(CheckReport {
        norm: NormKind::Frobenius,
        full_residual: x.frobenius_norm(),
        interior_residual,
        tol,
        pass: interior_residual <= tol,
        defects,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateNorm {
    pub norm2: f64,
    /// A creator hit the boson cutoff; the result is the truncated value.
    pub truncated: bool,
}

/// `‖w|0⟩‖²` for a word of bare creators (space mode indices), applied
/// rightmost first.
pub fn state_norm2(space: &FockSpace, creators: &[usize]) -> Result<StateNorm, FockError> {
    let mut occ = vec![0usize; space.num_modes()];
    let mut norm2 = 1.0;
    let mut truncated = false;
    for &k in creators.iter().rev() {
        space.check_mode(k)?;
        let m = space.modes[k];
        if occ[k] + 1 >= m.dim {
            if m.statistics == Statistics::Boson {
                truncated = true;
            }
            norm2 = 0.0;
            continue;
        }
        occ[k] += 1;
        norm2 *= occ[k] as f64;
    }
    Ok(StateNorm { norm2, truncated })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn single_boson_annihilator() {
        let space = FockSpace::new(vec![LocalMode::boson(3)]).unwrap();
        let a = ladder_matrix(&space, 0, LadderKind::Annihilate).unwrap();
        assert_eq!(a.get(0, 1), c(1.0));
        assert_eq!(a.get(1, 2), c(libm::sqrt(2.0)));
        assert_eq!(a.nnz(), 2);
    }

    #[test]
    fn fermion_annihilator_is_nilpotent() {
        let space = FockSpace::new(vec![LocalMode::fermion()]).unwrap();
        let a = ladder_matrix(&space, 0, LadderKind::Annihilate).unwrap();
        assert_eq!(a.get(0, 1), c(1.0));
        assert_eq!((&a * &a).nnz(), 0);
    }

    #[test]
    fn bare_modes_commute() {
        let space = FockSpace::new(vec![LocalMode::boson(3), LocalMode::boson(3)]).unwrap();
        let a = ladder_matrix(&space, 0, LadderKind::Annihilate).unwrap();
        let b = ladder_matrix(&space, 1, LadderKind::Create).unwrap();
        assert_eq!((&(&a * &b) - &(&b * &a)).nnz(), 0);
    }

    #[test]
    fn parity_on_two_qubit_bosons() {
        let space = FockSpace::new(vec![LocalMode::boson(2), LocalMode::boson(2)]).unwrap();
        let p = phase_matrix(&space, &PhaseVector::ones(2), PI);
        let diag: Vec<_> = (0..4).map(|i| p.get(i, i)).collect();
        assert_eq!(diag, [c(1.0), c(-1.0), c(-1.0), c(1.0)]);
        assert_eq!(&p * &p, MatrixOperator::identity(4));
        assert_eq!(phase_matrix(&space, &PhaseVector::zero(), 0.7), MatrixOperator::identity(4));
    }

    #[test]
    fn basis_is_row_major() {
        let space = FockSpace::new(vec![LocalMode::boson(3), LocalMode::fermion(), LocalMode::boson(2)]).unwrap();
        assert_eq!(space.dim(), 12);
        for i in 0..space.dim() {
            assert_eq!(space.index_of(&space.occupations(i)), Some(i));
        }
        assert_eq!(space.occupations(1), [0, 0, 1]);
        assert!(FockSpace::new(vec![LocalMode::boson(100); 3]).is_err());
        assert!(FockSpace::new(vec![LocalMode::boson(1)]).is_err());
    }

    #[test]
    fn ccr_defect_at_top_state() {
        let spec = AlgebraSpec::bosons(&["a"]).unwrap();
        let space = FockSpace::for_spec(&spec, 4).unwrap();
        let a = OpExpr::ann(ModeId(0));
        let ad = OpExpr::cre(ModeId(0));
        let x = &(&(&a * &ad) - &(&ad * &a)) - &OpExpr::one();
        let m = evaluate(&x, &spec, &space, PI, ModeAssignment::identity(1)).unwrap();
        let report = check_zero(&m, &space, EXACT_TOL).unwrap();
        assert!(report.pass);
        assert!(report.interior_residual < EXACT_TOL);
        assert!((report.full_residual - 4.0).abs() < EXACT_TOL);
        assert_eq!(report.defects.len(), 1);
        assert!((report.defects[0].value - c(-4.0)).norm() < EXACT_TOL);
        assert_eq!(report.defects[0].row_occupations, [3]);
    }

    #[test]
    fn zero_matrix_passes() {
        let space = FockSpace::new(vec![LocalMode::boson(3)]).unwrap();
        let r = check_zero(&MatrixOperator::zero(3), &space, 1e-12).unwrap();
        assert!(r.pass && r.full_residual == 0.0 && r.interior_residual == 0.0);
        assert_eq!(check_zero(&MatrixOperator::zero(3), &space, 0.0), Err(FockError::InvalidTolerance));
        assert!(check_zero(&MatrixOperator::zero(2), &space, 1.0).is_err());
    }

    #[test]
    fn state_norms() {
        let space = FockSpace::new(vec![LocalMode::boson(5), LocalMode::fermion()]).unwrap();
        assert_eq!(state_norm2(&space, &[]).unwrap(), StateNorm { norm2: 1.0, truncated: false });
        assert_eq!(state_norm2(&space, &[0, 0, 0]).unwrap().norm2, 6.0);
        assert_eq!(state_norm2(&space, &[1, 1]).unwrap(), StateNorm { norm2: 0.0, truncated: false });
        assert_eq!(state_norm2(&space, &[0; 5]).unwrap(), StateNorm { norm2: 0.0, truncated: true });
    }

    #[test]
    fn statistics_mismatch_is_rejected() {
        let spec = AlgebraSpec::fermions(&["c"]).unwrap();
        let space = FockSpace::new(vec![LocalMode::boson(3)]).unwrap();
        assert!(matches!(
            Evaluator::new(&spec, &space, PI, ModeAssignment::identity(1), Realization::Bare),
            Err(FockError::StatisticsMismatch { .. })
        ));
    }
}
