use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::qscalar::{Gaussian, UnitScalar};

use super::{AlgebraError, ModeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Statistics {
    Boson,
    Fermion,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mode {
    pub name: String,
    pub statistics: Statistics,
}

/// How the deformation parameter is treated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum QMode {
    /// `q` stays a formal unit-modulus symbol.
    #[default]
    Formal,
    /// `q = e^{2πi/order}` with `order ∈ {1, 2, 4}`; `order = 2` is `q = -1`.
    RootOfUnity(u32),
}

impl QMode {
    pub const MINUS_ONE: QMode = QMode::RootOfUnity(2);

    pub fn order(self) -> Option<u32> {
        match self {
            QMode::Formal => None,
            QMode::RootOfUnity(n) => Some(n),
        }
    }

    /// Angle at which numeric evaluation is consistent with this mode.
    pub fn theta(self) -> Option<f64> {
        self.order()
            .map(|n| 2.0 * core::f64::consts::PI / f64::from(n))
    }

    pub fn reduce(self, s: &UnitScalar) -> UnitScalar {
        match self {
            QMode::Formal => s.clone(),
            QMode::RootOfUnity(n) => s.specialize(n),
        }
    }
}

/// Cross-mode exchange factors `Q_ij`.
///
/// Only `i < j` entries are stored; `Q_ii = 1` and `Q_ji = Q_ij^-1`.
/// Absent entries are `1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExchangeMatrix {
    n: usize,
    upper: BTreeMap<(usize, usize), UnitScalar>,
}

impl ExchangeMatrix {
    /// All modes mutually commuting.
    pub fn identity(n: usize) -> Self {
        ExchangeMatrix { n, upper: BTreeMap::new() }
    }

    /// Every off-diagonal `Q_ij` (`i < j`) set to `value`.
    pub fn uniform(n: usize, value: UnitScalar) -> Result<Self, AlgebraError> {
        let mut m = ExchangeMatrix::identity(n);
        for i in 0..n {
            for j in i + 1..n {
                m.set(i, j, value.clone())?;
            }
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Sets `Q_ij`; for `i > j` the inverse is stored as `Q_ji`.
    pub fn set(&mut self, i: usize, j: usize, value: UnitScalar) -> Result<(), AlgebraError> {
        if i >= self.n || j >= self.n {
            return Err(AlgebraError::UnknownMode(i.max(j)));
        }
        if !is_allowed_exchange(&value) {
            return Err(AlgebraError::InvalidExchange { i, j });
        }
        if i == j {
            return if value.is_one() {
                Ok(())
            } else {
                Err(AlgebraError::InvalidExchange { i, j })
            };
        }
        let (key, value) = if i < j {
            ((i, j), value)
        } else {
            ((j, i), value.monomial_inverse()?)
        };
        if value.is_one() {
            self.upper.remove(&key);
        } else {
            self.upper.insert(key, value);
        }
        Ok(())
    }

    pub fn get(&self, i: usize, j: usize) -> UnitScalar {
        use core::cmp::Ordering::*;
        match i.cmp(&j) {
            Equal => UnitScalar::one(),
            Less => self.upper.get(&(i, j)).cloned().unwrap_or_else(UnitScalar::one),
            Greater => self
                .upper
                .get(&(j, i))
                .map(|v| v.monomial_inverse().expect("stored exchange is a unit monomial"))
                .unwrap_or_else(UnitScalar::one),
        }
    }

    /// Strictly upper entries that differ from 1.
    pub fn nontrivial(&self) -> impl Iterator<Item = ((usize, usize), &UnitScalar)> {
        self.upper.iter().map(|(k, v)| (*k, v))
    }

    pub fn map_entries(&self, f: impl Fn(&UnitScalar) -> UnitScalar) -> Result<Self, AlgebraError> {
        let mut out = ExchangeMatrix::identity(self.n);
        for ((i, j), v) in &self.upper {
            out.set(*i, *j, f(v))?;
        }
        Ok(out)
    }
}

/// Unit monomial `c·q^k` with `|c| = 1`.
fn is_allowed_exchange(s: &UnitScalar) -> bool {
    s.is_unit_monomial()
}

/// Modes, their statistics, the exchange matrix and the q treatment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraSpec {
    modes: Vec<Mode>,
    exchange: ExchangeMatrix,
    q_mode: QMode,
}

impl AlgebraSpec {
    pub fn new(modes: Vec<Mode>) -> Result<Self, AlgebraError> {
        for (idx, m) in modes.iter().enumerate() {
            if modes[..idx].iter().any(|o| o.name == m.name) {
                return Err(AlgebraError::DuplicateMode(m.name.clone()));
            }
        }
        let n = modes.len();
        Ok(AlgebraSpec { modes, exchange: ExchangeMatrix::identity(n), q_mode: QMode::Formal })
    }

    /// Convenience constructor from `(name, statistics)` pairs.
    pub fn with_modes<'a>(
        modes: impl IntoIterator<Item = (&'a str, Statistics)>,
    ) -> Result<Self, AlgebraError> {
        AlgebraSpec::new(
            modes
                .into_iter()
                .map(|(name, statistics)| Mode { name: name.into(), statistics })
                .collect(),
        )
    }

    pub fn bosons(names: &[&str]) -> Result<Self, AlgebraError> {
        AlgebraSpec::with_modes(names.iter().map(|n| (*n, Statistics::Boson)))
    }

    pub fn fermions(names: &[&str]) -> Result<Self, AlgebraError> {
        AlgebraSpec::with_modes(names.iter().map(|n| (*n, Statistics::Fermion)))
    }

    pub fn with_q_mode(mut self, q_mode: QMode) -> Result<Self, AlgebraError> {
        if let QMode::RootOfUnity(n) = q_mode {
            if !matches!(n, 1 | 2 | 4) {
                return Err(AlgebraError::UnsupportedRoot(n));
            }
        }
        self.q_mode = q_mode;
        let exchange = self.exchange.map_entries(|v| q_mode.reduce(v))?;
        self.exchange = exchange;
        Ok(self)
    }

    pub fn with_exchange(mut self, i: ModeId, j: ModeId, value: UnitScalar) -> Result<Self, AlgebraError> {
        let value = self.q_mode.reduce(&value);
        self.exchange.set(i.0, j.0, value)?;
        Ok(self)
    }

    pub fn with_exchange_matrix(mut self, exchange: ExchangeMatrix) -> Result<Self, AlgebraError> {
        if exchange.len() != self.modes.len() {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.modes.len(),
                found: exchange.len(),
            });
        }
        let q_mode = self.q_mode;
        self.exchange = exchange.map_entries(|v| q_mode.reduce(v))?;
        Ok(self)
    }

    /// Sets every off-diagonal exchange factor to `value`.
    pub fn with_uniform_exchange(self, value: UnitScalar) -> Result<Self, AlgebraError> {
        let m = ExchangeMatrix::uniform(self.modes.len(), value)?;
        self.with_exchange_matrix(m)
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn mode(&self, name: &str) -> Result<ModeId, AlgebraError> {
        self.modes
            .iter()
            .position(|m| m.name == name)
            .map(ModeId)
            .ok_or_else(|| AlgebraError::UnknownModeName(name.into()))
    }

    pub fn name(&self, id: ModeId) -> &str {
        &self.modes[id.0].name
    }

    pub fn statistics(&self, id: ModeId) -> Statistics {
        self.modes[id.0].statistics
    }

    pub fn exchange(&self) -> &ExchangeMatrix {
        &self.exchange
    }

    pub fn q(&self, i: ModeId, j: ModeId) -> UnitScalar {
        self.exchange.get(i.0, j.0)
    }

    pub fn q_mode(&self) -> QMode {
        self.q_mode
    }

    pub fn check_mode(&self, id: ModeId) -> Result<(), AlgebraError> {
        if id.0 < self.modes.len() {
            Ok(())
        } else {
            Err(AlgebraError::UnknownMode(id.0))
        }
    }

    /// `-1` as an exchange factor, handy for abnormal pairs.
    pub fn minus_one() -> UnitScalar {
        UnitScalar::constant(Gaussian::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exchange_inverse_symmetry() {
        let mut q = ExchangeMatrix::identity(3);
        q.set(0, 2, UnitScalar::q_pow(1)).unwrap();
        assert_eq!(q.get(2, 0), UnitScalar::q_pow(-1));
        assert!(q.get(1, 1).is_one());
        assert!(q.get(0, 1).is_one());
        q.set(2, 1, UnitScalar::i()).unwrap();
        assert_eq!(q.get(1, 2), -UnitScalar::i());
    }

    #[test]
    fn rejects_non_unit_exchange() {
        let mut q = ExchangeMatrix::identity(2);
        assert!(q.set(0, 1, UnitScalar::from_int(2)).is_err());
        assert!(q.set(0, 1, &UnitScalar::one() + &UnitScalar::q_pow(1)).is_err());
        assert!(q.set(0, 0, UnitScalar::from_int(-1)).is_err());
    }

    #[test]
    fn duplicate_names_rejected() {
        assert_eq!(
            AlgebraSpec::bosons(&["a", "a"]),
            Err(AlgebraError::DuplicateMode("a".into()))
        );
    }

    #[test]
    fn specialization_reduces_exchange() {
        let spec = AlgebraSpec::bosons(&["a", "b"])
            .unwrap()
            .with_exchange(ModeId(0), ModeId(1), UnitScalar::q_pow(1))
            .unwrap()
            .with_q_mode(QMode::MINUS_ONE)
            .unwrap();
        assert_eq!(spec.q(ModeId(0), ModeId(1)), UnitScalar::from_int(-1));
        assert!(AlgebraSpec::bosons(&["a"]).unwrap().with_q_mode(QMode::RootOfUnity(3)).is_err());
    }
}
