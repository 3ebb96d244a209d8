//! Exact scalars: Laurent polynomials in a unit-modulus parameter `q` with
//! Gaussian-rational coefficients.
//!
//! Because `|q| = 1`, complex conjugation sends `q` to `q^-1`; this is the
//! star structure used by operator adjoints. Numeric evaluation substitutes
//! `q = e^{iθ}`.

use alloc::collections::BTreeMap;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Errors raised by exact scalar arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("exponent of q overflowed the machine integer range")]
    ExponentOverflow,
    #[error("scalar is not invertible as a monomial")]
    NotInvertible,
}

/// Exact complex rational `re + i·im`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Gaussian {
    pub re: BigRational,
    pub im: BigRational,
}

impl Gaussian {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Gaussian { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Gaussian::new(BigRational::from_integer(BigInt::from(n)), BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Gaussian::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    pub fn i() -> Self {
        Gaussian::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        Gaussian::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Gaussian::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re.clone(), -self.im.clone())
    }

    /// `|z|^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Gaussian::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Phase angle in radians, snapped exactly for the quarter turns.
    pub fn arg(&self) -> f64 {
        if self.im.is_zero() {
            if self.re.is_negative() {
                core::f64::consts::PI
            } else {
                0.0
            }
        } else if self.re.is_zero() {
            if self.im.is_negative() {
                -core::f64::consts::FRAC_PI_2
            } else {
                core::f64::consts::FRAC_PI_2
            }
        } else {
            let z = self.to_complex();
            libm::atan2(z.im, z.re)
        }
    }
}

impl Add for &Gaussian {
    type Output = Gaussian;
    fn add(self, rhs: &Gaussian) -> Gaussian {
        Gaussian::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Mul for &Gaussian {
    type Output = Gaussian;
    fn mul(self, rhs: &Gaussian) -> Gaussian {
        Gaussian::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Neg for &Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-self.re.clone(), -self.im.clone())
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "({},{})", self.re, self.im)
        }
    }
}

/// `e^{i k θ}`, exact when `kθ` is a multiple of `π/2`.
///
/// Snapping keeps parity operators exactly involutive at `θ = π`.
pub fn unit_phase(theta: f64, k: i64) -> Complex64 {
    unit_angle(theta * k as f64)
}

/// `e^{i φ}` with the same quarter-turn snapping as [`unit_phase`].
pub fn unit_angle(phi: f64) -> Complex64 {
    let quarters = phi / core::f64::consts::FRAC_PI_2;
    let nearest = libm::round(quarters);
    if libm::fabs(quarters - nearest) < 1e-12 {
        match (nearest as i64).rem_euclid(4) {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    } else {
        Complex64::new(libm::cos(phi), libm::sin(phi))
    }
}

/// Laurent polynomial `Σ c_k q^k` in canonical sparse form.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UnitScalar {
    coeffs: BTreeMap<i64, Gaussian>,
}

impl UnitScalar {
    pub fn zero() -> Self {
        UnitScalar::default()
    }

    pub fn one() -> Self {
        UnitScalar::constant(Gaussian::one())
    }

    pub fn from_int(n: i64) -> Self {
        UnitScalar::constant(Gaussian::from_int(n))
    }

    pub fn constant(c: Gaussian) -> Self {
        UnitScalar::monomial(c, 0)
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        UnitScalar::monomial(Gaussian::one(), k)
    }

    pub fn i() -> Self {
        UnitScalar::constant(Gaussian::i())
    }

    /// `c·q^k`.
    pub fn monomial(c: Gaussian, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        UnitScalar { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(Gaussian::is_one)
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Gaussian)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn coefficient(&self, k: i64) -> Gaussian {
        self.coeffs.get(&k).cloned().unwrap_or_else(Gaussian::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    fn accumulate(&mut self, k: i64, c: Gaussian) {
        if c.is_zero() {
            return;
        }
        let sum = match self.coeffs.get(&k) {
            Some(old) => old + &c,
            None => c,
        };
        if sum.is_zero() {
            self.coeffs.remove(&k);
        } else {
            self.coeffs.insert(k, sum);
        }
    }

    pub fn checked_mul(&self, rhs: &UnitScalar) -> Result<UnitScalar, ScalarError> {
        let mut out = UnitScalar::zero();
        for (k1, c1) in &self.coeffs {
            for (k2, c2) in &rhs.coeffs {
                let k = k1.checked_add(*k2).ok_or(ScalarError::ExponentOverflow)?;
                out.accumulate(k, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn checked_conj(&self) -> Result<UnitScalar, ScalarError> {
        let mut out = UnitScalar::zero();
        for (k, c) in &self.coeffs {
            let k = k.checked_neg().ok_or(ScalarError::ExponentOverflow)?;
            out.coeffs.insert(k, c.conj());
        }
        Ok(out)
    }

    /// Complex conjugation with `q ↦ q^-1`.
    ///
    /// Panics only if an exponent equals `i64::MIN`; see [`Self::checked_conj`].
    pub fn conj(&self) -> UnitScalar {
        self.checked_conj().expect("q exponent overflow in conj")
    }

    /// `Σ c_k e^{ikθ}`.
    pub fn eval(&self, theta: f64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(k, c)| c.to_complex() * unit_phase(theta, *k))
            .fold(Complex64::new(0.0, 0.0), |acc, z| acc + z)
    }

    /// Returns `(c, k)` when the scalar is a single term `c·q^k`.
    pub fn as_monomial(&self) -> Option<(&Gaussian, i64)> {
        if self.coeffs.len() == 1 {
            self.coeffs.iter().next().map(|(k, c)| (c, *k))
        } else {
            None
        }
    }

    /// `c·q^k` with `|c| = 1`.
    pub fn is_unit_monomial(&self) -> bool {
        self.as_monomial().is_some_and(|(c, _)| c.norm_sqr().is_one())
    }

    /// Inverse of a monomial scalar.
    pub fn monomial_inverse(&self) -> Result<UnitScalar, ScalarError> {
        let (c, k) = self.as_monomial().ok_or(ScalarError::NotInvertible)?;
        let k = k.checked_neg().ok_or(ScalarError::ExponentOverflow)?;
        Ok(UnitScalar::monomial(c.inv().ok_or(ScalarError::NotInvertible)?, k))
    }

    /// Integer power of a monomial scalar (negative powers invert).
    pub fn monomial_pow(&self, n: i64) -> Result<UnitScalar, ScalarError> {
        let base = if n < 0 { self.monomial_inverse()? } else { self.clone() };
        let mut out = UnitScalar::one();
        for _ in 0..n.unsigned_abs() {
            out = out.checked_mul(&base)?;
        }
        Ok(out)
    }

    /// Substitutes `q = e^{2πi/order}` exactly; only orders 1, 2 and 4 keep
    /// coefficients Gaussian-rational.
    pub fn specialize(&self, order: u32) -> UnitScalar {
        let mut out = UnitScalar::zero();
        for (k, c) in &self.coeffs {
            let root = match (order, k.rem_euclid(order as i64)) {
                (1, _) | (_, 0) => Gaussian::one(),
                (2, _) => Gaussian::from_int(-1),
                (4, 1) => Gaussian::i(),
                (4, 2) => Gaussian::from_int(-1),
                (4, _) => -&Gaussian::i(),
                _ => panic!("unsupported root-of-unity order {order}"),
            };
            out.accumulate(0, c * &root);
        }
        out
    }
}

impl From<i64> for UnitScalar {
    fn from(n: i64) -> Self {
        UnitScalar::from_int(n)
    }
}

impl From<Gaussian> for UnitScalar {
    fn from(c: Gaussian) -> Self {
        UnitScalar::constant(c)
    }
}

impl Add for &UnitScalar {
    type Output = UnitScalar;
    fn add(self, rhs: &UnitScalar) -> UnitScalar {
        let mut out = self.clone();
        for (k, c) in &rhs.coeffs {
            out.accumulate(*k, c.clone());
        }
        out
    }
}

impl Add for UnitScalar {
    type Output = UnitScalar;
    fn add(self, rhs: UnitScalar) -> UnitScalar {
        &self + &rhs
    }
}

impl AddAssign<&UnitScalar> for UnitScalar {
    fn add_assign(&mut self, rhs: &UnitScalar) {
        for (k, c) in &rhs.coeffs {
            self.accumulate(*k, c.clone());
        }
    }
}

impl Neg for &UnitScalar {
    type Output = UnitScalar;
    fn neg(self) -> UnitScalar {
        UnitScalar {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for UnitScalar {
    type Output = UnitScalar;
    fn neg(self) -> UnitScalar {
        -&self
    }
}

impl Sub for &UnitScalar {
    type Output = UnitScalar;
    fn sub(self, rhs: &UnitScalar) -> UnitScalar {
        self + &(-rhs)
    }
}

impl Sub for UnitScalar {
    type Output = UnitScalar;
    fn sub(self, rhs: UnitScalar) -> UnitScalar {
        &self - &rhs
    }
}

/// Panics on exponent overflow; use [`UnitScalar::checked_mul`] to handle it.
impl Mul for &UnitScalar {
    type Output = UnitScalar;
    fn mul(self, rhs: &UnitScalar) -> UnitScalar {
        self.checked_mul(rhs).expect("q exponent overflow in product")
    }
}

impl Mul for UnitScalar {
    type Output = UnitScalar;
    fn mul(self, rhs: UnitScalar) -> UnitScalar {
        &self * &rhs
    }
}

/// Renders as e.g. `3/2*q^-1 + (0,1)*q^2`; zero renders as `0`.
impl fmt::Display for UnitScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (idx, (k, c)) in self.coeffs.iter().enumerate() {
            let negative_real = c.is_real() && c.re.is_negative();
            let shown = if idx > 0 && negative_real {
                f.write_str(" - ")?;
                -c
            } else {
                if idx > 0 {
                    f.write_str(" + ")?;
                }
                c.clone()
            };
            match *k {
                0 => write!(f, "{shown}")?,
                _ => {
                    if shown.is_one() {
                    } else if shown == Gaussian::from_int(-1) {
                        f.write_str("-")?;
                    } else {
                        write!(f, "{shown}*")?;
                    }
                    if *k == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}
