//! Translation-invariant operators on the walker lattice.
//!
//! Every operator built from the step operators `E+` and `E-` is a Laurent
//! polynomial in the shift. A [`LaurentOperator`] stores the coefficient of
//! each power, so that its infinite matrix realization is
//! `(A)_{ij} = coeff(i - j)`. Products are convolutions, and since the shifts
//! commute, so does the product.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, RangeInclusive, Sub};

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::WalkError;

/// Coefficients below this magnitude are dropped after every composite operation.
pub const TRIM_EPS: f64 = 1e-14;

/// A finite-support Laurent polynomial in the lattice shift with complex coefficients.
#[derive(Clone, Default, PartialEq)]
pub struct LaurentOperator {
    coeffs: BTreeMap<i64, Complex64>,
}

impl LaurentOperator {
    /// The zero operator (empty support).
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn identity() -> Self {
        Self::monomial(0, Complex64::new(1.0, 0.0))
    }

    /// `value * E+^degree` (a negative degree shifts left).
    pub fn monomial(degree: i64, value: Complex64) -> Self {
        Self::from_coeffs([(degree, value)])
    }

    /// `E+`, the unit right translation `|m> -> |m+1>`.
    pub fn step_right() -> Self {
        Self::monomial(1, Complex64::new(1.0, 0.0))
    }

    /// `E-`, the unit left translation `|m> -> |m-1>`.
    pub fn step_left() -> Self {
        Self::monomial(-1, Complex64::new(1.0, 0.0))
    }

    /// Builds an operator from `(degree, coefficient)` pairs. Repeated degrees are summed.
    pub fn from_coeffs<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (d, c) in coeffs {
            *map.entry(d).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        Self::trimmed(map)
    }

    /// Real-coefficient convenience constructor.
    pub fn from_real<I>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = (i64, f64)>,
    {
        Self::from_coeffs(coeffs.into_iter().map(|(d, v)| (d, Complex64::new(v, 0.0))))
    }

    fn trimmed(mut coeffs: BTreeMap<i64, Complex64>) -> Self {
        coeffs.retain(|_, c| c.norm() >= TRIM_EPS);
        Self { coeffs }
    }

    pub fn coeff(&self, degree: i64) -> Complex64 {
        self.coeffs.get(&degree).copied().unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs.iter().map(|(&d, &c)| (d, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Number of stored (nonzero) coefficients.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Smallest and largest degree with a stored coefficient.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        let lo = *self.coeffs.keys().next()?;
        let hi = *self.coeffs.keys().next_back()?;
        Some((lo, hi))
    }

    /// Largest `|degree|` in the support, zero for the empty operator.
    pub fn degree_span(&self) -> i64 {
        self.degree_range().map(|(lo, hi)| lo.abs().max(hi.abs())).unwrap_or(0)
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::trimmed(self.coeffs.iter().map(|(&d, &c)| (d, c * factor)).collect())
    }

    /// Multiplies by `E+^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&d, &c)| (d + k, c)).collect(),
        }
    }

    /// Operator adjoint: `coeff(d) -> conj(coeff(-d))`.
    pub fn adjoint(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(&d, &c)| (-d, c.conj())).collect(),
        }
    }

    /// Entry-wise product `A ∘ conj(B)` of the matrix realizations, which is
    /// the degree-wise product of coefficients.
    pub fn hadamard_conj(&self, other: &Self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .filter_map(|(d, a)| other.coeffs.get(d).map(|b| (*d, a * b.conj())))
            .collect();
        Self::trimmed(coeffs)
    }

    /// Sum of all coefficients: the common row and column sum of the realization.
    pub fn coefficient_sum(&self) -> Complex64 {
        self.coeffs.values().sum()
    }

    /// Largest coefficient-wise difference `max_d |a_d - b_d|`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst = 0.0_f64;
        for (d, a) in &self.coeffs {
            worst = worst.max((a - other.coeff(*d)).norm());
        }
        for (d, b) in &other.coeffs {
            if !self.coeffs.contains_key(d) {
                worst = worst.max(b.norm());
            }
        }
        worst
    }

    /// Dense window `(i, j) -> coeff(i - j)` for `i, j` in `window`.
    pub fn to_dense(&self, window: RangeInclusive<i64>) -> Result<Array2<Complex64>, WalkError> {
        let (lo, hi) = (*window.start(), *window.end());
        if hi < lo {
            return Err(WalkError::EmptyWindow);
        }
        let n = (hi - lo + 1) as usize;
        Ok(Array2::from_shape_fn((n, n), |(i, j)| self.coeff(i as i64 - j as i64)))
    }
}

impl fmt::Debug for LaurentOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.coeffs.iter()).finish()
    }
}

impl Add for &LaurentOperator {
    type Output = LaurentOperator;

    fn add(self, rhs: &LaurentOperator) -> LaurentOperator {
        let mut map = self.coeffs.clone();
        for (d, c) in &rhs.coeffs {
            *map.entry(*d).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        LaurentOperator::trimmed(map)
    }
}

impl Add for LaurentOperator {
    type Output = LaurentOperator;

    fn add(self, rhs: LaurentOperator) -> LaurentOperator {
        &self + &rhs
    }
}

impl Neg for &LaurentOperator {
    type Output = LaurentOperator;

    fn neg(self) -> LaurentOperator {
        LaurentOperator {
            coeffs: self.coeffs.iter().map(|(&d, &c)| (d, -c)).collect(),
        }
    }
}

impl Sub for &LaurentOperator {
    type Output = LaurentOperator;

    fn sub(self, rhs: &LaurentOperator) -> LaurentOperator {
        self + &(-rhs)
    }
}

impl Mul for &LaurentOperator {
    type Output = LaurentOperator;

    /// Operator composition, i.e. convolution of the coefficient maps.
    fn mul(self, rhs: &LaurentOperator) -> LaurentOperator {
        let mut map = BTreeMap::new();
        for (da, a) in &self.coeffs {
            for (db, b) in &rhs.coeffs {
                *map.entry(da + db).or_insert(Complex64::new(0.0, 0.0)) += a * b;
            }
        }
        LaurentOperator::trimmed(map)
    }
}

impl Mul for LaurentOperator {
    type Output = LaurentOperator;

    fn mul(self, rhs: LaurentOperator) -> LaurentOperator {
        &self * &rhs
    }
}
