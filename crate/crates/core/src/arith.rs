//! Exact arithmetic layer: arbitrary-precision integers and rationals plus the
//! univariate ring Z[s], where s stands for 1/t.
//!
//! All quotient-algebra data (rewriting coefficients, traces, characteristic
//! polynomial coefficients) lives in Z[s]. Values are immutable; operations
//! return fresh values.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision signed integer. Exact for any magnitude.
pub type Integer = num_bigint::BigInt;

/// Exact rational number. `num-rational` keeps `den > 0` and
/// `gcd(|num|, den) = 1`, so equal values have identical stored fields and
/// comparison is an exact total order via cross multiplication.
pub type Rational = num_rational::BigRational;

/// Dense univariate polynomial over `Integer` in the variable s := 1/t,
/// coefficients in ascending powers. The zero polynomial stores an empty
/// coefficient vector; its degree is `None` (minus infinity).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct SPoly {
    coeffs: Vec<Integer>,
}

impl SPoly {
    pub fn zero() -> Self {
        SPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        SPoly::constant(Integer::one())
    }

    pub fn constant(c: Integer) -> Self {
        SPoly::from_coeffs(vec![c])
    }

    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn from_coeffs(coeffs: Vec<Integer>) -> Self {
        let mut p = SPoly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in s; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient of s^l (zero beyond the degree).
    pub fn coeff(&self, l: usize) -> Integer {
        self.coeffs.get(l).cloned().unwrap_or_else(Integer::zero)
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn scale(&self, c: &Integer) -> SPoly {
        if c.is_zero() {
            return SPoly::zero();
        }
        SPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by s^l (shift coefficients up).
    pub fn mul_s_pow(&self, l: usize) -> SPoly {
        if self.is_zero() || l == 0 {
            return self.clone();
        }
        let mut coeffs = vec![Integer::zero(); l];
        coeffs.extend(self.coeffs.iter().cloned());
        SPoly { coeffs }
    }

    /// Multiplication by t = 1/s, i.e. division by s. Requires the constant
    /// coefficient to be zero.
    pub fn mul_t(&self) -> Result<SPoly> {
        if self.is_zero() {
            return Ok(SPoly::zero());
        }
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        Ok(SPoly {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// Exact value at a rational point s = s0.
    pub fn eval(&self, s0: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * s0 + Rational::from_integer(c.clone());
        }
        acc
    }
}

impl Add for &SPoly {
    type Output = SPoly;
    fn add(self, rhs: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for l in 0..n {
            let a = self.coeffs.get(l).cloned().unwrap_or_else(Integer::zero);
            let b = rhs.coeffs.get(l).cloned().unwrap_or_else(Integer::zero);
            coeffs.push(a + b);
        }
        SPoly::from_coeffs(coeffs)
    }
}

impl Sub for &SPoly {
    type Output = SPoly;
    fn sub(self, rhs: &SPoly) -> SPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for l in 0..n {
            let a = self.coeffs.get(l).cloned().unwrap_or_else(Integer::zero);
            let b = rhs.coeffs.get(l).cloned().unwrap_or_else(Integer::zero);
            coeffs.push(a - b);
        }
        SPoly::from_coeffs(coeffs)
    }
}

impl Mul for &SPoly {
    type Output = SPoly;
    fn mul(self, rhs: &SPoly) -> SPoly {
        if self.is_zero() || rhs.is_zero() {
            return SPoly::zero();
        }
        let mut coeffs = vec![Integer::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        SPoly::from_coeffs(coeffs)
    }
}

impl Neg for &SPoly {
    type Output = SPoly;
    fn neg(self) -> SPoly {
        SPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (l, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match l {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if l == 1 {
                        write!(f, "s")?;
                    } else {
                        write!(f, "s^{l}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::cmp::Ordering;

    fn sp(coeffs: &[i64]) -> SPoly {
        SPoly::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    #[test]
    fn monomial_product() {
        // (1 + 2s) * 3s = 3s + 6s^2
        let got = &sp(&[1, 2]) * &sp(&[0, 3]);
        assert_eq!(got, sp(&[0, 3, 6]));
    }

    #[test]
    fn multiplication_by_zero_annihilates() {
        let a = sp(&[4, -1, 7]);
        assert_eq!(&a * &SPoly::zero(), SPoly::zero());
    }

    #[test]
    fn cancellation_normalizes_to_empty() {
        let got = &sp(&[2, 1]) + &sp(&[-2, -1]);
        assert!(got.is_zero());
        assert!(got.coeffs().is_empty());
        assert_eq!(got.degree(), None);
    }

    #[test]
    fn scalar_multiplication() {
        let a = sp(&[1, -2, 3]);
        assert_eq!(a.scale(&Integer::from(-5)), sp(&[-5, 10, -15]));
        assert!(a.scale(&Integer::zero()).is_zero());
    }

    #[test]
    fn mul_t_shifts_down() {
        assert_eq!(sp(&[0, -2]).mul_t().unwrap(), sp(&[-2]));
        assert_eq!(sp(&[0, 3, 6]).mul_t().unwrap(), sp(&[3, 6]));
        assert_eq!(sp(&[1, 1]).mul_t(), Err(Error::NonzeroConstantTerm));
    }

    #[test]
    fn rational_comparison_is_exact() {
        let q = |n: i64, d: i64| Rational::new(Integer::from(n), Integer::from(d));
        assert_eq!(q(1, 4).cmp(&q(1, 2)), Ordering::Less);
        assert_eq!(q(2, 4).cmp(&q(1, 2)), Ordering::Equal);
        assert_eq!(q(-1, 3).cmp(&q(0, 1)), Ordering::Less);
    }

    #[test]
    fn rational_canonical_form_is_unique() {
        let a = Rational::new(Integer::from(3), Integer::from(-12));
        let b = Rational::new(Integer::from(-21), Integer::from(84));
        assert_eq!(a.numer(), b.numer());
        assert_eq!(a.denom(), b.denom());
        assert_eq!(*a.denom(), Integer::from(4));
    }

    #[test]
    fn eval_at_rational_point() {
        // 2s + 3s^2 at s = 1/2 -> 1 + 3/4 = 7/4
        let p = sp(&[0, 2, 3]);
        let half = Rational::new(Integer::from(1), Integer::from(2));
        assert_eq!(p.eval(&half), Rational::new(Integer::from(7), Integer::from(4)));
    }

    fn arb_spoly() -> impl Strategy<Value = SPoly> {
        proptest::collection::vec(-30i64..30, 0..6).prop_map(|v| sp(&v))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_spoly(), b in arb_spoly(), c in arb_spoly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn degree_adds_under_product(a in arb_spoly(), b in arb_spoly()) {
            prop_assume!(!a.is_zero() && !b.is_zero());
            let d = (&a * &b).degree().unwrap();
            prop_assert_eq!(d, a.degree().unwrap() + b.degree().unwrap());
        }

        #[test]
        fn mul_t_round_trips_shift(a in arb_spoly()) {
            prop_assert_eq!(a.mul_s_pow(1).mul_t().unwrap(), a);
        }

        #[test]
        fn canonical_rational(p in -40i64..40, q in 1i64..40, c in 1i64..9) {
            let a = Rational::new(Integer::from(p), Integer::from(q));
            let b = Rational::new(Integer::from(c * p), Integer::from(c * q));
            prop_assert_eq!(a.numer(), b.numer());
            prop_assert_eq!(a.denom(), b.denom());
        }
    }
}
