use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Polynomial in `q` with exact rational coefficients, ascending degree.
/// Canonical: empty for zero, otherwise the last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPolynomial {
    coeffs: Vec<BigRational>,
}

/// Output of [`interpolate`]: the polynomial through every sample, plus
/// whether the final sample was already predicted by the earlier ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpolation {
    pub polynomial: QPolynomial,
    pub stable: bool,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        QPolynomial { coeffs }
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs.iter().rev().fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_int(&self, x: i64) -> BigRational {
        self.eval(&BigRational::from_integer(x.into()))
    }

    /// Value at `q = 1`, the Euler characteristic of a polynomial-count variety.
    pub fn value_at_one(&self) -> BigRational {
        self.coeffs.iter().fold(BigRational::zero(), |acc, c| acc + c)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    fn add(&self, other: &QPolynomial) -> QPolynomial {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = BigRational::zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + other.coeffs.get(i).unwrap_or(&z))
            .collect();
        QPolynomial::from_coeffs(c)
    }

    /// Multiply by `(q - root)`.
    fn times_linear(&self, root: &BigRational) -> QPolynomial {
        let mut c = vec![BigRational::zero(); self.coeffs.len() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i + 1] += a;
            c[i] -= a * root;
        }
        QPolynomial::from_coeffs(c)
    }

    /// Exact division by `(q - root)`; `None` when there is a remainder.
    pub fn divide_by_linear(&self, root: &BigRational) -> Option<QPolynomial> {
        if self.is_zero() {
            return Some(QPolynomial::zero());
        }
        let n = self.coeffs.len();
        let mut quotient = vec![BigRational::zero(); n - 1];
        let mut carry = BigRational::zero();
        for i in (0..n).rev() {
            let v = &self.coeffs[i] + &carry * root;
            if i == 0 {
                return v.is_zero().then(|| QPolynomial::from_coeffs(quotient));
            }
            quotient[i - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }
}

impl fmt::Display for QPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match deg {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !unit {
                        write!(f, "{mag}*")?;
                    }
                    if deg == 1 {
                        write!(f, "q")?;
                    } else {
                        write!(f, "q^{deg}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// The unique polynomial of degree `< samples.len()` through the points
/// `(prime, count)`, built by Newton divided differences over the rationals.
pub fn interpolate(samples: &[(u64, u64)]) -> Result<Interpolation> {
    if samples.len() < 2 {
        return Err(Error::InvalidSamples(format!("need at least 2 samples, got {}", samples.len())));
    }
    let mut seen = BTreeSet::new();
    for &(p, _) in samples {
        if !seen.insert(p) {
            return Err(Error::InvalidSamples(format!("duplicate sample point {p}")));
        }
    }
    let polynomial = newton(samples);
    let head = newton(&samples[..samples.len() - 1]);
    let (last_x, last_y) = samples[samples.len() - 1];
    let stable = head.eval_int(last_x as i64) == BigRational::from_integer(BigInt::from(last_y));
    Ok(Interpolation { polynomial, stable })
}

fn newton(samples: &[(u64, u64)]) -> QPolynomial {
    let xs: Vec<BigRational> = samples.iter().map(|&(x, _)| BigRational::from_integer(x.into())).collect();
    let mut table: Vec<BigRational> = samples.iter().map(|&(_, y)| BigRational::from_integer(y.into())).collect();
    let n = xs.len();
    for level in 1..n {
        for i in (level..n).rev() {
            table[i] = (&table[i] - &table[i - 1]) / (&xs[i] - &xs[i - level]);
        }
    }
    // Newton form: c0 + (q - x0)(c1 + (q - x1)(c2 + ...))
    let mut poly = QPolynomial::from_coeffs(vec![table[n - 1].clone()]);
    for i in (0..n - 1).rev() {
        poly = poly.times_linear(&xs[i]).add(&QPolynomial::from_coeffs(vec![table[i].clone()]));
    }
    poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(c: &[i64]) -> QPolynomial {
        QPolynomial::from_int_coeffs(c)
    }

    #[test]
    fn line_through_two_points() {
        let i = interpolate(&[(2, 3), (3, 4)]).unwrap();
        assert_eq!(i.polynomial, ints(&[1, 1]));
    }

    #[test]
    fn constant_data() {
        let i = interpolate(&[(2, 9), (3, 9), (5, 9)]).unwrap();
        assert_eq!(i.polynomial, ints(&[9]));
        assert!(i.stable);
    }

    #[test]
    fn quadratic() {
        let i = interpolate(&[(2, 7), (3, 13), (5, 31)]).unwrap();
        assert_eq!(i.polynomial, ints(&[1, 1, 1]));
        assert!(!i.stable);
        assert_eq!(i.polynomial.to_string(), "q^2 + q + 1");
        assert_eq!(i.polynomial.value_at_one(), BigRational::from_integer(3.into()));
    }

    #[test]
    fn duplicate_and_short_inputs_rejected() {
        assert!(interpolate(&[(2, 1), (2, 1)]).is_err());
        assert!(interpolate(&[(2, 1)]).is_err());
    }

    #[test]
    fn division_by_q_minus_one() {
        let p = ints(&[-1, 0, 1]); // q^2 - 1
        let one = BigRational::one();
        assert_eq!(p.divide_by_linear(&one), Some(ints(&[1, 1])));
        assert_eq!(ints(&[1, 1]).divide_by_linear(&one), None);
    }

    #[test]
    fn display_signs() {
        assert_eq!(ints(&[-1, 1]).to_string(), "q - 1");
        assert_eq!(ints(&[0, -2]).to_string(), "-2*q");
        assert_eq!(QPolynomial::zero().to_string(), "0");
    }

    proptest! {
        #[test]
        fn reproduces_every_sample(ys in prop::collection::vec(0u64..10_000, 2..7)) {
            let primes = [2u64, 3, 5, 7, 11, 13, 17];
            let samples: Vec<_> = primes.iter().copied().zip(ys).collect();
            let i = interpolate(&samples).unwrap();
            for &(x, y) in &samples {
                prop_assert_eq!(i.polynomial.eval_int(x as i64), BigRational::from_integer(y.into()));
            }
            prop_assert!(i.polynomial.degree().is_none_or(|d| d < samples.len()));
        }
    }
}
