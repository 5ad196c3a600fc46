use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// Integer polynomial in one variable; `coefficients[k]` multiplies `x^k`.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has
/// an empty coefficient list and structural equality is polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntPolynomial {
    coefficients: Vec<i64>,
}

impl IntPolynomial {
    pub fn new(mut coefficients: Vec<i64>) -> Self {
        while coefficients.last() == Some(&0) {
            coefficients.pop();
        }
        IntPolynomial { coefficients }
    }

    pub fn zero() -> Self {
        IntPolynomial::default()
    }

    pub fn one() -> Self {
        IntPolynomial::new(vec![1])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![0; k + 1];
        c[k] = 1;
        IntPolynomial::new(c)
    }

    /// `x - a`.
    pub fn linear_root(a: i64) -> Self {
        IntPolynomial::new(vec![-a, 1])
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn coefficient(&self, k: usize) -> i64 {
        self.coefficients.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    pub fn leading_coefficient(&self) -> i64 {
        self.coefficients.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading_coefficient() == 1
    }

    pub fn eval(&self, x: i64) -> i64 {
        self.coefficients.iter().rev().fold(0, |acc, &c| acc * x + c)
    }

    /// Synthetic division by `x - a`: returns `(quotient, remainder)`.
    pub fn div_linear(&self, a: i64) -> (IntPolynomial, i64) {
        if self.is_zero() {
            return (IntPolynomial::zero(), 0);
        }
        let n = self.coefficients.len();
        let mut quotient = vec![0i64; n - 1];
        let mut carry = 0i64;
        for k in (0..n).rev() {
            let value = self.coefficients[k] + carry * a;
            if k == 0 {
                return (IntPolynomial::new(quotient), value);
            }
            quotient[k - 1] = value;
            carry = value;
        }
        unreachable!()
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.coefficients);
        IntPolynomial::new(c)
    }

    /// Coefficients from the leading term down, in absolute value.
    pub fn abs_coefficients_descending(&self) -> Vec<u64> {
        self.coefficients
            .iter()
            .rev()
            .map(|c| c.unsigned_abs())
            .collect()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;

    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        IntPolynomial::new((0..n).map(|k| self.coefficient(k) + rhs.coefficient(k)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;

    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coefficients.len().max(rhs.coefficients.len());
        IntPolynomial::new((0..n).map(|k| self.coefficient(k) - rhs.coefficient(k)).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;

    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = vec![0i64; self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::new(c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coefficients.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match (k, a) {
                (0, _) => write!(f, "{a}")?,
                (1, 1) => write!(f, "x")?,
                (1, _) => write!(f, "{a}x")?,
                (_, 1) => write!(f, "x^{k}")?,
                _ => write!(f, "{a}x^{k}")?,
            }
        }
        Ok(())
    }
}
