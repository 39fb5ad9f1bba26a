use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Polynomial, Rational, TruncatedSeries};
use crate::error::{Error, Result};

/// Power series in `x` whose coefficients are polynomials in the marker `u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BivariateSeries {
    coeffs: Vec<Polynomial>,
}

impl BivariateSeries {
    pub fn new(mut coeffs: Vec<Polynomial>, order: usize) -> Self {
        coeffs.resize(order + 1, Polynomial::zero());
        BivariateSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn constant(p: Polynomial, order: usize) -> Self {
        Self::new(vec![p], order)
    }

    /// Embed a univariate series (no dependence on `u`).
    pub fn from_series(s: &TruncatedSeries) -> Self {
        BivariateSeries { coeffs: s.coeffs().iter().map(|c| Polynomial::constant(c.clone())).collect() }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Polynomial] {
        &self.coeffs
    }

    /// `[x^n]` as a polynomial in `u`; zero beyond the known order.
    pub fn coeff(&self, n: usize) -> Polynomial {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        BivariateSeries { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn differentiate_u(&self) -> Self {
        BivariateSeries { coeffs: self.coeffs.iter().map(Polynomial::derivative).collect() }
    }

    pub fn differentiate_x(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        BivariateSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, p)| p.scale(&Rational::from_integer(n.into())))
                .collect(),
        }
    }

    pub fn evaluate_at_u(&self, u: &Rational) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.iter().map(|p| p.eval(u)).collect(), self.order())
    }

    pub fn evaluate_at_u1(&self) -> TruncatedSeries {
        self.evaluate_at_u(&Rational::one())
    }

    /// Truncated quotient; the divisor's constant term must be a nonzero constant.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let order = self.order().min(rhs.order());
        let b0 = rhs.coeffs[0]
            .as_constant()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::domain("bivariate division needs a nonzero constant term in the divisor"))?;
        let inv = b0.recip();
        let mut out: Vec<Polynomial> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                if !rhs.coeffs[k].is_zero() {
                    acc = &acc - &(&rhs.coeffs[k] * &out[n - k]);
                }
            }
            out.push(acc.scale(&inv));
        }
        Ok(BivariateSeries { coeffs: out })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        BivariateSeries { coeffs: self.coeffs.iter().map(|p| p.scale(c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Polynomial::one(), self.order()), |acc, _| &acc * self)
    }
}

impl Add for &BivariateSeries {
    type Output = BivariateSeries;

    fn add(self, rhs: &BivariateSeries) -> BivariateSeries {
        let order = self.order().min(rhs.order());
        BivariateSeries { coeffs: (0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect() }
    }
}

impl Sub for &BivariateSeries {
    type Output = BivariateSeries;

    fn sub(self, rhs: &BivariateSeries) -> BivariateSeries {
        let order = self.order().min(rhs.order());
        BivariateSeries { coeffs: (0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect() }
    }
}

impl Mul for &BivariateSeries {
    type Output = BivariateSeries;

    fn mul(self, rhs: &BivariateSeries) -> BivariateSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![Polynomial::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        BivariateSeries { coeffs: out }
    }
}

impl Neg for &BivariateSeries {
    type Output = BivariateSeries;

    fn neg(self) -> BivariateSeries {
        BivariateSeries { coeffs: self.coeffs.iter().map(|p| -p).collect() }
    }
}

impl Serialize for BivariateSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(&self.coeffs)
    }
}

impl<'de> Deserialize<'de> for BivariateSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coeffs: Vec<Polynomial> = Vec::deserialize(deserializer)?;
        if coeffs.is_empty() {
            return Err(serde::de::Error::custom("a series needs at least one coefficient"));
        }
        Ok(BivariateSeries { coeffs })
    }
}
