use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{format_rational, parse_rational, Rational};
use crate::error::{Error, Result};

/// Power series in `x` known up to and including `x^order`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Coefficients `c_0..c_N`; missing trailing terms are zero-filled to `order`.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series `x`.
    pub fn x(order: usize) -> Self {
        Self::new(vec![Rational::zero(), Rational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// `[x^n]`, zero beyond the known order.
    pub fn coeff(&self, n: usize) -> Rational {
        self.coeffs.get(n).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order.min(self.order()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Truncated quotient; the divisor needs a nonzero constant term.
    pub fn div(&self, rhs: &Self) -> Result<Self> {
        let order = self.order().min(rhs.order());
        let b0 = &rhs.coeffs[0];
        if b0.is_zero() {
            return Err(Error::domain("series division by a divisor without constant term"));
        }
        let inv = b0.recip();
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for k in 1..=n {
                if !rhs.coeffs[k].is_zero() {
                    acc -= &rhs.coeffs[k] * &out[n - k];
                }
            }
            out.push(acc * &inv);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Multiply by `x^k` (`k > 0`) or divide by `x^-k` (`k < 0`, dropping low terms).
    /// The order is preserved for `k >= 0` and lowered by `|k|` otherwise.
    pub fn shift(&self, k: isize) -> Self {
        let order = self.order();
        if k >= 0 {
            let k = k as usize;
            let mut coeffs = vec![Rational::zero(); k.min(order + 1)];
            coeffs.extend(self.coeffs.iter().take((order + 1).saturating_sub(k)).cloned());
            TruncatedSeries { coeffs }
        } else {
            let k = k.unsigned_abs();
            let coeffs: Vec<Rational> = self.coeffs.iter().skip(k).cloned().collect();
            if coeffs.is_empty() {
                Self::zero(0)
            } else {
                TruncatedSeries { coeffs }
            }
        }
    }

    /// `Σ n c_n x^(n-1)`, known to one order less.
    pub fn differentiate_x(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, c)| c * Rational::from_integer(n.into()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(self.order()), |acc, _| &acc * self)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn add(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=order).map(|n| &self.coeffs[n] + &rhs.coeffs[n]).collect() }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn sub(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        TruncatedSeries { coeffs: (0..=order).map(|n| &self.coeffs[n] - &rhs.coeffs[n]).collect() }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn mul(self, rhs: &TruncatedSeries) -> TruncatedSeries {
        let order = self.order().min(rhs.order());
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;

    fn neg(self) -> TruncatedSeries {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for TruncatedSeries {
            type Output = TruncatedSeries;
            fn $m(self, rhs: TruncatedSeries) -> TruncatedSeries {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeriesWire {
    order: usize,
    coeffs: Vec<String>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesWire { order: self.order(), coeffs: self.coeffs.iter().map(format_rational).collect() }
            .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = SeriesWire::deserialize(deserializer)?;
        if w.coeffs.len() != w.order + 1 {
            return Err(D::Error::custom(format!("expected {} coefficients, found {}", w.order + 1, w.coeffs.len())));
        }
        let coeffs = w.coeffs.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>().map_err(D::Error::custom)?;
        Ok(TruncatedSeries { coeffs })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(s: &TruncatedSeries) -> Vec<i64> {
        s.coeffs().iter().map(|c| i64::try_from(c.to_integer()).unwrap()).collect()
    }

    #[test]
    fn geometric_series() {
        let one = TruncatedSeries::one(3);
        let g = one.div(&(&one - &TruncatedSeries::x(3))).unwrap();
        assert_eq!(ints(&g), [1, 1, 1, 1]);
    }

    #[test]
    fn derivative_and_shift() {
        let x2 = TruncatedSeries::from_ints(&[0, 0, 1], 4);
        assert_eq!(ints(&x2.differentiate_x()), [0, 2, 0, 0]);
        assert_eq!(ints(&x2.shift(1)), [0, 0, 0, 1, 0]);
        assert_eq!(ints(&x2.shift(-2)), [1, 0, 0]);
        assert_eq!(ints(&x2.shift(9)), [0, 0, 0, 0, 0]);
    }

    #[test]
    fn mixed_orders_truncate_to_minimum() {
        let a = TruncatedSeries::from_ints(&[1, 2, 3, 4], 3);
        let b = TruncatedSeries::from_ints(&[1, 1], 1);
        assert_eq!((&a * &b).order(), 1);
        assert_eq!((&a + &b).order(), 1);
        assert_eq!(a.div(&b).unwrap().order(), 1);
    }

    #[test]
    fn division_needs_unit() {
        let x = TruncatedSeries::x(3);
        assert!(matches!(TruncatedSeries::one(3).div(&x), Err(Error::Domain(_))));
    }

    #[test]
    fn json() {
        let s = TruncatedSeries::new(vec![Rational::new(1.into(), 2.into()), Rational::from_integer(3.into())], 2);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"order":2,"coeffs":["1/2","3/1","0/1"]}"#);
        assert_eq!(serde_json::from_str::<TruncatedSeries>(&text).unwrap(), s);
        assert!(serde_json::from_str::<TruncatedSeries>(r#"{"order":3,"coeffs":["1"]}"#).is_err());
    }

    #[test]
    fn pow_matches_binomial() {
        let one_plus_x = TruncatedSeries::from_ints(&[1, 1], 5);
        assert_eq!(ints(&one_plus_x.pow(5)), [1, 5, 10, 10, 5, 1]);
    }
}
