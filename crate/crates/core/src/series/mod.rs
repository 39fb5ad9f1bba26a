//! Exact truncated power series in `x = z³` and the solvers built on them.

mod bivariate;
pub mod closed_forms;
pub mod expr;
mod polynomial;
pub mod solver;
mod truncated;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

pub use bivariate::BivariateSeries;
pub use closed_forms::{closed_form_in_t, closed_form_in_t_at, expand_in_t};
pub use polynomial::{Polynomial, RationalFunction};
pub use solver::{
    check_functional_equations, series_s, series_t, solve_statistic_system, solve_t, FunctionalEquationReport,
};
pub use truncated::TruncatedSeries;

/// Exact rational number.
pub type Rational = num_rational::BigRational;

/// Default truncation order for series computations.
pub const DEFAULT_ORDER: usize = 30;

/// Canonical `p/q` text (denominator always present).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parse `p/q` or an integer `p`.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let bad = || Error::domain(format!("not a rational number: {text:?}"));
    let (p, q) = match text.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (text.trim(), "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q == BigInt::from(0) {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn integer(p: i64) -> Rational {
    Rational::from_integer(p.into())
}

/// Lossy conversion for reporting.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or_else(|| if r > &Rational::one() { f64::INFINITY } else { 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text() {
        assert_eq!(format_rational(&rational(6, -4)), "-3/2");
        assert_eq!(format_rational(&integer(0)), "0/1");
        assert_eq!(parse_rational("-3/2").unwrap(), rational(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), integer(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
