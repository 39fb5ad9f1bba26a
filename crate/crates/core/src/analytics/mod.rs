//! Means, variances, limit laws and identity checks.
//!
//! Moments are available through three independent routes:
//!
//! * `Bruteforce` tallies every path (small `n` only);
//! * `Series` solves the marking system over second-order jets at `u = 1`;
//! * `ClosedForm` evaluates the tabulated rational functions of `n`.

mod identities;
mod limits;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::enumeration::{distribution_bruteforce, DistributionPolynomial, PathKind, Statistic};
use crate::error::{Error, Result};
use crate::series::expr::{eval_at, parse_expr, RationalFunctionAlgebra};
use crate::series::solver::{solve_statistic_with, ExactPoly, IntPoly, Jet};
use crate::series::{format_rational, to_f64, Rational, RationalFunction};

pub use identities::{
    identity_suite, knuth_check, table8_suite, IdentityFailure, IdentityReport, KnuthReport, Table8Report, Table8Row,
};
pub use limits::{
    convergence_report, explicit_return_probability, limit_distribution, mean_consistency, total_variation, ConvergenceRow,
    ErratumPolicy, LimitDistribution, TotalVariation,
};

/// Largest `n` accepted by the series route.
pub const SERIES_MAX_N: usize = 1000;

pub(crate) fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Bruteforce,
    Series,
    ClosedForm,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Bruteforce, Method::Series, Method::ClosedForm];
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Bruteforce => "bruteforce",
            Method::Series => "series",
            Method::ClosedForm => "closed_form",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "bruteforce" => Ok(Method::Bruteforce),
            "series" => Ok(Method::Series),
            "closedform" => Ok(Method::ClosedForm),
            _ => Err(Error::domain(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatisticSummary {
    pub class: PathKind,
    pub stat: Statistic,
    pub n: usize,
    #[serde(serialize_with = "ser_rational")]
    pub mean: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub variance: Rational,
    pub method: Method,
}

/// Tabulated mean and variance as expressions in `n`, valid for `n ≥ 1`.
#[derive(Debug, Clone, Copy)]
pub struct MomentForms {
    pub stat: Statistic,
    pub class: PathKind,
    pub mean: &'static str,
    pub variance: &'static str,
}

const fn forms(stat: Statistic, class: PathKind, mean: &'static str, variance: &'static str) -> MomentForms {
    MomentForms { stat, class, mean, variance }
}

use PathKind::{S, T};
use Statistic::*;

pub const MOMENT_FORMS: &[MomentForms] = &[
    forms(
        Returns,
        S,
        "n(23n+17)/(2(2n+3)(n+1))",
        "3(14n^2+31n+8)(3n+2)(3n+1)(n-1)n/(4(2n+5)(2n+3)^2(n+2)(n+1)^2)",
    ),
    forms(
        Returns,
        T,
        "(19n+26)n/(2(2n+3)(n+2))",
        "3(14n^3+45n^2+19n-18)(3n+4)(3n+2)n/(4(2n+5)(2n+3)^2(n+3)(n+2)^2)",
    ),
    forms(PeaksUd, S, "n/3+2/3", "2(2n+1)(n-1)/(9(3n-1))"),
    forms(PeaksUd, T, "n(n+1)/(3n+1)", "2(2n+1)(n+1)n/(3(3n+1)^2)"),
    forms(PeaksUhd, S, "(2n+1)(n-1)/(3(3n-1))", "2(10n^2-11n+2)(2n+1)(n-1)/(9(3n-1)^2(3n-2))"),
    forms(
        PeaksUhd,
        T,
        "(2n+1)(n+1)/(3(3n+1))",
        "2(30n^3-23n^2-3n+2)(2n+1)(n+1)/(9(3n+1)^2(3n-1)(3n-2))",
    ),
    forms(ValleysDu, S, "n/3-1/3", "2(2n+1)(n-1)/(9(3n-1))"),
    forms(ValleysDu, T, "n(n-1)/(3n+1)", "2(2n+1)(n+1)(n-1)/(3(3n+1)^2)"),
    forms(ValleysDhu, S, "(n-1)(2n+1)/(3(3n-1))", "2(10n^2-11n+2)(2n+1)(n-1)/(9(3n-1)^2(3n-2))"),
    forms(
        ValleysDhu,
        T,
        "2(n+1)(n-1)/(3(3n+1))",
        "4(15n^2-19n+8)(2n+1)(n+1)(n-1)/(9(3n+1)^2(3n-1)(3n-2))",
    ),
    forms(
        AxisValleysDu,
        S,
        "7(n-1)n/(2(2n+3)(n+1))",
        "(30n^3+43n^2+154n+288)(3n+1)(n-1)n/(4(2n+5)(2n+3)^2(n+2)(n+1)^2)",
    ),
    forms(
        AxisValleysDu,
        T,
        "(19n+18)(n-1)n/(2(3n+1)(2n+3)(n+2))",
        "(778n^6+3953n^5+11212n^4+24373n^3+30064n^2+16260n+2160)(n-1)n/(4(3n+1)^2(2n+5)(2n+3)^2(n+3)(n+2)^2)",
    ),
    forms(AxisValleysDhu, S, "(n-1)/(n+1)", "(3n+1)(n-1)n/((2n+3)(n+1)^2)"),
    forms(
        AxisValleysDhu,
        T,
        "(11n+6)(n-1)/(2(3n+1)(2n+3))",
        "(203n^3+437n^2+268n+12)(n-1)n/(4(3n+1)^2(2n+3)^2(n+2))",
    ),
];

/// Second factorial moment `E[K(K−1)]` of returns, as tabulated.
pub const RETURNS_FACTORIAL_MOMENT: [(PathKind, &str); 2] = [
    (S, "2(313n^3+652n^2+53n-178)n/((2n+5)(2n+4)(2n+3)(2n+2))"),
    (T, "3(79n^3+252n^2+91n-142)n/(2(2n+5)(2n+3)(n+3)(n+2))"),
];

pub fn moment_forms(class: PathKind, stat: Statistic) -> Result<&'static MomentForms> {
    MOMENT_FORMS
        .iter()
        .find(|f| f.class == class && f.stat == stat)
        .ok_or_else(|| Error::domain(format!("no tabulated moments for class {class}")))
}

/// A tabulated rational function of `n`.
#[derive(Debug, Clone)]
pub struct ClosedForm {
    pub text: &'static str,
    pub function: RationalFunction,
}

impl ClosedForm {
    fn parse(text: &'static str) -> Result<Self> {
        let function = parse_expr(text)?.eval(&RationalFunctionAlgebra { indeterminate: 'n' })?;
        Ok(ClosedForm { text, function })
    }

    pub fn eval(&self, n: usize) -> Result<Rational> {
        eval_at(self.text, 'n', &Rational::from_integer(n.into()))
    }

    pub fn limit_at_infinity(&self) -> Result<Rational> {
        self.function.limit_at_infinity()
    }
}

pub fn closed_form_mean(class: PathKind, stat: Statistic) -> Result<ClosedForm> {
    ClosedForm::parse(moment_forms(class, stat)?.mean)
}

pub fn closed_form_variance(class: PathKind, stat: Statistic) -> Result<ClosedForm> {
    ClosedForm::parse(moment_forms(class, stat)?.variance)
}

fn require_st(class: PathKind) -> Result<()> {
    if class == PathKind::U {
        Err(Error::domain("statistics are defined for classes s and t"))
    } else {
        Ok(())
    }
}

/// `(count, Σ K, Σ K(K−1)/2)` over all paths of size `n`, from the jet solver.
pub fn series_jet(class: PathKind, stat: Statistic, n: usize) -> Result<Jet> {
    require_st(class)?;
    if n > SERIES_MAX_N {
        return Err(Error::Refused(format!("series route limited to n <= {SERIES_MAX_N}")));
    }
    let (s, t) = solve_statistic_with::<Jet>(stat, n);
    Ok(match class {
        PathKind::S => s,
        _ => t,
    }
    .swap_remove(n))
}

fn moments_from_jet(j: &Jet) -> (Rational, Rational) {
    let count = Rational::from_integer(j.value.clone());
    let mean = Rational::from_integer(j.d1.clone()) / &count;
    let second_factorial = Rational::from_integer(&j.d2_half * BigInt::from(2)) / &count;
    let variance = second_factorial + &mean - &mean * &mean;
    (mean, variance)
}

pub fn summary(class: PathKind, stat: Statistic, n: usize, method: Method) -> Result<StatisticSummary> {
    require_st(class)?;
    let (mean, variance) = match method {
        Method::Bruteforce => {
            let d = distribution_bruteforce(class, stat, n)?;
            (d.mean(), d.variance())
        }
        Method::Series => {
            if class == PathKind::S && n == 0 {
                (Rational::zero(), Rational::zero())
            } else {
                moments_from_jet(&series_jet(class, stat, n)?)
            }
        }
        Method::ClosedForm => {
            if n == 0 {
                return Err(Error::domain("tabulated moments hold for n >= 1"));
            }
            (closed_form_mean(class, stat)?.eval(n)?, closed_form_variance(class, stat)?.eval(n)?)
        }
    };
    Ok(StatisticSummary { class, stat, n, mean, variance, method })
}

pub fn mean(class: PathKind, stat: Statistic, n: usize, method: Method) -> Result<Rational> {
    Ok(summary(class, stat, n, method)?.mean)
}

pub fn variance(class: PathKind, stat: Statistic, n: usize, method: Method) -> Result<Rational> {
    Ok(summary(class, stat, n, method)?.variance)
}

/// Full distribution at size `n` read off the exact bivariate solution.
pub fn series_distribution(class: PathKind, stat: Statistic, n: usize) -> Result<DistributionPolynomial> {
    require_st(class)?;
    if n > 200 {
        return Err(Error::Refused("full series distributions are limited to n <= 200".into()));
    }
    let (s, t) = solve_statistic_with::<ExactPoly>(stat, n);
    let p = match class {
        PathKind::S => &s[n],
        _ => &t[n],
    };
    let mut d = DistributionPolynomial::new(class, stat, n);
    for (k, c) in p.coeffs.iter().enumerate() {
        if !c.is_zero() {
            d.counts.insert(k, c.magnitude().clone());
        }
    }
    Ok(d)
}

/// Exact probabilities `P(K = k)` for `k ≤ k_max` at size `n`.
pub fn finite_probabilities(class: PathKind, stat: Statistic, n: usize, k_max: usize) -> Result<Vec<Rational>> {
    require_st(class)?;
    fn pick<const CAP: usize>(class: PathKind, stat: Statistic, n: usize) -> Vec<BigInt> {
        let (s, t) = solve_statistic_with::<IntPoly<CAP>>(stat, n);
        match class {
            PathKind::S => s,
            _ => t,
        }
        .swap_remove(n)
        .coeffs
    }
    let coeffs = match k_max {
        0..=12 => pick::<12>(class, stat, n),
        13..=40 => pick::<40>(class, stat, n),
        _ => pick::<{ usize::MAX }>(class, stat, n),
    };
    let (s1, t1) = crate::series::solver::univariate_counts(n);
    let total = if class == PathKind::S { s1[n].clone() } else { t1[n].clone() };
    if total.is_zero() {
        return Err(Error::domain("no paths of this size"));
    }
    Ok((0..=k_max)
        .map(|k| Rational::new(coeffs.get(k).cloned().unwrap_or_default(), total.clone()))
        .collect())
}

/// `n²·|mean(n) − (c − 81/(8n))|` for the returns statistic, with `c` the limit mean.
pub fn returns_mean_correction_gap(class: PathKind, n: usize) -> Result<Rational> {
    let form = closed_form_mean(class, Statistic::Returns)?;
    let limit = form.limit_at_infinity()?;
    let nn = Rational::from_integer(n.into());
    let approx = limit - Rational::new(81.into(), 8.into()) / &nn;
    Ok((form.eval(n)? - approx).abs() * &nn * &nn)
}

/// Standardised third central moment of the finite-`n` distribution.
pub fn skewness(class: PathKind, stat: Statistic, n: usize) -> Result<f64> {
    let d = series_distribution(class, stat, n)?;
    let total = Rational::from_integer(d.total().into());
    let m = |p: u32| Rational::from_integer(d.raw_moment_sum(p).into()) / &total;
    let (m1, m2, m3) = (m(1), m(2), m(3));
    let var = &m2 - &m1 * &m1;
    let third = &m3 - Rational::from_integer(3.into()) * &m1 * &m2 + Rational::from_integer(2.into()) * &m1 * &m1 * &m1;
    let v = to_f64(&var);
    if v <= 0.0 {
        return Ok(0.0);
    }
    Ok(third.to_f64().unwrap_or(f64::NAN) / v.powf(1.5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{integer, rational};

    #[test]
    fn returns_examples() {
        let s = summary(S, Returns, 2, Method::Bruteforce).unwrap();
        assert_eq!((s.mean, s.variance), (integer(3), rational(2, 3)));
        for method in [Method::Series, Method::ClosedForm] {
            let s2 = summary(S, Returns, 2, method).unwrap();
            assert_eq!((s2.mean, s2.variance), (integer(3), rational(2, 3)), "{method}");
        }
        assert_eq!(mean(T, Returns, 1, Method::Bruteforce).unwrap(), rational(3, 2));
        assert_eq!(mean(T, Returns, 1, Method::ClosedForm).unwrap(), rational(3, 2));
    }

    #[test]
    fn axis_valley_examples() {
        assert_eq!(mean(S, AxisValleysDu, 2, Method::ClosedForm).unwrap(), rational(1, 3));
        assert_eq!(mean(S, AxisValleysDhu, 2, Method::ClosedForm).unwrap(), rational(1, 3));
        assert_eq!(mean(S, AxisValleysDu, 2, Method::Bruteforce).unwrap(), rational(1, 3));
    }

    #[test]
    fn three_routes_agree_small_n() {
        for stat in Statistic::ALL {
            for class in [S, T] {
                for n in 1..=5 {
                    let b = summary(class, stat, n, Method::Bruteforce).unwrap();
                    let s = summary(class, stat, n, Method::Series).unwrap();
                    let c = summary(class, stat, n, Method::ClosedForm).unwrap();
                    assert_eq!((&b.mean, &b.variance), (&s.mean, &s.variance), "{class} {stat} {n}");
                    assert_eq!((&b.mean, &b.variance), (&c.mean, &c.variance), "{class} {stat} {n}");
                }
            }
        }
    }

    #[test]
    fn factorial_moment_forms() {
        for (class, text) in RETURNS_FACTORIAL_MOMENT {
            for n in 1..=12usize {
                let j = series_jet(class, Returns, n).unwrap();
                let expected = Rational::new(&j.d2_half * BigInt::from(2), j.value.clone());
                assert_eq!(eval_at(text, 'n', &integer(n as i64)).unwrap(), expected, "{class} {n}");
            }
        }
    }

    #[test]
    fn closed_form_variances_non_negative() {
        for f in MOMENT_FORMS {
            let v = ClosedForm::parse(f.variance).unwrap();
            for n in 1..=1000 {
                assert!(!v.eval(n).unwrap().is_negative(), "{} {} {n}", f.class, f.stat);
            }
        }
    }

    #[test]
    fn limits_of_means() {
        let expected = [(S, Returns, rational(23, 4)), (T, Returns, rational(19, 4)), (S, AxisValleysDu, rational(7, 4))];
        for (class, stat, lim) in expected {
            assert_eq!(closed_form_mean(class, stat).unwrap().limit_at_infinity().unwrap(), lim);
        }
        assert!(closed_form_mean(S, PeaksUd).unwrap().limit_at_infinity().is_err());
    }

    #[test]
    fn distributions_match_series() {
        for stat in Statistic::ALL {
            for class in [S, T] {
                let d = series_distribution(class, stat, 4).unwrap();
                let b = distribution_bruteforce(class, stat, 4).unwrap();
                assert_eq!(d, b);
                let p = finite_probabilities(class, stat, 4, 12).unwrap();
                let total = Rational::from_integer(b.total().into());
                for (k, pk) in p.iter().enumerate() {
                    assert_eq!(pk, &(Rational::from_integer(b.count(k).into()) / &total));
                }
            }
        }
    }

    #[test]
    fn method_parsing() {
        assert_eq!("closedform".parse::<Method>().unwrap(), Method::ClosedForm);
        assert_eq!("closed-form".parse::<Method>().unwrap(), Method::ClosedForm);
        assert!("guess".parse::<Method>().is_err());
        assert!(summary(S, Returns, 0, Method::ClosedForm).is_err());
    }
}
