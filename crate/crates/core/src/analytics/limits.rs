use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use super::{closed_form_mean, finite_probabilities, ser_rational};
use crate::enumeration::{PathKind, Statistic};
use crate::error::{Error, Result};
use crate::series::expr::{parse_expr, RationalFunctionAlgebra, SeriesAlgebra};
use crate::series::{format_rational, Rational, RationalFunction, TruncatedSeries};

/// How to treat a limit law whose printed formula fails normalisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErratumPolicy {
    AsPrinted,
    Corrected,
}

const PRINTED_T_AXIS_DU: &str = "4(u+11)/(3(7-3u))";
const CORRECTED_T_AXIS_DU: &str = "4(u+11)/(3(7-3u)^2)";

fn pgf_text(class: PathKind, stat: Statistic, policy: ErratumPolicy) -> Result<(&'static str, bool)> {
    use PathKind::{S, T};
    use Statistic::*;
    Ok(match (class, stat) {
        (S, Returns) => ("4u^2/((2u-3)^2(u+3))", false),
        (T, Returns) => ("4u/((2u-3)^2(u+3))", false),
        (S, AxisValleysDu) => ("4(u+3)/(7-3u)^2", false),
        (T, AxisValleysDu) => match policy {
            ErratumPolicy::AsPrinted => (PRINTED_T_AXIS_DU, false),
            ErratumPolicy::Corrected => (CORRECTED_T_AXIS_DU, true),
        },
        (S, AxisValleysDhu) => ("4/(3-u)^2", false),
        (T, AxisValleysDhu) => ("(13-u)/(3(3-u)^2)", false),
        _ => return Err(Error::domain(format!("no limit law for {stat} on class {class}"))),
    })
}

/// Discrete limit law of a statistic, given by its probability generating function.
#[derive(Debug, Clone, Serialize)]
pub struct LimitDistribution {
    pub class: PathKind,
    pub stat: Statistic,
    pub pgf_text: &'static str,
    #[serde(skip)]
    pub pgf: RationalFunction,
    /// True when the formula is the corrected form of a misprint.
    pub erratum_corrected: bool,
}

impl LimitDistribution {
    /// Build without the normalisation check.
    pub fn unchecked(class: PathKind, stat: Statistic, policy: ErratumPolicy) -> Result<Self> {
        let (pgf_text, erratum_corrected) = pgf_text(class, stat, policy)?;
        let pgf = parse_expr(pgf_text)?.eval(&RationalFunctionAlgebra { indeterminate: 'u' })?;
        Ok(LimitDistribution { class, stat, pgf_text, pgf, erratum_corrected })
    }

    /// `pgf(1)`.
    pub fn total_mass(&self) -> Result<Rational> {
        self.pgf.eval(&Rational::one())
    }

    /// `pgf'(1)`.
    pub fn mean(&self) -> Result<Rational> {
        self.pgf.derivative().eval(&Rational::one())
    }

    /// `P(0), …, P(k_max)` from the Taylor expansion of the PGF at `u = 0`.
    pub fn probabilities(&self, k_max: usize) -> Result<Vec<Rational>> {
        let u = TruncatedSeries::x(k_max);
        let expansion = parse_expr(self.pgf_text)?.eval(&SeriesAlgebra { order: k_max, bindings: &[('u', u)] })?;
        Ok(expansion.coeffs().to_vec())
    }

    pub fn probability_at(&self, k: usize) -> Result<Rational> {
        Ok(self.probabilities(k)?.swap_remove(k))
    }
}

impl fmt::Display for LimitDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.pgf_text)
    }
}

/// The limit law, after asserting `pgf(1) = 1`.
pub fn limit_distribution(class: PathKind, stat: Statistic, policy: ErratumPolicy) -> Result<LimitDistribution> {
    let d = LimitDistribution::unchecked(class, stat, policy)?;
    let mass = d.total_mass()?;
    if !mass.is_one() {
        return Err(Error::domain(format!(
            "limit formula {} for {stat} on class {class} evaluates to {} at u = 1, not a probability generating function",
            d.pgf_text,
            format_rational(&mass)
        )));
    }
    Ok(d)
}

/// Explicit return probabilities of the limit laws.
pub fn explicit_return_probability(class: PathKind, k: u32) -> Result<Rational> {
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let sign = if k.is_multiple_of(2) { BigInt::one() } else { -BigInt::one() };
    let kk = BigInt::from(k);
    let r = match class {
        PathKind::S => {
            // 4/3^(k+3) (3k 2^(k-1) - 2^k + (-1)^k)
            let num = Rational::new(&three * &kk * two.pow(k), two.clone()) - Rational::from_integer(two.pow(k))
                + Rational::from_integer(sign);
            num * Rational::new(4.into(), three.pow(k + 3))
        }
        PathKind::T => {
            // 4/3^(k+4) (3k 2^k + 2^k - (-1)^k)
            let num = &three * &kk * two.pow(k) + two.pow(k) - sign;
            Rational::new(BigInt::from(4) * num, three.pow(k + 4))
        }
        PathKind::U => return Err(Error::domain("return laws are defined for classes s and t")),
    };
    Ok(r)
}

#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceRow {
    pub k: usize,
    #[serde(serialize_with = "ser_rational")]
    pub finite: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub limit: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub gap: Rational,
}

pub fn convergence_report(
    class: PathKind,
    stat: Statistic,
    n: usize,
    k_max: usize,
    policy: ErratumPolicy,
) -> Result<Vec<ConvergenceRow>> {
    let law = limit_distribution(class, stat, policy)?;
    let limit = law.probabilities(k_max)?;
    let finite = finite_probabilities(class, stat, n, k_max)?;
    Ok(finite
        .into_iter()
        .zip(limit)
        .enumerate()
        .map(|(k, (finite, limit))| {
            let gap = (&finite - &limit).abs();
            ConvergenceRow { k, finite, limit, gap }
        })
        .collect())
}

/// Exact bounds on the total-variation distance between the size-`n` law and the limit.
#[derive(Debug, Clone, Serialize)]
pub struct TotalVariation {
    pub n: usize,
    pub k_max: usize,
    #[serde(serialize_with = "ser_rational")]
    pub lower: Rational,
    #[serde(serialize_with = "ser_rational")]
    pub upper: Rational,
}

/// The mass beyond `k_max` is accounted for through the exact tail sums of both laws.
pub fn total_variation(law: &LimitDistribution, n: usize, k_max: usize) -> Result<TotalVariation> {
    let rows = convergence_report_for(law, n, k_max)?;
    let head: Rational = rows.iter().map(|r| r.gap.clone()).sum();
    let finite_tail = Rational::one() - rows.iter().map(|r| r.finite.clone()).sum::<Rational>();
    let limit_tail = law.total_mass()? - rows.iter().map(|r| r.limit.clone()).sum::<Rational>();
    let half = Rational::new(1.into(), 2.into());
    let lower = (&head + (&finite_tail - &limit_tail).abs()) * &half;
    let upper = (head + finite_tail + limit_tail) * half;
    Ok(TotalVariation { n, k_max, lower, upper })
}

fn convergence_report_for(law: &LimitDistribution, n: usize, k_max: usize) -> Result<Vec<ConvergenceRow>> {
    let limit = law.probabilities(k_max)?;
    let finite = finite_probabilities(law.class, law.stat, n, k_max)?;
    Ok(finite
        .into_iter()
        .zip(limit)
        .enumerate()
        .map(|(k, (finite, limit))| ConvergenceRow { k, gap: (&finite - &limit).abs(), finite, limit })
        .collect())
}

/// `pgf'(1)` against the limit of the tabulated mean.
pub fn mean_consistency(law: &LimitDistribution) -> Result<(Rational, Rational)> {
    let tabulated = closed_form_mean(law.class, law.stat)?.limit_at_infinity()?;
    Ok((law.mean()?, tabulated))
}

impl LimitDistribution {
    pub fn is_normalised(&self) -> bool {
        self.total_mass().is_ok_and(|m| m.is_one())
    }

    pub fn tail_after(&self, k_max: usize) -> Result<Rational> {
        let head: Rational = self.probabilities(k_max)?.into_iter().sum();
        Ok(self.total_mass()? - head)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{rational, to_f64};
    use PathKind::{S, T};
    use Statistic::*;

    #[test]
    fn returns_probabilities() {
        let s = limit_distribution(S, Returns, ErratumPolicy::AsPrinted).unwrap();
        let p = s.probabilities(5).unwrap();
        assert_eq!(&p[2..], &[rational(4, 27), rational(4, 27), rational(4, 27), rational(92, 729)]);
        let t = limit_distribution(T, Returns, ErratumPolicy::AsPrinted).unwrap();
        assert_eq!(t.probability_at(1).unwrap(), rational(4, 27));
        assert_eq!(t.probability_at(2).unwrap(), rational(4, 27));
        for k in 0..=20u32 {
            assert_eq!(explicit_return_probability(S, k).unwrap(), s.probability_at(k as usize).unwrap());
            assert_eq!(explicit_return_probability(T, k).unwrap(), t.probability_at(k as usize).unwrap());
        }
    }

    #[test]
    fn means_and_normalisation() {
        let cases = [
            (S, Returns, rational(23, 4)),
            (T, Returns, rational(19, 4)),
            (S, AxisValleysDu, rational(7, 4)),
            (S, AxisValleysDhu, rational(1, 1)),
            (T, AxisValleysDhu, rational(11, 12)),
            (T, AxisValleysDu, rational(19, 12)),
        ];
        for (class, stat, m) in cases {
            let law = limit_distribution(class, stat, ErratumPolicy::Corrected).unwrap();
            assert!(law.is_normalised());
            let (pgf_mean, tabulated) = mean_consistency(&law).unwrap();
            assert_eq!(pgf_mean, m, "{class} {stat}");
            assert_eq!(tabulated, m, "{class} {stat}");
            let head: Rational = law.probabilities(40).unwrap().into_iter().sum();
            assert!(to_f64(&head) > 0.999);
        }
    }

    #[test]
    fn misprint_is_rejected() {
        let err = limit_distribution(T, AxisValleysDu, ErratumPolicy::AsPrinted).unwrap_err();
        assert!(err.to_string().contains("4/1"), "{err}");
        let raw = LimitDistribution::unchecked(T, AxisValleysDu, ErratumPolicy::AsPrinted).unwrap();
        assert_eq!(raw.total_mass().unwrap(), rational(4, 1));
        let fixed = limit_distribution(T, AxisValleysDu, ErratumPolicy::Corrected).unwrap();
        assert!(fixed.erratum_corrected);
    }

    #[test]
    fn unsupported_statistics() {
        assert!(limit_distribution(S, PeaksUd, ErratumPolicy::Corrected).is_err());
        assert!(explicit_return_probability(PathKind::U, 1).is_err());
    }

    #[test]
    fn convergence_at_moderate_n() {
        let rows = convergence_report(S, Returns, 30, 10, ErratumPolicy::Corrected).unwrap();
        assert_eq!(rows.len(), 11);
        assert!(rows.iter().all(|r| to_f64(&r.gap) < 0.05));
        let law = limit_distribution(S, Returns, ErratumPolicy::Corrected).unwrap();
        let tv = total_variation(&law, 30, 40).unwrap();
        assert!(tv.lower <= tv.upper);
        assert!(!tv.lower.is_negative());
    }
}
