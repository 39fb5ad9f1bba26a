//! Fixed-point solvers for the univariate and statistic-marking systems.
//!
//! The statistic systems are kept as data: `S = x·Σ terms`, `T = 1 + x·Σ terms`,
//! where a term is an integer times a power of `u` times at most two of
//! `S`, `T` (the bivariate unknowns) and `S1`, `T1` (their values at `u = 1`).
//! Because every right-hand side carries the factor `x`, the coefficient of
//! `x^n` only depends on coefficients of index `< n`, so the fixed point is
//! reached one coefficient at a time.
//!
//! The coefficient ring is pluggable through [`MarkerRing`]: exact integer
//! polynomials in `u`, polynomials truncated above a degree, second-order jets
//! at `u = 1`, or plain integers (`u = 1`).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{BivariateSeries, Polynomial, Rational, TruncatedSeries};
use crate::enumeration::{PathKind, Statistic};
use crate::error::{Error, Result};

/// Unique series `t` with `t(1−t)² = x`, by iterating `t ← x/(1−t)²` from 0.
pub fn solve_t(order: usize) -> TruncatedSeries {
    let x = TruncatedSeries::x(order);
    let one = TruncatedSeries::one(order);
    let mut t = TruncatedSeries::zero(order);
    for _ in 0..=order {
        let d = &one - &t;
        t = x.div(&(&d * &d)).expect("1 - t has constant term 1");
    }
    t
}

/// `S = t/(1−t)`.
pub fn series_s(order: usize) -> TruncatedSeries {
    let t = solve_t(order);
    t.div(&(&TruncatedSeries::one(order) - &t)).expect("unit constant term")
}

/// `T = 1/(1−t)²`.
pub fn series_t(order: usize) -> TruncatedSeries {
    let t = solve_t(order);
    let d = &TruncatedSeries::one(order) - &t;
    TruncatedSeries::one(order).div(&(&d * &d)).expect("unit constant term")
}

/// Residual series of each identity; all should vanish.
#[derive(Debug, Clone, Serialize)]
pub struct FunctionalEquationReport {
    pub order: usize,
    pub residuals: Vec<(String, TruncatedSeries)>,
}

impl FunctionalEquationReport {
    pub fn all_zero(&self) -> bool {
        self.residuals.iter().all(|(_, r)| r.is_zero())
    }

    /// Names of the identities with a nonzero residual.
    pub fn failures(&self) -> Vec<&str> {
        self.residuals.iter().filter(|(_, r)| !r.is_zero()).map(|(n, _)| n.as_str()).collect()
    }
}

pub fn check_functional_equations(order: usize) -> FunctionalEquationReport {
    let t_param = solve_t(order);
    let s = series_s(order);
    let t = series_t(order);
    let x = TruncatedSeries::x(order);
    let one = TruncatedSeries::one(order);
    let c = |k: i64| TruncatedSeries::constant(Rational::from_integer(k.into()), order);
    let xt = &x * &t;

    let residuals = vec![
        ("t(1-t)^2 = x", &(&t_param * &(&one - &t_param).pow(2)) - &x),
        ("S = x(1 + TS + 2S + S^2)", &s - &(&x * &(&(&(&one + &(&t * &s)) + &(&c(2) * &s)) + &s.pow(2)))),
        ("T = 1 + xT^2 + xT + xST", &t - &(&(&(&one + &(&x * &t.pow(2))) + &xt) + &(&xt * &s))),
        ("T = 1 + 2xT^2 - x^2T^3", &t - &(&(&one + &(&c(2) * &(&x * &t.pow(2)))) - &(&x.pow(2) * &t.pow(3)))),
        (
            "S = x + 3xS + 3xS^2 + xS^3",
            &s - &(&x * &(&(&(&one + &(&c(3) * &s)) + &(&c(3) * &s.pow(2))) + &s.pow(3))),
        ),
        ("T(1-xT)^2 = 1", &(&t * &(&one - &xt).pow(2)) - &one),
        ("(1+S)^2 = T", &(&one + &s).pow(2) - &t),
    ];
    FunctionalEquationReport {
        order,
        residuals: residuals.into_iter().map(|(n, r)| (n.to_string(), r)).collect(),
    }
}

/// Coefficient ring for the statistic solver.
pub trait MarkerRing: Clone + Send + Sync {
    fn zero() -> Self;
    fn from_int(c: &BigInt) -> Self;
    fn add_assign(&mut self, rhs: &Self);
    fn mul(&self, rhs: &Self) -> Self;
    fn scale(&self, c: &BigInt) -> Self;
    /// Multiply by `u^e`.
    fn times_u_pow(&self, e: u32) -> Self;
}

impl MarkerRing for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }

    fn from_int(c: &BigInt) -> Self {
        c.clone()
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn scale(&self, c: &BigInt) -> Self {
        self * c
    }

    fn times_u_pow(&self, _e: u32) -> Self {
        self.clone()
    }
}

/// Integer polynomial in `u`, truncated above degree `CAP`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPoly<const CAP: usize> {
    pub coeffs: Vec<BigInt>,
}

/// Integer polynomial in `u` without truncation.
pub type ExactPoly = IntPoly<{ usize::MAX }>;

impl<const CAP: usize> IntPoly<CAP> {
    fn trim(mut self) -> Self {
        self.coeffs.truncate(CAP.saturating_add(1));
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn to_polynomial(&self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| Rational::from_integer(c.clone())).collect())
    }
}

impl<const CAP: usize> MarkerRing for IntPoly<CAP> {
    fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    fn from_int(c: &BigInt) -> Self {
        IntPoly { coeffs: vec![c.clone()] }.trim()
    }

    fn add_assign(&mut self, rhs: &Self) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), BigInt::default());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        *self = std::mem::take(self).trim();
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Self::zero();
        }
        let len = (self.coeffs.len() + rhs.coeffs.len() - 1).min(CAP.saturating_add(1));
        let mut out = vec![BigInt::default(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                out[i + j] += a * b;
            }
        }
        IntPoly { coeffs: out }.trim()
    }

    fn scale(&self, c: &BigInt) -> Self {
        IntPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }.trim()
    }

    fn times_u_pow(&self, e: u32) -> Self {
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::default(); e as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }.trim()
    }
}

/// Second-order Taylor data at `u = 1`: `(f(1), f'(1), f''(1)/2)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Jet {
    pub value: BigInt,
    pub d1: BigInt,
    pub d2_half: BigInt,
}

impl MarkerRing for Jet {
    fn zero() -> Self {
        Jet::default()
    }

    fn from_int(c: &BigInt) -> Self {
        Jet { value: c.clone(), ..Default::default() }
    }

    fn add_assign(&mut self, rhs: &Self) {
        self.value += &rhs.value;
        self.d1 += &rhs.d1;
        self.d2_half += &rhs.d2_half;
    }

    fn mul(&self, rhs: &Self) -> Self {
        Jet {
            value: &self.value * &rhs.value,
            d1: &self.value * &rhs.d1 + &self.d1 * &rhs.value,
            d2_half: &self.value * &rhs.d2_half + &self.d1 * &rhs.d1 + &self.d2_half * &rhs.value,
        }
    }

    fn scale(&self, c: &BigInt) -> Self {
        Jet { value: &self.value * c, d1: &self.d1 * c, d2_half: &self.d2_half * c }
    }

    fn times_u_pow(&self, e: u32) -> Self {
        let e = BigInt::from(e);
        let half_e2 = &e * (&e - 1u32) / 2u32;
        self.mul(&Jet { value: BigInt::one(), d1: e, d2_half: half_e2 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    S,
    T,
    S1,
    T1,
}

#[derive(Debug, Clone, Copy)]
pub struct Term {
    pub coeff: i64,
    pub u_power: u32,
    pub factors: &'static [Factor],
}

const fn term(coeff: i64, u_power: u32, factors: &'static [Factor]) -> Term {
    Term { coeff, u_power, factors }
}

/// `S = x·Σ s`, `T = 1 + x·Σ t`.
#[derive(Debug, Clone, Copy)]
pub struct System {
    pub s: &'static [Term],
    pub t: &'static [Term],
}

use Factor::{S, S1, T, T1};

const UNIVARIATE: System = System {
    s: &[term(1, 0, &[]), term(1, 0, &[T, S]), term(2, 0, &[S]), term(1, 0, &[S, S])],
    t: &[term(1, 0, &[T, T]), term(1, 0, &[T]), term(1, 0, &[S, T])],
};

const RETURNS: System = System {
    s: &[
        term(1, 2, &[]),
        term(1, 1, &[S, T1]),
        term(1, 2, &[S]),
        term(1, 2, &[S1]),
        term(1, 2, &[S1, S]),
    ],
    t: &[term(1, 1, &[T1, T]), term(1, 2, &[T]), term(1, 2, &[S1, T])],
};

const PEAKS_UD: System = System {
    s: &[term(1, 1, &[]), term(1, 0, &[T, S]), term(1, 1, &[S]), term(1, 0, &[S]), term(1, 0, &[S, S])],
    t: &[term(1, 0, &[T, T]), term(1, 1, &[T]), term(1, 0, &[S, T])],
};

const PEAKS_UHD: System = System {
    s: &[term(1, 0, &[]), term(1, 0, &[T, S]), term(1, 1, &[S]), term(1, 0, &[S]), term(1, 0, &[S, S])],
    t: &[term(1, 0, &[T, T]), term(1, 1, &[T]), term(1, 0, &[S, T])],
};

const VALLEYS_DU: System = System {
    s: &[term(1, 0, &[]), term(1, 1, &[T, S]), term(2, 0, &[S]), term(1, 0, &[S, S])],
    t: &[term(1, 1, &[T, T]), term(-1, 1, &[T]), term(2, 0, &[T]), term(1, 0, &[S, T])],
};

const VALLEYS_DHU: System = System {
    s: &[term(1, 0, &[]), term(1, 0, &[T, S]), term(1, 1, &[S]), term(1, 0, &[S]), term(1, 1, &[S, S])],
    t: &[
        term(1, 0, &[T, T]),
        term(1, 1, &[T]),
        term(-1, 1, &[]),
        term(1, 0, &[]),
        term(1, 1, &[S, T]),
        term(-1, 1, &[S]),
        term(1, 0, &[S]),
    ],
};

const AXIS_VALLEYS_DU: System = System {
    s: &[term(1, 0, &[]), term(1, 1, &[T1, S]), term(1, 0, &[S]), term(1, 0, &[S1]), term(1, 0, &[S, S1])],
    t: &[
        term(1, 1, &[T1, T]),
        term(-1, 1, &[T1]),
        term(1, 0, &[T1]),
        term(1, 0, &[T]),
        term(1, 0, &[S1, T]),
    ],
};

const AXIS_VALLEYS_DHU: System = System {
    s: &[term(1, 0, &[]), term(1, 0, &[T1, S]), term(1, 1, &[S]), term(1, 0, &[S1]), term(1, 1, &[S, S1])],
    t: &[
        term(1, 0, &[T, T1]),
        term(1, 0, &[]),
        term(1, 1, &[T]),
        term(-1, 1, &[]),
        term(1, 1, &[S1, T]),
        term(-1, 1, &[S1]),
        term(1, 0, &[S1]),
    ],
};

pub fn system(stat: Statistic) -> &'static System {
    match stat {
        Statistic::Returns => &RETURNS,
        Statistic::PeaksUd => &PEAKS_UD,
        Statistic::PeaksUhd => &PEAKS_UHD,
        Statistic::ValleysDu => &VALLEYS_DU,
        Statistic::ValleysDhu => &VALLEYS_DHU,
        Statistic::AxisValleysDu => &AXIS_VALLEYS_DU,
        Statistic::AxisValleysDhu => &AXIS_VALLEYS_DHU,
    }
}

struct Unknowns<'a, R> {
    s: &'a [R],
    t: &'a [R],
    s1: &'a [BigInt],
    t1: &'a [BigInt],
}

enum Coeff<'a, R> {
    Ring(&'a R),
    Int(&'a BigInt),
}

impl<R: MarkerRing> Unknowns<'_, R> {
    fn get(&self, f: Factor, k: usize) -> Coeff<'_, R> {
        match f {
            Factor::S => Coeff::Ring(&self.s[k]),
            Factor::T => Coeff::Ring(&self.t[k]),
            Factor::S1 => Coeff::Int(&self.s1[k]),
            Factor::T1 => Coeff::Int(&self.t1[k]),
        }
    }

    /// `[x^m]` of the product of the term's factors.
    fn product_coeff(&self, factors: &[Factor], m: usize) -> R {
        match factors {
            [] if m == 0 => R::from_int(&BigInt::one()),
            [] => R::zero(),
            [f] => match self.get(*f, m) {
                Coeff::Ring(r) => r.clone(),
                Coeff::Int(c) => R::from_int(c),
            },
            [f, g] => {
                let mut acc = R::zero();
                for i in 0..=m {
                    let term = match (self.get(*f, i), self.get(*g, m - i)) {
                        (Coeff::Ring(a), Coeff::Ring(b)) => a.mul(b),
                        (Coeff::Ring(a), Coeff::Int(c)) | (Coeff::Int(c), Coeff::Ring(a)) => {
                            if c.is_zero() {
                                continue;
                            }
                            a.scale(c)
                        }
                        (Coeff::Int(a), Coeff::Int(b)) => R::from_int(&(a * b)),
                    };
                    acc.add_assign(&term);
                }
                acc
            }
            _ => unreachable!("terms have at most two factors"),
        }
    }

    fn sum(&self, terms: &[Term], m: usize) -> R {
        let mut acc = R::zero();
        for term in terms {
            let p = self.product_coeff(term.factors, m).times_u_pow(term.u_power).scale(&BigInt::from(term.coeff));
            acc.add_assign(&p);
        }
        acc
    }
}

/// Solve `sys` coefficient-wise to `x^order`. `s1`/`t1` are the univariate
/// coefficients and must have length `order + 1` when the system uses them.
pub fn solve_with<R: MarkerRing>(sys: &System, order: usize, s1: &[BigInt], t1: &[BigInt]) -> (Vec<R>, Vec<R>) {
    let mut s: Vec<R> = vec![R::zero()];
    let mut t: Vec<R> = vec![R::from_int(&BigInt::one())];
    for n in 1..=order {
        let (sn, tn) = {
            let u = Unknowns { s: &s, t: &t, s1, t1 };
            (u.sum(sys.s, n - 1), u.sum(sys.t, n - 1))
        };
        s.push(sn);
        t.push(tn);
    }
    (s, t)
}

/// Coefficients of `S(x)` and `T(x)` from the univariate system, as integers.
pub fn univariate_counts(order: usize) -> (Vec<BigInt>, Vec<BigInt>) {
    solve_with::<BigInt>(&UNIVARIATE, order, &[], &[])
}

/// Solve the statistic system in the ring `R`; returns `(S, T)` coefficients.
pub fn solve_statistic_with<R: MarkerRing>(stat: Statistic, order: usize) -> (Vec<R>, Vec<R>) {
    let (s1, t1) = univariate_counts(order);
    solve_with::<R>(system(stat), order, &s1, &t1)
}

/// The requested class's bivariate series `K(x, u)` for a statistic.
pub fn solve_statistic_system(stat: Statistic, class: PathKind, order: usize) -> Result<BivariateSeries> {
    let (s, t) = solve_statistic_with::<ExactPoly>(stat, order);
    let chosen = match class {
        PathKind::S => s,
        PathKind::T => t,
        PathKind::U => return Err(Error::domain("statistic systems are defined for classes s and t")),
    };
    Ok(BivariateSeries::new(chosen.iter().map(ExactPoly::to_polynomial).collect(), order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{binomial, count_closed_form};

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn t_coefficients() {
        let t = solve_t(5);
        let expect = TruncatedSeries::from_ints(&[0, 1, 2, 7, 30, 143], 5);
        assert_eq!(t, expect);
        let t = solve_t(30);
        for n in 1..=30i64 {
            let lagrange = Rational::new(binomial(3 * n - 2, n - 1).into(), n.into());
            assert_eq!(t.coeff(n as usize), lagrange);
        }
    }

    #[test]
    fn s_and_t_counts() {
        assert_eq!(series_s(5), TruncatedSeries::from_ints(&[0, 1, 3, 12, 55, 273], 5));
        assert_eq!(series_t(5), TruncatedSeries::from_ints(&[1, 2, 7, 30, 143, 728], 5));
        let (s, t) = univariate_counts(30);
        let ss = series_s(30);
        for n in 0..=30 {
            let expected_s = if n == 0 { BigInt::default() } else { count_closed_form(PathKind::S, n).unwrap().into() };
            assert_eq!(s[n], expected_s);
            assert_eq!(t[n], BigInt::from(count_closed_form(PathKind::T, n).unwrap()));
            assert_eq!(ss.coeff(n), Rational::from_integer(s[n].clone()));
        }
    }

    #[test]
    fn functional_equations_vanish() {
        let report = check_functional_equations(30);
        assert!(report.all_zero(), "{:?}", report.failures());
        assert_eq!(report.residuals.len(), 7);
    }

    #[test]
    fn dropped_term_is_detected() {
        let order = 6;
        let s = series_s(order);
        let t = series_t(order);
        let x = TruncatedSeries::x(order);
        let one = TruncatedSeries::one(order);
        // S = x(1 + TS + S + S^2) with the 2S term weakened
        let r = &s - &(&x * &(&(&(&one + &(&t * &s)) + &s) + &s.pow(2)));
        assert_eq!(r.valuation(), Some(2));
    }

    #[test]
    fn returns_small_coefficients() {
        let k = solve_statistic_system(Statistic::Returns, PathKind::S, 4).unwrap();
        assert_eq!(k.coeff(1), Polynomial::from_ints(&[0, 0, 1]));
        assert_eq!(k.coeff(2), Polynomial::from_ints(&[0, 0, 1, 1, 1]));
        let p = solve_statistic_system(Statistic::PeaksUd, PathKind::T, 2).unwrap();
        assert_eq!(p.coeff(1), Polynomial::from_ints(&[1, 1]));
        assert!(solve_statistic_system(Statistic::Returns, PathKind::U, 2).is_err());
    }

    #[test]
    fn every_system_specialises_to_counts() {
        for stat in Statistic::ALL {
            for class in [PathKind::S, PathKind::T] {
                let k = solve_statistic_system(stat, class, 12).unwrap();
                let expect = if class == PathKind::S { series_s(12) } else { series_t(12) };
                assert_eq!(k.evaluate_at_u1(), expect, "{stat} {class}");
            }
        }
    }

    #[test]
    fn rings_agree() {
        for stat in Statistic::ALL {
            let (exact_s, exact_t) = solve_statistic_with::<ExactPoly>(stat, 9);
            let (cap_s, _) = solve_statistic_with::<IntPoly<3>>(stat, 9);
            let (jet_s, jet_t) = solve_statistic_with::<Jet>(stat, 9);
            let (int_s, _) = solve_statistic_with::<BigInt>(stat, 9);
            for n in 0..=9 {
                let p = &exact_s[n];
                let truncated = IntPoly::<3> { coeffs: p.coeffs.iter().take(4).cloned().collect() }.trim();
                assert_eq!(cap_s[n], truncated);
                let value: BigInt = p.coeffs.iter().sum();
                let d1: BigInt = p.coeffs.iter().enumerate().map(|(k, c)| c * big(k as i64)).sum();
                let d2h: BigInt = p.coeffs.iter().enumerate().map(|(k, c)| c * big((k * k.saturating_sub(1) / 2) as i64)).sum();
                assert_eq!(jet_s[n], Jet { value: value.clone(), d1, d2_half: d2h });
                assert_eq!(int_s[n], value);
                let tv: BigInt = exact_t[n].coeffs.iter().sum();
                assert_eq!(jet_t[n].value, tv);
            }
        }
    }
}
