use num_bigint::BigInt;
use serde::Serialize;

use crate::bijections::omega_split;
use crate::enumeration::{binomial, count_closed_form, generate_paths, PathKind};
use crate::error::Result;
use crate::series::closed_forms::{expand_in_t, lookup};
use crate::series::expr::eval_at;
use crate::series::{integer, rational, series_s, series_t, Rational, TruncatedSeries};

fn c(a: i64, b: i64) -> BigInt {
    binomial(a, b).into()
}

fn pow3(k: i64) -> BigInt {
    BigInt::from(3).pow(k as u32)
}

/// `2 Σ_{k≥j} 3^k (k+1) [C(3n−k−1, n−k−2) − 2 C(3n−k−2, n−k−3)]` and its closed form.
pub fn family_one(n: i64, j: i64) -> (BigInt, BigInt) {
    let lhs: BigInt = (j..=n.max(j))
        .map(|k| pow3(k) * (k + 1) * (c(3 * n - k - 1, n - k - 2) - 2 * c(3 * n - k - 2, n - k - 3)))
        .sum::<BigInt>()
        * 2;
    let rhs = c(3 * n - j - 1, n - j - 2) * (n + j) * pow3(j);
    (lhs, rhs)
}

/// `2 Σ_{k≥0} 3^k (k+2i) C(3n−k+i−4, n−k−i−1)` and its closed form.
pub fn family_two(n: i64, i: i64) -> (BigInt, BigInt) {
    let lhs: BigInt =
        (0..=n).map(|k| pow3(k) * (k + 2 * i) * c(3 * n - k + i - 4, n - k - i - 1)).sum::<BigInt>() * 2;
    (lhs, c(3 * n + i - 3, n - i) * (n - i))
}

/// `2 Σ_{k≥0} 3^k (k+2i+1) C(3n−k+i−2, n−k−i−1)` and its closed form.
pub fn family_three(n: i64, i: i64) -> (BigInt, BigInt) {
    let lhs: BigInt =
        (0..=n).map(|k| pow3(k) * (k + 2 * i + 1) * c(3 * n - k + i - 2, n - k - i - 1)).sum::<BigInt>() * 2;
    (lhs, c(3 * n + i - 1, n - i) * (n - i))
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityFailure {
    pub family: u8,
    pub n: i64,
    pub parameter: i64,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport {
    pub n_max: i64,
    pub j_max: i64,
    pub i_max: i64,
    pub checked: usize,
    pub failures: Vec<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check the three families for `1 ≤ n ≤ n_max`, `0 ≤ j ≤ j_max`, `1 ≤ i ≤ i_max`.
pub fn identity_suite(n_max: i64, j_max: i64, i_max: i64) -> IdentityReport {
    let mut report = IdentityReport { n_max, j_max, i_max, checked: 0, failures: Vec::new() };
    let mut record = |family: u8, n: i64, parameter: i64, (lhs, rhs): (BigInt, BigInt)| {
        report.checked += 1;
        if lhs != rhs {
            report.failures.push(IdentityFailure { family, n, parameter, lhs: lhs.to_string(), rhs: rhs.to_string() });
        }
    };
    for n in 1..=n_max {
        for j in 0..=j_max {
            record(1, n, j, family_one(n, j));
        }
        for i in 1..=i_max {
            record(2, n, i, family_two(n, i));
            record(3, n, i, family_three(n, i));
        }
    }
    report
}

#[derive(Debug, Clone, Serialize)]
pub struct Table8Row {
    pub row: usize,
    pub generating_function: &'static str,
    pub coefficient: &'static str,
    /// Coefficient form used where the tabulated one is singular.
    pub continuation: Option<&'static str>,
    pub derivative_agrees: bool,
    pub binomial_agrees: bool,
    pub mismatches: Vec<String>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table8Report {
    pub order: usize,
    pub rows: Vec<Table8Row>,
}

impl Table8Report {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.derivative_agrees && r.binomial_agrees)
    }
}

const ROW1_CONTINUATION: &str = "C(3n-1,n-2)n(n+3)/(3n-1)";

/// Derivative representation of each row, built from `q_k = t^k/(1−3t)`.
fn derivative_form(row: usize, order: usize) -> Result<TruncatedSeries> {
    let work = order + 3;
    let q = |k: usize| expand_in_t(&format!("t^{k}/(1-3t)"), work, &integer(1));
    let d = |k: usize| -> Result<TruncatedSeries> { Ok(q(k)?.differentiate_x()) };
    let x = TruncatedSeries::x(work);
    let r = |p: i64, q: i64| rational(p, q);
    let s = match row {
        1 => d(3)?.scale(&r(-2, 3)) + (&x * &d(2)?).scale(&integer(2)),
        2 => d(3)?.scale(&r(2, 3)),
        3 => (&x * &d(3)?).scale(&r(2, 3)),
        4 => &x * &d(2)? - &x * &d(3)?,
        5 => d(5)?.scale(&r(1, 2)) + d(4)?.scale(&r(1, 2)),
        6 => {
            let inner = q(5)?.scale(&r(4, 5)) + q(6)?.scale(&r(3, 5)) - q(7)?;
            inner.differentiate_x().shift(-1)
        }
        7 => d(6)?.scale(&r(-2, 5)) - d(5)?.scale(&r(1, 5)) + d(4)?,
        _ => unreachable!("table rows are 1..=7"),
    };
    Ok(s.truncate(order))
}

/// Verify the seven rows three ways: rational function, derivative form, binomial coefficients.
pub fn table8_suite(order: usize) -> Result<Table8Report> {
    let mut rows = Vec::new();
    for row in 1..=7 {
        let entry = lookup(&format!("table8_row{row}"))?;
        let coefficient = entry.coefficient.expect("table rows carry coefficient forms");
        let continuation = (row == 1).then_some(ROW1_CONTINUATION);
        let gf = expand_in_t(entry.expr, order, &integer(1))?;
        let deriv = derivative_form(row, order)?;
        let mut mismatches = Vec::new();
        let mut notes = Vec::new();
        let derivative_agrees = gf == deriv;
        if !derivative_agrees {
            mismatches.push("derivative form differs".to_string());
        }
        let mut binomial_agrees = gf.coeff(0) == Rational::from_integer(0.into());
        for n in 1..=order {
            let nn = integer(n as i64);
            let value = match eval_at(coefficient, 'n', &nn) {
                Ok(v) => v,
                Err(e) => match continuation {
                    Some(cont) => {
                        notes.push(format!("n = {n}: {coefficient} is singular ({e}); used {cont}"));
                        eval_at(cont, 'n', &nn)?
                    }
                    None => return Err(e),
                },
            };
            if value != gf.coeff(n) {
                binomial_agrees = false;
                mismatches.push(format!("[x^{n}]: binomial form {value}, generating function {}", gf.coeff(n)));
            }
        }
        rows.push(Table8Row {
            row,
            generating_function: entry.expr,
            coefficient,
            continuation,
            derivative_agrees,
            binomial_agrees,
            mismatches,
            notes,
        });
    }
    Ok(Table8Report { order, rows })
}

#[derive(Debug, Clone, Serialize)]
pub struct KnuthReport {
    pub order: usize,
    /// `(1 + S)² = T` as series.
    pub series_identity: bool,
    /// Per size: `t_n`, the convolution `Σ s_a s_b` over `a + b = n` (with `s_0 = 1`), and whether
    /// the split of every T-path lands on pairs of the matching sizes.
    pub rows: Vec<(usize, String, String, bool)>,
}

impl KnuthReport {
    pub fn passed(&self) -> bool {
        self.series_identity && self.rows.iter().all(|(_, t, conv, tally)| t == conv && *tally)
    }
}

pub fn knuth_check(order: usize, bijective_n: usize) -> Result<KnuthReport> {
    let s = series_s(order);
    let t = series_t(order);
    let one_plus_s = &TruncatedSeries::one(order) + &s;
    let series_identity = &one_plus_s * &one_plus_s == t;
    let mut rows = Vec::new();
    let mut s_counts = vec![BigInt::from(1)];
    for a in 1..=bijective_n {
        s_counts.push(count_closed_form(PathKind::S, a)?.into());
    }
    let s_at = |a: usize| s_counts[a].clone();
    for n in 0..=bijective_n {
        let conv: BigInt = (0..=n).map(|a| s_at(a) * s_at(n - a)).sum();
        let tn: BigInt = count_closed_form(PathKind::T, n)?.into();
        let mut tally = vec![BigInt::from(0); n + 1];
        let mut consistent = true;
        for p in generate_paths(PathKind::T, n) {
            let pair = omega_split(&p)?;
            let a = pair.a.len() / 3;
            consistent &= a + pair.b.len() / 3 == n;
            if a <= n {
                tally[a] += 1;
            }
        }
        consistent &= tally.iter().enumerate().all(|(a, c)| c == &(s_at(a) * s_at(n - a)));
        rows.push((n, tn.to_string(), conv.to_string(), consistent));
    }
    Ok(KnuthReport { order, series_identity, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worked_identity_value() {
        assert_eq!(family_one(5, 0), (BigInt::from(1820), BigInt::from(1820)));
        assert_eq!(family_one(5, 0).1, c(14, 3) * 5);
    }

    #[test]
    fn families_hold_small_grid() {
        let report = identity_suite(15, 15, 15);
        assert!(report.passed(), "{:?}", report.failures.first());
        assert_eq!(report.checked, 15 * (16 + 30));
    }

    #[test]
    fn table8_rows() {
        let report = table8_suite(12).unwrap();
        for row in &report.rows {
            assert!(row.derivative_agrees && row.binomial_agrees, "row {}: {:?}", row.row, row.mismatches);
        }
        assert_eq!(report.rows[0].notes.len(), 1);
        assert!(report.rows[1..].iter().all(|r| r.notes.is_empty()));
    }

    #[test]
    fn knuth_convolution() {
        let report = knuth_check(20, 4).unwrap();
        assert!(report.passed(), "{report:?}");
    }
}
