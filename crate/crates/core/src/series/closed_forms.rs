//! Rational functions of `t` (and `u`) expanded in `x` through `t(1−t)² = x`.
//!
//! Each catalog entry carries the expression and, where known, a binomial
//! formula for its coefficient of `xⁿ`.

use std::collections::BTreeMap;
use std::sync::{Mutex, OnceLock};

use super::expr::{parse_expr, BivariateAlgebra, SeriesAlgebra};
use super::{solve_t, BivariateSeries, Polynomial, Rational, TruncatedSeries};
use crate::enumeration::{PathKind, Statistic};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: &'static str,
    /// Expression in `t`, `u` and `x`.
    pub expr: &'static str,
    /// `[xⁿ]` of the expansion as an expression in `n`, valid for `n ≥ 1`.
    pub coefficient: Option<&'static str>,
}

const fn entry(id: &'static str, expr: &'static str, coefficient: &'static str) -> CatalogEntry {
    CatalogEntry { id, expr, coefficient: Some(coefficient) }
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry { id: "returns_s_bgf", expr: "(1-t)tu^2/(1 - tu - tu^2 + t^2u^2)", coefficient: None },
    CatalogEntry { id: "returns_t_bgf", expr: "1/(1 - tu - tu^2 + t^2u^2)", coefficient: None },
    entry("returns_s_d1", "t(2-t)/(1-t)^3", "2C(3n+2,n-1) - 7C(3n+1,n-2) + 3C(3n,n-3)"),
    entry(
        "returns_s_d2",
        "2t(1+3t-4t^2+t^3)/(1-t)^5",
        "2(C(3n+4,n-1) - 13C(3n+2,n-3) + 13C(3n+1,n-4) - 3C(3n,n-5))",
    ),
    entry("returns_t_d1", "t(3-2t)/(1-t)^4", "3C(3n+3,n-1) - 11C(3n+2,n-2) + 6C(3n+1,n-3)"),
    entry(
        "returns_t_d2",
        "2t(1+6t-9t^2+3t^3)/(1-t)^6",
        "2(C(3n+5,n-1) + 3C(3n+4,n-2) - 27C(3n+3,n-3) + 30C(3n+2,n-4) - 9C(3n+1,n-5))",
    ),
    entry("peaks_ud_s_d1", "t(1-2t)/((1-3t)(1-t))", "C(3n,n-1) - 2C(3n-1,n-2)"),
    entry("peaks_ud_s_d2", "2t^2(1-5t+8t^2-3t^3)/((1-3t)^3(1-t))", "C(3n-1,n-2)n(n+3)/(3n-1)"),
    entry("peaks_ud_t_d1", "t/((1-3t)(1-t))", "C(3n,n-1)"),
    entry("peaks_ud_t_d2", "2t^2(1-2t)/((1-3t)^3(1-t))", "C(3n-1,n-2)n"),
    entry("peaks_uhd_s_d1", "t^2/(1-3t)", "C(3n-2,n-2)"),
    entry("peaks_uhd_s_d2", "2(1-2t)(1-t)t^3/(1-3t)^3", "2nC(3n-3,n-3)/3"),
    entry("peaks_uhd_t_d1", "t/(1-3t)", "C(3n-1,n-1)"),
    entry("peaks_uhd_t_d2", "2(1-3t+3t^2)(1-t)t^2/(1-3t)^3", "C(3n-3,n-2)n"),
    entry("valleys_du_s_d1", "t^2/((1-3t)(1-t))", "C(3n-1,n-2)"),
    entry("valleys_du_s_d2", "2(1-t-3t^2)t^3/((1-3t)^3(1-t))", "(n-1)C(3n-2,n-3)"),
    entry("valleys_du_t_d1", "2t^2/((1-3t)(1-t)^2)", "2C(3n,n-2)"),
    entry("valleys_du_t_d2", "2(2-t-9t^2)t^3/((1-3t)^3(1-t)^2)", "(n-1)(n-2)C(3n-1,n-2)/(n+1)"),
    entry("valleys_dhu_s_d1", "t^2/(1-3t)", "C(3n-2,n-2)"),
    entry("valleys_dhu_s_d2", "2(1-2t)(1-t)t^3/(1-3t)^3", "2nC(3n-3,n-3)/3"),
    entry("valleys_dhu_t_d1", "2t^2/((1-3t)(1-t))", "2C(3n-1,n-2)"),
    entry("valleys_dhu_t_d2", "2(2-3t-3t^2)t^3/(1-3t)^3", "2(n-1)C(3n-3,n-3)"),
    entry("axis_valleys_du_s_d1", "t^2/(1-t)^3", "C(3n+1,n-2) - 3C(3n,n-3)"),
    entry("axis_valleys_du_s_d2", "2t^3/(1-t)^5", "2C(3n+2,n-3) - 6C(3n+1,n-4)"),
    entry("axis_valleys_du_t_d1", "(2-t)t^2/(1-t)^4", "2C(3n+2,n-2) - 7C(3n+1,n-3) + 3C(3n,n-4)"),
    entry("axis_valleys_du_t_d2", "2(2-t)t^3/(1-t)^6", "4C(3n+3,n-3) - 14C(3n+2,n-4) + 6C(3n+1,n-5)"),
    entry("axis_valleys_dhu_s_d1", "t^2/(1-t)^2", "C(3n,n-2) - 3C(3n-1,n-3)"),
    entry("axis_valleys_dhu_s_d2", "2t^3/(1-t)^3", "2C(3n,n-3) - 6C(3n-1,n-4)"),
    entry("axis_valleys_dhu_t_d1", "(2-t)t^2/(1-t)^3", "2C(3n+1,n-2) - 7C(3n,n-3) + 3C(3n-1,n-4)"),
    entry("axis_valleys_dhu_t_d2", "2(2-t)t^3/(1-t)^4", "4C(3n+1,n-3) - 14C(3n,n-4) + 6C(3n-1,n-5)"),
    entry("table8_row1", "2t^2(1-5t+8t^2-3t^3)/((1-3t)^3(1-t))", "C(3n-2,n-3)n(n+3)/(n-2)"),
    entry("table8_row2", "2t^2(1-2t)/((1-3t)^3(1-t))", "C(3n-1,n-2)n"),
    entry("table8_row3", "2t^3(1-2t)(1-t)/(1-3t)^3", "2nC(3n-3,n-3)/3"),
    entry("table8_row4", "2t^2(1-3t+3t^2)(1-t)/(1-3t)^3", "C(3n-3,n-2)n"),
    entry("table8_row5", "2t^3(1-t-3t^2)/((1-3t)^3(1-t))", "C(3n-2,n-3)(n-1)"),
    entry("table8_row6", "2t^3(2-t-9t^2)/((1-3t)^3(1-t)^2)", "C(3n-1,n-2)(n-1)(n-2)/(n+1)"),
    entry("table8_row7", "2t^3(2-3t-3t^2)/(1-3t)^3", "2C(3n-3,n-3)(n-1)"),
    entry("q3", "t^3/(1-3t)", "C(3n-3,n-3)"),
];

pub fn lookup(id: &str) -> Result<&'static CatalogEntry> {
    CATALOG
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::domain(format!("unknown closed-form id {id:?}")))
}

/// Catalog ids of the first and second `u`-derivatives at `u = 1` for a statistic.
pub fn derivative_ids(stat: Statistic, class: PathKind) -> Result<(String, String)> {
    let c = match class {
        PathKind::S => "s",
        PathKind::T => "t",
        PathKind::U => return Err(Error::domain("derivative catalog covers classes s and t")),
    };
    Ok((format!("{}_{c}_d1", stat.name()), format!("{}_{c}_d2", stat.name())))
}

/// `solve_t(order)`, memoised per order.
pub fn t_series(order: usize) -> TruncatedSeries {
    static CACHE: OnceLock<Mutex<BTreeMap<usize, TruncatedSeries>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(t) = cache.lock().expect("cache lock").get(&order) {
        return t.clone();
    }
    let t = solve_t(order);
    cache.lock().expect("cache lock").insert(order, t.clone());
    t
}

/// Expand an arbitrary expression in `t`, `x` and `u` (with `u` bound to a value).
pub fn expand_in_t(expr: &str, order: usize, u: &Rational) -> Result<TruncatedSeries> {
    let bindings = [
        ('t', t_series(order)),
        ('x', TruncatedSeries::x(order)),
        ('u', TruncatedSeries::constant(u.clone(), order)),
    ];
    parse_expr(expr)?.eval(&SeriesAlgebra { order, bindings: &bindings })
}

/// Expansion of a catalog entry with `u` kept symbolic.
pub fn closed_form_in_t(id: &str, order: usize) -> Result<BivariateSeries> {
    let e = lookup(id)?;
    let bindings = [
        ('t', BivariateSeries::from_series(&t_series(order))),
        ('x', BivariateSeries::from_series(&TruncatedSeries::x(order))),
        ('u', BivariateSeries::constant(Polynomial::var(), order)),
    ];
    parse_expr(e.expr)?.eval(&BivariateAlgebra { order, bindings: &bindings })
}

/// Expansion of a catalog entry with `u` set to a value.
pub fn closed_form_in_t_at(id: &str, order: usize, u: &Rational) -> Result<TruncatedSeries> {
    expand_in_t(lookup(id)?.expr, order, u)
}
