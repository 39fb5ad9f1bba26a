//! Named verification suites, each a list of pass/fail checks.
//!
//! `max_n` bounds the enumerative suites (counts, bijections, stats). The analytic suites run
//! at fixed sizes: series order 30, limit comparisons at n = 60, identities for n ≤ 40.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::Serialize;

use crate::analytics::{
    closed_form_mean, explicit_return_probability, identity_suite, knuth_check, limit_distribution, mean_consistency,
    returns_mean_correction_gap, summary, table8_suite, total_variation, ErratumPolicy, Method,
};
use crate::bijections::{
    noncrossing_to_s, omega_join, omega_split, phi_compose, phi_decompose, s_to_noncrossing, s_to_ternary,
    t_to_tree_pair, ternary_to_s, tree_pair_to_t,
};
use crate::enumeration::{count_closed_form, distribution_bruteforce, generate_paths, PathKind, Statistic};
use crate::error::{Error, Result};
use crate::paths::{parse_path, LatticePath};
use crate::series::{
    check_functional_equations, rational, series_s, series_t, solve_statistic_system, to_f64, Rational,
};
use crate::trees::{all_ternary_trees, decode_noncrossing, decode_ternary, TernaryTree};

/// Series order for the equation and coefficient-table suites.
pub const SERIES_ORDER: usize = 30;
/// Size at which finite laws are compared with their limits.
pub const LIMIT_N: usize = 60;
/// Exactly resolved head of each law in total-variation bounds.
pub const LIMIT_K: usize = 40;
/// Total-variation tolerance for the returns laws.
pub const TV_RETURNS: f64 = 0.02;
/// Total-variation tolerance for the corrected T axis-valley law.
pub const TV_ERRATUM: f64 = 0.03;
/// Largest size handled by exhaustive enumeration in the stats suite.
pub const BRUTEFORCE_MAX_N: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Counts,
    Bijections,
    Equations,
    Stats,
    Limits,
    Identities,
    Table8,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Counts, Suite::Bijections, Suite::Equations, Suite::Stats, Suite::Limits, Suite::Identities, Suite::Table8];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Counts => "counts",
            Suite::Bijections => "bijections",
            Suite::Equations => "equations",
            Suite::Stats => "stats",
            Suite::Limits => "limits",
            Suite::Identities => "identities",
            Suite::Table8 => "table8",
            Suite::All => "all",
        }
    }

    fn is_enumerative(self) -> bool {
        matches!(self, Suite::Counts | Suite::Bijections | Suite::Stats)
    }

    pub fn default_max_n(self) -> usize {
        match self {
            Suite::Counts => 7,
            Suite::Bijections => 6,
            Suite::Stats => 5,
            _ => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|suite| suite.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::domain(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Evaluated literally but known to be unattainable; excluded from the suite verdict.
    pub known_failure: bool,
    pub detail: String,
}

impl Check {
    pub fn label(&self) -> &'static str {
        match (self.passed, self.known_failure) {
            (true, _) => "PASS",
            (false, true) => "XFAIL",
            (false, false) => "FAIL",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub max_n: Option<usize>,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed || c.known_failure)
    }

    fn push(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, known_failure: false, detail: detail.into() });
    }

    fn push_known_failure(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, known_failure: true, detail: detail.into() });
    }
}

/// Run one suite, or every suite for `All`.
pub fn run(suite: Suite, max_n: Option<usize>) -> Result<Vec<SuiteReport>> {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    suites
        .into_iter()
        .map(|s| {
            let bound = s.is_enumerative().then(|| max_n.unwrap_or(s.default_max_n()));
            run_one(s, bound)
        })
        .collect()
}

fn run_one(suite: Suite, max_n: Option<usize>) -> Result<SuiteReport> {
    let mut r = SuiteReport { suite, max_n, checks: Vec::new() };
    let n = max_n.unwrap_or(0);
    match suite {
        Suite::Counts => counts(&mut r, n)?,
        Suite::Bijections => bijections(&mut r, n)?,
        Suite::Equations => equations(&mut r)?,
        Suite::Stats => stats(&mut r, n)?,
        Suite::Limits => limits(&mut r)?,
        Suite::Identities => {
            let report = identity_suite(40, 40, 40);
            let detail = match report.failures.first() {
                Some(f) => format!("family {} fails at n = {}, parameter {}", f.family, f.n, f.parameter),
                None => format!("{} instances, 1 <= n <= 40", report.checked),
            };
            r.push("three binomial families", report.passed(), detail);
        }
        Suite::Table8 => {
            let report = table8_suite(SERIES_ORDER)?;
            for row in report.rows {
                let detail = row.mismatches.first().or(row.notes.first()).cloned().unwrap_or_default();
                r.push(format!("row {} to order {SERIES_ORDER}", row.row), row.derivative_agrees && row.binomial_agrees, detail);
            }
        }
        Suite::All => unreachable!("expanded by run"),
    }
    Ok(r)
}

fn counts(r: &mut SuiteReport, max_n: usize) -> Result<()> {
    for kind in [PathKind::S, PathKind::T, PathKind::U] {
        let first = if kind == PathKind::U { 1 } else { 0 };
        for n in first..=max_n {
            let formula = count_closed_form(kind, n)?;
            let generated = generate_paths(kind, n).count();
            r.push(
                format!("{kind} n = {n}"),
                formula == generated.into(),
                format!("formula {formula}, generated {generated}"),
            );
        }
    }
    Ok(())
}

fn path(text: &str) -> Result<LatticePath> {
    parse_path(text)
}

fn chain(dirs: &str) -> TernaryTree {
    dirs.chars().rev().fold(TernaryTree::leaf(), |t, d| match d {
        'L' => TernaryTree::node(t, TernaryTree::Empty, TernaryTree::Empty),
        'M' => TernaryTree::node(TernaryTree::Empty, t, TernaryTree::Empty),
        _ => TernaryTree::node(TernaryTree::Empty, TernaryTree::Empty, t),
    })
}

/// Size-3 S-paths with their ternary trees: chains by direction sequence, then the forks.
const TERNARY_CHAINS: [(&str, &str); 9] = [
    ("hudhudhud", "LL"),
    ("huhudhudd", "RL"),
    ("hudhuhdud", "ML"),
    ("huhuddhud", "LR"),
    ("huhdudhud", "LM"),
    ("huhuhddud", "MR"),
    ("huhduhdud", "MM"),
    ("huhuhdudd", "RM"),
    ("huhuhuddd", "RR"),
];
const TERNARY_FORKS: [(&str, &str); 3] = [
    ("huhudhdud", "[[null,null,null],[null,null,null],null]"),
    ("hudhuhudd", "[[null,null,null],null,[null,null,null]]"),
    ("huhduhudd", "[null,[null,null,null],[null,null,null]]"),
];

/// Size-3 S-paths with the children of the root of their non-crossing trees.
const NONCROSSING_ROWS: [(&str, &str); 12] = [
    ("hudhudhud", r#"[{"left":[{"left":[{"left":[],"right":[]}],"right":[]}],"right":[]}]"#),
    ("huhudhudd", r#"[{"left":[],"right":[]},{"left":[{"left":[],"right":[]}],"right":[]}]"#),
    ("hudhuhdud", r#"[{"left":[],"right":[{"left":[{"left":[],"right":[]}],"right":[]}]}]"#),
    ("huhudhdud", r#"[{"left":[{"left":[],"right":[]}],"right":[{"left":[],"right":[]}]}]"#),
    ("hudhuhudd", r#"[{"left":[{"left":[],"right":[]}],"right":[]},{"left":[],"right":[]}]"#),
    ("huhuddhud", r#"[{"left":[{"left":[],"right":[]},{"left":[],"right":[]}],"right":[]}]"#),
    ("huhdudhud", r#"[{"left":[{"left":[],"right":[{"left":[],"right":[]}]}],"right":[]}]"#),
    ("huhuhddud", r#"[{"left":[],"right":[{"left":[],"right":[]},{"left":[],"right":[]}]}]"#),
    ("huhduhdud", r#"[{"left":[],"right":[{"left":[],"right":[{"left":[],"right":[]}]}]}]"#),
    ("huhuhdudd", r#"[{"left":[],"right":[]},{"left":[],"right":[{"left":[],"right":[]}]}]"#),
    ("huhduhudd", r#"[{"left":[],"right":[{"left":[],"right":[]}]},{"left":[],"right":[]}]"#),
    ("huhuhuddd", r#"[{"left":[],"right":[]},{"left":[],"right":[]},{"left":[],"right":[]}]"#),
];

fn golden_tables(r: &mut SuiteReport) -> Result<()> {
    let mut ok = 0;
    let mut bad = Vec::new();
    let rows = TERNARY_CHAINS
        .iter()
        .map(|&(p, d)| Ok((p, chain(d))))
        .chain(TERNARY_FORKS.iter().map(|&(p, json)| Ok((p, decode_ternary(json)?))))
        .collect::<Result<Vec<_>>>()?;
    for (p, tree) in rows {
        let m = path(p)?;
        if s_to_ternary(&m)? == tree && ternary_to_s(&tree) == m {
            ok += 1;
        } else {
            bad.push(p);
        }
    }
    r.push("ternary table", bad.is_empty(), format!("{ok} of 12 rows; mismatched {bad:?}"));
    let mut ok = 0;
    let mut bad = Vec::new();
    for (p, body) in NONCROSSING_ROWS {
        let tree = decode_noncrossing(&format!(r#"{{"children":{body}}}"#))?;
        let m = path(p)?;
        if s_to_noncrossing(&m)? == tree && noncrossing_to_s(&tree) == m {
            ok += 1;
        } else {
            bad.push(p);
        }
    }
    r.push("non-crossing table", bad.is_empty(), format!("{ok} of 12 rows; mismatched {bad:?}"));

    let s_example = LatticePath::from_deltas(&[0, 1, 0, -1, 1, 0, 1, -1, 0, -1, 1, 0, 1, -1, 0, 1, -1, -1]);
    let triple = phi_decompose(&s_example)?;
    let phi_ok = triple.a == LatticePath::from_deltas(&[0, 1, -1])
        && triple.b == LatticePath::from_deltas(&[0, 1, 0, -1, 1, -1])
        && triple.c == LatticePath::from_deltas(&[0, 1, -1, 0, 1, -1]);
    r.push("phi worked example", phi_ok, format!("{} | {} | {}", triple.a, triple.b, triple.c));
    let t_example = LatticePath::from_deltas(&[1, 0, 1, 0, -1, -1, 1, 0, 1, 0, 1, -1, -1, 0, -1]);
    let pair = omega_split(&t_example)?;
    let omega_ok = pair.a == LatticePath::from_deltas(&[0, 1, 0, 1, 0, -1, -1, 1, -1])
        && pair.b == LatticePath::from_deltas(&[0, 1, 0, 1, -1, -1]);
    r.push("omega worked example", omega_ok, format!("{} | {}", pair.a, pair.b));
    Ok(())
}

fn bijections(r: &mut SuiteReport, max_n: usize) -> Result<()> {
    golden_tables(r)?;
    for n in 0..=max_n {
        let mut failures = 0usize;
        let mut seen = 0usize;
        for m in generate_paths(PathKind::S, n) {
            seen += 1;
            let phi_ok = m.is_empty() || phi_compose(&phi_decompose(&m)?)? == m;
            let ok = phi_ok
                && ternary_to_s(&s_to_ternary(&m)?) == m
                && noncrossing_to_s(&s_to_noncrossing(&m)?) == m;
            failures += usize::from(!ok);
        }
        for tree in all_ternary_trees(n) {
            seen += 1;
            failures += usize::from(s_to_ternary(&ternary_to_s(&tree))? != tree);
        }
        for m in generate_paths(PathKind::T, n) {
            seen += 1;
            let ok = omega_join(&omega_split(&m)?)? == m && tree_pair_to_t(&t_to_tree_pair(&m)?) == m;
            failures += usize::from(!ok);
        }
        r.push(format!("round trips n = {n}"), failures == 0, format!("{seen} objects, {failures} failures"));
    }
    let knuth = knuth_check(SERIES_ORDER, max_n.min(5))?;
    r.push("(1+S)^2 = T and split-size tally", knuth.passed(), format!("series order {}", knuth.order));
    Ok(())
}

fn equations(r: &mut SuiteReport) -> Result<()> {
    let report = check_functional_equations(SERIES_ORDER);
    for (name, residual) in &report.residuals {
        r.push(name.clone(), residual.is_zero(), format!("order {SERIES_ORDER}"));
    }
    let (s, t) = (series_s(SERIES_ORDER), series_t(SERIES_ORDER));
    let mut bad = Vec::new();
    for n in 1..=SERIES_ORDER {
        let cs: BigInt = count_closed_form(PathKind::S, n)?.into();
        let ct: BigInt = count_closed_form(PathKind::T, n)?.into();
        if s.coeff(n) != Rational::from_integer(cs) || t.coeff(n) != Rational::from_integer(ct) {
            bad.push(n);
        }
    }
    r.push("series coefficients match binomial counts", bad.is_empty(), format!("1 <= n <= {SERIES_ORDER}; bad {bad:?}"));
    Ok(())
}

fn stats(r: &mut SuiteReport, max_n: usize) -> Result<()> {
    let brute_n = max_n.min(BRUTEFORCE_MAX_N);
    for class in [PathKind::S, PathKind::T] {
        for stat in Statistic::ALL {
            let mut problems = Vec::new();
            let bivariate = solve_statistic_system(stat, class, brute_n)?;
            for n in 1..=brute_n {
                let brute = distribution_bruteforce(class, stat, n)?;
                let poly = bivariate.coeff(n);
                let top = brute.counts.keys().max().copied().unwrap_or(0).max(poly.degree().unwrap_or(0));
                if (0..=top).any(|k| poly.coeff(k) != Rational::from_integer(brute.count(k).into())) {
                    problems.push(format!("distribution n = {n}"));
                }
                for method in [Method::Series, Method::ClosedForm] {
                    let s = summary(class, stat, n, method)?;
                    if s.mean != brute.mean() || s.variance != brute.variance() {
                        problems.push(format!("{method} n = {n}"));
                    }
                }
            }
            for n in [10, 25, 50] {
                let s = summary(class, stat, n, Method::Series)?;
                let c = summary(class, stat, n, Method::ClosedForm)?;
                if s.mean != c.mean || s.variance != c.variance {
                    problems.push(format!("series vs closed form n = {n}"));
                }
            }
            let detail = if problems.is_empty() {
                format!("n <= {brute_n} exhaustive; n = 10, 25, 50 by series")
            } else {
                problems.join(", ")
            };
            r.push(format!("{class} {stat}"), problems.is_empty(), detail);
        }
    }
    Ok(())
}

fn limits(r: &mut SuiteReport) -> Result<()> {
    for class in [PathKind::S, PathKind::T] {
        let law = limit_distribution(class, Statistic::Returns, ErratumPolicy::Corrected)?;
        let probs = law.probabilities(20)?;
        let mut explicit_ok = true;
        for (k, p) in probs.iter().enumerate() {
            explicit_ok &= &explicit_return_probability(class, k as u32)? == p;
        }
        r.push(format!("{class} returns explicit probabilities"), explicit_ok, "k <= 20, exact");
        let tv = to_f64(&total_variation(&law, LIMIT_N, LIMIT_K)?.upper);
        r.push(
            format!("{class} returns TV at n = {LIMIT_N}"),
            tv < TV_RETURNS,
            format!("upper bound {tv:.5}, tolerance {TV_RETURNS}"),
        );
    }
    let targets = [
        (PathKind::S, Statistic::Returns, rational(23, 4)),
        (PathKind::T, Statistic::Returns, rational(19, 4)),
        (PathKind::S, Statistic::AxisValleysDu, rational(7, 4)),
        (PathKind::S, Statistic::AxisValleysDhu, rational(1, 1)),
        (PathKind::T, Statistic::AxisValleysDhu, rational(11, 12)),
        (PathKind::T, Statistic::AxisValleysDu, rational(19, 12)),
    ];
    for (class, stat, target) in targets {
        let law = limit_distribution(class, stat, ErratumPolicy::Corrected)?;
        let (pgf_mean, tabulated) = mean_consistency(&law)?;
        r.push(
            format!("{class} {stat} normalisation and mean"),
            law.is_normalised() && pgf_mean == target && tabulated == target,
            format!("pgf'(1) = {pgf_mean}, limit of tabulated mean = {tabulated}"),
        );
    }
    let printed = limit_distribution(PathKind::T, Statistic::AxisValleysDu, ErratumPolicy::AsPrinted);
    r.push(
        "printed T axis_valleys_du law rejected",
        printed.is_err(),
        printed.err().map(|e| e.to_string()).unwrap_or_default(),
    );
    let corrected = limit_distribution(PathKind::T, Statistic::AxisValleysDu, ErratumPolicy::Corrected)?;
    let tv = to_f64(&total_variation(&corrected, LIMIT_N, LIMIT_K)?.upper);
    r.push(
        format!("corrected T axis_valleys_du TV at n = {LIMIT_N}"),
        tv < TV_ERRATUM,
        format!("upper bound {tv:.5}, tolerance {TV_ERRATUM}"),
    );
    for class in [PathKind::S, PathKind::T] {
        let mut gaps = Vec::new();
        for n in [100, 200, 400] {
            gaps.push(to_f64(&returns_mean_correction_gap(class, n)?));
        }
        let limit = to_f64(&closed_form_mean(class, Statistic::Returns)?.limit_at_infinity()?);
        let monotone = gaps.windows(2).all(|w| w[1] <= w[0]);
        r.push_known_failure(
            format!("{class} returns n^2 mean gap non-increasing"),
            monotone,
            format!("c = {limit}: {:.3}, {:.3}, {:.3} at n = 100, 200, 400", gaps[0], gaps[1], gaps[2]),
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::EACH.into_iter().chain([Suite::All]) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("everything".parse::<Suite>().is_err());
    }

    #[test]
    fn small_enumerative_suites_pass() {
        for (suite, n) in [(Suite::Counts, 5), (Suite::Bijections, 3), (Suite::Stats, 3)] {
            let reports = run(suite, Some(n)).unwrap();
            assert!(reports.iter().all(SuiteReport::passed), "{reports:?}");
        }
    }

    #[test]
    fn equations_suite_passes() {
        assert!(run(Suite::Equations, None).unwrap()[0].passed());
    }

    #[test]
    fn known_failures_do_not_fail_the_suite() {
        let mut r = SuiteReport { suite: Suite::Limits, max_n: None, checks: Vec::new() };
        r.push_known_failure("x", false, "");
        assert!(r.passed());
        assert_eq!(r.checks[0].label(), "XFAIL");
        r.push("y", false, "");
        assert!(!r.passed());
    }
}
