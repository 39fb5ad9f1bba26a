//! Exhaustive generation, exact counting and brute-force statistic tallies.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::paths::{path_statistics, LatticePath, PathStatistics, Step};

/// Default largest `n` accepted by the brute-force oracle.
pub const DEFAULT_BRUTEFORCE_CAP: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathKind {
    S,
    T,
    U,
}

impl PathKind {
    pub fn name(self) -> &'static str {
        match self {
            PathKind::S => "s",
            PathKind::T => "t",
            PathKind::U => "u",
        }
    }
}

impl fmt::Display for PathKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PathKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s" => Ok(PathKind::S),
            "t" => Ok(PathKind::T),
            "u" => Ok(PathKind::U),
            _ => Err(Error::domain(format!("unknown path class {s:?} (expected s, t or u)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Statistic {
    Returns,
    PeaksUd,
    PeaksUhd,
    ValleysDu,
    ValleysDhu,
    AxisValleysDu,
    AxisValleysDhu,
}

impl Statistic {
    pub const ALL: [Statistic; 7] = [
        Statistic::Returns,
        Statistic::PeaksUd,
        Statistic::PeaksUhd,
        Statistic::ValleysDu,
        Statistic::ValleysDhu,
        Statistic::AxisValleysDu,
        Statistic::AxisValleysDhu,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Statistic::Returns => "returns",
            Statistic::PeaksUd => "peaks_ud",
            Statistic::PeaksUhd => "peaks_uhd",
            Statistic::ValleysDu => "valleys_du",
            Statistic::ValleysDhu => "valleys_dhu",
            Statistic::AxisValleysDu => "axis_valleys_du",
            Statistic::AxisValleysDhu => "axis_valleys_dhu",
        }
    }

    pub fn value(self, s: &PathStatistics) -> usize {
        match self {
            Statistic::Returns => s.returns,
            Statistic::PeaksUd => s.peaks_ud,
            Statistic::PeaksUhd => s.peaks_uhd,
            Statistic::ValleysDu => s.valleys_du,
            Statistic::ValleysDhu => s.valleys_dhu,
            Statistic::AxisValleysDu => s.axis_valleys_du,
            Statistic::AxisValleysDhu => s.axis_valleys_dhu,
        }
    }

    fn index(self) -> usize {
        Statistic::ALL.iter().position(|&s| s == self).expect("listed")
    }
}

impl fmt::Display for Statistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Statistic {
    type Err = Error;

    /// Accepts snake or kebab case, and the singular `axis_valley_*` spelling.
    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('-', "_");
        let key = key.replace("axis_valley_", "axis_valleys_");
        Statistic::ALL
            .into_iter()
            .find(|st| st.name() == key)
            .ok_or_else(|| Error::domain(format!("unknown statistic {s:?}")))
    }
}

/// Lexicographic (u < h < d) backtracking generator over one path class.
///
/// Only the Down steps are free: the remaining steps alternate in a fixed
/// order, so a choice point offers at most two options and every valid
/// prefix extends to a complete path.
#[derive(Debug, Clone)]
pub struct PathGenerator {
    n: usize,
    target: usize,
    first: Step,
    second: Step,
    strip_first: bool,
    steps: Vec<Step>,
    height: i64,
    downs: usize,
    others: usize,
    base: usize,
    // next option per depth in base..=len: 0 = forced step, 1 = Down, 2 = exhausted
    cursor: Vec<u8>,
    explored: u64,
    finished: bool,
}

impl PathGenerator {
    pub fn new(kind: PathKind, n: usize) -> Self {
        Self::build(kind, n, 3 * n, &[])
    }

    /// Paths of the class that start with `prefix`; empty if the prefix is not
    /// extendable. For the `U` class the prefix omits the implicit initial Flat.
    pub fn with_prefix(kind: PathKind, n: usize, prefix: &[Step]) -> Self {
        Self::build(kind, n, 3 * n, prefix)
    }

    fn build(kind: PathKind, n: usize, target: usize, prefix: &[Step]) -> Self {
        let (first, second) = match kind {
            PathKind::T => (Step::Up, Step::Flat),
            PathKind::S | PathKind::U => (Step::Flat, Step::Up),
        };
        let strip_first = kind == PathKind::U;
        let mut g = PathGenerator {
            n,
            target,
            first,
            second,
            strip_first,
            steps: Vec::with_capacity(target),
            height: 0,
            downs: 0,
            others: 0,
            base: 0,
            cursor: Vec::new(),
            explored: 0,
            finished: strip_first && n == 0,
        };
        let lead = if strip_first && n > 0 { Some(Step::Flat) } else { None };
        for &step in lead.iter().chain(prefix) {
            if g.steps.len() >= target || !g.allowed(step) {
                g.finished = true;
                break;
            }
            g.apply(step);
        }
        g.base = g.steps.len();
        g.cursor.push(0);
        g
    }

    /// Number of tree nodes visited so far (each pushed step counts once).
    pub fn explored(&self) -> u64 {
        self.explored
    }

    fn forced(&self) -> Option<Step> {
        if self.others < 2 * self.n {
            Some(if self.others.is_multiple_of(2) { self.first } else { self.second })
        } else {
            None
        }
    }

    fn allowed(&self, step: Step) -> bool {
        match step {
            Step::Down => self.height > 0 && self.downs < self.n,
            s => self.forced() == Some(s),
        }
    }

    fn apply(&mut self, step: Step) {
        self.height += step.delta();
        match step {
            Step::Down => self.downs += 1,
            _ => self.others += 1,
        }
        self.steps.push(step);
    }

    fn push(&mut self, step: Step) {
        self.apply(step);
        self.cursor.push(0);
        self.explored += 1;
    }

    fn back(&mut self) {
        self.cursor.pop();
        if self.steps.len() == self.base {
            self.finished = true;
            return;
        }
        let step = self.steps.pop().expect("above base");
        self.height -= step.delta();
        match step {
            Step::Down => self.downs -= 1,
            _ => self.others -= 1,
        }
    }

    fn emit(&self) -> LatticePath {
        let start = usize::from(self.strip_first);
        LatticePath::new(self.steps[start..].to_vec())
    }
}

impl Iterator for PathGenerator {
    type Item = LatticePath;

    fn next(&mut self) -> Option<LatticePath> {
        while !self.finished {
            if self.steps.len() == self.target {
                let out = self.emit();
                self.back();
                return Some(out);
            }
            let option = self.cursor.last_mut().expect("cursor tracks depth");
            let current = *option;
            *option += 1;
            match current {
                0 => {
                    if let Some(step) = self.forced() {
                        self.push(step);
                    }
                }
                1 => {
                    if self.allowed(Step::Down) {
                        self.push(Step::Down);
                    }
                }
                _ => self.back(),
            }
        }
        None
    }
}

pub fn generate_paths(kind: PathKind, n: usize) -> PathGenerator {
    PathGenerator::new(kind, n)
}

/// All valid length-`k` prefixes of class paths of size `n`, in lexicographic order.
pub fn prefixes(kind: PathKind, n: usize, k: usize) -> Vec<Vec<Step>> {
    let kind = if kind == PathKind::U { PathKind::S } else { kind };
    PathGenerator::build(kind, n, k.min(3 * n), &[]).map(|p| p.into_steps()).collect()
}

/// `C(a, b)`, zero when `b < 0`, `a < 0` or `b > a`.
pub fn binomial(a: i64, b: i64) -> BigUint {
    if a < 0 || b < 0 || b > a {
        return BigUint::zero();
    }
    let k = b.min(a - b) as u64;
    let a = a as u64;
    let mut c = BigUint::one();
    for j in 0..k {
        c = c * (a - j) / (j + 1);
    }
    c
}

pub fn count_closed_form(kind: PathKind, n: usize) -> Result<BigUint> {
    let m = n as i64;
    match kind {
        PathKind::S => Ok(binomial(3 * m, m) / BigUint::from(2 * n + 1)),
        PathKind::T => Ok(binomial(3 * m + 1, m) / BigUint::from(n + 1)),
        PathKind::U if n == 0 => Err(Error::domain("U-paths have n >= 1")),
        PathKind::U => Ok(binomial(3 * m, m) / BigUint::from(2 * n + 1)),
    }
}

/// Distribution of a statistic over all paths of a class and size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistributionPolynomial {
    pub class: PathKind,
    pub stat: Statistic,
    pub n: usize,
    /// statistic value → number of paths
    pub counts: BTreeMap<usize, BigUint>,
}

impl DistributionPolynomial {
    pub fn new(class: PathKind, stat: Statistic, n: usize) -> Self {
        DistributionPolynomial { class, stat, n, counts: BTreeMap::new() }
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn count(&self, k: usize) -> BigUint {
        self.counts.get(&k).cloned().unwrap_or_default()
    }

    /// Sum of `k^p · count(k)`.
    pub fn raw_moment_sum(&self, p: u32) -> BigUint {
        self.counts.iter().map(|(&k, c)| BigUint::from(k).pow(p) * c).sum()
    }

    pub fn mean(&self) -> BigRational {
        let total = self.total();
        BigRational::new(self.raw_moment_sum(1).into(), total.into())
    }

    pub fn variance(&self) -> BigRational {
        let total: BigRational = BigRational::from_integer(self.total().into());
        let m1 = BigRational::from_integer(self.raw_moment_sum(1).into()) / &total;
        let m2 = BigRational::from_integer(self.raw_moment_sum(2).into()) / &total;
        m2 - &m1 * &m1
    }

    fn merge(mut self, other: DistributionPolynomial) -> Self {
        for (k, c) in other.counts {
            *self.counts.entry(k).or_default() += c;
        }
        self
    }
}

impl Serialize for DistributionPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Counts<'a>(&'a BTreeMap<usize, BigUint>);
        impl Serialize for Counts<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (k, c) in self.0 {
                    map.serialize_entry(&k.to_string(), &c.to_string())?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("class", &self.class)?;
        map.serialize_entry("stat", &self.stat)?;
        map.serialize_entry("n", &self.n)?;
        map.serialize_entry("counts", &Counts(&self.counts))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for DistributionPolynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Wire {
            class: PathKind,
            stat: Statistic,
            n: usize,
            counts: BTreeMap<String, String>,
        }
        let w = Wire::deserialize(deserializer)?;
        let mut counts = BTreeMap::new();
        for (k, c) in w.counts {
            let k: usize = k.parse().map_err(D::Error::custom)?;
            let c: BigUint = c.parse().map_err(D::Error::custom)?;
            counts.insert(k, c);
        }
        Ok(DistributionPolynomial { class: w.class, stat: w.stat, n: w.n, counts })
    }
}

fn check_bruteforce(class: PathKind, n: usize, cap: usize) -> Result<()> {
    if class == PathKind::U {
        return Err(Error::domain("statistic distributions are defined for classes s and t"));
    }
    if n > cap {
        return Err(Error::Refused(format!("brute force at n = {n} exceeds the cap {cap}")));
    }
    Ok(())
}

fn tally(class: PathKind, n: usize, prefix: &[Step]) -> Vec<DistributionPolynomial> {
    let mut out: Vec<_> = Statistic::ALL.iter().map(|&st| DistributionPolynomial::new(class, st, n)).collect();
    for path in PathGenerator::with_prefix(class, n, prefix) {
        let stats = path_statistics(&path).expect("generated paths are Motzkin");
        for (d, st) in out.iter_mut().zip(Statistic::ALL) {
            *d.counts.entry(st.value(&stats)).or_default() += 1u32;
        }
    }
    out
}

/// All seven distributions at once, tallied in parallel over disjoint prefixes.
pub fn distributions_bruteforce(class: PathKind, n: usize, cap: usize) -> Result<Vec<DistributionPolynomial>> {
    check_bruteforce(class, n, cap)?;
    let empty: Vec<_> = Statistic::ALL.iter().map(|&st| DistributionPolynomial::new(class, st, n)).collect();
    let merged = prefixes(class, n, 6)
        .par_iter()
        .map(|prefix| tally(class, n, prefix))
        .reduce(
            || empty.clone(),
            |a, b| a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect(),
        );
    Ok(merged)
}

pub fn distribution_bruteforce_capped(
    class: PathKind,
    stat: Statistic,
    n: usize,
    cap: usize,
) -> Result<DistributionPolynomial> {
    let mut all = distributions_bruteforce(class, n, cap)?;
    Ok(all.swap_remove(stat.index()))
}

pub fn distribution_bruteforce(class: PathKind, stat: Statistic, n: usize) -> Result<DistributionPolynomial> {
    distribution_bruteforce_capped(class, stat, n, DEFAULT_BRUTEFORCE_CAP)
}
