//! Benchmark functions and the dominance relations. Both objectives are
//! maximized.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitcore::BitString;
use crate::error::{Error, Result};

/// Values of the two objectives `(f1, f2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ObjectivePair {
    pub f1: i64,
    pub f2: i64,
}

impl ObjectivePair {
    pub const fn new(f1: i64, f2: i64) -> Self {
        Self { f1, f2 }
    }

    /// Value of objective `b` (1 or 2).
    pub fn get(&self, b: Objective) -> i64 {
        match b {
            Objective::First => self.f1,
            Objective::Second => self.f2,
        }
    }
}

impl fmt::Display for ObjectivePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.f1, self.f2)
    }
}

/// Objective index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Objective {
    First,
    Second,
}

impl Objective {
    pub fn from_index(b: usize) -> Result<Self> {
        match b {
            1 => Ok(Objective::First),
            2 => Ok(Objective::Second),
            other => Err(Error::config(format!(
                "objective index must be 1 or 2, got {other}"
            ))),
        }
    }
}

/// `a.f1 >= b.f1 && a.f2 >= b.f2`.
pub fn weakly_dominates(a: &ObjectivePair, b: &ObjectivePair) -> bool {
    a.f1 >= b.f1 && a.f2 >= b.f2
}

/// Weak dominance with at least one strict inequality.
pub fn strictly_dominates(a: &ObjectivePair, b: &ObjectivePair) -> bool {
    weakly_dominates(a, b) && (a.f1 > b.f1 || a.f2 > b.f2)
}

pub fn one_min_max(x: &BitString) -> ObjectivePair {
    let ones = x.count_ones() as i64;
    ObjectivePair::new(ones, x.len() as i64 - ones)
}

pub fn one_max(x: &BitString) -> i64 {
    x.count_ones() as i64
}

/// A bi-objective function on bitstrings of a fixed length.
///
/// New benchmarks plug in by implementing this trait and adding a name to
/// [`Benchmark`].
pub trait BiObjectiveFunction: Send + Sync {
    fn name(&self) -> &str;

    fn n(&self) -> usize;

    fn evaluate(&self, x: &BitString) -> ObjectivePair;

    /// Number of Pareto-front points, when known in closed form.
    fn front_size(&self) -> Option<usize> {
        None
    }

    /// True when every reachable objective pair sums to the same constant,
    /// which makes any two distinct pairs incomparable. Archives can then
    /// index members by `f1`.
    fn constant_sum(&self) -> Option<i64> {
        None
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OneMinMax {
    n: usize,
}

impl OneMinMax {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::config("problem length must be at least 1"));
        }
        Ok(Self { n })
    }
}

impl BiObjectiveFunction for OneMinMax {
    fn name(&self) -> &str {
        "oneminmax"
    }

    fn n(&self) -> usize {
        self.n
    }

    fn evaluate(&self, x: &BitString) -> ObjectivePair {
        one_min_max(x)
    }

    fn front_size(&self) -> Option<usize> {
        Some(self.n + 1)
    }

    fn constant_sum(&self) -> Option<i64> {
        Some(self.n as i64)
    }
}

/// Size of the Pareto front of `f`. Only benchmarks with a closed-form front
/// are accepted.
pub fn pareto_front_size(f: &dyn BiObjectiveFunction) -> Result<usize> {
    f.front_size()
        .ok_or_else(|| Error::UnknownBenchmark(f.name().to_string()))
}

/// Benchmarks selectable by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Benchmark {
    OneMinMax,
    OneMax,
}

impl Benchmark {
    pub fn name(&self) -> &'static str {
        match self {
            Benchmark::OneMinMax => "oneminmax",
            Benchmark::OneMax => "onemax",
        }
    }

    pub fn is_bi_objective(&self) -> bool {
        matches!(self, Benchmark::OneMinMax)
    }

    /// Instantiate as a bi-objective function of length `n`.
    pub fn bi_objective(&self, n: usize) -> Result<Box<dyn BiObjectiveFunction>> {
        match self {
            Benchmark::OneMinMax => Ok(Box::new(OneMinMax::new(n)?)),
            Benchmark::OneMax => Err(Error::config("onemax is single-objective")),
        }
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "oneminmax" => Ok(Benchmark::OneMinMax),
            "onemax" => Ok(Benchmark::OneMax),
            _ => Err(Error::UnknownBenchmark(s.to_string())),
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn p(f1: i64, f2: i64) -> ObjectivePair {
        ObjectivePair::new(f1, f2)
    }

    #[test]
    fn one_min_max_examples() {
        assert_eq!(one_min_max(&bs("0000")), p(0, 4));
        assert_eq!(one_min_max(&bs("1111")), p(4, 0));
        assert_eq!(one_min_max(&bs("1010")), p(2, 2));
    }

    #[test]
    fn one_max_examples() {
        assert_eq!(one_max(&bs("000")), 0);
        assert_eq!(one_max(&bs("111")), 3);
        assert_eq!(one_max(&bs("0110")), 2);
    }

    #[test]
    fn dominance_examples() {
        assert!(weakly_dominates(&p(3, 1), &p(3, 1)));
        assert!(weakly_dominates(&p(3, 2), &p(2, 2)));
        assert!(!weakly_dominates(&p(3, 1), &p(2, 2)));

        assert!(!strictly_dominates(&p(3, 1), &p(3, 1)));
        assert!(strictly_dominates(&p(3, 2), &p(3, 1)));
        assert!(!strictly_dominates(&p(2, 2), &p(3, 1)));
    }

    #[test]
    fn dominance_order_properties_exhaustive() {
        let pts: Vec<_> = (0..=6)
            .flat_map(|a| (0..=6).map(move |b| p(a, b)))
            .collect();
        for a in &pts {
            assert!(weakly_dominates(a, a));
            assert!(!strictly_dominates(a, a));
            for b in &pts {
                for c in &pts {
                    if weakly_dominates(a, b) && weakly_dominates(b, c) {
                        assert!(weakly_dominates(a, c));
                    }
                    if strictly_dominates(a, b) && strictly_dominates(b, c) {
                        assert!(strictly_dominates(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn one_min_max_points_incomparable() {
        for n in 1..=8i64 {
            for i in 0..=n {
                for j in 0..=n {
                    if i != j {
                        assert!(!strictly_dominates(&p(i, n - i), &p(j, n - j)));
                    }
                }
            }
        }
    }

    #[test]
    fn front_size() {
        for (n, expected) in [(4, 5), (1, 2), (140, 141)] {
            let f = OneMinMax::new(n).unwrap();
            assert_eq!(pareto_front_size(&f).unwrap(), expected);
        }
    }

    struct Opaque;

    impl BiObjectiveFunction for Opaque {
        fn name(&self) -> &str {
            "opaque"
        }
        fn n(&self) -> usize {
            3
        }
        fn evaluate(&self, x: &BitString) -> ObjectivePair {
            one_min_max(x)
        }
    }

    #[test]
    fn front_size_unknown_rejected() {
        assert!(matches!(
            pareto_front_size(&Opaque),
            Err(Error::UnknownBenchmark(name)) if name == "opaque"
        ));
    }

    #[test]
    fn benchmark_names() {
        assert_eq!(
            "oneminmax".parse::<Benchmark>().unwrap(),
            Benchmark::OneMinMax
        );
        assert_eq!("OneMax".parse::<Benchmark>().unwrap(), Benchmark::OneMax);
        assert!("leadingones".parse::<Benchmark>().is_err());
        assert!(Benchmark::OneMax.bi_objective(5).is_err());
        assert_eq!(Benchmark::OneMinMax.bi_objective(5).unwrap().n(), 5);
    }
}
