//! The GSEMO population: an archive of mutually non-dominated individuals.

use std::collections::BTreeSet;

use crate::bitcore::{BitString, RandomSource};
use crate::error::{Error, Result};
use crate::objectives::{weakly_dominates, BiObjectiveFunction, Objective, ObjectivePair};

/// A genotype together with its cached objective values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Individual {
    pub genotype: BitString,
    pub objectives: ObjectivePair,
}

impl Individual {
    pub fn evaluate(genotype: BitString, f: &dyn BiObjectiveFunction) -> Self {
        let objectives = f.evaluate(&genotype);
        Self {
            genotype,
            objectives,
        }
    }

    /// Pair a genotype with objective values computed elsewhere.
    pub fn with_objectives(genotype: BitString, objectives: ObjectivePair) -> Self {
        Self {
            genotype,
            objectives,
        }
    }
}

#[derive(Debug, Clone)]
enum Index {
    /// Dominance scan over all members. Works for any benchmark.
    Scan,
    /// Slot per `f1` value for benchmarks where `f1 + f2` is constant, so
    /// distinct pairs never dominate each other and nothing is ever removed.
    ByF1 { sum: i64, slots: Vec<Option<usize>> },
}

/// Archive of mutually incomparable individuals with distinct objective
/// vectors.
///
/// Insertion keeps the incumbent: an offspring weakly dominated by any member
/// (including one with equal objectives) is rejected.
#[derive(Debug, Clone)]
pub struct ParetoArchive {
    n: usize,
    members: Vec<Individual>,
    index: Index,
}

impl ParetoArchive {
    /// Empty archive using the general dominance scan.
    pub fn new(n: usize) -> Self {
        Self {
            n,
            members: Vec::new(),
            index: Index::Scan,
        }
    }

    /// Empty archive indexed by `f1`. Every inserted pair must satisfy
    /// `f1 + f2 == sum` with `0 <= f1 <= sum`.
    pub fn indexed_by_f1(n: usize, sum: i64) -> Result<Self> {
        if sum < 0 {
            return Err(Error::config("objective sum must be non-negative"));
        }
        Ok(Self {
            n,
            members: Vec::new(),
            index: Index::ByF1 {
                sum,
                slots: vec![None; sum as usize + 1],
            },
        })
    }

    /// The fastest archive layout valid for `f`.
    pub fn for_function(f: &dyn BiObjectiveFunction) -> Self {
        match f.constant_sum() {
            Some(sum) if sum >= 0 => Self::indexed_by_f1(f.n(), sum).expect("sum checked"),
            _ => Self::new(f.n()),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[Individual] {
        &self.members
    }

    pub fn objective_values(&self) -> impl Iterator<Item = ObjectivePair> + '_ {
        self.members.iter().map(|m| m.objectives)
    }

    /// Insert `y` unless a member weakly dominates it; on insertion every member
    /// weakly dominated by `y` is dropped. Returns whether `y` was added.
    pub fn insert(&mut self, y: Individual) -> Result<bool> {
        if y.genotype.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: y.genotype.len(),
            });
        }
        match &mut self.index {
            Index::Scan => {
                if self
                    .members
                    .iter()
                    .any(|z| weakly_dominates(&z.objectives, &y.objectives))
                {
                    return Ok(false);
                }
                self.members
                    .retain(|z| !weakly_dominates(&y.objectives, &z.objectives));
                self.members.push(y);
                Ok(true)
            }
            Index::ByF1 { sum, slots } => {
                let ObjectivePair { f1, f2 } = y.objectives;
                if f1 + f2 != *sum || f1 < 0 || f1 > *sum {
                    return Err(Error::Internal(format!(
                        "objective pair {} violates the constant-sum layout (sum {sum})",
                        y.objectives
                    )));
                }
                let slot = &mut slots[f1 as usize];
                if slot.is_some() {
                    return Ok(false);
                }
                *slot = Some(self.members.len());
                self.members.push(y);
                Ok(true)
            }
        }
    }

    /// Number of distinct front points held. Members have pairwise distinct
    /// objective vectors, so this is the member count.
    pub fn coverage(&self) -> usize {
        self.members.len()
    }

    pub fn contains_objectives(&self, target: &ObjectivePair) -> bool {
        match &self.index {
            Index::ByF1 { sum, slots } => {
                target.f1 + target.f2 == *sum
                    && (0..=*sum).contains(&target.f1)
                    && slots[target.f1 as usize].is_some()
            }
            Index::Scan => self.members.iter().any(|m| m.objectives == *target),
        }
    }

    /// Uniformly random member.
    pub fn select_uniform(&self, rng: &mut RandomSource) -> Result<&Individual> {
        if self.members.is_empty() {
            return Err(Error::EmptyArchive);
        }
        Ok(&self.members[rng.below(self.members.len())])
    }

    /// Smallest value `j` in `[0, n-1]` of objective `b` that some member
    /// attains while no member attains `j + 1`. `None` when every such value
    /// already has its successor.
    pub fn gap_statistic(&self, b: Objective) -> Result<Option<i64>> {
        if self.members.is_empty() {
            return Err(Error::EmptyArchive);
        }
        let top = self.n as i64 - 1;
        if let Index::ByF1 { sum, slots } = &self.index {
            let present = |v: i64| -> bool {
                let f1 = match b {
                    Objective::First => v,
                    Objective::Second => sum - v,
                };
                (0..=*sum).contains(&f1) && slots[f1 as usize].is_some()
            };
            let upper = top.min(*sum);
            return Ok((0..=upper).find(|&j| present(j) && !present(j + 1)));
        }
        let values: BTreeSet<i64> = self.members.iter().map(|m| m.objectives.get(b)).collect();
        Ok(values
            .iter()
            .copied()
            .filter(|&j| (0..=top).contains(&j))
            .find(|j| !values.contains(&(j + 1))))
    }
}
