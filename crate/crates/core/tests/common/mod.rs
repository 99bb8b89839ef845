#![allow(dead_code)]

use moea_lab::objectives::{strictly_dominates, weakly_dominates};
use moea_lab::{BitString, Individual, ObjectivePair, ParetoArchive};

/// Genotype width used to tag inserts with their position in a sequence.
pub const TAG_BITS: usize = 16;

pub fn tagged(id: usize, p: ObjectivePair) -> Individual {
    let bits: Vec<bool> = (0..TAG_BITS).map(|i| (id >> i) & 1 == 1).collect();
    Individual::with_objectives(BitString::from_bools(&bits).unwrap(), p)
}

pub fn tag_of(ind: &Individual) -> usize {
    (0..TAG_BITS)
        .filter(|&i| ind.genotype.get(i))
        .map(|i| 1 << i)
        .sum()
}

pub type Snapshot = Vec<((i64, i64), usize)>;

/// Brute-force expectation for an insert sequence: the return value of every
/// insert, and the final `(objectives, tag)` set sorted.
///
/// An insert succeeds iff no earlier point weakly dominates it. A point
/// survives iff nothing in the whole sequence strictly dominates it, and among
/// equal survivors the earliest stays.
pub fn oracle(seq: &[ObjectivePair]) -> (Vec<bool>, Snapshot) {
    let accepted = (0..seq.len())
        .map(|i| !seq[..i].iter().any(|u| weakly_dominates(u, &seq[i])))
        .collect();
    let mut members: Vec<((i64, i64), usize)> = seq
        .iter()
        .enumerate()
        .filter(|(i, y)| !seq.iter().any(|u| strictly_dominates(u, y)) && !seq[..*i].contains(y))
        .map(|(i, y)| ((y.f1, y.f2), i))
        .collect();
    members.sort();
    (accepted, members)
}

pub fn snapshot(archive: &ParetoArchive) -> Snapshot {
    let mut v: Vec<_> = archive
        .members()
        .iter()
        .map(|m| ((m.objectives.f1, m.objectives.f2), tag_of(m)))
        .collect();
    v.sort();
    v
}

/// Replay `seq` into `archive` and compare with the oracle.
pub fn agrees(mut archive: ParetoArchive, seq: &[ObjectivePair]) -> bool {
    let (accepted, members) = oracle(seq);
    for (i, p) in seq.iter().enumerate() {
        if archive.insert(tagged(i, *p)).unwrap() != accepted[i] {
            return false;
        }
    }
    snapshot(&archive) == members
}

/// Every sequence of length `<= max_len` over `points`, visited depth first
/// with the archive state shared along each prefix. Returns the number of
/// sequences checked, or the first disagreeing sequence.
pub fn exhaustive(
    points: &[ObjectivePair],
    max_len: usize,
    fresh: &dyn Fn() -> ParetoArchive,
) -> Result<u64, Vec<ObjectivePair>> {
    let table: Vec<Vec<Individual>> = (0..max_len)
        .map(|id| points.iter().map(|p| tagged(id, *p)).collect())
        .collect();
    let mut seq = Vec::with_capacity(max_len);
    let mut checked = 0;
    walk(points, &table, fresh(), &mut seq, &mut checked)?;
    Ok(checked)
}

fn walk(
    points: &[ObjectivePair],
    table: &[Vec<Individual>],
    archive: ParetoArchive,
    seq: &mut Vec<ObjectivePair>,
    checked: &mut u64,
) -> Result<(), Vec<ObjectivePair>> {
    if seq.len() == table.len() {
        return Ok(());
    }
    for (j, p) in points.iter().enumerate() {
        seq.push(*p);
        let mut next = archive.clone();
        let added = next.insert(table[seq.len() - 1][j].clone()).unwrap();
        *checked += 1;
        if !matches_oracle(&next, added, seq) {
            return Err(seq.clone());
        }
        walk(points, table, next, seq, checked)?;
        seq.pop();
    }
    Ok(())
}

/// Allocation-free form of `oracle` for the last insert of `seq`.
fn matches_oracle(archive: &ParetoArchive, added: bool, seq: &[ObjectivePair]) -> bool {
    let (last, prefix) = seq.split_last().unwrap();
    if added == prefix.iter().any(|u| weakly_dominates(u, last)) {
        return false;
    }
    let survives = |i: usize| {
        !seq.iter().any(|u| strictly_dominates(u, &seq[i])) && !seq[..i].contains(&seq[i])
    };
    let expected = (0..seq.len()).filter(|&i| survives(i)).count();
    let mut seen = 0u64;
    for m in archive.members() {
        let t = tag_of(m);
        if t >= seq.len() || seen & (1 << t) != 0 || seq[t] != m.objectives || !survives(t) {
            return false;
        }
        seen |= 1 << t;
    }
    archive.len() == expected
}

pub fn grid(max: i64) -> Vec<ObjectivePair> {
    let mut v = Vec::new();
    for f1 in 0..=max {
        for f2 in 0..=max {
            v.push(ObjectivePair::new(f1, f2));
        }
    }
    v
}

pub fn line(sum: i64) -> Vec<ObjectivePair> {
    (0..=sum)
        .map(|f1| ObjectivePair::new(f1, sum - f1))
        .collect()
}
