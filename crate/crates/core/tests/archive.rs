mod common;

use proptest::prelude::*;

use moea_lab::bitcore::random_bitstring;
use moea_lab::objectives::{strictly_dominates, weakly_dominates, Objective, OneMinMax};
use moea_lab::{Individual, ObjectivePair, ParetoArchive, RandomSource};

fn pairs(max: i64, len: usize) -> impl Strategy<Value = Vec<ObjectivePair>> {
    prop::collection::vec(
        (0..=max, 0..=max).prop_map(|(a, b)| ObjectivePair::new(a, b)),
        1..len,
    )
}

fn front_points(n: i64, len: usize) -> impl Strategy<Value = Vec<ObjectivePair>> {
    prop::collection::vec(
        (0..=n).prop_map(move |a| ObjectivePair::new(a, n - a)),
        1..len,
    )
}

fn fill(mut archive: ParetoArchive, seq: &[ObjectivePair]) -> ParetoArchive {
    for (i, p) in seq.iter().enumerate() {
        archive.insert(common::tagged(i, *p)).unwrap();
    }
    archive
}

proptest! {
    #[test]
    fn members_are_mutually_incomparable(seq in pairs(10, 80)) {
        let a = fill(ParetoArchive::new(common::TAG_BITS), &seq);
        let objs: Vec<_> = a.objective_values().collect();
        for (i, u) in objs.iter().enumerate() {
            for v in &objs[i + 1..] {
                prop_assert!(!weakly_dominates(u, v) && !weakly_dominates(v, u));
            }
        }
    }

    #[test]
    fn scan_matches_oracle(seq in pairs(8, 60)) {
        prop_assert!(common::agrees(ParetoArchive::new(common::TAG_BITS), &seq));
    }

    #[test]
    fn indexed_and_scan_agree(seq in front_points(10, 60)) {
        let scan = fill(ParetoArchive::new(common::TAG_BITS), &seq);
        let indexed = fill(ParetoArchive::indexed_by_f1(common::TAG_BITS, 10).unwrap(), &seq);
        prop_assert_eq!(common::snapshot(&scan), common::snapshot(&indexed));
        for b in [Objective::First, Objective::Second] {
            prop_assert_eq!(scan.gap_statistic(b).unwrap(), indexed.gap_statistic(b).unwrap());
        }
    }

    #[test]
    fn nothing_inserted_is_left_undominated(seq in pairs(6, 40)) {
        let a = fill(ParetoArchive::new(common::TAG_BITS), &seq);
        for y in &seq {
            prop_assert!(a.objective_values().any(|m| weakly_dominates(&m, y)));
        }
    }
}

#[test]
fn exhaustive_short_sequences_on_a_line() {
    let points = common::line(4);
    let scan = common::exhaustive(&points, 5, &|| ParetoArchive::new(common::TAG_BITS));
    let indexed = common::exhaustive(&points, 5, &|| {
        ParetoArchive::indexed_by_f1(common::TAG_BITS, 4).unwrap()
    });
    assert_eq!(scan, Ok(3905));
    assert_eq!(indexed, Ok(3905));
}

#[test]
fn exhaustive_short_sequences_on_a_grid() {
    let checked = common::exhaustive(&common::grid(3), 4, &|| {
        ParetoArchive::new(common::TAG_BITS)
    });
    assert_eq!(checked, Ok(16 + 256 + 4096 + 65536));
}

#[test]
fn oracle_examples() {
    let p = ObjectivePair::new;
    let (acc, members) = common::oracle(&[p(1, 1), p(2, 0), p(2, 2)]);
    assert_eq!(acc, vec![true, true, true]);
    assert_eq!(members, vec![((2, 2), 2)]);
    let (acc, members) = common::oracle(&[p(1, 3), p(1, 3), p(3, 1)]);
    assert_eq!(acc, vec![true, false, true]);
    assert_eq!(members, vec![((1, 3), 0), ((3, 1), 2)]);
    assert!(strictly_dominates(&p(2, 2), &p(1, 1)));
}

#[test]
fn random_oneminmax_archives_cover_what_they_hold() {
    let n = 30;
    let f = OneMinMax::new(n).unwrap();
    let mut rng = RandomSource::new(17);
    let mut archive = ParetoArchive::for_function(&f);
    let mut seen = std::collections::BTreeSet::new();
    for _ in 0..500 {
        let x = random_bitstring(n, &mut rng).unwrap();
        let ind = Individual::evaluate(x, &f);
        seen.insert(ind.objectives.f1);
        archive.insert(ind).unwrap();
        assert_eq!(archive.coverage(), seen.len());
    }
}
