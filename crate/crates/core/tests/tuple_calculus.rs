mod common;

use nbi_core::tuple::{
    chi_modified, chi_normal, chi_split_modification, chi_top, enumerate_marked_counts,
    is_admissible, regime_holds, validate, MarkedCounts, MarkedType, Tuple,
};
use proptest::prelude::*;

const K_TYPES: [(i64, i64, i64); 6] = [
    (1, 1, 1),
    (2, 0, 1),
    (1, 0, 2),
    (1, 0, 1),
    (0, 0, 2),
    (0, 0, 1),
];
const FREE_TYPES: [(i64, i64, i64); 3] = [(1, 1, 0), (2, 0, 0), (1, 0, 0)];

fn weight(r: i64, (i, j, k): (i64, i64, i64)) -> i64 {
    (r - 2) * i + (r - 3) * j - k
}

/// Nested loops over explicit triples: k-carrying counts bounded by the K
/// bound, the others cut off once their weight alone exceeds the slack, and
/// every candidate filtered by the oracle regime.
fn nested_loop_count(d: i64, g: i64, r: i64) -> usize {
    let k_max = r - 2;
    let slack = 2 * d + 2 * g - r - 2 + k_max;
    let mut count = 0;
    let mut k_counts = [0i64; 6];
    loop {
        let k_sum: i64 = k_counts.iter().zip(K_TYPES).map(|(c, t)| c * t.2).sum();
        if k_sum <= k_max {
            let [wa, wb, wc] = FREE_TYPES.map(|t| weight(r, t));
            for a in (0..).take_while(|a| a * wa <= slack) {
                for b in (0..).take_while(|b| a * wa + b * wb <= slack) {
                    for c in (0..).take_while(|c| a * wa + b * wb + c * wc <= slack) {
                        let mut p = common::Points::new();
                        for (n, t) in k_counts.iter().zip(K_TYPES) {
                            p.insert(t, *n);
                        }
                        for (n, t) in [a, b, c].into_iter().zip(FREE_TYPES) {
                            p.insert(t, n);
                        }
                        if common::regime(&Tuple::new(d, g, r, common::pack(&p))) {
                            count += 1;
                        }
                    }
                }
            }
        }
        // Odometer over the k-carrying counts, each in 0..=k_max.
        let mut idx = 0;
        while idx < 6 {
            k_counts[idx] += 1;
            if k_counts[idx] <= k_max {
                break;
            }
            k_counts[idx] = 0;
            idx += 1;
        }
        if idx == 6 {
            return count;
        }
    }
}

#[test]
fn enumeration_matches_nested_loops() {
    for (d, g, r) in [(11, 0, 4), (7, 1, 3), (9, 2, 5), (8, 0, 6)] {
        let fast = enumerate_marked_counts(d, g, r).unwrap().count();
        assert_eq!(fast, nested_loop_count(d, g, r), "({d}, {g}, {r})");
    }
}

#[test]
fn enumeration_yields_valid_regime_tuples() {
    for r in 3..=7 {
        for d in r..=r + 6 {
            for g in 0..=(d - r).min(3) {
                let mut seen = std::collections::HashSet::new();
                for n in enumerate_marked_counts(d, g, r).unwrap() {
                    let t = Tuple::new(d, g, r, n);
                    assert!(validate(&t).is_empty(), "{t}");
                    assert!(t.n.sum_k() <= r - 2, "{t}");
                    assert!(regime_holds(&t), "{t}");
                    assert!(seen.insert(n), "duplicate {t}");
                }
            }
        }
    }
}

#[test]
fn enumeration_respects_ij_bound() {
    for r in 3..=8 {
        for d in r..=r + 7 {
            for g in 0..=(d - r).min(4) {
                let bound = (4 * (d + g) - 8) / (2 * r - 5);
                for n in enumerate_marked_counts(d, g, r).unwrap() {
                    assert!(n.sum_i() + n.sum_j() <= bound, "({d}, {g}, {r}; {n})");
                }
            }
        }
    }
}

#[test]
fn enumeration_on_the_first_exception() {
    let all: Vec<_> = enumerate_marked_counts(5, 2, 3).unwrap().collect();
    assert!(all.contains(&MarkedCounts::ZERO));
    assert!(all.contains(&MarkedCounts::single(MarkedType::P111, 1)));
    assert!(all.iter().all(|n| n.get(MarkedType::P102) == 0));
}

#[test]
fn regime_agrees_with_oracle_on_corpus() {
    for t in common::corpus(20_000, common::CORPUS_SEED) {
        assert_eq!(regime_holds(&t), common::regime(&t), "{t}");
    }
}

#[test]
fn regime_is_the_chi_inequality() {
    for t in common::corpus(20_000, common::CORPUS_SEED ^ 1) {
        if !t.is_nonspecial_range() || !is_admissible(&t) {
            continue;
        }
        let top = chi_top(&t).unwrap();
        let via_chi = (t.r - 1) * top - (t.r - 2) <= chi_modified(&t);
        assert_eq!(regime_holds(&t), via_chi, "{t}");
    }
}

fn admissible_tuple() -> impl Strategy<Value = Tuple> {
    (
        2i64..=14,
        0i64..=8,
        0i64..=12,
        prop::array::uniform9(0u32..=6),
    )
        .prop_filter_map("inadmissible", |(r, g, extra, slots)| {
            let mut n = MarkedCounts::from_slots(slots);
            // Shed k-points until the K bound holds.
            for m in MarkedType::ALL {
                while n.sum_k() >= r - 1 && n.get(m) > 0 && m.k() > 0 {
                    n = n.with_removed(m).unwrap();
                }
            }
            if r == 2 {
                n.set(MarkedType::P111, 0);
                n.set(MarkedType::P110, 0);
            }
            let t = Tuple::new(g + r + extra, g, r, n);
            is_admissible(&t).then_some(t)
        })
}

proptest! {
    #[test]
    fn chi_routes_agree(t in admissible_tuple()) {
        let twist: i64 = t.n.weighted(|m| m.i() + m.j() - 1);
        let (i, j, k) = (t.n.sum_i(), t.n.sum_j(), t.n.sum_k());
        let mut mods = vec![(1, (t.r - 1 - k) as u64), (i as u64, (t.r - 2) as u64)];
        if j > 0 {
            mods.push((j as u64, (t.r - 3) as u64));
        }
        let route = chi_split_modification(chi_normal(t.d, t.g, t.r) + (t.r - 1) * twist, &mods);
        prop_assert_eq!(route, chi_modified(&t));
    }

    #[test]
    fn counts_round_trip_through_text(slots in prop::array::uniform9(0u32..=1000)) {
        let n = MarkedCounts::from_slots(slots);
        prop_assert_eq!(n.to_string().parse::<MarkedCounts>().unwrap(), n);
    }

    #[test]
    fn chi_top_counts_twists(t in admissible_tuple()) {
        let extra: i64 = t.n.weighted(|m| m.i() + m.j() - 1);
        prop_assert_eq!(chi_top(&t).unwrap(), t.d - t.g + 2 + extra);
    }
}
