use std::time::Instant;

use g2048_core::oracle::{
    reachable_max, reachable_max_with, replay, unreachability_check, SearchOptions,
};
use g2048_core::strategy::AdversaryMode;
use g2048_core::{max_tile, BoardShape};

fn sh(d: &[usize]) -> BoardShape {
    BoardShape::new(d).unwrap()
}

const SMALL: [&[usize]; 9] = [&[1, 1], &[1, 2], &[1, 3], &[2, 2], &[1, 4], &[1, 5], &[2, 3], &[1, 6], &[3, 2]];

#[test]
fn two_by_two_cooperative_reaches_32() {
    let t = Instant::now();
    let s = sh(&[2, 2]);
    let r = reachable_max(&s, AdversaryMode::Cooperative, u64::MAX).unwrap();
    assert_eq!(r.max_exponent, 5);
    let end = replay(&r.witness, &s).unwrap();
    assert_eq!(max_tile(&end), Some(5));
    assert!(t.elapsed().as_secs_f64() < 5.0);
}

#[test]
fn sixty_four_unreachable_on_two_by_two() {
    let s = sh(&[2, 2]);
    assert!(unreachability_check(&s, 6, AdversaryMode::Cooperative).unwrap());
    assert!(!unreachability_check(&s, 5, AdversaryMode::Cooperative).unwrap());
}

// Exhaustive values frozen from an independent brute-force enumeration.
#[test]
fn cooperative_maxima_match_cell_count_plus_one() {
    let want = [2u8, 3, 4, 5, 5, 6, 7, 7, 7];
    for (d, w) in SMALL.iter().zip(want) {
        let s = sh(d);
        let r = reachable_max(&s, AdversaryMode::Cooperative, u64::MAX).unwrap();
        assert_eq!(r.max_exponent, w, "shape {s}");
        assert_eq!(r.max_exponent as usize, s.cell_count() + 1);
    }
}

#[test]
fn mode_ordering_and_bound() {
    for d in SMALL {
        let s = sh(d);
        let v = |m| reachable_max(&s, m, u64::MAX).unwrap();
        let adv = v(AdversaryMode::Adversarial);
        let pap = v(AdversaryMode::Paper);
        let coop = v(AdversaryMode::Cooperative);
        let rnd = v(AdversaryMode::Random);
        assert!(adv.max_exponent <= pap.max_exponent, "shape {s}");
        assert!(pap.max_exponent <= coop.max_exponent, "shape {s}");
        assert_eq!(rnd.max_exponent, coop.max_exponent);
        assert!(coop.max_exponent as usize <= s.cell_count() + 1);
        for r in [&adv, &pap, &coop] {
            let end = replay(&r.witness, &s).unwrap();
            assert_eq!(max_tile(&end), Some(r.max_exponent), "shape {s} mode {}", r.mode);
        }
        println!(
            "{s}: adversarial {} paper {} cooperative {} (states {} / {} / {})",
            adv.max_exponent, pap.max_exponent, coop.max_exponent,
            adv.states_visited, pap.states_visited, coop.states_visited
        );
    }
}

#[test]
fn boolean_search_agrees_with_value_search() {
    for d in SMALL {
        let s = sh(d);
        for mode in AdversaryMode::ALL {
            let v = reachable_max(&s, mode, u64::MAX).unwrap().max_exponent;
            assert!(!unreachability_check(&s, v, mode).unwrap(), "shape {s} mode {mode}");
            assert!(unreachability_check(&s, v + 1, mode).unwrap(), "shape {s} mode {mode}");
        }
    }
}

#[test]
fn memo_does_not_change_values() {
    for d in [&[1usize, 1][..], &[1, 2], &[1, 3], &[2], &[3]] {
        let s = sh(d);
        for mode in AdversaryMode::ALL {
            let a = reachable_max(&s, mode, u64::MAX).unwrap();
            let b = reachable_max_with(&s, mode, SearchOptions { memo: false, ..Default::default() }).unwrap();
            assert_eq!(a.max_exponent, b.max_exponent, "shape {s} mode {mode}");
            assert!(b.states_visited >= a.states_visited);
        }
    }
    // the unmemoised 2x2 tree is far too large; compare depth-limited searches
    let s = sh(&[2, 2]);
    for depth in [4u32, 7, 10] {
        for mode in AdversaryMode::ALL {
            let with = SearchOptions { depth_limit: Some(depth), ..Default::default() };
            let without = SearchOptions { memo: false, ..with };
            let a = reachable_max_with(&s, mode, with).unwrap();
            let b = reachable_max_with(&s, mode, without).unwrap();
            assert_eq!(a.max_exponent, b.max_exponent, "depth {depth} mode {mode}");
        }
    }
}
