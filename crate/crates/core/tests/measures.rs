mod support {
    pub mod exactness;
}

use linv_core::curves::bundled_table;
use linv_core::measures::{exceptional_zero_check, search_twist_check, TwistCase};
use linv_core::parallel::Exec;
use support::exactness::{check_pair, multiplicative_pairs};

#[test]
fn exactness_suite_on_all_multiplicative_pairs() {
    let pairs = multiplicative_pairs();
    assert!(pairs.len() >= 12);
    for pair in &pairs {
        check_pair(pair, 3, Exec::Parallel).unwrap();
    }
}

#[test]
fn exceptional_zero_at_three_split_pairs() {
    let table = bundled_table();
    for (label, p) in [("11a1", 11u64), ("15a1", 5), ("21a1", 3)] {
        let entry = table.get(label).unwrap();
        let mut signs = Vec::new();
        for depth in [2u32, 3] {
            let rep =
                exceptional_zero_check(&entry.curve, entry.conductor, p, depth, 20, false, Exec::Parallel).unwrap();
            assert!(rep.passed, "{label} depth {depth}: {rep:?}");
            assert!(rep.agreement >= depth as i64 - 1);
            signs.push(rep.sign);
        }
        assert_eq!(signs[0], signs[1], "{label}: sign changed with depth");
    }
}

#[test]
fn exceptional_zero_check_rejects_nonsplit_primes() {
    let table = bundled_table();
    let e = table.get("15a1").unwrap();
    assert!(exceptional_zero_check(&e.curve, 15, 3, 2, 20, false, Exec::Sequential).is_err());
}

#[test]
fn twists_of_11a1() {
    let e = bundled_table().get("11a1").unwrap().clone();
    let split = search_twist_check(&e.curve, 11, 11, true, 2, 20, Exec::Parallel).unwrap();
    assert_eq!(split.case, TwistCase::Split);
    assert_eq!(split.product_vanishing_order, 2);
    assert_eq!(split.tate_full_precision, Some(true));
    assert!(split.passed, "{split:?}");
    let inert = search_twist_check(&e.curve, 11, 11, false, 2, 20, Exec::Parallel).unwrap();
    assert_eq!(inert.case, TwistCase::Inert);
    assert_eq!(inert.euler_ratio.as_deref(), Some("2"));
    assert!(inert.passed);
}
