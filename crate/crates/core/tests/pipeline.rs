use belyi::acceptance::{run_criterion, Hooks};
use belyi::curve::{Divisor, Place};
use belyi::descent::descent_verdict;
use belyi::fixtures::curve;
use belyi::pushpar::{assemble_parabolic, pushforward_splitting_type, SplitBundle};
use belyi::rr::DEFAULT_MAX_TAU;
use proptest::prelude::*;

fn branch_divisor(coeffs: &[i64]) -> Divisor {
    let mut d = Divisor::zero();
    let places = [Place::Zero(0), Place::One(0), Place::Infinity];
    for (p, &k) in places.iter().zip(coeffs) {
        d.add_at(p.clone(), k);
    }
    d
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn direct_image_degree(n in prop::sample::select(vec![3u64, 5]), rows in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 1..=2)) {
        let c = curve(n, 1, 1).unwrap();
        let divisors: Vec<Divisor> = rows.iter().map(|r| branch_divisor(r)).collect();
        let e = SplitBundle::new(c.clone(), divisors).unwrap();
        let splitting = pushforward_splitting_type(&e).unwrap();
        prop_assert_eq!(splitting.len() as u64, n * e.rank() as u64);
        let expected = e.degree() + e.rank() as i64 * (1 - c.genus() as i64) - e.rank() as i64 * n as i64;
        prop_assert_eq!(splitting.iter().sum::<i64>(), expected);
        prop_assert!(splitting.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn parabolic_structure_passes_its_own_checks(k in -2i64..=3, seed in 0u64..50) {
        let c = curve(3, 1, 1).unwrap();
        let d = Divisor::from_pairs([(Place::Zero(0), 1), (Place::Infinity, k - 1)]);
        let e = SplitBundle::new(c, vec![d]).unwrap();
        let w = assemble_parabolic(&e, seed).unwrap();
        prop_assert_eq!(w.rank(), 3);
        prop_assert_eq!(w.degree(), e.expected_pushforward_degree());
        prop_assert!(w.check_invariants(1).is_ok());
    }
}

#[test]
fn verdicts_over_a_number_field_are_trivial() {
    let c = curve(2, 1, 0).unwrap();
    let e = SplitBundle::new(c, vec![Divisor::from_pairs([(Place::Infinity, 3)])]).unwrap();
    assert_eq!(descent_verdict(&e, 1, DEFAULT_MAX_TAU).unwrap().name(), "DefinedOverF");
}

#[test]
fn acceptance_criteria_fail_on_injected_faults() {
    let ok = run_criterion(1, 7, Hooks::default());
    assert!(ok.passed, "{}", ok.line());
    let bad = run_criterion(2, 7, Hooks { corrupt_weight: true });
    assert!(!bad.passed);
    assert!(bad.line().starts_with("[FAIL]  2"), "{}", bad.line());
    assert!(!run_criterion(11, 7, Hooks::default()).passed);
}
