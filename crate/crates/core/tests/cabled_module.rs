use floer_lasagna::cabled::{enumerate_relations, stabilization_report, truncated_quotient, CabledConfig};
use floer_lasagna::tqft::MarkedBraid;

/// Hand count: a single copy of F2 from M = 1 upward, reaching as high as
/// |α| plus twice the number of extra cancelling cable pairs that fit.
fn oracle(alpha: i64, m: i64, n: i64, bridge: bool) -> usize {
    if alpha == 0 && m == 0 {
        return 1;
    }
    if alpha == 0 && m == 1 && bridge && n >= 2 {
        return 0;
    }
    let a = alpha.abs();
    let top = a + 2 * ((n - a) / 2);
    usize::from(m >= 1 && m <= top)
}

#[test]
fn quotient_matches_hand_count() {
    for bridge in [false, true] {
        let cfg = CabledConfig { bridge_zero_level: bridge, marked_braid: MarkedBraid::Identity };
        for n in 1..=6usize {
            let q = truncated_quotient(&enumerate_relations(n, cfg).unwrap());
            for alpha in -(n as i64)..=n as i64 {
                for m in -2..=(n as i64 + 2) {
                    let got = q.get(&(alpha, m)).copied().unwrap_or(0);
                    assert_eq!(got, oracle(alpha, m, n as i64, bridge), "N={n} α={alpha} M={m} bridge={bridge}");
                }
            }
        }
    }
}

#[test]
fn report_is_bounded_below_and_one_dimensional() {
    let r = stabilization_report(&[4, 6, 8], CabledConfig::default(), Some(&[-3, -2, -1, 0, 1, 2, 3]), 3).unwrap();
    for p in &r.profiles {
        assert!(p.one_dimensional_consecutive, "α={}", p.alpha);
        assert!(p.matches_bounded_below_profile(), "α={}", p.alpha);
        assert!(!p.bounded_above, "α={}", p.alpha);
        assert!(p.flags.is_empty());
    }
}

#[test]
fn relation_counts_are_reported() {
    let p = enumerate_relations(3, CabledConfig::default()).unwrap();
    let c = p.counts();
    assert!(c.emitted.values().sum::<usize>() > 0);
    assert_eq!(p.relations().len(), c.emitted.values().sum::<usize>());
}

#[test]
fn truncations_must_increase() {
    assert!(stabilization_report(&[4, 4], CabledConfig::default(), None, 3).is_err());
    assert!(stabilization_report(&[], CabledConfig::default(), None, 3).is_err());
}
