use num_bigint::BigUint;
use num_traits::Pow;
use proptest::prelude::*;
use strandcode::rll::{
    analyze, bound_sweep, count_rll_brute, count_rll_exact, is_run_length_limited, parameter_grid,
    redundancy_exact, redundancy_lower_bound, redundancy_trivial_bound, redundancy_upper_bounds,
    segment_bound, verify_summation_identities, window_count_closed_form, write_sweep_csv,
    SWEEP_CSV_HEADER,
};
use strandcode::{Execution, RllParams};

/// Counts over concrete symbols `0..Q`, restricted ones being `0..R`.
fn count_symbols(q: u64, r: u64, ell: usize, n: usize) -> u64 {
    let total = q.pow(n as u32);
    (0..total)
        .filter(|&code| {
            let mut x = code;
            let classes: Vec<bool> = (0..n)
                .map(|_| {
                    let s = x % q;
                    x /= q;
                    s < r
                })
                .collect();
            is_run_length_limited(&classes, ell)
        })
        .count() as u64
}

fn p(q: u64, r: u64, ell: usize, n: usize) -> RllParams {
    RllParams::new(q, r, ell, n).unwrap()
}

#[test]
fn class_patterns_match_symbol_enumeration() {
    for (q, r) in [(2, 1), (3, 1), (3, 2), (4, 3)] {
        for ell in 1..=3 {
            for n in 0..=7 {
                let expected = count_symbols(q, r, ell, n);
                assert_eq!(count_rll_exact(&p(q, r, ell, n)), BigUint::from(expected));
            }
        }
    }
}

#[test]
fn oracle_grid() {
    for point in parameter_grid(2..=4, None, 1..=4, 0..=12) {
        assert_eq!(
            count_rll_exact(&point),
            count_rll_brute(&point).unwrap(),
            "{point:?}"
        );
    }
}

#[test]
fn segment_bound_dominates() {
    for point in parameter_grid(2..=6, None, 1..=5, 0..=30) {
        assert!(
            count_rll_exact(&point) <= segment_bound(&point),
            "{point:?}"
        );
    }
}

#[test]
fn ell_one_is_all_unrestricted() {
    for q in 2..=6u64 {
        for r in 0..q {
            for n in 0..=20 {
                let expected: BigUint = Pow::pow(&BigUint::from(q - r), n);
                assert_eq!(count_rll_exact(&p(q, r, 1, n)), expected);
            }
        }
    }
}

#[test]
fn monotone_in_restricted_and_window() {
    for q in 2..=5u64 {
        for ell in 1..=5 {
            for n in 0..=25 {
                for r in 1..q {
                    assert!(
                        count_rll_exact(&p(q, r, ell, n)) <= count_rll_exact(&p(q, r - 1, ell, n))
                    );
                }
                for r in 0..q {
                    assert!(
                        count_rll_exact(&p(q, r, ell, n)) <= count_rll_exact(&p(q, r, ell + 1, n))
                    );
                }
            }
        }
    }
}

#[test]
fn closed_form_is_window_count() {
    for q in 2..=6u64 {
        for r in 0..q {
            for ell in 1..=5 {
                assert_eq!(
                    window_count_closed_form(q, r, ell),
                    count_rll_exact(&p(q, r, ell, 2 * ell))
                );
            }
        }
    }
}

#[test]
fn full_grid_sandwich() {
    for point in parameter_grid(2..=4, None, 1..=4, 0..=40) {
        let exact = redundancy_exact(&point);
        let lower = redundancy_lower_bound(&point).value;
        assert!(lower <= exact + 1e-9, "{point:?}");
        assert!(
            exact <= redundancy_trivial_bound(&point) + 1e-9,
            "{point:?}"
        );
        if let Some(union) = redundancy_upper_bounds(&point).union {
            assert!(exact <= union + 1e-9, "{point:?}");
        }
    }
}

#[test]
fn large_alphabet_sandwich() {
    for point in parameter_grid([84u64], Some(50..=60), 1..=10, 0..=100) {
        let exact = redundancy_exact(&point);
        assert!(
            redundancy_lower_bound(&point).value <= exact + 1e-9,
            "{point:?}"
        );
        assert!(
            exact <= redundancy_trivial_bound(&point) + 1e-9,
            "{point:?}"
        );
        if let Some(union) = redundancy_upper_bounds(&point).union {
            assert!(exact <= union + 1e-9, "{point:?}");
        }
    }
}

#[test]
fn sweep_is_ordered_and_mode_independent() {
    let points = parameter_grid([3u64, 84], Some(1..=2), 2..=4, 0..=30);
    let seq = bound_sweep(&points, Execution::Sequential);
    let par = bound_sweep(&points, Execution::Parallel);
    assert_eq!(seq, par);
    for (row, point) in seq.iter().zip(&points) {
        assert_eq!(&row.params, point);
    }
    let mut out = Vec::new();
    write_sweep_csv(&seq, &mut out).unwrap();
    let mut reader = csv::Reader::from_reader(out.as_slice());
    assert_eq!(
        reader.headers().unwrap(),
        &csv::StringRecord::from(SWEEP_CSV_HEADER.to_vec())
    );
    assert_eq!(reader.records().count(), points.len());
}

#[test]
fn bound_report_json_shape() {
    let report = analyze(&p(2, 1, 2, 8)).report;
    let json: serde_json::Value = serde_json::to_value(&report).unwrap();
    let obj = json.as_object().unwrap();
    let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        [
            "exact_count",
            "exact_redundancy",
            "lower_bound",
            "trivial_bound",
            "upper_bound_lll",
            "upper_bound_union"
        ]
    );
    assert_eq!(obj["exact_count"], "55");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn summation_identities_hold(q in 2u64..200, r_frac in 0.0f64..1.0, ell in 2usize..=8) {
        let r = ((q as f64) * r_frac) as u64;
        prop_assert!(verify_summation_identities(q, r.min(q - 1), ell));
    }

    #[test]
    fn exact_redundancy_in_range(q in 2u64..100, r_frac in 0.0f64..1.0, ell in 1usize..8, n in 0usize..300) {
        let r = (((q as f64) * r_frac) as u64).min(q - 1);
        let point = p(q, r, ell, n);
        let value = redundancy_exact(&point);
        prop_assert!(value >= -1e-12);
        prop_assert!(value <= redundancy_trivial_bound(&point) + 1e-9);
    }
}
