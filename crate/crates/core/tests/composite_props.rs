use num_bigint::BigUint;
use proptest::prelude::*;
use strandcode::composite::{
    alphabet_size, enumerate_symbols, quantize_counts, quantize_to_symbol, rank_symbol,
    restricted_symbol_count, unrank_symbol, unrank_symbol_excluding,
};
use strandcode::{AlphabetParams, CompositeMatrix, CompositeSymbol};

fn compositions(q: usize, m: u32) -> Vec<Vec<u32>> {
    if q == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in 0..=m {
        for mut rest in compositions(q - 1, m - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Stars-and-bars bar positions, largest first, which sort in colex order.
fn colex_key(counts: &[u32]) -> Vec<u32> {
    let mut bars = Vec::new();
    let mut stars = 0;
    for (i, &c) in counts[..counts.len() - 1].iter().enumerate() {
        stars += c;
        bars.push(stars + i as u32);
    }
    bars.reverse();
    bars
}

fn l1_scaled(counts: &[u32], weights: &[u64], m: u32) -> u128 {
    let total: u64 = weights.iter().sum();
    counts
        .iter()
        .zip(weights)
        .map(|(&c, &w)| (c as i128 * total as i128 - w as i128 * m as i128).unsigned_abs())
        .sum()
}

#[test]
fn enumeration_matches_independent_colex_sort() {
    for q in 2..=5 {
        for m in 1..=6 {
            let params = AlphabetParams::new(q, m).unwrap();
            let mut expected = compositions(q, m);
            expected.sort_by_key(|c| colex_key(c));
            let got: Vec<Vec<u32>> = enumerate_symbols(&params)
                .unwrap()
                .into_iter()
                .map(|s| s.counts().to_vec())
                .collect();
            assert_eq!(got, expected, "q={q} M={m}");
            assert_eq!(alphabet_size(&params), BigUint::from(expected.len()));
        }
    }
}

#[test]
fn restricted_count_matches_enumeration() {
    for q in 2..=5 {
        for m in 1..=6 {
            let params = AlphabetParams::new(q, m).unwrap();
            let symbols = enumerate_symbols(&params).unwrap();
            for base in 1..=q {
                let expected = symbols.iter().filter(|s| s.weight(base) > 0).count();
                assert_eq!(
                    restricted_symbol_count(&params, base).unwrap(),
                    BigUint::from(expected)
                );
            }
        }
    }
}

#[test]
fn excluded_unranking_is_the_filtered_order() {
    for q in 2..=5 {
        for m in 1..=5 {
            let params = AlphabetParams::new(q, m).unwrap();
            for base in 1..=q {
                let filtered: Vec<CompositeSymbol> = enumerate_symbols(&params)
                    .unwrap()
                    .into_iter()
                    .filter(|s| s.weight(base) == 0)
                    .collect();
                for (i, s) in filtered.iter().enumerate() {
                    assert_eq!(
                        &unrank_symbol_excluding(i as u64, &params, base).unwrap(),
                        s
                    );
                }
                assert!(unrank_symbol_excluding(filtered.len() as u64, &params, base).is_err());
            }
        }
    }
}

#[test]
fn quantize_agrees_with_exhaustive_l1() {
    for q in 2..=4 {
        for m in 1..=6u32 {
            let params = AlphabetParams::new(q, m).unwrap();
            let all = compositions(q, m);
            // every weight vector with entries in 0..=4
            let mut weights = vec![0u64; q];
            loop {
                if weights.iter().any(|&w| w > 0) {
                    let got = quantize_counts(&weights, &params).unwrap();
                    let best = all.iter().map(|c| l1_scaled(c, &weights, m)).min().unwrap();
                    // ties go to lower base indices: the lexicographically largest minimizer
                    let expected = all
                        .iter()
                        .filter(|c| l1_scaled(c, &weights, m) == best)
                        .max()
                        .unwrap();
                    assert_eq!(got.counts(), &expected[..], "weights {weights:?} M={m}");
                }
                let mut i = 0;
                while i < q && weights[i] == 4 {
                    weights[i] = 0;
                    i += 1;
                }
                if i == q {
                    break;
                }
                weights[i] += 1;
            }
        }
    }
}

fn params_strategy() -> impl Strategy<Value = AlphabetParams> {
    (2usize..=6, 1u32..=10).prop_map(|(q, m)| AlphabetParams::new(q, m).unwrap())
}

proptest! {
    #[test]
    fn rank_unrank_bijection(params in params_strategy(), seed in any::<u64>()) {
        let size: u64 = alphabet_size(&params).try_into().unwrap();
        let index = seed % size;
        let symbol = unrank_symbol(index, &params).unwrap();
        prop_assert_eq!(rank_symbol(&symbol, &params).unwrap(), index);
        prop_assert_eq!(symbol.counts().iter().sum::<u32>(), params.resolution());
    }

    #[test]
    fn quantize_fixes_exact_symbols(params in params_strategy(), seed in any::<u64>()) {
        let size: u64 = alphabet_size(&params).try_into().unwrap();
        let symbol = unrank_symbol(seed % size, &params).unwrap();
        let freqs = symbol.probabilities();
        prop_assert_eq!(quantize_to_symbol(&freqs, &params).unwrap(), symbol);
    }

    #[test]
    fn quantize_sums_to_resolution(
        params in params_strategy(),
        raw in prop::collection::vec(0.0f64..1e6, 6),
    ) {
        let freqs = &raw[..params.q()];
        prop_assume!(freqs.iter().any(|&f| f > 0.0));
        let symbol = quantize_to_symbol(freqs, &params).unwrap();
        prop_assert_eq!(symbol.counts().iter().sum::<u32>(), params.resolution());
    }

    #[test]
    fn matrix_formats_roundtrip(
        params in params_strategy(),
        indices in prop::collection::vec(any::<u64>(), 1..20),
    ) {
        let size: u64 = alphabet_size(&params).try_into().unwrap();
        let columns = indices.iter().map(|i| unrank_symbol(i % size, &params).unwrap()).collect();
        let matrix = CompositeMatrix::new(params, columns).unwrap();
        prop_assert_eq!(&CompositeMatrix::from_json(&matrix.to_json()).unwrap(), &matrix);
        prop_assert_eq!(&CompositeMatrix::from_csv(&matrix.to_csv()).unwrap(), &matrix);
    }
}
