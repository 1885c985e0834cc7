//! Self-consistency suites behind `strandcode verify`.

use clap::ValueEnum;
use num_bigint::BigUint;
use num_traits::Pow;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use strandcode::marker::{
    construct_codeword, continuous_code_redundancy, decode_matrix, message_radices,
    optimal_marker_length,
};
use strandcode::rll::{
    count_rll_brute, count_rll_exact, forbidden_block_count, forbidden_block_indices,
    parameter_grid, redundancy_lower_bound, redundancy_trivial_bound, redundancy_upper_bounds,
    verify_summation_identities, window_count_closed_form, RllParams,
};
use strandcode::{AlphabetParams, MarkerCodeParams, Message};

const LOG_TOLERANCE: f64 = 1e-9;
const IDENTITY_SEED: u64 = 0x5eed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Grid {
    Small,
    Extended,
}

#[derive(Debug, Default, Serialize)]
pub struct Suite {
    pub name: &'static str,
    pub passed: u64,
    pub failed: u64,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Self {
            name,
            ..Self::default()
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            if self.failures.len() < 20 {
                self.failures.push(what());
            }
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Summary {
    pub grid: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub suites: Vec<Suite>,
}

struct Sizes {
    max_alphabet: u64,
    max_len_brute: usize,
    max_len_bounds: usize,
    identity_points: usize,
    roundtrips: usize,
}

pub fn run(grid: Grid) -> Summary {
    let sizes = match grid {
        Grid::Small => Sizes {
            max_alphabet: 4,
            max_len_brute: 12,
            max_len_bounds: 40,
            identity_points: 20,
            roundtrips: 50,
        },
        Grid::Extended => Sizes {
            max_alphabet: 6,
            max_len_brute: 16,
            max_len_bounds: 120,
            identity_points: 200,
            roundtrips: 500,
        },
    };
    let suites = vec![
        oracle_equivalence(&sizes),
        window_closed_form(),
        bound_sandwich(&sizes),
        summation_identities(&sizes),
        optimal_length_consistency(),
        codeword_roundtrip(&sizes),
    ];
    Summary {
        grid: match grid {
            Grid::Small => "small",
            Grid::Extended => "extended",
        },
        passed: suites.iter().map(|s| s.passed).sum(),
        failed: suites.iter().map(|s| s.failed).sum(),
        suites,
    }
}

fn oracle_equivalence(sizes: &Sizes) -> Suite {
    let mut suite = Suite::new("oracle_equivalence");
    for p in parameter_grid(2..=sizes.max_alphabet, None, 1..=4, 0..=sizes.max_len_brute) {
        let brute = count_rll_brute(&p).expect("grid within brute-force limit");
        suite.check(brute == count_rll_exact(&p), || format!("{p:?}"));
    }
    suite
}

fn window_closed_form() -> Suite {
    let mut suite = Suite::new("window_closed_form");
    for q in 2..=6u64 {
        for r in 0..q {
            for ell in 1..=5 {
                let closed = window_count_closed_form(q, r, ell);
                let dp = count_rll_exact(&RllParams::new(q, r, ell, 2 * ell).expect("valid"));
                let forbidden: BigUint = forbidden_block_indices(ell)
                    .map(|(j, k)| forbidden_block_count(j, k, q, r, ell).expect("valid index"))
                    .sum();
                let total: BigUint = Pow::pow(&BigUint::from(q), 2 * ell);
                suite.check(closed == dp && total - forbidden == closed, || {
                    format!("Q={q} R={r} ell={ell}")
                });
            }
        }
    }
    suite
}

fn bound_sandwich(sizes: &Sizes) -> Suite {
    let mut suite = Suite::new("bound_sandwich");
    for p in parameter_grid(
        2..=sizes.max_alphabet,
        None,
        1..=4,
        0..=sizes.max_len_bounds,
    ) {
        let exact = strandcode::rll::redundancy_exact(&p);
        let lower = redundancy_lower_bound(&p).value;
        let trivial = redundancy_trivial_bound(&p);
        let union = redundancy_upper_bounds(&p).union;
        let ok = lower <= exact + LOG_TOLERANCE
            && exact <= trivial + LOG_TOLERANCE
            && union.is_none_or(|u| exact <= u + LOG_TOLERANCE);
        suite.check(ok, || {
            format!("{p:?}: lower={lower} exact={exact} trivial={trivial} union={union:?}")
        });
    }
    suite
}

fn summation_identities(sizes: &Sizes) -> Suite {
    let mut suite = Suite::new("summation_identities");
    let mut rng = ChaCha8Rng::seed_from_u64(IDENTITY_SEED);
    for _ in 0..sizes.identity_points {
        let q = rng.random_range(2..=100u64);
        let r = rng.random_range(0..q);
        let ell = rng.random_range(2..=8usize);
        suite.check(verify_summation_identities(q, r, ell), || {
            format!("Q={q} R={r} ell={ell}")
        });
    }
    suite
}

fn optimal_length_consistency() -> Suite {
    let mut suite = Suite::new("optimal_length_consistency");
    for n in [50usize, 100, 500, 1000, 5000] {
        let opt = optimal_marker_length(4, 6, n).expect("valid parameters");
        let near = (opt.ell_integer as f64 - opt.ell_formula.floor()).abs() <= 1.0
            || (opt.ell_integer as f64 - opt.ell_formula.ceil()).abs() <= 1.0;
        let cost = strandcode::marker::breaker_cost_of(84, 56);
        let relaxed = continuous_code_redundancy(n, opt.ell_formula, cost);
        let closed = (relaxed - opt.redundancy_at_optimum).abs() <= LOG_TOLERANCE;
        suite.check(near && closed, || format!("n={n}: {opt:?}"));
    }
    suite
}

fn codeword_roundtrip(sizes: &Sizes) -> Suite {
    let mut suite = Suite::new("codeword_roundtrip");
    let mut rng = ChaCha8Rng::seed_from_u64(IDENTITY_SEED + 1);
    let codes = [
        (4usize, 6u32, 100usize, 3usize),
        (3, 1, 12, 2),
        (2, 3, 30, 4),
    ];
    for (q, m, n, ell) in codes {
        let params = MarkerCodeParams::new(AlphabetParams::new(q, m).expect("valid"), n, ell)
            .expect("valid");
        let radices = message_radices(&params);
        for _ in 0..sizes.roundtrips {
            let message = Message::new(radices.iter().map(|&r| rng.random_range(0..r)).collect());
            let ok = construct_codeword(&message, &params)
                .and_then(|word| decode_matrix(&word, &params))
                .is_ok_and(|decoded| decoded == message);
            suite.check(ok, || format!("{params:?}"));
        }
    }
    suite
}
