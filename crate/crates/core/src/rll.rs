//! Composite run-length-limited (RLL) sequences.
//!
//! Of the `Q` composite symbols, `R` form a restricted subalphabet. A
//! sequence is `ell`-RLL when no `ell` consecutive symbols are all
//! restricted. Membership depends only on which positions hold restricted
//! symbols, so every counter here works over class patterns weighted by
//! `R^(#restricted) (Q-R)^(#unrestricted)`.

use std::collections::VecDeque;
use std::io;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::exec::{map_ordered, Execution};
use crate::numeric::{format_sig, ln_ratio};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RllError {
    #[error("alphabet size must be at least 2, got {0}")]
    AlphabetTooSmall(u64),
    #[error("restricted subalphabet size {restricted} must be below the alphabet size {alphabet}")]
    RestrictedTooLarge { alphabet: u64, restricted: u64 },
    #[error("window length must be at least 1")]
    ZeroWindow,
    #[error("brute-force enumeration over 2^{n} class patterns exceeds the limit of 2^{limit}")]
    InstanceTooLarge { n: usize, limit: usize },
    #[error("block index (j={j}, k={k}) outside j in [1, {max_j}], k in [ell, 2 ell - j + 1]")]
    BlockIndex { j: usize, k: usize, max_j: usize },
    #[error("summation identities need ell >= 2, got {0}")]
    WindowTooShort(usize),
}

pub type Result<T, E = RllError> = std::result::Result<T, E>;

/// Largest `n` accepted by [`count_rll_brute`].
pub const BRUTE_FORCE_MAX_LEN: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RllParams {
    #[serde(rename = "Q")]
    alphabet: u64,
    #[serde(rename = "R")]
    restricted: u64,
    ell: usize,
    n: usize,
}

impl RllParams {
    pub fn new(alphabet: u64, restricted: u64, ell: usize, n: usize) -> Result<Self> {
        check_alphabet(alphabet, restricted, ell)?;
        Ok(Self {
            alphabet,
            restricted,
            ell,
            n,
        })
    }

    pub fn alphabet(&self) -> u64 {
        self.alphabet
    }

    pub fn restricted(&self) -> u64 {
        self.restricted
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_len(self, n: usize) -> Self {
        Self { n, ..self }
    }

    fn restricted_ratio(&self) -> f64 {
        self.restricted as f64 / self.alphabet as f64
    }

    fn log_q_e(&self) -> f64 {
        1.0 / (self.alphabet as f64).ln()
    }
}

fn check_alphabet(alphabet: u64, restricted: u64, ell: usize) -> Result<()> {
    if alphabet < 2 {
        return Err(RllError::AlphabetTooSmall(alphabet));
    }
    if restricted >= alphabet {
        return Err(RllError::RestrictedTooLarge {
            alphabet,
            restricted,
        });
    }
    if ell == 0 {
        return Err(RllError::ZeroWindow);
    }
    Ok(())
}

/// `true` marks a restricted symbol. Sequences shorter than `ell` qualify.
pub fn is_run_length_limited(restricted: &[bool], ell: usize) -> bool {
    let mut run = 0usize;
    for &r in restricted {
        run = if r { run + 1 } else { 0 };
        if run >= ell {
            return false;
        }
    }
    true
}

/// Exhaustive count over all `2^n` class patterns.
pub fn count_rll_brute(params: &RllParams) -> Result<BigUint> {
    let n = params.n;
    if n > BRUTE_FORCE_MAX_LEN {
        return Err(RllError::InstanceTooLarge {
            n,
            limit: BRUTE_FORCE_MAX_LEN,
        });
    }
    // patterns[k] = number of valid class patterns with k restricted positions
    let mut patterns = vec![0u64; n + 1];
    let mut classes = vec![false; n];
    for mask in 0u64..(1u64 << n) {
        for (i, c) in classes.iter_mut().enumerate() {
            *c = mask >> i & 1 == 1;
        }
        if is_run_length_limited(&classes, params.ell) {
            patterns[mask.count_ones() as usize] += 1;
        }
    }
    let r = BigUint::from(params.restricted);
    let free = BigUint::from(params.alphabet - params.restricted);
    Ok(patterns
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| BigUint::from(c) * Pow::pow(&r, k) * Pow::pow(&free, n - k))
        .sum())
}

/// Exact `|RLL_{Q,R}(ell, n)|`.
///
/// A valid sequence of length `m >= ell` ends in one unrestricted symbol
/// followed by `r < ell` restricted ones, so
/// `f(m) = (Q-R) * g(m)` with `g(m) = sum_{r<ell} R^r f(m-1-r)`, and
/// `g(m+1) = f(m) + R g(m) - R^ell f(m-ell)`. Each step costs a constant
/// number of big-integer operations.
pub fn count_rll_exact(params: &RllParams) -> BigUint {
    let q = BigUint::from(params.alphabet);
    let r = BigUint::from(params.restricted);
    let free = BigUint::from(params.alphabet - params.restricted);
    let (ell, n) = (params.ell, params.n);
    if params.restricted == 0 {
        return Pow::pow(&q, n);
    }
    if n < ell {
        return Pow::pow(&q, n);
    }

    // history holds f(m - ell ..= m - 1)
    let mut history: VecDeque<BigUint> = VecDeque::with_capacity(ell + 1);
    let mut power = BigUint::one();
    for _ in 0..ell {
        history.push_back(power.clone());
        power *= &q;
    }
    let mut g = BigUint::zero();
    for (i, f) in history.iter().enumerate() {
        // f(i) enters with weight R^(ell-1-i)
        g += f * Pow::pow(&r, ell - 1 - i);
    }
    let r_ell = Pow::pow(&r, ell);
    let mut f = &free * &g;
    for _ in ell..n {
        let oldest = history.pop_front().expect("history has ell entries");
        g = &f + &r * &g - &r_ell * oldest;
        history.push_back(f);
        f = &free * &g;
    }
    f
}

/// `|RLL(ell, 2 ell)| = Q^{2l} - (l+1) R^l Q^l + l R^{l+1} Q^{l-1}`.
pub fn window_count_closed_form(alphabet: u64, restricted: u64, ell: usize) -> BigUint {
    let q = BigInt::from(alphabet);
    let r = BigInt::from(restricted);
    let l = BigInt::from(ell);
    let value: BigInt = Pow::pow(&q, 2 * ell) - (&l + 1u32) * Pow::pow(&r, ell) * Pow::pow(&q, ell)
        + &l * Pow::pow(&r, ell + 1) * Pow::pow(&q, ell - 1);
    value
        .to_biguint()
        .expect("closed form counts a set and is nonnegative")
}

/// Valid `(j, k)` pairs: a maximal restricted run of length `k >= ell`
/// starting at 1-based position `j` in a window of `2 ell`.
pub fn forbidden_block_indices(ell: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..=ell + 1).flat_map(move |j| (ell..=2 * ell + 1 - j).map(move |k| (j, k)))
}

/// Number of length-`2 ell` sequences whose maximal restricted run of
/// length `k` starts at position `j`.
pub fn forbidden_block_count(
    j: usize,
    k: usize,
    alphabet: u64,
    restricted: u64,
    ell: usize,
) -> Result<BigUint> {
    if ell == 0 {
        return Err(RllError::ZeroWindow);
    }
    if j == 0 || j > ell + 1 || k < ell || k > 2 * ell + 1 - j {
        return Err(RllError::BlockIndex {
            j,
            k,
            max_j: ell + 1,
        });
    }
    let q = BigUint::from(alphabet);
    let r = BigUint::from(restricted);
    let free = BigUint::from(alphabet.saturating_sub(restricted));
    let width = 2 * ell;
    let run = Pow::pow(&r, k);
    Ok(if j == 1 && k == width {
        run
    } else if j == 1 || k == width - j + 1 {
        // one bounding unrestricted symbol
        run * Pow::pow(&q, width - k - 1) * free
    } else {
        run * Pow::pow(&q, width - k - 2) * Pow::pow(&free, 2u32)
    })
}

/// Upper bound on the count from splitting into `2 ell`-windows.
pub fn segment_bound(params: &RllParams) -> BigUint {
    let window = window_count_closed_form(params.alphabet, params.restricted, params.ell);
    let width = 2 * params.ell;
    Pow::pow(&window, params.n / width)
        * Pow::pow(&BigUint::from(params.alphabet), params.n % width)
}

/// `n - log_Q |RLL|`, in composite symbols.
pub fn redundancy_exact(params: &RllParams) -> f64 {
    redundancy_from_count(params, &count_rll_exact(params))
}

fn redundancy_from_count(params: &RllParams, count: &BigUint) -> f64 {
    let total = Pow::pow(&BigUint::from(params.alphabet), params.n);
    -ln_ratio(count, &total) * params.log_q_e()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub value: f64,
    /// `false` when `n < 2 ell`; the value is then reported as 0.
    pub applicable: bool,
}

/// `log_Q(e) (R/Q)^l (1 - R/Q) (n - 2l) / 2`.
pub fn redundancy_lower_bound(params: &RllParams) -> LowerBound {
    if params.n < 2 * params.ell {
        return LowerBound {
            value: 0.0,
            applicable: false,
        };
    }
    let x = params.restricted_ratio();
    let value = params.log_q_e()
        * x.powi(params.ell as i32)
        * (1.0 - x)
        * (params.n - 2 * params.ell) as f64
        / 2.0;
    LowerBound {
        value,
        applicable: true,
    }
}

/// Numeric check of the two local-lemma premises,
/// `e((2l+2)pi + pi1) <= 1` and `e((l-1)pi + pi1) <= 1`, with
/// `pi1 = (R/Q)^l` and `pi = (R/Q)^l (1 - R/Q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LllPremises {
    pub interior: bool,
    pub first: bool,
}

impl LllPremises {
    pub fn hold(&self) -> bool {
        self.interior && self.first
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperBounds {
    /// `log_Q(e) S / (1 - S)`; absent unless `S < 1`.
    pub union: Option<f64>,
    /// `e log_Q(e) S`, reported whether or not its premises hold.
    pub lll: f64,
    pub lll_premises: LllPremises,
}

/// `S = (R/Q)^l (1 + (1 - R/Q)(n - l))`, the union-bound mass.
fn union_mass(params: &RllParams) -> f64 {
    let x = params.restricted_ratio();
    x.powi(params.ell as i32) * (1.0 + (1.0 - x) * (params.n - params.ell) as f64)
}

pub fn redundancy_upper_bounds(params: &RllParams) -> UpperBounds {
    let x = params.restricted_ratio();
    let pi1 = x.powi(params.ell as i32);
    let pi = pi1 * (1.0 - x);
    let e = std::f64::consts::E;
    let lll_premises = LllPremises {
        interior: e * ((2 * params.ell + 2) as f64 * pi + pi1) <= 1.0,
        first: e * ((params.ell as f64 - 1.0) * pi + pi1) <= 1.0,
    };
    if params.n < params.ell {
        // no full window: every sequence qualifies
        return UpperBounds {
            union: Some(0.0),
            lll: 0.0,
            lll_premises,
        };
    }
    let s = union_mass(params);
    UpperBounds {
        union: (s < 1.0).then(|| params.log_q_e() * s / (1.0 - s)),
        lll: e * params.log_q_e() * s,
        lll_premises,
    }
}

/// `floor(n / l) log_Q(Q / (Q - R))`.
pub fn redundancy_trivial_bound(params: &RllParams) -> f64 {
    let q = params.alphabet as f64;
    let per_breaker = (q / (q - params.restricted as f64)).ln() * params.log_q_e();
    (params.n / params.ell) as f64 * per_breaker
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    #[serde(serialize_with = "decimal")]
    pub exact_count: BigUint,
    pub exact_redundancy: f64,
    pub lower_bound: f64,
    pub upper_bound_union: Option<f64>,
    pub upper_bound_lll: f64,
    pub trivial_bound: f64,
}

fn decimal<S: Serializer>(value: &BigUint, serializer: S) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// A [`BoundReport`] together with its parameters and validity flags.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundAnalysis {
    pub params: RllParams,
    pub report: BoundReport,
    pub lower_bound_applicable: bool,
    pub lll_premises: LllPremises,
}

pub fn bound_report(params: &RllParams) -> BoundReport {
    analyze(params).report
}

pub fn analyze(params: &RllParams) -> BoundAnalysis {
    let exact_count = count_rll_exact(params);
    let exact_redundancy = redundancy_from_count(params, &exact_count);
    let lower = redundancy_lower_bound(params);
    let upper = redundancy_upper_bounds(params);
    BoundAnalysis {
        params: *params,
        report: BoundReport {
            exact_count,
            exact_redundancy,
            lower_bound: lower.value,
            upper_bound_union: upper.union,
            upper_bound_lll: upper.lll,
            trivial_bound: redundancy_trivial_bound(params),
        },
        lower_bound_applicable: lower.applicable,
        lll_premises: upper.lll_premises,
    }
}

/// Every `(Q, R, ell, n)` in the cartesian product, alphabet-major.
pub fn parameter_grid(
    alphabets: impl IntoIterator<Item = u64>,
    restricted: Option<std::ops::RangeInclusive<u64>>,
    ells: std::ops::RangeInclusive<usize>,
    lens: std::ops::RangeInclusive<usize>,
) -> Vec<RllParams> {
    let mut points = Vec::new();
    for q in alphabets {
        let rs = restricted.clone().unwrap_or(0..=q.saturating_sub(1));
        for r in rs.filter(|&r| r < q) {
            for ell in ells.clone() {
                for n in lens.clone() {
                    if let Ok(p) = RllParams::new(q, r, ell, n) {
                        points.push(p);
                    }
                }
            }
        }
    }
    points
}

/// Analyzes every point; output order matches input order.
pub fn bound_sweep(points: &[RllParams], exec: Execution) -> Vec<BoundAnalysis> {
    map_ordered(exec, points, analyze)
}

pub const SWEEP_CSV_HEADER: [&str; 12] = [
    "Q",
    "R",
    "ell",
    "n",
    "exact_count",
    "exact_redundancy",
    "lower_bound",
    "lower_bound_applicable",
    "upper_bound_union",
    "upper_bound_lll",
    "lll_premises_hold",
    "trivial_bound",
];

/// One row per point; floats with 12 significant digits, empty field for an
/// absent union bound.
pub fn write_sweep_csv<W: io::Write>(rows: &[BoundAnalysis], out: W) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(SWEEP_CSV_HEADER)?;
    for row in rows {
        let p = &row.params;
        let r = &row.report;
        writer.write_record([
            p.alphabet.to_string(),
            p.restricted.to_string(),
            p.ell.to_string(),
            p.n.to_string(),
            r.exact_count.to_string(),
            format_sig(r.exact_redundancy, 12),
            format_sig(r.lower_bound, 12),
            row.lower_bound_applicable.to_string(),
            r.upper_bound_union
                .map(|u| format_sig(u, 12))
                .unwrap_or_default(),
            format_sig(r.upper_bound_lll, 12),
            row.lll_premises.hold().to_string(),
            format_sig(r.trivial_bound, 12),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

/// Outcome of the exact checks behind the closed-form window count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    /// Both single sums equal `2 (QR)^l (1 - (R/Q)^l)`.
    pub two_sums: bool,
    /// The double sum equals `(QR)^l ((l-1) - l R/Q + (R/Q)^l)`.
    pub double_sum: bool,
    /// Swapping the order of the double geometric sum preserves its value.
    pub change_of_summation: bool,
}

impl IdentityCheck {
    pub fn holds(&self) -> bool {
        self.two_sums && self.double_sum && self.change_of_summation
    }
}

fn rational(value: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(value))
}

fn rational_pow(base: &BigRational, exp: usize) -> BigRational {
    Pow::pow(base, exp)
}

/// Evaluates both sides of each identity in exact rational arithmetic.
pub fn check_summation_identities(
    alphabet: u64,
    restricted: u64,
    ell: usize,
) -> Result<IdentityCheck> {
    check_alphabet(alphabet, restricted, ell)?;
    if ell < 2 {
        return Err(RllError::WindowTooShort(ell));
    }
    let q = rational(alphabet);
    let r = rational(restricted);
    let x = &r / &q;
    let one = BigRational::one();
    let gap = &one - &x;
    let qr_ell = rational_pow(&(&q * &r), ell);
    let x_ell = rational_pow(&x, ell);

    let mut lhs = BigRational::zero();
    for j in 1..=ell {
        lhs += rational_pow(&r, 2 * ell - j) * rational_pow(&q, j) * &gap;
    }
    for k in ell..2 * ell {
        lhs += rational_pow(&r, k) * rational_pow(&q, 2 * ell - k) * &gap;
    }
    let two_sums = lhs == BigRational::from_integer(2.into()) * &qr_ell * (&one - &x_ell);

    let mut lhs = BigRational::zero();
    for j in 1..ell {
        for k in ell..2 * ell - j {
            lhs += rational_pow(&r, k) * rational_pow(&q, 2 * ell - k);
        }
    }
    lhs *= &gap * &gap;
    let l = rational(ell as u64);
    let double_sum = lhs == &qr_ell * ((&l - &one) - &l * &x + &x_ell);

    let mut rows = BigRational::zero();
    for j in 1..ell {
        for i in 0..ell - j {
            rows += rational_pow(&x, i);
        }
    }
    let mut cols = BigRational::zero();
    for i in 0..=ell - 2 {
        for _ in 1..ell - i {
            cols += rational_pow(&x, i);
        }
    }
    let change_of_summation = rows == cols;

    Ok(IdentityCheck {
        two_sums,
        double_sum,
        change_of_summation,
    })
}

pub fn verify_summation_identities(alphabet: u64, restricted: u64, ell: usize) -> bool {
    check_summation_identities(alphabet, restricted, ell).is_ok_and(|c| c.holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(q: u64, r: u64, ell: usize, n: usize) -> RllParams {
        RllParams::new(q, r, ell, n).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    #[test]
    fn membership() {
        assert!(is_run_length_limited(&[false; 7], 1));
        assert!(!is_run_length_limited(&[true, true, false], 2));
        assert!(is_run_length_limited(&[true, true, false, true, true], 3));
        assert!(is_run_length_limited(&[true, true], 3));
        assert!(is_run_length_limited(&[], 1));
    }

    #[test]
    fn brute_counts() {
        assert_eq!(count_rll_brute(&p(2, 1, 2, 3)).unwrap(), big(5));
        assert_eq!(count_rll_brute(&p(2, 1, 2, 4)).unwrap(), big(8));
        assert_eq!(count_rll_brute(&p(5, 0, 3, 6)).unwrap(), big(5u64.pow(6)));
        assert!(matches!(
            count_rll_brute(&p(2, 1, 2, 40)),
            Err(RllError::InstanceTooLarge { .. })
        ));
    }

    #[test]
    fn exact_counts() {
        assert_eq!(count_rll_exact(&p(2, 1, 2, 8)), big(55));
        assert_eq!(count_rll_exact(&p(3, 1, 1, 5)), big(32));
        assert_eq!(count_rll_exact(&p(7, 3, 4, 0)), big(1));
        assert_eq!(count_rll_exact(&p(7, 3, 4, 3)), big(343));
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(window_count_closed_form(2, 1, 2), big(8));
        assert_eq!(window_count_closed_form(3, 1, 1), big(4));
        assert_eq!(window_count_closed_form(5, 0, 3), big(5u64.pow(6)));
    }

    #[test]
    fn block_counts() {
        assert_eq!(forbidden_block_count(1, 4, 2, 1, 2).unwrap(), big(1));
        assert_eq!(forbidden_block_count(1, 2, 2, 1, 2).unwrap(), big(2));
        assert!(forbidden_block_count(4, 2, 2, 1, 2).is_err());
        assert!(forbidden_block_count(2, 4, 2, 1, 2).is_err());
        assert!(forbidden_block_count(1, 1, 2, 1, 2).is_err());
        let indices: Vec<_> = forbidden_block_indices(2).collect();
        assert_eq!(
            indices,
            vec![(1, 2), (1, 3), (1, 4), (2, 2), (2, 3), (3, 2)]
        );
    }

    #[test]
    fn redundancy_examples() {
        let r = redundancy_exact(&p(2, 1, 2, 8));
        assert!((r - (8.0 - 55f64.log2())).abs() < 1e-12);
        assert_eq!(redundancy_exact(&p(9, 0, 3, 20)), 0.0);
        let r = redundancy_exact(&p(3, 1, 1, 5));
        let expected = 5.0 * (1.0 - 2f64.ln() / 3f64.ln());
        assert!((r - expected).abs() < 1e-12);
        assert!((r - 1.8453).abs() < 1e-4);
    }

    #[test]
    fn lower_bound_examples() {
        let lb = redundancy_lower_bound(&p(2, 1, 2, 8));
        assert!(lb.applicable);
        let expected = std::f64::consts::LOG2_E * 0.25 * 0.5 * 2.0;
        assert!((lb.value - expected).abs() < 1e-15);
        assert!((lb.value - 0.3607).abs() < 1e-4);
        assert_eq!(redundancy_lower_bound(&p(4, 0, 2, 9)).value, 0.0);
        let at_edge = redundancy_lower_bound(&p(4, 2, 3, 6));
        assert!(at_edge.applicable);
        assert_eq!(at_edge.value, 0.0);
        assert!(!redundancy_lower_bound(&p(4, 2, 3, 5)).applicable);
    }

    #[test]
    fn upper_bound_examples() {
        let ub = redundancy_upper_bounds(&p(2, 1, 2, 8));
        assert_eq!(ub.union, None);
        let expected = std::f64::consts::E * std::f64::consts::LOG2_E;
        assert!((ub.lll - expected).abs() < 1e-12);
        assert!((ub.lll - 3.9217).abs() < 1e-4);

        let ub = redundancy_upper_bounds(&p(6, 0, 3, 30));
        assert_eq!(ub.union, Some(0.0));
        assert_eq!(ub.lll, 0.0);

        let params = p(84, 56, 8, 100);
        let ub = redundancy_upper_bounds(&params);
        let s = (2.0f64 / 3.0).powi(8) * (1.0 + 92.0 / 3.0);
        assert!(s > 1.0);
        assert_eq!(ub.union, None);
        assert!((ub.lll - std::f64::consts::E * s / 84f64.ln()).abs() < 1e-12);
        assert!(redundancy_exact(&params) <= ub.lll);
    }

    #[test]
    fn trivial_bound_examples() {
        assert!((redundancy_trivial_bound(&p(2, 1, 2, 8)) - 4.0).abs() < 1e-12);
        assert_eq!(redundancy_trivial_bound(&p(5, 2, 6, 5)), 0.0);
        let t = redundancy_trivial_bound(&p(84, 56, 5, 100));
        assert!((t - 20.0 * 3f64.ln() / 84f64.ln()).abs() < 1e-12);
        assert!((t - 4.9590).abs() < 1e-4);
    }

    #[test]
    fn identities_examples() {
        assert!(verify_summation_identities(2, 1, 3));
        assert!(verify_summation_identities(84, 56, 5));
        assert!(verify_summation_identities(3, 2, 2));
        assert!(!verify_summation_identities(3, 2, 1));
        assert_eq!(
            check_summation_identities(3, 2, 1),
            Err(RllError::WindowTooShort(1))
        );
    }

    #[test]
    fn params_validation() {
        assert!(RllParams::new(1, 0, 1, 1).is_err());
        assert!(RllParams::new(4, 4, 1, 1).is_err());
        assert!(RllParams::new(4, 1, 0, 1).is_err());
    }

    #[test]
    fn report_json_fields() {
        let report = bound_report(&p(2, 1, 2, 8));
        let value: serde_json::Value = serde_json::to_value(&report).unwrap();
        let obj = value.as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().cloned().collect();
        keys.sort();
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
        assert!(obj["upper_bound_union"].is_null());
    }

    #[test]
    fn sweep_csv_rows() {
        let points = parameter_grid([2u64], Some(1..=1), 2..=2, 7..=8);
        let rows = bound_sweep(&points, Execution::Sequential);
        let mut out = Vec::new();
        write_sweep_csv(&rows, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], SWEEP_CSV_HEADER.join(","));
        assert!(lines[2].starts_with("2,1,2,8,55,2.21864"));
    }
}
