//! Marker code for single strand breaks.
//!
//! A codeword of length `n` carries the marker `(anchor, marker x ell,
//! anchor)` in its first and last `ell + 2` columns, all at full weight
//! `M`. Between them, every column `j` with `(j + 2) mod ell = 0` is a
//! breaker: it puts no weight on the marker base, so no synthesized strand
//! can show `ell` marker bases in a row inside the data. Column positions
//! are 1-based throughout this module.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::composite::{
    alphabet_size, rank_symbol, rank_symbol_excluding, restricted_symbol_count, unrank_symbol,
    unrank_symbol_excluding, AlphabetParams, CompositeError, CompositeMatrix, CompositeSymbol,
};
use crate::rll::RllParams;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MarkerError {
    #[error(transparent)]
    Composite(#[from] CompositeError),
    #[error("codeword length {n} too short for two markers of {marker} columns and a data column")]
    TooShort { n: usize, marker: usize },
    #[error("marker run length must be at least 1")]
    ZeroMarker,
    #[error("marker base and anchor base must differ (both {0})")]
    SameBases(usize),
    #[error("message has {got} symbols, layout has {expected} data columns")]
    MessageLength { got: usize, expected: usize },
    #[error("message symbol {value} at column {column} exceeds radix {radix}")]
    Radix {
        column: usize,
        value: u64,
        radix: u64,
    },
    #[error("invalid codeword: {0}")]
    InvalidCodeword(Violation),
    #[error("fragment of length {len} is longer than the codeword length {n}")]
    FragmentTooLong { len: usize, n: usize },
    #[error("base {base} in fragment outside [1, {q}]")]
    FragmentBase { base: u8, q: usize },
}

pub type Result<T, E = MarkerError> = std::result::Result<T, E>;

/// Layout parameters of the marker code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams", into = "RawParams")]
pub struct MarkerCodeParams {
    alphabet: AlphabetParams,
    n: usize,
    ell: usize,
    marker_base: usize,
    anchor_base: usize,
}

#[derive(Serialize, Deserialize)]
struct RawParams {
    q: usize,
    #[serde(rename = "M")]
    m: u32,
    n: usize,
    ell: usize,
    #[serde(default = "default_marker_base")]
    marker_base: usize,
    #[serde(default = "default_anchor_base")]
    anchor_base: usize,
}

fn default_marker_base() -> usize {
    1
}

fn default_anchor_base() -> usize {
    2
}

impl TryFrom<RawParams> for MarkerCodeParams {
    type Error = MarkerError;

    fn try_from(raw: RawParams) -> Result<Self> {
        let alphabet = AlphabetParams::new(raw.q, raw.m)?;
        MarkerCodeParams::with_bases(alphabet, raw.n, raw.ell, raw.marker_base, raw.anchor_base)
    }
}

impl From<MarkerCodeParams> for RawParams {
    fn from(p: MarkerCodeParams) -> Self {
        RawParams {
            q: p.alphabet.q(),
            m: p.alphabet.resolution(),
            n: p.n,
            ell: p.ell,
            marker_base: p.marker_base,
            anchor_base: p.anchor_base,
        }
    }
}

impl MarkerCodeParams {
    /// Marker run on base 1 (A), anchors on base 2 (C).
    pub fn new(alphabet: AlphabetParams, n: usize, ell: usize) -> Result<Self> {
        Self::with_bases(alphabet, n, ell, 1, 2)
    }

    pub fn with_bases(
        alphabet: AlphabetParams,
        n: usize,
        ell: usize,
        marker_base: usize,
        anchor_base: usize,
    ) -> Result<Self> {
        if ell == 0 {
            return Err(MarkerError::ZeroMarker);
        }
        if n < 2 * (ell + 2) + 1 {
            return Err(MarkerError::TooShort { n, marker: ell + 2 });
        }
        alphabet.check_base(marker_base)?;
        alphabet.check_base(anchor_base)?;
        if marker_base == anchor_base {
            return Err(MarkerError::SameBases(marker_base));
        }
        Ok(Self {
            alphabet,
            n,
            ell,
            marker_base,
            anchor_base,
        })
    }

    pub fn alphabet(&self) -> &AlphabetParams {
        &self.alphabet
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn marker_base(&self) -> usize {
        self.marker_base
    }

    pub fn anchor_base(&self) -> usize {
        self.anchor_base
    }

    /// `ell = 1` turns every data column into a breaker.
    pub fn is_degenerate(&self) -> bool {
        self.ell == 1
    }

    pub fn marker_len(&self) -> usize {
        self.ell + 2
    }

    /// The marker as a base sequence: anchor, `ell` marker bases, anchor.
    pub fn marker_pattern(&self) -> Vec<u8> {
        let mut pattern = vec![self.marker_base as u8; self.ell + 2];
        pattern[0] = self.anchor_base as u8;
        pattern[self.ell + 1] = self.anchor_base as u8;
        pattern
    }

    /// `(Q, R)` with `R` the number of symbols touching the marker base.
    pub fn alphabet_counts(&self) -> (u64, u64) {
        let q = alphabet_size(&self.alphabet)
            .to_u64()
            .expect("alphabet sizes used for codes fit in u64");
        let r = restricted_symbol_count(&self.alphabet, self.marker_base)
            .expect("marker base validated")
            .to_u64()
            .expect("bounded by Q");
        (q, r)
    }

    /// RLL parameters of the data region: window `ell` over the `n - 2(ell+2)`
    /// data columns.
    pub fn data_rll_params(&self) -> RllParams {
        let (q, r) = self.alphabet_counts();
        RllParams::new(q, r, self.ell, self.n - 2 * (self.ell + 2))
            .expect("valid alphabet yields valid RLL parameters")
    }

    /// The fixed column at a marker position, `None` for data positions.
    pub fn marker_symbol(&self, position: usize) -> Option<CompositeSymbol> {
        let base = match ColumnRole::of(position, self) {
            ColumnRole::Anchor => self.anchor_base,
            ColumnRole::MarkerRun => self.marker_base,
            _ => return None,
        };
        Some(CompositeSymbol::pure(base, &self.alphabet).expect("validated base"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnRole {
    Anchor,
    MarkerRun,
    Breaker,
    Free,
}

impl ColumnRole {
    fn of(position: usize, params: &MarkerCodeParams) -> ColumnRole {
        let (n, ell) = (params.n, params.ell);
        if position == 1 || position == ell + 2 || position == n - ell - 1 || position == n {
            ColumnRole::Anchor
        } else if position <= ell + 1 || position >= n - ell {
            ColumnRole::MarkerRun
        } else if (position + 2).is_multiple_of(ell) {
            ColumnRole::Breaker
        } else {
            ColumnRole::Free
        }
    }

    pub fn is_marker(self) -> bool {
        matches!(self, ColumnRole::Anchor | ColumnRole::MarkerRun)
    }
}

/// Partition of `[1, n]` into marker, breaker and free columns.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LayoutMap {
    pub marker_positions: Vec<usize>,
    pub breaker_positions: Vec<usize>,
    pub free_positions: Vec<usize>,
    /// Role of column `j` at index `j - 1`.
    #[serde(skip)]
    roles: Vec<ColumnRole>,
}

impl LayoutMap {
    pub fn role(&self, position: usize) -> ColumnRole {
        self.roles[position - 1]
    }

    /// Breaker and free positions in column order.
    pub fn data_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| !r.is_marker())
            .map(|(i, _)| i + 1)
    }

    pub fn data_len(&self) -> usize {
        self.breaker_positions.len() + self.free_positions.len()
    }
}

pub fn layout(params: &MarkerCodeParams) -> LayoutMap {
    let roles: Vec<ColumnRole> = (1..=params.n).map(|j| ColumnRole::of(j, params)).collect();
    let mut map = LayoutMap {
        marker_positions: Vec::with_capacity(2 * params.marker_len()),
        breaker_positions: Vec::new(),
        free_positions: Vec::new(),
        roles: Vec::new(),
    };
    for (i, role) in roles.iter().enumerate() {
        let target = match role {
            ColumnRole::Anchor | ColumnRole::MarkerRun => &mut map.marker_positions,
            ColumnRole::Breaker => &mut map.breaker_positions,
            ColumnRole::Free => &mut map.free_positions,
        };
        target.push(i + 1);
    }
    map.roles = roles;
    map
}

/// One symbol index per data column, in column order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Message {
    pub symbols: Vec<u64>,
}

impl Message {
    pub fn new(symbols: Vec<u64>) -> Self {
        Self { symbols }
    }

    pub fn zeros(params: &MarkerCodeParams) -> Self {
        Self::new(vec![0; layout(params).data_len()])
    }
}

/// Radix of each data column: `Q` at free positions, `Q - R` at breakers.
pub fn message_radices(params: &MarkerCodeParams) -> Vec<u64> {
    let (q, r) = params.alphabet_counts();
    let map = layout(params);
    map.data_positions()
        .map(|j| match map.role(j) {
            ColumnRole::Breaker => q - r,
            _ => q,
        })
        .collect()
}

/// `log_Q` of the number of codewords.
pub fn message_capacity(params: &MarkerCodeParams) -> f64 {
    let (q, _) = params.alphabet_counts();
    message_radices(params)
        .iter()
        .map(|&radix| (radix as f64).ln())
        .sum::<f64>()
        / (q as f64).ln()
}

pub fn construct_codeword(message: &Message, params: &MarkerCodeParams) -> Result<CompositeMatrix> {
    let map = layout(params);
    let radices = message_radices(params);
    if message.symbols.len() != radices.len() {
        return Err(MarkerError::MessageLength {
            got: message.symbols.len(),
            expected: radices.len(),
        });
    }
    let mut columns = Vec::with_capacity(params.n);
    let mut data = message.symbols.iter().zip(&radices);
    for j in 1..=params.n {
        let role = map.role(j);
        if let Some(symbol) = params.marker_symbol(j) {
            columns.push(symbol);
            continue;
        }
        let (&value, &radix) = data.next().expect("one message symbol per data column");
        if value >= radix {
            return Err(MarkerError::Radix {
                column: j,
                value,
                radix,
            });
        }
        let symbol = if role == ColumnRole::Breaker {
            unrank_symbol_excluding(value, &params.alphabet, params.marker_base)?
        } else {
            unrank_symbol(value, &params.alphabet)?
        };
        columns.push(symbol);
    }
    Ok(CompositeMatrix::new(params.alphabet, columns)?)
}

/// Which codeword condition a column violates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// Matrix alphabet or length disagrees with the parameters.
    Shape,
    /// Anchor columns `1, ell+2, n-ell-1, n` carry the anchor base at weight `M`.
    Anchor,
    /// Marker-run columns carry the marker base at weight `M`.
    MarkerRun,
    /// Breaker columns give the marker base zero weight.
    Breaker,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    /// 1-based column, 0 for shape mismatches.
    pub column: usize,
    pub condition: Condition,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.condition {
            Condition::Shape => write!(f, "matrix shape does not match the code parameters"),
            Condition::Anchor => write!(f, "column {} is not a full-weight anchor", self.column),
            Condition::MarkerRun => {
                write!(f, "column {} is not a full-weight marker base", self.column)
            }
            Condition::Breaker => write!(
                f,
                "breaker column {} puts weight on the marker base",
                self.column
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Validation {
    pub violations: Vec<Violation>,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn is_valid_codeword(matrix: &CompositeMatrix, params: &MarkerCodeParams) -> Validation {
    if matrix.params() != params.alphabet() || matrix.len() != params.n {
        return Validation {
            violations: vec![Violation {
                column: 0,
                condition: Condition::Shape,
            }],
        };
    }
    let mut violations = Vec::new();
    for (i, column) in matrix.columns().iter().enumerate() {
        let j = i + 1;
        let condition = match ColumnRole::of(j, params) {
            ColumnRole::Anchor => Condition::Anchor,
            ColumnRole::MarkerRun => Condition::MarkerRun,
            ColumnRole::Breaker => Condition::Breaker,
            ColumnRole::Free => continue,
        };
        let ok = match params.marker_symbol(j) {
            Some(expected) => *column == expected,
            None => column.weight(params.marker_base) == 0,
        };
        if !ok {
            violations.push(Violation {
                column: j,
                condition,
            });
        }
    }
    Validation { violations }
}

pub fn decode_matrix(codeword: &CompositeMatrix, params: &MarkerCodeParams) -> Result<Message> {
    let validation = is_valid_codeword(codeword, params);
    if let Some(first) = validation.violations.into_iter().next() {
        return Err(MarkerError::InvalidCodeword(first));
    }
    let map = layout(params);
    let symbols = map
        .data_positions()
        .map(|j| {
            let column = codeword.column(j);
            if map.role(j) == ColumnRole::Breaker {
                rank_symbol_excluding(column, &params.alphabet, params.marker_base)
            } else {
                rank_symbol(column, &params.alphabet)
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Message::new(symbols))
}

fn breaker_cost(params: &MarkerCodeParams) -> f64 {
    let (q, r) = params.alphabet_counts();
    breaker_cost_of(q, r)
}

/// `log_Q(Q / (Q - R))`, the redundancy of one breaker column.
pub fn breaker_cost_of(q: u64, r: u64) -> f64 {
    let q = q as f64;
    (q / (q - r as f64)).ln() / q.ln()
}

/// `2 ell + 4 + floor((n - 2(ell+2)) / ell) log_Q(Q/(Q-R))`.
pub fn code_redundancy_formula(params: &MarkerCodeParams) -> f64 {
    redundancy_formula_at(params.n, params.ell, breaker_cost(params))
}

fn redundancy_formula_at(n: usize, ell: usize, cost: f64) -> f64 {
    let data = n - 2 * (ell + 2);
    (2 * ell + 4) as f64 + (data / ell) as f64 * cost
}

/// `2(ell+2)` plus the cost of the breakers the layout actually places.
pub fn measured_code_redundancy(params: &MarkerCodeParams) -> f64 {
    let breakers = layout(params).breaker_positions.len();
    (2 * params.ell + 4) as f64 + breakers as f64 * breaker_cost(params)
}

/// Floor-free relaxation `2l + 4 + (n - 2l - 4) c / l`.
pub fn continuous_code_redundancy(n: usize, ell: f64, cost: f64) -> f64 {
    2.0 * ell + 4.0 + (n as f64 - 2.0 * ell - 4.0) * cost / ell
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalMarker {
    /// Stationary point `sqrt((n - 4)/2 * c)` of the relaxation.
    pub ell_formula: f64,
    /// Minimizer of [`code_redundancy_formula`] over valid integer `ell`,
    /// smaller `ell` on ties.
    pub ell_integer: usize,
    /// `4 + 2 sqrt(2 (n - 4) c) - 2c`.
    pub redundancy_at_optimum: f64,
    pub formula_redundancy_at_integer: f64,
    pub measured_redundancy_at_integer: f64,
}

/// Requires `n >= 9` so that `ell = 2` fits.
pub fn optimal_marker_length(q: usize, m: u32, n: usize) -> Result<OptimalMarker> {
    let alphabet = AlphabetParams::new(q, m)?;
    let probe = MarkerCodeParams::new(alphabet, n, 1)?;
    if n < 9 {
        return Err(MarkerError::TooShort { n, marker: 4 });
    }
    let cost = breaker_cost(&probe);
    let ell_formula = ((n as f64 - 4.0) / 2.0 * cost).sqrt();
    let redundancy_at_optimum = 4.0 + 2.0 * (2.0 * (n as f64 - 4.0) * cost).sqrt() - 2.0 * cost;
    let max_ell = (n - 5) / 2;
    let mut best = (1usize, redundancy_formula_at(n, 1, cost));
    for ell in 2..=max_ell {
        let value = redundancy_formula_at(n, ell, cost);
        if value < best.1 {
            best = (ell, value);
        }
    }
    let at_integer = MarkerCodeParams::new(alphabet, n, best.0)?;
    Ok(OptimalMarker {
        ell_formula,
        ell_integer: best.0,
        redundancy_at_optimum,
        formula_redundancy_at_integer: best.1,
        measured_redundancy_at_integer: measured_code_redundancy(&at_integer),
    })
}

/// `log_{Q/R}(n / ln n)`, the marker length balancing `ell` against
/// `(R/Q)^ell n`, with the additive constant taken as zero.
pub fn asymptotic_optimal_ell(q: u64, r: u64, n: f64) -> f64 {
    assert!(q > r && r >= 1, "need Q > R >= 1");
    assert!(n >= 3.0, "need n >= 3");
    (n / n.ln()).ln() / (q as f64 / r as f64).ln()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FragmentClass {
    Prefix,
    Suffix,
    Full,
    MarkerOnly,
    Discard,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub class: FragmentClass,
    /// Covered 1-based columns `[first, last]`; absent for fragments that
    /// contribute no data.
    pub interval: Option<(usize, usize)>,
}

/// Positions a fragment by the markers it carries.
///
/// A fragment whose two ends both show the marker but which is shorter
/// than `n` cannot come from one break and is discarded.
pub fn classify_fragment(fragment: &[u8], params: &MarkerCodeParams) -> Result<Classification> {
    let (len, n) = (fragment.len(), params.n);
    if len > n {
        return Err(MarkerError::FragmentTooLong { len, n });
    }
    let q = params.alphabet.q();
    if let Some(&base) = fragment.iter().find(|&&b| b == 0 || b as usize > q) {
        return Err(MarkerError::FragmentBase { base, q });
    }
    let pattern = params.marker_pattern();
    let starts = fragment.starts_with(&pattern);
    let ends = fragment.ends_with(&pattern);
    let (class, interval) = if len == n && starts && ends {
        (FragmentClass::Full, Some((1, n)))
    } else if len == pattern.len() && starts {
        (FragmentClass::MarkerOnly, None)
    } else if starts && ends {
        (FragmentClass::Discard, None)
    } else if starts {
        (FragmentClass::Prefix, Some((1, len)))
    } else if ends {
        (FragmentClass::Suffix, Some((n - len + 1, n)))
    } else {
        (FragmentClass::Discard, None)
    };
    Ok(Classification { class, interval })
}
