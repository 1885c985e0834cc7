//! Composite symbols and matrices.
//!
//! A composite symbol over `q` bases at resolution `M` is a vector of `q`
//! nonnegative counts summing to `M`. Symbols are ordered by the
//! combinatorial number system applied to their stars-and-bars
//! representation: the `q - 1` bar positions `b_i = (x_1 + .. + x_i) + i - 1`
//! form a `(q-1)`-subset of `[0, M + q - 2]`, and subsets are taken in
//! colexicographic order. Rank 0 is `(0, .., 0, M)`, the last rank is
//! `(M, 0, .., 0)`.
//!
//! Base indices in this crate are 1-based (`1 = A`, `2 = C`, ...), matching
//! the usual composite-DNA notation.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{Float, One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompositeError {
    #[error("base alphabet size must be at least 2, got {0}")]
    BaseAlphabetTooSmall(usize),
    #[error("resolution parameter must be at least 1, got {0}")]
    ResolutionTooSmall(u32),
    #[error("base index {base} outside [1, {q}]")]
    InvalidBase { base: usize, q: usize },
    #[error("symbol has {got} entries, expected {expected}")]
    WrongLength { got: usize, expected: usize },
    #[error("symbol entries sum to {got}, expected {expected}")]
    WrongSum { got: u64, expected: u32 },
    #[error("symbol index {index} out of range for an alphabet of size {size}")]
    IndexOutOfRange { index: u64, size: BigUint },
    #[error("alphabet of size {0} does not fit in a 64-bit index")]
    AlphabetTooLarge(BigUint),
    #[error("frequency vector has no positive mass")]
    ZeroMass,
    #[error("frequency entries must be finite and nonnegative")]
    InvalidFrequency,
    #[error("a composite matrix needs at least one column")]
    EmptyMatrix,
    #[error("column {column}: {source}")]
    Column {
        column: usize,
        #[source]
        source: Box<CompositeError>,
    },
}

pub type Result<T, E = CompositeError> = std::result::Result<T, E>;

/// Base alphabet size `q` and resolution parameter `M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawAlphabet")]
pub struct AlphabetParams {
    q: usize,
    #[serde(rename = "M")]
    m: u32,
}

#[derive(Deserialize)]
struct RawAlphabet {
    q: usize,
    #[serde(rename = "M")]
    m: u32,
}

impl TryFrom<RawAlphabet> for AlphabetParams {
    type Error = CompositeError;

    fn try_from(raw: RawAlphabet) -> Result<Self> {
        AlphabetParams::new(raw.q, raw.m)
    }
}

impl AlphabetParams {
    pub fn new(q: usize, m: u32) -> Result<Self> {
        if q < 2 {
            return Err(CompositeError::BaseAlphabetTooSmall(q));
        }
        if m < 1 {
            return Err(CompositeError::ResolutionTooSmall(m));
        }
        Ok(Self { q, m })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn resolution(&self) -> u32 {
        self.m
    }

    pub fn check_base(&self, base: usize) -> Result<()> {
        if base == 0 || base > self.q {
            Err(CompositeError::InvalidBase { base, q: self.q })
        } else {
            Ok(())
        }
    }
}

/// One column of a composite matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct CompositeSymbol {
    counts: Vec<u32>,
}

impl CompositeSymbol {
    pub fn new(counts: Vec<u32>, params: &AlphabetParams) -> Result<Self> {
        if counts.len() != params.q {
            return Err(CompositeError::WrongLength {
                got: counts.len(),
                expected: params.q,
            });
        }
        let sum: u64 = counts.iter().map(|&c| u64::from(c)).sum();
        if sum != u64::from(params.m) {
            return Err(CompositeError::WrongSum {
                got: sum,
                expected: params.m,
            });
        }
        Ok(Self { counts })
    }

    /// The classical symbol putting full weight `M` on `base` (1-based).
    pub fn pure(base: usize, params: &AlphabetParams) -> Result<Self> {
        params.check_base(base)?;
        let mut counts = vec![0; params.q];
        counts[base - 1] = params.m;
        Ok(Self { counts })
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    /// Count assigned to a 1-based base index.
    pub fn weight(&self, base: usize) -> u32 {
        self.counts[base - 1]
    }

    /// Base probabilities `counts / M`.
    pub fn probabilities(&self) -> Vec<f64> {
        let m: u32 = self.counts.iter().sum();
        self.counts
            .iter()
            .map(|&c| f64::from(c) / f64::from(m))
            .collect()
    }

    /// Returns the base carrying all the weight, if the symbol is classical.
    pub fn pure_base(&self) -> Option<usize> {
        let mut nonzero = self.counts.iter().enumerate().filter(|(_, &c)| c > 0);
        match (nonzero.next(), nonzero.next()) {
            (Some((i, _)), None) => Some(i + 1),
            _ => None,
        }
    }
}

impl fmt::Display for CompositeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A `q x n` matrix whose columns are composite symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct CompositeMatrix {
    params: AlphabetParams,
    columns: Vec<CompositeSymbol>,
}

#[derive(Serialize, Deserialize)]
struct RawMatrix {
    q: usize,
    #[serde(rename = "M")]
    m: u32,
    columns: Vec<Vec<u32>>,
}

impl TryFrom<RawMatrix> for CompositeMatrix {
    type Error = CompositeError;

    fn try_from(raw: RawMatrix) -> Result<Self> {
        let params = AlphabetParams::new(raw.q, raw.m)?;
        CompositeMatrix::from_counts(params, raw.columns)
    }
}

impl From<CompositeMatrix> for RawMatrix {
    fn from(matrix: CompositeMatrix) -> Self {
        RawMatrix {
            q: matrix.params.q,
            m: matrix.params.m,
            columns: matrix.columns.into_iter().map(|c| c.counts).collect(),
        }
    }
}

impl CompositeMatrix {
    pub fn new(params: AlphabetParams, columns: Vec<CompositeSymbol>) -> Result<Self> {
        if columns.is_empty() {
            return Err(CompositeError::EmptyMatrix);
        }
        for (j, col) in columns.iter().enumerate() {
            // re-validate: symbols may have been built for other params
            CompositeSymbol::new(col.counts.clone(), &params).map_err(|e| {
                CompositeError::Column {
                    column: j + 1,
                    source: Box::new(e),
                }
            })?;
        }
        Ok(Self { params, columns })
    }

    pub fn from_counts(params: AlphabetParams, columns: Vec<Vec<u32>>) -> Result<Self> {
        let columns = columns
            .into_iter()
            .enumerate()
            .map(|(j, counts)| {
                CompositeSymbol::new(counts, &params).map_err(|e| CompositeError::Column {
                    column: j + 1,
                    source: Box::new(e),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if columns.is_empty() {
            return Err(CompositeError::EmptyMatrix);
        }
        Ok(Self { params, columns })
    }

    pub fn params(&self) -> &AlphabetParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn columns(&self) -> &[CompositeSymbol] {
        &self.columns
    }

    /// Column at a 1-based position.
    pub fn column(&self, position: usize) -> &CompositeSymbol {
        &self.columns[position - 1]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization is infallible")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One column per line, comma-separated counts, `\n` terminated.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .has_headers(false)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        for col in &self.columns {
            writer
                .serialize(&col.counts)
                .expect("writing to memory cannot fail");
        }
        String::from_utf8(writer.into_inner().expect("flush to memory"))
            .expect("csv output is ascii")
    }

    /// Parses the CSV form; `q` is the row width and `M` the first row's sum.
    pub fn from_csv(text: &str) -> Result<Self, MatrixCsvError> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .from_reader(text.as_bytes());
        let mut columns = Vec::new();
        for record in reader.deserialize::<Vec<u32>>() {
            columns.push(record?);
        }
        let first = columns.first().ok_or(CompositeError::EmptyMatrix)?;
        let m: u64 = first.iter().map(|&c| u64::from(c)).sum();
        let m = u32::try_from(m).map_err(|_| CompositeError::WrongSum {
            got: m,
            expected: u32::MAX,
        })?;
        let params = AlphabetParams::new(first.len(), m)?;
        Ok(Self::from_counts(params, columns)?)
    }
}

#[derive(Debug, Error)]
pub enum MatrixCsvError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Composite(#[from] CompositeError),
}

pub(crate) fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn binomial_u64(n: u64, k: u64) -> u64 {
    binomial(n, k)
        .to_u64()
        .expect("caller bounded the alphabet size")
}

/// `Q = C(M + q - 1, q - 1)`.
pub fn alphabet_size(params: &AlphabetParams) -> BigUint {
    compositions(params.q, params.m)
}

/// Number of symbols giving `excluded_base` nonzero weight,
/// `C(M + q - 1, q - 1) - C(M + q - 2, q - 2)`.
pub fn restricted_symbol_count(params: &AlphabetParams, excluded_base: usize) -> Result<BigUint> {
    params.check_base(excluded_base)?;
    Ok(alphabet_size(params) - compositions(params.q - 1, params.m))
}

/// Number of compositions of `m` into `parts` ordered nonnegative parts.
fn compositions(parts: usize, m: u32) -> BigUint {
    if parts == 0 {
        return if m == 0 {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    binomial(u64::from(m) + parts as u64 - 1, parts as u64 - 1)
}

fn compositions_u64(parts: usize, m: u32) -> Result<u64> {
    let size = compositions(parts, m);
    size.to_u64().ok_or(CompositeError::AlphabetTooLarge(size))
}

fn rank_counts(counts: &[u32]) -> u64 {
    // bar i (1-based) sits after x_1 + .. + x_i stars and i - 1 earlier bars
    let mut rank = 0u64;
    let mut prefix = 0u64;
    for (i, &c) in counts
        .iter()
        .take(counts.len().saturating_sub(1))
        .enumerate()
    {
        prefix += u64::from(c);
        let bar = prefix + i as u64;
        rank += binomial_u64(bar, i as u64 + 1);
    }
    rank
}

fn unrank_counts(mut index: u64, parts: usize, m: u32) -> Vec<u32> {
    if parts == 1 {
        return vec![m];
    }
    let top = u64::from(m) + parts as u64 - 2;
    let mut bars = vec![0u64; parts - 1];
    let mut hi = top;
    for i in (1..parts).rev() {
        // largest b <= hi with C(b, i) <= index
        let mut b = hi;
        while binomial_u64(b, i as u64) > index {
            b -= 1;
        }
        index -= binomial_u64(b, i as u64);
        bars[i - 1] = b;
        hi = b.saturating_sub(1);
    }
    let mut counts = Vec::with_capacity(parts);
    let mut prev: i64 = -1;
    for &b in &bars {
        counts.push((b as i64 - prev - 1) as u32);
        prev = b as i64;
    }
    counts.push((top as i64 - prev) as u32);
    counts
}

/// Position of `symbol` in [`enumerate_symbols`] order.
pub fn rank_symbol(symbol: &CompositeSymbol, params: &AlphabetParams) -> Result<u64> {
    let symbol = CompositeSymbol::new(symbol.counts.clone(), params)?;
    compositions_u64(params.q, params.m)?;
    Ok(rank_counts(&symbol.counts))
}

pub fn unrank_symbol(index: u64, params: &AlphabetParams) -> Result<CompositeSymbol> {
    let size = compositions_u64(params.q, params.m)?;
    if index >= size {
        return Err(CompositeError::IndexOutOfRange {
            index,
            size: size.into(),
        });
    }
    Ok(CompositeSymbol {
        counts: unrank_counts(index, params.q, params.m),
    })
}

/// Rank among the `Q - R` symbols with zero weight on `base`. The order is
/// the one [`enumerate_symbols`] induces on that subset.
pub fn rank_symbol_excluding(
    symbol: &CompositeSymbol,
    params: &AlphabetParams,
    base: usize,
) -> Result<u64> {
    params.check_base(base)?;
    let symbol = CompositeSymbol::new(symbol.counts.clone(), params)?;
    if symbol.weight(base) != 0 {
        return Err(CompositeError::InvalidBase { base, q: params.q });
    }
    compositions_u64(params.q - 1, params.m)?;
    let reduced: Vec<u32> = symbol
        .counts
        .iter()
        .enumerate()
        .filter(|&(i, _)| i + 1 != base)
        .map(|(_, &c)| c)
        .collect();
    Ok(rank_counts(&reduced))
}

pub fn unrank_symbol_excluding(
    index: u64,
    params: &AlphabetParams,
    base: usize,
) -> Result<CompositeSymbol> {
    params.check_base(base)?;
    let size = compositions_u64(params.q - 1, params.m)?;
    if index >= size {
        return Err(CompositeError::IndexOutOfRange {
            index,
            size: size.into(),
        });
    }
    let mut counts = unrank_counts(index, params.q - 1, params.m);
    counts.insert(base - 1, 0);
    Ok(CompositeSymbol { counts })
}

/// All `Q` symbols in rank order.
pub fn enumerate_symbols(params: &AlphabetParams) -> Result<Vec<CompositeSymbol>> {
    let size = compositions_u64(params.q, params.m)?;
    Ok((0..size)
        .map(|index| CompositeSymbol {
            counts: unrank_counts(index, params.q, params.m),
        })
        .collect())
}

/// Largest-remainder apportionment of exact integer weights onto `M` units.
///
/// Every base gets `floor(w_i M / W)`; the leftover units go to the largest
/// remainders, lower base index first on ties. This minimizes the L1
/// distance between `counts / M` and `w / W`.
pub fn quantize_weights(weights: &[BigUint], params: &AlphabetParams) -> Result<CompositeSymbol> {
    if weights.len() != params.q {
        return Err(CompositeError::WrongLength {
            got: weights.len(),
            expected: params.q,
        });
    }
    let total: BigUint = weights.iter().sum();
    if total.is_zero() {
        return Err(CompositeError::ZeroMass);
    }
    let m = BigUint::from(params.m);
    let mut counts = Vec::with_capacity(params.q);
    let mut remainders = Vec::with_capacity(params.q);
    for w in weights {
        let scaled = w * &m;
        let floor = &scaled / &total;
        remainders.push(scaled - &floor * &total);
        counts.push(floor.to_u32().expect("floor is at most M"));
    }
    let assigned: u32 = counts.iter().sum();
    let mut order: Vec<usize> = (0..params.q).collect();
    // stable sort keeps lower indices first among equal remainders
    order.sort_by(|&a, &b| remainders[b].cmp(&remainders[a]));
    for &i in order.iter().take((params.m - assigned) as usize) {
        counts[i] += 1;
    }
    Ok(CompositeSymbol { counts })
}

/// [`quantize_weights`] for integer counts, e.g. observed base tallies.
pub fn quantize_counts(counts: &[u64], params: &AlphabetParams) -> Result<CompositeSymbol> {
    let weights: Vec<BigUint> = counts.iter().map(|&c| BigUint::from(c)).collect();
    quantize_weights(&weights, params)
}

/// Maps real base frequencies (not necessarily normalized) to the nearest
/// resolution-`M` symbol. Floats are converted exactly, so ties are decided
/// on exact values rather than on rounding noise.
pub fn quantize_to_symbol(frequencies: &[f64], params: &AlphabetParams) -> Result<CompositeSymbol> {
    if frequencies.iter().any(|f| !f.is_finite() || *f < 0.0) {
        return Err(CompositeError::InvalidFrequency);
    }
    let decoded: Vec<(u64, i16)> = frequencies
        .iter()
        .map(|f| {
            let (mantissa, exponent, _) = f.integer_decode();
            (mantissa, exponent)
        })
        .collect();
    let min_exp = decoded
        .iter()
        .filter(|(m, _)| *m != 0)
        .map(|&(_, e)| e)
        .min()
        .ok_or(CompositeError::ZeroMass)?;
    let weights: Vec<BigUint> = decoded
        .iter()
        .map(|&(mantissa, exponent)| {
            if mantissa == 0 {
                BigUint::zero()
            } else {
                BigUint::from(mantissa) << ((exponent - min_exp) as usize)
            }
        })
        .collect();
    quantize_weights(&weights, params)
}
