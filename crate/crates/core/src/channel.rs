//! Composite strand-break channel simulator.
//!
//! Pipeline: a codeword is synthesized into `S` i.i.d. strands, each strand
//! is cut at random backbone bonds, the fragments are pooled without
//! positional metadata, `K` of them are sampled, and the decoder positions
//! them by their markers and re-estimates the composite matrix from the
//! aligned base counts.
//!
//! Randomness comes from ChaCha8 keyed by `(seed, stage)`, with the strand
//! index as the stream number. Strand `i` therefore sees the same draws no
//! matter how strands are scheduled across threads.

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::composite::{quantize_counts, CompositeError, CompositeMatrix};
use crate::exec::{fold_merge, map_range, Execution};
use crate::marker::{
    classify_fragment, construct_codeword, layout, message_radices, ColumnRole, FragmentClass,
    MarkerCodeParams, MarkerError, Message,
};
use crate::numeric::format_sig;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChannelError {
    #[error(transparent)]
    Marker(#[from] MarkerError),
    #[error(transparent)]
    Composite(#[from] CompositeError),
    #[error("break probability {0} outside [0, 1]")]
    Probability(f64),
    #[error("break count {t} exceeds the {bonds} available bonds")]
    TooManyBreaks { t: usize, bonds: usize },
    #[error("bond range [{first}, {last}] invalid for a strand with bonds 1..={max}")]
    BondRange {
        first: usize,
        last: usize,
        max: usize,
    },
    #[error("strand count must be at least 1")]
    NoStrands,
    #[error("sample size must be at least 1")]
    EmptySample,
    #[error("cannot draw {k} fragments without replacement from a pool of {pool}")]
    SampleTooLarge { k: usize, pool: usize },
    #[error("fragment pool is empty")]
    EmptyPool,
    #[error("no aligned fragment covers data column {0}")]
    ZeroCoverage(usize),
    #[error("breaker column {0} only observed the marker base")]
    BreakerMass(usize),
}

pub type Result<T, E = ChannelError> = std::result::Result<T, E>;

/// A synthesized strand; bases are 1-based indices in `[1, q]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Strand {
    pub bases: Vec<u8>,
}

/// A strand piece as the decoder receives it: bases only.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fragment {
    pub bases: Vec<u8>,
}

/// Ground-truth bookkeeping for verification: a fragment plus the
/// 1-based columns it came from. The decoder never sees this type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrackedFragment {
    pub fragment: Fragment,
    pub strand: usize,
    pub first: usize,
    pub last: usize,
}

impl TrackedFragment {
    /// The class a perfect decoder would assign given the true origin.
    pub fn true_class(&self, params: &MarkerCodeParams) -> FragmentClass {
        let n = params.n();
        let len = self.last + 1 - self.first;
        let marker = params.marker_len();
        match (self.first == 1, self.last == n) {
            (true, true) => FragmentClass::Full,
            _ if len < marker => FragmentClass::Discard,
            (true, false) | (false, true) if len == marker => FragmentClass::MarkerOnly,
            (true, false) => FragmentClass::Prefix,
            (false, true) => FragmentClass::Suffix,
            (false, false) => FragmentClass::Discard,
        }
    }
}

/// Inclusive range of 1-based bonds; bond `b` joins columns `b` and `b+1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BondRange {
    pub first: usize,
    pub last: usize,
}

impl BondRange {
    /// Bonds with a data column on at least one side.
    pub fn data_bonds(params: &MarkerCodeParams) -> Self {
        BondRange {
            first: params.ell() + 2,
            last: params.n() - params.ell() - 2,
        }
    }

    fn len(&self) -> usize {
        self.last + 1 - self.first
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BreakModel {
    /// Each of the `n - 1` bonds breaks independently with probability `p`.
    PerBond { p: f64 },
    /// Exactly `t` distinct bonds, uniformly chosen.
    ExactlyT {
        t: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bonds: Option<BondRange>,
    },
    /// A uniform count in `0..=t`, then that many distinct bonds.
    AtMostT {
        t: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bonds: Option<BondRange>,
    },
}

impl BreakModel {
    pub fn validate(&self, n: usize) -> Result<()> {
        let max = n.saturating_sub(1);
        let check_range = |t: usize, bonds: &Option<BondRange>| {
            let available = match bonds {
                Some(range) => {
                    if range.first == 0 || range.first > range.last || range.last > max {
                        return Err(ChannelError::BondRange {
                            first: range.first,
                            last: range.last,
                            max,
                        });
                    }
                    range.len()
                }
                None => max,
            };
            if t > available {
                Err(ChannelError::TooManyBreaks {
                    t,
                    bonds: available,
                })
            } else {
                Ok(())
            }
        };
        match self {
            BreakModel::PerBond { p } if !(0.0..=1.0).contains(p) => {
                Err(ChannelError::Probability(*p))
            }
            BreakModel::PerBond { .. } => Ok(()),
            BreakModel::ExactlyT { t, bonds } | BreakModel::AtMostT { t, bonds } => {
                check_range(*t, bonds)
            }
        }
    }

    /// Sorted, distinct cut bonds for a strand of length `n`.
    fn cut_bonds<R: Rng>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        let (t, range) = match *self {
            BreakModel::PerBond { p } => {
                return (1..n).filter(|_| rng.random_bool(p)).collect();
            }
            BreakModel::ExactlyT { t, bonds } => (t, bonds),
            BreakModel::AtMostT { t, bonds } => (rng.random_range(0..=t), bonds),
        };
        let range = range.unwrap_or(BondRange {
            first: 1,
            last: n - 1,
        });
        let mut cuts: Vec<usize> = index::sample(rng, range.len(), t)
            .into_iter()
            .map(|i| range.first + i)
            .collect();
        cuts.sort_unstable();
        cuts
    }
}

/// Random draws of one pipeline stage.
#[derive(Debug, Clone, Copy)]
#[repr(u64)]
enum Stage {
    Message = 1,
    Synthesis = 2,
    Breaks = 3,
    Sampling = 4,
}

/// RNG for `(seed, stage, stream)`; the key mixes seed and stage with
/// SplitMix64, the ChaCha stream number is the strand index.
fn substream(seed: u64, stage: Stage, stream: u64) -> ChaCha8Rng {
    let mut z = seed ^ (stage as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    let mut rng = ChaCha8Rng::seed_from_u64(z);
    rng.set_stream(stream);
    rng
}

/// Per-column cumulative counts for drawing bases.
struct ColumnSampler {
    cumulative: Vec<Vec<u32>>,
    resolution: u32,
}

impl ColumnSampler {
    fn new(matrix: &CompositeMatrix) -> Self {
        let cumulative = matrix
            .columns()
            .iter()
            .map(|col| {
                col.counts()
                    .iter()
                    .scan(0u32, |acc, &c| {
                        *acc += c;
                        Some(*acc)
                    })
                    .collect()
            })
            .collect();
        Self {
            cumulative,
            resolution: matrix.params().resolution(),
        }
    }

    fn draw<R: Rng>(&self, rng: &mut R) -> Strand {
        let bases = self
            .cumulative
            .iter()
            .map(|cum| {
                let u = rng.random_range(0..self.resolution);
                (cum.partition_point(|&c| c <= u) + 1) as u8
            })
            .collect();
        Strand { bases }
    }
}

/// Draws one strand from an explicit RNG.
pub fn synthesize_one<R: Rng>(matrix: &CompositeMatrix, rng: &mut R) -> Strand {
    ColumnSampler::new(matrix).draw(rng)
}

/// `count` i.i.d. strands; strand `i` depends only on `(seed, i)`.
pub fn synthesize(
    matrix: &CompositeMatrix,
    count: usize,
    seed: u64,
    exec: Execution,
) -> Vec<Strand> {
    let sampler = ColumnSampler::new(matrix);
    map_range(exec, count, |i| {
        sampler.draw(&mut substream(seed, Stage::Synthesis, i as u64))
    })
}

fn split_at_bonds(bases: &[u8], cuts: &[usize]) -> Vec<(usize, usize)> {
    let mut pieces = Vec::with_capacity(cuts.len() + 1);
    let mut first = 1;
    for &bond in cuts {
        pieces.push((first, bond));
        first = bond + 1;
    }
    pieces.push((first, bases.len()));
    pieces
}

/// Cuts a strand; fragments come out in strand order.
pub fn apply_breaks<R: Rng>(strand: &Strand, model: &BreakModel, rng: &mut R) -> Vec<Fragment> {
    apply_breaks_tracked(strand, 0, model, rng)
        .into_iter()
        .map(|t| t.fragment)
        .collect()
}

pub fn apply_breaks_tracked<R: Rng>(
    strand: &Strand,
    strand_index: usize,
    model: &BreakModel,
    rng: &mut R,
) -> Vec<TrackedFragment> {
    let cuts = model.cut_bonds(strand.bases.len(), rng);
    split_at_bonds(&strand.bases, &cuts)
        .into_iter()
        .map(|(first, last)| TrackedFragment {
            fragment: Fragment {
                bases: strand.bases[first - 1..last].to_vec(),
            },
            strand: strand_index,
            first,
            last,
        })
        .collect()
}

/// Uniform sample of `k` fragments in random order.
pub fn sample_fragments<R: Rng>(
    pool: &[Fragment],
    k: usize,
    with_replacement: bool,
    rng: &mut R,
) -> Result<Vec<Fragment>> {
    Ok(sample_indices(pool.len(), k, with_replacement, rng)?
        .into_iter()
        .map(|i| pool[i].clone())
        .collect())
}

fn sample_indices<R: Rng>(
    pool: usize,
    k: usize,
    with_replacement: bool,
    rng: &mut R,
) -> Result<Vec<usize>> {
    if pool == 0 {
        return Err(ChannelError::EmptyPool);
    }
    if k == 0 {
        return Err(ChannelError::EmptySample);
    }
    if with_replacement {
        return Ok((0..k).map(|_| rng.random_range(0..pool)).collect());
    }
    if k > pool {
        return Err(ChannelError::SampleTooLarge { k, pool });
    }
    let mut picked = index::sample(rng, pool, k).into_vec();
    picked.shuffle(rng);
    Ok(picked)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassTallies {
    pub full: u64,
    pub prefix: u64,
    pub suffix: u64,
    pub marker_only: u64,
    pub discard: u64,
}

impl ClassTallies {
    fn record(&mut self, class: FragmentClass) {
        match class {
            FragmentClass::Full => self.full += 1,
            FragmentClass::Prefix => self.prefix += 1,
            FragmentClass::Suffix => self.suffix += 1,
            FragmentClass::MarkerOnly => self.marker_only += 1,
            FragmentClass::Discard => self.discard += 1,
        }
    }

    fn merge(self, o: Self) -> Self {
        Self {
            full: self.full + o.full,
            prefix: self.prefix + o.prefix,
            suffix: self.suffix + o.suffix,
            marker_only: self.marker_only + o.marker_only,
            discard: self.discard + o.discard,
        }
    }

    pub fn total(&self) -> u64 {
        self.full + self.prefix + self.suffix + self.marker_only + self.discard
    }
}

/// Aligned base counts: `counts[(j - 1) * q + (b - 1)]` for column `j`, base `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    q: usize,
    n: usize,
    counts: Vec<u64>,
    pub tallies: ClassTallies,
}

impl CountTable {
    fn empty(q: usize, n: usize) -> Self {
        Self {
            q,
            n,
            counts: vec![0; q * n],
            tallies: ClassTallies::default(),
        }
    }

    pub fn column(&self, position: usize) -> &[u64] {
        &self.counts[(position - 1) * self.q..position * self.q]
    }

    pub fn coverage(&self, position: usize) -> u64 {
        self.column(position).iter().sum()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn add(&mut self, first: usize, bases: &[u8]) {
        for (offset, &b) in bases.iter().enumerate() {
            self.counts[(first - 1 + offset) * self.q + (b as usize - 1)] += 1;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.tallies = self.tallies.merge(other.tallies);
        self
    }
}

/// Classifies each fragment and adds positioned ones to the count table.
/// Fragments that fail classification (too long, bad base) count as
/// discards.
pub fn align_and_count(
    samples: &[Fragment],
    params: &MarkerCodeParams,
    exec: Execution,
) -> CountTable {
    let (q, n) = (params.alphabet().q(), params.n());
    fold_merge(
        exec,
        samples,
        || CountTable::empty(q, n),
        |mut table, fragment| {
            match classify_fragment(&fragment.bases, params) {
                Ok(c) => {
                    table.tallies.record(c.class);
                    if let Some((first, _)) = c.interval {
                        table.add(first, &fragment.bases);
                    }
                }
                Err(_) => table.tallies.record(FragmentClass::Discard),
            }
            table
        },
        CountTable::merge,
    )
}

/// Marker columns are copied from the code; every data column is the
/// largest-remainder quantization of its observed base counts, with the
/// marker base zeroed first at breaker columns.
pub fn estimate_matrix(table: &CountTable, params: &MarkerCodeParams) -> Result<CompositeMatrix> {
    let map = layout(params);
    let alphabet = params.alphabet();
    let mut columns = Vec::with_capacity(params.n());
    for j in 1..=params.n() {
        if let Some(symbol) = params.marker_symbol(j) {
            columns.push(symbol);
            continue;
        }
        let mut observed = table.column(j).to_vec();
        if observed.iter().all(|&c| c == 0) {
            return Err(ChannelError::ZeroCoverage(j));
        }
        if map.role(j) == ColumnRole::Breaker {
            observed[params.marker_base() - 1] = 0;
            if observed.iter().all(|&c| c == 0) {
                return Err(ChannelError::BreakerMass(j));
            }
        }
        columns.push(quantize_counts(&observed, alphabet)?);
    }
    Ok(CompositeMatrix::new(*alphabet, columns)?)
}

fn default_with_replacement() -> bool {
    false
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelConfig {
    pub code_params: MarkerCodeParams,
    pub strand_count: usize,
    pub break_model: BreakModel,
    /// `K`; absent means the whole pool.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_size: Option<usize>,
    #[serde(default = "default_with_replacement")]
    pub with_replacement: bool,
    pub seed: u64,
    /// Data symbols to transmit; drawn from the seed when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub message: Option<Message>,
}

impl ChannelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.strand_count == 0 {
            return Err(ChannelError::NoStrands);
        }
        if self.sample_size == Some(0) {
            return Err(ChannelError::EmptySample);
        }
        self.break_model.validate(self.code_params.n())
    }

    /// The transmitted message: the configured one or a uniform draw.
    pub fn message(&self) -> Message {
        if let Some(m) = &self.message {
            return m.clone();
        }
        let mut rng = substream(self.seed, Stage::Message, 0);
        Message::new(
            message_radices(&self.code_params)
                .into_iter()
                .map(|radix| rng.random_range(0..radix))
                .collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub fragments_sampled: u64,
    pub discarded_fraction: f64,
    pub marker_only_fraction: f64,
    /// Minimum and mean aligned coverage over the data columns.
    pub coverage_min: f64,
    pub coverage_mean: f64,
    /// Columns where the estimate differs from the transmitted codeword.
    pub symbol_error_count: usize,
    pub exact_recovery: bool,
    pub tallies: ClassTallies,
    pub estimated_matrix: CompositeMatrix,
}

/// Everything the channel emits for one configuration.
#[derive(Debug, Clone)]
pub struct Transmission {
    pub codeword: CompositeMatrix,
    /// Sampled fragments with their origins, in sample order.
    pub samples: Vec<TrackedFragment>,
}

impl Transmission {
    /// The decoder's view: bases only.
    pub fn fragments(&self) -> Vec<Fragment> {
        self.samples.iter().map(|t| t.fragment.clone()).collect()
    }
}

/// Runs construct, synthesize, break, pool and sample.
pub fn transmit(config: &ChannelConfig, exec: Execution) -> Result<Transmission> {
    config.validate()?;
    let params = &config.code_params;
    let codeword = construct_codeword(&config.message(), params)?;
    let sampler = ColumnSampler::new(&codeword);
    let seed = config.seed;
    let model = config.break_model;
    let per_strand: Vec<Vec<TrackedFragment>> = map_range(exec, config.strand_count, |i| {
        let strand = sampler.draw(&mut substream(seed, Stage::Synthesis, i as u64));
        apply_breaks_tracked(
            &strand,
            i,
            &model,
            &mut substream(seed, Stage::Breaks, i as u64),
        )
    });
    let pool: Vec<TrackedFragment> = per_strand.into_iter().flatten().collect();
    let k = config.sample_size.unwrap_or(pool.len());
    let mut rng = substream(seed, Stage::Sampling, 0);
    let picked = sample_indices(pool.len(), k, config.with_replacement, &mut rng)?;
    let samples = picked.into_iter().map(|i| pool[i].clone()).collect();
    Ok(Transmission { codeword, samples })
}

pub fn run_experiment(config: &ChannelConfig) -> Result<ExperimentReport> {
    run_experiment_with(config, Execution::default())
}

pub fn run_experiment_with(config: &ChannelConfig, exec: Execution) -> Result<ExperimentReport> {
    let transmission = transmit(config, exec)?;
    let params = &config.code_params;
    let fragments = transmission.fragments();
    let table = align_and_count(&fragments, params, exec);
    let estimated = estimate_matrix(&table, params)?;

    let map = layout(params);
    let coverage: Vec<u64> = map.data_positions().map(|j| table.coverage(j)).collect();
    let coverage_min = coverage.iter().copied().min().unwrap_or(0) as f64;
    let coverage_mean = coverage.iter().sum::<u64>() as f64 / coverage.len() as f64;
    let symbol_error_count = transmission
        .codeword
        .columns()
        .iter()
        .zip(estimated.columns())
        .filter(|(a, b)| a != b)
        .count();
    let sampled = fragments.len() as u64;
    Ok(ExperimentReport {
        fragments_sampled: sampled,
        discarded_fraction: table.tallies.discard as f64 / sampled as f64,
        marker_only_fraction: table.tallies.marker_only as f64 / sampled as f64,
        coverage_min,
        coverage_mean,
        symbol_error_count,
        exact_recovery: symbol_error_count == 0,
        tallies: table.tallies,
        estimated_matrix: estimated,
    })
}

pub const REPORT_CSV_HEADER: [&str; 21] = [
    "q",
    "M",
    "n",
    "ell",
    "break_model",
    "strand_count",
    "sample_size",
    "with_replacement",
    "seed",
    "fragments_sampled",
    "discarded_fraction",
    "marker_only_fraction",
    "coverage_min",
    "coverage_mean",
    "symbol_error_count",
    "exact_recovery",
    "full",
    "prefix",
    "suffix",
    "marker_only",
    "discard",
];

/// One row per `(config, report)`; floats with 12 significant digits. The
/// break model is written as its compact JSON form.
pub fn write_report_csv<W: std::io::Write>(
    rows: &[(ChannelConfig, ExperimentReport)],
    out: W,
) -> csv::Result<()> {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    writer.write_record(REPORT_CSV_HEADER)?;
    for (config, report) in rows {
        let p = &config.code_params;
        let t = &report.tallies;
        writer.write_record([
            p.alphabet().q().to_string(),
            p.alphabet().resolution().to_string(),
            p.n().to_string(),
            p.ell().to_string(),
            serde_json::to_string(&config.break_model).expect("plain enum"),
            config.strand_count.to_string(),
            config
                .sample_size
                .map(|k| k.to_string())
                .unwrap_or_default(),
            config.with_replacement.to_string(),
            config.seed.to_string(),
            report.fragments_sampled.to_string(),
            format_sig(report.discarded_fraction, 12),
            format_sig(report.marker_only_fraction, 12),
            format_sig(report.coverage_min, 12),
            format_sig(report.coverage_mean, 12),
            report.symbol_error_count.to_string(),
            report.exact_recovery.to_string(),
            t.full.to_string(),
            t.prefix.to_string(),
            t.suffix.to_string(),
            t.marker_only.to_string(),
            t.discard.to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::composite::AlphabetParams;

    fn code(n: usize, ell: usize) -> MarkerCodeParams {
        MarkerCodeParams::new(AlphabetParams::new(4, 6).unwrap(), n, ell).unwrap()
    }

    #[test]
    fn deterministic_columns_are_copied() {
        let p = code(30, 3);
        let word = construct_codeword(&Message::zeros(&p), &p).unwrap();
        for strand in synthesize(&word, 50, 7, Execution::Sequential) {
            assert_eq!(strand.bases.len(), 30);
            // zero message puts all weight on base 4 in data columns
            for (j, &b) in strand.bases.iter().enumerate() {
                let expected = word.column(j + 1).pure_base().unwrap() as u8;
                assert_eq!(b, expected);
            }
        }
    }

    #[test]
    fn break_partitions() {
        let strand = Strand {
            bases: (0..20).map(|i| (i % 4 + 1) as u8).collect(),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let none = apply_breaks(
            &strand,
            &BreakModel::ExactlyT { t: 0, bonds: None },
            &mut rng,
        );
        assert_eq!(
            none,
            vec![Fragment {
                bases: strand.bases.clone()
            }]
        );
        for t in 1..=5 {
            let pieces = apply_breaks(&strand, &BreakModel::ExactlyT { t, bonds: None }, &mut rng);
            assert_eq!(pieces.len(), t + 1);
            let joined: Vec<u8> = pieces.iter().flat_map(|f| f.bases.clone()).collect();
            assert_eq!(joined, strand.bases);
            assert!(pieces.iter().all(|f| !f.bases.is_empty()));
        }
        let range = BondRange { first: 5, last: 6 };
        for _ in 0..50 {
            let pieces = apply_breaks_tracked(
                &strand,
                0,
                &BreakModel::ExactlyT {
                    t: 1,
                    bonds: Some(range),
                },
                &mut rng,
            );
            assert!(pieces[0].last == 5 || pieces[0].last == 6);
        }
    }

    #[test]
    fn break_model_validation() {
        assert!(BreakModel::PerBond { p: 1.5 }.validate(10).is_err());
        assert!(BreakModel::PerBond { p: 0.0 }.validate(10).is_ok());
        assert!(BreakModel::ExactlyT { t: 9, bonds: None }
            .validate(10)
            .is_ok());
        assert!(matches!(
            BreakModel::ExactlyT { t: 10, bonds: None }.validate(10),
            Err(ChannelError::TooManyBreaks { .. })
        ));
        let bad = BondRange { first: 3, last: 10 };
        assert!(matches!(
            BreakModel::AtMostT {
                t: 1,
                bonds: Some(bad)
            }
            .validate(10),
            Err(ChannelError::BondRange { .. })
        ));
    }

    #[test]
    fn sampling_rules() {
        let pool: Vec<Fragment> = (0..10u8).map(|i| Fragment { bases: vec![i + 1] }).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut perm = sample_fragments(&pool, 10, false, &mut rng).unwrap();
        perm.sort_by(|a, b| a.bases.cmp(&b.bases));
        assert_eq!(perm, pool);
        assert!(matches!(
            sample_fragments(&pool, 11, false, &mut rng),
            Err(ChannelError::SampleTooLarge { k: 11, pool: 10 })
        ));
        assert_eq!(
            sample_fragments(&pool, 25, true, &mut rng).unwrap().len(),
            25
        );
        assert_eq!(
            sample_fragments(&[], 1, true, &mut rng),
            Err(ChannelError::EmptyPool)
        );
        let a = sample_fragments(&pool, 5, false, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = sample_fragments(&pool, 5, false, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn alignment_of_split_strand() {
        let p = code(40, 3);
        let word = construct_codeword(&Message::zeros(&p), &p).unwrap();
        let strand = synthesize(&word, 1, 0, Execution::Sequential).remove(0);
        let left = Fragment {
            bases: strand.bases[..10].to_vec(),
        };
        let right = Fragment {
            bases: strand.bases[10..].to_vec(),
        };
        let noise = Fragment { bases: vec![4; 12] };
        let table = align_and_count(&[left, right, noise], &p, Execution::Sequential);
        for j in 1..=40 {
            assert_eq!(table.coverage(j), 1);
            let b = strand.bases[j - 1] as usize;
            assert_eq!(table.column(j)[b - 1], 1);
        }
        assert_eq!(table.tallies.prefix, 1);
        assert_eq!(table.tallies.suffix, 1);
        assert_eq!(table.tallies.discard, 1);
    }

    #[test]
    fn estimate_requires_coverage() {
        let p = code(40, 3);
        let word = construct_codeword(&Message::zeros(&p), &p).unwrap();
        let strand = synthesize(&word, 1, 0, Execution::Sequential).remove(0);
        let left = Fragment {
            bases: strand.bases[..10].to_vec(),
        };
        let table = align_and_count(&[left], &p, Execution::Sequential);
        assert_eq!(
            estimate_matrix(&table, &p),
            Err(ChannelError::ZeroCoverage(11))
        );
    }

    #[test]
    fn breaker_projection() {
        let p = code(40, 3);
        let word = construct_codeword(&Message::zeros(&p), &p).unwrap();
        let mut strand = synthesize(&word, 1, 0, Execution::Sequential).remove(0);
        let breaker = layout(&p).breaker_positions[0];
        let full = Fragment {
            bases: strand.bases.clone(),
        };
        strand.bases[breaker - 1] = 1;
        let tainted = Fragment {
            bases: strand.bases.clone(),
        };
        let table = align_and_count(&[full, tainted.clone(), tainted], &p, Execution::Sequential);
        let est = estimate_matrix(&table, &p).unwrap();
        assert_eq!(est.column(breaker).weight(1), 0);
        assert_eq!(est, word);
    }

    #[test]
    fn seeds_change_output() {
        let p = code(60, 3);
        let config = ChannelConfig {
            code_params: p,
            strand_count: 200,
            break_model: BreakModel::PerBond { p: 0.02 },
            sample_size: None,
            with_replacement: false,
            seed: 1,
            message: None,
        };
        let a = transmit(&config, Execution::Sequential).unwrap();
        let b = transmit(
            &ChannelConfig {
                seed: 2,
                ..config.clone()
            },
            Execution::Sequential,
        )
        .unwrap();
        assert_ne!(a.fragments(), b.fragments());
        let c = transmit(&config, Execution::Parallel).unwrap();
        assert_eq!(a.fragments(), c.fragments());
    }

    #[test]
    fn config_json_defaults() {
        let text = r#"{
            "code_params": {"q": 4, "M": 6, "n": 60, "ell": 3},
            "strand_count": 10,
            "break_model": {"kind": "exactly_t", "t": 1},
            "seed": 5
        }"#;
        let config: ChannelConfig = serde_json::from_str(text).unwrap();
        assert_eq!(config.sample_size, None);
        assert!(!config.with_replacement);
        assert_eq!(
            config.break_model,
            BreakModel::ExactlyT { t: 1, bonds: None }
        );
        assert_eq!(config.code_params.marker_base(), 1);
        let bad = text.replace("\"strand_count\": 10", "\"strand_count\": 0");
        let config: ChannelConfig = serde_json::from_str(&bad).unwrap();
        assert_eq!(config.validate(), Err(ChannelError::NoStrands));
    }
}
