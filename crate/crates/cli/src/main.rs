use std::fs;
use std::io::{self, Read, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;
use strandcode::composite::{alphabet_size, restricted_symbol_count};
use strandcode::marker::{
    asymptotic_optimal_ell, construct_codeword, decode_matrix, is_valid_codeword, message_radices,
    optimal_marker_length,
};
use strandcode::rll::{
    bound_sweep, count_rll_brute, count_rll_exact, parameter_grid, write_sweep_csv,
};
use strandcode::{
    channel::write_report_csv, run_experiment_with, AlphabetParams, ChannelConfig, CompositeMatrix,
    Execution, MarkerCodeParams, Message, RllParams,
};

mod verify;

/// Seed used by `simulate` when the config has none and `--seed` is absent.
const SEED_ENV: &str = "STRANDCODE_SEED";

#[derive(Parser)]
#[command(
    name = "strandcode",
    version,
    about = "Composite DNA strand-break codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Composite alphabet size Q and restricted count R.
    Alphabet {
        #[arg(long)]
        q: usize,
        #[arg(long = "M")]
        m: u32,
        /// 1-based base whose nonzero weight marks a symbol as restricted.
        #[arg(long, default_value_t = 1)]
        excluded_base: usize,
    },
    /// Number of composite RLL sequences.
    Count {
        #[arg(long = "Q")]
        alphabet: u64,
        #[arg(long = "R")]
        restricted: u64,
        #[arg(long)]
        ell: usize,
        #[arg(long)]
        n: usize,
        /// Enumerate class patterns instead of the recurrence.
        #[arg(long)]
        brute: bool,
    },
    /// Redundancy bounds as CSV over ranges of ell and n.
    Bounds {
        #[arg(long = "Q")]
        alphabet: u64,
        #[arg(long = "R")]
        restricted: u64,
        /// Inclusive range `a..b`, or a single value.
        #[arg(long, value_parser = parse_range)]
        ell_range: RangeInclusive<usize>,
        #[arg(long, value_parser = parse_range)]
        n_range: RangeInclusive<usize>,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Optimal marker run length for a code length.
    OptimalEll {
        #[arg(long)]
        q: usize,
        #[arg(long = "M")]
        m: u32,
        #[arg(long)]
        n: usize,
    },
    /// Message JSON to codeword matrix.
    Encode {
        #[command(flatten)]
        code: CodeArgs,
        /// JSON array of data symbols; `-` reads standard input.
        #[arg(long, conflicts_with = "random")]
        message: Option<PathBuf>,
        /// Encode a uniform random message drawn from this seed.
        #[arg(long)]
        random: Option<u64>,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Json)]
        format: MatrixFormat,
    },
    /// Codeword matrix (JSON or CSV) to message JSON.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        /// Matrix file; `-` reads standard input. Format is detected.
        #[arg(long)]
        matrix: PathBuf,
    },
    /// Run channel experiments from a JSON config.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        /// The config is a JSON array; emit one CSV row per entry.
        #[arg(long)]
        sweep: bool,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Run the oracle and identity suites.
    Verify {
        #[arg(long, value_enum, default_value_t = verify::Grid::Small)]
        grid: verify::Grid,
    },
}

#[derive(Args)]
struct CodeArgs {
    #[arg(long)]
    q: usize,
    #[arg(long = "M")]
    m: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long, default_value_t = 1)]
    marker_base: usize,
    #[arg(long, default_value_t = 2)]
    anchor_base: usize,
}

impl CodeArgs {
    fn params(&self) -> Result<MarkerCodeParams> {
        let alphabet = AlphabetParams::new(self.q, self.m)?;
        Ok(MarkerCodeParams::with_bases(
            alphabet,
            self.n,
            self.ell,
            self.marker_base,
            self.anchor_base,
        )?)
    }
}

#[derive(Args)]
struct ExecArgs {
    /// Run on one thread.
    #[arg(long)]
    sequential: bool,
}

impl ExecArgs {
    fn execution(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Json,
    Csv,
}

fn parse_range(text: &str) -> std::result::Result<RangeInclusive<usize>, String> {
    let parse = |s: &str| s.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    let (lo, hi) = match text.split_once("..") {
        Some((lo, hi)) => (parse(lo)?, parse(hi.trim_start_matches('='))?),
        None => {
            let v = parse(text)?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range {text:?}"));
    }
    Ok(lo..=hi)
}

fn read_input(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

/// Fills a missing `seed` from `--seed` or the environment; `--seed` also
/// overrides a present one.
fn resolve_seed(config: &mut Value, flag: Option<u64>) -> Result<()> {
    let obj = config
        .as_object_mut()
        .context("each config must be a JSON object")?;
    if let Some(seed) = flag {
        obj.insert("seed".into(), seed.into());
    } else if !obj.contains_key("seed") {
        let seed: u64 = std::env::var(SEED_ENV)
            .with_context(|| format!("config has no seed; pass --seed or set {SEED_ENV}"))?
            .parse()
            .with_context(|| format!("{SEED_ENV} is not an unsigned integer"))?;
        obj.insert("seed".into(), seed.into());
    }
    Ok(())
}

fn parse_config(mut raw: Value, flag: Option<u64>) -> Result<ChannelConfig> {
    resolve_seed(&mut raw, flag)?;
    Ok(serde_json::from_value(raw)?)
}

/// Returns `Ok(false)` when a check ran and failed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Alphabet {
            q,
            m,
            excluded_base,
        } => {
            let params = AlphabetParams::new(q, m)?;
            let total = alphabet_size(&params);
            let restricted = restricted_symbol_count(&params, excluded_base)?;
            // Q and R can exceed 64 bits, so the integers are written directly.
            println!(
                "{{\"q\": {q}, \"M\": {m}, \"excluded_base\": {excluded_base}, \"Q\": {total}, \"R\": {restricted}}}"
            );
        }
        Command::Count {
            alphabet,
            restricted,
            ell,
            n,
            brute,
        } => {
            let params = RllParams::new(alphabet, restricted, ell, n)?;
            let count = if brute {
                count_rll_brute(&params)?
            } else {
                count_rll_exact(&params)
            };
            println!("{count}");
        }
        Command::Bounds {
            alphabet,
            restricted,
            ell_range,
            n_range,
            exec,
        } => {
            RllParams::new(alphabet, restricted, *ell_range.start(), 0)?;
            let points = parameter_grid(
                [alphabet],
                Some(restricted..=restricted),
                ell_range,
                n_range,
            );
            let rows = bound_sweep(&points, exec.execution());
            write_sweep_csv(&rows, io::stdout().lock())?;
        }
        Command::OptimalEll { q, m, n } => {
            #[derive(Serialize)]
            struct Out {
                q: usize,
                #[serde(rename = "M")]
                m: u32,
                n: usize,
                #[serde(flatten)]
                optimum: strandcode::marker::OptimalMarker,
                asymptotic_ell: f64,
            }
            let optimum = optimal_marker_length(q, m, n)?;
            let probe = MarkerCodeParams::new(AlphabetParams::new(q, m)?, n, 1)?;
            let (big_q, r) = probe.alphabet_counts();
            print_json(&Out {
                q,
                m,
                n,
                optimum,
                asymptotic_ell: asymptotic_optimal_ell(big_q, r, n as f64),
            })?;
        }
        Command::Encode {
            code,
            message,
            random,
            format,
        } => {
            let params = code.params()?;
            let message = match (message, random) {
                (Some(path), _) => serde_json::from_str::<Message>(&read_input(&path)?)
                    .context("message must be a JSON array of integers")?,
                (None, Some(seed)) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    Message::new(
                        message_radices(&params)
                            .into_iter()
                            .map(|r| rng.random_range(0..r))
                            .collect(),
                    )
                }
                (None, None) => bail!("pass --message FILE or --random SEED"),
            };
            let word = construct_codeword(&message, &params)?;
            match format {
                MatrixFormat::Json => println!("{}", word.to_json()),
                MatrixFormat::Csv => print!("{}", word.to_csv()),
            }
        }
        Command::Decode { code, matrix } => {
            let params = code.params()?;
            let text = read_input(&matrix)?;
            let word = if text.trim_start().starts_with('{') {
                CompositeMatrix::from_json(&text)?
            } else {
                CompositeMatrix::from_csv(&text)?
            };
            let validation = is_valid_codeword(&word, &params);
            if !validation.is_valid() {
                print_json(&validation)?;
                return Ok(false);
            }
            println!(
                "{}",
                serde_json::to_string(&decode_matrix(&word, &params)?)?
            );
        }
        Command::Simulate {
            config,
            sweep,
            seed,
            exec,
        } => {
            let raw: Value = serde_json::from_str(&read_input(&config)?)
                .with_context(|| format!("parsing {}", config.display()))?;
            if sweep {
                let Value::Array(entries) = raw else {
                    bail!("--sweep expects a JSON array of configs");
                };
                let mut rows = Vec::with_capacity(entries.len());
                for (i, entry) in entries.into_iter().enumerate() {
                    let config =
                        parse_config(entry, seed).with_context(|| format!("config {i}"))?;
                    let report = run_experiment_with(&config, exec.execution())
                        .with_context(|| format!("config {i}"))?;
                    rows.push((config, report));
                }
                write_report_csv(&rows, io::stdout().lock())?;
            } else {
                let config = parse_config(raw, seed)?;
                print_json(&run_experiment_with(&config, exec.execution())?)?;
            }
        }
        Command::Verify { grid } => {
            let summary = verify::run(grid);
            print_json(&summary)?;
            return Ok(summary.failed == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
