//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime error.

use std::fs::File;
use std::io::{self, BufWriter, IsTerminal, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::lwe_hiding::{positive_control, run_experiment, SampleSource};
use crate::params::default_params;
use crate::prng_stream::{PrngState, DEFAULT_RESEED_INTERVAL};
use crate::qkd_sim::{derive_party_seeds, run_session, Adversary};
use crate::sampling::EntropyInput;
use crate::stats_harness::{dieharder_command, dump_raw, run_battery, scatter_indexes, write_scatter_csv};

/// Environment variable naming a default seed file.
pub const SEED_FILE_ENV: &str = "LWE_PRNG_SEED_FILE";
pub const REFERENCE_MBITS: f64 = 33.109;

#[derive(Debug, Parser)]
#[command(name = "lwe-prng", version, about = "LWE-hidden-seed LFSR pseudorandom generator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct SeedArgs {
    /// 32-byte seed as 64 hex characters.
    #[arg(long, conflicts_with = "seed_file")]
    pub seed_hex: Option<String>,
    /// File holding 32 raw bytes or 64 hex characters.
    #[arg(long)]
    pub seed_file: Option<PathBuf>,
    /// Output bits between automatic re-hides (0 disables).
    #[arg(long, default_value_t = DEFAULT_RESEED_INTERVAL)]
    pub reseed_interval: u64,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write raw generator bytes.
    Generate {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long)]
        bytes: u64,
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Print hex instead of raw bytes.
        #[arg(long)]
        hex: bool,
        /// Allow raw bytes on a terminal.
        #[arg(long)]
        force: bool,
    },
    /// Run the built-in six-test battery.
    Stats {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 10_000_000)]
        bits: usize,
    },
    /// Write a headerless dump for `dieharder -g 201`.
    DieharderDump {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 1_100_000_000)]
        bytes: u64,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Export 3-bit indexes as `position,index` CSV.
    Scatter {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 10_000)]
        count: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Empirical distinguishing experiment on hidden-seed samples.
    Distinguish {
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        #[arg(long, value_enum, default_value_t = Scenario::HidingVsUniform)]
        scenario: Scenario,
        #[arg(long, default_value_t = 0x5eed)]
        rng_seed: u64,
    },
    /// BB84 sifting and QBER demo.
    QkdDemo {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 1_000_000)]
        photons: usize,
        #[arg(long, value_enum, default_value_t = AdversaryArg::None)]
        adversary: AdversaryArg,
        /// Receiver seed; derived from the main seed when absent.
        #[arg(long)]
        bob_seed_hex: Option<String>,
        /// Eavesdropper seed; derived from the main seed when absent.
        #[arg(long)]
        eve_seed_hex: Option<String>,
        /// Emit a CSV row instead of the text summary.
        #[arg(long)]
        csv: bool,
    },
    /// Throughput in Mbit/s (median over runs).
    Bench {
        #[command(flatten)]
        seed: SeedArgs,
        #[arg(long, default_value_t = 100)]
        megabytes: u64,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        /// Also run this many generators in parallel.
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    HidingVsUniform,
    UniformVsUniform,
    /// Broken parameters (s = 0, e = 0, r = 1) against plain samples.
    Control,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AdversaryArg {
    None,
    #[value(alias = "intercept-resend")]
    Intercept,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

fn parse_seed_text(bytes: &[u8]) -> Result<EntropyInput, CliError> {
    if bytes.len() == EntropyInput::LEN {
        return EntropyInput::from_slice(bytes).map_err(|e| CliError::Usage(e.to_string()));
    }
    let text = std::str::from_utf8(bytes)
        .map_err(|_| CliError::Usage("seed file is neither 32 raw bytes nor hex text".into()))?;
    EntropyInput::from_hex(text).map_err(|e| CliError::Usage(format!("seed file: {e}")))
}

fn resolve_seed(args: &SeedArgs) -> Result<EntropyInput, CliError> {
    if let Some(h) = &args.seed_hex {
        return EntropyInput::from_hex(h).map_err(|e| CliError::Usage(format!("--seed-hex: {e}")));
    }
    let path = args.seed_file.clone().or_else(|| std::env::var_os(SEED_FILE_ENV).map(PathBuf::from));
    if let Some(path) = path {
        let bytes = std::fs::read(&path)
            .map_err(|e| CliError::Usage(format!("cannot read seed file {}: {e}", path.display())))?;
        return parse_seed_text(&bytes);
    }
    let ent = EntropyInput::from_os();
    eprintln!("seed (system entropy): {}", ent.to_hex());
    Ok(ent)
}

fn generator(args: &SeedArgs) -> Result<PrngState, CliError> {
    let ent = resolve_seed(args)?;
    Ok(PrngState::new(&ent, &default_params(), args.reseed_interval)?)
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn bench_once(gen: &mut PrngState, bytes: u64) -> Result<f64, CliError> {
    let mut buf = vec![0u8; 1 << 20];
    let start = Instant::now();
    let mut left = bytes;
    while left > 0 {
        let n = left.min(buf.len() as u64) as usize;
        gen.fill(&mut buf[..n])?;
        std::hint::black_box(&buf);
        left -= n as u64;
    }
    Ok(start.elapsed().as_secs_f64())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len();
    if n % 2 == 1 {
        xs[n / 2]
    } else {
        (xs[n / 2 - 1] + xs[n / 2]) / 2.0
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { seed, bytes, output, hex, force } => {
            let mut gen = generator(&seed)?;
            if output.is_none() && !hex && !force && io::stdout().is_terminal() {
                return Err(CliError::Usage(
                    "refusing to write raw bytes to a terminal; use --output, --hex or --force".into(),
                ));
            }
            let mut out = open_output(&output)?;
            if hex {
                let mut left = bytes;
                while left > 0 {
                    let n = left.min(1 << 16) as usize;
                    out.write_all(hex::encode(gen.next_bytes(n)?).as_bytes())?;
                    left -= n as u64;
                }
                writeln!(out)?;
                out.flush()?;
            } else {
                dump_raw(&mut gen, bytes, &mut out)?;
            }
        }
        Command::Stats { seed, bits } => {
            let mut gen = generator(&seed)?;
            let reports = run_battery(&mut gen, bits)?;
            println!("{} bits", bits);
            for r in &reports {
                println!("{r}");
            }
        }
        Command::DieharderDump { seed, bytes, output } => {
            let mut gen = generator(&seed)?;
            let mut out = BufWriter::new(File::create(&output)?);
            dump_raw(&mut gen, bytes, &mut out)?;
            eprintln!("wrote {bytes} bytes to {}", output.display());
            eprintln!("run: {}", dieharder_command(&output.display().to_string()));
        }
        Command::Scatter { seed, count, output } => {
            if count == 0 {
                return Err(CliError::Usage("--count must be at least 1".into()));
            }
            let mut gen = generator(&seed)?;
            let idx = scatter_indexes(&mut gen, count);
            let mut bins = [0usize; 8];
            for &i in &idx {
                bins[i as usize] += 1;
            }
            write_scatter_csv(&idx, &mut open_output(&output)?)?;
            eprintln!("bin counts: {bins:?}");
        }
        Command::Distinguish { trials, scenario, rng_seed } => {
            let p = default_params();
            let report = match scenario {
                Scenario::HidingVsUniform => {
                    run_experiment(SampleSource::hiding(), SampleSource::Uniform, trials, &p, rng_seed)
                }
                Scenario::UniformVsUniform => {
                    run_experiment(SampleSource::Uniform, SampleSource::Uniform, trials, &p, rng_seed)
                }
                Scenario::Control => positive_control(trials, &p),
            };
            let report = report.map_err(|e| match e {
                crate::Error::InsufficientTrials { .. } => CliError::Usage(e.to_string()),
                other => CliError::Runtime(other.to_string()),
            })?;
            print!("{report}");
        }
        Command::QkdDemo { seed, photons, adversary, bob_seed_hex, eve_seed_hex, csv } => {
            if photons == 0 {
                return Err(CliError::Usage("--photons must be at least 1".into()));
            }
            let alice = resolve_seed(&seed)?;
            let (bob_default, eve_default) = derive_party_seeds(&alice);
            let parse = |h: &Option<String>, default| match h {
                Some(h) => EntropyInput::from_hex(h).map_err(|e| CliError::Usage(e.to_string())),
                None => Ok(default),
            };
            let bob = parse(&bob_seed_hex, bob_default)?;
            let adv = match adversary {
                AdversaryArg::None => Adversary::None,
                AdversaryArg::Intercept => Adversary::InterceptResend(parse(&eve_seed_hex, eve_default)?),
            };
            let session = run_session(&alice, &bob, photons, &adv).map_err(|e| match e {
                crate::Error::IdenticalSeeds => CliError::Usage(e.to_string()),
                other => CliError::Runtime(other.to_string()),
            })?;
            let summary = session.summary();
            if csv {
                println!("{}", crate::qkd_sim::SessionSummary::CSV_HEADER);
                println!("{}", summary.csv_row());
            } else {
                println!("{summary}");
            }
        }
        Command::Bench { seed, megabytes, runs, threads } => {
            if runs == 0 || megabytes == 0 || threads == 0 {
                return Err(CliError::Usage("--megabytes, --runs and --threads must be positive".into()));
            }
            let ent = resolve_seed(&seed)?;
            let p = default_params();
            let bytes = megabytes * 1_000_000;
            let mut times = Vec::with_capacity(runs);
            for _ in 0..runs {
                let mut gen = PrngState::new(&ent, &p, seed.reseed_interval)?;
                times.push(bench_once(&mut gen, bytes)?);
            }
            let mbits = bytes as f64 * 8.0 / median(times) / 1e6;
            println!("single-thread: {mbits:.3} Mbit/s (median of {runs} runs, {megabytes} MB each)");
            if threads > 1 {
                let start = Instant::now();
                let results: Vec<Result<f64, CliError>> = std::thread::scope(|scope| {
                    let handles: Vec<_> = (0..threads)
                        .map(|t| {
                            let ent = crate::sampling::derive_entropy(&ent, 0xb0, &(t as u64).to_be_bytes());
                            let interval = seed.reseed_interval;
                            scope.spawn(move || {
                                let mut gen = PrngState::new(&ent, &p, interval)?;
                                bench_once(&mut gen, bytes)
                            })
                        })
                        .collect();
                    handles.into_iter().map(|h| h.join().expect("bench worker panicked")).collect()
                });
                for r in results {
                    r?;
                }
                let total = threads as f64 * bytes as f64 * 8.0 / start.elapsed().as_secs_f64() / 1e6;
                println!("{threads} threads: {total:.3} Mbit/s aggregate");
            }
            println!("reference: {REFERENCE_MBITS} Mbit/s published for an i7-9700; hardware-dependent, order of magnitude only");
        }
    }
    Ok(())
}

/// Parses `args` and runs the selected command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            eprintln!("usage: lwe-prng <generate|stats|dieharder-dump|scatter|distinguish|qkd-demo|bench> [options]");
            1
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
