//! Command-line front end: corpus generation, square detection, runs
//! computation, and the measurement/adversary benchmark suites.
//!
//! Exit codes for `squares`: 0 square-free, 1 square found, 2 error.
//! `bench` exits nonzero when a suite assertion fails, printing the
//! offending row.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use squarerun::adversary::{adversary_oracle, AdversaryMode, ConflictGraph};
use squarerun::corpus;
use squarerun::detector::{detect_simple, detect_with, DetectorConfig};
use squarerun::oracle::EqString;
use squarerun::primitives::{brute_has_square, brute_runs, divide_conquer_runs, main_lorentz_square, Run, Span};
use squarerun::runsengine::compute_runs_with;
use squarerun::Error;

const REPORT_HEADER: &str = "# squarerun-report v1";

#[derive(Parser)]
#[command(name = "squarerun", version, about = "Square detection and runs over equality-only alphabets")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Tm3,
    Random,
    Unary,
    Periodic,
    Fib,
}

#[derive(Clone, Copy, ValueEnum)]
enum SquareAlgo {
    Brute,
    Ml,
    Simple,
    Phased,
}

#[derive(Clone, Copy, ValueEnum)]
enum RunsAlgo {
    Brute,
    Dc,
    Phased,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Upper,
    LowerAlpha,
    LowerSquare,
}

#[derive(Subcommand)]
enum Cmd {
    /// Write a token file of the requested kind.
    Gen {
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        sigma: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test a token file for squares; exit 0 if square-free, 1 if not.
    Squares {
        input: PathBuf,
        #[arg(long, value_enum)]
        algo: SquareAlgo,
        /// Known alphabet size (required by --algo simple).
        #[arg(long)]
        sigma: Option<usize>,
        /// Read the input as raw bytes instead of decimal tokens.
        #[arg(long)]
        raw: bool,
    },
    /// Print all runs of a token file, one "s e p" line each.
    Runs {
        input: PathBuf,
        #[arg(long, value_enum)]
        algo: RunsAlgo,
        #[arg(long)]
        raw: bool,
    },
    /// Measurement and adversary suites; CSV to stdout or --csv.
    Bench {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Comma-separated sizes; entries may be "N", "2^K" or "2^A..2^B".
        #[arg(long, default_value = "2^10")]
        sizes: String,
        #[arg(long, default_value = "3")]
        sigmas: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.cmd {
        Cmd::Gen { kind, n, sigma, seed, out } => cmd_gen(kind, n, sigma, seed, out),
        Cmd::Squares { input, algo, sigma, raw } => cmd_squares(input, algo, sigma, raw),
        Cmd::Runs { input, algo, raw } => cmd_runs(input, algo, raw),
        Cmd::Bench { suite, sizes, sigmas, seed, csv } => cmd_bench(suite, &sizes, &sigmas, seed, csv),
    }
}

fn cmd_gen(
    kind: GenKind,
    n: usize,
    sigma: u64,
    seed: u64,
    out: Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let tokens = match kind {
        GenKind::Tm3 => corpus::ternary_thue_morse(n)?,
        GenKind::Random => corpus::random_string(n, sigma, seed)?,
        GenKind::Unary => corpus::unary(n)?,
        GenKind::Periodic => corpus::periodic(n, sigma)?,
        GenKind::Fib => corpus::fibonacci_word(n)?,
    };
    match out {
        Some(path) => corpus::write_tokens(path, &tokens)?,
        None => print!("{}", corpus::format_tokens(&tokens)),
    }
    Ok(ExitCode::SUCCESS)
}

fn load(input: &PathBuf, raw: bool) -> Result<Vec<u64>, Error> {
    if raw {
        corpus::read_bytes_as_tokens(input)
    } else {
        corpus::read_tokens(input)
    }
}

fn cmd_squares(
    input: PathBuf,
    algo: SquareAlgo,
    sigma: Option<usize>,
    raw: bool,
) -> Result<ExitCode, Error> {
    let tokens = load(&input, raw)?;
    let mut s = EqString::from_symbols(&tokens)?;
    let n = s.len();
    let whole = Span::new(1, n);
    let start = Instant::now();
    let (name, witness) = match algo {
        SquareAlgo::Brute => ("brute", brute_has_square(&mut s, whole)),
        SquareAlgo::Ml => ("ml", main_lorentz_square(&mut s, whole)),
        SquareAlgo::Simple => {
            let Some(sigma) = sigma else {
                eprintln!("error: --algo simple requires --sigma");
                return Ok(ExitCode::from(2));
            };
            ("simple", detect_simple(&mut s, sigma)?)
        }
        SquareAlgo::Phased => ("phased", detect_with(&mut s, &DetectorConfig::from_env()).0),
    };
    let secs = start.elapsed().as_secs_f64();
    let st = s.stats();
    let (ws, wh) = witness.map_or((0, 0), |sq| (sq.s, sq.half));
    println!(
        "{name},{n},{},{ws},{wh},{},{},{secs:.6}",
        u8::from(witness.is_some()),
        st.negative,
        st.positive_merging
    );
    Ok(if witness.is_some() {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_runs(input: PathBuf, algo: RunsAlgo, raw: bool) -> Result<ExitCode, Error> {
    let tokens = load(&input, raw)?;
    let mut s = EqString::from_symbols(&tokens)?;
    let n = s.len();
    let whole = Span::new(1, n);
    let start = Instant::now();
    let (name, runs): (&str, Vec<Run>) = match algo {
        RunsAlgo::Brute => ("brute", brute_runs(&mut s, whole)),
        RunsAlgo::Dc => ("dc", divide_conquer_runs(&mut s, whole)),
        RunsAlgo::Phased => (
            "phased",
            compute_runs_with(&mut s, &DetectorConfig::from_env()).0,
        ),
    };
    let secs = start.elapsed().as_secs_f64();
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    for r in &runs {
        writeln!(out, "{} {} {}", r.s, r.e, r.p)?;
    }
    let st = s.stats();
    eprintln!(
        "{name},{n},{},{},{},{secs:.6}",
        runs.len(),
        st.negative,
        st.positive_merging
    );
    Ok(ExitCode::SUCCESS)
}

fn parse_grid(list: &str, what: &'static str) -> Result<Vec<usize>, Error> {
    let mut out = Vec::new();
    for item in list.split(',') {
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let parse_one = |tok: &str| -> Result<usize, Error> {
            if let Some(exp) = tok.strip_prefix("2^") {
                let e: u32 = exp.parse().map_err(|_| Error::param(what, format!("bad exponent {tok:?}")))?;
                Ok(1usize << e)
            } else {
                tok.parse().map_err(|_| Error::param(what, format!("bad entry {tok:?}")))
            }
        };
        if let Some((a, b)) = item.split_once("..") {
            let (lo, hi) = (parse_one(a)?, parse_one(b)?);
            if !(lo.is_power_of_two() && hi.is_power_of_two() && lo <= hi) {
                return Err(Error::param(what, format!("bad range {item:?}")));
            }
            let mut v = lo;
            while v <= hi {
                out.push(v);
                v *= 2;
            }
        } else {
            out.push(parse_one(item)?);
        }
    }
    if out.is_empty() {
        return Err(Error::param(what, "empty list".to_string()));
    }
    Ok(out)
}

struct CsvSink {
    to_file: Option<fs::File>,
}

impl CsvSink {
    fn new(path: Option<PathBuf>) -> Result<Self, Error> {
        let to_file = path.map(fs::File::create).transpose()?;
        Ok(CsvSink { to_file })
    }

    fn line(&mut self, text: &str) -> Result<(), Error> {
        match &mut self.to_file {
            Some(f) => writeln!(f, "{text}")?,
            None => println!("{text}"),
        }
        Ok(())
    }
}

fn cmd_bench(
    suite: Suite,
    sizes: &str,
    sigmas: &str,
    seed: u64,
    csv: Option<PathBuf>,
) -> Result<ExitCode, Error> {
    let sizes = parse_grid(sizes, "sizes")?;
    let sigmas = parse_grid(sigmas, "sigmas")?;
    let mut sink = CsvSink::new(csv)?;
    sink.line(REPORT_HEADER)?;
    match suite {
        Suite::Upper => bench_upper(&sizes, &sigmas, seed, &mut sink),
        Suite::LowerSquare => bench_lower_square(&sizes, &sigmas, &mut sink),
        Suite::LowerAlpha => bench_lower_alpha(&sizes, &sigmas, seed, &mut sink),
    }
}

fn bench_upper(
    sizes: &[usize],
    sigmas: &[usize],
    seed: u64,
    sink: &mut CsvSink,
) -> Result<ExitCode, Error> {
    sink.line("suite,algo,n,sigma,seed,result,comparisons_negative,comparisons_merging,paper_count,seconds")?;
    let cfg = DetectorConfig::from_env();
    for &n in sizes {
        for &sigma in sigmas {
            let tokens = if sigma == 3 {
                corpus::ternary_thue_morse(n)?
            } else {
                corpus::random_string(n, sigma as u64, seed)?
            };

            let mut s = EqString::from_symbols(&tokens)?;
            let t0 = Instant::now();
            let (witness, report) = detect_with(&mut s, &cfg);
            sink.line(&format!(
                "upper,detect,{n},{sigma},{seed},{},{},{},{},{:.6}",
                u8::from(witness.is_some()),
                report.negative,
                report.merging,
                report.paper_count(),
                t0.elapsed().as_secs_f64()
            ))?;

            let mut s = EqString::from_symbols(&tokens)?;
            let t0 = Instant::now();
            let (runs, report) = compute_runs_with(&mut s, &cfg);
            sink.line(&format!(
                "upper,runs,{n},{sigma},{seed},{},{},{},{},{:.6}",
                runs.len(),
                report.negative,
                report.merging,
                report.paper_count(),
                t0.elapsed().as_secs_f64()
            ))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn bench_lower_square(
    sizes: &[usize],
    sigmas: &[usize],
    sink: &mut CsvSink,
) -> Result<ExitCode, Error> {
    sink.line("suite,algo,n,sigma,comparisons,bound,ok")?;
    let cfg = DetectorConfig::from_env();
    let mut failed = None;
    for &n in sizes {
        for &sigma in sigmas {
            let bound = (n as f64) * (sigma as f64).ln() - 3.6 * n as f64;
            for algo in ["detect", "ml"] {
                let (mut s, graph) = adversary_oracle(AdversaryMode::SquareFree, n, sigma)?;
                match algo {
                    "detect" => {
                        detect_with(&mut s, &cfg);
                    }
                    _ => {
                        main_lorentz_square(&mut s, Span::new(1, n));
                    }
                }
                let comparisons = graph.lock().unwrap().comparisons();
                let ok = comparisons as f64 >= bound;
                let row = format!(
                    "lower-square,{algo},{n},{sigma},{comparisons},{bound:.1},{}",
                    u8::from(ok)
                );
                sink.line(&row)?;
                if !ok && failed.is_none() {
                    failed = Some(row);
                }
            }
        }
    }
    if let Some(row) = failed {
        eprintln!("lower-square bound violated: {row}");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

/// Query streams for the alphabet-approximation experiment.
fn strategy_queries(
    strategy: &str,
    n: usize,
    sigma: usize,
    seed: u64,
    budget: usize,
) -> Result<Vec<(usize, usize)>, Error> {
    Ok(match strategy {
        "sequential" => (0..budget).map(|k| (k % (n - 1) + 1, k % (n - 1) + 2)).collect(),
        "random-pairs" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..budget)
                .map(|_| {
                    let i = rng.gen_range(1..=n);
                    let mut j = rng.gen_range(1..=n - 1);
                    if j >= i {
                        j += 1;
                    }
                    (i, j)
                })
                .collect()
        }
        _ => {
            // the detector itself, truncated to the first `budget` queries
            let (mut s, graph) = adversary_oracle(AdversaryMode::AlphabetSize, n, sigma)?;
            detect_with(&mut s, &DetectorConfig::from_env());
            let g = graph.lock().unwrap();
            g.transcript()
                .iter()
                .take(budget)
                .map(|&(i, j, _)| (i as usize, j as usize))
                .collect()
        }
    })
}

fn bench_lower_alpha(
    sizes: &[usize],
    sigmas: &[usize],
    seed: u64,
    sink: &mut CsvSink,
) -> Result<ExitCode, Error> {
    sink.line("suite,strategy,n,sigma,answers,small_colors,large_colors,ok")?;
    let mut failed = None;
    for &n in sizes {
        for &sigma in sigmas {
            let budget = n * sigma / 8;
            for strategy in ["sequential", "random-pairs", "detector"] {
                let queries = strategy_queries(strategy, n, sigma, seed, budget)?;
                let mut g = ConflictGraph::new(AdversaryMode::AlphabetSize, n, sigma)?;
                for &(i, j) in &queries {
                    g.answer(i, j);
                }
                let small = g.witness_small();
                let small_colors = distinct(&small);
                let large = g.witness_large();
                let (large_colors, large_ok) = match &large {
                    Some(tokens) => (distinct(tokens), g.consistent_with(tokens)),
                    None => (0, false),
                };
                let ok = small_colors <= sigma
                    && g.consistent_with(&small)
                    && large_ok
                    && 2 * large_colors >= n;
                let row = format!(
                    "lower-alpha,{strategy},{n},{sigma},{},{small_colors},{large_colors},{}",
                    g.comparisons(),
                    u8::from(ok)
                );
                sink.line(&row)?;
                if !ok && failed.is_none() {
                    failed = Some(row);
                }
            }
        }
    }
    if let Some(row) = failed {
        eprintln!("lower-alpha ambiguity lost: {row}");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn distinct(tokens: &[u64]) -> usize {
    let mut v = tokens.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}
