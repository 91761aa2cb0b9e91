//! Command-line front end: ordering queries, exact period censuses and
//! closure verification for piecewise-linear maps, orbit-pattern analysis,
//! the clamped tent constructions, and a seeded randomized corpus runner.

mod report;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use report::VerificationReport;
use sharkovsky_core::{
    compare, forced_spectrum_capped, is_stefan, parse_map, random_cycle, spectrum_capped,
    t_infinity_approx, t_infinity_approx_with_budget, tail, tent_truncation_with_orbit,
    CyclicPattern, Error, PeriodCount, Result, SpectrumReport, DEFAULT_PIECE_CAP,
};

#[derive(Parser)]
#[command(
    name = "sharkovsky",
    version,
    about = "Exact periodic-orbit analysis of piecewise-linear interval maps"
)]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Queries about the Sharkovsky ordering itself.
    #[command(subcommand)]
    Order(OrderCmd),
    /// Census and verification of a map given as a map file.
    #[command(subcommand)]
    Map(MapCmd),
    /// Combinatorial analysis of cyclic orbit patterns.
    #[command(subcommand)]
    Pattern(PatternCmd),
    /// Clamped tent maps witnessing prescribed period sets.
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Closure verification over seeded random patterns.
    Corpus(CorpusArgs),
}

#[derive(Subcommand)]
enum OrderCmd {
    /// Compare two periods; the smaller side forces the larger.
    Compare { m: u64, n: u64 },
    /// List every period forced by m up to a bound, in numeric order.
    Tail {
        m: u64,
        #[arg(long, default_value_t = 14)]
        max: u64,
    },
}

#[derive(Subcommand)]
enum MapCmd {
    /// Count the orbits of each least period up to a bound.
    Spectrum {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        max: u64,
        /// Piece budget for iterate censuses.
        #[arg(long, default_value_t = DEFAULT_PIECE_CAP)]
        budget: usize,
    },
    /// Check the period set for closure under the ordering.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        max: u64,
        #[arg(long, default_value_t = DEFAULT_PIECE_CAP)]
        budget: usize,
    },
}

#[derive(Subcommand)]
enum PatternCmd {
    /// Spectrum of the connect-the-dots realization of a pattern.
    Forced {
        /// Ranks of the images, e.g. "3 1 2" sends lowest to third-lowest.
        pattern: String,
        #[arg(long, default_value_t = 12)]
        max: u64,
        #[arg(long, default_value_t = DEFAULT_PIECE_CAP)]
        budget: usize,
    },
    /// Decide whether a pattern is a Stefan cycle.
    Stefan { pattern: String },
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Tent map clamped to its tightest orbit of least period n.
    Trunc {
        n: u64,
        #[arg(long, default_value_t = 14)]
        max: u64,
        #[arg(long, default_value_t = DEFAULT_PIECE_CAP)]
        budget: usize,
        /// Also write the constructed map, alone, to this file.
        #[arg(long, value_name = "FILE")]
        map_out: Option<PathBuf>,
    },
    /// Finite stage of the infinitely clamped tent map.
    Tinf {
        #[arg(long, default_value_t = 0)]
        depth: u32,
        #[arg(long, default_value_t = 12)]
        max: u64,
        /// Piece budget; depths beyond 2 are refused without one.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_name = "FILE")]
        map_out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    count: u64,
    /// Largest pattern size; sizes are drawn uniformly from 3..=size.
    #[arg(long, default_value_t = 8)]
    size: usize,
    #[arg(long, default_value_t = 12)]
    max: u64,
    #[arg(long, default_value_t = 4_000_000_000)]
    budget: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, code)) => {
            if let Some(path) = &cli.out {
                if let Err(e) = write_file(path, &text) {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            } else {
                print!("{text}");
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

/// 0 pass, 1 fail, 2 bad input, 3 refused for resource reasons.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Resource { .. } | Error::Degenerate { .. } => 3,
        Error::Consistency(_) => 1,
        _ => 2,
    }
}

fn run(cmd: Command) -> Result<(String, u8)> {
    match cmd {
        Command::Order(OrderCmd::Compare { m, n }) => {
            let relation = match compare(m, n)? {
                std::cmp::Ordering::Less => "\u{227a}",
                std::cmp::Ordering::Equal => "=",
                std::cmp::Ordering::Greater => "\u{227b}",
            };
            Ok((format!("{m} {relation} {n}\n"), 0))
        }
        Command::Order(OrderCmd::Tail { m, max }) => {
            let periods = tail(m, max)?;
            let words: Vec<String> = periods.iter().map(u64::to_string).collect();
            Ok((words.join(" ") + "\n", 0))
        }
        Command::Map(MapCmd::Spectrum { file, max, budget }) => {
            let f = parse_map(&read_file(&file)?)?;
            let census = spectrum_capped(&f, max, budget)?;
            Ok((spectrum_table(&file.display().to_string(), &census), 0))
        }
        Command::Map(MapCmd::Verify { file, max, budget }) => {
            let f = parse_map(&read_file(&file)?)?;
            let census = spectrum_capped(&f, max, budget)?;
            let verdict = VerificationReport::from_spectrum(file.display().to_string(), &census)?;
            let code = u8::from(!verdict.passed());
            Ok((verdict.to_string(), code))
        }
        Command::Pattern(PatternCmd::Forced {
            pattern,
            max,
            budget,
        }) => {
            let p = CyclicPattern::parse(&pattern)?;
            let census = forced_spectrum_capped(&p, max, budget)?;
            Ok((spectrum_table(&p.to_string(), &census), 0))
        }
        Command::Pattern(PatternCmd::Stefan { pattern }) => {
            let p = CyclicPattern::parse(&pattern)?;
            let verdict = is_stefan(&p)?;
            Ok((format!("{verdict}\n"), 0))
        }
        Command::Witness(WitnessCmd::Trunc {
            n,
            max,
            budget,
            map_out,
        }) => {
            let (orbit, map) = tent_truncation_with_orbit(n, budget)?;
            if let Some(path) = &map_out {
                write_file(path, &map.to_string())?;
            }
            let census = spectrum_capped(&map, max, budget)?;
            let verdict = VerificationReport::from_spectrum(format!("trunc {n}"), &census)?;
            let mut text = String::new();
            let lo = orbit.points.first().unwrap();
            let hi = orbit.points.last().unwrap();
            writeln!(text, "clamp: [{lo}, {hi}]").unwrap();
            writeln!(text, "map:").unwrap();
            text.push_str(&map.to_string());
            text.push_str(&verdict.to_string());
            Ok((text, u8::from(!verdict.passed())))
        }
        Command::Witness(WitnessCmd::Tinf {
            depth,
            max,
            budget,
            map_out,
        }) => {
            let (map, windows) = match budget {
                Some(cap) => t_infinity_approx_with_budget(depth, cap)?,
                None => t_infinity_approx(depth)?,
            };
            if let Some(path) = &map_out {
                write_file(path, &map.to_string())?;
            }
            let census = spectrum_capped(&map, max, budget.unwrap_or(DEFAULT_PIECE_CAP))?;
            let verdict =
                VerificationReport::from_spectrum(format!("tinf depth {depth}"), &census)?;
            let mut text = String::new();
            for (i, window) in windows.iter().enumerate() {
                writeln!(text, "window {i}: {window}").unwrap();
            }
            writeln!(text, "map:").unwrap();
            text.push_str(&map.to_string());
            text.push_str(&verdict.to_string());
            Ok((text, u8::from(!verdict.passed())))
        }
        Command::Corpus(args) => run_corpus(&args),
    }
}

fn run_corpus(args: &CorpusArgs) -> Result<(String, u8)> {
    if args.size < 3 {
        return Err(Error::InvalidInput(
            "corpus patterns need size at least 3".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut text = String::new();
    let mut passes = 0u64;
    for i in 0..args.count {
        let m = rng.gen_range(3..=args.size);
        let p = random_cycle(m, &mut rng)?;
        let census = forced_spectrum_capped(&p, args.max, args.budget)?;
        let verdict = VerificationReport::from_spectrum(p.to_string(), &census)?;
        write!(text, "task {i}: size {m} pattern \"{p}\"").unwrap();
        if verdict.passed() {
            passes += 1;
            writeln!(text, " pass").unwrap();
        } else {
            write!(text, " fail").unwrap();
            for (a, b) in &verdict.violations {
                write!(text, " ({a}, {b})").unwrap();
            }
            writeln!(text).unwrap();
        }
    }
    writeln!(text, "{passes}/{} pass", args.count).unwrap();
    Ok((text, u8::from(passes != args.count)))
}

fn spectrum_table(subject: &str, census: &SpectrumReport) -> String {
    let mut text = String::new();
    writeln!(text, "subject: {subject}").unwrap();
    writeln!(text, "bound: {}", census.bound).unwrap();
    for (n, count) in &census.levels {
        match count {
            PeriodCount::Orbits(k) => writeln!(text, "period {n}: {k}").unwrap(),
            PeriodCount::Continuum => writeln!(text, "period {n}: continuum").unwrap(),
        }
    }
    text
}

fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text)
        .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display())))
}
