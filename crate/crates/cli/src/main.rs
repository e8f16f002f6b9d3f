//! `chords`: command-line front end for exact chord analysis.
//!
//! Every command writes one JSON document to stdout. Diagnostics go to
//! stderr. Exit codes: 0 success, 1 domain error (not a loop, divisor
//! distance, out-of-range argument, invalid config), 2 malformed input.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chord_core::rational::{self, Rational};
use chord_core::search::Domain;
use chord_core::{
    bump_train, chord_set, find_chord_of_length, find_divisor_chord, interior_chord_set,
    make_counterexample, minimize, pathological_example, random_loop, single_bump,
    verify_measure_bound, BumpSpec, Error, Interval, IntervalSet, LevelDecomposition, PLFunction,
    SearchConfig, Variant,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(name = "chords", version, about = "Exact horizontal-chord analysis of piecewise-linear loops")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the chord set, its measure and the level-set decomposition.
    Analyze {
        /// Function file: {"breakpoints": [["x","y"], ...]}.
        file: PathBuf,
        /// Also compute chords with both endpoints strictly inside (a, b).
        #[arg(long)]
        interior: bool,
        /// Level for the decomposition (defaults to f(a) = f(b)).
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        level: Option<Rational>,
        /// Human-readable output with interval notation.
        #[arg(long)]
        pretty: bool,
    },
    /// Find a chord of a given length, or certify that none exists.
    FindChord {
        file: PathBuf,
        #[arg(long, value_parser = parse_rational, conflicts_with = "divisor", required_unless_present = "divisor")]
        length: Option<Rational>,
        /// Look for a chord of length (b - a) / n.
        #[arg(long)]
        divisor: Option<u64>,
    },
    /// Build a loop with no chord of the given length.
    Counterexample {
        #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = parse_rational, allow_hyphen_values = true)]
        interval: Vec<Rational>,
        #[arg(long, value_parser = parse_rational)]
        distance: Rational,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Randomized descent on the measure of the chord set.
    Search(SearchArgs),
    /// Emit one of the built-in function families.
    Generate {
        #[command(subcommand)]
        kind: GenerateKind,
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value_t = 8)]
    breakpoints: usize,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 200)]
    steps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = CliVariant::Full)]
    variant: CliVariant,
    /// Starting function for every restart.
    #[arg(long)]
    initial: Option<PathBuf>,
    #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = parse_rational, allow_hyphen_values = true)]
    domain: Option<Vec<Rational>>,
    /// Perturbation step is 1/DENOMINATOR.
    #[arg(long, default_value_t = 16)]
    denominator: u32,
    /// Only move breakpoint values, never their positions.
    #[arg(long)]
    no_x_moves: bool,
    /// Write the (restart, step, objective) trace as CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CliVariant {
    Full,
    Interior,
}

impl From<CliVariant> for Variant {
    fn from(v: CliVariant) -> Self {
        match v {
            CliVariant::Full => Variant::Full,
            CliVariant::Interior => Variant::Interior,
        }
    }
}

#[derive(Subcommand)]
enum GenerateKind {
    /// Triangular bump vanishing at both ends.
    Bump {
        #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = parse_rational, allow_hyphen_values = true)]
        interval: Vec<Rational>,
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true)]
        height: Rational,
    },
    /// Same-sign bumps on ordered intervals, zero in between.
    BumpTrain {
        /// Repeat once per bump.
        #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = parse_rational, allow_hyphen_values = true, action = clap::ArgAction::Append, required = true)]
        interval: Vec<Rational>,
        /// One height per bump.
        #[arg(long, value_parser = parse_rational, allow_hyphen_values = true, required = true)]
        height: Vec<Rational>,
        /// Peak position inside each interval, as a fraction in (0, 1).
        #[arg(long, value_parser = parse_rational)]
        peak: Vec<Rational>,
    },
    /// The sign-pattern examples on [0, 3].
    Pathological {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        variant: u8,
    },
    /// Seeded random loop.
    Random {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        breakpoints: usize,
        #[arg(long, num_args = 2, value_names = ["A", "B"], value_parser = parse_rational, allow_hyphen_values = true)]
        interval: Option<Vec<Rational>>,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], value_parser = parse_rational, allow_hyphen_values = true)]
        range: Option<Vec<Rational>>,
    },
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    rational::parse(s).map_err(|e| e.to_string())
}

/// Failure of one command, carrying its exit code.
enum Failure {
    Domain(String),
    Malformed(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_malformed_input() {
            Failure::Malformed(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Outcome = Result<serde_json::Value, Failure>;

fn to_json<T: Serialize>(value: &T) -> serde_json::Value {
    serde_json::to_value(value).expect("output types serialize")
}

fn read_function(path: &Path) -> Result<PLFunction, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Malformed(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Malformed(format!("{}: not a function file: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Domain(format!("cannot write {}: {e}", path.display())))
}

fn write_function(path: &Path, f: &PLFunction) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(f).expect("functions serialize");
    write_file(path, &(text + "\n"))
}

fn pair(values: &[Rational]) -> (Rational, Rational) {
    (values[0].clone(), values[1].clone())
}

#[derive(Serialize)]
struct AnalyzeReport {
    df: IntervalSet,
    #[serde(with = "rational::serde_str")]
    mu: Rational,
    #[serde(with = "rational::serde_opt_str")]
    bound: Option<Rational>,
    holds: Option<bool>,
    decomposition: LevelDecomposition,
    #[serde(skip_serializing_if = "Option::is_none")]
    contributions: Option<chord_core::chords::Contributions>,
    #[serde(skip_serializing_if = "Option::is_none")]
    interior_df: Option<IntervalSet>,
    #[serde(skip_serializing_if = "Option::is_none", with = "rational::serde_opt_str")]
    interior_mu: Option<Rational>,
}

impl AnalyzeReport {
    fn pretty(&self) -> String {
        let opt = |r: &Option<Rational>| r.as_ref().map_or("n/a".to_string(), Rational::to_string);
        let mut lines = vec![
            format!("D_f      = {}", self.df),
            format!("mu(D_f)  = {}", self.mu),
            format!("bound    = {}", opt(&self.bound)),
            format!("holds    = {}", self.holds.map_or("n/a".to_string(), |h| h.to_string())),
            format!("level    = {}", self.decomposition.level),
            format!("A_>      = {}", self.decomposition.above),
            format!("A_<      = {}", self.decomposition.below),
            format!("A_=      = {}", self.decomposition.equal),
        ];
        if let Some(interior) = &self.interior_df {
            lines.push(format!("interior = {interior}"));
            lines.push(format!("mu(int)  = {}", opt(&self.interior_mu)));
        }
        lines.join("\n")
    }
}

fn analyze(file: &Path, interior: bool, level: Option<Rational>) -> Result<AnalyzeReport, Failure> {
    let f = read_function(file)?;
    let (df, bound, holds, contributions, loop_decomposition) = if f.is_closed_loop() {
        let r = verify_measure_bound(&f)?;
        (r.df, Some(r.bound), Some(r.holds), Some(r.contributions), Some(r.decomposition))
    } else if level.is_some() {
        (chord_set(&f), None, None, None, None)
    } else {
        return Err(f.loop_level().unwrap_err().into());
    };
    let decomposition = match (level, loop_decomposition) {
        (Some(level), _) => f.level_decomposition(&level),
        (None, Some(d)) => d,
        (None, None) => unreachable!("non-loops without --level returned above"),
    };
    let interior_df = interior.then(|| interior_chord_set(&f));
    Ok(AnalyzeReport {
        mu: df.measure(),
        df,
        bound,
        holds,
        decomposition,
        contributions,
        interior_mu: interior_df.as_ref().map(IntervalSet::measure),
        interior_df,
    })
}

fn find_chord(file: &Path, length: Option<Rational>, divisor: Option<u64>) -> Outcome {
    let f = read_function(file)?;
    let witness = match (length, divisor) {
        (Some(d), None) => find_chord_of_length(&f, &d)?,
        (None, Some(n)) => Some(find_divisor_chord(&f, n)?),
        _ => return Err(Failure::Malformed("give exactly one of --length or --divisor".into())),
    };
    Ok(match witness {
        Some(w) => to_json(&w),
        None => serde_json::json!({ "absent": true }),
    })
}

fn counterexample(interval: &[Rational], distance: &Rational, output: Option<&Path>) -> Outcome {
    let (a, b) = pair(interval);
    let parts = make_counterexample(&a, &b, distance)?;
    if chord_set(&parts.f).contains(distance) {
        return Err(Error::Internal(format!("constructed loop still has a chord of length {distance}")).into());
    }
    eprintln!("excluded: {distance}");
    if let Some(path) = output {
        write_function(path, &parts.f)?;
    }
    Ok(serde_json::json!({
        "distance": distance.to_string(),
        "excluded": true,
        "file": output.map(|p| p.display().to_string()),
        "p": to_json(&parts.p),
        "m": to_json(&parts.m),
        "f": to_json(&parts.f),
    }))
}

fn search(args: &SearchArgs) -> Outcome {
    let domain = match &args.domain {
        Some(d) => {
            let (a, b) = pair(d);
            Domain { a, b }
        }
        None => SearchConfig::default().domain,
    };
    let initial = args.initial.as_deref().map(read_function).transpose()?;
    let config = SearchConfig {
        breakpoint_count: args.breakpoints,
        restarts: args.restarts,
        steps_per_restart: args.steps,
        seed: args.seed,
        variant: args.variant.into(),
        domain,
        perturbation_denominator: args.denominator,
        perturb_x: !args.no_x_moves,
        initial,
    };
    let result = minimize(&config)?;
    if let Some(path) = &args.trace {
        write_file(path, &result.trace_csv())?;
    }
    Ok(to_json(&result))
}

fn generate(kind: &GenerateKind) -> Result<PLFunction, Failure> {
    let f = match kind {
        GenerateKind::Bump { interval, height } => {
            let (a, b) = pair(interval);
            single_bump(&a, &b, height)?
        }
        GenerateKind::BumpTrain { interval, height, peak } => {
            let intervals = interval.chunks(2).map(pair).collect();
            let spec = BumpSpec::new(intervals, height.clone()).with_peaks(peak.clone());
            bump_train(&spec)?.0
        }
        GenerateKind::Pathological { variant } => pathological_example(*variant)?,
        GenerateKind::Random { seed, breakpoints, interval, range } => {
            let (a, b) = interval.as_deref().map_or((rational::int(0), rational::int(1)), pair);
            let (lo, hi) = range.as_deref().map_or((rational::int(-1), rational::int(1)), pair);
            let range = Interval::closed(lo, hi).ok_or_else(|| Failure::Domain("empty value range".into()))?;
            random_loop(*seed, *breakpoints, &a, &b, &range)?
        }
    };
    Ok(f)
}

fn run(cli: Cli) -> Result<String, Failure> {
    let value = match cli.command {
        Command::Analyze { file, interior, level, pretty } => {
            let report = analyze(&file, interior, level)?;
            if pretty {
                return Ok(report.pretty());
            }
            to_json(&report)
        }
        Command::FindChord { file, length, divisor } => find_chord(&file, length, divisor)?,
        Command::Counterexample { interval, distance, output } => {
            counterexample(&interval, &distance, output.as_deref())?
        }
        Command::Search(args) => search(&args)?,
        Command::Generate { kind, output } => {
            let f = generate(&kind)?;
            match output {
                Some(path) => {
                    write_function(&path, &f)?;
                    serde_json::json!({ "file": path.display().to_string(), "function": to_json(&f) })
                }
                None => to_json(&f),
            }
        }
    };
    Ok(serde_json::to_string_pretty(&value).expect("JSON values serialize"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(std::io::stdout().lock(), "{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Malformed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
