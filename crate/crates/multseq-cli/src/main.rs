//! Command-line driver: every pipeline of the multseq library behind one
//! binary, with file-based inputs and deterministic text outputs suitable
//! for reproduction runs and external plotting.
//!
//! Exit codes: 0 on success, 1 on any validation or usage error, 2 when a
//! constructed certificate fails its own replay verification.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;

use multseq::dirichlet::{euler_check, predicted_poles};
use multseq::kernelscope::{build_dfao_vp, kernel_explore, ExceededReason, KernelResult};
use multseq::multcore::{MultValue, SequenceSpec};
use multseq::witnesses::{
    build_witness_general, build_witness_t2, disprove_period, WitnessReport,
};
use multseq::wordstats::{
    complexity_profile, dyadic_grid, fit_exponent, morse_hedlund_check, ComplexityProfile,
    MorseHedlund,
};

/// Environment variable holding a hard upper bound for any requested prefix,
/// window, term count, or search budget.
const ENV_CAP: &str = "MULTSEQ_MAX_N";

const DEFAULT_WITNESS_BUDGET: usize = 1 << 22;

#[derive(Parser)]
#[command(
    name = "multseq",
    version,
    about = "Factor complexity, automata, witnesses and series checks for \
             completely multiplicative sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a sequence description file and echo its canonical form.
    Validate(ValidateArgs),
    /// Materialize a window of sequence values.
    Gen(GenArgs),
    /// Exact distinct-factor counts per length over a prefix.
    Complexity(ComplexityArgs),
    /// Least-squares growth exponent of p(n) across a dyadic length grid.
    Fit(FitArgs),
    /// Scan a profile for the eventual-periodicity threshold p(n) <= n.
    Mh(MhArgs),
    /// Explore the k-kernel of the zero-padded prefix.
    Kernel(KernelArgs),
    /// Build the base-p digit automaton of a valuation-power family.
    Dfao(DfaoArgs),
    /// Refute a claimed eventual period of a valuation-power family.
    Period(PeriodArgs),
    /// Construct replay-verified distinct-factor witness reports.
    Witness(WitnessArgs),
    /// Predicted pole ordinates of one prime's rational series factor.
    Poles(PolesArgs),
    /// Compare a Dirichlet partial sum against its closed form.
    Euler(EulerArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Json,
    Csv,
    Dot,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Human => "human",
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Dot => "dot",
        }
    }
}

#[derive(Args)]
struct ValidateArgs {
    /// Sequence description (JSON file).
    #[arg(long)]
    spec: PathBuf,
    /// human | json
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Number of consecutive terms.
    #[arg(long = "N")]
    len: usize,
    /// Start index in the spec's domain (decimal, arbitrary size); defaults
    /// to the domain origin.
    #[arg(long)]
    start: Option<String>,
    /// human | csv
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComplexityArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Prefix length to index.
    #[arg(long = "N")]
    len: usize,
    /// Largest factor length to count.
    #[arg(long)]
    nmax: usize,
    /// csv | human
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Base prefix length; stability is judged against the doubled prefix.
    #[arg(long = "N")]
    len: usize,
    /// Largest grid length.
    #[arg(long)]
    nmax: usize,
    /// Smallest grid length.
    #[arg(long, default_value_t = 8)]
    grid_lo: usize,
    /// json | human
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MhArgs {
    #[arg(long)]
    spec: PathBuf,
    #[arg(long = "N")]
    len: usize,
    /// Largest length scanned.
    #[arg(long)]
    nmax: usize,
    /// human | json
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Prefix length (the sequence is padded to start at index 0).
    #[arg(long = "N")]
    len: usize,
    /// Subsampling base.
    #[arg(long)]
    k: u32,
    /// Give up after this many distinct subsequences.
    #[arg(long, default_value_t = 4096)]
    max_states: usize,
    /// Symbols compared when identifying two subsequences.
    #[arg(long, default_value_t = multseq::kernelscope::DEFAULT_MIN_WINDOW)]
    min_window: usize,
    /// json | human
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DfaoArgs {
    /// The prime whose valuation drives the family.
    #[arg(long)]
    p: u64,
    /// Progression step in v_p(q*n + b).
    #[arg(long)]
    q: u64,
    /// Progression offset in v_p(q*n + b).
    #[arg(long)]
    b: u64,
    /// Exponent e of the unit value, i.e. terms are w^(e * v_p(q*n+b)).
    #[arg(long)]
    exponent: u32,
    /// Order m of the root-of-unity group.
    #[arg(long)]
    modulus: u32,
    /// dot | human
    #[arg(long, value_enum, default_value = "dot")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PeriodArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    b: u64,
    #[arg(long)]
    exponent: u32,
    #[arg(long)]
    modulus: u32,
    /// The period to refute.
    #[arg(long = "T")]
    period: u64,
    /// Length of the excused initial segment.
    #[arg(long, default_value_t = 0)]
    skip: u64,
    /// human | json
    #[arg(long, value_enum, default_value = "human")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessArgs {
    /// Use the built-in two-prime sign sequence on {2, 3}.
    #[arg(long)]
    t2: bool,
    /// Sequence description for the general construction.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Factor length in each isolating subsequence.
    #[arg(long)]
    n: usize,
    /// Largest subsequence prefix scanned for distinct factors.
    #[arg(long, default_value_t = DEFAULT_WITNESS_BUDGET)]
    budget: usize,
    /// json | human
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PolesArgs {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    exponent: u32,
    #[arg(long)]
    modulus: u32,
    /// Smallest lattice index.
    #[arg(long, default_value_t = -4, allow_hyphen_values = true)]
    lo: i64,
    /// Largest lattice index.
    #[arg(long, default_value_t = 4, allow_hyphen_values = true)]
    hi: i64,
    /// csv | human
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EulerArgs {
    #[arg(long)]
    spec: PathBuf,
    /// Real evaluation point, s > 1.
    #[arg(long)]
    s: f64,
    /// Terms in the partial sum.
    #[arg(long = "N")]
    terms: usize,
    /// json | human
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failure carrying the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, Failure>;

impl Failure {
    fn invalid(message: String) -> Failure {
        Failure { code: 1, message }
    }
}

impl From<multseq::Error> for Failure {
    fn from(e: multseq::Error) -> Failure {
        let code = match e {
            multseq::Error::VerificationFailed(_) => 2,
            _ => 1,
        };
        Failure { code, message: e.to_string() }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; only real usage errors
            // should exit nonzero
            let code = u8::from(e.use_stderr());
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: Command) -> CliResult<()> {
    match command {
        Command::Validate(a) => {
            ensure_format(a.format, &[Format::Human, Format::Json])?;
            let spec = load_spec(&a.spec)?;
            let text = match a.format {
                Format::Json => spec.to_json(),
                _ => describe_spec(&spec),
            };
            emit(&text, a.out.as_deref())
        }
        Command::Gen(a) => {
            ensure_format(a.format, &[Format::Human, Format::Csv])?;
            let spec = load_spec(&a.spec)?;
            let len = capped("N", a.len)?;
            let start = match &a.start {
                None => BigUint::from(spec.origin()),
                Some(text) => text.parse::<BigUint>().map_err(|e| {
                    Failure::invalid(format!("start index {text:?} is not a decimal integer: {e}"))
                })?,
            };
            let word = spec.window(&start, len)?;
            let mut text = String::new();
            match a.format {
                Format::Csv => {
                    text.push_str("index,value\n");
                    for (i, v) in word.values().enumerate() {
                        let _ = writeln!(text, "{},{}", &start + i, v.display(spec.modulus()));
                    }
                }
                _ => {
                    let _ = writeln!(
                        text,
                        "{} terms from index {start} of {}",
                        word.len(),
                        spec.fingerprint()
                    );
                    let rendered: Vec<String> =
                        word.values().map(|v| v.display(spec.modulus())).collect();
                    let _ = writeln!(text, "{}", rendered.join(" "));
                }
            }
            emit(&text, a.out.as_deref())
        }
        Command::Complexity(a) => {
            ensure_format(a.format, &[Format::Csv, Format::Human])?;
            let profile = profile_of(&a.spec, a.len, a.nmax)?;
            let text = match a.format {
                Format::Csv => profile.to_csv(),
                _ => {
                    let mut text = format!(
                        "distinct factors per length, prefix {} (origin {})\n",
                        profile.prefix_len(),
                        profile.origin()
                    );
                    for n in 1..=profile.n_max() {
                        let _ = writeln!(text, "  p({n}) = {}", profile.count(n));
                    }
                    text
                }
            };
            emit(&text, a.out.as_deref())
        }
        Command::Fit(a) => {
            ensure_format(a.format, &[Format::Json, Format::Human])?;
            let doubled = a
                .len
                .checked_mul(2)
                .ok_or_else(|| Failure::invalid("prefix length overflows".into()))?;
            let base = profile_of(&a.spec, a.len, a.nmax)?;
            let extended = profile_of(&a.spec, doubled, a.nmax)?;
            let grid = dyadic_grid(a.grid_lo, a.nmax);
            let fit = fit_exponent(&base, &extended, &grid)?;
            let text = match a.format {
                Format::Json => json!({
                    "slope": fit.slope,
                    "intercept": fit.intercept,
                    "r_squared": fit.r_squared,
                    "stable": fit.stable,
                    "grid": fit.grid,
                })
                .to_string(),
                _ => format!(
                    "slope {} (intercept {}, r^2 {}) over {} grid points; stable: {}",
                    fit.slope,
                    fit.intercept,
                    fit.r_squared,
                    fit.grid.len(),
                    if fit.stable { "yes" } else { "no" }
                ),
            };
            emit(&text, a.out.as_deref())
        }
        Command::Mh(a) => {
            ensure_format(a.format, &[Format::Human, Format::Json])?;
            let profile = profile_of(&a.spec, a.len, a.nmax)?;
            let verdict = morse_hedlund_check(&profile);
            let text = match (a.format, verdict) {
                (Format::Json, MorseHedlund::Triggered(n)) => {
                    json!({ "triggered": true, "n": n, "nmax": profile.n_max() }).to_string()
                }
                (Format::Json, MorseHedlund::NotTriggered) => {
                    json!({ "triggered": false, "n": null, "nmax": profile.n_max() }).to_string()
                }
                (_, MorseHedlund::Triggered(n)) => format!(
                    "threshold hit: p({n}) <= {n}; consistent with an eventually periodic word \
                     at this scale"
                ),
                (_, MorseHedlund::NotTriggered) => format!(
                    "p(n) >= n + 1 for every n <= {}; not eventually periodic at this scale",
                    profile.n_max()
                ),
            };
            emit(&text, a.out.as_deref())
        }
        Command::Kernel(a) => {
            ensure_format(a.format, &[Format::Json, Format::Human])?;
            let spec = load_spec(&a.spec)?;
            let len = capped("N", a.len)?;
            let word = spec.prefix_from_zero(len)?;
            let result = kernel_explore(&word, a.k, a.max_states, a.min_window)?;
            let text = render_kernel(&result, a.format);
            emit(&text, a.out.as_deref())
        }
        Command::Dfao(a) => {
            ensure_format(a.format, &[Format::Dot, Format::Human])?;
            let dfao = build_dfao_vp(a.p, a.q, a.b, MultValue::Unit(a.exponent), a.modulus)?;
            let text = match a.format {
                Format::Dot => dfao.to_dot(),
                _ => {
                    let mut text = format!(
                        "base-{} automaton with {} states, initial {}\n",
                        dfao.base(),
                        dfao.state_count(),
                        dfao.initial()
                    );
                    for s in 0..dfao.state_count() {
                        let targets: Vec<String> = (0..dfao.base())
                            .map(|d| format!("{d}->{}", dfao.transition(s, d)))
                            .collect();
                        let _ = writeln!(
                            text,
                            "  state {s}: output {}; {}",
                            dfao.output(s).display(a.modulus),
                            targets.join(" ")
                        );
                    }
                    text
                }
            };
            emit(&text, a.out.as_deref())
        }
        Command::Period(a) => {
            ensure_format(a.format, &[Format::Human, Format::Json])?;
            let refutation = disprove_period(
                a.p,
                a.q,
                a.b,
                MultValue::Unit(a.exponent),
                a.modulus,
                a.period,
                a.skip,
            )?;
            let text = match a.format {
                Format::Json => json!({
                    "period": refutation.period,
                    "skip": refutation.skip,
                    "index": refutation.index.to_string(),
                    "value_at": refutation.value_at.display(a.modulus),
                    "value_shifted": refutation.value_shifted.display(a.modulus),
                })
                .to_string(),
                _ => format!(
                    "period {} refuted past index {}: term({}) = {} but term({} + {}) = {}",
                    refutation.period,
                    refutation.skip,
                    refutation.index,
                    refutation.value_at.display(a.modulus),
                    refutation.index,
                    refutation.period,
                    refutation.value_shifted.display(a.modulus),
                ),
            };
            emit(&text, a.out.as_deref())
        }
        Command::Witness(a) => {
            ensure_format(a.format, &[Format::Json, Format::Human])?;
            let budget = capped("budget", a.budget)?;
            let report = match (&a.spec, a.t2) {
                (Some(_), true) => {
                    return Err(Failure::invalid(
                        "--t2 and --spec are mutually exclusive".into(),
                    ))
                }
                (None, false) => {
                    return Err(Failure::invalid(
                        "choose a construction: --t2 or --spec <file>".into(),
                    ))
                }
                (None, true) => build_witness_t2(a.n, budget)?,
                (Some(path), false) => build_witness_general(&load_spec(path)?, a.n, budget)?,
            };
            let text = match a.format {
                Format::Json => report.to_json(),
                _ => describe_witness(&report),
            };
            emit(&text, a.out.as_deref())
        }
        Command::Poles(a) => {
            ensure_format(a.format, &[Format::Csv, Format::Human])?;
            let lattice =
                predicted_poles(a.p, MultValue::Unit(a.exponent), a.modulus, a.lo, a.hi)?;
            let text = match a.format {
                Format::Csv => lattice.to_csv(),
                _ => {
                    let mut text = format!(
                        "imaginary poles of the p = {} factor at value {}{}\n",
                        lattice.prime,
                        lattice.value.display(lattice.modulus),
                        if lattice.degenerate {
                            " (degenerate: the factor is identically 1)"
                        } else {
                            ""
                        }
                    );
                    for (n, ordinate) in &lattice.ordinates {
                        let _ = writeln!(text, "  n = {n}: {ordinate}");
                    }
                    text
                }
            };
            emit(&text, a.out.as_deref())
        }
        Command::Euler(a) => {
            ensure_format(a.format, &[Format::Json, Format::Human])?;
            let spec = load_spec(&a.spec)?;
            let terms = capped("N", a.terms)?;
            let check = euler_check(&spec, a.s, terms)?;
            let text = match a.format {
                Format::Json => check.to_json(),
                _ => format!(
                    "s = {}, {} terms: partial {} + {}i, closed form {} + {}i, |error| {}",
                    a.s,
                    check.terms,
                    check.partial.re,
                    check.partial.im,
                    check.closed_form.re,
                    check.closed_form.im,
                    check.abs_error
                ),
            };
            emit(&text, a.out.as_deref())
        }
    }
}

fn load_spec(path: &Path) -> CliResult<SequenceSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    SequenceSpec::from_json_str(&text)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn describe_spec(spec: &SequenceSpec) -> String {
    let assignment = spec.assignment();
    let units: Vec<String> = assignment
        .unit_primes()
        .into_iter()
        .map(|p| format!("{p} -> {}", assignment.value(p).display(spec.modulus())))
        .collect();
    let zeros: Vec<String> =
        assignment.zero_primes().into_iter().map(|p| p.to_string()).collect();
    let mut text = String::from("valid sequence description\n");
    let _ = writeln!(text, "  modulus  {}", spec.modulus());
    let _ = writeln!(text, "  units    {}", if units.is_empty() { "-".into() } else { units.join(", ") });
    let _ = writeln!(text, "  zeros    {}", if zeros.is_empty() { "-".into() } else { zeros.join(", ") });
    match spec.ap() {
        Some(ap) => {
            let _ = writeln!(text, "  ap       q={} b={}", ap.q, ap.b);
        }
        None => {
            let _ = writeln!(text, "  ap       -");
        }
    }
    let _ = writeln!(text, "  power    {}", spec.power());
    text
}

fn describe_witness(report: &WitnessReport) -> String {
    let residues: Vec<String> = report.residues.iter().map(|r| r.to_string()).collect();
    let mut text = format!(
        "{} distinct factors of length {} (claimed at least {}), n = {}\n",
        report.distinct_count,
        report.factor_len,
        report.bound_nominal.min(report.bound_pigeonhole),
        report.n
    );
    let primes: Vec<String> = report.primes.iter().map(|p| p.to_string()).collect();
    let _ = writeln!(text, "  primes          {}", primes.join(", "));
    let _ = writeln!(text, "  residue class   {}", residues.join(", "));
    let _ = writeln!(text, "  period exponent {}", report.period_exponent);
    let _ = writeln!(text, "  scanned prefix  {}", report.subseq_prefix_len);
    let _ = writeln!(text, "  first position  {}", report.factors[0].start);
    text
}

fn render_kernel(result: &KernelResult, format: Format) -> String {
    match (format, result) {
        (Format::Json, KernelResult::Closed { representatives, transitions, window }) => {
            let reps: Vec<serde_json::Value> = representatives
                .iter()
                .map(|r| {
                    json!({
                        "coefficient": r.coefficient,
                        "offset": r.offset,
                        "depth": r.depth,
                    })
                })
                .collect();
            json!({
                "closed": true,
                "window": window,
                "representatives": reps,
                "transitions": transitions,
            })
            .to_string()
        }
        (Format::Json, KernelResult::Exceeded { bound, depth_reached, reason }) => json!({
            "closed": false,
            "bound": bound,
            "depth_reached": depth_reached,
            "reason": match reason {
                ExceededReason::StateBudget => "state-budget",
                ExceededReason::DepthLimit => "depth-limit",
            },
        })
        .to_string(),
        (_, KernelResult::Closed { representatives, transitions, window }) => {
            let mut text = format!(
                "kernel closed: {} subsequences identified on {}-symbol windows\n",
                representatives.len(),
                window
            );
            for (i, rep) in representatives.iter().enumerate() {
                let targets: Vec<String> = transitions[i]
                    .iter()
                    .enumerate()
                    .map(|(r, t)| format!("{r}->{t}"))
                    .collect();
                let _ = writeln!(
                    text,
                    "  [{i}] coefficient {} offset {} depth {}; {}",
                    rep.coefficient,
                    rep.offset,
                    rep.depth,
                    targets.join(" ")
                );
            }
            text
        }
        (_, KernelResult::Exceeded { bound, depth_reached, reason }) => format!(
            "no closure: at least {} pairwise distinct subsequences (depth {}, {})",
            bound,
            depth_reached,
            match reason {
                ExceededReason::StateBudget => "state budget exhausted",
                ExceededReason::DepthLimit => "word too short to go deeper",
            }
        ),
    }
}

fn profile_of(spec_path: &Path, len: usize, nmax: usize) -> CliResult<ComplexityProfile> {
    let spec = load_spec(spec_path)?;
    let len = capped("N", len)?;
    let word = spec.prefix(len)?;
    Ok(complexity_profile(&word, nmax, &spec.fingerprint())?)
}

/// Enforce the environment hard cap on any size-like request.
fn capped(name: &str, requested: usize) -> CliResult<usize> {
    match std::env::var(ENV_CAP) {
        Err(_) => Ok(requested),
        Ok(text) => {
            let cap: usize = text.parse().map_err(|e| {
                Failure::invalid(format!("{ENV_CAP}={text:?} is not a length: {e}"))
            })?;
            if requested > cap {
                Err(Failure::invalid(format!(
                    "{name} = {requested} exceeds the {ENV_CAP} cap of {cap}"
                )))
            } else {
                Ok(requested)
            }
        }
    }
}

fn ensure_format(format: Format, allowed: &[Format]) -> CliResult<()> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        let names: Vec<&str> = allowed.iter().map(|f| f.name()).collect();
        Err(Failure::invalid(format!(
            "format {} is not available here (choose from: {})",
            format.name(),
            names.join(", ")
        )))
    }
}

/// Print to stdout or write the file, always ending with exactly one newline.
fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    let body = format!("{}\n", text.trim_end_matches('\n'));
    match out {
        None => {
            print!("{body}");
            Ok(())
        }
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display()))),
    }
}
