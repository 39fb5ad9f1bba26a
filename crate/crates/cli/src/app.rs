//! Argument parsing and dispatch for the `motzkin` binary.
//!
//! Exit codes: 0 success, 1 domain error, 2 usage error, 3 verification failure.

use std::ffi::OsString;
use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use motzkin_core::analytics::{limit_distribution, series_distribution, summary, ErratumPolicy, Method};
use motzkin_core::bijections::{
    noncrossing_to_s, s_to_noncrossing, s_to_ternary, t_to_tree_pair, ternary_to_s, tree_pair_to_t,
};
use motzkin_core::enumeration::{count_closed_form, distribution_bruteforce, generate_paths};
use motzkin_core::paths::{classify, parse_path};
use motzkin_core::series::format_rational;
use motzkin_core::trees::{
    decode_noncrossing, decode_pair, decode_ternary, encode_noncrossing, encode_pair, encode_ternary,
};
use motzkin_core::verify::{self, Suite};
use motzkin_core::{Error, LatticePath, PathKind, Statistic};
use serde_json::json;

use crate::render::{self, render_noncrossing, render_path, render_ternary};

pub const EXIT_OK: u8 = 0;
pub const EXIT_DOMAIN: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_VERIFY: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "motzkin", version, about = "Exact combinatorics of S- and T-Motzkin paths")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the number of paths of size n (length 3n).
    Count(CountArgs),
    /// Stream every path of size n.
    Enumerate(EnumerateArgs),
    /// Apply a bijection to each input object.
    Map(MapArgs),
    /// Mean and variance, or the full distribution, of a statistic.
    Stats(StatsArgs),
    /// Limit law of a statistic as n grows.
    Limit(LimitArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Draw a path or tree.
    Render(RenderArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[arg(long, value_parser = parse_class)]
    class: PathKind,
    #[arg(long)]
    n: usize,
    /// Print every size from the smallest up to n.
    #[arg(long)]
    upto: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Debug, Args)]
struct EnumerateArgs {
    #[arg(long, value_parser = parse_class)]
    class: PathKind,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ObjectKind {
    SPath,
    TPath,
    Ternary,
    TernaryPair,
    Noncrossing,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// File to read, or "-" for standard input.
    #[arg(long, default_value = "-")]
    input: String,
    /// Literal input, taking precedence over --input.
    #[arg(long)]
    value: Option<String>,
}

#[derive(Debug, Args)]
struct MapArgs {
    #[arg(long, value_enum)]
    from: ObjectKind,
    #[arg(long, value_enum)]
    to: ObjectKind,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Bruteforce,
    Series,
    #[value(alias = "closed-form", alias = "closed_form")]
    Closedform,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Bruteforce => Method::Bruteforce,
            MethodArg::Series => Method::Series,
            MethodArg::Closedform => Method::ClosedForm,
        }
    }
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long, value_parser = parse_class)]
    class: PathKind,
    #[arg(long, value_parser = parse_stat)]
    stat: Statistic,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "series")]
    method: MethodArg,
    /// Print P(K = k) counts instead of the moments.
    #[arg(long)]
    distribution: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolicyArg {
    Corrected,
    AsPrinted,
}

#[derive(Debug, Args)]
struct LimitArgs {
    #[arg(long, value_parser = parse_class)]
    class: PathKind,
    #[arg(long, value_parser = parse_stat)]
    stat: Statistic,
    /// Largest k whose limiting probability is printed.
    #[arg(long, default_value_t = 10)]
    k: usize,
    /// Whether misprinted limit formulas are replaced by their corrections.
    #[arg(long, value_enum, default_value = "corrected")]
    policy: PolicyArg,
    #[arg(long, value_enum, default_value = "text")]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum VerifyFormat {
    Text,
    Table,
    Json,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_parser = parse_suite, default_value = "all")]
    suite: Suite,
    /// Size bound for the enumerative suites (counts, bijections, stats).
    #[arg(long)]
    max_n: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: VerifyFormat,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RenderKind {
    Path,
    Ternary,
    Noncrossing,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
    Tikz,
}

#[derive(Debug, Args)]
struct RenderArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    kind: RenderKind,
    #[arg(long, value_enum, default_value = "ascii")]
    format: RenderFormat,
}

fn parse_class(s: &str) -> Result<PathKind, Error> {
    s.parse()
}

fn parse_stat(s: &str) -> Result<Statistic, Error> {
    s.parse()
}

fn parse_suite(s: &str) -> Result<Suite, Error> {
    s.parse()
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Verification,
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

type Outcome = Result<(), Failure>;

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.command {
        Command::Count(a) => count(a, out),
        Command::Enumerate(a) => enumerate(a, out),
        Command::Map(a) => map(a, stdin, out),
        Command::Stats(a) => stats(a, out),
        Command::Limit(a) => limit(a, out),
        Command::Verify(a) => run_verify(a, out),
        Command::Render(a) => run_render(a, stdin, out),
    };
    let result = result.and_then(|()| out.flush().map_err(Failure::Io));
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Domain(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Verification) => EXIT_VERIFY,
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DOMAIN
        }
    }
}

/// One JSON document per line, keys sorted so that re-serialising is the identity.
fn write_json(out: &mut dyn Write, value: &impl serde::Serialize) -> Result<(), Failure> {
    let value = serde_json::to_value(value)?;
    writeln!(out, "{}", serde_json::to_string(&value)?)?;
    Ok(())
}

fn count(a: CountArgs, out: &mut dyn Write) -> Outcome {
    let first = if a.class == PathKind::U { 1 } else { 0 };
    let sizes: Vec<usize> = if a.upto { (first..=a.n).collect() } else { vec![a.n] };
    let mut rows = Vec::new();
    for n in sizes {
        rows.push((n, count_closed_form(a.class, n)?));
    }
    match a.format {
        OutputFormat::Text if a.upto => {
            for (n, c) in rows {
                writeln!(out, "{n} {c}")?;
            }
        }
        OutputFormat::Text => writeln!(out, "{}", rows[0].1)?,
        OutputFormat::Json => {
            let items: Vec<_> =
                rows.iter().map(|(n, c)| json!({"class": a.class, "n": n, "count": c.to_string()})).collect();
            let doc = if a.upto { json!(items) } else { items[0].clone() };
            write_json(out, &doc)?;
        }
    }
    Ok(())
}

fn enumerate(a: EnumerateArgs, out: &mut dyn Write) -> Outcome {
    if a.class == PathKind::U && a.n == 0 {
        return Err(Error::Domain("U-paths have n >= 1".into()).into());
    }
    let mut out = io::BufWriter::new(out);
    match a.format {
        OutputFormat::Text => {
            for p in generate_paths(a.class, a.n) {
                writeln!(out, "{p}")?;
            }
        }
        OutputFormat::Json => {
            write!(out, "[")?;
            for (i, p) in generate_paths(a.class, a.n).enumerate() {
                let sep = if i == 0 { "" } else { "," };
                write!(out, "{sep}{}", serde_json::to_string(&p.to_string())?)?;
            }
            writeln!(out, "]")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn read_input(input: &InputArgs, stdin: &mut dyn Read) -> Result<String, Failure> {
    if let Some(v) = &input.value {
        return Ok(v.clone());
    }
    let mut text = String::new();
    if input.input == "-" {
        BufReader::new(stdin).read_to_string(&mut text)?;
    } else {
        text = fs::read_to_string(&input.input)
            .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", input.input)))?;
    }
    Ok(text)
}

/// Objects in the input: one per non-blank line, or the whole text when it is a single
/// multi-line JSON document.
fn split_objects(kind: ObjectKind, text: &str) -> Vec<String> {
    let lines: Vec<String> =
        text.lines().map(str::trim).filter(|l| !l.is_empty()).map(str::to_string).collect();
    let is_json = !matches!(kind, ObjectKind::SPath | ObjectKind::TPath);
    if is_json && lines.len() > 1 && serde_json::from_str::<serde_json::Value>(&lines[0]).is_err() {
        return vec![text.trim().to_string()];
    }
    lines
}

enum Hub {
    S(LatticePath),
    T(LatticePath),
}

fn require_class(path: LatticePath, t: bool) -> Result<LatticePath, Failure> {
    let c = classify(&path);
    let ok = path.is_empty() || if t { c.t_motzkin } else { c.s_motzkin };
    if ok {
        Ok(path)
    } else {
        let which = if t { "a T" } else { "an S" };
        Err(Failure::Domain(format!("{path} is not {which}-Motzkin path")))
    }
}

fn to_hub(kind: ObjectKind, text: &str) -> Result<Hub, Failure> {
    Ok(match kind {
        ObjectKind::SPath => Hub::S(require_class(parse_path(text)?, false)?),
        ObjectKind::TPath => Hub::T(require_class(parse_path(text)?, true)?),
        ObjectKind::Ternary => Hub::S(ternary_to_s(&decode_ternary(text)?)),
        ObjectKind::Noncrossing => Hub::S(noncrossing_to_s(&decode_noncrossing(text)?)),
        ObjectKind::TernaryPair => Hub::T(tree_pair_to_t(&decode_pair(text)?)),
    })
}

fn from_hub(hub: Hub, kind: ObjectKind) -> Result<String, Failure> {
    Ok(match (hub, kind) {
        (Hub::S(p), ObjectKind::SPath) | (Hub::T(p), ObjectKind::TPath) => p.to_string(),
        (Hub::S(p), ObjectKind::Ternary) => encode_ternary(&s_to_ternary(&p)?),
        (Hub::S(p), ObjectKind::Noncrossing) => encode_noncrossing(&s_to_noncrossing(&p)?),
        (Hub::T(p), ObjectKind::TernaryPair) => encode_pair(&t_to_tree_pair(&p)?),
        (Hub::S(_), k) | (Hub::T(_), k) => {
            return Err(Failure::Domain(format!(
                "no bijection to {}: s-path, ternary and noncrossing map among themselves, as do t-path and ternary-pair",
                k.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
            )))
        }
    })
}

fn map(a: MapArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    let text = read_input(&a.input, stdin)?;
    for object in split_objects(a.from, &text) {
        let hub = to_hub(a.from, &object)?;
        writeln!(out, "{}", from_hub(hub, a.to)?)?;
    }
    Ok(())
}

fn stats(a: StatsArgs, out: &mut dyn Write) -> Outcome {
    let method = Method::from(a.method);
    if a.distribution {
        let d = match method {
            Method::Bruteforce => distribution_bruteforce(a.class, a.stat, a.n)?,
            Method::Series => series_distribution(a.class, a.stat, a.n)?,
            Method::ClosedForm => {
                return Err(Failure::Domain("closed forms give moments only; use --method series or bruteforce".into()))
            }
        };
        match a.format {
            OutputFormat::Text => {
                for (k, c) in &d.counts {
                    writeln!(out, "{k} {c}")?;
                }
            }
            OutputFormat::Json => write_json(out, &d)?,
        }
        return Ok(());
    }
    let s = summary(a.class, a.stat, a.n, method)?;
    match a.format {
        OutputFormat::Text => {
            writeln!(out, "mean {}", format_rational(&s.mean))?;
            writeln!(out, "variance {}", format_rational(&s.variance))?;
        }
        OutputFormat::Json => write_json(out, &s)?,
    }
    Ok(())
}

fn limit(a: LimitArgs, out: &mut dyn Write) -> Outcome {
    let policy = match a.policy {
        PolicyArg::Corrected => ErratumPolicy::Corrected,
        PolicyArg::AsPrinted => ErratumPolicy::AsPrinted,
    };
    let law = limit_distribution(a.class, a.stat, policy)?;
    let probs = law.probabilities(a.k)?;
    let mean = law.mean()?;
    match a.format {
        OutputFormat::Text => {
            writeln!(out, "pgf {}", law.pgf_text)?;
            if law.erratum_corrected {
                writeln!(out, "note corrected form of a misprinted formula")?;
            }
            writeln!(out, "mean {}", format_rational(&mean))?;
            for (k, p) in probs.iter().enumerate() {
                writeln!(out, "{k} {}", format_rational(p))?;
            }
        }
        OutputFormat::Json => {
            let doc = json!({
                "class": law.class,
                "stat": law.stat,
                "pgf": law.pgf_text,
                "erratum_corrected": law.erratum_corrected,
                "mean": format_rational(&mean),
                "probabilities": probs.iter().map(format_rational).collect::<Vec<_>>(),
            });
            write_json(out, &doc)?;
        }
    }
    Ok(())
}

fn run_verify(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    let reports = verify::run(a.suite, a.max_n)?;
    let passed = reports.iter().all(verify::SuiteReport::passed);
    match a.format {
        VerifyFormat::Table => write_verify_table(&reports, out)?,
        VerifyFormat::Text => {
            let (mut total, mut failed, mut known) = (0, 0, 0);
            for r in &reports {
                for c in &r.checks {
                    total += 1;
                    failed += usize::from(!c.passed && !c.known_failure);
                    known += usize::from(!c.passed && c.known_failure);
                    let detail = if c.detail.is_empty() { String::new() } else { format!(" ({})", c.detail) };
                    writeln!(out, "{:<5} {}: {}{detail}", c.label(), r.suite, c.name)?;
                }
            }
            writeln!(
                out,
                "{} {} suites, {total} checks, {failed} failed, {known} known failures",
                if passed { "PASS" } else { "FAIL" },
                reports.len()
            )?;
        }
        VerifyFormat::Json => {
            let doc = json!({ "passed": passed, "suites": reports });
            write_json(out, &doc)?;
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn write_verify_table(reports: &[verify::SuiteReport], out: &mut dyn Write) -> io::Result<()> {
    let rows: Vec<[String; 4]> = reports
        .iter()
        .flat_map(|r| {
            r.checks.iter().map(move |c| [c.label().to_string(), r.suite.to_string(), c.name.clone(), c.detail.clone()])
        })
        .collect();
    let header = [String::from("status"), "suite".into(), "check".into(), "detail".into()];
    let mut width = [0usize; 3];
    for row in std::iter::once(&header).chain(&rows) {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    for row in std::iter::once(&header).chain(&rows) {
        let line = format!("{:<w0$}  {:<w1$}  {:<w2$}  {}", row[0], row[1], row[2], row[3], w0 = width[0], w1 = width[1], w2 = width[2]);
        writeln!(out, "{}", line.trim_end())?;
    }
    Ok(())
}

fn run_render(a: RenderArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> Outcome {
    let text = read_input(&a.input, stdin)?;
    let text = text.trim();
    let format = match a.format {
        RenderFormat::Ascii => render::Format::Ascii,
        RenderFormat::Svg => render::Format::Svg,
        RenderFormat::Tikz => render::Format::Tikz,
    };
    let doc = match a.kind {
        RenderKind::Path => render_path(&parse_path(text)?, format),
        RenderKind::Ternary => render_ternary(&decode_ternary(text)?, format),
        RenderKind::Noncrossing => render_noncrossing(&decode_noncrossing(text)?, format),
    };
    out.write_all(doc.as_bytes())?;
    Ok(())
}

/// Lines of a reader, for callers streaming objects one at a time.
pub fn lines(reader: impl Read) -> impl Iterator<Item = io::Result<String>> {
    BufReader::new(reader).lines()
}
