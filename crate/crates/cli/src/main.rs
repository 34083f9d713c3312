use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use grm_core::analysis::{check_lemma4, check_lemma5, classify_min_word, verify_theorem, AnalysisError, Lemma5Branch};
use grm_core::code::{enumerate_min_words, CodeError, Codeword, GrmParams, Mode, DEFAULT_BUDGET};
use grm_core::field::{Field, FieldSpec};
use grm_core::geometry::{Hyperplane, Space};
use grm_core::poly::{EvaluationTable, ReducedPoly};
use grm_core::{Verdict, VerifyOptions};

/// Generalized Reed-Muller codes: minimum-weight words and their geometry.
#[derive(Parser)]
#[command(name = "grm", version)]
struct Cli {
    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify the minimum-weight classification for one (q, m, r) cell.
    Verify(VerifyArgs),
    /// Classify the support of one minimum-weight codeword.
    Classify(ClassifyArgs),
    /// Print addition and multiplication tables of a field.
    FieldTable(FieldArgs),
    /// List all minimum-weight codewords.
    MinWords(MinWordsArgs),
    /// Look for a hyperplane avoiding a point set of size t*q^n.
    Lemma4(Lemma4Args),
    /// Intersection pattern of a minimum-weight word with parallel classes.
    Lemma5(Lemma5Args),
    /// Evaluate polynomial text to a value table.
    Eval(EvalArgs),
    /// Interpolate a value table to its reduced polynomial.
    Interp(InterpArgs),
}

#[derive(Args)]
struct FieldArgs {
    /// Field order.
    #[arg(long)]
    q: Option<u32>,
    /// Explicit field as `p,n,[c0,...,cn]` (monic modulus, low degree first).
    #[arg(long)]
    field: Option<FieldSpec>,
}

impl FieldArgs {
    fn build(&self) -> Result<Field> {
        let field = match (&self.field, self.q) {
            (Some(spec), q) => {
                let f = Field::new(spec.clone())?;
                if let Some(q) = q {
                    if q != f.q() {
                        bail!("--q {q} disagrees with --field of order {}", f.q());
                    }
                }
                f
            }
            (None, Some(q)) => Field::with_order(q)?,
            (None, None) => bail!("one of --q or --field is required"),
        };
        Ok(field)
    }
}

#[derive(Args)]
struct SpaceArgs {
    #[command(flatten)]
    field: FieldArgs,
    /// Number of variables.
    #[arg(long)]
    m: usize,
}

impl SpaceArgs {
    fn build(&self) -> Result<Space> {
        Ok(Space::new(self.field.build()?, self.m)?)
    }
}

#[derive(Args)]
struct CodeArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Order of the code.
    #[arg(long)]
    r: u32,
}

impl CodeArgs {
    fn build(&self) -> Result<GrmParams> {
        Ok(GrmParams::new(self.space.field.build()?, self.space.m, self.r)?)
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Orbit,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Exhaustive => Mode::Exhaustive,
            ModeArg::Orbit => Mode::Orbit,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Poly,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Work budget (codewords scanned or affine maps applied).
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Seed for the randomized equivariance check.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random (word, map) pairs in the equivariance check.
    #[arg(long, default_value_t = 32)]
    samples: usize,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record runtime_ms as 0 so reports are byte-identical across runs.
    #[arg(long)]
    no_timing: bool,
}

/// A codeword given as polynomial text, an inline table, or a table file.
#[derive(Args)]
#[group(required = true, multiple = false)]
struct WordInput {
    /// Polynomial text, e.g. `2*x1^2*x2 + 1`.
    #[arg(long)]
    poly: Option<String>,
    /// Comma-separated value table in canonical point order.
    #[arg(long)]
    table: Option<String>,
    /// File holding a value table.
    #[arg(long)]
    table_file: Option<PathBuf>,
}

impl WordInput {
    fn read(&self, space: &Space) -> Result<Codeword> {
        let table = if let Some(text) = &self.poly {
            ReducedPoly::parse(space, text).context("parse error in polynomial")?.to_table()
        } else if let Some(text) = &self.table {
            EvaluationTable::parse(space, text).context("parse error in table")?
        } else {
            let path = self.table_file.as_ref().expect("argument group is required");
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            EvaluationTable::parse(space, &text).context("parse error in table")?
        };
        Ok(Codeword::from_table(table))
    }
}

#[derive(Args)]
struct ClassifyArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    input: WordInput,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MinWordsArgs {
    #[command(flatten)]
    code: CodeArgs,
    #[arg(long, value_enum, default_value = "orbit")]
    mode: ModeArg,
    #[arg(long, default_value_t = DEFAULT_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Args)]
struct Lemma4Args {
    #[command(flatten)]
    space: SpaceArgs,
    /// Point-set file: one point per line, comma-separated codes.
    #[arg(long)]
    points: PathBuf,
    /// Multiplier t in |S| = t*q^n.
    #[arg(long)]
    t: usize,
    /// Exponent n in |S| = t*q^n.
    #[arg(long)]
    n: u32,
}

#[derive(Args)]
struct Lemma5Args {
    #[command(flatten)]
    code: CodeArgs,
    #[command(flatten)]
    input: WordInput,
    /// Hyperplane `[l1,...,lm]=c`; all hyperplanes when omitted.
    #[arg(long)]
    hyperplane: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Polynomial text.
    poly: String,
}

#[derive(Args)]
struct InterpArgs {
    #[command(flatten)]
    space: SpaceArgs,
    /// Comma-separated value table; read from standard input when omitted.
    table: Option<String>,
}

const EXIT_CONTRADICTION: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::FAILURE } else { ExitCode::SUCCESS };
        }
    };
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("error: {e}");
            return ExitCode::FAILURE;
        }
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(advice) = advisory(&e) {
                eprintln!("advisory: {advice}");
            }
            ExitCode::FAILURE
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe))
}

fn advisory(e: &anyhow::Error) -> Option<&'static str> {
    let budget = |c: &CodeError| matches!(c, CodeError::BudgetExceeded { .. });
    let hit = e.chain().any(|cause| {
        cause.downcast_ref::<CodeError>().is_some_and(budget)
            || matches!(cause.downcast_ref::<AnalysisError>(), Some(AnalysisError::Code(c)) if budget(c))
    });
    hit.then_some("raise --budget, try --mode orbit, or choose a smaller cell")
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Verify(a) => verify(a),
        Command::Classify(a) => classify(a),
        Command::FieldTable(a) => field_table(a),
        Command::MinWords(a) => min_words(a),
        Command::Lemma4(a) => lemma4(a),
        Command::Lemma5(a) => lemma5(a),
        Command::Eval(a) => {
            let space = a.space.build()?;
            let poly = ReducedPoly::parse(&space, &a.poly).context("parse error in polynomial")?;
            println!("{}", poly.to_table());
            Ok(0)
        }
        Command::Interp(a) => {
            let space = a.space.build()?;
            let text = match a.table {
                Some(t) => t,
                None => std::io::read_to_string(std::io::stdin())?,
            };
            let table = EvaluationTable::parse(&space, &text).context("parse error in table")?;
            println!("{}", ReducedPoly::interpolate(&table));
            Ok(0)
        }
    }
}

fn verify(a: VerifyArgs) -> Result<u8> {
    let params = a.code.build()?;
    let options =
        VerifyOptions { mode: a.mode.into(), budget: a.budget, seed: a.seed, equivariance_samples: a.samples };
    let mut report = verify_theorem(&params, &options)?;
    if a.no_timing {
        report.runtime_ms = 0;
    }
    let json = serde_json::to_string_pretty(&report)? + "\n";
    match &a.out {
        Some(path) => {
            fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
            println!(
                "R_{}({},{}): forward {}/{}, converse {}/{}, lemma5 violations {}, lemma4 {}/{}",
                params.q(),
                params.r(),
                params.m(),
                report.forward.matches,
                report.forward.count,
                report.converse.pass,
                report.converse.count,
                report.lemma5.violations,
                report.lemma4.avoiding_found,
                report.lemma4.supports_checked,
            );
        }
        None => print!("{json}"),
    }
    Ok(if report.is_clean() { 0 } else { EXIT_CONTRADICTION })
}

fn classify(a: ClassifyArgs) -> Result<u8> {
    let params = a.code.build()?;
    let word = a.input.read(params.space())?;
    let report = classify_min_word(&word, &params).map_err(|e| match e {
        AnalysisError::NotMinimal { .. } => anyhow!("not a minimum-weight word: {e}"),
        e if e.is_not_codeword() => anyhow!("not a codeword: {e}"),
        e => e.into(),
    })?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report)?);
    } else {
        println!("verdict: {:?}", report.verdict);
        if let Some(amb) = &report.ambient {
            println!("ambient: {}", amb.equations);
        }
        if let Some(d) = &report.direction {
            println!("direction: {}", join(d));
        }
        for (c, comp) in report.offsets.iter().zip(&report.components) {
            println!("component {c}: {}", comp.equations);
        }
        if let Some(detail) = &report.detail {
            println!("detail: {detail}");
        }
    }
    Ok(if report.verdict == Verdict::Matches { 0 } else { EXIT_CONTRADICTION })
}

fn field_table(a: FieldArgs) -> Result<u8> {
    let f = a.build()?;
    let q = f.q();
    if q > 256 {
        bail!("tables are only printed for q <= 256");
    }
    let width = (q - 1).to_string().len();
    let print = |name: &str, op: &dyn Fn(u16, u16) -> u16| {
        println!("{name}");
        for a in f.elements() {
            let row: Vec<String> = f.elements().map(|b| format!("{:>width$}", op(a, b))).collect();
            println!("{}", row.join(" "));
        }
    };
    println!("GF({q}) = {}", f.spec());
    print("+", &|a, b| f.add(a, b));
    print("*", &|a, b| f.mul(a, b));
    Ok(0)
}

fn min_words(a: MinWordsArgs) -> Result<u8> {
    let params = a.code.build()?;
    let words = enumerate_min_words(&params, a.mode.into(), a.budget)?;
    let mut out = std::io::stdout().lock();
    for w in &words {
        match a.format {
            Format::Table => writeln!(out, "{}", w.table())?,
            Format::Poly => writeln!(out, "{}", w.poly())?,
        }
    }
    Ok(0)
}

fn lemma4(a: Lemma4Args) -> Result<u8> {
    let space = a.space.build()?;
    let text = fs::read_to_string(&a.points).with_context(|| format!("reading {}", a.points.display()))?;
    let set = space.parse_point_set(&text).context("parse error in point set")?;
    let report = check_lemma4(&space, &set, a.t, a.n)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(if report.contradiction { EXIT_CONTRADICTION } else { 0 })
}

fn lemma5(a: Lemma5Args) -> Result<u8> {
    let params = a.code.build()?;
    let space = params.space();
    let word = a.input.read(space)?;
    let hyperplanes = match &a.hyperplane {
        Some(h) => vec![Hyperplane::parse(space, h).context("parse error in hyperplane")?],
        None => space.hyperplanes(),
    };
    let mut violated = false;
    let mut out = std::io::stdout().lock();
    for h in &hyperplanes {
        let report = check_lemma5(&word, &params, h)?;
        violated |= report.branch == Lemma5Branch::Violation;
        writeln!(out, "{} counts {} {:?}", report.hyperplane, join(&report.counts), report.branch)?;
    }
    Ok(if violated { EXIT_CONTRADICTION } else { 0 })
}

fn join<T: ToString>(xs: &[T]) -> String {
    format!("[{}]", xs.iter().map(T::to_string).collect::<Vec<_>>().join(","))
}
