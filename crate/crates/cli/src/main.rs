use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mrlrc::acceptance;
use mrlrc::artifact::{CodeArtifact, ReportArtifact};
use mrlrc::bounds::{self, BoundOptions, Regime};
use mrlrc::construct::{construct, CodeForm, Route};
use mrlrc::verify::{self, check_mr, decode_erasures, ErasurePattern, VerifyOptions, CAP_ENV};
use mrlrc::{Error, ExtElem, MrLrcCode};

const EXIT_MR_FAILURE: u8 = 1;
const EXIT_CAP: u8 = 2;
const EXIT_ERROR: u8 = 3;

/// Maximally recoverable LRC construction, verification and bounds.
#[derive(Parser)]
#[command(name = "mrlrc", version, disable_help_flag = true, disable_help_subcommand = true)]
struct Cli {
    #[arg(long, action = ArgAction::Help, global = true)]
    help: Option<bool>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan and build a code, then write its artifact.
    #[command(disable_help_flag = true)]
    Construct(ConstructArgs),
    /// Check the MR property of an artifact.
    Verify(VerifyArgs),
    /// Encode a message with a parity-form artifact.
    Encode(EncodeArgs),
    /// Fill erasures in a word with a parity-form artifact.
    Decode(DecodeArgs),
    /// Print the field-size table for (n, r, h, a).
    #[command(disable_help_flag = true)]
    Bounds(BoundsArgs),
    /// Run the acceptance checks.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct Shape {
    /// Code length.
    #[arg(short = 'n')]
    n: usize,
    /// Local group size.
    #[arg(short = 'r')]
    r: usize,
    /// Heavy parities.
    #[arg(short = 'h')]
    h: usize,
    /// Local parities per group.
    #[arg(short = 'a')]
    a: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormArg {
    Parity,
    Generator,
}

impl From<FormArg> for CodeForm {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Parity => CodeForm::Parity,
            FormArg::Generator => CodeForm::Generator,
        }
    }
}

#[derive(Args)]
struct ConstructArgs {
    #[command(flatten)]
    shape: Shape,
    /// manual, gen-identity, gen-bch, parity-bch, parity-binary, parity-mds or parity-identity.
    #[arg(long, default_value = "manual")]
    route: String,
    /// Base field order (manual route).
    #[arg(long)]
    q: Option<u32>,
    /// Denominator degree (manual route).
    #[arg(long)]
    m: Option<usize>,
    /// Form for the manual route.
    #[arg(long, value_enum, default_value = "parity")]
    form: FormArg,
    /// Output path; stdout when absent.
    #[arg(short = 'o', long = "out")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct VerifyArgs {
    /// Code artifact.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "exhaustive")]
    mode: ModeArg,
    /// Patterns to draw in sampled mode.
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Enumeration cap for exhaustive mode.
    #[arg(long, env = CAP_ENV)]
    cap: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Load the artifact even if its digest does not match.
    #[arg(long)]
    force: bool,
    /// Write the JSON report here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct EncodeArgs {
    input: PathBuf,
    /// Message symbols as comma-separated decimal element codes.
    #[arg(long, conflicts_with = "random")]
    message: Option<String>,
    /// Encode a seeded random message.
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct DecodeArgs {
    input: PathBuf,
    /// Received word, comma-separated; erased entries may be `?`.
    #[arg(long)]
    word: String,
    /// Erased positions as `group:index` pairs.
    #[arg(long, default_value = "")]
    erasures: String,
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    shape: Shape,
    #[arg(long)]
    csv: bool,
    /// Value of the hidden constants.
    #[arg(long, default_value_t = 1.0)]
    constant: f64,
    #[arg(long, default_value_t = 0.25)]
    epsilon: f64,
    /// Also print the comparison-claim summary.
    #[arg(long)]
    claims: bool,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn load(path: &PathBuf, force: bool) -> anyhow::Result<(CodeArtifact, MrLrcCode)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let art = CodeArtifact::parse(&text, force)?;
    let code = art.to_code()?;
    Ok((art, code))
}

fn join(code: &MrLrcCode, word: &[ExtElem]) -> String {
    word.iter().map(|e| code.ext.encode_str(e)).collect::<Vec<_>>().join(",")
}

fn cmd_construct(args: ConstructArgs) -> anyhow::Result<u8> {
    let Shape { n, r, h, a } = args.shape;
    let route = Route::from_name(&args.route, args.q, args.m, args.form.into())?;
    let code = construct(n, r, h, a, &route)?;
    let text = CodeArtifact::from_code(&code).render();
    match &args.out {
        Some(path) => fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    let p = code.params;
    eprintln!(
        "route {} form {}: q={} m={} l = {}^{} (log2 l = {:.3})",
        code.route,
        code.form,
        p.q,
        p.m,
        p.q,
        code.field_degree(),
        code.log2_field_size()
    );
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<u8> {
    let (art, code) = load(&args.input, args.force)?;
    let mut opts = match args.mode {
        ModeArg::Exhaustive => VerifyOptions::exhaustive(),
        ModeArg::Sampled => VerifyOptions::sampled(args.samples, args.seed),
    };
    opts.jobs = args.jobs;
    if let Some(cap) = args.cap {
        opts.cap = cap;
    }
    let report = check_mr(&code, &opts)?;
    println!(
        "{} {}/{} patterns independent ({:.2}s)",
        if report.passed() { "PASS" } else { "FAIL" },
        report.patterns_checked - report.failure_count,
        report.patterns_checked,
        report.elapsed_secs
    );
    for w in &report.failures {
        println!("witness: {}", w.to_pairs());
    }
    let passed = report.passed();
    if let Some(path) = &args.report {
        fs::write(path, ReportArtifact::new(&art, report).render())
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(if passed { 0 } else { EXIT_MR_FAILURE })
}

fn cmd_encode(args: EncodeArgs) -> anyhow::Result<u8> {
    let (_, code) = load(&args.input, args.force)?;
    let encoder = verify::Encoder::new(&code)?;
    let message: Vec<ExtElem> = if args.random {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        (0..encoder.dimension()).map(|_| code.ext.random(&mut rng)).collect()
    } else {
        let Some(text) = args.message else { bail!("give --message or --random") };
        text.split(',').filter(|s| !s.trim().is_empty()).map(|s| code.ext.decode_str(s)).collect::<Result<_, _>>()?
    };
    let word = encoder.encode(&code, &message)?;
    println!("{}", join(&code, &word));
    Ok(0)
}

fn cmd_decode(args: DecodeArgs) -> anyhow::Result<u8> {
    let (_, code) = load(&args.input, args.force)?;
    let p = code.params;
    let pattern = ErasurePattern::parse(&args.erasures, p.g, p.r)?;
    let erased = pattern.positions(p.r);
    let tokens: Vec<&str> = args.word.split(',').map(str::trim).collect();
    if tokens.len() != p.n {
        bail!("word has {} symbols, expected {}", tokens.len(), p.n);
    }
    let mut word = Vec::with_capacity(p.n);
    for (i, tok) in tokens.iter().enumerate() {
        if erased.contains(&i) {
            word.push(None);
        } else if *tok == "?" {
            bail!("position {i} is unknown but not listed as erased");
        } else {
            word.push(Some(code.ext.decode_str(tok)?));
        }
    }
    let out = decode_erasures(&code, &word)?;
    println!("{}", join(&code, &out));
    Ok(0)
}

fn cmd_bounds(args: BoundsArgs) -> anyhow::Result<u8> {
    let Shape { n, r, h, a } = args.shape;
    let opts = BoundOptions { constant: args.constant, epsilon: args.epsilon, ..BoundOptions::default() };
    let rows = bounds::bound_table(n, r, h, a, &opts);
    if args.csv {
        print!("{}", bounds::render_csv(&rows));
    } else {
        print!("{}", bounds::render_text(&rows));
    }
    if args.claims {
        for regime in Regime::ALL {
            let rep = bounds::check_comparison_claims(regime);
            println!(
                "{}: {} points, {} confirmed, {} constant-sensitive, {} refuted",
                regime.name(),
                rep.points.len(),
                rep.count(bounds::Verdict::Confirmed),
                rep.count(bounds::Verdict::ConstantSensitive),
                rep.count(bounds::Verdict::Refuted)
            );
        }
    }
    Ok(0)
}

fn cmd_selftest(args: SelftestArgs) -> anyhow::Result<u8> {
    let mut ok = true;
    for id in 1..=10 {
        let out = acceptance::run_criterion(id, args.jobs);
        println!("{out}");
        ok &= out.passed;
    }
    Ok(if ok { 0 } else { EXIT_MR_FAILURE })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Construct(a) => cmd_construct(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Selftest(a) => cmd_selftest(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<Error>() {
                Some(Error::CapExceeded { .. }) => ExitCode::from(EXIT_CAP),
                _ => ExitCode::from(EXIT_ERROR),
            }
        }
    }
}
