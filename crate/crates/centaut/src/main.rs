use centaut::{
    commuting_endomorphisms, find_primitive_polynomial, stabilizer_bruteforce,
    stabilizer_structured, verify_proof_steps, CheckReport, ConstructionError, FMatrix,
    FieldError, PGroupError, PolyError, PolyOverF, Presentation, PrimeField, SearchError,
    SearchOptions, StabResult,
};
use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::process::ExitCode;

// A consumer such as `centaut ... | head` may close stdout before the
// output is finished. Stop quietly with the conventional SIGPIPE status
// instead of panicking mid-write.
macro_rules! out {
    ($($arg:tt)*) => {{
        use ::std::io::Write;
        let mut handle = ::std::io::stdout().lock();
        if ::std::write!(handle, $($arg)*).is_err() {
            ::std::process::exit(141);
        }
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use ::std::io::Write;
        let mut handle = ::std::io::stdout().lock();
        if ::std::writeln!(handle, $($arg)*).is_err() {
            ::std::process::exit(141);
        }
    }};
}

/// Builds the finite p-groups of class 2 whose automorphisms are all
/// central, and verifies every step of the construction by exhaustive
/// computation.
#[derive(Parser)]
#[command(name = "centaut", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Field characteristic (a prime)
    #[arg(long, global = true, default_value_t = 2)]
    p: u64,

    /// Degree of the defining polynomial; the group has n + 1 generators
    #[arg(long, global = true, default_value_t = 3)]
    n: usize,

    /// Row vector b as comma-separated integers (defaults to a unit vector)
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    b: Option<Vec<i64>>,

    /// Row vector c as comma-separated integers (defaults to a unit vector)
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    c: Option<Vec<i64>>,

    /// Defining polynomial as comma-separated coefficients, constant term
    /// first (defaults to the first primitive polynomial of degree n)
    #[arg(long, global = true, value_delimiter = ',', allow_hyphen_values = true)]
    poly: Option<Vec<i64>>,

    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,

    /// Seed for the sampled checks
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Run scans whose candidate space exceeds the built-in guard
    #[arg(long, global = true)]
    force: bool,

    /// Scan threads (default: the CENTAUT_WORKERS variable, or 1)
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Include wall-clock timings in the output
    #[arg(long, global = true)]
    timings: bool,

    /// Skip structured candidates failing the cheap linear conditions
    #[arg(long, global = true)]
    prune: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Assemble the map f and print its blocks
    Construct,
    /// Check the companion-matrix facts and the linear facts about f
    VerifyLemmas,
    /// Search for the invertible maps compatible with f
    Stabilize {
        #[arg(long, value_enum, default_value_t = Mode::Structured)]
        mode: Mode,
    },
    /// Search all linear maps, singular ones included
    Endo,
    /// Verify the four facts that force the searches' outcome
    ProofSteps,
    /// Realize the group and inspect its structure
    Group {
        /// Verify subgroup orders by enumeration
        #[arg(long)]
        stats: bool,
        /// Sample K non-central elements and check their squares stay
        /// non-central (odd p only)
        #[arg(long, value_name = "K")]
        check_inverse_free: Option<u64>,
    },
    /// Run every verification for the given parameters
    All,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Structured,
    Brute,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Json,
}

enum AppError {
    Usage(String),
    Guard(String),
}

impl From<FieldError> for AppError {
    fn from(e: FieldError) -> Self {
        AppError::Usage(e.to_string())
    }
}

impl From<ConstructionError> for AppError {
    fn from(e: ConstructionError) -> Self {
        AppError::Usage(e.to_string())
    }
}

impl From<PolyError> for AppError {
    fn from(e: PolyError) -> Self {
        AppError::Usage(e.to_string())
    }
}

impl From<SearchError> for AppError {
    fn from(e: SearchError) -> Self {
        AppError::Guard(e.to_string())
    }
}

impl From<PGroupError> for AppError {
    fn from(e: PGroupError) -> Self {
        match e {
            PGroupError::GroupTooLarge { .. } => AppError::Guard(e.to_string()),
            _ => AppError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(AppError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(AppError::Guard(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> Result<bool, AppError> {
    let fm = build_f(cli)?;
    let opts = search_options(cli);
    match &cli.command {
        Command::Construct => {
            print_construct(cli, &fm);
            Ok(true)
        }
        Command::VerifyLemmas => {
            let companion = fm.check_companion_properties();
            let linear = fm.check_f_properties();
            let pass = companion.pass() && linear.pass();
            match cli.output {
                Output::Json => print_json(&serde_json::json!({
                    "companion": companion,
                    "f": linear,
                    "pass": pass,
                })),
                Output::Text => {
                    out!("{}", companion.render_text());
                    out!("{}", linear.render_text());
                }
            }
            Ok(pass)
        }
        Command::Stabilize { mode } => {
            let result = match mode {
                Mode::Structured => stabilizer_structured(&fm, &opts)?,
                Mode::Brute => stabilizer_bruteforce(&fm, &opts)?,
            };
            let pass = result.is_identity_only();
            print_stab(cli, &result, pass);
            Ok(pass)
        }
        Command::Endo => {
            let result = commuting_endomorphisms(&fm, &opts)?;
            let pass = result.elements.len() == 2
                && result.elements[0].is_zero()
                && result.elements[1] == centaut::Matrix::identity(fm.field(), fm.dim_v());
            print_stab(cli, &result, pass);
            Ok(pass)
        }
        Command::ProofSteps => {
            let report = verify_proof_steps(&fm);
            print_report(cli, &report);
            Ok(report.pass())
        }
        Command::Group { stats, check_inverse_free } => {
            run_group(cli, &fm, *stats, *check_inverse_free)
        }
        Command::All => run_all(cli, &fm, &opts),
    }
}

fn build_f(cli: &Cli) -> Result<FMatrix, AppError> {
    let field = PrimeField::new(cli.p)?;
    let poly = match &cli.poly {
        Some(coeffs) => PolyOverF::from_coeffs_i64(field, coeffs),
        None => find_primitive_polynomial(field, cli.n)?,
    };
    let b = match &cli.b {
        Some(v) => v.iter().map(|&e| field.reduce(e)).collect(),
        None => unit_vector(cli.n),
    };
    let c = match &cli.c {
        Some(v) => v.iter().map(|&e| field.reduce(e)).collect(),
        None => unit_vector(cli.n * (cli.n - 1) / 2),
    };
    Ok(FMatrix::build(field, cli.n, b, c, &poly)?)
}

fn unit_vector(len: usize) -> Vec<u64> {
    let mut v = vec![0; len];
    if len > 0 {
        v[0] = 1;
    }
    v
}

fn search_options(cli: &Cli) -> SearchOptions {
    let workers = cli.workers.unwrap_or_else(|| {
        std::env::var("CENTAUT_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
            .unwrap_or(1)
    });
    SearchOptions { force: cli.force, workers, prune: cli.prune, timings: cli.timings }
}

fn print_json(value: &serde_json::Value) {
    outln!("{}", serde_json::to_string_pretty(value).expect("serializable value"));
}

fn print_construct(cli: &Cli, fm: &FMatrix) {
    match cli.output {
        Output::Json => print_json(&serde_json::json!({
            "p": fm.field().modulus(),
            "n": fm.n(),
            "b": fm.b(),
            "c": fm.c(),
            "a": fm.a(),
            "f": fm.full(),
            "poly": fm.poly(),
        })),
        Output::Text => {
            outln!("p = {}, n + 1 = {}", fm.field().modulus(), fm.dim_v());
            match fm.poly() {
                Some(m) => outln!("m = {m}"),
                None => outln!("m = (not derived from a polynomial)"),
            }
            outln!("b = {:?}", fm.b());
            outln!("c = {:?}", fm.c());
            outln!("f =");
            out!("{}", fm.full());
        }
    }
}

fn print_stab(cli: &Cli, result: &StabResult, pass: bool) {
    match cli.output {
        Output::Json => {
            let mut value = serde_json::to_value(result).expect("serializable result");
            value["pass"] = serde_json::Value::Bool(pass);
            print_json(&value);
        }
        Output::Text => {
            outln!("mode: {}", result.mode);
            outln!("candidate space: {}", result.space_size);
            outln!("tested: {}", result.tested);
            outln!("found {} compatible map(s):", result.elements.len());
            for m in &result.elements {
                outln!("  {}", serde_json::to_string(m).expect("serializable matrix"));
            }
            if let Some(ms) = result.wall_ms {
                outln!("wall time: {ms} ms");
            }
            outln!("overall: {}", if pass { "PASS" } else { "FAIL" });
        }
    }
}

fn print_report(cli: &Cli, report: &CheckReport) {
    match cli.output {
        Output::Json => print_json(&serde_json::to_value(report).expect("serializable report")),
        Output::Text => out!("{}", report.render_text()),
    }
}

fn run_group(
    cli: &Cli,
    fm: &FMatrix,
    stats: bool,
    check_inverse_free: Option<u64>,
) -> Result<bool, AppError> {
    let pres = Presentation::from_f(fm);
    let mut pass = pres.relations_hold() && pres.power_map_matrix() == *pres.power_table();

    let mut json = serde_json::json!({
        "presentation": pres,
        "relations": pres.relation_strings(),
        "order": pres.order().to_string(),
    });
    if cli.output == Output::Text {
        out!("{}", pres.to_text());
        outln!("order: {}", pres.order());
        for r in pres.relation_strings() {
            outln!("{r}");
        }
    }

    if stats {
        let report = pres.structure_report()?;
        pass = pass && report.all_match();
        match cli.output {
            Output::Json => {
                json["structure"] = serde_json::to_value(&report).expect("serializable report");
            }
            Output::Text => out!("{}", report.render_text()),
        }
    }

    if let Some(samples) = check_inverse_free {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let outcome = pres.inverse_image_obstruction(&mut rng, samples)?;
        let ok = outcome.violations.is_empty();
        pass = pass && ok;
        match cli.output {
            Output::Json => {
                json["inverse_free"] = serde_json::json!({
                    "tested": outcome.tested,
                    "violations": outcome.violations.len(),
                    "pass": ok,
                });
            }
            Output::Text => {
                outln!(
                    "squares of {} sampled non-central elements stay non-central: {}",
                    outcome.tested,
                    if ok { "ok" } else { "FAIL" }
                );
            }
        }
    }

    match cli.output {
        Output::Json => {
            json["pass"] = serde_json::Value::Bool(pass);
            print_json(&json);
        }
        Output::Text => outln!("overall: {}", if pass { "PASS" } else { "FAIL" }),
    }
    Ok(pass)
}

fn run_all(cli: &Cli, fm: &FMatrix, opts: &SearchOptions) -> Result<bool, AppError> {
    let mut sections: Vec<(String, bool)> = Vec::new();
    let mut skipped: Vec<String> = Vec::new();

    let companion = fm.check_companion_properties();
    sections.push(("companion matrix".into(), companion.pass()));
    let linear = fm.check_f_properties();
    sections.push(("map f".into(), linear.pass()));
    let steps = verify_proof_steps(fm);
    sections.push(("proof steps".into(), steps.pass()));

    let structured = stabilizer_structured(fm, opts)?;
    sections.push(("structured stabilizer scan".into(), structured.is_identity_only()));

    match stabilizer_bruteforce(fm, opts) {
        Ok(brute) => {
            let agrees = brute.elements == structured.elements && brute.is_identity_only();
            sections.push(("brute-force stabilizer scan".into(), agrees));
        }
        Err(SearchError::SpaceTooLarge { size, .. }) if !opts.force => {
            skipped.push(format!("brute-force stabilizer scan ({size} candidates; use --force)"));
        }
        Err(e) => return Err(e.into()),
    }

    match commuting_endomorphisms(fm, opts) {
        Ok(endo) => {
            let pass = endo.elements.len() == 2
                && endo.elements[0].is_zero()
                && endo.elements[1] == centaut::Matrix::identity(fm.field(), fm.dim_v());
            sections.push(("endomorphism scan".into(), pass));
        }
        Err(SearchError::SpaceTooLarge { size, .. }) if !opts.force => {
            skipped.push(format!("endomorphism scan ({size} candidates; use --force)"));
        }
        Err(e) => return Err(e.into()),
    }

    let pres = Presentation::from_f(fm);
    sections.push(("group relations".into(), pres.relations_hold()));
    sections.push((
        "power map recovers f".into(),
        pres.power_map_matrix() == *pres.power_table(),
    ));
    let structure = pres.structure_report()?;
    sections.push(("subgroup orders".into(), structure.all_match()));

    if fm.field().modulus() != 2 {
        let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
        let outcome = pres.inverse_image_obstruction(&mut rng, 100)?;
        sections.push(("squaring obstruction".into(), outcome.violations.is_empty()));
    } else {
        skipped.push("squaring obstruction (defined for odd p only)".into());
    }

    let pass = sections.iter().all(|(_, ok)| *ok);
    match cli.output {
        Output::Json => print_json(&serde_json::json!({
            "sections": sections
                .iter()
                .map(|(name, ok)| serde_json::json!({ "name": name, "pass": ok }))
                .collect::<Vec<_>>(),
            "skipped": skipped,
            "pass": pass,
        })),
        Output::Text => {
            for (name, ok) in &sections {
                outln!("[{}] {name}", if *ok { "ok" } else { "FAIL" });
            }
            for name in &skipped {
                outln!("[skipped] {name}");
            }
            outln!("overall: {}", if pass { "PASS" } else { "FAIL" });
        }
    }
    Ok(pass)
}
