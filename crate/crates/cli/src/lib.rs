//! `ontoenrich` command line: validate inputs, run enrichment, summarize reports.

mod manifest;
mod view;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ontoenrich_core::rdf::{parse_ntriples, parse_ntriples_lenient, ParseError};
use ontoenrich_core::{
    enrich, load_ontology, save_ontology, EnrichmentConfig, Ontology, SimilarityMode, StopWords, TripleStore,
};

pub use manifest::{InputDigest, ReportFile, RunManifest};

/// Exit status classes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_IO: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ontoenrich", version, about = "Enrich a text-derived ontology with relations found in linked data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and check all inputs without running anything.
    Validate(InputArgs),
    /// Discover relations, lift and generalize schemas, write the results.
    Enrich(EnrichArgs),
    /// Print a summary of a report.json.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Ontology JSON document.
    #[arg(long)]
    ontology: PathBuf,
    /// N-Triples file; repeat for several. Loaded in the order given.
    #[arg(long = "data", required = true)]
    data: Vec<PathBuf>,
    /// Stop-word list, one word per line. Defaults to the built-in English list.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Skip malformed N-Triples lines (including blank nodes) with a warning.
    #[arg(long)]
    lenient: bool,
}

#[derive(Debug, Args)]
struct EnrichArgs {
    #[command(flatten)]
    inputs: InputArgs,
    /// Output directory for ontology.json and report.json.
    #[arg(long)]
    out: PathBuf,
    /// JSON config file; keys are the flag names. Flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Similarity threshold a resource must reach to pass a gate [default: 0.15].
    #[arg(long)]
    alpha: Option<f64>,
    /// How neighbor profiles are combined: sum or mean [default: mean].
    #[arg(long, value_parser = parse_mode)]
    similarity_mode: Option<SimilarityMode>,
    /// Triples a single pair search may examine [default: 100000].
    #[arg(long)]
    scan_budget: Option<usize>,
    /// Only pair instances mentioned within this many tokens.
    #[arg(long)]
    distance_cap: Option<usize>,
    /// Tokens either side of a mention that form its text context [default: 10].
    #[arg(long)]
    window: Option<usize>,
    /// Sibling schemas needed before a parent-level hypothesis is raised [default: 2].
    #[arg(long)]
    min_evidence: Option<usize>,
    /// Taxonomy levels climbed by generalization [default: 1].
    #[arg(long)]
    passes: Option<usize>,
    /// Worker threads; results do not depend on it [default: 1].
    #[arg(long)]
    jobs: Option<usize>,
    /// Also write one JSON line per searched pair to trace.jsonl.
    #[arg(long)]
    trace: bool,
    /// Record this timestamp instead of the current time.
    #[arg(long, value_name = "TIMESTAMP")]
    fixed_clock: Option<String>,
}

#[derive(Debug, Args)]
struct ReportArgs {
    /// A report.json written by `enrich`.
    report: PathBuf,
    /// Keep rows with this predicate (full IRI or local name).
    #[arg(long)]
    predicate: Option<String>,
    /// Keep rows mentioning this concept.
    #[arg(long)]
    concept: Option<String>,
}

fn parse_mode(s: &str) -> Result<SimilarityMode, String> {
    s.parse()
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Io { .. } => EXIT_IO,
            CliError::Invalid(_) => EXIT_INVALID,
        }
    }

    fn invalid(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Invalid(format!("{}: {e}", path.display()))
    }
}

fn read(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Runs the tool with `args` (program name first) and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let result = match cli.command {
        Command::Validate(args) => return cmd_validate(&args, out, err),
        Command::Enrich(args) => cmd_enrich(&args, out, err),
        Command::Report(args) => cmd_report(&args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.code()
        }
    }
}

struct Loaded {
    ontology: Ontology,
    store: TripleStore,
    stop_words: StopWords,
    digests: Vec<InputDigest>,
}

fn parse_data(path: &Path, bytes: &[u8], lenient: bool, err: &mut dyn Write) -> Result<Vec<ontoenrich_core::Triple>, CliError> {
    let describe = |e: &ParseError| format!("{}:{}: {}", path.display(), e.line, e.kind);
    if lenient {
        let (triples, errors) = parse_ntriples_lenient(bytes);
        for e in &errors {
            let _ = writeln!(err, "warning: skipped {}", describe(e));
        }
        Ok(triples)
    } else {
        parse_ntriples(bytes).map_err(|e| CliError::Invalid(describe(&e)))
    }
}

/// Reads every input, hashing raw bytes before anything is parsed.
fn load(args: &InputArgs, err: &mut dyn Write) -> Result<Loaded, CliError> {
    let ontology_bytes = read(&args.ontology)?;
    let data_bytes = args.data.iter().map(|p| read(p)).collect::<Result<Vec<_>, _>>()?;
    let stop_bytes = args.stopwords.as_deref().map(read).transpose()?;

    let mut digests = vec![InputDigest::new("ontology", &args.ontology, &ontology_bytes)];
    for (p, b) in args.data.iter().zip(&data_bytes) {
        digests.push(InputDigest::new("data", p, b));
    }
    if let (Some(p), Some(b)) = (&args.stopwords, &stop_bytes) {
        digests.push(InputDigest::new("stopwords", p, b));
    }

    let ontology = load_ontology(&ontology_bytes).map_err(|e| CliError::invalid(&args.ontology, e))?;
    let mut store = TripleStore::new();
    for (p, b) in args.data.iter().zip(&data_bytes) {
        for t in parse_data(p, b, args.lenient, err)? {
            store.insert(t);
        }
    }
    let stop_words = match (&args.stopwords, stop_bytes) {
        (Some(p), Some(b)) => {
            let text = String::from_utf8(b).map_err(|e| CliError::invalid(p, e))?;
            StopWords::parse(&text)
        }
        _ => StopWords::default(),
    };
    Ok(Loaded {
        ontology,
        store,
        stop_words,
        digests,
    })
}

/// Checks every input so one run reports every problem; the exit status is
/// the most severe class seen.
fn cmd_validate(args: &InputArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut status = EXIT_OK;
    let mut note = |e: CliError, err: &mut dyn Write| {
        let _ = writeln!(err, "error: {e}");
        status = status.max(e.code());
    };

    match read(&args.ontology).and_then(|b| load_ontology(&b).map_err(|e| CliError::invalid(&args.ontology, e))) {
        Ok(o) => {
            let _ = writeln!(
                out,
                "{}: ok ({} concepts, {} instances, {} tokens)",
                args.ontology.display(),
                o.concepts().len(),
                o.instances().len(),
                o.tokens().len()
            );
        }
        Err(e) => note(e, err),
    }
    for p in &args.data {
        match read(p).and_then(|b| parse_data(p, &b, args.lenient, err)) {
            Ok(triples) => {
                let _ = writeln!(out, "{}: ok ({} triples)", p.display(), triples.len());
            }
            Err(e) => note(e, err),
        }
    }
    if let Some(p) = &args.stopwords {
        match read(p).and_then(|b| String::from_utf8(b).map_err(|e| CliError::invalid(p, e))) {
            Ok(_) => {
                let _ = writeln!(out, "{}: ok", p.display());
            }
            Err(e) => note(e, err),
        }
    }
    status
}

fn resolve_config(args: &EnrichArgs) -> Result<EnrichmentConfig, CliError> {
    let mut config = match &args.config {
        Some(p) => {
            let bytes = read(p)?;
            let de = &mut serde_json::Deserializer::from_slice(&bytes);
            serde_path_to_error::deserialize(de).map_err(|e| CliError::invalid(p, e))?
        }
        None => EnrichmentConfig::default(),
    };
    if let Some(v) = args.alpha {
        config.alpha = v;
    }
    if let Some(v) = args.similarity_mode {
        config.similarity_mode = v;
    }
    if let Some(v) = args.scan_budget {
        config.scan_budget = v;
    }
    if let Some(v) = args.distance_cap {
        config.distance_cap = Some(v);
    }
    if let Some(v) = args.window {
        config.window = v;
    }
    if let Some(v) = args.min_evidence {
        config.min_evidence = v;
    }
    if let Some(v) = args.passes {
        config.passes = v;
    }
    if let Some(v) = args.jobs {
        config.jobs = v;
    }
    config
        .validate()
        .map_err(|e| CliError::Invalid(format!("config: {e}")))?;
    Ok(config)
}

fn cmd_enrich(args: &EnrichArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let config = resolve_config(args)?;
    let loaded = load(&args.inputs, err)?;
    let clock = args.fixed_clock.clone().unwrap_or_else(manifest::now);
    let manifest = RunManifest::new(loaded.digests, &config, clock);

    let (enriched, mut report) = enrich(&loaded.ontology, &loaded.store, &config, &loaded.stop_words)
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let trace = std::mem::take(&mut report.trace);

    std::fs::create_dir_all(&args.out).map_err(|source| CliError::Io {
        path: args.out.clone(),
        source,
    })?;
    write(&args.out.join("ontology.json"), &save_ontology(&enriched))?;
    let c = report.counters.clone();
    let file = ReportFile { manifest, report };
    let json = serde_json::to_string_pretty(&file).expect("report serializes") + "\n";
    write(&args.out.join("report.json"), &json)?;
    if args.trace {
        let mut lines = String::new();
        for t in &trace {
            lines.push_str(&serde_json::to_string(t).expect("trace serializes"));
            lines.push('\n');
        }
        write(&args.out.join("trace.jsonl"), &lines)?;
    }
    let _ = writeln!(
        out,
        "pairs {} hits {} new assertions {} schemas {} hypotheses {} ({} confirmed)",
        c.pairs, c.hits, c.new_assertions, c.schemas_after_collapse, c.hypotheses, c.hypotheses_confirmed
    );
    Ok(())
}

fn cmd_report(args: &ReportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let bytes = read(&args.report)?;
    let de = &mut serde_json::Deserializer::from_slice(&bytes);
    let file: ReportFile = serde_path_to_error::deserialize(de).map_err(|e| CliError::invalid(&args.report, e))?;
    let filter = view::Filter {
        predicate: args.predicate.as_deref(),
        concept: args.concept.as_deref(),
    };
    let _ = out.write_all(view::render(&file.report, &filter).as_bytes());
    Ok(())
}
