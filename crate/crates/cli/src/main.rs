//! Command-line entry point: convert corpora to nanopublications, validate
//! and publish them, and query the merged result.

mod queryfile;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use provcorp::convert::{dangling_references, run_convert, ConvertConfig, ConvertError};
use provcorp::model::{classify, CorpusManifest, NanopubKind};
use provcorp::nanopub::Nanopub;
use provcorp::query::{
    evaluate, export, run_builtin, AttributionLabel, BuiltinParams, ExportFormat, LoadScope,
    Q4Mode, QuadStore, Question,
};
use provcorp::rdf::parse_trig;
use provcorp::registry::{Registry, RegistryError};

/// Environment variable naming the default registry root.
const REGISTRY_ENV: &str = "PROVCORP_REGISTRY";

#[derive(Parser)]
#[command(
    name = "provcorp",
    version,
    about = "Convert annotated text corpora into verifiable nanopublications and query the merged network"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert raw documents plus annotation layers into nanopublications.
    Convert(ConvertArgs),
    /// Verify nanopub files: content hashes, structure, network closure.
    Validate {
        /// `.trig` files or directories to check.
        paths: Vec<PathBuf>,
    },
    /// Run a built-in question (q1..q6) or a JSON query file over a store.
    Query(QueryArgs),
    /// Publish nanopub files into a local registry.
    Publish(PublishArgs),
    /// Count nanopublications by kind.
    Stats {
        /// `.trig` files or directories to count.
        paths: Vec<PathBuf>,
    },
}

#[derive(Args)]
struct ConvertArgs {
    /// Manifest of the text corpus.
    #[arg(long, value_name = "FILE")]
    text_manifest: PathBuf,
    /// Manifest of the attribution annotation corpus.
    #[arg(long, value_name = "FILE", requires = "parc_dir")]
    parc_manifest: Option<PathBuf>,
    /// Manifest of the event/factuality annotation corpus.
    #[arg(long, value_name = "FILE", requires = "factbank_dir")]
    factbank_manifest: Option<PathBuf>,
    /// Directory of raw tagged documents.
    #[arg(long, value_name = "DIR")]
    raw_dir: PathBuf,
    /// Directory of attribution XML files (one per document).
    #[arg(long, value_name = "DIR", requires = "parc_manifest")]
    parc_dir: Option<PathBuf>,
    /// Directory holding the event and factuality tables.
    #[arg(long, value_name = "DIR", requires = "factbank_manifest")]
    factbank_dir: Option<PathBuf>,
    /// Directory of `<doc-id>.fix` manual-override sidecars.
    #[arg(long, value_name = "DIR")]
    overrides_dir: Option<PathBuf>,
    /// Output directory for the nanopub tree and report.
    #[arg(long, short, value_name = "DIR")]
    out: PathBuf,
    /// Keep one word nanopub per introducing corpus instead of merging.
    #[arg(long)]
    no_dedup_words: bool,
    /// Raw files do not store one sentence per line; run the splitter.
    #[arg(long)]
    no_line_split: bool,
}

#[derive(Args)]
struct QueryArgs {
    /// Built-in question (q1..q6) or a path to a JSON query file.
    question: String,
    /// `.trig` files or directories to load into the store.
    #[arg(long, short, value_name = "PATH", required = true, num_args = 1..)]
    store: Vec<PathBuf>,
    /// Word or lemma parameter (q6).
    #[arg(long)]
    lemma: Option<String>,
    /// Attribution component: source, cue or content (q5, q6).
    #[arg(long)]
    label: Option<String>,
    /// What q4 counts: source-values or attribution-types.
    #[arg(long, default_value = "source-values")]
    q4_mode: String,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: String,
    /// Write the table to a file instead of stdout.
    #[arg(long, short, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Load provenance and publication info graphs too.
    #[arg(long)]
    all_graphs: bool,
}

#[derive(Args)]
struct PublishArgs {
    /// `.trig` files or directories to publish.
    paths: Vec<PathBuf>,
    /// Registry root (falls back to $PROVCORP_REGISTRY).
    #[arg(long, value_name = "DIR")]
    registry: Option<PathBuf>,
    /// Skip protected nanopubs with a warning instead of aborting.
    #[arg(long)]
    skip_protected: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Convert(args) => cmd_convert(args),
        Command::Validate { paths } => cmd_validate(&paths),
        Command::Query(args) => cmd_query(args),
        Command::Publish(args) => cmd_publish(args),
        Command::Stats { paths } => cmd_stats(&paths),
    };
    match result {
        Ok(code) => code,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::from(1)
        }
    }
}

fn load_manifest(path: &Path) -> Result<CorpusManifest> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading manifest {}", path.display()))?;
    CorpusManifest::parse(&text).with_context(|| format!("parsing manifest {}", path.display()))
}

fn cmd_convert(args: ConvertArgs) -> Result<ExitCode> {
    let config = ConvertConfig {
        text_manifest: load_manifest(&args.text_manifest)?,
        parc_manifest: args.parc_manifest.as_deref().map(load_manifest).transpose()?,
        factbank_manifest: args
            .factbank_manifest
            .as_deref()
            .map(load_manifest)
            .transpose()?,
        raw_dir: args.raw_dir,
        parc_dir: args.parc_dir,
        factbank_dir: args.factbank_dir,
        overrides_dir: args.overrides_dir,
        output_dir: args.out.clone(),
        dedup_words: !args.no_dedup_words,
        line_split: !args.no_line_split,
    };
    std::fs::create_dir_all(&args.out)?;
    let report = match run_convert(&config) {
        Ok(report) => report,
        Err(ConvertError::Config(message)) => bail!("configuration: {message}"),
        Err(other) => return Err(other.into()),
    };

    for doc in &report.documents {
        if let Some(exclusion) = &doc.exclusion {
            eprintln!(
                "excluded {} (challenge {}): {}",
                doc.doc_id, exclusion.challenge_id, exclusion.reason
            );
        } else if !doc.diagnostics.is_empty() {
            let ids: Vec<String> = doc
                .diagnostics
                .iter()
                .map(|d| d.challenge_id.to_string())
                .collect();
            eprintln!("converted {} (challenges {})", doc.doc_id, ids.join(","));
        }
    }
    let counts: Vec<String> = report
        .counts
        .iter()
        .map(|(kind, n)| format!("{kind}: {n}"))
        .collect();
    println!(
        "converted {} of {} documents into {} ({})",
        report.converted,
        report.converted + report.excluded,
        args.out.display(),
        counts.join(", ")
    );
    if report.merge.collapsed + report.merge.merged > 0 {
        println!(
            "words deduplicated: {} collapsed, {} merged, {} conflicts",
            report.merge.collapsed,
            report.merge.merged,
            report.merge.conflicts.len()
        );
    }

    if report.converted == 0 {
        bail!("no document converted");
    }
    Ok(if report.excluded > 0 {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

/// Collects nanopubs from `.trig` files and directories; problems are
/// returned as printable findings instead of hard errors.
fn collect_nanopubs(paths: &[PathBuf]) -> Result<(Vec<Nanopub>, Vec<String>)> {
    let mut files: Vec<PathBuf> = Vec::new();
    for path in paths {
        if path.is_dir() {
            for entry in walkdir::WalkDir::new(path) {
                let entry = entry?;
                if entry.path().extension().and_then(|e| e.to_str()) == Some("trig") {
                    files.push(entry.path().to_path_buf());
                }
            }
        } else if path.is_file() {
            files.push(path.clone());
        } else {
            bail!("no such path: {}", path.display());
        }
    }
    files.sort();
    let mut nanopubs = Vec::new();
    let mut findings = Vec::new();
    for file in files {
        let text = std::fs::read_to_string(&file)?;
        match parse_trig(&text).map_err(anyhow::Error::from).and_then(|d| {
            Nanopub::from_dataset(&d).map_err(anyhow::Error::from)
        }) {
            Ok(bundle) => nanopubs.extend(bundle),
            Err(error) => findings.push(format!("unreadable: {}: {error}", file.display())),
        }
    }
    Ok((nanopubs, findings))
}

fn cmd_validate(paths: &[PathBuf]) -> Result<ExitCode> {
    if paths.is_empty() {
        bail!("nothing to validate");
    }
    let (nanopubs, mut findings) = collect_nanopubs(paths)?;
    for nanopub in &nanopubs {
        let report = nanopub.verify();
        if !report.valid {
            findings.push(format!(
                "invalid: {} ({})",
                nanopub.uri(),
                report.reason.unwrap_or_default()
            ));
        }
    }
    for iri in dangling_references(&nanopubs) {
        findings.push(format!("dangling: {iri}"));
    }
    if findings.is_empty() {
        eprintln!("{} nanopubs valid, network closed", nanopubs.len());
        Ok(ExitCode::SUCCESS)
    } else {
        for finding in &findings {
            println!("{finding}");
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_query(args: QueryArgs) -> Result<ExitCode> {
    let (nanopubs, findings) = collect_nanopubs(&args.store)?;
    if !findings.is_empty() {
        for finding in &findings {
            eprintln!("{finding}");
        }
        bail!("store contains unreadable files");
    }
    let scope = if args.all_graphs {
        LoadScope::AllGraphs
    } else {
        LoadScope::AssertionsOnly
    };
    let mut store = QuadStore::new();
    store.load(&nanopubs, scope)?;

    let format: ExportFormat = args.format.parse().map_err(anyhow::Error::msg)?;
    let started = Instant::now();
    let table = if let Ok(question) = args.question.parse::<Question>() {
        let params = BuiltinParams {
            lemma: args.lemma.clone(),
            label: args
                .label
                .as_deref()
                .map(str::parse::<AttributionLabel>)
                .transpose()?,
            q4_mode: args.q4_mode.parse::<Q4Mode>()?,
        };
        run_builtin(&store, question, &params)?
    } else if Path::new(&args.question).is_file() {
        let text = std::fs::read_to_string(&args.question)?;
        let query = queryfile::parse_query_file(&text)?;
        evaluate(&store, &query)?
    } else {
        bail!(
            "{:?} is neither a built-in question (q1..q6) nor a query file",
            args.question
        );
    };
    let elapsed = started.elapsed();

    let rendered = export(&table, format);
    match &args.out {
        Some(path) => std::fs::write(path, &rendered)?,
        None => {
            use std::io::Write as _;
            std::io::stdout().write_all(&rendered)?;
        }
    }
    eprintln!(
        "{} rows in {:.3}s over {} quads",
        table.rows.len(),
        elapsed.as_secs_f64(),
        store.len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_publish(args: PublishArgs) -> Result<ExitCode> {
    if args.paths.is_empty() {
        bail!("nothing to publish");
    }
    let root = args
        .registry
        .or_else(|| std::env::var_os(REGISTRY_ENV).map(PathBuf::from))
        .with_context(|| format!("no registry: pass --registry or set ${REGISTRY_ENV}"))?;
    let (nanopubs, findings) = collect_nanopubs(&args.paths)?;
    if !findings.is_empty() {
        for finding in &findings {
            eprintln!("{finding}");
        }
        bail!("input contains unreadable files");
    }

    let protected: Vec<&Nanopub> = nanopubs.iter().filter(|np| np.is_protected()).collect();
    if !protected.is_empty() && !args.skip_protected {
        for np in &protected {
            eprintln!("protected: {}", np.uri());
        }
        bail!(
            "{} protected nanopub(s) in the input; nothing was published (use --skip-protected to publish the rest)",
            protected.len()
        );
    }

    let registry = Registry::open(&root)?;
    let mut published = 0usize;
    let mut skipped = 0usize;
    for nanopub in &nanopubs {
        match registry.publish(nanopub) {
            Ok(_) => published += 1,
            Err(RegistryError::ProtectedPublicationRefused(_)) => {
                skipped += 1;
                eprintln!("skipped protected {}", nanopub.uri());
            }
            Err(other) => return Err(other.into()),
        }
    }
    println!(
        "published {published} nanopubs to {} ({skipped} protected skipped)",
        root.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(paths: &[PathBuf]) -> Result<ExitCode> {
    if paths.is_empty() {
        bail!("nothing to count");
    }
    let (nanopubs, findings) = collect_nanopubs(paths)?;
    if !findings.is_empty() {
        for finding in &findings {
            eprintln!("{finding}");
        }
        bail!("input contains unreadable files");
    }
    let mut counts: std::collections::BTreeMap<NanopubKind, usize> = Default::default();
    let mut protected = 0usize;
    for nanopub in &nanopubs {
        *counts.entry(classify(nanopub)).or_default() += 1;
        if nanopub.is_protected() {
            protected += 1;
        }
    }
    for (kind, count) in &counts {
        println!("{kind}\t{count}");
    }
    println!("total\t{}", nanopubs.len());
    println!("protected\t{protected}");
    Ok(ExitCode::SUCCESS)
}
