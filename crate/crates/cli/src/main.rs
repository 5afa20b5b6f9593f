use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand};

use depusage_core::classfile::dump::dump;
use depusage_core::classfile::parse_class;
use depusage_core::corpus::fixture::shapes::{builtin, BUILTIN_NAMES};
use depusage_core::corpus::fixture::{generate_fixture_corpus, CorpusSpec};
use depusage_core::corpus::{
    available_versions, locate, open_archive, parse_pom, ArtifactArchive, Gav, LibrarySelector,
    Scope,
};
use depusage_core::metrics::{detect_unused, UnusedOptions};
use depusage_core::pipeline::{run, PipelineError, RunConfig};
use depusage_core::usage::{extract_api_surface, extract_usages, ApiSurface};

/// Bytecode-level dependency usage analysis over a local artifact repository.
///
/// Verbosity follows RUST_LOG (default: warn).
#[derive(Debug, Parser)]
#[command(name = "depusage", version)]
struct Cli {
    /// Repository root in the standard group/artifact/version layout.
    #[arg(long, global = true, default_value = ".")]
    repo: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the API surface of a library archive.
    Surface {
        /// group:artifact:version
        gav: Gav,
    },
    /// Print usage records of one client against the given libraries.
    Usages {
        /// group:artifact:version of the client
        client: Gav,
        /// group:artifact (highest version in the repository) or group:artifact:version
        #[arg(long, required = true, num_args = 1..)]
        against: Vec<LibrarySelector>,
    },
    /// Classify each dependency a client declares as used or unused.
    Unused {
        client: Gav,
        /// Also classify test-scope declarations.
        #[arg(long)]
        include_test_scope: bool,
    },
    /// Run the batch analysis described by a config file.
    Analyze {
        #[arg(long)]
        config: PathBuf,
        /// Override the configured worker count.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Generate or export fixture corpora.
    Fixtures {
        #[command(subcommand)]
        action: FixtureAction,
    },
    /// Print a parsed class file and its counted references.
    Dump {
        /// A .class file, or a jar together with --entry.
        path: PathBuf,
        #[arg(long)]
        entry: Option<String>,
    },
}

#[derive(Debug, Subcommand)]
enum FixtureAction {
    /// Write a corpus in repository layout.
    Generate {
        /// Path to a TOML spec, or builtin:<name>
        spec: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print a builtin spec as TOML.
    Export { name: String },
    /// List builtin specs.
    List,
}

/// A failure with its exit status: 2 for bad input or configuration, 1 for
/// everything else.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

fn usage(error: anyhow::Error) -> Failure {
    Failure { code: 2, error }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cli: &Cli) -> CmdResult {
    let repo = cli.repo.as_path();
    match &cli.command {
        Command::Surface { gav } => surface(repo, gav),
        Command::Usages { client, against } => usages(repo, client, against),
        Command::Unused {
            client,
            include_test_scope,
        } => unused(repo, client, *include_test_scope),
        Command::Analyze { config, workers } => analyze(config, *workers),
        Command::Fixtures { action } => fixtures(action),
        Command::Dump { path, entry } => dump_class(path, entry.as_deref()),
    }
}

fn open(repo: &Path, gav: &Gav) -> Result<ArtifactArchive, Failure> {
    let (jar, _) = locate(gav, repo);
    if !jar.is_file() {
        return Err(usage(anyhow!("{gav}: no archive at {}", jar.display())));
    }
    let archive = open_archive(&jar).with_context(|| format!("opening {gav}"))?;
    Ok(archive.with_coordinates(gav.clone()))
}

fn surface_of(repo: &Path, gav: &Gav) -> Result<ApiSurface, Failure> {
    Ok(extract_api_surface(&open(repo, gav)?).with_context(|| format!("surface of {gav}"))?)
}

fn report_entry_errors(subject: &Gav, errors: &[depusage_core::usage::EntryError]) {
    for e in errors {
        log::warn!("{subject}: {}: {}", e.entry, e.message);
    }
}

fn surface(repo: &Path, gav: &Gav) -> CmdResult {
    let s = surface_of(repo, gav)?;
    report_entry_errors(gav, &s.errors);
    let mut out = String::new();
    for t in s.types.values() {
        let _ = writeln!(out, "{}\t{:?}\t{}", t.name, t.kind, t.members.len());
        for m in t.members.keys() {
            let _ = writeln!(out, "\t{m}");
        }
    }
    let k = s.kind_counts();
    let _ = writeln!(
        out,
        "# {} types ({} classes, {} interfaces, {} annotations), {} members",
        k.total(),
        k.classes,
        k.interfaces,
        k.annotations,
        s.member_count()
    );
    print!("{out}");
    Ok(u8::from(!s.errors.is_empty()))
}

/// Highest version on disk for a bare GA.
fn resolve(repo: &Path, sel: &LibrarySelector) -> Result<Gav, Failure> {
    match sel {
        LibrarySelector::Version(gav) => Ok(gav.clone()),
        LibrarySelector::All(ga) => available_versions(ga, repo)
            .pop()
            .ok_or_else(|| usage(anyhow!("no version of {ga} in {}", repo.display()))),
    }
}

fn usages(repo: &Path, client: &Gav, against: &[LibrarySelector]) -> CmdResult {
    let surfaces = against
        .iter()
        .map(|sel| surface_of(repo, &resolve(repo, sel)?))
        .collect::<Result<Vec<_>, _>>()?;
    let result = extract_usages(&open(repo, client)?, &surfaces).context("extracting usages")?;
    report_entry_errors(client, &result.errors);
    for r in &result.records {
        println!("{r}");
    }
    Ok(u8::from(!result.errors.is_empty()))
}

fn unused(repo: &Path, client: &Gav, include_test_scope: bool) -> CmdResult {
    let (_, pom) = locate(client, repo);
    let bytes = std::fs::read(&pom).map_err(|e| usage(anyhow!("{}: {e}", pom.display())))?;
    let declared = parse_pom(&bytes).map_err(|e| usage(anyhow!("{}: {e}", pom.display())))?;
    let mut surfaces = Vec::new();
    let mut missing = Vec::new();
    for d in &declared {
        if d.scope == Scope::Test && !include_test_scope {
            continue;
        }
        let gav = d
            .resolved_gav()
            .filter(|g| locate(g, repo).0.is_file())
            .or_else(|| available_versions(&d.ga, repo).pop());
        match gav {
            Some(g) => surfaces.push(surface_of(repo, &g)?),
            None => missing.push(d.ga.clone()),
        }
    }
    let result = extract_usages(&open(repo, client)?, &surfaces).context("extracting usages")?;
    report_entry_errors(client, &result.errors);
    let opts = UnusedOptions { include_test_scope };
    for f in detect_unused(&declared, &result.records, opts) {
        // without an archive there is no surface to match against
        let status = if missing.contains(&f.dependency.ga) {
            "not_in_repository"
        } else {
            f.status.as_str()
        };
        println!(
            "{}\t{}\t{status}",
            f.dependency.coordinates_text(),
            f.dependency.scope.as_str()
        );
    }
    Ok(u8::from(!result.errors.is_empty()))
}

fn analyze(config: &Path, workers: Option<usize>) -> CmdResult {
    let mut config = RunConfig::load(config).map_err(|e| usage(e.into()))?;
    if let Some(w) = workers {
        config.workers = w;
    }
    match run(&config) {
        Ok(outcome) => {
            let reports = config.output_dir.join("reports");
            println!(
                "{} report files in {}",
                outcome.manifest.len(),
                reports.display()
            );
            for f in &outcome.bundle.failures {
                eprintln!(
                    "failed: {} {} after {} attempts: {}",
                    f.kind, f.subject, f.attempts, f.error
                );
            }
            Ok(u8::from(outcome.has_failures()))
        }
        Err(e @ PipelineError::Config(_)) => Err(usage(e.into())),
        Err(e) => Err(anyhow::Error::from(e).into()),
    }
}

fn fixtures(action: &FixtureAction) -> CmdResult {
    match action {
        FixtureAction::Generate { spec, out } => {
            let spec = load_spec(spec)?;
            let manifest = generate_fixture_corpus(&spec, out).context("writing corpus")?;
            println!(
                "{} libraries, {} clients written to {}",
                manifest.libraries.len(),
                manifest.clients.len(),
                out.display()
            );
        }
        FixtureAction::Export { name } => {
            let spec = builtin(name).ok_or_else(|| usage(anyhow!("unknown builtin {name:?}")))?;
            print!("{}", spec.to_toml());
        }
        FixtureAction::List => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
        }
    }
    Ok(0)
}

fn load_spec(arg: &str) -> Result<CorpusSpec, Failure> {
    if let Some(name) = arg.strip_prefix("builtin:") {
        return builtin(name)
            .ok_or_else(|| usage(anyhow!("unknown builtin {name:?}; see `fixtures list`")));
    }
    let text = std::fs::read_to_string(arg).map_err(|e| usage(anyhow!("{arg}: {e}")))?;
    CorpusSpec::parse(&text).map_err(|e| usage(anyhow!("{arg}: {e}")))
}

fn dump_class(path: &Path, entry: Option<&str>) -> CmdResult {
    let bytes = match entry {
        None => std::fs::read(path).map_err(|e| usage(anyhow!("{}: {e}", path.display())))?,
        Some(entry) => {
            let archive = open_archive(path).map_err(|e| usage(e.into()))?;
            archive.read_entry(entry).map_err(|e| usage(e.into()))?
        }
    };
    let cf = parse_class(&bytes).map_err(|e| anyhow!("{}: {e}", path.display()))?;
    print!("{}", dump(&cf));
    Ok(0)
}
