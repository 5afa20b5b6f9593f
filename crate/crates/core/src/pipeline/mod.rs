//! Corpus-scale batch analysis: surface extraction, client analysis on a
//! worker pool with retries and resumable per-client results, then a
//! single-threaded deterministic fold into reports.

mod config;
mod pool;
mod report;
mod store;

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use thiserror::Error;
use walkdir::WalkDir;

use crate::corpus::{
    available_versions, compare_versions, coordinates_of, locate, open_archive, parse_pom,
    DeclaredDependency, Ga, Gav, LibrarySelector, Scope,
};
use crate::graph::{
    build_graph, group_by_lib, most_popular_version, BipartiteUsageGraph, GroupOptions,
};
use crate::metrics::{
    chord_grouping, core_index, core_n, detect_unused, dur, extinction, tur_distribution, Order,
    UnusedOptions,
};
use crate::usage::{extract_api_surface, extract_usages, internal_usage, ApiSurface, UsageRecord};

pub use config::RunConfig;
pub use pool::{run_pool, Job, JobKind, Outcome, PoolOptions};
pub use report::{
    emit_reports, render, DurRow, EntryFailure, JobFailure, LibraryReport, LibraryStatus,
    ManifestEntry, ReportBundle, SurfaceRow, UnusedRow, CR_LEVELS,
};
pub use store::{write_atomic, ClientResult, WorkDir};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("run interrupted after {0} client jobs")]
    Interrupted(usize),
}

impl PipelineError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        PipelineError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}

#[derive(Debug)]
pub struct RunOutcome {
    pub bundle: ReportBundle,
    pub manifest: Vec<ManifestEntry>,
}

impl RunOutcome {
    pub fn has_failures(&self) -> bool {
        !self.bundle.failures.is_empty()
    }
}

/// A client selected for analysis.
#[derive(Debug, Clone)]
struct ClientPlan {
    gav: Gav,
    declarations: Vec<DeclaredDependency>,
    /// Surfaces to match against, in declaration order.
    surfaces: Vec<Gav>,
}

/// Replaces the repository root in messages so reports do not depend on
/// where the corpus lives.
fn scrub(message: &str, repo_root: &Path) -> String {
    let root = repo_root.display().to_string();
    if root.is_empty() {
        message.to_owned()
    } else {
        message.replace(&root, "<repo>")
    }
}

/// Every version of each selector found on disk.
fn resolve_libraries(config: &RunConfig) -> Result<BTreeMap<Ga, Vec<Gav>>, PipelineError> {
    let mut selected: BTreeMap<Ga, BTreeSet<Gav>> = BTreeMap::new();
    for sel in &config.libraries {
        let found: Vec<Gav> = match sel {
            LibrarySelector::Version(gav) => vec![gav.clone()],
            LibrarySelector::All(ga) => available_versions(ga, &config.repo_root),
        };
        let found: Vec<Gav> = found
            .into_iter()
            .filter(|g| locate(g, &config.repo_root).0.is_file())
            .collect();
        if found.is_empty() {
            return Err(PipelineError::Config(format!(
                "library {sel} not found in repository"
            )));
        }
        selected.entry(sel.ga()).or_default().extend(found);
    }
    Ok(selected
        .into_iter()
        .map(|(ga, vs)| {
            let mut vs: Vec<Gav> = vs.into_iter().collect();
            vs.sort_by(|a, b| compare_versions(&a.version, &b.version));
            (ga, vs)
        })
        .collect())
}

/// Manifests under the repository that declare a selected library.
fn discover_clients(
    config: &RunConfig,
    selected: &BTreeMap<Ga, Vec<Gav>>,
    failures: &mut Vec<JobFailure>,
) -> Vec<ClientPlan> {
    let mut clients = Vec::new();
    let walk = WalkDir::new(&config.repo_root).sort_by_file_name();
    for entry in walk.into_iter().filter_map(Result::ok) {
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().and_then(|e| e.to_str()) != Some("pom")
        {
            continue;
        }
        let Some(gav) = coordinates_of(path, &config.repo_root) else {
            continue;
        };
        let deps = match std::fs::read(path)
            .map_err(|e| e.to_string())
            .and_then(|b| parse_pom(&b).map_err(|e| e.to_string()))
        {
            Ok(d) => d,
            Err(e) => {
                failures.push(JobFailure {
                    kind: "manifest".into(),
                    subject: gav,
                    attempts: 1,
                    error: scrub(&e, &config.repo_root),
                });
                continue;
            }
        };
        let in_scope =
            |d: &&DeclaredDependency| config.include_test_scope || d.scope != Scope::Test;
        let declarations: Vec<DeclaredDependency> = deps
            .into_iter()
            .filter(|d| selected.contains_key(&d.ga) && !gav.same_ga(&d.ga))
            .collect();
        let mut surfaces = Vec::new();
        for d in declarations.iter().filter(in_scope) {
            let versions = &selected[&d.ga];
            let pick = d
                .resolved_gav()
                .filter(|g| versions.contains(g))
                .unwrap_or_else(|| {
                    versions
                        .last()
                        .expect("resolved libraries are non-empty")
                        .clone()
                });
            if !surfaces.contains(&pick) {
                surfaces.push(pick);
            }
        }
        if surfaces.is_empty() {
            continue;
        }
        clients.push(ClientPlan {
            gav,
            declarations,
            surfaces,
        });
    }
    clients
}

fn analyze_client(
    config: &RunConfig,
    plan: &ClientPlan,
    surfaces: &BTreeMap<Gav, ApiSurface>,
) -> Result<ClientResult, String> {
    let (jar, _) = locate(&plan.gav, &config.repo_root);
    let archive = open_archive(&jar)
        .map_err(|e| e.to_string())?
        .with_coordinates(plan.gav.clone());
    let matched: Vec<ApiSurface> = plan
        .surfaces
        .iter()
        .filter_map(|g| surfaces.get(g).cloned())
        .collect();
    let usages = extract_usages(&archive, &matched).map_err(|e| e.to_string())?;
    Ok(ClientResult {
        surfaces: matched.iter().map(|s| s.library.clone()).collect(),
        records: usages.records,
        errors: usages.errors,
    })
}

/// Runs the whole analysis and writes reports to `config.output_dir/reports`.
///
/// Client results are persisted under `config.output_dir/work` as they
/// complete, so a rerun after an interruption only repeats unfinished jobs.
pub fn run(config: &RunConfig) -> Result<RunOutcome, PipelineError> {
    config.validate()?;
    let repo = &config.repo_root;
    let selected = resolve_libraries(config)?;
    let mut failures = Vec::new();

    // phase 1: surfaces
    let surface_jobs: Vec<Job> = selected
        .values()
        .flatten()
        .map(|g| Job {
            kind: JobKind::SurfaceExtraction,
            subject: g.clone(),
            attempts: 0,
        })
        .collect();
    let opts = PoolOptions {
        workers: config.workers,
        max_retries: config.max_retries,
        stop_after: None,
    };
    let mut surfaces: BTreeMap<Gav, ApiSurface> = BTreeMap::new();
    log::info!("extracting {} surfaces", surface_jobs.len());
    run_pool(
        surface_jobs,
        &opts,
        |job| {
            let (jar, _) = locate(&job.subject, repo);
            let archive = open_archive(&jar)
                .map_err(|e| e.to_string())?
                .with_coordinates(job.subject.clone());
            extract_api_surface(&archive).map_err(|e| e.to_string())
        },
        |outcome| match outcome {
            Outcome::Done { job, value } => {
                surfaces.insert(job.subject, value);
            }
            Outcome::Failed { job, error } => {
                failures.push(JobFailure::from_job(&job, scrub(&error, repo)))
            }
        },
    );

    // phase 2: clients
    let clients = discover_clients(config, &selected, &mut failures);
    let plans: BTreeMap<Gav, ClientPlan> =
        clients.into_iter().map(|c| (c.gav.clone(), c)).collect();
    let work = WorkDir::new(config.output_dir.join("work"));
    let journaled = work.completed_clients();
    let mut results: BTreeMap<Gav, ClientResult> = BTreeMap::new();
    let mut client_jobs = Vec::new();
    for plan in plans.values() {
        let expected: Vec<Gav> = plan
            .surfaces
            .iter()
            .filter(|g| surfaces.contains_key(*g))
            .cloned()
            .collect();
        let reusable = journaled
            .contains(&plan.gav)
            .then(|| work.load_client(&plan.gav))
            .flatten()
            .filter(|r| r.surfaces == expected);
        match reusable {
            Some(r) => {
                results.insert(plan.gav.clone(), r);
            }
            None => client_jobs.push(Job {
                kind: JobKind::ClientAnalysis,
                subject: plan.gav.clone(),
                attempts: 0,
            }),
        }
    }
    log::info!(
        "{} clients, {} already analysed",
        plans.len(),
        results.len()
    );
    let opts = PoolOptions {
        stop_after: config.interrupt_after,
        ..opts
    };
    let mut journal_error = None;
    let finished = run_pool(
        client_jobs,
        &opts,
        |job| {
            let result = analyze_client(config, &plans[&job.subject], &surfaces)?;
            work.store_client(&job.subject, &result)
                .map_err(|e| e.to_string())?;
            Ok(result)
        },
        |outcome| match outcome {
            Outcome::Done { job, value } => {
                if let Err(e) =
                    work.append_journal(&format!("done\t{}\t{}", job.kind.as_str(), job.subject))
                {
                    journal_error.get_or_insert(e);
                }
                results.insert(job.subject, value);
            }
            Outcome::Failed { job, error } => {
                failures.push(JobFailure::from_job(&job, scrub(&error, repo)))
            }
        },
    );
    if let Some(e) = journal_error {
        return Err(PipelineError::io(&config.output_dir.join("work"), e));
    }
    if !finished {
        return Err(PipelineError::Interrupted(
            config.interrupt_after.unwrap_or(0),
        ));
    }

    // phase 3: deterministic fold
    let bundle = build_bundle(config, &selected, &surfaces, &plans, &results, failures);
    let manifest = emit_reports(&bundle, &config.output_dir.join("reports"))?;
    Ok(RunOutcome { bundle, manifest })
}

fn build_bundle(
    config: &RunConfig,
    selected: &BTreeMap<Ga, Vec<Gav>>,
    surfaces: &BTreeMap<Gav, ApiSurface>,
    plans: &BTreeMap<Gav, ClientPlan>,
    results: &BTreeMap<Gav, ClientResult>,
    mut failures: Vec<JobFailure>,
) -> ReportBundle {
    let records: Vec<UsageRecord> = results
        .values()
        .flat_map(|r| r.records.iter().cloned())
        .collect();
    let declarations: Vec<(Gav, DeclaredDependency)> = plans
        .values()
        .filter(|p| results.contains_key(&p.gav))
        .flat_map(|p| p.declarations.iter().map(|d| (p.gav.clone(), d.clone())))
        .collect();
    let group_opts = GroupOptions {
        include_test_scope: config.include_test_scope,
    };
    let groups: BTreeMap<Ga, _> = group_by_lib(&records, &declarations, group_opts)
        .into_iter()
        .map(|g| (g.ga.clone(), g))
        .collect();

    let mut dur_rows = Vec::new();
    let mut libraries = Vec::new();
    for (ga, versions) in selected {
        let group = groups.get(ga);
        dur_rows.push(match group.map(dur) {
            Some(Ok(d)) => DurRow {
                ga: ga.clone(),
                declared: d.declared,
                observed: d.observed,
                dur: Some(d.dur),
            },
            _ => DurRow {
                ga: ga.clone(),
                declared: 0,
                observed: 0,
                dur: None,
            },
        });
        let popular = group.and_then(|g| most_popular_version(g, &records));
        let gav = match &popular {
            Some(p) => p.gav.clone(),
            None => match versions.iter().rev().find(|v| surfaces.contains_key(*v)) {
                Some(v) => v.clone(),
                None => continue,
            },
        };
        let surface = &surfaces[&gav];
        let observed = group.map(|g| &g.observed_clients);
        let lib_records: Vec<UsageRecord> = records
            .iter()
            .filter(|r| r.library == gav && observed.is_some_and(|o| o.contains(&r.client.ga())))
            .cloned()
            .collect();
        let graph = build_graph(surface, &lib_records)
            .unwrap_or_else(|_| BipartiteUsageGraph::empty(gav.clone()));
        libraries.push(library_report(
            config,
            gav,
            popular.is_some_and(|p| p.tied),
            surface,
            graph,
        ));
    }

    let mut usages = records;
    usages.sort();
    let mut unused = Vec::new();
    let mut entry_errors = Vec::new();
    for (client, result) in results {
        let plan = &plans[client];
        let opts = UnusedOptions {
            include_test_scope: config.include_test_scope,
        };
        for f in detect_unused(&plan.declarations, &result.records, opts) {
            unused.push(UnusedRow {
                client: client.clone(),
                dependency: f.dependency.coordinates_text(),
                scope: f.dependency.scope,
                status: f.status,
            });
        }
        for e in &result.errors {
            entry_errors.push(EntryFailure {
                subject: client.clone(),
                entry: e.entry.clone(),
                message: e.message.clone(),
            });
        }
    }
    for s in surfaces.values() {
        for e in &s.errors {
            entry_errors.push(EntryFailure {
                subject: s.library.clone(),
                entry: e.entry.clone(),
                message: e.message.clone(),
            });
        }
    }
    entry_errors.sort();
    failures.sort();
    let surface_rows = surfaces
        .values()
        .map(|s| SurfaceRow {
            gav: s.library.clone(),
            kinds: s.kind_counts(),
            members: s.member_count(),
            entry_errors: s.errors.len(),
        })
        .collect();

    ReportBundle {
        dur: dur_rows,
        libraries,
        usages,
        unused,
        surfaces: surface_rows,
        failures,
        entry_errors,
    }
}

fn library_report(
    config: &RunConfig,
    gav: Gav,
    tied: bool,
    surface: &ApiSurface,
    graph: BipartiteUsageGraph,
) -> LibraryReport {
    let internal = open_archive(&locate(&gav, &config.repo_root).0)
        .ok()
        .and_then(|a| internal_usage(&a.with_coordinates(gav.clone()), surface, &graph).ok());
    if graph.is_empty() {
        return LibraryReport {
            gav,
            status: LibraryStatus::NoObservedClients,
            tied,
            surface_types: surface.len(),
            tur: Vec::new(),
            least: None,
            most: None,
            core: None,
            levels: Vec::new(),
            chord: None,
            internal,
            graph,
        };
    }
    let core = core_index(&graph).expect("graph is non-empty");
    let chord = chord_grouping(&graph, &core.core);
    LibraryReport {
        status: LibraryStatus::Ok,
        tied,
        surface_types: surface.len(),
        tur: tur_distribution(&graph, surface).expect("graph is non-empty"),
        least: extinction(&graph, Order::LeastUsedFirst).ok(),
        most: extinction(&graph, Order::MostUsedFirst).ok(),
        levels: CR_LEVELS
            .iter()
            .map(|&n| core_n(&graph, n).expect("valid level"))
            .collect(),
        core: Some(core),
        chord: Some(chord),
        internal,
        gav,
        graph,
    }
}

/// Output directory layout helper for callers that want to inspect reports.
pub fn reports_dir(output_dir: &Path) -> PathBuf {
    output_dir.join("reports")
}
