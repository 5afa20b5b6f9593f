use std::fmt::Write as _;
use std::path::Path;

use serde_json::{json, Value};

use crate::corpus::{Ga, Gav, Scope};
use crate::graph::BipartiteUsageGraph;
use crate::metrics::{
    ChordGrouping, CoreIndex, CoreResult, DependencyStatus, ExtinctionCurve, TurRow,
};
use crate::usage::{InternalUsageReport, KindCounts, UsageRecord};

use super::pool::Job;
use super::store::write_atomic;
use super::PipelineError;

/// Reuse-core levels reported in `core.json`.
pub const CR_LEVELS: [u32; 8] = [50, 60, 70, 80, 90, 95, 99, 100];

#[derive(Debug, Clone, PartialEq)]
pub struct DurRow {
    pub ga: Ga,
    pub declared: usize,
    pub observed: usize,
    /// None when nobody declares the library.
    pub dur: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LibraryStatus {
    Ok,
    NoObservedClients,
}

impl LibraryStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            LibraryStatus::Ok => "ok",
            LibraryStatus::NoObservedClients => "no_observed_clients",
        }
    }
}

/// Metrics of one library at its most popular version.
#[derive(Debug, Clone)]
pub struct LibraryReport {
    pub gav: Gav,
    pub status: LibraryStatus,
    /// Another version had as many observed clients.
    pub tied: bool,
    pub surface_types: usize,
    pub graph: BipartiteUsageGraph,
    pub tur: Vec<TurRow>,
    pub least: Option<ExtinctionCurve>,
    pub most: Option<ExtinctionCurve>,
    pub core: Option<CoreIndex>,
    /// Core_n for each of [`CR_LEVELS`].
    pub levels: Vec<CoreResult>,
    pub chord: Option<ChordGrouping>,
    pub internal: Option<InternalUsageReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct JobFailure {
    pub kind: String,
    pub subject: Gav,
    pub attempts: u32,
    pub error: String,
}

impl JobFailure {
    pub(super) fn from_job(job: &Job, error: String) -> Self {
        JobFailure {
            kind: job.kind.as_str().to_owned(),
            subject: job.subject.clone(),
            attempts: job.attempts,
            error,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EntryFailure {
    pub subject: Gav,
    pub entry: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnusedRow {
    pub client: Gav,
    pub dependency: String,
    pub scope: Scope,
    pub status: DependencyStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurfaceRow {
    pub gav: Gav,
    pub kinds: KindCounts,
    pub members: usize,
    pub entry_errors: usize,
}

#[derive(Debug, Clone)]
pub struct ReportBundle {
    /// One row per selected library, sorted by GA.
    pub dur: Vec<DurRow>,
    pub libraries: Vec<LibraryReport>,
    pub usages: Vec<UsageRecord>,
    pub unused: Vec<UnusedRow>,
    pub surfaces: Vec<SurfaceRow>,
    pub failures: Vec<JobFailure>,
    pub entry_errors: Vec<EntryFailure>,
}

impl ReportBundle {
    pub fn library(&self, ga: &Ga) -> Option<&LibraryReport> {
        self.libraries.iter().find(|l| l.gav.same_ga(ga))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub file: String,
    pub bytes: u64,
}

fn clean(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

fn dur_csv(rows: &[DurRow]) -> String {
    let mut out = String::from("ga,declared_clients,observed_clients,dur\n");
    for r in rows {
        let dur = r.dur.map_or("NA".to_owned(), |d| format!("{d:.6}"));
        let _ = writeln!(out, "{},{},{},{dur}", r.ga, r.declared, r.observed);
    }
    out
}

fn tur_csv(rows: &[TurRow]) -> String {
    let mut out = String::from("type,users,tur\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:.6}", r.type_name, r.users, r.tur);
    }
    out
}

fn internal_csv(report: &InternalUsageReport) -> String {
    let mut out = String::from("type,used_from_other_packages,externally_used\n");
    for (t, u) in &report.types {
        let _ = writeln!(
            out,
            "{t},{},{}",
            u.used_from_other_packages, u.externally_used
        );
    }
    out
}

fn round6(x: f64) -> Value {
    json!((x * 1e6).round() / 1e6)
}

fn core_json(lib: &LibraryReport) -> Value {
    let mut v = json!({
        "library": lib.gav.to_string(),
        "status": lib.status.as_str(),
        "most_popular_tied": lib.tied,
        "surface_types": lib.surface_types,
        "observed_clients": lib.graph.client_nodes().len(),
        "types_obs": lib.graph.type_nodes().len(),
    });
    if let Some(core) = &lib.core {
        v["h"] = json!(core.h);
        v["core_n"] = json!(core.core.n);
        v["core_size"] = json!(core.core.core_types.len());
        v["core_types"] = json!(core.core.core_types);
        let levels: serde_json::Map<String, Value> = lib
            .levels
            .iter()
            .map(|c| {
                let entry = json!({
                    "core_size": c.core_types.len(),
                    "cr": round6(c.cr_n),
                    "served_fraction": round6(c.served_fraction),
                });
                (c.n.to_string(), entry)
            })
            .collect();
        v["levels"] = Value::Object(levels);
    }
    v
}

fn chord_json(lib: &LibraryReport) -> Value {
    let mut v = json!({
        "library": lib.gav.to_string(),
        "status": lib.status.as_str(),
    });
    if let Some(c) = &lib.chord {
        v["core_n"] = json!(c.core_n);
        v["core_size"] = json!(c.core_size);
        for (name, g) in [
            ("core_only", &c.core_only),
            ("non_core_only", &c.non_core_only),
            ("mixed", &c.mixed),
        ] {
            v[name] = json!({
                "clients": g.clients,
                "client_share": round6(g.client_share),
                "usage_share": round6(g.usage_share),
            });
        }
    }
    v
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Renders every report file, sorted by name.
pub fn render(bundle: &ReportBundle) -> Vec<(String, String)> {
    let mut files = vec![("dur.csv".to_owned(), dur_csv(&bundle.dur))];
    for lib in &bundle.libraries {
        let stem = lib.gav.file_stem();
        files.push((format!("{stem}.tur.csv"), tur_csv(&lib.tur)));
        if let Some(c) = &lib.least {
            files.push((format!("{stem}.extinction-least.csv"), c.to_csv()));
        }
        if let Some(c) = &lib.most {
            files.push((format!("{stem}.extinction-most.csv"), c.to_csv()));
        }
        files.push((format!("{stem}.graph.tsv"), lib.graph.to_tsv()));
        if let Some(i) = &lib.internal {
            files.push((format!("{stem}.internal.csv"), internal_csv(i)));
        }
        files.push((format!("{stem}.core.json"), pretty(&core_json(lib))));
        files.push((format!("{stem}.chord.json"), pretty(&chord_json(lib))));
    }

    let mut usages = String::new();
    for r in &bundle.usages {
        let _ = writeln!(usages, "{r}");
    }
    files.push(("usages.tsv".into(), usages));

    let mut unused = String::from("client\tdependency\tscope\tstatus\n");
    for u in &bundle.unused {
        let _ = writeln!(
            unused,
            "{}\t{}\t{}\t{}",
            u.client,
            u.dependency,
            u.scope.as_str(),
            u.status.as_str()
        );
    }
    files.push(("unused.tsv".into(), unused));

    let mut failures = String::from("kind\tsubject\tattempts\terror\n");
    for f in &bundle.failures {
        let _ = writeln!(
            failures,
            "{}\t{}\t{}\t{}",
            f.kind,
            f.subject,
            f.attempts,
            clean(&f.error)
        );
    }
    files.push(("failures.tsv".into(), failures));

    let mut errors = String::from("subject\tentry\tmessage\n");
    for e in &bundle.entry_errors {
        let _ = writeln!(errors, "{}\t{}\t{}", e.subject, e.entry, clean(&e.message));
    }
    files.push(("entry_errors.tsv".into(), errors));

    let mut surfaces =
        String::from("gav,types,classes,interfaces,annotations,members,entry_errors\n");
    for s in &bundle.surfaces {
        let k = s.kinds;
        let _ = writeln!(
            surfaces,
            "{},{},{},{},{},{},{}",
            s.gav,
            k.total(),
            k.classes,
            k.interfaces,
            k.annotations,
            s.members,
            s.entry_errors
        );
    }
    files.push(("surfaces.csv".into(), surfaces));
    files.sort();
    files
}

/// Writes the bundle into `dir` plus a `manifest.txt` of file sizes.
pub fn emit_reports(
    bundle: &ReportBundle,
    dir: &Path,
) -> Result<Vec<ManifestEntry>, PipelineError> {
    std::fs::create_dir_all(dir).map_err(|e| PipelineError::io(dir, e))?;
    let mut manifest = Vec::new();
    let mut text = String::new();
    for (name, body) in render(bundle) {
        let path = dir.join(&name);
        write_atomic(&path, body.as_bytes()).map_err(|e| PipelineError::io(&path, e))?;
        let _ = writeln!(text, "{name}\t{}", body.len());
        manifest.push(ManifestEntry {
            file: name,
            bytes: body.len() as u64,
        });
    }
    let path = dir.join("manifest.txt");
    write_atomic(&path, text.as_bytes()).map_err(|e| PipelineError::io(&path, e))?;
    Ok(manifest)
}
