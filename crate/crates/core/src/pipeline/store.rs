//! Per-job result files and the append-only journal.

use std::collections::BTreeSet;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use crate::corpus::Gav;
use crate::usage::{EntryError, UsageRecord};

/// Writes through a temporary sibling and renames over the target, so a
/// reader never sees a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Stored outcome of one client job.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClientResult {
    /// Surfaces the client was matched against, in priority order.
    pub surfaces: Vec<Gav>,
    pub records: Vec<UsageRecord>,
    pub errors: Vec<EntryError>,
}

impl ClientResult {
    pub fn to_text(&self) -> String {
        let mut out = String::from("#surfaces");
        for s in &self.surfaces {
            out.push('\t');
            out.push_str(&s.to_string());
        }
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.to_string());
            out.push('\n');
        }
        for e in &self.errors {
            out.push_str(&format!(
                "!\t{}\t{}\n",
                e.entry,
                e.message.replace(['\t', '\n'], " ")
            ));
        }
        out
    }

    pub fn parse(text: &str) -> Option<Self> {
        let mut lines = text.lines();
        let header = lines.next()?;
        let mut cols = header.split('\t');
        if cols.next()? != "#surfaces" {
            return None;
        }
        let surfaces = cols.map(|c| c.parse().ok()).collect::<Option<Vec<Gav>>>()?;
        let mut records = Vec::new();
        let mut errors = Vec::new();
        for line in lines {
            if let Some(rest) = line.strip_prefix("!\t") {
                let (entry, message) = rest.split_once('\t')?;
                errors.push(EntryError {
                    entry: entry.to_owned(),
                    message: message.to_owned(),
                });
            } else {
                records.push(line.parse().ok()?);
            }
        }
        Some(ClientResult {
            surfaces,
            records,
            errors,
        })
    }
}

pub struct WorkDir {
    root: PathBuf,
}

impl WorkDir {
    pub fn new(root: PathBuf) -> Self {
        WorkDir { root }
    }

    pub fn client_path(&self, client: &Gav) -> PathBuf {
        self.root
            .join("clients")
            .join(format!("{}.tsv", client.file_stem()))
    }

    fn journal_path(&self) -> PathBuf {
        self.root.join("journal.log")
    }

    pub fn store_client(&self, client: &Gav, result: &ClientResult) -> std::io::Result<()> {
        write_atomic(&self.client_path(client), result.to_text().as_bytes())
    }

    pub fn load_client(&self, client: &Gav) -> Option<ClientResult> {
        ClientResult::parse(&fs::read_to_string(self.client_path(client)).ok()?)
    }

    pub fn append_journal(&self, line: &str) -> std::io::Result<()> {
        fs::create_dir_all(&self.root)?;
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(self.journal_path())?;
        f.write_all(format!("{line}\n").as_bytes())
    }

    /// Clients recorded as done. A torn final line is ignored.
    pub fn completed_clients(&self) -> BTreeSet<Gav> {
        let Ok(text) = fs::read_to_string(self.journal_path()) else {
            return BTreeSet::new();
        };
        text.lines()
            .filter_map(|l| l.strip_prefix("done\tclient_analysis\t"))
            .filter_map(|g| g.parse().ok())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn result_round_trip() {
        let r = ClientResult {
            surfaces: vec![Gav::new("l", "l", "1"), Gav::new("m", "m", "2")],
            records: vec!["c:c:1\tl:l:1\tl/T\t-\t3".parse().unwrap()],
            errors: vec![EntryError {
                entry: "a/B.class".into(),
                message: "input truncated at byte offset 10".into(),
            }],
        };
        assert_eq!(ClientResult::parse(&r.to_text()), Some(r));
        assert_eq!(ClientResult::parse("garbage"), None);
    }

    #[test]
    fn journal_tolerates_torn_line() {
        let dir = tempfile::tempdir().unwrap();
        let w = WorkDir::new(dir.path().to_path_buf());
        w.append_journal("done\tclient_analysis\tc:c:1").unwrap();
        w.append_journal("done\tclient_analysis\tc:c").unwrap();
        assert_eq!(
            w.completed_clients(),
            BTreeSet::from([Gav::new("c", "c", "1")])
        );
    }

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("x/y.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert!(!dir.path().join("x/y.txt.tmp").exists());
    }
}
