use std::collections::HashSet;
use std::fs::File;
use std::io::{BufReader, Cursor, Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use thiserror::Error;
use zip::ZipArchive;

use super::gav::Gav;

#[derive(Debug, Error)]
pub enum ArchiveError {
    #[error("{path}: not a zip archive")]
    NotAZip { path: String },
    #[error("{path}: corrupt archive: {reason}")]
    CorruptArchive { path: String, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArchiveEntry {
    pub path: String,
    pub size: u64,
}

impl ArchiveEntry {
    pub fn is_class(&self) -> bool {
        self.path.ends_with(".class")
    }

    /// Class entries that belong to the base class set: excludes
    /// `module-info.class` and multi-release overlays under `META-INF/versions/`.
    pub fn is_base_class(&self) -> bool {
        self.is_class()
            && !self.path.starts_with("META-INF/versions/")
            && self.path.rsplit('/').next() != Some("module-info.class")
    }
}

#[derive(Debug, Clone)]
enum Source {
    File(PathBuf),
    Memory(Arc<[u8]>),
}

/// A jar opened for reading. Entry bytes are fetched on demand.
#[derive(Debug, Clone)]
pub struct ArtifactArchive {
    /// From the embedded `META-INF/maven/**/pom.properties` when there is
    /// exactly one, or set by the caller.
    pub coordinates: Option<Gav>,
    entries: Vec<ArchiveEntry>,
    source: Source,
}

const EOCD_SIGNATURE: [u8; 4] = [b'P', b'K', 5, 6];
/// End-of-central-directory record plus the largest possible comment.
const EOCD_SEARCH_WINDOW: u64 = 22 + u16::MAX as u64;

trait ReadSeek: Read + Seek {}
impl<T: Read + Seek> ReadSeek for T {}

impl ArtifactArchive {
    pub fn open(path: &Path) -> Result<Self, ArchiveError> {
        let source = Source::File(path.to_path_buf());
        Self::load(source)
    }

    pub fn from_bytes(bytes: impl Into<Arc<[u8]>>) -> Result<Self, ArchiveError> {
        Self::load(Source::Memory(bytes.into()))
    }

    pub fn with_coordinates(mut self, gav: Gav) -> Self {
        self.coordinates = Some(gav);
        self
    }

    pub fn entries(&self) -> &[ArchiveEntry] {
        &self.entries
    }

    pub fn class_entries(&self) -> impl Iterator<Item = &ArchiveEntry> {
        self.entries.iter().filter(|e| e.is_class())
    }

    pub fn display_path(&self) -> String {
        match &self.source {
            Source::File(p) => p.display().to_string(),
            Source::Memory(_) => "<memory>".to_owned(),
        }
    }

    fn reader(&self) -> Result<Box<dyn ReadSeek + '_>, ArchiveError> {
        Ok(match &self.source {
            Source::File(p) => Box::new(BufReader::new(File::open(p).map_err(|e| self.io(e))?)),
            Source::Memory(b) => Box::new(Cursor::new(&b[..])),
        })
    }

    fn io(&self, source: std::io::Error) -> ArchiveError {
        ArchiveError::Io {
            path: self.display_path(),
            source,
        }
    }

    fn corrupt(&self, reason: impl ToString) -> ArchiveError {
        ArchiveError::CorruptArchive {
            path: self.display_path(),
            reason: reason.to_string(),
        }
    }

    fn zip(&self) -> Result<ZipArchive<Box<dyn ReadSeek + '_>>, ArchiveError> {
        let mut reader = self.reader()?;
        if !has_end_record(&mut reader).map_err(|e| self.io(e))? {
            return Err(ArchiveError::NotAZip {
                path: self.display_path(),
            });
        }
        reader.seek(SeekFrom::Start(0)).map_err(|e| self.io(e))?;
        ZipArchive::new(reader).map_err(|e| self.corrupt(e))
    }

    fn load(source: Source) -> Result<Self, ArchiveError> {
        let mut archive = ArtifactArchive {
            coordinates: None,
            entries: Vec::new(),
            source,
        };
        let mut zip = archive.zip()?;
        let mut seen = HashSet::new();
        let mut entries = Vec::with_capacity(zip.len());
        for i in 0..zip.len() {
            let file = zip.by_index_raw(i).map_err(|e| archive.corrupt(e))?;
            if file.is_dir() {
                continue;
            }
            let path = file.name().to_owned();
            if !seen.insert(path.clone()) {
                return Err(archive.corrupt(format!("duplicate entry {path}")));
            }
            entries.push(ArchiveEntry {
                path,
                size: file.size(),
            });
        }
        drop(zip);
        archive.entries = entries;
        archive.coordinates = archive.embedded_coordinates();
        Ok(archive)
    }

    fn embedded_coordinates(&self) -> Option<Gav> {
        let mut props = self.entries.iter().filter(|e| {
            e.path.starts_with("META-INF/maven/") && e.path.ends_with("/pom.properties")
        });
        let only = props.next()?;
        if props.next().is_some() {
            return None;
        }
        let bytes = self.read_entry(&only.path).ok()?;
        let text = String::from_utf8(bytes).ok()?;
        let get = |key: &str| {
            text.lines().find_map(|l| {
                let (k, v) = l.split_once('=')?;
                (k.trim() == key).then(|| v.trim().to_owned())
            })
        };
        Some(Gav::new(
            get("groupId")?,
            get("artifactId")?,
            get("version")?,
        ))
    }

    pub fn read_entry(&self, path: &str) -> Result<Vec<u8>, ArchiveError> {
        let mut zip = self.zip()?;
        let mut file = zip.by_name(path).map_err(|e| self.corrupt(e))?;
        let mut buf = Vec::with_capacity(file.size() as usize);
        file.read_to_end(&mut buf).map_err(|e| self.corrupt(e))?;
        Ok(buf)
    }

    /// Visits each base class entry (see [`ArchiveEntry::is_base_class`]) in
    /// archive order with its bytes or a per-entry read error.
    pub fn for_each_class(
        &self,
        mut visit: impl FnMut(&str, Result<Vec<u8>, ArchiveError>),
    ) -> Result<(), ArchiveError> {
        let mut zip = self.zip()?;
        for entry in self.entries.iter().filter(|e| e.is_base_class()) {
            let bytes = match zip.by_name(&entry.path) {
                Ok(mut file) => {
                    let mut buf = Vec::with_capacity(file.size() as usize);
                    file.read_to_end(&mut buf)
                        .map(|_| buf)
                        .map_err(|e| self.corrupt(e))
                }
                Err(e) => Err(self.corrupt(e)),
            };
            visit(&entry.path, bytes);
        }
        Ok(())
    }
}

fn has_end_record(reader: &mut dyn ReadSeek) -> std::io::Result<bool> {
    let len = reader.seek(SeekFrom::End(0))?;
    let window = len.min(EOCD_SEARCH_WINDOW);
    reader.seek(SeekFrom::Start(len - window))?;
    let mut tail = Vec::with_capacity(window as usize);
    reader.take(window).read_to_end(&mut tail)?;
    Ok(tail.windows(4).any(|w| w == EOCD_SIGNATURE))
}

/// Opens the archive, mapping to the module's named error kinds.
pub fn open_archive(path: &Path) -> Result<ArtifactArchive, ArchiveError> {
    ArtifactArchive::open(path)
}
