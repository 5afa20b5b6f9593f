//! API surfaces of libraries and counted client usages of them.

mod extract;
mod internal;
mod record;
mod surface;

use thiserror::Error;

use crate::corpus::ArchiveError;

pub use extract::{extract_usages, ClientUsages};
pub use internal::{internal_usage, InternalUsage, InternalUsageReport};
pub use record::{InvalidRecord, UsageRecord};
pub use surface::{extract_api_surface, surface_from_classes, ApiSurface, ApiType, KindCounts};

/// A class entry that could not be read or parsed. The rest of the archive
/// is still processed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EntryError {
    pub entry: String,
    pub message: String,
}

#[derive(Debug, Error)]
pub enum UsageError {
    #[error("{0}: archive has no coordinates (no single embedded pom.properties)")]
    MissingCoordinates(String),
    #[error(transparent)]
    Archive(#[from] ArchiveError),
}
