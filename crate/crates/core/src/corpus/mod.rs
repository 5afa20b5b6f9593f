//! Artifact coordinates, repository layout, jar and manifest reading, and
//! the synthetic fixture generator.

mod archive;
pub mod fixture;
mod gav;
mod jar;
mod layout;
mod pom;

pub use archive::{open_archive, ArchiveEntry, ArchiveError, ArtifactArchive};
pub use gav::{compare_versions, Ga, Gav, InvalidCoordinates, LibrarySelector};
pub use jar::{manifest_entry, pom_properties_entry, write_jar};
pub use layout::{artifact_dir, available_versions, coordinates_of, locate, versions_dir};
pub use pom::{parse_pom, write_pom, DeclaredDependency, MalformedXml, Scope};
