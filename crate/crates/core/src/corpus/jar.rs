use std::io::{Cursor, Write};

use zip::write::SimpleFileOptions;
use zip::{CompressionMethod, DateTime, ZipWriter};

use super::gav::Gav;

/// Writes a jar with a fixed timestamp on every entry, so identical input
/// yields identical bytes. Entries are written in the given order.
pub fn write_jar(entries: &[(String, Vec<u8>)]) -> std::io::Result<Vec<u8>> {
    let mut zip = ZipWriter::new(Cursor::new(Vec::new()));
    let options = SimpleFileOptions::default()
        .compression_method(CompressionMethod::Deflated)
        .last_modified_time(DateTime::default())
        .unix_permissions(0o644);
    for (path, bytes) in entries {
        zip.start_file(path.as_str(), options)
            .map_err(std::io::Error::other)?;
        zip.write_all(bytes)?;
    }
    Ok(zip.finish().map_err(std::io::Error::other)?.into_inner())
}

pub fn manifest_entry() -> (String, Vec<u8>) {
    (
        "META-INF/MANIFEST.MF".to_owned(),
        b"Manifest-Version: 1.0\r\nCreated-By: depusage\r\n\r\n".to_vec(),
    )
}

pub fn pom_properties_entry(gav: &Gav) -> (String, Vec<u8>) {
    (
        format!(
            "META-INF/maven/{}/{}/pom.properties",
            gav.group, gav.artifact
        ),
        format!(
            "groupId={}\nartifactId={}\nversion={}\n",
            gav.group, gav.artifact, gav.version
        )
        .into_bytes(),
    )
}
