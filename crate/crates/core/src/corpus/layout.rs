use std::path::{Component, Path, PathBuf};

use super::gav::{compare_versions, Ga, Gav};

/// Standard repository layout:
/// `<root>/<group dots as slashes>/<artifact>/<version>/<artifact>-<version>.{jar,pom}`.
/// Existence is not checked.
pub fn locate(gav: &Gav, repo_root: &Path) -> (PathBuf, PathBuf) {
    let dir = artifact_dir(gav, repo_root);
    let base = format!("{}-{}", gav.artifact, gav.version);
    (
        dir.join(format!("{base}.jar")),
        dir.join(format!("{base}.pom")),
    )
}

pub fn artifact_dir(gav: &Gav, repo_root: &Path) -> PathBuf {
    let mut dir = repo_root.to_path_buf();
    dir.extend(gav.group.split('.'));
    dir.push(&gav.artifact);
    dir.push(&gav.version);
    dir
}

/// Directory holding every version of `group:artifact`.
pub fn versions_dir(group: &str, artifact: &str, repo_root: &Path) -> PathBuf {
    let mut dir = repo_root.to_path_buf();
    dir.extend(group.split('.'));
    dir.push(artifact);
    dir
}

/// Versions of `ga` whose jar exists under `repo_root`, lowest first.
pub fn available_versions(ga: &Ga, repo_root: &Path) -> Vec<Gav> {
    let Ok(entries) = std::fs::read_dir(versions_dir(&ga.group, &ga.artifact, repo_root)) else {
        return Vec::new();
    };
    let mut out: Vec<Gav> = entries
        .flatten()
        .filter_map(|e| e.file_name().to_str().map(|v| ga.with_version(v)))
        .filter(|g| locate(g, repo_root).0.is_file())
        .collect();
    out.sort_by(|a, b| compare_versions(&a.version, &b.version));
    out
}

/// Inverse of [`locate`] for a `.jar` or `.pom` path under `repo_root`.
pub fn coordinates_of(path: &Path, repo_root: &Path) -> Option<Gav> {
    let rel = path.strip_prefix(repo_root).ok()?;
    let parts: Vec<&str> = rel
        .components()
        .map(|c| match c {
            Component::Normal(s) => s.to_str(),
            _ => None,
        })
        .collect::<Option<_>>()?;
    let [group @ .., artifact, version, file] = &parts[..] else {
        return None;
    };
    if group.is_empty() {
        return None;
    }
    let stem = file
        .strip_suffix(".jar")
        .or_else(|| file.strip_suffix(".pom"))?;
    if stem != format!("{artifact}-{version}") {
        return None;
    }
    Some(Gav::new(group.join("."), *artifact, *version))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_examples() {
        let root = Path::new("/repo");
        let (jar, pom) = locate(&"org.slf4j:slf4j-api:1.7.21".parse().unwrap(), root);
        assert_eq!(
            jar,
            Path::new("/repo/org/slf4j/slf4j-api/1.7.21/slf4j-api-1.7.21.jar")
        );
        assert_eq!(
            pom,
            Path::new("/repo/org/slf4j/slf4j-api/1.7.21/slf4j-api-1.7.21.pom")
        );
        let (jar, _) = locate(&"javax.inject:javax.inject:1".parse().unwrap(), root);
        assert_eq!(
            jar,
            Path::new("/repo/javax/inject/javax.inject/1/javax.inject-1.jar")
        );
        let (jar, _) = locate(&"junit:junit:4.12".parse().unwrap(), root);
        assert_eq!(jar, Path::new("/repo/junit/junit/4.12/junit-4.12.jar"));
    }

    #[test]
    fn coordinates_round_trip() {
        let root = Path::new("/repo");
        for text in [
            "org.slf4j:slf4j-api:1.7.21",
            "junit:junit:4.12",
            "a.b.c:d:1-SNAPSHOT",
        ] {
            let gav: Gav = text.parse().unwrap();
            let (jar, pom) = locate(&gav, root);
            assert_eq!(coordinates_of(&jar, root), Some(gav.clone()));
            assert_eq!(coordinates_of(&pom, root), Some(gav));
        }
        assert_eq!(coordinates_of(Path::new("/repo/x/1/x-2.jar"), root), None);
        assert_eq!(
            coordinates_of(Path::new("/elsewhere/a/b/1/b-1.jar"), root),
            None
        );
    }
}
