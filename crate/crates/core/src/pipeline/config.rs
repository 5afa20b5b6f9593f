use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::corpus::LibrarySelector;

use super::PipelineError;

fn default_workers() -> usize {
    1
}

fn default_retries() -> u32 {
    2
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub repo_root: PathBuf,
    /// `group:artifact` for every version, `group:artifact:version` for one.
    pub libraries: Vec<LibrarySelector>,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default)]
    pub include_test_scope: bool,
    pub output_dir: PathBuf,
    /// Stop after this many client jobs complete, as if the process died.
    #[serde(skip)]
    pub interrupt_after: Option<usize>,
}

impl RunConfig {
    pub fn new(
        repo_root: impl Into<PathBuf>,
        libraries: Vec<LibrarySelector>,
        output_dir: impl Into<PathBuf>,
    ) -> Self {
        RunConfig {
            repo_root: repo_root.into(),
            libraries,
            workers: default_workers(),
            max_retries: default_retries(),
            include_test_scope: false,
            output_dir: output_dir.into(),
            interrupt_after: None,
        }
    }

    /// Parses TOML; relative paths are taken relative to `base`.
    pub fn parse(text: &str, base: &Path) -> Result<Self, PipelineError> {
        let mut config: RunConfig =
            toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        config.repo_root = base.join(&config.repo_root);
        config.output_dir = base.join(&config.output_dir);
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.libraries.is_empty() {
            return Err(PipelineError::Config("no libraries listed".into()));
        }
        if self.workers == 0 {
            return Err(PipelineError::Config("workers must be at least 1".into()));
        }
        if !self.repo_root.is_dir() {
            return Err(PipelineError::Config(format!(
                "repository root {} is not a directory",
                self.repo_root.display()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_validate() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::create_dir(dir.path().join("repo")).unwrap();
        let text = "repo_root = \"repo\"\noutput_dir = \"out\"\nlibraries = [\"org.slf4j:slf4j-api\", \"junit:junit:4.12\"]\nworkers = 4\n";
        let c = RunConfig::parse(text, dir.path()).unwrap();
        assert_eq!(c.workers, 4);
        assert_eq!(c.max_retries, 2);
        assert!(!c.include_test_scope);
        assert_eq!(c.libraries.len(), 2);
        assert_eq!(c.output_dir, dir.path().join("out"));

        let empty = "repo_root = \"repo\"\noutput_dir = \"out\"\nlibraries = []\n";
        assert!(matches!(
            RunConfig::parse(empty, dir.path()),
            Err(PipelineError::Config(_))
        ));
        let zero = "repo_root = \"repo\"\noutput_dir = \"o\"\nlibraries = [\"a:b\"]\nworkers = 0\n";
        assert!(RunConfig::parse(zero, dir.path()).is_err());
        let missing = "repo_root = \"nope\"\noutput_dir = \"o\"\nlibraries = [\"a:b\"]\n";
        assert!(RunConfig::parse(missing, dir.path()).is_err());
        assert!(RunConfig::parse("libraries = [\"a\"]", dir.path()).is_err());
    }
}
