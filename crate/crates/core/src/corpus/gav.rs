use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid coordinates {0:?}: expected group:artifact[:version]")]
pub struct InvalidCoordinates(pub String);

/// Version-agnostic `group:artifact` pair.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ga {
    pub group: String,
    pub artifact: String,
}

/// Full `group:artifact:version` coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gav {
    pub group: String,
    pub artifact: String,
    pub version: String,
}

impl Ga {
    pub fn new(group: impl Into<String>, artifact: impl Into<String>) -> Self {
        Ga {
            group: group.into(),
            artifact: artifact.into(),
        }
    }

    pub fn with_version(&self, version: impl Into<String>) -> Gav {
        Gav {
            group: self.group.clone(),
            artifact: self.artifact.clone(),
            version: version.into(),
        }
    }

    /// File-name-safe rendering: `group__artifact`.
    pub fn file_stem(&self) -> String {
        format!("{}__{}", self.group, self.artifact)
    }
}

impl Gav {
    pub fn new(
        group: impl Into<String>,
        artifact: impl Into<String>,
        version: impl Into<String>,
    ) -> Self {
        Gav {
            group: group.into(),
            artifact: artifact.into(),
            version: version.into(),
        }
    }

    pub fn ga(&self) -> Ga {
        Ga::new(self.group.clone(), self.artifact.clone())
    }

    pub fn same_ga(&self, ga: &Ga) -> bool {
        self.group == ga.group && self.artifact == ga.artifact
    }

    /// `group__artifact__version`, used for report file names.
    pub fn file_stem(&self) -> String {
        format!("{}__{}__{}", self.group, self.artifact, self.version)
    }
}

impl fmt::Display for Ga {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.group, self.artifact)
    }
}

impl fmt::Display for Gav {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.group, self.artifact, self.version)
    }
}

fn valid_part(s: &str) -> bool {
    !s.is_empty() && !s.contains([':', '/', '\\']) && !s.chars().any(char::is_whitespace)
}

impl FromStr for Ga {
    type Err = InvalidCoordinates;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split(':').collect::<Vec<_>>()[..] {
            [g, a] if valid_part(g) && valid_part(a) => Ok(Ga::new(g, a)),
            _ => Err(InvalidCoordinates(s.to_owned())),
        }
    }
}

impl FromStr for Gav {
    type Err = InvalidCoordinates;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.split(':').collect::<Vec<_>>()[..] {
            [g, a, v] if valid_part(g) && valid_part(a) && valid_part(v) => Ok(Gav::new(g, a, v)),
            _ => Err(InvalidCoordinates(s.to_owned())),
        }
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

string_serde!(Ga);
string_serde!(Gav);

/// Either a whole library (`g:a`) or one version of it (`g:a:v`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LibrarySelector {
    All(Ga),
    Version(Gav),
}

impl LibrarySelector {
    pub fn ga(&self) -> Ga {
        match self {
            LibrarySelector::All(ga) => ga.clone(),
            LibrarySelector::Version(gav) => gav.ga(),
        }
    }
}

impl FromStr for LibrarySelector {
    type Err = InvalidCoordinates;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.matches(':').count() {
            1 => s.parse().map(LibrarySelector::All),
            2 => s.parse().map(LibrarySelector::Version),
            _ => Err(InvalidCoordinates(s.to_owned())),
        }
    }
}

impl fmt::Display for LibrarySelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LibrarySelector::All(ga) => ga.fmt(f),
            LibrarySelector::Version(gav) => gav.fmt(f),
        }
    }
}

string_serde!(LibrarySelector);

/// Natural ordering of version strings: numeric runs compare as numbers,
/// other runs lexically, and a missing trailing part sorts first.
pub fn compare_versions(a: &str, b: &str) -> Ordering {
    let pa = version_parts(a);
    let pb = version_parts(b);
    for (x, y) in pa.iter().zip(&pb) {
        let ord = match (x, y) {
            (Part::Num(x), Part::Num(y)) => x.cmp(y),
            (Part::Num(_), Part::Text(_)) => Ordering::Greater,
            (Part::Text(_), Part::Num(_)) => Ordering::Less,
            (Part::Text(x), Part::Text(y)) => x.cmp(y),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    pa.len().cmp(&pb.len()).then_with(|| a.cmp(b))
}

#[derive(Debug, PartialEq, Eq)]
enum Part<'a> {
    Num(u128),
    Text(&'a str),
}

fn version_parts(v: &str) -> Vec<Part<'_>> {
    let mut parts = Vec::new();
    let bytes = v.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if !bytes[i].is_ascii_alphanumeric() {
            i += 1;
            continue;
        }
        let start = i;
        let digits = bytes[i].is_ascii_digit();
        while i < bytes.len()
            && bytes[i].is_ascii_alphanumeric()
            && bytes[i].is_ascii_digit() == digits
        {
            i += 1;
        }
        let run = &v[start..i];
        parts.push(match run.parse::<u128>() {
            Ok(n) if digits => Part::Num(n),
            _ => Part::Text(run),
        });
    }
    parts
}
