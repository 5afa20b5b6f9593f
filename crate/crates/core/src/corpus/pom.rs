use std::fmt::{self, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::gav::{Ga, Gav};

#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Scope {
    #[default]
    Compile,
    Provided,
    Runtime,
    Test,
    System,
    Import,
}

impl Scope {
    pub fn as_str(self) -> &'static str {
        match self {
            Scope::Compile => "compile",
            Scope::Provided => "provided",
            Scope::Runtime => "runtime",
            Scope::Test => "test",
            Scope::System => "system",
            Scope::Import => "import",
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "compile" => Scope::Compile,
            "provided" => Scope::Provided,
            "runtime" => Scope::Runtime,
            "test" => Scope::Test,
            "system" => Scope::System,
            "import" => Scope::Import,
            other => return Err(format!("unknown scope {other:?}")),
        })
    }
}

/// One `<dependency>` of a manifest. Text is kept verbatim, including
/// `${...}` placeholders and version ranges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeclaredDependency {
    pub ga: Ga,
    /// Absent when managed elsewhere (parent or dependencyManagement).
    pub version: Option<String>,
    pub scope: Scope,
    pub optional: bool,
}

impl DeclaredDependency {
    pub fn new(gav: &Gav, scope: Scope) -> Self {
        DeclaredDependency {
            ga: gav.ga(),
            version: Some(gav.version.clone()),
            scope,
            optional: false,
        }
    }

    /// True when the version is missing, a range, or contains a property
    /// placeholder, or the group/artifact contain placeholders.
    pub fn is_unresolved(&self) -> bool {
        let placeholder = |s: &str| s.contains("${");
        placeholder(&self.ga.group)
            || placeholder(&self.ga.artifact)
            || match &self.version {
                None => true,
                Some(v) => {
                    placeholder(v) || v.starts_with('[') || v.starts_with('(') || v.is_empty()
                }
            }
    }

    pub fn resolved_gav(&self) -> Option<Gav> {
        if self.is_unresolved() {
            return None;
        }
        self.version
            .as_ref()
            .map(|v| self.ga.with_version(v.clone()))
    }

    /// `group:artifact:version`, with `?` for a missing version.
    pub fn coordinates_text(&self) -> String {
        format!("{}:{}", self.ga, self.version.as_deref().unwrap_or("?"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed pom at {line}:{column}: {message}")]
pub struct MalformedXml {
    pub line: u32,
    pub column: u32,
    pub message: String,
}

/// Extracts `project/dependencies/dependency` elements; everything else,
/// including `dependencyManagement`, is ignored.
pub fn parse_pom(bytes: &[u8]) -> Result<Vec<DeclaredDependency>, MalformedXml> {
    let bytes = bytes.strip_prefix(b"\xEF\xBB\xBF").unwrap_or(bytes);
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let prefix = &bytes[..e.valid_up_to()];
        let line = prefix.iter().filter(|&&b| b == b'\n').count() as u32 + 1;
        let column = (prefix.len()
            - prefix
                .iter()
                .rposition(|&b| b == b'\n')
                .map_or(0, |p| p + 1)) as u32
            + 1;
        MalformedXml {
            line,
            column,
            message: "invalid UTF-8".into(),
        }
    })?;
    let doc = roxmltree::Document::parse(text).map_err(|e| {
        let pos = e.pos();
        MalformedXml {
            line: pos.row,
            column: pos.col,
            message: e.to_string(),
        }
    })?;
    let root = doc.root_element();
    if root.tag_name().name() != "project" {
        return Err(error_at(&doc, root, "root element is not <project>"));
    }
    let mut out = Vec::new();
    for deps in root
        .children()
        .filter(|n| n.has_tag_name_local("dependencies"))
    {
        for dep in deps
            .children()
            .filter(|n| n.has_tag_name_local("dependency"))
        {
            out.push(dependency(&doc, dep)?);
        }
    }
    Ok(out)
}

trait LocalName {
    fn has_tag_name_local(&self, name: &str) -> bool;
}

impl LocalName for roxmltree::Node<'_, '_> {
    fn has_tag_name_local(&self, name: &str) -> bool {
        self.is_element() && self.tag_name().name() == name
    }
}

fn error_at(
    doc: &roxmltree::Document<'_>,
    node: roxmltree::Node<'_, '_>,
    message: &str,
) -> MalformedXml {
    let pos = doc.text_pos_at(node.range().start);
    MalformedXml {
        line: pos.row,
        column: pos.col,
        message: message.into(),
    }
}

fn dependency(
    doc: &roxmltree::Document<'_>,
    dep: roxmltree::Node<'_, '_>,
) -> Result<DeclaredDependency, MalformedXml> {
    let child = |name: &str| {
        dep.children()
            .find(|n| n.has_tag_name_local(name))
            .map(|n| (n, n.text().unwrap_or("").trim().to_owned()))
    };
    let group = child("groupId")
        .ok_or_else(|| error_at(doc, dep, "dependency without <groupId>"))?
        .1;
    let artifact = child("artifactId")
        .ok_or_else(|| error_at(doc, dep, "dependency without <artifactId>"))?
        .1;
    if group.is_empty() || artifact.is_empty() {
        return Err(error_at(doc, dep, "empty <groupId> or <artifactId>"));
    }
    let version = child("version").map(|(_, v)| v);
    let scope = match child("scope") {
        None => Scope::default(),
        Some((_, s)) if s.is_empty() => Scope::default(),
        Some((node, s)) => s.parse().map_err(|m: String| error_at(doc, node, &m))?,
    };
    let optional = child("optional").is_some_and(|(_, v)| v.eq_ignore_ascii_case("true"));
    Ok(DeclaredDependency {
        ga: Ga::new(group, artifact),
        version,
        scope,
        optional,
    })
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

/// Writes a minimal manifest for `project` declaring `deps`. Scope and
/// optional are always written so that [`parse_pom`] recovers them exactly.
pub fn write_pom(project: &Gav, deps: &[DeclaredDependency]) -> String {
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    out.push_str("<project xmlns=\"http://maven.apache.org/POM/4.0.0\">\n");
    out.push_str("  <modelVersion>4.0.0</modelVersion>\n");
    let _ = writeln!(out, "  <groupId>{}</groupId>", escape(&project.group));
    let _ = writeln!(
        out,
        "  <artifactId>{}</artifactId>",
        escape(&project.artifact)
    );
    let _ = writeln!(out, "  <version>{}</version>", escape(&project.version));
    out.push_str("  <packaging>jar</packaging>\n");
    out.push_str("  <dependencies>\n");
    for d in deps {
        out.push_str("    <dependency>\n");
        let _ = writeln!(out, "      <groupId>{}</groupId>", escape(&d.ga.group));
        let _ = writeln!(
            out,
            "      <artifactId>{}</artifactId>",
            escape(&d.ga.artifact)
        );
        if let Some(v) = &d.version {
            let _ = writeln!(out, "      <version>{}</version>", escape(v));
        }
        let _ = writeln!(out, "      <scope>{}</scope>", d.scope);
        let _ = writeln!(out, "      <optional>{}</optional>", d.optional);
        out.push_str("    </dependency>\n");
    }
    out.push_str("  </dependencies>\n");
    out.push_str("</project>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const FLINK_EXCERPT: &str = r#"<project xmlns="http://maven.apache.org/POM/4.0.0">
  <artifactId>flink-runtime</artifactId>
  <dependencies>
    <dependency>
        <groupId>com.google.code.findbugs</groupId>
        <artifactId>jsr305</artifactId>
        <version>1.3.9</version>
        <scope>compile</scope>
    </dependency>
  </dependencies>
</project>"#;

    #[test]
    fn flink_excerpt() {
        let deps = parse_pom(FLINK_EXCERPT.as_bytes()).unwrap();
        assert_eq!(deps.len(), 1);
        assert_eq!(
            deps[0].coordinates_text(),
            "com.google.code.findbugs:jsr305:1.3.9"
        );
        assert_eq!(deps[0].scope, Scope::Compile);
        assert!(!deps[0].optional);
        assert!(!deps[0].is_unresolved());
    }

    #[test]
    fn empty_dependencies() {
        let deps = parse_pom(b"<project><dependencies/></project>").unwrap();
        assert!(deps.is_empty());
    }

    #[test]
    fn default_scope_is_compile() {
        let pom = b"<project><dependencies><dependency><groupId>g</groupId><artifactId>a</artifactId><version>1</version></dependency></dependencies></project>";
        assert_eq!(parse_pom(pom).unwrap()[0].scope, Scope::Compile);
    }

    #[test]
    fn management_section_ignored_and_placeholders_kept() {
        let pom = br#"<project>
  <dependencyManagement><dependencies><dependency>
    <groupId>x</groupId><artifactId>y</artifactId><version>9</version>
  </dependency></dependencies></dependencyManagement>
  <dependencies>
    <dependency><groupId>g</groupId><artifactId>a</artifactId><version>${a.version}</version><scope>test</scope><optional>true</optional></dependency>
    <dependency><groupId>g</groupId><artifactId>b</artifactId></dependency>
  </dependencies>
</project>"#;
        let deps = parse_pom(pom).unwrap();
        assert_eq!(deps.len(), 2);
        assert_eq!(deps[0].version.as_deref(), Some("${a.version}"));
        assert!(deps[0].is_unresolved());
        assert_eq!(deps[0].scope, Scope::Test);
        assert!(deps[0].optional);
        assert_eq!(deps[1].version, None);
        assert!(deps[1].resolved_gav().is_none());
    }

    #[test]
    fn malformed_reports_position() {
        let err = parse_pom(b"<project>\n  <dependencies>\n</project>").unwrap_err();
        assert_eq!(err.line, 3);
        let err = parse_pom(b"<pom/>").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
        let err = parse_pom(b"<project><dependencies><dependency><groupId>g</groupId><artifactId>a</artifactId><scope>bogus</scope></dependency></dependencies></project>").unwrap_err();
        assert!(err.message.contains("bogus"));
    }
}
