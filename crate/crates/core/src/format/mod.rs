//! The `.dgc` model format: line-based sections of `key = value` entries.
//!
//! ```text
//! [dga]
//! name = A
//! kind = laurent_group_ring
//! generators = t
//!
//! [module]
//! name = F
//! over = A
//! kind = regular
//!
//! [complex]
//! name = S1
//! module = F
//! generators = M:1@1, m:0@0
//! cocycle = M,m:t - 1
//! ```

mod build;
mod export;
mod expr;

use std::fmt;

pub use build::{build, parse_algebra_element, parse_chain, BuildOptions, Object, Workspace, DEFAULT_TRUNCATION};
pub use export::export;
pub use expr::{parse_expr, parse_rational, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormatErrorKind {
    Syntax,
    UnresolvedReference,
    DuplicateName,
    /// The file parses but describes an invalid object.
    Semantic,
}

impl fmt::Display for FormatErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FormatErrorKind::Syntax => "syntax error",
            FormatErrorKind::UnresolvedReference => "unresolved reference",
            FormatErrorKind::DuplicateName => "duplicate name",
            FormatErrorKind::Semantic => "invalid model",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}: {message}")]
pub struct FormatError {
    pub kind: FormatErrorKind,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl FormatError {
    pub fn new(kind: FormatErrorKind, line: usize, column: usize, message: impl Into<String>) -> Self {
        FormatError {
            kind,
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectionKind {
    Dga,
    LocalSystem,
    Module,
    Complex,
    Map,
    Homotopy,
}

impl SectionKind {
    pub fn tag(self) -> &'static str {
        match self {
            SectionKind::Dga => "dga",
            SectionKind::LocalSystem => "local_system",
            SectionKind::Module => "module",
            SectionKind::Complex => "complex",
            SectionKind::Map => "map",
            SectionKind::Homotopy => "homotopy",
        }
    }

    fn from_tag(s: &str) -> Option<Self> {
        Some(match s {
            "dga" => SectionKind::Dga,
            "local_system" => SectionKind::LocalSystem,
            "module" => SectionKind::Module,
            "complex" => SectionKind::Complex,
            "map" => SectionKind::Map,
            "homotopy" => SectionKind::Homotopy,
            _ => return None,
        })
    }
}

/// One `key = value` line. `line` and `column` locate the first character of the value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    pub kind: SectionKind,
    pub line: usize,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn new(kind: SectionKind) -> Self {
        Section {
            kind,
            line: 0,
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, key: &str, value: impl Into<String>) {
        self.entries.push(Entry {
            key: key.to_string(),
            value: value.into(),
            line: 0,
            column: 0,
        });
    }

    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.iter().find(|e| e.key == key)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelFile {
    pub sections: Vec<Section>,
}

impl ModelFile {
    /// Parses the section/entry structure; values are interpreted by [`build`].
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("");
            let trimmed = content.trim();
            if trimmed.is_empty() {
                continue;
            }
            let indent = content.len() - content.trim_start().len();
            if let Some(rest) = trimmed.strip_prefix('[') {
                let Some(tag) = rest.strip_suffix(']') else {
                    return Err(FormatError::new(FormatErrorKind::Syntax, line, indent + 1, "unterminated section header"));
                };
                let kind = SectionKind::from_tag(tag.trim()).ok_or_else(|| {
                    FormatError::new(FormatErrorKind::Syntax, line, indent + 2, format!("unknown section `{}`", tag.trim()))
                })?;
                sections.push(Section {
                    kind,
                    line,
                    entries: Vec::new(),
                });
                continue;
            }
            let Some(eq) = content.find('=') else {
                return Err(FormatError::new(FormatErrorKind::Syntax, line, indent + 1, "expected `key = value`"));
            };
            let key = content[..eq].trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(FormatError::new(FormatErrorKind::Syntax, line, indent + 1, format!("bad key `{key}`")));
            }
            let after = &content[eq + 1..];
            let value = after.trim();
            let column = eq + 2 + (after.len() - after.trim_start().len());
            let Some(section) = sections.last_mut() else {
                return Err(FormatError::new(FormatErrorKind::Syntax, line, indent + 1, "entry before any section"));
            };
            if section.get(key).is_some() {
                return Err(FormatError::new(FormatErrorKind::DuplicateName, line, indent + 1, format!("key `{key}` repeated")));
            }
            section.entries.push(Entry {
                key: key.to_string(),
                value: value.to_string(),
                line,
                column,
            });
        }
        Ok(ModelFile { sections })
    }

    /// Canonical text: one blank line between sections, `key = value` entries.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                out.push('\n');
            }
            out.push_str(&format!("[{}]\n", s.kind.tag()));
            for e in &s.entries {
                out.push_str(&format!("{} = {}\n", e.key, e.value));
            }
        }
        out
    }
}

/// Parses and builds in one step.
pub fn load(text: &str, options: &BuildOptions) -> Result<Workspace, FormatError> {
    build(&ModelFile::parse(text)?, options)
}
