//! Reading and writing presentations: the `.ualg` text format, canonical
//! JSON, and the bundled corpus.

pub mod corpus;
pub mod dsl;
pub mod json;
pub mod text;

use std::collections::BTreeSet;
use std::fmt;

use crate::algebra::Presentation;
use crate::loops::{LoopNames, LoopPresentation};

pub use text::{format_lead, format_monomial, format_poly, parse_monomial, parse_poly, Alphabet, TextError};

/// A diagnostic anchored at a 1-based line and column.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Non-fatal findings from parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lint {
    /// A tabulated `Sq^k g` with no `sq` line, taken to be zero.
    DefaultedEntry { generator: String, k: u32 },
}

impl fmt::Display for Lint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lint::DefaultedEntry { generator, k } => write!(f, "Sq^{k} {generator} not given, defaulting to 0"),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Metadata {
    pub names: LoopNames,
    pub assumptions: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Body {
    Plain(Presentation),
    Loop(LoopPresentation),
}

/// A parsed file: a presentation, possibly tagged as a loop presentation,
/// with its metadata and lints.
#[derive(Debug, Clone, PartialEq)]
pub struct PresentationFile {
    pub body: Body,
    pub metadata: Metadata,
    pub lints: Vec<Lint>,
}

impl PresentationFile {
    pub fn plain(p: Presentation) -> Self {
        Self { body: Body::Plain(p), metadata: Metadata::default(), lints: Vec::new() }
    }

    pub fn derived(l: LoopPresentation) -> Self {
        Self { body: Body::Loop(l), metadata: Metadata::default(), lints: Vec::new() }
    }

    pub fn presentation(&self) -> &Presentation {
        match &self.body {
            Body::Plain(p) => p,
            Body::Loop(l) => l.presentation(),
        }
    }

    pub fn loop_presentation(&self) -> Option<&LoopPresentation> {
        match &self.body {
            Body::Plain(_) => None,
            Body::Loop(l) => Some(l),
        }
    }

    pub fn into_presentation(self) -> Presentation {
        match self.body {
            Body::Plain(p) => p,
            Body::Loop(l) => l.presentation().clone(),
        }
    }
}

/// Parses `.ualg` text into a validated presentation, ignoring metadata.
pub fn parse_presentation(text: &str) -> Result<Presentation, ParseError> {
    dsl::parse(text).map(PresentationFile::into_presentation)
}

/// Parses by file name: `.json` as canonical JSON, anything else as `.ualg`.
pub fn parse_file(path: &str, text: &str) -> Result<PresentationFile, ParseError> {
    if path.ends_with(".json") {
        json::parse(text)
    } else {
        dsl::parse(text)
    }
}
