use std::fmt;

use serde::Serialize;

use crate::syntax::Span;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
    Note,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Note => "note",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub span: Span,
}

impl Diagnostic {
    pub fn error(code: &str, message: impl Into<String>, span: Span) -> Self {
        Diagnostic { severity: Severity::Error, code: code.to_string(), message: message.into(), span }
    }

    pub fn warning(code: &str, message: impl Into<String>, span: Span) -> Self {
        Diagnostic { severity: Severity::Warning, code: code.to_string(), message: message.into(), span }
    }

    /// `SEVERITY CODE file:line:col message`
    pub fn render(&self, file: &str, map: &SourceMap) -> String {
        let (line, col) = map.line_col(self.span.start);
        format!("{} {} {}:{}:{} {}", self.severity, self.code, file, line, col, self.message)
    }

    pub fn to_json(&self, file: &str, map: &SourceMap) -> DiagnosticJson {
        let (line, col) = map.line_col(self.span.start);
        let (end_line, end_col) = map.line_col(self.span.end);
        DiagnosticJson {
            severity: self.severity,
            code: self.code.clone(),
            message: self.message.clone(),
            file: file.to_string(),
            line,
            col,
            end_line,
            end_col,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiagnosticJson {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub file: String,
    pub line: usize,
    pub col: usize,
    pub end_line: usize,
    pub end_col: usize,
}

/// Byte offset to 1-based line and column.
#[derive(Clone, Debug)]
pub struct SourceMap {
    line_starts: Vec<usize>,
    len: usize,
}

impl SourceMap {
    pub fn new(src: &str) -> Self {
        let mut line_starts = vec![0];
        line_starts.extend(src.match_indices('\n').map(|(i, _)| i + 1));
        SourceMap { line_starts, len: src.len() }
    }

    pub fn line_col(&self, offset: usize) -> (usize, usize) {
        let offset = offset.min(self.len);
        let line = self.line_starts.partition_point(|&s| s <= offset) - 1;
        (line + 1, offset - self.line_starts[line] + 1)
    }
}
