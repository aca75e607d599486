//! Concrete syntax: lexer, parser and printer for `.psg` programs.

mod diag;
mod lexer;
mod parser;
mod print;

pub use diag::{Diagnostic, DiagnosticJson, Severity, SourceMap};
pub use parser::{parse_program, ProcDef, Program, TypeDef};
pub use print::{print_process, print_type};
