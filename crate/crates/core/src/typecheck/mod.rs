//! Algorithmic typing of processes, heaps and systems.
//!
//! Subsumption is folded into the elimination sites: sends and receives
//! head-normalize the subject's type (unfolding recursion and promoting
//! variables to their bounds) and the argument of a send is compared with
//! the expected payload by subtyping.

mod env;
mod heap;
mod process;
mod program;

use std::fmt;

use crate::surface::Diagnostic;
use crate::syntax::Span;
use crate::types::{BudgetExceeded, Weight, DEFAULT_BUDGET};

pub use env::{split_env, ProcEnv, TypeEnv};
pub use heap::{check_heap, check_system, HeapError};
pub use process::{check_process, check_process_with, infer_send_instantiation, Derivation, Step};
pub use program::{check_program, check_program_seq, param_env, ProcReport, ProgramReport};

/// How the finite-weight premise of a send treats a variable that was
/// bound by receiving a message whose payload is exactly that variable.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SendWeightPolicy {
    /// The sender of that message had to prove the instantiation finite,
    /// so the variable counts as weight 0.
    #[default]
    SenderWitnessed,
    /// Use the bound, as in the bare rule. Rejects the linear cell.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub budget: usize,
    pub send_weight: SendWeightPolicy,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { budget: DEFAULT_BUDGET, send_weight: SendWeightPolicy::default() }
    }
}

/// A failed premise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeError {
    /// Rule name, e.g. `T-Send`, or `budget` when a decision procedure gave up.
    pub rule: String,
    pub span: Span,
    pub message: String,
    pub expected: Option<String>,
    pub actual: Option<String>,
    pub weight: Option<Weight>,
}

impl TypeError {
    pub fn new(rule: &str, span: Span, message: impl Into<String>) -> Self {
        TypeError { rule: rule.to_string(), span, message: message.into(), expected: None, actual: None, weight: None }
    }

    pub fn budget(span: Span, e: BudgetExceeded) -> Self {
        TypeError::new("budget", span, e.to_string())
    }

    pub fn is_budget(&self) -> bool {
        self.rule == "budget"
    }

    /// Everything after the rule name.
    pub fn detail(&self) -> String {
        let mut out = self.message.clone();
        if let Some(e) = &self.expected {
            out.push_str(&format!("; expected {e}"));
        }
        if let Some(a) = &self.actual {
            out.push_str(&format!("; found {a}"));
        }
        if let Some(w) = &self.weight {
            out.push_str(&format!("; weight {w}"));
        }
        out
    }

    pub fn to_diagnostic(&self) -> Diagnostic {
        Diagnostic::error(&self.rule, format!("{}: {}", self.rule, self.detail()), self.span)
    }

    pub fn to_warning(&self) -> Diagnostic {
        Diagnostic::warning(&self.rule, format!("{}: {}", self.rule, self.detail()), self.span)
    }

    fn expected(mut self, t: impl fmt::Display) -> Self {
        self.expected = Some(t.to_string());
        self
    }

    fn actual(mut self, t: impl fmt::Display) -> Self {
        self.actual = Some(t.to_string());
        self
    }
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail())
    }
}

impl std::error::Error for TypeError {}
