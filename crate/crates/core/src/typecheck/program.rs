use crate::par;
use crate::surface::{ProcDef, Program};
use crate::syntax::{Name, Span};
use crate::types::BoundEnv;

use super::{check_process_with, CheckOptions, Derivation, ProcEnv, TypeEnv, TypeError};

#[derive(Clone, Debug)]
pub struct ProcReport {
    pub name: String,
    pub span: Span,
    pub result: Result<Derivation, TypeError>,
}

#[derive(Clone, Debug)]
pub struct ProgramReport {
    pub procs: Vec<ProcReport>,
}

impl ProgramReport {
    pub fn is_ok(&self) -> bool {
        self.procs.iter().all(|p| p.result.is_ok())
    }

    pub fn errors(&self) -> impl Iterator<Item = (&ProcReport, &TypeError)> {
        self.procs.iter().filter_map(|p| p.result.as_ref().err().map(|e| (p, e)))
    }

    pub fn warnings(&self) -> impl Iterator<Item = (&ProcReport, &TypeError)> {
        self.procs.iter().filter_map(|p| p.result.as_ref().ok().map(|d| (p, d))).flat_map(|(p, d)| d.warnings.iter().map(move |w| (p, w)))
    }
}

/// The environment a declaration is checked under: one entry per parameter.
pub fn param_env(def: &ProcDef) -> TypeEnv {
    def.params.iter().map(|(x, t)| (Name::Var(x.clone()), t.clone())).collect()
}

/// Check every declaration. Calls were inlined by the parser, so the
/// declarations are independent of each other.
pub fn check_program(program: &Program, opts: &CheckOptions) -> ProgramReport {
    let procs = par::map(&program.procs, |def| check_def(def, opts));
    ProgramReport { procs }
}

pub fn check_program_seq(program: &Program, opts: &CheckOptions) -> ProgramReport {
    ProgramReport { procs: par::map_seq(&program.procs, |def| check_def(def, opts)) }
}

fn check_def(def: &ProcDef, opts: &CheckOptions) -> ProcReport {
    let result = check_process_with(opts, &ProcEnv::new(), &BoundEnv::new(), &param_env(def), &def.body);
    ProcReport { name: def.name.clone(), span: def.span, result }
}
