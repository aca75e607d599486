use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use crate::syntax::{free_names, free_proc_vars, Name, ProcVar, Process, Span};
use crate::types::{BoundEnv, Type};

use super::TypeError;

/// Linear environment `Γ`: every entry has to be consumed exactly once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeEnv {
    entries: BTreeMap<Name, Type>,
}

impl TypeEnv {
    pub fn new() -> Self {
        TypeEnv::default()
    }

    pub fn insert(&mut self, u: Name, t: Type) -> Option<Type> {
        self.entries.insert(u, t)
    }

    pub fn with(mut self, u: Name, t: Type) -> Self {
        self.entries.insert(u, t);
        self
    }

    pub fn remove(&mut self, u: &Name) -> Option<Type> {
        self.entries.remove(u)
    }

    pub fn get(&self, u: &Name) -> Option<&Type> {
        self.entries.get(u)
    }

    pub fn contains(&self, u: &Name) -> bool {
        self.entries.contains_key(u)
    }

    pub fn names(&self) -> BTreeSet<Name> {
        self.entries.keys().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Type)> {
        self.entries.iter()
    }

    /// `Γ0, Γ`; the domains are expected to be disjoint.
    pub fn union(&self, other: &TypeEnv) -> TypeEnv {
        let mut out = self.clone();
        out.entries.extend(other.entries.iter().map(|(k, v)| (k.clone(), v.clone())));
        out
    }
}

impl FromIterator<(Name, Type)> for TypeEnv {
    fn from_iter<I: IntoIterator<Item = (Name, Type)>>(iter: I) -> Self {
        TypeEnv { entries: iter.into_iter().collect() }
    }
}

impl fmt::Display for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(u, t)| format!("{u} : {t}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `Σ`: the environments recorded at each enclosing `rec`.
#[derive(Clone, Debug, Default)]
pub struct ProcEnv {
    entries: HashMap<ProcVar, (BoundEnv, TypeEnv)>,
}

impl ProcEnv {
    pub fn new() -> Self {
        ProcEnv::default()
    }

    pub fn extended(&self, x: ProcVar, delta: BoundEnv, gamma: TypeEnv) -> ProcEnv {
        let mut out = self.clone();
        out.entries.insert(x, (delta, gamma));
        out
    }

    pub fn get(&self, x: &ProcVar) -> Option<&(BoundEnv, TypeEnv)> {
        self.entries.get(x)
    }
}

/// Partition `Γ` between the two sides of a parallel composition.
pub fn split_env(gamma: &TypeEnv, p: &Process, q: &Process) -> Result<(TypeEnv, TypeEnv), TypeError> {
    split_env_in(&ProcEnv::new(), gamma, p, q)
}

/// Names a side needs: its free names plus, for every process variable it
/// mentions, the names recorded for that variable in `Σ`.
fn demanded(sigma: &ProcEnv, p: &Process) -> BTreeSet<Name> {
    let mut out = free_names(p);
    for x in free_proc_vars(p) {
        if let Some((_, g)) = sigma.get(&x) {
            out.extend(g.names());
        }
    }
    out
}

pub(crate) fn split_env_in(
    sigma: &ProcEnv,
    gamma: &TypeEnv,
    p: &Process,
    q: &Process,
) -> Result<(TypeEnv, TypeEnv), TypeError> {
    let (fp, fq) = (demanded(sigma, p), demanded(sigma, q));
    let span = p.span.to(q.span);
    if let Some(u) = fp.intersection(&fq).next() {
        return Err(TypeError::new("T-Par", span, format!("name used by both components: `{u}`")));
    }
    let (mut left, mut right) = (TypeEnv::new(), TypeEnv::new());
    for (u, t) in gamma.iter() {
        if fp.contains(u) {
            left.insert(u.clone(), t.clone());
        } else if fq.contains(u) {
            right.insert(u.clone(), t.clone());
        } else {
            return Err(TypeError::new("T-Par", span, format!("unused linear name `{u}`")));
        }
    }
    Ok((left, right))
}

pub(crate) fn missing(rule: &str, u: &Name, span: Span) -> TypeError {
    TypeError::new(rule, span, format!("`{u}` is not in the type environment (already used or never owned)"))
}
