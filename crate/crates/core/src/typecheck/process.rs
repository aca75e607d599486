use std::collections::BTreeSet;

use crate::syntax::{free_names, Name, Process, ProcessKind, Span};
use crate::types::{
    dual, head_normal, type_equal, weight_with, BoundEntry, BoundEnv, Branch, BudgetExceeded, Polarity,
    Subtyping, TyVar, Type, Weight,
};

use super::env::missing;
use super::{CheckOptions, ProcEnv, SendWeightPolicy, TypeEnv, TypeError};

/// One rule application. Leaves list the names they consume.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: &'static str,
    pub span: Span,
    pub consumed: Vec<Name>,
}

/// Trace of an accepted derivation, plus warnings about dead receive
/// branches.
#[derive(Clone, Debug, Default)]
pub struct Derivation {
    pub steps: Vec<Step>,
    pub warnings: Vec<TypeError>,
}

pub fn check_process(sigma: &ProcEnv, delta: &BoundEnv, gamma: &TypeEnv, p: &Process) -> Result<Derivation, TypeError> {
    check_process_with(&CheckOptions::default(), sigma, delta, gamma, p)
}

pub fn check_process_with(
    opts: &CheckOptions,
    sigma: &ProcEnv,
    delta: &BoundEnv,
    gamma: &TypeEnv,
    p: &Process,
) -> Result<Derivation, TypeError> {
    let mut c = Checker { opts, sub: Subtyping::new(opts.budget), out: Derivation::default() };
    c.check(sigma, delta, gamma.clone(), p)?;
    Ok(c.out)
}

/// Choose the instantiation of a send's branch variable when none is
/// written: the bound if the variable is unused, the argument's type if the
/// payload is exactly the variable, and otherwise give up.
pub fn infer_send_instantiation(_delta: &BoundEnv, arg: Option<&Type>, branch: &Branch) -> Result<Type, TypeError> {
    if !branch.binder_used() {
        return Ok(branch.bound.clone());
    }
    match (&branch.payload, arg) {
        (Some(Type::Bound(0)), Some(t)) => Ok(t.clone()),
        _ => Err(TypeError::new(
            "T-Send",
            Span::default(),
            format!("instantiation annotation required for the variable of `{}`", branch.tag),
        )),
    }
}

struct Checker<'a> {
    opts: &'a CheckOptions,
    sub: Subtyping,
    out: Derivation,
}

impl Checker<'_> {
    fn step(&mut self, rule: &'static str, span: Span, consumed: Vec<Name>) {
        self.out.steps.push(Step { rule, span, consumed });
    }

    fn subtype(&mut self, delta: &BoundEnv, t: &Type, s: &Type, span: Span) -> Result<bool, TypeError> {
        self.sub.check(delta, t, s).map_err(|e| TypeError::budget(span, e))
    }

    fn weight(&self, delta: &BoundEnv, t: &Type) -> Result<Weight, BudgetExceeded> {
        match self.opts.send_weight {
            SendWeightPolicy::SenderWitnessed => weight_with(delta, t, self.opts.budget),
            SendWeightPolicy::Literal => {
                let mut plain = BoundEnv::new();
                for e in delta.entries() {
                    plain.push(e.var.clone(), e.bound.clone());
                }
                weight_with(&plain, t, self.opts.budget)
            }
        }
    }

    fn head(&self, rule: &str, delta: &BoundEnv, t: &Type, span: Span) -> Result<Type, TypeError> {
        head_normal(delta, t).map(|h| h.head).map_err(|e| TypeError::new(rule, span, e.to_string()))
    }

    fn check(&mut self, sigma: &ProcEnv, delta: &BoundEnv, mut gamma: TypeEnv, p: &Process) -> Result<(), TypeError> {
        let span = p.span;
        match &p.kind {
            ProcessKind::Idle => {
                if !gamma.is_empty() {
                    return Err(TypeError::new("T-Idle", span, format!("unused linear name(s) in {gamma}")));
                }
                self.step("T-Idle", span, Vec::new());
                Ok(())
            }
            ProcessKind::Close(u) => {
                let t = gamma.remove(u).ok_or_else(|| missing("T-Close", u, span))?;
                if !gamma.is_empty() {
                    return Err(TypeError::new("T-Close", span, format!("unused linear name(s) in {gamma}")));
                }
                if !self.subtype(delta, &t, &Type::End, span)? {
                    return Err(TypeError::new("T-Close", span, format!("endpoint not at end: `{u}`"))
                        .expected("end")
                        .actual(&t));
                }
                self.step("T-Close", span, vec![u.clone()]);
                Ok(())
            }
            ProcessKind::Open { left, right, annotation, body } => {
                let Some(t) = annotation else {
                    return Err(TypeError::new(
                        "T-Open",
                        span,
                        format!("annotation required: write `open({left} : T, {right})`"),
                    ));
                };
                let d = dual(t).map_err(|e| TypeError::new("T-Open", span, e.to_string()))?;
                gamma.insert(Name::Loc(left.clone()), t.clone());
                gamma.insert(Name::Loc(right.clone()), d);
                self.step("T-Open", span, Vec::new());
                self.check(sigma, delta, gamma, body)
            }
            ProcessKind::Send { subject, tag, instantiation, argument, body } => {
                let t = gamma.remove(subject).ok_or_else(|| missing("T-Send", subject, span))?;
                let head = self.head("T-Send", delta, &t, span)?;
                let Type::Choice(Polarity::Internal, branches) = &head else {
                    return Err(TypeError::new("T-Send", span, format!("`{subject}` does not permit output"))
                        .expected(format!("an internal choice offering `{tag}`"))
                        .actual(&t));
                };
                let Some(b) = branches.iter().find(|b| &b.tag == tag) else {
                    return Err(TypeError::new("T-Send", span, format!("tag `{tag}` not offered by `{subject}`"))
                        .actual(&t));
                };
                if b.payload.is_some() != argument.is_some() {
                    return Err(TypeError::new("T-Send", span, format!("wrong arity for tag `{tag}`")));
                }
                let arg_type = argument.as_ref().and_then(|v| gamma.get(v)).cloned();
                let inst = match instantiation {
                    Some(i) => i.clone(),
                    None => infer_send_instantiation(delta, arg_type.as_ref(), b).map_err(|e| TypeError { span, ..e })?,
                };
                if !self.subtype(delta, &inst, &b.bound, span)? {
                    return Err(TypeError::new("T-Send", span, "instantiation is not below the bound")
                        .expected(&b.bound)
                        .actual(&inst));
                }
                let (payload, cont) = b.open_with(&inst);
                let mut consumed = Vec::new();
                if let (Some(s), Some(v)) = (payload, argument) {
                    let w = self.weight(delta, &s).map_err(|e| TypeError::budget(span, e))?;
                    if w == Weight::Infinite {
                        let mut e = TypeError::new("T-Send", span, "infinite-weight argument type").actual(&s);
                        e.weight = Some(w);
                        return Err(e);
                    }
                    if v == subject {
                        return Err(TypeError::new("T-Send", span, format!("`{v}` is sent over itself")));
                    }
                    let vt = gamma.remove(v).ok_or_else(|| missing("T-Send", v, span))?;
                    if !self.subtype(delta, &vt, &s, span)? {
                        return Err(TypeError::new("T-Send", span, format!("argument `{v}` has the wrong type"))
                            .expected(&s)
                            .actual(&vt));
                    }
                    consumed.push(v.clone());
                }
                gamma.insert(subject.clone(), cont);
                self.step("T-Send", span, consumed);
                self.check(sigma, delta, gamma, body)
            }
            ProcessKind::Receive { subject, branches } => {
                let t = gamma.remove(subject).ok_or_else(|| missing("T-Receive", subject, span))?;
                let head = self.head("T-Receive", delta, &t, span)?;
                let Type::Choice(Polarity::External, offered) = &head else {
                    return Err(TypeError::new("T-Receive", span, format!("`{subject}` does not permit input"))
                        .expected("an external choice")
                        .actual(&t));
                };
                for pb in branches {
                    if !offered.iter().any(|b| b.tag == pb.tag) {
                        self.out.warnings.push(TypeError::new(
                            "T-Receive",
                            pb.span,
                            format!("dead branch: `{subject}` never delivers `{}`", pb.tag),
                        ));
                    }
                }
                self.step("T-Receive", span, Vec::new());
                for tb in offered.iter() {
                    let Some(pb) = branches.iter().find(|b| b.tag == tb.tag) else {
                        return Err(TypeError::new(
                            "T-Receive",
                            span,
                            format!("no handler for tag `{}` offered by `{subject}`", tb.tag),
                        )
                        .actual(&t));
                    };
                    if tb.payload.is_some() != pb.binder.is_some() {
                        return Err(TypeError::new("T-Receive", pb.span, format!("wrong arity for tag `{}`", tb.tag)));
                    }
                    let var = TyVar::fresh(tb.var.as_str());
                    let mut inner = delta.clone();
                    inner.push_entry(BoundEntry {
                        var: var.clone(),
                        bound: tb.bound.clone(),
                        witnessed: tb.payload == Some(Type::Bound(0)),
                    });
                    let (payload, cont) = tb.open_with(&Type::Free(var));
                    let mut g = gamma.clone();
                    g.insert(subject.clone(), cont);
                    if let (Some(s), Some(x)) = (payload, &pb.binder) {
                        g.insert(Name::Var(x.clone()), s);
                    }
                    self.check(sigma, &inner, g, &pb.body)?;
                }
                Ok(())
            }
            ProcessKind::Choice(l, r) => {
                self.step("T-Choice", span, Vec::new());
                self.check(sigma, delta, gamma.clone(), l)?;
                self.check(sigma, delta, gamma, r)
            }
            ProcessKind::Parallel(l, r) => {
                let (gl, gr) = super::env::split_env_in(sigma, &gamma, l, r)?;
                self.step("T-Par", span, Vec::new());
                self.check(sigma, delta, gl, l)?;
                self.check(sigma, delta, gr, r)
            }
            ProcessKind::Rec { var, body } => {
                if gamma.names() != free_names(body) {
                    return Err(TypeError::new("T-Rec", span, "environment/free-name mismatch")
                        .expected(format!("{:?}", names(&free_names(body))))
                        .actual(format!("{:?}", names(&gamma.names()))));
                }
                let sigma = sigma.extended(var.clone(), delta.clone(), gamma.clone());
                self.step("T-Rec", span, Vec::new());
                self.check(&sigma, delta, gamma, body)
            }
            ProcessKind::Var(x) => {
                let Some((dx, gx)) = sigma.get(x) else {
                    return Err(TypeError::new("T-Var", span, format!("unbound process variable `{x}`")));
                };
                if let Some(why) = env_mismatch(delta, &gamma, dx, gx) {
                    return Err(TypeError::new("T-Var", span, format!("environment differs from the one at `rec {x}`: {why}"))
                        .expected(gx)
                        .actual(&gamma));
                }
                self.step("T-Var", span, gamma.names().into_iter().collect());
                Ok(())
            }
        }
    }
}

fn names(s: &BTreeSet<Name>) -> Vec<String> {
    s.iter().map(|n| n.to_string()).collect()
}

/// Environments match if they have the same domain, entry-wise equal
/// types, and equal bounds for every variable reachable from those types.
fn env_mismatch(delta: &BoundEnv, gamma: &TypeEnv, dx: &BoundEnv, gx: &TypeEnv) -> Option<String> {
    if gamma.names() != gx.names() {
        return Some("different names".into());
    }
    for (u, t) in gamma.iter() {
        if !type_equal(t, &gx.get(u).expect("same domain")) {
            return Some(format!("type of `{u}`"));
        }
    }
    let roots: Vec<TyVar> = gamma.iter().flat_map(|(_, t)| t.free_vars()).collect();
    for v in delta.relevant(roots) {
        match (delta.bound_of(&v), dx.bound_of(&v)) {
            (Some(a), Some(b)) if type_equal(a, b) => {}
            _ => return Some(format!("bound of `{}`", v.hint())),
        }
    }
    None
}
