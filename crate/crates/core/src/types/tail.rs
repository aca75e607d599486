//! Residual type of an endpoint after the messages in its queue have been
//! received.
//!
//! The declarative rule is a relation: each received message may
//! instantiate the branch variable with any `t'` such that `t' <: bound` and
//! the argument type is a subtype of the payload under `t'`. The function
//! here picks one `t'` by trying, in order, the argument type itself (when
//! the payload is exactly the variable), a structural match of the argument
//! type against the payload, and the bound. It does not backtrack, so it
//! may fail where the relation holds.

use super::{head_normal, BoundEnv, BudgetExceeded, Polarity, Subtyping, Type, DEFAULT_BUDGET};
use crate::syntax::Tag;

/// One queued message: its tag and the type of its argument, if any.
pub type QueueSpec = (Tag, Option<Type>);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TailError {
    #[error("message `{tag}` is queued but the endpoint type `{found}` is not an input")]
    NotExternal { tag: Tag, found: String },
    #[error("tag not offered: `{tag}` is not among the input branches")]
    TagNotOffered { tag: Tag },
    #[error("message `{tag}` has the wrong arity for its branch")]
    Arity { tag: Tag },
    #[error("no instantiation of the variable of branch `{tag}` admits the queued argument")]
    NoInstantiation { tag: Tag },
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
}

pub fn tail(delta: &BoundEnv, t: &Type, specs: &[QueueSpec]) -> Result<Type, TailError> {
    tail_with(delta, t, specs, DEFAULT_BUDGET)
}

pub fn tail_with(delta: &BoundEnv, t: &Type, specs: &[QueueSpec], budget: usize) -> Result<Type, TailError> {
    let mut sub = Subtyping::new(budget);
    let mut cur = t.clone();
    for (tag, arg) in specs {
        let head = head_normal(delta, &cur)
            .map_err(|_| TailError::NotExternal { tag: tag.clone(), found: cur.to_string() })?
            .head;
        let Type::Choice(Polarity::External, branches) = &head else {
            return Err(TailError::NotExternal { tag: tag.clone(), found: cur.to_string() });
        };
        let Some(b) = branches.iter().find(|b| &b.tag == tag) else {
            return Err(TailError::TagNotOffered { tag: tag.clone() });
        };
        let chosen = match (&b.payload, arg) {
            (None, None) => b.bound.clone(),
            (Some(payload), Some(arg)) => {
                let mut found = None;
                for cand in candidates(payload, arg, &b.bound) {
                    if sub.check(delta, &cand, &b.bound)? && sub.check(delta, arg, &payload.instantiate(&cand))? {
                        found = Some(cand);
                        break;
                    }
                }
                found.ok_or_else(|| TailError::NoInstantiation { tag: tag.clone() })?
            }
            _ => return Err(TailError::Arity { tag: tag.clone() }),
        };
        cur = b.cont.instantiate(&chosen);
    }
    Ok(cur)
}

fn candidates(payload: &Type, arg: &Type, bound: &Type) -> Vec<Type> {
    let mut out = Vec::new();
    if *payload == Type::Bound(0) {
        out.push(arg.clone());
    }
    if let Some(m) = solve(payload, arg, 0, 0) {
        if !out.contains(&m) {
            out.push(m);
        }
    }
    if !out.contains(bound) {
        out.push(bound.clone());
    }
    out
}

/// Find the subterm of `arg` sitting where `payload` has the variable
/// `Bound(depth)`. The match must not capture binders local to `arg`.
fn solve(payload: &Type, arg: &Type, depth: usize, unfolds: usize) -> Option<Type> {
    match (payload, arg) {
        (Type::Bound(i), _) if *i == depth => {
            if (0..depth).any(|k| arg.mentions_bound(k)) {
                None
            } else {
                Some(arg.shift(-(depth as isize), 0))
            }
        }
        (Type::Rec(_, p), Type::Rec(_, a)) => solve(p, a, depth + 1, unfolds),
        (Type::Choice(pp, pbs), Type::Choice(ap, abs)) if pp == ap => pbs.iter().find_map(|pb| {
            let ab = abs.iter().find(|ab| ab.tag == pb.tag)?;
            solve(&pb.bound, &ab.bound, depth, unfolds)
                .or_else(|| match (&pb.payload, &ab.payload) {
                    (Some(p), Some(a)) => solve(p, a, depth + 1, unfolds),
                    _ => None,
                })
                .or_else(|| solve(&pb.cont, &ab.cont, depth + 1, unfolds))
        }),
        (_, Type::Rec(..)) if depth == 0 && unfolds < 4 => solve(payload, &arg.unfold(), depth, unfolds + 1),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::super::subtype;
    use super::*;

    #[test]
    fn empty_queue_is_identity() {
        let t = input(vec![br("m", Some(Type::End), Type::End)]);
        assert_eq!(tail(&BoundEnv::new(), &t, &[]).unwrap(), t);
    }

    #[test]
    fn worked_residual() {
        // ?m<a <: t>(a). ?m(a). end  with  t = Top, s = end
        let t = Type::Top;
        let s = Type::End;
        let ty = input(vec![qbr("m", t.clone(), Some(Type::Bound(0)), input(vec![br("m", Some(Type::Bound(0)), Type::End)]))]);
        let r = tail(&BoundEnv::new(), &ty, &[(tag("m"), Some(s.clone()))]).unwrap();
        let Type::Choice(Polarity::External, bs) = &r else { panic!("{r:?}") };
        let chosen = bs[0].payload.as_ref().unwrap().shift(-1, 0);
        let d = BoundEnv::new();
        assert!(subtype(&d, &s, &chosen).unwrap());
        assert!(subtype(&d, &chosen, &t).unwrap());
        assert_eq!(chosen, s);
    }

    #[test]
    fn failures_are_distinguished() {
        let t = input(vec![br("m", Some(Type::End), Type::End)]);
        let d = BoundEnv::new();
        assert!(matches!(tail(&d, &t, &[(tag("n"), Some(Type::End))]), Err(TailError::TagNotOffered { .. })));
        assert!(matches!(tail(&d, &t, &[(tag("m"), Some(Type::Top))]), Err(TailError::NoInstantiation { .. })));
        assert!(matches!(tail(&d, &t, &[(tag("m"), None)]), Err(TailError::Arity { .. })));
        let out = output(vec![br("m", Some(Type::End), Type::End)]);
        assert!(matches!(tail(&d, &out, &[(tag("m"), Some(Type::End))]), Err(TailError::NotExternal { .. })));
    }

    #[test]
    fn structural_match_solves_nested_variable() {
        // ?m<a <: Top>(?k(a). end). ?n(a). end  receiving ?k(end). end
        let ty = input(vec![qbr(
            "m",
            Type::Top,
            Some(input(vec![br("k", Some(Type::Bound(0)), Type::End)])),
            input(vec![br("n", Some(Type::Bound(0)), Type::End)]),
        )]);
        let arg = input(vec![br("k", Some(Type::End), Type::End)]);
        let r = tail(&BoundEnv::new(), &ty, &[(tag("m"), Some(arg))]).unwrap();
        assert_eq!(r, input(vec![br("n", Some(Type::End), Type::End)]));
    }
}
