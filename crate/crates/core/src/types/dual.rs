//! Duality: swap inputs and outputs at every depth, keeping tags, bounds and
//! payloads. A recursion variable occurring inside a payload or bound
//! denotes the original (non-dualized) type, so such occurrences are
//! replaced by the original recursive term.

use std::sync::Arc;

use super::{Branch, Type};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DualError {
    #[error("`{0}` is not an endpoint type and has no dual")]
    NotEndpoint(String),
    #[error("a quantified variable occurs as a continuation")]
    QuantifiedContinuation,
    #[error("continuation refers to a variable bound outside the dualized type")]
    OpenContinuation,
}

#[derive(Clone)]
enum Frame {
    /// The original recursive term, already closed over enclosing
    /// recursion frames.
    Rec(Type),
    Branch,
}

pub fn dual(t: &Type) -> Result<Type, DualError> {
    dual_at(t, &mut Vec::new())
}

fn dual_at(t: &Type, stack: &mut Vec<Frame>) -> Result<Type, DualError> {
    match t {
        Type::End => Ok(Type::End),
        Type::Top => Err(DualError::NotEndpoint("Top".into())),
        Type::Base(b) => Err(DualError::NotEndpoint(b.to_string())),
        Type::Free(v) => Err(DualError::NotEndpoint(v.hint().to_string())),
        Type::Bound(i) => match stack.len().checked_sub(i + 1).map(|p| &stack[p]) {
            Some(Frame::Rec(_)) => Ok(Type::Bound(*i)),
            Some(Frame::Branch) => Err(DualError::QuantifiedContinuation),
            None => Err(DualError::OpenContinuation),
        },
        Type::Rec(hint, body) => {
            let closure = restore(t, 0, stack);
            stack.push(Frame::Rec(closure));
            let body = dual_at(body, stack);
            stack.pop();
            Ok(Type::Rec(hint.clone(), Arc::new(body?)))
        }
        Type::Choice(pol, branches) => {
            let mut out = Vec::with_capacity(branches.len());
            for b in branches.iter() {
                let bound = restore(&b.bound, 0, stack);
                stack.push(Frame::Branch);
                let payload = b.payload.as_ref().map(|p| restore(p, 0, stack));
                let cont = dual_at(&b.cont, stack);
                stack.pop();
                out.push(Branch { tag: b.tag.clone(), var: b.var.clone(), bound, payload, cont: cont? });
            }
            Ok(Type::choice(pol.flip(), out))
        }
    }
}

/// Replace references to recursion frames by the original terms.
fn restore(t: &Type, depth: usize, stack: &[Frame]) -> Type {
    match t {
        Type::Bound(i) if *i >= depth => {
            let j = i - depth;
            match stack.len().checked_sub(j + 1).map(|p| &stack[p]) {
                Some(Frame::Rec(closure)) => closure.shift((j + 1 + depth) as isize, 0),
                _ => t.clone(),
            }
        }
        Type::Top | Type::Base(_) | Type::End | Type::Bound(_) | Type::Free(_) => t.clone(),
        Type::Rec(h, body) => Type::Rec(h.clone(), Arc::new(restore(body, depth + 1, stack))),
        Type::Choice(pol, bs) => Type::choice(
            *pol,
            bs.iter()
                .map(|b| Branch {
                    tag: b.tag.clone(),
                    var: b.var.clone(),
                    bound: restore(&b.bound, depth, stack),
                    payload: b.payload.as_ref().map(|p| restore(p, depth + 1, stack)),
                    cont: restore(&b.cont, depth + 1, stack),
                })
                .collect(),
        ),
    }
}
