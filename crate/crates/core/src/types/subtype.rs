//! Kernel bounded subtyping over equi-recursive types.
//!
//! Greatest-fixpoint search: a configuration seen before (up to canonical
//! renaming) is assumed to hold. Every rule is deterministic and all premises
//! are conjunctive, so a failed premise fails the whole query and stale
//! assumptions never leak into an accepted answer.

use std::collections::HashSet;

use super::canon::CanonKey;
use super::{canon_key, type_equal, BoundEnv, BudgetExceeded, Polarity, TyVar, Type, DEFAULT_BUDGET};

pub fn subtype(delta: &BoundEnv, t: &Type, s: &Type) -> Result<bool, BudgetExceeded> {
    Subtyping::new(DEFAULT_BUDGET).check(delta, t, s)
}

/// A subtyping query engine with an explicit state budget.
#[derive(Debug, Clone)]
pub struct Subtyping {
    budget: usize,
    steps: usize,
    assumed: HashSet<CanonKey>,
}

impl Subtyping {
    pub fn new(budget: usize) -> Self {
        Subtyping { budget, steps: 0, assumed: HashSet::new() }
    }

    /// Number of states visited by the last query.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn check(&mut self, delta: &BoundEnv, t: &Type, s: &Type) -> Result<bool, BudgetExceeded> {
        self.steps = 0;
        self.assumed.clear();
        self.visit(delta, t, s)
    }

    fn visit(&mut self, delta: &BoundEnv, t: &Type, s: &Type) -> Result<bool, BudgetExceeded> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(BudgetExceeded(self.budget));
        }
        if t == s {
            return Ok(true);
        }
        if !self.assumed.insert(canon_key(delta, &[t, s])) {
            return Ok(true);
        }
        let (t, s) = (t.unfold_all(), s.unfold_all());
        if t == s || s == Type::Top {
            return Ok(true);
        }
        match (&t, &s) {
            (Type::Free(x), _) => match delta.bound_of(x) {
                Some(bound) => {
                    let bound = bound.clone();
                    self.visit(delta, &bound, &s)
                }
                None => Ok(false),
            },
            (Type::Choice(p, ts), Type::Choice(q, ss)) if p == q => {
                // the branch set that must be included in the other
                let (fewer, more) = match p {
                    Polarity::External => (ts, ss),
                    Polarity::Internal => (ss, ts),
                };
                for small in fewer.iter() {
                    let Some(big) = more.iter().find(|b| b.tag == small.tag) else {
                        return Ok(false);
                    };
                    if small.payload.is_some() != big.payload.is_some() || !type_equal(&small.bound, &big.bound) {
                        return Ok(false);
                    }
                    let (sub, sup) = match p {
                        Polarity::External => (small, big),
                        Polarity::Internal => (big, small),
                    };
                    let var = TyVar::fresh(sub.var.as_str());
                    let inner = delta.extended(var.clone(), sub.bound.clone());
                    let v = Type::Free(var);
                    let (sub_payload, sub_cont) = sub.open_with(&v);
                    let (sup_payload, sup_cont) = sup.open_with(&v);
                    if let (Some(a), Some(b)) = (sub_payload, sup_payload) {
                        let ok = match p {
                            Polarity::External => self.visit(&inner, &a, &b)?,
                            Polarity::Internal => self.visit(&inner, &b, &a)?,
                        };
                        if !ok {
                            return Ok(false);
                        }
                    }
                    if !self.visit(&inner, &sub_cont, &sup_cont)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            _ => Ok(false),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;

    fn sub(t: &Type, s: &Type) -> bool {
        subtype(&BoundEnv::new(), t, s).unwrap()
    }

    fn seller_bargain() -> (Type, Type) {
        // BargainT = rec a. +{ offer(end). &{ response(end). a }, leave. end }
        // SellerT  = rec a. +{ offer(end). &{ response(end). a }, buy(end). end, leave. end }
        let step = |extra: bool| {
            let mut bs = vec![
                br("offer", Some(Type::End), input(vec![br("response", Some(Type::End), Type::Bound(0))])),
                br("leave", None, Type::End),
            ];
            if extra {
                bs.insert(1, br("buy", Some(Type::End), Type::End));
            }
            Type::rec("a", output(bs))
        };
        (step(true), step(false))
    }

    #[test]
    fn seller_is_a_bargain() {
        let (seller, bargain) = seller_bargain();
        assert!(sub(&seller, &bargain));
        assert!(!sub(&bargain, &seller));
    }

    #[test]
    fn inputs_are_covariant_in_tags() {
        let one = input(vec![br("a", None, Type::End)]);
        let two = input(vec![br("a", None, Type::End), br("b", None, Type::End)]);
        assert!(sub(&one, &two));
        assert!(!sub(&two, &one));
    }

    #[test]
    fn top_and_variables() {
        assert!(sub(&Type::End, &Type::Top));
        assert!(!sub(&Type::Top, &Type::End));
        let v = TyVar::fresh("x");
        let d = BoundEnv::new().extended(v.clone(), Type::End);
        assert!(subtype(&d, &Type::Free(v.clone()), &Type::End).unwrap());
        assert!(!subtype(&d, &Type::End, &Type::Free(v)).unwrap());
    }

    #[test]
    fn bounds_must_agree() {
        let a = input(vec![qbr("m", Type::End, Some(Type::Bound(0)), Type::End)]);
        let b = input(vec![qbr("m", Type::Top, Some(Type::Bound(0)), Type::End)]);
        assert!(!sub(&a, &b));
        assert!(sub(&a, &a.clone()));
    }

    #[test]
    fn budget_is_reported() {
        let (seller, bargain) = seller_bargain();
        assert_eq!(Subtyping::new(2).check(&BoundEnv::new(), &seller, &bargain), Err(BudgetExceeded(2)));
    }
}
