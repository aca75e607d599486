//! Equality of regular trees: insensitive to binder names and to folding or
//! unfolding of `rec`. Decided by a memoized bisimulation check.

use std::collections::HashSet;

use super::canon::CanonKey;
use super::{canon_key, BoundEnv, BudgetExceeded, TyVar, Type};

const EQUAL_BUDGET: usize = 1_000_000;

pub fn type_equal(a: &Type, b: &Type) -> bool {
    try_type_equal(a, b, EQUAL_BUDGET).unwrap_or(false)
}

pub fn try_type_equal(a: &Type, b: &Type, budget: usize) -> Result<bool, BudgetExceeded> {
    Bisim { budget, steps: 0, assumed: HashSet::new(), empty: BoundEnv::new() }.eq(a, b)
}

struct Bisim {
    budget: usize,
    steps: usize,
    assumed: HashSet<CanonKey>,
    empty: BoundEnv,
}

impl Bisim {
    fn eq(&mut self, a: &Type, b: &Type) -> Result<bool, BudgetExceeded> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(BudgetExceeded(self.budget));
        }
        if a == b {
            return Ok(true);
        }
        if !self.assumed.insert(canon_key(&self.empty, &[a, b])) {
            return Ok(true);
        }
        let (a, b) = (a.unfold_all(), b.unfold_all());
        Ok(match (&a, &b) {
            (Type::Free(x), Type::Free(y)) => x == y,
            (Type::End, Type::End) | (Type::Top, Type::Top) => true,
            (Type::Base(x), Type::Base(y)) => x == y,
            (Type::Choice(p, xs), Type::Choice(q, ys)) => {
                if p != q || xs.len() != ys.len() {
                    return Ok(false);
                }
                for x in xs.iter() {
                    let Some(y) = ys.iter().find(|y| y.tag == x.tag) else {
                        return Ok(false);
                    };
                    if x.payload.is_some() != y.payload.is_some() || !self.eq(&x.bound, &y.bound)? {
                        return Ok(false);
                    }
                    let v = Type::Free(TyVar::fresh(x.var.as_str()));
                    let (px, cx) = x.open_with(&v);
                    let (py, cy) = y.open_with(&v);
                    if let (Some(px), Some(py)) = (&px, &py) {
                        if !self.eq(px, py)? {
                            return Ok(false);
                        }
                    }
                    if !self.eq(&cx, &cy)? {
                        return Ok(false);
                    }
                }
                true
            }
            _ => false,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::test_support::*;
    use super::*;

    #[test]
    fn unfolding_is_equal() {
        // rec a. &{ m(end). a }  vs  &{ m(end). rec a. &{ m(end). a } }
        let r = Type::rec("a", input(vec![br("m", Some(Type::End), Type::Bound(0))]));
        let once = input(vec![br("m", Some(Type::End), r.clone())]);
        assert!(type_equal(&r, &once));
        assert!(type_equal(&once, &r));
    }

    #[test]
    fn distinct_heads() {
        assert!(!type_equal(&Type::End, &Type::Top));
        let a = input(vec![br("m", Some(Type::End), Type::End)]);
        let b = output(vec![br("m", Some(Type::End), Type::End)]);
        assert!(!type_equal(&a, &b));
    }

    #[test]
    fn different_periods_are_equal() {
        // rec a. &{ m. &{ m. a } }  vs  rec b. &{ m. b }
        let two = Type::rec("a", input(vec![br("m", None, input(vec![br("m", None, Type::Bound(0))]))]));
        let one = Type::rec("b", input(vec![br("m", None, Type::Bound(0))]));
        assert!(type_equal(&two, &one));
    }

    #[test]
    fn quantified_variables_are_matched_by_position() {
        let a = input(vec![qbr("m", Type::Top, Some(Type::Bound(0)), Type::End)]);
        let b = input(vec![br("m", Some(Type::Top), Type::End)]);
        assert!(!type_equal(&a, &b));
        assert!(type_equal(&a, &a.clone()));
    }
}
