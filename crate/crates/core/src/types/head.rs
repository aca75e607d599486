use super::{BoundEnv, TyVar, Type, DEFAULT_BUDGET};

/// Head of a type after unfolding recursion and promoting variables to
/// their bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeadForm {
    /// `End`, `Top`, `Base` or a choice.
    pub head: Type,
    /// Variables promoted on the way, outermost first.
    pub promotions: Vec<TyVar>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeadError {
    #[error("type variable {0} is not in the bound environment")]
    Unbound(String),
    #[error("dangling de Bruijn index {0}")]
    Dangling(usize),
    #[error("head normalization did not reach a head in {0} steps (non-regular type)")]
    NonRegular(usize),
}

pub fn head_normal(delta: &BoundEnv, t: &Type) -> Result<HeadForm, HeadError> {
    let mut promotions = Vec::new();
    let mut cur = t.clone();
    for _ in 0..DEFAULT_BUDGET {
        match cur {
            Type::Rec(..) => cur = cur.unfold(),
            Type::Free(ref v) => {
                let bound = delta.bound_of(v).ok_or_else(|| HeadError::Unbound(v.hint().to_string()))?;
                promotions.push(v.clone());
                cur = bound.clone();
            }
            Type::Bound(i) => return Err(HeadError::Dangling(i)),
            head => return Ok(HeadForm { head, promotions }),
        }
    }
    Err(HeadError::NonRegular(DEFAULT_BUDGET))
}
