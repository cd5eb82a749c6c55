//! Kripke semantics: truth of formulas at states, validity on classes and
//! separation checks.

use thiserror::Error;

use crate::kripke::{KripkeModel, ModelClass, PointedModel};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("proposition `{0}` is not in the model's alphabet")]
    UnknownAtom(String),
}

/// Direction in which a formula separates two classes: `Forward` means true
/// throughout the first and false throughout the second.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Forward,
    Reverse,
}

impl Polarity {
    pub fn as_str(self) -> &'static str {
        match self {
            Polarity::Forward => "forward",
            Polarity::Reverse => "reverse",
        }
    }
}

/// The set of states of `m` where `f` holds.
pub fn truth_set(m: &KripkeModel, f: &Formula) -> Result<Vec<bool>, EvalError> {
    let n = m.len();
    Ok(match f {
        Formula::Top => vec![true; n],
        Formula::Bot => vec![false; n],
        Formula::Atom(a) => {
            let i = m.alphabet().index_of(a).ok_or_else(|| EvalError::UnknownAtom(a.clone()))?;
            (0..n).map(|s| m.holds(s, i)).collect()
        }
        Formula::Not(c) => truth_set(m, c)?.into_iter().map(|b| !b).collect(),
        Formula::And(cs) => {
            let mut acc = vec![true; n];
            for c in cs {
                for (a, b) in acc.iter_mut().zip(truth_set(m, c)?) {
                    *a &= b;
                }
            }
            acc
        }
        Formula::Or(cs) => {
            let mut acc = vec![false; n];
            for c in cs {
                for (a, b) in acc.iter_mut().zip(truth_set(m, c)?) {
                    *a |= b;
                }
            }
            acc
        }
        Formula::Dia(c) => {
            let inner = truth_set(m, c)?;
            (0..n).map(|s| m.successors(s).iter().any(|&t| inner[t])).collect()
        }
        Formula::Box(c) => {
            let inner = truth_set(m, c)?;
            (0..n).map(|s| m.successors(s).iter().all(|&t| inner[t])).collect()
        }
    })
}

/// `M, s |= f`.
pub fn eval(p: &PointedModel, f: &Formula) -> Result<bool, EvalError> {
    Ok(truth_set(p.model(), f)?[p.point()])
}

/// `f` holds on every member (vacuously on the empty class).
pub fn class_models(c: &ModelClass, f: &Formula) -> Result<bool, EvalError> {
    for m in c {
        if !eval(m, f)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The polarity in which `f` separates `c1` from `c2`, if any.
pub fn sep_check(c1: &ModelClass, c2: &ModelClass, f: &Formula) -> Result<Option<Polarity>, EvalError> {
    let v1 = c1.iter().map(|m| eval(m, f)).collect::<Result<Vec<_>, _>>()?;
    let v2 = c2.iter().map(|m| eval(m, f)).collect::<Result<Vec<_>, _>>()?;
    if v1.iter().all(|&b| b) && v2.iter().all(|&b| !b) {
        Ok(Some(Polarity::Forward))
    } else if v1.iter().all(|&b| !b) && v2.iter().all(|&b| b) {
        Ok(Some(Polarity::Reverse))
    } else {
        Ok(None)
    }
}
