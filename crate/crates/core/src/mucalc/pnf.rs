use std::sync::Arc;

use crate::error::{Error, Result};
use crate::formula::Formula;

/// Pushes negations down to the atoms using the dualities of the boolean
/// connectives, the modalities and the fixpoints. Fails if a fixpoint
/// variable would end up negated.
pub fn positive_normal_form(f: &Formula) -> Result<Formula> {
    pnf(f, false, &mut Vec::new())
}

/// `flipped` holds the bound variables in scope and whether their binder
/// was dualized, innermost last.
fn pnf(f: &Formula, neg: bool, flipped: &mut Vec<(Arc<str>, bool)>) -> Result<Formula> {
    use Formula as F;
    let bx = Box::new;
    Ok(match f {
        F::True | F::False => {
            if neg == matches!(f, F::True) {
                F::False
            } else {
                F::True
            }
        }
        F::Atom(_) => {
            if neg {
                F::Not(bx(f.clone()))
            } else {
                f.clone()
            }
        }
        F::Not(a) => pnf(a, !neg, flipped)?,
        F::And(a, b) | F::Or(a, b) => {
            let (a, b) = (bx(pnf(a, neg, flipped)?), bx(pnf(b, neg, flipped)?));
            if matches!(f, F::And(..)) != neg {
                F::And(a, b)
            } else {
                F::Or(a, b)
            }
        }
        F::Implies(a, b) => pnf(&F::or(F::not((**a).clone()), (**b).clone()), neg, flipped)?,
        F::Iff(a, b) => {
            let (a, b) = ((**a).clone(), (**b).clone());
            let alt = F::or(F::and(a.clone(), b.clone()), F::and(F::not(a), F::not(b)));
            pnf(&alt, neg, flipped)?
        }
        F::Diamond(spec, a) | F::BoxOp(spec, a) => {
            let a = bx(pnf(a, neg, flipped)?);
            if matches!(f, F::Diamond(..)) != neg {
                F::Diamond(spec.clone(), a)
            } else {
                F::BoxOp(spec.clone(), a)
            }
        }
        F::Mu(x, a) | F::Nu(x, a) => {
            flipped.push((x.clone(), neg));
            let body = pnf(a, neg, flipped);
            flipped.pop();
            let body = bx(body?);
            if matches!(f, F::Mu(..)) != neg {
                F::Mu(x.clone(), body)
            } else {
                F::Nu(x.clone(), body)
            }
        }
        F::Var(x) => match flipped.iter().rev().find(|(y, _)| y == x) {
            None => return Err(Error::UnboundMuVariable(x.to_string())),
            Some(&(_, dual)) if dual != neg => return Err(Error::NonMonotoneFixpoint(x.to_string())),
            Some(_) => f.clone(),
        },
        _ => {
            return Err(Error::UnsupportedFeature(
                "temporal operators or path quantifiers in a mu-calculus formula".into(),
            ))
        }
    })
}
