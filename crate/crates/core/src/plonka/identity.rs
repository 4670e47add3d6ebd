use serde::Serialize;

use crate::algebra::{FiniteAlgebra, Valuation};
use crate::error::Result;
use crate::formula::{vars_of_set, Formula, Name, Signature};
use crate::fragment::{enumerate_fragment, FragmentSpec};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    /// Both sides have the same variables.
    pub regular: bool,
    pub holds: bool,
    /// First falsifying assignment, rendered with element names.
    pub counterexample: Option<String>,
}

/// Decides `lhs ≈ rhs` on `algebra` by exhaustive valuation.
pub fn check_regular_identity(
    lhs: &Formula,
    rhs: &Formula,
    algebra: &FiniteAlgebra,
) -> Result<IdentityReport> {
    lhs.check_signature(algebra.signature())?;
    rhs.check_signature(algebra.signature())?;
    let vars: Vec<Name> = vars_of_set([lhs, rhs]).into_iter().collect();
    let left = algebra.evaluate_all(lhs, &vars)?;
    let right = algebra.evaluate_all(rhs, &vars)?;
    let counterexample = left
        .iter()
        .zip(&right)
        .position(|(a, b)| a != b)
        .map(|row| {
            let n = algebra.size();
            let mut h = Valuation::new();
            let mut rest = row;
            for v in vars.iter().rev() {
                h.insert(v.clone(), rest % n);
                rest /= n;
            }
            h.render(algebra)
        });
    Ok(IdentityReport {
        regular: lhs.vars() == rhs.vars(),
        holds: counterexample.is_none(),
        counterexample,
    })
}

/// Pairs of distinct fragment formulas with equal variable sets, in
/// enumeration order.
pub fn regular_identity_candidates(
    sig: &Signature,
    spec: &FragmentSpec,
) -> Vec<(Formula, Formula)> {
    let formulas = enumerate_fragment(sig, spec);
    let mut out = Vec::new();
    for (i, a) in formulas.iter().enumerate() {
        for b in &formulas[i + 1..] {
            if a.vars() == b.vars() {
                out.push((a.clone(), b.clone()));
            }
        }
    }
    out
}
