//! Matrices shipped with the crate.
//!
//! The Boolean and chain matrices are generated; the weak Kleene tables are entered by
//! hand in `data/wk.mat` and checked against the Płonka sum construction in
//! the tests.

use crate::algebra::{FiniteAlgebra, FiniteMatrix};
use crate::formula::{Name, Signature};
use crate::matrix_file;

const WK_SOURCE: &str = include_str!("../data/wk.mat");

pub fn classical_signature() -> Signature {
    Signature::new([("and", 2), ("or", 2), ("not", 1)]).expect("valid signature")
}

fn boolean(signature: Signature) -> FiniteAlgebra {
    FiniteAlgebra::from_fn(
        signature.clone(),
        vec![Name::from("0"), Name::from("1")],
        |c, a| match &**signature.name(c) {
            "and" => a[0] & a[1],
            "or" => a[0] | a[1],
            "not" => 1 - a[0],
            other => unreachable!("no Boolean table for `{other}`"),
        },
    )
    .expect("Boolean tables are total")
}

/// B₂ over `and, or, not`, elements `0, 1`.
pub fn b2_algebra() -> FiniteAlgebra {
    boolean(classical_signature())
}

/// ⟨B₂, {1}⟩, complete for classical logic.
pub fn b2_matrix() -> FiniteMatrix {
    FiniteMatrix::new(b2_algebra(), &[1]).expect("1 is an element")
}

/// ⟨B₂, {1}⟩ restricted to `and, or` (no theorems, no antitheorems).
pub fn b2_andor_matrix() -> FiniteMatrix {
    let sig = Signature::new([("and", 2), ("or", 2)]).expect("valid signature");
    FiniteMatrix::new(boolean(sig), &[1]).expect("1 is an element")
}

/// The weak Kleene algebra with elements `0, n, 1`.
pub fn weak_kleene() -> FiniteAlgebra {
    matrix_file::parse_algebra(WK_SOURCE).expect("bundled weak Kleene file is valid")
}

/// ⟨WK, {1, n}⟩: paraconsistent weak Kleene.
pub fn wk_pwk() -> FiniteMatrix {
    FiniteMatrix::with_designated_names(weak_kleene(), &["1", "n"]).expect("elements exist")
}

/// ⟨WK, {1}⟩: Bochvar.
pub fn wk_b3() -> FiniteMatrix {
    FiniteMatrix::with_designated_names(weak_kleene(), &["1"]).expect("elements exist")
}

/// The chain matrix of ⟨B₂, {1}⟩ for a canonical word.
pub fn classical_chain(word: &str) -> FiniteMatrix {
    let seq = word.parse().expect("a word over l, r");
    crate::plonka::canonical_chain_matrix(&b2_matrix(), &seq).expect("B₂ is not trivial")
}

/// Name and matrix of every bundled matrix, in a fixed order.
pub fn all() -> Vec<(&'static str, FiniteMatrix)> {
    let mut out = vec![
        ("b2", b2_matrix()),
        ("b2_andor", b2_andor_matrix()),
        ("wk_pwk", wk_pwk()),
        ("wk_b3", wk_b3()),
    ];
    for (name, word) in [
        ("chain_l", "l"),
        ("chain_r", "r"),
        ("chain_lr", "lr"),
        ("chain_rl", "rl"),
        ("chain_rlr", "rlr"),
        ("chain_lrl", "lrl"),
    ] {
        out.push((name, classical_chain(word)));
    }
    out
}

/// A bundled matrix by name; `wk` is the hand-entered file, ⟨WK, {1}⟩.
pub fn by_name(name: &str) -> Option<FiniteMatrix> {
    if name == "wk" {
        return Some(wk_b3());
    }
    all().into_iter().find(|(n, _)| *n == name).map(|(_, m)| m)
}

/// File name and contents of every bundled data file.
pub fn data_files() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = all()
        .into_iter()
        .map(|(name, m)| (format!("{name}.mat"), matrix_file::write_matrix(&m)))
        .collect();
    out.push(("wk.mat".into(), WK_SOURCE.to_string()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boolean_tables() {
        let b2 = b2_algebra();
        assert_eq!(b2.table(0), &[0, 0, 0, 1]);
        assert_eq!(b2.table(1), &[0, 1, 1, 1]);
        assert_eq!(b2.table(2), &[1, 0]);
    }

    #[test]
    fn weak_kleene_extends_boolean() {
        let wk = weak_kleene();
        let zero = wk.element_index("0").unwrap();
        let one = wk.element_index("1").unwrap();
        let sub = wk.subalgebra(&[zero, one]).unwrap();
        assert_eq!(
            sub.renamed(b2_algebra().elements().to_vec()).unwrap(),
            b2_algebra()
        );
    }
}
