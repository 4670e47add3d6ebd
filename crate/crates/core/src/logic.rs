//! Entailment oracles: matrix-defined logics and their combinators.

use std::fmt;
use std::sync::Arc;

use crate::algebra::MatrixClass;
use crate::error::{Error, Result};
use crate::formula::{fresh_variable, vars_of_set, Formula, Signature, VarSet};
use crate::fragment::{enumerate_fragment, FragmentSpec};

/// What is known about single-variable antitheorems of a logic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AntitheoremStatus {
    /// The logic provably has no antitheorem.
    NoneProven,
    /// A verified antitheorem `Σ(x)`.
    Witness(Vec<Formula>),
    Unknown,
}

impl fmt::Display for AntitheoremStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AntitheoremStatus::NoneProven => f.write_str("none"),
            AntitheoremStatus::Witness(sigma) => {
                write!(f, "witness {}", crate::formula::display_set(sigma))
            }
            AntitheoremStatus::Unknown => f.write_str("unknown"),
        }
    }
}

#[derive(Debug)]
pub(crate) enum Kind {
    Matrices(MatrixClass),
    Left(Logic),
    Right(Logic),
    Meet(Logic, Logic),
}

#[derive(Debug)]
struct Node {
    kind: Kind,
    label: String,
    status: AntitheoremStatus,
}

/// A decidable consequence relation on finite premise sets.
///
/// Cheap to clone; derived logics share their bases.
#[derive(Debug, Clone)]
pub struct Logic(Arc<Node>);

impl Logic {
    /// The logic induced by a class of matrices. Its antitheorem status is
    /// decided exactly from the tables.
    pub fn from_matrices(label: impl Into<String>, class: MatrixClass) -> Self {
        let status = matrix_antitheorem(&class);
        Logic(Arc::new(Node {
            kind: Kind::Matrices(class),
            label: label.into(),
            status,
        }))
    }

    /// `Γ ⊢ˡ φ` iff `Δ ⊢ φ` for `Δ = {γ ∈ Γ : vars(γ) ⊆ vars(φ)}`.
    pub fn left(&self) -> Self {
        let status = if self
            .root()
            .matrices()
            .iter()
            .any(|m| !m.designates_everything())
        {
            AntitheoremStatus::NoneProven
        } else {
            AntitheoremStatus::Unknown
        };
        Logic(Arc::new(Node {
            kind: Kind::Left(self.clone()),
            label: format!("{}l", self.suffix_label()),
            status,
        }))
    }

    /// `Γ ⊢ʳ φ` iff `Γ ⊢ φ` with `vars(φ) ⊆ vars(Γ)`, or `Γ` is an antitheorem.
    pub fn right(&self) -> Self {
        Logic(Arc::new(Node {
            kind: Kind::Right(self.clone()),
            label: format!("{}r", self.suffix_label()),
            status: self.0.status.clone(),
        }))
    }

    /// Pointwise intersection.
    pub fn meet(&self, other: &Logic) -> Result<Self> {
        if self.signature() != other.signature() {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                self.signature(),
                other.signature()
            )));
        }
        use AntitheoremStatus::*;
        let status = match (&self.0.status, &other.0.status) {
            (NoneProven, _) | (_, NoneProven) => NoneProven,
            (Witness(a), Witness(b)) => {
                let mut sigma = a.clone();
                sigma.extend(b.iter().filter(|f| !a.contains(f)).cloned());
                Witness(sigma)
            }
            _ => Unknown,
        };
        Ok(Logic(Arc::new(Node {
            kind: Kind::Meet(self.clone(), other.clone()),
            label: format!("{}&{}", self.label(), other.label()),
            status,
        })))
    }

    pub fn with_label(&self, label: impl Into<String>) -> Self {
        let kind = match &self.0.kind {
            Kind::Matrices(c) => Kind::Matrices(c.clone()),
            Kind::Left(i) => Kind::Left(i.clone()),
            Kind::Right(i) => Kind::Right(i.clone()),
            Kind::Meet(a, b) => Kind::Meet(a.clone(), b.clone()),
        };
        Logic(Arc::new(Node {
            kind,
            label: label.into(),
            status: self.0.status.clone(),
        }))
    }

    pub fn label(&self) -> &str {
        &self.0.label
    }

    // A base contributes nothing to the label of its companions.
    fn suffix_label(&self) -> &str {
        match self.0.kind {
            Kind::Matrices(_) => "",
            _ => &self.0.label,
        }
    }

    pub fn antitheorem_status(&self) -> &AntitheoremStatus {
        &self.0.status
    }

    pub(crate) fn kind(&self) -> &Kind {
        &self.0.kind
    }

    /// The matrix class at the bottom of the tower (the left one for meets).
    pub fn root(&self) -> &MatrixClass {
        match &self.0.kind {
            Kind::Matrices(c) => c,
            Kind::Left(i) | Kind::Right(i) | Kind::Meet(i, _) => i.root(),
        }
    }

    /// Every distinct matrix class the tower consults.
    pub fn roots(&self) -> Vec<&MatrixClass> {
        let mut out: Vec<&MatrixClass> = Vec::new();
        self.collect_roots(&mut out);
        out
    }

    fn collect_roots<'a>(&'a self, out: &mut Vec<&'a MatrixClass>) {
        match &self.0.kind {
            Kind::Matrices(c) => {
                if !out.contains(&c) {
                    out.push(c)
                }
            }
            Kind::Left(i) | Kind::Right(i) => i.collect_roots(out),
            Kind::Meet(a, b) => {
                a.collect_roots(out);
                b.collect_roots(out);
            }
        }
    }

    /// The base class when the logic is matrix-defined.
    pub fn as_matrices(&self) -> Option<&MatrixClass> {
        match &self.0.kind {
            Kind::Matrices(c) => Some(c),
            _ => None,
        }
    }

    pub fn signature(&self) -> &Signature {
        self.root().signature()
    }

    pub fn entails(&self, premises: &[Formula], conclusion: &Formula) -> bool {
        let refs: Vec<&Formula> = premises.iter().collect();
        self.entails_refs(&refs, conclusion)
    }

    pub fn entails_refs(&self, premises: &[&Formula], conclusion: &Formula) -> bool {
        match &self.0.kind {
            Kind::Matrices(class) => class.entails_refs(premises, conclusion),
            Kind::Left(inner) => {
                let allowed = conclusion.vars();
                let delta: Vec<&Formula> = premises
                    .iter()
                    .copied()
                    .filter(|p| p.vars().is_subset(&allowed))
                    .collect();
                inner.entails_refs(&delta, conclusion)
            }
            Kind::Right(inner) => {
                let covered = conclusion
                    .vars()
                    .is_subset(&vars_of_set(premises.iter().copied()));
                (covered && inner.entails_refs(premises, conclusion))
                    || inner.is_antitheorem_refs(premises)
            }
            Kind::Meet(a, b) => {
                a.entails_refs(premises, conclusion) && b.entails_refs(premises, conclusion)
            }
        }
    }

    /// `Γ` entails a variable it does not mention.
    pub fn is_antitheorem(&self, premises: &[Formula]) -> bool {
        let refs: Vec<&Formula> = premises.iter().collect();
        self.is_antitheorem_refs(&refs)
    }

    pub fn is_antitheorem_refs(&self, premises: &[&Formula]) -> bool {
        let avoid: VarSet = vars_of_set(premises.iter().copied());
        let fresh = Formula::Var(fresh_variable(&avoid, "y"));
        self.entails_refs(premises, &fresh)
    }

    pub fn is_theorem(&self, formula: &Formula) -> bool {
        self.entails_refs(&[], formula)
    }

    /// First theorem in fragment enumeration order.
    pub fn has_theorem_in_fragment(&self, spec: &FragmentSpec) -> Option<Formula> {
        enumerate_fragment(self.signature(), spec)
            .into_iter()
            .find(|f| self.is_theorem(f))
    }

    /// Re-checks a claimed antitheorem and wraps it as a witness.
    pub fn verify_antitheorem(&self, sigma: &[Formula]) -> Result<AntitheoremStatus> {
        let vars = vars_of_set(sigma);
        if vars.len() > 1 {
            return Err(Error::Antitheorem(format!(
                "{} uses more than one variable",
                crate::formula::display_set(sigma)
            )));
        }
        if !self.is_antitheorem(sigma) {
            return Err(Error::Antitheorem(format!(
                "{} is not an antitheorem of {}",
                crate::formula::display_set(sigma),
                self.label()
            )));
        }
        Ok(AntitheoremStatus::Witness(sigma.to_vec()))
    }
}

impl fmt::Display for Logic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.label)
    }
}

/// Exact single-variable antitheorem search for a matrix class.
///
/// `Σ(x)` is an antitheorem iff no valuation of a matrix with an
/// undesignated element designates all of `Σ(a)`. So one exists iff every
/// element `a` of every such matrix has a unary term `t` with `t(a) ∉ F`;
/// the witness collects one such term per pair.
fn matrix_antitheorem(class: &MatrixClass) -> AntitheoremStatus {
    let x = Formula::var("x");
    let mut sigma: Vec<Formula> = Vec::new();
    for m in class
        .matrices()
        .iter()
        .filter(|m| !m.designates_everything())
    {
        let a = m.algebra();
        for start in 0..a.size() {
            match escaping_term(m, start, &x) {
                Some(t) => {
                    if !sigma.contains(&t) {
                        sigma.push(t)
                    }
                }
                None => return AntitheoremStatus::NoneProven,
            }
        }
    }
    AntitheoremStatus::Witness(sigma)
}

/// Shortest unary term (breadth first) sending `start` outside the filter.
fn escaping_term(m: &crate::algebra::FiniteMatrix, start: usize, x: &Formula) -> Option<Formula> {
    let a = m.algebra();
    let mut term_of: Vec<Option<Formula>> = vec![None; a.size()];
    term_of[start] = Some(x.clone());
    let mut reached = vec![start];
    if !m.is_designated(start) {
        return Some(x.clone());
    }
    loop {
        let mut fresh = Vec::new();
        for (c, (name, arity)) in a.signature().iter().enumerate() {
            let mut tuples = crate::algebra::Tuples::new(reached.len(), arity);
            while let Some(idx) = tuples.next_tuple() {
                let args: Vec<usize> = idx.iter().map(|&i| reached[i]).collect();
                let v = a.apply(c, &args);
                if term_of[v].is_none() {
                    let t = Formula::App(
                        name.clone(),
                        args.iter()
                            .map(|&e| term_of[e].clone().expect("reached"))
                            .collect(),
                    );
                    if !m.is_designated(v) {
                        return Some(t);
                    }
                    term_of[v] = Some(t);
                    fresh.push(v);
                }
            }
        }
        if fresh.is_empty() {
            return None;
        }
        reached.extend(fresh);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteMatrix;
    use crate::bundled;
    use crate::parse::{parse_formula, parse_formula_list};

    fn cl() -> Logic {
        Logic::from_matrices("CL", MatrixClass::single(bundled::b2_matrix()))
    }

    fn f(text: &str) -> Formula {
        parse_formula(text, &bundled::classical_signature()).unwrap()
    }

    fn fs(text: &str) -> Vec<Formula> {
        parse_formula_list(text, &bundled::classical_signature()).unwrap()
    }

    #[test]
    fn classical_antitheorems() {
        let cl = cl();
        assert!(cl.is_antitheorem(&fs("x, not(x)")));
        assert!(cl.is_antitheorem(&fs("and(x, not(x))")));
        assert!(!cl.is_antitheorem(&fs("x")));
        assert_eq!(
            cl.antitheorem_status(),
            &AntitheoremStatus::Witness(fs("x, not(x)"))
        );
    }

    #[test]
    fn weak_kleene_antitheorems() {
        let pwk = Logic::from_matrices("PWK", MatrixClass::single(bundled::wk_pwk()));
        assert!(!pwk.is_antitheorem(&fs("x, not(x)")));
        assert_eq!(pwk.antitheorem_status(), &AntitheoremStatus::NoneProven);

        // n is undesignated in B3, so x itself escapes there.
        let b3 = Logic::from_matrices("B3", MatrixClass::single(bundled::wk_b3()));
        assert_eq!(
            b3.antitheorem_status(),
            &AntitheoremStatus::Witness(fs("x, not(x)"))
        );
        assert!(b3.is_antitheorem(&fs("x, not(x)")));

        let andor = Logic::from_matrices("B2", MatrixClass::single(bundled::b2_andor_matrix()));
        assert_eq!(andor.antitheorem_status(), &AntitheoremStatus::NoneProven);
    }

    #[test]
    fn full_matrix_has_empty_antitheorem() {
        let full = FiniteMatrix::new(bundled::b2_algebra(), &[0, 1]).unwrap();
        let triv = Logic::from_matrices("T", MatrixClass::single(full));
        assert_eq!(
            triv.antitheorem_status(),
            &AntitheoremStatus::Witness(vec![])
        );
        assert!(triv.is_antitheorem(&[]));
        assert_eq!(
            triv.left().antitheorem_status(),
            &AntitheoremStatus::Unknown
        );
        assert!(triv.left().is_antitheorem(&[]));
    }

    #[test]
    fn left_examples() {
        let l = cl().left();
        assert!(l.entails(&fs("x"), &f("and(x, or(x, y))")));
        assert!(!l.entails(&fs("and(x, or(x, y))"), &f("x")));
        assert!(!l.entails(&fs("x, not(x)"), &f("y")));
        assert_eq!(l.antitheorem_status(), &AntitheoremStatus::NoneProven);
        assert_eq!(l.label(), "l");
    }

    #[test]
    fn right_examples() {
        let r = cl().right();
        assert!(r.entails(&fs("and(x, or(x, y))"), &f("x")));
        assert!(!r.entails(&fs("x"), &f("and(x, or(x, y))")));
        assert!(r.entails(&fs("x, not(x)"), &f("y")));
        assert!(matches!(
            r.antitheorem_status(),
            AntitheoremStatus::Witness(_)
        ));
    }

    #[test]
    fn meet_is_pointwise() {
        let (l, r) = (cl().left(), cl().right());
        let m = l.meet(&r).unwrap();
        assert_eq!(m.label(), "l&r");
        let gamma = fs("x, not(x)");
        let phi = f("and(x, or(x, y))");
        assert!(l.entails(&gamma, &phi) && r.entails(&gamma, &phi));
        assert!(m.entails(&gamma, &phi));
        assert!(!m.entails(&fs("x"), &f("and(x, or(x, y))")));
        assert_eq!(m.antitheorem_status(), &AntitheoremStatus::NoneProven);

        let other = Logic::from_matrices("A", MatrixClass::single(bundled::b2_andor_matrix()));
        assert!(l.meet(&other).is_err());
    }

    #[test]
    fn theorems() {
        let cl = cl();
        assert!(cl.is_theorem(&f("or(x, not(x))")));
        assert!(!cl.is_theorem(&f("x")));
        let andor = Logic::from_matrices("A", MatrixClass::single(bundled::b2_andor_matrix()));
        let spec = FragmentSpec::new(&["x", "y"], 2, 0).unwrap();
        assert_eq!(andor.has_theorem_in_fragment(&spec), None);
        let spec = FragmentSpec::new(&["x"], 2, 0).unwrap();
        assert_eq!(cl.has_theorem_in_fragment(&spec), Some(f("or(x, not(x))")));
    }

    #[test]
    fn verify_antitheorem_rejects_bad_sets() {
        let cl = cl();
        assert!(cl.verify_antitheorem(&fs("x, not(x)")).is_ok());
        assert!(cl.verify_antitheorem(&fs("x")).is_err());
        assert!(cl.verify_antitheorem(&fs("x, not(y)")).is_err());
    }
}
