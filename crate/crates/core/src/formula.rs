//! Formulas over a finite connective signature.
//!
//! A [`Formula`] is a plain term tree. Variables and connectives share one
//! name space; whether a name is a connective is decided by the
//! [`Signature`] it is read against (see [`crate::parse`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Interned-ish name shared by variables, connectives and elements.
pub type Name = Arc<str>;

pub type VarSet = BTreeSet<Name>;

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// Connective names with their arities, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    connectives: Vec<(Name, usize)>,
}

impl Signature {
    pub fn new<I, S>(connectives: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: AsRef<str>,
    {
        let mut out: Vec<(Name, usize)> = Vec::new();
        for (name, arity) in connectives {
            let name = name.as_ref();
            if !is_identifier(name) {
                return Err(Error::Signature(format!("`{name}` is not a valid name")));
            }
            if out.iter().any(|(n, _)| &**n == name) {
                return Err(Error::Signature(format!("duplicate connective `{name}`")));
            }
            out.push((Name::from(name), arity));
        }
        Ok(Self { connectives: out })
    }

    pub fn arity(&self, name: &str) -> Option<usize> {
        self.index_of(name).map(|i| self.connectives[i].1)
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.connectives.iter().position(|(n, _)| &**n == name)
    }

    pub fn name(&self, index: usize) -> &Name {
        &self.connectives[index].0
    }

    pub fn len(&self) -> usize {
        self.connectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.connectives.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, usize)> + '_ {
        self.connectives.iter().map(|(n, a)| (n, *a))
    }

    /// Sub-signature keeping only the listed connectives (in this signature's order).
    pub fn restrict(&self, keep: &[&str]) -> Result<Self> {
        for k in keep {
            if self.index_of(k).is_none() {
                return Err(Error::UnknownConnective((*k).to_string()));
            }
        }
        Self::new(
            self.connectives
                .iter()
                .filter(|(n, _)| keep.contains(&&**n))
                .map(|(n, a)| (n.clone(), *a)),
        )
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, arity)) in self.connectives.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{name}/{arity}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(Name),
    /// Connective application; constants have no arguments.
    App(Name, Vec<Formula>),
}

impl Formula {
    pub fn var(name: &str) -> Self {
        Formula::Var(Name::from(name))
    }

    pub fn app(connective: &str, args: Vec<Formula>) -> Self {
        Formula::App(Name::from(connective), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Formula::Var(_))
    }

    /// Variables have depth 0; a constant has depth 1.
    pub fn depth(&self) -> usize {
        match self {
            Formula::Var(_) => 0,
            Formula::App(_, args) => 1 + args.iter().map(Formula::depth).max().unwrap_or(0),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) => 1,
            Formula::App(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    pub fn vars(&self) -> VarSet {
        let mut out = VarSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut VarSet) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Variables in order of first occurrence, left to right.
    pub fn vars_in_order(&self) -> Vec<Name> {
        fn walk(f: &Formula, out: &mut Vec<Name>) {
            match f {
                Formula::Var(v) => {
                    if !out.contains(v) {
                        out.push(v.clone());
                    }
                }
                Formula::App(_, args) => args.iter().for_each(|a| walk(a, out)),
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out
    }

    /// Simultaneous replacement of variables; unmapped variables stay fixed.
    pub fn substitute(&self, sigma: &Substitution) -> Formula {
        match self {
            Formula::Var(v) => sigma.get(v).cloned().unwrap_or_else(|| self.clone()),
            Formula::App(c, args) => Formula::App(
                c.clone(),
                args.iter().map(|a| a.substitute(sigma)).collect(),
            ),
        }
    }

    /// Checks that every application uses a declared connective at its arity.
    pub fn check_signature(&self, sig: &Signature) -> Result<()> {
        match self {
            Formula::Var(_) => Ok(()),
            Formula::App(c, args) => match sig.arity(c) {
                None => Err(Error::UnknownConnective(c.to_string())),
                Some(n) if n != args.len() => Err(Error::SignatureMismatch(format!(
                    "`{c}` has arity {n} but is applied to {} argument(s)",
                    args.len()
                ))),
                Some(_) => args.iter().try_for_each(|a| a.check_signature(sig)),
            },
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => f.write_str(v),
            Formula::App(c, args) if args.is_empty() => f.write_str(c),
            Formula::App(c, args) => {
                write!(f, "{c}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub fn vars_of_set<'a, I>(formulas: I) -> VarSet
where
    I: IntoIterator<Item = &'a Formula>,
{
    let mut out = VarSet::new();
    for f in formulas {
        f.collect_vars(&mut out);
    }
    out
}

/// Renders a premise set as `{a, b}`.
pub fn display_set(formulas: &[Formula]) -> String {
    let items: Vec<String> = formulas.iter().map(ToString::to_string).collect();
    format!("{{{}}}", items.join(", "))
}

/// A fresh variable `stem'k` for the smallest `k >= 1` not in `avoid`.
pub fn fresh_variable(avoid: &VarSet, stem: &str) -> Name {
    (1..)
        .map(|k| format!("{stem}'{k}"))
        .find(|candidate| !avoid.contains(candidate.as_str()))
        .map(Name::from)
        .expect("unbounded counter")
}

/// Finite map from variables to formulas.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<Name, Formula>);

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: &str, image: Formula) -> Self {
        self.insert(var, image);
        self
    }

    pub fn insert(&mut self, var: &str, image: Formula) {
        self.0.insert(Name::from(var), image);
    }

    pub fn get(&self, var: &str) -> Option<&Formula> {
        self.0.get(var)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, &Formula)> {
        self.0.iter()
    }

    pub fn apply_all(&self, formulas: &[Formula]) -> Vec<Formula> {
        formulas.iter().map(|f| f.substitute(self)).collect()
    }
}

impl FromIterator<(Name, Formula)> for Substitution {
    fn from_iter<T: IntoIterator<Item = (Name, Formula)>>(iter: T) -> Self {
        Substitution(iter.into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Formula {
        Formula::var("x")
    }
    fn y() -> Formula {
        Formula::var("y")
    }
    fn z() -> Formula {
        Formula::var("z")
    }

    #[test]
    fn vars_of_examples() {
        let pi = Formula::app("and", vec![x(), Formula::app("or", vec![x(), y()])]);
        let names: Vec<String> = pi.vars().iter().map(|n| n.to_string()).collect();
        assert_eq!(names, ["x", "y"]);
        assert_eq!(x().vars().len(), 1);

        let set = [
            Formula::app("and", vec![x(), y()]),
            Formula::app("not", vec![z()]),
        ];
        let names: Vec<String> = vars_of_set(&set).iter().map(|n| n.to_string()).collect();
        assert_eq!(names, ["x", "y", "z"]);
        assert!(vars_of_set(&[]).is_empty());
    }

    #[test]
    fn substitution_examples() {
        let f = Formula::app("or", vec![x(), y()]);
        let s = Substitution::new().with("x", Formula::app("not", vec![z()]));
        assert_eq!(f.substitute(&s).to_string(), "or(not(z), y)");
        assert_eq!(f.substitute(&Substitution::new()), f);

        let xx = Formula::app("and", vec![x(), x()]);
        let s = Substitution::new().with("x", Formula::app("or", vec![y(), z()]));
        assert_eq!(xx.substitute(&s).to_string(), "and(or(y, z), or(y, z))");
    }

    #[test]
    fn substitution_is_simultaneous() {
        let f = Formula::app("and", vec![x(), y()]);
        let swap = Substitution::new().with("x", y()).with("y", x());
        assert_eq!(f.substitute(&swap).to_string(), "and(y, x)");
    }

    #[test]
    fn depth_of_constants_is_one() {
        assert_eq!(x().depth(), 0);
        assert_eq!(Formula::app("top", vec![]).depth(), 1);
        assert_eq!(
            Formula::app("not", vec![Formula::app("top", vec![])]).depth(),
            2
        );
    }

    #[test]
    fn fresh_variable_avoids_inputs() {
        let avoid: VarSet = ["y'1", "y'2", "x"].into_iter().map(Name::from).collect();
        assert_eq!(&*fresh_variable(&avoid, "y"), "y'3");
        assert_eq!(&*fresh_variable(&VarSet::new(), "y"), "y'1");
    }

    #[test]
    fn signature_rejects_duplicates_and_bad_names() {
        assert!(Signature::new([("and", 2), ("and", 1)]).is_err());
        assert!(Signature::new([("1and", 2)]).is_err());
        let sig = Signature::new([("and", 2), ("or", 2), ("not", 1)]).unwrap();
        assert_eq!(sig.to_string(), "and/2, or/2, not/1");
        assert_eq!(
            sig.restrict(&["not", "and"]).unwrap().to_string(),
            "and/2, not/1"
        );
    }
}
