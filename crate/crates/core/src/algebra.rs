//! Finite algebras, logical matrices and the exhaustive-valuation consequence.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{vars_of_set, Formula, Name, Signature};

/// A finite algebra with total operation tables.
///
/// Elements are addressed by index; `tables[c]` is the row-major table of
/// the `c`-th connective of the signature, `size^arity` entries long.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    signature: Signature,
    elements: Vec<Name>,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    pub fn new(signature: Signature, elements: Vec<Name>, tables: Vec<Vec<usize>>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Algebra("the universe is empty".into()));
        }
        for (i, e) in elements.iter().enumerate() {
            if elements[..i].contains(e) {
                return Err(Error::Algebra(format!("duplicate element `{e}`")));
            }
        }
        if tables.len() != signature.len() {
            return Err(Error::Algebra(format!(
                "{} table(s) for {} connective(s)",
                tables.len(),
                signature.len()
            )));
        }
        let n = elements.len();
        for ((name, arity), table) in signature.iter().zip(&tables) {
            let expected = n.pow(arity as u32);
            if table.len() != expected {
                return Err(Error::Algebra(format!(
                    "table `{name}` has {} entries, expected {expected}",
                    table.len()
                )));
            }
            if let Some(bad) = table.iter().find(|&&v| v >= n) {
                return Err(Error::Algebra(format!(
                    "table `{name}` outputs unknown element #{bad}"
                )));
            }
        }
        Ok(Self {
            signature,
            elements,
            tables,
        })
    }

    /// Builds every table from `op(connective index, argument indices)`.
    pub fn from_fn<F>(signature: Signature, elements: Vec<Name>, mut op: F) -> Result<Self>
    where
        F: FnMut(usize, &[usize]) -> usize,
    {
        let n = elements.len();
        let tables = signature
            .iter()
            .enumerate()
            .map(|(c, (_, arity))| {
                let mut out = Vec::with_capacity(n.pow(arity as u32));
                let mut tuples = Tuples::new(n, arity);
                while let Some(args) = tuples.next_tuple() {
                    out.push(op(c, args));
                }
                out
            })
            .collect();
        Self::new(signature, elements, tables)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Name] {
        &self.elements
    }

    pub fn element_name(&self, index: usize) -> &Name {
        &self.elements[index]
    }

    pub fn element_index(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| &**e == name)
    }

    pub fn table(&self, connective: usize) -> &[usize] {
        &self.tables[connective]
    }

    pub fn apply(&self, connective: usize, args: &[usize]) -> usize {
        let n = self.elements.len();
        let index = args.iter().fold(0, |acc, &a| acc * n + a);
        self.tables[connective][index]
    }

    pub fn apply_named(&self, connective: &str, args: &[usize]) -> Result<usize> {
        let c = self
            .signature
            .index_of(connective)
            .ok_or_else(|| Error::UnknownConnective(connective.to_string()))?;
        Ok(self.apply(c, args))
    }

    pub fn evaluate(&self, formula: &Formula, h: &Valuation) -> Result<usize> {
        self.eval_with(formula, &|v| h.get(v))
    }

    pub(crate) fn eval_with(
        &self,
        formula: &Formula,
        lookup: &dyn Fn(&str) -> Option<usize>,
    ) -> Result<usize> {
        match formula {
            Formula::Var(v) => lookup(v).ok_or_else(|| Error::UnboundVariable(v.to_string())),
            Formula::App(c, args) => {
                let ci = self
                    .signature
                    .index_of(c)
                    .ok_or_else(|| Error::UnknownConnective(c.to_string()))?;
                if self.signature.arity(c) != Some(args.len()) {
                    return Err(Error::SignatureMismatch(format!("arity of `{c}`")));
                }
                let vals = args
                    .iter()
                    .map(|a| self.eval_with(a, lookup))
                    .collect::<Result<Vec<_>>>()?;
                Ok(self.apply(ci, &vals))
            }
        }
    }

    /// Values of `formula` under every assignment of `vars`, in odometer order
    /// (last variable fastest). Variables of the formula must lie in `vars`.
    pub fn evaluate_all(&self, formula: &Formula, vars: &[Name]) -> Result<Vec<usize>> {
        let n = self.size();
        let rows = n
            .checked_pow(vars.len() as u32)
            .ok_or_else(|| Error::Algebra("valuation space too large".into()))?;
        self.eval_vector(formula, vars, n, rows)
    }

    fn eval_vector(
        &self,
        formula: &Formula,
        vars: &[Name],
        n: usize,
        rows: usize,
    ) -> Result<Vec<usize>> {
        match formula {
            Formula::Var(v) => {
                let pos = vars
                    .iter()
                    .position(|w| w == v)
                    .ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
                let stride = n.pow((vars.len() - 1 - pos) as u32);
                Ok((0..rows).map(|r| (r / stride) % n).collect())
            }
            Formula::App(c, args) => {
                let ci = self
                    .signature
                    .index_of(c)
                    .ok_or_else(|| Error::UnknownConnective(c.to_string()))?;
                let cols = args
                    .iter()
                    .map(|a| self.eval_vector(a, vars, n, rows))
                    .collect::<Result<Vec<_>>>()?;
                let table = &self.tables[ci];
                Ok((0..rows)
                    .map(|r| table[cols.iter().fold(0, |acc, col| acc * n + col[r])])
                    .collect())
            }
        }
    }

    /// Closure of `seed` under all operations.
    pub fn generated_by(&self, seed: &[usize]) -> Vec<usize> {
        let mut members = vec![false; self.size()];
        seed.iter().for_each(|&s| members[s] = true);
        loop {
            let current: Vec<usize> = (0..self.size()).filter(|&i| members[i]).collect();
            let mut grew = false;
            for (c, (_, arity)) in self.signature.iter().enumerate() {
                let mut idx = vec![0usize; arity];
                loop {
                    let args: Vec<usize> = idx.iter().map(|&i| current[i]).collect();
                    let v = self.apply(c, &args);
                    if !members[v] {
                        members[v] = true;
                        grew = true;
                    }
                    if current.is_empty() || !crate::fragment::advance(&mut idx, current.len()) {
                        break;
                    }
                }
            }
            if !grew {
                return (0..self.size()).filter(|&i| members[i]).collect();
            }
        }
    }

    /// The subalgebra on `universe` (element order kept), if it is closed.
    pub fn subalgebra(&self, universe: &[usize]) -> Result<FiniteAlgebra> {
        let local = |g: usize| universe.iter().position(|&u| u == g);
        let names = universe.iter().map(|&u| self.elements[u].clone()).collect();
        let mut failure = None;
        let sub = FiniteAlgebra::from_fn(self.signature.clone(), names, |c, args| {
            let global: Vec<usize> = args.iter().map(|&a| universe[a]).collect();
            let v = self.apply(c, &global);
            local(v).unwrap_or_else(|| {
                failure.get_or_insert((c, global.clone(), v));
                0
            })
        })?;
        match failure {
            None => Ok(sub),
            Some((c, args, v)) => Err(Error::Algebra(format!(
                "not closed: {}({}) = {}",
                self.signature.name(c),
                args.iter()
                    .map(|&a| self.elements[a].to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                self.elements[v]
            ))),
        }
    }

    pub fn renamed(&self, names: Vec<Name>) -> Result<FiniteAlgebra> {
        if names.len() != self.size() {
            return Err(Error::Algebra("renaming must cover every element".into()));
        }
        FiniteAlgebra::new(self.signature.clone(), names, self.tables.clone())
    }

    /// One-element algebra (every operation is forced).
    pub fn trivial(signature: Signature, element: &str) -> Result<FiniteAlgebra> {
        FiniteAlgebra::from_fn(signature, vec![Name::from(element)], |_, _| 0)
    }

    /// First operation entry where `map` fails to commute, as `(connective, arguments)`.
    pub fn homomorphism_failure(
        &self,
        target: &FiniteAlgebra,
        map: &[usize],
    ) -> Result<Option<(Name, Vec<usize>)>> {
        if self.signature != target.signature {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                self.signature, target.signature
            )));
        }
        if map.len() != self.size() {
            return Err(Error::Mapping(format!(
                "map covers {} of {} elements",
                map.len(),
                self.size()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&m| m >= target.size()) {
            return Err(Error::Mapping(format!(
                "image #{bad} is outside the codomain"
            )));
        }
        for (c, (name, arity)) in self.signature.iter().enumerate() {
            let mut tuples = Tuples::new(self.size(), arity);
            while let Some(args) = tuples.next_tuple() {
                let image: Vec<usize> = args.iter().map(|&a| map[a]).collect();
                if map[self.apply(c, args)] != target.apply(c, &image) {
                    return Ok(Some((name.clone(), args.to_vec())));
                }
            }
        }
        Ok(None)
    }

    pub fn check_homomorphism(&self, target: &FiniteAlgebra, map: &[usize]) -> Result<bool> {
        Ok(self.homomorphism_failure(target, map)?.is_none())
    }

    /// Searches for an isomorphism onto `other` (backtracking over bijections).
    pub fn find_isomorphism(&self, other: &FiniteAlgebra) -> Option<Vec<usize>> {
        if self.signature != other.signature || self.size() != other.size() {
            return None;
        }
        let mut map = vec![usize::MAX; self.size()];
        let mut used = vec![false; self.size()];
        self.extend_iso(other, 0, &mut map, &mut used)
            .then_some(map)
    }

    fn extend_iso(
        &self,
        other: &FiniteAlgebra,
        next: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if next == self.size() {
            return self.check_homomorphism(other, map).unwrap_or(false);
        }
        for cand in 0..other.size() {
            if used[cand] {
                continue;
            }
            map[next] = cand;
            used[cand] = true;
            if self.partial_consistent(other, map, next + 1)
                && self.extend_iso(other, next + 1, map, used)
            {
                return true;
            }
            used[cand] = false;
        }
        map[next] = usize::MAX;
        false
    }

    // Checks entries whose arguments are all among the first `assigned` elements.
    fn partial_consistent(&self, other: &FiniteAlgebra, map: &[usize], assigned: usize) -> bool {
        for (c, (_, arity)) in self.signature.iter().enumerate() {
            let mut tuples = Tuples::new(assigned, arity);
            while let Some(args) = tuples.next_tuple() {
                let out = self.apply(c, args);
                if out < assigned {
                    let image: Vec<usize> = args.iter().map(|&a| map[a]).collect();
                    if map[out] != other.apply(c, &image) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Odometer over `[0, radix)^len`, last position fastest.
pub struct Tuples {
    current: Vec<usize>,
    radix: usize,
    started: bool,
    done: bool,
}

impl Tuples {
    pub fn new(radix: usize, len: usize) -> Self {
        Self {
            current: vec![0; len],
            radix,
            started: false,
            done: radix == 0 && len > 0,
        }
    }

    pub fn next_tuple(&mut self) -> Option<&[usize]> {
        if self.done {
            return None;
        }
        if self.started {
            if !crate::fragment::advance(&mut self.current, self.radix) {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
        }
        Some(&self.current)
    }
}

/// Assignment of algebra elements (by index) to finitely many variables.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Valuation(BTreeMap<Name, usize>);

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, usize)>) -> Self {
        Self(pairs.into_iter().map(|(v, e)| (Name::from(v), e)).collect())
    }

    pub fn get(&self, var: &str) -> Option<usize> {
        self.0.get(var).copied()
    }

    pub fn insert(&mut self, var: Name, element: usize) {
        self.0.insert(var, element);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Name, usize)> {
        self.0.iter().map(|(v, e)| (v, *e))
    }

    /// `x=n, y=0` using the algebra's element names.
    pub fn render(&self, algebra: &FiniteAlgebra) -> String {
        self.iter()
            .map(|(v, e)| format!("{v}={}", algebra.element_name(e)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMatrix {
    algebra: FiniteAlgebra,
    designated: Vec<bool>,
}

impl FiniteMatrix {
    pub fn new(algebra: FiniteAlgebra, designated: &[usize]) -> Result<Self> {
        let mut flags = vec![false; algebra.size()];
        for &d in designated {
            if d >= algebra.size() {
                return Err(Error::Algebra(format!(
                    "designated element #{d} does not exist"
                )));
            }
            flags[d] = true;
        }
        Ok(Self {
            algebra,
            designated: flags,
        })
    }

    pub fn with_designated_names(algebra: FiniteAlgebra, names: &[&str]) -> Result<Self> {
        let idx = names
            .iter()
            .map(|n| {
                algebra
                    .element_index(n)
                    .ok_or_else(|| Error::Algebra(format!("unknown element `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(algebra, &idx)
    }

    pub fn algebra(&self) -> &FiniteAlgebra {
        &self.algebra
    }

    pub fn signature(&self) -> &Signature {
        self.algebra.signature()
    }

    pub fn is_designated(&self, element: usize) -> bool {
        self.designated[element]
    }

    pub fn designated(&self) -> Vec<usize> {
        (0..self.algebra.size())
            .filter(|&i| self.designated[i])
            .collect()
    }

    pub fn designated_names(&self) -> Vec<Name> {
        self.designated()
            .into_iter()
            .map(|i| self.algebra.element_name(i).clone())
            .collect()
    }

    /// Every element designated: the matrix constrains nothing.
    pub fn designates_everything(&self) -> bool {
        self.designated.iter().all(|&d| d)
    }

    /// First valuation over `vars(Γ ∪ {φ})` designating all premises but not `φ`.
    pub fn countermodel(&self, premises: &[&Formula], conclusion: &Formula) -> Option<Valuation> {
        let vars: Vec<Name> = vars_of_set(premises.iter().copied().chain([conclusion]))
            .into_iter()
            .collect();
        let mut tuples = Tuples::new(self.algebra.size(), vars.len());
        while let Some(values) = tuples.next_tuple() {
            let lookup = |v: &str| vars.iter().position(|w| &**w == v).map(|i| values[i]);
            let designated = |f: &Formula| {
                let value = self
                    .algebra
                    .eval_with(f, &lookup)
                    .expect("formula outside the matrix signature");
                self.designated[value]
            };
            if premises.iter().all(|p| designated(p)) && !designated(conclusion) {
                return Some(Valuation(
                    vars.iter().cloned().zip(values.iter().copied()).collect(),
                ));
            }
        }
        None
    }
}

impl fmt::Display for FiniteMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self
            .algebra
            .elements()
            .iter()
            .enumerate()
            .map(|(i, e)| {
                if self.designated[i] {
                    format!("[{e}]")
                } else {
                    e.to_string()
                }
            })
            .collect();
        write!(f, "<{}>", names.join(" "))
    }
}

/// A nonempty family of matrices over one signature.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixClass {
    matrices: Vec<FiniteMatrix>,
}

impl MatrixClass {
    pub fn new(matrices: Vec<FiniteMatrix>) -> Result<Self> {
        let first = matrices
            .first()
            .ok_or_else(|| Error::Algebra("a matrix class needs at least one matrix".into()))?;
        if let Some(other) = matrices.iter().find(|m| m.signature() != first.signature()) {
            return Err(Error::SignatureMismatch(format!(
                "{} vs {}",
                first.signature(),
                other.signature()
            )));
        }
        Ok(Self { matrices })
    }

    pub fn single(matrix: FiniteMatrix) -> Self {
        Self {
            matrices: vec![matrix],
        }
    }

    pub fn matrices(&self) -> &[FiniteMatrix] {
        &self.matrices
    }

    pub fn signature(&self) -> &Signature {
        self.matrices[0].signature()
    }

    pub fn with(&self, extra: FiniteMatrix) -> Result<Self> {
        let mut m = self.matrices.clone();
        m.push(extra);
        Self::new(m)
    }

    /// `Γ ⊢_M φ`: every valuation designating all of Γ designates φ, in every matrix.
    ///
    /// Formulas must be over the class signature; otherwise this panics.
    pub fn entails(&self, premises: &[Formula], conclusion: &Formula) -> bool {
        let refs: Vec<&Formula> = premises.iter().collect();
        self.entails_refs(&refs, conclusion)
    }

    pub fn entails_refs(&self, premises: &[&Formula], conclusion: &Formula) -> bool {
        self.countermodel(premises, conclusion).is_none()
    }

    /// Index of the first falsifying matrix with its valuation.
    pub fn countermodel(
        &self,
        premises: &[&Formula],
        conclusion: &Formula,
    ) -> Option<(usize, Valuation)> {
        self.matrices
            .iter()
            .enumerate()
            .find_map(|(i, m)| m.countermodel(premises, conclusion).map(|h| (i, h)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::parse::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text, &bundled::classical_signature()).unwrap()
    }

    #[test]
    fn weak_kleene_lookups() {
        let wk = bundled::weak_kleene();
        let e = |n: &str| wk.element_index(n).unwrap();
        let h = Valuation::from_pairs([("x", e("1")), ("y", e("n"))]);
        assert_eq!(wk.evaluate(&f("and(x, y)"), &h).unwrap(), e("n"));
        let h = Valuation::from_pairs([("x", e("0")), ("y", e("n"))]);
        assert_eq!(wk.evaluate(&f("or(x, y)"), &h).unwrap(), e("n"));
        let h = Valuation::from_pairs([("x", e("n"))]);
        assert_eq!(wk.evaluate(&f("not(x)"), &h).unwrap(), e("n"));
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let wk = bundled::weak_kleene();
        let err = wk.evaluate(&f("and(x, y)"), &Valuation::from_pairs([("x", 0)]));
        assert!(matches!(err, Err(Error::UnboundVariable(v)) if v == "y"));
    }

    #[test]
    fn vector_evaluation_matches_pointwise() {
        let wk = bundled::weak_kleene();
        let phi = f("or(and(x, not(y)), z)");
        let vars: Vec<Name> = ["x", "y", "z"].into_iter().map(Name::from).collect();
        let column = wk.evaluate_all(&phi, &vars).unwrap();
        let mut tuples = Tuples::new(3, 3);
        let mut row = 0;
        while let Some(t) = tuples.next_tuple() {
            let h = Valuation::from_pairs([("x", t[0]), ("y", t[1]), ("z", t[2])]);
            assert_eq!(column[row], wk.evaluate(&phi, &h).unwrap());
            row += 1;
        }
        assert_eq!(row, 27);
    }

    #[test]
    fn entailment_examples() {
        let cl = MatrixClass::single(bundled::b2_matrix());
        assert!(cl.entails(&[f("x")], &f("or(x, y)")));

        let b3 = MatrixClass::single(bundled::wk_b3());
        assert!(b3.entails(&[f("x"), f("not(x)")], &f("y")));

        let pwk = MatrixClass::single(bundled::wk_pwk());
        let refs = [&f("x"), &f("not(x)")];
        let (m, h) = pwk.countermodel(&refs, &f("y")).unwrap();
        assert_eq!(m, 0);
        assert_eq!(h.render(pwk.matrices()[0].algebra()), "x=n, y=0");
    }

    #[test]
    fn empty_filter_and_full_filter() {
        let b2 = bundled::b2_algebra();
        let empty = MatrixClass::single(FiniteMatrix::new(b2.clone(), &[]).unwrap());
        assert!(!empty.entails(&[], &f("x")));
        assert!(!empty.entails(&[], &f("or(x, not(x))")));
        assert!(empty.entails(&[f("x")], &f("y")));

        let full = MatrixClass::single(FiniteMatrix::new(b2, &[0, 1]).unwrap());
        assert!(full.entails(&[], &f("and(x, not(x))")));
    }

    #[test]
    fn homomorphism_examples() {
        let b2 = bundled::b2_algebra();
        assert!(b2.check_homomorphism(&b2, &[0, 1]).unwrap());

        let triv = FiniteAlgebra::trivial(b2.signature().clone(), "n").unwrap();
        assert!(b2.check_homomorphism(&triv, &[0, 0]).unwrap());

        let neg = b2.subalgebra(&[0, 1]).unwrap();
        let sig_not = neg.signature().restrict(&["not"]).unwrap();
        let b2_not =
            FiniteAlgebra::from_fn(sig_not, b2.elements().to_vec(), |_, a| 1 - a[0]).unwrap();
        assert!(b2_not.check_homomorphism(&b2_not, &[1, 0]).unwrap());

        let sig_and = b2.signature().restrict(&["and"]).unwrap();
        let b2_and =
            FiniteAlgebra::from_fn(sig_and, b2.elements().to_vec(), |_, a| a[0] & a[1]).unwrap();
        // The constant map onto the idempotent 1 commutes with meet.
        assert!(b2_and.check_homomorphism(&b2_and, &[1, 1]).unwrap());
        // The swap does not: 0∧1 = 0 ↦ 1 but 1∧0 = 0.
        let fail = b2_and.homomorphism_failure(&b2_and, &[1, 0]).unwrap();
        assert_eq!(fail, Some((Name::from("and"), vec![0, 1])));
    }

    #[test]
    fn homomorphism_errors() {
        let b2 = bundled::b2_algebra();
        assert!(b2.check_homomorphism(&b2, &[0]).is_err());
        assert!(b2.check_homomorphism(&b2, &[0, 5]).is_err());
        let other = b2.renamed(vec!["a".into(), "b".into()]).unwrap();
        let sig = b2.signature().restrict(&["and"]).unwrap();
        let small = FiniteAlgebra::trivial(sig, "t").unwrap();
        assert!(other.check_homomorphism(&small, &[0, 0]).is_err());
    }

    #[test]
    fn isomorphism_search() {
        let wk = bundled::weak_kleene();
        let shuffled = FiniteAlgebra::from_fn(
            wk.signature().clone(),
            vec!["a".into(), "b".into(), "c".into()],
            |c, args| {
                // a=1, b=0, c=n
                let to = [1usize, 0, 2]; // new -> old: a->1(idx2)...
                let old_of = |i: usize| [2usize, 0, 1][i];
                let new_of = |o: usize| [1usize, 2, 0][o];
                let _ = to;
                let old: Vec<usize> = args.iter().map(|&a| old_of(a)).collect();
                new_of(wk.apply(c, &old))
            },
        )
        .unwrap();
        let iso = wk.find_isomorphism(&shuffled).unwrap();
        assert!(wk.check_homomorphism(&shuffled, &iso).unwrap());
        assert!(wk.find_isomorphism(&bundled::b2_algebra()).is_none());
    }

    #[test]
    fn subalgebra_closure() {
        let wk = bundled::weak_kleene();
        let n = wk.element_index("n").unwrap();
        assert_eq!(wk.generated_by(&[n]), vec![n]);
        let one = wk.element_index("1").unwrap();
        let gen = wk.generated_by(&[one]);
        assert_eq!(gen.len(), 2);
        assert!(wk.subalgebra(&gen).is_ok());
        assert!(wk.subalgebra(&[n, one]).is_err());
    }
}
