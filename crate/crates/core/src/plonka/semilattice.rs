use crate::error::{Error, Result};
use crate::formula::Name;

/// A finite join-semilattice given by its join table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSemilattice {
    names: Vec<Name>,
    join: Vec<usize>,
}

impl FiniteSemilattice {
    /// Checks idempotence, commutativity and associativity exhaustively.
    pub fn new(names: Vec<Name>, join: Vec<usize>) -> Result<Self> {
        let n = names.len();
        if n == 0 {
            return Err(Error::Algebra(
                "a semilattice needs at least one index".into(),
            ));
        }
        for (i, name) in names.iter().enumerate() {
            if names[..i].contains(name) {
                return Err(Error::Algebra(format!("duplicate index `{name}`")));
            }
        }
        if join.len() != n * n || join.iter().any(|&j| j >= n) {
            return Err(Error::Algebra(
                "join table is not a total operation on the indices".into(),
            ));
        }
        let s = Self { names, join };
        for a in 0..n {
            if s.join(a, a) != a {
                return Err(Error::Algebra(format!(
                    "join is not idempotent at `{}`",
                    s.names[a]
                )));
            }
            for b in 0..n {
                if s.join(a, b) != s.join(b, a) {
                    return Err(Error::Algebra(format!(
                        "join is not commutative at `{}`, `{}`",
                        s.names[a], s.names[b]
                    )));
                }
                for c in 0..n {
                    if s.join(a, s.join(b, c)) != s.join(s.join(a, b), c) {
                        return Err(Error::Algebra(format!(
                            "join is not associative at `{}`, `{}`, `{}`",
                            s.names[a], s.names[b], s.names[c]
                        )));
                    }
                }
            }
        }
        Ok(s)
    }

    /// The chain `names[0] < names[1] < ...`.
    pub fn chain(names: Vec<Name>) -> Result<Self> {
        let n = names.len();
        let join = (0..n * n).map(|k| (k / n).max(k % n)).collect();
        Self::new(names, join)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[Name] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &Name {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| &**n == name)
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.names.len() + b]
    }

    pub fn join_all(&self, indices: &[usize]) -> Option<usize> {
        indices.iter().copied().reduce(|a, b| self.join(a, b))
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.join(a, b) == b
    }

    /// Whether `subset` is closed under join.
    pub fn is_subsemilattice(&self, subset: &[usize]) -> bool {
        subset
            .iter()
            .all(|&a| subset.iter().all(|&b| subset.contains(&self.join(a, b))))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(n: &[&str]) -> Vec<Name> {
        n.iter().map(|s| Name::from(*s)).collect()
    }

    #[test]
    fn chain_order() {
        let s = FiniteSemilattice::chain(names(&["a", "b", "c"])).unwrap();
        assert!(s.leq(0, 2));
        assert!(!s.leq(2, 1));
        assert_eq!(s.join_all(&[0, 1, 0]), Some(1));
        assert!(s.is_subsemilattice(&[0, 2]));
    }

    #[test]
    fn rejects_non_semilattices() {
        assert!(FiniteSemilattice::new(names(&["a", "b"]), vec![0, 0, 1, 1]).is_err());
        assert!(FiniteSemilattice::new(names(&["a", "b"]), vec![1, 1, 1, 1]).is_err());
        // diamond: a, b below top c; a∨b = c
        let d = FiniteSemilattice::new(names(&["a", "b", "c"]), vec![0, 2, 2, 2, 1, 2, 2, 2, 2])
            .unwrap();
        assert!(!d.is_subsemilattice(&[0, 1]));
    }
}
