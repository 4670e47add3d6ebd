use std::collections::BTreeMap;

use crate::algebra::{FiniteAlgebra, FiniteMatrix};
use crate::error::{Error, Result};
use crate::formula::{Formula, Name};

use super::partition::{check_partition_function, PartitionMode, PartitionTerm};
use super::system::{sum_index, DirectSystem, SystemKind};
use super::FiniteSemilattice;

/// A direct system recovered from an algebra, with the element bookkeeping.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub system: DirectSystem,
    /// `(component, local index)` of every input element.
    pub placement: Vec<(usize, usize)>,
    /// Input element index to sum element index; an isomorphism.
    pub embedding: Vec<usize>,
}

/// Splits `algebra` along the partition term `pi`.
pub fn decompose(algebra: &FiniteAlgebra, pi: &Formula) -> Result<Decomposition> {
    let designated = vec![Vec::new(); algebra.size()];
    decompose_with(algebra, pi, &designated, SystemKind::Algebraic)
}

/// Like [`decompose`], restricting the filter to each component. The kind is
/// `l` if that system is valid, else `r` if valid, else algebraic.
pub fn decompose_matrix(matrix: &FiniteMatrix, pi: &Formula) -> Result<Decomposition> {
    let flags: Vec<Vec<usize>> = (0..matrix.algebra().size())
        .map(|a| {
            if matrix.is_designated(a) {
                vec![a]
            } else {
                vec![]
            }
        })
        .collect();
    let mut last = None;
    for kind in [SystemKind::Left, SystemKind::Right, SystemKind::Algebraic] {
        match decompose_with(matrix.algebra(), pi, &flags, kind) {
            Ok(d) => return Ok(d),
            Err(Error::InvalidSystem(v)) if kind != SystemKind::Algebraic => last = Some(v),
            Err(e) => return Err(e),
        }
    }
    Err(Error::InvalidSystem(last.unwrap_or_default()))
}

fn decompose_with(
    algebra: &FiniteAlgebra,
    pi: &Formula,
    designated: &[Vec<usize>],
    kind: SystemKind,
) -> Result<Decomposition> {
    let report = check_partition_function(algebra, pi, None, PartitionMode::Algebraic)?;
    if !report.passed() {
        return Err(Error::NotPartitionFunction(report.failures().join("; ")));
    }
    let n = algebra.size();
    let table = PartitionTerm::new(pi)?.table(algebra)?;
    let dot = |a: usize, b: usize| table[a * n + b];
    let name = |a: usize| algebra.element_name(a);
    let related = |a: usize, b: usize| dot(a, b) == a && dot(b, a) == b;

    // Components in order of their smallest element.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut placement = vec![(0, 0); n];
    for (a, slot) in placement.iter_mut().enumerate() {
        match classes.iter().position(|cls| related(cls[0], a)) {
            Some(c) => {
                *slot = (c, classes[c].len());
                classes[c].push(a);
            }
            None => {
                *slot = (classes.len(), 0);
                classes.push(vec![a]);
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            if related(a, b) != (placement[a].0 == placement[b].0) {
                return Err(Error::Decomposition(format!(
                    "the relation a.b = a, b.a = b is not an equivalence (at {}, {})",
                    name(a),
                    name(b)
                )));
            }
        }
    }

    let k = classes.len();
    let mut leq = vec![false; k * k];
    for a in 0..n {
        for b in 0..n {
            if dot(b, a) == b {
                leq[placement[a].0 * k + placement[b].0] = true;
            }
        }
    }
    for i in 0..k {
        for j in 0..k {
            if i != j && leq[i * k + j] && leq[j * k + i] {
                return Err(Error::Decomposition(format!(
                    "components {i} and {j} are mutually below"
                )));
            }
            for l in 0..k {
                if leq[i * k + j] && leq[j * k + l] && !leq[i * k + l] {
                    return Err(Error::Decomposition(
                        "component order is not transitive".into(),
                    ));
                }
            }
        }
    }
    let mut join = vec![0; k * k];
    for i in 0..k {
        for j in 0..k {
            let upper: Vec<usize> = (0..k)
                .filter(|&u| leq[i * k + u] && leq[j * k + u])
                .collect();
            let least = upper
                .iter()
                .copied()
                .find(|&u| upper.iter().all(|&v| leq[u * k + v]))
                .ok_or_else(|| {
                    Error::Decomposition(format!("components {i} and {j} have no join"))
                })?;
            join[i * k + j] = least;
        }
    }
    let index_names: Vec<Name> = (0..k).map(|i| Name::from(format!("i{i}"))).collect();
    let semilattice = FiniteSemilattice::new(index_names, join)?;

    let mut components = Vec::with_capacity(k);
    for cls in &classes {
        let sub = algebra
            .subalgebra(cls)
            .map_err(|e| Error::Decomposition(format!("component is not a subalgebra: {e}")))?;
        let local: Vec<usize> = cls
            .iter()
            .enumerate()
            .filter(|(_, &a)| !designated[a].is_empty())
            .map(|(i, _)| i)
            .collect();
        components.push(FiniteMatrix::new(sub, &local)?);
    }

    let mut homs = BTreeMap::new();
    for i in 0..k {
        for j in 0..k {
            if !semilattice.leq(i, j) {
                continue;
            }
            let mut map: Option<Vec<usize>> = None;
            for &b in &classes[j] {
                let candidate: Vec<usize> = classes[i]
                    .iter()
                    .map(|&x| {
                        let y = dot(x, b);
                        if placement[y].0 != j {
                            Err(Error::Decomposition(format!(
                                "{}.{} leaves component i{j}",
                                name(x),
                                name(b)
                            )))
                        } else {
                            Ok(placement[y].1)
                        }
                    })
                    .collect::<Result<_>>()?;
                match &map {
                    None => map = Some(candidate),
                    Some(m) if *m != candidate => {
                        return Err(Error::Decomposition(format!(
                            "f_i{i}i{j}(x) = x.b depends on the choice of b (at b = {})",
                            name(b)
                        )))
                    }
                    Some(_) => {}
                }
            }
            homs.insert((i, j), map.expect("components are nonempty"));
        }
    }

    let system = DirectSystem::new(kind, semilattice, components, homs)?;
    let violations = system.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidSystem(violations));
    }
    let sum = system.sum()?;
    let embedding: Vec<usize> = placement
        .iter()
        .map(|&(c, l)| sum_index(&system, c, l))
        .collect();
    let mut hit = vec![false; sum.algebra().size()];
    embedding.iter().for_each(|&e| hit[e] = true);
    if sum.algebra().size() != n || hit.iter().any(|h| !h) {
        return Err(Error::Decomposition(
            "sum of the components is not a bijective image".into(),
        ));
    }
    if !algebra.check_homomorphism(sum.algebra(), &embedding)? {
        return Err(Error::Decomposition(
            "sum of the components differs from the input".into(),
        ));
    }
    Ok(Decomposition {
        system,
        placement,
        embedding,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::parse::parse_formula;

    fn pi() -> Formula {
        parse_formula("and(x, or(x, y))", &bundled::classical_signature()).unwrap()
    }

    #[test]
    fn weak_kleene_has_two_components() {
        let d = decompose(&bundled::weak_kleene(), &pi()).unwrap();
        let sys = &d.system;
        assert_eq!(sys.components.len(), 2);
        let names = |i: usize| -> Vec<String> {
            sys.components[i]
                .algebra()
                .elements()
                .iter()
                .map(|e| e.to_string())
                .collect()
        };
        assert_eq!(names(0), ["0", "1"]);
        assert_eq!(names(1), ["n"]);
        assert!(sys.semilattice.leq(0, 1));
        assert!(!sys.semilattice.leq(1, 0));
        assert_eq!(sys.homs[&(0, 1)], vec![0, 0]);
    }

    #[test]
    fn boolean_algebra_is_one_component() {
        let d = decompose(&bundled::b2_algebra(), &pi()).unwrap();
        assert_eq!(d.system.components.len(), 1);
        assert_eq!(d.embedding, vec![0, 1]);
    }

    #[test]
    fn matrix_kind_is_inferred() {
        let d = decompose_matrix(&bundled::wk_pwk(), &pi()).unwrap();
        assert_eq!(d.system.kind, SystemKind::Left);
        let d = decompose_matrix(&bundled::wk_b3(), &pi()).unwrap();
        assert_eq!(d.system.kind, SystemKind::Right);
        let sum = d.system.sum().unwrap();
        let iso = d.embedding;
        let mut image: Vec<usize> = bundled::wk_b3()
            .designated()
            .iter()
            .map(|&a| iso[a])
            .collect();
        image.sort();
        assert_eq!(image, sum.designated());
    }

    #[test]
    fn rejects_non_partition_terms() {
        let join = parse_formula("or(x, y)", &bundled::classical_signature()).unwrap();
        assert!(matches!(
            decompose(&bundled::b2_algebra(), &join),
            Err(Error::NotPartitionFunction(_))
        ));
    }
}
