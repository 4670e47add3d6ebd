use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::algebra::{FiniteAlgebra, FiniteMatrix};
use crate::error::{Error, Result};
use crate::formula::Name;

use super::FiniteSemilattice;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SystemKind {
    Algebraic,
    #[serde(rename = "l")]
    Left,
    #[serde(rename = "r")]
    Right,
}

impl fmt::Display for SystemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemKind::Algebraic => "algebraic",
            SystemKind::Left => "l",
            SystemKind::Right => "r",
        })
    }
}

impl std::str::FromStr for SystemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "algebraic" => Ok(SystemKind::Algebraic),
            "l" => Ok(SystemKind::Left),
            "r" => Ok(SystemKind::Right),
            other => Err(Error::Load {
                line: 0,
                message: format!("unknown system kind `{other}`"),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Rule {
    SharedSignature,
    DisjointUniverses,
    MissingHomomorphism,
    UnexpectedHomomorphism,
    BadMapping,
    NotHomomorphism,
    IdentityOnDiagonal,
    Composition,
    FilterPreserved,
    PositiveIndicesClosed,
    FilterReflected,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::SharedSignature => "components share the signature",
            Rule::DisjointUniverses => "universes are disjoint",
            Rule::MissingHomomorphism => "f_ij exists for i <= j",
            Rule::UnexpectedHomomorphism => "f_ij only for i <= j",
            Rule::BadMapping => "f_ij maps A_i into A_j",
            Rule::NotHomomorphism => "f_ij is a homomorphism",
            Rule::IdentityOnDiagonal => "f_ii is the identity",
            Rule::Composition => "f_ik = f_jk . f_ij",
            Rule::FilterPreserved => "f_ij[F_i] ⊆ F_j",
            Rule::PositiveIndicesClosed => "I+ is a sub-semilattice",
            Rule::FilterReflected => "f_ij^-1[F_j] = F_i when F_j is nonempty",
        })
    }
}

/// One failed invariant with a concrete witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub rule: Rule,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.detail)
    }
}

/// A semilattice-indexed family of matrices with connecting maps.
///
/// For the algebraic kind designated sets are carried but ignored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectSystem {
    pub kind: SystemKind,
    pub semilattice: FiniteSemilattice,
    pub components: Vec<FiniteMatrix>,
    /// `homs[(i, j)]` is `f_ij` as element indices; missing `f_ii` default to the identity.
    pub homs: BTreeMap<(usize, usize), Vec<usize>>,
}

impl DirectSystem {
    pub fn new(
        kind: SystemKind,
        semilattice: FiniteSemilattice,
        components: Vec<FiniteMatrix>,
        mut homs: BTreeMap<(usize, usize), Vec<usize>>,
    ) -> Result<Self> {
        if components.len() != semilattice.len() {
            return Err(Error::Algebra(format!(
                "{} component(s) for {} index(es)",
                components.len(),
                semilattice.len()
            )));
        }
        for (i, c) in components.iter().enumerate() {
            homs.entry((i, i))
                .or_insert_with(|| (0..c.algebra().size()).collect());
        }
        Ok(Self {
            kind,
            semilattice,
            components,
            homs,
        })
    }

    fn index_name(&self, i: usize) -> &Name {
        self.semilattice.name(i)
    }

    fn element(&self, i: usize, a: usize) -> String {
        format!(
            "{}.{}",
            self.index_name(i),
            self.components[i].algebra().element_name(a)
        )
    }

    /// Every violated invariant, each with its first witness.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.components.len();
        let sig = self.components[0].signature();

        for (i, c) in self.components.iter().enumerate() {
            if c.signature() != sig {
                push(
                    &mut out,
                    Rule::SharedSignature,
                    format!(
                        "component `{}` has signature {}",
                        self.index_name(i),
                        c.signature()
                    ),
                );
            }
        }
        let mut seen: Vec<String> = Vec::new();
        for i in 0..n {
            for a in 0..self.components[i].algebra().size() {
                let tagged = self.element(i, a);
                if seen.contains(&tagged) {
                    push(
                        &mut out,
                        Rule::DisjointUniverses,
                        format!("`{tagged}` occurs twice"),
                    );
                }
                seen.push(tagged);
            }
        }
        if !out.is_empty() {
            return out;
        }

        for (&(i, j), map) in &self.homs {
            if i >= n || j >= n || !self.semilattice.leq(i, j) {
                push(
                    &mut out,
                    Rule::UnexpectedHomomorphism,
                    format!("map given for ({i}, {j}) which are not ordered"),
                );
                continue;
            }
            let (src, dst) = (self.components[i].algebra(), self.components[j].algebra());
            match src.homomorphism_failure(dst, map) {
                Err(e) => push(
                    &mut out,
                    Rule::BadMapping,
                    format!("f_{}{}: {e}", self.index_name(i), self.index_name(j)),
                ),
                Ok(Some((c, args))) => {
                    let shown: Vec<String> = args.iter().map(|&a| self.element(i, a)).collect();
                    push(
                        &mut out,
                        Rule::NotHomomorphism,
                        format!(
                            "f_{}{} fails at {c}({})",
                            self.index_name(i),
                            self.index_name(j),
                            shown.join(", ")
                        ),
                    )
                }
                Ok(None) => {}
            }
        }
        for i in 0..n {
            for j in 0..n {
                if self.semilattice.leq(i, j) && !self.homs.contains_key(&(i, j)) {
                    push(
                        &mut out,
                        Rule::MissingHomomorphism,
                        format!("no f_{}{}", self.index_name(i), self.index_name(j)),
                    );
                }
            }
            if let Some(map) = self.homs.get(&(i, i)) {
                if let Some(a) = (0..map.len()).find(|&a| map[a] != a) {
                    push(
                        &mut out,
                        Rule::IdentityOnDiagonal,
                        format!("f_{0}{0} moves {1}", self.index_name(i), self.element(i, a)),
                    );
                }
            }
        }
        if out
            .iter()
            .any(|v| matches!(v.rule, Rule::MissingHomomorphism | Rule::BadMapping))
        {
            return out;
        }

        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let sl = &self.semilattice;
                    if !(sl.leq(i, j) && sl.leq(j, k)) {
                        continue;
                    }
                    let (fij, fjk, fik) = (
                        &self.homs[&(i, j)],
                        &self.homs[&(j, k)],
                        &self.homs[&(i, k)],
                    );
                    if let Some(a) = (0..fij.len()).find(|&a| fik[a] != fjk[fij[a]]) {
                        push(
                            &mut out,
                            Rule::Composition,
                            format!(
                                "at {} for {} <= {} <= {}",
                                self.element(i, a),
                                self.index_name(i),
                                self.index_name(j),
                                self.index_name(k)
                            ),
                        );
                    }
                }
            }
        }

        match self.kind {
            SystemKind::Algebraic => {}
            SystemKind::Left => {
                for (&(i, j), map) in &self.homs {
                    let (mi, mj) = (&self.components[i], &self.components[j]);
                    if let Some(a) = mi
                        .designated()
                        .into_iter()
                        .find(|&a| !mj.is_designated(map[a]))
                    {
                        push(
                            &mut out,
                            Rule::FilterPreserved,
                            format!(
                                "{} is designated but f_{}{} sends it to {}",
                                self.element(i, a),
                                self.index_name(i),
                                self.index_name(j),
                                self.element(j, map[a])
                            ),
                        );
                    }
                }
            }
            SystemKind::Right => {
                let positive: Vec<usize> = (0..n)
                    .filter(|&i| !self.components[i].designated().is_empty())
                    .collect();
                'outer: for &a in &positive {
                    for &b in &positive {
                        let j = self.semilattice.join(a, b);
                        if !positive.contains(&j) {
                            push(
                                &mut out,
                                Rule::PositiveIndicesClosed,
                                format!(
                                    "{} v {} = {} has an empty filter",
                                    self.index_name(a),
                                    self.index_name(b),
                                    self.index_name(j)
                                ),
                            );
                            break 'outer;
                        }
                    }
                }
                for (&(i, j), map) in &self.homs {
                    let (mi, mj) = (&self.components[i], &self.components[j]);
                    if mj.designated().is_empty() {
                        continue;
                    }
                    if let Some(a) =
                        (0..map.len()).find(|&a| mj.is_designated(map[a]) != mi.is_designated(a))
                    {
                        push(
                            &mut out,
                            Rule::FilterReflected,
                            format!(
                                "f_{}{}({}) = {} but {} is {}designated",
                                self.index_name(i),
                                self.index_name(j),
                                self.element(i, a),
                                self.element(j, map[a]),
                                self.element(i, a),
                                if mi.is_designated(a) { "" } else { "not " }
                            ),
                        );
                    }
                }
            }
        }
        out
    }

    /// The Płonka sum; elements are named `i.a`.
    pub fn sum(&self) -> Result<FiniteMatrix> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidSystem(violations));
        }
        let sig = self.components[0].signature().clone();
        if let Some((name, _)) = sig.iter().find(|(_, arity)| *arity == 0) {
            return Err(Error::NullaryInSum(name.to_string()));
        }
        let mut owner: Vec<(usize, usize)> = Vec::new();
        let mut names: Vec<Name> = Vec::new();
        let mut designated = Vec::new();
        for (i, c) in self.components.iter().enumerate() {
            for a in 0..c.algebra().size() {
                if c.is_designated(a) {
                    designated.push(owner.len());
                }
                owner.push((i, a));
                names.push(Name::from(self.element(i, a)));
            }
        }
        let offsets: Vec<usize> = self
            .components
            .iter()
            .scan(0, |acc, c| {
                let start = *acc;
                *acc += c.algebra().size();
                Some(start)
            })
            .collect();
        let algebra = FiniteAlgebra::from_fn(sig, names, |c, args| {
            let idx: Vec<usize> = args.iter().map(|&g| owner[g].0).collect();
            let j = self.semilattice.join_all(&idx).expect("positive arity");
            let pushed: Vec<usize> = args
                .iter()
                .map(|&g| {
                    let (i, a) = owner[g];
                    self.homs[&(i, j)][a]
                })
                .collect();
            offsets[j] + self.components[j].algebra().apply(c, &pushed)
        })?;
        FiniteMatrix::new(algebra, &designated)
    }
}

fn push(out: &mut Vec<Violation>, rule: Rule, detail: String) {
    out.push(Violation { rule, detail });
}

/// Sum element index of `(component, element)`.
pub fn sum_index(system: &DirectSystem, component: usize, element: usize) -> usize {
    system.components[..component]
        .iter()
        .map(|c| c.algebra().size())
        .sum::<usize>()
        + element
}
