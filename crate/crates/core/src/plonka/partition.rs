use std::fmt;

use serde::Serialize;

use crate::algebra::{FiniteAlgebra, Tuples};
use crate::error::{Error, Result};
use crate::formula::{Formula, Name, Substitution};
use crate::logic::Logic;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionMode {
    Algebraic,
    #[serde(rename = "l")]
    Left,
    #[serde(rename = "r")]
    Right,
}

impl std::str::FromStr for PartitionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "algebraic" => Ok(PartitionMode::Algebraic),
            "l" => Ok(PartitionMode::Left),
            "r" => Ok(PartitionMode::Right),
            other => Err(Error::Fragment(format!("unknown partition mode `{other}`"))),
        }
    }
}

/// A binary term `x·y`, its variables taken in order of first occurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionTerm {
    term: Formula,
    first: Name,
    second: Name,
}

impl PartitionTerm {
    pub fn new(term: &Formula) -> Result<Self> {
        let vars = term.vars_in_order();
        if vars.len() != 2 {
            return Err(Error::NotBivariate(format!(
                "{term} has {} variable(s)",
                vars.len()
            )));
        }
        Ok(Self {
            term: term.clone(),
            first: vars[0].clone(),
            second: vars[1].clone(),
        })
    }

    pub fn term(&self) -> &Formula {
        &self.term
    }

    /// `π(a, b)` as a formula.
    pub fn instantiate(&self, a: &Formula, b: &Formula) -> Formula {
        let sigma = Substitution::new()
            .with(&self.first, a.clone())
            .with(&self.second, b.clone());
        self.term.substitute(&sigma)
    }

    /// The table of `a·b`, row-major.
    pub fn table(&self, algebra: &FiniteAlgebra) -> Result<Vec<usize>> {
        let vars = [self.first.clone(), self.second.clone()];
        algebra.evaluate_all(&self.term, &vars)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    /// `P1` .. `P5`, with the connective for `P4`/`P5`, e.g. `P5[not]`.
    pub axiom: String,
    /// Named elements of the first failing instance.
    pub counterexample: Option<Vec<(String, Name)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleCheck {
    pub claim: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionReport {
    pub term: String,
    pub mode: PartitionMode,
    pub axioms: Vec<AxiomCheck>,
    pub oracle: Vec<OracleCheck>,
}

impl PartitionReport {
    pub fn passed(&self) -> bool {
        self.axioms.iter().all(|a| a.counterexample.is_none())
            && self.oracle.iter().all(|o| o.holds)
    }

    pub fn failures(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .axioms
            .iter()
            .filter_map(|a| {
                a.counterexample.as_ref().map(|cx| {
                    let at: Vec<String> = cx.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    format!("{} at {}", a.axiom, at.join(", "))
                })
            })
            .collect();
        out.extend(
            self.oracle
                .iter()
                .filter(|o| !o.holds)
                .map(|o| o.claim.clone()),
        );
        out
    }
}

impl fmt::Display for PartitionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "partition term {} ({} mode)",
            self.term,
            mode_name(self.mode)
        )?;
        for a in &self.axioms {
            match &a.counterexample {
                None => writeln!(f, "  {:<10} ok", a.axiom)?,
                Some(cx) => {
                    let at: Vec<String> = cx.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    writeln!(f, "  {:<10} FAIL at {}", a.axiom, at.join(", "))?
                }
            }
        }
        for o in &self.oracle {
            writeln!(
                f,
                "  {:<10} {}",
                if o.holds { "ok" } else { "FAIL" },
                o.claim
            )?;
        }
        Ok(())
    }
}

fn mode_name(mode: PartitionMode) -> &'static str {
    match mode {
        PartitionMode::Algebraic => "algebraic",
        PartitionMode::Left => "l",
        PartitionMode::Right => "r",
    }
}

/// Checks P1–P5 on `algebra` and, in modes `l`/`r`, the entailments
/// required of `oracle`.
///
/// P4 and P5 are checked for every connective of positive arity; P5 is read
/// left-associated, `((b·a₁)·a₂)…`.
pub fn check_partition_function(
    algebra: &FiniteAlgebra,
    pi: &Formula,
    oracle: Option<&Logic>,
    mode: PartitionMode,
) -> Result<PartitionReport> {
    let term = PartitionTerm::new(pi)?;
    pi.check_signature(algebra.signature())?;
    let n = algebra.size();
    let dot_table = term.table(algebra)?;
    let dot = |a: usize, b: usize| dot_table[a * n + b];
    let name = |e: usize| algebra.element_name(e).clone();
    let mut axioms = Vec::new();

    let p1 = (0..n).find(|&a| dot(a, a) != a);
    axioms.push(AxiomCheck {
        axiom: "P1".into(),
        counterexample: p1.map(|a| vec![("a".into(), name(a))]),
    });

    let triple = |law: &dyn Fn(usize, usize, usize) -> bool| {
        let mut t = Tuples::new(n, 3);
        while let Some(v) = t.next_tuple() {
            if !law(v[0], v[1], v[2]) {
                return Some(vec![
                    ("a".into(), name(v[0])),
                    ("b".into(), name(v[1])),
                    ("c".into(), name(v[2])),
                ]);
            }
        }
        None
    };
    axioms.push(AxiomCheck {
        axiom: "P2".into(),
        counterexample: triple(&|a, b, c| dot(a, dot(b, c)) == dot(dot(a, b), c)),
    });
    axioms.push(AxiomCheck {
        axiom: "P3".into(),
        counterexample: triple(&|a, b, c| dot(a, dot(b, c)) == dot(a, dot(c, b))),
    });

    for (c, (g, arity)) in algebra.signature().iter().enumerate() {
        if arity == 0 {
            continue;
        }
        let mut p4 = None;
        let mut p5 = None;
        let mut t = Tuples::new(n, arity + 1);
        while let Some(v) = t.next_tuple() {
            let (b, args) = (v[0], &v[1..]);
            let g_args = algebra.apply(c, args);
            if p4.is_none() {
                let pushed: Vec<usize> = args.iter().map(|&a| dot(a, b)).collect();
                if dot(g_args, b) != algebra.apply(c, &pushed) {
                    p4 = Some(v.to_vec());
                }
            }
            if p5.is_none() {
                let folded = args.iter().fold(b, |acc, &a| dot(acc, a));
                if dot(b, g_args) != folded {
                    p5 = Some(v.to_vec());
                }
            }
            if p4.is_some() && p5.is_some() {
                break;
            }
        }
        let label = |v: Vec<usize>| {
            let mut out = vec![("b".to_string(), name(v[0]))];
            out.extend(
                v[1..]
                    .iter()
                    .enumerate()
                    .map(|(i, &a)| (format!("a{}", i + 1), name(a))),
            );
            out
        };
        axioms.push(AxiomCheck {
            axiom: format!("P4[{g}]"),
            counterexample: p4.map(label),
        });
        axioms.push(AxiomCheck {
            axiom: format!("P5[{g}]"),
            counterexample: p5.map(label),
        });
    }

    let mut oracle_checks = Vec::new();
    if let Some(logic) = oracle {
        let x = Formula::Var(term.first.clone());
        let y = Formula::Var(term.second.clone());
        let xy = term.term.clone();
        let mut claim = |premises: Vec<Formula>, conclusion: &Formula| {
            let holds = logic.entails(&premises, conclusion);
            let shown: Vec<String> = premises.iter().map(ToString::to_string).collect();
            oracle_checks.push(OracleCheck {
                claim: format!("{} |- {conclusion} in {}", shown.join(", "), logic.label()),
                holds,
            });
        };
        match mode {
            PartitionMode::Algebraic => {}
            PartitionMode::Left => claim(vec![x.clone()], &xy),
            PartitionMode::Right => {
                claim(vec![x.clone(), y.clone()], &xy);
                claim(vec![xy.clone()], &x);
            }
        }
    }

    Ok(PartitionReport {
        term: pi.to_string(),
        mode,
        axioms,
        oracle: oracle_checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MatrixClass;
    use crate::bundled;
    use crate::parse::parse_formula;

    fn f(text: &str) -> Formula {
        parse_formula(text, &bundled::classical_signature()).unwrap()
    }

    #[test]
    fn absorption_term_on_b2_and_wk() {
        let cl = Logic::from_matrices("CL", MatrixClass::single(bundled::b2_matrix()));
        let r = check_partition_function(
            &bundled::b2_algebra(),
            &f("and(x, or(x, y))"),
            Some(&cl.left()),
            PartitionMode::Left,
        )
        .unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.oracle.len(), 1);
        let r = check_partition_function(
            &bundled::weak_kleene(),
            &f("and(x, or(x, y))"),
            None,
            PartitionMode::Algebraic,
        )
        .unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.axioms.len(), 3 + 2 * 3);
    }

    #[test]
    fn join_is_not_a_partition_function_on_b2() {
        let r = check_partition_function(
            &bundled::b2_algebra(),
            &f("or(x, y)"),
            None,
            PartitionMode::Algebraic,
        )
        .unwrap();
        assert!(!r.passed());
        let p5 = r.axioms.iter().find(|a| a.axiom == "P5[not]").unwrap();
        let cx = p5.counterexample.as_ref().unwrap();
        assert_eq!(
            cx,
            &vec![
                ("b".to_string(), Name::from("0")),
                ("a1".to_string(), Name::from("0"))
            ]
        );
        assert!(r
            .failures()
            .iter()
            .any(|f| f.starts_with("P5[not] at b=0, a1=0")));
    }

    #[test]
    fn right_mode_oracle_checks() {
        let cl = Logic::from_matrices("CL", MatrixClass::single(bundled::b2_matrix()));
        let r = check_partition_function(
            &bundled::b2_algebra(),
            &f("and(x, or(x, y))"),
            Some(&cl.right()),
            PartitionMode::Right,
        )
        .unwrap();
        assert_eq!(r.oracle.len(), 2);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn variable_order_is_first_occurrence() {
        let t = PartitionTerm::new(&f("and(y, or(y, x))")).unwrap();
        assert_eq!(
            t.instantiate(&f("a"), &f("b")).to_string(),
            "and(a, or(a, b))"
        );
        assert!(PartitionTerm::new(&f("and(x, x)")).is_err());
    }
}
