//! The three lattice pictures, rebuilt and checked claim by claim.
//!
//! Figure 1 is the lattice of an antitheorem-free base (the `∧,∨` reduct of
//! the two-element Boolean matrix), figure 2 the general lattice for a base
//! with antitheorems, run on classical logic, and figure 3 the classical
//! lattice itself, cross-checked against the chain matrices.

use std::fmt;

use serde::Serialize;

use crate::algebra::MatrixClass;
use crate::bundled;
use crate::checks::fragment_antitheorem;
use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::fragment::FragmentSpec;
use crate::lattice::{build_lattice_with, LatticeReport, NodeKind, Relation, Sweep};
use crate::logic::{AntitheoremStatus, Logic};
use crate::parse::{parse_formula, parse_formula_list};
use crate::plonka::canonical_chain_matrix;
use crate::transforms::VISequence;
use crate::witness::{self, resolve_oracle, witness_suite, WitnessReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Claim {
    pub name: String,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainCheck {
    pub sequence: String,
    pub checked: u64,
    pub disagreements: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FigureReport {
    pub figure: u8,
    pub title: String,
    pub lattice: LatticeReport,
    pub witnesses: WitnessReport,
    pub chain: Vec<ChainCheck>,
    pub claims: Vec<Claim>,
}

impl FigureReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> Vec<&Claim> {
        self.claims.iter().filter(|c| !c.holds).collect()
    }

    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.claims.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for FigureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "figure {}: {}", self.figure, self.title)?;
        writeln!(f)?;
        write!(f, "{}", self.lattice)?;
        writeln!(f)?;
        write!(f, "{}", self.witnesses)?;
        if !self.chain.is_empty() {
            writeln!(f)?;
            writeln!(f, "chain matrices against derived logics:")?;
            for c in &self.chain {
                writeln!(
                    f,
                    "  {:<4} {} disagreements in {} inferences",
                    c.sequence, c.disagreements, c.checked
                )?;
            }
        }
        writeln!(f)?;
        writeln!(f, "claims:")?;
        for c in &self.claims {
            writeln!(
                f,
                "  {} {}: {}",
                if c.holds { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        let failed = self.failures().len();
        writeln!(
            f,
            "{} of {} claims confirmed",
            self.claims.len() - failed,
            self.claims.len()
        )
    }
}

fn classical() -> Logic {
    Logic::from_matrices("CL", MatrixClass::single(bundled::b2_matrix()))
}

fn and_or() -> Logic {
    Logic::from_matrices(
        "B2[and,or]",
        MatrixClass::single(bundled::b2_andor_matrix()),
    )
}

fn absorption(base: &Logic) -> Formula {
    parse_formula("and(x, or(x, y))", base.signature()).expect("term in signature")
}

struct Builder<'a> {
    base: &'a Logic,
    lattice: LatticeReport,
    witnesses: WitnessReport,
    claims: Vec<Claim>,
}

impl Builder<'_> {
    fn push(&mut self, name: &str, holds: bool, detail: impl Into<String>) {
        self.claims.push(Claim {
            name: name.to_string(),
            holds,
            detail: detail.into(),
        });
    }

    fn relation(&self, a: &str, b: &str) -> Relation {
        self.lattice
            .verdict(a, b)
            .map(|v| v.relation)
            .expect("both nodes computed")
    }

    /// All witness claims about `relation` pass; with a summary.
    fn witnessed(&self, relation: &str) -> (bool, String) {
        let claims = self.witnesses.about(relation);
        let ok = !claims.is_empty() && claims.iter().all(|c| c.passed());
        let failed: Vec<String> = claims
            .iter()
            .filter(|c| !c.passed())
            .map(|c| c.to_string())
            .collect();
        let detail = if failed.is_empty() {
            match claims.len() {
                1 => "1 witness check passes".to_string(),
                n => format!("{n} witness checks pass"),
            }
        } else {
            failed.join("; ")
        };
        (ok, detail)
    }

    /// A relation read off the lattice, supported by witnesses.
    fn relation_claim(&mut self, name: &str, pairs: &[(&str, &str, Relation)], witness: &str) {
        let mut ok = true;
        let mut parts = Vec::new();
        for &(a, b, want) in pairs {
            let got = self.relation(a, b);
            ok &= got == want;
            parts.push(format!("{a} {got} {b}"));
        }
        if !witness.is_empty() {
            let (w_ok, w_detail) = self.witnessed(witness);
            ok &= w_ok;
            parts.push(w_detail);
        }
        self.push(name, ok, parts.join("; "));
    }

    /// Strict edges of the picture, one claim per edge.
    fn edges(&mut self, edges: &[(&str, &str)]) {
        for &(upper, lower) in edges {
            let got = self.relation(lower, upper);
            self.push(
                &format!("{upper} > {lower}"),
                got == Relation::StrictlyBelow,
                format!("{lower} {got} {upper}"),
            );
        }
    }

    /// Logics named by sequences (or meets) agree pairwise on the fragment.
    fn equal_on_fragment(
        &mut self,
        name: &str,
        names: &[String],
        spec: &FragmentSpec,
    ) -> Result<()> {
        let logics: Vec<Logic> = names
            .iter()
            .map(|n| resolve_oracle(self.base, n))
            .collect::<Result<_>>()?;
        let sweep = Sweep::run(&logics, spec, &self.witnesses.inferences())?;
        let differing: Vec<String> = (1..logics.len())
            .filter(|&i| sweep.disagreements(0, i) > 0)
            .map(|i| {
                format!(
                    "{} differs from {} on {} inferences",
                    names[i],
                    names[0],
                    sweep.disagreements(0, i)
                )
            })
            .collect();
        let detail = if differing.is_empty() {
            format!(
                "{} equal on fragment ({} inferences)",
                names.join(" = "),
                sweep.checked()
            )
        } else {
            differing.join("; ")
        };
        self.push(name, differing.is_empty(), detail);
        Ok(())
    }

    fn finish(self, figure: u8, title: &str, chain: Vec<ChainCheck>) -> FigureReport {
        FigureReport {
            figure,
            title: title.to_string(),
            lattice: self.lattice,
            witnesses: self.witnesses,
            chain,
            claims: self.claims,
        }
    }
}

fn start<'a>(
    base: &'a Logic,
    sigma: Option<&[Formula]>,
    spec: &FragmentSpec,
) -> Result<Builder<'a>> {
    let pi = absorption(base);
    let witnesses = witness_suite(base, &pi, sigma)?;
    let lattice = build_lattice_with(base, &pi, spec, &witnesses.inferences())?;
    Ok(Builder {
        base,
        lattice,
        witnesses,
        claims: Vec::new(),
    })
}

fn node_counts(lattice: &LatticeReport) -> (usize, usize, usize) {
    let count = |k: NodeKind| lattice.nodes.iter().filter(|n| n.kind == k).count();
    (
        count(NodeKind::Sequence),
        count(NodeKind::Meet),
        count(NodeKind::Join),
    )
}

/// Rebuilds figure 1, 2 or 3 on `spec`.
pub fn reproduce(figure: u8, spec: &FragmentSpec) -> Result<FigureReport> {
    match figure {
        1 => figure_one(spec),
        2 => figure_two(spec),
        3 => figure_three(spec),
        other => Err(Error::Fragment(format!(
            "there is no figure {other}; choose 1, 2 or 3"
        ))),
    }
}

fn figure_one(spec: &FragmentSpec) -> Result<FigureReport> {
    use Relation::*;
    let base = and_or();
    let mut b = start(&base, None, spec)?;
    let name = base.label().to_string();

    let status = base.antitheorem_status().clone();
    let in_fragment = fragment_antitheorem(&base, spec)?;
    b.push(
        "no antitheorems",
        status == AntitheoremStatus::NoneProven && in_fragment.is_none(),
        format!(
            "exact status: {status}; fragment premise sets entailing a fresh variable: {}",
            in_fragment.map_or("none".to_string(), |g| crate::formula::display_set(&g))
        ),
    );
    let (seqs, meets, joins) = node_counts(&b.lattice);
    b.push(
        "node set",
        (seqs, meets, joins) == (5, 1, 1),
        format!("{seqs} sequences, {meets} meet, {joins} formal join"),
    );
    b.relation_claim(
        "l and r incomparable",
        &[("l", "r", Incomparable)],
        witness::L_R_INCOMPARABLE,
    );
    b.relation_claim("lr = l&r", &[("lr", "l&r", Equal)], "");
    b.relation_claim(
        "lr strictly below l and r",
        &[("lr", "l", StrictlyBelow), ("lr", "r", StrictlyBelow)],
        witness::LR_BELOW_L_R,
    );
    let rl_lr = b.relation("rl", "lr");
    b.push(
        "rl below lr",
        rl_lr.is_below_or_equal(),
        format!("rl {rl_lr} lr"),
    );
    let mut names = vec!["rl".to_string()];
    for s in VISequence::all_up_to(2) {
        for head in ["rl", "lrl"] {
            let n = format!("{head}{s}");
            if !names.contains(&n) {
                names.push(n);
            }
        }
    }
    b.equal_on_fragment("rl = rl.s = lrl.s for |s| <= 2", &names, spec)?;
    b.edges(&[
        (name.as_str(), "l"),
        (name.as_str(), "r"),
        ("l", "lr"),
        ("r", "lr"),
        ("lr", "rl"),
    ]);
    let (ok, detail) = (b.witnesses.passed(), b.witnesses.skipped.join("; "));
    b.push(
        "witness suite",
        ok,
        if detail.is_empty() {
            "all pass".to_string()
        } else {
            format!("all pass; {detail}")
        },
    );
    Ok(b.finish(
        1,
        "variable-inclusion lattice of an antitheorem-free base",
        Vec::new(),
    ))
}

fn classical_sigma() -> Vec<Formula> {
    parse_formula_list("x, not(x)", &bundled::classical_signature()).expect("valid")
}

fn figure_two(spec: &FragmentSpec) -> Result<FigureReport> {
    use Relation::*;
    let base = classical();
    let sigma = classical_sigma();
    let mut b = start(&base, Some(&sigma), spec)?;

    b.relation_claim(
        "rl and lr incomparable",
        &[("rl", "lr", Incomparable)],
        witness::RL_NOT_BELOW_LR,
    );
    let (ok, detail) = b.witnessed(witness::LR_NOT_BELOW_RL);
    b.push("lr not below rl, witnessed", ok, detail);
    b.relation_claim(
        "l&r strictly above lr and rl",
        &[("lr", "l&r", StrictlyBelow), ("rl", "l&r", StrictlyBelow)],
        witness::MEET_ABOVE,
    );
    b.relation_claim(
        "rlr strictly below rl",
        &[("rlr", "rl", StrictlyBelow)],
        witness::RLR_BELOW_RL,
    );
    b.relation_claim(
        "lrl strictly below lr",
        &[("lrl", "lr", StrictlyBelow)],
        witness::LRL_BELOW_LR,
    );
    b.relation_claim(
        "rlr strictly below lr&rl",
        &[("rlr", "lr&rl", StrictlyBelow)],
        witness::RLR_BELOW_MEET,
    );
    let names: Vec<String> = ["lrl", "lrlr", "rlrl"].map(String::from).to_vec();
    b.equal_on_fragment("lrl = lrlr = rlrl", &names, spec)?;
    b.relation_claim(
        "lrl strictly below rlr",
        &[("lrl", "rlr", StrictlyBelow)],
        witness::LRL_BELOW_RLR,
    );
    for s in ["", "l", "r"] {
        let names = vec![format!("rlrl{s}"), format!("lrl{s}")];
        let label = if s.is_empty() { "ε" } else { s };
        b.equal_on_fragment(&format!("rlrl.s = lrl.s for s = {label}"), &names, spec)?;
    }
    Ok(b.finish(
        2,
        "variable-inclusion lattice of a base with antitheorems (classical logic)",
        Vec::new(),
    ))
}

fn figure_three(spec: &FragmentSpec) -> Result<FigureReport> {
    use Relation::*;
    let base = classical();
    let sigma = classical_sigma();
    let mut b = start(&base, Some(&sigma), spec)?;

    let (seqs, meets, joins) = node_counts(&b.lattice);
    b.push(
        "node set",
        (seqs, meets, joins) == (7, 2, 2),
        format!("{seqs} sequences, {meets} meets, {joins} formal joins"),
    );

    let words = ["l", "r", "lr", "rl", "rlr", "lrl"];
    let mut logics = Vec::new();
    for w in words {
        logics.push(resolve_oracle(&base, w)?);
    }
    for w in words {
        let m = canonical_chain_matrix(&bundled::b2_matrix(), &w.parse()?)?;
        logics.push(Logic::from_matrices(
            format!("chain {w}"),
            MatrixClass::single(m),
        ));
    }
    let sweep = Sweep::run(&logics, spec, &b.witnesses.inferences())?;
    let mut chain = Vec::new();
    for (i, w) in words.iter().enumerate() {
        let d = sweep.disagreements(i, i + words.len());
        chain.push(ChainCheck {
            sequence: w.to_string(),
            checked: sweep.checked(),
            disagreements: d,
        });
        b.push(
            &format!("chain matrix for {w} matches {w}"),
            d == 0,
            format!("{d} disagreements in {} inferences", sweep.checked()),
        );
    }
    for (w, known) in [("l", bundled::wk_pwk()), ("r", bundled::wk_b3())] {
        let m = canonical_chain_matrix(&bundled::b2_matrix(), &w.parse()?)?;
        let iso = m.algebra().find_isomorphism(known.algebra());
        let holds = iso.as_ref().is_some_and(|iso| {
            let mut image: Vec<usize> = m.designated().iter().map(|&d| iso[d]).collect();
            image.sort();
            image == known.designated()
        });
        let target = if w == "l" { "PWK" } else { "B3" };
        b.push(
            &format!("chain matrix for {w} is {target}"),
            holds,
            if holds {
                "isomorphic, designated sets correspond".to_string()
            } else {
                "no designation-preserving isomorphism".to_string()
            },
        );
    }

    b.relation_claim("l and r incomparable", &[("l", "r", Incomparable)], "");
    b.relation_claim("lr and rl incomparable", &[("lr", "rl", Incomparable)], "");
    b.edges(&[
        ("CL", "l"),
        ("CL", "r"),
        ("l", "l&r"),
        ("r", "l&r"),
        ("l&r", "lr"),
        ("l&r", "rl"),
        ("lr", "lr&rl"),
        ("rl", "lr&rl"),
        ("lr&rl", "rlr"),
        ("rlr", "lrl"),
    ]);
    Ok(b.finish(3, "variable-inclusion lattice of classical logic", chain))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> FragmentSpec {
        FragmentSpec::new(&["x", "y", "z"], 1, 2).unwrap()
    }

    #[test]
    fn unknown_figure() {
        assert!(reproduce(4, &small()).is_err());
    }

    #[test]
    fn figure_one_on_a_small_fragment() {
        let r = reproduce(1, &small()).unwrap();
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn figure_three_has_one_failing_edge() {
        let r = reproduce(3, &small()).unwrap();
        let failed: Vec<&str> = r.failures().iter().map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["lr&rl > rlr"]);
        assert!(r.chain.iter().all(|c| c.disagreements == 0));
    }
}
