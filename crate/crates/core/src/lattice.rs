//! Exhaustive comparison of logics on bounded fragments.
//!
//! A [`Sweep`] evaluates several logics on every inference of a fragment
//! (plus optional extra inferences) and keeps, per pattern of verdicts, the
//! first few inferences showing it. Pairwise verdicts and the lattice report
//! are read off the sweep.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::MatrixClass;
use crate::compiled::{for_each_inference, Evaluator, ItemId};
use crate::error::{Error, Result};
use crate::formula::{display_set, Formula};
use crate::fragment::{enumerate_fragment, FragmentSpec};
use crate::logic::{AntitheoremStatus, Logic};
use crate::plonka::{check_partition_function, PartitionMode, PartitionReport};
use crate::transforms::{apply_sequence, canonical_sequences, BaseProfile};

/// Fragment witnesses kept per direction of a verdict.
pub const WITNESS_LIMIT: usize = 3;

/// A pair `(Γ, φ)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Inference {
    pub premises: Vec<Formula>,
    pub conclusion: Formula,
}

impl Inference {
    pub fn new(premises: Vec<Formula>, conclusion: Formula) -> Self {
        Self {
            premises,
            conclusion,
        }
    }

    pub fn holds_in(&self, logic: &Logic) -> bool {
        logic.entails(&self.premises, &self.conclusion)
    }
}

impl fmt::Display for Inference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} |> {}", display_set(&self.premises), self.conclusion)
    }
}

impl Serialize for Inference {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let premises: Vec<String> = self.premises.iter().map(ToString::to_string).collect();
        let mut s = serializer.serialize_struct("Inference", 2)?;
        s.serialize_field("premises", &premises)?;
        s.serialize_field("conclusion", &self.conclusion.to_string())?;
        s.end()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    Equal,
    /// Every inference valid in `a` is valid in `b`, not conversely.
    StrictlyBelow,
    StrictlyAbove,
    Incomparable,
}

impl Relation {
    pub fn reversed(self) -> Self {
        match self {
            Relation::StrictlyBelow => Relation::StrictlyAbove,
            Relation::StrictlyAbove => Relation::StrictlyBelow,
            other => other,
        }
    }

    /// `a ≤ b` on the fragment.
    pub fn is_below_or_equal(self) -> bool {
        matches!(self, Relation::Equal | Relation::StrictlyBelow)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Equal => "equal on fragment",
            Relation::StrictlyBelow => "strictly below",
            Relation::StrictlyAbove => "strictly above",
            Relation::Incomparable => "incomparable",
        })
    }
}

/// How two logics relate on a fragment plus extra inferences.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonVerdict {
    pub a: String,
    pub b: String,
    pub relation: Relation,
    /// Valid in `a`, not in `b`.
    pub witnesses_ab: Vec<Inference>,
    /// Valid in `b`, not in `a`.
    pub witnesses_ba: Vec<Inference>,
    pub fragment: FragmentSpec,
    /// Inferences evaluated, extras included.
    pub checked: u64,
}

impl ComparisonVerdict {
    pub fn reversed(&self) -> Self {
        Self {
            a: self.b.clone(),
            b: self.a.clone(),
            relation: self.relation.reversed(),
            witnesses_ab: self.witnesses_ba.clone(),
            witnesses_ba: self.witnesses_ab.clone(),
            fragment: self.fragment.clone(),
            checked: self.checked,
        }
    }

    /// Re-checks every witness against both logics; returns the ones that
    /// do not show the claimed asymmetry.
    pub fn revalidate(&self, a: &Logic, b: &Logic) -> Vec<String> {
        let mut bad = Vec::new();
        for w in &self.witnesses_ab {
            if !w.holds_in(a) || w.holds_in(b) {
                bad.push(format!("{w}: expected valid in {} only", self.a));
            }
        }
        for w in &self.witnesses_ba {
            if !w.holds_in(b) || w.holds_in(a) {
                bad.push(format!("{w}: expected valid in {} only", self.b));
            }
        }
        bad
    }
}

impl fmt::Display for ComparisonVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} vs {}: {}", self.a, self.b, self.relation)?;
        for w in &self.witnesses_ab {
            writeln!(f, "    only in {}: {w}", self.a)?;
        }
        for w in &self.witnesses_ba {
            writeln!(f, "    only in {}: {w}", self.b)?;
        }
        Ok(())
    }
}

#[derive(Debug, Default)]
struct Bucket {
    count: u64,
    first: Vec<(u64, Inference)>,
}

/// Verdict patterns of several logics over one fragment.
#[derive(Debug)]
pub struct Sweep {
    labels: Vec<String>,
    fragment: FragmentSpec,
    extras: Vec<(Inference, u64)>,
    buckets: BTreeMap<u64, Bucket>,
    checked: u64,
}

impl Sweep {
    /// Evaluates every logic on `extras` (direct route) and on every
    /// fragment inference (bitset route). At most 64 logics.
    pub fn run(logics: &[Logic], spec: &FragmentSpec, extras: &[Inference]) -> Result<Self> {
        let first = logics
            .first()
            .ok_or_else(|| Error::Fragment("nothing to compare".into()))?;
        if logics.len() > 64 {
            return Err(Error::Fragment("at most 64 logics per sweep".into()));
        }
        let sig = first.signature();
        for l in logics {
            if l.signature() != sig {
                return Err(Error::SignatureMismatch(format!(
                    "{} and {} differ in signature",
                    first.label(),
                    l.label()
                )));
            }
        }
        let mut extra_masks = Vec::with_capacity(extras.len());
        for inf in extras {
            for p in inf.premises.iter().chain([&inf.conclusion]) {
                p.check_signature(sig)?;
            }
            let mask = logics
                .iter()
                .enumerate()
                .filter(|(_, l)| inf.holds_in(l))
                .fold(0u64, |m, (k, _)| m | 1 << k);
            extra_masks.push((inf.clone(), mask));
        }

        let formulas = enumerate_fragment(sig, spec);
        let refs: Vec<&Logic> = logics.iter().collect();
        let mut ev = Evaluator::new(&spec.var_names(), &refs)?;
        let mut items: Vec<ItemId> = Vec::new();
        for f in &formulas {
            let id = ev.intern(f)?;
            if id.index() == items.len() {
                items.push(id);
            }
        }
        let compiled: Vec<_> = logics.iter().map(|l| ev.compile(l)).collect();

        let mut buckets: BTreeMap<u64, Bucket> = BTreeMap::new();
        let mut order = extras.len() as u64;
        for_each_inference(&items, spec.max_premises, |premises, conclusion| {
            let mask = compiled
                .iter()
                .enumerate()
                .filter(|(_, c)| ev.entails(c, premises, conclusion))
                .fold(0u64, |m, (k, _)| m | 1 << k);
            let bucket = buckets.entry(mask).or_default();
            bucket.count += 1;
            if bucket.first.len() < WITNESS_LIMIT {
                let inf = Inference::new(
                    premises
                        .iter()
                        .map(|&p| ev.representative(p).clone())
                        .collect(),
                    ev.representative(conclusion).clone(),
                );
                bucket.first.push((order, inf));
            }
            order += 1;
        });

        Ok(Self {
            labels: logics.iter().map(|l| l.label().to_string()).collect(),
            fragment: spec.clone(),
            extras: extra_masks,
            buckets,
            checked: order,
        })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn checked(&self) -> u64 {
        self.checked
    }

    /// Number of inferences on which logics `i` and `j` disagree.
    pub fn disagreements(&self, i: usize, j: usize) -> u64 {
        let differs = |m: u64| (m >> i & 1) != (m >> j & 1);
        let extras = self.extras.iter().filter(|(_, m)| differs(*m)).count() as u64;
        extras
            + self
                .buckets
                .iter()
                .filter(|(&m, _)| differs(m))
                .map(|(_, b)| b.count)
                .sum::<u64>()
    }

    /// Number of inferences valid in logic `i`.
    pub fn valid_count(&self, i: usize) -> u64 {
        let extras = self.extras.iter().filter(|(_, m)| m >> i & 1 == 1).count() as u64;
        extras
            + self
                .buckets
                .iter()
                .filter(|(&m, _)| m >> i & 1 == 1)
                .map(|(_, b)| b.count)
                .sum::<u64>()
    }

    /// Every extra valid in `i` but not `j`, then the first fragment ones.
    fn witnesses(&self, i: usize, j: usize) -> Vec<Inference> {
        let shows = |m: u64| m >> i & 1 == 1 && m >> j & 1 == 0;
        let mut out: Vec<Inference> = self
            .extras
            .iter()
            .filter(|(_, m)| shows(*m))
            .map(|(inf, _)| inf.clone())
            .collect();
        let mut found: Vec<&(u64, Inference)> = self
            .buckets
            .iter()
            .filter(|(&m, _)| shows(m))
            .flat_map(|(_, b)| &b.first)
            .collect();
        found.sort_by_key(|(order, _)| *order);
        out.extend(
            found
                .into_iter()
                .take(WITNESS_LIMIT)
                .map(|(_, inf)| inf.clone()),
        );
        out
    }

    pub fn verdict(&self, i: usize, j: usize) -> ComparisonVerdict {
        let witnesses_ab = self.witnesses(i, j);
        let witnesses_ba = self.witnesses(j, i);
        let relation = match (witnesses_ab.is_empty(), witnesses_ba.is_empty()) {
            (true, true) => Relation::Equal,
            (true, false) => Relation::StrictlyBelow,
            (false, true) => Relation::StrictlyAbove,
            (false, false) => Relation::Incomparable,
        };
        ComparisonVerdict {
            a: self.labels[i].clone(),
            b: self.labels[j].clone(),
            relation,
            witnesses_ab,
            witnesses_ba,
            fragment: self.fragment.clone(),
            checked: self.checked,
        }
    }
}

/// Compares two logics on `spec` and the extra inferences.
pub fn compare(
    a: &Logic,
    b: &Logic,
    spec: &FragmentSpec,
    extras: &[Inference],
) -> Result<ComparisonVerdict> {
    Ok(Sweep::run(&[a.clone(), b.clone()], spec, extras)?.verdict(0, 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    Sequence,
    Meet,
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeNode {
    pub name: String,
    pub kind: NodeKind,
    pub computed: bool,
}

/// Joins are shown but never evaluated.
pub const JOIN_NOTE: &str = "not computed (no construction available)";

#[derive(Debug, Clone, Serialize)]
pub struct LatticeReport {
    pub base: String,
    pub partition_term: String,
    pub fragment: FragmentSpec,
    pub trivial_base: bool,
    pub antitheorems: String,
    pub has_theorems: bool,
    pub nodes: Vec<LatticeNode>,
    pub partition: Vec<PartitionReport>,
    /// One verdict per unordered pair of computed nodes, in node order.
    pub verdicts: Vec<ComparisonVerdict>,
    /// Nodes equal on the fragment, grouped; a group is named by joining
    /// its members with ` = `.
    pub classes: Vec<Vec<String>>,
    /// Cover pairs `(upper, lower)` between classes.
    pub hasse: Vec<(String, String)>,
    pub unresolved: Vec<String>,
}

impl LatticeReport {
    /// The verdict for `a` against `b`, oriented as asked.
    pub fn verdict(&self, a: &str, b: &str) -> Option<ComparisonVerdict> {
        self.verdicts.iter().find_map(|v| {
            if v.a == a && v.b == b {
                Some(v.clone())
            } else if v.a == b && v.b == a {
                Some(v.reversed())
            } else {
                None
            }
        })
    }

    pub fn class_of(&self, node: &str) -> Option<String> {
        self.classes
            .iter()
            .find(|c| c.iter().any(|n| n == node))
            .map(|c| c.join(" = "))
    }
}

impl fmt::Display for LatticeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "lattice of {} with partition term {}",
            self.base, self.partition_term
        )?;
        writeln!(f, "fragment: {}", self.fragment)?;
        if self.trivial_base {
            writeln!(
                f,
                "base designates every element: trivial, no lattice claims"
            )?;
            return Ok(());
        }
        writeln!(
            f,
            "antitheorems: {}; theorems in fragment: {}",
            self.antitheorems,
            if self.has_theorems { "yes" } else { "no" }
        )?;
        for p in &self.partition {
            write!(f, "{p}")?;
        }
        writeln!(f, "nodes:")?;
        for n in &self.nodes {
            match n.kind {
                NodeKind::Sequence => writeln!(f, "  {}", n.name)?,
                NodeKind::Meet => writeln!(f, "  {}  (meet)", n.name)?,
                NodeKind::Join => writeln!(f, "  {}  (join, {JOIN_NOTE})", n.name)?,
            }
        }
        if let Some(v) = self.verdicts.first() {
            writeln!(f, "verdicts over {} inferences:", v.checked)?;
        }
        for v in &self.verdicts {
            write!(f, "  {v}")?;
        }
        writeln!(f, "hasse diagram:")?;
        for (upper, lower) in &self.hasse {
            writeln!(f, "  {upper} > {lower}")?;
        }
        if !self.unresolved.is_empty() {
            writeln!(f, "unresolved at fragment scale:")?;
            for u in &self.unresolved {
                writeln!(f, "  {u}")?;
            }
        }
        Ok(())
    }
}

/// The computed logics of the lattice of `base`, named as in the report:
/// the canonical sequences (the base under its own label) and the meets.
pub fn lattice_logics(base: &Logic, profile: BaseProfile) -> Result<Vec<(String, Logic)>> {
    let mut out = Vec::new();
    for seq in canonical_sequences(profile) {
        let name = if seq.is_empty() {
            base.label().to_string()
        } else {
            seq.to_string()
        };
        out.push((name, apply_sequence(base, &seq)));
    }
    let find = |out: &[(String, Logic)], name: &str| {
        out.iter()
            .find(|(n, _)| n == name)
            .map(|(_, l)| l.clone())
            .expect("canonical sequence present")
    };
    let lr = find(&out, "l").meet(&find(&out, "r"))?;
    out.push((lr.label().to_string(), lr));
    if profile.has_antitheorems {
        let m = find(&out, "lr").meet(&find(&out, "rl"))?;
        out.push((m.label().to_string(), m));
    }
    Ok(out)
}

/// Lattice of the base class under its default label.
pub fn build_lattice(
    base: &MatrixClass,
    pi: &Formula,
    spec: &FragmentSpec,
) -> Result<LatticeReport> {
    build_lattice_with(&Logic::from_matrices("base", base.clone()), pi, spec, &[])
}

/// Checks `pi`, instantiates the companions of `base` and compares every
/// pair on `spec` plus `extras`.
pub fn build_lattice_with(
    base: &Logic,
    pi: &Formula,
    spec: &FragmentSpec,
    extras: &[Inference],
) -> Result<LatticeReport> {
    let class = base
        .as_matrices()
        .ok_or_else(|| Error::Fragment("a lattice base must be a matrix class".into()))?;
    let mut report = LatticeReport {
        base: base.label().to_string(),
        partition_term: pi.to_string(),
        fragment: spec.clone(),
        trivial_base: class.matrices().iter().all(|m| m.designates_everything()),
        antitheorems: base.antitheorem_status().to_string(),
        has_theorems: false,
        nodes: Vec::new(),
        partition: Vec::new(),
        verdicts: Vec::new(),
        classes: Vec::new(),
        hasse: Vec::new(),
        unresolved: Vec::new(),
    };
    if report.trivial_base {
        return Ok(report);
    }

    for m in class.matrices() {
        report.partition.push(check_partition_function(
            m.algebra(),
            pi,
            None,
            PartitionMode::Algebraic,
        )?);
    }
    let algebra = class.matrices()[0].algebra();
    report.partition.push(check_partition_function(
        algebra,
        pi,
        Some(&base.left()),
        PartitionMode::Left,
    )?);
    report.partition.push(check_partition_function(
        algebra,
        pi,
        Some(&base.right()),
        PartitionMode::Right,
    )?);
    let failures: Vec<String> = report.partition.iter().flat_map(|p| p.failures()).collect();
    if !failures.is_empty() {
        return Err(Error::NotPartitionFunction(failures.join("; ")));
    }

    let profile = BaseProfile::of(base, spec)?;
    report.has_theorems = profile.has_theorems;
    let logics = lattice_logics(base, profile)?;
    for (name, _) in &logics {
        let kind = if name.contains('&') {
            NodeKind::Meet
        } else {
            NodeKind::Sequence
        };
        report.nodes.push(LatticeNode {
            name: name.clone(),
            kind,
            computed: true,
        });
    }
    let mut joins = vec!["l|r"];
    if profile.has_antitheorems {
        joins.push("lr|rl");
    }
    for j in joins {
        report.nodes.push(LatticeNode {
            name: j.to_string(),
            kind: NodeKind::Join,
            computed: false,
        });
        report.unresolved.push(format!("{j}: {JOIN_NOTE}"));
    }

    let only: Vec<Logic> = logics.iter().map(|(_, l)| l.clone()).collect();
    let sweep = Sweep::run(&only, spec, extras)?;
    let n = logics.len();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = sweep.verdict(i, j);
            v.a = logics[i].0.clone();
            v.b = logics[j].0.clone();
            report.verdicts.push(v);
        }
    }

    // Equal-on-fragment classes, in node order.
    let mut class_of: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..i {
            if class_of[j] == j && sweep.disagreements(i, j) == 0 {
                class_of[i] = j;
                break;
            }
        }
    }
    let reps: Vec<usize> = (0..n).filter(|&i| class_of[i] == i).collect();
    for &r in &reps {
        let members: Vec<String> = (0..n)
            .filter(|&i| class_of[i] == r)
            .map(|i| logics[i].0.clone())
            .collect();
        if members.len() > 1 {
            report.unresolved.push(format!(
                "{} holds on the fragment only",
                members.join(" = ")
            ));
        }
        report.classes.push(members);
    }
    let below = |a: usize, b: usize| sweep.verdict(a, b).relation == Relation::StrictlyBelow;
    for (ai, &a) in reps.iter().enumerate() {
        for (bi, &b) in reps.iter().enumerate() {
            if below(b, a) && !reps.iter().any(|&c| below(b, c) && below(c, a)) {
                report.hasse.push((
                    report.classes[ai].join(" = "),
                    report.classes[bi].join(" = "),
                ));
            }
        }
    }

    if !profile.has_antitheorems && !profile.has_theorems {
        if let Some(v) = report.verdict("rl", "lr") {
            if v.relation == Relation::StrictlyBelow {
                report.unresolved.push(
                    "rl strictly below lr although the base has no theorem in the fragment; \
                     strictness is reported for the fragment only"
                        .into(),
                );
            }
        }
    }
    if let AntitheoremStatus::Unknown = base.antitheorem_status() {
        report
            .unresolved
            .push("antitheorem status of the base is unknown".into());
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundled;
    use crate::parse::{parse_formula, parse_formula_list};

    fn cl() -> Logic {
        Logic::from_matrices("CL", MatrixClass::single(bundled::b2_matrix()))
    }

    fn f(text: &str) -> Formula {
        parse_formula(text, &bundled::classical_signature()).unwrap()
    }

    fn small() -> FragmentSpec {
        FragmentSpec::new(&["x", "y"], 2, 1).unwrap()
    }

    #[test]
    fn left_and_right_are_incomparable() {
        let v = compare(&cl().left(), &cl().right(), &small(), &[]).unwrap();
        assert_eq!(v.relation, Relation::Incomparable);
        assert!(v.revalidate(&cl().left(), &cl().right()).is_empty());
        let pi = f("and(x, or(x, y))");
        let x = f("x");
        let extras = [
            Inference::new(vec![pi.clone()], x.clone()),
            Inference::new(vec![x.clone()], pi.clone()),
        ];
        let v = compare(&cl().left(), &cl().right(), &small(), &extras).unwrap();
        assert_eq!(v.witnesses_ab[0], extras[1]);
        assert_eq!(v.witnesses_ba[0], extras[0]);
        assert_eq!(v.witnesses_ab.len(), 1 + WITNESS_LIMIT);
    }

    #[test]
    fn self_comparison_is_equal() {
        let v = compare(&cl().right(), &cl().right(), &small(), &[]).unwrap();
        assert_eq!(v.relation, Relation::Equal);
        assert!(v.witnesses_ab.is_empty() && v.witnesses_ba.is_empty());
        assert_eq!(v.relation.to_string(), "equal on fragment");
    }

    #[test]
    fn companions_are_below_the_base() {
        let v = compare(&cl().left(), &cl(), &small(), &[]).unwrap();
        assert_eq!(v.relation, Relation::StrictlyBelow);
        assert_eq!(v.reversed().relation, Relation::StrictlyAbove);
    }

    #[test]
    fn extras_mismatching_signature_are_rejected() {
        let and_or = bundled::b2_andor_matrix().signature().clone();
        let a = Logic::from_matrices("A", MatrixClass::single(bundled::b2_andor_matrix()));
        let bad = Inference::new(vec![], f("not(x)"));
        assert!(compare(&a, &a, &small(), &[bad]).is_err());
        let ok = Inference::new(
            parse_formula_list("x", &and_or).unwrap(),
            parse_formula("x", &and_or).unwrap(),
        );
        assert!(compare(&a, &a, &small(), &[ok]).is_ok());
        assert!(compare(&a, &cl(), &small(), &[]).is_err());
    }

    #[test]
    fn inference_serializes_in_the_grammar() {
        let inf = Inference::new(vec![f("x"), f("not(x)")], f("and(x, or(x, y))"));
        let json = serde_json::to_string(&inf).unwrap();
        assert_eq!(
            json,
            r#"{"premises":["x","not(x)"],"conclusion":"and(x, or(x, y))"}"#
        );
        assert_eq!(inf.to_string(), "{x, not(x)} |> and(x, or(x, y))");
    }

    #[test]
    fn trivial_base_is_flagged() {
        let top =
            crate::algebra::FiniteAlgebra::trivial(bundled::classical_signature(), "n").unwrap();
        let m = crate::algebra::FiniteMatrix::new(top, &[0]).unwrap();
        let r = build_lattice(&MatrixClass::single(m), &f("and(x, or(x, y))"), &small()).unwrap();
        assert!(r.trivial_base);
        assert!(r.nodes.is_empty() && r.verdicts.is_empty());
    }

    #[test]
    fn join_term_is_rejected() {
        let err = build_lattice(
            &MatrixClass::single(bundled::b2_matrix()),
            &f("or(x, y)"),
            &small(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::NotPartitionFunction(_)));
    }

    #[test]
    fn small_classical_lattice() {
        let r = build_lattice_with(&cl(), &f("and(x, or(x, y))"), &small(), &[]).unwrap();
        let names: Vec<&str> = r.nodes.iter().map(|n| n.name.as_str()).collect();
        assert_eq!(
            names,
            ["CL", "l", "r", "lr", "rl", "rlr", "lrl", "l&r", "lr&rl", "l|r", "lr|rl"]
        );
        assert_eq!(r.verdicts.len(), 9 * 8 / 2);
        assert_eq!(
            r.verdict("l", "r").unwrap().relation,
            Relation::Incomparable
        );
        assert!(r.hasse.contains(&("CL".into(), "l".into())));
    }
}
