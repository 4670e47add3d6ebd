//! Exhaustive structural checks on fragments: closure properties,
//! antitheorems and consistency of verdicts.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::compiled::{next_combination, Evaluator, ItemId};
use crate::error::Result;
use crate::formula::{display_set, vars_of_set, Formula, Name, Substitution};
use crate::fragment::{enumerate_fragment, FragmentSpec};
use crate::lattice::{ComparisonVerdict, Relation};
use crate::logic::Logic;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyCheck {
    pub logic: String,
    pub property: String,
    pub checked: u64,
    pub counterexample: Option<String>,
}

impl PropertyCheck {
    pub fn holds(&self) -> bool {
        self.counterexample.is_none()
    }
}

impl fmt::Display for PropertyCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<10} {:<24} {:>10} checked",
            self.logic, self.property, self.checked
        )?;
        match &self.counterexample {
            None => write!(f, "  ok"),
            Some(cx) => write!(f, "  FAIL at {cx}"),
        }
    }
}

/// Which substitutions the invariance check tries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SubstitutionBounds {
    /// Images are fragment formulas up to this depth, one per item.
    pub image_depth: usize,
    /// Only inferences with at most this many premises are substituted into.
    pub max_premises: usize,
}

impl Default for SubstitutionBounds {
    fn default() -> Self {
        Self {
            image_depth: 1,
            max_premises: 1,
        }
    }
}

/// Premise sets of a fragment as item sets, with their verdict rows.
struct Grid {
    ev: Evaluator,
    items: Vec<ItemId>,
    sets: Vec<Vec<ItemId>>,
    index: HashMap<Vec<ItemId>, usize>,
}

impl Grid {
    fn new(logics: &[Logic], spec: &FragmentSpec) -> Result<Self> {
        let refs: Vec<&Logic> = logics.iter().collect();
        let mut ev = Evaluator::new(&spec.var_names(), &refs)?;
        let mut items = Vec::new();
        if let Some(first) = logics.first() {
            for f in enumerate_fragment(first.signature(), spec) {
                let id = ev.intern(&f)?;
                if id.index() == items.len() {
                    items.push(id);
                }
            }
        }
        let mut sets = Vec::new();
        let n = items.len();
        for k in 0..=spec.max_premises.min(n) {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                sets.push(idx.iter().map(|&i| items[i]).collect::<Vec<_>>());
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
        }
        let index = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        Ok(Self {
            ev,
            items,
            sets,
            index,
        })
    }

    fn show(&self, premises: &[ItemId], conclusion: ItemId) -> String {
        let p: Vec<Formula> = premises
            .iter()
            .map(|&i| self.ev.representative(i).clone())
            .collect();
        format!(
            "{} |> {}",
            display_set(&p),
            self.ev.representative(conclusion)
        )
    }
}

/// Reflexivity, monotonicity and substitution invariance of each logic on
/// the fragment.
///
/// Premise sets and conclusions range over formula classes that no logic
/// here can tell apart, each shown by its first formula. Monotonicity
/// compares every set with each one-element extension within the premise
/// bound. Substitutions send every fragment variable to one of the item
/// representatives of depth at most `bounds.image_depth`.
pub fn property_suite(
    logics: &[Logic],
    spec: &FragmentSpec,
    bounds: SubstitutionBounds,
) -> Result<Vec<PropertyCheck>> {
    let mut grid = Grid::new(logics, spec)?;
    let vars = spec.var_names();
    let images: Vec<Formula> = {
        let shallow = FragmentSpec {
            max_depth: bounds.image_depth,
            ..spec.clone()
        };
        let mut seen = Vec::new();
        let mut out = Vec::new();
        if let Some(first) = logics.first() {
            for f in enumerate_fragment(first.signature(), &shallow) {
                let id = grid.ev.intern(&f)?;
                if !seen.contains(&id) {
                    seen.push(id);
                    out.push(f);
                }
            }
        }
        out
    };

    // Every substitution, as the item each fragment item is sent to.
    let mut sigma_maps: Vec<(Substitution, Vec<ItemId>)> = Vec::new();
    let mut choice = vec![0usize; vars.len()];
    if !images.is_empty() {
        loop {
            let sigma: Substitution = vars
                .iter()
                .zip(&choice)
                .map(|(v, &c)| (v.clone(), images[c].clone()))
                .collect();
            let mut map = Vec::with_capacity(grid.items.len());
            for &item in &grid.items {
                let image = grid.ev.representative(item).substitute(&sigma);
                map.push(grid.ev.intern(&image)?);
            }
            sigma_maps.push((sigma, map));
            if !crate::fragment::advance(&mut choice, images.len()) {
                break;
            }
        }
    }

    let n_items = grid.items.len();
    let words = n_items.div_ceil(64);
    let mut out = Vec::new();
    for logic in logics {
        let compiled = grid.ev.compile(logic);
        // valid[s * words ..] is the set of conclusions (by position) of set s.
        let mut valid = vec![0u64; grid.sets.len() * words];
        for (s, set) in grid.sets.iter().enumerate() {
            for (c, &item) in grid.items.iter().enumerate() {
                if grid.ev.entails(&compiled, set, item) {
                    valid[s * words + c / 64] |= 1 << (c % 64);
                }
            }
        }
        let is_valid = |s: usize, c: usize| valid[s * words + c / 64] >> (c % 64) & 1 == 1;
        let position = |item: ItemId| item.index();

        let mut refl = PropertyCheck {
            logic: logic.label().to_string(),
            property: "reflexivity".into(),
            checked: 0,
            counterexample: None,
        };
        'refl: for (s, set) in grid.sets.iter().enumerate() {
            for &p in set {
                refl.checked += 1;
                if !is_valid(s, position(p)) {
                    refl.counterexample = Some(grid.show(set, p));
                    break 'refl;
                }
            }
        }
        out.push(refl);

        let mut mono = PropertyCheck {
            logic: logic.label().to_string(),
            property: "monotonicity".into(),
            checked: 0,
            counterexample: None,
        };
        'mono: for (s, set) in grid.sets.iter().enumerate() {
            if set.len() >= spec.max_premises {
                continue;
            }
            for &q in &grid.items {
                if set.contains(&q) {
                    continue;
                }
                let mut bigger = set.clone();
                bigger.push(q);
                bigger.sort();
                let t = grid.index[&bigger];
                mono.checked += 1;
                for w in 0..words {
                    let lost = valid[s * words + w] & !valid[t * words + w];
                    if lost != 0 {
                        let c = w * 64 + lost.trailing_zeros() as usize;
                        mono.counterexample = Some(format!(
                            "{} but not with {} added",
                            grid.show(set, grid.items[c]),
                            grid.ev.representative(q)
                        ));
                        break 'mono;
                    }
                }
            }
        }
        out.push(mono);

        let mut subst = PropertyCheck {
            logic: logic.label().to_string(),
            property: "substitution invariance".into(),
            checked: 0,
            counterexample: None,
        };
        let mut image_set: Vec<ItemId> = Vec::new();
        'subst: for (sigma, map) in &sigma_maps {
            for (s, set) in grid.sets.iter().enumerate() {
                if set.len() > bounds.max_premises {
                    continue;
                }
                image_set.clear();
                image_set.extend(set.iter().map(|&p| map[position(p)]));
                image_set.sort();
                image_set.dedup();
                for (c, &concl) in grid.items.iter().enumerate() {
                    if !is_valid(s, c) {
                        continue;
                    }
                    subst.checked += 1;
                    if !grid.ev.entails(&compiled, &image_set, map[c]) {
                        let shown: Vec<String> =
                            sigma.iter().map(|(v, f)| format!("{v}:={f}")).collect();
                        subst.counterexample = Some(format!(
                            "{} under {}",
                            grid.show(set, concl),
                            shown.join(", ")
                        ));
                        break 'subst;
                    }
                }
            }
        }
        out.push(subst);
    }
    Ok(out)
}

/// The first premise set of the fragment (at most `max_premises` formulas)
/// that entails a variable it does not contain.
pub fn fragment_antitheorem(logic: &Logic, spec: &FragmentSpec) -> Result<Option<Vec<Formula>>> {
    let grid = Grid::new(std::slice::from_ref(logic), spec)?;
    let compiled = grid.ev.compile(logic);
    Ok(grid
        .sets
        .iter()
        .find(|set| grid.ev.is_antitheorem(&compiled, set))
        .map(|set| {
            set.iter()
                .map(|&i| grid.ev.representative(i).clone())
                .collect()
        }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AgreementReport {
    pub logic: String,
    pub candidates: usize,
    /// Candidates found to be antitheorems (by both tests when they agree).
    pub antitheorems: usize,
    pub substitutions: u64,
    /// `(Γ, fresh-variable verdict, definitional verdict)` where they differ.
    pub disagreements: Vec<(String, bool, bool)>,
}

impl AgreementReport {
    pub fn agrees(&self) -> bool {
        self.disagreements.is_empty()
    }
}

/// Compares the fresh-variable test with the definition of an antitheorem,
/// bounded: `Γ` is an antitheorem if `σ[Γ] ⊢ φ` for every substitution of
/// the variables of `Γ` by formulas in `images` and every `φ` in `targets`.
///
/// Images are taken one per value class (their value tables in every
/// matrix the logic uses, over `vars`); every image of a class gives the
/// same verdicts. Targets are taken one per item.
pub fn antitheorem_agreement(
    logic: &Logic,
    candidates: &[Vec<Formula>],
    images: &[Formula],
    targets: &[Formula],
    vars: &[Name],
) -> Result<AgreementReport> {
    let mut ev = Evaluator::new(vars, &[logic])?;
    let compiled = ev.compile(logic);

    let mut classes: Vec<Formula> = Vec::new();
    let mut seen: HashMap<(Vec<Name>, Vec<Vec<usize>>), ()> = HashMap::new();
    for f in images {
        let mut tables = Vec::new();
        for root in logic.roots() {
            for m in root.matrices() {
                tables.push(m.algebra().evaluate_all(f, vars)?);
            }
        }
        let key = (f.vars().into_iter().collect(), tables);
        if seen.insert(key, ()).is_none() {
            classes.push(f.clone());
        }
    }
    let mut target_ids: Vec<ItemId> = Vec::new();
    for t in targets {
        let id = ev.intern(t)?;
        if !target_ids.contains(&id) {
            target_ids.push(id);
        }
    }

    let mut report = AgreementReport {
        logic: logic.label().to_string(),
        candidates: candidates.len(),
        antitheorems: 0,
        substitutions: 0,
        disagreements: Vec::new(),
    };
    for gamma in candidates {
        let fresh = logic.is_antitheorem(gamma);
        let gamma_vars: Vec<Name> = vars_of_set(gamma).into_iter().collect();
        let mut choice = vec![0usize; gamma_vars.len()];
        let mut definitional = true;
        'sigma: loop {
            let sigma: Substitution = gamma_vars
                .iter()
                .zip(&choice)
                .map(|(v, &c)| (v.clone(), classes[c].clone()))
                .collect();
            report.substitutions += 1;
            let mut premises = Vec::with_capacity(gamma.len());
            for g in gamma {
                premises.push(ev.intern(&g.substitute(&sigma))?);
            }
            for &t in &target_ids {
                if !ev.entails(&compiled, &premises, t) {
                    definitional = false;
                    break 'sigma;
                }
            }
            if classes.is_empty() || !crate::fragment::advance(&mut choice, classes.len()) {
                break;
            }
        }
        if fresh == definitional {
            report.antitheorems += usize::from(fresh);
        } else {
            report
                .disagreements
                .push((display_set(gamma), fresh, definitional));
        }
    }
    Ok(report)
}

/// Candidate premise sets: up to two formulas of depth at most one over
/// `x, y`, and up to two formulas of depth at most two over `x`.
pub fn antitheorem_candidates(sig: &crate::formula::Signature) -> Result<Vec<Vec<Formula>>> {
    let mut out: Vec<Vec<Formula>> = Vec::new();
    for (vars, depth) in [(&["x", "y"][..], 1), (&["x"][..], 2)] {
        let pool = enumerate_fragment(sig, &FragmentSpec::new(vars, depth, 0)?);
        let n = pool.len();
        for k in 0..=2 {
            let mut idx: Vec<usize> = (0..k).collect();
            loop {
                let set: Vec<Formula> = idx.iter().map(|&i| pool[i].clone()).collect();
                if !out.contains(&set) {
                    out.push(set);
                }
                if !next_combination(&mut idx, n) {
                    break;
                }
            }
        }
    }
    Ok(out)
}

/// Order violations among verdicts over shared labels: for `a ≤ b ≤ c`,
/// `a ≤ c` must hold, which also rules out strict cycles.
pub fn verdict_cycles(verdicts: &[ComparisonVerdict]) -> Vec<String> {
    let mut labels: Vec<&str> = Vec::new();
    for v in verdicts {
        for l in [v.a.as_str(), v.b.as_str()] {
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
    }
    let n = labels.len();
    let pos = |l: &str| labels.iter().position(|x| *x == l).expect("collected");
    let mut rel: Vec<Option<Relation>> = vec![None; n * n];
    for v in verdicts {
        let (a, b) = (pos(&v.a), pos(&v.b));
        rel[a * n + b] = Some(v.relation);
        rel[b * n + a] = Some(v.relation.reversed());
    }
    let le = |a: usize, b: usize| a == b || rel[a * n + b].is_some_and(Relation::is_below_or_equal);
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if a == b || b == c || a == c {
                    continue;
                }
                if le(a, b) && le(b, c) && rel[a * n + c].is_some() && !le(a, c) {
                    out.push(format!(
                        "{} <= {} <= {} but not {} <= {}",
                        labels[a], labels[b], labels[c], labels[a], labels[c]
                    ));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MatrixClass;
    use crate::bundled;
    use crate::lattice::Sweep;
    use crate::parse::parse_formula_list;

    fn cl() -> Logic {
        Logic::from_matrices("CL", MatrixClass::single(bundled::b2_matrix()))
    }

    fn small() -> FragmentSpec {
        FragmentSpec::new(&["x", "y"], 1, 2).unwrap()
    }

    #[test]
    fn classical_towers_are_closure_operators() {
        let logics = [cl(), cl().left(), cl().right(), cl().right().left()];
        let checks = property_suite(&logics, &small(), SubstitutionBounds::default()).unwrap();
        assert_eq!(checks.len(), 12);
        for c in &checks {
            assert!(c.holds(), "{c}");
            assert!(c.checked > 0, "{c}");
        }
    }

    #[test]
    fn fragment_antitheorems() {
        let found = fragment_antitheorem(&cl(), &small()).unwrap().unwrap();
        assert!(cl().is_antitheorem(&found));
        assert!(fragment_antitheorem(&cl().left(), &small())
            .unwrap()
            .is_none());
    }

    #[test]
    fn agreement_on_classical_logic() {
        let sig = bundled::classical_signature();
        let candidates = vec![
            parse_formula_list("x, not(x)", &sig).unwrap(),
            parse_formula_list("x", &sig).unwrap(),
            parse_formula_list("and(x, not(y)), y", &sig).unwrap(),
        ];
        let pool = enumerate_fragment(&sig, &small());
        let vars = small().var_names();
        let vars: Vec<Name> = vars.into_iter().chain([Name::from("z")]).collect();
        let targets: Vec<Formula> = pool.iter().cloned().chain([Formula::var("z")]).collect();
        let r = antitheorem_agreement(&cl(), &candidates, &pool, &targets, &vars).unwrap();
        assert!(r.agrees(), "{:?}", r.disagreements);
        assert_eq!(r.antitheorems, 2);
    }

    #[test]
    fn candidate_pool_size() {
        let c = antitheorem_candidates(&bundled::classical_signature()).unwrap();
        // 12 formulas over x, y up to depth 1; 37 over x up to depth 2;
        // the sets over x of depth <= 1 are counted once.
        let two = |n: usize| 1 + n + n * (n - 1) / 2;
        assert_eq!(c.len(), two(12) + two(37) - two(4));
    }

    #[test]
    fn verdicts_form_no_cycles() {
        let logics = [cl(), cl().left(), cl().right(), cl().left().right()];
        let sweep = Sweep::run(&logics, &small(), &[]).unwrap();
        let mut verdicts = Vec::new();
        for i in 0..4 {
            for j in i + 1..4 {
                verdicts.push(sweep.verdict(i, j));
            }
        }
        assert!(verdict_cycles(&verdicts).is_empty());
        let mut broken = verdicts.clone();
        broken[0].relation = Relation::StrictlyAbove; // CL above l ...
        broken[1].relation = Relation::StrictlyBelow; // ... CL below r ...
        assert!(!verdict_cycles(&broken).is_empty());
    }
}
