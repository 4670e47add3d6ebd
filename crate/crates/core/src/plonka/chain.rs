use std::collections::BTreeMap;

use crate::algebra::{FiniteAlgebra, FiniteMatrix};
use crate::error::Result;
use crate::formula::Name;
use crate::transforms::{Step, VISequence};

use super::system::{DirectSystem, SystemKind};
use super::FiniteSemilattice;

const TOP_NAMES: [&str; 8] = ["n", "m", "p", "q", "s", "t", "u", "v"];

fn fresh_top(taken: &[Name]) -> Name {
    TOP_NAMES
        .iter()
        .map(|s| s.to_string())
        .chain((1..).map(|k| format!("e{k}")))
        .find(|c| !taken.iter().any(|t| **t == **c))
        .map(Name::from)
        .expect("unbounded candidates")
}

/// Stacks one trivial component on top of `base` per step of `seq`.
///
/// Each step sums the matrix built so far with a one-element matrix above
/// it, as an `l`-system (top designated) or an `r`-system (top not
/// designated). Base elements keep their names; the tops are named
/// `n, m, p, q, ...` in order.
pub fn canonical_chain_matrix(base: &FiniteMatrix, seq: &VISequence) -> Result<FiniteMatrix> {
    let mut current = base.clone();
    for step in seq.steps() {
        let names: Vec<Name> = current.algebra().elements().to_vec();
        let top_name = fresh_top(&names);
        let top = FiniteAlgebra::trivial(current.signature().clone(), &top_name)?;
        let (kind, top_filter): (SystemKind, &[usize]) = match step {
            Step::L => (SystemKind::Left, &[0]),
            Step::R => (SystemKind::Right, &[]),
        };
        let mut homs = BTreeMap::new();
        homs.insert((0, 1), vec![0; names.len()]);
        let system = DirectSystem::new(
            kind,
            FiniteSemilattice::chain(vec![Name::from("i0"), Name::from("i1")])?,
            vec![current, FiniteMatrix::new(top, top_filter)?],
            homs,
        )?;
        let sum = system.sum()?;
        let mut renamed = names;
        renamed.push(top_name);
        let designated = sum.designated();
        current = FiniteMatrix::new(sum.algebra().renamed(renamed)?, &designated)?;
    }
    Ok(current)
}
