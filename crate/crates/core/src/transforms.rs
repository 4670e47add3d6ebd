//! Sequences of left/right companions and their normal forms.

use std::fmt;
use std::str::FromStr;

use crate::algebra::MatrixClass;
use crate::error::{Error, Result};
use crate::formula::{vars_of_set, Formula};
use crate::logic::{AntitheoremStatus, Logic};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Step {
    L,
    R,
}

/// A word over `{l, r}`, applied left to right.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VISequence(Vec<Step>);

impl VISequence {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn steps(&self) -> &[Step] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, step: Step) -> bool {
        self.0.contains(&step)
    }

    pub fn then(&self, other: &VISequence) -> VISequence {
        VISequence(self.0.iter().chain(&other.0).copied().collect())
    }

    /// Every word of length at most `max_len`, shortest first, `l` before `r`.
    pub fn all_up_to(max_len: usize) -> Vec<VISequence> {
        let mut out = vec![VISequence::empty()];
        let mut frontier = vec![VISequence::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for s in &frontier {
                for step in [Step::L, Step::R] {
                    let mut w = s.0.clone();
                    w.push(step);
                    next.push(VISequence(w));
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }
}

impl FromStr for VISequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "ε" || s == "-" {
            return Ok(Self::empty());
        }
        s.chars()
            .map(|c| match c {
                'l' => Ok(Step::L),
                'r' => Ok(Step::R),
                _ => Err(Error::Sequence(s.to_string())),
            })
            .collect::<Result<Vec<_>>>()
            .map(VISequence)
    }
}

impl fmt::Display for VISequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.0 {
            f.write_str(match step {
                Step::L => "l",
                Step::R => "r",
            })?;
        }
        Ok(())
    }
}

/// What the normal form of a sequence depends on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BaseProfile {
    pub has_antitheorems: bool,
    /// Reported alongside the normal form; it does not change it.
    pub has_theorems: bool,
}

impl BaseProfile {
    /// Profile of a logic; theorems are searched in `theorem_fragment`.
    pub fn of(base: &Logic, theorem_fragment: &crate::fragment::FragmentSpec) -> Result<Self> {
        let has_antitheorems = match base.antitheorem_status() {
            AntitheoremStatus::Witness(_) => true,
            AntitheoremStatus::NoneProven => false,
            AntitheoremStatus::Unknown => {
                return Err(Error::Antitheorem(format!(
                    "antitheorem status of {} is unknown",
                    base.label()
                )))
            }
        };
        Ok(Self {
            has_antitheorems,
            has_theorems: base.has_theorem_in_fragment(theorem_fragment).is_some(),
        })
    }
}

/// Rewrites a sequence to a fixpoint of the collapse rules.
///
/// Always `ll → l` and `rr → r`. With antitheorems, `rlrl → lrl` and
/// `lrlr → lrl`; without, any word containing `rl` becomes `rl`.
pub fn canonicalize(seq: &VISequence, profile: BaseProfile) -> VISequence {
    let mut word = seq.to_string();
    loop {
        let before = word.clone();
        word = word.replace("ll", "l").replace("rr", "r");
        if profile.has_antitheorems {
            word = word.replace("rlrl", "lrl").replace("lrlr", "lrl");
        } else if word.contains("rl") {
            word = "rl".to_string();
        }
        if word == before {
            break;
        }
    }
    word.parse().expect("rewrites keep the alphabet")
}

/// The canonical sequences for a profile, in display order.
pub fn canonical_sequences(profile: BaseProfile) -> Vec<VISequence> {
    let words: &[&str] = if profile.has_antitheorems {
        &["", "l", "r", "lr", "rl", "rlr", "lrl"]
    } else {
        &["", "l", "r", "lr", "rl"]
    };
    words
        .iter()
        .map(|w| w.parse().expect("valid word"))
        .collect()
}

/// Applies the sequence to `base`, left to right.
pub fn apply_sequence(base: &Logic, seq: &VISequence) -> Logic {
    seq.steps()
        .iter()
        .fold(base.clone(), |acc, step| match step {
            Step::L => acc.left(),
            Step::R => acc.right(),
        })
}

/// A base class, a sequence and the binary term used as partition function.
#[derive(Debug, Clone)]
pub struct DerivedLogicSpec {
    pub base: MatrixClass,
    pub sequence: VISequence,
    pub partition_term: Formula,
}

impl DerivedLogicSpec {
    pub fn new(base: MatrixClass, sequence: VISequence, partition_term: Formula) -> Result<Self> {
        let vars = partition_term.vars();
        if vars.len() != 2 {
            return Err(Error::NotBivariate(format!(
                "{partition_term} has {} variable(s)",
                vars.len()
            )));
        }
        partition_term.check_signature(base.signature())?;
        Ok(Self {
            base,
            sequence,
            partition_term,
        })
    }
}

pub fn derive(spec: &DerivedLogicSpec) -> Logic {
    apply_sequence(
        &Logic::from_matrices("base", spec.base.clone()),
        &spec.sequence,
    )
}

/// Smallest `Δ ⊆ Γ` (by size, then position) with `Δ ⊢ φ` in `base` and
/// `vars(Δ) = vars(φ)`.
pub fn factorization_witness(
    base: &Logic,
    premises: &[Formula],
    conclusion: &Formula,
) -> Option<Vec<Formula>> {
    let target = conclusion.vars();
    let usable: Vec<&Formula> = premises
        .iter()
        .filter(|p| p.vars().is_subset(&target))
        .collect();
    let n = usable.len();
    if n > 20 {
        return None;
    }
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by_key(|m| (m.count_ones(), m.reverse_bits()));
    masks.into_iter().find_map(|mask| {
        let delta: Vec<&Formula> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| usable[i])
            .collect();
        (vars_of_set(delta.iter().copied()) == target && base.entails_refs(&delta, conclusion))
            .then(|| delta.into_iter().cloned().collect())
    })
}
