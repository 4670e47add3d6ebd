//! The concrete inferences separating the variable-inclusion companions.
//!
//! Each claim instantiates a separating inference with the given partition
//! term `π` and antitheorem `Σ(x)` and evaluates it in one derived logic.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{display_set, Formula, Substitution};
use crate::fragment::FragmentSpec;
use crate::lattice::Inference;
use crate::logic::{AntitheoremStatus, Logic};
use crate::plonka::PartitionTerm;
use crate::transforms::apply_sequence;

/// Resolves a logic name against `base`: a sequence word (`ε` or `-` for
/// the base itself) or two such words joined by `&`.
pub fn resolve_oracle(base: &Logic, name: &str) -> Result<Logic> {
    if let Some((a, b)) = name.split_once('&') {
        return resolve_oracle(base, a)?.meet(&resolve_oracle(base, b)?);
    }
    let name = name.trim();
    if name.is_empty() || name == base.label() {
        return Ok(base.clone());
    }
    Ok(apply_sequence(base, &name.parse()?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessClaim {
    /// The relation the inference separates, e.g. `rl not below lr`.
    pub relation: String,
    pub oracle: String,
    pub inference: Inference,
    pub expected: bool,
    pub observed: bool,
}

impl WitnessClaim {
    pub fn passed(&self) -> bool {
        self.expected == self.observed
    }
}

impl fmt::Display for WitnessClaim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = |b: bool| if b { "|-" } else { "|/-" };
        write!(
            f,
            "{} {} {} {}  [{}] {}",
            if self.passed() { "PASS" } else { "FAIL" },
            display_set(&self.inference.premises),
            sign(self.expected),
            self.inference.conclusion,
            self.oracle,
            self.relation
        )?;
        if !self.passed() {
            write!(f, " (observed {})", sign(self.observed))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct WitnessReport {
    pub base: String,
    pub partition_term: String,
    pub antitheorem: Option<Vec<String>>,
    pub claims: Vec<WitnessClaim>,
    pub skipped: Vec<String>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.claims.iter().all(WitnessClaim::passed)
    }

    pub fn failures(&self) -> Vec<&WitnessClaim> {
        self.claims.iter().filter(|c| !c.passed()).collect()
    }

    /// Claims about one relation.
    pub fn about(&self, relation: &str) -> Vec<&WitnessClaim> {
        self.claims
            .iter()
            .filter(|c| c.relation == relation)
            .collect()
    }

    /// Distinct inferences, in claim order.
    pub fn inferences(&self) -> Vec<Inference> {
        let mut out: Vec<Inference> = Vec::new();
        for c in &self.claims {
            if !out.contains(&c.inference) {
                out.push(c.inference.clone());
            }
        }
        out
    }
}

impl fmt::Display for WitnessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "witness suite for {} with {}",
            self.base, self.partition_term
        )?;
        if let Some(sigma) = &self.antitheorem {
            write!(f, " and antitheorem {{{}}}", sigma.join(", "))?;
        }
        writeln!(f)?;
        for c in &self.claims {
            writeln!(f, "  {c}")?;
        }
        for s in &self.skipped {
            writeln!(f, "  skipped: {s}")?;
        }
        Ok(())
    }
}

pub const RL_NOT_BELOW_LR: &str = "rl not below lr";
pub const LR_NOT_BELOW_RL: &str = "lr not below rl";
pub const MEET_ABOVE: &str = "l&r strictly above lr and rl";
pub const RLR_BELOW_RL: &str = "rlr strictly below rl";
pub const LRL_BELOW_LR: &str = "lrl strictly below lr";
pub const RLR_BELOW_MEET: &str = "rlr strictly below lr&rl";
pub const LRL_BELOW_RLR: &str = "lrl strictly below rlr";
pub const L_R_INCOMPARABLE: &str = "l and r incomparable";
pub const LR_BELOW_L_R: &str = "lr strictly below l and r";
pub const THEOREM_SEPARATES: &str = "a theorem separates rl from lr";

/// Evaluates the separating inferences for `base` with partition term `pi`.
///
/// `sigma` must be given exactly when the base has antitheorems; it is
/// re-checked. The theorem used for the last claim is the first theorem
/// over `x` of depth at most two; the claim is skipped if there is none.
pub fn witness_suite(
    base: &Logic,
    pi: &Formula,
    sigma: Option<&[Formula]>,
) -> Result<WitnessReport> {
    let term = PartitionTerm::new(pi)?;
    pi.check_signature(base.signature())?;
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
    let var = |v: &str| Formula::var(v);
    let (x, y, z) = (var("x"), var("y"), var("z"));

    let sigma_x: Option<Vec<Formula>> = match (sigma, has_antitheorems) {
        (Some(s), true) => {
            base.verify_antitheorem(s)?;
            // Rename the single variable of Σ to x.
            let vars = crate::formula::vars_of_set(s);
            let rename: Substitution = vars.iter().map(|v| (v.clone(), x.clone())).collect();
            Some(rename.apply_all(s))
        }
        (None, false) => None,
        (Some(_), false) => {
            return Err(Error::Antitheorem(format!(
                "{} has no antitheorems, but one was supplied",
                base.label()
            )))
        }
        (None, true) => {
            return Err(Error::Antitheorem(format!(
                "{} has antitheorems; supply one",
                base.label()
            )))
        }
    };

    let mut report = WitnessReport {
        base: base.label().to_string(),
        partition_term: pi.to_string(),
        antitheorem: sigma_x
            .as_ref()
            .map(|s| s.iter().map(ToString::to_string).collect()),
        claims: Vec::new(),
        skipped: Vec::new(),
    };
    let mut claim = |relation: &str, oracle: &str, inference: &Inference, expected: bool| {
        let logic = resolve_oracle(base, oracle)?;
        report.claims.push(WitnessClaim {
            relation: relation.to_string(),
            oracle: oracle.to_string(),
            inference: inference.clone(),
            expected,
            observed: inference.holds_in(&logic),
        });
        Ok::<(), Error>(())
    };

    let pi_xy = term.instantiate(&x, &y);
    if let Some(sig) = &sigma_x {
        let explosive = Inference::new(sig.clone(), pi_xy.clone());
        let mut w_premises = vec![y.clone()];
        w_premises.extend(sig.iter().map(|e| term.instantiate(e, &z)));
        let w = Inference::new(w_premises, term.instantiate(&y, &z));
        let mut g_premises = vec![term.instantiate(&y, &z)];
        g_premises.extend(sig.iter().cloned());
        let g = Inference::new(g_premises, term.instantiate(&y, &x));

        claim(RL_NOT_BELOW_LR, "rl", &explosive, true)?;
        claim(RL_NOT_BELOW_LR, "lr", &explosive, false)?;
        claim(LR_NOT_BELOW_RL, "lr", &w, true)?;
        claim(LR_NOT_BELOW_RL, "rl", &w, false)?;
        claim(MEET_ABOVE, "l&r", &explosive, true)?;
        claim(MEET_ABOVE, "l&r", &w, true)?;
        claim(RLR_BELOW_RL, "rlr", &explosive, false)?;
        claim(LRL_BELOW_LR, "lrl", &w, false)?;
        claim(RLR_BELOW_MEET, "lr", &explosive, true)?;
        claim(RLR_BELOW_MEET, "rl", &explosive, true)?;
        claim(RLR_BELOW_MEET, "rlr", &explosive, false)?;
        claim(LRL_BELOW_RLR, "rlr", &g, true)?;
        claim(LRL_BELOW_RLR, "rlrl", &g, false)?;
    }

    let collapse = Inference::new(vec![pi_xy.clone()], x.clone());
    let expand = Inference::new(vec![x.clone()], pi_xy.clone());
    claim(L_R_INCOMPARABLE, "r", &collapse, true)?;
    claim(L_R_INCOMPARABLE, "l", &collapse, false)?;
    claim(L_R_INCOMPARABLE, "l", &expand, true)?;
    claim(L_R_INCOMPARABLE, "r", &expand, false)?;
    claim(LR_BELOW_L_R, "lr", &collapse, false)?;
    claim(LR_BELOW_L_R, "lr", &expand, false)?;

    let over_x = FragmentSpec::new(&["x"], 2, 0)?;
    match base.has_theorem_in_fragment(&over_x) {
        Some(theorem) => {
            let inf = Inference::new(vec![pi_xy.clone()], theorem);
            claim(THEOREM_SEPARATES, "lr", &inf, true)?;
            claim(THEOREM_SEPARATES, "rl", &inf, false)?;
        }
        None => report.skipped.push(format!(
            "{THEOREM_SEPARATES}: no theorem over x up to depth 2"
        )),
    }
    Ok(report)
}
