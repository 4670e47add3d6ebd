//! Bounded slices of the formula algebra used for exhaustive checks.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{is_identifier, Formula, Name, Signature};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FragmentSpec {
    pub variables: Vec<String>,
    pub max_depth: usize,
    pub max_premises: usize,
}

impl FragmentSpec {
    pub fn new(variables: &[&str], max_depth: usize, max_premises: usize) -> Result<Self> {
        let spec = Self {
            variables: variables.iter().map(|v| v.to_string()).collect(),
            max_depth,
            max_premises,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Variables `x, y, z`, depth 2, up to three premises.
    pub fn default_fragment() -> Self {
        Self::new(&["x", "y", "z"], 2, 3).expect("valid default")
    }

    pub fn var_names(&self) -> Vec<Name> {
        self.variables
            .iter()
            .map(|v| Name::from(v.as_str()))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        if self.variables.is_empty() {
            return Err(Error::Fragment("at least one variable is required".into()));
        }
        for (i, v) in self.variables.iter().enumerate() {
            if !is_identifier(v) {
                return Err(Error::Fragment(format!("`{v}` is not a variable name")));
            }
            if self.variables[..i].contains(v) {
                return Err(Error::Fragment(format!("duplicate variable `{v}`")));
            }
        }
        Ok(())
    }

    /// Applies `vars=x,y;depth=2;premises=3`-style overrides; absent keys keep their value.
    pub fn with_overrides(&self, text: &str) -> Result<Self> {
        let mut out = self.clone();
        for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::Fragment(format!("expected key=value, got `{part}`")))?;
            let value = value.trim();
            match key.trim() {
                "vars" => {
                    out.variables = value
                        .split(',')
                        .map(|v| v.trim().to_string())
                        .filter(|v| !v.is_empty())
                        .collect()
                }
                "depth" => {
                    out.max_depth = value
                        .parse()
                        .map_err(|_| Error::Fragment(format!("bad depth `{value}`")))?
                }
                "premises" => {
                    out.max_premises = value
                        .parse()
                        .map_err(|_| Error::Fragment(format!("bad premise bound `{value}`")))?
                }
                other => return Err(Error::Fragment(format!("unknown key `{other}`"))),
            }
        }
        out.validate()?;
        Ok(out)
    }
}

impl FromStr for FragmentSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::default_fragment().with_overrides(s)
    }
}

impl fmt::Display for FragmentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "vars={};depth={};premises={}",
            self.variables.join(","),
            self.max_depth,
            self.max_premises
        )
    }
}

/// All formulas over `spec.variables` of depth at most `spec.max_depth`.
///
/// Ordered by depth; within a depth by connective (declaration order) and
/// then lexicographically by the positions of the arguments in this same
/// listing.
pub fn enumerate_fragment(sig: &Signature, spec: &FragmentSpec) -> Vec<Formula> {
    let mut all: Vec<Formula> = spec.variables.iter().map(|v| Formula::var(v)).collect();
    // `all[..levels[d]]` holds every formula of depth <= d.
    let mut levels = vec![all.len()];
    for depth in 1..=spec.max_depth {
        let below = levels[depth - 1];
        let strictly_below = if depth >= 2 { levels[depth - 2] } else { 0 };
        let mut next = Vec::new();
        for (name, arity) in sig.iter() {
            if arity == 0 {
                if depth == 1 {
                    next.push(Formula::App(name.clone(), Vec::new()));
                }
                continue;
            }
            let mut idx = vec![0usize; arity];
            loop {
                // Exactly one more than the deepest argument.
                if idx.iter().any(|&i| i >= strictly_below) {
                    let args = idx.iter().map(|&i| all[i].clone()).collect();
                    next.push(Formula::App(name.clone(), args));
                }
                if !advance(&mut idx, below) {
                    break;
                }
            }
        }
        all.extend(next);
        levels.push(all.len());
    }
    all
}

/// Odometer step over `[0, radix)^k`, last position fastest.
pub(crate) fn advance(idx: &mut [usize], radix: usize) -> bool {
    for slot in idx.iter_mut().rev() {
        *slot += 1;
        if *slot < radix {
            return true;
        }
        *slot = 0;
    }
    false
}

/// Formulas from `fragment` whose variables all lie in `vars`.
pub fn restrict_to_vars(fragment: &[Formula], vars: &[Name]) -> Vec<Formula> {
    fragment
        .iter()
        .filter(|f| f.vars().iter().all(|v| vars.contains(v)))
        .cloned()
        .collect()
}
