//! Line-oriented matrix description files.
//!
//! ```text
//! signature: and/2, or/2, not/1
//! elements: 0, n, 1
//! table and: 0,0->0  0,n->n  ...
//! table not: 0->1  n->n  1->0
//! designated: 1, n
//! ```
//!
//! `#` starts a comment. Every table must be total. A nullary connective is
//! written `table top: ->1`.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::algebra::{FiniteAlgebra, FiniteMatrix};
use crate::error::{Error, Result};
use crate::formula::{Name, Signature};

fn load_err(line: usize, message: impl Into<String>) -> Error {
    Error::Load {
        line,
        message: message.into(),
    }
}

/// Parsed file contents before the designated set is interpreted.
struct Parsed {
    algebra: FiniteAlgebra,
    designated: Option<Vec<usize>>,
}

fn split_list(text: &str) -> Vec<&str> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect()
}

fn parse(text: &str) -> Result<Parsed> {
    let mut signature: Option<Signature> = None;
    let mut elements: Option<Vec<Name>> = None;
    let mut tables: Vec<(usize, String, String)> = Vec::new();
    let mut designated: Option<(usize, String)> = None;

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| load_err(line_no, "expected `key: value`"))?;
        let head = head.trim();
        let body = body.trim();
        if head == "signature" {
            let mut pairs = Vec::new();
            for item in split_list(body) {
                let (name, arity) = item.split_once('/').ok_or_else(|| {
                    load_err(line_no, format!("expected name/arity, got `{item}`"))
                })?;
                let arity: usize = arity
                    .trim()
                    .parse()
                    .map_err(|_| load_err(line_no, format!("bad arity in `{item}`")))?;
                pairs.push((name.trim().to_string(), arity));
            }
            signature = Some(Signature::new(pairs).map_err(|e| load_err(line_no, e.to_string()))?);
        } else if head == "elements" {
            elements = Some(split_list(body).into_iter().map(Name::from).collect());
        } else if head == "designated" {
            designated = Some((line_no, body.to_string()));
        } else if let Some(name) = head.strip_prefix("table ") {
            tables.push((line_no, name.trim().to_string(), body.to_string()));
        } else {
            return Err(load_err(line_no, format!("unknown key `{head}`")));
        }
    }

    let signature = signature.ok_or_else(|| load_err(0, "missing `signature:` line"))?;
    let elements = elements.ok_or_else(|| load_err(0, "missing `elements:` line"))?;
    let index: HashMap<&str, usize> = elements
        .iter()
        .enumerate()
        .map(|(i, e)| (&**e, i))
        .collect();
    let n = elements.len();
    let lookup = |line: usize, name: &str| {
        index
            .get(name)
            .copied()
            .ok_or_else(|| load_err(line, format!("unknown element `{name}`")))
    };

    let mut filled: Vec<Option<Vec<Option<usize>>>> = vec![None; signature.len()];
    for (line, name, body) in &tables {
        let c = signature
            .index_of(name)
            .ok_or_else(|| load_err(*line, format!("table for undeclared connective `{name}`")))?;
        let arity = signature.arity(name).unwrap_or(0);
        let slot = filled[c].get_or_insert_with(|| vec![None; n.pow(arity as u32)]);
        for entry in body.split_whitespace() {
            let (args, out) = entry
                .split_once("->")
                .ok_or_else(|| load_err(*line, format!("expected `args->value`, got `{entry}`")))?;
            let args = split_list(args);
            if args.len() != arity {
                return Err(load_err(
                    *line,
                    format!(
                        "`{entry}` has {} argument(s), `{name}` takes {arity}",
                        args.len()
                    ),
                ));
            }
            let mut pos = 0;
            for a in args {
                pos = pos * n + lookup(*line, a)?;
            }
            let out = lookup(*line, out)?;
            if slot[pos].replace(out).is_some_and(|prev| prev != out) {
                return Err(load_err(
                    *line,
                    format!("conflicting entries for `{entry}`"),
                ));
            }
        }
    }

    let mut complete = Vec::with_capacity(signature.len());
    for (c, slot) in filled.into_iter().enumerate() {
        let name = signature.name(c);
        let slot = slot.ok_or_else(|| load_err(0, format!("missing table for `{name}`")))?;
        let missing = slot.iter().filter(|e| e.is_none()).count();
        if missing > 0 {
            return Err(load_err(
                0,
                format!("table `{name}` is not total ({missing} entr(ies) missing)"),
            ));
        }
        complete.push(slot.into_iter().flatten().collect());
    }

    let algebra = FiniteAlgebra::new(signature, elements.clone(), complete)
        .map_err(|e| load_err(0, e.to_string()))?;
    let designated = designated
        .map(|(line, body)| {
            split_list(&body)
                .into_iter()
                .map(|d| lookup(line, d))
                .collect::<Result<Vec<_>>>()
        })
        .transpose()?;
    Ok(Parsed {
        algebra,
        designated,
    })
}

/// Reads a matrix; the `designated:` line is required (it may list nothing).
pub fn parse_matrix(text: &str) -> Result<FiniteMatrix> {
    let parsed = parse(text)?;
    let designated = parsed
        .designated
        .ok_or_else(|| load_err(0, "missing `designated:` line"))?;
    FiniteMatrix::new(parsed.algebra, &designated)
}

/// Reads an algebra, ignoring any designated set.
pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    Ok(parse(text)?.algebra)
}

pub fn load_matrix(path: &Path) -> Result<FiniteMatrix> {
    parse_matrix(&std::fs::read_to_string(path)?)
}

pub fn load_algebra(path: &Path) -> Result<FiniteAlgebra> {
    parse_algebra(&std::fs::read_to_string(path)?)
}

fn write_tables(out: &mut String, algebra: &FiniteAlgebra) {
    let _ = writeln!(out, "signature: {}", algebra.signature());
    let names: Vec<&str> = algebra.elements().iter().map(|e| &**e).collect();
    let _ = writeln!(out, "elements: {}", names.join(", "));
    let n = algebra.size();
    for (c, (name, arity)) in algebra.signature().iter().enumerate() {
        let mut entries = Vec::new();
        for (pos, &value) in algebra.table(c).iter().enumerate() {
            let mut args = vec![0; arity];
            let mut rest = pos;
            for slot in args.iter_mut().rev() {
                *slot = rest % n;
                rest /= n;
            }
            let args: Vec<&str> = args.iter().map(|&a| names[a]).collect();
            entries.push(format!("{}->{}", args.join(","), names[value]));
        }
        let _ = writeln!(out, "table {name}: {}", entries.join("  "));
    }
}

pub fn write_matrix(matrix: &FiniteMatrix) -> String {
    let mut out = String::new();
    write_tables(&mut out, matrix.algebra());
    let designated: Vec<String> = matrix
        .designated_names()
        .iter()
        .map(|d| d.to_string())
        .collect();
    let _ = writeln!(out, "designated: {}", designated.join(", "));
    out
}

pub fn write_algebra(algebra: &FiniteAlgebra) -> String {
    let mut out = String::new();
    write_tables(&mut out, algebra);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const PWK: &str = "\
signature: and/2, or/2, not/1
elements: 0, n, 1
# weak Kleene
table and: 0,0->0  0,n->n  0,1->0  n,0->n  n,n->n  n,1->n  1,0->0  1,n->n  1,1->1
table or:  0,0->0  0,n->n  0,1->1  n,0->n  n,n->n  n,1->n  1,0->1  1,n->n  1,1->1
table not: 0->1  n->n  1->0
designated: 1, n
";

    #[test]
    fn reads_the_documented_example() {
        let m = parse_matrix(PWK).unwrap();
        assert_eq!(m.algebra().size(), 3);
        let names: Vec<String> = m.designated_names().iter().map(|d| d.to_string()).collect();
        assert_eq!(names, ["n", "1"]);
        assert_eq!(m.algebra().apply_named("or", &[0, 2]).unwrap(), 2);
    }

    #[test]
    fn round_trips() {
        let m = parse_matrix(PWK).unwrap();
        let again = parse_matrix(&write_matrix(&m)).unwrap();
        assert_eq!(m, again);
    }

    #[test]
    fn missing_entry_is_a_load_error() {
        let text = PWK.replace("1,1->1\ntable or", "\ntable or");
        let err = parse_matrix(&text).unwrap_err();
        assert!(err.to_string().contains("not total"), "{err}");
    }

    #[test]
    fn other_load_errors() {
        assert!(parse_matrix(&PWK.replace("designated: 1, n", "")).is_err());
        assert!(parse_matrix(&PWK.replace("n->n  1->0", "n->q  1->0")).is_err());
        assert!(parse_matrix(&PWK.replace("table not", "table neg")).is_err());
        assert!(parse_matrix(&PWK.replace("0->1  n->n", "0,0->1  n->n")).is_err());
        assert!(parse_algebra(&PWK.replace("designated: 1, n", "")).is_ok());
        let empty = parse_matrix(&PWK.replace("designated: 1, n", "designated:")).unwrap();
        assert!(empty.designated().is_empty());
    }

    #[test]
    fn constants() {
        let text = "signature: top/0, not/1\nelements: a, b\ntable top: ->b\ntable not: a->b b->a\ndesignated: b\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.algebra().apply_named("top", &[]).unwrap(), 1);
        assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
    }
}
