//! Direct-system description files.
//!
//! ```text
//! kind: l
//! semilattice: i0, i1
//! join: i0,i1->i1
//! component i0: wk.i0.mat
//! component i1: wk.i1.mat
//! hom i0 i1: 0->n  1->n
//! ```
//!
//! Joins are symmetric and idempotent, so only `i,j` with `i ≠ j` needs
//! listing once. `hom i i` defaults to the identity.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::algebra::FiniteMatrix;
use crate::error::{Error, Result};
use crate::formula::Name;
use crate::matrix_file;

use super::system::{DirectSystem, SystemKind};
use super::FiniteSemilattice;

fn load_err(line: usize, message: impl Into<String>) -> Error {
    Error::Load {
        line,
        message: message.into(),
    }
}

/// Parses a system, resolving component references through `load`.
pub fn parse_system<F>(text: &str, mut load: F) -> Result<DirectSystem>
where
    F: FnMut(&str) -> Result<FiniteMatrix>,
{
    let mut kind = None;
    let mut names: Option<Vec<Name>> = None;
    let mut joins: Vec<(usize, String)> = Vec::new();
    let mut components: Vec<(usize, String, String)> = Vec::new();
    let mut homs: Vec<(usize, String, String, String)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (head, body) = line
            .split_once(':')
            .ok_or_else(|| load_err(line_no, "expected `key: value`"))?;
        let (head, body) = (head.trim(), body.trim());
        let words: Vec<&str> = head.split_whitespace().collect();
        match words.as_slice() {
            ["kind"] => {
                kind = Some(
                    body.parse::<SystemKind>()
                        .map_err(|e| load_err(line_no, e.to_string()))?,
                )
            }
            ["semilattice"] => {
                names = Some(
                    body.split(',')
                        .map(str::trim)
                        .filter(|s| !s.is_empty())
                        .map(Name::from)
                        .collect(),
                )
            }
            ["join"] => joins.push((line_no, body.to_string())),
            ["component", idx] => components.push((line_no, idx.to_string(), body.to_string())),
            ["hom", i, j] => homs.push((line_no, i.to_string(), j.to_string(), body.to_string())),
            _ => return Err(load_err(line_no, format!("unknown key `{head}`"))),
        }
    }

    let kind = kind.ok_or_else(|| load_err(0, "missing `kind:` line"))?;
    let names = names.ok_or_else(|| load_err(0, "missing `semilattice:` line"))?;
    let n = names.len();
    let index = |line: usize, name: &str| {
        names
            .iter()
            .position(|x| &**x == name)
            .ok_or_else(|| load_err(line, format!("unknown index `{name}`")))
    };

    let mut table: Vec<Option<usize>> = vec![None; n * n];
    for i in 0..n {
        table[i * n + i] = Some(i);
    }
    for (line, body) in &joins {
        for entry in body.split_whitespace() {
            let (args, out) = entry
                .split_once("->")
                .ok_or_else(|| load_err(*line, format!("expected `i,j->k`, got `{entry}`")))?;
            let (a, b) = args
                .split_once(',')
                .ok_or_else(|| load_err(*line, format!("expected `i,j->k`, got `{entry}`")))?;
            let (a, b, out) = (
                index(*line, a.trim())?,
                index(*line, b.trim())?,
                index(*line, out.trim())?,
            );
            for slot in [a * n + b, b * n + a] {
                if table[slot].replace(out).is_some_and(|prev| prev != out) {
                    return Err(load_err(*line, format!("conflicting join for `{entry}`")));
                }
            }
        }
    }
    let join = table
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            v.ok_or_else(|| {
                load_err(
                    0,
                    format!(
                        "join of `{}` and `{}` is missing",
                        names[k / n],
                        names[k % n]
                    ),
                )
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let semilattice =
        FiniteSemilattice::new(names.clone(), join).map_err(|e| load_err(0, e.to_string()))?;

    let mut slots: Vec<Option<FiniteMatrix>> = vec![None; n];
    for (line, idx, path) in &components {
        let i = index(*line, idx)?;
        let m =
            load(path).map_err(|e| load_err(*line, format!("component `{idx}` ({path}): {e}")))?;
        slots[i] = Some(m);
    }
    let components = slots
        .into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| load_err(0, format!("missing component for `{}`", names[i]))))
        .collect::<Result<Vec<_>>>()?;

    let mut maps = BTreeMap::new();
    for (line, i, j, body) in &homs {
        let (a, b) = (index(*line, i)?, index(*line, j)?);
        let (src, dst) = (components[a].algebra(), components[b].algebra());
        let mut map: Vec<Option<usize>> = vec![None; src.size()];
        for entry in body.split_whitespace() {
            let (x, y) = entry
                .split_once("->")
                .ok_or_else(|| load_err(*line, format!("expected `a->b`, got `{entry}`")))?;
            let x = src
                .element_index(x.trim())
                .ok_or_else(|| load_err(*line, format!("`{x}` is not an element of `{i}`")))?;
            let y = dst
                .element_index(y.trim())
                .ok_or_else(|| load_err(*line, format!("`{y}` is not an element of `{j}`")))?;
            map[x] = Some(y);
        }
        let map = map
            .into_iter()
            .enumerate()
            .map(|(x, y)| {
                y.ok_or_else(|| {
                    load_err(
                        *line,
                        format!("hom {i} {j} misses `{}`", src.element_name(x)),
                    )
                })
            })
            .collect::<Result<Vec<_>>>()?;
        maps.insert((a, b), map);
    }
    DirectSystem::new(kind, semilattice, components, maps)
}

/// Reads a system file; component paths are relative to its directory.
pub fn load_system(path: &Path) -> Result<DirectSystem> {
    let text = std::fs::read_to_string(path)?;
    let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
    parse_system(&text, |rel| matrix_file::load_matrix(&dir.join(rel)))
}

/// Renders a system; `component_paths[i]` is written for component `i`.
pub fn write_system(system: &DirectSystem, component_paths: &[String]) -> String {
    let sl = &system.semilattice;
    let mut out = String::new();
    let _ = writeln!(out, "kind: {}", system.kind);
    let names: Vec<&str> = sl.names().iter().map(|n| &**n).collect();
    let _ = writeln!(out, "semilattice: {}", names.join(", "));
    let mut entries = Vec::new();
    for i in 0..sl.len() {
        for j in i + 1..sl.len() {
            entries.push(format!(
                "{},{}->{}",
                names[i],
                names[j],
                names[sl.join(i, j)]
            ));
        }
    }
    if !entries.is_empty() {
        let _ = writeln!(out, "join: {}", entries.join("  "));
    }
    for (i, path) in component_paths.iter().enumerate() {
        let _ = writeln!(out, "component {}: {path}", names[i]);
    }
    for (&(i, j), map) in &system.homs {
        if i == j {
            continue;
        }
        let (src, dst) = (
            system.components[i].algebra(),
            system.components[j].algebra(),
        );
        let pairs: Vec<String> = map
            .iter()
            .enumerate()
            .map(|(a, &b)| format!("{}->{}", src.element_name(a), dst.element_name(b)))
            .collect();
        let _ = writeln!(out, "hom {} {}: {}", names[i], names[j], pairs.join("  "));
    }
    out
}
