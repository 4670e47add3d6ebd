//! Bitset evaluation of logic towers over a fixed variable set.
//!
//! Every formula is reduced to an *item*: its variable mask plus, for each
//! matrix consulted by the logics, the set of valuations (of the evaluator's
//! variables) designating it. Every logic built from matrices with `left`,
//! `right` and `meet` answers depends on premises and conclusion only
//! through their items, so fragment sweeps can run over distinct items.

use std::collections::HashMap;

use smallvec::SmallVec;

use crate::algebra::MatrixClass;
use crate::error::{Error, Result};
use crate::formula::{Formula, Name};
use crate::logic::{Kind, Logic};

/// Interned item handle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ItemId(u32);

impl ItemId {
    /// A variable outside every premise, used for antitheorem queries.
    pub const FRESH: ItemId = ItemId(u32::MAX);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

const FRESH_BIT: u64 = 1 << 63;
const MAX_ROWS: usize = 1 << 22;

#[derive(Debug)]
struct MatrixSlot {
    offset: usize,
    words: usize,
    last_mask: u64,
    full: bool,
}

#[derive(Debug)]
struct RootSlot {
    class: MatrixClass,
    matrices: Vec<MatrixSlot>,
}

#[derive(Debug, Clone, Copy)]
enum Node {
    Base(usize),
    Left(usize),
    Right(usize),
    Meet(usize, usize),
}

/// A logic tower translated to item operations of one evaluator.
#[derive(Debug, Clone)]
pub struct CompiledLogic {
    nodes: Vec<Node>,
    top: usize,
}

#[derive(Debug)]
pub struct Evaluator {
    vars: Vec<Name>,
    roots: Vec<RootSlot>,
    stride: usize,
    masks: Vec<u64>,
    words: Vec<u64>,
    representatives: Vec<Formula>,
    index: HashMap<(u64, Box<[u64]>), ItemId>,
}

impl Evaluator {
    /// Evaluator over `vars` able to run every logic in `logics`.
    pub fn new(vars: &[Name], logics: &[&Logic]) -> Result<Self> {
        if vars.len() > 63 {
            return Err(Error::Fragment("at most 63 variables are supported".into()));
        }
        let mut classes: Vec<&MatrixClass> = Vec::new();
        for logic in logics {
            for root in logic.roots() {
                if !classes.contains(&root) {
                    classes.push(root);
                }
            }
        }
        let mut offset = 0;
        let mut roots = Vec::new();
        for class in classes {
            let mut matrices = Vec::new();
            for m in class.matrices() {
                let rows = m
                    .algebra()
                    .size()
                    .checked_pow(vars.len() as u32)
                    .filter(|&r| r <= MAX_ROWS)
                    .ok_or_else(|| {
                        Error::Fragment("too many valuations for a bitset sweep".into())
                    })?;
                let words = rows.div_ceil(64);
                let tail = rows % 64;
                matrices.push(MatrixSlot {
                    offset,
                    words,
                    last_mask: if tail == 0 {
                        u64::MAX
                    } else {
                        (1u64 << tail) - 1
                    },
                    full: m.designates_everything(),
                });
                offset += words;
            }
            roots.push(RootSlot {
                class: class.clone(),
                matrices,
            });
        }
        Ok(Self {
            vars: vars.to_vec(),
            roots,
            stride: offset,
            masks: Vec::new(),
            words: Vec::new(),
            representatives: Vec::new(),
            index: HashMap::new(),
        })
    }

    pub fn vars(&self) -> &[Name] {
        &self.vars
    }

    pub fn len(&self) -> usize {
        self.masks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masks.is_empty()
    }

    /// The first formula interned to `item`.
    pub fn representative(&self, item: ItemId) -> &Formula {
        &self.representatives[item.index()]
    }

    pub fn intern(&mut self, formula: &Formula) -> Result<ItemId> {
        let mut mask = 0u64;
        for v in formula.vars() {
            let pos = self
                .vars
                .iter()
                .position(|w| *w == v)
                .ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
            mask |= 1 << pos;
        }
        let mut words = vec![0u64; self.stride];
        for root in &self.roots {
            for (m, slot) in root.class.matrices().iter().zip(&root.matrices) {
                let values = m.algebra().evaluate_all(formula, &self.vars)?;
                for (row, v) in values.into_iter().enumerate() {
                    if m.is_designated(v) {
                        words[slot.offset + row / 64] |= 1 << (row % 64);
                    }
                }
            }
        }
        let key = (mask, words.into_boxed_slice());
        if let Some(&id) = self.index.get(&key) {
            return Ok(id);
        }
        let id = ItemId(self.masks.len() as u32);
        self.masks.push(mask);
        self.words.extend_from_slice(&key.1);
        self.representatives.push(formula.clone());
        self.index.insert(key, id);
        Ok(id)
    }

    pub fn compile(&self, logic: &Logic) -> CompiledLogic {
        let mut nodes = Vec::new();
        let top = self.compile_node(logic, &mut nodes);
        CompiledLogic { nodes, top }
    }

    fn compile_node(&self, logic: &Logic, nodes: &mut Vec<Node>) -> usize {
        let node = match logic.kind() {
            Kind::Matrices(class) => {
                let r = self
                    .roots
                    .iter()
                    .position(|slot| slot.class == *class)
                    .expect("evaluator built for this logic");
                Node::Base(r)
            }
            Kind::Left(inner) => Node::Left(self.compile_node(inner, nodes)),
            Kind::Right(inner) => Node::Right(self.compile_node(inner, nodes)),
            Kind::Meet(a, b) => {
                let a = self.compile_node(a, nodes);
                let b = self.compile_node(b, nodes);
                Node::Meet(a, b)
            }
        };
        nodes.push(node);
        nodes.len() - 1
    }

    fn mask(&self, item: ItemId) -> u64 {
        if item == ItemId::FRESH {
            FRESH_BIT
        } else {
            self.masks[item.index()]
        }
    }

    fn row(&self, item: ItemId) -> &[u64] {
        let start = item.index() * self.stride;
        &self.words[start..start + self.stride]
    }

    pub fn entails(&self, logic: &CompiledLogic, premises: &[ItemId], conclusion: ItemId) -> bool {
        self.eval(logic, logic.top, premises, conclusion)
    }

    pub fn is_antitheorem(&self, logic: &CompiledLogic, premises: &[ItemId]) -> bool {
        self.eval(logic, logic.top, premises, ItemId::FRESH)
    }

    fn eval(
        &self,
        logic: &CompiledLogic,
        node: usize,
        premises: &[ItemId],
        conclusion: ItemId,
    ) -> bool {
        match logic.nodes[node] {
            Node::Base(r) => self.base_entails(r, premises, conclusion),
            Node::Left(inner) => {
                let allowed = self.mask(conclusion);
                let delta: SmallVec<[ItemId; 8]> = premises
                    .iter()
                    .copied()
                    .filter(|&p| self.mask(p) & !allowed == 0)
                    .collect();
                self.eval(logic, inner, &delta, conclusion)
            }
            Node::Right(inner) => {
                let covered = premises.iter().fold(0, |acc, &p| acc | self.mask(p));
                (self.mask(conclusion) & !covered == 0
                    && self.eval(logic, inner, premises, conclusion))
                    || self.eval(logic, inner, premises, ItemId::FRESH)
            }
            Node::Meet(a, b) => {
                self.eval(logic, a, premises, conclusion)
                    && self.eval(logic, b, premises, conclusion)
            }
        }
    }

    fn base_entails(&self, root: usize, premises: &[ItemId], conclusion: ItemId) -> bool {
        let rows: SmallVec<[&[u64]; 8]> = premises.iter().map(|&p| self.row(p)).collect();
        for slot in &self.roots[root].matrices {
            if conclusion == ItemId::FRESH {
                // A fresh variable can take any undesignated value.
                if slot.full {
                    continue;
                }
                for w in 0..slot.words {
                    let i = slot.offset + w;
                    let valid = if w + 1 == slot.words {
                        slot.last_mask
                    } else {
                        u64::MAX
                    };
                    if rows.iter().fold(valid, |acc, r| acc & r[i]) != 0 {
                        return false;
                    }
                }
            } else {
                let concl = self.row(conclusion);
                for w in 0..slot.words {
                    let i = slot.offset + w;
                    let valid = if w + 1 == slot.words {
                        slot.last_mask
                    } else {
                        u64::MAX
                    };
                    if rows.iter().fold(valid & !concl[i], |acc, r| acc & r[i]) != 0 {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Calls `visit(premises, conclusion)` for every set of at most
/// `max_premises` distinct items from `items` (smaller sets first, then
/// lexicographic by position) and every conclusion in `items`.
pub fn for_each_inference<F>(items: &[ItemId], max_premises: usize, mut visit: F)
where
    F: FnMut(&[ItemId], ItemId),
{
    let n = items.len();
    let mut chosen: Vec<ItemId> = Vec::with_capacity(max_premises);
    for k in 0..=max_premises.min(n) {
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            chosen.clear();
            chosen.extend(idx.iter().map(|&i| items[i]));
            for &c in items {
                visit(&chosen, c);
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
    }
}

/// Advances a strictly increasing index vector; false after the last one.
pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    for i in (0..k).rev() {
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}
