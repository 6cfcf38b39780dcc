use std::collections::{BTreeMap, BTreeSet};

use super::derivation::Derivation;
use super::glushkov::Glushkov;
use super::model::{validate_model, OfsModel};
use crate::error::{Error, Result};
use crate::token::Token;

#[derive(Debug, Clone, Default)]
pub(crate) struct TrieNode {
    pub children: BTreeMap<Token, usize>,
    pub end: bool,
}

/// Prefix tree of a level-0 string set; node 0 is the root.
#[derive(Debug, Clone)]
pub(crate) struct Trie {
    pub nodes: Vec<TrieNode>,
}

impl Trie {
    fn build<'a>(strings: impl IntoIterator<Item = &'a Vec<Token>>) -> Self {
        let mut nodes = vec![TrieNode::default()];
        for s in strings {
            let mut at = 0;
            for t in s {
                at = match nodes[at].children.get(t) {
                    Some(&next) => next,
                    None => {
                        nodes.push(TrieNode::default());
                        let next = nodes.len() - 1;
                        nodes[at].children.insert(t.clone(), next);
                        next
                    }
                };
            }
            nodes[at].end = true;
        }
        Trie { nodes }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Slot {
    pub name: String,
    /// Strings in sorted order.
    pub strings: Vec<Vec<Token>>,
    pub trie: Trie,
}

/// Compiled form of a model: a position automaton whose positions are
/// level-0 slots, each expanded to the trie of its string set. States are
/// (position, trie node) pairs plus the initial state.
#[derive(Debug, Clone)]
pub struct Automaton {
    pub(crate) start: Option<String>,
    pub(crate) glushkov: Glushkov,
    pub(crate) slots: Vec<Slot>,
    pub(crate) terminals: BTreeSet<Token>,
}

/// NFA configuration: between slots (after a position, or at the start) or
/// inside a slot at a trie node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Config {
    Start,
    After(usize),
    Inside(usize, usize),
}

/// Compiles a valid model whose level-0 sets are all non-empty.
pub fn compile(model: &OfsModel) -> Result<Automaton> {
    if model.is_empty() {
        return Ok(Automaton {
            start: None,
            glushkov: Glushkov::build(model),
            slots: Vec::new(),
            terminals: model.terminals.clone(),
        });
    }
    let report = validate_model(model);
    if !report.is_valid() {
        return Err(Error::InvalidModel(report));
    }
    if let Some(rule) = model.base.iter().find(|r| r.rhs.is_empty()) {
        return Err(Error::UnprunedModel(rule.name.clone()));
    }
    let slots = model
        .base
        .iter()
        .map(|r| Slot {
            name: r.name.clone(),
            strings: r.rhs.iter().cloned().collect(),
            trie: Trie::build(r.rhs.iter()),
        })
        .collect();
    Ok(Automaton {
        start: model.start().map(str::to_string),
        glushkov: Glushkov::build(model),
        slots,
        terminals: model.terminals.clone(),
    })
}

impl Automaton {
    pub fn terminals(&self) -> &BTreeSet<Token> {
        &self.terminals
    }

    /// Number of NFA states: the initial state plus one per (position, trie node).
    pub fn state_count(&self) -> usize {
        1 + self
            .glushkov
            .positions
            .iter()
            .map(|p| self.slots[p.slot].trie.nodes.len())
            .sum::<usize>()
    }

    pub(crate) fn slot_of(&self, p: usize) -> &Slot {
        &self.slots[self.glushkov.positions[p].slot]
    }

    /// Positions that may follow `c` when it sits between slots.
    pub(crate) fn successors(&self, c: Config) -> Vec<usize> {
        match c {
            Config::Start => self.glushkov.first.clone(),
            Config::After(p) => self.glushkov.follow[p].iter().map(|&(q, _)| q).collect(),
            Config::Inside(..) => Vec::new(),
        }
    }

    pub(crate) fn is_final(&self, c: Config) -> bool {
        match c {
            Config::Start => self.start.is_some() && self.glushkov.nullable,
            Config::After(p) => self.glushkov.last[p],
            Config::Inside(..) => false,
        }
    }

    pub(crate) fn check_tokens(&self, word: &[Token]) -> Result<()> {
        match word.iter().find(|t| !self.terminals.contains(*t)) {
            Some(t) => Err(Error::UnknownToken(t.to_string())),
            None => Ok(()),
        }
    }

    fn closure(&self, set: &mut BTreeSet<Config>) {
        let mut todo: Vec<Config> = set.iter().copied().collect();
        while let Some(c) = todo.pop() {
            let next: Vec<Config> = match c {
                Config::Inside(p, n) if self.slot_of(p).trie.nodes[n].end => vec![Config::After(p)],
                Config::Inside(..) => Vec::new(),
                _ => self
                    .successors(c)
                    .into_iter()
                    .map(|q| Config::Inside(q, 0))
                    .collect(),
            };
            for n in next {
                if set.insert(n) {
                    todo.push(n);
                }
            }
        }
    }

    /// Membership test.
    pub fn accepts(&self, word: &[Token]) -> Result<bool> {
        self.check_tokens(word)?;
        if self.start.is_none() {
            return Ok(false);
        }
        let mut current = BTreeSet::from([Config::Start]);
        self.closure(&mut current);
        for t in word {
            let mut next = BTreeSet::new();
            for c in &current {
                if let Config::Inside(p, n) = *c {
                    if let Some(&m) = self.slot_of(p).trie.nodes[n].children.get(t) {
                        next.insert(Config::Inside(p, m));
                    }
                }
            }
            if next.is_empty() {
                return Ok(false);
            }
            self.closure(&mut next);
            current = next;
        }
        Ok(current.iter().any(|&c| self.is_final(c)))
    }

    pub(crate) fn derivation(&self, path: &[(usize, Vec<Token>)]) -> Derivation {
        let names: Vec<&str> = self.slots.iter().map(|s| s.name.as_str()).collect();
        self.glushkov
            .derivation(self.start.as_deref().unwrap_or(""), &names, path)
    }

    /// First derivation under the fixed search order: successor positions
    /// in canonical order, longest leaf string first.
    pub fn parse(&self, word: &[Token]) -> Result<Option<Derivation>> {
        self.check_tokens(word)?;
        if self.start.is_none() {
            return Ok(None);
        }
        let mut visited = BTreeSet::new();
        let mut path = Vec::new();
        if self.search(word, 0, Config::Start, &mut visited, &mut path) {
            Ok(Some(self.derivation(&path)))
        } else {
            Ok(None)
        }
    }

    fn search(
        &self,
        word: &[Token],
        i: usize,
        at: Config,
        visited: &mut BTreeSet<(usize, Config)>,
        path: &mut Vec<(usize, Vec<Token>)>,
    ) -> bool {
        if i == word.len() && self.is_final(at) {
            return true;
        }
        if !visited.insert((i, at)) {
            return false;
        }
        for q in self.successors(at) {
            let trie = &self.slot_of(q).trie;
            // prefixes of the remaining input that are leaf strings, longest first
            let mut ends = Vec::new();
            let mut node = 0;
            if trie.nodes[0].end {
                ends.push(i);
            }
            for (j, t) in word[i..].iter().enumerate() {
                match trie.nodes[node].children.get(t) {
                    Some(&m) => node = m,
                    None => break,
                }
                if trie.nodes[node].end {
                    ends.push(i + j + 1);
                }
            }
            for &end in ends.iter().rev() {
                path.push((q, word[i..end].to_vec()));
                if self.search(word, end, Config::After(q), visited, path) {
                    return true;
                }
                path.pop();
            }
        }
        false
    }
}

/// Compiles `model` and tests membership of `word`.
pub fn accepts(model: &OfsModel, word: &[Token]) -> Result<bool> {
    compile(model)?.accepts(word)
}

/// Parses `word` against the canonicalized model.
pub fn parse(model: &OfsModel, word: &[Token]) -> Result<Option<Derivation>> {
    compile(&model.canonicalized())?.parse(word)
}
