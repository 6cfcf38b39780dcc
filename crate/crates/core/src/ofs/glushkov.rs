//! Position automaton over level-0 object slots.
//!
//! The start rule is expanded by substituting upper-level rules in place.
//! Every occurrence of a level-0 name in the expansion is a position. Each
//! follow edge remembers the depth of the concatenation or repetition node
//! that produced it; upper-level rule instances strictly below that node are
//! opened afresh when the edge is taken, which is what lets a position path
//! be turned back into a derivation tree.

use std::collections::BTreeMap;

use super::derivation::Derivation;
use super::model::{Grammar, RuleRef};
use super::regex::RegexExpr;
use crate::token::Token;

#[derive(Debug, Clone)]
pub(crate) struct Position {
    /// Index of the level-0 rule filling this slot.
    pub slot: usize,
    /// Enclosing upper-rule instances, outermost first, as (depth, occurrence).
    pub chain: Vec<(usize, usize)>,
}

#[derive(Debug, Clone)]
pub(crate) struct Glushkov {
    pub positions: Vec<Position>,
    /// Occurrence id to upper rule name.
    pub occurrences: Vec<String>,
    pub nullable: bool,
    pub first: Vec<usize>,
    pub last: Vec<bool>,
    /// For each position, its successors with the witness depth, sorted by successor.
    pub follow: Vec<Vec<(usize, usize)>>,
}

struct Info {
    nullable: bool,
    first: Vec<usize>,
    last: Vec<usize>,
}

struct Builder<'a, B> {
    model: &'a Grammar<B>,
    positions: Vec<Position>,
    occurrences: Vec<String>,
    follow: BTreeMap<(usize, usize), usize>,
}

impl<B> Builder<'_, B> {
    fn link(&mut self, from: &[usize], to: &[usize], depth: usize) {
        for &p in from {
            for &q in to {
                let w = self.follow.entry((p, q)).or_insert(depth);
                *w = (*w).max(depth);
            }
        }
    }

    fn reference(&mut self, name: &str, depth: usize, chain: &mut Vec<(usize, usize)>) -> Info {
        match self.model.rule(name) {
            Some(RuleRef::Base(_)) => {
                let slot = self
                    .model
                    .base
                    .iter()
                    .position(|r| r.name == name)
                    .expect("base rule exists");
                let p = self.positions.len();
                self.positions.push(Position {
                    slot,
                    chain: chain.clone(),
                });
                Info {
                    nullable: false,
                    first: vec![p],
                    last: vec![p],
                }
            }
            Some(RuleRef::Upper(_, rhs)) => {
                let occ = self.occurrences.len();
                self.occurrences.push(name.to_string());
                chain.push((depth, occ));
                let info = self.expand(rhs, depth + 1, chain);
                chain.pop();
                info
            }
            // unreachable for validated models; an unknown name derives nothing
            None => Info {
                nullable: false,
                first: Vec::new(),
                last: Vec::new(),
            },
        }
    }

    fn expand(&mut self, expr: &RegexExpr, depth: usize, chain: &mut Vec<(usize, usize)>) -> Info {
        match expr {
            RegexExpr::Epsilon => Info {
                nullable: true,
                first: Vec::new(),
                last: Vec::new(),
            },
            RegexExpr::Ref(name) => self.reference(name, depth, chain),
            RegexExpr::Concat(children) => {
                let mut nullable = true;
                let mut first = Vec::new();
                let mut lasts: Vec<usize> = Vec::new();
                for child in children {
                    let info = self.expand(child, depth + 1, chain);
                    self.link(&lasts, &info.first, depth);
                    if nullable {
                        first.extend(&info.first);
                    }
                    if info.nullable {
                        lasts.extend(info.last);
                    } else {
                        lasts = info.last;
                    }
                    nullable &= info.nullable;
                }
                Info {
                    nullable,
                    first,
                    last: lasts,
                }
            }
            RegexExpr::Alt(children) => {
                let mut out = Info {
                    nullable: false,
                    first: Vec::new(),
                    last: Vec::new(),
                };
                for child in children {
                    let info = self.expand(child, depth + 1, chain);
                    out.nullable |= info.nullable;
                    out.first.extend(info.first);
                    out.last.extend(info.last);
                }
                out
            }
            RegexExpr::Star(inner) | RegexExpr::Plus(inner) => {
                let info = self.expand(inner, depth + 1, chain);
                self.link(&info.last, &info.first, depth);
                Info {
                    nullable: info.nullable || matches!(expr, RegexExpr::Star(_)),
                    ..info
                }
            }
        }
    }
}

impl Glushkov {
    pub fn build<B>(model: &Grammar<B>) -> Self {
        let mut builder = Builder {
            model,
            positions: Vec::new(),
            occurrences: Vec::new(),
            follow: BTreeMap::new(),
        };
        let info = match model.start() {
            Some(start) => builder.reference(start, 0, &mut Vec::new()),
            None => Info {
                nullable: false,
                first: Vec::new(),
                last: Vec::new(),
            },
        };
        let n = builder.positions.len();
        let mut follow = vec![Vec::new(); n];
        for ((p, q), w) in builder.follow {
            follow[p].push((q, w));
        }
        let mut last = vec![false; n];
        for p in info.last {
            last[p] = true;
        }
        let mut first = info.first;
        first.sort_unstable();
        first.dedup();
        Glushkov {
            positions: builder.positions,
            occurrences: builder.occurrences,
            nullable: info.nullable,
            first,
            last,
            follow,
        }
    }

    pub fn witness(&self, p: usize, q: usize) -> usize {
        let edges = &self.follow[p];
        let i = edges
            .binary_search_by_key(&q, |&(q, _)| q)
            .expect("follow edge exists");
        edges[i].1
    }

    /// Rebuilds the derivation tree for a path of positions with their leaf
    /// strings. `slot_names` maps slot indices to level-0 rule names; `start`
    /// names the root for the zero-slot path.
    pub fn derivation(
        &self,
        start: &str,
        slot_names: &[&str],
        path: &[(usize, Vec<Token>)],
    ) -> Derivation {
        // arena of open and closed object nodes: (name, children)
        let mut arena: Vec<(String, Vec<Child>)> = Vec::new();
        enum Child {
            Node(usize),
            Leaf(Derivation),
        }
        let mut stack: Vec<(usize, usize)> = Vec::new(); // (depth, arena index)
        let mut root: Option<Child> = None;

        for (i, (p, leaf)) in path.iter().enumerate() {
            let pos = &self.positions[*p];
            let cut = if i == 0 {
                None
            } else {
                Some(self.witness(path[i - 1].0, *p))
            };
            if let Some(w) = cut {
                while stack.last().is_some_and(|&(d, _)| d > w) {
                    stack.pop();
                }
            }
            for &(depth, occ) in &pos.chain {
                if cut.is_some_and(|w| depth < w) {
                    continue;
                }
                let idx = arena.len();
                arena.push((self.occurrences[occ].clone(), Vec::new()));
                match stack.last() {
                    Some(&(_, parent)) => arena[parent].1.push(Child::Node(idx)),
                    None => root = Some(Child::Node(idx)),
                }
                stack.push((depth, idx));
            }
            let leaf = Derivation::Leaf {
                name: slot_names[pos.slot].to_string(),
                tokens: leaf.clone(),
            };
            match stack.last() {
                Some(&(_, parent)) => arena[parent].1.push(Child::Leaf(leaf)),
                None => root = Some(Child::Leaf(leaf)),
            }
        }

        fn build(arena: &mut Vec<(String, Vec<Child>)>, child: Child) -> Derivation {
            match child {
                Child::Leaf(d) => d,
                Child::Node(idx) => {
                    let (name, children) = std::mem::take(&mut arena[idx]);
                    Derivation::Object {
                        name,
                        children: children.into_iter().map(|c| build(arena, c)).collect(),
                    }
                }
            }
        }
        match root {
            Some(child) => build(&mut arena, child),
            None => Derivation::Object {
                name: start.to_string(),
                children: Vec::new(),
            },
        }
    }
}
