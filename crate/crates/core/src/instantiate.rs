//! Filling prototype models from data, and pruning dead rules.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::ofs::{parse_grammar, validate_model, Grammar, ObjectSet, OfsModel, RegexExpr, Rule};
use crate::pattern::{SetFormer, TokenClassTable};
use crate::token::Token;

/// A model whose level-0 right-hand sides are set formers.
pub type PrototypeModel = Grammar<SetFormer>;

/// Reads a `.ofsp` prototype.
pub fn parse_prototype(text: &str) -> Result<PrototypeModel> {
    parse_grammar(text)
}

/// Each level-0 rule receives the union of its former's captures over the
/// corpus; upper levels are copied, then the result is pruned. Corpus items
/// are marked token sequences (separators and stress markers included).
pub fn instantiate(
    proto: &PrototypeModel,
    corpus: &[Vec<Token>],
    table: &TokenClassTable,
) -> Result<OfsModel> {
    let report = validate_model(proto);
    if !report.is_valid() {
        return Err(Error::InvalidModel(report));
    }
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    for rule in &proto.base {
        if let Some(c) = rule.rhs.classes().into_iter().find(|c| !table.has_class(c)) {
            return Err(Error::UnknownClass(c.to_string()));
        }
    }
    let mut terminals = BTreeSet::new();
    for datum in corpus {
        for t in datum {
            if !table.knows(t) {
                return Err(Error::UnknownToken(t.to_string()));
            }
            if !t.is_reserved() {
                terminals.insert(t.clone());
            }
        }
    }
    let mut base = Vec::with_capacity(proto.base.len());
    for rule in &proto.base {
        let mut set = ObjectSet::new();
        for datum in corpus {
            set.extend(rule.rhs.captures(datum, table)?);
        }
        base.push(Rule::new(rule.name.clone(), set));
    }
    let model = OfsModel {
        name: proto.name.clone(),
        terminals,
        base,
        upper: proto.upper.clone(),
    };
    Ok(prune(&model))
}

/// Removes empty level-0 rules and everything that can no longer be
/// expanded, to a fixpoint. Alternation branches die individually; a starred
/// dead subexpression becomes ε; a rule dies when its whole right-hand side
/// does. Returns the empty model if the start rule dies.
pub fn prune(model: &OfsModel) -> OfsModel {
    let start = model.start().map(str::to_string);
    let mut current = model.clone();
    loop {
        let mut dead: BTreeSet<String> = BTreeSet::new();
        let mut changed = false;
        current.base.retain(|r| {
            if r.rhs.is_empty() {
                dead.insert(r.name.clone());
                changed = true;
                false
            } else {
                true
            }
        });
        for rules in &mut current.upper {
            let mut kept = Vec::with_capacity(rules.len());
            for rule in rules.drain(..) {
                match prune_expr(&rule.rhs, &dead) {
                    Pruned::Same => kept.push(rule),
                    Pruned::Changed(rhs) => {
                        changed = true;
                        kept.push(Rule::new(rule.name, rhs));
                    }
                    Pruned::Dead => {
                        changed = true;
                        dead.insert(rule.name);
                    }
                }
            }
            *rules = kept;
        }
        if let Some(s) = &start {
            if dead.contains(s) {
                return OfsModel::empty(current.name);
            }
        }
        if !changed {
            return current;
        }
    }
}

enum Pruned {
    Same,
    Changed(RegexExpr),
    Dead,
}

fn prune_expr(e: &RegexExpr, dead: &BTreeSet<String>) -> Pruned {
    match e {
        RegexExpr::Epsilon => Pruned::Same,
        RegexExpr::Ref(n) if dead.contains(n) => Pruned::Dead,
        RegexExpr::Ref(_) => Pruned::Same,
        RegexExpr::Concat(children) => {
            let mut out = Vec::with_capacity(children.len());
            let mut changed = false;
            for c in children {
                match prune_expr(c, dead) {
                    Pruned::Dead => return Pruned::Dead,
                    Pruned::Same => out.push(c.clone()),
                    Pruned::Changed(RegexExpr::Epsilon) => changed = true,
                    Pruned::Changed(n) => {
                        changed = true;
                        out.push(n);
                    }
                }
            }
            if !changed {
                return Pruned::Same;
            }
            Pruned::Changed(match out.len() {
                0 => RegexExpr::Epsilon,
                1 => out.pop().expect("one child"),
                _ => RegexExpr::Concat(out),
            })
        }
        RegexExpr::Alt(children) => {
            let mut out = Vec::with_capacity(children.len());
            let mut changed = false;
            for c in children {
                match prune_expr(c, dead) {
                    Pruned::Dead => changed = true,
                    Pruned::Same => out.push(c.clone()),
                    Pruned::Changed(n) => {
                        changed = true;
                        out.push(n);
                    }
                }
            }
            if !changed {
                return Pruned::Same;
            }
            match out.len() {
                0 => Pruned::Dead,
                1 => Pruned::Changed(out.pop().expect("one branch")),
                _ => Pruned::Changed(RegexExpr::Alt(out)),
            }
        }
        RegexExpr::Star(inner) => match prune_expr(inner, dead) {
            Pruned::Same => Pruned::Same,
            Pruned::Changed(n) => Pruned::Changed(RegexExpr::star(n)),
            Pruned::Dead => Pruned::Changed(RegexExpr::Epsilon),
        },
        RegexExpr::Plus(inner) => match prune_expr(inner, dead) {
            Pruned::Same => Pruned::Same,
            Pruned::Changed(n) => Pruned::Changed(RegexExpr::plus(n)),
            Pruned::Dead => Pruned::Dead,
        },
    }
}
