use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::regex::{is_identifier, RegexExpr};
use crate::token::Token;

/// A finite set of token strings: the right-hand side of a level-0 rule.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectSet(BTreeSet<Vec<Token>>);

impl ObjectSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, s: &[Token]) -> bool {
        self.0.contains(s)
    }

    pub fn insert(&mut self, s: Vec<Token>) -> bool {
        self.0.insert(s)
    }

    /// Strings in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = &Vec<Token>> + '_ {
        self.0.iter()
    }

    pub fn intersection_len(&self, other: &ObjectSet) -> usize {
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        small.0.iter().filter(|s| large.0.contains(*s)).count()
    }

    pub fn union_with(&mut self, other: &ObjectSet) {
        self.0.extend(other.0.iter().cloned());
    }

    pub fn as_set(&self) -> &BTreeSet<Vec<Token>> {
        &self.0
    }
}

impl FromIterator<Vec<Token>> for ObjectSet {
    fn from_iter<I: IntoIterator<Item = Vec<Token>>>(iter: I) -> Self {
        ObjectSet(iter.into_iter().collect())
    }
}

impl Extend<Vec<Token>> for ObjectSet {
    fn extend<I: IntoIterator<Item = Vec<Token>>>(&mut self, iter: I) {
        self.0.extend(iter)
    }
}

impl<'a> IntoIterator for &'a ObjectSet {
    type Item = &'a Vec<Token>;
    type IntoIter = std::collections::btree_set::Iter<'a, Vec<Token>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule<R> {
    pub name: String,
    pub rhs: R,
}

impl<R> Rule<R> {
    pub fn new(name: impl Into<String>, rhs: R) -> Self {
        Rule {
            name: name.into(),
            rhs,
        }
    }
}

/// A leveled rule system. Level 0 rules carry `B` right-hand sides, every
/// level above carries regular expressions over names of strictly lower
/// levels. `upper[i]` holds the rules of level `i + 1`; the last upper level
/// is the singleton start level.
///
/// With `B = ObjectSet` this is a fully specified model; prototypes use set
/// formers instead (see [`crate::instantiate::PrototypeModel`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar<B> {
    pub name: String,
    pub terminals: BTreeSet<Token>,
    pub base: Vec<Rule<B>>,
    pub upper: Vec<Vec<Rule<RegexExpr>>>,
}

pub type OfsModel = Grammar<ObjectSet>;

/// Where a name is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleRef<'a, B> {
    Base(&'a B),
    Upper(usize, &'a RegexExpr),
}

impl<B> Grammar<B> {
    /// The model with no rules at all, produced when pruning kills the start rule.
    pub fn empty(name: impl Into<String>) -> Self {
        Grammar {
            name: name.into(),
            terminals: BTreeSet::new(),
            base: Vec::new(),
            upper: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.base.is_empty() && self.upper.iter().all(Vec::is_empty)
    }

    /// Number of levels (`n + 1` for level indices `0..=n`).
    pub fn level_count(&self) -> usize {
        if self.is_empty() && self.upper.is_empty() {
            0
        } else {
            self.upper.len() + 1
        }
    }

    pub fn top_level(&self) -> usize {
        self.upper.len()
    }

    /// Name of the start symbol, when the top level is a singleton.
    pub fn start(&self) -> Option<&str> {
        let top: Vec<&str> = match self.upper.last() {
            Some(rules) => rules.iter().map(|r| r.name.as_str()).collect(),
            None => self.base.iter().map(|r| r.name.as_str()).collect(),
        };
        match top.as_slice() {
            [only] => Some(only),
            _ => None,
        }
    }

    pub fn level_of(&self, name: &str) -> Option<usize> {
        if self.base.iter().any(|r| r.name == name) {
            return Some(0);
        }
        self.upper
            .iter()
            .position(|rules| rules.iter().any(|r| r.name == name))
            .map(|i| i + 1)
    }

    pub fn rule(&self, name: &str) -> Option<RuleRef<'_, B>> {
        if let Some(r) = self.base.iter().find(|r| r.name == name) {
            return Some(RuleRef::Base(&r.rhs));
        }
        self.upper.iter().enumerate().find_map(|(i, rules)| {
            rules
                .iter()
                .find(|r| r.name == name)
                .map(|r| RuleRef::Upper(i + 1, &r.rhs))
        })
    }

    pub fn base_rule(&self, name: &str) -> Option<&B> {
        self.base.iter().find(|r| r.name == name).map(|r| &r.rhs)
    }

    /// All rule names, lowest level first.
    pub fn names(&self) -> impl Iterator<Item = &str> + '_ {
        self.base
            .iter()
            .map(|r| r.name.as_str())
            .chain(self.upper.iter().flatten().map(|r| r.name.as_str()))
    }

    /// Same model with every regex right-hand side canonicalized.
    pub fn canonicalized(&self) -> Self
    where
        B: Clone,
    {
        Grammar {
            name: self.name.clone(),
            terminals: self.terminals.clone(),
            base: self.base.clone(),
            upper: self
                .upper
                .iter()
                .map(|rules| {
                    rules
                        .iter()
                        .map(|r| Rule::new(r.name.clone(), r.rhs.canonicalize()))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn map_base<C>(self, mut f: impl FnMut(&str, B) -> C) -> Grammar<C> {
        Grammar {
            name: self.name,
            terminals: self.terminals,
            base: self
                .base
                .into_iter()
                .map(|r| {
                    let rhs = f(&r.name, r.rhs);
                    Rule::new(r.name, rhs)
                })
                .collect(),
            upper: self.upper,
        }
    }
}

impl<B: BaseRhs> Grammar<B> {
    pub fn validate(&self) -> ValidationReport {
        validate_model(self)
    }
}

/// Level-0 right-hand sides contribute their own well-formedness checks.
pub trait BaseRhs {
    fn check(&self, rule: &str, terminals: &BTreeSet<Token>, out: &mut Vec<Violation>);
}

impl BaseRhs for ObjectSet {
    fn check(&self, rule: &str, terminals: &BTreeSet<Token>, out: &mut Vec<Violation>) {
        let mut seen = BTreeSet::new();
        for token in self.iter().flatten() {
            if !seen.insert(token) {
                continue;
            }
            if token.is_reserved() {
                out.push(Violation::ReservedToken {
                    rule: rule.to_string(),
                    token: token.clone(),
                });
            } else if !terminals.contains(token) {
                out.push(Violation::UnknownTerminal {
                    rule: rule.to_string(),
                    token: token.clone(),
                });
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    MissingStart,
    TopLevelNotSingleton { count: usize },
    DuplicateLhs { name: String },
    InvalidName { name: String },
    LevelOrdering {
        rule: String,
        level: usize,
        referenced: String,
        referenced_level: usize,
    },
    UndefinedReference { rule: String, referenced: String },
    UnknownTerminal { rule: String, token: Token },
    ReservedToken { rule: String, token: Token },
}

impl Violation {
    /// Short machine-readable kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::MissingStart => "missing start",
            Violation::TopLevelNotSingleton { .. } => "top level not singleton",
            Violation::DuplicateLhs { .. } => "duplicate lhs",
            Violation::InvalidName { .. } => "invalid name",
            Violation::LevelOrdering { .. } => "level-ordering",
            Violation::UndefinedReference { .. } => "undefined reference",
            Violation::UnknownTerminal { .. } => "unknown terminal",
            Violation::ReservedToken { .. } => "reserved token",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingStart => write!(f, "model has no start rule"),
            Violation::TopLevelNotSingleton { count } => {
                write!(f, "top level holds {count} rules, expected exactly one")
            }
            Violation::DuplicateLhs { name } => write!(f, "`{name}` is defined more than once"),
            Violation::InvalidName { name } => write!(f, "`{name}` is not a valid object name"),
            Violation::LevelOrdering {
                rule,
                level,
                referenced,
                referenced_level,
            } => write!(
                f,
                "`{rule}` (level {level}) references `{referenced}` at level {referenced_level}"
            ),
            Violation::UndefinedReference { rule, referenced } => {
                write!(f, "`{rule}` references undefined `{referenced}`")
            }
            Violation::UnknownTerminal { rule, token } => {
                write!(f, "`{rule}` uses `{token}`, which is not a declared terminal")
            }
            Violation::ReservedToken { rule, token } => {
                write!(f, "`{rule}` contains reserved token `{token}`")
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn count(&self, kind: &str) -> usize {
        self.violations.iter().filter(|v| v.kind() == kind).count()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.violations.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Lists every violated structural invariant. Violations are data: a valid
/// model yields an empty report.
pub fn validate_model<B: BaseRhs>(model: &Grammar<B>) -> ValidationReport {
    let mut out = Vec::new();
    if model.is_empty() {
        out.push(Violation::MissingStart);
        return ValidationReport { violations: out };
    }

    let top_count = match model.upper.last() {
        Some(rules) => rules.len(),
        None => model.base.len(),
    };
    if top_count == 0 {
        out.push(Violation::MissingStart);
    } else if top_count > 1 {
        out.push(Violation::TopLevelNotSingleton { count: top_count });
    }

    // first definition wins for level lookups
    let mut levels: BTreeMap<&str, usize> = BTreeMap::new();
    let defined = model
        .base
        .iter()
        .map(|r| (0, r.name.as_str()))
        .chain(
            model
                .upper
                .iter()
                .enumerate()
                .flat_map(|(i, rules)| rules.iter().map(move |r| (i + 1, r.name.as_str()))),
        );
    for (level, name) in defined {
        if !is_identifier(name) {
            out.push(Violation::InvalidName {
                name: name.to_string(),
            });
        }
        if levels.contains_key(name) {
            out.push(Violation::DuplicateLhs {
                name: name.to_string(),
            });
        } else {
            levels.insert(name, level);
        }
    }

    for token in &model.terminals {
        if token.is_reserved() {
            out.push(Violation::ReservedToken {
                rule: "terminals".to_string(),
                token: token.clone(),
            });
        }
    }
    for rule in &model.base {
        rule.rhs.check(&rule.name, &model.terminals, &mut out);
    }

    for (i, rules) in model.upper.iter().enumerate() {
        let level = i + 1;
        for rule in rules {
            for referenced in rule.rhs.refs() {
                match levels.get(referenced) {
                    None => out.push(Violation::UndefinedReference {
                        rule: rule.name.clone(),
                        referenced: referenced.to_string(),
                    }),
                    Some(&g) if g >= level => out.push(Violation::LevelOrdering {
                        rule: rule.name.clone(),
                        level,
                        referenced: referenced.to_string(),
                        referenced_level: g,
                    }),
                    Some(_) => {}
                }
            }
        }
    }
    ValidationReport { violations: out }
}
