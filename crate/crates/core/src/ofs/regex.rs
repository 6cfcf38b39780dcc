//! Regular expressions over object names.
//!
//! The surface syntax is juxtaposition for concatenation, `|` for
//! alternation, postfix `*` and `+` for repetition, parentheses for grouping
//! and `()` for the empty string.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegexExpr {
    Epsilon,
    Ref(String),
    Concat(Vec<RegexExpr>),
    Alt(Vec<RegexExpr>),
    Star(Box<RegexExpr>),
    Plus(Box<RegexExpr>),
}

impl RegexExpr {
    pub fn name(label: impl Into<String>) -> Self {
        RegexExpr::Ref(label.into())
    }

    pub fn concat(children: impl IntoIterator<Item = RegexExpr>) -> Self {
        RegexExpr::Concat(children.into_iter().collect())
    }

    pub fn alt(children: impl IntoIterator<Item = RegexExpr>) -> Self {
        RegexExpr::Alt(children.into_iter().collect())
    }

    pub fn star(inner: RegexExpr) -> Self {
        RegexExpr::Star(Box::new(inner))
    }

    pub fn plus(inner: RegexExpr) -> Self {
        RegexExpr::Plus(Box::new(inner))
    }

    /// All names referenced by the expression, in sorted order.
    pub fn refs(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_refs(&mut out);
        out
    }

    fn collect_refs<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            RegexExpr::Epsilon => {}
            RegexExpr::Ref(name) => {
                out.insert(name);
            }
            RegexExpr::Concat(children) | RegexExpr::Alt(children) => {
                children.iter().for_each(|c| c.collect_refs(out))
            }
            RegexExpr::Star(inner) | RegexExpr::Plus(inner) => inner.collect_refs(out),
        }
    }

    /// Replaces every `Ref` found in `renames` by its new name.
    pub fn rename(&self, renames: &BTreeMap<String, String>) -> RegexExpr {
        match self {
            RegexExpr::Epsilon => RegexExpr::Epsilon,
            RegexExpr::Ref(name) => {
                RegexExpr::Ref(renames.get(name).cloned().unwrap_or_else(|| name.clone()))
            }
            RegexExpr::Concat(c) => RegexExpr::Concat(c.iter().map(|e| e.rename(renames)).collect()),
            RegexExpr::Alt(c) => RegexExpr::Alt(c.iter().map(|e| e.rename(renames)).collect()),
            RegexExpr::Star(inner) => RegexExpr::star(inner.rename(renames)),
            RegexExpr::Plus(inner) => RegexExpr::plus(inner.rename(renames)),
        }
    }

    /// Normal form under associativity of concatenation and
    /// associativity, commutativity and idempotence of alternation.
    ///
    /// Nested `Concat`/`Alt` nodes are flattened, alternatives are sorted and
    /// deduplicated, `()` is dropped from concatenations, single-child nodes
    /// are unwrapped, and `(e*)*`, `(e+)*` and `()*` collapse. `e+` is never
    /// rewritten to `e*`.
    pub fn canonicalize(&self) -> RegexExpr {
        match self {
            RegexExpr::Epsilon => RegexExpr::Epsilon,
            RegexExpr::Ref(name) => RegexExpr::Ref(name.clone()),
            RegexExpr::Concat(children) => {
                let mut flat = Vec::with_capacity(children.len());
                for child in children {
                    match child.canonicalize() {
                        RegexExpr::Concat(inner) => flat.extend(inner),
                        RegexExpr::Epsilon => {}
                        other => flat.push(other),
                    }
                }
                match flat.len() {
                    0 => RegexExpr::Epsilon,
                    1 => flat.pop().unwrap(),
                    _ => RegexExpr::Concat(flat),
                }
            }
            RegexExpr::Alt(children) => {
                let mut set = BTreeSet::new();
                for child in children {
                    match child.canonicalize() {
                        RegexExpr::Alt(inner) => set.extend(inner),
                        other => {
                            set.insert(other);
                        }
                    }
                }
                let mut flat: Vec<_> = set.into_iter().collect();
                match flat.len() {
                    // an empty alternation has no canonical rendering; keep it as is
                    0 => RegexExpr::Alt(Vec::new()),
                    1 => flat.pop().unwrap(),
                    _ => RegexExpr::Alt(flat),
                }
            }
            RegexExpr::Star(inner) => match inner.canonicalize() {
                RegexExpr::Epsilon => RegexExpr::Epsilon,
                RegexExpr::Star(e) | RegexExpr::Plus(e) => RegexExpr::Star(e),
                other => RegexExpr::star(other),
            },
            RegexExpr::Plus(inner) => match inner.canonicalize() {
                RegexExpr::Epsilon => RegexExpr::Epsilon,
                RegexExpr::Star(e) => RegexExpr::Star(e),
                RegexExpr::Plus(e) => RegexExpr::Plus(e),
                other => RegexExpr::plus(other),
            },
        }
    }

    /// Rendering as one branch of an alternation.
    pub(crate) fn alt_branch(&self) -> String {
        struct Branch<'a>(&'a RegexExpr);
        impl fmt::Display for Branch<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write_expr(self.0, Ctx::AltChild, f)
            }
        }
        Branch(self).to_string()
    }

    pub fn is_canonical(&self) -> bool {
        self.canonicalize() == *self
    }

    /// Parses the surface syntax. `line` and `column` locate `text` in its
    /// enclosing file for error reporting.
    pub fn parse_at(text: &str, line: usize, column: usize) -> Result<RegexExpr> {
        let mut parser = Parser {
            chars: text.char_indices().collect(),
            pos: 0,
            line,
            column,
        };
        let expr = parser.alternation()?;
        parser.skip_ws();
        if let Some(&(_, c)) = parser.chars.get(parser.pos) {
            return Err(parser.error(format!("unexpected `{c}`")));
        }
        Ok(expr)
    }

    pub fn parse(text: &str) -> Result<RegexExpr> {
        Self::parse_at(text, 1, 1)
    }
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> Error {
        Error::syntax(self.line, self.column + self.pos, message)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn alternation(&mut self) -> Result<RegexExpr> {
        let mut branches = vec![self.concatenation()?];
        loop {
            self.skip_ws();
            if self.peek() == Some('|') {
                self.pos += 1;
                branches.push(self.concatenation()?);
            } else {
                break;
            }
        }
        Ok(if branches.len() == 1 {
            branches.pop().unwrap()
        } else {
            RegexExpr::Alt(branches)
        })
    }

    fn concatenation(&mut self) -> Result<RegexExpr> {
        let mut items = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c == '(' || is_ident_start(c) => items.push(self.postfix()?),
                _ => break,
            }
        }
        match items.len() {
            0 => Err(self.error("expected an object name or `(`")),
            1 => Ok(items.pop().unwrap()),
            _ => Ok(RegexExpr::Concat(items)),
        }
    }

    fn postfix(&mut self) -> Result<RegexExpr> {
        let mut expr = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => expr = RegexExpr::star(expr),
                Some('+') => expr = RegexExpr::plus(expr),
                _ => break,
            }
            self.pos += 1;
        }
        Ok(expr)
    }

    fn atom(&mut self) -> Result<RegexExpr> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                if self.peek() == Some(')') {
                    self.pos += 1;
                    return Ok(RegexExpr::Epsilon);
                }
                let inner = self.alternation()?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if is_ident_start(c) => {
                let start = self.pos;
                while self.peek().is_some_and(is_ident_char) {
                    self.pos += 1;
                }
                Ok(RegexExpr::Ref(
                    self.chars[start..self.pos].iter().map(|&(_, c)| c).collect(),
                ))
            }
            _ => Err(self.error("expected an object name or `(`")),
        }
    }
}

pub(crate) fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

pub(crate) fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(is_ident_start) && chars.all(is_ident_char)
}

#[derive(Clone, Copy, PartialEq)]
enum Ctx {
    Top,
    AltChild,
    ConcatChild,
    Operand,
}

fn write_expr(e: &RegexExpr, ctx: Ctx, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match e {
        RegexExpr::Epsilon => f.write_str("()"),
        RegexExpr::Ref(name) => f.write_str(name),
        RegexExpr::Alt(children) if children.is_empty() => f.write_str("()"),
        RegexExpr::Concat(children) if children.is_empty() => f.write_str("()"),
        RegexExpr::Alt(children) => {
            let paren = ctx != Ctx::Top;
            if paren {
                f.write_str("(")?;
            }
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    f.write_str(" | ")?;
                }
                write_expr(c, Ctx::AltChild, f)?;
            }
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
        RegexExpr::Concat(children) => {
            let paren = matches!(ctx, Ctx::ConcatChild | Ctx::Operand);
            if paren {
                f.write_str("(")?;
            }
            for (i, c) in children.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write_expr(c, Ctx::ConcatChild, f)?;
            }
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
        RegexExpr::Star(inner) | RegexExpr::Plus(inner) => {
            let paren = ctx == Ctx::Operand;
            if paren {
                f.write_str("(")?;
            }
            write_expr(inner, Ctx::Operand, f)?;
            f.write_str(if matches!(e, RegexExpr::Star(_)) { "*" } else { "+" })?;
            if paren {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for RegexExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(self, Ctx::Top, f)
    }
}
