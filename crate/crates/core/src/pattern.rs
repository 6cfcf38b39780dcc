//! Set formers: anchored context patterns with a single capture.
//!
//! ```text
//! / (x: CONSONANTS*) [VOWELS] [ANY]* /
//! / [ANY]* "-" (x: NOSEP*) "-" [ANY]* / | / "'" (x: NOSEP*) /
//! ```
//!
//! Evaluating a former on a datum yields every substring bound to the capture
//! over all ways of matching the datum.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::ofs::{BaseRhs, BaseSyntax, Violation};
use crate::token::{Token, SEPARATOR, STRESS};

pub const ANY: &str = "ANY";
pub const NOSEP: &str = "NOSEP";
pub const NOSEPSTRESS: &str = "NOSEPSTRESS";

#[derive(Debug, Clone, PartialEq, Eq)]
enum Class {
    Set(BTreeSet<Token>),
    /// Every token but the listed ones.
    Except(Vec<&'static str>),
}

/// Named token classes. `ANY`, `NOSEP` and `NOSEPSTRESS` are always present
/// and range over every token, reserved markers included, minus the
/// separator (and stress marker) respectively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenClassTable {
    classes: BTreeMap<String, Class>,
}

impl Default for TokenClassTable {
    fn default() -> Self {
        let mut classes = BTreeMap::new();
        classes.insert(ANY.to_string(), Class::Except(vec![]));
        classes.insert(NOSEP.to_string(), Class::Except(vec![SEPARATOR]));
        classes.insert(
            NOSEPSTRESS.to_string(),
            Class::Except(vec![SEPARATOR, STRESS]),
        );
        TokenClassTable { classes }
    }
}

impl TokenClassTable {
    /// Table with only the derived classes.
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds user classes. A user class named like a derived class replaces it.
    pub fn with_classes(classes: BTreeMap<String, BTreeSet<Token>>) -> Self {
        let mut table = Self::new();
        for (name, members) in classes {
            table.classes.insert(name, Class::Set(members));
        }
        table
    }

    /// Whether `token` can occur in data matched against this table: reserved
    /// markers always, phonemes only if some user class lists them (or no
    /// user classes are defined).
    pub fn knows(&self, token: &Token) -> bool {
        if token.is_reserved() {
            return true;
        }
        let user: Vec<&BTreeSet<Token>> = self
            .classes
            .values()
            .filter_map(|c| match c {
                Class::Set(s) => Some(s),
                Class::Except(_) => None,
            })
            .collect();
        user.is_empty() || user.iter().any(|s| s.contains(token))
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.classes.contains_key(name)
    }

    pub fn class_names(&self) -> impl Iterator<Item = &str> + '_ {
        self.classes.keys().map(String::as_str)
    }

    pub fn contains(&self, class: &str, token: &Token) -> Result<bool> {
        match self.classes.get(class) {
            Some(Class::Set(s)) => Ok(s.contains(token)),
            Some(Class::Except(out)) => Ok(!out.contains(&token.as_str())),
            None => Err(Error::UnknownClass(class.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mult {
    One,
    Star,
    Plus,
}

impl Mult {
    fn suffix(self) -> &'static str {
        match self {
            Mult::One => "",
            Mult::Star => "*",
            Mult::Plus => "+",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PatternElement {
    Literal(Token),
    Var { class: String, mult: Mult },
}

/// One anchored alternative. `capture` indexes the captured element, which
/// is always a variable.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContextPattern {
    pub elements: Vec<PatternElement>,
    pub capture: usize,
    pub capture_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFormer {
    pub alternatives: Vec<ContextPattern>,
}

impl PatternElement {
    fn matches(&self, span: &[Token], table: &TokenClassTable) -> Result<bool> {
        match self {
            PatternElement::Literal(t) => Ok(span.len() == 1 && &span[0] == t),
            PatternElement::Var { class, mult } => {
                let ok_len = match mult {
                    Mult::One => span.len() == 1,
                    Mult::Star => true,
                    Mult::Plus => !span.is_empty(),
                };
                if !ok_len {
                    return Ok(false);
                }
                for t in span {
                    if !table.contains(class, t)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
        }
    }

    fn class(&self) -> Option<&str> {
        match self {
            PatternElement::Var { class, .. } => Some(class),
            PatternElement::Literal(_) => None,
        }
    }
}

impl ContextPattern {
    /// All capture substrings over every decomposition of `datum`.
    pub fn captures(&self, datum: &[Token], table: &TokenClassTable) -> Result<BTreeSet<Vec<Token>>> {
        let n = datum.len();
        let m = self.elements.len();
        for e in &self.elements {
            if let Some(c) = e.class() {
                if !table.has_class(c) {
                    return Err(Error::UnknownClass(c.to_string()));
                }
            }
        }
        // fwd[j][i]: elements 0..j can consume datum[0..i]
        let mut fwd = vec![vec![false; n + 1]; m + 1];
        fwd[0][0] = true;
        for j in 0..m {
            for a in 0..=n {
                if !fwd[j][a] {
                    continue;
                }
                for b in a..=n {
                    if self.elements[j].matches(&datum[a..b], table)? {
                        fwd[j + 1][b] = true;
                    }
                }
            }
        }
        // bwd[j][i]: elements j..m can consume datum[i..n]
        let mut bwd = vec![vec![false; n + 1]; m + 1];
        bwd[m][n] = true;
        for j in (0..m).rev() {
            for b in 0..=n {
                if !bwd[j + 1][b] {
                    continue;
                }
                for a in 0..=b {
                    if self.elements[j].matches(&datum[a..b], table)? {
                        bwd[j][a] = true;
                    }
                }
            }
        }
        let c = self.capture;
        let mut out = BTreeSet::new();
        for a in 0..=n {
            if !fwd[c][a] {
                continue;
            }
            for b in a..=n {
                if bwd[c + 1][b] && self.elements[c].matches(&datum[a..b], table)? {
                    out.insert(datum[a..b].to_vec());
                }
            }
        }
        Ok(out)
    }
}

impl SetFormer {
    /// Union of the captures of every alternative.
    pub fn captures(&self, datum: &[Token], table: &TokenClassTable) -> Result<BTreeSet<Vec<Token>>> {
        let mut out = BTreeSet::new();
        for alt in &self.alternatives {
            out.extend(alt.captures(datum, table)?);
        }
        Ok(out)
    }

    /// Every class name the former mentions.
    pub fn classes(&self) -> BTreeSet<&str> {
        self.alternatives
            .iter()
            .flat_map(|a| a.elements.iter().filter_map(PatternElement::class))
            .collect()
    }

    pub fn parse(text: &str) -> Result<SetFormer> {
        SetFormer::parse_rhs(text, 1, 1)
    }
}

/// Captures of `former` on `datum`.
pub fn match_captures(
    former: &SetFormer,
    datum: &[Token],
    table: &TokenClassTable,
) -> Result<BTreeSet<Vec<Token>>> {
    former.captures(datum, table)
}

pub fn parse_former(text: &str) -> Result<SetFormer> {
    SetFormer::parse(text)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    column: usize,
}

impl Parser {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::syntax(self.line, self.column + self.pos, msg)
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(format!("expected `{c}`")))
        }
    }

    fn word(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_alphanumeric() || c == '_')
        {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected a name"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn mult(&mut self) -> Mult {
        self.skip_ws();
        match self.peek() {
            Some('*') => {
                self.pos += 1;
                Mult::Star
            }
            Some('+') => {
                self.pos += 1;
                Mult::Plus
            }
            _ => Mult::One,
        }
    }

    fn pattern(&mut self) -> Result<ContextPattern> {
        self.expect('/')?;
        let mut elements = Vec::new();
        let mut capture: Option<(usize, String)> = None;
        loop {
            self.skip_ws();
            let at = self.pos;
            match self.peek() {
                Some('/') => {
                    self.pos += 1;
                    break;
                }
                Some('"') => {
                    self.pos += 1;
                    let start = self.pos;
                    while self.peek().is_some_and(|c| c != '"') {
                        self.pos += 1;
                    }
                    if self.peek().is_none() {
                        self.pos = at;
                        return Err(self.err("unterminated literal"));
                    }
                    let body: String = self.chars[start..self.pos].iter().collect();
                    self.pos += 1;
                    let token = Token::new(body.trim()).ok_or_else(|| {
                        Error::syntax(self.line, self.column + at, "literal must be one token")
                    })?;
                    elements.push(PatternElement::Literal(token));
                }
                Some('(') => {
                    self.pos += 1;
                    let name = self.word()?;
                    self.expect(':')?;
                    let class = self.word()?;
                    let mult = self.mult();
                    self.expect(')')?;
                    if capture.is_some() {
                        self.pos = at;
                        return Err(self.err("a pattern has exactly one capture"));
                    }
                    capture = Some((elements.len(), name));
                    elements.push(PatternElement::Var { class, mult });
                }
                Some('[') => {
                    self.pos += 1;
                    let class = self.word()?;
                    let inner = self.mult();
                    self.expect(']')?;
                    let outer = self.mult();
                    let mult = match (inner, outer) {
                        (m, Mult::One) | (Mult::One, m) => m,
                        _ => {
                            self.pos = at;
                            return Err(self.err("multiplicity given twice"));
                        }
                    };
                    elements.push(PatternElement::Var { class, mult });
                }
                None => return Err(self.err("unterminated pattern, expected `/`")),
                Some(c) => return Err(self.err(format!("unexpected `{c}`"))),
            }
        }
        let (capture, capture_name) = capture.ok_or_else(|| self.err("pattern has no capture"))?;
        Ok(ContextPattern {
            elements,
            capture,
            capture_name,
        })
    }
}

impl BaseSyntax for SetFormer {
    fn parse_rhs(text: &str, line: usize, column: usize) -> Result<Self> {
        let mut p = Parser {
            chars: text.chars().collect(),
            pos: 0,
            line,
            column,
        };
        let mut alternatives = vec![p.pattern()?];
        while p.eat('|') {
            alternatives.push(p.pattern()?);
        }
        p.skip_ws();
        if p.peek().is_some() {
            return Err(p.err("trailing text after pattern"));
        }
        Ok(SetFormer { alternatives })
    }

    fn write_rhs(&self) -> String {
        self.to_string()
    }
}

impl BaseRhs for SetFormer {
    fn check(&self, _rule: &str, _terminals: &BTreeSet<Token>, _out: &mut Vec<Violation>) {}
}

impl fmt::Display for ContextPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("/")?;
        for (i, e) in self.elements.iter().enumerate() {
            match e {
                PatternElement::Literal(t) => write!(f, " \"{t}\"")?,
                PatternElement::Var { class, mult } if i == self.capture => {
                    write!(f, " ({}: {class}{})", self.capture_name, mult.suffix())?
                }
                PatternElement::Var { class, mult } => write!(f, " [{class}]{}", mult.suffix())?,
            }
        }
        f.write_str(" /")
    }
}

impl fmt::Display for SetFormer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, alt) in self.alternatives.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{alt}")?;
        }
        Ok(())
    }
}
