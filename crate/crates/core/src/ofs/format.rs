//! Line-oriented text format shared by `.ofs` models and `.ofsp` prototypes.
//!
//! ```text
//! ofs-model Syllable levels=2
//! terminals: a b s
//! level 1:
//!   Syllable => Onset Peak Onset
//! level 0:
//!   Onset = { "", "b", "s b" }
//!   Peak = { "a" }
//! ```
//!
//! Level-0 right-hand sides are read by a [`BaseSyntax`] implementation:
//! string sets for models, set formers for prototypes. A line that does not
//! start a rule or a section continues the previous rule. `#` starts a
//! comment outside double quotes.

use std::collections::BTreeSet;

use super::model::{Grammar, ObjectSet, Rule};
use super::regex::{is_ident_char, is_ident_start, RegexExpr};
use crate::error::{Error, Result};
use crate::token::Token;

pub trait BaseSyntax: Sized {
    /// Parses the text after `Name =`. Errors report positions relative to
    /// `line`/`column`.
    fn parse_rhs(text: &str, line: usize, column: usize) -> Result<Self>;
    fn write_rhs(&self) -> String;
}

impl BaseSyntax for ObjectSet {
    fn parse_rhs(text: &str, line: usize, column: usize) -> Result<Self> {
        let chars: Vec<char> = text.chars().collect();
        let err = |pos: usize, msg: &str| Error::syntax(line, column + pos, msg);
        let mut pos = 0;
        let skip_ws = |pos: &mut usize| {
            while *pos < chars.len() && chars[*pos].is_whitespace() {
                *pos += 1;
            }
        };
        skip_ws(&mut pos);
        if chars.get(pos) != Some(&'{') {
            return Err(err(pos, "expected `{`"));
        }
        pos += 1;
        let mut set = ObjectSet::new();
        loop {
            skip_ws(&mut pos);
            match chars.get(pos) {
                Some('}') => {
                    pos += 1;
                    break;
                }
                Some('"') => {
                    let start = pos + 1;
                    let end = (start..chars.len())
                        .find(|&i| chars[i] == '"')
                        .ok_or_else(|| err(pos, "unterminated string"))?;
                    let body: String = chars[start..end].iter().collect();
                    let seq = body
                        .split_whitespace()
                        .map(|t| Token::new(t).expect("split_whitespace yields tokens"))
                        .collect();
                    set.insert(seq);
                    pos = end + 1;
                    skip_ws(&mut pos);
                    match chars.get(pos) {
                        Some(',') => pos += 1,
                        Some('}') => {}
                        _ => return Err(err(pos, "expected `,` or `}`")),
                    }
                }
                _ => return Err(err(pos, "expected a quoted string or `}`")),
            }
        }
        skip_ws(&mut pos);
        if pos < chars.len() {
            return Err(err(pos, "trailing text after `}`"));
        }
        Ok(set)
    }

    fn write_rhs(&self) -> String {
        if self.is_empty() {
            return "{ }".to_string();
        }
        let items: Vec<String> = self
            .iter()
            .map(|s| {
                let body: Vec<&str> = s.iter().map(Token::as_str).collect();
                format!("\"{}\"", body.join(" "))
            })
            .collect();
        format!("{{ {} }}", items.join(", "))
    }
}

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

/// One physical line's share of a (possibly multi-line) rule.
struct Segment {
    /// char offset of this segment inside the joined text
    offset: usize,
    line: usize,
    column: usize,
}

struct PendingRule {
    name: String,
    level: usize,
    text: String,
    segments: Vec<Segment>,
}

impl PendingRule {
    fn push(&mut self, text: &str, line: usize, column: usize) {
        if !self.text.is_empty() {
            self.text.push(' ');
        }
        self.segments.push(Segment {
            offset: self.text.chars().count(),
            line,
            column,
        });
        self.text.push_str(text);
    }

    /// Maps a column in the joined text back to its physical line.
    fn relocate(&self, err: Error) -> Error {
        match err {
            Error::Syntax {
                column, message, ..
            } => {
                let seg = self
                    .segments
                    .iter()
                    .rev()
                    .find(|s| s.offset <= column)
                    .unwrap_or(&self.segments[0]);
                Error::Syntax {
                    line: seg.line,
                    column: seg.column + (column - seg.offset),
                    message,
                }
            }
            other => other,
        }
    }
}

enum RuleOp {
    Regex,
    Base,
}

/// Recognizes `Name =>` / `Name =` at the start of `text`; returns the name,
/// operator and the byte offset of the right-hand side.
fn rule_head(text: &str) -> Option<(&str, RuleOp, usize)> {
    let mut chars = text.char_indices();
    let (_, first) = chars.next()?;
    if !is_ident_start(first) {
        return None;
    }
    let name_end = text
        .char_indices()
        .find(|&(_, c)| !is_ident_char(c))
        .map(|(i, _)| i)
        .unwrap_or(text.len());
    let rest = &text[name_end..];
    let trimmed = rest.trim_start();
    let op_start = name_end + (rest.len() - trimmed.len());
    if trimmed.starts_with("=>") {
        Some((&text[..name_end], RuleOp::Regex, op_start + 2))
    } else if trimmed.starts_with('=') {
        Some((&text[..name_end], RuleOp::Base, op_start + 1))
    } else {
        None
    }
}

fn char_col(line: &str, byte: usize) -> usize {
    line[..byte].chars().count() + 1
}

/// Parses a model or prototype file.
pub fn parse_grammar<B: BaseSyntax>(text: &str) -> Result<Grammar<B>> {
    let mut header: Option<(String, usize)> = None;
    let mut terminals = BTreeSet::new();
    let mut base: Vec<Rule<B>> = Vec::new();
    let mut upper: Vec<Vec<Rule<RegexExpr>>> = Vec::new();
    let mut seen_levels = BTreeSet::new();
    let mut current_level: Option<usize> = None;
    let mut pending: Option<PendingRule> = None;

    let flush = |pending: Option<PendingRule>,
                     base: &mut Vec<Rule<B>>,
                     upper: &mut Vec<Vec<Rule<RegexExpr>>>|
     -> Result<()> {
        let Some(p) = pending else { return Ok(()) };
        if p.level == 0 {
            let rhs = B::parse_rhs(&p.text, 0, 0).map_err(|e| p.relocate(e))?;
            base.push(Rule::new(p.name, rhs));
        } else {
            let rhs = RegexExpr::parse_at(&p.text, 0, 0).map_err(|e| p.relocate(e))?;
            upper[p.level - 1].push(Rule::new(p.name, rhs));
        }
        Ok(())
    };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw).trim_end();
        let trimmed = line.trim_start();
        if trimmed.is_empty() {
            continue;
        }
        let indent = line.len() - trimmed.len();
        let col = char_col(line, indent);

        if let Some(rest) = trimmed.strip_prefix("ofs-model") {
            if header.is_some() {
                return Err(Error::syntax(lineno, col, "duplicate `ofs-model` header"));
            }
            let mut parts = rest.split_whitespace();
            let name = parts
                .next()
                .ok_or_else(|| Error::syntax(lineno, col, "missing model name"))?;
            let levels = parts
                .next()
                .and_then(|p| p.strip_prefix("levels="))
                .and_then(|n| n.parse::<usize>().ok())
                .ok_or_else(|| Error::syntax(lineno, col, "expected `levels=<count>`"))?;
            if parts.next().is_some() {
                return Err(Error::syntax(lineno, col, "trailing text in header"));
            }
            header = Some((name.to_string(), levels));
            upper = (1..levels).map(|_| Vec::new()).collect();
            continue;
        }
        let Some((_, level_total)) = header else {
            return Err(Error::syntax(lineno, col, "expected `ofs-model` header"));
        };

        if let Some(rest) = trimmed.strip_prefix("terminals:") {
            flush(pending.take(), &mut base, &mut upper)?;
            for t in rest.split_whitespace() {
                terminals.insert(Token::new(t).expect("split_whitespace yields tokens"));
            }
            continue;
        }

        if let Some(rest) = trimmed.strip_prefix("level ") {
            if let Some(num) = rest.trim_end().strip_suffix(':') {
                flush(pending.take(), &mut base, &mut upper)?;
                let level: usize = num
                    .trim()
                    .parse()
                    .map_err(|_| Error::syntax(lineno, col, "bad level number"))?;
                if level >= level_total {
                    return Err(Error::syntax(
                        lineno,
                        col,
                        format!("level {level} exceeds declared count {level_total}"),
                    ));
                }
                if !seen_levels.insert(level) {
                    return Err(Error::syntax(lineno, col, format!("level {level} repeated")));
                }
                current_level = Some(level);
                continue;
            }
        }

        if let Some((name, op, rhs_at)) = rule_head(trimmed) {
            flush(pending.take(), &mut base, &mut upper)?;
            let level = current_level
                .ok_or_else(|| Error::syntax(lineno, col, "rule outside a `level` section"))?;
            match (op, level) {
                (RuleOp::Regex, 0) => {
                    return Err(Error::syntax(lineno, col, "level-0 rules use `=`, not `=>`"))
                }
                (RuleOp::Base, l) if l > 0 => {
                    return Err(Error::syntax(lineno, col, "rules above level 0 use `=>`"))
                }
                _ => {}
            }
            let mut p = PendingRule {
                name: name.to_string(),
                level,
                text: String::new(),
                segments: Vec::new(),
            };
            p.push(&trimmed[rhs_at..], lineno, col + trimmed[..rhs_at].chars().count());
            pending = Some(p);
            continue;
        }

        match pending.as_mut() {
            Some(p) => p.push(trimmed, lineno, col),
            None => return Err(Error::syntax(lineno, col, "unexpected text")),
        }
    }
    flush(pending.take(), &mut base, &mut upper)?;

    let (name, levels) = header.ok_or_else(|| Error::syntax(1, 1, "missing `ofs-model` header"))?;
    if levels == 0 && !base.is_empty() {
        return Err(Error::syntax(1, 1, "rules present in a zero-level model"));
    }
    Ok(Grammar {
        name,
        terminals,
        base,
        upper,
    })
}

/// Serializes a model or prototype. Alternations at the top of a rule with
/// more than two branches are written one branch per line.
pub fn write_grammar<B: BaseSyntax>(g: &Grammar<B>) -> String {
    let mut out = String::new();
    out.push_str(&format!("ofs-model {} levels={}\n", g.name, g.level_count()));
    let terms: Vec<&str> = g.terminals.iter().map(Token::as_str).collect();
    if terms.is_empty() {
        out.push_str("terminals:\n");
    } else {
        out.push_str(&format!("terminals: {}\n", terms.join(" ")));
    }
    if g.level_count() == 0 {
        return out;
    }
    for (i, rules) in g.upper.iter().enumerate().rev() {
        out.push_str(&format!("level {}:\n", i + 1));
        for rule in rules {
            match &rule.rhs {
                RegexExpr::Alt(branches) if branches.len() > 2 => {
                    let pad = " ".repeat(rule.name.len() + 3);
                    for (j, b) in branches.iter().enumerate() {
                        if j == 0 {
                            out.push_str(&format!("  {} => {}\n", rule.name, b.alt_branch()));
                        } else {
                            out.push_str(&format!("  {pad}| {}\n", b.alt_branch()));
                        }
                    }
                }
                rhs => out.push_str(&format!("  {} => {}\n", rule.name, rhs)),
            }
        }
    }
    out.push_str("level 0:\n");
    for rule in &g.base {
        out.push_str(&format!("  {} = {}\n", rule.name, rule.rhs.write_rhs()));
    }
    out
}
