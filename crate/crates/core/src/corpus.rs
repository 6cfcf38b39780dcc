//! Alphabets, tokenization and word-list ingestion.
//!
//! A word list holds one syllabified transcription per line. Syllables are
//! separated by `-`, and `'` precedes the first segment of the stressed
//! syllable: `'sIn-tS`. Lines starting with `#` are comments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::pattern::TokenClassTable;
use crate::token::{Token, SEPARATOR, STRESS};

/// Phoneme inventory with class memberships, read from lines of the form
/// `token: CLASS1, CLASS2`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Alphabet {
    tokens: BTreeMap<Token, BTreeSet<String>>,
}

impl Alphabet {
    pub fn parse(text: &str) -> Result<Alphabet> {
        let mut tokens = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| Error::Alphabet { line, message };
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (tok, classes) = content
                .rsplit_once(':')
                .ok_or_else(|| err("expected `token: CLASS, ...`".to_string()))?;
            let tok = tok.trim();
            let token = Token::new(tok)
                .ok_or_else(|| err(format!("`{tok}` is not a valid token")))?;
            if token.is_reserved() {
                return Err(err(format!("reserved token `{token}` cannot be defined")));
            }
            let classes: BTreeSet<String> = classes
                .split(',')
                .map(str::trim)
                .filter(|c| !c.is_empty())
                .map(str::to_string)
                .collect();
            if classes.is_empty() {
                return Err(err(format!("`{token}` has no class")));
            }
            if tokens.insert(token.clone(), classes).is_some() {
                return Err(err(format!("`{token}` is defined twice")));
            }
        }
        Ok(Alphabet { tokens })
    }

    pub fn tokens(&self) -> impl Iterator<Item = &Token> + '_ {
        self.tokens.keys()
    }

    pub fn contains(&self, token: &Token) -> bool {
        self.tokens.contains_key(token)
    }

    pub fn classes_of(&self, token: &Token) -> Option<&BTreeSet<String>> {
        self.tokens.get(token)
    }

    /// Alphabet with one class per token set; used when tokenizing by a
    /// model's terminal inventory.
    pub fn from_tokens(tokens: impl IntoIterator<Item = Token>, class: &str) -> Alphabet {
        Alphabet {
            tokens: tokens
                .into_iter()
                .filter(|t| !t.is_reserved())
                .map(|t| (t, BTreeSet::from([class.to_string()])))
                .collect(),
        }
    }

    /// User classes plus the derived `ANY`, `NOSEP` and `NOSEPSTRESS`.
    pub fn class_table(&self) -> TokenClassTable {
        let mut classes: BTreeMap<String, BTreeSet<Token>> = BTreeMap::new();
        for (t, cs) in &self.tokens {
            for c in cs {
                classes.entry(c.clone()).or_default().insert(t.clone());
            }
        }
        TokenClassTable::with_classes(classes)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TokenizeMode {
    /// Greedy longest match; whitespace separates but is not required.
    #[default]
    LongestMatch,
    /// Every whitespace-delimited unit must be a token.
    Whitespace,
}

/// Splits `line` into alphabet tokens and reserved markers.
pub fn tokenize(line: &str, alphabet: &Alphabet, mode: TokenizeMode) -> Result<Vec<Token>> {
    let reserved = [Token::separator(), Token::stress()];
    let known = |t: &str| {
        reserved.iter().any(|r| r.as_str() == t) || alphabet.tokens.keys().any(|k| k.as_str() == t)
    };
    let mut out = Vec::new();
    match mode {
        TokenizeMode::Whitespace => {
            let mut offset = 0;
            for unit in line.split_inclusive(char::is_whitespace) {
                let word = unit.trim_end();
                if !word.is_empty() {
                    if !known(word) {
                        return Err(Error::UntokenizableInput { offset });
                    }
                    out.push(Token::new(word).expect("non-empty unit"));
                }
                offset += unit.len();
            }
        }
        TokenizeMode::LongestMatch => {
            let mut i = 0;
            while i < line.len() {
                let rest = &line[i..];
                let c = rest.chars().next().expect("non-empty");
                if c.is_whitespace() {
                    i += c.len_utf8();
                    continue;
                }
                let best = reserved
                    .iter()
                    .chain(alphabet.tokens.keys())
                    .filter(|t| rest.starts_with(t.as_str()))
                    .max_by_key(|t| t.as_str().len())
                    .ok_or(Error::UntokenizableInput { offset: i })?;
                i += best.as_str().len();
                out.push(best.clone());
            }
        }
    }
    Ok(out)
}

/// A syllabified word with its primary stress, if marked.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WordForm {
    pub syllables: Vec<Vec<Token>>,
    pub stress: Option<usize>,
}

impl WordForm {
    /// Marked token sequence: separators between syllables, the stress
    /// marker before the stressed syllable.
    pub fn to_tokens(&self) -> Vec<Token> {
        let mut out = Vec::new();
        for (i, syl) in self.syllables.iter().enumerate() {
            if i > 0 {
                out.push(Token::separator());
            }
            if self.stress == Some(i) {
                out.push(Token::stress());
            }
            out.extend(syl.iter().cloned());
        }
        out
    }

    /// Segments only, markers removed.
    pub fn plain_tokens(&self) -> Vec<Token> {
        self.syllables.iter().flatten().cloned().collect()
    }

    /// Space-separated marked form, which ingests back to the same word.
    pub fn to_text(&self) -> String {
        self.to_tokens()
            .iter()
            .map(Token::as_str)
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Splits a marked token sequence into a word form. Returns the reject
/// reason on failure.
pub fn word_from_tokens(tokens: &[Token], require_stress: bool) -> std::result::Result<WordForm, String> {
    if tokens.is_empty() {
        return Err("empty".to_string());
    }
    let mut syllables = Vec::new();
    let mut stressed = Vec::new();
    for (i, part) in tokens.split(|t| t.as_str() == SEPARATOR).enumerate() {
        let mut syl = Vec::with_capacity(part.len());
        for (j, t) in part.iter().enumerate() {
            if t.as_str() == STRESS {
                if j != 0 {
                    return Err(format!("misplaced stress marker in syllable {}", i + 1));
                }
                stressed.push(i);
            } else {
                syl.push(t.clone());
            }
        }
        if syl.is_empty() {
            return Err(format!("empty syllable {}", i + 1));
        }
        syllables.push(syl);
    }
    let stress = match (stressed.len(), require_stress) {
        (1, _) => Some(stressed[0]),
        (0, false) => None,
        (n, _) => return Err(format!("expected one stress marker, found {n}")),
    };
    Ok(WordForm { syllables, stress })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IngestOptions {
    pub require_stress: bool,
    pub mode: TokenizeMode,
}

impl Default for IngestOptions {
    fn default() -> Self {
        IngestOptions {
            require_stress: true,
            mode: TokenizeMode::LongestMatch,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reject {
    /// 1-based input line.
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Ingested {
    pub words: Vec<WordForm>,
    pub rejects: Vec<Reject>,
    /// Input lines considered, comments excluded.
    pub lines: usize,
}

impl Ingested {
    /// Marked token sequences, as used for instantiation.
    pub fn data(&self) -> Vec<Vec<Token>> {
        self.words.iter().map(WordForm::to_tokens).collect()
    }

    /// One normalized word per line.
    pub fn normalized(&self) -> String {
        let mut out = String::new();
        for w in &self.words {
            out.push_str(&w.to_text());
            out.push('\n');
        }
        out
    }

    pub fn reject_log(&self) -> String {
        let mut out = String::from("line\treason\n");
        for r in &self.rejects {
            let _ = writeln!(out, "{}\t{}", r.line, r.reason);
        }
        out
    }
}

fn is_comment(line: &str) -> bool {
    line.trim_start().starts_with('#')
}

/// Tokenizes and filters word-list lines. Bad lines are rejected with a
/// reason, never raised as errors; blank lines are rejects too.
pub fn ingest<'a>(
    lines: impl IntoIterator<Item = &'a str>,
    alphabet: &Alphabet,
    options: IngestOptions,
) -> Ingested {
    let mut out = Ingested::default();
    for (i, line) in lines.into_iter().enumerate() {
        if is_comment(line) {
            continue;
        }
        out.lines += 1;
        let reject = |reason: String| Reject { line: i + 1, reason };
        match tokenize(line, alphabet, options.mode) {
            Err(Error::UntokenizableInput { offset }) => out
                .rejects
                .push(reject(format!("untokenizable input at byte {offset}"))),
            Err(e) => out.rejects.push(reject(e.to_string())),
            Ok(tokens) => match word_from_tokens(&tokens, options.require_stress) {
                Ok(w) => out.words.push(w),
                Err(reason) => out.rejects.push(reject(reason)),
            },
        }
    }
    out
}

/// Ingests the lines of a whole file.
pub fn ingest_text(text: &str, alphabet: &Alphabet, options: IngestOptions) -> Ingested {
    ingest(text.lines(), alphabet, options)
}
