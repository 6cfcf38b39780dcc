use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::generalise::similarity;
use crate::numeric::{format_decimal, Rational};
use crate::ofs::OfsModel;
use crate::token::Token;
use num_traits::Zero;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassStat {
    pub name: String,
    pub size: usize,
    /// Strings of this class found in no other class.
    pub unique_count: usize,
    /// `unique_count / size`, zero for an empty class.
    pub unique_pct: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassStats {
    pub classes: Vec<ClassStat>,
    /// Size of the union of all classes.
    pub total_size: usize,
    /// Strings occurring in exactly one class.
    pub total_unique: usize,
}

fn ratio(a: usize, b: usize) -> Rational {
    if b == 0 {
        Rational::zero()
    } else {
        Rational::new(a as u64, b as u64)
    }
}

fn percent(r: &Rational) -> String {
    format!("{}%", format_decimal(&(r * Rational::from(100)), 2))
}

impl ClassStats {
    pub fn total_pct(&self) -> Rational {
        ratio(self.total_unique, self.total_size)
    }

    /// Aligned table with `all` and `unique (%)` columns.
    pub fn to_text(&self) -> String {
        let width = self
            .classes
            .iter()
            .map(|c| c.name.len())
            .chain([5])
            .max()
            .unwrap_or(5);
        let mut out = format!("{:<width$}  {:>8}  {:>18}\n", "class", "all", "unique (%)");
        let row = |out: &mut String, name: &str, size: usize, unique: usize, pct: Rational| {
            let u = if size == 0 {
                "- (-)".to_string()
            } else {
                format!("{unique} ({})", percent(&pct))
            };
            let _ = writeln!(out, "{name:<width$}  {size:>8}  {u:>18}");
        };
        for c in &self.classes {
            row(&mut out, &c.name, c.size, c.unique_count, c.unique_pct);
        }
        row(&mut out, "TOTAL", self.total_size, self.total_unique, self.total_pct());
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("class\tall\tunique\tunique_pct\n");
        for c in &self.classes {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}",
                c.name,
                c.size,
                c.unique_count,
                format_decimal(&(c.unique_pct * Rational::from(100)), 2)
            );
        }
        let _ = writeln!(
            out,
            "TOTAL\t{}\t{}\t{}",
            self.total_size,
            self.total_unique,
            format_decimal(&(self.total_pct() * Rational::from(100)), 2)
        );
        out
    }
}

/// Sizes and unique counts of every level-0 set.
pub fn class_stats(model: &OfsModel) -> ClassStats {
    let mut owners: BTreeMap<&Vec<Token>, usize> = BTreeMap::new();
    for rule in &model.base {
        for s in rule.rhs.iter() {
            *owners.entry(s).or_default() += 1;
        }
    }
    let classes = model
        .base
        .iter()
        .map(|r| {
            let unique = r.rhs.iter().filter(|s| owners[s] == 1).count();
            ClassStat {
                name: r.name.clone(),
                size: r.rhs.len(),
                unique_count: unique,
                unique_pct: ratio(unique, r.rhs.len()),
            }
        })
        .collect();
    ClassStats {
        classes,
        total_size: owners.len(),
        total_unique: owners.values().filter(|&&n| n == 1).count(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionEntry {
    pub a: String,
    pub b: String,
    pub intersection_size: usize,
    /// Jaccard similarity; zero when both sets are empty.
    pub similarity: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionTable {
    /// Pairs `(a, b)` with `a` before `b` in rule order.
    pub entries: Vec<IntersectionEntry>,
}

impl IntersectionTable {
    pub fn get(&self, a: &str, b: &str) -> Option<&IntersectionEntry> {
        self.entries
            .iter()
            .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
    }

    /// One line per pair: `a  b  |∩| (sim)`, similarity with `places` decimals.
    pub fn to_text(&self, places: u32) -> String {
        let wa = self.entries.iter().map(|e| e.a.len()).chain([1]).max().unwrap_or(1);
        let wb = self.entries.iter().map(|e| e.b.len()).chain([1]).max().unwrap_or(1);
        let mut out = String::new();
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:<wa$}  {:<wb$}  {} ({})",
                e.a,
                e.b,
                e.intersection_size,
                format_decimal(&e.similarity, places)
            );
        }
        out
    }

    pub fn to_tsv(&self, places: u32) -> String {
        let mut out = String::from("a\tb\tintersection\tsim\tsim_exact\n");
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}",
                e.a,
                e.b,
                e.intersection_size,
                format_decimal(&e.similarity, places),
                crate::numeric::format_exact(&e.similarity)
            );
        }
        out
    }
}

/// All pairwise intersections and similarities of level-0 sets.
pub fn intersection_table(model: &OfsModel) -> IntersectionTable {
    let mut entries = Vec::new();
    for (i, a) in model.base.iter().enumerate() {
        for b in &model.base[i + 1..] {
            entries.push(IntersectionEntry {
                a: a.name.clone(),
                b: b.name.clone(),
                intersection_size: a.rhs.intersection_len(&b.rhs),
                similarity: similarity(&a.rhs, &b.rhs).unwrap_or_else(|_| Rational::zero()),
            });
        }
    }
    IntersectionTable { entries }
}
