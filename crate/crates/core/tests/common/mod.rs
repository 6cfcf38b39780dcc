//! Shared generators and brute-force oracles for the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use num_bigint::BigUint;
use ofs_core::ofs::{Grammar, ObjectSet, OfsModel, RegexExpr, Rule};
use ofs_core::token::Token;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const MAX_WORD: usize = 8;

pub fn repo_file(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

pub fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn read(rel: &str) -> String {
    let p = repo_file(rel);
    std::fs::read_to_string(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()))
}

pub fn t(s: &str) -> Token {
    Token::new(s).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every string over {a, b} of length at most `max`, shortest first.
pub fn all_strings(max: usize) -> Vec<Vec<Token>> {
    let mut out = vec![Vec::new()];
    let mut layer = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for s in &layer {
            for c in ["a", "b"] {
                let mut x: Vec<Token> = s.clone();
                x.push(t(c));
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        layer = next;
    }
    out
}

fn random_set(rng: &mut ChaCha8Rng) -> ObjectSet {
    let pool = all_strings(3);
    let size = rng.gen_range(1..=5);
    let mut set = ObjectSet::new();
    for s in pool.choose_multiple(rng, size) {
        set.insert(s.clone());
    }
    set
}

fn random_regex(rng: &mut ChaCha8Rng, names: &[String], depth: usize) -> RegexExpr {
    let leaf = depth == 0 || rng.gen_bool(0.35);
    if leaf {
        if rng.gen_ratio(1, 12) {
            return RegexExpr::Epsilon;
        }
        return RegexExpr::name(names.choose(rng).unwrap().clone());
    }
    match rng.gen_range(0..4) {
        0 => RegexExpr::concat((0..2).map(|_| random_regex(rng, names, depth - 1))),
        1 => RegexExpr::alt((0..2).map(|_| random_regex(rng, names, depth - 1))),
        2 => RegexExpr::star(random_regex(rng, names, depth - 1)),
        _ => RegexExpr::plus(random_regex(rng, names, depth - 1)),
    }
}

/// A small valid model over terminals {a, b}: up to four non-empty level-0
/// sets of strings of at most three tokens, one or two upper levels.
pub fn random_model(rng: &mut ChaCha8Rng) -> OfsModel {
    let n = rng.gen_range(1..=4);
    let classes: Vec<String> = (0..n).map(|i| format!("C{i}")).collect();
    let base = classes
        .iter()
        .map(|c| Rule::new(c.clone(), random_set(rng)))
        .collect();
    let mut upper = Vec::new();
    if rng.gen_ratio(1, 3) {
        let mids: Vec<String> = (0..rng.gen_range(1..=2)).map(|i| format!("M{i}")).collect();
        upper.push(
            mids.iter()
                .map(|m| Rule::new(m.clone(), random_regex(rng, &classes, 2)))
                .collect(),
        );
        let mut below = classes.clone();
        below.extend(mids);
        upper.push(vec![Rule::new("S", random_regex(rng, &below, 2))]);
    } else {
        upper.push(vec![Rule::new("S", random_regex(rng, &classes, 3))]);
    }
    let model = Grammar {
        name: "S".to_string(),
        terminals: [t("a"), t("b")].into_iter().collect(),
        base,
        upper,
    };
    assert!(model.validate().is_valid(), "{model:?}");
    model
}

/// Random models whose derivations up to four slots stay few enough to
/// enumerate exhaustively.
pub fn small_models(seed: u64, count: usize) -> Vec<OfsModel> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let m = random_model(&mut r);
        let total: usize = (0..=4)
            .map(|k| marked_count(&m, k))
            .sum::<BigUint>()
            .try_into()
            .unwrap_or(usize::MAX);
        if total <= 20_000 {
            out.push(m);
        }
    }
    out
}

/// Start expression with every upper-level reference inlined and every
/// level-0 occurrence numbered.
#[derive(Debug, Clone)]
enum Tree {
    Eps,
    Leaf(usize),
    Cat(Vec<Tree>),
    Or(Vec<Tree>),
    Star(Box<Tree>),
    Plus(Box<Tree>),
}

fn expand(m: &OfsModel, e: &RegexExpr, occ: &mut Vec<String>) -> Tree {
    match e {
        RegexExpr::Epsilon => Tree::Eps,
        RegexExpr::Ref(n) => {
            if m.base.iter().any(|r| &r.name == n) {
                occ.push(n.clone());
                Tree::Leaf(occ.len() - 1)
            } else {
                let rhs = m
                    .upper
                    .iter()
                    .flatten()
                    .find(|r| &r.name == n)
                    .expect("defined")
                    .rhs
                    .clone();
                expand(m, &rhs, occ)
            }
        }
        RegexExpr::Concat(xs) => Tree::Cat(xs.iter().map(|x| expand(m, x, occ)).collect()),
        RegexExpr::Alt(xs) => Tree::Or(xs.iter().map(|x| expand(m, x, occ)).collect()),
        RegexExpr::Star(x) => Tree::Star(Box::new(expand(m, x, occ))),
        RegexExpr::Plus(x) => Tree::Plus(Box::new(expand(m, x, occ))),
    }
}

/// Words by length, truncated at `max`.
type Layers<T> = Vec<BTreeSet<Vec<T>>>;

fn cat_layers<T: Ord + Clone>(a: &Layers<T>, b: &Layers<T>, max: usize) -> Layers<T> {
    let mut out = vec![BTreeSet::new(); max + 1];
    for (i, la) in a.iter().enumerate() {
        for (j, lb) in b.iter().enumerate() {
            if i + j > max {
                break;
            }
            for x in la {
                for y in lb {
                    let mut w = x.clone();
                    w.extend(y.iter().cloned());
                    out[i + j].insert(w);
                }
            }
        }
    }
    out
}

fn union_layers<T: Ord + Clone>(a: &mut Layers<T>, b: &Layers<T>) -> bool {
    let mut grew = false;
    for (x, y) in a.iter_mut().zip(b) {
        for w in y {
            grew |= x.insert(w.clone());
        }
    }
    grew
}

fn star_layers<T: Ord + Clone>(inner: &Layers<T>, max: usize) -> Layers<T> {
    let mut acc = vec![BTreeSet::new(); max + 1];
    acc[0].insert(Vec::new());
    loop {
        let next = cat_layers(&acc, inner, max);
        if !union_layers(&mut acc, &next) {
            return acc;
        }
    }
}

fn tree_language<T: Ord + Clone>(
    tree: &Tree,
    leaf: &dyn Fn(usize) -> Layers<T>,
    max: usize,
) -> Layers<T> {
    let mut empty = vec![BTreeSet::new(); max + 1];
    match tree {
        Tree::Eps => {
            empty[0].insert(Vec::new());
            empty
        }
        Tree::Leaf(i) => leaf(*i),
        Tree::Cat(xs) => {
            let mut acc = vec![BTreeSet::new(); max + 1];
            acc[0].insert(Vec::new());
            for x in xs {
                acc = cat_layers(&acc, &tree_language(x, leaf, max), max);
            }
            acc
        }
        Tree::Or(xs) => {
            for x in xs {
                union_layers(&mut empty, &tree_language(x, leaf, max));
            }
            empty
        }
        Tree::Star(x) => star_layers(&tree_language(x, leaf, max), max),
        Tree::Plus(x) => {
            let inner = tree_language(x, leaf, max);
            cat_layers(&inner, &star_layers(&inner, max), max)
        }
    }
}

fn start_tree(m: &OfsModel) -> Option<(Tree, Vec<String>)> {
    let start = m.start()?;
    let mut occ = Vec::new();
    let tree = expand(m, &RegexExpr::name(start), &mut occ);
    Some((tree, occ))
}

fn set_of<'a>(m: &'a OfsModel, name: &str) -> &'a ObjectSet {
    &m.base.iter().find(|r| r.name == name).unwrap().rhs
}

/// Sequences of level-0 occurrences (class names) of length exactly `k`:
/// the marked language of the expanded start expression.
pub fn marked_words(m: &OfsModel, k: usize) -> Vec<Vec<String>> {
    let Some((tree, occ)) = start_tree(m) else {
        return Vec::new();
    };
    let leaf = |i: usize| {
        let mut l: Layers<usize> = vec![BTreeSet::new(); k + 1];
        if k >= 1 {
            l[1].insert(vec![i]);
        }
        l
    };
    let lang = tree_language(&tree, &leaf, k);
    lang[k]
        .iter()
        .map(|w| w.iter().map(|&i| occ[i].clone()).collect())
        .collect()
}

/// Derivation count oracle: one derivation per marked word and choice of
/// leaf strings.
pub fn marked_count(m: &OfsModel, k: usize) -> BigUint {
    marked_words(m, k)
        .iter()
        .map(|w| {
            w.iter()
                .map(|c| BigUint::from(set_of(m, c).len()))
                .product::<BigUint>()
        })
        .sum()
}

/// Distinct yields of all `k`-slot derivations.
pub fn marked_yields(m: &OfsModel, k: usize) -> BTreeSet<Vec<Token>> {
    let mut out = BTreeSet::new();
    for w in marked_words(m, k) {
        let mut acc: BTreeSet<Vec<Token>> = BTreeSet::from([Vec::new()]);
        for c in &w {
            let mut next = BTreeSet::new();
            for prefix in &acc {
                for s in set_of(m, c).iter() {
                    let mut x = prefix.clone();
                    x.extend(s.iter().cloned());
                    next.insert(x);
                }
            }
            acc = next;
        }
        out.extend(acc);
    }
    out
}

/// The string language of the model restricted to words of at most `max`
/// tokens, computed set-theoretically from the rule right-hand sides.
pub fn language(m: &OfsModel, max: usize) -> BTreeSet<Vec<Token>> {
    let Some((tree, occ)) = start_tree(m) else {
        return BTreeSet::new();
    };
    let leaf = |i: usize| {
        let mut l: Layers<Token> = vec![BTreeSet::new(); max + 1];
        for s in set_of(m, &occ[i]).iter() {
            if s.len() <= max {
                l[s.len()].insert(s.clone());
            }
        }
        l
    };
    tree_language(&tree, &leaf, max).into_iter().flatten().collect()
}

/// Every way to cut `0..n` into `parts` consecutive, possibly empty spans.
pub fn splits(n: usize, parts: usize) -> Vec<Vec<(usize, usize)>> {
    fn go(start: usize, n: usize, left: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if left == 0 {
            if start == n {
                out.push(cur.clone());
            }
            return;
        }
        for end in start..=n {
            cur.push((start, end));
            go(end, n, left - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, parts, &mut Vec::new(), &mut out);
    out
}

/// Level-0 sets keyed by rule name.
pub fn base_sets(m: &OfsModel) -> BTreeMap<String, BTreeSet<Vec<Token>>> {
    m.base
        .iter()
        .map(|r| (r.name.clone(), r.rhs.as_set().clone()))
        .collect()
}

/// Level-0 sizes of the German instantiation of the twelve-class word model.
pub const GERMAN_CLASS_SIZES: [(&str, usize); 12] = [
    ("S_mon_st", 5_028),
    ("S_mon_pl", 1_813),
    ("S_ini_st", 3_658),
    ("S_ini_pr", 707),
    ("S_ini_pl", 1_628),
    ("S_med_st", 2_527),
    ("S_med_pr", 618),
    ("S_med_po", 2_518),
    ("S_med_pl", 2_220),
    ("S_fin_st", 4_261),
    ("S_fin_po", 4_354),
    ("S_fin_pl", 3_716),
];

/// `size` one-token strings unique to `name`.
pub fn synthetic_set(name: &str, size: usize) -> ObjectSet {
    let mut set = ObjectSet::new();
    for i in 0..size {
        set.insert(vec![t(&format!("{name}.{i}"))]);
    }
    set
}

/// A model with the given upper levels and synthetic level-0 sets.
pub fn sized_model(text_upper: &str, sizes: &[(&str, usize)]) -> OfsModel {
    let mut text = String::from(text_upper);
    text.push_str("level 0:\n");
    for (name, _) in sizes {
        text.push_str(&format!("  {name} = {{ }}\n"));
    }
    let mut m = ofs_core::ofs::parse_model(&text).unwrap();
    let sizes: BTreeMap<&str, usize> = sizes.iter().copied().collect();
    for rule in &mut m.base {
        rule.rhs = synthetic_set(&rule.name, sizes[rule.name.as_str()]);
        m.terminals.extend(rule.rhs.iter().flatten().cloned());
    }
    m
}

pub fn model1() -> OfsModel {
    sized_model(
        "ofs-model Word levels=2\nlevel 1:\n  Word => Syll+\n",
        &[("Syll", 10_598)],
    )
}

pub fn model2() -> OfsModel {
    sized_model(
        "ofs-model Word levels=2\nlevel 1:\n  Word => Syll_mon | Syll_ini Syll_med* Syll_fin\n",
        &[
            ("Syll_mon", 5_114),
            ("Syll_ini", 3_806),
            ("Syll_med", 3_832),
            ("Syll_fin", 7_040),
        ],
    )
}

/// The twelve-class word prototype's rule structure with German sizes.
pub fn model3() -> OfsModel {
    let proto = read("prototypes/word12.ofsp");
    let upper: String = proto
        .lines()
        .take_while(|l| l.trim() != "level 0:")
        .map(|l| format!("{l}\n"))
        .collect();
    sized_model(&upper, &GERMAN_CLASS_SIZES)
}

pub const SYNTH_ALPHABET: &str = "\
p: CONSONANTS
t: CONSONANTS
k: CONSONANTS
m: CONSONANTS
n: CONSONANTS
s: CONSONANTS
l: CONSONANTS
tS: CONSONANTS
a: VOWELS
e: VOWELS
i: VOWELS
o: VOWELS
u: VOWELS
aI: VOWELS
";

/// Marked word list: syllables joined by `-`, `'` before the stressed
/// syllable, unstressed monosyllables bare. Every stress shape of words up
/// to six syllables occurs at least once.
pub fn synthetic_corpus(seed: u64, words: usize) -> Vec<String> {
    let mut r = rng(seed);
    let onsets = ["", "p", "t", "k", "m", "n", "s", "l", "tS", "st", "pl", "kl"];
    let nuclei = ["a", "e", "i", "o", "u", "aI"];
    let codas = ["", "", "n", "s", "k", "m", "st", "lt"];
    let mut shapes: Vec<(usize, Option<usize>)> = vec![(1, None)];
    for n in 1..=6 {
        for s in 0..n {
            shapes.push((n, Some(s)));
        }
    }
    let mut out = Vec::new();
    while out.len() < words {
        let (n, stress) = if out.len() < shapes.len() {
            shapes[out.len()]
        } else {
            let n = r.gen_range(1..=6);
            let stress = if n == 1 && r.gen_ratio(1, 4) {
                None
            } else {
                Some(r.gen_range(0..n))
            };
            (n, stress)
        };
        let syllables: Vec<String> = (0..n)
            .map(|i| {
                let syl = format!(
                    "{}{}{}",
                    onsets.choose(&mut r).unwrap(),
                    nuclei.choose(&mut r).unwrap(),
                    codas.choose(&mut r).unwrap()
                );
                if stress == Some(i) {
                    format!("'{syl}")
                } else {
                    syl
                }
            })
            .collect();
        out.push(syllables.join("-"));
    }
    out
}
