use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::numeric::format_scientific;
use crate::ofs::{compile, Automaton, Config, OfsModel};
use crate::token::Token;

/// Environment variable overriding the determinization state budget.
pub const STATE_BUDGET_VAR: &str = "OFS_STATE_BUDGET";
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

pub fn state_budget() -> usize {
    std::env::var(STATE_BUDGET_VAR)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_STATE_BUDGET)
}

/// Number of derivations with exactly `k` level-0 slots, each slot weighted
/// by the size of its set.
pub fn count_derivations(model: &OfsModel, k: usize) -> Result<BigUint> {
    Ok(derivations_in(&compile(model)?, k))
}

pub(crate) fn derivations_in(a: &Automaton, k: usize) -> BigUint {
    if a.start.is_none() {
        return BigUint::zero();
    }
    if k == 0 {
        return if a.glushkov.nullable {
            BigUint::one()
        } else {
            BigUint::zero()
        };
    }
    let n = a.glushkov.positions.len();
    let size = |p: usize| BigUint::from(a.slot_of(p).strings.len());
    let mut f = vec![BigUint::zero(); n];
    for &p in &a.glushkov.first {
        f[p] = size(p);
    }
    for _ in 1..k {
        let mut g = vec![BigUint::zero(); n];
        for (p, fp) in f.iter().enumerate() {
            if fp.is_zero() {
                continue;
            }
            for &(q, _) in &a.glushkov.follow[p] {
                g[q] += fp * size(q);
            }
        }
        f = g;
    }
    f.into_iter()
        .enumerate()
        .filter(|(p, _)| a.glushkov.last[*p])
        .map(|(_, v)| v)
        .sum()
}

/// Number of distinct token strings derivable with exactly `k` slots, using
/// the state budget from the environment.
pub fn count_distinct(model: &OfsModel, k: usize) -> Result<BigUint> {
    count_distinct_with_budget(model, k, state_budget())
}

pub fn count_distinct_with_budget(model: &OfsModel, k: usize, budget: usize) -> Result<BigUint> {
    let a = compile(model)?;
    if a.start.is_none() {
        return Ok(BigUint::zero());
    }
    Distinct::new(&a, k, budget).run()
}

type State = Vec<(Config, usize)>;

/// Subset construction over (configuration, slots used) pairs. Every token
/// either deepens a trie node or follows slot entries, so the deterministic
/// automaton is acyclic and its accepting paths are the distinct strings.
struct Distinct<'a> {
    a: &'a Automaton,
    k: usize,
    budget: usize,
    ids: HashMap<State, usize>,
    states: Vec<State>,
    memo: Vec<Option<BigUint>>,
}

impl<'a> Distinct<'a> {
    fn new(a: &'a Automaton, k: usize, budget: usize) -> Self {
        Distinct {
            a,
            k,
            budget,
            ids: HashMap::new(),
            states: Vec::new(),
            memo: Vec::new(),
        }
    }

    fn closure(&self, seed: BTreeSet<(Config, usize)>) -> State {
        let mut set = seed;
        let mut todo: Vec<(Config, usize)> = set.iter().copied().collect();
        while let Some((c, used)) = todo.pop() {
            let next: Vec<(Config, usize)> = match c {
                Config::Inside(p, n) => {
                    if self.a.slot_of(p).trie.nodes[n].end {
                        vec![(Config::After(p), used)]
                    } else {
                        Vec::new()
                    }
                }
                _ if used < self.k => self
                    .a
                    .successors(c)
                    .into_iter()
                    .map(|q| (Config::Inside(q, 0), used + 1))
                    .collect(),
                _ => Vec::new(),
            };
            for x in next {
                if set.insert(x) {
                    todo.push(x);
                }
            }
        }
        set.into_iter().collect()
    }

    fn intern(&mut self, s: State) -> Result<usize> {
        if let Some(&id) = self.ids.get(&s) {
            return Ok(id);
        }
        if self.states.len() >= self.budget {
            return Err(Error::BudgetExceeded(self.budget));
        }
        let id = self.states.len();
        self.ids.insert(s.clone(), id);
        self.states.push(s);
        self.memo.push(None);
        Ok(id)
    }

    fn step(&self, id: usize) -> BTreeMap<Token, BTreeSet<(Config, usize)>> {
        let mut moves: BTreeMap<Token, BTreeSet<(Config, usize)>> = BTreeMap::new();
        for &(c, used) in &self.states[id] {
            if let Config::Inside(p, n) = c {
                for (t, &m) in &self.a.slot_of(p).trie.nodes[n].children {
                    moves
                        .entry(t.clone())
                        .or_default()
                        .insert((Config::Inside(p, m), used));
                }
            }
        }
        moves
    }

    fn run(mut self) -> Result<BigUint> {
        let init = self.closure(BTreeSet::from([(Config::Start, 0)]));
        let root = self.intern(init)?;
        // iterative post-order over the acyclic state graph
        let mut stack: Vec<(usize, Option<Vec<usize>>)> = vec![(root, None)];
        while let Some((id, succ)) = stack.pop() {
            if self.memo[id].is_some() {
                continue;
            }
            match succ {
                None => {
                    let mut next = Vec::new();
                    for (_, seed) in self.step(id) {
                        let s = self.closure(seed);
                        next.push(self.intern(s)?);
                    }
                    let pending: Vec<usize> =
                        next.iter().copied().filter(|&n| self.memo[n].is_none()).collect();
                    stack.push((id, Some(next)));
                    for n in pending {
                        stack.push((n, None));
                    }
                }
                Some(next) => {
                    let accepting = self.states[id]
                        .iter()
                        .any(|&(c, used)| used == self.k && self.a.is_final(c));
                    let mut total = if accepting { BigUint::one() } else { BigUint::zero() };
                    for n in next {
                        total += self.memo[n].as_ref().expect("successor counted");
                    }
                    self.memo[id] = Some(total);
                }
            }
        }
        Ok(self.memo[root].take().expect("root counted"))
    }
}

/// Counts per slot length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRow {
    pub k: usize,
    pub derivations: BigUint,
    pub distinct: Option<BigUint>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountReport {
    pub rows: Vec<CountRow>,
}

pub fn count_report(model: &OfsModel, ks: &[usize], distinct: bool) -> Result<CountReport> {
    let a = compile(model)?;
    let budget = state_budget();
    let mut rows = Vec::new();
    for &k in ks {
        let distinct = if distinct {
            Some(if a.start.is_none() {
                BigUint::zero()
            } else {
                Distinct::new(&a, k, budget).run()?
            })
        } else {
            None
        };
        rows.push(CountRow {
            k,
            derivations: derivations_in(&a, k),
            distinct,
        });
    }
    Ok(CountReport { rows })
}

impl CountReport {
    pub fn to_text(&self) -> String {
        let mut out = String::from("slots  derivations  (approx)");
        let with_distinct = self.rows.iter().any(|r| r.distinct.is_some());
        if with_distinct {
            out.push_str("  distinct  (approx)");
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(
                out,
                "{:>5}  {:>11}  ({})",
                r.k,
                r.derivations,
                format_scientific(&r.derivations)
            );
            if let Some(d) = &r.distinct {
                let _ = write!(out, "  {:>8}  ({})", d, format_scientific(d));
            }
            out.push('\n');
        }
        out
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("slots\tderivations\tderivations_sci\tdistinct\tdistinct_sci\n");
        for r in &self.rows {
            let (d, ds) = match &r.distinct {
                Some(d) => (d.to_string(), format_scientific(d)),
                None => (String::new(), String::new()),
            };
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{d}\t{ds}",
                r.k,
                r.derivations,
                format_scientific(&r.derivations)
            );
        }
        out
    }
}
