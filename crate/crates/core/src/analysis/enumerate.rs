use crate::error::Result;
use crate::ofs::{compile, Automaton, Derivation, OfsModel};
use crate::token::Token;

/// Every derivation with at most `max_k` slots, each exactly once: by slot
/// count, then position sequence, then leaf strings in sorted order.
pub fn enumerate(model: &OfsModel, max_k: usize) -> Result<Enumeration> {
    Ok(Enumeration::new(compile(model)?, max_k))
}

pub struct Enumeration {
    a: Automaton,
    max_k: usize,
    k: usize,
    paths: std::vec::IntoIter<Vec<usize>>,
    current: Option<(Vec<usize>, Vec<usize>)>,
}

impl Enumeration {
    fn new(a: Automaton, max_k: usize) -> Self {
        let paths = Self::paths(&a, 0);
        Enumeration {
            a,
            max_k,
            k: 0,
            paths: paths.into_iter(),
            current: None,
        }
    }

    /// Position sequences of length `k` forming an accepting path.
    fn paths(a: &Automaton, k: usize) -> Vec<Vec<usize>> {
        if a.start.is_none() {
            return Vec::new();
        }
        let g = &a.glushkov;
        if k == 0 {
            return if g.nullable { vec![Vec::new()] } else { Vec::new() };
        }
        let n = g.positions.len();
        // can_end[j][p]: from p, a last position is reached after exactly j more steps
        let mut can_end = vec![vec![false; n]; k];
        can_end[0] = g.last.clone();
        for j in 1..k {
            for p in 0..n {
                can_end[j][p] = g.follow[p].iter().any(|&(q, _)| can_end[j - 1][q]);
            }
        }
        let mut out = Vec::new();
        let mut path = Vec::with_capacity(k);
        fn extend(
            a: &Automaton,
            can_end: &[Vec<bool>],
            k: usize,
            path: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if path.len() == k {
                out.push(path.clone());
                return;
            }
            let rest = k - path.len() - 1;
            let next: Vec<usize> = match path.last() {
                None => a.glushkov.first.clone(),
                Some(&p) => a.glushkov.follow[p].iter().map(|&(q, _)| q).collect(),
            };
            for q in next {
                if can_end[rest][q] {
                    path.push(q);
                    extend(a, can_end, k, path, out);
                    path.pop();
                }
            }
        }
        extend(a, &can_end, k, &mut path, &mut out);
        out
    }

    fn emit(&self, path: &[usize], digits: &[usize]) -> (Vec<Token>, Derivation) {
        let leaves: Vec<(usize, Vec<Token>)> = path
            .iter()
            .zip(digits)
            .map(|(&p, &d)| (p, self.a.slot_of(p).strings[d].clone()))
            .collect();
        let word = leaves.iter().flat_map(|(_, s)| s.iter().cloned()).collect();
        (word, self.a.derivation(&leaves))
    }
}

impl Iterator for Enumeration {
    type Item = (Vec<Token>, Derivation);

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some((path, mut digits)) = self.current.take() {
                let item = self.emit(&path, &digits);
                // advance the odometer, last slot fastest
                let mut i = digits.len();
                let mut done = true;
                while i > 0 {
                    i -= 1;
                    digits[i] += 1;
                    if digits[i] < self.a.slot_of(path[i]).strings.len() {
                        done = false;
                        break;
                    }
                    digits[i] = 0;
                }
                if !done {
                    self.current = Some((path, digits));
                }
                return Some(item);
            }
            match self.paths.next() {
                Some(path) => {
                    let digits = vec![0; path.len()];
                    self.current = Some((path, digits));
                }
                None => {
                    if self.k >= self.max_k {
                        return None;
                    }
                    self.k += 1;
                    self.paths = Self::paths(&self.a, self.k).into_iter();
                }
            }
        }
    }
}
