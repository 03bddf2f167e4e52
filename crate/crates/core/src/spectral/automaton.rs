use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::Result;
use crate::words::{Word, WordCollection};

/// Deterministic automaton accepting the words that avoid a forbidden set.
///
/// States are the trie nodes of the forbidden words that do not end with a
/// forbidden word; state 0 is the empty prefix. `next[s][a]` is `None` when
/// reading `a` completes a forbidden word.
#[derive(Clone, Debug)]
pub struct AvoidanceAutomaton {
    q: u32,
    labels: Vec<Vec<u32>>,
    next: Vec<Vec<Option<u32>>>,
}

impl AvoidanceAutomaton {
    /// Aho–Corasick construction restricted to live states.
    pub fn new(forbidden: &[Word], q: u32) -> Result<Self> {
        for w in forbidden {
            w.check_alphabet(q)?;
        }
        let qs = q as usize;
        // trie
        let mut goto: Vec<Vec<Option<usize>>> = vec![vec![None; qs]];
        let mut label: Vec<Vec<u32>> = vec![Vec::new()];
        let mut terminal = vec![false];
        for w in forbidden {
            let mut s = 0;
            for &a in w.symbols() {
                s = match goto[s][a as usize] {
                    Some(t) => t,
                    None => {
                        goto.push(vec![None; qs]);
                        let mut l = label[s].clone();
                        l.push(a);
                        label.push(l);
                        terminal.push(false);
                        let t = goto.len() - 1;
                        goto[s][a as usize] = Some(t);
                        t
                    }
                };
            }
            terminal[s] = true;
        }
        // failure links, completed transitions and inherited terminality
        let n = goto.len();
        let mut fail = vec![0usize; n];
        let mut delta = vec![vec![0usize; qs]; n];
        let mut queue = VecDeque::new();
        for a in 0..qs {
            match goto[0][a] {
                Some(t) => {
                    delta[0][a] = t;
                    queue.push_back(t);
                }
                None => delta[0][a] = 0,
            }
        }
        while let Some(s) = queue.pop_front() {
            terminal[s] = terminal[s] || terminal[fail[s]];
            for a in 0..qs {
                match goto[s][a] {
                    Some(t) => {
                        fail[t] = if s == 0 { 0 } else { delta[fail[s]][a] };
                        delta[s][a] = t;
                        queue.push_back(t);
                    }
                    None => delta[s][a] = delta[fail[s]][a],
                }
            }
        }
        // `fail[t]` is a proper suffix and was dequeued before `t`, so
        // terminality already propagated along every failure chain.
        let mut index = vec![None; n];
        let mut labels = Vec::new();
        for s in 0..n {
            if !terminal[s] {
                index[s] = Some(labels.len() as u32);
                labels.push(label[s].clone());
            }
        }
        let next = (0..n)
            .filter(|&s| !terminal[s])
            .map(|s| (0..qs).map(|a| index[delta[s][a]]).collect())
            .collect();
        Ok(AvoidanceAutomaton { q, labels, next })
    }

    pub fn from_collection(g: &WordCollection) -> Result<Self> {
        Self::new(g.words(), g.alphabet_size())
    }

    pub fn alphabet_size(&self) -> u32 {
        self.q
    }

    pub fn num_states(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, s: usize) -> &[u32] {
        &self.labels[s]
    }

    pub fn step(&self, s: usize, a: u32) -> Option<usize> {
        self.next[s][a as usize].map(|t| t as usize)
    }

    /// Runs `w` from the start state; `None` if a forbidden word occurs.
    pub fn run(&self, w: &Word) -> Option<usize> {
        w.symbols().iter().try_fold(0, |s, &a| self.step(s, a))
    }

    pub fn accepts(&self, w: &Word) -> bool {
        self.run(w).is_some()
    }

    pub fn transfer_matrix(&self) -> TransferMatrix {
        let rows = self
            .next
            .iter()
            .map(|row| {
                let mut r: Vec<(usize, u64)> = Vec::new();
                for t in row.iter().flatten() {
                    let t = *t as usize;
                    match r.iter_mut().find(|(c, _)| *c == t) {
                        Some(e) => e.1 += 1,
                        None => r.push((t, 1)),
                    }
                }
                r.sort_unstable();
                r
            })
            .collect();
        TransferMatrix { rows }
    }

    /// `f(0..=n_max)`: the number of allowed words of each length.
    pub fn count_words_upto(&self, n_max: usize) -> Vec<BigInt> {
        let m = self.num_states();
        let mut cur = vec![BigInt::zero(); m];
        cur[0] = BigInt::from(1);
        let mut out = vec![BigInt::from(1)];
        for _ in 0..n_max {
            let mut nxt = vec![BigInt::zero(); m];
            for (s, c) in cur.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for t in self.next[s].iter().flatten() {
                    nxt[*t as usize] += c;
                }
            }
            out.push(nxt.iter().sum());
            cur = nxt;
        }
        out
    }

    pub fn count_words(&self, n: usize) -> BigInt {
        self.count_words_upto(n).pop().unwrap()
    }
}

/// Sparse nonnegative integer matrix: `rows[i]` lists `(j, T[i][j])` for the
/// nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferMatrix {
    rows: Vec<Vec<(usize, u64)>>,
}

#[derive(Serialize)]
struct TransferJson {
    dimension: usize,
    entries: Vec<(usize, usize, u64)>,
}

impl TransferMatrix {
    pub fn from_rows(rows: Vec<Vec<(usize, u64)>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().flatten().all(|&(j, _)| j < n));
        TransferMatrix { rows }
    }

    pub fn from_dense(m: &[Vec<u64>]) -> Self {
        Self::from_rows(
            m.iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|(_, v)| **v > 0)
                        .map(|(j, v)| (j, *v))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, u64)] {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.rows[i]
            .iter()
            .find(|(c, _)| *c == j)
            .map_or(0, |e| e.1)
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.dimension()];
        for (i, r) in self.rows.iter().enumerate() {
            for &(j, v) in r {
                rows[j].push((i, v));
            }
        }
        TransferMatrix { rows }
    }

    /// Principal submatrix on `states`, renumbered in the given order.
    pub fn restrict(&self, states: &[usize]) -> Self {
        let mut pos = vec![usize::MAX; self.dimension()];
        for (k, &s) in states.iter().enumerate() {
            pos[s] = k;
        }
        TransferMatrix {
            rows: states
                .iter()
                .map(|&s| {
                    self.rows[s]
                        .iter()
                        .filter(|(j, _)| pos[*j] != usize::MAX)
                        .map(|&(j, v)| (pos[j], v))
                        .collect()
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let entries = self
            .rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |&(j, v)| (i, j, v)))
            .collect();
        serde_json::to_value(TransferJson {
            dimension: self.dimension(),
            entries,
        })
        .expect("plain data serialises")
    }

    /// Strongly connected components (Tarjan, iterative), each sorted.
    pub fn sccs(&self) -> Vec<Vec<usize>> {
        let n = self.dimension();
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut out = Vec::new();
        let mut counter = 0;
        for root in 0..n {
            if index[root] != usize::MAX {
                continue;
            }
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut k)) = call.last_mut() {
                if let Some(&(w, _)) = self.rows[v].get(*k) {
                    *k += 1;
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                    continue;
                }
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    out.push(comp);
                }
            }
        }
        out
    }

    /// Components carrying a cycle: more than one state or a self-loop.
    pub fn nontrivial_sccs(&self) -> Vec<Vec<usize>> {
        let mut c: Vec<Vec<usize>> = self
            .sccs()
            .into_iter()
            .filter(|c| c.len() > 1 || self.get(c[0], c[0]) > 0)
            .collect();
        c.sort();
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{WordMode, WordParser};

    fn aut(text: &str, q: u32) -> AvoidanceAutomaton {
        let ws = WordParser::new(WordMode::Digit).parse_list(text, q).unwrap();
        AvoidanceAutomaton::new(&ws, q).unwrap()
    }

    #[test]
    fn state_counts() {
        assert_eq!(aut("11", 2).num_states(), 2);
        assert_eq!(aut("", 3).num_states(), 1);
        assert_eq!(aut("00,11", 2).num_states(), 3);
    }

    #[test]
    fn counts() {
        assert_eq!(aut("11", 2).count_words(4), BigInt::from(8));
        assert_eq!(aut("", 3).count_words(5), BigInt::from(243));
        assert_eq!(aut("00,11", 2).count_words(7), BigInt::from(2));
        let f = aut("01,10", 3).count_words_upto(3);
        assert_eq!(f, [1, 3, 7, 17].map(BigInt::from).to_vec());
    }

    #[test]
    fn failure_links_catch_inner_matches() {
        // "0120" contains "12"; state "01" must not survive reading "2"
        let a = aut("0120,12", 3);
        assert!(!a.accepts(&Word::new(vec![0, 1, 2]).unwrap()));
        assert!(a.accepts(&Word::new(vec![0, 1, 0, 2]).unwrap()));
    }

    #[test]
    fn scc_decomposition() {
        let t = TransferMatrix::from_dense(&[vec![0, 1, 0, 0], vec![1, 0, 1, 0], vec![0, 0, 0, 1], vec![0, 0, 0, 1]]);
        assert_eq!(t.sccs().len(), 3);
        assert_eq!(t.nontrivial_sccs(), vec![vec![0, 1], vec![3]]);
        let rows = aut("00,11", 2).transfer_matrix();
        assert_eq!(rows.nontrivial_sccs().len(), 1);
        assert_eq!(rows.to_json()["dimension"], 3);
    }
}
