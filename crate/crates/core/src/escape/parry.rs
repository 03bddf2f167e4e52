use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{
    space_size, spectral_radius, AvoidanceAutomaton, PerronResult, TransferMatrix,
    DEFAULT_ROOT_TOL,
};
use crate::words::Word;

/// Parry measure of an irreducible subshift in its `L`-block presentation,
/// `L = max(1, maxlen(F) - 1)`.
#[derive(Clone, Debug, Serialize)]
pub struct ParryData {
    pub q: u32,
    pub block_len: usize,
    pub theta: PerronResult,
    pub blocks: Vec<Word>,
    /// Right eigenvector, summing to 1.
    pub v: Vec<f64>,
    /// Left eigenvector, scaled so that `u·v = 1`.
    pub u: Vec<f64>,
    #[serde(skip)]
    index: HashMap<Vec<u32>, usize>,
    #[serde(skip)]
    automaton: AvoidanceAutomaton,
}

fn blocks_of_length(a: &AvoidanceAutomaton, q: u32, len: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut stack: Vec<(usize, Vec<u32>)> = vec![(0, Vec::new())];
    while let Some((s, w)) = stack.pop() {
        if w.len() == len {
            out.push(w);
            continue;
        }
        for x in (0..q).rev() {
            if let Some(t) = a.step(s, x) {
                let mut w2 = w.clone();
                w2.push(x);
                stack.push((t, w2));
            }
        }
    }
    out
}

fn eigenvector(t: &TransferMatrix, theta: f64) -> Result<Vec<f64>> {
    let n = t.dimension();
    let mut x = vec![1.0f64; n];
    for _ in 0..crate::spectral::MAX_POWER_ITERATIONS {
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = x[i];
            for &(j, c) in t.row(i) {
                y[i] += c as f64 * x[j];
            }
        }
        let s: f64 = y.iter().sum();
        let mut delta = 0.0f64;
        for i in 0..n {
            let yi = y[i] / s;
            delta = delta.max((yi - x[i]).abs());
            x[i] = yi;
        }
        if delta < 1e-15 {
            break;
        }
    }
    // residual check of T x = θ x
    let mut worst = 0.0f64;
    for i in 0..n {
        let tx: f64 = t.row(i).iter().map(|&(j, c)| c as f64 * x[j]).sum();
        worst = worst.max((tx - theta * x[i]).abs() / x[i].max(f64::MIN_POSITIVE));
    }
    if worst > 1e-8 * theta.max(1.0) {
        return Err(Error::NonConvergence(format!(
            "eigenvector residual {worst:e} after power iteration"
        )));
    }
    Ok(x)
}

pub fn parry_data(forbidden: &[Word], q: u32) -> Result<ParryData> {
    let a = AvoidanceAutomaton::new(forbidden, q)?;
    let l = forbidden.iter().map(Word::len).max().unwrap_or(0).saturating_sub(1).max(1);
    if space_size(q, l) > crate::spectral::brute_cap() {
        return Err(Error::CapExceeded {
            what: format!("{l}-block presentation over {q} symbols"),
            needed: space_size(q, l).to_string(),
            cap: crate::spectral::brute_cap(),
        });
    }
    let all = blocks_of_length(&a, q, l);
    let pos: HashMap<&[u32], usize> = all.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
    let rows: Vec<Vec<(usize, u64)>> = all
        .iter()
        .map(|b| {
            let state = a.run(&Word::new(b.clone()).unwrap()).unwrap();
            (0..q)
                .filter(|&x| a.step(state, x).is_some())
                .filter_map(|x| {
                    let mut next = b[1..].to_vec();
                    next.push(x);
                    pos.get(next.as_slice()).map(|&j| (j, 1))
                })
                .collect()
        })
        .collect();
    let full = TransferMatrix::from_rows(rows);
    let comps = full.nontrivial_sccs();
    match comps.len() {
        0 => return Err(Error::EmptySubshift),
        1 => {}
        n => {
            return Err(Error::NotIrreducible(format!(
                "{n} nontrivial strongly connected components in the {l}-block graph"
            )))
        }
    }
    let states = &comps[0];
    let t = full.restrict(states);
    let theta = spectral_radius(&t, DEFAULT_ROOT_TOL)?;
    let v = eigenvector(&t, theta.value)?;
    let mut u = eigenvector(&t.transpose(), theta.value)?;
    let dot: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    for x in &mut u {
        *x /= dot;
    }
    let blocks: Vec<Word> = states
        .iter()
        .map(|&s| Word::new(all[s].clone()).unwrap())
        .collect();
    let index = blocks
        .iter()
        .enumerate()
        .map(|(i, b)| (b.symbols().to_vec(), i))
        .collect();
    Ok(ParryData {
        q,
        block_len: l,
        theta,
        blocks,
        v,
        u,
        index,
        automaton: a,
    })
}

impl ParryData {
    pub fn dot(&self) -> f64 {
        self.u.iter().zip(&self.v).map(|(a, b)| a * b).sum()
    }

    /// `μ(C_w)`; zero for allowed words that leave the recurrent part.
    pub fn measure(&self, w: &Word) -> Result<f64> {
        w.check_alphabet(self.q)?;
        if !self.automaton.accepts(w) {
            return Err(Error::NotAllowedWord(w.to_string()));
        }
        let s = w.symbols();
        let l = self.block_len;
        if s.len() < l {
            return Ok(self
                .index
                .iter()
                .filter(|(b, _)| b.starts_with(s))
                .map(|(_, &i)| self.u[i] * self.v[i])
                .sum());
        }
        let (Some(&first), Some(&last)) = (self.index.get(&s[..l]), self.index.get(&s[s.len() - l..]))
        else {
            return Ok(0.0);
        };
        if (0..=s.len() - l).any(|k| !self.index.contains_key(&s[k..k + l])) {
            return Ok(0.0);
        }
        Ok(self.u[first] * self.v[last] / self.theta.value.powi((s.len() - l) as i32))
    }
}

pub fn cylinder_measure(w: &Word, pd: &ParryData) -> Result<f64> {
    pd.measure(w)
}

/// Measure of a union of cylinders of equal length (pairwise disjoint).
pub fn hole_measure(hole: &[Word], pd: &ParryData) -> Result<f64> {
    let mut total = 0.0;
    for w in hole {
        total += pd.measure(w)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{WordMode, WordParser};

    fn d(text: &str, q: u32) -> Vec<Word> {
        WordParser::new(WordMode::Digit).parse_list(text, q).unwrap()
    }

    #[test]
    fn full_shift_is_uniform() {
        let pd = parry_data(&[], 3).unwrap();
        assert!((pd.theta.value - 3.0).abs() < 1e-12);
        let m = pd.measure(&d("12", 3)[0]).unwrap();
        assert!((m - 1.0 / 9.0).abs() < 1e-12);
        assert!((pd.dot() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn golden_mean() {
        let pd = parry_data(&d("11", 2), 2).unwrap();
        let phi: f64 = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((pd.theta.value - phi).abs() < 1e-11);
        let m0 = pd.measure(&d("0", 2)[0]).unwrap();
        assert!((m0 - phi * phi / (phi * phi + 1.0)).abs() < 1e-10);
        assert_eq!(pd.measure(&d("011", 2)[0]).unwrap_err().name(), "NotAllowedWord");
    }

    #[test]
    fn cylinders_sum_to_one() {
        for (f, q) in [("00", 3), ("000,121", 3), ("01,10", 3)] {
            let f = d(f, q);
            let Ok(pd) = parry_data(&f, q) else { continue };
            for n in 1..=4 {
                let a = AvoidanceAutomaton::new(&f, q).unwrap();
                let total: f64 = blocks_of_length(&a, q, n)
                    .into_iter()
                    .map(|b| pd.measure(&Word::new(b).unwrap()).unwrap_or(0.0))
                    .sum();
                assert!((total - 1.0).abs() < 1e-9, "{f:?} n={n}: {total}");
            }
        }
    }

    #[test]
    fn reducible_is_rejected() {
        assert_eq!(parry_data(&d("01,10", 2), 2).unwrap_err().name(), "NotIrreducible");
    }
}
