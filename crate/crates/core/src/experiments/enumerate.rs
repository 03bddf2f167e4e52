use crate::error::{Error, Result};
use crate::words::{Word, WordCollection};

/// Default ceiling on `q^(p t)` for exhaustive enumeration.
pub const DEFAULT_ENUM_CAP: u64 = 100_000_000;

/// Environment variable overriding [`DEFAULT_ENUM_CAP`].
pub const ENUM_CAP_ENV: &str = "SFT_ESCAPE_ENUM_CAP";

pub fn enum_cap() -> u64 {
    std::env::var(ENUM_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

/// All words of length `p` over `q` symbols in lexicographic order.
pub fn all_words(q: u32, p: usize) -> Vec<Word> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; p];
    loop {
        out.push(Word::new(cur.clone()).expect("p >= 1"));
        let mut i = p;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < q {
                break;
            }
            cur[i] = 0;
        }
    }
}

fn relabel(words: &[&Word]) -> Vec<Vec<u32>> {
    let mut map: Vec<Option<u32>> = Vec::new();
    let mut next = 0;
    words
        .iter()
        .map(|w| {
            w.symbols()
                .iter()
                .map(|&s| {
                    let s = s as usize;
                    if s >= map.len() {
                        map.resize(s + 1, None);
                    }
                    *map[s].get_or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                })
                .collect()
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for rest in permutations(n - 1) {
        for k in 0..=rest.len() {
            let mut p = rest.clone();
            p.insert(k, n - 1);
            out.push(p);
        }
    }
    out
}

/// Orbit representative of a set of words under symbol permutations: the
/// smallest sorted first-occurrence relabelling over all word orders.
pub fn canonical_form(words: &[Word]) -> Vec<Word> {
    let best = permutations(words.len())
        .into_iter()
        .map(|order| {
            let ordered: Vec<&Word> = order.iter().map(|&i| &words[i]).collect();
            let mut r = relabel(&ordered);
            r.sort();
            r
        })
        .min()
        .unwrap_or_default();
    best.into_iter().map(|s| Word::new(s).expect("nonempty")).collect()
}

/// One collection of `t` distinct words of length `p` per orbit of the
/// symbol-permutation action, ordered lexicographically.
pub fn enumerate_canonical_collections(q: u32, p: usize, t: usize) -> Result<Vec<WordCollection>> {
    if q < 2 || p < 1 || t < 1 {
        return Err(Error::InvalidArgument(format!(
            "enumeration needs q >= 2, p >= 1, t >= 1 (got q={q}, p={p}, t={t})"
        )));
    }
    let raw = (q as u64).checked_pow((p * t) as u32).unwrap_or(u64::MAX);
    let cap = enum_cap();
    if raw > cap {
        return Err(Error::CapExceeded {
            what: format!("enumerating {t} words of length {p} over {q} symbols"),
            needed: raw.to_string(),
            cap,
        });
    }
    let words = all_words(q, p);
    let mut reps = std::collections::BTreeSet::new();
    let mut idx: Vec<usize> = (0..t).collect();
    if t > words.len() {
        return Ok(Vec::new());
    }
    loop {
        let chosen: Vec<Word> = idx.iter().map(|&i| words[i].clone()).collect();
        let c = canonical_form(&chosen);
        if c.iter().all(|w| w.max_symbol() < q) {
            reps.insert(c);
        }
        // next combination
        let mut k = t;
        loop {
            if k == 0 {
                return reps
                    .into_iter()
                    .map(|ws| WordCollection::new(q, ws))
                    .collect();
            }
            k -= 1;
            if idx[k] < words.len() - t + k {
                idx[k] += 1;
                for j in k + 1..t {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn orbit_size(ws: &[Word], q: u32) -> usize {
        let perms = permutations(q as usize);
        perms
            .iter()
            .map(|pi| {
                let pi: Vec<u32> = pi.iter().map(|&x| x as u32).collect();
                let mut img: Vec<Vec<u32>> = ws
                    .iter()
                    .map(|w| w.symbols().iter().map(|&s| pi[s as usize]).collect())
                    .collect();
                img.sort();
                img
            })
            .collect::<BTreeSet<_>>()
            .len()
    }

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn single_binary_words() {
        let c = enumerate_canonical_collections(2, 2, 1).unwrap();
        let text: Vec<String> = c.iter().map(|g| g.to_string()).collect();
        assert_eq!(text, vec!["00", "01"]);
    }

    #[test]
    fn orbit_counts_add_up() {
        for (q, p, t) in [(2, 2, 1), (3, 2, 2), (3, 3, 2), (4, 2, 2), (2, 3, 3)] {
            let reps = enumerate_canonical_collections(q, p, t).unwrap();
            let total: usize = reps.iter().map(|g| orbit_size(g.words(), q)).sum();
            assert_eq!(total, binomial((q as usize).pow(p as u32), t), "q={q} p={p} t={t}");
            for g in &reps {
                assert_eq!(canonical_form(g.words()), g.words().to_vec());
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let e = enumerate_canonical_collections(10, 8, 3).unwrap_err();
        assert_eq!(e.name(), "CapExceeded");
    }
}
