use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::words::Word;

/// Default ceiling on `q^n` for explicit enumeration.
pub const DEFAULT_BRUTE_CAP: u64 = 10_000_000;

/// Environment variable overriding [`DEFAULT_BRUTE_CAP`].
pub const BRUTE_CAP_ENV: &str = "SFT_ESCAPE_BRUTE_CAP";

pub fn brute_cap() -> u64 {
    std::env::var(BRUTE_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_BRUTE_CAP)
}

/// `q^n`, saturating.
pub fn space_size(q: u32, n: usize) -> u64 {
    (q as u64).checked_pow(n as u32).unwrap_or(u64::MAX)
}

/// Counts `f(0..=n_max)` by enumerating words symbol by symbol and scanning
/// for forbidden factors. A prefix containing a forbidden word is dropped
/// together with all its extensions.
pub fn brute_force_counts(forbidden: &[Word], q: u32, n_max: usize, cap: u64) -> Result<Vec<BigInt>> {
    let needed = space_size(q, n_max);
    if needed > cap {
        return Err(Error::CapExceeded {
            what: format!("enumerating {q}^{n_max} words"),
            needed: needed.to_string(),
            cap,
        });
    }
    for w in forbidden {
        w.check_alphabet(q)?;
    }
    let words: Vec<Vec<u32>> = forbidden.iter().map(|w| w.symbols().to_vec()).collect();
    let mut counts = vec![0u64; n_max + 1];
    counts[0] = 1;
    let mut buf = vec![0u32; n_max];
    dfs(&words, q, &mut buf, 0, &mut counts);
    Ok(counts.into_iter().map(BigInt::from).collect())
}

fn dfs(words: &[Vec<u32>], q: u32, buf: &mut [u32], depth: usize, counts: &mut [u64]) {
    if depth == buf.len() {
        return;
    }
    for a in 0..q {
        buf[depth] = a;
        let end = depth + 1;
        let bad = words
            .iter()
            .any(|w| w.len() <= end && buf[end - w.len()..end] == w[..]);
        if bad {
            continue;
        }
        counts[end] += 1;
        dfs(words, q, buf, end, counts);
    }
}

pub fn brute_force_count(forbidden: &[Word], q: u32, n: usize) -> Result<BigInt> {
    Ok(brute_force_counts(forbidden, q, n, brute_cap())?.pop().unwrap())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{WordMode, WordParser};

    fn ws(text: &str, q: u32) -> Vec<Word> {
        WordParser::new(WordMode::Digit).parse_list(text, q).unwrap()
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(brute_force_count(&ws("11", 2), 2, 5).unwrap(), BigInt::from(13));
        assert_eq!(brute_force_count(&ws("00,11", 3), 3, 2).unwrap(), BigInt::from(7));
        assert_eq!(brute_force_count(&[], 2, 3).unwrap(), BigInt::from(8));
        assert_eq!(brute_force_count(&[], 2, 0).unwrap(), BigInt::from(1));
    }

    #[test]
    fn cap_is_enforced() {
        let e = brute_force_counts(&[], 10, 8, 1000).unwrap_err();
        assert_eq!(e.name(), "CapExceeded");
    }
}
