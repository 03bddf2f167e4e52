//! Words over a finite alphabet, correlation polynomials and minimal periods.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poly::IntPoly;

const DIGITS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyz";

/// A nonempty finite word; symbols are alphabet indices.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<u32>,
}

impl Word {
    pub fn new(symbols: Vec<u32>) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::EmptyWord);
        }
        Ok(Word { symbols })
    }

    /// Checks every symbol against the alphabet size.
    pub fn over(symbols: Vec<u32>, q: u32) -> Result<Self> {
        let w = Self::new(symbols)?;
        w.check_alphabet(q)?;
        Ok(w)
    }

    pub fn check_alphabet(&self, q: u32) -> Result<()> {
        let needed = self.max_symbol() as u64 + 1;
        if needed > q as u64 {
            return Err(Error::InsufficientAlphabet { needed, q });
        }
        Ok(())
    }

    /// `n` copies of one symbol.
    pub fn constant(symbol: u32, n: usize) -> Self {
        Word {
            symbols: vec![symbol; n.max(1)],
        }
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn max_symbol(&self) -> u32 {
        *self.symbols.iter().max().unwrap()
    }

    pub fn first(&self) -> u32 {
        self.symbols[0]
    }

    pub fn last(&self) -> u32 {
        *self.symbols.last().unwrap()
    }

    pub fn contains_factor(&self, other: &Word) -> bool {
        other.len() <= self.len()
            && self
                .symbols
                .windows(other.len())
                .any(|w| w == other.symbols.as_slice())
    }

    /// Letters `a`, `b`, `c`, … for symbols 0, 1, 2, …
    pub fn to_letters(&self) -> String {
        self.symbols
            .iter()
            .map(|&s| match s {
                0..=25 => char::from(b'a' + s as u8).to_string(),
                _ => format!("[{s}]"),
            })
            .collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            match DIGITS.get(s as usize) {
                Some(&c) => write!(f, "{}", c as char)?,
                None => write!(f, "[{s}]")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// A reduced collection of distinct words over an alphabet of size `q`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WordCollection {
    q: u32,
    words: Vec<Word>,
}

impl WordCollection {
    pub fn new(q: u32, words: Vec<Word>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidAlphabet(q));
        }
        for w in &words {
            w.check_alphabet(q)?;
        }
        check_reduced(&words)?;
        Ok(WordCollection { q, words })
    }

    /// A collection whose alphabet is just large enough for its symbols.
    /// Used where only the correlation structure matters.
    pub fn formal(words: Vec<Word>) -> Result<Self> {
        let q = words.iter().map(|w| w.max_symbol() + 1).max().unwrap_or(2).max(2);
        Self::new(q, words)
    }

    pub fn empty(q: u32) -> Result<Self> {
        Self::new(q, Vec::new())
    }

    pub fn alphabet_size(&self) -> u32 {
        self.q
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.words.iter().map(Word::len).max().unwrap_or(0)
    }

    /// Same words viewed over a different alphabet size.
    pub fn with_alphabet(&self, q: u32) -> Result<Self> {
        Self::new(q, self.words.clone())
    }

    /// Union with another collection, revalidated as a reduced collection.
    pub fn union(&self, other: &WordCollection) -> Result<Self> {
        let mut words = self.words.clone();
        words.extend(other.words.iter().cloned());
        Self::new(self.q.max(other.q), words)
    }

    pub fn permuted(&self, pi: &[u32]) -> Result<Self> {
        let words = self
            .words
            .iter()
            .map(|w| permute_symbols(w, pi))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.q, words)
    }

    pub fn to_letters(&self) -> String {
        self.words
            .iter()
            .map(Word::to_letters)
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn check_reduced(words: &[Word]) -> Result<()> {
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if i == j {
                continue;
            }
            if a == b {
                return Err(Error::DuplicateWord(a.to_string()));
            }
            if b.contains_factor(a) {
                return Err(Error::NotReduced(a.to_string(), b.to_string()));
            }
        }
    }
    Ok(())
}

impl fmt::Display for WordCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.words.iter().map(Word::to_string).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for WordCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordCollection(q={}, {{{self}}})", self.q)
    }
}

impl Serialize for WordCollection {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(&self.words)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordMode {
    /// Characters `0-9a-z` stand for symbols 0..36.
    Digit,
    /// Letters are numbered by first occurrence.
    Abstract,
}

/// Parser carrying the first-occurrence letter map across several words.
#[derive(Clone, Debug)]
pub struct WordParser {
    mode: WordMode,
    letters: HashMap<char, u32>,
}

impl WordParser {
    pub fn new(mode: WordMode) -> Self {
        WordParser {
            mode,
            letters: HashMap::new(),
        }
    }

    pub fn mode(&self) -> WordMode {
        self.mode
    }

    /// Symbols assigned so far in abstract mode.
    pub fn symbols_used(&self) -> u32 {
        self.letters.len() as u32
    }

    pub fn parse_unchecked(&mut self, text: &str) -> Result<Word> {
        let text = text.trim();
        let mut symbols = Vec::with_capacity(text.len());
        for c in text.chars() {
            let s = match self.mode {
                WordMode::Digit => c
                    .to_digit(36)
                    .filter(|_| !c.is_ascii_uppercase())
                    .ok_or(Error::BadCharacter(c))?,
                WordMode::Abstract => {
                    if !c.is_alphanumeric() {
                        return Err(Error::BadCharacter(c));
                    }
                    let next = self.letters.len() as u32;
                    *self.letters.entry(c).or_insert(next)
                }
            };
            symbols.push(s);
        }
        Word::new(symbols)
    }

    pub fn parse(&mut self, text: &str, q: u32) -> Result<Word> {
        let w = self.parse_unchecked(text)?;
        w.check_alphabet(q)?;
        Ok(w)
    }

    /// Parses a comma-separated list; an empty string is the empty list.
    pub fn parse_list(&mut self, text: &str, q: u32) -> Result<Vec<Word>> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|s| self.parse(s, q))
            .collect()
    }

    pub fn parse_collection(&mut self, text: &str, q: u32) -> Result<WordCollection> {
        let words = self.parse_list(text, q)?;
        WordCollection::new(q, words)
    }
}

pub fn parse_word(text: &str, q: u32, mode: WordMode) -> Result<Word> {
    WordParser::new(mode).parse(text, q)
}

/// Correlation polynomial `(u,w)_z`: the coefficient of `z^(|u|-l)` is 1 when
/// the suffix of `u` starting at position `l` (1-based) agrees with `w` on
/// their common length.
pub fn correlation(u: &Word, w: &Word) -> IntPoly {
    let (a, b) = (u.symbols(), w.symbols());
    let p1 = a.len();
    let mut coeffs = vec![BigInt::from(0); p1];
    for l in 1..=p1 {
        let k = (p1 - l + 1).min(b.len());
        if a[l - 1..l - 1 + k] == b[..k] {
            coeffs[p1 - l] = BigInt::one();
        }
    }
    IntPoly::new(coeffs)
}

/// Smallest shift `l >= 1` under which `u` overlaps itself, or `|u|`.
pub fn minimal_period_word(u: &Word) -> usize {
    let s = u.symbols();
    let p = s.len();
    (1..p)
        .find(|&l| (0..p - l).all(|i| s[i + l] == s[i]))
        .unwrap_or(p)
}

/// The same period read off the autocorrelation polynomial: its second
/// highest exponent is `p - 1 - tau`.
pub fn minimal_period_from_autocorrelation(u: &Word) -> usize {
    let c = correlation(u, u);
    let p = u.len();
    let second = c.terms().nth(1).map(|(e, _)| e);
    second.map_or(p, |e| p - 1 - e)
}

/// `min` of the word periods; `None` for the empty collection.
pub fn minimal_period_hole(g: &WordCollection) -> Option<usize> {
    g.words().iter().map(minimal_period_word).min()
}

pub fn has_zero_cross_correlations(g: &WordCollection) -> bool {
    let ws = g.words();
    ws.iter().enumerate().all(|(i, u)| {
        ws.iter()
            .enumerate()
            .all(|(j, w)| i == j || correlation(u, w).is_zero())
    })
}

/// Applies the symbol map `pi` (a permutation of `0..pi.len()`).
pub fn permute_symbols(w: &Word, pi: &[u32]) -> Result<Word> {
    let mut seen = vec![false; pi.len()];
    for &x in pi {
        match seen.get_mut(x as usize) {
            Some(s) if !*s => *s = true,
            _ => return Err(Error::InvalidArgument("not a permutation".into())),
        }
    }
    let symbols = w
        .symbols()
        .iter()
        .map(|&s| {
            pi.get(s as usize).copied().ok_or_else(|| {
                Error::InvalidArgument(format!("symbol {s} outside the permutation domain"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Word::new(symbols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abs_words(text: &str) -> Vec<Word> {
        WordParser::new(WordMode::Abstract).parse_list(text, 36).unwrap()
    }

    fn d(text: &str) -> Word {
        parse_word(text, 10, WordMode::Digit).unwrap()
    }

    #[test]
    fn parsing_modes() {
        assert_eq!(parse_word("ab", 2, WordMode::Abstract).unwrap().symbols(), &[0, 1]);
        assert_eq!(parse_word("102", 3, WordMode::Digit).unwrap().symbols(), &[1, 0, 2]);
        // "bcb" after "aaa" in the same collection needs a third symbol
        let mut parser = WordParser::new(WordMode::Abstract);
        parser.parse("aaa", 2).unwrap();
        assert_eq!(parser.parse("bcb", 2), Err(Error::InsufficientAlphabet { needed: 3, q: 2 }));
        assert!(matches!(parse_word("1-2", 3, WordMode::Digit), Err(Error::BadCharacter('-'))));
        assert!(matches!(parse_word("", 3, WordMode::Digit), Err(Error::EmptyWord)));
        // first occurrence is shared across the collection
        let ws = abs_words("ab,ca");
        assert_eq!(ws[1].symbols(), &[2, 0]);
    }

    #[test]
    fn correlation_examples() {
        let ws = abs_words("aa,abc,def,aba,aca");
        assert_eq!(correlation(&ws[0], &ws[0]).to_string(), "z+1");
        assert!(correlation(&ws[1], &ws[2]).is_zero());
        assert_eq!(correlation(&ws[3], &ws[4]).to_string(), "1");
        let aaa = Word::constant(0, 3);
        assert_eq!(correlation(&aaa, &aaa).to_string(), "z^2+z+1");
    }

    #[test]
    fn unequal_lengths() {
        // suffixes of 0101 against prefixes of 011: shift 2 leaves "01" | "01"
        assert_eq!(correlation(&d("0101"), &d("011")).to_string(), "z");
        assert_eq!(correlation(&d("011"), &d("0101")).to_string(), "0");
        assert_eq!(correlation(&d("12"), &d("2101")).to_string(), "1");
    }

    #[test]
    fn periods() {
        for (w, tau) in [("000", 1), ("010", 2), ("10000", 5), ("0110", 3), ("01010", 2)] {
            assert_eq!(minimal_period_word(&d(w)), tau, "{w}");
            assert_eq!(minimal_period_from_autocorrelation(&d(w)), tau, "{w}");
        }
        let g = WordCollection::new(2, vec![d("01000"), d("10000")]).unwrap();
        assert_eq!(minimal_period_hole(&g), Some(4));
        let g = WordCollection::formal(abs_words("abc,bcd")).unwrap();
        assert_eq!(minimal_period_hole(&g), Some(3));
    }

    #[test]
    fn zero_cross_correlations() {
        let g = WordCollection::formal(abs_words("aaaa,bbbb")).unwrap();
        assert!(has_zero_cross_correlations(&g));
        let g = WordCollection::formal(abs_words("abc,bcd")).unwrap();
        assert!(!has_zero_cross_correlations(&g));
        let g = WordCollection::formal(abs_words("abc")).unwrap();
        assert!(has_zero_cross_correlations(&g));
    }

    #[test]
    fn collection_validation() {
        assert!(matches!(
            WordCollection::new(2, vec![d("01"), d("01")]),
            Err(Error::DuplicateWord(_))
        ));
        assert!(matches!(
            WordCollection::new(2, vec![d("01"), d("1011")]),
            Err(Error::NotReduced(..))
        ));
        assert!(matches!(WordCollection::new(1, vec![]), Err(Error::InvalidAlphabet(1))));
    }

    #[test]
    fn permutation() {
        assert_eq!(permute_symbols(&d("01"), &[1, 0]).unwrap(), d("10"));
        assert_eq!(permute_symbols(&d("0121"), &[0, 1, 2]).unwrap(), d("0121"));
        assert!(permute_symbols(&d("01"), &[1, 1]).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(d("0120").to_string(), "0120");
        assert_eq!(d("0120").to_letters(), "abca");
        let g = WordCollection::new(3, vec![d("00"), d("12")]).unwrap();
        assert_eq!(g.to_string(), "00,12");
    }
}
