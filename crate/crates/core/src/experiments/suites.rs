use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::enumerate::{all_words, enumerate_canonical_collections};
use super::instance::{digits, Expect, Instance};
use super::report::VerificationReport;
use super::tables::{parse_cell, table_data};
use crate::error::Result;
use crate::escape::{d_instance, d_threshold, extremal_words, gen_period_condition, ThresholdVariant};
use crate::poly::r_function;
use crate::words::{correlation, has_zero_cross_correlations, minimal_period_hole, Word, WordCollection};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_word(r: &mut ChaCha8Rng, alphabet: u32, len: usize) -> Word {
    Word::new((0..len).map(|_| r.gen_range(0..alphabet)).collect()).expect("len >= 1")
}

/// A word of length `len` repeating a random block, so that short periods
/// are common.
fn random_periodic_word(r: &mut ChaCha8Rng, alphabet: u32, len: usize) -> Word {
    let period = r.gen_range(1..=len);
    let block: Vec<u32> = (0..period).map(|_| r.gen_range(0..alphabet)).collect();
    Word::new((0..len).map(|i| block[i % period]).collect()).expect("len >= 1")
}

/// Draws until the words form a reduced collection satisfying `accept`.
fn random_collection(
    r: &mut ChaCha8Rng,
    q: u32,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Word,
    t: usize,
    accept: impl Fn(&WordCollection) -> bool,
) -> WordCollection {
    loop {
        let words: Vec<Word> = (0..t).map(|_| draw(r)).collect();
        if let Ok(g) = WordCollection::new(q, words) {
            if accept(&g) {
                return g;
            }
        }
    }
}

fn two(x: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

/// Exhaustive certification of the four-class ordering for two words of
/// length 2, for every `q` in `2..=q_max`.
pub fn verify_p2_theorem(q_max: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "p2-theorem",
        "two words of length 2: r(2) order implies escape-rate order",
        &format!("all canonical two-word length-2 collections, q = 2..={q_max}"),
    );
    let mut instances = Vec::new();
    let mut class_counts = Vec::new();
    for q in 2..=q_max.max(2) {
        let colls = enumerate_canonical_collections(q, 2, 2)?;
        let mut classes: BTreeMap<String, Vec<&WordCollection>> = BTreeMap::new();
        let mut at2 = Vec::new();
        for g in &colls {
            let rf = r_function(g.words())?;
            classes.entry(rf.r.reduced().to_string()).or_default().push(g);
            at2.push(rf.r.eval(&two(2))?);
            instances.push(Instance::RClass {
                q,
                hole: digits(g.words()),
            });
        }
        for i in 0..colls.len() {
            for j in 0..colls.len() {
                if at2[i] < at2[j] {
                    instances.push(Instance::Compare {
                        q,
                        base: vec![],
                        hole1: digits(colls[i].words()),
                        hole2: digits(colls[j].words()),
                        expect: Expect::Less,
                        formal: false,
                    });
                }
            }
        }
        class_counts.push((q, classes.len(), colls.len()));
        let expected = if q == 2 { 1 } else { 4 };
        if classes.len() != expected {
            report.fail(
                Instance::RClass {
                    q,
                    hole: digits(colls[0].words()),
                },
                format!("q={q}: {} r-classes, expected {expected}", classes.len()),
            );
        }
    }
    for (q, k, n) in class_counts {
        report = report.note(format!("q={q}: {n} collections in {k} r-classes"));
    }
    Ok(report.run(instances, false))
}

/// Parameters of the r-order suite. `q = None` runs each pair at
/// `d_instance(G1, G2) + 1`; `d = None` uses the two-word or generic
/// threshold (or `d_instance` when `q` is per pair).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ROrderConfig {
    pub p: usize,
    pub t: usize,
    pub q: Option<u32>,
    pub d: Option<String>,
    pub samples: usize,
    pub seed: u64,
    /// Symbols are drawn from `0..sub_alphabet` (default `p + 1`) so that
    /// correlations are not almost always trivial.
    pub sub_alphabet: Option<u32>,
}

pub fn verify_r_order(cfg: &ROrderConfig) -> Result<VerificationReport> {
    let ROrderConfig { p, t, q, .. } = *cfg;
    let k = cfg.sub_alphabet.unwrap_or(p as u32 + 1);
    let fixed_d: Option<BigInt> = match (&cfg.d, q) {
        (Some(d), _) => Some(d.parse().map_err(|_| {
            crate::Error::InvalidArgument(format!("bad threshold {d}"))
        })?),
        (None, Some(_)) => Some(d_threshold(
            t,
            p,
            if t == 2 {
                ThresholdVariant::TwoWords
            } else {
                ThresholdVariant::Generic
            },
        )?),
        (None, None) => None,
    };
    let below = matches!((&fixed_d, q), (Some(d), Some(q)) if BigInt::from(q) <= *d);
    let mut report = VerificationReport::new(
        "r-order",
        "r-order at the threshold implies escape-rate order, with the cross difference sign-stable",
        &format!(
            "{} sampled pairs of {t} words of length {p} over symbols 0..{k}, q = {}",
            cfg.samples,
            q.map_or("d_instance + 1".to_string(), |q| q.to_string())
        ),
    )
    .with_seed(cfg.seed)
    .exploratory(below);
    let mut r = rng(cfg.seed);
    let mut instances = Vec::new();
    let mut skipped = 0;
    while instances.len() < cfg.samples {
        let alpha = q.map_or(k, |q| q.min(k));
        let g1 = random_collection(&mut r, alpha, |r| random_word(r, alpha, p), t, |_| true);
        let g2 = random_collection(&mut r, alpha, |r| random_word(r, alpha, p), t, |g| g != &g1);
        let (qq, d) = match (q, &fixed_d) {
            (Some(q), Some(d)) => (q, d.clone()),
            _ => {
                let d = d_instance(&g1, &g2)?;
                let qq: u32 = match u32::try_from(&d + 1) {
                    Ok(v) => v,
                    Err(_) => {
                        skipped += 1;
                        continue;
                    }
                };
                (qq, cfg.d.as_ref().map_or(d, |s| s.parse().unwrap_or_default()))
            }
        };
        instances.push(Instance::ROrder {
            q: qq,
            d: d.to_string(),
            g1: digits(g1.words()),
            g2: digits(g2.words()),
        });
    }
    if skipped > 0 {
        report = report.note(format!("{skipped} pairs skipped: d_instance beyond u32"));
    }
    if let Some(d) = &fixed_d {
        report = report.note(format!("D = {d}"));
    }
    Ok(report.run(instances, false))
}

/// `p = 2 & q >= 2` or `p >= 3 & q >= 5` for two words; the gen-period
/// inequality beyond.
pub fn min_period_hypothesis(p: usize, t: usize, q: u32) -> bool {
    match t {
        0 | 1 => true,
        2 => (p == 2 && q >= 2) || (p >= 3 && q >= 5),
        _ => gen_period_condition(q as u64, t as u32),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuiteMode {
    Exhaustive,
    Sampled,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinPeriodConfig {
    pub p: usize,
    pub t: usize,
    pub q: u32,
    pub mode: SuiteMode,
    #[serde(default)]
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
}

fn period_pair(q: u32, a: &WordCollection, b: &WordCollection) -> Option<Instance> {
    let (ta, tb) = (minimal_period_hole(a)?, minimal_period_hole(b)?);
    let (g1, g2) = match ta.cmp(&tb) {
        std::cmp::Ordering::Less => (a, b),
        std::cmp::Ordering::Greater => (b, a),
        std::cmp::Ordering::Equal => return None,
    };
    Some(Instance::Compare {
        q,
        base: vec![],
        hole1: digits(g1.words()),
        hole2: digits(g2.words()),
        expect: Expect::Less,
        formal: false,
    })
}

pub fn verify_min_period(cfg: &MinPeriodConfig) -> Result<VerificationReport> {
    let MinPeriodConfig { p, t, q, mode, .. } = *cfg;
    let holds = min_period_hypothesis(p, t, q);
    let universe = match mode {
        SuiteMode::Exhaustive => format!(
            "all pairs of canonical {t}-word length-{p} collections over {q} symbols with zero cross-correlations and distinct minimal periods"
        ),
        SuiteMode::Sampled => format!(
            "{} sampled pairs of {t}-word length-{p} collections over {q} symbols with zero cross-correlations",
            cfg.samples
        ),
    };
    let mut report = VerificationReport::new(
        "min-period",
        "smaller minimal period of the hole implies smaller escape rate",
        &universe,
    )
    .exploratory(!holds);
    if !holds {
        report = report.note(format!("q={q} is outside the proved range; violations are reported only"));
    }
    let mut instances = Vec::new();
    match mode {
        SuiteMode::Exhaustive => {
            let colls: Vec<WordCollection> = enumerate_canonical_collections(q, p, t)?
                .into_iter()
                .filter(has_zero_cross_correlations)
                .collect();
            for i in 0..colls.len() {
                for j in i + 1..colls.len() {
                    if let Some(inst) = period_pair(q, &colls[i], &colls[j]) {
                        instances.push(inst);
                    }
                }
            }
            report = report.note(format!("{} admissible collections", colls.len()));
        }
        SuiteMode::Sampled => {
            report = report.with_seed(cfg.seed);
            let mut r = rng(cfg.seed);
            while instances.len() < cfg.samples {
                let draw = |r: &mut ChaCha8Rng| random_periodic_word(r, q, p);
                let a = random_collection(&mut r, q, draw, t, has_zero_cross_correlations);
                let b = random_collection(&mut r, q, draw, t, has_zero_cross_correlations);
                if let Some(inst) = period_pair(q, &a, &b) {
                    instances.push(inst);
                }
            }
        }
    }
    Ok(report.run(instances, false))
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn letters(text: &str, q: u32) -> Vec<String> {
    let (_, g) = parse_cell(None, text, q).expect("fixed instance parses");
    digits(&g)
}

fn compare(q: u32, a: Vec<String>, b: Vec<String>, expect: Expect) -> Instance {
    Instance::Compare {
        q,
        base: vec![],
        hole1: a,
        hole2: b,
        expect,
        formal: false,
    }
}

fn permute(ws: &[String], q: u32) -> Vec<String> {
    // reverse the alphabet: s -> q-1-s
    let pi: Vec<u32> = (0..q).rev().collect();
    let mut p = crate::words::WordParser::new(crate::words::WordMode::Digit);
    ws.iter()
        .map(|w| {
            let w = p.parse(w, q).expect("digit word");
            crate::words::permute_symbols(&w, &pi).expect("permutation").to_string()
        })
        .collect()
}

/// Every counterexample, each at the alphabet size where it is
/// stated, plus reruns under a symbol permutation.
pub fn run_counterexamples() -> Result<VerificationReport> {
    let report = VerificationReport::new(
        "counterexamples",
        "stated inequalities and reversals reproduced with certified comparisons",
        "fixed instances",
    );
    let g1 = strs(&["012", "123"]);
    let g2 = strs(&["102", "333"]);
    let h1 = letters("abc,bcd", 4);
    let h2 = letters("abc,ddd", 4);
    let instances = vec![
        // unions {012}∪{123} against {102}∪{333}
        compare(4, g1.clone(), g2.clone(), Expect::Less),
        compare(4, permute(&g1, 4), permute(&g2, 4), Expect::Less),
        // minimal periods 3 > 1 yet smaller escape rate
        compare(4, h1.clone(), h2.clone(), Expect::Less),
        compare(4, permute(&h1, 4), permute(&h2, 4), Expect::Less),
        // periods 4 < 5 at q = 2, outside the proved range
        compare(2, strs(&["10111011", "01001000"]), strs(&["11100111", "00011000"]), Expect::Greater),
        // equal minimal periods, different escape rates
        compare(5, letters("aaaa,bbbb", 5), letters("aaaa,bcbc", 5), Expect::Differ),
        // Γ9 against Γ10 of the length-3 table: reversal between q = 3 and 4
        compare(3, letters("abc,bbb", 3), letters("aba,aca", 3), Expect::Greater),
        compare(4, letters("abc,ddd", 4), letters("aba,aca", 4), Expect::Less),
        compare(5, letters("abc,ddd", 5), letters("aba,aca", 5), Expect::Less),
        Instance::PerronValue {
            q: 3,
            forbidden: strs(&["02", "10", "11", "21", "22"]),
            expected: 1.466,
            tol: 5e-4,
        },
        // equal cylinder measure, different escape rate
        Instance::MeasureVsRate {
            q: 3,
            base: strs(&["00"]),
            w1: "11".into(),
            w2: "12".into(),
            measure_equal: true,
            rate_equal: false,
        },
        // different cylinder measure, equal escape rate
        Instance::MeasureVsRate {
            q: 3,
            base: strs(&["00"]),
            w1: "11".into(),
            w2: "01".into(),
            measure_equal: false,
            rate_equal: true,
        },
    ];
    Ok(report.run(instances, true))
}

/// Orderings read off the tables: the three equal entries of the
/// length-3 table at `q = 2`, and the reversal in the length-5 table.
pub fn verify_table_orderings() -> Result<VerificationReport> {
    let report = VerificationReport::new(
        "table-orderings",
        "equal table entries are ties at width 1e-12; printed reversals are certified",
        "fixed instances",
    );
    let g = |t: &str, q| letters(t, q);
    let instances = vec![
        compare(2, g("aaa,bbb", 2), g("aaa,aba", 2), Expect::Tie),
        compare(2, g("aaa,aba", 2), g("abb,bba", 2), Expect::Tie),
        compare(2, g("aaa,bbb", 2), g("abb,bba", 2), Expect::Tie),
        compare(2, g("bbabb,bbbab,bbbba", 2), g("abbbb,bbbba,bbabb", 2), Expect::Greater),
        compare(3, g("bbabb,bbbab,bbbba", 3), g("abbbb,bbbba,bbabb", 3), Expect::Less),
    ];
    Ok(report.run(instances, true))
}

/// `q - q^(2-p) < λ < q` on random two-word holes with `p >= 3`, `q >= 5`.
pub fn verify_bracket(samples: usize, seed: u64) -> Result<VerificationReport> {
    let report = VerificationReport::new(
        "lambda-bracket",
        "Perron root of the survivor set lies in (q - q^(2-p), q)",
        &format!("{samples} sampled two-word holes, p in 3..=5, q in 5..=10"),
    )
    .with_seed(seed);
    let mut r = rng(seed);
    let instances = (0..samples)
        .map(|_| {
            let q = r.gen_range(5..=10);
            let p = r.gen_range(3..=5);
            let k = r.gen_range(2..=q);
            let g = random_collection(&mut r, q, |r| random_periodic_word(r, k, p), 2, |_| true);
            Instance::Bracket {
                q,
                hole: digits(g.words()),
            }
        })
        .collect();
    Ok(report.run(instances, false))
}

/// For every canonical `w` of length `p` and every `u` with zero
/// cross-correlation against it, `ρ(ā) <= ρ(u) <= ρ(ab̄)` on `Σ_{w}`.
pub fn verify_extremal(p: usize, q: u32) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(
        "extremal-words",
        "constant word minimizes and a b^(p-1) maximizes the escape rate among uncorrelated holes",
        &format!("canonical w of length {p} over {q} symbols, all u with zero cross-correlation"),
    );
    let mut instances = Vec::new();
    for f in enumerate_canonical_collections(q, p, 1)? {
        let w = f.words()[0].clone();
        if extremal_words(&w, q).is_err() {
            report = report.note(format!("w={w}: fewer than two symbols outside its ends"));
            continue;
        }
        for u in all_words(q, p) {
            if u != w && correlation(&w, &u).is_zero() && correlation(&u, &w).is_zero() {
                instances.push(Instance::Extremal {
                    q,
                    w: w.to_string(),
                    u: u.to_string(),
                });
            }
        }
    }
    Ok(report.run(instances, false))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OracleConfig {
    pub samples: usize,
    pub seed: u64,
    pub n_max: usize,
    pub brute_cap: u64,
    /// Also cover every representable table collection.
    pub tables: bool,
    /// Brute-force ceiling for the table collections, whose alphabets go up
    /// to 10 symbols.
    #[serde(default = "default_table_cap")]
    pub table_brute_cap: u64,
}

fn default_table_cap() -> u64 {
    1 << 20
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            samples: 200,
            seed: 1,
            n_max: 12,
            brute_cap: 1 << 24,
            tables: true,
            table_brute_cap: default_table_cap(),
        }
    }
}

/// Survivor sets `F ∪ G` of every table cell that is representable.
pub fn table_survivor_sets() -> Result<Vec<(u32, Vec<Word>)>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for t in &table_data().tables {
        for row in &t.rows {
            let base = row.base.as_deref().or(t.base.as_deref());
            for alt in &row.collections {
                for &q in &t.q {
                    let Ok((f, g)) = parse_cell(base, alt, q) else { continue };
                    let mut all = f;
                    all.extend(g);
                    if seen.insert((q, digits(&all))) {
                        out.push((q, all));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Random reduced collections with `q <= 4`, word lengths up to 4 and at
/// most three words.
pub fn random_oracle_sets(samples: usize, seed: u64) -> Vec<(u32, Vec<Word>)> {
    let mut r = rng(seed);
    (0..samples)
        .map(|_| {
            let q = r.gen_range(2..=4);
            let t = r.gen_range(1..=3);
            let g = random_collection(
                &mut r,
                q,
                |r| {
                    let len = r.gen_range(2..=4);
                    random_periodic_word(r, q, len)
                },
                t,
                |_| true,
            );
            (q, g.words().to_vec())
        })
        .collect()
}

/// Series, automaton and brute-force counts, plus agreement of the two
/// Perron engines, on random and table instances.
pub fn verify_oracles(cfg: &OracleConfig) -> Result<VerificationReport> {
    let mut sets = random_oracle_sets(cfg.samples, cfg.seed);
    let n_random = sets.len();
    if cfg.tables {
        sets.extend(table_survivor_sets()?);
    }
    let report = VerificationReport::new(
        "oracle-equivalence",
        "generating-function series, automaton counts and brute force agree; Perron engines agree",
        &format!(
            "{n_random} sampled collections (q <= 4, length <= 4, t <= 3){}; n <= {}, brute force while q^n <= {} ({} for table collections)",
            if cfg.tables { " and every table collection" } else { "" },
            cfg.n_max,
            cfg.brute_cap,
            cfg.table_brute_cap
        ),
    )
    .with_seed(cfg.seed);
    let mut instances = Vec::new();
    for (k, (q, ws)) in sets.iter().enumerate() {
        instances.push(Instance::Oracle {
            q: *q,
            forbidden: digits(ws),
            n_max: cfg.n_max,
            brute_cap: if k < n_random { cfg.brute_cap } else { cfg.table_brute_cap },
        });
        instances.push(Instance::Engines {
            q: *q,
            forbidden: digits(ws),
        });
    }
    Ok(report.run(instances, false))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypothesis_ranges() {
        assert!(min_period_hypothesis(2, 2, 2));
        assert!(!min_period_hypothesis(3, 2, 4));
        assert!(min_period_hypothesis(3, 2, 5));
        assert!(!min_period_hypothesis(3, 3, 5));
        assert!(min_period_hypothesis(3, 3, 13));
    }

    #[test]
    fn sampling_is_deterministic() {
        assert_eq!(random_oracle_sets(20, 7), random_oracle_sets(20, 7));
        assert_ne!(random_oracle_sets(20, 7), random_oracle_sets(20, 8));
    }

    #[test]
    fn p2_small() {
        let r = verify_p2_theorem(4).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }

    #[test]
    fn counterexamples_hold() {
        let r = run_counterexamples().unwrap();
        assert!(r.passed(), "{:#?}", r.failures);
    }
}
