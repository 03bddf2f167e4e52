//! Escape rates into Markov holes, certified comparisons, Parry measures and
//! the threshold predicates.

mod parry;
mod thresholds;

pub use parry::{cylinder_measure, hole_measure, parry_data, ParryData};
pub use thresholds::{
    d_instance, d_threshold, extremal_words, find_small_escape_hole, gen_period_condition,
    ThresholdVariant,
};

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::roots::{f64_to_rational, RootIsolator};
use crate::spectral::{
    ln_rational, perron_isolator, perron_root_matrix, perron_root_poly, rational_string,
    AvoidanceAutomaton, Method, PerronResult, DEFAULT_ROOT_TOL,
};
use crate::words::{Word, WordCollection};

/// Largest tolerated gap between the two Perron engines, relative once the
/// root exceeds 1.
pub const ENGINE_TOL: f64 = 1e-9;
/// Bracket width below which overlapping brackets are reported as a tie.
pub const TIE_WIDTH: f64 = 1e-12;
/// Absolute bracket widths visited while separating two roots.
pub const REFINEMENT_SCHEDULE: [f64; 3] = [1e-4, 1e-8, 1e-13];

/// A hole `G` in the subshift avoiding `F` (the full shift when `F` is empty).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleSpec {
    q: u32,
    hole: Vec<Word>,
    base: Vec<Word>,
    formal: bool,
}

impl HoleSpec {
    /// Validates that the hole words are allowed in the base subshift and
    /// that base and hole together form a reduced collection.
    pub fn new(q: u32, hole: Vec<Word>, base: Vec<Word>) -> Result<Self> {
        WordCollection::new(q, hole.clone())?;
        WordCollection::new(q, base.clone())?;
        if !base.is_empty() {
            let a = AvoidanceAutomaton::new(&base, q)?;
            for w in &hole {
                if !a.accepts(w) {
                    return Err(Error::InvalidHole(format!(
                        "{w} contains a forbidden word of the base"
                    )));
                }
            }
        }
        let mut all = base.clone();
        all.extend(hole.iter().cloned());
        WordCollection::new(q, all).map_err(|e| match e {
            Error::NotReduced(a, b) => {
                Error::InvalidHole(format!("{a} is a subword of {b}; base and hole must be reduced"))
            }
            Error::DuplicateWord(a) => Error::InvalidHole(format!("{a} is in both base and hole")),
            e => e,
        })?;
        Ok(HoleSpec {
            q,
            hole,
            base,
            formal: false,
        })
    }

    pub fn full_shift(q: u32, hole: Vec<Word>) -> Result<Self> {
        Self::new(q, hole, Vec::new())
    }

    /// A hole whose words may use more than `q` symbols. Only the
    /// generating-function engine applies: correlations are computed on the
    /// words and `q` enters through `(z-q)Δ + S`.
    pub fn formal(q: u32, hole: Vec<Word>, base: Vec<Word>) -> Result<Self> {
        let mut all = base.clone();
        all.extend(hole.iter().cloned());
        WordCollection::formal(all)?;
        Ok(HoleSpec {
            q,
            hole,
            base,
            formal: true,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn hole(&self) -> &[Word] {
        &self.hole
    }

    pub fn base(&self) -> &[Word] {
        &self.base
    }

    pub fn is_formal(&self) -> bool {
        self.formal
    }

    /// `F ∪ G`, the forbidden set of the survivor subshift.
    pub fn survivor_words(&self) -> Vec<Word> {
        let mut all = self.base.clone();
        all.extend(self.hole.iter().cloned());
        all
    }

    pub fn permuted(&self, pi: &[u32]) -> Result<Self> {
        let map = |ws: &[Word]| {
            ws.iter()
                .map(|w| crate::words::permute_symbols(w, pi))
                .collect::<Result<Vec<_>>>()
        };
        if self.formal {
            Self::formal(self.q, map(&self.hole)?, map(&self.base)?)
        } else {
            Self::new(self.q, map(&self.hole)?, map(&self.base)?)
        }
    }
}

pub fn engines_agree(poly: f64, matrix: f64) -> bool {
    (poly - matrix).abs() <= ENGINE_TOL * matrix.abs().max(1.0)
}

/// Perron root of the subshift avoiding `words`, from the polynomial engine
/// cross-checked against the matrix engine.
pub fn perron_root(words: &[Word], q: u32, formal: bool) -> Result<PerronResult> {
    if formal {
        return perron_root_poly(words, q, DEFAULT_ROOT_TOL);
    }
    let matrix = perron_root_matrix(words, q, DEFAULT_ROOT_TOL);
    let poly = perron_root_poly(words, q, DEFAULT_ROOT_TOL);
    match (poly, matrix) {
        (Ok(mut p), Ok(m)) => {
            let gap = (p.value - m.value).abs();
            if engines_agree(p.value, m.value) {
                p.irreducible = m.irreducible;
                p.diagnostics.extend(m.diagnostics);
                Ok(p)
            } else {
                let mut m = m;
                m.diagnostics.push(format!(
                    "engines disagree by {gap:e}: polynomial {} matrix {}",
                    p.value, m.value
                ));
                Ok(m)
            }
        }
        (Err(e), Ok(mut m)) => {
            m.diagnostics.push(format!("polynomial engine failed: {e}"));
            Ok(m)
        }
        (_, Err(e)) => Err(e),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EscapeRateResult {
    pub q: u32,
    pub base: Vec<Word>,
    pub hole: Vec<Word>,
    #[serde(serialize_with = "crate::ser_round12")]
    pub rho: f64,
    #[serde(serialize_with = "crate::ser_round12")]
    pub rho_lo: f64,
    #[serde(serialize_with = "crate::ser_round12")]
    pub rho_hi: f64,
    pub lambda: PerronResult,
    pub theta: PerronResult,
    pub method: String,
    #[serde(serialize_with = "crate::ser_round12")]
    pub entropy_ambient: f64,
    #[serde(serialize_with = "crate::ser_round12")]
    pub entropy_survivor: f64,
}

impl EscapeRateResult {
    pub fn bracket_width(&self) -> f64 {
        self.rho_hi - self.rho_lo
    }
}

/// `ρ = ln θ - ln λ`, with `θ = q` on the full shift.
pub fn escape_rate(h: &HoleSpec) -> Result<EscapeRateResult> {
    let theta = if h.base.is_empty() {
        PerronResult::exact(BigRational::from_integer(BigInt::from(h.q)))
    } else {
        perron_root(&h.base, h.q, h.formal)?
    };
    let lambda = match perron_root(&h.survivor_words(), h.q, h.formal) {
        Err(Error::EmptySubshift) => return Err(Error::EmptySurvivorSet),
        Err(Error::NoRealRootFound(_)) if h.formal => return Err(Error::EmptySurvivorSet),
        r => r?,
    };
    let (ha, hs) = (theta.value.ln(), lambda.value.ln());
    let rho_lo = ln_rational(&theta.lo) - ln_rational(&lambda.hi);
    let rho_hi = ln_rational(&theta.hi) - ln_rational(&lambda.lo);
    let method = if h.formal {
        "formal".to_string()
    } else if theta.method == Method::Exact {
        lambda.method.to_string()
    } else {
        format!("{}/{}", theta.method, lambda.method)
    };
    Ok(EscapeRateResult {
        q: h.q,
        base: h.base.clone(),
        hole: h.hole.clone(),
        rho: ha - hs,
        rho_lo,
        rho_hi,
        lambda,
        theta,
        method,
        entropy_ambient: ha,
        entropy_survivor: hs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Ordering {
    Less,
    Greater,
    Tie,
}

impl fmt::Display for Ordering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Ordering::Less => "LESS",
            Ordering::Greater => "GREATER",
            Ordering::Tie => "TIE",
        })
    }
}

/// Outcome of comparing `ρ(G1)` with `ρ(G2)`.
///
/// `gap` is a certified lower bound on `|λ1 - λ2|` when `certified`; for a
/// tie it is the residual upper bound on that difference instead.
#[derive(Clone, Debug, Serialize)]
pub struct ComparisonResult {
    pub ordering: Ordering,
    pub certified: bool,
    #[serde(serialize_with = "ser_rational")]
    pub gap: BigRational,
    pub method: Method,
    pub lambda1: [String; 2],
    pub lambda2: [String; 2],
}

fn ser_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(x))
}

impl ComparisonResult {
    pub fn gap_f64(&self) -> f64 {
        crate::poly::roots::rational_to_f64(&self.gap)
    }
}

fn bracket_strings(lo: &BigRational, hi: &BigRational) -> [String; 2] {
    [rational_string(lo), rational_string(hi)]
}

fn separate(lo1: &BigRational, hi1: &BigRational, lo2: &BigRational, hi2: &BigRational) -> Option<(Ordering, BigRational)> {
    // larger λ means smaller ρ
    if lo1 > hi2 {
        Some((Ordering::Less, lo1 - hi2))
    } else if lo2 > hi1 {
        Some((Ordering::Greater, lo2 - hi1))
    } else {
        None
    }
}

fn compare_isolators(mut a: RootIsolator, mut b: RootIsolator) -> ComparisonResult {
    for w in REFINEMENT_SCHEDULE {
        let w = f64_to_rational(w);
        a.refine_to(&w);
        b.refine_to(&w);
        if let Some((ordering, gap)) = separate(a.lo(), a.hi(), b.lo(), b.hi()) {
            return ComparisonResult {
                ordering,
                certified: true,
                gap,
                method: Method::Polynomial,
                lambda1: bracket_strings(a.lo(), a.hi()),
                lambda2: bracket_strings(b.lo(), b.hi()),
            };
        }
    }
    let top = a.hi().max(b.hi()).clone();
    let bottom = a.lo().min(b.lo()).clone();
    ComparisonResult {
        ordering: Ordering::Tie,
        certified: false,
        gap: top - bottom,
        method: Method::Polynomial,
        lambda1: bracket_strings(a.lo(), a.hi()),
        lambda2: bracket_strings(b.lo(), b.hi()),
    }
}

fn checked_isolator(words: &[Word], q: u32, formal: bool) -> Option<RootIsolator> {
    let (iso, _) = perron_isolator(words, q).ok()?;
    if formal {
        return Some(iso);
    }
    let m = perron_root_matrix(words, q, DEFAULT_ROOT_TOL).ok()?;
    let mut probe = iso.clone();
    probe.refine_to(&f64_to_rational(DEFAULT_ROOT_TOL));
    engines_agree(probe.midpoint_f64(), m.value).then_some(iso)
}

/// Orders two escape rates on the same base by separating their `λ`
/// brackets, refining progressively. Overlap at width below [`TIE_WIDTH`] is
/// a tie, never a claim of equality.
pub fn compare_escape(h1: &HoleSpec, h2: &HoleSpec) -> Result<ComparisonResult> {
    if h1.q != h2.q {
        return Err(Error::InvalidArgument(format!(
            "holes live over different alphabets ({} and {})",
            h1.q, h2.q
        )));
    }
    if h1.base != h2.base {
        return Err(Error::InvalidArgument("holes have different base subshifts".into()));
    }
    let formal = h1.formal || h2.formal;
    let (w1, w2) = (h1.survivor_words(), h2.survivor_words());
    if let (Some(a), Some(b)) = (
        checked_isolator(&w1, h1.q, formal),
        checked_isolator(&w2, h2.q, formal),
    ) {
        return Ok(compare_isolators(a, b));
    }
    let l1 = escape_rate(h1)?.lambda;
    let l2 = escape_rate(h2)?.lambda;
    Ok(match separate(&l1.lo, &l1.hi, &l2.lo, &l2.hi) {
        Some((ordering, gap)) => ComparisonResult {
            ordering,
            certified: true,
            gap,
            method: l1.method,
            lambda1: bracket_strings(&l1.lo, &l1.hi),
            lambda2: bracket_strings(&l2.lo, &l2.hi),
        },
        None => ComparisonResult {
            ordering: Ordering::Tie,
            certified: false,
            gap: l1.hi.clone().max(l2.hi.clone()) - l1.lo.clone().min(l2.lo.clone()),
            method: l1.method,
            lambda1: bracket_strings(&l1.lo, &l1.hi),
            lambda2: bracket_strings(&l2.lo, &l2.hi),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{WordMode, WordParser};

    fn hole(text: &str, q: u32) -> HoleSpec {
        let ws = WordParser::new(WordMode::Abstract).parse_list(text, q).unwrap();
        HoleSpec::full_shift(q, ws).unwrap()
    }

    fn sub(base: &str, g: &str, q: u32) -> HoleSpec {
        let mut p = WordParser::new(WordMode::Abstract);
        let f = p.parse_list(base, q).unwrap();
        let g = p.parse_list(g, q).unwrap();
        HoleSpec::new(q, g, f).unwrap()
    }

    fn digits(text: &str, q: u32) -> HoleSpec {
        let ws = WordParser::new(WordMode::Digit).parse_list(text, q).unwrap();
        HoleSpec::full_shift(q, ws).unwrap()
    }

    #[test]
    fn escape_rate_examples() {
        let close = |h: &HoleSpec, v: f64| {
            let r = escape_rate(h).unwrap();
            assert!((r.rho - v).abs() < 5e-5, "{h:?}: {} vs {v}", r.rho);
            assert!(r.rho_lo <= r.rho && r.rho <= r.rho_hi);
        };
        close(&hole("aa,bb", 3), 0.2172);
        close(&hole("ab,cd", 4), 0.1583);
        close(&hole("aa,bb", 2), std::f64::consts::LN_2);
        close(&sub("aa", "bb", 3), 0.1237);
        let r = escape_rate(&hole("ab,ac", 3)).unwrap();
        assert!((r.rho - 1.5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn invalid_and_empty() {
        let mut p = WordParser::new(WordMode::Abstract);
        let f = p.parse_list("aa", 3).unwrap();
        let g = p.parse_list("baa", 3).unwrap();
        assert_eq!(HoleSpec::new(3, g, f).unwrap_err().name(), "InvalidHole");
        let h = digits("0,1", 2);
        assert_eq!(escape_rate(&h).unwrap_err(), Error::EmptySurvivorSet);
    }

    #[test]
    fn comparisons() {
        let c = compare_escape(&hole("aa,bb", 3), &hole("ab,ca", 3)).unwrap();
        assert_eq!(c.ordering, Ordering::Less);
        assert!(c.certified);
        let c = compare_escape(&hole("aa,bb", 3), &hole("aa,bb", 3)).unwrap();
        assert_eq!(c.ordering, Ordering::Tie);
        assert!(c.gap_f64() <= TIE_WIDTH);
        let c = compare_escape(&digits("10111011,01001000", 2), &digits("11100111,00011000", 2)).unwrap();
        assert_eq!(c.ordering, Ordering::Greater);
        assert!(c.certified);
    }

    #[test]
    fn permutation_invariance() {
        let h = sub("00", "12", 3);
        let a = escape_rate(&h).unwrap().rho;
        let b = escape_rate(&h.permuted(&[2, 0, 1]).unwrap()).unwrap().rho;
        assert!((a - b).abs() < 1e-12);
    }
}
