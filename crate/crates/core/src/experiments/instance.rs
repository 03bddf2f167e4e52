use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::escape::{
    compare_escape, extremal_words, parry_data, perron_root, HoleSpec, Ordering, ENGINE_TOL,
    TIE_WIDTH,
};
use crate::poly::roots::{complex_roots, f64_to_rational, SturmChain};
use crate::poly::{generating_function, lagrange_bound, r_function, series_coefficients, IntPoly};
use crate::spectral::{
    brute_force_counts, perron_isolator, perron_root_matrix, perron_root_poly, space_size,
    AvoidanceAutomaton, DEFAULT_ROOT_TOL,
};
use crate::words::{correlation, Word, WordMode, WordParser};

/// What a comparison instance must produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expect {
    Less,
    Greater,
    /// Certified in either direction.
    Differ,
    /// Overlapping brackets at width below the tie threshold.
    Tie,
}

/// One self-contained check. Words are digit strings over `0-9a-z`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Instance {
    Compare {
        q: u32,
        #[serde(default)]
        base: Vec<String>,
        hole1: Vec<String>,
        hole2: Vec<String>,
        expect: Expect,
        #[serde(default)]
        formal: bool,
    },
    /// `r_{G1}(D)` versus `r_{G2}(D)` fixes the order of the escape rates at
    /// `q`, with the cross difference `Δ2 S1 - Δ1 S2` sign-stable on `[D, q]`.
    ROrder {
        q: u32,
        d: String,
        g1: Vec<String>,
        g2: Vec<String>,
    },
    /// `q - q^(2-p) < λ < q` for a hole of words of length `p`.
    Bracket { q: u32, hole: Vec<String> },
    /// Series, automaton and brute-force counts agree for `n <= n_max`;
    /// brute force stops at the largest `n` with `q^n <= brute_cap`.
    Oracle {
        q: u32,
        forbidden: Vec<String>,
        n_max: usize,
        brute_cap: u64,
    },
    /// Polynomial and matrix Perron roots agree on irreducible instances.
    Engines { q: u32, forbidden: Vec<String> },
    /// For `F = {w}` and `u` with zero cross-correlation against `w`:
    /// `ρ(ā) <= ρ(u) <= ρ(ab̄)`.
    Extremal { q: u32, w: String, u: String },
    /// The reduced `r` of a two-word length-2 collection is one of the four
    /// forms.
    RClass { q: u32, hole: Vec<String> },
    /// Perron root of the subshift avoiding `forbidden`.
    PerronValue {
        q: u32,
        forbidden: Vec<String>,
        expected: f64,
        tol: f64,
    },
    /// Parry measures of two cylinders against their escape rates.
    MeasureVsRate {
        q: u32,
        base: Vec<String>,
        w1: String,
        w2: String,
        measure_equal: bool,
        rate_equal: bool,
    },
}

pub const P2_FORMS: [&str; 4] = ["2/(z+1)", "(2z-1)/z^2", "(2z+1)/(z^2+z)", "2/z"];

pub fn digits(ws: &[Word]) -> Vec<String> {
    ws.iter().map(|w| w.to_string()).collect()
}

fn parse(ws: &[String], q: u32) -> Result<Vec<Word>> {
    let mut p = WordParser::new(WordMode::Digit);
    ws.iter().map(|w| p.parse(w, q)).collect()
}

fn parse_formal(ws: &[String]) -> Result<Vec<Word>> {
    let mut p = WordParser::new(WordMode::Digit);
    ws.iter().map(|w| p.parse_unchecked(w)).collect()
}

fn hole_spec(q: u32, base: &[String], hole: &[String], formal: bool) -> Result<HoleSpec> {
    if formal {
        HoleSpec::formal(q, parse_formal(hole)?, parse_formal(base)?)
    } else {
        HoleSpec::new(q, parse(hole, q)?, parse(base, q)?)
    }
}

fn check_ordering(got: &crate::escape::ComparisonResult, expect: Expect) -> std::result::Result<String, String> {
    let ok = match expect {
        Expect::Less => got.ordering == Ordering::Less && got.certified,
        Expect::Greater => got.ordering == Ordering::Greater && got.certified,
        Expect::Differ => got.ordering != Ordering::Tie && got.certified,
        Expect::Tie => got.ordering == Ordering::Tie && got.gap <= f64_to_rational(TIE_WIDTH),
    };
    let text = format!(
        "{} (certified={}, gap={:.3e})",
        got.ordering,
        got.certified,
        got.gap_f64()
    );
    if ok {
        Ok(text)
    } else {
        Err(format!("expected {expect:?}, got {text}"))
    }
}

fn rat(x: &BigInt) -> BigRational {
    BigRational::from_integer(x.clone())
}

/// Runs an instance. `Ok` carries a one-line summary, `Err` the reason the
/// instance fails.
pub fn check_instance(inst: &Instance) -> std::result::Result<String, String> {
    run(inst).unwrap_or_else(|e| Err(format!("{}: {e}", e.name())))
}

fn run(inst: &Instance) -> Result<std::result::Result<String, String>> {
    Ok(match inst {
        Instance::Compare {
            q,
            base,
            hole1,
            hole2,
            expect,
            formal,
        } => {
            let h1 = hole_spec(*q, base, hole1, *formal)?;
            let h2 = hole_spec(*q, base, hole2, *formal)?;
            check_ordering(&compare_escape(&h1, &h2)?, *expect)
        }
        Instance::ROrder { q, d, g1, g2 } => check_r_order(*q, d, g1, g2)?,
        Instance::Bracket { q, hole } => {
            let words = parse(hole, *q)?;
            let p = words.iter().map(Word::len).min().unwrap_or(0);
            if p < 2 {
                return Err(Error::InvalidArgument("bracket check needs words of length >= 2".into()));
            }
            let (mut iso, _) = perron_isolator(&words, *q)?;
            let qr = rat(&BigInt::from(*q));
            let lower = &qr - rat(&BigInt::from(*q).pow(p as u32 - 2)).recip();
            let mut width = f64_to_rational(1e-6);
            loop {
                iso.refine_to(&width);
                if iso.lo() > &lower && iso.hi() < &qr {
                    break Ok(format!("lambda in ({}, {})", iso.lo(), iso.hi()));
                }
                if iso.hi() <= &lower || iso.lo() >= &qr || iso.is_exact() || width < f64_to_rational(1e-40) {
                    break Err(format!(
                        "lambda bracket [{}, {}] not strictly inside ({lower}, {q})",
                        iso.lo(),
                        iso.hi()
                    ));
                }
                width *= f64_to_rational(1e-6);
            }
        }
        Instance::Oracle {
            q,
            forbidden,
            n_max,
            brute_cap,
        } => {
            let words = parse(forbidden, *q)?;
            let (num, den) = generating_function(&words, *q)?;
            let series = series_coefficients(&num, &den, *n_max)?;
            let auto = AvoidanceAutomaton::new(&words, *q)?.count_words_upto(*n_max);
            let nb = (0..=*n_max).rev().find(|&n| space_size(*q, n) <= *brute_cap).unwrap_or(0);
            let brute = brute_force_counts(&words, *q, nb, *brute_cap)?;
            if series != auto {
                let n = (0..=*n_max).find(|&n| series[n] != auto[n]).unwrap();
                Err(format!("n={n}: series {} vs automaton {}", series[n], auto[n]))
            } else if let Some(n) = (0..=nb).find(|&n| brute[n] != auto[n]) {
                Err(format!("n={n}: brute force {} vs automaton {}", brute[n], auto[n]))
            } else {
                Ok(format!("agree for n <= {n_max}, brute force to n = {nb}"))
            }
        }
        Instance::Engines { q, forbidden } => {
            let words = parse(forbidden, *q)?;
            match perron_root_matrix(&words, *q, DEFAULT_ROOT_TOL) {
                Err(Error::EmptySubshift) => Ok("empty subshift".into()),
                Err(e) => return Err(e),
                Ok(m) => {
                    let p = perron_root_poly(&words, *q, DEFAULT_ROOT_TOL)?;
                    let gap = (p.value - m.value).abs();
                    if m.irreducible != Some(true) {
                        Ok(format!("reducible, gap {gap:.3e}"))
                    } else if gap <= ENGINE_TOL {
                        Ok(format!("gap {gap:.3e}"))
                    } else {
                        Err(format!(
                            "polynomial {} vs matrix {}: gap {gap:e}",
                            p.value, m.value
                        ))
                    }
                }
            }
        }
        Instance::Extremal { q, w, u } => {
            let mut p = WordParser::new(WordMode::Digit);
            let w = p.parse(w, *q)?;
            let u = p.parse(u, *q)?;
            if !correlation(&w, &u).is_zero() || !correlation(&u, &w).is_zero() {
                return Err(Error::InvalidArgument(format!("{u} correlates with {w}")));
            }
            let (u0, u1) = extremal_words(&w, *q)?;
            let spec = |x: &Word| HoleSpec::new(*q, vec![x.clone()], vec![w.clone()]);
            let same_r = |a: &Word, b: &Word| -> Result<bool> {
                let ra = r_function(&[w.clone(), a.clone()])?.r;
                let rb = r_function(&[w.clone(), b.clone()])?.r;
                Ok(ra == rb)
            };
            let mut fails = Vec::new();
            for (lo, hi, label) in [(&u0, &u, "minimum"), (&u, &u1, "maximum")] {
                if same_r(lo, hi)? {
                    continue;
                }
                let c = compare_escape(&spec(lo)?, &spec(hi)?)?;
                if !(c.ordering == Ordering::Less && c.certified) {
                    fails.push(format!("{label}: rho({lo}) vs rho({hi}) is {}", c.ordering));
                }
            }
            if fails.is_empty() {
                Ok(format!("rho({u0}) <= rho({u}) <= rho({u1})"))
            } else {
                Err(fails.join("; "))
            }
        }
        Instance::RClass { q, hole } => {
            let words = parse(hole, *q)?;
            let r = r_function(&words)?.r.reduced().to_string();
            if P2_FORMS.contains(&r.as_str()) {
                Ok(r)
            } else {
                Err(format!("r = {r} is not one of the four forms"))
            }
        }
        Instance::PerronValue {
            q,
            forbidden,
            expected,
            tol,
        } => {
            let words = parse(forbidden, *q)?;
            let l = perron_root(&words, *q, false)?;
            if (l.value - expected).abs() <= *tol {
                Ok(format!("lambda = {}", crate::format_float(l.value)))
            } else {
                Err(format!("lambda = {} vs expected {expected}", l.value))
            }
        }
        Instance::MeasureVsRate {
            q,
            base,
            w1,
            w2,
            measure_equal,
            rate_equal,
        } => {
            let f = parse(base, *q)?;
            let mut p = WordParser::new(WordMode::Digit);
            let (a, b) = (p.parse(w1, *q)?, p.parse(w2, *q)?);
            let pd = parry_data(&f, *q)?;
            let (ma, mb) = (pd.measure(&a)?, pd.measure(&b)?);
            let meq = (ma - mb).abs() <= 1e-12;
            let h = |x: &Word| HoleSpec::new(*q, vec![x.clone()], f.clone());
            let c = compare_escape(&h(&a)?, &h(&b)?)?;
            let req = c.ordering == Ordering::Tie;
            let mut both = f.clone();
            both.push(a.clone());
            let mut other = f.clone();
            other.push(b.clone());
            let identical = r_function(&both)?.r == r_function(&other)?.r;
            let text = format!(
                "mu({a})={}, mu({b})={}, comparison {} (r identical: {identical})",
                crate::format_float(ma),
                crate::format_float(mb),
                c.ordering
            );
            if meq == *measure_equal && req == *rate_equal {
                Ok(text)
            } else {
                Err(text)
            }
        }
    })
}

fn check_r_order(q: u32, d: &str, g1: &[String], g2: &[String]) -> Result<std::result::Result<String, String>> {
    let d: BigInt = d
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("bad threshold {d}")))?;
    let (w1, w2) = (parse(g1, q)?, parse(g2, q)?);
    let (f1, f2) = (r_function(&w1)?, r_function(&w2)?);
    let h1 = HoleSpec::full_shift(q, w1)?;
    let h2 = HoleSpec::full_shift(q, w2)?;
    let cross: IntPoly = &(&f2.delta * &f1.s) - &(&f1.delta * &f2.s);
    let cmp = compare_escape(&h1, &h2)?;
    if cross.is_zero() {
        return Ok(check_ordering(&cmp, Expect::Tie).map(|s| format!("identical r: {s}")));
    }
    let bound = lagrange_bound(&cross)?;
    let bound_f = crate::poly::roots::rational_to_f64(&bound);
    if let Some(z) = complex_roots(&cross)
        .into_iter()
        .find(|z| z.norm() > bound_f * (1.0 + 1e-9) + 1e-9)
    {
        return Ok(Err(format!("root {z} of the cross difference exceeds the Lagrange bound {bound_f}")));
    }
    let (dr, qr) = (rat(&d), rat(&BigInt::from(q)));
    if qr > dr {
        let sturm = SturmChain::new(&cross);
        let n = sturm.count_in(&dr, &qr);
        if n > 0 {
            return Ok(Err(format!("cross difference changes sign {n} times in ({d}, {q}]")));
        }
    }
    let diff = f1.r.eval(&dr)? - f2.r.eval(&dr)?;
    let diff = if diff.is_zero() {
        f1.r.eval(&qr)? - f2.r.eval(&qr)?
    } else {
        diff
    };
    let expect = if diff.is_negative() {
        Expect::Less
    } else {
        Expect::Greater
    };
    let note = if bound <= dr { "bound below D" } else { "Sturm-checked on [D, q]" };
    Ok(check_ordering(&cmp, expect).map(|s| format!("r-order {expect:?}, {note}: {s}")))
}
