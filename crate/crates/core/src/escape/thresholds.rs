use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::{escape_rate, HoleSpec};
use crate::error::{Error, Result};
use crate::poly::r_function;
use crate::words::{correlation, Word, WordCollection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdVariant {
    /// Two words of length `p`: `3p^2 + 2`.
    TwoWords,
    /// Two words of lengths `p1`, `p2`: `3 p1 p2 + 2`.
    Mixed(usize, usize),
    /// `t` words of length `p`: `2 t^2 (t!)^2 p^(2t-2) + 1`.
    Generic,
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn d_threshold(t: usize, p: usize, variant: ThresholdVariant) -> Result<BigInt> {
    if t < 1 || p < 2 {
        return Err(Error::InvalidArgument(format!(
            "threshold needs t >= 1 and p >= 2, got t={t}, p={p}"
        )));
    }
    let p_big = BigInt::from(p);
    Ok(match variant {
        ThresholdVariant::TwoWords => BigInt::from(3) * &p_big * &p_big + 2,
        ThresholdVariant::Mixed(p1, p2) => BigInt::from(3 * p1) * BigInt::from(p2) + 2,
        ThresholdVariant::Generic => {
            let f = factorial(t);
            BigInt::from(2 * t * t) * &f * &f * p_big.pow((2 * t - 2) as u32) + 1
        }
    })
}

/// Instance threshold `(a1 b2 + a2 b1) t p + 1`, where `a_i` and `b_i` are the
/// largest coefficient moduli of `Δ_i` and `S_i`.
pub fn d_instance(g1: &WordCollection, g2: &WordCollection) -> Result<BigInt> {
    let t = g1.len();
    let p = g1.max_len();
    let same_len = |g: &WordCollection| g.words().iter().all(|w| w.len() == p);
    if g2.len() != t || g2.max_len() != p || !same_len(g1) || !same_len(g2) || t == 0 {
        return Err(Error::InvalidArgument(
            "d_instance needs two nonempty collections of the same size and word length".into(),
        ));
    }
    let r1 = r_function(g1.words())?;
    let r2 = r_function(g2.words())?;
    let (a1, b1) = (r1.delta.max_abs_coeff(), r1.s.max_abs_coeff());
    let (a2, b2) = (r2.delta.max_abs_coeff(), r2.s.max_abs_coeff());
    Ok((a1 * b2 + a2 * b1) * BigInt::from(t * p) + 1)
}

/// `(q-1)(t+1) - t q (1+1/q)^(t-1) >= 0`, cleared of denominators:
/// `(q-1)(t+1) q^(t-1) >= t q (q+1)^(t-1)`.
pub fn gen_period_condition(q: u64, t: u32) -> bool {
    let qb = BigInt::from(q);
    let e = t.saturating_sub(1);
    let q1: BigInt = &qb + 1;
    let lhs = (&qb - 1) * BigInt::from(t + 1) * qb.pow(e);
    let rhs = BigInt::from(t) * &qb * q1.pow(e);
    lhs >= rhs
}

/// `u0 = a^p` and `u1 = a b^(p-1)` for the two smallest symbols `a < b`
/// outside `{first, last}` of `w`, preferring symbols absent from `w`.
pub fn extremal_words(w: &Word, q: u32) -> Result<(Word, Word)> {
    let p = w.len();
    let ends = [w.first(), w.last()];
    let mut eligible: Vec<u32> = (0..q).filter(|s| !ends.contains(s)).collect();
    eligible.sort_by_key(|s| (w.symbols().contains(s), *s));
    if eligible.len() < 2 {
        let needed = if w.first() == w.last() { 3 } else { 4 };
        return Err(Error::InsufficientAlphabet { needed, q });
    }
    let (a, b) = (eligible[0].min(eligible[1]), eligible[0].max(eligible[1]));
    let u0 = Word::constant(a, p);
    let mut s1 = vec![b; p];
    s1[0] = a;
    let u1 = Word::new(s1)?;
    for u in [&u0, &u1] {
        if !correlation(w, u).is_zero() || !correlation(u, w).is_zero() {
            return Err(Error::InvalidArgument(format!(
                "{u} correlates with {w}; extremal candidates must not"
            )));
        }
    }
    Ok((u0, u1))
}

/// Smallest `p >= 3` with `ρ({x_1..x_p, y_1..y_p}) < delta`.
pub fn find_small_escape_hole(x: &[u32], y: &[u32], q: u32, delta: f64) -> Result<usize> {
    if q < 5 || delta.is_nan() || delta <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "needs q >= 5 and delta > 0, got q={q}, delta={delta}"
        )));
    }
    let limit = x.len().min(y.len());
    for p in 3..=limit {
        let mut words = vec![Word::over(x[..p].to_vec(), q)?];
        let wy = Word::over(y[..p].to_vec(), q)?;
        if wy != words[0] {
            words.push(wy);
        }
        let rho = escape_rate(&HoleSpec::full_shift(q, words)?)?.rho;
        if rho < delta {
            return Ok(p);
        }
    }
    Err(Error::InvalidArgument(format!(
        "no prefix length up to {limit} reaches escape rate below {delta}"
    )))
}
