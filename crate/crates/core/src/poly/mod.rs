//! Exact polynomial algebra over the integers: correlation matrices, the
//! functions `Δ`, `S`, `r = S/Δ`, and series expansion of the avoidance
//! generating function.

mod int_poly;
mod matrix;
mod rational;
pub mod roots;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

pub use int_poly::IntPoly;
pub use matrix::{PolyMatrix, COFACTOR_MAX_ORDER};
pub use rational::{lagrange_bound, RationalFunction};

use crate::error::{Error, Result};
use crate::words::{correlation, Word};

/// `M = [(w_j, w_i)_z]_{i,j}`.
pub fn correlation_matrix(words: &[Word]) -> PolyMatrix {
    PolyMatrix::from_fn(words.len(), |i, j| correlation(&words[j], &words[i]))
}

pub fn determinant(m: &PolyMatrix) -> IntPoly {
    m.determinant()
}

pub fn adjugate_sum(m: &PolyMatrix) -> IntPoly {
    m.adjugate_sum()
}

/// `Δ`, `S` and `r = S/Δ` for a collection of words.
#[derive(Clone, Debug, Serialize)]
pub struct RFunction {
    pub delta: IntPoly,
    pub s: IntPoly,
    pub r: RationalFunction,
}

pub fn r_function(words: &[Word]) -> Result<RFunction> {
    let m = correlation_matrix(words);
    let delta = m.determinant();
    if delta.is_zero() {
        return Err(Error::SingularCorrelationMatrix);
    }
    let s = m.adjugate_sum();
    let r = RationalFunction::new(s.clone(), delta.clone())?;
    Ok(RFunction { delta, s, r })
}

pub fn eval_rational(f: &RationalFunction, x: &BigRational) -> Result<BigRational> {
    f.eval(x)
}

pub fn eval_poly(f: &IntPoly, x: &BigRational) -> BigRational {
    f.eval(x)
}

/// Numerator `zΔ` and denominator `(z-q)Δ + S` of the generating function
/// `F(z) = Σ f(n) z^(-n)`. The empty collection gives `z/(z-q)`.
pub fn generating_function(words: &[Word], q: u32) -> Result<(IntPoly, IntPoly)> {
    let (delta, s) = if words.is_empty() {
        (IntPoly::one(), IntPoly::zero())
    } else {
        let rf = r_function(words)?;
        (rf.delta, rf.s)
    };
    let zq = IntPoly::linear_root(&BigInt::from(q));
    let num = delta.shift(1);
    let den = &(&zq * &delta) + &s;
    Ok((num, den))
}

/// The denominator `P(z) = (z-q)Δ(z) + S(z)` alone.
pub fn escape_polynomial(words: &[Word], q: u32) -> Result<IntPoly> {
    generating_function(words, q).map(|(_, d)| d)
}

/// Coefficients `f(0..=n_max)` of `num/den` expanded in powers of `w = 1/z`.
///
/// The denominator is made monic first; a non-unit leading coefficient is
/// accepted only if it divides every coefficient of both polynomials.
pub fn series_coefficients(num: &IntPoly, den: &IntPoly, n_max: usize) -> Result<Vec<BigInt>> {
    let d = den
        .degree()
        .ok_or_else(|| Error::NonExpandable("zero denominator".into()))?;
    if num.degree().is_some_and(|n| n > d) {
        return Err(Error::NonExpandable(format!(
            "numerator degree {} exceeds denominator degree {d}",
            num.degree().unwrap()
        )));
    }
    let lead = den.leading().unwrap().clone();
    let divisible = |p: &IntPoly| p.coeffs().iter().all(|c| c.is_multiple_of(&lead));
    if !divisible(num) || !divisible(den) {
        return Err(Error::NonExpandable(format!(
            "leading coefficient {lead} of the denominator does not divide the coefficients"
        )));
    }
    // Reverse into w: N(w) = w^d num(1/w), D(w) = w^d den(1/w), D(0) = 1.
    let nw: Vec<BigInt> = (0..=d).map(|k| num.coeff(d - k) / &lead).collect();
    let dw: Vec<BigInt> = (0..=d).map(|k| den.coeff(d - k) / &lead).collect();
    let mut f: Vec<BigInt> = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut c = nw.get(n).cloned().unwrap_or_else(BigInt::zero);
        for j in 1..=n.min(d) {
            if !dw[j].is_zero() {
                c -= &dw[j] * &f[n - j];
            }
        }
        f.push(c);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{WordMode, WordParser};
    use num_traits::One;

    fn ws(text: &str) -> Vec<Word> {
        WordParser::new(WordMode::Abstract).parse_list(text, 36).unwrap()
    }

    fn d(text: &str) -> Vec<Word> {
        WordParser::new(WordMode::Digit).parse_list(text, 10).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn correlation_matrices() {
        let m = correlation_matrix(&ws("aa,bb"));
        assert_eq!(m.get(0, 0).to_string(), "z+1");
        assert!(m.get(0, 1).is_zero());
        assert_eq!(m.determinant().to_string(), "z^2+2z+1");
        assert_eq!(m.adjugate_sum().to_string(), "2z+2");

        let m = correlation_matrix(&ws("aaa,aba"));
        assert_eq!(m.get(0, 0).to_string(), "z^2+z+1");
        assert_eq!(m.get(0, 1).to_string(), "1");
        assert_eq!(m.determinant().to_string(), "z^4+z^3+2z^2+z");
        assert_eq!(m.adjugate_sum().to_string(), "2z^2+z");
    }

    #[test]
    fn r_functions() {
        let text = |g: &str| r_function(&ws(g)).unwrap().r.reduced().to_string();
        assert_eq!(text("aa,bb"), "2/(z+1)");
        assert_eq!(text("aaa,aba"), "(2z+1)/(z^3+z^2+2z+1)");
        assert_eq!(text("aba,aca"), "2/(z^2+2)");
        assert_eq!(text("ab,ba"), "2/(z+1)");
        assert_eq!(r_function(&d("11")).unwrap().r.reduced().to_string(), "1/(z+1)");
    }

    #[test]
    fn rational_evaluation() {
        let two = BigRational::from_integer(2.into());
        let r = r_function(&ws("aa,bb")).unwrap().r;
        assert_eq!(eval_rational(&r, &two).unwrap(), BigRational::new(2.into(), 3.into()));
        let r = r_function(&ws("ab,cd")).unwrap().r;
        assert_eq!(eval_rational(&r, &two).unwrap(), BigRational::one());
        let p = IntPoly::from_i64s(&[7, 3, 1]);
        assert_eq!(eval_poly(&p, &BigRational::zero()), BigRational::from_integer(7.into()));
    }

    #[test]
    fn series_examples() {
        let (n, den) = generating_function(&d("11"), 2).unwrap();
        assert_eq!(series_coefficients(&n, &den, 5).unwrap(), ints(&[1, 2, 3, 5, 8, 13]));
        let (n, den) = generating_function(&d("00,11"), 2).unwrap();
        assert_eq!(series_coefficients(&n, &den, 6).unwrap(), ints(&[1, 2, 2, 2, 2, 2, 2]));
        let (n, den) = generating_function(&[], 3).unwrap();
        assert_eq!(series_coefficients(&n, &den, 3).unwrap(), ints(&[1, 3, 9, 27]));
        let bad = series_coefficients(&IntPoly::from_i64s(&[0, 0, 1]), &IntPoly::from_i64s(&[1, 1]), 3);
        assert!(matches!(bad, Err(Error::NonExpandable(_))));
    }

    #[test]
    fn ab_cd_polynomial() {
        assert_eq!(escape_polynomial(&ws("ab,cd"), 3).unwrap().to_string(), "z^3-3z^2+2z");
        assert_eq!(escape_polynomial(&ws("aa,bb"), 2).unwrap().to_string(), "z^3-z");
    }
}
