use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::{AvoidanceAutomaton, TransferMatrix};
use crate::error::{Error, Result};
use crate::poly::roots::{f64_to_rational, rational_to_f64, RootIsolator};
use crate::poly::{self, IntPoly};
use crate::words::Word;

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
pub const MAX_POWER_ITERATIONS: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Matrix,
    Polynomial,
    /// Known in closed form, e.g. `θ = q` for the full shift.
    Exact,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Matrix => "matrix",
            Method::Polynomial => "polynomial",
            Method::Exact => "exact",
        })
    }
}

/// Perron root estimate with an exact enclosing interval.
#[derive(Clone, Debug)]
pub struct PerronResult {
    pub value: f64,
    pub lo: BigRational,
    pub hi: BigRational,
    pub method: Method,
    pub iterations: u64,
    /// `Some(true)` when the recurrent part is a single irreducible
    /// component; `None` when the engine does not look.
    pub irreducible: Option<bool>,
    pub diagnostics: Vec<String>,
}

impl PerronResult {
    pub fn exact(x: BigRational) -> Self {
        PerronResult {
            value: rational_to_f64(&x),
            lo: x.clone(),
            hi: x,
            method: Method::Exact,
            iterations: 0,
            irreducible: None,
            diagnostics: Vec::new(),
        }
    }

    pub fn width(&self) -> f64 {
        rational_to_f64(&(&self.hi - &self.lo))
    }

    pub fn contains(&self, x: f64) -> bool {
        rational_to_f64(&self.lo) <= x && x <= rational_to_f64(&self.hi)
    }
}

pub fn rational_string(x: &BigRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

impl Serialize for PerronResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("PerronResult", 7)?;
        st.serialize_field("value", &crate::round12(self.value))?;
        st.serialize_field("lo", &rational_string(&self.lo))?;
        st.serialize_field("hi", &rational_string(&self.hi))?;
        st.serialize_field("method", &self.method)?;
        st.serialize_field("iterations", &self.iterations)?;
        st.serialize_field("irreducible", &self.irreducible)?;
        st.serialize_field("diagnostics", &self.diagnostics)?;
        st.end()
    }
}

/// Exact Collatz–Wielandt interval `[min (Tx)_i/x_i, max (Tx)_i/x_i]` for a
/// positive vector `x`.
fn collatz_wielandt(t: &TransferMatrix, x: &[f64]) -> Option<(BigRational, BigRational)> {
    let xr: Vec<BigRational> = x
        .iter()
        .map(|&v| (v > 0.0 && v.is_finite()).then(|| f64_to_rational(v)))
        .collect::<Option<_>>()?;
    let mut lo: Option<BigRational> = None;
    let mut hi: Option<BigRational> = None;
    for i in 0..t.dimension() {
        let mut y = BigRational::zero();
        for &(j, v) in t.row(i) {
            y += &xr[j] * BigRational::from_integer(BigInt::from(v));
        }
        let r = y / &xr[i];
        if lo.as_ref().is_none_or(|l| &r < l) {
            lo = Some(r.clone());
        }
        if hi.as_ref().is_none_or(|h| &r > h) {
            hi = Some(r);
        }
    }
    Some((lo?, hi?))
}

/// Power iteration on `T + I` for an irreducible matrix.
fn perron_irreducible(t: &TransferMatrix, tol: f64) -> Result<(f64, BigRational, BigRational, u64)> {
    let n = t.dimension();
    let mut x = vec![1.0f64; n];
    let mut y = vec![0.0f64; n];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < MAX_POWER_ITERATIONS {
        iterations += 1;
        for i in 0..n {
            let mut acc = x[i];
            for &(j, v) in t.row(i) {
                acc += v as f64 * x[j];
            }
            y[i] = acc;
        }
        let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
        for i in 0..n {
            let r = y[i] / x[i];
            lo = lo.min(r);
            hi = hi.max(r);
        }
        let norm = y.iter().cloned().fold(0.0, f64::max);
        for i in 0..n {
            x[i] = y[i] / norm;
        }
        if hi - lo <= tol * hi.max(1.0) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!(
            "power iteration did not reach width {tol} in {MAX_POWER_ITERATIONS} steps"
        )));
    }
    let (lo, hi) = collatz_wielandt(t, &x).ok_or_else(|| {
        Error::NonConvergence("iterate lost positivity before certification".into())
    })?;
    let value = rational_to_f64(&((&lo + &hi) / BigRational::from_integer(2.into())));
    Ok((value, lo, hi, iterations))
}

/// Perron root of a nonnegative integer matrix as the maximum over its
/// nontrivial strongly connected components.
pub fn spectral_radius(t: &TransferMatrix, tol: f64) -> Result<PerronResult> {
    let comps = t.nontrivial_sccs();
    if comps.is_empty() {
        return Err(Error::EmptySubshift);
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let mut value = 0.0f64;
    let mut lo = BigRational::zero();
    let mut hi = BigRational::zero();
    let mut iterations = 0;
    let mut diagnostics = Vec::new();
    // θ is the largest component root, so it lies between the largest lower
    // end and the largest upper end
    for c in &comps {
        let (v, l, h, it) = perron_irreducible(&t.restrict(c), tol)?;
        iterations += it;
        value = value.max(v);
        if l > lo {
            lo = l;
        }
        if h > hi {
            hi = h;
        }
    }
    if comps.len() > 1 {
        diagnostics.push(format!(
            "reducible: {} nontrivial strongly connected components",
            comps.len()
        ));
    }
    Ok(PerronResult {
        value,
        lo,
        hi,
        method: Method::Matrix,
        iterations,
        irreducible: Some(comps.len() == 1),
        diagnostics,
    })
}

/// Perron root of the subshift avoiding `forbidden`.
pub fn perron_root_matrix(forbidden: &[Word], q: u32, tol: f64) -> Result<PerronResult> {
    let a = AvoidanceAutomaton::new(forbidden, q)?;
    spectral_radius(&a.transfer_matrix(), tol)
}

/// The polynomial whose largest real root is the growth rate of the avoidance
/// language: `(z-q)Δ + S` with the factors shared with `zΔ` removed.
pub fn reduced_escape_polynomial(words: &[Word], q: u32) -> Result<IntPoly> {
    let (num, den) = poly::generating_function(words, q)?;
    let g = num.gcd(&den);
    Ok(den.div_exact(&g).expect("gcd divides").primitive_part())
}

/// Isolates the largest real root of the reduced generating-function
/// denominator in `(0, q]`.
pub fn perron_isolator(words: &[Word], q: u32) -> Result<(RootIsolator, Vec<String>)> {
    let p = reduced_escape_polynomial(words, q)?;
    let int = |k: i64| BigRational::from_integer(BigInt::from(k));
    let q = q as i64;
    let starts: Vec<BigRational> = (1..q).rev().map(int).collect();
    RootIsolator::largest_root(&p, &int(q), &starts, &int(0)).ok_or_else(|| {
        Error::NoRealRootFound(format!("no positive real root of {p}; the language is finite"))
    })
}

pub fn perron_root_poly(words: &[Word], q: u32, tol: f64) -> Result<PerronResult> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    let (mut iso, diagnostics) = perron_isolator(words, q)?;
    iso.refine_to(&f64_to_rational(tol));
    Ok(PerronResult {
        value: iso.midpoint_f64(),
        lo: iso.lo().clone(),
        hi: iso.hi().clone(),
        method: Method::Polynomial,
        iterations: iso.steps(),
        irreducible: None,
        diagnostics,
    })
}

/// `ln θ` together with `[ln lo, ln hi]`.
#[derive(Clone, Debug, Serialize)]
pub struct Entropy {
    #[serde(serialize_with = "crate::ser_round12")]
    pub value: f64,
    #[serde(serialize_with = "crate::ser_round12")]
    pub lo: f64,
    #[serde(serialize_with = "crate::ser_round12")]
    pub hi: f64,
    pub theta: PerronResult,
}

pub fn ln_rational(x: &BigRational) -> f64 {
    if !x.is_positive() {
        return f64::NEG_INFINITY;
    }
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    if nb < 1000 && db < 1000 {
        return rational_to_f64(x).ln();
    }
    let shift = |v: &BigInt, b: i64| -> f64 {
        let s = (b - 60).max(0) as usize;
        (v >> s).to_f64().unwrap().ln() + s as f64 * std::f64::consts::LN_2
    };
    shift(x.numer(), nb) - shift(x.denom(), db)
}

pub fn topological_entropy(forbidden: &[Word], q: u32, tol: f64) -> Result<Entropy> {
    let theta = perron_root_matrix(forbidden, q, tol)?;
    Ok(Entropy {
        value: theta.value.ln(),
        lo: ln_rational(&theta.lo),
        hi: ln_rational(&theta.hi),
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{WordMode, WordParser};

    fn one() -> BigRational {
        num_traits::One::one()
    }

    fn d(text: &str, q: u32) -> Vec<Word> {
        WordParser::new(WordMode::Digit).parse_list(text, q).unwrap()
    }

    fn a(text: &str) -> Vec<Word> {
        WordParser::new(WordMode::Abstract).parse_list(text, 36).unwrap()
    }

    const PHI: f64 = 1.618_033_988_749_895;

    #[test]
    fn matrix_engine_examples() {
        let r = perron_root_matrix(&d("00,11", 2), 2, 1e-12).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        assert!(r.lo <= one() && one() <= r.hi);
        let r = perron_root_matrix(&d("11", 2), 2, 1e-12).unwrap();
        assert!((r.value - PHI).abs() < 1e-11);
        assert!(r.contains(PHI));
        let r = perron_root_matrix(&d("02,10,11,21,22", 3), 3, 1e-12).unwrap();
        assert!((r.value - 1.466).abs() < 5e-4, "{}", r.value);
        let r = perron_root_matrix(&[], 5, 1e-12).unwrap();
        assert!((r.value - 5.0).abs() < 1e-12);
    }

    #[test]
    fn polynomial_engine_examples() {
        let r = perron_root_poly(&a("ab,cd"), 3, 1e-12).unwrap();
        assert_eq!(r.lo, BigRational::from_integer(2.into()));
        assert_eq!(r.hi, r.lo);
        let r = perron_root_poly(&a("aa,bb"), 2, 1e-12).unwrap();
        assert_eq!(r.lo, one());
        let r = perron_root_poly(&[], 4, 1e-12).unwrap();
        assert_eq!(r.lo, BigRational::from_integer(4.into()));
        let r = perron_root_poly(&d("11", 2), 2, 1e-12).unwrap();
        assert!(r.contains(PHI) || (r.value - PHI).abs() < 1e-12);
    }

    #[test]
    fn engines_agree_on_small_cases() {
        for (g, q) in [("01,10", 3), ("000,111", 2), ("012,120", 3), ("0101", 2), ("00,01", 3)] {
            let w = d(g, q);
            let m = perron_root_matrix(&w, q, 1e-12).unwrap();
            let p = perron_root_poly(&w, q, 1e-12).unwrap();
            assert!((m.value - p.value).abs() < 1e-9, "{g}: {} vs {}", m.value, p.value);
        }
    }

    #[test]
    fn empty_and_finite_languages() {
        assert_eq!(perron_root_matrix(&d("0,1", 2), 2, 1e-12).unwrap_err(), Error::EmptySubshift);
        assert_eq!(perron_root_poly(&d("0,1", 2), 2, 1e-12).unwrap_err().name(), "NoRealRootFound");
        // 00, 11, 01 leave only finitely many words ending 1 0...
        assert_eq!(perron_root_matrix(&d("00,11,01", 2), 2, 1e-12).unwrap_err(), Error::EmptySubshift);
    }

    #[test]
    fn entropies() {
        let h = topological_entropy(&[], 4, 1e-12).unwrap();
        assert!((h.value - 4f64.ln()).abs() < 1e-12);
        let h = topological_entropy(&d("11", 2), 2, 1e-12).unwrap();
        assert!((h.value - 0.4812).abs() < 1e-4);
        let h = topological_entropy(&d("00,11", 2), 2, 1e-12).unwrap();
        assert!(h.value.abs() < 1e-12);
    }
}
