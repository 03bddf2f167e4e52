use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

/// Dense univariate polynomial with arbitrary-precision integer coefficients.
///
/// `coeffs[k]` is the coefficient of `z^k`. The top coefficient is never zero;
/// the zero polynomial has no coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.push(c);
        Self::new(coeffs)
    }

    /// The polynomial `z - a`.
    pub fn linear_root(a: &BigInt) -> Self {
        Self::new(vec![-a.clone(), BigInt::one()])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Multiplies by `z^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    pub fn eval_int(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        // Homogenised Horner: p(n/d) * d^deg computed over the integers.
        let Some(deg) = self.degree() else {
            return BigRational::zero();
        };
        let (n, d) = (x.numer(), x.denom());
        let scaled = self.eval_homogeneous(n, d);
        BigRational::new(scaled, num_traits::pow(d.clone(), deg))
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// `p(n/d) * d^deg(p)` over the integers.
    pub fn eval_homogeneous(&self, n: &BigInt, d: &BigInt) -> BigInt {
        let Some(deg) = self.degree() else {
            return BigInt::zero();
        };
        let mut acc = self.coeffs[deg].clone();
        let mut dpow = BigInt::one();
        for k in (0..deg).rev() {
            dpow *= d;
            acc = acc * n + &self.coeffs[k] * &dpow;
        }
        acc
    }

    /// Sign of `p(x)` for an exact rational `x`.
    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        // The denominator of a BigRational is positive, so the homogenised
        // value carries the sign of p(x).
        self.eval_homogeneous(x.numer(), x.denom()).cmp(&BigInt::zero())
    }

    /// Positive gcd of the coefficients (zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides out the content and makes the leading coefficient positive.
    pub fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.leading().is_some_and(Signed::is_negative) {
            g = -g;
        }
        Self::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Remainder of `lc(b)^k * a` modulo `b`, where `k` is the number of
    /// elimination steps. When `lc(b) > 0` the result is a positive multiple
    /// of the remainder over the rationals.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.degree().expect("pseudo-remainder by the zero polynomial");
        let lb = b.leading().unwrap();
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < db {
                break;
            }
            let lr = r.leading().unwrap().clone();
            // r <- lb * r - lr * z^(dr-db) * b
            r = &r.scale(lb) - &b.scale(&lr).shift(dr - db);
        }
        r
    }

    /// Exact quotient `self / d` over the integers, or `None` when `d` does
    /// not divide `self` in `Z[z]`.
    pub fn div_exact(&self, d: &IntPoly) -> Option<IntPoly> {
        let dd = d.degree()?;
        let ld = d.leading().unwrap();
        let mut r = self.clone();
        let Some(dr) = r.degree() else {
            return Some(Self::zero());
        };
        if dr < dd {
            return None;
        }
        let mut q = vec![BigInt::zero(); dr - dd + 1];
        while let Some(dr) = r.degree() {
            if dr < dd {
                return None;
            }
            let (c, rem) = r.leading().unwrap().div_rem(ld);
            if !rem.is_zero() {
                return None;
            }
            r = &r - &d.scale(&c).shift(dr - dd);
            q[dr - dd] = c;
        }
        Some(IntPoly::new(q))
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a
    }

    /// `self / gcd(self, self')`, primitive with positive leading coefficient.
    pub fn squarefree_part(&self) -> IntPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.primitive_part();
        }
        let g = self.gcd(&self.derivative());
        self.primitive_part()
            .div_exact(&g)
            .expect("gcd divides its argument")
            .primitive_part()
    }

    pub fn max_abs_coeff(&self) -> BigInt {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Largest coefficient modulus below the leading term.
    pub fn max_abs_nonleading(&self) -> BigInt {
        let n = self.coeffs.len().saturating_sub(1);
        self.coeffs[..n]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Exponent/coefficient pairs for the nonzero terms, highest first.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let unit = mag.is_one();
            match k {
                0 => write!(f, "{mag}")?,
                1 if unit => write!(f, "z")?,
                1 => write!(f, "{mag}z")?,
                _ if unit => write!(f, "z^{k}")?,
                _ => write!(f, "{mag}z^{k}")?,
            }
        }
        Ok(())
    }
}

/// JSON form: an object from exponent to coefficient, highest exponent
/// first. Coefficients outside the `i64` range are written as strings.
impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.terms().count()))?;
        for (k, c) in self.terms() {
            match c.to_i64() {
                Some(v) => m.serialize_entry(&k.to_string(), &v)?,
                None => m.serialize_entry(&k.to_string(), &c.to_string())?,
            }
        }
        m.end()
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
