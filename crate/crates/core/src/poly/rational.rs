use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::IntPoly;
use crate::error::{Error, Result};

/// Quotient of two integer polynomials with a nonzero denominator.
///
/// The stored pair is kept exactly as constructed. [`RationalFunction::reduced`]
/// gives the gcd-free canonical form, and equality compares canonical forms.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    numerator: IntPoly,
    denominator: IntPoly,
}

impl RationalFunction {
    pub fn new(numerator: IntPoly, denominator: IntPoly) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFunction {
            numerator,
            denominator,
        })
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.numerator
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.denominator
    }

    /// Cancels the polynomial gcd, makes the denominator's leading
    /// coefficient positive and removes any common integer content.
    pub fn reduced(&self) -> RationalFunction {
        if self.numerator.is_zero() {
            return RationalFunction {
                numerator: IntPoly::zero(),
                denominator: IntPoly::one(),
            };
        }
        let g = self.numerator.gcd(&self.denominator);
        let mut num = self.numerator.div_exact(&g).expect("gcd divides numerator");
        let mut den = self
            .denominator
            .div_exact(&g)
            .expect("gcd divides denominator");
        if den.leading().is_some_and(Signed::is_negative) {
            num = -&num;
            den = -&den;
        }
        let c = num.content().gcd(&den.content());
        if c > BigInt::from(1) {
            num = num.div_exact(&IntPoly::constant(c.clone())).unwrap();
            den = den.div_exact(&IntPoly::constant(c)).unwrap();
        }
        RationalFunction {
            numerator: num,
            denominator: den,
        }
    }

    /// Exact value at a rational point; a pole of the reduced form is an error.
    pub fn eval(&self, x: &BigRational) -> Result<BigRational> {
        let mut d = self.denominator.eval(x);
        let mut n = self.numerator.eval(x);
        if d.is_zero() {
            let r = self.reduced();
            d = r.denominator.eval(x);
            n = r.numerator.eval(x);
            if d.is_zero() {
                return Err(Error::DivisionByZero);
            }
        }
        Ok(n / d)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.reduced(), other.reduced());
        a.numerator == b.numerator && a.denominator == b.denominator
    }
}

impl Eq for RationalFunction {}

fn wrap(p: &IntPoly) -> String {
    if p.terms().count() > 1 {
        format!("({p})")
    } else {
        p.to_string()
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", wrap(&self.numerator), wrap(&self.denominator))
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = self.reduced();
        let mut st = s.serialize_struct("RationalFunction", 5)?;
        st.serialize_field("numerator", &self.numerator)?;
        st.serialize_field("denominator", &self.denominator)?;
        st.serialize_field("reduced_numerator", &r.numerator)?;
        st.serialize_field("reduced_denominator", &r.denominator)?;
        st.serialize_field("text", &r.to_string())?;
        st.end()
    }
}

/// Lagrange's bound `1 + max |a_k / a_lead|`: every complex root of `f` has
/// modulus at most this value.
pub fn lagrange_bound(f: &IntPoly) -> Result<BigRational> {
    let lead = f
        .leading()
        .ok_or_else(|| Error::InvalidArgument("Lagrange bound of the zero polynomial".into()))?;
    let m = f.max_abs_nonleading();
    Ok(BigRational::from_integer(1.into()) + BigRational::new(m, lead.abs()))
}
