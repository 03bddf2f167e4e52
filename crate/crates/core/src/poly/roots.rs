//! Real-root isolation by Sturm sequences, plus a numeric complex root finder
//! used for structural checks.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::IntPoly;

/// Sturm chain of the squarefree part of a polynomial.
#[derive(Clone, Debug)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

impl SturmChain {
    pub fn new(f: &IntPoly) -> Self {
        let p0 = f.squarefree_part();
        if p0.degree().unwrap_or(0) == 0 {
            return SturmChain { chain: vec![p0] };
        }
        let p1 = p0.derivative().primitive_part();
        let mut chain = vec![p0, p1];
        loop {
            let n = chain.len();
            let b = &chain[n - 1];
            if b.degree() == Some(0) {
                break;
            }
            // Remainder against a divisor with positive leading coefficient
            // so the pseudo-remainder is a positive multiple.
            let r = chain[n - 2].pseudo_rem(b);
            if r.is_zero() {
                break;
            }
            let next = -&r;
            let c = next.content();
            chain.push(next.div_exact(&IntPoly::constant(c)).unwrap());
        }
        SturmChain { chain }
    }

    /// The squarefree polynomial whose roots are being counted.
    pub fn base(&self) -> &IntPoly {
        &self.chain[0]
    }

    fn variations(signs: impl Iterator<Item = Ordering>) -> usize {
        let mut last = Ordering::Equal;
        let mut count = 0;
        for s in signs {
            if s == Ordering::Equal {
                continue;
            }
            if last != Ordering::Equal && s != last {
                count += 1;
            }
            last = s;
        }
        count
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(
            self.chain
                .iter()
                .map(|p| p.leading().map_or(Ordering::Equal, |c| c.cmp(&BigInt::zero()))),
        )
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let s = p.leading().map_or(Ordering::Equal, |c| c.cmp(&BigInt::zero()));
            if p.degree().unwrap_or(0) % 2 == 1 {
                s.reverse()
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_in(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    /// Number of distinct real roots in `(a, +inf)`.
    pub fn count_above(&self, a: &BigRational) -> usize {
        self.variations_at(a)
            .saturating_sub(self.variations_at_pos_inf())
    }

    /// Number of distinct real roots overall.
    pub fn count_real(&self) -> usize {
        self.variations_at_neg_inf()
            .saturating_sub(self.variations_at_pos_inf())
    }
}

/// Bracket `[lo, hi]` around the largest real root of a polynomial, refined
/// by bisection on Sturm counts with exact rational arithmetic.
#[derive(Clone, Debug)]
pub struct RootIsolator {
    sturm: SturmChain,
    lo: BigRational,
    hi: BigRational,
    steps: u64,
}

impl RootIsolator {
    /// Isolates the largest real root of `f` strictly greater than `floor`.
    ///
    /// `start` lists candidate lower endpoints tried in order (descending);
    /// `ceiling` must satisfy `count_above(ceiling) == 0` or the Lagrange
    /// bound is used instead. Returns `None` when no root exceeds `floor`.
    pub fn largest_root(
        f: &IntPoly,
        ceiling: &BigRational,
        start: &[BigRational],
        floor: &BigRational,
    ) -> Option<(RootIsolator, Vec<String>)> {
        let mut notes = Vec::new();
        let sturm = SturmChain::new(f);
        if sturm.base().degree().unwrap_or(0) == 0 {
            return None;
        }
        let mut hi = ceiling.clone();
        if sturm.count_above(&hi) > 0 {
            hi = super::lagrange_bound(sturm.base()).ok()?;
            notes.push(format!(
                "real root above the expected ceiling {}; using the Lagrange bound",
                ceiling
            ));
        }
        let mut lo = None;
        for s in start.iter().chain(std::iter::once(floor)) {
            if s >= &hi {
                continue;
            }
            if sturm.count_above(s) > 0 {
                lo = Some(s.clone());
                break;
            }
        }
        let lo = lo?;
        if lo < start.first().cloned().unwrap_or_else(|| floor.clone()) {
            notes.push(format!("root lies below the primary bracket; scan stopped at {lo}"));
        }
        let mut iso = RootIsolator {
            sturm,
            lo,
            hi,
            steps: 0,
        };
        iso.snap();
        Some((iso, notes))
    }

    fn snap(&mut self) {
        if self.sturm.base().sign_at(&self.hi) == Ordering::Equal {
            self.lo = self.hi.clone();
        }
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn midpoint_f64(&self) -> f64 {
        let m = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        rational_to_f64(&m)
    }

    /// Bisects until `hi - lo <= width`.
    pub fn refine_to(&mut self, width: &BigRational) {
        let two = BigRational::from_integer(2.into());
        while &self.width() > width {
            let mid = (&self.lo + &self.hi) / &two;
            if self.sturm.count_above(&mid) > 0 {
                self.lo = mid;
            } else {
                self.hi = mid;
                self.snap();
            }
            self.steps += 1;
        }
    }

    /// Bisects until `hi - lo <= rel * hi`.
    pub fn refine_relative(&mut self, rel: f64) {
        let r = f64_to_rational(rel.max(1e-300));
        let target = &self.hi * r;
        if target.is_zero() {
            return;
        }
        self.refine_to(&target);
    }
}

/// Exact conversion of a finite double.
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite double")
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if let (Some(n), Some(d)) = (x.numer().to_f64(), x.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // Large numerators/denominators: shift both down before dividing.
    let nb = x.numer().bits() as i64;
    let db = x.denom().bits() as i64;
    let shift_n = (nb - 900).max(0) as usize;
    let shift_d = (db - 900).max(0) as usize;
    let n = (x.numer() >> shift_n).to_f64().unwrap_or(0.0);
    let d = (x.denom() >> shift_d).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n as i64 - shift_d as i64) as i32)
}

/// All complex roots of `f` by the Durand–Kerner iteration in double
/// precision. Intended for modulus checks, not certified values.
pub fn complex_roots(f: &IntPoly) -> Vec<Complex64> {
    let Some(n) = f.degree() else {
        return Vec::new();
    };
    if n == 0 {
        return Vec::new();
    }
    let lead = f.leading().unwrap().to_f64().unwrap_or(1.0);
    let coeffs: Vec<f64> = f
        .coeffs()
        .iter()
        .map(|c| c.to_f64().unwrap_or(0.0) / lead)
        .collect();
    let eval = |z: Complex64| {
        coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, &c| acc * z + c)
    };
    let radius = 1.0 + coeffs[..n].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n)
        .map(|k| seed.powu(k as u32) * (radius / 2.0).max(0.5))
        .collect();
    for _ in 0..2000 {
        let mut delta: f64 = 0.0;
        for i in 0..n {
            let zi = roots[i];
            let mut den = Complex64::one();
            for (j, &zj) in roots.iter().enumerate() {
                if j != i {
                    den *= zi - zj;
                }
            }
            if den.norm() == 0.0 {
                den = Complex64::new(1e-12, 0.0);
            }
            let step = eval(zi) / den;
            roots[i] = zi - step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-14 * radius {
            break;
        }
    }
    roots
}

/// Sign of `f` just to the right of `x` (or at `x` when nonzero).
pub fn sign_right_of(f: &IntPoly, x: &BigRational) -> Ordering {
    let mut g = f.clone();
    while !g.is_zero() {
        match g.sign_at(x) {
            Ordering::Equal => g = g.derivative(),
            s => return s,
        }
    }
    Ordering::Equal
}

pub fn is_positive_leading(f: &IntPoly) -> bool {
    f.leading().is_some_and(|c| c.is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn sturm_counts() {
        // (z-1)(z-2)(z+3)
        let f = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[3, 1]);
        let s = SturmChain::new(&f);
        assert_eq!(s.count_real(), 3);
        assert_eq!(s.count_above(&r(0)), 2);
        assert_eq!(s.count_above(&r(1)), 1);
        assert_eq!(s.count_in(&r(0), &r(1)), 1);
        assert_eq!(s.count_in(&r(-5), &r(5)), 3);
        // repeated roots count once; z^2+1 has none
        let g = &(&p(&[-1, 1]) * &p(&[-1, 1])) * &p(&[1, 0, 1]);
        assert_eq!(SturmChain::new(&g).count_real(), 1);
    }

    #[test]
    fn golden_ratio_bracket() {
        let f = p(&[-1, -1, 1]);
        let (mut iso, _) = RootIsolator::largest_root(&f, &r(2), &[r(1)], &r(0)).unwrap();
        iso.refine_to(&f64_to_rational(1e-12));
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(rational_to_f64(iso.lo()) <= phi && phi <= rational_to_f64(iso.hi()));
        assert!(rational_to_f64(&iso.width()) <= 1e-12);
    }

    #[test]
    fn exact_rational_root_collapses() {
        let f = p(&[2, -3, 1]);
        // no root above 2, so the scan falls through to 1 and the first
        // midpoint hits the root
        let (mut iso, _) = RootIsolator::largest_root(&f, &r(3), &[r(2), r(1)], &r(0)).unwrap();
        iso.refine_to(&f64_to_rational(1e-12));
        assert_eq!(iso.lo(), &r(2));
        assert!(iso.is_exact());
    }

    #[test]
    fn durand_kerner_finds_roots() {
        let f = &(&p(&[-1, 1]) * &p(&[-2, 1])) * &p(&[1, 0, 1]);
        let mut mods: Vec<f64> = complex_roots(&f).iter().map(|z| z.norm()).collect();
        mods.sort_by(f64::total_cmp);
        let want = [1.0, 1.0, 1.0, 2.0];
        for (a, b) in mods.iter().zip(want) {
            assert!((a - b).abs() < 1e-9, "{mods:?}");
        }
    }
}
