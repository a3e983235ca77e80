//! Exact Laurent polynomials over Q(i, 2^(1/3)), plus the small rational
//! function layer needed by the isotropic frame.
//!
//! The representation is a sparse exponent map: monomial-heavy inputs like
//! `a*z^b` are first-class, and the order/degree bookkeeping that drives the
//! puncture computations reads off the ends of the map. Zero counting never
//! factors anything; only exponent spans are used.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::FieldElem;
use crate::spectral::SurfaceKind;

/// A Laurent polynomial with `FieldElem` coefficients. Stored coefficients
/// are never zero; the zero polynomial has an empty term map.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, FieldElem>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(FieldElem::one())
    }

    pub fn constant(c: FieldElem) -> Self {
        Self::monomial(0, c)
    }

    /// The coordinate function `z`.
    pub fn var() -> Self {
        Self::monomial(1, FieldElem::one())
    }

    pub fn monomial(exponent: i64, coeff: FieldElem) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exponent, coeff);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, FieldElem)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, exponent: i64, coeff: FieldElem) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exponent).or_insert_with(FieldElem::zero);
        *slot = &*slot + &coeff;
        if slot.is_zero() {
            self.terms.remove(&exponent);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &FieldElem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exponent: i64) -> FieldElem {
        self.terms.get(&exponent).cloned().unwrap_or_else(FieldElem::zero)
    }

    /// Minimal exponent with nonzero coefficient; `None` marks the zero
    /// polynomial (conceptually -infinity).
    pub fn ord_low(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    /// Maximal exponent with nonzero coefficient; `None` for zero.
    pub fn deg_high(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_coeff(&self) -> Option<&FieldElem> {
        self.terms.values().next_back()
    }

    pub fn is_constant(&self) -> bool {
        self.is_zero() || (self.ord_low() == Some(0) && self.deg_high() == Some(0))
    }

    /// `Some((b, a))` when the polynomial is a single term `a*z^b`.
    pub fn as_monomial(&self) -> Option<(i64, &FieldElem)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, c * v)).collect(),
        }
    }

    pub fn mul_monomial(&self, exponent: i64, c: &FieldElem) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (*e + exponent, c * v))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Exact cube root, if one exists with coefficients in the field.
    ///
    /// Exponent checks first (order divisible by 3), then the leading
    /// coefficient through [`FieldElem::cbrt`], then descending-exponent
    /// recursion on the remaining coefficients. The loop exits successfully
    /// only when the residual `q - p^3` vanishes, so the recursion itself is
    /// not correctness-critical.
    pub fn cbrt(&self) -> Option<LaurentPoly> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let low = self.ord_low().unwrap();
        let high = self.deg_high().unwrap();
        if low.rem_euclid(3) != 0 || (high - low) % 3 != 0 {
            return None;
        }
        let root_high = high / 3;
        let root_low = low / 3;
        let lead = self.leading_coeff().unwrap().cbrt()?;
        let lead_sq_3 = &(&FieldElem::from_int(3) * &lead) * &lead;
        let lead_sq_3_inv = lead_sq_3.inv().ok()?;
        let mut root = LaurentPoly::monomial(root_high, lead);
        let max_steps = (high - low) / 3 + 2;
        for _ in 0..=max_steps {
            let residual = self - &root.pow(3);
            if residual.is_zero() {
                return Some(root);
            }
            let m = residual.deg_high().unwrap();
            let e = m - 2 * root_high;
            if e < root_low || e >= root_high {
                return None;
            }
            let c = &residual.coeff(m) * &lead_sq_3_inv;
            root.add_term(e, c);
        }
        None
    }

    /// Number of zeros of a nonzero `f` in the interior of the surface,
    /// counted with multiplicity: all zeros of a polynomial lie in C, while
    /// on C* the monomial part carries no zeros and only the exponent span
    /// remains.
    pub fn zero_count(&self, surface: SurfaceKind) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let low = self.ord_low().unwrap();
        let high = self.deg_high().unwrap();
        Ok(match surface {
            SurfaceKind::AffineLine => high as u64,
            SurfaceKind::PuncturedLine => (high - low) as u64,
        })
    }
}

macro_rules! impl_laurent_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_laurent_binop!(Add, add, |a, b| {
    let mut out = a.clone();
    for (e, c) in b.terms.iter() {
        out.add_term(*e, c.clone());
    }
    out
});

impl_laurent_binop!(Sub, sub, |a, b| {
    let mut out = a.clone();
    for (e, c) in b.terms.iter() {
        out.add_term(*e, -c);
    }
    out
});

impl_laurent_binop!(Mul, mul, |a, b| {
    let mut out = LaurentPoly::zero();
    for (ea, ca) in a.terms.iter() {
        for (eb, cb) in b.terms.iter() {
            out.add_term(ea + eb, ca * cb);
        }
    }
    out
});

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending-exponent canonical form, e.g. `(1) + (3/2)*z^2`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(out, "0");
        }
        let rendered: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| match e {
                0 => format!("({c})"),
                1 => format!("({c})*z"),
                _ => format!("({c})*z^{e}"),
            })
            .collect();
        write!(out, "{}", rendered.join(" + "))
    }
}

/// An exact ratio of Laurent polynomials. The denominator is normalized to
/// have order zero and trailing coefficient one, so monomial denominators
/// collapse to 1 and the ratio degenerates to a plain polynomial.
#[derive(Debug, Clone)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let low = den.ord_low().unwrap();
        let trailing = den.coeff(low);
        let scale = trailing.inv()?;
        Ok(RatFunc {
            num: num.mul_monomial(-low, &scale),
            den: den.mul_monomial(-low, &scale),
        })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFunc {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The underlying polynomial when the (normalized) denominator is 1.
    pub fn as_poly(&self) -> Option<&LaurentPoly> {
        if self.den == LaurentPoly::one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn ord_low(&self) -> Option<i64> {
        Some(self.num.ord_low()? - self.den.ord_low().unwrap())
    }

    pub fn deg_high(&self) -> Option<i64> {
        Some(self.num.deg_high()? - self.den.deg_high().unwrap())
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

macro_rules! impl_ratfunc_binop {
    ($trait:ident, $method:ident, |$a:ident, $b:ident| $body:expr) => {
        impl $trait<&RatFunc> for &RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: &RatFunc) -> RatFunc {
                let ($a, $b) = (self, rhs);
                $body
            }
        }
        impl $trait for RatFunc {
            type Output = RatFunc;
            fn $method(self, rhs: RatFunc) -> RatFunc {
                (&self).$method(&rhs)
            }
        }
    };
}

impl_ratfunc_binop!(Add, add, |a, b| RatFunc::new(
    &(&a.num * &b.den) + &(&b.num * &a.den),
    &a.den * &b.den
)
.expect("nonzero denominators"));

impl_ratfunc_binop!(Sub, sub, |a, b| RatFunc::new(
    &(&a.num * &b.den) - &(&b.num * &a.den),
    &a.den * &b.den
)
.expect("nonzero denominators"));

impl_ratfunc_binop!(Mul, mul, |a, b| RatFunc::new(
    &a.num * &b.num,
    &a.den * &b.den
)
.expect("nonzero denominators"));

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl RatFunc {
    pub fn div(&self, rhs: &RatFunc) -> Result<RatFunc> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_poly() {
            write!(out, "{p}")
        } else {
            write!(out, "[{}] / [{}]", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rat;

    fn z() -> LaurentPoly {
        LaurentPoly::var()
    }

    fn int(n: i64) -> LaurentPoly {
        LaurentPoly::constant(FieldElem::from_int(n))
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&z() + &int(1)) * &(&z() - &int(1));
        let rhs = &z().pow(2) - &int(1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn exponent_cancellation() {
        let zinv = LaurentPoly::monomial(-1, FieldElem::one());
        assert_eq!(&zinv * &z(), LaurentPoly::one());
    }

    #[test]
    fn binomial_cube() {
        let cube = (&z() + &int(1)).pow(3);
        let expected = LaurentPoly::from_terms([
            (3, FieldElem::one()),
            (2, FieldElem::from_int(3)),
            (1, FieldElem::from_int(3)),
            (0, FieldElem::one()),
        ]);
        assert_eq!(cube, expected);
    }

    #[test]
    fn order_and_degree() {
        let p = &z().pow(3) + &z();
        assert_eq!(p.ord_low(), Some(1));
        assert_eq!(p.deg_high(), Some(3));
        assert_eq!(LaurentPoly::zero().ord_low(), None);
        assert_eq!(LaurentPoly::zero().deg_high(), None);
        let m = LaurentPoly::monomial(-2, FieldElem::from_int(5));
        assert_eq!((m.ord_low(), m.deg_high()), (Some(-2), Some(-2)));
    }

    #[test]
    fn cube_roots() {
        assert_eq!(z().pow(3).cbrt(), Some(z()));
        let cube = (&z() + &int(1)).pow(3);
        assert_eq!(cube.cbrt(), Some(&z() + &int(1)));
        assert_eq!(z().pow(2).cbrt(), None);
        // Laurent input: (2 z^-1 + z)^3 has order -3.
        let f = &LaurentPoly::monomial(-1, FieldElem::from_int(2)) + &z();
        assert_eq!(f.pow(3).cbrt(), Some(f));
        // Leading coefficient 2 pulls the root outside Q but not the field.
        let g = z().scale(&FieldElem::two_pow_third(1));
        assert_eq!(g.pow(3).cbrt(), Some(g));
    }

    #[test]
    fn zero_counts() {
        assert_eq!(z().pow(2).zero_count(SurfaceKind::AffineLine).unwrap(), 2);
        let mono = LaurentPoly::monomial(5, FieldElem::from_int(3));
        assert_eq!(mono.zero_count(SurfaceKind::PuncturedLine).unwrap(), 0);
        let p = &z() - &int(1);
        assert_eq!(p.zero_count(SurfaceKind::PuncturedLine).unwrap(), 1);
        assert_eq!(
            LaurentPoly::zero().zero_count(SurfaceKind::AffineLine),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn ratfunc_collapses_monomial_denominators() {
        let r = RatFunc::new(z().pow(2), z().scale(&FieldElem::from_int(2))).unwrap();
        let half = FieldElem::from_rational(rat(1, 2));
        assert_eq!(r.as_poly(), Some(&z().scale(&half)));
    }

    #[test]
    fn ratfunc_equality_cross_multiplies() {
        let a = RatFunc::new(z().pow(2), z()).unwrap();
        let b = RatFunc::from_poly(z());
        assert_eq!(a, b);
    }
}
