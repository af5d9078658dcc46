//! Single-variable Laurent polynomials with exact coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::homology::ring::{Domain, EuclideanRing, Ring};

/// Laurent polynomial over `C`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct Laurent<C> {
    coeffs: BTreeMap<i64, C>,
}

pub type ZLaurent = Laurent<BigInt>;
pub type QLaurent = Laurent<BigRational>;

impl<C: Ring> Laurent<C> {
    pub fn zero_poly() -> Self {
        Laurent { coeffs: BTreeMap::new() }
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(0, c)
    }

    pub fn monomial(exp: i64, c: C) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Laurent { coeffs }
    }

    /// The variable t.
    pub fn t() -> Self {
        Self::monomial(1, C::one())
    }

    pub fn t_pow(exp: i64) -> Self {
        Self::monomial(exp, C::one())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut out = Self::zero_poly();
        for (e, c) in pairs {
            out.add_term(e, c);
        }
        out
    }

    pub fn add_term(&mut self, exp: i64, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(exp).or_insert_with(C::zero);
        *entry = entry.add(&c);
        if entry.is_zero() {
            self.coeffs.remove(&exp);
        }
    }

    pub fn coeff(&self, exp: i64) -> C {
        self.coeffs.get(&exp).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &C)> {
        self.coeffs.iter()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// max_exp - min_exp, for nonzero polynomials.
    pub fn span(&self) -> Option<i64> {
        Some(self.max_exp()? - self.min_exp()?)
    }

    /// Multiply by t^k.
    pub fn shifted(&self, k: i64) -> Self {
        Laurent { coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Evaluate at t = 1: the sum of coefficients.
    pub fn eval_one(&self) -> C {
        self.coeffs.values().fold(C::zero(), |acc, c| acc.add(c))
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero_poly();
        for (e, a) in &self.coeffs {
            out.add_term(*e, a.mul(c));
        }
        out
    }
}

impl<C: Ring> Ring for Laurent<C> {
    fn zero() -> Self {
        Self::zero_poly()
    }
    fn one() -> Self {
        Self::constant(C::one())
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.coeffs {
            out.add_term(*e, c.clone());
        }
        out
    }
    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero_poly();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                out.add_term(e1 + e2, c1.mul(c2));
            }
        }
        out
    }
    fn neg(&self) -> Self {
        Laurent { coeffs: self.coeffs.iter().map(|(e, c)| (*e, c.neg())).collect() }
    }
}

/// Long division from the top degree; succeeds only when exact.  Both
/// operands are first anchored at exponent 0, since in the Laurent ring an
/// unanchored division would descend forever instead of terminating with a
/// remainder.
impl<C: Domain> Domain for Laurent<C> {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero_poly());
        }
        let a_min = self.min_exp().unwrap();
        let d_min = d.min_exp().unwrap();
        let a = self.shifted(-a_min);
        let b = d.shifted(-d_min);
        let b_max = b.max_exp().unwrap();
        let b_lead = b.coeff(b_max);
        let mut rem = a;
        let mut q = Self::zero_poly();
        while !rem.is_zero() {
            let r_max = rem.max_exp().unwrap();
            if r_max < b_max {
                return None;
            }
            let c = rem.coeff(r_max).exact_div(&b_lead)?;
            let shift = r_max - b_max;
            q.add_term(shift, c.clone());
            let m = Self::monomial(shift, c);
            rem = rem.sub(&m.mul(&b));
        }
        Some(q.shifted(a_min - d_min))
    }
}

impl Ring for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
}

impl Domain for BigRational {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if Zero::is_zero(d) {
            None
        } else {
            Some(self / d)
        }
    }
}

/// The rational Laurent ring is Euclidean with size = span: killing leading
/// terms strictly shrinks the span while the low end stays put.
impl EuclideanRing for QLaurent {
    fn norm(&self) -> Option<BigUint> {
        self.span().map(|s| BigUint::from(s as u64))
    }

    fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let mut q = Self::zero_poly();
        let d_span = d.span().unwrap();
        let d_max = d.max_exp().unwrap();
        let d_lead = d.coeff(d_max);
        while let Some(r_span) = rem.span() {
            if r_span < d_span {
                break;
            }
            let r_max = rem.max_exp().unwrap();
            let c = rem.coeff(r_max) / &d_lead;
            let shift = r_max - d_max;
            q.add_term(shift, c.clone());
            let m = Self::monomial(shift, c);
            rem = rem.sub(&m.mul(d));
        }
        (q, rem)
    }

    fn unit_and_canonical(&self) -> (Self, Self) {
        if self.is_zero() {
            return (Self::one(), Self::zero_poly());
        }
        let max = self.max_exp().unwrap();
        let min = self.min_exp().unwrap();
        let lead = self.coeff(max);
        // u_inv = lead^-1 * t^-min: canonical form is monic with min exp 0.
        let u_inv = Self::monomial(-min, <BigRational as One>::one() / lead);
        let canon = u_inv.mul(self);
        (u_inv, canon)
    }
}

impl ZLaurent {
    /// Positive polynomial normal form: multiply by +-t^k so the lowest
    /// exponent is 0 and the top coefficient is positive.
    pub fn normalized(&self) -> ZLaurent {
        if self.is_zero() {
            return self.clone();
        }
        let min = self.min_exp().unwrap();
        let mut p = self.shifted(-min);
        if p.coeff(p.max_exp().unwrap()).is_negative() {
            p = p.neg();
        }
        p
    }

    pub fn to_rational(&self) -> QLaurent {
        QLaurent::from_pairs(
            self.terms().map(|(e, c)| (*e, BigRational::from_integer(c.clone()))),
        )
    }
}

impl QLaurent {
    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms().all(|(_, c)| c.denom().is_one())
    }
}

impl<C: Ring + fmt::Display> fmt::Display for Laurent<C> {
    /// `exponent:coefficient` pairs, ascending, comma separated; `0` if zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> =
            self.coeffs.iter().map(|(e, c)| format!("{e}:{c}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl<C: Ring + fmt::Debug> fmt::Debug for Laurent<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent{:?}", self.coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zp(pairs: &[(i64, i64)]) -> ZLaurent {
        ZLaurent::from_pairs(pairs.iter().map(|&(e, c)| (e, BigInt::from(c))))
    }

    #[test]
    fn arithmetic() {
        let a = zp(&[(0, 1), (1, 1)]); // 1 + t
        let b = zp(&[(0, -1), (1, 1)]); // t - 1
        assert_eq!(a.mul(&b), zp(&[(0, -1), (2, 1)])); // t^2 - 1
        assert_eq!(a.add(&b), zp(&[(1, 2)]));
        assert_eq!(a.eval_one(), BigInt::from(2));
    }

    #[test]
    fn exact_division() {
        let a = zp(&[(0, -1), (2, 1)]); // t^2 - 1
        let b = zp(&[(0, 1), (1, 1)]); // 1 + t
        assert_eq!(a.exact_div(&b), Some(zp(&[(0, -1), (1, 1)])));
        let c = zp(&[(0, 1), (1, 1), (2, 1)]);
        assert_eq!(c.exact_div(&b), None);
    }

    #[test]
    fn normalization() {
        let p = zp(&[(-1, 1), (0, -1), (1, 1)]); // t^-1 - 1 + t
        assert_eq!(p.normalized(), zp(&[(0, 1), (1, -1), (2, 1)]));
        let q = zp(&[(3, -2), (5, -1)]);
        assert_eq!(q.normalized(), zp(&[(0, 2), (2, 1)]));
    }

    #[test]
    fn rational_div_rem() {
        let a = zp(&[(0, 1), (3, 1)]).to_rational(); // 1 + t^3
        let b = zp(&[(0, 1), (1, 1)]).to_rational(); // 1 + t
        let (q, r) = a.div_rem(&b);
        assert!(r.is_zero());
        assert_eq!(q, zp(&[(0, 1), (1, -1), (2, 1)]).to_rational());

        let a = zp(&[(0, 1), (2, 1)]).to_rational(); // 1 + t^2
        let (q2, r2) = a.div_rem(&b);
        assert_eq!(q2.mul(&b).add(&r2), a);
        assert!(r2.span().unwrap_or(0) < b.span().unwrap());
    }

    #[test]
    fn display_format() {
        let p = zp(&[(-1, 2), (0, -1), (2, 1)]);
        assert_eq!(p.to_string(), "-1:2,0:-1,2:1");
        assert_eq!(zp(&[]).to_string(), "0");
    }
}
