//! Minimal ring abstractions: enough for exact matrix algebra over the
//! integers and over the rational Laurent ring used by the Fox-calculus
//! module, without pulling in a full algebra framework.

use std::fmt::Debug;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

pub trait Ring: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
}

/// Integral domain with decidable exact division.
pub trait Domain: Ring {
    /// `self / d` when the division is exact, else `None`.
    fn exact_div(&self, d: &Self) -> Option<Self>;
}

/// Euclidean domain, as needed by Smith normal form: a size function and
/// division with remainder strictly smaller in size.
pub trait EuclideanRing: Domain {
    /// Euclidean size of a nonzero element; `None` for zero.
    fn norm(&self) -> Option<BigUint>;
    /// `(q, r)` with `self = q*d + r` and `norm(r) < norm(d)` (or `r = 0`).
    fn div_rem(&self, d: &Self) -> (Self, Self);
    /// `(u_inv, c)` with `c = u_inv * self` the canonical associate of
    /// `self` and `u_inv` a unit.  For zero returns `(1, 0)`.
    fn unit_and_canonical(&self) -> (Self, Self);
}

impl Ring for BigInt {
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

impl Domain for BigInt {
    fn exact_div(&self, d: &Self) -> Option<Self> {
        if Zero::is_zero(d) {
            return None;
        }
        let (q, r) = num_integer_div_rem(self, d);
        if Zero::is_zero(&r) {
            Some(q)
        } else {
            None
        }
    }
}

fn num_integer_div_rem(a: &BigInt, b: &BigInt) -> (BigInt, BigInt) {
    (a / b, a % b)
}

impl EuclideanRing for BigInt {
    fn norm(&self) -> Option<BigUint> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.abs().to_biguint().unwrap())
        }
    }
    fn div_rem(&self, d: &Self) -> (Self, Self) {
        // Round-to-nearest keeps remainders small, which keeps SNF pivots tame.
        let (mut q, mut r) = num_integer_div_rem(self, d);
        let two_r: BigInt = &r + &r;
        if two_r.abs() > d.abs() {
            if (r.sign() == Sign::Minus) == (d.sign() == Sign::Minus) {
                q += 1;
                r -= d;
            } else {
                q -= 1;
                r += d;
            }
        }
        (q, r)
    }
    fn unit_and_canonical(&self) -> (Self, Self) {
        if self.is_negative() {
            (BigInt::from(-1), -self)
        } else {
            (BigInt::from(1), self.clone())
        }
    }
}
