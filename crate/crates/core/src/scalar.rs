//! Exact scalar traits.
//!
//! Every kernel in this crate is written against [`Scalar`], an exact
//! integral domain where `a / b` is exact whenever `b` divides `a`. That is
//! all fraction-free elimination needs, so big integers and big rationals
//! both qualify. Operations that must divide arbitrarily (normalizing an
//! affine dependence, forming ratios of stress entries) ask for [`Field`].

use std::fmt::{Debug, Display};
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, Zero};

/// An exact integral domain with exact division on divisible operands.
///
/// The `*_ref` methods exist so that kernels can avoid cloning big numbers;
/// the defaults clone and fall back to the by-value operators.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + Num + Neg<Output = Self> + Signed + Send + Sync + 'static
{
    fn from_bigint(v: &BigInt) -> Self;

    fn from_i64(v: i64) -> Self {
        Self::from_bigint(&BigInt::from(v))
    }

    /// Lossless widening into the rationals.
    fn to_rational(&self) -> BigRational;

    fn add_ref(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    /// `self / rhs`, where the caller guarantees that `rhs` divides `self`.
    fn div_exact(&self, rhs: &Self) -> Self {
        self.clone() / rhs.clone()
    }

    /// `(a * b - c * d) / e`, the fraction-free elimination update.
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Self {
        let num = if c.is_zero() || d.is_zero() {
            a.mul_ref(b)
        } else {
            a.mul_ref(b).sub_ref(&c.mul_ref(d))
        };
        if e.is_one() {
            num
        } else {
            num.div_exact(e)
        }
    }

    /// Rescale a vector by a nonzero scalar so that its entries are as small
    /// as the representation allows. The span of the vector is unchanged.
    fn reduce_vector(_v: &mut [Self]) {}
}

/// An exact field.
pub trait Field: Scalar {}

impl Scalar for BigInt {
    fn from_bigint(v: &BigInt) -> Self {
        v.clone()
    }

    fn to_rational(&self) -> BigRational {
        BigRational::from_integer(self.clone())
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div_exact(&self, rhs: &Self) -> Self {
        let (q, r) = self.div_rem(rhs);
        debug_assert!(r.is_zero(), "inexact division {self} / {rhs}");
        q
    }

    fn reduce_vector(v: &mut [Self]) {
        let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        if g.is_zero() {
            return;
        }
        let first_sign_negative = v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative());
        let g = if first_sign_negative { -g } else { g };
        if !g.is_one() {
            for x in v.iter_mut() {
                *x = &*x / &g;
            }
        }
    }
}

impl Scalar for BigRational {
    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn to_rational(&self) -> BigRational {
        self.clone()
    }

    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn div_exact(&self, rhs: &Self) -> Self {
        self / rhs
    }

    /// Clears denominators and removes the common content, leaving a
    /// primitive integer vector whose first nonzero entry is positive.
    fn reduce_vector(v: &mut [Self]) {
        let lcm = v
            .iter()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut ints: Vec<BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
        BigInt::reduce_vector(&mut ints);
        for (x, i) in v.iter_mut().zip(ints) {
            *x = BigRational::from_integer(i);
        }
    }
}

impl Field for BigRational {}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn cross_div_matches_closed_form() {
        let (a, b, c, d, e) = (BigInt::from(6), BigInt::from(5), BigInt::from(2), BigInt::from(3), BigInt::from(4));
        assert_eq!(BigInt::cross_div(&a, &b, &c, &d, &e), BigInt::from(6));
    }

    #[test]
    fn reduce_integer_vector() {
        let mut v: Vec<BigInt> = [-4, 0, 6, 10].iter().map(|&x| BigInt::from(x)).collect();
        BigInt::reduce_vector(&mut v);
        let want: Vec<BigInt> = [2, 0, -3, -5].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(v, want);
    }

    #[test]
    fn reduce_rational_vector() {
        let mut v = vec![q(1, 2), q(-1, 3), q(0, 1)];
        BigRational::reduce_vector(&mut v);
        assert_eq!(v, vec![q(3, 1), q(-2, 1), q(0, 1)]);
    }
}
