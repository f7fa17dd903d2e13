//! Complex numbers with exact real and imaginary parts.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::scalar::Scalar;

/// `re + im·i` over an exact field. With `BigRational` parts this is the
/// field of Gaussian rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gaussian<T> {
    pub re: T,
    pub im: T,
}

impl<T: Scalar> Gaussian<T> {
    pub fn new(re: T, im: T) -> Self {
        Gaussian { re, im }
    }

    pub fn real(re: T) -> Self {
        Gaussian { re, im: T::zero() }
    }

    pub fn from_int(v: i64) -> Self {
        Self::real(T::from_int(v))
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Gaussian { re: T::from_int(re), im: T::from_int(im) }
    }

    /// `p/q` as a real Gaussian number. Panics on `q == 0`.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::real(T::from_int(p) / T::from_int(q))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Gaussian { re: T::zero(), im: T::one() }
    }

    pub fn conj(&self) -> Self {
        Gaussian { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// `|z|²`, always real.
    pub fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        let d = self.norm_sqr();
        if d.is_zero() {
            return None;
        }
        Some(Gaussian { re: self.re.clone() / d.clone(), im: -self.im.clone() / d })
    }

    pub fn scale(&self, s: &T) -> Self {
        Gaussian { re: self.re.clone() * s.clone(), im: self.im.clone() * s.clone() }
    }

    /// Formats in the text grammar: a bare rational when real, otherwise
    /// `(re+imi)` / `(re-imi)`.
    pub fn to_grammar(&self) -> String {
        if self.im.is_zero() {
            format!("{}", self.re)
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            format!("({}{}{}i)", self.re, sign, self.im.abs())
        }
    }
}

impl<T: Scalar> fmt::Display for Gaussian<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_grammar())
    }
}

impl<T: Scalar> Zero for Gaussian<T> {
    fn zero() -> Self {
        Gaussian { re: T::zero(), im: T::zero() }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<T: Scalar> One for Gaussian<T> {
    fn one() -> Self {
        Gaussian { re: T::one(), im: T::zero() }
    }
}

impl<'a, T: Scalar> Add<&'a Gaussian<T>> for &'a Gaussian<T> {
    type Output = Gaussian<T>;
    fn add(self, rhs: &'a Gaussian<T>) -> Gaussian<T> {
        Gaussian { re: self.re.clone() + rhs.re.clone(), im: self.im.clone() + rhs.im.clone() }
    }
}

impl<'a, T: Scalar> Sub<&'a Gaussian<T>> for &'a Gaussian<T> {
    type Output = Gaussian<T>;
    fn sub(self, rhs: &'a Gaussian<T>) -> Gaussian<T> {
        Gaussian { re: self.re.clone() - rhs.re.clone(), im: self.im.clone() - rhs.im.clone() }
    }
}

impl<'a, T: Scalar> Mul<&'a Gaussian<T>> for &'a Gaussian<T> {
    type Output = Gaussian<T>;
    fn mul(self, rhs: &'a Gaussian<T>) -> Gaussian<T> {
        // real operands are the common case in elimination
        if self.im.is_zero() && rhs.im.is_zero() {
            return Gaussian::real(self.re.clone() * rhs.re.clone());
        }
        Gaussian {
            re: self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            im: self.re.clone() * rhs.im.clone() + self.im.clone() * rhs.re.clone(),
        }
    }
}

impl<'a, T: Scalar> Div<&'a Gaussian<T>> for &'a Gaussian<T> {
    type Output = Gaussian<T>;
    fn div(self, rhs: &'a Gaussian<T>) -> Gaussian<T> {
        if rhs.im.is_zero() {
            assert!(!rhs.re.is_zero(), "division by zero");
            return Gaussian { re: self.re.clone() / rhs.re.clone(), im: self.im.clone() / rhs.re.clone() };
        }
        let inv = rhs.inv().expect("division by zero");
        self * &inv
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl<T: Scalar> $tr for Gaussian<T> {
            type Output = Gaussian<T>;
            fn $m(self, rhs: Gaussian<T>) -> Gaussian<T> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, T: Scalar> $tr<&'a Gaussian<T>> for Gaussian<T> {
            type Output = Gaussian<T>;
            fn $m(self, rhs: &'a Gaussian<T>) -> Gaussian<T> {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl<T: Scalar> Neg for Gaussian<T> {
    type Output = Gaussian<T>;
    fn neg(self) -> Gaussian<T> {
        Gaussian { re: -self.re, im: -self.im }
    }
}

impl<T: Scalar> Neg for &Gaussian<T> {
    type Output = Gaussian<T>;
    fn neg(self) -> Gaussian<T> {
        Gaussian { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl<T: Scalar> AddAssign<&Gaussian<T>> for Gaussian<T> {
    fn add_assign(&mut self, rhs: &Gaussian<T>) {
        self.re = self.re.clone() + rhs.re.clone();
        self.im = self.im.clone() + rhs.im.clone();
    }
}

impl<T: Scalar> SubAssign<&Gaussian<T>> for Gaussian<T> {
    fn sub_assign(&mut self, rhs: &Gaussian<T>) {
        self.re = self.re.clone() - rhs.re.clone();
        self.im = self.im.clone() - rhs.im.clone();
    }
}
