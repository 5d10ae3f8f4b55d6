//! Complex numbers over 256-bit MPFR floats.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::Float;

pub const PREC: u32 = 256;

pub fn fl(x: f64) -> Float {
    Float::with_val(PREC, x)
}

pub fn pi() -> Float {
    Float::with_val(PREC, Constant::Pi)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BigC {
    pub re: Float,
    pub im: Float,
}

impl BigC {
    pub fn new(re: Float, im: Float) -> Self {
        BigC { re, im }
    }

    pub fn from_f64(re: f64, im: f64) -> Self {
        BigC { re: fl(re), im: fl(im) }
    }

    pub fn real(x: Float) -> Self {
        BigC { re: x, im: fl(0.0) }
    }

    pub fn zero() -> Self {
        Self::from_f64(0.0, 0.0)
    }

    pub fn one() -> Self {
        Self::from_f64(1.0, 0.0)
    }

    pub fn i() -> Self {
        Self::from_f64(0.0, 1.0)
    }

    pub fn int(n: i64) -> Self {
        BigC::real(Float::with_val(PREC, n))
    }

    /// p/q computed at full precision.
    pub fn ratio(p: i64, q: i64) -> Self {
        BigC::real(Float::with_val(PREC, p) / Float::with_val(PREC, q))
    }

    pub fn conj(&self) -> Self {
        BigC { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> Float {
        self.re.clone() * &self.re + self.im.clone() * &self.im
    }

    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn recip(&self) -> Self {
        let d = self.norm_sqr();
        BigC { re: self.re.clone() / &d, im: -(self.im.clone() / &d) }
    }

    pub fn exp(&self) -> Self {
        let m = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(PREC));
        BigC { re: m.clone() * c, im: m * s }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        BigC { re: self.abs().ln(), im: self.im.clone().atan2(&self.re) }
    }

    /// Principal power exp(s log z).
    pub fn pow(&self, s: &BigC) -> Self {
        if self.is_zero() {
            return if s.is_zero() { BigC::one() } else { BigC::zero() };
        }
        (self.ln() * s.clone()).exp()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = BigC::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    pub fn scale(&self, x: &Float) -> Self {
        BigC { re: self.re.clone() * x, im: self.im.clone() * x }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

/// |a - b| / max(|b|, floor): relative error with an absolute floor.
pub fn rel_err(a: &BigC, b: &BigC, floor: &Float) -> Float {
    let d = (a.clone() - b.clone()).abs();
    let s = b.abs();
    let den = if s > *floor { s } else { floor.clone() };
    d / den
}

impl fmt::Display for BigC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        write!(f, "{re:.15e}{im:+.15e}i")
    }
}

impl Add for BigC {
    type Output = BigC;
    fn add(self, o: BigC) -> BigC {
        BigC { re: self.re + o.re, im: self.im + o.im }
    }
}

impl Sub for BigC {
    type Output = BigC;
    fn sub(self, o: BigC) -> BigC {
        BigC { re: self.re - o.re, im: self.im - o.im }
    }
}

impl Mul for BigC {
    type Output = BigC;
    fn mul(self, o: BigC) -> BigC {
        let re = self.re.clone() * &o.re - self.im.clone() * &o.im;
        let im = self.re * &o.im + self.im * &o.re;
        BigC { re, im }
    }
}

impl Div for BigC {
    type Output = BigC;
    fn div(self, o: BigC) -> BigC {
        self * o.recip()
    }
}

impl Neg for BigC {
    type Output = BigC;
    fn neg(self) -> BigC {
        BigC { re: -self.re, im: -self.im }
    }
}

impl<'a> Add<&'a BigC> for &'a BigC {
    type Output = BigC;
    fn add(self, o: &BigC) -> BigC {
        self.clone() + o.clone()
    }
}

impl<'a> Sub<&'a BigC> for &'a BigC {
    type Output = BigC;
    fn sub(self, o: &BigC) -> BigC {
        self.clone() - o.clone()
    }
}

impl<'a> Mul<&'a BigC> for &'a BigC {
    type Output = BigC;
    fn mul(self, o: &BigC) -> BigC {
        self.clone() * o.clone()
    }
}

impl std::iter::Sum for BigC {
    fn sum<I: Iterator<Item = BigC>>(iter: I) -> BigC {
        iter.fold(BigC::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigC, b: &BigC) -> bool {
        rel_err(a, b, &fl(1e-300)) < fl(1e-70)
    }

    #[test]
    fn exp_log_round_trip() {
        let z = BigC::from_f64(0.3, -1.7);
        assert!(close(&z.ln().exp(), &z));
        assert!(close(&(BigC::i() * BigC::real(pi())).exp(), &BigC::int(-1)));
    }

    #[test]
    fn pow_and_recip() {
        let z = BigC::from_f64(2.0, 1.0);
        assert!(close(&z.pow(&BigC::int(3)), &z.powi(3)));
        assert!(close(&(z.clone() * z.recip()), &BigC::one()));
        let h = z.pow(&BigC::ratio(1, 2));
        assert!(close(&(h.clone() * h), &z));
    }
}
