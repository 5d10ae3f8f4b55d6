use num_traits::{One, Zero};

use super::{big, moebius, pow_big, rat, Rat};
use crate::error::{Error, Result};

/// A finite arithmetic sequence a(1), ..., a(N).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArithSeq {
    values: Vec<Rat>,
}

impl ArithSeq {
    pub fn new(values: Vec<Rat>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParam("empty sequence".into()));
        }
        Ok(ArithSeq { values })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(u64) -> Rat) -> Self {
        assert!(n >= 1);
        ArithSeq { values: (1..=n as u64).map(&mut f).collect() }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// 1-based access.
    pub fn get(&self, n: u64) -> &Rat {
        &self.values[n as usize - 1]
    }

    pub fn values(&self) -> &[Rat] {
        &self.values
    }

    /// Dirichlet unit: 1 at n = 1, else 0.
    pub fn unit(n: usize) -> Self {
        Self::from_fn(n, |k| if k == 1 { Rat::one() } else { Rat::zero() })
    }

    pub fn ones(n: usize) -> Self {
        Self::from_fn(n, |_| Rat::one())
    }

    pub fn moebius(n: usize) -> Self {
        Self::from_fn(n, |k| rat(moebius(k) as i64))
    }

    /// Coefficients of zeta(s - a): n -> n^a.
    pub fn zeta_shift(n: usize, a: u32) -> Self {
        Self::from_fn(n, |k| big(pow_big(k as i64, a)))
    }

    /// Coefficients of zeta(2s - a): j^a at n = j^2, zero elsewhere.
    pub fn zeta_double_shift(n: usize, a: u32) -> Self {
        Self::from_fn(n, |k| {
            let j = (k as f64).sqrt().round() as u64;
            if j * j == k {
                big(pow_big(j as i64, a))
            } else {
                Rat::zero()
            }
        })
    }

    /// Coefficients of 1/zeta(2s): mu(j) at n = j^2.
    pub fn inv_zeta_double(n: usize) -> Self {
        Self::from_fn(n, |k| {
            let j = (k as f64).sqrt().round() as u64;
            if j * j == k {
                rat(moebius(j) as i64)
            } else {
                Rat::zero()
            }
        })
    }

    pub fn pointwise_mul(&self, other: &ArithSeq) -> Result<ArithSeq> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(ArithSeq { values: self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect() })
    }

    /// First index where the two sequences differ.
    pub fn first_mismatch(&self, other: &ArithSeq) -> Option<u64> {
        self.values
            .iter()
            .zip(&other.values)
            .position(|(a, b)| a != b)
            .map(|i| i as u64 + 1)
    }
}

/// (ab)(n) = sum_{d | n} a(d) b(n/d).
pub fn dirichlet_mul(a: &ArithSeq, b: &ArithSeq) -> Result<ArithSeq> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let n = a.len();
    let mut out = vec![Rat::zero(); n];
    for d in 1..=n {
        let ad = &a.values[d - 1];
        if ad.is_zero() {
            continue;
        }
        for q in 1..=n / d {
            let bq = &b.values[q - 1];
            if !bq.is_zero() {
                out[d * q - 1] += ad * bq;
            }
        }
    }
    Ok(ArithSeq { values: out })
}

pub fn dirichlet_inverse(a: &ArithSeq) -> Result<ArithSeq> {
    let a1 = a.get(1).clone();
    if a1.is_zero() {
        return Err(Error::InvalidParam("a(1) = 0 has no Dirichlet inverse".into()));
    }
    let n = a.len();
    let mut inv = vec![Rat::zero(); n];
    inv[0] = a1.recip();
    for k in 2..=n {
        let mut s = Rat::zero();
        for d in 2..=k {
            if k % d == 0 {
                s += &a.values[d - 1] * &inv[k / d - 1];
            }
        }
        inv[k - 1] = -s / &a1;
    }
    Ok(ArithSeq { values: inv })
}

/// psi(t), t <= N, from zeta(s-1) zeta(s) / zeta(2s).
pub fn psi_seq(n: usize) -> ArithSeq {
    let z1 = ArithSeq::zeta_shift(n, 1);
    let z0 = ArithSeq::ones(n);
    let inv = ArithSeq::inv_zeta_double(n);
    let t = dirichlet_mul(&z1, &z0).expect("equal lengths");
    dirichlet_mul(&t, &inv).expect("equal lengths")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_is_identity() {
        let a = ArithSeq::from_fn(30, |k| rat(k as i64 * k as i64 - 3));
        assert_eq!(dirichlet_mul(&ArithSeq::unit(30), &a).unwrap(), a);
    }

    #[test]
    fn divisor_count() {
        let t = dirichlet_mul(&ArithSeq::ones(12), &ArithSeq::ones(12)).unwrap();
        assert_eq!(t.get(6), &rat(4));
        assert_eq!(t.get(12), &rat(6));
    }

    #[test]
    fn moebius_inverts_ones() {
        let e = dirichlet_mul(&ArithSeq::moebius(100), &ArithSeq::ones(100)).unwrap();
        assert_eq!(e, ArithSeq::unit(100));
        assert_eq!(dirichlet_inverse(&ArithSeq::ones(100)).unwrap(), ArithSeq::moebius(100));
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            dirichlet_mul(&ArithSeq::ones(3), &ArithSeq::ones(4)),
            Err(Error::LengthMismatch(3, 4))
        ));
    }

    #[test]
    fn psi_small() {
        let p = psi_seq(10);
        assert_eq!(p.get(1), &rat(1));
        assert_eq!(p.get(4), &rat(6));
        assert_eq!(p.get(9), &rat(12));
        assert_eq!(p.get(6), &rat(12));
    }
}
