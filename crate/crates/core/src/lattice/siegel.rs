//! Fourier coefficients a_2^k(T) of the degree-two Siegel Eisenstein series.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::binqf::{mat_det, BinQF, Mat2};
use crate::arith::{c_k, cohen_h, divisors, pow_rat, sigma_pow, Rat};
use crate::error::{Error, Result};
use crate::jacobi::EisensteinFamily;
use crate::jacobi::JacExp;

/// Representatives G = [[a, b], [0, d]], 0 <= b < d, of GL2(Z)\M2(Z) with
/// T[G^{-1}] half-integral. The identity is always first.
pub fn gl2_divisors(t: &BinQF) -> Vec<Mat2> {
    let det2 = t.det2();
    let mut out = vec![[[1, 0], [0, 1]]];
    if det2 <= 0 {
        return out;
    }
    let mut g = 1i64;
    while g * g <= det2 {
        if det2 % (g * g) == 0 {
            for a in 1..=g {
                if g % a != 0 {
                    continue;
                }
                let d = g / a;
                for b in 0..d {
                    let cand = [[a, b], [0, d]];
                    if g == 1 {
                        continue;
                    }
                    if try_quotient(t, &cand).is_some() {
                        out.push(cand);
                    }
                }
            }
        }
        g += 1;
    }
    out
}

fn try_quotient(t: &BinQF, g: &Mat2) -> Option<BinQF> {
    let det = mat_det(g);
    let adj = [[g[1][1], -g[0][1]], [-g[1][0], g[0][0]]];
    let u = t.transform(&adj);
    let dd = det * det;
    if u.n % dd == 0 && u.r % dd == 0 && u.m % dd == 0 {
        Some(BinQF::new(u.n / dd, u.r / dd, u.m / dd))
    } else {
        None
    }
}

/// T[G^{-1}] for a divisor G of T.
pub fn quotient(t: &BinQF, g: &Mat2) -> BinQF {
    try_quotient(t, g).expect("G is not a divisor of T")
}

/// Closed form for the Maass-lift coefficients:
/// a(T) = c_k sum_{d | c(T)} d^{k-1} H(k-1, det(2T)/d^2) / H(k-1, 0).
pub fn a2k_maass(t: &BinQF, k: u32) -> Result<Rat> {
    if !t.is_semidefinite() {
        return Err(Error::InvalidParam(format!("{t:?} is not positive semidefinite")));
    }
    let c = t.content();
    if c == 0 {
        return Ok(Rat::one());
    }
    let d2 = t.det2() as u64;
    let h0 = cohen_h(k - 1, 0);
    let mut s = Rat::zero();
    for d in divisors(c as u64) {
        s += pow_rat(d as i64, (k - 1) as i64) * cohen_h(k - 1, d2 / (d * d)) / &h0;
    }
    Ok(s * c_k(k))
}

/// a_2^k(T) read off the Fourier-Jacobi coefficients e_{k,m}, memoized.
pub struct SiegelCoeffs {
    k: u32,
    m_max: u64,
    prec: u64,
    fam: EisensteinFamily,
    fj: HashMap<u64, JacExp>,
    prim: HashMap<BinQF, Rat>,
}

impl SiegelCoeffs {
    /// Covers reduced T with m <= m_max and n < prec without rebuilding.
    pub fn new(k: u32, m_max: u64, prec: u64) -> Result<Self> {
        let fam = EisensteinFamily::new(k, m_max, prec)?;
        Ok(SiegelCoeffs { k, m_max, prec, fam, fj: HashMap::new(), prim: HashMap::new() })
    }

    pub fn weight(&self) -> u32 {
        self.k
    }

    pub fn family(&self) -> &EisensteinFamily {
        &self.fam
    }

    fn ensure(&mut self, m: u64, n: u64) -> Result<()> {
        if m > self.m_max || n >= self.prec {
            self.m_max = self.m_max.max(m);
            self.prec = self.prec.max(n + 1);
            self.fam = EisensteinFamily::new(self.k, self.m_max, self.prec)?;
            self.fj.clear();
        }
        Ok(())
    }

    fn fj(&mut self, m: u64) -> Result<&JacExp> {
        if !self.fj.contains_key(&m) {
            let e = self.fam.siegel_fj(m)?;
            self.fj.insert(m, e);
        }
        Ok(&self.fj[&m])
    }

    /// a_2^k(T); a class function of T, computed on the reduced representative.
    pub fn a2k(&mut self, t: &BinQF) -> Result<Rat> {
        let c = t.canonical()?;
        if c.det2() == 0 {
            if c.n == 0 {
                return Ok(Rat::one());
            }
            return Ok(c_k(self.k) * Rat::from_integer(sigma_pow(self.k - 1, c.n as u64)));
        }
        self.ensure(c.m as u64, c.n as u64)?;
        self.fj(c.m as u64)?.coeff(c.n, c.r)
    }

    /// Primitive part: a(T) = sum_G a*(T[G^{-1}]) over gl2_divisors.
    pub fn a2k_primitive(&mut self, t: &BinQF) -> Result<Rat> {
        let c = t.canonical()?;
        if let Some(v) = self.prim.get(&c) {
            return Ok(v.clone());
        }
        let mut v = self.a2k(&c)?;
        for g in gl2_divisors(&c).into_iter().skip(1) {
            v -= self.a2k_primitive(&quotient(&c, &g))?;
        }
        self.prim.insert(c, v.clone());
        Ok(v)
    }
}

pub fn a2k(t: &BinQF, k: u32) -> Result<Rat> {
    let c = t.canonical()?;
    SiegelCoeffs::new(k, c.m.max(1) as u64, c.n as u64 + 1)?.a2k(t)
}

pub fn a2k_primitive(t: &BinQF, k: u32) -> Result<Rat> {
    let c = t.canonical()?;
    SiegelCoeffs::new(k, c.m.max(1) as u64, c.n as u64 + 1)?.a2k_primitive(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{is_fundamental, rat};
    use crate::lattice::binqf::reduced_forms;

    #[test]
    fn divisors_basic() {
        // det(2T) = 23 squarefree
        assert_eq!(gl2_divisors(&BinQF::new(3, 1, 2)).len(), 1);
        let t = BinQF::new(2, 0, 2);
        let gs = gl2_divisors(&t);
        assert!(gs.iter().any(|g| mat_det(g) == 2));
        for g in &gs {
            let q = quotient(&t, g);
            assert_eq!(q.transform(g), t);
        }
    }

    #[test]
    fn weight4_values() {
        let mut sc = SiegelCoeffs::new(4, 2, 4).unwrap();
        assert_eq!(sc.a2k(&BinQF::new(1, 1, 1)).unwrap(), rat(13440));
        assert_eq!(sc.a2k(&BinQF::new(1, 0, 1)).unwrap(), rat(240 * 126));
        assert_eq!(sc.a2k(&BinQF::new(0, 0, 0)).unwrap(), rat(1));
        assert_eq!(sc.a2k(&BinQF::new(1, 0, 0)).unwrap(), rat(240));
    }

    #[test]
    fn matches_maass_and_inverts() {
        for k in [4u32, 6] {
            let mut sc = SiegelCoeffs::new(k, 5, 26).unwrap();
            for t in reduced_forms(100) {
                let a = sc.a2k(&t).unwrap();
                assert_eq!(a, a2k_maass(&t, k).unwrap(), "{t:?}");
                if is_fundamental(-t.det2()) {
                    assert_eq!(sc.a2k_primitive(&t).unwrap(), a);
                }
                let mut s = Rat::zero();
                for g in gl2_divisors(&t) {
                    s += sc.a2k_primitive(&quotient(&t, &g)).unwrap();
                }
                assert_eq!(s, a);
            }
        }
    }
}
