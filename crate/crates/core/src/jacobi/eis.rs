//! Jacobi Eisenstein series E_{k,m} and the Fourier-Jacobi coefficients e_{k,m}
//! of the degree-two Siegel Eisenstein series.

use std::collections::HashMap;
use std::sync::Mutex;

use num_traits::Zero;

use super::JacExp;
use crate::arith::{c_k, cohen_h, g_k, moebius, ratio, square_divisors, square_part_root, Rat};
use crate::error::{Error, Result};
use crate::hecke::{apply_u, apply_v_prec};

fn check_weight(k: u32) -> Result<()> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidParam(format!("Eisenstein series need even k >= 4, got {k}")));
    }
    Ok(())
}

/// E_{k,1}: c(n, r) = H(k-1, 4n - r^2) / H(k-1, 0).
pub fn jac_eis_1(k: u32, prec: u64) -> Result<JacExp> {
    check_weight(k)?;
    let h0 = cohen_h(k - 1, 0);
    JacExp::from_class_fn(k as i64, 1, prec, |d, _| Ok(cohen_h(k - 1, d) / &h0))
}

/// epsilon_{m,s}(r) for m = a b^2, a squarefree: 1 or 1/2 when r = +-2abs mod 2m
/// (according as b | 2s or not), 0 otherwise.
pub fn eis_degenerate(_k: u32, m: u64, s: i64, r: i64) -> Rat {
    let b = square_part_root(m) as i64;
    let a = m as i64 / (b * b);
    let two_m = 2 * m as i64;
    let c = 2 * a * b * s;
    if (r - c).rem_euclid(two_m) == 0 || (r + c).rem_euclid(two_m) == 0 {
        if (2 * s).rem_euclid(b) == 0 {
            ratio(1, 1)
        } else {
            ratio(1, 2)
        }
    } else {
        Rat::zero()
    }
}

/// E_{k,1} together with the E_{k,m} and e_{k,m} derived from it, at a
/// common output precision, memoized per index.
pub struct EisensteinFamily {
    k: u32,
    prec: u64,
    e1: JacExp,
    e_cache: Mutex<HashMap<u64, JacExp>>,
    fj_cache: Mutex<HashMap<u64, JacExp>>,
}

impl EisensteinFamily {
    /// Supports every index up to `m_max` at output precision `prec`.
    pub fn new(k: u32, m_max: u64, prec: u64) -> Result<Self> {
        check_weight(k)?;
        if prec == 0 || m_max == 0 {
            return Err(Error::InvalidParam("prec and index must be >= 1".into()));
        }
        let e1 = jac_eis_1(k, m_max * (prec - 1) + 1)?;
        Ok(Self::from_e1(k, e1, prec))
    }

    pub fn from_e1(k: u32, e1: JacExp, prec: u64) -> Self {
        EisensteinFamily { k, prec, e1, e_cache: Mutex::new(HashMap::new()), fj_cache: Mutex::new(HashMap::new()) }
    }

    pub fn weight(&self) -> u32 {
        self.k
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn e1(&self) -> &JacExp {
        &self.e1
    }

    fn v_of_e1(&self, n: u64) -> Result<JacExp> {
        let v = apply_v_prec(&self.e1, n, self.prec)?;
        if v.prec() < self.prec {
            return Err(Error::Precision(format!(
                "E_{{k,1}} at prec {} gives V_{n} only to prec {} < {}",
                self.e1.prec(),
                v.prec(),
                self.prec
            )));
        }
        Ok(v)
    }

    /// E_{k,m} = g_k(m)^{-1} sum_{t^2 | m} mu(t) E_{k,1}|V_{m/t^2}|U_t.
    pub fn e_km(&self, m: u64) -> Result<JacExp> {
        if let Some(e) = self.e_cache.lock().unwrap().get(&m) {
            return Ok(e.clone());
        }
        let mut acc = JacExp::zero(self.k as i64, m, self.prec)?;
        for t in square_divisors(m) {
            let mu = moebius(t);
            if mu == 0 {
                continue;
            }
            let term = apply_u(&self.v_of_e1(m / (t * t))?, t)?;
            acc = acc.add_scaled(&Rat::from_integer(mu.into()), &term)?;
        }
        let e = acc.scale(&g_k(self.k, m).recip());
        self.e_cache.lock().unwrap().insert(m, e.clone());
        Ok(e)
    }

    /// e_{k,m} = c_k sum_{d^2 | m} g_k(m/d^2) E_{k,m/d^2}|U_d.
    pub fn siegel_fj(&self, m: u64) -> Result<JacExp> {
        if let Some(e) = self.fj_cache.lock().unwrap().get(&m) {
            return Ok(e.clone());
        }
        let mut acc = JacExp::zero(self.k as i64, m, self.prec)?;
        for d in square_divisors(m) {
            let q = m / (d * d);
            let term = apply_u(&self.e_km(q)?, d)?;
            acc = acc.add_scaled(&g_k(self.k, q), &term)?;
        }
        let e = acc.scale(&c_k(self.k));
        self.fj_cache.lock().unwrap().insert(m, e.clone());
        Ok(e)
    }

    /// c_k E_{k,1}|V_m.
    pub fn siegel_fj_maass(&self, m: u64) -> Result<JacExp> {
        Ok(self.v_of_e1(m)?.scale(&c_k(self.k)))
    }
}

pub fn jac_eis_m(k: u32, m: u64, prec: u64) -> Result<JacExp> {
    EisensteinFamily::new(k, m, prec)?.e_km(m)
}

pub fn siegel_fj(k: u32, m: u64, prec: u64) -> Result<JacExp> {
    EisensteinFamily::new(k, m, prec)?.siegel_fj(m)
}

pub fn siegel_fj_maass(k: u32, m: u64, prec: u64) -> Result<JacExp> {
    EisensteinFamily::new(k, m, prec)?.siegel_fj_maass(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{big, cohen_h, rat, sigma_pow, zeta_neg};

    #[test]
    fn e41_coefficients() {
        let e = jac_eis_1(4, 5).unwrap();
        assert_eq!(e.coeff(0, 0).unwrap(), rat(1));
        assert_eq!(e.coeff(1, 2).unwrap(), rat(1));
        assert_eq!(e.coeff(1, 0).unwrap(), cohen_h(3, 4) / zeta_neg(6));
        assert_eq!(e.coeff(1, 0).unwrap(), rat(126));
        assert_eq!(e.coeff(1, 1).unwrap(), rat(56));
        assert_eq!(e.coeff(2, 0).unwrap(), rat(756));
        assert!(!e.is_cuspidal());
    }

    #[test]
    fn degenerate_profile_values() {
        assert_eq!(eis_degenerate(12, 4, 1, 4), rat(1));
        assert_eq!(eis_degenerate(12, 9, 1, 6), ratio(1, 2));
        assert_eq!(eis_degenerate(12, 5, 0, 1), rat(0));
        assert_eq!(eis_degenerate(12, 5, 0, 10), rat(1));
    }

    #[test]
    fn e_km_small() {
        assert_eq!(jac_eis_m(12, 1, 5).unwrap(), jac_eis_1(12, 5).unwrap());
        let e = jac_eis_m(8, 3, 4).unwrap();
        assert_eq!(e.coeff(0, 0).unwrap(), rat(1));
        assert_eq!(g_k(8, 3), big(sigma_pow(7, 3)));
        let e = jac_eis_m(12, 4, 3).unwrap();
        assert_eq!(e.degenerate(0).unwrap(), rat(1));
        assert_eq!(e.degenerate(4).unwrap(), rat(0));
    }

    #[test]
    fn siegel_normalization() {
        let fam = EisensteinFamily::new(4, 6, 4).unwrap();
        assert_eq!(fam.siegel_fj(1).unwrap(), fam.e1().truncate(4).scale(&c_k(4)));
        for m in 1..=6 {
            assert_eq!(fam.siegel_fj(m).unwrap(), fam.siegel_fj_maass(m).unwrap(), "m={m}");
        }
        // E8 count of vector pairs with norms 1, 1 and inner product 1
        assert_eq!(fam.siegel_fj(1).unwrap().coeff(1, 1).unwrap(), rat(13440));
    }
}
