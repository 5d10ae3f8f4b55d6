//! Coefficient-level check of the Dirichlet series factorization
//! zeta(2s-2k+4) sum_N lambda_N N^{-s} = zeta(s) zeta(s-k+1) zeta(s-k+2) zeta(s-2k+3).

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::{dirichlet_mul, ArithSeq};
use crate::arith::{big, divisors, fmt_rat, pow_big, psi, sigma_pow, Rat};
use crate::error::{Error, Result};
use crate::hecke::{apply_v_prec, apply_v_star, VStarVariant};
use crate::jacobi::jac_eis_1;

/// lambda_N = sum_{t | N} psi(t) t^{k-2} sigma_{2k-3}(N/t).
pub fn vnstar_vn_eigen(k: u32, n: u64) -> Rat {
    lambda_with(k, n, k - 2)
}

/// The same sum with the power of t replaced by `t_exp` (a mutation control).
pub fn lambda_with(k: u32, n: u64, t_exp: u32) -> Rat {
    let mut s = num_bigint::BigInt::zero();
    for t in divisors(n) {
        s += psi(t) * pow_big(t as i64, t_exp) * sigma_pow(2 * k - 3, n / t);
    }
    big(s)
}

fn check_k(k: u32) -> Result<()> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidParam(format!("even k >= 4 required, got {k}")));
    }
    Ok(())
}

/// Eigenvalue of V*_N V_N on E_{k,1} from the composed operators: the
/// ratio (V*_N V_N E_{k,1}) / E_{k,1}, or None if the result is not proportional.
pub fn composed_eigen(k: u32, n: u64) -> Result<Option<Rat>> {
    check_k(k)?;
    let prec = 8;
    let e1 = jac_eis_1(k, n * (prec + n) + 2)?;
    let v = apply_v_prec(&e1, n, prec + n)?;
    let w = apply_v_star(&v, n, VStarVariant::Disambiguated)?;
    if w.prec() == 0 {
        return Err(Error::Precision(format!("V*_{n} V_{n} E_{{{k},1}} has no stored coefficients")));
    }
    Ok(w.ratio_to(&e1.truncate(w.prec())))
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    pub k: u32,
    pub n_max: u64,
    pub passed: bool,
    pub first_mismatch: Option<u64>,
    pub lhs: Option<String>,
    pub rhs: Option<String>,
}

impl IdentityReport {
    fn from(name: &str, k: u32, lhs: &ArithSeq, rhs: &ArithSeq) -> Self {
        let mm = lhs.first_mismatch(rhs);
        IdentityReport {
            name: name.into(),
            k,
            n_max: lhs.len() as u64,
            passed: mm.is_none(),
            first_mismatch: mm,
            lhs: mm.map(|n| fmt_rat(lhs.get(n))),
            rhs: mm.map(|n| fmt_rat(rhs.get(n))),
        }
    }
}

fn lambda_seq(n_max: usize, f: impl Fn(u64) -> Rat + Sync) -> ArithSeq {
    let vals: Vec<Rat> = (1..=n_max as u64).into_par_iter().map(&f).collect();
    ArithSeq::new(vals).expect("non-empty")
}

fn four_zetas(k: u32, n: usize) -> Result<ArithSeq> {
    let mut acc = ArithSeq::ones(n);
    for a in [k - 1, k - 2, 2 * k - 3] {
        acc = dirichlet_mul(&acc, &ArithSeq::zeta_shift(n, a))?;
    }
    Ok(acc)
}

fn check_range(k: u32, n_max: u64) -> Result<usize> {
    check_k(k)?;
    if n_max == 0 {
        return Err(Error::InvalidParam("N_max must be >= 1".into()));
    }
    Ok(n_max as usize)
}

pub fn verify_z_identity(k: u32, n_max: u64) -> Result<IdentityReport> {
    verify_z_identity_with(k, n_max, |n| vnstar_vn_eigen(k, n))
}

/// The identity with lambda_N supplied by the caller.
pub fn verify_z_identity_with(k: u32, n_max: u64, lambda: impl Fn(u64) -> Rat + Sync) -> Result<IdentityReport> {
    let n = check_range(k, n_max)?;
    let lhs = dirichlet_mul(&ArithSeq::zeta_double_shift(n, 2 * k - 4), &lambda_seq(n, lambda))?;
    let rhs = four_zetas(k, n)?;
    Ok(IdentityReport::from("Z", k, &lhs, &rhs))
}

/// zeta(s) zeta(s-2k+3) zeta(s-k+1) zeta(s-k+2) against the product of the
/// streams sigma_{2k-3}(n) and n^{k-2} sigma_1(n).
pub fn zarkovskaya_factor(k: u32, n_max: u64) -> Result<IdentityReport> {
    let n = check_range(k, n_max)?;
    let lhs = four_zetas(k, n)?;
    let a = ArithSeq::from_fn(n, |j| big(sigma_pow(2 * k - 3, j)));
    let b = ArithSeq::from_fn(n, |j| big(pow_big(j as i64, k - 2) * sigma_pow(1, j)));
    let rhs = dirichlet_mul(&a, &b)?;
    Ok(IdentityReport::from("Zarkovskaya", k, &lhs, &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{gcd, rat};

    #[test]
    fn small_values() {
        assert_eq!(vnstar_vn_eigen(8, 1), rat(1));
        for p in [2u64, 3, 5, 7] {
            let want = big(sigma_pow(13, p)) + rat((p + 1) as i64) * big(pow_big(p as i64, 6));
            assert_eq!(vnstar_vn_eigen(8, p), want);
        }
        assert_eq!(vnstar_vn_eigen(8, 3), rat(1_597_240));
    }

    #[test]
    fn multiplicative() {
        for a in 1..=20u64 {
            for b in 1..=20u64 {
                if gcd(a as i64, b as i64) == 1 {
                    assert_eq!(vnstar_vn_eigen(10, a * b), vnstar_vn_eigen(10, a) * vnstar_vn_eigen(10, b));
                }
            }
        }
    }

    #[test]
    fn composed_matches() {
        for n in 1..=4 {
            assert_eq!(composed_eigen(8, n).unwrap(), Some(vnstar_vn_eigen(8, n)), "N = {n}");
        }
    }

    #[test]
    fn identities() {
        assert!(verify_z_identity(8, 120).unwrap().passed);
        assert!(zarkovskaya_factor(8, 120).unwrap().passed);
        let bad = verify_z_identity_with(8, 120, |n| lambda_with(8, n, 7)).unwrap();
        assert_eq!(bad.first_mismatch, Some(2));
    }

    #[test]
    fn prime_coefficient() {
        let k = 8;
        let z = four_zetas(k, 30).unwrap();
        for p in [2i64, 3, 5, 7, 11, 13] {
            let want = 1 + p.pow(k - 1) + p.pow(k - 2) + p.pow(2 * k - 3);
            assert_eq!(z.get(p as u64), &rat(want));
        }
    }
}
