//! Index-changing Hecke operators U_l, V_N on Jacobi expansions and their adjoints.

mod chain;

use num_traits::Zero;

use crate::arith::{divisors, gcd, pow_big, ratio, big, Rat};
use crate::error::{Error, Result};
use crate::jacobi::JacExp;

pub use chain::{
    chain_expansions, chain_input_prec, closed_form_degenerate, degenerate_values, eigen_bound_scan, phi_chain_degenerate, ChainMethod,
    ChainParams, ChainReport, ScanEntry, ScanReport,
};

/// phi(tau, l z): index m l^2, c'(n, r) = c(n, r/l) when l | r.
pub fn apply_u(phi: &JacExp, l: u64) -> Result<JacExp> {
    if l == 0 {
        return Err(Error::InvalidParam("U_l needs l >= 1".into()));
    }
    if l == 1 {
        return Ok(phi.clone());
    }
    let li = l as i64;
    JacExp::from_fn(phi.weight(), phi.index() * l * l, phi.prec(), |n, r| {
        if r % li == 0 {
            phi.coeff(n, r / li)
        } else {
            Ok(Rat::zero())
        }
    })
}

/// Index-raising V_N: c'(n, r) = sum_{a | (n, r, N)} a^{k-1} c(nN/a^2, r/a).
/// The output precision is the largest one the input supports, capped at the
/// input's precision.
pub fn apply_v(phi: &JacExp, big_n: u64) -> Result<JacExp> {
    apply_v_prec(phi, big_n, phi.prec())
}

pub fn apply_v_prec(phi: &JacExp, big_n: u64, prec: u64) -> Result<JacExp> {
    if big_n == 0 {
        return Err(Error::InvalidParam("V_N needs N >= 1".into()));
    }
    if big_n == 1 {
        return Ok(phi.truncate(prec));
    }
    let k = phi.weight();
    if k < 1 {
        return Err(Error::InvalidParam(format!("V_N needs positive weight, got {k}")));
    }
    let nn = big_n as i64;
    let powers: Vec<(i64, Rat)> =
        divisors(big_n).into_iter().map(|a| (a as i64, big(pow_big(a as i64, (k - 1) as u32)))).collect();
    JacExp::from_fn_adaptive(k, phi.index() * big_n, prec, |n, r| {
        let g = gcd(gcd(n, r.abs()), nn);
        let mut s = Rat::zero();
        for (a, ak) in &powers {
            if g % a == 0 {
                s += ak * phi.coeff(n * nn / (a * a), r / a)?;
            }
        }
        Ok(s)
    })
}

/// Adjoint of U_l: from index m l^2 to index m,
/// c'(D, r) = l^{-1} sum_{r' mod 2ml, r' = r mod 2m} c(l^2 D, l r').
pub fn apply_u_star(psi: &JacExp, l: u64) -> Result<JacExp> {
    if l == 0 || psi.index() % (l * l) != 0 {
        return Err(Error::InvalidParam(format!("U*_{l} needs l^2 | index {}", psi.index())));
    }
    if l == 1 {
        return Ok(psi.clone());
    }
    let m = (psi.index() / (l * l)) as i64;
    let li = l as i64;
    let inv = ratio(1, li);
    JacExp::from_fn_adaptive(psi.weight(), m as u64, psi.prec(), |n, r| {
        let d = 4 * m * n - r * r;
        let mut s = Rat::zero();
        for j in 0..li {
            let rp = r + 2 * m * j;
            s += psi.class_coeff(li * li * d, li * rp)?;
        }
        Ok(s * &inv)
    })
}

/// Which reading of the V*_N formula to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VStarVariant {
    /// Interior coefficient c(N^2 D/d^2, N s/d), s^2 = -D mod 4d.
    Disambiguated,
    /// Interior coefficient c(N^2/d^2, N s/d) exactly as typeset; invalid slots read as 0.
    AsPrinted,
}

/// Adjoint of V_N: from index N to index 1,
/// c'(D) = sum_{d | N} d^{k-2} sum_{s mod 2d, s^2 = -D mod 4d} c(N^2 D/d^2, N s/d),
/// with D = 4n - r^2 >= 0 here.
pub fn apply_v_star(psi: &JacExp, big_n: u64, variant: VStarVariant) -> Result<JacExp> {
    if big_n == 0 || psi.index() != big_n {
        return Err(Error::InvalidParam(format!("V*_{big_n} needs an index-{big_n} input, got {}", psi.index())));
    }
    if big_n == 1 {
        return Ok(psi.clone());
    }
    let k = psi.weight();
    if k < 2 {
        return Err(Error::InvalidParam(format!("V*_N needs weight >= 2, got {k}")));
    }
    let nn = big_n as i64;
    let terms: Vec<(i64, Rat)> =
        divisors(big_n).into_iter().map(|d| (d as i64, big(pow_big(d as i64, (k - 2) as u32)))).collect();
    JacExp::from_fn_adaptive(k, 1, psi.prec(), |n, r| {
        let disc = 4 * n - r * r;
        let mut total = Rat::zero();
        for (d, dk) in &terms {
            let mut inner = Rat::zero();
            for s in 0..2 * d {
                if (s * s + disc) % (4 * d) != 0 {
                    continue;
                }
                let rs = nn * s / d;
                inner += match variant {
                    VStarVariant::Disambiguated => psi.class_coeff(nn * nn * disc / (d * d), rs)?,
                    VStarVariant::AsPrinted => psi.class_coeff_or_zero(nn * nn / (d * d), rs)?,
                };
            }
            total += dk * inner;
        }
        Ok(total)
    })
}
