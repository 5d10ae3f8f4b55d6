//! Eisenstein part E_{k,m}(f) of the Fourier-Jacobi coefficients of the
//! Klingen Eisenstein series attached to a cusp form f, by three routes.

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{c_k, divisors, moebius, rat, square_divisors, square_part_root, Rat};
use crate::error::{Error, Result};
use crate::hecke::apply_u;
use crate::jacobi::{eis_degenerate, EisensteinFamily, JacExp};
use crate::lattice::siegel::SiegelCoeffs;
use crate::lattice::BinQF;
use crate::qexp::{alpha_m, g_f, QExp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    E2e,
    Ekmfor,
    E2E,
}

impl Route {
    pub const ALL: [Route; 3] = [Route::E2e, Route::Ekmfor, Route::E2E];

    pub fn tag(&self) -> &'static str {
        match self {
            Route::E2e => "E2e",
            Route::Ekmfor => "ekmfor",
            Route::E2E => "e2E",
        }
    }
}

fn check_f(f: &QExp, fam: &EisensteinFamily, m: u64) -> Result<()> {
    if f.weight() != fam.weight() as i64 {
        return Err(Error::InvalidParam(format!("weight {} != {}", f.weight(), fam.weight())));
    }
    if !f.is_cuspidal() {
        return Err(Error::InvalidParam("f must be a cusp form".into()));
    }
    if m == 0 {
        return Err(Error::InvalidParam("index must be >= 1".into()));
    }
    if (f.prec() as u64) <= m {
        return Err(Error::Precision(format!("f known to q^{} but index {m} needs more", f.prec())));
    }
    Ok(())
}

/// sum_{t^2 | m} g_f(m/t^2) E_{k,m/t^2} | U_t.
pub fn script_e_via_e2e_with(fam: &EisensteinFamily, f: &QExp, m: u64) -> Result<JacExp> {
    check_f(f, fam, m)?;
    let mut acc = JacExp::zero(fam.weight() as i64, m, fam.prec())?;
    for t in square_divisors(m) {
        let q = m / (t * t);
        let c = g_f(f, q)?;
        if c.is_zero() {
            continue;
        }
        acc = acc.add_scaled(&c, &apply_u(&fam.e_km(q)?, t)?)?;
    }
    Ok(acc)
}

/// With m = a b^2 (a squarefree):
/// sum_{lambda | b} a_f(a lambda^2) sum_{d lambda | b} mu(d) E_{k, a lambda^2 d^2} | U_{b/(lambda d)}.
pub fn script_e_via_ekmfor_with(fam: &EisensteinFamily, f: &QExp, m: u64) -> Result<JacExp> {
    check_f(f, fam, m)?;
    let b = square_part_root(m);
    let a = m / (b * b);
    let mut acc = JacExp::zero(fam.weight() as i64, m, fam.prec())?;
    for lam in divisors(b) {
        let af = f.coeff(a * lam * lam)?.clone();
        if af.is_zero() {
            continue;
        }
        for d in divisors(b / lam) {
            let mu = moebius(d);
            if mu == 0 {
                continue;
            }
            let term = apply_u(&fam.e_km(a * lam * lam * d * d)?, b / (lam * d))?;
            acc = acc.add_scaled(&(&af * rat(mu as i64)), &term)?;
        }
    }
    Ok(acc)
}

/// c_k^{-1} sum_{t^2 | m} alpha_m(t; f) e_{k,m/t^2} | U_t.
pub fn script_e_via_e2_big_e_with(fam: &EisensteinFamily, f: &QExp, m: u64) -> Result<JacExp> {
    check_f(f, fam, m)?;
    let k = fam.weight();
    let mut acc = JacExp::zero(k as i64, m, fam.prec())?;
    for t in square_divisors(m) {
        let c = alpha_m(f, k, m, t)?;
        if c.is_zero() {
            continue;
        }
        acc = acc.add_scaled(&c, &apply_u(&fam.siegel_fj(m / (t * t))?, t)?)?;
    }
    Ok(acc.scale(&c_k(k).recip()))
}

pub fn script_e_with(fam: &EisensteinFamily, route: Route, f: &QExp, m: u64) -> Result<JacExp> {
    match route {
        Route::E2e => script_e_via_e2e_with(fam, f, m),
        Route::Ekmfor => script_e_via_ekmfor_with(fam, f, m),
        Route::E2E => script_e_via_e2_big_e_with(fam, f, m),
    }
}

fn family_for(f: &QExp, m: u64, prec: u64) -> Result<EisensteinFamily> {
    if f.weight() < 4 {
        return Err(Error::InvalidParam(format!("weight {} too small", f.weight())));
    }
    EisensteinFamily::new(f.weight() as u32, m, prec)
}

pub fn script_e_via_e2e(f: &QExp, m: u64, prec: u64) -> Result<JacExp> {
    script_e_via_e2e_with(&family_for(f, m, prec)?, f, m)
}

pub fn script_e_via_ekmfor(f: &QExp, m: u64, prec: u64) -> Result<JacExp> {
    script_e_via_ekmfor_with(&family_for(f, m, prec)?, f, m)
}

pub fn script_e_via_e2_big_e(f: &QExp, m: u64, prec: u64) -> Result<JacExp> {
    script_e_via_e2_big_e_with(&family_for(f, m, prec)?, f, m)
}

/// Degenerate value sum_{1 <= s <= b} a_f(a (s,b)^2) eps_{m,s}(r), m = a b^2.
pub fn script_e_degenerate(f: &QExp, m: u64, r: i64) -> Result<Rat> {
    let b = square_part_root(m);
    let a = m / (b * b);
    let k = f.weight() as u32;
    let mut s_total = Rat::zero();
    for s in 1..=b {
        let g = crate::arith::gcd(s as i64, b as i64) as u64;
        let eps = eis_degenerate(k, m, s as i64, r);
        if !eps.is_zero() {
            s_total += f.coeff(a * g * g)? * eps;
        }
    }
    Ok(s_total)
}

/// Degenerate value of E_{k,m} | U_l: sum_{1 <= s <= b l, b | s} eps_{m l^2, s}(r).
pub fn eis_u_degenerate(k: u32, m: u64, l: u64, r: i64) -> Rat {
    let b = square_part_root(m);
    let mut acc = Rat::zero();
    let mut s = b;
    while s <= b * l {
        acc += eis_degenerate(k, m * l * l, s as i64, r);
        s += b;
    }
    acc
}

/// c_k^{-1} sum_{t^2 | m, t | r} alpha_m(t; Phi F) a_2^k(n, r/t, m/t^2).
pub fn genasy_main_term_with(sc: &mut SiegelCoeffs, phi_f: &QExp, t: &BinQF) -> Result<Rat> {
    let k = sc.weight();
    if phi_f.weight() != k as i64 {
        return Err(Error::InvalidParam(format!("weight {} != {k}", phi_f.weight())));
    }
    if !t.is_positive_definite() {
        return Err(Error::InvalidParam(format!("{t:?} is not positive definite")));
    }
    let m = t.m as u64;
    if phi_f.prec() as u64 <= m {
        return Err(Error::Precision(format!("Phi F known to q^{} but m = {m}", phi_f.prec())));
    }
    let mut s = Rat::zero();
    for d in square_divisors(m) {
        let di = d as i64;
        if t.r % di != 0 {
            continue;
        }
        let a = alpha_m(phi_f, k, m, d)?;
        if a.is_zero() {
            continue;
        }
        s += a * sc.a2k(&BinQF::new(t.n, t.r / di, t.m / (di * di)))?;
    }
    Ok(s / c_k(k))
}

pub fn genasy_main_term(phi_f: &QExp, t: &BinQF, k: u32) -> Result<Rat> {
    let c = t.canonical()?;
    let mut sc = SiegelCoeffs::new(k, c.m.max(t.m).max(1) as u64, c.n.max(t.n) as u64 + 1)?;
    genasy_main_term_with(&mut sc, phi_f, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::fundamental_split;
    use crate::jacobi::jac_eis_1;
    use crate::lattice::{rep_number, LatticeGram};
    use crate::qexp::{delta_qexp, eisenstein_qexp};

    #[test]
    fn index_one_is_multiple_of_e1() {
        let d = delta_qexp(10).unwrap();
        let fam = EisensteinFamily::new(12, 4, 6).unwrap();
        let e1 = jac_eis_1(12, 6).unwrap();
        for route in Route::ALL {
            assert!(script_e_with(&fam, route, &d, 1).unwrap().agrees_with(&e1), "{route:?}");
        }
    }

    #[test]
    fn routes_agree_small() {
        let d = delta_qexp(20).unwrap();
        let fam = EisensteinFamily::new(12, 9, 6).unwrap();
        for m in [2u64, 4, 8, 9] {
            let a = script_e_via_e2e_with(&fam, &d, m).unwrap();
            let b = script_e_via_ekmfor_with(&fam, &d, m).unwrap();
            let c = script_e_via_e2_big_e_with(&fam, &d, m).unwrap();
            assert!(a.agrees_with(&b), "m = {m}");
            assert!(a.agrees_with(&c), "m = {m}");
            a.check_invariants().unwrap();
        }
    }

    #[test]
    fn squarefree_index() {
        let d = delta_qexp(10).unwrap();
        let fam = EisensteinFamily::new(12, 6, 5).unwrap();
        let e = script_e_via_ekmfor_with(&fam, &d, 6).unwrap();
        assert!(e.agrees_with(&fam.e_km(6).unwrap().scale(d.coeff(6).unwrap())));
    }

    #[test]
    fn degenerate_law() {
        let d = delta_qexp(20).unwrap();
        let fam = EisensteinFamily::new(12, 12, 4).unwrap();
        for m in [4u64, 8, 9, 12] {
            let e = script_e_via_e2e_with(&fam, &d, m).unwrap();
            for r in 0..2 * m as i64 {
                if (r * r) % (4 * m as i64) == 0 {
                    assert_eq!(e.degenerate(r).unwrap(), script_e_degenerate(&d, m, r).unwrap(), "m={m} r={r}");
                }
            }
        }
        assert_eq!(fundamental_split(-3), (-3, 1));
    }

    #[test]
    fn u_degenerate_law() {
        let fam = EisensteinFamily::new(4, 6, 26).unwrap();
        for m in 1..=6u64 {
            for l in 1..=4u64 {
                let e = apply_u(&fam.e_km(m).unwrap(), l).unwrap();
                let idx = (m * l * l) as i64;
                for r in 0..2 * idx {
                    if (r * r) % (4 * idx) == 0 {
                        assert_eq!(e.degenerate(r).unwrap(), eis_u_degenerate(4, m, l, r), "m={m} l={l} r={r}");
                    }
                }
            }
        }
    }

    #[test]
    fn genasy_weight4() {
        let e4 = eisenstein_qexp(4, 10).unwrap();
        let e8 = LatticeGram::e8();
        let t = BinQF::new(1, 1, 1);
        assert_eq!(genasy_main_term(&e4, &t, 4).unwrap(), crate::lattice::siegel::a2k(&t, 4).unwrap());
        for t in [BinQF::new(2, 2, 2), BinQF::new(4, 0, 4), BinQF::new(3, 1, 2)] {
            assert_eq!(genasy_main_term(&e4, &t, 4).unwrap(), rat(rep_number(&e8, t) as i64), "{t:?}");
        }
    }

    #[test]
    fn zero_f() {
        let z = QExp::new(12, vec![Rat::zero(); 10], true).unwrap();
        assert!(script_e_via_e2_big_e(&z, 4, 4).unwrap().is_zero());
        assert!(script_e_via_e2e(&eisenstein_qexp(12, 10).unwrap(), 2, 3).is_err());
    }
}
