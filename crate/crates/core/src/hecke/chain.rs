//! Degenerate coefficients of phi_1 = E_{k,1}|V_{q1}, phi_2 = phi_1|U_{l1},
//! phi_3 = phi_2|U*_{l2}, phi_4 = phi_3|V*_{q2}, where q1 l1^2 = q2 l2^2 = m.

use num_traits::Zero;
use serde::Serialize;

use super::{apply_u, apply_u_star, apply_v_prec, apply_v_star, VStarVariant};
use crate::arith::{big, divisors, fmt_rat, gcd, pow_big, rat, sigma_pow, to_f64, Rat};
use crate::error::{Error, Result};
use crate::jacobi::{jac_eis_1, JacExp};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChainParams {
    pub k: u32,
    pub q1: u64,
    pub l1: u64,
    pub q2: u64,
    pub l2: u64,
}

impl ChainParams {
    pub fn new(k: u32, q1: u64, l1: u64, q2: u64, l2: u64) -> Result<Self> {
        if q1 == 0 || l1 == 0 || q2 == 0 || l2 == 0 || q1 * l1 * l1 != q2 * l2 * l2 {
            return Err(Error::InvalidParam(format!(
                "need q1 l1^2 = q2 l2^2, got q1={q1} l1={l1} q2={q2} l2={l2}"
            )));
        }
        if k < 4 || k % 2 == 1 {
            return Err(Error::InvalidParam(format!("need even k >= 4, got {k}")));
        }
        Ok(ChainParams { k, q1, l1, q2, l2 })
    }

    pub fn m(&self) -> u64 {
        self.q1 * self.l1 * self.l1
    }

    /// All parameter sets for a given m.
    pub fn all_for(k: u32, m: u64) -> Vec<ChainParams> {
        let facts: Vec<(u64, u64)> = crate::arith::square_divisors(m).into_iter().map(|l| (m / (l * l), l)).collect();
        let mut out = Vec::new();
        for &(q1, l1) in &facts {
            for &(q2, l2) in &facts {
                out.push(ChainParams { k, q1, l1, q2, l2 });
            }
        }
        out
    }
}

/// E_{k,1} precision sufficient for phi_4 to reach `target` rows.
pub fn chain_input_prec(p: &ChainParams, target: u64) -> u64 {
    let p3 = p.q2 * (target.max(1) - 1) + p.q2 / 4 + 2;
    let p2 = p3 + p.m() / 4 + 2;
    p.q1 * (p2 - 1) + 1
}

/// The four expansions phi_1..phi_4 built from `e1` (an E_{k,1} expansion).
pub fn chain_expansions(p: &ChainParams, e1: &JacExp, target: u64) -> Result<[JacExp; 4]> {
    let p3 = p.q2 * (target.max(1) - 1) + p.q2 / 4 + 2;
    let p2 = p3 + p.m() / 4 + 2;
    let phi1 = apply_v_prec(e1, p.q1, p2)?;
    let phi2 = apply_u(&phi1, p.l1)?;
    let phi3 = apply_u_star(&phi2, p.l2)?;
    let phi4 = apply_v_star(&phi3, p.q2, VStarVariant::Disambiguated)?;
    if phi4.prec() < target {
        return Err(Error::Precision(format!("phi_4 reached prec {} < {target}", phi4.prec())));
    }
    Ok([phi1, phi2, phi3, phi4])
}

fn sigma_gcd(k: u32, a: i64, b: i64, c: i64) -> Rat {
    big(sigma_pow(k - 1, gcd(gcd(a.abs(), b.abs()), c.abs()) as u64))
}

fn closed_phi1(p: &ChainParams, r: i64) -> Rat {
    let q1 = p.q1 as i64;
    if r % 2 != 0 || (r * r) % (4 * q1) != 0 {
        return Rat::zero();
    }
    sigma_gcd(p.k, r * r / (4 * q1), r / 2, q1)
}

fn closed_phi2(p: &ChainParams, r: i64) -> Rat {
    let m = p.m() as i64;
    let l1 = p.l1 as i64;
    if r % (2 * l1) != 0 || (r * r) % (4 * m) != 0 {
        return Rat::zero();
    }
    sigma_gcd(p.k, r * r / (4 * m), r / (2 * l1), p.q1 as i64)
}

/// l2^{-1} sum over r' mod 2m with r' = l2 r mod 2m/l2 of the phi_2 value.
fn closed_phi3(p: &ChainParams, r: i64) -> Rat {
    let m = p.m() as i64;
    let l2 = p.l2 as i64;
    let step = 2 * m / l2;
    let base = (l2 * r).rem_euclid(step);
    let mut s = Rat::zero();
    let mut rp = base;
    while rp < 2 * m {
        s += closed_phi2(p, rp);
        rp += step;
    }
    s / rat(l2)
}

fn closed_phi4(p: &ChainParams) -> Rat {
    let q2 = p.q2 as i64;
    let mut total = Rat::zero();
    for x in divisors(p.q2) {
        let x = x as i64;
        let mut inner = Rat::zero();
        for s in 0..2 * x {
            if (s * s) % (4 * x) == 0 {
                inner += closed_phi3(p, q2 * s / x);
            }
        }
        total += big(pow_big(x, p.k - 2)) * inner;
    }
    total
}

/// Closed-form degenerate values of phi_1..phi_4 at residue r.
pub fn closed_form_degenerate(p: &ChainParams, r: i64) -> [Rat; 4] {
    [closed_phi1(p, r), closed_phi2(p, r), closed_phi3(p, r), closed_phi4(p)]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainReport {
    pub composed: [Rat; 4],
    pub closed: [Rat; 4],
}

impl ChainReport {
    pub fn agrees(&self) -> bool {
        self.composed == self.closed
    }
}

/// Degenerate values by composing the operators on E_{k,1} and by the closed forms.
pub fn phi_chain_degenerate(k: u32, q1: u64, l1: u64, q2: u64, l2: u64, r: i64) -> Result<ChainReport> {
    let p = ChainParams::new(k, q1, l1, q2, l2)?;
    let e1 = jac_eis_1(k, chain_input_prec(&p, 1))?;
    let phis = chain_expansions(&p, &e1, 1)?;
    Ok(ChainReport { composed: degenerate_values(&phis, r)?, closed: closed_form_degenerate(&p, r) })
}

/// Degenerate values of already computed chain expansions at residue r.
pub fn degenerate_values(phis: &[JacExp; 4], r: i64) -> Result<[Rat; 4]> {
    Ok([phis[0].degenerate(r)?, phis[1].degenerate(r)?, phis[2].degenerate(r)?, phis[3].degenerate(0)?])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainMethod {
    Composed,
    ClosedForm,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub q1: u64,
    pub q2: u64,
    pub l1: u64,
    pub l2: u64,
    pub k: u32,
    pub value: String,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub entries: Vec<ScanEntry>,
    pub max_ratio: f64,
}

/// c_{phi_4}(0,0) / (q1 q2)^{k - 5/4} over all factorizations of each m.
pub fn eigen_bound_scan(k: u32, m_list: &[u64], q_max: Option<u64>, method: ChainMethod) -> Result<ScanReport> {
    let mut entries = Vec::new();
    let mut e1: Option<JacExp> = None;
    for &m in m_list {
        for p in ChainParams::all_for(k, m) {
            if let Some(q) = q_max {
                if p.q1 > q || p.q2 > q {
                    continue;
                }
            }
            let value = match method {
                ChainMethod::ClosedForm => closed_phi4(&p),
                ChainMethod::Composed => {
                    let need = chain_input_prec(&p, 1);
                    if e1.as_ref().map_or(true, |e| e.prec() < need) {
                        e1 = Some(jac_eis_1(k, need)?);
                    }
                    let phis = chain_expansions(&p, e1.as_ref().unwrap(), 1)?;
                    phis[3].degenerate(0)?
                }
            };
            let denom = ((p.q1 * p.q2) as f64).powf(k as f64 - 1.25);
            entries.push(ScanEntry {
                q1: p.q1,
                q2: p.q2,
                l1: p.l1,
                l2: p.l2,
                k,
                value: fmt_rat(&value),
                ratio: to_f64(&value) / denom,
            });
        }
    }
    let max_ratio = entries.iter().map(|e| e.ratio).fold(0.0, f64::max);
    Ok(ScanReport { entries, max_ratio })
}
