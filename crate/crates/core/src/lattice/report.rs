//! Main term, representation-number tables, genus averages and the
//! prime-discriminant sequence.

use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::binqf::BinQF;
use super::enumerate::Enumerator;
use super::gram::LatticeGram;
use super::rep::RepCounter;
use super::siegel::SiegelCoeffs;
use crate::arith::{c_k, divisors, fmt_rat, g_k, is_prime, moebius, rat, sigma_pow, square_divisors, to_f64, Rat};
use crate::error::{Error, Result};
use crate::qexp::{eisenstein_qexp, QExp};

/// alpha_m(t; theta^1(S)) = sum_{l | t} mu(t/l) A*(S, m/l^2) / g_k(m/l^2).
pub fn alpha_theta(rc: &mut RepCounter, k: u32, m: u64, t: u64) -> Rat {
    let mut s = Rat::zero();
    for l in divisors(t) {
        let mu = moebius(t / l);
        if mu == 0 {
            continue;
        }
        let q = m / (l * l);
        s += rat(mu as i64) * rat(rc.primitive_vector_count(q as i64) as i64) / g_k(k, q);
    }
    s
}

/// M(S, T) = sum_{t^2 | m, t | r} alpha_m(t; theta^1(S)) a_2^k(n, r/t, m/t^2).
pub fn main_term_m(rc: &mut RepCounter, sc: &mut SiegelCoeffs, t: &BinQF) -> Result<Rat> {
    let k = sc.weight();
    if rc.lattice().weight() != k {
        return Err(Error::InvalidParam(format!("lattice weight {} != {k}", rc.lattice().weight())));
    }
    if t.m <= 0 {
        return Err(Error::InvalidParam(format!("{t:?}: m must be positive")));
    }
    let m = t.m as u64;
    let mut total = Rat::zero();
    for d in square_divisors(m) {
        if t.r % d as i64 != 0 {
            continue;
        }
        let a = alpha_theta(rc, k, m, d);
        if a.is_zero() {
            continue;
        }
        let di = d as i64;
        total += a * sc.a2k(&BinQF::new(t.n, t.r / di, t.m / (di * di)))?;
    }
    Ok(total)
}

pub fn main_term(s: &LatticeGram, t: &BinQF) -> Result<Rat> {
    let mut rc = RepCounter::new(s, t.n.max(t.m));
    let mut sc = SiegelCoeffs::new(s.weight(), t.m.max(1) as u64, t.n as u64 + 1)?;
    main_term_m(&mut rc, &mut sc, t)
}

#[derive(Clone, Debug, Serialize)]
pub struct RepnoRow {
    pub n: i64,
    pub r: i64,
    pub m: i64,
    #[serde(rename = "detT")]
    pub det_t: String,
    #[serde(rename = "A")]
    pub a: u64,
    pub main: String,
    pub diff: String,
    /// None when A(S, min T) = 0.
    pub mst_ratio: Option<f64>,
    #[serde(skip)]
    pub main_exact: Rat,
    #[serde(skip)]
    pub diff_exact: Rat,
}

/// Rows (A(S,T), c_k^{-1} M, difference, growth ratio) over reduced T.
///
/// The growth ratio is M sigma_{k-1}(min T) (1 + log min T) / (A(S, min T) det(T)^{k-3/2});
/// the 1 + log keeps it meaningful at min T = 1.
pub fn repno_report(s: &LatticeGram, scan: &[BinQF]) -> Result<Vec<RepnoRow>> {
    let k = s.weight();
    let bound = scan.iter().map(|t| t.n.max(t.m)).max().unwrap_or(1);
    let m_max = scan.iter().map(|t| t.m).max().unwrap_or(1).max(1) as u64;
    let mut rc = RepCounter::new(s, bound);
    let mut sc = SiegelCoeffs::new(k, m_max, bound as u64 + 1)?;
    let ck = c_k(k);
    let mut rows = Vec::with_capacity(scan.len());
    for t in scan {
        if !t.is_reduced() || !t.is_positive_definite() {
            return Err(Error::InvalidParam(format!("{t:?} is not reduced positive definite")));
        }
        let a = rc.count(*t);
        let main = main_term_m(&mut rc, &mut sc, t)?;
        let scaled = &main / &ck;
        let diff = rat(a as i64) - &scaled;
        let min_t = t.m;
        let a_min = rc.vector_count(min_t);
        let mst_ratio = if a_min == 0 {
            None
        } else {
            let det = to_f64(&t.det());
            let num = to_f64(&main) * sigma_pow(k - 1, min_t as u64).to_f64().unwrap() * (1.0 + (min_t as f64).ln());
            Some(num / (a_min as f64 * det.powf(k as f64 - 1.5)))
        };
        rows.push(RepnoRow {
            n: t.n,
            r: t.r,
            m: t.m,
            det_t: fmt_rat(&t.det()),
            a,
            main: fmt_rat(&scaled),
            diff: fmt_rat(&diff),
            mst_ratio,
            main_exact: scaled,
            diff_exact: diff,
        });
    }
    Ok(rows)
}

pub fn repno_csv(rows: &[RepnoRow]) -> String {
    let mut out = String::from("n,r,m,detT,A,main,diff,mst_ratio\n");
    for row in rows {
        let ratio = row.mst_ratio.map_or_else(|| "NA".to_string(), |x| format!("{x:.6e}"));
        out += &format!("{},{},{},{},{},{},{},{}\n", row.n, row.r, row.m, row.det_t, row.a, row.main, row.diff, ratio);
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct HauptsatzRow {
    pub t: BinQF,
    pub average: String,
    pub siegel: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct HauptsatzReport {
    pub degree1: Vec<(u64, String, String, bool)>,
    pub degree2: Vec<HauptsatzRow>,
}

impl HauptsatzReport {
    pub fn passed(&self) -> bool {
        self.degree1.iter().all(|r| r.3) && self.degree2.iter().all(|r| r.ok)
    }
}

/// sum_nu m_nu A(S_nu, T) against a_2^k(T), and the degree-one analogue
/// against E_k for norms up to the largest diagonal entry in the scan.
pub fn hauptsatz_check(genus: &[(LatticeGram, Rat)], scan: &[BinQF]) -> Result<HauptsatzReport> {
    let total: Rat = genus.iter().map(|(_, w)| w.clone()).sum();
    if !total.is_one() {
        return Err(Error::InvalidParam(format!("mass weights sum to {}", fmt_rat(&total))));
    }
    let k = genus.first().ok_or_else(|| Error::InvalidParam("empty genus".into()))?.0.weight();
    if genus.iter().any(|(s, _)| s.weight() != k) {
        return Err(Error::InvalidParam("lattices of different rank".into()));
    }
    let bound = scan.iter().map(|t| t.n.max(t.m)).max().unwrap_or(1).max(1);
    let m_max = scan.iter().map(|t| t.canonical().map(|c| c.m).unwrap_or(1)).max().unwrap_or(1).max(1);
    let mut counters: Vec<RepCounter> = genus.iter().map(|(s, _)| RepCounter::new(s, bound)).collect();
    let mut sc = SiegelCoeffs::new(k, m_max as u64, bound as u64 + 1)?;
    let ek = eisenstein_qexp(k, bound as usize + 1)?;
    let mut degree1 = Vec::new();
    for m in 0..=bound {
        let avg: Rat = genus.iter().zip(counters.iter_mut()).map(|((_, w), rc)| w * rat(rc.vector_count(m) as i64)).sum();
        let e = ek.coeff(m as u64)?.clone();
        degree1.push((m as u64, fmt_rat(&avg), fmt_rat(&e), avg == e));
    }
    let mut degree2 = Vec::new();
    for t in scan {
        let avg: Rat = genus.iter().zip(counters.iter_mut()).map(|((_, w), rc)| w * rat(rc.count(*t) as i64)).sum();
        let a = sc.a2k(t)?;
        degree2.push(HauptsatzRow { t: *t, average: fmt_rat(&avg), siegel: fmt_rat(&a), ok: avg == a });
    }
    Ok(HauptsatzReport { degree1, degree2 })
}

/// theta^1(S) = sum_x q^{Q(x)} and its cusp part theta^1(S) - E_k.
pub fn theta1_qexp(s: &LatticeGram, prec: usize) -> Result<(QExp, QExp)> {
    if prec == 0 {
        return Err(Error::InvalidParam("prec must be >= 1".into()));
    }
    let counts = Enumerator::new(s).count_by_norm(prec as i64 - 1);
    let coeffs: Vec<Rat> = counts.iter().map(|&c| rat(c as i64)).collect();
    let theta = QExp::new(s.weight() as i64, coeffs, false)?;
    let ek = eisenstein_qexp(s.weight(), prec)?;
    let cusp = theta.sub(&ek)?;
    let cusp = QExp::new(cusp.weight(), cusp.coeffs().to_vec(), true)?;
    Ok((theta, cusp))
}

pub const SAHA_CAP: u64 = 1_000_000;

/// For increasing m_j, the smallest n_j > m_j with 4 m_j n_j - 1 prime and
/// larger than the previous discriminant. Output forms are (n_j, 1, m_j).
pub fn saha_sequence(m_list: &[u64], cap: u64) -> Result<Vec<BinQF>> {
    let mut out = Vec::new();
    let mut prev_d = 0u64;
    let mut prev_m = 0u64;
    for &m in m_list {
        if m <= prev_m {
            return Err(Error::InvalidParam(format!("m values must be strictly increasing, got {m} after {prev_m}")));
        }
        prev_m = m;
        let mut n = m + 1;
        let mut steps = 0;
        loop {
            let d = 4 * m * n - 1;
            if d > prev_d && is_prime(d) {
                prev_d = d;
                break;
            }
            steps += 1;
            if steps >= cap {
                return Err(Error::CapExhausted(cap));
            }
            n += 1;
        }
        out.push(BinQF::new(n as i64, 1, m as i64));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::is_fundamental;

    #[test]
    fn saha_examples() {
        let s = saha_sequence(&[2], SAHA_CAP).unwrap();
        assert_eq!(s, vec![BinQF::new(3, 1, 2)]);
        assert_eq!(s[0].det2(), 23);
        let s = saha_sequence(&[5, 6], SAHA_CAP).unwrap();
        assert!(s[0].det2() < s[1].det2());
        for t in &s {
            assert!(t.is_reduced());
            assert!(is_fundamental(-t.det2()));
        }
        assert!(matches!(saha_sequence(&[5, 6], 1), Err(Error::CapExhausted(1))));
        assert!(saha_sequence(&[6, 5], SAHA_CAP).is_err());
    }

    #[test]
    fn theta_e8_is_e4() {
        let (th, cusp) = theta1_qexp(&LatticeGram::e8(), 5).unwrap();
        assert_eq!(th.coeffs()[0], rat(1));
        assert_eq!(th.coeffs()[1], rat(240));
        assert!(cusp.is_zero());
    }

    #[test]
    fn main_term_weight4() {
        let e8 = LatticeGram::e8();
        for t in [BinQF::new(1, 1, 1), BinQF::new(2, 1, 2), BinQF::new(4, 0, 4), BinQF::new(5, 2, 4)] {
            let m = main_term(&e8, &t).unwrap();
            assert_eq!(m / c_k(4), rat(crate::lattice::rep_number(&e8, t) as i64), "{t:?}");
        }
    }

    #[test]
    fn weights_must_sum_to_one() {
        let g = vec![(LatticeGram::e8(), Rat::new(1.into(), 2.into()))];
        assert!(hauptsatz_check(&g, &[BinQF::new(1, 1, 1)]).is_err());
        let g = vec![(LatticeGram::e8(), rat(1))];
        assert!(hauptsatz_check(&g, &[BinQF::new(1, 1, 1), BinQF::new(2, 0, 1)]).unwrap().passed());
    }
}
