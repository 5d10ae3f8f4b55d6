//! Level-one elliptic modular forms as truncated q-expansions.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{big, bernoulli, divisors, fmt_rat, g_k, moebius, parse_rat, rat, sigma_pow, square_divisors, Rat};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExp {
    weight: i64,
    coeffs: Vec<Rat>,
    cuspidal: bool,
}

impl QExp {
    pub fn new(weight: i64, coeffs: Vec<Rat>, cuspidal: bool) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParam("q-expansion needs prec >= 1".into()));
        }
        if cuspidal && !coeffs[0].is_zero() {
            return Err(Error::Invariant("cuspidal flag with nonzero constant term".into()));
        }
        Ok(QExp { weight, coeffs, cuspidal })
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_cuspidal(&self) -> bool {
        self.cuspidal
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, n: u64) -> Result<&Rat> {
        self.coeffs
            .get(n as usize)
            .ok_or_else(|| Error::Precision(format!("q-expansion coefficient {n} beyond prec {}", self.prec())))
    }

    pub fn truncate(&self, prec: usize) -> QExp {
        let prec = prec.clamp(1, self.prec());
        QExp { weight: self.weight, coeffs: self.coeffs[..prec].to_vec(), cuspidal: self.cuspidal }
    }

    pub fn scale(&self, c: &Rat) -> QExp {
        QExp { weight: self.weight, coeffs: self.coeffs.iter().map(|a| a * c).collect(), cuspidal: self.cuspidal }
    }

    pub fn add(&self, other: &QExp) -> Result<QExp> {
        if self.weight != other.weight {
            return Err(Error::InvalidParam(format!("weights {} and {} differ", self.weight, other.weight)));
        }
        let n = self.prec().min(other.prec());
        let coeffs = (0..n).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        Ok(QExp { weight: self.weight, coeffs, cuspidal: self.cuspidal && other.cuspidal })
    }

    pub fn sub(&self, other: &QExp) -> Result<QExp> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn mul(&self, other: &QExp) -> QExp {
        let n = self.prec().min(other.prec());
        QExp {
            weight: self.weight + other.weight,
            coeffs: series_mul(&self.coeffs, &other.coeffs, n),
            cuspidal: self.cuspidal || other.cuspidal,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }
}

fn series_mul(a: &[Rat], b: &[Rat], n: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    out
}

fn int_series_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// E_k normalized with constant term 1.
pub fn eisenstein_qexp(k: u32, prec: usize) -> Result<QExp> {
    if k < 4 || k % 2 == 1 {
        return Err(Error::InvalidParam(format!("Eisenstein series needs even k >= 4, got {k}")));
    }
    if prec == 0 {
        return Err(Error::InvalidParam("prec must be >= 1".into()));
    }
    let c = -rat(2 * k as i64) / bernoulli(k);
    let mut coeffs = vec![Rat::one()];
    for n in 1..prec as u64 {
        coeffs.push(&c * big(sigma_pow(k - 1, n)));
    }
    QExp::new(k as i64, coeffs, false)
}

/// Delta = q prod (1 - q^n)^24.
pub fn delta_qexp(prec: usize) -> Result<QExp> {
    if prec == 0 {
        return Err(Error::InvalidParam("prec must be >= 1".into()));
    }
    // Euler's pentagonal series for prod (1 - q^n)
    let mut eta = vec![BigInt::zero(); prec];
    let mut j: i64 = 0;
    loop {
        let mut any = false;
        for g in [j * (3 * j - 1) / 2, j * (3 * j + 1) / 2] {
            if (g as usize) < prec {
                any = true;
                eta[g as usize] = if j % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            }
        }
        if !any {
            break;
        }
        j += 1;
    }
    let e2 = int_series_mul(&eta, &eta, prec);
    let e4 = int_series_mul(&e2, &e2, prec);
    let e8 = int_series_mul(&e4, &e4, prec);
    let e16 = int_series_mul(&e8, &e8, prec);
    let e24 = int_series_mul(&e16, &e8, prec);
    let mut coeffs = vec![Rat::zero(); prec];
    for n in 1..prec {
        coeffs[n] = big(e24[n - 1].clone());
    }
    QExp::new(12, coeffs, true)
}

fn dim_cusp(k: u32) -> usize {
    if k % 2 == 1 || k < 12 {
        return 0;
    }
    let d = (k / 12) as usize;
    if k % 12 == 2 {
        d - 1
    } else {
        d
    }
}

/// Echelon basis of S_k from Delta * E4^a * E6^b, 4a + 6b = k - 12.
pub fn cusp_basis(k: u32, prec: usize) -> Result<Vec<QExp>> {
    if k % 2 == 1 {
        return Err(Error::InvalidParam(format!("odd weight {k}")));
    }
    if k < 12 {
        return Ok(vec![]);
    }
    let dim = dim_cusp(k);
    if dim == 0 {
        return Ok(vec![]);
    }
    if prec <= dim {
        return Err(Error::Precision(format!("cusp basis of weight {k} needs prec > {dim}")));
    }
    let e4 = eisenstein_qexp(4, prec)?;
    let e6 = eisenstein_qexp(6, prec)?;
    let delta = delta_qexp(prec)?;
    let rest = k - 12;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    for b in 0..=rest / 6 {
        if (rest - 6 * b) % 4 != 0 {
            continue;
        }
        let a = (rest - 6 * b) / 4;
        let mut f = delta.clone();
        for _ in 0..a {
            f = f.mul(&e4);
        }
        for _ in 0..b {
            f = f.mul(&e6);
        }
        rows.push(f.coeffs);
    }
    assert_eq!(rows.len(), dim);
    // reduced row echelon form
    let mut pivot_row = 0;
    for col in 0..prec {
        if pivot_row == rows.len() {
            break;
        }
        let Some(p) = (pivot_row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, p);
        let inv = rows[pivot_row][col].recip();
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows.len() {
            if i != pivot_row && !rows[i][col].is_zero() {
                let c = rows[i][col].clone();
                let pr = rows[pivot_row].clone();
                for (x, y) in rows[i].iter_mut().zip(pr.iter()) {
                    *x -= &c * y;
                }
            }
        }
        pivot_row += 1;
    }
    rows.into_iter().map(|c| QExp::new(k as i64, c, true)).collect()
}

/// g_f(m) = sum_{d^2 | m} mu(d) a_f(m/d^2).
pub fn g_f(f: &QExp, m: u64) -> Result<Rat> {
    if m == 0 {
        return Err(Error::InvalidParam("g_f needs m >= 1".into()));
    }
    let mut s = Rat::zero();
    for d in square_divisors(m) {
        let mu = moebius(d);
        if mu != 0 {
            s += f.coeff(m / (d * d))? * rat(mu as i64);
        }
    }
    Ok(s)
}

/// alpha_m(t; f) = sum_{l | t} mu(t/l) g_f(m/l^2) / g_k(m/l^2).
pub fn alpha_m(f: &QExp, k: u32, m: u64, t: u64) -> Result<Rat> {
    if t == 0 || m == 0 || m % (t * t) != 0 {
        return Err(Error::InvalidParam(format!("alpha_m needs t^2 | m, got t={t} m={m}")));
    }
    let mut s = Rat::zero();
    for l in divisors(t) {
        let mu = moebius(t / l);
        if mu != 0 {
            let q = m / (l * l);
            s += g_f(f, q)? / g_k(k, q) * rat(mu as i64);
        }
    }
    Ok(s)
}

#[derive(Serialize, Deserialize)]
struct QExpJson {
    weight: i64,
    prec: usize,
    coeffs: Vec<String>,
}

impl Serialize for QExp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QExpJson { weight: self.weight, prec: self.prec(), coeffs: self.coeffs.iter().map(fmt_rat).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QExp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = QExpJson::deserialize(d)?;
        if j.coeffs.len() != j.prec {
            return Err(D::Error::custom("prec does not match coefficient count"));
        }
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| parse_rat(s).ok_or_else(|| D::Error::custom(format!("bad rational {s}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let cusp = coeffs.first().map(Zero::is_zero).unwrap_or(false);
        QExp::new(j.weight, coeffs, cusp).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn eisenstein_examples() {
        assert_eq!(eisenstein_qexp(4, 2).unwrap().coeffs(), &ints(&[1, 240])[..]);
        assert_eq!(eisenstein_qexp(6, 2).unwrap().coeffs(), &ints(&[1, -504])[..]);
        assert_eq!(eisenstein_qexp(10, 1).unwrap().coeffs(), &ints(&[1])[..]);
        assert!(eisenstein_qexp(2, 3).is_err());
    }

    #[test]
    fn delta_examples() {
        let d = delta_qexp(8).unwrap();
        assert_eq!(d.coeffs(), &ints(&[0, 1, -24, 252, -1472, 4830, -6048, -16744])[..]);
        assert!(d.is_cuspidal());
    }

    #[test]
    fn e4_squared_is_e8() {
        let e4 = eisenstein_qexp(4, 50).unwrap();
        assert_eq!(e4.mul(&e4), eisenstein_qexp(8, 50).unwrap());
    }

    #[test]
    fn e4_e6_minus_e10() {
        let e4 = eisenstein_qexp(4, 40).unwrap();
        let e6 = eisenstein_qexp(6, 40).unwrap();
        assert_eq!(e4.mul(&e6), eisenstein_qexp(10, 40).unwrap());
    }

    #[test]
    fn cusp_basis_examples() {
        assert_eq!(cusp_basis(12, 10).unwrap(), vec![delta_qexp(10).unwrap()]);
        assert!(cusp_basis(14, 10).unwrap().is_empty());
        let b = cusp_basis(24, 10).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].valuation(), Some(1));
        assert_eq!(b[1].valuation(), Some(2));
        assert_eq!(b[0].coeff(2).unwrap(), &rat(0));
    }

    #[test]
    fn g_f_examples() {
        let d = delta_qexp(10).unwrap();
        assert_eq!(g_f(&d, 1).unwrap(), rat(1));
        assert_eq!(g_f(&d, 4).unwrap(), rat(-1473));
        assert_eq!(g_f(&d, 5).unwrap(), rat(4830));
        assert!(g_f(&d, 10).is_err());
    }

    #[test]
    fn alpha_examples() {
        let e4 = eisenstein_qexp(4, 10).unwrap();
        assert_eq!(alpha_m(&e4, 4, 1, 1).unwrap(), rat(240));
        let d = delta_qexp(10).unwrap();
        let direct = g_f(&d, 4).unwrap() / g_k(12, 4) * rat(-1) + g_f(&d, 1).unwrap() / g_k(12, 1);
        assert_eq!(alpha_m(&d, 12, 4, 2).unwrap(), direct);
        assert!(alpha_m(&d, 12, 4, 3).is_err());
    }

    #[test]
    fn json_round_trip() {
        let d = delta_qexp(6).unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"weight":12,"prec":6,"coeffs":["0","1","-24","252","-1472","4830"]}"#);
        let back: QExp = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
    }
}
