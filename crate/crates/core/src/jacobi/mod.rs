//! Truncated Fourier expansions of Jacobi forms.
//!
//! A coefficient c(n, r) of a form of even weight and index m depends only on
//! the discriminant D = 4mn - r^2 and on r mod 2m up to sign, so storage is
//! keyed by the class (D, rho) with rho the representative of +-r mod 2m in
//! [0, m]. A class is stored iff its smallest n, (rho^2 + D)/4m, is below
//! `prec`; queries with larger n are served from the class table when possible.

mod eis;
mod theta;

use std::collections::HashMap;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::{fmt_rat, parse_rat, Rat};
use crate::error::{Error, Result};

pub use eis::{eis_degenerate, jac_eis_1, jac_eis_m, siegel_fj, siegel_fj_maass, EisensteinFamily};
pub use theta::{theta_decompose, ThetaComponents};

pub fn isqrt(n: u64) -> u64 {
    let mut x = (n as f64).sqrt() as u64;
    while x * x > n {
        x -= 1;
    }
    while (x + 1) * (x + 1) <= n {
        x += 1;
    }
    x
}

/// Representative of +-r mod 2m in [0, m].
pub fn canon_rho(m: u64, r: i64) -> u64 {
    let t = r.rem_euclid(2 * m as i64) as u64;
    t.min(2 * m - t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacExp {
    k: i64,
    m: u64,
    prec: u64,
    classes: HashMap<(u64, u64), Rat>,
}

impl JacExp {
    pub fn zero(k: i64, m: u64, prec: u64) -> Result<JacExp> {
        Self::from_class_fn(k, m, prec, |_, _| Ok(Rat::zero()))
    }

    pub fn weight(&self) -> i64 {
        self.k
    }

    pub fn index(&self) -> u64 {
        self.m
    }

    pub fn prec(&self) -> u64 {
        self.prec
    }

    pub fn num_classes(&self) -> usize {
        self.classes.len()
    }

    fn check_params(k: i64, m: u64, prec: u64) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidParam("index must be >= 1".into()));
        }
        if prec == 0 {
            return Err(Error::InvalidParam("prec must be >= 1".into()));
        }
        if k % 2 != 0 {
            return Err(Error::InvalidParam(format!("odd weight {k}")));
        }
        Ok(())
    }

    /// Smallest n carrying the class (d, rho).
    pub fn n_min(&self, d: u64, rho: u64) -> u64 {
        (rho * rho + d) / (4 * self.m)
    }

    /// Classes (D, rho) with n_min < prec, ordered by n_min.
    fn classes_below(m: u64, prec: u64) -> Vec<(u64, u64, u64)> {
        let mut out = Vec::new();
        for rho in 0..=m {
            let mut d = (4 * m - (rho * rho) % (4 * m)) % (4 * m);
            loop {
                let n = (rho * rho + d) / (4 * m);
                if n >= prec {
                    break;
                }
                out.push((n, d, rho));
                d += 4 * m;
            }
        }
        out.sort_unstable();
        out
    }

    /// Build from a class function f(D, rho). Errors propagate.
    pub fn from_class_fn(
        k: i64,
        m: u64,
        prec: u64,
        mut f: impl FnMut(u64, u64) -> Result<Rat>,
    ) -> Result<JacExp> {
        Self::check_params(k, m, prec)?;
        let mut classes = HashMap::new();
        for (_, d, rho) in Self::classes_below(m, prec) {
            classes.insert((d, rho), f(d, rho)?);
        }
        Ok(JacExp { k, m, prec, classes })
    }

    /// Like `from_class_fn`, but a precision failure truncates the output
    /// to the rows that could be computed completely.
    pub fn from_class_fn_adaptive(
        k: i64,
        m: u64,
        prec: u64,
        mut f: impl FnMut(u64, u64) -> Result<Rat>,
    ) -> Result<JacExp> {
        Self::check_params(k, m, prec)?;
        let mut classes = HashMap::new();
        let mut out_prec = prec;
        for (n, d, rho) in Self::classes_below(m, prec) {
            match f(d, rho) {
                Ok(v) => {
                    classes.insert((d, rho), v);
                }
                Err(Error::Precision(msg)) => {
                    if n == 0 {
                        return Err(Error::Precision(msg));
                    }
                    out_prec = n;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        let mut out = JacExp { k, m, prec: out_prec, classes };
        out.drop_above(out_prec);
        Ok(out)
    }

    /// Build from a function of (n, r), evaluated at every n < prec and
    /// every r with r^2 <= 4mn (both signs). Two evaluations landing in the
    /// same class must agree, otherwise an invariant error is returned.
    pub fn from_fn(k: i64, m: u64, prec: u64, f: impl FnMut(i64, i64) -> Result<Rat>) -> Result<JacExp> {
        Self::from_fn_impl(k, m, prec, false, f)
    }

    /// `from_fn` truncating at the first row with a precision failure.
    pub fn from_fn_adaptive(k: i64, m: u64, prec: u64, f: impl FnMut(i64, i64) -> Result<Rat>) -> Result<JacExp> {
        Self::from_fn_impl(k, m, prec, true, f)
    }

    fn from_fn_impl(
        k: i64,
        m: u64,
        prec: u64,
        adaptive: bool,
        mut f: impl FnMut(i64, i64) -> Result<Rat>,
    ) -> Result<JacExp> {
        Self::check_params(k, m, prec)?;
        let mut classes: HashMap<(u64, u64), Rat> = HashMap::new();
        let mut out_prec = prec;
        'rows: for n in 0..prec {
            let bound = isqrt(4 * m * n) as i64;
            let mut row: Vec<((u64, u64), Rat, i64)> = Vec::with_capacity(2 * bound as usize + 1);
            for r in -bound..=bound {
                match f(n as i64, r) {
                    Ok(v) => {
                        let d = 4 * m * n - (r * r) as u64;
                        row.push(((d, canon_rho(m, r)), v, r));
                    }
                    Err(Error::Precision(msg)) if adaptive => {
                        if n == 0 {
                            return Err(Error::Precision(msg));
                        }
                        out_prec = n;
                        break 'rows;
                    }
                    Err(e) => return Err(e),
                }
            }
            for (key, v, r) in row {
                match classes.get(&key) {
                    Some(old) if *old != v => {
                        return Err(Error::Invariant(format!(
                            "coefficient at (n, r) = ({n}, {r}) is {v} but its class (D, r mod 2m) = {key:?} already holds {old}"
                        )));
                    }
                    Some(_) => {}
                    None => {
                        classes.insert(key, v);
                    }
                }
            }
        }
        let mut out = JacExp { k, m, prec: out_prec, classes };
        out.drop_above(out_prec);
        Ok(out)
    }

    fn drop_above(&mut self, prec: u64) {
        let m = self.m;
        self.classes.retain(|&(d, rho), _| (rho * rho + d) / (4 * m) < prec);
    }

    pub fn truncate(&self, prec: u64) -> JacExp {
        let mut out = self.clone();
        out.prec = prec.clamp(1, self.prec);
        let p = out.prec;
        out.drop_above(p);
        out
    }

    /// c(D, r) with D = 4mn - r^2 >= 0. Invalid (D, r) pairs are an error.
    pub fn class_coeff(&self, d: i64, r: i64) -> Result<Rat> {
        if d < 0 {
            return Ok(Rat::zero());
        }
        let m4 = 4 * self.m as i64;
        if (d + r * r) % m4 != 0 {
            return Err(Error::Invariant(format!("(D, r) = ({d}, {r}) is not a coefficient slot of index {}", self.m)));
        }
        let key = (d as u64, canon_rho(self.m, r));
        self.classes.get(&key).cloned().ok_or_else(|| {
            Error::Precision(format!(
                "class (D, rho) = {key:?} of index {} not stored (prec {})",
                self.m, self.prec
            ))
        })
    }

    /// c(D, r), treating pairs that are not coefficient slots as zero.
    pub fn class_coeff_or_zero(&self, d: i64, r: i64) -> Result<Rat> {
        let m4 = 4 * self.m as i64;
        if d < 0 || (d + r * r) % m4 != 0 {
            return Ok(Rat::zero());
        }
        self.class_coeff(d, r)
    }

    /// c(n, r); zero when 4mn < r^2.
    pub fn coeff(&self, n: i64, r: i64) -> Result<Rat> {
        let d = 4 * self.m as i64 * n - r * r;
        self.class_coeff(d, r)
    }

    /// The degenerate coefficient at D = 0 and residue r (zero if r^2 is not 0 mod 4m).
    pub fn degenerate(&self, r: i64) -> Result<Rat> {
        self.class_coeff_or_zero(0, r)
    }

    pub fn is_cuspidal(&self) -> bool {
        self.classes.iter().all(|(&(d, _), v)| d != 0 || v.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.classes.values().all(Zero::is_zero)
    }

    /// Stored classes (D, rho, value), sorted.
    pub fn classes(&self) -> Vec<(u64, u64, Rat)> {
        let mut v: Vec<_> = self.classes.iter().map(|(&(d, rho), c)| (d, rho, c.clone())).collect();
        v.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        v
    }

    /// All (n, r, c(n, r)) with n < prec and 0 <= r, r^2 <= 4mn.
    pub fn entries(&self) -> Vec<(u64, u64, Rat)> {
        let mut out = Vec::new();
        for n in 0..self.prec {
            for r in 0..=isqrt(4 * self.m * n) {
                let c = self.coeff(n as i64, r as i64).expect("stored range");
                out.push((n, r, c));
            }
        }
        out
    }

    /// Structural check: every stored key is a valid class and every class
    /// below prec is present.
    pub fn check_invariants(&self) -> Result<()> {
        for &(d, rho) in self.classes.keys() {
            if rho > self.m || (d + rho * rho) % (4 * self.m) != 0 {
                return Err(Error::Invariant(format!("invalid class key ({d}, {rho}) for index {}", self.m)));
            }
            if self.n_min(d, rho) >= self.prec {
                return Err(Error::Invariant(format!("class ({d}, {rho}) beyond prec {}", self.prec)));
            }
        }
        let expected = Self::classes_below(self.m, self.prec).len();
        if expected != self.classes.len() {
            return Err(Error::Invariant(format!("{} classes stored, {expected} expected", self.classes.len())));
        }
        Ok(())
    }

    fn same_space(&self, other: &JacExp) -> Result<()> {
        if self.k != other.k || self.m != other.m {
            return Err(Error::InvalidParam(format!(
                "expansions of (k, m) = ({}, {}) and ({}, {}) cannot be combined",
                self.k, self.m, other.k, other.m
            )));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rat) -> JacExp {
        let classes = self.classes.iter().map(|(key, v)| (*key, v * c)).collect();
        JacExp { k: self.k, m: self.m, prec: self.prec, classes }
    }

    /// self + c * other on the common precision range.
    pub fn add_scaled(&self, c: &Rat, other: &JacExp) -> Result<JacExp> {
        self.same_space(other)?;
        let prec = self.prec.min(other.prec);
        let mut out = self.truncate(prec);
        for (key, v) in out.classes.iter_mut() {
            *v += c * &other.classes[key];
        }
        Ok(out)
    }

    pub fn add(&self, other: &JacExp) -> Result<JacExp> {
        self.add_scaled(&Rat::from_integer(1.into()), other)
    }

    /// First class (D, rho) where the two expansions differ on their common range.
    pub fn first_difference(&self, other: &JacExp) -> Result<Option<(u64, u64, Rat, Rat)>> {
        self.same_space(other)?;
        let prec = self.prec.min(other.prec);
        let mut diffs: Vec<_> = self
            .classes
            .iter()
            .filter(|(&(d, rho), _)| self.n_min(d, rho) < prec)
            .filter_map(|(key, v)| {
                let w = &other.classes[key];
                (v != w).then(|| (key.0, key.1, v.clone(), w.clone()))
            })
            .collect();
        diffs.sort_by(|a, b| (self.n_min(a.0, a.1), a.0, a.1).cmp(&(self.n_min(b.0, b.1), b.0, b.1)));
        Ok(diffs.into_iter().next())
    }

    pub fn agrees_with(&self, other: &JacExp) -> bool {
        matches!(self.first_difference(other), Ok(None))
    }

    /// lambda with self = lambda * other on the common range, if it exists.
    pub fn ratio_to(&self, other: &JacExp) -> Option<Rat> {
        if self.same_space(other).is_err() {
            return None;
        }
        let prec = self.prec.min(other.prec);
        let mut lambda: Option<Rat> = None;
        for (key, w) in &other.classes {
            if self.n_min(key.0, key.1) >= prec {
                continue;
            }
            let v = &self.classes[key];
            if w.is_zero() {
                if !v.is_zero() {
                    return None;
                }
                continue;
            }
            let q = v / w;
            match &lambda {
                None => lambda = Some(q),
                Some(l) if *l != q => return None,
                _ => {}
            }
        }
        Some(lambda.unwrap_or_else(Rat::zero))
    }
}

#[derive(Serialize, Deserialize)]
struct JacJson {
    coeffs: Vec<(u64, u64, String)>,
    k: i64,
    m: u64,
    prec: u64,
}

impl Serialize for JacExp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        JacJson {
            coeffs: self.entries().into_iter().map(|(n, r, c)| (n, r, fmt_rat(&c))).collect(),
            k: self.k,
            m: self.m,
            prec: self.prec,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for JacExp {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = JacJson::deserialize(d)?;
        let mut table = HashMap::new();
        for (n, r, s) in &j.coeffs {
            let v = parse_rat(s).ok_or_else(|| D::Error::custom(format!("bad rational {s}")))?;
            table.insert((*n as i64, *r as i64), v);
        }
        JacExp::from_fn(j.k, j.m, j.prec, |n, r| {
            table
                .get(&(n, r.abs()))
                .cloned()
                .ok_or_else(|| Error::Format(format!("missing coefficient ({n}, {})", r.abs())))
        })
        .map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn class_canonicalization() {
        assert_eq!(canon_rho(1, 2), 0);
        assert_eq!(canon_rho(1, -1), 1);
        assert_eq!(canon_rho(3, 5), 1);
        assert_eq!(canon_rho(3, -5), 1);
    }

    #[test]
    fn from_fn_detects_class_inconsistency() {
        // c(n, r) = r is not even
        let e = JacExp::from_fn(4, 1, 3, |_, r| Ok(rat(r)));
        assert!(matches!(e, Err(Error::Invariant(_))));
        // c(n, r) = n is not a class function: (1, 2) and (0, 0) share D = 0
        let e = JacExp::from_fn(4, 1, 3, |n, _| Ok(rat(n)));
        assert!(matches!(e, Err(Error::Invariant(_))));
    }

    #[test]
    fn class_lookup_beyond_prec() {
        let f = JacExp::from_class_fn(4, 1, 2, |d, _| Ok(rat(d as i64))).unwrap();
        // (5, 4) has D = 4 which is stored through (1, 0)
        assert_eq!(f.coeff(5, 4).unwrap(), rat(4));
        assert_eq!(f.coeff(1, 3).unwrap(), rat(0));
        assert!(matches!(f.coeff(2, 0), Err(Error::Precision(_))));
        f.check_invariants().unwrap();
    }

    #[test]
    fn adaptive_truncation() {
        let f = JacExp::from_fn_adaptive(4, 1, 10, |n, _| {
            if n >= 4 {
                Err(Error::Precision("x".into()))
            } else {
                Ok(rat(1))
            }
        })
        .unwrap();
        assert_eq!(f.prec(), 4);
        f.check_invariants().unwrap();
        assert!(JacExp::from_fn_adaptive(4, 1, 10, |_, _| Err(Error::Precision("x".into()))).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = JacExp::from_class_fn(4, 2, 3, |d, rho| Ok(rat((d * 10 + rho) as i64))).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert!(s.starts_with(r#"{"coeffs":[[0,0,"0"]"#));
        let g: JacExp = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }

    #[test]
    fn ratio_detection() {
        let f = JacExp::from_class_fn(4, 1, 4, |d, _| Ok(rat(d as i64 + 1))).unwrap();
        let g = f.scale(&rat(7));
        assert_eq!(g.ratio_to(&f), Some(rat(7)));
        let h = g.add(&JacExp::from_class_fn(4, 1, 4, |d, _| Ok(rat((d == 3) as i64))).unwrap()).unwrap();
        assert_eq!(h.ratio_to(&f), None);
    }
}
