use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rat;
use crate::error::{Error, Result};

/// Gram matrix S of an even unimodular lattice; the quadratic form is Q(x) = x^t S x / 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeGram {
    gram: Vec<Vec<i64>>,
}

impl LatticeGram {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if n == 0 || gram.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidParam("Gram matrix must be square and non-empty".into()));
        }
        for i in 0..n {
            if gram[i][i] % 2 != 0 {
                return Err(Error::InvalidParam(format!("odd diagonal entry at {i}")));
            }
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidParam(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        let g = LatticeGram { gram };
        let pivots = g.ldl_pivots();
        if pivots.iter().any(|p| !p.is_positive()) {
            return Err(Error::InvalidParam("Gram matrix is not positive definite".into()));
        }
        // pivots belong to S/2
        let det: Rat = pivots.iter().product::<Rat>() * Rat::from_integer(BigInt::from(2).pow(n as u32));
        if det != Rat::one() {
            return Err(Error::InvalidParam(format!("determinant {det} != 1")));
        }
        Ok(g)
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    /// Half the rank: the weight of the theta series.
    pub fn weight(&self) -> u32 {
        self.dim() as u32 / 2
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.gram[i][j]
    }

    /// Q(x) = x^t S x / 2.
    pub fn norm(&self, x: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.dim() {
            if x[i] == 0 {
                continue;
            }
            s += self.gram[i][i] / 2 * x[i] * x[i];
            for j in i + 1..self.dim() {
                s += self.gram[i][j] * x[i] * x[j];
            }
        }
        s
    }

    /// x^t S y.
    pub fn inner(&self, x: &[i64], y: &[i64]) -> i64 {
        let mut s = 0;
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                s += x[i] * self.gram[i][j] * y[j];
            }
        }
        s
    }

    /// Diagonal pivots of the exact LDL^t factorization of S.
    pub fn ldl_pivots(&self) -> Vec<Rat> {
        let (_, d) = self.ldl();
        d
    }

    /// Exact decomposition Q(x) = sum_i q_i (x_i + sum_{j>i} mu_ij x_j)^2.
    /// Returns (mu, q) with mu[i][j] for j > i.
    pub fn ldl(&self) -> (Vec<Vec<Rat>>, Vec<Rat>) {
        let n = self.dim();
        // work on A = S/2, eliminate from the first coordinate
        let mut a: Vec<Vec<Rat>> =
            self.gram.iter().map(|row| row.iter().map(|&x| Rat::new(x.into(), 2.into())).collect()).collect();
        let mut mu = vec![vec![Rat::zero(); n]; n];
        let mut q = vec![Rat::zero(); n];
        for i in 0..n {
            q[i] = a[i][i].clone();
            if q[i].is_zero() {
                // not positive definite; callers check the sign of pivots
                for qq in q.iter_mut().skip(i) {
                    *qq = Rat::zero();
                }
                break;
            }
            for j in i + 1..n {
                mu[i][j] = &a[i][j] / &q[i];
            }
            for j in i + 1..n {
                for l in i + 1..n {
                    let t = &mu[i][j] * &a[i][l];
                    a[j][l] -= t;
                }
            }
        }
        (mu, q)
    }

    /// Orthogonal direct sum.
    pub fn direct_sum(&self, other: &LatticeGram) -> LatticeGram {
        let (a, b) = (self.dim(), other.dim());
        let mut g = vec![vec![0; a + b]; a + b];
        for i in 0..a {
            g[i][..a].copy_from_slice(&self.gram[i]);
        }
        for i in 0..b {
            g[a + i][a..].copy_from_slice(&other.gram[i]);
        }
        LatticeGram { gram: g }
    }

    /// Sizes of the diagonal blocks if S is block diagonal (after no permutation).
    pub fn blocks(&self) -> Vec<usize> {
        let n = self.dim();
        let mut out = Vec::new();
        let mut start = 0;
        let mut reach = 0;
        for i in 0..n {
            for j in i..n {
                if self.gram[i][j] != 0 {
                    reach = reach.max(j);
                }
            }
            if reach == i {
                out.push(i + 1 - start);
                start = i + 1;
                reach = i + 1;
            }
        }
        out
    }

    /// Gram matrix of the lattice generated (over Z) by the rows of `gens`,
    /// given in coordinates scaled by `scale` relative to the standard inner product.
    pub fn from_generators(gens: &[Vec<i64>], scale: i64) -> Result<LatticeGram> {
        let mut basis = hnf_rows(gens);
        lll(&mut basis);
        let n = basis.len();
        let s2 = scale * scale;
        let mut gram = vec![vec![0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let dot: i64 = basis[i].iter().zip(&basis[j]).map(|(a, b)| a * b).sum();
                if dot % s2 != 0 {
                    return Err(Error::InvalidParam("generators do not span an integral lattice".into()));
                }
                gram[i][j] = dot / s2;
            }
        }
        LatticeGram::new(gram)
    }

    /// E8 as D8 together with the glue vector (1/2, ..., 1/2).
    pub fn e8() -> LatticeGram {
        Self::from_generators(&dn_plus_generators(8), 2).expect("E8 construction")
    }

    pub fn e8e8() -> LatticeGram {
        let e = Self::e8();
        e.direct_sum(&e)
    }

    /// D16+ as D16 together with the glue vector (1/2, ..., 1/2).
    pub fn d16plus() -> LatticeGram {
        Self::from_generators(&dn_plus_generators(16), 2).expect("D16+ construction")
    }

    pub fn builtin(name: &str) -> Option<LatticeGram> {
        match name.to_ascii_lowercase().as_str() {
            "e8" => Some(Self::e8()),
            "e8e8" | "e8+e8" | "e8xe8" => Some(Self::e8e8()),
            "d16+" | "d16plus" => Some(Self::d16plus()),
            _ => None,
        }
    }
}

/// Generators of D_n^+ in coordinates doubled: D_n roots and the all-ones glue.
fn dn_plus_generators(n: usize) -> Vec<Vec<i64>> {
    let mut gens = Vec::new();
    for i in 0..n - 1 {
        let mut v = vec![0; n];
        v[i] = 2;
        v[i + 1] = -2;
        gens.push(v);
    }
    let mut v = vec![0; n];
    v[n - 2] = 2;
    v[n - 1] = 2;
    gens.push(v);
    gens.push(vec![1; n]);
    gens
}

/// Row Hermite normal form; returns the nonzero rows (a Z-basis of the row lattice).
fn hnf_rows(gens: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = gens.to_vec();
    let cols = rows[0].len();
    let mut out = Vec::new();
    for c in 0..cols {
        loop {
            let mut nz: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if nz.len() <= 1 {
                break;
            }
            nz.sort_by_key(|&i| rows[i][c].abs());
            let p = nz[0];
            for &i in &nz[1..] {
                let q = rows[i][c] / rows[p][c];
                let pr = rows[p].clone();
                for (x, y) in rows[i].iter_mut().zip(pr) {
                    *x -= q * y;
                }
            }
        }
        if let Some(p) = (0..rows.len()).find(|&i| rows[i][c] != 0) {
            let mut r = rows.swap_remove(p);
            if r[c] < 0 {
                r.iter_mut().for_each(|x| *x = -*x);
            }
            out.push(r);
        }
    }
    out
}

fn gram_schmidt(b: &[Vec<i64>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let n = b.len();
    let mut bs: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut norms = Vec::with_capacity(n);
    let mut mu = vec![vec![0.0; n]; n];
    for i in 0..n {
        let mut v: Vec<f64> = b[i].iter().map(|&x| x as f64).collect();
        for j in 0..i {
            let num: f64 = b[i].iter().zip(&bs[j]).map(|(a, c)| *a as f64 * c).sum();
            mu[i][j] = num / norms[j];
            for (x, y) in v.iter_mut().zip(&bs[j]) {
                *x -= mu[i][j] * y;
            }
        }
        norms.push(v.iter().map(|x| x * x).sum());
        bs.push(v);
    }
    (mu, norms)
}

/// LLL reduction (delta = 0.99) of integer row vectors; only used to get a
/// short basis, so floating-point Gram-Schmidt is adequate.
fn lll(b: &mut [Vec<i64>]) {
    let n = b.len();
    let mut k = 1;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(b);
            let q = mu[k][j].round() as i64;
            if q != 0 {
                let bj = b[j].clone();
                for (x, y) in b[k].iter_mut().zip(bj) {
                    *x -= q * y;
                }
            }
        }
        let (mu, norms) = gram_schmidt(b);
        if norms[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            b.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
}

pub fn det_exact(g: &[Vec<i64>]) -> BigInt {
    // Bareiss fraction-free elimination
    let n = g.len();
    let mut a: Vec<Vec<BigInt>> = g.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    let mut prev = BigInt::one();
    let mut sign = 1;
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(p) => {
                    a.swap(k, p);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    prev * sign
}

#[derive(Serialize, Deserialize)]
struct GramJson {
    dim: usize,
    gram: Vec<Vec<i64>>,
}

impl Serialize for LatticeGram {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GramJson { dim: self.dim(), gram: self.gram.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticeGram {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = GramJson::deserialize(d)?;
        if j.gram.len() != j.dim {
            return Err(D::Error::custom(format!("dim {} but {} rows", j.dim, j.gram.len())));
        }
        LatticeGram::new(j.gram).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_even_unimodular() {
        for (name, dim) in [("e8", 8), ("e8e8", 16), ("d16+", 16)] {
            let g = LatticeGram::builtin(name).unwrap();
            assert_eq!(g.dim(), dim);
            assert_eq!(det_exact(g.gram()), BigInt::one());
        }
        assert_eq!(LatticeGram::e8e8().blocks(), vec![8, 8]);
        assert_eq!(LatticeGram::d16plus().blocks(), vec![16]);
    }

    #[test]
    fn rejects_bad_grams() {
        assert!(LatticeGram::new(vec![vec![1]]).is_err());
        assert!(LatticeGram::new(vec![vec![2, 1], vec![1, 2]]).is_err());
        assert!(LatticeGram::new(vec![vec![2, 1], vec![0, 2]]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = LatticeGram::e8();
        let s = serde_json::to_string(&g).unwrap();
        let back: LatticeGram = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
        assert!(serde_json::from_str::<LatticeGram>(r#"{"dim":2,"gram":[[2,1],[1,3]]}"#).is_err());
    }
}
