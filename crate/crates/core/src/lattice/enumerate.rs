//! Short-vector enumeration (Fincke-Pohst) and shell storage.

use rayon::prelude::*;

use super::gram::LatticeGram;
use crate::arith::to_f64;

/// Enumeration data: Q(x) = sum_i q_i (x_i + sum_{j>i} mu_ij x_j)^2, computed
/// exactly and rounded to f64 for pruning. Pruning uses a widened bound and
/// every emitted vector has its norm recomputed exactly.
pub struct Enumerator<'a> {
    s: &'a LatticeGram,
    q: Vec<f64>,
    mu: Vec<Vec<f64>>,
}

const SLACK: f64 = 1e-7;

impl<'a> Enumerator<'a> {
    pub fn new(s: &'a LatticeGram) -> Self {
        let (mu, q) = s.ldl();
        Enumerator {
            s,
            q: q.iter().map(to_f64).collect(),
            mu: mu.iter().map(|row| row.iter().map(to_f64).collect()).collect(),
        }
    }

    fn dim(&self) -> usize {
        self.q.len()
    }

    /// Range of the top coordinate.
    fn top_range(&self, bound: i64) -> (i64, i64) {
        let n = self.dim() - 1;
        let rad = (bound as f64 / self.q[n]).sqrt() + SLACK;
        ((-rad).ceil() as i64, rad.floor() as i64)
    }

    fn rec(&self, i: usize, x: &mut [i64], partial: f64, bound: f64, f: &mut dyn FnMut(&[i64], i64)) {
        let mut c = 0.0;
        for j in i + 1..self.dim() {
            c -= self.mu[i][j] * x[j] as f64;
        }
        let rem = bound - partial;
        if rem < -SLACK {
            return;
        }
        let rad = (rem.max(0.0) / self.q[i]).sqrt() + SLACK;
        let lo = (c - rad).ceil() as i64;
        let hi = (c + rad).floor() as i64;
        for v in lo..=hi {
            x[i] = v;
            let t = v as f64 - c;
            let p = partial + self.q[i] * t * t;
            if p > bound + SLACK {
                continue;
            }
            if i == 0 {
                let r = p.round();
                let norm = if (p - r).abs() < 1e-6 { r as i64 } else { self.s.norm(x) };
                debug_assert_eq!(norm, self.s.norm(x));
                if norm as f64 <= bound {
                    f(x, norm);
                }
            } else {
                self.rec(i - 1, x, p, bound, f);
            }
        }
        x[i] = 0;
    }

    /// Visit x with Q(x) <= bound and x[top] = top.
    fn visit_top(&self, bound: i64, top: i64, f: &mut dyn FnMut(&[i64], i64)) {
        let n = self.dim();
        let mut x = vec![0i64; n];
        x[n - 1] = top;
        let t = top as f64;
        let p = self.q[n - 1] * t * t;
        if p > bound as f64 + SLACK {
            return;
        }
        if n == 1 {
            let norm = self.s.norm(&x);
            if norm <= bound {
                f(&x, norm);
            }
            return;
        }
        self.rec(n - 2, &mut x, p, bound as f64, f);
    }

    /// Sequential visit of every x with Q(x) <= bound.
    pub fn for_each(&self, bound: i64, mut f: impl FnMut(&[i64], i64)) {
        let (lo, hi) = self.top_range(bound);
        for top in lo..=hi {
            self.visit_top(bound, top, &mut f);
        }
    }

    /// Number of vectors of each norm 0..=bound, in parallel over the top coordinate.
    pub fn count_by_norm(&self, bound: i64) -> Vec<u64> {
        let (lo, hi) = self.top_range(bound);
        let len = bound as usize + 1;
        (lo..=hi)
            .into_par_iter()
            .map(|top| {
                let mut c = vec![0u64; len];
                self.visit_top(bound, top, &mut |_, nrm| c[nrm as usize] += 1);
                c
            })
            .reduce(|| vec![0u64; len], |a, b| a.iter().zip(&b).map(|(x, y)| x + y).collect())
    }
}

/// All x with Q(x) <= bound (including 0).
pub fn short_vectors(s: &LatticeGram, bound: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    if bound < 0 {
        return out;
    }
    Enumerator::new(s).for_each(bound, |x, _| out.push(x.to_vec()));
    out
}

/// Vectors of norm 1..=bound up to sign (first nonzero coordinate positive),
/// packed as i8 rows grouped by norm.
pub struct Shells {
    dim: usize,
    bound: i64,
    half: Vec<Vec<i8>>,
}

fn positive_first(x: &[i64]) -> bool {
    x.iter().find(|&&v| v != 0).map_or(false, |&v| v > 0)
}

impl Shells {
    pub fn new(s: &LatticeGram, bound: i64) -> Shells {
        let e = Enumerator::new(s);
        let dim = s.dim();
        let (lo, hi) = e.top_range(bound.max(0));
        let parts: Vec<Vec<Vec<i8>>> = (lo..=hi)
            .into_par_iter()
            .map(|top| {
                let mut local = vec![Vec::new(); bound.max(0) as usize + 1];
                e.visit_top(bound.max(0), top, &mut |x, nrm| {
                    if nrm > 0 && positive_first(x) {
                        for &v in x {
                            assert!(v.abs() < 128, "coordinate {v} does not fit the packed shell format");
                            local[nrm as usize].push(v as i8);
                        }
                    }
                });
                local
            })
            .collect();
        let mut half = vec![Vec::new(); bound.max(0) as usize + 1];
        for p in parts {
            for (n, v) in p.into_iter().enumerate() {
                half[n].extend(v);
            }
        }
        Shells { dim, bound, half }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    /// Packed half shell of norm n (n >= 1).
    pub fn half(&self, n: i64) -> &[i8] {
        &self.half[n as usize]
    }

    /// Number of vectors of norm n (both signs; 1 for n = 0).
    pub fn count(&self, n: i64) -> u64 {
        if n == 0 {
            1
        } else {
            2 * (self.half[n as usize].len() / self.dim) as u64
        }
    }

    pub fn half_vectors(&self, n: i64) -> impl Iterator<Item = &[i8]> {
        self.half[n as usize].chunks_exact(self.dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_short_vectors() {
        let e8 = LatticeGram::e8();
        assert_eq!(short_vectors(&e8, 0), vec![vec![0; 8]]);
        let v = short_vectors(&e8, 1);
        assert_eq!(v.len(), 241);
        assert!(v.iter().all(|x| e8.norm(x) <= 1));
        assert_eq!(Enumerator::new(&e8).count_by_norm(3), vec![1, 240, 2160, 6720]);
    }

    #[test]
    fn e8e8_additivity() {
        let g = LatticeGram::e8e8();
        assert_eq!(short_vectors(&g, 1).len(), 481);
        let sh = Shells::new(&g, 2);
        assert_eq!(sh.count(1), 480);
        assert_eq!(sh.count(2), 2160 * 2 + 240 * 240);
    }
}
