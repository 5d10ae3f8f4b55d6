//! Representation numbers A(S, T) by paired shell enumeration.

use std::collections::HashMap;

use rayon::prelude::*;

use super::binqf::{mat_det, BinQF, Mat2};
use super::enumerate::Shells;
use super::gram::LatticeGram;
use crate::arith::{gcd, moebius, square_divisors};
use crate::jacobi::isqrt;

fn is_primitive(y: &[i8]) -> bool {
    y.iter().fold(0i64, |g, &v| gcd(g, v as i64)) == 1
}

fn widen<const D: usize>(packed: &[i8]) -> Vec<[i16; D]> {
    packed
        .chunks_exact(D)
        .map(|c| {
            let mut a = [0i16; D];
            for (t, &v) in a.iter_mut().zip(c) {
                *t = v as i16;
            }
            a
        })
        .collect()
}

// entries are bounded by the shell radius, so the sum cannot overflow; wrapping
// arithmetic keeps the loop vectorizable when overflow checks are on
#[inline]
fn dot<const D: usize>(x: &[i16; D], w: &[i16; D]) -> i32 {
    let mut s = 0i32;
    for i in 0..D {
        s = s.wrapping_add((x[i] as i32).wrapping_mul(w[i] as i32));
    }
    s
}

/// h[r + rmax] = #{(x, y) half-shell pairs : x^t S y = r}.
fn pair_hist_fixed<const D: usize>(
    s: &LatticeGram,
    xs: &[i8],
    ys: &[i8],
    rmax: i64,
    primitive_y: bool,
) -> Vec<u64> {
    let xs = widen::<D>(xs);
    let len = 2 * rmax as usize + 1;
    let ys: Vec<&[i8]> = ys.chunks_exact(D).filter(|y| !primitive_y || is_primitive(y)).collect();
    ys.par_chunks(64)
        .map(|block| {
            let mut h = vec![0u64; len];
            for y in block {
                let mut w = [0i16; D];
                for (i, wi) in w.iter_mut().enumerate() {
                    let v: i64 = (0..D).map(|j| s.entry(i, j) * y[j] as i64).sum();
                    *wi = i16::try_from(v).expect("S y out of range");
                }
                for x in &xs {
                    h[(dot(x, &w) as i64 + rmax) as usize] += 1;
                }
            }
            h
        })
        .reduce(|| vec![0u64; len], |a, b| a.iter().zip(&b).map(|(p, q)| p + q).collect())
}

fn pair_hist_dyn(s: &LatticeGram, xs: &[i8], ys: &[i8], rmax: i64, primitive_y: bool) -> Vec<u64> {
    let d = s.dim();
    let len = 2 * rmax as usize + 1;
    let ys: Vec<&[i8]> = ys.chunks_exact(d).filter(|y| !primitive_y || is_primitive(y)).collect();
    ys.par_chunks(64)
        .map(|block| {
            let mut h = vec![0u64; len];
            for y in block {
                let y64: Vec<i64> = y.iter().map(|&v| v as i64).collect();
                let w: Vec<i64> = (0..d).map(|i| (0..d).map(|j| s.entry(i, j) * y64[j]).sum()).collect();
                for x in xs.chunks_exact(d) {
                    let v: i64 = x.iter().zip(&w).map(|(&a, &b)| a as i64 * b).sum();
                    h[(v + rmax) as usize] += 1;
                }
            }
            h
        })
        .reduce(|| vec![0u64; len], |a, b| a.iter().zip(&b).map(|(p, q)| p + q).collect())
}

/// Cached representation counts for one lattice.
pub struct RepCounter {
    s: LatticeGram,
    shells: Shells,
    hist: HashMap<(i64, i64, bool), Vec<u64>>,
}

impl RepCounter {
    pub fn new(s: &LatticeGram, bound: i64) -> RepCounter {
        RepCounter { s: s.clone(), shells: Shells::new(s, bound.max(1)), hist: HashMap::new() }
    }

    pub fn lattice(&self) -> &LatticeGram {
        &self.s
    }

    fn ensure(&mut self, bound: i64) {
        if bound > self.shells.bound() {
            self.shells = Shells::new(&self.s, bound.max(2 * self.shells.bound()));
        }
    }

    /// A(S, n) = #{x : Q(x) = n}.
    pub fn vector_count(&mut self, n: i64) -> u64 {
        if n < 0 {
            return 0;
        }
        self.ensure(n);
        self.shells.count(n)
    }

    /// A*(S, n): primitive x with Q(x) = n, counted directly (0 for n = 0).
    pub fn primitive_vector_count(&mut self, n: i64) -> u64 {
        if n <= 0 {
            return 0;
        }
        self.ensure(n);
        2 * self.shells.half_vectors(n).filter(|y| is_primitive(y)).count() as u64
    }

    /// A*(S, n) by inverting sum_{d^2 | n} A*(S, n/d^2) = A(S, n).
    pub fn primitive_vector_count_inv(&mut self, n: i64) -> u64 {
        if n <= 0 {
            return 0;
        }
        let mut total = 0i64;
        for t in square_divisors(n as u64) {
            let mu = moebius(t) as i64;
            if mu != 0 {
                total += mu * self.vector_count(n / (t * t) as i64) as i64;
            }
        }
        total as u64
    }

    fn pair_counts(&mut self, n: i64, m: i64, primitive_y: bool) -> &Vec<u64> {
        self.ensure(n.max(m));
        let key = (n, m, primitive_y);
        if !self.hist.contains_key(&key) {
            let rmax = 2 * isqrt((n * m) as u64) as i64 + 1;
            let (xs, ys) = (self.shells.half(n), self.shells.half(m));
            let h = match self.s.dim() {
                8 => pair_hist_fixed::<8>(&self.s, xs, ys, rmax, primitive_y),
                16 => pair_hist_fixed::<16>(&self.s, xs, ys, rmax, primitive_y),
                _ => pair_hist_dyn(&self.s, xs, ys, rmax, primitive_y),
            };
            self.hist.insert(key, h);
        }
        &self.hist[&key]
    }

    /// #{(x, y) : Q(x) = n, Q(y) = m, x^t S y = r}, optionally with y primitive.
    /// No reduction is applied, so primitivity refers to the given second column.
    fn direct(&mut self, t: BinQF, primitive_y: bool) -> u64 {
        let BinQF { n, r, m } = t;
        if n < 0 || m < 0 || t.det2() < 0 {
            return 0;
        }
        if m == 0 {
            return if primitive_y || r != 0 { 0 } else { self.vector_count(n) };
        }
        if n == 0 {
            return if r != 0 {
                0
            } else if primitive_y {
                self.primitive_vector_count(m)
            } else {
                self.vector_count(m)
            };
        }
        let h = self.pair_counts(n, m, primitive_y);
        let rmax = (h.len() as i64 - 1) / 2;
        if r.abs() > rmax {
            return 0;
        }
        2 * (h[(r + rmax) as usize] + h[(rmax - r) as usize])
    }

    /// A(S, T) for positive semidefinite T.
    pub fn count(&mut self, t: BinQF) -> u64 {
        if !t.is_semidefinite() {
            return 0;
        }
        if t.det2() == 0 {
            // rank <= 1: T ~ (c, 0, 0), and the second column must vanish
            return self.vector_count(t.content());
        }
        let (red, _) = t.reduce().expect("positive definite");
        self.direct(red, false)
    }

    /// Count of X = (x, y) with 1/2 X^t S X = T and y primitive.
    pub fn count_primitive_y(&mut self, t: BinQF) -> u64 {
        self.direct(t, true)
    }

    /// sum_{t^2 | m, t | r} mu(t) A(S, (n, r/t, m/t^2)).
    pub fn sharp_moebius(&mut self, t: BinQF) -> i64 {
        let mut total = 0i64;
        if t.m <= 0 {
            return self.count_primitive_y(t) as i64;
        }
        for d in square_divisors(t.m as u64) {
            let d = d as i64;
            let mu = moebius(d as u64) as i64;
            if mu == 0 || t.r % d != 0 {
                continue;
            }
            total += mu * self.count(BinQF::new(t.n, t.r / d, t.m / (d * d))) as i64;
        }
        total
    }

    /// A*(S, T): primitive X (elementary divisors 1, 1), by inversion over divisor classes.
    pub fn count_primitive(&mut self, t: BinQF) -> u64 {
        let mut memo = HashMap::new();
        self.count_primitive_memo(t, &mut memo)
    }

    fn count_primitive_memo(&mut self, t: BinQF, memo: &mut HashMap<BinQF, u64>) -> u64 {
        let t = t.canonical().expect("positive definite");
        if let Some(&v) = memo.get(&t) {
            return v;
        }
        let mut v = self.count(t) as i64;
        for g in super::siegel::gl2_divisors(&t) {
            if mat_det(&g) == 1 {
                continue;
            }
            v -= self.count_primitive_memo(super::siegel::quotient(&t, &g), memo) as i64;
        }
        assert!(v >= 0);
        memo.insert(t, v as u64);
        v as u64
    }
}

/// Brute-force A*(S, T): pairs (x, y) whose 2x2 minors have gcd 1.
pub fn rep_primitive_direct(s: &LatticeGram, t: BinQF) -> u64 {
    let sv = super::enumerate::short_vectors(s, t.n.max(t.m));
    let xs: Vec<&Vec<i64>> = sv.iter().filter(|x| s.norm(x) == t.n).collect();
    let ys: Vec<&Vec<i64>> = sv.iter().filter(|y| s.norm(y) == t.m).collect();
    let mut count = 0;
    for x in &xs {
        for y in &ys {
            if s.inner(x, y) != t.r {
                continue;
            }
            let mut g = 0;
            for i in 0..x.len() {
                for j in i + 1..x.len() {
                    g = gcd(g, x[i] * y[j] - x[j] * y[i]);
                }
            }
            if g == 1 {
                count += 1;
            }
        }
    }
    count
}

pub fn rep_number(s: &LatticeGram, t: BinQF) -> u64 {
    RepCounter::new(s, t.n.max(t.m)).count(t)
}

/// (Moebius sum, direct count with Y primitive); the two agree.
pub fn rep_sharp(s: &LatticeGram, t: BinQF) -> (i64, u64) {
    let mut rc = RepCounter::new(s, t.n.max(t.m));
    (rc.sharp_moebius(t), rc.count_primitive_y(t))
}

pub fn rep_primitive_vector(s: &LatticeGram, m: i64) -> u64 {
    RepCounter::new(s, m).primitive_vector_count(m)
}

pub fn rep_primitive(s: &LatticeGram, t: BinQF) -> u64 {
    RepCounter::new(s, t.n.max(t.m)).count_primitive(t)
}

/// Apply U to a 2-column matrix X (x, y) -> X U.
pub fn columns_transform(x: &[i64], y: &[i64], u: &Mat2) -> (Vec<i64>, Vec<i64>) {
    let a: Vec<i64> = x.iter().zip(y).map(|(p, q)| p * u[0][0] + q * u[1][0]).collect();
    let b: Vec<i64> = x.iter().zip(y).map(|(p, q)| p * u[0][1] + q * u[1][1]).collect();
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn e8_small_counts() {
        let e8 = LatticeGram::e8();
        let mut rc = RepCounter::new(&e8, 2);
        assert_eq!(rc.count(BinQF::new(0, 0, 0)), 1);
        assert_eq!(rc.count(BinQF::new(1, 0, 0)), 240);
        // roots y with a given x: 56 with inner product 1
        assert_eq!(rc.count(BinQF::new(1, 1, 1)), 240 * 56);
        assert_eq!(rc.count(BinQF::new(1, 0, 1)), 240 * 126);
        assert_eq!(rc.count(BinQF::new(1, 2, 1)), 240);
        assert_eq!(rc.count(BinQF::new(1, -1, 1)), 240 * 56);
    }

    #[test]
    fn primitive_vectors() {
        let e8 = LatticeGram::e8();
        let mut rc = RepCounter::new(&e8, 9);
        assert_eq!(rc.primitive_vector_count(0), 0);
        assert_eq!(rc.primitive_vector_count(1), 240);
        assert_eq!(rc.primitive_vector_count(4), rc.vector_count(4) - rc.vector_count(1));
        for n in 1..=9 {
            assert_eq!(rc.primitive_vector_count(n), rc.primitive_vector_count_inv(n), "n = {n}");
        }
    }

    #[test]
    fn saviour_small() {
        let e8 = LatticeGram::e8();
        let mut rc = RepCounter::new(&e8, 4);
        let t = BinQF::new(1, 0, 4);
        assert_eq!(rc.sharp_moebius(t), rc.count_primitive_y(t) as i64);
        let t = BinQF::new(2, 2, 4);
        assert_eq!(rc.sharp_moebius(t), rc.count_primitive_y(t) as i64);
    }

    #[test]
    fn primitive_matrix_direct() {
        let e8 = LatticeGram::e8();
        for t in [BinQF::new(2, 0, 2), BinQF::new(2, 2, 2), BinQF::new(2, 1, 1)] {
            assert_eq!(rep_primitive(&e8, t), rep_primitive_direct(&e8, t), "{t:?}");
        }
    }
}
