//! Exact arithmetic: Bernoulli numbers, zeta values at negative integers,
//! Cohen's class-number function and the multiplicative functions built on them.

pub mod cache;
mod seq;

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use seq::{dirichlet_inverse, dirichlet_mul, psi_seq, ArithSeq};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(p: i64, q: i64) -> Rat {
    Rat::new(BigInt::from(p), BigInt::from(q))
}

pub fn big(n: impl Into<BigInt>) -> Rat {
    Rat::from_integer(n.into())
}

/// Canonical string form: "p" for integers, "p/q" otherwise.
pub fn fmt_rat(x: &Rat) -> String {
    x.to_string()
}

pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                return None;
            }
            Some(Rat::new(p, q))
        }
        None => Some(Rat::from_integer(s.parse().ok()?)),
    }
}

pub fn pow_big(base: i64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

/// Rational power with a possibly negative exponent.
pub fn pow_rat(base: i64, e: i64) -> Rat {
    if e >= 0 {
        big(pow_big(base, e as u32))
    } else {
        Rat::new(BigInt::one(), pow_big(base, (-e) as u32))
    }
}

fn bern_table() -> &'static RwLock<Vec<Rat>> {
    static T: OnceLock<RwLock<Vec<Rat>>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(vec![Rat::one()]))
}

fn binomials(n: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for j in 0..n {
        let next = &row[j as usize] * BigInt::from(n - j) / BigInt::from(j + 1);
        row.push(next);
    }
    row
}

/// B_n with B_1 = -1/2.
pub fn bernoulli(n: u32) -> Rat {
    if n >= 3 && n % 2 == 1 {
        return Rat::zero();
    }
    if let Some(b) = bern_table().read().unwrap().get(n as usize) {
        return b.clone();
    }
    let mut t = bern_table().write().unwrap();
    while t.len() <= n as usize {
        let m = t.len() as u32;
        let b = if m >= 3 && m % 2 == 1 {
            Rat::zero()
        } else {
            // sum_{j<=m} C(m+1, j) B_j = 0
            let c = binomials(m + 1);
            let mut s = Rat::zero();
            for (j, bj) in t.iter().enumerate() {
                if !bj.is_zero() {
                    s += bj * big(c[j].clone());
                }
            }
            -s / big(c[m as usize].clone())
        };
        t.push(b);
    }
    t[n as usize].clone()
}

pub(crate) fn bernoulli_snapshot() -> Vec<Rat> {
    bern_table().read().unwrap().clone()
}

pub(crate) fn bernoulli_seed(vals: Vec<Rat>) {
    let mut t = bern_table().write().unwrap();
    if vals.len() > t.len() {
        *t = vals;
    }
}

/// zeta(1-k) = -B_k / k.
pub fn zeta_neg(k: u32) -> Rat {
    assert!(k >= 1);
    -bernoulli(k) / rat(k as i64)
}

/// The constant 2/zeta(1-k) relating the Siegel and Jacobi normalizations.
pub fn c_k(k: u32) -> Rat {
    rat(2) / zeta_neg(k)
}

pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1);
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Divisors d with d^2 | n.
pub fn square_divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e / 2 {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn sigma_pow(e: u32, n: u64) -> BigInt {
    assert!(n >= 1);
    let mut s = BigInt::zero();
    for d in divisors(n) {
        s += num_traits::pow(BigInt::from(d), e as usize);
    }
    s
}

pub fn moebius(n: u64) -> i8 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// g_k(m) = sum_{y^2 | m} mu(y) sigma_{k-1}(m/y^2).
pub fn g_k(k: u32, m: u64) -> Rat {
    let mut s = BigInt::zero();
    for y in square_divisors(m) {
        let mu = moebius(y);
        if mu != 0 {
            s += sigma_pow(k - 1, m / (y * y)) * BigInt::from(mu);
        }
    }
    big(s)
}

/// Euler-product form m^{k-1} prod_{p | m} (1 + p^{1-k}).
pub fn g_k_product(k: u32, m: u64) -> Rat {
    let mut v = big(num_traits::pow(BigInt::from(m), (k - 1) as usize));
    for (p, _) in factorize(m) {
        v *= Rat::one() + pow_rat(p as i64, 1 - k as i64);
    }
    v
}

/// Largest x1 with x1^2 | x.
pub fn square_part_root(x: u64) -> u64 {
    factorize(x).iter().map(|&(p, e)| p.pow(e / 2)).product()
}

/// #{s mod 2x : s^2 = 0 mod 4x}, via sum_{f^2 | x} f |mu(x/f^2)|.
pub fn count_sqrt_zero(x: u64) -> u64 {
    square_divisors(x)
        .into_iter()
        .filter(|&f| moebius(x / (f * f)) != 0)
        .sum()
}

pub fn count_sqrt_zero_brute(x: u64) -> u64 {
    let m = 4 * x as u128;
    (0..2 * x as u128).filter(|s| (s * s) % m == 0).count() as u64
}

/// psi(n) = sum_{d^2 | n} mu(d) sigma_1(n/d^2).
pub fn psi(n: u64) -> BigInt {
    let mut s = BigInt::zero();
    for d in square_divisors(n) {
        let mu = moebius(d);
        if mu != 0 {
            s += sigma_pow(1, n / (d * d)) * BigInt::from(mu);
        }
    }
    s
}

/// Kronecker symbol (a/n), full extension to all integers.
pub fn kronecker(a: i64, n: i64) -> i32 {
    const TAB2: [i32; 8] = [0, 1, 0, -1, 0, -1, 0, 1];
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut b = n;
    let mut v = 0;
    while b % 2 == 0 {
        v += 1;
        b /= 2;
    }
    let mut k = if v % 2 == 0 { 1 } else { TAB2[(a & 7) as usize] };
    if b < 0 {
        b = -b;
        if a < 0 {
            k = -k;
        }
    }
    let mut a = a;
    loop {
        if a == 0 {
            return if b > 1 { 0 } else { k };
        }
        let mut v = 0;
        while a % 2 == 0 {
            v += 1;
            a /= 2;
        }
        if v % 2 == 1 {
            k *= TAB2[(b & 7) as usize];
        }
        if a & b & 2 != 0 {
            k = -k;
        }
        let r = a.abs();
        a = b % r;
        b = r;
    }
}

/// Write a nonzero discriminant d = D f^2 with D fundamental.
pub fn fundamental_split(d: i64) -> (i64, u64) {
    assert!(d != 0 && d.rem_euclid(4) <= 1, "not a discriminant: {d}");
    let mut core = 1i64;
    let mut f = 1u64;
    for (p, e) in factorize(d.unsigned_abs()) {
        if e % 2 == 1 {
            core *= p as i64;
        }
        f *= p.pow(e / 2);
    }
    let core = core * d.signum();
    if core.rem_euclid(4) == 1 {
        (core, f)
    } else {
        (4 * core, f / 2)
    }
}

pub fn is_fundamental(d: i64) -> bool {
    d != 0 && d != 1 && d.rem_euclid(4) <= 1 && fundamental_split(d).1 == 1
}

fn gen_bern_table() -> &'static RwLock<HashMap<(u32, i64), Rat>> {
    static T: OnceLock<RwLock<HashMap<(u32, i64), Rat>>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(HashMap::new()))
}

/// Generalized Bernoulli number B_{r, chi_D} for D fundamental (or D = 1).
pub fn gen_bernoulli(r: u32, d: i64) -> Rat {
    if let Some(v) = gen_bern_table().read().unwrap().get(&(r, d)) {
        return v.clone();
    }
    let f = d.unsigned_abs();
    // B_{r,chi} = f^{r-1} sum_a chi(a) B_r(a/f)
    //           = sum_j C(r,j) B_j f^{j-1} sum_a chi(a) a^{r-j}
    let bits = (r as f64 + 2.0) * ((f + 1) as f64).log2() + 2.0;
    let power_sums = if bits < (64 * WIDE) as f64 {
        wide_power_sums(d, f, r)
    } else {
        big_power_sums(d, f, r)
    };
    let c = binomials(r);
    let mut s = Rat::zero();
    for j in 0..=r {
        let bj = bernoulli(j);
        if bj.is_zero() {
            continue;
        }
        let term = bj * big(&c[j as usize] * &power_sums[(r - j) as usize]) * pow_rat(f as i64, j as i64 - 1);
        s += term;
    }
    gen_bern_table().write().unwrap().insert((r, d), s.clone());
    s
}

fn big_power_sums(d: i64, f: u64, r: u32) -> Vec<BigInt> {
    let mut power_sums = vec![BigInt::zero(); r as usize + 1];
    for a in 1..=f {
        let chi = kronecker(d, a as i64);
        if chi == 0 {
            continue;
        }
        let ab = BigInt::from(a);
        let mut pw = BigInt::one();
        for e in 0..=r as usize {
            if chi > 0 {
                power_sums[e] += &pw;
            } else {
                power_sums[e] -= &pw;
            }
            pw *= &ab;
        }
    }
    power_sums
}

const WIDE: usize = 8;

/// Fixed-width unsigned accumulator, little-endian 64-bit limbs.
#[derive(Clone, Copy)]
struct Wide([u64; WIDE]);

impl Wide {
    fn one() -> Self {
        let mut w = [0u64; WIDE];
        w[0] = 1;
        Wide(w)
    }

    fn mul_small(&mut self, x: u64) {
        let mut carry = 0u128;
        for limb in self.0.iter_mut() {
            let t = *limb as u128 * x as u128 + carry;
            *limb = t as u64;
            carry = t >> 64;
        }
        debug_assert_eq!(carry, 0);
    }

    fn add(&mut self, o: &Wide) {
        let mut carry = false;
        for (a, b) in self.0.iter_mut().zip(o.0.iter()) {
            let (s1, c1) = a.overflowing_add(*b);
            let (s2, c2) = s1.overflowing_add(carry as u64);
            *a = s2;
            carry = c1 || c2;
        }
        debug_assert!(!carry);
    }

    fn to_big(self) -> BigInt {
        let mut digits = Vec::with_capacity(2 * WIDE);
        for l in self.0 {
            digits.push(l as u32);
            digits.push((l >> 32) as u32);
        }
        BigInt::from(num_bigint::BigUint::new(digits))
    }
}

/// Power sums sum_{a <= f} chi_d(a) a^e for e <= r, when f^(r+1) * f fits the accumulator.
fn wide_power_sums(d: i64, f: u64, r: u32) -> Vec<BigInt> {
    let n = r as usize + 1;
    let mut pos = vec![Wide([0; WIDE]); n];
    let mut neg = vec![Wide([0; WIDE]); n];
    for a in 1..=f {
        let chi = kronecker(d, a as i64);
        if chi == 0 {
            continue;
        }
        let acc = if chi > 0 { &mut pos } else { &mut neg };
        let mut pw = Wide::one();
        for slot in acc.iter_mut() {
            slot.add(&pw);
            pw.mul_small(a);
        }
    }
    pos.into_iter().zip(neg).map(|(p, q)| p.to_big() - q.to_big()).collect()
}

fn cohen_table() -> &'static RwLock<HashMap<(u32, u64), Rat>> {
    static T: OnceLock<RwLock<HashMap<(u32, u64), Rat>>> = OnceLock::new();
    T.get_or_init(|| RwLock::new(HashMap::new()))
}

pub(crate) fn cohen_snapshot() -> HashMap<(u32, u64), Rat> {
    cohen_table().read().unwrap().clone()
}

pub(crate) fn cohen_seed(vals: HashMap<(u32, u64), Rat>) {
    cohen_table().write().unwrap().extend(vals);
}

/// Cohen's function H(r, N).
pub fn cohen_h(r: u32, n: u64) -> Rat {
    assert!(r >= 1);
    if n == 0 {
        return zeta_neg(2 * r);
    }
    let disc = if r % 2 == 0 { n as i64 } else { -(n as i64) };
    if disc.rem_euclid(4) > 1 {
        return Rat::zero();
    }
    if let Some(v) = cohen_table().read().unwrap().get(&(r, n)) {
        return v.clone();
    }
    let (d, f) = fundamental_split(disc);
    let l = -gen_bernoulli(r, d) / rat(r as i64);
    let mut s = BigInt::zero();
    for e in divisors(f) {
        let mu = moebius(e);
        let chi = kronecker(d, e as i64);
        if mu == 0 || chi == 0 {
            continue;
        }
        let t = pow_big(e as i64, r - 1) * sigma_pow(2 * r - 1, f / e);
        if (mu as i32) * chi > 0 {
            s += t;
        } else {
            s -= t;
        }
    }
    let v = l * big(s);
    cohen_table().write().unwrap().insert((r, n), v.clone());
    v
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for a in BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

pub fn to_f64(x: &Rat) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // very large values: go through the integer parts
        let n = x.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = x.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn is_integer(x: &Rat) -> bool {
    x.is_integer()
}

pub fn abs_rat(x: &Rat) -> Rat {
    x.abs()
}
