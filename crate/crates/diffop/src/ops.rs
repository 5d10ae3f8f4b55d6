//! Test functions on H2 (as functions of z_j and their conjugates treated as
//! independent variables), the Jacobi generators L_j, and the Maass operators.

use rug::ops::Pow;
use rug::Float;

use crate::bigc::{fl, pi, BigC};
use crate::jet::Jet;

/// Exponents of d/dz1, d/dzb1, d/dz2, d/dzb2, d/dz4, d/dzb4.
pub type MultiIndex = [u8; 6];

pub const VAR_NAMES: [&str; 6] = ["z1", "zb1", "z2", "zb2", "z4", "zb4"];

/// h = exp(alpha z1 + alpha' zb1 + beta z2 + beta' zb2).
#[derive(Clone, Debug)]
pub struct ExpTestFn {
    pub alpha: BigC,
    pub alpha_p: BigC,
    pub beta: BigC,
    pub beta_p: BigC,
}

impl ExpTestFn {
    pub fn new(alpha: BigC, alpha_p: BigC, beta: BigC, beta_p: BigC) -> Self {
        ExpTestFn { alpha, alpha_p, beta, beta_p }
    }

    pub fn constant() -> Self {
        ExpTestFn::new(BigC::zero(), BigC::zero(), BigC::zero(), BigC::zero())
    }

    pub fn eval(&self, v: &[BigC; 6]) -> BigC {
        (&self.alpha * &v[0] + &self.alpha_p * &v[1] + &self.beta * &v[2] + &self.beta_p * &v[3]).exp()
    }

    /// d^a h / h.
    pub fn factor(&self, a: &MultiIndex) -> BigC {
        if a[4] > 0 || a[5] > 0 {
            return BigC::zero();
        }
        self.alpha.powi(a[0] as u32)
            * self.alpha_p.powi(a[1] as u32)
            * self.beta.powi(a[2] as u32)
            * self.beta_p.powi(a[3] as u32)
    }
}

/// The factor of a test function depending only on Y = Im Z.
#[derive(Clone, Debug)]
pub enum Radial {
    One,
    /// t^k e^{R t}
    Jacobi { k: BigC, r: BigC },
    /// y1^{-1/2} t^{k - 1/2} e^{R t}
    Maass { k: BigC, r: BigC },
    /// y1^k
    YPow { k: BigC },
}

fn t_of<T: Clone>(y: &[T; 3], sub: impl Fn(&T, &T) -> T, mul: impl Fn(&T, &T) -> T, div: impl Fn(&T, &T) -> T) -> T {
    sub(&y[2], &div(&mul(&y[1], &y[1]), &y[0]))
}

impl Radial {
    pub fn jet(&self, y: &[BigC; 3]) -> Jet {
        let yj = [Jet::var(0, y[0].clone()), Jet::var(1, y[1].clone()), Jet::var(2, y[2].clone())];
        let t = || t_of(&yj, |a, b| a.sub(b), |a, b| a.mul(b), |a, b| a.mul(&b.recip()));
        match self {
            Radial::One => Jet::constant(BigC::one()),
            Radial::Jacobi { k, r } => {
                let t = t();
                t.pow(k).mul(&t.scale(r).exp())
            }
            Radial::Maass { k, r } => {
                let t = t();
                yj[0]
                    .pow(&BigC::ratio(-1, 2))
                    .mul(&t.pow(&(k.clone() - BigC::ratio(1, 2))))
                    .mul(&t.scale(r).exp())
            }
            Radial::YPow { k } => yj[0].pow(k),
        }
    }

    pub fn eval(&self, y: &[BigC; 3]) -> BigC {
        let t = || t_of(y, |a, b| a - b, |a, b| a * b, |a, b| a.clone() / b.clone());
        match self {
            Radial::One => BigC::one(),
            Radial::Jacobi { k, r } => {
                let t = t();
                t.pow(k) * (t.clone() * r.clone()).exp()
            }
            Radial::Maass { k, r } => {
                let t = t();
                y[0].pow(&BigC::ratio(-1, 2)) * t.pow(&(k.clone() - BigC::ratio(1, 2))) * (t * r.clone()).exp()
            }
            Radial::YPow { k } => y[0].pow(k),
        }
    }
}

/// F = h * g(Y).
#[derive(Clone, Debug)]
pub struct TestFn {
    pub h: ExpTestFn,
    pub g: Radial,
}

/// y_j = (z_j - zb_j) / 2i for j = 1, 2, 4.
pub fn ys(v: &[BigC; 6]) -> [BigC; 3] {
    let inv2i = BigC::from_f64(0.0, -0.5);
    [(&v[0] - &v[1]) * inv2i.clone(), (&v[2] - &v[3]) * inv2i.clone(), (&v[4] - &v[5]) * inv2i]
}

fn binom(n: u8, k: u8) -> i64 {
    (0..k as i64).fold(1, |acc, i| acc * (n as i64 - i) / (i + 1))
}

impl TestFn {
    pub fn eval(&self, v: &[BigC; 6]) -> BigC {
        self.h.eval(v) * self.g.eval(&ys(v))
    }

    /// Exact partials d^a F at v, for each requested multi-index (Leibniz rule
    /// with d/dz_j = (1/2i) d/dy_j and d/dzb_j = -(1/2i) d/dy_j on g).
    pub fn derivatives(&self, v: &[BigC; 6], alphas: &[MultiIndex]) -> Vec<BigC> {
        let jet = self.g.jet(&ys(v));
        let h = self.h.eval(v);
        let dz = BigC::from_f64(0.0, -0.5);
        let dzb = BigC::from_f64(0.0, 0.5);
        alphas
            .iter()
            .map(|a| {
                let mut total = BigC::zero();
                for b0 in 0..=a[0] {
                    for b1 in 0..=a[1] {
                        for b2 in 0..=a[2] {
                            for b3 in 0..=a[3] {
                                let beta = [b0, b1, b2, b3, 0, 0];
                                let c: MultiIndex =
                                    [a[0] - b0, a[1] - b1, a[2] - b2, a[3] - b3, a[4], a[5]];
                                let hf = self.h.factor(&beta);
                                if hf.is_zero() {
                                    continue;
                                }
                                let bin = binom(a[0], b0) * binom(a[1], b1) * binom(a[2], b2) * binom(a[3], b3);
                                let e = [
                                    (c[0] + c[1]) as usize,
                                    (c[2] + c[3]) as usize,
                                    (c[4] + c[5]) as usize,
                                ];
                                let gd = jet.derivative(e)
                                    * dz.powi((c[0] + c[2] + c[4]) as u32)
                                    * dzb.powi((c[1] + c[3] + c[5]) as u32);
                                total = total + hf * gd * BigC::int(bin);
                            }
                        }
                    }
                }
                total * h.clone()
            })
            .collect()
    }
}

/// A differential operator with coefficients frozen at a point: sum c_a d^a.
#[derive(Clone, Debug, Default)]
pub struct DiffOp {
    pub terms: Vec<(BigC, MultiIndex)>,
}

impl DiffOp {
    pub fn push(&mut self, c: BigC, a: MultiIndex) {
        self.terms.push((c, a));
    }

    pub fn scaled(mut self, s: &BigC) -> DiffOp {
        for t in &mut self.terms {
            t.0 = &t.0 * s;
        }
        self
    }

    pub fn extend(&mut self, other: DiffOp) {
        self.terms.extend(other.terms);
    }

    pub fn apply(&self, f: &TestFn, v: &[BigC; 6]) -> BigC {
        let alphas: Vec<MultiIndex> = self.terms.iter().map(|t| t.1).collect();
        let ds = f.derivatives(v, &alphas);
        self.terms.iter().zip(ds).map(|((c, _), d)| c.clone() * d).sum()
    }

    /// Closed form on h alone: sum c_a (monomial of the exponents) h.
    pub fn apply_exp(&self, h: &ExpTestFn, v: &[BigC; 6]) -> BigC {
        let s: BigC = self.terms.iter().map(|(c, a)| c.clone() * h.factor(a)).sum();
        s * h.eval(v)
    }

    pub fn apply_fd(&self, f: &dyn Fn(&[BigC; 6]) -> BigC, v: &[BigC; 6], eps: &Float) -> BigC {
        self.terms.iter().map(|(c, a)| c.clone() * fd_partial(f, v, a, eps)).sum()
    }
}

const D1: [(i64, i64); 4] = [(4, 5), (-1, 5), (4, 105), (-1, 280)];
const D2: [(i64, i64); 4] = [(8, 5), (-1, 5), (8, 315), (-1, 560)];
const D2_CENTER: (i64, i64) = (-205, 72);

/// Eighth-order central stencil for d^e/dx^e, e <= 2: (offset, weight).
fn stencil(e: u8, eps: &Float) -> Vec<(i64, BigC)> {
    let w = |p: i64, q: i64, pow: i32| BigC::ratio(p, q).scale(&(fl(1.0) / eps.clone().pow(pow)));
    match e {
        0 => vec![(0, BigC::one())],
        1 => {
            let mut v = Vec::new();
            for (j, &(p, q)) in D1.iter().enumerate() {
                let o = j as i64 + 1;
                v.push((o, w(p, q, 1)));
                v.push((-o, w(-p, q, 1)));
            }
            v
        }
        2 => {
            let mut v = vec![(0, w(D2_CENTER.0, D2_CENTER.1, 2))];
            for (j, &(p, q)) in D2.iter().enumerate() {
                let o = j as i64 + 1;
                v.push((o, w(p, q, 2)));
                v.push((-o, w(p, q, 2)));
            }
            v
        }
        _ => panic!("finite differences implemented for orders <= 2 per variable"),
    }
}

/// d^a f at v by tensor products of central stencils, each variable stepped
/// along the real axis.
pub fn fd_partial(f: &dyn Fn(&[BigC; 6]) -> BigC, v: &[BigC; 6], a: &MultiIndex, eps: &Float) -> BigC {
    let stencils: Vec<Vec<(i64, BigC)>> = a.iter().map(|&e| stencil(e, eps)).collect();
    let mut total = BigC::zero();
    let mut idx = [0usize; 6];
    loop {
        let mut w = BigC::one();
        let mut pt = v.clone();
        for j in 0..6 {
            let (o, ref c) = stencils[j][idx[j]];
            w = w * c.clone();
            if o != 0 {
                pt[j] = &pt[j] + &BigC::real(eps.clone() * Float::with_val(eps.prec(), o));
            }
        }
        total = total + w * f(&pt);
        // odometer
        let mut j = 0;
        loop {
            if j == 6 {
                return total;
            }
            idx[j] += 1;
            if idx[j] < stencils[j].len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

pub fn mi(pairs: &[(usize, u8)]) -> MultiIndex {
    let mut a = [0u8; 6];
    for &(j, e) in pairs {
        a[j] += e;
    }
    a
}

const Z1: usize = 0;
const ZB1: usize = 1;
const Z2: usize = 2;
const ZB2: usize = 3;
const Z4: usize = 4;
const ZB4: usize = 5;

/// W_j = z_j - zb_j.
fn ws(v: &[BigC; 6]) -> [BigC; 3] {
    [&v[0] - &v[1], &v[2] - &v[3], &v[4] - &v[5]]
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum LOp {
    L1,
    L2,
    L3,
    L3Prime,
    L4,
}

impl LOp {
    pub const ALL: [LOp; 5] = [LOp::L1, LOp::L2, LOp::L3, LOp::L3Prime, LOp::L4];
}

pub fn l_op(which: LOp, v: &[BigC; 6]) -> DiffOp {
    let [w1, w2, _] = ws(v);
    let mut op = DiffOp::default();
    let w11 = &w1 * &w1;
    let w22 = &w2 * &w2;
    let w12 = &w1 * &w2;
    match which {
        LOp::L1 => {
            op.push(-w11, mi(&[(Z1, 1), (ZB1, 1)]));
            op.push(-w22, mi(&[(Z2, 1), (ZB2, 1)]));
            op.push(-w12.clone(), mi(&[(ZB1, 1), (Z2, 1)]));
            op.push(-w12, mi(&[(Z1, 1), (ZB2, 1)]));
        }
        LOp::L2 => op.push(w1, mi(&[(Z2, 1), (ZB2, 1)])),
        LOp::L3Prime => {
            op.push(-w11.clone(), mi(&[(Z1, 1), (ZB2, 2)]));
            op.push(w11, mi(&[(ZB1, 1), (Z2, 2)]));
            op.push(w12.clone(), mi(&[(Z2, 2), (ZB2, 1)]));
            op.push(-w12, mi(&[(Z2, 1), (ZB2, 2)]));
        }
        LOp::L3 => {
            op = l_op(LOp::L3Prime, v).scaled(&BigC::i());
            op.extend(l_op(LOp::L2, v).scaled(&BigC::from_f64(0.0, 2.0)));
        }
        LOp::L4 => {
            let half = BigC::ratio(1, 2) * w11;
            // (d1 + db1)(d2^2 + db2^2) - (d1 - db1)(d2^2 - db2^2) = 2 d1 db2^2 + 2 db1 d2^2
            op.push(half.clone() * BigC::int(2), mi(&[(Z1, 1), (ZB2, 2)]));
            op.push(half * BigC::int(2), mi(&[(ZB1, 1), (Z2, 2)]));
            op.push(w12.clone(), mi(&[(Z2, 2), (ZB2, 1)]));
            op.push(w12, mi(&[(Z2, 1), (ZB2, 2)]));
        }
    }
    op
}

/// Phi_1 = tr((Z - Zb) ((Z - Zb) dZb)^t dZ), written out in ten terms.
pub fn phi1_op(v: &[BigC; 6]) -> DiffOp {
    let [w1, w2, w4] = ws(v);
    let mut op = DiffOp::default();
    let half = BigC::ratio(1, 2);
    op.push(&w1 * &w1, mi(&[(Z1, 1), (ZB1, 1)]));
    op.push(&w2 * &w2, mi(&[(Z1, 1), (ZB4, 1)]));
    op.push(&w2 * &w2, mi(&[(Z4, 1), (ZB1, 1)]));
    op.push(&w4 * &w4, mi(&[(Z4, 1), (ZB4, 1)]));
    op.push(&w1 * &w2, mi(&[(Z1, 1), (ZB2, 1)]));
    op.push(&w1 * &w2, mi(&[(Z2, 1), (ZB1, 1)]));
    op.push(&w2 * &w4, mi(&[(Z2, 1), (ZB4, 1)]));
    op.push(&w2 * &w4, mi(&[(Z4, 1), (ZB2, 1)]));
    op.push(half.clone() * (&w1 * &w4), mi(&[(Z2, 1), (ZB2, 1)]));
    op.push(half * (&w2 * &w2), mi(&[(Z2, 1), (ZB2, 1)]));
    op
}

/// det(dZ) det(dZb) with the off-diagonal entry of dZ equal to (1/2) d/dz2:
/// d1 db1 d4 db4 - (1/4) d1 d4 db2^2 - (1/4) db1 db4 d2^2 + (1/16) d2^2 db2^2.
pub fn maass_op() -> DiffOp {
    maass_op_offdiag(&BigC::ratio(1, 2))
}

/// The same determinant with off-diagonal entry c d/dz2.
pub fn maass_op_offdiag(c: &BigC) -> DiffOp {
    let c2 = c * c;
    let mut op = DiffOp::default();
    op.push(BigC::one(), mi(&[(Z1, 1), (ZB1, 1), (Z4, 1), (ZB4, 1)]));
    op.push(-c2.clone(), mi(&[(Z1, 1), (Z4, 1), (ZB2, 2)]));
    op.push(-c2.clone(), mi(&[(ZB1, 1), (ZB4, 1), (Z2, 2)]));
    op.push(&c2 * &c2, mi(&[(Z2, 2), (ZB2, 2)]));
    op
}

/// A point of H2 with weight k and index N (R = -4 pi N).
#[derive(Clone, Debug)]
pub struct SamplePoint {
    pub z1: BigC,
    pub z2: BigC,
    pub z4: BigC,
    pub k: i64,
    pub n: i64,
}

impl SamplePoint {
    pub fn new(z1: BigC, z2: BigC, z4: BigC, k: i64, n: i64) -> Option<Self> {
        let p = SamplePoint { z1, z2, z4, k, n };
        if p.z1.im > 0 && p.t().re > 0 {
            Some(p)
        } else {
            None
        }
    }

    pub fn vars(&self) -> [BigC; 6] {
        [self.z1.clone(), self.z1.conj(), self.z2.clone(), self.z2.conj(), self.z4.clone(), self.z4.conj()]
    }

    pub fn y(&self) -> [BigC; 3] {
        ys(&self.vars())
    }

    pub fn t(&self) -> BigC {
        let [y1, y2, y4] = self.y();
        y4 - (&y2 * &y2) / y1
    }

    pub fn det_y(&self) -> BigC {
        let [y1, y2, y4] = self.y();
        &y1 * &y4 - &y2 * &y2
    }

    pub fn r_param(&self) -> BigC {
        BigC::real(pi() * Float::with_val(crate::bigc::PREC, -4 * self.n))
    }

    pub fn k_c(&self) -> BigC {
        BigC::int(self.k)
    }

    /// The same (tau, z) with Im z4 moved so that t takes the value `t`.
    pub fn with_t(&self, t: f64) -> SamplePoint {
        let [y1, y2, _] = self.y();
        let y4 = (&y2 * &y2) / y1 + BigC::from_f64(t, 0.0);
        let z4 = BigC::new(self.z4.re.clone(), y4.re);
        SamplePoint { z4, ..self.clone() }
    }
}

pub fn eval_l(which: LOp, h: &ExpTestFn, p: &SamplePoint) -> BigC {
    let v = p.vars();
    l_op(which, &v).apply_exp(h, &v)
}

/// H = h t^k e^{Rt}.
pub fn jacobi_test_fn(h: &ExpTestFn, p: &SamplePoint) -> TestFn {
    TestFn { h: h.clone(), g: Radial::Jacobi { k: p.k_c(), r: p.r_param() } }
}

pub fn eval_h(h: &ExpTestFn, p: &SamplePoint) -> BigC {
    jacobi_test_fn(h, p).eval(&p.vars())
}

pub fn eval_phi1(h: &ExpTestFn, p: &SamplePoint) -> BigC {
    let v = p.vars();
    phi1_op(&v).apply(&jacobi_test_fn(h, p), &v)
}

/// Phi_2(H) = 16 det(Y)^{5/2} det(dZ) det(dZb) (h y1^{-1/2} t^{k-1/2} e^{Rt}).
pub fn eval_phi2(h: &ExpTestFn, p: &SamplePoint) -> BigC {
    eval_phi2_with(h, p, &maass_op())
}

pub fn eval_phi2_with(h: &ExpTestFn, p: &SamplePoint, op: &DiffOp) -> BigC {
    let v = p.vars();
    let f = TestFn { h: h.clone(), g: Radial::Maass { k: p.k_c(), r: p.r_param() } };
    BigC::int(16) * p.det_y().pow(&BigC::ratio(5, 2)) * op.apply(&f, &v)
}

/// M = Phi_2 + (k - 1/2)(k - 3/2)(Phi_1 + k(k-2)).
pub fn eval_maass_m(h: &ExpTestFn, p: &SamplePoint) -> BigC {
    eval_maass_m_with(h, p, &maass_op())
}

pub fn eval_maass_m_with(h: &ExpTestFn, p: &SamplePoint, op: &DiffOp) -> BigC {
    let k = p.k_c();
    let c = (k.clone() - BigC::ratio(1, 2)) * (k.clone() - BigC::ratio(3, 2));
    let kk = k.clone() * (k - BigC::int(2));
    eval_phi2_with(h, p, op) + c * (eval_phi1(h, p) + kk * eval_h(h, p))
}

/// Right-hand side of the Phi_1 decomposition:
/// [-(L1 + k(k-2)) t^k + (i L2 + R - 2Rk) t^{k+1} - R^2 t^{k+2}](h) e^{Rt}.
pub fn phi1_decomposition(h: &ExpTestFn, p: &SamplePoint) -> [BigC; 3] {
    let k = p.k_c();
    let r = p.r_param();
    let hv = h.eval(&p.vars());
    let l1 = eval_l(LOp::L1, h, p);
    let l2 = eval_l(LOp::L2, h, p);
    let c0 = -(l1 + k.clone() * (k.clone() - BigC::int(2)) * hv.clone());
    let c1 = BigC::i() * l2 + (r.clone() - BigC::int(2) * r.clone() * k) * hv.clone();
    let c2 = -(r.clone() * r) * hv;
    [c0, c1, c2]
}

pub fn recombine(c: &[BigC; 3], p: &SamplePoint) -> BigC {
    let t = p.t();
    let k = p.k_c();
    let poly = c[0].clone() + c[1].clone() * t.clone() + c[2].clone() * t.clone() * t.clone();
    poly * t.pow(&k) * (t * p.r_param()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigc::rel_err;

    fn sample() -> (ExpTestFn, SamplePoint) {
        let h = ExpTestFn::new(
            BigC::from_f64(0.7, 0.2),
            BigC::from_f64(-0.3, 0.5),
            BigC::from_f64(0.4, -0.9),
            BigC::from_f64(1.1, 0.3),
        );
        let p = SamplePoint::new(
            BigC::from_f64(0.3, 1.1),
            BigC::from_f64(0.2, 0.4),
            BigC::from_f64(-0.1, 2.0),
            2,
            1,
        )
        .unwrap();
        (h, p)
    }

    #[test]
    fn l_ops_vanish_on_constants() {
        let (_, p) = sample();
        for l in LOp::ALL {
            assert!(eval_l(l, &ExpTestFn::constant(), &p).is_zero());
        }
        let h = ExpTestFn::new(BigC::from_f64(0.5, 0.1), BigC::from_f64(0.2, 0.0), BigC::zero(), BigC::zero());
        assert!(eval_l(LOp::L2, &h, &p).is_zero());
    }

    #[test]
    fn phi1_matches_prototype_decomposition() {
        let (h, p) = sample();
        let lhs = eval_phi1(&h, &p);
        let rhs = recombine(&phi1_decomposition(&h, &p), &p);
        assert!(rel_err(&lhs, &rhs, &fl(1e-300)) < fl(1e-60), "{lhs} vs {rhs}");
    }

    #[test]
    fn exact_derivatives_match_fd() {
        let (h, p) = sample();
        let f = jacobi_test_fn(&h, &p);
        let v = p.vars();
        let eps = fl(2f64.powi(-24));
        for a in [mi(&[(Z1, 1)]), mi(&[(ZB2, 2)]), mi(&[(Z2, 1), (ZB4, 1)]), mi(&[(Z1, 1), (ZB1, 1), (Z2, 2)])] {
            let exact = f.derivatives(&v, &[a])[0].clone();
            let fd = fd_partial(&|x| f.eval(x), &v, &a, &eps);
            assert!(rel_err(&fd, &exact, &fl(1e-300)) < fl(1e-30), "{a:?}: {fd} vs {exact}");
        }
    }
}
