//! Identity checks: t-decomposition, the vanishing t^k coefficient of M(H),
//! the degree-one residual kernel, and finite-difference cross-checks.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::bigc::{fl, rel_err, BigC, PREC};
use crate::ops::*;
use crate::DiffopError;

/// Coefficients (c0, c1, c2) with value_i = (c0 + c1 t_i + c2 t_i^2) t_i^k e^{R t_i},
/// fitted on the first three samples; residual is the largest relative misfit
/// on the remaining ones.
#[derive(Clone, Debug)]
pub struct TDecomposition {
    pub c: [BigC; 3],
    pub residual: Float,
}

pub fn t_decompose(samples: &[(BigC, BigC)], k: &BigC, r: &BigC) -> Result<TDecomposition, DiffopError> {
    if samples.len() < 4 {
        return Err(DiffopError::IllConditioned(format!("need >= 4 samples, got {}", samples.len())));
    }
    let scale = samples.iter().map(|(t, _)| t.abs()).fold(fl(0.0), |a, b| if b > a { b } else { a });
    for i in 0..samples.len() {
        for j in i + 1..samples.len() {
            if (&samples[i].0 - &samples[j].0).abs() < scale.clone() * fl(1e-6) {
                return Err(DiffopError::IllConditioned(format!("t samples {i} and {j} nearly coincide")));
            }
        }
    }
    let reduced: Vec<(BigC, BigC)> = samples
        .iter()
        .map(|(t, v)| (t.clone(), v.clone() / (t.pow(k) * (t.clone() * r.clone()).exp())))
        .collect();
    // Lagrange interpolation through the first three points
    let (t0, t1, t2) = (&reduced[0].0, &reduced[1].0, &reduced[2].0);
    let (v0, v1, v2) = (&reduced[0].1, &reduced[1].1, &reduced[2].1);
    let l = |vi: &BigC, ta: &BigC, tb: &BigC, ti: &BigC| {
        let den = (ti - ta) * (ti - tb);
        let w = vi.clone() / den;
        // w (t - ta)(t - tb) = w (t^2 - (ta + tb) t + ta tb)
        [w.clone() * (ta * tb), -(w.clone() * (ta + tb)), w]
    };
    let p0 = l(v0, t1, t2, t0);
    let p1 = l(v1, t0, t2, t1);
    let p2 = l(v2, t0, t1, t2);
    let c = [
        p0[0].clone() + p1[0].clone() + p2[0].clone(),
        p0[1].clone() + p1[1].clone() + p2[1].clone(),
        p0[2].clone() + p1[2].clone() + p2[2].clone(),
    ];
    let mut residual = fl(0.0);
    for (t, v) in &reduced[3..] {
        let pred = c[0].clone() + c[1].clone() * t.clone() + c[2].clone() * t.clone() * t.clone();
        let e = rel_err(&pred, v, &fl(1e-300));
        if e > residual {
            residual = e;
        }
    }
    Ok(TDecomposition { c, residual })
}

/// Offsets of t used for decompositions (Im z4 varies, tau and z fixed).
pub const T_SAMPLES: [f64; 4] = [0.6, 1.1, 1.7, 2.4];

pub fn decompose_at(p: &SamplePoint, f: impl Fn(&SamplePoint) -> BigC) -> Result<TDecomposition, DiffopError> {
    let samples: Vec<(BigC, BigC)> = T_SAMPLES
        .iter()
        .map(|&t| {
            let q = p.with_t(t);
            (q.t(), f(&q))
        })
        .collect();
    t_decompose(&samples, &p.k_c(), &p.r_param())
}

/// D_k(f gb y^k) with D_k = 4 y^2 d dzb - k(k-1), for f = e^{a tau}, g = e^{b tau}.
pub fn residual_lhs(k: i64, a: &BigC, b: &BigC, z: &BigC) -> BigC {
    let h = ExpTestFn::new(a.clone(), b.conj(), BigC::zero(), BigC::zero());
    let f = TestFn { h, g: Radial::YPow { k: BigC::int(k) } };
    let v = [z.clone(), z.conj(), BigC::zero(), BigC::zero(), BigC::zero(), BigC::zero()];
    let y = BigC::real(z.im.clone());
    let d = f.derivatives(&v, &[mi(&[(0, 1), (1, 1)]), [0; 6]]);
    BigC::int(4) * (&y * &y) * d[0].clone() - BigC::int(k * (k - 1)) * d[1].clone()
}

/// K(f, g) = 4 f' gb' y^{k+2} + 2ik (f' gb - f gb') y^{k+1}.
pub fn residual_rhs(k: i64, a: &BigC, b: &BigC, z: &BigC) -> BigC {
    let f = (a * z).exp();
    let gb = (b.conj() * z.conj()).exp();
    let fp = a * &f;
    let gbp = b.conj() * gb.clone();
    let y = BigC::real(z.im.clone());
    BigC::int(4) * fp.clone() * gbp.clone() * y.powi((k + 2) as u32)
        + BigC::from_f64(0.0, 2.0 * k as f64) * (fp * gb - f * gbp) * y.powi((k + 1) as u32)
}

pub fn check_residual_kernel(k: i64, a: &BigC, b: &BigC, z: &BigC, tol: &Float) -> (bool, Float) {
    let lhs = residual_lhs(k, a, b, z);
    let rhs = residual_rhs(k, a, b, z);
    let floor = (a.abs() + b.abs() + fl(1.0)) * z.im.clone().pow(k as i32) * fl(1e-40);
    let e = rel_err(&lhs, &rhs, &floor);
    (e < *tol, e)
}

pub fn random_c(rng: &mut impl Rng, max_abs: f64) -> BigC {
    loop {
        let (x, y): (f64, f64) = (rng.gen_range(-max_abs..max_abs), rng.gen_range(-max_abs..max_abs));
        if x * x + y * y <= max_abs * max_abs {
            return BigC::from_f64(x, y);
        }
    }
}

pub fn random_exp_fn(rng: &mut impl Rng) -> ExpTestFn {
    ExpTestFn::new(random_c(rng, 2.0), random_c(rng, 2.0), random_c(rng, 2.0), random_c(rng, 2.0))
}

/// Im z1 in [0.5, 2], |Im z2| < Im z1, t in [0.5, 2].
pub fn random_point(rng: &mut impl Rng, k: i64, n: i64) -> SamplePoint {
    let y1 = rng.gen_range(0.5..2.0);
    let y2 = rng.gen_range(-0.9..0.9) * y1;
    let t = rng.gen_range(0.5..2.0);
    let z1 = BigC::from_f64(rng.gen_range(-0.5..0.5), y1);
    let z2 = BigC::from_f64(rng.gen_range(-0.5..0.5), y2);
    let z4 = BigC::from_f64(rng.gen_range(-0.5..0.5), y2 * y2 / y1 + t);
    SamplePoint::new(z1, z2, z4, k, n).expect("valid sample point")
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResult {
    pub name: String,
    pub points: usize,
    pub max_rel_err: f64,
    pub tolerance: f64,
    pub precision_bits: u32,
    pub passed: bool,
}

impl IdentityResult {
    fn new(name: &str, errs: &[Float], tol: f64) -> Self {
        let max = errs.iter().fold(fl(0.0), |a, b| if *b > a { b.clone() } else { a });
        IdentityResult {
            name: name.into(),
            points: errs.len(),
            max_rel_err: max.to_f64(),
            tolerance: tol,
            precision_bits: PREC,
            passed: errs.len() > 0 && max < fl(tol),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DiffopReport {
    pub identities: Vec<IdentityResult>,
    /// (k, N, Re, Im) of c1 - 2R(k - 1/2)(L1 + r)(h) at each point; recorded only.
    pub rj1_samples: Vec<(i64, i64, f64, f64)>,
}

impl DiffopReport {
    pub fn passed(&self) -> bool {
        self.identities.iter().all(|r| r.passed)
    }
}

fn grid(seed: u64, ks: &[i64], ns: &[i64], per: usize) -> Vec<(ExpTestFn, SamplePoint)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for &k in ks {
        for &n in ns {
            for _ in 0..per {
                let h = random_exp_fn(&mut rng);
                out.push((h, random_point(&mut rng, k, n)));
            }
        }
    }
    out
}

/// Phi_1 decomposition pointwise and via t-fits; c0 of M(H) against the scale of c1 t, c2 t^2, h.
pub fn phi1_and_dj0(ks: &[i64], ns: &[i64], per: usize, seed: u64, tol: f64) -> (Vec<IdentityResult>, Vec<(i64, i64, f64, f64)>) {
    let pts = grid(seed, ks, ns, per);
    let rows: Vec<(Float, Float, Float, (i64, i64, f64, f64))> = pts
        .par_iter()
        .map(|(h, p)| {
            let floor = fl(1e-300);
            let lhs = eval_phi1(h, p);
            let dec = phi1_decomposition(h, p);
            let e_point = rel_err(&lhs, &recombine(&dec, p), &floor);
            let fit = decompose_at(p, |q| eval_phi1(h, q)).expect("well-separated samples");
            let mut e_fit = fit.residual.clone();
            for j in 0..3 {
                let e = rel_err(&fit.c[j], &dec[j], &dec.iter().map(|c| c.abs()).fold(fl(1e-300), |a, b| if b > a { b } else { a }));
                if e > e_fit {
                    e_fit = e;
                }
            }
            let m = decompose_at(p, |q| eval_maass_m(h, q)).expect("well-separated samples");
            let t = p.t();
            let hv = h.eval(&p.vars());
            let scale = [(m.c[1].clone() * t.clone()).abs(), (m.c[2].clone() * t.clone() * t.clone()).abs(), hv.abs()]
                .into_iter()
                .fold(fl(0.0), |a, b| if b > a { b } else { a });
            let mut e_m = m.c[0].abs() / scale;
            if m.residual > e_m {
                e_m = m.residual.clone();
            }
            // recorded: c1 - 2R(k - 1/2)(L1 + r)(h), r = -(k - 1/2)(k - 3/2)
            let k = p.k_c();
            let rr = -((k.clone() - BigC::ratio(1, 2)) * (k.clone() - BigC::ratio(3, 2)));
            let l1r = eval_l(LOp::L1, h, p) + rr * hv;
            let rj1 = m.c[1].clone() - BigC::int(2) * p.r_param() * (k - BigC::ratio(1, 2)) * l1r;
            let (re, im) = rj1.to_f64();
            (e_point, e_fit, e_m, (p.k, p.n, re, im))
        })
        .collect();
    let e1: Vec<Float> = rows.iter().map(|r| r.0.clone()).collect();
    let e2: Vec<Float> = rows.iter().map(|r| r.1.clone()).collect();
    let e3: Vec<Float> = rows.iter().map(|r| r.2.clone()).collect();
    (
        vec![
            IdentityResult::new("phi1_decomposition", &e1, tol),
            IdentityResult::new("phi1_t_fit", &e2, tol),
            IdentityResult::new("dj0_vanishing", &e3, tol),
        ],
        rows.into_iter().map(|r| r.3).collect(),
    )
}

pub fn residual_suite(ks: &[i64], per: usize, seed: u64, tol: f64) -> IdentityResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut errs = Vec::new();
    for &k in ks {
        for _ in 0..per {
            let a = random_c(&mut rng, 2.0);
            let b = random_c(&mut rng, 2.0);
            let z = BigC::from_f64(rng.gen_range(-0.5..0.5), rng.gen_range(0.5..2.0));
            errs.push(check_residual_kernel(k, &a, &b, &z, &fl(tol)).1);
        }
    }
    IdentityResult::new("residual_kernel", &errs, tol)
}

/// Every operator against high-order central differences.
pub fn fd_suite(per: usize, seed: u64, tol: f64) -> Vec<IdentityResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = Float::with_val(PREC, Float::i_exp(1, -24));
    let mut out = Vec::new();
    let pts: Vec<(ExpTestFn, SamplePoint)> =
        (0..per).map(|i| (random_exp_fn(&mut rng), random_point(&mut rng, [0, 2, 4][i % 3], 1 + (i as i64 % 2)))).collect();
    for l in LOp::ALL {
        let errs: Vec<Float> = pts
            .par_iter()
            .map(|(h, p)| {
                let v = p.vars();
                let op = l_op(l, &v);
                let exact = op.apply_exp(h, &v);
                let fd = op.apply_fd(&|x| h.eval(x), &v, &eps);
                rel_err(&fd, &exact, &(h.eval(&v).abs() * fl(1e-30)))
            })
            .collect();
        out.push(IdentityResult::new(&format!("fd_{l:?}"), &errs, tol));
    }
    let errs: Vec<Float> = pts
        .par_iter()
        .map(|(h, p)| {
            let v = p.vars();
            let f = jacobi_test_fn(h, p);
            let fd = phi1_op(&v).apply_fd(&|x| f.eval(x), &v, &eps);
            rel_err(&fd, &eval_phi1(h, p), &fl(1e-300))
        })
        .collect();
    out.push(IdentityResult::new("fd_phi1", &errs, tol));
    let errs: Vec<Float> = pts
        .par_iter()
        .map(|(h, p)| {
            let v = p.vars();
            let f = TestFn { h: h.clone(), g: Radial::Maass { k: p.k_c(), r: p.r_param() } };
            let pre = BigC::int(16) * p.det_y().pow(&BigC::ratio(5, 2));
            let fd = pre * maass_op().apply_fd(&|x| f.eval(x), &v, &eps);
            rel_err(&fd, &eval_phi2(h, p), &fl(1e-300))
        })
        .collect();
    out.push(IdentityResult::new("fd_phi2", &errs, tol));
    out
}

/// The full suite: Phi_1 decomposition and D_0^J = 0 for k in {0, 2, 4}, N in {1, 2},
/// the residual kernel, and (optionally) the finite-difference cross-checks.
pub fn run_suite(points: usize, seed: u64, with_fd: bool) -> DiffopReport {
    let (mut identities, rj1) = phi1_and_dj0(&[0, 2, 4], &[1, 2], points, seed, 1e-25);
    identities.push(residual_suite(&[0, 2, 4, 12], points, seed + 1, 1e-25));
    if with_fd {
        identities.extend(fd_suite(10, seed + 2, 1e-20));
    }
    DiffopReport { identities, rj1_samples: rj1 }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decompose_pure_power() {
        let k = BigC::int(2);
        let r = BigC::from_f64(-4.0, 0.0);
        let samples: Vec<(BigC, BigC)> = T_SAMPLES
            .iter()
            .map(|&t| {
                let t = BigC::from_f64(t, 0.0);
                (t.clone(), BigC::int(3) * t.pow(&k) * (t * r.clone()).exp())
            })
            .collect();
        let d = t_decompose(&samples, &k, &r).unwrap();
        assert!(rel_err(&d.c[0], &BigC::int(3), &fl(1e-300)) < fl(1e-70));
        assert!(d.c[1].abs() < fl(1e-70) && d.c[2].abs() < fl(1e-70));
        assert!(d.residual < fl(1e-70));
        let close = vec![samples[0].clone(), samples[0].clone(), samples[1].clone(), samples[2].clone()];
        assert!(t_decompose(&close, &k, &r).is_err());
    }

    #[test]
    fn constant_residual_kernel() {
        let z = BigC::from_f64(0.1, 1.3);
        for k in [0, 2, 4] {
            assert!(residual_lhs(k, &BigC::zero(), &BigC::zero(), &z).abs() < fl(1e-60));
            assert!(residual_rhs(k, &BigC::zero(), &BigC::zero(), &z).is_zero());
        }
    }

    #[test]
    fn trivial_phi1() {
        // h = 1, k = 0: Phi_1(e^{Rt}) = (Rt - R^2 t^2) e^{Rt}
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let p = random_point(&mut rng, 0, 1);
        let got = eval_phi1(&ExpTestFn::constant(), &p);
        let (t, r) = (p.t(), p.r_param());
        let want = (r.clone() * t.clone() - r.clone() * r.clone() * t.clone() * t.clone()) * (r * t).exp();
        assert!(rel_err(&got, &want, &fl(1e-300)) < fl(1e-60));
    }

    #[test]
    fn small_suite() {
        let rep = run_suite(2, 11, false);
        for r in &rep.identities {
            assert!(r.passed, "{r:?}");
        }
    }
}
