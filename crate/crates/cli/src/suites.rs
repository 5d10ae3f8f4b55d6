//! The verification suites. Each returns a report listing every check with
//! its first counterexample; errors are reserved for bad parameters and
//! precision shortfalls.

use clap::ValueEnum;
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use petersson_core::arith::{
    count_sqrt_zero, count_sqrt_zero_brute, fmt_rat, g_k, g_k_product, is_fundamental, is_prime, psi, psi_seq, rat, Rat,
};
use petersson_core::dirichlet::{composed_eigen, lambda_with, vnstar_vn_eigen, verify_z_identity, verify_z_identity_with, zarkovskaya_factor};
use petersson_core::hecke::{
    apply_u, apply_u_star, apply_v, apply_v_star, chain_expansions, chain_input_prec, closed_form_degenerate, degenerate_values,
    eigen_bound_scan, ChainMethod, ChainParams, VStarVariant,
};
use petersson_core::jacobi::{eis_degenerate, jac_eis_1, EisensteinFamily, JacExp};
use petersson_core::klingen::{genasy_main_term_with, script_e_degenerate, script_e_with, Route};
use petersson_core::lattice::binqf::mat_mul;
use petersson_core::lattice::report::{hauptsatz_check, repno_report, saha_sequence, theta1_qexp};
use petersson_core::lattice::siegel::SiegelCoeffs;
use petersson_core::lattice::{reduced_forms, BinQF, LatticeGram, Mat2, RepCounter};
use petersson_core::qexp::cusp_basis;
use petersson_core::{Error, Result};

use crate::{Check, SuiteReport};

/// Recorded upper bound for c_{phi_4}(0,0) / (q1 q2)^{k-5/4} over q1, q2 <= 20.
/// The scan attains it at the identity chain q1 = q2 = 1.
pub const EIGEN_BOUND: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Degenerate,
    Routes,
    Hecke,
    Saviour,
    Hauptsatz,
    Repno,
    Dirichlet,
    Diffop,
    Arith,
    Saha,
    Properties,
    All,
}

#[derive(Clone, Debug)]
pub struct SuiteOpts {
    pub k: Option<u32>,
    pub m_max: Option<u64>,
    pub prec: Option<u64>,
    pub bits: u32,
}

impl Default for SuiteOpts {
    fn default() -> Self {
        SuiteOpts { k: None, m_max: None, prec: None, bits: petersson_diffop::PREC }
    }
}

pub fn run(suite: Suite, o: &SuiteOpts) -> Result<SuiteReport> {
    let k = o.k.unwrap_or(12);
    match suite {
        Suite::Degenerate => degenerate(k, &[4, 8, 9, 12]),
        Suite::Routes => routes(k, o.m_max.unwrap_or(12), o.prec.unwrap_or(20)),
        Suite::Hecke => hecke(&o.k.map_or(vec![8, 12], |k| vec![k]), o.m_max.unwrap_or(36), 20),
        Suite::Saviour => saviour(64),
        Suite::Hauptsatz => hauptsatz(),
        Suite::Repno => Ok(SuiteReport::merge("repno", vec![weight4_exactness(64)?, weight8_exactness(3, 2)?])),
        Suite::Dirichlet => dirichlet(&o.k.map_or(vec![8, 10, 12], |k| vec![k]), o.m_max.unwrap_or(500), 8),
        Suite::Diffop => diffop(o.bits),
        Suite::Arith => arith(10_000),
        Suite::Saha => saha(&[5, 6, 7, 8, 9, 10, 11, 12, 13, 14]),
        Suite::Properties => properties(),
        Suite::All => {
            let all = [
                Suite::Degenerate,
                Suite::Routes,
                Suite::Hecke,
                Suite::Saviour,
                Suite::Hauptsatz,
                Suite::Repno,
                Suite::Dirichlet,
                Suite::Diffop,
                Suite::Arith,
                Suite::Saha,
                Suite::Properties,
            ];
            let mut parts = Vec::new();
            for s in all {
                parts.push(run(s, &SuiteOpts { k: None, m_max: None, prec: None, bits: o.bits })?);
            }
            Ok(SuiteReport::merge("all", parts))
        }
    }
}

fn show(t: &BinQF) -> String {
    format!("T=({},{},{})", t.n, t.r, t.m)
}

fn cusp_form(k: u32, prec: usize) -> Result<petersson_core::qexp::QExp> {
    cusp_basis(k, prec)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::InvalidParam(format!("no cusp forms of weight {k}")))
}

/// A(E8, T) = c_4^{-1} M(E8, T) = a_2^4(T) over reduced T with det(2T) <= det_max.
pub fn weight4_exactness(det_max: i64) -> Result<SuiteReport> {
    let e8 = LatticeGram::e8();
    let scan = reduced_forms(det_max);
    let rows = repno_report(&e8, &scan)?;
    let n_max = scan.iter().map(|t| t.n).max().unwrap_or(1);
    let m_max = scan.iter().map(|t| t.m).max().unwrap_or(1);
    let mut sc = SiegelCoeffs::new(4, m_max as u64, n_max as u64 + 1)?;
    let (theta, _) = theta1_qexp(&e8, m_max as usize + 1)?;
    let mut main = Check::new("A(E8,T) = c_4^-1 M(E8,T)");
    let mut siegel = Check::new("A(E8,T) = a_2^4(T)");
    let mut genasy = Check::new("A(E8,T) = Eisenstein-part main term of theta(E8)");
    let mut ratio = Check::new("growth ratio positive where A(S, min T) > 0");
    let mut min_ratio = f64::INFINITY;
    for (t, row) in scan.iter().zip(&rows) {
        let a = rat(row.a as i64);
        main.record(row.diff_exact.is_zero(), || format!("{} A={} main={}", show(t), row.a, row.main));
        let s = sc.a2k(t)?;
        siegel.record(a == s, || format!("{} A={} a2={}", show(t), row.a, fmt_rat(&s)));
        let g = genasy_main_term_with(&mut sc, &theta, t)?;
        genasy.record(a == g, || format!("{} A={} main={}", show(t), row.a, fmt_rat(&g)));
        if let Some(x) = row.mst_ratio {
            min_ratio = min_ratio.min(x);
            ratio.record(x > 0.0, || format!("{} ratio={x}", show(t)));
        }
    }
    let ratio = ratio.detail(format!("min ratio {min_ratio:.6e}"));
    Ok(SuiteReport::new("weight4", vec![main, siegel, genasy, ratio]))
}

fn small_forms(n_max: i64, m_max: i64) -> Vec<BinQF> {
    let mut out = Vec::new();
    for m in 1..=m_max {
        for n in m..=n_max {
            for r in 0..=m {
                let t = BinQF::new(n, r, m);
                if t.det2() > 0 {
                    out.push(t);
                }
            }
        }
    }
    out
}

/// A(E8+E8, T) = A(D16+, T) = a_2^8(T) for reduced T with n <= n_max, m <= m_max.
pub fn weight8_exactness(n_max: i64, m_max: i64) -> Result<SuiteReport> {
    let scan = small_forms(n_max, m_max);
    let mut sc = SiegelCoeffs::new(8, m_max as u64, n_max as u64 + 1)?;
    let siegel: Vec<Rat> = scan.iter().map(|t| sc.a2k(t)).collect::<Result<_>>()?;
    let mut checks = Vec::new();
    let mut counts = Vec::new();
    for (name, s) in [("E8+E8", LatticeGram::e8e8()), ("D16+", LatticeGram::d16plus())] {
        let rows = repno_report(&s, &scan)?;
        let mut c = Check::new(format!("A({name},T) = a_2^8(T)"));
        let mut d = Check::new(format!("A({name},T) = c_8^-1 M({name},T)"));
        for ((t, row), a2) in scan.iter().zip(&rows).zip(&siegel) {
            c.record(rat(row.a as i64) == *a2, || format!("{} A={} a2={}", show(t), row.a, fmt_rat(a2)));
            d.record(row.diff_exact.is_zero(), || format!("{} A={} main={}", show(t), row.a, row.main));
        }
        counts.push(rows.iter().map(|r| r.a).collect::<Vec<_>>());
        checks.push(c);
        checks.push(d);
    }
    let mut same = Check::new("A(E8+E8,T) = A(D16+,T)");
    for (i, t) in scan.iter().enumerate() {
        same.record(counts[0][i] == counts[1][i], || format!("{} {} vs {}", show(t), counts[0][i], counts[1][i]));
    }
    checks.push(same);
    Ok(SuiteReport::new("weight8", checks))
}

/// The three constructions of the Eisenstein part agree coefficientwise.
pub fn routes(k: u32, m_max: u64, prec: u64) -> Result<SuiteReport> {
    let f = cusp_form(k, (m_max * prec + 2) as usize)?;
    let fam = EisensteinFamily::new(k, m_max, prec)?;
    let mut ab = Check::new("E2e = ekmfor");
    let mut ac = Check::new("E2e = e2E");
    let mut inv = Check::new("route outputs well defined");
    let mut classes = 0;
    for m in 1..=m_max {
        let outs: Vec<JacExp> = Route::ALL.iter().map(|&r| script_e_with(&fam, r, &f, m)).collect::<Result<_>>()?;
        classes += outs[0].num_classes();
        for e in &outs {
            inv.record(e.check_invariants().is_ok() && e.prec() >= prec, || format!("m={m} prec={}", e.prec()));
        }
        for (c, other) in [(&mut ab, &outs[1]), (&mut ac, &outs[2])] {
            let d = outs[0].first_difference(other)?;
            c.record(d.is_none(), || {
                let (dd, rho, x, y) = d.clone().unwrap();
                format!("m={m} (D,rho)=({dd},{rho}) {} vs {}", fmt_rat(&x), fmt_rat(&y))
            });
        }
    }
    let ab = ab.detail(format!("{classes} coefficient classes per route, n < {prec}"));
    Ok(SuiteReport::new("routes", vec![ab, ac, inv]))
}

/// Degenerate coefficients of the Eisenstein part against the closed law,
/// and of E_{k,m} against epsilon_{m,0}.
pub fn degenerate(k: u32, ms: &[u64]) -> Result<SuiteReport> {
    let m_top = ms.iter().copied().max().unwrap_or(1).max(16);
    let f = cusp_form(k, (4 * m_top + 8) as usize)?;
    let fam = EisensteinFamily::new(k, m_top, m_top / 4 + 2)?;
    let mut law = Check::new("Eisenstein part degenerate law");
    for &m in ms {
        for route in Route::ALL {
            let e = script_e_with(&fam, route, &f, m)?;
            for r in 0..2 * m as i64 {
                if (r * r) % (4 * m as i64) != 0 {
                    continue;
                }
                let got = e.degenerate(r)?;
                let want = script_e_degenerate(&f, m, r)?;
                law.record(got == want, || format!("{} m={m} r={r}: {} vs {}", route.tag(), fmt_rat(&got), fmt_rat(&want)));
            }
        }
    }
    let mut prof = Check::new("E_{k,m} degenerate profile, m <= 16");
    for m in 1..=16u64 {
        let e = fam.e_km(m)?;
        for r in 0..2 * m as i64 {
            if (r * r) % (4 * m as i64) == 0 {
                let got = e.degenerate(r)?;
                let want = eis_degenerate(k, m, 0, r);
                prof.record(got == want, || format!("m={m} r={r}: {} vs {}", fmt_rat(&got), fmt_rat(&want)));
            }
        }
    }
    Ok(SuiteReport::new("degenerate", vec![law, prof]))
}

/// Moebius sum against the direct primitive-Y count on E8.
pub fn saviour(det_max: i64) -> Result<SuiteReport> {
    let e8 = LatticeGram::e8();
    let scan = reduced_forms(det_max);
    let bound = scan.iter().map(|t| t.n).max().unwrap_or(1);
    let mut rc = RepCounter::new(&e8, bound);
    let mut eq = Check::new("Moebius sum = primitive-Y count");
    let mut ge = Check::new("A# >= A*");
    for t in &scan {
        let m = rc.sharp_moebius(*t);
        let d = rc.count_primitive_y(*t);
        eq.record(m == d as i64, || format!("{} {m} vs {d}", show(t)));
        let p = rc.count_primitive(*t);
        ge.record(d >= p, || format!("{} A#={d} A*={p}", show(t)));
    }
    Ok(SuiteReport::new("saviour", vec![eq, ge]))
}

/// Mass weights proportional to 1/|Aut(L)| for the rank-16 genus.
pub fn rank16_weights() -> (Rat, Rat) {
    let w8: BigInt = BigInt::from(696_729_600u64);
    let aut_e8e8 = BigInt::from(2) * &w8 * &w8;
    let fact16: BigInt = (1..=16u64).map(BigInt::from).product();
    let aut_d16 = BigInt::from(1u64 << 15) * fact16;
    let a = Rat::new(1.into(), aut_e8e8);
    let b = Rat::new(1.into(), aut_d16);
    let total = &a + &b;
    (a / &total, b / total)
}

pub fn hauptsatz() -> Result<SuiteReport> {
    let mut checks = Vec::new();
    let one = hauptsatz_check(&[(LatticeGram::e8(), rat(1))], &reduced_forms(64))?;
    checks.push(hauptsatz_to_check("rank 8, genus {E8}", &one));
    let (w1, w2) = rank16_weights();
    let g16 = [(LatticeGram::e8e8(), w1), (LatticeGram::d16plus(), w2)];
    let rep = hauptsatz_check(&g16, &small_forms(2, 2))?;
    checks.push(hauptsatz_to_check("rank 16, genus {E8+E8, D16+}", &rep));
    Ok(SuiteReport::new("hauptsatz", checks))
}

fn hauptsatz_to_check(name: &str, rep: &petersson_core::lattice::report::HauptsatzReport) -> Check {
    let mut c = Check::new(name);
    for (m, avg, e, ok) in &rep.degree1 {
        c.record(*ok, || format!("degree 1, m={m}: {avg} vs {e}"));
    }
    for row in &rep.degree2 {
        c.record(row.ok, || format!("{} {} vs {}", show(&row.t), row.average, row.siegel));
    }
    c
}

/// Closed forms of the phi_1..phi_4 chain against the composed operators,
/// proportionality of phi_4 to E_{k,1}, and the eigenvalue growth bound.
pub fn hecke(ks: &[u32], m_max: u64, q_max: u64) -> Result<SuiteReport> {
    let mut closed = Check::new(format!("closed forms = composed operators, m <= {m_max}"));
    let mut prop = Check::new("phi_4 proportional to E_{k,1}");
    let mut wd = Check::new("chain outputs well defined");
    let mut bound = Check::new(format!("c_phi4(0,0)/(q1 q2)^(k-5/4) <= {EIGEN_BOUND} for q1, q2 <= {q_max}"));
    let mut max_seen: f64 = 0.0;
    for &k in ks {
        let mut need = 1;
        for m in 1..=m_max {
            for p in ChainParams::all_for(k, m) {
                need = need.max(chain_input_prec(&p, 3));
            }
        }
        let e1 = jac_eis_1(k, need)?;
        let params: Vec<ChainParams> = (1..=m_max).flat_map(|m| ChainParams::all_for(k, m)).collect();
        let results: Vec<Result<(ChainParams, Vec<(i64, [Rat; 4], [Rat; 4])>, bool, Option<Rat>)>> = params
            .par_iter()
            .map(|p| {
                let phis = chain_expansions(p, &e1, 3)?;
                let ok = phis.iter().all(|f| f.check_invariants().is_ok());
                let mut rows = Vec::new();
                for r in (0..2 * p.m() as i64).step_by(2) {
                    rows.push((r, degenerate_values(&phis, r)?, closed_form_degenerate(p, r)));
                }
                let c00 = phis[3].degenerate(0)?;
                let ratio = phis[3].ratio_to(&e1.truncate(phis[3].prec()));
                let prop_ok = if c00.is_zero() { phis[3].is_zero() } else { ratio == Some(c00.clone()) };
                Ok((*p, rows, ok, prop_ok.then_some(c00)))
            })
            .collect();
        for res in results {
            let (p, rows, ok, c00) = res?;
            let tag = format!("k={k} q1={} l1={} q2={} l2={}", p.q1, p.l1, p.q2, p.l2);
            wd.record(ok, || tag.clone());
            for (r, comp, cf) in rows {
                closed.record(comp == cf, || {
                    let show4 = |v: &[Rat; 4]| v.iter().map(fmt_rat).collect::<Vec<_>>().join(",");
                    format!("{tag} r={r}: composed [{}] closed [{}]", show4(&comp), show4(&cf))
                });
            }
            prop.record(c00.is_some(), || tag.clone());
        }
        let composed = eigen_bound_scan(k, &(1..=m_max).collect::<Vec<_>>(), Some(q_max), ChainMethod::Composed)?;
        let wide = eigen_bound_scan(k, &(1..=400).collect::<Vec<_>>(), Some(q_max), ChainMethod::ClosedForm)?;
        for e in composed.entries.iter().chain(&wide.entries) {
            max_seen = max_seen.max(e.ratio);
            bound.record(e.ratio.is_finite() && e.ratio <= EIGEN_BOUND, || {
                format!("k={k} q1={} l1={} q2={} l2={} ratio={}", e.q1, e.l1, e.q2, e.l2, e.ratio)
            });
        }
    }
    let bound = bound.detail(format!("max ratio {max_seen}"));
    Ok(SuiteReport::new("hecke", vec![closed, prop, wd, bound]))
}

/// The Dirichlet series factorization, the Zarkovskaya product, the composed
/// V*_N V_N eigenvalue and a mutation control that must be detected.
pub fn dirichlet(ks: &[u32], n_max: u64, eigen_max: u64) -> Result<SuiteReport> {
    let mut z = Check::new(format!("zeta factorization, N <= {n_max}"));
    let mut zk = Check::new(format!("Zarkovskaya product, N <= {n_max}"));
    let mut eig = Check::new(format!("composed V*_N V_N eigenvalue, N <= {eigen_max}"));
    let mut ctl = Check::new("mutated t-exponent is rejected");
    for &k in ks {
        for (c, rep) in [(&mut z, verify_z_identity(k, n_max)?), (&mut zk, zarkovskaya_factor(k, n_max)?)] {
            c.record(rep.passed, || {
                format!("k={k} N={:?}: {} vs {}", rep.first_mismatch, rep.lhs.clone().unwrap_or_default(), rep.rhs.clone().unwrap_or_default())
            });
        }
        for n in 1..=eigen_max {
            let got = composed_eigen(k, n)?;
            let want = vnstar_vn_eigen(k, n);
            eig.record(got.as_ref() == Some(&want), || {
                format!("k={k} N={n}: composed {} vs {}", got.as_ref().map_or("not proportional".into(), fmt_rat), fmt_rat(&want))
            });
        }
        let bad = verify_z_identity_with(k, n_max.min(50), |n| lambda_with(k, n, k - 1))?;
        ctl.record(!bad.passed, || format!("k={k}: mutated identity passed"));
    }
    Ok(SuiteReport::new("dirichlet", vec![z, zk, eig, ctl]))
}

pub fn diffop(bits: u32) -> Result<SuiteReport> {
    if bits != petersson_diffop::PREC {
        return Err(Error::InvalidParam(format!("only {}-bit precision is built in, got {bits}", petersson_diffop::PREC)));
    }
    let rep = petersson_diffop::verify::run_suite(20, 2024, true);
    let checks = rep
        .identities
        .iter()
        .map(|r| {
            let mut c = Check::new(&r.name);
            c.record(r.passed, || format!("max rel err {:.3e} > {:.0e}", r.max_rel_err, r.tolerance));
            c.cases = r.points as u64;
            c.detail(format!("max_rel_err={:.3e} tolerance={:.0e} bits={}", r.max_rel_err, r.tolerance, r.precision_bits))
        })
        .collect();
    Ok(SuiteReport::new("diffop", checks))
}

pub fn arith(n: u64) -> Result<SuiteReport> {
    let mut gk = Check::new(format!("g_k sum = product, m <= {n}"));
    for k in [4u32, 6, 8, 10, 12] {
        let bad: Vec<u64> = (1..=n).into_par_iter().filter(|&m| g_k(k, m) != g_k_product(k, m)).collect();
        for m in 1..=n {
            gk.record(!bad.contains(&m), || format!("k={k} m={m}"));
        }
    }
    let mut nx = Check::new(format!("N(x) closed form = brute force, x <= {n}"));
    let diffs: Vec<(u64, u64, u64)> = (1..=n)
        .into_par_iter()
        .filter_map(|x| {
            let (a, b) = (count_sqrt_zero(x), count_sqrt_zero_brute(x));
            (a != b).then_some((x, a, b))
        })
        .collect();
    for x in 1..=n {
        nx.record(!diffs.iter().any(|d| d.0 == x), || {
            let d = diffs[0];
            format!("x={} {} vs {}", d.0, d.1, d.2)
        });
    }
    let mut ps = Check::new(format!("psi divisor sum = Dirichlet product, n <= {n}"));
    let seq = psi_seq(n as usize);
    for j in 1..=n {
        let direct = Rat::from_integer(psi(j));
        ps.record(seq.get(j) == &direct, || format!("n={j}"));
    }
    Ok(SuiteReport::new("arith", vec![gk, nx, ps]))
}

pub fn saha(m_list: &[u64]) -> Result<SuiteReport> {
    let seq = saha_sequence(m_list, petersson_core::lattice::report::SAHA_CAP)?;
    let mut c = Check::new("increasing prime fundamental discriminants");
    let mut minimal = Check::new("n_j minimal");
    let mut prev = 0i64;
    for (t, &m) in seq.iter().zip(m_list) {
        let d = t.det2();
        let ok = d > prev && is_prime(d as u64) && d % 4 == 3 && is_fundamental(-d) && t.is_reduced() && t.m == m as i64 && t.r == 1;
        c.record(ok, || format!("{} D={d}", show(t)));
        let earlier = (m as i64 + 1..t.n).find(|&n| {
            let dd = 4 * m as i64 * n - 1;
            dd > prev && is_prime(dd as u64)
        });
        minimal.record(earlier.is_none(), || format!("m={m}: n={} admissible before {}", earlier.unwrap(), t.n));
        prev = d;
    }
    Ok(SuiteReport::new("saha", vec![c, minimal]))
}

const UNIMODULAR: [Mat2; 10] = [
    [[1, 0], [0, 1]],
    [[0, 1], [1, 0]],
    [[1, 1], [0, 1]],
    [[1, 0], [1, 1]],
    [[1, -1], [0, 1]],
    [[-1, 0], [0, 1]],
    [[1, 0], [-1, 1]],
    [[0, -1], [1, 1]],
    [[1, 1], [1, 2]],
    [[2, 1], [1, 1]],
];

/// Structural laws of the operators and coefficient families.
pub fn properties() -> Result<SuiteReport> {
    let e = jac_eis_1(12, 200)?;
    let mut wd = Check::new("operator outputs well defined");
    for l in 1..=4u64 {
        for n in 1..=4u64 {
            let u = apply_u(&e, l)?;
            let v = apply_v(&e, n)?;
            let us = apply_u_star(&u, l)?;
            let vs = apply_v_star(&v, n, VStarVariant::Disambiguated)?;
            for (name, x) in [("U", &u), ("V", &v), ("U*", &us), ("V*", &vs)] {
                wd.record(x.check_invariants().is_ok(), || format!("{name} l={l} N={n}"));
            }
        }
    }

    let mut comp = Check::new("U_a U_b = U_ab, a, b <= 6");
    let small = e.truncate(40);
    for a in 1..=6u64 {
        let ua = apply_u(&small, a)?;
        for b in 1..=6u64 {
            let lhs = apply_u(&ua, b)?;
            let rhs = apply_u(&small, a * b)?;
            comp.record(lhs == rhs, || format!("a={a} b={b}"));
        }
    }

    let mut comm = Check::new("U_l V_N = V_N U_l, l, N <= 4");
    for l in 1..=4u64 {
        for n in 1..=4u64 {
            let uv = apply_v(&apply_u(&e, l)?, n)?;
            let vu = apply_u(&apply_v(&e, n)?, l)?;
            let p = uv.prec().min(vu.prec());
            comm.record(p > 0 && uv.truncate(p) == vu.truncate(p), || format!("l={l} N={n}"));
        }
    }

    let mut round = Check::new("Hayashida relation and inverse compose to identity, m <= 12");
    for k in [4u32, 12] {
        let fam = EisensteinFamily::new(k, 12, 8)?;
        let ck = petersson_core::arith::c_k(k);
        for m in 1..=12u64 {
            let mut acc = JacExp::zero(k as i64, m, fam.prec())?;
            for d in petersson_core::arith::square_divisors(m) {
                let mu = petersson_core::arith::moebius(d);
                if mu != 0 {
                    acc = acc.add_scaled(&rat(mu as i64), &apply_u(&fam.siegel_fj(m / (d * d))?, d)?)?;
                }
            }
            let back = acc.scale(&(&ck * g_k(k, m)).recip());
            round.record(back == fam.e_km(m)?, || format!("k={k} m={m}"));
        }
    }

    // a_2^k read off the Fourier-Jacobi coefficient at any representative
    // with positive diagonal agrees with the value at the reduced form
    let mut class = Check::new("a_2^k is a reduction-class function, det(2T) <= 100");
    for k in [4u32, 12] {
        let mut sc = SiegelCoeffs::new(k, 12, 40)?;
        let fam = EisensteinFamily::new(k, 30, 40)?;
        for t in reduced_forms(100) {
            let want = sc.a2k(&t)?;
            for u in &UNIMODULAR {
                for v in &UNIMODULAR {
                    let s = t.transform(&mat_mul(u, v));
                    if s.m > 30 || s.n >= 40 {
                        continue;
                    }
                    let got = fam.siegel_fj(s.m as u64)?.coeff(s.n, s.r)?;
                    class.record(got == want, || format!("k={k} {} ~ {}", show(&t), show(&s)));
                }
            }
        }
    }
    Ok(SuiteReport::new("properties", vec![wd, comp, comm, round, class]))
}
