use std::sync::OnceLock;

use petersson_core::arith::{c_k, g_k, moebius, rat, square_divisors, Rat};
use petersson_core::hecke::{apply_u, apply_u_star, apply_v, apply_v_star, VStarVariant};
use petersson_core::jacobi::{jac_eis_1, EisensteinFamily, JacExp};
use petersson_core::lattice::siegel::{a2k, SiegelCoeffs};
use petersson_core::lattice::{reduced_forms, short_vectors, BinQF, LatticeGram, Mat2, RepCounter};
use proptest::prelude::*;

fn e12() -> &'static JacExp {
    static E: OnceLock<JacExp> = OnceLock::new();
    E.get_or_init(|| jac_eis_1(12, 200).unwrap())
}

fn family(k: u32) -> &'static EisensteinFamily {
    static F4: OnceLock<EisensteinFamily> = OnceLock::new();
    static F12: OnceLock<EisensteinFamily> = OnceLock::new();
    let cell = if k == 4 { &F4 } else { &F12 };
    cell.get_or_init(|| EisensteinFamily::new(k, 12, 8).unwrap())
}

fn unimodular() -> impl Strategy<Value = Mat2> {
    // products of elementary moves keep det = +-1
    prop::collection::vec((0u8..3, -2i64..=2), 1..5).prop_map(|moves| {
        let mut u: Mat2 = [[1, 0], [0, 1]];
        for (kind, a) in moves {
            let e: Mat2 = match kind {
                0 => [[1, a], [0, 1]],
                1 => [[1, 0], [a, 1]],
                _ => [[0, 1], [1, 0]],
            };
            u = petersson_core::lattice::binqf::mat_mul(&u, &e);
        }
        u
    })
}

fn agree_common(a: &JacExp, b: &JacExp) -> bool {
    let p = a.prec().min(b.prec());
    a.truncate(p) == b.truncate(p)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn operator_outputs_are_well_defined(l in 1u64..5, n in 1u64..5) {
        let e = e12();
        let u = apply_u(e, l).unwrap();
        u.check_invariants().unwrap();
        let v = apply_v(e, n).unwrap();
        v.check_invariants().unwrap();
        let back = apply_u_star(&u, l).unwrap();
        back.check_invariants().unwrap();
        let vs = apply_v_star(&v, n, VStarVariant::Disambiguated).unwrap();
        vs.check_invariants().unwrap();
    }

    #[test]
    fn u_composition(a in 1u64..=6, b in 1u64..=6) {
        let e = e12().truncate(40);
        let lhs = apply_u(&apply_u(&e, a).unwrap(), b).unwrap();
        let rhs = apply_u(&e, a * b).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn u_v_commute(l in 1u64..=4, n in 1u64..=4) {
        let e = e12();
        let uv = apply_v(&apply_u(e, l).unwrap(), n).unwrap();
        let vu = apply_u(&apply_v(e, n).unwrap(), l).unwrap();
        prop_assert!(uv.prec() > 0);
        prop_assert!(agree_common(&uv, &vu));
    }

    #[test]
    fn a2k_is_a_class_function(idx in 0usize..60, u in unimodular()) {
        let forms = reduced_forms(100);
        let t = forms[idx % forms.len()];
        let moved = t.transform(&u);
        prop_assert_eq!(a2k(&moved, 4).unwrap(), a2k(&t, 4).unwrap());
        prop_assert_eq!(a2k(&moved, 12).unwrap(), a2k(&t, 12).unwrap());
    }
}

#[test]
fn hayashida_round_trip() {
    // E_{k,m} = c_k^{-1} g_k(m)^{-1} sum_{d^2 | m} mu(d) e_{k,m/d^2}|U_d
    for k in [4u32, 12] {
        let fam = family(k);
        for m in 1..=12u64 {
            let mut acc = JacExp::zero(k as i64, m, fam.prec()).unwrap();
            for d in square_divisors(m) {
                let mu = moebius(d);
                if mu == 0 {
                    continue;
                }
                let term = apply_u(&fam.siegel_fj(m / (d * d)).unwrap(), d).unwrap();
                acc = acc.add_scaled(&rat(mu as i64), &term).unwrap();
            }
            let back = acc.scale(&(c_k(k) * g_k(k, m)).recip());
            assert_eq!(back, fam.e_km(m).unwrap(), "k={k} m={m}");
        }
    }
}

#[test]
fn rep_number_gl2_invariance() {
    // brute-force pair count on E8 for transformed forms with small diagonal
    let e8 = LatticeGram::e8();
    let vecs = short_vectors(&e8, 3);
    let brute = |t: BinQF| -> u64 {
        let xs: Vec<&Vec<i64>> = vecs.iter().filter(|x| e8.norm(x) == t.n).collect();
        let ys: Vec<&Vec<i64>> = vecs.iter().filter(|y| e8.norm(y) == t.m).collect();
        xs.iter().map(|x| ys.iter().filter(|y| e8.inner(x, y) == t.r).count() as u64).sum()
    };
    let mut rc = RepCounter::new(&e8, 3);
    let us: [Mat2; 10] = [
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
    let mut checked = 0;
    for t in [BinQF::new(1, 0, 1), BinQF::new(1, 1, 1), BinQF::new(2, 1, 1), BinQF::new(2, 2, 2)] {
        let a = rc.count(t);
        for u in &us {
            let s = t.transform(u);
            if s.n > 3 || s.m > 3 {
                continue;
            }
            assert_eq!(brute(s), a, "{t:?} -> {s:?}");
            checked += 1;
        }
    }
    assert!(checked >= 20);
}

#[test]
fn content_multiplicativity() {
    let e8 = LatticeGram::e8();
    let mut rc = RepCounter::new(&e8, 30);
    for m in 1..=30i64 {
        let s: u64 = square_divisors(m as u64).iter().map(|&d| rc.primitive_vector_count(m / (d * d) as i64)).sum();
        assert_eq!(s, rc.vector_count(m), "m={m}");
        assert_eq!(rc.primitive_vector_count(m), rc.primitive_vector_count_inv(m));
    }
    assert_eq!(rc.primitive_vector_count(0), 0);
}

#[test]
fn saviour_on_e8() {
    let e8 = LatticeGram::e8();
    let mut rc = RepCounter::new(&e8, 16);
    for t in reduced_forms(64) {
        assert_eq!(rc.sharp_moebius(t), rc.count_primitive_y(t) as i64, "{t:?}");
        assert!(rc.sharp_moebius(t) >= rc.count_primitive(t) as i64);
    }
}

#[test]
fn primitive_inversion_round_trip() {
    let mut sc = SiegelCoeffs::new(4, 25, 26).unwrap();
    for t in reduced_forms(100) {
        let mut total = Rat::from_integer(0.into());
        for g in petersson_core::lattice::siegel::gl2_divisors(&t) {
            let q = petersson_core::lattice::siegel::quotient(&t, &g);
            total += sc.a2k_primitive(&q).unwrap();
        }
        assert_eq!(total, sc.a2k(&t).unwrap(), "{t:?}");
    }
}
