use petersson_core::arith::{count_sqrt_zero, count_sqrt_zero_brute, g_k, g_k_product, psi, psi_seq, rat, Rat};
use petersson_core::jacobi::{eis_degenerate, EisensteinFamily};
use petersson_core::klingen::{script_e_degenerate, script_e_with, Route};
use petersson_core::lattice::reduced_forms;
use petersson_core::qexp::delta_qexp;
use proptest::prelude::*;

#[test]
fn e_km_degenerate_profile() {
    let fam = EisensteinFamily::new(12, 16, 6).unwrap();
    for m in 1..=16u64 {
        let e = fam.e_km(m).unwrap();
        e.check_invariants().unwrap();
        for r in 0..2 * m as i64 {
            if (r * r) % (4 * m as i64) == 0 {
                assert_eq!(e.degenerate(r).unwrap(), eis_degenerate(12, m, 0, r), "m={m} r={r}");
            }
        }
    }
}

#[test]
fn siegel_fj_swap_symmetry() {
    // c_{e_m}(n, r) = c_{e_n}(m, r): the coefficient only sees the class of T
    let fam = EisensteinFamily::new(6, 12, 13).unwrap();
    for t in reduced_forms(100) {
        if t.n > 12 {
            continue;
        }
        let a = fam.siegel_fj(t.m as u64).unwrap().coeff(t.n, t.r).unwrap();
        let b = fam.siegel_fj(t.n as u64).unwrap().coeff(t.m, t.r).unwrap();
        assert_eq!(a, b, "{t:?}");
        let c = fam.siegel_fj(t.m as u64).unwrap().coeff(t.n, -t.r).unwrap();
        assert_eq!(a, c);
    }
}

#[test]
fn klingen_degenerate_law() {
    let d = delta_qexp(20).unwrap();
    let fam = EisensteinFamily::new(12, 12, 6).unwrap();
    for m in [4u64, 8, 9, 12] {
        let e = script_e_with(&fam, Route::Ekmfor, &d, m).unwrap();
        e.check_invariants().unwrap();
        for r in 0..2 * m as i64 {
            if (r * r) % (4 * m as i64) == 0 {
                assert_eq!(e.degenerate(r).unwrap(), script_e_degenerate(&d, m, r).unwrap());
            }
        }
    }
}

#[test]
fn psi_two_ways() {
    let s = psi_seq(2000);
    for n in 1..=2000u64 {
        assert_eq!(s.get(n), &Rat::from_integer(psi(n)), "n={n}");
    }
}

proptest! {
    #[test]
    fn g_k_forms_agree(m in 1u64..5000, k in prop::sample::select(vec![4u32, 6, 8, 10, 12])) {
        prop_assert_eq!(g_k(k, m), g_k_product(k, m));
    }

    #[test]
    fn sqrt_zero_count(x in 1u64..3000) {
        prop_assert_eq!(count_sqrt_zero(x), count_sqrt_zero_brute(x));
    }

    #[test]
    fn g_k_prime(p in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13])) {
        let want = (p as i64).pow(3) + 1;
        prop_assert_eq!(g_k(4, p), rat(want));
    }
}
