use petersson_diffop::bigc::{fl, rel_err};
use petersson_diffop::ops::*;
use petersson_diffop::verify::*;
use petersson_diffop::BigC;
use proptest::prelude::*;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn phi1_grid_and_dj0() {
    let (res, rj1) = phi1_and_dj0(&[0, 2, 4], &[1, 2], 20, 77, 1e-25);
    for r in &res {
        assert!(r.passed, "{r:?}");
        assert_eq!(r.points, 120);
    }
    assert!(rj1.iter().all(|(_, _, re, im)| re.is_finite() && im.is_finite()));
}

#[test]
fn finite_differences_agree() {
    for r in fd_suite(10, 3, 1e-20) {
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn literal_off_diagonal_breaks_dj0() {
    // with the off-diagonal entry of dZ read as d/dz2 instead of (1/2) d/dz2
    // the t^k coefficient of M(H) does not vanish
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let h = random_exp_fn(&mut rng);
    let p = random_point(&mut rng, 2, 1);
    let literal = maass_op_offdiag(&BigC::one());
    let m = decompose_at(&p, |q| eval_maass_m_with(&h, q, &literal)).unwrap();
    let good = decompose_at(&p, |q| eval_maass_m(&h, q)).unwrap();
    let scale = good.c[2].abs();
    assert!(m.c[0].abs() / scale.clone() > fl(1e-10));
    assert!(good.c[0].abs() / scale < fl(1e-25));
}

#[test]
fn maass_operator_is_finite() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in [0, 2, 4, 6] {
        let h = random_exp_fn(&mut rng);
        let p = random_point(&mut rng, k, 1);
        let (re, im) = eval_maass_m(&h, &p).to_f64();
        assert!(re.is_finite() && im.is_finite());
    }
}

#[test]
fn residual_kernel_cases() {
    assert!(residual_suite(&[0, 2, 4, 6, 12], 20, 5, 1e-25).passed);
    // growth-killing at S = T = 0: D_k(y^k) = 0
    let z = BigC::from_f64(0.2, 0.9);
    for k in [2, 4, 12] {
        assert!(residual_lhs(k, &BigC::zero(), &BigC::zero(), &z).abs() < fl(1e-60));
    }
}

#[test]
fn phi1_integer_weight_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for k in 1..=5 {
        let h = random_exp_fn(&mut rng);
        let p = random_point(&mut rng, k, 2);
        let fit = decompose_at(&p, |q| eval_phi1(&h, q)).unwrap();
        let want = phi1_decomposition(&h, &p);
        for j in 0..3 {
            assert!(rel_err(&fit.c[j], &want[j], &fl(1e-40)) < fl(1e-25), "k={k} j={j}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn dj0_vanishes_for_random_parameters(seed in any::<u64>(), k in 0i64..6, n in 1i64..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_exp_fn(&mut rng);
        let p = random_point(&mut rng, k, n);
        let m = decompose_at(&p, |q| eval_maass_m(&h, q)).unwrap();
        let t = p.t();
        let scale = (m.c[2].clone() * t.clone() * t).abs() + h.eval(&p.vars()).abs();
        prop_assert!(m.c[0].abs() / scale < fl(1e-25));
        prop_assert!(m.residual < fl(1e-25));
    }

    #[test]
    fn residual_kernel_random(seed in any::<u64>(), k in 0i64..14) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_c(&mut rng, 2.0);
        let b = random_c(&mut rng, 2.0);
        let z = BigC::from_f64(0.3, 0.5 + (seed % 100) as f64 / 66.0);
        prop_assert!(check_residual_kernel(k, &a, &b, &z, &fl(1e-25)).0);
    }

    #[test]
    fn l_ops_linear_in_exponents(seed in any::<u64>()) {
        // L2 only sees the z2 exponents
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut h = random_exp_fn(&mut rng);
        let p = random_point(&mut rng, 2, 1);
        h.beta = BigC::zero();
        prop_assert!(eval_l(LOp::L2, &h, &p).is_zero());
    }
}
