//! Randomized invariants: algebraic identities of the 2x2 primitives,
//! physicality of simulated tables, serialization round trips, and the
//! soundness of the trade-off bound on the reduced family.

use proptest::prelude::*;

use seqrac::optimizer::{ab_param, ac_param, angle_reduction_certificate, ParamPoint};
use seqrac::qubit::{
    bloch_from_state, c, cr, eig2, lambda_max_kernel, lambda_max_pair_sum_closed,
    effect_from_bias_axis, polar_decompose, projector, sqrt_psd, state_from_bloch,
    Mat2, Vec3,
};
use seqrac::randomness::{eta_from_theta, hmin_t2, hmin_w, theta_from_eta};
use seqrac::scenario::{apply_visibility, joint_table, random_strategy, RandomMode};
use seqrac::scenario::Strategy as Qrac;
use seqrac::witness::{ab_quantum_max, tradeoff_bound, witness_ab, witness_ac};

fn ball3() -> impl Strategy<Value = Vec3> {
    (0.0..=1.0f64, -1.0..=1.0f64, 0.0..std::f64::consts::TAU).prop_map(|(u, z, phi)| {
        let r = u.cbrt();
        let s = (1.0 - z * z).max(0.0).sqrt();
        [r * s * phi.cos(), r * s * phi.sin(), r * z]
    })
}

fn hermitian() -> impl Strategy<Value = Mat2> {
    (-2.0..=2.0f64, -2.0..=2.0f64, -1.0..=1.0f64, -1.0..=1.0f64)
        .prop_map(|(a, d, re, im)| Mat2::new(cr(a), c(re, im), c(re, -im), cr(d)))
}

fn complex_mat() -> impl Strategy<Value = Mat2> {
    proptest::array::uniform8(-1.0..=1.0f64)
        .prop_map(|v| Mat2::new(c(v[0], v[1]), c(v[2], v[3]), c(v[4], v[5]), c(v[6], v[7])))
}

fn any_mode() -> impl Strategy<Value = RandomMode> {
    prop_oneof![
        Just(RandomMode::General),
        Just(RandomMode::PurePrep),
        Just(RandomMode::Parametrized),
    ]
}

fn angles() -> impl Strategy<Value = ParamPoint> {
    proptest::array::uniform5(0.0..=std::f64::consts::FRAC_PI_2).prop_map(|a| ParamPoint {
        mu: a[0],
        phi: a[1],
        phi0: a[2],
        phi1: a[3],
        phi2: a[4],
    })
}

proptest! {
    #[test]
    fn bloch_round_trip(r in ball3()) {
        let state = state_from_bloch(r).unwrap();
        let back = bloch_from_state(&state);
        for k in 0..3 {
            prop_assert!((back[k] - r[k]).abs() < 1e-12);
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(m in hermitian()) {
        let e = eig2(&m).unwrap();
        let rebuilt = projector(e.v_plus)
            .scale_re(e.lambda_plus)
            .add(&projector(e.v_minus).scale_re(e.lambda_minus));
        prop_assert!(rebuilt.max_dev(&m) < 1e-9);
        let overlap = e.v_plus[0].conj() * e.v_minus[0] + e.v_plus[1].conj() * e.v_minus[1];
        prop_assert!(overlap.norm() < 1e-9);
    }

    #[test]
    fn psd_square_root_squares_back(h in hermitian()) {
        let m = h.mul(&h);
        let root = sqrt_psd(&m).unwrap();
        prop_assert!(root.mul(&root).max_dev(&m) < 1e-8);
    }

    #[test]
    fn polar_factors_recompose(k in complex_mat()) {
        let (u, p) = polar_decompose(&k).unwrap();
        prop_assert!(u.mul(&u.adjoint()).max_dev(&Mat2::identity()) < 1e-9);
        prop_assert!(u.mul(&p).max_dev(&k) < 1e-8);
        prop_assert!(p.hermiticity_defect() < 1e-9);
    }

    #[test]
    fn kernel_pair_sum_matches_closed_form(
        t in ball3(),
        a in ball3(),
        frac in 0.0..=1.0f64,
    ) {
        // shrink the axis so bias plus axis stays a valid effect pair
        let alpha = (1.0 - seqrac::qubit::norm3(t)) * frac;
        let mut total = 0.0;
        for b in 0..2u8 {
            let eff = effect_from_bias_axis(alpha, t, b).unwrap();
            total += lambda_max_kernel(&eff, a).unwrap();
        }
        prop_assert!((total - lambda_max_pair_sum_closed(alpha, t, a)).abs() < 1e-9);
    }

    #[test]
    fn simulated_tables_are_physical(seed in any::<u64>(), mode in any_mode()) {
        let table = joint_table(&random_strategy(seed, mode)).unwrap();
        prop_assert!(table.normalization_defect() < 1e-10);
        prop_assert!(table.signaling_defect() < 1e-10);
    }

    #[test]
    fn strategy_survives_json_round_trip(seed in any::<u64>(), mode in any_mode()) {
        let s = random_strategy(seed, mode);
        let back = Qrac::from_json(&s.to_json().unwrap()).unwrap();
        let t0 = joint_table(&s).unwrap();
        let t1 = joint_table(&back).unwrap();
        prop_assert_eq!(witness_ab(&t0), witness_ab(&t1));
        prop_assert_eq!(witness_ac(&t0), witness_ac(&t1));
    }

    #[test]
    fn random_strategies_respect_the_tradeoff(seed in any::<u64>(), mode in any_mode()) {
        let table = joint_table(&random_strategy(seed, mode)).unwrap();
        let (a_ab, a_ac) = (witness_ab(&table), witness_ac(&table));
        let folded = a_ab.max(1.0 - a_ab);
        prop_assert!(folded <= ab_quantum_max() + 1e-9);
        let ceiling = tradeoff_bound(folded.min(ab_quantum_max())).unwrap();
        prop_assert!(a_ac <= ceiling + 1e-9);
        prop_assert!(1.0 - a_ac <= ceiling + 1e-9);
    }

    #[test]
    fn reduced_family_sits_under_the_bound(p in angles()) {
        let a_ab = ab_param(&p);
        prop_assert!(a_ab <= ab_quantum_max() + 1e-9);
        let ceiling = tradeoff_bound(a_ab.clamp(0.5, ab_quantum_max())).unwrap();
        prop_assert!(ac_param(&p) <= ceiling + 1e-9);
    }

    #[test]
    fn angle_reduction_certificate_holds(p in angles()) {
        prop_assert!(angle_reduction_certificate(&p).unwrap().1);
    }

    #[test]
    fn visibility_scales_witness_slopes(
        seed in any::<u64>(),
        va in 0.0..=1.0f64,
        vb in 0.0..=1.0f64,
        vc in 0.0..=1.0f64,
    ) {
        let s = random_strategy(seed, RandomMode::General);
        let clean = joint_table(&s).unwrap();
        // first-reader slope is bilinear in preparation and instrument
        // visibility; second-reader slope is bilinear in preparation and
        // measurement visibility at fixed instrument noise
        let ab_noisy = witness_ab(&joint_table(&apply_visibility(&s, va, vb, 1.0).unwrap()).unwrap());
        prop_assert!((ab_noisy - 0.5 - va * vb * (witness_ab(&clean) - 0.5)).abs() < 1e-9);
        let mid = apply_visibility(&s, 1.0, vb, 1.0).unwrap();
        let ac_mid = witness_ac(&joint_table(&mid).unwrap());
        let ac_noisy = witness_ac(&joint_table(&apply_visibility(&s, va, vb, vc).unwrap()).unwrap());
        prop_assert!((ac_noisy - 0.5 - va * vc * (ac_mid - 0.5)).abs() < 1e-9);
    }

    #[test]
    fn sharpness_angle_maps_invert(eta in 0.0..=1.0f64) {
        let theta = theta_from_eta(eta).unwrap();
        prop_assert!((eta_from_theta(theta).unwrap() - eta).abs() < 1e-12);
    }

    #[test]
    fn rate_curves_are_monotone(w in 0.0..=1.0f64, dw in 0.0..=0.2f64) {
        let hi = (w + dw).min(1.0);
        prop_assert!(hmin_w(hi).unwrap() >= hmin_w(w).unwrap() - 1e-12);
        let t = 2.0 + w * (2.0 * std::f64::consts::SQRT_2 - 2.0);
        let t_hi = (t + dw).min(2.0 * std::f64::consts::SQRT_2);
        prop_assert!(hmin_t2(t_hi).unwrap() >= hmin_t2(t).unwrap() - 1e-12);
    }
}

#[test]
fn ideal_strategy_round_trips_with_sharpness_intact() {
    let s = Qrac::ideal(0.8).unwrap();
    let text = s.to_json().unwrap();
    let back = Qrac::from_json(&text).unwrap();
    for y in 0..3 {
        assert_eq!(
            seqrac::qubit::norm3(s.instruments[y].t),
            seqrac::qubit::norm3(back.instruments[y].t)
        );
    }
}
