//! Discord assembly, dual routes, and channel dynamics on random states.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sqdx::channel::{
    damping_sweep, kraus_apply, phase_damp_bloch, werner_discord_loss, werner_sqd_damped,
    DampingParams,
};
use sqdx::entropy::{entropy4, joint_entropy_closed_form, mutual_information};
use sqdx::sqd::{bell_diagonal_sqd, super_quantum_discord};
use sqdx::weakmeas::FContext;
use sqdx::xstate::{self, BlochX};

#[test]
fn mutual_information_routes_agree_and_are_nonnegative() {
    let mut rng = StdRng::seed_from_u64(0x7eed_0001);
    for _ in 0..1000 {
        let p = xstate::random_state(&mut rng).bloch();
        let mi = mutual_information(&p).unwrap();
        let closed = joint_entropy_closed_form(&p).unwrap();
        assert!((mi.s_ab - closed).abs() < 1e-10, "{} vs {closed}", mi.s_ab);
        assert!((mi.s_ab - entropy4(&p.spectrum())).abs() < 1e-14);
        assert!(mi.i >= -1e-9, "I = {}", mi.i);
        assert!((0.0..=1.0 + 1e-12).contains(&mi.s_a));
        assert!((0.0..=2.0 + 1e-12).contains(&mi.s_ab));
    }
}

#[test]
fn discord_routes_agree_on_random_states() {
    let mut rng = StdRng::seed_from_u64(0x7eed_0002);
    for k in 0..500 {
        let p = xstate::random_state(&mut rng).bloch();
        let x = [0.5, 1.0, 3.0][k % 3];
        let ctx = FContext::new(p, x).unwrap();
        let report = super_quantum_discord(&ctx).unwrap();
        // definitional: I - J
        assert!((report.sqd - (report.mutual.i - report.classical_corr)).abs() < 1e-12);
        // closed-form assembly with the E-term joint entropy
        let closed = report.mutual.s_b - joint_entropy_closed_form(&p).unwrap()
            + report.cond_entropy_min;
        assert!((report.sqd - closed).abs() < 1e-10);
        assert!(report.sqd >= -1e-9, "negative discord {}", report.sqd);
        assert!((0.0..=1.0).contains(&report.cond_entropy_min));
    }
}

#[test]
fn example_two_discord_is_monotone_in_strength() {
    let p = xstate::example_two().bloch();
    let mut last = f64::INFINITY;
    for k in 1..=20 {
        let x = 0.25 * k as f64;
        let report = super_quantum_discord(&FContext::new(p, x).unwrap()).unwrap();
        assert!(report.sqd <= last + 1e-12, "discord increased at x = {x}");
        last = report.sqd;
    }
}

#[test]
fn projective_limit_saturates() {
    for p in [
        xstate::example_two().bloch(),
        xstate::example_three().bloch(),
        BlochX::werner(0.62),
    ] {
        let a = super_quantum_discord(&FContext::new(p, 20.0).unwrap()).unwrap();
        let b = super_quantum_discord(&FContext::new(p, 25.0).unwrap()).unwrap();
        assert!((a.sqd - b.sqd).abs() < 1e-9);
        assert!(FContext::new(p, 20.0).unwrap().projective_limit());
    }
}

#[test]
fn bell_diagonal_closed_form_matches_pipeline_on_random_coefficients() {
    let mut rng = StdRng::seed_from_u64(0x7eed_0003);
    let mut checked = 0;
    while checked < 50 {
        // rejection-sample valid bell-diagonal coefficient triples
        let c1 = rng.gen_range(-1.0f64..1.0);
        let c2 = rng.gen_range(-1.0f64..1.0);
        let c3 = rng.gen_range(-1.0f64..1.0);
        let p = BlochX::bell_diagonal(c1, c2, c3);
        if p.to_density().is_err() {
            continue;
        }
        for x in [1.0, 3.0] {
            let closed = bell_diagonal_sqd(c1, c2, c3, x).unwrap();
            let full = super_quantum_discord(&FContext::new(p, x).unwrap()).unwrap().sqd;
            assert!((closed - full).abs() < 1e-10, "({c1},{c2},{c3},{x})");
        }
        checked += 1;
    }
}

#[test]
fn kraus_and_bloch_damping_routes_agree_on_random_states() {
    let mut rng = StdRng::seed_from_u64(0x7eed_0004);
    for _ in 0..200 {
        let dm = xstate::random_state(&mut rng);
        for gamma in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let d = DampingParams::new(gamma).unwrap();
            let direct = kraus_apply(&dm, d);
            let via_bloch = phase_damp_bloch(&dm.bloch(), d).to_density().unwrap();
            assert!(direct.to_matrix().max_abs_diff(&via_bloch.to_matrix()) < 1e-12);
            // trace preservation
            assert!((direct.to_matrix().trace().re - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn werner_discord_never_grows_under_damping() {
    for a in [0.2, 0.5, 0.8, 1.0] {
        for gamma in [0.1, 0.4, 0.7, 1.0] {
            let d = DampingParams::new(gamma).unwrap();
            let loss = werner_discord_loss(a, d).unwrap();
            assert!(loss >= -1e-12, "negative loss {loss} at a={a}, gamma={gamma}");
            for x in [1.0, 2.5] {
                let undamped = werner_sqd_damped(a, DampingParams::new(0.0).unwrap(), x).unwrap();
                let damped = werner_sqd_damped(a, d, x).unwrap();
                assert!(damped <= undamped + 1e-12);
                assert!((undamped - damped - loss).abs() < 1e-10);
            }
        }
    }
}

#[test]
fn damped_reports_flow_through_the_full_pipeline() {
    // Werner under damping: c3^2 >= b^2, so F(1) attains the minimum (at
    // gamma = 0 the objective is exactly flat and the tie-break reports 0).
    let gammas = [0.0, 0.2, 0.4, 0.6, 0.8, 1.0];
    let rows = damping_sweep(&BlochX::werner(0.6), 2.0, &gammas).unwrap();
    assert_eq!(rows.len(), gammas.len());
    for ((g, report), want) in rows.iter().zip(gammas) {
        assert_eq!(*g, want);
        let ctx = FContext::new(report.bloch, 2.0).unwrap();
        let at_one = sqdx::weakmeas::f_value(&ctx, 1.0);
        assert!((report.opt.f_min - at_one).abs() < 1e-12, "gamma = {want}");
        let closed = werner_sqd_damped(0.6, DampingParams::new(want).unwrap(), 2.0).unwrap();
        assert!((report.sqd - closed).abs() < 1e-10);
    }
}
