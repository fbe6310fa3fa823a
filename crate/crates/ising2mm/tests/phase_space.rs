use ising2mm::error::Error;
use ising2mm::phase_space::{
    classify, critical_curve_b, critical_surface_high, critical_surface_low, discriminant_j,
    discriminant_scale, i_eval, invert_phase_point, jacobian_abc, lambda_eval, map_abc,
    solve_sigma, t_critical, AbcPoint, PhasePoint, RegionLabel,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1e-300)
}

fn interior_sample(rng: &mut ChaCha8Rng) -> AbcPoint {
    let b = rng.gen_range(0.3..0.97);
    let a = 1.0 + rng.gen_range(0.05..0.95) * (1.0 / b - 1.0);
    let c = rng.gen_range(0.05..0.95) * b;
    AbcPoint::new(a, b, c).unwrap()
}

#[test]
fn multicritical_point_is_exact() {
    let p = map_abc(&AbcPoint::new(1.0, 1.0, 1.0).unwrap()).unwrap();
    assert!((p.tau - 0.25).abs() < 1e-14);
    assert!((p.t - (-5.0 / 72.0)).abs() < 1e-14);
    assert!(p.h.abs() < 1e-14);
}

#[test]
fn map_abc_frozen_values() {
    let p = map_abc(&AbcPoint::new(1.2, 0.8, 0.5).unwrap()).unwrap();
    assert!(rel(p.tau, 0.335745474112562863773011952777) < 1e-14);
    assert!(rel(p.t, -0.0568305532050394198937848485171) < 1e-14);
    assert!(rel(p.q(), 0.932196162046908315565031982942) < 1e-14);

    let p = map_abc(&AbcPoint::new(1.05, 0.9, 0.6).unwrap()).unwrap();
    assert!(rel(p.tau, 0.373972622525675979764000252301) < 1e-14);
    assert!(rel(p.t, -0.0531544918924182355609271118559) < 1e-14);
    assert!(rel(p.q(), 0.965847651746483485506035424252) < 1e-14);
}

#[test]
fn q_symmetric_in_b_and_c() {
    for (a, b) in [(1.1, 0.9), (1.3, 0.7), (1.0, 0.5)] {
        let p = map_abc(&AbcPoint::new(a, b, b).unwrap()).unwrap();
        assert!((p.q() - 1.0).abs() < 1e-14, "q = {}", p.q());
    }
}

#[test]
fn map_abc_rejects_points_outside_region() {
    assert!(AbcPoint::new(0.9, 0.8, 0.5).is_err()); // a < 1
    assert!(AbcPoint::new(1.5, 0.8, 0.5).is_err()); // a > 1/b
    assert!(AbcPoint::new(1.1, 0.8, 0.9).is_err()); // c > b
    assert!(AbcPoint::new(1.1, 1.2, 0.5).is_err()); // b > 1
}

#[test]
fn jacobian_matches_finite_differences_and_vanishes_on_faces() {
    let jac = jacobian_abc(&AbcPoint::new(1.1, 0.85, 0.6).unwrap());
    assert!(rel(jac, 7.98852948223208314858944519901e-5) < 1e-12);

    // Central finite differences of map_abc.
    let fd = |a: f64, b: f64, c: f64| {
        let h = 1e-6;
        let eval = |a: f64, b: f64, c: f64| {
            let p = map_abc(&AbcPoint { a, b, c }).unwrap();
            [p.tau, p.t, p.q()]
        };
        let mut m = [[0.0f64; 3]; 3];
        for (j, var) in [(0usize, a), (1, b), (2, c)] {
            let step = h * (1.0 + var.abs());
            let mut hi = [a, b, c];
            let mut lo = [a, b, c];
            hi[j] += step;
            lo[j] -= step;
            let vh = eval(hi[0], hi[1], hi[2]);
            let vl = eval(lo[0], lo[1], lo[2]);
            for i in 0..3 {
                m[i][j] = (vh[i] - vl[i]) / (2.0 * step);
            }
        }
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    assert!(rel(jac, fd(1.1, 0.85, 0.6)) < 1e-6);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let p = interior_sample(&mut rng);
        let j = jacobian_abc(&p);
        assert!(rel(j, fd(p.a, p.b, p.c)) < 1e-6, "at ({},{},{})", p.a, p.b, p.c);
        // Faces a=1 and a=1/b annihilate the closed form.
        assert!(jacobian_abc(&AbcPoint { a: 1.0, ..p }).abs() < 1e-12);
        assert!(
            jacobian_abc(&AbcPoint {
                a: 1.0 / p.b,
                ..p
            })
            .abs()
                < 1e-12
        );
    }
}

#[test]
fn i_eval_identities() {
    // J(0; tau, 0, q) = 0 and dJ/dsigma(0) = (tau^2 - 1)/3.
    for tau in [0.2, 0.5, 0.8] {
        let p0 = PhasePoint {
            tau,
            t: 0.0,
            h: 0.3,
        };
        assert_eq!(i_eval(0.0, &p0).unwrap(), 0.0);
        let d = 1e-6;
        let slope = (i_eval(d, &p0).unwrap() - i_eval(-d, &p0).unwrap()) / (2.0 * d);
        assert!(rel(slope, (tau * tau - 1.0) / 3.0) < 1e-8);
    }
    // J(a^2 b c; map(a,b,c)) = 0.
    let abc = AbcPoint::new(1.1, 0.9, 0.7).unwrap();
    let pp = map_abc(&abc).unwrap();
    let sigma = abc.a * abc.a * abc.b * abc.c;
    assert!(i_eval(sigma, &pp).unwrap().abs() < 1e-12);
}

#[test]
fn i_eval_guards_poles() {
    let pp = PhasePoint {
        tau: 0.5,
        t: -0.01,
        h: 0.2,
    };
    assert!(matches!(i_eval(-1.0, &pp), Err(Error::Pole { .. })));
    assert!(matches!(i_eval(1.0, &pp), Err(Error::Pole { .. })));
}

#[test]
fn lambda_eval_identities() {
    let abc = AbcPoint::new(1.15, 0.85, 0.55).unwrap();
    let pp = map_abc(&abc).unwrap();
    assert_eq!(lambda_eval(0.0, &pp).unwrap(), 0.0);
    let sigma = abc.a * abc.a * abc.b * abc.c;
    assert!((lambda_eval(sigma, &pp).unwrap() - 1.0).abs() < 1e-11);
    // lambda'(0) = (tau^2 - 1)/(3t).
    let d = 1e-6;
    let slope = (lambda_eval(d, &pp).unwrap() - lambda_eval(-d, &pp).unwrap()) / (2.0 * d);
    assert!(rel(slope, (pp.tau * pp.tau - 1.0) / (3.0 * pp.t)) < 1e-8);
}

#[test]
fn solve_sigma_roundtrip_on_interior_grid() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..60 {
        let p = interior_sample(&mut rng);
        let pp = map_abc(&p).unwrap();
        let sol = solve_sigma(&pp).unwrap();
        let expect = p.a * p.a * p.b * p.c;
        assert!(
            (sol.sigma - expect).abs() < 1e-10,
            "({}, {}, {}): {} vs {expect}",
            p.a,
            p.b,
            p.c,
            sol.sigma
        );
        assert!(sol.converged);
    }
}

#[test]
fn solve_sigma_frozen_values() {
    let s = solve_sigma(&PhasePoint {
        tau: 0.5,
        t: -0.025,
        h: 0.4,
    })
    .unwrap();
    assert!((s.sigma - 0.160526568111659366679895444498).abs() < 1e-12);
    let s = solve_sigma(&PhasePoint {
        tau: 0.15,
        t: -0.05,
        h: -0.2,
    })
    .unwrap();
    assert!((s.sigma - 0.245193558090760744794179076707).abs() < 1e-12);
}

#[test]
fn solve_sigma_at_zero_coupling_and_multicritical() {
    let s = solve_sigma(&PhasePoint {
        tau: 0.7,
        t: 0.0,
        h: 0.1,
    })
    .unwrap();
    assert_eq!(s.sigma, 0.0);

    // Approach the multicritical fold from inside: sigma -> 1.
    let t_mc = -5.0 / 72.0;
    let s = solve_sigma(&PhasePoint {
        tau: 0.25,
        t: t_mc * (1.0 - 3e-13),
        h: 0.0,
    })
    .unwrap();
    assert!(
        (s.sigma - 1.0).abs() < 1e-4,
        "sigma = {} at near-multicritical t",
        s.sigma
    );
}

#[test]
fn solve_sigma_beyond_fold_errors() {
    let err = solve_sigma(&PhasePoint {
        tau: 0.5,
        t: -1.0,
        h: 0.0,
    })
    .unwrap_err();
    match err {
        Error::BranchPointReached { t_cr, t_target } => {
            assert!(rel(t_cr, t_critical(0.5, 0.0).unwrap()) < 1e-8);
            assert_eq!(t_target, -1.0);
        }
        other => panic!("expected BranchPointReached, got {other:?}"),
    }
}

#[test]
fn t_critical_explicit_forms() {
    // Continuity at the multicritical coupling and the known limits.
    assert!(rel(t_critical(0.25, 0.0).unwrap(), -5.0 / 72.0) < 1e-14);
    assert!((t_critical(1e-9, 0.0).unwrap() - (-1.0 / 12.0)).abs() < 1e-9);
    // Piecewise formulas.
    assert!(rel(t_critical(0.1, 0.0).unwrap(), -1.0 / 12.0 + 2.0 / 9.0 * 0.01) < 1e-14);
    let rt = 0.5f64.sqrt();
    assert!(rel(
        t_critical(0.5, 0.0).unwrap(),
        -(2.0 / 9.0) * rt * (rt - 1.0) * (rt - 1.0) * (rt + 2.0)
    ) < 1e-14);
}

#[test]
fn t_critical_matches_double_root_solver_at_h_zero() {
    // The H != 0 path locates the fold numerically; at H = 0 it must agree
    // with the explicit piecewise formula.
    for k in 1..19 {
        let tau = k as f64 * 0.05;
        let explicit = t_critical(tau, 0.0).unwrap();
        let numeric = t_critical(tau, 1e-13).unwrap();
        assert!(
            rel(numeric, explicit) < 1e-8,
            "tau={tau}: {numeric} vs {explicit}"
        );
    }
}

#[test]
fn t_critical_frozen_values_at_nonzero_field() {
    assert!(rel(t_critical(0.3, 0.4).unwrap(), -0.0453457831389009974638921725091) < 1e-10);
    assert!(rel(t_critical(0.5, 0.25).unwrap(), -0.0328128679171852141467766026671) < 1e-10);
    assert!(rel(t_critical(0.15, -0.2).unwrap(), -0.0647091429611585470826964975971) < 1e-10);
}

#[test]
fn classify_labels() {
    let tol = 1e-9;
    assert_eq!(
        classify(
            &PhasePoint {
                tau: 0.3,
                t: -0.01,
                h: 0.0
            },
            tol
        )
        .unwrap(),
        RegionLabel::GenusZeroInterior
    );
    assert_eq!(
        classify(
            &PhasePoint {
                tau: 0.25,
                t: -5.0 / 72.0,
                h: 0.0
            },
            tol
        )
        .unwrap(),
        RegionLabel::Multicritical
    );
    assert_eq!(
        classify(
            &PhasePoint {
                tau: 0.5,
                t: -1.0,
                h: 0.0
            },
            tol
        )
        .unwrap(),
        RegionLabel::Outside
    );
    // Surface labels via the parametric forms.
    let low = critical_surface_low(0.8, 0.4).unwrap();
    assert_eq!(classify(&low, 1e-9).unwrap(), RegionLabel::LowTempSurface);
    let high = critical_surface_high(0.8, 0.4).unwrap();
    assert_eq!(classify(&high, 1e-9).unwrap(), RegionLabel::HighTempSurface);
    let gb = critical_curve_b(0.6).unwrap();
    assert_eq!(classify(&gb, 1e-7).unwrap(), RegionLabel::GammaB);
}

#[test]
fn critical_surfaces_match_map_on_faces() {
    let low = critical_surface_low(0.9, 0.5).unwrap();
    let via_map = map_abc(&AbcPoint::new(1.0 / 0.9, 0.9, 0.5).unwrap()).unwrap();
    assert!((low.tau - via_map.tau).abs() < 1e-12);
    assert!((low.t - via_map.t).abs() < 1e-12);
    assert!((low.h - via_map.h).abs() < 1e-12);

    let high = critical_surface_high(0.9, 0.5).unwrap();
    let via_map = map_abc(&AbcPoint::new(1.0, 0.9, 0.5).unwrap()).unwrap();
    assert!((high.tau - via_map.tau).abs() < 1e-12);
    assert!((high.t - via_map.t).abs() < 1e-12);

    // gamma_b at c = 1 is the multicritical point; b -> 1 of the high surface
    // approaches the curve.
    let gb = critical_curve_b(1.0).unwrap();
    assert!((gb.tau - 0.25).abs() < 1e-14);
    assert!((gb.t - (-5.0 / 72.0)).abs() < 1e-14);
    let near = critical_surface_high(1.0 - 1e-9, 0.6).unwrap();
    let curve = critical_curve_b(0.6).unwrap();
    assert!((near.tau - curve.tau).abs() < 1e-7);
    assert!((near.t - curve.t).abs() < 1e-7);
}

#[test]
fn discriminant_vanishes_on_critical_surfaces() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..40 {
        let b = rng.gen_range(0.35..0.95);
        let c = rng.gen_range(0.1..0.9) * b;
        for pp in [
            critical_surface_low(b, c).unwrap(),
            critical_surface_high(b, c).unwrap(),
        ] {
            let ch = pp.cosh_h();
            let scaled =
                discriminant_j(pp.tau, pp.t, ch).abs() / discriminant_scale(pp.tau, pp.t, ch);
            assert!(scaled < 1e-8, "scaled residual {scaled} at surface point");
        }
        let cc = rng.gen_range(0.1..0.99);
        let pp = critical_curve_b(cc).unwrap();
        let ch = pp.cosh_h();
        let scaled = discriminant_j(pp.tau, pp.t, ch).abs() / discriminant_scale(pp.tau, pp.t, ch);
        assert!(scaled < 1e-8, "scaled residual {scaled} on gamma_b");
    }
    // H = 0 criticality: t_low branch for tau < 1/4, t_high for tau > 1/4.
    for tau in [0.15, 0.24, 0.5, 0.8] {
        let t = t_critical(tau, 0.0).unwrap();
        let scaled = discriminant_j(tau, t, 1.0).abs() / discriminant_scale(tau, t, 1.0);
        assert!(scaled < 1e-8, "tau={tau}: scaled residual {scaled}");
    }
}

#[test]
fn discriminant_nonzero_at_interior_pin() {
    // Frozen interior evaluation; the raw value is far above the f64 noise
    // floor of the polynomial (~1e-16 * coefficient scale), certifying that
    // the point is off the discriminant's zero locus.  A blanket "scaled
    // magnitude > 1e-4 everywhere inside" does not hold: the crude
    // all-positive coefficient scale dwarfs the cancelled sum at small |t|,
    // and the full discriminant also vanishes on non-physical sheet
    // collisions inside the region.
    let pp = map_abc(&AbcPoint::new(1.2, 0.8, 0.5).unwrap()).unwrap();
    let val = discriminant_j(pp.tau, pp.t, pp.cosh_h());
    assert!(rel(val, 1.898815949605506342894927e-5) < 1e-6);
    let noise = 1e-16 * discriminant_scale(pp.tau, pp.t, pp.cosh_h());
    assert!(val.abs() > 1e4 * noise);

    let pp2 = PhasePoint {
        tau: 0.3,
        t: -0.02,
        h: 0.0,
    };
    let val2 = discriminant_j(pp2.tau, pp2.t, 1.0);
    let noise2 = 1e-16 * discriminant_scale(pp2.tau, pp2.t, 1.0);
    assert!(val2.abs() > 1e4 * noise2);
}

#[test]
fn interior_images_land_in_physical_ranges() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..100 {
        let p = interior_sample(&mut rng);
        let pp = map_abc(&p).unwrap();
        assert!(pp.tau > 0.0 && pp.tau < 1.0);
        assert!(pp.t < 0.0);
        assert!(pp.q() > 0.0 && pp.q() <= 1.0 + 1e-15);
        let sigma = p.a * p.a * p.b * p.c;
        assert!((0.0..=1.0).contains(&sigma));
    }
    // sigma = 1 exactly on the corner a = 1/b, c = b.
    let p = AbcPoint::new(1.0 / 0.8, 0.8, 0.8).unwrap();
    assert!((p.a * p.a * p.b * p.c - 1.0).abs() < 1e-15);
}

#[test]
fn inverse_map_roundtrips() {
    let mut rng = ChaCha8Rng::seed_from_u64(59);
    for _ in 0..10 {
        let p = interior_sample(&mut rng);
        let pp = map_abc(&p).unwrap();
        let back = invert_phase_point(&pp).unwrap();
        assert!(
            (back.a - p.a).abs() < 1e-7
                && (back.b - p.b).abs() < 1e-7
                && (back.c - p.c).abs() < 1e-7,
            "({}, {}, {}) vs ({}, {}, {})",
            back.a,
            back.b,
            back.c,
            p.a,
            p.b,
            p.c
        );
    }
}
