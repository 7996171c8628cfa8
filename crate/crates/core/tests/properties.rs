use std::f64::consts::PI;

use al_ist::multiplier::{log_delta, p_poly, MultiplierBundle};
use al_ist::nlft::{fc_plus, nlft_forward, nlft_forward_naive, shift_check, szego_identity_check};
use al_ist::reference::{picard_solve, rk4_integrate, Boundary, LatticeState};
use al_ist::schur::{l2_distance_circle, stability_constant, RationalSchur, SchurStep};
use al_ist::solver::{multiplier_coefficients, solve_point};
use al_ist::{CircleGrid, LaurentPoly, Sequence};
use num_complex::Complex64;
use proptest::prelude::*;

fn disk(amp: f64) -> impl Strategy<Value = Complex64> {
    (0.0..amp, 0.0..2.0 * PI).prop_map(|(r, th)| Complex64::from_polar(r, th))
}

fn datum(max_len: usize, amp: f64) -> impl Strategy<Value = Sequence> {
    (-8i64..8, prop::collection::vec(disk(amp), 1..=max_len))
        .prop_map(|(o, v)| Sequence::new(o, v).unwrap())
}

fn one_sided(max_len: usize, amp: f64) -> impl Strategy<Value = Sequence> {
    prop::collection::vec(disk(amp), 1..=max_len).prop_map(|v| Sequence::new(0, v).unwrap())
}

fn poly(max_len: usize) -> impl Strategy<Value = LaurentPoly> {
    (-20i64..20, prop::collection::vec(disk(2.0), 1..=max_len))
        .prop_map(|(o, v)| LaurentPoly::new(o, v))
}

fn max_diff(a: &LaurentPoly, b: &LaurentPoly) -> f64 {
    (a - b).max_abs_coeff()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fft_product_matches_schoolbook(a in poly(120), b in poly(90)) {
        let fast = &a * &b;
        let slow = a.mul_direct(&b);
        prop_assert!(max_diff(&fast, &slow) <= 1e-12 * (a.l1_norm() * b.l1_norm()).max(1.0));
    }

    #[test]
    fn conj_flip_is_an_involution_and_grid_matches_horner(a in poly(40)) {
        prop_assert_eq!(a.conj_flip().conj_flip(), a.clone());
        let grid = CircleGrid::new(64, 1.0).unwrap();
        for (m, v) in a.eval_grid(&grid).iter().enumerate().step_by(7) {
            let direct = a.eval(grid.node(m)).unwrap();
            prop_assert!((v - direct).norm() <= 1e-12 * a.l1_norm().max(1.0));
        }
    }

    #[test]
    fn reflection_is_an_involution(q in datum(10, 0.9)) {
        prop_assert_eq!(q.reflected().reflected(), q);
    }

    #[test]
    fn eta_is_multiplicative_and_gammas_stay_in_disk(q in one_sided(10, 0.7), m in 1usize..14) {
        let f = fc_plus(&q).unwrap();
        let SchurStep::Next { gamma, next } = f.step() else { unreachable!() };
        let whole = f.coefficients(m).eta();
        let rest = next.coefficients(m - 1).eta();
        prop_assert!((whole - (1.0 - gamma.norm_sqr()) * rest).abs() <= 1e-12);
        for g in f.coefficients(m).gammas {
            prop_assert!(g.norm() < 1.0 + 1e-9);
        }
    }

    #[test]
    fn schur_coefficients_recover_one_sided_data(q in one_sided(16, 0.8)) {
        let got = fc_plus(&q).unwrap().coefficients(q.len() + 3);
        for (k, g) in got.gammas.iter().enumerate() {
            prop_assert!((g - q.get(k as i64)).norm() <= 1e-9, "site {}", k);
        }
    }

    #[test]
    fn stability_inequality_and_coefficient_corollary(
        p in one_sided(12, 0.6),
        q in one_sided(12, 0.6),
        r_big in any::<bool>(),
    ) {
        let r = if r_big { 0.5 } else { 0.3 };
        let f = fc_plus(&p).unwrap();
        let g = fc_plus(&q).unwrap();
        let eta = p.log_szego_product().min(q.log_szego_product()).exp();
        let c = stability_constant(eta, r).unwrap();
        let base = l2_distance_circle(&f, &g, r, 1024).unwrap();
        let (mut fk, mut gk) = (f, g);
        for n in 0..=12 {
            let d = l2_distance_circle(&fk, &gk, r, 1024).unwrap();
            let log_rhs = c.log_value - n as f64 * r.ln() + base.ln();
            prop_assert!(d <= log_rhs.exp() + 1e-8, "n = {}", n);
            prop_assert!((fk.value_at_zero() - gk.value_at_zero()).norm() <= d + 1e-10);
            fk = fk.iterate(1).unwrap();
            gk = gk.iterate(1).unwrap();
        }
    }

    #[test]
    fn transform_is_unitary_outer_and_tree_equals_naive(q in datum(24, 0.5)) {
        let t = nlft_forward(&q).unwrap();
        let grid = t.default_grid();
        prop_assert!(t.unitarity_defect(&grid) <= 1e-9);
        let a0 = t.a_at_zero();
        prop_assert!(a0.re > 0.0 && a0.im == 0.0);
        let big = CircleGrid::unit(4096).unwrap();
        let mean_log = t.a.eval_grid(&big).iter().map(|v| v.norm_sqr().ln()).sum::<f64>() / 4096.0;
        prop_assert!((mean_log - 2.0 * a0.re.ln()).abs() <= 1e-8);
        let n = nlft_forward_naive(&q).unwrap();
        let scale: f64 = q.values().iter().map(|v| 1.0 / (1.0 - v.norm_sqr())).product();
        prop_assert!(max_diff(&t.a, &n.a) <= 1e-10 * scale);
        prop_assert!(max_diff(&t.b, &n.b) <= 1e-10 * scale);
    }

    #[test]
    fn szego_identity_and_shift_law(q in datum(8, 0.7), s in -6i64..6) {
        let grid = CircleGrid::unit(4096).unwrap();
        let z = szego_identity_check(&q, &grid).unwrap();
        prop_assert!((z.circle_mean - z.site_sum).abs() <= 1e-9);
        prop_assert!((z.minus_two_log_a0 - z.site_sum).abs() <= 1e-10);
        prop_assert!(shift_check(&q, s, &CircleGrid::unit(256).unwrap()).unwrap() <= 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn multiplier_is_faithful_and_schur(t in 0.05f64..4.0, extra in 0u64..20) {
        let mut n = t.ceil() as u64 + 1;
        while log_delta(n, t) >= 0.0 { n += 1; }
        n += extra;
        let b = MultiplierBundle::new(n, t).unwrap();
        let grid = CircleGrid::unit((4 * n as usize).next_power_of_two()).unwrap();
        let p = p_poly(n, t).eval_grid(&grid);
        for (v, z) in p.iter().zip(grid.nodes()) {
            let e = (Complex64::new(0.0, t) * (z + z.inv())).exp();
            prop_assert!((v - e).norm() <= b.delta + 1e-13);
        }
        let gmax = b.g.eval_grid(&grid).iter().map(|v| v.norm()).fold(0.0, f64::max);
        prop_assert!(gmax <= 1.0 - b.delta * b.delta + 1e-12);
        prop_assert!(log_delta(n + 1, t) <= log_delta(n, t));
        for r in [0.3, 0.5, 0.8] {
            let rg = CircleGrid::new(512, r).unwrap();
            let m = b.g.eval_grid(&rg).iter().map(|v| v.norm()).fold(0.0, f64::max);
            prop_assert!(m <= (t / r).exp() * (r.powi(n as i32) + 3.0 * b.delta));
        }
    }

    #[test]
    fn time_reflection_and_translation(q in datum(5, 0.5), t in 0.1f64..1.0, n0 in -3i64..3, s in -5i64..5) {
        let a = solve_point(&q, -t, n0, 1e-6, None).unwrap().value;
        let b = solve_point(&q.negated(), t, n0, 1e-6, None).unwrap().value;
        prop_assert_eq!(a, -b);
        let base = solve_point(&q, t, n0, 1e-6, None).unwrap().value;
        let moved = solve_point(&q.shifted(-s), t, n0 - s, 1e-6, None).unwrap().value;
        prop_assert!((base - moved).norm() <= 1e-10);
    }

    #[test]
    fn multiplier_approximations_form_a_cauchy_sequence(q in one_sided(4, 0.5), t in 0.1f64..1.0) {
        let eta = q.log_szego_product().exp();
        let c = stability_constant(eta, 0.5).unwrap().log_value;
        let j = 2i64;
        let mut prev: Option<Complex64> = None;
        for n in 6u64..16 {
            if log_delta(n, t) >= 0.0 { continue; }
            let cur = multiplier_coefficients(&q, t, n, (n as i64 + j + 1) as usize).unwrap()
                .gammas[(n as i64 + j) as usize];
            if let Some(p) = prev {
                let bound = (6f64.ln() + c + log_delta(n - 1, t) + 4.0 * t
                    + (n as i64 - 1 + j + 1) as f64 * 2f64.ln()).exp();
                prop_assert!((cur - p).norm() <= bound);
            }
            prev = Some(cur);
        }
    }

    #[test]
    fn lattice_flow_keeps_modulus_and_product(q in datum(6, 0.6), t in 0.1f64..0.8) {
        let s = rk4_integrate(&q, t, 1e-3, Some(30), Boundary::Zero).unwrap();
        prop_assert!(s.q.max_modulus() < 1.0);
        let start = LatticeState { q: q.clone(), t: 0.0, boundary: Boundary::Zero };
        let drift = al_ist::reference::conserved_product(&s) - al_ist::reference::conserved_product(&start);
        prop_assert!(drift.abs() <= 1e-8);
        let p = picard_solve(&q, t, Some(30)).unwrap();
        for k in -30..=30 {
            prop_assert!((p.q.get(k) - s.q.get(k)).norm() <= 1e-7);
        }
    }
}

#[test]
fn sharpness_ratio_is_exactly_r_to_minus_n() {
    let delta = Complex64::new(0.3, 0.0);
    for r in [0.3, 0.5, 0.7] {
        for n in 1..=10 {
            let f = RationalSchur::polynomial(LaurentPoly::monomial(delta, n)).unwrap();
            let z = RationalSchur::zero();
            let before = l2_distance_circle(&f, &z, r, 1024).unwrap();
            let after = l2_distance_circle(&f.iterate(n as usize).unwrap(), &z, r, 1024).unwrap();
            assert!((after / before - r.powi(-(n as i32))).abs() <= 1e-10 * r.powi(-(n as i32)));
        }
    }
}

#[test]
fn widening_the_lattice_stays_within_the_direct_bound() {
    let q = Sequence::new(-1, vec![Complex64::new(0.3, 0.2), Complex64::new(-0.4, 0.1), Complex64::new(0.2, 0.0)]).unwrap();
    let t = 0.3;
    let wide = rk4_integrate(&q, t, 1e-3, Some(40), Boundary::Zero).unwrap().q.get(0);
    for r in [6u64, 8, 10, 12] {
        let narrow = rk4_integrate(&q, t, 1e-3, Some(r), Boundary::Zero).unwrap().q.get(0);
        let bound = al_ist::solver::localization_bound_direct(t, 0.5, r, 0, None);
        assert!((wide - narrow).norm() <= bound, "R = {r}");
    }
}
