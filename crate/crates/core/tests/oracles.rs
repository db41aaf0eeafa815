mod common;

use std::f64::consts::PI;

use common::{airy_jump, erf_gap_integral, hyp1f2_exact, q};
use jumprate::grid::{l1_distance, make_jump_function, Grid1D, GridFunction1D, JumpIC};
use jumprate::schemes::{integrate_to, SchemeKind, SchemeSpec};
use jumprate::similarity::{
    erf_profile, erf_profile_for, first_order_norm_gap, godunov2_profile, godunov2_trust_region, hyp1f2,
    scaled_frame_difference, scaled_ratio_quadrature, stretch, SimilarityProfile,
};

#[test]
fn hyp1f2_matches_rational_series() {
    let triples = [(q(2, 3), q(4, 3), q(5, 3)), (q(1, 3), q(2, 3), q(4, 3))];
    for (a, b1, b2) in &triples {
        for k in -32..=32 {
            let z = q(k, 4);
            let want = hyp1f2_exact(a, b1, b2, &z, 200);
            let got = hyp1f2(to_f(a), to_f(b1), to_f(b2), k as f64 / 4.0).unwrap();
            assert!(
                (got.value - want).abs() <= 1e-12 * want.abs(),
                "z = {}: {} vs {want}",
                k as f64 / 4.0,
                got.value
            );
        }
    }
    let want = hyp1f2_exact(&q(1, 3), &q(2, 3), &q(4, 3), &q(1, 1), 200);
    let got = hyp1f2(1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0, 1.0).unwrap().value;
    assert!((got - want).abs() <= 1e-15 * want);
}

fn to_f(x: &num_rational::BigRational) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap()
}

#[test]
fn godunov2_profile_matches_airy_integral() {
    let c = 3f64.cbrt();
    for k in -44..=44 {
        let t = q(k, 8);
        let xi = c * k as f64 / 8.0;
        let want = airy_jump(&t);
        let got = godunov2_profile(xi).unwrap();
        assert!((got - want).abs() < 1e-10, "xi = {xi}: {got} vs {want}");
    }
}

#[test]
fn godunov2_profile_center_and_slope() {
    assert!((godunov2_profile(0.0).unwrap() - 1.0 / 3.0).abs() < 1e-15);
    let h = 1e-4;
    let slope = (godunov2_profile(h).unwrap() - godunov2_profile(-h).unwrap()) / (2.0 * h);
    let want = 2.0 / (3.0 * libm::tgamma(2.0 / 3.0));
    assert!((slope - want).abs() < 1e-8);
}

#[test]
fn godunov2_trust_region_is_about_twelve() {
    let (lo, hi) = godunov2_trust_region();
    assert!(lo <= -12.0 && hi >= 12.0, "({lo}, {hi})");
    assert!(lo >= -16.0 && hi <= 14.0, "({lo}, {hi})");
}

fn band_mean(lo: f64, hi: f64) -> f64 {
    let n = 401;
    (0..n)
        .map(|k| godunov2_profile(lo + (hi - lo) * k as f64 / (n - 1) as f64).unwrap())
        .sum::<f64>()
        / n as f64
}

#[test]
fn godunov2_tail_means() {
    assert!((band_mean(8.0, 12.0) - 1.0).abs() < 0.02);
    assert!((band_mean(-12.0, -8.0) + 1.0).abs() < 0.05);
}

#[test]
fn godunov2_right_tail_is_smooth_and_left_oscillates() {
    assert!((godunov2_profile(8.0).unwrap() - 1.0).abs() < 0.05);
    // Upstream the profile overshoots -1 by far more than the downstream tail.
    let s = godunov2_profile(-8.0).unwrap();
    assert!(s < -1.2, "{s}");
    let mut sign_changes = 0;
    let mut prev = godunov2_profile(-12.0).unwrap() + 1.0;
    for k in 1..=400 {
        let v = godunov2_profile(-12.0 + k as f64 * 0.03).unwrap() + 1.0;
        if v * prev < 0.0 {
            sign_changes += 1;
        }
        prev = v;
    }
    assert!(sign_changes >= 4, "{sign_changes}");
}

#[test]
fn erf_ratio_matches_closed_form() {
    let p = erf_profile(1.0, 1.0, JumpIC::default()).unwrap();
    // Wide-middle ordering at r = 1/2, p = 1: pairs (h, h/4) and (h/4, h/2).
    let (c_num, c_den) = (stretch(1.0, 0.25, 1), stretch(0.5, 0.25, 1));
    assert!((c_num - 2.0).abs() < 1e-15 && (c_den - 2f64.sqrt()).abs() < 1e-15);
    let got = scaled_ratio_quadrature(&p, c_num, c_den).unwrap();
    let want = erf_gap_integral(c_num) / erf_gap_integral(c_den);
    assert!((got.ratio - want).abs() < 1e-9, "{} vs {want}", got.ratio);
    assert!((got.numerator - 2.0 * erf_gap_integral(c_num)).abs() < 1e-10);
    assert!(got.error_bound < 1e-6);
}

#[test]
fn successive_stretches_cancel() {
    for p in [erf_profile(1.0, 1.0, JumpIC::default()).unwrap(), SimilarityProfile::godunov2()] {
        for r in [0.5, 0.4, 1.0 / 3.0, 2.0 / 7.0, 0.25] {
            let c = stretch(1.0, r, p.order_p);
            let got = scaled_ratio_quadrature(&p, c, c).unwrap();
            assert!((got.ratio - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn scaled_difference_curves_coincide() {
    let p = SimilarityProfile::godunov2();
    let a = scaled_frame_difference(&p, 1.0, 0.5, (-6.0, 6.0), 241).unwrap();
    let b = scaled_frame_difference(&p, 0.5, 0.25, (-6.0, 6.0), 241).unwrap();
    for ((_, x), (_, y)) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-8);
    }
    let zero = scaled_frame_difference(&p, 0.3, 0.3, (-6.0, 6.0), 41).unwrap();
    assert!(zero.iter().all(|&(_, v)| v == 0.0));
}

#[test]
fn erf_difference_is_single_signed() {
    let p = erf_profile(1.0, 1.0, JumpIC::default()).unwrap();
    let d = scaled_frame_difference(&p, 1.0, 0.5, (-20.0, 20.0), 801).unwrap();
    for &(chi, v) in &d {
        if chi > 1e-12 {
            assert!(v <= 0.0);
        } else if chi < -1e-12 {
            assert!(v >= 0.0);
        }
    }
}

fn upwind1_run(intervals: usize, spec: &SchemeSpec) -> GridFunction1D {
    let grid = Grid1D::with_intervals(-PI, PI, intervals).unwrap();
    integrate_to(&make_jump_function(grid, JumpIC::default()), spec, 2.0).unwrap()
}

#[test]
fn upwind1_gap_matches_formula() {
    let spec = SchemeSpec::new(SchemeKind::Upwind1, 0.6, 1.0).unwrap();
    let runs: Vec<_> = [12800, 25600, 51200].iter().map(|&m| upwind1_run(m, &spec)).collect();
    let h = 2.0 * PI / 12800.0;
    let g1 = l1_distance(&runs[0], &runs[1]).unwrap();
    let g2 = l1_distance(&runs[1], &runs[2]).unwrap();
    let f1 = first_order_norm_gap(h, h / 2.0, &spec, JumpIC::default(), 2.0).unwrap();
    assert!((g1 / f1 - 1.0).abs() < 0.05, "{g1} vs {f1}");
    assert!((g1 / g2 / 2f64.sqrt() - 1.0).abs() < 0.01);
}

#[test]
fn erf_profile_matches_upwind1_snapshot() {
    let spec = SchemeSpec::new(SchemeKind::Upwind1, 0.6, 1.0).unwrap();
    let ic = JumpIC::default();
    for (intervals, tol) in [(12800, 0.05), (51200, 0.02)] {
        let u = upwind1_run(intervals, &spec);
        let h = u.grid().h();
        let prof = erf_profile_for(&spec, h, 2.0, ic).unwrap();
        let oracle = GridFunction1D::from_fn(*u.grid(), 2.0, |x| prof.value_at_z(x - 2.0).unwrap()).unwrap();
        let exact = GridFunction1D::from_fn(*u.grid(), 2.0, |x| if x <= 2.0 { -1.0 } else { 1.0 }).unwrap();
        let discrepancy = l1_distance(&u, &oracle).unwrap();
        let error = l1_distance(&u, &exact).unwrap();
        assert!(discrepancy <= tol * ic.jump_size(), "{discrepancy}");
        // The profile also captures the solution error itself.
        assert!(discrepancy <= tol * error, "N = {intervals}: {discrepancy} vs {error}");
    }
}
