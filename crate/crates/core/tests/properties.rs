//! Property suites for the invariants of each module.

use std::f64::consts::FRAC_1_SQRT_2;

use bohr_core::extremals::{bombieri_maximizer, mobius_majorant_closed, mobius_series};
use bohr_core::inequality::{
    check_bohr, check_refined_g, check_refined_p, check_refined_quadratic, check_zero_head,
    g_constraint_check, sharpness_sweep, Criterion, Family, GPolynomial,
};
use bohr_core::linalg::{adjoint, operator_norm, scalar_embed, ComplexMatrix};
use bohr_core::multidim::{lift_via_linear, CircularDomain, MultiIndex, MultiSeries};
use bohr_core::radii::{bisect, mchi_lower, mchi_upper, psi, solve_rnp, RadiusQuery};
use bohr_core::sampler::{grid_sup, sample_matrix_contractive, sample_schur_scalar, SamplerConfig};
use bohr_core::series::{MatrixSeries1D, ScalarSeries};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn matrix(dim: usize, entries: &[(f64, f64)]) -> ComplexMatrix {
    ComplexMatrix::from_fn(dim, |i, j| {
        let (re, im) = entries[i * dim + j];
        c(re, im)
    })
}

prop_compose! {
    fn arb_matrix(max_dim: usize)(dim in 1..=max_dim)
        (entries in prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), dim * dim), dim in Just(dim))
        -> ComplexMatrix {
        matrix(dim, &entries)
    }
}

prop_compose! {
    fn arb_pair(max_dim: usize)(dim in 1..=max_dim)
        (a in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), dim * dim),
         b in prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), dim * dim),
         dim in Just(dim))
        -> (ComplexMatrix, ComplexMatrix) {
        (matrix(dim, &a), matrix(dim, &b))
    }
}

/// Certified sample from either generator.
fn sample(seed: u64, dim: usize, degree: usize, schur: bool) -> MatrixSeries1D {
    let cfg = SamplerConfig::new(seed, dim, degree);
    if schur {
        let f = sample_schur_scalar(&cfg, seed).unwrap();
        let coeffs: Vec<Complex64> = f.coeffs().iter().map(|m| m.get(0, 0)).collect();
        MatrixSeries1D::from_scalar(&coeffs, dim).unwrap()
    } else {
        sample_matrix_contractive(&cfg, seed).unwrap()
    }
}

// ------------------------------------------------------------------ linalg

/// Largest singular value by power iteration on `M* M`, independent of the
/// library's SVD path.
fn power_iteration_norm(m: &ComplexMatrix) -> f64 {
    let d = m.dim();
    let gram = adjoint(m).matmul(m).unwrap();
    let mut v: Vec<Complex64> = (0..d).map(|i| c(1.0 + i as f64 * 0.1, 0.3)).collect();
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let w: Vec<Complex64> = (0..d)
            .map(|i| (0..d).map(|j| gram.get(i, j) * v[j]).sum())
            .collect();
        let norm = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm;
        v = w.into_iter().map(|x| x / norm).collect();
        if (next - lambda).abs() <= 1e-16 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

#[test]
fn operator_norm_matches_power_iteration_on_100_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for case in 0..100 {
        let d = 1 + case % 8;
        let m = ComplexMatrix::from_fn(d, |_, _| {
            c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        });
        let lib = operator_norm(&m);
        let oracle = power_iteration_norm(&m);
        assert!(
            (lib - oracle).abs() <= 1e-10 * oracle.max(1.0),
            "case {case}: {lib} vs {oracle}"
        );
    }
}

proptest! {
    #[test]
    fn adjoint_preserves_norm(m in arb_matrix(6)) {
        let a = operator_norm(&m);
        let b = operator_norm(&adjoint(&m));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn norm_is_submultiplicative((m, n) in arb_pair(6)) {
        let mn = operator_norm(&m.matmul(&n).unwrap());
        prop_assert!(mn <= operator_norm(&m) * operator_norm(&n) * (1.0 + 1e-12) + 1e-14);
    }

    #[test]
    fn scalar_multiple_of_identity(re in -1.0..1.0f64, im in -1.0..1.0f64, d in 1usize..8) {
        let a = c(re, im);
        prop_assert!((operator_norm(&scalar_embed(a, d)) - a.norm()).abs() <= 1e-14);
    }
}

// ------------------------------------------------------------------ series

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn majorant_nondecreasing_in_r(seed in any::<u64>(), dim in 1usize..4, degree in 0usize..16,
                                   schur in any::<bool>(), r1 in 0.0..0.99f64, r2 in 0.0..0.99f64) {
        let f = sample(seed, dim, degree, schur);
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        prop_assert!(f.majorant(lo).unwrap() <= f.majorant(hi).unwrap());
        prop_assert_eq!(f.majorant(0.0).unwrap(), f.coeff_norms()[0]);
    }

    #[test]
    fn samples_respect_coefficient_and_growth_bounds(seed in any::<u64>(), dim in 1usize..4,
                                                     degree in 0usize..16, schur in any::<bool>()) {
        let f = sample(seed, dim, degree, schur);
        prop_assert!(f.schwarz_pick_margin().unwrap() >= -1e-8);
        for r in [0.3, 0.5, 0.7] {
            prop_assert!(f.growth_bound_margin(r, 256).unwrap() >= -1e-8);
        }
    }

    #[test]
    fn division_then_multiplication_round_trips(
        f in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..12),
        g0 in 0.5..1.0f64,
        g in prop::collection::vec((-0.3..0.3f64, -0.3..0.3f64), 0..8),
    ) {
        let f = ScalarSeries::new(f.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap();
        let mut gc = vec![c(g0, 0.0)];
        gc.extend(g.into_iter().map(|(a, b)| c(a, b)));
        let g = ScalarSeries::new(gc).unwrap();
        let deg = f.degree();
        let h = f.div(&g, deg).unwrap();
        let back = h.mul(&g, deg);
        for k in 0..=deg {
            prop_assert!((back.coeffs()[k] - f.coeffs()[k]).norm() < 1e-10);
        }
    }
}

// ------------------------------------------------------------------ extremals

proptest! {
    #[test]
    fn truncated_mobius_majorant_within_tail_of_closed_form(a in 0.0..0.999f64, r in 0.0..0.95f64,
                                                            degree in 1usize..64) {
        let closed = mobius_majorant_closed(a, r).unwrap();
        let truncated = mobius_series(a, 1, degree).unwrap().majorant(r).unwrap();
        let tail = (1.0 - a * a) * r.powi(degree as i32 + 1) / (1.0 - r);
        prop_assert!(truncated <= closed + 1e-12);
        prop_assert!(closed - truncated <= tail + 1e-12);
    }

    #[test]
    fn closed_majorant_exceeds_one_exactly_past_threshold(a in 0.001..0.999f64, r in 0.0..0.99f64) {
        let threshold = 1.0 / (1.0 + 2.0 * a);
        prop_assume!((r - threshold).abs() > 1e-9);
        prop_assert_eq!(mobius_majorant_closed(a, r).unwrap() > 1.0, r > threshold);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn maximizer_matches_grid_search(r in (1.0 / 3.0)..0.99f64) {
        let (_, best) = bombieri_maximizer(r).unwrap();
        let steps = 100_000;
        let grid_best = (0..steps)
            .map(|i| mobius_majorant_closed(i as f64 / steps as f64, r).unwrap())
            .fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(best >= grid_best - 1e-12);
        prop_assert!(best - grid_best <= 1e-8, "{} {}", best, grid_best);
    }
}

// ------------------------------------------------------------------ radii

#[test]
fn rnp_grid_residuals_and_strict_monotonicity() {
    let ps: Vec<f64> = (1..=10).map(|i| i as f64 / 10.0).collect();
    let table: Vec<Vec<f64>> = (1..=8u32)
        .map(|n| {
            ps.iter()
                .map(|&p| {
                    let r = solve_rnp(RadiusQuery::new(n, p).unwrap());
                    assert!(psi(n, p, r).abs() <= 1e-12, "N={n} p={p}");
                    r
                })
                .collect()
        })
        .collect();
    for row in &table {
        assert!(row.windows(2).all(|w| w[0] < w[1]));
    }
    for j in 0..ps.len() {
        assert!(table.windows(2).all(|w| w[0][j] < w[1][j]));
    }
}

proptest! {
    #[test]
    fn operative_bounds_are_ordered(r in (1.0 / 3.0)..0.999f64) {
        prop_assert!(mchi_lower(r).unwrap() <= mchi_upper(r).unwrap() + 1e-12);
    }
}

#[test]
fn both_bound_products_cross_one_at_inv_sqrt2() {
    let lower = bisect(
        |r| r * mchi_lower(r).unwrap() - 1.0,
        0.4,
        0.99,
        1e-15,
        1e-13,
    )
    .unwrap();
    let upper = bisect(
        |r| r * mchi_upper(r).unwrap() - 1.0,
        0.4,
        0.99,
        1e-15,
        1e-13,
    )
    .unwrap();
    assert!((lower - FRAC_1_SQRT_2).abs() < 1e-9);
    assert!((upper - FRAC_1_SQRT_2).abs() < 1e-9);
}

// ------------------------------------------------------------------ inequality

fn admissible_g(raw: &[f64]) -> GPolynomial {
    let g = GPolynomial::new(raw.to_vec()).unwrap();
    let used = 1.0 - g_constraint_check(&g);
    if used <= 1.0 {
        g
    } else {
        GPolynomial::new(raw.iter().map(|x| x / (used * (1.0 + 1e-12))).collect()).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn margins_nonincreasing_in_r(seed in any::<u64>(), dim in 1usize..4, degree in 1usize..12,
                                  schur in any::<bool>(), r1 in 0.0..0.9f64, r2 in 0.0..0.9f64) {
        let f = sample(seed, dim, degree, schur);
        let (lo, hi) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let g = GPolynomial::eight_ninths();
        prop_assert!(check_bohr(&f, hi).unwrap().margin <= check_bohr(&f, lo).unwrap().margin);
        prop_assert!(check_refined_quadratic(&f, hi).unwrap().margin
            <= check_refined_quadratic(&f, lo).unwrap().margin);
        prop_assert!(check_refined_g(&f, hi, &g).unwrap().margin <= check_refined_g(&f, lo, &g).unwrap().margin);
        let zh = f.shift_up();
        prop_assert!(check_zero_head(&zh, hi).unwrap().margin <= check_zero_head(&zh, lo).unwrap().margin);
        // The pointwise term is a grid maximum; neighbouring radii may differ by the grid error.
        let p_hi = check_refined_p(&f, hi, 1, 0.5, 256).unwrap();
        let p_lo = check_refined_p(&f, lo, 1, 0.5, 256).unwrap();
        prop_assert!(p_hi.lhs() >= p_lo.lhs() - p_hi.truncation_pad);
    }

    #[test]
    fn refinements_nest_below_bohr(seed in any::<u64>(), dim in 1usize..4, degree in 0usize..12,
                                   schur in any::<bool>(), r in 0.0..0.95f64,
                                   raw in prop::collection::vec(0.001..2.0f64, 1..4)) {
        let f = sample(seed, dim, degree, schur);
        let bohr = check_bohr(&f, r).unwrap().margin;
        prop_assert!(check_refined_quadratic(&f, r).unwrap().margin <= bohr);
        let g = admissible_g(&raw);
        prop_assert!(g_constraint_check(&g) >= 0.0);
        prop_assert!(check_refined_g(&f, r, &g).unwrap().margin <= bohr);
    }

    #[test]
    fn refined_p_past_degree_is_growth_bound(seed in any::<u64>(), dim in 1usize..4, degree in 0usize..10,
                                             schur in any::<bool>(), r in 0.05..0.9f64, p in 0.05..1.0f64) {
        let f = sample(seed, dim, degree, schur);
        let v = check_refined_p(&f, r, degree + 1, p, 256).unwrap();
        let b = f.coeff_norms()[0];
        let growth = ((b + r) / (1.0 + b * r)).powf(p);
        prop_assert!(v.lhs() <= growth + 1e-12);
    }
}

#[test]
fn every_proven_radius_flips_within_two_hundredths() {
    let a_list = [0.999, 0.9999];
    let mut cases: Vec<(Criterion, f64)> = vec![(Criterion::Bohr, 1.0 / 3.0)];
    for n in 1..=3u32 {
        for p in [0.5, 1.0] {
            let rho = solve_rnp(RadiusQuery::new(n, p).unwrap());
            cases.push((
                Criterion::RefinedP {
                    n: n as usize,
                    p,
                    grid: 256,
                },
                rho,
            ));
        }
    }
    for (criterion, rho) in cases {
        for eps in [0.01, 0.02] {
            let t =
                sharpness_sweep(Family::Mobius, &criterion, rho, &a_list, &[rho + eps]).unwrap();
            assert!(
                t.outside_each_fails(),
                "{criterion:?} at {rho} + {eps}: {t:?}"
            );
        }
    }
}

// ------------------------------------------------------------------ sampler

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn identical_seed_gives_identical_sample(seed in any::<u64>(), dim in 1usize..4, degree in 0usize..12,
                                             schur in any::<bool>()) {
        prop_assert_eq!(sample(seed, dim, degree, schur), sample(seed, dim, degree, schur));
    }

    #[test]
    fn certified_samples_hold_on_a_four_times_finer_grid(seed in any::<u64>(), dim in 1usize..4,
                                                         degree in 0usize..33, schur in any::<bool>()) {
        let cfg = SamplerConfig::new(seed, dim, degree);
        let f = sample(seed, dim, degree, schur);
        prop_assert!(grid_sup(&f, 4 * cfg.grid) <= 1.0 + 1e-9);
    }

    #[test]
    fn schur_coefficients_obey_scalar_bound(seed in any::<u64>(), degree in 1usize..33) {
        let f = sample_schur_scalar(&SamplerConfig::new(seed, 1, degree), seed).unwrap();
        let c0 = f.coeff(0).unwrap().get(0, 0).norm();
        for k in 1..=degree {
            prop_assert!(f.coeff(k).unwrap().get(0, 0).norm() <= 1.0 - c0 * c0 + 1e-12);
        }
    }
}

// ------------------------------------------------------------------ multidim

prop_compose! {
    fn arb_multi()(nvars in 1usize..4, dim in 1usize..3, degree in 0usize..5)
        (terms in prop::collection::vec(
            (prop::collection::vec(0u32..=(degree as u32), nvars),
             prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim)),
            1..8),
         nvars in Just(nvars), dim in Just(dim))
        -> MultiSeries {
        let terms = terms
            .into_iter()
            .map(|(alpha, entries)| (MultiIndex(alpha), matrix(dim, &entries)))
            .collect();
        MultiSeries::new(nvars, dim, terms).unwrap()
    }
}

fn point(n: usize, raw: &[(f64, f64)]) -> Vec<Complex64> {
    raw.iter().take(n).map(|&(a, b)| c(a, b)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn slice_consistency(f in arb_multi(), raw in prop::collection::vec((-0.6..0.6f64, -0.6..0.6f64), 3),
                         t_re in -0.7..0.7f64, t_im in -0.7..0.7f64) {
        let a = point(f.nvars(), &raw);
        prop_assume!(a.iter().any(|x| x.norm() > 1e-3));
        let t = c(t_re, t_im);
        let at: Vec<Complex64> = a.iter().map(|x| x * t).collect();
        let s = f.slice(&a).unwrap();
        let lhs = f.homogeneous_majorant(&at).unwrap();
        prop_assert!((lhs - s.majorant(t.norm()).unwrap()).abs() < 1e-12);
        let diff = s.eval(t).unwrap().sub(&f.eval(&at).unwrap()).unwrap();
        prop_assert!(diff.max_abs_entry() < 1e-12);
    }

    #[test]
    fn gauge_is_absolutely_homogeneous(raw in prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64), 1..6),
                                       l_re in -3.0..3.0f64, l_im in -3.0..3.0f64) {
        let z: Vec<Complex64> = raw.iter().map(|&(a, b)| c(a, b)).collect();
        let lambda = c(l_re, l_im);
        let scaled: Vec<Complex64> = z.iter().map(|x| x * lambda).collect();
        for dom in [CircularDomain::polydisk(z.len()).unwrap(), CircularDomain::ball(z.len()).unwrap()] {
            let expected = lambda.norm() * dom.gauge(&z);
            prop_assert!((dom.gauge(&scaled) - expected).abs() <= 4.0 * f64::EPSILON * expected);
        }
    }

    #[test]
    fn parts_are_homogeneous(f in arb_multi(), raw in prop::collection::vec((-0.8..0.8f64, -0.8..0.8f64), 3),
                             t_re in -1.0..1.0f64, t_im in -1.0..1.0f64) {
        let z = point(f.nvars(), &raw);
        let t = c(t_re, t_im);
        let tz: Vec<Complex64> = z.iter().map(|x| x * t).collect();
        for k in 0..=f.degree() {
            let scaled = operator_norm(&f.homogeneous_part(k, &tz).unwrap());
            let base = operator_norm(&f.homogeneous_part(k, &z).unwrap());
            prop_assert!((scaled - t.norm().powi(k as i32) * base).abs() < 1e-12);
        }
    }

    #[test]
    fn lifted_slice_recovers_generator(a_re in 0.0..0.5f64, a_im in -0.5..0.5f64, b in 0.0..0.99f64,
                                       degree in 1usize..10) {
        let h = mobius_series(b, 2, degree).unwrap();
        let pd = CircularDomain::polydisk(2).unwrap();
        let a = [c(a_re, a_im), c(0.5 - a_re, 0.0)];
        let f = lift_via_linear(&h, &a, &pd).unwrap();
        let l: Complex64 = a.iter().map(|x| x * x).sum();
        let s = f.slice(&a).unwrap();
        for k in 0..=degree {
            let expected = h.coeff(k).unwrap().scale(l.powu(k as u32));
            let diff = s.coeff(k).unwrap().sub(&expected).unwrap();
            prop_assert!(diff.max_abs_entry() < 1e-12);
        }
    }
}
