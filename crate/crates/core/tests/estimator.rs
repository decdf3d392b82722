use freeharm::estimator::{
    check_lemma_rep_bound, check_sphere_convolution_bound, coefficient_function, doubling_schedule,
    power_norm_sequence, power_norm_sequence_with, regular_coefficient, split_domination_defect,
    split_pair, EvalPath,
};
use freeharm::posdef::gram_matrix;
use freeharm::words::enumerate_ball;
use freeharm::{GroupContext, RadialFunction, SparseFunction, Word};
use num_complex::Complex64;
use proptest::prelude::*;

fn ctx(d: usize) -> GroupContext {
    GroupContext::new(d).unwrap()
}

fn w(ctx: &GroupContext, s: &str) -> Word {
    Word::parse(ctx, s).unwrap()
}

fn re(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn generator_delta_has_unit_sequence() {
    let c = ctx(3);
    let f = SparseFunction::delta(&c, w(&c, "b"));
    let rep = power_norm_sequence(&f, 1.3, &doubling_schedule(16).unwrap()).unwrap();
    assert_eq!(rep.entries.len(), 5);
    assert!(rep.entries.iter().all(|e| e.u_n == 1.0));
    assert!(rep.monotone);
}

#[test]
fn chi1_moment_radial_and_sparse_agree() {
    let c = ctx(2);
    let chi = SparseFunction::chi(&c, 1).unwrap();
    let radial = RadialFunction::chi(&c, 1);
    let expected = 2092f64.powf(0.125);
    let a = power_norm_sequence(&radial, 2.0, &[1]).unwrap();
    let b = power_norm_sequence_with(&chi, 2.0, &[1], EvalPath::Sparse).unwrap();
    assert!(rel(a.entries[0].u_n, expected) < 1e-12);
    assert!(rel(a.entries[0].u_n, b.entries[0].u_n) < 1e-12);
    // log_scale is ln |h^{*2}|_2 = ln √2092.
    assert!((a.entries[0].log_scale - 0.5 * 2092f64.ln()).abs() < 1e-12);
}

#[test]
fn chi1_sequence_approaches_tree_spectral_radius() {
    let c = ctx(2);
    let rep = power_norm_sequence(
        &RadialFunction::chi(&c, 1),
        2.0,
        &doubling_schedule(256).unwrap(),
    )
    .unwrap();
    let kesten = 2.0 * 3f64.sqrt();
    let last = rep.final_estimate();
    assert!(last >= 0.98 * kesten && last <= kesten + 1e-9, "{last}");
    assert!(rep.monotone);
    let mut csv = Vec::new();
    rep.write_csv(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("n,u_n,log_scale\n1,"));
    assert_eq!(text.lines().count(), 10);
}

#[test]
fn sphere_bound_examples() {
    let c = ctx(2);
    let chi = SparseFunction::chi(&c, 1).unwrap();
    let r = check_sphere_convolution_bound(&chi, 1, &chi, 1, 2.0, 0).unwrap();
    assert!(r.pass && !r.exact_zero_case);
    assert!((r.lhs - 4.0).abs() < 1e-12 && (r.rhs - 4.0).abs() < 1e-12);
    let r = check_sphere_convolution_bound(&chi, 1, &chi, 1, 2.0, 1).unwrap();
    assert!(r.exact_zero_case && r.pass);
    let r = check_sphere_convolution_bound(&chi, 1, &chi, 1, 1.0, 0).unwrap();
    assert!((r.lhs - 4.0).abs() < 1e-12 && (r.rhs - 16.0).abs() < 1e-12 && r.pass);
    let bad = SparseFunction::delta(&c, w(&c, "ab"));
    let err = check_sphere_convolution_bound(&bad, 1, &chi, 1, 2.0, 0).unwrap_err();
    assert!(err.to_string().contains("ab"));
}

#[test]
fn split_examples() {
    let c = ctx(2);
    let chi2 = SparseFunction::chi(&c, 2).unwrap();
    let (fs, _) = split_pair(&chi2, 2, &chi2, 2, 1, 2.0).unwrap();
    let expected = SparseFunction::chi(&c, 1).unwrap().scale(re(3f64.sqrt()));
    for (s, v) in expected.terms() {
        assert!((fs.get(s) - v).norm() < 1e-15);
    }
    assert!(rel(fs.lq_norm(2.0).unwrap(), 12f64.sqrt()) < 1e-15);

    let ab = SparseFunction::delta(&c, w(&c, "ab"));
    let (fs, gs) = split_pair(&ab, 2, &ab, 2, 1, 2.0).unwrap();
    assert_eq!(fs, SparseFunction::delta(&c, w(&c, "a")));
    assert_eq!(gs, SparseFunction::delta(&c, w(&c, "b")));
}

#[test]
fn rep_bound_examples() {
    let c = ctx(2);
    let a = SparseFunction::delta(&c, w(&c, "a"));
    let r = check_lemma_rep_bound(&a, 1, 2.0, 1).unwrap();
    assert!(r.pass && r.lhs == 1.0 && (r.rhs - 8.0).abs() < 1e-12);

    let chi1 = SparseFunction::chi(&c, 1).unwrap();
    let r = check_lemma_rep_bound(&chi1, 1, 2.0, 1).unwrap();
    assert!(r.pass && rel(r.lhs, 2092f64.sqrt()) < 1e-12 && rel(r.rhs, 128.0) < 1e-12);

    let chi2 = SparseFunction::chi(&c, 2).unwrap();
    let sparse = check_lemma_rep_bound(&chi2, 2, 2.0, 1).unwrap();
    let radial = check_lemma_rep_bound(&RadialFunction::chi(&c, 2), 2, 2.0, 1).unwrap();
    assert!(rel(sparse.lhs, radial.lhs) < 1e-12);
    assert!(rel(sparse.rhs, 3888.0) < 1e-12);
    assert!(sparse.pass && radial.pass);
}

#[test]
fn coefficient_function_examples() {
    let c = ctx(2);
    let e = SparseFunction::delta(&c, Word::identity());
    let a = SparseFunction::delta(&c, w(&c, "a"));
    assert_eq!(coefficient_function(&e, &e).unwrap(), e);
    assert_eq!(coefficient_function(&a, &e).unwrap(), e);

    let g = e.add(&a).unwrap();
    let expected = SparseFunction::from_terms(
        &c,
        [
            (Word::identity(), re(2.0)),
            (w(&c, "a"), re(1.0)),
            (w(&c, "A"), re(1.0)),
        ],
    );
    assert_eq!(coefficient_function(&g, &e).unwrap(), expected);
    assert_eq!(regular_coefficient(&g), expected);
}

fn sphere_function(d: usize, k: usize) -> impl Strategy<Value = SparseFunction> {
    let c = ctx(d);
    let sphere = freeharm::words::enumerate_sphere(&c, k).unwrap();
    let n = sphere.len();
    prop::collection::vec((0..n, -1.0f64..1.0, -1.0f64..1.0), 1..5).prop_map(move |picks| {
        SparseFunction::from_terms(
            &c,
            picks
                .into_iter()
                .map(|(i, a, b)| (sphere[i].clone(), Complex64::new(a, b))),
        )
    })
}

fn ball_function(d: usize, r: usize, real: bool) -> impl Strategy<Value = SparseFunction> {
    let c = ctx(d);
    let ball = enumerate_ball(&c, r).unwrap();
    let n = ball.len();
    prop::collection::vec((0..n, -1.0f64..1.0, -1.0f64..1.0), 1..4).prop_map(move |picks| {
        SparseFunction::from_terms(
            &c,
            picks.into_iter().map(|(i, a, b)| {
                (
                    ball[i].clone(),
                    Complex64::new(a, if real { 0.0 } else { b }),
                )
            }),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn moments_are_monotone_for_real_coefficients(f in ball_function(2, 2, true)) {
        prop_assume!(!f.is_zero());
        let rep = power_norm_sequence_with(&f, 2.0, &[1, 2], EvalPath::Sparse).unwrap();
        prop_assert!(rep.entries[1].u_n >= rep.entries[0].u_n - 1e-9);
    }

    #[test]
    fn estimates_respect_the_sphere_operator_bound(
        f in sphere_function(2, 2),
        q in prop::sample::select(vec![1.0, 1.2, 1.5, 2.0]),
    ) {
        prop_assume!(!f.is_zero());
        let bound = 3.0 * f.lq_norm(q).unwrap();
        let rep = power_norm_sequence_with(&f, q, &[1, 2], EvalPath::Sparse).unwrap();
        for e in &rep.entries {
            prop_assert!(e.u_n <= bound * (1.0 + 1e-9), "{} > {}", e.u_n, bound);
        }
    }

    #[test]
    fn split_pairs_preserve_norms_and_dominate(
        f in sphere_function(2, 2),
        g in sphere_function(2, 2),
        q in 1.05f64..=2.0,
    ) {
        let (fs, gs) = split_pair(&f, 2, &g, 2, 1, q).unwrap();
        prop_assert!(rel(fs.lq_norm(q).unwrap(), f.lq_norm(q).unwrap()) < 1e-12);
        prop_assert!(rel(gs.lq_norm(q).unwrap(), g.lq_norm(q).unwrap()) < 1e-12);
        prop_assert!(split_domination_defect(&f, &g, &fs, &gs, 2).unwrap() <= 1e-12);
    }

    #[test]
    fn regular_coefficients_are_positive_definite(g in ball_function(2, 1, false)) {
        let c = ctx(2);
        let e = SparseFunction::delta(&c, Word::identity());
        let via_conv = coefficient_function(&g, &e).unwrap();
        let direct = regular_coefficient(&g);
        for (s, v) in direct.terms() {
            prop_assert!((via_conv.get(s) - v).norm() < 1e-12);
        }
        let gram = gram_matrix(&via_conv, &enumerate_ball(&c, 2).unwrap()).unwrap();
        prop_assert!(gram.min_eigenvalue >= -1e-9, "{}", gram.min_eigenvalue);
    }
}
