use mrlrc::acceptance::expected_field_size;
use mrlrc::artifact::{parse_code, render_code};
use mrlrc::construct::{check_shape, construct, plan, CodeForm, MrLrcCode, Route};
use mrlrc::verify::{
    admissible, check_mr, decode_erasures, encode, parity_pattern_count, random_parity_pattern, ErasurePattern,
    VerifyOptions,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn manual(n: usize, r: usize, h: usize, a: usize, form: CodeForm) -> MrLrcCode {
    construct(n, r, h, a, &Route::Manual { q: None, m: None, form }).unwrap()
}

/// Small shapes whose exhaustive check stays cheap.
fn small_shape() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (2usize..=4, 2usize..=3)
        .prop_flat_map(|(r, g)| (Just(r), Just(g), 0usize..r, 0usize..=3))
        .prop_filter_map("shape", |(r, g, a, h)| {
            let n = r * g;
            (check_shape(n, r, h, a).is_ok() && g * a + h < n).then_some((n, r, h, a))
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, .. ProptestConfig::default() })]

    #[test]
    fn parity_codes_are_mr((n, r, h, a) in small_shape()) {
        let code = manual(n, r, h, a, CodeForm::Parity);
        prop_assert_eq!(code.ext.order(), &expected_field_size(&code));
        let rep = check_mr(&code, &VerifyOptions::exhaustive()).unwrap();
        prop_assert!(rep.passed(), "{:?}", code.params);
    }

    #[test]
    fn generator_codes_are_mr((n, r, h, a) in small_shape()) {
        prop_assume!(a >= 1 && h >= 1);
        let code = manual(n, r, h, a, CodeForm::Generator);
        prop_assert_eq!(code.ext.order(), &expected_field_size(&code));
        prop_assert_eq!(code.matrix.rows(), code.params.k());
        let rep = check_mr(&code, &VerifyOptions::exhaustive()).unwrap();
        prop_assert!(rep.passed(), "{:?}", code.params);
    }

    #[test]
    fn artifact_round_trip((n, r, h, a) in small_shape(), generator in any::<bool>()) {
        let form = if generator && h >= 1 && a >= 1 { CodeForm::Generator } else { CodeForm::Parity };
        let code = manual(n, r, h, a, form);
        let text = render_code(&code);
        let back = parse_code(&text, false).unwrap();
        prop_assert_eq!(&back.matrix, &code.matrix);
        prop_assert_eq!(render_code(&back), text);
    }

    #[test]
    fn decode_recovers_admissible_patterns(seed in any::<u64>(), which in 0usize..3) {
        let (n, r, h, a) = [(8, 4, 2, 1), (9, 3, 2, 1), (8, 4, 1, 2)][which];
        let code = manual(n, r, h, a, CodeForm::Parity);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let msg: Vec<_> = (0..code.params.k()).map(|_| code.ext.random(&mut rng)).collect();
        let word = encode(&code, &msg).unwrap();
        let cols = random_parity_pattern(&code.params, &mut rng).columns(r);
        // every subset of a correctable pattern is correctable
        let keep = rng.gen_range(0..=cols.len());
        let mut received: Vec<_> = word.iter().cloned().map(Some).collect();
        for &c in &cols[..keep] {
            received[c] = None;
        }
        prop_assert_eq!(decode_erasures(&code, &received).unwrap(), word);
    }

    #[test]
    fn admissibility_is_monotone(positions in proptest::collection::btree_set(0usize..12, 0..8)) {
        let p = plan(12, 4, 2, 1, &Route::Manual { q: None, m: None, form: CodeForm::Parity }).unwrap();
        let positions: Vec<usize> = positions.into_iter().collect();
        let full = ErasurePattern::from_positions(&positions, p.g, p.r).unwrap();
        if admissible(&full, &p).unwrap() {
            for skip in 0..positions.len() {
                let mut fewer = positions.clone();
                fewer.remove(skip);
                let sub = ErasurePattern::from_positions(&fewer, p.g, p.r).unwrap();
                prop_assert!(admissible(&sub, &p).unwrap());
            }
        }
    }
}

#[test]
fn parity_pattern_counts() {
    let p = plan(8, 4, 2, 1, &Route::Manual { q: None, m: None, form: CodeForm::Parity }).unwrap();
    // (4 choices of T per group)² × C(6, 2)
    assert_eq!(parity_pattern_count(&p), 16 * 15);
}

#[test]
fn verification_is_thread_count_independent() {
    let code = manual(12, 4, 2, 1, CodeForm::Parity);
    let mut bad = code.clone();
    let heavy = code.params.g * code.params.a;
    for k in 0..code.params.h {
        let v = code.matrix.get(heavy + k, 1).clone();
        bad.matrix.set(heavy + k, 2, v);
    }
    let one = check_mr(&bad, &VerifyOptions { jobs: 1, ..VerifyOptions::exhaustive() }).unwrap();
    let four = check_mr(&bad, &VerifyOptions { jobs: 4, ..VerifyOptions::exhaustive() }).unwrap();
    assert!(!one.passed());
    assert_eq!((one.failure_count, &one.failures), (four.failure_count, &four.failures));
}

#[test]
fn targeted_perturbation_breaks_mr() {
    // two heavy columns of one group made identical
    for (n, r, h, a) in [(8, 4, 2, 1), (9, 3, 2, 1), (12, 3, 3, 1)] {
        let code = manual(n, r, h, a, CodeForm::Parity);
        let mut bad = code.clone();
        let heavy = code.params.g * code.params.a;
        for k in 0..h {
            let v = code.matrix.get(heavy + k, 1).clone();
            bad.matrix.set(heavy + k, 2, v);
        }
        let rep = check_mr(&bad, &VerifyOptions::exhaustive()).unwrap();
        assert!(!rep.passed(), "({n},{r},{h},{a})");
        assert!(!rep.failures.is_empty());
    }
}

#[test]
fn random_perturbation_failure_rate() {
    // reported only: a random heavy entry change often keeps the code MR
    let code = manual(8, 4, 2, 1, CodeForm::Parity);
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let heavy = code.params.g * code.params.a;
    let trials = 200;
    let mut failed = 0;
    for _ in 0..trials {
        let mut bad = code.clone();
        let row = heavy + rng.gen_range(0..code.params.h);
        let col = rng.gen_range(0..code.params.n);
        let old = bad.matrix.get(row, col).clone();
        let mut v = code.ext.random(&mut rng);
        while v == old {
            v = code.ext.random(&mut rng);
        }
        bad.matrix.set(row, col, v);
        failed += usize::from(!check_mr(&bad, &VerifyOptions::exhaustive()).unwrap().passed());
    }
    println!("random single-entry perturbation broke MR in {failed}/{trials} trials");
    assert!(failed > 0);
}

#[test]
fn named_routes_build_mr_codes() {
    for (route, (n, r, h, a)) in [
        (Route::ParityMds, (8, 4, 2, 1)),
        (Route::ParityBinary, (8, 4, 1, 1)),
        (Route::GenBch, (8, 4, 1, 1)),
        (Route::GenIdentity, (8, 4, 1, 1)),
    ] {
        let code = construct(n, r, h, a, &route).unwrap();
        assert_eq!(code.route, route.name());
        assert_eq!(code.form, route.form());
        assert_eq!(code.ext.order(), &expected_field_size(&code));
        let rep = check_mr(&code, &VerifyOptions::exhaustive()).unwrap();
        assert!(rep.passed(), "{route} ({n},{r},{h},{a})");
    }
}

#[test]
fn sampled_mode_is_seeded() {
    let code = manual(12, 3, 3, 1, CodeForm::Parity);
    let a = check_mr(&code, &VerifyOptions::sampled(300, 5)).unwrap();
    let b = check_mr(&code, &VerifyOptions::sampled(300, 5)).unwrap();
    assert_eq!(a.patterns_checked, 300);
    assert_eq!((a.failure_count, a.failures), (b.failure_count, b.failures));
}
