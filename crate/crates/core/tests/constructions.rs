use gl2q_core::action::{act_generator, act_power, weight_of};
use gl2q_core::algebra::Generator;
use gl2q_core::fock::{GridIndex, MVector, ModuleSpace, Monomial};
use gl2q_core::scalar::{ratio, ParamEnv, Rat, RatFunc, Scalar};
use gl2q_core::verify::{
    cyclicity_chain, nilpotency_probe, quotient_generator_ladder, quotient_ladder_coefficient,
    reduce_step, singular_vector, span_probe, twisted_ladder_check, Verdict,
};
use gl2q_core::Error;

fn g(a: i64, b: i64) -> GridIndex {
    GridIndex::new(a, b)
}

fn rat_env(q: (i64, i64), mu: (i64, i64), b: Option<(i64, i64)>) -> ParamEnv<Rat> {
    ParamEnv::rational(
        ratio(q.0, q.1),
        ratio(mu.0, mu.1),
        b.map(|b| ratio(b.0, b.1)),
    )
    .unwrap()
}

#[test]
fn singular_vectors_are_annihilated_symbolically() {
    let env = ParamEnv::<RatFunc>::symbolic();
    let cases = [
        (0, 2, [(g(1, 0), g(0, 1)), (g(1, 1), g(-1, 2))]),
        (1, 3, [(g(0, 1), g(1, 0)), (g(2, 1), g(1, 1))]),
        (2, 4, [(g(1, 0), g(0, 1)), (g(1, -1), g(1, 1))]),
        (-1, 1, [(g(0, 1), g(1, 0)), (g(-1, 1), g(2, 0))]),
    ];
    for (mu, d, pairs) in cases {
        for (m, n) in pairs {
            let w = singular_vector(mu, m, n, d, &env).unwrap();
            assert!(!w.is_zero());
            assert!(w.monomials().all(|mono| mono.exponent(m) <= -1));
            let space = ModuleSpace::localized(env.with_mu(RatFunc::from_i64(mu)), m);
            let image = act_generator(&space, Generator::E12(-m), &w).unwrap();
            assert!(image.is_zero(), "mu={mu} d={d} m={m} n={n}: {image}");
            weight_of(&space, &w).unwrap();
        }
    }
}

#[test]
fn singular_vector_preconditions_are_named() {
    let env = ParamEnv::<RatFunc>::symbolic();
    let err = singular_vector(0, g(1, 0), g(2, 0), 2, &env).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
    assert!(err.to_string().contains("n1*m2 - n2*m1"));
}

#[test]
fn reduction_lowers_degree_until_the_generator() {
    let m = g(1, 0);
    let env = rat_env((3, 2), (2, 7), None);
    let v = MVector::monomial(Monomial::from_pairs([(m, -1), (g(0, 1), 2), (g(-1, 1), 1)])).add(
        &MVector::term(
            Monomial::from_pairs([(m, -1), (g(2, 2), 3)]),
            Rat::from_i64(-4),
        ),
    );
    let mut current = v;
    for expected in (0..3).rev() {
        let (next, _) = reduce_step(&current, &env, m).unwrap();
        assert!(next
            .monomials()
            .all(|mono| mono.exponent(m) == -1 && mono.total_degree() + 1 == expected));
        current = next;
    }
    assert!(matches!(
        reduce_step(&current, &env, m),
        Err(Error::Shape(_))
    ));
}

#[test]
fn reduction_is_generic_in_mu() {
    let m = g(0, 1);
    let env = ParamEnv::<RatFunc>::symbolic();
    let v = MVector::monomial(Monomial::from_pairs([(m, -1), (g(1, 0), 2)]));
    let (out, n1) = reduce_step(&v, &env, m).unwrap();
    assert_eq!(n1, g(1, 0));
    assert!(!out.is_zero());
}

#[test]
fn mixed_degree_vectors_split_into_components() {
    let m = g(1, 0);
    let env = rat_env((2, 1), (1, 3), None);
    let v = MVector::monomial(Monomial::from_pairs([(m, -3), (g(0, 1), 2)]))
        .add(&MVector::monomial(Monomial::from_pairs([
            (m, -3),
            (g(1, 1), 1),
        ])))
        .add(&MVector::monomial(Monomial::from_pairs([
            (m, -1),
            (g(0, 2), 1),
        ])));
    let out = cyclicity_chain(&v, &env, m, 5).unwrap();
    assert_eq!(out.raise, 2);
    assert_eq!(out.components.len(), 2);
    assert!(out.reached());
    for c in &out.components {
        assert_eq!(c.steps as i64, c.degree);
    }
}

#[test]
fn integer_mu_leaves_a_torsion_free_ladder() {
    let m = g(1, 1);
    for mu in [-1, 0, 1, 2] {
        let env = rat_env((5, 3), (mu, 1), None);
        let space = ModuleSpace::quotient(env.clone(), m);
        let v = MVector::monomial(Monomial::power(m, -5));
        let report = nilpotency_probe(&space, Generator::E12(-m), &v, 10).unwrap();
        assert_eq!(report.verdict, Verdict::InconclusiveBudget);
        for i in 1..=10 {
            let got = act_power(&space, Generator::E12(-m), i, &v).unwrap();
            let c = quotient_ladder_coefficient(&env, m, 5, i as i64);
            assert_eq!(got, MVector::term(Monomial::power(m, -5 - i as i64), c));
        }
        assert!(quotient_generator_ladder(&env, m, 6).unwrap().is_verified());
    }
}

#[test]
fn twisted_ladder_holds_symbolically_and_at_points() {
    let env = ParamEnv::<RatFunc>::symbolic();
    assert!(twisted_ladder_check(&env, g(1, 2), 3, 4)
        .unwrap()
        .is_verified());
    let env = rat_env((7, 3), (1, 4), Some((2, 5)));
    for d in 1..=4 {
        let r = twisted_ladder_check(&env, g(-1, 1), d, 5).unwrap();
        assert!(r.is_verified(), "{r}");
    }
}

#[test]
fn twisted_single_step_vanishes_at_integer_sum() {
    let m = g(1, 0);
    // mu + b = 2 with b not an integer: j = 3 is killed and every smaller j survives
    let env = rat_env((4, 3), (1, 2), Some((3, 2)));
    let space = ModuleSpace::twisted(env, m).unwrap();
    for j in -4..=4 {
        let v: MVector<Rat> = MVector::monomial(Monomial::power(m, j));
        let out = act_generator(&space, Generator::E12(-m), &v).unwrap();
        assert_eq!(out.is_zero(), j == 3, "j = {j}");
    }
}

#[test]
fn span_probe_quotient_reaches_generator() {
    let m = g(1, 0);
    let env = rat_env((2, 1), (1, 3), None);
    let space = ModuleSpace::quotient(env, m);
    let seed = MVector::monomial(Monomial::from_pairs([(m, -1), (g(0, 1), 1)]));
    let target = MVector::monomial(Monomial::power(m, -1));
    let r = span_probe(&seed, &space, 1, 2, &target, 2000).unwrap();
    assert!(r.report.is_verified(), "{}", r.report);
}
