use num_bigint::{BigInt, BigUint};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toric_verify::family::{construct, phi_raw, sample_params, validate, FamilyParams};
use toric_verify::finitefield::{make_field, Fe};
use toric_verify::numtheory::{ext_gcd, solve_dij, solve_gh, solve_gij, solve_hk};
use toric_verify::toric::{binomial_of_vec, build_matrix, in_ideal, vec_of_binomial, KernelLattice};
use toric_verify::verify::{zero_set, CompiledSystem, EnumConfig, MembershipOracle, Status};

fn instance() -> impl Strategy<Value = FamilyParams> {
    (any::<u64>(), 3usize..=5, prop::sample::select(vec![2u64, 3, 5]), 1u32..=2).prop_map(
        |(seed, n, p, l)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            sample_params(&mut rng, n, p, l, 10, 0..=3)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ext_gcd_is_bezout(a in -10_000i64..10_000, b in -10_000i64..10_000) {
        prop_assume!(a != 0 || b != 0);
        let (g, x, y) = ext_gcd(&BigInt::from(a), &BigInt::from(b)).unwrap();
        prop_assert!(g > BigInt::from(0));
        prop_assert_eq!(&x * a + &y * b, g.clone());
        prop_assert_eq!(BigInt::from(a) % &g, BigInt::from(0));
        prop_assert_eq!(BigInt::from(b) % &g, BigInt::from(0));
    }

    #[test]
    fn certificates_hold(params in instance()) {
        let FamilyParams { p, l, a, d, .. } = params;
        prop_assert!(solve_gh(p, l, a, d).unwrap().check(p, l, a, d));
        for &ci in &params.c {
            prop_assert!(solve_hk(ci, a, d, p, l).unwrap().check(ci, a, d, p, l));
            for &cj in &params.c {
                prop_assert!(solve_gij(ci, cj, p, l).unwrap().check(ci, cj, p, l));
                prop_assert!(solve_dij(ci, cj).unwrap().check(ci, cj));
            }
        }
        prop_assert!(validate(&params).unwrap().check(&params));
    }

    #[test]
    fn generated_binomials_are_in_the_ideal(params in instance()) {
        let sys = construct(&params).unwrap();
        let a = build_matrix(&params);
        for lb in sys.full() {
            prop_assert!(in_ideal(&lb.binomial, &a), "{}", lb.label);
            let v = vec_of_binomial(&lb.binomial, params.n);
            prop_assert_eq!(&binomial_of_vec(&v).unwrap(), &lb.binomial);
        }
    }

    #[test]
    fn kernel_samples_are_kernel_vectors(params in instance(), seed in any::<u64>()) {
        let a = build_matrix(&params);
        let lattice = KernelLattice::of(&a);
        prop_assert_eq!(lattice.rank(), params.n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for v in lattice.sample(&mut rng, 20) {
            prop_assert!(!v.is_zero());
            prop_assert!(a.annihilates(&v));
            prop_assert!(lattice.coordinates(&v).is_some());
        }
    }

    #[test]
    fn images_vanish_and_are_recognized(
        params in instance(),
        q in prop::sample::select(vec![(2u64, 2u32), (3, 1), (7, 1), (11, 1), (5, 2)]),
        seed in any::<u64>(),
    ) {
        let field = make_field(q.0, q.1).unwrap();
        let sys = construct(&params).unwrap();
        let compiled = CompiledSystem::new(&sys.full(), params.n, &field);
        let oracle = MembershipOracle::new(&params, &field);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let u: Vec<Fe> = (0..params.n).map(|_| Fe(rand::Rng::gen_range(&mut rng, 0..field.order()))).collect();
            let pt = phi_raw(&params, &field, &u);
            prop_assert!(compiled.vanishes(&pt));
            let v = oracle.decide(&pt).unwrap();
            prop_assert_eq!(v.status, Status::InV);
        }
    }

    #[test]
    fn field_arithmetic(q in prop::sample::select(vec![(2u64, 5u32), (3, 3), (5, 2), (7, 1), (13, 1)]),
                        x in any::<u64>(), y in any::<u64>(), e in 0u64..1000) {
        let f = make_field(q.0, q.1).unwrap();
        let (x, y) = (Fe(x % f.order()), Fe(y % f.order()));
        prop_assert_eq!(f.mul(x, y), f.mul(y, x));
        prop_assert_eq!(f.add(f.sub(x, y), y), x);
        if !x.is_zero() {
            prop_assert_eq!(f.mul(x, f.inv(x).unwrap()), Fe::ONE);
        }
        let slow = (0..e).fold(Fe::ONE, |acc, _| f.mul(acc, x));
        prop_assert_eq!(f.pow(x, e), slow);
        prop_assert_eq!(f.pow_big(x, &BigUint::from(e)), slow);
        for r in f.nth_roots(x, &BigUint::from(e.max(1))) {
            prop_assert_eq!(f.pow(r, e.max(1)), x);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn zero_set_independent_of_workers(params in instance().prop_filter("n = 3", |p| p.n == 3), jobs in 2usize..5) {
        let field = make_field(3, 1).unwrap();
        let sys = construct(&params).unwrap();
        let compiled = CompiledSystem::new(&sys.full(), 3, &field);
        let a = zero_set(&compiled, &EnumConfig::default().with_jobs(1)).unwrap();
        let b = zero_set(&compiled, &EnumConfig::default().with_jobs(jobs)).unwrap();
        prop_assert_eq!(a.points, b.points);
    }
}
