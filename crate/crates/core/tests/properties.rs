use galois_lab::exact::{multinomial, rat};
use galois_lab::oracle::{character_chi, count_flags};
use galois_lab::permstat::{descent_inv_table_by, galois_from_table, TableMethod};
use galois_lab::qcombi::{galois_number, q_multinomial, rogers_szego};
use galois_lab::stats::{
    kolmogorov_distance, qmultinomial_cumulant_formula, qmultinomial_mean_var_formula,
    CoeffDistribution, DEFAULT_CDF_PRECISION,
};
use galois_lab::{BigInt, Composition};
use proptest::prelude::*;

fn composition() -> impl Strategy<Value = Composition> {
    proptest::collection::vec(0u32..6, 1..5).prop_map(|parts| Composition::new(parts).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn q_multinomial_specializes_and_is_palindromic(k in composition()) {
        let n = k.total() as u32;
        let p = q_multinomial(n, &k);
        prop_assert_eq!(p.value_at_one(), multinomial(k.parts()));
        prop_assert!(p.is_palindromic());
        let d = CoeffDistribution::from_polynomial(&p).unwrap();
        let (mean, var) = qmultinomial_mean_var_formula(&k);
        prop_assert_eq!(&d.mean(), &mean);
        prop_assert_eq!(&d.variance(), &var);
        prop_assert_eq!(qmultinomial_cumulant_formula(n, &k, 2).unwrap(), var);
        // Palindromic laws are symmetric about the mean.
        prop_assert_eq!(d.reflect(p.degree().unwrap()).mean(), mean);
    }

    #[test]
    fn table_paths_agree_on_galois_numbers(n in 0usize..8, r in 1usize..7) {
        let enumerated = descent_inv_table_by(n, TableMethod::Enumerate);
        let summed = descent_inv_table_by(n, TableMethod::InclusionExclusion);
        prop_assert_eq!(&enumerated, &summed);
        prop_assert_eq!(galois_from_table(&enumerated, r), galois_number(n, r));
    }

    #[test]
    fn rogers_szego_at_one_is_galois(n in 0u32..8, r in 1usize..5) {
        prop_assert_eq!(rogers_szego(n, r).unwrap().at_z_one(), galois_number(n as usize, r));
    }

    #[test]
    fn kolmogorov_distance_is_a_probability(w in proptest::collection::vec(0i64..40, 2..12)) {
        prop_assume!(w.iter().filter(|&&x| x > 0).count() >= 2);
        let d = CoeffDistribution::from_polynomial(&galois_lab::QPoly::from_i64s(&w)).unwrap();
        let ks = kolmogorov_distance(&d, DEFAULT_CDF_PRECISION).unwrap();
        prop_assert!((0.0..=1.0).contains(&ks));
    }

    #[test]
    fn standardized_cumulants(n in 2usize..14, r in 2usize..5) {
        let d = CoeffDistribution::from_polynomial(&galois_number(n, r)).unwrap();
        let c = d.cumulants(4);
        let var = c.get(2).clone();
        // X - mean has kappa_1 = 0 and the same kappa_2, so the standardized
        // variable has kappa_2 = kappa_2 / var = 1.
        let centered = c.affine(&rat(1), &-c.get(1).clone());
        prop_assert_eq!(centered.get(1), &rat(0));
        prop_assert_eq!(centered.get(2) / &var, rat(1));
        prop_assert_eq!(centered.get(4), c.get(4));
    }
}

#[test]
fn flags_over_f5() {
    for n in 0..=3usize {
        for r in 1..=3usize {
            assert_eq!(count_flags(5, n, r).unwrap(), galois_number(n, r).eval_int(&BigInt::from(5)));
        }
    }
}

#[test]
fn character_on_a_three_cycle() {
    // Fixed subspaces of a 3-cycle on F_2^3: 0, <111>, <111>^perp (the
    // even-weight plane) and the whole space.
    assert_eq!(character_chi(2, 3, &[2, 3, 1]).unwrap(), BigInt::from(4));
}
