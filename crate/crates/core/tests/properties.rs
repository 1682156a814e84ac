use std::sync::Arc;

use proptest::prelude::*;
use proptest::test_runner::{FileFailurePersistence, RngSeed};
use tensorcoh::checks::{self, CheckInput, Operand, Verdict};
use tensorcoh::ideal::Ideal;
use tensorcoh::invariants::{self as inv, Count};
use tensorcoh::matrix::GradedMap;
use tensorcoh::module::GradedModule;
use tensorcoh::ops;
use tensorcoh::quotient::QuotientRing;
use tensorcoh::sample::{SampleConfig, Sampler};
use tensorcoh::GroundField;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: Some(Box::new(FileFailurePersistence::Off)),
        rng_seed: RngSeed::Fixed(0x7e50c0),
        ..ProptestConfig::default()
    }
}

fn ring(n: usize) -> Arc<QuotientRing> {
    Sampler::ring(GroundField::default(), n).unwrap()
}

fn sampler(seed: u64) -> Sampler {
    Sampler::new(seed, SampleConfig::default())
}

fn row(base: &Arc<QuotientRing>, gens: &[tensorcoh::Polynomial]) -> GradedMap {
    let rows = vec![gens.to_vec()];
    let src = gens
        .iter()
        .map(|g| g.homogeneous_degree().unwrap() as i32)
        .collect();
    GradedMap::new(base, src, vec![0], &rows).unwrap()
}

proptest! {
    #![proptest_config(config(50))]

    #[test]
    fn duality_and_saturation_agree_on_h0(seed in any::<u64>(), n in 1usize..=3) {
        let r = ring(n);
        let s = sampler(seed).module(&r).unwrap();
        let dual = inv::h(&s.module, 0).unwrap();
        prop_assert_eq!(dual, Count::Finite(inv::h0_sat(&s.module).unwrap()), "{}", s.description);
    }

    #[test]
    fn grade_of_maximal_ideal_is_depth(seed in any::<u64>(), n in 1usize..=3) {
        let r = ring(n);
        let s = sampler(seed).module(&r).unwrap();
        prop_assume!(!s.module.is_zero().unwrap());
        let depth = inv::depth(&s.module).unwrap();
        prop_assert_eq!(depth, n - inv::pd_ambient(&s.module).unwrap());
        prop_assert_eq!(inv::grade(&Ideal::maximal(&r), &s.module).unwrap(), Count::Finite(depth as u64));
    }

    #[test]
    fn cohomology_vanishes_above_dimension(seed in any::<u64>(), n in 1usize..=3) {
        let r = ring(n);
        let mut smp = sampler(seed);
        let s = smp.module(&r).unwrap();
        let h = inv::h_vector(&s.module).unwrap();
        if let Some(d) = inv::dim(&s.module).unwrap() {
            prop_assert!(h[d + 1..].iter().all(|c| *c == Count::Finite(0)));
        }
        let f = smp.finite_length(&r).unwrap();
        let h = inv::h_vector(&f.module).unwrap();
        prop_assert_eq!(h[0], inv::length(&f.module).unwrap());
        prop_assert!(h[1..].iter().all(|c| *c == Count::Finite(0)));
    }

    #[test]
    fn first_serre_condition_is_torsion_freeness(seed in any::<u64>(), n in 1usize..=3) {
        let r = ring(n);
        let s = sampler(seed).module(&r).unwrap();
        let torsion_free = inv::is_torsion_free(&s.module).unwrap();
        if inv::dim(&s.module).unwrap() == Some(n) {
            prop_assert_eq!(inv::serre_sr(&s.module, 1).unwrap(), torsion_free, "{}", s.description);
        } else {
            prop_assert!(!torsion_free || s.module.is_zero().unwrap(), "{}", s.description);
        }
    }

    #[test]
    fn proven_bounds_never_fail(seed in any::<u64>(), n in 1usize..=3) {
        let r = ring(n);
        let mut smp = sampler(seed);
        let finite = Operand::new(smp.finite_length(&r).unwrap().module);
        let m = Operand::new(smp.module(&r).unwrap().module);
        let other = Operand::new(smp.module(&r).unwrap().module);
        let lemma = checks::run("lemma-0", &CheckInput::new(finite).with_n(m.clone())).unwrap();
        prop_assert_eq!(lemma.verdict, Verdict::Holds);
        let vector = checks::run("prop-vector", &CheckInput::new(m).with_n(other)).unwrap();
        prop_assert_ne!(vector.verdict, Verdict::Fails);
    }

    #[test]
    fn hdeg_identities(seed in any::<u64>(), n in 1usize..=3) {
        let r = ring(n);
        let mut smp = sampler(seed);
        let s = smp.module(&r).unwrap();
        let m = &s.module;
        prop_assume!(!m.is_zero().unwrap());
        let hd = inv::hdeg(m).unwrap();
        prop_assert!(inv::mu(m).unwrap() as u64 <= hd);
        if inv::is_cohen_macaulay(m).unwrap() {
            prop_assert_eq!(hd, inv::degree(m).unwrap());
        }
        let sat = ops::saturate(m, &Ideal::maximal(&r)).unwrap();
        let gamma = inv::h0_sat(m).unwrap();
        if !sat.quotient.is_zero().unwrap() {
            prop_assert_eq!(inv::hdeg(&sat.quotient).unwrap(), hd - gamma, "{}", s.description);
        }
        let f = smp.finite_length(&r).unwrap().module;
        prop_assert_eq!(Count::Finite(inv::hdeg(&f).unwrap()), inv::length(&f).unwrap());
    }

    #[test]
    fn length_is_additive(seed in any::<u64>(), n in 1usize..=3) {
        let r = ring(n);
        let mut smp = sampler(seed);
        let i = smp.primary_monomials(&r);
        let j = smp.monomials(&r);
        let whole = GradedModule::cyclic(&r, &i).unwrap();
        let sub = ops::subquotient(&row(&r, &j), Some(&row(&r, &i))).unwrap();
        let both: Vec<_> = i.iter().chain(&j).cloned().collect();
        let quotient = GradedModule::cyclic(&r, &both).unwrap();
        let (Count::Finite(a), Count::Finite(b), Count::Finite(c)) =
            (inv::length(&whole).unwrap(), inv::length(&sub).unwrap(), inv::length(&quotient).unwrap())
        else {
            return Err(TestCaseError::fail("expected finite lengths"));
        };
        prop_assert_eq!(a, b + c);
    }
}

proptest! {
    #![proptest_config(config(20))]

    #[test]
    fn tor_is_symmetric(seed in any::<u64>(), n in 1usize..=3) {
        let r = ring(n);
        let mut smp = sampler(seed);
        let a = smp.finite_length(&r).unwrap().module;
        let b = smp.module(&r).unwrap().module;
        let ab = inv::length(&ops::tor(1, &a, &b).unwrap()).unwrap();
        let ba = inv::length(&ops::tor(1, &b, &a).unwrap()).unwrap();
        prop_assert_eq!(ab, ba);
    }
}

#[test]
fn koszul_betti_numbers_are_binomial() {
    for n in 2..=5 {
        let r = ring(n);
        let res = tensorcoh::resolution::Resolution::compute(
            &GradedModule::residue_field(&r),
            tensorcoh::resolution::Over::Quotient,
            n + 1,
        )
        .unwrap();
        let mut c = 1usize;
        for i in 0..=n {
            assert_eq!(res.betti().total(i), c);
            c = c * (n - i) / (i + 1);
        }
    }
}

#[test]
fn serre_condition_on_the_maximal_ideal() {
    let r = ring(2);
    let m = GradedModule::maximal_ideal(&r).unwrap();
    assert!(inv::serre_sr(&m, 1).unwrap());
    assert!(!inv::serre_sr(&m, 2).unwrap());
}

#[test]
fn same_inputs_same_reports() {
    let r = ring(3);
    let mut a = sampler(5);
    let mut b = sampler(5);
    for _ in 0..5 {
        let x = a.module(&r).unwrap().module;
        let y = b.module(&r).unwrap().module;
        assert_eq!(inv::h_vector(&x).unwrap(), inv::h_vector(&y).unwrap());
        assert_eq!(
            format!("{}", ops::tensor(&x, &x).unwrap()),
            format!("{}", ops::tensor(&y, &y).unwrap())
        );
    }
}
