mod common;

use common::*;
use eqbundle_core::catalog;
use eqbundle_core::moduli::{
    action_operator, equivalent_pairs, invariant_subspace, CandidatePair, SearchBudget, Verdict, WSpace,
};
use eqbundle_core::scalar::{Tolerance, Q};
use proptest::prelude::*;

fn pair(entry: &str, target: &str, beta: &str, mix: &[i64]) -> CandidatePair {
    let e = catalog::entry(entry).unwrap();
    let t = e.target(target).unwrap();
    let datum = e.datum(target, beta, Tolerance::exact()).unwrap();
    let ops = action_operator(&datum, &e.ks_action).unwrap();
    let w = WSpace::new(&e.n, &t.algebra);
    let basis = invariant_subspace(&ops, w.dim(), Tolerance::exact());
    let mut v = vec![Q::from_integer(0.into()); w.dim()];
    for (i, b) in basis.iter().enumerate() {
        let c = Q::from_integer(mix[i % mix.len()].into());
        for (x, y) in v.iter_mut().zip(b) {
            *x += &c * y;
        }
    }
    CandidatePair::new(datum, w.from_coords(&v).unwrap(), &e.ks_action, Tolerance::exact()).unwrap()
}

fn budget(seed: u64) -> SearchBudget {
    SearchBudget {
        seed,
        ..SearchBudget::default()
    }
}

#[test]
fn pair_is_equivalent_to_itself() {
    let p = pair("sl3-1", "su3", "inclusion", &[1, -2]);
    let k = p.beta().target().clone();
    let r = equivalent_pairs(&p, &p, &k, budget(0)).unwrap();
    assert_eq!(r.verdict, Verdict::Equivalent);
    let ad = adjoint_of_factors(&k, r.witness.as_ref().unwrap());
    assert!((ad - nalgebra::DMatrix::identity(8, 8)).abs().max() < 1e-12);
}

#[test]
fn different_spectra_are_inequivalent() {
    let p = pair("sl2-1", "su2", "inclusion", &[1, 1]);
    let k = p.beta().target().clone();
    let doubled = p.beta().with_dbeta(p.beta().dbeta().scale(&Q::from_integer(2.into()))).unwrap();
    let q = CandidatePair::unchecked(doubled, p.omega().clone());
    let r = equivalent_pairs(&p, &q, &k, budget(0)).unwrap();
    assert_eq!(r.verdict, Verdict::Inequivalent);
    assert!(r.separator.is_some());
}

#[test]
fn different_omega_norms_are_inequivalent() {
    let p = pair("sl2-1", "su2", "inclusion", &[1, 0]);
    let q = pair("sl2-1", "su2", "inclusion", &[3, 0]);
    let k = p.beta().target().clone();
    let r = equivalent_pairs(&p, &q, &k, budget(0)).unwrap();
    assert_eq!(r.verdict, Verdict::Inequivalent);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn conjugated_pairs_are_recovered(
        which in 0usize..3,
        y in prop::collection::vec(-3.0f64..3.0, 10),
        mix in prop::collection::vec(-3i64..=3, 2),
        seed in 0u64..1000,
    ) {
        let (entry, target) = [("sl2-1", "su2"), ("sl3-1", "su3"), ("sp4-siegel", "usp4")][which];
        let p1 = pair(entry, target, "inclusion", &mix);
        let k = p1.beta().target().clone();
        let y: Vec<f64> = (0..k.dim()).map(|i| y[i % y.len()]).collect();
        let p2 = conjugate_pair(&p1, &y);
        let r = equivalent_pairs(&p1, &p2, &k, budget(seed)).unwrap();
        prop_assert_ne!(r.verdict, Verdict::Inequivalent);
        if r.verdict == Verdict::Equivalent {
            let ad = adjoint_of_factors(&k, r.witness.as_ref().unwrap());
            let gap = (ad * pair_matrix(&p1) - pair_matrix(&p2)).abs().max();
            prop_assert!(gap < 1e-6, "witness gap {gap:e}");
        }
    }
}
