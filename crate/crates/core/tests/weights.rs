mod common;

use common::{ad_real, model_w0, q_to_dm};
use eqbundle_core::catalog;
use eqbundle_core::lie::complexify;
use eqbundle_core::moduli::{action_operator, invariant_subspace, CandidatePair, WSpace};
use eqbundle_core::scalar::{Field, Tolerance, C64};
use eqbundle_core::weights::{check_omega_weight, dbar_vanishing_certificate, isotypical_decompose};
use eqbundle_core::Error;
use nalgebra::DMatrix;

#[test]
fn w0_matches_the_model() {
    for (id, want) in [("sl2-1", 2), ("sl3-1", 3), ("sp4-siegel", 2), ("sl4-2", 2), ("weighted-plane", 3)] {
        let e = catalog::entry(id).unwrap();
        assert_eq!(model_w0(&e), want, "{id}");
        assert_eq!(e.z_data.w0(), Some(want), "{id}");
    }
}

#[test]
fn decomposition_matches_eigen_oracle() {
    for e in catalog::catalog() {
        if e.z_data.w0().is_none() {
            continue;
        }
        for t in &e.targets {
            for b in &t.betas {
                let datum = e.datum(&t.id, &b.id, Tolerance::exact()).unwrap();
                let h = complexify(&t.algebra).unwrap();
                let dec = isotypical_decompose(&datum, &h, Tolerance::exact()).unwrap();
                let d = t.algebra.dim();

                let zeta: Vec<f64> = b.zeta.iter().map(Field::to_f64).collect();
                let image = q_to_dm(&b.dbeta) * nalgebra::DVector::from_vec(zeta);
                let gen = ad_real(&t.algebra, image.as_slice());
                let mut oracle: Vec<i64> = gen
                    .complex_eigenvalues()
                    .iter()
                    .map(|z| {
                        assert!(z.re.abs() < 1e-9 && (z.im - z.im.round()).abs() < 1e-9);
                        z.im.round() as i64
                    })
                    .collect();
                oracle.sort();
                let mut got: Vec<i64> = dec
                    .blocks()
                    .iter()
                    .flat_map(|blk| std::iter::repeat(blk.weight).take(blk.basis.len()))
                    .collect();
                got.sort();
                assert_eq!(got, oracle, "{}/{}", e.id, t.id);

                let ps = dec.projectors();
                let id = DMatrix::<C64>::identity(d, d);
                let mut sum = DMatrix::<C64>::zeros(d, d);
                let genc = gen.map(|x| C64::new(x, 0.0));
                for (i, p) in ps.iter().enumerate() {
                    sum += p;
                    assert!((p * p - p).norm() < 1e-9);
                    assert!((&genc * p - p * &genc).norm() < 1e-9);
                    for q in &ps[i + 1..] {
                        assert!((p * q).norm() < 1e-9);
                    }
                }
                assert!((sum - id).norm() < 1e-9);
                let rep = dec.report(&datum).unwrap();
                assert!(rep.projector_sum_residual < 1e-9);
                assert!(rep.eigen_residual < 1e-9 && rep.invariance_residual < 1e-9);
            }
        }
    }
}

#[test]
fn certificates_pass_for_nonzero_w0() {
    for e in catalog::catalog() {
        let Some(w0) = e.z_data.w0() else { continue };
        for t in &e.targets {
            for b in &t.betas {
                let datum = e.datum(&t.id, &b.id, Tolerance::exact()).unwrap();
                let h = complexify(&t.algebra).unwrap();
                let dec = isotypical_decompose(&datum, &h, Tolerance::exact()).unwrap();
                let cert = dbar_vanishing_certificate(&dec, w0, e.n.dim()).unwrap();
                assert!(cert.passed(), "{}", e.id);
                assert!(matches!(
                    dbar_vanishing_certificate(&dec, 0, e.n.dim()),
                    Err(Error::Hypothesis(_))
                ));
            }
        }
    }
}

#[test]
fn invariant_omegas_have_weight_minus_w0() {
    for e in catalog::catalog() {
        if e.z_data.w0().is_none() {
            continue;
        }
        for t in &e.targets {
            for b in &t.betas {
                let datum = e.datum(&t.id, &b.id, Tolerance::exact()).unwrap();
                let h = complexify(&t.algebra).unwrap();
                let dec = isotypical_decompose(&datum, &h, Tolerance::exact()).unwrap();
                let ops = action_operator(&datum, &e.ks_action).unwrap();
                let w = WSpace::new(&e.n, &t.algebra);
                for v in invariant_subspace(&ops, w.dim(), Tolerance::exact()) {
                    let p = CandidatePair::new(datum.clone(), w.from_coords(&v).unwrap(), &e.ks_action, Tolerance::exact())
                        .unwrap();
                    for tol in [Tolerance::exact(), Tolerance::float(1e-9)] {
                        let r = check_omega_weight(&p, &dec, tol).unwrap();
                        assert!(r.passed && r.leakage < 1e-9, "{}/{}", e.id, t.id);
                        assert_eq!(r.expected_weight, -b.w0);
                    }
                }
            }
        }
    }
}
