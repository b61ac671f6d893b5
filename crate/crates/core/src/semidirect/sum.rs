use serde::Serialize;

use crate::error::{Error, Result};
use crate::lie::LieAlgebra;
use crate::scalar::{magnitude, ComplexField, Cq, Tolerance};
use crate::semidirect::DerivationAction;

/// `p = n ⋊ s` on the basis `(n_0, .., n_{a-1}, s_0, .., s_{b-1})`.
#[derive(Clone, Debug)]
pub struct SemidirectSum {
    p: LieAlgebra,
    action: DerivationAction,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IntegrabilityReport {
    pub closure_residual: f64,
    pub ideal_residual: f64,
    pub worst_pair: Option<[usize; 2]>,
    pub passed: bool,
}

/// Semidirect sum of `n` and `s` along `d`. The action is re-validated.
pub fn semidirect_sum(
    n: &LieAlgebra,
    s: &LieAlgebra,
    d: &DerivationAction,
    tol: Tolerance,
) -> Result<SemidirectSum> {
    if d.target() != n || d.source() != s {
        return Err(Error::input("derivation action does not match the given algebras"));
    }
    if n.field() != s.field() {
        return Err(Error::input(format!(
            "{} and {} are over different fields",
            n.name(),
            s.name()
        )));
    }
    let report = d.check(tol);
    if !report.passed {
        return Err(Error::Construction(report.failure.unwrap_or_default()));
    }
    let dn = n.dim();
    let mut entries: Vec<(usize, usize, usize, Cq)> = Vec::new();
    for c in n.constants() {
        entries.push((c.i, c.j, c.k, c.c.clone()));
    }
    for c in s.constants() {
        entries.push((dn + c.i, dn + c.j, dn + c.k, c.c.clone()));
    }
    // [s_i, n_j] = act(s_i) n_j, stored with the n index first.
    for (i, m) in d.matrices().iter().enumerate() {
        for j in 0..dn {
            for k in 0..dn {
                let c = &m[(k, j)];
                if !num_traits::Zero::is_zero(c) {
                    entries.push((j, dn + i, k, -c.clone()));
                }
            }
        }
    }
    let mut labels: Vec<String> = n.labels().to_vec();
    labels.extend(s.labels().iter().cloned());
    let p = LieAlgebra::new(
        format!("{}⋊{}", n.name(), s.name()),
        n.field(),
        dn + s.dim(),
        Some(labels),
        entries,
    )?;
    Ok(SemidirectSum {
        p,
        action: d.clone(),
    })
}

impl SemidirectSum {
    pub fn algebra(&self) -> &LieAlgebra {
        &self.p
    }

    pub fn action(&self) -> &DerivationAction {
        &self.action
    }

    pub fn dim_n(&self) -> usize {
        self.action.target().dim()
    }

    pub fn dim_s(&self) -> usize {
        self.action.source().dim()
    }

    pub fn embed_n<C: ComplexField>(&self, x: &[C]) -> Vec<C> {
        let mut v = x.to_vec();
        v.resize(self.p.dim(), C::zero());
        v
    }

    pub fn embed_s<C: ComplexField>(&self, x: &[C]) -> Vec<C> {
        let mut v = vec![C::zero(); self.dim_n()];
        v.extend_from_slice(x);
        v
    }

    /// Projection `p -> s` along `n`.
    pub fn project_s<C: ComplexField>(&self, v: &[C]) -> Vec<C> {
        v[self.dim_n()..].to_vec()
    }
}

/// The algebraic content of integrability of the horizontal distribution:
/// `n` is closed under the bracket and is an ideal.
pub fn verify_horizontal_integrability(ss: &SemidirectSum) -> IntegrabilityReport {
    check_ideal(ss.algebra(), ss.dim_n(), Tolerance::exact())
}

/// Same check for an arbitrary algebra whose first `dim_n` basis vectors
/// are meant to span an ideal.
pub fn check_ideal(p: &LieAlgebra, dim_n: usize, tol: Tolerance) -> IntegrabilityReport {
    let mut closure = 0.0f64;
    let mut ideal = 0.0f64;
    let mut worst: Option<([usize; 2], f64)> = None;
    for c in p.constants() {
        if c.k < dim_n || c.i >= dim_n {
            continue;
        }
        let r = magnitude(&c.c);
        if c.j < dim_n {
            closure = closure.max(r);
        } else {
            ideal = ideal.max(r);
        }
        if worst.is_none_or(|(_, w)| r > w) {
            worst = Some(([c.i, c.j], r));
        }
    }
    let passed = tol.accepts(closure) && tol.accepts(ideal);
    IntegrabilityReport {
        closure_residual: closure,
        ideal_residual: ideal,
        worst_pair: if passed { None } else { worst.map(|(p, _)| p) },
        passed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::FieldKind;
    use crate::linalg::Mat;
    use crate::scalar::cqi;

    #[test]
    fn abelian_plane_with_one_generator() {
        let n = LieAlgebra::abelian("r2", FieldKind::Real, 2).unwrap();
        let s = LieAlgebra::abelian("r", FieldKind::Real, 1).unwrap();
        let a = Mat::from_rows(vec![vec![cqi(1, 0), cqi(2, 0)], vec![cqi(0, 0), cqi(-1, 0)]]).unwrap();
        let d = DerivationAction::new(s.clone(), n.clone(), vec![a], Tolerance::exact()).unwrap();
        let ss = semidirect_sum(&n, &s, &d, Tolerance::exact()).unwrap();
        let p = ss.algebra();
        assert_eq!(p.dim(), 3);
        // [xi, x_1] = 2 x_0 - x_1
        let xi = p.basis_vector::<Cq>(2);
        let x1 = p.basis_vector::<Cq>(1);
        assert_eq!(p.bracket(&xi, &x1).unwrap(), vec![cqi(2, 0), cqi(-1, 0), cqi(0, 0)]);
        assert!(p.check_jacobi::<Cq>(0.0).passed);
        let rep = verify_horizontal_integrability(&ss);
        assert!(rep.passed);
        assert_eq!(rep.closure_residual, 0.0);
    }

    #[test]
    fn injected_mixed_constant_breaks_closure() {
        let p = LieAlgebra::new(
            "bad",
            FieldKind::Real,
            3,
            None,
            vec![(0, 1, 2, cqi(1, 0))],
        )
        .unwrap();
        let rep = check_ideal(&p, 2, Tolerance::exact());
        assert!(!rep.passed);
        assert_eq!(rep.worst_pair, Some([0, 1]));
        assert_eq!(rep.closure_residual, 1.0);
    }
}
