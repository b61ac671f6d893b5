//! Built-in examples: maximal parabolics with abelian unipotent radical and
//! two controls.

use num_integer::Integer;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lie::{FieldKind, LieAlgebra, MatrixBasis};
use crate::linalg::Mat;
use crate::moduli::{antiholomorphic_to_real, HomomorphismDatum};
use crate::scalar::{cqi, Cq, Field, Tolerance, Q};
use crate::semidirect::{semidirect_sum, DerivationAction, MatrixGroupModel, SemidirectSum};

/// How the central circle acts on `n`.
#[derive(Clone, Debug, PartialEq)]
pub enum ZData {
    /// `exp(tζ)` acts on `n` by `e^{i w0 t}`.
    Character { zeta: Vec<Q>, w0: i64 },
    /// The single-character hypothesis fails for this `ζ`.
    HypothesisViolated { zeta: Vec<Q> },
}

impl ZData {
    pub fn zeta(&self) -> &[Q] {
        match self {
            ZData::Character { zeta, .. } | ZData::HypothesisViolated { zeta } => zeta,
        }
    }

    pub fn w0(&self) -> Option<i64> {
        match self {
            ZData::Character { w0, .. } => Some(*w0),
            ZData::HypothesisViolated { .. } => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct BetaSpec {
    pub id: String,
    pub dbeta: Mat<Q>,
    pub zeta: Vec<Q>,
    pub w0: i64,
}

/// A compact target algebra `k` with the homomorphism data shipped for it.
#[derive(Clone, Debug)]
pub struct Target {
    pub id: String,
    pub algebra: LieAlgebra,
    /// Generator of a `2π`-periodic circle in `K`, used to enumerate
    /// characters of a one-dimensional `K(S)`.
    pub circle: Option<Vec<Q>>,
    pub betas: Vec<BetaSpec>,
}

#[derive(Clone, Debug)]
pub struct NamedPair {
    pub id: String,
    pub target: String,
    pub beta: String,
    pub omega: Mat<Q>,
    pub expected_c0: Option<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedFact {
    pub target: String,
    pub beta: String,
    pub invariant_dim: usize,
    pub c0_whole_space: bool,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Expected {
    pub w0: Option<i64>,
    pub facts: Vec<ExpectedFact>,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: String,
    pub n: LieAlgebra,
    pub s: LieAlgebra,
    pub ks: LieAlgebra,
    pub s_action: DerivationAction,
    pub ks_action: DerivationAction,
    pub model: Option<MatrixGroupModel>,
    pub z_data: ZData,
    pub targets: Vec<Target>,
    pub pairs: Vec<NamedPair>,
    pub expected: Expected,
}

impl CatalogEntry {
    pub fn semidirect(&self) -> Result<SemidirectSum> {
        semidirect_sum(&self.n, &self.s, &self.s_action, Tolerance::exact())
    }

    pub fn target(&self, id: &str) -> Result<&Target> {
        self.targets
            .iter()
            .find(|t| t.id == id)
            .ok_or_else(|| Error::input(format!("{}: no target {id:?}", self.id)))
    }

    pub fn beta(&self, target: &str, beta: &str) -> Result<(&Target, &BetaSpec)> {
        let t = self.target(target)?;
        let b = t
            .betas
            .iter()
            .find(|b| b.id == beta)
            .ok_or_else(|| Error::input(format!("{}: target {target:?} has no beta {beta:?}", self.id)))?;
        Ok((t, b))
    }

    /// The validated homomorphism datum for a shipped `β`.
    pub fn datum(&self, target: &str, beta: &str, tol: Tolerance) -> Result<HomomorphismDatum> {
        let (t, b) = self.beta(target, beta)?;
        HomomorphismDatum::new(
            self.ks.clone(),
            t.algebra.clone(),
            b.dbeta.clone(),
            b.zeta.clone(),
            b.w0,
            &self.ks_action,
            tol,
        )
    }

    pub fn is_n_abelian(&self) -> bool {
        self.n.is_abelian()
    }
}

/// All shipped entries in a fixed order.
pub fn catalog() -> Vec<CatalogEntry> {
    vec![
        build_parabolic_sl(2, 1).expect("sl2-1"),
        build_parabolic_sl(3, 1).expect("sl3-1"),
        build_parabolic_sl(4, 2).expect("sl4-2"),
        build_siegel_sp4().expect("sp4-siegel"),
        build_heisenberg_negative().expect("heisenberg"),
        build_weighted_plane().expect("weighted-plane"),
    ]
}

pub fn entry(id: &str) -> Option<CatalogEntry> {
    catalog().into_iter().find(|e| e.id == id)
}

fn unit(n: usize, i: usize, j: usize, z: Cq) -> Mat<Cq> {
    let mut m = Mat::zeros(n, n);
    m[(i, j)] = z;
    m
}

fn diag(entries: &[Cq]) -> Mat<Cq> {
    let n = entries.len();
    Mat::from_fn(n, n, |r, c| if r == c { entries[r].clone() } else { Cq::zero() })
}

fn sum(a: &Mat<Cq>, b: &Mat<Cq>) -> Mat<Cq> {
    a.add(b).expect("same shape")
}

fn block(blocks: [[&Mat<Cq>; 2]; 2]) -> Mat<Cq> {
    let k = blocks[0][0].rows();
    Mat::from_fn(2 * k, 2 * k, |r, c| blocks[r / k][c / k][(r % k, c % k)].clone())
}

fn cartan(n: usize, a: usize, scale: Cq) -> Mat<Cq> {
    let mut m = unit(n, a, a, scale.clone());
    m[(a + 1, a + 1)] = -scale;
    m
}

/// Real basis of `su(n)`: `iH_a`, then `E_jk − E_kj` and `i(E_jk + E_kj)`.
pub fn su_basis(n: usize) -> (Vec<Mat<Cq>>, Vec<String>) {
    let mut mats = Vec::new();
    let mut labels = Vec::new();
    for a in 0..n - 1 {
        mats.push(cartan(n, a, cqi(0, 1)));
        labels.push(format!("iH{}", a + 1));
    }
    for j in 0..n {
        for k in (j + 1)..n {
            mats.push(sum(&unit(n, j, k, cqi(1, 0)), &unit(n, k, j, cqi(-1, 0))));
            labels.push(format!("A{}{}", j + 1, k + 1));
            mats.push(sum(&unit(n, j, k, cqi(0, 1)), &unit(n, k, j, cqi(0, 1))));
            labels.push(format!("S{}{}", j + 1, k + 1));
        }
    }
    (mats, labels)
}

fn algebra(name: &str, field: FieldKind, mats: Vec<Mat<Cq>>, labels: Vec<String>) -> Result<(MatrixBasis, LieAlgebra)> {
    let basis = MatrixBasis::new(field, mats)?;
    let alg = basis.lie_algebra(name, Some(labels))?;
    Ok((basis, alg))
}

/// Action of `src` on `n` by matrix commutators, in the basis of `n`.
fn commutator_action(
    src: &MatrixBasis,
    src_alg: &LieAlgebra,
    n: &MatrixBasis,
    n_alg: &LieAlgebra,
) -> Result<DerivationAction> {
    let mats = src
        .matrices()
        .iter()
        .map(|x| {
            let cols = n
                .matrices()
                .iter()
                .map(|y| n.coords(&x.commutator(y)?))
                .collect::<Result<Vec<_>>>()?;
            Ok(Mat::from_columns(n.len(), &cols))
        })
        .collect::<Result<Vec<_>>>()?;
    DerivationAction::new(src_alg.clone(), n_alg.clone(), mats, Tolerance::exact())
}

/// Real coordinates of `m` in a real span.
fn real_coords(basis: &MatrixBasis, m: &Mat<Cq>) -> Result<Vec<Q>> {
    Ok(basis.coords(m)?.into_iter().map(|z| z.re).collect())
}

/// `dβ` of an inclusion `k(S) ⊂ k`, column by column.
fn inclusion(ks: &MatrixBasis, k: &MatrixBasis) -> Result<Mat<Q>> {
    let cols = ks
        .matrices()
        .iter()
        .map(|m| real_coords(k, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(Mat::from_columns(k.len(), &cols))
}

struct Parts {
    id: String,
    n: (Vec<Mat<Cq>>, Vec<String>),
    s: (Vec<Mat<Cq>>, Vec<String>),
    ks: (Vec<Mat<Cq>>, Vec<String>),
    zeta_matrix: Mat<Cq>,
}

struct Assembled {
    ks_basis: MatrixBasis,
    n: LieAlgebra,
    s: LieAlgebra,
    ks: LieAlgebra,
    s_action: DerivationAction,
    ks_action: DerivationAction,
    model: MatrixGroupModel,
    zeta: Vec<Q>,
}

fn assemble(p: Parts) -> Result<Assembled> {
    let (n_basis, n) = algebra(&format!("n({})", p.id), FieldKind::Complex, p.n.0, p.n.1)?;
    let (s_basis, s) = algebra(&format!("s({})", p.id), FieldKind::Complex, p.s.0, p.s.1)?;
    let (ks_basis, ks) = algebra(&format!("k(S)({})", p.id), FieldKind::Real, p.ks.0, p.ks.1)?;
    let s_action = commutator_action(&s_basis, &s, &n_basis, &n)?;
    let ks_action = commutator_action(&ks_basis, &ks, &n_basis, &n)?;
    let zeta = real_coords(&ks_basis, &p.zeta_matrix)?;
    let model = MatrixGroupModel::new(n_basis.clone(), s_basis, Some(ks_basis.clone()))?;
    Ok(Assembled {
        ks_basis,
        n,
        s,
        ks,
        s_action,
        ks_action,
        model,
        zeta,
    })
}

/// Maximal parabolic of `SL(n, C)` stabilizing a `k`-plane.
pub fn build_parabolic_sl(n: usize, k: usize) -> Result<CatalogEntry> {
    if n < 2 || k < 1 || k >= n {
        return Err(Error::input(format!(
            "parabolic of SL({n}) needs 1 <= k <= n-1, got k = {k}"
        )));
    }
    let id = format!("sl{n}-{k}");
    let blocks = [(0..k), (k..n)];
    let mut n_mats = Vec::new();
    let mut n_labels = Vec::new();
    for i in 0..k {
        for j in k..n {
            n_mats.push(unit(n, i, j, cqi(1, 0)));
            n_labels.push(format!("E{}{}", i + 1, j + 1));
        }
    }
    let mut s_mats = Vec::new();
    let mut s_labels = Vec::new();
    let mut ks_mats = Vec::new();
    let mut ks_labels = Vec::new();
    for b in &blocks {
        for i in b.clone() {
            for j in b.clone() {
                if i != j {
                    s_mats.push(unit(n, i, j, cqi(1, 0)));
                    s_labels.push(format!("E{}{}", i + 1, j + 1));
                }
                if i < j {
                    ks_mats.push(sum(&unit(n, i, j, cqi(1, 0)), &unit(n, j, i, cqi(-1, 0))));
                    ks_labels.push(format!("A{}{}", i + 1, j + 1));
                    ks_mats.push(sum(&unit(n, i, j, cqi(0, 1)), &unit(n, j, i, cqi(0, 1))));
                    ks_labels.push(format!("S{}{}", i + 1, j + 1));
                }
            }
        }
    }
    for a in 0..n - 1 {
        s_mats.push(cartan(n, a, cqi(1, 0)));
        s_labels.push(format!("H{}", a + 1));
        ks_mats.push(cartan(n, a, cqi(0, 1)));
        ks_labels.push(format!("iH{}", a + 1));
    }
    let g = (k as i64).gcd(&((n - k) as i64));
    let zeta_diag: Vec<Cq> = (0..n)
        .map(|i| {
            let v = if i < k { (n - k) as i64 } else { -(k as i64) };
            Cq::new(Q::zero(), Q::from_i64(v) / Q::from_i64(g))
        })
        .collect();
    let w0 = n as i64 / g;
    let a = assemble(Parts {
        id: id.clone(),
        n: (n_mats, n_labels),
        s: (s_mats, s_labels),
        ks: (ks_mats, ks_labels),
        zeta_matrix: diag(&zeta_diag),
    })?;

    let (su_mats, su_labels) = su_basis(n);
    let (su_basis_m, su) = algebra(&format!("su{n}"), FieldKind::Real, su_mats, su_labels)?;
    let dbeta = inclusion(&a.ks_basis, &su_basis_m)?;
    let circle = if n == 2 {
        Some(real_coords(&su_basis_m, &cartan(2, 0, cqi(0, 1)))?)
    } else {
        None
    };
    let mut targets = vec![Target {
        id: format!("su{n}"),
        algebra: su,
        circle,
        betas: vec![BetaSpec {
            id: "inclusion".into(),
            dbeta,
            zeta: a.zeta.clone(),
            w0,
        }],
    }];
    let mut facts = vec![ExpectedFact {
        target: format!("su{n}"),
        beta: "inclusion".into(),
        invariant_dim: 2,
        c0_whole_space: true,
    }];
    if n == 2 {
        // β into U(1) by the defining character; nothing is invariant.
        let u1 = LieAlgebra::new("u1", FieldKind::Real, 1, Some(vec!["i".into()]), Vec::new())?;
        targets.push(Target {
            id: "u1".into(),
            algebra: u1,
            circle: Some(vec![Q::from_i64(1)]),
            betas: vec![BetaSpec {
                id: "unit".into(),
                dbeta: Mat::from_fn(1, 1, |_, _| Q::from_i64(1)),
                zeta: a.zeta.clone(),
                w0,
            }],
        });
        facts.push(ExpectedFact {
            target: "u1".into(),
            beta: "unit".into(),
            invariant_dim: 0,
            c0_whole_space: true,
        });
    }
    Ok(CatalogEntry {
        id,
        n: a.n,
        s: a.s,
        ks: a.ks,
        s_action: a.s_action,
        ks_action: a.ks_action,
        model: Some(a.model),
        z_data: ZData::Character { zeta: a.zeta, w0 },
        targets,
        pairs: Vec::new(),
        expected: Expected {
            w0: Some(w0),
            facts,
        },
    })
}

/// Siegel parabolic of `Sp(4, C)` for the form `[[0, I], [-I, 0]]`.
pub fn build_siegel_sp4() -> Result<CatalogEntry> {
    let z2 = Mat::<Cq>::zeros(2, 2);
    let e = |i, j, z| unit(2, i, j, z);
    let sym = [
        (e(0, 0, cqi(1, 0)), "11"),
        (e(1, 1, cqi(1, 0)), "22"),
        (sum(&e(0, 1, cqi(1, 0)), &e(1, 0, cqi(1, 0))), "12"),
    ];
    let n_mats: Vec<Mat<Cq>> = sym.iter().map(|(b, _)| block([[&z2, b], [&z2, &z2]])).collect();
    let n_labels: Vec<String> = sym.iter().map(|(_, l)| format!("N{l}")).collect();
    let levi = |a: &Mat<Cq>| block([[a, &z2], [&z2, &a.transpose().scale(&cqi(-1, 0))]]);
    let gl2 = [
        (e(0, 0, cqi(1, 0)), "E11"),
        (e(0, 1, cqi(1, 0)), "E12"),
        (e(1, 0, cqi(1, 0)), "E21"),
        (e(1, 1, cqi(1, 0)), "E22"),
    ];
    let s_mats: Vec<Mat<Cq>> = gl2.iter().map(|(a, _)| levi(a)).collect();
    let s_labels: Vec<String> = gl2.iter().map(|(_, l)| l.to_string()).collect();
    let u2 = [
        (e(0, 0, cqi(0, 1)), "iE11"),
        (e(1, 1, cqi(0, 1)), "iE22"),
        (sum(&e(0, 1, cqi(1, 0)), &e(1, 0, cqi(-1, 0))), "A12"),
        (sum(&e(0, 1, cqi(0, 1)), &e(1, 0, cqi(0, 1))), "S12"),
    ];
    let ks_mats: Vec<Mat<Cq>> = u2.iter().map(|(a, _)| levi(a)).collect();
    let ks_labels: Vec<String> = u2.iter().map(|(_, l)| l.to_string()).collect();
    let zeta_matrix = levi(&diag(&[cqi(0, 1), cqi(0, 1)]));
    let a = assemble(Parts {
        id: "sp4-siegel".into(),
        n: (n_mats, n_labels),
        s: (s_mats, s_labels),
        ks: (ks_mats.clone(), ks_labels.clone()),
        zeta_matrix,
    })?;

    let mut usp_mats = ks_mats;
    let mut usp_labels = ks_labels;
    for (b, l) in &sym {
        for (scale, tag) in [(cqi(1, 0), "R"), (cqi(0, 1), "I")] {
            let bb = b.scale(&scale);
            let lower = bb.conj().scale(&cqi(-1, 0));
            usp_mats.push(block([[&z2, &bb], [&lower, &z2]]));
            usp_labels.push(format!("B{tag}{l}"));
        }
    }
    let (usp_basis, usp) = algebra("usp4", FieldKind::Real, usp_mats, usp_labels)?;
    let dbeta = inclusion(&a.ks_basis, &usp_basis)?;
    Ok(CatalogEntry {
        id: "sp4-siegel".into(),
        n: a.n,
        s: a.s,
        ks: a.ks,
        s_action: a.s_action,
        ks_action: a.ks_action,
        model: Some(a.model),
        z_data: ZData::Character {
            zeta: a.zeta.clone(),
            w0: 2,
        },
        targets: vec![Target {
            id: "usp4".into(),
            algebra: usp,
            circle: None,
            betas: vec![BetaSpec {
                id: "inclusion".into(),
                dbeta,
                zeta: a.zeta,
                w0: 2,
            }],
        }],
        pairs: Vec::new(),
        expected: Expected {
            w0: Some(2),
            facts: vec![ExpectedFact {
                target: "usp4".into(),
                beta: "inclusion".into(),
                invariant_dim: 2,
                c0_whole_space: true,
            }],
        },
    })
}

/// Heisenberg `n` inside `sl(3)` with the circle `i·diag(1, 0, -1)`, which
/// acts with weights `(1, 1, 2)`: the single-character hypothesis fails.
pub fn build_heisenberg_negative() -> Result<CatalogEntry> {
    let a = assemble(Parts {
        id: "heisenberg-negative".into(),
        n: (
            vec![unit(3, 0, 1, cqi(1, 0)), unit(3, 1, 2, cqi(1, 0)), unit(3, 0, 2, cqi(1, 0))],
            vec!["x".into(), "y".into(), "z".into()],
        ),
        s: (vec![diag(&[cqi(1, 0), cqi(0, 0), cqi(-1, 0)])], vec!["T".into()]),
        ks: (vec![diag(&[cqi(0, 1), cqi(0, 0), cqi(0, -1)])], vec!["iT".into()]),
        zeta_matrix: diag(&[cqi(0, 1), cqi(0, 0), cqi(0, -1)]),
    })?;
    let u1 = LieAlgebra::new("u1", FieldKind::Real, 1, Some(vec!["i".into()]), Vec::new())?;
    Ok(CatalogEntry {
        id: "heisenberg-negative".into(),
        n: a.n,
        s: a.s,
        ks: a.ks,
        s_action: a.s_action,
        ks_action: a.ks_action,
        model: Some(a.model),
        z_data: ZData::HypothesisViolated {
            zeta: a.zeta.clone(),
        },
        targets: vec![Target {
            id: "u1".into(),
            algebra: u1,
            circle: Some(vec![Q::from_i64(1)]),
            betas: vec![BetaSpec {
                id: "unit".into(),
                dbeta: Mat::from_fn(1, 1, |_, _| Q::from_i64(1)),
                zeta: a.zeta,
                w0: 1,
            }],
        }],
        pairs: Vec::new(),
        expected: Expected::default(),
    })
}

/// Control with `C0` strictly smaller than `W^{K(S)}`: `n = span(E13, E23)`
/// with `K(S) = U(1)` generated by `i·diag(1, 1, -2)` (weight 3) and
/// `dβ(ζ) = 3i·diag(1, 0, -1)` in `su(3)`. Then `V^{-3} = span(E21, E32)`,
/// which is not abelian.
pub fn build_weighted_plane() -> Result<CatalogEntry> {
    let a = assemble(Parts {
        id: "weighted-plane".into(),
        n: (
            vec![unit(3, 0, 2, cqi(1, 0)), unit(3, 1, 2, cqi(1, 0))],
            vec!["E13".into(), "E23".into()],
        ),
        s: (vec![diag(&[cqi(1, 0), cqi(1, 0), cqi(-2, 0)])], vec!["T".into()]),
        ks: (vec![diag(&[cqi(0, 1), cqi(0, 1), cqi(0, -2)])], vec!["iT".into()]),
        zeta_matrix: diag(&[cqi(0, 1), cqi(0, 1), cqi(0, -2)]),
    })?;
    let (su_mats, su_labels) = su_basis(3);
    let (su_real, su) = algebra("su3", FieldKind::Real, su_mats.clone(), su_labels)?;
    let image = diag(&[cqi(0, 3), cqi(0, 0), cqi(0, -3)]);
    let dbeta = Mat::from_columns(su.dim(), &[real_coords(&su_real, &image)?]);

    // α(ē1) = E21, α(ē2) = E32 in complex coordinates of su(3) ⊗ C.
    let su_complex = MatrixBasis::new(FieldKind::Complex, su_mats)?;
    let cols = [unit(3, 1, 0, cqi(1, 0)), unit(3, 2, 1, cqi(1, 0))]
        .iter()
        .map(|m| su_complex.coords(m))
        .collect::<Result<Vec<_>>>()?;
    let alpha = Mat::from_columns(su.dim(), &cols);
    let omega = antiholomorphic_to_real(&alpha);
    Ok(CatalogEntry {
        id: "weighted-plane".into(),
        n: a.n,
        s: a.s,
        ks: a.ks,
        s_action: a.s_action,
        ks_action: a.ks_action,
        model: Some(a.model),
        z_data: ZData::Character {
            zeta: a.zeta.clone(),
            w0: 3,
        },
        targets: vec![Target {
            id: "su3".into(),
            algebra: su,
            circle: None,
            betas: vec![BetaSpec {
                id: "weight-3".into(),
                dbeta,
                zeta: a.zeta,
                w0: 3,
            }],
        }],
        pairs: vec![NamedPair {
            id: "phi-nonzero".into(),
            target: "su3".into(),
            beta: "weight-3".into(),
            omega,
            expected_c0: Some(false),
        }],
        expected: Expected {
            w0: Some(3),
            facts: vec![ExpectedFact {
                target: "su3".into(),
                beta: "weight-3".into(),
                invariant_dim: 8,
                c0_whole_space: false,
            }],
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::c0_whole_span;
    use crate::lie::complexify;
    use crate::moduli::{action_operator, invariant_subspace, CandidatePair, WSpace};

    #[test]
    fn expected_invariant_dims_and_c0() {
        for e in catalog() {
            for f in &e.expected.facts {
                let beta = e.datum(&f.target, &f.beta, Tolerance::exact()).unwrap();
                let ops = action_operator(&beta, &e.ks_action).unwrap();
                let w = WSpace::new(&e.n, beta.target());
                let inv = invariant_subspace(&ops, w.dim(), Tolerance::exact());
                assert_eq!(inv.len(), f.invariant_dim, "{} {}", e.id, f.target);
                let omegas: Vec<_> = inv.iter().map(|v| w.from_coords(v).unwrap()).collect();
                let h = complexify(beta.target()).unwrap();
                let c0 = c0_whole_span(&omegas, &h, Tolerance::exact()).unwrap();
                assert_eq!(c0.c0, f.c0_whole_space, "{} {}", e.id, f.target);
            }
        }
    }

    #[test]
    fn shipped_pair_is_invariant_and_not_in_c0() {
        let e = build_weighted_plane().unwrap();
        let p = &e.pairs[0];
        let beta = e.datum(&p.target, &p.beta, Tolerance::exact()).unwrap();
        let pair = CandidatePair::new(beta, p.omega.clone(), &e.ks_action, Tolerance::exact()).unwrap();
        let h = complexify(pair.beta().target()).unwrap();
        let r = crate::curvature::c0_membership(&pair, &h, Tolerance::exact()).unwrap();
        assert!(!r.c0);
        assert!(r.residual > 0.1);
    }

    #[test]
    fn heisenberg_violates_the_hypothesis() {
        let e = build_heisenberg_negative().unwrap();
        let err = e.datum("u1", "unit", Tolerance::exact()).unwrap_err();
        assert!(matches!(err, Error::Hypothesis(_)), "{err}");
    }

    #[test]
    fn parabolic_rejects_bad_k() {
        assert!(build_parabolic_sl(3, 3).is_err());
        assert!(build_parabolic_sl(3, 0).is_err());
    }
}
