use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::scalar::{ComplexField, Cq, C64, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FieldKind {
    #[serde(rename = "R", alias = "real", alias = "ℝ")]
    Real,
    #[serde(rename = "C", alias = "complex", alias = "ℂ")]
    Complex,
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldKind::Real => "R",
            FieldKind::Complex => "C",
        })
    }
}

/// `[e_i, e_j] += c e_k` with `i < j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub c: Cq,
}

/// A Lie algebra on a fixed basis. Only the brackets `[e_i, e_j]` with
/// `i < j` are stored; antisymmetry is implied by the storage.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    field: FieldKind,
    labels: Vec<String>,
    constants: Vec<StructureConstant>,
}

impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field
            && self.labels.len() == other.labels.len()
            && self.constants == other.constants
    }
}

impl LieAlgebra {
    /// Builds an algebra from `(i, j, k, c)` entries. Entries with `i > j`
    /// are folded in by antisymmetry; repeated entries must agree.
    pub fn new(
        name: impl Into<String>,
        field: FieldKind,
        dim: usize,
        labels: Option<Vec<String>>,
        entries: impl IntoIterator<Item = (usize, usize, usize, Cq)>,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::input("Lie algebra of dimension 0"));
        }
        let labels = match labels {
            Some(l) if l.len() != dim => {
                return Err(Error::dim(format!("{} labels for dimension {dim}", l.len())))
            }
            Some(l) => l,
            None => (0..dim).map(|i| format!("e{i}")).collect(),
        };
        let mut table: BTreeMap<(usize, usize, usize), Cq> = BTreeMap::new();
        for (i, j, k, c) in entries {
            if i >= dim || j >= dim || k >= dim {
                return Err(Error::input(format!(
                    "structure constant ({i}, {j}, {k}) out of range for dimension {dim}"
                )));
            }
            if field == FieldKind::Real && !c.im.is_zero() {
                return Err(Error::input(format!(
                    "non-real structure constant at ({i}, {j}, {k}) in a real algebra"
                )));
            }
            if i == j {
                if !c.is_zero() {
                    return Err(Error::input(format!(
                        "nonzero self-bracket [e{i}, e{i}] at ({i}, {j}, {k})"
                    )));
                }
                continue;
            }
            let (key, value) = if i < j {
                ((i, j, k), c)
            } else {
                ((j, i, k), -c)
            };
            match table.get(&key) {
                Some(prev) if *prev != value => {
                    return Err(Error::input(format!(
                        "conflicting duplicate structure constant for ({}, {}, {})",
                        key.0, key.1, key.2
                    )))
                }
                _ => {
                    table.insert(key, value);
                }
            }
        }
        let constants = table
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j, k), c)| StructureConstant { i, j, k, c })
            .collect();
        Ok(LieAlgebra {
            name: name.into(),
            field,
            labels,
            constants,
        })
    }

    pub fn abelian(name: impl Into<String>, field: FieldKind, dim: usize) -> Result<Self> {
        LieAlgebra::new(name, field, dim, None, std::iter::empty())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    /// Dimension of the underlying real vector space.
    pub fn real_dim(&self) -> usize {
        match self.field {
            FieldKind::Real => self.dim(),
            FieldKind::Complex => 2 * self.dim(),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn constants(&self) -> &[StructureConstant] {
        &self.constants
    }

    pub fn is_abelian(&self) -> bool {
        self.constants.is_empty()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub(crate) fn with_field(mut self, field: FieldKind) -> Self {
        self.field = field;
        self
    }

    pub fn table<C: ComplexField>(&self) -> StructureTable<C> {
        let d = self.dim();
        let mut dense = vec![C::zero(); d * d * d];
        for sc in &self.constants {
            let c = C::from_cq(&sc.c);
            dense[(sc.i * d + sc.j) * d + sc.k] = c.clone();
            dense[(sc.j * d + sc.i) * d + sc.k] = -c;
        }
        StructureTable {
            dim: d,
            sparse: self
                .constants
                .iter()
                .map(|sc| (sc.i, sc.j, sc.k, C::from_cq(&sc.c)))
                .collect(),
            dense,
        }
    }

    pub fn bracket<C: ComplexField>(&self, x: &[C], y: &[C]) -> Result<Vec<C>> {
        let d = self.dim();
        if x.len() != d || y.len() != d {
            return Err(Error::dim(format!(
                "bracket in {} (dim {d}) of vectors of length {} and {}",
                self.name,
                x.len(),
                y.len()
            )));
        }
        let mut out = vec![C::zero(); d];
        for sc in &self.constants {
            let w = x[sc.i].clone() * y[sc.j].clone() - x[sc.j].clone() * y[sc.i].clone();
            if w.is_zero() {
                continue;
            }
            out[sc.k] = out[sc.k].clone() + C::from_cq(&sc.c) * w;
        }
        Ok(out)
    }

    pub fn basis_vector<C: ComplexField>(&self, i: usize) -> Vec<C> {
        let mut v = vec![C::zero(); self.dim()];
        v[i] = C::one();
        v
    }

    /// Matrix of `ad(x)`: column `k` holds `[x, e_k]`.
    pub fn ad_matrix<C: ComplexField>(&self, x: &[C]) -> Result<Mat<C>> {
        let d = self.dim();
        let cols = (0..d)
            .map(|k| self.bracket(x, &self.basis_vector::<C>(k)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Mat::from_columns(d, &cols))
    }

    /// Killing form `B(e_i, e_j) = tr(ad e_i ad e_j)`.
    pub fn killing_form<C: ComplexField>(&self) -> Mat<C> {
        let d = self.dim();
        let ads: Vec<Mat<C>> = (0..d)
            .map(|i| self.ad_matrix(&self.basis_vector::<C>(i)).expect("basis vector"))
            .collect();
        Mat::from_fn(d, d, |i, j| ads[i].mul(&ads[j]).expect("square").trace())
    }

    /// Gram matrix of an Ad-invariant inner product.
    ///
    /// For a compact reductive real algebra this is minus the Killing form on
    /// the derived algebra plus the identity on the center, in coordinates
    /// split along `center ⊕ [k, k]`. When that fails to be positive definite
    /// the identity in the given basis is returned instead.
    pub fn invariant_gram(&self) -> Mat<f64> {
        self.reductive_gram().unwrap_or_else(|| Mat::identity(self.dim()))
    }

    /// Whether [`invariant_gram`](Self::invariant_gram) is Ad-invariant.
    pub fn has_invariant_gram(&self) -> bool {
        self.is_abelian() || self.reductive_gram().is_some()
    }

    fn reductive_gram(&self) -> Option<Mat<f64>> {
        if self.field != FieldKind::Real {
            return None;
        }
        let d = self.dim();
        let pz = self.center_projection()?;
        let mut g = self.killing_form::<Cq>().map(|z| -z.re.clone()).to_f64();
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0.0;
                for r in 0..pz.rows() {
                    acc += pz[(r, i)] * pz[(r, j)];
                }
                g[(i, j)] += acc;
            }
        }
        linalg::to_dmatrix(&g).cholesky()?;
        Some(g)
    }

    /// Coordinates along [`center`](Self::center) of the projection onto the
    /// center parallel to the derived algebra, as a `dim z × dim` matrix.
    /// `None` unless the algebra splits as `center ⊕ [g, g]`.
    pub fn center_projection(&self) -> Option<Mat<f64>> {
        let d = self.dim();
        let center = self.center();
        let cols: Vec<Vec<Q>> = (0..d)
            .flat_map(|i| ((i + 1)..d).map(move |j| (i, j)))
            .map(|(i, j)| {
                self.bracket(&self.basis_vector::<Cq>(i), &self.basis_vector::<Cq>(j))
                    .expect("basis vectors")
                    .into_iter()
                    .map(|z| z.re)
                    .collect()
            })
            .collect();
        let derived: Vec<Vec<Q>> = if cols.is_empty() {
            Vec::new()
        } else {
            let m = Mat::from_columns(d, &cols).transpose();
            let (r, pivots) = linalg::rref(&m, 0.0);
            (0..pivots.len()).map(|row| r.row(row).to_vec()).collect()
        };
        if center.len() + derived.len() != d {
            return None;
        }
        let z = center.len();
        let mut all = center;
        all.extend(derived);
        let basis = Mat::from_columns(d, &all);
        let inv = linalg::to_dmatrix(&basis.to_f64()).try_inverse()?;
        Some(Mat::from_fn(z, d, |r, c| inv[(r, c)]))
    }

    /// Basis of the center, computed exactly.
    pub fn center(&self) -> Vec<Vec<Q>> {
        let d = self.dim();
        let blocks: Vec<Mat<Q>> = (0..d)
            .map(|i| {
                self.ad_matrix::<Cq>(&self.basis_vector::<Cq>(i))
                    .expect("basis vector")
                    .real_part()
            })
            .collect();
        let stacked = Mat::vstack(&blocks).expect("equal widths");
        linalg::nullspace_rref(&stacked, 0.0)
    }

    /// Checks the Jacobi identity on every basis triple `i < j < k`.
    pub fn check_jacobi<C: ComplexField>(&self, eps: f64) -> JacobiReport {
        let d = self.dim();
        let table = self.table::<C>();
        let mut max_residual = 0.0f64;
        let mut worst = None;
        let mut failed = false;
        let mut triples = 0usize;
        for i in 0..d {
            for j in (i + 1)..d {
                for k in (j + 1)..d {
                    triples += 1;
                    let a = table.bracket_basis_vec(i, &table.basis_bracket(j, k));
                    let b = table.bracket_basis_vec(j, &table.basis_bracket(k, i));
                    let c = table.bracket_basis_vec(k, &table.basis_bracket(i, j));
                    let mut residual = 0.0f64;
                    let mut nonzero = false;
                    for l in 0..d {
                        let s = a[l].clone() + b[l].clone() + c[l].clone();
                        if !s.is_negligible(eps) {
                            nonzero = true;
                        }
                        residual = residual.max(s.abs_f64());
                    }
                    if nonzero {
                        failed = true;
                    }
                    if residual > max_residual {
                        max_residual = residual;
                        worst = Some([i, j, k]);
                    }
                }
            }
        }
        JacobiReport {
            algebra: self.name.clone(),
            exact: C::EXACT,
            triples_checked: triples,
            max_residual,
            worst_triple: worst,
            passed: !failed,
        }
    }

    /// Norm of a complexified vector under the invariant inner product.
    pub fn hermitian_norm(&self, v: &[C64]) -> f64 {
        hermitian_norm_with(&self.invariant_gram(), v)
    }
}

pub(crate) fn hermitian_norm_with(gram: &Mat<f64>, v: &[C64]) -> f64 {
    let d = v.len();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..d {
        for j in 0..d {
            acc += v[i].conj() * gram[(i, j)] * v[j];
        }
    }
    acc.re.max(0.0).sqrt()
}

/// Structure constants converted once to a working scalar type.
#[derive(Clone, Debug)]
pub struct StructureTable<C> {
    dim: usize,
    sparse: Vec<(usize, usize, usize, C)>,
    dense: Vec<C>,
}

impl<C: ComplexField> StructureTable<C> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Bracket without length checks; callers guarantee `x.len() == y.len() == dim`.
    pub fn bracket(&self, x: &[C], y: &[C]) -> Vec<C> {
        let mut out = vec![C::zero(); self.dim];
        for (i, j, k, c) in &self.sparse {
            let w = x[*i].clone() * y[*j].clone() - x[*j].clone() * y[*i].clone();
            out[*k] = out[*k].clone() + c.clone() * w;
        }
        out
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> Vec<C> {
        let d = self.dim;
        self.dense[(i * d + j) * d..(i * d + j + 1) * d].to_vec()
    }

    /// `[e_i, v]`
    pub fn bracket_basis_vec(&self, i: usize, v: &[C]) -> Vec<C> {
        let d = self.dim;
        let mut out = vec![C::zero(); d];
        for (l, vl) in v.iter().enumerate() {
            if vl.is_zero() {
                continue;
            }
            for (k, o) in out.iter_mut().enumerate() {
                let c = &self.dense[(i * d + l) * d + k];
                if !c.is_zero() {
                    *o = o.clone() + c.clone() * vl.clone();
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JacobiReport {
    pub algebra: String,
    pub exact: bool,
    pub triples_checked: usize,
    pub max_residual: f64,
    pub worst_triple: Option<[usize; 3]>,
    pub passed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{cqi, q};

    pub(crate) fn sl2() -> LieAlgebra {
        // (H, E, F): [H,E] = 2E, [H,F] = -2F, [E,F] = H
        LieAlgebra::new(
            "sl2",
            FieldKind::Complex,
            3,
            Some(vec!["H".into(), "E".into(), "F".into()]),
            vec![
                (0, 1, 1, cqi(2, 0)),
                (0, 2, 2, cqi(-2, 0)),
                (1, 2, 0, cqi(1, 0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn abelian_bracket_vanishes() {
        let a = LieAlgebra::abelian("a3", FieldKind::Real, 3).unwrap();
        let x = vec![cqi(1, 0), cqi(2, 0), cqi(3, 0)];
        let y = vec![cqi(-4, 0), cqi(0, 1), cqi(7, 0)];
        assert!(a.bracket(&x, &y).unwrap().iter().all(Zero::is_zero));
        let rep = a.check_jacobi::<Cq>(0.0);
        assert!(rep.passed);
        assert_eq!(rep.max_residual, 0.0);
    }

    #[test]
    fn sl2_brackets_and_jacobi() {
        let g = sl2();
        let e = g.basis_vector::<Cq>(1);
        let f = g.basis_vector::<Cq>(2);
        assert_eq!(g.bracket(&e, &f).unwrap(), g.basis_vector::<Cq>(0));
        assert_eq!(g.bracket(&f, &e).unwrap(), vec![cqi(-1, 0), cqi(0, 0), cqi(0, 0)]);
        let rep = g.check_jacobi::<Cq>(0.0);
        assert!(rep.passed);
        assert_eq!(rep.max_residual, 0.0);
        assert_eq!(rep.triples_checked, 1);
    }

    #[test]
    fn perturbed_sl2_fails_jacobi() {
        // [H,E] = 3E instead of 2E; the triple (H, E, F) picks up a residual of 1.
        let g = LieAlgebra::new(
            "sl2-bad",
            FieldKind::Complex,
            3,
            None,
            vec![
                (0, 1, 1, cqi(3, 0)),
                (0, 2, 2, cqi(-2, 0)),
                (1, 2, 0, cqi(1, 0)),
            ],
        )
        .unwrap();
        let rep = g.check_jacobi::<Cq>(0.0);
        assert!(!rep.passed);
        assert!(rep.max_residual >= 1.0);
        assert_eq!(rep.worst_triple, Some([0, 1, 2]));
        let rep = g.check_jacobi::<C64>(1e-9);
        assert!(!rep.passed);
    }

    #[test]
    fn rejects_conflicting_duplicates_and_self_brackets() {
        let dup = LieAlgebra::new(
            "bad",
            FieldKind::Real,
            2,
            None,
            vec![(0, 1, 0, cqi(1, 0)), (1, 0, 0, cqi(1, 0))],
        );
        assert!(matches!(dup, Err(Error::Input(m)) if m.contains("(0, 1, 0)")));
        let same = LieAlgebra::new(
            "ok",
            FieldKind::Real,
            2,
            None,
            vec![(0, 1, 0, cqi(1, 0)), (1, 0, 0, cqi(-1, 0))],
        );
        assert!(same.is_ok());
        let selfb = LieAlgebra::new("bad", FieldKind::Real, 2, None, vec![(1, 1, 0, cqi(1, 0))]);
        assert!(selfb.is_err());
        let complex_in_real =
            LieAlgebra::new("bad", FieldKind::Real, 2, None, vec![(0, 1, 0, cqi(0, 1))]);
        assert!(complex_in_real.is_err());
    }

    #[test]
    fn dimension_mismatch_is_an_input_error() {
        let g = sl2();
        assert!(matches!(
            g.bracket(&[cqi(1, 0)], &[cqi(1, 0), cqi(0, 0), cqi(0, 0)]),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn killing_form_of_sl2() {
        let k = sl2().killing_form::<Cq>();
        assert_eq!(k[(0, 0)], cqi(8, 0));
        assert_eq!(k[(1, 2)], cqi(4, 0));
        assert_eq!(k[(1, 1)], cqi(0, 0));
    }

    #[test]
    fn invariant_gram_of_u2_is_ad_invariant() {
        use crate::lie::MatrixBasis;
        let m = |a: [[(i64, i64); 2]; 2]| Mat::from_fn(2, 2, |r, c| cqi(a[r][c].0, a[r][c].1));
        let u2 = MatrixBasis::new(
            FieldKind::Real,
            vec![
                m([[(0, 1), (0, 0)], [(0, 0), (0, 0)]]),
                m([[(0, 0), (0, 0)], [(0, 0), (0, 1)]]),
                m([[(0, 0), (1, 0)], [(-1, 0), (0, 0)]]),
                m([[(0, 0), (0, 1)], [(0, 1), (0, 0)]]),
            ],
        )
        .unwrap()
        .lie_algebra("u2", None)
        .unwrap();
        assert!(u2.has_invariant_gram());
        let g = u2.invariant_gram();
        for i in 0..4 {
            let ad = u2.ad_matrix(&u2.basis_vector::<Cq>(i)).unwrap().real_part().to_f64();
            let lhs = ad.transpose().mul(&g).unwrap().add(&g.mul(&ad).unwrap()).unwrap();
            assert!(lhs.max_abs() < 1e-12);
        }
    }

    #[test]
    fn center_of_gl2_like_algebra() {
        // span(h, e, f, z) with z central.
        let g = LieAlgebra::new(
            "gl2",
            FieldKind::Real,
            4,
            None,
            vec![
                (0, 1, 1, cqi(2, 0)),
                (0, 2, 2, cqi(-2, 0)),
                (1, 2, 0, cqi(1, 0)),
            ],
        )
        .unwrap();
        let z = g.center();
        assert_eq!(z.len(), 1);
        assert_eq!(z[0], vec![q(0, 1), q(0, 1), q(0, 1), q(1, 1)]);
    }

    use proptest::prelude::*;

    proptest! {
        #[test]
        fn bracket_is_bilinear_and_alternating(
            xs in prop::collection::vec(-5.0f64..5.0, 3),
            ys in prop::collection::vec(-5.0f64..5.0, 3),
            zs in prop::collection::vec(-5.0f64..5.0, 3),
            alpha in -3.0f64..3.0,
        ) {
            let g = sl2();
            let c = |v: &Vec<f64>| v.iter().map(|&a| C64::new(a, 0.0)).collect::<Vec<_>>();
            let (x, y, z) = (c(&xs), c(&ys), c(&zs));
            let lhs_in: Vec<C64> = x.iter().zip(&y).map(|(a, b)| a * alpha + b).collect();
            let lhs = g.bracket(&lhs_in, &z).unwrap();
            let bxz = g.bracket(&x, &z).unwrap();
            let byz = g.bracket(&y, &z).unwrap();
            for k in 0..3 {
                prop_assert!((lhs[k] - (bxz[k] * alpha + byz[k])).norm() < 1e-9);
            }
            let xx = g.bracket(&x, &x).unwrap();
            prop_assert!(xx.iter().all(|v| v.norm() < 1e-12));
        }
    }
}
