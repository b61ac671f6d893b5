//! JSON spec files. Scalars are `"p/q"` strings (or JSON numbers) for real
//! values and `[re, im]` pairs for complex ones; matrices are lists of rows.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::catalog::{BetaSpec, CatalogEntry, Expected, ExpectedFact, NamedPair, Target, ZData};
use crate::error::{Error, Result};
use crate::lie::{FieldKind, LieAlgebra, MatrixBasis};
use crate::linalg::Mat;
use crate::scalar::{format_rational, parse_rational, Cq, Q};
use crate::semidirect::{DerivationAction, MatrixGroupModel};

pub const HYPOTHESIS_VIOLATED: &str = "hypothesis-violated";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawAlgebra {
    pub name: String,
    pub dim: usize,
    pub field: String,
    pub basis: Vec<String>,
    pub brackets: Vec<(usize, usize, usize, Value)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawModel {
    pub size: usize,
    pub n: Vec<Vec<Vec<Value>>>,
    pub s: Vec<Vec<Vec<Value>>>,
    #[serde(rename = "kS")]
    pub ks: Vec<Vec<Vec<Value>>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawZData {
    pub z_generator: Vec<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z_weight_on_n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawBeta {
    pub id: String,
    pub dbeta: Vec<Vec<Value>>,
    pub z_generator: Vec<Value>,
    pub z_weight_on_n: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawTarget {
    pub id: String,
    pub algebra: RawAlgebra,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circle: Option<Vec<Value>>,
    #[serde(default)]
    pub betas: Vec<RawBeta>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawPair {
    pub id: String,
    pub target: String,
    pub beta: String,
    pub omega: Vec<Vec<Value>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_c0: Option<bool>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawFact {
    pub target: String,
    pub beta: String,
    pub invariant_dim: usize,
    pub c0_whole_space: bool,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawExpected {
    #[serde(default)]
    pub w0: Option<i64>,
    #[serde(default)]
    pub facts: Vec<RawFact>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawEntry {
    pub id: String,
    pub n: RawAlgebra,
    pub s: RawAlgebra,
    #[serde(rename = "kS")]
    pub ks: RawAlgebra,
    #[serde(rename = "kSConnected", default = "yes")]
    pub ks_connected: bool,
    pub s_action: Vec<Vec<Vec<Value>>>,
    #[serde(rename = "kSAction")]
    pub ks_action: Vec<Vec<Vec<Value>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<RawModel>,
    pub z_data: RawZData,
    #[serde(default)]
    pub targets: Vec<RawTarget>,
    #[serde(default)]
    pub pairs: Vec<RawPair>,
    #[serde(default)]
    pub expected: RawExpected,
}

fn yes() -> bool {
    true
}

/// A stand-alone candidate pair: `{ target, beta: {dbeta, zGenerator, zWeightOnN}, omega }`.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawPairFile {
    #[serde(default)]
    pub id: Option<String>,
    pub target: String,
    pub beta: RawPairBeta,
    pub omega: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RawPairBeta {
    pub dbeta: Vec<Vec<Value>>,
    pub z_generator: Vec<Value>,
    pub z_weight_on_n: i64,
}

fn syntax(e: serde_json::Error) -> Error {
    Error::parse(format!("line {}, column {}", e.line(), e.column()), e.to_string())
}

// ---------------------------------------------------------------------------
// Scalars

fn scalar_text(v: &Value, path: &str) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::parse(path, format!("expected a rational, found {other}"))),
    }
}

fn rational(v: &Value, path: &str) -> Result<Q> {
    let s = scalar_text(v, path)?;
    if s.contains(['e', 'E']) {
        return Err(Error::parse(path, format!("exponent notation is not exact: {s:?}")));
    }
    parse_rational(&s).map_err(|e| Error::parse(path, e.to_string()))
}

/// `"p/q"`, a number, or `[re, im]`.
pub fn parse_scalar(v: &Value, path: &str) -> Result<Cq> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(Cq::new(
            rational(&parts[0], &format!("{path}[0]"))?,
            rational(&parts[1], &format!("{path}[1]"))?,
        )),
        Value::Array(parts) => Err(Error::parse(
            path,
            format!("complex scalar needs [re, im], found {} entries", parts.len()),
        )),
        _ => Ok(Cq::new(rational(v, path)?, Q::zero())),
    }
}

fn parse_real(v: &Value, path: &str) -> Result<Q> {
    let z = parse_scalar(v, path)?;
    if !z.im.is_zero() {
        return Err(Error::parse(path, "expected a real scalar"));
    }
    Ok(z.re)
}

pub fn format_scalar(z: &Cq) -> Value {
    if z.im.is_zero() {
        Value::String(format_rational(&z.re))
    } else {
        Value::Array(vec![
            Value::String(format_rational(&z.re)),
            Value::String(format_rational(&z.im)),
        ])
    }
}

fn format_real(x: &Q) -> Value {
    Value::String(format_rational(x))
}

fn parse_vector(v: &[Value], path: &str) -> Result<Vec<Q>> {
    v.iter()
        .enumerate()
        .map(|(i, x)| parse_real(x, &format!("{path}[{i}]")))
        .collect()
}

fn parse_matrix(rows: &[Vec<Value>], path: &str) -> Result<Mat<Cq>> {
    let cols = rows.first().map_or(0, Vec::len);
    let mut data = Vec::with_capacity(rows.len());
    for (r, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::parse(
                format!("{path}[{r}]"),
                format!("row has {} entries, the first row has {cols}", row.len()),
            ));
        }
        data.push(
            row.iter()
                .enumerate()
                .map(|(c, x)| parse_scalar(x, &format!("{path}[{r}][{c}]")))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Mat::from_rows(data).map_err(|e| Error::parse(path, e.to_string()))
}

fn parse_real_matrix(rows: &[Vec<Value>], path: &str, shape: (usize, usize)) -> Result<Mat<Q>> {
    let m = parse_matrix(rows, path)?;
    let m = if rows.is_empty() { Mat::zeros(0, 0) } else { m };
    if m.shape() != shape {
        return Err(Error::parse(
            path,
            format!("expected a {}x{} matrix, found {}x{}", shape.0, shape.1, m.rows(), m.cols()),
        ));
    }
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m[(r, c)].im.is_zero() {
                return Err(Error::parse(format!("{path}[{r}][{c}]"), "expected a real scalar"));
            }
        }
    }
    Ok(m.map(|z| z.re.clone()))
}

fn format_matrix(m: &Mat<Cq>) -> Vec<Vec<Value>> {
    m.to_rows().iter().map(|row| row.iter().map(format_scalar).collect()).collect()
}

fn format_real_matrix(m: &Mat<Q>) -> Vec<Vec<Value>> {
    m.to_rows().iter().map(|row| row.iter().map(format_real).collect()).collect()
}

// ---------------------------------------------------------------------------
// Algebras and actions

fn field_kind(s: &str, path: &str) -> Result<FieldKind> {
    match s {
        "real" => Ok(FieldKind::Real),
        "complex" => Ok(FieldKind::Complex),
        other => Err(Error::parse(path, format!("field must be \"real\" or \"complex\", found {other:?}"))),
    }
}

fn field_name(f: FieldKind) -> &'static str {
    match f {
        FieldKind::Real => "real",
        FieldKind::Complex => "complex",
    }
}

pub fn algebra_from_raw(raw: &RawAlgebra, path: &str) -> Result<LieAlgebra> {
    let field = field_kind(&raw.field, &format!("{path}.field"))?;
    if raw.basis.len() != raw.dim {
        return Err(Error::parse(
            format!("{path}.basis"),
            format!("{} labels for dimension {}", raw.basis.len(), raw.dim),
        ));
    }
    let mut entries = Vec::with_capacity(raw.brackets.len());
    for (n, (i, j, k, c)) in raw.brackets.iter().enumerate() {
        let c = parse_scalar(c, &format!("{path}.brackets[{n}][3]"))?;
        entries.push((*i, *j, *k, c));
    }
    LieAlgebra::new(raw.name.clone(), field, raw.dim, Some(raw.basis.clone()), entries)
        .map_err(|e| Error::parse(format!("{path}.brackets"), error_message(e)))
}

fn error_message(e: Error) -> String {
    match e {
        Error::Input(m) | Error::Dimension(m) => m,
        other => other.to_string(),
    }
}

pub fn algebra_to_raw(a: &LieAlgebra) -> RawAlgebra {
    RawAlgebra {
        name: a.name().to_string(),
        dim: a.dim(),
        field: field_name(a.field()).to_string(),
        basis: a.labels().to_vec(),
        brackets: a
            .constants()
            .iter()
            .map(|sc| (sc.i, sc.j, sc.k, format_scalar(&sc.c)))
            .collect(),
    }
}

fn action_from_raw(
    raw: &[Vec<Vec<Value>>],
    source: &LieAlgebra,
    target: &LieAlgebra,
    path: &str,
) -> Result<DerivationAction> {
    if raw.len() != source.dim() {
        return Err(Error::parse(
            path,
            format!("{} matrices for the {}-dimensional {}", raw.len(), source.dim(), source.name()),
        ));
    }
    let d = target.dim();
    let mats = raw
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let p = format!("{path}[{i}]");
            let m = parse_matrix(m, &p)?;
            if m.shape() != (d, d) {
                return Err(Error::parse(p, format!("expected a {d}x{d} matrix, found {}x{}", m.rows(), m.cols())));
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>>>()?;
    DerivationAction::unchecked(source.clone(), target.clone(), mats).map_err(|e| Error::parse(path, error_message(e)))
}

fn model_from_raw(raw: &RawModel, path: &str) -> Result<MatrixGroupModel> {
    let mats = |list: &[Vec<Vec<Value>>], p: &str| -> Result<Vec<Mat<Cq>>> {
        list.iter()
            .enumerate()
            .map(|(i, m)| {
                let p = format!("{p}[{i}]");
                let m = parse_matrix(m, &p)?;
                if m.shape() != (raw.size, raw.size) {
                    return Err(Error::parse(p, format!("expected a {0}x{0} matrix", raw.size)));
                }
                Ok(m)
            })
            .collect()
    };
    let basis = |field, list: &[Vec<Vec<Value>>], name: &str| -> Result<MatrixBasis> {
        let p = format!("{path}.{name}");
        MatrixBasis::new(field, mats(list, &p)?).map_err(|e| Error::parse(p, error_message(e)))
    };
    let n = basis(FieldKind::Complex, &raw.n, "n")?;
    let s = basis(FieldKind::Complex, &raw.s, "s")?;
    let ks = basis(FieldKind::Real, &raw.ks, "kS")?;
    MatrixGroupModel::new(n, s, Some(ks)).map_err(|e| Error::parse(path, error_message(e)))
}

fn model_to_raw(m: &MatrixGroupModel) -> RawModel {
    let list = |b: &MatrixBasis| b.matrices().iter().map(format_matrix).collect();
    RawModel {
        size: m.size(),
        n: list(m.n_basis()),
        s: list(m.s_basis()),
        ks: m.ks_basis().map(list).unwrap_or_default(),
    }
}

// ---------------------------------------------------------------------------
// Entries

fn beta_from_raw(raw: &RawBeta, ks: &LieAlgebra, k: &LieAlgebra, path: &str) -> Result<BetaSpec> {
    Ok(BetaSpec {
        id: raw.id.clone(),
        dbeta: parse_real_matrix(&raw.dbeta, &format!("{path}.dbeta"), (k.dim(), ks.dim()))?,
        zeta: zeta_from_raw(&raw.z_generator, ks, &format!("{path}.zGenerator"))?,
        w0: raw.z_weight_on_n,
    })
}

fn zeta_from_raw(raw: &[Value], ks: &LieAlgebra, path: &str) -> Result<Vec<Q>> {
    let z = parse_vector(raw, path)?;
    if z.len() != ks.dim() {
        return Err(Error::parse(path, format!("{} coordinates for the {}-dimensional k(S)", z.len(), ks.dim())));
    }
    Ok(z)
}

pub fn parse_entry(text: &str) -> Result<CatalogEntry> {
    let raw: RawEntry = serde_json::from_str(text).map_err(syntax)?;
    entry_from_raw(&raw)
}

pub fn entry_from_raw(raw: &RawEntry) -> Result<CatalogEntry> {
    let n = algebra_from_raw(&raw.n, "n")?;
    let s = algebra_from_raw(&raw.s, "s")?;
    let ks = algebra_from_raw(&raw.ks, "kS")?;
    if !raw.ks_connected {
        return Err(Error::Unsupported(
            "disconnected K(S): the invariant space is computed for the identity component only".into(),
        ));
    }
    if ks.field() != FieldKind::Real {
        return Err(Error::parse("kS.field", "k(S) must be a real algebra"));
    }
    let s_action = action_from_raw(&raw.s_action, &s, &n, "sAction")?;
    let ks_action = action_from_raw(&raw.ks_action, &ks, &n, "kSAction")?;
    let model = raw.model.as_ref().map(|m| model_from_raw(m, "model")).transpose()?;
    if let Some(m) = &model {
        if m.n_matrices().len() != n.dim() || m.s_matrices().len() != s.dim() || m.ks_matrices().len() != ks.dim() {
            return Err(Error::parse("model", "model generators do not match the algebra dimensions"));
        }
    }
    let zeta = zeta_from_raw(&raw.z_data.z_generator, &ks, "zData.zGenerator")?;
    let z_data = match (raw.z_data.status.as_deref(), raw.z_data.z_weight_on_n) {
        (Some(HYPOTHESIS_VIOLATED), None) => ZData::HypothesisViolated { zeta },
        (None, Some(w0)) => ZData::Character { zeta, w0 },
        (Some(other), _) if other != HYPOTHESIS_VIOLATED => {
            return Err(Error::parse(
                "zData.status",
                format!("unknown status {other:?}; the only status is {HYPOTHESIS_VIOLATED:?}"),
            ))
        }
        (Some(_), _) => {
            return Err(Error::parse("zData", "zWeightOnN given together with a violated hypothesis"))
        }
        (None, None) => return Err(Error::parse("zData", "missing zWeightOnN")),
    };
    let mut targets = Vec::new();
    for (t, rt) in raw.targets.iter().enumerate() {
        let path = format!("targets[{t}]");
        let algebra = algebra_from_raw(&rt.algebra, &format!("{path}.algebra"))?;
        if algebra.field() != FieldKind::Real {
            return Err(Error::parse(format!("{path}.algebra.field"), "the target must be a real compact algebra"));
        }
        let circle = rt
            .circle
            .as_ref()
            .map(|c| {
                let p = format!("{path}.circle");
                let v = parse_vector(c, &p)?;
                if v.len() != algebra.dim() {
                    return Err(Error::parse(p, format!("{} coordinates for dimension {}", v.len(), algebra.dim())));
                }
                Ok(v)
            })
            .transpose()?;
        let betas = rt
            .betas
            .iter()
            .enumerate()
            .map(|(b, rb)| beta_from_raw(rb, &ks, &algebra, &format!("{path}.betas[{b}]")))
            .collect::<Result<Vec<_>>>()?;
        targets.push(Target {
            id: rt.id.clone(),
            algebra,
            circle,
            betas,
        });
    }
    let mut entry = CatalogEntry {
        id: raw.id.clone(),
        n,
        s,
        ks,
        s_action,
        ks_action,
        model,
        z_data,
        targets,
        pairs: Vec::new(),
        expected: Expected {
            w0: raw.expected.w0,
            facts: raw
                .expected
                .facts
                .iter()
                .map(|f| ExpectedFact {
                    target: f.target.clone(),
                    beta: f.beta.clone(),
                    invariant_dim: f.invariant_dim,
                    c0_whole_space: f.c0_whole_space,
                })
                .collect(),
        },
    };
    for (i, f) in entry.expected.facts.iter().enumerate() {
        entry
            .beta(&f.target, &f.beta)
            .map_err(|e| Error::parse(format!("expected.facts[{i}]"), error_message(e)))?;
    }
    let mut pairs = Vec::new();
    for (i, rp) in raw.pairs.iter().enumerate() {
        let path = format!("pairs[{i}]");
        let (t, _) = entry
            .beta(&rp.target, &rp.beta)
            .map_err(|e| Error::parse(&path, error_message(e)))?;
        let omega = parse_real_matrix(&rp.omega, &format!("{path}.omega"), (t.algebra.dim(), 2 * entry.n.dim()))?;
        pairs.push(NamedPair {
            id: rp.id.clone(),
            target: rp.target.clone(),
            beta: rp.beta.clone(),
            omega,
            expected_c0: rp.expected_c0,
        });
    }
    entry.pairs = pairs;
    Ok(entry)
}

pub fn entry_to_raw(e: &CatalogEntry) -> RawEntry {
    let zeta: Vec<Value> = e.z_data.zeta().iter().map(format_real).collect();
    let z_data = match &e.z_data {
        ZData::Character { w0, .. } => RawZData {
            z_generator: zeta,
            z_weight_on_n: Some(*w0),
            status: None,
        },
        ZData::HypothesisViolated { .. } => RawZData {
            z_generator: zeta,
            z_weight_on_n: None,
            status: Some(HYPOTHESIS_VIOLATED.into()),
        },
    };
    RawEntry {
        id: e.id.clone(),
        n: algebra_to_raw(&e.n),
        s: algebra_to_raw(&e.s),
        ks: algebra_to_raw(&e.ks),
        ks_connected: true,
        s_action: e.s_action.matrices().iter().map(format_matrix).collect(),
        ks_action: e.ks_action.matrices().iter().map(format_matrix).collect(),
        model: e.model.as_ref().map(model_to_raw),
        z_data,
        targets: e
            .targets
            .iter()
            .map(|t| RawTarget {
                id: t.id.clone(),
                algebra: algebra_to_raw(&t.algebra),
                circle: t.circle.as_ref().map(|c| c.iter().map(format_real).collect()),
                betas: t
                    .betas
                    .iter()
                    .map(|b| RawBeta {
                        id: b.id.clone(),
                        dbeta: format_real_matrix(&b.dbeta),
                        z_generator: b.zeta.iter().map(format_real).collect(),
                        z_weight_on_n: b.w0,
                    })
                    .collect(),
            })
            .collect(),
        pairs: e
            .pairs
            .iter()
            .map(|p| RawPair {
                id: p.id.clone(),
                target: p.target.clone(),
                beta: p.beta.clone(),
                omega: format_real_matrix(&p.omega),
                expected_c0: p.expected_c0,
            })
            .collect(),
        expected: RawExpected {
            w0: e.expected.w0,
            facts: e
                .expected
                .facts
                .iter()
                .map(|f| RawFact {
                    target: f.target.clone(),
                    beta: f.beta.clone(),
                    invariant_dim: f.invariant_dim,
                    c0_whole_space: f.c0_whole_space,
                })
                .collect(),
        },
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn export_entry(e: &CatalogEntry) -> String {
    let mut s = serde_json::to_string_pretty(&entry_to_raw(e)).expect("entry serializes");
    s.push('\n');
    s
}

/// Reads a stand-alone pair against `entry`; the pair's `β` is added to its
/// target under the id `"<pair id>-beta"`.
pub fn parse_pair_file(text: &str, entry: &mut CatalogEntry) -> Result<NamedPair> {
    let raw: RawPairFile = serde_json::from_str(text).map_err(syntax)?;
    let id = raw.id.clone().unwrap_or_else(|| "pair".into());
    let dim_n = entry.n.dim();
    let ks = entry.ks.clone();
    let t = entry
        .targets
        .iter_mut()
        .find(|t| t.id == raw.target)
        .ok_or_else(|| Error::parse("target", format!("{}: no target {:?}", entry.id, raw.target)))?;
    let beta = BetaSpec {
        id: format!("{id}-beta"),
        dbeta: parse_real_matrix(&raw.beta.dbeta, "beta.dbeta", (t.algebra.dim(), ks.dim()))?,
        zeta: zeta_from_raw(&raw.beta.z_generator, &ks, "beta.zGenerator")?,
        w0: raw.beta.z_weight_on_n,
    };
    let omega = parse_real_matrix(&raw.omega, "omega", (t.algebra.dim(), 2 * dim_n))?;
    let pair = NamedPair {
        id,
        target: t.id.clone(),
        beta: beta.id.clone(),
        omega,
        expected_c0: None,
    };
    t.betas.retain(|b| b.id != beta.id);
    t.betas.push(beta);
    Ok(pair)
}

/// Reads a single algebra file `{ name, dim, field, basis, brackets }`.
pub fn parse_algebra(text: &str) -> Result<LieAlgebra> {
    let raw: RawAlgebra = serde_json::from_str(text).map_err(syntax)?;
    algebra_from_raw(&raw, "algebra")
}
