//! The validate, classify and verify runs behind the command-line tool.

use std::ops::RangeInclusive;

use serde::Serialize;
use serde_json::Value;

use crate::catalog::{CatalogEntry, ZData};
use crate::curvature::{c0_membership, c0_whole_span, curvature02_algebraic, C0Report};
use crate::error::{Error, Result};
use crate::lie::{complexify, FieldKind, RealForm};
use crate::linalg::Mat;
use crate::moduli::{
    action_operator, circle_characters, invariant_subspace, CandidatePair, HomomorphismDatum, WSpace,
};
use crate::numeric::{
    chart_grid, flatness_sweep, holomorphicity_verdict, invariance_probe, FlatnessReport, InvarianceReport,
    TrivializedConnection, DEFAULT_GRID_POINTS, DEFAULT_STEP, NUMERIC_TOL,
};
use crate::scalar::{format_rational, Cq, Mode, Tolerance, C64, DEFAULT_EPS, Q};
use crate::semidirect::{model_consistency, semidirect_sum, verify_horizontal_integrability};
use crate::weights::{dbar_vanishing_certificate, isotypical_decompose, DecompositionReport, VanishingCertificate};

/// Options shared by all runs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunConfig {
    pub mode: Mode,
    pub eps: f64,
    pub grid: usize,
    pub step: f64,
    pub seed: u64,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mode: Mode::Exact,
            eps: DEFAULT_EPS,
            grid: DEFAULT_GRID_POINTS,
            step: DEFAULT_STEP,
            seed: 0,
            samples: 64,
        }
    }
}

impl RunConfig {
    pub fn tolerance(&self) -> Tolerance {
        Tolerance::new(self.mode, self.eps)
    }

    fn echo(&self, numeric: bool) -> ConfigEcho {
        ConfigEcho {
            mode: self.mode,
            eps: self.eps,
            seed: self.seed,
            grid: numeric.then_some(self.grid),
            step: numeric.then_some(self.step),
            samples: numeric.then_some(self.samples),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub mode: Mode,
    pub eps: f64,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
}

/// Outcome of a run; the exit code of the command-line tool.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    ValidationFailure,
    Mismatch,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::ValidationFailure => 2,
            Status::Mismatch => 3,
        }
    }

    fn worst(self, other: Status) -> Status {
        match (self, other) {
            (Status::ValidationFailure, _) | (_, Status::ValidationFailure) => Status::ValidationFailure,
            _ => self.max(other),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: Option<f64>,
    pub message: Option<String>,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, residual: Option<f64>, message: Option<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            residual,
            message,
        }
    }

    fn from_result(name: impl Into<String>, r: Result<()>) -> Self {
        match r {
            Ok(()) => Check::new(name, true, None, None),
            Err(e) => Check::new(name, false, None, Some(e.to_string())),
        }
    }
}

// ---------------------------------------------------------------------------
// validate

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ValidateReport {
    pub command: &'static str,
    pub entry: String,
    pub config: ConfigEcho,
    pub checks: Vec<Check>,
    pub status: Status,
}

/// Checks on the algebras, actions, model and `Z` data; no `β`.
fn structural_checks(e: &CatalogEntry, cfg: &RunConfig) -> Vec<Check> {
    let tol = cfg.tolerance();
    let mut checks = Vec::new();
    let mut algebras = vec![("n", &e.n), ("s", &e.s), ("kS", &e.ks)];
    let target_names: Vec<String> = e.targets.iter().map(|t| format!("target:{}", t.id)).collect();
    for (t, name) in e.targets.iter().zip(&target_names) {
        algebras.push((name.as_str(), &t.algebra));
    }
    for (name, a) in algebras {
        let r = match cfg.mode {
            Mode::Exact => a.check_jacobi::<Cq>(0.0),
            Mode::Float => a.check_jacobi::<C64>(cfg.eps),
        };
        let msg = r.worst_triple.filter(|_| !r.passed).map(|t| format!("Jacobi fails on basis triple {t:?}"));
        checks.push(Check::new(format!("jacobi:{name}"), r.passed, Some(r.max_residual), msg));
    }
    for (name, action) in [("action:s", &e.s_action), ("action:kS", &e.ks_action)] {
        let r = action.check(tol);
        checks.push(Check::new(
            name,
            r.passed,
            Some(r.derivation_residual.max(r.homomorphism_residual)),
            r.failure,
        ));
    }
    match semidirect_sum(&e.n, &e.s, &e.s_action, tol) {
        Ok(ss) => {
            let r = verify_horizontal_integrability(&ss);
            let msg = r.worst_pair.filter(|_| !r.passed).map(|p| format!("worst basis pair {p:?}"));
            checks.push(Check::new(
                "semidirect:integrability",
                r.passed,
                Some(r.closure_residual.max(r.ideal_residual)),
                msg,
            ));
            if let Some(m) = &e.model {
                match model_consistency(&ss, m, cfg.samples.min(16), 1e-3) {
                    Ok(r) => {
                        let passed = r.max_residual < 1e-4;
                        checks.push(Check::new("model:brackets", passed, Some(r.max_residual), None));
                    }
                    Err(err) => checks.push(Check::new("model:brackets", false, None, Some(err.to_string()))),
                }
                match m.eta_residual(cfg.samples.min(16), cfg.seed) {
                    Ok(r) => checks.push(Check::new("model:eta", r < NUMERIC_TOL, Some(r), None)),
                    Err(err) => checks.push(Check::new("model:eta", false, None, Some(err.to_string()))),
                }
            }
        }
        Err(err) => checks.push(Check::new("semidirect:integrability", false, None, Some(err.to_string()))),
    }
    checks.push(z_data_check(e, tol));
    checks
}

fn z_data_check(e: &CatalogEntry, tol: Tolerance) -> Check {
    match &e.z_data {
        ZData::Character { zeta, w0 } => {
            Check::from_result("zData", crate::moduli::check_scalar_action(&e.ks_action, zeta, *w0, tol))
        }
        ZData::HypothesisViolated { zeta } => {
            // The declaration is consistent if ζ does not act by a scalar.
            let z: Vec<Cq> = zeta.iter().map(|x| Cq::new(x.clone(), num_traits::Zero::zero())).collect();
            let m = e.ks_action.apply(&z);
            let d = m.rows();
            let scalar = d > 0
                && (0..d).all(|r| (0..d).all(|c| if r == c { m[(r, c)] == m[(0, 0)] } else { num_traits::Zero::is_zero(&m[(r, c)]) }));
            if scalar {
                Check::new(
                    "zData",
                    false,
                    None,
                    Some("declared hypothesis-violated, but zeta acts on n by a scalar".into()),
                )
            } else {
                let msg = crate::moduli::check_scalar_action(&e.ks_action, zeta, 1, tol)
                    .err()
                    .map(|err| format!("declared hypothesis-violated ({err})"));
                Check::new("zData", true, None, msg)
            }
        }
    }
}

pub fn validate(e: &CatalogEntry, cfg: &RunConfig) -> ValidateReport {
    let tol = cfg.tolerance();
    let mut checks = structural_checks(e, cfg);
    for t in &e.targets {
        for b in &t.betas {
            checks.push(Check::from_result(
                format!("beta:{}/{}", t.id, b.id),
                e.datum(&t.id, &b.id, tol).map(|_| ()),
            ));
        }
    }
    for p in &e.pairs {
        let r = e
            .datum(&p.target, &p.beta, tol)
            .and_then(|beta| CandidatePair::new(beta, p.omega.clone(), &e.ks_action, tol))
            .map(|_| ());
        checks.push(Check::from_result(format!("pair:{}", p.id), r));
    }
    let status = if checks.iter().all(|c| c.passed) {
        Status::Pass
    } else {
        Status::ValidationFailure
    };
    ValidateReport {
        command: "validate",
        entry: e.id.clone(),
        config: cfg.echo(false),
        checks,
        status,
    }
}

// ---------------------------------------------------------------------------
// classify

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BetaResult {
    pub target: String,
    pub beta: String,
    pub character: Option<i64>,
    pub status: &'static str,
    pub message: Option<String>,
    pub invariant_dim: Option<usize>,
    /// Basis of `W^{K(S)}`, each element an `ω` matrix (`dim k × dim_R n`).
    pub basis: Vec<Value>,
    pub c0_basis: Vec<C0Report>,
    pub c0_zero: bool,
    pub c0_whole_space: Option<C0Report>,
    pub decomposition: Option<DecompositionReport>,
    pub certificate: Option<VanishingCertificate>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FactCheck {
    pub fact: String,
    pub expected: Value,
    pub found: Value,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyReport {
    pub command: &'static str,
    pub entry: String,
    pub config: ConfigEcho,
    pub w0: Option<i64>,
    pub beta_range: Option<[i64; 2]>,
    pub validation_failures: Vec<Check>,
    pub results: Vec<BetaResult>,
    pub expected: Vec<FactCheck>,
    pub status: Status,
}

fn omega_json(m: &Mat<Q>, mode: Mode) -> Value {
    let rows = m
        .to_rows()
        .into_iter()
        .map(|row| {
            Value::Array(
                row.iter()
                    .map(|x| match mode {
                        Mode::Exact => Value::String(format_rational(x)),
                        Mode::Float => serde_json::json!(num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)),
                    })
                    .collect(),
            )
        })
        .collect();
    Value::Array(rows)
}

/// The invariant space of `β` and everything the classification reports
/// about it.
pub struct Classified {
    pub beta: HomomorphismDatum,
    pub real_form: RealForm,
    pub wspace: WSpace,
    pub basis: Vec<Mat<Q>>,
}

pub fn invariant_basis(e: &CatalogEntry, beta: HomomorphismDatum, tol: Tolerance) -> Result<Classified> {
    let ops = action_operator(&beta, &e.ks_action)?;
    let wspace = WSpace::new(&e.n, beta.target());
    let basis = invariant_subspace(&ops, wspace.dim(), tol)
        .iter()
        .map(|v| wspace.from_coords(v))
        .collect::<Result<Vec<_>>>()?;
    let real_form = complexify(beta.target())?;
    Ok(Classified {
        beta,
        real_form,
        wspace,
        basis,
    })
}

fn classify_one(
    e: &CatalogEntry,
    target: &str,
    beta_id: &str,
    character: Option<i64>,
    beta: Result<HomomorphismDatum>,
    cfg: &RunConfig,
) -> Result<BetaResult> {
    let tol = cfg.tolerance();
    let mut out = BetaResult {
        target: target.to_string(),
        beta: beta_id.to_string(),
        character,
        status: "ok",
        message: None,
        invariant_dim: None,
        basis: Vec::new(),
        c0_basis: Vec::new(),
        c0_zero: true,
        c0_whole_space: None,
        decomposition: None,
        certificate: None,
    };
    let beta = match beta {
        Ok(b) => b,
        Err(Error::Hypothesis(m)) => {
            out.status = "hypothesis-violated";
            out.message = Some(m);
            return Ok(out);
        }
        Err(err) => {
            out.status = "invalid";
            out.message = Some(err.to_string());
            return Ok(out);
        }
    };
    let c = invariant_basis(e, beta, tol)?;
    out.invariant_dim = Some(c.basis.len());
    out.basis = c.basis.iter().map(|m| omega_json(m, cfg.mode)).collect();
    for m in &c.basis {
        let p = CandidatePair::unchecked(c.beta.clone(), m.clone());
        out.c0_basis.push(c0_membership(&p, &c.real_form, tol)?);
    }
    let zero = CandidatePair::unchecked(c.beta.clone(), Mat::zeros(c.wspace.dim_k(), c.wspace.dim_n_real()));
    out.c0_zero = c0_membership(&zero, &c.real_form, tol)?.c0;
    out.c0_whole_space = Some(c0_whole_span(&c.basis, &c.real_form, tol)?);
    let dec = isotypical_decompose(&c.beta, &c.real_form, tol)?;
    out.decomposition = Some(dec.report(&c.beta)?);
    out.certificate = Some(dbar_vanishing_certificate(&dec, c.beta.w0(), e.n.dim())?);
    Ok(out)
}

pub fn classify(e: &CatalogEntry, cfg: &RunConfig, beta_range: Option<RangeInclusive<i64>>) -> Result<ClassifyReport> {
    let tol = cfg.tolerance();
    let failures: Vec<Check> = structural_checks(e, cfg).into_iter().filter(|c| !c.passed).collect();
    let mut report = ClassifyReport {
        command: "classify",
        entry: e.id.clone(),
        config: cfg.echo(false),
        w0: e.z_data.w0(),
        beta_range: beta_range.as_ref().map(|r| [*r.start(), *r.end()]),
        validation_failures: failures,
        results: Vec::new(),
        expected: Vec::new(),
        status: Status::Pass,
    };
    if !report.validation_failures.is_empty() {
        report.status = Status::ValidationFailure;
        return Ok(report);
    }
    match &beta_range {
        Some(range) => {
            let ZData::Character { zeta, w0 } = &e.z_data else {
                return Err(Error::Hypothesis(format!(
                    "{}: no character data, so no characters to enumerate",
                    e.id
                )));
            };
            let mut any = false;
            for t in e.targets.iter().filter(|t| t.circle.is_some()) {
                any = true;
                let circle = t.circle.as_ref().expect("filtered");
                for (c, datum) in circle_characters(&e.ks, &t.algebra, zeta, *w0, circle, range.clone())? {
                    let checked = datum.check_homomorphism(tol).and_then(|_| {
                        datum.check_central(tol)?;
                        datum.check_scalar_action(&e.ks_action, tol)?;
                        Ok(datum)
                    });
                    let id = format!("character:{c}");
                    report.results.push(classify_one(e, &t.id, &id, Some(c), checked, cfg)?);
                }
            }
            if !any {
                return Err(Error::input(format!("{}: no target declares a circle generator", e.id)));
            }
        }
        None => {
            for t in &e.targets {
                for b in &t.betas {
                    let datum = e.datum(&t.id, &b.id, tol);
                    report.results.push(classify_one(e, &t.id, &b.id, None, datum, cfg)?);
                }
            }
        }
    }
    let mut status = if report.results.iter().any(|r| r.status != "ok") {
        Status::ValidationFailure
    } else {
        Status::Pass
    };
    if beta_range.is_none() {
        report.expected = expected_checks(e, &report.results);
        if report.expected.iter().any(|f| !f.matches) {
            status = status.worst(Status::Mismatch);
        }
    }
    report.status = status;
    Ok(report)
}

fn expected_checks(e: &CatalogEntry, results: &[BetaResult]) -> Vec<FactCheck> {
    let mut out = Vec::new();
    if let Some(w0) = e.expected.w0 {
        out.push(FactCheck {
            fact: "w0".into(),
            expected: w0.into(),
            found: e.z_data.w0().into(),
            matches: e.z_data.w0() == Some(w0),
        });
    }
    for f in &e.expected.facts {
        let r = results.iter().find(|r| r.target == f.target && r.beta == f.beta);
        let dim = r.and_then(|r| r.invariant_dim);
        out.push(FactCheck {
            fact: format!("invariantDim:{}/{}", f.target, f.beta),
            expected: f.invariant_dim.into(),
            found: dim.into(),
            matches: dim == Some(f.invariant_dim),
        });
        let c0 = r.and_then(|r| r.c0_whole_space.as_ref()).map(|c| c.c0);
        out.push(FactCheck {
            fact: format!("c0WholeSpace:{}/{}", f.target, f.beta),
            expected: f.c0_whole_space.into(),
            found: c0.into(),
            matches: c0 == Some(f.c0_whole_space),
        });
    }
    out
}

// ---------------------------------------------------------------------------
// verify

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PairVerdict {
    pub model: String,
    pub pair_id: String,
    #[serde(rename = "maxF02")]
    pub max_f02: Option<f64>,
    pub grid: usize,
    pub h: f64,
    pub verdict: &'static str,
    pub tautological_flatness: Option<f64>,
    pub c0: Option<bool>,
    pub algebraic_residual: Option<f64>,
    pub expected_c0: Option<bool>,
    pub invariance: Option<InvarianceReport>,
    pub agreement: bool,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub command: &'static str,
    pub entry: String,
    pub config: ConfigEcho,
    pub validation_failures: Vec<Check>,
    pub tautological_flatness: Option<FlatnessReport>,
    pub tautological_invariance: Option<InvarianceReport>,
    pub pairs: Vec<PairVerdict>,
    pub status: Status,
}

enum Job {
    Pair {
        id: String,
        pair: CandidatePair,
        real_form: RealForm,
        expected_c0: Option<bool>,
    },
    Gated {
        id: String,
        message: String,
    },
}

fn verify_jobs(e: &CatalogEntry, cfg: &RunConfig) -> Result<Vec<Job>> {
    let tol = cfg.tolerance();
    let mut jobs = Vec::new();
    for t in &e.targets {
        for b in &t.betas {
            let id = format!("{}/{}", t.id, b.id);
            let beta = match e.datum(&t.id, &b.id, tol) {
                Ok(beta) => beta,
                Err(Error::Hypothesis(m)) => {
                    jobs.push(Job::Gated { id, message: m });
                    continue;
                }
                Err(err) => return Err(err),
            };
            let c = invariant_basis(e, beta, tol)?;
            let zero = Mat::zeros(c.wspace.dim_k(), c.wspace.dim_n_real());
            let mut omegas: Vec<(String, Mat<Q>)> = c
                .basis
                .iter()
                .enumerate()
                .map(|(i, m)| (format!("{id}/basis-{i}"), m.clone()))
                .collect();
            if c.basis.len() >= 2 {
                let sum = c.basis.iter().skip(1).fold(c.basis[0].clone(), |acc, m| acc.add(m).expect("shape"));
                omegas.push((format!("{id}/sum"), sum));
            }
            if c.basis.is_empty() {
                omegas.push((format!("{id}/zero"), zero));
            }
            for (pid, omega) in omegas {
                jobs.push(Job::Pair {
                    id: pid,
                    pair: CandidatePair::unchecked(c.beta.clone(), omega),
                    real_form: c.real_form.clone(),
                    expected_c0: None,
                });
            }
        }
    }
    for p in &e.pairs {
        let beta = e.datum(&p.target, &p.beta, tol)?;
        let pair = CandidatePair::new(beta, p.omega.clone(), &e.ks_action, tol)?;
        let real_form = complexify(pair.beta().target())?;
        jobs.push(Job::Pair {
            id: p.id.clone(),
            pair,
            real_form,
            expected_c0: p.expected_c0,
        });
    }
    Ok(jobs)
}

pub fn verify(e: &CatalogEntry, cfg: &RunConfig, pair_filter: Option<&str>) -> Result<VerifyReport> {
    let tol = cfg.tolerance();
    let mut report = VerifyReport {
        command: "verify",
        entry: e.id.clone(),
        config: cfg.echo(true),
        validation_failures: structural_checks(e, cfg).into_iter().filter(|c| !c.passed).collect(),
        tautological_flatness: None,
        tautological_invariance: None,
        pairs: Vec::new(),
        status: Status::Pass,
    };
    let Some(model) = &e.model else {
        report.validation_failures.push(Check::new(
            "model",
            false,
            None,
            Some("verify needs a matrix model".into()),
        ));
        report.status = Status::ValidationFailure;
        return Ok(report);
    };
    if !report.validation_failures.is_empty() {
        report.status = Status::ValidationFailure;
        return Ok(report);
    }
    let mut jobs = verify_jobs(e, cfg)?;
    if let Some(id) = pair_filter {
        jobs.retain(|j| match j {
            Job::Pair { id: pid, .. } | Job::Gated { id: pid, .. } => pid == id,
        });
        if jobs.is_empty() {
            return Err(Error::input(format!("{}: no pair {id:?}", e.id)));
        }
    }

    let grid = chart_grid(2 * e.n.dim(), cfg.grid);
    let taut = TrivializedConnection::tautological(model, &e.n, &e.s)?;
    let flat = flatness_sweep(&taut, &grid, cfg.step)?;
    let inv = invariance_probe(&taut, model, cfg.samples, cfg.seed)?;
    let mut status = if flat.passed && inv.passed {
        Status::Pass
    } else {
        Status::Mismatch
    };
    let flat_residual = flat.max_residual;
    report.tautological_flatness = Some(flat);
    report.tautological_invariance = Some(inv);

    for job in jobs {
        let v = match job {
            Job::Gated { id, message } => PairVerdict {
                model: e.id.clone(),
                pair_id: id,
                max_f02: None,
                grid: grid.len(),
                h: cfg.step,
                verdict: "gated",
                tautological_flatness: Some(flat_residual),
                c0: None,
                algebraic_residual: None,
                expected_c0: None,
                invariance: None,
                agreement: true,
                message: Some(message),
            },
            Job::Pair {
                id,
                pair,
                real_form,
                expected_c0,
            } => {
                let c0 = c0_membership(&pair, &real_form, tol)?;
                let dec = isotypical_decompose(pair.beta(), &real_form, tol)?;
                let cert = dbar_vanishing_certificate(&dec, pair.beta().w0(), e.n.dim())?;
                let f02 = curvature02_algebraic::<C64>(&pair, &real_form, Some(&cert))?;
                let algebraic = f02.norm(&real_form.real().invariant_gram());
                let expected_ok = expected_c0.is_none_or(|x| x == c0.c0);
                if e.n.is_abelian() && e.n.field() == FieldKind::Complex {
                    let conn = TrivializedConnection::from_pair(&id, &pair, &e.n)?;
                    let hol = holomorphicity_verdict(&conn, &grid, cfg.step)?;
                    let pinv = invariance_probe(&conn, model, cfg.samples, cfg.seed)?;
                    let agreement = hol.holomorphic == c0.c0
                        && (hol.max_f02 - algebraic).abs() < NUMERIC_TOL
                        && pinv.passed
                        && expected_ok;
                    PairVerdict {
                        model: e.id.clone(),
                        pair_id: id,
                        max_f02: Some(hol.max_f02),
                        grid: grid.len(),
                        h: cfg.step,
                        verdict: if hol.holomorphic { "holomorphic" } else { "not-holomorphic" },
                        tautological_flatness: Some(flat_residual),
                        c0: Some(c0.c0),
                        algebraic_residual: Some(algebraic),
                        expected_c0,
                        invariance: Some(pinv),
                        agreement,
                        message: None,
                    }
                } else {
                    PairVerdict {
                        model: e.id.clone(),
                        pair_id: id,
                        max_f02: None,
                        grid: grid.len(),
                        h: cfg.step,
                        verdict: "algebraic-only",
                        tautological_flatness: Some(flat_residual),
                        c0: Some(c0.c0),
                        algebraic_residual: Some(algebraic),
                        expected_c0,
                        invariance: None,
                        agreement: expected_ok,
                        message: Some("n is not abelian; holomorphicity is decided algebraically".into()),
                    }
                }
            }
        };
        if !v.agreement {
            status = status.worst(Status::Mismatch);
        }
        report.pairs.push(v);
    }
    report.status = status;
    Ok(report)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
