//! Acceptance run: one PASS/FAIL line per criterion.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::Instant;

use common::*;
use eqbundle_core::catalog::{self, CatalogEntry};
use eqbundle_core::curvature::c0_membership;
use eqbundle_core::lie::complexify;
use eqbundle_core::linalg::Mat;
use eqbundle_core::moduli::{
    action_operator, equivalent_pairs, invariant_subspace, CandidatePair, SearchBudget, Verdict, WSpace,
};
use eqbundle_core::numeric::{
    chart_grid, flatness_sweep, holomorphicity_verdict, TrivializedConnection, DEFAULT_GRID_POINTS, DEFAULT_STEP,
    NUMERIC_TOL,
};
use eqbundle_core::scalar::{Cq, Tolerance, Q};
use eqbundle_core::weights::{dbar_vanishing_certificate, isotypical_decompose};
use eqbundle_core::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn run(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_eqbundle"))
        .args(args)
        .output()
        .expect("run eqbundle")
}

fn invariant_omegas(e: &CatalogEntry, target: &str, beta: &str) -> Result<(CandidatePair, Vec<Mat<Q>>), Error> {
    let t = e.target(target)?;
    let datum = e.datum(target, beta, Tolerance::exact())?;
    let ops = action_operator(&datum, &e.ks_action)?;
    let w = WSpace::new(&e.n, &t.algebra);
    let omegas = invariant_subspace(&ops, w.dim(), Tolerance::exact())
        .iter()
        .map(|v| w.from_coords(v))
        .collect::<Result<Vec<_>, _>>()?;
    let zero = CandidatePair::unchecked(datum, Mat::zeros(t.algebra.dim(), w.dim_n_real()));
    Ok((zero, omegas))
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    for e in catalog::catalog() {
        let ss = e.semidirect().map_err(|x| format!("{}: {x}", e.id))?;
        let mut algebras = vec![&e.n, &e.s, &e.ks, ss.algebra()];
        algebras.extend(e.targets.iter().map(|t| &t.algebra));
        for a in algebras {
            let r = a.check_jacobi::<Cq>(0.0);
            if !r.exact {
                return Err(format!("{} checked inexactly", a.name()));
            }
            worst = worst.max(r.max_residual);
            count += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let msg = format!("{count} algebras, max Jacobi residual {worst}, {secs:.3} s");
    if worst == 0.0 && secs < 1.0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion2() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for e in catalog::catalog() {
        let m = e.model.as_ref().ok_or(format!("{} has no model", e.id))?;
        let c = TrivializedConnection::tautological(m, &e.n, &e.s).map_err(|x| x.to_string())?;
        let grid = chart_grid(c.chart_dim(), DEFAULT_GRID_POINTS);
        let r = flatness_sweep(&c, &grid, DEFAULT_STEP).map_err(|x| x.to_string())?;
        let ratio = r.convergence_ratio.unwrap_or(f64::NAN);
        ok &= r.max_residual < NUMERIC_TOL && (3.5..=4.5).contains(&ratio);
        lines.push(format!("{} {:.1e} ({} pts) ratio {:.2}", e.id, r.max_residual, r.points, ratio));
    }
    let msg = lines.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion3() -> Outcome {
    let mut checked = Vec::new();
    let mut worst = 0.0f64;
    let mut sl2_su2_dim = None;
    for e in catalog::catalog() {
        if e.n.dim() > 2 {
            continue;
        }
        let Some(model) = e.model.as_ref() else { continue };
        for t in &e.targets {
            if t.algebra.dim() > 3 {
                continue;
            }
            for b in &t.betas {
                let (_, omegas) = invariant_omegas(&e, &t.id, &b.id).map_err(|x| x.to_string())?;
                let w = WSpace::new(&e.n, &t.algebra);
                let vectors: Vec<Vec<f64>> = omegas.iter().map(|o| q_to_dm(o).transpose().as_slice().to_vec()).collect();
                let exact = projector(&vectors, w.dim());
                let oracle = circle_average_projector(&t.algebra, &b.dbeta, &|j, s| model_n_adjoint(model, j, s));
                worst = worst.max((exact - oracle).abs().max());
                checked.push(format!("{}/{}/{} dim {}", e.id, t.id, b.id, omegas.len()));
                if e.id == "sl2-1" && t.id == "su2" {
                    sl2_su2_dim = Some(omegas.len());
                }
            }
        }
    }
    let msg = format!("{}; max projector gap {worst:.1e}", checked.join(", "));
    if !checked.is_empty() && worst < 1e-9 && sl2_su2_dim == Some(2) {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion4() -> Outcome {
    let mut cases = 0;
    let (mut trues, mut falses) = (0, 0);
    let mut worst = 0.0f64;
    for e in catalog::catalog() {
        if !e.is_n_abelian() || e.z_data.w0().is_none() {
            continue;
        }
        for t in &e.targets {
            let h = complexify(&t.algebra).map_err(|x| x.to_string())?;
            for b in &t.betas {
                let (zero, omegas) = invariant_omegas(&e, &t.id, &b.id).map_err(|x| x.to_string())?;
                let mut candidates: Vec<(String, Mat<Q>)> =
                    omegas.iter().enumerate().map(|(i, o)| (format!("basis-{i}"), o.clone())).collect();
                if omegas.len() >= 2 {
                    let sum = omegas.iter().skip(1).fold(omegas[0].clone(), |a, o| a.add(o).unwrap());
                    candidates.push(("sum".into(), sum));
                }
                if omegas.is_empty() {
                    candidates.push(("zero".into(), zero.omega().clone()));
                }
                for p in e.pairs.iter().filter(|p| p.target == t.id && p.beta == b.id) {
                    candidates.push((p.id.clone(), p.omega.clone()));
                }
                for (id, omega) in candidates {
                    let pair = CandidatePair::new(zero.beta().clone(), omega, &e.ks_action, Tolerance::exact())
                        .map_err(|x| format!("{}/{id}: {x}", e.id))?;
                    let alg = c0_membership(&pair, &h, Tolerance::exact()).map_err(|x| x.to_string())?;
                    let conn = TrivializedConnection::from_pair(&id, &pair, &e.n).map_err(|x| x.to_string())?;
                    let grid = chart_grid(conn.chart_dim(), DEFAULT_GRID_POINTS);
                    let num = holomorphicity_verdict(&conn, &grid, DEFAULT_STEP).map_err(|x| x.to_string())?;
                    let gap = (num.max_f02 - alg.residual).abs();
                    worst = worst.max(gap);
                    if num.holomorphic != alg.c0 || gap >= 1e-6 {
                        return Err(format!(
                            "{}/{}/{}/{id}: numeric {} ({:e}) vs algebraic {} ({:e})",
                            e.id, t.id, b.id, num.holomorphic, num.max_f02, alg.c0, alg.residual
                        ));
                    }
                    cases += 1;
                    if alg.c0 {
                        trues += 1;
                    } else {
                        falses += 1;
                    }
                }
            }
        }
    }
    let msg = format!("{cases} pairs agree ({trues} in C0, {falses} not), max |numeric - algebraic| {worst:.1e}");
    if trues > 0 && falses > 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion5() -> Outcome {
    let mut worst = 0.0f64;
    let mut certs = 0;
    for e in catalog::catalog() {
        let Some(w0) = e.z_data.w0() else { continue };
        for t in &e.targets {
            let h = complexify(&t.algebra).map_err(|x| x.to_string())?;
            for b in &t.betas {
                let datum = e.datum(&t.id, &b.id, Tolerance::exact()).map_err(|x| x.to_string())?;
                let dec = isotypical_decompose(&datum, &h, Tolerance::exact()).map_err(|x| x.to_string())?;
                worst = worst.max(dec.report(&datum).map_err(|x| x.to_string())?.projector_sum_residual);
                let cert = dbar_vanishing_certificate(&dec, w0, e.n.dim()).map_err(|x| x.to_string())?;
                if !cert.passed() {
                    return Err(format!("{}/{}: certificate {}", e.id, t.id, cert.verdict));
                }
                certs += 1;
            }
        }
    }
    let mut w0s = Vec::new();
    for (id, want) in [("sl2-1", 2), ("sl3-1", 3), ("sp4-siegel", 2)] {
        let e = catalog::entry(id).unwrap();
        let got = e.z_data.w0();
        let oracle = model_w0(&e);
        if got != Some(want) || oracle != want {
            return Err(format!("{id}: w0 {got:?}, model {oracle}, expected {want}"));
        }
        w0s.push(format!("{id}={want}"));
    }
    let msg = format!("projector-sum residual {worst:.1e}, {certs} certificates, w0 {}", w0s.join(" "));
    if worst < 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion6() -> Outcome {
    let e = catalog::entry("heisenberg-negative").unwrap();
    e.semidirect().map_err(|x| format!("semidirect construction failed: {x}"))?;
    let t = &e.targets[0];
    let rejection = match e.datum(&t.id, &t.betas[0].id, Tolerance::exact()) {
        Err(Error::Hypothesis(m)) => m,
        Err(x) => return Err(format!("rejected for the wrong reason: {x}")),
        Ok(_) => return Err("datum accepted".into()),
    };
    let o = run(&["validate", "catalog:heisenberg-negative"]);
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).map_err(|x| x.to_string())?;
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    let msg = format!("rejected: {rejection}; failing checks {failed:?}; exit {:?}", o.status.code());
    if o.status.code() == Some(2) && failed == ["beta:u1/unit"] {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion7() -> Outcome {
    let cases = [
        ("sl2-1", "su2"),
        ("sl3-1", "su3"),
        ("sp4-siegel", "usp4"),
        ("sl4-2", "su4"),
        ("weighted-plane", "su3"),
    ];
    let bases: Vec<(CandidatePair, Vec<Mat<Q>>)> = cases
        .iter()
        .map(|(id, t)| {
            let e = catalog::entry(id).unwrap();
            let b = e.target(t).unwrap().betas[0].id.clone();
            invariant_omegas(&e, t, &b).unwrap()
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut ok, mut undecided, mut wrong) = (0, 0, 0);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let (zero, omegas) = &bases[trial % bases.len()];
        let mut omega = zero.omega().clone();
        for o in omegas {
            let c = Q::from_integer(rng.random_range(-3i64..=3).into());
            omega = omega.add(&o.scale(&c)).unwrap();
        }
        let p1 = CandidatePair::unchecked(zero.beta().clone(), omega);
        let k = p1.beta().target().clone();
        let y: Vec<f64> = (0..k.dim()).map(|_| rng.random_range(-2.0..2.0)).collect();
        let p2 = conjugate_pair(&p1, &y);
        let budget = SearchBudget {
            seed: trial as u64,
            ..SearchBudget::default()
        };
        let r = equivalent_pairs(&p1, &p2, &k, budget).map_err(|x| x.to_string())?;
        match r.verdict {
            Verdict::Equivalent => {
                let ad = adjoint_of_factors(&k, r.witness.as_ref().unwrap());
                let gap = (ad * pair_matrix(&p1) - pair_matrix(&p2)).abs().max();
                worst = worst.max(gap);
                if gap < 1e-6 {
                    ok += 1;
                }
            }
            Verdict::Undecided => undecided += 1,
            Verdict::Inequivalent => wrong += 1,
        }
    }
    let msg = format!("{ok}/100 recovered, {undecided} undecided, {wrong} inequivalent, max witness gap {worst:.1e}");
    if ok == 100 && wrong == 0 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn criterion8() -> Outcome {
    let mut ids = Vec::new();
    for e in catalog::catalog() {
        let input = format!("catalog:{}", e.id);
        let a = run(&["classify", &input, "--seed", "11"]);
        let b = run(&["classify", &input, "--seed", "11"]);
        if a.stdout.is_empty() || a.stdout != b.stdout || a.status.code() != b.status.code() {
            return Err(format!("{}: reports differ", e.id));
        }
        ids.push(e.id);
    }
    Ok(format!("byte-identical classify reports for {}", ids.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("algebraic soundness", criterion1),
        ("tautological flatness", criterion2),
        ("invariant-space oracle", criterion3),
        ("holomorphicity agrees with C0", criterion4),
        ("weight machinery", criterion5),
        ("negative control", criterion6),
        ("equivalence round-trip", criterion7),
        ("determinism", criterion8),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(msg) => println!("PASS {} {name}: {msg}", i + 1),
            Err(msg) => {
                failures += 1;
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
