//! Subcommands and the verification suites behind them.

use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{Cplx, Setup};
use super::report::{Check, WITNESS_MIN};
use crate::chaos::{chaos_orthogonality_report, ortho_polys, OrthoPolyBasis};
use crate::field::{
    cell_fields, moment_tensors, traciality_defect, vacuum_state, wick_rule_expand,
    wick_vs_normal_report, FieldConfig,
};
use crate::fock::{
    annihilate, check_ccr, create, negdef_form_continuum, negdef_max_eigenvalue,
    negdef_test_vector, neutral, random_symmetric_vector, restricted_creation_norm,
};
use crate::kernel::{validate_kernel, QKernel};
use crate::levy::{
    build_levy_space, cyclicity_rank, point_mass_residual, pyramidal_trials, verify_levy_cumulants,
    LevySpace,
};
use crate::partitions::{cumulants_from_moments, independence_test, moment_formula};
use crate::symmetrize::{
    check_exclusion, psi_j, symmetrize, symmetrize_recursive, symmetrize_slots,
};
use crate::tensor::{decode, FockTensor};
use crate::Error;

/// Tensor entries allowed per suite; degrees shrink on large grids to stay under it.
const ENTRY_BUDGET: usize = 20_000;
const CREATION_NORM_DEGREE: usize = 12;
const CREATION_NORM_TOL: f64 = 1e-8;

/// A failure that ends the run before any report is produced.
#[derive(Debug)]
pub enum CommandError {
    Config(String),
    Envelope(String),
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        match e {
            Error::EnvelopeExceeded(_) => CommandError::Envelope(e.to_string()),
            other => CommandError::Config(other.to_string()),
        }
    }
}

type Outcome = (Vec<Check>, Value);

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn c(z: Complex64) -> Cplx {
    z.into()
}

fn random_real(m: usize, rng: &mut ChaCha8Rng) -> FockTensor {
    let v: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    FockTensor::real_vector(&v)
}

fn random_complex(m: usize, n: usize, rng: &mut ChaCha8Rng) -> FockTensor {
    let mut t = FockTensor::zeros(m, n);
    for z in t.data_mut() {
        *z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
    }
    t
}

/// Largest `n ≤ cap` with `m^n ≤ budget`, at least 1.
fn budget_degree(m: usize, cap: usize, budget: usize) -> usize {
    let mut n = 1;
    while n < cap && m.pow((n + 1) as u32) <= budget {
        n += 1;
    }
    n
}

fn field(setup: &Setup) -> Result<FieldConfig, CommandError> {
    field_with_cutoff(setup, setup.config.cutoff)
}

fn field_with_cutoff(setup: &Setup, cutoff: usize) -> Result<FieldConfig, CommandError> {
    Ok(FieldConfig::new(
        setup.kernel.clone(),
        setup.config.lambda,
        cutoff,
    )?)
}

/// Cutoff for the Wick suites: the configured one, lowered on large grids but kept `≥ 4`.
fn wick_cutoff(setup: &Setup) -> usize {
    let m = setup.kernel.sites();
    budget_degree(m, setup.config.cutoff, 2_000)
        .max(4)
        .min(setup.config.cutoff)
}

fn levy_space(setup: &Setup) -> Result<LevySpace, CommandError> {
    let jumps = setup
        .jumps
        .clone()
        .ok_or_else(|| CommandError::Config("this command needs a `jumps` measure".into()))?;
    Ok(build_levy_space(Arc::new(setup.kernel.clone()), jumps)?)
}

/// Primitive root order of an anyonic `q`, if any, in `2..=6`.
fn root_order(k: &QKernel) -> Option<usize> {
    let q = k.anyonic_q()?;
    let is_one = |n: usize| (q.powu(n as u32) - 1.0).norm() <= 1e-9;
    (2..=6).find(|&n| is_one(n) && !(1..n).any(is_one))
}

/// The word named in the config, or `len` random real functions.
fn word(setup: &Setup, len: usize, rng: &mut ChaCha8Rng) -> Vec<FockTensor> {
    match (&setup.config.word, setup.functions.is_empty()) {
        (Some(w), _) => w.iter().map(|&i| setup.functions[i].clone()).collect(),
        (None, false) => setup.functions.iter().take(len).cloned().collect(),
        (None, true) => (0..len)
            .map(|_| random_real(setup.kernel.sites(), rng))
            .collect(),
    }
}

fn tol(setup: &Setup, name: &str) -> f64 {
    setup.config.tolerance(name)
}

// ---- suites ----

fn suite_kernel(setup: &Setup, _rng: &mut ChaCha8Rng) -> Outcome {
    let r = validate_kernel(&setup.kernel);
    let checks = vec![Check::check(
        "kernel_validity",
        r.max_defect(),
        tol(setup, "kernel_validity").min(1e-12),
    )];
    let data = json!({
        "hermitian_defect": r.hermitian_defect,
        "modulus_defect": r.modulus_defect,
        "diagonal_defect": r.diagonal_defect,
    });
    (checks, data)
}

fn suite_projection(setup: &Setup, rng: &mut ChaCha8Rng) -> Outcome {
    let k = &setup.kernel;
    let m = k.sites();
    let w = k.weights();
    let n_top = budget_degree(m, 4, ENTRY_BUDGET / 10);
    let (mut idem, mut adj, mut unit, mut yb, mut fact, mut route): (f64, f64, f64, f64, f64, f64) =
        (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for n in 2..=n_top.max(2) {
        let f = random_complex(m, n, rng);
        let g = random_complex(m, n, rng);
        let pf = symmetrize(k, &f);
        let pg = symmetrize(k, &g);
        idem = idem.max(symmetrize(k, &pf).max_abs_diff(&pf));
        adj = adj.max((pf.inner(&g, w) - f.inner(&pg, w)).norm());
        for j in 1..n {
            let (a, b) = (psi_j(k, j, &f).unwrap(), psi_j(k, j, &g).unwrap());
            unit = unit.max((a.inner(&b, w) - f.inner(&g, w)).norm());
        }
        for j in 1..n.saturating_sub(1) {
            let lhs = psi_j(k, j, &psi_j(k, j + 1, &psi_j(k, j, &f).unwrap()).unwrap()).unwrap();
            let rhs = psi_j(
                k,
                j + 1,
                &psi_j(k, j, &psi_j(k, j + 1, &f).unwrap()).unwrap(),
            )
            .unwrap();
            yb = yb.max(lhs.max_abs_diff(&rhs));
        }
        for a in 1..n {
            let split = symmetrize_slots(k, &symmetrize_slots(k, &f, 0, a), a, n - a);
            fact = fact.max(symmetrize(k, &split).max_abs_diff(&pf));
        }
        let h = random_complex(m, 1, rng);
        let tail = symmetrize(k, &random_complex(m, n - 1, rng));
        match symmetrize_recursive(k, &h, &tail) {
            Ok(r) => route = route.max(r.max_abs_diff(&symmetrize(k, &h.tensor(&tail)))),
            Err(_) => route = f64::INFINITY,
        }
    }
    let checks = vec![
        Check::check(
            "projection_idempotent",
            idem,
            tol(setup, "projection_idempotent"),
        ),
        Check::check(
            "projection_selfadjoint",
            adj,
            tol(setup, "projection_selfadjoint"),
        ),
        Check::check("psi_unitary", unit, tol(setup, "psi_unitary")),
        Check::check("yang_baxter", yb, tol(setup, "yang_baxter")),
        Check::check(
            "projection_factorization",
            fact,
            tol(setup, "projection_factorization"),
        ),
        Check::check("recursive_route", route, tol(setup, "recursive_route")),
    ];
    (checks, json!({ "max_degree": n_top.max(2) }))
}

fn suite_adjoint(setup: &Setup, rng: &mut ChaCha8Rng) -> Outcome {
    let k = Arc::new(setup.kernel.clone());
    let m = k.sites();
    let w = k.weights();
    let cutoff = budget_degree(m, setup.config.cutoff, ENTRY_BUDGET / 4);
    let h = random_complex(m, 1, rng);
    let real = random_real(m, rng);
    let u = random_symmetric_vector(&k, cutoff, cutoff, rng);
    let v = random_symmetric_vector(&k, cutoff, cutoff, rng);
    let (cr, an) = (create(&k, &h, cutoff), annihilate(&k, &h, cutoff));
    let pair = (cr.apply(&u).inner(&v, w) - u.inner(&an.apply(&v), w)).norm();
    let n0 = neutral(&k, &real, cutoff);
    let neut = (n0.apply(&u).inner(&v, w) - u.inner(&n0.apply(&v), w)).norm();
    let checks = vec![
        Check::check(
            "creation_annihilation_adjoint",
            pair,
            tol(setup, "creation_annihilation_adjoint"),
        ),
        Check::check(
            "neutral_selfadjoint",
            neut,
            tol(setup, "neutral_selfadjoint"),
        ),
    ];
    (checks, json!({ "cutoff": cutoff }))
}

fn suite_ccr(setup: &Setup, _rng: &mut ChaCha8Rng) -> Outcome {
    let k = Arc::new(setup.kernel.clone());
    let cutoff = budget_degree(k.sites(), setup.config.cutoff, ENTRY_BUDGET / 10).max(3);
    match check_ccr(&k, cutoff) {
        Ok(r) => (
            vec![
                Check::check("ccr_mixed", r.mixed, tol(setup, "ccr_mixed")),
                Check::check(
                    "ccr_annihilators",
                    r.annihilators,
                    tol(setup, "ccr_annihilators"),
                ),
                Check::check("ccr_creators", r.creators, tol(setup, "ccr_creators")),
            ],
            json!({ "guarded_degree": r.guarded_degree }),
        ),
        Err(e) => (vec![Check::error("ccr", &e)], Value::Null),
    }
}

fn exclusion_outcome(setup: &Setup, order: usize, rng: &mut ChaCha8Rng) -> Outcome {
    let k = &setup.kernel;
    let f = match setup.functions.first() {
        Some(f) => f.clone(),
        None => random_real(k.sites(), rng),
    };
    match check_exclusion(k, &f, order) {
        Ok(r) => (
            vec![
                Check::check(
                    "exclusion_vanishing",
                    r.vanishing_residual,
                    tol(setup, "exclusion_vanishing"),
                ),
                Check::check(
                    "exclusion_closed_form",
                    r.closed_form_residual,
                    tol(setup, "exclusion_closed_form"),
                ),
            ],
            json!({ "order": r.order, "tuples": r.tuples }),
        ),
        Err(e) => (vec![Check::error("exclusion", &e)], Value::Null),
    }
}

fn suite_exclusion(setup: &Setup, rng: &mut ChaCha8Rng) -> Outcome {
    let order = setup
        .config
        .exclusion_order
        .or_else(|| root_order(&setup.kernel));
    match order {
        Some(n) if n <= setup.kernel.sites() && n <= setup.config.cutoff => {
            exclusion_outcome(setup, n, rng)
        }
        _ => (
            Vec::new(),
            json!({ "skipped": "kernel is not an anyonic root of unity within the grid" }),
        ),
    }
}

fn wick_normal_check(setup: &Setup) -> Outcome {
    let cfg = match field_with_cutoff(setup, wick_cutoff(setup)) {
        Ok(c) => c,
        Err(e) => {
            return (
                vec![Check::check(
                    &format!("wick_vs_normal: {e:?}"),
                    f64::INFINITY,
                    0.0,
                )],
                Value::Null,
            )
        }
    };
    let n = 3.min(cfg.cutoff - 1);
    match wick_vs_normal_report(&cfg, n) {
        Ok(r) => {
            let check = if r.expect_equal {
                Check::check("wick_vs_normal", r.residual, tol(setup, "wick_vs_normal"))
            } else {
                Check::witness("wick_vs_normal", r.residual, WITNESS_MIN)
            };
            (
                vec![check],
                json!({ "degree": n, "worst": r.worst, "expect_equal": r.expect_equal }),
            )
        }
        Err(e) => (vec![Check::error("wick_vs_normal", &e)], Value::Null),
    }
}

fn suite_wick(setup: &Setup, rng: &mut ChaCha8Rng) -> Outcome {
    let (mut checks, normal) = wick_normal_check(setup);
    let cfg = match field_with_cutoff(setup, wick_cutoff(setup)) {
        Ok(c) => c,
        Err(_) => return (checks, normal),
    };
    let len = cfg.cutoff.min(4);
    let fs = word(setup, len, rng);
    let rule = match wick_rule_expand(&cfg, &fs) {
        Ok(r) => {
            checks.push(Check::check(
                "wick_rule",
                r.residual,
                tol(setup, "wick_rule"),
            ));
            json!({ "word_length": fs.len(), "marked_partitions": r.terms, "cutoff": cfg.cutoff })
        }
        Err(e) => {
            checks.push(Check::error("wick_rule", &e));
            Value::Null
        }
    };
    (checks, json!({ "normal_order": normal, "rule": rule }))
}

fn moment_outcome(setup: &Setup, fs: &[FockTensor]) -> Outcome {
    let cfg = match field(setup) {
        Ok(c) => c,
        Err(e) => {
            return (
                vec![Check::check(
                    &format!("moment_oracle: {e:?}"),
                    f64::INFINITY,
                    0.0,
                )],
                Value::Null,
            )
        }
    };
    let op = vacuum_state(fs, &cfg);
    let formula = moment_formula(&setup.kernel, setup.config.lambda, fs);
    match (op, formula) {
        (Ok(a), Ok(b)) => (
            vec![Check::check(
                "moment_oracle",
                (a - b).norm(),
                tol(setup, "moment_oracle"),
            )],
            json!({ "word_length": fs.len(), "operator": c(a), "formula": c(b) }),
        ),
        (Err(e), _) | (_, Err(e)) => (vec![Check::error("moment_oracle", &e)], Value::Null),
    }
}

fn suite_moments(setup: &Setup, rng: &mut ChaCha8Rng) -> Outcome {
    let mut checks = Vec::new();
    let mut rows = Vec::new();
    let top = setup.max_order.min(setup.config.cutoff);
    for n in 1..=top {
        let fs: Vec<_> = (0..n)
            .map(|_| random_real(setup.kernel.sites(), rng))
            .collect();
        let (c, d) = moment_outcome(setup, &fs);
        checks.extend(c);
        rows.push(d);
    }
    let worst = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    (
        vec![Check::check(
            "moment_oracle",
            worst,
            tol(setup, "moment_oracle"),
        )],
        json!(rows),
    )
}

fn suite_traciality(setup: &Setup, rng: &mut ChaCha8Rng) -> Outcome {
    let k = &setup.kernel;
    let lambda = setup.config.lambda;
    let tracial =
        (k.is_identically_one() && lambda != 0.0) || (k.is_real_valued() && lambda == 0.0);
    let cfg = match field(setup) {
        Ok(c) => c,
        Err(e) => {
            return (
                vec![Check::check(
                    &format!("traciality: {e:?}"),
                    f64::INFINITY,
                    0.0,
                )],
                Value::Null,
            )
        }
    };
    let m = k.sites();
    if tracial {
        let mut worst: f64 = 0.0;
        for total in 2..=setup.config.cutoff.min(6) {
            for split in 1..total {
                let w1: Vec<_> = (0..split).map(|_| random_real(m, rng)).collect();
                let w2: Vec<_> = (split..total).map(|_| random_real(m, rng)).collect();
                match traciality_defect(&cfg, &w1, &w2) {
                    Ok(d) => worst = worst.max(d),
                    Err(e) => return (vec![Check::error("traciality", &e)], Value::Null),
                }
            }
        }
        return (
            vec![Check::check("traciality", worst, tol(setup, "traciality"))],
            json!({ "tracial": true }),
        );
    }
    if m < 2 {
        return (
            Vec::new(),
            json!({ "tracial": false, "skipped": "a single cell has no witness pair" }),
        );
    }
    // alternating words χ_a χ_b χ_a … over the pair where Q differs most from its expected symmetry
    let len = if lambda != 0.0 { 5 } else { 4 };
    if len > setup.config.cutoff {
        return (
            Vec::new(),
            json!({ "tracial": false, "skipped": "cutoff below the witness word length" }),
        );
    }
    let mut best = (0.0, 0, 1);
    for a in 0..m {
        for b in 0..m {
            if a != b {
                let score = if lambda != 0.0 {
                    (k.q(b, a) - 1.0).norm()
                } else {
                    (k.q(b, a) - k.q(a, b)).norm()
                };
                if score > best.0 {
                    best = (score, a, b);
                }
            }
        }
    }
    let (_, a, b) = best;
    let word: Vec<_> = (0..len)
        .map(|i| FockTensor::unit(m, if i % 2 == 0 { a } else { b }))
        .collect();
    match traciality_defect(&cfg, &word[..len - 1], &word[len - 1..]) {
        Ok(d) => (
            vec![Check::witness("traciality", d, WITNESS_MIN)],
            json!({ "tracial": false, "cells": [a, b], "word_length": len }),
        ),
        Err(e) => (vec![Check::error("traciality", &e)], Value::Null),
    }
}

fn omega_cumulants(setup: &Setup) -> Result<(Vec<FockTensor>, Vec<f64>), Error> {
    let k = &setup.kernel;
    let m = k.sites();
    let cutoff = budget_degree(m, setup.config.cutoff, ENTRY_BUDGET);
    let n_max = setup.max_order.min(cutoff).min(5);
    let cfg = FieldConfig::new(k.clone(), setup.config.lambda, cutoff.max(2))?;
    let cs = cumulants_from_moments(k, &moment_tensors(&cell_fields(&cfg), n_max)?)?;
    let residuals = cs
        .iter()
        .enumerate()
        .map(|(d, cn)| {
            let n = d + 1;
            let mut expected = FockTensor::zeros(m, n);
            if n >= 2 {
                let scale = setup.config.lambda.powi(n as i32 - 2);
                for i in 0..m {
                    expected.set(&vec![i; n], Complex64::new(scale * k.weights()[i], 0.0));
                }
            }
            cn.max_abs_diff(&expected)
        })
        .collect();
    Ok((cs, residuals))
}

fn sparse(t: &FockTensor) -> Value {
    let mut idx = vec![0; t.degree()];
    let entries: Vec<Value> = t
        .data()
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > 1e-12)
        .map(|(flat, z)| {
            decode(t.m(), flat, &mut idx);
            json!({ "index": idx.clone(), "value": c(*z) })
        })
        .collect();
    json!(entries)
}

fn suite_cumulants(setup: &Setup, _rng: &mut ChaCha8Rng) -> Outcome {
    let (cs, residuals) = match omega_cumulants(setup) {
        Ok(x) => x,
        Err(e) => return (vec![Check::error("omega_cumulants", &e)], Value::Null),
    };
    let worst = residuals.iter().cloned().fold(0.0, f64::max);
    let mut checks = vec![Check::check(
        "omega_cumulants",
        worst,
        tol(setup, "omega_cumulants"),
    )];
    let m = setup.kernel.sites();
    if m >= 2 {
        let half = m / 2;
        let fs = [
            FockTensor::indicator(m, &(0..half).collect::<Vec<_>>()),
            FockTensor::indicator(m, &(half..m).collect::<Vec<_>>()),
        ];
        match independence_test(&cs, &fs, cs.len().min(5)) {
            Ok(r) => checks.push(Check::check(
                "independence",
                r.max_mixed,
                tol(setup, "independence"),
            )),
            Err(e) => checks.push(Check::error("independence", &e)),
        }
    }
    let per_degree: Vec<Value> = cs
        .iter()
        .zip(&residuals)
        .enumerate()
        .map(|(d, (t, r))| json!({ "degree": d + 1, "residual": r, "entries": sparse(t) }))
        .collect();
    (checks, json!({ "field": "omega", "cumulants": per_degree }))
}

fn suite_negdef(setup: &Setup, _rng: &mut ChaCha8Rng) -> Outcome {
    let k = &setup.kernel;
    let Some(q) = k.anyonic_q() else {
        return (Vec::new(), json!({ "skipped": "kernel is not anyonic" }));
    };
    let mut checks = Vec::new();
    let mut data = serde_json::Map::new();
    if k.sites() >= 2 {
        let b = k.weights()[1];
        let expected = 2.0 * b * b * (q.re + 1.0);
        match negdef_test_vector(k, 0, 1).and_then(|g| negdef_form_continuum(k, &g)) {
            Ok(v) => {
                checks.push(Check::check(
                    "negdef_value",
                    (v - expected).norm(),
                    tol(setup, "negdef_value"),
                ));
                data.insert("value".into(), json!(c(v)));
                data.insert("expected".into(), json!(expected));
            }
            Err(e) => checks.push(Check::error("negdef_value", &e)),
        }
        match negdef_max_eigenvalue(k, true) {
            Ok(top) => {
                let fermion = (q + 1.0).norm() <= 1e-12;
                checks.push(if fermion {
                    Check::check(
                        "negdef_nonpositive",
                        top.max(0.0),
                        tol(setup, "negdef_nonpositive"),
                    )
                } else {
                    Check::witness("negdef_nonpositive", top, WITNESS_MIN)
                });
                data.insert("max_eigenvalue".into(), json!(top));
            }
            Err(e) => checks.push(Check::error("negdef_nonpositive", &e)),
        }
    }
    if (q - 1.0).norm() > 1e-12 {
        match restricted_creation_norm(q, k.weights()[0], CREATION_NORM_DEGREE) {
            Ok(r) => {
                let t = tol(setup, "creation_norm").max(CREATION_NORM_TOL);
                checks.push(Check::check(
                    "creation_norm",
                    (r.closed_form - r.power_iteration).abs(),
                    t,
                ));
                checks.push(Check::check(
                    "creation_norm_bound",
                    (r.closed_form - r.bound).max(0.0),
                    t,
                ));
                data.insert(
                    "creation_norm".into(),
                    json!({
                        "closed_form": r.closed_form,
                        "power_iteration": r.power_iteration,
                        "bound": r.bound,
                        "argmax": r.argmax,
                    }),
                );
            }
            Err(e) => checks.push(Check::error("creation_norm", &e)),
        }
    }
    (checks, Value::Object(data))
}

fn levy_cutoff(space: &LevySpace, cap: usize) -> usize {
    budget_degree(space.product_sites(), cap.min(5), ENTRY_BUDGET).max(2)
}

fn levy_outcome(setup: &Setup, rng: &mut ChaCha8Rng, with_cyclicity: bool) -> Outcome {
    let space = match levy_space(setup) {
        Ok(s) => s,
        Err(_) => return (Vec::new(), json!({ "skipped": "no jump measure" })),
    };
    let mut checks = Vec::new();
    let mut data = serde_json::Map::new();
    let cutoff = levy_cutoff(&space, setup.config.cutoff);
    let n_max = setup.max_order.min(cutoff);
    match verify_levy_cumulants(&space, cutoff, n_max) {
        Ok(r) => {
            let worst = r.per_degree.iter().cloned().fold(0.0, f64::max);
            checks.push(Check::check(
                "levy_cumulants",
                worst,
                tol(setup, "levy_cumulants"),
            ));
            checks.push(Check::check(
                "levy_measure_moments",
                r.levy_residual,
                tol(setup, "levy_measure_moments"),
            ));
            let cumulants: Vec<Value> = r
                .cumulants
                .iter()
                .zip(&r.per_degree)
                .enumerate()
                .map(|(d, (t, res))| json!({ "degree": d + 1, "residual": res, "entries": sparse(t) }))
                .collect();
            let moments: Vec<Value> = r
                .levy_moments
                .iter()
                .map(|(n, nu, levy)| json!({ "n": n, "nu_moment": nu, "levy_moment": levy }))
                .collect();
            data.insert("cumulants".into(), json!(cumulants));
            data.insert("levy_moments".into(), json!(moments));
        }
        Err(e) => checks.push(Check::error("levy_cumulants", &e)),
    }
    if space.jumps().len() == 1 {
        match point_mass_residual(&space, cutoff) {
            Ok(r) => checks.push(Check::check(
                "levy_point_mass",
                r,
                tol(setup, "levy_point_mass"),
            )),
            Err(e) => checks.push(Check::error("levy_point_mass", &e)),
        }
    }
    let m = space.base_sites();
    if m >= 2 {
        let a: Vec<usize> = (0..m / 2).collect();
        let b: Vec<usize> = (m / 2..m).collect();
        let len = setup.config.cutoff.min(5);
        match pyramidal_trials(&space, &a, &b, 20, len, len, rng) {
            Ok(r) => checks.push(Check::check("pyramidal", r, tol(setup, "pyramidal"))),
            Err(e) => checks.push(Check::error("pyramidal", &e)),
        }
    }
    if with_cyclicity {
        let len = 2.min(cutoff);
        let search = if m.pow(len as u32 + 1) <= 64 {
            (len + 1).min(cutoff)
        } else {
            len
        };
        match cyclicity_rank(&space, len, search) {
            Ok(r) => {
                checks.push(Check::check(
                    "cyclicity_containment",
                    r.joint.abs_diff(r.target) as f64,
                    0.0,
                ));
                checks.push(Check::diagnostic(
                    "cyclicity_rank_gap",
                    r.target.abs_diff(r.achieved) as f64,
                ));
                data.insert(
                    "cyclicity".into(),
                    json!({
                        "word_length": len,
                        "achieved": r.achieved,
                        "target": r.target,
                        "joint": r.joint,
                        "covering_length": r.covering_len,
                        "searched_up_to": search,
                    }),
                );
            }
            Err(e) => checks.push(Check::error("cyclicity", &e)),
        }
    }
    data.insert("cutoff".into(), json!(cutoff));
    (checks, Value::Object(data))
}

fn suite_levy(setup: &Setup, rng: &mut ChaCha8Rng) -> Outcome {
    levy_outcome(setup, rng, true)
}

fn recurrence_table(b: &OrthoPolyBasis) -> Value {
    let rows: Vec<Value> = (0..b.len())
        .map(|k| json!({ "k": k, "a": b.a(k), "b": b.b(k), "c": b.norm(k), "coefficients": b.coefficients(k) }))
        .collect();
    json!(rows)
}

fn suite_chaos(setup: &Setup, rng: &mut ChaCha8Rng) -> Outcome {
    let space = match levy_space(setup) {
        Ok(s) => s,
        Err(_) => return (Vec::new(), json!({ "skipped": "no jump measure" })),
    };
    let basis = match ortho_polys(space.jumps()) {
        Ok(b) => b,
        Err(e) => return (vec![Check::error("chaos_basis", &e)], Value::Null),
    };
    let n_max = budget_degree(space.product_sites(), setup.config.cutoff.min(3), 2_000);
    let gram: Vec<Vec<f64>> = (0..basis.len())
        .map(|k| {
            (0..basis.len())
                .map(|l| basis.gram(k, l) / (basis.norm(k) * basis.norm(l)).sqrt())
                .collect()
        })
        .collect();
    let mut checks = vec![
        Check::check("favard", basis.favard_residual(), tol(setup, "favard")),
        Check::check(
            "polynomial_orthogonality",
            basis.orthogonality_residual(),
            tol(setup, "polynomial_orthogonality"),
        ),
    ];
    let mut data = serde_json::Map::new();
    data.insert("recurrence".into(), recurrence_table(&basis));
    data.insert("orthogonality_matrix".into(), json!(gram));
    match chaos_orthogonality_report(&space, &basis, n_max, n_max.max(1), rng) {
        Ok(r) => {
            checks.push(Check::check(
                "chaos_orthogonality",
                r.cross_inner,
                tol(setup, "chaos_orthogonality"),
            ));
            checks.push(Check::check(
                "chaos_norm_identity",
                r.norm_identity,
                tol(setup, "chaos_norm_identity"),
            ));
            let gap = r
                .dimensions
                .iter()
                .map(|d| d.chaos_sum.abs_diff(d.symmetric_rank))
                .max()
                .unwrap_or(0);
            checks.push(Check::check("chaos_dimensions", gap as f64, 0.0));
            let dims: Vec<Value> = r
                .dimensions
                .iter()
                .map(|d| json!({ "degree": d.degree, "chaos_sum": d.chaos_sum, "symmetric_rank": d.symmetric_rank }))
                .collect();
            data.insert("dimensions".into(), json!(dims));
            data.insert("max_degree".into(), json!(n_max));
        }
        Err(e) => checks.push(Check::error("chaos", &e)),
    }
    (checks, Value::Object(data))
}

type Suite = fn(&Setup, &mut ChaCha8Rng) -> Outcome;

const SUITES: [(&str, Suite); 12] = [
    ("kernel", suite_kernel),
    ("projection", suite_projection),
    ("adjoint", suite_adjoint),
    ("ccr", suite_ccr),
    ("exclusion", suite_exclusion),
    ("wick", suite_wick),
    ("moments", suite_moments),
    ("traciality", suite_traciality),
    ("cumulants", suite_cumulants),
    ("negdef", suite_negdef),
    ("levy", suite_levy),
    ("chaos", suite_chaos),
];

/// Runs every suite in parallel; output order follows `SUITES`.
pub fn cmd_verify(setup: &Setup, seed: u64) -> Result<Outcome, CommandError> {
    let results: Vec<(usize, Outcome)> = SUITES
        .par_iter()
        .enumerate()
        .map(|(i, (_, suite))| {
            let mut rng = rng_for(seed, i as u64);
            (i, suite(setup, &mut rng))
        })
        .collect();
    let mut checks = Vec::new();
    let mut data = serde_json::Map::new();
    for (i, (c, d)) in results {
        checks.extend(c);
        data.insert(SUITES[i].0.into(), d);
    }
    Ok((checks, Value::Object(data)))
}

pub fn cmd_moments(setup: &Setup, seed: u64) -> Result<Outcome, CommandError> {
    let mut rng = rng_for(seed, 0);
    let fs = word(setup, setup.config.cutoff.min(4), &mut rng);
    Ok(moment_outcome(setup, &fs))
}

pub fn cmd_cumulants(setup: &Setup, seed: u64) -> Result<Outcome, CommandError> {
    let mut rng = rng_for(seed, 0);
    if setup.jumps.is_some() {
        let (mut checks, data) = levy_outcome(setup, &mut rng, false);
        checks.retain(|c| c.name.starts_with("levy"));
        return Ok((checks, json!({ "field": "xi", "levy": data })));
    }
    Ok(suite_cumulants(setup, &mut rng))
}

pub fn cmd_wick(setup: &Setup, seed: u64) -> Result<Outcome, CommandError> {
    field(setup)?;
    let mut rng = rng_for(seed, 0);
    Ok(suite_wick(setup, &mut rng))
}

pub fn cmd_levy(setup: &Setup, seed: u64) -> Result<Outcome, CommandError> {
    levy_space(setup)?;
    let mut rng = rng_for(seed, 0);
    Ok(levy_outcome(setup, &mut rng, true))
}

pub fn cmd_chaos(setup: &Setup, seed: u64) -> Result<Outcome, CommandError> {
    levy_space(setup)?;
    let mut rng = rng_for(seed, 0);
    Ok(suite_chaos(setup, &mut rng))
}

pub fn cmd_exclusion(setup: &Setup, seed: u64) -> Result<Outcome, CommandError> {
    let order = setup
        .config
        .exclusion_order
        .or_else(|| root_order(&setup.kernel))
        .ok_or_else(|| {
            CommandError::Config("exclusion needs an anyonic kernel at a root of unity".into())
        })?;
    if order > setup.kernel.sites() {
        return Err(CommandError::Config(format!(
            "order {order} exceeds the {} sites",
            setup.kernel.sites()
        )));
    }
    let mut rng = rng_for(seed, 0);
    Ok(exclusion_outcome(setup, order, &mut rng))
}
