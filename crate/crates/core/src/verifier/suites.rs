//! Per-vertex checks: unitalization, the Haagerup witness and the cocycle
//! suite.

use rand::Rng;
use serde_json::{json, Value};

use super::{Outcome, Scenario, Status};
use crate::cocycles::{
    cocycle_build, converges_monotonically, gns_build, negative_definite_check, schoenberg_linear,
    schoenberg_multiplier, spectral_gap, Cocycle,
};
use crate::dynamics::ActionTable;
use crate::error::{Error, Result};
use crate::graphgroup::VertexId;
use crate::matalg::{embed_central, CentralElement, C64};
use crate::multipliers::{
    haagerup_witness_ball, is_positive_definite, is_positive_definite_on, unitalize, Convention, Multiplier,
};

fn vertices(sc: &Scenario) -> impl Iterator<Item = (VertexId, &Multiplier, &ActionTable)> {
    let sys = sc.ctx.system();
    sys.gp()
        .graph()
        .vertices()
        .iter()
        .copied()
        .zip(sc.ctx.multipliers())
        .zip(sys.tables())
        .map(|((v, h), t)| (v, h, t))
}

/// Rescales each vertex multiplier so that `‖h_s‖ ≤ 1/2`, unitalizes it
/// and checks that positive definiteness survives.
pub fn check_unitalize(sc: &Scenario) -> Result<Outcome> {
    if let Err(o) = sc.require_pd() {
        return Ok(o);
    }
    let tol = sc.params.psd_tol;
    let mut worst = f64::INFINITY;
    let mut rows = Vec::new();
    for (v, h, t) in vertices(sc) {
        let he = h.value(h.group().identity()).norm();
        if he == 0.0 {
            continue;
        }
        let scaled = h.map(|_, c| c.scale(C64::new(0.5 / he, 0.0)));
        let u = unitalize(&scaled)?;
        let pos = is_positive_definite(&u, t, tol)?;
        worst = worst.min(pos.lambda_min);
        rows.push(json!({"vertex": v, "lambda_min": pos.lambda_min, "off_identity_norm": u.off_identity_norm()}));
    }
    Ok(Outcome::judged(worst >= -tol, worst, tol, json!({"vertices": rows})))
}

pub fn check_haagerup(sc: &Scenario) -> Result<Outcome> {
    if let Err(o) = sc.require_pd() {
        return Ok(o);
    }
    let Some(hp) = &sc.params.haagerup else {
        return Ok(Outcome::skipped("no witness parameters configured"));
    };
    match haagerup_witness_ball(&sc.ctx, &hp.finite_sets, hp.k, hp.radius, hp.epsilon, sc.params.budget) {
        Ok(r) => Ok(Outcome::judged(
            r.passed,
            r.max_off_f_norm,
            r.epsilon,
            json!({
                "k": r.k,
                "radius": r.radius,
                "f_size": r.f_size,
                "ball_size": r.ball_size,
                "off_f_count": r.off_f_count,
                "worst": r.worst.map(|w| w.to_string()),
            }),
        )),
        Err(e @ Error::HypothesisViolated(_)) => Ok(Outcome::skipped(format!("{}: {e}", e.code()))),
        Err(e) => Err(e),
    }
}

/// Cocycles of every vertex multiplier; requires unital positive definite
/// multipliers.
fn vertex_cocycles(sc: &Scenario) -> std::result::Result<Vec<(VertexId, Cocycle, &ActionTable)>, Outcome> {
    sc.require_pd()?;
    let mut out = Vec::new();
    for (v, h, t) in vertices(sc) {
        if !h.is_unital(1e-12) {
            return Err(Outcome::skipped(format!("NotUnital: multiplier at vertex {v}")));
        }
        let c = gns_build(h, t)
            .and_then(|m| cocycle_build(&m))
            .map_err(|e| Outcome::failed(format!("vertex {v}: {}: {e}", e.code())))?;
        out.push((v, c, t));
    }
    Ok(out)
}

macro_rules! cocycles_or_return {
    ($sc:expr) => {
        match vertex_cocycles($sc) {
            Ok(c) => c,
            Err(o) => return Ok(o),
        }
    };
}

/// `b(st) = b(s) + u_s b(t)` for all pairs in each vertex group.
pub fn check_cocycle_identity(sc: &Scenario) -> Result<Outcome> {
    let cs = cocycles_or_return!(sc);
    let rows: Vec<(VertexId, f64)> = cs.iter().map(|(v, c, _)| (*v, c.identity_residual())).collect();
    let max = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    Ok(Outcome::residual(
        max,
        sc.params.identity_tol,
        json!({"vertices": rows.iter().map(|(v, r)| json!({"vertex": v, "residual": r})).collect::<Vec<_>>()}),
    ))
}

/// `⟨b(s)|b(s)⟩ = 2 - h_s - h_s*` for the multiplier defining the module.
pub fn check_cocycle_norms(sc: &Scenario) -> Result<Outcome> {
    const TOL: f64 = 1e-12;
    let cs = cocycles_or_return!(sc);
    let mut max: f64 = 0.0;
    for (_, c, t) in &cs {
        let h = c.module().multiplier();
        for (s, q) in c.norms_sq().iter().enumerate() {
            let hs = h.value(s);
            let want = &CentralElement::constant(hs.len(), C64::new(2.0, 0.0)) - &(hs + &hs.conj());
            max = max.max(q.distance(&embed_central(&want, t.structure())?));
        }
    }
    Ok(Outcome::residual(max, TOL, json!({"vertices": cs.len()})))
}

/// `ψ(s) = ⟨b(s)|b(s)⟩` is α-negative definite.
pub fn check_negative_definite(sc: &Scenario) -> Result<Outcome> {
    let cs = cocycles_or_return!(sc);
    let tol = sc.params.psd_tol;
    let mut ok = true;
    let mut worst = f64::NEG_INFINITY;
    let mut rows = Vec::new();
    for (v, c, t) in &cs {
        let seed: u64 = sc.rng(&format!("negative_definite/{v}")).random();
        let r = negative_definite_check(&c.norms_sq(), t, sc.params.nd_trials, seed, tol)?;
        ok &= r.passed;
        worst = worst.max(r.worst_margin).max(r.sweep_margin);
        rows.push(json!({"vertex": v, "report": r}));
    }
    Ok(Outcome::judged(ok, worst, tol, json!({"vertices": rows})))
}

fn exponential_suite(
    sc: &Scenario,
    build: fn(&Cocycle, f64) -> Result<Multiplier>,
    monotone: bool,
) -> Result<Outcome> {
    let cs = cocycles_or_return!(sc);
    let tol = sc.params.psd_tol;
    let mut worst = f64::INFINITY;
    let mut ok = true;
    let mut rows: Vec<Value> = Vec::new();
    for (v, c, t) in &cs {
        let all: Vec<usize> = t.group().elements().collect();
        for &time in &sc.params.schoenberg_grid {
            let h = build(c, time)?;
            let std = is_positive_definite(&h, t, tol)?;
            let flip = is_positive_definite_on(&h, t, &all, Convention::Flipped, tol)?;
            ok &= std.lambda_min >= -tol && h.is_unital(1e-12);
            worst = worst.min(std.lambda_min);
            rows.push(json!({
                "vertex": v,
                "t": time,
                "lambda_min": std.lambda_min,
                "lambda_min_flipped": flip.lambda_min,
            }));
        }
        if monotone {
            let m = converges_monotonically(c, &sc.params.schoenberg_grid)?;
            ok &= m;
            rows.push(json!({"vertex": v, "monotone": m}));
        }
    }
    let mut o = Outcome::judged(ok, worst, tol, json!({"rows": rows}));
    if o.status == Status::Fail {
        o.reason = Some("exponential is not positive definite for some t".into());
    }
    Ok(o)
}

/// `s ↦ exp(-t⟨b(s)|b(s)⟩²)` is positive definite on the grid and tends to
/// 1 monotonically as `t` decreases.
pub fn check_schoenberg(sc: &Scenario) -> Result<Outcome> {
    exponential_suite(sc, schoenberg_multiplier, true)
}

/// `s ↦ exp(-t⟨b(s)|b(s)⟩)` on the same grid.
pub fn check_schoenberg_linear(sc: &Scenario) -> Result<Outcome> {
    exponential_suite(sc, schoenberg_linear, false)
}

/// `s ↦ min σ(⟨b(s)|b(s)⟩)` on each vertex group.
pub fn check_spectral_gap(sc: &Scenario) -> Result<Outcome> {
    let cs = cocycles_or_return!(sc);
    let mut rows = Vec::new();
    let mut min_off: f64 = f64::INFINITY;
    for (v, c, t) in &cs {
        let gaps = spectral_gap(&c.central_norms()?)?;
        let e = t.group().identity();
        for (s, g) in gaps.iter().enumerate() {
            if s != e {
                min_off = min_off.min(*g);
            }
        }
        rows.push(json!({"vertex": v, "gaps": gaps}));
    }
    Ok(Outcome {
        status: Status::Pass,
        metric: Some(if min_off.is_finite() { min_off } else { 0.0 }),
        tolerance: None,
        reason: None,
        detail: json!({"vertices": rows}),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgroup::SimplicialGraph;
    use crate::verifier::tests_support::{free_z2, scalar_z2};
    use crate::verifier::{HaagerupParams, VerifyParams};

    #[test]
    fn cocycle_suite_on_scalar_z2() {
        let sc = Scenario::new("t", scalar_z2(SimplicialGraph::path(2), &[0.3, 0.5]), VerifyParams::default())
            .unwrap();
        for f in [
            check_unitalize,
            check_cocycle_identity,
            check_cocycle_norms,
            check_negative_definite,
            check_schoenberg,
            check_schoenberg_linear,
            check_spectral_gap,
        ] {
            let o = f(&sc).unwrap();
            assert_eq!(o.status, Status::Pass, "{o:?}");
        }
        let g = check_spectral_gap(&sc).unwrap();
        assert!((g.metric.unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haagerup_on_free_pair() {
        let params = VerifyParams {
            haagerup: Some(HaagerupParams {
                k: 4,
                radius: 6,
                epsilon: 1.0 / 16.0,
                finite_sets: vec![vec![0, 1], vec![0, 1]],
            }),
            ..VerifyParams::default()
        };
        let sc = Scenario::new("a", free_z2(&[0.5, 0.5]), params).unwrap();
        let o = check_haagerup(&sc).unwrap();
        assert_eq!(o.status, Status::Pass);
        assert!(o.metric.unwrap() <= 0.5f64.powi(5) + 1e-12);
        let none = Scenario::new("a", free_z2(&[0.5, 0.5]), VerifyParams::default()).unwrap();
        assert_eq!(check_haagerup(&none).unwrap().status, Status::Skipped);
    }

    #[test]
    fn non_pd_vertex_skips_the_suite() {
        let sc = Scenario::new("bad", free_z2(&[1.2, 1.2]), VerifyParams::default()).unwrap();
        for f in [check_unitalize, check_cocycle_identity, check_schoenberg, check_haagerup] {
            assert_eq!(f(&sc).unwrap().status, Status::Skipped);
        }
    }
}
