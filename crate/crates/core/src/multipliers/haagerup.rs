use rayon::prelude::*;
use serde::Serialize;

use super::{GpMultiplierCtx, STRUCTURAL_TOL};
use crate::error::{Error, Result};
use crate::wordcraft::GPElement;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HaagerupReport {
    pub k: usize,
    pub radius: usize,
    pub epsilon: f64,
    pub f_size: usize,
    pub ball_size: usize,
    pub off_f_count: usize,
    pub max_off_f_norm: f64,
    pub worst: Option<GPElement>,
    /// `max_off_f_norm < epsilon`. Only the radius-`L` ball is examined.
    pub passed: bool,
}

/// Checks `‖(★h)_s‖ < ε` on the radius-`L` ball outside
/// `F = {s₁⋯s_m : m ≤ K, s_j ∈ F_{v_j}} ∪ {e}`. `finite_sets[i]` belongs to
/// the `i`-th vertex in sorted order.
pub fn haagerup_witness_ball(
    ctx: &GpMultiplierCtx,
    finite_sets: &[Vec<usize>],
    k: usize,
    radius: usize,
    epsilon: f64,
    budget: usize,
) -> Result<HaagerupReport> {
    ctx.require_valid()?;
    let gp = ctx.system().gp();
    if finite_sets.len() != gp.groups().len() {
        return Err(Error::ContextMismatch(format!(
            "{} finite sets for {} vertices",
            finite_sets.len(),
            gp.groups().len()
        )));
    }
    for (h, &v) in ctx.multipliers().iter().zip(gp.graph().vertices()) {
        if !h.is_unital(STRUCTURAL_TOL) {
            return Err(Error::HypothesisViolated(format!("multiplier at vertex {v} is not unital")));
        }
        let n = h.off_identity_norm();
        if n > 0.5 + STRUCTURAL_TOL {
            return Err(Error::HypothesisViolated(format!(
                "multiplier at vertex {v} has norm {n} > 1/2 off the identity"
            )));
        }
    }
    if 0.5f64.powi(k as i32) > epsilon {
        return Err(Error::HypothesisViolated(format!("2^-{k} exceeds epsilon = {epsilon}")));
    }
    if radius <= k {
        return Err(Error::HypothesisViolated(format!("radius {radius} must exceed K = {k}")));
    }

    let in_f = |s: &GPElement| {
        s.len() <= k
            && s.letters().iter().all(|l| {
                let p = gp.graph().position(l.vertex).expect("vertex in context");
                finite_sets[p].contains(&l.elem)
            })
    };
    let ball = gp.ball(radius, budget)?;
    let f_size = ball.iter().filter(|s| in_f(s)).count();
    let off: Vec<&GPElement> = ball.iter().filter(|s| !in_f(s)).collect();
    let norms: Vec<f64> = off.par_iter().map(|s| ctx.cached_gp(s).norm()).collect();
    let mut max = 0.0;
    let mut worst = None;
    for (s, &n) in off.iter().zip(&norms) {
        if n > max {
            max = n;
            worst = Some((*s).clone());
        }
    }
    Ok(HaagerupReport {
        k,
        radius,
        epsilon,
        f_size,
        ball_size: ball.len(),
        off_f_count: off.len(),
        max_off_f_norm: max,
        worst,
        passed: max < epsilon,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{ActionSystem, ActionTable};
    use crate::graphgroup::{FiniteGroup, SimplicialGraph};
    use crate::matalg::{BlockStructure, C64};
    use crate::multipliers::Multiplier;
    use crate::wordcraft::{GpContext, DEFAULT_BUDGET};

    fn free_ctx(mult: impl Fn(FiniteGroup) -> Multiplier) -> GpMultiplierCtx {
        let s = BlockStructure::matrix(1).unwrap();
        let g = FiniteGroup::cyclic(2);
        let gp = GpContext::new(SimplicialGraph::edgeless(2), vec![g.clone(); 2]).unwrap();
        let t = ActionTable::trivial(g.clone(), s.clone());
        let sys = ActionSystem::new(gp, s, vec![t.clone(), t]).unwrap();
        GpMultiplierCtx::new(sys, vec![mult(g.clone()), mult(g)]).unwrap()
    }

    #[test]
    fn delta_multipliers_vanish_off_identity() {
        let ctx = free_ctx(|g| Multiplier::delta(g, 1));
        let r = haagerup_witness_ball(&ctx, &[vec![1], vec![1]], 2, 4, 0.25, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.max_off_f_norm, 0.0);
        assert!(r.passed);
    }

    #[test]
    fn geometric_free_case() {
        let ctx = free_ctx(|g| Multiplier::geometric(g, 1, C64::new(0.4, 0.0)));
        let r = haagerup_witness_ball(&ctx, &[vec![1], vec![1]], 3, 6, 0.125, DEFAULT_BUDGET).unwrap();
        assert!((r.max_off_f_norm - 0.4f64.powi(4)).abs() < 1e-15);
        assert_eq!(r.f_size, 7);
        assert_eq!(r.ball_size, 13);
    }

    #[test]
    fn f_always_contains_identity() {
        let ctx = free_ctx(|g| Multiplier::geometric(g, 1, C64::new(0.4, 0.0)));
        let r = haagerup_witness_ball(&ctx, &[vec![], vec![]], 1, 2, 0.5, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.f_size, 1);
        assert!((r.max_off_f_norm - 0.4).abs() < 1e-15);
    }

    #[test]
    fn hypotheses_are_enforced() {
        let ctx = free_ctx(|g| Multiplier::geometric(g, 1, C64::new(0.6, 0.0)));
        assert!(matches!(
            haagerup_witness_ball(&ctx, &[vec![1], vec![1]], 2, 4, 0.25, DEFAULT_BUDGET),
            Err(Error::HypothesisViolated(_))
        ));
        let ok = free_ctx(|g| Multiplier::geometric(g, 1, C64::new(0.5, 0.0)));
        assert!(haagerup_witness_ball(&ok, &[vec![1], vec![1]], 2, 4, 0.2, DEFAULT_BUDGET).is_err());
        assert!(haagerup_witness_ball(&ok, &[vec![1], vec![1]], 2, 2, 0.25, DEFAULT_BUDGET).is_err());
    }
}
