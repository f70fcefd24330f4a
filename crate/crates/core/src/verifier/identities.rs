//! Exact kernel identities enumerated over a full ball.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::json;

use super::{Outcome, Scenario};
use crate::error::Result;
use crate::matalg::CentralElement;
use crate::wordcraft::{
    down_set, nc_length_set, rearrangements, right_truncations, standard_form, GPElement, Letter, StandardForm,
};

fn identity_ball(sc: &Scenario) -> Result<Vec<GPElement>> {
    sc.ctx.system().gp().ball(sc.params.identity_radius, sc.params.budget)
}

fn worst_of(items: impl Iterator<Item = (f64, usize, Option<String>)>) -> (f64, usize, Option<String>) {
    items.fold((0.0, 0, None), |(m, n, w), (d, k, wd)| {
        if d > m {
            (d, n + k, wd)
        } else {
            (m, n + k, w)
        }
    })
}

/// `K(x,y) = K(y,x)*` for all pairs in the ball.
pub fn check_star_symmetry(sc: &Scenario) -> Result<Outcome> {
    if let Err(o) = sc.require_valid() {
        return Ok(o);
    }
    let ball = identity_ball(sc)?;
    let ctx = &sc.ctx;
    let per: Vec<(f64, usize, Option<String>)> = (0..ball.len())
        .into_par_iter()
        .map(|i| {
            let mut worst = (0.0, 0, None);
            for j in i..ball.len() {
                let d = ctx
                    .kernel_unchecked(&ball[i], &ball[j])
                    .distance(&ctx.kernel_unchecked(&ball[j], &ball[i]).conj());
                worst.1 += 1;
                if d > worst.0 {
                    worst.0 = d;
                    worst.2 = Some(format!("({}, {})", ball[i], ball[j]));
                }
            }
            worst
        })
        .collect();
    let (max, pairs, worst) = worst_of(per.into_iter());
    Ok(Outcome::residual(
        max,
        sc.params.identity_tol,
        json!({"ball": ball.len(), "pairs": pairs, "worst": worst}),
    ))
}

/// `h_{x₁⋯x_m} = α_{(x₂⋯x_m)⁻¹}(h_{x₁}) h_{x₂⋯x_m}` for every letter that
/// can be moved to the front.
pub fn check_factorization_left(sc: &Scenario) -> Result<Outcome> {
    if let Err(o) = sc.require_valid() {
        return Ok(o);
    }
    let ball = identity_ball(sc)?;
    let ctx = &sc.ctx;
    let gp = ctx.system().gp();
    let budget = sc.params.budget;
    let per: Vec<(f64, usize, Option<String>)> = ball
        .par_iter()
        .filter(|x| !x.is_identity())
        .map(|x| {
            let firsts: BTreeMap<Letter, GPElement> = rearrangements(x, gp, budget)?
                .into_iter()
                .map(|r| (r[0], gp.canonical(r[1..].iter().copied())))
                .collect();
            let lhs = ctx.cached_gp(x);
            let mut worst = (0.0, 0, None);
            for (first, rest) in &firsts {
                let rhs = &ctx.cached_act(rest).inverse().apply_central(ctx.letter_value(*first))
                    * &ctx.cached_gp(rest);
                let d = lhs.distance(&rhs);
                worst.1 += 1;
                if d > worst.0 {
                    worst = (d, worst.1, Some(format!("{x} split after {first:?}")));
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let (max, splits, worst) = worst_of(per.into_iter());
    Ok(Outcome::residual(
        max,
        sc.params.identity_tol,
        json!({"ball": ball.len(), "splits": splits, "worst": worst}),
    ))
}

/// `K(x,y) = K(x,x')K(x',y)` whenever `x⁻¹y` is reduced, for every right
/// truncation `x'` of `x`.
pub fn check_factorization_right(sc: &Scenario) -> Result<Outcome> {
    if let Err(o) = sc.require_valid() {
        return Ok(o);
    }
    let ball = identity_ball(sc)?;
    let ctx = &sc.ctx;
    let gp = ctx.system().gp();
    let per: Vec<(f64, usize, Option<String>)> = ball
        .par_iter()
        .filter(|x| !x.is_identity())
        .map(|x| {
            let xinv = gp.inv(x);
            let truncs = right_truncations(x, gp);
            let mut worst = (0.0, 0, None);
            for y in &ball {
                if gp.mul(&xinv, y).len() != x.len() + y.len() {
                    continue;
                }
                let lhs = ctx.kernel_unchecked(x, y);
                for xp in &truncs {
                    let rhs = &ctx.kernel_unchecked(x, xp) * &ctx.kernel_unchecked(xp, y);
                    let d = lhs.distance(&rhs);
                    worst.1 += 1;
                    if d > worst.0 {
                        worst = (d, worst.1, Some(format!("x = {x}, x' = {xp}, y = {y}")));
                    }
                }
            }
            worst
        })
        .collect();
    let (max, cases, worst) = worst_of(per.into_iter());
    Ok(Outcome::residual(
        max,
        sc.params.identity_tol,
        json!({"ball": ball.len(), "cases": cases, "worst": worst}),
    ))
}

/// Standard forms and `‖{x}^⪯‖_{v₀}` for every ball element.
pub(crate) struct NcTable {
    pub ball: Vec<GPElement>,
    /// `down[i]` is `{ball[i]}^⪯`.
    pub down: Vec<BTreeSet<GPElement>>,
}

impl NcTable {
    pub fn new(sc: &Scenario, radius: usize) -> Result<Self> {
        let gp = sc.ctx.system().gp();
        let ball = gp.ball(radius, sc.params.budget)?;
        let down = ball
            .par_iter()
            .map(|x| down_set(x, gp, sc.params.budget))
            .collect::<Result<_>>()?;
        Ok(NcTable { ball, down })
    }

    pub fn nc(&self, sc: &Scenario, v0: usize) -> Result<Vec<i64>> {
        let gp = sc.ctx.system().gp();
        self.down.iter().map(|d| nc_length_set(d, v0, gp)).collect()
    }

    /// Standard forms of the elements containing `v0`, by ball index.
    pub fn forms(&self, sc: &Scenario, v0: usize) -> Result<BTreeMap<usize, StandardForm>> {
        let gp = sc.ctx.system().gp();
        let found: Vec<Option<(usize, StandardForm)>> = self
            .ball
            .par_iter()
            .enumerate()
            .map(|(i, x)| {
                if x.contains_vertex(v0) {
                    Ok(Some((i, standard_form(x, v0, gp, sc.params.budget)?)))
                } else {
                    Ok(None)
                }
            })
            .collect::<Result<_>>()?;
        Ok(found.into_iter().flatten().collect())
    }
}

/// `K(ycab, z) = K(ycab, yc) K(yc, z)` for all `z` with smaller
/// non-commutative length, or equal length and a different `y` vertex word.
pub fn check_cross_terms(sc: &Scenario) -> Result<Outcome> {
    if let Err(o) = sc.require_valid() {
        return Ok(o);
    }
    let ctx = &sc.ctx;
    let gp = ctx.system().gp();
    let table = NcTable::new(sc, sc.params.identity_radius)?;
    let ball = &table.ball;
    let mut max: f64 = 0.0;
    let mut worst = None;
    let mut per_vertex = Vec::new();
    for &v0 in gp.graph().vertices() {
        let nc = table.nc(sc, v0)?;
        let forms = table.forms(sc, v0)?;
        let rows: Vec<(f64, usize, usize, Option<String>)> = forms
            .par_iter()
            .map(|(&i, sf)| {
                let x = &ball[i];
                let yc = sf.yc(gp);
                let k_x_yc = ctx.kernel_unchecked(x, &yc);
                let mut out = (0.0, 0, 0, None);
                for (j, z) in ball.iter().enumerate() {
                    let first = nc[j] < nc[i];
                    let second = nc[j] == nc[i]
                        && forms.get(&j).is_some_and(|sz| sz.y.vertex_word() != sf.y.vertex_word());
                    if !first && !second {
                        continue;
                    }
                    let lhs = ctx.kernel_unchecked(x, z);
                    let rhs: CentralElement = &k_x_yc * &ctx.kernel_unchecked(&yc, z);
                    let d = lhs.distance(&rhs);
                    if first {
                        out.1 += 1;
                    } else {
                        out.2 += 1;
                    }
                    if d > out.0 {
                        out.0 = d;
                        out.3 = Some(format!("v0 = {v0}, x = {x}, z = {z}"));
                    }
                }
                out
            })
            .collect();
        let (mut c1, mut c2) = (0, 0);
        for (d, a, b, w) in rows {
            c1 += a;
            c2 += b;
            if d > max {
                max = d;
                worst = w;
            }
        }
        per_vertex.push(json!({"v0": v0, "elements": forms.len(), "condition_1": c1, "condition_2": c2}));
    }
    Ok(Outcome::residual(
        max,
        sc.params.identity_tol,
        json!({"ball": ball.len(), "per_vertex": per_vertex, "worst": worst}),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphgroup::SimplicialGraph;
    use crate::verifier::tests_support::scalar_z2;
    use crate::verifier::{Status, VerifyParams};

    fn scenario(graph: SimplicialGraph, cs: &[f64]) -> Scenario {
        let params = VerifyParams {
            identity_radius: 3,
            ..VerifyParams::default()
        };
        Scenario::new("t", scalar_z2(graph, cs), params).unwrap()
    }

    #[test]
    fn identities_hold_on_path() {
        let sc = scenario(SimplicialGraph::path(3), &[0.5, 0.3, 0.8]);
        for f in [check_star_symmetry, check_factorization_left, check_factorization_right, check_cross_terms] {
            let o = f(&sc).unwrap();
            assert_eq!(o.status, Status::Pass, "{o:?}");
        }
    }

    #[test]
    fn cross_terms_see_both_conditions() {
        // condition (2) needs two vertices other than v0 that do not commute with it
        let sc = scenario(SimplicialGraph::edgeless(3), &[0.5, 0.3, 0.8]);
        let o = check_cross_terms(&sc).unwrap();
        assert_eq!(o.status, Status::Pass);
        let pv = o.detail["per_vertex"].as_array().unwrap();
        assert!(pv.iter().all(|v| v["condition_1"].as_u64().unwrap() > 0));
        assert!(pv.iter().all(|v| v["condition_2"].as_u64().unwrap() > 0));
        let path = scenario(SimplicialGraph::path(3), &[0.5, 0.3, 0.8]);
        let o = check_cross_terms(&path).unwrap();
        assert!(o.detail["per_vertex"].as_array().unwrap().iter().all(|v| v["condition_2"] == 0));
    }

    #[test]
    fn single_v0_letter_against_identity() {
        let sc = scenario(SimplicialGraph::edgeless(2), &[0.5, 0.3]);
        let gp = sc.ctx.system().gp();
        let a = gp.single(0, 1).unwrap();
        let sf = standard_form(&a, 0, gp, 1000).unwrap();
        assert!(sf.yc(gp).is_identity());
        let e = GPElement::identity();
        let lhs = sc.ctx.kernel_unchecked(&a, &e);
        let rhs = &sc.ctx.kernel_unchecked(&a, &e) * &sc.ctx.kernel_unchecked(&e, &e);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn invalid_setup_is_skipped() {
        let ctx = crate::multipliers::groupoid_from_space(&crate::multipliers::GroupoidData {
            graph: SimplicialGraph::complete(2),
            groups: vec![crate::graphgroup::FiniteGroup::cyclic(2); 2],
            points: 2,
            perms: vec![vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![0, 1]]],
            values: vec![
                vec![vec![1.0.into(), 1.0.into()], vec![0.5.into(), 0.5.into()]],
                vec![vec![1.0.into(), 1.0.into()], vec![0.9.into(), 0.1.into()]],
            ],
        })
        .unwrap();
        let sc = Scenario::new("bad", ctx, VerifyParams::default()).unwrap();
        assert_eq!(check_star_symmetry(&sc).unwrap().status, Status::Skipped);
    }
}
