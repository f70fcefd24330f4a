//! Right-hand non-commutative length and the standard form `x = y·c·a·b`.

use std::collections::BTreeSet;

use serde::Serialize;

use super::{down_set, rearrangement_orders, GPElement, GpContext, Letter, VertexWord};
use crate::error::{Error, Result};
use crate::graphgroup::{SimplicialGraph, VertexId};

/// Non-commutative length of a reduced vertex sequence with respect to `v0`:
/// the number of letters not adjacent to `v0` left over once the last `v0`
/// letter is moved to the right end, or `-1` when it cannot be moved there.
pub fn nc_length_vertices(vs: &[VertexId], v0: VertexId, g: &SimplicialGraph) -> i64 {
    let Some(pos) = vs.iter().rposition(|&v| v == v0) else {
        return -1;
    };
    if vs[pos + 1..].iter().any(|&v| !g.adjacent(v, v0)) {
        return -1;
    }
    vs[..pos].iter().filter(|&&v| !g.adjacent(v, v0)).count() as i64
}

pub fn nc_length(x: &GPElement, v0: VertexId, ctx: &GpContext) -> i64 {
    let vs: Vec<VertexId> = x.letters().iter().map(|l| l.vertex).collect();
    nc_length_vertices(&vs, v0, ctx.graph())
}

impl VertexWord {
    pub fn nc_length(&self, v0: VertexId, g: &SimplicialGraph) -> i64 {
        nc_length_vertices(&self.0, v0, g)
    }
}

/// Maximum non-commutative length over a nonempty set.
pub fn nc_length_set<'a>(
    xs: impl IntoIterator<Item = &'a GPElement>,
    v0: VertexId,
    ctx: &GpContext,
) -> Result<i64> {
    xs.into_iter()
        .map(|x| nc_length(x, v0, ctx))
        .max()
        .ok_or(Error::EmptySet)
}

/// Decomposition `x = y·c·a·b` with `a` the distinguished letter at `v0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct StandardForm {
    pub y: GPElement,
    pub c: GPElement,
    pub a: Letter,
    pub b: GPElement,
}

impl StandardForm {
    /// `y·c`
    pub fn yc(&self, ctx: &GpContext) -> GPElement {
        ctx.mul(&self.y, &self.c)
    }

    /// `y·c·a·b`, recomposed.
    pub fn recompose(&self, ctx: &GpContext) -> GPElement {
        let yca = ctx.canonical(
            self.y
                .letters()
                .iter()
                .chain(self.c.letters())
                .copied()
                .chain(std::iter::once(self.a)),
        );
        ctx.mul(&yca, &self.b)
    }
}

/// Every minimizer of the standard-form search. A well-posed definition
/// yields exactly one.
pub fn standard_form_candidates(
    x: &GPElement,
    v0: VertexId,
    ctx: &GpContext,
    budget: usize,
) -> Result<Vec<StandardForm>> {
    if !x.contains_vertex(v0) {
        return Err(Error::NoV0Letter(v0));
    }
    let target = nc_length_set(&down_set(x, ctx, budget)?, v0, ctx)?;
    let g = ctx.graph();
    let letters = x.letters();
    let orders = rearrangement_orders(letters, ctx, budget)?;

    // Split x = P·b with P ending in a v0 letter, |b| minimal.
    let mut best_b = usize::MAX;
    let mut splits: BTreeSet<(Vec<usize>, usize)> = BTreeSet::new();
    for order in &orders {
        for (i, &idx) in order.iter().enumerate() {
            if letters[idx].vertex != v0 {
                continue;
            }
            let prefix: Vec<VertexId> = order[..=i].iter().map(|&k| letters[k].vertex).collect();
            if nc_length_vertices(&prefix, v0, g) != target {
                continue;
            }
            let blen = order.len() - i - 1;
            if blen < best_b {
                best_b = blen;
                splits.clear();
            }
            if blen == best_b {
                let mut pre: Vec<usize> = order[..i].to_vec();
                pre.sort_unstable();
                splits.insert((pre, idx));
            }
        }
    }

    let mut out = BTreeSet::new();
    for (pre, a_idx) in splits {
        let in_p: BTreeSet<usize> = pre.iter().copied().chain([a_idx]).collect();
        let b = ctx.canonical(
            x.letters()
                .iter()
                .enumerate()
                .filter(|(k, _)| !in_p.contains(k))
                .map(|(_, l)| *l),
        );
        // keep the relative order of x so the prefix stays reduced
        let p_letters: Vec<Letter> = pre.iter().map(|&k| letters[k]).collect();
        // Split P\a = y·c with c commuting with a and |y| minimal.
        let p_orders = rearrangement_orders(&p_letters, ctx, budget)?;
        let mut best_y = usize::MAX;
        let mut ys = BTreeSet::new();
        for order in &p_orders {
            for k in 0..=order.len() {
                let c_ok = order[k..]
                    .iter()
                    .all(|&j| g.adjacent(p_letters[j].vertex, v0));
                if !c_ok {
                    continue;
                }
                let mut yv: Vec<VertexId> = order[..k].iter().map(|&j| p_letters[j].vertex).collect();
                yv.push(v0);
                if nc_length_vertices(&yv, v0, g) != target {
                    continue;
                }
                if k < best_y {
                    best_y = k;
                    ys.clear();
                }
                if k == best_y {
                    let y = ctx.canonical(order[..k].iter().map(|&j| p_letters[j]));
                    let c = ctx.canonical(order[k..].iter().map(|&j| p_letters[j]));
                    ys.insert((y, c));
                }
            }
        }
        for (y, c) in ys {
            out.insert(StandardForm {
                y,
                c,
                a: letters[a_idx],
                b: b.clone(),
            });
        }
    }
    Ok(out.into_iter().collect())
}

/// Standard form of `x` with respect to `v0`, found by exhaustive search.
pub fn standard_form(
    x: &GPElement,
    v0: VertexId,
    ctx: &GpContext,
    budget: usize,
) -> Result<StandardForm> {
    let mut cands = standard_form_candidates(x, v0, ctx, budget)?;
    match cands.len() {
        1 => Ok(cands.pop().unwrap()),
        n => Err(Error::HypothesisViolated(format!(
            "standard form of {x} at vertex {v0} has {n} minimizers"
        ))),
    }
}
