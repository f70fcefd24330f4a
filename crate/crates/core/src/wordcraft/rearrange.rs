//! Rearrangements, truncations, the truncation order and complete sets.

use std::collections::{BTreeSet, HashSet, VecDeque};

use super::{GPElement, GpContext, Letter};
use crate::error::{Error, Result};

/// Every ordering of `letters` reachable by swapping adjacent commuting
/// letters, as index permutations. Breadth-first, starting from the given
/// order.
pub fn rearrangement_orders(
    letters: &[Letter],
    ctx: &GpContext,
    budget: usize,
) -> Result<Vec<Vec<usize>>> {
    let start: Vec<usize> = (0..letters.len()).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(order) = queue.pop_front() {
        for i in 1..order.len() {
            let (a, b) = (letters[order[i - 1]], letters[order[i]]);
            if ctx.commute(a.vertex, b.vertex) {
                let mut next = order.clone();
                next.swap(i - 1, i);
                if seen.insert(next.clone()) {
                    if seen.len() > budget {
                        return Err(Error::BudgetExceeded(budget));
                    }
                    queue.push_back(next);
                }
            }
        }
        out.push(order);
    }
    Ok(out)
}

/// All reduced letter sequences equivalent to `x`.
pub fn rearrangements(x: &GPElement, ctx: &GpContext, budget: usize) -> Result<Vec<Vec<Letter>>> {
    Ok(rearrangement_orders(x.letters(), ctx, budget)?
        .into_iter()
        .map(|o| o.into_iter().map(|i| x.letters()[i]).collect())
        .collect())
}

fn drop_letter(x: &GPElement, i: usize, ctx: &GpContext) -> GPElement {
    let mut rest = x.letters().to_vec();
    rest.remove(i);
    GPElement::from_canonical(ctx.lex_normal(rest))
}

/// Elements obtained by deleting a letter that some rearrangement puts first.
pub fn left_truncations(x: &GPElement, ctx: &GpContext) -> Vec<GPElement> {
    let ls = x.letters();
    let mut out = BTreeSet::new();
    for i in 0..ls.len() {
        if ls[..i].iter().all(|p| ctx.commute(p.vertex, ls[i].vertex)) {
            out.insert(drop_letter(x, i, ctx));
        }
    }
    out.into_iter().collect()
}

/// Elements obtained by deleting a letter that some rearrangement puts last.
pub fn right_truncations(x: &GPElement, ctx: &GpContext) -> Vec<GPElement> {
    let ls = x.letters();
    let mut out = BTreeSet::new();
    for i in 0..ls.len() {
        if ls[i + 1..].iter().all(|p| ctx.commute(p.vertex, ls[i].vertex)) {
            out.insert(drop_letter(x, i, ctx));
        }
    }
    out.into_iter().collect()
}

fn truncations(x: &GPElement, ctx: &GpContext) -> impl Iterator<Item = GPElement> {
    left_truncations(x, ctx)
        .into_iter()
        .chain(right_truncations(x, ctx))
}

/// `{x}^⪯`: everything `x` truncates to, including `x` and the identity.
pub fn down_set(x: &GPElement, ctx: &GpContext, budget: usize) -> Result<BTreeSet<GPElement>> {
    complete_closure(std::slice::from_ref(x), ctx, budget)
}

fn is_submultiset(small: &[Letter], big: &[Letter]) -> bool {
    let mut pool = big.to_vec();
    small.iter().all(|l| match pool.iter().position(|p| p == l) {
        Some(i) => {
            pool.swap_remove(i);
            true
        }
        None => false,
    })
}

/// `x ⪯ y`: decided by memoized descent from `y` toward `x`.
pub fn truncation_order_leq(
    x: &GPElement,
    y: &GPElement,
    ctx: &GpContext,
    budget: usize,
) -> Result<bool> {
    if x.is_identity() || x == y {
        return Ok(true);
    }
    if x.len() > y.len() || !is_submultiset(x.letters(), y.letters()) {
        return Ok(false);
    }
    let mut seen = HashSet::new();
    let mut stack = vec![y.clone()];
    seen.insert(y.clone());
    while let Some(z) = stack.pop() {
        for t in truncations(&z, ctx) {
            if t == *x {
                return Ok(true);
            }
            if t.len() > x.len() && is_submultiset(x.letters(), t.letters()) && seen.insert(t.clone())
            {
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded(budget));
                }
                stack.push(t);
            }
        }
    }
    Ok(false)
}

/// Smallest complete set containing `xs` and the identity.
pub fn complete_closure(
    xs: &[GPElement],
    ctx: &GpContext,
    budget: usize,
) -> Result<BTreeSet<GPElement>> {
    let mut out = BTreeSet::new();
    out.insert(GPElement::identity());
    let mut stack: Vec<GPElement> = Vec::new();
    for x in xs {
        if out.insert(x.clone()) {
            stack.push(x.clone());
        }
    }
    while let Some(z) = stack.pop() {
        for t in truncations(&z, ctx) {
            if out.insert(t.clone()) {
                stack.push(t);
            }
        }
        if out.len() > budget {
            return Err(Error::BudgetExceeded(budget));
        }
    }
    Ok(out)
}

/// Completeness predicate checked literally over all rearrangements.
pub fn is_complete(xs: &BTreeSet<GPElement>, ctx: &GpContext, budget: usize) -> Result<bool> {
    if !xs.contains(&GPElement::identity()) {
        return Ok(false);
    }
    for x in xs {
        for r in rearrangements(x, ctx, budget)? {
            let n = r.len();
            if n == 0 {
                continue;
            }
            let left = ctx.canonical(r[1..].iter().copied());
            let right = ctx.canonical(r[..n - 1].iter().copied());
            if !xs.contains(&left) || !xs.contains(&right) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
