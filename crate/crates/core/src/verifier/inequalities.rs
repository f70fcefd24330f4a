//! Matrix inequalities: the main positivity statement on sampled complete
//! sets, the Schwarz inequality and the `Y₁` square estimate.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::identities::NcTable;
use super::{Outcome, Scenario, Status};
use crate::error::{Error, Result};
use crate::matalg::{hermitian_spectrum, is_positive, CentralElement, OperatorMatrix};
use crate::multipliers::{GpMultiplierCtx, KernelTable};
use crate::wordcraft::{complete_closure, down_set, rearrangements, GPElement, StandardForm};

/// Smallest eigenvalue over all blocks, and the Hermitian deviation.
fn spectrum_min(m: &OperatorMatrix) -> (f64, f64) {
    (0..m.structure().num_blocks())
        .map(|k| {
            let (lo, _, dev) = hermitian_spectrum(&m.block_slice(k));
            (lo, dev)
        })
        .fold((f64::INFINITY, 0.0), |(a, b), (lo, dev)| (a.min(lo), b.max(dev)))
}

/// Complete sets of the scenario: the closure of the seed words, grown by
/// random ball elements while the size caps allow.
pub fn complete_sets(sc: &Scenario) -> Result<Vec<Vec<GPElement>>> {
    let p = &sc.params;
    let gp = sc.ctx.system().gp();
    let ball = gp.ball(p.ball_radius, p.budget)?;
    let cap = p.max_set_size.min(p.max_flat_dim / sc.ctx.system().structure().total_dim());
    let base = complete_closure(sc.seeds(), gp, p.budget)?;
    if base.len() > cap {
        return Err(Error::HypothesisViolated(format!(
            "closure of the seed words has {} elements, cap is {cap}",
            base.len()
        )));
    }
    let mut sets = Vec::with_capacity(p.complete_sets);
    for k in 0..p.complete_sets {
        let mut rng = sc.rng(&format!("complete_set/{k}"));
        let mut cur: BTreeSet<GPElement> = base.clone();
        let (mut accepted, mut tries) = (0, 0);
        while accepted < p.sample_size && tries < 8 * p.sample_size.max(1) {
            tries += 1;
            let cand = &ball[rng.random_range(0..ball.len())];
            if cur.contains(cand) {
                continue;
            }
            let mut next = cur.clone();
            next.extend(down_set(cand, gp, p.budget)?);
            if next.len() <= cap {
                cur = next;
                accepted += 1;
            }
        }
        sets.push(cur.into_iter().collect());
    }
    Ok(sets)
}

/// `[K(x_i, x_j)]` is positive on every sampled complete set.
pub fn check_main_theorem(sc: &Scenario) -> Result<Outcome> {
    if let Err(o) = sc.require_valid() {
        return Ok(o);
    }
    let tol = sc.params.psd_tol;
    let mut ok = true;
    let mut worst = f64::INFINITY;
    let mut rows = Vec::new();
    for set in complete_sets(sc)? {
        let m = KernelTable::new(set).matrix(&sc.ctx)?;
        let pos = is_positive(&m, tol)?;
        let herm_ok = pos.hermitian_deviation <= 1e-12 * (1.0 + pos.norm);
        ok &= pos.positive && herm_ok;
        worst = worst.min(pos.lambda_min);
        rows.push(json!({
            "size": m.size(),
            "flat_dim": pos.flat_dim,
            "lambda_min": pos.lambda_min,
            "norm": pos.norm,
            "hermitian_deviation": pos.hermitian_deviation,
        }));
    }
    Ok(Outcome::judged(ok, worst, tol, json!({"sets": rows})))
}

/// The Gram matrices over complete sets are the kernel matrices: entries
/// agree with a cache-free evaluation and the diagonal is `1`.
pub fn check_stinespring(sc: &Scenario) -> Result<Outcome> {
    if let Err(o) = sc.require_valid() {
        return Ok(o);
    }
    let ctx = &sc.ctx;
    let gp = ctx.system().gp();
    let mut max: f64 = 0.0;
    let mut diag: f64 = 0.0;
    let mut entries = 0;
    for set in complete_sets(sc)? {
        let n = set.len();
        let m = KernelTable::new(set.clone()).matrix(ctx)?;
        let devs: Vec<(f64, f64)> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                let got = m.central_entry(i, j).expect("central kernel");
                let xy = gp.mul(&gp.inv(&set[i]), &set[j]);
                let direct = ctx
                    .system()
                    .act_letters(set[j].letters())
                    .apply_central(&ctx.eval_letters(xy.letters()));
                let d = if i == j {
                    got.distance(&CentralElement::ones(got.len()))
                } else {
                    0.0
                };
                (got.distance(&direct), d)
            })
            .collect();
        entries += n * n;
        for (e, d) in devs {
            max = max.max(e);
            diag = diag.max(d);
        }
    }
    Ok(Outcome::residual(
        max.max(diag),
        sc.params.identity_tol,
        json!({"entries": entries, "entry_deviation": max, "diagonal_deviation": diag}),
    ))
}

/// `[K(c_ib_i, c_jb_j)] - [K(c_ib_i, c_i) K(c_i, c_j) K(c_j, c_jb_j)]`, or
/// `None` when `K(c_ib_i, c_j) = K(c_ib_i, c_i) K(c_i, c_j)` fails for some
/// pair.
pub fn schwarz_difference(
    ctx: &GpMultiplierCtx,
    pairs: &[(GPElement, GPElement)],
    tol: f64,
) -> Result<Option<OperatorMatrix>> {
    let gp = ctx.system().gp();
    let cb: Vec<GPElement> = pairs.iter().map(|(c, b)| gp.mul(c, b)).collect();
    let n = pairs.len();
    for i in 0..n {
        let ci = &pairs[i].0;
        for (cj, _) in pairs {
            let lhs = ctx.kernel_unchecked(&cb[i], cj);
            let rhs = &ctx.kernel_unchecked(&cb[i], ci) * &ctx.kernel_unchecked(ci, cj);
            if lhs.distance(&rhs) > tol {
                return Ok(None);
            }
        }
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (ci, cj) = (&pairs[i].0, &pairs[j].0);
            let lhs = ctx.kernel_unchecked(&cb[i], &cb[j]);
            let rhs = &(&ctx.kernel_unchecked(&cb[i], ci) * &ctx.kernel_unchecked(ci, cj))
                * &ctx.kernel_unchecked(cj, &cb[j]);
            entries.push(&lhs - &rhs);
        }
    }
    Ok(Some(OperatorMatrix::from_central(ctx.system().structure(), n, entries)?))
}

/// `[K(x_i, x_j)] - [K(x_i, y_ic_i) K(y_ic_i, y_jc_j) K(y_jc_j, x_j)]` for
/// `x_i = y_ic_ia_ib_i` in standard form.
pub fn y1_difference(ctx: &GpMultiplierCtx, family: &[(GPElement, StandardForm)]) -> Result<OperatorMatrix> {
    let gp = ctx.system().gp();
    let yc: Vec<GPElement> = family.iter().map(|(_, sf)| sf.yc(gp)).collect();
    let n = family.len();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let (xi, xj) = (&family[i].0, &family[j].0);
            let lhs = ctx.kernel_unchecked(xi, xj);
            let rhs = &(&ctx.kernel_unchecked(xi, &yc[i]) * &ctx.kernel_unchecked(&yc[i], &yc[j]))
                * &ctx.kernel_unchecked(&yc[j], xj);
            entries.push(&lhs - &rhs);
        }
    }
    OperatorMatrix::from_central(ctx.system().structure(), n, entries)
}

fn random_split<R: Rng>(x: &GPElement, sc: &Scenario, rng: &mut R) -> Result<(GPElement, GPElement)> {
    let gp = sc.ctx.system().gp();
    let reps = rearrangements(x, gp, sc.params.budget)?;
    let r = reps.choose(rng).expect("at least one arrangement");
    let k = rng.random_range(0..=r.len());
    Ok((gp.canonical(r[..k].iter().copied()), gp.canonical(r[k..].iter().copied())))
}

struct TupleStats {
    sampled: usize,
    non_vacuous: usize,
    worst: f64,
    worst_dev: f64,
    worst_case: Option<String>,
}

impl TupleStats {
    fn new() -> Self {
        TupleStats {
            sampled: 0,
            non_vacuous: 0,
            worst: f64::INFINITY,
            worst_dev: 0.0,
            worst_case: None,
        }
    }

    fn record(&mut self, m: &OperatorMatrix, case: impl FnOnce() -> String) {
        self.non_vacuous += 1;
        let (lo, dev) = spectrum_min(m);
        self.worst_dev = self.worst_dev.max(dev);
        if lo < self.worst {
            self.worst = lo;
            self.worst_case = Some(case());
        }
    }

    fn outcome(self, tol: f64) -> Outcome {
        if self.non_vacuous == 0 {
            return Outcome::skipped(format!("none of {} sampled tuples met the hypotheses", self.sampled));
        }
        let mut o = Outcome::judged(
            self.worst >= -tol,
            self.worst,
            tol,
            json!({
                "sampled": self.sampled,
                "non_vacuous": self.non_vacuous,
                "vacuous": self.sampled - self.non_vacuous,
                "hermitian_deviation": self.worst_dev,
                "worst": self.worst_case,
            }),
        );
        if o.status == Status::Fail {
            o.reason = Some("difference matrix has a negative eigenvalue".into());
        }
        o
    }
}

/// Schwarz inequality on tuples `(c_i, b_i)` drawn from the identity ball,
/// alternating between a shared `c` and independent splits.
pub fn check_schwarz(sc: &Scenario) -> Result<Outcome> {
    if let Err(o) = sc.require_pd() {
        return Ok(o);
    }
    let p = &sc.params;
    let gp = sc.ctx.system().gp();
    let ball = gp.ball(p.identity_radius, p.budget)?;
    let mut rng = sc.rng("schwarz");
    let mut stats = TupleStats::new();
    for t in 0..p.tuple_samples {
        let n = rng.random_range(1..=p.max_tuple.max(1));
        let mut pairs = Vec::with_capacity(n);
        if t % 2 == 0 {
            let (c, _) = random_split(ball.choose(&mut rng).unwrap(), sc, &mut rng)?;
            let cinv = gp.inv(&c);
            for _ in 0..n {
                for _ in 0..20 {
                    let x = ball.choose(&mut rng).unwrap();
                    let b = gp.mul(&cinv, x);
                    if x.len() == c.len() + b.len() {
                        pairs.push((c.clone(), b));
                        break;
                    }
                }
            }
        } else {
            for _ in 0..n {
                pairs.push(random_split(ball.choose(&mut rng).unwrap(), sc, &mut rng)?);
            }
        }
        if pairs.is_empty() {
            continue;
        }
        stats.sampled += 1;
        if let Some(m) = schwarz_difference(&sc.ctx, &pairs, p.identity_tol)? {
            stats.record(&m, || {
                pairs.iter().map(|(c, b)| format!("({c} | {b})")).collect::<Vec<_>>().join(" ")
            });
        }
    }
    Ok(stats.outcome(p.psd_tol))
}

/// The `Y₁` square estimate on families sharing the `y` vertex word,
/// mixed with unconstrained families that are counted as vacuous when
/// they do not share it.
pub fn check_y1_square(sc: &Scenario) -> Result<Outcome> {
    if let Err(o) = sc.require_pd() {
        return Ok(o);
    }
    if !sc.ctx.values_positive(1e-12) {
        return Ok(Outcome::skipped(
            "HypothesisViolated: multiplier values are not positive central elements",
        ));
    }
    let p = &sc.params;
    let table = NcTable::new(sc, p.identity_radius)?;
    let vertices = sc.ctx.system().gp().graph().vertices().to_vec();
    let mut by_vertex = Vec::new();
    for &v0 in &vertices {
        let forms: Vec<(GPElement, StandardForm)> = table
            .forms(sc, v0)?
            .into_iter()
            .map(|(i, sf)| (table.ball[i].clone(), sf))
            .collect();
        let mut buckets: BTreeMap<_, Vec<usize>> = BTreeMap::new();
        for (k, (_, sf)) in forms.iter().enumerate() {
            buckets.entry(sf.y.vertex_word()).or_default().push(k);
        }
        if !forms.is_empty() {
            by_vertex.push((v0, forms, buckets));
        }
    }
    let mut rng = sc.rng("y1_square");
    let mut stats = TupleStats::new();
    for _ in 0..p.tuple_samples {
        let Some((v0, forms, buckets)) = by_vertex.choose(&mut rng) else {
            break;
        };
        let n = rng.random_range(1..=p.max_tuple.max(1));
        let first = rng.random_range(0..forms.len());
        let bucket = &buckets[&forms[first].1.y.vertex_word()];
        let mut fam = vec![forms[first].clone()];
        for _ in 1..n {
            let k = if rng.random_bool(0.5) {
                *bucket.choose(&mut rng).unwrap()
            } else {
                rng.random_range(0..forms.len())
            };
            fam.push(forms[k].clone());
        }
        stats.sampled += 1;
        let w = fam[0].1.y.vertex_word();
        if fam.iter().any(|(_, sf)| sf.y.vertex_word() != w) {
            continue;
        }
        let m = y1_difference(&sc.ctx, &fam)?;
        stats.record(&m, || {
            format!(
                "v0 = {v0}: {}",
                fam.iter().map(|(x, _)| x.to_string()).collect::<Vec<_>>().join(", ")
            )
        });
    }
    Ok(stats.outcome(p.psd_tol))
}
