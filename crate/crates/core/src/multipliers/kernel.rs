//! The graph-product multiplier and the kernel `K(x,y) = α_y(h_{x⁻¹y})`.

use dashmap::DashMap;
use rayon::prelude::*;
use serde::Serialize;

use super::GpMultiplierCtx;
use crate::dynamics::{act_word, Automorphism};
use crate::error::Result;
use crate::matalg::{CentralElement, OperatorMatrix};
use crate::wordcraft::{rearrangements, GPElement, Letter};

pub const WELL_DEFINED_TOL: f64 = 1e-10;

impl GpMultiplierCtx {
    /// `α_{p₁}⁻¹(h_{s₁}) ⋯ α_{p_{n-1}}⁻¹(h_{s_{n-1}}) h_{s_n}` with
    /// `p_j = s_{j+1}⋯s_n`, for any letter sequence and without validity
    /// requirements.
    pub fn eval_letters(&self, letters: &[Letter]) -> CentralElement {
        let k = self.num_blocks();
        let Some((&last, rest)) = letters.split_last() else {
            return CentralElement::ones(k);
        };
        let sys = self.system();
        let mut out = self.letter_value(last).clone();
        let mut inv_p = Automorphism::identity(sys.structure());
        let mut next = last;
        for &l in rest.iter().rev() {
            let g = sys.gp().group_unchecked(next.vertex);
            let inv_letter = Letter { vertex: next.vertex, elem: g.inv(next.elem) };
            inv_p = inv_p.compose(sys.letter_auto(inv_letter));
            out = &out * &inv_p.apply_central(self.letter_value(l));
            next = l;
        }
        out
    }

    pub(crate) fn cached_gp(&self, s: &GPElement) -> CentralElement {
        if let Some(v) = self.gp_cache.get(s) {
            return v.clone();
        }
        let v = self.eval_letters(s.letters());
        self.gp_cache.insert(s.clone(), v.clone());
        v
    }

    pub(crate) fn cached_act(&self, s: &GPElement) -> Automorphism {
        if let Some(a) = self.act_cache.get(s) {
            return a.clone();
        }
        let a = self.system().act_letters(s.letters());
        self.act_cache.insert(s.clone(), a.clone());
        a
    }

    pub(crate) fn kernel_unchecked(&self, x: &GPElement, y: &GPElement) -> CentralElement {
        let gp = self.system().gp();
        let xy = gp.mul(&gp.inv(x), y);
        self.cached_act(y).apply_central(&self.cached_gp(&xy))
    }
}

/// `(★_Γ h_v)_s`.
pub fn gp_multiplier(s: &GPElement, ctx: &GpMultiplierCtx) -> Result<CentralElement> {
    ctx.require_valid()?;
    ctx.system().gp().check_element(s)?;
    Ok(ctx.cached_gp(s))
}

/// `K(x,y) = α_y(h_{x⁻¹y})`.
pub fn kernel(x: &GPElement, y: &GPElement, ctx: &GpMultiplierCtx) -> Result<CentralElement> {
    ctx.require_valid()?;
    let gp = ctx.system().gp();
    gp.check_element(x)?;
    let xy = gp.mul(&gp.inv(x), y);
    Ok(act_word(y, ctx.system())?.apply_central(&gp_multiplier(&xy, ctx)?))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WellDefinedness {
    pub ok: bool,
    pub elements: usize,
    pub representatives: usize,
    pub max_deviation: f64,
    pub worst: Option<GPElement>,
}

/// Evaluates the product formula along every rearrangement of every ball
/// element and reports the largest disagreement. Runs on invalid setups.
pub fn gp_well_defined(ctx: &GpMultiplierCtx, radius: usize, budget: usize) -> Result<WellDefinedness> {
    let gp = ctx.system().gp();
    let ball = gp.ball(radius, budget)?;
    let per: Vec<(f64, usize)> = ball
        .par_iter()
        .map(|x| {
            let reps = rearrangements(x, gp, budget)?;
            let base = ctx.eval_letters(x.letters());
            let dev = reps
                .iter()
                .map(|r| ctx.eval_letters(r).distance(&base))
                .fold(0.0, f64::max);
            Ok((dev, reps.len()))
        })
        .collect::<Result<_>>()?;
    let mut worst = None;
    let mut max_dev = 0.0;
    for (x, &(d, _)) in ball.iter().zip(&per) {
        if d > max_dev {
            max_dev = d;
            worst = Some(x.clone());
        }
    }
    Ok(WellDefinedness {
        ok: max_dev <= WELL_DEFINED_TOL,
        elements: ball.len(),
        representatives: per.iter().map(|p| p.1).sum(),
        max_deviation: max_dev,
        worst,
    })
}

/// Lazily filled kernel values over a fixed enumeration of elements.
#[derive(Debug)]
pub struct KernelTable {
    domain: Vec<GPElement>,
    cells: DashMap<(usize, usize), CentralElement>,
}

impl KernelTable {
    pub fn new(domain: Vec<GPElement>) -> Self {
        KernelTable {
            domain,
            cells: DashMap::new(),
        }
    }

    pub fn domain(&self) -> &[GPElement] {
        &self.domain
    }

    pub fn get(&self, i: usize, j: usize, ctx: &GpMultiplierCtx) -> CentralElement {
        self.cells
            .entry((i, j))
            .or_insert_with(|| ctx.kernel_unchecked(&self.domain[i], &self.domain[j]))
            .clone()
    }

    pub fn filled(&self) -> usize {
        self.cells.len()
    }

    /// `[K(x_i, x_j)]_{ij}`.
    pub fn matrix(&self, ctx: &GpMultiplierCtx) -> Result<OperatorMatrix> {
        ctx.require_valid()?;
        for x in &self.domain {
            ctx.system().gp().check_element(x)?;
        }
        let n = self.domain.len();
        let entries: Vec<CentralElement> = (0..n * n)
            .into_par_iter()
            .map(|idx| self.get(idx / n, idx % n, ctx))
            .collect();
        OperatorMatrix::from_central(ctx.system().structure(), n, entries)
    }
}
