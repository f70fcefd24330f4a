//! Positive definite multipliers `h: G → Z(A)` and their graph products.

mod fixtures;
mod haagerup;
mod kernel;

pub use fixtures::{groupoid_from_space, random_pd_multiplier, random_unital_pd_multiplier, tensor_fixture, GroupoidData};
pub use haagerup::{haagerup_witness_ball, HaagerupReport};
pub use kernel::{gp_multiplier, gp_well_defined, kernel, KernelTable, WellDefinedness};

use dashmap::DashMap;
use serde::Serialize;

use crate::dynamics::{ActionSystem, ActionTable, Automorphism};
use crate::error::{Error, Result};
use crate::graphgroup::{FiniteGroup, VertexId};
use crate::matalg::{is_positive, CentralElement, OperatorMatrix, Positivity, C64};
use crate::wordcraft::{GPElement, Letter};

pub const STRUCTURAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Multiplier {
    #[serde(skip)]
    group: FiniteGroup,
    values: Vec<CentralElement>,
}

impl Multiplier {
    pub fn new(group: FiniteGroup, values: Vec<CentralElement>) -> Result<Self> {
        if values.len() != group.order() {
            return Err(Error::ContextMismatch(format!(
                "{} values for a group of order {}",
                values.len(),
                group.order()
            )));
        }
        if values.windows(2).any(|w| w[0].len() != w[1].len()) || values[0].is_empty() {
            return Err(Error::StructureMismatch);
        }
        Ok(Multiplier { group, values })
    }

    /// The same scalar in every block.
    pub fn scalar(group: FiniteGroup, k: usize, values: &[C64]) -> Result<Self> {
        let vals = values.iter().map(|&z| CentralElement::constant(k, z)).collect();
        Self::new(group, vals)
    }

    pub fn ones(group: FiniteGroup, k: usize) -> Self {
        let values = vec![CentralElement::ones(k); group.order()];
        Multiplier { group, values }
    }

    /// 1 at the identity and 0 elsewhere.
    pub fn delta(group: FiniteGroup, k: usize) -> Self {
        let e = group.identity();
        let values = group
            .elements()
            .map(|g| if g == e { CentralElement::ones(k) } else { CentralElement::zeros(k) })
            .collect();
        Multiplier { group, values }
    }

    /// 1 at the identity and `c` elsewhere.
    pub fn geometric(group: FiniteGroup, k: usize, c: C64) -> Self {
        let e = group.identity();
        let values = group
            .elements()
            .map(|g| if g == e { CentralElement::ones(k) } else { CentralElement::constant(k, c) })
            .collect();
        Multiplier { group, values }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn values(&self) -> &[CentralElement] {
        &self.values
    }

    pub fn value(&self, g: usize) -> &CentralElement {
        &self.values[g]
    }

    pub fn num_blocks(&self) -> usize {
        self.values[0].len()
    }

    pub fn is_unital(&self, tol: f64) -> bool {
        self.values[self.group.identity()].is_one(tol)
    }

    pub fn map(&self, f: impl Fn(usize, &CentralElement) -> CentralElement) -> Multiplier {
        Multiplier {
            group: self.group.clone(),
            values: self.values.iter().enumerate().map(|(g, c)| f(g, c)).collect(),
        }
    }

    /// `sup_s ‖h_s‖` over `s ≠ e`.
    pub fn off_identity_norm(&self) -> f64 {
        let e = self.group.identity();
        self.values
            .iter()
            .enumerate()
            .filter(|&(g, _)| g != e)
            .map(|(_, c)| c.norm())
            .fold(0.0, f64::max)
    }
}

/// Which Gram matrix defines positivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Convention {
    /// `[α_{x_j}(h_{x_i⁻¹x_j})]_{ij}`
    Standard,
    /// `[α_{x_i}(h_{x_i⁻¹x_j})]_{ij}`, the form used by GNS modules.
    Flipped,
}

pub fn pd_matrix(
    h: &Multiplier,
    alpha: &ActionTable,
    set: &[usize],
    conv: Convention,
) -> Result<OperatorMatrix> {
    if h.group != *alpha.group() || h.num_blocks() != alpha.structure().num_blocks() {
        return Err(Error::StructureMismatch);
    }
    let g = &h.group;
    let n = set.len();
    let mut entries = Vec::with_capacity(n * n);
    for &xi in set {
        for &xj in set {
            let v = h.value(g.mul(g.inv(xi), xj));
            let at = match conv {
                Convention::Standard => xj,
                Convention::Flipped => xi,
            };
            entries.push(alpha.auto(at).apply_central(v));
        }
    }
    OperatorMatrix::from_central(alpha.structure(), n, entries)
}

pub fn is_positive_definite_on(
    h: &Multiplier,
    alpha: &ActionTable,
    set: &[usize],
    conv: Convention,
    tol: f64,
) -> Result<Positivity> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    is_positive(&pd_matrix(h, alpha, set, conv)?, tol)
}

/// Positivity of `[α_{x_j}(h_{x_i⁻¹x_j})]` over the whole group.
pub fn is_positive_definite(h: &Multiplier, alpha: &ActionTable, tol: f64) -> Result<Positivity> {
    let all: Vec<usize> = h.group.elements().collect();
    is_positive_definite_on(h, alpha, &all, Convention::Standard, tol)
}

/// `s ↦ h_{s⁻¹}*`.
pub fn convention_flip(h: &Multiplier) -> Multiplier {
    h.map(|g, _| h.value(h.group.inv(g)).conj())
}

/// Largest deviation in `h_{a⁻¹}* = α_a(h_a)` over the group.
pub fn hermitian_identity_check(h: &Multiplier, alpha: &ActionTable) -> f64 {
    h.group
        .elements()
        .map(|a| {
            let lhs = h.value(h.group.inv(a)).conj();
            let rhs = alpha.auto(a).apply_central(h.value(a));
            lhs.distance(&rhs)
        })
        .fold(0.0, f64::max)
}

/// Replace `h_e` by 1. Requires `‖h_s‖ ≤ 1/2` off the identity and
/// `0 ≤ h_e ≤ 1`.
pub fn unitalize(h: &Multiplier) -> Result<Multiplier> {
    let norm = h.off_identity_norm();
    if norm > 0.5 + STRUCTURAL_TOL {
        return Err(Error::NormTooLarge(norm));
    }
    let e = h.group.identity();
    let he = h.value(e);
    let ok = he
        .scalars()
        .iter()
        .all(|z| z.im.abs() <= STRUCTURAL_TOL && (-STRUCTURAL_TOL..=1.0 + STRUCTURAL_TOL).contains(&z.re));
    if !ok {
        return Err(Error::BadIdentityValue);
    }
    Ok(h.map(|g, c| if g == e { CentralElement::ones(c.len()) } else { c.clone() }))
}

/// First violation of `α_{v,a}(h_{w,b}) = h_{w,b}` across an edge.
pub fn multipliers_commute(sys: &ActionSystem, mults: &[Multiplier]) -> Result<()> {
    let graph = sys.gp().graph();
    let vs = graph.vertices();
    for (v, w) in graph.edges() {
        let (i, j) = (graph.position(v).unwrap(), graph.position(w).unwrap());
        for (p, q) in [(i, j), (j, i)] {
            let t = &sys.tables()[p];
            for a in t.group().elements() {
                for (b, hb) in mults[q].values.iter().enumerate() {
                    if t.auto(a).apply_central(hb).distance(hb) > STRUCTURAL_TOL {
                        return Err(Error::EdgeViolation { v: vs[p], w: vs[q], g: a, h: b });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Actions and multipliers at every vertex, with the two commutation
/// verdicts recorded.
#[derive(Debug, Clone)]
pub struct GpMultiplierCtx {
    sys: ActionSystem,
    mults: Vec<Multiplier>,
    mults_commute: std::result::Result<(), Error>,
    pub(crate) gp_cache: DashMap<GPElement, CentralElement>,
    pub(crate) act_cache: DashMap<GPElement, Automorphism>,
}

impl GpMultiplierCtx {
    pub fn new(sys: ActionSystem, mults: Vec<Multiplier>) -> Result<Self> {
        if mults.len() != sys.gp().groups().len() {
            return Err(Error::ContextMismatch(format!(
                "{} multipliers for {} vertices",
                mults.len(),
                sys.gp().groups().len()
            )));
        }
        for (h, g) in mults.iter().zip(sys.gp().groups()) {
            if h.group != *g {
                return Err(Error::ContextMismatch("multiplier group differs from vertex group".into()));
            }
            if h.num_blocks() != sys.structure().num_blocks() {
                return Err(Error::StructureMismatch);
            }
        }
        let mults_commute = multipliers_commute(&sys, &mults);
        Ok(GpMultiplierCtx {
            sys,
            mults,
            mults_commute,
            gp_cache: DashMap::new(),
            act_cache: DashMap::new(),
        })
    }

    pub fn system(&self) -> &ActionSystem {
        &self.sys
    }

    pub fn multipliers(&self) -> &[Multiplier] {
        &self.mults
    }

    pub fn multiplier(&self, v: VertexId) -> Result<&Multiplier> {
        let p = self.sys.gp().graph().position(v).ok_or(Error::UnknownVertex(v))?;
        Ok(&self.mults[p])
    }

    pub fn actions_commute(&self) -> &std::result::Result<(), Error> {
        self.sys.setup()
    }

    pub fn multipliers_commute(&self) -> &std::result::Result<(), Error> {
        &self.mults_commute
    }

    pub fn is_valid(&self) -> bool {
        self.sys.setup().is_ok() && self.mults_commute.is_ok()
    }

    pub fn require_valid(&self) -> Result<()> {
        if let Err(e) = self.sys.setup() {
            return Err(Error::SetupInvalid(format!("actions: {e}")));
        }
        if let Err(e) = &self.mults_commute {
            return Err(Error::SetupInvalid(format!("multipliers: {e}")));
        }
        Ok(())
    }

    pub fn num_blocks(&self) -> usize {
        self.sys.structure().num_blocks()
    }

    pub(crate) fn letter_value(&self, l: Letter) -> &CentralElement {
        let p = self.sys.gp().graph().position(l.vertex).expect("vertex in context");
        self.mults[p].value(l.elem)
    }

    /// Every vertex multiplier takes values in `Z(A)⁺`.
    pub fn values_positive(&self, tol: f64) -> bool {
        self.mults
            .iter()
            .all(|h| h.values.iter().all(|c| c.is_positive(tol)))
    }
}
