//! GNS modules of multipliers on a finite group, the translation action,
//! the cocycle `b(s) = ξ - u_s ξ`, negative definite functions and
//! Schoenberg exponentials.
//!
//! Modules are represented only through their Gram matrix; no quotient by
//! null vectors is taken.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::dynamics::ActionTable;
use crate::error::{Error, Result};
use crate::matalg::{
    extract_central, hermitian_spectrum, is_positive, AlgebraElement, BlockStructure, CentralElement,
    OperatorMatrix, C64,
};
use crate::multipliers::{convention_flip, pd_matrix, Convention, Multiplier};

pub const GNS_TOL: f64 = 1e-9;

/// `C(G, A)` with the form `⟨f|g⟩ = Σ_{s,t} g(s)* α_s(h_{s⁻¹t}) f(t)`.
#[derive(Debug, Clone)]
pub struct GnsModule {
    alpha: ActionTable,
    h: Multiplier,
    gram: OperatorMatrix,
}

/// A function `G → A`, indexed by group element.
#[derive(Debug, Clone, PartialEq)]
pub struct ModuleVector {
    pub coeffs: Vec<AlgebraElement>,
}

impl ModuleVector {
    pub fn zero(n: usize, s: &BlockStructure) -> Self {
        ModuleVector {
            coeffs: vec![AlgebraElement::zero(s); n],
        }
    }

    pub fn random<R: Rng + ?Sized>(n: usize, s: &BlockStructure, rng: &mut R) -> Self {
        ModuleVector {
            coeffs: (0..n).map(|_| AlgebraElement::random(s, rng)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        ModuleVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        ModuleVector {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    /// Right action `f·a`.
    pub fn right_mul(&self, a: &AlgebraElement) -> Self {
        ModuleVector {
            coeffs: self.coeffs.iter().map(|c| c * a).collect(),
        }
    }

    /// Largest coefficient distance.
    pub fn distance(&self, other: &Self) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

/// Builds the module of a multiplier that is positive definite in the
/// standard sense; the form uses its flip `h̃_s = h_{s⁻¹}*`.
pub fn gns_build(h: &Multiplier, alpha: &ActionTable) -> Result<GnsModule> {
    gns_build_flipped(&convention_flip(h), alpha)
}

/// Builds the module directly from a multiplier in the flipped convention.
pub fn gns_build_flipped(h: &Multiplier, alpha: &ActionTable) -> Result<GnsModule> {
    let all: Vec<usize> = h.group().elements().collect();
    let gram = pd_matrix(h, alpha, &all, Convention::Flipped)?;
    let p = is_positive(&gram, GNS_TOL)?;
    if !p.positive {
        return Err(Error::NotPositive(p.lambda_min));
    }
    Ok(GnsModule {
        alpha: alpha.clone(),
        h: h.clone(),
        gram,
    })
}

impl GnsModule {
    pub fn gram(&self) -> &OperatorMatrix {
        &self.gram
    }

    /// The multiplier defining the form, in the flipped convention.
    pub fn multiplier(&self) -> &Multiplier {
        &self.h
    }

    pub fn action(&self) -> &ActionTable {
        &self.alpha
    }

    pub fn order(&self) -> usize {
        self.h.group().order()
    }

    pub fn structure(&self) -> &BlockStructure {
        self.alpha.structure()
    }

    pub fn inner(&self, f: &ModuleVector, g: &ModuleVector) -> AlgebraElement {
        let n = self.order();
        let mut acc = AlgebraElement::zero(self.structure());
        for s in 0..n {
            let gs = g.coeffs[s].adjoint();
            for t in 0..n {
                let c = self.gram.central_entry(s, t).expect("central Gram matrix");
                acc = &acc + &(&gs * &f.coeffs[t]).scale_central(c);
            }
        }
        acc
    }

    /// `δ_e ⊗ 1`.
    pub fn xi(&self) -> ModuleVector {
        let mut v = ModuleVector::zero(self.order(), self.structure());
        v.coeffs[self.h.group().identity()] = AlgebraElement::identity(self.structure());
        v
    }

    /// `(u_s v)(t) = α_s(v(s⁻¹t))`.
    pub fn u_action(&self, s: usize, v: &ModuleVector) -> Result<ModuleVector> {
        let g = self.h.group();
        if v.coeffs.len() != g.order() {
            return Err(Error::SupportEscape);
        }
        let a = self.alpha.auto(s);
        let sinv = g.inv(s);
        Ok(ModuleVector {
            coeffs: g
                .elements()
                .map(|t| a.apply(&v.coeffs[g.mul(sinv, t)]))
                .collect(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Cocycle {
    module: GnsModule,
    values: Vec<ModuleVector>,
}

/// `b(s) = ξ - u_s ξ`; the multiplier must be unital.
pub fn cocycle_build(m: &GnsModule) -> Result<Cocycle> {
    if !m.h.is_unital(1e-12) {
        return Err(Error::NotUnital);
    }
    let xi = m.xi();
    let values = m
        .h
        .group()
        .elements()
        .map(|s| Ok(xi.sub(&m.u_action(s, &xi)?)))
        .collect::<Result<_>>()?;
    Ok(Cocycle {
        module: m.clone(),
        values,
    })
}

impl Cocycle {
    pub fn module(&self) -> &GnsModule {
        &self.module
    }

    pub fn value(&self, s: usize) -> &ModuleVector {
        &self.values[s]
    }

    /// `⟨b(s)|b(s)⟩`.
    pub fn norm_sq(&self, s: usize) -> AlgebraElement {
        self.module.inner(&self.values[s], &self.values[s])
    }

    pub fn norms_sq(&self) -> Vec<AlgebraElement> {
        (0..self.values.len()).map(|s| self.norm_sq(s)).collect()
    }

    /// `max_{s,t} ‖b(st) - b(s) - u_s b(t)‖`, coefficientwise.
    pub fn identity_residual(&self) -> f64 {
        let g = self.module.h.group();
        let mut worst: f64 = 0.0;
        for s in g.elements() {
            for t in g.elements() {
                let rhs = self.values[s].add(&self.module.u_action(s, &self.values[t]).expect("full support"));
                worst = worst.max(self.values[g.mul(s, t)].distance(&rhs));
            }
        }
        worst
    }

    /// Central values of `⟨b(s)|b(s)⟩`.
    pub fn central_norms(&self) -> Result<Vec<CentralElement>> {
        self.norms_sq()
            .iter()
            .map(|q| extract_central(q, 1e-10))
            .collect()
    }
}

/// `s ↦ exp(-t ⟨b(s)|b(s)⟩²)`.
pub fn schoenberg_multiplier(c: &Cocycle, t: f64) -> Result<Multiplier> {
    exponential(c, |q| -t * q * q)
}

/// `s ↦ exp(-t ⟨b(s)|b(s)⟩)`, reported next to the squared version.
pub fn schoenberg_linear(c: &Cocycle, t: f64) -> Result<Multiplier> {
    exponential(c, |q| -t * q)
}

fn exponential(c: &Cocycle, f: impl Fn(C64) -> C64) -> Result<Multiplier> {
    let qs = c.central_norms()?;
    Multiplier::new(
        c.module.h.group().clone(),
        qs.iter().map(|q| q.map(&f).exp()).collect(),
    )
}

/// Whether `|1 - h^{(t)}_s|` shrinks for every `s` and block as `t`
/// decreases along `grid`.
pub fn converges_monotonically(c: &Cocycle, grid: &[f64]) -> Result<bool> {
    let mut ts = grid.to_vec();
    ts.sort_by(|a, b| b.total_cmp(a));
    let mut prev: Option<Vec<f64>> = None;
    for t in ts {
        let h = schoenberg_multiplier(c, t)?;
        let gaps: Vec<f64> = h
            .values()
            .iter()
            .flat_map(|v| v.scalars().iter().map(|z| (C64::new(1.0, 0.0) - z).norm()))
            .collect();
        if let Some(p) = &prev {
            if gaps.iter().zip(p).any(|(g, q)| *g > *q + 1e-15) {
                return Ok(false);
            }
        }
        prev = Some(gaps);
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NegativeDefiniteReport {
    pub symmetry_deviation: f64,
    pub trials: usize,
    /// Largest eigenvalue of the Hermitian part over all sampled forms.
    pub worst_margin: f64,
    /// Largest eigenvalue of the form compressed to `{Σ cᵢ = 0}` with
    /// `gᵢ` running over the whole group.
    pub sweep_margin: f64,
    pub passed: bool,
}

fn quadratic_form(
    psi: &[AlgebraElement],
    alpha: &ActionTable,
    gs: &[usize],
    bs: &[AlgebraElement],
) -> AlgebraElement {
    let g = alpha.group();
    let mut acc = AlgebraElement::zero(alpha.structure());
    for (i, &gi) in gs.iter().enumerate() {
        let a = alpha.auto(gi);
        let bi = bs[i].adjoint();
        for (j, &gj) in gs.iter().enumerate() {
            let x = a.apply(&psi[g.mul(g.inv(gi), gj)]);
            acc = &acc + &(&(&bi * &x) * &bs[j]);
        }
    }
    acc
}

/// `ψ` is α-negative definite: `α_s(ψ(s⁻¹)) = ψ(s)*` and
/// `Σ bᵢ* α_{gᵢ}(ψ(gᵢ⁻¹gⱼ)) bⱼ ≤ 0` whenever `Σ bᵢ = 0`.
pub fn negative_definite_check(
    psi: &[AlgebraElement],
    alpha: &ActionTable,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<NegativeDefiniteReport> {
    let g = alpha.group();
    let s = alpha.structure();
    if psi.len() != g.order() || psi.iter().any(|p| !p.conforms(s)) {
        return Err(Error::StructureMismatch);
    }
    let symmetry_deviation = g
        .elements()
        .map(|x| alpha.auto(x).apply(&psi[g.inv(x)]).distance(&psi[x].adjoint()))
        .fold(0.0, f64::max);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let m = rng.random_range(2..=g.order() + 2);
        let gs: Vec<usize> = (0..m).map(|_| rng.random_range(0..g.order())).collect();
        let mut bs: Vec<AlgebraElement> = (0..m - 1).map(|_| AlgebraElement::random(s, &mut rng)).collect();
        let sum = bs.iter().fold(AlgebraElement::zero(s), |a, b| &a + b);
        bs.push(-&sum);
        let q = quadratic_form(psi, alpha, &gs, &bs);
        for blk in q.blocks() {
            worst = worst.max(hermitian_spectrum(blk).1);
        }
    }

    let n = g.order();
    let x = OperatorMatrix::from_fn(s, n, |i, j| alpha.auto(i).apply(&psi[g.mul(g.inv(i), j)]))?;
    let sweep_margin = if n > 1 {
        let p = sum_zero_basis(n);
        let c = x.compress(&p)?;
        (0..s.num_blocks())
            .map(|k| hermitian_spectrum(&c.block_slice(k)).1)
            .fold(f64::NEG_INFINITY, f64::max)
    } else {
        0.0
    };
    let worst_margin = if trials == 0 { f64::NEG_INFINITY } else { worst };
    Ok(NegativeDefiniteReport {
        symmetry_deviation,
        trials,
        worst_margin,
        sweep_margin,
        passed: symmetry_deviation <= tol && worst_margin <= tol && sweep_margin <= tol,
    })
}

/// Orthonormal basis of `{c ∈ ℂⁿ : Σ cᵢ = 0}` as columns.
fn sum_zero_basis(n: usize) -> DMatrix<C64> {
    let mut p = DMatrix::<C64>::zeros(n, n - 1);
    // Helmert basis
    for k in 1..n {
        let norm = ((k * (k + 1)) as f64).sqrt();
        for i in 0..k {
            p[(i, k - 1)] = C64::new(1.0 / norm, 0.0);
        }
        p[(k, k - 1)] = C64::new(-(k as f64) / norm, 0.0);
    }
    p
}

/// `s ↦ min σ(c(s))` for positive central values.
pub fn spectral_gap(values: &[CentralElement]) -> Result<Vec<f64>> {
    values
        .iter()
        .enumerate()
        .map(|(s, c)| {
            if c.is_positive(1e-12) {
                Ok(c.min_real().max(0.0))
            } else {
                Err(Error::NotPositiveValue(s))
            }
        })
        .collect()
}

/// Indices whose gap is at most `r`.
pub fn gaps_below(gaps: &[f64], r: f64) -> Vec<usize> {
    gaps.iter()
        .enumerate()
        .filter(|(_, &g)| g <= r)
        .map(|(s, _)| s)
        .collect()
}
