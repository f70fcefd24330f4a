//! Constructions of commuting setups: tensor products, transformation
//! groupoids, and random positive definite multipliers.

use rand::Rng;

use super::{GpMultiplierCtx, Multiplier};
use crate::dynamics::{ActionSystem, ActionTable, Automorphism};
use crate::error::{Error, Result};
use crate::graphgroup::{FiniteGroup, SimplicialGraph};
use crate::matalg::{tensor_algebra, BlockStructure, CMatrix, CentralElement, C64};
use crate::wordcraft::GpContext;

/// `α₁ ⊗ id` and `id ⊗ α₂` on `A₁ ⊗ A₂` with multipliers `h₁ ⊗ 1` and
/// `1 ⊗ h₂`, over the single-edge graph on vertices `{0, 1}`.
pub fn tensor_fixture(
    a1: &ActionTable,
    h1: &Multiplier,
    a2: &ActionTable,
    h2: &Multiplier,
) -> Result<GpMultiplierCtx> {
    let t = tensor_algebra(a1.structure(), a2.structure());
    let (k1, k2) = (a1.structure().num_blocks(), a2.structure().num_blocks());
    let s = t.structure.clone();

    let left = a1
        .autos()
        .iter()
        .map(|al| {
            let perm = (0..k1 * k2).map(|b| al.perm()[b / k2] * k2 + b % k2).collect();
            let us = (0..k1 * k2)
                .map(|b| {
                    let (i, j) = (b / k2, b % k2);
                    let e = a2.structure().dim(j);
                    al.unitaries()[i].kronecker(&CMatrix::identity(e, e))
                })
                .collect();
            Automorphism::new(&s, perm, us)
        })
        .collect::<Result<Vec<_>>>()?;
    let right = a2
        .autos()
        .iter()
        .map(|ar| {
            let perm = (0..k1 * k2).map(|b| (b / k2) * k2 + ar.perm()[b % k2]).collect();
            let us = (0..k1 * k2)
                .map(|b| {
                    let (i, j) = (b / k2, b % k2);
                    let d = a1.structure().dim(i);
                    CMatrix::identity(d, d).kronecker(&ar.unitaries()[j])
                })
                .collect();
            Automorphism::new(&s, perm, us)
        })
        .collect::<Result<Vec<_>>>()?;

    let g1 = a1.group().clone();
    let g2 = a2.group().clone();
    let gp = GpContext::new(SimplicialGraph::complete(2), vec![g1.clone(), g2.clone()])?;
    let sys = ActionSystem::new(
        gp,
        s,
        vec![
            ActionTable::new(g1.clone(), t.structure.clone(), left)?,
            ActionTable::new(g2.clone(), t.structure.clone(), right)?,
        ],
    )?;
    let m1 = Multiplier::new(g1, h1.values().iter().map(|c| t.central_left(c)).collect())?;
    let m2 = Multiplier::new(g2, h2.values().iter().map(|c| t.central_right(c)).collect())?;
    GpMultiplierCtx::new(sys, vec![m1, m2])
}

/// Permutation actions of vertex groups on a finite set `X` together with
/// functions `h̃_v: G_v × X → ℂ`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupoidData {
    pub graph: SimplicialGraph,
    pub groups: Vec<FiniteGroup>,
    pub points: usize,
    /// `perms[v][g][x]` is `g·x`.
    pub perms: Vec<Vec<Vec<usize>>>,
    /// `values[v][g][x]` is `h̃_v(g, x)`.
    pub values: Vec<Vec<Vec<C64>>>,
}

/// The multiplier context over `C(X)` with `h_{v,s} = h̃_v(s, ·)`.
pub fn groupoid_from_space(data: &GroupoidData) -> Result<GpMultiplierCtx> {
    let s = BlockStructure::diagonal(data.points)?;
    let n = data.groups.len();
    if data.perms.len() != n || data.values.len() != n {
        return Err(Error::ContextMismatch("per-vertex data has the wrong length".into()));
    }
    let gp = GpContext::new(data.graph.clone(), data.groups.clone())?;
    let mut tables = Vec::with_capacity(n);
    let mut mults = Vec::with_capacity(n);
    for ((g, perms), vals) in data.groups.iter().zip(&data.perms).zip(&data.values) {
        let autos = perms
            .iter()
            .map(|p| Automorphism::permutation(&s, p.clone()))
            .collect::<Result<Vec<_>>>()?;
        tables.push(ActionTable::new(g.clone(), s.clone(), autos)?);
        mults.push(Multiplier::new(
            g.clone(),
            vals.iter().map(|v| CentralElement::new(v.clone())).collect(),
        )?);
    }
    GpMultiplierCtx::new(ActionSystem::new(gp, s, tables)?, mults)
}

impl GroupoidData {
    /// Reads `h̃` back off a context over a diagonal algebra.
    pub fn from_ctx(ctx: &GpMultiplierCtx) -> Result<Self> {
        let s = ctx.system().structure();
        if s.dims().iter().any(|&d| d != 1) {
            return Err(Error::StructureMismatch);
        }
        Ok(GroupoidData {
            graph: ctx.system().gp().graph().clone(),
            groups: ctx.system().gp().groups().to_vec(),
            points: s.num_blocks(),
            perms: ctx
                .system()
                .tables()
                .iter()
                .map(|t| t.autos().iter().map(|a| a.perm().to_vec()).collect())
                .collect(),
            values: ctx
                .multipliers()
                .iter()
                .map(|h| h.values().iter().map(|c| c.scalars().to_vec()).collect())
                .collect(),
        })
    }
}

/// A positive definite multiplier for `alpha`, as a coefficient function
/// `h_s(y) = ⟨λ(s)ξ(y), ξ(s·y)⟩` of the left regular representation with a
/// random field `ξ` of vectors over the blocks.
pub fn random_pd_multiplier<R: Rng + ?Sized>(alpha: &ActionTable, rng: &mut R) -> Multiplier {
    coefficient_multiplier(alpha, rng, false)
}

/// As [`random_pd_multiplier`] with unit vectors, so that `h_e = 1`.
pub fn random_unital_pd_multiplier<R: Rng + ?Sized>(alpha: &ActionTable, rng: &mut R) -> Multiplier {
    coefficient_multiplier(alpha, rng, true)
}

fn coefficient_multiplier<R: Rng + ?Sized>(alpha: &ActionTable, rng: &mut R, unit: bool) -> Multiplier {
    let g = alpha.group();
    let n = g.order();
    let k = alpha.structure().num_blocks();
    let xi: Vec<Vec<C64>> = (0..k)
        .map(|_| {
            let v: Vec<C64> = (0..n)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            if unit {
                let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                v.iter().map(|z| z / norm).collect()
            } else {
                v
            }
        })
        .collect();
    let values = g
        .elements()
        .map(|s| {
            let sinv = g.inv(s);
            CentralElement::new(
                (0..k)
                    .map(|y| {
                        let sy = alpha.auto(s).perm()[y];
                        g.elements()
                            .map(|t| xi[y][g.mul(sinv, t)] * xi[sy][t].conj())
                            .sum()
                    })
                    .collect(),
            )
        })
        .collect();
    Multiplier::new(g.clone(), values).expect("shape matches the action")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::setup_commutes_per_graph;
    use crate::multipliers::{is_positive_definite, multipliers_commute};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn trivial_tensor_fixture() {
        let s = BlockStructure::matrix(1).unwrap();
        let g = FiniteGroup::cyclic(2);
        let a = ActionTable::trivial(g.clone(), s);
        let h = Multiplier::ones(g, 1);
        let ctx = tensor_fixture(&a, &h, &a, &h).unwrap();
        assert!(ctx.is_valid());
        assert!(ctx.system().tables().iter().all(|t| t.is_trivial()));
    }

    #[test]
    fn phase_conjugation_tensor_trivial_is_valid() {
        let m2 = BlockStructure::matrix(2).unwrap();
        let a1 = ActionTable::diagonal_phases(2, m2, &[vec![0, 1]]).unwrap();
        let h1 = Multiplier::scalar(FiniteGroup::cyclic(2), 1, &[re(1.0), re(0.4)]).unwrap();
        let a2 = ActionTable::trivial(FiniteGroup::cyclic(3), BlockStructure::matrix(1).unwrap());
        let h2 = Multiplier::scalar(FiniteGroup::cyclic(3), 1, &[re(1.0), re(0.2), re(0.2)]).unwrap();
        assert!(is_positive_definite(&h1, &a1, 1e-9).unwrap().positive);
        assert!(is_positive_definite(&h2, &a2, 1e-9).unwrap().positive);
        let ctx = tensor_fixture(&a1, &h1, &a2, &h2).unwrap();
        assert_eq!(ctx.system().structure().dims(), &[2]);
        setup_commutes_per_graph(ctx.system().gp().graph(), ctx.system().tables()).unwrap();
        multipliers_commute(ctx.system(), ctx.multipliers()).unwrap();
        for (t, h) in ctx.system().tables().iter().zip(ctx.multipliers()) {
            assert!(is_positive_definite(h, t, 1e-9).unwrap().positive);
        }
    }

    #[test]
    fn tensor_of_block_permutations() {
        let d2 = BlockStructure::diagonal(2).unwrap();
        let a1 = ActionTable::cyclic_permutation(2, d2.clone(), &[1, 0]).unwrap();
        let a2 = ActionTable::cyclic_permutation(2, d2, &[1, 0]).unwrap();
        let h = Multiplier::scalar(FiniteGroup::cyclic(2), 2, &[re(1.0), re(0.5)]).unwrap();
        let ctx = tensor_fixture(&a1, &h, &a2, &h).unwrap();
        assert!(ctx.is_valid());
        assert_eq!(ctx.system().tables()[0].auto(1).perm(), &[2, 3, 0, 1]);
        assert_eq!(ctx.system().tables()[1].auto(1).perm(), &[1, 0, 3, 2]);
    }

    fn swap_data(invariant: bool) -> GroupoidData {
        let g = FiniteGroup::cyclic(2);
        let h1 = if invariant { vec![re(0.3), re(0.3)] } else { vec![re(0.9), re(0.1)] };
        GroupoidData {
            graph: SimplicialGraph::complete(2),
            groups: vec![g.clone(), g],
            points: 2,
            perms: vec![vec![vec![0, 1], vec![1, 0]], vec![vec![0, 1], vec![0, 1]]],
            values: vec![
                vec![vec![re(1.0), re(1.0)], vec![re(0.5), re(0.5)]],
                vec![vec![re(1.0), re(1.0)], h1],
            ],
        }
    }

    #[test]
    fn groupoid_swap_with_invariant_values() {
        let ctx = groupoid_from_space(&swap_data(true)).unwrap();
        assert!(ctx.is_valid());
        assert_eq!(GroupoidData::from_ctx(&ctx).unwrap(), swap_data(true));
        let bad = groupoid_from_space(&swap_data(false)).unwrap();
        assert!(matches!(bad.multipliers_commute(), Err(Error::EdgeViolation { .. })));
    }

    #[test]
    fn single_point_is_scalar_case() {
        let g = FiniteGroup::cyclic(3);
        let data = GroupoidData {
            graph: SimplicialGraph::edgeless(1),
            groups: vec![g.clone()],
            points: 1,
            perms: vec![vec![vec![0]; 3]],
            values: vec![vec![vec![re(1.0)], vec![re(0.5)], vec![re(0.5)]]],
        };
        let ctx = groupoid_from_space(&data).unwrap();
        let scalar = Multiplier::scalar(g, 1, &[re(1.0), re(0.5), re(0.5)]).unwrap();
        assert_eq!(ctx.multipliers()[0], scalar);
    }

    #[test]
    fn random_multipliers_are_pd() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let s = BlockStructure::new(vec![1, 2, 1, 2]).unwrap();
        let sigma = crate::dynamics::Automorphism::permutation(&s, vec![2, 3, 0, 1]).unwrap();
        let mut autos = vec![crate::dynamics::Automorphism::identity(&s)];
        autos.push(sigma);
        let a = ActionTable::new(FiniteGroup::cyclic(2), s, autos).unwrap();
        for _ in 0..20 {
            let h = random_pd_multiplier(&a, &mut rng);
            let p = is_positive_definite(&h, &a, 1e-9).unwrap();
            assert!(p.positive, "lambda_min = {}", p.lambda_min);
            let u = random_unital_pd_multiplier(&a, &mut rng);
            assert!(u.is_unital(1e-12));
            assert!(is_positive_definite(&u, &a, 1e-9).unwrap().positive);
        }
    }
}
