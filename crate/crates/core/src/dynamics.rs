//! Group actions on `⊕ₖ M_{d_k}` by block permutations followed by unitary
//! conjugation, and the graph-product action on reduced words.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graphgroup::{FiniteGroup, SimplicialGraph, VertexId};
use crate::matalg::{AlgebraElement, BlockStructure, CMatrix, CentralElement, C64};
use crate::wordcraft::{GPElement, GpContext, Letter};

pub const UNITARY_TOL: f64 = 1e-10;
pub const MAP_TOL: f64 = 1e-12;

/// `a ↦ (U_k a_{π⁻¹(k)} U_k*)_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Automorphism {
    perm: Vec<usize>,
    inv_perm: Vec<usize>,
    unitaries: Vec<CMatrix>,
}

fn invert_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

impl Automorphism {
    /// `perm[j]` is the block that block `j` is sent to.
    pub fn new(s: &BlockStructure, perm: Vec<usize>, unitaries: Vec<CMatrix>) -> Result<Self> {
        let k = s.num_blocks();
        if perm.len() != k || unitaries.len() != k {
            return Err(Error::BadAutomorphism(format!(
                "expected {k} blocks, got perm of length {} and {} unitaries",
                perm.len(),
                unitaries.len()
            )));
        }
        let mut seen = vec![false; k];
        for (j, &p) in perm.iter().enumerate() {
            if p >= k || std::mem::replace(&mut seen[p], true) {
                return Err(Error::BadAutomorphism(format!("{perm:?} is not a permutation")));
            }
            if s.dim(p) != s.dim(j) {
                return Err(Error::BadAutomorphism(format!(
                    "block {j} of dim {} sent to block {p} of dim {}",
                    s.dim(j),
                    s.dim(p)
                )));
            }
        }
        for (kk, u) in unitaries.iter().enumerate() {
            let d = s.dim(kk);
            if u.nrows() != d || u.ncols() != d {
                return Err(Error::BadAutomorphism(format!("unitary {kk} has the wrong shape")));
            }
            let dev = (u.adjoint() * u - CMatrix::identity(d, d)).norm();
            if dev > UNITARY_TOL {
                return Err(Error::BadAutomorphism(format!(
                    "unitary {kk} is off by {dev:e}"
                )));
            }
        }
        Ok(Automorphism {
            inv_perm: invert_perm(&perm),
            perm,
            unitaries,
        })
    }

    pub fn identity(s: &BlockStructure) -> Self {
        Automorphism {
            perm: (0..s.num_blocks()).collect(),
            inv_perm: (0..s.num_blocks()).collect(),
            unitaries: s.dims().iter().map(|&d| CMatrix::identity(d, d)).collect(),
        }
    }

    /// Block permutation with identity unitaries.
    pub fn permutation(s: &BlockStructure, perm: Vec<usize>) -> Result<Self> {
        let us = s.dims().iter().map(|&d| CMatrix::identity(d, d)).collect();
        Self::new(s, perm, us)
    }

    /// Conjugation by a block-diagonal unitary.
    pub fn inner(s: &BlockStructure, unitaries: Vec<CMatrix>) -> Result<Self> {
        Self::new(s, (0..s.num_blocks()).collect(), unitaries)
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn unitaries(&self) -> &[CMatrix] {
        &self.unitaries
    }

    pub fn apply(&self, a: &AlgebraElement) -> AlgebraElement {
        let blocks = self
            .unitaries
            .iter()
            .enumerate()
            .map(|(k, u)| u * a.block(self.inv_perm[k]) * u.adjoint())
            .collect();
        AlgebraElement::from_blocks_unchecked(blocks)
    }

    pub fn try_apply(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if a.blocks().len() != self.perm.len()
            || a.blocks().iter().zip(&self.unitaries).any(|(b, u)| b.nrows() != u.nrows())
        {
            return Err(Error::StructureMismatch);
        }
        Ok(self.apply(a))
    }

    /// On the center only the block permutation is visible.
    pub fn apply_central(&self, c: &CentralElement) -> CentralElement {
        CentralElement::new(self.inv_perm.iter().map(|&j| c.scalars()[j]).collect())
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Automorphism) -> Automorphism {
        let perm: Vec<usize> = other.perm.iter().map(|&q| self.perm[q]).collect();
        let unitaries = self
            .unitaries
            .iter()
            .enumerate()
            .map(|(k, u)| u * &other.unitaries[self.inv_perm[k]])
            .collect();
        Automorphism {
            inv_perm: invert_perm(&perm),
            perm,
            unitaries,
        }
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            perm: self.inv_perm.clone(),
            inv_perm: self.perm.clone(),
            unitaries: self
                .perm
                .iter()
                .map(|&p| self.unitaries[p].adjoint())
                .collect(),
        }
    }

    /// Largest deviation between the two maps over all matrix units.
    pub fn map_distance(&self, other: &Automorphism, s: &BlockStructure) -> f64 {
        s.matrix_units()
            .iter()
            .map(|e| self.apply(e).distance(&other.apply(e)))
            .fold(0.0, f64::max)
    }
}

/// Haar-distributed unitary via QR with phase correction.
pub fn random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMatrix {
    let z = DMatrix::from_fn(d, d, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let qr = z.qr();
    let (q, r) = (qr.q(), qr.r());
    let phases = DMatrix::from_fn(d, d, |i, j| {
        if i == j {
            let x = r[(i, i)];
            if x.norm() > 0.0 { x / x.norm() } else { C64::new(1.0, 0.0) }
        } else {
            C64::new(0.0, 0.0)
        }
    });
    q * phases
}

/// A group action stored element by element.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionTable {
    group: FiniteGroup,
    structure: BlockStructure,
    autos: Vec<Automorphism>,
}

impl ActionTable {
    pub fn new(group: FiniteGroup, structure: BlockStructure, autos: Vec<Automorphism>) -> Result<Self> {
        if autos.len() != group.order() {
            return Err(Error::BadAutomorphism(format!(
                "{} automorphisms for a group of order {}",
                autos.len(),
                group.order()
            )));
        }
        if autos.iter().any(|a| a.perm.len() != structure.num_blocks()) {
            return Err(Error::StructureMismatch);
        }
        Ok(ActionTable {
            group,
            structure,
            autos,
        })
    }

    pub fn trivial(group: FiniteGroup, structure: BlockStructure) -> Self {
        let autos = vec![Automorphism::identity(&structure); group.order()];
        ActionTable {
            group,
            structure,
            autos,
        }
    }

    /// Cyclic group `Z/n` acting by `U_g = diag(exp(2πi·g·q_j/n))` in every
    /// block, where `charges[k]` lists the `q_j` of block `k`.
    pub fn diagonal_phases(n: usize, structure: BlockStructure, charges: &[Vec<i64>]) -> Result<Self> {
        if charges.len() != structure.num_blocks()
            || charges.iter().zip(structure.dims()).any(|(q, &d)| q.len() != d)
        {
            return Err(Error::StructureMismatch);
        }
        let group = FiniteGroup::cyclic(n);
        let mut autos = Vec::with_capacity(n);
        for g in 0..n {
            let us = charges
                .iter()
                .map(|qs| {
                    let diag: Vec<C64> = qs
                        .iter()
                        .map(|&q| C64::from_polar(1.0, 2.0 * PI * (g as f64) * (q as f64) / n as f64))
                        .collect();
                    CMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag))
                })
                .collect();
            autos.push(Automorphism::inner(&structure, us)?);
        }
        Self::new(group, structure, autos)
    }

    /// Cyclic group `Z/n` acting by powers of a block permutation `σ`.
    pub fn cyclic_permutation(n: usize, structure: BlockStructure, sigma: &[usize]) -> Result<Self> {
        let gen = Automorphism::permutation(&structure, sigma.to_vec())?;
        let mut autos = vec![Automorphism::identity(&structure)];
        for g in 1..n {
            autos.push(gen.compose(&autos[g - 1]));
        }
        Self::new(FiniteGroup::cyclic(n), structure, autos)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn auto(&self, g: usize) -> &Automorphism {
        &self.autos[g]
    }

    pub fn autos(&self) -> &[Automorphism] {
        &self.autos
    }

    pub fn is_trivial(&self) -> bool {
        let id = Automorphism::identity(&self.structure);
        self.autos.iter().all(|a| a.map_distance(&id, &self.structure) <= MAP_TOL)
    }
}

/// `α_e = id` and `α_{gh} = α_g ∘ α_h` on every matrix unit.
pub fn validate_action(t: &ActionTable) -> Result<()> {
    let s = &t.structure;
    let g = &t.group;
    let id = Automorphism::identity(s);
    if t.autos[g.identity()].map_distance(&id, s) > MAP_TOL {
        return Err(Error::NotHomomorphism(g.identity(), g.identity()));
    }
    for a in g.elements() {
        for b in g.elements() {
            let lhs = &t.autos[g.mul(a, b)];
            let rhs = t.autos[a].compose(&t.autos[b]);
            if lhs.map_distance(&rhs, s) > MAP_TOL {
                return Err(Error::NotHomomorphism(a, b));
            }
        }
    }
    Ok(())
}

/// First pair `(g, h)` whose automorphisms fail to commute as maps.
pub fn commutation_violation(t1: &ActionTable, t2: &ActionTable) -> Option<(usize, usize)> {
    let s = &t1.structure;
    for g in t1.group.elements() {
        for h in t2.group.elements() {
            let gh = t1.autos[g].compose(&t2.autos[h]);
            let hg = t2.autos[h].compose(&t1.autos[g]);
            if gh.map_distance(&hg, s) > MAP_TOL {
                return Some((g, h));
            }
        }
    }
    None
}

pub fn actions_commute(t1: &ActionTable, t2: &ActionTable) -> bool {
    commutation_violation(t1, t2).is_none()
}

/// Actions at adjacent vertices commute. `tables[i]` belongs to the `i`-th
/// vertex in sorted order.
pub fn setup_commutes_per_graph(graph: &SimplicialGraph, tables: &[ActionTable]) -> Result<()> {
    let vs = graph.vertices();
    for (v, w) in graph.edges() {
        let (i, j) = (graph.position(v).unwrap(), graph.position(w).unwrap());
        if let Some((g, h)) = commutation_violation(&tables[i], &tables[j]) {
            return Err(Error::EdgeViolation { v: vs[i], w: vs[j], g, h });
        }
    }
    Ok(())
}

/// Graph, vertex groups and one action per vertex on a common algebra.
#[derive(Debug, Clone)]
pub struct ActionSystem {
    gp: GpContext,
    structure: BlockStructure,
    tables: Vec<ActionTable>,
    setup: std::result::Result<(), Error>,
}

impl ActionSystem {
    /// Validates each action; the per-edge commutation verdict is recorded
    /// rather than enforced so that invalid setups can still be probed.
    pub fn new(gp: GpContext, structure: BlockStructure, tables: Vec<ActionTable>) -> Result<Self> {
        if tables.len() != gp.groups().len() {
            return Err(Error::ContextMismatch(format!(
                "{} action tables for {} vertices",
                tables.len(),
                gp.groups().len()
            )));
        }
        for (t, g) in tables.iter().zip(gp.groups()) {
            if t.structure != structure {
                return Err(Error::StructureMismatch);
            }
            if t.group != *g {
                return Err(Error::ContextMismatch("action group differs from vertex group".into()));
            }
            validate_action(t)?;
        }
        let setup = setup_commutes_per_graph(gp.graph(), &tables);
        Ok(ActionSystem {
            gp,
            structure,
            tables,
            setup,
        })
    }

    pub fn gp(&self) -> &GpContext {
        &self.gp
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn tables(&self) -> &[ActionTable] {
        &self.tables
    }

    pub fn table(&self, v: VertexId) -> Result<&ActionTable> {
        let p = self.gp.graph().position(v).ok_or(Error::UnknownVertex(v))?;
        Ok(&self.tables[p])
    }

    pub fn setup(&self) -> &std::result::Result<(), Error> {
        &self.setup
    }

    pub fn letter_auto(&self, l: Letter) -> &Automorphism {
        let p = self.gp.graph().position(l.vertex).expect("vertex in context");
        &self.tables[p].autos[l.elem]
    }

    /// `α_{l₁} ∘ ⋯ ∘ α_{l_n}` for any letter sequence, with no validity
    /// requirement.
    pub fn act_letters(&self, letters: &[Letter]) -> Automorphism {
        letters
            .iter()
            .fold(Automorphism::identity(&self.structure), |acc, &l| {
                acc.compose(self.letter_auto(l))
            })
    }

    pub(crate) fn require_setup(&self) -> Result<()> {
        self.setup
            .as_ref()
            .map(|_| ())
            .map_err(|e| Error::SetupInvalid(e.to_string()))
    }
}

/// The graph-product action `★_Γ α_v` at `s`.
pub fn act_word(s: &GPElement, sys: &ActionSystem) -> Result<Automorphism> {
    sys.require_setup()?;
    sys.gp.check_element(s)?;
    Ok(sys.act_letters(s.letters()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::wordcraft::{normalize, rearrangements, DEFAULT_BUDGET};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn identity_automorphism_fixes_everything() {
        let s = BlockStructure::new(vec![2, 1, 2]).unwrap();
        let a = AlgebraElement::random(&s, &mut rng());
        assert_eq!(Automorphism::identity(&s).apply(&a), a);
    }

    #[test]
    fn point_permutation_permutes_diagonal() {
        let s = BlockStructure::diagonal(3).unwrap();
        let alpha = Automorphism::permutation(&s, vec![1, 2, 0]).unwrap();
        let f = crate::matalg::embed_central(&CentralElement::real(&[1.0, 2.0, 3.0]), &s).unwrap();
        let out = crate::matalg::extract_central(&alpha.apply(&f), 0.0).unwrap();
        assert_eq!(out, CentralElement::real(&[3.0, 1.0, 2.0]));
        assert_eq!(
            alpha.apply_central(&CentralElement::real(&[1.0, 2.0, 3.0])),
            out
        );
    }

    #[test]
    fn automorphisms_are_unital_star_homomorphisms() {
        let mut r = rng();
        let s = BlockStructure::new(vec![2, 2, 1]).unwrap();
        let us = s.dims().iter().map(|&d| random_unitary(d, &mut r)).collect();
        let alpha = Automorphism::new(&s, vec![1, 0, 2], us).unwrap();
        assert_eq!(alpha.perm(), &[1, 0, 2]);
        for _ in 0..10 {
            let a = AlgebraElement::random(&s, &mut r);
            let b = AlgebraElement::random(&s, &mut r);
            assert!(alpha.apply(&(&a * &b)).distance(&(&alpha.apply(&a) * &alpha.apply(&b))) < 1e-12);
            assert!(alpha.apply(&a.adjoint()).distance(&alpha.apply(&a).adjoint()) < 1e-12);
            assert!(alpha.inverse().apply(&alpha.apply(&a)).distance(&a) < 1e-12);
        }
        let one = AlgebraElement::identity(&s);
        assert!(alpha.apply(&one).distance(&one) < 1e-12);
    }

    #[test]
    fn compose_matches_sequential_application() {
        let mut r = rng();
        let s = BlockStructure::new(vec![2, 2, 3]).unwrap();
        let mk = |r: &mut ChaCha8Rng, p: Vec<usize>| {
            let us = s.dims().iter().map(|&d| random_unitary(d, r)).collect();
            Automorphism::new(&s, p, us).unwrap()
        };
        let a = mk(&mut r, vec![1, 0, 2]);
        let b = mk(&mut r, vec![0, 1, 2]);
        let c = mk(&mut r, vec![1, 0, 2]);
        let x = AlgebraElement::random(&s, &mut r);
        let direct = a.apply(&b.apply(&c.apply(&x)));
        assert!(a.compose(&b).compose(&c).apply(&x).distance(&direct) < 1e-12);
        assert!(a.compose(&b.compose(&c)).apply(&x).distance(&direct) < 1e-12);
    }

    #[test]
    fn bad_automorphisms() {
        let s = BlockStructure::new(vec![2, 1]).unwrap();
        assert!(Automorphism::permutation(&s, vec![1, 0]).is_err());
        assert!(Automorphism::permutation(&s, vec![0, 0]).is_err());
        let not_unitary = vec![CMatrix::identity(2, 2) * C64::new(2.0, 0.0), CMatrix::identity(1, 1)];
        assert!(Automorphism::inner(&s, not_unitary).is_err());
    }

    #[test]
    fn trivial_and_swap_actions_validate() {
        let s = BlockStructure::diagonal(2).unwrap();
        validate_action(&ActionTable::trivial(FiniteGroup::cyclic(3), s.clone())).unwrap();
        validate_action(&ActionTable::cyclic_permutation(2, s, &[1, 0]).unwrap()).unwrap();
    }

    #[test]
    fn mismatched_square_is_not_a_homomorphism() {
        // Z/4 by diag(1, i): overwrite α_2 with the identity map
        let s = BlockStructure::matrix(2).unwrap();
        let t = ActionTable::diagonal_phases(4, s.clone(), &[vec![0, 1]]).unwrap();
        validate_action(&t).unwrap();
        let mut autos = t.autos().to_vec();
        autos[2] = Automorphism::identity(&s);
        let broken = ActionTable::new(FiniteGroup::cyclic(4), s, autos).unwrap();
        assert!(matches!(validate_action(&broken), Err(Error::NotHomomorphism(..))));
    }

    #[test]
    fn commutation_at_map_level() {
        let s = BlockStructure::matrix(2).unwrap();
        let triv = ActionTable::trivial(FiniteGroup::cyclic(2), s.clone());
        assert!(actions_commute(&triv, &triv));
        let d1 = ActionTable::diagonal_phases(2, s.clone(), &[vec![0, 1]]).unwrap();
        let d2 = ActionTable::diagonal_phases(3, s.clone(), &[vec![0, 1]]).unwrap();
        assert!(actions_commute(&d1, &d2));
        // conjugation by σx and by diag(1,-1): anticommuting unitaries, commuting maps
        let sx = CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|x| C64::new(x, 0.0)));
        let flip = ActionTable::new(
            FiniteGroup::cyclic(2),
            s.clone(),
            vec![Automorphism::identity(&s), Automorphism::inner(&s, vec![sx]).unwrap()],
        )
        .unwrap();
        assert!(actions_commute(&flip, &d1));
        assert!(!actions_commute(&flip, &d2));
    }

    #[test]
    fn permutation_versus_generic_conjugation() {
        let mut r = rng();
        let s = BlockStructure::new(vec![2, 2]).unwrap();
        let swap = ActionTable::cyclic_permutation(2, s.clone(), &[1, 0]).unwrap();
        let u = vec![random_unitary(2, &mut r), random_unitary(2, &mut r)];
        let conj = Automorphism::inner(&s, u).unwrap();
        let other = ActionTable::new(
            FiniteGroup::cyclic(2),
            s.clone(),
            vec![Automorphism::identity(&s), conj.clone()],
        );
        // a random conjugation is not even an involution, so it cannot be a Z/2 action
        assert!(validate_action(&other.unwrap()).is_err());
        let swapped = swap.auto(1).compose(&conj);
        let back = conj.compose(swap.auto(1));
        assert!(swapped.map_distance(&back, &s) > 1e-3);
    }

    fn p3_system(commuting: bool) -> ActionSystem {
        let s = BlockStructure::matrix(2).unwrap();
        let g = SimplicialGraph::path(3);
        let gp = GpContext::new(
            g,
            vec![FiniteGroup::cyclic(2), FiniteGroup::cyclic(3), FiniteGroup::cyclic(2)],
        )
        .unwrap();
        let sx = CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|x| C64::new(x, 0.0)));
        let flip = ActionTable::new(
            FiniteGroup::cyclic(2),
            s.clone(),
            vec![Automorphism::identity(&s), Automorphism::inner(&s, vec![sx]).unwrap()],
        )
        .unwrap();
        let mid = if commuting {
            ActionTable::trivial(FiniteGroup::cyclic(3), s.clone())
        } else {
            ActionTable::diagonal_phases(3, s.clone(), &[vec![0, 1]]).unwrap()
        };
        let d = ActionTable::diagonal_phases(2, s.clone(), &[vec![0, 1]]).unwrap();
        ActionSystem::new(gp, s, vec![flip, mid, d]).unwrap()
    }

    #[test]
    fn setup_detects_edge_violation() {
        assert!(p3_system(true).setup().is_ok());
        let bad = p3_system(false);
        assert!(matches!(bad.setup(), Err(Error::EdgeViolation { v: 0, w: 1, .. })));
        let s = bad.gp().single(0, 1).unwrap();
        assert!(matches!(act_word(&s, &bad), Err(Error::SetupInvalid(_))));
    }

    #[test]
    fn edgeless_setup_is_vacuous() {
        let s = BlockStructure::matrix(2).unwrap();
        let gp = GpContext::new(SimplicialGraph::edgeless(2), vec![FiniteGroup::cyclic(3); 2]).unwrap();
        let t1 = ActionTable::diagonal_phases(3, s.clone(), &[vec![0, 1]]).unwrap();
        let t2 = ActionTable::trivial(FiniteGroup::cyclic(3), s.clone());
        assert!(ActionSystem::new(gp, s, vec![t1, t2]).unwrap().setup().is_ok());
    }

    #[test]
    fn act_word_basics() {
        let sys = p3_system(true);
        let s = sys.structure().clone();
        let e = act_word(&GPElement::identity(), &sys).unwrap();
        assert!(e.map_distance(&Automorphism::identity(&s), &s) < 1e-15);
        let a = sys.gp().single(2, 1).unwrap();
        let aw = act_word(&a, &sys).unwrap();
        assert!(aw.map_distance(sys.table(2).unwrap().auto(1), &s) < 1e-15);
    }

    #[test]
    fn act_word_is_representative_independent() {
        let sys = p3_system(true);
        let s = sys.structure().clone();
        for x in sys.gp().ball(3, DEFAULT_BUDGET).unwrap() {
            let base = act_word(&x, &sys).unwrap();
            for r in rearrangements(&x, sys.gp(), DEFAULT_BUDGET).unwrap() {
                assert!(sys.act_letters(&r).map_distance(&base, &s) <= 1e-12);
            }
        }
        let x = normalize(&[(1, 2), (0, 1)], sys.gp()).unwrap();
        let y = normalize(&[(0, 1), (1, 2)], sys.gp()).unwrap();
        assert_eq!(x, y);
    }
}
