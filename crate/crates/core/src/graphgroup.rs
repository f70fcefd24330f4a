//! Simplicial graphs and finite groups stored as exhaustive tables.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex identifier. The numeric order is the total order used for
/// canonical normal forms.
pub type VertexId = usize;

/// Largest group order accepted by the presets.
pub const MAX_GROUP_ORDER: usize = 120;

/// Undirected loop-free graph describing which vertex groups commute.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawGraph", into = "RawGraph")]
pub struct SimplicialGraph {
    vertices: Vec<VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
    adjacency: Vec<Vec<bool>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGraph {
    pub vertices: Vec<VertexId>,
    #[serde(default)]
    pub edges: Vec<(VertexId, VertexId)>,
}

impl TryFrom<RawGraph> for SimplicialGraph {
    type Error = Error;
    fn try_from(raw: RawGraph) -> Result<Self> {
        SimplicialGraph::new(raw.vertices, raw.edges)
    }
}

impl From<SimplicialGraph> for RawGraph {
    fn from(g: SimplicialGraph) -> Self {
        RawGraph {
            vertices: g.vertices,
            edges: g.edges.into_iter().collect(),
        }
    }
}

/// Checks the simplicial-graph invariants on raw vertex and edge lists.
pub fn validate_graph(vertices: &[VertexId], edges: &[(VertexId, VertexId)]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for &v in vertices {
        if !seen.insert(v) {
            return Err(Error::DuplicateVertex(v));
        }
    }
    for &(a, b) in edges {
        if a == b {
            return Err(Error::LoopEdge(a));
        }
        for v in [a, b] {
            if !seen.contains(&v) {
                return Err(Error::UnknownVertex(v));
            }
        }
    }
    Ok(())
}

impl SimplicialGraph {
    pub fn new(mut vertices: Vec<VertexId>, edges: Vec<(VertexId, VertexId)>) -> Result<Self> {
        validate_graph(&vertices, &edges)?;
        vertices.sort_unstable();
        let n = vertices.len();
        let mut adjacency = vec![vec![false; n]; n];
        let mut edge_set = BTreeSet::new();
        for (a, b) in edges {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            edge_set.insert((lo, hi));
            let (i, j) = (
                vertices.binary_search(&lo).unwrap(),
                vertices.binary_search(&hi).unwrap(),
            );
            adjacency[i][j] = true;
            adjacency[j][i] = true;
        }
        Ok(SimplicialGraph {
            vertices,
            edges: edge_set,
            adjacency,
        })
    }

    /// Graph on `0..n` with no edges (free product).
    pub fn edgeless(n: usize) -> Self {
        Self::new((0..n).collect(), vec![]).unwrap()
    }

    /// Complete graph on `0..n` (direct product).
    pub fn complete(n: usize) -> Self {
        let edges = (0..n)
            .flat_map(|a| ((a + 1)..n).map(move |b| (a, b)))
            .collect();
        Self::new((0..n).collect(), edges).unwrap()
    }

    /// Path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|b| (b - 1, b)).collect();
        Self::new((0..n).collect(), edges).unwrap()
    }

    /// Complete multipartite graph `K_{n_1,...,n_k}`; vertices are numbered
    /// part by part.
    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let mut part_of = Vec::new();
        for (p, &size) in parts.iter().enumerate() {
            part_of.extend(std::iter::repeat_n(p, size));
        }
        let n = part_of.len();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                if part_of[a] != part_of[b] {
                    edges.push((a, b));
                }
            }
        }
        Self::new((0..n).collect(), edges).unwrap()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.edges.iter().copied()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Position of `v` in the sorted vertex list.
    pub fn position(&self, v: VertexId) -> Option<usize> {
        self.vertices.binary_search(&v).ok()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.position(v).is_some()
    }

    /// True iff `(v,w)` is an edge. Never true for `v == w`.
    pub fn adjacent(&self, v: VertexId, w: VertexId) -> bool {
        match (self.position(v), self.position(w)) {
            (Some(i), Some(j)) => self.adjacency[i][j],
            _ => false,
        }
    }
}

/// A finite group given by its full multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteGroup {
    order: usize,
    mult: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
}

/// Named fixture groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum GroupPreset {
    Cyclic { n: usize },
    Symmetric { n: usize },
    Dihedral { n: usize },
}

/// Exhaustively checks the group axioms.
pub fn validate_group(g: &FiniteGroup) -> Result<()> {
    let n = g.order;
    if n == 0 {
        return Err(Error::NotLatinSquare("empty group".into()));
    }
    if g.mult.len() != n * n || g.inv.len() != n || g.identity >= n {
        return Err(Error::NotLatinSquare("table dimensions".into()));
    }
    if let Some(&bad) = g.mult.iter().find(|&&x| x >= n) {
        return Err(Error::NotLatinSquare(format!("entry {bad} out of range")));
    }
    for a in 0..n {
        let mut row = vec![false; n];
        let mut col = vec![false; n];
        for b in 0..n {
            row[g.mult[a * n + b]] = true;
            col[g.mult[b * n + a]] = true;
        }
        if row.iter().any(|x| !x) {
            return Err(Error::NotLatinSquare(format!("row {a}")));
        }
        if col.iter().any(|x| !x) {
            return Err(Error::NotLatinSquare(format!("column {a}")));
        }
    }
    let e = g.identity;
    for a in 0..n {
        if g.mult[e * n + a] != a || g.mult[a * n + e] != a {
            return Err(Error::BadIdentity(e));
        }
    }
    for a in 0..n {
        let ia = g.inv[a];
        if ia >= n || g.mult[ia * n + a] != e || g.mult[a * n + ia] != e {
            return Err(Error::BadInverse(a));
        }
    }
    for a in 0..n {
        for b in 0..n {
            let ab = g.mult[a * n + b];
            for c in 0..n {
                if g.mult[ab * n + c] != g.mult[a * n + g.mult[b * n + c]] {
                    return Err(Error::NotAssociative(a, b, c));
                }
            }
        }
    }
    Ok(())
}

impl FiniteGroup {
    /// Builds a group from explicit parts and validates it.
    pub fn new(mult: Vec<Vec<usize>>, identity: usize, inv: Vec<usize>) -> Result<Self> {
        let order = mult.len();
        if mult.iter().any(|r| r.len() != order) {
            return Err(Error::NotLatinSquare("table is not square".into()));
        }
        let g = FiniteGroup {
            order,
            mult: mult.into_iter().flatten().collect(),
            identity,
            inv,
        };
        validate_group(&g)?;
        Ok(g)
    }

    /// Builds a group from a bare multiplication table, locating the
    /// identity and the inverses before validating.
    pub fn from_table(mult: Vec<Vec<usize>>) -> Result<Self> {
        let n = mult.len();
        if n == 0 || mult.iter().any(|r| r.len() != n) {
            return Err(Error::NotLatinSquare("table is not square".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|a| mult[e][a] == a && mult[a][e] == a))
            .ok_or_else(|| {
                // Distinguish a broken Latin square from a missing identity.
                let flat = FiniteGroup {
                    order: n,
                    mult: mult.iter().flatten().copied().collect(),
                    identity: 0,
                    inv: (0..n).collect(),
                };
                match validate_group(&flat) {
                    Err(e @ Error::NotLatinSquare(_)) => e,
                    _ => Error::BadIdentity(0),
                }
            })?;
        let inv = (0..n)
            .map(|a| (0..n).find(|&b| mult[a][b] == identity).unwrap_or(a))
            .collect();
        Self::new(mult, identity, inv)
    }

    pub fn preset(kind: GroupPreset) -> Result<Self> {
        match kind {
            GroupPreset::Cyclic { n } => {
                check_order(n)?;
                Ok(Self::cyclic_unchecked(n))
            }
            GroupPreset::Dihedral { n } => {
                if n == 0 {
                    return Err(Error::TooLarge(0, MAX_GROUP_ORDER));
                }
                check_order(2 * n)?;
                let table = (0..2 * n)
                    .map(|x| {
                        let (a, f) = (x % n, x / n);
                        (0..2 * n)
                            .map(|y| {
                                let (b, g) = (y % n, y / n);
                                let k = if f == 0 { (a + b) % n } else { (a + n - b) % n };
                                k + n * ((f + g) % 2)
                            })
                            .collect()
                    })
                    .collect();
                Self::from_table(table)
            }
            GroupPreset::Symmetric { n } => {
                let order = (1..=n).product::<usize>();
                check_order(order)?;
                let perms = permutations(n);
                let index = |p: &[usize]| perms.iter().position(|q| q == p).unwrap();
                let table = perms
                    .iter()
                    .map(|p| {
                        perms
                            .iter()
                            .map(|q| {
                                let pq: Vec<usize> = (0..n).map(|i| p[q[i]]).collect();
                                index(&pq)
                            })
                            .collect()
                    })
                    .collect();
                Self::from_table(table)
            }
        }
    }

    pub fn cyclic(n: usize) -> Self {
        Self::preset(GroupPreset::Cyclic { n }).expect("cyclic order within bounds")
    }

    fn cyclic_unchecked(n: usize) -> Self {
        let mult = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a + b) % n))
            .collect();
        let inv = (0..n).map(|a| (n - a) % n).collect();
        FiniteGroup {
            order: n,
            mult,
            identity: 0,
            inv,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order
    }

    /// Multiplication table as nested rows.
    pub fn table(&self) -> Vec<Vec<usize>> {
        self.mult.chunks(self.order).map(|r| r.to_vec()).collect()
    }
}

fn check_order(order: usize) -> Result<()> {
    if order == 0 || order > MAX_GROUP_ORDER {
        Err(Error::TooLarge(order, MAX_GROUP_ORDER))
    } else {
        Ok(())
    }
}

/// All permutations of `0..n` in lexicographic order (identity first).
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_is_simplicial() {
        let g = SimplicialGraph::complete(3);
        assert_eq!(g.num_edges(), 3);
        assert!(g.adjacent(0, 2) && g.adjacent(2, 0));
        assert!(!g.adjacent(1, 1));
    }

    #[test]
    fn loop_edge_rejected() {
        assert_eq!(
            SimplicialGraph::new(vec![0, 1], vec![(1, 1)]),
            Err(Error::LoopEdge(1))
        );
        assert_eq!(
            SimplicialGraph::new(vec![0, 1], vec![(0, 7)]),
            Err(Error::UnknownVertex(7))
        );
    }

    #[test]
    fn k123_has_eleven_edges() {
        let g = SimplicialGraph::complete_multipartite(&[1, 2, 3]);
        assert_eq!(g.vertices().len(), 6);
        assert_eq!(g.num_edges(), 11);
        // same part, not adjacent
        assert!(!g.adjacent(1, 2));
        assert!(!g.adjacent(3, 5));
        assert!(g.adjacent(0, 5));
    }

    #[test]
    fn presets_validate() {
        assert_eq!(FiniteGroup::cyclic(2).order(), 2);
        let z3 = FiniteGroup::cyclic(3);
        assert!(validate_group(&z3).is_ok());
        let s3 = FiniteGroup::preset(GroupPreset::Symmetric { n: 3 }).unwrap();
        assert_eq!(s3.order(), 6);
        assert_eq!(s3.identity(), 0);
        assert!(matches!(
            FiniteGroup::preset(GroupPreset::Symmetric { n: 6 }),
            Err(Error::TooLarge(720, _))
        ));
        assert!(FiniteGroup::preset(GroupPreset::Symmetric { n: 5 }).is_ok());
    }

    #[test]
    fn constant_table_is_not_latin() {
        let err = FiniteGroup::from_table(vec![vec![0, 0], vec![0, 0]]).unwrap_err();
        assert!(matches!(err, Error::NotLatinSquare(_)), "{err:?}");
    }

    #[test]
    fn wrong_inverse_rejected() {
        let z3 = FiniteGroup::cyclic(3);
        let err = FiniteGroup::new(z3.table(), 0, vec![0, 1, 2]).unwrap_err();
        assert_eq!(err, Error::BadInverse(1));
    }

    #[test]
    fn non_associative_latin_square_rejected() {
        // Latin square with identity 0 that is not a group (order 5 loop).
        let t = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        let err = FiniteGroup::from_table(t).unwrap_err();
        assert!(matches!(err, Error::NotAssociative(..)), "{err:?}");
    }

    /// Brute-force isomorphism search, independent of how presets are built.
    fn isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
        if g.order() != h.order() {
            return false;
        }
        permutations(g.order()).into_iter().any(|phi| {
            g.elements()
                .all(|a| g.elements().all(|b| phi[g.mul(a, b)] == h.mul(phi[a], phi[b])))
        })
    }

    #[test]
    fn dihedral_three_is_s3() {
        let d3 = FiniteGroup::preset(GroupPreset::Dihedral { n: 3 }).unwrap();
        let s3 = FiniteGroup::preset(GroupPreset::Symmetric { n: 3 }).unwrap();
        assert_eq!(d3.order(), 6);
        assert!(isomorphic(&d3, &s3));
        assert!(!isomorphic(&FiniteGroup::cyclic(6), &s3));
    }

    #[test]
    fn s3_is_composition_of_permutations() {
        let s3 = FiniteGroup::preset(GroupPreset::Symmetric { n: 3 }).unwrap();
        let perms = permutations(3);
        for a in 0..6 {
            for b in 0..6 {
                let comp: Vec<usize> = (0..3).map(|i| perms[a][perms[b][i]]).collect();
                assert_eq!(perms[s3.mul(a, b)], comp);
            }
        }
    }

    #[test]
    fn graph_serde_roundtrip() {
        let g = SimplicialGraph::path(3);
        let s = serde_json::to_string(&g).unwrap();
        let back: SimplicialGraph = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
        let bad: std::result::Result<SimplicialGraph, _> =
            serde_json::from_str(r#"{"vertices":[0,1],"edges":[[1,1]]}"#);
        assert!(bad.is_err());
    }
}
