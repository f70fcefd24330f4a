//! Word combinatorics for graph products of finite groups.
//!
//! Elements are stored as canonical reduced words: the lexicographically
//! least rearrangement (by vertex order) among all reduced words that
//! represent them. Equality of elements is then equality of letter lists.

mod nclength;
mod rearrange;

pub use nclength::{
    nc_length, nc_length_set, nc_length_vertices, standard_form, standard_form_candidates,
    StandardForm,
};
pub use rearrange::{
    complete_closure, down_set, is_complete, left_truncations, rearrangement_orders,
    rearrangements, right_truncations, truncation_order_leq,
};

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphgroup::{FiniteGroup, SimplicialGraph, VertexId};

/// Default cap on the number of objects any exhaustive search may visit.
pub const DEFAULT_BUDGET: usize = 100_000;

/// A single non-identity element of one vertex group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(VertexId, usize)", into = "(VertexId, usize)")]
pub struct Letter {
    pub vertex: VertexId,
    pub elem: usize,
}

impl From<(VertexId, usize)> for Letter {
    fn from((vertex, elem): (VertexId, usize)) -> Self {
        Letter { vertex, elem }
    }
}

impl From<Letter> for (VertexId, usize) {
    fn from(l: Letter) -> Self {
        (l.vertex, l.elem)
    }
}

/// Element of the graph product, as a canonical reduced letter sequence.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GPElement {
    letters: Vec<Letter>,
}

impl GPElement {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Wraps letters that are already known to be canonical.
    pub(crate) fn from_canonical(letters: Vec<Letter>) -> Self {
        GPElement { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn vertex_word(&self) -> VertexWord {
        VertexWord(self.letters.iter().map(|l| l.vertex).collect())
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.letters.iter().any(|l| l.vertex == v)
    }
}

impl fmt::Display for GPElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[{},{}]", l.vertex, l.elem)?;
        }
        write!(f, "]")
    }
}

/// A word in the vertex alphabet, without group elements.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexWord(pub Vec<VertexId>);

/// True iff whenever `v_k = v_l` with `k < l` some `v_p` strictly between
/// them is not adjacent to `v_k`.
pub fn is_reduced(w: &VertexWord, g: &SimplicialGraph) -> bool {
    let vs = &w.0;
    for k in 0..vs.len() {
        for l in (k + 1)..vs.len() {
            if vs[k] == vs[l] && !((k + 1)..l).any(|p| !g.adjacent(vs[k], vs[p])) {
                return false;
            }
        }
    }
    true
}

/// Graph, vertex groups, and the arithmetic of their graph product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GpContext {
    graph: SimplicialGraph,
    groups: Vec<FiniteGroup>,
}

impl GpContext {
    /// `groups[i]` belongs to the `i`-th vertex in sorted order.
    pub fn new(graph: SimplicialGraph, groups: Vec<FiniteGroup>) -> Result<Self> {
        if groups.len() != graph.vertices().len() {
            return Err(Error::ContextMismatch(format!(
                "{} groups for {} vertices",
                groups.len(),
                graph.vertices().len()
            )));
        }
        Ok(GpContext { graph, groups })
    }

    pub fn graph(&self) -> &SimplicialGraph {
        &self.graph
    }

    pub fn groups(&self) -> &[FiniteGroup] {
        &self.groups
    }

    pub fn group(&self, v: VertexId) -> Result<&FiniteGroup> {
        let p = self.graph.position(v).ok_or(Error::UnknownVertex(v))?;
        Ok(&self.groups[p])
    }

    #[inline]
    pub(crate) fn group_unchecked(&self, v: VertexId) -> &FiniteGroup {
        &self.groups[self.graph.position(v).expect("vertex in context")]
    }

    #[inline]
    pub fn commute(&self, v: VertexId, w: VertexId) -> bool {
        self.graph.adjacent(v, w)
    }

    /// Every non-identity letter of every vertex group.
    pub fn all_letters(&self) -> Vec<Letter> {
        let mut out = Vec::new();
        for (&v, g) in self.graph.vertices().iter().zip(&self.groups) {
            out.extend(
                g.elements()
                    .filter(|&e| e != g.identity())
                    .map(|elem| Letter { vertex: v, elem }),
            );
        }
        out
    }

    pub fn letter(&self, vertex: VertexId, elem: usize) -> Result<Letter> {
        let l = Letter { vertex, elem };
        self.check_letter(l, true)?;
        Ok(l)
    }

    fn check_letter(&self, l: Letter, forbid_identity: bool) -> Result<()> {
        let g = self.group(l.vertex)?;
        if l.elem >= g.order() || (forbid_identity && l.elem == g.identity()) {
            return Err(Error::ElementOutOfRange {
                vertex: l.vertex,
                elem: l.elem,
            });
        }
        Ok(())
    }

    /// Element given by a single letter (identity letters give the identity).
    pub fn single(&self, vertex: VertexId, elem: usize) -> Result<GPElement> {
        normalize(&[(vertex, elem)], self)
    }

    /// Canonical form of a raw letter sequence whose letters are known to be
    /// valid for this context.
    pub(crate) fn canonical(&self, raw: impl IntoIterator<Item = Letter>) -> GPElement {
        let mut word = Vec::new();
        for l in raw {
            self.push_reduced(&mut word, l);
        }
        GPElement::from_canonical(self.lex_normal(word))
    }

    /// Appends `l` to a reduced word, merging with the unique same-vertex
    /// letter that can be shuffled to the right end, if any.
    fn push_reduced(&self, word: &mut Vec<Letter>, l: Letter) {
        let g = self.group_unchecked(l.vertex);
        if l.elem == g.identity() {
            return;
        }
        for i in (0..word.len()).rev() {
            let w = word[i];
            if w.vertex == l.vertex {
                let prod = g.mul(w.elem, l.elem);
                if prod == g.identity() {
                    word.remove(i);
                } else {
                    word[i].elem = prod;
                }
                return;
            }
            if !self.commute(w.vertex, l.vertex) {
                break;
            }
        }
        word.push(l);
    }

    /// Lexicographically least rearrangement of a reduced word: repeatedly
    /// pull out the smallest-vertex letter that commutes with everything
    /// before it.
    pub(crate) fn lex_normal(&self, mut rest: Vec<Letter>) -> Vec<Letter> {
        let mut out = Vec::with_capacity(rest.len());
        while !rest.is_empty() {
            let mut best: Option<usize> = None;
            for i in 0..rest.len() {
                let free = rest[..i]
                    .iter()
                    .all(|p| self.commute(p.vertex, rest[i].vertex));
                if free && best.is_none_or(|b| rest[i].vertex < rest[b].vertex) {
                    best = Some(i);
                }
            }
            out.push(rest.remove(best.expect("first letter is always free")));
        }
        out
    }

    /// Product without context validation.
    pub fn mul(&self, x: &GPElement, y: &GPElement) -> GPElement {
        let mut word = x.letters.clone();
        for &l in &y.letters {
            self.push_reduced(&mut word, l);
        }
        GPElement::from_canonical(self.lex_normal(word))
    }

    pub fn inv(&self, x: &GPElement) -> GPElement {
        let word: Vec<Letter> = x
            .letters
            .iter()
            .rev()
            .map(|l| Letter {
                vertex: l.vertex,
                elem: self.group_unchecked(l.vertex).inv(l.elem),
            })
            .collect();
        // reversing a reduced word keeps it reduced
        GPElement::from_canonical(self.lex_normal(word))
    }

    /// Checks that `x` is a canonical element of this context.
    pub fn check_element(&self, x: &GPElement) -> Result<()> {
        for &l in &x.letters {
            self.check_letter(l, true)
                .map_err(|e| Error::ContextMismatch(format!("{x}: {e}")))?;
        }
        if self.canonical(x.letters.iter().copied()) != *x {
            return Err(Error::ContextMismatch(format!("{x} is not canonical")));
        }
        Ok(())
    }

    /// All canonical elements with at most `radius` letters, ordered by
    /// length and then lexicographically.
    pub fn ball(&self, radius: usize, budget: usize) -> Result<Vec<GPElement>> {
        let letters = self.all_letters();
        let mut out = vec![GPElement::identity()];
        let mut level = vec![GPElement::identity()];
        for len in 1..=radius {
            let mut next = BTreeSet::new();
            for w in &level {
                for &l in &letters {
                    let mut word = w.letters.clone();
                    self.push_reduced(&mut word, l);
                    if word.len() == len {
                        next.insert(GPElement::from_canonical(self.lex_normal(word)));
                    }
                }
                if out.len() + next.len() > budget {
                    return Err(Error::BudgetExceeded(budget));
                }
            }
            level = next.into_iter().collect();
            out.extend(level.iter().cloned());
        }
        Ok(out)
    }
}

/// Canonical reduced representative of a raw `(vertex, element)` sequence.
pub fn normalize(raw: &[(VertexId, usize)], ctx: &GpContext) -> Result<GPElement> {
    let letters: Vec<Letter> = raw.iter().map(|&p| Letter::from(p)).collect();
    for &l in &letters {
        ctx.check_letter(l, false)?;
    }
    Ok(ctx.canonical(letters))
}

/// Group law of the graph product.
pub fn multiply(x: &GPElement, y: &GPElement, ctx: &GpContext) -> Result<GPElement> {
    ctx.check_element(x)?;
    ctx.check_element(y)?;
    Ok(ctx.mul(x, y))
}

pub fn inverse(x: &GPElement, ctx: &GpContext) -> GPElement {
    ctx.inv(x)
}
