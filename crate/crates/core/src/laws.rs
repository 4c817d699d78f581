//! Cubes, stability and exactness checks, and subobject lattices.
//!
//! A cube over a bottom square `(p, q, f, g)` with corners `D, A, B, C` has a
//! top square over `D', A', B', C'` and verticals `d: D' → D`, `a: A' → A`,
//! `b: B' → B`, `c: C' → C`. Faces are named as seen from above:
//! back `D'A'DA`, left `D'B'DB`, front `A'C'AC`, right `B'C'BC`.

use serde::{Deserialize, Serialize};

use crate::category::{Category, Square};
use crate::error::{CatError, Result};
use crate::universal::{commutes, is_pullback, is_pushout, is_regular_mono};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cube<M> {
    pub bottom: Square<M>,
    pub top: Square<M>,
    pub d: M,
    pub a: M,
    pub b: M,
    pub c: M,
}

impl<M: Clone> Cube<M> {
    pub fn back(&self) -> Square<M> {
        Square {
            p: self.top.p.clone(),
            q: self.d.clone(),
            f: self.a.clone(),
            g: self.bottom.p.clone(),
        }
    }

    pub fn left(&self) -> Square<M> {
        Square {
            p: self.top.q.clone(),
            q: self.d.clone(),
            f: self.b.clone(),
            g: self.bottom.q.clone(),
        }
    }

    pub fn front(&self) -> Square<M> {
        Square {
            p: self.top.f.clone(),
            q: self.a.clone(),
            f: self.c.clone(),
            g: self.bottom.f.clone(),
        }
    }

    pub fn right(&self) -> Square<M> {
        Square {
            p: self.top.g.clone(),
            q: self.b.clone(),
            f: self.c.clone(),
            g: self.bottom.g.clone(),
        }
    }

    pub fn faces(&self) -> [Square<M>; 6] {
        [
            self.bottom.clone(),
            self.top.clone(),
            self.back(),
            self.left(),
            self.front(),
            self.right(),
        ]
    }
}

pub fn cube_commutes<C: Category>(cat: &C, cube: &Cube<C::Mor>) -> Result<bool> {
    for face in cube.faces() {
        if !commutes(cat, &face)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The cube obtained by pulling every corner of `bottom` back along `probe: C' → C`.
/// Its vertical faces are pullbacks by construction.
pub fn stability_cube<C: Category>(cat: &C, bottom: &Square<C::Mor>, probe: &C::Mor) -> Result<Cube<C::Mor>> {
    let over_a = cat.pullback(&bottom.f, probe)?;
    let over_b = cat.pullback(&bottom.g, probe)?;
    let over_d = cat.pullback(&bottom.p, &over_a.p)?;
    let d_to_b = cat.pullback_mediator(
        &over_b,
        &cat.compose(&bottom.q, &over_d.p)?,
        &cat.compose(&over_a.q, &over_d.q)?,
    )?;
    Ok(Cube {
        top: Square {
            p: over_d.q.clone(),
            q: d_to_b,
            f: over_a.q.clone(),
            g: over_b.q.clone(),
        },
        bottom: bottom.clone(),
        d: over_d.p,
        a: over_a.p,
        b: over_b.p,
        c: probe.clone(),
    })
}

/// Indices of the probes along which the pulled-back square is not a pushout.
pub fn check_stable<C: Category>(cat: &C, bottom: &Square<C::Mor>, probes: &[C::Mor]) -> Result<Vec<usize>> {
    if !is_pushout(cat, bottom)? {
        return Err(CatError::Precondition("bottom square is not a pushout".into()));
    }
    let mut failing = Vec::new();
    for (i, probe) in probes.iter().enumerate() {
        if cat.target(probe) != cat.target(&bottom.f) {
            return Err(CatError::TypeMismatch(format!("probe {i} does not land in the pushout corner")));
        }
        let cube = stability_cube(cat, bottom, probe)?;
        if !is_pushout(cat, &cube.top)? {
            failing.push(i);
        }
    }
    Ok(failing)
}

/// For a commuting cube with pushout bottom and top and pullback back and left
/// faces: whether the front and right faces are pullbacks.
pub fn check_exact<C: Category>(cat: &C, cube: &Cube<C::Mor>) -> Result<bool> {
    if !cube_commutes(cat, cube)? {
        return Err(CatError::Precondition("cube does not commute".into()));
    }
    let pre = [
        ("bottom", is_pushout(cat, &cube.bottom)?),
        ("top", is_pushout(cat, &cube.top)?),
        ("back", is_pullback(cat, &cube.back())?),
        ("left", is_pullback(cat, &cube.left())?),
    ];
    if let Some((face, _)) = pre.iter().find(|(_, ok)| !ok) {
        let what = if matches!(*face, "bottom" | "top") { "pushout" } else { "pullback" };
        return Err(CatError::Precondition(format!("{face} face is not a {what}")));
    }
    Ok(is_pullback(cat, &cube.front())? && is_pullback(cat, &cube.right())?)
}

/// The cube with top `D =id= D -q-> B =id= B` and verticals `id, p, id, g`.
/// When `p` is mono it meets the exactness preconditions, and its front and
/// right faces are pullbacks iff `bottom` is a pullback and `g` is mono.
pub fn kernel_cube<C: Category>(cat: &C, bottom: &Square<C::Mor>) -> Cube<C::Mor> {
    let d = cat.source(&bottom.p);
    let b = cat.target(&bottom.q);
    Cube {
        top: Square {
            p: cat.identity(&d),
            q: bottom.q.clone(),
            f: bottom.q.clone(),
            g: cat.identity(&b),
        },
        bottom: bottom.clone(),
        d: cat.identity(&d),
        a: bottom.p.clone(),
        b: cat.identity(&b),
        c: bottom.g.clone(),
    }
}

/// Whether a pushout along a mono is a pullback. Without `relaxed`, one span
/// leg must be a regular mono; with it, a plain mono suffices.
pub fn check_po_is_pb<C: Category>(cat: &C, sq: &Square<C::Mor>, relaxed: bool) -> Result<bool> {
    if !is_pushout(cat, sq)? {
        return Err(CatError::Precondition("square is not a pushout".into()));
    }
    let along = |m: &C::Mor| -> Result<bool> {
        Ok(if relaxed { cat.is_mono(m) } else { is_regular_mono(cat, m)? })
    };
    if !along(&sq.p)? && !along(&sq.q)? {
        let what = if relaxed { "mono" } else { "regular mono" };
        return Err(CatError::Precondition(format!("neither span leg is a {what}")));
    }
    is_pullback(cat, sq)
}

/// A mono into a fixed object, with its regularity recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Subobject<M> {
    pub mono: M,
    pub regular: bool,
}

pub fn subobject<C: Category>(cat: &C, m: C::Mor) -> Result<Subobject<C::Mor>> {
    if !cat.is_mono(&m) {
        return Err(CatError::Precondition("a subobject needs a mono".into()));
    }
    let regular = is_regular_mono(cat, &m)?;
    Ok(Subobject { mono: m, regular })
}

/// Pullback of the two monos, included into their common target.
pub fn subobject_intersection<C: Category>(
    cat: &C,
    s1: &Subobject<C::Mor>,
    s2: &Subobject<C::Mor>,
) -> Result<(Subobject<C::Mor>, Square<C::Mor>)> {
    if cat.target(&s1.mono) != cat.target(&s2.mono) {
        return Err(CatError::TypeMismatch("subobjects of different objects".into()));
    }
    let pb = cat.pullback(&s1.mono, &s2.mono)?;
    let m = cat.compose(&s1.mono, &pb.p)?;
    Ok((subobject(cat, m)?, pb))
}

/// Pushout over the intersection, with the induced map into the common target.
/// The map is reported as a subobject; it is an error if it is not mono.
pub fn regular_subobject_union<C: Category>(
    cat: &C,
    s1: &Subobject<C::Mor>,
    s2: &Subobject<C::Mor>,
) -> Result<(Subobject<C::Mor>, Square<C::Mor>)> {
    if !s1.regular || !s2.regular {
        return Err(CatError::Precondition("unions are taken of regular subobjects".into()));
    }
    let (_, pb) = subobject_intersection(cat, s1, s2)?;
    let po = cat.pushout(&pb.p, &pb.q)?;
    let u = cat.pushout_mediator(&po, &s1.mono, &s2.mono)?;
    if !cat.is_mono(&u) {
        return Err(CatError::Invalid("the union does not embed into the ambient object".into()));
    }
    Ok((subobject(cat, u)?, po))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{FinFn, FinSetCat};
    use crate::multigraph::{Graph, GraphMorphism, MultigraphCat};
    use crate::simplegraph::{glued_edge_square, SgMorphism, SimpleGraph, SimpleGraphCat};

    #[test]
    fn identity_probe_keeps_the_pushout() {
        let sq = glued_edge_square();
        let id = SimpleGraphCat.identity(&SimpleGraphCat.target(&sq.f));
        assert!(check_stable(&SimpleGraphCat, &sq, &[id]).unwrap().is_empty());
    }

    #[test]
    fn degenerate_cube_is_exact() {
        let v = Graph::discrete(1);
        let e = Graph::path(1);
        let p = GraphMorphism::new(v.clone(), e.clone(), vec![0], vec![]).unwrap();
        let q = GraphMorphism::new(v, e, vec![1], vec![]).unwrap();
        let po = MultigraphCat.pushout(&p, &q).unwrap();
        let corner = MultigraphCat.target(&po.f);
        let cube = stability_cube(&MultigraphCat, &po, &MultigraphCat.identity(&corner)).unwrap();
        assert!(check_exact(&MultigraphCat, &cube).unwrap());
        assert!(check_exact(&MultigraphCat, &kernel_cube(&MultigraphCat, &po)).unwrap());
    }

    #[test]
    fn glued_edge_kernel_cube_is_not_exact() {
        let cube = kernel_cube(&SimpleGraphCat, &glued_edge_square());
        assert!(!check_exact(&SimpleGraphCat, &cube).unwrap());
        assert!(!is_pullback(&SimpleGraphCat, &cube.front()).unwrap());
    }

    #[test]
    fn po_is_pb_on_glued_edge_needs_the_relaxed_check() {
        assert!(matches!(check_po_is_pb(&SimpleGraphCat, &glued_edge_square(), false), Err(CatError::Precondition(_))));
        assert!(!check_po_is_pb(&SimpleGraphCat, &glued_edge_square(), true).unwrap());
    }

    #[test]
    fn finset_pushouts_along_monos_are_pullbacks() {
        let m = FinFn::new(3, vec![0, 2]).unwrap();
        let q = FinFn::new(1, vec![0, 0]).unwrap();
        assert!(check_po_is_pb(&FinSetCat, &FinSetCat.pushout(&m, &q).unwrap(), false).unwrap());
    }

    #[test]
    fn induced_subgraph_pushout_is_a_pullback() {
        let x = SimpleGraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        let sub = x.induced(&[0, 1]);
        let m = SgMorphism::new(sub.clone(), x, vec![0, 1]).unwrap();
        let q = SgMorphism::new(sub, SimpleGraph::new(1, &[(0, 0)]).unwrap(), vec![0, 0]).unwrap();
        let po = SimpleGraphCat.pushout(&m, &q).unwrap();
        assert!(check_po_is_pb(&SimpleGraphCat, &po, false).unwrap());
    }

    fn finset_sub(n: usize, elems: Vec<usize>) -> Subobject<FinFn> {
        subobject(&FinSetCat, FinFn::new(n, elems).unwrap()).unwrap()
    }

    #[test]
    fn finset_union_and_intersection() {
        let (s1, s2) = (finset_sub(4, vec![0, 1]), finset_sub(4, vec![1, 2]));
        let (i, _) = subobject_intersection(&FinSetCat, &s1, &s2).unwrap();
        assert_eq!(i.mono.table(), &[1]);
        let (u, _) = regular_subobject_union(&FinSetCat, &s1, &s2).unwrap();
        let mut image = u.mono.table().to_vec();
        image.sort();
        assert_eq!(image, [0, 1, 2]);
        assert!(u.regular);
        let (same, _) = subobject_intersection(&FinSetCat, &s1, &s1).unwrap();
        assert_eq!(same.mono.table(), s1.mono.table());
    }

    #[test]
    fn union_of_induced_subgraphs_can_be_irregular() {
        let x = SimpleGraph::new(2, &[(0, 1)]).unwrap();
        let point = SimpleGraph::discrete(1);
        let s1 = subobject(&SimpleGraphCat, SgMorphism::new(point.clone(), x.clone(), vec![0]).unwrap()).unwrap();
        let s2 = subobject(&SimpleGraphCat, SgMorphism::new(point, x, vec![1]).unwrap()).unwrap();
        assert!(s1.regular && s2.regular);
        let (i, _) = subobject_intersection(&SimpleGraphCat, &s1, &s2).unwrap();
        assert_eq!(SimpleGraphCat.source(&i.mono).vertex_count(), 0);
        let (u, _) = regular_subobject_union(&SimpleGraphCat, &s1, &s2).unwrap();
        assert!(SimpleGraphCat.is_mono(&u.mono) && !u.regular);
    }

    #[test]
    fn triangle_subgraphs_share_a_vertex() {
        let tri = Graph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        let e01 = GraphMorphism::new(Graph::path(1), tri.clone(), vec![0, 1], vec![0]).unwrap();
        let e12 = GraphMorphism::new(Graph::path(1), tri, vec![1, 2], vec![1]).unwrap();
        let (s1, s2) = (subobject(&MultigraphCat, e01).unwrap(), subobject(&MultigraphCat, e12).unwrap());
        let (i, _) = subobject_intersection(&MultigraphCat, &s1, &s2).unwrap();
        assert_eq!(i.mono.vmap(), &[1]);
        assert!(i.mono.emap().is_empty());
    }
}
