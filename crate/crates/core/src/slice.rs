//! The slice `C/X` of any instance over a fixed object `X`.
//!
//! Limits and colimits are computed in the base; typings of apexes and corners
//! are induced. Typed graphs are `Slice<MultigraphCat>`.

use serde::{Deserialize, Serialize};

use crate::category::{Category, Concrete, Square};
use crate::error::{mismatch, CatError, Result};

/// An object of the slice: a typing morphism `A → X`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceObject<M> {
    pub typing: M,
}

/// A base morphism `h: A → B` with `t_B ∘ h = t_A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SliceMorphism<M> {
    source: SliceObject<M>,
    target: SliceObject<M>,
    base: M,
}

impl<M> SliceMorphism<M> {
    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn source(&self) -> &SliceObject<M> {
        &self.source
    }

    pub fn target(&self) -> &SliceObject<M> {
        &self.target
    }
}

#[derive(Debug, Clone)]
pub struct Slice<C: Category> {
    base: C,
    over: C::Obj,
    /// Element names of `over`, used when encoding typings.
    over_labels: Option<Vec<Vec<String>>>,
}

impl<C: Category> Slice<C> {
    pub fn new(base: C, over: C::Obj) -> Self {
        Slice {
            base,
            over,
            over_labels: None,
        }
    }

    pub fn labelled(base: C, over: C::Obj, labels: Vec<Vec<String>>) -> Self {
        Slice {
            base,
            over,
            over_labels: Some(labels),
        }
    }

    pub fn over_labels(&self) -> Option<&Vec<Vec<String>>> {
        self.over_labels.as_ref()
    }

    pub fn base(&self) -> &C {
        &self.base
    }

    pub fn over(&self) -> &C::Obj {
        &self.over
    }

    pub fn object(&self, typing: C::Mor) -> Result<SliceObject<C::Mor>> {
        if self.base.target(&typing) != self.over {
            return Err(mismatch("typing does not land in the slice object"));
        }
        Ok(SliceObject { typing })
    }

    pub fn carrier(&self, a: &SliceObject<C::Mor>) -> C::Obj {
        self.base.source(&a.typing)
    }

    pub fn morphism(
        &self,
        source: SliceObject<C::Mor>,
        target: SliceObject<C::Mor>,
        base: C::Mor,
    ) -> Result<SliceMorphism<C::Mor>> {
        if self.base.source(&base) != self.carrier(&source) || self.base.target(&base) != self.carrier(&target) {
            return Err(mismatch("base morphism does not connect the carriers"));
        }
        if self.base.compose(&target.typing, &base)? != source.typing {
            return Err(CatError::Invalid("morphism does not respect the typings".into()));
        }
        Ok(SliceMorphism { source, target, base })
    }

    /// Forgets a slice square to the base.
    pub fn forget(&self, sq: &Square<SliceMorphism<C::Mor>>) -> Square<C::Mor> {
        Square {
            p: sq.p.base.clone(),
            q: sq.q.base.clone(),
            f: sq.f.base.clone(),
            g: sq.g.base.clone(),
        }
    }

    fn typed(&self, base: C::Mor, target: &SliceObject<C::Mor>) -> Result<SliceMorphism<C::Mor>> {
        let typing = self.base.compose(&target.typing, &base)?;
        Ok(SliceMorphism {
            source: SliceObject { typing },
            target: target.clone(),
            base,
        })
    }
}

impl<C: Category> Category for Slice<C> {
    type Obj = SliceObject<C::Mor>;
    type Mor = SliceMorphism<C::Mor>;

    fn source(&self, f: &Self::Mor) -> Self::Obj {
        f.source.clone()
    }

    fn target(&self, f: &Self::Mor) -> Self::Obj {
        f.target.clone()
    }

    fn identity(&self, a: &Self::Obj) -> Self::Mor {
        SliceMorphism {
            source: a.clone(),
            target: a.clone(),
            base: self.base.identity(&self.carrier(a)),
        }
    }

    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor> {
        if f.target != g.source {
            return Err(mismatch("slice morphisms are not composable"));
        }
        Ok(SliceMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            base: self.base.compose(&g.base, &f.base)?,
        })
    }

    fn size(&self, a: &Self::Obj) -> usize {
        self.base.size(&self.carrier(a))
    }

    fn initial(&self) -> Self::Obj {
        SliceObject {
            typing: self.base.from_initial(&self.over),
        }
    }

    fn from_initial(&self, a: &Self::Obj) -> Self::Mor {
        SliceMorphism {
            source: self.initial(),
            target: a.clone(),
            base: self.base.from_initial(&self.carrier(a)),
        }
    }

    fn homs(&self, a: &Self::Obj, b: &Self::Obj, limit: usize) -> Result<Vec<Self::Mor>> {
        let mut out = Vec::new();
        for h in self.base.homs(&self.carrier(a), &self.carrier(b), limit)? {
            if self.base.compose(&b.typing, &h)? == a.typing {
                out.push(SliceMorphism {
                    source: a.clone(),
                    target: b.clone(),
                    base: h,
                });
            }
        }
        Ok(out)
    }

    fn monos(&self, a: &Self::Obj, b: &Self::Obj, limit: usize) -> Result<Vec<Self::Mor>> {
        let mut out = Vec::new();
        for h in self.base.monos(&self.carrier(a), &self.carrier(b), limit)? {
            if self.base.compose(&b.typing, &h)? == a.typing {
                out.push(SliceMorphism {
                    source: a.clone(),
                    target: b.clone(),
                    base: h,
                });
            }
        }
        Ok(out)
    }

    fn is_mono(&self, f: &Self::Mor) -> bool {
        self.base.is_mono(&f.base)
    }

    fn is_epi(&self, f: &Self::Mor) -> bool {
        self.base.is_epi(&f.base)
    }

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor> {
        Some(SliceMorphism {
            source: f.target.clone(),
            target: f.source.clone(),
            base: self.base.inverse(&f.base)?,
        })
    }

    fn pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Square<Self::Mor>> {
        if f.target != g.target {
            return Err(mismatch("cospan legs have different targets"));
        }
        let pb = self.base.pullback(&f.base, &g.base)?;
        Ok(Square {
            p: self.typed(pb.p, &f.source)?,
            q: self.typed(pb.q, &g.source)?,
            f: f.clone(),
            g: g.clone(),
        })
    }

    fn pullback_mediator(&self, pb: &Square<Self::Mor>, p: &Self::Mor, q: &Self::Mor) -> Result<Self::Mor> {
        let u = self.base.pullback_mediator(&self.forget(pb), &p.base, &q.base)?;
        Ok(SliceMorphism {
            source: p.source.clone(),
            target: pb.p.source.clone(),
            base: u,
        })
    }

    fn pushout(&self, p: &Self::Mor, q: &Self::Mor) -> Result<Square<Self::Mor>> {
        if p.source != q.source {
            return Err(mismatch("span legs have different sources"));
        }
        let po = self.base.pushout(&p.base, &q.base)?;
        let typing = self.base.pushout_mediator(&po, &p.target.typing, &q.target.typing)?;
        let corner = SliceObject { typing };
        Ok(Square {
            p: p.clone(),
            q: q.clone(),
            f: SliceMorphism {
                source: p.target.clone(),
                target: corner.clone(),
                base: po.f,
            },
            g: SliceMorphism {
                source: q.target.clone(),
                target: corner,
                base: po.g,
            },
        })
    }

    fn pushout_mediator(&self, po: &Square<Self::Mor>, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        if f.target != g.target {
            return Err(CatError::NotACocone("cocone legs have different targets".into()));
        }
        let u = self.base.pushout_mediator(&self.forget(po), &f.base, &g.base)?;
        Ok(SliceMorphism {
            source: po.f.target.clone(),
            target: f.target.clone(),
            base: u,
        })
    }

    fn equalizer(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor> {
        if f.source != g.source || f.target != g.target {
            return Err(mismatch("equalizer of non-parallel pair"));
        }
        let e = self.base.equalizer(&f.base, &g.base)?;
        self.typed(e, &f.source)
    }

    fn lift_through_mono(&self, e: &Self::Mor, h: &Self::Mor) -> Option<Self::Mor> {
        if e.target != h.target {
            return None;
        }
        Some(SliceMorphism {
            source: h.source.clone(),
            target: e.source.clone(),
            base: self.base.lift_through_mono(&e.base, &h.base)?,
        })
    }
}

impl<C: Concrete> Concrete for Slice<C> {
    fn sort_names(&self) -> Vec<String> {
        self.base.sort_names()
    }

    fn carrier_sizes(&self, a: &Self::Obj) -> Vec<usize> {
        self.base.carrier_sizes(&self.carrier(a))
    }

    fn components(&self, f: &Self::Mor) -> Vec<Vec<usize>> {
        self.base.components(&f.base)
    }
}
