//! The interface every concrete category instance implements, plus the
//! diagram shapes (spans, cospans, squares) the rest of the crate is phrased in.
//!
//! Morphisms carry their own source and target objects, so a diagram is fully
//! described by its arrows.

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{CatError, Result};

/// Default cap on the number of morphisms a single hom enumeration may produce.
pub const DEFAULT_HOM_LIMIT: usize = 200_000;

/// A finite, decidable category with canonical limits and colimits.
///
/// Implementations must be pure: every method is a function of its arguments.
pub trait Category {
    type Obj: Clone + PartialEq + Debug;
    type Mor: Clone + PartialEq + Debug;

    fn source(&self, f: &Self::Mor) -> Self::Obj;
    fn target(&self, f: &Self::Mor) -> Self::Obj;
    fn identity(&self, a: &Self::Obj) -> Self::Mor;

    /// `g ∘ f`.
    fn compose(&self, g: &Self::Mor, f: &Self::Mor) -> Result<Self::Mor>;

    /// Number of elements, summed over all sorts. Used for budgets.
    fn size(&self, a: &Self::Obj) -> usize;

    fn initial(&self) -> Self::Obj;

    /// The unique morphism out of the initial object.
    fn from_initial(&self, a: &Self::Obj) -> Self::Mor {
        self.homs(&self.initial(), a, 1)
            .ok()
            .and_then(|mut v| v.pop())
            .expect("initial object has exactly one morphism to every object")
    }

    /// Every morphism `a → b`, duplicate free, in lexicographic order of image tables.
    fn homs(&self, a: &Self::Obj, b: &Self::Obj, limit: usize) -> Result<Vec<Self::Mor>>;

    /// Every mono `a → b`.
    fn monos(&self, a: &Self::Obj, b: &Self::Obj, limit: usize) -> Result<Vec<Self::Mor>> {
        Ok(self
            .homs(a, b, limit)?
            .into_iter()
            .filter(|f| self.is_mono(f))
            .collect())
    }

    /// Structural characterisation of monos.
    fn is_mono(&self, f: &Self::Mor) -> bool;
    /// Structural characterisation of epis.
    fn is_epi(&self, f: &Self::Mor) -> bool;

    fn inverse(&self, f: &Self::Mor) -> Option<Self::Mor>;

    fn find_iso(&self, a: &Self::Obj, b: &Self::Obj) -> Option<Self::Mor> {
        self.homs(a, b, DEFAULT_HOM_LIMIT)
            .ok()?
            .into_iter()
            .find(|f| self.inverse(f).is_some())
    }

    /// Canonical pullback of the cospan `f: A → C ← B :g`.
    fn pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Square<Self::Mor>>;

    /// The morphism from the apex of the cone `(p, q)` into the apex of `pb`,
    /// where `pb` is a square produced by [`Category::pullback`].
    fn pullback_mediator(
        &self,
        pb: &Square<Self::Mor>,
        p: &Self::Mor,
        q: &Self::Mor,
    ) -> Result<Self::Mor>;

    /// Canonical pushout of the span `p: A ← D → B :q`.
    fn pushout(&self, p: &Self::Mor, q: &Self::Mor) -> Result<Square<Self::Mor>>;

    /// The morphism from the corner of `po` (produced by [`Category::pushout`])
    /// into the tip of the cocone `(f, g)`.
    fn pushout_mediator(
        &self,
        po: &Square<Self::Mor>,
        f: &Self::Mor,
        g: &Self::Mor,
    ) -> Result<Self::Mor>;

    /// Equalizer `e: E → A` of the parallel pair `f, g: A → B`.
    fn equalizer(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;

    /// Given a mono `e: E → X` and `h: T → X`, the unique `u` with `e ∘ u = h`, if any.
    fn lift_through_mono(&self, e: &Self::Mor, h: &Self::Mor) -> Option<Self::Mor>;
}

/// Instances whose objects are families of finite sets ("sorts") and whose
/// morphisms are sort-indexed functions.
pub trait Concrete: Category {
    fn sort_names(&self) -> Vec<String>;
    fn carrier_sizes(&self, a: &Self::Obj) -> Vec<usize>;
    fn components(&self, f: &Self::Mor) -> Vec<Vec<usize>>;
}

/// `left: C → A`, `right: C → B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span<M> {
    pub left: M,
    pub right: M,
}

/// `left: A → C`, `right: B → C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cospan<M> {
    pub left: M,
    pub right: M,
}

/// A (not necessarily commuting) square
///
/// ```text
///   D --p--> A
///   |        |
///   q        f
///   v        v
///   B --g--> C
/// ```
///
/// Read as a pullback candidate, `D` is the apex over the cospan `(f, g)`.
/// Read as a pushout candidate, `C` is the corner under the span `(p, q)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Square<M> {
    pub p: M,
    pub q: M,
    pub f: M,
    pub g: M,
}

impl<M: Clone> Square<M> {
    pub fn span(&self) -> Span<M> {
        Span {
            left: self.p.clone(),
            right: self.q.clone(),
        }
    }

    pub fn cospan(&self) -> Cospan<M> {
        Cospan {
            left: self.f.clone(),
            right: self.g.clone(),
        }
    }

    /// Mirror along the diagonal: swaps the roles of `A` and `B`.
    pub fn transpose(&self) -> Self {
        Square {
            p: self.q.clone(),
            q: self.p.clone(),
            f: self.g.clone(),
            g: self.f.clone(),
        }
    }
}

/// The objects `(D, A, B, C)` of a square.
pub fn square_objects<C: Category>(cat: &C, sq: &Square<C::Mor>) -> [C::Obj; 4] {
    [
        cat.source(&sq.p),
        cat.target(&sq.p),
        cat.target(&sq.q),
        cat.target(&sq.f),
    ]
}

/// Checks that the four legs of a square line up.
pub fn check_square_shape<C: Category>(cat: &C, sq: &Square<C::Mor>) -> Result<()> {
    if cat.source(&sq.p) != cat.source(&sq.q) {
        return Err(CatError::TypeMismatch("p and q have different sources".into()));
    }
    if cat.target(&sq.p) != cat.source(&sq.f) {
        return Err(CatError::TypeMismatch("f does not start where p ends".into()));
    }
    if cat.target(&sq.q) != cat.source(&sq.g) {
        return Err(CatError::TypeMismatch("g does not start where q ends".into()));
    }
    if cat.target(&sq.f) != cat.target(&sq.g) {
        return Err(CatError::TypeMismatch("f and g have different targets".into()));
    }
    Ok(())
}

/// Membership flags of a morphism in the mono/epi hierarchies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MorphismClass {
    pub mono: bool,
    pub epi: bool,
    pub split_mono: bool,
    pub split_epi: bool,
    pub regular_mono: bool,
    pub regular_epi: bool,
    pub iso: bool,
}

impl MorphismClass {
    /// Whether the flags respect `iso ⇒ everything`, `split ⇒ regular ⇒ plain`.
    pub fn respects_hierarchy(&self) -> bool {
        let all = self.mono
            && self.epi
            && self.split_mono
            && self.split_epi
            && self.regular_mono
            && self.regular_epi;
        (!self.iso || all)
            && (!self.split_mono || self.regular_mono)
            && (!self.regular_mono || self.mono)
            && (!self.split_epi || self.regular_epi)
            && (!self.regular_epi || self.epi)
    }
}
