//! Decision procedures for universal properties and morphism classes, generic
//! over any [`Category`].
//!
//! Pullbacks and pushouts are recognised by comparison with the canonical
//! (co)limit: a square is a pullback iff the mediating morphism from its apex
//! into the canonical apex is an isomorphism, and dually for pushouts.

use crate::category::{check_square_shape, Category, Cospan, MorphismClass, Span, Square};
use crate::error::{CatError, Result};

/// Outcome of a universal-property check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    NotCommuting,
    /// The candidate is a cone (or cocone) but the comparison map is not invertible.
    MediatorNotIso,
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }
}

/// Whether `f ∘ p = g ∘ q`.
pub fn commutes<C: Category>(cat: &C, sq: &Square<C::Mor>) -> Result<bool> {
    check_square_shape(cat, sq)?;
    Ok(cat.compose(&sq.f, &sq.p)? == cat.compose(&sq.g, &sq.q)?)
}

pub fn check_pullback<C: Category>(cat: &C, sq: &Square<C::Mor>) -> Result<Verdict> {
    if !commutes(cat, sq)? {
        return Ok(Verdict::NotCommuting);
    }
    let canon = cat.pullback(&sq.f, &sq.g)?;
    let u = cat.pullback_mediator(&canon, &sq.p, &sq.q)?;
    Ok(if cat.inverse(&u).is_some() {
        Verdict::Holds
    } else {
        Verdict::MediatorNotIso
    })
}

pub fn is_pullback<C: Category>(cat: &C, sq: &Square<C::Mor>) -> Result<bool> {
    Ok(check_pullback(cat, sq)?.holds())
}

pub fn check_pushout<C: Category>(cat: &C, sq: &Square<C::Mor>) -> Result<Verdict> {
    if !commutes(cat, sq)? {
        return Ok(Verdict::NotCommuting);
    }
    let canon = cat.pushout(&sq.p, &sq.q)?;
    let u = cat.pushout_mediator(&canon, &sq.f, &sq.g)?;
    Ok(if cat.inverse(&u).is_some() {
        Verdict::Holds
    } else {
        Verdict::MediatorNotIso
    })
}

pub fn is_pushout<C: Category>(cat: &C, sq: &Square<C::Mor>) -> Result<bool> {
    Ok(check_pushout(cat, sq)?.holds())
}

/// The unique `u` with `sq.p ∘ u = cone.left` and `sq.q ∘ u = cone.right`.
pub fn mediating_from_cone<C: Category>(
    cat: &C,
    sq: &Square<C::Mor>,
    cone: &Span<C::Mor>,
) -> Result<C::Mor> {
    if !is_pullback(cat, sq)? {
        return Err(CatError::Precondition("square is not a pullback".into()));
    }
    let cone_sq = Square {
        p: cone.left.clone(),
        q: cone.right.clone(),
        f: sq.f.clone(),
        g: sq.g.clone(),
    };
    if !commutes(cat, &cone_sq)? {
        return Err(CatError::NotACone("cone does not commute over the cospan".into()));
    }
    let canon = cat.pullback(&sq.f, &sq.g)?;
    let into_canon = cat.pullback_mediator(&canon, &cone.left, &cone.right)?;
    let apex_to_canon = cat.pullback_mediator(&canon, &sq.p, &sq.q)?;
    let back = cat
        .inverse(&apex_to_canon)
        .ok_or_else(|| CatError::Invalid("pullback comparison is not invertible".into()))?;
    cat.compose(&back, &into_canon)
}

/// The unique `u` out of the corner of the pushout `sq` with `u ∘ sq.f = cocone.left`
/// and `u ∘ sq.g = cocone.right`.
pub fn mediating_to_cocone<C: Category>(
    cat: &C,
    sq: &Square<C::Mor>,
    cocone: &Cospan<C::Mor>,
) -> Result<C::Mor> {
    if !is_pushout(cat, sq)? {
        return Err(CatError::Precondition("square is not a pushout".into()));
    }
    let cocone_sq = Square {
        p: sq.p.clone(),
        q: sq.q.clone(),
        f: cocone.left.clone(),
        g: cocone.right.clone(),
    };
    if !commutes(cat, &cocone_sq)? {
        return Err(CatError::NotACocone("cocone does not commute under the span".into()));
    }
    let canon = cat.pushout(&sq.p, &sq.q)?;
    let from_canon = cat.pushout_mediator(&canon, &cocone.left, &cocone.right)?;
    let canon_to_corner = cat.pushout_mediator(&canon, &sq.f, &sq.g)?;
    let back = cat
        .inverse(&canon_to_corner)
        .ok_or_else(|| CatError::Invalid("pushout comparison is not invertible".into()))?;
    cat.compose(&from_canon, &back)
}

pub fn equalizer_of<C: Category>(cat: &C, f: &C::Mor, g: &C::Mor) -> Result<C::Mor> {
    cat.equalizer(f, g)
}

/// The pushout of `m` along itself.
pub fn cokernel_pair<C: Category>(cat: &C, m: &C::Mor) -> Result<Cospan<C::Mor>> {
    Ok(cat.pushout(m, m)?.cospan())
}

/// The pullback of `f` along itself.
pub fn kernel_pair<C: Category>(cat: &C, f: &C::Mor) -> Result<Span<C::Mor>> {
    Ok(cat.pullback(f, f)?.span())
}

/// Whether two monos into the same object represent the same subobject.
pub fn same_subobject<C: Category>(cat: &C, m: &C::Mor, n: &C::Mor) -> bool {
    match (cat.lift_through_mono(m, n), cat.lift_through_mono(n, m)) {
        (Some(u), Some(_)) => cat.inverse(&u).is_some(),
        _ => false,
    }
}

/// A mono is regular iff it is the equalizer of its cokernel pair.
pub fn is_regular_mono<C: Category>(cat: &C, m: &C::Mor) -> Result<bool> {
    if !cat.is_mono(m) {
        return Ok(false);
    }
    let cp = cokernel_pair(cat, m)?;
    let e = cat.equalizer(&cp.left, &cp.right)?;
    Ok(same_subobject(cat, &e, m))
}

/// Coproduct `A + B` as the pushout over the initial object.
pub fn coproduct<C: Category>(cat: &C, a: &C::Obj, b: &C::Obj) -> Result<Square<C::Mor>> {
    cat.pushout(&cat.from_initial(a), &cat.from_initial(b))
}

/// Coequalizer of `u, v: P → A`, returned as the pushout square of
/// `[u, id], [v, id]: P + A → A`; both legs of the result are the coequalizing map.
pub fn coequalizer_square<C: Category>(
    cat: &C,
    u: &C::Mor,
    v: &C::Mor,
) -> Result<Square<C::Mor>> {
    let a = cat.target(u);
    let sum = coproduct(cat, &cat.source(u), &a)?;
    let id = cat.identity(&a);
    let left = cat.pushout_mediator(&sum, u, &id)?;
    let right = cat.pushout_mediator(&sum, v, &id)?;
    cat.pushout(&left, &right)
}

pub fn coequalizer<C: Category>(cat: &C, u: &C::Mor, v: &C::Mor) -> Result<C::Mor> {
    Ok(coequalizer_square(cat, u, v)?.f)
}

/// An epi is regular iff it is the coequalizer of its kernel pair.
pub fn is_regular_epi<C: Category>(cat: &C, f: &C::Mor) -> Result<bool> {
    if !cat.is_epi(f) {
        return Ok(false);
    }
    let kp = kernel_pair(cat, f)?;
    let sq = coequalizer_square(cat, &kp.left, &kp.right)?;
    let w = cat.pushout_mediator(&sq, f, f)?;
    Ok(cat.inverse(&w).is_some())
}

/// Retraction `r` with `r ∘ f = id`, by search over `homs(B, A)`.
pub fn find_retraction<C: Category>(cat: &C, f: &C::Mor, limit: usize) -> Result<Option<C::Mor>> {
    let (a, b) = (cat.source(f), cat.target(f));
    let id = cat.identity(&a);
    for r in cat.homs(&b, &a, limit)? {
        if cat.compose(&r, f)? == id {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

/// Section `s` with `f ∘ s = id`, by search over `homs(B, A)`.
pub fn find_section<C: Category>(cat: &C, f: &C::Mor, limit: usize) -> Result<Option<C::Mor>> {
    let (a, b) = (cat.source(f), cat.target(f));
    let id = cat.identity(&b);
    for s in cat.homs(&b, &a, limit)? {
        if cat.compose(f, &s)? == id {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

pub fn classify<C: Category>(cat: &C, f: &C::Mor, limit: usize) -> Result<MorphismClass> {
    if cat.inverse(f).is_some() {
        return Ok(MorphismClass {
            mono: true,
            epi: true,
            split_mono: true,
            split_epi: true,
            regular_mono: true,
            regular_epi: true,
            iso: true,
        });
    }
    let mono = cat.is_mono(f);
    let epi = cat.is_epi(f);
    Ok(MorphismClass {
        mono,
        epi,
        split_mono: mono && find_retraction(cat, f, limit)?.is_some(),
        split_epi: epi && find_section(cat, f, limit)?.is_some(),
        regular_mono: mono && is_regular_mono(cat, f)?,
        regular_epi: epi && is_regular_epi(cat, f)?,
        iso: false,
    })
}

/// Mono by left cancellation against every pair of probe morphisms into the source.
pub fn mono_by_cancellation<C: Category>(
    cat: &C,
    f: &C::Mor,
    probes: &[C::Obj],
    limit: usize,
) -> Result<bool> {
    let a = cat.source(f);
    for t in probes {
        let homs = cat.homs(t, &a, limit)?;
        let mut images = Vec::with_capacity(homs.len());
        for h in &homs {
            let img = cat.compose(f, h)?;
            if images.contains(&img) {
                return Ok(false);
            }
            images.push(img);
        }
    }
    Ok(true)
}

/// Epi by right cancellation against every pair of probe morphisms out of the target.
pub fn epi_by_cancellation<C: Category>(
    cat: &C,
    f: &C::Mor,
    probes: &[C::Obj],
    limit: usize,
) -> Result<bool> {
    let b = cat.target(f);
    for t in probes {
        let homs = cat.homs(&b, t, limit)?;
        let mut images = Vec::with_capacity(homs.len());
        for h in &homs {
            let img = cat.compose(h, f)?;
            if images.contains(&img) {
                return Ok(false);
            }
            images.push(img);
        }
    }
    Ok(true)
}

/// Both directions of the pullback pasting lemma, evaluated on a concrete pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PastingOutcome {
    /// `inner` and `outer` pullbacks ⇒ pasted square pullback.
    pub composition: bool,
    /// pasted and `outer` pullbacks ⇒ `inner` pullback.
    pub cancellation: bool,
}

impl PastingOutcome {
    pub fn holds(&self) -> bool {
        self.composition && self.cancellation
    }
}

/// The square obtained by gluing `outer` to the right of `inner` along `inner.f`.
///
/// ```text
///   D --p--> A --p'--> A'
///   |        |         |
///   q       f=q'       f'
///   v        v         v
///   B --g--> C --g'--> C'
/// ```
pub fn paste<C: Category>(
    cat: &C,
    inner: &Square<C::Mor>,
    outer: &Square<C::Mor>,
) -> Result<Square<C::Mor>> {
    if inner.f != outer.q {
        return Err(CatError::TypeMismatch(
            "outer square does not share the inner square's right edge".into(),
        ));
    }
    Ok(Square {
        p: cat.compose(&outer.p, &inner.p)?,
        q: inner.q.clone(),
        f: outer.f.clone(),
        g: cat.compose(&outer.g, &inner.g)?,
    })
}

pub fn pasting_check<C: Category>(
    cat: &C,
    inner: &Square<C::Mor>,
    outer: &Square<C::Mor>,
) -> Result<PastingOutcome> {
    let pasted = paste(cat, inner, outer)?;
    let inner_pb = is_pullback(cat, inner)?;
    let outer_pb = is_pullback(cat, outer)?;
    let pasted_pb = is_pullback(cat, &pasted)?;
    Ok(PastingOutcome {
        composition: !(inner_pb && outer_pb) || pasted_pb,
        cancellation: !(pasted_pb && outer_pb) || inner_pb,
    })
}
