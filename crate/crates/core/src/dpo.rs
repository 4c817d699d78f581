//! Double-pushout rewriting over any instance.
//!
//! ```text
//!   L <--l-- K --r--> R
//!   |m       |        |comatch
//!   v        v        v
//!   X <----- Y -----> Z
//! ```
//!
//! Both squares of every derivation are re-validated with [`is_pushout`].

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::category::{Category, Concrete, Cospan, Square, DEFAULT_HOM_LIMIT};
use crate::error::{mismatch, CatError, Result};
use crate::finset::{FinFn, FinSetCat};
use crate::multigraph::{Graph, GraphMorphism, MultigraphCat};
use crate::presheaf::{NatTrans, PresheafCat};
use crate::simplegraph::{SgMorphism, SimpleGraph, SimpleGraphCat};
use crate::slice::{Slice, SliceMorphism};
use crate::universal::{is_pullback, is_pushout, is_regular_mono};

/// An element of a host object, named by sort.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Element {
    pub sort: String,
    pub index: usize,
}

/// Host elements that violate the dangling or identification condition.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingReport {
    pub dangling: Vec<Element>,
    pub identified: Vec<Element>,
}

impl GluingReport {
    pub fn ok(&self) -> bool {
        self.dangling.is_empty() && self.identified.is_empty()
    }
}

impl fmt::Display for GluingReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |xs: &[Element]| {
            xs.iter()
                .map(|e| format!("{}#{}", e.sort, e.index))
                .collect::<Vec<_>>()
                .join(", ")
        };
        write!(f, "dangling [{}], identified [{}]", list(&self.dangling), list(&self.identified))
    }
}

/// Instances with a deletion-based pushout-complement construction.
pub trait Rewriting: Category {
    /// Gluing violations for the mono `l: K → L` and the match `m: L → X`.
    fn gluing_report(&self, l: &Self::Mor, m: &Self::Mor) -> Result<GluingReport>;

    /// `(K → Y, Y → X)` obtained by deleting `m(L ∖ l(K))` from `X`. Only meaningful
    /// when the gluing report is clean; callers validate the result.
    fn complement_candidate(&self, l: &Self::Mor, m: &Self::Mor) -> Result<(Self::Mor, Self::Mor)>;
}

/// Sorted carriers plus the structure maps between sorts: `(from, to, table)`
/// sends elements of sort `from` to elements of sort `to`.
struct Carriers<'a> {
    sorts: Vec<String>,
    sizes: Vec<usize>,
    actions: Vec<(usize, usize, &'a [usize])>,
}

/// Per sort, which host elements survive deletion, plus the violations.
fn deletion(
    host: &Carriers,
    l_sizes: &[usize],
    l: &[Vec<usize>],
    m: &[Vec<usize>],
) -> (GluingReport, Vec<Vec<bool>>) {
    let mut report = GluingReport::default();
    let mut deleted: Vec<Vec<bool>> = host.sizes.iter().map(|&n| vec![false; n]).collect();
    for s in 0..host.sorts.len() {
        let mut in_k = vec![false; l_sizes[s]];
        for &u in &l[s] {
            in_k[u] = true;
        }
        let mut preimages = vec![0usize; host.sizes[s]];
        for &x in &m[s] {
            preimages[x] += 1;
        }
        for u in (0..l_sizes[s]).filter(|&u| !in_k[u]) {
            let x = m[s][u];
            deleted[s][x] = true;
            if preimages[x] > 1 {
                let e = Element {
                    sort: host.sorts[s].clone(),
                    index: x,
                };
                if !report.identified.contains(&e) {
                    report.identified.push(e);
                }
            }
        }
    }
    for &(from, to, table) in &host.actions {
        for (e, &x) in table.iter().enumerate() {
            if !deleted[from][e] && deleted[to][x] {
                let el = Element {
                    sort: host.sorts[from].clone(),
                    index: e,
                };
                if !report.dangling.contains(&el) {
                    report.dangling.push(el);
                }
            }
        }
    }
    report.dangling.sort();
    report.identified.sort();
    let kept = deleted.into_iter().map(|d| d.into_iter().map(|x| !x).collect()).collect();
    (report, kept)
}

fn kept_indices(kept: &[bool]) -> Vec<usize> {
    (0..kept.len()).filter(|&i| kept[i]).collect()
}

fn lift_or_fail<C: Category>(cat: &C, y_to_x: &C::Mor, h: &C::Mor) -> Result<C::Mor> {
    cat.lift_through_mono(y_to_x, h)
        .ok_or_else(|| CatError::Invalid("interface does not factor through the context".into()))
}

fn check_legs<C: Category>(cat: &C, l: &C::Mor, m: &C::Mor) -> Result<()> {
    if cat.target(l) != cat.source(m) {
        return Err(mismatch("match does not start at the rule's left object"));
    }
    if !cat.is_mono(l) {
        return Err(CatError::RuleLeg { leg: "l", test: "mono" });
    }
    Ok(())
}

impl Rewriting for FinSetCat {
    fn gluing_report(&self, l: &FinFn, m: &FinFn) -> Result<GluingReport> {
        check_legs(self, l, m)?;
        let host = Carriers {
            sorts: self.sort_names(),
            sizes: vec![m.target().size()],
            actions: vec![],
        };
        Ok(deletion(&host, &[m.source().size()], &[l.table().to_vec()], &[m.table().to_vec()]).0)
    }

    fn complement_candidate(&self, l: &FinFn, m: &FinFn) -> Result<(FinFn, FinFn)> {
        check_legs(self, l, m)?;
        let host = Carriers {
            sorts: self.sort_names(),
            sizes: vec![m.target().size()],
            actions: vec![],
        };
        let (_, kept) = deletion(&host, &[m.source().size()], &[l.table().to_vec()], &[m.table().to_vec()]);
        let y_to_x = FinFn::new(m.target().size(), kept_indices(&kept[0]))?;
        let k_to_y = lift_or_fail(self, &y_to_x, &self.compose(m, l)?)?;
        Ok((k_to_y, y_to_x))
    }
}

fn graph_deletion(cat: &MultigraphCat, l: &GraphMorphism, m: &GraphMorphism) -> (GluingReport, Vec<Vec<bool>>) {
    let x = m.target();
    let (src, tgt) = (x.src_table(), x.tgt_table());
    let host = Carriers {
        sorts: cat.sort_names(),
        sizes: vec![x.vertex_count(), x.edge_count()],
        actions: vec![(1, 0, &src), (1, 0, &tgt)],
    };
    let l_obj = l.target();
    deletion(
        &host,
        &[l_obj.vertex_count(), l_obj.edge_count()],
        &cat.components(l),
        &cat.components(m),
    )
}

impl Rewriting for MultigraphCat {
    fn gluing_report(&self, l: &GraphMorphism, m: &GraphMorphism) -> Result<GluingReport> {
        check_legs(self, l, m)?;
        Ok(graph_deletion(self, l, m).0)
    }

    fn complement_candidate(&self, l: &GraphMorphism, m: &GraphMorphism) -> Result<(GraphMorphism, GraphMorphism)> {
        check_legs(self, l, m)?;
        let (_, kept) = graph_deletion(self, l, m);
        let x = m.target();
        let vs = kept_indices(&kept[0]);
        let es = kept_indices(&kept[1]);
        let mut renum = vec![usize::MAX; x.vertex_count()];
        for (i, &v) in vs.iter().enumerate() {
            renum[v] = i;
        }
        let y = Graph::new(
            vs.len(),
            es.iter().map(|&e| (renum[x.src(e)], renum[x.tgt(e)])).collect(),
        )
        .map_err(|_| CatError::Gluing(Box::new(graph_deletion(self, l, m).0)))?;
        let y_to_x = GraphMorphism::new(y, x.clone(), vs, es)?;
        let k_to_y = lift_or_fail(self, &y_to_x, &self.compose(m, l)?)?;
        Ok((k_to_y, y_to_x))
    }
}

fn presheaf_deletion(cat: &PresheafCat, l: &NatTrans, m: &NatTrans) -> (GluingReport, Vec<Vec<bool>>) {
    let base = cat.base();
    let x = m.target();
    let actions = base
        .arrows()
        .iter()
        .enumerate()
        .filter(|(a, _)| !base.is_identity(*a))
        .map(|(a, arrow)| (arrow.target, arrow.source, x.action(a)))
        .collect();
    let host = Carriers {
        sorts: cat.sort_names(),
        sizes: x.sets().to_vec(),
        actions,
    };
    deletion(&host, l.target().sets(), &cat.components(l), &cat.components(m))
}

impl Rewriting for PresheafCat {
    fn gluing_report(&self, l: &NatTrans, m: &NatTrans) -> Result<GluingReport> {
        check_legs(self, l, m)?;
        Ok(presheaf_deletion(self, l, m).0)
    }

    fn complement_candidate(&self, l: &NatTrans, m: &NatTrans) -> Result<(NatTrans, NatTrans)> {
        check_legs(self, l, m)?;
        let (_, kept) = presheaf_deletion(self, l, m);
        let y_to_x = self.subpresheaf(m.target(), kept.iter().map(|k| kept_indices(k)).collect())?;
        let k_to_y = lift_or_fail(self, &y_to_x, &self.compose(m, l)?)?;
        Ok((k_to_y, y_to_x))
    }
}

/// Simple-graph deletion: edges carry no identity, so an edge is deleted only
/// when no preserved edge of `L` lands on it.
fn simple_deletion(l: &SgMorphism, m: &SgMorphism) -> (GluingReport, Vec<bool>, Vec<(usize, usize)>) {
    let (k, lo, x) = (l.source(), l.target(), m.target());
    let mut report = GluingReport::default();
    let mut in_k = vec![false; lo.vertex_count()];
    for &u in l.vmap() {
        in_k[u] = true;
    }
    let mut preimages = vec![0usize; x.vertex_count()];
    for &v in m.vmap() {
        preimages[v] += 1;
    }
    let mut deleted_v = vec![false; x.vertex_count()];
    for u in (0..lo.vertex_count()).filter(|&u| !in_k[u]) {
        let v = m.vmap()[u];
        deleted_v[v] = true;
        if preimages[v] > 1 {
            let e = Element {
                sort: "nodes".into(),
                index: v,
            };
            if !report.identified.contains(&e) {
                report.identified.push(e);
            }
        }
    }
    let (lv, mv) = (l.vmap(), m.vmap());
    let preserved: Vec<(usize, usize)> = k.edges().iter().map(|&(a, b)| (lv[a], lv[b])).collect();
    let image_of = |(a, b): (usize, usize)| (mv[a], mv[b]);
    let kept_images: Vec<(usize, usize)> = preserved.iter().map(|&e| image_of(e)).collect();
    let deleted_e: Vec<(usize, usize)> = lo
        .edges()
        .into_iter()
        .filter(|e| !preserved.contains(e))
        .map(image_of)
        .filter(|e| !kept_images.contains(e))
        .collect();
    let x_edges = x.edges();
    for (i, &(s, t)) in x_edges.iter().enumerate() {
        if !deleted_e.contains(&(s, t)) && (deleted_v[s] || deleted_v[t]) {
            report.dangling.push(Element {
                sort: "edges".into(),
                index: i,
            });
        }
    }
    report.identified.sort();
    let kept_v: Vec<bool> = deleted_v.iter().map(|d| !d).collect();
    let kept_e = x_edges
        .into_iter()
        .filter(|&(s, t)| kept_v[s] && kept_v[t] && !deleted_e.contains(&(s, t)))
        .collect();
    (report, kept_v, kept_e)
}

impl Rewriting for SimpleGraphCat {
    fn gluing_report(&self, l: &SgMorphism, m: &SgMorphism) -> Result<GluingReport> {
        check_legs(self, l, m)?;
        Ok(simple_deletion(l, m).0)
    }

    fn complement_candidate(&self, l: &SgMorphism, m: &SgMorphism) -> Result<(SgMorphism, SgMorphism)> {
        check_legs(self, l, m)?;
        let (_, kept_v, kept_e) = simple_deletion(l, m);
        let vs = kept_indices(&kept_v);
        let mut renum = vec![usize::MAX; kept_v.len()];
        for (i, &v) in vs.iter().enumerate() {
            renum[v] = i;
        }
        let edges: Vec<(usize, usize)> = kept_e.iter().map(|&(s, t)| (renum[s], renum[t])).collect();
        let y = SimpleGraph::new(vs.len(), &edges)?;
        let y_to_x = SgMorphism::new(y, m.target().clone(), vs)?;
        let k_to_y = lift_or_fail(self, &y_to_x, &self.compose(m, l)?)?;
        Ok((k_to_y, y_to_x))
    }
}

impl<C: Rewriting> Rewriting for Slice<C> {
    fn gluing_report(&self, l: &SliceMorphism<C::Mor>, m: &SliceMorphism<C::Mor>) -> Result<GluingReport> {
        self.base().gluing_report(l.base(), m.base())
    }

    fn complement_candidate(
        &self,
        l: &SliceMorphism<C::Mor>,
        m: &SliceMorphism<C::Mor>,
    ) -> Result<(SliceMorphism<C::Mor>, SliceMorphism<C::Mor>)> {
        let (k_to_y, y_to_x) = self.base().complement_candidate(l.base(), m.base())?;
        let x = self.target(m);
        let y = self.object(self.base().compose(&x.typing, &y_to_x)?)?;
        Ok((
            self.morphism(self.source(l), y.clone(), k_to_y)?,
            self.morphism(y, x, y_to_x)?,
        ))
    }
}

/// A span `L ← K → R` of monos.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rule<M> {
    l: M,
    r: M,
    linear: bool,
}

impl<M: Clone> Rule<M> {
    pub fn l(&self) -> &M {
        &self.l
    }

    pub fn r(&self) -> &M {
        &self.r
    }

    pub fn linear(&self) -> bool {
        self.linear
    }

    /// `R ← K → L`.
    pub fn reversed(&self) -> Self {
        Rule {
            l: self.r.clone(),
            r: self.l.clone(),
            linear: self.linear,
        }
    }
}

pub fn make_rule<C: Category>(cat: &C, l: C::Mor, r: C::Mor, linear: bool) -> Result<Rule<C::Mor>> {
    if cat.source(&l) != cat.source(&r) {
        return Err(mismatch("rule legs have different sources"));
    }
    for (leg, m) in [("l", &l), ("r", &r)] {
        if !cat.is_mono(m) {
            return Err(CatError::RuleLeg { leg, test: "mono" });
        }
        if linear && !is_regular_mono(cat, m)? {
            return Err(CatError::RuleLeg { leg, test: "regular mono" });
        }
    }
    Ok(Rule { l, r, linear })
}

/// `A ← A → A`.
pub fn identity_rule<C: Category>(cat: &C, a: &C::Obj) -> Rule<C::Mor> {
    Rule {
        l: cat.identity(a),
        r: cat.identity(a),
        linear: true,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Match<M> {
    pub morphism: M,
    pub monic: bool,
}

/// Every morphism `L → host` (monos only if asked), in the instance's hom order.
pub fn find_matches<C: Category>(
    cat: &C,
    rule: &Rule<C::Mor>,
    host: &C::Obj,
    monic_only: bool,
    limit: usize,
) -> Result<Vec<Match<C::Mor>>> {
    let l = cat.target(&rule.l);
    let homs = if monic_only {
        cat.monos(&l, host, limit)?
    } else {
        cat.homs(&l, host, limit)?
    };
    Ok(homs
        .into_iter()
        .map(|m| Match {
            monic: monic_only || cat.is_mono(&m),
            morphism: m,
        })
        .collect())
}

pub fn gluing_check<C: Rewriting>(cat: &C, rule: &Rule<C::Mor>, m: &C::Mor) -> Result<GluingReport> {
    cat.gluing_report(&rule.l, m)
}

/// `(K → Y, Y → X)` completing `l` and `m` to a pushout square.
pub fn pushout_complement<C: Rewriting>(cat: &C, l: &C::Mor, m: &C::Mor) -> Result<(C::Mor, C::Mor)> {
    let report = cat.gluing_report(l, m)?;
    if !report.ok() {
        return Err(CatError::Gluing(Box::new(report)));
    }
    let (k_to_y, y_to_x) = cat.complement_candidate(l, m)?;
    let sq = Square {
        p: l.clone(),
        q: k_to_y.clone(),
        f: m.clone(),
        g: y_to_x.clone(),
    };
    if !is_pushout(cat, &sq)? {
        return Err(CatError::Invalid("constructed complement does not give a pushout".into()));
    }
    Ok((k_to_y, y_to_x))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Derivation<M> {
    pub rule: Rule<M>,
    pub matching: M,
    pub k_to_y: M,
    pub y_to_x: M,
    pub y_to_z: M,
    pub comatch: M,
}

impl<M: Clone> Derivation<M> {
    pub fn left_square(&self) -> Square<M> {
        Square {
            p: self.rule.l.clone(),
            q: self.k_to_y.clone(),
            f: self.matching.clone(),
            g: self.y_to_x.clone(),
        }
    }

    pub fn right_square(&self) -> Square<M> {
        Square {
            p: self.rule.r.clone(),
            q: self.k_to_y.clone(),
            f: self.comatch.clone(),
            g: self.y_to_z.clone(),
        }
    }

    pub fn host<C: Category<Mor = M>>(&self, cat: &C) -> C::Obj {
        cat.target(&self.matching)
    }

    pub fn context<C: Category<Mor = M>>(&self, cat: &C) -> C::Obj {
        cat.target(&self.k_to_y)
    }

    pub fn result<C: Category<Mor = M>>(&self, cat: &C) -> C::Obj {
        cat.target(&self.comatch)
    }
}

/// Checks that both squares of `d` are pushouts.
pub fn validate<C: Category>(cat: &C, d: &Derivation<C::Mor>) -> Result<()> {
    if !is_pushout(cat, &d.left_square())? {
        return Err(CatError::Invalid("left square of the derivation is not a pushout".into()));
    }
    if !is_pushout(cat, &d.right_square())? {
        return Err(CatError::Invalid("right square of the derivation is not a pushout".into()));
    }
    Ok(())
}

pub fn apply<C: Rewriting>(cat: &C, rule: &Rule<C::Mor>, m: &C::Mor) -> Result<Derivation<C::Mor>> {
    let (k_to_y, y_to_x) = pushout_complement(cat, &rule.l, m)?;
    // context first, so surviving host elements keep their positions in the result
    let po = cat.pushout(&k_to_y, &rule.r)?.transpose();
    let d = Derivation {
        rule: rule.clone(),
        matching: m.clone(),
        k_to_y,
        y_to_x,
        y_to_z: po.g,
        comatch: po.f,
    };
    validate(cat, &d)?;
    Ok(d)
}

/// The reversed rule applied at the comatch; its result is the original host.
pub fn invert<C: Category>(cat: &C, d: &Derivation<C::Mor>) -> Result<Derivation<C::Mor>> {
    if !d.rule.linear {
        return Err(CatError::Precondition("only derivations of linear rules can be inverted".into()));
    }
    let inv = Derivation {
        rule: d.rule.reversed(),
        matching: d.comatch.clone(),
        k_to_y: d.k_to_y.clone(),
        y_to_x: d.y_to_z.clone(),
        y_to_z: d.y_to_x.clone(),
        comatch: d.matching.clone(),
    };
    validate(cat, &inv)?;
    Ok(inv)
}

/// Some `u` with `into ∘ u = m`.
fn factor<C: Category>(cat: &C, into: &C::Mor, m: &C::Mor, limit: usize) -> Result<Option<C::Mor>> {
    if cat.target(into) != cat.target(m) {
        return Err(mismatch("cannot factor through a morphism with another target"));
    }
    if cat.is_mono(into) {
        return Ok(cat.lift_through_mono(into, m));
    }
    for u in cat.homs(&cat.source(m), &cat.source(into), limit)? {
        if cat.compose(into, &u)? == *m {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// `j1: L1 → Y2` and `j2: L2 → Y1` with `(Y2 → X) ∘ j1 = m1` and `(Y1 → X) ∘ j2 = m2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelWitness<M> {
    pub j1: M,
    pub j2: M,
}

pub fn parallel_independent<C: Category>(
    cat: &C,
    d1: &Derivation<C::Mor>,
    d2: &Derivation<C::Mor>,
    limit: usize,
) -> Result<Option<ParallelWitness<C::Mor>>> {
    if d1.host(cat) != d2.host(cat) {
        return Err(mismatch("derivations start from different hosts"));
    }
    let Some(j1) = factor(cat, &d2.y_to_x, &d1.matching, limit)? else {
        return Ok(None);
    };
    let Some(j2) = factor(cat, &d1.y_to_x, &d2.matching, limit)? else {
        return Ok(None);
    };
    Ok(Some(ParallelWitness { j1, j2 }))
}

/// `k1: R1 → Y2` and `k2: L2 → Y1` with `(Y2 → Z1) ∘ k1 = comatch1` and `(Y1 → Z1) ∘ k2 = m2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequentialWitness<M> {
    pub k1: M,
    pub k2: M,
}

pub fn sequential_independent<C: Category>(
    cat: &C,
    d1: &Derivation<C::Mor>,
    d2: &Derivation<C::Mor>,
    limit: usize,
) -> Result<Option<SequentialWitness<C::Mor>>> {
    if d1.result(cat) != d2.host(cat) {
        return Err(mismatch("second derivation does not start where the first ends"));
    }
    let Some(k1) = factor(cat, &d2.y_to_x, &d1.comatch, limit)? else {
        return Ok(None);
    };
    let Some(k2) = factor(cat, &d1.y_to_z, &d2.matching, limit)? else {
        return Ok(None);
    };
    Ok(Some(SequentialWitness { k1, k2 }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChurchRosser<M> {
    /// The second rule applied after `d1`.
    pub second_after_first: Derivation<M>,
    /// The first rule applied after `d2`.
    pub first_after_second: Derivation<M>,
    /// Iso between the two final results.
    pub iso: M,
}

pub fn church_rosser<C: Rewriting>(
    cat: &C,
    d1: &Derivation<C::Mor>,
    d2: &Derivation<C::Mor>,
    w: &ParallelWitness<C::Mor>,
) -> Result<ChurchRosser<C::Mor>> {
    if !d1.rule.linear || !d2.rule.linear {
        return Err(CatError::Precondition("the swap needs linear rules".into()));
    }
    if cat.compose(&d2.y_to_x, &w.j1)? != d1.matching || cat.compose(&d1.y_to_x, &w.j2)? != d2.matching {
        return Err(CatError::Precondition("independence witnesses do not factor the matches".into()));
    }
    let second = apply(cat, &d2.rule, &cat.compose(&d1.y_to_z, &w.j2)?)?;
    let first = apply(cat, &d1.rule, &cat.compose(&d2.y_to_z, &w.j1)?)?;
    let iso = cat
        .find_iso(&second.result(cat), &first.result(cat))
        .ok_or_else(|| CatError::Invalid("the two orders end in non-isomorphic objects".into()))?;
    Ok(ChurchRosser {
        second_after_first: second,
        first_after_second: first,
        iso,
    })
}

/// A composite rule together with the squares it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct ConcurrentRule<M> {
    pub rule: Rule<M>,
    pub overlap: Cospan<M>,
    /// Pushout complement of `r1` and `R1 → E`: `K1 → C1`, `C1 → E`.
    pub k1_to_c1: M,
    pub c1_to_e: M,
    /// Pushout complement of `l2` and `L2 → E`: `K2 → C2`, `C2 → E`.
    pub k2_to_c2: M,
    pub c2_to_e: M,
    /// Pushout of `l1` and `K1 → C1`, with corner `L`.
    pub left: Square<M>,
    /// Pushout of `r2` and `K2 → C2`, with corner `R`.
    pub right: Square<M>,
    /// Pullback of `C1 → E ← C2`, with apex `K`.
    pub interface: Square<M>,
}

/// The `E`-concurrent composite of `p1` and `p2`.
pub fn compose_concurrent<C: Rewriting>(
    cat: &C,
    p1: &Rule<C::Mor>,
    p2: &Rule<C::Mor>,
    overlap: &Cospan<C::Mor>,
) -> Result<ConcurrentRule<C::Mor>> {
    if !p1.linear || !p2.linear {
        return Err(CatError::Precondition("concurrent composition needs linear rules".into()));
    }
    if cat.source(&overlap.left) != cat.target(&p1.r) || cat.source(&overlap.right) != cat.target(&p2.l) {
        return Err(mismatch("overlap must run from R1 and L2"));
    }
    let named = |square: &'static str| {
        move |e: CatError| CatError::Precondition(format!("overlap square at {square}: {e}"))
    };
    let (k1_to_c1, c1_to_e) = pushout_complement(cat, &p1.r, &overlap.left).map_err(named("R1 → E"))?;
    let (k2_to_c2, c2_to_e) = pushout_complement(cat, &p2.l, &overlap.right).map_err(named("L2 → E"))?;
    let left = cat.pushout(&p1.l, &k1_to_c1)?;
    let right = cat.pushout(&p2.r, &k2_to_c2)?;
    let interface = cat.pullback(&c1_to_e, &c2_to_e)?;
    if !is_pullback(cat, &interface)? {
        return Err(CatError::Precondition("interface square is not a pullback".into()));
    }
    let l = cat.compose(&left.g, &interface.p)?;
    let r = cat.compose(&right.g, &interface.q)?;
    let rule = make_rule(cat, l, r, true)?;
    Ok(ConcurrentRule {
        rule,
        overlap: overlap.clone(),
        k1_to_c1,
        c1_to_e,
        k2_to_c2,
        c2_to_e,
        left,
        right,
        interface,
    })
}

/// The overlap of two consecutive derivations: `E` is the pushout over the
/// pullback of the comatch of `d1` and the match of `d2`, and `h: E → Z1`
/// is the induced map.
pub fn derivation_overlap<C: Category>(
    cat: &C,
    d1: &Derivation<C::Mor>,
    d2: &Derivation<C::Mor>,
) -> Result<(Cospan<C::Mor>, C::Mor)> {
    if d1.result(cat) != d2.host(cat) {
        return Err(mismatch("second derivation does not start where the first ends"));
    }
    let pb = cat.pullback(&d1.comatch, &d2.matching)?;
    let po = cat.pushout(&pb.p, &pb.q)?;
    let h = cat.pushout_mediator(&po, &d1.comatch, &d2.matching)?;
    Ok((po.cospan(), h))
}

/// The match `L → X` of the composite rule induced by `d1` and `h: E → Z1`.
pub fn concurrent_match<C: Category>(
    cat: &C,
    cr: &ConcurrentRule<C::Mor>,
    d1: &Derivation<C::Mor>,
    h: &C::Mor,
) -> Result<C::Mor> {
    let c1_to_z1 = cat.compose(h, &cr.c1_to_e)?;
    let c1_to_y1 = cat
        .lift_through_mono(&d1.y_to_z, &c1_to_z1)
        .ok_or_else(|| CatError::Precondition("overlap context does not survive the first step".into()))?;
    let c1_to_x = cat.compose(&d1.y_to_x, &c1_to_y1)?;
    cat.pushout_mediator(&cr.left, &d1.matching, &c1_to_x)
}

/// Derivations in the order they were applied, each starting where the previous ended.
pub fn apply_sequence<C: Rewriting>(
    cat: &C,
    steps: &[(Rule<C::Mor>, C::Mor)],
) -> Result<Vec<Derivation<C::Mor>>> {
    let mut out: Vec<Derivation<C::Mor>> = Vec::with_capacity(steps.len());
    for (rule, m) in steps {
        if let Some(prev) = out.last() {
            if prev.result(cat) != cat.target(m) {
                return Err(mismatch("step does not start where the previous one ended"));
            }
        }
        out.push(apply(cat, rule, m)?);
    }
    Ok(out)
}

/// Convenience: the first gluing-valid match of `rule` in `host`, if any.
pub fn first_applicable<C: Rewriting>(
    cat: &C,
    rule: &Rule<C::Mor>,
    host: &C::Obj,
) -> Result<Option<C::Mor>> {
    for m in find_matches(cat, rule, host, false, DEFAULT_HOM_LIMIT)? {
        if gluing_check(cat, rule, &m.morphism)?.ok() {
            return Ok(Some(m.morphism));
        }
    }
    Ok(None)
}

/// The production that deletes an edge between two kept vertices and adds a
/// fresh vertex with an edge into the second one.
pub fn edge_to_fresh_vertex_rule() -> Rule<GraphMorphism> {
    let k = Graph::discrete(2);
    let l = GraphMorphism::new(k.clone(), Graph::path(1), vec![0, 1], vec![]).expect("valid leg");
    let r_obj = Graph::new(3, vec![(2, 1)]).expect("valid graph");
    let r = GraphMorphism::new(k, r_obj, vec![0, 1], vec![]).expect("valid leg");
    make_rule(&MultigraphCat, l, r, true).expect("valid rule")
}
