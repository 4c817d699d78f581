//! Brute-force reference checks, for tests only.
//!
//! Nothing here calls the (co)limit constructions or the universal-property
//! tests of the engine: cones and cocones are enumerated over every small
//! apex and mediators are counted directly. Cocones are also tested against a
//! cogenerator where one is known (2 for sets, the subobject classifier for
//! presheaves), since small apexes alone cannot separate large corners.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use crate::category::{Concrete, Square};
use crate::error::{CatError, Result};
use crate::finset::{FinFn, FinSet, FinSetCat};
use crate::multigraph::{Graph, GraphMorphism, MultigraphCat};
use crate::presheaf::{NatTrans, Presheaf, PresheafCat};
use crate::simplegraph::{SgMorphism, SimpleGraph, SimpleGraphCat};
use crate::slice::{Slice, SliceObject};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest apex enumerated, in elements (vertices plus edges for graphs).
    pub max_size: usize,
    /// Cap on any single hom enumeration.
    pub max_candidates: usize,
    pub time_cap: Duration,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_size: 4,
            max_candidates: 200_000,
            time_cap: Duration::from_secs(30),
        }
    }
}

struct Clock {
    start: Instant,
    budget: Budget,
}

impl Clock {
    fn new(budget: Budget) -> Self {
        Clock {
            start: Instant::now(),
            budget,
        }
    }

    fn tick(&self) -> Result<()> {
        if self.start.elapsed() > self.budget.time_cap {
            return Err(CatError::BudgetExceeded {
                limit: self.budget.time_cap.as_millis() as usize,
            });
        }
        Ok(())
    }
}

/// Exhaustive enumeration of small objects and of all subobjects of an object.
pub trait SmallObjects: Concrete + Sized {
    /// Every object of at most `size` elements, isomorphic copies included.
    fn objects_up_to(&self, size: usize) -> Vec<Self::Obj>;

    /// One inclusion per subobject of `x`.
    fn subobjects(&self, x: &Self::Obj) -> Vec<Self::Mor>;

    /// Extra cocone apexes for the pushout test.
    fn cogenerators(&self) -> Vec<Self::Obj> {
        Vec::new()
    }

    /// The pushout test behind [`oracle_is_pushout`].
    fn oracle_pushout(&self, sq: &Square<Self::Mor>, budget: Budget) -> Result<bool> {
        brute_force_pushout(self, sq, budget)
    }
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u64..1 << n).map(move |bits| (0..n).filter(|i| bits >> i & 1 == 1).collect())
}

/// All functions `[n] → [m]` as tables.
fn tables(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..m).map(move |v| {
                    let mut t = t.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
    }
    out
}

fn renumbering(n: usize, kept: &[usize]) -> Vec<usize> {
    let mut r = vec![usize::MAX; n];
    for (i, &v) in kept.iter().enumerate() {
        r[v] = i;
    }
    r
}

impl SmallObjects for FinSetCat {
    fn objects_up_to(&self, size: usize) -> Vec<FinSet> {
        (0..=size).map(FinSet).collect()
    }

    fn subobjects(&self, x: &FinSet) -> Vec<FinFn> {
        subsets(x.size()).map(|s| FinFn::new(x.size(), s).expect("subset")).collect()
    }

    fn cogenerators(&self) -> Vec<FinSet> {
        vec![FinSet(2)]
    }
}

impl SmallObjects for MultigraphCat {
    fn objects_up_to(&self, size: usize) -> Vec<Graph> {
        let mut out = Vec::new();
        for v in 0..=size {
            let pairs: Vec<(usize, usize)> = (0..v).flat_map(|s| (0..v).map(move |t| (s, t))).collect();
            let max_e = if v == 0 { 0 } else { size - v };
            for e in 0..=max_e {
                for choice in tables(e, pairs.len()) {
                    out.push(Graph::new(v, choice.iter().map(|&i| pairs[i]).collect()).expect("pairs"));
                }
            }
        }
        out
    }

    fn subobjects(&self, x: &Graph) -> Vec<GraphMorphism> {
        let mut out = Vec::new();
        for vs in subsets(x.vertex_count()) {
            let r = renumbering(x.vertex_count(), &vs);
            let allowed: Vec<usize> = (0..x.edge_count())
                .filter(|&e| r[x.src(e)] != usize::MAX && r[x.tgt(e)] != usize::MAX)
                .collect();
            for pick in subsets(allowed.len()) {
                let es: Vec<usize> = pick.iter().map(|&i| allowed[i]).collect();
                let g = Graph::new(vs.len(), es.iter().map(|&e| (r[x.src(e)], r[x.tgt(e)])).collect()).expect("subgraph");
                out.push(GraphMorphism::new(g, x.clone(), vs.clone(), es).expect("inclusion"));
            }
        }
        out
    }

    /// Vertices are in or out; an edge records which endpoints are in and
    /// whether the edge itself is.
    fn cogenerators(&self) -> Vec<Graph> {
        vec![Graph::new(2, vec![(0, 0), (1, 0), (0, 1), (1, 1), (1, 1)]).expect("omega")]
    }
}

impl SmallObjects for SimpleGraphCat {
    fn objects_up_to(&self, size: usize) -> Vec<SimpleGraph> {
        let mut out = Vec::new();
        for v in 0..=size {
            let pairs: Vec<(usize, usize)> = (0..v).flat_map(|s| (0..v).map(move |t| (s, t))).collect();
            for pick in subsets(pairs.len()) {
                if v + pick.len() <= size {
                    let edges: Vec<(usize, usize)> = pick.iter().map(|&i| pairs[i]).collect();
                    out.push(SimpleGraph::new(v, &edges).expect("pairs"));
                }
            }
        }
        out
    }

    fn subobjects(&self, x: &SimpleGraph) -> Vec<SgMorphism> {
        let mut out = Vec::new();
        for vs in subsets(x.vertex_count()) {
            let induced = x.induced(&vs).edges();
            for pick in subsets(induced.len()) {
                let edges: Vec<(usize, usize)> = pick.iter().map(|&i| induced[i]).collect();
                let g = SimpleGraph::new(vs.len(), &edges).expect("subgraph");
                out.push(SgMorphism::new(g, x.clone(), vs.clone()).expect("inclusion"));
            }
        }
        out
    }
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

impl SmallObjects for PresheafCat {
    fn objects_up_to(&self, size: usize) -> Vec<Presheaf> {
        let base = self.base();
        let k = base.objects().len();
        let arrows: Vec<usize> = (0..base.arrows().len()).filter(|&a| !base.is_identity(a)).collect();
        let mut out = Vec::new();
        for total in 0..=size {
            for sets in compositions(total, k) {
                let mut choices: Vec<Vec<(usize, Vec<usize>)>> = vec![Vec::new()];
                for &a in &arrows {
                    let arrow = &base.arrows()[a];
                    let ts = tables(sets[arrow.target], sets[arrow.source]);
                    choices = choices
                        .into_iter()
                        .flat_map(|c| {
                            ts.iter().map(move |t| {
                                let mut c = c.clone();
                                c.push((a, t.clone()));
                                c
                            })
                        })
                        .collect();
                }
                out.extend(choices.iter().filter_map(|c| self.presheaf(sets.clone(), c).ok()));
            }
        }
        out
    }

    fn subobjects(&self, x: &Presheaf) -> Vec<NatTrans> {
        let base = self.base();
        let offsets: Vec<usize> = x.sets().iter().scan(0, |acc, &n| {
            let o = *acc;
            *acc += n;
            Some(o)
        }).collect();
        let total: usize = x.sets().iter().sum();
        subsets(total)
            .filter_map(|flat| {
                let keep: Vec<Vec<usize>> = (0..x.sets().len())
                    .map(|w| flat.iter().filter(|&&i| i >= offsets[w] && i < offsets[w] + x.sets()[w]).map(|i| i - offsets[w]).collect())
                    .collect();
                let closed = base.arrows().iter().enumerate().all(|(a, arrow)| {
                    keep[arrow.target].iter().all(|&e| keep[arrow.source].contains(&x.action(a)[e]))
                });
                closed.then(|| self.subpresheaf(x, keep).expect("closed subset"))
            })
            .collect()
    }

    fn cogenerators(&self) -> Vec<Presheaf> {
        subobject_classifier(self).into_iter().collect()
    }
}

impl<C: SmallObjects> SmallObjects for Slice<C> {
    fn objects_up_to(&self, size: usize) -> Vec<SliceObject<C::Mor>> {
        let base = self.base();
        base.objects_up_to(size)
            .iter()
            .flat_map(|a| base.homs(a, self.over(), usize::MAX).unwrap_or_default())
            .map(|typing| SliceObject { typing })
            .collect()
    }

    fn subobjects(&self, x: &SliceObject<C::Mor>) -> Vec<Self::Mor> {
        let base = self.base();
        base.subobjects(&self.carrier(x))
            .into_iter()
            .map(|m| {
                let typing = base.compose(&x.typing, &m).expect("composable");
                self.morphism(SliceObject { typing }, x.clone(), m).expect("typed inclusion")
            })
            .collect()
    }

    /// Bounded typed cocones cannot hold two copies of an element once the
    /// legs force every type to appear, so the typed search misses failures.
    /// The forgetful functor creates colimits; test the underlying square.
    fn oracle_pushout(&self, sq: &Square<Self::Mor>, budget: Budget) -> Result<bool> {
        Ok(commutes(self, sq)? && self.base().oracle_pushout(&self.forget(sq), budget)?)
    }
}

/// Sieves on each base object, with pullback along arrows. None for bases
/// too large to enumerate.
fn subobject_classifier(cat: &PresheafCat) -> Option<Presheaf> {
    let base = cat.base();
    let n = base.objects().len();
    let into: Vec<Vec<usize>> = (0..n).map(|w| (0..n).flat_map(|v| base.arrows_between(v, w)).collect()).collect();
    if into.iter().any(|a| a.len() > 16) {
        return None;
    }
    let mut sieves: Vec<Vec<Vec<usize>>> = Vec::new();
    for arrows in &into {
        let closed: Vec<Vec<usize>> = subsets(arrows.len())
            .map(|s| s.into_iter().map(|i| arrows[i]).collect::<Vec<usize>>())
            .filter(|s| {
                s.iter().all(|&g| {
                    let v = base.arrows()[g].source;
                    into[v].iter().all(|&h| base.compose(g, h).is_some_and(|gh| s.contains(&gh)))
                })
            })
            .collect();
        sieves.push(closed);
    }
    let actions: Vec<(usize, Vec<usize>)> = (0..base.arrows().len())
        .filter(|&a| !base.is_identity(a))
        .map(|a| {
            let (x, y) = (base.arrows()[a].source, base.arrows()[a].target);
            let table = sieves[y]
                .iter()
                .map(|s| {
                    let mut back: Vec<usize> = into[x].iter().copied().filter(|&h| base.compose(a, h).is_some_and(|ah| s.contains(&ah))).collect();
                    back.sort_unstable();
                    sieves[x].iter().position(|t| {
                        let mut t = t.clone();
                        t.sort_unstable();
                        t == back
                    })
                })
                .collect::<Option<Vec<usize>>>()?;
            Some((a, table))
        })
        .collect::<Option<_>>()?;
    cat.presheaf(sieves.iter().map(Vec::len).collect(), &actions).ok()
}

type Key = Vec<Vec<usize>>;

fn key<C: Concrete>(cat: &C, f: &C::Mor) -> Key {
    cat.components(f)
}

fn homs<C: Concrete>(cat: &C, a: &C::Obj, b: &C::Obj, clock: &Clock) -> Result<Vec<C::Mor>> {
    clock.tick()?;
    cat.homs(a, b, clock.budget.max_candidates)
}

fn commutes<C: Concrete>(cat: &C, sq: &Square<C::Mor>) -> Result<bool> {
    Ok(cat.compose(&sq.f, &sq.p)? == cat.compose(&sq.g, &sq.q)?)
}

/// Every cone over `f, g` from an apex of at most `budget.max_size` elements
/// factors through `(p, q)` in exactly one way.
pub fn oracle_is_pullback<C: SmallObjects>(cat: &C, sq: &Square<C::Mor>, budget: Budget) -> Result<bool> {
    if !commutes(cat, sq)? {
        return Ok(false);
    }
    let clock = Clock::new(budget);
    let (d, a, b) = (cat.source(&sq.p), cat.target(&sq.p), cat.target(&sq.q));
    for t in cat.objects_up_to(budget.max_size) {
        let mut by_image: HashMap<Key, Vec<Key>> = HashMap::new();
        for y in homs(cat, &t, &b, &clock)? {
            by_image.entry(key(cat, &cat.compose(&sq.g, &y)?)).or_default().push(key(cat, &y));
        }
        let mut cones: HashMap<(Key, Key), usize> = HashMap::new();
        for x in homs(cat, &t, &a, &clock)? {
            if let Some(ys) = by_image.get(&key(cat, &cat.compose(&sq.f, &x)?)) {
                let kx = key(cat, &x);
                for ky in ys {
                    cones.insert((kx.clone(), ky.clone()), 0);
                }
            }
        }
        for u in homs(cat, &t, &d, &clock)? {
            let legs = (key(cat, &cat.compose(&sq.p, &u)?), key(cat, &cat.compose(&sq.q, &u)?));
            match cones.get_mut(&legs) {
                Some(n) => *n += 1,
                None => return Ok(false),
            }
        }
        if cones.values().any(|&n| n != 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Every cocone under `p, q` into an apex of at most `budget.max_size`
/// elements is reached from `(f, g)` in exactly one way.
pub fn oracle_is_pushout<C: SmallObjects>(cat: &C, sq: &Square<C::Mor>, budget: Budget) -> Result<bool> {
    cat.oracle_pushout(sq, budget)
}

fn brute_force_pushout<C: SmallObjects>(cat: &C, sq: &Square<C::Mor>, budget: Budget) -> Result<bool> {
    if !commutes(cat, sq)? {
        return Ok(false);
    }
    let clock = Clock::new(budget);
    let (a, b, c) = (cat.target(&sq.p), cat.target(&sq.q), cat.target(&sq.f));
    for t in cat.objects_up_to(budget.max_size).into_iter().chain(cat.cogenerators()) {
        let mut by_restriction: HashMap<Key, Vec<Key>> = HashMap::new();
        for y in homs(cat, &b, &t, &clock)? {
            by_restriction.entry(key(cat, &cat.compose(&y, &sq.q)?)).or_default().push(key(cat, &y));
        }
        let mut cocones: HashMap<(Key, Key), usize> = HashMap::new();
        for x in homs(cat, &a, &t, &clock)? {
            if let Some(ys) = by_restriction.get(&key(cat, &cat.compose(&x, &sq.p)?)) {
                let kx = key(cat, &x);
                for ky in ys {
                    cocones.insert((kx.clone(), ky.clone()), 0);
                }
            }
        }
        for u in homs(cat, &c, &t, &clock)? {
            let legs = (key(cat, &cat.compose(&u, &sq.f)?), key(cat, &cat.compose(&u, &sq.g)?));
            match cocones.get_mut(&legs) {
                Some(n) => *n += 1,
                None => return Ok(false),
            }
        }
        if cocones.values().any(|&n| n != 1) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A pushout complement `(k: K → Y, n: Y → X)` of `l: K → L` and `m: L → X`.
#[derive(Debug, Clone, PartialEq)]
pub struct Complement<M> {
    pub k: M,
    pub n: M,
}

/// Every complement whose context is a subobject of the host, found by trying
/// each subobject and each map from `K` into it. Subobjects that together with
/// the match miss an element of the host are skipped, since pushout injections
/// are jointly surjective. The pushout test is the brute-force one, with
/// apexes up to `budget.max_size`.
pub fn oracle_pushout_complement<C: SmallObjects>(
    cat: &C,
    l: &C::Mor,
    m: &C::Mor,
    budget: Budget,
) -> Result<Vec<Complement<C::Mor>>> {
    let clock = Clock::new(budget);
    let x = cat.target(m);
    let ml = cat.compose(m, l)?;
    let mut out = Vec::new();
    let covered = |n: &C::Mor| {
        let (cm, cn) = (cat.components(m), cat.components(n));
        cat.carrier_sizes(&x)
            .iter()
            .enumerate()
            .all(|(s, &size)| (0..size).all(|e| cm[s].contains(&e) || cn[s].contains(&e)))
    };
    for n in cat.subobjects(&x).into_iter().filter(|n| covered(n)) {
        for k in homs(cat, &cat.source(l), &cat.source(&n), &clock)? {
            if cat.compose(&n, &k)? != ml {
                continue;
            }
            let sq = Square {
                p: l.clone(),
                q: k.clone(),
                f: m.clone(),
                g: n.clone(),
            };
            if oracle_is_pushout(cat, &sq, budget)? {
                out.push(Complement { k, n: n.clone() });
            }
        }
    }
    Ok(out)
}

/// Whether an isomorphism `φ: Y1 → Y2` has `φ∘k1 = k2` and `n2∘φ = n1`.
pub fn same_complement<C: Concrete>(cat: &C, c1: &Complement<C::Mor>, c2: &Complement<C::Mor>) -> Result<bool> {
    for phi in cat.homs(&cat.source(&c1.n), &cat.source(&c2.n), usize::MAX)? {
        if cat.inverse(&phi).is_some() && cat.compose(&phi, &c1.k)? == c2.k && cat.compose(&c2.n, &phi)? == c1.n {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Representatives of the complements up to isomorphism.
pub fn complements_up_to_iso<C: Concrete>(
    cat: &C,
    all: Vec<Complement<C::Mor>>,
) -> Result<Vec<Complement<C::Mor>>> {
    let mut reps: Vec<Complement<C::Mor>> = Vec::new();
    for c in all {
        let mut seen = false;
        for r in &reps {
            if same_complement(cat, r, &c)? {
                seen = true;
                break;
            }
        }
        if !seen {
            reps.push(c);
        }
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::category::Category;
    use crate::dpo::{edge_to_fresh_vertex_rule, identity_rule};
    use crate::presheaf::parallel_pair_base;
    use crate::simplegraph::glued_edge_square;

    #[test]
    fn enumerations_have_expected_counts() {
        assert_eq!(FinSetCat.objects_up_to(3).len(), 4);
        // v=0: 1; v=1: e=0,1 -> 2; v=2: e=0 -> 1
        assert_eq!(MultigraphCat.objects_up_to(2).len(), 4);
        assert_eq!(MultigraphCat.subobjects(&Graph::path(1)).len(), 5);
        assert_eq!(SimpleGraphCat.subobjects(&SimpleGraph::new(2, &[(0, 1)]).unwrap()).len(), 5);
        let ps = PresheafCat::new(parallel_pair_base());
        assert_eq!(ps.objects_up_to(2).len(), MultigraphCat.objects_up_to(2).len());
        assert_eq!(ps.subobjects(&from_path(&ps)).len(), 5);
    }

    #[test]
    fn presheaf_omega_of_graphs_is_the_graph_omega() {
        let ps = PresheafCat::new(parallel_pair_base());
        let omega = crate::presheaf::to_graph(&ps, &ps.cogenerators()[0]).unwrap();
        assert!(MultigraphCat.find_iso(&omega, &MultigraphCat.cogenerators()[0]).is_some());
    }

    #[test]
    fn cogenerator_refutes_a_large_non_pushout() {
        // two loops on a vertex glued into a 2-cycle with loops; the host
        // identifies both vertices, so this is no pushout
        let k = Graph::new(1, vec![(0, 0), (0, 0)]).unwrap();
        let l_obj = Graph::new(2, vec![(0, 0), (0, 0), (0, 1), (1, 0)]).unwrap();
        let x = Graph::new(1, vec![(0, 0), (0, 0), (0, 0)]).unwrap();
        let y = Graph::new(1, vec![(0, 0)]).unwrap();
        let sq = Square {
            p: GraphMorphism::new(k.clone(), l_obj.clone(), vec![0], vec![0, 1]).unwrap(),
            q: GraphMorphism::new(k, y.clone(), vec![0], vec![0, 0]).unwrap(),
            f: GraphMorphism::new(l_obj, x.clone(), vec![0, 0], vec![2, 2, 0, 1]).unwrap(),
            g: GraphMorphism::new(y, x, vec![0], vec![2]).unwrap(),
        };
        assert!(!oracle_is_pushout(&MultigraphCat, &sq, Budget::default()).unwrap());
    }

    fn from_path(ps: &PresheafCat) -> Presheaf {
        crate::presheaf::from_graph(ps, &Graph::path(1)).unwrap()
    }

    #[test]
    fn identity_square_is_both() {
        let id = FinFn::identity(3);
        let sq = Square {
            p: id.clone(),
            q: id.clone(),
            f: id.clone(),
            g: id,
        };
        assert!(oracle_is_pullback(&FinSetCat, &sq, Budget::default()).unwrap());
        assert!(oracle_is_pushout(&FinSetCat, &sq, Budget::default()).unwrap());
    }

    #[test]
    fn glued_edge_is_a_pushout_but_not_a_pullback() {
        assert!(!oracle_is_pullback(&SimpleGraphCat, &glued_edge_square(), Budget::default()).unwrap());
        assert!(oracle_is_pushout(&SimpleGraphCat, &glued_edge_square(), Budget::default()).unwrap());
    }

    #[test]
    fn edge_to_fresh_vertex_complement_is_unique() {
        let rule = edge_to_fresh_vertex_rule();
        let m = GraphMorphism::new(Graph::path(1), Graph::path(2), vec![0, 1], vec![0]).unwrap();
        let all = oracle_pushout_complement(&MultigraphCat, rule.l(), &m, Budget::default()).unwrap();
        assert_eq!(complements_up_to_iso(&MultigraphCat, all).unwrap().len(), 1);
    }

    #[test]
    fn dangling_match_has_no_complement() {
        let l = GraphMorphism::new(Graph::discrete(0), Graph::discrete(1), vec![], vec![]).unwrap();
        let m = GraphMorphism::new(Graph::discrete(1), Graph::path(1), vec![0], vec![]).unwrap();
        assert!(oracle_pushout_complement(&MultigraphCat, &l, &m, Budget::default()).unwrap().is_empty());
    }

    #[test]
    fn identity_rule_complement_is_the_host() {
        let host = Graph::path(2);
        let rule = identity_rule(&MultigraphCat, &Graph::path(1));
        let m = GraphMorphism::new(Graph::path(1), host.clone(), vec![0, 1], vec![0]).unwrap();
        let all = oracle_pushout_complement(&MultigraphCat, rule.l(), &m, Budget::default()).unwrap();
        let reps = complements_up_to_iso(&MultigraphCat, all).unwrap();
        assert_eq!(reps.len(), 1);
        assert!(MultigraphCat.inverse(&reps[0].n).is_some());
    }

    #[test]
    fn time_cap_is_reported() {
        let budget = Budget {
            time_cap: Duration::ZERO,
            ..Budget::default()
        };
        let id = FinFn::identity(1);
        let sq = Square {
            p: id.clone(),
            q: id.clone(),
            f: id.clone(),
            g: id,
        };
        std::thread::sleep(Duration::from_millis(2));
        assert!(matches!(
            oracle_is_pullback(&FinSetCat, &sq, budget),
            Err(CatError::BudgetExceeded { .. })
        ));
    }
}
