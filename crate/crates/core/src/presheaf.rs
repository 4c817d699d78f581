//! Finite presheaves over a finite base category, with pointwise limits and
//! colimits.
//!
//! A base category is given by a full composition table. Directed multigraphs
//! are presheaves over [`parallel_pair_base`]; [`to_graph`] and [`from_graph`]
//! translate between the two presentations.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::category::{Category, Concrete, Square};
use crate::error::{mismatch, CatError, Result};
use crate::finset::{
    compose_tables, copair_tables, invert_table, is_injective, is_surjective, lift_table,
    pair_lookup, pullback_pairs, pushout_tables,
};
use crate::multigraph::{Graph, GraphMorphism};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub name: String,
    pub source: usize,
    pub target: usize,
}

/// A finite category presented by its complete composition table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteBaseCategory {
    objects: Vec<String>,
    arrows: Vec<Arrow>,
    identities: Vec<usize>,
    /// `compose[g][f] = g ∘ f` whenever `f` ends where `g` starts.
    compose: Vec<Vec<Option<usize>>>,
}

impl FiniteBaseCategory {
    /// `compositions` lists triples `(g, f, g ∘ f)`; every composable pair must appear.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<Arrow>,
        identities: Vec<usize>,
        compositions: &[(usize, usize, usize)],
    ) -> Result<Self> {
        let n = arrows.len();
        let bad = |msg: String| Err(CatError::Invalid(msg));
        if identities.len() != objects.len() {
            return bad("one identity per object is required".into());
        }
        if let Some(a) = arrows.iter().find(|a| a.source >= objects.len() || a.target >= objects.len()) {
            return bad(format!("arrow {} has an unknown endpoint", a.name));
        }
        for (x, &i) in identities.iter().enumerate() {
            if i >= n || arrows[i].source != x || arrows[i].target != x {
                return bad(format!("identity of object {} is not an endomorphism of it", objects[x]));
            }
        }
        let mut compose = vec![vec![None; n]; n];
        for &(g, f, h) in compositions {
            if g >= n || f >= n || h >= n {
                return bad("composition entry refers to an unknown arrow".into());
            }
            if arrows[f].target != arrows[g].source {
                return bad(format!("{} ∘ {} is not composable", arrows[g].name, arrows[f].name));
            }
            if arrows[h].source != arrows[f].source || arrows[h].target != arrows[g].target {
                return bad(format!("{} ∘ {} has the wrong type", arrows[g].name, arrows[f].name));
            }
            if compose[g][f].is_some_and(|prev| prev != h) {
                return bad(format!("{} ∘ {} is given twice", arrows[g].name, arrows[f].name));
            }
            compose[g][f] = Some(h);
        }
        for g in 0..n {
            for f in 0..n {
                if arrows[f].target == arrows[g].source && compose[g][f].is_none() {
                    return bad(format!("missing composite {} ∘ {}", arrows[g].name, arrows[f].name));
                }
            }
        }
        for (f, a) in arrows.iter().enumerate() {
            if compose[identities[a.target]][f] != Some(f) || compose[f][identities[a.source]] != Some(f) {
                return bad(format!("identities are not neutral on {}", a.name));
            }
        }
        for h in 0..n {
            for g in 0..n {
                for f in 0..n {
                    let (Some(gf), Some(hg)) = (compose[g][f], compose[h][g]) else {
                        continue;
                    };
                    if compose[h][gf] != compose[hg][f] {
                        return bad("composition is not associative".into());
                    }
                }
            }
        }
        Ok(FiniteBaseCategory {
            objects,
            arrows,
            identities,
            compose,
        })
    }

    /// A base with no composable pair of non-identity arrows; identities named `id_<object>` are added.
    pub fn without_composites(objects: Vec<String>, generators: Vec<Arrow>) -> Result<Self> {
        let k = objects.len();
        let mut arrows: Vec<Arrow> = objects
            .iter()
            .enumerate()
            .map(|(x, name)| Arrow {
                name: format!("id_{name}"),
                source: x,
                target: x,
            })
            .collect();
        arrows.extend(generators);
        let n = arrows.len();
        let mut comps = Vec::new();
        for f in 0..n {
            let (s, t) = (arrows[f].source, arrows[f].target);
            comps.push((t, f, f));
            if f >= k {
                comps.push((f, s, f));
            }
            for g in k..n {
                if f >= k && arrows[g].source == t {
                    return Err(CatError::Invalid(format!(
                        "{} and {} compose; give the composition table explicitly",
                        arrows[g].name, arrows[f].name
                    )));
                }
            }
        }
        Self::new(objects, arrows, (0..k).collect(), &comps)
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn identity(&self, x: usize) -> usize {
        self.identities[x]
    }

    pub fn is_identity(&self, a: usize) -> bool {
        self.identities[self.arrows[a].source] == a && self.arrows[a].source == self.arrows[a].target
    }

    /// `g ∘ f`, if composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g][f]
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrows.iter().position(|a| a.name == name)
    }

    /// Arrows `v → w`, in index order.
    pub fn arrows_between(&self, v: usize, w: usize) -> Vec<usize> {
        (0..self.arrows.len())
            .filter(|&a| self.arrows[a].source == v && self.arrows[a].target == w)
            .collect()
    }
}

/// Two objects `V`, `E` and two arrows `s, t: V → E`; presheaves on it are multigraphs.
pub fn parallel_pair_base() -> FiniteBaseCategory {
    FiniteBaseCategory::without_composites(
        vec!["V".into(), "E".into()],
        vec![
            Arrow {
                name: "s".into(),
                source: 0,
                target: 1,
            },
            Arrow {
                name: "t".into(),
                source: 0,
                target: 1,
            },
        ],
    )
    .expect("parallel pair is a valid base")
}

/// A set per base object and, per arrow `a: x → y`, a function `P(y) → P(x)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Presheaf {
    sets: Vec<usize>,
    actions: Vec<Vec<usize>>,
}

impl Presheaf {
    pub fn sets(&self) -> &[usize] {
        &self.sets
    }

    pub fn action(&self, arrow: usize) -> &[usize] {
        &self.actions[arrow]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NatTrans {
    source: Presheaf,
    target: Presheaf,
    components: Vec<Vec<usize>>,
}

impl NatTrans {
    pub fn source(&self) -> &Presheaf {
        &self.source
    }

    pub fn target(&self) -> &Presheaf {
        &self.target
    }

    pub fn component(&self, x: usize) -> &[usize] {
        &self.components[x]
    }
}

/// Presheaves over a fixed base.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PresheafCat {
    base: Arc<FiniteBaseCategory>,
}

impl PresheafCat {
    pub fn new(base: FiniteBaseCategory) -> Self {
        PresheafCat { base: Arc::new(base) }
    }

    pub fn base(&self) -> &FiniteBaseCategory {
        &self.base
    }

    /// Builds a presheaf from its sets and the actions of non-identity arrows
    /// (indexed by arrow); identity actions are filled in.
    pub fn presheaf(&self, sets: Vec<usize>, actions: &[(usize, Vec<usize>)]) -> Result<Presheaf> {
        let b = &*self.base;
        if sets.len() != b.objects.len() {
            return Err(CatError::Invalid("one set per base object is required".into()));
        }
        let mut all: Vec<Option<Vec<usize>>> = vec![None; b.arrows.len()];
        for (x, &i) in b.identities.iter().enumerate() {
            all[i] = Some((0..sets[x]).collect());
        }
        for (a, table) in actions {
            if *a >= b.arrows.len() {
                return Err(CatError::Invalid(format!("unknown arrow {a}")));
            }
            all[*a] = Some(table.clone());
        }
        let actions = all
            .into_iter()
            .enumerate()
            .map(|(a, t)| t.ok_or_else(|| CatError::Invalid(format!("no action for arrow {}", b.arrows[a].name))))
            .collect::<Result<Vec<_>>>()?;
        let p = Presheaf { sets, actions };
        self.validate(&p)?;
        Ok(p)
    }

    pub fn validate(&self, p: &Presheaf) -> Result<()> {
        let b = &*self.base;
        if p.sets.len() != b.objects.len() || p.actions.len() != b.arrows.len() {
            return Err(CatError::Invalid("presheaf does not match the base".into()));
        }
        for (a, arrow) in b.arrows.iter().enumerate() {
            let t = &p.actions[a];
            if t.len() != p.sets[arrow.target] || t.iter().any(|&v| v >= p.sets[arrow.source]) {
                return Err(CatError::Invalid(format!("action of {} has the wrong shape", arrow.name)));
            }
        }
        for (x, &i) in b.identities.iter().enumerate() {
            if p.actions[i].iter().enumerate().any(|(k, &v)| k != v) {
                return Err(CatError::Invalid(format!("identity of {} does not act trivially", b.objects[x])));
            }
        }
        for g in 0..b.arrows.len() {
            for f in 0..b.arrows.len() {
                if let Some(gf) = b.compose[g][f] {
                    // P(g ∘ f) = P(f) ∘ P(g)
                    if p.actions[gf] != compose_tables(&p.actions[f], &p.actions[g]) {
                        return Err(CatError::Invalid(format!(
                            "action is not functorial on {} ∘ {}",
                            b.arrows[g].name, b.arrows[f].name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn nat_trans(&self, source: Presheaf, target: Presheaf, components: Vec<Vec<usize>>) -> Result<NatTrans> {
        let b = &*self.base;
        if components.len() != b.objects.len() {
            return Err(CatError::Invalid("one component per base object is required".into()));
        }
        for (x, c) in components.iter().enumerate() {
            if c.len() != source.sets[x] || c.iter().any(|&v| v >= target.sets[x]) {
                return Err(CatError::Invalid(format!("component at {} has the wrong shape", b.objects[x])));
            }
        }
        for (a, arrow) in b.arrows.iter().enumerate() {
            let (x, y) = (arrow.source, arrow.target);
            let lhs = compose_tables(&components[x], &source.actions[a]);
            let rhs = compose_tables(&target.actions[a], &components[y]);
            if lhs != rhs {
                return Err(CatError::Invalid(format!("naturality fails at {}", arrow.name)));
            }
        }
        Ok(NatTrans {
            source,
            target,
            components,
        })
    }

    /// The representable presheaf `Hom(-, w)`; its elements at `v` are the arrows `v → w`
    /// in index order.
    pub fn representable(&self, w: usize) -> Presheaf {
        let b = &*self.base;
        let elems: Vec<Vec<usize>> = (0..b.objects.len()).map(|v| b.arrows_between(v, w)).collect();
        let pos: Vec<HashMap<usize, usize>> = elems
            .iter()
            .map(|es| es.iter().enumerate().map(|(i, &a)| (a, i)).collect())
            .collect();
        let actions = b
            .arrows
            .iter()
            .enumerate()
            .map(|(a, arrow)| {
                elems[arrow.target]
                    .iter()
                    .map(|&g| pos[arrow.source][&b.compose[g][a].expect("composable")])
                    .collect()
            })
            .collect();
        Presheaf {
            sets: elems.iter().map(Vec::len).collect(),
            actions,
        }
    }

    /// The map `Hom(-, w) → P` picking the element `e ∈ P(w)`.
    pub fn element(&self, p: &Presheaf, w: usize, e: usize) -> Result<NatTrans> {
        let b = &*self.base;
        let rep = self.representable(w);
        let components = (0..b.objects.len())
            .map(|v| b.arrows_between(v, w).into_iter().map(|g| p.actions[g][e]).collect())
            .collect();
        self.nat_trans(rep, p.clone(), components)
    }

    /// Inclusion of the subpresheaf spanned by `keep` (ascending element lists per
    /// object), which must be closed under the actions.
    pub fn subpresheaf(&self, p: &Presheaf, keep: Vec<Vec<usize>>) -> Result<NatTrans> {
        let base = &*self.base;
        let pos: Vec<HashMap<usize, usize>> = keep
            .iter()
            .map(|ks| ks.iter().enumerate().map(|(i, &e)| (e, i)).collect())
            .collect();
        let actions = base
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, arrow)| {
                keep[arrow.target]
                    .iter()
                    .map(|&e| {
                        pos[arrow.source]
                            .get(&p.actions[ai][e])
                            .copied()
                            .ok_or_else(|| CatError::Invalid("subset is not closed under the actions".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NatTrans {
            source: Presheaf {
                sets: keep.iter().map(Vec::len).collect(),
                actions,
            },
            target: p.clone(),
            components: keep,
        })
    }

    fn search(&self, a: &Presheaf, b: &Presheaf, injective: bool, first_only: bool, limit: usize) -> Result<Vec<NatTrans>> {
        let base = &*self.base;
        let k = base.objects.len();
        let mut offset = vec![0; k + 1];
        for x in 0..k {
            offset[x + 1] = offset[x] + a.sets[x];
        }
        let total = offset[k];
        let obj_of: Vec<usize> = (0..k).flat_map(|x| std::iter::repeat_n(x, a.sets[x])).collect();
        // constraints checked when the later of the two positions is assigned:
        // value[x-pos of A(a)(e)] must equal B(a)(value[y-pos of e])
        let mut checks: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); total];
        for (ai, arrow) in base.arrows.iter().enumerate() {
            if base.is_identity(ai) {
                continue;
            }
            let (x, y) = (arrow.source, arrow.target);
            for e in 0..a.sets[y] {
                let py = offset[y] + e;
                let px = offset[x] + a.actions[ai][e];
                if py >= px {
                    checks[py].push((ai, px, true));
                } else {
                    checks[px].push((ai, py, false));
                }
            }
        }
        struct St<'s> {
            a: &'s Presheaf,
            b: &'s Presheaf,
            offset: Vec<usize>,
            obj_of: Vec<usize>,
            checks: Vec<Vec<(usize, usize, bool)>>,
            val: Vec<usize>,
            used: Vec<Vec<bool>>,
            injective: bool,
            first_only: bool,
            limit: usize,
            out: Vec<NatTrans>,
        }
        fn go(s: &mut St, pos: usize) -> Result<bool> {
            if pos == s.val.len() {
                if s.out.len() >= s.limit {
                    return Err(CatError::BudgetExceeded { limit: s.limit });
                }
                let k = s.offset.len() - 1;
                let components = (0..k).map(|x| s.val[s.offset[x]..s.offset[x + 1]].to_vec()).collect();
                s.out.push(NatTrans {
                    source: s.a.clone(),
                    target: s.b.clone(),
                    components,
                });
                return Ok(s.first_only);
            }
            let x = s.obj_of[pos];
            for v in 0..s.b.sets[x] {
                if s.injective && s.used[x][v] {
                    continue;
                }
                s.val[pos] = v;
                let ok = s.checks[pos].iter().all(|&(ai, other, pos_is_target)| {
                    if pos_is_target {
                        s.val[other] == s.b.actions[ai][v]
                    } else {
                        v == s.b.actions[ai][s.val[other]]
                    }
                });
                if ok {
                    s.used[x][v] = true;
                    let stop = go(s, pos + 1)?;
                    s.used[x][v] = false;
                    if stop {
                        return Ok(true);
                    }
                }
            }
            Ok(false)
        }
        if injective && (0..k).any(|x| a.sets[x] > b.sets[x]) {
            return Ok(vec![]);
        }
        let mut st = St {
            a,
            b,
            offset,
            obj_of,
            checks,
            val: vec![0; total],
            used: b.sets.iter().map(|&n| vec![false; n]).collect(),
            injective,
            first_only,
            limit,
            out: vec![],
        };
        go(&mut st, 0)?;
        Ok(st.out)
    }
}

impl Category for PresheafCat {
    type Obj = Presheaf;
    type Mor = NatTrans;

    fn source(&self, f: &NatTrans) -> Presheaf {
        f.source.clone()
    }

    fn target(&self, f: &NatTrans) -> Presheaf {
        f.target.clone()
    }

    fn identity(&self, a: &Presheaf) -> NatTrans {
        NatTrans {
            source: a.clone(),
            target: a.clone(),
            components: a.sets.iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    fn compose(&self, g: &NatTrans, f: &NatTrans) -> Result<NatTrans> {
        if f.target != g.source {
            return Err(mismatch("natural transformations are not composable"));
        }
        Ok(NatTrans {
            source: f.source.clone(),
            target: g.target.clone(),
            components: g
                .components
                .iter()
                .zip(&f.components)
                .map(|(gc, fc)| compose_tables(gc, fc))
                .collect(),
        })
    }

    fn size(&self, a: &Presheaf) -> usize {
        a.sets.iter().sum()
    }

    fn initial(&self) -> Presheaf {
        let b = &*self.base;
        Presheaf {
            sets: vec![0; b.objects.len()],
            actions: vec![vec![]; b.arrows.len()],
        }
    }

    fn from_initial(&self, a: &Presheaf) -> NatTrans {
        NatTrans {
            source: self.initial(),
            target: a.clone(),
            components: vec![vec![]; a.sets.len()],
        }
    }

    fn homs(&self, a: &Presheaf, b: &Presheaf, limit: usize) -> Result<Vec<NatTrans>> {
        self.search(a, b, false, false, limit)
    }

    fn monos(&self, a: &Presheaf, b: &Presheaf, limit: usize) -> Result<Vec<NatTrans>> {
        self.search(a, b, true, false, limit)
    }

    fn is_mono(&self, f: &NatTrans) -> bool {
        f.components
            .iter()
            .zip(&f.target.sets)
            .all(|(c, &n)| is_injective(c, n))
    }

    fn is_epi(&self, f: &NatTrans) -> bool {
        f.components
            .iter()
            .zip(&f.target.sets)
            .all(|(c, &n)| is_surjective(c, n))
    }

    fn inverse(&self, f: &NatTrans) -> Option<NatTrans> {
        let components = f
            .components
            .iter()
            .zip(&f.target.sets)
            .map(|(c, &n)| invert_table(c, n))
            .collect::<Option<Vec<_>>>()?;
        Some(NatTrans {
            source: f.target.clone(),
            target: f.source.clone(),
            components,
        })
    }

    fn find_iso(&self, a: &Presheaf, b: &Presheaf) -> Option<NatTrans> {
        if a.sets != b.sets {
            return None;
        }
        self.search(a, b, true, true, usize::MAX).ok()?.pop()
    }

    fn pullback(&self, f: &NatTrans, g: &NatTrans) -> Result<Square<NatTrans>> {
        if f.target != g.target {
            return Err(mismatch("cospan legs have different targets"));
        }
        let base = &*self.base;
        let pairs: Vec<Vec<(usize, usize)>> = f
            .components
            .iter()
            .zip(&g.components)
            .map(|(fc, gc)| pullback_pairs(fc, gc))
            .collect();
        let index: Vec<HashMap<(usize, usize), usize>> = pairs
            .iter()
            .map(|ps| ps.iter().enumerate().map(|(i, &pr)| (pr, i)).collect())
            .collect();
        let (a, b) = (&f.source, &g.source);
        let actions = base
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, arrow)| {
                pairs[arrow.target]
                    .iter()
                    .map(|&(u, v)| index[arrow.source][&(a.actions[ai][u], b.actions[ai][v])])
                    .collect()
            })
            .collect();
        let apex = Presheaf {
            sets: pairs.iter().map(Vec::len).collect(),
            actions,
        };
        Ok(Square {
            p: NatTrans {
                source: apex.clone(),
                target: a.clone(),
                components: pairs.iter().map(|ps| ps.iter().map(|pr| pr.0).collect()).collect(),
            },
            q: NatTrans {
                source: apex,
                target: b.clone(),
                components: pairs.iter().map(|ps| ps.iter().map(|pr| pr.1).collect()).collect(),
            },
            f: f.clone(),
            g: g.clone(),
        })
    }

    fn pullback_mediator(&self, pb: &Square<NatTrans>, p: &NatTrans, q: &NatTrans) -> Result<NatTrans> {
        if p.source != q.source || p.target != pb.p.target || q.target != pb.q.target {
            return Err(mismatch("cone legs do not match the pullback cospan"));
        }
        let components = (0..p.components.len())
            .map(|x| {
                let pairs: Vec<_> = pb.p.components[x]
                    .iter()
                    .copied()
                    .zip(pb.q.components[x].iter().copied())
                    .collect();
                pair_lookup(&pairs, &p.components[x], &q.components[x])
            })
            .collect::<Result<Vec<_>>>()?;
        self.nat_trans(p.source.clone(), pb.p.source.clone(), components)
            .map_err(|e| CatError::NotACone(e.to_string()))
    }

    fn pushout(&self, p: &NatTrans, q: &NatTrans) -> Result<Square<NatTrans>> {
        if p.source != q.source {
            return Err(mismatch("span legs have different sources"));
        }
        let base = &*self.base;
        let (a, b) = (&p.target, &q.target);
        let k = base.objects.len();
        let tables: Vec<(usize, Vec<usize>, Vec<usize>)> = (0..k)
            .map(|x| pushout_tables(a.sets[x], b.sets[x], &p.components[x], &q.components[x]))
            .collect();
        let actions = base
            .arrows
            .iter()
            .enumerate()
            .map(|(ai, arrow)| {
                let (x, y) = (arrow.source, arrow.target);
                let (ny, fy, gy) = &tables[y];
                let (_, fx, gx) = &tables[x];
                let mut act = vec![usize::MAX; *ny];
                for (u, &c) in fy.iter().enumerate() {
                    act[c] = fx[a.actions[ai][u]];
                }
                for (v, &c) in gy.iter().enumerate() {
                    act[c] = gx[b.actions[ai][v]];
                }
                act
            })
            .collect();
        let corner = Presheaf {
            sets: tables.iter().map(|t| t.0).collect(),
            actions,
        };
        Ok(Square {
            p: p.clone(),
            q: q.clone(),
            f: NatTrans {
                source: a.clone(),
                target: corner.clone(),
                components: tables.iter().map(|t| t.1.clone()).collect(),
            },
            g: NatTrans {
                source: b.clone(),
                target: corner,
                components: tables.into_iter().map(|t| t.2).collect(),
            },
        })
    }

    fn pushout_mediator(&self, po: &Square<NatTrans>, f: &NatTrans, g: &NatTrans) -> Result<NatTrans> {
        if f.target != g.target || f.source != po.f.source || g.source != po.g.source {
            return Err(mismatch("cocone legs do not match the pushout span"));
        }
        let corner = &po.f.target;
        let components = (0..corner.sets.len())
            .map(|x| {
                copair_tables(
                    corner.sets[x],
                    &po.f.components[x],
                    &po.g.components[x],
                    &f.components[x],
                    &g.components[x],
                )
            })
            .collect::<Result<Vec<_>>>()?;
        self.nat_trans(corner.clone(), f.target.clone(), components)
            .map_err(|e| CatError::NotACocone(e.to_string()))
    }

    fn equalizer(&self, f: &NatTrans, g: &NatTrans) -> Result<NatTrans> {
        if f.source != g.source || f.target != g.target {
            return Err(mismatch("equalizer of non-parallel pair"));
        }
        let a = &f.source;
        let keep = (0..a.sets.len())
            .map(|x| (0..a.sets[x]).filter(|&e| f.components[x][e] == g.components[x][e]).collect())
            .collect();
        self.subpresheaf(a, keep)
    }

    fn lift_through_mono(&self, e: &NatTrans, h: &NatTrans) -> Option<NatTrans> {
        if e.target != h.target {
            return None;
        }
        let components = (0..e.components.len())
            .map(|x| lift_table(&e.components[x], e.target.sets[x], &h.components[x]))
            .collect::<Option<Vec<_>>>()?;
        self.nat_trans(h.source.clone(), e.source.clone(), components).ok()
    }
}

impl Concrete for PresheafCat {
    fn sort_names(&self) -> Vec<String> {
        self.base.objects.clone()
    }

    fn carrier_sizes(&self, a: &Presheaf) -> Vec<usize> {
        a.sets.clone()
    }

    fn components(&self, f: &NatTrans) -> Vec<Vec<usize>> {
        f.components.clone()
    }
}

fn expect_parallel_pair(cat: &PresheafCat) -> Result<(usize, usize)> {
    let b = cat.base();
    if b.objects.len() != 2 || b.arrows.len() != 4 {
        return Err(CatError::Invalid("base is not the parallel pair".into()));
    }
    match (b.arrow_index("s"), b.arrow_index("t")) {
        (Some(s), Some(t)) if b.arrows[s].source == 0 && b.arrows[s].target == 1 && b.arrows[t].source == 0 && b.arrows[t].target == 1 => {
            Ok((s, t))
        }
        _ => Err(CatError::Invalid("base is not the parallel pair".into())),
    }
}

pub fn from_graph(cat: &PresheafCat, g: &Graph) -> Result<Presheaf> {
    let (s, t) = expect_parallel_pair(cat)?;
    cat.presheaf(
        vec![g.vertex_count(), g.edge_count()],
        &[(s, g.src_table()), (t, g.tgt_table())],
    )
}

pub fn to_graph(cat: &PresheafCat, p: &Presheaf) -> Result<Graph> {
    let (s, t) = expect_parallel_pair(cat)?;
    Graph::new(
        p.sets[0],
        p.actions[s].iter().copied().zip(p.actions[t].iter().copied()).collect(),
    )
}

pub fn from_graph_morphism(cat: &PresheafCat, m: &GraphMorphism) -> Result<NatTrans> {
    cat.nat_trans(
        from_graph(cat, m.source())?,
        from_graph(cat, m.target())?,
        vec![m.vmap().to_vec(), m.emap().to_vec()],
    )
}

pub fn to_graph_morphism(cat: &PresheafCat, n: &NatTrans) -> Result<GraphMorphism> {
    GraphMorphism::new(
        to_graph(cat, &n.source)?,
        to_graph(cat, &n.target)?,
        n.components[0].clone(),
        n.components[1].clone(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::{FinFn, FinSetCat};
    use crate::multigraph::MultigraphCat;
    use crate::universal::{is_pullback, is_pushout};

    fn one_object() -> PresheafCat {
        PresheafCat::new(FiniteBaseCategory::without_composites(vec!["X".into()], vec![]).unwrap())
    }

    #[test]
    fn rejects_non_associative_or_partial_tables() {
        let objs = vec!["X".into()];
        let arrows = vec![
            Arrow { name: "id".into(), source: 0, target: 0 },
            Arrow { name: "e".into(), source: 0, target: 0 },
        ];
        // e∘e missing
        assert!(FiniteBaseCategory::new(objs.clone(), arrows.clone(), vec![0], &[(0, 0, 0), (0, 1, 1), (1, 0, 1)]).is_err());
        // idempotent e∘e = e is fine
        assert!(FiniteBaseCategory::new(objs, arrows, vec![0], &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)]).is_ok());
    }

    #[test]
    fn functoriality_is_enforced() {
        let objs = vec!["X".into()];
        let arrows = vec![
            Arrow { name: "id".into(), source: 0, target: 0 },
            Arrow { name: "e".into(), source: 0, target: 0 },
        ];
        let base = FiniteBaseCategory::new(objs, arrows, vec![0], &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)]).unwrap();
        let cat = PresheafCat::new(base);
        // e must act idempotently
        assert!(cat.presheaf(vec![2], &[(1, vec![1, 0])]).is_err());
        assert!(cat.presheaf(vec![2], &[(1, vec![0, 0])]).is_ok());
    }

    #[test]
    fn degenerate_base_matches_finset() {
        let cat = one_object();
        let a = cat.presheaf(vec![2], &[]).unwrap();
        let c = cat.presheaf(vec![1], &[]).unwrap();
        let b = cat.presheaf(vec![3], &[]).unwrap();
        let f = cat.nat_trans(a, c.clone(), vec![vec![0, 0]]).unwrap();
        let g = cat.nat_trans(b, c, vec![vec![0, 0, 0]]).unwrap();
        let pb = cat.pullback(&f, &g).unwrap();
        let fpb = FinSetCat
            .pullback(&FinFn::new(1, vec![0, 0]).unwrap(), &FinFn::new(1, vec![0, 0, 0]).unwrap())
            .unwrap();
        assert_eq!(pb.p.component(0), fpb.p.table());
        assert_eq!(pb.q.component(0), fpb.q.table());
        let po = cat.pushout(&pb.p, &pb.q).unwrap();
        assert!(is_pushout(&cat, &po).unwrap());
    }

    #[test]
    fn graph_round_trip() {
        let cat = PresheafCat::new(parallel_pair_base());
        let g = Graph::new(3, vec![(0, 1), (1, 1), (2, 0)]).unwrap();
        assert_eq!(to_graph(&cat, &from_graph(&cat, &g).unwrap()).unwrap(), g);
        assert_eq!(to_graph(&cat, &from_graph(&cat, &Graph::path(1)).unwrap()).unwrap(), Graph::path(1));
    }

    #[test]
    fn pushout_agrees_with_multigraph() {
        let cat = PresheafCat::new(parallel_pair_base());
        let e = Graph::path(1);
        let p = GraphMorphism::new(Graph::discrete(1), e.clone(), vec![1], vec![]).unwrap();
        let q = GraphMorphism::new(Graph::discrete(1), e, vec![0], vec![]).unwrap();
        let mg = MultigraphCat.pushout(&p, &q).unwrap();
        let ps = cat
            .pushout(&from_graph_morphism(&cat, &p).unwrap(), &from_graph_morphism(&cat, &q).unwrap())
            .unwrap();
        let translated = to_graph(&cat, ps.f.target()).unwrap();
        assert!(MultigraphCat.find_iso(&translated, mg.f.target()).is_some());
        assert!(is_pullback(&cat, &cat.pullback(&ps.f, &ps.g).unwrap()).unwrap());
    }

    #[test]
    fn representable_of_edge_object_is_an_edge() {
        let cat = PresheafCat::new(parallel_pair_base());
        let rep = cat.representable(1);
        assert_eq!(to_graph(&cat, &rep).unwrap(), Graph::new(2, vec![(0, 1)]).unwrap());
        let loop_graph = from_graph(&cat, &Graph::new(1, vec![(0, 0)]).unwrap()).unwrap();
        let el = cat.element(&loop_graph, 1, 0).unwrap();
        assert_eq!(el.component(0), &[0, 0]);
    }

    #[test]
    fn mono_iff_componentwise_injective() {
        let cat = PresheafCat::new(parallel_pair_base());
        let e = from_graph(&cat, &Graph::path(1)).unwrap();
        let lp = from_graph(&cat, &Graph::new(1, vec![(0, 0)]).unwrap()).unwrap();
        let collapse = cat.nat_trans(e.clone(), lp, vec![vec![0, 0], vec![0]]).unwrap();
        assert!(!cat.is_mono(&collapse));
        assert!(cat.is_mono(&cat.identity(&e)));
    }

    #[test]
    fn homs_match_multigraph_counts() {
        let cat = PresheafCat::new(parallel_pair_base());
        let g = Graph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let h = Graph::new(3, vec![(0, 1), (1, 2), (2, 0), (1, 0)]).unwrap();
        let n1 = MultigraphCat.homs(&g, &h, 1000).unwrap().len();
        let n2 = cat
            .homs(&from_graph(&cat, &g).unwrap(), &from_graph(&cat, &h).unwrap(), 1000)
            .unwrap()
            .len();
        assert_eq!(n1, n2);
    }
}
