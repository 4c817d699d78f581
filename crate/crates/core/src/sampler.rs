//! Seeded random generation of objects and morphisms for the law suites.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::category::{Category, Cospan, Square};
use crate::codec::Codec;
use crate::error::{CatError, Result};
use crate::finset::{FinFn, FinSet, FinSetCat};
use crate::multigraph::{Graph, GraphMorphism, MultigraphCat};
use crate::presheaf::{NatTrans, Presheaf, PresheafCat};
use crate::simplegraph::{SgMorphism, SimpleGraph, SimpleGraphCat};
use crate::slice::{Slice, SliceObject};
use crate::universal::{coequalizer, coproduct};

pub type SampleRng = ChaCha8Rng;

/// Cap on hom enumerations done while sampling.
pub const SAMPLE_HOM_LIMIT: usize = 20_000;

fn pick<'a, T>(rng: &mut SampleRng, xs: &'a [T]) -> Option<&'a T> {
    xs.choose(rng)
}

fn random_subset(rng: &mut SampleRng, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(0.6)).collect()
}

fn permutation(rng: &mut SampleRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub trait Sampler: Codec + Sized {
    /// An object with at most `max_size` elements per sort.
    fn random_object(&self, rng: &mut SampleRng, max_size: usize) -> Self::Obj;

    /// A mono into `x`; a regular one when asked, otherwise any mono.
    fn random_subobject(&self, rng: &mut SampleRng, x: &Self::Obj, regular: bool) -> Self::Mor;

    /// An isomorphism out of `a` that relabels its elements.
    fn random_iso(&self, rng: &mut SampleRng, a: &Self::Obj) -> Self::Mor;

    /// A morphism into `c` from a small object, falling back to a subobject.
    fn random_morphism_into(&self, rng: &mut SampleRng, c: &Self::Obj) -> Result<Self::Mor> {
        for _ in 0..4 {
            let t = self.random_object(rng, 2);
            match self.homs(&t, c, SAMPLE_HOM_LIMIT) {
                Ok(hs) if !hs.is_empty() => return Ok(pick(rng, &hs).expect("non-empty").clone()),
                Ok(_) | Err(CatError::BudgetExceeded { .. }) => {}
                Err(e) => return Err(e),
            }
        }
        Ok(self.random_subobject(rng, c, false))
    }

    /// An epi out of `a` that glues up to `merges` random pairs of generalized elements.
    fn random_quotient(&self, rng: &mut SampleRng, a: &Self::Obj, merges: usize) -> Result<Self::Mor> {
        let mut q = self.identity(a);
        for _ in 0..merges {
            let cur = self.target(&q);
            let t = self.random_object(rng, 1);
            let hs = match self.homs(&t, &cur, SAMPLE_HOM_LIMIT) {
                Ok(hs) => hs,
                Err(CatError::BudgetExceeded { .. }) => continue,
                Err(e) => return Err(e),
            };
            if hs.len() < 2 {
                continue;
            }
            let (u, v) = (pick(rng, &hs).expect("non-empty"), pick(rng, &hs).expect("non-empty"));
            let e = coequalizer(self, u, v)?;
            q = self.compose(&e, &q)?;
        }
        Ok(q)
    }

    /// A morphism out of `a`: a quotient, then an inclusion into a sum with a random object,
    /// then a relabelling.
    fn random_morphism_from(&self, rng: &mut SampleRng, a: &Self::Obj, max_size: usize) -> Result<Self::Mor> {
        let merges = rng.gen_range(0..=2);
        let q = self.random_quotient(rng, a, merges)?;
        let extra = self.random_object(rng, max_size / 2);
        let sum = coproduct(self, &self.target(&q), &extra)?;
        let iso = self.random_iso(rng, &self.target(&sum.f));
        self.compose(&iso, &self.compose(&sum.f, &q)?)
    }

    /// A cospan `A → C ← B` with `C` a quotient of `A + B`.
    fn random_cospan(&self, rng: &mut SampleRng, max_size: usize) -> Result<Cospan<Self::Mor>> {
        let half = (max_size / 2).max(1);
        let a = self.random_object(rng, half);
        let b = self.random_object(rng, half);
        let sum = coproduct(self, &a, &b)?;
        let merges = rng.gen_range(0..=3);
        let q = self.random_quotient(rng, &self.target(&sum.f), merges)?;
        Ok(Cospan {
            left: self.compose(&q, &sum.f)?,
            right: self.compose(&q, &sum.g)?,
        })
    }

    /// A pushout square along a (regular, if asked) mono `p`, with the corner relabelled.
    fn random_pushout_along_mono(
        &self,
        rng: &mut SampleRng,
        max_size: usize,
        regular: bool,
    ) -> Result<Square<Self::Mor>> {
        let a = self.random_object(rng, max_size);
        let p = self.random_subobject(rng, &a, regular);
        let q = self.random_morphism_from(rng, &self.source(&p), max_size)?;
        let po = self.pushout(&p, &q)?;
        let iso = self.random_iso(rng, &self.target(&po.f));
        Ok(Square {
            f: self.compose(&iso, &po.f)?,
            g: self.compose(&iso, &po.g)?,
            ..po
        })
    }
}

impl Sampler for FinSetCat {
    fn random_object(&self, rng: &mut SampleRng, max_size: usize) -> FinSet {
        FinSet(rng.gen_range(0..=max_size))
    }

    fn random_subobject(&self, rng: &mut SampleRng, x: &FinSet, _regular: bool) -> FinFn {
        FinFn::new(x.size(), random_subset(rng, x.size())).expect("subset")
    }

    fn random_iso(&self, rng: &mut SampleRng, a: &FinSet) -> FinFn {
        FinFn::new(a.size(), permutation(rng, a.size())).expect("permutation")
    }
}

fn random_graph(rng: &mut SampleRng, max_size: usize) -> Graph {
    let v = rng.gen_range(0..=max_size);
    let e = if v == 0 { 0 } else { rng.gen_range(0..=max_size) };
    let edges = (0..e).map(|_| (rng.gen_range(0..v), rng.gen_range(0..v))).collect();
    Graph::new(v, edges).expect("endpoints in range")
}

impl Sampler for MultigraphCat {
    fn random_object(&self, rng: &mut SampleRng, max_size: usize) -> Graph {
        random_graph(rng, max_size)
    }

    fn random_subobject(&self, rng: &mut SampleRng, x: &Graph, _regular: bool) -> GraphMorphism {
        let vs = random_subset(rng, x.vertex_count());
        let mut renum = vec![usize::MAX; x.vertex_count()];
        for (i, &v) in vs.iter().enumerate() {
            renum[v] = i;
        }
        let es: Vec<usize> = (0..x.edge_count())
            .filter(|&e| renum[x.src(e)] != usize::MAX && renum[x.tgt(e)] != usize::MAX && rng.gen_bool(0.6))
            .collect();
        let sub = Graph::new(vs.len(), es.iter().map(|&e| (renum[x.src(e)], renum[x.tgt(e)])).collect())
            .expect("subgraph");
        GraphMorphism::new(sub, x.clone(), vs, es).expect("inclusion")
    }

    fn random_iso(&self, rng: &mut SampleRng, a: &Graph) -> GraphMorphism {
        let pv = permutation(rng, a.vertex_count());
        let pe = permutation(rng, a.edge_count());
        let mut edges = vec![(0, 0); a.edge_count()];
        for (e, &(s, t)) in a.edges().iter().enumerate() {
            edges[pe[e]] = (pv[s], pv[t]);
        }
        let b = Graph::new(a.vertex_count(), edges).expect("relabelled graph");
        GraphMorphism::new(a.clone(), b, pv, pe).expect("relabelling")
    }
}

impl Sampler for SimpleGraphCat {
    fn random_object(&self, rng: &mut SampleRng, max_size: usize) -> SimpleGraph {
        let v = rng.gen_range(0..=max_size);
        let mut edges = Vec::new();
        for s in 0..v {
            for t in 0..v {
                let p = if s == t { 0.1 } else { 0.3 };
                if rng.gen_bool(p) {
                    edges.push((s, t));
                }
            }
        }
        SimpleGraph::new(v, &edges).expect("edges in range")
    }

    fn random_subobject(&self, rng: &mut SampleRng, x: &SimpleGraph, regular: bool) -> SgMorphism {
        let vs = random_subset(rng, x.vertex_count());
        let induced = x.induced(&vs);
        let sub = if regular {
            induced
        } else {
            let kept: Vec<(usize, usize)> = induced.edges().into_iter().filter(|_| rng.gen_bool(0.5)).collect();
            SimpleGraph::new(vs.len(), &kept).expect("subgraph")
        };
        SgMorphism::new(sub, x.clone(), vs).expect("inclusion")
    }

    fn random_iso(&self, rng: &mut SampleRng, a: &SimpleGraph) -> SgMorphism {
        let pv = permutation(rng, a.vertex_count());
        let edges: Vec<(usize, usize)> = a.edges().iter().map(|&(s, t)| (pv[s], pv[t])).collect();
        let b = SimpleGraph::new(a.vertex_count(), &edges).expect("relabelled graph");
        SgMorphism::new(a.clone(), b, pv).expect("relabelling")
    }
}

impl Sampler for PresheafCat {
    /// A quotient of a sum of representables.
    fn random_object(&self, rng: &mut SampleRng, max_size: usize) -> Presheaf {
        let k = self.base().objects().len();
        let mut acc = self.initial();
        for _ in 0..=max_size {
            let rep = self.representable(rng.gen_range(0..k));
            let fits = acc.sets().iter().zip(rep.sets()).all(|(a, r)| a + r <= max_size);
            if !fits || rng.gen_bool(0.25) {
                continue;
            }
            let sum = coproduct(self, &acc, &rep).expect("coproducts exist");
            acc = self.target(&sum.f);
        }
        if max_size <= 1 {
            return acc;
        }
        let merges = rng.gen_range(0..=2);
        let q = self.random_quotient(rng, &acc, merges).expect("quotients exist");
        self.target(&q)
    }

    /// A random subset closed under the actions; every mono of presheaves is regular.
    fn random_subobject(&self, rng: &mut SampleRng, x: &Presheaf, _regular: bool) -> NatTrans {
        let base = self.base();
        let mut keep: Vec<Vec<bool>> = x.sets().iter().map(|&n| (0..n).map(|_| rng.gen_bool(0.6)).collect()).collect();
        loop {
            let mut changed = false;
            for (a, arrow) in base.arrows().iter().enumerate() {
                for e in 0..x.sets()[arrow.target] {
                    let img = x.action(a)[e];
                    if keep[arrow.target][e] && !keep[arrow.source][img] {
                        keep[arrow.source][img] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        let lists = keep.iter().map(|k| (0..k.len()).filter(|&i| k[i]).collect()).collect();
        self.subpresheaf(x, lists).expect("closed subset")
    }

    fn random_iso(&self, rng: &mut SampleRng, a: &Presheaf) -> NatTrans {
        let base = self.base();
        let perms: Vec<Vec<usize>> = a.sets().iter().map(|&n| permutation(rng, n)).collect();
        let actions: Vec<(usize, Vec<usize>)> = base
            .arrows()
            .iter()
            .enumerate()
            .filter(|(i, _)| !base.is_identity(*i))
            .map(|(i, arrow)| {
                let mut t = vec![0; a.sets()[arrow.target]];
                for (e, &img) in a.action(i).iter().enumerate() {
                    t[perms[arrow.target][e]] = perms[arrow.source][img];
                }
                (i, t)
            })
            .collect();
        let b = self.presheaf(a.sets().to_vec(), &actions).expect("relabelled presheaf");
        self.nat_trans(a.clone(), b, perms).expect("relabelling")
    }
}

impl<C: Sampler> Sampler for Slice<C> {
    fn random_object(&self, rng: &mut SampleRng, max_size: usize) -> SliceObject<C::Mor> {
        let base = self.base();
        for _ in 0..4 {
            let a = base.random_object(rng, max_size);
            if let Ok(hs) = base.homs(&a, self.over(), SAMPLE_HOM_LIMIT) {
                if let Some(t) = pick(rng, &hs) {
                    return SliceObject { typing: t.clone() };
                }
            }
        }
        let typing = base
            .random_morphism_into(rng, self.over())
            .unwrap_or_else(|_| base.from_initial(self.over()));
        SliceObject { typing }
    }

    fn random_subobject(&self, rng: &mut SampleRng, x: &SliceObject<C::Mor>, regular: bool) -> Self::Mor {
        let m = self.base().random_subobject(rng, &self.carrier(x), regular);
        let typing = self.base().compose(&x.typing, &m).expect("composable");
        self.morphism(SliceObject { typing }, x.clone(), m).expect("typed inclusion")
    }

    fn random_iso(&self, rng: &mut SampleRng, a: &SliceObject<C::Mor>) -> Self::Mor {
        let base = self.base();
        let phi = base.random_iso(rng, &self.carrier(a));
        let inv = base.inverse(&phi).expect("iso");
        let typing = base.compose(&a.typing, &inv).expect("composable");
        self.morphism(a.clone(), SliceObject { typing }, phi).expect("typed relabelling")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presheaf::parallel_pair_base;
    use crate::universal::is_pushout;
    use rand::SeedableRng;

    fn check<C: Sampler>(cat: &C) {
        let mut rng = SampleRng::seed_from_u64(3);
        for _ in 0..30 {
            let a = cat.random_object(&mut rng, 4);
            assert!(cat.is_mono(&cat.random_subobject(&mut rng, &a, true)));
            assert!(cat.inverse(&cat.random_iso(&mut rng, &a)).is_some());
            assert!(cat.is_epi(&cat.random_quotient(&mut rng, &a, 2).unwrap()));
            let f = cat.random_morphism_from(&mut rng, &a, 4).unwrap();
            assert_eq!(cat.source(&f), a);
            let g = cat.random_morphism_into(&mut rng, &a).unwrap();
            assert_eq!(cat.target(&g), a);
            let sq = cat.random_pushout_along_mono(&mut rng, 4, true).unwrap();
            assert!(is_pushout(cat, &sq).unwrap());
        }
    }

    #[test]
    fn samplers_produce_well_formed_data() {
        check(&FinSetCat);
        check(&MultigraphCat);
        check(&SimpleGraphCat);
        check(&PresheafCat::new(parallel_pair_base()));
        check(&Slice::new(MultigraphCat, Graph::new(2, vec![(0, 1), (1, 1)]).unwrap()));
    }

    #[test]
    fn same_seed_same_sample() {
        let a = MultigraphCat.random_object(&mut SampleRng::seed_from_u64(9), 5);
        let b = MultigraphCat.random_object(&mut SampleRng::seed_from_u64(9), 5);
        assert_eq!(a, b);
    }
}
