//! Finite directed multigraphs and graph homomorphisms.
//!
//! Limits and colimits are computed componentwise on vertices and edges.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::category::{Category, Concrete, Square};
use crate::error::{mismatch, CatError, Result};
use crate::finset::{
    compose_tables, copair_tables, invert_table, is_injective, is_surjective, lift_table,
    pair_lookup, pullback_pairs, pushout_tables,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(s, t)) = edges.iter().find(|&&(s, t)| s >= vertices || t >= vertices) {
            return Err(CatError::Invalid(format!(
                "edge ({s}, {t}) leaves the {vertices} vertices"
            )));
        }
        Ok(Graph { vertices, edges })
    }

    pub fn discrete(vertices: usize) -> Self {
        Graph {
            vertices,
            edges: vec![],
        }
    }

    /// `0 → 1 → … → n`.
    pub fn path(n: usize) -> Self {
        Graph {
            vertices: n + 1,
            edges: (0..n).map(|i| (i, i + 1)).collect(),
        }
    }

    pub fn cycle(n: usize) -> Self {
        Graph {
            vertices: n,
            edges: (0..n).map(|i| (i, (i + 1) % n)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn src(&self, e: usize) -> usize {
        self.edges[e].0
    }

    pub fn tgt(&self, e: usize) -> usize {
        self.edges[e].1
    }

    pub fn src_table(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.0).collect()
    }

    pub fn tgt_table(&self) -> Vec<usize> {
        self.edges.iter().map(|e| e.1).collect()
    }

    /// Total number of edge endpoints at each vertex.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices];
        for &(s, t) in &self.edges {
            deg[s] += 1;
            deg[t] += 1;
        }
        deg
    }

    fn multiplicities(&self) -> Vec<usize> {
        let n = self.vertices;
        let mut m = vec![0; n * n];
        for &(s, t) in &self.edges {
            m[s * n + t] += 1;
        }
        m
    }

    fn edges_between(&self) -> Vec<Vec<usize>> {
        let n = self.vertices;
        let mut buckets = vec![Vec::new(); n * n];
        for (e, &(s, t)) in self.edges.iter().enumerate() {
            buckets[s * n + t].push(e);
        }
        buckets
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GraphMorphism {
    source: Graph,
    target: Graph,
    vmap: Vec<usize>,
    emap: Vec<usize>,
}

impl GraphMorphism {
    /// Builds a morphism, checking both naturality squares.
    pub fn new(source: Graph, target: Graph, vmap: Vec<usize>, emap: Vec<usize>) -> Result<Self> {
        if vmap.len() != source.vertices || emap.len() != source.edges.len() {
            return Err(CatError::Invalid("map sizes do not match the source graph".into()));
        }
        if vmap.iter().any(|&v| v >= target.vertices) || emap.iter().any(|&e| e >= target.edges.len())
        {
            return Err(CatError::Invalid("map image outside the target graph".into()));
        }
        for (e, &(s, t)) in source.edges.iter().enumerate() {
            let (s2, t2) = target.edges[emap[e]];
            if vmap[s] != s2 || vmap[t] != t2 {
                return Err(CatError::Invalid(format!(
                    "edge {e} is not mapped compatibly with its endpoints"
                )));
            }
        }
        Ok(GraphMorphism {
            source,
            target,
            vmap,
            emap,
        })
    }

    pub fn identity(g: &Graph) -> Self {
        GraphMorphism {
            source: g.clone(),
            target: g.clone(),
            vmap: (0..g.vertices).collect(),
            emap: (0..g.edges.len()).collect(),
        }
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn vmap(&self) -> &[usize] {
        &self.vmap
    }

    pub fn emap(&self) -> &[usize] {
        &self.emap
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MultigraphCat;

struct HomSearch<'a> {
    g: &'a Graph,
    h: &'a Graph,
    order: Vec<usize>,
    h_buckets: Vec<Vec<usize>>,
    injective: bool,
    limit: usize,
    vmap: Vec<usize>,
    assigned: Vec<bool>,
    used: Vec<bool>,
    out: Vec<GraphMorphism>,
}

impl HomSearch<'_> {
    fn bucket(&self, s: usize, t: usize) -> &[usize] {
        &self.h_buckets[s * self.h.vertices + t]
    }

    fn consistent(&self, x: usize) -> bool {
        // every edge between x and an assigned vertex needs somewhere to go
        self.g.edges.iter().all(|&(s, t)| {
            if (s != x && t != x) || !self.assigned[s] || !self.assigned[t] {
                return true;
            }
            !self.bucket(self.vmap[s], self.vmap[t]).is_empty()
        })
    }

    fn vertices(&mut self, depth: usize) -> Result<()> {
        if depth == self.order.len() {
            return self.edges(0, &mut Vec::with_capacity(self.g.edges.len()), &mut vec![
                false;
                self.h.edges.len()
            ]);
        }
        let x = self.order[depth];
        for y in 0..self.h.vertices {
            if self.injective && self.used[y] {
                continue;
            }
            self.vmap[x] = y;
            self.assigned[x] = true;
            if self.consistent(x) {
                self.used[y] = true;
                self.vertices(depth + 1)?;
                self.used[y] = false;
            }
            self.assigned[x] = false;
        }
        Ok(())
    }

    fn edges(&mut self, e: usize, emap: &mut Vec<usize>, used: &mut Vec<bool>) -> Result<()> {
        if e == self.g.edges.len() {
            if self.out.len() >= self.limit {
                return Err(CatError::BudgetExceeded { limit: self.limit });
            }
            self.out.push(GraphMorphism {
                source: self.g.clone(),
                target: self.h.clone(),
                vmap: self.vmap.clone(),
                emap: emap.clone(),
            });
            return Ok(());
        }
        let (s, t) = self.g.edges[e];
        let candidates = self.bucket(self.vmap[s], self.vmap[t]).to_vec();
        for c in candidates {
            if self.injective && used[c] {
                continue;
            }
            emap.push(c);
            used[c] = true;
            self.edges(e + 1, emap, used)?;
            used[c] = false;
            emap.pop();
        }
        Ok(())
    }
}

/// Vertices by decreasing degree, ties by index.
fn search_order(g: &Graph) -> Vec<usize> {
    let deg = g.degrees();
    let mut order: Vec<usize> = (0..g.vertices).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    order
}

impl MultigraphCat {
    fn search(&self, g: &Graph, h: &Graph, injective: bool, limit: usize) -> Result<Vec<GraphMorphism>> {
        if injective && (g.vertices > h.vertices || g.edges.len() > h.edges.len()) {
            return Ok(vec![]);
        }
        let mut s = HomSearch {
            g,
            h,
            order: search_order(g),
            h_buckets: h.edges_between(),
            injective,
            limit,
            vmap: vec![0; g.vertices],
            assigned: vec![false; g.vertices],
            used: vec![false; h.vertices],
            out: vec![],
        };
        s.vertices(0)?;
        let mut out = s.out;
        out.sort_by(|a, b| (&a.vmap, &a.emap).cmp(&(&b.vmap, &b.emap)));
        Ok(out)
    }
}

struct IsoSearch<'a> {
    g: &'a Graph,
    h: &'a Graph,
    order: Vec<usize>,
    g_mult: Vec<usize>,
    h_mult: Vec<usize>,
    g_profile: Vec<(usize, usize, usize)>,
    h_profile: Vec<(usize, usize, usize)>,
    vmap: Vec<usize>,
    assigned: Vec<bool>,
    used: Vec<bool>,
}

fn profiles(g: &Graph) -> Vec<(usize, usize, usize)> {
    let mut p = vec![(0, 0, 0); g.vertices];
    for &(s, t) in &g.edges {
        if s == t {
            p[s].2 += 1;
        } else {
            p[s].0 += 1;
            p[t].1 += 1;
        }
    }
    p
}

impl IsoSearch<'_> {
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let x = self.order[depth];
        let (n, m) = (self.g.vertices, self.h.vertices);
        for y in 0..m {
            if self.used[y] || self.g_profile[x] != self.h_profile[y] {
                continue;
            }
            self.vmap[x] = y;
            self.assigned[x] = true;
            let ok = (0..n).filter(|&z| self.assigned[z]).all(|z| {
                let w = self.vmap[z];
                self.g_mult[x * n + z] == self.h_mult[y * m + w]
                    && self.g_mult[z * n + x] == self.h_mult[w * m + y]
            });
            if ok {
                self.used[y] = true;
                if self.run(depth + 1) {
                    return true;
                }
                self.used[y] = false;
            }
            self.assigned[x] = false;
        }
        false
    }
}

impl Category for MultigraphCat {
    type Obj = Graph;
    type Mor = GraphMorphism;

    fn source(&self, f: &GraphMorphism) -> Graph {
        f.source.clone()
    }

    fn target(&self, f: &GraphMorphism) -> Graph {
        f.target.clone()
    }

    fn identity(&self, a: &Graph) -> GraphMorphism {
        GraphMorphism::identity(a)
    }

    fn compose(&self, g: &GraphMorphism, f: &GraphMorphism) -> Result<GraphMorphism> {
        if f.target != g.source {
            return Err(mismatch("graph morphisms are not composable"));
        }
        Ok(GraphMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            vmap: compose_tables(&g.vmap, &f.vmap),
            emap: compose_tables(&g.emap, &f.emap),
        })
    }

    fn size(&self, a: &Graph) -> usize {
        a.vertices + a.edges.len()
    }

    fn initial(&self) -> Graph {
        Graph::default()
    }

    fn from_initial(&self, a: &Graph) -> GraphMorphism {
        GraphMorphism {
            source: Graph::default(),
            target: a.clone(),
            vmap: vec![],
            emap: vec![],
        }
    }

    fn homs(&self, a: &Graph, b: &Graph, limit: usize) -> Result<Vec<GraphMorphism>> {
        self.search(a, b, false, limit)
    }

    fn monos(&self, a: &Graph, b: &Graph, limit: usize) -> Result<Vec<GraphMorphism>> {
        self.search(a, b, true, limit)
    }

    fn is_mono(&self, f: &GraphMorphism) -> bool {
        is_injective(&f.vmap, f.target.vertices) && is_injective(&f.emap, f.target.edges.len())
    }

    fn is_epi(&self, f: &GraphMorphism) -> bool {
        is_surjective(&f.vmap, f.target.vertices) && is_surjective(&f.emap, f.target.edges.len())
    }

    fn inverse(&self, f: &GraphMorphism) -> Option<GraphMorphism> {
        Some(GraphMorphism {
            source: f.target.clone(),
            target: f.source.clone(),
            vmap: invert_table(&f.vmap, f.target.vertices)?,
            emap: invert_table(&f.emap, f.target.edges.len())?,
        })
    }

    fn find_iso(&self, a: &Graph, b: &Graph) -> Option<GraphMorphism> {
        if a.vertices != b.vertices || a.edges.len() != b.edges.len() {
            return None;
        }
        let (gp, hp) = (profiles(a), profiles(b));
        let (mut gs, mut hs) = (gp.clone(), hp.clone());
        gs.sort_unstable();
        hs.sort_unstable();
        if gs != hs {
            return None;
        }
        let mut s = IsoSearch {
            g: a,
            h: b,
            order: search_order(a),
            g_mult: a.multiplicities(),
            h_mult: b.multiplicities(),
            g_profile: gp,
            h_profile: hp,
            vmap: vec![0; a.vertices],
            assigned: vec![false; a.vertices],
            used: vec![false; b.vertices],
        };
        if !s.run(0) {
            return None;
        }
        let vmap = s.vmap;
        let mut buckets = b.edges_between();
        let n = b.vertices;
        let mut emap = Vec::with_capacity(a.edges.len());
        for &(u, v) in &a.edges {
            let bucket = &mut buckets[vmap[u] * n + vmap[v]];
            emap.push(bucket.remove(0));
        }
        Some(GraphMorphism {
            source: a.clone(),
            target: b.clone(),
            vmap,
            emap,
        })
    }

    fn pullback(&self, f: &GraphMorphism, g: &GraphMorphism) -> Result<Square<GraphMorphism>> {
        if f.target != g.target {
            return Err(mismatch("cospan legs have different targets"));
        }
        let vpairs = pullback_pairs(&f.vmap, &g.vmap);
        let epairs = pullback_pairs(&f.emap, &g.emap);
        let vindex: HashMap<(usize, usize), usize> =
            vpairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
        let (a, b) = (&f.source, &g.source);
        let edges = epairs
            .iter()
            .map(|&(e1, e2)| {
                (
                    vindex[&(a.src(e1), b.src(e2))],
                    vindex[&(a.tgt(e1), b.tgt(e2))],
                )
            })
            .collect();
        let apex = Graph {
            vertices: vpairs.len(),
            edges,
        };
        Ok(Square {
            p: GraphMorphism {
                source: apex.clone(),
                target: a.clone(),
                vmap: vpairs.iter().map(|pr| pr.0).collect(),
                emap: epairs.iter().map(|pr| pr.0).collect(),
            },
            q: GraphMorphism {
                source: apex,
                target: b.clone(),
                vmap: vpairs.iter().map(|pr| pr.1).collect(),
                emap: epairs.iter().map(|pr| pr.1).collect(),
            },
            f: f.clone(),
            g: g.clone(),
        })
    }

    fn pullback_mediator(
        &self,
        pb: &Square<GraphMorphism>,
        p: &GraphMorphism,
        q: &GraphMorphism,
    ) -> Result<GraphMorphism> {
        if p.source != q.source || p.target != pb.p.target || q.target != pb.q.target {
            return Err(mismatch("cone legs do not match the pullback cospan"));
        }
        let vpairs: Vec<_> = pb.p.vmap.iter().copied().zip(pb.q.vmap.iter().copied()).collect();
        let epairs: Vec<_> = pb.p.emap.iter().copied().zip(pb.q.emap.iter().copied()).collect();
        let vmap = pair_lookup(&vpairs, &p.vmap, &q.vmap)?;
        let emap = pair_lookup(&epairs, &p.emap, &q.emap)?;
        GraphMorphism::new(p.source.clone(), pb.p.source.clone(), vmap, emap)
            .map_err(|e| CatError::NotACone(e.to_string()))
    }

    fn pushout(&self, p: &GraphMorphism, q: &GraphMorphism) -> Result<Square<GraphMorphism>> {
        if p.source != q.source {
            return Err(mismatch("span legs have different sources"));
        }
        let (a, b) = (&p.target, &q.target);
        let (nv, fv, gv) = pushout_tables(a.vertices, b.vertices, &p.vmap, &q.vmap);
        let (ne, fe, ge) = pushout_tables(a.edges.len(), b.edges.len(), &p.emap, &q.emap);
        let mut edges = vec![(0, 0); ne];
        for (e, &(s, t)) in a.edges.iter().enumerate() {
            edges[fe[e]] = (fv[s], fv[t]);
        }
        for (e, &(s, t)) in b.edges.iter().enumerate() {
            edges[ge[e]] = (gv[s], gv[t]);
        }
        let corner = Graph {
            vertices: nv,
            edges,
        };
        Ok(Square {
            p: p.clone(),
            q: q.clone(),
            f: GraphMorphism {
                source: a.clone(),
                target: corner.clone(),
                vmap: fv,
                emap: fe,
            },
            g: GraphMorphism {
                source: b.clone(),
                target: corner,
                vmap: gv,
                emap: ge,
            },
        })
    }

    fn pushout_mediator(
        &self,
        po: &Square<GraphMorphism>,
        f: &GraphMorphism,
        g: &GraphMorphism,
    ) -> Result<GraphMorphism> {
        if f.target != g.target || f.source != po.f.source || g.source != po.g.source {
            return Err(mismatch("cocone legs do not match the pushout span"));
        }
        let corner = &po.f.target;
        let vmap = copair_tables(corner.vertices, &po.f.vmap, &po.g.vmap, &f.vmap, &g.vmap)?;
        let emap = copair_tables(corner.edges.len(), &po.f.emap, &po.g.emap, &f.emap, &g.emap)?;
        GraphMorphism::new(corner.clone(), f.target.clone(), vmap, emap)
            .map_err(|e| CatError::NotACocone(e.to_string()))
    }

    fn equalizer(&self, f: &GraphMorphism, g: &GraphMorphism) -> Result<GraphMorphism> {
        if f.source != g.source || f.target != g.target {
            return Err(mismatch("equalizer of non-parallel pair"));
        }
        let a = &f.source;
        let vs: Vec<usize> = (0..a.vertices).filter(|&v| f.vmap[v] == g.vmap[v]).collect();
        let es: Vec<usize> = (0..a.edges.len()).filter(|&e| f.emap[e] == g.emap[e]).collect();
        let mut pos = vec![usize::MAX; a.vertices];
        for (i, &v) in vs.iter().enumerate() {
            pos[v] = i;
        }
        let edges = es.iter().map(|&e| (pos[a.src(e)], pos[a.tgt(e)])).collect();
        Ok(GraphMorphism {
            source: Graph {
                vertices: vs.len(),
                edges,
            },
            target: a.clone(),
            vmap: vs,
            emap: es,
        })
    }

    fn lift_through_mono(&self, e: &GraphMorphism, h: &GraphMorphism) -> Option<GraphMorphism> {
        if e.target != h.target {
            return None;
        }
        let vmap = lift_table(&e.vmap, e.target.vertices, &h.vmap)?;
        let emap = lift_table(&e.emap, e.target.edges.len(), &h.emap)?;
        GraphMorphism::new(h.source.clone(), e.source.clone(), vmap, emap).ok()
    }
}

impl Concrete for MultigraphCat {
    fn sort_names(&self) -> Vec<String> {
        vec!["nodes".into(), "edges".into()]
    }

    fn carrier_sizes(&self, a: &Graph) -> Vec<usize> {
        vec![a.vertices, a.edges.len()]
    }

    fn components(&self, f: &GraphMorphism) -> Vec<Vec<usize>> {
        vec![f.vmap.clone(), f.emap.clone()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universal::{is_pullback, is_pushout, is_regular_mono};

    fn edge() -> Graph {
        Graph::path(1)
    }

    fn vertex_into(g: &Graph, v: usize) -> GraphMorphism {
        GraphMorphism::new(Graph::discrete(1), g.clone(), vec![v], vec![]).unwrap()
    }

    #[test]
    fn morphism_validation() {
        assert!(GraphMorphism::new(edge(), edge(), vec![1, 0], vec![0]).is_err());
        assert!(GraphMorphism::new(edge(), edge(), vec![0, 1], vec![0]).is_ok());
    }

    #[test]
    fn gluing_two_edges_makes_a_path() {
        // target of the first edge glued to source of the second
        let p = vertex_into(&edge(), 1);
        let q = vertex_into(&edge(), 0);
        let po = MultigraphCat.pushout(&p, &q).unwrap();
        let corner = po.f.target();
        assert_eq!(corner.vertex_count(), 3);
        assert_eq!(corner.edge_count(), 2);
        assert!(MultigraphCat.find_iso(corner, &Graph::path(2)).is_some());
        assert!(is_pushout(&MultigraphCat, &po).unwrap());
    }

    #[test]
    fn pullback_over_loop_is_product() {
        let lp = Graph::new(1, vec![(0, 0)]).unwrap();
        let to_loop = |g: &Graph| {
            GraphMorphism::new(g.clone(), lp.clone(), vec![0; g.vertex_count()], vec![0; g.edge_count()])
                .unwrap()
        };
        let a = Graph::path(1);
        let b = Graph::path(2);
        let pb = MultigraphCat.pullback(&to_loop(&a), &to_loop(&b)).unwrap();
        let apex = pb.p.source();
        assert_eq!(apex.vertex_count(), 6);
        assert_eq!(apex.edge_count(), 2);
        assert!(is_pullback(&MultigraphCat, &pb).unwrap());
    }

    #[test]
    fn identity_span_pushout() {
        let g = Graph::cycle(3);
        let id = GraphMorphism::identity(&g);
        let po = MultigraphCat.pushout(&id, &id).unwrap();
        assert_eq!(po.f.target(), &g);
    }

    #[test]
    fn hom_counts() {
        assert_eq!(MultigraphCat.homs(&edge(), &Graph::cycle(3), 100).unwrap().len(), 3);
        assert_eq!(MultigraphCat.homs(&Graph::discrete(1), &Graph::discrete(4), 100).unwrap().len(), 4);
        let g = Graph::new(3, vec![(0, 1), (1, 2), (1, 2), (2, 2)]).unwrap();
        assert!(MultigraphCat
            .homs(&g, &g, 1000)
            .unwrap()
            .contains(&GraphMorphism::identity(&g)));
    }

    #[test]
    fn homs_sorted_and_unique() {
        let g = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let homs = MultigraphCat.homs(&g, &g, 1000).unwrap();
        for w in homs.windows(2) {
            assert!((&w[0].vmap, &w[0].emap) < (&w[1].vmap, &w[1].emap));
        }
        // vertices fixed, both edges to either parallel edge: 4
        assert_eq!(homs.len(), 4);
        assert_eq!(MultigraphCat.monos(&g, &g, 1000).unwrap().len(), 2);
    }

    #[test]
    fn iso_search() {
        let g = Graph::new(3, vec![(0, 1), (1, 2), (2, 0), (0, 0)]).unwrap();
        let h = Graph::new(3, vec![(2, 1), (1, 0), (0, 2), (2, 2)]).unwrap();
        let iso = MultigraphCat.find_iso(&g, &h).unwrap();
        assert!(MultigraphCat.inverse(&iso).is_some());
        assert!(MultigraphCat.find_iso(&edge(), &Graph::discrete(2)).is_none());
    }

    #[test]
    fn vertex_into_edge_has_edge_glued_cokernel_pair() {
        let m = vertex_into(&edge(), 0);
        let po = MultigraphCat.pushout(&m, &m).unwrap();
        let corner = po.f.target();
        assert_eq!(corner.vertex_count(), 3);
        assert_eq!(corner.edge_count(), 2);
        assert!(is_regular_mono(&MultigraphCat, &m).unwrap());
    }

    #[test]
    fn equalizer_is_subgraph_of_agreement() {
        let g = Graph::path(2);
        let h = Graph::new(3, vec![(0, 1), (1, 2), (1, 0)]).unwrap();
        let f1 = GraphMorphism::new(g.clone(), h.clone(), vec![0, 1, 2], vec![0, 1]).unwrap();
        let f2 = GraphMorphism::new(g.clone(), h.clone(), vec![0, 1, 0], vec![0, 2]).unwrap();
        let e = MultigraphCat.equalizer(&f1, &f2).unwrap();
        assert_eq!(e.vmap(), &[0, 1]);
        assert_eq!(e.emap(), &[0]);
    }
}
