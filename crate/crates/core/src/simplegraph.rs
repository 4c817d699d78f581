//! Directed simple graphs: a vertex set with an edge relation (self-loops
//! allowed) and edge-preserving vertex maps.
//!
//! Edges form a relation rather than a set, so pushouts identify parallel
//! edges. That is what makes pushouts along non-regular monos fail to be
//! pullbacks here; [`glued_edge_square`] is the standard witness.

use serde::{Deserialize, Serialize};

use crate::category::{Category, Concrete, Square};
use crate::error::{mismatch, CatError, Result};
use crate::finset::{
    compose_tables, copair_tables, invert_table, is_injective, is_surjective, lift_table,
    pair_lookup, pullback_pairs, pushout_tables,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct SimpleGraph {
    vertices: usize,
    adj: Vec<bool>,
}

impl SimpleGraph {
    pub fn new(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![false; vertices * vertices];
        for &(s, t) in edges {
            if s >= vertices || t >= vertices {
                return Err(CatError::Invalid(format!(
                    "edge ({s}, {t}) leaves the {vertices} vertices"
                )));
            }
            adj[s * vertices + t] = true;
        }
        Ok(SimpleGraph { vertices, adj })
    }

    pub fn discrete(vertices: usize) -> Self {
        SimpleGraph {
            vertices,
            adj: vec![false; vertices * vertices],
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn has_edge(&self, s: usize, t: usize) -> bool {
        self.adj[s * self.vertices + t]
    }

    /// Edges in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.vertices;
        (0..n * n)
            .filter(|&i| self.adj[i])
            .map(|i| (i / n, i % n))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().filter(|&&b| b).count()
    }

    /// Induced subgraph on `vs` (in the given order).
    pub fn induced(&self, vs: &[usize]) -> SimpleGraph {
        let mut edges = Vec::new();
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate() {
                if self.has_edge(a, b) {
                    edges.push((i, j));
                }
            }
        }
        SimpleGraph::new(vs.len(), &edges).expect("indices are in range")
    }

    fn profile(&self, v: usize) -> (usize, usize, bool) {
        let n = self.vertices;
        let out = (0..n).filter(|&w| w != v && self.has_edge(v, w)).count();
        let inc = (0..n).filter(|&w| w != v && self.has_edge(w, v)).count();
        (out, inc, self.has_edge(v, v))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SgMorphism {
    source: SimpleGraph,
    target: SimpleGraph,
    vmap: Vec<usize>,
}

impl SgMorphism {
    pub fn new(source: SimpleGraph, target: SimpleGraph, vmap: Vec<usize>) -> Result<Self> {
        if vmap.len() != source.vertices || vmap.iter().any(|&v| v >= target.vertices) {
            return Err(CatError::Invalid("vertex map does not fit the graphs".into()));
        }
        for (s, t) in source.edges() {
            if !target.has_edge(vmap[s], vmap[t]) {
                return Err(CatError::Invalid(format!("edge ({s}, {t}) is not preserved")));
            }
        }
        Ok(SgMorphism {
            source,
            target,
            vmap,
        })
    }

    pub fn identity(g: &SimpleGraph) -> Self {
        SgMorphism {
            source: g.clone(),
            target: g.clone(),
            vmap: (0..g.vertices).collect(),
        }
    }

    pub fn source(&self) -> &SimpleGraph {
        &self.source
    }

    pub fn target(&self) -> &SimpleGraph {
        &self.target
    }

    pub fn vmap(&self) -> &[usize] {
        &self.vmap
    }

    /// Whether every edge between image vertices comes from an edge of the source.
    pub fn reflects_edges(&self) -> bool {
        let n = self.source.vertices;
        (0..n).all(|a| {
            (0..n).all(|b| {
                !self.target.has_edge(self.vmap[a], self.vmap[b]) || self.source.has_edge(a, b)
            })
        })
    }
}

/// Structural regular-mono test: injective on vertices and edge reflecting.
pub fn sg_is_regular_mono(m: &SgMorphism) -> bool {
    is_injective(&m.vmap, m.target.vertices) && m.reflects_edges()
}

/// The pushout square of the classic counterexample: a discrete pair `A`
/// glued into a single edge `B` and into an edge with an extra vertex `C`.
///
/// ```text
///   A = •  ∘        --p-->  B = •→∘
///   |                          |
///   q (mono, not regular)      f
///   v                          v
///   C = •→∘  ◦      --g-->  D = •→∘  ◦
/// ```
///
/// It is a pushout, its legs are monos, and it is not a pullback.
pub fn glued_edge_square() -> Square<SgMorphism> {
    let a = SimpleGraph::discrete(2);
    let b = SimpleGraph::new(2, &[(0, 1)]).unwrap();
    let c = SimpleGraph::new(3, &[(0, 1)]).unwrap();
    let d = SimpleGraph::new(3, &[(0, 1)]).unwrap();
    Square {
        p: SgMorphism::new(a.clone(), b.clone(), vec![0, 1]).unwrap(),
        q: SgMorphism::new(a, c.clone(), vec![0, 1]).unwrap(),
        f: SgMorphism::new(b, d.clone(), vec![0, 1]).unwrap(),
        g: SgMorphism::new(c, d, vec![0, 1, 2]).unwrap(),
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SimpleGraphCat;

struct Search<'a> {
    g: &'a SimpleGraph,
    h: &'a SimpleGraph,
    injective: bool,
    limit: usize,
    vmap: Vec<usize>,
    used: Vec<bool>,
    out: Vec<SgMorphism>,
}

impl Search<'_> {
    fn run(&mut self, x: usize) -> Result<()> {
        if x == self.g.vertices {
            if self.out.len() >= self.limit {
                return Err(CatError::BudgetExceeded { limit: self.limit });
            }
            self.out.push(SgMorphism {
                source: self.g.clone(),
                target: self.h.clone(),
                vmap: self.vmap.clone(),
            });
            return Ok(());
        }
        for y in 0..self.h.vertices {
            if self.injective && self.used[y] {
                continue;
            }
            self.vmap[x] = y;
            let ok = (0..=x).all(|z| {
                (!self.g.has_edge(x, z) || self.h.has_edge(y, self.vmap[z]))
                    && (!self.g.has_edge(z, x) || self.h.has_edge(self.vmap[z], y))
            });
            if ok {
                self.used[y] = true;
                self.run(x + 1)?;
                self.used[y] = false;
            }
        }
        Ok(())
    }
}

impl SimpleGraphCat {
    fn search(&self, g: &SimpleGraph, h: &SimpleGraph, injective: bool, limit: usize) -> Result<Vec<SgMorphism>> {
        if injective && g.vertices > h.vertices {
            return Ok(vec![]);
        }
        let mut s = Search {
            g,
            h,
            injective,
            limit,
            vmap: vec![0; g.vertices],
            used: vec![false; h.vertices],
            out: vec![],
        };
        s.run(0)?;
        Ok(s.out)
    }
}

impl Category for SimpleGraphCat {
    type Obj = SimpleGraph;
    type Mor = SgMorphism;

    fn source(&self, f: &SgMorphism) -> SimpleGraph {
        f.source.clone()
    }

    fn target(&self, f: &SgMorphism) -> SimpleGraph {
        f.target.clone()
    }

    fn identity(&self, a: &SimpleGraph) -> SgMorphism {
        SgMorphism::identity(a)
    }

    fn compose(&self, g: &SgMorphism, f: &SgMorphism) -> Result<SgMorphism> {
        if f.target != g.source {
            return Err(mismatch("graph morphisms are not composable"));
        }
        Ok(SgMorphism {
            source: f.source.clone(),
            target: g.target.clone(),
            vmap: compose_tables(&g.vmap, &f.vmap),
        })
    }

    fn size(&self, a: &SimpleGraph) -> usize {
        a.vertices + a.edge_count()
    }

    fn initial(&self) -> SimpleGraph {
        SimpleGraph::default()
    }

    fn from_initial(&self, a: &SimpleGraph) -> SgMorphism {
        SgMorphism {
            source: SimpleGraph::default(),
            target: a.clone(),
            vmap: vec![],
        }
    }

    fn homs(&self, a: &SimpleGraph, b: &SimpleGraph, limit: usize) -> Result<Vec<SgMorphism>> {
        self.search(a, b, false, limit)
    }

    fn monos(&self, a: &SimpleGraph, b: &SimpleGraph, limit: usize) -> Result<Vec<SgMorphism>> {
        self.search(a, b, true, limit)
    }

    fn is_mono(&self, f: &SgMorphism) -> bool {
        is_injective(&f.vmap, f.target.vertices)
    }

    fn is_epi(&self, f: &SgMorphism) -> bool {
        is_surjective(&f.vmap, f.target.vertices)
    }

    fn inverse(&self, f: &SgMorphism) -> Option<SgMorphism> {
        let vmap = invert_table(&f.vmap, f.target.vertices)?;
        f.reflects_edges().then(|| SgMorphism {
            source: f.target.clone(),
            target: f.source.clone(),
            vmap,
        })
    }

    fn find_iso(&self, a: &SimpleGraph, b: &SimpleGraph) -> Option<SgMorphism> {
        if a.vertices != b.vertices || a.edge_count() != b.edge_count() {
            return None;
        }
        let pa: Vec<_> = (0..a.vertices).map(|v| a.profile(v)).collect();
        let pb: Vec<_> = (0..b.vertices).map(|v| b.profile(v)).collect();
        let (mut sa, mut sb) = (pa.clone(), pb.clone());
        sa.sort_unstable();
        sb.sort_unstable();
        if sa != sb {
            return None;
        }
        fn go(
            a: &SimpleGraph,
            b: &SimpleGraph,
            pa: &[(usize, usize, bool)],
            pb: &[(usize, usize, bool)],
            x: usize,
            vmap: &mut Vec<usize>,
            used: &mut Vec<bool>,
        ) -> bool {
            if x == a.vertices {
                return true;
            }
            for y in 0..b.vertices {
                if used[y] || pa[x] != pb[y] {
                    continue;
                }
                let ok = (0..x).all(|z| {
                    a.has_edge(x, z) == b.has_edge(y, vmap[z])
                        && a.has_edge(z, x) == b.has_edge(vmap[z], y)
                });
                if ok {
                    vmap[x] = y;
                    used[y] = true;
                    if go(a, b, pa, pb, x + 1, vmap, used) {
                        return true;
                    }
                    used[y] = false;
                }
            }
            false
        }
        let mut vmap = vec![0; a.vertices];
        let mut used = vec![false; b.vertices];
        go(a, b, &pa, &pb, 0, &mut vmap, &mut used).then(|| SgMorphism {
            source: a.clone(),
            target: b.clone(),
            vmap,
        })
    }

    fn pullback(&self, f: &SgMorphism, g: &SgMorphism) -> Result<Square<SgMorphism>> {
        if f.target != g.target {
            return Err(mismatch("cospan legs have different targets"));
        }
        let pairs = pullback_pairs(&f.vmap, &g.vmap);
        let (a, b) = (&f.source, &g.source);
        let mut edges = Vec::new();
        for (i, &(a1, b1)) in pairs.iter().enumerate() {
            for (j, &(a2, b2)) in pairs.iter().enumerate() {
                if a.has_edge(a1, a2) && b.has_edge(b1, b2) {
                    edges.push((i, j));
                }
            }
        }
        let apex = SimpleGraph::new(pairs.len(), &edges)?;
        Ok(Square {
            p: SgMorphism {
                source: apex.clone(),
                target: a.clone(),
                vmap: pairs.iter().map(|pr| pr.0).collect(),
            },
            q: SgMorphism {
                source: apex,
                target: b.clone(),
                vmap: pairs.iter().map(|pr| pr.1).collect(),
            },
            f: f.clone(),
            g: g.clone(),
        })
    }

    fn pullback_mediator(&self, pb: &Square<SgMorphism>, p: &SgMorphism, q: &SgMorphism) -> Result<SgMorphism> {
        if p.source != q.source || p.target != pb.p.target || q.target != pb.q.target {
            return Err(mismatch("cone legs do not match the pullback cospan"));
        }
        let pairs: Vec<_> = pb.p.vmap.iter().copied().zip(pb.q.vmap.iter().copied()).collect();
        let vmap = pair_lookup(&pairs, &p.vmap, &q.vmap)?;
        SgMorphism::new(p.source.clone(), pb.p.source.clone(), vmap)
            .map_err(|e| CatError::NotACone(e.to_string()))
    }

    fn pushout(&self, p: &SgMorphism, q: &SgMorphism) -> Result<Square<SgMorphism>> {
        if p.source != q.source {
            return Err(mismatch("span legs have different sources"));
        }
        let (a, b) = (&p.target, &q.target);
        let (n, fv, gv) = pushout_tables(a.vertices, b.vertices, &p.vmap, &q.vmap);
        let mut edges: Vec<(usize, usize)> = a.edges().into_iter().map(|(s, t)| (fv[s], fv[t])).collect();
        edges.extend(b.edges().into_iter().map(|(s, t)| (gv[s], gv[t])));
        let corner = SimpleGraph::new(n, &edges)?;
        Ok(Square {
            p: p.clone(),
            q: q.clone(),
            f: SgMorphism {
                source: a.clone(),
                target: corner.clone(),
                vmap: fv,
            },
            g: SgMorphism {
                source: b.clone(),
                target: corner,
                vmap: gv,
            },
        })
    }

    fn pushout_mediator(&self, po: &Square<SgMorphism>, f: &SgMorphism, g: &SgMorphism) -> Result<SgMorphism> {
        if f.target != g.target || f.source != po.f.source || g.source != po.g.source {
            return Err(mismatch("cocone legs do not match the pushout span"));
        }
        let corner = &po.f.target;
        let vmap = copair_tables(corner.vertices, &po.f.vmap, &po.g.vmap, &f.vmap, &g.vmap)?;
        SgMorphism::new(corner.clone(), f.target.clone(), vmap)
            .map_err(|e| CatError::NotACocone(e.to_string()))
    }

    fn equalizer(&self, f: &SgMorphism, g: &SgMorphism) -> Result<SgMorphism> {
        if f.source != g.source || f.target != g.target {
            return Err(mismatch("equalizer of non-parallel pair"));
        }
        let vs: Vec<usize> = (0..f.source.vertices).filter(|&v| f.vmap[v] == g.vmap[v]).collect();
        Ok(SgMorphism {
            source: f.source.induced(&vs),
            target: f.source.clone(),
            vmap: vs,
        })
    }

    fn lift_through_mono(&self, e: &SgMorphism, h: &SgMorphism) -> Option<SgMorphism> {
        if e.target != h.target {
            return None;
        }
        let vmap = lift_table(&e.vmap, e.target.vertices, &h.vmap)?;
        SgMorphism::new(h.source.clone(), e.source.clone(), vmap).ok()
    }
}

impl Concrete for SimpleGraphCat {
    fn sort_names(&self) -> Vec<String> {
        vec!["nodes".into()]
    }

    fn carrier_sizes(&self, a: &SimpleGraph) -> Vec<usize> {
        vec![a.vertices]
    }

    fn components(&self, f: &SgMorphism) -> Vec<Vec<usize>> {
        vec![f.vmap.clone()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::universal::{classify, commutes, is_pullback, is_pushout, is_regular_mono};

    #[test]
    fn glued_edge_is_pushout_not_pullback() {
        let sq = glued_edge_square();
        assert!(commutes(&SimpleGraphCat, &sq).unwrap());
        assert!(is_pushout(&SimpleGraphCat, &sq).unwrap());
        assert!(!is_pullback(&SimpleGraphCat, &sq).unwrap());
        assert!(SimpleGraphCat.is_mono(&sq.q));
        assert!(!sg_is_regular_mono(&sq.q));
        assert!(!is_regular_mono(&SimpleGraphCat, &sq.q).unwrap());
    }

    #[test]
    fn glued_edge_pushout_recomputed() {
        let sq = glued_edge_square();
        let po = SimpleGraphCat.pushout(&sq.p, &sq.q).unwrap();
        let d = po.f.target();
        assert_eq!(d.vertex_count(), 3);
        assert_eq!(d.edges(), vec![(0, 1)]);
    }

    #[test]
    fn glued_edge_pullback_has_an_edge() {
        let sq = glued_edge_square();
        let pb = SimpleGraphCat.pullback(&sq.f, &sq.g).unwrap();
        let apex = pb.p.source();
        assert_eq!(apex.vertex_count(), 2);
        assert_eq!(apex.edge_count(), 1);
    }

    #[test]
    fn pullback_into_single_vertex_is_discrete_product() {
        let pt = SimpleGraph::discrete(1);
        let a = SimpleGraph::discrete(2);
        let b = SimpleGraph::discrete(3);
        let f = SgMorphism::new(a, pt.clone(), vec![0, 0]).unwrap();
        let g = SgMorphism::new(b, pt, vec![0, 0, 0]).unwrap();
        let pb = SimpleGraphCat.pullback(&f, &g).unwrap();
        assert_eq!(pb.p.source(), &SimpleGraph::discrete(6));
    }

    #[test]
    fn parallel_edges_collapse_in_pushout() {
        let k = SimpleGraph::discrete(2);
        let e = SimpleGraph::new(2, &[(0, 1)]).unwrap();
        let m = SgMorphism::new(k, e, vec![0, 1]).unwrap();
        let po = SimpleGraphCat.pushout(&m, &m).unwrap();
        assert_eq!(po.f.target().edges(), vec![(0, 1)]);
        assert_eq!(po.f, po.g);
    }

    #[test]
    fn regular_mono_structural_cases() {
        let g = SimpleGraph::new(3, &[(0, 1), (1, 2), (2, 0)]).unwrap();
        let induced = SgMorphism::new(g.induced(&[0, 1]), g.clone(), vec![0, 1]).unwrap();
        assert!(sg_is_regular_mono(&induced));
        assert!(is_regular_mono(&SimpleGraphCat, &induced).unwrap());
        let id = SgMorphism::identity(&g);
        assert!(sg_is_regular_mono(&id));
        let discrete = SgMorphism::new(SimpleGraph::discrete(2), g, vec![0, 1]).unwrap();
        assert!(!sg_is_regular_mono(&discrete));
        assert!(!is_regular_mono(&SimpleGraphCat, &discrete).unwrap());
    }

    #[test]
    fn equalizer_is_induced() {
        let sq = SimpleGraph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let path = SimpleGraph::new(3, &[(0, 1), (1, 2), (2, 1), (1, 0)]).unwrap();
        let f = SgMorphism::new(sq.clone(), path.clone(), vec![0, 1, 2, 1]).unwrap();
        let g = SgMorphism::new(sq, path, vec![0, 1, 0, 1]).unwrap();
        let e = SimpleGraphCat.equalizer(&f, &g).unwrap();
        assert_eq!(e.vmap(), &[0, 1, 3]);
        assert_eq!(e.source().edges(), vec![(0, 1), (2, 0)]);
    }

    #[test]
    fn discrete_into_edge_is_bimorphism_not_iso() {
        let m = SgMorphism::new(SimpleGraph::discrete(2), SimpleGraph::new(2, &[(0, 1)]).unwrap(), vec![0, 1])
            .unwrap();
        let c = classify(&SimpleGraphCat, &m, 1000).unwrap();
        assert!(c.mono && c.epi && !c.iso && !c.regular_mono && !c.regular_epi);
        assert!(c.respects_hierarchy());
    }
}
