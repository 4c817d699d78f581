//! Finite sets `{0, …, n-1}` and total functions between them.
//!
//! The table-level helpers here (pullback pairs, pushout quotients, lifts) are
//! reused componentwise by every other instance.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::category::{Category, Concrete, Square};
use crate::error::{mismatch, CatError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinSet(pub usize);

impl FinSet {
    pub fn size(self) -> usize {
        self.0
    }
}

/// A function between finite sets, given by its image table.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinFn {
    source: FinSet,
    target: FinSet,
    table: Vec<usize>,
}

impl FinFn {
    pub fn new(target: usize, table: Vec<usize>) -> Result<Self> {
        if let Some(bad) = table.iter().find(|&&x| x >= target) {
            return Err(CatError::Invalid(format!(
                "image {bad} out of range for target of size {target}"
            )));
        }
        Ok(FinFn {
            source: FinSet(table.len()),
            target: FinSet(target),
            table,
        })
    }

    pub fn identity(n: usize) -> Self {
        FinFn {
            source: FinSet(n),
            target: FinSet(n),
            table: (0..n).collect(),
        }
    }

    pub fn source(&self) -> FinSet {
        self.source
    }

    pub fn target(&self) -> FinSet {
        self.target
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    pub fn apply(&self, x: usize) -> usize {
        self.table[x]
    }

    pub fn then(&self, g: &FinFn) -> Result<FinFn> {
        if self.target != g.source {
            return Err(mismatch(format!(
                "cannot compose {:?}→{:?} with {:?}→{:?}",
                self.source, self.target, g.source, g.target
            )));
        }
        Ok(FinFn {
            source: self.source,
            target: g.target,
            table: compose_tables(&g.table, &self.table),
        })
    }

    pub fn is_injective(&self) -> bool {
        is_injective(&self.table, self.target.0)
    }

    pub fn is_surjective(&self) -> bool {
        is_surjective(&self.table, self.target.0)
    }
}

pub(crate) fn compose_tables(g: &[usize], f: &[usize]) -> Vec<usize> {
    f.iter().map(|&x| g[x]).collect()
}

pub(crate) fn is_injective(table: &[usize], target: usize) -> bool {
    let mut seen = vec![false; target];
    for &x in table {
        if seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

pub(crate) fn is_surjective(table: &[usize], target: usize) -> bool {
    let mut seen = vec![false; target];
    for &x in table {
        seen[x] = true;
    }
    seen.into_iter().all(|s| s)
}

/// Inverse of a bijective table.
pub(crate) fn invert_table(table: &[usize], target: usize) -> Option<Vec<usize>> {
    if table.len() != target || !is_injective(table, target) {
        return None;
    }
    let mut inv = vec![0; target];
    for (i, &x) in table.iter().enumerate() {
        inv[x] = i;
    }
    Some(inv)
}

/// Pairs `(a, b)` with `f(a) = g(b)`, in lexicographic order.
pub(crate) fn pullback_pairs(f: &[usize], g: &[usize]) -> Vec<(usize, usize)> {
    let mut by_image: HashMap<usize, Vec<usize>> = HashMap::new();
    for (b, &c) in g.iter().enumerate() {
        by_image.entry(c).or_default().push(b);
    }
    let mut pairs = Vec::new();
    for (a, &c) in f.iter().enumerate() {
        if let Some(bs) = by_image.get(&c) {
            pairs.extend(bs.iter().map(|&b| (a, b)));
        }
    }
    pairs
}

/// Mediating table from a cone `(p, q)` into a jointly injective family of pairs.
pub(crate) fn pair_lookup(
    pairs: &[(usize, usize)],
    p: &[usize],
    q: &[usize],
) -> Result<Vec<usize>> {
    let index: HashMap<(usize, usize), usize> =
        pairs.iter().enumerate().map(|(i, &pr)| (pr, i)).collect();
    p.iter()
        .zip(q)
        .map(|(&a, &b)| {
            index
                .get(&(a, b))
                .copied()
                .ok_or_else(|| CatError::NotACone(format!("pair ({a}, {b}) is not in the apex")))
        })
        .collect()
}

#[derive(Debug, Clone)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }
}

/// Quotient of `A + B` by the equivalence generated by `p(d) ~ q(d)`.
///
/// Returns the number of classes and the two coprojection tables. Classes are
/// numbered by their least representative, `A` elements before `B` elements.
pub(crate) fn pushout_tables(
    size_a: usize,
    size_b: usize,
    p: &[usize],
    q: &[usize],
) -> (usize, Vec<usize>, Vec<usize>) {
    let mut uf = UnionFind::new(size_a + size_b);
    for (&a, &b) in p.iter().zip(q) {
        uf.union(a, size_a + b);
    }
    let mut class_of_root = vec![usize::MAX; size_a + size_b];
    let mut classes = 0;
    let mut assign = vec![0; size_a + size_b];
    for x in 0..size_a + size_b {
        let r = uf.find(x);
        if class_of_root[r] == usize::MAX {
            class_of_root[r] = classes;
            classes += 1;
        }
        assign[x] = class_of_root[r];
    }
    let f = assign[..size_a].to_vec();
    let g = assign[size_a..].to_vec();
    (classes, f, g)
}

/// Mediator out of a jointly surjective pair `(f, g)` into a cocone `(f2, g2)`.
pub(crate) fn copair_tables(
    corner: usize,
    f: &[usize],
    g: &[usize],
    f2: &[usize],
    g2: &[usize],
) -> Result<Vec<usize>> {
    let mut out: Vec<Option<usize>> = vec![None; corner];
    for (legs, images) in [(f, f2), (g, g2)] {
        for (&c, &t) in legs.iter().zip(images) {
            match out[c] {
                None => out[c] = Some(t),
                Some(prev) if prev == t => {}
                Some(prev) => {
                    return Err(CatError::NotACocone(format!(
                        "class {c} would map to both {prev} and {t}"
                    )))
                }
            }
        }
    }
    out.into_iter()
        .enumerate()
        .map(|(c, x)| x.ok_or_else(|| CatError::Invalid(format!("class {c} is not covered"))))
        .collect()
}

/// `u` with `e ∘ u = h`, for injective `e`.
pub(crate) fn lift_table(e: &[usize], e_target: usize, h: &[usize]) -> Option<Vec<usize>> {
    let mut pre = vec![None; e_target];
    for (i, &x) in e.iter().enumerate() {
        pre[x] = Some(i);
    }
    h.iter().map(|&x| pre[x]).collect()
}

/// Every table of length `n` with entries below `m`, lexicographically.
pub(crate) fn all_tables(n: usize, m: usize, limit: usize) -> Result<Vec<Vec<usize>>> {
    let count = (m as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > limit as u128 {
        return Err(CatError::BudgetExceeded { limit });
    }
    let mut out = Vec::with_capacity(count as usize);
    if n > 0 && m == 0 {
        return Ok(out);
    }
    let mut cur = vec![0; n];
    loop {
        out.push(cur.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            cur[i] += 1;
            if cur[i] < m {
                break;
            }
            cur[i] = 0;
        }
    }
}

/// The category of finite sets.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FinSetCat;

impl Category for FinSetCat {
    type Obj = FinSet;
    type Mor = FinFn;

    fn source(&self, f: &FinFn) -> FinSet {
        f.source
    }

    fn target(&self, f: &FinFn) -> FinSet {
        f.target
    }

    fn identity(&self, a: &FinSet) -> FinFn {
        FinFn::identity(a.0)
    }

    fn compose(&self, g: &FinFn, f: &FinFn) -> Result<FinFn> {
        f.then(g)
    }

    fn size(&self, a: &FinSet) -> usize {
        a.0
    }

    fn initial(&self) -> FinSet {
        FinSet(0)
    }

    fn from_initial(&self, a: &FinSet) -> FinFn {
        FinFn {
            source: FinSet(0),
            target: *a,
            table: vec![],
        }
    }

    fn homs(&self, a: &FinSet, b: &FinSet, limit: usize) -> Result<Vec<FinFn>> {
        Ok(all_tables(a.0, b.0, limit)?
            .into_iter()
            .map(|table| FinFn {
                source: *a,
                target: *b,
                table,
            })
            .collect())
    }

    fn is_mono(&self, f: &FinFn) -> bool {
        f.is_injective()
    }

    fn is_epi(&self, f: &FinFn) -> bool {
        f.is_surjective()
    }

    fn inverse(&self, f: &FinFn) -> Option<FinFn> {
        invert_table(&f.table, f.target.0).map(|table| FinFn {
            source: f.target,
            target: f.source,
            table,
        })
    }

    fn find_iso(&self, a: &FinSet, b: &FinSet) -> Option<FinFn> {
        (a == b).then(|| FinFn::identity(a.0))
    }

    fn pullback(&self, f: &FinFn, g: &FinFn) -> Result<Square<FinFn>> {
        if f.target != g.target {
            return Err(mismatch("cospan legs have different targets"));
        }
        let pairs = pullback_pairs(&f.table, &g.table);
        let apex = FinSet(pairs.len());
        Ok(Square {
            p: FinFn {
                source: apex,
                target: f.source,
                table: pairs.iter().map(|&(a, _)| a).collect(),
            },
            q: FinFn {
                source: apex,
                target: g.source,
                table: pairs.iter().map(|&(_, b)| b).collect(),
            },
            f: f.clone(),
            g: g.clone(),
        })
    }

    fn pullback_mediator(&self, pb: &Square<FinFn>, p: &FinFn, q: &FinFn) -> Result<FinFn> {
        if p.source != q.source || p.target != pb.p.target || q.target != pb.q.target {
            return Err(mismatch("cone legs do not match the pullback cospan"));
        }
        let pairs: Vec<_> = pb.p.table.iter().copied().zip(pb.q.table.iter().copied()).collect();
        let table = pair_lookup(&pairs, &p.table, &q.table)?;
        Ok(FinFn {
            source: p.source,
            target: pb.p.source,
            table,
        })
    }

    fn pushout(&self, p: &FinFn, q: &FinFn) -> Result<Square<FinFn>> {
        if p.source != q.source {
            return Err(mismatch("span legs have different sources"));
        }
        let (n, f, g) = pushout_tables(p.target.0, q.target.0, &p.table, &q.table);
        let corner = FinSet(n);
        Ok(Square {
            p: p.clone(),
            q: q.clone(),
            f: FinFn {
                source: p.target,
                target: corner,
                table: f,
            },
            g: FinFn {
                source: q.target,
                target: corner,
                table: g,
            },
        })
    }

    fn pushout_mediator(&self, po: &Square<FinFn>, f: &FinFn, g: &FinFn) -> Result<FinFn> {
        if f.target != g.target || f.source != po.f.source || g.source != po.g.source {
            return Err(mismatch("cocone legs do not match the pushout span"));
        }
        let table = copair_tables(po.f.target.0, &po.f.table, &po.g.table, &f.table, &g.table)?;
        Ok(FinFn {
            source: po.f.target,
            target: f.target,
            table,
        })
    }

    fn equalizer(&self, f: &FinFn, g: &FinFn) -> Result<FinFn> {
        if f.source != g.source || f.target != g.target {
            return Err(mismatch("equalizer of non-parallel pair"));
        }
        let table: Vec<usize> = (0..f.source.0).filter(|&x| f.table[x] == g.table[x]).collect();
        Ok(FinFn {
            source: FinSet(table.len()),
            target: f.source,
            table,
        })
    }

    fn lift_through_mono(&self, e: &FinFn, h: &FinFn) -> Option<FinFn> {
        if e.target != h.target {
            return None;
        }
        lift_table(&e.table, e.target.0, &h.table).map(|table| FinFn {
            source: h.source,
            target: e.source,
            table,
        })
    }
}

impl Concrete for FinSetCat {
    fn sort_names(&self) -> Vec<String> {
        vec!["elements".into()]
    }

    fn carrier_sizes(&self, a: &FinSet) -> Vec<usize> {
        vec![a.0]
    }

    fn components(&self, f: &FinFn) -> Vec<Vec<usize>> {
        vec![f.table.clone()]
    }
}
