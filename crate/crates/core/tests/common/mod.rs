#![allow(dead_code)]

use adhesive::dpo::{make_rule, Rule};
use adhesive::multigraph::{Graph, GraphMorphism, MultigraphCat};
use adhesive::presheaf::{Arrow, FiniteBaseCategory};
use adhesive::sampler::{SampleRng, Sampler};
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64, i: u64) -> SampleRng {
    SampleRng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(i))
}

/// One object with an idempotent endomorphism `e`.
pub fn idempotent_base() -> FiniteBaseCategory {
    FiniteBaseCategory::new(
        vec!["X".into()],
        vec![
            Arrow {
                name: "id".into(),
                source: 0,
                target: 0,
            },
            Arrow {
                name: "e".into(),
                source: 0,
                target: 0,
            },
        ],
        vec![0],
        &[(0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 1)],
    )
    .unwrap()
}

/// Two node types with a loop on one and edges both ways between them.
pub fn type_graph() -> Graph {
    Graph::new(2, vec![(0, 1), (1, 0), (1, 1)]).unwrap()
}

pub fn random_graph(rng: &mut SampleRng, max_vertices: usize, max_edges: usize) -> Graph {
    let v = rng.gen_range(1..=max_vertices);
    let e = rng.gen_range(0..=max_edges);
    Graph::new(v, (0..e).map(|_| (rng.gen_range(0..v), rng.gen_range(0..v))).collect()).unwrap()
}

/// `k` included into `k` plus up to two fresh vertices and up to two fresh edges.
pub fn random_extension(rng: &mut SampleRng, k: &Graph) -> GraphMorphism {
    let v = k.vertex_count() + rng.gen_range(0..=2);
    let mut edges = k.edges().to_vec();
    for _ in 0..if v == 0 { 0 } else { rng.gen_range(0..=2) } {
        edges.push((rng.gen_range(0..v), rng.gen_range(0..v)));
    }
    let big = Graph::new(v, edges).unwrap();
    GraphMorphism::new(k.clone(), big, (0..k.vertex_count()).collect(), (0..k.edge_count()).collect()).unwrap()
}

/// A rule with both legs injective and a small interface.
pub fn random_linear_rule(rng: &mut SampleRng) -> Rule<GraphMorphism> {
    let k = MultigraphCat.random_object(rng, 2);
    let l = random_extension(rng, &k);
    let r = random_extension(rng, &k);
    make_rule(&MultigraphCat, l, r, true).unwrap()
}
