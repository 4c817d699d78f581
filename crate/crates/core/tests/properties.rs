mod common;

use adhesive::category::{Category, Concrete};
use adhesive::codec::{decode_morphism, decode_rule, default_labels, encode_morphism, encode_rule, read_square, square_diagram, Diagram};
use adhesive::finset::FinSetCat;
use adhesive::laws::{check_po_is_pb, check_stable};
use adhesive::multigraph::MultigraphCat;
use adhesive::oracles::{oracle_is_pullback, oracle_is_pushout, Budget};
use adhesive::presheaf::PresheafCat;
use adhesive::sampler::{SampleRng, Sampler};
use adhesive::simplegraph::SimpleGraphCat;
use adhesive::slice::Slice;
use adhesive::suite::{recheck, run_law, Law, SuiteConfig};
use adhesive::universal::{is_pullback, is_pushout};
use proptest::prelude::*;
use rand::SeedableRng;

use common::{idempotent_base, random_linear_rule, type_graph};

fn object_round_trip<C: Sampler>(cat: &C, seed: u64) {
    let mut r = SampleRng::seed_from_u64(seed);
    let a = cat.random_object(&mut r, 5);
    let labels = default_labels(cat, &a);
    let (b, back) = cat.decode_object(&cat.encode_object(&a, &labels)).unwrap();
    assert_eq!(a, b);
    assert_eq!(labels, back);
    let m = cat.random_morphism_into(&mut r, &a).unwrap();
    assert_eq!(decode_morphism(cat, &encode_morphism(cat, &m)).unwrap(), m);
}

fn square_round_trip<C: Sampler>(cat: &C, seed: u64) {
    let mut r = SampleRng::seed_from_u64(seed);
    let c = cat.random_cospan(&mut r, 4).unwrap();
    let sq = cat.pullback(&c.left, &c.right).unwrap();
    let v = square_diagram(cat, "square", &sq).encode(cat, Default::default());
    let text = serde_json::to_string(&v).unwrap();
    let back = Diagram::<C>::decode(cat, &serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(read_square(&back).unwrap(), sq);
}

fn agrees_with_oracles<C: Sampler + adhesive::oracles::SmallObjects>(cat: &C, seed: u64) {
    let mut r = SampleRng::seed_from_u64(seed);
    let c = cat.random_cospan(&mut r, 3).unwrap();
    let pb = cat.pullback(&c.left, &c.right).unwrap();
    assert!(is_pullback(cat, &pb).unwrap());
    assert!(oracle_is_pullback(cat, &pb, Budget::default()).unwrap());
    let po = cat.pushout(&pb.p, &pb.q).unwrap();
    assert_eq!(is_pushout(cat, &po).unwrap(), oracle_is_pushout(cat, &po, Budget::default()).unwrap());
    assert!(is_pushout(cat, &po).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn objects_and_morphisms_round_trip(seed: u64) {
        object_round_trip(&FinSetCat, seed);
        object_round_trip(&MultigraphCat, seed);
        object_round_trip(&SimpleGraphCat, seed);
        object_round_trip(&PresheafCat::new(idempotent_base()), seed);
        object_round_trip(&Slice::new(MultigraphCat, type_graph()), seed);
    }

    #[test]
    fn squares_round_trip_through_text(seed: u64) {
        square_round_trip(&MultigraphCat, seed);
        square_round_trip(&SimpleGraphCat, seed);
        square_round_trip(&PresheafCat::new(idempotent_base()), seed);
    }

    #[test]
    fn rules_round_trip(seed: u64) {
        let mut r = SampleRng::seed_from_u64(seed);
        let rule = random_linear_rule(&mut r);
        let back = decode_rule(&MultigraphCat, &encode_rule(&MultigraphCat, &rule)).unwrap();
        prop_assert_eq!(back.rule, rule);
    }

    #[test]
    fn canonical_squares_agree_with_oracles(seed: u64) {
        agrees_with_oracles(&FinSetCat, seed);
        agrees_with_oracles(&MultigraphCat, seed);
        agrees_with_oracles(&SimpleGraphCat, seed);
    }

    #[test]
    fn identity_probe_keeps_pushouts(seed: u64) {
        let cat = MultigraphCat;
        let mut r = SampleRng::seed_from_u64(seed);
        let sq = cat.random_pushout_along_mono(&mut r, 4, false).unwrap();
        let id = cat.identity(&cat.target(&sq.f));
        prop_assert!(check_stable(&cat, &sq, &[id]).unwrap().is_empty());
        prop_assert!(check_po_is_pb(&cat, &sq, true).unwrap());
    }

    #[test]
    fn pullback_sizes_are_bounded_by_the_product(seed: u64) {
        let cat = MultigraphCat;
        let mut r = SampleRng::seed_from_u64(seed);
        let c = cat.random_cospan(&mut r, 4).unwrap();
        let pb = cat.pullback(&c.left, &c.right).unwrap();
        let (a, b, d) = (cat.carrier_sizes(&cat.source(&c.left)), cat.carrier_sizes(&cat.source(&c.right)), cat.carrier_sizes(&cat.source(&pb.p)));
        for s in 0..d.len() {
            prop_assert!(d[s] <= a[s] * b[s]);
        }
    }
}

#[test]
fn stored_counterexamples_reproduce() {
    let cfg = SuiteConfig { seed: 2, iters: 150, ..SuiteConfig::default() };
    for law in [Law::RegularUnion, Law::MonosRegular, Law::PoAlongMonoIsPb] {
        let report = run_law(&SimpleGraphCat, law, &cfg).unwrap();
        for cx in &report.counterexamples {
            assert!(recheck(&SimpleGraphCat, &cx.payload).unwrap(), "{law}: {}", cx.detail);
        }
    }
}

#[test]
fn more_budget_finds_at_least_as_many_failures() {
    let small = SuiteConfig { seed: 4, iters: 40, ..SuiteConfig::default() };
    let large = SuiteConfig { iters: 120, ..small.clone() };
    for law in [Law::RegularUnion, Law::MonosRegular] {
        let a = run_law(&SimpleGraphCat, law, &small).unwrap();
        let b = run_law(&SimpleGraphCat, law, &large).unwrap();
        assert!(b.failed >= a.failed);
        assert_eq!(a.counterexamples.first().map(|c| c.iteration), b.counterexamples.first().map(|c| c.iteration));
    }
}

#[test]
fn adhesive_instances_have_no_failures() {
    let cfg = SuiteConfig { seed: 9, iters: 40, ..SuiteConfig::default() };
    for law in Law::ALL {
        assert_eq!(run_law(&FinSetCat, law, &cfg).unwrap().failed, 0, "finset {law}");
        assert_eq!(run_law(&PresheafCat::new(idempotent_base()), law, &cfg).unwrap().failed, 0, "presheaf {law}");
    }
}
