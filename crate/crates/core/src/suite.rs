//! Seeded law suites and instance classification.
//!
//! Every iteration draws from its own generator, keyed by seed, law and
//! iteration index, so a larger budget only ever adds checks.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::category::{Cospan, Square};
use crate::codec::{read_cospan, read_square, square_diagram, Codec, Diagram};
use crate::error::{CatError, Result};
use crate::laws::{
    check_exact, check_po_is_pb, check_stable, kernel_cube, regular_subobject_union, subobject, Cube,
};
use crate::sampler::{SampleRng, Sampler};
use crate::universal::{coproduct, is_pullback, is_regular_mono, pasting_check};

/// Counterexamples kept per law.
pub const MAX_COUNTEREXAMPLES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Law {
    Pullbacks,
    Pasting,
    MonoStability,
    PoAlongRegularMonoIsPb,
    Stability,
    Exactness,
    RegularUnion,
    PoAlongMonoIsPb,
    StabilityMono,
    MonosRegular,
}

impl Law {
    pub const ALL: [Law; 10] = [
        Law::Pullbacks,
        Law::Pasting,
        Law::MonoStability,
        Law::PoAlongRegularMonoIsPb,
        Law::Stability,
        Law::Exactness,
        Law::RegularUnion,
        Law::PoAlongMonoIsPb,
        Law::StabilityMono,
        Law::MonosRegular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Law::Pullbacks => "pullbacks",
            Law::Pasting => "pasting",
            Law::MonoStability => "mono-stability",
            Law::PoAlongRegularMonoIsPb => "po-along-regular-mono-is-pb",
            Law::Stability => "stability",
            Law::Exactness => "exactness",
            Law::RegularUnion => "regular-union",
            Law::PoAlongMonoIsPb => "po-along-mono-is-pb",
            Law::StabilityMono => "stability-mono",
            Law::MonosRegular => "monos-regular",
        }
    }

    fn index(self) -> u64 {
        Law::ALL.iter().position(|&l| l == self).expect("listed") as u64
    }

    /// The weakest level that needs this law.
    pub fn tier(self) -> Level {
        match self {
            Law::Pullbacks | Law::Pasting | Law::MonoStability => Level::None,
            Law::PoAlongRegularMonoIsPb | Law::Stability => Level::RmQuasiadhesive,
            Law::Exactness | Law::RegularUnion => Level::RmAdhesive,
            Law::PoAlongMonoIsPb | Law::StabilityMono | Law::MonosRegular => Level::Adhesive,
        }
    }

    pub fn names() -> Vec<&'static str> {
        Law::ALL.iter().map(|l| l.name()).collect()
    }
}

impl fmt::Display for Law {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Law {
    type Err = CatError;

    fn from_str(s: &str) -> Result<Law> {
        Law::ALL
            .into_iter()
            .find(|l| l.name() == s)
            .ok_or_else(|| CatError::Invalid(format!("unknown law `{s}`; available: all, {}", Law::names().join(", "))))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    None,
    RmQuasiadhesive,
    RmAdhesive,
    Adhesive,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::None => "none",
            Level::RmQuasiadhesive => "rm-quasiadhesive",
            Level::RmAdhesive => "rm-adhesive",
            Level::Adhesive => "adhesive",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Iterations per law.
    pub iters: usize,
    /// Elements per sort in sampled objects.
    pub max_size: usize,
    /// Probes per sampled square in the stability laws.
    pub probes: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            iters: 100,
            max_size: 4,
            probes: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub iteration: usize,
    pub detail: String,
    pub payload: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: Law,
    pub passed: usize,
    pub failed: usize,
    /// Iterations abandoned because an enumeration hit its limit.
    pub exhausted: usize,
    /// Iterations whose sampled data missed the law's preconditions.
    pub skipped: usize,
    pub counterexamples: Vec<Counterexample>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub instance: String,
    pub config: SuiteConfig,
    pub laws: Vec<LawReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<Level>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.laws.iter().map(|l| l.failed).sum()
    }

    pub fn law(&self, law: Law) -> Option<&LawReport> {
        self.laws.iter().find(|l| l.law == law)
    }
}

enum Outcome {
    Pass,
    Fail(String, Value),
    Skip,
}

fn iteration_rng(seed: u64, law: Law, i: usize) -> SampleRng {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    bytes[8..16].copy_from_slice(&law.index().to_le_bytes());
    bytes[16..24].copy_from_slice(&(i as u64).to_le_bytes());
    SampleRng::from_seed(bytes)
}

fn payload<C: Codec>(cat: &C, law: Law, d: Diagram<C>) -> Value {
    let mut extra = Map::new();
    extra.insert("law".into(), json!(law.name()));
    d.encode(cat, extra)
}

fn cube_diagram<C: Codec>(cat: &C, cube: &Cube<C::Mor>) -> Diagram<C> {
    square_diagram(cat, "cube", &cube.bottom)
        .with_morphism(cat, "p'", "D'", "A'", cube.top.p.clone())
        .with_morphism(cat, "q'", "D'", "B'", cube.top.q.clone())
        .with_morphism(cat, "f'", "A'", "C'", cube.top.f.clone())
        .with_morphism(cat, "g'", "B'", "C'", cube.top.g.clone())
        .with_morphism(cat, "d", "D'", "D", cube.d.clone())
        .with_morphism(cat, "a", "A'", "A", cube.a.clone())
        .with_morphism(cat, "b", "B'", "B", cube.b.clone())
        .with_morphism(cat, "c", "C'", "C", cube.c.clone())
}

fn read_cube<C: Codec>(d: &Diagram<C>) -> Result<Cube<C::Mor>> {
    let m = |n: &str| d.morphism(n).cloned();
    Ok(Cube {
        bottom: read_square(d)?,
        top: Square {
            p: m("p'")?,
            q: m("q'")?,
            f: m("f'")?,
            g: m("g'")?,
        },
        d: m("d")?,
        a: m("a")?,
        b: m("b")?,
        c: m("c")?,
    })
}

/// A random morphism into `c`: a subobject or an arbitrary small map.
fn probe_into<C: Sampler>(cat: &C, rng: &mut SampleRng, c: &C::Obj) -> Result<C::Mor> {
    if rng.gen_bool(0.3) {
        Ok(cat.random_subobject(rng, c, false))
    } else {
        cat.random_morphism_into(rng, c)
    }
}

fn random_cospan<C: Sampler>(cat: &C, rng: &mut SampleRng, max: usize) -> Result<Cospan<C::Mor>> {
    if rng.gen_bool(0.5) {
        return cat.random_cospan(rng, max);
    }
    let c = cat.random_object(rng, max);
    Ok(Cospan {
        left: probe_into(cat, rng, &c)?,
        right: probe_into(cat, rng, &c)?,
    })
}

fn check_pullbacks<C: Sampler>(cat: &C, c: &Cospan<C::Mor>) -> Result<Option<String>> {
    let pb = cat.pullback(&c.left, &c.right)?;
    Ok((!is_pullback(cat, &pb)?).then(|| "computed pullback fails its universal property".into()))
}

fn pasting_inputs<C: Sampler>(cat: &C, d: &Diagram<C>) -> Result<(Square<C::Mor>, Square<C::Mor>)> {
    let g = d.morphism("g")?;
    let (f2, g2) = (d.morphism("f2")?, d.morphism("g2")?);
    let outer = cat.pullback(f2, g2)?;
    let inner = cat.pullback(&outer.q, g)?;
    Ok((inner, outer))
}

fn check_pasting<C: Sampler>(cat: &C, d: &Diagram<C>) -> Result<Option<String>> {
    let (inner, outer) = pasting_inputs(cat, d)?;
    let o = pasting_check(cat, &inner, &outer)?;
    Ok((!o.holds()).then(|| format!("pasting lemma fails: {o:?}")))
}

fn check_mono_stability<C: Sampler>(cat: &C, c: &Cospan<C::Mor>) -> Result<Option<String>> {
    let pb = cat.pullback(&c.left, &c.right)?;
    Ok((!cat.is_mono(&pb.q)).then(|| "pullback of a mono is not mono".into()))
}

fn check_stability<C: Sampler>(cat: &C, sq: &Square<C::Mor>, probe: &C::Mor) -> Result<Option<String>> {
    let bad = check_stable(cat, sq, std::slice::from_ref(probe))?;
    Ok((!bad.is_empty()).then(|| "pulled-back square is not a pushout".into()))
}

fn check_union<C: Sampler>(cat: &C, c: &Cospan<C::Mor>) -> Result<Option<String>> {
    let (s1, s2) = (subobject(cat, c.left.clone())?, subobject(cat, c.right.clone())?);
    let (u, _) = regular_subobject_union(cat, &s1, &s2)?;
    Ok((!u.regular).then(|| "union of regular subobjects is not regular".into()))
}

fn check_mono_regular<C: Sampler>(cat: &C, m: &C::Mor) -> Result<Option<String>> {
    Ok((!is_regular_mono(cat, m)?).then(|| "mono is not regular".into()))
}

fn as_outcome(law: Law, found: Result<Option<String>>, payload: impl FnOnce() -> Value) -> Result<Outcome> {
    match found {
        Ok(None) => Ok(Outcome::Pass),
        Ok(Some(detail)) => Ok(Outcome::Fail(format!("{law}: {detail}"), payload())),
        Err(CatError::Precondition(_)) => Ok(Outcome::Skip),
        Err(e) => Err(e),
    }
}

/// A cube over `bottom` whose back and left faces are pullbacks and whose top is a pushout.
fn exactness_cube<C: Sampler>(cat: &C, rng: &mut SampleRng, bottom: &Square<C::Mor>) -> Result<Cube<C::Mor>> {
    if rng.gen_bool(0.25) {
        return Ok(kernel_cube(cat, bottom));
    }
    let b = probe_into(cat, rng, &cat.target(&bottom.q))?;
    let left = cat.pullback(&bottom.q, &b)?;
    let d = left.p.clone();
    let pd = cat.compose(&bottom.p, &d)?;
    let a_obj = cat.target(&bottom.p);
    let mut extra = Vec::new();
    for _ in 0..3 {
        extra.push(cat.random_morphism_into(rng, &a_obj)?);
    }
    extra.push(cat.from_initial(&a_obj));
    for ra in extra {
        let sum = coproduct(cat, &cat.source(&d), &cat.source(&ra))?;
        let a = cat.pushout_mediator(&sum, &pd, &ra)?;
        let back = Square {
            p: sum.f.clone(),
            q: d.clone(),
            f: a.clone(),
            g: bottom.p.clone(),
        };
        if !is_pullback(cat, &back)? {
            continue;
        }
        let top = cat.pushout(&sum.f, &left.q)?;
        let c = cat.pushout_mediator(&top, &cat.compose(&bottom.f, &a)?, &cat.compose(&bottom.g, &b)?)?;
        return Ok(Cube {
            bottom: bottom.clone(),
            top,
            d,
            a,
            b,
            c,
        });
    }
    Err(CatError::Precondition("no back face pullback found".into()))
}

fn run_iteration<C: Sampler>(cat: &C, law: Law, cfg: &SuiteConfig, rng: &mut SampleRng) -> Result<Outcome> {
    let max = cfg.max_size;
    match law {
        Law::Pullbacks => {
            let c = random_cospan(cat, rng, max)?;
            as_outcome(law, check_pullbacks(cat, &c), || {
                payload(cat, law, crate::codec::cospan_diagram(cat, "cospan", &c))
            })
        }
        Law::Pasting => {
            let c = cat.random_object(rng, max);
            let g = probe_into(cat, rng, &c)?;
            let g2 = cat.random_morphism_from(rng, &c, max)?;
            let f2 = probe_into(cat, rng, &cat.target(&g2))?;
            let d = Diagram::new("pasting")
                .with_morphism(cat, "g", "B", "C", g)
                .with_morphism(cat, "g2", "C", "C2", g2)
                .with_morphism(cat, "f2", "A2", "C2", f2);
            let found = check_pasting(cat, &d);
            as_outcome(law, found, || payload(cat, law, d))
        }
        Law::MonoStability => {
            let x = cat.random_object(rng, max);
            let c = Cospan {
                left: cat.random_subobject(rng, &x, false),
                right: probe_into(cat, rng, &x)?,
            };
            as_outcome(law, check_mono_stability(cat, &c), || {
                payload(cat, law, crate::codec::cospan_diagram(cat, "cospan", &c))
            })
        }
        Law::PoAlongRegularMonoIsPb | Law::PoAlongMonoIsPb => {
            let relaxed = law == Law::PoAlongMonoIsPb;
            let sq = cat.random_pushout_along_mono(rng, max, !relaxed)?;
            let found = check_po_is_pb(cat, &sq, relaxed).map(|ok| (!ok).then(|| "pushout is not a pullback".into()));
            as_outcome(law, found, || payload(cat, law, square_diagram(cat, "square", &sq)))
        }
        Law::Stability | Law::StabilityMono => {
            let sq = cat.random_pushout_along_mono(rng, max, law == Law::Stability)?;
            let corner = cat.target(&sq.f);
            for _ in 0..cfg.probes.max(1) {
                let probe = probe_into(cat, rng, &corner)?;
                let found = check_stability(cat, &sq, &probe);
                let out = as_outcome(law, found, || {
                    payload(
                        cat,
                        law,
                        square_diagram(cat, "stability", &sq).with_morphism(cat, "c", "C'", "C", probe.clone()),
                    )
                })?;
                if !matches!(out, Outcome::Pass) {
                    return Ok(out);
                }
            }
            Ok(Outcome::Pass)
        }
        Law::Exactness => {
            let sq = cat.random_pushout_along_mono(rng, max, true)?;
            let cube = match exactness_cube(cat, rng, &sq) {
                Err(CatError::Precondition(_)) => return Ok(Outcome::Skip),
                r => r?,
            };
            let found = check_exact(cat, &cube).map(|ok| (!ok).then(|| "front or right face is not a pullback".into()));
            as_outcome(law, found, || payload(cat, law, cube_diagram(cat, &cube)))
        }
        Law::RegularUnion => {
            let x = cat.random_object(rng, max);
            let c = Cospan {
                left: cat.random_subobject(rng, &x, true),
                right: cat.random_subobject(rng, &x, true),
            };
            as_outcome(law, check_union(cat, &c), || {
                payload(cat, law, crate::codec::cospan_diagram(cat, "union", &c))
            })
        }
        Law::MonosRegular => {
            let x = cat.random_object(rng, max);
            let m = cat.random_subobject(rng, &x, false);
            as_outcome(law, check_mono_regular(cat, &m), || {
                payload(cat, law, Diagram::new("mono").with_morphism(cat, "m", "S", "X", m.clone()))
            })
        }
    }
}

pub fn run_law<C: Sampler>(cat: &C, law: Law, cfg: &SuiteConfig) -> Result<LawReport> {
    let mut report = LawReport {
        law,
        passed: 0,
        failed: 0,
        exhausted: 0,
        skipped: 0,
        counterexamples: Vec::new(),
    };
    for i in 0..cfg.iters {
        let mut rng = iteration_rng(cfg.seed, law, i);
        match run_iteration(cat, law, cfg, &mut rng) {
            Ok(Outcome::Pass) => report.passed += 1,
            Ok(Outcome::Skip) => report.skipped += 1,
            Ok(Outcome::Fail(detail, payload)) => {
                report.failed += 1;
                if report.counterexamples.len() < MAX_COUNTEREXAMPLES {
                    report.counterexamples.push(Counterexample {
                        iteration: i,
                        detail,
                        payload,
                    });
                }
            }
            Err(CatError::BudgetExceeded { .. }) => report.exhausted += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(report)
}

/// Runs the given laws, one thread per law; reports come back in the order given.
pub fn run_suite<C>(cat: &C, laws: &[Law], cfg: &SuiteConfig) -> Result<SuiteReport>
where
    C: Sampler + Sync,
{
    let results: Vec<Result<LawReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = laws.iter().map(|&law| s.spawn(move || run_law(cat, law, cfg))).collect();
        handles.into_iter().map(|h| h.join().expect("law thread panicked")).collect()
    });
    Ok(SuiteReport {
        instance: cat.instance_name(),
        config: cfg.clone(),
        laws: results.into_iter().collect::<Result<_>>()?,
        level: None,
    })
}

/// The highest level all of whose laws ran without failure.
pub fn level_of(report: &SuiteReport) -> Level {
    let failed_tier = report.laws.iter().filter(|l| l.failed > 0).map(|l| l.law.tier()).min();
    match failed_tier {
        None => Level::Adhesive,
        Some(Level::None) => Level::None,
        Some(Level::RmQuasiadhesive) => Level::None,
        Some(Level::RmAdhesive) => Level::RmQuasiadhesive,
        Some(Level::Adhesive) => Level::RmAdhesive,
    }
}

/// Runs every law with `budget` iterations each and reports the level reached.
pub fn classify_instance<C>(cat: &C, seed: u64, budget: usize) -> Result<(Level, SuiteReport)>
where
    C: Sampler + Sync,
{
    let cfg = SuiteConfig {
        seed,
        iters: budget,
        ..SuiteConfig::default()
    };
    let mut report = run_suite(cat, &Law::ALL, &cfg)?;
    let level = level_of(&report);
    report.level = Some(level);
    Ok((level, report))
}

/// Re-runs the check a counterexample payload came from; `true` when it still fails.
pub fn recheck<C: Sampler>(cat: &C, payload: &Value) -> Result<bool> {
    let law: Law = payload
        .get("law")
        .and_then(Value::as_str)
        .ok_or_else(|| CatError::Invalid("payload has no `law`".into()))?
        .parse()?;
    let d = Diagram::decode(cat, payload)?;
    let found = match law {
        Law::Pullbacks => check_pullbacks(cat, &read_cospan(&d)?),
        Law::Pasting => check_pasting(cat, &d),
        Law::MonoStability => check_mono_stability(cat, &read_cospan(&d)?),
        Law::PoAlongRegularMonoIsPb | Law::PoAlongMonoIsPb => {
            check_po_is_pb(cat, &read_square(&d)?, law == Law::PoAlongMonoIsPb).map(|ok| (!ok).then(String::new))
        }
        Law::Stability | Law::StabilityMono => check_stability(cat, &read_square(&d)?, d.morphism("c")?),
        Law::Exactness => check_exact(cat, &read_cube(&d)?).map(|ok| (!ok).then(String::new)),
        Law::RegularUnion => check_union(cat, &read_cospan(&d)?),
        Law::MonosRegular => check_mono_regular(cat, d.morphism("m")?),
    }?;
    Ok(found.is_some())
}
