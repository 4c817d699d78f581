//! JSON encoding of objects, morphisms and diagrams.
//!
//! Element identifiers are strings; they map to indices in natural sorted
//! order (numeric ids first, by value, then the rest lexicographically).
//! Every encoder emits keys in sorted order and elements in index order, so
//! identical values always produce identical bytes.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde_json::{json, Map, Value};

use crate::category::{Category, Concrete, Cospan, Square};
use crate::dpo::{make_rule, Derivation, Rule};
use crate::error::{CatError, Result};
use crate::finset::{FinFn, FinSet, FinSetCat};
use crate::multigraph::{Graph, GraphMorphism, MultigraphCat};
use crate::presheaf::{Arrow, FiniteBaseCategory, Presheaf, PresheafCat};
use crate::simplegraph::{SgMorphism, SimpleGraph, SimpleGraphCat};
use crate::slice::{Slice, SliceObject};

/// Element names of an object, per sort, in index order.
pub type Labels = Vec<Vec<String>>;

/// Where a morphism's components live in its JSON form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapFields {
    /// One field per sort, e.g. `node_map` and `edge_map`.
    Flat(&'static [&'static str]),
    /// A single field holding one map per sort, keyed by sort name.
    Nested(&'static str),
}

/// Instances with a JSON representation.
pub trait Codec: Concrete {
    /// Name written into payloads, e.g. `multigraph`.
    fn instance_name(&self) -> String;
    fn encode_object(&self, a: &Self::Obj, labels: &Labels) -> Value;
    fn decode_object(&self, v: &Value) -> Result<(Self::Obj, Labels)>;
    fn map_fields(&self) -> MapFields;
    fn morphism_from_components(
        &self,
        source: &Self::Obj,
        target: &Self::Obj,
        components: Vec<Vec<usize>>,
    ) -> Result<Self::Mor>;
}

fn bad(msg: impl Into<String>) -> CatError {
    CatError::Invalid(msg.into())
}

pub fn natural_cmp(a: &str, b: &str) -> Ordering {
    match (a.parse::<u64>(), b.parse::<u64>()) {
        (Ok(x), Ok(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Ok(_), Err(_)) => Ordering::Less,
        (Err(_), Ok(_)) => Ordering::Greater,
        (Err(_), Err(_)) => a.cmp(b),
    }
}

fn id_string(v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(bad(format!("identifier expected, found {other}"))),
    }
}

fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn array<'v>(v: &'v Value, what: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("`{what}` must be an array")))
}

fn object<'v>(v: &'v Value, what: &str) -> Result<&'v Map<String, Value>> {
    v.as_object().ok_or_else(|| bad(format!("`{what}` must be an object")))
}

/// Identifiers of an array, sorted naturally; duplicates are rejected.
fn sorted_ids(v: &Value, what: &str) -> Result<Vec<String>> {
    let mut ids = array(v, what)?.iter().map(id_string).collect::<Result<Vec<_>>>()?;
    ids.sort_by(|a, b| natural_cmp(a, b));
    if let Some(w) = ids.windows(2).find(|w| w[0] == w[1]) {
        return Err(bad(format!("duplicate identifier `{}` in `{what}`", w[0])));
    }
    Ok(ids)
}

fn positions(labels: &[String]) -> HashMap<&str, usize> {
    labels.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect()
}

fn lookup(pos: &HashMap<&str, usize>, id: &str, what: &str) -> Result<usize> {
    pos.get(id).copied().ok_or_else(|| bad(format!("unknown {what} `{id}`")))
}

pub fn default_labels<C: Concrete>(cat: &C, a: &C::Obj) -> Labels {
    cat.carrier_sizes(a)
        .into_iter()
        .map(|n| (0..n).map(|i| i.to_string()).collect())
        .collect()
}

/// Labels for a subobject, inherited through the mono `m`.
pub fn labels_along_mono<C: Concrete>(cat: &C, m: &C::Mor, target: &Labels) -> Labels {
    cat.components(m)
        .iter()
        .zip(target)
        .map(|(comp, names)| comp.iter().map(|&i| names[i].clone()).collect())
        .collect()
}

/// Labels for the corner of a pushout: elements reached by `keep` inherit its
/// source labels, the others get fresh numeric labels.
pub fn labels_extending<C: Concrete>(cat: &C, keep: &C::Mor, keep_labels: &Labels) -> Labels {
    let sizes = cat.carrier_sizes(&cat.target(keep));
    cat.components(keep)
        .iter()
        .zip(keep_labels)
        .zip(sizes)
        .map(|((comp, names), n)| {
            let mut out: Vec<Option<String>> = vec![None; n];
            for (i, &j) in comp.iter().enumerate() {
                out[j].get_or_insert_with(|| names[i].clone());
            }
            let mut next = names.iter().filter_map(|s| s.parse::<u64>().ok()).max().map_or(0, |m| m + 1);
            let mut used: Vec<String> = out.iter().flatten().cloned().collect();
            out.into_iter()
                .map(|l| {
                    l.unwrap_or_else(|| {
                        while used.contains(&next.to_string()) {
                            next += 1;
                        }
                        let s = next.to_string();
                        used.push(s.clone());
                        next += 1;
                        s
                    })
                })
                .collect()
        })
        .collect()
}

fn encode_components(comps: &[Vec<usize>], src: &Labels, tgt: &Labels) -> Vec<Value> {
    comps
        .iter()
        .enumerate()
        .map(|(s, comp)| {
            let m: Map<String, Value> = comp
                .iter()
                .enumerate()
                .map(|(i, &j)| (src[s][i].clone(), Value::String(tgt[s][j].clone())))
                .collect();
            Value::Object(m)
        })
        .collect()
}

/// The map fields of `f`, as JSON object entries.
pub fn encode_map<C: Codec>(cat: &C, f: &C::Mor, src: &Labels, tgt: &Labels) -> Map<String, Value> {
    let per_sort = encode_components(&cat.components(f), src, tgt);
    let mut out = Map::new();
    match cat.map_fields() {
        MapFields::Flat(keys) => {
            for (k, v) in keys.iter().zip(per_sort) {
                out.insert((*k).to_string(), v);
            }
        }
        MapFields::Nested(key) => {
            let nested: Map<String, Value> = cat.sort_names().into_iter().zip(per_sort).collect();
            out.insert(key.to_string(), Value::Object(nested));
        }
    }
    out
}

pub fn decode_map<C: Codec>(
    cat: &C,
    v: &Value,
    (source, src): (&C::Obj, &Labels),
    (target, tgt): (&C::Obj, &Labels),
) -> Result<C::Mor> {
    let sorts = cat.sort_names();
    let maps: Vec<&Value> = match cat.map_fields() {
        MapFields::Flat(keys) => keys.iter().map(|k| field(v, k)).collect::<Result<_>>()?,
        MapFields::Nested(key) => {
            let nested = field(v, key)?;
            sorts.iter().map(|s| field(nested, s)).collect::<Result<_>>()?
        }
    };
    let mut comps = Vec::with_capacity(sorts.len());
    for (s, m) in maps.into_iter().enumerate() {
        let m = object(m, &sorts[s])?;
        let (sp, tp) = (positions(&src[s]), positions(&tgt[s]));
        let mut comp = vec![usize::MAX; src[s].len()];
        for (k, val) in m {
            let i = lookup(&sp, k, &format!("source {}", sorts[s]))?;
            comp[i] = lookup(&tp, &id_string(val)?, &format!("target {}", sorts[s]))?;
        }
        if let Some(i) = comp.iter().position(|&x| x == usize::MAX) {
            return Err(bad(format!("{} `{}` is not mapped", sorts[s], src[s][i])));
        }
        comps.push(comp);
    }
    cat.morphism_from_components(source, target, comps)
}

/// `{"kind": "morphism", "source", "target", ...map fields}`.
pub fn encode_morphism<C: Codec>(cat: &C, f: &C::Mor) -> Value {
    let (a, b) = (cat.source(f), cat.target(f));
    let (la, lb) = (default_labels(cat, &a), default_labels(cat, &b));
    let mut out = encode_map(cat, f, &la, &lb);
    out.insert("kind".into(), json!("morphism"));
    out.insert("category".into(), json!(cat.instance_name()));
    out.insert("source".into(), cat.encode_object(&a, &la));
    out.insert("target".into(), cat.encode_object(&b, &lb));
    Value::Object(out)
}

pub fn decode_morphism<C: Codec>(cat: &C, v: &Value) -> Result<C::Mor> {
    let (a, la) = cat.decode_object(field(v, "source")?)?;
    let (b, lb) = cat.decode_object(field(v, "target")?)?;
    decode_map(cat, v, (&a, &la), (&b, &lb))
}

/// Named objects and morphisms between them.
#[derive(Debug, Clone)]
pub struct Diagram<C: Category> {
    pub kind: String,
    pub objects: BTreeMap<String, (C::Obj, Labels)>,
    pub morphisms: BTreeMap<String, (String, String, C::Mor)>,
}

impl<C: Codec> Diagram<C> {
    pub fn new(kind: &str) -> Self {
        Diagram {
            kind: kind.to_string(),
            objects: BTreeMap::new(),
            morphisms: BTreeMap::new(),
        }
    }

    pub fn with_object(mut self, name: &str, obj: C::Obj, labels: Labels) -> Self {
        self.objects.insert(name.to_string(), (obj, labels));
        self
    }

    /// Adds an object with index labels, unless one of that name exists.
    pub fn with_default_object(mut self, cat: &C, name: &str, obj: C::Obj) -> Self {
        if !self.objects.contains_key(name) {
            let labels = default_labels(cat, &obj);
            self.objects.insert(name.to_string(), (obj, labels));
        }
        self
    }

    /// Adds a morphism; missing endpoint objects are added with index labels.
    pub fn with_morphism(self, cat: &C, name: &str, from: &str, to: &str, m: C::Mor) -> Self {
        let mut d = self
            .with_default_object(cat, from, cat.source(&m))
            .with_default_object(cat, to, cat.target(&m));
        d.morphisms.insert(name.to_string(), (from.to_string(), to.to_string(), m));
        d
    }

    pub fn object(&self, name: &str) -> Result<&C::Obj> {
        self.objects
            .get(name)
            .map(|o| &o.0)
            .ok_or_else(|| bad(format!("diagram has no object `{name}`")))
    }

    pub fn labels(&self, name: &str) -> Result<&Labels> {
        self.objects
            .get(name)
            .map(|o| &o.1)
            .ok_or_else(|| bad(format!("diagram has no object `{name}`")))
    }

    pub fn morphism(&self, name: &str) -> Result<&C::Mor> {
        self.morphisms
            .get(name)
            .map(|m| &m.2)
            .ok_or_else(|| bad(format!("diagram has no morphism `{name}`")))
    }

    pub fn encode(&self, cat: &C, extra: Map<String, Value>) -> Value {
        let mut out = extra;
        out.insert("kind".into(), json!(self.kind));
        out.insert("category".into(), json!(cat.instance_name()));
        let objects: Map<String, Value> = self
            .objects
            .iter()
            .map(|(n, (o, l))| (n.clone(), cat.encode_object(o, l)))
            .collect();
        out.insert("objects".into(), Value::Object(objects));
        let morphisms: Map<String, Value> = self
            .morphisms
            .iter()
            .map(|(n, (from, to, m))| {
                let mut e = encode_map(cat, m, &self.objects[from].1, &self.objects[to].1);
                e.insert("from".into(), json!(from));
                e.insert("to".into(), json!(to));
                (n.clone(), Value::Object(e))
            })
            .collect();
        out.insert("morphisms".into(), Value::Object(morphisms));
        Value::Object(out)
    }

    pub fn decode(cat: &C, v: &Value) -> Result<Self> {
        let kind = field(v, "kind")?.as_str().ok_or_else(|| bad("`kind` must be a string"))?;
        let mut d = Diagram::new(kind);
        for (name, o) in object(field(v, "objects")?, "objects")? {
            let (obj, labels) = cat.decode_object(o).map_err(|e| bad(format!("object `{name}`: {e}")))?;
            d.objects.insert(name.clone(), (obj, labels));
        }
        if let Some(ms) = v.get("morphisms") {
            for (name, m) in object(ms, "morphisms")? {
                let end = |k: &str| -> Result<String> {
                    field(m, k)?
                        .as_str()
                        .map(str::to_string)
                        .ok_or_else(|| bad(format!("morphism `{name}`: `{k}` must be a string")))
                };
                let (from, to) = (end("from")?, end("to")?);
                let (a, la) = d.objects.get(&from).ok_or_else(|| bad(format!("unknown object `{from}`")))?;
                let (b, lb) = d.objects.get(&to).ok_or_else(|| bad(format!("unknown object `{to}`")))?;
                let mor = decode_map(cat, m, (a, la), (b, lb)).map_err(|e| bad(format!("morphism `{name}`: {e}")))?;
                d.morphisms.insert(name.clone(), (from, to, mor));
            }
        }
        Ok(d)
    }
}

pub const SQUARE_NAMES: [&str; 4] = ["D", "A", "B", "C"];

pub fn square_diagram<C: Codec>(cat: &C, kind: &str, sq: &Square<C::Mor>) -> Diagram<C> {
    let [d, a, b, c] = SQUARE_NAMES;
    Diagram::new(kind)
        .with_morphism(cat, "p", d, a, sq.p.clone())
        .with_morphism(cat, "q", d, b, sq.q.clone())
        .with_morphism(cat, "f", a, c, sq.f.clone())
        .with_morphism(cat, "g", b, c, sq.g.clone())
}

pub fn read_square<C: Codec>(d: &Diagram<C>) -> Result<Square<C::Mor>> {
    Ok(Square {
        p: d.morphism("p")?.clone(),
        q: d.morphism("q")?.clone(),
        f: d.morphism("f")?.clone(),
        g: d.morphism("g")?.clone(),
    })
}

pub fn cospan_diagram<C: Codec>(cat: &C, kind: &str, c: &Cospan<C::Mor>) -> Diagram<C> {
    Diagram::new(kind)
        .with_morphism(cat, "left", "A", "C", c.left.clone())
        .with_morphism(cat, "right", "B", "C", c.right.clone())
}

pub fn read_cospan<C: Codec>(d: &Diagram<C>) -> Result<Cospan<C::Mor>> {
    Ok(Cospan {
        left: d.morphism("left")?.clone(),
        right: d.morphism("right")?.clone(),
    })
}

/// `{"left","interface","right","l","r","linear"}`.
pub fn encode_rule<C: Codec>(cat: &C, rule: &Rule<C::Mor>) -> Value {
    let k = cat.source(rule.l());
    let (l, r) = (cat.target(rule.l()), cat.target(rule.r()));
    let (lk, ll, lr) = (default_labels(cat, &k), default_labels(cat, &l), default_labels(cat, &r));
    json!({
        "left": cat.encode_object(&l, &ll),
        "interface": cat.encode_object(&k, &lk),
        "right": cat.encode_object(&r, &lr),
        "l": Value::Object(encode_map(cat, rule.l(), &lk, &ll)),
        "r": Value::Object(encode_map(cat, rule.r(), &lk, &lr)),
        "linear": rule.linear(),
    })
}

/// A decoded rule with the element names of its three objects.
pub struct LabelledRule<M> {
    pub rule: Rule<M>,
    pub left: Labels,
    pub interface: Labels,
    pub right: Labels,
}

pub fn decode_rule<C: Codec>(cat: &C, v: &Value) -> Result<LabelledRule<C::Mor>> {
    let (l, ll) = cat.decode_object(field(v, "left")?)?;
    let (k, lk) = cat.decode_object(field(v, "interface")?)?;
    let (r, lr) = cat.decode_object(field(v, "right")?)?;
    let lm = decode_map(cat, field(v, "l")?, (&k, &lk), (&l, &ll))?;
    let rm = decode_map(cat, field(v, "r")?, (&k, &lk), (&r, &lr))?;
    let linear = match v.get("linear") {
        None => false,
        Some(b) => b.as_bool().ok_or_else(|| bad("`linear` must be a boolean"))?,
    };
    Ok(LabelledRule {
        rule: make_rule(cat, lm, rm, linear)?,
        left: ll,
        interface: lk,
        right: lr,
    })
}

/// Derivation diagram with objects `L, K, R, X, Y, Z`. Host labels propagate to
/// the context and the result; elements created by the rule get fresh labels.
pub fn derivation_diagram<C: Codec>(
    cat: &C,
    d: &Derivation<C::Mor>,
    rule_labels: Option<(&Labels, &Labels, &Labels)>,
    host_labels: Option<&Labels>,
) -> Diagram<C> {
    let rule = &d.rule;
    let (l, k, r) = (cat.target(rule.l()), cat.source(rule.l()), cat.target(rule.r()));
    let (ll, lk, lr) = match rule_labels {
        Some((a, b, c)) => (a.clone(), b.clone(), c.clone()),
        None => (default_labels(cat, &l), default_labels(cat, &k), default_labels(cat, &r)),
    };
    let x = d.host(cat);
    let lx = host_labels.cloned().unwrap_or_else(|| default_labels(cat, &x));
    let ly = labels_along_mono(cat, &d.y_to_x, &lx);
    let lz = labels_extending(cat, &d.y_to_z, &ly);
    Diagram::new("derivation")
        .with_object("L", l, ll)
        .with_object("K", k, lk)
        .with_object("R", r, lr)
        .with_object("X", x, lx)
        .with_object("Y", d.context(cat), ly)
        .with_object("Z", d.result(cat), lz)
        .with_morphism(cat, "l", "K", "L", rule.l().clone())
        .with_morphism(cat, "r", "K", "R", rule.r().clone())
        .with_morphism(cat, "match", "L", "X", d.matching.clone())
        .with_morphism(cat, "k_to_y", "K", "Y", d.k_to_y.clone())
        .with_morphism(cat, "y_to_x", "Y", "X", d.y_to_x.clone())
        .with_morphism(cat, "y_to_z", "Y", "Z", d.y_to_z.clone())
        .with_morphism(cat, "comatch", "R", "Z", d.comatch.clone())
}

pub fn encode_derivation<C: Codec>(cat: &C, diagram: &Diagram<C>, linear: bool) -> Value {
    let mut extra = Map::new();
    extra.insert("linear".into(), json!(linear));
    diagram.encode(cat, extra)
}

pub fn read_derivation<C: Codec>(cat: &C, d: &Diagram<C>, linear: bool) -> Result<Derivation<C::Mor>> {
    Ok(Derivation {
        rule: make_rule(cat, d.morphism("l")?.clone(), d.morphism("r")?.clone(), linear)?,
        matching: d.morphism("match")?.clone(),
        k_to_y: d.morphism("k_to_y")?.clone(),
        y_to_x: d.morphism("y_to_x")?.clone(),
        y_to_z: d.morphism("y_to_z")?.clone(),
        comatch: d.morphism("comatch")?.clone(),
    })
}

impl Codec for FinSetCat {
    fn instance_name(&self) -> String {
        "finset".into()
    }

    fn encode_object(&self, _a: &FinSet, labels: &Labels) -> Value {
        json!({ "elements": labels[0] })
    }

    fn decode_object(&self, v: &Value) -> Result<(FinSet, Labels)> {
        let ids = sorted_ids(field(v, "elements")?, "elements")?;
        Ok((FinSet(ids.len()), vec![ids]))
    }

    fn map_fields(&self) -> MapFields {
        MapFields::Flat(&["map"])
    }

    fn morphism_from_components(&self, source: &FinSet, target: &FinSet, mut c: Vec<Vec<usize>>) -> Result<FinFn> {
        let table = c.pop().ok_or_else(|| bad("missing map"))?;
        if table.len() != source.size() {
            return Err(bad("map does not cover the source"));
        }
        FinFn::new(target.size(), table)
    }
}

fn encode_graph_fields(g: &Graph, labels: &Labels) -> Map<String, Value> {
    let (nodes, edges) = (&labels[0], &labels[1]);
    let mut out = Map::new();
    out.insert("nodes".into(), json!(nodes));
    let es: Vec<Value> = g
        .edges()
        .iter()
        .enumerate()
        .map(|(i, &(s, t))| json!({"id": edges[i], "src": nodes[s], "tgt": nodes[t]}))
        .collect();
    out.insert("edges".into(), Value::Array(es));
    out
}

fn decode_graph(v: &Value) -> Result<(Graph, Labels)> {
    let nodes = sorted_ids(field(v, "nodes")?, "nodes")?;
    let pos = positions(&nodes);
    let mut edges = Vec::new();
    for e in array(field(v, "edges")?, "edges")? {
        let id = id_string(field(e, "id")?)?;
        let s = lookup(&pos, &id_string(field(e, "src")?)?, "node")?;
        let t = lookup(&pos, &id_string(field(e, "tgt")?)?, "node")?;
        edges.push((id, s, t));
    }
    edges.sort_by(|a, b| natural_cmp(&a.0, &b.0));
    if let Some(w) = edges.windows(2).find(|w| w[0].0 == w[1].0) {
        return Err(bad(format!("duplicate edge id `{}`", w[0].0)));
    }
    let g = Graph::new(nodes.len(), edges.iter().map(|e| (e.1, e.2)).collect())?;
    Ok((g, vec![nodes, edges.into_iter().map(|e| e.0).collect()]))
}

impl Codec for MultigraphCat {
    fn instance_name(&self) -> String {
        "multigraph".into()
    }

    fn encode_object(&self, g: &Graph, labels: &Labels) -> Value {
        Value::Object(encode_graph_fields(g, labels))
    }

    fn decode_object(&self, v: &Value) -> Result<(Graph, Labels)> {
        decode_graph(v)
    }

    fn map_fields(&self) -> MapFields {
        MapFields::Flat(&["node_map", "edge_map"])
    }

    fn morphism_from_components(&self, source: &Graph, target: &Graph, mut c: Vec<Vec<usize>>) -> Result<GraphMorphism> {
        let (emap, vmap) = (c.pop().unwrap_or_default(), c.pop().unwrap_or_default());
        GraphMorphism::new(source.clone(), target.clone(), vmap, emap)
    }
}

impl Codec for SimpleGraphCat {
    fn instance_name(&self) -> String {
        "simplegraph".into()
    }

    fn encode_object(&self, g: &SimpleGraph, labels: &Labels) -> Value {
        let nodes = &labels[0];
        let adj: Vec<Value> = g.edges().iter().map(|&(s, t)| json!([nodes[s], nodes[t]])).collect();
        json!({ "nodes": nodes, "adj": adj })
    }

    fn decode_object(&self, v: &Value) -> Result<(SimpleGraph, Labels)> {
        let nodes = sorted_ids(field(v, "nodes")?, "nodes")?;
        let pos = positions(&nodes);
        let mut edges = Vec::new();
        for pair in array(field(v, "adj")?, "adj")? {
            let pair = array(pair, "adj entry")?;
            if pair.len() != 2 {
                return Err(bad("adjacency entries are pairs"));
            }
            edges.push((
                lookup(&pos, &id_string(&pair[0])?, "node")?,
                lookup(&pos, &id_string(&pair[1])?, "node")?,
            ));
        }
        Ok((SimpleGraph::new(nodes.len(), &edges)?, vec![nodes]))
    }

    fn map_fields(&self) -> MapFields {
        MapFields::Flat(&["node_map"])
    }

    fn morphism_from_components(&self, source: &SimpleGraph, target: &SimpleGraph, mut c: Vec<Vec<usize>>) -> Result<SgMorphism> {
        SgMorphism::new(source.clone(), target.clone(), c.pop().unwrap_or_default())
    }
}

/// `{"objects": [...], "arrows": [{"name","src","tgt"}]}`, optionally with
/// `"identities": {object: arrow}` and `"compose": [[g, f, g∘f], ...]`. Without
/// a composition table, arrows are generators with no composable pairs and
/// identities are added.
pub fn decode_base(v: &Value) -> Result<FiniteBaseCategory> {
    let objects: Vec<String> = array(field(v, "objects")?, "objects")?
        .iter()
        .map(id_string)
        .collect::<Result<_>>()?;
    let opos = positions(&objects);
    let mut arrows = Vec::new();
    for a in array(field(v, "arrows")?, "arrows")? {
        arrows.push(Arrow {
            name: id_string(field(a, "name")?)?,
            source: lookup(&opos, &id_string(field(a, "src")?)?, "object")?,
            target: lookup(&opos, &id_string(field(a, "tgt")?)?, "object")?,
        });
    }
    let Some(table) = v.get("compose") else {
        return FiniteBaseCategory::without_composites(objects, arrows);
    };
    let names: Vec<String> = arrows.iter().map(|a| a.name.clone()).collect();
    let apos = positions(&names);
    let ids = object(field(v, "identities")?, "identities")?;
    let identities = objects
        .iter()
        .map(|o| lookup(&apos, &id_string(ids.get(o).ok_or_else(|| bad(format!("no identity for `{o}`")))?)?, "arrow"))
        .collect::<Result<Vec<_>>>()?;
    let mut comps = Vec::new();
    for t in array(table, "compose")? {
        let t = array(t, "compose entry")?;
        if t.len() != 3 {
            return Err(bad("composition entries are triples [g, f, g∘f]"));
        }
        let get = |i: usize| lookup(&apos, &id_string(&t[i])?, "arrow");
        comps.push((get(0)?, get(1)?, get(2)?));
    }
    FiniteBaseCategory::new(objects, arrows, identities, &comps)
}

pub fn encode_base(b: &FiniteBaseCategory) -> Value {
    let objs = b.objects();
    let arrows: Vec<Value> = b
        .arrows()
        .iter()
        .map(|a| json!({"name": a.name, "src": objs[a.source], "tgt": objs[a.target]}))
        .collect();
    let ids: Map<String, Value> = (0..objs.len())
        .map(|x| (objs[x].clone(), json!(b.arrows()[b.identity(x)].name)))
        .collect();
    let n = b.arrows().len();
    let mut compose = Vec::new();
    for g in 0..n {
        for f in 0..n {
            if let Some(h) = b.compose(g, f) {
                compose.push(json!([b.arrows()[g].name, b.arrows()[f].name, b.arrows()[h].name]));
            }
        }
    }
    json!({"objects": objs, "arrows": arrows, "identities": ids, "compose": compose})
}

impl Codec for PresheafCat {
    fn instance_name(&self) -> String {
        "presheaf".into()
    }

    fn encode_object(&self, p: &Presheaf, labels: &Labels) -> Value {
        let base = self.base();
        let sets: Map<String, Value> = base
            .objects()
            .iter()
            .zip(labels)
            .map(|(o, l)| (o.clone(), json!(l)))
            .collect();
        let actions: Map<String, Value> = base
            .arrows()
            .iter()
            .enumerate()
            .filter(|(a, _)| !base.is_identity(*a))
            .map(|(a, arrow)| {
                let (from, to) = (&labels[arrow.target], &labels[arrow.source]);
                let m: Map<String, Value> = p
                    .action(a)
                    .iter()
                    .enumerate()
                    .map(|(i, &j)| (from[i].clone(), json!(to[j])))
                    .collect();
                (arrow.name.clone(), Value::Object(m))
            })
            .collect();
        json!({"sets": sets, "actions": actions})
    }

    fn decode_object(&self, v: &Value) -> Result<(Presheaf, Labels)> {
        let base = self.base();
        let sets = field(v, "sets")?;
        let labels = base
            .objects()
            .iter()
            .map(|o| sorted_ids(field(sets, o)?, o))
            .collect::<Result<Labels>>()?;
        let acts = v.get("actions").cloned().unwrap_or(Value::Object(Map::new()));
        let mut actions = Vec::new();
        for (a, arrow) in base.arrows().iter().enumerate() {
            if base.is_identity(a) {
                continue;
            }
            let m = object(field(&acts, &arrow.name)?, &arrow.name)?;
            let (from, to) = (positions(&labels[arrow.target]), positions(&labels[arrow.source]));
            let mut table = vec![usize::MAX; labels[arrow.target].len()];
            for (k, val) in m {
                table[lookup(&from, k, "element")?] = lookup(&to, &id_string(val)?, "element")?;
            }
            if table.contains(&usize::MAX) {
                return Err(bad(format!("action of `{}` is not total", arrow.name)));
            }
            actions.push((a, table));
        }
        let p = self.presheaf(labels.iter().map(Vec::len).collect(), &actions)?;
        Ok((p, labels))
    }

    fn map_fields(&self) -> MapFields {
        MapFields::Nested("components")
    }

    fn morphism_from_components(&self, source: &Presheaf, target: &Presheaf, c: Vec<Vec<usize>>) -> Result<crate::presheaf::NatTrans> {
        self.nat_trans(source.clone(), target.clone(), c)
    }
}

/// Typed objects: the carrier's own fields plus `"typing"` (a map into the type
/// object) and, optionally, `"type_graph"`, which must equal the slice's.
impl<C: Codec> Codec for Slice<C> {
    fn instance_name(&self) -> String {
        format!("typed-{}", self.base().instance_name())
    }

    fn encode_object(&self, a: &SliceObject<C::Mor>, labels: &Labels) -> Value {
        let base = self.base();
        let over_labels = self.over_labels().cloned().unwrap_or_else(|| default_labels(base, self.over()));
        let mut v = base.encode_object(&self.carrier(a), labels);
        if let Value::Object(m) = &mut v {
            m.insert("typing".into(), Value::Object(encode_map(base, &a.typing, labels, &over_labels)));
            m.insert("type_graph".into(), base.encode_object(self.over(), &over_labels));
        }
        v
    }

    fn decode_object(&self, v: &Value) -> Result<(SliceObject<C::Mor>, Labels)> {
        let base = self.base();
        let (carrier, labels) = base.decode_object(v)?;
        let over_labels = self.over_labels().cloned().unwrap_or_else(|| default_labels(base, self.over()));
        if let Some(t) = v.get("type_graph") {
            if base.decode_object(t)?.0 != *self.over() {
                return Err(bad("`type_graph` differs from the slice's type object"));
            }
        }
        let typing = decode_map(base, field(v, "typing")?, (&carrier, &labels), (self.over(), &over_labels))?;
        Ok((self.object(typing)?, labels))
    }

    fn map_fields(&self) -> MapFields {
        self.base().map_fields()
    }

    fn morphism_from_components(
        &self,
        source: &SliceObject<C::Mor>,
        target: &SliceObject<C::Mor>,
        c: Vec<Vec<usize>>,
    ) -> Result<Self::Mor> {
        let h = self.base().morphism_from_components(&self.carrier(source), &self.carrier(target), c)?;
        self.morphism(source.clone(), target.clone(), h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dpo::{apply, edge_to_fresh_vertex_rule};
    use crate::presheaf::parallel_pair_base;
    use crate::simplegraph::glued_edge_square;

    fn round_trip<C: Codec>(cat: &C, v: &Value) -> Value {
        let d = Diagram::<C>::decode(cat, v).unwrap();
        d.encode(cat, Map::new())
    }

    #[test]
    fn natural_order() {
        let mut ids = vec!["10", "b", "2", "a", "1"];
        ids.sort_by(|a, b| natural_cmp(a, b));
        assert_eq!(ids, ["1", "2", "10", "a", "b"]);
    }

    #[test]
    fn graph_ids_map_by_sorted_order() {
        let v = json!({"nodes": ["b", "a"], "edges": [{"id": "x", "src": "b", "tgt": "a"}]});
        let (g, labels) = MultigraphCat.decode_object(&v).unwrap();
        assert_eq!(g.edges(), &[(1, 0)]);
        assert_eq!(labels[0], ["a", "b"]);
        let again = MultigraphCat.encode_object(&g, &labels);
        assert_eq!(MultigraphCat.decode_object(&again).unwrap().0, g);
    }

    #[test]
    fn rejects_bad_payloads() {
        assert!(MultigraphCat.decode_object(&json!({"nodes": ["a", "a"], "edges": []})).is_err());
        assert!(MultigraphCat
            .decode_object(&json!({"nodes": ["a"], "edges": [{"id": "e", "src": "a", "tgt": "z"}]}))
            .is_err());
        assert!(FinSetCat.decode_object(&json!({"elements": 3})).is_err());
    }

    #[test]
    fn square_round_trips() {
        let v = square_diagram(&SimpleGraphCat, "square", &glued_edge_square()).encode(&SimpleGraphCat, Map::new());
        assert_eq!(round_trip(&SimpleGraphCat, &v), v);
        let d = Diagram::decode(&SimpleGraphCat, &v).unwrap();
        assert_eq!(read_square(&d).unwrap(), glued_edge_square());
    }

    #[test]
    fn derivation_keeps_host_labels() {
        let rule = edge_to_fresh_vertex_rule();
        let host = Graph::path(2);
        let m = GraphMorphism::new(Graph::path(1), host.clone(), vec![0, 1], vec![0]).unwrap();
        let d = apply(&MultigraphCat, &rule, &m).unwrap();
        let hl = vec![vec!["a".into(), "b".into(), "c".into()], vec!["ab".into(), "bc".into()]];
        let diag = derivation_diagram(&MultigraphCat, &d, None, Some(&hl));
        assert_eq!(diag.labels("Z").unwrap()[0], ["a", "b", "c", "0"]);
        assert_eq!(diag.labels("Y").unwrap()[1], ["bc"]);
        let v = encode_derivation(&MultigraphCat, &diag, true);
        let back = Diagram::decode(&MultigraphCat, &v).unwrap();
        let d2 = read_derivation(&MultigraphCat, &back, true).unwrap();
        assert!(MultigraphCat.find_iso(&d2.result(&MultigraphCat), &d.result(&MultigraphCat)).is_some());
    }

    #[test]
    fn rule_round_trips() {
        let rule = edge_to_fresh_vertex_rule();
        let v = encode_rule(&MultigraphCat, &rule);
        let back = decode_rule(&MultigraphCat, &v).unwrap();
        assert_eq!(back.rule, rule);
        assert_eq!(encode_rule(&MultigraphCat, &back.rule), v);
    }

    #[test]
    fn presheaf_and_base_round_trip() {
        let base = parallel_pair_base();
        assert_eq!(decode_base(&encode_base(&base)).unwrap(), base);
        let short = json!({"objects": ["V", "E"], "arrows": [{"name": "s", "src": "V", "tgt": "E"}, {"name": "t", "src": "V", "tgt": "E"}]});
        assert_eq!(decode_base(&short).unwrap(), base);
        let cat = PresheafCat::new(base);
        let v = json!({"sets": {"V": ["x", "y"], "E": ["e"]}, "actions": {"s": {"e": "x"}, "t": {"e": "y"}}});
        let (p, labels) = cat.decode_object(&v).unwrap();
        assert_eq!(cat.encode_object(&p, &labels), v);
    }

    #[test]
    fn typed_objects_round_trip() {
        let tg = Graph::new(2, vec![(0, 1)]).unwrap();
        let sl = Slice::new(MultigraphCat, tg);
        let v = json!({
            "nodes": ["u", "w"],
            "edges": [{"id": "e", "src": "u", "tgt": "w"}],
            "typing": {"node_map": {"u": "0", "w": "1"}, "edge_map": {"e": "0"}}
        });
        let (obj, labels) = sl.decode_object(&v).unwrap();
        let enc = sl.encode_object(&obj, &labels);
        assert_eq!(sl.decode_object(&enc).unwrap().0, obj);
        let wrong = json!({
            "nodes": ["u", "w"],
            "edges": [{"id": "e", "src": "u", "tgt": "w"}],
            "typing": {"node_map": {"u": "1", "w": "0"}, "edge_map": {"e": "0"}}
        });
        assert!(sl.decode_object(&wrong).is_err());
    }
}
