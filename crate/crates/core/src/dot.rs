//! Graphviz output for objects, morphisms and diagrams.
//!
//! Node identifiers are built from element labels and emitted in natural
//! label order, so equal input gives byte-identical text.

use std::cmp::Ordering;
use std::fmt::Write;

use crate::codec::{natural_cmp, Codec, Diagram, Labels};
use crate::finset::{FinSet, FinSetCat};
use crate::multigraph::{Graph, MultigraphCat};
use crate::presheaf::{Presheaf, PresheafCat};
use crate::simplegraph::{SimpleGraph, SimpleGraphCat};
use crate::slice::{Slice, SliceObject};

/// An element of an object, as `(sort, index)`.
pub type Point = (usize, usize);

/// What to draw for one object: element nodes and structure edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Drawing {
    pub nodes: Vec<Point>,
    pub edges: Vec<(Point, Point, Option<Point>)>,
    /// Extra text per node, e.g. its type.
    pub notes: Vec<(Point, String)>,
}

pub trait Draw: Codec {
    fn draw(&self, a: &Self::Obj) -> Drawing;

    /// Text for a structure edge; by default the label of the element it stands for.
    fn edge_label(&self, labels: &Labels, e: Point) -> String {
        labels[e.0][e.1].clone()
    }
}

impl Draw for FinSetCat {
    fn draw(&self, a: &FinSet) -> Drawing {
        Drawing {
            nodes: (0..a.size()).map(|i| (0, i)).collect(),
            ..Drawing::default()
        }
    }
}

impl Draw for MultigraphCat {
    fn draw(&self, g: &Graph) -> Drawing {
        Drawing {
            nodes: (0..g.vertex_count()).map(|v| (0, v)).collect(),
            edges: (0..g.edge_count()).map(|e| ((0, g.src(e)), (0, g.tgt(e)), Some((1, e)))).collect(),
            notes: Vec::new(),
        }
    }
}

impl Draw for SimpleGraphCat {
    fn draw(&self, g: &SimpleGraph) -> Drawing {
        Drawing {
            nodes: (0..g.vertex_count()).map(|v| (0, v)).collect(),
            edges: g.edges().into_iter().map(|(s, t)| ((0, s), (0, t), None)).collect(),
            notes: Vec::new(),
        }
    }
}

/// Every element is a node; each non-identity action `P(w) → P(v)` is drawn
/// from an element to its image.
impl Draw for PresheafCat {
    fn draw(&self, p: &Presheaf) -> Drawing {
        let base = self.base();
        let nodes = p.sets().iter().enumerate().flat_map(|(w, &n)| (0..n).map(move |i| (w, i))).collect();
        let mut edges = Vec::new();
        for (a, arrow) in base.arrows().iter().enumerate() {
            if base.is_identity(a) {
                continue;
            }
            for (e, &img) in p.action(a).iter().enumerate() {
                edges.push(((arrow.target, e), (arrow.source, img), Some((usize::MAX, a))));
            }
        }
        Drawing {
            nodes,
            edges,
            notes: Vec::new(),
        }
    }

    fn edge_label(&self, _labels: &Labels, e: Point) -> String {
        self.base().arrows()[e.1].name.clone()
    }
}

impl<C: Draw> Draw for Slice<C> {
    fn draw(&self, a: &SliceObject<C::Mor>) -> Drawing {
        let base = self.base();
        let mut d = base.draw(&self.carrier(a));
        let over_labels = self
            .over_labels()
            .cloned()
            .unwrap_or_else(|| crate::codec::default_labels(base, self.over()));
        let typing = base.components(&a.typing);
        d.notes = d
            .nodes
            .iter()
            .map(|&(s, i)| ((s, i), over_labels[s][typing[s][i]].clone()))
            .collect();
        d
    }

    fn edge_label(&self, labels: &Labels, e: Point) -> String {
        self.base().edge_label(labels, e)
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

struct Namer<'a> {
    prefix: &'a str,
    sorts: Vec<String>,
    labels: &'a Labels,
    single_sort: bool,
}

impl Namer<'_> {
    fn id(&self, (s, i): Point) -> String {
        let elem = &self.labels[s][i];
        match (self.prefix.is_empty(), self.single_sort) {
            (true, true) => quote(elem),
            (true, false) => quote(&format!("{}:{elem}", self.sorts[s])),
            (false, true) => quote(&format!("{}/{elem}", self.prefix)),
            (false, false) => quote(&format!("{}/{}:{elem}", self.prefix, self.sorts[s])),
        }
    }

    fn text(&self, (s, i): Point) -> String {
        if self.single_sort {
            self.labels[s][i].clone()
        } else {
            format!("{}:{}", self.sorts[s], self.labels[s][i])
        }
    }
}

fn point_order(labels: &Labels, a: Point, b: Point) -> Ordering {
    a.0.cmp(&b.0).then_with(|| natural_cmp(&labels[a.0][a.1], &labels[b.0][b.1]))
}

fn node_sorts(d: &Drawing) -> usize {
    let mut sorts: Vec<usize> = d.nodes.iter().map(|p| p.0).collect();
    sorts.dedup();
    sorts.len()
}

fn namer<'a, C: Draw>(cat: &C, prefix: &'a str, labels: &'a Labels, d: &Drawing) -> Namer<'a> {
    Namer {
        prefix,
        sorts: cat.sort_names(),
        labels,
        single_sort: node_sorts(d) <= 1,
    }
}

fn write_body<C: Draw>(cat: &C, out: &mut String, indent: &str, n: &Namer<'_>, d: &Drawing) {
    let mut nodes = d.nodes.clone();
    nodes.sort_by(|&a, &b| point_order(n.labels, a, b));
    for p in nodes {
        let mut text = n.text(p);
        if let Some((_, note)) = d.notes.iter().find(|(q, _)| *q == p) {
            text = format!("{text} : {note}");
        }
        let _ = writeln!(out, "{indent}{} [label={}];", n.id(p), quote(&text));
    }
    let mut edges: Vec<(String, String, Option<String>)> = d
        .edges
        .iter()
        .map(|&(s, t, via)| (n.id(s), n.id(t), via.map(|e| cat.edge_label(n.labels, e))))
        .collect();
    edges.sort_by(|a, b| {
        natural_cmp(&a.0, &b.0)
            .then_with(|| natural_cmp(&a.1, &b.1))
            .then_with(|| natural_cmp(a.2.as_deref().unwrap_or(""), b.2.as_deref().unwrap_or("")))
    });
    for (s, t, label) in edges {
        match label {
            Some(l) => {
                let _ = writeln!(out, "{indent}{s} -> {t} [label={}];", quote(&l));
            }
            None => {
                let _ = writeln!(out, "{indent}{s} -> {t};");
            }
        }
    }
}

/// A single object as a plain digraph.
pub fn render_object<C: Draw>(cat: &C, a: &C::Obj, labels: &Labels) -> String {
    let d = cat.draw(a);
    let n = namer(cat, "", labels, &d);
    let mut out = String::from("digraph G {\n");
    write_body(cat, &mut out, "  ", &n, &d);
    out.push_str("}\n");
    out
}

fn anchor(obj: &str) -> String {
    quote(&format!("{obj}/"))
}

/// Objects as clusters. A diagram with a single morphism shows its element
/// mapping as dashed edges; otherwise each morphism is one arrow between
/// clusters. Derivations show only the host, context and result.
pub fn render_diagram<C: Draw>(cat: &C, diagram: &Diagram<C>) -> String {
    let keep_objects: Option<&[&str]> = (diagram.kind == "derivation").then_some(&["X", "Y", "Z"]);
    let shown = |name: &str| keep_objects.is_none_or(|k| k.contains(&name));
    let morphisms: Vec<(&String, &(String, String, C::Mor))> = diagram
        .morphisms
        .iter()
        .filter(|(_, (from, to, _))| shown(from) && shown(to))
        .collect();
    let mut out = String::from("digraph G {\n  compound=true;\n");
    let mut namers = Vec::new();
    for (name, (obj, labels)) in diagram.objects.iter().filter(|(n, _)| shown(n)) {
        let d = cat.draw(obj);
        let _ = writeln!(out, "  subgraph {} {{", quote(&format!("cluster_{name}")));
        let _ = writeln!(out, "    label={};", quote(name));
        let _ = writeln!(out, "    {} [shape=point, style=invis];", anchor(name));
        let n = namer(cat, name, labels, &d);
        write_body(cat, &mut out, "    ", &n, &d);
        out.push_str("  }\n");
        namers.push((name.as_str(), n, d));
    }
    let find = |obj: &str| namers.iter().find(|(n, _, _)| *n == obj);
    if let [(name, (from, to, m))] = morphisms.as_slice() {
        let (Some((_, ns, ds)), Some((_, nt, _))) = (find(from), find(to)) else {
            unreachable!("morphism endpoints are diagram objects")
        };
        let comps = cat.components(m);
        let mut lines = Vec::new();
        for &(s, i) in &ds.nodes {
            lines.push((ns.id((s, i)), nt.id((s, comps[s][i]))));
        }
        lines.sort_by(|a, b| natural_cmp(&a.0, &b.0).then_with(|| natural_cmp(&a.1, &b.1)));
        for (s, t) in lines {
            let _ = writeln!(out, "  {s} -> {t} [style=dashed, color=gray, label={}];", quote(name));
        }
    } else {
        for (name, (from, to, _)) in morphisms {
            let _ = writeln!(
                out,
                "  {} -> {} [ltail={}, lhead={}, label={}];",
                anchor(from),
                anchor(to),
                quote(&format!("cluster_{from}")),
                quote(&format!("cluster_{to}")),
                quote(name)
            );
        }
    }
    out.push_str("}\n");
    out
}
