//! C interface to the rewriting engine over directed multigraphs.
//!
//! Objects cross the boundary as JSON text in the same format the command
//! line tool reads. Every entry point returns an [`AdhStatus`]; on failure a
//! message is available from [`adh_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use adhesive::category::DEFAULT_HOM_LIMIT;
use adhesive::codec::{decode_rule, derivation_diagram, encode_derivation, Codec, Diagram, Labels, LabelledRule};
use adhesive::dot::render_diagram;
use adhesive::dpo::{apply, find_matches, gluing_check};
use adhesive::finset::FinSetCat;
use adhesive::multigraph::{Graph, GraphMorphism, MultigraphCat};
use adhesive::sampler::Sampler;
use adhesive::simplegraph::SimpleGraphCat;
use adhesive::suite::{run_law, Law, SuiteConfig};
use adhesive::CatError;

/// Result codes. The first three match the exit codes of the command line tool.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdhStatus {
    Ok = 0,
    /// The question was well posed and the answer is no: no applicable match, a law failed.
    Negative = 1,
    /// Malformed JSON, unknown names, or data that is not well formed.
    InvalidInput = 2,
    NullPointer = 3,
    /// A panic was caught at the boundary.
    Internal = 4,
}

/// A multigraph together with the ids of its vertices and edges.
pub struct AdhGraph {
    graph: Graph,
    labels: Labels,
}

pub struct AdhRule {
    rule: LabelledRule<GraphMorphism>,
}

pub struct AdhDerivation {
    diagram: Diagram<MultigraphCat>,
    linear: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

type Outcome = Result<(), (AdhStatus, String)>;

fn input(e: impl ToString) -> (AdhStatus, String) {
    (AdhStatus::InvalidInput, e.to_string())
}

fn from_cat(e: CatError) -> (AdhStatus, String) {
    match e {
        CatError::Gluing(r) => (AdhStatus::Negative, format!("gluing conditions fail; {r}")),
        e => input(e),
    }
}

fn guard(f: impl FnOnce() -> Outcome) -> AdhStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AdhStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            AdhStatus::Internal
        }
    }
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (AdhStatus, String)> {
    if s.is_null() {
        return Err((AdhStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|_| input("string is not UTF-8"))
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string holding JSON.
unsafe fn read_json(s: *const c_char) -> Result<serde_json::Value, (AdhStatus, String)> {
    serde_json::from_str(read_str(s)?).map_err(|e| input(format!("invalid JSON: {e}")))
}

/// # Safety
/// `p` must be null or point to a live value of type `T`.
unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (AdhStatus, String)> {
    p.as_ref().ok_or((AdhStatus::NullPointer, "null handle".into()))
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn put<T>(out: *mut *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err((AdhStatus::NullPointer, "null output pointer".into()));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// # Safety
/// `out` must be null or valid for a pointer write.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Outcome {
    if out.is_null() {
        return Err((AdhStatus::NullPointer, "null output pointer".into()));
    }
    *out = CString::new(s).map_err(input)?.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the next call.
#[no_mangle]
pub extern "C" fn adh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn adh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses `{"nodes": [...], "edges": [{"id", "src", "tgt"}, ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn adh_graph_parse(json: *const c_char, out: *mut *mut AdhGraph) -> AdhStatus {
    guard(|| {
        let (graph, labels) = MultigraphCat.decode_object(&read_json(json)?).map_err(input)?;
        put(out, AdhGraph { graph, labels })
    })
}

/// # Safety
/// `g` must be a live graph handle and the output pointers valid for writing.
#[no_mangle]
pub unsafe extern "C" fn adh_graph_counts(g: *const AdhGraph, vertices: *mut usize, edges: *mut usize) -> AdhStatus {
    guard(|| {
        let g = deref(g)?;
        if vertices.is_null() || edges.is_null() {
            return Err((AdhStatus::NullPointer, "null output pointer".into()));
        }
        *vertices = g.graph.vertex_count();
        *edges = g.graph.edge_count();
        Ok(())
    })
}

/// Writes the graph as JSON; free the string with [`adh_string_free`].
///
/// # Safety
/// `g` must be a live graph handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn adh_graph_to_json(g: *const AdhGraph, out: *mut *mut c_char) -> AdhStatus {
    guard(|| {
        let g = deref(g)?;
        put_string(out, MultigraphCat.encode_object(&g.graph, &g.labels).to_string())
    })
}

/// # Safety
/// `g` must be null or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn adh_graph_free(g: *mut AdhGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Parses a rule with `left`, `interface`, `right`, `l`, `r` and `linear`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn adh_rule_parse(json: *const c_char, out: *mut *mut AdhRule) -> AdhStatus {
    guard(|| {
        let rule = decode_rule(&MultigraphCat, &read_json(json)?).map_err(input)?;
        put(out, AdhRule { rule })
    })
}

/// # Safety
/// `r` must be null or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn adh_rule_free(r: *mut AdhRule) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Applies the rule at its first match satisfying the gluing conditions.
/// Returns [`AdhStatus::Negative`] when there is none.
///
/// # Safety
/// `rule` and `host` must be live handles and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn adh_apply(rule: *const AdhRule, host: *const AdhGraph, out: *mut *mut AdhDerivation) -> AdhStatus {
    guard(|| {
        let (lr, host) = (&deref(rule)?.rule, deref(host)?);
        let cat = MultigraphCat;
        let mut first_failure = None;
        for m in find_matches(&cat, &lr.rule, &host.graph, false, DEFAULT_HOM_LIMIT).map_err(from_cat)? {
            let report = gluing_check(&cat, &lr.rule, &m.morphism).map_err(from_cat)?;
            if !report.ok() {
                first_failure.get_or_insert(report);
                continue;
            }
            let d = apply(&cat, &lr.rule, &m.morphism).map_err(from_cat)?;
            let diagram = derivation_diagram(&cat, &d, Some((&lr.left, &lr.interface, &lr.right)), Some(&host.labels));
            return put(out, AdhDerivation { diagram, linear: lr.rule.linear() });
        }
        Err(match first_failure {
            Some(r) => (AdhStatus::Negative, format!("gluing conditions fail; {r}")),
            None => (AdhStatus::Negative, "the rule has no match in the host".into()),
        })
    })
}

/// The rewritten graph `Z`, as a new handle.
///
/// # Safety
/// `d` must be a live derivation handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn adh_derivation_result(d: *const AdhDerivation, out: *mut *mut AdhGraph) -> AdhStatus {
    guard(|| {
        let d = &deref(d)?.diagram;
        let graph = d.object("Z").map_err(input)?.clone();
        let labels = d.labels("Z").map_err(input)?.clone();
        put(out, AdhGraph { graph, labels })
    })
}

/// # Safety
/// `d` must be a live derivation handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn adh_derivation_to_json(d: *const AdhDerivation, out: *mut *mut c_char) -> AdhStatus {
    guard(|| {
        let d = deref(d)?;
        put_string(out, encode_derivation(&MultigraphCat, &d.diagram, d.linear).to_string())
    })
}

/// Graphviz rendering of the host, context and result.
///
/// # Safety
/// `d` must be a live derivation handle and `out` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn adh_derivation_to_dot(d: *const AdhDerivation, out: *mut *mut c_char) -> AdhStatus {
    guard(|| put_string(out, render_diagram(&MultigraphCat, &deref(d)?.diagram)))
}

/// # Safety
/// `d` must be null or a handle from this library that was not yet freed.
#[no_mangle]
pub unsafe extern "C" fn adh_derivation_free(d: *mut AdhDerivation) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

fn failures<C: Sampler>(cat: &C, law: Law, cfg: &SuiteConfig) -> Result<usize, (AdhStatus, String)> {
    Ok(run_law(cat, law, cfg).map_err(input)?.failed)
}

/// Runs one law for `iters` seeded iterations on `finset`, `multigraph` or
/// `simplegraph`. Writes the number of failing iterations to `failed` and
/// returns [`AdhStatus::Negative`] if it is non-zero.
///
/// # Safety
/// `category` and `law` must be NUL-terminated strings and `failed` valid for writing.
#[no_mangle]
pub unsafe extern "C" fn adh_check_law(
    category: *const c_char,
    law: *const c_char,
    seed: u64,
    iters: usize,
    failed: *mut usize,
) -> AdhStatus {
    guard(|| {
        let law: Law = read_str(law)?.parse().map_err(input)?;
        let cfg = SuiteConfig { seed, iters, ..SuiteConfig::default() };
        let n = match read_str(category)? {
            "finset" => failures(&FinSetCat, law, &cfg)?,
            "multigraph" => failures(&MultigraphCat, law, &cfg)?,
            "simplegraph" => failures(&SimpleGraphCat, law, &cfg)?,
            other => return Err(input(format!("unknown category '{other}'"))),
        };
        if failed.is_null() {
            return Err((AdhStatus::NullPointer, "null output pointer".into()));
        }
        *failed = n;
        if n == 0 {
            Ok(())
        } else {
            Err((AdhStatus::Negative, format!("{law} failed on {n} of {iters} iterations")))
        }
    })
}
