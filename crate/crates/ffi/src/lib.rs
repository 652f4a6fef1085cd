//! C ABI over the zonecast library.
//!
//! Graphs and construction results cross the boundary as opaque handles.
//! Every fallible call returns a [`ZcStatus`]; on failure
//! [`zc_last_error_message`] describes what went wrong on the calling thread.
//! Strings handed out by the library must be released with
//! [`zc_string_free`], handles with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use zonecast::coding::verify_round_trip;
use zonecast::error::{CodingError, ConstructionError, GraphError};
use zonecast::experiments::field_for;
use zonecast::gf::FieldSpec;
use zonecast::graph::{DirectedMultigraph, GraphFile, NodeId};
use zonecast::online::{check_invariants, online_construct_with, ExpansionOrder, OnlineResult};
use zonecast::topology::fixture;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZcStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidGraph = 4,
    InvalidSession = 5,
    OutOfRange = 6,
    InvariantViolation = 7,
    NoFeasibleCode = 8,
    FieldTooSmall = 9,
    Undecodable = 10,
    Panic = 99,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZcOrder {
    EdgeOrder = 0,
    UncoloredFirst = 1,
}

impl From<ZcOrder> for ExpansionOrder {
    fn from(o: ZcOrder) -> Self {
        match o {
            ZcOrder::EdgeOrder => ExpansionOrder::EdgeOrder,
            ZcOrder::UncoloredFirst => ExpansionOrder::UncoloredFirst,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZcField {
    /// Smallest field with a point for every zone.
    Auto = 0,
    Gf8 = 8,
    Gf16 = 16,
}

/// A directed multigraph, optionally with a stored session.
pub struct ZcGraph {
    graph: DirectedMultigraph,
    source: Option<NodeId>,
    receivers: Option<Vec<NodeId>>,
}

/// The outcome of one online construction.
pub struct ZcResult {
    result: OnlineResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl std::fmt::Display) {
    let text = CString::new(msg.to_string().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

fn fail(status: ZcStatus, msg: impl std::fmt::Display) -> ZcStatus {
    set_error(msg);
    status
}

fn guard(f: impl FnOnce() -> ZcStatus) -> ZcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(ZcStatus::Panic, "internal panic"),
    }
}

fn graph_status(e: &GraphError) -> ZcStatus {
    match e {
        GraphError::Parse(_) => ZcStatus::Parse,
        GraphError::InvalidNode { .. } | GraphError::SourceIsReceiver(_) => ZcStatus::InvalidSession,
        GraphError::EndpointOutOfRange { .. } | GraphError::SelfLoop { .. } => ZcStatus::InvalidGraph,
    }
}

fn construction_status(e: &ConstructionError) -> ZcStatus {
    match e {
        ConstructionError::Graph(g) => graph_status(g),
        ConstructionError::NoReceivers | ConstructionError::DuplicateReceiver(_) => ZcStatus::InvalidSession,
        _ => ZcStatus::InvariantViolation,
    }
}

fn coding_status(e: &CodingError) -> ZcStatus {
    match e {
        CodingError::NoFeasibleCode => ZcStatus::NoFeasibleCode,
        CodingError::FieldTooSmall { .. } => ZcStatus::FieldTooSmall,
        CodingError::Undecodable { .. } => ZcStatus::Undecodable,
        CodingError::MixedPath { .. } | CodingError::UncoloredEdge { .. } => ZcStatus::InvariantViolation,
        CodingError::UnknownZone(_) | CodingError::BlockLength { .. } => ZcStatus::OutOfRange,
    }
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, ZcStatus> {
    if s.is_null() {
        return Err(fail(ZcStatus::NullPointer, "string argument is null"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(ZcStatus::InvalidUtf8, "string argument is not UTF-8"))
}

unsafe fn read_slice<'a, T>(p: *const T, len: usize) -> Result<&'a [T], ZcStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(fail(ZcStatus::NullPointer, "array argument is null"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> ZcStatus {
    *out = Box::into_raw(Box::new(value));
    ZcStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, text: String) -> ZcStatus {
    match CString::new(text) {
        Ok(c) => {
            *out = c.into_raw();
            ZcStatus::Ok
        }
        Err(_) => fail(ZcStatus::Parse, "output contains a nul byte"),
    }
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn zc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failure on this thread, or null if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn zc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn zc_status_name(status: ZcStatus) -> *const c_char {
    let s: &'static str = match status {
        ZcStatus::Ok => "ok\0",
        ZcStatus::NullPointer => "null pointer\0",
        ZcStatus::InvalidUtf8 => "invalid utf-8\0",
        ZcStatus::Parse => "parse error\0",
        ZcStatus::InvalidGraph => "invalid graph\0",
        ZcStatus::InvalidSession => "invalid session\0",
        ZcStatus::OutOfRange => "out of range\0",
        ZcStatus::InvariantViolation => "invariant violation\0",
        ZcStatus::NoFeasibleCode => "no feasible code\0",
        ZcStatus::FieldTooSmall => "field too small\0",
        ZcStatus::Undecodable => "undecodable\0",
        ZcStatus::Panic => "panic\0",
    };
    s.as_ptr().cast()
}

/// Builds a graph from parallel `tails`/`heads` arrays of length
/// `arc_count`. Arc `i` gets edge id `i`.
///
/// # Safety
/// `tails` and `heads` must point to `arc_count` readable values and `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn zc_graph_new(
    node_count: usize,
    tails: *const usize,
    heads: *const usize,
    arc_count: usize,
    out: *mut *mut ZcGraph,
) -> ZcStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZcStatus::NullPointer, "out is null");
        }
        let (tails, heads) = match (read_slice(tails, arc_count), read_slice(heads, arc_count)) {
            (Ok(t), Ok(h)) => (t, h),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        let arcs: Vec<(usize, usize)> = tails.iter().copied().zip(heads.iter().copied()).collect();
        match DirectedMultigraph::new(node_count, &arcs) {
            Ok(graph) => put(
                out,
                ZcGraph {
                    graph,
                    source: None,
                    receivers: None,
                },
            ),
            Err(e) => fail(graph_status(&e), e),
        }
    })
}

/// Parses the graph JSON format (`n`, `arcs`, optional `source` and
/// `receivers`).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zc_graph_from_json(json: *const c_char, out: *mut *mut ZcGraph) -> ZcStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZcStatus::NullPointer, "out is null");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        let parsed = GraphFile::from_json(text).and_then(|f| {
            let graph = f.to_graph()?;
            let (source, receivers) = f.session();
            Ok(ZcGraph {
                graph,
                source,
                receivers,
            })
        });
        match parsed {
            Ok(g) => put(out, g),
            Err(e) => fail(graph_status(&e), e),
        }
    })
}

/// Loads a built-in example graph with its session: "fig1", "fig4" or
/// "fig5".
///
/// # Safety
/// `name` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zc_graph_fixture(name: *const c_char, out: *mut *mut ZcGraph) -> ZcStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZcStatus::NullPointer, "out is null");
        }
        let name = match read_str(name) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match fixture(name) {
            Some(f) => put(
                out,
                ZcGraph {
                    graph: f.graph,
                    source: Some(f.source),
                    receivers: Some(f.receivers),
                },
            ),
            None => fail(ZcStatus::OutOfRange, format!("unknown fixture {name:?}")),
        }
    })
}

/// Serializes the graph and any stored session as JSON.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zc_graph_to_json(graph: *const ZcGraph, out: *mut *mut c_char) -> ZcStatus {
    guard(|| {
        let Some(g) = graph.as_ref() else {
            return fail(ZcStatus::NullPointer, "graph is null");
        };
        if out.is_null() {
            return fail(ZcStatus::NullPointer, "out is null");
        }
        let file = GraphFile::from_graph(&g.graph, g.source, g.receivers.as_deref());
        put_string(out, file.to_json())
    })
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zc_graph_node_count(graph: *const ZcGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.node_count())
}

/// # Safety
/// `graph` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zc_graph_edge_count(graph: *const ZcGraph) -> usize {
    graph.as_ref().map_or(0, |g| g.graph.edge_count())
}

/// # Safety
/// `graph` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zc_graph_free(graph: *mut ZcGraph) {
    if !graph.is_null() {
        drop(Box::from_raw(graph));
    }
}

/// Runs the online construction for `receivers` in the given order.
///
/// # Safety
/// `graph` must be a live handle, `receivers` must point to
/// `receiver_count` values and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn zc_construct(
    graph: *const ZcGraph,
    source: usize,
    receivers: *const usize,
    receiver_count: usize,
    order: ZcOrder,
    out: *mut *mut ZcResult,
) -> ZcStatus {
    guard(|| {
        let Some(g) = graph.as_ref() else {
            return fail(ZcStatus::NullPointer, "graph is null");
        };
        if out.is_null() {
            return fail(ZcStatus::NullPointer, "out is null");
        }
        let rs: Vec<NodeId> = match read_slice(receivers, receiver_count) {
            Ok(r) => r.iter().copied().map(NodeId).collect(),
            Err(s) => return s,
        };
        construct_into(&g.graph, NodeId(source), &rs, order, out)
    })
}

/// Runs the online construction on the session stored with the graph.
///
/// # Safety
/// `graph` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zc_construct_session(graph: *const ZcGraph, order: ZcOrder, out: *mut *mut ZcResult) -> ZcStatus {
    guard(|| {
        let Some(g) = graph.as_ref() else {
            return fail(ZcStatus::NullPointer, "graph is null");
        };
        if out.is_null() {
            return fail(ZcStatus::NullPointer, "out is null");
        }
        let (Some(s), Some(rs)) = (g.source, g.receivers.as_ref()) else {
            return fail(ZcStatus::InvalidSession, "graph has no stored session");
        };
        construct_into(&g.graph, s, rs, order, out)
    })
}

unsafe fn construct_into(
    g: &DirectedMultigraph,
    s: NodeId,
    rs: &[NodeId],
    order: ZcOrder,
    out: *mut *mut ZcResult,
) -> ZcStatus {
    match online_construct_with(g, s, rs, order.into()) {
        Ok(result) => put(out, ZcResult { result }),
        Err(e) => fail(construction_status(&e), e),
    }
}

/// Group throughput `K = min k_i`; 0 for a null handle.
///
/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zc_result_group_k(result: *const ZcResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.group_k())
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zc_result_zone_count(result: *const ZcResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.zone_count)
}

/// # Safety
/// `result` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn zc_result_receiver_count(result: *const ZcResult) -> usize {
    result.as_ref().map_or(0, |r| r.result.receivers.len())
}

/// Path count `k_i` of the receiver at position `index`.
///
/// # Safety
/// `result` must be a live handle and `out_k` writable.
#[no_mangle]
pub unsafe extern "C" fn zc_result_receiver_k(result: *const ZcResult, index: usize, out_k: *mut usize) -> ZcStatus {
    guard(|| {
        let Some(r) = result.as_ref() else {
            return fail(ZcStatus::NullPointer, "result is null");
        };
        if out_k.is_null() {
            return fail(ZcStatus::NullPointer, "out_k is null");
        }
        match r.result.receivers.get(index) {
            Some(rp) => {
                *out_k = rp.k();
                ZcStatus::Ok
            }
            None => fail(
                ZcStatus::OutOfRange,
                format!("receiver index {index} of {}", r.result.receivers.len()),
            ),
        }
    })
}

/// Serializes the result (zone labels and per-receiver paths) as JSON.
///
/// # Safety
/// `result` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zc_result_to_json(result: *const ZcResult, out: *mut *mut c_char) -> ZcStatus {
    guard(|| {
        let Some(r) = result.as_ref() else {
            return fail(ZcStatus::NullPointer, "result is null");
        };
        if out.is_null() {
            return fail(ZcStatus::NullPointer, "out is null");
        }
        put_string(out, r.result.to_json())
    })
}

/// Parses a result produced by [`zc_result_to_json`] or the CLI.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn zc_result_from_json(json: *const c_char, out: *mut *mut ZcResult) -> ZcStatus {
    guard(|| {
        if out.is_null() {
            return fail(ZcStatus::NullPointer, "out is null");
        }
        let text = match read_str(json) {
            Ok(t) => t,
            Err(s) => return s,
        };
        match OnlineResult::from_json(text) {
            Ok(result) => put(out, ZcResult { result }),
            Err(e) => fail(graph_status(&e), e),
        }
    })
}

/// Checks the structural invariants, that every receiver's zones have full
/// rank, and that `blocks` random symbol blocks decode exactly.
///
/// # Safety
/// `graph` and `result` must be live handles describing the same graph.
#[no_mangle]
pub unsafe extern "C" fn zc_verify(
    graph: *const ZcGraph,
    result: *const ZcResult,
    field: ZcField,
    seed: u64,
    blocks: usize,
) -> ZcStatus {
    guard(|| {
        let (Some(g), Some(r)) = (graph.as_ref(), result.as_ref()) else {
            return fail(ZcStatus::NullPointer, "graph or result is null");
        };
        verify(&g.graph, &r.result, field, seed, blocks)
    })
}

fn verify(g: &DirectedMultigraph, result: &OnlineResult, field: ZcField, seed: u64, blocks: usize) -> ZcStatus {
    if result.labeling.edge_count() != g.edge_count() {
        return fail(ZcStatus::InvalidGraph, "result and graph disagree on the edge count");
    }
    let violations = check_invariants(g, result.source, &result.receiver_ids(), result);
    if let Some(v) = violations.first() {
        return fail(
            ZcStatus::InvariantViolation,
            format!("{} violations, first: {v}", violations.len()),
        );
    }
    let field = match field {
        ZcField::Auto => field_for(result.zone_count),
        ZcField::Gf8 => FieldSpec::Gf8,
        ZcField::Gf16 => FieldSpec::Gf16,
    };
    match verify_round_trip(g, result, field, seed, blocks) {
        Ok(_) => ZcStatus::Ok,
        Err(e) => fail(coding_status(&e), e),
    }
}

/// # Safety
/// `result` must be null or a handle from this library, not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn zc_result_free(result: *mut ZcResult) {
    if !result.is_null() {
        drop(Box::from_raw(result));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library, not used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn zc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
