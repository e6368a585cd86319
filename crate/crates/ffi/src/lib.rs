//! C ABI over the `mislab` crate.
//!
//! Objects are opaque heap handles released with their `_free` function.
//! Every fallible call returns a [`MislabStatus`]; on failure the message is
//! available from [`mislab_last_error_message`] on the same thread. Strings
//! returned through `char **` outputs are owned by the caller and released
//! with [`mislab_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mislab::experiment::{run_experiment, ExperimentRequest};
use mislab::graph::gen_bounded_degree;
use mislab::scheme::CffBuilder;
use mislab::{cff_scheme, decode, randomized_scheme, run_scheme, Caps, Error, Graph, OraclePolicy, QueryScheme, Transcript};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MislabStatus {
    Ok = 0,
    InvalidArgument = 1,
    ParseError = 2,
    CapExceeded = 3,
    PolicyMismatch = 4,
    ConstructionFailed = 5,
    VerificationFailed = 6,
    IoError = 7,
    NullPointer = 8,
    Panic = 9,
}

/// Oracle answering rule for [`mislab_run_scheme`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MislabPolicy {
    /// Greedy in increasing vertex order.
    GreedyLex = 0,
    /// Greedy in decreasing vertex order.
    GreedyReverse = 1,
    /// Greedy in a random order derived from the seed and query index.
    Random = 2,
}

/// Hidden graph.
pub struct MislabGraph(Graph);

/// Non-adaptive query scheme.
pub struct MislabScheme(QueryScheme);

/// Ordered query/answer record.
pub struct MislabTranscript(Transcript);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> MislabStatus {
    match e {
        Error::InvalidParams(_) => MislabStatus::InvalidArgument,
        Error::Parse { .. } | Error::Json(_) => MislabStatus::ParseError,
        Error::CapExceeded { .. } => MislabStatus::CapExceeded,
        Error::PolicyMismatch(_) => MislabStatus::PolicyMismatch,
        Error::Construction(_) => MislabStatus::ConstructionFailed,
        Error::Verification(_) => MislabStatus::VerificationFailed,
        Error::Io(_) => MislabStatus::IoError,
    }
}

struct Fail(MislabStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(MislabStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status plus last-error text.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> MislabStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            MislabStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            MislabStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(MislabStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s)
        .map_err(|_| Fail(MislabStatus::InvalidArgument, "output contains a nul byte".into()))?
        .into_raw();
    Ok(())
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

/// Message of the last failed call on this thread, or NULL. Valid until the
/// next call on this thread.
#[no_mangle]
pub extern "C" fn mislab_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn mislab_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn mislab_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses the graph text format (`n m` header, then `u v` lines).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_graph_parse(text: *const c_char, out: *mut *mut MislabGraph) -> MislabStatus {
    guard(|| {
        let g = Graph::parse(read_str(text, "text")?)?;
        put(out, MislabGraph(g))
    })
}

/// Random graph with maximum degree at most `delta`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_graph_generate(
    n: usize,
    delta: usize,
    density: f64,
    seed: u64,
    out: *mut *mut MislabGraph,
) -> MislabStatus {
    guard(|| put(out, MislabGraph(gen_bounded_degree(n, delta, density, seed)?)))
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn mislab_graph_vertex_count(g: *const MislabGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.n())
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn mislab_graph_edge_count(g: *const MislabGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn mislab_graph_max_degree(g: *const MislabGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.max_degree())
}

/// False for out-of-range vertices.
///
/// # Safety
/// `g` must be a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn mislab_graph_has_edge(g: *const MislabGraph, u: usize, v: usize) -> bool {
    g.as_ref().is_some_and(|g| u < g.0.n() && v < g.0.n() && g.0.has_edge(u, v))
}

/// # Safety
/// `a` and `b` must be live graph handles.
#[no_mangle]
pub unsafe extern "C" fn mislab_graph_equal(a: *const MislabGraph, b: *const MislabGraph) -> bool {
    match (a.as_ref(), b.as_ref()) {
        (Some(a), Some(b)) => a.0 == b.0,
        _ => false,
    }
}

/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_graph_to_text(g: *const MislabGraph, out: *mut *mut c_char) -> MislabStatus {
    guard(|| put_string(out, get(g, "graph")?.0.to_text()))
}

/// # Safety
/// `g` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mislab_graph_free(g: *mut MislabGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// `ceil(c Δ² ln n)` random queries with inclusion probability `p`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_scheme_randomized(
    n: usize,
    delta: usize,
    c: f64,
    p: f64,
    seed: u64,
    out: *mut *mut MislabScheme,
) -> MislabStatus {
    guard(|| put(out, MislabScheme(randomized_scheme(n, delta, c, p, seed)?)))
}

/// Deterministic scheme dualized from a random cover-free family with
/// oversampling constant `c`; verified when the check fits the default caps.
/// `verified` may be NULL.
///
/// # Safety
/// `out` must be writable; `verified` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_scheme_cff(
    n: usize,
    delta: usize,
    c: f64,
    seed: u64,
    out: *mut *mut MislabScheme,
    verified: *mut bool,
) -> MislabStatus {
    guard(|| {
        let caps = Caps::from_env()?;
        let built = cff_scheme(n, delta, &CffBuilder::Random { c }, seed, &caps)?;
        if !verified.is_null() {
            *verified = built.verified;
        }
        put(out, MislabScheme(built.scheme))
    })
}

/// Parses the scheme text format (`n t` header, then one query per line).
///
/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_scheme_parse(text: *const c_char, out: *mut *mut MislabScheme) -> MislabStatus {
    guard(|| put(out, MislabScheme(QueryScheme::parse(read_str(text, "text")?)?)))
}

/// # Safety
/// `s` must be a live scheme handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_scheme_to_text(s: *const MislabScheme, out: *mut *mut c_char) -> MislabStatus {
    guard(|| put_string(out, get(s, "scheme")?.0.to_text()))
}

/// # Safety
/// `s` must be a live scheme handle.
#[no_mangle]
pub unsafe extern "C" fn mislab_scheme_query_count(s: *const MislabScheme) -> usize {
    s.as_ref().map_or(0, |s| s.0.len())
}

/// # Safety
/// `s` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mislab_scheme_free(s: *mut MislabScheme) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Runs every query of `s` against `g` under `policy`. `seed` is used by
/// the random policy only.
///
/// # Safety
/// `g` and `s` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_run_scheme(
    g: *const MislabGraph,
    s: *const MislabScheme,
    policy: MislabPolicy,
    seed: u64,
    out: *mut *mut MislabTranscript,
) -> MislabStatus {
    guard(|| {
        let g = &get(g, "graph")?.0;
        let s = &get(s, "scheme")?.0;
        if s.n() != g.n() {
            return Err(Fail(
                MislabStatus::InvalidArgument,
                format!("scheme universe {} differs from graph size {}", s.n(), g.n()),
            ));
        }
        let policy = match policy {
            MislabPolicy::GreedyLex => OraclePolicy::GreedyLex,
            MislabPolicy::GreedyReverse => OraclePolicy::GreedyOrder((0..g.n()).rev().collect()),
            MislabPolicy::Random => OraclePolicy::Random { seed },
        };
        put(out, MislabTranscript(run_scheme(g, s, &policy)?))
    })
}

/// # Safety
/// `t` must be a live transcript handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_transcript_to_jsonl(t: *const MislabTranscript, out: *mut *mut c_char) -> MislabStatus {
    guard(|| put_string(out, get(t, "transcript")?.0.to_jsonl(None)))
}

/// # Safety
/// `text` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_transcript_parse_jsonl(
    text: *const c_char,
    out: *mut *mut MislabTranscript,
) -> MislabStatus {
    guard(|| put(out, MislabTranscript(Transcript::parse_jsonl(read_str(text, "text")?)?)))
}

/// # Safety
/// `t` must be a live transcript handle.
#[no_mangle]
pub unsafe extern "C" fn mislab_transcript_len(t: *const MislabTranscript) -> usize {
    t.as_ref().map_or(0, |t| t.0.len())
}

/// # Safety
/// `t` must come from this library and not be freed twice. NULL is ignored.
#[no_mangle]
pub unsafe extern "C" fn mislab_transcript_free(t: *mut MislabTranscript) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Decodes `t` into a graph with undecided pairs read as non-edges and
/// stores the number of undecided pairs in `unknown_pairs` (may be NULL).
///
/// # Safety
/// `t` must be a live transcript handle; `out` must be writable;
/// `unknown_pairs` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_decode(
    t: *const MislabTranscript,
    out: *mut *mut MislabGraph,
    unknown_pairs: *mut usize,
) -> MislabStatus {
    guard(|| {
        let t = &get(t, "transcript")?.0;
        let decoded = decode(t.n(), t)?;
        if !unknown_pairs.is_null() {
            *unknown_pairs = decoded.unknown().len();
        }
        put(out, MislabGraph(decoded.complete_as_nonedge()))
    })
}

/// Runs an experiment described by a JSON object such as
/// `{"experiment":"family-count","n":9,"delta":2}` and returns the report as
/// JSON. `passed` (may be NULL) receives whether every bound check held.
///
/// # Safety
/// `request` must be a nul-terminated string; `report` must be writable;
/// `passed` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn mislab_experiment_json(
    request: *const c_char,
    report: *mut *mut c_char,
    passed: *mut bool,
) -> MislabStatus {
    guard(|| {
        let req = ExperimentRequest::from_json(read_str(request, "request")?)?;
        let r = run_experiment(&req, &Caps::from_env()?)?;
        if !passed.is_null() {
            *passed = r.passed();
        }
        put_string(report, r.to_json())
    })
}
