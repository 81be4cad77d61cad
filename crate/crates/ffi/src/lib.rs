//! C ABI for the `cyclesieve` counting library.
//!
//! Graphs and count vectors cross the boundary as opaque handles created by this library and
//! released with the matching `*_free` function. Every fallible call returns a [`CsStatus`];
//! after a non-`OK` status, [`cs_last_error`] describes the failure on the calling thread.
//! Lengths are 1-based everywhere: index `k` of a count vector is the number of cycles or
//! paths of length `k`.
//!
//! The header `include/cyclesieve.h` is generated from this file by the build script.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use cyclesieve::io::{load_graph, Format};
use cyclesieve::{count_cycles, count_cycles_through, count_paths, CountVector, Error, Graph};

/// Outcome of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// An argument broke the operation's contract (vertex out of range, `ℓ = 0`, ...).
    InvalidArgument = 2,
    ParseError = 3,
    IoError = 4,
    /// An internal exactness check failed.
    ConsistencyError = 5,
    /// The requested value does not fit the output type.
    Overflow = 6,
    /// The library panicked; the handle arguments are left untouched.
    Panic = 7,
}

/// Graph file formats accepted by [`cs_graph_load`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CsFormat {
    /// `u v [w]` per line, `#` comments.
    EdgeList = 0,
    /// KONECT `out.*` files, `%` comments.
    Konect = 1,
}

/// Opaque graph handle.
pub struct CsGraph {
    graph: Graph,
}

/// Opaque per-length count vector.
pub struct CsCounts {
    counts: CountVector,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: &str) {
    let text = CString::new(message.replace('\0', " ")).expect("NUL bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(text));
}

type Failure = (CsStatus, String);

fn failure(status: CsStatus, message: impl Into<String>) -> Failure {
    (status, message.into())
}

fn from_error(e: Error) -> Failure {
    let status = match e {
        Error::Io(_) => CsStatus::IoError,
        Error::Parse { .. } => CsStatus::ParseError,
        Error::Contract(_) => CsStatus::InvalidArgument,
        Error::Consistency(_) => CsStatus::ConsistencyError,
    };
    (status, e.to_string())
}

/// Runs `f`, converting errors and panics into a status and the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> CsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CsStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(&format!("internal panic: {message}"));
            CsStatus::Panic
        }
    }
}

unsafe fn graph_ref<'a>(g: *const CsGraph) -> Result<&'a Graph, Failure> {
    // SAFETY: the caller passes NULL or a live handle from this library.
    unsafe { g.as_ref() }
        .map(|h| &h.graph)
        .ok_or_else(|| failure(CsStatus::NullArgument, "graph handle is NULL"))
}

unsafe fn counts_ref<'a>(c: *const CsCounts) -> Result<&'a CountVector, Failure> {
    // SAFETY: the caller passes NULL or a live handle from this library.
    unsafe { c.as_ref() }
        .map(|h| &h.counts)
        .ok_or_else(|| failure(CsStatus::NullArgument, "counts handle is NULL"))
}

fn check_out<T>(out: *mut T) -> Result<(), Failure> {
    if out.is_null() {
        Err(failure(CsStatus::NullArgument, "output pointer is NULL"))
    } else {
        Ok(())
    }
}

unsafe fn write_counts(out: *mut *mut CsCounts, counts: CountVector) {
    // SAFETY: `out` was checked non-NULL and points to writable storage.
    unsafe { *out = Box::into_raw(Box::new(CsCounts { counts })) };
}

/// Builds a graph on vertices `0..n` from `n_edges` edges `sources[e] → targets[e]`.
/// `weights` may be NULL for unit weights. Undirected graphs take each edge once; a repeated
/// pair keeps its first weight.
///
/// # Safety
/// `sources` and `targets` (and `weights` unless NULL) must point to `n_edges` readable
/// elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_from_edges(
    n: usize,
    directed: bool,
    sources: *const usize,
    targets: *const usize,
    weights: *const f64,
    n_edges: usize,
    out: *mut *mut CsGraph,
) -> CsStatus {
    guard(|| {
        check_out(out)?;
        if n_edges > 0 && (sources.is_null() || targets.is_null()) {
            return Err(failure(CsStatus::NullArgument, "edge arrays are NULL"));
        }
        let (src, dst, w): (&[usize], &[usize], Option<&[f64]>) = if n_edges == 0 {
            (&[], &[], None)
        } else {
            // SAFETY: the caller guarantees `n_edges` readable elements per array.
            unsafe {
                (
                    std::slice::from_raw_parts(sources, n_edges),
                    std::slice::from_raw_parts(targets, n_edges),
                    (!weights.is_null()).then(|| std::slice::from_raw_parts(weights, n_edges)),
                )
            }
        };
        let mut edges = Vec::with_capacity(n_edges);
        for e in 0..n_edges {
            let (u, v) = (src[e], dst[e]);
            if u >= n || v >= n {
                return Err(failure(
                    CsStatus::InvalidArgument,
                    format!("edge {e} ({u}, {v}) leaves the vertex range 0..{n}"),
                ));
            }
            let weight = w.map_or(1.0, |w| w[e]);
            if !weight.is_finite() {
                return Err(failure(
                    CsStatus::InvalidArgument,
                    format!("edge {e} has non-finite weight {weight}"),
                ));
            }
            edges.push((u, v, weight));
        }
        let graph = Graph::from_weighted_edges(n, directed, &edges);
        // SAFETY: `out` was checked non-NULL.
        unsafe { *out = Box::into_raw(Box::new(CsGraph { graph })) };
        Ok(())
    })
}

/// Loads a graph file. With `weighted` false every edge weight is replaced by 1.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_load(
    path: *const c_char,
    format: CsFormat,
    directed: bool,
    weighted: bool,
    out: *mut *mut CsGraph,
) -> CsStatus {
    guard(|| {
        check_out(out)?;
        if path.is_null() {
            return Err(failure(CsStatus::NullArgument, "path is NULL"));
        }
        // SAFETY: the caller guarantees a NUL-terminated string.
        let path = unsafe { CStr::from_ptr(path) }
            .to_str()
            .map_err(|_| failure(CsStatus::InvalidArgument, "path is not valid UTF-8"))?;
        let format = match format {
            CsFormat::EdgeList => Format::EdgeList,
            CsFormat::Konect => Format::Konect,
        };
        let graph = load_graph(path, format, directed).map_err(from_error)?;
        let graph = if weighted {
            graph
        } else {
            graph.with_unit_weights()
        };
        // SAFETY: `out` was checked non-NULL.
        unsafe { *out = Box::into_raw(Box::new(CsGraph { graph })) };
        Ok(())
    })
}

/// Releases a graph. NULL is ignored.
///
/// # Safety
/// `g` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_free(g: *mut CsGraph) {
    if !g.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// Number of vertices, 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_vertex_count(g: *const CsGraph) -> usize {
    // SAFETY: forwarded caller guarantee.
    unsafe { g.as_ref() }.map_or(0, |h| h.graph.n_vertices())
}

/// Number of stored edges (undirected edges once, self-loops included), 0 for NULL.
///
/// # Safety
/// `g` must be NULL or a live graph handle.
#[no_mangle]
pub unsafe extern "C" fn cs_graph_edge_count(g: *const CsGraph) -> usize {
    // SAFETY: forwarded caller guarantee.
    unsafe { g.as_ref() }.map_or(0, |h| h.graph.n_edges())
}

/// Simple cycles of every length `1..=ell`. Weighted graphs yield sums of cycle weights.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_count_cycles(
    g: *const CsGraph,
    ell: usize,
    out: *mut *mut CsCounts,
) -> CsStatus {
    guard(|| {
        check_out(out)?;
        // SAFETY: forwarded caller guarantee.
        let graph = unsafe { graph_ref(g) }?;
        let counts = count_cycles(graph, ell).map_err(from_error)?;
        // SAFETY: `out` was checked non-NULL.
        unsafe { write_counts(out, counts.counts) };
        Ok(())
    })
}

/// Simple cycles through `root`, counted once per cycle, for lengths `1..=ell`.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_count_cycles_through(
    g: *const CsGraph,
    root: usize,
    ell: usize,
    out: *mut *mut CsCounts,
) -> CsStatus {
    guard(|| {
        check_out(out)?;
        // SAFETY: forwarded caller guarantee.
        let graph = unsafe { graph_ref(g) }?;
        let counts = count_cycles_through(graph, root, ell).map_err(from_error)?;
        // SAFETY: `out` was checked non-NULL.
        unsafe { write_counts(out, counts.counts) };
        Ok(())
    })
}

/// Simple paths from `from` to `to` (distinct vertices) of lengths `1..=ell`.
///
/// # Safety
/// `g` must be a live graph handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_count_paths(
    g: *const CsGraph,
    from: usize,
    to: usize,
    ell: usize,
    out: *mut *mut CsCounts,
) -> CsStatus {
    guard(|| {
        check_out(out)?;
        // SAFETY: forwarded caller guarantee.
        let graph = unsafe { graph_ref(g) }?;
        let counts = count_paths(graph, from, to, ell).map_err(from_error)?;
        // SAFETY: `out` was checked non-NULL.
        unsafe { write_counts(out, counts.counts) };
        Ok(())
    })
}

/// Largest length held (`ell`), 0 for NULL.
///
/// # Safety
/// `c` must be NULL or a live counts handle.
#[no_mangle]
pub unsafe extern "C" fn cs_counts_len(c: *const CsCounts) -> usize {
    // SAFETY: forwarded caller guarantee.
    unsafe { c.as_ref() }.map_or(0, |h| h.counts.len())
}

/// True when the counts are exact integers (integer-weighted input).
///
/// # Safety
/// `c` must be NULL or a live counts handle.
#[no_mangle]
pub unsafe extern "C" fn cs_counts_is_exact(c: *const CsCounts) -> bool {
    // SAFETY: forwarded caller guarantee.
    unsafe { c.as_ref() }.is_some_and(|h| h.counts.is_exact())
}

fn check_length(counts: &CountVector, k: usize) -> Result<usize, Failure> {
    if k == 0 || k > counts.len() {
        Err(failure(
            CsStatus::InvalidArgument,
            format!("length {k} outside 1..={}", counts.len()),
        ))
    } else {
        Ok(k - 1)
    }
}

/// Exact count of length `k` as a 64-bit integer. `OVERFLOW` when it does not fit,
/// `INVALID_ARGUMENT` for approximate counts.
///
/// # Safety
/// `c` must be a live counts handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_counts_get_i64(
    c: *const CsCounts,
    k: usize,
    out: *mut i64,
) -> CsStatus {
    guard(|| {
        check_out(out)?;
        // SAFETY: forwarded caller guarantee.
        let counts = unsafe { counts_ref(c) }?;
        let i = check_length(counts, k)?;
        let exact = counts.exact().ok_or_else(|| {
            failure(
                CsStatus::InvalidArgument,
                "counts are approximate; read them with cs_counts_get_f64",
            )
        })?;
        let value = i64::try_from(&exact[i]).map_err(|_| {
            failure(
                CsStatus::Overflow,
                format!("count {} does not fit in 64 bits", exact[i]),
            )
        })?;
        // SAFETY: `out` was checked non-NULL.
        unsafe { *out = value };
        Ok(())
    })
}

/// Count of length `k` as a double (rounded for large exact counts).
///
/// # Safety
/// `c` must be a live counts handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cs_counts_get_f64(
    c: *const CsCounts,
    k: usize,
    out: *mut f64,
) -> CsStatus {
    guard(|| {
        check_out(out)?;
        // SAFETY: forwarded caller guarantee.
        let counts = unsafe { counts_ref(c) }?;
        let i = check_length(counts, k)?;
        // SAFETY: `out` was checked non-NULL.
        unsafe { *out = counts.to_f64()[i] };
        Ok(())
    })
}

/// Count of length `k` as a newly allocated decimal string, released with
/// [`cs_string_free`]. NULL on error.
///
/// # Safety
/// `c` must be a live counts handle.
#[no_mangle]
pub unsafe extern "C" fn cs_counts_get_string(c: *const CsCounts, k: usize) -> *mut c_char {
    let mut result = ptr::null_mut();
    guard(|| {
        // SAFETY: forwarded caller guarantee.
        let counts = unsafe { counts_ref(c) }?;
        let i = check_length(counts, k)?;
        let text = CString::new(counts.to_strings().swap_remove(i)).expect("digits have no NUL");
        result = text.into_raw();
        Ok(())
    });
    result
}

/// Releases a counts handle. NULL is ignored.
///
/// # Safety
/// `c` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cs_counts_free(c: *mut CsCounts) {
    if !c.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { Box::from_raw(c) });
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be NULL or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cs_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: ownership returns from the caller.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Message for the most recent failure on this thread, or NULL. Valid until the next
/// failing call on the same thread.
#[no_mangle]
pub extern "C" fn cs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
