//! C ABI for alps-core.
//!
//! Objects are opaque handles created by `alps_*` constructors and released
//! with the matching `*_free` function. Every fallible call returns an
//! [`AlpsStatus`]; on failure a message is available from
//! [`alps_last_error_message`] on the same thread. Vertex, edge and item ids
//! are 0-based.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use alps_core::cover::{is_robust, is_with_predictions, vc_robust, vc_with_predictions, VertexWeightedGraph};
use alps_core::io::{load_stp, parse_stp, SteinerInstance};
use alps_core::knapsack::{knapsack_robust, knapsack_with_predictions, KnapsackInstance};
use alps_core::oracles::exact_steiner;
use alps_core::steiner::{alpha_search, alps, mehlhorn, tight_example, AlphaParam};
use alps_core::{Error, Graph, ItemSet};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlpsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Io = 4,
    Infeasible = 5,
    OracleGuard = 6,
    Panic = 7,
}

/// A Steiner tree instance.
pub struct AlpsInstance {
    inner: SteinerInstance,
}

/// A set of item ids with its weight under the original weights.
pub struct AlpsSolution {
    items: Vec<usize>,
    weight: f64,
    alpha: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure {
    status: AlpsStatus,
    message: String,
}

impl Failure {
    fn new(status: AlpsStatus, message: impl Into<String>) -> Self {
        Failure {
            status,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse { .. } => AlpsStatus::Parse,
            Error::File { .. } | Error::Io(_) | Error::Csv(_) => AlpsStatus::Io,
            Error::Infeasible(_) | Error::InfeasibleOutput => AlpsStatus::Infeasible,
            Error::OracleGuard(_) => AlpsStatus::OracleGuard,
            _ => AlpsStatus::InvalidArgument,
        };
        Failure::new(status, e.to_string())
    }
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior NULs removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn run(f: impl FnOnce() -> Result<(), Failure>) -> AlpsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AlpsStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(failure.message);
            failure.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            AlpsStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize, what: &str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Failure::new(AlpsStatus::NullPointer, format!("{what} is null")));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn reference<'a, T>(ptr: *const T, what: &str) -> Result<&'a T, Failure> {
    ptr.as_ref()
        .ok_or_else(|| Failure::new(AlpsStatus::NullPointer, format!("{what} is null")))
}

unsafe fn c_str<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if ptr.is_null() {
        return Err(Failure::new(AlpsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Failure::new(AlpsStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::new(AlpsStatus::NullPointer, "output pointer is null"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

fn item_set(ids: &[usize]) -> ItemSet {
    ids.iter().copied().collect()
}

fn solution(items: ItemSet, weight: f64) -> AlpsSolution {
    AlpsSolution {
        items: items.into_iter().collect(),
        weight,
        alpha: f64::NAN,
    }
}

unsafe fn edge_graph(n: usize, us: *const usize, vs: *const usize, ws: Option<*const f64>, m: usize) -> Result<Graph, Failure> {
    let us = slice(us, m, "edge tails")?;
    let vs = slice(vs, m, "edge heads")?;
    let ws = match ws {
        Some(ptr) => slice(ptr, m, "edge weights")?.to_vec(),
        None => vec![1.0; m],
    };
    let edges: Vec<_> = (0..m).map(|i| (us[i], vs[i], ws[i])).collect();
    Ok(Graph::new(n, edges)?)
}

/// Message of the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn alps_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses SteinLib `.stp` text.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alps_instance_parse_stp(text: *const c_char, out: *mut *mut AlpsInstance) -> AlpsStatus {
    run(|| {
        let inner = parse_stp(c_str(text, "text")?)?;
        put(out, AlpsInstance { inner })
    })
}

/// Reads an `.stp` file.
///
/// # Safety
/// `path` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alps_instance_load_stp(path: *const c_char, out: *mut *mut AlpsInstance) -> AlpsStatus {
    run(|| {
        let inner = load_stp(Path::new(c_str(path, "path")?))?;
        put(out, AlpsInstance { inner })
    })
}

/// Builds an instance from `m` edges `(us[i], vs[i], ws[i])` on `n`
/// vertices and `k` terminals.
///
/// # Safety
/// Arrays must hold at least `m` (resp. `k`) elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alps_instance_new(
    n: usize,
    us: *const usize,
    vs: *const usize,
    ws: *const f64,
    m: usize,
    terminals: *const usize,
    k: usize,
    out: *mut *mut AlpsInstance,
) -> AlpsStatus {
    run(|| {
        let graph = edge_graph(n, us, vs, Some(ws), m)?;
        let terms = item_set(slice(terminals, k, "terminals")?);
        let inner = SteinerInstance::new(graph, terms, "")?;
        put(out, AlpsInstance { inner })
    })
}

/// The tight ALPS instance and its prediction (as a solution handle whose
/// weight is the prediction's weight).
///
/// # Safety
/// Both output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn alps_tight_example(
    k: usize,
    eps: f64,
    beta: f64,
    out_instance: *mut *mut AlpsInstance,
    out_prediction: *mut *mut AlpsSolution,
) -> AlpsStatus {
    run(|| {
        if out_instance.is_null() || out_prediction.is_null() {
            return Err(Failure::new(AlpsStatus::NullPointer, "output pointer is null"));
        }
        let (inner, pred) = tight_example(k, eps, beta)?;
        let weight = inner.graph.weight_of(&pred);
        put(out_prediction, solution(pred, weight))?;
        put(out_instance, AlpsInstance { inner })
    })
}

/// # Safety
/// `instance` must come from an `alps_instance_*` constructor (or be NULL).
#[no_mangle]
pub unsafe extern "C" fn alps_instance_free(instance: *mut AlpsInstance) {
    if !instance.is_null() {
        drop(Box::from_raw(instance));
    }
}

/// # Safety
/// `instance` must be a live handle or NULL (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn alps_instance_vertex_count(instance: *const AlpsInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.graph.vertex_count())
}

/// # Safety
/// `instance` must be a live handle or NULL (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn alps_instance_edge_count(instance: *const AlpsInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.graph.edge_count())
}

/// # Safety
/// `instance` must be a live handle or NULL (which yields 0).
#[no_mangle]
pub unsafe extern "C" fn alps_instance_terminal_count(instance: *const AlpsInstance) -> usize {
    instance.as_ref().map_or(0, |i| i.inner.terminals.len())
}

/// Mehlhorn's 2-approximation.
///
/// # Safety
/// `instance` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alps_mehlhorn(instance: *const AlpsInstance, out: *mut *mut AlpsSolution) -> AlpsStatus {
    run(|| {
        let inst = &reference(instance, "instance")?.inner;
        let sol = mehlhorn(inst, &inst.graph.weights())?;
        put(out, solution(sol.edges, sol.weight_original))
    })
}

/// ALPS with predicted edge ids `pred[0..pred_len]`. Pass `INFINITY` for
/// `alpha = ∞`.
///
/// # Safety
/// `instance` must be a live handle, `pred` must hold `pred_len` ids and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alps_alps(
    instance: *const AlpsInstance,
    pred: *const usize,
    pred_len: usize,
    alpha: f64,
    out: *mut *mut AlpsSolution,
) -> AlpsStatus {
    run(|| {
        let inst = &reference(instance, "instance")?.inner;
        let predicted = item_set(slice(pred, pred_len, "prediction")?);
        let alpha = AlphaParam::new(alpha)?;
        let sol = alps(inst, &predicted, alpha)?;
        let mut out_sol = solution(sol.edges, sol.weight_original);
        out_sol.alpha = alpha.value();
        put(out, out_sol)
    })
}

/// ALPS over the geometric α grid of step `1 + epsilon`; the chosen α is
/// available from [`alps_solution_alpha`].
///
/// # Safety
/// As for [`alps_alps`].
#[no_mangle]
pub unsafe extern "C" fn alps_alpha_search(
    instance: *const AlpsInstance,
    pred: *const usize,
    pred_len: usize,
    epsilon: f64,
    out: *mut *mut AlpsSolution,
) -> AlpsStatus {
    run(|| {
        let inst = &reference(instance, "instance")?.inner;
        let predicted = item_set(slice(pred, pred_len, "prediction")?);
        let found = alpha_search(inst, &predicted, epsilon)?;
        let mut out_sol = solution(found.solution.edges, found.solution.weight_original);
        out_sol.alpha = found.alpha.value();
        put(out, out_sol)
    })
}

/// Exact Steiner tree for small instances.
///
/// # Safety
/// `instance` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alps_exact_steiner(instance: *const AlpsInstance, out: *mut *mut AlpsSolution) -> AlpsStatus {
    run(|| {
        let inst = &reference(instance, "instance")?.inner;
        let edges = exact_steiner(inst)?;
        let weight = inst.graph.weight_of(&edges);
        put(out, solution(edges, weight))
    })
}

unsafe fn vertex_graph(
    n: usize,
    us: *const usize,
    vs: *const usize,
    m: usize,
    weights: *const f64,
) -> Result<VertexWeightedGraph, Failure> {
    let graph = edge_graph(n, us, vs, None, m)?;
    if weights.is_null() {
        Ok(VertexWeightedGraph::unit(graph))
    } else {
        Ok(VertexWeightedGraph::new(graph, slice(weights, n, "vertex weights")?.to_vec())?)
    }
}

/// Vertex cover on `n` vertices and `m` edges `(us[i], vs[i])` with
/// predicted vertices `pred`. `weights` may be NULL for unit weights; a
/// nonzero `robust` also runs the plain algorithm and keeps the lighter cover.
///
/// # Safety
/// Arrays must hold the stated number of elements; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn alps_vc_with_predictions(
    n: usize,
    us: *const usize,
    vs: *const usize,
    m: usize,
    weights: *const f64,
    pred: *const usize,
    pred_len: usize,
    robust: c_int,
    out: *mut *mut AlpsSolution,
) -> AlpsStatus {
    run(|| {
        let g = vertex_graph(n, us, vs, m, weights)?;
        let predicted = item_set(slice(pred, pred_len, "prediction")?);
        let cover = if robust != 0 {
            vc_robust(&g, &predicted)?
        } else {
            vc_with_predictions(&g, &predicted)?
        };
        let weight = g.weight_of(&cover);
        put(out, solution(cover, weight))
    })
}

/// Independent set; arguments as for [`alps_vc_with_predictions`].
///
/// # Safety
/// As for [`alps_vc_with_predictions`].
#[no_mangle]
pub unsafe extern "C" fn alps_is_with_predictions(
    n: usize,
    us: *const usize,
    vs: *const usize,
    m: usize,
    weights: *const f64,
    pred: *const usize,
    pred_len: usize,
    robust: c_int,
    out: *mut *mut AlpsSolution,
) -> AlpsStatus {
    run(|| {
        let g = vertex_graph(n, us, vs, m, weights)?;
        let predicted = item_set(slice(pred, pred_len, "prediction")?);
        let set = if robust != 0 {
            is_robust(&g, &predicted)?
        } else {
            is_with_predictions(&g, &predicted)?
        };
        let weight = g.weight_of(&set);
        put(out, solution(set, weight))
    })
}

/// Knapsack packing from a predicted packing; the solution weight is the
/// packed worth.
///
/// # Safety
/// `sizes` and `worths` must hold `n` elements, `pred` `pred_len`; `out`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn alps_knapsack_with_predictions(
    n: usize,
    sizes: *const f64,
    worths: *const f64,
    capacity: f64,
    pred: *const usize,
    pred_len: usize,
    robust: c_int,
    out: *mut *mut AlpsSolution,
) -> AlpsStatus {
    run(|| {
        let inst = KnapsackInstance::new(
            slice(sizes, n, "sizes")?.to_vec(),
            slice(worths, n, "worths")?.to_vec(),
            capacity,
        )?;
        let predicted = item_set(slice(pred, pred_len, "prediction")?);
        let packing = if robust != 0 {
            knapsack_robust(&inst, &predicted)?
        } else {
            knapsack_with_predictions(&inst, &predicted)?
        };
        let worth = inst.worth_of(&packing);
        put(out, solution(packing, worth))
    })
}

/// Number of items in the solution (0 for NULL).
///
/// # Safety
/// `sol` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn alps_solution_len(sol: *const AlpsSolution) -> usize {
    sol.as_ref().map_or(0, |s| s.items.len())
}

/// Copies up to `capacity` item ids, ascending, into `buf`; returns the
/// number written.
///
/// # Safety
/// `sol` must be a live handle; `buf` must have room for `capacity` ids.
#[no_mangle]
pub unsafe extern "C" fn alps_solution_items(sol: *const AlpsSolution, buf: *mut usize, capacity: usize) -> usize {
    let Some(s) = sol.as_ref() else { return 0 };
    if buf.is_null() {
        return 0;
    }
    let count = s.items.len().min(capacity);
    ptr::copy_nonoverlapping(s.items.as_ptr(), buf, count);
    count
}

/// Weight (or worth) of the solution under the original weights; NaN for NULL.
///
/// # Safety
/// `sol` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn alps_solution_weight(sol: *const AlpsSolution) -> f64 {
    sol.as_ref().map_or(f64::NAN, |s| s.weight)
}

/// The α the solution was computed with, or NaN when not applicable.
///
/// # Safety
/// `sol` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn alps_solution_alpha(sol: *const AlpsSolution) -> f64 {
    sol.as_ref().map_or(f64::NAN, |s| s.alpha)
}

/// # Safety
/// `sol` must come from this library (or be NULL).
#[no_mangle]
pub unsafe extern "C" fn alps_solution_free(sol: *mut AlpsSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}
