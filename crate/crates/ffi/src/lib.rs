//! C interface to `tgbs`.
//!
//! Objects are opaque handles created by `tgbs_*` constructors and released
//! with the matching `*_free` function. Every fallible call returns a
//! [`TgbsStatus`]; on failure [`tgbs_last_error`] describes the problem.
//! Node subsets are passed as arrays of 0-based node indices.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use tgbs::embedding::{self, EmbeddedProblem};
use tgbs::graph::{self, Graph, NodeSubset};
use tgbs::sampler::{self, SampleBatch};
use tgbs::{classify, solvers, Error};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TgbsStatus {
    Ok = 0,
    InvalidParameter = 1,
    Io = 2,
    Format = 3,
    EmptyResult = 4,
    NoSignal = 5,
    Numeric = 6,
    EmptySeed = 7,
    NullPointer = 8,
    BufferTooSmall = 9,
    Panic = 10,
}

/// Opaque graph handle.
pub struct TgbsGraph(Graph);
/// Opaque embedded-problem handle.
pub struct TgbsProblem(EmbeddedProblem);
/// Opaque sample-batch handle.
pub struct TgbsSamples(SampleBatch);

/// Summary of a search; the subset itself is written to a caller buffer.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct TgbsSearchResult {
    pub score: f64,
    pub subset_len: usize,
    pub iterations: usize,
    pub pruned: bool,
    pub search_seconds: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> TgbsStatus {
    match e {
        Error::InvalidParameter(_) => TgbsStatus::InvalidParameter,
        Error::Io { .. } => TgbsStatus::Io,
        Error::Format(_) => TgbsStatus::Format,
        Error::EmptyResult(_) => TgbsStatus::EmptyResult,
        Error::NoSignal(_) => TgbsStatus::NoSignal,
        Error::Numeric(_) => TgbsStatus::Numeric,
        Error::EmptySeed(_) => TgbsStatus::EmptySeed,
    }
}

struct Fail(TgbsStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(TgbsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status plus message.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> TgbsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            TgbsStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            TgbsStatus::Panic
        }
    }
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn slice_mut<'a, T>(p: *mut T, len: usize, what: &str) -> Result<&'a mut [T], Fail> {
    if len == 0 {
        return Ok(&mut []);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts_mut(p, len))
}

unsafe fn get<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn c_path<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null("path"));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(TgbsStatus::InvalidParameter, "path is not valid UTF-8".into()))
}

unsafe fn put<T>(out: *mut *mut T, value: T) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null("output handle"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next `tgbs_*` call on the same thread.
#[no_mangle]
pub extern "C" fn tgbs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

// ---------------------------------------------------------------- graphs

/// Graph on `n` nodes with edges `(us[i], vs[i])`. `weights` may be null for
/// unit edge weights.
#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_from_edges(
    n: usize,
    us: *const usize,
    vs: *const usize,
    weights: *const f64,
    edge_count: usize,
    out: *mut *mut TgbsGraph,
) -> TgbsStatus {
    guard(|| {
        let us = slice(us, edge_count, "us")?;
        let vs = slice(vs, edge_count, "vs")?;
        let ws = if weights.is_null() { None } else { Some(slice(weights, edge_count, "weights")?) };
        let edges = (0..edge_count).map(|i| (us[i], vs[i], ws.map_or(1.0, |w| w[i])));
        put(out, TgbsGraph(Graph::from_edges(n, edges)?))
    })
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_erdos_renyi(n: usize, p: f64, seed: u64, out: *mut *mut TgbsGraph) -> TgbsStatus {
    guard(|| put(out, TgbsGraph(graph::erdos_renyi(n, p, seed)?)))
}

/// Planted dense block; if `planted` is non-null, the block's node indices
/// are written to it (capacity `n`) and their count to `planted_len`.
#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_planted(
    n: usize,
    p_dense: f64,
    p_sparse: f64,
    dense_fraction: f64,
    seed: u64,
    planted: *mut usize,
    planted_len: *mut usize,
    out: *mut *mut TgbsGraph,
) -> TgbsStatus {
    guard(|| {
        let (g, block) = graph::planted_graph(n, p_dense, p_sparse, dense_fraction, seed)?;
        if !planted.is_null() {
            slice_mut(planted, n, "planted")?[..block.len()].copy_from_slice(block.as_slice());
            if !planted_len.is_null() {
                *planted_len = block.len();
            }
        }
        put(out, TgbsGraph(g))
    })
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_read_edge_list(path: *const c_char, out: *mut *mut TgbsGraph) -> TgbsStatus {
    guard(|| put(out, TgbsGraph(graph::read_edge_list(c_path(path)?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_write_edge_list(g: *const TgbsGraph, path: *const c_char) -> TgbsStatus {
    guard(|| Ok(graph::write_edge_list(&get(g, "graph")?.0, c_path(path)?)?))
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_set_node_weights(g: *mut TgbsGraph, weights: *const f64, n: usize) -> TgbsStatus {
    guard(|| {
        let g = g.as_mut().ok_or_else(|| null("graph"))?;
        let w = slice(weights, n, "weights")?.to_vec();
        g.0 = g.0.clone().with_node_weights(w)?;
        Ok(())
    })
}

/// Replaces the node weights with uniform `[0, 1)` draws.
#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_assign_uniform_weights(g: *mut TgbsGraph, seed: u64) -> TgbsStatus {
    guard(|| {
        let g = g.as_mut().ok_or_else(|| null("graph"))?;
        g.0 = graph::assign_uniform_weights(&g.0, seed);
        Ok(())
    })
}

/// Node count, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_node_count(g: *const TgbsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.node_count())
}

/// Edge count, or 0 for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_edge_count(g: *const TgbsGraph) -> usize {
    g.as_ref().map_or(0, |g| g.0.edge_count())
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_density(
    g: *const TgbsGraph,
    nodes: *const usize,
    len: usize,
    out: *mut f64,
) -> TgbsStatus {
    guard(|| {
        let s = NodeSubset::new(slice(nodes, len, "nodes")?.iter().copied());
        let d = graph::density(&get(g, "graph")?.0, &s)?;
        *out.as_mut().ok_or_else(|| null("out"))? = d;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_graph_free(g: *mut TgbsGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

// ------------------------------------------------------------- embedding

#[no_mangle]
pub unsafe extern "C" fn tgbs_embed(
    g: *const TgbsGraph,
    mean_photon: f64,
    gamma: f64,
    out: *mut *mut TgbsProblem,
) -> TgbsStatus {
    guard(|| {
        let p = embedding::embed_graph(&get(g, "graph")?.0, mean_photon, gamma)?;
        put(out, TgbsProblem(p))
    })
}

/// Embeds the weight-aware encoding; the graph needs node weights.
#[no_mangle]
pub unsafe extern "C" fn tgbs_embed_weighted(
    g: *const TgbsGraph,
    alpha: f64,
    mean_photon: f64,
    gamma: f64,
    out: *mut *mut TgbsProblem,
) -> TgbsStatus {
    guard(|| {
        let p = embedding::embed_weighted(&get(g, "graph")?.0, alpha, mean_photon, gamma)?;
        put(out, TgbsProblem(p))
    })
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_problem_modes(p: *const TgbsProblem) -> usize {
    p.as_ref().map_or(0, |p| p.0.modes())
}

/// Σ sinh² r of the programmed squeezing, or NaN for a null handle.
#[no_mangle]
pub unsafe extern "C" fn tgbs_problem_mean_photon(p: *const TgbsProblem) -> f64 {
    p.as_ref().map_or(f64::NAN, |p| p.0.mean_photon_number())
}

/// Copies the `modes` squeezing strengths into `out`.
#[no_mangle]
pub unsafe extern "C" fn tgbs_problem_squeeze(p: *const TgbsProblem, out: *mut f64, capacity: usize) -> TgbsStatus {
    guard(|| {
        let r = get(p, "problem")?.0.squeeze();
        if capacity < r.len() {
            return Err(Fail(TgbsStatus::BufferTooSmall, format!("need {} entries", r.len())));
        }
        slice_mut(out, r.len(), "out")?.copy_from_slice(r);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_problem_write_json(p: *const TgbsProblem, path: *const c_char) -> TgbsStatus {
    guard(|| Ok(get(p, "problem")?.0.write_json(c_path(path)?)?))
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_problem_read_json(path: *const c_char, out: *mut *mut TgbsProblem) -> TgbsStatus {
    guard(|| put(out, TgbsProblem(EmbeddedProblem::read_json(c_path(path)?)?)))
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_problem_free(p: *mut TgbsProblem) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

// -------------------------------------------------------------- sampling

#[no_mangle]
pub unsafe extern "C" fn tgbs_sample(
    p: *const TgbsProblem,
    realizations: usize,
    seed: u64,
    out: *mut *mut TgbsSamples,
) -> TgbsStatus {
    guard(|| put(out, TgbsSamples(sampler::sample_graph(&get(p, "problem")?.0, realizations, seed)?)))
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_samples_realizations(s: *const TgbsSamples) -> usize {
    s.as_ref().map_or(0, |s| s.0.realizations())
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_samples_modes(s: *const TgbsSamples) -> usize {
    s.as_ref().map_or(0, |s| s.0.modes())
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_samples_mean_clicks(s: *const TgbsSamples) -> f64 {
    s.as_ref().map_or(f64::NAN, |s| s.0.mean_click_count())
}

/// Copies the row-major `realizations × modes` 0/1 matrix into `out`.
#[no_mangle]
pub unsafe extern "C" fn tgbs_samples_clicks(s: *const TgbsSamples, out: *mut u8, capacity: usize) -> TgbsStatus {
    guard(|| {
        let c = get(s, "samples")?.0.clicks();
        if capacity < c.len() {
            return Err(Fail(TgbsStatus::BufferTooSmall, format!("need {} entries", c.len())));
        }
        slice_mut(out, c.len(), "out")?.copy_from_slice(c);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_samples_free(s: *mut TgbsSamples) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

// --------------------------------------------------------------- solvers

unsafe fn finish(
    r: solvers::SearchResult,
    subset_out: *mut usize,
    capacity: usize,
    out: *mut TgbsSearchResult,
) -> Result<(), Fail> {
    let out = out.as_mut().ok_or_else(|| null("out"))?;
    if capacity < r.subset.len() {
        return Err(Fail(
            TgbsStatus::BufferTooSmall,
            format!("subset has {} nodes, buffer holds {capacity}", r.subset.len()),
        ));
    }
    slice_mut(subset_out, r.subset.len(), "subset_out")?.copy_from_slice(r.subset.as_slice());
    *out = TgbsSearchResult {
        score: r.score,
        subset_len: r.subset.len(),
        iterations: r.iterations,
        pruned: r.pruned,
        search_seconds: r.search_seconds,
    };
    Ok(())
}

unsafe fn seed_set(seed: *const usize, len: usize) -> Result<NodeSubset, Fail> {
    Ok(NodeSubset::new(slice(seed, len, "seed")?.iter().copied()))
}

/// Densest-k search from `seed`; the result subset goes to `subset_out`.
#[no_mangle]
pub unsafe extern "C" fn tgbs_densest_k(
    g: *const TgbsGraph,
    seed: *const usize,
    seed_len: usize,
    k: usize,
    subset_out: *mut usize,
    capacity: usize,
    out: *mut TgbsSearchResult,
) -> TgbsStatus {
    guard(|| {
        let r = solvers::densest_k_search(&get(g, "graph")?.0, &seed_set(seed, seed_len)?, k)?;
        finish(r, subset_out, capacity, out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_max_clique(
    g: *const TgbsGraph,
    seed: *const usize,
    seed_len: usize,
    cycles: usize,
    rng_seed: u64,
    subset_out: *mut usize,
    capacity: usize,
    out: *mut TgbsSearchResult,
) -> TgbsStatus {
    guard(|| {
        let r = solvers::max_clique_search(&get(g, "graph")?.0, &seed_set(seed, seed_len)?, cycles, rng_seed)?;
        finish(r, subset_out, capacity, out)
    })
}

#[no_mangle]
pub unsafe extern "C" fn tgbs_max_weighted_clique(
    g: *const TgbsGraph,
    seed: *const usize,
    seed_len: usize,
    cycles: usize,
    rng_seed: u64,
    subset_out: *mut usize,
    capacity: usize,
    out: *mut TgbsSearchResult,
) -> TgbsStatus {
    guard(|| {
        let r =
            solvers::max_weighted_clique_search(&get(g, "graph")?.0, &seed_set(seed, seed_len)?, cycles, rng_seed)?;
        finish(r, subset_out, capacity, out)
    })
}

/// Nodes that clicked in realization `row` of `s`, written to `nodes_out`.
#[no_mangle]
pub unsafe extern "C" fn tgbs_samples_row_nodes(
    s: *const TgbsSamples,
    row: usize,
    nodes_out: *mut usize,
    capacity: usize,
    len_out: *mut usize,
) -> TgbsStatus {
    guard(|| {
        let s = &get(s, "samples")?.0;
        if row >= s.realizations() {
            return Err(Fail(TgbsStatus::InvalidParameter, format!("row {row} out of range")));
        }
        let nodes = s.clicked_nodes(row);
        if capacity < nodes.len() {
            return Err(Fail(TgbsStatus::BufferTooSmall, format!("need {} entries", nodes.len())));
        }
        slice_mut(nodes_out, nodes.len(), "nodes_out")?.copy_from_slice(nodes.as_slice());
        *len_out.as_mut().ok_or_else(|| null("len_out"))? = nodes.len();
        Ok(())
    })
}

// -------------------------------------------------------------- classify

#[no_mangle]
pub unsafe extern "C" fn tgbs_balanced_accuracy(
    predicted: *const usize,
    actual: *const usize,
    len: usize,
    classes: usize,
    out: *mut f64,
) -> TgbsStatus {
    guard(|| {
        let b = classify::balanced_accuracy(slice(predicted, len, "predicted")?, slice(actual, len, "actual")?, classes)?;
        *out.as_mut().ok_or_else(|| null("out"))? = b;
        Ok(())
    })
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tgbs_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version string"),
    };
    VERSION.as_ptr()
}
