//! C ABI for the line-complex toolbox.
//!
//! Graphs are opaque handles created from the JSON graph format and freed by
//! the caller. Analyses return JSON reports through out-parameters; every
//! function reports a [`SpeiserStatus`], and a human-readable message for
//! the most recent failure on the calling thread is available through
//! `speiser_last_error`. All strings are UTF-8 and NUL-terminated; strings
//! returned by this library must be released with `speiser_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use speiser_core::extension::ExtensionPlan;
use speiser_core::graph::RotationGraph;
use speiser_core::labelling::{labelling_from_spec, LabellingSpec};
use speiser_core::map::DartId;

/// Result codes: `Ok` for success, `Verdict` when the analysis ran but the
/// answer is negative (infeasible, violated, inconsistent), and the rest for
/// contract failures.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpeiserStatus {
    Ok = 0,
    Verdict = 1,
    InvalidInput = 2,
    NullPointer = 3,
    InternalPanic = 4,
}

/// Opaque graph handle.
pub struct SpeiserGraph {
    inner: RotationGraph,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::new("").unwrap());
}

fn set_error(msg: &str) {
    let sanitized = msg.replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(sanitized).unwrap());
}

fn guard<F: FnOnce() -> SpeiserStatus>(f: F) -> SpeiserStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            SpeiserStatus::InternalPanic
        }
    }
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

fn out_string(out: *mut *mut c_char, text: String) {
    let c = CString::new(text.replace('\0', " ")).unwrap();
    unsafe { *out = c.into_raw() };
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn speiser_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread; valid until the next
/// failing call. Do not free.
#[no_mangle]
pub extern "C" fn speiser_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not have been freed before.
#[no_mangle]
pub unsafe extern "C" fn speiser_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a graph from its JSON description. Returns null on error (consult
/// `speiser_last_error`).
///
/// # Safety
/// `json` must point to a NUL-terminated UTF-8 string.
#[no_mangle]
pub unsafe extern "C" fn speiser_graph_parse(json: *const c_char) -> *mut SpeiserGraph {
    let mut handle: *mut SpeiserGraph = std::ptr::null_mut();
    let status = guard(|| {
        let Some(text) = read_str(json) else {
            set_error("null or non-UTF-8 input");
            return SpeiserStatus::NullPointer;
        };
        match speiser_core::graph::from_json(text) {
            Ok(g) => {
                handle = Box::into_raw(Box::new(SpeiserGraph { inner: g }));
                SpeiserStatus::Ok
            }
            Err(e) => {
                set_error(&e);
                SpeiserStatus::InvalidInput
            }
        }
    });
    let _ = status;
    handle
}

/// Frees a graph handle.
///
/// # Safety
/// `g` must come from `speiser_graph_parse` and not have been freed before.
#[no_mangle]
pub unsafe extern "C" fn speiser_graph_free(g: *mut SpeiserGraph) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Serializes the graph back to JSON (caller frees via `speiser_string_free`).
///
/// # Safety
/// `g` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn speiser_graph_to_json(
    g: *const SpeiserGraph,
    out: *mut *mut c_char,
) -> SpeiserStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer");
            return SpeiserStatus::NullPointer;
        }
        let graph = &(*g).inner;
        out_string(out, speiser_core::graph::to_json(graph));
        SpeiserStatus::Ok
    })
}

/// Admissible index range. `q_max` is set to -1 when infinite.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn speiser_q_bounds(
    g: *const SpeiserGraph,
    q_min: *mut u32,
    q_max: *mut i64,
) -> SpeiserStatus {
    guard(|| {
        if g.is_null() || q_min.is_null() || q_max.is_null() {
            set_error("null pointer");
            return SpeiserStatus::NullPointer;
        }
        match speiser_core::labelling::q_bounds(&(*g).inner) {
            Ok(b) => {
                *q_min = b.q_min;
                *q_max = b.q_max.map(|m| m as i64).unwrap_or(-1);
                SpeiserStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                SpeiserStatus::InvalidInput
            }
        }
    })
}

/// Solves the extension problem at index `q`. Writes the plan (or witness)
/// report as JSON; returns `Verdict` when infeasible.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn speiser_extend(
    g: *const SpeiserGraph,
    q: u32,
    out: *mut *mut c_char,
) -> SpeiserStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer");
            return SpeiserStatus::NullPointer;
        }
        match speiser_core::extension::solve_extension(&(*g).inner, q) {
            Ok(plan) => {
                let feasible = matches!(plan, ExtensionPlan::Feasible { .. });
                let spec = speiser_core::extension::plan_to_spec(&plan);
                out_string(out, serde_json::to_string_pretty(&spec).unwrap());
                if feasible {
                    SpeiserStatus::Ok
                } else {
                    SpeiserStatus::Verdict
                }
            }
            Err(e) => {
                set_error(&e.to_string());
                SpeiserStatus::InvalidInput
            }
        }
    })
}

/// Constructs the forced labelling at index `q` from seed dart 0 and writes
/// it as JSON; `Verdict` when the minimality condition fails and the descent
/// had to reduce the index.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn speiser_label(
    g: *const SpeiserGraph,
    q: u32,
    out: *mut *mut c_char,
) -> SpeiserStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer");
            return SpeiserStatus::NullPointer;
        }
        use speiser_core::labelling::ConstructOutcome::*;
        match speiser_core::labelling::construct_labelling(&(*g).inner, q, DartId(0)) {
            Ok(Consistent(l)) => {
                let spec = speiser_core::labelling::labelling_to_spec(&l);
                out_string(out, serde_json::to_string_pretty(&spec).unwrap());
                SpeiserStatus::Ok
            }
            Ok(Descended { initial, failing, q0, .. }) => {
                let spec = speiser_core::labelling::labelling_to_spec(&initial);
                out_string(
                    out,
                    serde_json::to_string_pretty(&serde_json::json!({
                        "labelling": spec,
                        "minimality_failures": failing,
                        "descended_q": q0,
                    }))
                    .unwrap(),
                );
                SpeiserStatus::Verdict
            }
            Ok(Stuck { failing, q_reached, .. }) => {
                out_string(
                    out,
                    serde_json::to_string_pretty(&serde_json::json!({
                        "minimality_failures": failing,
                        "descent_stuck_at": q_reached,
                    }))
                    .unwrap(),
                );
                SpeiserStatus::Verdict
            }
            Err(e) => {
                set_error(&e.to_string());
                SpeiserStatus::InvalidInput
            }
        }
    })
}

/// Verifies a labelling (JSON) against the graph; `Verdict` on violations.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn speiser_verify_labelling(
    g: *const SpeiserGraph,
    labels_json: *const c_char,
    out: *mut *mut c_char,
) -> SpeiserStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer");
            return SpeiserStatus::NullPointer;
        }
        let Some(text) = read_str(labels_json) else {
            set_error("null or non-UTF-8 labelling");
            return SpeiserStatus::NullPointer;
        };
        let graph = &(*g).inner;
        let spec: LabellingSpec = match serde_json::from_str(text) {
            Ok(s) => s,
            Err(e) => {
                set_error(&e.to_string());
                return SpeiserStatus::InvalidInput;
            }
        };
        let l = match labelling_from_spec(&spec, graph.map().dart_count()) {
            Ok(l) => l,
            Err(e) => {
                set_error(&e.to_string());
                return SpeiserStatus::InvalidInput;
            }
        };
        let verdict = speiser_core::labelling::verify_labelling(graph, &l);
        out_string(
            out,
            serde_json::to_string_pretty(&serde_json::json!({
                "ok": verdict.ok(),
                "minimality_failures": verdict.minimality_failures,
                "order_violations": verdict.order_violations.len(),
                "twin_violations": verdict.twin_violations.len(),
            }))
            .unwrap(),
        );
        if verdict.ok() {
            SpeiserStatus::Ok
        } else {
            SpeiserStatus::Verdict
        }
    })
}

/// Full decomposition report (nucleus, ends, divisor, tags) as JSON. Pass a
/// labelling as JSON or null to classify without labels.
///
/// # Safety
/// All pointers must be valid; `labels_json` may be null.
#[no_mangle]
pub unsafe extern "C" fn speiser_decompose(
    g: *const SpeiserGraph,
    labels_json: *const c_char,
    out: *mut *mut c_char,
) -> SpeiserStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer");
            return SpeiserStatus::NullPointer;
        }
        let graph = &(*g).inner;
        let labelling = if labels_json.is_null() {
            None
        } else {
            let Some(text) = read_str(labels_json) else {
                set_error("non-UTF-8 labelling");
                return SpeiserStatus::NullPointer;
            };
            let spec: LabellingSpec = match serde_json::from_str(text) {
                Ok(s) => s,
                Err(e) => {
                    set_error(&e.to_string());
                    return SpeiserStatus::InvalidInput;
                }
            };
            match labelling_from_spec(&spec, graph.map().dart_count()) {
                Ok(l) => Some(l),
                Err(e) => {
                    set_error(&e.to_string());
                    return SpeiserStatus::InvalidInput;
                }
            }
        };
        match speiser_core::decomposition::decompose(graph, labelling.as_ref()) {
            Ok(report) => {
                out_string(out, serde_json::to_string_pretty(&report).unwrap());
                SpeiserStatus::Ok
            }
            Err(e) => {
                set_error(&e.to_string());
                SpeiserStatus::InvalidInput
            }
        }
    })
}

/// Runs the three balance checks; `Verdict` when any is violated.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn speiser_balance(
    g: *const SpeiserGraph,
    max_cycle: usize,
    max_subgraph: usize,
    out: *mut *mut c_char,
) -> SpeiserStatus {
    guard(|| {
        if g.is_null() || out.is_null() {
            set_error("null pointer");
            return SpeiserStatus::NullPointer;
        }
        match speiser_core::balance::harness_row("graph", &(*g).inner, max_cycle, max_subgraph) {
            Ok(Some(row)) => {
                let balanced =
                    row.hall.balanced && row.koch_lei.balanced && row.tomasini.balanced;
                out_string(out, serde_json::to_string_pretty(&row).unwrap());
                if balanced {
                    SpeiserStatus::Ok
                } else {
                    SpeiserStatus::Verdict
                }
            }
            Ok(None) => {
                set_error("tessellation side degenerate; balance checks not runnable");
                SpeiserStatus::InvalidInput
            }
            Err(e) => {
                set_error(&e);
                SpeiserStatus::InvalidInput
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(json: &str) -> *mut SpeiserGraph {
        let c = CString::new(json).unwrap();
        unsafe { speiser_graph_parse(c.as_ptr()) }
    }

    fn take(out: *mut c_char) -> String {
        let s = unsafe { CStr::from_ptr(out) }.to_str().unwrap().to_string();
        unsafe { speiser_string_free(out) };
        s
    }

    const SQUARE: &str = r#"{
        "vertices": [
            {"id": 0, "kind": "circle", "rotation": [0, 7]},
            {"id": 1, "kind": "cross", "rotation": [2, 1]},
            {"id": 2, "kind": "circle", "rotation": [4, 3]},
            {"id": 3, "kind": "cross", "rotation": [6, 5]}
        ],
        "twins": [[0, 1], [2, 3], [4, 5], [6, 7]]
    }"#;

    #[test]
    fn parse_bounds_extend_roundtrip() {
        let g = parse(SQUARE);
        assert!(!g.is_null());
        let mut q_min = 0u32;
        let mut q_max = 0i64;
        let status = unsafe { speiser_q_bounds(g, &mut q_min, &mut q_max) };
        assert_eq!(status, SpeiserStatus::Ok);
        assert_eq!((q_min, q_max), (2, 2));
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { speiser_extend(g, 3, &mut out) };
        assert_eq!(status, SpeiserStatus::Ok);
        let report = take(out);
        assert!(report.contains("\"q\": 3"));
        unsafe { speiser_graph_free(g) };
    }

    #[test]
    fn bad_json_sets_error() {
        let g = parse("{broken");
        assert!(g.is_null());
        let msg = unsafe { CStr::from_ptr(speiser_last_error()) };
        assert!(!msg.to_str().unwrap().is_empty());
    }

    #[test]
    fn null_pointers_are_rejected() {
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { speiser_extend(std::ptr::null(), 3, &mut out) };
        assert_eq!(status, SpeiserStatus::NullPointer);
    }

    #[test]
    fn labelling_and_verification_through_the_abi() {
        let g = parse(SQUARE);
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { speiser_label(g, 2, &mut out) };
        assert_eq!(status, SpeiserStatus::Ok);
        let labels = take(out);
        let c = CString::new(labels).unwrap();
        let mut out2: *mut c_char = std::ptr::null_mut();
        let status = unsafe { speiser_verify_labelling(g, c.as_ptr(), &mut out2) };
        assert_eq!(status, SpeiserStatus::Ok);
        assert!(take(out2).contains("\"ok\": true"));
        unsafe { speiser_graph_free(g) };
    }

    #[test]
    fn decompose_and_balance_through_the_abi() {
        let g = parse(SQUARE);
        let mut out: *mut c_char = std::ptr::null_mut();
        let status = unsafe { speiser_decompose(g, std::ptr::null(), &mut out) };
        assert_eq!(status, SpeiserStatus::Ok);
        assert!(take(out).contains("\"tags\""));
        let mut out2: *mut c_char = std::ptr::null_mut();
        let status = unsafe { speiser_balance(g, 12, 8, &mut out2) };
        assert_eq!(status, SpeiserStatus::Ok);
        assert!(take(out2).contains("\"agree\": true"));
        unsafe { speiser_graph_free(g) };
    }
}
